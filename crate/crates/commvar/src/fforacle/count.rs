//! Point counts of commuting varieties over F_q and centralizer dimensions.
//!
//! The centralizer-sum method enumerates single matrices `X` and adds
//! `q^dim c(X)`; the direct method enumerates pairs. Both are exact, and the
//! test suites require them to agree wherever both fit in budget.

use super::gf::{mat, GfMatrix};
use super::{Budget, FqElement, OracleError, Support};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    CentralizerSum,
    Enumeration,
}

impl std::fmt::Display for CountMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CountMethod::CentralizerSum => "centralizer-sum",
            CountMethod::Enumeration => "enumeration",
        })
    }
}

/// Exact number of commuting pairs `(X, Y)` with both entries in the
/// support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCount {
    pub n: usize,
    pub q: u8,
    pub support: Support,
    #[serde(with = "super::biguint_string")]
    pub count: BigUint,
    pub method: CountMethod,
    /// Smallest centralizer dimension observed during a centralizer-sum run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_centralizer_dim: Option<usize>,
}

/// Builds the matrix of `Y -> [X, Y]` with `Y` running over the chosen
/// support basis; rows live in the span commutators can reach.
pub(crate) struct AdBuilder {
    n: usize,
    y_positions: Vec<(usize, usize)>,
    row_of: Vec<isize>,
    pub matrix: GfMatrix,
}

impl AdBuilder {
    pub fn new(n: usize, q: u8, x_support: Support, y_support: Support) -> Self {
        let y_positions = y_support.positions(n);
        let row_span = x_support.commutator_span(y_support);
        let row_positions = row_span.positions(n);
        let mut row_of = vec![-1isize; n * n];
        for (r, &(i, j)) in row_positions.iter().enumerate() {
            row_of[i * n + j] = r as isize;
        }
        let matrix = GfMatrix::zero(q, row_positions.len(), y_positions.len());
        Self {
            n,
            y_positions,
            row_of,
            matrix,
        }
    }

    pub fn cols(&self) -> usize {
        self.y_positions.len()
    }

    /// Fills the matrix for the given `X` (row-major `n x n` entries).
    /// `[X, E_ab]` touches row `(i, b)` with `X[i][a]` and row `(a, j)`
    /// with `-X[b][j]`, so each column costs `O(n)`.
    pub fn fill(&mut self, x: &[u8]) {
        let n = self.n;
        self.matrix = GfMatrix::zero(self.matrix.q, self.matrix.rows, self.matrix.cols);
        for (c, &(a, b)) in self.y_positions.iter().enumerate() {
            for i in 0..n {
                let r = self.row_of[i * n + b];
                if r >= 0 && x[i * n + a] != 0 {
                    self.matrix.add_at(r as usize, c, i32::from(x[i * n + a]));
                }
            }
            for j in 0..n {
                let r = self.row_of[a * n + j];
                if r >= 0 && x[b * n + j] != 0 {
                    self.matrix.add_at(r as usize, c, -i32::from(x[b * n + j]));
                }
            }
        }
    }

    pub fn kernel_dim(&mut self, x: &[u8]) -> usize {
        self.fill(x);
        self.cols() - self.matrix.rank()
    }

    pub fn kernel_basis(&mut self, x: &[u8]) -> Vec<Vec<u8>> {
        self.fill(x);
        self.matrix.kernel_basis()
    }

    pub fn y_positions(&self) -> &[(usize, usize)] {
        &self.y_positions
    }
}

/// Dimension over F_q of the centralizer of `X` inside the given support:
/// the kernel of `Y -> [X, Y]` computed by exact elimination.
pub fn centralizer_dim(x: &FqElement, support: Support) -> usize {
    let mut builder = AdBuilder::new(x.n(), x.q(), x.support(), support);
    builder.kernel_dim(x.entries())
}

fn pow_u128(q: u8, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(u128::from(q)))
}

/// A-priori work estimate for [`count_commuting_pairs`]; this is the figure
/// charged against the budget and reported as budget use.
pub fn count_cost(n: usize, q: u8, support: Support, method: CountMethod) -> u128 {
    let d = support.dim(n);
    let total = pow_u128(q, d);
    match method {
        CountMethod::CentralizerSum => {
            total.saturating_mul((d * d * d + 4 * n * d + d) as u128)
        }
        CountMethod::Enumeration => total
            .saturating_mul(total)
            .saturating_mul((2 * n * n * n) as u128),
    }
}

/// Lexicographic odometer over the support entries of an `n x n` matrix.
pub(crate) struct SupportOdometer {
    n: usize,
    q: u8,
    positions: Vec<(usize, usize)>,
    digits: Vec<u8>,
    pub entries: Vec<u8>,
    exhausted: bool,
}

impl SupportOdometer {
    pub fn start_at(n: usize, q: u8, support: Support, index: u64) -> Self {
        let positions = support.positions(n);
        let mut digits = vec![0u8; positions.len()];
        let mut rest = index;
        for k in (0..positions.len()).rev() {
            digits[k] = (rest % u64::from(q)) as u8;
            rest /= u64::from(q);
        }
        let mut entries = vec![0u8; n * n];
        for (k, &(i, j)) in positions.iter().enumerate() {
            entries[i * n + j] = digits[k];
        }
        Self {
            n,
            q,
            positions,
            digits,
            entries,
            exhausted: false,
        }
    }

    /// Advances to the next matrix; returns false after the last one.
    pub fn advance(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        let n = self.n;
        for k in (0..self.digits.len()).rev() {
            if self.digits[k] + 1 < self.q {
                self.digits[k] += 1;
                let (i, j) = self.positions[k];
                self.entries[i * n + j] = self.digits[k];
                return true;
            }
            self.digits[k] = 0;
            let (i, j) = self.positions[k];
            self.entries[i * n + j] = 0;
        }
        self.exhausted = true;
        false
    }
}

const CHUNK: u64 = 1 << 12;

/// Exact number of commuting pairs in `support x support` over F_q.
///
/// Refused with a work estimate when the enumeration would exceed the
/// budget. The centralizer-sum estimate is `q^d * (d^3 + 4nd)`; direct
/// enumeration costs `q^(2d) * 2n^3`.
pub fn count_commuting_pairs(
    n: usize,
    q: u8,
    support: Support,
    method: CountMethod,
    budget: Budget,
) -> Result<PointCount, OracleError> {
    super::gf::check_prime(q)?;
    if n == 0 {
        return Err(OracleError::BadSize);
    }
    let d = support.dim(n);
    let total = pow_u128(q, d);
    match method {
        CountMethod::CentralizerSum => {
            budget.charge(
                count_cost(n, q, support, method),
                &format!("centralizer-sum count n={n} q={q} support={support}"),
            )?;
            let total = total as u64;
            let chunks = total.div_ceil(CHUNK).max(1);
            let hist = (0..chunks)
                .into_par_iter()
                .map(|chunk| {
                    let lo = chunk * CHUNK;
                    let hi = (lo + CHUNK).min(total);
                    let mut local = vec![0u64; d + 1];
                    if lo >= hi {
                        return local;
                    }
                    let mut odo = SupportOdometer::start_at(n, q, support, lo);
                    let mut builder = AdBuilder::new(n, q, support, support);
                    let mut index = lo;
                    loop {
                        let dim = builder.kernel_dim(&odo.entries);
                        local[dim] += 1;
                        index += 1;
                        if index >= hi || !odo.advance() {
                            break;
                        }
                    }
                    local
                })
                .reduce(
                    || vec![0u64; d + 1],
                    |mut a, b| {
                        for (x, y) in a.iter_mut().zip(b) {
                            *x += y;
                        }
                        a
                    },
                );
            let mut count = BigUint::from(0u32);
            let mut min_dim = None;
            for (dim, &freq) in hist.iter().enumerate() {
                if freq == 0 {
                    continue;
                }
                if min_dim.is_none() {
                    min_dim = Some(dim);
                }
                count += BigUint::from(freq) * BigUint::from(q).pow(dim as u32);
            }
            debug_assert!(count >= BigUint::from(q).pow(d as u32));
            Ok(PointCount {
                n,
                q,
                support,
                count,
                method,
                min_centralizer_dim: min_dim,
            })
        }
        CountMethod::Enumeration => {
            budget.charge(
                count_cost(n, q, support, method),
                &format!("pair enumeration count n={n} q={q} support={support}"),
            )?;
            let total = total as u64;
            // the pair budget bounds q^d by about 2^17, so materializing
            // every support matrix is cheap
            let mats: Vec<Vec<u8>> = {
                let mut out = Vec::with_capacity(total as usize);
                let mut odo = SupportOdometer::start_at(n, q, support, 0);
                loop {
                    out.push(odo.entries.clone());
                    if !odo.advance() {
                        break;
                    }
                }
                out
            };
            let pairs: u64 = mats
                .par_iter()
                .map(|x| {
                    mats.iter()
                        .filter(|y| mat::is_zero(&mat::commutator(x, y, n, q)))
                        .count() as u64
                })
                .sum();
            Ok(PointCount {
                n,
                q,
                support,
                count: BigUint::from(pairs),
                method,
                min_centralizer_dim: None,
            })
        }
    }
}

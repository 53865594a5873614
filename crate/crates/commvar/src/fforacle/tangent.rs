//! Tangent spaces of the commuting scheme and smoothness sampling.
//!
//! At a commuting pair `(X, Y)` the tangent space of the commuting scheme is
//! the solution space of the linear system `[X, Z] + [W, Y] = 0` over pairs
//! `(W, Z)` in the support. When the commuting variety of the Borel is
//! irreducible, pairs with a regular first coordinate are smooth points, so
//! their tangent dimension is exactly `dim b + n`; the samplers check this
//! and report every violation.

use super::count::{centralizer_dim, AdBuilder, SupportOdometer};
use super::gf::GfMatrix;
use super::{Budget, FqElement, OracleError, Support};
use crate::classifier::{classify_borel_irreducible, Status};
use crate::modtables::ModalityTable;
use crate::rootsys::{Family, ReductiveShape, SimpleType};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

/// Dimension of `{(W, Z) : [X, Z] + [W, Y] = 0}` with `W, Z` in the common
/// support of `X` and `Y`. Rejects non-commuting input.
pub fn tangent_dim(x: &FqElement, y: &FqElement) -> Result<usize, OracleError> {
    if x.n() != y.n() || x.q() != y.q() || x.support() != y.support() {
        return Err(OracleError::Mismatch);
    }
    if !x.commutes_with(y)? {
        return Err(OracleError::NotCommuting);
    }
    let n = x.n();
    let q = x.q();
    let support = x.support();
    let d = support.dim(n);
    let span = support.commutator_span(support);
    let row_positions = span.positions(n);
    let mut row_of = vec![-1isize; n * n];
    for (r, &(i, j)) in row_positions.iter().enumerate() {
        row_of[i * n + j] = r as isize;
    }
    let mut m = GfMatrix::zero(q, row_positions.len(), 2 * d);
    let positions = support.positions(n);
    for (c, &(a, b)) in positions.iter().enumerate() {
        // W block: [E_ab, Y] touches row (a, j) with Y[b][j] and row (i, b)
        // with -Y[i][a]
        for j in 0..n {
            let r = row_of[a * n + j];
            if r >= 0 {
                m.add_at(r as usize, c, i32::from(y.at(b, j)));
            }
        }
        for i in 0..n {
            let r = row_of[i * n + b];
            if r >= 0 {
                m.add_at(r as usize, c, -i32::from(y.at(i, a)));
            }
        }
        // Z block: [X, E_ab] touches row (i, b) with X[i][a] and row (a, j)
        // with -X[b][j]
        for i in 0..n {
            let r = row_of[i * n + b];
            if r >= 0 {
                m.add_at(r as usize, d + c, i32::from(x.at(i, a)));
            }
        }
        for j in 0..n {
            let r = row_of[a * n + j];
            if r >= 0 {
                m.add_at(r as usize, d + c, -i32::from(x.at(b, j)));
            }
        }
    }
    Ok(2 * d - m.rank())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SmoothnessMode {
    Sampled { trials: u64, seed: u64 },
    Exhaustive { regular_elements: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessViolation {
    pub x_index: u64,
    pub y_index: u64,
    pub tangent_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub n: usize,
    pub q: u8,
    pub expected_dim: usize,
    pub mode: SmoothnessMode,
    pub pairs_checked: u64,
    pub violations: Vec<SmoothnessViolation>,
}

fn check_precondition(n: usize) -> Result<(), OracleError> {
    if n == 1 {
        return Ok(());
    }
    let ty = SimpleType::new(Family::A, (n - 1) as u16)
        .map_err(|_| OracleError::SmoothnessPrecondition(n))?;
    let verdict =
        classify_borel_irreducible(&ReductiveShape::simple(ty), &ModalityTable::builtin());
    if verdict.status == Status::Irreducible {
        Ok(())
    } else {
        Err(OracleError::SmoothnessPrecondition(n))
    }
}

fn expected_tangent_dim(n: usize) -> usize {
    Support::Borel.dim(n) + n
}

fn random_regular(n: usize, q: u8, rng: &mut ChaCha20Rng) -> Vec<u8> {
    let diagonal_family = usize::from(q) >= n && rng.gen_bool(0.5);
    let mut x = vec![0u8; n * n];
    if diagonal_family {
        // distinct diagonal residues: partial Fisher-Yates over 0..q
        let mut pool: Vec<u8> = (0..q).collect();
        for i in 0..n {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
            x[i * n + i] = pool[i];
        }
        for i in 0..n {
            for j in i + 1..n {
                x[i * n + j] = rng.gen_range(0..q);
            }
        }
    } else {
        // regular nilpotent: nonzero superdiagonal, free above it
        for i in 0..n - 1 {
            x[i * n + i + 1] = rng.gen_range(1..q);
        }
        for i in 0..n {
            for j in i + 2..n {
                x[i * n + j] = rng.gen_range(0..q);
            }
        }
    }
    x
}

/// Seeded random sampling of commuting pairs with a regular first
/// coordinate (distinct diagonal entries or regular nilpotent); each pair
/// must be a smooth point, i.e. have tangent dimension exactly
/// `dim b + n`.
pub fn smoothness_sample(
    n: usize,
    q: u8,
    trials: u64,
    seed: u64,
) -> Result<SmoothnessReport, OracleError> {
    super::gf::check_prime(q)?;
    if n == 0 {
        return Err(OracleError::BadSize);
    }
    check_precondition(n)?;
    let expected = expected_tangent_dim(n);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut builder = AdBuilder::new(n, q, Support::Borel, Support::Borel);
    for _ in 0..trials {
        let x_entries = if n == 1 {
            vec![rng.gen_range(0..q)]
        } else {
            random_regular(n, q, &mut rng)
        };
        let x = FqElement::new(n, q, Support::Borel, x_entries)?;
        debug_assert_eq!(centralizer_dim(&x, Support::Full), n, "sampled X regular");
        let basis = builder.kernel_basis(x.entries());
        let mut y_entries = vec![0u8; n * n];
        for vector in &basis {
            let coeff = u16::from(rng.gen_range(0..q));
            if coeff == 0 {
                continue;
            }
            for (k, &(i, j)) in builder.y_positions().iter().enumerate() {
                let v = u16::from(y_entries[i * n + j]) + coeff * u16::from(vector[k]);
                y_entries[i * n + j] = (v % u16::from(q)) as u8;
            }
        }
        let y = FqElement::new(n, q, Support::Borel, y_entries)?;
        let dim = tangent_dim(&x, &y)?;
        if dim != expected {
            violations.push(SmoothnessViolation {
                x_index: x.index(),
                y_index: y.index(),
                tangent_dim: dim,
            });
        }
    }
    Ok(SmoothnessReport {
        n,
        q,
        expected_dim: expected,
        mode: SmoothnessMode::Sampled { trials, seed },
        pairs_checked: trials,
        violations,
    })
}

/// Exhaustive check over every commuting Borel pair whose first coordinate
/// is regular in `gl_n`.
/// A-priori work estimate for [`smoothness_exhaustive`]: one elimination per
/// support element to test regularity, then a tangent system per pair; for
/// regular `X` the centralizer has dimension `n`, bounding the pairs by
/// `q^(d + n)`.
pub fn exhaustive_smoothness_cost(n: usize, q: u8) -> u128 {
    let d = Support::Borel.dim(n);
    let scan = (0..d).fold(1u128, |a, _| a.saturating_mul(u128::from(q)));
    let pairs = (0..d + n).fold(1u128, |a, _| a.saturating_mul(u128::from(q)));
    scan.saturating_mul((d * d * d) as u128)
        .saturating_add(pairs.saturating_mul((8 * d * d * d) as u128))
}

/// A-priori work estimate for [`smoothness_sample`].
pub fn sampled_smoothness_cost(n: usize, trials: u64) -> u128 {
    let d = Support::Borel.dim(n);
    u128::from(trials).saturating_mul((8 * d * d * d) as u128)
}

pub fn smoothness_exhaustive(
    n: usize,
    q: u8,
    budget: Budget,
) -> Result<SmoothnessReport, OracleError> {
    super::gf::check_prime(q)?;
    if n == 0 {
        return Err(OracleError::BadSize);
    }
    check_precondition(n)?;
    budget.charge(
        exhaustive_smoothness_cost(n, q),
        &format!("exhaustive smoothness n={n} q={q}"),
    )?;
    let expected = expected_tangent_dim(n);
    let mut builder = AdBuilder::new(n, q, Support::Borel, Support::Borel);
    let mut violations = Vec::new();
    let mut pairs = 0u64;
    let mut regulars = 0u64;
    let mut odo = SupportOdometer::start_at(n, q, Support::Borel, 0);
    loop {
        let x = FqElement::new(n, q, Support::Borel, odo.entries.clone())?;
        if centralizer_dim(&x, Support::Full) == n {
            regulars += 1;
            let basis = builder.kernel_basis(x.entries());
            // every Y in the centralizer: all coefficient vectors
            let k = basis.len();
            let mut coeffs = vec![0u8; k];
            loop {
                let mut y_entries = vec![0u8; n * n];
                for (vector, &c) in basis.iter().zip(&coeffs) {
                    if c == 0 {
                        continue;
                    }
                    for (pos, &(i, j)) in builder.y_positions().iter().enumerate() {
                        let v =
                            u16::from(y_entries[i * n + j]) + u16::from(c) * u16::from(vector[pos]);
                        y_entries[i * n + j] = (v % u16::from(q)) as u8;
                    }
                }
                let y = FqElement::new(n, q, Support::Borel, y_entries)?;
                pairs += 1;
                let dim = tangent_dim(&x, &y)?;
                if dim != expected {
                    violations.push(SmoothnessViolation {
                        x_index: x.index(),
                        y_index: y.index(),
                        tangent_dim: dim,
                    });
                }
                // advance coefficient odometer
                let mut pos = k;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    if coeffs[pos] + 1 < q {
                        coeffs[pos] += 1;
                        break;
                    }
                    coeffs[pos] = 0;
                }
                if coeffs.iter().all(|&c| c == 0) {
                    break;
                }
            }
        }
        if !odo.advance() {
            break;
        }
    }
    Ok(SmoothnessReport {
        n,
        q,
        expected_dim: expected,
        mode: SmoothnessMode::Exhaustive {
            regular_elements: regulars,
        },
        pairs_checked: pairs,
        violations,
    })
}

/// A commuting pair that is a singular point of the commuting scheme: both
/// coordinates lie in the hyperplane of the nilradical missing the first
/// simple root line, which forces every tangent space through them to be
/// too big. Needs `n >= 3`.
pub fn singular_witness(n: usize, q: u8) -> Result<(FqElement, FqElement), OracleError> {
    super::gf::check_prime(q)?;
    if n < 3 {
        return Err(OracleError::WitnessSize(n));
    }
    let mut x = vec![0u8; n * n];
    x[n + 2] = 1; // E_23
    let mut y = vec![0u8; n * n];
    y[2] = 1; // E_13
    Ok((
        FqElement::new(n, q, Support::Borel, x)?,
        FqElement::new(n, q, Support::Borel, y)?,
    ))
}

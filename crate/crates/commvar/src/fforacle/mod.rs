//! Brute-force finite-field verification engine for `gl_n` at small rank.
//!
//! Everything here works over a prime field F_q with q <= 13 and one of
//! three supports inside `gl_n`: the full matrix algebra, the Borel (upper
//! triangular) subalgebra, or its nilradical (strictly upper triangular).
//! Matrices are enumerated lexicographically over their support entries, the
//! first support position being the most significant digit, so element
//! indices, canonical representatives and report output are all stable.
//!
//! Every operation carries a hard budget of elementary field operations
//! (default `2^34`); work that would exceed it is refused up front with the
//! estimated cost. Parallel paths reduce through associative,
//! order-independent accumulators, so reports are identical for any thread
//! count.

pub mod census;
pub mod count;
pub mod fit;
pub mod gf;
pub mod tangent;

pub use census::{
    burnside_orbit_count, census_cost, empirical_modality, orbit_census, orbit_census_on,
    EmpiricalModality, GroupKind, OrbitCensus, OrbitRecord,
};
pub use count::{centralizer_dim, count_commuting_pairs, count_cost, CountMethod, PointCount};
pub use fit::{fit_degree, FitReport, FitStatus};
pub use tangent::{
    exhaustive_smoothness_cost, sampled_smoothness_cost, singular_witness, smoothness_exhaustive,
    smoothness_sample, tangent_dim, SmoothnessMode, SmoothnessReport,
};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("q = {0} is not a supported prime (use 2, 3, 5, 7, 11 or 13)")]
    BadPrime(u8),
    #[error("matrix size must be at least 1")]
    BadSize,
    #[error("entry at ({row}, {col}) lies outside the declared {support} support")]
    OffSupport {
        row: usize,
        col: usize,
        support: Support,
    },
    #[error("entry {value} at ({row}, {col}) is not a residue mod {q}")]
    BadResidue {
        row: usize,
        col: usize,
        value: u8,
        q: u8,
    },
    #[error(
        "budget refusal: {operation} needs an estimated {required} elementary operations, \
         limit is {limit}"
    )]
    Budget {
        operation: String,
        required: u128,
        limit: u64,
    },
    #[error("operands have mismatched size, field or support")]
    Mismatch,
    #[error("inputs do not commute")]
    NotCommuting,
    #[error("need at least {need} sample points, got {got}")]
    NotEnoughSamples { need: usize, got: usize },
    #[error("smoothness sampling presumes the ambient Borel commuting variety irreducible; n = {0} is out of range")]
    SmoothnessPrecondition(usize),
    #[error("singular witness construction needs n >= 3, got {0}")]
    WitnessSize(usize),
    #[error("sampling over F_{q} cannot produce the requested family for n = {n}")]
    BadFamily { n: usize, q: u8 },
}

/// Where the matrix entries live inside `gl_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Support {
    Full,
    Borel,
    Nilradical,
}

impl Support {
    /// Support positions in row-major order; this order fixes the
    /// lexicographic enumeration of matrices.
    pub fn positions(self, n: usize) -> Vec<(usize, usize)> {
        let keep = |i: usize, j: usize| match self {
            Support::Full => true,
            Support::Borel => i <= j,
            Support::Nilradical => i < j,
        };
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if keep(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn dim(self, n: usize) -> usize {
        match self {
            Support::Full => n * n,
            Support::Borel => n * (n + 1) / 2,
            Support::Nilradical => n * (n - 1) / 2,
        }
    }

    pub fn contains(self, i: usize, j: usize) -> bool {
        match self {
            Support::Full => true,
            Support::Borel => i <= j,
            Support::Nilradical => i < j,
        }
    }

    /// The span that commutators of two supported matrices land in: the
    /// commutator of upper triangular matrices has zero diagonal.
    pub(crate) fn commutator_span(self, other: Support) -> Support {
        if self == Support::Full || other == Support::Full {
            Support::Full
        } else {
            Support::Nilradical
        }
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Support::Full => "full",
            Support::Borel => "borel",
            Support::Nilradical => "nilradical",
        })
    }
}

impl FromStr for Support {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "full" => Ok(Support::Full),
            "borel" => Ok(Support::Borel),
            "nilradical" => Ok(Support::Nilradical),
            other => Err(format!(
                "unknown support `{other}` (expected full, borel or nilradical)"
            )),
        }
    }
}

/// An `n x n` matrix over F_q supported on `support`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FqElement {
    n: usize,
    q: u8,
    support: Support,
    /// Row-major `n * n` residues; entries off the support are zero.
    entries: Vec<u8>,
}

impl FqElement {
    pub fn new(n: usize, q: u8, support: Support, entries: Vec<u8>) -> Result<Self, OracleError> {
        gf::check_prime(q)?;
        if n == 0 {
            return Err(OracleError::BadSize);
        }
        assert_eq!(entries.len(), n * n, "entries must be an n x n grid");
        for i in 0..n {
            for j in 0..n {
                let v = entries[i * n + j];
                if v >= q {
                    return Err(OracleError::BadResidue {
                        row: i,
                        col: j,
                        value: v,
                        q,
                    });
                }
                if v != 0 && !support.contains(i, j) {
                    return Err(OracleError::OffSupport {
                        row: i,
                        col: j,
                        support,
                    });
                }
            }
        }
        Ok(Self {
            n,
            q,
            support,
            entries,
        })
    }

    pub fn zero(n: usize, q: u8, support: Support) -> Result<Self, OracleError> {
        Self::new(n, q, support, vec![0; n * n])
    }

    /// Decodes the matrix with the given lexicographic index.
    pub fn from_index(
        n: usize,
        q: u8,
        support: Support,
        index: u64,
    ) -> Result<Self, OracleError> {
        gf::check_prime(q)?;
        let positions = support.positions(n);
        let mut entries = vec![0u8; n * n];
        let mut rest = index;
        for &(i, j) in positions.iter().rev() {
            entries[i * n + j] = (rest % u64::from(q)) as u8;
            rest /= u64::from(q);
        }
        Self::new(n, q, support, entries)
    }

    pub fn index(&self) -> u64 {
        self.support
            .positions(self.n)
            .iter()
            .fold(0u64, |acc, &(i, j)| {
                acc * u64::from(self.q) + u64::from(self.entries[i * self.n + j])
            })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn at(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    pub fn commutes_with(&self, other: &FqElement) -> Result<bool, OracleError> {
        if self.n != other.n || self.q != other.q {
            return Err(OracleError::Mismatch);
        }
        Ok(gf::mat::is_zero(&gf::mat::commutator(
            &self.entries,
            &other.entries,
            self.n,
            self.q,
        )))
    }
}

pub const DEFAULT_BUDGET: u64 = 1 << 34;

/// Hard cap on elementary field operations per command. Estimates are
/// deterministic functions of the parameters, so reported budget use never
/// depends on threading or timing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub limit: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            limit: DEFAULT_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Self { limit }
    }

    /// Checks an estimated cost against the limit; on success returns the
    /// estimate (saturated to u64) for reporting.
    pub fn charge(&self, estimate: u128, operation: &str) -> Result<u64, OracleError> {
        if estimate > u128::from(self.limit) {
            return Err(OracleError::Budget {
                operation: operation.to_string(),
                required: estimate,
                limit: self.limit,
            });
        }
        Ok(estimate as u64)
    }
}

/// Serialize arbitrary-precision counts as decimal strings.
pub(crate) mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

//! Orbit censuses of the unitriangular group U(q) and the Borel group B(q)
//! of GL_n acting by conjugation, and the empirical modality read off the
//! degree of the orbit-count polynomial.
//!
//! Orbits are computed by breadth-first closure under the simple-root
//! subgroup generators `I + c E_{i,i+1}` (all `c` in F_q^x) plus, for B, one
//! diagonal generator per position carrying a primitive root. Seeds are
//! scanned in lexicographic order, so the seed of each orbit is its
//! lexicographically least element and the census output is canonical.
//! Frontier expansion runs in parallel; elements are claimed exactly once
//! through atomic bit-set updates, which keeps sizes and representatives
//! independent of the thread count.

use super::count::SupportOdometer;
use super::fit::{fit_degree, FitReport, FitStatus};
use super::gf::{mat, primitive_root};
use super::{Budget, OracleError, Support};
use crate::modtables::{ModalityTable, ModalityValue};
use crate::rootsys::{Family, SimpleType};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicU64, Ordering};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    U,
    B,
}

impl std::fmt::Display for GroupKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GroupKind::U => "U",
            GroupKind::B => "B",
        })
    }
}

impl std::str::FromStr for GroupKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "U" | "u" => Ok(GroupKind::U),
            "B" | "b" => Ok(GroupKind::B),
            other => Err(format!("unknown group `{other}` (expected U or B)")),
        }
    }
}

/// One orbit: lexicographically least element (as enumeration index) and
/// size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub representative: u64,
    pub size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCensus {
    pub group: GroupKind,
    pub n: usize,
    pub q: u8,
    pub support: Support,
    pub orbit_count: u64,
    /// Multiset of orbit sizes, ascending.
    pub orbit_sizes: Vec<u64>,
    /// Orbits in discovery order (= lexicographic order of representatives).
    pub orbits: Vec<OrbitRecord>,
}

impl OrbitCensus {
    /// `|B(q)| = (q-1)^n q^dim(u)` resp. `|U(q)| = q^dim(u)`.
    pub fn group_order(&self) -> u64 {
        let du = Support::Nilradical.dim(self.n) as u32;
        let unipotent = u64::from(self.q).pow(du);
        match self.group {
            GroupKind::U => unipotent,
            GroupKind::B => u64::from(self.q - 1).pow(self.n as u32) * unipotent,
        }
    }
}

/// Sparse conjugation generators.
#[derive(Debug, Clone, Copy)]
enum Generator {
    /// `I + c E_{i,i+1}`
    Root { i: usize, c: u8 },
    /// `diag(1, .., t, .., 1)` with `t` in position `i`
    Torus { i: usize, t: u8 },
}

impl Generator {
    /// Applies `M -> g M g^{-1}` in `O(n)` reads and writes.
    fn apply(self, m: &[u8], n: usize, q: u8) -> Vec<u8> {
        let q16 = u16::from(q);
        let mut out = m.to_vec();
        match self {
            Generator::Root { i, c } => {
                let c16 = u16::from(c);
                // row i gains c * row(i+1)
                for s in 0..n {
                    let v = u16::from(out[i * n + s]) + c16 * u16::from(m[(i + 1) * n + s]) % q16;
                    out[i * n + s] = (v % q16) as u8;
                }
                // column i+1 loses c * column(i), reading original entries
                for r in 0..n {
                    let sub = c16 * u16::from(m[r * n + i]) % q16;
                    let v = u16::from(out[r * n + i + 1]) + q16 - sub;
                    out[r * n + i + 1] = (v % q16) as u8;
                }
                // cross term at (i, i+1)
                let cross = c16 * c16 % q16 * u16::from(m[(i + 1) * n + i]) % q16;
                let v = u16::from(out[i * n + i + 1]) + q16 - cross;
                out[i * n + i + 1] = (v % q16) as u8;
            }
            Generator::Torus { i, t } => {
                let t16 = u16::from(t);
                let tinv = u16::from(super::gf::inv_mod(t, q));
                for s in 0..n {
                    if s != i {
                        out[i * n + s] = (u16::from(out[i * n + s]) * t16 % q16) as u8;
                        out[s * n + i] = (u16::from(out[s * n + i]) * tinv % q16) as u8;
                    }
                }
            }
        }
        out
    }
}

/// A-priori work estimate for [`orbit_census_on`].
pub fn census_cost(group: GroupKind, n: usize, q: u8, support: Support) -> u128 {
    let d = support.dim(n);
    let total = (0..d).fold(1u128, |a, _| a.saturating_mul(u128::from(q)));
    let gens = generators(group, n, q).len();
    total.saturating_mul((gens * 4 * n + d) as u128)
}

fn generators(group: GroupKind, n: usize, q: u8) -> Vec<Generator> {
    let mut gens = Vec::new();
    for i in 0..n.saturating_sub(1) {
        for c in 1..q {
            gens.push(Generator::Root { i, c });
        }
    }
    if group == GroupKind::B && q > 2 {
        let t = primitive_root(q);
        for i in 0..n {
            gens.push(Generator::Torus { i, t });
        }
    }
    gens
}

struct AtomicBitset {
    words: Vec<AtomicU64>,
}

impl AtomicBitset {
    fn new(len: u64) -> Self {
        let words = (0..len.div_ceil(64))
            .map(|_| AtomicU64::new(0))
            .collect();
        Self { words }
    }

    /// Claims a bit; true when this call flipped it.
    fn claim(&self, i: u64) -> bool {
        let word = (i / 64) as usize;
        let bit = 1u64 << (i % 64);
        self.words[word].fetch_or(bit, Ordering::Relaxed) & bit == 0
    }

    fn get(&self, i: u64) -> bool {
        let word = (i / 64) as usize;
        let bit = 1u64 << (i % 64);
        self.words[word].load(Ordering::Relaxed) & bit != 0
    }
}

fn encode(m: &[u8], n: usize, q: u8, positions: &[(usize, usize)]) -> u64 {
    positions
        .iter()
        .fold(0u64, |acc, &(i, j)| acc * u64::from(q) + u64::from(m[i * n + j]))
}

/// Census of the adjoint action on the nilradical.
pub fn orbit_census(
    group: GroupKind,
    n: usize,
    q: u8,
    budget: Budget,
) -> Result<OrbitCensus, OracleError> {
    orbit_census_on(group, n, q, Support::Nilradical, budget)
}

/// Census of the adjoint action on an arbitrary conjugation-stable support
/// (the Borel support realizes the action of B on b).
pub fn orbit_census_on(
    group: GroupKind,
    n: usize,
    q: u8,
    support: Support,
    budget: Budget,
) -> Result<OrbitCensus, OracleError> {
    super::gf::check_prime(q)?;
    if n == 0 {
        return Err(OracleError::BadSize);
    }
    let d = support.dim(n);
    let total = (0..d).try_fold(1u64, |acc, _| acc.checked_mul(u64::from(q)));
    let Some(total) = total else {
        return Err(OracleError::Budget {
            operation: format!("orbit census {group} n={n} q={q} support={support}"),
            required: u128::MAX,
            limit: budget.limit,
        });
    };
    let gens = generators(group, n, q);
    budget.charge(
        census_cost(group, n, q, support),
        &format!("orbit census {group} n={n} q={q} support={support}"),
    )?;

    let positions = support.positions(n);
    let visited = AtomicBitset::new(total);
    let mut orbits = Vec::new();

    for seed in 0..total {
        if visited.get(seed) {
            continue;
        }
        visited.claim(seed);
        let seed_mat = SupportOdometer::start_at(n, q, support, seed).entries;
        let mut frontier: Vec<Vec<u8>> = vec![seed_mat];
        let mut size = 1u64;
        while !frontier.is_empty() {
            let next: Vec<Vec<u8>> = frontier
                .par_chunks(256)
                .flat_map_iter(|chunk| {
                    let mut found = Vec::new();
                    for m in chunk {
                        for &g in &gens {
                            let image = g.apply(m, n, q);
                            let index = encode(&image, n, q, &positions);
                            if visited.claim(index) {
                                found.push(image);
                            }
                        }
                    }
                    found
                })
                .collect();
            size += next.len() as u64;
            frontier = next;
        }
        orbits.push(OrbitRecord {
            representative: seed,
            size,
        });
    }

    let mut orbit_sizes: Vec<u64> = orbits.iter().map(|o| o.size).collect();
    orbit_sizes.sort_unstable();
    Ok(OrbitCensus {
        group,
        n,
        q,
        support,
        orbit_count: orbits.len() as u64,
        orbit_sizes,
        orbits,
    })
}

/// Orbit count by the averaging formula: the number of orbits equals the
/// average number of fixed points over the group. Exponential in the group
/// order; meant as an independent cross-check at tiny sizes.
pub fn burnside_orbit_count(
    group: GroupKind,
    n: usize,
    q: u8,
    support: Support,
    budget: Budget,
) -> Result<u64, OracleError> {
    super::gf::check_prime(q)?;
    let d = support.dim(n);
    let du = Support::Nilradical.dim(n);
    let group_order: u128 = match group {
        GroupKind::U => (0..du).fold(1u128, |a, _| a * u128::from(q)),
        GroupKind::B => {
            let torus = (0..n).fold(1u128, |a, _| a * u128::from(q - 1));
            torus * (0..du).fold(1u128, |a, _| a * u128::from(q))
        }
    };
    let elements = (0..d).fold(1u128, |a, _| a * u128::from(q));
    budget.charge(
        group_order
            .saturating_mul(elements)
            .saturating_mul((2 * n * n * n) as u128),
        &format!("burnside check {group} n={n} q={q} support={support}"),
    )?;

    // enumerate the group: torus part (for B) times unitriangular part
    let mut group_elements: Vec<Vec<u8>> = Vec::new();
    let torus_choices: Vec<Vec<u8>> = match group {
        GroupKind::U => vec![vec![1u8; n]],
        GroupKind::B => {
            let mut all = Vec::new();
            let mut diag = vec![1u8; n];
            loop {
                all.push(diag.clone());
                let mut k = n;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    if diag[k] + 1 < q {
                        diag[k] += 1;
                        break;
                    }
                    diag[k] = 1;
                }
                if diag.iter().all(|&v| v == 1) {
                    break;
                }
            }
            all
        }
    };
    let mut upper = SupportOdometer::start_at(n, q, Support::Nilradical, 0);
    loop {
        for diag in &torus_choices {
            let mut g = upper.entries.clone();
            for (i, &t) in diag.iter().enumerate() {
                g[i * n + i] = t;
            }
            group_elements.push(g);
        }
        if !upper.advance() {
            break;
        }
    }

    let mut elements_list: Vec<Vec<u8>> = Vec::new();
    let mut odo = SupportOdometer::start_at(n, q, support, 0);
    loop {
        elements_list.push(odo.entries.clone());
        if !odo.advance() {
            break;
        }
    }

    let fixed_total: u64 = group_elements
        .par_iter()
        .map(|g| {
            let ginv = mat::inverse(g, n, q);
            elements_list
                .iter()
                .filter(|m| {
                    let conj = mat::mul(&mat::mul(g, m, n, q), &ginv, n, q);
                    conj == ***m
                })
                .count() as u64
        })
        .sum();
    let order = group_order as u64;
    debug_assert_eq!(fixed_total % order, 0);
    Ok(fixed_total / order)
}

/// Orbit-count samples fitted to a polynomial in q; the degree estimates the
/// modality of the action. Exact only when a point beyond the interpolation
/// support validates the fit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalModality {
    pub group: GroupKind,
    pub n: usize,
    pub samples: Vec<(u8, u64)>,
    pub fit: FitReport,
    pub fitted: ModalityValue,
    /// Tabulated prediction: `mod(B:u)` for B, `mod(B:u) + ssrank` for U.
    pub table_prediction: ModalityValue,
    pub agrees: Option<bool>,
}

pub fn empirical_modality(
    group: GroupKind,
    n: usize,
    q_list: &[u8],
    budget: Budget,
) -> Result<EmpiricalModality, OracleError> {
    if q_list.is_empty() {
        return Err(OracleError::NotEnoughSamples { need: 1, got: 0 });
    }
    let mut samples = Vec::new();
    for &q in q_list {
        let census = orbit_census(group, n, q, budget)?;
        samples.push((q, census.orbit_count));
    }
    let points: Vec<(u64, num_bigint::BigUint)> = samples
        .iter()
        .map(|&(q, c)| (u64::from(q), num_bigint::BigUint::from(c)))
        .collect();
    let max_degree = Support::Nilradical.dim(n);
    let fit = fit_degree(&points, max_degree)?;
    let fitted = match fit.status {
        FitStatus::Confirmed => ModalityValue::Exact(fit.degree as u64),
        FitStatus::ConsistentWith => ModalityValue::LowerBound(fit.degree as u64),
        FitStatus::Refuted => ModalityValue::Unknown,
    };

    let table = ModalityTable::builtin();
    let table_prediction = if n == 1 {
        ModalityValue::Exact(0)
    } else {
        let ty = SimpleType::new(Family::A, (n - 1) as u16).expect("A-type rank");
        let base = table.mod_borel(ty);
        match group {
            GroupKind::B => base,
            GroupKind::U => base.add(ModalityValue::Exact((n - 1) as u64)),
        }
    };
    let agrees = match (fitted, table_prediction) {
        (ModalityValue::Exact(a), ModalityValue::Exact(b)) => Some(a == b),
        (ModalityValue::LowerBound(a), ModalityValue::Exact(b)) => Some(a == b),
        _ => None,
    };
    Ok(EmpiricalModality {
        group,
        n,
        samples,
        fit,
        fitted,
        table_prediction,
        agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u3_census_counts_match_q2_plus_q_minus_1() {
        for (q, expected) in [(2u8, 5u64), (3, 11), (5, 29), (7, 55)] {
            let census = orbit_census(GroupKind::U, 3, q, Budget::default()).unwrap();
            assert_eq!(census.orbit_count, expected, "q = {q}");
            let sum: u64 = census.orbit_sizes.iter().sum();
            assert_eq!(sum, u64::from(q).pow(3), "conservation at q = {q}");
        }
    }

    #[test]
    fn b3_census_is_constant_in_q() {
        for q in [2u8, 3, 5] {
            let census = orbit_census(GroupKind::B, 3, q, Budget::default()).unwrap();
            assert_eq!(census.orbit_count, 5, "q = {q}");
        }
        // frozen size multisets
        let c2 = orbit_census(GroupKind::B, 3, 2, Budget::default()).unwrap();
        assert_eq!(c2.orbit_sizes, vec![1, 1, 2, 2, 2]);
        let c3 = orbit_census(GroupKind::B, 3, 3, Budget::default()).unwrap();
        assert_eq!(c3.orbit_sizes, vec![1, 2, 6, 6, 12]);
    }

    #[test]
    fn orbit_sizes_divide_the_group_order() {
        for (group, n, q) in [
            (GroupKind::U, 3, 3u8),
            (GroupKind::B, 3, 3),
            (GroupKind::U, 4, 2),
            (GroupKind::B, 4, 3),
        ] {
            let census = orbit_census(group, n, q, Budget::default()).unwrap();
            let order = census.group_order();
            for &s in &census.orbit_sizes {
                assert_eq!(order % s, 0, "{group} n={n} q={q} size {s}");
            }
        }
    }

    #[test]
    fn representatives_are_lexicographically_least() {
        let census = orbit_census(GroupKind::U, 3, 3, Budget::default()).unwrap();
        // reps are strictly increasing by construction
        for pair in census.orbits.windows(2) {
            assert!(pair[0].representative < pair[1].representative);
        }
        // zero matrix is always its own orbit
        assert_eq!(census.orbits[0], OrbitRecord { representative: 0, size: 1 });
    }

    #[test]
    fn burnside_matches_bfs_at_tiny_size() {
        for group in [GroupKind::U, GroupKind::B] {
            let bfs = orbit_census(group, 3, 2, Budget::default()).unwrap();
            let avg =
                burnside_orbit_count(group, 3, 2, Support::Nilradical, Budget::default()).unwrap();
            assert_eq!(bfs.orbit_count, avg, "{group}");
        }
    }

    #[test]
    fn empirical_modality_of_u3_is_two() {
        let report =
            empirical_modality(GroupKind::U, 3, &[2, 3, 5, 7], Budget::default()).unwrap();
        assert_eq!(report.fit.degree, 2);
        assert_eq!(report.fitted, ModalityValue::Exact(2));
        assert_eq!(report.table_prediction, ModalityValue::Exact(2));
        assert_eq!(report.agrees, Some(true));
    }

    #[test]
    fn empirical_modality_of_b2_on_the_line_is_zero() {
        // two B-orbits on the nilradical line of gl_2 at every q
        let report = empirical_modality(GroupKind::B, 2, &[2, 3, 5], Budget::default()).unwrap();
        assert_eq!(report.fit.degree, 0);
        assert_eq!(report.fitted, ModalityValue::Exact(0));
        for (_, count) in report.samples {
            assert_eq!(count, 2);
        }
    }

    #[test]
    fn borel_support_census_for_gl2_fits_q2_plus_q() {
        for (q, expected) in [(2u8, 6u64), (3, 12), (5, 30)] {
            let census =
                orbit_census_on(GroupKind::B, 2, q, Support::Borel, Budget::default()).unwrap();
            assert_eq!(census.orbit_count, expected, "q = {q}");
        }
    }
}

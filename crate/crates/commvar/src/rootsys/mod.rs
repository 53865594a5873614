//! Root systems, Dynkin diagram combinatorics and standard Levi classes.
//!
//! Roots are stored as integer coordinate vectors over the simple-root basis;
//! no Euclidean embedding is used anywhere. The Cartan matrix catalogue lives
//! in [`cartan`] (Bourbaki numbering throughout), and recognition of induced
//! sub-diagrams in [`recognize`].

mod cartan;
mod recognize;

pub use cartan::cartan_matrix;
pub use recognize::{classify_subset, classify_subset_cartan};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum RootSysError {
    #[error("invalid simple type {family}{rank}: {reason}")]
    InvalidType {
        family: Family,
        rank: u16,
        reason: String,
    },
    #[error("cannot parse `{0}` as a simple type (expected e.g. A3, D12)")]
    ParseType(String),
    #[error("cannot parse `{0}` as a reductive shape (expected e.g. A3,B2+T1 or T4)")]
    ParseShape(String),
    #[error("rank {0} exceeds the subset enumeration bound of 31")]
    RankTooLarge(u32),
    #[error("simple-root index {index} out of range 1..={rank}")]
    BadSubsetIndex { index: u16, rank: u16 },
}

/// The seven families of simple root systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
        })
    }
}

impl FromStr for Family {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            "F" | "f" => Ok(Family::F),
            "G" | "g" => Ok(Family::G),
            _ => Err(()),
        }
    }
}

/// Isomorphism type of a simple group, canonicalized: `C2` is reported as
/// `B2` and `D3` as `A3`, so that every type has a unique name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct SimpleType {
    family: Family,
    rank: u16,
}

impl SimpleType {
    /// Validates the rank constraints (A >= 1, B >= 2, C >= 2, D >= 3,
    /// E in {6,7,8}, F = 4, G = 2) and canonicalizes the low-rank
    /// coincidences C2 -> B2 and D3 -> A3.
    pub fn new(family: Family, rank: u16) -> Result<Self, RootSysError> {
        let invalid = |reason: &str| RootSysError::InvalidType {
            family,
            rank,
            reason: reason.to_string(),
        };
        match family {
            Family::A if rank >= 1 => Ok(Self { family, rank }),
            Family::B if rank >= 2 => Ok(Self { family, rank }),
            Family::C if rank == 2 => Ok(Self {
                family: Family::B,
                rank: 2,
            }),
            Family::C if rank >= 3 => Ok(Self { family, rank }),
            Family::D if rank == 3 => Ok(Self {
                family: Family::A,
                rank: 3,
            }),
            Family::D if rank >= 4 => Ok(Self { family, rank }),
            Family::E if (6..=8).contains(&rank) => Ok(Self { family, rank }),
            Family::F if rank == 4 => Ok(Self { family, rank }),
            Family::G if rank == 2 => Ok(Self { family, rank }),
            Family::A => Err(invalid("rank must be at least 1")),
            Family::B => Err(invalid("rank must be at least 2")),
            Family::C => Err(invalid("rank must be at least 2")),
            Family::D => Err(invalid("rank must be at least 3")),
            Family::E => Err(invalid("rank must be 6, 7 or 8")),
            Family::F => Err(invalid("rank must be 4")),
            Family::G => Err(invalid("rank must be 2")),
        }
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn rank(self) -> u16 {
        self.rank
    }

    /// Number of positive roots, by the classical count for each family.
    /// The closure construction in [`build_root_system`] reproduces these
    /// counts; the test suite checks the two agree.
    pub fn positive_root_count(self) -> u64 {
        let r = self.rank as u64;
        match self.family {
            Family::A => r * (r + 1) / 2,
            Family::B | Family::C => r * r,
            Family::D => r * (r - 1),
            Family::E => match self.rank {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }

    pub fn dims(self) -> Dims {
        let rank = u64::from(self.rank);
        let pos = self.positive_root_count();
        Dims {
            dim_g: rank + 2 * pos,
            rank,
            ssrank: rank,
            dim_borel: rank + pos,
            dim_nilradical: pos,
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = RootSysError;
    fn from_str(s: &str) -> Result<Self, RootSysError> {
        let s = s.trim();
        let mut chars = s.chars();
        let fam = chars
            .next()
            .and_then(|c| Family::from_str(&c.to_string()).ok())
            .ok_or_else(|| RootSysError::ParseType(s.to_string()))?;
        let rank: u16 = chars
            .as_str()
            .parse()
            .map_err(|_| RootSysError::ParseType(s.to_string()))?;
        SimpleType::new(fam, rank)
    }
}

impl From<SimpleType> for String {
    fn from(t: SimpleType) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for SimpleType {
    type Error = RootSysError;
    fn try_from(s: String) -> Result<Self, RootSysError> {
        s.parse()
    }
}

/// Dimension data of a simple or reductive shape, all derived from the
/// positive root count: `dim_g = rank + |Phi|`, `dim_borel = rank + |Phi+|`,
/// `dim_nilradical = |Phi+|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub dim_g: u64,
    pub rank: u64,
    pub ssrank: u64,
    pub dim_borel: u64,
    pub dim_nilradical: u64,
}

/// Isomorphism type of a reductive group: a central product of simple
/// components and a central torus. Components are kept sorted, so equal
/// multisets compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReductiveShape {
    components: Vec<SimpleType>,
    central_torus_rank: u32,
}

impl ReductiveShape {
    pub fn new(mut components: Vec<SimpleType>, central_torus_rank: u32) -> Self {
        components.sort();
        Self {
            components,
            central_torus_rank,
        }
    }

    pub fn simple(t: SimpleType) -> Self {
        Self::new(vec![t], 0)
    }

    pub fn torus(rank: u32) -> Self {
        Self::new(Vec::new(), rank)
    }

    pub fn components(&self) -> &[SimpleType] {
        &self.components
    }

    pub fn central_torus_rank(&self) -> u32 {
        self.central_torus_rank
    }

    pub fn ssrank(&self) -> u64 {
        self.components.iter().map(|t| u64::from(t.rank())).sum()
    }

    pub fn rank(&self) -> u64 {
        u64::from(self.central_torus_rank) + self.ssrank()
    }

    pub fn dims(&self) -> Dims {
        let pos: u64 = self
            .components
            .iter()
            .map(|t| t.positive_root_count())
            .sum();
        let rank = self.rank();
        Dims {
            dim_g: rank + 2 * pos,
            rank,
            ssrank: self.ssrank(),
            dim_borel: rank + pos,
            dim_nilradical: pos,
        }
    }
}

impl fmt::Display for ReductiveShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "T{}", self.central_torus_rank);
        }
        let comps: Vec<String> = self.components.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", comps.join(","))?;
        if self.central_torus_rank > 0 {
            write!(f, "+T{}", self.central_torus_rank)?;
        }
        Ok(())
    }
}

impl FromStr for ReductiveShape {
    type Err = RootSysError;

    /// Grammar: `COMP(,COMP)*(+T<k>)?` or the bare torus `T<k>`,
    /// e.g. `A3,A3,D5`, `B6+T2`, `T4`.
    fn from_str(s: &str) -> Result<Self, RootSysError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(RootSysError::ParseShape(s.to_string()));
        }
        let (comp_part, torus) = match s.split_once('+') {
            Some((c, t)) => {
                let t = t.trim();
                let rank: u32 = t
                    .strip_prefix('T')
                    .or_else(|| t.strip_prefix('t'))
                    .and_then(|r| r.parse().ok())
                    .ok_or_else(|| RootSysError::ParseShape(s.to_string()))?;
                (c, rank)
            }
            None => (s, 0),
        };
        let comp_part = comp_part.trim();
        if (comp_part.starts_with('T') || comp_part.starts_with('t')) && torus == 0 {
            let rank: u32 = comp_part[1..]
                .parse()
                .map_err(|_| RootSysError::ParseShape(s.to_string()))?;
            return Ok(ReductiveShape::torus(rank));
        }
        let mut components = Vec::new();
        for piece in comp_part.split(',') {
            components.push(piece.trim().parse::<SimpleType>()?);
        }
        Ok(ReductiveShape::new(components, torus))
    }
}

/// A constructed positive system: the Cartan matrix in Bourbaki numbering
/// together with every positive root as a coordinate vector over the simple
/// roots, generated by closure under root addition (root strings handle the
/// multiply-laced types).
#[derive(Debug, Clone)]
pub struct RootSystem {
    simple_type: SimpleType,
    cartan: Vec<Vec<i32>>,
    positive_roots: Vec<Vec<i32>>,
}

impl RootSystem {
    pub fn simple_type(&self) -> SimpleType {
        self.simple_type
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Vec<i32>] {
        &self.positive_roots
    }

    /// Positive roots supported on the subset `J` (1-based indices), i.e.
    /// the positive roots of the standard Levi subalgebra attached to `J`.
    pub fn positive_roots_supported_on(&self, subset: &BTreeSet<u16>) -> usize {
        self.positive_roots
            .iter()
            .filter(|root| {
                root.iter()
                    .enumerate()
                    .all(|(i, &c)| c == 0 || subset.contains(&(i as u16 + 1)))
            })
            .count()
    }
}

/// Builds the full positive system of `t` from its Cartan matrix.
///
/// Starting from the simple roots, roots are added height by height: for a
/// known root `a` and simple root `a_i`, the downward string length `p` and
/// the pairing `<a, a_i^v>` decide whether `a + a_i` is a root
/// (`p - <a, a_i^v> >= 1`). Roots come out sorted by height, then
/// lexicographically.
pub fn build_root_system(t: SimpleType) -> RootSystem {
    let cartan = cartan_matrix(t);
    let r = cartan.len();
    let pairing = |root: &[i32], i: usize| -> i32 {
        root.iter()
            .enumerate()
            .map(|(j, &c)| c * cartan[j][i])
            .sum()
    };

    let mut seen: HashSet<Vec<i32>> = HashSet::new();
    let mut frontier: Vec<Vec<i32>> = Vec::new();
    for i in 0..r {
        let mut root = vec![0i32; r];
        root[i] = 1;
        seen.insert(root.clone());
        frontier.push(root);
    }
    let mut levels: Vec<Vec<Vec<i32>>> = vec![frontier];

    while !levels.last().unwrap().is_empty() {
        let mut next: Vec<Vec<i32>> = Vec::new();
        for root in levels.last().unwrap().clone() {
            for i in 0..r {
                // downward string length through `root` in direction alpha_i
                let mut p = 0i32;
                let mut probe = root.clone();
                loop {
                    probe[i] -= 1;
                    if probe[i] >= 0 && seen.contains(&probe) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing(&root, i) >= 1 {
                    let mut up = root.clone();
                    up[i] += 1;
                    if seen.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        levels.push(next);
    }

    let mut positive_roots: Vec<Vec<i32>> = Vec::new();
    for mut level in levels {
        level.sort();
        positive_roots.extend(level);
    }
    RootSystem {
        simple_type: t,
        cartan,
        positive_roots,
    }
}

/// Standard Levi class: a subset `J` of simple roots (1-based Bourbaki
/// indices) with the isomorphism types of the connected sub-diagrams it
/// induces. The empty subset stands for the maximal torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeviClass {
    pub subset: BTreeSet<u16>,
    pub component_types: Vec<SimpleType>,
}

impl LeviClass {
    pub fn ssrank(&self) -> u64 {
        self.subset.len() as u64
    }
}

/// One [`LeviClass`] per subset of simple roots, in ascending bitmask order
/// (so the empty set comes first and the full set last).
///
/// Rejects rank > 31: the enumeration has `2^rank` entries.
pub fn levi_classes(rs: &RootSystem) -> Result<Vec<LeviClass>, RootSysError> {
    let rank = rs.rank() as u32;
    if rank > 31 {
        return Err(RootSysError::RankTooLarge(rank));
    }
    let mut out = Vec::with_capacity(1usize << rank);
    for mask in 0u32..(1u32 << rank) {
        out.push(levi_class_of_mask(rs, mask));
    }
    Ok(out)
}

pub(crate) fn levi_class_of_mask(rs: &RootSystem, mask: u32) -> LeviClass {
    let subset: BTreeSet<u16> = (0..rs.rank() as u16)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| i + 1)
        .collect();
    let component_types = classify_subset(rs, &subset);
    LeviClass {
        subset,
        component_types,
    }
}

/// Validates and normalizes a 1-based subset of simple roots for `rank`.
pub fn check_subset(subset: &BTreeSet<u16>, rank: u16) -> Result<(), RootSysError> {
    for &index in subset {
        if index == 0 || index > rank {
            return Err(RootSysError::BadSubsetIndex { index, rank });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalization_of_low_rank_coincidences() {
        assert_eq!(
            SimpleType::new(Family::C, 2).unwrap(),
            SimpleType::new(Family::B, 2).unwrap()
        );
        assert_eq!(
            SimpleType::new(Family::D, 3).unwrap(),
            SimpleType::new(Family::A, 3).unwrap()
        );
        assert!(SimpleType::new(Family::D, 2).is_err());
        assert!(SimpleType::new(Family::E, 5).is_err());
        assert!(SimpleType::new(Family::F, 5).is_err());
        assert!(SimpleType::new(Family::G, 3).is_err());
        assert!(SimpleType::new(Family::A, 0).is_err());
    }

    #[test]
    fn closure_reproduces_classical_positive_root_counts() {
        let cases = [
            ("A1", 1),
            ("A2", 3),
            ("A5", 15),
            ("B2", 4),
            ("B3", 9),
            ("C3", 9),
            ("C4", 16),
            ("D4", 12),
            ("D5", 20),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
            ("F4", 24),
            ("G2", 6),
        ];
        for (name, count) in cases {
            let t: SimpleType = name.parse().unwrap();
            let rs = build_root_system(t);
            assert_eq!(rs.positive_roots().len(), count, "count for {name}");
            assert_eq!(t.positive_root_count(), count as u64, "formula for {name}");
        }
    }

    #[test]
    fn positive_roots_are_nonzero_nonnegative_and_distinct() {
        for name in ["A4", "B4", "C4", "D5", "F4", "G2", "E6"] {
            let rs = build_root_system(name.parse().unwrap());
            let mut seen = HashSet::new();
            for root in rs.positive_roots() {
                assert!(root.iter().all(|&c| c >= 0));
                assert!(root.iter().any(|&c| c > 0));
                assert!(seen.insert(root.clone()), "duplicate root in {name}");
            }
        }
    }

    /// Closure property: whenever the sum of two positive roots is a root of
    /// the ambient system, it is in the list.
    #[test]
    fn positive_system_is_closed_under_addition() {
        for name in ["A3", "B3", "C3", "D4", "G2", "F4"] {
            let rs = build_root_system(name.parse().unwrap());
            let set: HashSet<&Vec<i32>> = rs.positive_roots().iter().collect();
            // An element of the positive cone is a root iff it is in the
            // list, so closure here means: the componentwise sum of two
            // roots that happens to be a root is found. We verify the
            // stronger statement used by the generator: for every root of
            // height >= 2 there exist a root and a simple root summing to it.
            for root in rs.positive_roots() {
                let height: i32 = root.iter().sum();
                if height < 2 {
                    continue;
                }
                let mut decomposable = false;
                for i in 0..rs.rank() {
                    let mut lower = root.clone();
                    lower[i] -= 1;
                    if lower[i] >= 0 && set.contains(&lower) {
                        decomposable = true;
                        break;
                    }
                }
                assert!(decomposable, "{root:?} in {name} has no simple summand");
            }
        }
    }

    #[test]
    fn dims_examples() {
        // gl_3 realized as A2 plus a one-dimensional central torus
        let gl3 = ReductiveShape::new(vec!["A2".parse().unwrap()], 1);
        let d = gl3.dims();
        assert_eq!(d.dim_g, 9);
        assert_eq!(d.rank, 3);
        assert_eq!(d.dim_borel, 6);
        assert_eq!(d.dim_nilradical, 3);

        let b2: SimpleType = "B2".parse().unwrap();
        assert_eq!(b2.dims().dim_g, 10);
        assert_eq!(b2.dims().rank, 2);
        assert_eq!(b2.dims().dim_nilradical, 4);

        let a1: SimpleType = "A1".parse().unwrap();
        assert_eq!(a1.dims().dim_borel, 2);
    }

    #[test]
    fn shape_parsing_round_trips() {
        for s in ["A3", "A3,A3,D5", "B6+T2", "T4", "A15+T1"] {
            let shape: ReductiveShape = s.parse().unwrap();
            assert_eq!(shape.to_string().parse::<ReductiveShape>(), Ok(shape));
        }
        assert!("X3".parse::<ReductiveShape>().is_err());
        assert!("".parse::<ReductiveShape>().is_err());
        assert!("A".parse::<ReductiveShape>().is_err());
    }

    #[test]
    fn shape_components_are_canonically_sorted() {
        let a = ReductiveShape::new(
            vec!["D5".parse().unwrap(), "A3".parse().unwrap()],
            0,
        );
        let b = ReductiveShape::new(
            vec!["A3".parse().unwrap(), "D5".parse().unwrap()],
            0,
        );
        assert_eq!(a, b);
        assert_eq!(a.rank(), 8);
        assert_eq!(a.ssrank(), 8);
    }
}

//! Decision procedures for irreducibility, equidimensionality and normality
//! of the commuting variety of a Borel or parabolic subalgebra.
//!
//! All three properties reduce to inequalities between the modality of the
//! relative Borel (or parabolic) action on the nilradical of a standard Levi
//! subalgebra and the semisimple rank of that Levi:
//!
//! * irreducible      iff `mod < ssrank H` for every nonempty `J`,
//! * equidimensional  iff `mod <= ssrank H` for every nonempty `J`,
//! * normal (on top of irreducible) iff `mod < ssrank H - 1` for every `J`
//!   with `ssrank H > 1`.
//!
//! The sweep is exhaustive over the `2^rank` subsets of each simple
//! component rather than relying on per-family monotonicity; this keeps the
//! engine independent of unproven monotonicity and doubles as a consistency
//! check of the tables. Subsets are examined in parallel with a
//! deterministic meet-reduction, so verdicts and witnesses never depend on
//! the thread count. `Unknown` is a first-class verdict: a lower bound is
//! never silently promoted to an exact value.

use crate::modtables::{ModalityTable, ModalityValue, TableError};
use crate::rootsys::{
    cartan_matrix, check_subset, classify_subset_cartan, LeviClass, ReductiveShape, RootSysError,
    SimpleType,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Citation identifiers attached to verdicts and reports.
pub mod citations {
    pub const BOREL_IRREDUCIBILITY: &str = "criterion:borel-irreducibility-modality-sweep";
    pub const BOREL_CLOSED_FORM: &str = "criterion:borel-irreducibility-type-list";
    pub const BOREL_NORMALITY: &str = "criterion:borel-normality-modality-sweep";
    pub const NORMALITY_TYPE_LIST: &str = "criterion:borel-normality-type-list";
    pub const EQUIDIMENSIONALITY: &str = "criterion:equidimensionality-modality-sweep";
    pub const PARABOLIC_IRREDUCIBILITY: &str = "criterion:parabolic-irreducibility-modality-sweep";
    pub const PARABOLIC_SATURATION: &str = "shortcut:parabolic-saturation-of-borel";
    pub const LEVI_MONOTONICITY: &str = "consistency:levi-monotonicity";
    pub const DIMENSION_FORMULA: &str = "formula:dim-commuting-variety-is-dim-p-plus-rank";
    pub const MODALITY_TABLE: &str = "table:borel-modality";
}

/// Components of rank above this bound are not swept exhaustively; only the
/// full subset is checked (which, with extrapolated bounds, still settles
/// reducibility at high rank).
pub const MAX_SWEEP_RANK: u16 = 24;

#[derive(Debug, thiserror::Error)]
pub enum ClassifyError {
    #[error(transparent)]
    RootSys(#[from] RootSysError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("levi subset {subset:?} invalid for component {component} ({ty}): {source}")]
    BadLeviSubset {
        component: usize,
        ty: SimpleType,
        subset: Vec<u16>,
        source: RootSysError,
    },
    #[error("levi specification has {given} component groups but the shape has {expected} components")]
    LeviArity { given: usize, expected: usize },
    #[error("cannot parse oracle file: {0}")]
    OracleParse(String),
    #[error("invalid oracle entry: {0}")]
    OracleEntry(String),
    #[error(
        "oracle conflicts with the modality table on a Borel case: component {component}, \
         J={levi:?} gives {oracle} but the table gives {table}"
    )]
    OracleInconsistent {
        component: usize,
        levi: Vec<u16>,
        oracle: ModalityValue,
        table: ModalityValue,
    },
    #[error("total semisimple rank {0} too large for sub-Levi enumeration (bound {1})")]
    MonotonicityRank(u64, u16),
}

/// A parabolic subalgebra of a reductive shape: one subset `I` of simple
/// roots per component (1-based Bourbaki indices); all empty means the Borel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicSpec {
    shape: ReductiveShape,
    levi: Vec<BTreeSet<u16>>,
}

impl ParabolicSpec {
    pub fn borel(shape: ReductiveShape) -> Self {
        let levi = vec![BTreeSet::new(); shape.components().len()];
        Self { shape, levi }
    }

    pub fn new(shape: ReductiveShape, levi: Vec<BTreeSet<u16>>) -> Result<Self, ClassifyError> {
        if levi.len() != shape.components().len() {
            return Err(ClassifyError::LeviArity {
                given: levi.len(),
                expected: shape.components().len(),
            });
        }
        for (idx, (subset, &ty)) in levi.iter().zip(shape.components()).enumerate() {
            check_subset(subset, ty.rank()).map_err(|source| ClassifyError::BadLeviSubset {
                component: idx,
                ty,
                subset: subset.iter().copied().collect(),
                source,
            })?;
        }
        Ok(Self { shape, levi })
    }

    pub fn shape(&self) -> &ReductiveShape {
        &self.shape
    }

    pub fn levi(&self) -> &[BTreeSet<u16>] {
        &self.levi
    }

    pub fn is_borel(&self) -> bool {
        self.levi.iter().all(|s| s.is_empty())
    }

    /// `dim p = rank + |Phi+| + |Phi+_I|` (the lower triangular part of the
    /// Levi factor comes on top of the Borel).
    pub fn dim_parabolic(&self) -> u64 {
        let dims = self.shape.dims();
        let mut lower = 0u64;
        for (subset, &ty) in self.levi.iter().zip(self.shape.components()) {
            if subset.is_empty() {
                continue;
            }
            let cartan = cartan_matrix(ty);
            for part in classify_subset_cartan(&cartan, subset) {
                lower += part.positive_root_count();
            }
        }
        dims.dim_borel + lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Irreducible,
    Reducible,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalityStatus {
    Normal,
    IrreducibleNotNormal,
    Reducible,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquidimStatus {
    Equidimensional,
    NotEquidimensional,
    Unknown,
}

/// The Levi class witnessing a violated (or unverifiable) inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub component_index: usize,
    pub component_type: SimpleType,
    pub levi: LeviClass,
    pub modality: ModalityValue,
    pub inequality: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub citations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityVerdict {
    pub status: NormalityStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub citations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquidimVerdict {
    pub status: EquidimStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub citations: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Check {
    /// `mod < ssrank H` over nonempty `J`.
    Strict,
    /// `mod <= ssrank H` over nonempty `J`.
    NonStrict,
    /// `mod < ssrank H - 1` over `J` with `|J| >= 2`.
    NormalStrict,
}

impl Check {
    fn applies(self, size: u64) -> bool {
        match self {
            Check::Strict | Check::NonStrict => size >= 1,
            Check::NormalStrict => size >= 2,
        }
    }

    /// Pass / definite fail / indeterminate for one subset.
    fn eval(self, value: ModalityValue, ssrank: u64) -> Option<bool> {
        match (self, value) {
            (Check::Strict, ModalityValue::Exact(v)) => Some(v < ssrank),
            (Check::Strict, ModalityValue::LowerBound(b)) => (b >= ssrank).then_some(false),
            (Check::NonStrict, ModalityValue::Exact(v)) => Some(v <= ssrank),
            (Check::NonStrict, ModalityValue::LowerBound(b)) => (b > ssrank).then_some(false),
            (Check::NormalStrict, ModalityValue::Exact(v)) => Some(v + 1 < ssrank),
            (Check::NormalStrict, ModalityValue::LowerBound(b)) => {
                (b + 1 >= ssrank).then_some(false)
            }
            (_, ModalityValue::Unknown) => None,
        }
    }

    fn describe(self, value: ModalityValue, ssrank: u64) -> String {
        match self {
            Check::Strict => format!("mod = {value} >= {ssrank} = ssrank H"),
            Check::NonStrict => format!("mod = {value} > {ssrank} = ssrank H"),
            Check::NormalStrict => {
                format!("mod = {value} >= {} = ssrank H - 1", ssrank - 1)
            }
        }
    }
}

#[derive(Debug, Clone)]
enum SweepOutcome {
    AllPass,
    /// Minimal-size, lexicographically least violating subset.
    Violation(LeviClass, ModalityValue),
    /// No definite violation, but at least one subset could not be decided.
    Indeterminate(LeviClass),
}

/// Neighbor bitmask per node, from the Cartan matrix.
fn adjacency_masks(cartan: &[Vec<i32>]) -> Vec<u32> {
    let rank = cartan.len();
    (0..rank)
        .map(|i| {
            (0..rank)
                .filter(|&j| j != i && cartan[i][j] != 0)
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect()
}

/// Connected component of `mask` containing its lowest set bit.
fn component_of(mask: u32, adj: &[u32]) -> u32 {
    let mut comp = mask & mask.wrapping_neg();
    loop {
        let mut grown = comp;
        let mut bits = comp;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            grown |= adj[b] & mask;
        }
        if grown == comp {
            return comp;
        }
        comp = grown;
    }
}

/// Every nonempty connected subset of the diagram (for trees there are only
/// O(rank^2) of them), grown breadth-first from singletons.
fn connected_subsets(adj: &[u32]) -> Vec<u32> {
    let mut seen: std::collections::HashSet<u32> = std::collections::HashSet::new();
    let mut queue: Vec<u32> = (0..adj.len()).map(|i| 1u32 << i).collect();
    for &m in &queue {
        seen.insert(m);
    }
    let mut head = 0;
    while head < queue.len() {
        let mask = queue[head];
        head += 1;
        let mut boundary = 0u32;
        let mut bits = mask;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            boundary |= adj[b];
        }
        boundary &= !mask;
        while boundary != 0 {
            let b = boundary.trailing_zeros();
            boundary &= boundary - 1;
            let grown = mask | (1 << b);
            if seen.insert(grown) {
                queue.push(grown);
            }
        }
    }
    queue
}

/// Ascending-index-list lexicographic order on equal-size subsets: the
/// smaller one contains the lowest differing element.
fn mask_key_less(a: u32, b: u32) -> bool {
    let (ca, cb) = (a.count_ones(), b.count_ones());
    if ca != cb {
        return ca < cb;
    }
    if a == b {
        return false;
    }
    let lowest_diff = (a ^ b) & (a ^ b).wrapping_neg();
    a & lowest_diff != 0
}

fn mask_to_subset(mask: u32, rank: u16) -> BTreeSet<u16> {
    (0..rank).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

/// Exhaustive sweep of one simple component.
///
/// The modality of a Levi class is additive over the connected components
/// of its sub-diagram, so each connected subset is recognized once and the
/// `2^rank` subsets are then folded with bit operations only. Subsets are
/// evaluated in parallel and reduced deterministically: the verdict is the
/// meet over all subsets and the reported witness is the violating subset
/// of minimal size, lexicographically least among those.
fn sweep_component(ty: SimpleType, table: &ModalityTable, check: Check) -> SweepOutcome {
    let rank = ty.rank();
    if rank > MAX_SWEEP_RANK {
        // only the full subset is examined; a definite violation there is
        // still conclusive
        let value = table.mod_borel(ty);
        let full: BTreeSet<u16> = (1..=rank).collect();
        let class = LeviClass {
            subset: full,
            component_types: vec![ty],
        };
        return match check.eval(value, u64::from(rank)) {
            Some(false) => SweepOutcome::Violation(class, value),
            _ => SweepOutcome::Indeterminate(class),
        };
    }

    let cartan = cartan_matrix(ty);
    let adj = adjacency_masks(&cartan);
    let mut modality_of_component: HashMap<u32, ModalityValue> = HashMap::new();
    for mask in connected_subsets(&adj) {
        let types = classify_subset_cartan(&cartan, &mask_to_subset(mask, rank));
        modality_of_component.insert(mask, table.mod_borel_product(&types));
    }

    let total: u32 = 1 << rank;
    let fold = |range: std::ops::Range<u32>| -> (Option<u32>, Option<u32>) {
        let mut violation: Option<u32> = None;
        let mut indeterminate: Option<u32> = None;
        for mask in range {
            let size = u64::from(mask.count_ones());
            if !check.applies(size) {
                continue;
            }
            let mut value = ModalityValue::Exact(0);
            let mut rest = mask;
            while rest != 0 {
                let comp = component_of(rest, &adj);
                value = value.add(modality_of_component[&comp]);
                rest &= !comp;
            }
            match check.eval(value, size) {
                Some(true) => {}
                Some(false) => {
                    if violation.is_none_or(|best| mask_key_less(mask, best)) {
                        violation = Some(mask);
                    }
                }
                None => {
                    if indeterminate.is_none_or(|best| mask_key_less(mask, best)) {
                        indeterminate = Some(mask);
                    }
                }
            }
        }
        (violation, indeterminate)
    };

    let min_mask = |a: Option<u32>, b: Option<u32>| match (a, b) {
        (Some(x), Some(y)) => Some(if mask_key_less(x, y) { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    };
    const SWEEP_CHUNK: u32 = 1 << 13;
    let chunks = total.div_ceil(SWEEP_CHUNK);
    let (violation, indeterminate) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = (c * SWEEP_CHUNK).max(1);
            let hi = ((c + 1) * SWEEP_CHUNK).min(total);
            fold(lo..hi)
        })
        .reduce(
            || (None, None),
            |a, b| (min_mask(a.0, b.0), min_mask(a.1, b.1)),
        );

    let class_of = |mask: u32| -> LeviClass {
        let subset = mask_to_subset(mask, rank);
        let component_types = classify_subset_cartan(&cartan, &subset);
        LeviClass {
            subset,
            component_types,
        }
    };
    if let Some(mask) = violation {
        let class = class_of(mask);
        let value = table.mod_borel_product(&class.component_types);
        return SweepOutcome::Violation(class, value);
    }
    if let Some(mask) = indeterminate {
        return SweepOutcome::Indeterminate(class_of(mask));
    }
    SweepOutcome::AllPass
}

/// Nonempty subsets of `{1..rank}` ordered by size, then lexicographically.
fn subsets_by_size(rank: u16) -> impl Iterator<Item = BTreeSet<u16>> {
    (1..=rank).flat_map(move |size| Combinations::new(rank, size))
}

struct Combinations {
    rank: u16,
    current: Option<Vec<u16>>,
}

impl Combinations {
    fn new(rank: u16, size: u16) -> Self {
        let current = (size <= rank).then(|| (1..=size).collect());
        Self { rank, current }
    }
}

impl Iterator for Combinations {
    type Item = BTreeSet<u16>;
    fn next(&mut self) -> Option<BTreeSet<u16>> {
        let current = self.current.as_mut()?;
        let result: BTreeSet<u16> = current.iter().copied().collect();
        // advance to the next combination in lexicographic order
        let k = current.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if current[i] < self.rank - (k - 1 - i) as u16 {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
        Some(result)
    }
}

struct ShapeSweep {
    violations: Vec<(usize, LeviClass, ModalityValue)>,
    indeterminate: Option<(usize, LeviClass)>,
}

fn sweep_shape(shape: &ReductiveShape, table: &ModalityTable, check: Check) -> ShapeSweep {
    let mut violations = Vec::new();
    let mut indeterminate = None;
    for (idx, &ty) in shape.components().iter().enumerate() {
        match sweep_component(ty, table, check) {
            SweepOutcome::AllPass => {}
            SweepOutcome::Violation(class, value) => violations.push((idx, class, value)),
            SweepOutcome::Indeterminate(class) => {
                if indeterminate.is_none() {
                    indeterminate = Some((idx, class));
                }
            }
        }
    }
    ShapeSweep {
        violations,
        indeterminate,
    }
}

/// Picks the canonical witness: minimal subset size, then component order.
fn canonical_violation(
    mut violations: Vec<(usize, LeviClass, ModalityValue)>,
) -> Option<(usize, LeviClass, ModalityValue)> {
    violations.sort_by(|a, b| {
        (a.1.subset.len(), a.0, &a.1.subset).cmp(&(b.1.subset.len(), b.0, &b.1.subset))
    });
    violations.into_iter().next()
}

fn make_witness(
    shape: &ReductiveShape,
    check: Check,
    (idx, class, value): (usize, LeviClass, ModalityValue),
) -> Witness {
    let ssrank = class.ssrank();
    Witness {
        component_index: idx,
        component_type: shape.components()[idx],
        inequality: check.describe(value, ssrank),
        levi: class,
        modality: value,
    }
}

/// Irreducibility of the commuting variety of the Borel subalgebra, by the
/// exhaustive modality sweep. Irreducible verdicts carry the dimension
/// `dim b + rank`.
pub fn classify_borel_irreducible(shape: &ReductiveShape, table: &ModalityTable) -> Verdict {
    let sweep = sweep_shape(shape, table, Check::Strict);
    let citations = vec![
        citations::BOREL_IRREDUCIBILITY.to_string(),
        citations::MODALITY_TABLE.to_string(),
    ];
    if let Some(v) = canonical_violation(sweep.violations) {
        return Verdict {
            status: Status::Reducible,
            witness: Some(make_witness(shape, Check::Strict, v)),
            dimension: None,
            notes: Vec::new(),
            citations,
        };
    }
    if let Some((idx, class)) = sweep.indeterminate {
        return Verdict {
            status: Status::Unknown,
            witness: None,
            dimension: None,
            notes: vec![format!(
                "undecided: mod(B ∩ H : u ∩ h) not available for component {} subset {:?}",
                shape.components()[idx],
                class.subset.iter().collect::<Vec<_>>()
            )],
            citations,
        };
    }
    let dims = shape.dims();
    let mut citations = citations;
    citations.push(citations::DIMENSION_FORMULA.to_string());
    Verdict {
        status: Status::Irreducible,
        witness: None,
        dimension: Some(dims.dim_borel + dims.rank),
        notes: Vec::new(),
        citations,
    }
}

fn in_borel_irreducible_list(t: SimpleType) -> bool {
    use crate::rootsys::Family::*;
    match t.family() {
        A => t.rank() <= 15,
        B | C => t.rank() <= 6,
        D => t.rank() <= 7,
        G => true,
        E => t.rank() == 6,
        F => false,
    }
}

fn in_borel_normal_list(t: SimpleType) -> bool {
    use crate::rootsys::Family::*;
    match t.family() {
        A => t.rank() <= 14,
        B | C => t.rank() <= 5,
        D => t.rank() <= 7,
        _ => false,
    }
}

/// Closed-form irreducibility: membership of every simple component in the
/// list A(<=15), B(<=6), C(<=6), D(<=7), G2, E6.
pub fn classify_borel_closed_form(shape: &ReductiveShape) -> Verdict {
    let citations = vec![citations::BOREL_CLOSED_FORM.to_string()];
    let offender = shape
        .components()
        .iter()
        .enumerate()
        .find(|(_, &t)| !in_borel_irreducible_list(t));
    match offender {
        None => {
            let dims = shape.dims();
            let mut citations = citations;
            citations.push(citations::DIMENSION_FORMULA.to_string());
            Verdict {
                status: Status::Irreducible,
                witness: None,
                dimension: Some(dims.dim_borel + dims.rank),
                notes: Vec::new(),
                citations,
            }
        }
        Some((idx, &ty)) => {
            let table = ModalityTable::builtin();
            let value = table.mod_borel(ty);
            let class = LeviClass {
                subset: (1..=ty.rank()).collect(),
                component_types: vec![ty],
            };
            Verdict {
                status: Status::Reducible,
                witness: Some(Witness {
                    component_index: idx,
                    component_type: ty,
                    inequality: format!("{ty} outside the irreducible type list"),
                    levi: class,
                    modality: value,
                }),
                dimension: None,
                notes: Vec::new(),
                citations,
            }
        }
    }
}

/// Normality (together with irreducibility) of the Borel commuting variety:
/// `mod(B ∩ H : u ∩ h) < ssrank H - 1` over all `J` with `|J| > 1`.
pub fn classify_borel_normal(shape: &ReductiveShape, table: &ModalityTable) -> NormalityVerdict {
    let irr = sweep_shape(shape, table, Check::Strict);
    let nrm = sweep_shape(shape, table, Check::NormalStrict);
    let citations = vec![
        citations::BOREL_NORMALITY.to_string(),
        citations::BOREL_IRREDUCIBILITY.to_string(),
        citations::MODALITY_TABLE.to_string(),
    ];

    if let Some(v) = canonical_violation(irr.violations) {
        return NormalityVerdict {
            status: NormalityStatus::Reducible,
            witness: Some(make_witness(shape, Check::Strict, v)),
            dimension: None,
            notes: Vec::new(),
            citations,
        };
    }
    let irreducible_settled = irr.indeterminate.is_none();
    if let Some(v) = canonical_violation(nrm.violations) {
        if irreducible_settled {
            let dims = shape.dims();
            return NormalityVerdict {
                status: NormalityStatus::IrreducibleNotNormal,
                witness: Some(make_witness(shape, Check::NormalStrict, v)),
                dimension: Some(dims.dim_borel + dims.rank),
                notes: Vec::new(),
                citations,
            };
        }
        return NormalityVerdict {
            status: NormalityStatus::Unknown,
            witness: Some(make_witness(shape, Check::NormalStrict, v)),
            dimension: None,
            notes: vec![
                "not normal, but irreducibility itself is undecided for some component".into(),
            ],
            citations,
        };
    }
    if !irreducible_settled || nrm.indeterminate.is_some() {
        return NormalityVerdict {
            status: NormalityStatus::Unknown,
            witness: None,
            dimension: None,
            notes: vec!["modality data insufficient to settle normality".into()],
            citations,
        };
    }
    let dims = shape.dims();
    let mut citations = citations;
    citations.push(citations::DIMENSION_FORMULA.to_string());
    NormalityVerdict {
        status: NormalityStatus::Normal,
        witness: None,
        dimension: Some(dims.dim_borel + dims.rank),
        notes: Vec::new(),
        citations,
    }
}

/// Closed-form normality: membership in the list A(<=14), B(<=5), C(<=5),
/// D(<=7); types in the irreducibility list but not here are irreducible and
/// not normal.
pub fn classify_borel_normal_closed_form(shape: &ReductiveShape) -> NormalityVerdict {
    let citations = vec![citations::NORMALITY_TYPE_LIST.to_string()];
    let dims = shape.dims();
    if shape.components().iter().all(|&t| in_borel_normal_list(t)) {
        return NormalityVerdict {
            status: NormalityStatus::Normal,
            witness: None,
            dimension: Some(dims.dim_borel + dims.rank),
            notes: Vec::new(),
            citations,
        };
    }
    if shape
        .components()
        .iter()
        .all(|&t| in_borel_irreducible_list(t))
    {
        return NormalityVerdict {
            status: NormalityStatus::IrreducibleNotNormal,
            witness: None,
            dimension: Some(dims.dim_borel + dims.rank),
            notes: Vec::new(),
            citations,
        };
    }
    NormalityVerdict {
        status: NormalityStatus::Reducible,
        witness: None,
        dimension: None,
        notes: Vec::new(),
        citations,
    }
}

/// Equidimensionality: the non-strict inequality `mod <= ssrank H` over all
/// nonempty `J`.
pub fn classify_borel_equidimensional(
    shape: &ReductiveShape,
    table: &ModalityTable,
) -> EquidimVerdict {
    let sweep = sweep_shape(shape, table, Check::NonStrict);
    let citations = vec![
        citations::EQUIDIMENSIONALITY.to_string(),
        citations::MODALITY_TABLE.to_string(),
    ];
    if let Some(v) = canonical_violation(sweep.violations) {
        return EquidimVerdict {
            status: EquidimStatus::NotEquidimensional,
            witness: Some(make_witness(shape, Check::NonStrict, v)),
            dimension: None,
            notes: Vec::new(),
            citations,
        };
    }
    if let Some((idx, class)) = sweep.indeterminate {
        return EquidimVerdict {
            status: EquidimStatus::Unknown,
            witness: None,
            dimension: None,
            notes: vec![format!(
                "undecided: a bound cannot confirm mod <= ssrank for component {} subset {:?}",
                shape.components()[idx],
                class.subset.iter().collect::<Vec<_>>()
            )],
            citations,
        };
    }
    let dims = shape.dims();
    EquidimVerdict {
        status: EquidimStatus::Equidimensional,
        witness: None,
        dimension: Some(dims.dim_borel + dims.rank),
        notes: Vec::new(),
        citations,
    }
}

/// User-supplied modality data for relative parabolic actions
/// `mod(P ∩ H : N(p ∩ h))`, keyed by component, Levi subset `J` and the
/// relative parabolic subset `I ∩ J`. Borel cases (`I ∩ J` empty) always
/// come from the modality table; oracle entries for them are only accepted
/// when consistent.
#[derive(Debug, Clone, Default)]
pub struct ModalityOracle {
    entries: BTreeMap<(usize, Vec<u16>, Vec<u16>), (ModalityValue, String)>,
}

#[derive(Debug, Deserialize)]
struct OracleFile {
    #[serde(default)]
    entry: Vec<OracleFileEntry>,
}

#[derive(Debug, Deserialize)]
struct OracleFileEntry {
    #[serde(default = "default_component")]
    component: usize,
    levi: Vec<u16>,
    #[serde(default)]
    relative: Vec<u16>,
    kind: String,
    value: Option<u64>,
    provenance: Option<String>,
}

fn default_component() -> usize {
    1
}

impl ModalityOracle {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Parses `[[entry]]` records: component (1-based, default 1), levi
    /// (subset J), relative (subset I ∩ J, default empty), kind/value,
    /// provenance (mandatory).
    pub fn from_toml(text: &str) -> Result<Self, ClassifyError> {
        let parsed: OracleFile =
            toml::from_str(text).map_err(|e| ClassifyError::OracleParse(e.to_string()))?;
        let mut oracle = Self::default();
        for e in parsed.entry {
            if e.component == 0 {
                return Err(ClassifyError::OracleEntry(
                    "component indices are 1-based".into(),
                ));
            }
            let value = match e.kind.as_str() {
                "exact" => ModalityValue::Exact(e.value.ok_or_else(|| {
                    ClassifyError::OracleEntry("exact entry needs a value".into())
                })?),
                "lower-bound" | "lower_bound" => ModalityValue::LowerBound(e.value.ok_or_else(
                    || ClassifyError::OracleEntry("lower-bound entry needs a value".into()),
                )?),
                "unknown" => ModalityValue::Unknown,
                other => {
                    return Err(ClassifyError::OracleEntry(format!("unknown kind `{other}`")))
                }
            };
            let provenance = e
                .provenance
                .filter(|p| !p.trim().is_empty())
                .ok_or_else(|| {
                    ClassifyError::OracleEntry("provenance string is mandatory".into())
                })?;
            oracle.insert(e.component - 1, &e.levi, &e.relative, value, provenance);
        }
        Ok(oracle)
    }

    pub fn insert(
        &mut self,
        component: usize,
        levi: &[u16],
        relative: &[u16],
        value: ModalityValue,
        provenance: String,
    ) {
        let mut levi = levi.to_vec();
        levi.sort_unstable();
        let mut relative = relative.to_vec();
        relative.sort_unstable();
        self.entries
            .insert((component, levi, relative), (value, provenance));
    }

    pub fn lookup(
        &self,
        component: usize,
        levi: &BTreeSet<u16>,
        relative: &BTreeSet<u16>,
    ) -> Option<ModalityValue> {
        let levi: Vec<u16> = levi.iter().copied().collect();
        let relative: Vec<u16> = relative.iter().copied().collect();
        self.entries
            .get(&(component, levi, relative))
            .map(|(v, _)| *v)
    }

    fn iter(
        &self,
    ) -> impl Iterator<Item = (&(usize, Vec<u16>, Vec<u16>), &(ModalityValue, String))> {
        self.entries.iter()
    }
}

/// Rejects oracles that disagree with the modality table on Borel cases.
fn validate_oracle(
    spec: &ParabolicSpec,
    oracle: &ModalityOracle,
    table: &ModalityTable,
) -> Result<(), ClassifyError> {
    let cartans: Vec<Vec<Vec<i32>>> = spec
        .shape()
        .components()
        .iter()
        .map(|&t| cartan_matrix(t))
        .collect();
    for ((component, levi, relative), (value, _)) in oracle.iter() {
        if !relative.is_empty() || *component >= cartans.len() {
            continue;
        }
        let subset: BTreeSet<u16> = levi.iter().copied().collect();
        if check_subset(&subset, cartans[*component].len() as u16).is_err() {
            continue;
        }
        let types = classify_subset_cartan(&cartans[*component], &subset);
        let expected = table.mod_borel_product(&types);
        if expected != *value && expected != ModalityValue::Unknown {
            return Err(ClassifyError::OracleInconsistent {
                component: *component + 1,
                levi: levi.clone(),
                oracle: *value,
                table: expected,
            });
        }
    }
    Ok(())
}

const STANDARD_LEVI_NOTE: &str = "standard-Levi approximation: only Levi subgroups attached to \
subsets of simple roots were examined; non-standard classes under the parabolic are not \
enumerated";

/// Irreducibility of the commuting variety of a parabolic subalgebra.
///
/// The Borel verdict is a shortcut: a parabolic contains a Borel, and the
/// saturation of an irreducible Borel commuting variety is irreducible.
/// Otherwise the sweep runs with the relative parabolic subset `I ∩ J`,
/// consulting the oracle for non-Borel cases.
pub fn classify_parabolic_irreducible(
    spec: &ParabolicSpec,
    oracle: &ModalityOracle,
    table: &ModalityTable,
) -> Result<Verdict, ClassifyError> {
    validate_oracle(spec, oracle, table)?;
    let shape = spec.shape();

    if spec.is_borel() {
        return Ok(classify_borel_irreducible(shape, table));
    }

    let borel = classify_borel_irreducible(shape, table);
    if borel.status == Status::Irreducible {
        let mut citations = vec![
            citations::PARABOLIC_SATURATION.to_string(),
            citations::BOREL_IRREDUCIBILITY.to_string(),
            citations::DIMENSION_FORMULA.to_string(),
        ];
        citations.push(citations::MODALITY_TABLE.to_string());
        return Ok(Verdict {
            status: Status::Irreducible,
            witness: None,
            dimension: Some(spec.dim_parabolic() + shape.dims().rank),
            notes: vec!["saturation of the irreducible Borel commuting variety".into()],
            citations,
        });
    }

    let citations = vec![
        citations::PARABOLIC_IRREDUCIBILITY.to_string(),
        citations::MODALITY_TABLE.to_string(),
    ];

    let mut violations: Vec<(usize, LeviClass, ModalityValue)> = Vec::new();
    let mut indeterminate: Option<(usize, LeviClass)> = None;
    let mut swept_everything = true;

    for (idx, &ty) in shape.components().iter().enumerate() {
        let relative_full: &BTreeSet<u16> = &spec.levi()[idx];
        if ty.rank() > MAX_SWEEP_RANK {
            swept_everything = false;
            // check the full subset and any oracle entries we were given
            let cartan = cartan_matrix(ty);
            let full: BTreeSet<u16> = (1..=ty.rank()).collect();
            let mut candidates: Vec<BTreeSet<u16>> = vec![full];
            for ((component, levi, _), _) in oracle.iter() {
                if *component == idx {
                    candidates.push(levi.iter().copied().collect());
                }
            }
            for subset in candidates {
                if subset.is_empty() || check_subset(&subset, ty.rank()).is_err() {
                    continue;
                }
                let relative: BTreeSet<u16> =
                    relative_full.intersection(&subset).copied().collect();
                let value = if relative.is_empty() {
                    let types = classify_subset_cartan(&cartan, &subset);
                    table.mod_borel_product(&types)
                } else {
                    oracle
                        .lookup(idx, &subset, &relative)
                        .unwrap_or(ModalityValue::Unknown)
                };
                if Check::Strict.eval(value, subset.len() as u64) == Some(false) {
                    let component_types = classify_subset_cartan(&cartan, &subset);
                    violations.push((
                        idx,
                        LeviClass {
                            subset,
                            component_types,
                        },
                        value,
                    ));
                    break;
                }
            }
            continue;
        }

        let cartan = cartan_matrix(ty);
        let mut component_violation: Option<(LeviClass, ModalityValue)> = None;
        for subset in subsets_by_size(ty.rank()) {
            let relative: BTreeSet<u16> = relative_full.intersection(&subset).copied().collect();
            let component_types = classify_subset_cartan(&cartan, &subset);
            let value = if relative.is_empty() {
                table.mod_borel_product(&component_types)
            } else {
                oracle
                    .lookup(idx, &subset, &relative)
                    .unwrap_or(ModalityValue::Unknown)
            };
            match Check::Strict.eval(value, subset.len() as u64) {
                Some(true) => {}
                Some(false) => {
                    component_violation = Some((
                        LeviClass {
                            subset,
                            component_types,
                        },
                        value,
                    ));
                    break;
                }
                None => {
                    if indeterminate.is_none() {
                        indeterminate = Some((
                            idx,
                            LeviClass {
                                subset,
                                component_types,
                            },
                        ));
                    }
                }
            }
        }
        if let Some((class, value)) = component_violation {
            violations.push((idx, class, value));
        }
    }

    if let Some(v) = canonical_violation(violations) {
        return Ok(Verdict {
            status: Status::Reducible,
            witness: Some(make_witness(shape, Check::Strict, v)),
            dimension: None,
            notes: Vec::new(),
            citations,
        });
    }
    if indeterminate.is_some() || !swept_everything {
        return Ok(Verdict {
            status: Status::Unknown,
            witness: None,
            dimension: None,
            notes: vec![
                "modality data insufficient for some Levi classes; supply oracle entries".into(),
            ],
            citations,
        });
    }
    let mut citations = citations;
    citations.push(citations::DIMENSION_FORMULA.to_string());
    Ok(Verdict {
        status: Status::Irreducible,
        witness: None,
        dimension: Some(spec.dim_parabolic() + shape.dims().rank),
        notes: vec![STANDARD_LEVI_NOTE.to_string()],
        citations,
    })
}

/// Parses the levi-subset grammar shared by the CLI and bindings: 1-based
/// indices, comma separated, with `/` separating component groups; the empty
/// string means the Borel.
pub fn parse_levi_grammar(
    spec: &str,
    shape: &ReductiveShape,
) -> Result<Vec<BTreeSet<u16>>, String> {
    let ncomp = shape.components().len();
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(vec![BTreeSet::new(); ncomp]);
    }
    let groups: Vec<&str> = spec.split('/').collect();
    if groups.len() != ncomp {
        return Err(format!(
            "levi specification `{spec}` has {} component groups, shape {shape} has {ncomp}",
            groups.len()
        ));
    }
    let mut out = Vec::with_capacity(ncomp);
    for group in groups {
        let mut set = BTreeSet::new();
        for piece in group.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let index: u16 = piece
                .parse()
                .map_err(|_| format!("malformed levi index `{piece}` in `{spec}`"))?;
            set.insert(index);
        }
        out.push(set);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityViolation {
    pub subsets: Vec<Vec<u16>>,
    pub levi_types: Vec<SimpleType>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub ambient_status: Status,
    pub subsets_checked: u64,
    pub violations: Vec<MonotonicityViolation>,
    pub citations: Vec<String>,
}

/// Self-consistency check: when the ambient Borel commuting variety is
/// irreducible, every standard Levi restriction must be irreducible too.
/// The report lists any violations (there must be none).
pub fn levi_monotonicity_check(
    shape: &ReductiveShape,
    table: &ModalityTable,
) -> Result<MonotonicityReport, ClassifyError> {
    let citations = vec![
        citations::LEVI_MONOTONICITY.to_string(),
        citations::BOREL_IRREDUCIBILITY.to_string(),
    ];
    let ambient = classify_borel_irreducible(shape, table);
    if ambient.status != Status::Irreducible {
        return Ok(MonotonicityReport {
            ambient_status: ambient.status,
            subsets_checked: 0,
            violations: Vec::new(),
            citations,
        });
    }
    let ssrank = shape.ssrank();
    if ssrank > u64::from(MAX_SWEEP_RANK) {
        return Err(ClassifyError::MonotonicityRank(ssrank, MAX_SWEEP_RANK));
    }

    // per-component subset tables, then the product over components
    let per_component: Vec<Vec<(Vec<u16>, Vec<SimpleType>)>> = shape
        .components()
        .iter()
        .map(|&ty| {
            let cartan = cartan_matrix(ty);
            let mut list = Vec::with_capacity(1 << ty.rank());
            for mask in 0u32..(1u32 << ty.rank()) {
                let subset: BTreeSet<u16> =
                    (0..ty.rank()).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
                let types = classify_subset_cartan(&cartan, &subset);
                list.push((subset.into_iter().collect(), types));
            }
            list
        })
        .collect();

    let mut type_status: HashMap<SimpleType, Status> = HashMap::new();
    let mut status_of = |ty: SimpleType| -> Status {
        *type_status.entry(ty).or_insert_with(|| {
            match sweep_component(ty, table, Check::Strict) {
                SweepOutcome::AllPass => Status::Irreducible,
                SweepOutcome::Violation(..) => Status::Reducible,
                SweepOutcome::Indeterminate(..) => Status::Unknown,
            }
        })
    };

    let mut violations = Vec::new();
    let mut checked = 0u64;
    let mut indices = vec![0usize; per_component.len()];
    loop {
        checked += 1;
        let mut levi_types: Vec<SimpleType> = Vec::new();
        for (comp, &i) in indices.iter().enumerate() {
            levi_types.extend(per_component[comp][i].1.iter().copied());
        }
        let mut status = Status::Irreducible;
        for &t in &levi_types {
            match status_of(t) {
                Status::Irreducible => {}
                Status::Reducible => {
                    status = Status::Reducible;
                    break;
                }
                Status::Unknown => status = Status::Unknown,
            }
        }
        if status != Status::Irreducible {
            levi_types.sort();
            violations.push(MonotonicityViolation {
                subsets: indices
                    .iter()
                    .enumerate()
                    .map(|(comp, &i)| per_component[comp][i].0.clone())
                    .collect(),
                levi_types,
                status,
            });
        }
        // odometer over the per-component subset lists
        let mut pos = 0;
        loop {
            if pos == indices.len() {
                return Ok(MonotonicityReport {
                    ambient_status: Status::Irreducible,
                    subsets_checked: checked,
                    violations,
                    citations,
                });
            }
            indices[pos] += 1;
            if indices[pos] < per_component[pos].len() {
                break;
            }
            indices[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(s: &str) -> ReductiveShape {
        s.parse().unwrap()
    }

    fn table() -> ModalityTable {
        ModalityTable::builtin()
    }

    #[test]
    fn borel_irreducibility_examples() {
        let t = table();
        assert_eq!(
            classify_borel_irreducible(&shape("B6"), &t).status,
            Status::Irreducible
        );

        let b7 = classify_borel_irreducible(&shape("B7"), &t);
        assert_eq!(b7.status, Status::Reducible);
        let w = b7.witness.unwrap();
        assert_eq!(w.levi.subset, (1..=7).collect::<BTreeSet<u16>>());
        assert_eq!(w.modality, ModalityValue::Exact(7));

        let a16 = classify_borel_irreducible(&shape("A16"), &t);
        assert_eq!(a16.status, Status::Reducible);
        let w = a16.witness.unwrap();
        assert_eq!(w.levi.subset, (1..=16).collect::<BTreeSet<u16>>());
        assert_eq!(w.modality, ModalityValue::LowerBound(16));

        let a1 = classify_borel_irreducible(&shape("A1"), &t);
        assert_eq!(a1.status, Status::Irreducible);
        assert_eq!(a1.dimension, Some(3));
    }

    #[test]
    fn canonical_witnesses_are_minimal_then_lexicographic() {
        let t = table();
        // inside A17 the A16 bound already fails at size 16
        let a17 = classify_borel_irreducible(&shape("A17"), &t);
        let w = a17.witness.unwrap();
        assert_eq!(w.levi.subset, (1..=16).collect::<BTreeSet<u16>>());
        assert_eq!(w.modality, ModalityValue::LowerBound(16));

        // inside B8 the B7 tail fails before the full diagram
        let b8 = classify_borel_irreducible(&shape("B8"), &t);
        let w = b8.witness.unwrap();
        assert_eq!(w.levi.subset, (2..=8).collect::<BTreeSet<u16>>());
        assert_eq!(w.levi.component_types, vec!["B7".parse().unwrap()]);

        // inside E8 the E7 sub-diagram fails at size 7
        let e8 = classify_borel_irreducible(&shape("E8"), &t);
        let w = e8.witness.unwrap();
        assert_eq!(w.levi.subset, (1..=7).collect::<BTreeSet<u16>>());
        assert_eq!(w.levi.component_types, vec!["E7".parse().unwrap()]);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(
            classify_borel_closed_form(&shape("D7,A15")).status,
            Status::Irreducible
        );
        assert_eq!(
            classify_borel_closed_form(&shape("E7")).status,
            Status::Reducible
        );
        let torus = classify_borel_closed_form(&ReductiveShape::torus(5));
        assert_eq!(torus.status, Status::Irreducible);
        assert_eq!(torus.dimension, Some(10));
    }

    #[test]
    fn sweep_agrees_with_closed_form_on_all_tabulated_types() {
        let t = table();
        for (&ty, _) in t.iter() {
            let s = ReductiveShape::simple(ty);
            let sweep = classify_borel_irreducible(&s, &t);
            let closed = classify_borel_closed_form(&s);
            assert_eq!(sweep.status, closed.status, "disagreement on {ty}");
            assert_ne!(sweep.status, Status::Unknown, "{ty} must be decided");
        }
    }

    #[test]
    fn product_shapes_conjoin_componentwise() {
        let t = table();
        assert_eq!(
            classify_borel_irreducible(&shape("A3,A3,D5"), &t).status,
            Status::Irreducible
        );
        assert_eq!(
            classify_borel_irreducible(&shape("A3,B7"), &t).status,
            Status::Reducible
        );
        let tor = classify_borel_irreducible(&shape("A2+T4"), &t);
        assert_eq!(tor.status, Status::Irreducible);
        // dim b = 6 (rank) + 3 = 9, plus rank again
        assert_eq!(tor.dimension, Some(15));
    }

    #[test]
    fn normality_examples() {
        let t = table();
        assert_eq!(
            classify_borel_normal(&shape("D7"), &t).status,
            NormalityStatus::Normal
        );
        assert_eq!(
            classify_borel_normal(&shape("G2"), &t).status,
            NormalityStatus::IrreducibleNotNormal
        );
        assert_eq!(
            classify_borel_normal(&shape("A15"), &t).status,
            NormalityStatus::IrreducibleNotNormal
        );
        assert_eq!(
            classify_borel_normal(&shape("E7"), &t).status,
            NormalityStatus::Reducible
        );
        assert_eq!(
            classify_borel_normal(&shape("A14"), &t).status,
            NormalityStatus::Normal
        );
    }

    #[test]
    fn normality_implies_irreducibility() {
        let t = table();
        for (&ty, _) in t.iter() {
            let s = ReductiveShape::simple(ty);
            if classify_borel_normal(&s, &t).status == NormalityStatus::Normal {
                assert_eq!(
                    classify_borel_irreducible(&s, &t).status,
                    Status::Irreducible,
                    "{ty}"
                );
            }
        }
    }

    #[test]
    fn equidimensionality_examples() {
        let t = table();
        assert_eq!(
            classify_borel_equidimensional(&shape("B7"), &t).status,
            EquidimStatus::Equidimensional
        );
        assert_eq!(
            classify_borel_equidimensional(&shape("A16"), &t).status,
            EquidimStatus::Unknown
        );
        assert_eq!(
            classify_borel_equidimensional(&shape("A4"), &t).status,
            EquidimStatus::Equidimensional
        );
        assert_eq!(
            classify_borel_equidimensional(&shape("E7"), &t).status,
            EquidimStatus::NotEquidimensional
        );
        // A17 has a definite violation: the bound 19 exceeds ssrank 17
        assert_eq!(
            classify_borel_equidimensional(&shape("A17"), &t).status,
            EquidimStatus::NotEquidimensional
        );
    }

    #[test]
    fn irreducible_implies_equidimensional() {
        let t = table();
        for (&ty, _) in t.iter() {
            let s = ReductiveShape::simple(ty);
            if classify_borel_irreducible(&s, &t).status == Status::Irreducible {
                assert_eq!(
                    classify_borel_equidimensional(&s, &t).status,
                    EquidimStatus::Equidimensional,
                    "{ty}"
                );
            }
        }
    }

    #[test]
    fn witness_soundness() {
        let t = table();
        for (&ty, _) in t.iter() {
            let s = ReductiveShape::simple(ty);
            let verdict = classify_borel_irreducible(&s, &t);
            if verdict.status == Status::Reducible {
                let w = verdict.witness.expect("reducible verdicts carry a witness");
                let bound = w.modality.known_value().unwrap();
                assert!(bound >= w.levi.ssrank(), "{ty}: witness bound too small");
            }
        }
    }

    #[test]
    fn extrapolation_settles_high_rank() {
        let plain = ModalityTable::builtin();
        let extra = ModalityTable::builtin_extrapolating();
        // even without extrapolation the tabulated A16 bound fires inside A20
        let a20 = classify_borel_irreducible(&shape("A20"), &plain);
        assert_eq!(a20.status, Status::Reducible);
        assert_eq!(a20.witness.unwrap().levi.subset.len(), 16);
        // beyond the sweep bound only the full subset is checked, which the
        // plain table cannot decide
        assert_eq!(
            classify_borel_irreducible(&shape("A30"), &plain).status,
            Status::Unknown
        );
        assert_eq!(
            classify_borel_irreducible(&shape("A30"), &extra).status,
            Status::Reducible
        );
        // far beyond the sweep bound: the full-subset check still fires
        assert_eq!(
            classify_borel_irreducible(&shape("A599"), &extra).status,
            Status::Reducible
        );
    }

    #[test]
    fn parabolic_shortcut_and_delegation() {
        let t = table();
        let oracle = ModalityOracle::empty();
        // any parabolic in A5 is irreducible via the Borel shortcut
        let spec = ParabolicSpec::new(shape("A5"), vec![[1u16, 3].into_iter().collect()]).unwrap();
        let verdict = classify_parabolic_irreducible(&spec, &oracle, &t).unwrap();
        assert_eq!(verdict.status, Status::Irreducible);

        // Borel specs delegate exactly
        let borel_spec = ParabolicSpec::borel(shape("B7"));
        let via_parabolic = classify_parabolic_irreducible(&borel_spec, &oracle, &t).unwrap();
        let direct = classify_borel_irreducible(&shape("B7"), &t);
        assert_eq!(via_parabolic, direct);
    }

    #[test]
    fn parabolic_with_oracle_entry_goes_reducible() {
        // a GL_600-sized instance: block sizes (200, 400) give the maximal
        // parabolic with levi subset missing node 200; an oracle entry
        // reporting modality >= 599 at the full Levi settles reducibility
        let t = ModalityTable::builtin_extrapolating();
        let gl600 = shape("A599+T1");
        let levi: BTreeSet<u16> = (1..=599).filter(|&i| i != 200).collect();
        let spec = ParabolicSpec::new(gl600, vec![levi.clone()]).unwrap();
        let mut oracle = ModalityOracle::empty();
        let full: Vec<u16> = (1..=599).collect();
        let relative: Vec<u16> = levi.iter().copied().collect();
        oracle.insert(
            0,
            &full,
            &relative,
            ModalityValue::LowerBound(599),
            "externally computed modality bound for block sizes (200,400)".into(),
        );
        let verdict = classify_parabolic_irreducible(&spec, &oracle, &t).unwrap();
        assert_eq!(verdict.status, Status::Reducible);
        let w = verdict.witness.unwrap();
        assert_eq!(w.levi.subset.len(), 599);
        assert_eq!(w.modality, ModalityValue::LowerBound(599));
    }

    #[test]
    fn inconsistent_borel_oracle_is_a_hard_error() {
        let t = table();
        let spec = ParabolicSpec::new(
            shape("A5"),
            vec![[1u16].into_iter().collect()],
        )
        .unwrap();
        let mut oracle = ModalityOracle::empty();
        // claims mod = 3 for the Borel case J = {1,2,3,4,5}, table says 1
        oracle.insert(
            0,
            &[1, 2, 3, 4, 5],
            &[],
            ModalityValue::Exact(3),
            "bogus".into(),
        );
        let err = classify_parabolic_irreducible(&spec, &oracle, &t).unwrap_err();
        assert!(matches!(err, ClassifyError::OracleInconsistent { .. }));
    }

    #[test]
    fn parabolic_without_oracle_data_is_unknown() {
        let t = table();
        // B7 is reducible as a Borel, so the shortcut does not apply; the
        // non-Borel Levi classes have no oracle data
        let spec = ParabolicSpec::new(shape("B7"), vec![[1u16].into_iter().collect()]).unwrap();
        let verdict =
            classify_parabolic_irreducible(&spec, &ModalityOracle::empty(), &t).unwrap();
        // the Borel witness J = Pi has relative subset {1}, so it needs the
        // oracle; smaller J avoiding node 1 are Borel cases and pass
        assert_eq!(verdict.status, Status::Unknown);
    }

    #[test]
    fn monotonicity_reports_are_clean() {
        let t = table();
        for name in ["A15", "B6", "G2", "E6"] {
            let report = levi_monotonicity_check(&shape(name), &t).unwrap();
            assert_eq!(report.ambient_status, Status::Irreducible, "{name}");
            assert!(report.violations.is_empty(), "{name}");
            let rank = shape(name).ssrank();
            assert_eq!(report.subsets_checked, 1u64 << rank, "{name}");
        }
        // reducible ambient: vacuous
        let report = levi_monotonicity_check(&shape("B7"), &t).unwrap();
        assert_eq!(report.ambient_status, Status::Reducible);
        assert_eq!(report.subsets_checked, 0);

        let report = levi_monotonicity_check(&shape("A2,A2"), &t).unwrap();
        assert!(report.violations.is_empty());
        assert_eq!(report.subsets_checked, 16);
    }

    #[test]
    fn parabolic_dimension_formula() {
        // I = {1} in A2: dim p = 2 + 3 + 1 = 6
        let spec = ParabolicSpec::new(shape("A2"), vec![[1u16].into_iter().collect()]).unwrap();
        assert_eq!(spec.dim_parabolic(), 6);
        let borel = ParabolicSpec::borel(shape("A2"));
        assert_eq!(borel.dim_parabolic(), 5);
    }
}

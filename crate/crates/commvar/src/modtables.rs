//! Tabulated values of the modality of a Borel subgroup acting on the
//! nilradical, `mod(B:u)`, with exact / lower-bound semantics and additive
//! arithmetic over products of simple types.
//!
//! The built-in table covers types A1..A17, B2..B8, C3..C8, D4..D8 and the
//! exceptional types; A16, A17 and E8 only carry lower bounds. Everything
//! else is `Unknown` by default. The opt-in extrapolation flag supplies
//! `LowerBound(rank + 1)` beyond the table (the modality grows quadratically
//! with the rank, so it eventually exceeds the rank in every family), which
//! is enough to settle reducibility at high rank without asserting exact
//! values.

use crate::rootsys::{Family, SimpleType};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TableError {
    #[error("override entry {family}{rank}: {reason}")]
    BadOverride {
        family: String,
        rank: u16,
        reason: String,
    },
    #[error("cannot parse override file: {0}")]
    Parse(String),
}

/// An exact modality value, a lower bound for it, or no information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum ModalityValue {
    Exact(u64),
    LowerBound(u64),
    Unknown,
}

impl ModalityValue {
    /// Additive arithmetic: exact values add; any lower-bound summand makes
    /// the sum a lower bound on the sum of known values; any unknown summand
    /// makes the sum unknown.
    pub fn add(self, other: ModalityValue) -> ModalityValue {
        use ModalityValue::*;
        match (self, other) {
            (Unknown, _) | (_, Unknown) => Unknown,
            (Exact(a), Exact(b)) => Exact(a + b),
            (Exact(a), LowerBound(b))
            | (LowerBound(a), Exact(b))
            | (LowerBound(a), LowerBound(b)) => LowerBound(a + b),
        }
    }

    pub fn sum<I: IntoIterator<Item = ModalityValue>>(values: I) -> ModalityValue {
        values
            .into_iter()
            .fold(ModalityValue::Exact(0), ModalityValue::add)
    }

    /// The numeric value when one is known (exact value or bound).
    pub fn known_value(self) -> Option<u64> {
        match self {
            ModalityValue::Exact(v) | ModalityValue::LowerBound(v) => Some(v),
            ModalityValue::Unknown => None,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, ModalityValue::Exact(_))
    }
}

impl std::fmt::Display for ModalityValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModalityValue::Exact(v) => write!(f, "{v}"),
            ModalityValue::LowerBound(v) => write!(f, ">= {v}"),
            ModalityValue::Unknown => write!(f, "unknown"),
        }
    }
}

/// A table entry with its provenance string (mandatory, also for overrides).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub value: ModalityValue,
    pub provenance: String,
}

/// Schema of an override file: a list of `[[entry]]` records.
#[derive(Debug, Deserialize)]
struct OverrideFile {
    #[serde(default)]
    entry: Vec<OverrideEntry>,
}

#[derive(Debug, Deserialize)]
struct OverrideEntry {
    family: String,
    rank: u16,
    kind: String,
    value: Option<u64>,
    provenance: Option<String>,
}

/// The modality table: immutable after load, freely shared.
#[derive(Debug, Clone)]
pub struct ModalityTable {
    entries: BTreeMap<SimpleType, TableEntry>,
    extrapolate: bool,
}

const PROV_A_SMALL: &str =
    "tabulated mod(B:u), type A: degrees of unitriangular adjoint orbit-count polynomials, rank <= 15";
const PROV_A_BOUND: &str = "tabulated lower bound for mod(B:u), type A";
const PROV_CLASSICAL: &str =
    "tabulated mod(B:u): unipotent orbit parametrization for rank <= 8 via mod(U:u) = mod(B:u) + ssrank";
const PROV_E8_BOUND: &str = "tabulated lower bound for mod(B:u), type E8";
const PROV_EXTRAPOLATED: &str =
    "extrapolated lower bound: mod(B:u) exceeds the rank beyond the tabulated range";

impl ModalityTable {
    /// The built-in table. Beyond-table types report `Unknown`.
    pub fn builtin() -> Self {
        let mut entries = BTreeMap::new();
        let mut put = |family: Family, rank: u16, value: ModalityValue, prov: &str| {
            let t = SimpleType::new(family, rank).expect("builtin table entry");
            entries.insert(
                t,
                TableEntry {
                    value,
                    provenance: prov.to_string(),
                },
            );
        };
        use ModalityValue::{Exact, LowerBound};
        let a_exact = [0, 0, 0, 0, 1, 1, 2, 3, 4, 5, 7, 8, 10, 12, 14];
        for (i, &v) in a_exact.iter().enumerate() {
            put(Family::A, i as u16 + 1, Exact(v), PROV_A_SMALL);
        }
        put(Family::A, 16, LowerBound(16), PROV_A_BOUND);
        put(Family::A, 17, LowerBound(19), PROV_A_BOUND);
        for (i, &v) in [0, 1, 2, 3, 5, 7, 9].iter().enumerate() {
            put(Family::B, i as u16 + 2, Exact(v), PROV_CLASSICAL);
        }
        for (i, &v) in [1, 2, 3, 5, 7, 9].iter().enumerate() {
            put(Family::C, i as u16 + 3, Exact(v), PROV_CLASSICAL);
        }
        for (i, &v) in [1, 2, 4, 5, 8].iter().enumerate() {
            put(Family::D, i as u16 + 4, Exact(v), PROV_CLASSICAL);
        }
        put(Family::G, 2, Exact(1), PROV_CLASSICAL);
        put(Family::F, 4, Exact(4), PROV_CLASSICAL);
        put(Family::E, 6, Exact(5), PROV_CLASSICAL);
        put(Family::E, 7, Exact(10), PROV_CLASSICAL);
        put(Family::E, 8, LowerBound(20), PROV_E8_BOUND);
        Self {
            entries,
            extrapolate: false,
        }
    }

    /// Built-in table with the beyond-table lower-bound extrapolation
    /// enabled: A_l (l >= 18) and B/C/D_l (l >= 9) report
    /// `LowerBound(rank + 1)`.
    pub fn builtin_extrapolating() -> Self {
        let mut t = Self::builtin();
        t.extrapolate = true;
        t
    }

    pub fn extrapolates(&self) -> bool {
        self.extrapolate
    }

    /// Replaces or extends entries from an override file (TOML text with
    /// `[[entry]]` records carrying family, rank, kind, value, provenance).
    pub fn apply_overrides(&mut self, text: &str) -> Result<(), TableError> {
        let parsed: OverrideFile =
            toml::from_str(text).map_err(|e| TableError::Parse(e.to_string()))?;
        for entry in parsed.entry {
            let bad = |reason: &str| TableError::BadOverride {
                family: entry.family.clone(),
                rank: entry.rank,
                reason: reason.to_string(),
            };
            let family: Family = entry
                .family
                .parse()
                .map_err(|_| bad("unknown family (expected one of A..G)"))?;
            let t = SimpleType::new(family, entry.rank)
                .map_err(|e| bad(&format!("invalid type: {e}")))?;
            let value = match entry.kind.as_str() {
                "exact" => ModalityValue::Exact(
                    entry.value.ok_or_else(|| bad("exact entry needs a value"))?,
                ),
                "lower-bound" | "lower_bound" => ModalityValue::LowerBound(
                    entry
                        .value
                        .ok_or_else(|| bad("lower-bound entry needs a value"))?,
                ),
                "unknown" => ModalityValue::Unknown,
                other => return Err(bad(&format!("unknown kind `{other}`"))),
            };
            let provenance = entry
                .provenance
                .filter(|p| !p.trim().is_empty())
                .ok_or_else(|| bad("provenance string is mandatory"))?;
            self.entries.insert(t, TableEntry { value, provenance });
        }
        Ok(())
    }

    /// `mod(B:u)` for a simple type: the table entry if present, otherwise
    /// the extrapolated bound (if enabled) or `Unknown`.
    pub fn mod_borel(&self, t: SimpleType) -> ModalityValue {
        if let Some(entry) = self.entries.get(&t) {
            return entry.value;
        }
        if self.extrapolate {
            return ModalityValue::LowerBound(u64::from(t.rank()) + 1);
        }
        ModalityValue::Unknown
    }

    /// Entry with provenance; extrapolated values are synthesized on the fly.
    pub fn entry(&self, t: SimpleType) -> Option<TableEntry> {
        if let Some(entry) = self.entries.get(&t) {
            return Some(entry.clone());
        }
        if self.extrapolate {
            return Some(TableEntry {
                value: ModalityValue::LowerBound(u64::from(t.rank()) + 1),
                provenance: PROV_EXTRAPOLATED.to_string(),
            });
        }
        None
    }

    /// `mod(B:u)` of a product of simple types: the modality is additive
    /// over central products.
    pub fn mod_borel_product(&self, types: &[SimpleType]) -> ModalityValue {
        ModalityValue::sum(types.iter().map(|&t| self.mod_borel(t)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SimpleType, &TableEntry)> {
        self.entries.iter()
    }
}

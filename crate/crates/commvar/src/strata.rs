//! Symbolic calculator for the decomposition-class stratification of the
//! commuting variety of a parabolic subalgebra.
//!
//! A stratum is indexed by a standard Levi subset `J` (one subset per simple
//! component of the ambient shape) and a sheet `S` of the relative parabolic
//! action on the nilpotent elements of `p ∩ h`, with `dim S` and the orbit
//! dimension `j` supplied as inputs: no general sheet algorithm exists, the
//! finite-field engine provides empirical values at small rank.
//!
//! The two dimension formulas implemented here:
//!
//! ```text
//! dim C'_{H,S} = (rank G - ssrank H) + dim(p ∩ h) + (dim S - j)
//! dim C_{H,S}  = (rank G - ssrank H) + dim p      + (dim S - j)
//! ```
//!
//! and the component floor `dim p + rank G` that every irreducible component
//! of the commuting variety satisfies.

use crate::classifier::{ClassifyError, ParabolicSpec};
use crate::rootsys::{cartan_matrix, check_subset, classify_subset_cartan};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, thiserror::Error)]
pub enum StrataError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("levi specification has {given} subset groups but the shape has {expected} components")]
    LeviArity { given: usize, expected: usize },
    #[error("invalid levi subset in stratum: {0}")]
    BadSubset(crate::rootsys::RootSysError),
    #[error("stratum violates 0 <= j <= dim S <= dim(p ∩ h): j = {orbit_dim}, dim S = {sheet_dim}, dim(p ∩ h) = {bound}")]
    BadDatum {
        orbit_dim: u64,
        sheet_dim: u64,
        bound: u64,
    },
    #[error("cannot parse strata file: {0}")]
    Parse(String),
}

/// One stratum: ambient parabolic, Levi subset per component, sheet
/// dimension `dim S` and orbit dimension `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumDatum {
    pub ambient: ParabolicSpec,
    /// Levi subset `J`, one group of 1-based indices per component.
    pub levi: Vec<BTreeSet<u16>>,
    pub sheet_dim: u64,
    pub orbit_dim: u64,
}

impl StratumDatum {
    pub fn new(
        ambient: ParabolicSpec,
        levi: Vec<BTreeSet<u16>>,
        sheet_dim: u64,
        orbit_dim: u64,
    ) -> Result<Self, StrataError> {
        if levi.len() != ambient.shape().components().len() {
            return Err(StrataError::LeviArity {
                given: levi.len(),
                expected: ambient.shape().components().len(),
            });
        }
        for (subset, &ty) in levi.iter().zip(ambient.shape().components()) {
            check_subset(subset, ty.rank()).map_err(StrataError::BadSubset)?;
        }
        let datum = Self {
            ambient,
            levi,
            sheet_dim,
            orbit_dim,
        };
        let bound = datum.dim_parabolic_cap_levi();
        if !(orbit_dim <= sheet_dim && sheet_dim <= bound) {
            return Err(StrataError::BadDatum {
                orbit_dim,
                sheet_dim,
                bound,
            });
        }
        Ok(datum)
    }

    pub fn ssrank_levi(&self) -> u64 {
        self.levi.iter().map(|s| s.len() as u64).sum()
    }

    /// `dim(p ∩ h) = rank G + |Phi+_J| + |Phi+_{I ∩ J}|`.
    pub fn dim_parabolic_cap_levi(&self) -> u64 {
        let shape = self.ambient.shape();
        let mut dim = shape.dims().rank;
        for (idx, &ty) in shape.components().iter().enumerate() {
            let subset = &self.levi[idx];
            if subset.is_empty() {
                continue;
            }
            let cartan = cartan_matrix(ty);
            for part in classify_subset_cartan(&cartan, subset) {
                dim += part.positive_root_count();
            }
            let relative: BTreeSet<u16> = self.ambient.levi()[idx]
                .intersection(subset)
                .copied()
                .collect();
            if !relative.is_empty() {
                for part in classify_subset_cartan(&cartan, &relative) {
                    dim += part.positive_root_count();
                }
            }
        }
        dim
    }
}

/// `dim C'_{H,S} = (rank G - ssrank H) + dim(p ∩ h) + (dim S - j)`.
pub fn cprime_dim(d: &StratumDatum) -> u64 {
    let rank = d.ambient.shape().dims().rank;
    rank - d.ssrank_levi() + d.dim_parabolic_cap_levi() + (d.sheet_dim - d.orbit_dim)
}

/// `dim C_{H,S} = (rank G - ssrank H) + dim p + (dim S - j)`.
pub fn stratum_dim(d: &StratumDatum) -> u64 {
    let rank = d.ambient.shape().dims().rank;
    rank - d.ssrank_levi() + d.ambient.dim_parabolic() + (d.sheet_dim - d.orbit_dim)
}

/// Lower bound for the dimension of every irreducible component:
/// `dim p + rank G`.
pub fn component_floor(spec: &ParabolicSpec) -> u64 {
    spec.dim_parabolic() + spec.shape().dims().rank
}

/// Citation identifiers for strata reports.
pub mod citations {
    pub const RESTRICTED_STRATUM_DIMENSION: &str = "formula:restricted-stratum-dimension";
    pub const STRATUM_DIMENSION: &str = "formula:stratum-dimension";
    pub const COMPONENT_FLOOR: &str = "bound:component-dimension-floor";
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::ReductiveShape;

    fn gl(n: u16) -> ParabolicSpec {
        let shape = ReductiveShape::new(vec![crate::rootsys::SimpleType::new(
            crate::rootsys::Family::A,
            n - 1,
        )
        .unwrap()], 1);
        ParabolicSpec::borel(shape)
    }

    #[test]
    fn torus_stratum_in_gl3_borel() {
        // H = T: ssrank 0, dim(p ∩ h) = rank = 3, S = {0}
        let d = StratumDatum::new(gl(3), vec![BTreeSet::new()], 0, 0).unwrap();
        assert_eq!(cprime_dim(&d), 6);
        // dim C_{T,{0}} = dim b + rank = 6 + 3
        assert_eq!(stratum_dim(&d), 9);
        assert_eq!(component_floor(&d.ambient), 9);
    }

    #[test]
    fn regular_sheet_cancellation_in_a2() {
        // ambient: Borel of semisimple A2; H = full Levi (ssrank 2);
        // regular sheet: dim S = dim(u ∩ h) = 3 with j = 3
        let shape = ReductiveShape::simple("A2".parse().unwrap());
        let spec = ParabolicSpec::borel(shape);
        let full: BTreeSet<u16> = [1, 2].into_iter().collect();
        let d = StratumDatum::new(spec, vec![full], 3, 3).unwrap();
        // (rank - 2) + dim(b ∩ h) + 0 = 0 + 5 + 0
        assert_eq!(cprime_dim(&d), 5);
        assert_eq!(stratum_dim(&d), 5);
    }

    #[test]
    fn component_floor_examples() {
        assert_eq!(component_floor(&gl(4)), 14);
        let a2 = ParabolicSpec::borel(ReductiveShape::simple("A2".parse().unwrap()));
        assert_eq!(component_floor(&a2), 7);
        let spec = ParabolicSpec::new(
            ReductiveShape::simple("A2".parse().unwrap()),
            vec![[1u16].into_iter().collect()],
        )
        .unwrap();
        assert_eq!(component_floor(&spec), 8);
    }

    #[test]
    fn b7_witness_stratum_exceeds_the_floor() {
        // J = Pi in B7 with dim S - j = 7 gives a stratum of dimension
        // dim b + 7, tying the component floor dim b + 7
        let shape = ReductiveShape::simple("B7".parse().unwrap());
        let spec = ParabolicSpec::borel(shape);
        let full: BTreeSet<u16> = (1..=7).collect();
        // pick a sheet with dim S - j = 7 inside dim(u ∩ h) = 49
        let d = StratumDatum::new(spec.clone(), vec![full], 30, 23).unwrap();
        let dims = spec.shape().dims();
        assert_eq!(stratum_dim(&d), dims.dim_borel + 7);
        assert!(stratum_dim(&d) >= component_floor(&spec));
    }

    #[test]
    fn affine_relation_between_the_two_formulas() {
        let d = StratumDatum::new(gl(4), vec![[1u16, 2].into_iter().collect()], 2, 1).unwrap();
        assert_eq!(
            stratum_dim(&d) - cprime_dim(&d),
            d.ambient.dim_parabolic() - d.dim_parabolic_cap_levi()
        );
    }

    #[test]
    fn datum_invariants_enforced() {
        assert!(StratumDatum::new(gl(3), vec![BTreeSet::new()], 0, 1).is_err());
        assert!(StratumDatum::new(gl(3), vec![BTreeSet::new()], 99, 0).is_err());
        assert!(StratumDatum::new(gl(3), vec![[9u16].into_iter().collect()], 0, 0).is_err());
    }
}

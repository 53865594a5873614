//! Decision procedures for commuting varieties of Borel and parabolic
//! subalgebras of reductive Lie algebras.
//!
//! The crate has three layers:
//!
//! * combinatorics of root systems and standard Levi subsets ([`rootsys`]),
//!   the tabulated Borel modality data ([`modtables`]), and the classifiers
//!   built on top of them ([`classifier`], [`strata`]);
//! * a brute-force finite-field verification engine for `gl_n` at small rank
//!   ([`fforacle`]): exact point counts of commuting varieties, orbit
//!   censuses under Borel and unitriangular groups, polynomial degree fits,
//!   and tangent-space smoothness tests;
//! * a command line surface ([`cli`]) that ties the two together with
//!   reproducible structured reports ([`report`]).

pub mod classifier;
pub mod cli;
pub mod fforacle;
pub mod modtables;
pub mod report;
pub mod rootsys;
pub mod strata;

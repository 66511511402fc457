//! Exact verification of genus 2 and genus 3 Gromov-Witten identities built
//! from Hodge integrals, equivariant localization and degeneration graphs.

pub mod exact_arith;
pub mod psi_recursion;
pub mod data;
pub mod hodge_oracle;
pub mod cohomology_ring;
pub mod localization_engine;
pub mod chern_geometry;
pub mod sum_formula;
pub mod selftest;

pub use chern_geometry::{ChernData, ChernError, DeltaPoly, GenusOneInsertion};
pub use cohomology_ring::{BaseSpace, Factor, RingError, TautClass};
pub use data::{DataError, DataSource};
pub use exact_arith::{ArithError, EquivariantScalar, Rational, UniPoly, WeightPoint, WeightPoly};
pub use hodge_oracle::{HodgeError, HodgeMonomial, HodgeOracle, RubberKey};
pub use localization_engine::{LocalizationError, LocalizationProblem, ProblemEvaluation};
pub use psi_recursion::{psi_intersect, PsiError};
pub use sum_formula::{Citations, Context, DeltaSpec, SumError, VerificationReport, Verdict};

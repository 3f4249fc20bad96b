//! Exact computations for trimmed graded double Ore extensions of a quantum
//! plane: presentation handling, deglex rewriting with a confluence
//! certificate, Koszul data, and minimal graded free resolutions, all over
//! the rationals or a prime field.

pub mod error;
pub mod koszul;
pub mod linalg;
pub mod poly;
pub mod presentation;
pub mod resolution;
pub mod rewriting;
pub mod scalar;
pub mod word;

pub use error::{Error, Result};
pub use koszul::{
    koszul_complex, koszul_space, koszul_space_with_budget, koszulness_check, quadratic_data,
    KoszulnessReport, QuadraticData, DEFAULT_SIZE_BUDGET,
};
pub use linalg::{determinant, ScalarMatrix, SparseVec, Subspace};
pub use poly::NcPolynomial;
pub use presentation::{
    build_base_algebra, build_double_extension, family_k, iterated_ore_check, parse_presentation,
    sigma_matrix, BaseData, DEData, OreCheckReport, OreVerdict, Presentation, SigmaMatrix,
    GENERATOR_NAMES,
};
pub use resolution::{
    compose, cyclic_module_resolution_x, cyclic_module_resolution_y, degreewise_exactness,
    golden_resolution_k, minimal_resolution, poincare_series, syzygy_evaluate, verify_complex,
    BettiTable, Complex, ExactnessReport, FreeModule, ModuleMap, PoincareSeries, SyzygyCandidate,
    VerifyReport,
};
pub use rewriting::{
    make_rewrite_system, GsBasisReport, DegreeBases, Overlap, RewriteRule, RewriteSystem,
};
pub use scalar::{Field, Scalar};
pub use word::{deglex_compare, Word};

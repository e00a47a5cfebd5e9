//! Algebraic curvature models `(V, <.,.>, J, A)` for almost Hermitian geometry.
//!
//! The crate builds the canonical curvature tensors, evaluates the Jacobi,
//! complex Jacobi and skew-symmetric curvature operators, checks the
//! classical identities of compatible complex models exactly on finite
//! certifying sets, classifies tensors into Gray's subspaces, and
//! reconstructs curvature tensors from Jacobi-operator oracles.
//!
//! Vectors and operators are `nalgebra` dense types in a fixed orthonormal
//! basis; the inner product is always the standard dot product.

pub mod basis;
pub mod constructions;
pub mod error;
pub mod gray;
pub mod identities;
pub mod linalg;
pub mod operators;
pub mod random;
pub mod reconstruct;
pub mod space;
pub mod tensor;

pub use basis::{curvature_space_basis, CurvatureBasis, Subspace};
pub use constructions::{
    counterexample_model, discrepancy_audit, jacobi_equivalence_check, twistor_point_model,
    DiscrepancyAudit, EquivalenceReport, TwistorModel,
};
pub use error::{CurvError, Result};
pub use gray::{gray_classify, p2_map, GrayClassification};
pub use identities::{
    check_compatibility, check_gray_yano_identity, check_sato, check_vanhecke, lemma23_battery,
    subspace_dimension, Compatibility, CompatibilityReport, Constraint, IdentityReport,
    Lemma23Report, SatoVariant,
};
pub use operators::{OperatorKind, OperatorMatrix, ScalarReport, Spectrum};
pub use reconstruct::{
    reconstruct_from_complex_jacobi, reconstruct_from_jacobi, ComplexJacobiOracle, JacobiOracle,
    Reconstruction,
};
pub use space::{
    build_quaternion_triple, spanning_lines, theta_map, validate_complex_structure,
    ComplexIsometry, ComplexLine, ComplexStructure, QuaternionTriple,
};
pub use tensor::{
    build_a0, build_aphi, AlgebraicCurvatureTensor, ComplexModel, Tensor4, ValidationMode,
};

pub type Matrix = nalgebra::DMatrix<f64>;
pub type Vector = nalgebra::DVector<f64>;

/// Default tolerance for validation and identity checks.
pub const DEFAULT_TOL: f64 = 1e-10;

//! Exact symbolic engine for the homogeneous variational bicomplex of
//! single-integral problems.
//!
//! Expressions and differential forms live on the formal tower of
//! derivative coordinates `q^i_(p)`. On top of the exterior algebra the
//! crate provides the total derivative `d_T`, the vertical endomorphism
//! `S`, the operator `P` that inverts `d_T`, the variational derivative
//! `delta`, Euler-Lagrange and Hilbert forms, the Helmholtz-Sonin test and
//! constructive recovery of Lagrangians from variational source forms.
//!
//! ```
//! use homvar::{euler_lagrange, parse_expression, recover_first_order};
//!
//! let l = parse_expression("q1'^2/2", 1).unwrap();
//! let eps = euler_lagrange(&l, 1).unwrap();
//! assert_eq!(eps.to_string(), "-q1''*dq1");
//!
//! let report = recover_first_order(&eps).unwrap();
//! assert!(report.verification);
//! assert_eq!(report.lagrangian, l);
//! ```

pub mod error;
pub mod expr;
pub mod form;
pub mod lagrangian;
pub mod operators;
pub mod parse;
pub mod recovery;
pub mod sample;

pub use error::{Error, ParseError, Result};
pub use expr::{rational, Coordinate, Expression, Function, Rational};
pub use form::{CoordinateVectorField, DifferentialForm};
pub use lagrangian::{
    check_homogeneous, euler_lagrange, first_order_structure, helmholtz_coefficients,
    helmholtz_sonin, hilbert_form, homogenize, projectability_residuals, second_order_decompose,
    HelmholtzCoefficients, HomogeneityReport, SecondOrderDecomposition, SourceForm,
};
pub use operators::{
    canonical_representative, delta_field, p_operator, psi_membership, total_derivative,
    variational_delta, vertical_s, PsiMembership, TotalDerivative,
};
pub use parse::{parse_expression, parse_form};
pub use recovery::{
    fiber_potential, gauge_reduce, poincare_h, recover_first_order, recover_lagrangian,
    RecoveryReport,
};

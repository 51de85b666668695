//! Bell-type numbers and polynomials computed two independent ways: exactly,
//! through normal ordering of functions of the boson number operator, and
//! numerically, through generalized Dobinski series with rigorous truncation
//! bounds. Also provides the Dirac-comb solutions of the associated moment
//! problems, generating-function evaluation, and a truncated Fock-space
//! oracle used to cross-check both routes.

pub mod comb;
pub mod error;
pub mod fock;
pub mod genfun;
pub mod normal;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod real;
pub mod series;
pub mod stirling;
pub mod verify;

pub use error::{Error, Result};
pub use normal::{bell_type_eval, stirling_type, HamiltonianSpec, NormalForm};
pub use par::Execution;
pub use poly::PolynomialQ;
pub use real::{EvalConfig, EvalResult};
pub use series::{
    cross_check, eval_bell_type, eval_bell_type_many, eval_bell_type_poly, CrossCheckReport,
    Scale, SeriesSpec,
};
pub use stirling::{
    bell_number, bell_polynomial, monomial_to_falling, restricted_bell, restricted_bell_polynomial,
    stirling2,
    StirlingTriangle,
};
pub use comb::{
    build_comb, check_distribution, classify, export_comb, moment, write_csv, Atom, CombRow,
    DiracComb, DistributionReport, MomentProblem,
};
pub use genfun::{
    egf_closed_form_bell, egf_eval, egf_partial_from_numbers, ogf_eval, GenFunKind, GenFunSpec,
};
pub use fock::{
    coherent_expect_exp, expect_number_power, verify_normal_form, verify_normal_form_grid,
    verify_normal_form_with, CoherentVector, FockTruncation, NormalFormReport,
};

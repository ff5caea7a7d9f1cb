//! Heights, lower bounds for linear forms in logarithms, and an auditor for
//! the constant chains built from them.

mod audit;
mod baker;
mod forms;
mod height;

pub use audit::{
    audit_absolute_chain, audit_k1_chain, fixed_point_upper, k1_bound_at, one_plus_log_sq,
    AuditEntry, BoundAudit, TOLERANCE,
};
pub use baker::{
    av_count_bound, gl_lemma_bound, lmn_b_prime, lmn_coefficient, lmn_two_log_bound, matveev_bound,
    matveev_constant, AvBound, LinearFormSpec, LmnBound, LmnBranch, TwoLogSpec,
};
pub use forms::{gamma, gamma_prime, lambda, spot_check, FormCheck};
pub use height::{height, height_calculus, HeightBound, HeightExpr, QuadraticNumber};

//! Numeric foundation: special functions, small dense linear algebra, and
//! reproducible random streams.

pub mod linalg;
pub mod rng;
pub mod special;
pub mod sum;

pub use linalg::{
    check_symmetric, cholesky, mvn_logpdf, mvn_logpdf_chol, solve_lower, spd_inverse, sym_eigen,
    sym_sqrt,
};
pub use rng::{draw_chisq, draw_open01, draw_std_normal, RngStream};
pub use special::{
    chi_squared_quantile, erf, erfc, erfcx, log_gamma, norm_logcdf, norm_quantile, reg_inc_beta,
    reg_lower_gamma, std_normal_cdf, std_normal_logpdf, student_t_cdf,
};
pub use sum::pairwise_sum;

//! Error-to-exit-code mapping.
//!
//! The binary distinguishes three failure classes: bad input (exit 2),
//! violated mathematical conditions (exit 3), and optimizer non-convergence
//! (exit 4, with results still written). Success is exit 0.

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_MATH: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;

/// A command failure carrying the process exit code and a message for
/// stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    /// Invalid input: unparsable values, missing columns, bad dimensions.
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    /// Filesystem problems reading or writing a user-named path.
    pub fn io(path: &std::path::Path, err: &std::io::Error) -> Self {
        Failure::invalid(format!("{}: {err}", path.display()))
    }
}

impl From<ncst::Error> for Failure {
    fn from(err: ncst::Error) -> Self {
        use ncst::Error::*;
        let code = match err {
            // These carry the name of the violated condition in their
            // message (idempotency, rank, moment existence, finiteness of
            // the objective), so the distinction the exit code draws is
            // between inputs that are malformed and inputs that are
            // well-formed but mathematically ineligible.
            ConditionViolated { .. } | RankZero | MomentUndefined { .. } | NonFiniteObjective => {
                EXIT_MATH
            }
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

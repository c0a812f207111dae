//! One module per CLI verb. Each `run` takes parsed arguments and returns
//! the process exit code, or a [`Failure`](crate::failure::Failure) whose
//! message goes to stderr.

pub mod compare;
pub mod density;
pub mod fit;
pub mod quadform;
pub mod sample;
pub mod simstudy;
pub mod wdbc;

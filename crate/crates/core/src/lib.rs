pub mod calibration;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod estimation;
pub mod families;
pub mod gof;
pub mod simulation;

pub use error::{Error, Result};
pub use families::{Family, LtrcSample, Model, Params, Truncated, Window};

pub mod error;
pub mod kernel;
pub mod typed;
pub mod ddcoeff;
pub mod typewriter;
pub mod cmdfunctor;
pub mod boxtensor;
pub mod models;
pub mod random;
pub mod format;
pub mod report;

pub use error::{Error, Result};
pub use report::Report;

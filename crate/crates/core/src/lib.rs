pub mod assets;
pub mod error;
pub mod lhv;
pub mod paradox;
pub mod quantum;
pub mod report;
pub mod sim;
pub mod specfile;

pub use error::{Error, Result};

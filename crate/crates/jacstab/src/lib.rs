//! JSON formats, the fixture corpus, structured reports and the
//! command-line driver for `jacstab-core`.

pub mod acceptance;
pub mod cli;
pub mod corpus;
pub mod io;
pub mod report;

pub use io::DocError;
pub use report::{Finding, Report};

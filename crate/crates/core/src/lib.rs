//! Qubit channel representations and degradability tests.

pub mod channel;
pub mod degradability;
pub mod error;
pub mod matrix;
pub mod random;
pub mod symext;

pub use channel::{BlochParams, Channel, ChoiMatrix, KrausSet, PauliTransfer, Rank2Params};
pub use degradability::{classify, ClassificationReport, Verdict, VerdictState};
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};

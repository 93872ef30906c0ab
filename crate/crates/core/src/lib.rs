//! Strong-separation logic with points-to and list-segment atoms.

pub mod abduce;
pub mod ams;
pub mod decide;
pub mod error;
pub mod formula;
pub mod model;
pub mod oracle;
pub mod qbf;
pub mod symexec;

pub use ams::{AbstractionSet, Ams, AmsCore, EdgeLabel, Shape};
pub use error::{Error, ParseError, Result};
pub use formula::{parse, Formula, Var};
pub use model::{Heap, Loc, Model, Stack};
pub use oracle::Mode;

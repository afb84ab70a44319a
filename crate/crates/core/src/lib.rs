pub mod accum;
pub mod adeles;
pub mod arith;
pub mod besicovitch;
pub mod equidist;
pub mod multiplicative;
pub mod pet;
pub mod error;
pub mod ipcomb;
pub mod real;
pub mod sequences;
pub mod vdc;

pub use error::{Error, Result};

// `!(x > 0.0)` style checks reject NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod cli;
pub mod error;
pub mod io;
pub mod majorana;
pub mod mixed;
pub mod rotmatch;
mod search;
pub mod states;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use tolerances::Tolerances;

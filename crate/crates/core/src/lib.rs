//! Braided unitary fusion categories from skeletal data.

pub mod algebra;
pub mod braided;
pub mod category;
pub mod center;
pub mod cli;
pub mod diagram;
pub mod error;
pub mod fusion_ring;
mod linalg;
pub mod local_modules;
pub mod numeral;

pub use error::{Error, Result};
pub use numeral::{Numeral, C64};

pub mod algebra;
pub mod blowup;
pub mod classify;
pub mod error;
pub mod foliation;
pub mod forms;
pub mod io;
pub mod transverse;

pub use error::{Error, Result};

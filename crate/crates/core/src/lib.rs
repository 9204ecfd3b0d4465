pub mod error;
pub mod flip;
pub mod gcp;
pub mod gen;
pub mod io;
pub mod limits;
pub mod logic;
pub mod reductions;
pub mod strips;
pub mod verify;

pub use error::{Error, Result};
pub use limits::Limits;

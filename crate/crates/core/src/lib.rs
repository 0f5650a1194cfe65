//! Compiles argumentation frameworks (and generalized acceptance-condition
//! networks) into three-valued logical expressions whose instantiations
//! enumerate exactly the complete labelings.

pub mod blocks;
pub mod error;
pub mod framework;
pub mod io;
pub mod solver;
pub mod stability;
pub mod tri;

pub use error::{Error, Result};

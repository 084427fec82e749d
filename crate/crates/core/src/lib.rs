//! Exact Hopf algebra of rooted trees and Hopf-algebraic renormalization
//! of Kreimer's toy model.

pub mod conv;
pub mod dse;
pub mod error;
pub mod forests;
pub mod hopf;
pub mod oracle;
pub mod polyhopf;
pub mod rings;
pub mod toymodel;
pub mod universal;
pub mod verify;

pub use conv::{LinMap, MapKind};
pub use error::{Error, Result};
pub use forests::{Forest, Tree};
pub use hopf::{HElem, TensorElem};

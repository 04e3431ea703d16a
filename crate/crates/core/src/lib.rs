//! Bit-packed binary matrices, directed strongly regular graph checks, and
//! the Kronecker-product family construction with its seed searches.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod dsrg;
pub mod error;
pub mod family;
pub mod matrix;
pub mod search;

pub use dsrg::{DsrgParams, VerifyMode, VerifyReport};
pub use error::{Error, Result, SeedClause};
pub use family::{FamilySpec, FamilyTerm};
pub use matrix::{BinaryMatrix, IntMatrix};

//! Toric varieties of Weyl chamber fans, their functor of points in terms of
//! R-data, the type A cohomology ring and Losev–Manin chains of curves.

pub mod error;
pub mod fan;
pub mod lattice;
pub mod losev_manin;
pub mod par;
pub mod rdata;
pub mod root_system;
pub mod type_a;

pub use error::{Error, Result};
pub use par::Strategy;

//! Counts and masses of totally ramified quartic extensions of 2-adic fields,
//! split by Galois closure group and discriminant valuation.
//!
//! The closed forms live in [`counts`] and [`masses`]. The [`padic`] engine and
//! the [`oracle`] enumerations check them by brute force over concrete fields.

pub mod counts;
pub mod exact;
pub mod masses;
pub mod oracle;
pub mod padic;
pub mod params;
pub mod residue;
pub mod sweep;

pub use counts::{count, CountTable, FormulaError};
pub use masses::MassTable;
pub use params::{FieldParams, GroupTag, MinusOneClass, ParamsError};

//! Truncated 2-adic arithmetic and the valuation-theoretic predicates the
//! oracles rely on.

mod field;
mod quad;
mod quartic;
mod ring;
mod roots;
mod spec;
mod squares;

use thiserror::Error;

pub use field::{arith, ArithOp, LocalElement, LocalField};
pub use roots::{count_integral_roots, count_roots_from};
pub use quad::{classify_tower, classify_tower_pair, QuadElem, QuadExt};
pub use quartic::{EisensteinQuartic, NewtonPolygon};
pub use spec::{derive_params, FieldSpec};


pub use squares::{
    hecke_disc, hilbert_symbol, is_square, square_class, square_class_basis, square_class_reps, HeckeDisc,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("division by an element of valuation {0}")]
    DivisionByNonUnit(u32),
    #[error("not Eisenstein: {0}")]
    NotEisenstein(String),
    #[error("element is a square")]
    Square,
    #[error("quadratic extension is unramified")]
    NotRamified,
    #[error("invalid field spec: {0}")]
    InvalidSpec(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

impl PadicError {
    pub fn is_precision(&self) -> bool {
        matches!(self, PadicError::PrecisionExhausted(_))
    }
}

/// Runs `op` at the field's precision, doubling on exhaustion until the
/// representable limit.
pub fn with_retry<T>(
    field: &LocalField,
    mut op: impl FnMut(&LocalField) -> Result<T, PadicError>,
) -> Result<T, PadicError> {
    let mut k = field.clone();
    loop {
        match op(&k) {
            Err(e) if e.is_precision() => match k.doubled() {
                Ok(next) => k = next,
                Err(_) => return Err(e),
            },
            other => return other,
        }
    }
}

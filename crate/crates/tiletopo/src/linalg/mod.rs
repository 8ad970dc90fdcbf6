//! Words, componentwise vector algebra, and the two numeric backends.
//!
//! Every operation here is pure and allocation-per-value; vectors are
//! immutable once built, so values are freely shareable across threads.

mod scalar;
mod vector;
mod word;

pub use scalar::{Rational, Scalar};
pub use vector::Vector;
pub use word::Word;

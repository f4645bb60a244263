//! Exact symbolic model of the universal real tree of valence κ, its
//! filtration by Cantor–Bendixson complexity, explicit isometries, and the
//! Cauchy-escape construction that shows each filtration level is
//! incomplete.

pub mod block;
pub mod cbrank;
pub mod construct;
pub mod dot;
pub mod element;
pub mod error;
pub mod gen;
pub mod isometry;
pub mod metric;
pub mod ordinal;
pub mod otype;
pub mod rational;
pub mod sexpr;
pub mod suites;
pub mod witness;

pub use element::{Alphabet, Element, Label};
pub use error::{Error, Result};
pub use ordinal::Ordinal;
pub use rational::Q;

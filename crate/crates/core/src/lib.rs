//! Operators in classical Lie algebras over finite fields: normal forms under
//! the adjoint group action, reversing (twisted) witnesses, and the algebraic
//! identities around them.

pub mod blocks;
pub mod canonical;
pub mod cayley;
pub mod error;
pub mod exec;
pub mod factor;
pub mod field;
pub mod form;
pub mod identities;
pub mod matrix;
pub mod orbit;
pub mod poly;
pub mod sample;
pub mod subspace;
pub mod twisted;
pub mod verify;
pub mod witness;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use matrix::{Matrix, Vector};
pub use poly::Poly;
pub use subspace::Subspace;
pub use form::{FormKind, FormSpace, GroupKind};
pub use twisted::TwistedElement;
pub use blocks::{classify, BlockVariant, Decomposition, SimpleBlock};

//! Exact computations with finitely generated maximal Cohen–Macaulay modules
//! over the curve singularity `S = F_p[x,y]/(x²y)`.

pub mod ar;
pub mod catalog;
pub mod cb;
pub mod context;
pub mod error;
pub mod facts;
pub mod field;
pub mod hom;
pub mod linalg;
pub mod module;
pub mod pattern;
pub mod quilt;
pub mod ring;
pub mod verify;

pub use error::{Error, Result};
pub use field::Fp;

//! Linear algebra over `F₂` and finite-dimensional path algebras.

mod algebra;
mod bitmatrix;
mod linsys;

pub use algebra::{
    build_algebra, strand_algebra_torus, torus_algebra, torus_iso, torus_presentation,
    AlgebraIso, BasisElement, Element, PathAlgebra, QuiverArrow, QuiverPresentation,
};
pub use bitmatrix::{rank, solve_linear, BitMatrix};
pub use linsys::LinearSystem;

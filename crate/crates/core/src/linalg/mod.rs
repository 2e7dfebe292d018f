//! Dense kernels for SL(d,R): matrices, Jacobi SVD, Cartan projection.

mod cartan;
mod matrix;
mod scaled;
mod svd;
mod tolerance;

pub use cartan::{
    cartan_projection, cartan_projection_with, kak, kak_with, root_gaps, CartanVector,
    KakDecomposition,
};
pub use matrix::{Matrix, SquareMatrix};
pub use scaled::ScaledElement;
pub use svd::{singular_values, svd, Svd};
pub use tolerance::Tolerances;

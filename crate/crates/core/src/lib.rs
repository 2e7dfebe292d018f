//! Desk-scale computations for Anosov representations of free groups into
//! SL(d,R): Cartan projections and singular value gaps, flag manifold
//! dynamics, URU certification over word balls, Schottky constructions,
//! and Bruhat-order thickenings cutting out domains of proper discontinuity.

pub mod certify;
pub mod domain;
pub mod error;
pub mod flag;
pub mod io;
pub mod limit;
pub mod linalg;
pub mod representation;
pub mod sampling;
pub mod schottky;
pub mod weyl;
pub mod words;

pub use error::{Error, Result};

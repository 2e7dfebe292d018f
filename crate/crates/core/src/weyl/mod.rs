//! The type-A Weyl group `S_d`: Bruhat order, faces, thickenings.

mod element;
mod face;
mod thickening;

pub use element::{bruhat_leq, longest_element, opposition, WeylElement};
pub use face::{face_stabilizer, relative_position_coset, FaceType};
pub(crate) use face::coset_rep_from_blocks;
pub use thickening::{classify_thickening, enumerate_balanced, Thickening, ThickeningClass, WeylGroup};

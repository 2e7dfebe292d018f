//! Partial flag manifolds of SL(d,R): the action, antipodality, relative
//! position, expansion rates and contraction dynamics.

mod dynamics;
mod expansion;
mod flag;

pub use dynamics::{
    attracting_fixed_flag, attracting_flag, contraction_limits, repelling_flag, Contraction,
    ContractionOptions,
};
pub use expansion::{differential, expansion_bounds, expansion_norm, expansion_rate};
pub use flag::{
    act, act_scaled, distance, is_antipodal, is_antipodal_with, random_flag, relative_position,
    relative_position_with, Antipodality, Chamber, Flag,
};

//! `SL_2(Z/cZ)`, its principal congruence subgroups and the projective line.

mod group;
mod projective;

pub use group::*;
pub use projective::*;

//! Small numerical building blocks shared by the physics modules.

pub mod special;
pub mod summation;

pub use special::{bessel_j0, bessel_jn_sequence, one_minus_cos, sin_minus_x, sinc, sinc_difference};
pub use summation::{neumaier_sum, NeumaierSum};

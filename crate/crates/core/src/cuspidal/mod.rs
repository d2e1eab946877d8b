//! Cuspidal characters of `GL_2(F_q)` and their Bessel functions.

pub mod bessel;
pub mod character;

pub use bessel::{bessel_convolution_check, bessel_duality_check, finite_bessel, FiniteBessel};
pub use character::{
    cuspidal_character, CuspidalClassFunction, FiniteAdditiveCharacter, RegularCharacter,
};

//! Physical constants (SI) and the default Rb-87 D2 realization.

use std::f64::consts::PI;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Rb-87 D2 line vacuum wavelength, m.
pub const RB87_D2_WAVELENGTH: f64 = 780.24e-9;
/// Rb-87 D2 natural linewidth, rad/s.
pub const RB87_GAMMA: f64 = 2.0 * PI * 6.07e6;
/// Transition dipole moment used for both probe and trigger, C m.
pub const RB87_DIPOLE: f64 = 2.54e-29;

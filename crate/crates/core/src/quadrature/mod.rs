//! Integration engine: Gauss rules, double-exponential and adaptive
//! Gauss–Kronrod quadrature, zero-partitioned oscillatory sums with ε
//! extrapolation, radial Fourier transforms on R^d, the s-kernel, and the
//! Lévy–Khinchin representation.

pub mod accel;
pub mod fourier;
pub mod kernel;
pub mod levy;
pub mod oscillatory;
pub mod rules;
pub mod zeros;

pub use fourier::{
    calibrate_cn, inverse_v_closed_form, inverse_v_transform, pairing_check, radial_fourier, radial_integral,
    PairingCheck, RadialProfile,
};
pub use kernel::{kernel_a, kernel_a_closed_n2};
pub use levy::{levy_khinchin_fit, levy_khinchin_residual, LevyKhinchinFit};
pub use oscillatory::{oscillatory_sum, OscillatoryConfig};
pub use rules::{adaptive, gauss_legendre, gk15, semi_infinite, tanh_sinh, QuadratureReport, Tolerance};

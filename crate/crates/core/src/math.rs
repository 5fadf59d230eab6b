// Float helpers routed through libm so the crate builds without std.

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}
#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}
#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}
#[inline]
pub fn sin_cos(x: f64) -> (f64, f64) {
    libm::sincos(x)
}

pub const TAU: f64 = core::f64::consts::TAU;
pub const PI: f64 = core::f64::consts::PI;

/// e^{2πi θ} with θ reduced mod 1 first, which keeps phases accurate for large arguments.
#[inline]
pub fn cis_turns(theta: f64) -> crate::C64 {
    let r = theta - libm::floor(theta);
    let (s, c) = sin_cos(TAU * r);
    crate::C64::new(c, s)
}

#[inline]
pub fn powi(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |a, _| a * x)
}

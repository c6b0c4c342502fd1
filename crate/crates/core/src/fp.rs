//! Scalar math routed through `std` when available, `libm` otherwise.

#[cfg(feature = "std")]
pub fn sqrt(x: f64) -> f64 {
    x.sqrt()
}
#[cfg(not(feature = "std"))]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[cfg(feature = "std")]
pub fn abs(x: f64) -> f64 {
    x.abs()
}
#[cfg(not(feature = "std"))]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[cfg(feature = "std")]
pub fn log2(x: f64) -> f64 {
    x.log2()
}
#[cfg(not(feature = "std"))]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[cfg(feature = "std")]
pub fn ceil(x: f64) -> f64 {
    x.ceil()
}
#[cfg(not(feature = "std"))]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

pub fn hypot(a: f64, b: f64) -> f64 {
    sqrt(a * a + b * b)
}

//! Scalar math shims: route through `std` intrinsics when available and fall
//! back to `libm` in `no_std` builds.

#![allow(dead_code)]

macro_rules! shim {
    ($name:ident, $libm:ident) => {
        #[inline(always)]
        pub fn $name(x: f64) -> f64 {
            #[cfg(any(feature = "std", test))]
            {
                x.$name()
            }
            #[cfg(not(any(feature = "std", test)))]
            {
                libm::$libm(x)
            }
        }
    };
}

shim!(abs, fabs);
shim!(sqrt, sqrt);
shim!(sin, sin);
shim!(cos, cos);
shim!(exp, exp);
shim!(ln, log);
shim!(log2, log2);
shim!(floor, floor);
shim!(ceil, ceil);
shim!(round, round);

#[inline(always)]
pub fn hypot(x: f64, y: f64) -> f64 {
    #[cfg(any(feature = "std", test))]
    {
        x.hypot(y)
    }
    #[cfg(not(any(feature = "std", test)))]
    {
        libm::hypot(x, y)
    }
}

/// `x^n` for small integer exponents.
#[inline(always)]
pub fn powi(x: f64, n: i32) -> f64 {
    #[cfg(any(feature = "std", test))]
    {
        x.powi(n)
    }
    #[cfg(not(any(feature = "std", test)))]
    {
        libm::pow(x, n as f64)
    }
}

//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the numerical kernels are generic over (`f32`, `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from a count.
    #[inline]
    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] component type.
pub type C<T> = Complex<T>;

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub fn creal<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// Modulus without the overflow guard of `hypot`; adequate for the well-scaled
/// quantities met in the inner loops.
#[inline]
pub fn abs_fast<T: Real>(z: C<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// `|re| + |im|`, the cheap norm used for deflation tests.
#[inline]
pub fn abs1<T: Real>(z: C<T>) -> T {
    z.re.abs() + z.im.abs()
}

pub fn cast_complex<T: Real>(z: C<f64>) -> C<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}

/// `f64` shorthand, mostly for tests and literals.
#[inline]
pub fn c64(re: f64, im: f64) -> C<f64> {
    Complex::new(re, im)
}

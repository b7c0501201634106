//! Cartesian complex scalar used throughout the crate.
//!
//! All mass values, amplitudes and matrix entries are carried by [`Complex`].
//! Only the operations needed by the evidence calculus and the dynamical
//! model are provided; there is deliberately no polar form and no
//! transcendental surface.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use thiserror::Error;

/// Hard guard for division; callers needing looser guards (e.g. the
/// combination rule's `|1-K|`) impose their own thresholds on top.
pub const EPS_DIV: f64 = 1e-300;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by a near-zero complex number (|divisor| <= {:.0e})", EPS_DIV)]
    DivisionByNearZero,
}

/// A complex number `re + im*i` in Cartesian form.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };
    pub const ONE: Complex = Complex { re: 1.0, im: 0.0 };
    pub const I: Complex = Complex { re: 0.0, im: 1.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    /// A purely real value.
    pub const fn real(re: f64) -> Self {
        Complex { re, im: 0.0 }
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Magnitude `sqrt(re^2 + im^2)`; exact `|re|` for purely real values.
    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Squared magnitude `re^2 + im^2` (no square root taken).
    pub fn abs_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    /// Multiplication by a real scalar.
    pub fn scale(self, k: f64) -> Self {
        Complex::new(self.re * k, self.im * k)
    }

    /// Checked division. Fails when the divisor magnitude is at or below
    /// [`EPS_DIV`]; the quotient follows the textbook Cartesian formula.
    pub fn try_div(self, rhs: Complex) -> Result<Complex, ScalarError> {
        if rhs.abs() <= EPS_DIV {
            return Err(ScalarError::DivisionByNearZero);
        }
        let den = rhs.re * rhs.re + rhs.im * rhs.im;
        Ok(Complex::new(
            (self.re * rhs.re + self.im * rhs.im) / den,
            (rhs.re * self.im - self.re * rhs.im) / den,
        ))
    }
}

impl From<f64> for Complex {
    fn from(re: f64) -> Self {
        Complex::real(re)
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for Complex {
    fn add_assign(&mut self, rhs: Complex) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        Complex::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + rhs.re * self.im,
        )
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(6);
        if self.im >= 0.0 || self.im.is_nan() {
            write!(f, "{:.p$} + {:.p$}i", self.re, self.im, p = prec)
        } else {
            write!(f, "{:.p$} - {:.p$}i", self.re, -self.im, p = prec)
        }
    }
}

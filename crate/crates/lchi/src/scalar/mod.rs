//! Working-precision scalar types.
//!
//! Two precisions are supported, selected by the [`Real`] implementor:
//! [`Dd`] (double-double, 106-bit significand) for the `extended64` level
//! and [`Qf`] (MPFR-backed, 128-bit significand) for `quad113`. All
//! special-function and transform code is generic over [`Real`].

mod dd;
pub(crate) mod qf;

pub mod bernoulli;

pub use dd::Dd;
pub use qf::Qf;

/// Decimal formatting of an arbitrary-precision float, shared by the CLI.
pub fn format_qf(f: &rug::Float, digits: usize) -> String {
    qf::format_float(f, digits)
}

use std::fmt::{Debug, Display};

/// Precision level of a table or record.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd)]
pub enum Precision {
    /// >= 64-bit significand (double-double: 106 bits)
    Extended64,
    /// >= 113-bit significand (MPFR at 128 bits)
    Quad113,
}

impl Precision {
    pub fn as_str(self) -> &'static str {
        match self {
            Precision::Extended64 => "extended64",
            Precision::Quad113 => "quad113",
        }
    }

    pub fn parse(s: &str) -> Option<Precision> {
        match s {
            "extended64" | "extended" => Some(Precision::Extended64),
            "quad113" | "quad" => Some(Precision::Quad113),
            _ => None,
        }
    }
}

impl Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Real-number operations needed by the tables and transforms. Methods
/// take references so the MPFR-backed type avoids needless clones.
pub trait Real: Clone + PartialOrd + Debug + Display + Send + Sync + 'static {
    fn precision() -> Precision;
    /// Relative rounding unit of the significand.
    fn eps() -> f64;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_u64(x: u64) -> Self;
    /// Exact ratio of two integers (one rounding).
    fn from_ratio(num: i128, den: i128) -> Self;
    fn to_f64(&self) -> f64;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;

    fn mul_f64(&self, o: f64) -> Self;
    fn div_f64(&self, o: f64) -> Self {
        self.mul_f64(1.0).div(&Self::from_f64(o))
    }
    fn add_f64(&self, o: f64) -> Self {
        self.add(&Self::from_f64(o))
    }

    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    /// ln(1 + self) for |self| < 1/4; used in series inner loops.
    fn ln_1p_small(&self) -> Self;
    /// (sin, cos) of 2*pi*self.
    fn sin_cos_2pi(&self) -> (Self, Self)
    where
        Self: Sized;
    fn pi() -> Self;

    /// Decimal string with the given number of significant digits.
    fn to_decimal(&self, digits: usize) -> String;

    fn is_finite(&self) -> bool {
        self.to_f64().is_finite()
    }
}

impl Real for Dd {
    fn precision() -> Precision {
        Precision::Extended64
    }
    fn eps() -> f64 {
        Dd::EPS
    }
    fn zero() -> Self {
        Dd::ZERO
    }
    fn one() -> Self {
        Dd::ONE
    }
    fn from_f64(x: f64) -> Self {
        Dd::from_f64(x)
    }
    fn from_u64(x: u64) -> Self {
        Dd::from_i128(x as i128)
    }
    fn from_ratio(num: i128, den: i128) -> Self {
        Dd::from_i128(num) / Dd::from_i128(den)
    }
    fn to_f64(&self) -> f64 {
        Dd::to_f64(*self)
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn div(&self, o: &Self) -> Self {
        *self / *o
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn abs(&self) -> Self {
        Dd::abs(*self)
    }
    fn mul_f64(&self, o: f64) -> Self {
        Dd::mul_f64(*self, o)
    }
    fn div_f64(&self, o: f64) -> Self {
        Dd::div_f64(*self, o)
    }
    fn add_f64(&self, o: f64) -> Self {
        Dd::add_f64(*self, o)
    }
    fn sqrt(&self) -> Self {
        Dd::sqrt(*self)
    }
    fn exp(&self) -> Self {
        Dd::exp(*self)
    }
    fn ln(&self) -> Self {
        Dd::ln(*self)
    }
    fn ln_1p_small(&self) -> Self {
        Dd::ln_1p_small(*self)
    }
    fn sin_cos_2pi(&self) -> (Self, Self) {
        Dd::sin_cos_2pi(*self)
    }
    fn pi() -> Self {
        Dd::PI
    }
    fn to_decimal(&self, digits: usize) -> String {
        format_decimal(self.hi, self.lo, digits)
    }
}

/// Decimal rendering of hi+lo, done in MPFR to sidestep a hand-rolled
/// binary-to-decimal conversion.
pub(crate) fn format_decimal(hi: f64, lo: f64, digits: usize) -> String {
    let mut f = rug::Float::with_val(160, hi);
    f += rug::Float::with_val(160, lo);
    qf::format_float(&f, digits)
}

/// Complex number over a [`Real`] scalar.
#[derive(Clone, Debug)]
pub struct Complex<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> Complex<T> {
    pub fn new(re: T, im: T) -> Self {
        Complex { re, im }
    }

    pub fn zero() -> Self {
        Complex {
            re: T::zero(),
            im: T::zero(),
        }
    }

    pub fn from_real(re: T) -> Self {
        Complex {
            re,
            im: T::zero(),
        }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Complex {
            re: T::from_f64(re),
            im: T::from_f64(im),
        }
    }

    /// e^(2*pi*i*t)
    pub fn unit_2pi(t: &T) -> Self {
        let (s, c) = t.sin_cos_2pi();
        Complex { re: c, im: s }
    }

    pub fn conj(&self) -> Self {
        Complex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Complex {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Complex {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Complex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        let d = o.norm_sqr();
        let n = self.mul(&o.conj());
        Complex {
            re: n.re.div(&d),
            im: n.im.div(&d),
        }
    }

    pub fn neg(&self) -> Self {
        Complex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Complex {
            re: self.re.mul(s),
            im: self.im.mul(s),
        }
    }

    pub fn scale_f64(&self, s: f64) -> Self {
        Complex {
            re: self.re.mul_f64(s),
            im: self.im.mul_f64(s),
        }
    }

    pub fn norm_sqr(&self) -> T {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// Second-order truncated Taylor series in one variable: a + b*s + c*s^2.
/// Used to evaluate d^2/ds^2 of zeta-type sums at s = 0 exactly.
#[derive(Clone, Debug)]
pub struct Jet<T> {
    pub c0: T,
    pub c1: T,
    pub c2: T,
}

impl<T: Real> Jet<T> {
    pub fn constant(c: T) -> Self {
        Jet {
            c0: c,
            c1: T::zero(),
            c2: T::zero(),
        }
    }

    /// The jet of exp(s * l) = 1 + l s + l^2/2 s^2.
    pub fn exp_linear(l: &T) -> Self {
        Jet {
            c0: T::one(),
            c1: l.clone(),
            c2: l.mul(l).mul_f64(0.5),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Jet {
            c0: self.c0.add(&o.c0),
            c1: self.c1.add(&o.c1),
            c2: self.c2.add(&o.c2),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Jet {
            c0: self.c0.sub(&o.c0),
            c1: self.c1.sub(&o.c1),
            c2: self.c2.sub(&o.c2),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Jet {
            c0: self.c0.mul(&o.c0),
            c1: self.c0.mul(&o.c1).add(&self.c1.mul(&o.c0)),
            c2: self
                .c0
                .mul(&o.c2)
                .add(&self.c1.mul(&o.c1))
                .add(&self.c2.mul(&o.c0)),
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        let q0 = self.c0.div(&o.c0);
        let q1 = self.c1.sub(&q0.mul(&o.c1)).div(&o.c0);
        let q2 = self
            .c2
            .sub(&q0.mul(&o.c2))
            .sub(&q1.mul(&o.c1))
            .div(&o.c0);
        Jet {
            c0: q0,
            c1: q1,
            c2: q2,
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Jet {
            c0: self.c0.mul(s),
            c1: self.c1.mul(s),
            c2: self.c2.mul(s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_mul_matches_f64() {
        let a: Complex<Dd> = Complex::from_f64(1.5, -2.5);
        let b: Complex<Dd> = Complex::from_f64(0.25, 3.0);
        let c = a.mul(&b);
        let (re, im) = c.to_f64_pair();
        assert!((re - (1.5 * 0.25 - (-2.5) * 3.0)).abs() < 1e-14);
        assert!((im - (1.5 * 3.0 + (-2.5) * 0.25)).abs() < 1e-14);
        let d = c.div(&b);
        assert!((d.re.to_f64() - 1.5).abs() < 1e-14 && (d.im.to_f64() + 2.5).abs() < 1e-14);
    }

    #[test]
    fn jet_div_inverts_mul() {
        let a: Jet<Dd> = Jet {
            c0: Dd::from_f64(2.0),
            c1: Dd::from_f64(-1.0),
            c2: Dd::from_f64(0.5),
        };
        let b: Jet<Dd> = Jet {
            c0: Dd::from_f64(3.0),
            c1: Dd::from_f64(4.0),
            c2: Dd::from_f64(-2.0),
        };
        let c = a.mul(&b).div(&b);
        assert!((c.c0 - a.c0).to_f64().abs() < 1e-30);
        assert!((c.c1 - a.c1).to_f64().abs() < 1e-30);
        assert!((c.c2 - a.c2).to_f64().abs() < 1e-30);
    }

    #[test]
    fn decimal_formatting() {
        let x = Dd::from_f64(1.0) / Dd::from_f64(3.0);
        let s = x.to_decimal(20);
        assert!(s.starts_with("0.33333333333333333333"), "{s}");
    }
}

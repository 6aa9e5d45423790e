//! Double-double arithmetic: an unevaluated sum of two `f64` giving a
//! ~106-bit significand. This is the `extended64` working type (the spec
//! floor is a 64-bit significand; we get 106).
//!
//! The error-free transformations (`two_sum`, `two_prod`, ...) are the
//! classical Dekker/Knuth building blocks. `two_prod` uses the hardware
//! FMA when compiled with `target_feature = "fma"`, otherwise Dekker's
//! split; both are exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// hi + lo with |lo| <= ulp(hi)/2; hi carries the sign and magnitude.
#[derive(Copy, Clone, Debug, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
const fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
const fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[cfg(target_feature = "fma")]
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[cfg(not(target_feature = "fma"))]
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    // Dekker split; exact for normal doubles
    const SPLIT: f64 = 134217729.0; // 2^27 + 1
    let p = a * b;
    let ta = SPLIT * a;
    let ahi = ta - (ta - a);
    let alo = a - ahi;
    let tb = SPLIT * b;
    let bhi = tb - (tb - b);
    let blo = b - bhi;
    let e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
    (p, e)
}


pub(crate) const RECIP_ODD: [Dd; 31] = [
    Dd::new(1.0, 0.0),
    Dd::new(0.3333333333333333, 1.850371707708594e-17),
    Dd::new(0.2, -1.1102230246251566e-17),
    Dd::new(0.14285714285714285, 7.93016446160826e-18),
    Dd::new(0.1111111111111111, 6.1679056923619804e-18),
    Dd::new(0.09090909090909091, -2.523234146875356e-18),
    Dd::new(0.07692307692307693, -4.270088556250602e-18),
    Dd::new(0.06666666666666667, 9.251858538542971e-19),
    Dd::new(0.058823529411764705, 8.163404592832033e-19),
    Dd::new(0.05263157894736842, 2.921639538487254e-18),
    Dd::new(0.047619047619047616, 2.64338815386942e-18),
    Dd::new(0.043478260869565216, 1.206764157201257e-18),
    Dd::new(0.04, -8.326672684688674e-19),
    Dd::new(0.037037037037037035, 2.05596856412066e-18),
    Dd::new(0.034482758620689655, 4.785444071660157e-19),
    Dd::new(0.03225806451612903, 8.953411488912552e-19),
    Dd::new(0.030303030303030304, -8.410780489584519e-19),
    Dd::new(0.02857142857142857, 8.921435019309293e-19),
    Dd::new(0.02702702702702703, -1.50030138462859e-18),
    Dd::new(0.02564102564102564, 8.896017825522087e-19),
    Dd::new(0.024390243902439025, -8.46206573647223e-19),
    Dd::new(0.023255813953488372, 3.2273925134452225e-19),
    Dd::new(0.022222222222222223, -8.480870326997723e-19),
    Dd::new(0.02127659574468085, 5.167261417803255e-19),
    Dd::new(0.02040816326530612, 1.6285159162231251e-18),
    Dd::new(0.0196078431372549, 2.7211348642773444e-19),
    Dd::new(0.018867924528301886, 7.20073895688486e-19),
    Dd::new(0.01818181818181818, 8.831319514063744e-19),
    Dd::new(0.017543859649122806, 9.73879846162418e-19),
    Dd::new(0.01694915254237288, 5.880418562633244e-20),
    Dd::new(0.01639344262295082, -8.531426931033477e-19),
];

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd {
        hi: 3.141592653589793,
        lo: 1.2246467991473532e-16,
    };
    pub const TWO_PI: Dd = Dd {
        hi: 6.283185307179586,
        lo: 2.4492935982947064e-16,
    };
    pub const LN2: Dd = Dd {
        hi: 0.6931471805599453,
        lo: 2.3190468138462996e-17,
    };
    /// relative rounding unit, 2^-105
    pub const EPS: f64 = 2.465190328815662e-32;

    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact for |v| < 2^106.
    pub fn from_i128(v: i128) -> Dd {
        let hi = v as f64;
        let lo = (v - hi as i128) as f64;
        let (s, e) = two_sum(hi, lo);
        Dd::new(s, e)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        let e = e + self.lo;
        let (s, e) = quick_two_sum(s, e);
        Dd::new(s, e)
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (s, e) = quick_two_sum(p, e);
        Dd::new(s, e)
    }

    /// Compensated division by a plain double; componentwise division
    /// would lose ~1e-17 relative accuracy.
    #[inline]
    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let r = ((self.hi - p) - e) + self.lo;
        let q2 = r / b;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e)
    }

    #[inline]
    pub fn sqr(self) -> Dd {
        let (p, mut e) = two_prod(self.hi, self.hi);
        e += 2.0 * self.hi * self.lo;
        e += self.lo * self.lo;
        let (s, e) = quick_two_sum(p, e);
        Dd::new(s, e)
    }

    #[inline]
    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        // Karp-Markstein style refinement of the f64 estimate
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let ax_dd = Dd::from_f64(ax);
        let err = (self - ax_dd.sqr()).hi * (x * 0.5);
        ax_dd.add_f64(err)
    }

    pub fn floor(self) -> Dd {
        let fhi = self.hi.floor();
        if fhi == self.hi {
            let flo = self.lo.floor();
            let (s, e) = quick_two_sum(fhi, flo);
            Dd::new(s, e)
        } else {
            Dd::new(fhi, 0.0)
        }
    }

    pub fn round(self) -> Dd {
        (self.add_f64(0.5)).floor()
    }

    /// 2^k scaling, exact.
    #[inline]
    pub fn ldexp(self, k: i32) -> Dd {
        let f = f64_exp2(k);
        Dd::new(self.hi * f, self.lo * f)
    }

    /// e^self. Argument reduction by ln 2, then a Taylor series on
    /// |r| <= ln(2)/2; accurate to a few ulps.
    pub fn exp(self) -> Dd {
        if self.hi > 700.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -700.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / Dd::LN2.hi).round();
        // reduce a further 16x so the series needs ~14 terms
        let r = (self - Dd::LN2.mul_f64(k)).ldexp(-4);
        let mut term = r;
        let mut sum = Dd::ONE + r;
        let mut n = 2.0f64;
        loop {
            term = (term * r).div_f64(n);
            sum = sum + term;
            if term.hi.abs() < 1e-34 || n > 24.0 {
                break;
            }
            n += 1.0;
        }
        // undo the reduction: exp(r)^16
        for _ in 0..4 {
            sum = sum.sqr();
        }
        sum.ldexp(k as i32)
    }

    /// Natural log by one Newton correction of the f64 estimate:
    /// y1 = y0 + x*exp(-y0) - 1 doubles the correct digits twice over.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0, "ln of non-positive value");
        let y0 = self.hi.ln();
        let e = Dd::from_f64(-y0).exp();
        let r = self * e - Dd::ONE; // ~1e-16
        // ln(1+r) to third order is plenty below 2^-105
        let r2 = r.sqr();
        let corr = r - r2 * Dd::new(0.5, 0.0) + (r2 * r).mul_f64(1.0 / 3.0);
        corr.add_f64(y0)
    }

    /// ln(1+z) for small |z| (< 0.25) via the atanh series:
    /// ln(1+z) = 2 atanh(z/(2+z)). Fast path for the S-series inner loop.
    pub fn ln_1p_small(self) -> Dd {
        let z = self / self.add_f64(2.0);
        let z2 = z.sqr();
        let mut term = z;
        let mut sum = z;
        let mut k = 1usize;
        loop {
            term = term * z2;
            let add = term * RECIP_ODD[k];
            sum = sum + add;
            if add.hi.abs() < 1e-34 * sum.hi.abs() || k >= 30 {
                break;
            }
            k += 1;
        }
        sum.ldexp(1)
    }

    /// (sin, cos) of 2*pi*t. The quadrant is picked off t directly so the
    /// reduction is exact for rational t = k/n well inside the dd range.
    pub fn sin_cos_2pi(t: Dd) -> (Dd, Dd) {
        // reduce t mod 1
        let tr = t - t.round();
        // quadrant: m = round(4*tr) in {-2,-1,0,1,2}
        let m = (4.0 * tr.hi).round();
        let r = tr - Dd::new(m * 0.25, 0.0); // |r| <= 1/8
        let theta = r * Dd::TWO_PI; // |theta| <= pi/4
        let (s, c) = sin_cos_taylor(theta);
        match m as i32 {
            0 => (s, c),
            1 => (c, -s),
            -1 => (-c, s),
            2 | -2 => (-s, -c),
            _ => unreachable!("quadrant out of range"),
        }
    }
}

fn f64_exp2(k: i32) -> f64 {
    f64::from_bits(((1023 + k) as u64) << 52)
}

/// Taylor sin and cos on |x| <= pi/4.
fn sin_cos_taylor(x: Dd) -> (Dd, Dd) {
    let x2 = x.sqr();
    let mut s = x;
    let mut term = x;
    let mut n = 1.0f64;
    loop {
        term = (term * x2).div_f64((n + 1.0) * (n + 2.0));
        term = -term;
        s = s + term;
        if term.hi.abs() < 1e-36 || n > 41.0 {
            break;
        }
        n += 2.0;
    }
    let mut c = Dd::ONE;
    let mut term = Dd::ONE;
    let mut n = 0.0f64;
    loop {
        term = (term * x2).div_f64((n + 1.0) * (n + 2.0));
        term = -term;
        c = c + term;
        if term.hi.abs() < 1e-36 || n > 42.0 {
            break;
        }
        n += 2.0;
    }
    (s, c)
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s0, e1) = two_sum(self.hi, b.hi);
        let (s1, e2) = two_sum(self.lo, b.lo);
        let e1 = e1 + s1;
        let (s0, e1) = quick_two_sum(s0, e1);
        let e1 = e1 + e2;
        let (s, e) = quick_two_sum(s0, e1);
        Dd::new(s, e)
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, mut e) = two_prod(self.hi, b.hi);
        e += self.hi * b.lo + self.lo * b.hi;
        let (s, e) = quick_two_sum(p, e);
        Dd::new(s, e)
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e).add_f64(q3)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd::new(-self.hi, -self.lo)
    }
}

impl PartialEq for Dd {
    fn eq(&self, o: &Dd) -> bool {
        self.hi == o.hi && self.lo == o.lo
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, o: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&o.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&o.lo),
            ord => ord,
        }
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 32 significant digits via the decimal expansion of hi+lo
        write!(f, "{}", crate::scalar::format_decimal(self.hi, self.lo, 32))
    }
}

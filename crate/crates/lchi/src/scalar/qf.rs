//! MPFR-backed scalar at 128-bit significand: the `quad113` level.

use super::{Precision, Real};
use rug::float::Constant;
use rug::ops::CompleteRound;
use rug::Float;
use std::cmp::Ordering;
use std::fmt;

pub const QUAD_PREC: u32 = 128;

#[derive(Clone, Debug)]
pub struct Qf(pub Float);

impl Qf {
    pub fn inner(&self) -> &Float {
        &self.0
    }
}

impl PartialEq for Qf {
    fn eq(&self, o: &Qf) -> bool {
        self.0 == o.0
    }
}

impl PartialOrd for Qf {
    fn partial_cmp(&self, o: &Qf) -> Option<Ordering> {
        self.0.partial_cmp(&o.0)
    }
}

impl fmt::Display for Qf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_float(&self.0, 36))
    }
}

impl Real for Qf {
    fn precision() -> Precision {
        Precision::Quad113
    }
    fn eps() -> f64 {
        // 2^-127
        5.877471754111438e-39
    }
    fn zero() -> Self {
        Qf(Float::with_val(QUAD_PREC, 0))
    }
    fn one() -> Self {
        Qf(Float::with_val(QUAD_PREC, 1))
    }
    fn from_f64(x: f64) -> Self {
        Qf(Float::with_val(QUAD_PREC, x))
    }
    fn from_u64(x: u64) -> Self {
        Qf(Float::with_val(QUAD_PREC, x))
    }
    fn from_ratio(num: i128, den: i128) -> Self {
        let n = Float::with_val(QUAD_PREC, num);
        let d = Float::with_val(QUAD_PREC, den);
        Qf((n / d).into())
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn add(&self, o: &Self) -> Self {
        Qf((&self.0 + &o.0).complete(QUAD_PREC))
    }
    fn sub(&self, o: &Self) -> Self {
        Qf((&self.0 - &o.0).complete(QUAD_PREC))
    }
    fn mul(&self, o: &Self) -> Self {
        Qf((&self.0 * &o.0).complete(QUAD_PREC))
    }
    fn div(&self, o: &Self) -> Self {
        Qf((&self.0 / &o.0).complete(QUAD_PREC))
    }
    fn neg(&self) -> Self {
        Qf((-&self.0).complete(QUAD_PREC))
    }
    fn abs(&self) -> Self {
        Qf(self.0.clone().abs())
    }
    fn mul_f64(&self, o: f64) -> Self {
        Qf((&self.0 * o).complete(QUAD_PREC))
    }
    fn add_f64(&self, o: f64) -> Self {
        Qf((&self.0 + o).complete(QUAD_PREC))
    }
    fn sqrt(&self) -> Self {
        Qf(self.0.clone().sqrt())
    }
    fn exp(&self) -> Self {
        Qf(self.0.clone().exp())
    }
    fn ln(&self) -> Self {
        Qf(self.0.clone().ln())
    }
    fn ln_1p_small(&self) -> Self {
        Qf(self.0.clone().ln_1p())
    }
    fn sin_cos_2pi(&self) -> (Self, Self) {
        // extra guard bits for the 2*pi*t product
        let pi = Float::with_val(QUAD_PREC + 32, Constant::Pi);
        let theta = Float::with_val(QUAD_PREC + 32, &self.0 * 2u32) * pi;
        let (s, c) = theta.sin_cos(Float::new(QUAD_PREC + 32));
        (
            Qf(Float::with_val(QUAD_PREC, s)),
            Qf(Float::with_val(QUAD_PREC, c)),
        )
    }
    fn pi() -> Self {
        Qf(Float::with_val(QUAD_PREC, Constant::Pi))
    }
    fn to_decimal(&self, digits: usize) -> String {
        format_float(&self.0, digits)
    }
}

/// Fixed-notation decimal string with `digits` significant digits.
pub(crate) fn format_float(f: &Float, digits: usize) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    if !f.is_finite() {
        return format!("{}", f.to_f64());
    }
    let (sign, mantissa, exp) = to_sign_string_exp(f, digits);
    // exp is the decimal exponent such that value = 0.mantissa * 10^exp
    let mut out = String::new();
    if sign {
        out.push('-');
    }
    let exp = exp as i64;
    if exp <= 0 {
        out.push_str("0.");
        for _ in 0..(-exp) {
            out.push('0');
        }
        out.push_str(mantissa.trim_end_matches('0'));
        if out.ends_with('.') {
            out.pop();
        }
    } else if (exp as usize) >= mantissa.len() {
        out.push_str(&mantissa);
        for _ in 0..(exp as usize - mantissa.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&mantissa[..exp as usize]);
        let frac = mantissa[exp as usize..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    }
    out
}

fn to_sign_string_exp(f: &Float, digits: usize) -> (bool, String, i32) {
    let (sign, s, exp) = f.to_sign_string_exp(10, Some(digits.max(1)));
    (sign, s, exp.unwrap_or(0))
}

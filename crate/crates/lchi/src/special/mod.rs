//! Special functions and constants: gamma, gamma_1, zeta''(0), log Gamma at
//! rational points, and Deninger's S(x) series with a controlled truncation
//! error.
//!
//! S(x) = 2 gamma_1 x + (log x)^2
//!        + sum_{m>=1} ((log(x+m))^2 - (log m)^2 - 2x log(m)/m),
//!
//! evaluated by direct summation to a cutoff M plus an Euler-Maclaurin
//! correction on the smooth tail. The E-M remainder is bounded rigorously
//! through closed-form integrals of the derivative envelopes, so every
//! returned value carries an honest error bound.

pub mod cache;
mod hurwitz;

pub use hurwitz::zeta_sdd_at_zero;

use crate::scalar::{bernoulli, Precision, Real};
use crate::{Error, Result};

/// Euler-Mascheroni constant, from H_N - log N with Euler-Maclaurin
/// acceleration (N = 256, Bernoulli corrections through B_28).
pub fn euler_gamma<T: Real>() -> T {
    let n = 256u32;
    let mut h = T::zero();
    for j in 1..=n {
        h = h.add(&T::from_ratio(1, j as i128));
    }
    let nt = T::from_f64(n as f64);
    let mut g = h.sub(&nt.ln()).sub(&T::from_ratio(1, 2 * n as i128));
    // + sum_k B_2k / (2k N^2k)
    let inv_n2 = T::from_ratio(1, (n as i128) * (n as i128));
    let mut pow = inv_n2.clone();
    for k in 1..=14 {
        g = g.add(&bernoulli::b2k::<T>(k).mul(&pow).div(&T::from_f64(2.0 * k as f64)));
        pow = pow.mul(&inv_n2);
    }
    g
}

/// gamma_1 = lim_N (sum_{j<=N} log(j)/j - (log N)^2 / 2), by Euler-Maclaurin
/// acceleration of the defining partial sums.
pub fn gamma1<T: Real>() -> T {
    let n0 = 128usize;
    // f(t) = log t / t; f^(j)(t) = (C_j + D_j log t)/t^{j+1}
    let mut partial = T::zero();
    for j in 2..n0 {
        let jt = T::from_f64(j as f64);
        partial = partial.add(&jt.ln().div(&jt));
    }
    let nt = T::from_f64(n0 as f64);
    let ln_n = nt.ln();
    let f_n = ln_n.div(&nt);
    let mut g = partial
        .add(&f_n.mul_f64(0.5))
        .sub(&ln_n.mul(&ln_n).mul_f64(0.5));
    // derivative coefficients C_j, D_j
    let order = 12usize;
    let (c, d) = log_over_t_coeffs::<T>(2 * order);
    let inv_n = T::one().div(&nt);
    let mut inv_pow = inv_n.mul(&inv_n); // t^{-(j+1)} for j = 1
    for k in 1..=order {
        let j = 2 * k - 1;
        let deriv = c[j].add(&d[j].mul(&ln_n)).mul(&inv_pow);
        g = g.sub(&bernoulli::b2k_over_fact::<T>(k).mul(&deriv));
        inv_pow = inv_pow.mul(&inv_n).mul(&inv_n);
    }
    g
}

/// Coefficients of f(t) = log t / t: f^(j)(t) = (C_j + D_j log t)/t^{j+1}.
fn log_over_t_coeffs<T: Real>(up_to: usize) -> (Vec<T>, Vec<T>) {
    let mut c = vec![T::zero(); up_to + 1];
    let mut d = vec![T::zero(); up_to + 1];
    d[0] = T::one();
    for k in 0..up_to {
        c[k + 1] = d[k].sub(&c[k].mul_f64((k + 1) as f64));
        d[k + 1] = d[k].mul_f64(-((k + 1) as f64));
    }
    (c, d)
}

/// Coefficients of g(u) = (log u)^2: g^(j)(u) = (A_j + B_j log u)/u^j, j >= 1.
fn log_sq_coeffs<T: Real>(up_to: usize) -> (Vec<T>, Vec<T>) {
    let mut a = vec![T::zero(); up_to + 1];
    let mut b = vec![T::zero(); up_to + 1];
    if up_to >= 1 {
        b[1] = T::from_f64(2.0);
    }
    for k in 1..up_to {
        a[k + 1] = b[k].sub(&a[k].mul_f64(k as f64));
        b[k + 1] = b[k].mul_f64(-(k as f64));
    }
    (a, b)
}

pub fn log_2pi<T: Real>() -> T {
    T::pi().mul_f64(2.0).ln()
}

/// zeta''(0), returned from the Euler-Maclaurin jet oracle after a loud
/// consistency check against (-(log 2pi)^2 - pi^2/12 + 2 gamma_1 + gamma^2)/2.
/// A disagreement beyond 1e-6 means a broken constant, so construction fails
/// rather than letting it corrupt the even-character values downstream.
pub fn zeta_dd0<T: Real>() -> Result<T> {
    let oracle = zeta_sdd_at_zero(&T::one());
    let g = euler_gamma::<T>();
    let g1 = gamma1::<T>();
    let l2p = log_2pi::<T>();
    let pi = T::pi();
    let formula = l2p
        .mul(&l2p)
        .neg()
        .sub(&pi.mul(&pi).div(&T::from_f64(12.0)))
        .add(&g1.mul_f64(2.0))
        .add(&g.mul(&g))
        .mul_f64(0.5);
    let diff = oracle.sub(&formula).abs().to_f64();
    if diff > 1e-6 {
        return Err(Error::Precision(format!(
            "zeta''(0) cross-check failed: oracle {} vs closed form {} (diff {diff:.3e})",
            oracle, formula
        )));
    }
    Ok(oracle)
}

/// The response of `deninger_s`: value plus an absolute error bound covering
/// both the Euler-Maclaurin remainder and accumulated rounding.
#[derive(Clone, Debug)]
pub struct SValue<T> {
    pub value: T,
    pub err_bound: f64,
}

pub const DEFAULT_EM_ORDER: usize = 6;

/// S(x) for 0 < x <= 1 to absolute accuracy `tol`, with the default
/// Euler-Maclaurin order.
pub fn deninger_s<T: Real>(x: &T, tol: f64) -> Result<SValue<T>> {
    deninger_s_with_order(x, tol, DEFAULT_EM_ORDER)
}

/// S(x) with an explicit Euler-Maclaurin order K (Bernoulli terms B_2..B_2K).
/// The cutoff M is grown until the rigorous remainder bound fits `tol`.
pub fn deninger_s_with_order<T: Real>(x: &T, tol: f64, order: usize) -> Result<SValue<T>> {
    let xf = x.to_f64();
    if !(xf > 0.0 && xf <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "deninger_s: x = {xf} outside (0, 1]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("deninger_s: tol must be positive".into()));
    }
    if tol < T::eps() * 64.0 {
        return Err(Error::Precision(format!(
            "deninger_s: tol {tol:.3e} is below the working-precision floor ~{:.1e}",
            T::eps() * 64.0
        )));
    }
    let order = order.clamp(2, 16);
    let mut m = 8usize;
    let mut em_bound = s_tail_remainder_bound(xf, m, order);
    while em_bound > tol * 0.25 {
        if m >= (1 << 22) {
            return Err(Error::Precision(format!(
                "deninger_s: requested tol {tol:.3e} unreachable; achievable ~{em_bound:.3e} at cutoff {m}"
            )));
        }
        m *= 2;
        em_bound = s_tail_remainder_bound(xf, m, order);
    }
    let params = SParams::new(m, order);
    let value = s_eval(x, &params);
    // rounding: M accumulations whose parts reach ~(log(x+M))^2
    let scale = 1.0 + value.to_f64().abs() + xf.ln().powi(2)
        + 2.0 * ((m + 1) as f64).ln().powi(2);
    let rounding = T::eps() * (m as f64 + 32.0) * scale;
    let err_bound = em_bound + rounding;
    if err_bound > tol {
        return Err(Error::Precision(format!(
            "deninger_s: tol {tol:.3e} unreachable at this precision; achievable ~{err_bound:.3e}"
        )));
    }
    Ok(SValue { value, err_bound })
}

/// Shared precomputation for evaluating S at many x with one (M, K).
pub struct SParams<T> {
    pub m: usize,
    pub order: usize,
    gamma1_x2: T,
    ln_m: Vec<T>,       // ln m, m = 1..=M+1
    two_ln_m_over_m: Vec<T>,
    a_coef: Vec<T>,     // (log u)^2 derivative coefficients
    b_coef: Vec<T>,
    c_coef: Vec<T>,     // log t / t derivative coefficients
    d_coef: Vec<T>,
    b_over_fact: Vec<T>,
}

impl<T: Real> SParams<T> {
    pub fn new(m: usize, order: usize) -> SParams<T> {
        let mut ln_m = Vec::with_capacity(m + 2);
        let mut two_ln_m_over_m = Vec::with_capacity(m + 2);
        ln_m.push(T::zero()); // unused slot for m = 0
        two_ln_m_over_m.push(T::zero());
        for i in 1..=(m + 1) {
            let it = T::from_f64(i as f64);
            let l = it.ln();
            two_ln_m_over_m.push(l.mul_f64(2.0).div(&it));
            ln_m.push(l);
        }
        let (a_coef, b_coef) = log_sq_coeffs::<T>(2 * order);
        let (c_coef, d_coef) = log_over_t_coeffs::<T>(2 * order);
        let b_over_fact = (0..=order)
            .map(|k| {
                if k == 0 {
                    T::zero()
                } else {
                    bernoulli::b2k_over_fact::<T>(k)
                }
            })
            .collect();
        SParams {
            m,
            order,
            gamma1_x2: gamma1::<T>().mul_f64(2.0),
            ln_m,
            two_ln_m_over_m,
            a_coef,
            b_coef,
            c_coef,
            d_coef,
            b_over_fact,
        }
    }

    /// Rigorous tail bound for these parameters at the worst admissible x.
    pub fn bound(&self) -> f64 {
        s_tail_remainder_bound(1.0, self.m, self.order)
    }
}

/// Evaluate S(x) with precomputed parameters. 0 < x <= 1.
pub fn s_eval<T: Real>(x: &T, p: &SParams<T>) -> T {
    s_eval_with_ln(x, &x.ln(), p)
}

/// Same, with log(x) supplied by the caller (the table builder derives it
/// from an incremental integer-log table).
pub fn s_eval_with_ln<T: Real>(x: &T, ln_x: &T, p: &SParams<T>) -> T {
    let mut s = p.gamma1_x2.mul(x).add(&ln_x.mul(ln_x));
    // direct terms: delta*(delta + 2 log m) - x * (2 log m / m),
    // where delta = log(x+m) - log(m) = log1p(x/m)
    for m in 1..=p.m {
        let delta = x.div_f64(m as f64).ln_1p_small();
        let term = delta
            .mul(&delta.add(&p.ln_m[m].mul_f64(2.0)))
            .sub(&x.mul(&p.two_ln_m_over_m[m]));
        s = s.add(&term);
    }
    // Euler-Maclaurin tail from a = M+1:
    // sum_{m>a-1} f(m) = int_a^inf f + f(a)/2 - sum B_2k/(2k)! f^(2k-1)(a) + R
    let a = T::from_f64((p.m + 1) as f64);
    let lb = &p.ln_m[p.m + 1]; // log a
    let la = lb.add(&x.div_f64((p.m + 1) as f64).ln_1p_small());
    let xa = x.add(&a);
    // int_a^inf f = x (log a)^2 + a ((log a)^2 - 2 log a + 2)
    //               - (x+a) ((log(x+a))^2 - 2 log(x+a) + 2)
    let poly = |u: &T, l: &T| -> T {
        l.mul(l).sub(&l.mul_f64(2.0)).add_f64(2.0).mul(u)
    };
    let integral = x
        .mul(&lb.mul(lb))
        .add(&poly(&a, lb))
        .sub(&poly(&xa, &la));
    let f_a = la
        .mul(&la)
        .sub(&lb.mul(lb))
        .sub(&x.mul(&p.two_ln_m_over_m[p.m + 1]));
    s = s.add(&integral).add(&f_a.mul_f64(0.5));
    // derivative terms
    let inv_a = T::one().div(&a);
    let inv_xa = T::one().div(&xa);
    let mut inv_a_j = inv_a.clone(); // a^{-j} for j = 1
    let mut inv_xa_j = inv_xa.clone();
    let x2 = x.mul_f64(2.0);
    for k in 1..=p.order {
        let j = 2 * k - 1;
        if k > 1 {
            // advance from j-2 to j
            inv_a_j = inv_a_j.mul(&inv_a).mul(&inv_a);
            inv_xa_j = inv_xa_j.mul(&inv_xa).mul(&inv_xa);
        }
        let g_part = p.a_coef[j]
            .add(&p.b_coef[j].mul(&la))
            .mul(&inv_xa_j)
            .sub(&p.a_coef[j].add(&p.b_coef[j].mul(lb)).mul(&inv_a_j));
        let h_part = p.c_coef[j]
            .add(&p.d_coef[j].mul(lb))
            .mul(&inv_a_j)
            .mul(&inv_a);
        let deriv = g_part.sub(&x2.mul(&h_part));
        s = s.sub(&p.b_over_fact[k].mul(&deriv));
    }
    s
}

/// Upper bound on the Euler-Maclaurin remainder for the S tail:
/// |R| <= |B_2K|/(2K)! * int_a^inf |f^(2K)|, a = M+1, evaluated in f64
/// with a 4x safety factor. The coefficient recurrences give
/// |f^(2K)| <= (|A| + |B| log t)/t^2K * 2 + 2x (|C| + |D| log t)/t^{2K+1}.
fn s_tail_remainder_bound(x: f64, m: usize, order: usize) -> f64 {
    let j = 2 * order;
    // recurrences in f64; magnitudes ~ (j-1)! stay well inside f64 range
    let (mut a_j, mut b_j) = (0.0f64, 2.0f64);
    for k in 1..j {
        let na = b_j - k as f64 * a_j;
        b_j *= -(k as f64);
        a_j = na;
    }
    let (mut c_j, mut d_j) = (0.0f64, 1.0f64);
    for k in 0..j {
        let nc = d_j - (k + 1) as f64 * c_j;
        d_j *= -((k + 1) as f64);
        c_j = nc;
    }
    let aa = (m + 1) as f64;
    let lb = aa.ln();
    let int_pow = |n: f64| 1.0 / ((n - 1.0) * aa.powf(n - 1.0));
    let int_logpow = |n: f64| (lb + 1.0 / (n - 1.0)) / ((n - 1.0) * aa.powf(n - 1.0));
    let envelope = 2.0 * (a_j.abs() * int_pow(j as f64) + b_j.abs() * int_logpow(j as f64))
        + 2.0 * x * (c_j.abs() * int_pow(j as f64 + 1.0) + d_j.abs() * int_logpow(j as f64 + 1.0));
    // |B_2K|/(2K)!
    let (bn, bd) = bernoulli::B2K[order - 1];
    let mut fact = 1.0f64;
    for i in 2..=j {
        fact *= i as f64;
    }
    let b_over_fact = (bn.abs() as f64 / bd.abs() as f64) / fact;
    4.0 * b_over_fact * envelope
}

/// Arrays of log Gamma(a/q) and S(a/q) for a = 1..q-1, with the achieved
/// absolute error bound. Immutable once built; share freely.
#[derive(Clone, Debug)]
pub struct SpecialValueTable<T> {
    pub q: u64,
    pub loggamma: Vec<T>,
    pub sval: Vec<T>,
    pub precision: Precision,
    pub tol: f64,
}

/// Per-precision defaults: (target S tolerance, E-M order, log Gamma shift,
/// Stirling terms).
fn precision_defaults(p: Precision) -> (f64, usize, usize, usize) {
    match p {
        Precision::Extended64 => (1e-18, 12, 16, 12),
        Precision::Quad113 => (1e-30, 12, 26, 15),
    }
}

/// log Gamma(x) for 0 < x < 1: shift to x + J >= threshold, then the
/// Stirling series. The shift product is exponent-safe for J <= 26.
pub fn log_gamma<T: Real>(x: &T) -> Result<T> {
    let xf = x.to_f64();
    if !(xf > 0.0 && xf < 1.0) {
        return Err(Error::InvalidInput(format!(
            "log_gamma: x = {xf} outside (0, 1)"
        )));
    }
    let (_, _, shift, terms) = precision_defaults(T::precision());
    Ok(log_gamma_with(x, &LogGammaParams::new(shift, terms)))
}

/// Hoisted constants for repeated Stirling evaluations.
pub struct LogGammaParams<T> {
    shift: usize,
    ln_shift: T,
    half_log_2pi: T,
    /// B_2k / (2k (2k-1)), k = 1..=terms
    coeffs: Vec<T>,
}

impl<T: Real> LogGammaParams<T> {
    pub fn new(shift: usize, terms: usize) -> LogGammaParams<T> {
        LogGammaParams {
            shift,
            ln_shift: T::from_f64(shift as f64).ln(),
            half_log_2pi: log_2pi::<T>().mul_f64(0.5),
            coeffs: (1..=terms)
                .map(|k| {
                    bernoulli::b2k::<T>(k).div_f64((2 * k * (2 * k - 1)) as f64)
                })
                .collect(),
        }
    }
}

fn log_gamma_with<T: Real>(x: &T, p: &LogGammaParams<T>) -> T {
    // product of (x)(x+1)...(x+shift-1), then Stirling at z = x + shift
    let mut prod = x.clone();
    for jj in 1..p.shift {
        prod = prod.mul(&x.add_f64(jj as f64));
    }
    let z = x.add_f64(p.shift as f64);
    let ln_z = p
        .ln_shift
        .add(&x.div_f64(p.shift as f64).ln_1p_small());
    let mut lg = z
        .sub(&T::from_ratio(1, 2))
        .mul(&ln_z)
        .sub(&z)
        .add(&p.half_log_2pi);
    let inv_z = T::one().div(&z);
    let inv_z2 = inv_z.mul(&inv_z);
    let mut pow = inv_z.clone();
    for c in &p.coeffs {
        lg = lg.add(&c.mul(&pow));
        pow = pow.mul(&inv_z2);
    }
    lg.sub(&prod.ln())
}

impl<T: Real> SpecialValueTable<T> {
    /// Build log Gamma and S tables for all a = 1..q-1 at this scalar's
    /// precision. Verifies the Gauss product identity
    /// sum_a log Gamma(a/q) = ((q-1)/2) log(2 pi) - (1/2) log q
    /// before returning, as a whole-table cross-check.
    pub fn build(q: u64) -> Result<SpecialValueTable<T>> {
        if q < 3 || !crate::arith::is_prime(q) {
            return Err(Error::InvalidInput(format!("{q} is not an odd prime")));
        }
        let (s_tol, order, shift, terms) = precision_defaults(T::precision());
        let n = (q - 1) as usize;

        // S cutoff for the shared parameter set
        let mut m = 8usize;
        while s_tail_remainder_bound(1.0, m, order) > s_tol * 0.25 {
            m *= 2;
        }
        let params = SParams::<T>::new(m, order);
        let lg_params = LogGammaParams::<T>::new(shift, terms);
        let qt = T::from_u64(q);
        let ln_q = qt.ln();

        // incremental natural logs of 1..q-1, re-anchored every 64 steps
        let mut ln_int = Vec::with_capacity(n + 1);
        ln_int.push(T::zero()); // index 0 unused
        ln_int.push(T::zero()); // ln 1
        for a in 2..q {
            let v = if a % 64 == 0 {
                T::from_u64(a).ln()
            } else {
                let prev: &T = &ln_int[(a - 1) as usize];
                prev.add(&T::one().div_f64((a - 1) as f64).ln_1p_small())
            };
            ln_int.push(v);
        }

        let mut loggamma = Vec::with_capacity(n);
        let mut sval = Vec::with_capacity(n);
        for a in 1..q {
            let x = T::from_u64(a).div(&qt);
            let ln_x = ln_int[a as usize].sub(&ln_q);
            loggamma.push(log_gamma_with(&x, &lg_params));
            sval.push(s_eval_with_ln(&x, &ln_x, &params));
        }

        // achieved tolerance: E-M bound + per-entry rounding at the largest
        // magnitudes in the table
        let max_mag = sval
            .iter()
            .chain(loggamma.iter())
            .map(|v| v.to_f64().abs())
            .fold(0.0f64, f64::max);
        let tol = s_tail_remainder_bound(1.0, m, order)
            + T::eps() * (m as f64 + 64.0)
                * (1.0 + max_mag + 2.0 * ((m + 1) as f64).ln().powi(2));

        let table = SpecialValueTable {
            q,
            loggamma,
            sval,
            precision: T::precision(),
            tol,
        };
        let resid = table.gauss_identity_residual();
        if resid > 1e-12 * q as f64 {
            return Err(Error::Precision(format!(
                "Gauss product identity violated for q = {q}: residual {resid:.3e}"
            )));
        }
        Ok(table)
    }

    /// |sum_a log Gamma(a/q) - ((q-1)/2) log(2 pi) + (1/2) log q|
    pub fn gauss_identity_residual(&self) -> f64 {
        let mut sum = T::zero();
        for v in &self.loggamma {
            sum = sum.add(v);
        }
        let q = self.q;
        let want = log_2pi::<T>()
            .mul_f64((q - 1) as f64 * 0.5)
            .sub(&T::from_u64(q).ln().mul_f64(0.5));
        sum.sub(&want).abs().to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Dd, Qf};

    #[test]
    fn gamma_reference() {
        let g: Dd = euler_gamma();
        let s = g.to_decimal(30);
        assert!(s.starts_with("0.5772156649015328606065120900"), "{s}");
        assert_eq!((g.to_f64() * 10.0).floor(), 5.0);
        let gq: Qf = euler_gamma();
        // cross-check against MPFR's own constant
        let mpfr = rug::Float::with_val(128, rug::float::Constant::Euler);
        let diff = (gq.inner().clone() - mpfr).abs().to_f64();
        assert!(diff < 1e-36, "{diff:e}");
    }

    #[test]
    fn gamma1_reference() {
        let g: Dd = gamma1();
        let s = g.to_decimal(28);
        assert!(s.starts_with("-0.07281584548367672486058637"), "{s}");
        assert!(g.to_f64() < 0.0);
        let gq: Qf = gamma1();
        let sq = gq.to_decimal(34);
        assert!(sq.starts_with("-0.0728158454836767248605863758749013"), "{sq}");
    }

    /// Direct partial sums converge to the accelerated value like
    /// log(N)/(2N); check at N = 10^6.
    #[test]
    fn gamma1_direct_sum_convergence() {
        let accel: Dd = gamma1();
        let n = 1_000_000usize;
        let mut s = 0.0f64; // f64 is enough for a 1e-5 comparison
        for j in 2..=n {
            let jf = j as f64;
            s += jf.ln() / jf;
        }
        let direct = s - (n as f64).ln().powi(2) / 2.0;
        assert!(
            (direct - accel.to_f64()).abs() < 1e-5,
            "direct {direct} vs accelerated {}",
            accel.to_f64()
        );
    }

    #[test]
    fn gamma_plus_log2pi() {
        let v = euler_gamma::<Dd>() + log_2pi::<Dd>();
        let s = v.to_decimal(25);
        // sum of the two oracle constants
        assert!(s.starts_with("2.415092731310878344167"), "{s}");
    }

    #[test]
    fn zeta_dd0_oracle_and_formula() {
        let z: Dd = zeta_dd0().unwrap();
        assert!(z.to_decimal(25).starts_with("-2.006356455908584851"), "{z}");

        // the closed form with coefficient 1 on gamma_1 lands elsewhere
        let g: Dd = euler_gamma();
        let g1: Dd = gamma1();
        let l2p: Dd = log_2pi();
        let with_coeff_1 =
            (-(l2p * l2p) - Dd::PI * Dd::PI / Dd::from_f64(12.0) + g1 + g * g) * Dd::from_f64(0.5);
        assert!(
            (with_coeff_1.to_f64() + 1.96994853316674).abs() < 1e-12,
            "{with_coeff_1}"
        );
        assert!((with_coeff_1 - z).to_f64().abs() > 0.03);
    }

    #[test]
    fn log_gamma_reference_points() {
        // Gamma(1/2) = sqrt(pi)
        let v: Dd = log_gamma(&Dd::from_f64(0.5)).unwrap();
        assert!(v.to_decimal(25).starts_with("0.5723649429247000870717"), "{v}");
        // Gamma(1/3) = 2.678938534707747633...
        let v = log_gamma(&(Dd::ONE / Dd::from_f64(3.0))).unwrap();
        assert!(v.to_decimal(25).starts_with("0.9854206469277670691871"), "{v}");
        // reflection: Gamma(1/3) Gamma(2/3) = 2 pi / sqrt(3)
        let v = log_gamma(&(Dd::from_f64(2.0) / Dd::from_f64(3.0))).unwrap();
        assert!(v.to_decimal(25).starts_with("0.3031502751475235686758"), "{v}");

        assert!(log_gamma(&Dd::from_f64(1.0)).is_err());
        assert!(log_gamma(&Dd::from_f64(0.0)).is_err());

        let vq: Qf = log_gamma(&Qf::from_ratio(1, 3)).unwrap();
        assert!(
            vq.to_decimal(37)
                .starts_with("0.985420646927767069187174036977961"),
            "{vq}"
        );
    }

    #[test]
    fn log_gamma_reflection_random() {
        // log G(x) + log G(1-x) = log(2 pi) - log(2 sin(pi x))
        let mut state = 0x2545F4914F6CDD1Du64;
        for _ in 0..100 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = 1 + (state >> 33) % 9972;
            let q = 9973u64;
            let x = Dd::from_i128(a as i128) / Dd::from_i128(q as i128);
            let lhs = log_gamma(&x).unwrap() + log_gamma(&(Dd::ONE - x)).unwrap();
            let (s, _) = Dd::sin_cos_2pi(x.mul_f64(0.5));
            let rhs = log_2pi::<Dd>() - (s.mul_f64(2.0)).ln();
            assert!(
                (lhs - rhs).to_f64().abs() < 1e-14,
                "reflection off at a={a}: {:e}",
                (lhs - rhs).to_f64()
            );
        }
    }

    #[test]
    fn s_at_one_is_zero() {
        let sv = deninger_s(&Dd::ONE, 1e-18).unwrap();
        assert!(
            sv.value.to_f64().abs() <= sv.err_bound,
            "S(1) = {} exceeds bound {}",
            sv.value,
            sv.err_bound
        );
        let svq = deninger_s_with_order(&Qf::one(), 1e-30, 12).unwrap();
        assert!(svq.value.to_f64().abs() <= svq.err_bound);
    }

    /// Independent oracle: S(x) = zeta''(0, x) - zeta''(0) via the
    /// Euler-Maclaurin jet evaluation of the Hurwitz zeta.
    #[test]
    fn s_against_hurwitz_oracle() {
        let zdd0: Dd = zeta_sdd_at_zero(&Dd::ONE);
        for (num, den) in [(1i128, 2i128), (1, 3), (2, 3), (1, 7), (6, 7), (1, 101)] {
            let x = Dd::from_ratio(num, den);
            let s = deninger_s(&x, 1e-20).unwrap();
            let oracle = zeta_sdd_at_zero(&x) - zdd0;
            assert!(
                (s.value - oracle).to_f64().abs() < 1e-20 + s.err_bound,
                "S({num}/{den}): {} vs {}",
                s.value,
                oracle
            );
        }
        // frozen value S(1/2) from the same oracle
        let s = deninger_s(&Dd::from_f64(0.5), 1e-20).unwrap();
        assert!(
            s.value.to_decimal(30).starts_with("0.49221064215206294867932546"),
            "{}",
            s.value
        );
    }

    #[test]
    fn s_quad_matches_extended() {
        // 50 pseudo-random x in (0,1): the two precisions agree to >= 16
        // significant digits
        let mut state = 12345u64;
        for _ in 0..50 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let a = 1 + (state >> 40) % 9999;
            let xd = Dd::from_i128(a as i128) / Dd::from_i128(10000);
            let xq = Qf::from_ratio(a as i128, 10000);
            let sd = deninger_s(&xd, 1e-19).unwrap().value;
            let sq = deninger_s_with_order(&xq, 1e-28, 12).unwrap().value;
            let rel = (sd.to_f64() - sq.to_f64()).abs() / sq.to_f64().abs().max(1e-3);
            assert!(rel < 1e-16, "x = {a}/10000: rel = {rel:e}");
        }
    }

    /// Doubling the cutoff moves the result by less than the reported
    /// error bound (tail-bound soundness).
    #[test]
    fn s_tail_bound_soundness() {
        for (num, den) in [(1i128, 2i128), (1, 3), (9, 10), (1, 997)] {
            let x = Dd::from_ratio(num, den);
            for order in [4usize, 6, 8] {
                let p1 = SParams::<Dd>::new(32, order);
                let p2 = SParams::<Dd>::new(64, order);
                let v1 = s_eval(&x, &p1);
                let v2 = s_eval(&x, &p2);
                let bound = s_tail_remainder_bound(x.to_f64(), 32, order);
                assert!(
                    (v1 - v2).to_f64().abs() <= bound,
                    "x={num}/{den} K={order}: moved {:e}, bound {bound:e}",
                    (v1 - v2).to_f64().abs()
                );
            }
        }
    }

    /// The m-th term behaves like -x^2 (log m - 1)/m^2 for large m; check
    /// the ratio at m = 10^6.
    #[test]
    fn s_term_asymptote() {
        let x = 0.37f64;
        let m = 1_000_000f64;
        let xd = Dd::from_f64(x);
        let delta = xd.mul_f64(1.0 / m).ln_1p_small();
        let lnm = Dd::from_f64(m).ln();
        let term = delta * (delta + lnm.mul_f64(2.0)) - xd * lnm.mul_f64(2.0 / m);
        let asym = -x * x * (m.ln() - 1.0) / (m * m);
        let ratio = term.to_f64() / asym;
        assert!((ratio - 1.0).abs() < 1e-4, "ratio = {ratio}");
    }

    #[test]
    fn table_small_q() {
        let t5 = SpecialValueTable::<Dd>::build(5).unwrap();
        // Gauss: sum log Gamma(a/5) = 2 log(2 pi) - log(5)/2
        let sum = t5
            .loggamma
            .iter()
            .fold(Dd::ZERO, |acc, v| acc + *v);
        assert!(sum.to_decimal(25).starts_with("2.871035176601640779820"), "{sum}");

        let t3 = SpecialValueTable::<Dd>::build(3).unwrap();
        assert_eq!(t3.loggamma.len(), 2);
        assert!((t3.loggamma[0].to_f64() - 0.98542).abs() < 1e-5);
        assert!((t3.loggamma[1].to_f64() - 0.30315).abs() < 1e-5);
        assert!(t3.sval.iter().all(|v| v.to_f64().is_finite()));
        assert!(t3.tol < 1e-18);

        assert!(SpecialValueTable::<Dd>::build(4).is_err());
    }

    #[test]
    fn unreachable_tolerance_is_an_error() {
        let e = deninger_s(&Dd::from_f64(0.5), 1e-60);
        assert!(e.is_err());
        let msg = format!("{}", e.unwrap_err());
        assert!(
            msg.contains("floor") || msg.contains("achievable"),
            "{msg}"
        );
        // a tolerance just above the floor but below what rounding allows
        let e2 = deninger_s(&Dd::from_f64(0.5), 3e-30);
        assert!(e2.is_err());
        assert!(format!("{}", e2.unwrap_err()).contains("achievable"));
    }
}

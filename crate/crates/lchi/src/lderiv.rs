//! L'/L(1, chi) for all non-principal characters mod q, assembled from the
//! special-value tables, plus the extremal statistics and the
//! precision-escalation policy.
//!
//! For odd chi:  L'/L(1,chi) = gamma + log(2 pi)
//!                  + (sum_a conj(chi)(a) log Gamma(a/q)) / B_{1,conj(chi)},
//! for even chi: L'/L(1,chi) = gamma + log(2 pi)
//!                  - (1/2) (sum_a conj(chi)(a) S(a/q))
//!                        / (sum_a conj(chi)(a) log Gamma(a/q)),
//! with B_{1,chi} = q^{-1} sum_a a chi(a). Three character-sum transforms
//! feed the whole spectrum.

use crate::arith::{sieve_primes, CharacterTable};
use crate::chartransform::{naive_char_sums_unguarded, CharPlan, CharacterSpectrum, Parity};
use crate::scalar::{Complex, Dd, Precision, Qf, Real};
use crate::special::{euler_gamma, log_2pi, SpecialValueTable};
use crate::{Error, Result};

/// Denominators below this are treated as a precision failure rather than
/// silently returning a huge quotient.
const DENOM_FLOOR: f64 = 1e-30;

/// L'/L(1, chi_j) for j = 1..q-2. `ld[0]` is unused (principal).
#[derive(Clone, Debug)]
pub struct LogDerivSpectrum<T> {
    pub q: u64,
    /// index j = 1..q-2; entry 0 is zero and flagged principal
    pub ld: Vec<Complex<T>>,
    /// B_{1, conj(chi_j)} for every j; the even entries vanish and are
    /// kept only for the cancellation checks
    pub b1: Vec<Complex<T>>,
    pub precision: Precision,
}

impl<T: Real> LogDerivSpectrum<T> {
    pub fn order(&self) -> usize {
        self.ld.len()
    }

    /// Non-principal indices.
    pub fn indices(&self) -> impl Iterator<Item = usize> {
        1..self.ld.len()
    }

    pub fn value(&self, j: usize) -> &Complex<T> {
        &self.ld[j]
    }

    /// max_j |ld[j] - conj(ld[q-1-j])|, which vanishes for exact data.
    pub fn conjugate_symmetry_residual(&self) -> f64 {
        let n = self.ld.len();
        let mut worst = 0.0f64;
        for j in 1..n {
            let jr = n - j;
            if jr >= n {
                continue;
            }
            let d = self.ld[j]
                .sub(&self.ld[jr].conj())
                .norm_sqr()
                .to_f64()
                .sqrt();
            worst = worst.max(d);
        }
        worst
    }

    /// |Im L'/L(1, chi)| at the quadratic character j = (q-1)/2.
    pub fn quadratic_imag_residual(&self) -> f64 {
        let j = (self.q as usize - 1) / 2;
        self.ld[j].im.to_f64().abs()
    }
}

/// B_{1, conj(chi_j)} = q^{-1} sum_a a conj(chi_j)(a) for all j, via one
/// character transform of f(a) = a/q with conjugation as index reflection.
pub fn b1_chi<T: Real>(table: &CharacterTable) -> Result<Vec<Complex<T>>> {
    let plan = CharPlan::<T>::new(table);
    b1_chi_with_plan(table, &plan)
}

fn b1_chi_with_plan<T: Real>(
    table: &CharacterTable,
    plan: &CharPlan<T>,
) -> Result<Vec<Complex<T>>> {
    let q = table.q;
    let qt = T::from_u64(q);
    let f: Vec<T> = (1..q).map(|a| T::from_u64(a).div(&qt)).collect();
    let spec = plan.char_sums(table, &f)?;
    Ok(reflect(&spec))
}

/// values[(n-j) mod n]: the conjugate-character sums of a spectrum.
fn reflect<T: Real>(spec: &CharacterSpectrum<T>) -> Vec<Complex<T>> {
    let n = spec.values.len();
    (0..n)
        .map(|j| spec.values[if j == 0 { 0 } else { n - j }].clone())
        .collect()
}

/// Full spectrum via the FFT character sums.
pub fn logderiv_spectrum<T: Real>(
    ct: &CharacterTable,
    st: &SpecialValueTable<T>,
) -> Result<LogDerivSpectrum<T>> {
    let plan = CharPlan::<T>::new(ct);
    let g = plan.char_sums(ct, &st.loggamma)?;
    let s = plan.char_sums(ct, &st.sval)?;
    let b1 = b1_chi_with_plan(ct, &plan)?;
    assemble(ct, st, &reflect(&g), &reflect(&s), b1)
}

/// Same assembly on the O(q^2) direct character sums; the oracle route.
pub fn logderiv_spectrum_naive<T: Real>(
    ct: &CharacterTable,
    st: &SpecialValueTable<T>,
) -> Result<LogDerivSpectrum<T>> {
    let q = ct.q;
    let qt = T::from_u64(q);
    let g = naive_char_sums_unguarded(ct, &st.loggamma)?;
    let s = naive_char_sums_unguarded(ct, &st.sval)?;
    let f: Vec<T> = (1..q).map(|a| T::from_u64(a).div(&qt)).collect();
    let a = naive_char_sums_unguarded(ct, &f)?;
    assemble(ct, st, &reflect(&g), &reflect(&s), reflect(&a))
}

fn assemble<T: Real>(
    ct: &CharacterTable,
    st: &SpecialValueTable<T>,
    g_bar: &[Complex<T>],
    s_bar: &[Complex<T>],
    b1: Vec<Complex<T>>,
) -> Result<LogDerivSpectrum<T>> {
    if ct.q != st.q {
        return Err(Error::InvalidInput(format!(
            "table mismatch: q = {} vs {}",
            ct.q, st.q
        )));
    }
    let n = ct.order();
    let base = euler_gamma::<T>().add(&log_2pi::<T>());
    let mut ld = Vec::with_capacity(n);
    ld.push(Complex::<T>::zero()); // principal placeholder
    for j in 1..n {
        let v = if j % 2 == 1 {
            let den = &b1[j];
            if den.norm_sqr().to_f64().sqrt() < DENOM_FLOOR {
                return Err(Error::Precision(format!(
                    "B_1 denominator underflow at odd character j = {j}, q = {}",
                    ct.q
                )));
            }
            g_bar[j].div(den).add(&Complex::from_real(base.clone()))
        } else {
            let den = &g_bar[j];
            if den.norm_sqr().to_f64().sqrt() < DENOM_FLOOR {
                return Err(Error::Precision(format!(
                    "log-Gamma denominator underflow at even character j = {j}, q = {}",
                    ct.q
                )));
            }
            Complex::from_real(base.clone()).sub(&s_bar[j].div(den).scale_f64(0.5))
        };
        ld.push(v);
    }
    Ok(LogDerivSpectrum {
        q: ct.q,
        ld,
        b1,
        precision: T::precision(),
    })
}

/// Escalation audit trail: the extended64 value kept alongside the quad
/// recomputation, with a warning flag when they disagree suspiciously.
#[derive(Clone, Debug)]
pub struct EscalationAudit {
    pub extended_m_q: f64,
    pub quad_m_q: f64,
    /// set when |extended - quad| > 1e-8: a numerical-instability
    /// diagnostic, not silently accepted
    pub unstable: bool,
}

/// Per-q summary of the extremal statistics.
#[derive(Clone, Debug)]
pub struct MqRecord {
    pub q: u64,
    pub m_q: f64,
    /// m_q at full working precision, for digit-accurate reporting
    pub m_q_dec: String,
    pub argmin_j: usize,
    pub argmin_parity: Parity,
    pub big_m_q: f64,
    pub argmax_j: usize,
    /// Euler-Kronecker constant of Q(zeta_q)
    pub ek: f64,
    pub ek_dec: String,
    /// (200/21) q m_q
    pub m_q_normalized: f64,
    pub precision_used: Precision,
    pub escalated: bool,
    pub audit: Option<EscalationAudit>,
}

pub const ESCALATION_THRESHOLD: f64 = 1e-5;

/// Extract m_q, M_q and the Euler-Kronecker constant from a spectrum.
/// Ties break toward the smallest index; conjugate pairs mean every
/// extremal modulus occurs at least twice.
pub fn mq_record<T: Real>(spec: &LogDerivSpectrum<T>) -> Result<MqRecord> {
    let n = spec.order();
    if n < 2 {
        return Err(Error::InvalidInput("spectrum has no non-principal entries".into()));
    }
    let mut min_sq: Option<T> = None;
    let mut max_sq: Option<T> = None;
    let mut argmin = 0usize;
    let mut argmax = 0usize;
    let mut re_sum = T::zero();
    let mut im_sum = T::zero();
    for j in 1..n {
        let v = &spec.ld[j];
        let nsq = v.norm_sqr();
        match &min_sq {
            Some(cur) if nsq >= *cur => {}
            _ => {
                min_sq = Some(nsq.clone());
                argmin = j;
            }
        }
        match &max_sq {
            Some(cur) if nsq <= *cur => {}
            _ => {
                max_sq = Some(nsq.clone());
                argmax = j;
            }
        }
        re_sum = re_sum.add(&v.re);
        im_sum = im_sum.add(&v.im);
    }
    let im_res = im_sum.to_f64().abs();
    if im_res > 1e-8 {
        return Err(Error::Precision(format!(
            "imaginary parts failed to cancel in the Euler-Kronecker sum: {im_res:e}"
        )));
    }
    let m_q = min_sq.unwrap().sqrt();
    let big_m = max_sq.unwrap().sqrt();
    let ek = euler_gamma::<T>().add(&re_sum);
    let m_norm = m_q
        .mul(&T::from_u64(spec.q))
        .mul(&T::from_ratio(200, 21));
    Ok(MqRecord {
        q: spec.q,
        m_q: m_q.to_f64(),
        m_q_dec: m_q.to_decimal(36),
        argmin_j: argmin,
        argmin_parity: if argmin % 2 == 1 { Parity::Odd } else { Parity::Even },
        big_m_q: big_m.to_f64(),
        argmax_j: argmax,
        ek: ek.to_f64(),
        ek_dec: ek.to_decimal(36),
        m_q_normalized: m_norm.to_f64(),
        precision_used: T::precision(),
        escalated: false,
        audit: None,
    })
}

/// Full extended64 pipeline for one modulus.
pub fn compute_record_extended(q: u64) -> Result<MqRecord> {
    let ct = CharacterTable::build(q)?;
    let st = SpecialValueTable::<Dd>::build(q)?;
    let spec = logderiv_spectrum(&ct, &st)?;
    mq_record(&spec)
}

/// Full quad113 pipeline for one modulus.
pub fn compute_record_quad(q: u64) -> Result<MqRecord> {
    let ct = CharacterTable::build(q)?;
    let st = SpecialValueTable::<Qf>::build(q)?;
    let spec = logderiv_spectrum(&ct, &st)?;
    mq_record(&spec)
}

/// Rebuild at quad113 when the extended64 m_q is below `threshold`. The
/// replacement record keeps both values in the audit trail; a spread above
/// 1e-8 is flagged, never silently accepted.
pub fn escalate_precision(
    ct: &CharacterTable,
    extended: &MqRecord,
    threshold: f64,
) -> Result<MqRecord> {
    if extended.m_q >= threshold {
        return Ok(extended.clone());
    }
    let st = SpecialValueTable::<Qf>::build(ct.q)?;
    let spec = logderiv_spectrum(ct, &st)?;
    let mut rec = mq_record(&spec)?;
    rec.escalated = true;
    rec.audit = Some(EscalationAudit {
        extended_m_q: extended.m_q,
        quad_m_q: rec.m_q,
        unstable: (extended.m_q - rec.m_q).abs() > 1e-8,
    });
    Ok(rec)
}

/// An independent Dirichlet-series approximation of L'/L(1, chi_j):
/// -sum_{n<=N, q does not divide n} Lambda(n) chi_j(n) / n. Convergence is
/// slow; `heuristic_tol` states the expected agreement scale, it is not a
/// certified bound.
#[derive(Clone, Copy, Debug)]
pub struct SeriesEstimate {
    pub re: f64,
    pub im: f64,
    pub heuristic_tol: f64,
}

pub fn series_oracle(ct: &CharacterTable, j: usize, cutoff: usize) -> Result<SeriesEstimate> {
    let n = ct.order();
    if j == 0 || j >= n {
        return Err(Error::InvalidInput(format!(
            "series_oracle needs a non-principal index, got j = {j}"
        )));
    }
    if cutoff < 1000 {
        return Err(Error::InvalidInput("cutoff below 10^3".into()));
    }
    // e^(2 pi i r / n) in f64; indexed by (j * dlog) mod n
    let roots: Vec<(f64, f64)> = (0..n)
        .map(|r| {
            let th = 2.0 * std::f64::consts::PI * r as f64 / n as f64;
            th.sin_cos()
        })
        .collect();
    let q = ct.q;
    let mut re = 0.0f64;
    let mut im = 0.0f64;
    for p in sieve_primes(cutoff) {
        if p == q {
            continue;
        }
        let lp = (p as f64).ln();
        let mut pa = p;
        loop {
            let r = (j as u64 * ct.dlog_of(pa % q) as u64 % n as u64) as usize;
            let (s, c) = roots[r];
            let w = lp / pa as f64;
            re -= w * c;
            im -= w * s;
            match pa.checked_mul(p) {
                Some(next) if next <= cutoff as u64 => pa = next,
                _ => break,
            }
        }
    }
    Ok(SeriesEstimate {
        re,
        im,
        heuristic_tol: 20.0 / (cutoff as f64).sqrt(),
    })
}

/// (1/(q-1)) sum_{j != 0} ld[j]^k conj(ld[j])^l over all non-principal
/// characters, in f64 (the downstream tolerances are far coarser).
pub fn empirical_moment<T: Real>(
    spec: &LogDerivSpectrum<T>,
    k: u32,
    l: u32,
) -> Result<(f64, f64)> {
    if k == 0 && l == 0 {
        return Err(Error::InvalidInput("moment orders k = l = 0".into()));
    }
    let mut re = 0.0f64;
    let mut im = 0.0f64;
    for j in spec.indices() {
        let (vr, vi) = spec.ld[j].to_f64_pair();
        let (pr, pi) = cpow(vr, vi, k);
        let (cr, ci) = cpow(vr, -vi, l);
        re += pr * cr - pi * ci;
        im += pr * ci + pi * cr;
    }
    let m = (spec.q - 1) as f64;
    Ok((re / m, im / m))
}

fn cpow(re: f64, im: f64, n: u32) -> (f64, f64) {
    let mut out = (1.0f64, 0.0f64);
    for _ in 0..n {
        out = (out.0 * re - out.1 * im, out.0 * im + out.1 * re);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Dd;

    fn spectrum_dd(q: u64) -> LogDerivSpectrum<Dd> {
        let ct = CharacterTable::build(q).unwrap();
        let st = SpecialValueTable::<Dd>::build(q).unwrap();
        logderiv_spectrum(&ct, &st).unwrap()
    }

    /// |dd value - reference decimal|, evaluated at quad precision
    fn err_vs(d: Dd, reference: &str) -> f64 {
        let mut f = rug::Float::with_val(160, d.hi);
        f += d.lo;
        f -= rug::Float::with_val(160, rug::Float::parse(reference).unwrap());
        f.to_f64().abs()
    }

    fn err_str_vs(dec: &str, reference: &str) -> f64 {
        let a = rug::Float::with_val(160, rug::Float::parse(dec).unwrap());
        let b = rug::Float::with_val(160, rug::Float::parse(reference).unwrap());
        (a - b).to_f64().abs()
    }

    #[test]
    fn b1_small_cases() {
        let t3 = CharacterTable::build(3).unwrap();
        let b = b1_chi::<Dd>(&t3).unwrap();
        // quadratic character mod 3: (1*1 + 2*(-1))/3 = -1/3
        assert!((b[1].re.to_f64() + 1.0 / 3.0).abs() < 1e-30);
        assert!(b[1].im.to_f64().abs() < 1e-30);

        let t5 = CharacterTable::build(5).unwrap();
        let b = b1_chi::<Dd>(&t5).unwrap();
        // odd characters have nonzero B_1; j = 1 by direct four-term sum:
        // B_{1, conj(chi_1)} = (1 - 2i + 3i - 4)/5 = (-3 + i)/5
        assert!((b[1].re.to_f64() + 0.6).abs() < 1e-28);
        assert!((b[1].im.to_f64() - 0.2).abs() < 1e-28);
        // even non-principal character: exact cancellation a <-> q-a
        assert!(b[2].norm_sqr().to_f64().sqrt() < 1e-28);
    }

    #[test]
    fn q3_reference_value() {
        let spec = spectrum_dd(3);
        let v = spec.value(1);
        // |gamma + log 2pi - 3(logG(1/3) - logG(2/3))|
        let m = v.norm();
        let e = err_vs(m, "0.368281615970147842633237904076");
        assert!(e < 1e-25, "m_3 error {e:e}");
        assert!(v.im.to_f64().abs() < 1e-28);
    }

    #[test]
    fn q5_minimum_matches_reference() {
        let rec = mq_record(&spectrum_dd(5)).unwrap();
        let e = err_str_vs(&rec.m_q_dec, "0.180899098585657908884214228728");
        assert!(e < 1e-25, "m_5 error {e:e}");
    }

    #[test]
    fn q7_and_q61_reference_minima() {
        let r7 = mq_record(&spectrum_dd(7)).unwrap();
        let e = err_str_vs(&r7.m_q_dec, "0.015635689993720378956622751350");
        assert!(e < 1e-25, "m_7 error {e:e}");
        // normalized statistic (200/21) * 7 * m_7
        assert!(
            (r7.m_q_normalized - 1.0423793329146919).abs() < 1e-12,
            "{}",
            r7.m_q_normalized
        );
        let r61 = mq_record(&spectrum_dd(61)).unwrap();
        let e = err_str_vs(&r61.m_q_dec, "0.004424742139200355181771341999");
        assert!(e < 1e-25, "m_61 error {e:e}");
    }

    #[test]
    fn conjugate_pair_at_q7() {
        let spec = spectrum_dd(7);
        let a = spec.value(1);
        let b = spec.value(5).conj();
        assert!(a.sub(&b).norm_sqr().to_f64().sqrt() < 1e-26);
        assert!(spec.conjugate_symmetry_residual() < 1e-26);
        assert!(spec.quadratic_imag_residual() < 1e-26);
    }

    #[test]
    fn fft_and_naive_spectra_agree() {
        for q in [61u64, 499] {
            let ct = CharacterTable::build(q).unwrap();
            let st = SpecialValueTable::<Dd>::build(q).unwrap();
            let a = logderiv_spectrum(&ct, &st).unwrap();
            let b = logderiv_spectrum_naive(&ct, &st).unwrap();
            for j in 1..ct.order() {
                let d = a.ld[j].sub(&b.ld[j]).norm_sqr().to_f64().sqrt();
                let m = b.ld[j].norm_sqr().to_f64().sqrt();
                assert!(d / m.max(1e-6) < 1e-10, "q={q} j={j}: {d:e}");
            }
        }
    }

    #[test]
    fn escalation_policy() {
        // m_3 = 0.368: no escalation at the default threshold
        let ct = CharacterTable::build(3).unwrap();
        let base = compute_record_extended(3).unwrap();
        let r = escalate_precision(&ct, &base, ESCALATION_THRESHOLD).unwrap();
        assert!(!r.escalated && r.audit.is_none());

        // m_61 = 4.4e-3: still above the default threshold
        let ct61 = CharacterTable::build(61).unwrap();
        let base61 = compute_record_extended(61).unwrap();
        let r61 = escalate_precision(&ct61, &base61, ESCALATION_THRESHOLD).unwrap();
        assert!(!r61.escalated);

        // synthetic threshold forces a quad re-run at q = 7; m_q unchanged
        // to 15 digits and stability confirmed
        let ct7 = CharacterTable::build(7).unwrap();
        let base7 = compute_record_extended(7).unwrap();
        let r7 = escalate_precision(&ct7, &base7, 0.1).unwrap();
        assert!(r7.escalated);
        assert_eq!(r7.precision_used, Precision::Quad113);
        let audit = r7.audit.as_ref().unwrap();
        assert!(!audit.unstable);
        assert!((audit.extended_m_q - audit.quad_m_q).abs() < 1e-15);
        assert!(err_str_vs(&r7.m_q_dec, "0.015635689993720378956622751350") < 1e-27);
    }

    #[test]
    fn series_oracle_consistency() {
        // q = 3: the lone character's value is real, about 0.368281...;
        // the truncated Dirichlet series agrees to ~3 digits at N = 10^7
        let ct = CharacterTable::build(3).unwrap();
        let est = series_oracle(&ct, 1, 10_000_000).unwrap();
        let spec = spectrum_dd(3);
        let (vr, vi) = spec.value(1).to_f64_pair();
        assert!((est.re - vr).abs() < 1e-3, "{} vs {vr}", est.re);
        assert!((est.im - vi).abs() < 1e-3);
        assert!((est.re - vr).abs() < est.heuristic_tol);

        // doubling N moves the estimate by less than the reported scale
        let est2 = series_oracle(&ct, 1, 20_000_000).unwrap();
        assert!((est2.re - est.re).abs() < est.heuristic_tol);

        // conjugate indices give conjugate estimates
        let ct7 = CharacterTable::build(7).unwrap();
        let e1 = series_oracle(&ct7, 1, 100_000).unwrap();
        let e5 = series_oracle(&ct7, 5, 100_000).unwrap();
        assert!((e1.re - e5.re).abs() < 1e-12 && (e1.im + e5.im).abs() < 1e-12);

        assert!(series_oracle(&ct7, 0, 100_000).is_err());
        assert!(series_oracle(&ct7, 1, 10).is_err());
    }

    #[test]
    fn empirical_moment_identities() {
        let spec = spectrum_dd(101);
        let rec = mq_record(&spec).unwrap();
        // k=1, l=0 is (EK_q - gamma)/(q-1)
        let (re, im) = empirical_moment(&spec, 1, 0).unwrap();
        let gamma = euler_gamma::<Dd>().to_f64();
        assert!((re - (rec.ek - gamma) / 100.0).abs() < 1e-12);
        assert!(im.abs() < 1e-12);
        // k=l=1 is a positive real mean of squares
        let (re, im) = empirical_moment(&spec, 1, 1).unwrap();
        assert!(re > 0.0 && im.abs() < 1e-12);
        assert!(empirical_moment(&spec, 0, 0).is_err());
    }

    #[test]
    fn loose_magnitude_regression() {
        // every |ld| <= 10 at q <= 997 (coarse tripwire)
        for q in [997u64, 499, 101] {
            let spec = spectrum_dd(q);
            for j in spec.indices() {
                assert!(spec.ld[j].norm_sqr().to_f64() <= 100.0, "q={q} j={j}");
            }
        }
    }
}

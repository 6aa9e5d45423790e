//! The probabilistic model Ld(1, X) = sum_p (log p) X(p)/(p - X(p)) with
//! X(p) independent uniform on the unit circle: seeded Monte-Carlo
//! sampling, exact moments through Lambda_k, the characteristic function
//! by per-prime quadrature, and an empirical discrepancy estimate against
//! a character ensemble.

use crate::arith::{dirichlet_convolve, sieve_primes, LambdaTable};
use crate::{Error, Result};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use std::io::Write;
use std::sync::OnceLock;

/// Sampler / quadrature configuration. The seed fully determines the
/// sample stream regardless of worker count.
#[derive(Clone, Debug)]
pub struct RandomModelConfig {
    pub prime_cutoff: usize,
    pub samples: usize,
    pub seed: u64,
    pub quadrature_points: usize,
}

impl Default for RandomModelConfig {
    fn default() -> Self {
        RandomModelConfig {
            prime_cutoff: 10_000,
            samples: 1_000_000,
            seed: 42,
            quadrature_points: 128,
        }
    }
}

impl RandomModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prime_cutoff < 100 {
            return Err(Error::InvalidInput("prime cutoff below 100".into()));
        }
        if self.samples < 1 {
            return Err(Error::InvalidInput("need at least one sample".into()));
        }
        if self.quadrature_points < 64 || !self.quadrature_points.is_power_of_two() {
            return Err(Error::InvalidInput(
                "quadrature points must be a power of two >= 64".into(),
            ));
        }
        Ok(())
    }
}

/// One term (log p) e^(i t)/(p - e^(i t)), written out in reals.
#[inline]
fn euler_term(p: f64, lp: f64, sin_t: f64, cos_t: f64) -> (f64, f64) {
    let den = p * p - 2.0 * p * cos_t + 1.0;
    let scale = lp / den;
    ((cos_t * p - 1.0) * scale, sin_t * p * scale)
}

const SAMPLE_BLOCK: usize = 4096;

/// Draw `config.samples` values of the truncated sum over p <= cutoff.
/// Identical (seed, cutoff, samples) give bit-identical output; sampling
/// parallelises over fixed blocks with per-block ChaCha streams, so the
/// result does not depend on the number of workers.
pub fn sample_ld(config: &RandomModelConfig) -> Result<Vec<(f64, f64)>> {
    config.validate()?;
    let primes: Vec<(f64, f64)> = sieve_primes(config.prime_cutoff)
        .into_iter()
        .map(|p| (p as f64, (p as f64).ln()))
        .collect();
    let n = config.samples;
    let nblocks = n.div_ceil(SAMPLE_BLOCK);
    let blocks: Vec<Vec<(f64, f64)>> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
            rng.set_stream(b as u64);
            let lo = b * SAMPLE_BLOCK;
            let hi = ((b + 1) * SAMPLE_BLOCK).min(n);
            let mut out = Vec::with_capacity(hi - lo);
            for _ in lo..hi {
                let mut re = 0.0f64;
                let mut im = 0.0f64;
                for &(p, lp) in &primes {
                    let t = (rng.next_u64() >> 11) as f64
                        * (2.0 * std::f64::consts::PI / (1u64 << 53) as f64);
                    let (s, c) = t.sin_cos();
                    let (tr, ti) = euler_term(p, lp, s, c);
                    re += tr;
                    im += ti;
                }
                out.push((re, im));
            }
            out
        })
        .collect();
    Ok(blocks.concat())
}

/// Diagnostic mode: every X(p) forced to the same angle. At angle 0 the
/// value is the real sum of log(p)/(p-1) over p <= cutoff.
pub fn sample_ld_fixed_angle(config: &RandomModelConfig, angle: f64) -> (f64, f64) {
    let (s, c) = angle.sin_cos();
    let mut re = 0.0f64;
    let mut im = 0.0f64;
    for p in sieve_primes(config.prime_cutoff) {
        let pf = p as f64;
        let (tr, ti) = euler_term(pf, pf.ln(), s, c);
        re += tr;
        im += ti;
    }
    (re, im)
}

/// Moment request: E(Ld^k conj(Ld)^l) truncated at `cutoff`.
#[derive(Clone, Copy, Debug)]
pub struct MomentSpec {
    pub k: u32,
    pub l: u32,
    pub cutoff: usize,
}

/// A moment value with the bound on the discarded tail. The bound is the
/// integral envelope of (log n)^{k+l}/n^2 past the cutoff and is reported
/// even when it is uselessly large (small cutoffs at large k+l).
#[derive(Clone, Copy, Debug)]
pub struct Moment {
    pub value: f64,
    pub tail_bound: f64,
}

/// (-1)^{k+l} sum_{n<=N} Lambda_k(n) Lambda_l(n) / n^2. Mixed moments with
/// k = 0 or l = 0 vanish identically (E X(n) = 0 for n > 1).
pub fn exact_moment(spec: &MomentSpec, lt: &LambdaTable) -> Result<Moment> {
    if spec.k == 0 && spec.l == 0 {
        return Err(Error::InvalidInput("moment orders k = l = 0".into()));
    }
    if lt.cutoff < spec.cutoff {
        return Err(Error::InvalidInput(format!(
            "Lambda table cutoff {} below requested {}",
            lt.cutoff, spec.cutoff
        )));
    }
    if spec.k == 0 || spec.l == 0 {
        // Lambda_0(n) = [n = 1] and Lambda_k(1) = 0
        return Ok(Moment {
            value: 0.0,
            tail_bound: 0.0,
        });
    }
    let lk = lt.lambda_k(spec.k as usize)?;
    let ll = if spec.l == spec.k {
        None
    } else {
        Some(lt.lambda_k(spec.l as usize)?)
    };
    let mut sum = NeumaierSum::default();
    for n in 2..=spec.cutoff {
        let a = lk[n];
        if a == 0.0 {
            continue;
        }
        let b = ll.as_ref().map_or(a, |v| v[n]);
        if b == 0.0 {
            continue;
        }
        sum.add(a * b / (n as f64 * n as f64));
    }
    let sign = if (spec.k + spec.l) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(Moment {
        value: sign * sum.total(),
        tail_bound: log_power_tail_bound(spec.cutoff, spec.k + spec.l),
    })
}

/// Prime-power geometric form of the second moment:
/// sum over p <= N of (log p)^2 (1 - p^(-2 a_max))/(p^2 - 1),
/// a_max = floor(log N / log p) -- the same truncation as the n-sum, summed
/// along a different route. Streams a bit sieve, so cutoffs to 10^8 are fine.
pub fn exact_moment_11_prime_form(cutoff: usize) -> Moment {
    let mut sum = NeumaierSum::default();
    let mut p = 2usize;
    let sieve = BitSieve::new(cutoff);
    while let Some(pp) = sieve.next_prime(p) {
        let pf = pp as f64;
        let lp = pf.ln();
        let amax = ((cutoff as f64).ln() / lp).floor().max(1.0);
        let geom = (1.0 - pf.powf(-2.0 * amax)) / (pf * pf - 1.0);
        sum.add(lp * lp * geom);
        p = pp + 1;
    }
    Moment {
        value: sum.total(),
        tail_bound: log_power_tail_bound(cutoff, 2),
    }
}

/// Upper bound on sum_{n>N} (log n)^r / n^2: the exact integral
/// int_N^inf (log t)^r/t^2 dt = (1/N) sum_i C(r,i) i! (log N)^{r-i}, plus
/// the peak value when the integrand is still rising at N.
pub fn log_power_tail_bound(cutoff: usize, r: u32) -> f64 {
    let n = cutoff as f64;
    let ln_n = n.ln();
    let mut integral = 0.0f64;
    let mut binom_fact = 1.0f64; // C(r,i) * i!  =  r!/(r-i)!
    for i in 0..=r {
        if i > 0 {
            binom_fact *= (r - i + 1) as f64;
        }
        integral += binom_fact * ln_n.powi((r - i) as i32);
    }
    integral /= n;
    // (log t)^r/t^2 peaks at log t = r/2
    let peak_log = r as f64 / 2.0;
    if ln_n >= peak_log {
        integral
    } else {
        integral + peak_log.powi(r as i32) * (-(r as f64)).exp()
    }
}

#[derive(Default)]
struct NeumaierSum {
    s: f64,
    c: f64,
}

impl NeumaierSum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn total(&self) -> f64 {
        self.s + self.c
    }
}

/// Primes <= 10^7 cached for tail constants.
fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve_primes(10_000_000))
}

/// sum_{p > cutoff} (log p)^2 / p^2, exact to 10^7 plus an integral
/// estimate beyond.
fn log2_over_p2_tail(cutoff: usize) -> f64 {
    let mut s = 0.0f64;
    for &p in small_primes().iter().rev() {
        if (p as usize) <= cutoff {
            break;
        }
        let pf = p as f64;
        s += pf.ln().powi(2) / (pf * pf);
    }
    // integral estimate of the remainder past 10^7:
    // int (log t)^2/(t^2 log t) = (log B + 1)/B
    let b = 1e7f64.max(cutoff as f64);
    s + (b.ln() + 1.0) / b
}

/// Characteristic function Phi(u, v) = E exp(i u Re Ld + i v Im Ld) of the
/// truncated model, times the quadratic tail correction
/// exp(-(u^2+v^2) sum_{p>P} (log p)^2/(4 p^2)).
///
/// Each per-prime factor is a periodic trapezoid average; the point count
/// doubles until the value moves by less than 1e-8.
pub fn phi_rand(u: f64, v: f64, config: &RandomModelConfig) -> Result<(f64, f64)> {
    config.validate()?;
    if u.abs() > 1e3 || v.abs() > 1e3 {
        return Err(Error::InvalidInput(
            "|u|, |v| above 10^3: the value is below noise there".into(),
        ));
    }
    let primes: Vec<(f64, f64)> = sieve_primes(config.prime_cutoff)
        .into_iter()
        .map(|p| (p as f64, (p as f64).ln()))
        .collect();
    let eval = |points: usize| -> (f64, f64) {
        let mut prod = (1.0f64, 0.0f64);
        let step = 2.0 * std::f64::consts::PI / points as f64;
        for &(p, lp) in &primes {
            let mut fr = 0.0f64;
            let mut fi = 0.0f64;
            for i in 0..points {
                let t = (i as f64 + 0.5) * step;
                let (s, c) = t.sin_cos();
                let (wr, wi) = euler_term(p, lp, s, c);
                let (es, ec) = (u * wr + v * wi).sin_cos();
                fr += ec;
                fi += es;
            }
            let inv = 1.0 / points as f64;
            prod = (
                prod.0 * fr * inv - prod.1 * fi * inv,
                prod.0 * fi * inv + prod.1 * fr * inv,
            );
        }
        prod
    };
    let mut points = config.quadrature_points;
    let mut cur = eval(points);
    loop {
        let next = eval(points * 2);
        let delta = ((next.0 - cur.0).powi(2) + (next.1 - cur.1).powi(2)).sqrt();
        if delta <= 1e-8 {
            cur = next;
            break;
        }
        points *= 2;
        cur = next;
        if points > (1 << 16) {
            return Err(Error::Quadrature(format!(
                "per-prime factors still moving {delta:e} at {points} points for (u,v)=({u},{v})"
            )));
        }
    }
    let tail = log2_over_p2_tail(config.prime_cutoff);
    let damp = (-(u * u + v * v) * tail / 4.0).exp();
    Ok((cur.0 * damp, cur.1 * damp))
}

/// Empirical fraction of samples inside [a,b] x [c,d] (infinite edges
/// allowed), with its binomial standard error.
pub fn probability_in_rectangle(
    samples: &[(f64, f64)],
    rect: (f64, f64, f64, f64),
) -> Result<(f64, f64)> {
    let (a, b, c, d) = rect;
    if !(a < b && c < d) {
        return Err(Error::InvalidInput(format!(
            "degenerate rectangle [{a},{b}]x[{c},{d}]"
        )));
    }
    let n = samples.len();
    if n == 0 {
        return Err(Error::InvalidInput("no samples".into()));
    }
    let hits = samples
        .iter()
        .filter(|(x, y)| *x >= a && *x <= b && *y >= c && *y <= d)
        .count();
    let p = hits as f64 / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    Ok((p, se))
}

pub const DISCREPANCY_DEFAULT_GRID: usize = 64;

/// Sup over the grid rectangles (-inf, x_i] x (-inf, y_j], x_i and y_j on a
/// G x G grid over [-4, 4]^2, of the difference of the two empirical
/// distributions. A CDF-style estimate of the rectangle discrepancy, not a
/// certified sup.
pub fn discrepancy_estimate(
    ensemble: &[(f64, f64)],
    samples: &[(f64, f64)],
    grid: usize,
) -> Result<f64> {
    if ensemble.is_empty() || samples.is_empty() {
        return Err(Error::InvalidInput("empty point set".into()));
    }
    let g = grid.max(2);
    let c1 = cumulative_grid(ensemble, g);
    let c2 = cumulative_grid(samples, g);
    let n1 = ensemble.len() as f64;
    let n2 = samples.len() as f64;
    let mut worst = 0.0f64;
    for i in 0..g * g {
        let d = (c1[i] as f64 / n1 - c2[i] as f64 / n2).abs();
        worst = worst.max(d);
    }
    Ok(worst)
}

fn cumulative_grid(points: &[(f64, f64)], g: usize) -> Vec<u64> {
    let mut h = vec![0u64; g * g];
    let scale = g as f64 / 8.0;
    let idx = |z: f64| -> Option<usize> {
        let i = ((z + 4.0) * scale).ceil() - 1.0;
        if i >= g as f64 {
            None
        } else {
            Some(i.max(0.0) as usize)
        }
    };
    for &(x, y) in points {
        if let (Some(ix), Some(iy)) = (idx(x), idx(y)) {
            h[ix * g + iy] += 1;
        }
    }
    // 2D prefix sums in place
    for ix in 0..g {
        for iy in 1..g {
            h[ix * g + iy] += h[ix * g + iy - 1];
        }
    }
    for ix in 1..g {
        for iy in 0..g {
            h[ix * g + iy] += h[(ix - 1) * g + iy];
        }
    }
    h
}

/// One row of the moment-growth report.
#[derive(Clone, Copy, Debug)]
pub struct GrowthEntry {
    pub k: u32,
    pub value: f64,
    pub tail_bound: f64,
    pub bound_at_c: f64,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct GrowthReport {
    pub c: f64,
    pub entries: Vec<GrowthEntry>,
    /// smallest c for which every tested k passes, from the computed values
    pub minimal_admissible_c: f64,
    pub all_hold: bool,
}

/// Check E|Ld|^{2k} <= (c log k)^{2k} for 8 <= k <= max_k against the
/// truncated exact moments. The truncation under-counts, so this witnesses
/// the bound, it does not certify the full moment; the tail bound says how
/// loose the truncation is.
pub fn moment_growth_check(max_k: u32, lt: &LambdaTable, c: f64) -> Result<GrowthReport> {
    if !(8..=12).contains(&max_k) {
        return Err(Error::InvalidInput(
            "max_k must be between 8 and 12 (Lambda_k cost)".into(),
        ));
    }
    let n = lt.cutoff;
    let mut cur = lt.lambda.clone();
    let mut entries = Vec::new();
    let mut minimal = 0.0f64;
    for k in 2..=max_k {
        cur = dirichlet_convolve(&lt.lambda, &cur, n);
        if k >= 8 {
            let mut sum = NeumaierSum::default();
            for m in 2..=n {
                if cur[m] != 0.0 {
                    sum.add(cur[m] * cur[m] / (m as f64 * m as f64));
                }
            }
            let value = sum.total();
            let bound_at_c = (c * (k as f64).ln()).powi(2 * k as i32);
            minimal = minimal.max(value.powf(1.0 / (2.0 * k as f64)) / (k as f64).ln());
            entries.push(GrowthEntry {
                k,
                value,
                tail_bound: log_power_tail_bound(n, 2 * k),
                bound_at_c,
                holds: value <= bound_at_c,
            });
        }
    }
    let all_hold = entries.iter().all(|e| e.holds);
    Ok(GrowthReport {
        c,
        entries,
        minimal_admissible_c: minimal,
        all_hold,
    })
}

/// Simple incremental bit sieve for streaming primes to large cutoffs.
struct BitSieve {
    limit: usize,
    bits: Vec<u64>, // odd numbers marked composite
}

impl BitSieve {
    fn new(limit: usize) -> BitSieve {
        let half = limit / 2 + 1;
        let mut bits = vec![0u64; half / 64 + 1];
        let mut i = 1usize; // odd number 2i+1
        while (2 * i + 1) * (2 * i + 1) <= limit {
            if bits[i / 64] & (1 << (i % 64)) == 0 {
                let p = 2 * i + 1;
                let mut j = (p * p - 1) / 2;
                while 2 * j + 1 <= limit {
                    bits[j / 64] |= 1 << (j % 64);
                    j += p;
                }
            }
            i += 1;
        }
        BitSieve { limit, bits }
    }

    /// Smallest prime >= from, if any within the limit.
    fn next_prime(&self, from: usize) -> Option<usize> {
        if from <= 2 {
            return if self.limit >= 2 { Some(2) } else { None };
        }
        let mut n = from | 1; // next odd >= from
        while n <= self.limit {
            let i = (n - 1) / 2;
            if self.bits[i / 64] & (1 << (i % 64)) == 0 {
                return Some(n);
            }
            n += 2;
        }
        None
    }
}

/// Binary sample export: magic, version, seed, prime cutoff, count, then
/// little-endian (re, im) f64 pairs. Same header convention as the
/// special-value cache.
pub fn write_samples_binary(
    path: &std::path::Path,
    samples: &[(f64, f64)],
    config: &RandomModelConfig,
) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    w.write_all(b"LCHISMP1")?;
    w.write_all(&1u32.to_le_bytes())?;
    w.write_all(&config.seed.to_le_bytes())?;
    w.write_all(&(config.prime_cutoff as u64).to_le_bytes())?;
    w.write_all(&(samples.len() as u64).to_le_bytes())?;
    for &(re, im) in samples {
        w.write_all(&re.to_le_bytes())?;
        w.write_all(&im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_samples_csv(
    path: &std::path::Path,
    samples: &[(f64, f64)],
    config: &RandomModelConfig,
) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "# seed={} prime_cutoff={}", config.seed, config.prime_cutoff)?;
    writeln!(w, "re,im")?;
    for &(re, im) in samples {
        writeln!(w, "{re},{im}")?;
    }
    w.flush()?;
    Ok(())
}

//! Arbitrary-length complex FFT over any [`Real`] scalar, with the
//! convention X[j] = sum_k x[k] e^(+2*pi*i*jk/n).
//!
//! Mixed-radix Cooley-Tukey decimation over the small prime factors of n;
//! lengths whose smallest prime factor exceeds 61 fall back to Bluestein's
//! chirp-z embedding in a power-of-two cyclic convolution. Plans hold all
//! twiddles and are immutable after construction; every execution owns its
//! scratch, so one plan can serve concurrent transforms.

use crate::scalar::{Complex, Real};

const DIRECT_MAX: usize = 64;
const SMALL_FACTOR_MAX: usize = 61;
/// Incremental twiddle generation is re-anchored by a fresh sin/cos every
/// this many steps to stop error growth.
const ANCHOR_EVERY: usize = 128;

pub struct Plan<T: Real> {
    n: usize,
    kind: Kind<T>,
}

enum Kind<T: Real> {
    Direct {
        /// roots[r] = e^(2 pi i r / n)
        roots: Vec<Complex<T>>,
    },
    CooleyTukey {
        r: usize,
        m: usize,
        sub: Box<Plan<T>>,
        /// twiddle[j0 * r + s] = e^(2 pi i j0 s / n), j0 < m, s < r
        twiddle: Vec<Complex<T>>,
        /// r_roots[t] = e^(2 pi i t / r), t < r
        r_roots: Vec<Complex<T>>,
    },
    Bluestein {
        /// chirp[k] = e^(+pi i k^2 / n), k < n
        chirp: Vec<Complex<T>>,
        /// forward FFT of the cyclic kernel conj(chirp), length l
        kernel_fft: Vec<Complex<T>>,
        inner: Box<Plan<T>>,
        l: usize,
        log2_l: u32,
    },
}

fn smallest_prime_factor(n: usize) -> usize {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

/// e^(2 pi i k / n) for integer k, reduced exactly.
fn unit_root<T: Real>(k: u64, n: u64) -> Complex<T> {
    let t = T::from_u64(k % n).div(&T::from_u64(n));
    Complex::unit_2pi(&t)
}

/// Table of e^(2 pi i (base + step*i) / n) for i < count, incremental with
/// periodic re-anchoring.
fn twiddle_run<T: Real>(base: u64, step: u64, n: u64, count: usize) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let w_step = unit_root::<T>(step, n);
    let mut cur = unit_root::<T>(base, n);
    for i in 0..count {
        if i > 0 {
            if i % ANCHOR_EVERY == 0 {
                cur = unit_root::<T>(base + step * i as u64, n);
            } else {
                cur = cur.mul(&w_step);
            }
        }
        out.push(cur.clone());
    }
    out
}

impl<T: Real> Plan<T> {
    pub fn new(n: usize) -> Plan<T> {
        assert!(n >= 1, "transform length must be positive");
        let kind = if n <= DIRECT_MAX {
            Kind::Direct {
                roots: twiddle_run(0, 1, n as u64, n),
            }
        } else {
            let r = smallest_prime_factor(n);
            if r <= SMALL_FACTOR_MAX {
                let m = n / r;
                let sub = Box::new(Plan::new(m));
                // twiddle[j0 * r + s] = w^(j0 * s); generate per s as a run over j0
                let mut twiddle = vec![Complex::<T>::zero(); m * r];
                for s in 0..r {
                    let run = twiddle_run::<T>(0, s as u64, n as u64, m);
                    for (j0, w) in run.into_iter().enumerate() {
                        twiddle[j0 * r + s] = w;
                    }
                }
                let r_roots = twiddle_run(0, 1, r as u64, r);
                Kind::CooleyTukey {
                    r,
                    m,
                    sub,
                    twiddle,
                    r_roots,
                }
            } else {
                let l = (2 * n - 1).next_power_of_two();
                let log2_l = l.trailing_zeros();
                let inner = Box::new(Plan::new(l));
                let two_n = 2 * n as u64;
                let mut chirp = Vec::with_capacity(n);
                for k in 0..n as u64 {
                    // k^2 mod 2n keeps the argument small and exact
                    let ksq = ((k as u128 * k as u128) % two_n as u128) as u64;
                    chirp.push(unit_root::<T>(ksq, two_n));
                }
                let mut kernel = vec![Complex::<T>::zero(); l];
                for d in 0..n {
                    let v = chirp[d].conj();
                    kernel[d] = v.clone();
                    if d > 0 {
                        kernel[l - d] = v;
                    }
                }
                inner.execute_forward(&mut kernel);
                Kind::Bluestein {
                    chirp,
                    kernel_fft: kernel,
                    inner,
                    l,
                    log2_l,
                }
            }
        };
        Plan { n, kind }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Forward transform in place: data[j] <- sum_k data[k] e^(2 pi i jk/n).
    pub fn transform(&self, data: &mut [Complex<T>]) {
        assert_eq!(data.len(), self.n, "length mismatch");
        self.execute_forward(data);
    }

    /// Inverse of [`Plan::transform`] (including the 1/n factor).
    pub fn inverse(&self, data: &mut [Complex<T>]) {
        assert_eq!(data.len(), self.n, "length mismatch");
        for v in data.iter_mut() {
            *v = v.conj();
        }
        self.execute_forward(data);
        let inv_n = T::one().div(&T::from_u64(self.n as u64));
        for v in data.iter_mut() {
            *v = v.conj().scale(&inv_n);
        }
    }

    fn execute_forward(&self, data: &mut [Complex<T>]) {
        let mut scratch = vec![Complex::<T>::zero(); self.n];
        self.exec(data, &mut scratch);
    }

    /// Result lands in `data`; `scratch` (same length) is clobbered.
    fn exec(&self, data: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        match &self.kind {
            Kind::Direct { roots } => {
                let n = self.n;
                if n == 1 {
                    return;
                }
                scratch[..n].clone_from_slice(data);
                for (j, slot) in data.iter_mut().enumerate() {
                    let mut acc = scratch[0].clone();
                    let mut idx = 0usize;
                    for x in scratch[..n].iter().skip(1) {
                        idx += j;
                        if idx >= n {
                            idx -= n;
                        }
                        // acc += x * w
                        acc = acc.add(&x.mul(&roots[idx]));
                    }
                    *slot = acc;
                }
            }
            Kind::CooleyTukey {
                r,
                m,
                sub,
                twiddle,
                r_roots,
            } => {
                let (r, m) = (*r, *m);
                // gather stride-r subsequences into scratch blocks, then run
                // the length-m sub-FFTs there, using data blocks as their
                // scratch
                for s in 0..r {
                    let dst = &mut scratch[s * m..(s + 1) * m];
                    for (i, slot) in dst.iter_mut().enumerate() {
                        *slot = data[i * r + s].clone();
                    }
                }
                for (sblock, dblock) in scratch.chunks_mut(m).zip(data.chunks_mut(m)) {
                    sub.exec(sblock, dblock);
                }
                // combine: X[j0 + t m] = sum_s w^(j0 s) Y_s[j0] e^(2 pi i t s / r)
                if r == 2 {
                    for j0 in 0..m {
                        let z0 = scratch[j0].clone();
                        let z1 = twiddle[j0 * 2 + 1].mul(&scratch[m + j0]);
                        data[j0] = z0.add(&z1);
                        data[j0 + m] = z0.sub(&z1);
                    }
                } else {
                    let mut z: Vec<Complex<T>> = vec![Complex::zero(); r];
                    for j0 in 0..m {
                        for (s, slot) in z.iter_mut().enumerate() {
                            *slot = twiddle[j0 * r + s].mul(&scratch[s * m + j0]);
                        }
                        for t in 0..r {
                            let mut acc = z[0].clone();
                            let mut idx = 0usize;
                            for zs in z.iter().skip(1) {
                                idx += t;
                                if idx >= r {
                                    idx -= r;
                                }
                                acc = acc.add(&zs.mul(&r_roots[idx]));
                            }
                            data[j0 + t * m] = acc;
                        }
                    }
                }
            }
            Kind::Bluestein {
                chirp,
                kernel_fft,
                inner,
                l,
                log2_l,
            } => {
                let n = self.n;
                let mut a = vec![Complex::<T>::zero(); *l];
                let mut b = vec![Complex::<T>::zero(); *l];
                for k in 0..n {
                    a[k] = data[k].mul(&chirp[k]);
                }
                inner.exec(&mut a, &mut b);
                for (av, kv) in a.iter_mut().zip(kernel_fft.iter()) {
                    *av = av.mul(kv);
                }
                // inverse length-l FFT by conjugation; 1/l is an exact
                // power-of-two scale
                for v in a.iter_mut() {
                    *v = v.conj();
                }
                inner.exec(&mut a, &mut b);
                let scale = 0.5f64.powi(*log2_l as i32);
                for (j, slot) in data.iter_mut().enumerate().take(n) {
                    *slot = a[j].conj().scale_f64(scale).mul(&chirp[j]);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Dd;

    fn naive_dft(x: &[Complex<Dd>]) -> Vec<Complex<Dd>> {
        let n = x.len();
        (0..n)
            .map(|j| {
                let mut acc = Complex::<Dd>::zero();
                for (k, v) in x.iter().enumerate() {
                    let w = unit_root::<Dd>((j * k) as u64 % n as u64, n as u64);
                    acc = acc.add(&v.mul(&w));
                }
                acc
            })
            .collect()
    }

    fn pseudo_input(n: usize, seed: u64) -> Vec<Complex<Dd>> {
        let mut state = seed | 1;
        (0..n)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let re = ((state >> 11) as f64) / (1u64 << 53) as f64 - 0.5;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let im = ((state >> 11) as f64) / (1u64 << 53) as f64 - 0.5;
                Complex::from_f64(re * 4.0, im * 4.0)
            })
            .collect()
    }

    fn max_rel_err(a: &[Complex<Dd>], b: &[Complex<Dd>]) -> f64 {
        let scale = b
            .iter()
            .map(|v| v.norm_sqr().to_f64().sqrt())
            .fold(0.0f64, f64::max)
            .max(1e-30);
        a.iter()
            .zip(b)
            .map(|(x, y)| x.sub(y).norm_sqr().to_f64().sqrt() / scale)
            .fold(0.0f64, f64::max)
    }

    #[test]
    fn matches_naive_on_assorted_lengths() {
        // mixed small factors, awkward primes (Bluestein), and composites
        // of large primes
        for n in [1usize, 2, 3, 4, 6, 8, 12, 30, 64, 96, 100, 120, 210, 256,
                  360, 498, 1000, 67, 127, 251, 509, 1009, 2 * 503] {
            let x = pseudo_input(n, n as u64);
            let mut y = x.clone();
            let plan = Plan::<Dd>::new(n);
            plan.transform(&mut y);
            let want = naive_dft(&x);
            let err = max_rel_err(&y, &want);
            assert!(err < 1e-25, "n = {n}: err = {err:e}");
        }
    }

    #[test]
    fn round_trip() {
        for n in [60usize, 127, 498, 1000] {
            let x = pseudo_input(n, 7 * n as u64 + 1);
            let mut y = x.clone();
            let plan = Plan::<Dd>::new(n);
            plan.transform(&mut y);
            plan.inverse(&mut y);
            let err = max_rel_err(&y, &x);
            assert!(err < 1e-25, "n = {n}: round-trip err = {err:e}");
        }
    }

    #[test]
    fn plan_reuse_is_bit_identical() {
        let n = 498;
        let plan = Plan::<Dd>::new(n);
        let x1 = pseudo_input(n, 11);
        let x2 = pseudo_input(n, 12);
        let mut a1 = x1.clone();
        let mut a2 = x2.clone();
        plan.transform(&mut a1);
        plan.transform(&mut a2);
        // fresh plan, same inputs
        let plan2 = Plan::<Dd>::new(n);
        let mut b1 = x1.clone();
        let mut b2 = x2.clone();
        plan2.transform(&mut b1);
        plan2.transform(&mut b2);
        for (a, b) in a1.iter().zip(&b1).chain(a2.iter().zip(&b2)) {
            assert_eq!(a.re.hi.to_bits(), b.re.hi.to_bits());
            assert_eq!(a.re.lo.to_bits(), b.re.lo.to_bits());
            assert_eq!(a.im.hi.to_bits(), b.im.hi.to_bits());
            assert_eq!(a.im.lo.to_bits(), b.im.lo.to_bits());
        }
    }

    #[test]
    fn delta_and_constant_inputs() {
        let n = 120;
        let plan = Plan::<Dd>::new(n);
        // delta at 0 -> all ones
        let mut x = vec![Complex::<Dd>::zero(); n];
        x[0] = Complex::from_f64(1.0, 0.0);
        plan.transform(&mut x);
        for v in &x {
            assert!((v.re.to_f64() - 1.0).abs() < 1e-28 && v.im.to_f64().abs() < 1e-28);
        }
        // all ones -> n delta
        let mut x = vec![Complex::<Dd>::from_f64(1.0, 0.0); n];
        plan.transform(&mut x);
        assert!((x[0].re.to_f64() - n as f64).abs() < 1e-25);
        for v in x.iter().skip(1) {
            assert!(v.norm_sqr().to_f64().sqrt() < 1e-25);
        }
    }
}

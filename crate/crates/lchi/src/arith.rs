//! Integer substrate: prime sieve, primitive roots, index tables for the
//! character group, and the von Mangoldt function with its Dirichlet
//! convolution powers.

use crate::{Error, Result};

/// Ordered primes <= limit. Empty for limit < 2.
pub fn sieve_primes(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for n in 2..=limit {
        if !composite[n] {
            primes.push(n as u64);
            let mut m = n * n;
            while m <= limit {
                composite[m] = true;
                m += n;
            }
        }
    }
    primes
}

/// pi(x) without materialising the prime list; bit sieve over odd numbers,
/// usable up to ~10^9.
pub fn prime_count(limit: usize) -> usize {
    if limit < 2 {
        return 0;
    }
    if limit == 2 {
        return 1;
    }
    let half = (limit - 1) / 2; // odd numbers 3,5,..,limit mapped to 1..=half
    let mut bits = vec![0u64; half / 64 + 1];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= limit {
        if bits[i / 64] & (1 << (i % 64)) == 0 {
            let p = 2 * i + 1;
            let mut j = (p * p - 1) / 2;
            while j <= half {
                bits[j / 64] |= 1 << (j % 64);
                j += p;
            }
        }
        i += 1;
    }
    1 + (1..=half)
        .filter(|&j| bits[j / 64] & (1 << (j % 64)) == 0)
        .count()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Distinct prime factors by trial division, adequate for q - 1 up to ~10^14.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest primitive root mod an odd prime q. Deterministic, so the DFT
/// character ordering is reproducible.
pub fn primitive_root(q: u64) -> Result<u64> {
    if q < 3 || !is_prime(q) {
        return Err(Error::InvalidInput(format!("{q} is not an odd prime")));
    }
    let factors = distinct_prime_factors(q - 1);
    'cand: for g in 2..q {
        for &p in &factors {
            if mod_pow(g, (q - 1) / p, q) == 1 {
                continue 'cand;
            }
        }
        return Ok(g);
    }
    unreachable!("every odd prime has a primitive root")
}

/// Power and discrete-log tables for the fixed primitive root g mod q.
///
/// `pow[k] = g^k mod q` for k = 0..q-2 and `dlog[a-1] = k` with
/// `g^k = a (mod q)`; the two are inverse permutations of {1,..,q-1}.
/// Characters are indexed by chi_j(g^k) = e^(2*pi*i*j*k/(q-1)).
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub q: u64,
    pub g: u64,
    pub pow: Vec<u32>,
    pub dlog: Vec<u32>,
}

impl CharacterTable {
    pub fn build(q: u64) -> Result<CharacterTable> {
        let g = primitive_root(q)?;
        CharacterTable::build_with_root(q, g)
    }

    /// Build with an explicit primitive root (must have order q-1).
    pub fn build_with_root(q: u64, g: u64) -> Result<CharacterTable> {
        if q < 3 || !is_prime(q) {
            return Err(Error::InvalidInput(format!("{q} is not an odd prime")));
        }
        if q > u32::MAX as u64 {
            return Err(Error::InvalidInput(format!("q = {q} exceeds table range")));
        }
        let n = (q - 1) as usize;
        let mut pow = vec![0u32; n];
        let mut dlog = vec![u32::MAX; n];
        let mut cur = 1u64;
        for (k, slot) in pow.iter_mut().enumerate() {
            *slot = cur as u32;
            if dlog[(cur - 1) as usize] != u32::MAX {
                return Err(Error::InvalidInput(format!(
                    "{g} is not a primitive root mod {q}"
                )));
            }
            dlog[(cur - 1) as usize] = k as u32;
            cur = mod_mul(cur, g, q);
        }
        if cur != 1 {
            return Err(Error::InvalidInput(format!(
                "{g} is not a primitive root mod {q}"
            )));
        }
        Ok(CharacterTable { q, g, pow, dlog })
    }

    pub fn order(&self) -> usize {
        (self.q - 1) as usize
    }

    /// Discrete log of a (mod q), for a not divisible by q.
    pub fn dlog_of(&self, a: u64) -> u32 {
        self.dlog[(a % self.q - 1) as usize]
    }
}

/// Von Mangoldt values Lambda(n) for n <= cutoff.
///
/// Lambda(n) = log p when n is a power of the prime p, else 0.
#[derive(Clone, Debug)]
pub struct LambdaTable {
    pub cutoff: usize,
    pub lambda: Vec<f64>,
}

impl LambdaTable {
    pub fn build(cutoff: usize) -> LambdaTable {
        let mut lambda = vec![0.0f64; cutoff + 1];
        for p in sieve_primes(cutoff) {
            let lp = (p as f64).ln();
            let mut pa = p as u128;
            while pa <= cutoff as u128 {
                lambda[pa as usize] = lp;
                pa *= p as u128;
            }
        }
        LambdaTable { cutoff, lambda }
    }

    pub fn get(&self, n: usize) -> f64 {
        self.lambda[n]
    }

    /// Lambda_k = Lambda convolved with itself k times (Dirichlet), up to
    /// the table cutoff. k = 1 returns a copy of Lambda.
    pub fn lambda_k(&self, k: usize) -> Result<Vec<f64>> {
        if k == 0 {
            return Err(Error::InvalidInput(
                "Lambda_0 is undefined; k must be >= 1".into(),
            ));
        }
        let mut cur = self.lambda.clone();
        for _ in 1..k {
            cur = dirichlet_convolve(&self.lambda, &cur, self.cutoff);
        }
        Ok(cur)
    }
}

/// (a * b)(n) = sum_{d | n} a(d) b(n/d) for n <= cutoff. Skips d with
/// a(d) = 0, which keeps the Lambda convolutions near O(N log N / log N).
pub fn dirichlet_convolve(a: &[f64], b: &[f64], cutoff: usize) -> Vec<f64> {
    let mut out = vec![0.0f64; cutoff + 1];
    for d in 2..=cutoff {
        let ad = a[d];
        if ad == 0.0 {
            continue;
        }
        let mut n = d;
        let mut q = 1usize;
        while n <= cutoff {
            if b[q] != 0.0 {
                out[n] += ad * b[q];
            }
            n += d;
            q += 1;
        }
    }
    out
}

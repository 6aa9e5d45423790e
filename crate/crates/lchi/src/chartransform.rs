//! Character sums as a single DFT: for all characters chi_j mod q at once,
//! sum_a chi_j(a) f(a) = sum_k e^(2*pi*i*jk/(q-1)) f(g^k), a length-(q-1)
//! transform of the data reindexed through the primitive root.

use crate::arith::CharacterTable;
use crate::fft::Plan;
use crate::scalar::{Complex, Real};
use crate::{Error, Result};

/// Character parity: chi(-1) = -1 (odd) or +1 (even). With the indexing
/// chi_j(g^k) = e(jk/(q-1)) and g^((q-1)/2) = -1, chi_j is odd iff j is odd.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    pub fn parse(s: &str) -> Option<Parity> {
        match s {
            "even" => Some(Parity::Even),
            "odd" => Some(Parity::Odd),
            _ => None,
        }
    }
}

/// Parity of chi_j mod q; j = 0 is the (even) principal character.
pub fn parity_of(j: usize, q: u64) -> Result<Parity> {
    if j as u64 > q - 2 {
        return Err(Error::InvalidInput(format!(
            "character index {j} out of range for q = {q}"
        )));
    }
    Ok(if j % 2 == 1 { Parity::Odd } else { Parity::Even })
}

/// All q-1 character sums of one input; entry j is
/// sum_a chi_j(a) f(a), j = 0 being the principal character.
#[derive(Clone, Debug)]
pub struct CharacterSpectrum<T> {
    pub q: u64,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> CharacterSpectrum<T> {
    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// Index of the conjugate character: chi_{q-1-j} = conj(chi_j).
    pub fn conj_index(&self, j: usize) -> usize {
        if j == 0 {
            0
        } else {
            self.values.len() - j
        }
    }
}

/// Reusable transform plan for one modulus.
pub struct CharPlan<T: Real> {
    q: u64,
    plan: Plan<T>,
}

impl<T: Real> CharPlan<T> {
    pub fn new(table: &CharacterTable) -> CharPlan<T> {
        CharPlan {
            q: table.q,
            plan: Plan::new(table.order()),
        }
    }

    /// FFT route, O(n log n).
    pub fn char_sums(&self, table: &CharacterTable, f: &[T]) -> Result<CharacterSpectrum<T>> {
        let reindexed = reindex(table, self.q, f)?;
        let mut data = reindexed;
        self.plan.transform(&mut data);
        Ok(CharacterSpectrum {
            q: self.q,
            values: data,
        })
    }

    pub fn char_sums_complex(
        &self,
        table: &CharacterTable,
        f: &[Complex<T>],
    ) -> Result<CharacterSpectrum<T>> {
        if f.len() != table.order() {
            return Err(Error::InvalidInput(format!(
                "input length {} != q-1 = {}",
                f.len(),
                table.order()
            )));
        }
        check_finite_c(f)?;
        let mut data: Vec<Complex<T>> = table
            .pow
            .iter()
            .map(|&a| f[(a - 1) as usize].clone())
            .collect();
        self.plan.transform(&mut data);
        Ok(CharacterSpectrum {
            q: self.q,
            values: data,
        })
    }
}

fn reindex<T: Real>(table: &CharacterTable, q: u64, f: &[T]) -> Result<Vec<Complex<T>>> {
    if f.len() != table.order() || table.q != q {
        return Err(Error::InvalidInput(format!(
            "input length {} != q-1 = {}",
            f.len(),
            table.order()
        )));
    }
    for v in f {
        if !v.is_finite() {
            return Err(Error::InvalidInput("non-finite entry in input".into()));
        }
    }
    Ok(table
        .pow
        .iter()
        .map(|&a| Complex::from_real(f[(a - 1) as usize].clone()))
        .collect())
}

fn check_finite_c<T: Real>(f: &[Complex<T>]) -> Result<()> {
    for v in f {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::InvalidInput("non-finite entry in input".into()));
        }
    }
    Ok(())
}

/// One-shot FFT character sums; builds a throwaway plan.
pub fn char_sums<T: Real>(table: &CharacterTable, f: &[T]) -> Result<CharacterSpectrum<T>> {
    CharPlan::new(table).char_sums(table, f)
}

const NAIVE_GUARD: u64 = 10_000;

/// Direct O(n^2) double loop over (j, k); the oracle for `char_sums`.
/// Guarded at q <= 10^4; use [`naive_char_sums_unguarded`] to override.
pub fn naive_char_sums<T: Real>(table: &CharacterTable, f: &[T]) -> Result<CharacterSpectrum<T>> {
    if table.q > NAIVE_GUARD {
        return Err(Error::InvalidInput(format!(
            "naive_char_sums guard: q = {} > {NAIVE_GUARD} (quadratic cost); use the unguarded variant",
            table.q
        )));
    }
    naive_char_sums_unguarded(table, f)
}

pub fn naive_char_sums_unguarded<T: Real>(
    table: &CharacterTable,
    f: &[T],
) -> Result<CharacterSpectrum<T>> {
    let data = reindex(table, table.q, f)?;
    let n = data.len();
    let roots: Vec<Complex<T>> = (0..n)
        .map(|r| {
            let t = T::from_u64(r as u64).div(&T::from_u64(n as u64));
            Complex::unit_2pi(&t)
        })
        .collect();
    let mut values = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = Complex::<T>::zero();
        let mut idx = 0usize;
        for x in &data {
            acc = acc.add(&x.mul(&roots[idx]));
            idx += j;
            if idx >= n {
                idx -= n;
            }
        }
        values.push(acc);
    }
    Ok(CharacterSpectrum {
        q: table.q,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_primes;
    use crate::scalar::Dd;
    use crate::special::log_gamma;

    fn pseudo_real(n: usize, seed: u64) -> Vec<Dd> {
        let mut state = seed | 1;
        (0..n)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                Dd::from_f64(((state >> 11) as f64) / (1u64 << 53) as f64 * 6.0 - 3.0)
            })
            .collect()
    }

    #[test]
    fn two_point_transform_by_hand() {
        // q = 3: f = [logG(1/3), logG(2/3)]; the non-principal sum is the
        // difference of the two values
        let t = CharacterTable::build(3).unwrap();
        let f = vec![
            log_gamma(&(Dd::ONE / Dd::from_f64(3.0))).unwrap(),
            log_gamma(&(Dd::from_f64(2.0) / Dd::from_f64(3.0))).unwrap(),
        ];
        let s = char_sums(&t, &f).unwrap();
        let v = &s.values[1];
        assert!(
            v.re.to_decimal(25).starts_with("0.68227037178024350051131"),
            "{}",
            v.re
        );
        assert!(v.im.to_f64().abs() < 1e-30);
    }

    #[test]
    fn orthogonality_rows() {
        // f = 1: spectrum[0] = q-1, others 0
        for q in [7u64, 61] {
            let t = CharacterTable::build(q).unwrap();
            let f = vec![Dd::ONE; t.order()];
            let s = char_sums(&t, &f).unwrap();
            assert!((s.values[0].re.to_f64() - (q - 1) as f64).abs() < 1e-25);
            for v in s.values.iter().skip(1) {
                assert!(v.norm_sqr().to_f64().sqrt() < 1e-25);
            }
        }
        // indicator of a = 1: all sums are 1
        let t = CharacterTable::build(7).unwrap();
        let mut f = vec![Dd::ZERO; 6];
        f[0] = Dd::ONE;
        let s = char_sums(&t, &f).unwrap();
        for v in &s.values {
            assert!((v.re.to_f64() - 1.0).abs() < 1e-28 && v.im.to_f64().abs() < 1e-28);
        }
    }

    #[test]
    fn naive_equals_fft_for_small_primes() {
        for q in sieve_primes(499).into_iter().skip(1) {
            let t = CharacterTable::build(q).unwrap();
            for trial in 0..5u64 {
                let f = pseudo_real(t.order(), q * 1000 + trial);
                let a = char_sums(&t, &f).unwrap();
                let b = naive_char_sums(&t, &f).unwrap();
                let max = b
                    .values
                    .iter()
                    .map(|v| v.norm_sqr().to_f64().sqrt())
                    .fold(0.0f64, f64::max);
                for (x, y) in a.values.iter().zip(&b.values) {
                    let d = x.sub(y).norm_sqr().to_f64().sqrt();
                    let m = y.norm_sqr().to_f64().sqrt();
                    if m > 1e-8 * max {
                        assert!(d / m < 1e-10, "q={q} trial={trial}: rel {d:e}/{m:e}");
                    }
                }
            }
        }
    }

    #[test]
    fn conjugate_symmetry_for_real_input() {
        let t = CharacterTable::build(61).unwrap();
        let f = pseudo_real(60, 99);
        let s = char_sums(&t, &f).unwrap();
        for j in 1..=59usize {
            let c = s.values[s.conj_index(j)].conj();
            let d = s.values[j].sub(&c).norm_sqr().to_f64().sqrt();
            assert!(d < 1e-24, "j={j}: {d:e}");
        }
    }

    #[test]
    fn round_trip_through_inverse() {
        for q in [7u64, 61, 499, 10007] {
            let t = CharacterTable::build(q).unwrap();
            let plan = CharPlan::<Dd>::new(&t);
            for trial in 0..20u64 {
                let f = pseudo_real(t.order(), q + trial * 31);
                let s = plan.char_sums(&t, &f).unwrap();
                // invert the DFT and undo the reindexing
                let mut back = s.values.clone();
                Plan::<Dd>::new(t.order()).inverse(&mut back);
                for (k, &a) in t.pow.iter().enumerate() {
                    let want = &f[(a - 1) as usize];
                    let got = &back[k];
                    let d = (got.re - *want).to_f64().abs() + got.im.to_f64().abs();
                    assert!(
                        d < 1e-12 * (1.0 + want.to_f64().abs()),
                        "q={q} trial={trial} k={k}: {d:e}"
                    );
                }
            }
        }
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity_of(0, 7).unwrap(), Parity::Even);
        assert_eq!(parity_of(3, 7).unwrap(), Parity::Odd);
        assert_eq!(parity_of(6, 13).unwrap(), Parity::Even);
        assert!(parity_of(6, 7).is_err());
    }

    /// chi_j(-1) = (-1)^j: evaluate the sum with f = indicator of a = q-1.
    #[test]
    fn parity_matches_character_value_at_minus_one() {
        let q = 13u64;
        let t = CharacterTable::build(q).unwrap();
        let mut f = vec![Dd::ZERO; t.order()];
        f[(q - 2) as usize] = Dd::ONE; // a = q-1 = -1 mod q
        let s = char_sums(&t, &f).unwrap();
        for (j, v) in s.values.iter().enumerate() {
            let want = if j % 2 == 0 { 1.0 } else { -1.0 };
            assert!((v.re.to_f64() - want).abs() < 1e-25 && v.im.to_f64().abs() < 1e-25);
        }
    }

    #[test]
    fn zero_input_zero_spectrum() {
        let t = CharacterTable::build(11).unwrap();
        let s = naive_char_sums(&t, &vec![Dd::ZERO; 10]).unwrap();
        assert!(s.values.iter().all(|v| v.norm_sqr().to_f64() == 0.0));
    }

    #[test]
    fn guards_and_validation() {
        let t = CharacterTable::build(11).unwrap();
        assert!(char_sums(&t, &vec![Dd::ONE; 9]).is_err());
        assert!(char_sums(&t, &vec![Dd::from_f64(f64::NAN); 10]).is_err());
        // naive guard: build a table past the bound
        let big = CharacterTable::build(10007).unwrap();
        assert!(naive_char_sums(&big, &vec![Dd::ZERO; big.order()]).is_err());
        assert!(naive_char_sums_unguarded(&big, &vec![Dd::ZERO; big.order()]).is_ok());
    }

    /// The opposite exponent sign permutes j <-> q-1-j, leaving the set of
    /// |values| (and any min/max over it) invariant.
    #[test]
    fn exponent_sign_convention_only_permutes() {
        let t = CharacterTable::build(31).unwrap();
        let f = pseudo_real(30, 5);
        let s = char_sums(&t, &f).unwrap();
        // opposite-sign spectrum computed naively
        let n = 30usize;
        let mut opp = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = Complex::<Dd>::zero();
            for (k, &a) in t.pow.iter().enumerate() {
                let tt = Dd::from_f64(((j * k) % n) as f64) / Dd::from_f64(n as f64);
                let w = Complex::unit_2pi(&tt).conj();
                acc = acc.add(&Complex::from_real(f[(a - 1) as usize]).mul(&w));
            }
            opp.push(acc);
        }
        for j in 1..n {
            let d = opp[j].sub(&s.values[n - j]).norm_sqr().to_f64().sqrt();
            assert!(d < 1e-24, "j={j}: {d:e}");
        }
    }
}

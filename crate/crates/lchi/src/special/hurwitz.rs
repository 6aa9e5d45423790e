//! Second s-derivative of the Hurwitz zeta function at s = 0, evaluated by
//! Euler-Maclaurin summation with order-2 truncated Taylor (jet)
//! coefficients in s. Exact differentiation, no step-size error.
//!
//! This is the independent oracle backing `zeta_dd0` and the spot checks
//! of the Deninger S series: it shares no code path with either.

use crate::scalar::{bernoulli, Jet, Real};

const N_TERMS: usize = 80;
const EM_ORDER: usize = 18;

/// d^2/ds^2 zeta(s, x) at s = 0, for 0 < x <= 1. At x = 1 this is zeta''(0).
pub fn zeta_sdd_at_zero<T: Real>(x: &T) -> T {
    // zeta(s,x) = sum_{n<N} (n+x)^-s + (N+x)^{1-s}/(s-1) + (N+x)^-s / 2
    //           + sum_k B_2k/(2k)! (s)_{2k-1} (N+x)^{-s-2k+1} + R
    let mut acc = Jet {
        c0: T::zero(),
        c1: T::zero(),
        c2: T::zero(),
    };
    for n in 0..N_TERMS {
        let l = x.add_f64(n as f64).ln();
        acc = acc.add(&Jet::exp_linear(&l.neg()));
    }
    let nx = x.add_f64(N_TERMS as f64);
    let ln_nx = nx.ln();
    let e = Jet::exp_linear(&ln_nx.neg()); // (N+x)^{-s}
    // (N+x)^{1-s}/(s-1)
    let s_minus_1 = Jet {
        c0: T::one().neg(),
        c1: T::one(),
        c2: T::zero(),
    };
    acc = acc.add(&e.scale(&nx).div(&s_minus_1));
    // (N+x)^{-s}/2
    acc = acc.add(&e.scale(&T::from_ratio(1, 2)));
    // Bernoulli corrections
    let mut inv_pow = T::one().div(&nx); // (N+x)^{-(2k-1)} running
    let inv_sq = inv_pow.mul(&inv_pow);
    for k in 1..=EM_ORDER {
        // (s)_{2k-1} = s (s+1) ... (s+2k-2)
        let mut poch = Jet {
            c0: T::zero(),
            c1: T::one(),
            c2: T::zero(),
        };
        for i in 1..=(2 * k - 2) {
            let lin = Jet {
                c0: T::from_f64(i as f64),
                c1: T::one(),
                c2: T::zero(),
            };
            poch = poch.mul(&lin);
        }
        let coeff = bernoulli::b2k_over_fact::<T>(k).mul(&inv_pow);
        acc = acc.add(&e.mul(&poch).scale(&coeff));
        inv_pow = inv_pow.mul(&inv_sq);
    }
    acc.c2.mul_f64(2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Dd, Qf};

    #[test]
    fn zeta_dd0_reference() {
        // zeta''(0) = -2.006356455908584851210100026729960438...
        let v: Dd = zeta_sdd_at_zero(&Dd::ONE);
        assert!(
            (v.to_f64() + 2.0063564559085848512101).abs() < 1e-15,
            "{v}"
        );
        let s = v.to_decimal(28);
        assert!(s.starts_with("-2.00635645590858485121010002"), "{s}");

        let vq: Qf = zeta_sdd_at_zero(&Qf::one());
        let sq = vq.to_decimal(34);
        assert!(sq.starts_with("-2.00635645590858485121010002672996"), "{sq}");
    }

    #[test]
    fn half_argument_reference() {
        // zeta''(0, 1/2) = -(ln 2)^2/2 - ln2 * ln(2 pi), from
        // zeta(s, 1/2) = (2^s - 1) zeta(s).
        let x = Dd::from_f64(0.5);
        let v = zeta_sdd_at_zero(&x);
        let ln2 = Dd::from_f64(2.0).ln();
        let ln2pi = (Dd::TWO_PI * Dd::PI / Dd::PI).ln(); // 2*pi
        let want = -(ln2.sqr().mul_f64(0.5)) - ln2 * ln2pi;
        assert!((v - want).to_f64().abs() < 1e-28, "{} vs {}", v, want);
    }
}

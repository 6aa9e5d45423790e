//! Exact Bernoulli numbers B_2..B_40 as integer ratios, for the
//! Euler-Maclaurin corrections and the Stirling series.

use super::Real;

/// (numerator, denominator) of B_{2k} for k = 1..=20.
pub const B2K: [(i128, i128); 20] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
    (-23749461029, 870),
    (8615841276005, 14322),
    (-7709321041217, 510),
    (2577687858367, 6),
    (-26315271553053477373, 1919190),
    (2929993913841559, 6),
    (-261082718496449122051, 13530),
];

/// B_{2k} in the working precision, k = 1..=20.
pub fn b2k<T: Real>(k: usize) -> T {
    let (n, d) = B2K[k - 1];
    T::from_ratio(n, d)
}

/// B_{2k}/(2k)! in the working precision.
pub fn b2k_over_fact<T: Real>(k: usize) -> T {
    let mut f = T::one();
    for i in 2..=(2 * k) {
        f = f.mul_f64(i as f64);
    }
    b2k::<T>(k).div(&f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Dd;

    #[test]
    fn values_match_f64() {
        assert!((b2k::<Dd>(1).to_f64() - 1.0 / 6.0).abs() < 1e-18);
        assert!((b2k::<Dd>(6).to_f64() + 691.0 / 2730.0).abs() < 1e-16);
        assert!((b2k::<Dd>(20).to_f64() + 261082718496449122051.0 / 13530.0).abs() < 1e4);
    }
}

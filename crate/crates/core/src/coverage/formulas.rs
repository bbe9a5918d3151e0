//! Closed-form expectations, generic over the number type.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::scalar::Scalar;

/// `H_m = 1 + 1/2 + ... + 1/m`, with `H_0 = 0`.
pub fn harmonic<S: Scalar>(m: u64) -> S {
    (1..=m).fold(S::zero(), |acc, i| acc + S::one() / S::from_u64(i))
}

/// The MDS lower bound `n (H_n - H_{n-k}) = sum_{i<k} n / (n - i)`.
pub fn mds_bound<S: Scalar>(n: u64, k: u64) -> S {
    assert!(k <= n, "mds_bound needs k <= n");
    let nn = S::from_u64(n);
    (0..k).fold(S::zero(), |acc, i| acc + nn.clone() / S::from_u64(n - i))
}

/// Expected draws for the q-ary simplex code of dimension `k`:
/// `k + sum_{i=1}^{k} (q^{i-1} - 1) / (q^k - q^{i-1})`.
pub fn simplex<S: Scalar>(q: u64, k: u32) -> S {
    let q = BigUint::from(q);
    let qk = q.pow(k);
    let mut acc = S::from_u64(k as u64);
    let mut qi = BigUint::one(); // q^{i-1}
    for _ in 1..=k {
        let num = &qi - 1u32;
        if !num.is_zero() {
            acc = acc + S::from_biguint(&num) / S::from_biguint(&(&qk - &qi));
        }
        qi *= &q;
    }
    acc
}

/// Number of `l`-subsets of simplex columns (dimension `r`) that are
/// linearly independent: `prod_{i<l} (q^r - q^i)/(q - 1) / l!`.
pub fn independent_projective_subsets(q: u64, r: u32, l: u32) -> BigUint {
    let qb = BigUint::from(q);
    let qr = qb.pow(r);
    let mut prod = BigUint::one();
    let mut fact = BigUint::one();
    for i in 0..l {
        prod *= (&qr - qb.pow(i)) / (q - 1);
        fact *= i + 1;
    }
    prod / fact
}

/// `(q^r - 1)/(q - 1)`, the length of simplex and Hamming codes.
pub fn projective_length(q: u64, r: u32) -> BigUint {
    (BigUint::from(q).pow(r) - 1u32) / (q - 1)
}

/// Expected draws for the q-ary Hamming code of redundancy `r`:
/// `n H_n - sum_{l=1}^{r} [prod_{i<l} (q^r - q^i)/(q-1) / l!] / C(n-1, n-l)`.
pub fn hamming<S: Scalar>(q: u64, r: u32) -> S {
    let n = projective_length(q, r)
        .to_u64()
        .expect("Hamming length fits in u64");
    let nn = S::from_u64(n);
    nn * harmonic::<S>(n) - hamming_correction::<S>(q, r, n)
}

/// `E[C] - n(H_n - H_r)` for the Hamming code, which avoids `H_n`:
/// `n H_r - sum_l beta_l / C(n-1, n-l)`.
pub fn hamming_gap<S: Scalar>(q: u64, r: u32) -> S {
    let n = projective_length(q, r)
        .to_u64()
        .expect("Hamming length fits in u64");
    S::from_u64(n) * harmonic::<S>(r as u64) - hamming_correction::<S>(q, r, n)
}

fn hamming_correction<S: Scalar>(q: u64, r: u32, n: u64) -> S {
    let mut acc = S::zero();
    // C(n-1, n-l) = C(n-1, l-1)
    let mut binom = BigUint::one();
    for l in 1..=r {
        if l > 1 {
            binom = binom * (n - l as u64 + 1) / (l - 1);
        }
        let count = independent_projective_subsets(q, r, l);
        acc = acc + S::from_biguint(&count) / S::from_biguint(&binom);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic::<BigRational>(0), r(0, 1));
        assert_eq!(harmonic::<BigRational>(1), r(1, 1));
        assert_eq!(harmonic::<BigRational>(3), r(11, 6));
        assert_eq!(harmonic::<BigRational>(7), r(363, 140));
        assert!((harmonic::<f64>(7) - 363.0 / 140.0).abs() < 1e-12);
    }

    #[test]
    fn mds_bound_matches_harmonic_form() {
        for n in 1..20u64 {
            for k in 1..=n {
                let via_h = BigRational::from_integer(n.into())
                    * (harmonic::<BigRational>(n) - harmonic::<BigRational>(n - k));
                assert_eq!(mds_bound::<BigRational>(n, k), via_h);
            }
        }
        assert_eq!(mds_bound::<BigRational>(7, 3), r(107, 30));
    }

    #[test]
    fn simplex_values() {
        assert_eq!(simplex::<BigRational>(2, 3), r(47, 12));
        assert!((simplex::<f64>(2, 3) - 47.0 / 12.0).abs() < 1e-14);
        assert!((simplex::<f32>(2, 3) - 47.0 / 12.0).abs() < 1e-5);
    }

    #[test]
    fn hamming_values() {
        assert_eq!(hamming::<BigRational>(2, 2), r(1, 1));
        assert_eq!(hamming::<BigRational>(2, 3), r(347, 60));
        assert_eq!(hamming_gap::<BigRational>(2, 3), r(7, 15));
        for (q, rr) in [(2, 3), (3, 2), (4, 3), (2, 5)] {
            let n = projective_length(q, rr).to_u64().unwrap();
            assert_eq!(
                hamming::<BigRational>(q, rr) - mds_bound::<BigRational>(n, n - rr as u64),
                hamming_gap::<BigRational>(q, rr)
            );
        }
    }

    #[test]
    fn independent_subsets_of_simplex() {
        // [7,3]_2 simplex: 7 single columns, 21 pairs, 28 independent triples
        assert_eq!(independent_projective_subsets(2, 3, 1), BigUint::from(7u32));
        assert_eq!(independent_projective_subsets(2, 3, 2), BigUint::from(21u32));
        assert_eq!(independent_projective_subsets(2, 3, 3), BigUint::from(28u32));
    }
}

//! Elementary multiplicative number theory: factorization, divisors, the
//! Moebius function, the `phi_l` Euler-product factors, and the Moebius
//! transform of polynomials over divisors.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::exact::Rational;
use crate::series::PolyQ;
use crate::Error;

/// Prime factorization as `(prime, exponent)` pairs with primes strictly
/// increasing. The empty list factors 1.
pub type Factorization = Vec<(u64, u32)>;

/// Deterministic Miller-Rabin, valid for the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let pow_mod = |base: u64, mut exp: u64| -> u64 {
        let mut acc: u128 = 1;
        let mut b = base as u128 % n as u128;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % n as u128;
            }
            b = b * b % n as u128;
            exp >>= 1;
        }
        acc as u64
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Complete prime factorization by trial division; desk-scale inputs only.
pub fn factorize(f: u64) -> Factorization {
    assert!(f >= 1, "factorize needs f >= 1");
    let mut n = f;
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        debug_assert!(is_prime(p), "non-prime factor {p}");
        out.push((p, e));
    };
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            push(p, e);
        }
    }
    // wheel over 6k +- 1
    let mut d = 7u64;
    let mut step = 4u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            push(d, e);
        }
        d += step;
        step = 6 - step;
    }
    if n > 1 {
        push(n, 1);
    }
    out
}

/// All divisors of `f`, ascending.
pub fn divisors(f: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(f) {
        let prev = out.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            out.extend(prev.iter().map(|d| d * pe));
        }
    }
    out.sort_unstable();
    out
}

/// Moebius function.
pub fn moebius(n: u64) -> i32 {
    assert!(n >= 1);
    let fac = factorize(n);
    if fac.iter().any(|&(_, e)| e > 1) {
        return 0;
    }
    if fac.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler's totient.
pub fn euler_phi(f: u64) -> u64 {
    factorize(f)
        .into_iter()
        .map(|(p, e)| p.pow(e - 1) * (p - 1))
        .product()
}

/// The Euler-product factor `phi_l(f) = prod_{p | f} (1 - p^(-l))`.
/// Note this is not the totient; `phi_1(f) = phi(f)/f`.
pub fn phi_l(f: u64, l: u32) -> Rational {
    assert!(f >= 1 && l >= 1);
    let mut acc = Rational::one();
    for (p, _) in factorize(f) {
        let pl = BigInt::from(p).pow(l);
        acc *= Rational::new(&pl - BigInt::one(), pl);
    }
    acc
}

/// `sum_{d | f, d > 1} mu(f/d) R(d)` for a polynomial with `R(1) = 0`.
///
/// Computed twice — by direct divisor enumeration and as
/// `sum_l r_l phi_l(f) f^l` over the coefficients of `R` — and the two
/// routes must agree exactly.
pub fn moebius_transform(r: &PolyQ, f: u64) -> Result<Rational, Error> {
    if f <= 2 {
        return Err(Error::ModulusTooSmall(f));
    }
    if !r.eval(&Rational::one()).is_zero() {
        return Err(Error::InvalidArgument(
            "moebius_transform requires R(1) = 0".into(),
        ));
    }

    let mut direct = Rational::zero();
    for d in divisors(f) {
        if d > 1 {
            let mu = moebius(f / d);
            if mu != 0 {
                direct += r.eval_u64(d) * Rational::from_integer(mu.into());
            }
        }
    }

    let mut closed = Rational::zero();
    for (l, c) in r.coeffs().iter().enumerate().skip(1) {
        if !c.is_zero() {
            let fl = Rational::from_integer(BigInt::from(f).pow(l as u32));
            closed += c * phi_l(f, l as u32) * fl;
        }
    }

    assert_eq!(direct, closed, "Moebius transform routes disagree");
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use num_integer::Integer;
    use proptest::prelude::*;

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(factorize(2u64.pow(10) * 3 * 49), vec![(2, 10), (3, 1), (7, 2)]);
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(97));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1));
        assert!(!is_prime(561)); // Carmichael
        assert!(!is_prime(1_000_000_006));
    }

    #[test]
    fn moebius_small() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(12), 0);
        assert_eq!(moebius(30), -1);
    }

    #[test]
    fn moebius_divisor_sum_vanishes() {
        for f in 2..=10_000u64 {
            let s: i32 = divisors(f).into_iter().map(moebius).sum();
            assert_eq!(s, 0, "sum mu(d) over d | {f}");
        }
    }

    #[test]
    fn phi_l_values() {
        assert_eq!(phi_l(3, 2), rat(8, 9));
        assert_eq!(phi_l(12, 1), rat(1, 3));
        assert_eq!(phi_l(1, 4), rat(1, 1));
    }

    #[test]
    fn phi_l_divisor_sum_identity() {
        // f^l phi_l(f) = sum_{d | f} mu(f/d) d^l
        for f in 1..=200u64 {
            for l in 1..=6u32 {
                let lhs = Rational::from_integer(BigInt::from(f).pow(l)) * phi_l(f, l);
                let mut rhs = Rational::zero();
                for d in divisors(f) {
                    rhs += Rational::from_integer(
                        BigInt::from(moebius(f / d)) * BigInt::from(d).pow(l),
                    );
                }
                assert_eq!(lhs, rhs, "f = {f}, l = {l}");
            }
        }
    }

    #[test]
    fn moebius_transform_hand_examples() {
        // R = X - 1, f = 6: mu(3)*0... direct sum = 2; phi_1(6)*6 = 2
        let r = PolyQ::from_coeffs(vec![rat(-1, 1), rat(1, 1)]);
        assert_eq!(moebius_transform(&r, 6).unwrap(), rat(2, 1));

        // R = X^2 - 1, f = 4: 12
        let r = PolyQ::from_coeffs(vec![rat(-1, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(moebius_transform(&r, 4).unwrap(), rat(12, 1));
    }

    #[test]
    fn moebius_transform_rejects_bad_input() {
        let r = PolyQ::from_coeffs(vec![rat(1, 1)]);
        assert!(matches!(
            moebius_transform(&r, 6),
            Err(Error::InvalidArgument(_))
        ));
        let ok = PolyQ::from_coeffs(vec![rat(-1, 1), rat(1, 1)]);
        assert_eq!(moebius_transform(&ok, 2), Err(Error::ModulusTooSmall(2)));
    }

    proptest! {
        #[test]
        fn phi_l_multiplicative(a in 1u64..400, b in 1u64..400, l in 1u32..5) {
            prop_assume!(a.gcd(&b) == 1);
            prop_assert_eq!(phi_l(a * b, l), phi_l(a, l) * phi_l(b, l));
        }

        /// Both evaluation routes inside moebius_transform must agree; the
        /// function asserts that internally, so this exercises random inputs.
        #[test]
        fn moebius_transform_routes_agree(
            f in 3u64..2000,
            coeffs in proptest::collection::vec((-30i64..30, 1i64..12), 1..6),
        ) {
            // build R with R(1) = 0 by subtracting the value at 1
            let mut p = PolyQ::from_coeffs(
                coeffs.iter().map(|&(n, d)| rat(n, d)).collect(),
            );
            let at_one = p.eval(&Rational::one());
            p = &p - &PolyQ::constant(at_one);
            moebius_transform(&p, f).unwrap();
        }
    }
}

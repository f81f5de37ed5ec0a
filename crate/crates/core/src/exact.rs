//! Arbitrary-precision rational arithmetic and the Bernoulli and
//! combinatorial constants every formula consumes.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// The ambient exact scalar: arbitrary-precision signed rational, always in
/// lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Rational from a small integer pair.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Binomial coefficient `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        // exact at every step: i+1 consecutive integers contain an (i+1)-multiple
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

static BERNOULLI_CACHE: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// The Bernoulli number `B_k` from the generating function `t/(e^t - 1)`,
/// so `B_1 = -1/2`. Values are memoized in a process-wide table; concurrent
/// callers serialize on the fill.
pub fn bernoulli(k: u32) -> Rational {
    let mut cache = BERNOULLI_CACHE.lock().unwrap();
    if cache.is_empty() {
        cache.push(Rational::one());
    }
    while cache.len() <= k as usize {
        // sum_{j=0}^{n} C(n+1, j) B_j = 0 for n >= 1
        let n = cache.len() as u64;
        let mut acc = Rational::zero();
        for (j, b) in cache.iter().enumerate() {
            if !b.is_zero() {
                acc += Rational::from_integer(binomial(n + 1, j as i64)) * b;
            }
        }
        let next = -acc / Rational::from_integer(BigInt::from(n + 1));
        cache.push(next);
    }
    cache[k as usize].clone()
}

/// The rational `q` with `zeta(2m) = q * pi^(2m)`, i.e.
/// `q = (-1)^(m-1) * 2^(2m) * B_(2m) / (2 * (2m)!)`.
pub fn zeta_even_rational(m: u32) -> Rational {
    assert!(m >= 1, "zeta_even_rational needs m >= 1");
    let mut num = BigInt::one() << (2 * m as usize);
    if m % 2 == 0 {
        num = -num;
    }
    let den = BigInt::from(2) * factorial(2 * m as u64);
    Rational::new(num, den) * bernoulli(2 * m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn bernoulli_odd_vanish() {
        for k in (3..=41).step_by(2) {
            assert!(bernoulli(k).is_zero(), "B_{k} should vanish");
        }
    }

    #[test]
    fn bernoulli_even_sign_alternates() {
        for m in 1..=30u32 {
            let b = bernoulli(2 * m);
            let expect_positive = m % 2 == 1;
            assert_eq!(b.is_positive(), expect_positive, "sign of B_{}", 2 * m);
        }
    }

    /// von Staudt–Clausen: B_2m + sum over primes p with (p-1) | 2m of 1/p
    /// is an integer. Independent of the defining recurrence.
    #[test]
    fn bernoulli_von_staudt_clausen() {
        for m in 1..=30u32 {
            let k = 2 * m;
            let mut s = bernoulli(k);
            for p in 2..=(k as u64 + 1) {
                let is_prime = (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
                if is_prime && k as u64 % (p - 1) == 0 {
                    s += rat(1, p as i64);
                }
            }
            assert!(s.is_integer(), "von Staudt-Clausen fails at k = {k}");
        }
    }

    #[test]
    fn bernoulli_cache_is_thread_safe() {
        let handles: Vec<_> = (0..8)
            .map(|t| {
                std::thread::spawn(move || {
                    for k in 0..60u32 {
                        let _ = bernoulli((k + t) % 60);
                    }
                    bernoulli(12)
                })
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), rat(-691, 2730));
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(5, 7), BigInt::zero());
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn zeta_even_rational_values() {
        assert_eq!(zeta_even_rational(1), rat(1, 6));
        assert_eq!(zeta_even_rational(2), rat(1, 90));
        assert_eq!(zeta_even_rational(3), rat(1, 945));
        assert_eq!(zeta_even_rational(4), rat(1, 9450));
        assert_eq!(zeta_even_rational(5), rat(1, 93555));
    }

    #[test]
    fn zeta_even_rational_positive() {
        for m in 1..=40 {
            assert!(zeta_even_rational(m).is_positive(), "zeta(2*{m})");
        }
    }

    proptest! {
        #[test]
        fn binomial_pascal(n in 1u64..60, k in 0i64..60) {
            prop_assert_eq!(
                binomial(n, k),
                binomial(n - 1, k - 1) + binomial(n - 1, k)
            );
        }

        /// Random arithmetic keeps rationals reduced with positive denominator.
        #[test]
        fn rational_normalization(ops in proptest::collection::vec((0u8..4, -40i64..40, 1i64..40), 1..30)) {
            use num_integer::Integer;
            let mut acc = rat(1, 3);
            for (op, a, b) in ops {
                let x = rat(a, b);
                acc = match op {
                    0 => acc + &x,
                    1 => acc - &x,
                    2 => acc * &x,
                    _ if !x.is_zero() => acc / &x,
                    _ => acc,
                };
            }
            prop_assert!(acc.denom().is_positive());
            prop_assert!(acc.numer().gcd(acc.denom()).is_one() || acc.numer().is_zero());
        }
    }
}

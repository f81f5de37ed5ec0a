//! Arbitrary-precision real and complex plumbing shared by the numerical
//! oracle and the numeric evaluation of formulas.
//!
//! Every operation carries an explicit bit precision; [`RealCtx`] adds
//! [`GUARD_BITS`] of working headroom on top of the precision requested by
//! the caller, so comparisons at the stated tolerances are never dominated
//! by rounding of the final few bits.

pub use astro_float::BigFloat;

use astro_float::{Consts, RoundingMode, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::exact::Rational;

/// Rounding mode used throughout.
pub const RM: RoundingMode = RoundingMode::ToEven;

/// Extra working bits on top of any requested precision. Cotangent
/// derivatives reach magnitudes around 2^80 on the supported input ranges,
/// so the guard must absorb that much cancellation against absolute
/// tolerances of the form 2^-(precision - 16).
pub const GUARD_BITS: usize = 128;

/// Working context: target precision plus the shared constants cache.
pub struct RealCtx {
    p: usize,
    cc: Consts,
}

impl RealCtx {
    pub fn new(precision_bits: u32) -> Self {
        RealCtx {
            p: precision_bits as usize + GUARD_BITS,
            cc: Consts::new().expect("constants cache allocation"),
        }
    }

    /// Working precision in bits (requested precision plus guard).
    pub fn precision(&self) -> usize {
        self.p
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }

    pub fn sin(&mut self, x: &BigFloat) -> BigFloat {
        x.sin(self.p, RM, &mut self.cc)
    }

    pub fn cos(&mut self, x: &BigFloat) -> BigFloat {
        x.cos(self.p, RM, &mut self.cc)
    }

    /// `cot(x) = cos(x)/sin(x)`; `None` at a pole of the cotangent.
    pub fn cot(&mut self, x: &BigFloat) -> Option<BigFloat> {
        let s = self.sin(x);
        if s.is_zero() {
            return None;
        }
        Some(self.cos(x).div(&s, self.p, RM))
    }

    /// `cot(pi * num / den)` for `0 < num < den`.
    pub fn cot_pi_frac(&mut self, num: u64, den: u64) -> BigFloat {
        assert!(num > 0 && num < den, "cot(pi*{num}/{den}) is at a pole");
        let angle = self
            .pi()
            .mul(&BigFloat::from_u64(num, self.p), self.p, RM)
            .div(&BigFloat::from_u64(den, self.p), self.p, RM);
        self.cot(&angle).expect("pole excluded by argument range")
    }

    /// `exp(2 pi i * num / den)` as a complex value.
    pub fn unit_root(&mut self, num: u64, den: u64) -> BigComplex {
        let angle = self
            .pi()
            .mul(&BigFloat::from_u64(2 * num, self.p), self.p, RM)
            .div(&BigFloat::from_u64(den, self.p), self.p, RM);
        BigComplex {
            re: self.cos(&angle),
            im: self.sin(&angle),
        }
    }
}

/// `2^k`, exact.
pub fn pow2(k: i32, p: usize) -> BigFloat {
    let mut x = BigFloat::from_word(1, p);
    x.set_exponent(k + 1);
    x
}

/// `a < b`; false if either is NaN.
pub fn lt(a: &BigFloat, b: &BigFloat) -> bool {
    a.cmp(b).is_some_and(|c| c < 0)
}

/// `a <= b`; false if either is NaN.
pub fn le(a: &BigFloat, b: &BigFloat) -> bool {
    a.cmp(b).is_some_and(|c| c <= 0)
}

/// Numeric equality (independent of stored precision).
pub fn eq_value(a: &BigFloat, b: &BigFloat) -> bool {
    a.cmp(b).is_some_and(|c| c == 0)
}

/// Exact conversion; the result carries enough precision for every bit of
/// the integer regardless of `p`.
pub fn bigint_to_float(v: &BigInt, p: usize) -> BigFloat {
    if v.is_zero() {
        return BigFloat::new(p);
    }
    let digits = v.magnitude().to_u64_digits();
    let work = p.max(digits.len() * 64 + WORD_BIT_SIZE);
    let shift = pow2(64, work);
    let mut acc = BigFloat::new(work);
    for d in digits.iter().rev() {
        acc = acc.mul(&shift, work, RM);
        acc = acc.add(&BigFloat::from_u64(*d, work), work, RM);
    }
    if v.sign() == Sign::Minus {
        acc = acc.neg();
    }
    acc
}

/// Correctly rounded conversion of a rational to precision `p`.
pub fn rat_to_float(r: &Rational, p: usize) -> BigFloat {
    let num = bigint_to_float(r.numer(), p);
    let den = bigint_to_float(r.denom(), p);
    num.div(&den, p, RM)
}

/// Compare `m * 2^a` with `10^k` (`m > 0`).
fn cmp_scaled_pow10(m: &BigUint, a: i64, k: i64) -> std::cmp::Ordering {
    let mut lhs = m.clone();
    let mut rhs = BigUint::one();
    if a >= 0 {
        lhs <<= a as usize;
    } else {
        rhs <<= (-a) as usize;
    }
    if k >= 0 {
        rhs *= BigUint::from(10u32).pow(k as u32);
    } else {
        lhs *= BigUint::from(10u32).pow((-k) as u32);
    }
    lhs.cmp(&rhs)
}

/// Render a finite value in scientific notation with exactly `digits`
/// significant decimal digits, round-to-nearest (ties to even). The
/// conversion is exact integer arithmetic on the raw mantissa, so identical
/// inputs always render to identical strings.
pub fn render_decimal(x: &BigFloat, digits: usize) -> String {
    assert!(digits >= 1);
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_inf() {
        return if x.is_inf_pos() { "inf" } else { "-inf" }.into();
    }
    if x.is_zero() {
        return "0".into();
    }
    let (words, _, sign, e, _) = x.as_raw_parts().expect("finite value");
    let mut mant = BigUint::zero();
    for w in words.iter().rev() {
        mant = (mant << WORD_BIT_SIZE) | BigUint::from(*w);
    }
    // |x| = mant * 2^(e - w_bits)
    let a = e as i64 - (words.len() * WORD_BIT_SIZE) as i64;

    // decimal exponent: largest e10 with 10^e10 <= |x|
    let mut e10 = ((e as f64 - 0.5) * std::f64::consts::LOG10_2).floor() as i64;
    while cmp_scaled_pow10(&mant, a, e10) == std::cmp::Ordering::Less {
        e10 -= 1;
    }
    while cmp_scaled_pow10(&mant, a, e10 + 1) != std::cmp::Ordering::Less {
        e10 += 1;
    }

    // N = round(|x| * 10^(digits - 1 - e10)), an integer in [10^(d-1), 10^d]
    let t = digits as i64 - 1 - e10;
    let mut num = mant;
    let mut den = BigUint::one();
    if a >= 0 {
        num <<= a as usize;
    } else {
        den <<= (-a) as usize;
    }
    if t >= 0 {
        num *= BigUint::from(10u32).pow(t as u32);
    } else {
        den *= BigUint::from(10u32).pow((-t) as u32);
    }
    let (mut q, r) = num_integer::Integer::div_rem(&num, &den);
    let twice: BigUint = &r << 1;
    match twice.cmp(&den) {
        std::cmp::Ordering::Greater => q += 1u32,
        std::cmp::Ordering::Equal => {
            if num_integer::Integer::is_odd(&q) {
                q += 1u32;
            }
        }
        std::cmp::Ordering::Less => {}
    }
    let cap = BigUint::from(10u32).pow(digits as u32);
    if q == cap {
        q /= 10u32;
        e10 += 1;
    }

    let s = q.to_string();
    debug_assert_eq!(s.len(), digits);
    let sign_str = if sign.is_negative() { "-" } else { "" };
    if digits == 1 {
        format!("{sign_str}{s}e{e10}")
    } else {
        format!("{sign_str}{}.{}e{e10}", &s[..1], &s[1..])
    }
}

/// Complex value as a pair of arbitrary-precision reals.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn zero(p: usize) -> Self {
        BigComplex {
            re: BigFloat::new(p),
            im: BigFloat::new(p),
        }
    }

    pub fn from_real(re: BigFloat, p: usize) -> Self {
        BigComplex {
            re,
            im: BigFloat::new(p),
        }
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, rhs: &Self, p: usize) -> Self {
        BigComplex {
            re: self.re.add(&rhs.re, p, RM),
            im: self.im.add(&rhs.im, p, RM),
        }
    }

    pub fn sub(&self, rhs: &Self, p: usize) -> Self {
        BigComplex {
            re: self.re.sub(&rhs.re, p, RM),
            im: self.im.sub(&rhs.im, p, RM),
        }
    }

    pub fn mul(&self, rhs: &Self, p: usize) -> Self {
        BigComplex {
            re: self
                .re
                .mul(&rhs.re, p, RM)
                .sub(&self.im.mul(&rhs.im, p, RM), p, RM),
            im: self
                .re
                .mul(&rhs.im, p, RM)
                .add(&self.im.mul(&rhs.re, p, RM), p, RM),
        }
    }

    pub fn scale(&self, s: &BigFloat, p: usize) -> Self {
        BigComplex {
            re: self.re.mul(s, p, RM),
            im: self.im.mul(s, p, RM),
        }
    }

    pub fn abs(&self, p: usize) -> BigFloat {
        self.re
            .mul(&self.re, p, RM)
            .add(&self.im.mul(&self.im, p, RM), p, RM)
            .sqrt(p, RM)
    }

    /// `|self - rhs|`.
    pub fn dist(&self, rhs: &Self, p: usize) -> BigFloat {
        self.sub(rhs, p).abs(p)
    }
}

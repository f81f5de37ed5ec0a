//! Truncated formal power series in `z^2` with polynomial coefficients in a
//! parameter `X`, and the residue-by-series-coefficient pipeline that turns
//! cotangent expansions into the interpolation polynomials driving every
//! mean-value formula.
//!
//! All series here are even in `z`, so entry `j` of a [`SeriesPQ`] is the
//! coefficient of `z^(2j)`.

mod poly;

pub use poly::PolyQ;

use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{bernoulli, factorial, rat, Rational};
use crate::Error;

/// Truncated power series in `z^2` whose coefficients are polynomials in `X`.
/// Exact through `z^(2 * truncation_order)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPQ {
    coeffs: Vec<PolyQ>,
}

impl SeriesPQ {
    pub fn from_coeffs(coeffs: Vec<PolyQ>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the z^0 entry");
        SeriesPQ { coeffs }
    }

    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![PolyQ::zero(); order + 1];
        coeffs[0] = PolyQ::constant(Rational::one());
        SeriesPQ { coeffs }
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^(2j)`.
    pub fn coeff(&self, j: usize) -> &PolyQ {
        &self.coeffs[j]
    }
}

/// Cauchy product truncated to the smaller of the two orders.
pub fn series_mul(a: &SeriesPQ, b: &SeriesPQ) -> SeriesPQ {
    let order = a.truncation_order().min(b.truncation_order());
    let coeffs = (0..=order)
        .map(|k| {
            let mut acc = PolyQ::zero();
            for i in 0..=k {
                let term = a.coeff(i) * b.coeff(k - i);
                if !term.is_zero() {
                    acc = &acc + &term;
                }
            }
            acc
        })
        .collect();
    SeriesPQ::from_coeffs(coeffs)
}

impl Mul for &SeriesPQ {
    type Output = SeriesPQ;
    fn mul(self, rhs: &SeriesPQ) -> SeriesPQ {
        series_mul(self, rhs)
    }
}

/// `(-1)^j * 2^(2j) * B_(2j) / (2j)!` — the `z^(2j)` coefficient of `z*cot(z)`.
fn cot_expansion_coeff(j: usize) -> Rational {
    let mut c = Rational::new(BigInt::one() << (2 * j), factorial(2 * j as u64))
        * bernoulli(2 * j as u32);
    if j % 2 == 1 {
        c = -c;
    }
    c
}

/// Expansion of `z*cot(z)`; entry `j` is the constant polynomial
/// `(-1)^j 2^(2j) B_(2j) / (2j)!`.
pub fn cot_core_series(order: usize) -> SeriesPQ {
    let coeffs = (0..=order)
        .map(|j| PolyQ::constant(cot_expansion_coeff(j)))
        .collect();
    SeriesPQ::from_coeffs(coeffs)
}

/// Expansion of `X*z*cot(X*z)` with `X` kept symbolic: entry `j` carries the
/// monomial factor `X^(2j)`.
pub fn scaled_cot_core_series(order: usize) -> SeriesPQ {
    let coeffs = (0..=order)
        .map(|j| PolyQ::monomial(cot_expansion_coeff(j), 2 * j))
        .collect();
    SeriesPQ::from_coeffs(coeffs)
}

/// Expansion of `z^m * cot^(m-1)(z)`: entry 0 is `(-1)^(m-1) (m-1)!`, entry
/// `j` with `2j >= m` is `(-1)^j 2^(2j) B_(2j) / (2j * (2j-m)!)`, and entries
/// with `0 < 2j < m` vanish.
pub fn cot_derivative_series(m: u32, order: usize) -> SeriesPQ {
    assert!(m >= 1, "derivative index m must be positive");
    let coeffs = (0..=order)
        .map(|j| {
            if j == 0 {
                let mut c = Rational::from_integer(factorial(m as u64 - 1));
                if m % 2 == 0 {
                    c = -c;
                }
                PolyQ::constant(c)
            } else if 2 * j >= m as usize {
                let num = BigInt::one() << (2 * j);
                let den = BigInt::from(2 * j as u64) * factorial(2 * j as u64 - m as u64);
                let mut c = Rational::new(num, den) * bernoulli(2 * j as u32);
                if j % 2 == 1 {
                    c = -c;
                }
                PolyQ::constant(c)
            } else {
                PolyQ::zero()
            }
        })
        .collect();
    SeriesPQ::from_coeffs(coeffs)
}

fn validate_exponents(m_vec: &[u32]) -> Result<(usize, usize), Error> {
    if m_vec.len() < 2 {
        return Err(Error::TooFewExponents);
    }
    if m_vec.contains(&0) {
        return Err(Error::InvalidArgument(
            "exponents must be positive".into(),
        ));
    }
    let sum: u64 = m_vec.iter().map(|&m| m as u64).sum();
    if sum % 2 != 0 {
        return Err(Error::OddExponentSum(sum));
    }
    Ok((m_vec.len(), (sum / 2) as usize))
}

/// Coefficient of `z^(sum m_l)` in
/// `X z cot(X z) * prod_l z^(m_l) cot^(m_l - 1)(z)`, as a polynomial in `X`.
///
/// The result is an even polynomial of degree exactly `sum m_l`; its leading
/// coefficient is checked against the closed form
/// `(-1)^(s-n) 2^(2s) B_(2s) / (2s)! * prod (m_l - 1)!`.
pub fn t_polynomial(m_vec: &[u32]) -> Result<PolyQ, Error> {
    let (n, s) = validate_exponents(m_vec)?;
    let mut product = scaled_cot_core_series(s);
    for &m in m_vec {
        product = series_mul(&product, &cot_derivative_series(m, s));
    }
    let t = product.coeff(s).clone();

    assert_eq!(t.degree(), Some(2 * s), "unexpected degree for T");
    assert!(t.is_even(), "T must be an even polynomial");
    let mut expected_lead = cot_expansion_coeff(s);
    if n % 2 == 1 {
        expected_lead = -expected_lead;
    }
    for &m in m_vec {
        expected_lead *= Rational::from_integer(factorial(m as u64 - 1));
    }
    assert_eq!(
        t.leading_coeff(),
        Some(&expected_lead),
        "leading coefficient of T off the closed form"
    );
    Ok(t)
}

/// The interpolation polynomial for the cotangent-derivative product sums:
/// `-T(X)`, plus a boundary term `(-1)^(n/2) X` exactly when every exponent
/// equals 1. Vanishes at 1 (checked; a failure is a pipeline bug).
pub fn r_polynomial(m_vec: &[u32]) -> Result<PolyQ, Error> {
    let t = t_polynomial(m_vec)?;
    let mut r = -&t;
    if m_vec.iter().all(|&m| m == 1) {
        // sum = n is even here, so n/2 is integral
        let sign = if (m_vec.len() / 2) % 2 == 0 { 1 } else { -1 };
        r = &r + &PolyQ::monomial(rat(sign, 1), 1);
    }
    assert!(
        r.eval(&Rational::one()).is_zero(),
        "R(1) != 0 for {m_vec:?}: residue pipeline bug"
    );
    Ok(r)
}

/// Closed form of the diagonal interpolation polynomial: `(X^2 - 3X + 2)/3`
/// for `m = 1`, and for `m >= 2`
/// `2^(2m) * ( (-1)^(m-1) B_(2m) / (m^2 C(2m,m)) X^(2m)`
/// `+ sum_{k=0}^{floor(m/2)} B_(2k) B_(2(m-k)) / (m (m-k)) C(m,2k) X^(2k)`
/// `- (1 + (-1)^m)/2 * B_m^2 / m^2 )`.
pub fn r_m_closed(m: u32) -> PolyQ {
    assert!(m >= 1, "m must be positive");
    if m == 1 {
        return PolyQ::from_coeffs(vec![rat(2, 3), rat(-1, 1), rat(1, 3)]);
    }
    let m64 = m as u64;
    let scale = Rational::from_integer(BigInt::one() << (2 * m as usize));

    let mut lead = bernoulli(2 * m)
        / Rational::from_integer(BigInt::from(m64 * m64) * crate::exact::binomial(2 * m64, m64 as i64));
    if m % 2 == 0 {
        lead = -lead;
    }
    let mut r = PolyQ::monomial(lead, 2 * m as usize);

    for k in 0..=m / 2 {
        let c = bernoulli(2 * k) * bernoulli(2 * (m - k))
            / Rational::from_integer(BigInt::from(m64 * (m64 - k as u64)))
            * Rational::from_integer(crate::exact::binomial(m64, 2 * k as i64));
        r = &r + &PolyQ::monomial(c, 2 * k as usize);
    }

    if m % 2 == 0 {
        let b = bernoulli(m);
        let c = &b * &b / Rational::from_integer(BigInt::from(m64 * m64));
        r = &r - &PolyQ::constant(c);
    }

    r.scale(&scale)
}

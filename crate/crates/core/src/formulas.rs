//! Mean-value formulas as executable objects: the general residue pipeline
//! and the closed forms for the single-exponent, two-exponent, and all-ones
//! cases, all normalized to one canonical shape so that cross-checking is a
//! term-map comparison.

use std::collections::BTreeMap;
use std::str::FromStr;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::phi_l;
use crate::exact::{bernoulli, binomial, factorial, rat, zeta_even_rational, Rational};
use crate::numeric::{rat_to_float, RealCtx, RM};
use crate::series::r_polynomial;
use crate::Error;

/// A mean value in the canonical exact form
///
/// ```text
/// M = pi^P * sum_l c_l * phi_l(f) / f^(P - l)
/// ```
///
/// where `P` is the (even) sum of the exponent vector, each `c_l` is an
/// exact rational, and `phi_l(f) = prod_{p | f} (1 - p^(-l))`.
///
/// Structural invariants, checked on construction:
/// * `P = sum(m_vec)` is even and `c_P = zeta_even_rational(P/2)`;
/// * an odd index appears only as `l = 1`, and only when every exponent
///   equals 1 (the boundary term of the contour argument);
/// * every other index is even and below `P`; zero coefficients are not
///   stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeanValueFormula {
    m_vec: Vec<u32>,
    pi_power: u32,
    terms: BTreeMap<u32, Rational>,
}

impl MeanValueFormula {
    /// Validating constructor; used directly by deserialization and
    /// indirectly (via [`Self::assemble`]) by the formula builders.
    pub fn new(m_vec: Vec<u32>, terms: BTreeMap<u32, Rational>) -> Result<Self, Error> {
        if m_vec.len() < 2 {
            return Err(Error::TooFewExponents);
        }
        if m_vec.contains(&0) {
            return Err(Error::InvalidArgument("exponents must be positive".into()));
        }
        let sum: u64 = m_vec.iter().map(|&m| m as u64).sum();
        if sum % 2 != 0 {
            return Err(Error::OddExponentSum(sum));
        }
        let pi_power = u32::try_from(sum)
            .map_err(|_| Error::InvalidArgument("exponent sum too large".into()))?;

        let terms: BTreeMap<u32, Rational> =
            terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();

        let all_ones = m_vec.iter().all(|&m| m == 1);
        for &l in terms.keys() {
            if l == 0 || l > pi_power {
                return Err(Error::InvalidArgument(format!(
                    "term index {l} out of range 1..={pi_power}"
                )));
            }
            if l % 2 != 0 && !(l == 1 && all_ones) {
                return Err(Error::InvalidArgument(format!(
                    "odd term index {l} is only allowed as l = 1 in the all-ones case"
                )));
            }
        }
        let expected_lead = zeta_even_rational(pi_power / 2);
        if terms.get(&pi_power) != Some(&expected_lead) {
            return Err(Error::InvalidArgument(format!(
                "leading coefficient must be the zeta(2s) rational {expected_lead}"
            )));
        }
        Ok(MeanValueFormula {
            m_vec,
            pi_power,
            terms,
        })
    }

    /// Internal constructor: an invariant failure here is a bug, not input.
    fn assemble(m_vec: Vec<u32>, terms: BTreeMap<u32, Rational>) -> Self {
        Self::new(m_vec, terms).expect("formula invariant violated")
    }

    pub fn m_vec(&self) -> &[u32] {
        &self.m_vec
    }

    pub fn pi_power(&self) -> u32 {
        self.pi_power
    }

    /// Term map `l -> c_l`, ascending in `l`.
    pub fn terms(&self) -> &BTreeMap<u32, Rational> {
        &self.terms
    }

    /// `c_l`, zero when absent.
    pub fn coefficient(&self, l: u32) -> Rational {
        self.terms.get(&l).cloned().unwrap_or_else(Rational::zero)
    }

    /// Same mean value: identical pi power and term map (the input echo in
    /// `m_vec` may differ, e.g. `(m, m)` versus the single-exponent form).
    pub fn same_formula(&self, other: &Self) -> bool {
        self.pi_power == other.pi_power && self.terms == other.terms
    }

    /// The exact rational `q` with `M = q * pi^P` at modulus `f`.
    pub fn evaluate_exact(&self, f: u64) -> Result<Rational, Error> {
        if f <= 2 {
            return Err(Error::ModulusTooSmall(f));
        }
        let mut acc = Rational::zero();
        for (&l, c) in &self.terms {
            let fpow = Rational::from_integer(BigInt::from(f).pow(self.pi_power - l));
            acc += c * phi_l(f, l) / fpow;
        }
        Ok(acc)
    }

    /// `evaluate_exact(f) * pi^P` at the requested precision.
    pub fn evaluate_numeric(&self, f: u64, precision_bits: u32) -> Result<BigFloat, Error> {
        let q = self.evaluate_exact(f)?;
        let mut ctx = RealCtx::new(precision_bits);
        let p = ctx.precision();
        let pi_pow = ctx.pi().powi(self.pi_power as usize, p, RM);
        Ok(rat_to_float(&q, p).mul(&pi_pow, p, RM))
    }

    /// Stable JSON document: `{"m_vec":[...],"pi_power":P,"terms":[...]}`
    /// with terms in descending `l` and integers as decimal strings.
    pub fn to_json(&self) -> String {
        let doc = FormulaDoc {
            m_vec: self.m_vec.clone(),
            pi_power: self.pi_power,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(&l, c)| TermDoc {
                    l,
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("JSON serialization")
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        let doc: FormulaDoc = serde_json::from_str(s)
            .map_err(|e| Error::InvalidArgument(format!("bad formula JSON: {e}")))?;
        let mut terms = BTreeMap::new();
        for t in &doc.terms {
            let num = BigInt::from_str(&t.num)
                .map_err(|e| Error::InvalidArgument(format!("bad numerator: {e}")))?;
            let den = BigInt::from_str(&t.den)
                .map_err(|e| Error::InvalidArgument(format!("bad denominator: {e}")))?;
            if !den.is_positive() {
                return Err(Error::InvalidArgument(
                    "denominator must be positive".into(),
                ));
            }
            if terms.insert(t.l, Rational::new(num, den)).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate term index {}",
                    t.l
                )));
            }
        }
        let formula = Self::new(doc.m_vec, terms)?;
        if formula.pi_power != doc.pi_power {
            return Err(Error::InvalidArgument(format!(
                "pi_power {} does not match the exponent sum {}",
                doc.pi_power, formula.pi_power
            )));
        }
        Ok(formula)
    }
}

#[derive(Serialize, Deserialize)]
struct FormulaDoc {
    m_vec: Vec<u32>,
    pi_power: u32,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    l: u32,
    num: String,
    den: String,
}

/// The general pipeline: interpolation polynomial, Moebius transform shape,
/// and normalization `c_l = (-1)^n r_l / (2 * prod (m_l - 1)!)`. The constant
/// term of the polynomial is dropped — it is annihilated by the Moebius sum.
pub fn mean_value(m_vec: &[u32]) -> Result<MeanValueFormula, Error> {
    let r = r_polynomial(m_vec)?;
    let mut denom = Rational::from_integer(BigInt::from(2));
    for &m in m_vec {
        denom *= Rational::from_integer(factorial(m as u64 - 1));
    }
    let negate = m_vec.len() % 2 == 1;
    let mut terms = BTreeMap::new();
    for (l, c) in r.coeffs().iter().enumerate().skip(1) {
        if c.is_zero() {
            continue;
        }
        let mut v = c / &denom;
        if negate {
            v = -v;
        }
        terms.insert(l as u32, v);
    }
    Ok(MeanValueFormula::assemble(m_vec.to_vec(), terms))
}

/// Closed form for `|L(m, chi)|^2` means. Equals `mean_value(&[m, m])`.
pub fn mean_value_single(m: u32) -> MeanValueFormula {
    assert!(m >= 1, "mean_value_single needs m >= 1");
    if m == 1 {
        let terms = BTreeMap::from([(2, rat(1, 6)), (1, rat(-1, 2))]);
        return MeanValueFormula::assemble(vec![1, 1], terms);
    }
    let z = zeta_even_rational(m);
    let b2m = bernoulli(2 * m);
    let mut terms = BTreeMap::from([(2 * m, z.clone())]);
    for k in 1..=m / 2 {
        let mut c = Rational::from_integer(binomial(2 * m as u64, m as i64))
            * rat(m as i64, (m - k) as i64)
            * Rational::from_integer(binomial(m as u64, 2 * k as i64))
            * bernoulli(2 * k)
            * bernoulli(2 * (m - k))
            / &b2m
            * &z;
        if m % 2 == 0 {
            c = -c; // (-1)^(m-1)
        }
        terms.insert(2 * k, c);
    }
    MeanValueFormula::assemble(vec![m, m], terms)
}

/// Closed form for means of `L(m, chi) * conj(L(n, chi))` with `m, n` of the
/// same parity and `(m, n) != (1, 1)`. Equals `mean_value(&[m, n])`.
pub fn mean_value_pair(m: u32, n: u32) -> Result<MeanValueFormula, Error> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("exponents must be positive".into()));
    }
    if (m + n) % 2 != 0 {
        return Err(Error::OddExponentSum((m + n) as u64));
    }
    if m == 1 && n == 1 {
        return Err(Error::InvalidArgument(
            "(1, 1) is excluded here; it needs the boundary term of the general pipeline".into(),
        ));
    }
    let weight = m + n;
    let z = zeta_even_rational(weight / 2);
    let bw = bernoulli(weight);
    let mut terms = BTreeMap::from([(weight, z.clone())]);
    let add_sum = |a: u32, b: u32, terms: &mut BTreeMap<u32, Rational>| {
        for k in 1..=a / 2 {
            let mut c = Rational::from_integer(binomial(weight as u64, a as i64))
                * rat(b as i64, (weight - 2 * k) as i64)
                * Rational::from_integer(binomial(a as u64, 2 * k as i64))
                * bernoulli(2 * k)
                * bernoulli(weight - 2 * k)
                / &bw
                * &z;
            if a % 2 == 0 {
                c = -c; // (-1)^(a-1)
            }
            *terms.entry(2 * k).or_insert_with(Rational::zero) += c;
        }
    };
    add_sum(m, n, &mut terms);
    add_sum(n, m, &mut terms);
    Ok(MeanValueFormula::assemble(vec![m, n], terms))
}

/// The partition-indexed coefficient
///
/// ```text
/// C_{n,N} = sum over e_1..e_N >= 0 with e_1 + 2 e_2 + ... + N e_N = N of
///           n! / (n - (e_1 + ... + e_N))! * prod_l (B_{2l}/(2l)!)^{e_l} / e_l!
/// ```
///
/// requiring `n >= N >= 1`.
pub fn c_coefficient(n: u32, cap_n: u32) -> Result<Rational, Error> {
    if cap_n < 1 || cap_n > n {
        return Err(Error::InvalidArgument(format!(
            "c_coefficient needs n >= N >= 1, got n = {n}, N = {cap_n}"
        )));
    }
    let mut total = Rational::zero();
    let mut multiplicities = vec![0u32; cap_n as usize];
    partition_sum(cap_n, cap_n, n, &mut multiplicities, &mut total);
    Ok(total)
}

/// Recursive enumeration of multiplicity vectors: parts of size `part` and
/// below must still account for `remaining`.
fn partition_sum(
    part: u32,
    remaining: u32,
    n: u32,
    multiplicities: &mut Vec<u32>,
    total: &mut Rational,
) {
    if remaining == 0 {
        let count: u32 = multiplicities.iter().sum();
        let mut term =
            Rational::new(factorial(n as u64), factorial((n - count) as u64));
        for (idx, &e) in multiplicities.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let l = idx as u32 + 1;
            let base = bernoulli(2 * l) / Rational::from_integer(factorial(2 * l as u64));
            term *= base.pow(e as i32) / Rational::from_integer(factorial(e as u64));
        }
        *total += term;
        return;
    }
    if part == 0 {
        return;
    }
    for e in 0..=remaining / part {
        multiplicities[part as usize - 1] = e;
        partition_sum(part - 1, remaining - part * e, n, multiplicities, total);
    }
    multiplicities[part as usize - 1] = 0;
}

/// Closed form for the all-ones exponent vector of even length `n`,
/// including the odd boundary term `(-1)^(n/2) phi_1(f) / (2 f^(n-1))`.
/// Equals `mean_value(&[1; n])`.
pub fn mean_value_all_ones(n: u32) -> Result<MeanValueFormula, Error> {
    if n < 2 {
        return Err(Error::TooFewExponents);
    }
    if n % 2 != 0 {
        return Err(Error::OddExponentSum(n as u64));
    }
    let s = n / 2;
    let z = zeta_even_rational(s);
    let scale = &z * Rational::new(factorial(n as u64), BigInt::one()) / bernoulli(n);
    let mut terms = BTreeMap::from([(n, z.clone())]);
    for k0 in 1..s {
        let c = &scale
            * c_coefficient(n, s - k0)?
            * bernoulli(2 * k0)
            / Rational::from_integer(factorial(2 * k0 as u64));
        terms.insert(2 * k0, c);
    }
    let boundary = if s % 2 == 0 { rat(1, 2) } else { rat(-1, 2) };
    terms.insert(1, boundary);
    Ok(MeanValueFormula::assemble(vec![1; n as usize], terms))
}

/// Exact audit of the Bernoulli double-sum identity extracted from the
/// leading term of the alternative two-exponent formula in the literature.
/// Both sign readings are recorded; neither triggers an error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub m: u32,
    pub n: u32,
    /// `B_(m+n)`.
    pub lhs: Rational,
    /// The unsigned double sum
    /// `D = sum_{a<=m} sum_{b<=n} C(m,a) C(n,b) / (a+b+1) * B_(m-a) B_(n-b)`.
    pub rhs: Rational,
    /// `B_(m+n) = (-1)^n     C(m+n, n) D` — the sign as printed.
    pub printed_sign_matches: bool,
    /// `B_(m+n) = (-1)^(n-1) C(m+n, n) D` — the sign forced by the weights.
    pub corrected_sign_matches: bool,
}

pub fn check_bernoulli_identity(m: u32, n: u32) -> Result<IdentityReport, Error> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("exponents must be positive".into()));
    }
    if (m + n) % 2 != 0 {
        return Err(Error::OddExponentSum((m + n) as u64));
    }
    let mut d = Rational::zero();
    for a in 0..=m {
        for b in 0..=n {
            let ba = bernoulli(m - a);
            if ba.is_zero() {
                continue;
            }
            let bb = bernoulli(n - b);
            if bb.is_zero() {
                continue;
            }
            let w = Rational::new(
                binomial(m as u64, a as i64) * binomial(n as u64, b as i64),
                BigInt::from(a + b + 1),
            );
            d += w * ba * bb;
        }
    }
    let lhs = bernoulli(m + n);
    let signed = Rational::from_integer(binomial((m + n) as u64, n as i64)) * &d;
    let printed = if n % 2 == 0 {
        signed.clone()
    } else {
        -signed.clone()
    };
    let corrected = -&printed;
    Ok(IdentityReport {
        m,
        n,
        printed_sign_matches: printed == lhs,
        corrected_sign_matches: corrected == lhs,
        lhs,
        rhs: d,
    })
}

//! Numerical ground truth: cotangent-derivative evaluation, the finite
//! formula for `L(m, chi)`, and mean values computed straight from the
//! definitions (nested character sums and their orthogonality collapse).

use std::collections::HashMap;
use std::sync::Arc;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Pow;

use crate::arith::euler_phi;
use crate::exact::{factorial, Rational};
use crate::numeric::{le, pow2, rat_to_float, BigComplex, RealCtx, RM};
use crate::series::PolyQ;
use crate::Error;

use super::group::{all_characters, unit_group, DirichletCharacter, UnitGroupStructure};

/// Refuse nested character sums beyond this many tuples.
pub const TUPLE_BUDGET: u128 = 1_000_000;

/// The cotangent-derivative polynomials: `Q_1 = X`,
/// `Q_(k+1) = -(X^2 + 1) Q_k'`, so that `cot^(k-1) = Q_k(cot)`.
pub fn q_polynomial(k: u32) -> PolyQ {
    assert!(k >= 1, "q_polynomial needs k >= 1");
    let x2p1 = PolyQ::from_coeffs(vec![
        Rational::from_integer(1.into()),
        Rational::from_integer(0.into()),
        Rational::from_integer(1.into()),
    ]);
    let mut q = PolyQ::monomial(Rational::from_integer(1.into()), 1);
    for _ in 1..k {
        q = -&(&x2p1 * &q.derivative());
    }
    q
}

fn eval_poly_float(poly: &PolyQ, x: &BigFloat, p: usize) -> BigFloat {
    let mut acc = BigFloat::new(p);
    for c in poly.coeffs().iter().rev() {
        acc = acc.mul(x, p, RM);
        if !num_traits::Zero::is_zero(c) {
            acc = acc.add(&rat_to_float(c, p), p, RM);
        }
    }
    acc
}

/// `cot^(order)(theta) = Q_(order+1)(cot theta)`; domain error at the poles.
pub fn cot_derivative(
    order: u32,
    theta: &BigFloat,
    precision_bits: u32,
) -> Result<BigFloat, Error> {
    let mut ctx = RealCtx::new(precision_bits);
    let cot = ctx
        .cot(theta)
        .ok_or_else(|| Error::InvalidArgument("cotangent pole at multiple of pi".into()))?;
    Ok(eval_poly_float(&q_polynomial(order + 1), &cot, ctx.precision()))
}

/// `cot(pi k / f)` for `k = 1..f-1`, indexed by `k - 1`.
fn cot_table(f: u64, ctx: &mut RealCtx) -> Vec<BigFloat> {
    (1..f).map(|k| ctx.cot_pi_frac(k, f)).collect()
}

/// `exp(2 pi i a / E)` for `a = 0..E-1`, `E` the group exponent.
pub fn unit_root_table(group: &UnitGroupStructure, ctx: &mut RealCtx) -> Vec<BigComplex> {
    (0..group.exponent()).map(|a| ctx.unit_root(a, group.exponent())).collect()
}

/// `Q_m(cot(pi k / f))` over the cotangent table.
fn q_values(m: u32, cots: &[BigFloat], p: usize) -> Vec<BigFloat> {
    let q = q_polynomial(m);
    cots.iter().map(|c| eval_poly_float(&q, c, p)).collect()
}

fn l_value_from_tables(
    m: u32,
    chi: &DirichletCharacter,
    roots: &[BigComplex],
    qvals: &[BigFloat],
    ctx: &mut RealCtx,
) -> BigComplex {
    let p = ctx.precision();
    let f = chi.modulus();
    let mut acc = BigComplex::zero(p);
    for k in 1..f {
        if let Some(a) = chi.angle_numerator(k) {
            acc = acc.add(&roots[a as usize].scale(&qvals[(k - 1) as usize], p), p);
        }
    }
    // (-1)^(m-1) pi^m / (2 f^m (m-1)!)
    let mut pref_rat = Rational::new(
        BigInt::from(1),
        BigInt::from(2) * BigInt::from(f).pow(m) * factorial(m as u64 - 1),
    );
    if m % 2 == 0 {
        pref_rat = -pref_rat;
    }
    let pref = rat_to_float(&pref_rat, p).mul(&ctx.pi().powi(m as usize, p, RM), p, RM);
    acc.scale(&pref, p)
}

/// `L(m, chi)` by the finite cotangent sum
/// `(-1)^(m-1) pi^m / (2 f^m (m-1)!) * sum_k chi(k) cot^(m-1)(pi k / f)`,
/// valid exactly when `chi(-1) = (-1)^m` (checked).
pub fn l_value(
    m: u32,
    chi: &DirichletCharacter,
    precision_bits: u32,
) -> Result<BigComplex, Error> {
    if m == 0 {
        return Err(Error::InvalidArgument("exponent must be positive".into()));
    }
    let expected = if m % 2 == 1 { -1 } else { 1 };
    if chi.parity() != expected {
        return Err(Error::ParityMismatch { m });
    }
    let mut ctx = RealCtx::new(precision_bits);
    let f = chi.modulus();
    let cots = cot_table(f, &mut ctx);
    let qvals = q_values(m, &cots, ctx.precision());
    let roots = unit_root_table(chi.group(), &mut ctx);
    Ok(l_value_from_tables(m, chi, &roots, &qvals, &mut ctx))
}

/// Truncated Dirichlet series `sum_{k <= k_max} chi(k) k^(-m)`; secondary
/// cross-check for `m >= 2`, where the tail is below
/// [`dirichlet_tail_bound`].
pub fn dirichlet_series_partial(
    m: u32,
    chi: &DirichletCharacter,
    k_max: u64,
    precision_bits: u32,
) -> BigComplex {
    assert!(m >= 2, "the series cross-check needs m >= 2");
    let mut ctx = RealCtx::new(precision_bits);
    let p = ctx.precision();
    let roots = unit_root_table(chi.group(), &mut ctx);
    let mut acc = BigComplex::zero(p);
    for k in 1..=k_max {
        if let Some(a) = chi.angle_numerator(k % chi.modulus()) {
            let km = rat_to_float(
                &Rational::new(BigInt::from(1), BigInt::from(k).pow(m)),
                p,
            );
            acc = acc.add(&roots[a as usize].scale(&km, p), p);
        }
    }
    acc
}

/// Tail bound `f / ((m-1) k_max^(m-1))` for the truncated series.
pub fn dirichlet_tail_bound(f: u64, m: u32, k_max: u64, precision_bits: u32) -> BigFloat {
    assert!(m >= 2);
    let p = precision_bits as usize + crate::numeric::GUARD_BITS;
    rat_to_float(
        &Rational::new(
            BigInt::from(f),
            BigInt::from(m - 1) * BigInt::from(k_max).pow(m - 1),
        ),
        p,
    )
}

/// Direct numerical sum `sum_{k=1}^{d-1} prod_l cot^(m_l - 1)(k pi / d)`.
pub fn s_direct(m_vec: &[u32], d: u64, precision_bits: u32) -> Result<BigFloat, Error> {
    if d <= 1 {
        return Err(Error::InvalidArgument(format!("need d > 1, got {d}")));
    }
    if m_vec.is_empty() || m_vec.contains(&0) {
        return Err(Error::InvalidArgument(
            "exponents must be positive and non-empty".into(),
        ));
    }
    let mut ctx = RealCtx::new(precision_bits);
    let p = ctx.precision();
    let cots = cot_table(d, &mut ctx);
    let mut tables: HashMap<u32, Vec<BigFloat>> = HashMap::new();
    for &m in m_vec {
        tables
            .entry(m)
            .or_insert_with(|| q_values(m, &cots, p));
    }
    let mut acc = BigFloat::new(p);
    for (k, first) in tables[&m_vec[0]].iter().enumerate() {
        let mut term = first.clone();
        for &m in &m_vec[1..] {
            term = term.mul(&tables[&m][k], p, RM);
        }
        acc = acc.add(&term, p, RM);
    }
    Ok(acc)
}

fn validate_mean_args(m_vec: &[u32], f: u64) -> Result<(usize, u64), Error> {
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
    if f <= 2 {
        return Err(Error::ModulusTooSmall(f));
    }
    Ok((m_vec.len(), sum))
}

/// Single-sum form of the mean value after orthogonality collapses the
/// character tuples:
/// `(-1)^n pi^(2s) / (2 f^(2s) prod (m_l - 1)!) * sum_{gcd(k,f)=1} prod_l cot^(m_l-1)(pi k / f)`.
pub fn collapsed_mean(m_vec: &[u32], f: u64, precision_bits: u32) -> Result<BigFloat, Error> {
    let (n, sum) = validate_mean_args(m_vec, f)?;
    let mut ctx = RealCtx::new(precision_bits);
    let p = ctx.precision();
    let cots = cot_table(f, &mut ctx);
    let mut tables: HashMap<u32, Vec<BigFloat>> = HashMap::new();
    for &m in m_vec {
        tables
            .entry(m)
            .or_insert_with(|| q_values(m, &cots, p));
    }
    let mut acc = BigFloat::new(p);
    for k in 1..f {
        if k.gcd(&f) != 1 {
            continue;
        }
        let mut term = BigFloat::from_u64(1, p);
        for &m in m_vec {
            term = term.mul(&tables[&m][(k - 1) as usize], p, RM);
        }
        acc = acc.add(&term, p, RM);
    }
    let mut denom = BigInt::from(2) * BigInt::from(f).pow(sum as u32);
    for &m in m_vec {
        denom *= factorial(m as u64 - 1);
    }
    let mut pref_rat = Rational::new(BigInt::from(1), denom);
    if n % 2 == 1 {
        pref_rat = -pref_rat;
    }
    let pref = rat_to_float(&pref_rat, p).mul(&ctx.pi().powi(sum as usize, p, RM), p, RM);
    Ok(acc.mul(&pref, p, RM))
}

/// The literal nested character average
/// `(2/phi(f))^(n-1) sum_{chi_1} ... sum_{chi_(n-1)}
///  L(m_1, chi_1) ... L(m_(n-1), chi_(n-1)) conj(L(m_n, chi_1...chi_(n-1)))`,
/// each `chi_l` running over parity `(-1)^(m_l)`. Refuses when
/// `phi(f)^(n-1)` exceeds [`TUPLE_BUDGET`]. The imaginary part of the result
/// must vanish to within `2^-(precision-16)` (asserted); the full complex
/// value is returned for inspection.
pub fn brute_force_mean(
    m_vec: &[u32],
    f: u64,
    precision_bits: u32,
) -> Result<BigComplex, Error> {
    let (n, _sum) = validate_mean_args(m_vec, f)?;
    let phi = euler_phi(f);
    let mut tuples: u128 = 1;
    for _ in 0..n - 1 {
        tuples = tuples.saturating_mul(phi as u128);
    }
    if tuples > TUPLE_BUDGET {
        return Err(Error::BudgetExceeded {
            actual: tuples,
            budget: TUPLE_BUDGET,
        });
    }

    let group = Arc::new(unit_group(f)?);
    let mut ctx = RealCtx::new(precision_bits);
    let p = ctx.precision();
    let roots = unit_root_table(&group, &mut ctx);
    let cots = cot_table(f, &mut ctx);
    let chars = all_characters(&group);

    // L(m, chi) for every distinct m, indexed by character rank; None on the
    // wrong parity.
    let mut ltables: HashMap<u32, Vec<Option<BigComplex>>> = HashMap::new();
    for &m in m_vec {
        if ltables.contains_key(&m) {
            continue;
        }
        let parity = if m % 2 == 1 { -1 } else { 1 };
        let qvals = q_values(m, &cots, p);
        let table = chars
            .iter()
            .map(|chi| {
                (chi.parity() == parity)
                    .then(|| l_value_from_tables(m, chi, &roots, &qvals, &mut ctx))
            })
            .collect();
        ltables.insert(m, table);
    }

    // per slot: the parity-matching character ranks
    let slots: Vec<Vec<usize>> = m_vec[..n - 1]
        .iter()
        .map(|&m| {
            let parity = if m % 2 == 1 { -1 } else { 1 };
            (0..chars.len())
                .filter(|&r| chars[r].parity() == parity)
                .collect()
        })
        .collect();

    let orders: Vec<u64> = group.components().iter().map(|c| c.order).collect();
    let last_m = m_vec[n - 1];
    let mut acc = BigComplex::zero(p);
    let mut idx = vec![0usize; n - 1];
    loop {
        // product character of the chosen tuple
        let mut ex = vec![0u64; orders.len()];
        for (slot, &i) in idx.iter().enumerate() {
            let chi = &chars[slots[slot][i]];
            for (j, &t) in chi.exponents().iter().enumerate() {
                ex[j] = (ex[j] + t) % orders[j];
            }
        }
        let prod_rank = group.rank_of(&ex);
        let mut term = ltables[&last_m][prod_rank]
            .clone()
            .expect("product character has the parity of m_n")
            .conj();
        for (slot, &i) in idx.iter().enumerate() {
            let l = ltables[&m_vec[slot]][slots[slot][i]]
                .as_ref()
                .expect("slot characters are parity-filtered");
            term = term.mul(l, p);
        }
        acc = acc.add(&term, p);

        // odometer
        let mut carry = true;
        for (slot, i) in idx.iter_mut().enumerate() {
            *i += 1;
            if *i < slots[slot].len() {
                carry = false;
                break;
            }
            *i = 0;
        }
        if carry {
            break;
        }
    }

    let norm = rat_to_float(
        &Rational::new(
            BigInt::from(2).pow((n - 1) as u32),
            BigInt::from(phi).pow((n - 1) as u32),
        ),
        p,
    );
    let mean = acc.scale(&norm, p);
    assert!(
        le(&mean.im.abs(), &pow2(16 - precision_bits as i32, p)),
        "mean value developed a real imaginary part: {:?}",
        mean.im
    );
    Ok(mean)
}

/// `(2/phi(f)) * sum over chi with chi(-1) = parity of chi(k1) conj(chi(k2))`.
/// The orthogonality relations say this is 1 for `k1 = k2`, `parity` for
/// `k1 = -k2`, and 0 otherwise (all mod `f`, both arguments units).
pub fn orthogonality_sum_with(
    group: &Arc<UnitGroupStructure>,
    parity: i8,
    k1: u64,
    k2: u64,
    roots: &[BigComplex],
    ctx: &mut RealCtx,
) -> BigComplex {
    let p = ctx.precision();
    let e = group.exponent();
    let mut acc = BigComplex::zero(p);
    for chi in all_characters(group) {
        if chi.parity() != parity {
            continue;
        }
        let (Some(a1), Some(a2)) = (chi.angle_numerator(k1), chi.angle_numerator(k2)) else {
            continue;
        };
        acc = acc.add(&roots[((a1 + e - a2) % e) as usize], p);
    }
    let norm = rat_to_float(&Rational::new(2.into(), BigInt::from(group.phi())), p);
    acc.scale(&norm, p)
}

/// Convenience wrapper building the group and tables for a single pair.
pub fn orthogonality_sum(
    f: u64,
    parity: i8,
    k1: u64,
    k2: u64,
    precision_bits: u32,
) -> Result<BigComplex, Error> {
    let group = Arc::new(unit_group(f)?);
    let mut ctx = RealCtx::new(precision_bits);
    let roots = unit_root_table(&group, &mut ctx);
    Ok(orthogonality_sum_with(
        &group, parity, k1, k2, &roots, &mut ctx,
    ))
}

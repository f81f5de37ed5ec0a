//! Dirichlet characters modulo `f`, built on an explicit decomposition of
//! the unit group into cyclic components with canonical generators.

use std::collections::HashMap;
use std::sync::Arc;

use num_integer::Integer;

use crate::numeric::{BigComplex, RealCtx};
use crate::Error;

/// One cyclic factor of `(Z/fZ)*`: a generator (as a residue mod `f`) and
/// its multiplicative order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub generator: u64,
    pub order: u64,
}

/// `(Z/fZ)*` as a product of cyclic groups: odd prime powers contribute one
/// component on a primitive root, `4` contributes an order-2 component on
/// `-1`, and `2^a` with `a >= 3` contributes `{-1} x <5>`. Every residue
/// coprime to `f` has a stored discrete-log vector against the generators.
#[derive(Debug)]
pub struct UnitGroupStructure {
    modulus: u64,
    components: Vec<Component>,
    dlog: HashMap<u64, Vec<u64>>,
    phi: u64,
    /// lcm of the component orders; all character values are roots of unity
    /// of this order.
    exponent: u64,
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % modulus as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % modulus as u128;
        }
        b = b * b % modulus as u128;
        exp >>= 1;
    }
    acc as u64
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    // extended Euclid; gcd(a, m) = 1 by construction
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r, 1, "not invertible");
    old_s.rem_euclid(m as i128) as u64
}

/// Residue mod `f` that is `a` mod `m` and `1` mod `f/m`.
fn crt_lift(a: u64, m: u64, f: u64) -> u64 {
    let rest = f / m;
    if rest == 1 {
        return a % f;
    }
    let inv_rest = mod_inverse(rest % m, m) as u128;
    let inv_m = mod_inverse(m % rest, rest) as u128;
    let x = (a as u128 * (rest as u128) * inv_rest + (m as u128) * inv_m) % f as u128;
    x as u64
}

/// Smallest primitive root modulo an odd prime power, by exhaustive order
/// test over 2, 3, 4, ...
fn primitive_root(prime_power: u64, phi: u64) -> u64 {
    let prime_factors: Vec<u64> = crate::arith::factorize(phi)
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    for g in 2..prime_power {
        if g.gcd(&prime_power) != 1 {
            continue;
        }
        if prime_factors
            .iter()
            .all(|&q| pow_mod(g, phi / q, prime_power) != 1)
        {
            return g;
        }
    }
    unreachable!("odd prime powers always have a primitive root");
}

/// CRT decomposition of `(Z/fZ)*` with discrete logs for every coprime
/// residue, filled by direct power enumeration.
pub fn unit_group(f: u64) -> Result<UnitGroupStructure, Error> {
    if f <= 2 {
        return Err(Error::ModulusTooSmall(f));
    }
    let mut components = Vec::new();
    for (p, e) in crate::arith::factorize(f) {
        let pe = p.pow(e);
        if p == 2 {
            match e {
                1 => {}
                2 => components.push(Component {
                    generator: crt_lift(3, 4, f),
                    order: 2,
                }),
                _ => {
                    components.push(Component {
                        generator: crt_lift(pe - 1, pe, f),
                        order: 2,
                    });
                    components.push(Component {
                        generator: crt_lift(5, pe, f),
                        order: pe / 4,
                    });
                }
            }
        } else {
            let phi = (p - 1) * p.pow(e - 1);
            let g = primitive_root(pe, phi);
            components.push(Component {
                generator: crt_lift(g, pe, f),
                order: phi,
            });
        }
    }

    let phi = crate::arith::euler_phi(f);
    debug_assert_eq!(components.iter().map(|c| c.order).product::<u64>(), phi);
    let exponent = components
        .iter()
        .fold(1u64, |acc, c| acc.lcm(&c.order));

    let mut dlog = HashMap::with_capacity(phi as usize);
    let orders: Vec<u64> = components.iter().map(|c| c.order).collect();
    let mut exponents = vec![0u64; components.len()];
    loop {
        let mut value: u128 = 1;
        for (c, &x) in components.iter().zip(&exponents) {
            value = value * pow_mod(c.generator, x, f) as u128 % f as u128;
        }
        let prev = dlog.insert(value as u64, exponents.clone());
        assert!(prev.is_none(), "generators are not independent");
        // mixed-radix increment, last component fastest
        let mut i = components.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            exponents[i] += 1;
            if exponents[i] < orders[i] {
                break;
            }
            exponents[i] = 0;
        }
        if exponents.iter().all(|&x| x == 0) {
            break;
        }
    }
    assert_eq!(dlog.len() as u64, phi, "discrete logs must cover the units");

    Ok(UnitGroupStructure {
        modulus: f,
        components,
        dlog,
        phi,
        exponent,
    })
}

impl UnitGroupStructure {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Discrete-log vector of `k` against the generators; `None` when
    /// `gcd(k, f) > 1`.
    pub fn dlog(&self, k: u64) -> Option<&[u64]> {
        self.dlog.get(&(k % self.modulus)).map(Vec::as_slice)
    }

    /// Mixed-radix index of an exponent tuple; inverse of
    /// [`Self::exponents_from_rank`].
    pub fn rank_of(&self, exponents: &[u64]) -> usize {
        debug_assert_eq!(exponents.len(), self.components.len());
        let mut rank = 0usize;
        for (c, &x) in self.components.iter().zip(exponents) {
            debug_assert!(x < c.order);
            rank = rank * c.order as usize + x as usize;
        }
        rank
    }

    pub fn exponents_from_rank(&self, mut rank: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.components.len()];
        for (i, c) in self.components.iter().enumerate().rev() {
            out[i] = (rank % c.order as usize) as u64;
            rank /= c.order as usize;
        }
        debug_assert_eq!(rank, 0);
        out
    }
}

/// Character of `(Z/fZ)*` given by exponents against the canonical
/// generators: the value at `prod g_j^(x_j)` is `exp(2 pi i sum t_j x_j / n_j)`.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    group: Arc<UnitGroupStructure>,
    exponents: Vec<u64>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.exponents == other.exponents
    }
}
impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    pub fn new(group: Arc<UnitGroupStructure>, exponents: Vec<u64>) -> Self {
        assert_eq!(exponents.len(), group.components.len());
        for (c, &t) in group.components.iter().zip(&exponents) {
            assert!(t < c.order, "character exponent out of range");
        }
        DirichletCharacter { group, exponents }
    }

    pub fn group(&self) -> &Arc<UnitGroupStructure> {
        &self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&t| t == 0)
    }

    /// Angle numerator `a` with `chi(k) = exp(2 pi i a / E)`, `E` the group
    /// exponent; `None` when `gcd(k, f) > 1`. Exact integer arithmetic.
    pub fn angle_numerator(&self, k: u64) -> Option<u64> {
        let x = self.group.dlog(k)?;
        let e = self.group.exponent;
        let mut acc: u128 = 0;
        for ((c, &t), &xj) in self.group.components.iter().zip(&self.exponents).zip(x) {
            let weight = (e / c.order) as u128;
            acc = (acc + t as u128 * xj as u128 % e as u128 * weight) % e as u128;
        }
        Some(acc as u64)
    }

    /// `chi(-1)`, exactly: `1` or `-1`.
    pub fn parity(&self) -> i8 {
        let a = self
            .angle_numerator(self.group.modulus - 1)
            .expect("-1 is always a unit");
        if a == 0 {
            1
        } else {
            assert_eq!(2 * a, self.group.exponent, "chi(-1) must be a square root of 1");
            -1
        }
    }

    /// Character value as a complex number at the context's precision.
    pub fn value_with(&self, k: u64, ctx: &mut RealCtx) -> BigComplex {
        match self.angle_numerator(k) {
            None => BigComplex::zero(ctx.precision()),
            Some(a) => ctx.unit_root(a, self.group.exponent),
        }
    }

    /// Pointwise product with another character mod the same `f`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.group.modulus, other.group.modulus);
        let exponents = self
            .group
            .components
            .iter()
            .zip(self.exponents.iter().zip(&other.exponents))
            .map(|(c, (&a, &b))| (a + b) % c.order)
            .collect();
        DirichletCharacter {
            group: self.group.clone(),
            exponents,
        }
    }
}

/// `chi(k)` at the requested precision, `0` on non-units.
pub fn character_value(chi: &DirichletCharacter, k: u64, precision_bits: u32) -> BigComplex {
    let mut ctx = RealCtx::new(precision_bits);
    chi.value_with(k, &mut ctx)
}

/// All characters of the group, indexed by exponent-tuple rank.
pub fn all_characters(group: &Arc<UnitGroupStructure>) -> Vec<DirichletCharacter> {
    (0..group.phi as usize)
        .map(|rank| DirichletCharacter::new(group.clone(), group.exponents_from_rank(rank)))
        .collect()
}

/// The `phi(f)/2` characters modulo `f` with `chi(-1) = parity`.
pub fn characters(f: u64, parity: i8) -> Result<Vec<DirichletCharacter>, Error> {
    assert!(parity == 1 || parity == -1, "parity must be +1 or -1");
    let group = Arc::new(unit_group(f)?);
    Ok(characters_with_parity(&group, parity))
}

/// Parity-filtered characters over an existing group structure.
pub fn characters_with_parity(
    group: &Arc<UnitGroupStructure>,
    parity: i8,
) -> Vec<DirichletCharacter> {
    let out: Vec<_> = all_characters(group)
        .into_iter()
        .filter(|chi| chi.parity() == parity)
        .collect();
    assert_eq!(
        out.len() as u64,
        group.phi / 2,
        "each parity class has phi(f)/2 characters"
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{lt, pow2};

    #[test]
    fn unit_group_small_moduli() {
        let g = unit_group(4).unwrap();
        assert_eq!(g.components().len(), 1);
        assert_eq!(g.components()[0].order, 2);
        assert_eq!(g.phi(), 2);

        let g = unit_group(15).unwrap();
        let mut orders: Vec<u64> = g.components().iter().map(|c| c.order).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![2, 4]);
        assert_eq!(g.phi(), 8);

        let g = unit_group(16).unwrap();
        let orders: Vec<u64> = g.components().iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![2, 4]); // {+-1} x <5>

        assert!(matches!(unit_group(2), Err(Error::ModulusTooSmall(2))));
    }

    #[test]
    fn dlog_reconstructs_units() {
        for f in [15u64, 16, 21, 24, 36, 40] {
            let g = unit_group(f).unwrap();
            for k in 1..f {
                if num_integer::Integer::gcd(&k, &f) != 1 {
                    assert!(g.dlog(k).is_none());
                    continue;
                }
                let x = g.dlog(k).expect("unit has a dlog");
                let mut v: u128 = 1;
                for (c, &xj) in g.components().iter().zip(x) {
                    v = v * pow_mod(c.generator, xj, f) as u128 % f as u128;
                }
                assert_eq!(v as u64, k, "f = {f}, k = {k}");
            }
        }
    }

    #[test]
    fn character_counts_per_parity() {
        for f in 3..=60u64 {
            let even = characters(f, 1).unwrap();
            let odd = characters(f, -1).unwrap();
            let phi = crate::arith::euler_phi(f);
            assert_eq!(even.len() as u64, phi / 2, "f = {f}");
            assert_eq!(odd.len() as u64, phi / 2, "f = {f}");
        }
    }

    #[test]
    fn principal_character_is_even_and_one_valued() {
        let group = Arc::new(unit_group(12).unwrap());
        let chi = DirichletCharacter::new(group.clone(), vec![0; group.components().len()]);
        assert!(chi.is_principal());
        assert_eq!(chi.parity(), 1);
        let mut ctx = RealCtx::new(128);
        let p = ctx.precision();
        for k in [1u64, 5, 7, 11] {
            let v = chi.value_with(k, &mut ctx);
            let err = v.re.sub(&astro_float::BigFloat::from_u64(1, p), p, crate::numeric::RM).abs();
            assert!(lt(&err, &pow2(-100, p)));
            assert!(v.im.is_zero() || lt(&v.im.abs(), &pow2(-100, p)));
        }
        // f = 3: the only even character is principal
        let evens = characters(3, 1).unwrap();
        assert_eq!(evens.len(), 1);
        assert!(evens[0].is_principal());
        // f = 4: one odd character
        assert_eq!(characters(4, -1).unwrap().len(), 1);
    }

    #[test]
    fn every_character_is_one_at_one() {
        let mut ctx = RealCtx::new(128);
        let p = ctx.precision();
        for f in [5u64, 15, 16, 24] {
            let group = Arc::new(unit_group(f).unwrap());
            for chi in all_characters(&group) {
                assert_eq!(chi.angle_numerator(1), Some(0));
                let v = chi.value_with(1, &mut ctx);
                let err = v
                    .re
                    .sub(&astro_float::BigFloat::from_u64(1, p), p, crate::numeric::RM)
                    .abs();
                assert!(lt(&err, &pow2(-100, p)));
            }
        }
    }

    #[test]
    fn character_multiplicativity_numerically() {
        let mut ctx = RealCtx::new(160);
        let p = ctx.precision();
        let tol = pow2(-152, p);
        for f in [5u64, 8, 15, 21] {
            let group = Arc::new(unit_group(f).unwrap());
            for chi in all_characters(&group) {
                for k1 in 1..f {
                    for k2 in (k1..f).step_by(3) {
                        let lhs = chi
                            .value_with(k1, &mut ctx)
                            .mul(&chi.value_with(k2, &mut ctx), p);
                        let rhs = chi.value_with(k1 * k2 % f, &mut ctx);
                        assert!(
                            lt(&lhs.dist(&rhs, p), &tol),
                            "f = {f}, chi = {:?}, k1 = {k1}, k2 = {k2}",
                            chi.exponents()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rank_round_trip() {
        let g = unit_group(40).unwrap();
        for rank in 0..g.phi() as usize {
            assert_eq!(g.rank_of(&g.exponents_from_rank(rank)), rank);
        }
    }
}

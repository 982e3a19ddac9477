//! Exact arithmetic in the finite-rank unitary Grassmann algebra `G(m)`.
//!
//! Basis words `e_{i_1} e_{i_2} ... e_{i_n}` with `i_1 < ... < i_n` are stored
//! as generator bitmasks; the empty mask is the unit. Multiplication is the
//! signed union of masks (`e_i e_j = -e_j e_i`, `e_i^2 = 0`), the sign being
//! the parity of the interleaving of the two ascending index lists.

use std::collections::BTreeSet;
use std::fmt;

use crate::field::{FieldConfig, FieldElem};
use crate::{Error, Result};

/// Largest supported generator index. One `u128` mask handles every scale the
/// witness constructions reach (`m = 2 deg - 2 lend`, a few dozen at most).
pub const MAX_GENERATORS: u32 = 128;

/// A basis word as a set of generator indices; bit `i - 1` is `e_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mask(pub u128);

impl Mask {
    pub const EMPTY: Mask = Mask(0);

    pub fn from_indices(indices: &[u32]) -> Mask {
        let mut m = 0u128;
        for &i in indices {
            assert!((1..=MAX_GENERATORS).contains(&i), "generator index out of range");
            m |= 1u128 << (i - 1);
        }
        Mask(m)
    }

    pub fn indices(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.weight() as usize);
        let mut bits = self.0;
        while bits != 0 {
            let tz = bits.trailing_zeros();
            out.push(tz + 1);
            bits &= bits - 1;
        }
        out
    }

    pub fn weight(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn intersects(&self, other: Mask) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(&self, other: Mask) -> Mask {
        Mask(self.0 | other.0)
    }

    /// Sign of `(this) * (other)` as ordered products: parity of the number of
    /// index pairs `(a, b)` with `a` in `self`, `b` in `other`, `a > b`.
    pub fn merge_sign(&self, other: Mask) -> i32 {
        let mut inversions = 0u32;
        let mut bits = other.0;
        while bits != 0 {
            let b = bits.trailing_zeros();
            inversions += (self.0.checked_shr(b + 1).unwrap_or(0)).count_ones();
            bits &= bits - 1;
        }
        if inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// An element of `G(m)`: a finite map from basis masks to nonzero scalars.
/// Terms are kept sorted by mask with zero coefficients pruned, so the empty
/// term list is the canonical zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannElem {
    cfg: FieldConfig,
    bound: u32,
    terms: Vec<(Mask, FieldElem)>,
}

impl GrassmannElem {
    pub fn zero(cfg: &FieldConfig, bound: u32) -> Self {
        assert!((1..=MAX_GENERATORS).contains(&bound), "generator bound out of range");
        GrassmannElem { cfg: cfg.clone(), bound, terms: Vec::new() }
    }

    pub fn scalar(cfg: &FieldConfig, bound: u32, value: FieldElem) -> Self {
        let mut g = Self::zero(cfg, bound);
        if !value.is_zero() {
            g.terms.push((Mask::EMPTY, value));
        }
        g
    }

    pub fn one(cfg: &FieldConfig, bound: u32) -> Self {
        Self::scalar(cfg, bound, cfg.one())
    }

    pub fn generator(cfg: &FieldConfig, bound: u32, i: u32) -> Self {
        Self::basis_term(cfg, bound, &[i], cfg.one())
    }

    pub fn basis_term(cfg: &FieldConfig, bound: u32, indices: &[u32], coeff: FieldElem) -> Self {
        let mut g = Self::zero(cfg, bound);
        for &i in indices {
            assert!(i >= 1 && i <= bound, "generator e_{i} outside G({bound})");
        }
        if !coeff.is_zero() {
            g.terms.push((Mask::from_indices(indices), coeff));
        }
        g
    }

    pub fn config(&self) -> &FieldConfig {
        &self.cfg
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn terms(&self) -> &[(Mask, FieldElem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mask: Mask) -> FieldElem {
        match self.terms.binary_search_by_key(&mask, |(m, _)| *m) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.cfg.zero(),
        }
    }

    fn check_compat(&self, other: &Self) -> Result<()> {
        if self.cfg != other.cfg {
            return Err(Error::ConfigMismatch);
        }
        if self.bound != other.bound {
            return Err(Error::BoundMismatch(self.bound, other.bound));
        }
        Ok(())
    }

    fn from_unsorted(
        cfg: &FieldConfig,
        bound: u32,
        mut raw: Vec<(Mask, FieldElem)>,
    ) -> GrassmannElem {
        raw.sort_unstable_by_key(|(m, _)| *m);
        let mut terms: Vec<(Mask, FieldElem)> = Vec::with_capacity(raw.len());
        for (mask, coeff) in raw {
            match terms.last_mut() {
                Some((last, acc)) if *last == mask => *acc = acc.add(&coeff),
                _ => terms.push((mask, coeff)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        GrassmannElem { cfg: cfg.clone(), bound, terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compat(other).expect("incompatible Grassmann operands");
        let mut raw = self.terms.clone();
        raw.extend_from_slice(&other.terms);
        Self::from_unsorted(&self.cfg, self.bound, raw)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (*m, c.neg())).collect();
        GrassmannElem { cfg: self.cfg.clone(), bound: self.bound, terms }
    }

    pub fn scale(&self, k: &FieldElem) -> Self {
        if k.is_zero() {
            return Self::zero(&self.cfg, self.bound);
        }
        let terms = self.terms.iter().map(|(m, c)| (*m, c.mul(k))).collect();
        GrassmannElem { cfg: self.cfg.clone(), bound: self.bound, terms }
    }

    pub fn add_scalar(&self, k: &FieldElem) -> Self {
        self.add(&Self::scalar(&self.cfg, self.bound, k.clone()))
    }

    /// Fallible product for callers mixing configurations at runtime.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        Ok(self.mul(other))
    }

    /// Fallible sum for callers mixing configurations at runtime.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        Ok(self.add(other))
    }

    /// Bilinear extension of the signed mask union; overlapping masks vanish.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_compat(other).expect("incompatible Grassmann operands");
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.intersects(*mb) {
                    continue;
                }
                let mut coeff = ca.mul(cb);
                if ma.merge_sign(*mb) < 0 {
                    coeff = coeff.neg();
                }
                raw.push((ma.union(*mb), coeff));
            }
        }
        Self::from_unsorted(&self.cfg, self.bound, raw)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.cfg, self.bound);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Commutator `[a, b] = ab - ba`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// The coefficient of the empty basis word.
    pub fn proj_k(&self) -> FieldElem {
        self.coefficient(Mask::EMPTY)
    }

    /// Splits into scalar part, even part (weight >= 2, even length) and odd
    /// part, so that `scalar + even + odd` reassembles the element.
    pub fn split_even_odd(&self) -> EvenOddSplit {
        let mut even = Self::zero(&self.cfg, self.bound);
        let mut odd = Self::zero(&self.cfg, self.bound);
        let mut scalar = self.cfg.zero();
        for (mask, coeff) in &self.terms {
            let w = mask.weight();
            if w == 0 {
                scalar = coeff.clone();
            } else if w % 2 == 0 {
                even.terms.push((*mask, coeff.clone()));
            } else {
                odd.terms.push((*mask, coeff.clone()));
            }
        }
        EvenOddSplit { scalar, even, odd }
    }

    /// Union of the supports of all basis words.
    pub fn support(&self) -> BTreeSet<u32> {
        let mut s = BTreeSet::new();
        for (mask, _) in &self.terms {
            s.extend(mask.indices());
        }
        s
    }

    /// Maximal basis-word length; `wt(0) = 0`.
    pub fn weight(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.weight()).max().unwrap_or(0)
    }

    /// Sum of the terms of maximal weight; `dom(0) = 0`.
    pub fn dominant(&self) -> Self {
        self.weight_component(self.weight())
    }

    /// The homogeneous component of the given weight.
    pub fn weight_component(&self, w: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.weight() == w).cloned().collect();
        GrassmannElem { cfg: self.cfg.clone(), bound: self.bound, terms }
    }

    /// Support, weight and dominant part in one call.
    pub fn support_weight_dom(&self) -> (BTreeSet<u32>, u32, GrassmannElem) {
        (self.support(), self.weight(), self.dominant())
    }

    /// Direct commutation test against every generator of `G(m)`.
    pub fn is_central(&self) -> bool {
        for i in 1..=self.bound {
            let e = Self::generator(&self.cfg, self.bound, i);
            if self.mul(&e) != e.mul(self) {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for GrassmannElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mask, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = coeff.to_string();
            let needs_parens = cs.contains('+');
            if mask.0 == 0 {
                if needs_parens {
                    write!(f, "({cs})")?;
                } else {
                    write!(f, "{cs}")?;
                }
                continue;
            }
            if needs_parens {
                write!(f, "({cs})*")?;
            } else if !coeff.is_one() {
                write!(f, "{cs}*")?;
            }
            let idx = mask.indices();
            for (k, i) in idx.iter().enumerate() {
                if k > 0 {
                    write!(f, "*")?;
                }
                write!(f, "e{i}")?;
            }
        }
        Ok(())
    }
}

/// Scalar / even / odd decomposition of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenOddSplit {
    pub scalar: FieldElem,
    pub even: GrassmannElem,
    pub odd: GrassmannElem,
}

/// The weight-maximal component of a power of `lambda + [e_{2n+1}] + sum of
/// disjoint generator pairs`, together with its nominal weight. `part` is the
/// component of the full expansion at that nominal weight and is legitimately
/// zero whenever the closed-form coefficient vanishes mod `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomPower {
    pub nominal_weight: u32,
    pub part: GrassmannElem,
}

impl DomPower {
    /// True when the coefficient at the nominal weight vanished mod `p`, i.e.
    /// the dominant part of the actual power sits at a lower weight.
    pub fn vanishes_at_nominal_weight(&self) -> bool {
        self.part.is_zero()
    }
}

fn factorial_ratio(cfg: &FieldConfig, hi: u32, lo: u32) -> FieldElem {
    // hi! / lo! as an integer product, reduced mod p factor by factor.
    let mut acc = cfg.one();
    for k in (lo + 1)..=hi {
        acc = acc.mul(&cfg.elem(k as i64));
    }
    acc
}

/// Closed form for the weight-maximal component of
/// `(lambda + e_{2n+1}? + e_1 e_2 + e_3 e_4 + ... + e_{2n-1} e_{2n})^gamma`.
///
/// Even-only case (`with_odd = false`): coefficient `gamma!/(gamma-n)! *
/// lambda^(gamma-n)` on `e_1...e_{2n}` when `gamma >= n`, else `gamma!` times
/// the elementary symmetric sum of `gamma` of the `n` pairs, at weight
/// `2*gamma`.
///
/// With the lone odd generator (`with_odd = true`) and `gamma > n`, one
/// factor of the power is spent on `e_{2n+1}`, so the coefficient on
/// `e_1...e_{2n+1}` is `gamma!/(gamma-n-1)! * lambda^(gamma-n-1)`; for
/// `gamma <= n` the odd generator cannot reach the top weight and the
/// even-only subset sum applies. Cross-checked against the expansion oracle
/// over the full desk-scale grid.
pub fn dom_power_closed(
    cfg: &FieldConfig,
    lambda: &FieldElem,
    n: u32,
    gamma: u32,
    with_odd: bool,
) -> Result<DomPower> {
    if gamma == 0 {
        return Err(Error::Unsupported("dom_power_closed requires gamma >= 1".into()));
    }
    if n == 0 && !with_odd {
        return Err(Error::Unsupported(
            "dom_power_closed requires at least one generator (n >= 1 or with_odd)".into(),
        ));
    }
    let bound = (2 * n + u32::from(with_odd)).max(1);
    if bound > MAX_GENERATORS {
        return Err(Error::BoundTooLarge(bound, MAX_GENERATORS));
    }

    let lambda_pow = |e: u32| -> FieldElem {
        if e == 0 {
            cfg.one()
        } else {
            lambda.pow(e as u64)
        }
    };

    let subset_sum = |size: u32| -> GrassmannElem {
        // Elementary symmetric sum of `size` of the n disjoint pairs, by
        // lexicographic enumeration of the index subsets.
        let size = size as usize;
        let mut acc = GrassmannElem::zero(cfg, bound);
        let mut choose: Vec<u32> = (1..=size as u32).collect();
        loop {
            let mut idx = Vec::with_capacity(2 * size);
            for &j in &choose {
                idx.push(2 * j - 1);
                idx.push(2 * j);
            }
            acc = acc.add(&GrassmannElem::basis_term(cfg, bound, &idx, cfg.one()));
            // next subset: bump the rightmost index that can still grow
            let mut k = size;
            loop {
                if k == 0 {
                    return acc;
                }
                k -= 1;
                if choose[k] < n - (size - 1 - k) as u32 {
                    choose[k] += 1;
                    for j in k + 1..size {
                        choose[j] = choose[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    };

    let (nominal_weight, part) = if !with_odd {
        if gamma >= n {
            let coeff = factorial_ratio(cfg, gamma, gamma - n).mul(&lambda_pow(gamma - n));
            let idx: Vec<u32> = (1..=2 * n).collect();
            (2 * n, GrassmannElem::basis_term(cfg, bound, &idx, coeff))
        } else {
            let coeff = factorial_ratio(cfg, gamma, 0);
            (2 * gamma, subset_sum(gamma).scale(&coeff))
        }
    } else if gamma > n {
        let coeff = factorial_ratio(cfg, gamma, gamma - n - 1).mul(&lambda_pow(gamma - n - 1));
        let idx: Vec<u32> = (1..=2 * n + 1).collect();
        (2 * n + 1, GrassmannElem::basis_term(cfg, bound, &idx, coeff))
    } else {
        let coeff = factorial_ratio(cfg, gamma, 0);
        (2 * gamma, subset_sum(gamma).scale(&coeff))
    };

    Ok(DomPower { nominal_weight, part })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldConfig {
        FieldConfig::prime(3).unwrap()
    }

    fn f5() -> FieldConfig {
        FieldConfig::prime(5).unwrap()
    }

    #[test]
    fn generator_products() {
        let cfg = f3();
        let e1 = GrassmannElem::generator(&cfg, 4, 1);
        let e2 = GrassmannElem::generator(&cfg, 4, 2);
        let e12 = GrassmannElem::basis_term(&cfg, 4, &[1, 2], cfg.one());
        assert_eq!(e1.mul(&e2), e12);
        assert_eq!(e2.mul(&e1), e12.neg());
        assert!(e1.mul(&e1).is_zero());
    }

    #[test]
    fn unit_distributes() {
        let cfg = f3();
        let e1 = GrassmannElem::generator(&cfg, 2, 1);
        let e2 = GrassmannElem::generator(&cfg, 2, 2);
        let one = GrassmannElem::one(&cfg, 2);
        let lhs = one.add(&e1).mul(&one.add(&e2));
        let rhs = one
            .add(&e1)
            .add(&e2)
            .add(&GrassmannElem::basis_term(&cfg, 2, &[1, 2], cfg.one()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn merge_sign_counts_transpositions() {
        // e2e3 * e1 = e2e3e1 -> +e1e2e3 needs two transpositions.
        assert_eq!(Mask::from_indices(&[2, 3]).merge_sign(Mask::from_indices(&[1])), 1);
        assert_eq!(Mask::from_indices(&[2]).merge_sign(Mask::from_indices(&[1])), -1);
        assert_eq!(Mask::from_indices(&[1]).merge_sign(Mask::from_indices(&[2])), 1);
    }

    #[test]
    fn split_examples() {
        let cfg = f5();
        let g = GrassmannElem::scalar(&cfg, 2, cfg.elem(3))
            .add(&GrassmannElem::generator(&cfg, 2, 1))
            .add(&GrassmannElem::basis_term(&cfg, 2, &[1, 2], cfg.one()));
        let s = g.split_even_odd();
        assert_eq!(s.scalar, cfg.elem(3));
        assert_eq!(s.even, GrassmannElem::basis_term(&cfg, 2, &[1, 2], cfg.one()));
        assert_eq!(s.odd, GrassmannElem::generator(&cfg, 2, 1));
        assert_eq!(
            s.even.add(&s.odd).add_scalar(&s.scalar),
            g,
            "split must reassemble"
        );

        let z = GrassmannElem::zero(&cfg, 2).split_even_odd();
        assert!(z.scalar.is_zero() && z.even.is_zero() && z.odd.is_zero());

        let g3 = GrassmannElem::basis_term(&cfg, 3, &[1, 2, 3], cfg.one());
        let s3 = g3.split_even_odd();
        assert!(s3.scalar.is_zero() && s3.even.is_zero());
        assert_eq!(s3.odd, g3);
    }

    #[test]
    fn support_weight_dom_examples() {
        let cfg = f5();
        let g = GrassmannElem::scalar(&cfg, 4, cfg.elem(2))
            .add(&GrassmannElem::generator(&cfg, 4, 1))
            .add(&GrassmannElem::basis_term(&cfg, 4, &[1, 2], cfg.one()));
        let (s, w, dom) = g.support_weight_dom();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(w, 2);
        assert_eq!(dom, GrassmannElem::basis_term(&cfg, 4, &[1, 2], cfg.one()));

        let (s0, w0, d0) = GrassmannElem::zero(&cfg, 4).support_weight_dom();
        assert!(s0.is_empty() && w0 == 0 && d0.is_zero());

        let both = GrassmannElem::basis_term(&cfg, 4, &[1, 2], cfg.one())
            .add(&GrassmannElem::basis_term(&cfg, 4, &[3, 4], cfg.one()));
        assert_eq!(both.weight(), 2);
        assert_eq!(both.dominant(), both);
    }

    #[test]
    fn centrality_examples() {
        let cfg = f3();
        assert!(GrassmannElem::basis_term(&cfg, 4, &[1, 2], cfg.one()).is_central());
        assert!(!GrassmannElem::generator(&cfg, 2, 1).is_central());
        // e1e2e3 is annihilated by every generator of G(3).
        assert!(GrassmannElem::basis_term(&cfg, 3, &[1, 2, 3], cfg.one()).is_central());
    }

    #[test]
    fn incompatible_operands_are_reported() {
        let a = GrassmannElem::generator(&f3(), 4, 1);
        let b = GrassmannElem::generator(&f5(), 4, 1);
        assert!(a.try_mul(&b).is_err());
        let c = GrassmannElem::generator(&f3(), 6, 1);
        assert!(a.try_add(&c).is_err());
        assert!(a.try_mul(&a).is_ok());
    }

    #[test]
    fn proj_examples() {
        let cfg = f5();
        let g = GrassmannElem::scalar(&cfg, 2, cfg.elem(3))
            .add(&GrassmannElem::basis_term(&cfg, 2, &[1, 2], cfg.one()));
        assert_eq!(g.proj_k(), cfg.elem(3));
        assert!(GrassmannElem::generator(&cfg, 2, 1).proj_k().is_zero());
        assert!(GrassmannElem::zero(&cfg, 2).proj_k().is_zero());
    }

    #[test]
    fn dom_power_pair_cases() {
        let cfg = f5();
        // n = 2, gamma = 2: gamma >= n branch with 2!/0! = 2.
        let d = dom_power_closed(&cfg, &cfg.elem(7), 2, 2, false).unwrap();
        assert_eq!(d.nominal_weight, 4);
        assert_eq!(d.part, GrassmannElem::basis_term(&cfg, 4, &[1, 2, 3, 4], cfg.elem(2)));
        // n = 1, gamma = 3, lambda = 1: 3!/2! * 1 = 3.
        let d = dom_power_closed(&cfg, &cfg.one(), 1, 3, false).unwrap();
        assert_eq!(d.part, GrassmannElem::basis_term(&cfg, 2, &[1, 2], cfg.elem(3)));
    }

    #[test]
    fn dom_power_odd_cases() {
        let cfg = f3();
        // (2 + e1)^1 has dominant part e1 regardless of lambda.
        let d = dom_power_closed(&cfg, &cfg.elem(2), 0, 1, true).unwrap();
        assert_eq!(d.nominal_weight, 1);
        assert_eq!(d.part, GrassmannElem::generator(&cfg, 1, 1));
        // (1 + e1)^2 = 1 + 2 e1.
        let d = dom_power_closed(&cfg, &cfg.one(), 0, 2, true).unwrap();
        assert_eq!(d.part, GrassmannElem::basis_term(&cfg, 1, &[1], cfg.elem(2)));
    }

    #[test]
    fn dom_power_vanishing_coefficient_is_reported() {
        let cfg = f3();
        // gamma = 3 with n = 1 pairs: 3!/2! lambda = 3 lambda = 0 mod 3.
        let d = dom_power_closed(&cfg, &cfg.one(), 1, 3, false).unwrap();
        assert_eq!(d.nominal_weight, 2);
        assert!(d.vanishes_at_nominal_weight());
    }
}

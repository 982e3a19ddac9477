//! The free unitary associative algebra over a countable variable set
//! `x_1, x_2, ...`: words, sparse polynomials, commutators, substitution
//! endomorphisms and evaluation homomorphisms into `G(m)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::field::{FieldConfig, FieldElem};
use crate::grassmann::GrassmannElem;
use crate::{Error, Result};

/// A monomial: a sequence of variable indices (>= 1). The empty word is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>) -> Word {
        assert!(letters.iter().all(|&v| v >= 1), "variable indices start at 1");
        Word(letters)
    }

    pub fn unit() -> Word {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Occurrences of each variable in this word.
    pub fn multidegree(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &v in &self.0 {
            *m.entry(v).or_insert(0) += 1;
        }
        m
    }
}

/// Length-lexicographic order: shorter words first, then left-to-right by
/// variable index. Storage and printing order for polynomials.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of the free unitary algebra: a finite map from words to nonzero
/// scalars. The empty map is 0; `{1 -> c}` is the scalar `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreePoly {
    cfg: FieldConfig,
    terms: BTreeMap<Word, FieldElem>,
}

impl FreePoly {
    pub fn zero(cfg: &FieldConfig) -> Self {
        FreePoly { cfg: cfg.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(cfg: &FieldConfig, value: FieldElem) -> Self {
        let mut f = Self::zero(cfg);
        f.accumulate(Word::unit(), value);
        f
    }

    pub fn one(cfg: &FieldConfig) -> Self {
        Self::scalar(cfg, cfg.one())
    }

    pub fn variable(cfg: &FieldConfig, i: u32) -> Self {
        Self::monomial(cfg, cfg.one(), Word::new(vec![i]))
    }

    pub fn word(cfg: &FieldConfig, letters: &[u32]) -> Self {
        Self::monomial(cfg, cfg.one(), Word::new(letters.to_vec()))
    }

    pub fn monomial(cfg: &FieldConfig, coeff: FieldElem, word: Word) -> Self {
        let mut f = Self::zero(cfg);
        f.accumulate(word, coeff);
        f
    }

    pub fn config(&self) -> &FieldConfig {
        &self.cfg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> FieldElem {
        self.terms.get(w).cloned().unwrap_or_else(|| self.cfg.zero())
    }

    /// Adds `coeff * word` in place, pruning a resulting zero.
    pub fn accumulate(&mut self, word: Word, coeff: FieldElem) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_cfg(&self, other: &Self) {
        assert!(self.cfg == other.cfg, "field configurations differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_cfg(other);
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.accumulate(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect();
        FreePoly { cfg: self.cfg.clone(), terms }
    }

    pub fn scale(&self, k: &FieldElem) -> Self {
        if k.is_zero() {
            return Self::zero(&self.cfg);
        }
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), c.mul(k))).collect();
        FreePoly { cfg: self.cfg.clone(), terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_cfg(other);
        let mut out = Self::zero(&self.cfg);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.accumulate(wa.concat(wb), ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.cfg);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `[f, g] = fg - gf`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Variables occurring in some word.
    pub fn vars(&self) -> BTreeSet<u32> {
        let mut s = BTreeSet::new();
        for w in self.terms.keys() {
            s.extend(w.letters().iter().copied());
        }
        s
    }

    pub fn max_var(&self) -> u32 {
        self.vars().into_iter().next_back().unwrap_or(0)
    }

    /// Applies the unitary endomorphism sending `x_i` to `images[i]`;
    /// unassigned variables map to themselves.
    pub fn substitute(&self, images: &BTreeMap<u32, FreePoly>) -> Self {
        let mut out = Self::zero(&self.cfg);
        for (w, c) in &self.terms {
            let mut acc = Self::scalar(&self.cfg, c.clone());
            for &v in w.letters() {
                let img = match images.get(&v) {
                    Some(g) => g.clone(),
                    None => Self::variable(&self.cfg, v),
                };
                acc = acc.mul(&img);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Applies the unique unitary homomorphism into `G(m)` extending the
    /// assignment.
    pub fn evaluate(&self, sigma: &GrassmannAssignment) -> Result<GrassmannElem> {
        if self.cfg != sigma.cfg {
            return Err(Error::ConfigMismatch);
        }
        let mut out = GrassmannElem::zero(&sigma.cfg, sigma.bound);
        for (w, c) in &self.terms {
            let mut acc = GrassmannElem::scalar(&sigma.cfg, sigma.bound, c.clone());
            let mut i = 0;
            let letters = w.letters();
            while i < letters.len() {
                // exponentiate runs of one variable in a single pow call
                let v = letters[i];
                let mut run = 1;
                while i + run < letters.len() && letters[i + run] == v {
                    run += 1;
                }
                acc = acc.mul(&sigma.image(v).pow(run as u32));
                i += run;
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Degree bookkeeping; errors on the zero polynomial.
    pub fn degrees(&self) -> Result<Degrees> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut total = 0u32;
        let mut var_degrees: BTreeMap<u32, u32> = BTreeMap::new();
        let mut word_multidegrees = Vec::new();
        for w in self.terms.keys() {
            total = total.max(w.len() as u32);
            let md = w.multidegree();
            for (&v, &d) in &md {
                let e = var_degrees.entry(v).or_insert(0);
                *e = (*e).max(d);
            }
            word_multidegrees.push(md);
        }
        let multihomogeneous = word_multidegrees.windows(2).all(|p| p[0] == p[1]);
        let essential = {
            let sets: Vec<BTreeSet<u32>> =
                word_multidegrees.iter().map(|m| m.keys().copied().collect()).collect();
            sets.windows(2).all(|p| p[0] == p[1])
        };
        Ok(Degrees { total, var_degrees, multihomogeneous, essential })
    }

    /// Max total degree, or 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|w| w.len() as u32).max().unwrap_or(0)
    }
}

/// Left-normed commutator `[f_1, f_2, ..., f_n] = [[f_1, f_2], ..., f_n]`.
pub fn left_normed(parts: &[FreePoly]) -> FreePoly {
    assert!(!parts.is_empty(), "left_normed needs at least one argument");
    let mut acc = parts[0].clone();
    for f in &parts[1..] {
        acc = acc.commutator(f);
    }
    acc
}

/// Degree summary of a nonzero polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degrees {
    pub total: u32,
    /// Max occurrences per variable over all words.
    pub var_degrees: BTreeMap<u32, u32>,
    /// True when every word has the same multidegree.
    pub multihomogeneous: bool,
    /// True when the variable sets of all words coincide.
    pub essential: bool,
}

/// A substitution `X -> G(m)`: explicit images for finitely many variables
/// plus a default image (a scalar, 0 unless overridden) for the rest.
#[derive(Clone, Debug)]
pub struct GrassmannAssignment {
    cfg: FieldConfig,
    bound: u32,
    images: BTreeMap<u32, GrassmannElem>,
    default_image: GrassmannElem,
}

impl GrassmannAssignment {
    pub fn new(cfg: &FieldConfig, bound: u32) -> Self {
        GrassmannAssignment {
            cfg: cfg.clone(),
            bound,
            images: BTreeMap::new(),
            default_image: GrassmannElem::zero(cfg, bound),
        }
    }

    pub fn set_default(&mut self, image: GrassmannElem) -> Result<()> {
        self.check_image(&image)?;
        self.default_image = image;
        Ok(())
    }

    pub fn insert(&mut self, var: u32, image: GrassmannElem) -> Result<()> {
        self.check_image(&image)?;
        self.images.insert(var, image);
        Ok(())
    }

    fn check_image(&self, image: &GrassmannElem) -> Result<()> {
        if *image.config() != self.cfg {
            return Err(Error::ConfigMismatch);
        }
        if image.bound() != self.bound {
            return Err(Error::BoundMismatch(self.bound, image.bound()));
        }
        Ok(())
    }

    pub fn image(&self, var: u32) -> &GrassmannElem {
        self.images.get(&var).unwrap_or(&self.default_image)
    }

    pub fn images(&self) -> impl Iterator<Item = (&u32, &GrassmannElem)> {
        self.images.iter()
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn config(&self) -> &FieldConfig {
        &self.cfg
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        // powers of repeated letters collapse: x1^2*x2
        let mut i = 0;
        let mut first = true;
        while i < self.0.len() {
            let v = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == v {
                run += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if run == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Display for FreePoly {
    /// Canonical text: terms in descending length-lex order, coefficients as
    /// `[0, p)` representatives (`t`-basis for extensions), `+`-separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = c.to_string();
            let parens = cs.contains('+');
            if w.is_empty() {
                if parens {
                    write!(f, "({cs})")?;
                } else {
                    write!(f, "{cs}")?;
                }
            } else if parens {
                write!(f, "({cs})*{w}")?;
            } else if c.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{cs}*{w}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldConfig {
        FieldConfig::prime(3).unwrap()
    }

    #[test]
    fn words_do_not_commute() {
        let cfg = f3();
        let x1 = FreePoly::variable(&cfg, 1);
        let x2 = FreePoly::variable(&cfg, 2);
        assert_eq!(x1.mul(&x2), FreePoly::word(&cfg, &[1, 2]));
        assert_ne!(x1.mul(&x2), x2.mul(&x1));
    }

    #[test]
    fn noncommuting_square_expansion() {
        let cfg = f3();
        let x1 = FreePoly::variable(&cfg, 1);
        let x2 = FreePoly::variable(&cfg, 2);
        let sq = x1.add(&x2).pow(2);
        let expect = FreePoly::word(&cfg, &[1, 1])
            .add(&FreePoly::word(&cfg, &[1, 2]))
            .add(&FreePoly::word(&cfg, &[2, 1]))
            .add(&FreePoly::word(&cfg, &[2, 2]));
        assert_eq!(sq, expect);
        assert_eq!(sq.num_terms(), 4);
    }

    #[test]
    fn characteristic_collapse() {
        let cfg = f3();
        let x1 = FreePoly::variable(&cfg, 1);
        assert!(x1.scale(&cfg.elem(2)).add(&x1).is_zero());
    }

    #[test]
    fn commutator_examples() {
        let cfg = f3();
        let x1 = FreePoly::variable(&cfg, 1);
        let x2 = FreePoly::variable(&cfg, 2);
        let c = x1.commutator(&x2);
        assert_eq!(c, FreePoly::word(&cfg, &[1, 2]).sub(&FreePoly::word(&cfg, &[2, 1])));
        assert!(x1.commutator(&x1).is_zero());
    }

    #[test]
    fn left_normed_triple_expansion() {
        let cfg = f3();
        let xs: Vec<FreePoly> = (1..=3).map(|i| FreePoly::variable(&cfg, i)).collect();
        let c = left_normed(&xs);
        // [[x1,x2],x3] = x1x2x3 - x2x1x3 - x3x1x2 + x3x2x1
        let expect = FreePoly::word(&cfg, &[1, 2, 3])
            .sub(&FreePoly::word(&cfg, &[2, 1, 3]))
            .sub(&FreePoly::word(&cfg, &[3, 1, 2]))
            .add(&FreePoly::word(&cfg, &[3, 2, 1]));
        assert_eq!(c, expect);
        assert_eq!(c.num_terms(), 4);
        assert!(c.terms().all(|(_, coeff)| coeff.is_one() || coeff.neg().is_one()));
    }

    #[test]
    fn substitution_examples() {
        let cfg = f3();
        let x1sq = FreePoly::word(&cfg, &[1, 1]);
        let mut tau = BTreeMap::new();
        tau.insert(1, FreePoly::variable(&cfg, 2).add(&FreePoly::variable(&cfg, 3)));
        let out = x1sq.substitute(&tau);
        assert_eq!(out.num_terms(), 4);
        assert_eq!(out.coefficient(&Word::new(vec![2, 3])), cfg.one());

        let mut to_one = BTreeMap::new();
        to_one.insert(1, FreePoly::one(&cfg));
        assert_eq!(FreePoly::variable(&cfg, 1).substitute(&to_one), FreePoly::one(&cfg));

        let mut collapse = BTreeMap::new();
        collapse.insert(2, FreePoly::variable(&cfg, 1));
        let c = FreePoly::variable(&cfg, 1).commutator(&FreePoly::variable(&cfg, 2));
        assert!(c.substitute(&collapse).is_zero());
    }

    #[test]
    fn substitution_composes() {
        let cfg = f3();
        let f = FreePoly::word(&cfg, &[1, 2]).add(&FreePoly::word(&cfg, &[2, 1, 1]));
        let mut tau1 = BTreeMap::new();
        tau1.insert(1, FreePoly::variable(&cfg, 2).add(&FreePoly::one(&cfg)));
        let mut tau2 = BTreeMap::new();
        tau2.insert(2, FreePoly::word(&cfg, &[1, 3]));
        // substitute(substitute(f, tau1), tau2) == substitute(f, tau2 after tau1)
        let lhs = f.substitute(&tau1).substitute(&tau2);
        let mut composed = BTreeMap::new();
        for (&v, img) in &tau1 {
            composed.insert(v, img.substitute(&tau2));
        }
        for (&v, img) in &tau2 {
            composed.entry(v).or_insert_with(|| img.clone());
        }
        assert_eq!(lhs, f.substitute(&composed));
    }

    #[test]
    fn evaluate_examples() {
        let cfg = f3();
        let mut sigma = GrassmannAssignment::new(&cfg, 2);
        sigma.insert(1, GrassmannElem::generator(&cfg, 2, 1)).unwrap();
        sigma.insert(2, GrassmannElem::generator(&cfg, 2, 2)).unwrap();
        let c = FreePoly::variable(&cfg, 1).commutator(&FreePoly::variable(&cfg, 2));
        assert_eq!(
            c.evaluate(&sigma).unwrap(),
            GrassmannElem::basis_term(&cfg, 2, &[1, 2], cfg.elem(2))
        );

        let mut sigma2 = GrassmannAssignment::new(&cfg, 2);
        sigma2
            .insert(1, GrassmannElem::one(&cfg, 2).add(&GrassmannElem::generator(&cfg, 2, 1)))
            .unwrap();
        let sq = FreePoly::word(&cfg, &[1, 1]);
        let expect = GrassmannElem::one(&cfg, 2)
            .add(&GrassmannElem::basis_term(&cfg, 2, &[1], cfg.elem(2)));
        assert_eq!(sq.evaluate(&sigma2).unwrap(), expect);
    }

    #[test]
    fn degrees_and_essential() {
        let cfg = f3();
        let f = FreePoly::word(&cfg, &[1, 1, 2]);
        let d = f.degrees().unwrap();
        assert_eq!(d.total, 3);
        assert_eq!(d.var_degrees[&1], 2);

        let g = FreePoly::word(&cfg, &[1, 2]).add(&FreePoly::variable(&cfg, 1));
        assert!(!g.degrees().unwrap().essential);

        let h = FreePoly::word(&cfg, &[1, 2]).add(&FreePoly::word(&cfg, &[2, 1]));
        assert!(h.degrees().unwrap().essential);

        assert!(FreePoly::zero(&cfg).degrees().is_err());
    }

    #[test]
    fn word_order_is_length_lex() {
        let a = Word::new(vec![2]);
        let b = Word::new(vec![1, 1]);
        assert!(a < b);
        assert!(Word::new(vec![1, 2]) < Word::new(vec![2, 1]));
        assert!(Word::unit() < a);
    }
}

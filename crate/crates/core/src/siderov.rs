//! Structured terms of the form
//! `x_{i_1}^{a_1} ... x_{i_t}^{a_t} * [x_{j_1},x_{j_2}] x_{j_1}^{b_1} x_{j_2}^{b_2} * ...`
//! (ascending beginning, strictly ascending commutator-block indices, the two
//! parts variable-disjoint), their total order, the bounded subfamily used by
//! the witness constructions, and exhaustive enumeration for tests.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::field::FieldConfig;
use crate::freealg::FreePoly;
use crate::{Error, Result};

/// One commutator block `[x_j1, x_j2] x_j1^b1 x_j2^b2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EndBlock {
    pub j1: u32,
    pub b1: u32,
    pub j2: u32,
    pub b2: u32,
}

/// A structured term: `beg` is an ascending list of `(variable, exponent >= 1)`
/// pairs, `end` a list of commutator blocks whose variable indices ascend
/// strictly across all blocks. The two variable sets are disjoint and at
/// least one part is nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SSTerm {
    beg: Vec<(u32, u32)>,
    end: Vec<EndBlock>,
}

impl SSTerm {
    pub fn new(beg: Vec<(u32, u32)>, end: Vec<EndBlock>) -> Result<Self> {
        if beg.is_empty() && end.is_empty() {
            return Err(Error::InvalidTerm("beginning and end both empty".into()));
        }
        for w in beg.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidTerm("beginning variables must ascend strictly".into()));
            }
        }
        for &(v, a) in &beg {
            if v == 0 {
                return Err(Error::InvalidTerm("variable indices start at 1".into()));
            }
            if a == 0 {
                return Err(Error::InvalidTerm("beginning exponents must be >= 1".into()));
            }
        }
        let mut prev = 0u32;
        for b in &end {
            if b.j1 == 0 || b.j1 <= prev || b.j2 <= b.j1 {
                return Err(Error::InvalidTerm(
                    "end variables must ascend strictly across all blocks".into(),
                ));
            }
            prev = b.j2;
        }
        let beg_vars: BTreeSet<u32> = beg.iter().map(|&(v, _)| v).collect();
        for b in &end {
            if beg_vars.contains(&b.j1) || beg_vars.contains(&b.j2) {
                return Err(Error::InvalidTerm(
                    "beginning and end variable sets must be disjoint".into(),
                ));
            }
        }
        Ok(SSTerm { beg, end })
    }

    /// A pure power product `x_{i_1}^{a_1} ... x_{i_t}^{a_t}`.
    pub fn from_beg(beg: Vec<(u32, u32)>) -> Result<Self> {
        Self::new(beg, Vec::new())
    }

    pub fn beg(&self) -> &[(u32, u32)] {
        &self.beg
    }

    pub fn end(&self) -> &[EndBlock] {
        &self.end
    }

    pub fn lbeg(&self) -> u32 {
        self.beg.len() as u32
    }

    pub fn lend(&self) -> u32 {
        self.end.len() as u32
    }

    /// Total degree: beginning exponents plus `1 + b` per end occurrence.
    pub fn deg(&self) -> u32 {
        let b: u32 = self.beg.iter().map(|&(_, a)| a).sum();
        let e: u32 = self.end.iter().map(|blk| 2 + blk.b1 + blk.b2).sum();
        b + e
    }

    pub fn deg_var(&self, var: u32) -> u32 {
        for &(v, a) in &self.beg {
            if v == var {
                return a;
            }
        }
        for b in &self.end {
            if b.j1 == var {
                return 1 + b.b1;
            }
            if b.j2 == var {
                return 1 + b.b2;
            }
        }
        0
    }

    pub fn var_degrees(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &(v, a) in &self.beg {
            m.insert(v, a);
        }
        for b in &self.end {
            m.insert(b.j1, 1 + b.b1);
            m.insert(b.j2, 1 + b.b2);
        }
        m
    }

    pub fn beg_vars(&self) -> BTreeSet<u32> {
        self.beg.iter().map(|&(v, _)| v).collect()
    }

    pub fn end_vars(&self) -> BTreeSet<u32> {
        self.end.iter().flat_map(|b| [b.j1, b.j2]).collect()
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        let mut s = self.beg_vars();
        s.extend(self.end_vars());
        s
    }

    /// Literal expansion into the free algebra; injective on valid terms.
    pub fn to_poly(&self, cfg: &FieldConfig) -> FreePoly {
        let mut acc = FreePoly::one(cfg);
        let mut beg_word = Vec::new();
        for &(v, a) in &self.beg {
            beg_word.extend(std::iter::repeat_n(v, a as usize));
        }
        if !beg_word.is_empty() {
            acc = FreePoly::word(cfg, &beg_word);
        }
        for b in &self.end {
            let x = FreePoly::variable(cfg, b.j1);
            let y = FreePoly::variable(cfg, b.j2);
            let mut block = x.commutator(&y);
            let mut tail_word = Vec::new();
            tail_word.extend(std::iter::repeat_n(b.j1, b.b1 as usize));
            tail_word.extend(std::iter::repeat_n(b.j2, b.b2 as usize));
            if !tail_word.is_empty() {
                block = block.mul(&FreePoly::word(cfg, &tail_word));
            }
            acc = acc.mul(&block);
        }
        acc
    }

    /// Bounded-degree predicate: beginning degrees strictly below `p`, end
    /// variable degrees at most `p`.
    pub fn is_bss(&self, p: u64) -> bool {
        let p = p as u32;
        self.beg.iter().all(|&(_, a)| a < p)
            && self.end.iter().all(|b| b.b1 < p && b.b2 < p)
    }

    /// The total order: higher degree first; at equal degree a *shorter* end
    /// wins; then the first variable (ascending index) with differing degree,
    /// higher degree winning; finally the largest index whose
    /// beginning-membership differs, membership in this term's beginning
    /// winning. Returns `Equal` only for identical terms.
    pub fn compare(&self, other: &SSTerm) -> Ordering {
        match self.deg().cmp(&other.deg()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // smaller lend = greater term
        match other.lend().cmp(&self.lend()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let du = self.var_degrees();
        let dv = other.var_degrees();
        let all_vars: BTreeSet<u32> = du.keys().chain(dv.keys()).copied().collect();
        for &v in &all_vars {
            let a = du.get(&v).copied().unwrap_or(0);
            let b = dv.get(&v).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        // Identical multidegrees: compare beginning membership from the
        // largest index down; the term holding that variable in its
        // beginning is the greater one.
        let bu = self.beg_vars();
        let bv = other.beg_vars();
        for &v in all_vars.iter().rev() {
            match (bu.contains(&v), bv.contains(&v)) {
                (true, false) => return Ordering::Greater,
                (false, true) => return Ordering::Less,
                _ => {}
            }
        }
        debug_assert_eq!(self, other, "distinct terms with identical order keys");
        Ordering::Equal
    }
}

impl Ord for SSTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl PartialOrd for SSTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SSTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(v, a) in &self.beg {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if a == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{a}")?;
            }
        }
        for b in &self.end {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "[x{},x{}]", b.j1, b.j2)?;
            if b.b1 > 0 {
                write!(f, "*x{}", b.j1)?;
                if b.b1 > 1 {
                    write!(f, "^{}", b.b1)?;
                }
            }
            if b.b2 > 0 {
                write!(f, "*x{}", b.j2)?;
                if b.b2 > 1 {
                    write!(f, "^{}", b.b2)?;
                }
            }
        }
        Ok(())
    }
}

/// A structured term or the unit monomial; the unit sorts below every term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    Unit,
    Term(SSTerm),
}

impl Tail {
    pub fn deg(&self) -> u32 {
        match self {
            Tail::Unit => 0,
            Tail::Term(u) => u.deg(),
        }
    }

    pub fn as_term(&self) -> Option<&SSTerm> {
        match self {
            Tail::Unit => None,
            Tail::Term(u) => Some(u),
        }
    }

    pub fn to_poly(&self, cfg: &FieldConfig) -> FreePoly {
        match self {
            Tail::Unit => FreePoly::one(cfg),
            Tail::Term(u) => u.to_poly(cfg),
        }
    }
}

impl Ord for Tail {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Tail::Unit, Tail::Unit) => Ordering::Equal,
            (Tail::Unit, Tail::Term(_)) => Ordering::Less,
            (Tail::Term(_), Tail::Unit) => Ordering::Greater,
            (Tail::Term(a), Tail::Term(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Tail {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tail::Unit => write!(f, "1"),
            Tail::Term(u) => write!(f, "{u}"),
        }
    }
}

const ENUMERATION_CAP: usize = 1_000_000;

/// Exhaustively enumerates the structured terms over the given variables with
/// total degree at most `max_degree`, sorted descending. With `bss_only`
/// the beginning/end degree bounds of the bounded subfamily apply.
pub fn enumerate_ss(
    vars: &BTreeSet<u32>,
    max_degree: u32,
    p: u64,
    bss_only: bool,
) -> Result<Vec<SSTerm>> {
    let vars: Vec<u32> = vars.iter().copied().collect();
    let mut out: Vec<SSTerm> = Vec::new();

    // Choose the end-variable subset (even size; consecutive pairs of the
    // ascending list form the blocks), then the beginning subset, then
    // exponents within the degree budget.
    let n = vars.len();
    for end_mask in 0u32..(1 << n) {
        let end_set: Vec<u32> =
            (0..n).filter(|&i| end_mask >> i & 1 == 1).map(|i| vars[i]).collect();
        if !end_set.len().is_multiple_of(2) {
            continue;
        }
        let end_base: u32 = end_set.len() as u32;
        if end_base > max_degree {
            continue;
        }
        let rest: Vec<u32> = (0..n).filter(|&i| end_mask >> i & 1 == 0).map(|i| vars[i]).collect();
        let rn = rest.len();
        for beg_mask in 0u32..(1 << rn) {
            let beg_set: Vec<u32> =
                (0..rn).filter(|&i| beg_mask >> i & 1 == 1).map(|i| rest[i]).collect();
            if beg_set.is_empty() && end_set.is_empty() {
                continue;
            }
            let min_deg = end_base + beg_set.len() as u32;
            if min_deg > max_degree {
                continue;
            }
            // exponent budgets: beg exponents alpha >= 1, end betas >= 0
            let beg_cap = if bss_only { (p as u32).saturating_sub(1) } else { max_degree };
            let beta_cap = if bss_only { (p as u32).saturating_sub(1) } else { max_degree };
            if bss_only && beg_cap == 0 && !beg_set.is_empty() {
                continue;
            }
            let slots = beg_set.len() + end_set.len();
            let mut exps = vec![0u32; slots];
            // exps[i] = alpha - 1 for beg slots, beta for end slots
            'outer: loop {
                let beg_extra: u32 = exps[..beg_set.len()].iter().sum();
                let beta_sum: u32 = exps[beg_set.len()..].iter().sum();
                let total = min_deg + beg_extra + beta_sum;
                let within_caps = exps[..beg_set.len()].iter().all(|&e| e < beg_cap.max(1))
                    && exps[beg_set.len()..].iter().all(|&e| e <= beta_cap);
                if total <= max_degree && (!bss_only || within_caps) {
                    let beg: Vec<(u32, u32)> =
                        beg_set.iter().zip(&exps).map(|(&v, &e)| (v, e + 1)).collect();
                    let mut end = Vec::new();
                    for (k, pair) in end_set.chunks(2).enumerate() {
                        end.push(EndBlock {
                            j1: pair[0],
                            b1: exps[beg_set.len() + 2 * k],
                            j2: pair[1],
                            b2: exps[beg_set.len() + 2 * k + 1],
                        });
                    }
                    let term = SSTerm::new(beg, end).expect("enumerated term must be valid");
                    if !bss_only || term.is_bss(p) {
                        out.push(term);
                        if out.len() > ENUMERATION_CAP {
                            return Err(Error::EnumerationOverflow(out.len()));
                        }
                    }
                }
                // odometer with per-slot bound max_degree (degree filter prunes)
                let mut i = 0;
                loop {
                    if i == slots {
                        break 'outer;
                    }
                    exps[i] += 1;
                    if exps[i] <= max_degree {
                        break;
                    }
                    exps[i] = 0;
                    i += 1;
                }
                if slots == 0 {
                    break;
                }
            }
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldConfig;
    use crate::freealg::FreePoly;

    fn f3() -> FieldConfig {
        FieldConfig::prime(3).unwrap()
    }

    fn beg(parts: &[(u32, u32)]) -> SSTerm {
        SSTerm::from_beg(parts.to_vec()).unwrap()
    }

    fn block(j1: u32, b1: u32, j2: u32, b2: u32) -> EndBlock {
        EndBlock { j1, b1, j2, b2 }
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(SSTerm::new(vec![], vec![]).is_err());
        assert!(SSTerm::from_beg(vec![(2, 1), (1, 1)]).is_err());
        assert!(SSTerm::from_beg(vec![(1, 0)]).is_err());
        // j-indices must ascend across blocks
        assert!(SSTerm::new(vec![], vec![block(1, 0, 2, 0), block(2, 0, 3, 0)]).is_err());
        assert!(SSTerm::new(vec![], vec![block(3, 0, 4, 0), block(1, 0, 2, 0)]).is_err());
        // beg and end vars disjoint
        assert!(SSTerm::new(vec![(1, 1)], vec![block(1, 0, 2, 0)]).is_err());
        assert!(SSTerm::new(vec![(5, 1)], vec![block(1, 0, 2, 0), block(3, 0, 4, 0)]).is_ok());
    }

    #[test]
    fn to_poly_examples() {
        let cfg = f3();
        assert_eq!(beg(&[(1, 2)]).to_poly(&cfg), FreePoly::word(&cfg, &[1, 1]));

        let u = SSTerm::new(vec![], vec![block(1, 1, 2, 0)]).unwrap();
        let expect = FreePoly::word(&cfg, &[1, 2, 1]).sub(&FreePoly::word(&cfg, &[2, 1, 1]));
        assert_eq!(u.to_poly(&cfg), expect);

        // x5 [x1,x2][x3,x4]: 2^lend = 4 words of degree 5
        let u = SSTerm::new(vec![(5, 1)], vec![block(1, 0, 2, 0), block(3, 0, 4, 0)]).unwrap();
        let p = u.to_poly(&cfg);
        assert_eq!(p.num_terms(), 4);
        assert!(p.terms().all(|(w, _)| w.len() == 5));
        assert_eq!(p.coefficient(&crate::freealg::Word::new(vec![5, 1, 2, 3, 4])), cfg.one());
        assert_eq!(p.coefficient(&crate::freealg::Word::new(vec![5, 2, 1, 4, 3])), cfg.one());
        assert_eq!(
            p.coefficient(&crate::freealg::Word::new(vec![5, 2, 1, 3, 4])),
            cfg.elem(-1)
        );
    }

    #[test]
    fn accessor_examples() {
        let u = beg(&[(1, 2)]);
        assert_eq!((u.lbeg(), u.lend(), u.deg()), (1, 0, 2));

        let v = SSTerm::new(vec![], vec![block(1, 1, 2, 0)]).unwrap();
        assert_eq!(v.lend(), 1);
        assert_eq!(v.deg_var(1), 2);
        assert_eq!(v.deg(), 3);

        let w = SSTerm::new(vec![(5, 1)], vec![block(1, 0, 2, 0), block(3, 0, 4, 0)]).unwrap();
        assert_eq!((w.lbeg(), w.lend(), w.deg()), (1, 2, 5));
    }

    #[test]
    fn compare_examples() {
        let x1 = beg(&[(1, 1)]);
        let x1sq = beg(&[(1, 2)]);
        assert_eq!(x1sq.compare(&x1), Ordering::Greater); // degree

        let x1x2 = beg(&[(1, 1), (2, 1)]);
        let c12 = SSTerm::new(vec![], vec![block(1, 0, 2, 0)]).unwrap();
        assert_eq!(x1x2.compare(&c12), Ordering::Greater); // shorter end wins

        // equal multidegree, beginning membership decides from the top index
        let u = SSTerm::new(vec![(2, 1), (4, 1)], vec![block(1, 0, 3, 0)]).unwrap();
        let v = SSTerm::new(vec![(1, 1), (4, 1)], vec![block(2, 0, 3, 0)]).unwrap();
        assert_eq!(u.compare(&v), Ordering::Greater);
        assert_eq!(v.compare(&u), Ordering::Less);

        assert_eq!(u.compare(&u), Ordering::Equal);
    }

    #[test]
    fn bss_examples() {
        // x1^2 [x2,x3] x2^2: beg degree 2 < 3, end degree 3 <= 3
        let u = SSTerm::new(vec![(1, 2)], vec![block(2, 2, 3, 0)]).unwrap();
        assert!(u.is_bss(3));
        assert!(!beg(&[(1, 3)]).is_bss(3));
        let v = SSTerm::new(vec![], vec![block(1, 3, 2, 0)]).unwrap();
        assert!(!v.is_bss(3)); // deg_x1 = 4 > 3
    }

    #[test]
    fn enumeration_examples() {
        let one_var: BTreeSet<u32> = [1].into();
        let terms = enumerate_ss(&one_var, 2, 3, false).unwrap();
        assert_eq!(terms, vec![beg(&[(1, 2)]), beg(&[(1, 1)])]);

        let two_vars: BTreeSet<u32> = [1, 2].into();
        let terms = enumerate_ss(&two_vars, 2, 3, false).unwrap();
        let end_forms: Vec<_> = terms.iter().filter(|u| u.lend() > 0).collect();
        assert_eq!(end_forms.len(), 1);
        assert_eq!(*end_forms[0], SSTerm::new(vec![], vec![block(1, 0, 2, 0)]).unwrap());

        assert!(enumerate_ss(&BTreeSet::new(), 5, 3, false).unwrap().is_empty());
    }

    #[test]
    fn order_is_total_on_enumerated_range() {
        let vars: BTreeSet<u32> = [1, 2, 3].into();
        let terms = enumerate_ss(&vars, 4, 3, false).unwrap();
        // strictly descending: trichotomy + antisymmetry on the whole range
        for i in 0..terms.len() {
            for j in 0..terms.len() {
                let ord = terms[i].compare(&terms[j]);
                match i.cmp(&j) {
                    Ordering::Less => assert_eq!(ord, Ordering::Greater),
                    Ordering::Equal => assert_eq!(ord, Ordering::Equal),
                    Ordering::Greater => assert_eq!(ord, Ordering::Less),
                }
            }
        }
        // transitivity on a subsampled triple set
        let step = (terms.len() / 24).max(1);
        let sample: Vec<_> = terms.iter().step_by(step).collect();
        for a in &sample {
            for b in &sample {
                for c in &sample {
                    if a.compare(b) == Ordering::Greater && b.compare(c) == Ordering::Greater {
                        assert_eq!(a.compare(c), Ordering::Greater);
                    }
                }
            }
        }
    }

    #[test]
    fn bss_respects_degree_bounds() {
        let vars: BTreeSet<u32> = [1, 2, 3].into();
        for u in enumerate_ss(&vars, 4, 3, true).unwrap() {
            for (_, a) in u.beg() {
                assert!((1..=2).contains(a));
            }
            for b in u.end() {
                assert!(b.b1 < 3 && b.b2 < 3);
            }
        }
    }

    #[test]
    fn to_poly_is_injective_on_enumerated_range() {
        let cfg = f3();
        let vars: BTreeSet<u32> = [1, 2].into();
        let terms = enumerate_ss(&vars, 3, 3, false).unwrap();
        let polys: Vec<FreePoly> = terms.iter().map(|u| u.to_poly(&cfg)).collect();
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                assert_ne!(polys[i], polys[j], "{} vs {}", terms[i], terms[j]);
            }
        }
    }
}

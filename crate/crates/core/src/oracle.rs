//! Independent brute-force validators: randomized evaluation batteries into
//! `G(m)`, bounded-degree span membership for substitution-closed sets via
//! exact row reduction over `F_q`, exhaustive scalar-point search for
//! commutative polynomials, and the literal expansion oracle behind the
//! closed-form dominant-part formulas.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldConfig, FieldElem};
use crate::freealg::{FreePoly, GrassmannAssignment, Word};
use crate::grassmann::{GrassmannElem, Mask};
use crate::{Error, Result};

/// A random element of `G(m)`: a uniform scalar plus at most `max_terms`
/// proper basis terms with nonzero coefficients.
pub fn random_grassmann(
    cfg: &FieldConfig,
    bound: u32,
    max_terms: u32,
    rng: &mut ChaCha8Rng,
) -> GrassmannElem {
    let elements = cfg.elements();
    let q = elements.len();
    let mut g = GrassmannElem::scalar(cfg, bound, elements[rng.gen_range(0..q)].clone());
    let k = rng.gen_range(0..=max_terms);
    for _ in 0..k {
        let mask = rng.gen_range(1..(1u128 << bound));
        let coeff = loop {
            let c = elements[rng.gen_range(0..q)].clone();
            if !c.is_zero() {
                break c;
            }
        };
        let indices = Mask(mask).indices();
        g = g.add(&GrassmannElem::basis_term(cfg, bound, &indices, coeff));
    }
    g
}

/// A random assignment covering `vars`, images as in [`random_grassmann`].
pub fn random_assignment(
    cfg: &FieldConfig,
    bound: u32,
    vars: &[u32],
    rng: &mut ChaCha8Rng,
) -> GrassmannAssignment {
    let mut sigma = GrassmannAssignment::new(cfg, bound);
    for &v in vars {
        sigma.insert(v, random_grassmann(cfg, bound, 4, rng)).unwrap();
    }
    sigma
}

/// Outcome of a randomized evaluation battery.
#[derive(Clone, Debug)]
pub struct BatteryReport {
    pub all_zero: bool,
    pub trials_run: u32,
    pub counterexample: Option<(GrassmannAssignment, GrassmannElem)>,
}

/// Evaluates `f` at `trials` seeded pseudorandom assignments into `G(m)`,
/// stopping at the first nonzero value. Reproducible for a fixed seed.
pub fn eval_battery(f: &FreePoly, bound: u32, trials: u32, seed: u64) -> BatteryReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<u32> = f.vars().into_iter().collect();
    let cfg = f.config().clone();
    for t in 0..trials {
        let sigma = random_assignment(&cfg, bound, &vars, &mut rng);
        let value = f.evaluate(&sigma).expect("battery assignment must be compatible");
        if !value.is_zero() {
            return BatteryReport {
                all_zero: false,
                trials_run: t + 1,
                counterexample: Some((sigma, value)),
            };
        }
    }
    BatteryReport { all_zero: true, trials_run: trials, counterexample: None }
}

/// How a generator's substitution instances may be combined: a linear span of
/// endomorphism images only, or additionally closed under two-sided monomial
/// multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    TSpace,
    TIdeal,
}

#[derive(Clone, Debug)]
pub struct SpanGenerator {
    pub poly: FreePoly,
    pub mode: GenMode,
    /// Per-generator instance degree cap; defaults to the problem cap. A
    /// combination may cancel words above the target degree, so a generator
    /// whose instances start heavy (high-degree tails) needs headroom here.
    pub degree_cap: Option<u32>,
}

impl SpanGenerator {
    pub fn t_space(poly: FreePoly) -> Self {
        SpanGenerator { poly, mode: GenMode::TSpace, degree_cap: None }
    }

    pub fn t_ideal(poly: FreePoly) -> Self {
        SpanGenerator { poly, mode: GenMode::TIdeal, degree_cap: None }
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.degree_cap = Some(cap);
        self
    }
}

/// Substitution image pool: monomials over `vars` up to `max_degree`, the
/// prime-subfield scalars, and (when `affine_shifts` is set) images of the
/// form `scalar + monomial`. The affine images matter: over a small field,
/// scalar rescaling cannot separate Frobenius-aliased multihomogeneous
/// components, but constant shifts can.
#[derive(Clone, Debug)]
pub struct SubstitutionPool {
    pub vars: Vec<u32>,
    pub max_degree: u32,
    pub affine_shifts: bool,
}

impl SubstitutionPool {
    /// Monomials of degree <= 2 over the target's variables plus one fresh
    /// variable, scalars, and affine shifts.
    pub fn default_for(target: &FreePoly) -> SubstitutionPool {
        let mut vars: Vec<u32> = target.vars().into_iter().collect();
        let fresh = vars.iter().copied().max().unwrap_or(0) + 1;
        vars.push(fresh);
        SubstitutionPool { vars, max_degree: 2, affine_shifts: true }
    }

    /// All pool images over the given field.
    fn images(&self, cfg: &FieldConfig) -> Vec<FreePoly> {
        // Ascending-letter monomials keep the pool small; arbitrary words are
        // reachable through the multipliers and the generators themselves.
        let mut monomials: Vec<Vec<u32>> = vec![vec![]];
        let mut frontier: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..self.max_degree {
            let mut next = Vec::new();
            for w in &frontier {
                let start = w.last().copied().unwrap_or(0);
                for &v in self.vars.iter().filter(|&&v| v >= start) {
                    let mut ext = w.clone();
                    ext.push(v);
                    next.push(ext);
                }
            }
            monomials.extend(next.iter().cloned());
            frontier = next;
        }
        let mut out = Vec::new();
        let p = cfg.p() as i64;
        out.push(FreePoly::zero(cfg));
        out.push(FreePoly::one(cfg));
        if self.affine_shifts {
            for lambda in 2..p {
                out.push(FreePoly::scalar(cfg, cfg.elem(lambda)));
            }
        }
        for m in monomials.iter().filter(|m| !m.is_empty()) {
            let base = FreePoly::word(cfg, m);
            out.push(base.clone());
            // shifts of single variables are what separates Frobenius-aliased
            // components; shifted higher monomials only inflate the pool
            if self.affine_shifts && m.len() == 1 {
                for lambda in 1..p {
                    out.push(base.add(&FreePoly::scalar(cfg, cfg.elem(lambda))));
                }
            }
        }
        out
    }

    /// Words over the pool variables, grouped by degree (order matters for
    /// two-sided multipliers).
    fn multipliers_by_degree(&self, cfg: &FieldConfig, max_degree: u32) -> Vec<Vec<FreePoly>> {
        let mut by_deg: Vec<Vec<FreePoly>> = vec![vec![FreePoly::one(cfg)]];
        let mut frontier: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..max_degree {
            let mut next = Vec::new();
            for w in &frontier {
                for &v in &self.vars {
                    let mut ext = w.clone();
                    ext.push(v);
                    next.push(ext);
                }
            }
            by_deg.push(next.iter().map(|w| FreePoly::word(cfg, w)).collect());
            frontier = next;
        }
        by_deg
    }
}

/// A bounded search problem: is `target` in the span generated by the
/// substitution instances of `generators` within the degree cap?
#[derive(Clone, Debug)]
pub struct SpanProblem {
    pub target: FreePoly,
    pub generators: Vec<SpanGenerator>,
    pub pool: SubstitutionPool,
    pub degree_cap: u32,
    pub max_instances: usize,
}

impl SpanProblem {
    pub fn new(target: FreePoly, generators: Vec<SpanGenerator>) -> SpanProblem {
        let pool = SubstitutionPool::default_for(&target);
        let degree_cap = target.degree();
        SpanProblem { target, generators, pool, degree_cap, max_instances: 100_000 }
    }
}

/// A found combination `target = sum of coeff * instance`, re-verified by
/// exact expansion before being returned.
#[derive(Clone, Debug)]
pub struct SpanCertificate {
    pub combination: Vec<(FieldElem, FreePoly)>,
    pub instances_considered: usize,
}

#[derive(Clone, Debug)]
pub enum SpanOutcome {
    Yes(SpanCertificate),
    /// Not expressible within this pool and cap. Never a global refutation.
    NoWithinBounds { instances_considered: usize },
}

impl SpanOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, SpanOutcome::Yes(_))
    }
}

type SparseVec = Vec<(usize, FieldElem)>;

/// `a + c * b` over sorted sparse vectors.
fn sparse_axpy(a: &SparseVec, c: &FieldElem, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let v = c.mul(&b[j].1);
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = a[i].1.add(&c.mul(&b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

struct EchelonBasis {
    rows: Vec<(SparseVec, SparseVec)>, // (columns, instance combination), lead coeff 1
    lead_to_row: HashMap<usize, usize>,
}

impl EchelonBasis {
    fn new() -> Self {
        EchelonBasis { rows: Vec::new(), lead_to_row: HashMap::new() }
    }

    /// Reduces `(cols, combo)` against the basis; returns the residual.
    fn reduce(&self, mut cols: SparseVec, mut combo: SparseVec) -> (SparseVec, SparseVec) {
        while let Some(&(lead, ref c)) = cols.first() {
            match self.lead_to_row.get(&lead) {
                Some(&ri) => {
                    let factor = c.neg();
                    cols = sparse_axpy(&cols, &factor, &self.rows[ri].0);
                    combo = sparse_axpy(&combo, &factor, &self.rows[ri].1);
                }
                None => break,
            }
        }
        (cols, combo)
    }

    fn insert(&mut self, cols: SparseVec, combo: SparseVec) {
        let (mut cols, mut combo) = self.reduce(cols, combo);
        if cols.is_empty() {
            return;
        }
        let inv = cols[0].1.inv().expect("lead coefficient is nonzero");
        for e in cols.iter_mut() {
            e.1 = e.1.mul(&inv);
        }
        for e in combo.iter_mut() {
            e.1 = e.1.mul(&inv);
        }
        self.lead_to_row.insert(cols[0].0, self.rows.len());
        self.rows.push((cols, combo));
    }
}

fn poly_columns(f: &FreePoly, index: &mut HashMap<Word, usize>) -> SparseVec {
    let mut cols: SparseVec = f
        .terms()
        .map(|(w, c)| {
            let next = index.len();
            let id = *index.entry(w.clone()).or_insert(next);
            (id, c.clone())
        })
        .collect();
    cols.sort_by_key(|&(i, _)| i);
    cols
}

fn poly_fingerprint(f: &FreePoly) -> Vec<(Vec<u32>, Vec<u64>)> {
    f.terms().map(|(w, c)| (w.letters().to_vec(), c.coords().to_vec())).collect()
}

/// Enumerates substitution instances of the generators (variables mapped into
/// the pool; two-sided monomial multipliers in T-ideal mode), drops instances
/// above the degree cap, row-reduces over `F_q`, and tests whether the target
/// lies in the row space. A `Yes` carries an exact, re-verified combination;
/// `NoWithinBounds` only refutes membership within this pool.
pub fn bounded_span_member(problem: &SpanProblem) -> Result<SpanOutcome> {
    let cfg = problem.target.config().clone();
    let images = problem.pool.images(&cfg);
    let mut instances: Vec<FreePoly> = Vec::new();
    let mut seen: HashSet<Vec<(Vec<u32>, Vec<u64>)>> = HashSet::new();

    for gen in &problem.generators {
        if gen.poly.config() != &cfg {
            return Err(Error::ConfigMismatch);
        }
        let gen_cap = gen.degree_cap.unwrap_or(problem.degree_cap);
        let gvars: Vec<u32> = gen.poly.vars().into_iter().collect();
        // max occurrences of each variable within a single word, for pruning
        let occ_bound: Vec<u32> = {
            let mut per_var: BTreeMap<u32, u32> = BTreeMap::new();
            for (w, _) in gen.poly.terms() {
                for (&v, &c) in &w.multidegree() {
                    let e = per_var.entry(v).or_insert(0);
                    *e = (*e).max(c);
                }
            }
            gvars.iter().map(|v| per_var.get(v).copied().unwrap_or(0)).collect()
        };
        let multipliers = match gen.mode {
            GenMode::TSpace => vec![vec![FreePoly::one(&cfg)]],
            GenMode::TIdeal => problem.pool.multipliers_by_degree(&cfg, gen_cap),
        };

        let mut choice = vec![0usize; gvars.len()];
        'assign: loop {
            // degree upper bound for this assignment
            let mut bound = 0u32;
            for (k, &ci) in choice.iter().enumerate() {
                bound += occ_bound[k] * images[ci].degree();
            }
            if bound <= gen_cap {
                let mut tau = BTreeMap::new();
                for (k, &v) in gvars.iter().enumerate() {
                    tau.insert(v, images[choice[k]].clone());
                }
                let inst = gen.poly.substitute(&tau);
                if !inst.is_zero() && inst.degree() <= gen_cap {
                    let budget = (gen_cap - inst.degree()) as usize;
                    for dl in 0..=budget.min(multipliers.len() - 1) {
                        for dr in 0..=(budget - dl).min(multipliers.len() - 1) {
                            for left in &multipliers[dl] {
                                for right in &multipliers[dr] {
                                    let row = left.mul(&inst).mul(right);
                                    if row.is_zero() {
                                        continue;
                                    }
                                    if seen.insert(poly_fingerprint(&row)) {
                                        instances.push(row);
                                        if instances.len() > problem.max_instances {
                                            return Err(Error::InstanceBudget(instances.len()));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            // odometer over image choices
            let mut i = 0;
            loop {
                if i == gvars.len() {
                    break 'assign;
                }
                choice[i] += 1;
                if choice[i] < images.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if gvars.is_empty() {
                break;
            }
        }
    }

    let mut word_index: HashMap<Word, usize> = HashMap::new();
    let mut basis = EchelonBasis::new();
    for (idx, inst) in instances.iter().enumerate() {
        let cols = poly_columns(inst, &mut word_index);
        basis.insert(cols, vec![(idx, cfg.one())]);
    }

    let target_cols = poly_columns(&problem.target, &mut word_index);
    let (residual, combo) = basis.reduce(target_cols, Vec::new());
    if !residual.is_empty() {
        return Ok(SpanOutcome::NoWithinBounds { instances_considered: instances.len() });
    }

    // target - sum(combo * instance) = 0, so the combination is -combo
    let mut combination = Vec::new();
    let mut check = FreePoly::zero(&cfg);
    for (idx, c) in combo {
        let coeff = c.neg();
        check = check.add(&instances[idx].scale(&coeff));
        combination.push((coeff, instances[idx].clone()));
    }
    if check != problem.target {
        return Err(Error::SoundnessTrap(
            "span certificate failed exact re-verification".into(),
        ));
    }
    Ok(SpanOutcome::Yes(SpanCertificate { combination, instances_considered: instances.len() }))
}

/// Result of exhaustive scalar-point search.
#[derive(Clone, Debug)]
pub enum PointSearch {
    Zero,
    Nonvanishing { point: Vec<(u32, FieldElem)>, value: FieldElem },
}

/// Exhaustively evaluates a commutative polynomial (ascending-letter words)
/// over all points of `k^n`, in lexicographic order with the last variable
/// varying fastest. Bounded to 6 variables.
pub fn field_identity_bruteforce(f: &FreePoly) -> Result<PointSearch> {
    let cfg = f.config().clone();
    for (w, _) in f.terms() {
        if w.letters().windows(2).any(|pair| pair[0] > pair[1]) {
            return Err(Error::Unsupported(
                "field_identity_bruteforce expects commutative (sorted) words".into(),
            ));
        }
    }
    let vars: Vec<u32> = f.vars().into_iter().collect();
    if vars.len() > 6 {
        return Err(Error::Unsupported("too many variables for exhaustive search".into()));
    }
    let elements = cfg.elements();
    let mut idx = vec![0usize; vars.len()];
    loop {
        let mut value = cfg.zero();
        for (w, c) in f.terms() {
            let mut term = c.clone();
            for &letter in w.letters() {
                let k = vars.iter().position(|&v| v == letter).unwrap();
                term = term.mul(&elements[idx[k]]);
            }
            value = value.add(&term);
        }
        if !value.is_zero() {
            let point =
                vars.iter().zip(&idx).map(|(&v, &i)| (v, elements[i].clone())).collect();
            return Ok(PointSearch::Nonvanishing { point, value });
        }
        // odometer, last variable fastest
        let mut k = vars.len();
        loop {
            if k == 0 {
                return Ok(PointSearch::Zero);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < elements.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Literal expansion of `(lambda + e_{2n+1}? + e_1e_2 + ... + e_{2n-1}e_{2n})^gamma`
/// by repeated multiplication, with its components broken out.
#[derive(Clone, Debug)]
pub struct DomPowerBrute {
    pub power: GrassmannElem,
    pub nominal_weight: u32,
    /// Component of the power at the nominal weight (may be zero).
    pub nominal_part: GrassmannElem,
    /// Actual dominant part of the power.
    pub dom: GrassmannElem,
    pub weight: u32,
}

pub fn brute_dom_power(
    cfg: &FieldConfig,
    lambda: &FieldElem,
    n: u32,
    gamma: u32,
    with_odd: bool,
) -> Result<DomPowerBrute> {
    if 2 * n + 1 > 20 || gamma > 12 || gamma == 0 {
        return Err(Error::Unsupported(
            "brute_dom_power bounds: 2n+1 <= 20, 1 <= gamma <= 12".into(),
        ));
    }
    if n == 0 && !with_odd {
        return Err(Error::Unsupported("need at least one generator".into()));
    }
    let bound = (2 * n + u32::from(with_odd)).max(1);
    let mut base = GrassmannElem::scalar(cfg, bound, lambda.clone());
    for eps in 1..=n {
        base = base.add(&GrassmannElem::basis_term(cfg, bound, &[2 * eps - 1, 2 * eps], cfg.one()));
    }
    if with_odd {
        base = base.add(&GrassmannElem::generator(cfg, bound, 2 * n + 1));
    }
    let power = base.pow(gamma);
    let nominal_weight = if with_odd {
        if gamma > n {
            2 * n + 1
        } else {
            2 * gamma
        }
    } else if gamma >= n {
        2 * n
    } else {
        2 * gamma
    };
    let nominal_part = power.weight_component(nominal_weight);
    let dom = power.dominant();
    let weight = power.weight();
    Ok(DomPowerBrute { power, nominal_weight, nominal_part, dom, weight })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::left_normed;

    fn f3() -> FieldConfig {
        FieldConfig::prime(3).unwrap()
    }

    fn xs(cfg: &FieldConfig, n: u32) -> Vec<FreePoly> {
        (1..=n).map(|i| FreePoly::variable(cfg, i)).collect()
    }

    #[test]
    fn battery_accepts_known_identity() {
        let cfg = f3();
        let x = FreePoly::variable(&cfg, 1);
        let f = x.pow(9).sub(&x.pow(3));
        let r = eval_battery(&f, 6, 300, 7);
        assert!(r.all_zero, "x^9 - x^3 must vanish identically on G(6)");

        let triple = left_normed(&xs(&cfg, 3));
        assert!(eval_battery(&triple, 6, 300, 7).all_zero);
    }

    #[test]
    fn battery_finds_commutator_counterexample() {
        let cfg = f3();
        let c = FreePoly::variable(&cfg, 1).commutator(&FreePoly::variable(&cfg, 2));
        let r = eval_battery(&c, 2, 500, 3);
        assert!(!r.all_zero);
        let (sigma, value) = r.counterexample.unwrap();
        assert_eq!(c.evaluate(&sigma).unwrap(), value);
        assert!(!value.is_zero());
        // reproducible for the same seed
        let r2 = eval_battery(&c, 2, 500, 3);
        let (_, value2) = r2.counterexample.unwrap();
        assert_eq!(value, value2);
    }

    #[test]
    fn span_certifies_block_swap_relation() {
        // [x1,x2][x3,x4] + [x1,x3][x2,x4] lies in the triple-commutator ideal.
        let cfg = f3();
        let x = xs(&cfg, 4);
        let target = x[0]
            .commutator(&x[1])
            .mul(&x[2].commutator(&x[3]))
            .add(&x[0].commutator(&x[2]).mul(&x[1].commutator(&x[3])));
        let gen = SpanGenerator::t_ideal(left_normed(&xs(&cfg, 3)));
        let outcome = bounded_span_member(&SpanProblem::new(target, vec![gen])).unwrap();
        assert!(outcome.is_yes());
    }

    #[test]
    fn span_rejects_short_commutator() {
        let cfg = f3();
        let x = xs(&cfg, 2);
        let target = x[0].commutator(&x[1]);
        let gen = SpanGenerator::t_ideal(left_normed(&xs(&cfg, 3)));
        let outcome = bounded_span_member(&SpanProblem::new(target, vec![gen])).unwrap();
        assert!(!outcome.is_yes());
    }

    #[test]
    fn point_search_examples() {
        let cfg = f3();
        // x^3 - x vanishes on F_3
        let x = FreePoly::variable(&cfg, 1);
        let fermat = x.pow(3).sub(&x);
        assert!(matches!(field_identity_bruteforce(&fermat).unwrap(), PointSearch::Zero));

        let f = x.pow(2).sub(&FreePoly::one(&cfg));
        match field_identity_bruteforce(&f).unwrap() {
            PointSearch::Nonvanishing { point, value } => {
                assert_eq!(point, vec![(1, cfg.zero())]);
                assert_eq!(value, cfg.elem(-1));
            }
            PointSearch::Zero => panic!("x^2 - 1 is not a field identity"),
        }

        // x2*(x1^2 - 1) first fails at (x1, x2) = (0, 1)
        let g = FreePoly::word(&cfg, &[1, 1, 2]).sub(&FreePoly::variable(&cfg, 2));
        match field_identity_bruteforce(&g).unwrap() {
            PointSearch::Nonvanishing { point, value } => {
                assert_eq!(point, vec![(1, cfg.zero()), (2, cfg.one())]);
                assert_eq!(value, cfg.elem(-1));
            }
            PointSearch::Zero => panic!("not an identity"),
        }
    }

    #[test]
    fn brute_power_examples() {
        let f5 = FieldConfig::prime(5).unwrap();
        let r = brute_dom_power(&f5, &f5.elem(3), 2, 2, false).unwrap();
        assert_eq!(r.nominal_part, GrassmannElem::basis_term(&f5, 4, &[1, 2, 3, 4], f5.elem(2)));
        assert_eq!(r.dom, r.nominal_part);

        let cfg = f3();
        let r = brute_dom_power(&cfg, &cfg.one(), 0, 2, true).unwrap();
        assert_eq!(r.nominal_part, GrassmannElem::basis_term(&cfg, 1, &[1], cfg.elem(2)));

        // lambda = 0 kills the top coefficient: nominal part zero, true
        // dominant part of lower weight
        let r = brute_dom_power(&f5, &f5.zero(), 1, 3, false).unwrap();
        assert!(r.nominal_part.is_zero());
        assert!(r.weight < r.nominal_weight);
    }
}

//! Exact arithmetic for the finite field `F_q`, `q = p^d`.
//!
//! Elements are coordinate vectors over `F_p` in the basis `1, t, ..., t^(d-1)`
//! where `t` is a root of the configured monic reduction polynomial. For
//! `d = 1` the reduction polynomial is unused and elements are plain residues.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::{Error, Result};

/// Built-in monic irreducible reduction polynomials, low degree first
/// (constant term, ..., leading 1). Covers every prime power up to 49.
const BUILTIN_REDUCTIONS: &[(u64, u32, &[u64])] = &[
    (2, 2, &[1, 1, 1]),       // t^2 + t + 1
    (2, 3, &[1, 1, 0, 1]),    // t^3 + t + 1
    (2, 4, &[1, 1, 0, 0, 1]), // t^4 + t + 1
    (3, 2, &[1, 0, 1]),       // t^2 + 1
    (3, 3, &[1, 2, 0, 1]),    // t^3 + 2t + 1
    (5, 2, &[2, 0, 1]),       // t^2 + 2
    (7, 2, &[1, 0, 1]),       // t^2 + 1
];

#[derive(Debug)]
struct Inner {
    p: u64,
    d: u32,
    q: u64,
    /// Monic, length `d + 1`; `[0, 1]` for the prime case.
    reduction: Vec<u64>,
}

/// Shared description of one `F_q`. Cheap to clone.
#[derive(Clone, Debug)]
pub struct FieldConfig(Arc<Inner>);

impl PartialEq for FieldConfig {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.d == other.0.d
                && self.0.reduction == other.0.reduction)
    }
}
impl Eq for FieldConfig {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Polynomial remainder of `f` by monic `g` over `F_p`. Coefficients ascending.
fn poly_rem(mut f: Vec<u64>, g: &[u64], p: u64) -> Vec<u64> {
    let dg = g.len() - 1;
    while f.len() > dg {
        let lead = *f.last().unwrap() % p;
        let shift = f.len() - 1 - dg;
        if lead != 0 {
            for (i, &gc) in g.iter().enumerate() {
                let idx = shift + i;
                f[idx] = (f[idx] + p - (lead * gc) % p) % p;
            }
        }
        f.pop();
    }
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Exhaustive root and trial-division check that `poly` (monic, degree `d`)
/// has no factor of degree `1..=d/2` over `F_p`. Exact for any `d`; only
/// small `d` is ever used here.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let d = poly.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    // Degree-1 factors: roots in F_p.
    for r in 0..p {
        let mut acc = 0u64;
        for &c in poly.iter().rev() {
            acc = (acc * r + c) % p;
        }
        if acc == 0 {
            return false;
        }
    }
    // Trial division by monic factors of degree 2..=d/2.
    for fd in 2..=d / 2 {
        let mut coeffs = vec![0u64; fd];
        loop {
            let mut cand = coeffs.clone();
            cand.push(1);
            if poly_rem(poly.to_vec(), &cand, p).is_empty() {
                return false;
            }
            // odometer over F_p^fd
            let mut i = 0;
            loop {
                if i == fd {
                    break;
                }
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == fd {
                break;
            }
        }
    }
    true
}

impl FieldConfig {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        Self::extension(p, 1, &[0, 1])
    }

    /// `F_(p^d)` with an explicit monic reduction polynomial (coefficients
    /// ascending, length `d + 1`). Irreducibility is checked exhaustively.
    pub fn extension(p: u64, d: u32, reduction: &[u64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if d == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        if reduction.len() != d as usize + 1 {
            return Err(Error::InvalidField(format!(
                "reduction polynomial must have degree {d}"
            )));
        }
        let reduction: Vec<u64> = reduction.iter().map(|&c| c % p).collect();
        if *reduction.last().unwrap() != 1 {
            return Err(Error::InvalidField("reduction polynomial must be monic".into()));
        }
        if d > 1 && !is_irreducible(&reduction, p) {
            return Err(Error::Reducible(format!(
                "degree-{d} reduction polynomial has a proper factor over F_{p}"
            )));
        }
        let mut q = 1u64;
        for _ in 0..d {
            q = q
                .checked_mul(p)
                .ok_or_else(|| Error::InvalidField("field size overflows u64".into()))?;
        }
        Ok(FieldConfig(Arc::new(Inner { p, d, q, reduction })))
    }

    /// Looks up the built-in reduction polynomial for `q = p^d`.
    pub fn with_builtin(p: u64, d: u32) -> Result<Self> {
        if d == 1 {
            return Self::prime(p);
        }
        for &(bp, bd, poly) in BUILTIN_REDUCTIONS {
            if bp == p && bd == d {
                return Self::extension(p, d, poly);
            }
        }
        Err(Error::Unsupported(format!(
            "no built-in reduction polynomial for q = {p}^{d}; supply one explicitly"
        )))
    }

    /// Resolves `(p, q)` as used by the command line: `q` must be a power of
    /// `p`, and extensions beyond the built-in table need a user polynomial.
    pub fn for_pq(p: u64, q: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut d = 0u32;
        let mut acc = 1u64;
        while acc < q {
            acc = acc
                .checked_mul(p)
                .ok_or_else(|| Error::Unsupported(format!("q = {q} is not a power of p = {p}")))?;
            d += 1;
        }
        if acc != q || d == 0 {
            return Err(Error::Unsupported(format!("q = {q} is not a power of p = {p}")));
        }
        Self::with_builtin(p, d)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.0.d
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn reduction(&self) -> &[u64] {
        &self.0.reduction
    }

    pub fn zero(&self) -> FieldElem {
        self.from_coords(&[])
    }

    pub fn one(&self) -> FieldElem {
        self.elem(1)
    }

    /// Embeds an integer via reduction mod `p`.
    pub fn elem(&self, value: i64) -> FieldElem {
        let p = self.0.p as i64;
        let r = ((value % p) + p) % p;
        self.from_coords(&[r as u64])
    }

    /// Builds an element from coordinates in the `t`-basis (missing high
    /// coordinates are zero).
    pub fn from_coords(&self, coords: &[u64]) -> FieldElem {
        let d = self.0.d as usize;
        assert!(coords.len() <= d, "too many coordinates for extension degree {d}");
        let mut c: SmallVec<[u64; 4]> = SmallVec::with_capacity(d);
        for i in 0..d {
            c.push(coords.get(i).copied().unwrap_or(0) % self.0.p);
        }
        FieldElem { cfg: self.clone(), coords: c }
    }

    /// The adjoined root `t` (only meaningful when `d > 1`).
    pub fn generator_t(&self) -> Result<FieldElem> {
        if self.0.d < 2 {
            return Err(Error::Unsupported(
                "the scalar symbol t requires an extension field".into(),
            ));
        }
        Ok(self.from_coords(&[0, 1]))
    }

    /// All `q` elements in coordinate-lexicographic order (low coordinate
    /// varies fastest).
    pub fn elements(&self) -> Vec<FieldElem> {
        let d = self.0.d as usize;
        let mut out = Vec::with_capacity(self.0.q as usize);
        let mut coords = vec![0u64; d];
        loop {
            out.push(self.from_coords(&coords));
            let mut i = 0;
            loop {
                if i == d {
                    return out;
                }
                coords[i] += 1;
                if coords[i] < self.0.p {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
        }
    }
}

/// An element of the configured `F_q`.
#[derive(Clone, Debug)]
pub struct FieldElem {
    cfg: FieldConfig,
    coords: SmallVec<[u64; 4]>,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.cfg == other.cfg && self.coords == other.coords
    }
}
impl Eq for FieldElem {}

impl std::hash::Hash for FieldElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.cfg.0.p.hash(state);
        self.cfg.0.d.hash(state);
        self.coords.hash(state);
    }
}

impl FieldElem {
    pub fn config(&self) -> &FieldConfig {
        &self.cfg
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    fn check_cfg(&self, other: &FieldElem) {
        assert!(self.cfg == other.cfg, "field configurations differ");
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        self.check_cfg(other);
        let p = self.cfg.0.p;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FieldElem { cfg: self.cfg.clone(), coords }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElem {
        let p = self.cfg.0.p;
        let coords = self.coords.iter().map(|&a| (p - a) % p).collect();
        FieldElem { cfg: self.cfg.clone(), coords }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        self.check_cfg(other);
        let p = self.cfg.0.p;
        let d = self.cfg.0.d as usize;
        if d == 1 {
            return FieldElem {
                cfg: self.cfg.clone(),
                coords: SmallVec::from_slice(&[(self.coords[0] * other.coords[0]) % p]),
            };
        }
        // Schoolbook product then reduction by the monic modulus.
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &a) in self.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coords.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        let red = &self.cfg.0.reduction;
        for k in (d..prod.len()).rev() {
            let lead = prod[k];
            if lead != 0 {
                prod[k] = 0;
                for (i, &rc) in red.iter().enumerate().take(d) {
                    let idx = k - d + i;
                    prod[idx] = (prod[idx] + p - (lead * rc) % p) % p;
                }
            }
        }
        prod.truncate(d);
        FieldElem { cfg: self.cfg.clone(), coords: SmallVec::from_vec(prod) }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        // a^(q-2) = a^(-1) in F_q.
        Ok(self.pow(self.cfg.0.q - 2))
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.cfg.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// The Frobenius map `x -> x^p`, a field automorphism.
    pub fn frobenius(&self) -> FieldElem {
        self.pow(self.cfg.0.p)
    }

    /// Scales by an integer (reduced mod `p`).
    pub fn scale_int(&self, k: i64) -> FieldElem {
        self.mul(&self.cfg.elem(k))
    }
}

impl fmt::Display for FieldElem {
    /// Prints prime-field elements as `[0, p)` representatives and extension
    /// elements in the `t`-basis, e.g. `2+t` or `1+2*t^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => {
                    if c == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "{c}*t")?;
                    }
                }
                _ => {
                    if c == 1 {
                        write!(f, "t^{i}")?;
                    } else {
                        write!(f, "{c}*t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

//! Normal-ordered elements of the Weyl algebra in `z_{ij}`, `z̄_{ij}` and their
//! derivatives, with [`CoeffPoly`] coefficients.

use super::coeff::{write_cmono, CMono, CoeffPoly, Indet, MAX_RANK, NCOEF};
use super::rational::GaussRat;
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

/// Variables per sector: `z_{ij}` with `1 ≤ j < i ≤ MAX_RANK`.
pub const NVAR: usize = MAX_RANK * (MAX_RANK - 1) / 2;
/// Slots in a monomial: hol z, anti z, hol ∂, anti ∂.
pub const NSLOT: usize = 4 * NVAR;

/// Exponent layout: `[z | z̄ | ∂ | ∂̄]`, each block indexed by [`var_index`].
/// The derived lexicographic order is the canonical term order.
pub type WMono = [u8; NSLOT];

static TERM_CAP: AtomicUsize = AtomicUsize::new(10_000_000);

/// Sets the intermediate term cap for products (default `10^7`).
pub fn set_term_cap(cap: usize) {
    TERM_CAP.store(cap, Ordering::Relaxed);
}

pub fn term_cap() -> usize {
    TERM_CAP.load(Ordering::Relaxed)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error("product exceeded the term cap ({cap} terms)")]
    TermCap { cap: usize },
    #[error("argument is not a polynomial in z (contains derivatives)")]
    NotPolynomial,
}

/// Position of `z_{ij}` (`i > j`, 1-based) within a sector block.
pub fn var_index(i: usize, j: usize) -> usize {
    assert!(j >= 1 && i > j && i <= MAX_RANK, "z_{i}{j} is not a lower-triangular variable");
    (i - 1) * (i - 2) / 2 + (j - 1)
}

/// Inverse of [`var_index`].
pub fn var_pair(idx: usize) -> (usize, usize) {
    let mut i = 2;
    while (i - 1) * i / 2 <= idx {
        i += 1;
    }
    (i, idx - (i - 1) * (i - 2) / 2 + 1)
}

fn slot(deriv: bool, anti: bool, i: usize, j: usize) -> usize {
    (deriv as usize) * 2 * NVAR + (anti as usize) * NVAR + var_index(i, j)
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeylElement {
    terms: BTreeMap<WMono, CoeffPoly>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct FlatKey(WMono, CMono);

type Flat = HashMap<FlatKey, GaussRat>;

fn flat_add(acc: &mut Flat, k: FlatKey, c: GaussRat) {
    match acc.entry(k) {
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::hash_map::Entry::Occupied(mut e) => {
            e.get_mut().add_assign_ref(&c);
        }
    }
}

impl WeylElement {
    pub fn zero() -> Self {
        WeylElement { terms: BTreeMap::new() }
    }

    pub fn scalar(c: CoeffPoly) -> Self {
        let mut w = Self::zero();
        if !c.is_zero() {
            w.terms.insert([0; NSLOT], c);
        }
        w
    }

    pub fn one() -> Self {
        Self::scalar(CoeffPoly::one())
    }

    pub fn int(n: i64) -> Self {
        Self::scalar(CoeffPoly::int(n))
    }

    pub fn indet(x: Indet) -> Self {
        Self::scalar(CoeffPoly::var(x))
    }

    fn generator(s: usize) -> Self {
        let mut m = [0u8; NSLOT];
        m[s] = 1;
        let mut w = Self::zero();
        w.terms.insert(m, CoeffPoly::one());
        w
    }

    /// The coordinate `z_{ij}` (or `z̄_{ij}`).
    pub fn z(i: usize, j: usize, anti: bool) -> Self {
        Self::generator(slot(false, anti, i, j))
    }

    /// The derivative `∂_{ij}` (or `∂̄_{ij}`).
    pub fn d(i: usize, j: usize, anti: bool) -> Self {
        Self::generator(slot(true, anti, i, j))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (WMono, CoeffPoly)>) -> Self {
        let mut w = Self::zero();
        for (m, c) in it {
            w.add_term(m, &c);
        }
        w
    }

    fn add_term(&mut self, m: WMono, c: &CoeffPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct Weyl monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WMono, &CoeffPoly)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &CoeffPoly) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut w = Self::zero();
        for (m, a) in &self.terms {
            w.add_term(*m, &(a * c));
        }
        w
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&CoeffPoly::int(n))
    }

    /// Highest power of the coefficient indeterminate `x` occurring.
    pub fn degree_in(&self, x: Indet) -> usize {
        self.terms.values().map(|c| c.degree_in(x)).max().unwrap_or(0)
    }

    /// Coefficient of `x^k`, as a Weyl element free of `x`.
    pub fn coefficient_of(&self, x: Indet, k: u8) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, c.coefficient_of(x, k))))
    }

    /// Replace a coefficient indeterminate by a polynomial.
    pub fn substitute(&self, x: Indet, val: &CoeffPoly) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, c.substitute(x, val))))
    }

    /// True if no term contains a derivative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m[2 * NVAR..].iter().all(|&e| e == 0))
    }

    /// Normal-ordered product `self · o`.
    pub fn try_mul(&self, o: &WeylElement) -> Result<WeylElement, WeylError> {
        let cap = term_cap();
        let left: Vec<(&WMono, &CoeffPoly)> = self.terms.iter().collect();
        let right: Vec<(&WMono, &CoeffPoly)> = o.terms.iter().collect();
        let work = left.len() * right.len();
        let acc = if work > 4096 && left.len() > 1 {
            let chunk = left.len().div_ceil(rayon::current_num_threads().max(1) * 2).max(1);
            let parts: Result<Vec<Flat>, WeylError> =
                left.par_chunks(chunk).map(|ch| mul_block(ch, &right, cap)).collect();
            let mut parts = parts?;
            let mut acc = parts.pop().unwrap_or_default();
            for p in parts {
                for (k, c) in p {
                    flat_add(&mut acc, k, c);
                }
                if acc.len() > cap {
                    return Err(WeylError::TermCap { cap });
                }
            }
            acc
        } else {
            mul_block(&left, &right, cap)?
        };
        let mut grouped: BTreeMap<WMono, Vec<(CMono, GaussRat)>> = BTreeMap::new();
        for (FlatKey(w, c), g) in acc {
            if !g.is_zero() {
                grouped.entry(w).or_default().push((c, g));
            }
        }
        let mut out = WeylElement::zero();
        for (w, cs) in grouped {
            let cp = CoeffPoly::from_terms(cs);
            if !cp.is_zero() {
                out.terms.insert(w, cp);
            }
        }
        Ok(out)
    }

    /// Act on a polynomial in the coordinates.
    pub fn try_apply(&self, p: &WeylElement) -> Result<WeylElement, WeylError> {
        if !p.is_polynomial() {
            return Err(WeylError::NotPolynomial);
        }
        let prod = self.try_mul(p)?;
        Ok(WeylElement {
            terms: prod.terms.into_iter().filter(|(m, _)| m[2 * NVAR..].iter().all(|&e| e == 0)).collect(),
        })
    }
}

fn mul_block(left: &[(&WMono, &CoeffPoly)], right: &[(&WMono, &CoeffPoly)], cap: usize) -> Result<Flat, WeylError> {
    let mut acc: Flat = HashMap::new();
    let mut expansions: Vec<(WMono, i64)> = Vec::new();
    for (m1, c1) in left {
        for (m2, c2) in right {
            leibniz(m1, m2, &mut expansions);
            let cc: Vec<(CMono, GaussRat)> = {
                let mut v = Vec::with_capacity(c1.len() * c2.len());
                for (a, x) in c1.terms() {
                    for (b, y) in c2.terms() {
                        let mut m = *a;
                        for k in 0..NCOEF {
                            m[k] += b[k];
                        }
                        v.push((m, x * y));
                    }
                }
                v
            };
            for (wm, n) in &expansions {
                let g = GaussRat::from_int(*n);
                for (cm, cv) in &cc {
                    let val = if *n == 1 { cv.clone() } else { cv * &g };
                    flat_add(&mut acc, FlatKey(*wm, *cm), val);
                }
            }
            if acc.len() > cap {
                return Err(WeylError::TermCap { cap });
            }
        }
    }
    Ok(acc)
}

fn falling(n: u8, k: u8) -> i64 {
    (0..k as i64).map(|t| n as i64 - t).product()
}

fn binom(n: u8, k: u8) -> i64 {
    let mut r: i64 = 1;
    for t in 0..k as i64 {
        r = r * (n as i64 - t) / (t + 1);
    }
    r
}

/// Expand `(z^{a} ∂^{b}) (z^{c} ∂^{d})` into normal-ordered monomials with
/// integer weights, using `∂^b z^c = Σ_k C(b,k) c!/(c−k)! z^{c−k} ∂^{b−k}` per variable.
fn leibniz(m1: &WMono, m2: &WMono, out: &mut Vec<(WMono, i64)>) {
    out.clear();
    let mut base = [0u8; NSLOT];
    for s in 0..NSLOT {
        base[s] = m1[s] + m2[s];
    }
    out.push((base, 1));
    for v in 0..2 * NVAR {
        let b = m1[2 * NVAR + v];
        let c = m2[v];
        if b == 0 || c == 0 {
            continue;
        }
        let kmax = b.min(c);
        let prev = std::mem::take(out);
        for (m, w) in prev {
            for k in 0..=kmax {
                let mut mm = m;
                mm[v] -= k;
                mm[2 * NVAR + v] -= k;
                out.push((mm, w * binom(b, k) * falling(c, k)));
            }
        }
    }
}

impl<'a> std::ops::Add<&'a WeylElement> for &'a WeylElement {
    type Output = WeylElement;
    fn add(self, o: &WeylElement) -> WeylElement {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c);
        }
        r
    }
}

impl<'a> std::ops::Sub<&'a WeylElement> for &'a WeylElement {
    type Output = WeylElement;
    fn sub(self, o: &WeylElement) -> WeylElement {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, &-c);
        }
        r
    }
}

impl std::ops::Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        WeylElement { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl<'a> std::ops::Mul<&'a WeylElement> for &'a WeylElement {
    type Output = WeylElement;
    /// Panics if the product exceeds the term cap; use [`WeylElement::try_mul`] to handle that.
    fn mul(self, o: &WeylElement) -> WeylElement {
        self.try_mul(o).expect("Weyl product")
    }
}

fn slot_name(s: usize) -> String {
    let block = s / NVAR;
    let (i, j) = var_pair(s % NVAR);
    let prefix = ["z", "zb", "d", "db"][block];
    format!("{prefix}{i}{j}")
}

impl fmt::Display for WeylElement {
    /// Canonical dump: `coef*indets*vars` terms joined by ` + `, coefficients as `(p+qi)/r`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (wm, cp) in &self.terms {
            for (cm, c) in cp.terms() {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "{}", c.canonical_string())?;
                write_cmono(f, cm)?;
                for (s, &e) in wm.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => write!(f, "*{}", slot_name(s))?,
                        _ => write!(f, "*{}^{}", slot_name(s), e)?,
                    }
                }
            }
        }
        Ok(())
    }
}

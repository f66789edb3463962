//! Commutative coefficient polynomials in the spectral parameters `u`, `v`
//! and the representation parameters `σ_j`, `σ̄_j`, over Gaussian rationals.

use super::rational::{GaussRat, Q};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

/// Largest rank whose parameters and variables fit in the fixed layouts.
pub const MAX_RANK: usize = 6;
/// Number of coefficient indeterminates: `u`, `v`, `σ_1..σ_6`, `σ̄_1..σ̄_6`.
pub const NCOEF: usize = 2 + 2 * MAX_RANK;

/// Exponent vector over the coefficient indeterminates.
pub type CMono = [u8; NCOEF];

/// A coefficient indeterminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Indet {
    U,
    V,
    Sigma(usize),
    SigmaBar(usize),
}

impl Indet {
    pub fn slot(self) -> usize {
        match self {
            Indet::U => 0,
            Indet::V => 1,
            Indet::Sigma(j) => {
                assert!((1..=MAX_RANK).contains(&j));
                1 + j
            }
            Indet::SigmaBar(j) => {
                assert!((1..=MAX_RANK).contains(&j));
                1 + MAX_RANK + j
            }
        }
    }

    fn name(slot: usize) -> String {
        match slot {
            0 => "u".into(),
            1 => "v".into(),
            s if s <= 1 + MAX_RANK => format!("s{}", s - 1),
            s => format!("sb{}", s - 1 - MAX_RANK),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CoeffPoly {
    terms: BTreeMap<CMono, GaussRat>,
}

impl CoeffPoly {
    pub fn zero() -> Self {
        CoeffPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: GaussRat) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert([0; NCOEF], c);
        }
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(GaussRat::from_int(n))
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn var(x: Indet) -> Self {
        let mut m = [0u8; NCOEF];
        m[x.slot()] = 1;
        let mut p = Self::zero();
        p.terms.insert(m, GaussRat::one());
        p
    }

    /// `x + c` for an integer shift `c`.
    pub fn var_plus(x: Indet, c: i64) -> Self {
        &Self::var(x) + &Self::int(c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CMono, &GaussRat)> {
        self.terms.iter()
    }

    pub fn from_terms(it: impl IntoIterator<Item = (CMono, GaussRat)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn add_term(&mut self, m: CMono, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Returns the constant term if the polynomial has no indeterminates.
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        CoeffPoly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn degree_in(&self, x: Indet) -> usize {
        let s = x.slot();
        self.terms.keys().map(|m| m[s] as usize).max().unwrap_or(0)
    }

    /// Coefficient of `x^k`, as a polynomial in the remaining indeterminates.
    pub fn coefficient_of(&self, x: Indet, k: u8) -> Self {
        let s = x.slot();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m[s] == k {
                let mut m2 = *m;
                m2[s] = 0;
                out.add_term(m2, c);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Replace the indeterminate `x` by the polynomial `val`.
    pub fn substitute(&self, x: Indet, val: &CoeffPoly) -> Self {
        let s = x.slot();
        if self.terms.keys().all(|m| m[s] == 0) {
            return self.clone();
        }
        let maxd = self.degree_in(x) as u32;
        let powers: Vec<CoeffPoly> = (0..=maxd).map(|e| val.pow(e)).collect();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m[s] as usize;
            let mut rest = *m;
            rest[s] = 0;
            if e == 0 {
                out.add_term(rest, c);
                continue;
            }
            for (pm, pc) in powers[e].terms() {
                let mut mm = rest;
                for k in 0..NCOEF {
                    mm[k] += pm[k];
                }
                out.add_term(mm, &(c * pc));
            }
        }
        out
    }

    /// Numeric evaluation with values indexed by indeterminate slot.
    pub fn eval(&self, vals: &[Complex64; NCOEF]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_c64();
            for (k, &e) in m.iter().enumerate() {
                if e > 0 {
                    t *= vals[k].powu(e as u32);
                }
            }
            acc += t;
        }
        acc
    }

    pub(crate) fn add_assign(&mut self, o: &CoeffPoly) {
        for (m, c) in &o.terms {
            self.add_term(*m, c);
        }
    }
}

impl<'a> std::ops::Add<&'a CoeffPoly> for &'a CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, o: &CoeffPoly) -> CoeffPoly {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }
}

impl<'a> std::ops::Sub<&'a CoeffPoly> for &'a CoeffPoly {
    type Output = CoeffPoly;
    fn sub(self, o: &CoeffPoly) -> CoeffPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, &-c);
        }
        r
    }
}

impl std::ops::Neg for &CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        CoeffPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl<'a> std::ops::Mul<&'a CoeffPoly> for &'a CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, o: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m = *m1;
                for k in 0..NCOEF {
                    m[k] += m2[k];
                }
                out.add_term(m, &(c1 * c2));
            }
        }
        out
    }
}

pub(crate) fn write_cmono(f: &mut impl fmt::Write, m: &CMono) -> fmt::Result {
    for (k, &e) in m.iter().enumerate() {
        if e == 1 {
            write!(f, "*{}", Indet::name(k))?;
        } else if e > 1 {
            write!(f, "*{}^{}", Indet::name(k), e)?;
        }
    }
    Ok(())
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c.canonical_string())?;
            write_cmono(f, m)?;
        }
        Ok(())
    }
}

/// Convenience: `σ_j` or `σ̄_j` depending on the sector flag.
pub fn sigma(j: usize, anti: bool) -> CoeffPoly {
    if anti {
        CoeffPoly::var(Indet::SigmaBar(j))
    } else {
        CoeffPoly::var(Indet::Sigma(j))
    }
}

/// The rational `p/q` as a constant polynomial.
pub fn rat(p: i64, q: i64) -> CoeffPoly {
    CoeffPoly::constant(GaussRat::from_q(Q::new(p, q), Q::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_composes() {
        let u = CoeffPoly::var(Indet::U);
        let p = &u.pow(2) + &CoeffPoly::var(Indet::Sigma(1));
        let um1 = CoeffPoly::var_plus(Indet::U, -1);
        let twice = p.substitute(Indet::U, &um1).substitute(Indet::U, &um1);
        let once = p.substitute(Indet::U, &CoeffPoly::var_plus(Indet::U, -2));
        assert_eq!(twice, once);
    }

    #[test]
    fn cancellation_removes_terms() {
        let u = CoeffPoly::var(Indet::U);
        assert!((&u - &u).is_zero());
        assert_eq!(format!("{}", &u + &rat(1, 2)), "(1+0i)/2 + (1+0i)/1*u");
    }
}

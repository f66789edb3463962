//! Quantum minors `T^{i_1…i_m}_{j_1…j_m}(u) = Σ_τ sgn τ · T(u−m+1)^{i_τ(1)}_{j_1} ⋯ T(u)^{i_τ(m)}_{j_m}`.

use super::loperator::OperatorMatrix;
use crate::weyl::{WeylElement, WeylError};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MinorError {
    #[error("index constraint violated: {0}")]
    Constraint(String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// Row and column index lists of a minor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinorSpec {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorSpec {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        assert_eq!(rows.len(), cols.len(), "minor must be square");
        MinorSpec { rows, cols }
    }

    /// Sorted indices with the accumulated permutation sign, or `None` if an
    /// index repeats (the minor vanishes).
    pub fn canonical(&self) -> Option<(i64, MinorSpec)> {
        let (sr, rows) = sort_with_sign(&self.rows)?;
        let (sc, cols) = sort_with_sign(&self.cols)?;
        Some((sr * sc, MinorSpec { rows, cols }))
    }
}

fn sort_with_sign(v: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut w = v.to_vec();
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] == w[j + 1] {
                return None;
            }
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((sign, w))
}

/// Minor evaluator bound to one operator matrix, memoizing sub-minors.
pub struct MinorEngine<'a> {
    pub op: &'a OperatorMatrix,
    memo: HashMap<(Vec<usize>, Vec<usize>), WeylElement>,
}

impl<'a> MinorEngine<'a> {
    pub fn new(op: &'a OperatorMatrix) -> Self {
        MinorEngine { op, memo: HashMap::new() }
    }

    /// The defining alternating sum in the given index order, without any
    /// canonicalization (repeated indices are expanded literally).
    pub fn raw(&mut self, rows: &[usize], cols: &[usize]) -> Result<WeylElement, MinorError> {
        let m = cols.len();
        if m == 0 {
            return Ok(WeylElement::one());
        }
        let key = (rows.to_vec(), cols.to_vec());
        if let Some(w) = self.memo.get(&key) {
            return Ok(w.clone());
        }
        let mut acc = WeylElement::zero();
        for a in 0..m {
            let first = self.op.shifted_entry(rows[a], cols[0], m as i64 - 1);
            if first.is_zero() {
                continue;
            }
            let rest_rows: Vec<usize> = rows.iter().enumerate().filter(|(k, _)| *k != a).map(|(_, &r)| r).collect();
            let sub = self.raw(&rest_rows, &cols[1..])?;
            if sub.is_zero() {
                continue;
            }
            let term = first.try_mul(&sub)?;
            acc = if a % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        self.memo.insert(key, acc.clone());
        Ok(acc)
    }

    /// Minor with canonical sign handling; repeated indices give exact zero.
    pub fn minor(&mut self, spec: &MinorSpec) -> Result<WeylElement, MinorError> {
        if spec.rows.iter().chain(&spec.cols).any(|&i| i == 0 || i > self.op.n) {
            return Err(MinorError::Constraint(format!("indices {spec:?} outside 1..{}", self.op.n)));
        }
        match spec.canonical() {
            None => Ok(WeylElement::zero()),
            Some((sign, c)) => {
                let w = self.raw(&c.rows, &c.cols)?;
                Ok(if sign < 0 { -&w } else { w })
            }
        }
    }

    pub fn minor_of(&mut self, rows: &[usize], cols: &[usize]) -> Result<WeylElement, MinorError> {
        self.minor(&MinorSpec::new(rows.to_vec(), cols.to_vec()))
    }

    /// `A_m(u) = T^{1…m}_{1…m}(u)`.
    pub fn corner(&mut self, m: usize) -> Result<WeylElement, MinorError> {
        let idx: Vec<usize> = (1..=m).collect();
        self.minor_of(&idx, &idx)
    }

    /// `B_{rab}(u) = L^{1…r}_{1,…,â,…,r,b}` for `1 ≤ a ≤ r < b ≤ n`.
    pub fn b_rab(&mut self, r: usize, a: usize, b: usize) -> Result<WeylElement, MinorError> {
        if !(1 <= a && a <= r && r < b && b <= self.op.n) {
            return Err(MinorError::Constraint(format!("B_rab needs 1 ≤ a ≤ r < b ≤ n, got r={r}, a={a}, b={b}")));
        }
        let rows: Vec<usize> = (1..=r).collect();
        let mut cols: Vec<usize> = (1..=r).filter(|&c| c != a).collect();
        cols.push(b);
        self.minor_of(&rows, &cols)
    }

    /// `B_r(u) = B_{r,r,r+1}(u)`.
    pub fn b_r(&mut self, r: usize) -> Result<WeylElement, MinorError> {
        self.b_rab(r, r, r + 1)
    }

    /// `L^{1…r}_{1,…,â_1,…,â_2,…,r,b_1,b_2}` for `a_1 < a_2 ≤ r < b_1 < b_2 ≤ n`.
    pub fn two_skip(
        &mut self,
        r: usize,
        a1: usize,
        a2: usize,
        b1: usize,
        b2: usize,
    ) -> Result<WeylElement, MinorError> {
        if !(1 <= a1 && a1 < a2 && a2 <= r && r < b1 && b1 < b2 && b2 <= self.op.n) {
            return Err(MinorError::Constraint(format!(
                "two-skip minor needs a1 < a2 ≤ r < b1 < b2 ≤ n, got r={r}, a=({a1},{a2}), b=({b1},{b2})"
            )));
        }
        let rows: Vec<usize> = (1..=r).collect();
        let mut cols: Vec<usize> = (1..=r).filter(|&c| c != a1 && c != a2).collect();
        cols.push(b1);
        cols.push(b2);
        self.minor_of(&rows, &cols)
    }
}

pub fn quantum_minor(op: &OperatorMatrix, spec: &MinorSpec) -> Result<WeylElement, MinorError> {
    MinorEngine::new(op).minor(spec)
}

pub fn corner_minor(op: &OperatorMatrix, m: usize) -> Result<WeylElement, MinorError> {
    MinorEngine::new(op).corner(m)
}

pub fn b_minor(op: &OperatorMatrix, r: usize) -> Result<WeylElement, MinorError> {
    MinorEngine::new(op).b_r(r)
}

pub fn b_rab_minor(op: &OperatorMatrix, r: usize, a: usize, b: usize) -> Result<WeylElement, MinorError> {
    MinorEngine::new(op).b_rab(r, a, b)
}

pub fn two_skip_minor(
    op: &OperatorMatrix,
    r: usize,
    a1: usize,
    a2: usize,
    b1: usize,
    b2: usize,
) -> Result<WeylElement, MinorError> {
    MinorEngine::new(op).two_skip(r, a1, a2, b1, b2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::Sector;
    use crate::weyl::{sigma, CoeffPoly, Indet};
    use crate::yangian::loperator::build_l_operator;

    #[test]
    fn order_one_is_the_entry() {
        let l = build_l_operator(3, Sector::Hol);
        assert_eq!(&quantum_minor(&l, &MinorSpec::new(vec![2], vec![3])).unwrap(), l.get(2, 3));
    }

    #[test]
    fn gl2_determinant_is_central() {
        let l = build_l_operator(2, Sector::Hol);
        let a2 = corner_minor(&l, 2).unwrap();
        let u = CoeffPoly::var(Indet::U);
        let expect = &(&u - &sigma(1, false)) * &(&u - &sigma(2, false));
        assert_eq!(a2, WeylElement::scalar(expect));
    }

    #[test]
    fn row_swap_negates_and_repeats_vanish() {
        let l = build_l_operator(3, Sector::Hol);
        let mut e = MinorEngine::new(&l);
        let a = e.minor_of(&[1, 2], &[1, 3]).unwrap();
        let b = e.minor_of(&[2, 1], &[1, 3]).unwrap();
        assert_eq!(a, -&b);
        assert!(e.minor_of(&[1, 1], &[1, 3]).unwrap().is_zero());
        assert!(e.raw(&[2, 2], &[1, 3]).unwrap().is_zero());
    }

    #[test]
    fn b1_is_minus_derivative() {
        for n in 2..=4 {
            let l = build_l_operator(n, Sector::Hol);
            assert_eq!(b_minor(&l, 1).unwrap(), -&WeylElement::d(2, 1, false));
        }
    }

    #[test]
    fn two_skip_has_no_u() {
        let l = build_l_operator(4, Sector::Hol);
        let w = two_skip_minor(&l, 2, 1, 2, 3, 4).unwrap();
        assert!(!w.is_zero());
        assert_eq!(w.degree_in(Indet::U), 0);
        assert!(two_skip_minor(&l, 2, 2, 1, 3, 4).is_err());
    }

    #[test]
    fn constraint_errors() {
        let l = build_l_operator(3, Sector::Hol);
        assert!(b_rab_minor(&l, 2, 3, 3).is_err());
        assert!(b_rab_minor(&l, 2, 1, 4).is_err());
    }
}

//! Numerical Gelfand–Tsetlin eigenfunctions for ranks 2–4 and Weyl operators
//! applied to them through Wirtinger finite differences.

pub mod psi;
pub mod suites;

use crate::complexfield::gamma::GammaError;
use crate::complexfield::quad::QuadError;
use crate::kernels::KernelError;
use crate::schemes::{SchemeError, Sector};
use crate::weyl::{var_index, var_pair, CoeffPoly, WeylElement, MAX_RANK, NCOEF, NVAR};
use crate::yangian::minor::MinorError;
use num_complex::Complex64 as C;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

pub use psi::{psi_gl2, psi_gl3, psi_gl4, Gl4Grid, Gl4Integrator, PsiEval};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EigenError {
    #[error("rank {0} is not supported here")]
    Rank(usize),
    #[error("coordinate z_{i}{j} is zero")]
    ZeroCoordinate { i: usize, j: usize },
    #[error("stencil: {0}")]
    Stencil(String),
    #[error("resource budget: {0}")]
    Budget(String),
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Minor(#[from] MinorError),
}

/// Lower-triangular coordinates `z_{ij}`, `1 ≤ j < i ≤ n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointZ {
    pub n: usize,
    coords: Vec<C>,
}

impl PointZ {
    pub fn new(n: usize) -> Self {
        assert!((2..=MAX_RANK).contains(&n));
        PointZ { n, coords: vec![C::new(1.0, 0.0); n * (n - 1) / 2] }
    }

    pub fn get(&self, i: usize, j: usize) -> C {
        self.coords[var_index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C) {
        self.coords[var_index(i, j)] = z;
    }

    pub fn with(&self, i: usize, j: usize, z: C) -> Self {
        let mut p = self.clone();
        p.set(i, j, z);
        p
    }

    /// Coordinate by flat index (the `var_index` order).
    pub fn at(&self, idx: usize) -> C {
        self.coords[idx]
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Parse `"z21=1+0.3i,z31=-0.5i,..."`; unspecified coordinates stay 1.
    pub fn parse(n: usize, text: &str) -> Result<Self, String> {
        let mut p = PointZ::new(n);
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, val) = part.split_once('=').ok_or_else(|| format!("expected zij=value, got {part:?}"))?;
            let digits: Vec<usize> = name
                .trim()
                .trim_start_matches('z')
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| format!("bad coordinate name {name:?}"))?;
            if digits.len() != 2 || digits[1] >= digits[0] || digits[0] > n || digits[1] == 0 {
                return Err(format!("coordinate {name:?} is not z_ij with 1 ≤ j < i ≤ {n}"));
            }
            let z: C = val.trim().replace(' ', "").parse().map_err(|_| format!("bad complex value {val:?}"))?;
            p.set(digits[0], digits[1], z);
        }
        Ok(p)
    }

    /// Random point with moduli log-uniform in `window` and uniform arguments.
    pub fn random(rng: &mut ChaCha8Rng, n: usize, window: (f64, f64)) -> Self {
        let mut p = PointZ::new(n);
        for c in p.coords.iter_mut() {
            let r = (rng.gen_range(window.0.ln()..window.1.ln())).exp();
            let th = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            *c = C::from_polar(r, th);
        }
        p
    }

    /// Scale the first-column coordinates `z_{k1}` by `t`.
    pub fn scale_first_column(&self, t: C) -> Self {
        let mut p = self.clone();
        for k in 2..=self.n {
            p.set(k, 1, self.get(k, 1) * t);
        }
        p
    }
}

/// Central-difference Wirtinger derivatives `∂ = (∂_x − i∂_y)/2`, `∂̄ = (∂_x + i∂_y)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WirtingerStencil {
    /// Step relative to the coordinate modulus.
    pub h: f64,
    /// Accuracy order, 2 or 4.
    pub order: usize,
    pub richardson: bool,
}

impl Default for WirtingerStencil {
    fn default() -> Self {
        WirtingerStencil { h: 1e-3, order: 4, richardson: true }
    }
}

/// Fornberg weights for the `d`-th derivative at 0 on integer offsets `xs`.
fn fd_weights(d: usize, xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; d + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    for i in 1..n {
        let mut c2 = 1.0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            for k in (0..=d.min(i)).rev() {
                let prev_i = if k > 0 { c[i - 1][k - 1] } else { 0.0 };
                if j == i - 1 {
                    c[i][k] = c1 * (k as f64 * prev_i - xs[i - 1] * c[i - 1][k]) / c2;
                }
            }
            for k in (0..=d.min(i)).rev() {
                let prev_j = if k > 0 { c[j][k - 1] } else { 0.0 };
                c[j][k] = (xs[i] * c[j][k] - k as f64 * prev_j) / c3;
            }
        }
        c1 = c2;
    }
    c.iter().map(|row| row[d]).collect()
}

/// Offsets and weights (unit step) of the centered stencil for `∂^d` at the given order.
fn stencil_1d(d: usize, order: usize) -> Vec<(i64, f64)> {
    if d == 0 {
        return vec![(0, 1.0)];
    }
    let m = ((d - 1) / 2 + order / 2) as i64;
    let xs: Vec<f64> = (-m..=m).map(|k| k as f64).collect();
    fd_weights(d, &xs)
        .into_iter()
        .enumerate()
        .map(|(i, w)| (i as i64 - m, w))
        .filter(|(_, w)| w.abs() > 1e-14)
        .collect()
}

/// `((X − iY)/2)^p ((X + iY)/2)^q` as coefficients of `X^a Y^b`.
fn wirtinger_expand(p: usize, q: usize) -> Vec<(usize, usize, C)> {
    let mut poly: HashMap<(usize, usize), C> = HashMap::new();
    poly.insert((0, 0), C::new(1.0, 0.0));
    let factors = std::iter::repeat_n(C::new(0.0, -0.5), p).chain(std::iter::repeat_n(C::new(0.0, 0.5), q));
    for fy in factors {
        let mut next: HashMap<(usize, usize), C> = HashMap::new();
        for (&(a, b), &c) in &poly {
            *next.entry((a + 1, b)).or_default() += c * 0.5;
            *next.entry((a, b + 1)).or_default() += c * fy;
        }
        poly = next;
    }
    let mut out: Vec<_> = poly.into_iter().filter(|(_, c)| c.norm() > 0.0).map(|((a, b), c)| (a, b, c)).collect();
    out.sort_by_key(|t| (t.0, t.1));
    out
}

/// Derivative multi-index: per variable `(hol order, anti order)`.
type DerivKey = Vec<(usize, u8, u8)>;

fn deriv_key(m: &[u8]) -> DerivKey {
    (0..NVAR)
        .filter_map(|v| {
            let p = m[2 * NVAR + v];
            let q = m[3 * NVAR + v];
            (p + q > 0).then_some((v, p, q))
        })
        .collect()
}

/// Numeric `∂^α ∂̄^β f` at `p` for one derivative multi-index, one step size.
fn mixed_derivative<F>(
    f: &F,
    p: &PointZ,
    key: &DerivKey,
    st: &WirtingerStencil,
    scale: f64,
    memo: &mut HashMap<Vec<i64>, C>,
) -> Result<C, EigenError>
where
    F: Fn(&PointZ) -> Result<C, EigenError>,
{
    // Per variable: the real-derivative expansion and its step.
    let mut per_var: Vec<(usize, f64, Vec<(usize, usize, C)>)> = Vec::new();
    for &(v, a, b) in key {
        let z = p.at(v);
        if z.norm() == 0.0 {
            let (i, j) = var_pair(v);
            return Err(EigenError::ZeroCoordinate { i, j });
        }
        per_var.push((v, st.h * scale * z.norm(), wirtinger_expand(a as usize, b as usize)));
    }
    let mut total = C::new(0.0, 0.0);
    let mut choice = vec![0usize; per_var.len()];
    loop {
        // One term of the product expansion: real orders per variable.
        let mut coef = C::new(1.0, 0.0);
        let mut dirs: Vec<(usize, bool, usize, f64)> = Vec::new();
        for (slot, (v, h, exp)) in per_var.iter().enumerate() {
            let (ax, by, c) = exp[choice[slot]];
            coef *= c;
            if ax > 0 {
                dirs.push((*v, false, ax, *h));
            }
            if by > 0 {
                dirs.push((*v, true, by, *h));
            }
        }
        let stencils: Vec<Vec<(i64, f64)>> = dirs.iter().map(|d| stencil_1d(d.2, st.order)).collect();
        let mut idx = vec![0usize; dirs.len()];
        let mut acc = C::new(0.0, 0.0);
        loop {
            let mut w = 1.0;
            let mut q = p.clone();
            let mut mk = vec![0i64; 2 * NVAR];
            for (d, dir) in dirs.iter().enumerate() {
                let (off, wt) = stencils[d][idx[d]];
                w *= wt;
                mk[2 * dir.0 + dir.1 as usize] += off;
            }
            for v in 0..NVAR.min(2 * p.len()) {
                if v >= p.len() {
                    break;
                }
                let (ox, oy) = (mk[2 * v], mk[2 * v + 1]);
                if ox != 0 || oy != 0 {
                    let h = per_var.iter().find(|t| t.0 == v).map(|t| t.1).unwrap_or(0.0);
                    let (i, j) = var_pair(v);
                    q.set(i, j, p.at(v) + C::new(ox as f64 * h, oy as f64 * h));
                }
            }
            let val = match memo.get(&mk) {
                Some(v) => *v,
                None => {
                    let v = f(&q)?;
                    memo.insert(mk.clone(), v);
                    v
                }
            };
            acc += val * w;
            let mut d = 0;
            while d < dirs.len() {
                idx[d] += 1;
                if idx[d] < stencils[d].len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == dirs.len() {
                break;
            }
        }
        let hpow: f64 = dirs.iter().map(|d| d.3.powi(d.2 as i32)).product();
        total += coef * acc / hpow;
        let mut s = 0;
        while s < per_var.len() {
            choice[s] += 1;
            if choice[s] < per_var[s].2.len() {
                break;
            }
            choice[s] = 0;
            s += 1;
        }
        if s == per_var.len() {
            break;
        }
    }
    Ok(total)
}

/// Coefficient-indeterminate values: `u`, and `σ_j`, `σ̄_j` from the representation.
pub fn coeff_values(u: C, sigma: &[crate::schemes::DoubleIndex]) -> [C; NCOEF] {
    let mut vals = [C::new(0.0, 0.0); NCOEF];
    vals[0] = u;
    for (j, s) in sigma.iter().enumerate() {
        vals[2 + j] = s.hol;
        vals[2 + MAX_RANK + j] = s.anti;
    }
    vals
}

fn z_monomial(m: &[u8], p: &PointZ) -> C {
    let mut t = C::new(1.0, 0.0);
    for v in 0..p.len() {
        if m[v] > 0 {
            t *= p.at(v).powu(m[v] as u32);
        }
        if m[NVAR + v] > 0 {
            t *= p.at(v).conj().powu(m[NVAR + v] as u32);
        }
    }
    t
}

/// Apply a Weyl-algebra element to a numeric function: each `∂_{ij}`, `∂̄_{ij}`
/// becomes a Wirtinger stencil in `z_{ij}`, coefficients are evaluated at `vals`.
pub fn apply_weyl_numeric<F>(
    op: &WeylElement,
    f: &F,
    p: &PointZ,
    st: &WirtingerStencil,
    vals: &[C; NCOEF],
) -> Result<C, EigenError>
where
    F: Fn(&PointZ) -> Result<C, EigenError>,
{
    apply_weyl_scaled(op, f, p, st, vals).map(|r| r.0)
}

/// As [`apply_weyl_numeric`], also returning `Σ |c_α ∂^α f|` over the derivative groups.
pub fn apply_weyl_scaled<F>(
    op: &WeylElement,
    f: &F,
    p: &PointZ,
    st: &WirtingerStencil,
    vals: &[C; NCOEF],
) -> Result<(C, f64), EigenError>
where
    F: Fn(&PointZ) -> Result<C, EigenError>,
{
    if !(st.h > 0.0) || !(st.order == 2 || st.order == 4) {
        return Err(EigenError::Stencil(format!(
            "need h > 0 and order 2 or 4, got h = {}, order = {}",
            st.h, st.order
        )));
    }
    let mut groups: Vec<(DerivKey, C)> = Vec::new();
    for (m, c) in op.terms() {
        if (0..NVAR).any(|v| v >= p.len() && (m[v] | m[NVAR + v] | m[2 * NVAR + v] | m[3 * NVAR + v]) > 0) {
            return Err(EigenError::Stencil("operator uses coordinates outside the point".into()));
        }
        let w = c.eval(vals) * z_monomial(m, p);
        let key = deriv_key(m);
        match groups.iter_mut().find(|g| g.0 == key) {
            Some(g) => g.1 += w,
            None => groups.push((key, w)),
        }
    }
    let mut memo_h = HashMap::new();
    let mut memo_h2 = HashMap::new();
    let mut total = C::new(0.0, 0.0);
    let mut scale = 0.0;
    for (key, w) in groups {
        if w == C::new(0.0, 0.0) {
            continue;
        }
        let d = if key.is_empty() {
            match memo_h.get(&vec![0i64; 2 * NVAR]) {
                Some(v) => *v,
                None => f(p)?,
            }
        } else if st.richardson {
            let d1 = mixed_derivative(f, p, &key, st, 1.0, &mut memo_h)?;
            let d2 = mixed_derivative(f, p, &key, st, 0.5, &mut memo_h2)?;
            let r = 2f64.powi(st.order as i32);
            (d2 * r - d1) / (r - 1.0)
        } else {
            mixed_derivative(f, p, &key, st, 1.0, &mut memo_h)?
        };
        total += w * d;
        scale += (w * d).norm();
    }
    Ok((total, scale))
}

/// Evaluate a polynomial Weyl element (no derivatives) at a point.
pub fn eval_polynomial(w: &WeylElement, p: &PointZ, vals: &[C; NCOEF]) -> C {
    w.terms().map(|(m, c)| c.eval(vals) * z_monomial(m, p)).sum()
}

/// The scalar value of an element with no coordinate dependence, if it is one.
pub fn as_scalar(w: &WeylElement) -> Option<CoeffPoly> {
    let mut out = None;
    for (m, c) in w.terms() {
        if m.iter().any(|&e| e > 0) {
            return None;
        }
        out = Some(c.clone());
    }
    Some(out.unwrap_or_else(CoeffPoly::zero))
}

pub(crate) fn tag(s: Sector) -> &'static str {
    match s {
        Sector::Hol => "hol",
        Sector::Anti => "anti",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::DoubleIndex;
    use crate::weyl::{rat, Indet};

    fn vals0() -> [C; NCOEF] {
        [C::new(0.0, 0.0); NCOEF]
    }

    #[test]
    fn fornberg_matches_textbook() {
        let w = fd_weights(2, &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        let want = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn euler_operator_on_power() {
        let a = DoubleIndex::new(C::new(0.7, 0.4), C::new(-0.3, 0.4));
        let f = |p: &PointZ| Ok(crate::complexfield::double_power(p.get(2, 1), a)?);
        let op = &WeylElement::z(2, 1, false) * &WeylElement::d(2, 1, false);
        let p = PointZ::new(2).with(2, 1, C::new(2.0, 0.0));
        let got = apply_weyl_numeric(&op, &f, &p, &WirtingerStencil::default(), &vals0()).unwrap();
        let want = a.hol * f(&p).unwrap();
        assert!((got - want).norm() < 1e-10 * want.norm(), "{got} vs {want}");
    }

    #[test]
    fn antiholomorphic_derivative_of_holomorphic_vanishes() {
        let f = |p: &PointZ| Ok(p.get(2, 1).powu(3));
        let p = PointZ::new(2).with(2, 1, C::new(0.8, -1.1));
        let got =
            apply_weyl_numeric(&WeylElement::d(2, 1, true), &f, &p, &WirtingerStencil::default(), &vals0()).unwrap();
        assert!(got.norm() < 1e-9);
    }

    #[test]
    fn agrees_with_exact_application_on_polynomials() {
        let x = WeylElement::z(2, 1, false);
        let y = WeylElement::z(3, 1, true);
        let z = WeylElement::z(3, 2, false);
        let poly = &(&(&x * &x) * &y) + &(&(&z * &y) * &y).scale(&rat(3, 2));
        let op = &(&(&x * &WeylElement::d(3, 1, true)) * &WeylElement::d(3, 2, false))
            + &(&WeylElement::d(2, 1, false) * &WeylElement::d(2, 1, false)).scale(&CoeffPoly::var(Indet::U));
        let mut vals = vals0();
        vals[0] = C::new(0.3, -0.8);
        let exact = op.try_apply(&poly).unwrap();
        let mut p = PointZ::new(3);
        p.set(2, 1, C::new(1.2, 0.4));
        p.set(3, 1, C::new(-0.7, 0.9));
        p.set(3, 2, C::new(0.5, -1.3));
        let f = |q: &PointZ| Ok(eval_polynomial(&poly, q, &vals));
        let got = apply_weyl_numeric(&op, &f, &p, &WirtingerStencil::default(), &vals).unwrap();
        let want = eval_polynomial(&exact, &p, &vals);
        assert!((got - want).norm() < 1e-9 * want.norm().max(1.0), "{got} vs {want}");
    }

    #[test]
    fn parse_point() {
        let p = PointZ::parse(3, "z21=1+0.3i, z32=-0.5i").unwrap();
        assert_eq!(p.get(2, 1), C::new(1.0, 0.3));
        assert_eq!(p.get(3, 2), C::new(0.0, -0.5));
        assert_eq!(p.get(3, 1), C::new(1.0, 0.0));
        assert!(PointZ::parse(3, "z13=1").is_err());
    }
}

//! Double indices `(a, ā) ∈ Λ_ℂ`, representation parameters, Gelfand–Tsetlin
//! schemes and their shifts.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Neg, Sub};

const LATTICE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchemeError {
    #[error("rank must be at least 2, got {0}")]
    Rank(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("value {0} in an integer slot is not an integer")]
    NonInteger(f64),
    #[error("shift position out of range: level {level}, position {pos}, rank {n}")]
    ShiftRange { level: usize, pos: usize, n: usize },
    #[error("the top row holds the representation parameters and cannot be shifted")]
    TopRow,
    #[error("scheme is degenerate at level {0} (coinciding entries)")]
    Degenerate(usize),
    #[error("(a, ā) = ({0}, {1}) has a − ā outside ℤ")]
    NotLattice(Complex64, Complex64),
    #[error("scheme file: {0}")]
    File(String),
}

/// An element `(a, ā)` of `Λ_ℂ`: two complex numbers whose difference is an integer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoubleIndex {
    pub hol: Complex64,
    pub anti: Complex64,
}

impl DoubleIndex {
    pub fn new(hol: Complex64, anti: Complex64) -> Self {
        DoubleIndex { hol, anti }
    }

    /// Checked constructor enforcing `a − ā ∈ ℤ` to 1e−12.
    pub fn checked(hol: Complex64, anti: Complex64) -> Result<Self, SchemeError> {
        let d = hol - anti;
        if (d.re - d.re.round()).abs() > LATTICE_TOL || d.im.abs() > LATTICE_TOL {
            return Err(SchemeError::NotLattice(hol, anti));
        }
        Ok(DoubleIndex { hol, anti })
    }

    /// `(c, c)` for a real or complex scalar `c`.
    pub fn diag(c: Complex64) -> Self {
        DoubleIndex { hol: c, anti: c }
    }

    pub fn real(c: f64) -> Self {
        Self::diag(Complex64::new(c, 0.0))
    }

    /// The unit shifts `e = (1, 0)` and `ē = (0, 1)`.
    pub fn e() -> Self {
        DoubleIndex { hol: Complex64::new(1.0, 0.0), anti: Complex64::new(0.0, 0.0) }
    }
    pub fn ebar() -> Self {
        DoubleIndex { hol: Complex64::new(0.0, 0.0), anti: Complex64::new(1.0, 0.0) }
    }

    /// Lattice point `((m + offset) + iβ)/2`, `((−m + offset) + iβ)/2`.
    pub fn lattice(m: i64, offset: f64, beta: f64) -> Self {
        DoubleIndex {
            hol: Complex64::new((m as f64 + offset) / 2.0, beta / 2.0),
            anti: Complex64::new((-(m as f64) + offset) / 2.0, beta / 2.0),
        }
    }

    /// The integer `a − ā`.
    pub fn int_diff(&self) -> i64 {
        (self.hol - self.anti).re.round() as i64
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = k as f64;
        DoubleIndex { hol: self.hol * k, anti: self.anti * k }
    }

    /// Component for a sector.
    pub fn get(&self, sector: Sector) -> Complex64 {
        match sector {
            Sector::Hol => self.hol,
            Sector::Anti => self.anti,
        }
    }

    /// `(a, ā) ↦ (ā, a)`.
    pub fn swapped(&self) -> Self {
        DoubleIndex { hol: self.anti, anti: self.hol }
    }
}

impl Add for DoubleIndex {
    type Output = DoubleIndex;
    fn add(self, o: Self) -> Self {
        DoubleIndex { hol: self.hol + o.hol, anti: self.anti + o.anti }
    }
}
impl Sub for DoubleIndex {
    type Output = DoubleIndex;
    fn sub(self, o: Self) -> Self {
        DoubleIndex { hol: self.hol - o.hol, anti: self.anti - o.anti }
    }
}
impl Neg for DoubleIndex {
    type Output = DoubleIndex;
    fn neg(self) -> Self {
        DoubleIndex { hol: -self.hol, anti: -self.anti }
    }
}
impl std::iter::Sum for DoubleIndex {
    fn sum<I: Iterator<Item = Self>>(it: I) -> Self {
        it.fold(DoubleIndex::real(0.0), |a, b| a + b)
    }
}

/// Holomorphic or antiholomorphic sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Hol,
    Anti,
}

impl Sector {
    pub fn is_anti(self) -> bool {
        self == Sector::Anti
    }
    pub const BOTH: [Sector; 2] = [Sector::Hol, Sector::Anti];
}

/// Principal-series parameters `σ_j = (s_j+κ+iη_j)/2`, `σ̄_j = (−s_j+κ+iη_j)/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReprParams {
    pub n: usize,
    pub s: Vec<i64>,
    pub kappa: f64,
    pub eta: Vec<f64>,
}

impl ReprParams {
    pub fn new(s: Vec<i64>, kappa: f64, eta: Vec<f64>) -> Result<Self, SchemeError> {
        let n = s.len();
        if n < 2 {
            return Err(SchemeError::Rank(n));
        }
        if eta.len() != n {
            return Err(SchemeError::Shape(format!("{} integers but {} reals in sigma", n, eta.len())));
        }
        Ok(ReprParams { n, s, kappa, eta })
    }

    pub fn sigma(&self, j: usize) -> DoubleIndex {
        DoubleIndex::lattice(self.s[j - 1], self.kappa, self.eta[j - 1])
    }

    pub fn sigmas(&self) -> Vec<DoubleIndex> {
        (1..=self.n).map(|j| self.sigma(j)).collect()
    }
}

/// A shift of one scheme entry by `±1` in one sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeShift {
    pub level: usize,
    pub pos: usize,
    pub dir: i8,
    pub sector: Sector,
}

impl SchemeShift {
    pub fn hol(level: usize, pos: usize) -> Self {
        SchemeShift { level, pos, dir: 1, sector: Sector::Hol }
    }
    pub fn anti(level: usize, pos: usize) -> Self {
        SchemeShift { level, pos, dir: 1, sector: Sector::Anti }
    }
    pub fn inverse(self) -> Self {
        SchemeShift { dir: -self.dir, ..self }
    }
}

/// Gelfand–Tsetlin scheme: levels `1..n−1` from the orthogonal-set
/// parametrization plus integer shift offsets, top row `σ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GTScheme {
    pub params: ReprParams,
    pub ints: Vec<Vec<i64>>,
    pub reals: Vec<Vec<f64>>,
    /// Accumulated `(hol, anti)` integer shifts per entry.
    pub offsets: Vec<Vec<(i64, i64)>>,
}

pub fn make_scheme(ints: Vec<Vec<i64>>, reals: Vec<Vec<f64>>, params: ReprParams) -> Result<GTScheme, SchemeError> {
    let n = params.n;
    if ints.len() != n - 1 || reals.len() != n - 1 {
        return Err(SchemeError::Shape(format!("expected {} levels", n - 1)));
    }
    for l in 1..n {
        if ints[l - 1].len() != l || reals[l - 1].len() != l {
            return Err(SchemeError::Shape(format!("level {l} must have {l} entries")));
        }
    }
    let offsets = (1..n).map(|l| vec![(0, 0); l]).collect();
    Ok(GTScheme { params, ints, reals, offsets })
}

/// Build a scheme from floating integer slots, rejecting non-integers.
pub fn make_scheme_f(ints: Vec<Vec<f64>>, reals: Vec<Vec<f64>>, params: ReprParams) -> Result<GTScheme, SchemeError> {
    let mut out = Vec::new();
    for row in ints {
        let mut r = Vec::new();
        for x in row {
            if x.fract() != 0.0 || !x.is_finite() {
                return Err(SchemeError::NonInteger(x));
            }
            r.push(x as i64);
        }
        out.push(r);
    }
    make_scheme(out, reals, params)
}

pub fn shift_scheme(s: &GTScheme, sh: SchemeShift) -> Result<GTScheme, SchemeError> {
    let n = s.n();
    if sh.level == n {
        return Err(SchemeError::TopRow);
    }
    if sh.level == 0 || sh.level > n || sh.pos == 0 || sh.pos > sh.level {
        return Err(SchemeError::ShiftRange { level: sh.level, pos: sh.pos, n });
    }
    let mut out = s.clone();
    let o = &mut out.offsets[sh.level - 1][sh.pos - 1];
    match sh.sector {
        Sector::Hol => o.0 += sh.dir as i64,
        Sector::Anti => o.1 += sh.dir as i64,
    }
    Ok(out)
}

impl GTScheme {
    pub fn n(&self) -> usize {
        self.params.n
    }

    /// Entry `λ_{lj}`; the top level `l = n` returns `σ_j`.
    pub fn lambda(&self, l: usize, j: usize) -> DoubleIndex {
        let n = self.n();
        if l == n {
            return self.params.sigma(j);
        }
        let base = DoubleIndex::lattice(
            self.ints[l - 1][j - 1],
            self.params.kappa - n as f64 + l as f64,
            self.reals[l - 1][j - 1],
        );
        let (dh, da) = self.offsets[l - 1][j - 1];
        DoubleIndex { hol: base.hol + dh as f64, anti: base.anti + da as f64 }
    }

    pub fn level(&self, l: usize) -> Vec<DoubleIndex> {
        (1..=l).map(|j| self.lambda(l, j)).collect()
    }

    pub fn level_sum(&self, l: usize) -> DoubleIndex {
        self.level(l).into_iter().sum()
    }

    /// Exact integer `λ_{lj} − λ̄_{lj}`, from the integer data.
    pub fn int_diff(&self, l: usize, j: usize) -> i64 {
        if l == self.n() {
            return self.params.s[j - 1];
        }
        let (dh, da) = self.offsets[l - 1][j - 1];
        self.ints[l - 1][j - 1] + dh - da
    }

    pub fn sigma(&self, j: usize) -> DoubleIndex {
        self.params.sigma(j)
    }

    pub fn shifted(&self, sh: SchemeShift) -> GTScheme {
        shift_scheme(self, sh).expect("valid shift")
    }

    /// Whether some level has two (numerically) coinciding entries.
    pub fn degenerate_level(&self) -> Option<usize> {
        for l in 2..self.n() {
            let lv = self.level(l);
            for a in 0..l {
                for b in a + 1..l {
                    let d = lv[a] - lv[b];
                    if d.hol.norm() < 1e-12 || d.anti.norm() < 1e-12 {
                        return Some(l);
                    }
                }
            }
        }
        None
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate_level().is_some()
    }

    pub fn require_nondegenerate(&self) -> Result<(), SchemeError> {
        match self.degenerate_level() {
            Some(l) => Err(SchemeError::Degenerate(l)),
            None => Ok(()),
        }
    }

    pub fn to_file(&self) -> SchemeFile {
        SchemeFile {
            n: self.n(),
            kappa: self.params.kappa,
            sigma: SigmaFile { s: self.params.s.clone(), eta: self.params.eta.clone() },
            levels: self
                .ints
                .iter()
                .zip(&self.reals)
                .map(|(i, r)| LevelFile { ints: i.clone(), reals: r.clone() })
                .collect(),
        }
    }

    pub fn from_file(f: &SchemeFile) -> Result<GTScheme, SchemeError> {
        let p = ReprParams::new(f.sigma.s.clone(), f.kappa, f.sigma.eta.clone())?;
        if p.n != f.n {
            return Err(SchemeError::Shape(format!("n = {} but sigma has {} entries", f.n, p.n)));
        }
        make_scheme(
            f.levels.iter().map(|l| l.ints.clone()).collect(),
            f.levels.iter().map(|l| l.reals.clone()).collect(),
            p,
        )
    }

    pub fn from_json(s: &str) -> Result<GTScheme, SchemeError> {
        let f: SchemeFile = serde_json::from_str(s).map_err(|e| SchemeError::File(e.to_string()))?;
        Self::from_file(&f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }
}

/// Roots `λ_{m1..mm}` of the level-`m` eigenvalue polynomial in one sector.
pub fn eigenvalue_poly(s: &GTScheme, m: usize, sector: Sector) -> Vec<Complex64> {
    s.level(m).iter().map(|d| d.get(sector)).collect()
}

/// Monic polynomial `Π_k (u − r_k)` evaluated at `u`.
pub fn eval_monic(roots: &[Complex64], u: Complex64) -> Complex64 {
    roots.iter().fold(Complex64::new(1.0, 0.0), |acc, r| acc * (u - r))
}

/// `‖a − b‖² = −(a−b)(ā−b̄)`.
pub fn sq_norm(a: DoubleIndex, b: DoubleIndex) -> Complex64 {
    -(a.hol - b.hol) * (a.anti - b.anti)
}

/// `ρ(λ) = Π_r Π_{l<j} ‖λ_{rl} − λ_{rj}‖²` over the free levels.
pub fn rho(s: &GTScheme) -> f64 {
    let mut r = 1.0;
    for l in 2..s.n() {
        let lv = s.level(l);
        for a in 0..l {
            for b in a + 1..l {
                r *= sq_norm(lv[a], lv[b]).re;
            }
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaFile {
    pub s: Vec<i64>,
    pub eta: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelFile {
    pub ints: Vec<i64>,
    pub reals: Vec<f64>,
}

/// On-disk scheme format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeFile {
    pub n: usize,
    pub kappa: f64,
    pub sigma: SigmaFile,
    pub levels: Vec<LevelFile>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl3_zero() -> GTScheme {
        let p = ReprParams::new(vec![0, 0, 0], 0.0, vec![0.0; 3]).unwrap();
        make_scheme(vec![vec![0], vec![0, 0]], vec![vec![0.0], vec![0.0, 0.0]], p).unwrap()
    }

    #[test]
    fn zero_gl3_entries() {
        let s = gl3_zero();
        assert_eq!(s.lambda(1, 1).hol, Complex64::new(-1.0, 0.0));
        assert_eq!(s.lambda(2, 2).hol, Complex64::new(-0.5, 0.0));
        assert!(s.is_degenerate());
    }

    #[test]
    fn gl2_parametrization() {
        let p = ReprParams::new(vec![1, -2], 0.3, vec![0.5, -1.0]).unwrap();
        let s = make_scheme(vec![vec![3]], vec![vec![0.7]], p).unwrap();
        let l = s.lambda(1, 1);
        assert!((l.hol - Complex64::new((3.0 + 0.3 - 1.0) / 2.0, 0.35)).norm() < 1e-15);
        assert!((l.anti - Complex64::new((-3.0 + 0.3 - 1.0) / 2.0, 0.35)).norm() < 1e-15);
        assert_eq!(s.lambda(2, 1), s.sigma(1));
        let sh = s.shifted(SchemeShift::hol(1, 1));
        assert_eq!(sh.lambda(1, 1).hol, l.hol + 1.0);
        assert_eq!(sh.lambda(1, 1).anti, l.anti);
        assert_eq!(sh.shifted(SchemeShift::hol(1, 1).inverse()), s);
        assert_eq!(shift_scheme(&s, SchemeShift::hol(2, 1)), Err(SchemeError::TopRow));
    }

    #[test]
    fn shape_errors() {
        let p = ReprParams::new(vec![0, 0, 0], 0.0, vec![0.0; 3]).unwrap();
        assert!(make_scheme(vec![vec![0]], vec![vec![0.0]], p.clone()).is_err());
        assert!(matches!(
            make_scheme_f(vec![vec![0.5], vec![0.0, 1.0]], vec![vec![0.0], vec![0.0, 0.0]], p),
            Err(SchemeError::NonInteger(_))
        ));
    }

    #[test]
    fn eigenvalue_roots() {
        let p = ReprParams::new(vec![0, 1, 2], 0.1, vec![0.2, 0.3, 0.4]).unwrap();
        let s = make_scheme(vec![vec![1], vec![2, -1]], vec![vec![0.5], vec![1.0, -1.0]], p).unwrap();
        let top = eigenvalue_poly(&s, 3, Sector::Anti);
        assert_eq!(top, s.params.sigmas().iter().map(|d| d.anti).collect::<Vec<_>>());
        let r2 = eigenvalue_poly(&s, 2, Sector::Hol);
        assert_eq!(eval_monic(&r2, r2[1]), Complex64::new(0.0, 0.0));
        assert_eq!(eigenvalue_poly(&s, 1, Sector::Hol).len(), 1);
        assert!(rho(&s) > 0.0);
    }

    #[test]
    fn json_roundtrip() {
        let p = ReprParams::new(vec![0, 1, 2], 0.1, vec![0.2, 0.3, 0.4]).unwrap();
        let s = make_scheme(vec![vec![1], vec![2, -1]], vec![vec![0.5], vec![1.0, -1.0]], p).unwrap();
        let back = GTScheme::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }
}

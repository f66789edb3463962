//! Mellin–Barnes kernels `K_γ(λ)` for ranks 3 and 4, the exponents `b_i`, and
//! the gl_4 normalization `c(λ)`.

pub mod suites;

use crate::complexfield::gamma::{parity, GammaError, LogC};
use crate::complexfield::hypg::{hyp_g, HypParams};
use crate::complexfield::quad::{GVal, QuadConfig, QuadError};
use crate::complexfield::suites::FourGFourParams;
use crate::schemes::{DoubleIndex, GTScheme, SchemeError, Sector};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Mutex;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("expected rank {expected}, got {got}")]
    Rank { expected: usize, got: usize },
    #[error("γ data shape: {0}")]
    Shape(String),
    #[error("pole in {factor}: {source}")]
    Pole { factor: String, source: GammaError },
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

fn gc(factor: &str, mu: DoubleIndex) -> Result<LogC, KernelError> {
    LogC::gamma_c(mu).map_err(|source| KernelError::Pole { factor: factor.to_string(), source })
}

fn one() -> DoubleIndex {
    DoubleIndex::real(1.0)
}

fn require_rank(s: &GTScheme, n: usize) -> Result<(), KernelError> {
    if s.n() != n {
        return Err(KernelError::Rank { expected: n, got: s.n() });
    }
    Ok(())
}

/// Exponents `b_3..b_n` (both components) and the leading exponent
/// `σ_1 − n + 1 − λ_11 − Σ b_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentSet {
    pub n: usize,
    /// `b[i − 3] = b_i`.
    pub b: Vec<DoubleIndex>,
    pub leading: DoubleIndex,
}

impl ExponentSet {
    pub fn b_i(&self, i: usize) -> DoubleIndex {
        self.b[i - 3]
    }

    /// Largest component deviation of the telescoping sums from
    /// `Σ_l γ_{m−1,l} − Σ_s λ_{ms} + σ_1 − n + m`, over `m = 2..n−1`.
    pub fn telescoping_residual(&self, gamma: &[Vec<DoubleIndex>], s: &GTScheme) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for m in 2..n {
            let lhs: DoubleIndex = (m + 1..=n).map(|k| self.b_i(k)).sum();
            let rhs = gamma_sum(gamma, m - 1) - s.level_sum(m) + s.sigma(1) - DoubleIndex::real((n - m) as f64);
            let d = lhs - rhs;
            worst = worst.max(d.hol.norm()).max(d.anti.norm());
        }
        worst
    }
}

fn gamma_sum(gamma: &[Vec<DoubleIndex>], l: usize) -> DoubleIndex {
    if l == 0 {
        DoubleIndex::real(0.0)
    } else {
        gamma[l - 1].iter().copied().sum()
    }
}

/// `b_i(γ, λ)` for a rank-`n` scheme; `gamma[l−1]` holds the `l` entries of level `l`
/// of the inner gl_{n−1} scheme, `l = 1..n−2`.
pub fn exponents_b(gamma: &[Vec<DoubleIndex>], s: &GTScheme) -> Result<ExponentSet, KernelError> {
    let n = s.n();
    if gamma.len() != n - 2 {
        return Err(KernelError::Shape(format!("rank {n} needs {} γ levels, got {}", n - 2, gamma.len())));
    }
    for (i, lv) in gamma.iter().enumerate() {
        if lv.len() != i + 1 {
            return Err(KernelError::Shape(format!("γ level {} has {} entries", i + 1, lv.len())));
        }
    }
    let mut b = Vec::new();
    for i in 3..n {
        b.push(gamma_sum(gamma, i - 2) - gamma_sum(gamma, i - 1) - s.level_sum(i - 1) + s.level_sum(i) - one());
    }
    if n >= 3 {
        b.push(gamma_sum(gamma, n - 2) - s.level_sum(n - 1) + s.sigma(1) - one());
    }
    let total: DoubleIndex = b.iter().copied().sum();
    let leading = s.sigma(1) - DoubleIndex::real((n - 1) as f64) - s.lambda(1, 1) - total;
    Ok(ExponentSet { n, b, leading })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "gl3-closed-form")]
    Gl3ClosedForm,
    #[serde(rename = "gl4-4G4")]
    Gl4FourGFour,
}

/// `sign · exp(log) · g`, with the sign taken from integer data and `g` the
/// `4G4` factor (exactly 1 for rank 3).
#[derive(Clone, Debug, PartialEq)]
pub struct KernelValue {
    pub sign: f64,
    pub log: LogC,
    pub g: GVal,
    pub provenance: Provenance,
}

impl KernelValue {
    pub fn value(&self) -> C {
        self.log.value() * self.g.value * self.sign
    }
    pub fn abs_err(&self) -> f64 {
        self.log.value().norm() * self.g.abs_err
    }
}

/// `(−1)^{Σ(λ_2j−λ̄_2j)} Γ^C(γ_11+λ_11−Σλ_2j+1) Π_l Γ^C(λ_2l−γ_11)`.
pub fn kernel_gl3(gamma11: DoubleIndex, s: &GTScheme) -> Result<KernelValue, KernelError> {
    require_rank(s, 3)?;
    let sign = parity(s.int_diff(2, 1) + s.int_diff(2, 2));
    let mut log = gc("γ11+λ11−Σλ2+1", gamma11 + s.lambda(1, 1) - s.level_sum(2) + one())?;
    for l in 1..=2 {
        log = log.mul(gc("λ2l−γ11", s.lambda(2, l) - gamma11)?);
    }
    Ok(KernelValue { sign, log, g: GVal::exact(C::new(1.0, 0.0)), provenance: Provenance::Gl3ClosedForm })
}

/// Integration point `(γ_11, γ_21, γ_22)` of the rank-4 kernel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gl4Gamma {
    pub g11: DoubleIndex,
    pub g21: DoubleIndex,
    pub g22: DoubleIndex,
}

impl Gl4Gamma {
    /// Unit shift of entry `(level, pos)` by `dir` in one sector.
    pub fn shifted(&self, level: usize, pos: usize, dir: i64, sector: Sector) -> Self {
        let d = match sector {
            Sector::Hol => DoubleIndex::e(),
            Sector::Anti => DoubleIndex::ebar(),
        }
        .scale(dir);
        let mut o = *self;
        match (level, pos) {
            (1, 1) => o.g11 = o.g11 + d,
            (2, 1) => o.g21 = o.g21 + d,
            (2, 2) => o.g22 = o.g22 + d,
            _ => panic!("no γ entry ({level}, {pos}) at rank 4"),
        }
        o
    }

    pub fn levels(&self) -> Vec<Vec<DoubleIndex>> {
        vec![vec![self.g11], vec![self.g21, self.g22]]
    }

    pub fn four_g_four(&self, s: &GTScheme) -> FourGFourParams {
        FourGFourParams {
            l2: [s.lambda(2, 1), s.lambda(2, 2)],
            l3: [s.lambda(3, 1), s.lambda(3, 2), s.lambda(3, 3)],
            g11: self.g11,
            g2: [self.g21, self.g22],
        }
    }
}

/// `c(λ) = (−1)^{1+Σ(λ_2j−λ̄_2j)} Π_j Γ^C(λ_3j−σ_1+1)` as `(sign, log)`.
pub fn c_lambda(s: &GTScheme) -> Result<(f64, LogC), KernelError> {
    require_rank(s, 4)?;
    let sign = parity(1 + s.int_diff(2, 1) + s.int_diff(2, 2));
    let mut log = LogC::one();
    for j in 1..=3 {
        log = log.mul(gc("λ3j−σ1+1", s.lambda(3, j) - s.sigma(1) + one())?);
    }
    Ok((sign, log))
}

/// Gamma-function prefactor of the rank-4 kernel, everything except `4G4`.
pub fn kernel_gl4_prefactor(g: &Gl4Gamma, s: &GTScheme) -> Result<(f64, LogC), KernelError> {
    prefactor_eps(g, s, 0.0)
}

fn prefactor_eps(g: &Gl4Gamma, s: &GTScheme, eps: f64) -> Result<(f64, LogC), KernelError> {
    let (csign, clog) = c_lambda(s)?;
    let sign = csign * parity(g.g21.int_diff() + g.g22.int_diff());
    let d = g.g21 - g.g22;
    let mut log = clog.mul(LogC::from_value(d.hol * d.anti));
    let l2 = s.level_sum(2);
    let l3 = s.level_sum(3);
    log = log.mul(gc("γ11+λ11−Σλ2+1", g.g11 + s.lambda(1, 1) - l2 + one())?);
    log = log.mul(gc("−γ11+Σγ2+Σλ2−Σλ3+1", -g.g11 + g.g21 + g.g22 + l2 - l3 + one())?);
    for l in 1..=3 {
        for gj in [g.g21, g.g22] {
            log = log.mul(gc("λ3l−γ2j", s.lambda(3, l) - gj + DoubleIndex::real(eps / 2.0))?);
        }
    }
    Ok((sign, log))
}

/// Rank-4 kernel: gamma prefactor times `4G4[λ_21, λ_22, γ_21, γ_22; 1−λ_3·, −γ_11; 1]`.
/// The `4G4` factor is skipped when the prefactor vanishes.
pub fn kernel_gl4(g: &Gl4Gamma, s: &GTScheme, cfg: &QuadConfig) -> Result<KernelValue, KernelError> {
    kernel_gl4_regularized(g, s, 0.0, 0.0, cfg)
}

/// The rank-4 kernel with `Γ^C(λ_3l−γ_2j)` replaced by `Γ^C(λ_3l−γ_2j+ε/2)` and
/// `λ_2j` inside `4G4` by `λ_2j+ε₁/2`.
pub fn kernel_gl4_regularized(
    g: &Gl4Gamma,
    s: &GTScheme,
    eps: f64,
    eps1: f64,
    cfg: &QuadConfig,
) -> Result<KernelValue, KernelError> {
    require_rank(s, 4)?;
    let (sign, log) = prefactor_eps(g, s, eps)?;
    let gv = if log.0.is_none() {
        GVal { value: C::new(0.0, 0.0), abs_err: 0.0, flags: vec!["vanishing prefactor".into()] }
    } else {
        let mut q = g.four_g_four(s);
        for l in q.l2.iter_mut() {
            *l = *l + DoubleIndex::real(eps1 / 2.0);
        }
        hyp_g_cached(&q.hyp()?, cfg)?
    };
    Ok(KernelValue { sign, log, g: gv, provenance: Provenance::Gl4FourGFour })
}

const CACHE_CAP: usize = 4096;

type CacheKey = Vec<u64>;

struct Lru {
    tick: u64,
    map: HashMap<CacheKey, (GVal, u64)>,
}

static FOUR_G_FOUR_CACHE: Mutex<Option<Lru>> = Mutex::new(None);

fn cache_key(p: &HypParams, cfg: &QuadConfig) -> CacheKey {
    let mut k: Vec<u64> = Vec::new();
    for d in p.a.iter().chain(p.b.iter()) {
        k.extend([d.hol.re, d.hol.im, d.anti.re, d.anti.im].map(f64::to_bits));
    }
    k.extend([cfg.k_max as u64, cfg.v_nodes as u64, cfg.tail_tol.to_bits()]);
    k
}

/// `4G4` at `z = 1` through a bounded least-recently-used cache.
fn hyp_g_cached(p: &HypParams, cfg: &QuadConfig) -> Result<GVal, QuadError> {
    let key = cache_key(p, cfg);
    {
        let mut guard = FOUR_G_FOUR_CACHE.lock().unwrap_or_else(|e| e.into_inner());
        let lru = guard.get_or_insert_with(|| Lru { tick: 0, map: HashMap::new() });
        lru.tick += 1;
        let t = lru.tick;
        if let Some(e) = lru.map.get_mut(&key) {
            e.1 = t;
            return Ok(e.0.clone());
        }
    }
    let v = hyp_g(p, C::new(1.0, 0.0), cfg)?;
    let mut guard = FOUR_G_FOUR_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    let lru = guard.get_or_insert_with(|| Lru { tick: 0, map: HashMap::new() });
    if lru.map.len() >= CACHE_CAP {
        if let Some(old) = lru.map.iter().min_by_key(|e| e.1 .1).map(|e| e.0.clone()) {
            lru.map.remove(&old);
        }
    }
    lru.tick += 1;
    let t = lru.tick;
    lru.map.insert(key, (v.clone(), t));
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{make_scheme, ReprParams};

    fn gl3() -> GTScheme {
        let p = ReprParams::new(vec![1, 0, -2], 0.25, vec![0.5, -1.25, 0.75]).unwrap();
        make_scheme(vec![vec![1], vec![0, -1]], vec![vec![0.5], vec![1.5, -0.75]], p).unwrap()
    }

    #[test]
    fn gl3_exponent_matches_y_power() {
        let s = gl3();
        let g = DoubleIndex::lattice(2, 0.25 - 2.0, 0.375);
        let e = exponents_b(&[vec![g]], &s).unwrap();
        let want = g - s.level_sum(2) + s.sigma(1) - one();
        assert_eq!(e.b_i(3), want);
        assert_eq!(e.telescoping_residual(&[vec![g]], &s), 0.0);
        assert_eq!(e.leading, s.sigma(1) - DoubleIndex::real(2.0) - s.lambda(1, 1) - want);
    }

    #[test]
    fn rank_mismatch_is_reported() {
        assert!(matches!(exponents_b(&[], &gl3()), Err(KernelError::Shape(_))));
        assert!(matches!(c_lambda(&gl3()), Err(KernelError::Rank { expected: 4, got: 3 })));
    }

    #[test]
    fn gl3_kernel_symmetric_in_level_two() {
        let s = gl3();
        let mut t = s.clone();
        t.ints[1].swap(0, 1);
        t.reals[1].swap(0, 1);
        let g = DoubleIndex::lattice(0, 0.25 - 2.0, -0.6);
        let a = kernel_gl3(g, &s).unwrap().value();
        let b = kernel_gl3(g, &t).unwrap().value();
        assert!((a - b).norm() <= 1e-13 * a.norm());
    }

    #[test]
    fn coinciding_level_two_gammas_give_zero() {
        let p = ReprParams::new(vec![0, 1, -1, 0], 0.3, vec![0.2, -0.7, 1.1, 0.4]).unwrap();
        let s = make_scheme(
            vec![vec![0], vec![1, -1], vec![0, 1, -1]],
            vec![vec![0.3], vec![0.7, -1.3], vec![0.4, -0.9, 1.8]],
            p,
        )
        .unwrap();
        let g2 = DoubleIndex::lattice(0, 0.3 - 1.0, 1.1);
        let g = Gl4Gamma { g11: DoubleIndex::lattice(-1, 0.3 - 2.0, -0.2), g21: g2, g22: g2 };
        let k = kernel_gl4(&g, &s, &QuadConfig::default()).unwrap();
        assert_eq!(k.value(), C::new(0.0, 0.0));
        assert_eq!(k.provenance, Provenance::Gl4FourGFour);
    }
}

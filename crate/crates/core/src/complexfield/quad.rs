//! Gauss–Legendre rules and truncated lattice×line quadrature `Σ_k ∫ dv/2`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Compactifying map for the line integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VMap {
    /// `v = V tan θ` with one Gauss–Legendre rule on `(−π/2, π/2)`.
    Tan,
    /// `v = V sinh u` with 8-point Gauss–Legendre panels uniform in `u`, `|v| ≤ 10⁸ V`.
    Panels,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub k_max: i64,
    pub v_nodes: usize,
    pub v_map: VMap,
    /// Strictly decreasing positive regulators for finite-ε extrapolation.
    pub eps_schedule: Vec<f64>,
    pub tail_tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { k_max: 40, v_nodes: 257, v_map: VMap::Tan, eps_schedule: vec![0.2, 0.1, 0.05], tail_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("invalid quadrature configuration: {0}")]
    Config(String),
    #[error("non-finite integrand at k = {k:?}, v = {v:?}")]
    NonFinite { k: Vec<i64>, v: Vec<f64> },
    #[error("divergent configuration: {0}")]
    Divergent(String),
    #[error("contour cannot separate the pole families: {0}")]
    Pinched(String),
    #[error(transparent)]
    Gamma(#[from] super::gamma::GammaError),
}

impl QuadConfig {
    pub fn validate(&self) -> Result<(), QuadError> {
        if self.k_max < 1 {
            return Err(QuadError::Config("k_max must be at least 1".into()));
        }
        if self.v_nodes < 2 {
            return Err(QuadError::Config("v_nodes must be at least 2".into()));
        }
        if self.eps_schedule.iter().any(|&e| !(e > 0.0)) || self.eps_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(QuadError::Config("eps_schedule must be positive and strictly decreasing".into()));
        }
        Ok(())
    }
}

/// A numerical value with an error estimate and notes on which cutoffs were active.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GVal {
    pub value: Complex64,
    pub abs_err: f64,
    pub flags: Vec<String>,
}

impl GVal {
    pub fn exact(value: Complex64) -> Self {
        GVal { value, abs_err: 0.0, flags: Vec::new() }
    }
    pub fn rel_err(&self) -> f64 {
        self.abs_err / self.value.norm().max(f64::MIN_POSITIVE)
    }
}

type Rule = Arc<(Vec<f64>, Vec<f64>)>;

/// Gauss–Legendre nodes and weights on `[−1, 1]`, memoized per order.
pub fn gauss_legendre(n: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&n) {
        return r.clone();
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    let r = Arc::new((x, w));
    cache.lock().unwrap().insert(n, r.clone());
    r
}

/// Nodes `v_j` and weights for `∫_ℝ dv` under `v = V tan θ`.
pub fn tan_rule(n: usize, scale: f64) -> Vec<(f64, f64)> {
    let r = gauss_legendre(n);
    r.0.iter()
        .zip(r.1.iter())
        .map(|(&x, &w)| {
            let th = x * PI / 2.0;
            let c = th.cos();
            (scale * th.tan(), w * PI / 2.0 * scale / (c * c))
        })
        .collect()
}

/// Nodes and weights for `∫_ℝ dv` under `v = V sinh u`, about `n` nodes in total.
pub fn panel_rule(n: usize, scale: f64) -> Vec<(f64, f64)> {
    let gl = gauss_legendre(8);
    let panels = (n / 8).max(2);
    let umax = (1e8f64).asinh();
    let h = 2.0 * umax / panels as f64;
    let mut out = Vec::with_capacity(panels * 8);
    for p in 0..panels {
        let c = -umax + h * (p as f64 + 0.5);
        for (x, w) in gl.0.iter().zip(gl.1.iter()) {
            let u = c + h / 2.0 * x;
            out.push((scale * u.sinh(), w * h / 2.0 * scale * u.cosh()));
        }
    }
    out
}

/// One lattice×line variable: `k ∈ [−k_max, k_max]`, `v` on the mapped rule.
fn grid(cfg: &QuadConfig, nodes: usize, scale: f64) -> Vec<(i64, f64, f64)> {
    let rule = match cfg.v_map {
        VMap::Tan => tan_rule(nodes, scale),
        VMap::Panels => panel_rule(nodes, scale),
    };
    let mut out = Vec::with_capacity((2 * cfg.k_max as usize + 1) * nodes);
    for k in -cfg.k_max..=cfg.k_max {
        for &(v, w) in &rule {
            out.push((k, v, w / 2.0));
        }
    }
    out
}

fn integrate_once<F>(
    f: &F,
    dims: usize,
    cfg: &QuadConfig,
    nodes: usize,
    scale: f64,
) -> Result<(Complex64, Complex64), QuadError>
where
    F: Fn(&[i64], &[f64]) -> Complex64 + Sync,
{
    let g = grid(cfg, nodes, scale);
    let total = g.len().pow(dims as u32);
    let outer = g.len();
    let inner_count = total / outer;
    // Each outer node owns a contiguous block; blocks are reduced in index order.
    let parts: Vec<Result<(Complex64, Complex64), QuadError>> = (0..outer)
        .into_par_iter()
        .map(|o| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut shell = Complex64::new(0.0, 0.0);
            let mut ks = vec![0i64; dims];
            let mut vs = vec![0f64; dims];
            for inner in 0..inner_count {
                let mut w = 1.0;
                let mut rest = inner;
                let mut on_shell = false;
                for d in 0..dims {
                    let idx = if d == 0 {
                        o
                    } else {
                        let i = rest % outer;
                        rest /= outer;
                        i
                    };
                    let (k, v, wt) = g[idx];
                    ks[d] = k;
                    vs[d] = v;
                    w *= wt;
                    on_shell |= k.abs() == cfg.k_max;
                }
                let val = f(&ks, &vs);
                if !val.re.is_finite() || !val.im.is_finite() {
                    return Err(QuadError::NonFinite { k: ks.clone(), v: vs.clone() });
                }
                acc += val * w;
                if on_shell {
                    shell += val * w;
                }
            }
            Ok((acc, shell))
        })
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut shell = Complex64::new(0.0, 0.0);
    for p in parts {
        let (a, s) = p?;
        acc += a;
        shell += s;
    }
    Ok((acc, shell))
}

/// `Σ_{|k_d| ≤ k_max} ∫ Π dv_d/2 f(k, v)` over `dims` lattice×line variables.
/// The error estimate adds the outermost k-shell to the change between
/// `v_nodes` and roughly half as many nodes.
pub fn mb_integrate<F>(f: F, dims: usize, cfg: &QuadConfig, scale: f64) -> Result<GVal, QuadError>
where
    F: Fn(&[i64], &[f64]) -> Complex64 + Sync,
{
    cfg.validate()?;
    if dims == 0 {
        return Err(QuadError::Config("dims must be positive".into()));
    }
    let (full, shell) = integrate_once(&f, dims, cfg, cfg.v_nodes, scale)?;
    let half_nodes = (cfg.v_nodes / 2).max(2) | 1;
    let (half, _) = integrate_once(&f, dims, cfg, half_nodes, scale)?;
    let abs_err = shell.norm() + (full - half).norm();
    let mut flags = Vec::new();
    if abs_err > cfg.tail_tol * full.norm().max(1.0) {
        flags.push(format!("error estimate {abs_err:.2e} above tail_tol"));
    }
    Ok(GVal { value: full, abs_err, flags })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let r = gauss_legendre(7);
        let s: f64 = r.0.iter().zip(r.1.iter()).map(|(x, w)| w * x.powi(12)).sum();
        assert!((s - 2.0 / 13.0).abs() < 1e-14);
        let s: f64 = r.1.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn tan_rule_integrates_lorentzian() {
        let s: f64 = tan_rule(257, 1.0).iter().map(|(v, w)| w / (1.0 + v * v)).sum();
        assert!((s - PI).abs() < 1e-12);
    }

    #[test]
    fn panel_rule_integrates_lorentzian() {
        let s: f64 = panel_rule(256, 1.0).iter().map(|(v, w)| w / (1.0 + v * v)).sum();
        assert!((s - PI).abs() < 1e-7, "{s}");
    }

    #[test]
    fn zero_integrand_is_exactly_zero() {
        let g = mb_integrate(|_, _| Complex64::new(0.0, 0.0), 1, &QuadConfig::default(), 1.0).unwrap();
        assert_eq!(g.value, Complex64::new(0.0, 0.0));
        assert_eq!(g.abs_err, 0.0);
    }

    #[test]
    fn separable_two_dimensional() {
        let cfg = QuadConfig { k_max: 6, v_nodes: 65, ..Default::default() };
        let h = |k: i64, v: f64| Complex64::new((-(k as f64).powi(2) / 4.0).exp() / (1.0 + v * v), 0.0);
        let one = mb_integrate(|k, v| h(k[0], v[0]), 1, &cfg, 1.0).unwrap();
        let two = mb_integrate(|k, v| h(k[0], v[0]) * h(k[1], v[1]), 2, &cfg, 1.0).unwrap();
        assert!((two.value - one.value * one.value).norm() < 1e-10);
    }

    #[test]
    fn config_validation() {
        let bad = QuadConfig { eps_schedule: vec![0.1, 0.2], ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = QuadConfig { k_max: 0, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}

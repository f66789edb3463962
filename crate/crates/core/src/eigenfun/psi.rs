use super::{EigenError, PointZ};
use crate::complexfield::gamma::{ln_double_power, parity, LogC};
use crate::complexfield::hypg::{hyp_g, HypParams};
use crate::complexfield::quad::{tan_rule, GVal, QuadConfig};
use crate::kernels::{exponents_b, kernel_gl4_regularized, ExponentSet, Gl4Gamma};
use crate::schemes::{DoubleIndex, GTScheme};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn real(x: f64) -> DoubleIndex {
    DoubleIndex::real(x)
}

fn check_rank(s: &GTScheme, n: usize, p: &PointZ) -> Result<(), EigenError> {
    if s.n() != n || p.n != n {
        return Err(EigenError::Rank(s.n()));
    }
    Ok(())
}

/// `Γ^C(1−σ_1+λ_11) z^{σ_1−1−λ_11}`.
pub fn psi_gl2(s: &GTScheme, p: &PointZ) -> Result<GVal, EigenError> {
    check_rank(s, 2, p)?;
    let z = p.get(2, 1);
    if z.norm() == 0.0 {
        return Err(EigenError::ZeroCoordinate { i: 2, j: 1 });
    }
    let a = s.sigma(1) - s.lambda(1, 1);
    let log = LogC::gamma_c(real(1.0) - a)?.mul(LogC(Some(ln_double_power(z, a - real(1.0)))));
    Ok(GVal::exact(log.value()))
}

/// Data of a rank-3 eigenfunction: top row and the two lower levels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gl3Data {
    pub sigma1: DoubleIndex,
    pub sigma2: DoubleIndex,
    pub l11: DoubleIndex,
    pub l2: [DoubleIndex; 2],
}

impl Gl3Data {
    fn of(s: &GTScheme) -> Self {
        Gl3Data { sigma1: s.sigma(1), sigma2: s.sigma(2), l11: s.lambda(1, 1), l2: [s.lambda(2, 1), s.lambda(2, 2)] }
    }

    fn hyp(&self) -> Result<HypParams, EigenError> {
        let l2 = self.l2[0] + self.l2[1];
        Ok(HypParams::new(vec![real(1.0) - self.sigma2, self.l11 - l2 + real(1.0)], self.l2.to_vec())?)
    }

    /// `Ψ(x, y, z)` with `x = z_21`, `y = z_31`, `z = z_32`.
    fn eval(&self, x: C, y: C, z: C, cfg: &QuadConfig) -> Result<GVal, EigenError> {
        for (c, i, j) in [(x, 2, 1), (y, 3, 1), (z, 3, 2)] {
            if c.norm() == 0.0 {
                return Err(EigenError::ZeroCoordinate { i, j });
            }
        }
        let l2 = self.l2[0] + self.l2[1];
        let sign = parity(self.l2[0].int_diff() + self.l2[1].int_diff());
        let mut log = LogC(Some(C::new(PI.ln(), 0.0)));
        for l in self.l2 {
            log = log.mul(LogC::gamma_c(l + real(1.0) - self.sigma1)?);
        }
        let pw = ln_double_power(x, l2 - self.l11 - real(1.0))
            + ln_double_power(y, self.sigma1 - real(1.0) - l2)
            + ln_double_power(z, self.sigma2 - real(1.0));
        log = log.mul(LogC(Some(pw)));
        let g = hyp_g(&self.hyp()?, x * z / y, cfg)?;
        let scale = log.value() * sign;
        Ok(GVal { value: scale * g.value, abs_err: scale.norm() * g.abs_err, flags: g.flags })
    }
}

/// Rank-3 eigenfunction as a single `2G2` at `W = z_21 z_32 / z_31`.
pub fn psi_gl3(s: &GTScheme, p: &PointZ, cfg: &QuadConfig) -> Result<GVal, EigenError> {
    check_rank(s, 3, p)?;
    Gl3Data::of(s).eval(p.get(2, 1), p.get(3, 1), p.get(3, 2), cfg)
}

/// Tensor grid for the three rank-4 integration variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gl4Grid {
    /// Integer parts run over `−k_max..=k_max`.
    pub k_max: i64,
    /// Nodes of the tangent-mapped rule per imaginary direction.
    pub v_nodes: usize,
    pub v_scale: f64,
    /// Regulator values for the finite-ε evaluation; empty means ε = 0 directly.
    pub eps_schedule: Vec<f64>,
}

impl Default for Gl4Grid {
    fn default() -> Self {
        Gl4Grid { k_max: 0, v_nodes: 4, v_scale: 1.0, eps_schedule: Vec::new() }
    }
}

impl Gl4Grid {
    pub fn node_count(&self) -> usize {
        ((2 * self.k_max + 1) as usize * self.v_nodes).pow(3)
    }
}

const V_SCALES: [f64; 3] = [0.93, 1.0, 1.09];

struct Gl4Node {
    inner: Gl3Data,
    weight: C,
    exps: ExponentSet,
}

/// Precomputed kernel values on a rank-4 grid at one regulator value.
pub struct Gl4Integrator {
    nodes: Vec<Gl4Node>,
    pub skipped: usize,
    pub flags: Vec<String>,
    quad: QuadConfig,
}

impl Gl4Integrator {
    pub fn new(s: &GTScheme, grid: &Gl4Grid, eps: f64, eps1: f64, cfg: &QuadConfig) -> Result<Self, EigenError> {
        if s.n() != 4 {
            return Err(EigenError::Rank(s.n()));
        }
        if grid.node_count() > 200_000 {
            return Err(EigenError::Budget(format!("{} rank-4 nodes requested", grid.node_count())));
        }
        let kappa = s.params.kappa;
        // Distinct scales keep the three node sets from sharing imaginary parts,
        // which would put lattice-integer coincidences into the inner 2G2.
        let axes: Vec<Vec<(i64, f64, f64)>> = V_SCALES
            .iter()
            .map(|m| {
                let rule = tan_rule(grid.v_nodes, grid.v_scale * m);
                (-grid.k_max..=grid.k_max)
                    .flat_map(|k| rule.iter().map(move |&(v, w)| (k, v, w / 2.0)).collect::<Vec<_>>())
                    .collect()
            })
            .collect();
        let mut nodes = Vec::new();
        let mut skipped = 0;
        let mut flags = Vec::new();
        for &(k11, v11, w11) in &axes[0] {
            for &(k21, v21, w21) in &axes[1] {
                for &(k22, v22, w22) in &axes[2] {
                    let g = Gl4Gamma {
                        g11: DoubleIndex::lattice(k11, kappa - 2.0, v11),
                        g21: DoubleIndex::lattice(k21, kappa - 1.0, v21),
                        g22: DoubleIndex::lattice(k22, kappa - 1.0, v22),
                    };
                    let kv = match kernel_gl4_regularized(&g, s, eps, eps1, cfg) {
                        Ok(kv) => kv,
                        Err(e) => {
                            skipped += 1;
                            if flags.len() < 8 {
                                flags.push(format!("node skipped: {e}"));
                            }
                            continue;
                        }
                    };
                    let value = kv.value();
                    if value == C::new(0.0, 0.0) {
                        continue;
                    }
                    let exps = exponents_b(&g.levels(), s)?;
                    let inner = Gl3Data { sigma1: s.sigma(2), sigma2: s.sigma(3), l11: g.g11, l2: [g.g21, g.g22] };
                    nodes.push(Gl4Node { inner, weight: value * (w11 * w21 * w22), exps });
                }
            }
        }
        Ok(Gl4Integrator { nodes, skipped, flags, quad: cfg.clone() })
    }

    pub fn eval(&self, p: &PointZ) -> Result<GVal, EigenError> {
        if p.n != 4 {
            return Err(EigenError::Rank(p.n));
        }
        let (xi, eta, zeta) = (p.get(2, 1), p.get(3, 1), p.get(4, 1));
        let mut total = C::new(0.0, 0.0);
        let mut err = 0.0;
        let mut flags = self.flags.clone();
        for node in &self.nodes {
            let phi = node.inner.eval(p.get(3, 2), p.get(4, 2), p.get(4, 3), &self.quad)?;
            let pw = ln_double_power(xi, node.exps.leading)
                + ln_double_power(eta, node.exps.b_i(3))
                + ln_double_power(zeta, node.exps.b_i(4));
            let f = node.weight * pw.exp();
            total += f * phi.value;
            err += f.norm() * phi.abs_err;
            for fl in phi.flags {
                if !flags.contains(&fl) {
                    flags.push(fl);
                }
            }
        }
        Ok(GVal { value: total, abs_err: err, flags })
    }
}

/// Rank-4 eigenfunction on a fixed grid; with a regulator schedule the values at
/// each ε are extrapolated polynomially to ε = 0.
pub fn psi_gl4(s: &GTScheme, p: &PointZ, grid: &Gl4Grid, cfg: &QuadConfig) -> Result<GVal, EigenError> {
    PsiEval::new(s, grid, cfg)?.eval(p)
}

/// A reusable evaluator for one scheme.
pub enum PsiEval {
    Gl2(GTScheme),
    Gl3(Box<Gl3Data>, QuadConfig),
    Gl4(Vec<(f64, Gl4Integrator)>),
}

impl PsiEval {
    pub fn new(s: &GTScheme, grid: &Gl4Grid, cfg: &QuadConfig) -> Result<Self, EigenError> {
        match s.n() {
            2 => Ok(PsiEval::Gl2(s.clone())),
            3 => Ok(PsiEval::Gl3(Box::new(Gl3Data::of(s)), cfg.clone())),
            4 => {
                let eps: Vec<f64> = if grid.eps_schedule.is_empty() { vec![0.0] } else { grid.eps_schedule.clone() };
                let ints = eps
                    .iter()
                    .map(|&e| Ok((e, Gl4Integrator::new(s, grid, e, e, cfg)?)))
                    .collect::<Result<_, EigenError>>()?;
                Ok(PsiEval::Gl4(ints))
            }
            n => Err(EigenError::Rank(n)),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            PsiEval::Gl2(_) => 2,
            PsiEval::Gl3(..) => 3,
            PsiEval::Gl4(_) => 4,
        }
    }

    pub fn eval(&self, p: &PointZ) -> Result<GVal, EigenError> {
        if p.n != self.rank() {
            return Err(EigenError::Rank(p.n));
        }
        match self {
            PsiEval::Gl2(s) => psi_gl2(s, p),
            PsiEval::Gl3(d, cfg) => d.eval(p.get(2, 1), p.get(3, 1), p.get(3, 2), cfg),
            PsiEval::Gl4(ints) => {
                if ints.len() == 1 {
                    return ints[0].1.eval(p);
                }
                let vals = ints.iter().map(|(e, i)| Ok((*e, i.eval(p)?))).collect::<Result<Vec<_>, EigenError>>()?;
                Ok(neville_at_zero(&vals))
            }
        }
    }

    /// Nodes dropped because the kernel could not be evaluated there.
    pub fn skipped_nodes(&self) -> usize {
        match self {
            PsiEval::Gl4(ints) => ints.iter().map(|i| i.1.skipped).sum(),
            _ => 0,
        }
    }
}

fn neville_at_zero(vals: &[(f64, GVal)]) -> GVal {
    let xs: Vec<f64> = vals.iter().map(|v| v.0).collect();
    let mut p: Vec<C> = vals.iter().map(|v| v.1.value).collect();
    let n = p.len();
    let mut prev = p[n - 1];
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i] * xs[i + m] - p[i + 1] * xs[i]) / (xs[i + m] - xs[i]);
        }
        if m == n - 2 {
            prev = p[0];
        }
    }
    let noise: f64 = vals.iter().map(|v| v.1.abs_err).fold(0.0, f64::max);
    let mut flags = vec![format!("extrapolated from ε ∈ {xs:?}")];
    flags.extend(vals.iter().flat_map(|v| v.1.flags.iter().cloned()));
    flags.dedup();
    GVal { value: p[0], abs_err: (p[0] - prev).norm() + noise, flags }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{make_scheme, ReprParams};

    fn gl3() -> GTScheme {
        let p = ReprParams::new(vec![1, 0, -2], 0.2, vec![0.5, -1.3, 0.7]).unwrap();
        make_scheme(vec![vec![1], vec![0, -1]], vec![vec![0.4], vec![1.1, -0.6]], p).unwrap()
    }

    #[test]
    fn gl2_is_a_power() {
        let p = ReprParams::new(vec![2, -1], 0.3, vec![0.4, -0.2]).unwrap();
        let s = make_scheme(vec![vec![1]], vec![vec![0.9]], p).unwrap();
        let a = PointZ::new(2).with(2, 1, C::new(0.7, 0.2));
        let b = PointZ::new(2).with(2, 1, C::new(1.4, 0.4));
        let e = s.sigma(1) - s.lambda(1, 1) - real(1.0);
        let ratio = psi_gl2(&s, &b).unwrap().value / psi_gl2(&s, &a).unwrap().value;
        assert!(
            (ratio
                - C::new(2f64.powf((e.hol + e.anti).re), 0.0) * C::new(0.0, ((e.hol + e.anti).im) * 2f64.ln()).exp())
            .norm()
                < 1e-12
        );
    }

    #[test]
    fn gl3_first_column_homogeneity() {
        let s = gl3();
        let mut p = PointZ::new(3);
        p.set(2, 1, C::new(0.9, 0.3));
        p.set(3, 1, C::new(-1.7, 0.6));
        p.set(3, 2, C::new(0.4, -0.5));
        let t = C::new(1.3, -0.4);
        let cfg = QuadConfig::default();
        let a = psi_gl3(&s, &p, &cfg).unwrap().value;
        let b = psi_gl3(&s, &p.scale_first_column(t), &cfg).unwrap().value;
        let e = s.sigma(1) - real(2.0) - s.lambda(1, 1);
        let want = a * ln_double_power(t, e).exp();
        assert!((b - want).norm() < 1e-11 * want.norm());
    }

    #[test]
    fn rank_is_checked() {
        let p = PointZ::new(2);
        assert!(matches!(psi_gl3(&gl3(), &p, &QuadConfig::default()), Err(EigenError::Rank(_))));
    }
}

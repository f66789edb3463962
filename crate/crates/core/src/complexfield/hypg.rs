//! The hypergeometric function of the complex field
//! `pG^C_p[a; b; z] = (1/2πi) Σ_k ∫ dx Π Γ^C(a_α+s) Π Γ^C(b_β−s) z^{−s}`,
//! `s = ((k+x)/2, (−k+x)/2)`, over a contour separating the two pole families.

use super::gamma::{double_power, GammaError, LogC};
use super::quad::gauss_legendre;
use super::quad::{GVal, QuadConfig, QuadError};
use crate::schemes::DoubleIndex;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

type C = Complex64;

fn c0() -> C {
    C::new(0.0, 0.0)
}

/// Parameter lists of `pG^C_p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypParams {
    pub a: Vec<DoubleIndex>,
    pub b: Vec<DoubleIndex>,
}

impl HypParams {
    pub fn new(a: Vec<DoubleIndex>, b: Vec<DoubleIndex>) -> Result<Self, QuadError> {
        if a.len() != b.len() || a.is_empty() {
            return Err(QuadError::Config(format!("need p = q ≥ 1, got p = {}, q = {}", a.len(), b.len())));
        }
        Ok(HypParams { a, b })
    }
    pub fn p(&self) -> usize {
        self.a.len()
    }
    /// Complex decay exponent `E = Σ(a+ā) + Σ(b+b̄) − 2p`; the integrand falls off like `R^E`.
    pub fn decay(&self) -> C {
        let s: C = self.a.iter().chain(self.b.iter()).map(|d| d.hol + d.anti).sum();
        s - 2.0 * self.p() as f64
    }
    /// Copy with `a_j` shifted by `d`.
    pub fn shift_a(&self, j: usize, d: DoubleIndex) -> Self {
        let mut o = self.clone();
        o.a[j] = o.a[j] + d;
        o
    }
    pub fn shift_b(&self, j: usize, d: DoubleIndex) -> Self {
        let mut o = self.clone();
        o.b[j] = o.b[j] + d;
        o
    }
    /// The integrand `Π Γ^C(a_α+s) Π Γ^C(b_β−s)` in log form.
    pub fn kernel(&self, s: DoubleIndex) -> Result<LogC, GammaError> {
        let mut acc = LogC::one();
        for a in &self.a {
            acc = acc.mul(LogC::gamma_c(*a + s)?);
        }
        for b in &self.b {
            acc = acc.mul(LogC::gamma_c(*b - s)?);
        }
        Ok(acc)
    }
}

/// `Σ_m (−1)^{mp} Π_l (num_l)_m / (m! Π_i (den_i)_m) w^m`, summed until negligible.
fn power_series(num: &[C], den: &[C], p: usize, w: C, max_terms: usize) -> Result<(C, bool), QuadError> {
    let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for m in 0..max_terms {
        let mf = m as f64;
        let mut ratio = w * sign / (mf + 1.0);
        for x in num {
            ratio *= *x + mf;
        }
        for d in den {
            let q = *d + mf;
            if q.norm() < 1e-300 {
                return Err(QuadError::Divergent("resonant parameters in residue series".into()));
            }
            ratio /= q;
        }
        term *= ratio;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            small += 1;
            if small >= 4 {
                return Ok((sum, true));
            }
        } else {
            small = 0;
        }
    }
    Ok((sum, false))
}

/// Residue-series evaluation: closing left for `|z| < 1`, right for `|z| > 1`.
pub fn hyp_g_series(p: &HypParams, z: C, max_terms: usize) -> Result<GVal, QuadError> {
    let n = p.p();
    let r = z.norm();
    if (r - 1.0).abs() < 1e-6 || r == 0.0 {
        return Err(QuadError::Divergent(format!("residue series needs |z| ≠ 1 and z ≠ 0, got |z| = {r}")));
    }
    let (left, right, w) = if r < 1.0 { (&p.a, &p.b, z) } else { (&p.b, &p.a, 1.0 / z) };
    let mut total = c0();
    let mut flags = Vec::new();
    for j in 0..n {
        let aj = left[j];
        let mut coef = LogC::one();
        for (i, ai) in left.iter().enumerate() {
            if i != j {
                coef = coef.mul(LogC::gamma_c(*ai - aj)?);
            }
        }
        for bl in right {
            coef = coef.mul(LogC::gamma_c(*bl + aj)?);
        }
        let num_h: Vec<C> = right.iter().map(|b| b.hol + aj.hol).collect();
        let den_h: Vec<C> = (0..n).filter(|&i| i != j).map(|i| 1.0 + aj.hol - left[i].hol).collect();
        let num_a: Vec<C> = right.iter().map(|b| b.anti + aj.anti).collect();
        let den_a: Vec<C> = (0..n).filter(|&i| i != j).map(|i| 1.0 + aj.anti - left[i].anti).collect();
        let (h, ok1) = power_series(&num_h, &den_h, n, w, max_terms)?;
        let (ha, ok2) = power_series(&num_a, &den_a, n, w.conj(), max_terms)?;
        if !(ok1 && ok2) {
            flags.push(format!("residue series truncated at {max_terms} terms"));
        }
        let pw = if r < 1.0 { double_power(z, aj)? } else { double_power(z, -aj)? };
        total += 2.0 * coef.value() * pw * h * ha;
    }
    let abs_err = if flags.is_empty() { 1e-14 * total.norm() } else { f64::INFINITY };
    Ok(GVal { value: total, abs_err, flags })
}

/// A pole of the integrand in the `x`-plane of one lattice slice.
#[derive(Clone, Copy, Debug)]
struct Pole {
    x: C,
    left: bool,
}

/// Outside `||z| − 1| < SERIES_BAND` the residue series is used; inside it the
/// contour quadrature, whose `t`-tails carry the slowly oscillating `|z|^{−it}`.
pub const SERIES_BAND: f64 = 1e-4;

const MARGIN: f64 = 0.3;
const WIDTH: f64 = 0.2;
/// The tails stop once `t^{E+1}` has fallen by `e^{−TAIL_LOG_RANGE}`.
const TAIL_LOG_RANGE: f64 = 40.0;
const TAIL_PANEL: f64 = 1.5;

fn slice_poles(p: &HypParams, k: i64, lo: f64, hi: f64) -> Vec<Pole> {
    let mut out = Vec::new();
    for a in &p.a {
        let d = a.int_diff();
        let base = -(a.hol + a.anti) - ((k + d).abs() as f64);
        let mut j = 0.0;
        while (base - 2.0 * j).re > lo {
            if (base - 2.0 * j).re < hi {
                out.push(Pole { x: base - 2.0 * j, left: true });
            }
            j += 1.0;
        }
    }
    for b in &p.b {
        let d = b.int_diff();
        let base = (b.hol + b.anti) + ((k - d).abs() as f64);
        let mut j = 0.0;
        while (base + 2.0 * j).re < hi {
            if (base + 2.0 * j).re > lo {
                out.push(Pole { x: base + 2.0 * j, left: false });
            }
            j += 1.0;
        }
    }
    out
}

/// Contour `x(t) = δ + Σ bumps + it` for one slice.
struct Contour {
    delta: f64,
    bumps: Vec<(f64, f64)>,
}

impl Contour {
    fn re(&self, t: f64) -> f64 {
        self.delta + self.bumps.iter().map(|(tp, a)| a * (-((t - tp) / WIDTH).powi(2)).exp()).sum::<f64>()
    }
    fn dre(&self, t: f64) -> f64 {
        self.bumps
            .iter()
            .map(|(tp, a)| a * (-2.0 * (t - tp) / (WIDTH * WIDTH)) * (-((t - tp) / WIDTH).powi(2)).exp())
            .sum()
    }
}

fn build_contour(p: &HypParams, k: i64) -> Result<(Contour, Vec<f64>), QuadError> {
    let amax =
        p.a.iter().map(|a| -(a.hol + a.anti).re - ((k + a.int_diff()).abs() as f64)).fold(f64::NEG_INFINITY, f64::max);
    let bmin =
        p.b.iter().map(|b| (b.hol + b.anti).re + ((k - b.int_diff()).abs() as f64)).fold(f64::INFINITY, f64::min);
    let delta = (amax + bmin) / 2.0;
    let poles = slice_poles(p, k, delta - 4.0, delta + 4.0);
    let mut bumps = Vec::new();
    for q in &poles {
        let need = if q.left { q.x.re + MARGIN - delta } else { q.x.re - MARGIN - delta };
        if (q.left && need > 0.0) || (!q.left && need < 0.0) {
            bumps.push((q.x.im, need));
        }
    }
    let c = Contour { delta, bumps };
    for q in &poles {
        let gap = c.re(q.x.im) - q.x.re;
        let ok = if q.left { gap >= MARGIN / 2.0 } else { gap <= -MARGIN / 2.0 };
        if !ok {
            return Err(QuadError::Pinched(format!("slice k = {k}, pole at x = {}", q.x)));
        }
    }
    let near: Vec<f64> = poles.iter().filter(|q| (c.re(q.x.im) - q.x.re).abs() < 2.5).map(|q| q.x.im).collect();
    Ok((c, near))
}

/// Composite rule for `∫_ℝ dt`: refined panels near pole heights, graded panels
/// outward, and tails `|t| = T e^v` on which the integrand `~ t^{E+1}` becomes a
/// smooth decaying exponential in `v` (a power map leaves `t^{i Im E}` singular).
fn slice_rule(near: &[f64], scale: f64, decay: f64) -> Vec<(f64, f64)> {
    const ORDER: usize = 12;
    let gl = gauss_legendre(ORDER);
    let t1 = 4.0 * scale + 60.0 + near.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let width = |t: f64| {
        let d = near.iter().fold(f64::INFINITY, |m, tp| m.min((t - tp).abs()));
        if d < 0.6 {
            0.05
        } else if d < 1.5 {
            0.25
        } else {
            (0.25 * t.abs()).max(0.5)
        }
    };
    let mut out = Vec::new();
    let mut lo = -t1;
    while lo < t1 {
        let hi = (lo + width(lo).min(width(lo + 0.25)).min(width(lo + 0.05))).min(t1);
        let (c, h) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        for (x, w) in gl.0.iter().zip(gl.1.iter()) {
            out.push((c + h * x, w * h));
        }
        lo = hi;
    }
    let rate = (-decay - 1.0).max(0.25);
    let vmax = (TAIL_LOG_RANGE / rate).min(200.0);
    let panels = (vmax / TAIL_PANEL).ceil() as usize;
    let h = vmax / panels as f64 / 2.0;
    for i in 0..panels {
        let c = (2 * i + 1) as f64 * h;
        for (x, w) in gl.0.iter().zip(gl.1.iter()) {
            let t = t1 * (c + h * x).exp();
            out.push((t, w * h * t));
            out.push((-t, w * h * t));
        }
    }
    out
}

/// `(1/2πi) ∫ dx K z^{−s}` over one slice.
fn slice_integral(p: &HypParams, k: i64, z: C) -> Result<C, QuadError> {
    let (contour, near) = build_contour(p, k)?;
    let rule = slice_rule(&near, k.abs() as f64, p.decay().re);
    let mut acc = c0();
    for (t, w) in rule {
        let x = C::new(contour.re(t), t);
        let s = DoubleIndex::new((k as f64 + x) / 2.0, (-(k as f64) + x) / 2.0);
        let kv = p.kernel(s)?;
        let Some(lk) = kv.0 else { continue };
        let zl = if z == C::new(1.0, 0.0) { c0() } else { super::gamma::ln_double_power(z, -s) };
        let val = (lk + zl).exp() * C::new(contour.dre(t), 1.0);
        if !val.re.is_finite() || !val.im.is_finite() {
            return Err(QuadError::NonFinite { k: vec![k], v: vec![t] });
        }
        acc += val * w;
    }
    Ok(acc / (2.0 * PI * C::i()))
}

/// Least-squares fit `S(K) ≈ c_0 + Σ_{φ,e} c_{φ,e} e^{iKφ} (K/K_ref)^e`; returns `c_0`.
fn extrapolate(ks: &[i64], sums: &[C], exps: &[C], phases: &[f64], kref: f64) -> Option<C> {
    let mut cols: Vec<(f64, C)> = Vec::new();
    for &ph in phases {
        for &e in exps {
            cols.push((ph, e));
        }
    }
    let m = cols.len() + 1;
    if ks.len() < m + 2 {
        return None;
    }
    let row = |kk: i64| -> Vec<C> {
        let mut r = vec![C::new(1.0, 0.0)];
        for (ph, e) in &cols {
            r.push(C::from_polar(1.0, kk as f64 * ph) * (e * (kk as f64 / kref).ln()).exp());
        }
        r
    };
    let mut ata = vec![vec![c0(); m + 1]; m];
    for (kk, s) in ks.iter().zip(sums) {
        let r = row(*kk);
        for i in 0..m {
            for j in 0..m {
                ata[i][j] += r[i].conj() * r[j];
            }
            ata[i][m] += r[i].conj() * s;
        }
    }
    for col in 0..m {
        let piv = (col..m).max_by(|&a, &b| ata[a][col].norm().partial_cmp(&ata[b][col].norm()).unwrap())?;
        ata.swap(col, piv);
        let d = ata[col][col];
        if d.norm() == 0.0 {
            return None;
        }
        for r in 0..m {
            if r != col {
                let f = ata[r][col] / d;
                for c in col..=m {
                    let v = ata[col][c];
                    ata[r][c] -= f * v;
                }
            }
        }
    }
    Some(ata[0][m] / ata[0][0])
}

/// Tail phases of the partial sums: slices `±k` carry `(−1)^{kp} e^{∓ik arg z}` asymptotically.
fn tail_phases(p: usize, z: C) -> Vec<f64> {
    let th = z.arg();
    let base = if p % 2 == 1 { PI } else { 0.0 };
    let norm = |x: f64| {
        let y = x.rem_euclid(2.0 * PI);
        if y > PI {
            y - 2.0 * PI
        } else {
            y
        }
    };
    let mut out = vec![norm(base - th)];
    let other = norm(base + th);
    if (other - out[0]).abs() > 1e-9 {
        out.push(other);
    }
    out
}

/// Contour quadrature with Richardson extrapolation in the slice cutoff.
pub fn hyp_g_quad(p: &HypParams, z: C, cfg: &QuadConfig) -> Result<GVal, QuadError> {
    cfg.validate()?;
    let e = p.decay();
    if e.re >= -2.0 && (z.norm() - 1.0).abs() < 1e-12 {
        return Err(QuadError::Divergent(format!("decay exponent Re E = {:.3} ≥ −2 at |z| = 1", e.re)));
    }
    let kmax = cfg.k_max.max(8);
    let slices: Vec<Result<C, QuadError>> = (-kmax..=kmax).into_par_iter().map(|k| slice_integral(p, k, z)).collect();
    let vals: Vec<C> = slices.into_iter().collect::<Result<_, _>>()?;
    let at = |k: i64| vals[(k + kmax) as usize];
    let mut partial = Vec::with_capacity(kmax as usize + 1);
    let mut s = at(0);
    partial.push(s);
    for k in 1..=kmax {
        s += at(k) + at(-k);
        partial.push(s);
    }
    let mut flags = Vec::new();
    if z.norm().ln().abs() > 10.0 * SERIES_BAND {
        flags.push("oscillatory t-tails: quadrature off the unit circle is unreliable".into());
    }
    let phases = tail_phases(p.p(), z);
    let ks: Vec<i64> = (kmax / 2..=kmax).collect();
    let sums: Vec<C> = ks.iter().map(|&k| partial[k as usize]).collect();
    let exps = |n: usize| -> Vec<C> { (0..n).map(|j| e + 2.0 - j as f64).collect() };
    let kref = kmax as f64;
    let nexp = if phases.len() > 1 { 4 } else { 5 };
    let hi = extrapolate(&ks, &sums, &exps(nexp), &phases, kref);
    let lo = extrapolate(&ks, &sums, &exps(nexp - 1), &phases, kref);
    let (value, abs_err) = match (hi, lo) {
        (Some(h), Some(l)) => (h, (h - l).norm()),
        _ => {
            flags.push("extrapolation failed; returning the partial sum".into());
            (s, (at(kmax).norm() + at(-kmax).norm()) * kmax as f64)
        }
    };
    if abs_err > cfg.tail_tol * value.norm().max(1e-300) {
        flags.push(format!("extrapolation error {abs_err:.2e} above tail_tol"));
    }
    Ok(GVal { value, abs_err, flags })
}

/// Right-hand side of the even-`p`, `z = 1` relation expressing `G` through the
/// `G(a_j − e)`; used to continue `G` into the region where the integral diverges.
fn continue_even_unity(p: &HypParams, cfg: &QuadConfig, depth: usize) -> Result<GVal, QuadError> {
    let n = p.p();
    let sa: C = p.a.iter().map(|a| a.hol).sum();
    let sb: C = p.b.iter().map(|b| b.hol).sum();
    let cst = sa + sb - n as f64 + 1.0;
    if cst.norm() < 1e-9 {
        return Err(QuadError::Divergent("continuation coefficient vanishes".into()));
    }
    let mut total = c0();
    let mut err = 0.0;
    let mut flags = vec![format!("continued through the even-p unit-argument relation (depth {})", depth + 1)];
    for j in 0..n {
        let aj = p.a[j].hol;
        let mut coef = aj;
        for b in &p.b {
            coef *= b.hol + aj - 1.0;
        }
        for (i, ai) in p.a.iter().enumerate() {
            if i != j {
                let d = ai.hol - aj;
                if d.norm() < 1e-12 {
                    return Err(QuadError::Divergent("coinciding a-parameters in continuation".into()));
                }
                coef /= d;
            }
        }
        let g = hyp_g_unity(&p.shift_a(j, -DoubleIndex::e()), cfg, depth + 1)?;
        total -= coef * g.value / cst;
        err += (coef / cst).norm() * g.abs_err;
        flags.extend(g.flags);
    }
    flags.sort();
    flags.dedup();
    Ok(GVal { value: total, abs_err: err, flags })
}

/// Even-`p` parameter sets with `Re E > −CONTINUE_BELOW` at `z = 1` are continued
/// rather than integrated, since the `k`-tail converges too slowly there.
const CONTINUE_BELOW: f64 = 2.5;

fn hyp_g_unity(p: &HypParams, cfg: &QuadConfig, depth: usize) -> Result<GVal, QuadError> {
    let re = p.decay().re;
    if re >= -2.0 || (p.p().is_multiple_of(2) && re > -CONTINUE_BELOW) {
        if !p.p().is_multiple_of(2) || depth >= 4 {
            return Err(QuadError::Divergent(format!("Re E = {:.3} too large at z = 1", p.decay().re)));
        }
        return continue_even_unity(p, cfg, depth);
    }
    hyp_g_quad(p, C::new(1.0, 0.0), cfg)
}

/// `pG^C_p[a; b; z]`: residue series away from the unit circle, contour
/// quadrature on it; at `z = 1` with even `p` and weak decay, the value is
/// continued analytically in the parameters.
pub fn hyp_g(p: &HypParams, z: C, cfg: &QuadConfig) -> Result<GVal, QuadError> {
    let r = z.norm();
    if (r - 1.0).abs() >= SERIES_BAND {
        return hyp_g_series(p, z, 2_000_000);
    }
    if (z - 1.0).norm() < 1e-14 {
        return hyp_g_unity(p, cfg, 0);
    }
    hyp_g_quad(p, z, cfg)
}

/// Finite-ε evaluation: parameters flagged in `mask_a`/`mask_b` are shifted by
/// `(ε/2, ε/2)` for each ε of the schedule, then extrapolated polynomially to ε = 0.
pub fn hyp_g_regularized(
    p: &HypParams,
    mask_a: &[bool],
    mask_b: &[bool],
    z: C,
    cfg: &QuadConfig,
) -> Result<(GVal, Vec<(f64, GVal)>), QuadError> {
    cfg.validate()?;
    let mut samples = Vec::new();
    for &eps in &cfg.eps_schedule {
        let mut q = p.clone();
        for (j, &m) in mask_a.iter().enumerate() {
            if m {
                q.a[j] = q.a[j] + DoubleIndex::real(eps / 2.0);
            }
        }
        for (j, &m) in mask_b.iter().enumerate() {
            if m {
                q.b[j] = q.b[j] + DoubleIndex::real(eps / 2.0);
            }
        }
        samples.push((eps, hyp_g(&q, z, cfg)?));
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let ys: Vec<C> = samples.iter().map(|s| s.1.value).collect();
    let full = neville_at_zero(&xs, &ys);
    let fewer = if xs.len() > 1 { neville_at_zero(&xs[1..], &ys[1..]) } else { full };
    let quad_err: f64 = samples.iter().map(|s| s.1.abs_err).fold(0.0, f64::max);
    let mut flags: Vec<String> = samples.iter().flat_map(|s| s.1.flags.clone()).collect();
    flags.sort();
    flags.dedup();
    Ok((GVal { value: full, abs_err: (full - fewer).norm() + quad_err, flags }, samples))
}

/// Polynomial interpolation through `(x_i, y_i)` evaluated at 0.
pub fn neville_at_zero(xs: &[f64], ys: &[C]) -> C {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i] * xs[i + m] - p[i + 1] * xs[i]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn di(h: (f64, f64), a: (f64, f64)) -> DoubleIndex {
        DoubleIndex::new(C::new(h.0, h.1), C::new(a.0, a.1))
    }

    fn sample() -> HypParams {
        HypParams::new(
            vec![di((0.3, 0.2), (-0.7, 0.2)), di((0.1, -0.4), (0.1, -0.4))],
            vec![di((0.25, 0.1), (0.25, 0.1)), di((1.15, 0.3), (0.15, 0.3))],
        )
        .unwrap()
    }

    /// `1G1[a; b; z] = 2 Γ^C(a+b) z^{a} (1+z)^{−(a+b)}` summed from the residue series.
    fn one_g_one(a: DoubleIndex, b: DoubleIndex, z: C) -> C {
        2.0 * crate::complexfield::gamma_c(a + b).unwrap()
            * double_power(z, a).unwrap()
            * double_power(1.0 + z, -(a + b)).unwrap()
    }

    #[test]
    fn closed_form_p1_on_and_off_the_circle() {
        let a = di((0.65, 0.2), (-0.35, 0.2));
        let b = di((0.15, -0.3), (-0.85, -0.3));
        let p = HypParams::new(vec![a], vec![b]).unwrap();
        let cfg = QuadConfig { k_max: 60, ..Default::default() };
        for z in [
            C::new(1.0, 0.0),
            C::from_polar(1.0, 0.7),
            C::from_polar(1.0005, -2.0),
            C::from_polar(0.6, 0.4),
            C::from_polar(1.5, -2.0),
        ] {
            let exact = one_g_one(a, b, z);
            let g = hyp_g(&p, z, &cfg).unwrap();
            assert!((g.value - exact).norm() < 1e-7 * exact.norm(), "z = {z}: {} vs {exact}", g.value);
            assert!(g.abs_err < 1e-6 * exact.norm());
        }
    }

    /// `2G2` at unity from Gauss sums, valid for `Re(Σa + Σb) < 1` in both sectors.
    fn two_g_two_unity(p: &HypParams) -> C {
        use crate::complexfield::gamma::ln_gamma;
        let gauss = |a: C, b: C, c: C| (ln_gamma(c) + ln_gamma(c - a - b) - ln_gamma(c - a) - ln_gamma(c - b)).exp();
        let mut tot = c0();
        for j in 0..2 {
            let (aj, ai) = (p.a[j], p.a[1 - j]);
            let coef = crate::complexfield::gamma_c(ai - aj).unwrap()
                * crate::complexfield::gamma_c(p.b[0] + aj).unwrap()
                * crate::complexfield::gamma_c(p.b[1] + aj).unwrap();
            let h = gauss(p.b[0].hol + aj.hol, p.b[1].hol + aj.hol, 1.0 + aj.hol - ai.hol);
            let ha = gauss(p.b[0].anti + aj.anti, p.b[1].anti + aj.anti, 1.0 + aj.anti - ai.anti);
            tot += 2.0 * coef * h * ha;
        }
        tot
    }

    #[test]
    fn gauss_sum_oracle_at_unity() {
        let sets = [
            // straight contour per slice
            (
                vec![di((0.3, 0.2), (-0.7, 0.2)), di((0.1, -0.4), (0.1, -0.4))],
                vec![di((0.05, 0.1), (0.05, 0.1)), di((0.15, 0.3), (-0.85, 0.3))],
            ),
            // crossed pole families, bumped contour
            (
                vec![di((0.3, 0.2), (-0.7, 0.2)), di((-0.4, -0.4), (-0.4, -0.4))],
                vec![di((-0.25, 0.1), (-0.25, 0.1)), di((0.15, -0.3), (-0.85, -0.3))],
            ),
            // divergent integral, reached by continuation
            (
                vec![di((0.35, 0.2), (0.35, 0.2)), di((0.1, -0.4), (0.1, -0.4))],
                vec![di((0.2, 0.1), (0.2, 0.1)), di((1.2, 0.3), (0.2, 0.3))],
            ),
        ];
        let cfg = QuadConfig::default();
        for (a, b) in sets {
            let p = HypParams::new(a, b).unwrap();
            let exact = two_g_two_unity(&p);
            let g = hyp_g(&p, C::new(1.0, 0.0), &cfg).unwrap();
            assert!((g.value - exact).norm() < 2e-7 * exact.norm(), "E = {}: {} vs {exact}", p.decay(), g.value);
        }
    }

    #[test]
    fn divergent_odd_order_is_rejected() {
        let p = HypParams::new(vec![di((0.4, 0.0), (0.4, 0.0))], vec![di((0.4, 0.0), (0.4, 0.0))]).unwrap();
        assert!(matches!(hyp_g(&p, C::new(1.0, 0.0), &QuadConfig::default()), Err(QuadError::Divergent(_))));
    }

    #[test]
    fn a_list_permutation_invariance() {
        let p = sample();
        let mut q = p.clone();
        q.a.swap(0, 1);
        let z = C::from_polar(0.5, 1.0);
        let x = hyp_g(&p, z, &QuadConfig::default()).unwrap().value;
        let y = hyp_g(&q, z, &QuadConfig::default()).unwrap().value;
        assert!((x - y).norm() < 1e-13 * x.norm());
    }

    #[test]
    fn neville_recovers_polynomial() {
        let xs = [0.2, 0.1, 0.05];
        let ys: Vec<C> = xs.iter().map(|x| C::new(1.0 + 2.0 * x - 3.0 * x * x, 0.0)).collect();
        assert!((neville_at_zero(&xs, &ys) - 1.0).norm() < 1e-14);
    }
}

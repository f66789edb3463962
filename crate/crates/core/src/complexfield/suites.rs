//! Property suites for `Γ^C`, the contiguous relations of `pG^C_p`, and the
//! finite-ε Barnes instance.

use super::gamma::{gamma_c, GammaError};
use super::hypg::{hyp_g, HypParams};
use super::quad::{QuadConfig, QuadError};
use crate::report::{rel_residual, ResidualReport};
use crate::schemes::{DoubleIndex, Sector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

type C = Complex64;

/// `4π`: ratio of the scalar-product display with the lattice sum to the one with
/// the closed form (`64π⁷ / 16π⁶`).
pub const BARNES_GOLDEN: f64 = 4.0 * PI;

fn unit(sector: Sector) -> DoubleIndex {
    match sector {
        Sector::Hol => DoubleIndex::e(),
        Sector::Anti => DoubleIndex::ebar(),
    }
}

/// Each unit shift of one parameter in the antiholomorphic sector flips the sign
/// of the corresponding `G` term relative to the holomorphic formula.
fn shift_sign(sector: Sector) -> f64 {
    if sector.is_anti() {
        -1.0
    } else {
        1.0
    }
}

fn random_lattice(rng: &mut ChaCha8Rng, m: i64, off: (f64, f64), beta: f64) -> DoubleIndex {
    DoubleIndex::lattice(rng.gen_range(-m..=m), rng.gen_range(off.0..off.1), rng.gen_range(-beta..beta))
}

/// Recurrence, reflection and lattice unitarity of `Γ^C` over `points` random lattice points.
pub fn check_gamma_properties(points: usize, seed: u64, tol: f64) -> ResidualReport {
    let start = Instant::now();
    let mut rep = ResidualReport::new("gamma-c");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 4];
    let mut rejected = 0usize;
    let mut done = 0usize;
    while done < points {
        let mu = random_lattice(&mut rng, 8, (-6.0, 6.0), 12.0);
        let eval = || -> Result<[f64; 4], GammaError> {
            let g = gamma_c(mu)?;
            let r1 = rel_residual(gamma_c(mu + DoubleIndex::e())?, mu.hol * g, 1e-300);
            let r2 = rel_residual(gamma_c(mu + DoubleIndex::ebar())?, -mu.anti * g, 1e-300);
            let sign = if mu.int_diff() % 2 == 0 { 1.0 } else { -1.0 };
            let r3 = rel_residual(g * gamma_c(DoubleIndex::real(1.0) - mu)?, C::new(sign, 0.0), 1e-300);
            let a = mu.int_diff();
            let b: f64 = rng_free_imag(mu);
            let nu = DoubleIndex::lattice(a, 1.0, b);
            let r4 = (gamma_c(nu)?.norm() - 1.0).abs();
            Ok([r1, r2, r3, r4])
        };
        match eval() {
            Ok(r) => {
                for i in 0..4 {
                    worst[i] = worst[i].max(r[i]);
                }
                done += 1;
            }
            Err(_) => rejected += 1,
        }
    }
    let notes = format!("{points} lattice points");
    rep.push("recurrence-hol", worst[0], tol, notes.clone());
    rep.push("recurrence-anti", worst[1], tol, notes.clone());
    rep.push("reflection", worst[2], tol, notes.clone());
    rep.push("unitarity", worst[3], tol, notes);
    if rejected > 0 {
        rep.warnings.push(format!("{rejected} samples at Γ^C poles resampled"));
    }
    rep.with_config(serde_json::json!({ "points": points, "seed": seed, "tol": tol })).timed(start)
}

/// Imaginary part `b` of `μ = ((a+ib)/2, (−a+ib)/2)` reused for the unitarity sample.
fn rng_free_imag(mu: DoubleIndex) -> f64 {
    2.0 * mu.hol.im
}

fn g_eval(a: &[DoubleIndex], b: &[DoubleIndex], z: C, cfg: &QuadConfig) -> Result<(C, f64), QuadError> {
    let g = hyp_g(&HypParams::new(a.to_vec(), b.to_vec())?, z, cfg)?;
    Ok((g.value, g.abs_err))
}

/// Linear combination `Σ c_i G_i` with accumulated quadrature error.
struct Combo {
    value: C,
    err: f64,
    scale: f64,
}

impl Combo {
    fn new() -> Self {
        Combo { value: C::new(0.0, 0.0), err: 0.0, scale: 0.0 }
    }
    fn add(&mut self, coef: C, g: (C, f64)) {
        let t = coef * g.0;
        self.value += t;
        self.err += coef.norm() * g.1;
        self.scale = self.scale.max(t.norm());
    }
}

fn record(rep: &mut ResidualReport, id: String, lhs: Combo, rhs: Combo, tol: f64) {
    let r = rel_residual(lhs.value, rhs.value, 1.0);
    let notes = format!(
        "lhs {:.6e}, rhs {:.6e}, largest term {:.3e}, quadrature error {:.1e}",
        lhs.value,
        rhs.value,
        lhs.scale.max(rhs.scale),
        lhs.err + rhs.err
    );
    rep.push(id, r, tol, notes);
}

/// Random `pG^C_p` parameters on the lattice with `Re E` in `[−7, −3]`,
/// resampled until `G` evaluates at `z` without pinching or coinciding `a`'s.
pub fn random_hyp_params(p: usize, z: C, seed: u64, cfg: &QuadConfig) -> Result<(HypParams, usize), QuadError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..200 {
        let mut draw =
            |n: usize| -> Vec<DoubleIndex> { (0..n).map(|_| random_lattice(&mut rng, 1, (-0.2, 1.0), 3.0)).collect() };
        let (a, b) = (draw(p), draw(p));
        let params = HypParams::new(a, b)?;
        let e = params.decay().re;
        let distinct = (0..p).all(|i| (0..i).all(|j| (params.a[i].hol - params.a[j].hol).norm() > 0.05));
        if !(-7.0..=-3.0).contains(&e) || !distinct {
            continue;
        }
        if hyp_g(&params, z, cfg).is_ok() && shifted_sets_evaluate(&params, z, cfg) {
            return Ok((params, attempt));
        }
    }
    Err(QuadError::Config("no admissible random parameters in 200 draws".into()))
}

/// Whether every unit shift used by the contiguous relations (`a_j − e`, `b_1 ∓ e`
/// in each sector) can be evaluated at `z`.
fn shifted_sets_evaluate(params: &HypParams, z: C, cfg: &QuadConfig) -> bool {
    let (a, b) = (&params.a, &params.b);
    Sector::BOTH.into_iter().all(|sector| {
        let e = unit(sector);
        let a_shifts = (0..a.len()).map(|j| {
            let mut aa = a.clone();
            aa[j] = aa[j] - e;
            (aa, b.clone())
        });
        let b_shifts = [-1.0, 1.0].into_iter().map(|s| {
            let mut bb = b.clone();
            bb[0] = if s < 0.0 { bb[0] - e } else { bb[0] + e };
            (a.clone(), bb)
        });
        a_shifts.chain(b_shifts).all(|(aa, bb)| g_eval(&aa, &bb, z, cfg).is_ok())
    })
}

/// Generic contiguous relations for `pG^C_p` in both sectors: `rel_1`, `rel_2`
/// and `rel_3` at any `z`, plus `rel_4` when `p` is even and `z = 1`.
pub fn check_contiguous(params: &HypParams, z: C, cfg: &QuadConfig, tol: f64) -> ResidualReport {
    let start = Instant::now();
    let mut rep = ResidualReport::new(format!("contiguous-p{}", params.p()));
    for sector in Sector::BOTH {
        let tag = if sector.is_anti() { "anti" } else { "hol" };
        if let Err(e) = contiguous_sector(params, z, cfg, tol, sector, tag, &mut rep) {
            rep.push_error(format!("{tag}/evaluation"), e);
        }
    }
    rep.with_config(serde_json::json!({ "p": params.p(), "z": [z.re, z.im], "quad": cfg, "tol": tol })).timed(start)
}

fn contiguous_sector(
    params: &HypParams,
    z: C,
    cfg: &QuadConfig,
    tol: f64,
    sector: Sector,
    tag: &str,
    rep: &mut ResidualReport,
) -> Result<(), QuadError> {
    let p = params.p();
    let (a, b) = (&params.a, &params.b);
    let zs = if sector.is_anti() { z.conj() } else { z };
    let sg = shift_sign(sector);
    let e = unit(sector);
    let av: Vec<C> = a.iter().map(|x| x.get(sector)).collect();
    let bv: Vec<C> = b.iter().map(|x| x.get(sector)).collect();
    for (j, aj) in av.iter().enumerate() {
        for (i, ai) in av.iter().enumerate() {
            if i != j && (ai - aj).norm() < 1e-9 {
                return Err(QuadError::Config("coinciding a-parameters".into()));
            }
        }
    }
    let g0 = g_eval(a, b, z, cfg)?;
    let mut ga = Vec::new();
    for j in 0..p {
        let mut aa = a.clone();
        aa[j] = aa[j] - e;
        ga.push(g_eval(&aa, b, z, cfg)?);
    }
    let denom = |j: usize| -> C { (0..p).filter(|&i| i != j).map(|i| av[i] - av[j]).product() };
    let pb = |j: usize, from: usize| -> C { bv[from..].iter().map(|bb| bb + av[j] - 1.0).product() };
    let fsign = if p.is_multiple_of(2) { -1.0 } else { 1.0 };

    let mut lhs = Combo::new();
    lhs.add(1.0 + fsign * zs, g0);
    let mut rhs = Combo::new();
    for j in 0..p {
        rhs.add(sg * zs * pb(j, 0) / denom(j), ga[j]);
    }
    record(rep, format!("{tag}/rel_1"), lhs, rhs, tol);

    let mut bb = b.clone();
    bb[0] = bb[0] - e;
    let gbm = g_eval(a, &bb, z, cfg)?;
    let mut lhs = Combo::new();
    lhs.add(C::new(sg, 0.0), gbm);
    let mut rhs = Combo::new();
    for j in 0..p {
        rhs.add(sg * zs * pb(j, 1) / denom(j), ga[j]);
    }
    record(rep, format!("{tag}/rel_2"), lhs, rhs, tol);

    let mut bb = b.clone();
    bb[0] = bb[0] + e;
    let gbp = g_eval(a, &bb, z, cfg)?;
    let sab: C = av.iter().sum::<C>() + bv.iter().sum::<C>();
    let mut lhs = Combo::new();
    lhs.add(1.0 + fsign * (sab - p as f64 + 2.0) * zs, g0);
    let mut rhs = Combo::new();
    rhs.add(-sg * (1.0 + fsign * zs), gbp);
    for j in 0..p {
        rhs.add(sg * zs * (bv[0] + av[j] + 1.0) * pb(j, 0) / denom(j), ga[j]);
    }
    record(rep, format!("{tag}/rel_3"), lhs, rhs, tol);

    if p.is_multiple_of(2) && (z - 1.0).norm() < 1e-14 {
        let mut lhs = Combo::new();
        lhs.add(sab - p as f64 + 1.0, g0);
        let mut rhs = Combo::new();
        for j in 0..p {
            rhs.add(-sg * av[j] * pb(j, 0) / denom(j), ga[j]);
        }
        record(rep, format!("{tag}/rel_4"), lhs, rhs, tol);
    }
    Ok(())
}

/// Parameters of the `4G4` at unity in the gl_4 kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct FourGFourParams {
    pub l2: [DoubleIndex; 2],
    pub l3: [DoubleIndex; 3],
    pub g11: DoubleIndex,
    pub g2: [DoubleIndex; 2],
}

impl FourGFourParams {
    pub fn hyp(&self) -> Result<HypParams, QuadError> {
        let one = DoubleIndex::real(1.0);
        HypParams::new(
            vec![self.l2[0], self.l2[1], self.g2[0], self.g2[1]],
            vec![one - self.l3[0], one - self.l3[1], one - self.l3[2], -self.g11],
        )
    }
}

/// The five `4G4` relations, written in the gl_4 variables, in both sectors.
/// `rel_4` and `rel_5` are checked for each `i = 1, 2, 3`.
pub fn check_4g4_relations(q: &FourGFourParams, cfg: &QuadConfig, tol: f64) -> ResidualReport {
    let start = Instant::now();
    let mut rep = ResidualReport::new("4g4-relations");
    for sector in Sector::BOTH {
        let tag = if sector.is_anti() { "anti" } else { "hol" };
        if let Err(e) = four_g_four_sector(q, cfg, tol, sector, tag, &mut rep) {
            rep.push_error(format!("{tag}/evaluation"), e);
        }
    }
    rep.with_config(serde_json::json!({ "quad": cfg, "tol": tol })).timed(start)
}

fn four_g_four_sector(
    q: &FourGFourParams,
    cfg: &QuadConfig,
    tol: f64,
    sector: Sector,
    tag: &str,
    rep: &mut ResidualReport,
) -> Result<(), QuadError> {
    let e = unit(sector);
    let sg = shift_sign(sector);
    let one = C::new(1.0, 0.0);
    let l2: Vec<C> = q.l2.iter().map(|x| x.get(sector)).collect();
    let l3: Vec<C> = q.l3.iter().map(|x| x.get(sector)).collect();
    let g2: Vec<C> = q.g2.iter().map(|x| x.get(sector)).collect();
    let g11 = q.g11.get(sector);
    let eval = |f: &dyn Fn(&mut FourGFourParams)| -> Result<(C, f64), QuadError> {
        let mut s = q.clone();
        f(&mut s);
        let g = hyp_g(&s.hyp()?, one, cfg)?;
        Ok((g.value, g.abs_err))
    };
    let g0 = eval(&|_| {})?;
    let gl: Vec<(C, f64)> = (0..2).map(|l| eval(&|s| s.l2[l] = s.l2[l] - e)).collect::<Result<_, _>>()?;
    let gr: Vec<(C, f64)> = (0..2).map(|r| eval(&|s| s.g2[r] = s.g2[r] - e)).collect::<Result<_, _>>()?;
    let g_g11 = eval(&|s| s.g11 = s.g11 + e)?;
    let g_l3: Vec<(C, f64)> = (0..3).map(|i| eval(&|s| s.l3[i] = s.l3[i] + e)).collect::<Result<_, _>>()?;

    let dl = |l: usize| (l2[1 - l] - l2[l]) * g2.iter().map(|g| g - l2[l]).product::<C>();
    let dr = |r: usize| (g2[1 - r] - g2[r]) * l2.iter().map(|x| x - g2[r]).product::<C>();
    let p3 = |x: C, skip: Option<usize>| -> C {
        l3.iter().enumerate().filter(|(j, _)| Some(*j) != skip).map(|(_, y)| x - y).product()
    };
    let shifted_sum = |w: &dyn Fn(C) -> C, skip: Option<usize>| -> Combo {
        let mut c = Combo::new();
        for l in 0..2 {
            c.add(sg * w(l2[l]) * p3(l2[l], skip) / dl(l), gl[l]);
        }
        for r in 0..2 {
            c.add(sg * w(g2[r]) * p3(g2[r], skip) / dr(r), gr[r]);
        }
        c
    };

    let lhs = shifted_sum(&|x| -g11 + x - 1.0, None);
    record(rep, format!("{tag}/4g4_rel_1"), lhs, Combo::new(), tol);

    let mut lhs = Combo::new();
    lhs.add(C::new(sg, 0.0), g_g11);
    record(rep, format!("{tag}/4g4_rel_2"), lhs, shifted_sum(&|_| one, None), tol);

    let cst = -g11 - l3.iter().sum::<C>() + g2.iter().sum::<C>() + l2.iter().sum::<C>();
    let mut lhs = Combo::new();
    lhs.add(cst, g0);
    let mut rhs = shifted_sum(&|x| x * (-g11 + x - 1.0), None);
    rhs.value = -rhs.value;
    record(rep, format!("{tag}/4g4_rel_3"), lhs, rhs, tol);

    for i in 0..3 {
        let mut lhs = Combo::new();
        lhs.add(C::new(sg, 0.0), g_l3[i]);
        record(rep, format!("{tag}/4g4_rel_4/i={}", i + 1), lhs, shifted_sum(&|x| -g11 + x - 1.0, Some(i)), tol);

        let mut lhs = Combo::new();
        lhs.add(cst, g0);
        lhs.add(-sg * l2.iter().map(|x| l3[i] - x).product::<C>(), g_l3[i]);
        let mut rhs = Combo::new();
        for r in 0..2 {
            rhs.add(sg * (g2[r] - g11 - 1.0) * p3(g2[r], Some(i)) / (g2[r] - g2[1 - r]), gr[r]);
        }
        record(rep, format!("{tag}/4g4_rel_5/i={}", i + 1), lhs, rhs, tol);
    }
    Ok(())
}

/// Both sides of the finite-ε `N = 2` Barnes-type instance.
#[derive(Clone, Debug, PartialEq)]
pub struct BarnesSides {
    pub lhs: C,
    pub lhs_err: f64,
    pub rhs: C,
}

impl BarnesSides {
    pub fn ratio(&self) -> C {
        self.lhs / self.rhs
    }
}

/// `Σ_k ∫ dv Π_l Γ^C(γ−λ_{2l}+ε/2) Π_l Γ^C(λ'_{2l}−γ+ε/2)` and
/// `Π_{l,j} Γ^C(λ'_{2l}−λ_{2j}+ε) / Γ^C(2ε)`.
pub fn barnes_sides(
    lams: [DoubleIndex; 2],
    lamps: [DoubleIndex; 2],
    eps: f64,
    cfg: &QuadConfig,
) -> Result<BarnesSides, QuadError> {
    if eps <= 0.0 {
        return Err(QuadError::Config("ε must be positive".into()));
    }
    let h = DoubleIndex::real(eps / 2.0);
    let p = HypParams::new(vec![h - lams[0], h - lams[1]], vec![lamps[0] + h, lamps[1] + h])?;
    let g = hyp_g(&p, C::new(1.0, 0.0), cfg)?;
    let mut rhs = C::new(1.0, 0.0);
    for lp in &lamps {
        for l in &lams {
            rhs *= gamma_c(*lp - *l + DoubleIndex::real(eps))?;
        }
    }
    let den = gamma_c(DoubleIndex::real(2.0 * eps))?;
    if den.norm() == 0.0 {
        return Err(QuadError::Divergent(format!("Γ^C(2ε) vanishes at ε = {eps}")));
    }
    Ok(BarnesSides { lhs: 2.0 * PI * g.value, lhs_err: 2.0 * PI * g.abs_err, rhs: rhs / den })
}

/// Ratio LHS/RHS at `eps` and `eps/2` against the frozen constant and each other.
pub fn check_barnes_instance(
    lams: [DoubleIndex; 2],
    lamps: [DoubleIndex; 2],
    eps: f64,
    cfg: &QuadConfig,
    tol_golden: f64,
    tol_stable: f64,
) -> ResidualReport {
    let start = Instant::now();
    let mut rep = ResidualReport::new("barnes");
    let sides = [eps, eps / 2.0].map(|e| (e, barnes_sides(lams, lamps, e, cfg)));
    let mut ratios = Vec::new();
    for (e, s) in &sides {
        match s {
            Ok(s) => {
                let r = s.ratio();
                rep.push(
                    format!("golden/eps={e}"),
                    rel_residual(r, C::new(BARNES_GOLDEN, 0.0), 1e-300),
                    tol_golden,
                    format!("ratio {r:.12}, lhs {:.6e} ± {:.1e}", s.lhs, s.lhs_err),
                );
                ratios.push(r);
            }
            Err(err) => rep.push_error(format!("golden/eps={e}"), err),
        }
    }
    if ratios.len() == 2 {
        rep.push(
            format!("stability/eps={eps}->{}", eps / 2.0),
            rel_residual(ratios[0], ratios[1], 1e-300),
            tol_stable,
            "",
        );
    } else {
        rep.push_error(format!("stability/eps={eps}->{}", eps / 2.0), "a side failed to evaluate");
    }
    rep.with_config(serde_json::json!({ "eps": eps, "quad": cfg, "tol_golden": tol_golden, "tol_stable": tol_stable }))
        .timed(start)
}

/// gl_4-lattice sample with vanishing total integer difference, so both
/// `4F3(1)` sums of the residue expansion converge.
pub fn gl4_sample() -> FourGFourParams {
    let kappa = 0.3;
    FourGFourParams {
        l2: [DoubleIndex::lattice(1, kappa - 2.0, 0.7), DoubleIndex::lattice(-1, kappa - 2.0, -1.3)],
        l3: [
            DoubleIndex::lattice(0, kappa - 1.0, 0.4),
            DoubleIndex::lattice(1, kappa - 1.0, -0.9),
            DoubleIndex::lattice(-1, kappa - 1.0, 1.8),
        ],
        g11: DoubleIndex::lattice(-1, kappa - 2.0, -0.2),
        g2: [DoubleIndex::lattice(0, kappa - 1.0, 1.1), DoubleIndex::lattice(-1, kappa - 1.0, -0.5)],
    }
}

/// The fixed Barnes instance: `λ` on the level-2 lattice, `λ'_2 = λ_1 + λ_2 − λ'_1`.
pub fn barnes_sample() -> ([DoubleIndex; 2], [DoubleIndex; 2]) {
    let kappa = 0.3;
    let lams = [DoubleIndex::lattice(1, kappa - 1.0, 0.6), DoubleIndex::lattice(-2, kappa - 1.0, -0.9)];
    let lp = DoubleIndex::lattice(0, kappa - 1.0, 1.3);
    (lams, [lp, lams[0] + lams[1] - lp])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn di(h: (f64, f64), a: (f64, f64)) -> DoubleIndex {
        DoubleIndex::new(C::new(h.0, h.1), C::new(a.0, a.1))
    }

    #[test]
    fn gamma_properties_small_batch() {
        let rep = check_gamma_properties(200, 1, 1e-12);
        assert!(rep.pass(), "{:#?}", rep.cases);
    }

    #[test]
    fn contiguous_p2_off_the_circle() {
        let p = HypParams::new(
            vec![di((0.3, 0.2), (-0.7, 0.2)), di((0.1, -0.4), (0.1, -0.4))],
            vec![di((0.05, 0.1), (0.05, 0.1)), di((0.15, 0.3), (-0.85, 0.3))],
        )
        .unwrap();
        let rep = check_contiguous(&p, C::from_polar(0.5, 0.8), &QuadConfig::default(), 1e-10);
        assert!(rep.pass(), "{:#?}", rep.cases);
    }

    #[test]
    fn contiguous_p4_random_at_unity() {
        let cfg = QuadConfig::default();
        let (p, _) = random_hyp_params(4, C::new(1.0, 0.0), 11, &cfg).unwrap();
        let rep = check_contiguous(&p, C::new(1.0, 0.0), &cfg, 1e-6);
        assert!(rep.pass(), "{:#?}", rep.cases);
        assert_eq!(rep.cases.len(), 8);
    }

    #[test]
    fn four_g_four_at_unity_matches_frozen_value() {
        // 30-digit residue sum `2 Σ_j C_j 4F3(1) 4F3(1)`.
        let golden = C::new(0.766_020_450_484_405_4, 4.079_259_848_163_975);
        let g = hyp_g(&gl4_sample().hyp().unwrap(), C::new(1.0, 0.0), &QuadConfig::default()).unwrap();
        assert!((g.value - golden).norm() < 1e-6 * golden.norm(), "{}", g.value);
        assert!((g.value - golden).norm() <= g.abs_err);
    }

    #[test]
    fn four_g_four_relations_at_sample() {
        let rep = check_4g4_relations(&gl4_sample(), &QuadConfig::default(), 1e-6);
        assert!(rep.pass(), "{:#?}", rep.cases);
        assert_eq!(rep.cases.len(), 18);
    }

    #[test]
    fn barnes_ratio_is_four_pi() {
        let (lams, lamps) = barnes_sample();
        let lp = lamps[0];
        let rep = check_barnes_instance(lams, lamps, 0.25, &QuadConfig::default(), 1e-6, 1e-4);
        assert!(rep.pass(), "{:#?}", rep.cases);
        let swapped =
            barnes_sides([lams[1], lams[0]], [lp, lams[0] + lams[1] - lp], 0.25, &QuadConfig::default()).unwrap();
        let plain = barnes_sides(lams, [lp, lams[0] + lams[1] - lp], 0.25, &QuadConfig::default()).unwrap();
        assert!((swapped.lhs - plain.lhs).norm() < 1e-12 * plain.lhs.norm());
    }

    #[test]
    fn contiguous_p3_outside_the_circle() {
        let p = HypParams::new(
            vec![di((0.3, 0.2), (-0.7, 0.2)), di((0.1, -0.4), (0.1, -0.4)), di((-0.2, 0.9), (-0.2, 0.9))],
            vec![di((0.05, 0.1), (0.05, 0.1)), di((0.15, 0.3), (-0.85, 0.3)), di((0.4, -0.6), (1.4, -0.6))],
        )
        .unwrap();
        let rep = check_contiguous(&p, C::from_polar(2.5, -1.3), &QuadConfig::default(), 1e-10);
        assert!(rep.pass(), "{:#?}", rep.cases);
    }
}

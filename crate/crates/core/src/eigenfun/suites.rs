//! Eigen-equation, B-action and homogeneity residuals for the numeric eigenfunctions.

use super::psi::{Gl4Grid, PsiEval};
use super::{apply_weyl_scaled, as_scalar, coeff_values, tag, EigenError, PointZ, WirtingerStencil};
use crate::complexfield::gamma::ln_double_power;
use crate::complexfield::quad::QuadConfig;
use crate::kernels::suites::random_scheme;
use crate::report::{rel_residual, ResidualReport};
use crate::schemes::{eigenvalue_poly, eval_monic, DoubleIndex, GTScheme, SchemeShift, Sector};
use crate::yangian::{build_l_operator, MinorEngine};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Shared numerical settings of the eigenfunction checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenConfig {
    pub quad: QuadConfig,
    pub grid: Gl4Grid,
    pub stencil: WirtingerStencil,
    /// Moduli window for random points.
    pub window: (f64, f64),
    /// Minimal distance of `|W|` from 1 for the rank-3 variable `W = z_21 z_32 / z_31`.
    pub w_gap: f64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        EigenConfig {
            quad: QuadConfig::default(),
            grid: Gl4Grid::default(),
            stencil: WirtingerStencil::default(),
            window: (0.2, 5.0),
            w_gap: 0.1,
        }
    }
}

fn w_ok(p: &PointZ, gap: f64) -> bool {
    let w = |a: (usize, usize), b: (usize, usize), c: (usize, usize)| {
        (p.get(a.0, a.1) * p.get(b.0, b.1) / p.get(c.0, c.1)).norm()
    };
    match p.n {
        3 => (w((2, 1), (3, 2), (3, 1)) - 1.0).abs() > gap,
        4 => (w((3, 2), (4, 3), (4, 2)) - 1.0).abs() > gap,
        _ => true,
    }
}

/// A random point whose hypergeometric arguments stay away from the unit circle.
pub fn random_point(rng: &mut ChaCha8Rng, n: usize, cfg: &EigenConfig) -> PointZ {
    loop {
        let p = PointZ::random(rng, n, cfg.window);
        if w_ok(&p, cfg.w_gap) {
            return p;
        }
    }
}

fn sample_u(j: usize) -> C {
    C::new(0.37 + 0.61 * j as f64, 0.23 - 0.17 * j as f64)
}

fn psi_fn<'a>(ev: &'a PsiEval) -> impl Fn(&PointZ) -> Result<C, EigenError> + 'a {
    move |q: &PointZ| Ok(ev.eval(q)?.value)
}

/// `A_m(u)Ψ = Π_k(u − λ_mk)Ψ` at each point and `m + 1` values of `u`, one sector.
/// For `m = n` the minor is checked to be the scalar `Π_k(u − σ_k)`.
pub fn eigen_residual(
    s: &GTScheme,
    m: usize,
    sector: Sector,
    points: &[PointZ],
    cfg: &EigenConfig,
    tol: f64,
) -> ResidualReport {
    let start = Instant::now();
    let mut rep = ResidualReport::new(format!("A{m}-{}", tag(sector)));
    let n = s.n();
    if !(1..=n).contains(&m) {
        rep.push_error("m", format!("m = {m} outside 1..={n}"));
        return rep;
    }
    let op = build_l_operator(n, sector);
    let mut eng = MinorEngine::new(&op);
    let minor = match eng.corner(m) {
        Ok(w) => w,
        Err(e) => {
            rep.push_error("minor", e);
            return rep;
        }
    };
    let sig = s.params.sigmas();
    let roots = eigenvalue_poly(s, m, sector);
    if m == n {
        match as_scalar(&minor) {
            None => rep.push_error("central", "top minor is not a scalar"),
            Some(c) => {
                for j in 0..=m {
                    let u = sample_u(j);
                    rep.push(
                        format!("central/u{j}"),
                        rel_residual(c.eval(&coeff_values(u, &sig)), eval_monic(&roots, u), 1e-300),
                        1e-12,
                        "",
                    );
                }
            }
        }
        return rep.timed(start);
    }
    let ev = match PsiEval::new(s, &cfg.grid, &cfg.quad) {
        Ok(e) => e,
        Err(e) => {
            rep.push_error("psi", e);
            return rep;
        }
    };
    if ev.skipped_nodes() > 0 {
        rep.warnings.push(format!("{} integration nodes skipped", ev.skipped_nodes()));
    }
    let f = psi_fn(&ev);
    let jobs: Vec<(usize, usize)> = (0..points.len()).flat_map(|i| (0..=m).map(move |j| (i, j))).collect();
    let results: Vec<Result<f64, EigenError>> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let (p, u) = (&points[i], sample_u(j));
            let (lhs, scale) = apply_weyl_scaled(&minor, &f, p, &cfg.stencil, &coeff_values(u, &sig))?;
            let rhs = eval_monic(&roots, u) * f(p)?;
            Ok((lhs - rhs).norm() / scale.max(lhs.norm()).max(rhs.norm()).max(1e-300))
        })
        .collect();
    for ((i, j), r) in jobs.into_iter().zip(results) {
        let id = format!("p{i}/u{j}");
        match r {
            Ok(res) => rep.push(id, res, tol, ""),
            Err(e) => rep.push_error(id, e),
        }
    }
    rep.timed(start)
}

fn sector_value(d: DoubleIndex, sector: Sector) -> C {
    d.get(sector)
}

/// `B_r(λ_ri)Ψ_μ = ±Π_j(λ_ri − μ_{r−1,j}) Ψ_{μ+e_ri}` (the `r = 1` product is empty);
/// the antiholomorphic action carries the minus sign.
fn b_act(state: &GTScheme, arg: C, r: usize, i: usize, sector: Sector) -> (C, GTScheme) {
    let mut f = C::new(1.0, 0.0);
    for j in 1..r {
        f *= arg - sector_value(state.lambda(r - 1, j), sector);
    }
    if sector.is_anti() {
        f = -f;
    }
    let sh = SchemeShift { level: r, pos: i, dir: 1, sector };
    (f, state.shifted(sh))
}

/// Right-hand side of `B_{rab}(u)Ψ` as a sum of shifted eigenfunctions.
fn b_rab_rhs<F>(
    psi_at: &F,
    s: &GTScheme,
    r: usize,
    a: usize,
    b: usize,
    u: C,
    sector: Sector,
) -> Result<(C, f64), EigenError>
where
    F: Fn(&GTScheme) -> Result<C, EigenError>,
{
    let lam = |k: usize, l: usize| sector_value(s.lambda(k, l), sector);
    let sign = if (b - r - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let levels: Vec<usize> = (a..b).collect();
    let mut choice: Vec<usize> = levels.iter().map(|_| 1).collect();
    let mut total = C::new(0.0, 0.0);
    let mut scale = 0.0;
    loop {
        let sk = |k: usize| choice[k - a];
        let mut coef = C::new(sign, 0.0);
        for l in (1..=r).filter(|&l| l != sk(r)) {
            coef *= u - lam(r, l);
        }
        let mut den = C::new(1.0, 0.0);
        for k in a..b - 1 {
            den *= lam(k + 1, sk(k + 1)) - lam(k, sk(k)) - if k < r { 1.0 } else { 0.0 };
        }
        for k in a..b {
            for l in (1..=k).filter(|&l| l != sk(k)) {
                den *= lam(k, sk(k)) - lam(k, l);
            }
        }
        let mut state = s.clone();
        let mut order: Vec<usize> = (r + 1..b).rev().collect();
        order.extend(a..=r);
        for k in order {
            let (f, next) = b_act(&state, lam(k, sk(k)), k, sk(k), sector);
            coef *= f;
            state = next;
        }
        let term = coef / den * psi_at(&state)?;
        total += term;
        scale += term.norm();
        let mut d = 0;
        while d < levels.len() {
            choice[d] += 1;
            if choice[d] <= levels[d] {
                break;
            }
            choice[d] = 1;
            d += 1;
        }
        if d == levels.len() {
            break;
        }
    }
    Ok((total, scale))
}

/// One B-operator check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BCase {
    /// `B_r(λ_ri)`, the induction action.
    Root { r: usize, i: usize },
    /// `B_{rab}(u)` at a generic spectral value.
    Composite { r: usize, a: usize, b: usize },
}

impl BCase {
    fn id(&self) -> String {
        match self {
            BCase::Root { r, i } => format!("B{r}(l{r}{i})"),
            BCase::Composite { r, a, b } => format!("B{r}{a}{b}(u)"),
        }
    }

    /// All cases available at rank `n`.
    pub fn all(n: usize) -> Vec<BCase> {
        let mut out = Vec::new();
        for r in 1..n {
            for i in 1..=r {
                out.push(BCase::Root { r, i });
            }
        }
        for b in 2..=n {
            for r in 1..b {
                for a in 1..=r {
                    if !(r == a && b == r + 1 && r == 1) {
                        out.push(BCase::Composite { r, a, b });
                    }
                }
            }
        }
        out
    }
}

/// Numeric `B`-operator action against its closed form, one sector.
pub fn b_action_residual(
    s: &GTScheme,
    case: BCase,
    sector: Sector,
    points: &[PointZ],
    cfg: &EigenConfig,
    tol: f64,
) -> ResidualReport {
    let start = Instant::now();
    let mut rep = ResidualReport::new(format!("{}-{}", case.id(), tag(sector)));
    let n = s.n();
    if n > 3 {
        rep.push_error("rank", EigenError::Rank(n));
        return rep;
    }
    let (r, a, b, u) = match case {
        BCase::Root { r, i } => (r, r, r + 1, Some(sector_value(s.lambda(r, i), sector))),
        BCase::Composite { r, a, b } => (r, a, b, None),
    };
    let op = build_l_operator(n, sector);
    let mut eng = MinorEngine::new(&op);
    let minor = match eng.b_rab(r, a, b) {
        Ok(w) => w,
        Err(e) => {
            rep.push_error("minor", e);
            return rep;
        }
    };
    let ev = match PsiEval::new(s, &cfg.grid, &cfg.quad) {
        Ok(e) => e,
        Err(e) => {
            rep.push_error("psi", e);
            return rep;
        }
    };
    let f = psi_fn(&ev);
    let sig = s.params.sigmas();
    for (pi, p) in points.iter().enumerate() {
        let psi_at =
            |t: &GTScheme| -> Result<C, EigenError> { Ok(PsiEval::new(t, &cfg.grid, &cfg.quad)?.eval(p)?.value) };
        let us: Vec<C> = match u {
            Some(x) => vec![x],
            None => vec![sample_u(0), sample_u(1)],
        };
        for (j, &uu) in us.iter().enumerate() {
            let id = format!("p{pi}/u{j}");
            let res = (|| {
                let (lhs, s1) = apply_weyl_scaled(&minor, &f, p, &cfg.stencil, &coeff_values(uu, &sig))?;
                let (rhs, s2) = match case {
                    BCase::Root { r, i } => {
                        let (c, t) = b_act(s, uu, r, i, sector);
                        let v = c * psi_at(&t)?;
                        (v, v.norm())
                    }
                    BCase::Composite { .. } => b_rab_rhs(&psi_at, s, r, a, b, uu, sector)?,
                };
                Ok::<f64, EigenError>((lhs - rhs).norm() / s1.max(s2).max(1e-300))
            })();
            match res {
                Ok(x) => rep.push(id, x, tol, ""),
                Err(e) => rep.push_error(id, e),
            }
        }
    }
    rep.timed(start)
}

/// Rank 3: `B_2(λ_22)` on `Ψ_{λ+e_21}` and `B_2(λ_21)` on `Ψ_{λ+e_22}` both land on
/// `Ψ_{λ+e_21+e_22}`, so `(λ_21−λ_11)·first = (λ_22−λ_11)·second`.
pub fn b_commutation_residual(
    s: &GTScheme,
    sector: Sector,
    points: &[PointZ],
    cfg: &EigenConfig,
    tol: f64,
) -> ResidualReport {
    let mut rep = ResidualReport::new(format!("B2B2-{}", tag(sector)));
    if s.n() != 3 {
        rep.push_error("rank", EigenError::Rank(s.n()));
        return rep;
    }
    let op = build_l_operator(3, sector);
    let minor = match MinorEngine::new(&op).b_r(2) {
        Ok(w) => w,
        Err(e) => {
            rep.push_error("minor", e);
            return rep;
        }
    };
    let sig = s.params.sigmas();
    let lam = |l: usize, j: usize| sector_value(s.lambda(l, j), sector);
    let side = |shift_pos: usize, root_pos: usize, p: &PointZ| -> Result<(C, f64), EigenError> {
        let t = s.shifted(SchemeShift { level: 2, pos: shift_pos, dir: 1, sector });
        let ev = PsiEval::new(&t, &cfg.grid, &cfg.quad)?;
        let (v, sc) = apply_weyl_scaled(&minor, &psi_fn(&ev), p, &cfg.stencil, &coeff_values(lam(2, root_pos), &sig))?;
        let k = lam(2, shift_pos) - lam(1, 1);
        Ok((v * k, sc * k.norm()))
    };
    for (i, p) in points.iter().enumerate() {
        match (side(1, 2, p), side(2, 1, p)) {
            (Ok((a, sa)), Ok((b, sb))) => rep.push(format!("p{i}"), (a - b).norm() / sa.max(sb).max(1e-300), tol, ""),
            (Err(e), _) | (_, Err(e)) => rep.push_error(format!("p{i}"), e),
        }
    }
    rep
}

/// `Ψ(t z_{·1}, z') = t^{(σ_1−n+1−λ_11)} Ψ(z)` for a complex scale `t`.
pub fn homogeneity_residual(s: &GTScheme, points: &[PointZ], t: C, cfg: &EigenConfig, tol: f64) -> ResidualReport {
    let mut rep = ResidualReport::new("homogeneity");
    let ev = match PsiEval::new(s, &cfg.grid, &cfg.quad) {
        Ok(e) => e,
        Err(e) => {
            rep.push_error("psi", e);
            return rep;
        }
    };
    let e = s.sigma(1) - DoubleIndex::real((s.n() - 1) as f64) - s.lambda(1, 1);
    for (i, p) in points.iter().enumerate() {
        match (ev.eval(p), ev.eval(&p.scale_first_column(t))) {
            (Ok(a), Ok(b)) => {
                let want = a.value * ln_double_power(t, e).exp();
                rep.push(format!("p{i}"), rel_residual(b.value, want, 1e-300), tol, "");
            }
            (Err(e), _) | (_, Err(e)) => rep.push_error(format!("p{i}"), e),
        }
    }
    rep
}

fn draw(rng: &mut ChaCha8Rng, n: usize, points: usize, cfg: &EigenConfig) -> (GTScheme, Vec<PointZ>) {
    let s = random_scheme(rng, n, 2, 2.0);
    let pts = (0..points).map(|_| random_point(rng, n, cfg)).collect();
    (s, pts)
}

/// Eigen-equations for `m ∈ ms` in both sectors over random schemes and points.
pub fn eigen_suite(
    rank: usize,
    ms: &[usize],
    samples: usize,
    points: usize,
    seed: u64,
    cfg: &EigenConfig,
    tol: f64,
) -> ResidualReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ResidualReport::new(format!("eigen-gl{rank}"));
    for k in 0..samples {
        let (s, pts) = draw(&mut rng, rank, points, cfg);
        for &m in ms {
            for sector in Sector::BOTH {
                let mut sub = eigen_residual(&s, m, sector, &pts, cfg, tol);
                sub.suite = format!("sample{k}/{}", sub.suite);
                rep.extend(sub);
            }
        }
    }
    rep.with_config(
        serde_json::json!({ "rank": rank, "m": ms, "samples": samples, "points": points, "seed": seed, "cfg": cfg }),
    )
    .timed(start)
}

/// Every `B` case at rank 2 or 3, both sectors.
pub fn b_action_suite(
    rank: usize,
    samples: usize,
    points: usize,
    seed: u64,
    cfg: &EigenConfig,
    tol: f64,
) -> ResidualReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ResidualReport::new(format!("b-action-gl{rank}"));
    for k in 0..samples {
        let (s, pts) = draw(&mut rng, rank, points, cfg);
        for sector in Sector::BOTH {
            for case in BCase::all(rank) {
                let mut sub = b_action_residual(&s, case, sector, &pts, cfg, tol);
                sub.suite = format!("sample{k}/{}", sub.suite);
                rep.extend(sub);
            }
            if rank == 3 {
                let mut sub = b_commutation_residual(&s, sector, &pts, cfg, tol);
                sub.suite = format!("sample{k}/{}", sub.suite);
                rep.extend(sub);
            }
        }
    }
    rep.with_config(serde_json::json!({ "rank": rank, "samples": samples, "points": points, "seed": seed, "cfg": cfg }))
        .timed(start)
}

/// Homogeneity under a random complex scale of the first column.
pub fn homogeneity_suite(rank: usize, samples: usize, seed: u64, cfg: &EigenConfig, tol: f64) -> ResidualReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ResidualReport::new(format!("homogeneity-gl{rank}"));
    for k in 0..samples {
        let (s, pts) = draw(&mut rng, rank, 2, cfg);
        let t = C::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-3.0..3.0));
        let mut sub = homogeneity_residual(&s, &pts, t, cfg, tol);
        sub.suite = format!("sample{k}");
        rep.extend(sub);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_eigen_and_b_actions() {
        let cfg = EigenConfig::default();
        let r = eigen_suite(2, &[1, 2], 2, 2, 5, &cfg, 1e-7);
        assert!(r.pass(), "{:#?}", r.failures());
        let r = b_action_suite(2, 2, 2, 6, &cfg, 1e-7);
        assert!(r.pass(), "{:#?}", r.failures());
    }

    #[test]
    fn gl3_eigen_equations() {
        let cfg = EigenConfig::default();
        let r = eigen_suite(3, &[1, 2, 3], 2, 2, 7, &cfg, 1e-6);
        assert!(r.pass(), "{:#?}", r.failures());
    }

    #[test]
    fn gl3_b_actions() {
        let cfg = EigenConfig::default();
        let r = b_action_suite(3, 1, 2, 8, &cfg, 1e-6);
        assert!(r.pass(), "{:#?}", r.failures());
    }

    #[test]
    fn case_listing() {
        assert_eq!(BCase::all(2), vec![BCase::Root { r: 1, i: 1 }]);
        assert_eq!(BCase::all(3).len(), 6);
    }
}

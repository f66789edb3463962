//! Residual checks for the kernel difference equations and the `c(λ)` shift conditions.

use super::{c_lambda, kernel_gl3, kernel_gl4, Gl4Gamma, KernelError, KernelValue};
use crate::complexfield::quad::QuadConfig;
use crate::complexfield::suites::check_4g4_relations;
use crate::report::{rel_residual, ResidualReport};
use crate::schemes::{make_scheme, DoubleIndex, GTScheme, ReprParams, SchemeShift, Sector};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use std::time::Instant;

/// Integration point of the kernel for a rank-3 or rank-4 scheme.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GammaSample {
    Gl3(DoubleIndex),
    Gl4(Gl4Gamma),
}

impl GammaSample {
    pub fn levels(&self) -> Vec<Vec<DoubleIndex>> {
        match self {
            GammaSample::Gl3(g) => vec![vec![*g]],
            GammaSample::Gl4(g) => g.levels(),
        }
    }
}

fn tag(s: Sector) -> &'static str {
    match s {
        Sector::Hol => "hol",
        Sector::Anti => "anti",
    }
}

/// Random nondegenerate orthogonal-set scheme of rank `n`: integer parts in
/// `[−m, m]`, imaginary parts in `(−β, β)`.
pub fn random_scheme(rng: &mut ChaCha8Rng, n: usize, m: i64, beta: f64) -> GTScheme {
    loop {
        let kappa = rng.gen_range(-0.5..0.5);
        let s: Vec<i64> = (0..n).map(|_| rng.gen_range(-m..=m)).collect();
        let eta: Vec<f64> = (0..n).map(|_| rng.gen_range(-beta..beta)).collect();
        let ints = (1..n).map(|l| (0..l).map(|_| rng.gen_range(-m..=m)).collect()).collect();
        let reals = (1..n).map(|l| (0..l).map(|_| rng.gen_range(-beta..beta)).collect()).collect();
        let params = ReprParams::new(s, kappa, eta).expect("rank ≥ 2");
        let sch = make_scheme(ints, reals, params).expect("shapes agree");
        if !sch.is_degenerate() {
            return sch;
        }
    }
}

/// Random `γ` on the orthogonal-set lattice of the inner scheme.
pub fn random_gamma(rng: &mut ChaCha8Rng, s: &GTScheme, m: i64, beta: f64) -> GammaSample {
    let kappa = s.params.kappa;
    let mut draw = |off: f64| DoubleIndex::lattice(rng.gen_range(-m..=m), kappa + off, rng.gen_range(-beta..beta));
    if s.n() == 3 {
        GammaSample::Gl3(draw(-1.0))
    } else {
        GammaSample::Gl4(Gl4Gamma { g11: draw(-2.0), g21: draw(-1.0), g22: draw(-1.0) })
    }
}

type Shifts = &'static [(usize, usize)];

/// One term `coef · K_{γ − Σ shifts}` of a difference equation.
struct Term {
    coef: C,
    shifts: Shifts,
}

struct Equation {
    id: &'static str,
    lhs: Vec<Term>,
    rhs: Vec<Term>,
}

fn t(coef: C, shifts: Shifts) -> Term {
    Term { coef, shifts }
}

fn gl3_equations(g: DoubleIndex, s: &GTScheme, sec: Sector) -> Vec<Equation> {
    let g11 = g.get(sec);
    let l2: Vec<C> = s.level(2).iter().map(|d| d.get(sec)).collect();
    let l11 = s.lambda(1, 1).get(sec);
    let ratio = (g11 - l2[0]) * (g11 - l2[1]) / (g11 + l11 - l2[0] - l2[1]);
    vec![Equation { id: "k3_eq", lhs: vec![t(C::new(1.0, 0.0), &[(1, 1)])], rhs: vec![t(ratio, &[])] }]
}

fn gl4_equations(g: &Gl4Gamma, s: &GTScheme, sec: Sector) -> Vec<Equation> {
    let (g11, g21, g22) = (g.g11.get(sec), g.g21.get(sec), g.g22.get(sec));
    let l11 = s.lambda(1, 1).get(sec);
    let l2: Vec<C> = s.level(2).iter().map(|d| d.get(sec)).collect();
    let l3: Vec<C> = s.level(3).iter().map(|d| d.get(sec)).collect();
    let sl2 = l2[0] + l2[1];
    let sl3 = l3[0] + l3[1] + l3[2];
    let one = C::new(1.0, 0.0);
    let a = g11 + l11 - sl2;
    let mid = g11 - g21 - g22 - sl2 + sl3;
    let eq1 = Equation {
        id: "k4_eq1",
        lhs: vec![t((g11 - l2[0]) * (g11 - l2[1]) / a, &[])],
        rhs: vec![
            t(one, &[(1, 1)]),
            t(-one / (g21 - g22 - 1.0), &[(1, 1), (2, 1)]),
            t(-one / (g22 - g21 - 1.0), &[(1, 1), (2, 2)]),
        ],
    };
    let side = |gi: C, gj: C, single: Shifts, double: Shifts, id| {
        let prod: C = l3.iter().map(|l| gi - l).product();
        Equation {
            id,
            lhs: vec![t((gi - g11 - 1.0) * mid, single), t(a, double)],
            rhs: vec![t(-prod * (gi - gj - 1.0) / (gi - gj), &[])],
        }
    };
    vec![
        eq1,
        side(g21, g22, &[(2, 1)], &[(1, 1), (2, 1)], "k4_eq2"),
        side(g22, g21, &[(2, 2)], &[(1, 1), (2, 2)], "k4_eq3"),
    ]
}

fn shifted_kernel(
    s: &GTScheme,
    gamma: &GammaSample,
    shifts: Shifts,
    sec: Sector,
    cfg: &QuadConfig,
) -> Result<KernelValue, KernelError> {
    let unit = match sec {
        Sector::Hol => DoubleIndex::e(),
        Sector::Anti => DoubleIndex::ebar(),
    };
    match gamma {
        GammaSample::Gl3(g) => kernel_gl3(*g - unit.scale(shifts.len() as i64), s),
        GammaSample::Gl4(g) => {
            let mut h = *g;
            for &(l, p) in shifts {
                h = h.shifted(l, p, -1, sec);
            }
            kernel_gl4(&h, s, cfg)
        }
    }
}

/// Evaluate the difference equations of the rank-3 or rank-4 kernel at one
/// sample, both sectors. In the antiholomorphic sector a term with `j` unit
/// shifts carries the extra sign `(−1)^j`. With `negative_control`, the sign
/// of the first right-hand term of the first equation is flipped.
pub fn kernel_system_report(
    s: &GTScheme,
    gamma: &GammaSample,
    cfg: &QuadConfig,
    tol: f64,
    negative_control: bool,
) -> Result<ResidualReport, KernelError> {
    system_report(s, gamma, cfg, tol, negative_control).map(|(rep, _)| rep)
}

/// The report together with the largest relative quadrature error over its equations.
fn system_report(
    s: &GTScheme,
    gamma: &GammaSample,
    cfg: &QuadConfig,
    tol: f64,
    negative_control: bool,
) -> Result<(ResidualReport, f64), KernelError> {
    let start = Instant::now();
    let mut max_err: f64 = 0.0;
    s.require_nondegenerate()?;
    let n = s.n();
    match (n, gamma) {
        (3, GammaSample::Gl3(_)) | (4, GammaSample::Gl4(_)) => {}
        _ => {
            return Err(KernelError::Rank {
                expected: if matches!(gamma, GammaSample::Gl3(_)) { 3 } else { 4 },
                got: n,
            })
        }
    }
    let mut rep = ResidualReport::new(format!("kernel-gl{n}"));
    for sec in Sector::BOTH {
        let eqs = match gamma {
            GammaSample::Gl3(g) => gl3_equations(*g, s, sec),
            GammaSample::Gl4(g) => gl4_equations(g, s, sec),
        };
        let mut cache: HashMap<Shifts, KernelValue> = HashMap::new();
        for eq in &eqs {
            for term in eq.lhs.iter().chain(eq.rhs.iter()) {
                if !cache.contains_key(term.shifts) {
                    cache.insert(term.shifts, shifted_kernel(s, gamma, term.shifts, sec, cfg)?);
                }
            }
        }
        for (e, eq) in eqs.iter().enumerate() {
            let mut scale: f64 = 0.0;
            let mut err = 0.0;
            let mut sum = |terms: &[Term], control_first: bool| {
                let mut acc = C::new(0.0, 0.0);
                for (i, term) in terms.iter().enumerate() {
                    let k = &cache[term.shifts];
                    let mut sign = if sec.is_anti() && term.shifts.len() % 2 == 1 { -1.0 } else { 1.0 };
                    if control_first && i == 0 {
                        sign = -sign;
                    }
                    let v = term.coef * k.value() * sign;
                    scale = scale.max(v.norm());
                    err += term.coef.norm() * k.abs_err();
                    acc += v;
                }
                acc
            };
            let lhs = sum(&eq.lhs, false);
            let rhs = sum(&eq.rhs, negative_control && e == 0);
            let residual = (lhs - rhs).norm() / scale.max(f64::MIN_POSITIVE);
            max_err = max_err.max(err / scale);
            rep.push(format!("{}/{}", eq.id, tag(sec)), residual, tol, format!("quadrature error {:.1e}", err / scale));
        }
    }
    Ok((rep.timed(start), max_err))
}

/// Doubles `k_max` (at most twice) while the quadrature error estimate of the
/// sample exceeds `tol`.
fn refined_report(
    s: &GTScheme,
    gamma: &GammaSample,
    cfg: &QuadConfig,
    tol: f64,
) -> Result<ResidualReport, KernelError> {
    let mut cfg = cfg.clone();
    let (mut rep, mut err) = system_report(s, gamma, &cfg, tol, false)?;
    for _ in 0..MAX_REFINEMENTS {
        if err <= tol {
            break;
        }
        cfg.k_max *= 2;
        (rep, err) = system_report(s, gamma, &cfg, tol, false)?;
        rep.warnings.push(format!("quadrature refined to k_max = {}", cfg.k_max));
    }
    Ok(rep)
}

const MAX_REFINEMENTS: usize = 2;

/// Minimal distance of `a_i − a_j` from ℤ among the `4G4` a-parameters. Closer
/// pairs make the unit-argument continuation ill-conditioned.
const A_SEPARATION: f64 = 0.2;

fn a_parameters_separated(h: &Gl4Gamma, s: &GTScheme) -> bool {
    let q = h.four_g_four(s);
    let a = [q.l2[0], q.l2[1], q.g2[0], q.g2[1]];
    let off_lattice = |d: C| (d - d.re.round()).norm() >= A_SEPARATION;
    (0..4).all(|i| (0..i).all(|j| Sector::BOTH.iter().all(|&sec| off_lattice(a[i].get(sec) - a[j].get(sec)))))
}

pub fn residual_kernel_system(s: &GTScheme, gamma: &GammaSample, cfg: &QuadConfig, tol: f64) -> ResidualReport {
    kernel_system_report(s, gamma, cfg, tol, false).unwrap_or_else(|e| {
        let mut rep = ResidualReport::new(format!("kernel-gl{}", s.n()));
        rep.push_error("evaluation", e);
        rep
    })
}

fn lattice_box(rank: usize) -> (i64, f64) {
    if rank == 3 {
        (3, 3.0)
    } else {
        (1, 2.0)
    }
}

fn draw_sample(rng: &mut ChaCha8Rng, rank: usize) -> (GTScheme, GammaSample) {
    let (m, beta) = lattice_box(rank);
    let s = random_scheme(rng, rank, m, beta);
    let g = random_gamma(rng, &s, m, beta);
    (s, g)
}

/// Random samples of the rank-`rank` kernel system; samples on which some
/// kernel cannot be evaluated (pole, pinched contour) are redrawn and logged.
pub fn kernel_suite(rank: usize, samples: usize, seed: u64, cfg: &QuadConfig, tol: f64) -> ResidualReport {
    kernel_suite_for(rank, None, samples, seed, cfg, tol)
}

/// As [`kernel_suite`]; with `fixed`, only the integration point is random.
pub fn kernel_suite_for(
    rank: usize,
    fixed: Option<&GTScheme>,
    samples: usize,
    seed: u64,
    cfg: &QuadConfig,
    tol: f64,
) -> ResidualReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ResidualReport::new(format!("kernel-gl{rank}"));
    if rank != 3 && rank != 4 {
        rep.push_error("rank", KernelError::Rank { expected: 4, got: rank });
        return rep;
    }
    if let Some(s) = fixed {
        if s.n() != rank {
            rep.push_error("rank", KernelError::Rank { expected: rank, got: s.n() });
            return rep;
        }
        if let Err(e) = s.require_nondegenerate() {
            rep.push_error("scheme", e);
            return rep;
        }
    }
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let budget = 50 * samples.max(1);
    while accepted < samples && rejected < budget {
        let mut batch = Vec::new();
        while batch.len() < samples - accepted && rejected < budget {
            let (s, g) = match fixed {
                Some(s) => {
                    let (m, beta) = lattice_box(rank);
                    (s.clone(), random_gamma(&mut rng, s, m, beta))
                }
                None => draw_sample(&mut rng, rank),
            };
            // Rank 4 is expensive; poles are screened on the closed-form prefactors first.
            let ok = match &g {
                GammaSample::Gl3(_) => true,
                GammaSample::Gl4(h) => super::kernel_gl4_prefactor(h, &s).is_ok() && a_parameters_separated(h, &s),
            };
            if ok {
                batch.push((s, g));
            } else {
                rejected += 1;
            }
        }
        let results: Vec<Result<ResidualReport, KernelError>> =
            batch.par_iter().map(|(s, g)| refined_report(s, g, cfg, tol)).collect();
        for r in results {
            match r {
                Ok(mut sub) => {
                    sub.suite = format!("sample{accepted}");
                    for w in &mut sub.warnings {
                        *w = format!("sample{accepted}: {w}");
                    }
                    rep.extend(sub);
                    accepted += 1;
                }
                Err(e) => {
                    rejected += 1;
                    rep.warnings.push(format!("draw rejected: {e}"));
                }
            }
        }
    }
    if rejected > 0 {
        rep.warnings
            .push(format!("{rejected} samples rejected at poles, pinched contours or near-coincident 4G4 parameters"));
    }
    if accepted < samples {
        rep.push_error("samples", format!("only {accepted} of {samples} admissible samples"));
    }
    rep.with_config(serde_json::json!({ "rank": rank, "samples": samples, "seed": seed, "fixed_scheme": fixed.is_some(), "cfg": cfg }))
        .timed(start)
}

/// `c(λ')/c(λ)` for a shifted scheme, from the implemented `c`.
fn c_ratio(s: &GTScheme, sh: SchemeShift) -> Result<C, KernelError> {
    let (s0, l0) = c_lambda(s)?;
    let (s1, l1) = c_lambda(&s.shifted(sh))?;
    Ok(l1.div(l0).value() * (s1 / s0))
}

/// Both shift families of `c(λ)` in both sectors against the displayed ratios
/// with `M_i = λ_2i − λ_11`, `M'_i = Π_k(λ_3i − λ_2k)` and their barred
/// counterparts carrying an extra minus sign.
pub fn residual_c_conditions(s: &GTScheme, tol: f64) -> ResidualReport {
    let start = Instant::now();
    let mut rep = ResidualReport::new("c-conditions");
    if let Err(e) = s.require_nondegenerate() {
        rep.push_error("scheme", e);
        return rep;
    }
    for sec in Sector::BOTH {
        let flip = if sec.is_anti() { -1.0 } else { 1.0 };
        let shift = |l, i| match sec {
            Sector::Hol => SchemeShift::hol(l, i),
            Sector::Anti => SchemeShift::anti(l, i),
        };
        let l11 = s.lambda(1, 1).get(sec);
        let l2: Vec<C> = s.level(2).iter().map(|d| d.get(sec)).collect();
        let sigma1 = s.sigma(1).get(sec);
        for i in 1..=2 {
            let m = (l2[i - 1] - l11) * flip;
            let want = if sec.is_anti() { (l2[i - 1] - l11) / m } else { -(l2[i - 1] - l11) / m };
            match c_ratio(s, shift(2, i)) {
                Ok(got) => rep.push(format!("c_shift_2{i}/{}", tag(sec)), rel_residual(got, want, 1e-300), tol, ""),
                Err(e) => rep.push_error(format!("c_shift_2{i}/{}", tag(sec)), e),
            }
        }
        for i in 1..=3 {
            let l3i = s.lambda(3, i).get(sec);
            let prod: C = l2.iter().map(|l| l3i - l).product();
            let want = (l3i - sigma1 + 1.0) * prod / (prod * flip);
            match c_ratio(s, shift(3, i)) {
                Ok(got) => rep.push(format!("c_shift_3{i}/{}", tag(sec)), rel_residual(got, want, 1e-300), tol, ""),
                Err(e) => rep.push_error(format!("c_shift_3{i}/{}", tag(sec)), e),
            }
        }
    }
    rep.timed(start)
}

/// `c(λ)` conditions over `samples` random rank-4 schemes.
pub fn c_conditions_suite(samples: usize, seed: u64, tol: f64) -> ResidualReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ResidualReport::new("c-conditions");
    for i in 0..samples {
        let s = random_scheme(&mut rng, 4, 3, 3.0);
        let mut sub = residual_c_conditions(&s, tol);
        sub.suite = format!("sample{i}");
        rep.extend(sub);
    }
    rep.with_config(serde_json::json!({ "samples": samples, "seed": seed })).timed(start)
}

/// The five `4G4` relations at the parameters of a rank-4 kernel sample.
pub fn kernel_4g4_relations(s: &GTScheme, g: &Gl4Gamma, cfg: &QuadConfig, tol: f64) -> ResidualReport {
    check_4g4_relations(&g.four_g_four(s), cfg, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl3_system_on_random_samples() {
        let rep = kernel_suite(3, 20, 7, &QuadConfig::default(), 1e-10);
        assert!(rep.pass(), "{:#?}", rep.failures());
        assert_eq!(rep.cases.len(), 40);
    }

    #[test]
    fn gl3_negative_control_fails() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random_scheme(&mut rng, 3, 2, 2.0);
        let g = random_gamma(&mut rng, &s, 2, 2.0);
        let rep = kernel_system_report(&s, &g, &QuadConfig::default(), 1e-10, true).unwrap();
        assert!(rep.cases.iter().all(|c| c.residual > 0.5), "{:#?}", rep.cases);
    }

    #[test]
    fn c_conditions_hold() {
        let rep = c_conditions_suite(10, 5, 1e-10);
        assert!(rep.pass(), "{:#?}", rep.failures());
        assert_eq!(rep.cases.len(), 100);
    }

    #[test]
    fn gl3_rank_mismatch() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_scheme(&mut rng, 4, 1, 1.0);
        let rep = residual_kernel_system(&s, &GammaSample::Gl3(DoubleIndex::real(0.1)), &QuadConfig::default(), 1e-10);
        assert!(!rep.pass());
    }
}

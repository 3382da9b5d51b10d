//! Machine-readable verification report ("verify-v1").
//!
//! Every check records the measured residual next to its tolerance. The
//! builtin suite covers the numbered acceptance criteria; `verify_curve`
//! runs the curve-independent invariants on an arbitrary curve.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cli::formats;
use crate::correspondence::{Chart, EuclideanPoint};
use crate::error::Result;
use crate::incidence::{caustic_membership, lines_through_point, Classification};
use crate::kahler::{
    metric_g, rho, rho_on_section, rho_principal, sigma, FirstOrderJet, SectionJet,
};
use crate::lagrangian::{branch_lambda_limit, lambda_on_sheet, trace_locus, Locus, TraceConfig};
use crate::monopoles::{
    charge2, charge2_conics, charge3, charge3_circle_factor, charge3_f_full, charge3_g_full,
    charge3_g_real_axis_factored, tetrahedral_group, apply_to_line, Charge2Conics,
    CHARGE3_FACTOR_SIGN,
};
use crate::ruled::{
    build_ruled_surface, edge_of_regression, fit_conic, fit_plane, gauss_curvature_general,
    gauss_curvature_holomorphic, CurveJet, RegressionEdge, DEFAULT_N_R, DEFAULT_R_RANGE,
};
use crate::spectral::{eta_roots, reality_check, SpectralCurve};

pub const SCHEMA: &str = "verify-v1";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    /// Acceptance criterion number, or `None` for a per-curve invariant.
    pub criterion: Option<u8>,
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: String,
    pub curve: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    fn new(curve: &str, seed: u64, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self { schema: SCHEMA.into(), curve: curve.into(), seed, passed, checks }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub trace: TraceConfig,
    pub seed: u64,
    /// Multiplies every tolerance.
    pub tol_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { trace: TraceConfig::default(), seed: 0, tol_scale: 1.0 }
    }
}

struct Recorder {
    checks: Vec<Check>,
    tol_scale: f64,
}

impl Recorder {
    fn below(&mut self, criterion: Option<u8>, name: &str, residual: f64, tolerance: f64, detail: String) {
        let tolerance = tolerance * self.tol_scale;
        let passed = residual.is_finite() && residual < tolerance;
        self.checks.push(Check { criterion, name: name.into(), passed, residual, tolerance, detail });
    }

    /// Exact integer agreement.
    fn count(&mut self, criterion: Option<u8>, name: &str, got: usize, want: usize) {
        self.checks.push(Check {
            criterion,
            name: name.into(),
            passed: got == want,
            residual: (got as f64 - want as f64).abs(),
            tolerance: 0.0,
            detail: format!("got {got}, expected {want}"),
        });
    }

    fn flag(&mut self, criterion: Option<u8>, name: &str, passed: bool, detail: String) {
        let residual = if passed { 0.0 } else { 1.0 };
        self.checks.push(Check { criterion, name: name.into(), passed, residual, tolerance: 0.0, detail });
    }

    fn error(&mut self, criterion: Option<u8>, name: &str, e: impl std::fmt::Display) {
        self.checks.push(Check {
            criterion,
            name: name.into(),
            passed: false,
            residual: f64::NAN,
            tolerance: 0.0,
            detail: format!("error: {e}"),
        });
    }
}

/// Traces of the two builtin curves, shared by several criteria.
pub struct Builtins {
    pub charge2: SpectralCurve,
    pub conics: Charge2Conics,
    pub locus2: Locus,
    pub edges2: Vec<RegressionEdge>,
    pub charge3: SpectralCurve,
    pub locus3: Locus,
    pub edges3: Vec<RegressionEdge>,
}

impl Builtins {
    pub fn trace(cfg: &TraceConfig) -> Result<Self> {
        let (c2, _) = charge2(0.8)?;
        let conics = charge2_conics(0.8)?;
        let locus2 = trace_locus(&c2, cfg)?;
        let edges2 = locus2.components.iter().map(|k| edge_of_regression(&c2, k)).collect::<Result<_>>()?;
        let c3 = charge3();
        let locus3 = trace_locus(&c3, cfg)?;
        let edges3 = locus3.components.iter().map(|k| edge_of_regression(&c3, k)).collect::<Result<_>>()?;
        Ok(Self { charge2: c2, conics, locus2, edges2, charge3: c3, locus3, edges3 })
    }
}

/// The full builtin suite: criteria 1 to 10 plus the per-curve invariants
/// of both builtins.
pub fn verify_all(opts: &VerifyOptions) -> VerifyReport {
    let mut rec = Recorder { checks: Vec::new(), tol_scale: opts.tol_scale };
    match Builtins::trace(&opts.trace) {
        Ok(b) => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            criterion1(&mut rec, &b);
            criterion2(&mut rec, &b);
            criterion3(&mut rec, &b, &mut rng);
            criterion4(&mut rec, &mut rng);
            criterion5(&mut rec, &b, &mut rng);
            criterion6(&mut rec, &b, &mut rng);
            criterion7(&mut rec, &b);
            criterion8(&mut rec, &b, &mut rng);
            criterion9(&mut rec, &b, &mut rng);
            criterion10(&mut rec, &b, opts);
            for (name, c, l) in [("charge2:k=0.8", &b.charge2, &b.locus2), ("charge3", &b.charge3, &b.locus3)] {
                curve_invariants(&mut rec, name, c, Ok(l), &opts.trace, &mut rng);
            }
        }
        Err(e) => {
            for k in 1..=10 {
                rec.error(Some(k), "builtin traces", &e);
            }
        }
    }
    VerifyReport::new("builtins", opts.seed, rec.checks)
}

/// Curve-independent invariants for one curve.
pub fn verify_curve(name: &str, c: &SpectralCurve, opts: &VerifyOptions) -> VerifyReport {
    let mut rec = Recorder { checks: Vec::new(), tol_scale: opts.tol_scale };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let locus = trace_locus(c, &opts.trace);
    curve_invariants(&mut rec, name, c, locus.as_ref(), &opts.trace, &mut rng);
    VerifyReport::new(name, opts.seed, rec.checks)
}

fn curve_invariants(
    rec: &mut Recorder,
    name: &str,
    c: &SpectralCurve,
    locus: std::result::Result<&Locus, &crate::Error>,
    cfg: &TraceConfig,
    rng: &mut ChaCha8Rng,
) {
    let reality = reality_check(c);
    rec.below(None, &format!("{name}: reality"), reality.max_residual, 1e-12, "coefficient symmetry residual".into());

    let m = c.charge();
    let mut worst = 0usize;
    for _ in 0..200 {
        let p = random_point(rng, 3.0);
        let r = lines_through_point(c, &p);
        worst = worst.max(r.total_multiplicity().abs_diff(2 * m));
    }
    rec.count(None, &format!("{name}: incidence degree deficit (200 points)"), worst, 0);

    let locus = match locus {
        Ok(l) => l,
        Err(e) => {
            rec.error(None, &format!("{name}: trace"), e);
            return;
        }
    };
    let mut lam: f64 = 0.0;
    let mut gap: f64 = 0.0;
    for comp in &locus.components {
        for p in &comp.points {
            if let Ok(l) = lambda_on_sheet(&c.in_chart(p.chart), p.xi, p.eta) {
                if !is_branch_vertex(locus, p.xi, p.chart, cfg) {
                    lam = lam.max(l.abs());
                }
            }
        }
        gap = gap.max(comp.max_gap());
    }
    rec.below(None, &format!("{name}: |lambda| on locus"), lam, 1e-8, format!("{} components", locus.components.len()));
    rec.below(None, &format!("{name}: max edge length"), gap, cfg.max_edge_length(), "chordal".into());

    let mut limit: f64 = 0.0;
    for bp in &locus.branch_points {
        limit = limit.max(branch_lambda_limit(c, bp, 8).abs());
    }
    rec.below(None, &format!("{name}: branch-point lambda limit"), limit, 1e-6, format!("{} branch points", locus.branch_points.len()));

    let mut k_max: f64 = 0.0;
    for comp in &locus.components {
        k_max = k_max.max(build_ruled_surface(c, comp, DEFAULT_R_RANGE, DEFAULT_N_R).max_abs_curvature(1e-6));
    }
    rec.below(None, &format!("{name}: flatness of Lagrangian rulings"), k_max, 1e-6, "max |K| over meshes".into());
}

fn is_branch_vertex(locus: &Locus, xi: Complex64, chart: Chart, cfg: &TraceConfig) -> bool {
    let north = match chart {
        Chart::North => xi,
        Chart::South => xi.inv(),
    };
    locus.branch_points.iter().any(|b| {
        let bx = match b.chart {
            Chart::North => b.xi,
            Chart::South => b.xi.inv(),
        };
        crate::poly::chordal_distance(bx, north) < 1e-3 * cfg.cell_size()
    })
}

fn random_point(rng: &mut ChaCha8Rng, half: f64) -> EuclideanPoint {
    EuclideanPoint::new(rng.gen_range(-half..half), rng.gen_range(-half..half), rng.gen_range(-half..half))
}

fn random_c(rng: &mut ChaCha8Rng, half: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-half..half), rng.gen_range(-half..half))
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// Distance in the unit-disk chart from `v` to the charge-2 projected locus:
/// the unit circle together with the real segment [−½, ½].
fn charge2_target_distance(v: Complex64) -> f64 {
    let circle = (v.norm() - 1.0).abs();
    let seg = segment_distance(v, Complex64::new(-0.5, 0.0), Complex64::new(0.5, 0.0));
    circle.min(seg)
}

/// Projected Hausdorff distance between a traced locus and the charge-2
/// reference set, measured chart by chart (ξ for |ξ| ≤ 1, else 1/ξ).
pub fn charge2_projected_hausdorff(locus: &Locus) -> f64 {
    let mut forward: f64 = 0.0;
    let mut polylines: [Vec<(Complex64, Complex64)>; 2] = [Vec::new(), Vec::new()];
    for comp in &locus.components {
        let pts: Vec<Complex64> = comp.projected.clone();
        for &x in &pts {
            if !x.is_finite() {
                continue;
            }
            let v = if x.norm() <= 1.0 { x } else { x.inv() };
            forward = forward.max(charge2_target_distance(v));
        }
        let n = pts.len();
        let segs = if comp.closed { n } else { n.saturating_sub(1) };
        for i in 0..segs {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            if a.norm() <= 1.5 && b.norm() <= 1.5 {
                polylines[0].push((a, b));
            }
            if a.is_finite() && b.is_finite() && a.norm() >= 1.0 / 1.5 && b.norm() >= 1.0 / 1.5 {
                polylines[1].push((a.inv(), b.inv()));
            }
        }
    }
    let near = |rep: usize, t: Complex64| -> f64 {
        polylines[rep].iter().map(|&(a, b)| segment_distance(t, a, b)).fold(f64::INFINITY, f64::min)
    };
    let mut backward: f64 = 0.0;
    for i in 0..720 {
        let t = Complex64::from_polar(1.0, 2.0 * PI * i as f64 / 720.0);
        backward = backward.max(near(0, t).min(near(1, t)));
    }
    for i in 0..=200 {
        let t = Complex64::new(-0.5 + i as f64 / 200.0, 0.0);
        backward = backward.max(near(0, t)).max(near(1, t));
    }
    forward.max(backward)
}

fn criterion1(rec: &mut Recorder, b: &Builtins) {
    let comps = &b.locus2.components;
    rec.count(Some(1), "charge-2 component count", comps.len(), 4);
    let through = comps.iter().filter(|k| !k.passes_branch.is_empty()).count();
    rec.count(Some(1), "charge-2 components through branch points", through, 2);
    rec.below(Some(1), "charge-2 projected Hausdorff distance", charge2_projected_hausdorff(&b.locus2), 1e-4, "unit circle and real arcs".into());
}

fn criterion2(rec: &mut Recorder, b: &Builtins) {
    let (mut ell, mut hyp) = (0.0_f64, 0.0_f64);
    let (mut ell_pts, mut hyp_pts) = (Vec::new(), Vec::new());
    for (comp, edge) in b.locus2.components.iter().zip(&b.edges2) {
        if comp.passes_branch.is_empty() {
            for p in &edge.points {
                ell = ell.max(b.conics.ellipse_residual(p).abs());
                ell_pts.push((p.x1, p.x2));
            }
        } else {
            for p in edge.points.iter().filter(|p| p.norm() < 20.0) {
                hyp = hyp.max(b.conics.hyperbola_residual(p).abs());
                hyp_pts.push((p.x1, p.x3));
            }
        }
    }
    rec.below(Some(2), "ellipse identity", ell, 1e-7, format!("{} edge points", ell_pts.len()));
    rec.below(Some(2), "hyperbola identity with (x3)^2", hyp, 1e-7, format!("{} edge points", hyp_pts.len()));
    let e1 = fit_conic(&ell_pts).eccentricity();
    let e2 = fit_conic(&hyp_pts).eccentricity();
    rec.below(Some(2), "ellipse eccentricity", (e1 - 0.8).abs(), 1e-6, format!("measured {e1:.10}"));
    rec.below(Some(2), "hyperbola eccentricity", (e2 - 1.25).abs(), 1e-6, format!("measured {e2:.10}"));
}

/// A random jet made null by correcting η̇ along iξ̇.
fn null_jet(rng: &mut ChaCha8Rng) -> CurveJet {
    let j = CurveJet::north(random_c(rng, 2.0), random_c(rng, 2.0), random_c(rng, 1.0), random_c(rng, 1.0));
    let w = 1.0 + j.xi.norm_sqr();
    let d = j.null_defect();
    let fix = Complex64::new(0.0, d) * j.dot_xi / (w * j.dot_xi.norm_sqr());
    CurveJet { dot_eta: j.dot_eta - fix, ..j }
}

fn random_jet(rng: &mut ChaCha8Rng) -> CurveJet {
    CurveJet::north(random_c(rng, 2.0), random_c(rng, 2.0), random_c(rng, 1.0), random_c(rng, 1.0))
}

fn criterion3(rec: &mut Recorder, b: &Builtins, rng: &mut ChaCha8Rng) {
    let mut k_max: f64 = 0.0;
    for (c, l) in [(&b.charge2, &b.locus2), (&b.charge3, &b.locus3)] {
        for comp in &l.components {
            k_max = k_max.max(build_ruled_surface(c, comp, DEFAULT_R_RANGE, DEFAULT_N_R).max_abs_curvature(1e-6));
        }
    }
    rec.below(Some(3), "max |K| on Lagrangian ruled surfaces", k_max, 1e-6, "charge 2 and 3, r in [-5, 5]".into());
    let mut not_negative = 0usize;
    for _ in 0..500 {
        let j = random_jet(rng);
        let r = rng.gen_range(-3.0..3.0);
        if gauss_curvature_general(&j, r).map_or(true, |k| k >= -1e-12) {
            not_negative += 1;
        }
    }
    rec.count(Some(3), "non-null jets with K >= -1e-12 (500 jets)", not_negative, 0);
}

fn criterion4(rec: &mut Recorder, rng: &mut ChaCha8Rng) {
    let mut disagree = 0usize;
    for i in 0..500 {
        let j = if i % 2 == 0 { null_jet(rng) } else { random_jet(rng) };
        let g = metric_g(j.xi, j.eta, (j.dot_xi, j.dot_eta), (j.dot_xi, j.dot_eta));
        let null = g.abs() < 1e-10;
        let flat = (0..5).all(|_| {
            let r = rng.gen_range(-3.0..3.0);
            gauss_curvature_general(&j, r).map_or(true, |k| k.abs() < 1e-8)
        });
        if null != flat {
            disagree += 1;
        }
    }
    rec.count(Some(4), "flat iff null disagreements (500 jets)", disagree, 0);
}

fn criterion5(rec: &mut Recorder, b: &Builtins, rng: &mut ChaCha8Rng) {
    for (name, c, edges) in [("charge 2", &b.charge2, &b.edges2), ("charge 3", &b.charge3, &b.edges3)] {
        let m2 = 2 * c.charge();
        let (mut bad_count, mut mismatch) = (0usize, 0usize);
        for _ in 0..200 {
            let p = random_point(rng, 3.0);
            let r = lines_through_point(c, &p);
            if r.total_multiplicity() != m2 {
                bad_count += 1;
            }
            if (r.classification == Classification::Caustic) != caustic_membership(&p, edges) {
                mismatch += 1;
            }
        }
        rec.count(Some(5), &format!("{name}: random points with root count != {m2}"), bad_count, 0);
        let mut sampled = 0usize;
        for e in edges {
            for p in e.points.iter().step_by(17).filter(|p| p.norm() < 10.0) {
                sampled += 1;
                let r = lines_through_point(c, p);
                if r.classification != Classification::Caustic || !caustic_membership(p, edges) {
                    mismatch += 1;
                }
            }
        }
        rec.count(Some(5), &format!("{name}: clustering vs edge proximity disagreements ({sampled} edge points, 200 random)"), mismatch, 0);
    }
}

fn criterion6(rec: &mut Recorder, b: &Builtins, rng: &mut ChaCha8Rng) {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let x = random_c(rng, 1.5);
        let (xi, xb) = (x, x.conj());
        let f = charge3_f_full(xi, xb);
        let rhs = CHARGE3_FACTOR_SIGN * charge3_circle_factor(xi, xb) * charge3_g_full(xi, xb);
        worst = worst.max((f - rhs).norm() / f.norm().max(rhs.norm()).max(1e-300));
    }
    rec.below(Some(6), "f factorization", worst, 1e-9, format!("sign {CHARGE3_FACTOR_SIGN}"));
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let u: f64 = rng.gen_range(-3.0..3.0);
        let lhs = charge3_g_full(Complex64::new(u, 0.0), Complex64::new(u, 0.0)).re;
        let rhs = charge3_g_real_axis_factored(u);
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-300));
    }
    rec.below(Some(6), "Re g(u,u) factorization", worst, 1e-9, String::new());

    let group = tetrahedral_group();
    let north = b.charge3.in_chart(Chart::North);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let xi = random_c(rng, 1.5);
        let roots = eta_roots(&north, xi).roots;
        let eta = roots[rng.gen_range(0..roots.len())];
        let line = crate::correspondence::OrientedLine::north(xi, eta);
        for g in &group.elements {
            let img = apply_to_line(&g.map, &line);
            worst = worst.max(b.charge3.in_chart(img.chart).residual(img.xi, img.eta));
        }
    }
    rec.below(Some(6), "tetrahedral invariance", worst, 1e-8, "100 points x 12 elements".into());
    let mut missing = 0usize;
    for a in &group.elements {
        for bb in &group.elements {
            if group.find(&a.map.compose(&bb.map), 1e-9).is_none() {
                missing += 1;
            }
        }
    }
    rec.count(Some(6), "group closure table gaps", missing, 0);
}

/// Unit vectors along the lines where at least three of the planes with the
/// given normals meet, signed so that they form a tetrahedral frame.
pub fn triple_intersection_directions(normals: &[Vector3<f64>]) -> Vec<Vector3<f64>> {
    let mut lines: Vec<(Vector3<f64>, usize)> = Vec::new();
    for i in 0..normals.len() {
        for j in (i + 1)..normals.len() {
            let d = normals[i].cross(&normals[j]);
            if d.norm() < 1e-6 {
                continue;
            }
            let d = d.normalize();
            match lines.iter_mut().find(|(v, _)| v.dot(&d).abs() > 1.0 - 1e-6) {
                Some(entry) => entry.1 += 1,
                None => lines.push((d, 1)),
            }
        }
    }
    // Three concurrent planes produce their common line three times.
    let mut dirs: Vec<Vector3<f64>> = lines.into_iter().filter(|&(_, n)| n >= 3).map(|(v, _)| v).collect();
    if dirs.len() == 4 {
        for i in 1..4 {
            if dirs[0].dot(&dirs[i]) > 0.0 {
                dirs[i] = -dirs[i];
            }
        }
    }
    dirs
}

fn criterion7(rec: &mut Recorder, b: &Builtins) {
    let comps = &b.locus3.components;
    rec.count(Some(7), "charge-3 component count", comps.len(), 10);
    let mut planar = Vec::new();
    let mut curved = Vec::new();
    for comp in comps {
        let s = build_ruled_surface(&b.charge3, comp, DEFAULT_R_RANGE, DEFAULT_N_R);
        let (normal, _, resid) = fit_plane(s.points());
        if resid < 1e-6 {
            planar.push((normal, resid));
        } else {
            curved.push((resid, s.max_abs_curvature(1e-6)));
        }
    }
    rec.count(Some(7), "planar ruled surfaces (great circles)", planar.len(), 6);
    let worst_plane = planar.iter().map(|p| p.1).fold(0.0, f64::max);
    rec.below(Some(7), "great-circle plane-fit residual", worst_plane, 1e-6, String::new());
    let normals: Vec<Vector3<f64>> = planar.iter().map(|p| p.0).collect();
    let dirs = triple_intersection_directions(&normals);
    if dirs.len() == 4 {
        let mut lengths = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                lengths.push((dirs[i] - dirs[j]).norm());
            }
        }
        let max = lengths.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = lengths.iter().cloned().fold(f64::INFINITY, f64::min);
        rec.below(Some(7), "tetrahedron edge-length spread", (max - min) / max, 1e-4, format!("edge {max:.9}"));
    } else {
        rec.flag(Some(7), "tetrahedron edge-length spread", false, format!("{} triple lines", dirs.len()));
    }
    rec.count(Some(7), "non-planar ruled surfaces", curved.len(), 4);
    let k = curved.iter().map(|c| c.1).fold(0.0, f64::max);
    let bend = curved.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    rec.below(Some(7), "non-planar surfaces are flat", k, 1e-6, format!("smallest plane-fit residual {bend:.3e}"));
}

fn criterion8(rec: &mut Recorder, b: &Builtins, rng: &mut ChaCha8Rng) {
    for (name, c, l) in [("charge 2", &b.charge2, &b.locus2), ("charge 3", &b.charge3, &b.locus3)] {
        let unvisited = (0..l.branch_points.len()).filter(|i| !l.components.iter().any(|k| k.passes_branch.contains(i))).count();
        rec.count(Some(8), &format!("{name}: branch points off the locus"), unvisited, 0);
        let limit = l.branch_points.iter().map(|bp| branch_lambda_limit(c, bp, 8).abs()).fold(0.0, f64::max);
        rec.below(Some(8), &format!("{name}: extrapolated lambda limit"), limit, 1e-6, format!("{} branch points", l.branch_points.len()));
        let (far, found) = isolated_zeros(c, l, rng, 20_000);
        rec.below(Some(8), &format!("{name}: farthest sampled zero (cells)"), far / l.cell_size, 2.0, format!("{found} zeros sampled"));
    }
}

/// Samples short segments in both charts, locates sign changes of λ on each
/// sheet and returns the largest chart distance from such a zero to the
/// traced locus, with the number of zeros found.
pub fn isolated_zeros(c: &SpectralCurve, l: &Locus, rng: &mut ChaCha8Rng, samples: usize) -> (f64, usize) {
    let h = l.cell_size;
    let (mut far, mut found) = (0.0_f64, 0usize);
    for chart in [Chart::North, Chart::South] {
        let curve = c.in_chart(chart);
        let local = |x: Complex64| match chart {
            Chart::North => x,
            Chart::South => x.inv(),
        };
        let mut segments = Vec::new();
        for comp in &l.components {
            let pts: Vec<Complex64> = comp.projected.iter().map(|&x| local(x)).collect();
            let n = pts.len();
            let count = if comp.closed { n } else { n.saturating_sub(1) };
            for i in 0..count {
                let (a, b) = (pts[i], pts[(i + 1) % n]);
                if a.is_finite() && b.is_finite() && a.norm() < 2.0 && b.norm() < 2.0 {
                    segments.push((a, b));
                }
            }
        }
        let bps: Vec<Complex64> = l
            .branch_points
            .iter()
            .filter_map(|b| b.line().in_chart(chart).ok())
            .map(|b| b.xi)
            .collect();
        for _ in 0..samples / 2 {
            let xa = Complex64::from_polar(1.2 * rng.gen_range(0.0_f64..1.0).sqrt(), rng.gen_range(0.0..2.0 * PI));
            let xb = xa + Complex64::from_polar(0.5 * h, rng.gen_range(0.0..2.0 * PI));
            if bps.iter().any(|&b| (b - xa).norm() < 6.0 * h) {
                continue;
            }
            let ra = eta_roots(&curve, xa).roots;
            let rb = eta_roots(&curve, xb).roots;
            for &ea in &ra {
                let eb = rb[crate::spectral::nearest_index(&rb, ea)];
                let (la, lb) = match (lambda_on_sheet(&curve, xa, ea), lambda_on_sheet(&curve, xb, eb)) {
                    (Ok(la), Ok(lb)) => (la, lb),
                    _ => continue,
                };
                if la.signum() == lb.signum() {
                    continue;
                }
                found += 1;
                let z = xa + (xb - xa) * (la / (la - lb));
                let d = segments.iter().map(|&(a, b)| segment_distance(z, a, b)).fold(f64::INFINITY, f64::min);
                far = far.max(d);
            }
        }
    }
    (far, found)
}

fn criterion9(rec: &mut Recorder, b: &Builtins, rng: &mut ChaCha8Rng) {
    let (mut plain, mut covariant) = (0.0_f64, 0.0_f64);
    for _ in 0..1000 {
        let j = FirstOrderJet {
            xi: random_c(rng, 2.0),
            eta: random_c(rng, 2.0),
            d_xi: random_c(rng, 1.0),
            d_eta: random_c(rng, 1.0),
            db_xi: random_c(rng, 1.0),
            db_eta: random_c(rng, 1.0),
        };
        let s = sigma(&j);
        let p = rho_principal(&j);
        let lhs = p.norm_sqr() - s.norm_sqr();
        let rhs = j.fibre_jacobian() * j.projection_jacobian();
        plain = plain.max((lhs - rhs).abs() / (p.norm_sqr() + s.norm_sqr()).max(1e-300));
        let full = rho(&j).as_complex();
        let (ce, cbe) = j.covariant_eta();
        let lhs = full.norm_sqr() - s.norm_sqr();
        let rhs = (ce.norm_sqr() - cbe.norm_sqr()) * j.projection_jacobian();
        covariant = covariant.max((lhs - rhs).abs() / (full.norm_sqr() + s.norm_sqr()).max(1e-300));
    }
    rec.below(Some(9), "rho-sigma product identity", plain, 1e-10, "principal part".into());
    rec.below(Some(9), "rho-sigma product identity (covariant)", covariant, 1e-10, "full rho".into());

    let seed = rng.gen();
    let res = |power: i32, h: f64| lambda_pde_residual(&b.charge2, power, h, seed);
    let (r1, r2) = (res(2, 1e-2), res(2, 5e-3));
    let order = (r1 / r2).log2();
    rec.below(Some(9), "lambda PDE observed order (power 2)", (order - 2.0).abs(), 0.2, format!("residuals {r1:.3e}, {r2:.3e}"));
    let (q1, q2) = (res(1, 1e-2), res(1, 5e-3));
    rec.flag(Some(9), "lambda PDE with power 1 does not converge", (q1 / q2).log2() < 0.5, format!("residuals {q1:.3e}, {q2:.3e}"));

    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let xi = random_c(rng, 2.0);
        let f = random_c(rng, 2.0);
        let df = random_c(rng, 2.0);
        let dxi = random_c(rng, 1.0);
        let r = rng.gen_range(-3.0..3.0);
        let rv = rho_on_section(&SectionJet { xi, value: f, derivative: df });
        if let (Ok(k1), Ok(k2)) = (
            gauss_curvature_general(&CurveJet::north(xi, f, dxi, df * dxi), r),
            gauss_curvature_holomorphic(rv.psi, rv.lambda, r),
        ) {
            worst = worst.max((k1 - k2).abs() / k2.abs().max(1e-300));
        }
    }
    rec.below(Some(9), "general vs holomorphic curvature", worst, 1e-9, "500 holomorphic jets".into());
}

/// max over 50 sample points of |Δλ + 8λ/(1+|ξ|²)^power| on one sheet,
/// by the five-point Laplacian with step `h`. Samples stay 0.2 away from
/// the branch points.
fn lambda_pde_residual(c: &SpectralCurve, power: i32, h: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let xi = Complex64::from_polar(rng.gen_range(0.0..0.3), rng.gen_range(0.0..2.0 * PI));
        let eta0 = eta_roots(c, xi).roots[0];
        let lam = |x: Complex64| -> f64 {
            let r = eta_roots(c, x).roots;
            let e = r[crate::spectral::nearest_index(&r, eta0)];
            lambda_on_sheet(c, x, e).unwrap_or(f64::NAN)
        };
        let v: Vec<f64> = [xi, xi + h, xi - h, xi + Complex64::new(0.0, h), xi - Complex64::new(0.0, h)]
            .iter()
            .map(|&x| lam(x))
            .collect();
        let lap = (v[1] + v[2] + v[3] + v[4] - 4.0 * v[0]) / (h * h);
        let w = 1.0 + xi.norm_sqr();
        worst = worst.max((lap + 8.0 * v[0] / w.powi(power)).abs());
    }
    worst
}

fn criterion10(rec: &mut Recorder, b: &Builtins, opts: &VerifyOptions) {
    let first = formats::locus_csv(&b.locus2);
    match trace_locus(&b.charge2, &opts.trace) {
        Ok(again) => rec.flag(Some(10), "repeated trace is byte-identical", formats::locus_csv(&again) == first, format!("{} bytes", first.len())),
        Err(e) => rec.error(Some(10), "repeated trace is byte-identical", e),
    }
    let svg = formats::locus_svg(&b.locus3);
    match formats::check_svg(&svg) {
        Ok(n) => rec.flag(Some(10), "SVG parse-back", true, format!("{n} polylines")),
        Err(e) => rec.flag(Some(10), "SVG parse-back", false, e),
    }
    let surf = build_ruled_surface(&b.charge3, &b.locus3.components[0], DEFAULT_R_RANGE, DEFAULT_N_R);
    let obj = formats::surface_obj(&surf);
    match formats::check_obj(&obj) {
        Ok((v, f)) => rec.flag(Some(10), "OBJ parse-back", true, format!("{v} vertices, {f} faces")),
        Err(e) => rec.flag(Some(10), "OBJ parse-back", false, e),
    }
    let mut covered: Vec<u8> = rec.checks.iter().filter_map(|c| c.criterion).collect();
    covered.push(10);
    covered.sort_unstable();
    covered.dedup();
    rec.count(Some(10), "criteria listed in report", covered.len(), 10);
}

//! Tracing of the Lagrangian locus λ = 0 on a spectral curve.
//!
//! Each chart is sampled on a square grid. At every vertex the fibre roots
//! and λ on each root are computed once; inside a cell the sheets are
//! matched to the first corner, and marching squares runs per sheet. Edge
//! crossings are refined by bracketed regula falsi along the edge, chains
//! are joined across the chart seam, and chain ends near a branch point are
//! paired through the branch point itself.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correspondence::{chart_transition, Chart, OrientedLine};
use crate::error::{Error, Result};
use crate::kahler::{connection, lambda_on_section, SectionJet};
use crate::poly::chordal_distance;
use crate::spectral::{
    branch_points, eta_derivative_at, fibre_roots, nearest_index, newton_eta, sheet_label, BranchPoint,
    SheetPoint, SpectralConfig, SpectralCurve,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    /// Cells per axis of each chart square.
    pub grid_n: usize,
    /// Half-width of the chart square.
    pub window: f64,
    /// Target |λ| of refined locus points.
    pub refine_tol: f64,
    /// Consecutive points closer than this (chordally) are merged.
    pub dedupe_tol: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self { grid_n: 1024, window: 4.0, refine_tol: 1e-10, dedupe_tol: 1e-6 }
    }
}

impl TraceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_n < 16 {
            return Err(Error::Domain(format!("grid_n must be at least 16, got {}", self.grid_n)));
        }
        if !(self.window > 0.0 && self.window.is_finite()) {
            return Err(Error::Domain(format!("window must be positive, got {}", self.window)));
        }
        Ok(())
    }

    pub fn cell_size(&self) -> f64 {
        2.0 * self.window / self.grid_n as f64
    }

    /// Upper bound on the chordal distance between consecutive locus points.
    pub fn max_edge_length(&self) -> f64 {
        16.0 * self.cell_size()
    }

    /// Radius of the disk around each branch point inside which cells are
    /// not marched.
    pub fn branch_exclusion(&self) -> f64 {
        4.0 * self.cell_size()
    }
}

/// One connected Lagrangian curve on Σ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusComponent {
    pub points: Vec<SheetPoint>,
    pub closed: bool,
    /// Indices into [`Locus::branch_points`] of the branch points visited.
    pub passes_branch: Vec<usize>,
    /// Indices into [`Locus::crossings`], once per pass (a self-crossing
    /// appears twice).
    pub passes_crossing: Vec<usize>,
    /// ξ of every point in the North chart (infinite at the South pole).
    pub projected: Vec<Complex64>,
    /// Why the component could not be closed, if it is open.
    pub breakdown: Option<String>,
}

impl LocusComponent {
    /// Unit vectors on the sphere of directions, one per point.
    pub fn directions(&self) -> Vec<[f64; 3]> {
        self.points.iter().map(|p| p.line().direction().to_array()).collect()
    }

    /// The most common sheet label along the component.
    pub fn dominant_sheet(&self) -> usize {
        let mut counts = BTreeMap::new();
        for p in &self.points {
            *counts.entry(p.sheet_id).or_insert(0usize) += 1;
        }
        counts.into_iter().max_by_key(|&(s, n)| (n, std::cmp::Reverse(s))).map(|(s, _)| s).unwrap_or(0)
    }

    /// Largest chordal distance between consecutive points (including the
    /// closing segment of a closed component).
    pub fn max_gap(&self) -> f64 {
        let dirs = self.directions();
        let n = dirs.len();
        let mut worst: f64 = 0.0;
        let count = if self.closed { n } else { n.saturating_sub(1) };
        for i in 0..count {
            let (a, b) = (dirs[i], dirs[(i + 1) % n]);
            let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
            worst = worst.max(d);
        }
        worst
    }
}

/// A point where two traced components meet on the curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Junction {
    pub components: (usize, usize),
    /// Unit direction of the common ξ.
    pub direction: [f64; 3],
    /// Branch point at which they meet, if any.
    pub branch_point: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Locus {
    pub components: Vec<LocusComponent>,
    pub branch_points: Vec<BranchPoint>,
    pub crossings: Vec<Crossing>,
    pub junctions: Vec<Junction>,
    pub cell_size: f64,
}

/// λ on the local section through (ξ, η), with ∂η from implicit differentiation.
pub fn lambda_on_sheet(c: &SpectralCurve, xi: Complex64, eta: Complex64) -> Result<f64> {
    let d = eta_derivative_at(c, xi, eta, &SpectralConfig::default())?;
    Ok(lambda_on_section(&SectionJet { xi, value: eta, derivative: d }))
}

/// The pulled-back symplectic density in the fibre coordinate η, λ/|∂η|².
/// Unlike λ it stays bounded at branch points, where it vanishes.
pub fn lambda_in_fibre_coordinate(c: &SpectralCurve, xi: Complex64, eta: Complex64) -> f64 {
    let d = c.partials(xi, eta);
    // λ/|F'|² = Im[F' − conn]/|F'|² = Im[(−P_ξ/P_η − conn)] · |P_η|²/|P_ξ|²
    let num = -d.p_xi * d.p_eta.conj() - connection(xi, eta) * d.p_eta.norm_sqr();
    num.im / d.p_xi.norm_sqr()
}

/// Sheets over ξ (indices into the fibre root list) on which λ vanishes.
pub fn artifact_filter(c: &SpectralCurve, xi: Complex64) -> Vec<usize> {
    let roots = fibre_roots(c, xi);
    let cfg = SpectralConfig::default();
    let mut out = Vec::new();
    for (i, &eta) in roots.iter().enumerate() {
        match eta_derivative_at(c, xi, eta, &cfg) {
            Ok(d) => {
                let lam = lambda_on_section(&SectionJet { xi, value: eta, derivative: d });
                if lam.abs() < 1e-7 * (1.0 + d.norm()) {
                    out.push(i);
                }
            }
            Err(_) => {
                // Branch point: approach along four directions in the fibre coordinate.
                let limit = [1.0, 0.0, -1.0, 0.0]
                    .iter()
                    .zip([0.0, 1.0, 0.0, -1.0])
                    .map(|(&re, im)| {
                        let x = xi + Complex64::new(re, im) * 1e-7 * (1.0 + xi.norm());
                        let near = fibre_roots(c, x);
                        let e = near[nearest_index(&near, eta)];
                        lambda_in_fibre_coordinate(c, x, e).abs()
                    })
                    .fold(0.0, f64::max);
                if limit < 1e-6 {
                    out.push(i);
                }
            }
        }
    }
    out
}

/// Extrapolated limit of λ/|∂η|² at a branch point along `rays` radial
/// directions on each merging sheet; returns the largest |intercept|.
///
/// With s = |ξ − ξ_b|^{1/k} on a sheet of ramification k the density is a
/// series in s starting at s^{k−1}; samples are fitted with the basis
/// 1, s^{k−1}, ..., s^{k+2}.
pub fn branch_lambda_limit(c: &SpectralCurve, bp: &BranchPoint, rays: usize) -> f64 {
    let curve = c.in_chart(bp.chart);
    let k = bp.ramification().max(2) as i32;
    let mut worst: f64 = 0.0;
    for ray in 0..rays {
        let dir = Complex64::from_polar(1.0, std::f64::consts::TAU * (ray as f64 + 0.25) / rays as f64);
        // Follow each sheet leaving the branch point along the ray.
        let start = bp.xi + dir * 1e-4;
        let roots = fibre_roots(&curve, start);
        let mut merging: Vec<usize> = (0..roots.len()).collect();
        merging.sort_by(|&a, &b| (roots[a] - bp.eta).norm().total_cmp(&(roots[b] - bp.eta).norm()));
        merging.truncate(bp.ramification());
        for &sheet in &merging {
            let mut eta = roots[sheet];
            let mut samples = Vec::new();
            for i in 0..8 {
                let delta = 1e-4 * 0.5_f64.powi(i);
                let x = bp.xi + dir * delta;
                let near = fibre_roots(&curve, x);
                eta = near[nearest_index(&near, eta)];
                samples.push((delta.powf(1.0 / k as f64), lambda_in_fibre_coordinate(&curve, x, eta)));
            }
            worst = worst.max(series_intercept(&samples, &[k - 1, k, k + 1, k + 2]).abs());
        }
    }
    worst
}

/// Least-squares fit y ≈ a + Σ b_p s^p over the given powers, returns a.
fn series_intercept(samples: &[(f64, f64)], powers: &[i32]) -> f64 {
    let n = powers.len() + 1;
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
    let mut v = nalgebra::DVector::<f64>::zeros(n);
    for &(s, y) in samples {
        let row = nalgebra::DVector::from_iterator(n, std::iter::once(1.0).chain(powers.iter().map(|&p| s.powi(p))));
        m += &row * row.transpose();
        v += &row * y;
    }
    m.lu().solve(&v).map(|x| x[0]).unwrap_or(f64::NAN)
}

/// A vertex of a chart grid: fibre roots and λ on each.
#[derive(Debug, Clone)]
struct VertexData {
    roots: Vec<Complex64>,
    lambda: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum EdgeKind {
    Horizontal,
    Vertical,
}

/// A crossing of λ = 0 on one grid edge and one sheet, identified by the
/// root index at the edge's lower-left endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct CrossingKey {
    chart: u8,
    kind: EdgeKind,
    i: usize,
    j: usize,
    root: usize,
}

#[derive(Debug, Clone, Copy)]
struct CrossingRequest {
    a: Complex64,
    b: Complex64,
    eta_a: Complex64,
    eta_b: Complex64,
    lam_a: f64,
    lam_b: f64,
}

/// Branch point as seen from one chart.
#[derive(Debug, Clone, Copy)]
struct LocalBranch {
    index: usize,
    xi: Complex64,
    eta: Complex64,
    ramification: usize,
    /// Fibre roots closer than this to `eta` belong to the merging sheets.
    merge_radius: f64,
}

struct ChartGrid {
    chart: Chart,
    curve: SpectralCurve,
    n: usize,
    h: f64,
    x0: f64,
    y0: f64,
    /// Cells are owned when their centre satisfies this bound on |ξ|.
    owned_radius: f64,
    vertices: Vec<Option<VertexData>>,
    branches: Vec<LocalBranch>,
    exclusion: f64,
}

impl ChartGrid {
    fn vertex_xi(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x0 + i as f64 * self.h, self.y0 + j as f64 * self.h)
    }

    fn owns(&self, xi: Complex64) -> bool {
        match self.chart {
            Chart::North => xi.norm() <= self.owned_radius,
            Chart::South => xi.norm() < self.owned_radius,
        }
    }

    fn vertex(&self, i: usize, j: usize) -> Option<&VertexData> {
        self.vertices[j * (self.n + 1) + i].as_ref()
    }
}

fn chart_code(c: Chart) -> u8 {
    match c {
        Chart::North => 0,
        Chart::South => 1,
    }
}

/// Picks the seam radius in [1.12, 1.25] farthest from every branch point modulus.
fn seam_radius(bps: &[BranchPoint]) -> f64 {
    let moduli: Vec<f64> = bps
        .iter()
        .map(|b| match b.chart {
            Chart::North => b.xi.norm(),
            Chart::South => 1.0 / b.xi.norm(),
        })
        .collect();
    (0..=13)
        .map(|i| 1.12 + 0.01 * i as f64)
        .max_by(|a, b| {
            let da = moduli.iter().map(|m| (m - a).abs()).fold(f64::INFINITY, f64::min);
            let db = moduli.iter().map(|m| (m - b).abs()).fold(f64::INFINITY, f64::min);
            da.total_cmp(&db).then(b.total_cmp(a))
        })
        .unwrap_or(1.17)
}

/// Rejects curves on which λ vanishes identically.
fn check_not_totally_lagrangian(c: &SpectralCurve) -> Result<()> {
    let cfg = SpectralConfig::default();
    let mut worst: f64 = 0.0;
    for i in 0..64 {
        // Deterministic scatter over a disk of radius ~1.5.
        let r = 1.5 * ((i as f64 + 0.5) / 64.0).sqrt();
        let xi = Complex64::from_polar(r, 2.399_963_229_728_653 * i as f64);
        for eta in fibre_roots(c, xi) {
            if let Ok(d) = eta_derivative_at(c, xi, eta, &cfg) {
                let lam = lambda_on_section(&SectionJet { xi, value: eta, derivative: d });
                worst = worst.max(lam.abs() / (1.0 + d.norm() + eta.norm()));
            }
        }
    }
    if worst < 1e-9 {
        return Err(Error::TotallyLagrangian);
    }
    Ok(())
}

/// Traces the Lagrangian locus of `c` over the whole sphere.
pub fn trace_locus(c: &SpectralCurve, cfg: &TraceConfig) -> Result<Locus> {
    cfg.validate()?;
    let north = c.in_chart(Chart::North);
    check_not_totally_lagrangian(&north)?;
    let bps = branch_points(&north)?;
    let rho = seam_radius(&bps);
    let h = cfg.cell_size();

    let grids: Vec<ChartGrid> = [Chart::North, Chart::South]
        .into_iter()
        .map(|chart| build_grid(&north, chart, &bps, rho, cfg))
        .collect();

    let mut pieces = Vec::new();
    let mut crossings = Vec::new();
    for grid in &grids {
        let (p, x) = march_chart(grid, cfg);
        pieces.extend(p);
        crossings.extend(x);
    }
    let components = assemble(&north, &grids, pieces, &bps, &crossings, h, cfg);
    let junctions = find_junctions(&components, &bps, &crossings);
    Ok(Locus { components, branch_points: bps, crossings, junctions, cell_size: h })
}

fn build_grid(north: &SpectralCurve, chart: Chart, bps: &[BranchPoint], rho: f64, cfg: &TraceConfig) -> ChartGrid {
    let curve = north.in_chart(chart);
    let n = cfg.grid_n;
    let h = cfg.cell_size();
    let owned_radius = match chart {
        Chart::North => rho,
        Chart::South => 1.0 / rho,
    };
    // Offsets keep grid lines off the coordinate axes and the diagonals.
    let x0 = -cfg.window + 0.5137 * h;
    let y0 = -cfg.window + 0.4629 * h;
    let eval_radius = owned_radius + 3.0 * h;
    let branches: Vec<LocalBranch> = bps
        .iter()
        .enumerate()
        .filter_map(|(index, b)| {
            let local = if b.chart == chart { Some(b.line()) } else { chart_transition(&b.line()).ok() }?;
            let roots = fibre_roots(&curve, local.xi);
            let mut dists: Vec<f64> = roots.iter().map(|r| (r - local.eta).norm()).collect();
            dists.sort_by(f64::total_cmp);
            let outside = dists.get(b.ramification()).copied().unwrap_or(f64::INFINITY);
            Some(LocalBranch {
                index,
                xi: local.xi,
                eta: local.eta,
                ramification: b.ramification(),
                merge_radius: 0.5 * outside,
            })
        })
        .collect();
    let spectral_cfg = SpectralConfig::default();
    let vertices: Vec<Option<VertexData>> = (0..(n + 1) * (n + 1))
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % (n + 1), idx / (n + 1));
            let xi = Complex64::new(x0 + i as f64 * h, y0 + j as f64 * h);
            if xi.norm() > eval_radius {
                return None;
            }
            let roots = fibre_roots(&curve, xi);
            let lambda = roots
                .iter()
                .map(|&eta| match eta_derivative_at(&curve, xi, eta, &spectral_cfg) {
                    Ok(d) => lambda_on_section(&SectionJet { xi, value: eta, derivative: d }),
                    Err(_) => f64::NAN,
                })
                .collect();
            Some(VertexData { roots, lambda })
        })
        .collect();
    ChartGrid { chart, curve, n, h, x0, y0, owned_radius, vertices, branches, exclusion: cfg.branch_exclusion() }
}

/// Root index at each corner for each sheet (sheet = root index at corner 0);
/// `None` entries mark sheets that cannot be matched reliably.
fn match_sheets(corners: &[&VertexData; 4], skip: &[bool]) -> Vec<Option<[usize; 4]>> {
    let base = &corners[0].roots;
    let m = base.len();
    let mut out = vec![None; m];
    let mut perms = vec![[0usize; 4]; m];
    let mut ok = vec![true; m];
    for s in 0..m {
        perms[s][0] = s;
    }
    for c in 1..4 {
        let roots = &corners[c].roots;
        let mut used = vec![false; m];
        // Assign sheets in order of increasing best distance.
        let mut order: Vec<(f64, usize)> = (0..m)
            .map(|s| {
                let best = roots.iter().map(|r| (r - base[s]).norm()).fold(f64::INFINITY, f64::min);
                (best, s)
            })
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(_, s) in &order {
            let mut cands: Vec<(f64, usize)> =
                (0..m).filter(|&r| !used[r]).map(|r| ((roots[r] - base[s]).norm(), r)).collect();
            cands.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (d0, r0) = cands[0];
            used[r0] = true;
            perms[s][c] = r0;
            let sep = (0..m).filter(|&t| t != s).map(|t| (base[t] - base[s]).norm()).fold(f64::INFINITY, f64::min);
            if d0 > 0.3 * sep {
                ok[s] = false;
            }
        }
    }
    for s in 0..m {
        if ok[s] && !skip[s] {
            out[s] = Some(perms[s]);
        }
    }
    out
}

struct Piece {
    points: Vec<SheetPoint>,
    closed: bool,
}

fn march_chart(grid: &ChartGrid, cfg: &TraceConfig) -> (Vec<Piece>, Vec<Crossing>) {
    let n = grid.n;
    let code = chart_code(grid.chart);
    type CellOut = (Vec<(CrossingKey, CrossingKey)>, Vec<(CrossingKey, CrossingRequest)>);
    let per_row: Vec<CellOut> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut segs = Vec::new();
            let mut reqs = Vec::new();
            for i in 0..n {
                march_cell(grid, code, i, j, &mut segs, &mut reqs);
            }
            (segs, reqs)
        })
        .collect();
    let mut requests: BTreeMap<CrossingKey, CrossingRequest> = BTreeMap::new();
    let mut segments = Vec::new();
    for (segs, reqs) in per_row {
        segments.extend(segs);
        for (k, r) in reqs {
            requests.entry(k).or_insert(r);
        }
    }
    let keys: Vec<CrossingKey> = requests.keys().copied().collect();
    let refined: Vec<Option<(Complex64, Complex64)>> =
        keys.par_iter().map(|k| refine_crossing(&grid.curve, &requests[k], cfg)).collect();
    let points: BTreeMap<CrossingKey, (Complex64, Complex64)> =
        keys.iter().zip(refined).filter_map(|(k, p)| p.map(|p| (*k, p))).collect();

    let mut adjacency: BTreeMap<CrossingKey, Vec<CrossingKey>> = BTreeMap::new();
    for (a, b) in segments {
        if a == b || !points.contains_key(&a) || !points.contains_key(&b) {
            continue;
        }
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    }
    let chains: Vec<(Vec<SheetPoint>, bool)> = walk_chains(&adjacency)
        .into_iter()
        .map(|(chain, closed)| {
            let pts = chain
                .iter()
                .map(|k| {
                    let (xi, eta) = points[k];
                    SheetPoint { chart: grid.chart, xi, eta, sheet_id: 0 }
                })
                .collect();
            (pts, closed)
        })
        .collect();
    let crossings = find_crossings(grid, &chains);
    let mut pieces = Vec::new();
    for (pts, closed) in chains {
        // Keep the part inside the chart's own domain and away from crossings.
        let keep: Vec<bool> =
            pts.iter().map(|p| grid.owns(p.xi) && !crossings.iter().any(|x| x.covers(p))).collect();
        for (points, closed) in split_runs(pts, closed, &keep) {
            pieces.push(Piece { points, closed });
        }
    }
    (pieces, crossings)
}

/// Maximal runs of kept points; a closed chain stays closed only if every
/// point is kept.
fn split_runs(pts: Vec<SheetPoint>, closed: bool, keep: &[bool]) -> Vec<(Vec<SheetPoint>, bool)> {
    if keep.iter().all(|&k| k) {
        return vec![(pts, closed)];
    }
    let mut runs: Vec<Vec<SheetPoint>> = Vec::new();
    let mut current = Vec::new();
    for (p, &k) in pts.iter().zip(keep) {
        if k {
            current.push(*p);
        } else if !current.is_empty() {
            runs.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        // The run through the start of a closed chain wraps around.
        if closed && keep[0] && !runs.is_empty() {
            let mut first = runs.remove(0);
            current.append(&mut first);
        }
        runs.push(current);
    }
    runs.into_iter().map(|r| (r, false)).collect()
}

/// A transversal self-crossing of the locus on one sheet: a critical point
/// of λ at which λ vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub chart: Chart,
    pub xi: Complex64,
    pub eta: Complex64,
    #[serde(skip)]
    radius: f64,
    #[serde(skip)]
    eta_radius: f64,
}

impl Crossing {
    fn covers(&self, p: &SheetPoint) -> bool {
        p.chart == self.chart && (p.xi - self.xi).norm() < self.radius && (p.eta - self.eta).norm() < self.eta_radius
    }

    pub fn line(&self) -> OrientedLine {
        OrientedLine { chart: self.chart, xi: self.xi, eta: self.eta }
    }
}

/// ∂λ/∂ξ on the sheet through (ξ, η); λ is critical where this vanishes.
pub fn lambda_gradient(c: &SpectralCurve, xi: Complex64, eta: Complex64) -> Option<Complex64> {
    let d = c.partials(xi, eta);
    if d.p_eta.norm() < 1e-12 * (1.0 + d.p_xi.norm()) {
        return None;
    }
    let f1 = -d.p_xi / d.p_eta;
    let f2 = -(d.p_xi_xi + 2.0 * d.p_xi_eta * f1 + d.p_eta_eta * f1 * f1) / d.p_eta;
    let w = 1.0 + xi.norm_sqr();
    let xb = xi.conj();
    let dphi = f2 - 2.0 * xb * f1 / w + 2.0 * xb * xb * eta / (w * w);
    Some((dphi + 2.0 * eta.conj() / (w * w)) / Complex64::new(0.0, 2.0))
}

/// Newton iteration for a critical point of λ on one sheet. Returns the
/// point and the norm of the gradient's Jacobian there.
fn critical_point(c: &SpectralCurve, xi0: Complex64, eta0: Complex64) -> Option<(Complex64, Complex64, f64)> {
    let (mut xi, mut eta) = (xi0, newton_eta(c, xi0, eta0)?);
    let mut jac_norm = 0.0;
    for _ in 0..40 {
        let g = lambda_gradient(c, xi, eta)?;
        let step = 1e-6 * (1.0 + xi.norm());
        let x = xi + step;
        let gx = (lambda_gradient(c, x, newton_eta(c, x, eta)?)? - g) / step;
        let x = xi + Complex64::new(0.0, step);
        let gy = (lambda_gradient(c, x, newton_eta(c, x, eta)?)? - g) / step;
        let j = nalgebra::Matrix2::new(gx.re, gy.re, gx.im, gy.im);
        jac_norm = j.norm();
        let delta = j.lu().solve(&nalgebra::Vector2::new(-g.re, -g.im))?;
        let dxi = Complex64::new(delta[0], delta[1]);
        xi += dxi;
        eta = newton_eta(c, xi, eta)?;
        if dxi.norm() < 1e-13 * (1.0 + xi.norm()) {
            return Some((xi, eta, jac_norm));
        }
        if (xi - xi0).norm() > 1.0 {
            return None;
        }
    }
    Some((xi, eta, jac_norm))
}

/// Finds crossings from places where traced chains come back close to each
/// other on the same sheet (marching squares turns the corner there).
fn find_crossings(grid: &ChartGrid, chains: &[(Vec<SheetPoint>, bool)]) -> Vec<Crossing> {
    let h = grid.h;
    let bucket = |z: Complex64| ((z.re / (2.0 * h)).floor() as i64, (z.im / (2.0 * h)).floor() as i64);
    let mut hash: BTreeMap<(i64, i64), Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, (pts, _)) in chains.iter().enumerate() {
        for (pi, p) in pts.iter().enumerate() {
            hash.entry(bucket(p.xi)).or_default().push((ci, pi));
        }
    }
    let mut seeds: Vec<(Complex64, Complex64)> = Vec::new();
    for (ci, (pts, closed)) in chains.iter().enumerate() {
        for (pi, p) in pts.iter().enumerate() {
            let (bx, by) = bucket(p.xi);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let Some(list) = hash.get(&(bx + dx, by + dy)) else { continue };
                    for &(cj, pj) in list {
                        if (cj, pj) <= (ci, pi) {
                            continue;
                        }
                        if cj == ci {
                            let n = pts.len();
                            let gap = pj - pi;
                            let gap = if *closed { gap.min(n - gap) } else { gap };
                            if gap < 8 {
                                continue;
                            }
                        }
                        let q = chains[cj].0[pj];
                        if (q.xi - p.xi).norm() < 1.5 * h && (q.eta - p.eta).norm() < 0.05 * (1.0 + p.eta.norm()) {
                            seeds.push((0.5 * (p.xi + q.xi), 0.5 * (p.eta + q.eta)));
                        }
                    }
                }
            }
        }
    }
    let mut out: Vec<Crossing> = Vec::new();
    let mut tried: Vec<Complex64> = Vec::new();
    for (xi0, eta0) in seeds {
        if tried.iter().any(|t| (t - xi0).norm() < 2.0 * h) {
            continue;
        }
        tried.push(xi0);
        let Some((xi, eta, jac)) = critical_point(&grid.curve, xi0, eta0) else { continue };
        if (xi - xi0).norm() > 3.0 * h || !grid.owns(xi) {
            continue;
        }
        if grid.branches.iter().any(|b| (b.xi - xi).norm() < grid.exclusion + 2.0 * h) {
            continue;
        }
        if out.iter().any(|x| (x.xi - xi).norm() < 1e-6 && (x.eta - eta).norm() < 1e-6) {
            continue;
        }
        let Ok(lam) = lambda_on_sheet(&grid.curve, xi, eta) else { continue };
        if lam.abs() > 1e-3 * jac * h * h {
            continue;
        }
        let roots = fibre_roots(&grid.curve, xi);
        let own = nearest_index(&roots, eta);
        let sep = roots
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != own)
            .map(|(_, r)| (r - roots[own]).norm())
            .fold(f64::INFINITY, f64::min);
        out.push(Crossing { chart: grid.chart, xi, eta, radius: 3.0 * h, eta_radius: 0.5 * sep.min(1e3) });
    }
    out
}

fn march_cell(
    grid: &ChartGrid,
    code: u8,
    i: usize,
    j: usize,
    segs: &mut Vec<(CrossingKey, CrossingKey)>,
    reqs: &mut Vec<(CrossingKey, CrossingRequest)>,
) {
    let h = grid.h;
    let centre = grid.vertex_xi(i, j) + Complex64::new(0.5 * h, 0.5 * h);
    // Cells just outside the owned region are marched too, so that chains
    // reach across the seam before being clipped.
    let margin_ok = match grid.chart {
        Chart::North => centre.norm() <= grid.owned_radius + 2.0 * h,
        Chart::South => centre.norm() < grid.owned_radius + 2.0 * h,
    };
    if !margin_ok {
        return;
    }
    let idx = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
    let corners = match (grid.vertex(i, j), grid.vertex(i + 1, j), grid.vertex(i + 1, j + 1), grid.vertex(i, j + 1)) {
        (Some(a), Some(b), Some(c), Some(d)) => [a, b, c, d],
        _ => return,
    };
    let m = corners[0].roots.len();
    let mut skip = vec![false; m];
    for b in &grid.branches {
        if (centre - b.xi).norm() < grid.exclusion {
            for (s, r) in corners[0].roots.iter().enumerate() {
                if (r - b.eta).norm() < b.merge_radius {
                    skip[s] = true;
                }
            }
        }
    }
    let perms = match_sheets(&corners, &skip);
    // Edges: (kind, i, j, corner of A, corner of B)
    let edges = [
        (EdgeKind::Horizontal, i, j, 0usize, 1usize),
        (EdgeKind::Vertical, i + 1, j, 1, 2),
        (EdgeKind::Horizontal, i, j + 1, 3, 2),
        (EdgeKind::Vertical, i, j, 0, 3),
    ];
    for perm in perms.iter().flatten() {
        let lam: Vec<f64> = (0..4).map(|c| corners[c].lambda[perm[c]]).collect();
        if lam.iter().any(|l| !l.is_finite()) {
            continue;
        }
        let pos: Vec<bool> = lam.iter().map(|&l| l >= 0.0).collect();
        let mut crossing = [None; 4];
        for (e, &(kind, ei, ej, ca, cb)) in edges.iter().enumerate() {
            if pos[ca] != pos[cb] {
                let key = CrossingKey { chart: code, kind, i: ei, j: ej, root: perm[ca] };
                let (va, vb) = (idx[ca], idx[cb]);
                let req = CrossingRequest {
                    a: grid.vertex_xi(va.0, va.1),
                    b: grid.vertex_xi(vb.0, vb.1),
                    eta_a: corners[ca].roots[perm[ca]],
                    eta_b: corners[cb].roots[perm[cb]],
                    lam_a: lam[ca],
                    lam_b: lam[cb],
                };
                reqs.push((key, req));
                crossing[e] = Some(key);
            }
        }
        let present: Vec<usize> = (0..4).filter(|&e| crossing[e].is_some()).collect();
        match present.len() {
            2 => segs.push((crossing[present[0]].unwrap(), crossing[present[1]].unwrap())),
            4 => {
                let eta_c = (0..4).map(|c| corners[c].roots[perm[c]]).sum::<Complex64>() / 4.0;
                let lam_c = newton_eta(&grid.curve, centre, eta_c)
                    .and_then(|e| {
                        eta_derivative_at(&grid.curve, centre, e, &SpectralConfig::default())
                            .ok()
                            .map(|d| lambda_on_section(&SectionJet { xi: centre, value: e, derivative: d }))
                    });
                let Some(lam_c) = lam_c else { continue };
                let c = crossing.map(|k| k.unwrap());
                if (lam_c >= 0.0) == pos[0] {
                    segs.push((c[0], c[1]));
                    segs.push((c[2], c[3]));
                } else {
                    segs.push((c[3], c[0]));
                    segs.push((c[1], c[2]));
                }
            }
            _ => {}
        }
    }
}

/// Illinois-modified regula falsi for λ along the edge from `a` to `b`.
fn refine_crossing(c: &SpectralCurve, req: &CrossingRequest, cfg: &TraceConfig) -> Option<(Complex64, Complex64)> {
    let spectral_cfg = SpectralConfig::default();
    let eval = |s: f64| -> Option<(f64, Complex64, Complex64)> {
        let xi = req.a + (req.b - req.a) * s;
        let guess = req.eta_a + (req.eta_b - req.eta_a) * s;
        let eta = newton_eta(c, xi, guess)?;
        let d = eta_derivative_at(c, xi, eta, &spectral_cfg).ok()?;
        Some((lambda_on_section(&SectionJet { xi, value: eta, derivative: d }), xi, eta))
    };
    let (mut s0, mut f0) = (0.0, req.lam_a);
    let (mut s1, mut f1) = (1.0, req.lam_b);
    let mut best: Option<(f64, Complex64, Complex64)> = None;
    let mut side = 0i8;
    for _ in 0..200 {
        let s = if f0 == f1 { 0.5 * (s0 + s1) } else { (s0 * f1 - s1 * f0) / (f1 - f0) };
        let s = if s <= s0.min(s1) || s >= s0.max(s1) { 0.5 * (s0 + s1) } else { s };
        let (f, xi, eta) = eval(s)?;
        if best.map_or(true, |b| f.abs() < b.0.abs()) {
            best = Some((f, xi, eta));
        }
        let width = (s1 - s0).abs() * (req.b - req.a).norm();
        if f == 0.0 || (f.abs() < cfg.refine_tol * 1e-3 && width < 1e-12) || width < 1e-15 * (1.0 + xi.norm()) {
            break;
        }
        if (f >= 0.0) == (f1 >= 0.0) {
            s1 = s;
            f1 = f;
            if side == 1 {
                f0 *= 0.5;
            }
            side = 1;
        } else {
            s0 = s;
            f0 = f;
            if side == -1 {
                f1 *= 0.5;
            }
            side = -1;
        }
    }
    best.map(|(_, xi, eta)| (xi, eta))
}

/// Splits a graph of maximum degree two into paths and cycles.
fn walk_chains(adj: &BTreeMap<CrossingKey, Vec<CrossingKey>>) -> Vec<(Vec<CrossingKey>, bool)> {
    let mut visited: BTreeMap<CrossingKey, bool> = adj.keys().map(|k| (*k, false)).collect();
    let mut out = Vec::new();
    let walk = |start: CrossingKey, visited: &mut BTreeMap<CrossingKey, bool>| -> (Vec<CrossingKey>, bool) {
        let mut chain = vec![start];
        visited.insert(start, true);
        let mut prev: Option<CrossingKey> = None;
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().copied().find(|n| Some(*n) != prev && !visited[n]);
            match next {
                Some(nx) => {
                    visited.insert(nx, true);
                    chain.push(nx);
                    prev = Some(cur);
                    cur = nx;
                }
                None => {
                    let closes = chain.len() > 2 && adj[&cur].contains(&start);
                    return (chain, closes);
                }
            }
        }
    };
    // Open chains first, from their endpoints.
    for (k, nbrs) in adj {
        if nbrs.len() != 2 && !visited[k] {
            out.push(walk(*k, &mut visited));
        }
    }
    for k in adj.keys() {
        if !visited[k] {
            out.push(walk(*k, &mut visited));
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
struct End {
    piece: usize,
    /// true for the last point of the piece.
    tail: bool,
    point: SheetPoint,
}

fn to_north(p: &SheetPoint) -> Option<(Complex64, Complex64)> {
    match p.chart {
        Chart::North => Some((p.xi, p.eta)),
        Chart::South => chart_transition(&p.line()).ok().map(|l| (l.xi, l.eta)),
    }
}

fn in_chart(p: &SheetPoint, chart: Chart) -> Option<(Complex64, Complex64)> {
    if p.chart == chart {
        Some((p.xi, p.eta))
    } else {
        chart_transition(&p.line()).ok().map(|l| (l.xi, l.eta))
    }
}

fn angle_mod_2pi(x: f64) -> f64 {
    let t = x.rem_euclid(std::f64::consts::TAU);
    t.min(std::f64::consts::TAU - t)
}

#[derive(Debug, Clone, Copy)]
enum Link {
    Direct,
    Branch(usize),
    Crossing(usize),
}

/// Pairs the free ends that stop short of a special point (a branch point of
/// ramification k, or a crossing with k = 1). A smooth curve through the
/// point leaves along directions differing by kπ in ξ.
fn pair_through(
    ends: &[End],
    partner: &mut [Option<(usize, Link)>],
    centre: (Chart, Complex64, Complex64, f64),
    reach: f64,
    k: usize,
    link: Link,
) {
    let (chart, xi0, eta0, eta_radius) = centre;
    let near: Vec<(usize, f64)> = ends
        .iter()
        .enumerate()
        .filter(|(e, _)| partner[*e].is_none())
        .filter_map(|(e, end)| {
            let (xi, eta) = in_chart(&end.point, chart)?;
            ((xi - xi0).norm() < reach && (eta - eta0).norm() < eta_radius).then(|| (e, (xi - xi0).arg()))
        })
        .collect();
    let mut cands = Vec::new();
    for a in 0..near.len() {
        for b in (a + 1)..near.len() {
            let mismatch = angle_mod_2pi(near[a].1 - near[b].1 - k as f64 * std::f64::consts::PI);
            if mismatch < 0.6 {
                cands.push((mismatch, near[a].0, near[b].0));
            }
        }
    }
    cands.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    for (_, a, b) in cands {
        if partner[a].is_none() && partner[b].is_none() {
            partner[a] = Some((b, link));
            partner[b] = Some((a, link));
        }
    }
}

fn assemble(
    north: &SpectralCurve,
    grids: &[ChartGrid],
    pieces: Vec<Piece>,
    bps: &[BranchPoint],
    crossings: &[Crossing],
    h: f64,
    cfg: &TraceConfig,
) -> Vec<LocusComponent> {
    let mut ends: Vec<End> = Vec::new();
    for (pi, p) in pieces.iter().enumerate() {
        if p.closed || p.points.is_empty() {
            continue;
        }
        let n = p.points.len();
        ends.push(End { piece: pi, tail: false, point: p.points[0] });
        ends.push(End { piece: pi, tail: true, point: p.points[n - 1] });
    }
    let mut partner: Vec<Option<(usize, Link)>> = (0..ends.len()).map(|_| None).collect();

    // Branch points: ends inside the exclusion ring, on merging sheets.
    for (bi, _) in bps.iter().enumerate() {
        // Work in the chart whose domain contains the branch point.
        let owner = grids.iter().find(|g| g.branches.iter().any(|b| b.index == bi && g.owns(b.xi)));
        let Some(grid) = owner else { continue };
        let Some(lb) = grid.branches.iter().find(|b| b.index == bi) else { continue };
        let centre = (grid.chart, lb.xi, lb.eta, lb.merge_radius);
        let reach = cfg.branch_exclusion() + 2.5 * h;
        pair_through(&ends, &mut partner, centre, reach, lb.ramification, Link::Branch(bi));
    }
    for (xi_index, x) in crossings.iter().enumerate() {
        let centre = (x.chart, x.xi, x.eta, x.eta_radius);
        pair_through(&ends, &mut partner, centre, x.radius + 2.5 * h, 1, Link::Crossing(xi_index));
    }

    // Remaining ends: nearest partner on the same sheet, compared in the North chart.
    let reach = 6.0 * h;
    let mut cands = Vec::new();
    for a in 0..ends.len() {
        if partner[a].is_some() {
            continue;
        }
        let Some((xa, ea)) = to_north(&ends[a].point) else { continue };
        let scale_a = if ends[a].point.chart == Chart::South { xa.norm_sqr().max(1.0) } else { 1.0 };
        let roots = fibre_roots(north, xa);
        let own = nearest_index(&roots, ea);
        let sep = roots
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != own)
            .map(|(_, r)| (r - roots[own]).norm())
            .fold(f64::INFINITY, f64::min);
        for b in (a + 1)..ends.len() {
            if partner[b].is_some() || ends[b].piece == ends[a].piece && pieces[ends[a].piece].points.len() < 3 {
                continue;
            }
            let Some((xb, eb)) = to_north(&ends[b].point) else { continue };
            let scale_b = if ends[b].point.chart == Chart::South { xb.norm_sqr().max(1.0) } else { 1.0 };
            let d = (xa - xb).norm();
            if d < reach * scale_a.max(scale_b) && (ea - eb).norm() < 0.25 * sep {
                cands.push((d, a, b));
            }
        }
    }
    cands.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    for (_, a, b) in cands {
        if partner[a].is_none() && partner[b].is_none() {
            partner[a] = Some((b, Link::Direct));
            partner[b] = Some((a, Link::Direct));
        }
    }

    // Walk pieces through the links.
    let mut end_index: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    for (e, end) in ends.iter().enumerate() {
        end_index.insert((end.piece, end.tail), e);
    }
    let mut used = vec![false; pieces.len()];
    let mut raw: Vec<(Vec<SheetPoint>, Vec<usize>, Vec<usize>, bool)> = Vec::new();
    for (pi, p) in pieces.iter().enumerate() {
        if p.closed && !p.points.is_empty() {
            used[pi] = true;
            raw.push((p.points.clone(), Vec::new(), Vec::new(), true));
        }
    }
    let bp_point = |bi: usize| -> SheetPoint {
        let b = &bps[bi];
        SheetPoint { chart: b.chart, xi: b.xi, eta: b.eta, sheet_id: 0 }
    };
    // Start open walks at unpaired ends, then handle remaining cycles.
    let mut starts: Vec<(usize, bool)> = ends
        .iter()
        .enumerate()
        .filter(|(e, _)| partner[*e].is_none())
        .map(|(_, end)| (end.piece, end.tail))
        .collect();
    starts.extend(ends.iter().filter(|end| !end.tail).map(|end| (end.piece, false)));
    for (start_piece, start_tail) in starts {
        if used[start_piece] {
            continue;
        }
        let mut pts: Vec<SheetPoint> = Vec::new();
        let mut visits = Vec::new();
        let mut passes = Vec::new();
        let mut piece = start_piece;
        let mut enter_tail = start_tail;
        let closed;
        loop {
            used[piece] = true;
            let mut seq = pieces[piece].points.clone();
            if enter_tail {
                seq.reverse();
            }
            pts.extend(seq);
            let exit = end_index[&(piece, !enter_tail)];
            match &partner[exit] {
                None => {
                    closed = false;
                    break;
                }
                Some((other, link)) => {
                    match link {
                        Link::Branch(bi) => {
                            pts.push(bp_point(*bi));
                            visits.push(*bi);
                        }
                        Link::Crossing(xi_index) => {
                            let x = &crossings[*xi_index];
                            pts.push(SheetPoint { chart: x.chart, xi: x.xi, eta: x.eta, sheet_id: 0 });
                            passes.push(*xi_index);
                        }
                        Link::Direct => {}
                    }
                    let next = ends[*other];
                    if next.piece == start_piece && next.tail == start_tail {
                        closed = true;
                        break;
                    }
                    if used[next.piece] {
                        closed = false;
                        break;
                    }
                    piece = next.piece;
                    enter_tail = next.tail;
                }
            }
        }
        raw.push((pts, visits, passes, closed));
    }

    let mut comps: Vec<LocusComponent> = raw
        .into_iter()
        .filter(|(pts, _, _, _)| pts.len() >= 2)
        .map(|(pts, visits, passes, closed)| finish_component(north, pts, visits, passes, closed, cfg))
        .collect();
    comps.sort_by(|a, b| component_order_key(a).partial_cmp(&component_order_key(b)).unwrap());
    comps
}

fn point_key(p: &SheetPoint) -> (u8, f64, f64, f64, f64) {
    (chart_code(p.chart), p.xi.re, p.xi.im, p.eta.re, p.eta.im)
}

fn component_order_key(c: &LocusComponent) -> (u8, f64, f64, f64, f64) {
    c.points.first().map(point_key).unwrap_or((0, 0.0, 0.0, 0.0, 0.0))
}

fn finish_component(
    north: &SpectralCurve,
    pts: Vec<SheetPoint>,
    mut visits: Vec<usize>,
    passes: Vec<usize>,
    closed: bool,
    cfg: &TraceConfig,
) -> LocusComponent {
    let mut points: Vec<SheetPoint> = Vec::with_capacity(pts.len());
    for p in pts {
        if let Some(last) = points.last() {
            if chordal(last, &p) < cfg.dedupe_tol {
                continue;
            }
        }
        points.push(p);
    }
    if closed && points.len() > 2 && chordal(&points[0], points.last().unwrap()) < cfg.dedupe_tol {
        points.pop();
    }
    if closed && !points.is_empty() {
        let start = (0..points.len())
            .min_by(|&a, &b| point_key(&points[a]).partial_cmp(&point_key(&points[b])).unwrap())
            .unwrap();
        points.rotate_left(start);
        let n = points.len();
        if n > 2 && point_key(&points[n - 1]) < point_key(&points[1]) {
            points[1..].reverse();
        }
    } else if points.len() > 1 && point_key(points.last().unwrap()) < point_key(&points[0]) {
        points.reverse();
    }
    for p in points.iter_mut() {
        let curve = north.in_chart(p.chart);
        p.sheet_id = sheet_label(&fibre_roots(&curve, p.xi), p.eta);
    }
    let projected = points
        .iter()
        .map(|p| match p.chart {
            Chart::North => p.xi,
            Chart::South => {
                if p.xi.norm() == 0.0 {
                    Complex64::new(f64::INFINITY, 0.0)
                } else {
                    p.xi.inv()
                }
            }
        })
        .collect();
    visits.sort();
    visits.dedup();
    LocusComponent {
        points,
        closed,
        passes_branch: visits,
        passes_crossing: passes,
        projected,
        breakdown: (!closed).then(|| "chain end could not be matched (continuation breakdown)".to_string()),
    }
}

fn chordal(a: &SheetPoint, b: &SheetPoint) -> f64 {
    match (to_north(a), to_north(b)) {
        (Some((xa, _)), Some((xb, _))) => chordal_distance(xa, xb),
        _ => {
            let (da, db) = (a.line().direction(), b.line().direction());
            da.distance(&db)
        }
    }
}

/// Points where components meet on the curve: shared branch points and
/// crossings (a component crossing itself gives a pair (i, i)).
fn find_junctions(comps: &[LocusComponent], bps: &[BranchPoint], crossings: &[Crossing]) -> Vec<Junction> {
    let mut out = Vec::new();
    for a in 0..comps.len() {
        for b in (a + 1)..comps.len() {
            for &bi in &comps[a].passes_branch {
                if comps[b].passes_branch.contains(&bi) {
                    let direction = bps[bi].line().direction().to_array();
                    out.push(Junction { components: (a, b), direction, branch_point: Some(bi) });
                }
            }
        }
    }
    for (xi_index, x) in crossings.iter().enumerate() {
        let mut visitors: Vec<usize> = Vec::new();
        for (ci, c) in comps.iter().enumerate() {
            for &v in &c.passes_crossing {
                if v == xi_index {
                    visitors.push(ci);
                }
            }
        }
        let direction = x.line().direction().to_array();
        for i in 0..visitors.len() {
            for j in (i + 1)..visitors.len() {
                out.push(Junction { components: (visitors[i], visitors[j]), direction, branch_point: None });
            }
        }
    }
    out
}

/// Hausdorff-style one-sided distance from `p` to a component's polyline on
/// the sphere of directions.
pub fn distance_to_component(comp: &LocusComponent, p: [f64; 3]) -> f64 {
    let d = comp.directions();
    let n = d.len();
    if n == 0 {
        return f64::INFINITY;
    }
    let segs = if comp.closed { n } else { n - 1 };
    let mut best = f64::INFINITY;
    for s in 0..segs.max(1) {
        let a = d[s];
        let b = d[(s + 1) % n];
        best = best.min(point_segment_distance(p, a, b));
    }
    best
}

pub(crate) fn point_segment_distance(p: [f64; 3], a: [f64; 3], b: [f64; 3]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let ap = [p[0] - a[0], p[1] - a[1], p[2] - a[2]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2];
    let t = if len2 == 0.0 { 0.0 } else { ((ap[0] * ab[0] + ap[1] * ab[1] + ap[2] * ab[2]) / len2).clamp(0.0, 1.0) };
    let q = [a[0] + t * ab[0] - p[0], a[1] + t * ab[1] - p[1], a[2] + t * ab[2] - p[2]];
    (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt()
}

/// The oriented line of a branch point in the North chart when possible.
pub fn branch_line(bp: &BranchPoint) -> OrientedLine {
    bp.line().in_chart(Chart::North).unwrap_or_else(|_| bp.line())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::point_to_section;
    use crate::correspondence::EuclideanPoint;

    #[test]
    fn config_floor() {
        let cfg = TraceConfig { grid_n: 8, ..TraceConfig::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn sphere_of_lines_through_a_point_is_rejected() {
        let s = point_to_section(&EuclideanPoint::new(0.3, 1.0, -0.5)).coefficients();
        let c = SpectralCurve::new(1, vec![s.iter().map(|&a| -a).collect()]).unwrap();
        let cfg = TraceConfig { grid_n: 32, ..TraceConfig::default() };
        assert_eq!(trace_locus(&c, &cfg).unwrap_err(), Error::TotallyLagrangian);
    }

    #[test]
    fn series_intercept_recovers_constant() {
        let s: Vec<(f64, f64)> = (0..6).map(|i| {
            let t = 0.1 * i as f64;
            (t, 2.0 - t * t + 3.0 * t * t * t)
        }).collect();
        assert!((series_intercept(&s, &[2, 3]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn fibre_density_matches_lambda_over_derivative_squared() {
        let (c, _) = crate::monopoles::charge2(0.8).unwrap();
        let xi = Complex64::new(0.1, 0.3);
        for eta in fibre_roots(&c, xi) {
            let d = eta_derivative_at(&c, xi, eta, &SpectralConfig::default()).unwrap();
            let lam = lambda_on_sheet(&c, xi, eta).unwrap();
            assert!((lambda_in_fibre_coordinate(&c, xi, eta) - lam / d.norm_sqr()).abs() < 1e-12);
        }
    }
}

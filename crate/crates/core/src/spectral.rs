//! Spectral curves P(ξ, η) = ηᵐ + Σ αⱼ(ξ) ηᵐ⁻ʲ in T P¹: reality, fibres,
//! implicit derivatives, branch points and sheet continuation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correspondence::{Chart, OrientedLine};
use crate::error::{Error, Result};
use crate::poly::{cluster_by, Poly};

/// Tunable thresholds for the fibre and branch-point routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    /// Roots of a fibre closer than this are reported as one multiple root.
    pub dedupe_tol: f64,
    /// Minimal distance a continuation path keeps from branch points.
    pub branch_margin: f64,
    /// |P_η| below this (relative to the curve scale) counts as a branch point.
    pub derivative_tol: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self { dedupe_tol: 1e-6, branch_margin: 1e-4, derivative_tol: 1e-10 }
    }
}

impl SpectralConfig {
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dedupe_tol: self.dedupe_tol * factor,
            branch_margin: self.branch_margin * factor,
            derivative_tol: self.derivative_tol * factor,
        }
    }
}

/// A curve ηᵐ + α₁(ξ)ηᵐ⁻¹ + … + αₘ(ξ) = 0 with deg αⱼ ≤ 2j, written in one
/// of the two charts of T P¹.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCurve {
    m: usize,
    /// `coeffs[j - 1][i]` is the coefficient of ξⁱ in αⱼ.
    coeffs: Vec<Vec<Complex64>>,
    chart: Chart,
}

/// Partial derivatives of P up to second order at one point.
#[derive(Debug, Clone, Copy)]
pub struct Partials {
    pub p: Complex64,
    pub p_xi: Complex64,
    pub p_eta: Complex64,
    pub p_xi_xi: Complex64,
    pub p_xi_eta: Complex64,
    pub p_eta_eta: Complex64,
}

impl SpectralCurve {
    pub fn new(m: usize, coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidCurve("charge m must be positive".into()));
        }
        if coeffs.len() != m {
            return Err(Error::InvalidCurve(format!(
                "expected {m} coefficient polynomials, got {}",
                coeffs.len()
            )));
        }
        for (idx, row) in coeffs.iter().enumerate() {
            let j = idx + 1;
            if row.len() != 2 * j + 1 {
                return Err(Error::InvalidCurve(format!(
                    "alpha[{idx}] must have {} coefficients (degree <= {}), got {}",
                    2 * j + 1,
                    2 * j,
                    row.len()
                )));
            }
            if let Some(i) = row.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::InvalidCurve(format!("alpha[{idx}][{i}] is not finite")));
            }
        }
        Ok(Self { m, coeffs, chart: Chart::North })
    }

    /// Cyclic curve ηᵐ = Q(ξ); `q` is padded to degree 2m.
    pub fn cyclic(m: usize, q: &[Complex64]) -> Result<Self> {
        if q.len() > 2 * m + 1 {
            return Err(Error::InvalidCurve(format!("Q must have degree <= {}", 2 * m)));
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut coeffs: Vec<Vec<Complex64>> = (1..=m).map(|j| vec![zero; 2 * j + 1]).collect();
        for (i, &a) in q.iter().enumerate() {
            coeffs[m - 1][i] = -a;
        }
        Self::new(m, coeffs)
    }

    pub fn charge(&self) -> usize {
        self.m
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn coeffs(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    /// αⱼ(ξ) for j = 1..=m.
    pub fn alpha(&self, j: usize, xi: Complex64) -> Complex64 {
        Poly::new(self.coeffs[j - 1].clone()).eval(xi)
    }

    /// The same curve written in the other chart: α'ⱼ(ξ') = (−1)ʲ ξ'²ʲ αⱼ(1/ξ').
    pub fn in_other_chart(&self) -> SpectralCurve {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, row)| {
                let j = idx + 1;
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                (0..=2 * j).map(|l| row[2 * j - l] * sign).collect()
            })
            .collect();
        SpectralCurve { m: self.m, coeffs, chart: self.chart.other() }
    }

    pub fn in_chart(&self, chart: Chart) -> SpectralCurve {
        if chart == self.chart {
            self.clone()
        } else {
            self.in_other_chart()
        }
    }

    /// If αⱼ ≡ 0 for j < m, returns Q with ηᵐ = Q(ξ).
    pub fn cyclic_q(&self) -> Option<Poly> {
        let lower_zero = self.coeffs[..self.m - 1].iter().all(|row| row.iter().all(|c| c.norm() == 0.0));
        lower_zero.then(|| Poly::new(self.coeffs[self.m - 1].iter().map(|&c| -c).collect()))
    }

    /// P(ξ, ·) as a polynomial in η (ascending coefficients).
    pub fn eta_poly(&self, xi: Complex64) -> Poly {
        let mut c = vec![Complex64::new(0.0, 0.0); self.m + 1];
        c[self.m] = Complex64::new(1.0, 0.0);
        for j in 1..=self.m {
            c[self.m - j] = self.alpha(j, xi);
        }
        Poly::new(c)
    }

    pub fn eval(&self, xi: Complex64, eta: Complex64) -> Complex64 {
        self.eta_poly(xi).eval(eta)
    }

    pub fn partials(&self, xi: Complex64, eta: Complex64) -> Partials {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let mut out = Partials {
            p: zero,
            p_xi: zero,
            p_eta: zero,
            p_xi_xi: zero,
            p_xi_eta: zero,
            p_eta_eta: zero,
        };
        // Coefficient of η^k as a polynomial in ξ, with its first two ξ-derivatives.
        for k in 0..=self.m {
            let (a, da, dda) = if k == self.m {
                (one, zero, zero)
            } else {
                let row = Poly::new(self.coeffs[self.m - k - 1].clone());
                let d = row.derivative();
                (row.eval(xi), d.eval(xi), d.derivative().eval(xi))
            };
            let kf = k as f64;
            let e_k = pow(eta, k);
            let e_k1 = if k >= 1 { pow(eta, k - 1) } else { zero };
            let e_k2 = if k >= 2 { pow(eta, k - 2) } else { zero };
            out.p += a * e_k;
            out.p_xi += da * e_k;
            out.p_xi_xi += dda * e_k;
            out.p_eta += a * e_k1 * kf;
            out.p_xi_eta += da * e_k1 * kf;
            out.p_eta_eta += a * e_k2 * kf * (kf - 1.0);
        }
        out
    }

    /// 1 + the largest |monomial| of P at (ξ, η); the natural residual scale.
    pub fn scale(&self, xi: Complex64, eta: Complex64) -> f64 {
        let mut best = eta.norm().powi(self.m as i32);
        let xr = xi.norm();
        for (idx, row) in self.coeffs.iter().enumerate() {
            let j = idx + 1;
            let er = eta.norm().powi((self.m - j) as i32);
            for (i, c) in row.iter().enumerate() {
                best = best.max(c.norm() * xr.powi(i as i32) * er);
            }
        }
        1.0 + best
    }

    pub fn residual(&self, xi: Complex64, eta: Complex64) -> f64 {
        self.eval(xi, eta).norm() / self.scale(xi, eta)
    }
}

fn pow(z: Complex64, k: usize) -> Complex64 {
    (0..k).fold(Complex64::new(1.0, 0.0), |acc, _| acc * z)
}

/// A point of the curve together with a sheet label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SheetPoint {
    pub chart: Chart,
    pub xi: Complex64,
    pub eta: Complex64,
    pub sheet_id: usize,
}

impl SheetPoint {
    pub fn line(&self) -> OrientedLine {
        OrientedLine { chart: self.chart, xi: self.xi, eta: self.eta }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealityReport {
    pub real: bool,
    pub max_residual: f64,
}

/// Checks a[j][i] = (−1)^{j+i} conj(a[j][2j−i]), the coefficient form of
/// αⱼ(ξ) = (−1)ʲ ξ²ʲ conj(αⱼ(−1/ξ̄)).
pub fn reality_check(c: &SpectralCurve) -> RealityReport {
    let mut worst: f64 = 0.0;
    for (idx, row) in c.coeffs.iter().enumerate() {
        let j = idx + 1;
        for i in 0..=2 * j {
            let sign = if (j + i) % 2 == 0 { 1.0 } else { -1.0 };
            let d = (row[i] - row[2 * j - i].conj() * sign).norm();
            worst = worst.max(d / (1.0 + row[i].norm()));
        }
    }
    RealityReport { real: worst <= 1e-12, max_residual: worst }
}

/// The fibre of the curve over one ξ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fibre {
    pub xi: Complex64,
    pub roots: Vec<Complex64>,
    /// Size of the cluster each root belongs to.
    pub multiplicity: Vec<usize>,
}

impl Fibre {
    pub fn is_simple(&self) -> bool {
        self.multiplicity.iter().all(|&k| k == 1)
    }

    /// Index of the root nearest to `eta`.
    pub fn nearest(&self, eta: Complex64) -> usize {
        nearest_index(&self.roots, eta)
    }
}

pub(crate) fn nearest_index(roots: &[Complex64], eta: Complex64) -> usize {
    roots
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - eta).norm().total_cmp(&(b.1 - eta).norm()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

pub fn eta_roots(c: &SpectralCurve, xi: Complex64) -> Fibre {
    eta_roots_with(c, xi, &SpectralConfig::default())
}

pub fn eta_roots_with(c: &SpectralCurve, xi: Complex64, cfg: &SpectralConfig) -> Fibre {
    let roots = fibre_roots(c, xi);
    let ids = cluster_by(&roots, cfg.dedupe_tol, |a, b| (a - b).norm());
    let multiplicity = ids.iter().map(|id| ids.iter().filter(|j| *j == id).count()).collect();
    Fibre { xi, roots, multiplicity }
}

/// Roots of P(ξ, ·) with no clustering.
pub(crate) fn fibre_roots(c: &SpectralCurve, xi: Complex64) -> Vec<Complex64> {
    let p = c.eta_poly(xi);
    if c.m == 1 {
        return vec![-p.coeffs()[0]];
    }
    // Monic in η, so the degree never drops.
    let mut roots = p.roots();
    while roots.len() < c.m {
        roots.push(Complex64::new(0.0, 0.0));
    }
    roots
}

/// Sheet label of `eta` in a fibre: its rank when the fibre roots are
/// sorted by (Re, Im).
pub fn sheet_label(roots: &[Complex64], eta: Complex64) -> usize {
    let idx = nearest_index(roots, eta);
    let target = roots[idx];
    roots
        .iter()
        .filter(|r| (r.re, r.im) < (target.re, target.im))
        .count()
}

/// ∂η of the local section through `p`, by implicit differentiation.
pub fn eta_derivative(c: &SpectralCurve, p: &SheetPoint) -> Result<Complex64> {
    eta_derivative_at(c, p.xi, p.eta, &SpectralConfig::default())
}

pub fn eta_derivative_at(
    c: &SpectralCurve,
    xi: Complex64,
    eta: Complex64,
    cfg: &SpectralConfig,
) -> Result<Complex64> {
    let d = c.partials(xi, eta);
    let scale = c.scale(xi, eta);
    if d.p_eta.norm() < cfg.derivative_tol * scale {
        return Err(Error::BranchPoint { residual: d.p_eta.norm() });
    }
    Ok(-d.p_xi / d.p_eta)
}

/// A branch point of the projection Σ → P¹.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchPoint {
    pub chart: Chart,
    pub xi: Complex64,
    /// The common value of the merging roots.
    pub eta: Complex64,
    /// Indices (into `eta_roots(c, xi).roots`) of the merging sheets.
    pub sheets: Vec<usize>,
}

impl BranchPoint {
    /// Number of sheets that meet at the point.
    pub fn ramification(&self) -> usize {
        self.sheets.len()
    }

    pub fn line(&self) -> OrientedLine {
        OrientedLine { chart: self.chart, xi: self.xi, eta: self.eta }
    }
}

/// The discriminant of P in η as a polynomial in ξ, obtained by sampling
/// the resultant Res_η(P, P_η) = Π P_η(ξ, ηᵢ) at 4m²+1 points of the unit
/// circle and interpolating with a discrete Fourier transform.
pub fn discriminant(c: &SpectralCurve) -> Result<Poly> {
    let m = c.m;
    let n = 4 * m * m + 1;
    let degree = 2 * m * (m - 1);
    let mut samples = Vec::with_capacity(n);
    let mut magnitude: f64 = 0.0;
    for k in 0..n {
        let xi = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
        let roots = fibre_roots(c, xi);
        let res: Complex64 = roots.iter().map(|&e| c.partials(xi, e).p_eta).product();
        let size: f64 = roots.iter().map(|e| (1.0 + e.norm()).powi(m as i32 - 1)).product();
        magnitude = magnitude.max(size);
        samples.push(res);
    }
    let peak = samples.iter().map(|s| s.norm()).fold(0.0, f64::max);
    if peak <= 1e-10 * magnitude {
        return Err(Error::NonReducedCurve);
    }
    let coeffs = (0..=degree)
        .map(|l| {
            samples
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    let angle = -std::f64::consts::TAU * (k * l % n) as f64 / n as f64;
                    s * Complex64::from_polar(1.0, angle)
                })
                .sum::<Complex64>()
                / n as f64
        })
        .collect();
    Ok(Poly::new(coeffs))
}

/// All branch points: finite ones in the curve's own chart, plus those
/// sitting over ξ = ∞ expressed in the other chart.
pub fn branch_points(c: &SpectralCurve) -> Result<Vec<BranchPoint>> {
    let mut out = finite_branch_points(c)?;
    let deficit = at_infinity_count(c)?;
    if deficit > 0 {
        let other = c.in_other_chart();
        for bp in finite_branch_points(&other)? {
            if bp.xi.norm() < 1e-7 {
                out.push(bp);
            }
        }
    }
    Ok(out)
}

/// Number of discriminant roots (with multiplicity) sitting at ξ = ∞.
fn at_infinity_count(c: &SpectralCurve) -> Result<usize> {
    let full = 2 * c.m * (c.m - 1);
    if let Some(q) = c.cyclic_q() {
        let deg = q.effective_degree(1e-13).unwrap_or(0);
        return Ok(2 * c.m - deg);
    }
    let disc = discriminant(c)?;
    Ok(full - disc.effective_degree(1e-11).unwrap_or(0))
}

/// Branch points with finite ξ in the curve's chart.
pub fn finite_branch_points(c: &SpectralCurve) -> Result<Vec<BranchPoint>> {
    if c.m == 1 {
        return Ok(Vec::new());
    }
    let candidates: Vec<Complex64> = if let Some(q) = c.cyclic_q() {
        if q.effective_degree(1e-13).is_none() {
            return Err(Error::NonReducedCurve);
        }
        let roots = q.roots();
        let ids = cluster_by(&roots, 1e-5, |a, b| (a - b).norm());
        cluster_means(&roots, &ids)
            .into_iter()
            .map(|z| newton_polish_poly(&q, z))
            .collect()
    } else {
        let disc = discriminant(c)?.trimmed(1e-11);
        let roots = disc.roots();
        let ids = cluster_by(&roots, 1e-4, |a, b| (a - b).norm());
        cluster_means(&roots, &ids)
    };
    let mut out = Vec::new();
    for xi0 in candidates {
        out.push(describe_branch_point(c, xi0));
    }
    out.sort_by(|a, b| (a.xi.re, a.xi.im).partial_cmp(&(b.xi.re, b.xi.im)).unwrap());
    Ok(out)
}

fn cluster_means(values: &[Complex64], ids: &[usize]) -> Vec<Complex64> {
    let count = ids.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    (0..count)
        .map(|id| {
            let members: Vec<_> = values.iter().zip(ids).filter(|(_, i)| **i == id).map(|(v, _)| *v).collect();
            members.iter().sum::<Complex64>() / members.len() as f64
        })
        .collect()
}

fn newton_polish_poly(p: &Poly, mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        let (v, dv) = p.eval_with_derivative(z);
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        z -= step;
        if step.norm() < 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Finds the merging sheets over `xi0` and, for simple (two-sheet) branch
/// points, polishes (ξ, η) by Newton on {P = 0, P_η = 0}.
fn describe_branch_point(c: &SpectralCurve, xi0: Complex64) -> BranchPoint {
    let roots = fibre_roots(c, xi0);
    let (i, j) = closest_pair(&roots);
    let gap = (roots[i] - roots[j]).norm();
    let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let merge_tol = (10.0 * gap).max(1e-3 * scale);
    let seed = (roots[i] + roots[j]) * 0.5;
    let mut sheets: Vec<usize> =
        (0..roots.len()).filter(|&k| (roots[k] - seed).norm() < merge_tol).collect();
    if sheets.len() < 2 {
        sheets = vec![i.min(j), i.max(j)];
    }
    let mut xi = xi0;
    let mut eta = sheets.iter().map(|&k| roots[k]).sum::<Complex64>() / sheets.len() as f64;
    if sheets.len() == 2 && c.cyclic_q().is_none() {
        for _ in 0..20 {
            let d = c.partials(xi, eta);
            // Jacobian of (P, P_η) in (ξ, η).
            let det = d.p_xi * d.p_eta_eta - d.p_eta * d.p_xi_eta;
            if det.norm() == 0.0 {
                break;
            }
            let dxi = (d.p * d.p_eta_eta - d.p_eta * d.p_eta) / det;
            let deta = (d.p_xi * d.p_eta - d.p_xi_eta * d.p) / det;
            xi -= dxi;
            eta -= deta;
            if dxi.norm() + deta.norm() < 1e-15 * (1.0 + xi.norm() + eta.norm()) {
                break;
            }
        }
    }
    let roots = fibre_roots(c, xi);
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by(|&a, &b| (roots[a] - eta).norm().total_cmp(&(roots[b] - eta).norm()));
    let k = sheets.len();
    let mut merged: Vec<usize> = order[..k].to_vec();
    merged.sort();
    BranchPoint { chart: c.chart, xi, eta, sheets: merged }
}

fn closest_pair(roots: &[Complex64]) -> (usize, usize) {
    let mut best = (0, 1, f64::INFINITY);
    for a in 0..roots.len() {
        for b in (a + 1)..roots.len() {
            let d = (roots[a] - roots[b]).norm();
            if d < best.2 {
                best = (a, b, d);
            }
        }
    }
    (best.0, best.1)
}

/// One Newton solve of P(ξ, ·) = 0 started from `eta`.
pub(crate) fn newton_eta(c: &SpectralCurve, xi: Complex64, mut eta: Complex64) -> Option<Complex64> {
    let p = c.eta_poly(xi);
    for _ in 0..40 {
        let (v, dv) = p.eval_with_derivative(eta);
        if dv.norm() == 0.0 {
            return None;
        }
        let step = v / dv;
        eta -= step;
        if !eta.re.is_finite() || !eta.im.is_finite() {
            return None;
        }
        if step.norm() <= 1e-14 * (1.0 + eta.norm()) {
            return Some(eta);
        }
    }
    (p.eval(eta).norm() <= 1e-10 * c.scale(xi, eta)).then_some(eta)
}

/// Follows the sheet through `start` along the polyline `path`
/// (which must begin at `start.xi`) by predictor–corrector steps.
pub fn continue_sheet(c: &SpectralCurve, path: &[Complex64], start: SheetPoint) -> Result<SheetPoint> {
    continue_sheet_with(c, path, start, &SpectralConfig::default())
}

pub fn continue_sheet_with(
    c: &SpectralCurve,
    path: &[Complex64],
    start: SheetPoint,
    cfg: &SpectralConfig,
) -> Result<SheetPoint> {
    let mut xi = start.xi;
    let mut eta = start.eta;
    let breakdown = |z: Complex64| Error::ContinuationBreakdown { xi_re: z.re, xi_im: z.im };
    for target in path.iter().skip(1).copied() {
        let mut t = 0.0;
        let from = xi;
        let mut h: f64 = 0.125;
        while t < 1.0 {
            let step = h.min(1.0 - t);
            let next_xi = from + (target - from) * (t + step);
            let d = eta_derivative_at(c, xi, eta, cfg).map_err(|_| breakdown(xi))?;
            let predicted = eta + d * (next_xi - xi);
            let accepted = newton_eta(c, next_xi, predicted).and_then(|corrected| {
                let roots = fibre_roots(c, next_xi);
                let own = nearest_index(&roots, corrected);
                let sep = roots
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != own)
                    .map(|(_, r)| (r - corrected).norm())
                    .fold(f64::INFINITY, f64::min);
                let moved = (corrected - predicted).norm();
                (nearest_index(&roots, predicted) == own && moved < 0.25 * sep).then_some(corrected)
            });
            match accepted {
                Some(corrected) => {
                    xi = next_xi;
                    eta = corrected;
                    t += step;
                    h = (h * 2.0).min(0.25);
                }
                None => {
                    h *= 0.5;
                    if h < 1e-12 {
                        return Err(breakdown(next_xi));
                    }
                }
            }
        }
        xi = target;
    }
    Ok(SheetPoint { chart: start.chart, xi, eta, sheet_id: start.sheet_id })
}

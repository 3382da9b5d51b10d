//! Ruled surfaces in E³ swept by one-parameter families of oriented lines:
//! Gauss curvature, dense sampling along traced curves, and edges of
//! regression.

use nalgebra::{DMatrix, Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::correspondence::{chart_transition, Chart, EuclideanPoint, OrientedLine};
use crate::error::{Error, Result};
use crate::kahler::{connection, rho_on_section, RhoValue, SectionJet};
use crate::lagrangian::LocusComponent;
use crate::spectral::{eta_derivative_at, SheetPoint, SpectralConfig, SpectralCurve};

/// An oriented line together with the velocity of a curve through it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveJet {
    pub chart: Chart,
    pub xi: Complex64,
    pub eta: Complex64,
    pub dot_xi: Complex64,
    pub dot_eta: Complex64,
}

impl CurveJet {
    pub fn north(xi: Complex64, eta: Complex64, dot_xi: Complex64, dot_eta: Complex64) -> Self {
        Self { chart: Chart::North, xi, eta, dot_xi, dot_eta }
    }

    pub fn line(&self) -> OrientedLine {
        OrientedLine { chart: self.chart, xi: self.xi, eta: self.eta }
    }

    /// The null defect of the velocity (see [`crate::kahler::metric_along_curve`]).
    pub fn null_defect(&self) -> f64 {
        crate::kahler::metric_along_curve(self.xi, self.eta, self.dot_xi, self.dot_eta)
    }
}

/// Gauss curvature of the ruled surface at parameter `r` along the ruling:
///
/// ```text
/// K = −w² [Im(w η̇ ξ̄̇ + 2ξη̄ ξ̇ξ̄̇)]² / |w η̇ − 2ξ̄η ξ̇ + w r ξ̇|⁴,   w = 1 + ξξ̄
/// ```
pub fn gauss_curvature_general(j: &CurveJet, r: f64) -> Result<f64> {
    let w = 1.0 + j.xi.norm_sqr();
    let num = j.null_defect();
    let den = (w * j.dot_eta - 2.0 * j.xi.conj() * j.eta * j.dot_xi + w * r * j.dot_xi).norm();
    if den <= 1e-12 {
        return Err(Error::SingularRuling { denominator: den });
    }
    Ok(-w * w * num * num / den.powi(4))
}

/// Curvature of the ruling through a holomorphic curve, in terms of ρ = ψ + iλ.
pub fn gauss_curvature_holomorphic(psi: f64, lambda: f64, r: f64) -> Result<f64> {
    let den = lambda * lambda + (r + psi) * (r + psi);
    if den == 0.0 {
        return Err(Error::CurvatureSingularity);
    }
    Ok(-lambda * lambda / (den * den))
}

/// A sampled ruled surface: row `i` is the ruling through `lines[i]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuledSurfaceSample {
    pub s_values: Vec<f64>,
    pub lines: Vec<CurveJet>,
    pub r_range: (f64, f64),
    pub r_values: Vec<f64>,
    pub grid: Vec<Vec<EuclideanPoint>>,
    /// Whether the generating curve is closed (rows wrap around).
    pub closed: bool,
}

impl RuledSurfaceSample {
    /// K at every grid vertex; `None` where the ruling is singular.
    pub fn curvature(&self) -> Vec<Vec<Option<f64>>> {
        self.lines
            .par_iter()
            .map(|l| self.r_values.iter().map(|&r| gauss_curvature_general(l, r).ok()).collect())
            .collect()
    }

    /// max |K| over the mesh, ignoring vertices within `band` of the
    /// singular parameter on each ruling.
    pub fn max_abs_curvature(&self, band: f64) -> f64 {
        self.lines
            .par_iter()
            .map(|l| {
                let singular = singular_parameter(l);
                self.r_values
                    .iter()
                    .filter(|&&r| singular.map_or(true, |r0| (r - r0).abs() > band))
                    .filter_map(|&r| gauss_curvature_general(l, r).ok())
                    .fold(0.0_f64, |m, k| m.max(k.abs()))
            })
            .reduce(|| 0.0, f64::max)
    }

    pub fn points(&self) -> impl Iterator<Item = &EuclideanPoint> {
        self.grid.iter().flatten()
    }
}

/// The r at which the ruling's curvature denominator is smallest, when the
/// minimum is attained on the real line.
fn singular_parameter(j: &CurveJet) -> Option<f64> {
    let w = 1.0 + j.xi.norm_sqr();
    let a = w * j.dot_xi;
    if a.norm() == 0.0 {
        return None;
    }
    // minimise |b + r a| with b = wη̇ − 2ξ̄ηξ̇
    let b = w * j.dot_eta - 2.0 * j.xi.conj() * j.eta * j.dot_xi;
    Some(-(b * a.conj()).re / a.norm_sqr())
}

/// Tangent jets along a traced component. The velocity is tangent to the
/// curve Σ, (ξ̇, η̇) = c (P_η, −P_ξ), with the complex factor c fitted to the
/// centred difference of the polyline.
pub fn component_jets(c: &SpectralCurve, comp: &LocusComponent) -> Vec<CurveJet> {
    let n = comp.points.len();
    (0..n)
        .map(|i| {
            let p = comp.points[i];
            let curve = c.in_chart(p.chart);
            let (prev, next) = neighbours(comp, i);
            let local = |q: &SheetPoint| -> (Complex64, Complex64) {
                if q.chart == p.chart {
                    (q.xi, q.eta)
                } else {
                    chart_transition(&q.line()).map(|l| (l.xi, l.eta)).unwrap_or((p.xi, p.eta))
                }
            };
            let (xa, ea) = local(&comp.points[prev]);
            let (xb, eb) = local(&comp.points[next]);
            let span = (next as f64 - prev as f64).abs().max(1.0);
            let t = ((xb - xa) / span, (eb - ea) / span);
            let d = curve.partials(p.xi, p.eta);
            let v = (d.p_eta, -d.p_xi);
            let vv = v.0.norm_sqr() + v.1.norm_sqr();
            let coef = if vv > 0.0 { (v.0.conj() * t.0 + v.1.conj() * t.1) / vv } else { Complex64::new(0.0, 0.0) };
            CurveJet { chart: p.chart, xi: p.xi, eta: p.eta, dot_xi: coef * v.0, dot_eta: coef * v.1 }
        })
        .collect()
}

fn neighbours(comp: &LocusComponent, i: usize) -> (usize, usize) {
    let n = comp.points.len();
    if n < 2 {
        return (i, i);
    }
    if comp.closed {
        ((i + n - 1) % n, (i + 1) % n)
    } else if i == 0 {
        (0, 1)
    } else if i == n - 1 {
        (n - 2, n - 1)
    } else {
        (i - 1, i + 1)
    }
}

/// Samples the ruled surface of a traced component on `n_r` evenly spaced
/// values in `r_range`.
pub fn build_ruled_surface(c: &SpectralCurve, comp: &LocusComponent, r_range: (f64, f64), n_r: usize) -> RuledSurfaceSample {
    let lines = component_jets(c, comp);
    ruled_surface_from_jets(lines, r_range, n_r, comp.closed)
}

pub fn ruled_surface_from_jets(lines: Vec<CurveJet>, r_range: (f64, f64), n_r: usize, closed: bool) -> RuledSurfaceSample {
    let r_values: Vec<f64> = if n_r < 2 {
        vec![r_range.0]
    } else {
        (0..n_r).map(|j| r_range.0 + (r_range.1 - r_range.0) * j as f64 / (n_r - 1) as f64).collect()
    };
    let grid = lines.par_iter().map(|l| r_values.iter().map(|&r| l.line().point_at(r)).collect()).collect();
    let s_values = (0..lines.len()).map(|i| i as f64).collect();
    RuledSurfaceSample { s_values, lines, r_range, r_values, grid, closed }
}

pub const DEFAULT_R_RANGE: (f64, f64) = (-5.0, 5.0);
pub const DEFAULT_N_R: usize = 33;

/// The edge of regression traced out by the singular points of the rulings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionEdge {
    pub points: Vec<EuclideanPoint>,
    pub r0_values: Vec<f64>,
    /// Indices of the component points that produced each edge point;
    /// branch points (where ∂η is infinite) are skipped.
    pub source: Vec<usize>,
    pub closed: bool,
}

impl RegressionEdge {
    /// Distance from `p` to the edge polyline, using only segments no longer
    /// than `max_segment` (longer ones straddle a point at infinity).
    pub fn distance(&self, p: &EuclideanPoint, max_segment: f64) -> f64 {
        let mut best = self.points.iter().map(|q| q.distance(p)).fold(f64::INFINITY, f64::min);
        let n = self.points.len();
        let segs = if self.closed { n } else { n.saturating_sub(1) };
        for i in 0..segs {
            let (a, b) = (self.points[i], self.points[(i + 1) % n]);
            if a.distance(&b) <= max_segment {
                best = best.min(crate::lagrangian::point_segment_distance(p.to_array(), a.to_array(), b.to_array()));
            }
        }
        best
    }
}

/// The singular parameter r₀ = −(∂F − 2ξ̄F/(1+ξξ̄)) of the ruling through a
/// point of a holomorphic curve; real exactly when the point is Lagrangian.
pub fn regression_parameter(c: &SpectralCurve, p: &SheetPoint) -> Result<Complex64> {
    let curve = c.in_chart(p.chart);
    let d = eta_derivative_at(&curve, p.xi, p.eta, &SpectralConfig::default())?;
    Ok(-(d - connection(p.xi, p.eta)))
}

pub fn edge_of_regression(c: &SpectralCurve, comp: &LocusComponent) -> Result<RegressionEdge> {
    let mut points = Vec::new();
    let mut r0_values = Vec::new();
    let mut source = Vec::new();
    for (i, p) in comp.points.iter().enumerate() {
        let r0 = match regression_parameter(c, p) {
            Ok(r0) => r0,
            Err(Error::BranchPoint { .. }) => continue,
            Err(e) => return Err(e),
        };
        if r0.im.abs() >= 1e-8 {
            return Err(Error::NotLagrangian { imaginary: r0.im });
        }
        points.push(p.line().point_at(r0.re));
        r0_values.push(r0.re);
        source.push(i);
    }
    let closed = comp.closed && source.len() == comp.points.len();
    Ok(RegressionEdge { points, r0_values, source, closed })
}

/// ρ = ψ + iλ of the curve at a sheet point.
pub fn rho_at(c: &SpectralCurve, p: &SheetPoint) -> Result<RhoValue> {
    let curve = c.in_chart(p.chart);
    let d = eta_derivative_at(&curve, p.xi, p.eta, &SpectralConfig::default())?;
    Ok(rho_on_section(&SectionJet { xi: p.xi, value: p.eta, derivative: d }))
}

/// Least-squares plane through a point cloud: (unit normal, offset, max
/// distance of a point from the plane).
pub fn fit_plane<'a>(points: impl IntoIterator<Item = &'a EuclideanPoint>) -> (Vector3<f64>, f64, f64) {
    let pts: Vec<Vector3<f64>> = points.into_iter().map(|p| Vector3::new(p.x1, p.x2, p.x3)).collect();
    if pts.is_empty() {
        return (Vector3::z(), 0.0, 0.0);
    }
    let centroid = pts.iter().sum::<Vector3<f64>>() / pts.len() as f64;
    let mut cov = Matrix3::zeros();
    for p in &pts {
        let d = p - centroid;
        cov += d * d.transpose();
    }
    let eig = SymmetricEigen::new(cov);
    let k = eig.eigenvalues.imin();
    let normal = eig.eigenvectors.column(k).normalize();
    let offset = normal.dot(&centroid);
    let resid = pts.iter().map(|p| (normal.dot(p) - offset).abs()).fold(0.0, f64::max);
    (normal, offset, resid)
}

/// Best plane through the origin: (unit normal, max distance).
pub fn fit_plane_through_origin<'a>(points: impl IntoIterator<Item = &'a EuclideanPoint>) -> (Vector3<f64>, f64) {
    let pts: Vec<Vector3<f64>> = points.into_iter().map(|p| Vector3::new(p.x1, p.x2, p.x3)).collect();
    let mut m = Matrix3::zeros();
    for p in &pts {
        m += p * p.transpose();
    }
    let eig = SymmetricEigen::new(m);
    let normal = eig.eigenvectors.column(eig.eigenvalues.imin()).normalize();
    let resid = pts.iter().map(|p| normal.dot(p).abs()).fold(0.0, f64::max);
    (normal, resid)
}

/// A conic A x² + B xy + C y² + D x + E y + F = 0 fitted to planar points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConicFit {
    pub coeffs: [f64; 6],
    /// Largest |conic value| over the input, after normalising the
    /// quadratic part to unit norm.
    pub residual: f64,
}

impl ConicFit {
    pub fn eccentricity(&self) -> f64 {
        let [a, b, c, d, e, f] = self.coeffs;
        let m = Matrix3::new(a, b / 2.0, d / 2.0, b / 2.0, c, e / 2.0, d / 2.0, e / 2.0, f);
        let eta = if m.determinant() < 0.0 { 1.0 } else { -1.0 };
        let root = ((a - c) * (a - c) + b * b).sqrt();
        (2.0 * root / (eta * (a + c) + root)).sqrt()
    }
}

/// Algebraic least-squares conic through 2-D points (smallest singular
/// vector of the design matrix, after centring and scaling).
pub fn fit_conic(points: &[(f64, f64)]) -> ConicFit {
    let n = points.len().max(1) as f64;
    let (cx, cy) = points.iter().fold((0.0, 0.0), |(x, y), p| (x + p.0 / n, y + p.1 / n));
    let scale = points.iter().map(|p| ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()).sum::<f64>() / n;
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let rows: Vec<[f64; 6]> = points
        .iter()
        .map(|p| {
            let (x, y) = ((p.0 - cx) / scale, (p.1 - cy) / scale);
            [x * x, x * y, y * y, x, y, 1.0]
        })
        .collect();
    let design = DMatrix::from_fn(rows.len(), 6, |i, j| rows[i][j]);
    let normal = design.transpose() * &design;
    let eig = SymmetricEigen::new(normal);
    let v = eig.eigenvectors.column(eig.eigenvalues.imin()).into_owned();
    // Undo the normalisation: x = (X − cx)/s.
    let (a, b, c, d, e, f) = (v[0], v[1], v[2], v[3], v[4], v[5]);
    let s = scale;
    let a2 = a / (s * s);
    let b2 = b / (s * s);
    let c2 = c / (s * s);
    let d2 = d / s - 2.0 * a2 * cx - b2 * cy;
    let e2 = e / s - 2.0 * c2 * cy - b2 * cx;
    let f2 = f - d / s * cx - e / s * cy + a2 * cx * cx + b2 * cx * cy + c2 * cy * cy;
    let norm = (a2 * a2 + b2 * b2 + c2 * c2).sqrt();
    let coeffs = [a2 / norm, b2 / norm, c2 / norm, d2 / norm, e2 / norm, f2 / norm];
    let residual = points
        .iter()
        .map(|&(x, y)| {
            let [a, b, c, d, e, f] = coeffs;
            (a * x * x + b * x * y + c * y * y + d * x + e * y + f).abs()
        })
        .fold(0.0, f64::max);
    ConicFit { coeffs, residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn holomorphic_examples() {
        assert_eq!(gauss_curvature_holomorphic(0.3, 0.0, 2.0).unwrap(), 0.0);
        assert!((gauss_curvature_holomorphic(0.0, 1.0, 0.0).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(gauss_curvature_holomorphic(-1.0, 0.0, 1.0).unwrap_err(), Error::CurvatureSingularity);
    }

    #[test]
    fn general_reduces_to_holomorphic_on_sections() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let xi = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let f = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let df = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let dxi = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let r = rng.gen_range(-3.0..3.0);
            let rho = rho_on_section(&SectionJet { xi, value: f, derivative: df });
            let k1 = gauss_curvature_general(&CurveJet::north(xi, f, dxi, df * dxi), r).unwrap();
            let k2 = gauss_curvature_holomorphic(rho.psi, rho.lambda, r).unwrap();
            assert!((k1 - k2).abs() <= 1e-9 * k2.abs().max(1e-300), "{k1} {k2}");
        }
    }

    #[test]
    fn singular_ruling_is_reported() {
        let j = CurveJet::north(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        assert!(matches!(gauss_curvature_general(&j, 0.0), Err(Error::SingularRuling { .. })));
    }

    #[test]
    fn conic_fit_recovers_ellipse() {
        let pts: Vec<(f64, f64)> = (0..50).map(|i| {
            let t = i as f64 * 0.1;
            (1.0 + 2.0 * t.cos(), -0.5 + 1.2 * t.sin())
        }).collect();
        let fit = fit_conic(&pts);
        assert!(fit.residual < 1e-10);
        assert!((fit.eccentricity() - 0.8).abs() < 1e-10);
    }

    #[test]
    fn conic_fit_recovers_hyperbola() {
        let pts: Vec<(f64, f64)> = (0..40).map(|i| {
            let t = -1.5 + i as f64 * 0.075;
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            (s * 1.6 * t.cosh(), 1.2 * t.sinh())
        }).collect();
        let fit = fit_conic(&pts);
        assert!((fit.eccentricity() - 1.25).abs() < 1e-9);
    }

    #[test]
    fn plane_fits() {
        let pts: Vec<EuclideanPoint> = (0..20).map(|i| {
            let t = i as f64;
            EuclideanPoint::new(t.cos(), t.sin(), 0.5 * t.cos())
        }).collect();
        let (n, r) = fit_plane_through_origin(&pts);
        assert!(r < 1e-12);
        assert!((n.dot(&Vector3::new(0.5, 0.0, -1.0).normalize()).abs() - 1.0).abs() < 1e-12);
        let (_, off, r2) = fit_plane(&pts);
        assert!(r2 < 1e-12 && off.abs() < 1e-12);
    }
}

//! Lines of a spectral curve through a point of E³.
//!
//! Substituting the section of lines through p into P gives a polynomial
//! G(ξ) of degree at most 2m; its roots are the lines of the curve through
//! p. Points where roots collide lie on the edges of regression.

use num_complex::Complex64;
use serde::Serialize;

use crate::correspondence::{point_to_section, Chart, EuclideanPoint, OrientedLine, PointSection};
use crate::poly::{chordal_distance, cluster_by, Poly};
use crate::ruled::RegressionEdge;
use crate::spectral::SpectralCurve;

/// Roots closer than this (chordally) are the same line.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Separations in [AMBIGUOUS_LOW, AMBIGUOUS_HIGH) are re-examined. The
/// upper end is wide because a root of multiplicity k is only resolved to
/// about ε^{1/k}, which for triple roots (cusps of the edges) is ~1e−5.
pub const AMBIGUOUS_LOW: f64 = 5e-7;
pub const AMBIGUOUS_HIGH: f64 = 1e-4;
/// Distance to an edge polyline below which a point counts as on the caustic.
pub const EDGE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    Generic,
    Caustic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncidenceRoot {
    /// The line, in the North chart when |ξ| ≤ 1 and the South chart otherwise.
    pub line: OrientedLine,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncidenceResult {
    pub roots: Vec<IncidenceRoot>,
    pub distinct_count: usize,
    /// Lines with direction ξ = ∞ (the degree deficit of G).
    pub at_infinity: usize,
    pub classification: Classification,
    /// Smallest chordal separation between distinct roots.
    pub min_separation: f64,
}

impl IncidenceResult {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum::<usize>() + self.at_infinity
    }
}

/// G(ξ) = P(ξ, S(ξ)) for the section S of lines through a point.
pub fn incidence_polynomial(c: &SpectralCurve, s: &PointSection) -> Poly {
    let sec = Poly::new(s.coefficients().to_vec());
    let m = c.charge();
    let one = Poly::new(vec![Complex64::new(1.0, 0.0)]);
    let mut powers = vec![one];
    for k in 1..=m {
        let next = powers[k - 1].mul(&sec);
        powers.push(next);
    }
    let mut g = powers[m].clone();
    for j in 1..=m {
        let alpha = Poly::new(c.coeffs()[j - 1].clone());
        g = g.add(&alpha.mul(&powers[m - j]));
    }
    g
}

fn newton_polish(g: &Poly, mut x: Complex64) -> Complex64 {
    let dg = g.derivative();
    for _ in 0..8 {
        let (v, d) = (g.eval(x), dg.eval(x));
        if d.norm() == 0.0 {
            break;
        }
        let step = v / d;
        if !step.is_finite() || step.norm() > 1e-2 * (1.0 + x.norm()) {
            break;
        }
        x -= step;
        if step.norm() < 1e-16 * (1.0 + x.norm()) {
            break;
        }
    }
    x
}

pub fn lines_through_point(c: &SpectralCurve, p: &EuclideanPoint) -> IncidenceResult {
    let north = c.in_chart(Chart::North);
    let south = c.in_chart(Chart::South);
    let sec = point_to_section(p);
    let sec_s = sec.south();
    let g = incidence_polynomial(&north, &sec);
    let g_s = incidence_polynomial(&south, &sec_s);
    let two_m = 2 * c.charge();
    let degree = g.effective_degree(1e-13).unwrap_or(0);
    let at_infinity = two_m - degree.min(two_m);
    let g_trim = g.trimmed(1e-13);

    // Roots outside the unit disk are polished in the South chart.
    let mut roots: Vec<Complex64> = if degree == 0 { Vec::new() } else { g_trim.roots() };
    for r in roots.iter_mut() {
        if r.norm() > 1.0 {
            let s = newton_polish(&g_s, r.inv());
            if s.norm() > 0.0 {
                *r = s.inv();
            }
        } else {
            *r = newton_polish(&g_trim, *r);
        }
    }
    let ids = cluster_roots(&g_trim, &roots);
    let clusters = ids.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = Vec::with_capacity(clusters);
    for id in 0..clusters {
        let members: Vec<Complex64> = roots.iter().zip(&ids).filter(|(_, &i)| i == id).map(|(r, _)| *r).collect();
        let xi = members.iter().sum::<Complex64>() / members.len() as f64;
        let line = if xi.norm() <= 1.0 {
            OrientedLine::north(xi, sec.eval(xi))
        } else {
            let xs = xi.inv();
            OrientedLine::south(xs, sec_s.eval(xs))
        };
        out.push(IncidenceRoot { line, multiplicity: members.len() });
    }
    let mut min_separation = f64::INFINITY;
    for i in 0..out.len() {
        for j in (i + 1)..out.len() {
            min_separation = min_separation.min(chordal_distance(root_xi(&out[i]), root_xi(&out[j])));
        }
    }
    let distinct_count = out.len() + usize::from(at_infinity > 0);
    let classification = if distinct_count < two_m { Classification::Caustic } else { Classification::Generic };
    IncidenceResult { roots: out, distinct_count, at_infinity, classification, min_separation }
}

fn root_xi(r: &IncidenceRoot) -> Complex64 {
    match r.line.chart {
        Chart::North => r.line.xi,
        Chart::South => r.line.xi.inv(),
    }
}

/// Single-linkage clustering at [`CLUSTER_TOL`]. Pairs in the ambiguous
/// band are merged only if G has a critical point between them at which
/// G is indistinguishable from zero.
fn cluster_roots(g: &Poly, roots: &[Complex64]) -> Vec<usize> {
    let dg = g.derivative();
    let d2g = dg.derivative();
    let merge = |a: Complex64, b: Complex64| -> f64 {
        let d = chordal_distance(a, b);
        if !(AMBIGUOUS_LOW..AMBIGUOUS_HIGH).contains(&d) {
            return d;
        }
        // Newton on G' from the midpoint; converges linearly when G' itself
        // has a multiple root there.
        let mid = 0.5 * (a + b);
        let mut x = mid;
        for _ in 0..80 {
            let (v, dv) = (dg.eval(x), d2g.eval(x));
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            x -= step;
            if step.norm() <= 1e-16 * (1.0 + x.norm()) {
                break;
            }
        }
        if (x - mid).norm() > (a - b).norm() {
            return f64::INFINITY;
        }
        let noise = 1e3 * f64::EPSILON * g.abs_eval(x);
        if g.eval(x).norm() <= noise {
            0.0
        } else {
            f64::INFINITY
        }
    };
    cluster_by(roots, CLUSTER_TOL, merge)
}

/// (degree 2m, genus (m−1)²) of a smooth spectral curve of charge m.
pub fn degree_genus(c: &SpectralCurve) -> (usize, usize) {
    let m = c.charge();
    (2 * m, (m - 1) * (m - 1))
}

/// Whether `p` lies within [`EDGE_TOL`] of one of the sampled edges.
pub fn caustic_membership(p: &EuclideanPoint, edges: &[RegressionEdge]) -> bool {
    edges.iter().any(|e| e.distance(p, 0.1) < EDGE_TOL)
}

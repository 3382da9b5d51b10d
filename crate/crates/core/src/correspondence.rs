//! Oriented lines of E³ as points of T P¹, Euclidean points, and the
//! holomorphic sections formed by all lines through a point.
//!
//! A line is stored as `(ξ, η)` in one of two charts. The North chart uses
//! the stereographic coordinate ξ of the line's direction (ξ = 0 is the
//! direction +x³) and the fibre coordinate η of the tangent vector
//! η ∂/∂ξ + η̄ ∂/∂ξ̄. The South chart is related by ξ' = 1/ξ, η' = −η/ξ²;
//! in E³ terms it is the North chart composed with the half-turn about the
//! x¹ axis, which is how South-chart lines are mapped to points.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Chart {
    North,
    South,
}

impl Chart {
    pub fn other(self) -> Chart {
        match self {
            Chart::North => Chart::South,
            Chart::South => Chart::North,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedLine {
    pub chart: Chart,
    pub xi: Complex64,
    pub eta: Complex64,
}

impl OrientedLine {
    pub fn north(xi: Complex64, eta: Complex64) -> Self {
        Self { chart: Chart::North, xi, eta }
    }

    pub fn south(xi: Complex64, eta: Complex64) -> Self {
        Self { chart: Chart::South, xi, eta }
    }

    /// Expresses the line in `chart`, converting if needed.
    pub fn in_chart(&self, chart: Chart) -> Result<OrientedLine> {
        if self.chart == chart {
            Ok(*self)
        } else {
            chart_transition(self)
        }
    }

    /// Unit direction vector of the line in E³.
    pub fn direction(&self) -> EuclideanPoint {
        let d = stereographic_direction(self.xi);
        match self.chart {
            Chart::North => d,
            Chart::South => d.half_turn_x1(),
        }
    }

    /// Point of the line at signed distance `r` from its point closest to
    /// the origin.
    pub fn point_at(&self, r: f64) -> EuclideanPoint {
        let p = north_formula(self.xi, self.eta, r);
        match self.chart {
            Chart::North => p,
            Chart::South => p.half_turn_x1(),
        }
    }
}

/// Direction on the unit sphere for stereographic coordinate `xi`.
pub fn stereographic_direction(xi: Complex64) -> EuclideanPoint {
    let w = 1.0 + xi.norm_sqr();
    EuclideanPoint::new(2.0 * xi.re / w, 2.0 * xi.im / w, (1.0 - xi.norm_sqr()) / w)
}

fn north_formula(xi: Complex64, eta: Complex64, r: f64) -> EuclideanPoint {
    let xx = xi.norm_sqr();
    let w = 1.0 + xx;
    let w2 = w * w;
    let z = (2.0 * (eta - eta.conj() * xi * xi) + 2.0 * xi * w * r) / w2;
    let t = (-2.0 * (eta * xi.conj() + eta.conj() * xi).re + (1.0 - xx * xx) * r) / w2;
    EuclideanPoint::from_zt(z, t)
}

/// Maps `(line, r)` to the point of E³ at affine parameter `r` on the line.
/// South-chart lines are accepted and handled through the half-turn.
pub fn line_to_point(line: &OrientedLine, r: f64) -> EuclideanPoint {
    line.point_at(r)
}

/// Switches charts: `(ξ, η) ↦ (1/ξ, −η/ξ²)`. Involutive.
pub fn chart_transition(line: &OrientedLine) -> Result<OrientedLine> {
    if line.xi.norm() == 0.0 {
        return Err(Error::FibreOverChartPole);
    }
    let inv = line.xi.inv();
    Ok(OrientedLine {
        chart: line.chart.other(),
        xi: inv,
        eta: -line.eta * inv * inv,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EuclideanPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl EuclideanPoint {
    pub const ORIGIN: EuclideanPoint = EuclideanPoint { x1: 0.0, x2: 0.0, x3: 0.0 };

    pub fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn from_zt(z: Complex64, t: f64) -> Self {
        Self { x1: z.re, x2: z.im, x3: t }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x1, self.x2)
    }

    pub fn t(&self) -> f64 {
        self.x3
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn dot(&self, o: &EuclideanPoint) -> f64 {
        self.x1 * o.x1 + self.x2 * o.x2 + self.x3 * o.x3
    }

    pub fn cross(&self, o: &EuclideanPoint) -> EuclideanPoint {
        EuclideanPoint::new(
            self.x2 * o.x3 - self.x3 * o.x2,
            self.x3 * o.x1 - self.x1 * o.x3,
            self.x1 * o.x2 - self.x2 * o.x1,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(&self, o: &EuclideanPoint) -> f64 {
        (*self - *o).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// Rotation by π about the x¹ axis; relates the two charts.
    pub fn half_turn_x1(&self) -> EuclideanPoint {
        EuclideanPoint::new(self.x1, -self.x2, -self.x3)
    }
}

impl Add for EuclideanPoint {
    type Output = EuclideanPoint;
    fn add(self, o: EuclideanPoint) -> EuclideanPoint {
        EuclideanPoint::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for EuclideanPoint {
    type Output = EuclideanPoint;
    fn sub(self, o: EuclideanPoint) -> EuclideanPoint {
        EuclideanPoint::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Mul<f64> for EuclideanPoint {
    type Output = EuclideanPoint;
    fn mul(self, s: f64) -> EuclideanPoint {
        EuclideanPoint::new(self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Neg for EuclideanPoint {
    type Output = EuclideanPoint;
    fn neg(self) -> EuclideanPoint {
        self * -1.0
    }
}

/// The holomorphic section η(ξ) = ½(z − 2tξ − z̄ξ²) of all oriented lines
/// through the point (z, t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointSection {
    pub z: Complex64,
    pub t: f64,
}

impl PointSection {
    /// Coefficients of the section as a quadratic in ξ, ascending.
    pub fn coefficients(&self) -> [Complex64; 3] {
        [0.5 * self.z, Complex64::new(-self.t, 0.0), -0.5 * self.z.conj()]
    }

    pub fn eval(&self, xi: Complex64) -> Complex64 {
        0.5 * (self.z - 2.0 * self.t * xi - self.z.conj() * xi * xi)
    }

    /// ∂η/∂ξ of the section.
    pub fn derivative(&self, xi: Complex64) -> Complex64 {
        -self.t - self.z.conj() * xi
    }

    /// The section in the South chart (lines through the same point).
    pub fn south(&self) -> PointSection {
        PointSection { z: self.z.conj(), t: -self.t }
    }

    /// The line of the section with direction `xi` (North chart).
    pub fn line(&self, xi: Complex64) -> OrientedLine {
        OrientedLine::north(xi, self.eval(xi))
    }

    /// Affine parameter at which the line with direction `xi` passes
    /// through the section's point.
    pub fn parameter_at(&self, xi: Complex64) -> f64 {
        let xx = xi.norm_sqr();
        ((self.z.conj() * xi).re * 2.0 + self.t * (1.0 - xx)) / (1.0 + xx)
    }

    pub fn point(&self) -> EuclideanPoint {
        EuclideanPoint::from_zt(self.z, self.t)
    }
}

pub fn point_to_section(p: &EuclideanPoint) -> PointSection {
    PointSection { z: p.z(), t: p.t() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: EuclideanPoint, b: EuclideanPoint, tol: f64) -> bool {
        a.distance(&b) < tol
    }

    #[test]
    fn line_to_point_examples() {
        let p = line_to_point(&OrientedLine::north(c(0.0, 0.0), c(0.0, 0.0)), 5.0);
        assert!(close(p, EuclideanPoint::new(0.0, 0.0, 5.0), 1e-15));

        let z0 = c(1.5, -0.25);
        let p = line_to_point(&OrientedLine::north(c(0.0, 0.0), z0 / 2.0), -2.0);
        assert!(close(p, EuclideanPoint::new(1.5, -0.25, -2.0), 1e-15));

        let p = line_to_point(&OrientedLine::north(c(1.0, 0.0), c(0.0, 1.0)), 0.0);
        assert!(close(p, EuclideanPoint::new(0.0, 1.0, 0.0), 1e-15));
    }

    #[test]
    fn point_to_section_examples() {
        let s = point_to_section(&EuclideanPoint::ORIGIN);
        assert!(s.coefficients().iter().all(|c| c.norm() == 0.0));

        let s = point_to_section(&EuclideanPoint::new(0.0, 0.0, 1.0));
        let xi = c(0.3, 0.8);
        assert!((s.eval(xi) + xi).norm() < 1e-15);

        let s = point_to_section(&EuclideanPoint::new(2.0, 0.0, 0.0));
        assert!((s.eval(xi) - (1.0 - xi * xi)).norm() < 1e-15);
    }

    #[test]
    fn chart_transition_examples() {
        let l = chart_transition(&OrientedLine::north(c(1.0, 0.0), c(0.0, 0.0))).unwrap();
        assert_eq!(l.chart, Chart::South);
        assert!((l.xi - c(1.0, 0.0)).norm() < 1e-15 && l.eta.norm() < 1e-15);

        let l = chart_transition(&OrientedLine::north(c(2.0, 0.0), c(4.0, 0.0))).unwrap();
        assert!((l.xi - c(0.5, 0.0)).norm() < 1e-15);
        assert!((l.eta - c(-1.0, 0.0)).norm() < 1e-15);

        let l0 = OrientedLine::north(c(1.0, 1.0), c(3.0, -2.0));
        let back = chart_transition(&chart_transition(&l0).unwrap()).unwrap();
        assert_eq!(back.chart, Chart::North);
        assert!((back.xi - l0.xi).norm() < 1e-12 && (back.eta - l0.eta).norm() < 1e-12);
    }

    #[test]
    fn chart_transition_at_pole_fails() {
        let err = chart_transition(&OrientedLine::north(c(0.0, 0.0), c(1.0, 0.0))).unwrap_err();
        assert_eq!(err, Error::FibreOverChartPole);
    }

    #[test]
    fn south_chart_describes_the_same_line() {
        let l = OrientedLine::north(c(0.4, -1.3), c(-0.7, 0.2));
        let s = chart_transition(&l).unwrap();
        for r in [-2.0, 0.0, 1.5] {
            assert!(close(l.point_at(r), s.point_at(r), 1e-12));
        }
        let d = l.direction().distance(&s.direction());
        assert!(d < 1e-14);
    }

    #[test]
    fn south_section_contains_the_same_lines() {
        let sec = point_to_section(&EuclideanPoint::new(0.3, -1.2, 0.8));
        let xi = c(-0.6, 1.7);
        let north = sec.line(xi);
        let south = chart_transition(&north).unwrap();
        assert!((sec.south().eval(south.xi) - south.eta).norm() < 1e-12);
    }

    #[test]
    fn point_at_lowest_parameter_is_closest_to_origin() {
        let l = OrientedLine::north(c(0.2, 0.9), c(1.1, -0.3));
        let p0 = l.point_at(0.0);
        assert!(p0.dot(&l.direction()).abs() < 1e-14);
    }
}

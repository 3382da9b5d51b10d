//! Builtin charge-2 and tetrahedral charge-3 spectral curves and the closed
//! forms attached to them.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correspondence::{Chart, EuclideanPoint, OrientedLine};
use crate::error::{Error, Result};
use crate::spectral::SpectralCurve;

/// Γ(1/3), frozen to double precision.
pub const GAMMA_ONE_THIRD: f64 = 2.678_938_534_707_747_6;

/// Complete elliptic integral of the first kind, K(k) = π / (2 AGM(1, √(1−k²))).
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("elliptic modulus must satisfy 0 <= k < 1, got {k}")));
    }
    let (mut a, mut b) = (1.0_f64, (1.0 - k * k).sqrt());
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(PI / (2.0 * a))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Charge2Params {
    pub k: f64,
    pub alpha: f64,
}

impl Charge2Params {
    pub fn new(k: f64) -> Result<Self> {
        if k == 0.0 {
            return Err(Error::SingularCurve("k = 0 (coincident monopoles)".into()));
        }
        if !(0.0..1.0).contains(&k) {
            return Err(Error::Domain(format!("charge-2 parameter must satisfy 0 < k < 1, got {k}")));
        }
        let half_k = 0.5 * elliptic_k(k)?;
        Ok(Self { k, alpha: half_k * half_k })
    }

    /// The four real branch points ±√((2−k² ± 2√(1−k²))/k²), ascending.
    pub fn branch_points(&self) -> [f64; 4] {
        let k2 = self.k * self.k;
        let s = (1.0 - k2).sqrt();
        let outer = ((2.0 - k2 + 2.0 * s) / k2).sqrt();
        let inner = ((2.0 - k2 - 2.0 * s) / k2).sqrt();
        [-outer, -inner, inner, outer]
    }

    /// Upper and lower lifts η = ±2i√α √(1−k²cos²θ) e^{iθ} of the equator ξ = e^{iθ}.
    pub fn equator_lift(&self, theta: f64, sign: f64) -> OrientedLine {
        let s = (1.0 - self.k * self.k * theta.cos().powi(2)).sqrt();
        let eta = Complex64::new(0.0, 2.0 * sign * self.alpha.sqrt() * s) * Complex64::from_polar(1.0, theta);
        OrientedLine::north(Complex64::from_polar(1.0, theta), eta)
    }

    /// Lift of the meridian ξ = tan(θ/2), defined for sin²θ ≤ k²:
    /// η = ±√α √(k²−sin²θ) / cos²(θ/2).
    pub fn meridian_lift(&self, theta: f64, sign: f64) -> Result<OrientedLine> {
        let d = self.k * self.k - theta.sin().powi(2);
        if d < 0.0 {
            return Err(Error::Domain(format!("meridian lift needs sin^2(theta) <= k^2, theta = {theta}")));
        }
        let c = (0.5 * theta).cos();
        let eta = sign * self.alpha.sqrt() * d.sqrt() / (c * c);
        Ok(OrientedLine::north(Complex64::new((0.5 * theta).tan(), 0.0), Complex64::new(eta, 0.0)))
    }
}

pub fn charge2(k: f64) -> Result<(SpectralCurve, Charge2Params)> {
    let params = Charge2Params::new(k)?;
    let (a, k2) = (params.alpha, k * k);
    let zero = Complex64::new(0.0, 0.0);
    let re = |x: f64| Complex64::new(x, 0.0);
    let curve = SpectralCurve::new(
        2,
        vec![
            vec![zero; 3],
            vec![re(-a * k2), zero, re(2.0 * a * (2.0 - k2)), zero, re(-a * k2)],
        ],
    )?;
    Ok((curve, params))
}

/// The ellipse and hyperbola swept out as edges of regression by the
/// Lagrangian rulings of the charge-2 curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Charge2Conics {
    pub params: Charge2Params,
}

pub fn charge2_conics(k: f64) -> Result<Charge2Conics> {
    Ok(Charge2Conics { params: Charge2Params::new(k)? })
}

impl Charge2Conics {
    /// Semi-axes (along x¹, along x²) of the ellipse in the plane x³ = 0.
    pub fn ellipse_semi_axes(&self) -> (f64, f64) {
        let r = 2.0 * self.params.alpha.sqrt();
        (r, r * (1.0 - self.params.k.powi(2)).sqrt())
    }

    /// Semi-axes (transverse along x¹, conjugate along x³) of the hyperbola in x² = 0.
    pub fn hyperbola_semi_axes(&self) -> (f64, f64) {
        let r = 2.0 * self.params.alpha.sqrt();
        (r * self.params.k, r * (1.0 - self.params.k.powi(2)).sqrt())
    }

    pub fn ellipse_eccentricity(&self) -> f64 {
        let (a, b) = self.ellipse_semi_axes();
        (1.0 - (b / a).powi(2)).sqrt()
    }

    pub fn hyperbola_eccentricity(&self) -> f64 {
        let (a, b) = self.hyperbola_semi_axes();
        (1.0 + (b / a).powi(2)).sqrt()
    }

    /// Edge of the equator ruling; `sign = 1` takes the upper signs.
    pub fn ellipse_point(&self, theta: f64, sign: f64) -> EuclideanPoint {
        let k2 = self.params.k.powi(2);
        let ra = 2.0 * self.params.alpha.sqrt();
        let s = (1.0 - k2 * theta.cos().powi(2)).sqrt();
        EuclideanPoint::new(-sign * ra * theta.sin() / s, sign * ra * (1.0 - k2) * theta.cos() / s, 0.0)
    }

    /// Edge of the meridian rulings, defined for sin²θ < k². `sign = s` is the
    /// edge of `meridian_lift(θ, −s)`.
    pub fn hyperbola_point(&self, theta: f64, sign: f64) -> Result<EuclideanPoint> {
        let k2 = self.params.k.powi(2);
        let d = k2 - theta.sin().powi(2);
        if d <= 0.0 {
            return Err(Error::EdgeAtBranch(theta));
        }
        let ra = 2.0 * self.params.alpha.sqrt();
        Ok(EuclideanPoint::new(
            -sign * ra * k2 * theta.cos() / d.sqrt(),
            0.0,
            sign * ra * (k2 - 1.0) * theta.sin() / d.sqrt(),
        ))
    }

    /// (x¹)²/4α + (x²)²/4α(1−k²) − 1
    pub fn ellipse_residual(&self, p: &EuclideanPoint) -> f64 {
        let (a, b) = self.ellipse_semi_axes();
        (p.x1 / a).powi(2) + (p.x2 / b).powi(2) - 1.0
    }

    /// (x¹)²/4αk² − (x³)²/4α(1−k²) − 1
    pub fn hyperbola_residual(&self, p: &EuclideanPoint) -> f64 {
        let (a, b) = self.hyperbola_semi_axes();
        (p.x1 / a).powi(2) - (p.x3 / b).powi(2) - 1.0
    }
}

/// Γ(1/3)⁹ / (48√6 π³)
pub fn charge3_constant() -> f64 {
    GAMMA_ONE_THIRD.powi(9) / (48.0 * 6.0_f64.sqrt() * PI.powi(3))
}

/// 1 − 5√2ξ³ − ξ⁶
pub fn charge3_sextic(xi: Complex64) -> Complex64 {
    let x3 = xi * xi * xi;
    1.0 - 5.0 * SQRT_2 * x3 - x3 * x3
}

pub fn charge3() -> SpectralCurve {
    let c = charge3_constant();
    let re = |x: f64| Complex64::new(x, 0.0);
    SpectralCurve::cyclic(
        3,
        &[re(c), re(0.0), re(0.0), re(-5.0 * SQRT_2 * c), re(0.0), re(0.0), re(-c)],
    )
    .expect("charge-3 table has the right shape")
}

/// (coefficient, rational part multiplies √2?, power of ξ, power of ξ̄)
type Term = (f64, bool, u32, u32);

const F_TERMS: [Term; 22] = [
    (-4.0, false, 9, 9),
    (-165.0, true, 9, 6),
    (-42.0, false, 9, 3),
    (10.0, true, 9, 0),
    (162.0, false, 8, 8),
    (810.0, true, 8, 5),
    (-162.0, false, 8, 2),
    (-162.0, false, 7, 7),
    (-810.0, true, 7, 4),
    (162.0, false, 7, 1),
    (-2988.0, false, 6, 6),
    (360.0, true, 6, 3),
    (42.0, false, 6, 0),
    (8100.0, false, 5, 5),
    (-810.0, true, 5, 2),
    (-8100.0, false, 4, 4),
    (810.0, true, 4, 1),
    (2988.0, false, 3, 3),
    (-165.0, true, 3, 0),
    (162.0, false, 2, 2),
    (-162.0, false, 1, 1),
    (4.0, false, 0, 0),
];

const G_TERMS: [Term; 12] = [
    (1.0, false, 6, 6),
    (41.0, true, 6, 3),
    (-10.0, false, 6, 0),
    (-36.0, false, 5, 5),
    (-9.0, true, 5, 2),
    (-126.0, false, 4, 4),
    (9.0, true, 4, 1),
    (302.0, false, 3, 3),
    (-41.0, true, 3, 0),
    (-126.0, false, 2, 2),
    (-36.0, false, 1, 1),
    (1.0, false, 0, 0),
];

const FACTOR_TERMS: [Term; 6] = [
    (4.0, false, 3, 3),
    (1.0, true, 3, 0),
    (-18.0, false, 2, 2),
    (18.0, false, 1, 1),
    (1.0, true, 0, 3),
    (-4.0, false, 0, 0),
];

fn eval_terms(terms: &[Term], xi: Complex64, xi_bar: Complex64) -> Complex64 {
    terms
        .iter()
        .map(|&(c, root2, a, b)| {
            let c = if root2 { c * SQRT_2 } else { c };
            xi.powu(a) * xi_bar.powu(b) * c
        })
        .sum()
}

/// Each off-diagonal term ξᵃξ̄ᵇ (a ≠ b) of a table together with its partner ξᵇξ̄ᵃ.
fn eval_completed(terms: &[Term], xi: Complex64, xi_bar: Complex64) -> Complex64 {
    let mirrored: Complex64 = terms
        .iter()
        .filter(|t| t.2 != t.3)
        .map(|&(c, root2, a, b)| {
            let c = if root2 { c * SQRT_2 } else { c };
            xi.powu(b) * xi_bar.powu(a) * c
        })
        .sum();
    eval_terms(terms, xi, xi_bar) + mirrored
}

/// The 22-term table f(ξ, ξ̄), evaluated literally.
pub fn charge3_f(xi: Complex64, xi_bar: Complex64) -> Complex64 {
    eval_terms(&F_TERMS, xi, xi_bar)
}

/// The 12-term table g(ξ, ξ̄), evaluated literally.
pub fn charge3_g(xi: Complex64, xi_bar: Complex64) -> Complex64 {
    eval_terms(&G_TERMS, xi, xi_bar)
}

/// The symmetric completion of f: the listed terms plus the mirror ξᵇξ̄ᵃ of
/// every off-diagonal term. Real on the diagonal ξ̄ = conj ξ; its zero set
/// there is the non-equatorial part of the charge-3 Lagrangian projection.
pub fn charge3_f_full(xi: Complex64, xi_bar: Complex64) -> Complex64 {
    eval_completed(&F_TERMS, xi, xi_bar)
}

/// The symmetric completion of g, see [`charge3_f_full`].
pub fn charge3_g_full(xi: Complex64, xi_bar: Complex64) -> Complex64 {
    eval_completed(&G_TERMS, xi, xi_bar)
}

/// 4ξ³ξ̄³ + √2ξ³ − 18ξ²ξ̄² + 18ξξ̄ + √2ξ̄³ − 4, the great-circle factor of f.
pub fn charge3_circle_factor(xi: Complex64, xi_bar: Complex64) -> Complex64 {
    eval_terms(&FACTOR_TERMS, xi, xi_bar)
}

/// Sign s with f = s · (circle factor) · g, for the completed polynomials.
pub const CHARGE3_FACTOR_SIGN: f64 = -1.0;

/// The completed g on the real axis ξ = ξ̄ = u, in factored form.
pub fn charge3_g_real_axis_factored(u: f64) -> f64 {
    let a = u * u - 2.0 * SQRT_2 * u - 1.0;
    let b = u.powi(4) + 5.0 * SQRT_2 * u.powi(3) - 3.0 * u * u - 5.0 * SQRT_2 * u + 1.0;
    let c = u.powi(4) - SQRT_2 * u.powi(3) + 3.0 * u * u + SQRT_2 * u + 1.0;
    a * a * b * c
}

/// A fractional linear map ξ ↦ (aξ + b)/(cξ + d) with ad − bc = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mobius {
    pub fn identity() -> Self {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self { a: one, b: zero, c: zero, d: one }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Entry-wise distance to `other` modulo the sign ambiguity of SL(2).
    pub fn projective_distance(&self, other: &Mobius) -> f64 {
        let diff = |s: f64| {
            (self.a - other.a * s).norm()
                + (self.b - other.b * s).norm()
                + (self.c - other.c * s).norm()
                + (self.d - other.d * s).norm()
        };
        diff(1.0).min(diff(-1.0))
    }

    /// The same map written in the coordinate 1/ξ.
    fn inverted_coordinates(&self) -> Mobius {
        Mobius { a: self.d, b: self.c, c: self.b, d: self.a }
    }

    pub fn apply(&self, xi: Complex64) -> Complex64 {
        (self.a * xi + self.b) / (self.c * xi + self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TetrahedralElement {
    pub map: Mobius,
    /// Index j of the rotation e^{i v_j}, 1..=3.
    pub j: usize,
    /// Index k of g_k, 0..=3.
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TetrahedralGroup {
    pub elements: Vec<TetrahedralElement>,
}

/// The 12 maps ξ ↦ e^{i v_j} g_k(ξ).
pub fn tetrahedral_group() -> TetrahedralGroup {
    let s3 = 3.0_f64.sqrt();
    let alpha = Complex64::new(s3, 1.0) / (2.0 * s3);
    let v = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];
    let g = |k: usize| -> Mobius {
        if k == 0 {
            return Mobius::identity();
        }
        let beta = Complex64::new(0.0, SQRT_2 / s3) * Complex64::from_polar(1.0, -v[k - 1]);
        Mobius { a: alpha, b: -beta.conj(), c: beta, d: alpha.conj() }
    };
    let mut elements = Vec::with_capacity(12);
    for (jdx, &vj) in v.iter().enumerate() {
        let half = Complex64::from_polar(1.0, 0.5 * vj);
        let rot = Mobius { a: half, b: Complex64::new(0.0, 0.0), c: Complex64::new(0.0, 0.0), d: half.conj() };
        for k in 0..4 {
            elements.push(TetrahedralElement { map: rot.compose(&g(k)), j: jdx + 1, k });
        }
    }
    TetrahedralGroup { elements }
}

impl TetrahedralGroup {
    /// Index of the element equal to `m` up to sign, if any.
    pub fn find(&self, m: &Mobius, tol: f64) -> Option<usize> {
        self.elements.iter().position(|e| e.map.projective_distance(m) < tol)
    }
}

/// Pushes an oriented line forward by a Möbius map acting on ξ, moving η as
/// a tangent vector: η' = η · dξ'/dξ. The output chart keeps ξ' bounded.
pub fn apply_to_line(g: &Mobius, line: &OrientedLine) -> OrientedLine {
    let local = match line.chart {
        Chart::North => *g,
        Chart::South => g.inverted_coordinates(),
    };
    let num = local.a * line.xi + local.b;
    let den = local.c * line.xi + local.d;
    let det = local.det();
    if den.norm() >= num.norm() {
        OrientedLine { chart: line.chart, xi: num / den, eta: line.eta * det / (den * den) }
    } else {
        // In the opposite coordinate the same map reads ξ ↦ (cξ + d)/(aξ + b), with determinant −det.
        OrientedLine { chart: line.chart.other(), xi: den / num, eta: -line.eta * det / (num * num) }
    }
}

/// Ruling over the great circle ξ = ξ̄ = s, as displayed for the real sheet:
/// x¹ = [Γ³(1−s²)Q^{1/3} + 2√6π s(1+s²) r] / (√6π(1+s²)²), x² = 0,
/// x³ = [−2Γ³ s Q^{1/3} + √6π(1−s⁴) r] / (√6π(1+s²)²), with Q = 1 − 5√2s³ − s⁶.
pub fn charge3_great_circle_ruling(s: f64, r: f64) -> EuclideanPoint {
    let g3 = GAMMA_ONE_THIRD.powi(3);
    let sp = 6.0_f64.sqrt() * PI;
    let q13 = charge3_sextic(Complex64::new(s, 0.0)).re.cbrt();
    let w = 1.0 + s * s;
    let x1 = (g3 * (1.0 - s * s) * q13 + 2.0 * sp * s * w * r) / (sp * w * w);
    let x3 = (-2.0 * g3 * s * q13 + sp * (1.0 - s.powi(4)) * r) / (sp * w * w);
    EuclideanPoint::new(x1, 0.0, x3)
}

/// The real-sheet line over ξ = s and the displayed edge-of-regression point
/// x¹ = Γ³(1−s²+s⁴)/(√6π Q^{2/3}), x³ = −Γ³ s(2−2s²−5√2s)/(2√6π Q^{2/3}).
pub fn charge3_great_circle(s: f64) -> Result<(OrientedLine, EuclideanPoint)> {
    let q = charge3_sextic(Complex64::new(s, 0.0)).re;
    if q.abs() < 1e-12 {
        return Err(Error::EdgeAtBranch(s));
    }
    let q13 = q.cbrt();
    let eta = charge3_constant().cbrt() * q13;
    let line = OrientedLine::north(Complex64::new(s, 0.0), Complex64::new(eta, 0.0));
    let g3 = GAMMA_ONE_THIRD.powi(3);
    let sp = 6.0_f64.sqrt() * PI;
    let q23 = q13 * q13;
    let edge = EuclideanPoint::new(
        g3 * (1.0 - s * s + s.powi(4)) / (sp * q23),
        0.0,
        -g3 * s * (2.0 - 2.0 * s * s - 5.0 * SQRT_2 * s) / (2.0 * sp * q23),
    );
    Ok((line, edge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::reality_check;

    #[test]
    fn elliptic_k_at_zero_is_half_pi() {
        assert!((elliptic_k(0.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!(elliptic_k(1.0).is_err());
    }

    #[test]
    fn charge2_rejects_k_zero() {
        assert!(matches!(charge2(0.0), Err(Error::SingularCurve(_))));
    }

    #[test]
    fn builtins_are_real() {
        assert!(reality_check(&charge2(0.8).unwrap().0).real);
        assert!(reality_check(&charge3()).real);
    }

    #[test]
    fn closed_form_branch_points_at_k08() {
        let bp = Charge2Params::new(0.8).unwrap().branch_points();
        let want = [-2.0, -0.5, 0.5, 2.0];
        for (a, b) in bp.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn conic_eccentricities() {
        let c = charge2_conics(0.8).unwrap();
        assert!((c.ellipse_eccentricity() - 0.8).abs() < 1e-12);
        assert!((c.hyperbola_eccentricity() - 1.25).abs() < 1e-12);
    }

    #[test]
    fn displayed_conics_satisfy_their_identities() {
        let c = charge2_conics(0.6).unwrap();
        for i in 0..50 {
            let th = -3.0 + 0.12 * i as f64;
            assert!(c.ellipse_residual(&c.ellipse_point(th, 1.0)).abs() < 1e-13);
            if let Ok(p) = c.hyperbola_point(th, -1.0) {
                assert!(c.hyperbola_residual(&p).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn group_contains_identity_and_rotation() {
        let g = tetrahedral_group();
        assert_eq!(g.elements.len(), 12);
        assert!(g.find(&Mobius::identity(), 1e-12).is_some());
        let w = Complex64::from_polar(1.0, PI / 3.0);
        let rot = Mobius { a: w, b: Complex64::new(0.0, 0.0), c: Complex64::new(0.0, 0.0), d: w.conj() };
        assert!(g.find(&rot, 1e-12).is_some());
        for e in &g.elements {
            assert!((e.map.det() - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn line_pushforward_is_chart_consistent() {
        let g = tetrahedral_group().elements[5].map;
        let line = OrientedLine::north(Complex64::new(0.3, -0.8), Complex64::new(1.0, 0.4));
        let a = apply_to_line(&g, &line).in_chart(Chart::North).unwrap();
        let b = apply_to_line(&g, &line.in_chart(Chart::South).unwrap()).in_chart(Chart::North).unwrap();
        assert!((a.xi - b.xi).norm() < 1e-12);
        assert!((a.eta - b.eta).norm() < 1e-12);
    }

    #[test]
    fn great_circle_edge_at_zero() {
        let (_, edge) = charge3_great_circle(0.0).unwrap();
        let want = GAMMA_ONE_THIRD.powi(3) / (6.0_f64.sqrt() * PI);
        assert!((edge.x1 - want).abs() < 1e-13);
        assert_eq!(edge.x3, 0.0);
    }
}

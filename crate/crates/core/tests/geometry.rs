mod common;

use std::f64::consts::PI;

use common::*;
use minitwistor::correspondence::{Chart, EuclideanPoint, OrientedLine};
use minitwistor::incidence::{caustic_membership, degree_genus, lines_through_point, Classification};
use minitwistor::lagrangian::{lambda_on_sheet, trace_locus, TraceConfig};
use minitwistor::monopoles::{charge2, charge2_conics, charge3, charge3_great_circle, charge3_great_circle_ruling, Charge2Params};
use minitwistor::ruled::{build_ruled_surface, edge_of_regression, regression_parameter};
use minitwistor::spectral::{SheetPoint, SpectralCurve};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// r₀ = −(F′ − 2ξ̄F/w) from the test-side derivative.
fn oracle_r0(cy: &Cyclic, xi: Complex64, eta: Complex64) -> Complex64 {
    let w = 1.0 + xi.norm_sqr();
    -(cy.d_eta(xi, eta) - 2.0 * xi.conj() * eta / w)
}

fn sheet_point(line: &OrientedLine) -> SheetPoint {
    SheetPoint { chart: line.chart, xi: line.xi, eta: line.eta, sheet_id: 0 }
}

#[test]
fn equator_and_meridian_rulings_lie_in_coordinate_planes() {
    let p = Charge2Params::new(0.8).unwrap();
    for i in 0..40 {
        let theta = 2.0 * PI * i as f64 / 40.0;
        for sign in [1.0, -1.0] {
            let line = p.equator_lift(theta, sign);
            for r in [-3.0, 0.0, 2.5] {
                let x = phi(Chart::North, line.xi, line.eta, r);
                assert!(x[2].abs() < 1e-9, "{x:?}");
            }
            let sm = (0.8_f64).asin() * (i as f64 / 40.0 * 2.0 - 1.0);
            let line = p.meridian_lift(sm, sign).unwrap();
            for r in [-3.0, 0.0, 2.5] {
                assert!(phi(Chart::North, line.xi, line.eta, r)[1].abs() < 1e-9);
            }
        }
    }
}

#[test]
fn lifts_are_lagrangian_lines_of_the_curve() {
    let (curve, p) = charge2(0.8).unwrap();
    let cy = Cyclic::charge2(0.8);
    for i in 0..50 {
        let theta = 0.1 + 2.0 * PI * i as f64 / 50.0;
        for sign in [1.0, -1.0] {
            let line = p.equator_lift(theta, sign);
            assert!(cy.residual(line.xi, line.eta) < 1e-12);
            assert!(cy.lambda(line.xi, line.eta).abs() < 1e-10);
            assert!(lambda_on_sheet(&curve, line.xi, line.eta).unwrap().abs() < 1e-10);
        }
    }
}

#[test]
fn meridian_domain_and_endpoints() {
    let p = Charge2Params::new(0.8).unwrap();
    let edge = 0.8_f64.asin();
    assert!(p.meridian_lift(edge + 1e-3, 1.0).is_err());
    assert!(p.meridian_lift(PI - edge - 1e-3, 1.0).is_err());
    assert!(p.meridian_lift(PI - edge + 1e-3, 1.0).is_ok());
    // at sin θ = k the lift reaches η = 0 over the branch point ξ = tan(θ/2)
    let end = p.meridian_lift(edge, 1.0).unwrap();
    assert!(end.eta.norm() < 1e-6);
    assert!((end.xi.re - p.branch_points()[2]).abs() < 1e-6);
}

#[test]
fn equator_lift_matches_traced_locus() {
    let (curve, p) = charge2(0.8).unwrap();
    let locus = trace_locus(&curve, &TraceConfig::default()).unwrap();
    let mut checked = 0;
    for comp in &locus.components {
        for sp in &comp.points {
            let (xi, eta) = to_north(sp.chart, sp.xi, sp.eta);
            if (xi.norm() - 1.0).abs() > 1e-9 || xi.im.abs() < 0.05 {
                continue;
            }
            let theta = xi.arg();
            let best = [1.0, -1.0].iter().map(|&s| (p.equator_lift(theta, s).eta - eta).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-8, "{xi} {eta} off by {best}");
            checked += 1;
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn charge2_conic_examples() {
    let conics = charge2_conics(0.8).unwrap();
    let alpha = (elliptic_k_quadrature(0.8) / 2.0).powi(2);
    let (a, b) = conics.ellipse_semi_axes();
    assert!((a - 2.0 * alpha.sqrt()).abs() < 1e-13 && (b - 1.2 * alpha.sqrt()).abs() < 1e-13);
    assert!((a - 1.99530).abs() < 1e-5 && (b - 1.19718).abs() < 1e-5);
    let v = conics.hyperbola_point(0.0, 1.0).unwrap();
    assert!((v.x1 + 1.59624).abs() < 1e-5 && v.x3.abs() < 1e-14);
    assert!((conics.hyperbola_point(0.0, -1.0).unwrap().x1 - 1.59624).abs() < 1e-5);
    assert!((conics.ellipse_eccentricity() - 0.8).abs() < 1e-14);
    assert!((conics.hyperbola_eccentricity() - (1.0_f64 + 0.36 / 0.64).sqrt()).abs() < 1e-14);
    assert!(conics.hyperbola_point(0.8_f64.asin() + 1e-3, 1.0).is_err());
}

#[test]
fn charge2_edges_from_lifts_are_the_conics() {
    let conics = charge2_conics(0.8).unwrap();
    let p = conics.params;
    let cy = Cyclic::charge2(0.8);
    for i in 0..60 {
        let theta = 0.05 + 2.0 * PI * i as f64 / 60.0;
        for sign in [1.0, -1.0] {
            let line = p.equator_lift(theta, sign);
            let r0 = oracle_r0(&cy, line.xi, line.eta);
            assert!(r0.im.abs() < 1e-10);
            let x = phi(Chart::North, line.xi, line.eta, r0.re);
            let shown = conics.ellipse_point(theta, sign).to_array();
            assert!(norm(sub(x, shown)) < 1e-9, "{x:?} vs {shown:?}");
            let lib = regression_parameter(&charge2(0.8).unwrap().0, &sheet_point(&line)).unwrap();
            assert!((lib - r0).norm() < 1e-10);
        }
        let theta = 0.9 * 0.8_f64.asin() * (2.0 * i as f64 / 59.0 - 1.0);
        for sign in [1.0, -1.0] {
            let line = p.meridian_lift(theta, sign).unwrap();
            let r0 = oracle_r0(&cy, line.xi, line.eta);
            let x = phi(Chart::North, line.xi, line.eta, r0.re);
            // the displayed edge pairs its upper sign with the lower-sign lift
            let h = conics.hyperbola_point(theta, -sign).unwrap();
            assert!(norm(sub(x, h.to_array())) < 1e-9, "{x:?} vs {h:?}");
            assert!(conics.hyperbola_residual(&h).abs() < 1e-12);
        }
    }
}

#[test]
fn traced_charge2_edges_lie_on_conics() {
    let (curve, _) = charge2(0.8).unwrap();
    let conics = charge2_conics(0.8).unwrap();
    let locus = trace_locus(&curve, &TraceConfig::default()).unwrap();
    let mut edges = Vec::new();
    for comp in &locus.components {
        let edge = edge_of_regression(&curve, comp).unwrap();
        for x in &edge.points {
            if x.norm() > 50.0 {
                continue;
            }
            let on = (x.x3.abs() < 1e-6 && conics.ellipse_residual(x).abs() < 1e-6)
                || (x.x2.abs() < 1e-6 && conics.hyperbola_residual(x).abs() < 1e-5 * (1.0 + x.norm_sqr()));
            assert!(on, "{x:?}");
        }
        edges.push(edge);
    }
    assert!(caustic_membership(&conics.ellipse_point(1.0, 1.0), &edges));
}

trait NormSqr {
    fn norm_sqr(&self) -> f64;
}
impl NormSqr for EuclideanPoint {
    fn norm_sqr(&self) -> f64 {
        self.norm() * self.norm()
    }
}

#[test]
fn great_circle_ruling_and_edge() {
    let g3 = gamma_one_third().powi(3);
    let sp = 6.0_f64.sqrt() * PI;
    let (line, edge) = charge3_great_circle(0.0).unwrap();
    assert!((edge.x1 - g3 / sp).abs() < 1e-12 && edge.x3.abs() < 1e-14);
    assert!((edge.x1 - 2.4984).abs() < 1e-4, "{}", edge.x1);
    assert!((line.eta.re - Cyclic::charge3_constant().cbrt()).abs() < 1e-12);
    let cy = Cyclic::charge3();
    for i in 0..41 {
        let s = -0.45 + 0.9 * i as f64 / 40.0;
        let (line, edge) = charge3_great_circle(s).unwrap();
        assert!(cy.residual(line.xi, line.eta) < 1e-12);
        assert!(cy.lambda(line.xi, line.eta).abs() < 1e-10);
        for r in [-2.0, 0.0, 1.5] {
            let shown = charge3_great_circle_ruling(s, r).to_array();
            assert!(shown[1] == 0.0);
            assert!(norm(sub(shown, phi(Chart::North, line.xi, line.eta, r))) < 1e-12);
        }
        let r0 = oracle_r0(&cy, line.xi, line.eta);
        assert!(r0.im.abs() < 1e-12);
        assert!(norm(sub(edge.to_array(), phi(Chart::North, line.xi, line.eta, r0.re))) < 1e-9);
    }
}

#[test]
fn traced_charge3_edge_matches_great_circle_edge() {
    let c3 = charge3();
    let locus = trace_locus(&c3, &TraceConfig::default()).unwrap();
    let mut checked = 0;
    for comp in &locus.components {
        let edge = edge_of_regression(&c3, comp).unwrap();
        for (x, &i) in edge.points.iter().zip(&edge.source) {
            let sp = comp.points[i];
            let (xi, eta) = to_north(sp.chart, sp.xi, sp.eta);
            if xi.im.abs() > 1e-12 || eta.im.abs() > 1e-9 || xi.re.abs() > 0.45 {
                continue;
            }
            let (_, shown) = charge3_great_circle(xi.re).unwrap();
            assert!(x.distance(&shown) < 1e-6, "{xi}: {x:?} vs {shown:?}");
            checked += 1;
        }
    }
    assert!(checked > 20, "{checked}");
}

/// The edge is the envelope of the rulings, so its tangent is parallel to the
/// ruling; the central difference error decays quadratically.
#[test]
fn edge_tangent_is_parallel_to_ruling() {
    let s = 0.2;
    let (line, _) = charge3_great_circle(s).unwrap();
    let d = direction(line.xi);
    let defect = |h: f64| {
        let a = charge3_great_circle(s + h).unwrap().1.to_array();
        let b = charge3_great_circle(s - h).unwrap().1.to_array();
        let t = scale(sub(a, b), 1.0 / (2.0 * h));
        norm(cross(t, d)) / norm(t)
    };
    let (e1, e2) = (defect(1e-2), defect(5e-3));
    assert!(e2 < 1e-3, "{e1} {e2}");
    let order = (e1 / e2).log2();
    assert!((order - 2.0).abs() < 0.1, "order {order}");
}

#[test]
fn ruled_surfaces_of_traced_components_are_flat() {
    let (curve, _) = charge2(0.8).unwrap();
    let locus = trace_locus(&curve, &TraceConfig { grid_n: 256, ..TraceConfig::default() }).unwrap();
    for comp in &locus.components {
        let surf = build_ruled_surface(&curve, comp, (-2.0, 2.0), 9);
        assert!(surf.max_abs_curvature(1e-3) < 1e-9);
    }
}

#[test]
fn line_sphere_is_rejected() {
    let p = [0.3, 1.0, -0.5];
    let s = minitwistor::correspondence::point_to_section(&EuclideanPoint::from_array(p)).coefficients();
    let curve = SpectralCurve::new(1, vec![s.iter().map(|&a| -a).collect()]).unwrap();
    let err = trace_locus(&curve, &TraceConfig { grid_n: 32, ..TraceConfig::default() }).unwrap_err();
    assert_eq!(err, minitwistor::Error::TotallyLagrangian);
}

#[test]
fn incidence_examples() {
    let (c2, _) = charge2(0.8).unwrap();
    let conics = charge2_conics(0.8).unwrap();
    let on = conics.hyperbola_point(0.3, 1.0).unwrap();
    let off = EuclideanPoint::new(on.x1 + 0.05, 0.0, on.x3 - 0.05);
    let res = lines_through_point(&c2, &off);
    assert_eq!(res.classification, Classification::Generic);
    assert_eq!(res.total_multiplicity(), 4);
    let res = lines_through_point(&c2, &on);
    assert_eq!(res.classification, Classification::Caustic);
    assert!(res.distinct_count < 4);

    assert_eq!(degree_genus(&c2), (4, 1));
    assert_eq!(degree_genus(&charge3()), (6, 4));
}

#[test]
fn random_points_meet_the_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let curves = [(charge2(0.8).unwrap().0, Cyclic::charge2(0.8)), (charge3(), Cyclic::charge3())];
    for (curve, cy) in &curves {
        for _ in 0..5000 {
            let x = [rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)];
            let res = lines_through_point(curve, &EuclideanPoint::from_array(x));
            assert!(res.distinct_count >= 1);
            assert_eq!(res.total_multiplicity(), 2 * curve.charge());
            for root in &res.roots {
                let (xi, eta) = to_north(root.line.chart, root.line.xi, root.line.eta);
                if xi.norm() < 5.0 {
                    assert!(cy.residual(xi, eta) < 1e-7 * (1.0 + eta.norm_sqr()), "{xi} {eta}");
                }
            }
        }
    }
}

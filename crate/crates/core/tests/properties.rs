mod common;

use common::*;
use minitwistor::correspondence::{chart_transition, line_to_point, point_to_section, Chart, EuclideanPoint, OrientedLine};
use minitwistor::incidence::lines_through_point;
use minitwistor::kahler::{rho, rho_on_section, rho_principal, sigma, FirstOrderJet, SectionJet};
use minitwistor::monopoles::{charge2, charge3};
use minitwistor::ruled::{gauss_curvature_general, CurveJet};
use num_complex::Complex64;
use proptest::prelude::*;

fn cplx(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(a, b)| c(a, b))
}

fn point() -> impl Strategy<Value = [f64; 3]> {
    [-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64]
}

fn jet() -> impl Strategy<Value = FirstOrderJet> {
    (cplx(2.0), cplx(2.0), cplx(2.0), cplx(2.0), cplx(2.0), cplx(2.0)).prop_map(|(xi, eta, d_xi, d_eta, db_xi, db_eta)| {
        FirstOrderJet { xi, eta, d_xi, d_eta, db_xi, db_eta }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn point_section_round_trip(p in point(), xi in cplx(3.0)) {
        let s = point_to_section(&EuclideanPoint::from_array(p));
        let line = s.line(xi);
        let back = line_to_point(&line, s.parameter_at(xi)).to_array();
        prop_assert!(norm(sub(back, p)) < 1e-9 * (1.0 + norm(p)));
    }

    #[test]
    fn chart_transition_is_an_involution(xi in cplx(3.0), eta in cplx(3.0), r in -4.0..4.0f64) {
        prop_assume!(xi.norm() > 1e-3);
        let line = OrientedLine::north(xi, eta);
        let south = chart_transition(&line).unwrap();
        prop_assert_eq!(south.chart, Chart::South);
        let back = chart_transition(&south).unwrap();
        prop_assert!((back.xi - xi).norm() < 1e-12 * (1.0 + xi.norm()));
        prop_assert!((back.eta - eta).norm() < 1e-11 * (1.0 + eta.norm()) * (1.0 + xi.norm_sqr()));
        let a = phi(Chart::North, xi, eta, r);
        let b = phi(Chart::South, south.xi, south.eta, r);
        prop_assert!(norm(sub(a, b)) < 1e-9 * (1.0 + norm(a)));
    }

    #[test]
    fn ruled_curvature_is_non_positive(xi in cplx(2.0), eta in cplx(2.0), dxi in cplx(1.0), deta in cplx(1.0), r in -3.0..3.0f64) {
        if let Ok(k) = gauss_curvature_general(&CurveJet::north(xi, eta, dxi, deta), r) {
            prop_assert!(k <= 0.0);
        }
    }

    #[test]
    fn flat_exactly_when_null(xi in cplx(2.0), eta in cplx(2.0), dxi in cplx(1.0), deta in cplx(1.0), r in -3.0..3.0f64) {
        prop_assume!(dxi.norm() > 1e-2);
        let w = 1.0 + xi.norm_sqr();
        // remove the null defect by adjusting the η̇ component along i·ξ̇
        let defect = CurveJet::north(xi, eta, dxi, deta).null_defect();
        let null_deta = deta - c(0.0, defect) / (w * dxi.conj());
        let j = CurveJet::north(xi, eta, dxi, null_deta);
        prop_assert!(j.null_defect().abs() < 1e-12);
        if let Ok(k) = gauss_curvature_general(&j, r) {
            prop_assert!(k.abs() < 1e-20);
        }
        let j = CurveJet::north(xi, eta, dxi, null_deta + c(0.0, 0.1) / dxi.conj());
        if let Ok(k) = gauss_curvature_general(&j, r) {
            prop_assert!(k < 0.0);
        }
    }

    #[test]
    fn sigma_vanishes_on_holomorphic_jets(xi in cplx(2.0), value in cplx(2.0), derivative in cplx(2.0)) {
        let s = SectionJet { xi, value, derivative };
        let j = FirstOrderJet::of_section(&s);
        prop_assert_eq!(sigma(&j), c(0.0, 0.0));
        prop_assert!((rho(&j).as_complex() - rho_on_section(&s).as_complex()).norm() < 1e-12);
    }

    #[test]
    fn rho_sigma_identities(j in jet()) {
        let s = sigma(&j).norm_sqr();
        let p = rho_principal(&j).norm_sqr();
        let plain = j.fibre_jacobian() * j.projection_jacobian();
        prop_assert!((p - s - plain).abs() < 1e-10 * (1.0 + p + s));
        let (ce, cbe) = j.covariant_eta();
        let full = rho(&j).as_complex().norm_sqr();
        let covariant = (ce.norm_sqr() - cbe.norm_sqr()) * j.projection_jacobian();
        prop_assert!((full - s - covariant).abs() < 1e-10 * (1.0 + full + s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incidence_counts_every_line(p in point(), which in 0..2usize) {
        let curve = if which == 0 { charge2(0.8).unwrap().0 } else { charge3() };
        let res = lines_through_point(&curve, &EuclideanPoint::from_array(p));
        prop_assert_eq!(res.total_multiplicity(), 2 * curve.charge());
        for root in &res.roots {
            let x = line_to_point(&root.line, 0.0).to_array();
            let d = root.line.direction().to_array();
            let off = sub(p, x);
            let perp = sub(off, scale(d, dot(off, d)));
            prop_assert!(norm(perp) < 1e-6 * (1.0 + norm(p)), "{:?}", perp);
        }
    }
}

//! The charge-2 curve: branch points, conic edges and their eccentricities
//! as the monopoles separate.

use minitwistor::monopoles::{charge2, charge2_conics};
use minitwistor::ruled::regression_parameter;
use minitwistor::spectral::SheetPoint;

fn main() {
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "k", "alpha", "e(ellipse)", "e(hyperb)", "gamma_2");
    for k in [0.2, 0.5, 0.8, 0.95, 0.99] {
        let conics = charge2_conics(k).unwrap();
        let p = conics.params;
        println!(
            "{k:>6.2} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            p.alpha,
            conics.ellipse_eccentricity(),
            conics.hyperbola_eccentricity(),
            p.branch_points()[2]
        );
    }

    let (curve, p) = charge2(0.8).unwrap();
    let conics = charge2_conics(0.8).unwrap();
    println!("ellipse semi-axes {:?}, hyperbola semi-axes {:?}", conics.ellipse_semi_axes(), conics.hyperbola_semi_axes());
    for theta in [0.0, 0.5, 1.0, 1.5] {
        let line = p.equator_lift(theta, 1.0);
        let sp = SheetPoint { chart: line.chart, xi: line.xi, eta: line.eta, sheet_id: 0 };
        let r0 = regression_parameter(&curve, &sp).unwrap();
        let x = line.point_at(r0.re);
        println!("theta = {theta:.1}: edge ({:+.5}, {:+.5}, {:+.5}), ellipse residual {:.1e}", x.x1, x.x2, x.x3, conics.ellipse_residual(&x));
    }
}

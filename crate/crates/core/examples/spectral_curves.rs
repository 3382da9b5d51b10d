//! Fibres, branch points, reality and monodromy of the builtin curves.

use std::f64::consts::PI;

use minitwistor::correspondence::Chart;
use minitwistor::monopoles::{charge2, charge3};
use minitwistor::spectral::{branch_points, continue_sheet, eta_roots, reality_check, SheetPoint};
use minitwistor::Complex64;

fn main() {
    let (c2, params) = charge2(0.8).unwrap();
    let c3 = charge3();
    println!("charge 2: k = {}, alpha = {:.6}", params.k, params.alpha);
    for (name, c) in [("charge 2", &c2), ("charge 3", &c3)] {
        let rep = reality_check(c);
        println!("{name}: real = {} (residual {:.1e})", rep.real, rep.max_residual);
        println!("  fibre over 0: {:.5?}", eta_roots(c, Complex64::new(0.0, 0.0)).roots);
        for b in branch_points(c).unwrap() {
            println!("  branch point xi = {:.5} ({:?}), ramification {}", b.xi, b.chart, b.ramification());
        }
    }

    let b = branch_points(&c3).unwrap().into_iter().find(|b| b.chart == Chart::North && b.xi.norm() < 1.0).unwrap();
    let path: Vec<Complex64> = (0..=256).map(|i| b.xi + Complex64::from_polar(0.05, 2.0 * PI * i as f64 / 256.0)).collect();
    let eta = eta_roots(&c3, path[0]).roots[0];
    let start = SheetPoint { chart: Chart::North, xi: path[0], eta, sheet_id: 0 };
    let end = continue_sheet(&c3, &path, start).unwrap();
    println!("loop around {:.4}: eta {:.5} -> {:.5}, ratio {:.5}", b.xi, eta, end.eta, end.eta / eta);
}

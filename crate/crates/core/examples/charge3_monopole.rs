//! The tetrahedral charge-3 curve: its symmetry group and the edge over a
//! great circle.

use minitwistor::monopoles::{apply_to_line, charge3, charge3_constant, charge3_great_circle, tetrahedral_group};
use minitwistor::spectral::eta_roots;
use minitwistor::Complex64;

fn main() {
    let curve = charge3();
    println!("c = {:.6}", charge3_constant());
    let group = tetrahedral_group();
    let xi = Complex64::new(0.3, 0.1);
    let eta = eta_roots(&curve, xi).roots[0];
    let line = minitwistor::correspondence::OrientedLine::north(xi, eta);
    for e in &group.elements {
        let image = apply_to_line(&e.map, &line);
        let c = curve.in_chart(image.chart);
        println!("j = {}, k = {}: image residual {:.1e}", e.j, e.k, c.residual(image.xi, image.eta));
    }
    println!("{:>6} {:>10} {:>10}", "s", "x1", "x3");
    for i in 0..9 {
        let s = -0.4 + 0.1 * i as f64;
        let (_, edge) = charge3_great_circle(s).unwrap();
        println!("{s:>6.2} {:>10.5} {:>10.5}", edge.x1, edge.x3);
    }
}

//! Lines as points of TP¹: build the line through a point with a given
//! direction, move along it, and switch charts.

use minitwistor::correspondence::{chart_transition, line_to_point, point_to_section, EuclideanPoint};
use minitwistor::Complex64;

fn main() {
    let p = EuclideanPoint::new(1.0, -0.5, 2.0);
    let section = point_to_section(&p);
    println!("lines through {p:?}: eta(xi) = {:?}", section.coefficients());

    for xi in [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.5), Complex64::new(-2.0, 1.0)] {
        let line = section.line(xi);
        let r = section.parameter_at(xi);
        let back = line_to_point(&line, r);
        let d = line.direction();
        println!(
            "xi = {xi:.3}  eta = {:.4}  direction = ({:.4}, {:.4}, {:.4})  r = {r:.4}  point = ({:.4}, {:.4}, {:.4})",
            line.eta, d.x1, d.x2, d.x3, back.x1, back.x2, back.x3
        );
        match chart_transition(&line) {
            Ok(south) => {
                let same = line_to_point(&south, r);
                println!("    south chart ({:.4}, {:.4}) gives the same point: {:.2e}", south.xi, south.eta, same.distance(&back));
            }
            Err(e) => println!("    no south chart coordinates: {e}"),
        }
    }
}

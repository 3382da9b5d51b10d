//! Lines of the charge-2 curve through points on and off the caustic.

use minitwistor::correspondence::EuclideanPoint;
use minitwistor::incidence::{degree_genus, lines_through_point};
use minitwistor::monopoles::{charge2, charge2_conics};

fn main() {
    let (curve, _) = charge2(0.8).unwrap();
    let conics = charge2_conics(0.8).unwrap();
    println!("(degree, genus) = {:?}", degree_genus(&curve));
    let points = [
        ("origin", EuclideanPoint::new(0.0, 0.0, 0.0)),
        ("far away", EuclideanPoint::new(5.0, 4.0, -3.0)),
        ("on the ellipse", conics.ellipse_point(0.7, 1.0)),
        ("on the hyperbola", conics.hyperbola_point(0.3, 1.0).unwrap()),
    ];
    for (name, p) in points {
        let res = lines_through_point(&curve, &p);
        println!(
            "{name:>16}: {:?}, {} distinct lines, total multiplicity {}, min separation {:.2e}",
            res.classification,
            res.distinct_count,
            res.total_multiplicity(),
            res.min_separation
        );
        for root in &res.roots {
            let d = root.line.direction();
            println!("{:>20}direction ({:+.4}, {:+.4}, {:+.4}) x{}", "", d.x1, d.x2, d.x3, root.multiplicity);
        }
    }
}

//! ρ, σ and the curvature of the ruled surface through a curve of lines.

use minitwistor::kahler::{rho, rho_on_section, sigma, FirstOrderJet, SectionJet};
use minitwistor::ruled::{gauss_curvature_general, gauss_curvature_holomorphic, CurveJet};
use minitwistor::Complex64;

fn main() {
    let s = SectionJet { xi: Complex64::new(0.3, -0.2), value: Complex64::new(0.7, 0.4), derivative: Complex64::new(-0.1, 0.9) };
    let r = rho_on_section(&s);
    let j = FirstOrderJet::of_section(&s);
    println!("holomorphic section: psi = {:.6}, lambda = {:.6}, |sigma| = {:.1e}", r.psi, r.lambda, sigma(&j).norm());

    let general = FirstOrderJet { d_xi: Complex64::new(1.0, 0.2), db_xi: Complex64::new(0.1, 0.0), db_eta: Complex64::new(0.3, -0.4), ..j };
    let g = rho(&general);
    println!("general jet: rho = {:.6} + {:.6}i, sigma = {:.6}", g.psi, g.lambda, sigma(&general));

    println!("{:>6} {:>14} {:>14}", "r", "K (curve)", "K (rho)");
    for r_i in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        let jet = CurveJet::north(s.xi, s.value, Complex64::new(1.0, 0.0), s.derivative);
        let k1 = gauss_curvature_general(&jet, r_i).unwrap();
        let k2 = gauss_curvature_holomorphic(r.psi, r.lambda, r_i).unwrap();
        println!("{r_i:>6.1} {k1:>14.8} {k2:>14.8}");
    }
}

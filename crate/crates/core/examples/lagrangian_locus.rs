//! Trace the Lagrangian curves on both builtin curves and write locus files.

use minitwistor::cli::formats::{locus_csv, locus_svg};
use minitwistor::lagrangian::{trace_locus, TraceConfig};
use minitwistor::monopoles::{charge2, charge3};

fn main() {
    let out = std::env::temp_dir().join("minitwistor-locus");
    std::fs::create_dir_all(&out).unwrap();
    let cfg = TraceConfig { grid_n: 512, ..TraceConfig::default() };
    for (name, curve) in [("charge2", charge2(0.8).unwrap().0), ("charge3", charge3())] {
        let locus = trace_locus(&curve, &cfg).unwrap();
        println!(
            "{name}: {} components, {} branch points, {} crossings, {} junctions",
            locus.components.len(),
            locus.branch_points.len(),
            locus.crossings.len(),
            locus.junctions.len()
        );
        for (i, comp) in locus.components.iter().enumerate() {
            println!(
                "  #{i}: {} points, closed = {}, sheet {}, branch points {:?}, max gap {:.2e}",
                comp.points.len(),
                comp.closed,
                comp.dominant_sheet(),
                comp.passes_branch,
                comp.max_gap()
            );
        }
        std::fs::write(out.join(format!("{name}-locus.csv")), locus_csv(&locus)).unwrap();
        std::fs::write(out.join(format!("{name}-locus.svg")), locus_svg(&locus)).unwrap();
    }
    println!("wrote {}", out.display());
}

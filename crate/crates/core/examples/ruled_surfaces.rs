//! Ruled surfaces and edges of regression of the charge-3 Lagrangian curves.

use minitwistor::cli::formats::{edges_obj, surface_obj};
use minitwistor::lagrangian::{trace_locus, TraceConfig};
use minitwistor::monopoles::charge3;
use minitwistor::ruled::{build_ruled_surface, edge_of_regression, fit_plane_through_origin};

fn main() {
    let curve = charge3();
    let locus = trace_locus(&curve, &TraceConfig { grid_n: 512, ..TraceConfig::default() }).unwrap();
    let out = std::env::temp_dir().join("minitwistor-ruled");
    std::fs::create_dir_all(&out).unwrap();
    let mut edges = Vec::new();
    for (i, comp) in locus.components.iter().enumerate() {
        let surf = build_ruled_surface(&curve, comp, (-3.0, 3.0), 33);
        let (normal, rms) = fit_plane_through_origin(surf.points());
        println!(
            "component {i}: max |K| = {:.1e}, plane through origin normal ({:.3}, {:.3}, {:.3}) rms {:.2e}",
            surf.max_abs_curvature(1e-3),
            normal.x,
            normal.y,
            normal.z,
            rms
        );
        std::fs::write(out.join(format!("surface-{i}.obj")), surface_obj(&surf)).unwrap();
        edges.push(edge_of_regression(&curve, comp).unwrap());
    }
    std::fs::write(out.join("edges.obj"), edges_obj(&edges, 10.0)).unwrap();
    println!("wrote {}", out.display());
}

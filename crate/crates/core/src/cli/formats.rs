//! Text exporters (CSV, SVG, OBJ) and their parse-back checks.
//!
//! All writers are deterministic: fixed float formatting, no timestamps.

use std::fmt::Write;

use num_complex::Complex64;

use crate::correspondence::{Chart, EuclideanPoint};
use crate::lagrangian::Locus;
use crate::ruled::{RegressionEdge, RuledSurfaceSample};

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
];

fn chart_name(c: Chart) -> &'static str {
    match c {
        Chart::North => "N",
        Chart::South => "S",
    }
}

pub fn locus_csv(locus: &Locus) -> String {
    let mut out = String::from("component,index,chart,xi_re,xi_im,eta_re,eta_im,sheet\n");
    for (i, comp) in locus.components.iter().enumerate() {
        let _ = writeln!(out, "# component {i} (sheet {}, closed={})", comp.dominant_sheet(), comp.closed);
        for (j, p) in comp.points.iter().enumerate() {
            let _ = writeln!(
                out,
                "{i},{j},{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                chart_name(p.chart),
                p.xi.re,
                p.xi.im,
                p.eta.re,
                p.eta.im,
                p.sheet_id
            );
        }
    }
    out
}

pub fn edges_csv(edges: &[RegressionEdge]) -> String {
    let mut out = String::from("edge,index,source,r0,x1,x2,x3\n");
    for (i, e) in edges.iter().enumerate() {
        let _ = writeln!(out, "# component {i} (points {}, closed={})", e.points.len(), e.closed);
        for (j, (p, (r0, s))) in e.points.iter().zip(e.r0_values.iter().zip(&e.source)).enumerate() {
            let _ = writeln!(out, "{i},{j},{s},{r0:.16e},{:.16e},{:.16e},{:.16e}", p.x1, p.x2, p.x3);
        }
    }
    out
}

pub fn curvature_csv(s: &RuledSurfaceSample) -> String {
    let mut out = String::from("row,col,r,x1,x2,x3,K\n");
    for (i, (row, ks)) in s.grid.iter().zip(s.curvature()).enumerate() {
        for (j, (p, k)) in row.iter().zip(ks).enumerate() {
            let k = k.map(|k| format!("{k:.16e}")).unwrap_or_default();
            let _ = writeln!(out, "{i},{j},{:.16e},{:.16e},{:.16e},{:.16e},{k}", s.r_values[j], p.x1, p.x2, p.x3);
        }
    }
    out
}

/// Quad mesh of a ruled surface: one vertex per grid point, one face per
/// grid cell (rows wrap when the generating curve is closed).
pub fn surface_obj(s: &RuledSurfaceSample) -> String {
    let mut out = String::from("# ruled surface\n");
    for p in s.points() {
        let _ = writeln!(out, "v {:.12e} {:.12e} {:.12e}", p.x1, p.x2, p.x3);
    }
    let rows = s.grid.len();
    let cols = s.r_values.len();
    let row_pairs = if s.closed && rows > 2 { rows } else { rows.saturating_sub(1) };
    let id = |i: usize, j: usize| (i % rows) * cols + j + 1;
    for i in 0..row_pairs {
        for j in 0..cols.saturating_sub(1) {
            let _ = writeln!(out, "f {} {} {} {}", id(i, j), id(i, j + 1), id(i + 1, j + 1), id(i + 1, j));
        }
    }
    out
}

/// Edges as OBJ polylines, split where a segment leaves the box |x| ≤ `clip`.
pub fn edges_obj(edges: &[RegressionEdge], clip: f64) -> String {
    let mut out = String::from("# edges of regression\n");
    let mut next = 1usize;
    for (i, e) in edges.iter().enumerate() {
        let _ = writeln!(out, "o edge{i}");
        let n = e.points.len();
        let mut pts: Vec<&EuclideanPoint> = e.points.iter().collect();
        if e.closed && n > 2 {
            pts.push(&e.points[0]);
        }
        for run in runs(&pts, |p| p.norm() <= clip) {
            for p in &run {
                let _ = writeln!(out, "v {:.12e} {:.12e} {:.12e}", p.x1, p.x2, p.x3);
            }
            let ids: Vec<String> = (next..next + run.len()).map(|k| k.to_string()).collect();
            let _ = writeln!(out, "l {}", ids.join(" "));
            next += run.len();
        }
    }
    out
}

/// Maximal runs of consecutive items satisfying `keep`, of length ≥ 2.
fn runs<'a, T>(items: &[&'a T], keep: impl Fn(&T) -> bool) -> Vec<Vec<&'a T>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for &it in items {
        if keep(it) {
            cur.push(it);
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    out.push(cur);
    out.into_iter().filter(|r| r.len() >= 2).collect()
}

struct Panel {
    x0: f64,
    title: String,
    polylines: Vec<(usize, Vec<(f64, f64)>)>,
    guide: bool,
}

const PANEL: f64 = 400.0;

fn svg_document(panels: &[Panel], extent: f64) -> String {
    let width = PANEL * panels.len() as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{:.0}\" viewBox=\"0 0 {width:.0} {:.0}\">",
        PANEL + 30.0,
        PANEL + 30.0
    );
    let scale = 0.45 * PANEL / extent;
    for p in panels {
        let cx = p.x0 + 0.5 * PANEL;
        let cy = 30.0 + 0.5 * PANEL;
        let _ = writeln!(out, "<g>");
        let _ = writeln!(out, "<text x=\"{:.1}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">{}</text>", p.x0 + 10.0, p.title);
        let _ = writeln!(
            out,
            "<rect x=\"{:.1}\" y=\"30\" width=\"{PANEL:.0}\" height=\"{PANEL:.0}\" fill=\"none\" stroke=\"#cccccc\"/>",
            p.x0
        );
        if p.guide {
            let _ = writeln!(
                out,
                "<circle cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"{scale:.3}\" fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>"
            );
        }
        for (k, line) in &p.polylines {
            let pts: Vec<String> = line.iter().map(|&(x, y)| format!("{:.3},{:.3}", cx + scale * x, cy - scale * y)).collect();
            let _ = writeln!(
                out,
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>",
                PALETTE[k % PALETTE.len()],
                pts.join(" ")
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

/// Projected locus in both stereographic charts, side by side, with the
/// unit circle (the seam between the charts) drawn as a guide.
pub fn locus_svg(locus: &Locus) -> String {
    const EXTENT: f64 = 1.6;
    let mut panels = Vec::new();
    for (n, (title, map)) in [
        ("north chart: xi", (|x: Complex64| x) as fn(Complex64) -> Complex64),
        ("south chart: 1/xi", |x: Complex64| x.inv()),
    ]
    .into_iter()
    .enumerate()
    {
        let mut polylines = Vec::new();
        for (k, comp) in locus.components.iter().enumerate() {
            let mut pts: Vec<Complex64> = comp.projected.iter().map(|&x| map(x)).collect();
            if comp.closed && pts.len() > 2 {
                pts.push(pts[0]);
            }
            let refs: Vec<&Complex64> = pts.iter().collect();
            for run in runs(&refs, |z| z.is_finite() && z.norm() <= EXTENT) {
                polylines.push((k, run.iter().map(|z| (z.re, z.im)).collect()));
            }
        }
        panels.push(Panel { x0: n as f64 * PANEL, title: title.into(), polylines, guide: true });
    }
    svg_document(&panels, EXTENT)
}

/// Edges projected to the (x¹, x²) and (x¹, x³) planes.
pub fn edges_svg(edges: &[RegressionEdge], extent: f64) -> String {
    let mut panels = Vec::new();
    for (n, (title, pick)) in [
        ("x1-x2", (|p: &EuclideanPoint| (p.x1, p.x2)) as fn(&EuclideanPoint) -> (f64, f64)),
        ("x1-x3", |p: &EuclideanPoint| (p.x1, p.x3)),
    ]
    .into_iter()
    .enumerate()
    {
        let mut polylines = Vec::new();
        for (k, e) in edges.iter().enumerate() {
            let mut pts: Vec<&EuclideanPoint> = e.points.iter().collect();
            if e.closed && pts.len() > 2 {
                pts.push(&e.points[0]);
            }
            for run in runs(&pts, |p| p.norm() <= extent) {
                polylines.push((k, run.iter().map(|p| pick(p)).collect()));
            }
        }
        panels.push(Panel { x0: n as f64 * PANEL, title: title.into(), polylines, guide: false });
    }
    svg_document(&panels, extent)
}

/// Parses an SVG produced here; returns the number of polylines.
pub fn check_svg(text: &str) -> Result<usize, String> {
    let doc = roxmltree::Document::parse(text).map_err(|e| e.to_string())?;
    let root = doc.root_element();
    if root.tag_name().name() != "svg" {
        return Err(format!("root element is <{}>", root.tag_name().name()));
    }
    let mut count = 0;
    for node in root.descendants().filter(|n| n.has_tag_name("polyline")) {
        let pts = node.attribute("points").ok_or("polyline without points")?;
        for pair in pts.split_whitespace() {
            let (x, y) = pair.split_once(',').ok_or_else(|| format!("bad point {pair:?}"))?;
            for v in [x, y] {
                let f: f64 = v.parse().map_err(|_| format!("bad coordinate {v:?}"))?;
                if !f.is_finite() {
                    return Err(format!("non-finite coordinate {v:?}"));
                }
            }
        }
        count += 1;
    }
    Ok(count)
}

/// Parses an OBJ produced here; returns (vertices, faces + polylines).
pub fn check_obj(text: &str) -> Result<(usize, usize), String> {
    let mut vertices = 0usize;
    let mut elements = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace();
        match it.next() {
            None | Some("#") | Some("o") => {}
            Some("v") => {
                let coords: Vec<&str> = it.collect();
                if coords.len() != 3 {
                    return Err(format!("line {}: vertex needs 3 coordinates", n + 1));
                }
                for c in coords {
                    let f: f64 = c.parse().map_err(|_| format!("line {}: bad coordinate {c:?}", n + 1))?;
                    if !f.is_finite() {
                        return Err(format!("line {}: non-finite coordinate", n + 1));
                    }
                }
                vertices += 1;
            }
            Some(kind @ ("f" | "l")) => {
                let ids: Vec<usize> = it
                    .map(|s| s.parse::<usize>().map_err(|_| format!("line {}: bad index {s:?}", n + 1)))
                    .collect::<Result<_, _>>()?;
                let min = if kind == "f" { 3 } else { 2 };
                if ids.len() < min {
                    return Err(format!("line {}: too few indices", n + 1));
                }
                elements.push((n + 1, ids));
            }
            Some(other) => return Err(format!("line {}: unknown statement {other:?}", n + 1)),
        }
    }
    for (n, ids) in &elements {
        if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > vertices) {
            return Err(format!("line {n}: index {bad} out of range"));
        }
    }
    Ok((vertices, elements.len()))
}

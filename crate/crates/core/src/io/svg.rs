use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::polar::HalfBranch;
use crate::reeb::ReebTree;
use crate::trace::LevelCurve;

use super::write_atomic;

/// What to draw; the view box is the square of half-width `radius`.
pub struct SvgInput<'a> {
    pub radius: f64,
    pub curve: Option<&'a LevelCurve>,
    pub branches: &'a [HalfBranch],
    pub tree: Option<&'a ReebTree>,
}

pub fn render_svg(curve: &LevelCurve, branches: &[HalfBranch], tree: &ReebTree, path: &Path) -> Result<()> {
    let doc = svg_document(&SvgInput { radius: curve.nbhd.radius, curve: Some(curve), branches, tree: Some(tree) })?;
    write_atomic(path, doc.as_bytes())
}

fn num(v: f64) -> String {
    format!("{v:.8e}")
}

/// Mathematical orientation: y is negated on output.
fn pt(p: (f64, f64)) -> String {
    format!("{} {}", num(p.0), num(-p.1))
}

pub fn svg_document(input: &SvgInput<'_>) -> Result<String> {
    if input.tree.is_some_and(|t| t.vertices.is_empty()) {
        return Err(Error::Empty("tree has no vertices".into()));
    }
    let r = input.radius;
    let w = r / 300.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="800">"##,
        num(-r),
        num(-r),
        num(2.0 * r),
        num(2.0 * r)
    );
    let _ = writeln!(s, "<!-- curvetree {} -->", super::TOOL_VERSION);
    let _ = writeln!(
        s,
        r##"<circle class="disk" cx="0" cy="0" r="{}" fill="none" stroke="#bbbbbb" stroke-width="{}"/>"##,
        num(r),
        num(w)
    );
    for b in input.branches {
        let pts: Vec<String> = b.samples.iter().map(|&p| pt(p)).collect();
        let _ = writeln!(
            s,
            r##"<polyline class="polar" fill="none" stroke="#2ca02c" stroke-width="{}" stroke-dasharray="{} {}" points="{}"/>"##,
            num(w),
            num(4.0 * w),
            num(3.0 * w),
            pts.join(" ")
        );
    }
    if let Some(c) = input.curve {
        let mut d = String::new();
        for (k, &p) in c.points.iter().enumerate() {
            let _ = write!(d, "{}{} ", if k == 0 { "M" } else { "L" }, pt(p));
        }
        d.push('Z');
        let _ = writeln!(s, r##"<path class="curve" fill="#1f77b41a" stroke="#1f77b4" stroke-width="{}" d="{}"/>"##, num(w), d);
    }
    if let Some(t) = input.tree {
        for &(a, b) in &t.edges {
            let (va, vb) = (&t.vertices[a], &t.vertices[b]);
            let (p, q) = ((va.x, va.y_repr), (vb.x, vb.y_repr));
            let mid = 0.5 * (p.0 + q.0);
            let _ = writeln!(
                s,
                r##"<path class="tree-edge" fill="none" stroke="#000000" stroke-width="{}" d="M{} C{} {} {}"/>"##,
                num(2.0 * w),
                pt(p),
                pt((mid, p.1)),
                pt((mid, q.1)),
                pt(q)
            );
        }
        for v in &t.vertices {
            let root = Some(v.id) == t.root_id;
            let (class, fill, rad) = if root { ("root", "#d62728", 6.0 * w) } else { ("vertex", "#000000", 4.0 * w) };
            let _ = writeln!(
                s,
                r##"<circle class="{class}" cx="{}" cy="{}" r="{}" fill="{fill}"/>"##,
                num(v.x),
                num(-v.y_repr),
                num(rad)
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

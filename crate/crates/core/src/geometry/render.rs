use std::fmt::Write;

use nalgebra::Vector2;

use super::planar::Planar;
use super::{DirichletDomain, GeometryError, Region};
use crate::algebra::{CrystalGroup, DualIndex};
use crate::numeric::int_box;

type P = Vector2<f64>;

const PX_PER_UNIT: f64 = 100.0;

/// SVG picture of `Ω` (filled), its point-group images and their lattice
/// translates (stroked) over `region`. One lattice unit is 100 px; the y axis
/// points up.
pub fn domain_svg(group: &CrystalGroup, dom: &DirichletDomain, region: Region) -> Result<String, GeometryError> {
    let planar = Planar::new(group)?;
    let size = (region.max - region.min) * PX_PER_UNIT;
    let to_px = |p: &P| ((p.x - region.min.x) * PX_PER_UNIT, (region.max.y - p.y) * PX_PER_UNIT);
    let path = |pts: &[P]| {
        let mut s = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = to_px(p);
            let _ = write!(s, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { " L" });
        }
        s.push_str(" Z");
        s
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = size.x,
        h = size.y
    );
    let _ = writeln!(svg, "  <title>Dirichlet domain of {}*</title>", group.name());
    let _ = writeln!(svg, r##"  <rect width="100%" height="100%" fill="#ffffff"/>"##);

    let reach = dom.circumradius() + (dom.omega0().norm());
    let center = (region.min + region.max) / 2.0;
    let half = (region.max - region.min).norm() / 2.0 + reach;
    let (lo, hi) = planar.dual_box(center, half);
    let _ = writeln!(svg, r##"  <g fill="none" stroke="#4a6fa5" stroke-width="1">"##);
    for (l, mat) in planar.point_group.iter().enumerate() {
        for k in int_box(&lo, &hi) {
            let nu = DualIndex(k);
            if l == 0 && nu.is_zero() {
                continue;
            }
            let shift = planar.dual_vector(&nu);
            let tile: Vec<P> = dom.vertices().iter().map(|v| mat * (v + shift)).collect();
            let visible = tile.iter().any(|p| {
                p.x >= region.min.x - reach && p.x <= region.max.x + reach && p.y >= region.min.y - reach && p.y <= region.max.y + reach
            });
            if visible {
                let dash = if nu.is_zero() { r#" stroke-dasharray="6 3""# } else { "" };
                let _ = writeln!(svg, r#"    <path d="{}"{dash}/>"#, path(&tile));
            }
        }
    }
    let _ = writeln!(svg, "  </g>");
    let _ = writeln!(
        svg,
        r##"  <path d="{}" fill="#f2c14e" fill-opacity="0.6" stroke="#000000" stroke-width="1.5"/>"##,
        path(dom.vertices())
    );
    let (x0, y0) = to_px(&dom.omega0());
    let _ = writeln!(svg, r##"  <circle cx="{x0:.3}" cy="{y0:.3}" r="3" fill="#000000"/>"##);
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// `index,x,y` rows of the vertices of `Ω`, counterclockwise.
pub fn vertices_csv(dom: &DirichletDomain) -> String {
    let mut s = String::from("index,x,y\n");
    for (i, v) in dom.vertices().iter().enumerate() {
        let _ = writeln!(s, "{i},{:.17},{:.17}", v.x, v.y);
    }
    s
}

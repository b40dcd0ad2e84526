use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use super::SpectralError;
use crate::algebra::{CrystalGroup, DualIndex};
use crate::geometry::{polygon_area, polygon_centroid, DirichletDomain, LabeledPolygon, Planar};
use crate::numeric::int_box;
use crate::tol;

type P = Vector2<f64>;

/// Which dual indices `ν` are kept in the truncated fiber `ℓ²(L*)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "radius", rename_all = "snake_case")]
pub enum NuWindow {
    /// `‖ν‖∞ ≤ R` in dual-lattice coordinates.
    Box(i64),
    /// `‖Cν‖₂ ≤ r`; stable under every orthogonal point group.
    Disk(f64),
}

impl NuWindow {
    /// The box window when it is `Π`-stable for `group`, otherwise the disk
    /// inscribed in it.
    pub fn for_group(group: &CrystalGroup, r_nu: i64) -> Self {
        let boxed = NuWindow::Box(r_nu);
        if boxed.check_stable(group).is_ok() {
            return boxed;
        }
        let c = group.dual_basis();
        let shortest = (0..c.ncols()).map(|j| c.column(j).norm()).fold(f64::INFINITY, f64::min);
        NuWindow::Disk(r_nu as f64 * shortest)
    }

    pub fn indices(&self, group: &CrystalGroup) -> Vec<DualIndex> {
        let n = group.dim();
        match *self {
            NuWindow::Box(r) => int_box(&vec![-r; n], &vec![r; n]).map(DualIndex).collect(),
            NuWindow::Disk(r) => group.dual_ball(&nalgebra::DVector::zeros(n), r + 1e-12),
        }
    }

    /// Every `Mν` with `M ∈ Π` and `ν` in the window stays in the window.
    pub fn check_stable(&self, group: &CrystalGroup) -> Result<(), SpectralError> {
        let indices = self.indices(group);
        let members: std::collections::HashSet<&DualIndex> = indices.iter().collect();
        for m in 0..group.order() {
            for nu in &indices {
                let image = group.dual_act(m, nu);
                if !members.contains(&image) {
                    return Err(SpectralError::UnstableWindow { m, nu: nu.clone() });
                }
            }
        }
        Ok(())
    }
}

/// One quadrature cell: the grid rectangle `(ix, iy)` intersected with `Ω`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub ix: usize,
    pub iy: usize,
    /// The full grid rectangle before clipping.
    pub min: P,
    pub max: P,
    /// Vertices of the clipped cell, counterclockwise.
    pub polygon: Vec<P>,
}

/// What identifies a grid; fields store it so that files can be checked
/// against the grid they are loaded onto.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDescriptor {
    pub group: String,
    pub omega0: [f64; 2],
    pub nodes_per_axis: usize,
    pub window: NuWindow,
    pub order: usize,
    pub nu_count: usize,
    pub node_count: usize,
}

/// Midpoint quadrature on `Ω` together with a truncated dual-lattice window:
/// the discretization of `Ω × Π × L*`.
#[derive(Clone, Debug)]
pub struct SpectralGrid {
    group: CrystalGroup,
    planar: Planar,
    dom: DirichletDomain,
    nodes_per_axis: usize,
    spacing: f64,
    window: NuWindow,
    nodes: Vec<P>,
    weights: Vec<f64>,
    cells: Vec<GridCell>,
    nu: Vec<DualIndex>,
    nu_lookup: HashMap<DualIndex, usize>,
}

/// [`make_grid_with_window`] with the box window `‖ν‖∞ ≤ r_nu`.
pub fn make_grid(
    group: &CrystalGroup,
    dom: &DirichletDomain,
    nodes_per_axis: usize,
    r_nu: i64,
) -> Result<Arc<SpectralGrid>, SpectralError> {
    make_grid_with_window(group, dom, nodes_per_axis, NuWindow::Box(r_nu))
}

/// Square cells of side `h = min(width, height)/nodes_per_axis` cover the
/// bounding box of `Ω`. Each cell is clipped against `Ω`; its node is the
/// centroid of the clipped cell and its weight the clipped area, so the
/// weights add up to `area(Ω)`. The window must be `Π`-stable.
pub fn make_grid_with_window(
    group: &CrystalGroup,
    dom: &DirichletDomain,
    nodes_per_axis: usize,
    window: NuWindow,
) -> Result<Arc<SpectralGrid>, SpectralError> {
    if nodes_per_axis < 2 {
        return Err(SpectralError::InvalidConfig(format!(
            "nodes_per_axis must be at least 2, got {nodes_per_axis}"
        )));
    }
    match window {
        NuWindow::Box(r) if r < 1 => {
            return Err(SpectralError::InvalidConfig(format!("R_ν must be at least 1, got {r}")))
        }
        NuWindow::Disk(r) if !(r > 0.0) => {
            return Err(SpectralError::InvalidConfig(format!("disk radius must be positive, got {r}")))
        }
        _ => {}
    }
    let planar = Planar::new(group)?;
    window.check_stable(group)?;

    let (lo, hi) = dom.bounding_box();
    let span = hi - lo;
    let h = span.x.min(span.y) / nodes_per_axis as f64;
    let nx = (span.x / h - 1e-9).ceil() as usize;
    let ny = (span.y / h - 1e-9).ceil() as usize;

    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut cells = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            let min = lo + P::new(ix as f64 * h, iy as f64 * h);
            let max = min + P::repeat(h);
            let mut poly = LabeledPolygon::rect(min, max);
            for (k, hp) in dom.halfplanes().iter().enumerate() {
                poly.clip(&hp.normal, hp.offset, k);
            }
            if poly.vertices.len() < 3 {
                continue;
            }
            let area = polygon_area(&poly.vertices);
            let Some(node) = polygon_centroid(&poly.vertices) else {
                continue;
            };
            if area <= 0.0 || dom.signed_distance(&node) < tol::BOUNDARY {
                continue;
            }
            nodes.push(node);
            weights.push(area);
            cells.push(GridCell {
                ix,
                iy,
                min,
                max,
                polygon: poly.vertices,
            });
        }
    }

    let nu = window.indices(group);
    let nu_lookup = nu.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
    Ok(Arc::new(SpectralGrid {
        group: group.clone(),
        planar,
        dom: dom.clone(),
        nodes_per_axis,
        spacing: h,
        window,
        nodes,
        weights,
        cells,
        nu,
        nu_lookup,
    }))
}

impl SpectralGrid {
    pub fn group(&self) -> &CrystalGroup {
        &self.group
    }

    pub fn planar(&self) -> &Planar {
        &self.planar
    }

    pub fn domain(&self) -> &DirichletDomain {
        &self.dom
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.nodes_per_axis
    }

    /// Side length of the grid squares.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn window(&self) -> NuWindow {
        self.window
    }

    pub fn nodes(&self) -> &[P] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn cells(&self) -> &[GridCell] {
        &self.cells
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn nu_indices(&self) -> &[DualIndex] {
        &self.nu
    }

    pub fn nu_count(&self) -> usize {
        self.nu.len()
    }

    pub fn nu_position(&self, nu: &DualIndex) -> Option<usize> {
        self.nu_lookup.get(nu).copied()
    }

    /// Length of a field on this grid: `|Π| · |window| · #nodes`.
    pub fn len(&self) -> usize {
        self.order() * self.nu_count() * self.node_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `Lω_g`, the node `g` carried to the tile `LΩ`.
    pub fn theta(&self, l: usize, g: usize) -> P {
        self.planar.point_group[l] * self.nodes[g]
    }

    /// `φ(ω_g, L, ν) = L(ω_g + ν)`.
    pub fn phi(&self, l: usize, k: usize, g: usize) -> P {
        self.planar.point_group[l] * (self.nodes[g] + self.planar.dual_vector(&self.nu[k]))
    }

    /// Position of the node equal to `omega`, if any (to `1e-9`).
    pub fn locate_node(&self, omega: &P) -> Option<usize> {
        let (lo, _) = self.dom.bounding_box();
        let rel = (omega - lo) / self.spacing;
        let (ix, iy) = (rel.x.floor(), rel.y.floor());
        if ix < 0.0 || iy < 0.0 {
            return None;
        }
        let (ix, iy) = (ix as usize, iy as usize);
        let cell = self
            .cells
            .binary_search_by(|c| (c.iy, c.ix).cmp(&(iy, ix)))
            .ok()?;
        ((self.nodes[cell] - omega).norm() <= 1e-9).then_some(cell)
    }

    pub fn descriptor(&self) -> GridDescriptor {
        let w = self.dom.omega0();
        GridDescriptor {
            group: self.group.name().to_string(),
            omega0: [w.x, w.y],
            nodes_per_axis: self.nodes_per_axis,
            window: self.window,
            order: self.order(),
            nu_count: self.nu_count(),
            node_count: self.node_count(),
        }
    }

    /// Two grids are compatible when their descriptors and nodes agree.
    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || (self.descriptor() == other.descriptor() && self.nodes == other.nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin_catalog;
    use crate::geometry::dirichlet_domain;

    fn pg_grid(nodes: usize, r: i64) -> Arc<SpectralGrid> {
        let pg = builtin_catalog().get("pg").unwrap().clone();
        let dom = dirichlet_domain(&pg, P::new(0.0, 0.25), 1.0).unwrap();
        make_grid(&pg, &dom, nodes, r).unwrap()
    }

    #[test]
    fn pg_grid_shape() {
        let grid = pg_grid(4, 1);
        assert_eq!(grid.node_count(), 32);
        assert_eq!(grid.nu_count(), 9);
        assert!((grid.total_weight() - 0.5).abs() < 1e-15);
        assert!(grid.weights().iter().all(|&w| (w - 1.0 / 64.0).abs() < 1e-15));
        for node in grid.nodes() {
            assert!(grid.domain().signed_distance(node) >= 1e-9);
        }
    }

    #[test]
    fn locate_every_node() {
        let grid = pg_grid(5, 1);
        for (g, node) in grid.nodes().iter().enumerate() {
            assert_eq!(grid.locate_node(node), Some(g));
        }
        assert_eq!(grid.locate_node(&P::new(0.0, 0.25)), None);
    }

    #[test]
    fn rejects_bad_config() {
        let pg = builtin_catalog().get("pg").unwrap().clone();
        let dom = dirichlet_domain(&pg, P::new(0.0, 0.25), 1.0).unwrap();
        assert!(matches!(make_grid(&pg, &dom, 1, 2), Err(SpectralError::InvalidConfig(_))));
        assert!(matches!(make_grid(&pg, &dom, 4, 0), Err(SpectralError::InvalidConfig(_))));
    }

    #[test]
    fn hexagonal_box_is_unstable() {
        let cat = builtin_catalog();
        let p6 = cat.get("p6").unwrap();
        let err = NuWindow::Box(2).check_stable(p6).unwrap_err();
        assert!(matches!(err, SpectralError::UnstableWindow { .. }));
        let window = NuWindow::for_group(p6, 2);
        assert!(matches!(window, NuWindow::Disk(_)));
        window.check_stable(p6).unwrap();
    }

    #[test]
    fn every_catalog_group_gets_a_grid() {
        for group in builtin_catalog().groups() {
            let omega0 = crate::geometry::find_generic_point(group, 3).unwrap();
            let dom = dirichlet_domain(group, omega0, 1.0).unwrap();
            let grid = make_grid_with_window(group, &dom, 8, NuWindow::for_group(group, 2)).unwrap();
            assert!(grid.node_count() > 0, "{}", group.name());
            assert!(
                (grid.total_weight() - dom.area()).abs() < 1e-9,
                "{}: weights {} area {}",
                group.name(),
                grid.total_weight(),
                dom.area()
            );
        }
    }
}

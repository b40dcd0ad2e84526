use std::sync::Arc;

use nalgebra::{DMatrix, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{FiberSubspace, Flavor, RangeError, StepRangeFunction};
use crate::spectral::{GridDescriptor, SpectralGrid};

#[derive(Serialize, Deserialize)]
struct CellEntry {
    /// Point-group index of the tile; 0 for on-Ω functions.
    l: usize,
    node: usize,
    /// Bounding rectangle of the cell in `Ω` coordinates.
    min: Vector2<f64>,
    max: Vector2<f64>,
    rank: usize,
    /// Column-major `re, im` pairs of the `|window| × rank` basis.
    basis: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RangeFile {
    grid: GridDescriptor,
    flavor: Flavor,
    cells: Vec<CellEntry>,
}

pub fn range_to_json(j: &StepRangeFunction) -> String {
    let grid = j.grid();
    let tiles = if j.is_on_omega() { 1 } else { grid.order() };
    let mut cells = Vec::with_capacity(j.values().len());
    for l in 0..tiles {
        for (g, cell) in grid.cells().iter().enumerate() {
            let b = j.at(l, g).basis();
            cells.push(CellEntry {
                l,
                node: g,
                min: cell.min,
                max: cell.max,
                rank: b.ncols(),
                basis: b.iter().flat_map(|v| [v.re, v.im]).collect(),
            });
        }
    }
    let file = RangeFile {
        grid: grid.descriptor(),
        flavor: j.flavor(),
        cells,
    };
    serde_json::to_string(&file).expect("range serialization cannot fail")
}

pub fn range_from_json(grid: &Arc<SpectralGrid>, text: &str) -> Result<StepRangeFunction, RangeError> {
    let file: RangeFile = serde_json::from_str(text).map_err(|e| RangeError::Format(e.to_string()))?;
    if file.grid != grid.descriptor() {
        return Err(RangeError::GridMismatch(format!(
            "file grid {:?}, expected {:?}",
            file.grid,
            grid.descriptor()
        )));
    }
    let tiles = if file.flavor == Flavor::OnOmega { 1 } else { grid.order() };
    let n = grid.node_count();
    if file.cells.len() != tiles * n {
        return Err(RangeError::Format(format!("expected {} cells, found {}", tiles * n, file.cells.len())));
    }
    let dim = grid.nu_count();
    let mut values: Vec<Option<FiberSubspace>> = vec![None; tiles * n];
    for c in file.cells {
        if c.l >= tiles || c.node >= n || c.basis.len() != 2 * dim * c.rank {
            return Err(RangeError::Format(format!("malformed cell (l = {}, node = {})", c.l, c.node)));
        }
        let entries: Vec<Complex64> = c.basis.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        values[c.l * n + c.node] = Some(FiberSubspace::from_orthonormal(DMatrix::from_vec(dim, c.rank, entries))?);
    }
    let values: Vec<FiberSubspace> = values
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| RangeError::Format("duplicate cells".into()))?;
    let on_omega = StepRangeFunction::on_omega(grid, |g| values[g].clone())?;
    match file.flavor {
        Flavor::OnOmega => Ok(on_omega),
        Flavor::PiInvariant => {
            let j = on_omega.pi_invariant_extension()?;
            check_same(&j, &values)?;
            Ok(j)
        }
        Flavor::Twisted => {
            let j = on_omega.twisted_extension()?;
            check_same(&j, &values)?;
            Ok(j)
        }
        Flavor::General => StepRangeFunction::general(grid, |l, g| values[l * n + g].clone()),
    }
}

/// A file claiming a structured flavor must match the structure.
fn check_same(j: &StepRangeFunction, values: &[FiberSubspace]) -> Result<(), RangeError> {
    let worst = j
        .values()
        .iter()
        .zip(values)
        .map(|(a, b)| a.distance(b))
        .fold(0.0, f64::max);
    if worst > 1e-9 {
        return Err(RangeError::Format(format!(
            "cells disagree with the {} flavor by a principal angle of {worst:.3e}",
            j.flavor()
        )));
    }
    Ok(())
}

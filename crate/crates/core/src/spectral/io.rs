use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GridDescriptor, SpectralError, SpectralGrid, TiledField};

/// Index order of the flattened values, slowest first.
pub const INDEX_ORDER: &str = "L,nu,node";

/// First bytes of a binary field file.
pub const MAGIC: &[u8; 8] = b"CSIFLD01";

#[derive(Serialize, Deserialize)]
struct FieldFile {
    grid: GridDescriptor,
    index_order: String,
    /// `re, im` pairs.
    values: Vec<f64>,
}

pub fn field_to_json(field: &TiledField) -> String {
    let file = FieldFile {
        grid: field.grid().descriptor(),
        index_order: INDEX_ORDER.to_string(),
        values: field.values().iter().flat_map(|v| [v.re, v.im]).collect(),
    };
    serde_json::to_string(&file).expect("field serialization cannot fail")
}

pub fn field_from_json(grid: &Arc<SpectralGrid>, text: &str) -> Result<TiledField, SpectralError> {
    let file: FieldFile = serde_json::from_str(text).map_err(|e| SpectralError::Format(e.to_string()))?;
    if file.index_order != INDEX_ORDER {
        return Err(SpectralError::Format(format!("unsupported index order {:?}", file.index_order)));
    }
    check_descriptor(grid, &file.grid)?;
    if file.values.len() % 2 != 0 {
        return Err(SpectralError::Format("odd number of interleaved values".into()));
    }
    let values = file.values.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
    TiledField::from_values(grid, values)
}

fn check_descriptor(grid: &SpectralGrid, found: &GridDescriptor) -> Result<(), SpectralError> {
    let expected = grid.descriptor();
    if *found != expected {
        return Err(SpectralError::GridMismatch(format!("file grid {found:?}, expected {expected:?}")));
    }
    Ok(())
}

/// Binary layout, all little-endian: the 8-byte [`MAGIC`], then `u32` counts
/// `|Π|`, `|window|`, `#nodes`, then one `f64` pair `re, im` per value in
/// [`INDEX_ORDER`].
pub fn field_to_bytes(field: &TiledField) -> Vec<u8> {
    let grid = field.grid();
    let mut out = Vec::with_capacity(20 + 16 * grid.len());
    out.extend_from_slice(MAGIC);
    for n in [grid.order(), grid.nu_count(), grid.node_count()] {
        out.extend_from_slice(&(n as u32).to_le_bytes());
    }
    for v in field.values() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

pub fn field_from_bytes(grid: &Arc<SpectralGrid>, bytes: &[u8]) -> Result<TiledField, SpectralError> {
    if bytes.len() < 20 || &bytes[..8] != MAGIC {
        return Err(SpectralError::Format("missing field file header".into()));
    }
    let count = |i: usize| u32::from_le_bytes(bytes[8 + 4 * i..12 + 4 * i].try_into().unwrap()) as usize;
    let shape = [count(0), count(1), count(2)];
    if shape != [grid.order(), grid.nu_count(), grid.node_count()] {
        return Err(SpectralError::GridMismatch(format!(
            "file shape {shape:?}, grid shape {:?}",
            [grid.order(), grid.nu_count(), grid.node_count()]
        )));
    }
    let body = &bytes[20..];
    if body.len() != 16 * grid.len() {
        return Err(SpectralError::Format(format!("expected {} value bytes, found {}", 16 * grid.len(), body.len())));
    }
    let f = |c: &[u8]| f64::from_le_bytes(c.try_into().unwrap());
    let values = body.chunks_exact(16).map(|c| Complex64::new(f(&c[..8]), f(&c[8..]))).collect();
    TiledField::from_values(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin_catalog;
    use crate::geometry::dirichlet_domain;
    use crate::spectral::make_grid;
    use nalgebra::Vector2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(nodes: usize) -> Arc<SpectralGrid> {
        let pg = builtin_catalog().get("pg").unwrap().clone();
        let dom = dirichlet_domain(&pg, Vector2::new(0.0, 0.25), 1.0).unwrap();
        make_grid(&pg, &dom, nodes, 1).unwrap()
    }

    #[test]
    fn json_round_trip_is_exact() {
        let g = grid(4);
        let xi = TiledField::random(&g, &mut ChaCha8Rng::seed_from_u64(2));
        let back = field_from_json(&g, &field_to_json(&xi)).unwrap();
        assert_eq!(back.values(), xi.values());
    }

    #[test]
    fn binary_round_trip_is_exact() {
        let g = grid(4);
        let xi = TiledField::random(&g, &mut ChaCha8Rng::seed_from_u64(2));
        let bytes = field_to_bytes(&xi);
        assert_eq!(&bytes[..8], MAGIC);
        assert_eq!(field_from_bytes(&g, &bytes).unwrap().values(), xi.values());
    }

    #[test]
    fn other_grid_rejected() {
        let xi = TiledField::zeros(&grid(4));
        let other = grid(5);
        assert!(matches!(field_from_json(&other, &field_to_json(&xi)), Err(SpectralError::GridMismatch(_))));
        assert!(matches!(field_from_bytes(&other, &field_to_bytes(&xi)), Err(SpectralError::GridMismatch(_))));
    }
}

use std::fmt;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use serde::de::DeserializeOwned;
use serde_json::{Map, Value};
use thiserror::Error;

use super::CrystalGroup;

const BUILTIN: &str = include_str!("../../catalog/wallpaper.json");

/// Which structural property of a catalog entry failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariant {
    Basis,
    Orthogonality,
    IdentityFirst,
    Duplicate,
    GroupClosure,
    LatticePreservation,
    CrossSection,
    Cocycle,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::Basis => "invertible-basis",
            Invariant::Orthogonality => "orthogonality",
            Invariant::IdentityFirst => "identity-first",
            Invariant::Duplicate => "distinct-elements",
            Invariant::GroupClosure => "group-closure",
            Invariant::LatticePreservation => "lattice-preservation",
            Invariant::CrossSection => "cross-section",
            Invariant::Cocycle => "cocycle",
        })
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("schema error in group `{group}`, field `{field}`: {reason}")]
    Schema {
        group: String,
        field: String,
        reason: String,
    },
    #[error("group `{group}` violates the {invariant} invariant: {detail}")]
    Invariant {
        group: String,
        invariant: Invariant,
        detail: String,
    },
}

/// An ordered collection of validated crystal groups.
#[derive(Clone, Debug)]
pub struct Catalog {
    groups: Vec<CrystalGroup>,
}

impl Catalog {
    pub fn groups(&self) -> &[CrystalGroup] {
        &self.groups
    }

    pub fn get(&self, name: &str) -> Option<&CrystalGroup> {
        self.groups.iter().find(|g| g.name() == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.groups.iter().map(|g| g.name())
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

impl IntoIterator for Catalog {
    type Item = CrystalGroup;
    type IntoIter = std::vec::IntoIter<CrystalGroup>;
    fn into_iter(self) -> Self::IntoIter {
        self.groups.into_iter()
    }
}

/// The 17 plane crystallographic groups shipped with the crate.
pub fn builtin_catalog() -> Catalog {
    parse_catalog(BUILTIN).expect("built-in catalog is valid")
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_catalog(&text)
}

/// Parses a catalog document: a JSON array of objects
/// `{name, n, basis, point_group, cross_section, symmorphic}` where matrices
/// are row-major flat arrays.
pub fn parse_catalog(text: &str) -> Result<Catalog, CatalogError> {
    let schema = |field: &str, reason: String| CatalogError::Schema {
        group: "<catalog>".into(),
        field: field.into(),
        reason,
    };
    if text.trim().is_empty() {
        return Err(schema("<root>", "catalog file is empty".into()));
    }
    let root: Value =
        serde_json::from_str(text).map_err(|e| schema("<root>", format!("invalid JSON: {e}")))?;
    let entries = root
        .as_array()
        .ok_or_else(|| schema("<root>", "expected an array of groups".into()))?;
    if entries.is_empty() {
        return Err(schema("<root>", "catalog contains no groups".into()));
    }
    let groups = entries
        .iter()
        .enumerate()
        .map(|(i, entry)| parse_entry(i, entry))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, g) in groups.iter().enumerate() {
        if groups[..i].iter().any(|h| h.name() == g.name()) {
            return Err(CatalogError::Schema {
                group: g.name().into(),
                field: "name".into(),
                reason: "duplicate group name".into(),
            });
        }
    }
    Ok(Catalog { groups })
}

fn parse_entry(index: usize, entry: &Value) -> Result<CrystalGroup, CatalogError> {
    let obj = entry.as_object().ok_or_else(|| CatalogError::Schema {
        group: format!("#{index}"),
        field: "<entry>".into(),
        reason: "expected an object".into(),
    })?;
    let name: String = field(obj, &format!("#{index}"), "name")?;
    let n: usize = field(obj, &name, "n")?;
    let basis: Vec<f64> = field(obj, &name, "basis")?;
    let point_group: Vec<Vec<f64>> = field(obj, &name, "point_group")?;
    let cross_section: Vec<Vec<f64>> = field(obj, &name, "cross_section")?;
    let symmorphic: bool = field(obj, &name, "symmorphic")?;

    for key in obj.keys() {
        if !["name", "n", "basis", "point_group", "cross_section", "symmorphic"].contains(&key.as_str()) {
            return Err(CatalogError::Schema {
                group: name,
                field: key.clone(),
                reason: "unknown field".into(),
            });
        }
    }
    let bad = |field: &str, reason: String| CatalogError::Schema {
        group: name.clone(),
        field: field.into(),
        reason,
    };
    if n == 0 {
        return Err(bad("n", "dimension must be positive".into()));
    }
    if basis.len() != n * n {
        return Err(bad("basis", format!("expected {} entries, found {}", n * n, basis.len())));
    }
    if point_group.is_empty() {
        return Err(bad("point_group", "must contain at least the identity".into()));
    }
    if let Some((i, m)) = point_group.iter().enumerate().find(|(_, m)| m.len() != n * n) {
        return Err(bad("point_group", format!("matrix {i} has {} entries, expected {}", m.len(), n * n)));
    }
    if cross_section.len() != point_group.len() {
        return Err(bad(
            "cross_section",
            format!("{} vectors for {} point-group elements", cross_section.len(), point_group.len()),
        ));
    }
    if let Some((i, v)) = cross_section.iter().enumerate().find(|(_, v)| v.len() != n) {
        return Err(bad("cross_section", format!("vector {i} has length {}, expected {n}", v.len())));
    }
    let all = basis
        .iter()
        .chain(point_group.iter().flatten())
        .chain(cross_section.iter().flatten());
    if all.into_iter().any(|v| !v.is_finite()) {
        return Err(bad("<numbers>", "non-finite value".into()));
    }

    CrystalGroup::new(
        name.clone(),
        DMatrix::from_row_slice(n, n, &basis),
        point_group
            .iter()
            .map(|m| DMatrix::from_row_slice(n, n, m))
            .collect(),
        cross_section
            .iter()
            .map(|v| DVector::from_column_slice(v))
            .collect(),
        symmorphic,
    )
}

fn field<T: DeserializeOwned>(obj: &Map<String, Value>, group: &str, name: &str) -> Result<T, CatalogError> {
    let value = obj.get(name).ok_or_else(|| CatalogError::Schema {
        group: group.into(),
        field: name.into(),
        reason: "missing".into(),
    })?;
    serde_json::from_value(value.clone()).map_err(|e| CatalogError::Schema {
        group: group.into(),
        field: name.into(),
        reason: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_required_groups() {
        let cat = builtin_catalog();
        assert_eq!(cat.len(), 17);
        for name in ["p1", "p2", "pm", "pg", "pmm"] {
            assert!(cat.get(name).is_some(), "{name} missing");
        }
        let pg = cat.get("pg").unwrap();
        assert_eq!(pg.order(), 2);
        assert_eq!(pg.section(1).as_slice(), &[0.5, 0.0]);
        assert_eq!(pg.point(1), &DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        assert_eq!(pg.basis(), &DMatrix::<f64>::identity(2, 2));
        assert!(!pg.is_symmorphic());
    }

    #[test]
    fn empty_file_is_a_schema_error() {
        assert!(matches!(parse_catalog(""), Err(CatalogError::Schema { .. })));
        assert!(matches!(parse_catalog("[]"), Err(CatalogError::Schema { .. })));
    }

    #[test]
    fn missing_field_is_named() {
        let err = parse_catalog(r#"[{"name": "x", "n": 2, "point_group": [], "cross_section": [], "symmorphic": true}]"#)
            .unwrap_err();
        match err {
            CatalogError::Schema { group, field, .. } => {
                assert_eq!(group, "x");
                assert_eq!(field, "basis");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn unclosed_point_group_names_group_closure() {
        // {id, 90° rotation} without its square.
        let text = r#"[{"name": "broken", "n": 2, "basis": [1,0,0,1],
            "point_group": [[1,0,0,1],[0,-1,1,0]],
            "cross_section": [[0,0],[0,0]], "symmorphic": true}]"#;
        match parse_catalog(text).unwrap_err() {
            CatalogError::Invariant { group, invariant, .. } => {
                assert_eq!(group, "broken");
                assert_eq!(invariant, Invariant::GroupClosure);
                assert_eq!(invariant.to_string(), "group-closure");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn bad_cross_section_fails_cocycle() {
        // glide by a quarter: σ-glide squared gives (1/2, 0), not a lattice vector
        let text = r#"[{"name": "badpg", "n": 2, "basis": [1,0,0,1],
            "point_group": [[1,0,0,1],[1,0,0,-1]],
            "cross_section": [[0,0],[0.25,0]], "symmorphic": false}]"#;
        match parse_catalog(text).unwrap_err() {
            CatalogError::Invariant { invariant, .. } => assert_eq!(invariant, Invariant::Cocycle),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn rotation_off_lattice_is_rejected() {
        let (s, c) = 30f64.to_radians().sin_cos();
        let text = format!(
            r#"[{{"name": "r30", "n": 2, "basis": [1,0,0,1],
            "point_group": [[1,0,0,1],[{c},{m},{s},{c}]],
            "cross_section": [[0,0],[0,0]], "symmorphic": true}}]"#,
            m = -s
        );
        let err = parse_catalog(&text).unwrap_err();
        assert!(matches!(err, CatalogError::Invariant { .. }), "{err}");
    }
}

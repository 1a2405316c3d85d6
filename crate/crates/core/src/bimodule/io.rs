use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BimoduleError, GridModule, GridModuleBuilder, GridPoint, GridShape};
use crate::exactfield::{FieldSpec, Matrix};

/// The JSON interchange form of a [`GridModule`].
///
/// `dims[y - 1][x - 1]` is the dimension at `(x, y)`. Edge maps are keyed by
/// their source point `"x,y"`. A missing key stands for a zero map and is only
/// accepted when one endpoint has dimension 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDocument {
    pub p: u32,
    pub nx: usize,
    pub ny: usize,
    pub dims: Vec<Vec<usize>>,
    #[serde(default)]
    pub hmaps: BTreeMap<String, Vec<Vec<u64>>>,
    #[serde(default)]
    pub vmaps: BTreeMap<String, Vec<Vec<u64>>>,
}

impl From<&GridModule> for ModuleDocument {
    fn from(m: &GridModule) -> Self {
        let shape = m.shape();
        let dims = (1..=shape.ny)
            .map(|y| (1..=shape.nx).map(|x| m.dim(GridPoint::new(x, y))).collect())
            .collect();
        let mut hmaps = BTreeMap::new();
        let mut vmaps = BTreeMap::new();
        for p in shape.points() {
            for (map, out) in [(m.hmap(p), &mut hmaps), (m.vmap(p), &mut vmaps)] {
                if let Some(a) = map.filter(|a| a.rows() > 0 && a.cols() > 0) {
                    let rows = a
                        .to_rows()
                        .into_iter()
                        .map(|r| r.into_iter().map(u64::from).collect())
                        .collect();
                    out.insert(format!("{},{}", p.x, p.y), rows);
                }
            }
        }
        ModuleDocument {
            p: m.field().p(),
            nx: shape.nx,
            ny: shape.ny,
            dims,
            hmaps,
            vmaps,
        }
    }
}

impl TryFrom<ModuleDocument> for GridModule {
    type Error = BimoduleError;

    fn try_from(doc: ModuleDocument) -> Result<Self, Self::Error> {
        let field = FieldSpec::new(doc.p)?;
        let shape = GridShape::new(doc.nx, doc.ny)?;
        if doc.dims.len() != shape.ny {
            return Err(BimoduleError::Parse(format!(
                "dims: expected {} rows, found {}",
                shape.ny,
                doc.dims.len()
            )));
        }
        let mut dims = Vec::with_capacity(shape.len());
        for (y, row) in doc.dims.iter().enumerate() {
            if row.len() != shape.nx {
                return Err(BimoduleError::Parse(format!(
                    "dims[{y}]: expected {} entries, found {}",
                    shape.nx,
                    row.len()
                )));
            }
            dims.extend_from_slice(row);
        }
        let mut b = GridModuleBuilder::new(shape, field).dims(dims.clone());
        for (name, maps, dx, dy) in [("hmaps", &doc.hmaps, 1, 0), ("vmaps", &doc.vmaps, 0, 1)] {
            for (key, rows) in maps {
                let p = parse_key(key)
                    .filter(|p| shape.contains(*p) && shape.contains(GridPoint::new(p.x + dx, p.y + dy)))
                    .ok_or_else(|| BimoduleError::Parse(format!("{name}: bad edge key {key:?}")))?;
                let q = GridPoint::new(p.x + dx, p.y + dy);
                let (r, c) = (dims[shape.index(q)], dims[shape.index(p)]);
                if rows.len() != r {
                    return Err(BimoduleError::Parse(format!(
                        "{name}[{key:?}]: expected {r} rows, found {}",
                        rows.len()
                    )));
                }
                let m = Matrix::from_rows(field, c, rows)
                    .map_err(|e| BimoduleError::Parse(format!("{name}[{key:?}]: {e}")))?;
                if dx == 1 {
                    b.set_hmap(p, m);
                } else {
                    b.set_vmap(p, m);
                }
            }
            for p in shape.points() {
                let q = GridPoint::new(p.x + dx, p.y + dy);
                if shape.contains(q)
                    && dims[shape.index(p)] > 0
                    && dims[shape.index(q)] > 0
                    && !maps.contains_key(&format!("{},{}", p.x, p.y))
                {
                    return Err(BimoduleError::Parse(format!(
                        "{name}: missing map at \"{},{}\" between nonzero spaces",
                        p.x, p.y
                    )));
                }
            }
        }
        b.build()
    }
}

fn parse_key(key: &str) -> Option<GridPoint> {
    let (x, y) = key.split_once(',')?;
    Some(GridPoint::new(x.trim().parse().ok()?, y.trim().parse().ok()?))
}

/// Parses a module from its JSON document and validates it.
pub fn load(text: &str) -> Result<GridModule, BimoduleError> {
    let doc: ModuleDocument =
        serde_json::from_str(text).map_err(|e| BimoduleError::Parse(e.to_string()))?;
    GridModule::try_from(doc)
}

pub fn save(m: &GridModule) -> String {
    serde_json::to_string_pretty(&ModuleDocument::from(m)).expect("document serializes")
}

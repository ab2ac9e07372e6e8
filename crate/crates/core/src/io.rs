//! JSON module and report files.
//!
//! Module files list nonzero dimensions and nonzero step matrices only.
//! Writing is canonical: entries sorted by point then axis, matrix entries as
//! centered representatives in `(−p/2, p/2]`, so that reading a file over a
//! different prime keeps small signed entries meaningful.

use serde::{Deserialize, Serialize};

use crate::blocks::BlockJson;
use crate::decomp::{Decomposition, Method};
use crate::error::{Error, Result};
use crate::gridmod::{GridModule, GridShape, Point, Violation};
use crate::koszul::{ProfileLevel, Witness};
use crate::linalg::{Mat, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimEntry {
    pub point: Point,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub point: Point,
    pub axis: usize,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub field: u32,
    pub shape: Vec<usize>,
    #[serde(default)]
    pub dims: Vec<DimEntry>,
    #[serde(default)]
    pub maps: Vec<MapEntry>,
}

impl ModuleFile {
    pub fn from_module(m: &GridModule) -> ModuleFile {
        let shape = m.shape();
        let f = m.field();
        let mut dims = Vec::new();
        let mut maps = Vec::new();
        for idx in 0..shape.len() {
            let point = shape.point(idx);
            if m.dim(idx) > 0 {
                dims.push(DimEntry {
                    point: point.clone(),
                    dim: m.dim(idx),
                });
            }
            for axis in 0..shape.naxes() {
                let Some(step) = m.step(idx, axis) else {
                    continue;
                };
                if step.rows() == 0 || step.cols() == 0 || step.is_zero() {
                    continue;
                }
                let matrix = (0..step.rows())
                    .map(|r| step.row(r).iter().map(|&x| f.centered(x)).collect())
                    .collect();
                maps.push(MapEntry {
                    point: point.clone(),
                    axis,
                    matrix,
                });
            }
        }
        ModuleFile {
            field: f.characteristic(),
            shape: shape.sizes().to_vec(),
            dims,
            maps,
        }
    }

    /// Builds the module, reducing entries modulo `field` (default: the
    /// file's own field). Commutativity is not checked here.
    pub fn to_module(&self, field: Option<PrimeField>) -> Result<GridModule> {
        let f = match field {
            Some(f) => f,
            None => {
                PrimeField::new(self.field).map_err(|e| Error::Schema(format!("field: {e}")))?
            }
        };
        let shape = GridShape::new(self.shape.clone()).map_err(|e| Error::Schema(e.to_string()))?;
        let mut dims = vec![0; shape.len()];
        let mut seen = vec![false; shape.len()];
        for e in &self.dims {
            check_point(&shape, &e.point)?;
            let idx = shape.index(&e.point);
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::Schema(format!(
                    "duplicate dim entry at {:?}",
                    e.point
                )));
            }
            dims[idx] = e.dim;
        }
        let mut m = GridModule::with_dims(shape.clone(), f, dims)?;
        let mut seen = vec![false; shape.len() * shape.naxes()];
        for e in &self.maps {
            check_point(&shape, &e.point)?;
            if e.axis >= shape.naxes() {
                return Err(Error::Schema(format!(
                    "axis {} out of range at {:?}",
                    e.axis, e.point
                )));
            }
            let idx = shape.index(&e.point);
            if std::mem::replace(&mut seen[idx * shape.naxes() + e.axis], true) {
                return Err(Error::Schema(format!(
                    "duplicate map entry at {:?} along axis {}",
                    e.point, e.axis
                )));
            }
            let Some(target) = shape.succ(idx, e.axis) else {
                return Err(Error::Schema(format!(
                    "map at {:?} along axis {} leaves the grid",
                    e.point, e.axis
                )));
            };
            let (rows, cols) = (m.dim(target), m.dim(idx));
            if e.matrix.len() != rows || e.matrix.iter().any(|r| r.len() != cols) {
                return Err(Error::Schema(format!(
                    "map at {:?} along axis {} must be {rows}x{cols}",
                    e.point, e.axis
                )));
            }
            let mat = if rows == 0 {
                Mat::zeros(0, cols)
            } else {
                Mat::from_rows(f, &e.matrix, cols)?
            };
            m.set_step(idx, e.axis, mat)?;
        }
        Ok(m)
    }

    pub fn parse(text: &str) -> Result<ModuleFile> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("module files serialize");
        s.push('\n');
        s
    }
}

fn check_point(shape: &GridShape, p: &[usize]) -> Result<()> {
    if !shape.contains(p) {
        return Err(Error::Schema(format!(
            "point {p:?} outside the grid {:?}",
            shape.sizes()
        )));
    }
    Ok(())
}

pub fn read_module(text: &str, field: Option<PrimeField>) -> Result<GridModule> {
    ModuleFile::parse(text)?.to_module(field)
}

pub fn write_module(m: &GridModule) -> String {
    ModuleFile::from_module(m).to_json()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictTag {
    Valid,
    Invalid,
    BlockDecomposable,
    NotBlockDecomposable,
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationJson {
    pub point: Point,
    pub axes: [usize; 2],
    #[serde(rename = "viaFirst")]
    pub via_first: Vec<Vec<i64>>,
    #[serde(rename = "viaSecond")]
    pub via_second: Vec<Vec<i64>>,
}

impl ViolationJson {
    pub fn new(v: &Violation, f: PrimeField) -> Self {
        let rows = |m: &Mat| -> Vec<Vec<i64>> {
            (0..m.rows())
                .map(|r| m.row(r).iter().map(|&x| f.centered(x)).collect())
                .collect()
        };
        ViolationJson {
            point: v.point.clone(),
            axes: [v.i, v.j],
            via_first: rows(&v.via_i),
            via_second: rows(&v.via_j),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandJson {
    pub block: BlockJson,
    pub multiplicity: usize,
}

/// Per-point dimensions of a residue summand, as sparse entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueJson {
    pub dims: Vec<DimEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Report {
    pub verdict: Option<VerdictTag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<ViolationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<ProfileLevel>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Vec<SummandJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<Vec<ResidueJson>>,
    /// Wall-clock milliseconds; only present when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<f64>,
}

impl Report {
    pub fn with_verdict(v: VerdictTag) -> Self {
        Report {
            verdict: Some(v),
            ..Default::default()
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

pub fn summands_json(d: &Decomposition) -> Vec<SummandJson> {
    d.summands
        .iter()
        .map(|(b, &k)| SummandJson {
            block: b.to_json(),
            multiplicity: k,
        })
        .collect()
}

pub fn residue_json(parts: &[GridModule]) -> Vec<ResidueJson> {
    parts
        .iter()
        .map(|m| ResidueJson {
            dims: ModuleFile::from_module(m).dims,
        })
        .collect()
}

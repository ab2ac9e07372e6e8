//! Bundled modules on the 2x2x2 cube.
//!
//! Axis `i` of the grid corresponds to the element `i + 1` of `{1, 2, 3}`, so
//! the vertex `{1, 3}` is the point `(1, 0, 1)`.

use crate::error::{Error, Result};
use crate::gridmod::{interval_module, GridModule, GridShape, IntervalSet, Point};
use crate::linalg::{Mat, PrimeField};

pub const NAMES: [&str; 3] = ["ex37", "ex38", "claw-demo"];

/// Indecomposable, exact on every face, but with homology in the middle of
/// the cube's complex: `k²` at the minimum mapping onto the three atoms by
/// `[0 1]`, `[1 0]` and `[1 1]`.
pub fn ex37(field: PrimeField) -> GridModule {
    let shape = GridShape::cube(3);
    let mut dims = vec![0; 8];
    let origin = shape.index(&[0, 0, 0]);
    dims[origin] = 2;
    for axis in 0..3 {
        dims[shape.succ(origin, axis).unwrap()] = 1;
    }
    let mut m = GridModule::with_dims(shape, field, dims).unwrap();
    let rows: [[i64; 2]; 3] = [[0, 1], [1, 0], [1, 1]];
    for (axis, row) in rows.iter().enumerate() {
        let map = Mat::from_rows(field, &[row.to_vec()], 2).unwrap();
        m.set_step(origin, axis, map).unwrap();
    }
    m
}

/// Support of the interval in [`ex38`]: `{2}, {3}, {1,3}, {2,3}`.
pub fn ex38_support() -> Vec<Point> {
    vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1]]
}

/// An interval module that is not a block: exact on the cube, but not on
/// its front face.
pub fn ex38(field: PrimeField) -> GridModule {
    let shape = GridShape::cube(3);
    let set = IntervalSet::new(&shape, &ex38_support()).unwrap();
    interval_module(&shape, &set, field)
}

/// The constant module on the cube, the simplest input for the claw pipeline.
pub fn claw_demo(field: PrimeField) -> GridModule {
    let shape = GridShape::cube(3);
    let all: Vec<Point> = shape.points().collect();
    interval_module(&shape, &IntervalSet::new(&shape, &all).unwrap(), field)
}

pub fn by_name(name: &str, field: PrimeField) -> Result<GridModule> {
    match name {
        "ex37" => Ok(ex37(field)),
        "ex38" => Ok(ex38(field)),
        "claw-demo" => Ok(claw_demo(field)),
        other => Err(Error::Schema(format!(
            "unknown fixture {other:?}; expected one of {}",
            NAMES.join(", ")
        ))),
    }
}

//! Persistence modules over finite grids `{0..s_1} x ... x {0..s_n}`.
//!
//! A module stores one vector-space dimension per grid point and one matrix
//! per unit step `p -> p + e_i`. Longer structure maps are composites of unit
//! steps; commutativity makes them path independent.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::koszul::Cube;
use crate::linalg::{complement_basis, Mat, PrimeField};
use crate::rep::{Arrow, Rep};

/// Grid coordinates, one per axis.
pub type Point = Vec<usize>;

/// Axis lengths of a finite grid. Points are indexed in lexicographic order
/// (axis 0 most significant).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridShape {
    sizes: Vec<usize>,
}

impl GridShape {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::InvalidShape(sizes));
        }
        Ok(GridShape { sizes })
    }

    /// The grid `{0,1}^k`; `k = 0` gives the one-point grid.
    pub fn cube(k: usize) -> Self {
        GridShape { sizes: vec![2; k] }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn naxes(&self) -> usize {
        self.sizes.len()
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when every axis has exactly two coordinates.
    pub fn is_binary_cube(&self) -> bool {
        self.sizes.iter().all(|&s| s == 2)
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.sizes[axis + 1..].iter().product()
    }

    pub fn contains(&self, p: &[usize]) -> bool {
        p.len() == self.sizes.len() && p.iter().zip(&self.sizes).all(|(&c, &s)| c < s)
    }

    pub fn check(&self, p: &[usize]) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                point: p.to_vec(),
                sizes: self.sizes.clone(),
            })
        }
    }

    pub fn index(&self, p: &[usize]) -> usize {
        debug_assert!(self.contains(p));
        p.iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&c, &s)| acc * s + c)
    }

    pub fn point(&self, mut idx: usize) -> Point {
        let mut p = vec![0; self.sizes.len()];
        for (c, &s) in p.iter_mut().zip(&self.sizes).rev() {
            *c = idx % s;
            idx /= s;
        }
        p
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// Index of `p + e_axis`, if it lies in the grid.
    pub fn succ(&self, idx: usize, axis: usize) -> Option<usize> {
        let stride = self.stride(axis);
        if (idx / stride) % self.sizes[axis] + 1 < self.sizes[axis] {
            Some(idx + stride)
        } else {
            None
        }
    }

    /// Index of `p - e_axis`, if it lies in the grid.
    pub fn pred(&self, idx: usize, axis: usize) -> Option<usize> {
        let stride = self.stride(axis);
        if !(idx / stride).is_multiple_of(self.sizes[axis]) {
            Some(idx - stride)
        } else {
            None
        }
    }

    pub fn coord(&self, idx: usize, axis: usize) -> usize {
        (idx / self.stride(axis)) % self.sizes[axis]
    }

    pub fn max_point(&self) -> Point {
        self.sizes.iter().map(|s| s - 1).collect()
    }

    /// The order-reversing involution `q -> s - 1 - q`.
    pub fn reverse(&self, p: &[usize]) -> Point {
        p.iter()
            .zip(&self.sizes)
            .map(|(&c, &s)| s - 1 - c)
            .collect()
    }

    pub fn reverse_index(&self, idx: usize) -> usize {
        self.len() - 1 - idx
    }
}

/// Product order on points.
pub fn leq(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// A commutativity failure: the two composites around the square spanned by
/// axes `i < j` at `point` differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub point: Point,
    pub i: usize,
    pub j: usize,
    /// `step(p + e_i, j) * step(p, i)`
    pub via_i: Mat,
    /// `step(p + e_j, i) * step(p, j)`
    pub via_j: Mat,
}

/// A persistence module over a finite grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridModule {
    shape: GridShape,
    field: PrimeField,
    dims: Vec<usize>,
    /// `steps[idx * n + axis]`; a `0 x dim` placeholder where `p + e_axis` leaves the grid.
    steps: Vec<Mat>,
}

impl GridModule {
    pub fn zero(shape: GridShape, field: PrimeField) -> Self {
        let dims = vec![0; shape.len()];
        GridModule::with_dims(shape, field, dims).expect("dims match the shape")
    }

    /// A module with the given pointwise dimensions and zero structure maps.
    pub fn with_dims(shape: GridShape, field: PrimeField, dims: Vec<usize>) -> Result<Self> {
        if dims.len() != shape.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} dimensions for {} grid points",
                dims.len(),
                shape.len()
            )));
        }
        let n = shape.naxes();
        let mut steps = Vec::with_capacity(dims.len() * n);
        for idx in 0..dims.len() {
            for axis in 0..n {
                let rows = shape.succ(idx, axis).map_or(0, |t| dims[t]);
                steps.push(Mat::zeros(rows, dims[idx]));
            }
        }
        Ok(GridModule {
            shape,
            field,
            dims,
            steps,
        })
    }

    /// Replaces the unit step out of point `idx` along `axis`.
    pub fn set_step(&mut self, idx: usize, axis: usize, map: Mat) -> Result<()> {
        let n = self.shape.naxes();
        if axis >= n {
            return Err(Error::AxisOutOfRange { axis, naxes: n });
        }
        let Some(target) = self.shape.succ(idx, axis) else {
            return Err(Error::OutOfBounds {
                point: {
                    let mut p = self.shape.point(idx);
                    p[axis] += 1;
                    p
                },
                sizes: self.shape.sizes.clone(),
            });
        };
        let expected = (self.dims[target], self.dims[idx]);
        if map.shape() != expected {
            return Err(Error::DimensionMismatch(format!(
                "step at {:?} along axis {} must be {}x{}, got {}x{}",
                self.shape.point(idx),
                axis,
                expected.0,
                expected.1,
                map.rows(),
                map.cols()
            )));
        }
        self.steps[idx * n + axis] = map;
        Ok(())
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, idx: usize) -> usize {
        self.dims[idx]
    }

    pub fn dim_at(&self, p: &[usize]) -> usize {
        self.dims[self.shape.index(p)]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Unit step out of `idx` along `axis`, or `None` at the grid boundary.
    pub fn step(&self, idx: usize, axis: usize) -> Option<&Mat> {
        self.shape
            .succ(idx, axis)
            .map(|_| &self.steps[idx * self.shape.naxes() + axis])
    }

    /// The structure map `M(from <= to)` as a composite of unit steps
    /// (axis 0 first).
    pub fn composite(&self, from: &[usize], to: &[usize]) -> Result<Mat> {
        self.shape.check(from)?;
        self.shape.check(to)?;
        if !leq(from, to) {
            return Err(Error::DimensionMismatch(format!(
                "{from:?} is not below {to:?}"
            )));
        }
        let mut idx = self.shape.index(from);
        let mut acc = Mat::identity(self.dims[idx]);
        for axis in 0..self.shape.naxes() {
            for _ in from[axis]..to[axis] {
                let s = self.step(idx, axis).expect("inside the grid");
                acc = s.mul(self.field, &acc);
                idx = self.shape.succ(idx, axis).expect("inside the grid");
            }
        }
        Ok(acc)
    }

    /// All commutativity violations, in lexicographic order of `(point, i, j)`.
    pub fn validate(&self) -> Vec<Violation> {
        let f = self.field;
        let n = self.shape.naxes();
        let mut out = Vec::new();
        for idx in 0..self.shape.len() {
            for i in 0..n {
                let Some(pi) = self.shape.succ(idx, i) else {
                    continue;
                };
                for j in i + 1..n {
                    let Some(pj) = self.shape.succ(idx, j) else {
                        continue;
                    };
                    let via_i = self.step(pi, j).unwrap().mul(f, self.step(idx, i).unwrap());
                    let via_j = self.step(pj, i).unwrap().mul(f, self.step(idx, j).unwrap());
                    if via_i != via_j {
                        out.push(Violation {
                            point: self.shape.point(idx),
                            i,
                            j,
                            via_i,
                            via_j,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidModule(format!(
                "squares at {:?} along axes {} and {} do not commute",
                v.point, v.i, v.j
            ))),
        }
    }

    pub fn direct_sum(&self, other: &GridModule) -> Result<GridModule> {
        if self.shape != other.shape || self.field != other.field {
            return Err(Error::Incompatible);
        }
        let dims = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        let steps = self
            .steps
            .iter()
            .zip(&other.steps)
            .map(|(a, b)| a.block_diag(b))
            .collect();
        Ok(GridModule {
            shape: self.shape.clone(),
            field: self.field,
            dims,
            steps,
        })
    }

    /// Direct sum of a list of modules over `shape`.
    pub fn direct_sum_all<'a>(
        shape: &GridShape,
        field: PrimeField,
        parts: impl IntoIterator<Item = &'a GridModule>,
    ) -> Result<GridModule> {
        let mut acc = GridModule::zero(shape.clone(), field);
        for p in parts {
            acc = acc.direct_sum(p)?;
        }
        Ok(acc)
    }

    /// Pointwise dual over the order-reversed grid.
    pub fn dual(&self) -> GridModule {
        let shape = &self.shape;
        let dims: Vec<usize> = (0..shape.len())
            .map(|q| self.dims[shape.reverse_index(q)])
            .collect();
        let mut out = GridModule::with_dims(shape.clone(), self.field, dims).unwrap();
        for q in 0..shape.len() {
            for axis in 0..shape.naxes() {
                if let Some(t) = shape.succ(q, axis) {
                    let src = shape.reverse_index(t);
                    let m = self.step(src, axis).unwrap().transpose();
                    out.set_step(q, axis, m).unwrap();
                }
            }
        }
        out
    }

    /// Restriction to the `2^k` vertices of a cube, with composite structure maps.
    pub fn restrict_cube(&self, cube: &Cube) -> Result<GridModule> {
        cube.check_in(&self.shape)?;
        let k = cube.dim();
        let local = GridShape::cube(k);
        let dims = (0..local.len())
            .map(|l| self.dim_at(&cube.vertex(&local.point(l))))
            .collect();
        let mut out = GridModule::with_dims(local.clone(), self.field, dims)?;
        for l in 0..local.len() {
            let lp = local.point(l);
            for j in 0..k {
                if lp[j] == 0 {
                    let mut up = lp.clone();
                    up[j] = 1;
                    let map = self.composite(&cube.vertex(&lp), &cube.vertex(&up))?;
                    out.set_step(l, j, map)?;
                }
            }
        }
        Ok(out)
    }

    /// Restriction to an arbitrary box `[lo, hi]`, re-indexed from the origin.
    pub fn restrict_box(&self, lo: &[usize], hi: &[usize]) -> Result<GridModule> {
        self.shape.check(lo)?;
        self.shape.check(hi)?;
        let sizes: Vec<usize> = lo.iter().zip(hi).map(|(a, b)| b + 1 - a).collect();
        let local = GridShape::new(sizes)?;
        let shift = |l: &[usize]| -> Point { l.iter().zip(lo).map(|(a, b)| a + b).collect() };
        let dims = local.points().map(|l| self.dim_at(&shift(&l))).collect();
        let mut out = GridModule::with_dims(local.clone(), self.field, dims)?;
        for l in 0..local.len() {
            let g = self.shape.index(&shift(&local.point(l)));
            for axis in 0..local.naxes() {
                if local.succ(l, axis).is_some() {
                    out.set_step(l, axis, self.step(g, axis).unwrap().clone())?;
                }
            }
        }
        Ok(out)
    }

    /// The restriction to the claw (outward coordinate rays) at `center`.
    pub fn restrict_claw(&self, center: &[usize]) -> Result<ClawModule> {
        self.shape.check(center)?;
        let c = self.shape.index(center);
        let arms = (0..self.shape.naxes())
            .map(|axis| {
                let mut dims = Vec::new();
                let mut maps = Vec::new();
                let mut idx = c;
                while let Some(next) = self.shape.succ(idx, axis) {
                    maps.push(self.step(idx, axis).unwrap().clone());
                    dims.push(self.dims[next]);
                    idx = next;
                }
                Arm { dims, maps }
            })
            .collect();
        Ok(ClawModule {
            field: self.field,
            center: center.to_vec(),
            center_dim: self.dims[c],
            arms,
        })
    }

    /// Conjugates each point space by the matrix `change(idx)` (which must be
    /// invertible of size `dim(idx)`): the result is isomorphic to `self`.
    pub fn change_basis(&self, mut change: impl FnMut(usize) -> Mat) -> Result<GridModule> {
        let f = self.field;
        let gs: Vec<Mat> = (0..self.shape.len()).map(&mut change).collect();
        let mut invs = Vec::with_capacity(gs.len());
        for (idx, g) in gs.iter().enumerate() {
            if g.shape() != (self.dims[idx], self.dims[idx]) {
                return Err(Error::DimensionMismatch(format!(
                    "basis change at {:?} has the wrong size",
                    self.shape.point(idx)
                )));
            }
            invs.push(g.inverse(f).ok_or_else(|| {
                Error::DimensionMismatch(format!(
                    "basis change at {:?} is singular",
                    self.shape.point(idx)
                ))
            })?);
        }
        let mut out = GridModule::with_dims(self.shape.clone(), f, self.dims.clone())?;
        for idx in 0..self.shape.len() {
            for axis in 0..self.shape.naxes() {
                if let Some(t) = self.shape.succ(idx, axis) {
                    let m = gs[t]
                        .mul(f, self.step(idx, axis).unwrap())
                        .mul(f, &invs[idx]);
                    out.set_step(idx, axis, m)?;
                }
            }
        }
        Ok(out)
    }

    /// An isomorphic copy under seeded random changes of basis at every point.
    pub fn scramble(&self, seed: u64) -> GridModule {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = self.field;
        let dims = self.dims.clone();
        self.change_basis(|idx| Mat::random_invertible(f, dims[idx], &mut rng))
            .expect("random invertible matrices have the right size")
    }

    /// Same module over a different prime: entries are read as centered
    /// representatives and reduced into the new field.
    pub fn with_field(&self, field: PrimeField) -> GridModule {
        let old = self.field;
        let steps = self
            .steps
            .iter()
            .map(|m| {
                let data = m
                    .data()
                    .iter()
                    .map(|&x| field.reduce(old.centered(x)))
                    .collect();
                Mat::from_vec(m.rows(), m.cols(), data).unwrap()
            })
            .collect();
        GridModule {
            shape: self.shape.clone(),
            field,
            dims: self.dims.clone(),
            steps,
        }
    }

    /// The module as a representation of the grid's Hasse quiver. Arrows are
    /// listed by `(point index, axis)`.
    pub fn to_rep(&self) -> Rep {
        let mut arrows = Vec::new();
        for idx in 0..self.shape.len() {
            for axis in 0..self.shape.naxes() {
                if let Some(t) = self.shape.succ(idx, axis) {
                    arrows.push(Arrow {
                        src: idx,
                        dst: t,
                        map: self.step(idx, axis).unwrap().clone(),
                    });
                }
            }
        }
        Rep::new(self.field, self.dims.clone(), arrows)
    }

    /// Inverse of [`GridModule::to_rep`]: `rep` must use the same arrow layout.
    pub fn from_rep(shape: &GridShape, rep: &Rep) -> Result<GridModule> {
        let mut out = GridModule::with_dims(shape.clone(), rep.field(), rep.dims().to_vec())?;
        let mut arrows = rep.arrows().iter();
        for idx in 0..shape.len() {
            for axis in 0..shape.naxes() {
                if let Some(t) = shape.succ(idx, axis) {
                    let a = arrows
                        .next()
                        .ok_or_else(|| Error::DimensionMismatch("too few arrows".into()))?;
                    if a.src != idx || a.dst != t {
                        return Err(Error::DimensionMismatch(
                            "arrow layout does not match the grid".into(),
                        ));
                    }
                    out.set_step(idx, axis, a.map.clone())?;
                }
            }
        }
        Ok(out)
    }

    /// Randomized isomorphism test (see [`Rep::find_isomorphism`]).
    pub fn is_isomorphic(&self, other: &GridModule, seed: u64) -> Result<bool> {
        if self.shape != other.shape || self.field != other.field {
            return Err(Error::Incompatible);
        }
        Ok(self
            .to_rep()
            .find_isomorphism(&other.to_rep(), seed)?
            .is_some())
    }
}

/// A convex, connected, non-empty set of grid points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalSet {
    shape: GridShape,
    /// Sorted point indices.
    members: Vec<usize>,
}

impl IntervalSet {
    pub fn new(shape: &GridShape, points: &[Point]) -> Result<Self> {
        let mut member = vec![false; shape.len()];
        for p in points {
            shape.check(p)?;
            member[shape.index(p)] = true;
        }
        Self::from_mask(shape, member)
    }

    pub(crate) fn from_mask(shape: &GridShape, member: Vec<bool>) -> Result<Self> {
        let members: Vec<usize> = (0..shape.len()).filter(|&i| member[i]).collect();
        let Some(&first) = members.first() else {
            return Err(Error::EmptySet);
        };
        check_convex(shape, &member)?;
        // For convex sets, comparability zig-zags reduce to unit steps.
        let mut seen = vec![false; shape.len()];
        let mut stack = vec![first];
        seen[first] = true;
        while let Some(i) = stack.pop() {
            for axis in 0..shape.naxes() {
                for nb in [shape.succ(i, axis), shape.pred(i, axis)]
                    .into_iter()
                    .flatten()
                {
                    if member[nb] && !seen[nb] {
                        seen[nb] = true;
                        stack.push(nb);
                    }
                }
            }
        }
        if let Some(&lost) = members.iter().find(|&&i| !seen[i]) {
            return Err(Error::NotConnected(shape.point(first), shape.point(lost)));
        }
        Ok(IntervalSet {
            shape: shape.clone(),
            members,
        })
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    pub fn indices(&self) -> &[usize] {
        &self.members
    }

    pub fn points(&self) -> Vec<Point> {
        self.members.iter().map(|&i| self.shape.point(i)).collect()
    }

    pub fn contains(&self, p: &[usize]) -> bool {
        self.shape.contains(p) && self.members.binary_search(&self.shape.index(p)).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.shape.len()];
        for &i in &self.members {
            m[i] = true;
        }
        m
    }
}

/// Up-closure and down-closure by dynamic programming; a set is convex iff
/// their intersection is the set itself.
fn check_convex(shape: &GridShape, member: &[bool]) -> Result<()> {
    let n = shape.naxes();
    let len = shape.len();
    let mut up = member.to_vec();
    for idx in 0..len {
        if !up[idx] {
            up[idx] = (0..n).any(|a| shape.pred(idx, a).is_some_and(|q| up[q]));
        }
    }
    let mut down = member.to_vec();
    for idx in (0..len).rev() {
        if !down[idx] {
            down[idx] = (0..n).any(|a| shape.succ(idx, a).is_some_and(|q| down[q]));
        }
    }
    for mid in 0..len {
        if up[mid] && down[mid] && !member[mid] {
            let m = shape.point(mid);
            let low = (0..len)
                .find(|&i| member[i] && leq(&shape.point(i), &m))
                .unwrap();
            let high = (0..len)
                .find(|&i| member[i] && leq(&m, &shape.point(i)))
                .unwrap();
            return Err(Error::NotConvex {
                low: shape.point(low),
                mid: m,
                high: shape.point(high),
            });
        }
    }
    Ok(())
}

/// The interval module: one-dimensional on the set, identities inside it.
pub fn interval_module(shape: &GridShape, set: &IntervalSet, field: PrimeField) -> GridModule {
    let mask = set.mask();
    let dims = mask.iter().map(|&b| b as usize).collect();
    let mut m = GridModule::with_dims(shape.clone(), field, dims).unwrap();
    for &idx in set.indices() {
        for axis in 0..shape.naxes() {
            if let Some(t) = shape.succ(idx, axis) {
                if mask[t] {
                    m.set_step(idx, axis, Mat::identity(1)).unwrap();
                }
            }
        }
    }
    m
}

/// Outward chain of one claw arm: `dims[t]` is the space `t + 1` steps from
/// the center and `maps[t]` maps into it from the previous point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arm {
    pub dims: Vec<usize>,
    pub maps: Vec<Mat>,
}

/// A module over the claw at `center`: the center space and one outward
/// chain per axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClawModule {
    pub field: PrimeField,
    pub center: Point,
    pub center_dim: usize,
    pub arms: Vec<Arm>,
}

impl ClawModule {
    /// Vertex 0 is the center; arm vertices follow axis by axis, outward.
    pub fn to_rep(&self) -> Rep {
        let mut dims = vec![self.center_dim];
        let mut arrows = Vec::new();
        for arm in &self.arms {
            let mut prev = 0;
            for (d, m) in arm.dims.iter().zip(&arm.maps) {
                let v = dims.len();
                dims.push(*d);
                arrows.push(Arrow {
                    src: prev,
                    dst: v,
                    map: m.clone(),
                });
                prev = v;
            }
        }
        Rep::new(self.field, dims, arrows)
    }

    /// Rebuilds a claw module with the layout of `self` from a representation
    /// of the same quiver.
    pub fn with_rep(&self, rep: &Rep) -> ClawModule {
        let mut arrows = rep.arrows().iter();
        let mut v = 1;
        let arms = self
            .arms
            .iter()
            .map(|arm| {
                let mut dims = Vec::new();
                let mut maps = Vec::new();
                for _ in 0..arm.dims.len() {
                    dims.push(rep.dims()[v]);
                    maps.push(arrows.next().unwrap().map.clone());
                    v += 1;
                }
                Arm { dims, maps }
            })
            .collect();
        ClawModule {
            field: rep.field(),
            center: self.center.clone(),
            center_dim: rep.dims()[0],
            arms,
        }
    }

    pub fn total_dim(&self) -> usize {
        self.center_dim + self.arms.iter().flat_map(|a| &a.dims).sum::<usize>()
    }

    /// Composite map from the center to `t` steps along `axis` (`t >= 1`).
    fn arm_composite(&self, axis: usize, t: usize) -> Mat {
        let mut acc = Mat::identity(self.center_dim);
        for m in &self.arms[axis].maps[..t] {
            acc = m.mul(self.field, &acc);
        }
        acc
    }

    fn arm_dim(&self, axis: usize, t: usize) -> usize {
        if t == 0 {
            self.center_dim
        } else {
            self.arms[axis].dims[t - 1]
        }
    }
}

/// Left Kan extension of a claw module anchored at the global minimum of
/// `shape`, evaluated pointwise by the colimit formula.
///
/// At `p` with nonzero coordinates `S`, the value is the quotient of
/// `(⊕_{i∈S} W_i(p_i)) ⊕ V` by the relations `v ~ g_i(v)`, where `V` is the
/// center and `g_i` the arm composite. Quotient bases are chosen greedily from
/// the arm components first, so points on the claw keep the claw's own bases.
pub fn kan_extend_claw(claw: &ClawModule, shape: &GridShape) -> Result<GridModule> {
    if claw.center.iter().any(|&c| c != 0) || claw.center.len() != shape.naxes() {
        return Err(Error::ClawCenter(claw.center.clone()));
    }
    for (axis, arm) in claw.arms.iter().enumerate() {
        if arm.dims.len() + 1 != shape.sizes()[axis] || arm.maps.len() != arm.dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "arm {axis} does not span the grid"
            )));
        }
    }
    let f = claw.field;
    let n = shape.naxes();
    let cdim = claw.center_dim;

    struct Presentation {
        /// Active axes with their block offsets inside the ambient space.
        blocks: Vec<(usize, usize)>,
        ambient: usize,
        /// Chosen quotient basis (columns of the ambient space).
        basis: Mat,
        /// Coordinates modulo the relations.
        coords: Mat,
    }

    let mut pres: Vec<Presentation> = Vec::with_capacity(shape.len());
    for idx in 0..shape.len() {
        let p = shape.point(idx);
        let mut blocks = Vec::new();
        let mut offset = 0;
        for axis in 0..n {
            if p[axis] > 0 {
                blocks.push((axis, offset));
                offset += claw.arm_dim(axis, p[axis]);
            }
        }
        let ambient = offset + cdim;
        let mut rel = Mat::zeros(ambient, cdim * blocks.len());
        for (b, &(axis, off)) in blocks.iter().enumerate() {
            let g = claw.arm_composite(axis, p[axis]).neg(f);
            rel.paste(off, b * cdim, &g);
            rel.paste(offset, b * cdim, &Mat::identity(cdim));
        }
        let rel = rel.column_space(f);
        let basis = complement_basis(f, &rel, ambient)?;
        let full = rel.hstack(&basis)?;
        let inv = full
            .inverse(f)
            .ok_or_else(|| Error::Inconsistency("quotient presentation is singular".into()))?;
        let rows: Vec<usize> = (rel.cols()..ambient).collect();
        let coords = inv.select_rows(&rows);
        pres.push(Presentation {
            blocks,
            ambient,
            basis,
            coords,
        });
    }

    let dims = pres.iter().map(|pr| pr.basis.cols()).collect();
    let mut out = GridModule::with_dims(shape.clone(), f, dims)?;
    for idx in 0..shape.len() {
        let p = shape.point(idx);
        let src = &pres[idx];
        for axis in 0..n {
            let Some(t) = shape.succ(idx, axis) else {
                continue;
            };
            let dst = &pres[t];
            // Ambient-level map: identity on shared components, arm step on `axis`.
            let mut map = Mat::zeros(dst.ambient, src.ambient);
            let src_center = src.ambient - cdim;
            let dst_center = dst.ambient - cdim;
            map.paste(dst_center, src_center, &Mat::identity(cdim));
            for &(a, off) in &src.blocks {
                let &(_, doff) = dst.blocks.iter().find(|(b, _)| *b == a).unwrap();
                let piece = if a == axis {
                    claw.arms[a].maps[p[a]].clone()
                } else {
                    Mat::identity(claw.arm_dim(a, p[a]))
                };
                map.paste(doff, off, &piece);
            }
            let step = dst.coords.mul(f, &map).mul(f, &src.basis);
            out.set_step(idx, axis, step)?;
        }
    }
    Ok(out)
}

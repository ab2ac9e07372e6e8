//! Cubes, Koszul complexes and the middle-exactness criterion.
//!
//! The Koszul complex of a module restricted to a `k`-cube is built as an
//! iterated mapping cone: split off one active axis, build the complexes of
//! the two opposite faces, and take the cone of the face-to-face map. The
//! cube maximum sits in degree 0, the minimum in degree `k`. Components of
//! each degree are ordered by the bitmask of their vertex, and the cone
//! differential is `d(f, r) = (d f, Φ f − d r)`, which reproduces the familiar
//! sign rule: the component `M_{A∖x} → M_A` carries `(−1)^{#{a ∈ A : a > x}}`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridmod::{GridModule, GridShape, Point};
use crate::linalg::Mat;

/// An axis-aligned commutative cube: `lo_i < hi_i` exactly on the active axes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cube {
    active: Vec<usize>,
    lo: Point,
    hi: Point,
}

impl Cube {
    pub fn new(shape: &GridShape, active: Vec<usize>, lo: Point, hi: Point) -> Result<Self> {
        let cube = Cube { active, lo, hi };
        cube.check_in(shape)?;
        Ok(cube)
    }

    pub(crate) fn check_in(&self, shape: &GridShape) -> Result<()> {
        shape.check(&self.lo)?;
        shape.check(&self.hi)?;
        let n = shape.naxes();
        if self.active.windows(2).any(|w| w[0] >= w[1]) || self.active.iter().any(|&a| a >= n) {
            return Err(Error::DimensionMismatch(format!(
                "active axes {:?} must be increasing and below {n}",
                self.active
            )));
        }
        for axis in 0..n {
            let strict = self.lo[axis] < self.hi[axis];
            let equal = self.lo[axis] == self.hi[axis];
            let active = self.active.contains(&axis);
            if !(strict && active || equal && !active) {
                return Err(Error::DimensionMismatch(format!(
                    "cube coordinates {:?}..{:?} disagree with active axes {:?}",
                    self.lo, self.hi, self.active
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.active.len()
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn lo(&self) -> &[usize] {
        &self.lo
    }

    pub fn hi(&self) -> &[usize] {
        &self.hi
    }

    /// The grid point of a cube vertex given by local 0/1 coordinates.
    pub fn vertex(&self, local: &[usize]) -> Point {
        let mut p = self.lo.clone();
        for (j, &axis) in self.active.iter().enumerate() {
            if local[j] == 1 {
                p[axis] = self.hi[axis];
            }
        }
        p
    }

    /// True when all active pairs are adjacent coordinates.
    pub fn is_unit(&self) -> bool {
        self.active.iter().all(|&a| self.hi[a] == self.lo[a] + 1)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every `k`-cube of the grid, sorted by `(active, lo, hi)`.
pub fn enumerate_cubes(shape: &GridShape, k: usize) -> Result<Vec<Cube>> {
    let n = shape.naxes();
    if k == 0 || k > n {
        return Err(Error::CubeDimension { k, n });
    }
    let sizes = shape.sizes();
    let mut out = Vec::new();
    for active in combinations(n, k) {
        // Per-axis choices of (lo, hi).
        let choices: Vec<Vec<(usize, usize)>> = (0..n)
            .map(|axis| {
                let s = sizes[axis];
                if active.contains(&axis) {
                    (0..s)
                        .flat_map(|a| (a + 1..s).map(move |b| (a, b)))
                        .collect()
                } else {
                    (0..s).map(|a| (a, a)).collect()
                }
            })
            .collect();
        let mut counter = vec![0usize; n];
        'outer: loop {
            let lo = (0..n).map(|i| choices[i][counter[i]].0).collect();
            let hi = (0..n).map(|i| choices[i][counter[i]].1).collect();
            out.push(Cube {
                active: active.clone(),
                lo,
                hi,
            });
            for i in (0..n).rev() {
                counter[i] += 1;
                if counter[i] < choices[i].len() {
                    continue 'outer;
                }
                counter[i] = 0;
            }
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// Closed-form cube count: sum over `k`-subsets `S` of `∏_{i∈S} C(s_i, 2) · ∏_{i∉S} s_i`.
pub fn cube_count(shape: &GridShape, k: usize) -> usize {
    let sizes = shape.sizes();
    combinations(sizes.len(), k)
        .iter()
        .map(|s| {
            sizes
                .iter()
                .enumerate()
                .map(|(i, &n)| if s.contains(&i) { n * (n - 1) / 2 } else { n })
                .product::<usize>()
        })
        .sum()
}

/// The Koszul complex of a module on a cube.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoszulComplex {
    k: usize,
    /// Vertex bitmasks making up each degree, in block order.
    components: Vec<Vec<u32>>,
    chain_dims: Vec<usize>,
    /// `diffs[j - 1]` is the differential from degree `j` to degree `j - 1`.
    diffs: Vec<Mat>,
}

impl KoszulComplex {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn chain_dims(&self) -> &[usize] {
        &self.chain_dims
    }

    /// Vertex bitmasks (bit `j` = local axis `j`) of the summands in degree `j`.
    pub fn components(&self, degree: usize) -> &[u32] {
        &self.components[degree]
    }

    /// The differential out of `degree` (`1..=k`).
    pub fn differential(&self, degree: usize) -> &Mat {
        &self.diffs[degree - 1]
    }

    /// True when every composite of consecutive differentials vanishes.
    pub fn is_complex(&self, field: crate::linalg::PrimeField) -> bool {
        self.diffs
            .windows(2)
            .all(|w| w[0].mul(field, &w[1]).is_zero())
    }
}

/// Builds the Koszul complex, splitting off the last active axis at each step.
pub fn koszul_complex(m: &GridModule, cube: &Cube) -> Result<KoszulComplex> {
    let order: Vec<usize> = (0..cube.dim()).collect();
    koszul_complex_with_order(m, cube, &order)
}

/// Builds the Koszul complex, splitting off local axes in reverse order of
/// `order` (a permutation of `0..k`): `order[k-1]` is split first.
pub fn koszul_complex_with_order(
    m: &GridModule,
    cube: &Cube,
    order: &[usize],
) -> Result<KoszulComplex> {
    let k = cube.dim();
    if k == 0 {
        return Err(Error::CubeDimension {
            k,
            n: m.shape().naxes(),
        });
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..k).collect::<Vec<_>>() {
        return Err(Error::DimensionMismatch(format!(
            "{order:?} is not a permutation of the cube axes"
        )));
    }
    let local = m.restrict_cube(cube)?;
    let (components, diffs) = cone(&local, order, 0);
    let chain_dims = components
        .iter()
        .map(|c| c.iter().map(|&v| local.dim(mask_index(v, k))).sum())
        .collect();
    Ok(KoszulComplex {
        k,
        components,
        chain_dims,
        diffs,
    })
}

/// Local grid index of the cube vertex with bitmask `mask`.
fn mask_index(mask: u32, k: usize) -> usize {
    (0..k).fold(0, |acc, j| acc * 2 + ((mask >> j) & 1) as usize)
}

fn block_dims(local: &GridModule, comps: &[u32]) -> Vec<usize> {
    let k = local.shape().naxes();
    comps.iter().map(|&v| local.dim(mask_index(v, k))).collect()
}

/// Returns components per degree and differentials for the face with fixed
/// bits `base`, free along `axes`.
fn cone(local: &GridModule, axes: &[usize], base: u32) -> (Vec<Vec<u32>>, Vec<Mat>) {
    let f = local.field();
    let Some((&last, rest)) = axes.split_last() else {
        return (vec![vec![base]], Vec::new());
    };
    let k = local.shape().naxes();
    let (fc, fd) = cone(local, rest, base);
    let (rc, rd) = cone(local, rest, base | (1 << last));
    let m = axes.len();

    let size = |dims: &[usize]| dims.iter().sum::<usize>();
    let fdims: Vec<Vec<usize>> = fc.iter().map(|c| block_dims(local, c)).collect();
    let rdims: Vec<Vec<usize>> = rc.iter().map(|c| block_dims(local, c)).collect();
    let fsize = |j: isize| -> usize {
        if j < 0 || j as usize >= fc.len() {
            0
        } else {
            size(&fdims[j as usize])
        }
    };
    let rsize = |j: isize| -> usize {
        if j < 0 || j as usize >= rc.len() {
            0
        } else {
            size(&rdims[j as usize])
        }
    };

    // Φ_j : F_j → R_j, block diagonal of the steps along `last`.
    let phi = |j: usize| -> Mat {
        let mut out = Mat::zeros(size(&rdims[j]), size(&fdims[j]));
        let (mut r0, mut c0) = (0, 0);
        for (&v, (&fd_, &rd_)) in fc[j].iter().zip(fdims[j].iter().zip(&rdims[j])) {
            let step = local
                .step(mask_index(v, k), last)
                .expect("face is not the top");
            out.paste(r0, c0, step);
            r0 += rd_;
            c0 += fd_;
        }
        out
    };

    let mut components = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let mut c = Vec::new();
        if j >= 1 {
            c.extend_from_slice(&fc[j - 1]);
        }
        if j < m {
            c.extend_from_slice(&rc[j]);
        }
        components.push(c);
    }

    let mut diffs = Vec::with_capacity(m);
    for j in 1..=m {
        let ji = j as isize;
        let (f_src, r_src) = (fsize(ji - 1), rsize(ji));
        let (f_dst, r_dst) = (fsize(ji - 2), rsize(ji - 1));
        let mut d = Mat::zeros(f_dst + r_dst, f_src + r_src);
        if j >= 2 {
            d.paste(0, 0, &fd[j - 2]);
        }
        d.paste(f_dst, 0, &phi(j - 1));
        if j < m {
            d.paste(f_dst, f_src, &rd[j - 1].neg(f));
        }
        diffs.push(d);
    }
    (components, diffs)
}

/// Homology dimensions in degrees `0..=k`.
pub fn homology_dims(kc: &KoszulComplex, field: crate::linalg::PrimeField) -> Vec<usize> {
    let ranks: Vec<usize> = kc.diffs.iter().map(|d| d.rank(field)).collect();
    let rank = |j: usize| -> usize {
        if j == 0 || j > kc.k {
            0
        } else {
            ranks[j - 1]
        }
    };
    (0..=kc.k)
        .map(|j| kc.chain_dims[j] - rank(j) - rank(j + 1))
        .collect()
}

/// Koszul homology of `m` on `cube`.
pub fn cube_homology(m: &GridModule, cube: &Cube) -> Result<Vec<usize>> {
    let kc = koszul_complex(m, cube)?;
    Ok(homology_dims(&kc, m.field()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessFlags {
    pub middle: bool,
    pub left: bool,
    pub right: bool,
}

impl ExactnessFlags {
    pub fn from_homology(h: &[usize]) -> Self {
        let k = h.len() - 1;
        let middle = h[1..k].iter().all(|&x| x == 0);
        ExactnessFlags {
            middle,
            left: middle && h[k] == 0,
            right: middle && h[0] == 0,
        }
    }

    pub fn exact(&self) -> bool {
        self.left && self.right
    }
}

pub fn exactness_flags(m: &GridModule, cube: &Cube) -> Result<ExactnessFlags> {
    if cube.dim() < 2 {
        return Err(Error::CubeDimension {
            k: cube.dim(),
            n: m.shape().naxes(),
        });
    }
    Ok(ExactnessFlags::from_homology(&cube_homology(m, cube)?))
}

/// A cube on which middle exactness fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub cube: Cube,
    /// Lowest middle degree with nonzero homology.
    pub degree: usize,
    #[serde(rename = "homologyDim")]
    pub homology_dim: usize,
    /// Full homology of the witness cube, degrees `0..=k`. Omitted from
    /// JSON when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub homology: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    BlockDecomposable,
    NotBlockDecomposable(Witness),
}

impl Verdict {
    pub fn is_positive(&self) -> bool {
        matches!(self, Verdict::BlockDecomposable)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::BlockDecomposable => None,
            Verdict::NotBlockDecomposable(w) => Some(w),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Worker threads for cube checks; results never depend on it.
    pub jobs: usize,
    /// Check only degrees 1 and `k − 1` at level `k`. Sound once all lower
    /// levels passed, which is how the criterion walks the levels.
    pub extremal_degrees_only: bool,
    /// Restrict to unit cubes (adjacent coordinates). Only for experiments.
    pub unit_cubes_only: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            jobs: 1,
            extremal_degrees_only: false,
            unit_cubes_only: false,
        }
    }
}

/// Runs `work` over `items` on up to `jobs` threads, returning results in item order.
pub(crate) fn par_map<T: Sync, R: Send>(
    items: &[T],
    jobs: usize,
    work: impl Fn(&T) -> R + Sync,
) -> Vec<R> {
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().map(work).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let work = &work;
                scope.spawn(move || part.iter().map(work).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("cube worker panicked"))
            .collect()
    })
}

fn cubes_for(shape: &GridShape, k: usize, opts: &CheckOptions) -> Result<Vec<Cube>> {
    let mut cubes = enumerate_cubes(shape, k)?;
    if opts.unit_cubes_only {
        cubes.retain(Cube::is_unit);
    }
    Ok(cubes)
}

/// Middle homology degrees with nonzero homology, restricted to the degrees
/// the options ask for. Returns the full homology when it was computed.
fn middle_failure(m: &GridModule, cube: &Cube, opts: &CheckOptions) -> Result<Option<Witness>> {
    let kc = koszul_complex(m, cube)?;
    let k = kc.k;
    let f = m.field();
    let h = if opts.extremal_degrees_only && k > 2 {
        // Only the ranks around degrees 1 and k-1 are needed.
        let needed = [1, 2, k - 1, k];
        let mut ranks = vec![None; k + 2];
        for &j in &needed {
            ranks[j] = Some(kc.differential(j).rank(f));
        }
        let r = |j: usize| ranks[j].unwrap_or(0);
        let mut h = vec![0; k + 1];
        for &j in &[1, k - 1] {
            h[j] = kc.chain_dims[j] - r(j) - r(j + 1);
        }
        h
    } else {
        homology_dims(&kc, f)
    };
    Ok((1..k).find(|&j| h[j] != 0).map(|degree| Witness {
        cube: cube.clone(),
        degree,
        homology_dim: h[degree],
        homology: h.clone(),
    }))
}

/// The local criterion: middle exactness on every cube of every dimension
/// `2..=n`. On failure, the witness is the first failing cube in
/// `(k, active, lo, hi)` order.
pub fn is_locally_block_decomposable(m: &GridModule) -> Result<Verdict> {
    check_criterion(m, &CheckOptions::default())
}

pub fn check_criterion(m: &GridModule, opts: &CheckOptions) -> Result<Verdict> {
    m.require_valid()?;
    for k in 2..=m.shape().naxes() {
        let cubes = cubes_for(m.shape(), k, opts)?;
        let results = par_map(&cubes, opts.jobs, |c| middle_failure(m, c, opts));
        for r in results {
            if let Some(w) = r? {
                return Ok(Verdict::NotBlockDecomposable(w));
            }
        }
    }
    Ok(Verdict::BlockDecomposable)
}

/// Aggregated exactness flags over all cubes of one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileLevel {
    pub k: usize,
    #[serde(rename = "allMiddle")]
    pub all_middle: bool,
    #[serde(rename = "allLeft")]
    pub all_left: bool,
    #[serde(rename = "allRight")]
    pub all_right: bool,
}

impl ProfileLevel {
    pub fn exact(&self) -> bool {
        self.all_middle && self.all_left && self.all_right
    }
}

pub fn exactness_profile(m: &GridModule) -> Result<Vec<ProfileLevel>> {
    exactness_profile_with(m, &CheckOptions::default())
}

pub fn exactness_profile_with(m: &GridModule, opts: &CheckOptions) -> Result<Vec<ProfileLevel>> {
    m.require_valid()?;
    let mut out = Vec::new();
    for k in 2..=m.shape().naxes() {
        let cubes = cubes_for(m.shape(), k, opts)?;
        let flags = par_map(&cubes, opts.jobs, |c| exactness_flags(m, c));
        let mut level = ProfileLevel {
            k,
            all_middle: true,
            all_left: true,
            all_right: true,
        };
        for fl in flags {
            let fl = fl?;
            level.all_middle &= fl.middle;
            level.all_left &= fl.left;
            level.all_right &= fl.right;
        }
        out.push(level);
    }
    Ok(out)
}

/// Decides the `k`-lifting problem on a cube directly: does every family
/// `(m_i ∈ M_{i})` agreeing on the two-element vertices come from one element
/// of `M_∅`? Independent of the Koszul complex; equivalent to vanishing
/// homology in degree `k − 1`.
pub fn all_families_lift(m: &GridModule, cube: &Cube) -> Result<bool> {
    let k = cube.dim();
    if k < 2 {
        return Err(Error::CubeDimension {
            k,
            n: m.shape().naxes(),
        });
    }
    let f = m.field();
    let local = m.restrict_cube(cube)?;
    let ls = local.shape().clone();
    let singleton = |i: usize| -> usize {
        let mut p = vec![0; k];
        p[i] = 1;
        ls.index(&p)
    };
    let dims: Vec<usize> = (0..k).map(|i| local.dim(singleton(i))).collect();
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    let total: usize = dims.iter().sum();
    // Compatibility map (m_i) ↦ (d_j^{ij} m_i − d_i^{ij} m_j)_{i<j}.
    let mut compat = Mat::zeros(0, total);
    for i in 0..k {
        for j in i + 1..k {
            let mut pair = vec![0; k];
            pair[i] = 1;
            pair[j] = 1;
            let target = local.dim(ls.index(&pair));
            let mut row = Mat::zeros(target, total);
            row.paste(0, offsets[i], local.step(singleton(i), j).unwrap());
            row.paste(0, offsets[j], &local.step(singleton(j), i).unwrap().neg(f));
            compat = compat.vstack(&row)?;
        }
    }
    let families = compat.kernel_basis(f);
    let mut lift = Mat::zeros(0, local.dim(0));
    for i in 0..k {
        lift = lift.vstack(local.step(0, i).unwrap())?;
    }
    for c in 0..families.cols() {
        if lift.solve(f, &families.col(c))?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lexicographic comparison used for witness ordering across dimensions.
pub fn witness_order(a: &Witness, b: &Witness) -> Ordering {
    (a.cube.dim(), &a.cube).cmp(&(b.cube.dim(), &b.cube))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridmod::{interval_module, IntervalSet};
    use crate::linalg::PrimeField;

    fn fp() -> PrimeField {
        PrimeField::default()
    }

    fn shape(s: &[usize]) -> GridShape {
        GridShape::new(s.to_vec()).unwrap()
    }

    fn interval(s: &GridShape, pts: &[&[usize]]) -> GridModule {
        let pts: Vec<Point> = pts.iter().map(|p| p.to_vec()).collect();
        interval_module(s, &IntervalSet::new(s, &pts).unwrap(), fp())
    }

    fn full(s: &GridShape) -> GridModule {
        let pts: Vec<Point> = s.points().collect();
        interval_module(s, &IntervalSet::new(s, &pts).unwrap(), fp())
    }

    #[test]
    fn cube_counts() {
        assert_eq!(enumerate_cubes(&shape(&[2, 2, 2]), 3).unwrap().len(), 1);
        assert_eq!(enumerate_cubes(&shape(&[3, 3]), 2).unwrap().len(), 9);
        assert_eq!(enumerate_cubes(&shape(&[2, 2]), 1).unwrap().len(), 4);
        assert!(enumerate_cubes(&shape(&[2, 2]), 3).is_err());
        assert!(enumerate_cubes(&shape(&[2, 2]), 0).is_err());
        for s in [vec![3, 2, 4], vec![2, 2, 2, 2], vec![4, 3]] {
            let sh = shape(&s);
            for k in 1..=s.len() {
                let cubes = enumerate_cubes(&sh, k).unwrap();
                assert_eq!(cubes.len(), cube_count(&sh, k));
                let mut dedup = cubes.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), cubes.len());
            }
        }
    }

    #[test]
    fn cube_validation() {
        let s = shape(&[3, 3]);
        assert!(Cube::new(&s, vec![0], vec![0, 1], vec![2, 1]).is_ok());
        assert!(Cube::new(&s, vec![0], vec![0, 1], vec![2, 2]).is_err());
        assert!(Cube::new(&s, vec![0, 1], vec![0, 0], vec![3, 1]).is_err());
    }

    #[test]
    fn constant_module_square_complex() {
        let s = shape(&[2, 2]);
        let c = &enumerate_cubes(&s, 2).unwrap()[0];
        let kc = koszul_complex(&full(&s), c).unwrap();
        assert_eq!(kc.chain_dims(), &[1, 2, 1]);
        assert!(kc.is_complex(fp()));
        assert_eq!(homology_dims(&kc, fp()), vec![0, 0, 0]);
    }

    #[test]
    fn one_cube_complex() {
        let s = shape(&[3]);
        let c = &enumerate_cubes(&s, 1).unwrap()[0];
        let kc = koszul_complex(&full(&s), c).unwrap();
        assert_eq!(kc.chain_dims(), &[1, 1]);
        assert_eq!(kc.differential(1), &Mat::identity(1));
    }

    #[test]
    fn zero_module_complex() {
        let s = shape(&[2, 2, 2]);
        let c = &enumerate_cubes(&s, 3).unwrap()[0];
        let kc = koszul_complex(&GridModule::zero(s.clone(), fp()), c).unwrap();
        assert_eq!(kc.chain_dims(), &[0, 0, 0, 0]);
    }

    #[test]
    fn death_and_birth_flags() {
        let s = shape(&[2, 2]);
        let c = &enumerate_cubes(&s, 2).unwrap()[0];
        let death = exactness_flags(&interval(&s, &[&[0, 0]]), c).unwrap();
        assert_eq!(
            death,
            ExactnessFlags {
                middle: true,
                left: false,
                right: true
            }
        );
        let birth = exactness_flags(&interval(&s, &[&[1, 1]]), c).unwrap();
        assert_eq!(
            birth,
            ExactnessFlags {
                middle: true,
                left: true,
                right: false
            }
        );
        let all = exactness_flags(&full(&s), c).unwrap();
        assert!(all.middle && all.left && all.right);
        let edge = &enumerate_cubes(&s, 1).unwrap()[0];
        assert!(exactness_flags(&full(&s), edge).is_err());
    }

    #[test]
    fn profile_of_death_plus_birth() {
        let s = shape(&[2, 2, 2]);
        let death = interval(&s, &[&[0, 0, 0]]);
        let birth = interval(&s, &[&[1, 1, 1]]);
        let sum = death.direct_sum(&birth).unwrap();
        for level in exactness_profile(&sum).unwrap() {
            assert!(level.all_middle);
            assert!(!level.all_left);
            assert!(!level.all_right);
        }
        for level in exactness_profile(&full(&s)).unwrap() {
            assert!(level.exact());
        }
    }

    #[test]
    fn jobs_do_not_change_results() {
        let s = shape(&[3, 3, 2]);
        let m = interval(&s, &[&[0, 1, 0], &[0, 0, 1], &[1, 0, 1], &[0, 1, 1]]);
        let one = check_criterion(&m, &CheckOptions::default()).unwrap();
        let four = check_criterion(
            &m,
            &CheckOptions {
                jobs: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(one, four);
    }
}

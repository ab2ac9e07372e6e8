//! Decomposition engines.
//!
//! The generic engine splits any representation into indecomposables with
//! Fitting decompositions of random endomorphisms. The constructive engine
//! peels off death and birth blocks through kernel submodules and finishes
//! exact modules on binary cubes through the claw and left Kan extension.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blocks::{block_module, recognize_block_summand, Block};
use crate::error::{Error, Result};
use crate::gridmod::{kan_extend_claw, GridModule, Point};
use crate::koszul::{
    check_criterion, exactness_profile_with, is_locally_block_decomposable, CheckOptions, Verdict,
    Witness,
};
use crate::linalg::{intersect_spans, Mat};
use crate::poly::eigenvalues;
use crate::rep::{Rep, VertexMaps};

/// Consecutive failed splitting attempts before a summand is given up on.
pub const DEFAULT_TRIALS: usize = 24;
/// Fresh-seed restarts of the generic engine before reporting a residue.
pub const DEFAULT_RETRIES: usize = 3;

/// A natural endomorphism, one square matrix per grid point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endo {
    maps: Vec<Mat>,
}

impl Endo {
    pub fn new(m: &GridModule, maps: Vec<Mat>) -> Result<Endo> {
        let e = Endo { maps };
        e.check_natural(m)?;
        Ok(e)
    }

    pub fn identity(m: &GridModule) -> Endo {
        Endo {
            maps: m.dims().iter().map(|&d| Mat::identity(d)).collect(),
        }
    }

    pub fn maps(&self) -> &[Mat] {
        &self.maps
    }

    pub fn check_natural(&self, m: &GridModule) -> Result<()> {
        let shape = m.shape();
        let f = m.field();
        if self.maps.len() != shape.len()
            || self
                .maps
                .iter()
                .zip(m.dims())
                .any(|(a, &d)| a.shape() != (d, d))
        {
            return Err(Error::DimensionMismatch(
                "endomorphism does not match the module dimensions".into(),
            ));
        }
        for idx in 0..shape.len() {
            for axis in 0..shape.naxes() {
                if let Some(t) = shape.succ(idx, axis) {
                    let step = m.step(idx, axis).unwrap();
                    if step.mul(f, &self.maps[idx]) != self.maps[t].mul(f, step) {
                        return Err(Error::NotNatural {
                            point: shape.point(idx),
                            axis,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Pointwise column bases of a submodule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodule {
    bases: Vec<Mat>,
}

impl Submodule {
    /// Checks that each basis has independent columns and that the family
    /// is closed under the structure maps.
    pub fn new(m: &GridModule, bases: Vec<Mat>) -> Result<Submodule> {
        let s = Submodule { bases };
        s.module(m)?;
        Ok(s)
    }

    pub fn zero(m: &GridModule) -> Submodule {
        Submodule {
            bases: m.dims().iter().map(|&d| Mat::zeros(d, 0)).collect(),
        }
    }

    pub fn full(m: &GridModule) -> Submodule {
        Submodule {
            bases: m.dims().iter().map(|&d| Mat::identity(d)).collect(),
        }
    }

    pub fn basis(&self, idx: usize) -> &Mat {
        &self.bases[idx]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Mat::cols).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.bases.iter().map(Mat::cols).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn intersect(&self, other: &Submodule, m: &GridModule) -> Result<Submodule> {
        let f = m.field();
        let bases = self
            .bases
            .iter()
            .zip(&other.bases)
            .map(|(a, b)| intersect_spans(f, a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Submodule { bases })
    }

    /// The submodule as a module in its own right, in the chosen bases.
    pub fn module(&self, m: &GridModule) -> Result<GridModule> {
        if self.bases.len() != m.shape().len() {
            return Err(Error::DimensionMismatch(
                "submodule does not match the grid".into(),
            ));
        }
        let rep = m.to_rep().subrep(&self.bases)?;
        GridModule::from_rep(m.shape(), &rep)
    }
}

pub fn end_basis(m: &GridModule) -> Vec<Endo> {
    m.to_rep()
        .end_basis()
        .into_iter()
        .map(|maps| Endo { maps })
        .collect()
}

fn pointwise_power(rep: &Rep, phi: &[Mat]) -> (VertexMaps, VertexMaps) {
    let f = rep.field();
    let n = rep.total_dim() as u64;
    let mut kers = Vec::with_capacity(phi.len());
    let mut ims = Vec::with_capacity(phi.len());
    for a in phi {
        let psi = a.pow(f, n);
        kers.push(psi.kernel_basis(f));
        ims.push(psi.column_space(f));
    }
    (kers, ims)
}

fn total_cols(maps: &[Mat]) -> usize {
    maps.iter().map(Mat::cols).sum()
}

/// Fitting decomposition along `phi`: `(ker φ^N, im φ^N)` with `N` the total
/// dimension, or `None` when one of them is zero.
pub fn fitting_split(m: &GridModule, phi: &Endo) -> Result<Option<(Submodule, Submodule)>> {
    phi.check_natural(m)?;
    let (kers, ims) = pointwise_power(&m.to_rep(), &phi.maps);
    if total_cols(&kers) == 0 || total_cols(&ims) == 0 {
        return Ok(None);
    }
    Ok(Some((Submodule { bases: kers }, Submodule { bases: ims })))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafStatus {
    /// `dim End = 1`, so the leaf is indecomposable.
    Certified,
    /// Resisted every splitting attempt without a certificate.
    Unsplit,
}

/// One attempt: a random endomorphism, shifted by one of its eigenvalues so
/// that it is neither invertible nor nilpotent unless the semisimple part is
/// a scalar.
fn try_split(
    rep: &Rep,
    basis: &[VertexMaps],
    rng: &mut ChaCha8Rng,
) -> Option<(VertexMaps, VertexMaps)> {
    let f = rep.field();
    let phi = rep.random_combination(basis, rep.dims(), rng);
    let nv = rep.dims().len();
    let start = rng.gen_range(0..nv);
    let lambda = (0..nv)
        .map(|i| (start + i) % nv)
        .filter(|&v| rep.dims()[v] > 0)
        .find_map(|v| {
            let roots = eigenvalues(f, &phi[v], rng);
            (!roots.is_empty()).then(|| roots[rng.gen_range(0..roots.len())])
        })?;
    let shifted: VertexMaps = phi
        .iter()
        .map(|a| a.sub(f, &Mat::scalar(a.rows(), lambda)))
        .collect();
    let (kers, ims) = pointwise_power(rep, &shifted);
    (total_cols(&kers) > 0 && total_cols(&ims) > 0).then_some((kers, ims))
}

/// Splits a representation into indecomposable-looking leaves.
pub fn decompose_rep(
    rep: &Rep,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(Rep, LeafStatus)>> {
    let mut out = Vec::new();
    let mut stack = vec![rep.clone()];
    while let Some(r) = stack.pop() {
        if r.total_dim() == 0 {
            continue;
        }
        if r.total_dim() == 1 {
            out.push((r, LeafStatus::Certified));
            continue;
        }
        let basis = r.end_basis();
        if basis.len() == 1 {
            out.push((r, LeafStatus::Certified));
            continue;
        }
        match (0..trials).find_map(|_| try_split(&r, &basis, rng)) {
            Some((kers, ims)) => {
                // Image pushed last so it is split first; order is cosmetic.
                stack.push(r.subrep(&kers)?);
                stack.push(r.subrep(&ims)?);
            }
            None => out.push((r, LeafStatus::Unsplit)),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leaf {
    pub module: GridModule,
    pub status: LeafStatus,
}

pub fn decompose_indecomposables(m: &GridModule, trials: usize, seed: u64) -> Result<Vec<Leaf>> {
    m.require_valid()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    decompose_rep(&m.to_rep(), trials, &mut rng)?
        .into_iter()
        .map(|(rep, status)| {
            Ok(Leaf {
                module: GridModule::from_rep(m.shape(), &rep)?,
                status,
            })
        })
        .collect()
}

/// Elements eventually killed along `axis`: at `q`, the kernel of the map to
/// the top coordinate of that axis.
pub fn kernel_submodule(m: &GridModule, axis: usize) -> Result<Submodule> {
    let shape = m.shape();
    check_axis(m, axis)?;
    let f = m.field();
    let top = shape.sizes()[axis] - 1;
    let bases = shape
        .points()
        .map(|q| {
            let mut t = q.clone();
            t[axis] = top;
            Ok(m.composite(&q, &t)?.kernel_basis(f))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Submodule { bases })
}

/// Elements with preimages under every map parallel to `axis`: at `q`, the
/// image of the map from the bottom coordinate.
pub fn image_submodule(m: &GridModule, axis: usize) -> Result<Submodule> {
    let shape = m.shape();
    check_axis(m, axis)?;
    let f = m.field();
    let bases = shape
        .points()
        .map(|q| {
            let mut b = q.clone();
            b[axis] = 0;
            Ok(m.composite(&b, &q)?.column_space(f))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Submodule { bases })
}

fn check_axis(m: &GridModule, axis: usize) -> Result<()> {
    let naxes = m.shape().naxes();
    if axis >= naxes {
        return Err(Error::AxisOutOfRange { axis, naxes });
    }
    Ok(())
}

/// Result of trying to split off a death (or birth) block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extraction {
    Split {
        block: Block,
        complement: GridModule,
    },
    NoneFound,
    /// A kernel element at `point` admits no lift; only possible on modules
    /// failing the criterion.
    NotSplittable {
        point: Point,
    },
}

/// Axis subsets of size at least two, largest first.
fn death_axis_sets(n: usize) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| s.len() >= 2)
        .collect();
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    sets
}

/// Splits off a death block summand.
///
/// For an axis set `S` (all axes first), takes the intersection of the
/// kernel submodules along `S` and its lexicographically greatest support
/// point `p` among points at the top of every other axis. A nonzero element
/// there is lifted to the global minimum by one linear system; the lift
/// generates a copy of the box below `p`, which is injective and hence a
/// summand. The complement is the kernel of a retraction onto it.
pub fn split_death_block(m: &GridModule) -> Result<Extraction> {
    m.require_valid()?;
    let shape = m.shape();
    let f = m.field();
    let n = shape.naxes();
    if m.is_zero() {
        return Ok(Extraction::NoneFound);
    }
    let kernels = (0..n)
        .map(|i| kernel_submodule(m, i))
        .collect::<Result<Vec<_>>>()?;
    let sizes = shape.sizes();
    for axes in death_axis_sets(n) {
        let mut meet = kernels[axes[0]].clone();
        for &i in &axes[1..] {
            meet = meet.intersect(&kernels[i], m)?;
        }
        let on_slice = |q: &Point| (0..n).all(|i| axes.contains(&i) || q[i] == sizes[i] - 1);
        let Some(p_idx) = (0..shape.len())
            .rev()
            .find(|&i| meet.basis(i).cols() > 0 && on_slice(&shape.point(i)))
        else {
            continue;
        };
        let p = shape.point(p_idx);
        let target = meet.basis(p_idx).col(0);
        let origin = vec![0; n];

        // [M(0 ≤ p); M(0 ≤ (p_i + 1) e_i) for i ∈ S] x = [m; 0].
        let mut system = m.composite(&origin, &p)?;
        let mut rhs = target.clone();
        for &i in &axes {
            let mut e = origin.clone();
            e[i] = p[i] + 1;
            let kill = m.composite(&origin, &e)?;
            rhs.extend(std::iter::repeat_n(0, kill.rows()));
            system = system.vstack(&kill)?;
        }
        let Some(lift) = system.solve(f, &rhs)? else {
            if is_locally_block_decomposable(m)?.is_positive() {
                return Err(Error::Inconsistency(format!(
                    "no lift for a kernel element at {p:?} although the criterion holds"
                )));
            }
            return Ok(Extraction::NotSplittable { point: p });
        };
        let ranges = p.iter().map(|&c| (0, c)).collect();
        let block = Block::from_ranges(shape, ranges)?;
        let complement = complement_of_generated(m, &block, &lift)?;
        return Ok(Extraction::Split { block, complement });
    }
    Ok(Extraction::NoneFound)
}

/// The complement of the copy of `k_B` generated by `x ∈ M(min)`, where `B`
/// is a downset box: the kernel of a natural retraction `M → k_B`.
fn complement_of_generated(m: &GridModule, block: &Block, x: &[u32]) -> Result<GridModule> {
    let shape = m.shape();
    let f = m.field();
    let n = shape.naxes();
    let origin = vec![0; n];
    let in_block: Vec<bool> = shape.points().map(|q| block.contains(&q)).collect();
    for q in block.points() {
        if m.composite(&origin, q)?
            .mul_vec(f, x)
            .iter()
            .all(|&v| v == 0)
        {
            return Err(Error::Inconsistency(format!(
                "lifted generator vanishes at {q:?} inside its block"
            )));
        }
    }
    // Unknowns: the row vector r_q for every q in the block.
    let mut offset = vec![usize::MAX; shape.len()];
    let mut unknowns = 0;
    for idx in 0..shape.len() {
        if in_block[idx] {
            offset[idx] = unknowns;
            unknowns += m.dim(idx);
        }
    }
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut rhs = Vec::new();
    for idx in 0..shape.len() {
        for axis in 0..n {
            let Some(t) = shape.succ(idx, axis) else {
                continue;
            };
            if !in_block[t] {
                continue;
            }
            let step = m.step(idx, axis).unwrap();
            // k_B(q → t) r_q = r_t M(q → t), column by column.
            for c in 0..m.dim(idx) {
                let mut row = vec![0; unknowns];
                if in_block[idx] {
                    row[offset[idx] + c] = 1;
                }
                for k in 0..m.dim(t) {
                    let v = &mut row[offset[t] + k];
                    *v = f.sub(*v, step.get(k, c));
                }
                rows.push(row);
                rhs.push(0);
            }
        }
    }
    // r_min · x = 1
    let mut row = vec![0; unknowns];
    row[offset[0]..offset[0] + x.len()].copy_from_slice(x);
    rows.push(row);
    rhs.push(1);
    let system = Mat::from_vec(rows.len(), unknowns, rows.concat())?;
    let r = system
        .solve(f, &rhs)?
        .ok_or_else(|| Error::Inconsistency(format!("no retraction onto the block {block}")))?;
    let bases = (0..shape.len())
        .map(|idx| {
            if in_block[idx] {
                let d = m.dim(idx);
                Mat::from_vec(1, d, r[offset[idx]..offset[idx] + d].to_vec())
                    .unwrap()
                    .kernel_basis(f)
            } else {
                Mat::identity(m.dim(idx))
            }
        })
        .collect();
    Submodule { bases }.module(m)
}

/// Splits off a birth block summand via pointwise duality.
pub fn split_birth_block(m: &GridModule) -> Result<Extraction> {
    Ok(match split_death_block(&m.dual())? {
        Extraction::Split { block, complement } => Extraction::Split {
            block: block.dual(),
            complement: complement.dual(),
        },
        Extraction::NotSplittable { point } => Extraction::NotSplittable {
            point: m.shape().reverse(&point),
        },
        Extraction::NoneFound => Extraction::NoneFound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Generic,
    Constructive,
    /// Constructive on binary cubes, generic elsewhere.
    Auto,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(Method::Generic),
            "constructive" => Ok(Method::Constructive),
            "auto" => Ok(Method::Auto),
            other => Err(Error::Schema(format!("unknown method {other:?}"))),
        }
    }
}

/// A multiset of blocks, plus any summands that are not block modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub summands: BTreeMap<Block, usize>,
    pub non_block: Vec<GridModule>,
    /// Leaves among `non_block` that carry no indecomposability certificate.
    pub unsplit: usize,
    pub method: Method,
}

impl Decomposition {
    fn new(method: Method) -> Self {
        Decomposition {
            summands: BTreeMap::new(),
            non_block: Vec::new(),
            unsplit: 0,
            method,
        }
    }

    fn add(&mut self, block: Block) {
        *self.summands.entry(block).or_default() += 1;
    }

    pub fn is_block_decomposition(&self) -> bool {
        self.non_block.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.summands.values().sum()
    }

    /// Blocks with multiplicity, in order.
    pub fn blocks(&self) -> Vec<Block> {
        self.summands
            .iter()
            .flat_map(|(b, &k)| std::iter::repeat_n(b.clone(), k))
            .collect()
    }

    /// The multiset of dual blocks.
    pub fn dual_summands(&self) -> BTreeMap<Block, usize> {
        self.summands.iter().map(|(b, &k)| (b.dual(), k)).collect()
    }

    /// Checks that the blocks (with multiplicity) sum to a module isomorphic
    /// to `m`. Only meaningful for block decompositions.
    pub fn verify(&self, m: &GridModule, seed: u64) -> Result<bool> {
        let parts = self
            .blocks()
            .iter()
            .map(|b| block_module(m.shape(), b, m.field()))
            .collect::<Result<Vec<_>>>()?;
        let sum = GridModule::direct_sum_all(m.shape(), m.field(), parts.iter())?;
        if sum.dims() != m.dims() {
            return Ok(false);
        }
        sum.is_isomorphic(m, seed)
    }
}

/// What a decomposition request produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Decomposed(Decomposition),
    /// The criterion fails on this cube.
    Failure(Witness),
    /// Summands that resisted splitting after all retries.
    Incomplete {
        partial: Decomposition,
        residue: Vec<GridModule>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecomposeOptions {
    pub method: Method,
    pub seed: u64,
    pub trials: usize,
    pub retries: usize,
    pub jobs: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            method: Method::Auto,
            seed: 0,
            trials: DEFAULT_TRIALS,
            retries: DEFAULT_RETRIES,
            jobs: 1,
        }
    }
}

/// Seed of the `attempt`-th restart.
fn attempt_seed(seed: u64, attempt: usize) -> u64 {
    seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// One run of the generic engine, with no criterion check: each leaf is
/// recognized as a block or kept as a non-block summand.
pub fn generic_decomposition(m: &GridModule, trials: usize, seed: u64) -> Result<Decomposition> {
    let mut out = Decomposition::new(Method::Generic);
    for leaf in decompose_indecomposables(m, trials, seed)? {
        match recognize_block_summand(&leaf.module) {
            Some(b) => out.add(b),
            None => {
                if leaf.status == LeafStatus::Unsplit {
                    out.unsplit += 1;
                }
                out.non_block.push(leaf.module);
            }
        }
    }
    Ok(out)
}

/// Generic engine with restarts, for modules known to pass the criterion.
fn generic_with_retries(m: &GridModule, opts: &DecomposeOptions) -> Result<Outcome> {
    let mut last = None;
    for attempt in 0..=opts.retries {
        let d = generic_decomposition(m, opts.trials, attempt_seed(opts.seed, attempt))?;
        if d.is_block_decomposition() {
            return Ok(Outcome::Decomposed(d));
        }
        if d.unsplit < d.non_block.len() {
            return Err(Error::Inconsistency(
                "an indecomposable summand of a module passing the criterion is not a block".into(),
            ));
        }
        last = Some(d);
    }
    let mut partial = last.expect("at least one attempt");
    let residue = std::mem::take(&mut partial.non_block);
    partial.unsplit = 0;
    Ok(Outcome::Incomplete { partial, residue })
}

/// Block decomposition of a module that is exact on every square, over a
/// binary cube: decompose the restriction to the claw at the minimum and
/// extend every interval summand back by left Kan extension. `None` when the
/// shape is not a binary cube or the module is not exact.
pub fn decompose_2exact_cube(m: &GridModule, opts: &DecomposeOptions) -> Result<Option<Outcome>> {
    m.require_valid()?;
    let shape = m.shape();
    if !shape.is_binary_cube() {
        return Ok(None);
    }
    let check = CheckOptions {
        jobs: opts.jobs,
        ..Default::default()
    };
    if !exactness_profile_with(m, &check)?.iter().all(|l| l.exact()) {
        return Ok(None);
    }
    let claw = m.restrict_claw(&vec![0; shape.naxes()])?;
    let rep = claw.to_rep();
    let mut last_residue = Vec::new();
    for attempt in 0..=opts.retries {
        let mut rng = ChaCha8Rng::seed_from_u64(attempt_seed(opts.seed, attempt));
        let leaves = decompose_rep(&rep, opts.trials, &mut rng)?;
        if leaves.iter().any(|(_, s)| *s == LeafStatus::Unsplit) {
            last_residue = leaves
                .iter()
                .filter(|(_, s)| *s == LeafStatus::Unsplit)
                .map(|(r, _)| kan_extend_claw(&claw.with_rep(r), shape))
                .collect::<Result<Vec<_>>>()?;
            continue;
        }
        let mut out = Decomposition::new(Method::Constructive);
        for (leaf, _) in &leaves {
            if !is_tree_interval(leaf) {
                return Err(Error::Inconsistency(
                    "claw summand of an exact module is not an interval".into(),
                ));
            }
            let extended = kan_extend_claw(&claw.with_rep(leaf), shape)?;
            let block = recognize_block_summand(&extended).ok_or_else(|| {
                Error::Inconsistency("Kan extension of a claw interval is not a block".into())
            })?;
            out.add(block);
        }
        if !out.verify(m, opts.seed)? {
            return Err(Error::Inconsistency(
                "extended claw summands do not reassemble the module".into(),
            ));
        }
        return Ok(Some(Outcome::Decomposed(out)));
    }
    Ok(Some(Outcome::Incomplete {
        partial: Decomposition::new(Method::Constructive),
        residue: last_residue,
    }))
}

/// Interval test on a tree-shaped quiver: dimensions at most one, and the
/// support connected through nonzero maps.
fn is_tree_interval(rep: &Rep) -> bool {
    let dims = rep.dims();
    if dims.iter().any(|&d| d > 1) {
        return false;
    }
    let support = dims.iter().filter(|&&d| d == 1).count();
    let mut edges = 0;
    for a in rep.arrows() {
        if dims[a.src] == 1 && dims[a.dst] == 1 {
            if a.map.get(0, 0) == 0 {
                return false;
            }
            edges += 1;
        }
    }
    support > 0 && edges + 1 == support
}

/// Constructive engine: split off death and birth blocks while possible,
/// then finish on the exact remainder.
fn constructive(m: &GridModule, opts: &DecomposeOptions) -> Result<Outcome> {
    let mut out = Decomposition::new(Method::Constructive);
    let mut rest = m.clone();
    while !rest.is_zero() {
        let next = match split_death_block(&rest)? {
            Extraction::Split { block, complement } => Some((block, complement)),
            _ => match split_birth_block(&rest)? {
                Extraction::Split { block, complement } => Some((block, complement)),
                _ => None,
            },
        };
        let Some((block, complement)) = next else {
            break;
        };
        out.add(block);
        rest = complement;
    }
    if rest.is_zero() {
        return Ok(Outcome::Decomposed(out));
    }
    let finished = match decompose_2exact_cube(&rest, opts)? {
        Some(o) => o,
        None if rest.shape().is_binary_cube() => {
            return Err(Error::Inconsistency(
                "remainder after block extraction is not exact".into(),
            ))
        }
        None => generic_with_retries(&rest, opts)?,
    };
    Ok(match finished {
        Outcome::Decomposed(d) => {
            for b in d.blocks() {
                out.add(b);
            }
            Outcome::Decomposed(out)
        }
        Outcome::Incomplete { partial, residue } => {
            for b in partial.blocks() {
                out.add(b);
            }
            Outcome::Incomplete {
                partial: out,
                residue,
            }
        }
        failure @ Outcome::Failure(_) => failure,
    })
}

/// Checks the criterion, then decomposes into blocks with the chosen engine.
pub fn decompose_blocks(m: &GridModule, opts: &DecomposeOptions) -> Result<Outcome> {
    let check = CheckOptions {
        jobs: opts.jobs,
        ..Default::default()
    };
    if let Verdict::NotBlockDecomposable(w) = check_criterion(m, &check)? {
        return Ok(Outcome::Failure(w));
    }
    let method = match opts.method {
        Method::Auto if m.shape().is_binary_cube() => Method::Constructive,
        Method::Auto => Method::Generic,
        other => other,
    };
    match method {
        Method::Constructive => constructive(m, opts),
        _ => generic_with_retries(m, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{enumerate_blocks, BlockKind};
    use crate::gridmod::{interval_module, GridShape, IntervalSet};
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
    fn end_dims() {
        let s = shape(&[2, 2]);
        let sum = interval(&s, &[&[0, 0]])
            .direct_sum(&interval(&s, &[&[1, 1]]))
            .unwrap();
        assert_eq!(end_basis(&sum).len(), 2);
        assert_eq!(end_basis(&GridModule::zero(s, fp())).len(), 0);
    }

    #[test]
    fn fitting_examples() {
        let s = shape(&[2, 2]);
        let a = interval(&s, &[&[0, 0]]);
        let b = full(&s);
        let m = a.direct_sum(&b).unwrap();
        assert_eq!(fitting_split(&m, &Endo::identity(&m)).unwrap(), None);
        // Projection onto the first summand.
        let proj: Vec<Mat> = (0..s.len())
            .map(|i| {
                let mut p = Mat::zeros(m.dim(i), m.dim(i));
                if a.dim(i) == 1 {
                    p.set(0, 0, 1);
                }
                p
            })
            .collect();
        let phi = Endo::new(&m, proj).unwrap();
        let (ker, im) = fitting_split(&m, &phi).unwrap().unwrap();
        assert_eq!(im.dims(), vec![1, 0, 0, 0]);
        assert_eq!(ker.dims(), vec![1, 1, 1, 1]);
        // Not natural: swaps the summands at the origin.
        let mut bad: Vec<Mat> = (0..s.len()).map(|i| Mat::identity(m.dim(i))).collect();
        bad[0] = Mat::from_rows(fp(), &[vec![0, 1], vec![1, 0]], 2).unwrap();
        assert!(matches!(
            fitting_split(&m, &Endo { maps: bad }),
            Err(Error::NotNatural { .. })
        ));
    }

    #[test]
    fn kernel_and_image_submodules() {
        let s = shape(&[2, 2]);
        let death = interval(&s, &[&[0, 0]]);
        assert_eq!(
            kernel_submodule(&death, 0).unwrap().dims(),
            vec![1, 0, 0, 0]
        );
        assert_eq!(image_submodule(&death, 0).unwrap().dims(), vec![1, 0, 0, 0]);
        let birth = interval(&s, &[&[1, 1]]);
        assert_eq!(image_submodule(&birth, 0).unwrap().dims(), vec![0, 0, 0, 0]);
        assert!(kernel_submodule(&full(&s), 1).unwrap().is_zero());
        assert_eq!(
            image_submodule(&full(&s), 1).unwrap().dims(),
            vec![1, 1, 1, 1]
        );
    }

    #[test]
    fn death_and_birth_extraction() {
        let s = shape(&[2, 2]);
        let m = interval(&s, &[&[0, 0]])
            .direct_sum(&full(&s))
            .unwrap()
            .scramble(5);
        let Extraction::Split { block, complement } = split_death_block(&m).unwrap() else {
            panic!("expected a split");
        };
        assert_eq!(block.kind(), BlockKind::Death);
        assert!(complement.is_isomorphic(&full(&s), 1).unwrap());
        assert_eq!(split_death_block(&full(&s)).unwrap(), Extraction::NoneFound);

        let m = interval(&s, &[&[1, 1]])
            .direct_sum(&full(&s))
            .unwrap()
            .scramble(6);
        let Extraction::Split { block, complement } = split_birth_block(&m).unwrap() else {
            panic!("expected a split");
        };
        assert_eq!(block.points(), &[vec![1, 1]]);
        assert!(complement.is_isomorphic(&full(&s), 2).unwrap());
        assert_eq!(split_birth_block(&full(&s)).unwrap(), Extraction::NoneFound);
    }

    #[test]
    fn induced_death_block_on_slice() {
        // [0,0] x [0,0] x full on a 2x2x2 grid.
        let s = shape(&[2, 2, 2]);
        let m = interval(&s, &[&[0, 0, 0], &[0, 0, 1]]);
        let Extraction::Split { block, complement } = split_death_block(&m).unwrap() else {
            panic!("expected a split");
        };
        assert_eq!(block.full_axes(), vec![2]);
        assert!(complement.is_zero());
    }

    #[test]
    fn cube_pipeline() {
        let s = shape(&[2, 2, 2]);
        let opts = DecomposeOptions::default();
        let Some(Outcome::Decomposed(d)) = decompose_2exact_cube(&full(&s), &opts).unwrap() else {
            panic!("expected a decomposition");
        };
        assert_eq!(d.block_count(), 1);
        let slab = interval(&s, &[&[1, 0, 0], &[1, 1, 0], &[1, 0, 1], &[1, 1, 1]]);
        let Some(Outcome::Decomposed(d)) = decompose_2exact_cube(&slab.scramble(3), &opts).unwrap()
        else {
            panic!("expected a decomposition");
        };
        assert_eq!(d.blocks()[0].points(), slab_points().as_slice());
        let death = interval(&s, &[&[0, 0, 0]]);
        assert_eq!(decompose_2exact_cube(&death, &opts).unwrap(), None);
    }

    fn slab_points() -> Vec<Point> {
        vec![vec![1, 0, 0], vec![1, 0, 1], vec![1, 1, 0], vec![1, 1, 1]]
    }

    #[test]
    fn all_blocks_of_a_square_round_trip() {
        let s = shape(&[2, 2]);
        let blocks = enumerate_blocks(&s).unwrap();
        let parts: Vec<GridModule> = blocks
            .iter()
            .map(|b| block_module(&s, b, fp()).unwrap())
            .collect();
        let m = GridModule::direct_sum_all(&s, fp(), parts.iter())
            .unwrap()
            .scramble(11);
        assert_eq!(m.dim_at(&[1, 1]), 4);
        for method in [Method::Generic, Method::Constructive] {
            let opts = DecomposeOptions {
                method,
                ..Default::default()
            };
            let Outcome::Decomposed(d) = decompose_blocks(&m, &opts).unwrap() else {
                panic!("expected a decomposition");
            };
            assert_eq!(d.blocks(), blocks);
            assert!(d.verify(&m, 4).unwrap());
        }
    }

    #[test]
    fn zero_module_decomposes_to_nothing() {
        let m = GridModule::zero(shape(&[2, 3]), fp());
        let Outcome::Decomposed(d) = decompose_blocks(&m, &DecomposeOptions::default()).unwrap()
        else {
            panic!("expected a decomposition");
        };
        assert!(d.summands.is_empty());
        assert!(decompose_indecomposables(&m, 4, 0).unwrap().is_empty());
    }
}

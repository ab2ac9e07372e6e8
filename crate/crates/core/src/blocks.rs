//! Blocks on finite grids: recognition, enumeration and block modules.
//!
//! Every block is a product of per-axis intervals. With `N` the set of axes
//! whose factor is not the whole axis, a product is a block exactly when
//! `|N| ≤ 1` (bands and induced bands), or every factor on `N` is a proper
//! upset (birth), or every factor on `N` is a proper downset (death).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridmod::{interval_module, GridModule, GridShape, IntervalSet, Point};
use crate::linalg::PrimeField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    Birth,
    Death,
    BandInduced,
}

impl BlockKind {
    pub fn dual(self) -> Self {
        match self {
            BlockKind::Birth => BlockKind::Death,
            BlockKind::Death => BlockKind::Birth,
            BlockKind::BandInduced => BlockKind::BandInduced,
        }
    }
}

/// A block identified by its point set. Ordering and equality follow the
/// sorted point list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    points: Vec<Point>,
    /// Inclusive coordinate range per axis.
    ranges: Vec<(usize, usize)>,
    kind: BlockKind,
    sizes: Vec<usize>,
}

/// Serialized form of a block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    pub points: Vec<Point>,
    pub kind: BlockKind,
}

fn classify(sizes: &[usize], ranges: &[(usize, usize)]) -> Option<BlockKind> {
    let partial: Vec<usize> = (0..sizes.len())
        .filter(|&i| ranges[i] != (0, sizes[i] - 1))
        .collect();
    if partial.len() <= 1 {
        return Some(BlockKind::BandInduced);
    }
    if partial
        .iter()
        .all(|&i| ranges[i].0 >= 1 && ranges[i].1 == sizes[i] - 1)
    {
        return Some(BlockKind::Birth);
    }
    if partial
        .iter()
        .all(|&i| ranges[i].0 == 0 && ranges[i].1 + 2 <= sizes[i])
    {
        return Some(BlockKind::Death);
    }
    None
}

/// Per-axis ranges when `points` is a non-empty product of per-axis intervals.
fn product_ranges(shape: &GridShape, points: &[Point]) -> Option<Vec<(usize, usize)>> {
    let n = shape.naxes();
    let distinct: BTreeSet<&Point> = points.iter().collect();
    if distinct.is_empty() || distinct.iter().any(|p| !shape.contains(p)) {
        return None;
    }
    let mut ranges = Vec::with_capacity(n);
    let mut volume = 1usize;
    for axis in 0..n {
        let coords: BTreeSet<usize> = distinct.iter().map(|p| p[axis]).collect();
        let (lo, hi) = (*coords.first()?, *coords.last()?);
        if coords.len() != hi - lo + 1 {
            return None;
        }
        volume *= coords.len();
        ranges.push((lo, hi));
    }
    // A subset of the bounding box with the box's cardinality is the box.
    (volume == distinct.len()).then_some(ranges)
}

fn box_points(ranges: &[(usize, usize)]) -> Vec<Point> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|p: Point| {
                (lo..=hi).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// True when `points` is a block of `shape`.
pub fn is_block(shape: &GridShape, points: &[Point]) -> bool {
    product_ranges(shape, points).is_some_and(|r| classify(shape.sizes(), &r).is_some())
}

impl Block {
    /// The block with the given inclusive per-axis ranges.
    pub fn from_ranges(shape: &GridShape, ranges: Vec<(usize, usize)>) -> Result<Block> {
        let sizes = shape.sizes();
        if ranges.len() != sizes.len()
            || ranges
                .iter()
                .zip(sizes)
                .any(|(&(lo, hi), &s)| lo > hi || hi >= s)
        {
            return Err(Error::NotABlock);
        }
        let kind = classify(sizes, &ranges).ok_or(Error::NotABlock)?;
        Ok(Block {
            points: box_points(&ranges),
            ranges,
            kind,
            sizes: sizes.to_vec(),
        })
    }

    pub fn from_points(shape: &GridShape, points: &[Point]) -> Result<Block> {
        let ranges = product_ranges(shape, points).ok_or(Error::NotABlock)?;
        Block::from_ranges(shape, ranges)
    }

    pub fn from_json(shape: &GridShape, json: &BlockJson) -> Result<Block> {
        let b = Block::from_points(shape, &json.points)?;
        if b.kind != json.kind {
            return Err(Error::Schema(format!(
                "block {b} is {:?}, not {:?}",
                b.kind, json.kind
            )));
        }
        Ok(b)
    }

    pub fn to_json(&self) -> BlockJson {
        BlockJson {
            points: self.points.clone(),
            kind: self.kind,
        }
    }

    /// Sorted point list.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn ranges(&self) -> &[(usize, usize)] {
        &self.ranges
    }

    pub fn kind(&self) -> BlockKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[usize]) -> bool {
        p.len() == self.ranges.len()
            && p.iter()
                .zip(&self.ranges)
                .all(|(&c, &(lo, hi))| lo <= c && c <= hi)
    }

    /// Axes on which the block spans the whole axis.
    pub fn full_axes(&self) -> Vec<usize> {
        (0..self.sizes.len())
            .filter(|&i| self.ranges[i] == (0, self.sizes[i] - 1))
            .collect()
    }

    pub fn interval_set(&self, shape: &GridShape) -> Result<IntervalSet> {
        if shape.sizes() != self.sizes {
            return Err(Error::Incompatible);
        }
        IntervalSet::new(shape, &self.points)
    }

    /// The same block seen in the order-reversed grid.
    pub fn dual(&self) -> Block {
        let ranges: Vec<(usize, usize)> = self
            .ranges
            .iter()
            .zip(&self.sizes)
            .map(|(&(lo, hi), &s)| (s - 1 - hi, s - 1 - lo))
            .collect();
        let shape = GridShape::new(self.sizes.clone()).expect("block sizes form a shape");
        Block::from_ranges(&shape, ranges).expect("duals of blocks are blocks")
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            BlockKind::Birth => "birth",
            BlockKind::Death => "death",
            BlockKind::BandInduced => "band",
        };
        write!(f, "{kind} ")?;
        for (i, (lo, hi)) in self.ranges.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "[{lo},{hi}]")?;
        }
        Ok(())
    }
}

/// Every block of `shape`, sorted by point list.
pub fn enumerate_blocks(shape: &GridShape) -> Result<Vec<Block>> {
    let sizes = shape.sizes();
    let n = sizes.len();
    if n < 2 {
        return Err(Error::TooFewAxes(n));
    }
    let full: Vec<(usize, usize)> = sizes.iter().map(|&s| (0, s - 1)).collect();
    let mut found: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    // One interval on one axis, everything else full.
    for axis in 0..n {
        for lo in 0..sizes[axis] {
            for hi in lo..sizes[axis] {
                let mut r = full.clone();
                r[axis] = (lo, hi);
                found.insert(r);
            }
        }
    }
    // Proper upsets or proper downsets on a set of at least two axes.
    for subset in 0u32..(1 << n) {
        let axes: Vec<usize> = (0..n).filter(|&i| subset >> i & 1 == 1).collect();
        if axes.len() < 2 || axes.iter().any(|&i| sizes[i] < 2) {
            continue;
        }
        let mut cut = vec![1usize; axes.len()];
        loop {
            let mut up = full.clone();
            let mut down = full.clone();
            for (t, &i) in axes.iter().enumerate() {
                up[i] = (cut[t], sizes[i] - 1);
                down[i] = (0, cut[t] - 1);
            }
            found.insert(up);
            found.insert(down);
            let Some(t) = (0..axes.len()).rev().find(|&t| cut[t] + 1 < sizes[axes[t]]) else {
                break;
            };
            cut[t] += 1;
            for c in cut.iter_mut().skip(t + 1) {
                *c = 1;
            }
        }
    }
    let mut blocks = found
        .into_iter()
        .map(|r| Block::from_ranges(shape, r))
        .collect::<Result<Vec<_>>>()?;
    blocks.sort();
    Ok(blocks)
}

pub fn block_module(shape: &GridShape, block: &Block, field: PrimeField) -> Result<GridModule> {
    Ok(interval_module(shape, &block.interval_set(shape)?, field))
}

/// The block supporting `m` when `m` is a block module: dimensions at most
/// one, block support, and nonzero steps between support points.
pub fn recognize_block_summand(m: &GridModule) -> Option<Block> {
    let shape = m.shape();
    if m.dims().iter().any(|&d| d > 1) {
        return None;
    }
    let support: Vec<usize> = (0..shape.len()).filter(|&i| m.dim(i) == 1).collect();
    let points: Vec<Point> = support.iter().map(|&i| shape.point(i)).collect();
    let block = Block::from_points(shape, &points).ok()?;
    for &idx in &support {
        for axis in 0..shape.naxes() {
            if let Some(t) = shape.succ(idx, axis) {
                if m.dim(t) == 1 && m.step(idx, axis).unwrap().get(0, 0) == 0 {
                    return None;
                }
            }
        }
    }
    Some(block)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(s: &[usize]) -> GridShape {
        GridShape::new(s.to_vec()).unwrap()
    }

    #[test]
    fn small_counts() {
        let blocks = enumerate_blocks(&shape(&[2, 2])).unwrap();
        assert_eq!(blocks.len(), 7);
        let kinds: Vec<BlockKind> = blocks.iter().map(Block::kind).collect();
        assert_eq!(kinds.iter().filter(|&&k| k == BlockKind::Birth).count(), 1);
        assert_eq!(kinds.iter().filter(|&&k| k == BlockKind::Death).count(), 1);
        assert!(enumerate_blocks(&shape(&[2])).is_err());
    }

    #[test]
    fn recognition_examples() {
        let s = shape(&[2, 2]);
        assert!(is_block(&s, &[vec![1, 1]]));
        let s3 = shape(&[2, 2, 2]);
        let ex38 = [vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1]];
        assert!(!is_block(&s3, &ex38));
        let s33 = shape(&[3, 3]);
        let band = [vec![1, 0], vec![1, 1], vec![1, 2]];
        let b = Block::from_points(&s33, &band).unwrap();
        assert_eq!(b.kind(), BlockKind::BandInduced);
        // A rectangle strictly inside is not a block.
        assert!(!is_block(&s33, &[vec![1, 1]]));
        assert!(!is_block(&s33, &[]));
        assert!(!is_block(&s33, &[vec![0, 0], vec![2, 0]]));
    }

    #[test]
    fn full_grid_is_one_block() {
        let s = shape(&[2, 3]);
        let blocks = enumerate_blocks(&s).unwrap();
        let full: Vec<&Block> = blocks.iter().filter(|b| b.len() == 6).collect();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].full_axes(), vec![0, 1]);
    }

    #[test]
    fn dual_swaps_kinds() {
        let s = shape(&[3, 2, 2]);
        let blocks = enumerate_blocks(&s).unwrap();
        let mut duals: Vec<Block> = blocks.iter().map(Block::dual).collect();
        for (b, d) in blocks.iter().zip(&duals) {
            assert_eq!(d.kind(), b.kind().dual());
            assert_eq!(&d.dual(), b);
        }
        duals.sort();
        assert_eq!(duals, blocks);
    }

    #[test]
    fn block_module_and_recognition() {
        let s = shape(&[2, 2]);
        let death = Block::from_points(&s, &[vec![0, 0]]).unwrap();
        assert_eq!(death.kind(), BlockKind::Death);
        let m = block_module(&s, &death, PrimeField::default()).unwrap();
        assert_eq!(recognize_block_summand(&m), Some(death.clone()));
        assert_eq!(recognize_block_summand(&m.scramble(3)), Some(death));
    }

    #[test]
    fn json_round_trip() {
        let s = shape(&[3, 3]);
        for b in enumerate_blocks(&s).unwrap() {
            let text = serde_json::to_string(&b.to_json()).unwrap();
            let back: BlockJson = serde_json::from_str(&text).unwrap();
            assert_eq!(Block::from_json(&s, &back).unwrap(), b);
        }
    }
}

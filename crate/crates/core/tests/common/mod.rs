//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use blockdec::gridmod::GridModule;
use blockdec::koszul::Cube;
use blockdec::linalg::{Mat, PrimeField};

/// Differentials of the Koszul complex from the closed sign formula: the
/// component `M_{A∖x} → M_A` is `(−1)^{#{a ∈ A : a > x}}` times the structure
/// map, and components of each degree are ordered by bitmask.
/// `out[j - 1]` maps degree `j` to degree `j - 1`.
pub fn explicit_koszul(m: &GridModule, cube: &Cube) -> Vec<Mat> {
    let f = m.field();
    let local = m.restrict_cube(cube).unwrap();
    let k = cube.dim();
    let ls = local.shape().clone();
    let index = |mask: u32| -> usize {
        let p: Vec<usize> = (0..k).map(|j| (mask >> j & 1) as usize).collect();
        ls.index(&p)
    };
    let degree_masks = |j: usize| -> Vec<u32> {
        (0u32..1 << k)
            .filter(|a| a.count_ones() as usize == k - j)
            .collect()
    };
    let offsets = |masks: &[u32]| -> Vec<usize> {
        let mut acc = 0;
        masks
            .iter()
            .map(|&a| {
                let o = acc;
                acc += local.dim(index(a));
                o
            })
            .collect()
    };
    let mut out = Vec::new();
    for j in 1..=k {
        let src = degree_masks(j);
        let dst = degree_masks(j - 1);
        let so = offsets(&src);
        let dso = offsets(&dst);
        let rows: usize = dst.iter().map(|&a| local.dim(index(a))).sum();
        let cols: usize = src.iter().map(|&a| local.dim(index(a))).sum();
        let mut d = Mat::zeros(rows, cols);
        for (si, &a) in src.iter().enumerate() {
            for x in 0..k {
                if a >> x & 1 == 1 {
                    continue;
                }
                let target = a | 1 << x;
                let ti = dst.iter().position(|&b| b == target).unwrap();
                let above = (a >> (x + 1)).count_ones();
                let step = local.step(index(a), x).unwrap();
                let block = if above % 2 == 1 {
                    step.neg(f)
                } else {
                    step.clone()
                };
                d.paste(dso[ti], so[si], &block);
            }
        }
        out.push(d);
    }
    out
}

/// Homology in degrees `0..=k` from a list of differentials.
pub fn homology_from(f: PrimeField, chain: &[usize], diffs: &[Mat]) -> Vec<usize> {
    let k = diffs.len();
    let rank = |j: usize| {
        if j == 0 || j > k {
            0
        } else {
            diffs[j - 1].rank(f)
        }
    };
    (0..=k).map(|j| chain[j] - rank(j) - rank(j + 1)).collect()
}

/// Degree-one homology of a module on a square, from the square's four maps.
pub fn square_middle_homology(m: &GridModule, cube: &Cube) -> usize {
    let f = m.field();
    let l = m.restrict_cube(cube).unwrap();
    let s = l.shape().clone();
    let (v0, v1, v2) = (s.index(&[0, 0]), s.index(&[1, 0]), s.index(&[0, 1]));
    // M_∅ → M_1 ⊕ M_2 → M_12
    let into = l
        .step(v0, 0)
        .unwrap()
        .vstack(l.step(v0, 1).unwrap())
        .unwrap();
    let out = l
        .step(v1, 1)
        .unwrap()
        .hstack(&l.step(v2, 0).unwrap().neg(f))
        .unwrap();
    l.dim(v1) + l.dim(v2) - out.rank(f) - into.rank(f)
}

fn is_full(s: &BTreeSet<usize>, size: usize) -> bool {
    s.len() == size
}

fn is_proper_upset(s: &BTreeSet<usize>, size: usize) -> bool {
    !s.is_empty() && s.len() < size && s.iter().all(|&x| (x..size).all(|y| s.contains(&y)))
}

fn is_proper_downset(s: &BTreeSet<usize>, size: usize) -> bool {
    !s.is_empty() && s.len() < size && s.iter().all(|&x| (0..=x).all(|y| s.contains(&y)))
}

fn is_chain_interval(s: &BTreeSet<usize>) -> bool {
    match (s.first(), s.last()) {
        (Some(&a), Some(&b)) => s.len() == b - a + 1,
        _ => false,
    }
}

/// The recursive block definition applied to a product of per-axis subsets.
pub fn literal_is_block(factors: &[BTreeSet<usize>], sizes: &[usize]) -> bool {
    let n = factors.len();
    if n < 2 || factors.iter().any(BTreeSet::is_empty) {
        return false;
    }
    let birth = factors
        .iter()
        .zip(sizes)
        .all(|(s, &z)| is_proper_upset(s, z));
    let death = factors
        .iter()
        .zip(sizes)
        .all(|(s, &z)| is_proper_downset(s, z));
    if birth || death {
        return true;
    }
    if n == 2 {
        return (is_full(&factors[0], sizes[0]) && is_chain_interval(&factors[1]))
            || (is_full(&factors[1], sizes[1]) && is_chain_interval(&factors[0]));
    }
    (0..n).any(|i| {
        if !is_full(&factors[i], sizes[i]) {
            return false;
        }
        let rest: Vec<BTreeSet<usize>> = (0..n)
            .filter(|&j| j != i)
            .map(|j| factors[j].clone())
            .collect();
        let rest_sizes: Vec<usize> = (0..n).filter(|&j| j != i).map(|j| sizes[j]).collect();
        literal_is_block(&rest, &rest_sizes)
    })
}

/// All permutations of `0..k`.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

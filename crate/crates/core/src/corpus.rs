//! Seeded random modules: scrambled sums of blocks and of random intervals.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocks::{block_module, enumerate_blocks, Block};
use crate::error::Result;
use crate::gridmod::{interval_module, leq, GridModule, GridShape, IntervalSet};
use crate::linalg::PrimeField;

/// A scrambled direct sum of `count` blocks drawn uniformly with replacement,
/// with the drawn multiset.
pub fn random_block_sum(
    shape: &GridShape,
    count: usize,
    seed: u64,
    field: PrimeField,
) -> Result<(GridModule, BTreeMap<Block, usize>)> {
    let blocks = enumerate_blocks(shape)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut truth = BTreeMap::new();
    let mut parts = Vec::with_capacity(count);
    for _ in 0..count {
        let b = &blocks[rng.gen_range(0..blocks.len())];
        parts.push(block_module(shape, b, field)?);
        *truth.entry(b.clone()).or_default() += 1;
    }
    let sum = GridModule::direct_sum_all(shape, field, parts.iter())?;
    Ok((sum.scramble(rng.gen()), truth))
}

/// A random interval: the component of a random point in the intersection of
/// the upset and the downset generated by one or two random points each.
pub fn random_interval(shape: &GridShape, rng: &mut ChaCha8Rng) -> IntervalSet {
    let len = shape.len();
    loop {
        let gens = |rng: &mut ChaCha8Rng| -> Vec<usize> {
            let k = rng.gen_range(1..=2);
            (0..k).map(|_| rng.gen_range(0..len)).collect()
        };
        let lows = gens(rng);
        let highs = gens(rng);
        let member: Vec<bool> = (0..len)
            .map(|i| {
                let p = shape.point(i);
                lows.iter().any(|&g| leq(&shape.point(g), &p))
                    && highs.iter().any(|&g| leq(&p, &shape.point(g)))
            })
            .collect();
        let members: Vec<usize> = (0..len).filter(|&i| member[i]).collect();
        if members.is_empty() {
            continue;
        }
        let seed = members[rng.gen_range(0..members.len())];
        let mut comp = vec![false; len];
        comp[seed] = true;
        let mut stack = vec![seed];
        while let Some(i) = stack.pop() {
            for axis in 0..shape.naxes() {
                for nb in [shape.succ(i, axis), shape.pred(i, axis)]
                    .into_iter()
                    .flatten()
                {
                    if member[nb] && !comp[nb] {
                        comp[nb] = true;
                        stack.push(nb);
                    }
                }
            }
        }
        // A component of a convex set is convex.
        let points: Vec<_> = (0..len)
            .filter(|&i| comp[i])
            .map(|i| shape.point(i))
            .collect();
        return IntervalSet::new(shape, &points).expect("components of convex sets are intervals");
    }
}

/// A scrambled direct sum of `count` random interval modules, with the intervals.
pub fn random_interval_sum(
    shape: &GridShape,
    count: usize,
    seed: u64,
    field: PrimeField,
) -> Result<(GridModule, Vec<IntervalSet>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<IntervalSet> = (0..count)
        .map(|_| random_interval(shape, &mut rng))
        .collect();
    let parts: Vec<GridModule> = sets
        .iter()
        .map(|s| interval_module(shape, s, field))
        .collect();
    let sum = GridModule::direct_sum_all(shape, field, parts.iter())?;
    Ok((sum.scramble(rng.gen()), sets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::recognize_block_summand;

    #[test]
    fn block_sum_basics() {
        let f = PrimeField::default();
        let s = GridShape::new(vec![2, 2]).unwrap();
        let (m, truth) = random_block_sum(&s, 0, 1, f).unwrap();
        assert!(m.is_zero() && truth.is_empty());
        for seed in 0..10 {
            let (m, truth) = random_block_sum(&s, 1, seed, f).unwrap();
            let (b, _) = truth.iter().next().unwrap();
            assert_eq!(recognize_block_summand(&m).as_ref(), Some(b));
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let f = PrimeField::default();
        let s = GridShape::new(vec![3, 2, 2]).unwrap();
        assert_eq!(
            random_interval_sum(&s, 3, 4, f).unwrap(),
            random_interval_sum(&s, 3, 4, f).unwrap()
        );
        assert_eq!(
            random_block_sum(&s, 3, 4, f).unwrap(),
            random_block_sum(&s, 3, 4, f).unwrap()
        );
    }
}

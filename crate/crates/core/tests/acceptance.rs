//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines are always shown.
//! All counts, seeds, time limits and randomization budgets are pinned below.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use blockdec::blocks::{block_module, enumerate_blocks, Block};
use blockdec::corpus::{random_block_sum, random_interval_sum};
use blockdec::decomp::{
    decompose_blocks, end_basis, generic_decomposition, DecomposeOptions, Method, Outcome,
};
use blockdec::fixtures;
use blockdec::gridmod::{GridModule, GridShape};
use blockdec::koszul::{
    enumerate_cubes, exactness_flags, exactness_profile, homology_dims,
    is_locally_block_decomposable, koszul_complex, koszul_complex_with_order, Verdict,
};
use blockdec::linalg::{PrimeField, DEFAULT_PRIME};

const FIXTURE_LIMIT: Duration = Duration::from_secs(1);
const BLOCKS_LIMIT: Duration = Duration::from_secs(30);
const CORPUS_LIMIT: Duration = Duration::from_secs(300);
const ROUND_TRIP_LIMIT: Duration = Duration::from_secs(300);

/// Splitting attempts per summand and fresh-seed restarts.
const TRIALS: usize = 24;
const RETRIES: usize = 3;

const CORPUS_SIZE: usize = 500;
const CORPUS_SEED: u64 = 0xB10C;
const MAX_SUMMANDS: usize = 6;
const ROUND_TRIPS: usize = 200;
const ROUND_TRIP_SEED: u64 = 0xD1CE;
const KOSZUL_MODULES: usize = 100;
const KOSZUL_SEED: u64 = 0xC0DE;
/// Smaller corpus sizes for the characteristic-two rerun.
const PROBE_CORPUS_SIZE: usize = 150;
const PROBE_ROUND_TRIPS: usize = 60;

const CORPUS_SHAPES: [&[usize]; 8] = [
    &[2, 2],
    &[2, 3],
    &[3, 2],
    &[3, 3],
    &[2, 2, 2],
    &[3, 2, 2],
    &[2, 3, 3],
    &[3, 3, 3],
];

struct Suite {
    failures: usize,
}

impl Suite {
    fn report(
        &mut self,
        id: &str,
        name: &str,
        started: Instant,
        limit: Duration,
        result: Result<String, String>,
    ) {
        let elapsed = started.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            self.failures += 1;
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id}: {name} ({elapsed:.2?}) {detail}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn shape(s: &[usize]) -> GridShape {
    GridShape::new(s.to_vec()).unwrap()
}

/// A corpus module with its generator kind.
struct Sample {
    module: GridModule,
    from_blocks: bool,
}

fn corpus(size: usize, seed: u64, field: PrimeField) -> Vec<Sample> {
    (0..size)
        .map(|i| {
            let s = shape(CORPUS_SHAPES[i % CORPUS_SHAPES.len()]);
            let count = 1 + (i / CORPUS_SHAPES.len()) % MAX_SUMMANDS;
            let sub = seed.wrapping_add(i as u64);
            if i % 2 == 0 {
                Sample {
                    module: random_block_sum(&s, count, sub, field).unwrap().0,
                    from_blocks: true,
                }
            } else {
                Sample {
                    module: random_interval_sum(&s, count, sub, field).unwrap().0,
                    from_blocks: false,
                }
            }
        })
        .collect()
}

/// Generic oracle: `Some(true)` when the module splits into block modules
/// only, `Some(false)` when a certified non-block summand appears, `None`
/// when unsplit residue survives every restart.
fn generic_oracle(m: &GridModule, seed: u64) -> Option<bool> {
    for attempt in 0..=RETRIES as u64 {
        let d = generic_decomposition(m, TRIALS, seed.wrapping_add(attempt * 7919)).unwrap();
        if d.is_block_decomposition() {
            return Some(true);
        }
        if d.unsplit < d.non_block.len() {
            return Some(false);
        }
    }
    None
}

fn opts(method: Method, seed: u64) -> DecomposeOptions {
    DecomposeOptions {
        method,
        seed,
        trials: TRIALS,
        retries: RETRIES,
        jobs: 1,
    }
}

fn decomposed(m: &GridModule, method: Method, seed: u64) -> Result<BTreeMap<Block, usize>, String> {
    match decompose_blocks(m, &opts(method, seed)).map_err(|e| e.to_string())? {
        Outcome::Decomposed(d) => Ok(d.summands),
        Outcome::Failure(w) => Err(format!("criterion failed at {:?}", w.cube)),
        Outcome::Incomplete { residue, .. } => {
            Err(format!("{} summands left unsplit", residue.len()))
        }
    }
}

fn criterion_1(field: PrimeField) -> Result<String, String> {
    let m = fixtures::ex37(field);
    let verdict = is_locally_block_decomposable(&m).map_err(|e| e.to_string())?;
    let w = verdict.witness().ok_or("criterion unexpectedly holds")?;
    ensure(w.cube.dim() == 3 && w.degree == 2, || {
        format!("witness {w:?}")
    })?;
    let cube = &enumerate_cubes(m.shape(), 3).unwrap()[0];
    let kc = koszul_complex(&m, cube).unwrap();
    ensure(kc.chain_dims() == [0, 0, 3, 2], || {
        format!("chain dims {:?}", kc.chain_dims())
    })?;
    let h = homology_dims(&kc, field);
    ensure(h == [0, 0, 1, 0], || format!("homology {h:?}"))?;
    let oracle = common::homology_from(field, kc.chain_dims(), &common::explicit_koszul(&m, cube));
    ensure(oracle == h, || format!("sign-formula homology {oracle:?}"))?;
    for face in enumerate_cubes(m.shape(), 2).unwrap() {
        let fl = exactness_flags(&m, &face).unwrap();
        ensure(fl.middle, || format!("face {face:?} not middle exact"))?;
    }
    let e = end_basis(&m).len();
    ensure(e == 1, || format!("dim End = {e}"))?;
    Ok("3-cube homology (0,0,1,0), faces middle exact, dim End = 1".into())
}

fn criterion_2(field: PrimeField) -> Result<String, String> {
    let m = fixtures::ex38(field);
    let s = m.shape().clone();
    let verdict = is_locally_block_decomposable(&m).map_err(|e| e.to_string())?;
    let w = verdict.witness().ok_or("criterion unexpectedly holds")?;
    let front = blockdec::koszul::Cube::new(&s, vec![0, 1], vec![0, 0, 0], vec![1, 1, 0]).unwrap();
    ensure(w.cube == front && w.degree == 1, || {
        format!("witness {w:?}")
    })?;
    ensure(w.homology == [0, 1, 0], || {
        format!("front face homology {:?}", w.homology)
    })?;
    let sq = common::square_middle_homology(&m, &front);
    ensure(sq == 1, || format!("square oracle gives {sq}"))?;
    let cube = &enumerate_cubes(&s, 3).unwrap()[0];
    let h = homology_dims(&koszul_complex(&m, cube).unwrap(), field);
    ensure(h == [0, 0, 0, 0], || format!("3-cube homology {h:?}"))?;
    let failing = enumerate_cubes(&s, 2)
        .unwrap()
        .into_iter()
        .filter(|c| !exactness_flags(&m, c).unwrap().middle)
        .count();
    Ok(format!(
        "first failing face is the front face with homology (0,1,0); 3-cube homology (0,0,0,0); {failing} of 12 faces fail"
    ))
}

fn criterion_3(field: PrimeField) -> Result<String, String> {
    let mut total = 0;
    for s in [&[2, 2][..], &[3, 3], &[2, 2, 2], &[3, 2, 2], &[2, 2, 2, 2]] {
        let s = shape(s);
        for b in enumerate_blocks(&s).unwrap() {
            let m = block_module(&s, &b, field).unwrap();
            let v = is_locally_block_decomposable(&m).map_err(|e| e.to_string())?;
            ensure(v.is_positive(), || {
                format!("block {b} fails: {:?}", v.witness())
            })?;
            total += 1;
        }
    }
    Ok(format!("{total} block modules pass"))
}

fn criterion_4(samples: &[Sample], seed: u64) -> Result<String, String> {
    let mut positives = 0;
    for (i, s) in samples.iter().enumerate() {
        let verdict = is_locally_block_decomposable(&s.module)
            .unwrap()
            .is_positive();
        let oracle = generic_oracle(&s.module, seed.wrapping_add(i as u64))
            .ok_or_else(|| format!("module {i}: generic engine incomplete"))?;
        ensure(verdict == oracle, || {
            format!("module {i}: criterion {verdict}, generic {oracle}")
        })?;
        ensure(!s.from_blocks || verdict, || {
            format!("block sum {i} fails the criterion")
        })?;
        positives += verdict as usize;
    }
    Ok(format!(
        "{} modules, {positives} positive, 0 mismatches",
        samples.len()
    ))
}

fn criterion_5(count: usize, seed: u64, field: PrimeField) -> Result<String, String> {
    for i in 0..count {
        let s = shape(CORPUS_SHAPES[i % CORPUS_SHAPES.len()]);
        let n = 1 + (i / CORPUS_SHAPES.len()) % MAX_SUMMANDS;
        let (m, truth) = random_block_sum(&s, n, seed.wrapping_add(i as u64), field).unwrap();
        for method in [Method::Generic, Method::Constructive] {
            let got = decomposed(&m, method, seed ^ i as u64)
                .map_err(|e| format!("instance {i}: {e}"))?;
            ensure(got == truth, || {
                format!("instance {i}, {method:?}: multiset differs")
            })?;
        }
    }
    Ok(format!(
        "{count} instances, generic and constructive both exact"
    ))
}

fn criterion_6(samples: &[Sample]) -> Result<String, String> {
    for (i, s) in samples.iter().enumerate() {
        let profile = exactness_profile(&s.module).unwrap();
        if let Some(first) = profile.iter().position(|l| l.exact()) {
            ensure(profile[first..].iter().all(|l| l.exact()), || {
                format!("module {i}: profile {profile:?}")
            })?;
        }
    }
    Ok(format!("{} profiles, 0 violations", samples.len()))
}

fn criterion_7(field: PrimeField) -> Result<String, String> {
    let mut complexes = 0;
    for i in 0..KOSZUL_MODULES {
        let s = shape(if i % 2 == 0 {
            &[2, 2, 2]
        } else {
            &[2, 2, 2, 2]
        });
        let seed = KOSZUL_SEED.wrapping_add(i as u64);
        let count = 1 + i % MAX_SUMMANDS;
        let m = if i % 4 < 2 {
            random_interval_sum(&s, count, seed, field).unwrap().0
        } else {
            random_block_sum(&s, count, seed, field).unwrap().0
        };
        for k in 2..=s.naxes() {
            let orders = common::permutations(k);
            for cube in enumerate_cubes(&s, k).unwrap() {
                let base = koszul_complex(&m, &cube).unwrap();
                let explicit = common::explicit_koszul(&m, &cube);
                ensure(
                    (1..=k).all(|j| base.differential(j) == &explicit[j - 1]),
                    || format!("module {i}: cone differs from the sign formula on {cube:?}"),
                )?;
                let h = homology_dims(&base, field);
                for order in &orders {
                    let kc = koszul_complex_with_order(&m, &cube, order).unwrap();
                    ensure(kc.is_complex(field), || format!("module {i}: d∘d ≠ 0"))?;
                    ensure(homology_dims(&kc, field) == h, || {
                        format!("module {i}: order {order:?} changes homology on {cube:?}")
                    })?;
                    complexes += 1;
                }
            }
        }
    }
    Ok(format!(
        "{complexes} complexes over {KOSZUL_MODULES} modules"
    ))
}

fn criterion_8(samples: &[Sample], seed: u64) -> Result<String, String> {
    let mut checked = 0;
    for (i, s) in samples.iter().enumerate() {
        let m = &s.module;
        if m.shape().naxes() != 2 {
            continue;
        }
        let squares_ok = enumerate_cubes(m.shape(), 2)
            .unwrap()
            .iter()
            .all(|c| common::square_middle_homology(m, c) == 0);
        let full = is_locally_block_decomposable(m).unwrap().is_positive();
        let oracle =
            generic_oracle(m, seed.wrapping_add(i as u64)).ok_or("generic engine incomplete")?;
        ensure(squares_ok == full && full == oracle, || {
            format!("module {i}: squares {squares_ok}, criterion {full}, generic {oracle}")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} two-parameter modules agree"))
}

fn criterion_9(samples: &[Sample], seed: u64) -> Result<String, String> {
    let mut checked = 0;
    for (i, s) in samples.iter().enumerate() {
        let m = &s.module;
        if !is_locally_block_decomposable(m).unwrap().is_positive() {
            continue;
        }
        let sub = seed.wrapping_add(i as u64);
        let primal = decomposed(m, Method::Auto, sub).map_err(|e| format!("module {i}: {e}"))?;
        let dual = decomposed(&m.dual(), Method::Auto, sub)
            .map_err(|e| format!("module {i} dual: {e}"))?;
        let mirrored: BTreeMap<Block, usize> = primal.iter().map(|(b, &k)| (b.dual(), k)).collect();
        ensure(dual == mirrored, || {
            format!("module {i}: dual multiset differs")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} positive modules"))
}

/// Reruns criteria 1 to 5 in characteristic two and compares fixture verdicts.
fn criterion_10() -> Result<String, String> {
    let two = PrimeField::new(2).unwrap();
    let big = PrimeField::default();
    for name in fixtures::NAMES {
        let a = is_locally_block_decomposable(&fixtures::by_name(name, big).unwrap()).unwrap();
        let b = is_locally_block_decomposable(&fixtures::by_name(name, two).unwrap()).unwrap();
        ensure(a == b, || {
            format!("{name}: verdicts differ ({a:?} vs {b:?})")
        })?;
        if let Verdict::BlockDecomposable = b {
            let m = fixtures::by_name(name, two).unwrap();
            let got = decomposed(&m, Method::Auto, 1)?;
            let want = decomposed(&fixtures::by_name(name, big).unwrap(), Method::Auto, 1)?;
            ensure(got == want, || format!("{name}: decompositions differ"))?;
        }
    }
    criterion_1(two).map_err(|e| format!("criterion 1: {e}"))?;
    criterion_2(two).map_err(|e| format!("criterion 2: {e}"))?;
    criterion_3(two).map_err(|e| format!("criterion 3: {e}"))?;
    let samples = corpus(PROBE_CORPUS_SIZE, CORPUS_SEED, two);
    criterion_4(&samples, CORPUS_SEED).map_err(|e| format!("criterion 4: {e}"))?;
    criterion_5(PROBE_ROUND_TRIPS, ROUND_TRIP_SEED, two)
        .map_err(|e| format!("criterion 5: {e}"))?;
    Ok(format!(
        "p = 2: fixtures agree; criteria 1-3 hold; {PROBE_CORPUS_SIZE} corpus modules and {PROBE_ROUND_TRIPS} round trips exact"
    ))
}

fn main() -> ExitCode {
    // Under `cargo test -- --list` and similar, just print nothing.
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let field = PrimeField::new(DEFAULT_PRIME).unwrap();
    let mut suite = Suite { failures: 0 };

    let t = Instant::now();
    suite.report(
        "1",
        "first worked example",
        t,
        FIXTURE_LIMIT,
        criterion_1(field),
    );
    let t = Instant::now();
    suite.report(
        "2",
        "second worked example",
        t,
        FIXTURE_LIMIT,
        criterion_2(field),
    );
    let t = Instant::now();
    suite.report(
        "3",
        "block modules are middle exact",
        t,
        BLOCKS_LIMIT,
        criterion_3(field),
    );

    let samples = corpus(CORPUS_SIZE, CORPUS_SEED, field);
    let t = Instant::now();
    suite.report(
        "4",
        "criterion agrees with generic decomposition",
        t,
        CORPUS_LIMIT,
        criterion_4(&samples, CORPUS_SEED),
    );
    let t = Instant::now();
    suite.report(
        "5",
        "block sums round trip",
        t,
        ROUND_TRIP_LIMIT,
        criterion_5(ROUND_TRIPS, ROUND_TRIP_SEED, field),
    );
    let t = Instant::now();
    suite.report(
        "6",
        "exactness is monotone in k",
        t,
        CORPUS_LIMIT,
        criterion_6(&samples),
    );
    let t = Instant::now();
    suite.report(
        "7",
        "Koszul complexes independent of face order",
        t,
        CORPUS_LIMIT,
        criterion_7(field),
    );
    let t = Instant::now();
    suite.report(
        "8",
        "two-parameter consistency",
        t,
        CORPUS_LIMIT,
        criterion_8(&samples, CORPUS_SEED),
    );
    let t = Instant::now();
    suite.report(
        "9",
        "duality",
        t,
        CORPUS_LIMIT,
        criterion_9(&samples, CORPUS_SEED),
    );
    let t = Instant::now();
    suite.report(
        "10",
        "characteristic two probe",
        t,
        CORPUS_LIMIT,
        criterion_10(),
    );

    if suite.failures == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria fail", suite.failures);
        ExitCode::FAILURE
    }
}

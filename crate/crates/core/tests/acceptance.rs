//! Acceptance gate: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

mod common;

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use g2zeta::batch::{odd_primes, parse_modp, write_modp};
use g2zeta::lift::{initial_candidates, residue_mod_4, two_rank};
use g2zeta::{
    enumerate_group, exact_lpoly, lift_seeded, run_range, CurveFp, Jacobian, ModPInput,
    PrimeModulus, RangeConfig, Record, Source,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{corpus, random_curve, reduced};

const SEED: u64 = 20_240_917;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Reduced corpus data shared by criteria 2, 6 and 8.
struct CorpusData {
    inputs: Vec<BTreeMap<u64, ModPInput>>,
    exact: Vec<BTreeMap<u64, (i64, i128)>>,
}

fn corpus_data() -> CorpusData {
    let mut inputs = Vec::new();
    let mut exact = Vec::new();
    for curve in corpus() {
        let mut inp = BTreeMap::new();
        let mut ex = BTreeMap::new();
        for p in odd_primes(1021) {
            let Ok(c) = curve.reduce(PrimeModulus::new(p).unwrap()) else { continue };
            let r = exact_lpoly(&c).expect("oracle");
            inp.insert(p, reduced(&r));
            ex.insert(p, (r.a1, r.a2 as i128));
        }
        inputs.push(inp);
        exact.push(ex);
    }
    CorpusData { inputs, exact }
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let c = CurveFp::from_coeffs(313, &[283, 34, 153, 152, 77, 202, 1]).unwrap();
    let r = match lift_seeded(&c, ModPInput { a1: 311, a2: 1 }, SEED) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("lift failed: {e}")),
    };
    let elapsed = t.elapsed();
    let j_rounds: Vec<_> = r.rounds.iter().filter(|x| !x.twist).collect();
    let j_undecided = !j_rounds.is_empty()
        && j_rounds.iter().all(|x| {
            x.tested == vec![(1, 97343), (627, 97969)] && x.survivors == vec![1, 627]
        });
    let last = r.rounds.last();
    let twist_decides = last.is_some_and(|x| {
        x.twist && x.tested == vec![(1, 98599), (627, 99225)] && x.survivors == vec![627]
    });
    let pass = r.initial.contains(&1)
        && r.initial.contains(&627)
        && r.refined == vec![1, 627]
        && j_undecided
        && twist_decides
        && (r.lpoly.a1, r.lpoly.a2) == (-2, 627)
        && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "initial={:?} refined={:?} J rounds undecided={} twist round -> {:?}; a2={} in {:.1?}",
            r.initial,
            r.refined,
            j_undecided,
            last.map(|x| &x.survivors),
            r.lpoly.a2,
            elapsed
        ),
    )
}

fn criterion_2(data: &CorpusData) -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    let mut wrong = Vec::new();
    for (idx, curve) in corpus().into_iter().enumerate() {
        for (&p, &input) in data.inputs[idx].range(65..) {
            let c = curve.reduce(PrimeModulus::new(p).unwrap()).unwrap();
            checked += 1;
            match lift_seeded(&c, input, SEED ^ p) {
                Ok(r) if (r.lpoly.a1, r.lpoly.a2) == data.exact[idx][&p] => {}
                other => wrong.push((idx, p, other.map(|r| r.lpoly).map_err(|e| e.to_string()))),
            }
        }
    }
    outcome(
        wrong.is_empty() && checked > 1000,
        format!(
            "{} of {checked} (curve, prime) pairs with 64 < p <= 1021 agree with the oracle in {:.1?}; mismatches: {:?}",
            checked - wrong.len(),
            t.elapsed(),
            &wrong[..wrong.len().min(5)]
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut violations = 0;
    let mut fives = 0;
    let mut total = 0;
    for p in [67u64, 71, 73] {
        let bound = (1..).take_while(|k: &i64| k * k <= 16 * p as i64).last().unwrap();
        for a1 in -bound..=bound {
            for a2 in 0..p {
                total += 1;
                let Ok(c) = initial_candidates(p, a1, a2) else { continue };
                let pi = p as i128;
                if c.len() > 5 {
                    violations += 1;
                }
                if c.len() == 5 {
                    fives += 1;
                    if a1 != 0 || c != vec![-2 * pi, -pi, 0, pi, 2 * pi] {
                        violations += 1;
                    }
                }
            }
        }
    }
    outcome(
        violations == 0,
        format!("{total} (p, a1, a2 mod p) triples, {fives} with five candidates, {violations} violations"),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut curves, mut rank1, mut skipped, mut violations) = (0, 0, 0, Vec::new());
    for p in [7u64, 11, 13] {
        let mut done = 0;
        while done < 80 {
            let deg = rng.gen_range(5..=6);
            let c = random_curve(&mut rng, p, deg);
            let work = if deg == 6 && c.has_rational_root() { c.to_degree5_model().unwrap() } else { c.clone() };
            // enumerate on the original model when it has one
            let Some(model) = [&c, &work].into_iter().find(|m| Jacobian::new(m).is_ok()) else {
                skipped += 1;
                continue;
            };
            let j = Jacobian::new(model).unwrap();
            let group = match enumerate_group(model) {
                Ok(g) => g,
                Err(e) => {
                    violations.push(format!("p={p} {:?}: {e}", c.f()));
                    done += 1;
                    continue;
                }
            };
            let torsion = group.iter().filter(|x| j.is_identity(&j.double(x))).count();
            let rank = two_rank(work.f()).unwrap();
            if torsion != 1 << rank {
                violations.push(format!("p={p} {:?}: 2-torsion {torsion}, table rank {rank}", c.f()));
            }
            if rank == 1 {
                rank1 += 1;
                let predicted = residue_mod_4(work.f()).unwrap() as usize;
                if group.len() % 4 != predicted {
                    violations.push(format!("p={p} {:?}: #J={} predicted {predicted} mod 4", c.f(), group.len()));
                }
            }
            curves += 1;
            done += 1;
        }
    }
    outcome(
        violations.is_empty() && curves >= 200,
        format!(
            "{curves} curves at p in {{7, 11, 13}} ({rank1} of 2-rank 1, {skipped} pointless sextics skipped); violations: {:?}",
            &violations[..violations.len().min(3)]
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut violations = 0;
    let mut checks = 0;
    for p in [13u64, 101, 313] {
        for deg in [5, 6] {
            let c = loop {
                let c = random_curve(&mut rng, p, deg);
                if Jacobian::new(&c).is_ok() {
                    break c;
                }
            };
            let j = Jacobian::new(&c).unwrap();
            for _ in 0..1000 {
                let (a, b, d) = (j.random_point(&mut rng), j.random_point(&mut rng), j.random_point(&mut rng));
                let ab = j.add(&a, &b);
                violations += (ab != j.add(&b, &a)) as u32;
                violations += (j.add(&ab, &d) != j.add(&a, &j.add(&b, &d))) as u32;
                violations += !j.is_identity(&j.add(&a, &j.neg(&a))) as u32;
                violations += (j.add(&a, &j.identity()) != a) as u32;
                checks += 4;
            }
            let n = exact_lpoly(&c).unwrap().group_orders().0 as u128;
            for _ in 0..100 {
                violations += !j.is_identity(&j.scalar_mul(n, &j.random_point(&mut rng))) as u32;
                checks += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!("{checks} checks over p in {{13, 101, 313}} and both models, {violations} violations"),
    )
}

fn criterion_6(data: &CorpusData) -> Outcome {
    let mut iters: Vec<u32> = Vec::new();
    let mut capped = 0;
    let mut collect = |iters: &mut Vec<u32>, c: &CurveFp, input: ModPInput, seed: u64| {
        match lift_seeded(c, input, seed) {
            Ok(r) if r.refined.len() > 1 => iters.push(r.iterations),
            Ok(_) => {}
            Err(e) => {
                if e.to_string().contains("undecided") {
                    capped += 1;
                }
            }
        }
    };
    for (idx, curve) in corpus().into_iter().enumerate() {
        for (&p, &input) in data.inputs[idx].range(65..) {
            collect(&mut iters, &curve.reduce(PrimeModulus::new(p).unwrap()).unwrap(), input, SEED ^ p);
        }
    }
    let from_corpus = iters.len();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let primes: Vec<u64> = odd_primes(1021).into_iter().filter(|&p| p >= 900).collect();
    let mut k = 0;
    while iters.len() < 1000 || iters.len() < from_corpus + 300 {
        let p = primes[k % primes.len()];
        let deg = rng.gen_range(5..=6);
        let c = random_curve(&mut rng, p, deg);
        let r = exact_lpoly(&c).unwrap();
        collect(&mut iters, &c, reduced(&r), SEED ^ k as u64);
        k += 1;
    }
    drop(collect);
    let mean = iters.iter().sum::<u32>() as f64 / iters.len() as f64;
    let max = iters.iter().copied().max().unwrap_or(0);
    outcome(
        iters.len() >= 1000 && mean <= 2.0 && max <= 20 && capped == 0,
        format!(
            "{} lifts reached group elimination ({from_corpus} from the corpus): mean iterations {mean:.3}, max {max}, cap hits {capped}",
            iters.len()
        ),
    )
}

fn criterion_7() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut by_bits: BTreeMap<u32, Vec<Duration>> = BTreeMap::new();
    let mut wrong = 0;
    for (idx, text) in ["1,3,-2,0,5,1", "3,-1,4,1,-5,9,2"].iter().enumerate() {
        let curve: g2zeta::CurveQ = text.parse().unwrap();
        let modp = fs::read_to_string(dir.join(format!("scaling_{idx}.modp")));
        let exact = fs::read_to_string(dir.join(format!("scaling_{idx}.jsonl")));
        let (Ok(modp), Ok(exact)) = (modp, exact) else {
            return outcome(false, "missing fixtures; run the scaling_inputs example".into());
        };
        let rows = parse_modp(&modp).unwrap();
        let exact: Vec<Record> = exact.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        for rec in exact {
            let p = rec.p;
            let c = curve.reduce(PrimeModulus::new(p).unwrap()).unwrap();
            let bits = 64 - p.leading_zeros() - 1;
            for seed in 0..25u64 {
                let t = Instant::now();
                let r = lift_seeded(&c, rows[&p], seed);
                by_bits.entry(bits).or_default().push(t.elapsed());
                if r.map(|r| (r.lpoly.a1, r.lpoly.a2)) != Ok((rec.a1, rec.a2)) {
                    wrong += 1;
                }
            }
        }
    }
    let median = |v: &mut Vec<Duration>| {
        v.sort();
        v[v.len() / 2]
    };
    let medians: BTreeMap<u32, Duration> = by_bits.iter_mut().map(|(b, v)| (*b, median(v))).collect();
    let Some(&t16) = medians.get(&16) else {
        return outcome(false, "no 2^16 timings".into());
    };
    let cubic = medians
        .iter()
        .all(|(&b, &t)| t.as_secs_f64() <= t16.as_secs_f64() * (b as f64 / 16.0).powi(3));
    let fast = medians.get(&28).is_some_and(|t| *t < Duration::from_millis(10));
    let table: Vec<String> = medians.iter().map(|(b, t)| format!("2^{b}: {t:.2?}")).collect();
    outcome(
        wrong == 0 && cubic && fast && medians.len() == 4,
        format!(
            "median lift time {}; within cubic-in-log-p growth: {cubic}; under 10 ms at 2^28: {fast}; wrong results: {wrong}",
            table.join(", ")
        ),
    )
}

fn criterion_8(data: &CorpusData) -> Outcome {
    let mut identical = true;
    let mut lines = 0;
    for (idx, curve) in corpus().into_iter().enumerate() {
        let text = write_modp(data.inputs[idx].iter().map(|(p, r)| (*p, r)));
        let mut cfg = RangeConfig::new(curve, 1021);
        cfg.input = Some(parse_modp(&text).unwrap());
        cfg.seed = SEED;
        let first = run_range(&cfg).to_jsonl();
        let again = run_range(&cfg).to_jsonl();
        cfg.jobs = 8;
        let eight = run_range(&cfg).to_jsonl();
        identical &= first == again && first == eight;
        lines += first.lines().count();
        let records: HashSet<u64> = first
            .lines()
            .filter_map(|l| serde_json::from_str::<Record>(l).ok())
            .filter(|r| r.source == Source::Lift)
            .map(|r| r.p)
            .collect();
        identical &= records.len() == data.inputs[idx].range(65..).count();
    }
    outcome(identical, format!("{lines} output lines; repeated run and jobs=8 byte-identical: {identical}"))
}

fn main() {
    let t = Instant::now();
    let data = corpus_data();
    eprintln!("oracle data for the corpus computed in {:.1?}", t.elapsed());
    let criteria: [(&str, Box<dyn Fn() -> Outcome + '_>); 8] = [
        ("sample curve at p = 313", Box::new(criterion_1)),
        ("oracle round trip over the corpus", Box::new(|| criterion_2(&data))),
        ("at most five initial candidates", Box::new(criterion_3)),
        ("2-rank table and mod-4 criterion", Box::new(criterion_4)),
        ("group law and annihilation", Box::new(criterion_5)),
        ("group elimination iterations", Box::new(|| criterion_6(&data))),
        ("lift time scaling", Box::new(criterion_7)),
        ("determinism", Box::new(|| criterion_8(&data))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{status}] {name}: {}", i + 1, o.detail);
        failed += !o.pass as u32;
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

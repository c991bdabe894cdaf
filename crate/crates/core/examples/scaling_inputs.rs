//! Generate exact L-polynomials at large primes for the timing checks.
//!
//! a1 comes from an O(p) point count over F_p. a2 is then pinned down by a
//! baby-step giant-step search for #J(F_p) over the admissible interval,
//! confirmed on the quadratic twist.
//!
//! Usage: cargo run --release --example scaling_inputs -- OUT_DIR
//!        cargo run --release --example scaling_inputs -- --check

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;

use g2zeta::batch::write_modp;
use g2zeta::field::is_prime;
use g2zeta::lift::{ks_interval_membership, order_at};
use g2zeta::{CurveQ, Exec, JacElement, Jacobian, LPolynomial, PrimeModulus, Record};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CURVES: [&str; 2] = ["1,3,-2,0,5,1", "3,-1,4,1,-5,9,2"];
const BITS: [u32; 4] = [16, 20, 24, 28];

fn next_prime(mut n: u64) -> u64 {
    n |= 1;
    while !is_prime(n) {
        n += 2;
    }
    n
}

/// All k in [0, width] with (base + k) P = 0.
fn bsgs(j: &Jacobian, pt: &JacElement, base: u128, width: u128) -> Option<Vec<u128>> {
    let m = (width as f64).sqrt() as u128 + 1;
    let mut baby: HashMap<JacElement, u128> = HashMap::new();
    let mut cur = j.identity();
    for i in 0..m {
        if baby.insert(cur.clone(), i).is_some() {
            // P has order below m; useless for separating candidates
            return None;
        }
        cur = j.add(&cur, pt);
    }
    let giant = j.neg(&cur);
    let mut target = j.neg(&j.scalar_mul(base, pt));
    let mut hits = Vec::new();
    let mut i = 0;
    while i * m <= width {
        if let Some(&b) = baby.get(&target) {
            if i * m + b <= width {
                hits.push(i * m + b);
            }
        }
        target = j.add(&target, &giant);
        i += 1;
    }
    Some(hits)
}

fn exact_at(curve: &CurveQ, p: u64) -> LPolynomial {
    let c = curve.reduce(PrimeModulus::new(p).unwrap()).expect("good reduction");
    let n1 = c.count_points_fp_with(u64::MAX, Exec::default()).unwrap();
    let a1 = n1 as i64 - p as i64 - 1;
    let (pi, a1i) = (p as i128, a1 as i128);
    let lo = -2 * pi - 1;
    let hi = 2 * pi + a1i * a1i / 4 + 1;
    let base = order_at(p, a1, lo, false) as u128;
    let width = (hi - lo) as u128;
    let j = Jacobian::new(&c).unwrap();
    let jt = Jacobian::new(&c.quadratic_twist()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mut cands: Option<Vec<i128>> = None;
    while cands.as_ref().map_or(true, |c| c.len() > 1) {
        let pt = j.random_point(&mut rng);
        let Some(hits) = bsgs(&j, &pt, base, width) else { continue };
        let found: Vec<i128> = hits.iter().map(|&k| lo + k as i128).collect();
        cands = Some(match cands {
            None => found,
            Some(old) => old.into_iter().filter(|c| found.contains(c)).collect(),
        });
        // the twist order L(-1) must kill twist points too
        let pt = jt.random_point(&mut rng);
        cands.as_mut().unwrap().retain(|&c| {
            let n = order_at(p, a1, c, true);
            n > 0 && jt.is_identity(&jt.scalar_mul(n as u128, &pt))
        });
    }
    let a2 = cands.unwrap()[0];
    assert!(ks_interval_membership(p, a1, a2));
    LPolynomial { p, a1, a2 }
}

// Compare against the point-counting oracle where both apply.
fn check() {
    for text in CURVES {
        let curve: CurveQ = text.parse().unwrap();
        for p in g2zeta::batch::odd_primes(1021).into_iter().filter(|&p| p > 400) {
            let Ok(c) = curve.reduce(PrimeModulus::new(p).unwrap()) else { continue };
            let o = g2zeta::exact_lpoly(&c).unwrap();
            assert_eq!(exact_at(&curve, p), LPolynomial { p, a1: o.a1, a2: o.a2 as i128 });
        }
    }
    eprintln!("generator agrees with the oracle");
}

fn main() {
    let arg = std::env::args().nth(1).expect("output directory or --check");
    if arg == "--check" {
        return check();
    }
    let out = PathBuf::from(arg);
    fs::create_dir_all(&out).unwrap();
    for (idx, text) in CURVES.iter().enumerate() {
        let curve: CurveQ = text.parse().unwrap();
        let mut rows = Vec::new();
        let mut exact = String::new();
        for bits in BITS {
            let mut p = next_prime(1 << bits);
            while curve.reduce(PrimeModulus::new(p).unwrap()).is_err() {
                p = next_prime(p + 2);
            }
            let l = exact_at(&curve, p);
            eprintln!("curve {idx} p = {p}: a1 = {}, a2 = {}", l.a1, l.a2);
            rows.push((p, l.reduce()));
            exact.push_str(&Record::from_lift(&l, 0).to_json());
            exact.push('\n');
        }
        let modp = write_modp(rows.iter().map(|(p, r)| (*p, r)));
        fs::write(out.join(format!("scaling_{idx}.modp")), modp).unwrap();
        fs::write(out.join(format!("scaling_{idx}.jsonl")), exact).unwrap();
    }
}

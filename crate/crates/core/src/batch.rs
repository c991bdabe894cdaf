//! Prime-range runs, the mod-p input format and JSON-lines records.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::curve::{CurveQ, FP2_COUNT_CAP};
use crate::error::{Error, Result};
use crate::exec::{with_jobs, Exec};
use crate::field::{is_prime, PrimeModulus};
use crate::lift::{lift_seeded, LPolynomial, ModPInput, MIN_PRIME};
use crate::oracle::{exact_lpoly_with, OracleResult};

pub const MODP_HEADER: &str = "# g2zeta-modp v1";
pub const DEFAULT_SEED: u64 = 0x6732_7a65_7461;

/// Parse `p,a1_mod_p,a2_mod_p` rows under the version header.
pub fn parse_modp(text: &str) -> Result<BTreeMap<u64, ModPInput>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == MODP_HEADER => {}
        _ => return Err(Error::Parse(format!("missing header {MODP_HEADER:?}"))),
    }
    let mut out = BTreeMap::new();
    let mut last = 0u64;
    for (i, line) in lines {
        let bad = |msg: &str| Error::Parse(format!("line {}: {msg}: {line:?}", i + 1));
        let fields: Vec<u64> = line
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("expected three non-negative integers"))?;
        let &[p, a1, a2] = fields.as_slice() else {
            return Err(bad("expected three fields"));
        };
        if p <= last {
            return Err(bad("rows must be sorted by p without repeats"));
        }
        if a1 >= p || a2 >= p {
            return Err(bad("values must be reduced mod p"));
        }
        last = p;
        out.insert(p, ModPInput { a1, a2 });
    }
    Ok(out)
}

pub fn write_modp<'a>(rows: impl IntoIterator<Item = (u64, &'a ModPInput)>) -> String {
    let mut s = format!("{MODP_HEADER}\n");
    for (p, r) in rows {
        writeln!(s, "{p},{},{}", r.a1, r.a2).expect("write to string");
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Lift,
    Oracle,
}

/// One output line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub p: u64,
    pub a1: i64,
    pub a2: i128,
    #[serde(rename = "L")]
    pub l: [i128; 5],
    pub source: Source,
    pub iterations: u32,
    /// (#C(F_p), #C(F_{p^2})) when computed by counting.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<[u64; 2]>,
}

impl Record {
    pub fn from_lift(l: &LPolynomial, iterations: u32) -> Self {
        Record {
            p: l.p,
            a1: l.a1,
            a2: l.a2,
            l: l.coefficients(),
            source: Source::Lift,
            iterations,
            counts: None,
        }
    }

    pub fn from_oracle(r: &OracleResult, with_counts: bool) -> Self {
        let l = LPolynomial { p: r.p, a1: r.a1, a2: r.a2 as i128 };
        Record {
            source: Source::Oracle,
            counts: with_counts.then_some([r.n1, r.n2]),
            ..Record::from_lift(&l, 0)
        }
    }

    pub fn lpoly(&self) -> LPolynomial {
        LPolynomial { p: self.p, a1: self.a1, a2: self.a2 }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Done(Record),
    /// Bad reduction.
    Skipped(String),
    Failed(String),
}

#[derive(Clone, Debug)]
pub struct RangeConfig {
    pub curve: CurveQ,
    pub bound: u64,
    pub input: Option<BTreeMap<u64, ModPInput>>,
    pub seed: u64,
    pub jobs: usize,
    /// Largest p computed by point counting when no input row is given.
    pub oracle_cap: u64,
}

impl RangeConfig {
    pub fn new(curve: CurveQ, bound: u64) -> Self {
        RangeConfig { curve, bound, input: None, seed: DEFAULT_SEED, jobs: 1, oracle_cap: FP2_COUNT_CAP }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RangeOutput {
    pub records: Vec<Record>,
    pub skipped: Vec<(u64, String)>,
    pub failures: Vec<(u64, String)>,
}

impl RangeOutput {
    /// Records, then `{"p":..,"skipped":..}` lines, then `{"p":..,"failed":..}`
    /// lines, each section sorted by p.
    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&r.to_json());
            s.push('\n');
        }
        for (key, list) in [("skipped", &self.skipped), ("failed", &self.failures)] {
            for (p, why) in list {
                let line = serde_json::json!({ "p": p, key: why });
                s.push_str(&line.to_string());
                s.push('\n');
            }
        }
        s
    }
}

/// Every odd prime `3 <= p <= bound`, ascending.
pub fn odd_primes(bound: u64) -> Vec<u64> {
    (3..=bound).step_by(2).filter(|&p| is_prime(p)).collect()
}

/// Lift (or count, for small p) at one prime. Lifting uses the seed
/// `seed ^ p`; without an input row the mod-p data comes from the oracle.
pub fn process_prime(
    curve: &CurveQ,
    p: u64,
    input: Option<ModPInput>,
    seed: u64,
    oracle_cap: u64,
) -> Outcome {
    let m = match PrimeModulus::new(p) {
        Ok(m) => m,
        Err(e) => return Outcome::Failed(e.to_string()),
    };
    let c = match curve.reduce(m) {
        Ok(c) => c,
        Err(e) => return Outcome::Skipped(e.to_string()),
    };
    let oracle = || exact_lpoly_with(&c, oracle_cap, Exec::Sequential);
    if p < MIN_PRIME {
        return match oracle() {
            Ok(r) => {
                let rec = Record::from_oracle(&r, false);
                match input {
                    Some(i) if i != rec.lpoly().reduce() => Outcome::Failed(format!(
                        "input ({}, {}) disagrees with the point count",
                        i.a1, i.a2
                    )),
                    _ => Outcome::Done(rec),
                }
            }
            Err(e) => Outcome::Failed(e.to_string()),
        };
    }
    let input = match input {
        Some(i) => i,
        None => match oracle() {
            Ok(r) => Record::from_oracle(&r, false).lpoly().reduce(),
            Err(e) => return Outcome::Failed(format!("no mod-p input: {e}")),
        },
    };
    match lift_seeded(&c, input, seed ^ p) {
        Ok(rep) => Outcome::Done(Record::from_lift(&rep.lpoly, rep.iterations)),
        Err(e) => Outcome::Failed(e.to_string()),
    }
}

/// Process every odd prime up to the bound on `jobs` workers. The output does
/// not depend on `jobs`.
pub fn run_range(cfg: &RangeConfig) -> RangeOutput {
    let primes = odd_primes(cfg.bound);
    let outcomes = with_jobs(cfg.jobs, |exec| {
        exec.map(&primes, |&p| {
            let input = cfg.input.as_ref().and_then(|m| m.get(&p).copied());
            process_prime(&cfg.curve, p, input, cfg.seed, cfg.oracle_cap)
        })
    });
    let mut out = RangeOutput::default();
    for (p, o) in primes.into_iter().zip(outcomes) {
        match o {
            Outcome::Done(r) => out.records.push(r),
            Outcome::Skipped(why) => out.skipped.push((p, why)),
            Outcome::Failed(why) => out.failures.push((p, why)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modp_round_trip() {
        let text = "# g2zeta-modp v1\n67,3,5\n71,0,70\n";
        let rows = parse_modp(text).unwrap();
        assert_eq!(rows[&71], ModPInput { a1: 0, a2: 70 });
        assert_eq!(write_modp(rows.iter().map(|(p, r)| (*p, r))), text);
    }

    #[test]
    fn modp_rejects_bad_files() {
        assert!(parse_modp("67,3,5\n").is_err());
        assert!(parse_modp("# g2zeta-modp v1\n71,3,5\n67,3,5\n").is_err());
        assert!(parse_modp("# g2zeta-modp v1\n67,67,5\n").is_err());
        assert!(parse_modp("# g2zeta-modp v1\n67,1\n").is_err());
        assert!(parse_modp("# g2zeta-modp v1\n67,-1,2\n").is_err());
        assert!(parse_modp("# g2zeta-modp v1\n").unwrap().is_empty());
    }

    #[test]
    fn record_json_shape() {
        let l = LPolynomial { p: 313, a1: -2, a2: 627 };
        let r = Record::from_lift(&l, 2);
        let s = r.to_json();
        assert_eq!(
            s,
            r#"{"p":313,"a1":-2,"a2":627,"L":[1,-2,627,-626,97969],"source":"lift","iterations":2}"#
        );
        let back: Record = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn small_range_matches_oracle() {
        let curve: CurveQ = "283,34,153,152,77,202,1".parse().unwrap();
        let mut cfg = RangeConfig::new(curve.clone(), 150);
        let out = run_range(&cfg);
        assert!(out.failures.is_empty(), "{:?}", out.failures);
        for r in &out.records {
            let c = curve.reduce(PrimeModulus::new(r.p).unwrap()).unwrap();
            let o = exact_lpoly_with(&c, 1024, Exec::Sequential).unwrap();
            assert_eq!((r.a1, r.a2), (o.a1, o.a2 as i128), "p = {}", r.p);
            assert_eq!(r.source == Source::Oracle, r.p < MIN_PRIME);
        }
        cfg.jobs = 4;
        assert_eq!(run_range(&cfg).to_jsonl(), out.to_jsonl());
    }
}

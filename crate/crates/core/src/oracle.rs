//! Exact L-polynomials by point counting, and exhaustive group enumeration
//! for tiny p. Slow and independent of the lifting code by design.

use std::collections::HashSet;

use crate::curve::{CurveFp, FP2_COUNT_CAP};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::PrimeModulus;
use crate::jacobian::{JacElement, Jacobian};
use crate::poly::Poly;

/// Default largest p for `enumerate_group`.
pub const ENUMERATE_CAP: u64 = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub p: u64,
    pub a1: i64,
    pub a2: i64,
    /// #C(F_p)
    pub n1: u64,
    /// #C(F_{p^2})
    pub n2: u64,
}

impl OracleResult {
    /// (#J(F_p), #J~(F_p)) = (L(1), L(-1)).
    pub fn group_orders(&self) -> (i128, i128) {
        let (p, a1, a2) = (self.p as i128, self.a1 as i128, self.a2 as i128);
        (p * p + p * a1 + a2 + a1 + 1, p * p - p * a1 + a2 - a1 + 1)
    }
}

pub fn exact_lpoly(curve: &CurveFp) -> Result<OracleResult> {
    exact_lpoly_with(curve, FP2_COUNT_CAP, Exec::default())
}

/// a1 = N1 - p - 1 and 2 a2 = N2 - p^2 - 1 + a1^2.
pub fn exact_lpoly_with(curve: &CurveFp, cap: u64, exec: Exec) -> Result<OracleResult> {
    let p = curve.p();
    let n1 = curve.count_points_fp_with(cap, exec)?;
    let n2 = curve.count_points_fp2_with(cap, exec)?;
    let a1 = n1 as i64 - p as i64 - 1;
    let twice = n2 as i128 - (p as i128).pow(2) - 1 + (a1 as i128).pow(2);
    if twice % 2 != 0 {
        return Err(Error::Internal(format!("odd 2*a2 = {twice} at p = {p}")));
    }
    let a2 = (twice / 2) as i64;
    if (a1 as i128).pow(2) > 16 * p as i128 {
        return Err(Error::Internal(format!("a1 = {a1} violates the Weil bound at p = {p}")));
    }
    let r = OracleResult { p, a1, a2, n1, n2 };
    let (l1, lm1) = r.group_orders();
    if l1 <= 0 || lm1 <= 0 {
        return Err(Error::Internal(format!("nonpositive group order at p = {p}")));
    }
    Ok(r)
}

/// Every class of J(F_p) exactly once, in the working model of
/// `Jacobian::new(curve)`: all affine Mumford pairs, closed under addition.
pub fn enumerate_group(curve: &CurveFp) -> Result<Vec<JacElement>> {
    enumerate_group_with(curve, ENUMERATE_CAP)
}

pub fn enumerate_group_with(curve: &CurveFp, cap: u64) -> Result<Vec<JacElement>> {
    let p = curve.p();
    if p > cap {
        return Err(Error::CapExceeded { p, cap });
    }
    let j = Jacobian::new(curve)?;
    let expected = exact_lpoly_with(curve, cap.max(FP2_COUNT_CAP), Exec::Sequential)?.group_orders().0;
    let gens = affine_pairs(&j);
    let mut seen: HashSet<JacElement> = gens.iter().cloned().collect();
    seen.insert(j.identity());
    // close under a growing prefix of the generators; stop once every class
    // is reached
    let mut k = 1;
    loop {
        let mut queue: Vec<JacElement> = seen.iter().cloned().collect();
        while let Some(x) = queue.pop() {
            for g in &gens[..k.min(gens.len())] {
                let y = j.add(&x, g);
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        if seen.len() as i128 >= expected || k >= gens.len() {
            break;
        }
        k *= 2;
    }
    if seen.len() as i128 != expected {
        return Err(Error::Internal(format!(
            "enumerated {} classes, expected L(1) = {expected}",
            seen.len()
        )));
    }
    let mut all: Vec<JacElement> = seen.into_iter().collect();
    all.sort_by_key(|a| (a.u.deg(), key(&a.u), key(&a.v), a.n));
    Ok(all)
}

fn key(a: &Poly) -> Vec<u64> {
    a.coeffs().iter().map(|c| c.value()).collect()
}

fn affine_pairs(j: &Jacobian) -> Vec<JacElement> {
    let m: PrimeModulus = j.modulus();
    let f = j.f();
    let mut out = Vec::new();
    for a in m.elements() {
        for y in m.elements() {
            if y * y == f.eval(a) {
                out.push(j.from_mumford(Poly::linear(a), Poly::constant(y)).expect("valid"));
            }
        }
    }
    for b in m.elements() {
        for c in m.elements() {
            let u = Poly::new(m, vec![c, b, m.one()]);
            for v1 in m.elements() {
                for v0 in m.elements() {
                    let v = Poly::new(m, vec![v0, v1]);
                    if (&(&v * &v) - f).rem(&u).expect("monic").is_zero() {
                        out.push(j.from_mumford(u.clone(), v).expect("valid"));
                    }
                }
            }
        }
    }
    out
}

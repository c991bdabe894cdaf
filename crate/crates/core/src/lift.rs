//! Lifting (a1 mod p, a2 mod p) to the exact L-polynomial coefficients.
//!
//! a1 is the centered lift. a2 is found among the few integers in the
//! Kedlaya-Sutherland interval congruent to a2 mod p, filtered by the 2-rank
//! of J and, if needed, by annihilating random points of J and its twist.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curve::CurveFp;
use crate::error::{Error, LiftError, Result, Stage};
use crate::jacobian::Jacobian;
use crate::poly::Poly;

/// Smallest prime accepted by `lift`; below it a1 mod p may not determine a1.
pub const MIN_PRIME: u64 = 65;
/// Safety cap on group-elimination samples.
pub const MAX_ITERATIONS: u32 = 128;

/// The L-polynomial reduced mod p, as produced by a mod-p point counter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModPInput {
    pub a1: u64,
    pub a2: u64,
}

/// L(T) = p^2 T^4 + p a1 T^3 + a2 T^2 + a1 T + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LPolynomial {
    pub p: u64,
    pub a1: i64,
    pub a2: i128,
}

impl LPolynomial {
    /// Coefficients from T^0 to T^4.
    pub fn coefficients(&self) -> [i128; 5] {
        let (p, a1) = (self.p as i128, self.a1 as i128);
        [1, a1, self.a2, p * a1, p * p]
    }

    /// #J(F_p).
    pub fn at_one(&self) -> i128 {
        order_at(self.p, self.a1, self.a2, false)
    }

    /// #J~(F_p) for the quadratic twist.
    pub fn at_minus_one(&self) -> i128 {
        order_at(self.p, self.a1, self.a2, true)
    }

    pub fn reduce(&self) -> ModPInput {
        let p = self.p as i128;
        ModPInput {
            a1: (self.a1 as i128).rem_euclid(p) as u64,
            a2: self.a2.rem_euclid(p) as u64,
        }
    }
}

/// L(1), or L(-1) when `twist`, for candidate a2 = c.
pub fn order_at(p: u64, a1: i64, c: i128, twist: bool) -> i128 {
    let (p, a1) = (p as i128, a1 as i128);
    let a1 = if twist { -a1 } else { a1 };
    p * p + p * a1 + c + a1 + 1
}

/// One elimination sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Round {
    pub twist: bool,
    /// (candidate, group order tested) before the sample.
    pub tested: Vec<(i128, i128)>,
    pub survivors: Vec<i128>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    pub lpoly: LPolynomial,
    pub initial: Vec<i128>,
    pub refined: Vec<i128>,
    pub two_rank: u8,
    pub mod4: Option<u8>,
    pub rounds: Vec<Round>,
    /// Group samples drawn; 0 when refinement already decided a2.
    pub iterations: u32,
    pub converted: bool,
}

/// Centered lift of a1 mod p, checked against |a1| <= 4 sqrt(p).
pub fn recover_a1(p: u64, a1_mod_p: u64) -> Result<i64> {
    if p < MIN_PRIME {
        return Err(Error::InconsistentInput(format!("p = {p} is below {MIN_PRIME}")));
    }
    if a1_mod_p >= p {
        return Err(Error::InconsistentInput(format!("a1 mod p = {a1_mod_p} is not reduced")));
    }
    let a1 = if a1_mod_p > p / 2 { a1_mod_p as i64 - p as i64 } else { a1_mod_p as i64 };
    if (a1 as i128).pow(2) > 16 * p as i128 {
        return Err(Error::InconsistentInput(format!("a1 = {a1} violates the Weil bound")));
    }
    Ok(a1)
}

fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const LO: u128 = u64::MAX as u128;
    let (a0, a1, b0, b1) = (a & LO, a >> 64, b & LO, b >> 64);
    let (ll, lh, hl, hh) = (a0 * b0, a0 * b1, a1 * b0, a1 * b1);
    let mid = (ll >> 64) + (lh & LO) + (hl & LO);
    let lo = (ll & LO) | (mid << 64);
    let hi = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
    (hi, lo)
}

/// Compare a with b * sqrt(p), exactly. Never equal unless a = b = 0.
fn cmp_sqrt(a: i128, b: i128, p: u64) -> Ordering {
    match (a.signum(), b.signum()) {
        (_, 0) => a.cmp(&0),
        (s, 1) if s <= 0 => Ordering::Less,
        (s, -1) if s >= 0 => Ordering::Greater,
        _ => {
            let lhs = mul_wide(a.unsigned_abs(), a.unsigned_abs());
            let b2 = mul_wide(b.unsigned_abs(), b.unsigned_abs());
            debug_assert_eq!(b2.0, 0);
            let rhs = mul_wide(b2.1, p as u128);
            debug_assert_eq!(b2.1.checked_mul(p as u128).is_none(), rhs.0 != 0);
            if a > 0 {
                lhs.cmp(&rhs)
            } else {
                rhs.cmp(&lhs)
            }
        }
    }
}

/// floor(a1 / (4 sqrt p)).
fn quarter_floor(p: u64, a1: i64) -> i128 {
    let a1 = a1 as i128;
    let mut k: i128 = if a1 >= 0 { 0 } else { -1 };
    while cmp_sqrt(a1, 4 * k, p) == Ordering::Less {
        k -= 1;
    }
    while cmp_sqrt(a1, 4 * (k + 1), p) != Ordering::Less {
        k += 1;
    }
    k
}

/// B_low <= c <= B_high with B_high = 2p + a1^2/4 and
/// B_low = (a1^2 - p delta^2)/2, delta = |b - 4 floor(b/4) - 2|, b = a1/sqrt(p).
pub fn ks_interval_membership(p: u64, a1: i64, c: i128) -> bool {
    let (pi, a1i) = (p as i128, a1 as i128);
    if 4 * c > 8 * pi + a1i * a1i {
        return false;
    }
    // p delta^2 = a1^2 - 2 a1 m sqrt(p) + p m^2 with m = 4k + 2
    let m = 4 * quarter_floor(p, a1) + 2;
    cmp_sqrt(2 * c + pi * m * m, 2 * a1i * m, p) != Ordering::Less
}

/// All c = a2 mod p inside the interval, ascending.
pub fn initial_candidates(p: u64, a1: i64, a2_mod_p: u64) -> Result<Vec<i128>> {
    let (pi, a1i) = (p as i128, a1 as i128);
    // the interval lies inside [-2p, 2p + a1^2/4]
    let hi = 2 * pi + a1i * a1i / 4;
    let mut c = a2_mod_p as i128 - 3 * pi;
    let mut out = Vec::new();
    while c <= hi {
        if ks_interval_membership(p, a1, c) {
            out.push(c);
        }
        c += pi;
    }
    if out.is_empty() {
        return Err(Error::InconsistentInput(format!(
            "no a2 = {a2_mod_p} mod {p} fits the bounds for a1 = {a1}"
        )));
    }
    Ok(out)
}

/// 2-rank of J(F_p) from the factorization pattern of f.
pub fn two_rank(f: &Poly) -> Result<u8> {
    let pattern = f.ddf_pattern()?;
    let r = match pattern.as_slice() {
        [5] | [6] | [3, 3] => 0,
        [3, 2] | [4, 1] | [4, 2] => 1,
        [3, 1, 1] | [2, 2, 1] | [2, 2, 2] => 2,
        [2, 1, 1, 1] => 3,
        [1, 1, 1, 1, 1] => 4,
        _ => return Err(Error::PatternMismatch(pattern)),
    };
    Ok(r)
}

/// #J(F_p) mod 4 when the 2-rank is 1: 0 if Res(g1, g2) is a square, else 2.
pub fn residue_mod_4(f: &Poly) -> Result<u8> {
    let (g1, g2) = f.split_two_factors()?;
    let res = g1.resultant(&g2);
    match res.legendre() {
        1 => Ok(0),
        -1 => Ok(2),
        _ => Err(Error::Internal("factors share a root".into())),
    }
}

/// Keep the candidates whose L(1) agrees with the 2-part of #J.
pub fn refine_candidates(
    cands: &[i128],
    p: u64,
    a1: i64,
    rank: u8,
    mod4: Option<u8>,
) -> Result<Vec<i128>> {
    if (rank == 1) != mod4.is_some() {
        return Err(Error::Internal("mod 4 residue is required exactly for 2-rank 1".into()));
    }
    let keep = |c: &i128| {
        let n = order_at(p, a1, *c, false);
        match (rank, mod4) {
            (0, _) => n.rem_euclid(2) == 1,
            (1, Some(r)) => n.rem_euclid(4) == r as i128,
            (r, _) => n.rem_euclid(1 << r) == 0,
        }
    };
    let out: Vec<i128> = cands.iter().copied().filter(keep).collect();
    if out.is_empty() {
        return Err(Error::InconsistentInput(format!("no candidate has 2-rank {rank}")));
    }
    Ok(out)
}

/// Sample points alternately in J and its twist and drop every candidate
/// whose group order fails to kill the sample.
pub fn eliminate_by_group<R: Rng + ?Sized>(
    cands: &[i128],
    curve: &CurveFp,
    a1: i64,
    rng: &mut R,
) -> Result<(i128, Vec<Round>)> {
    let p = curve.p();
    let mut alive: Vec<i128> = cands
        .iter()
        .copied()
        .filter(|&c| order_at(p, a1, c, false) > 0 && order_at(p, a1, c, true) > 0)
        .collect();
    let mut rounds = Vec::new();
    let jac = Jacobian::new(curve)?;
    let mut twist_jac: Option<Jacobian> = None;
    for i in 0..MAX_ITERATIONS {
        match alive.len() {
            0 => return Err(Error::InconsistentInput("every candidate was eliminated".into())),
            1 => return Ok((alive[0], rounds)),
            _ => {}
        }
        let twist = i % 2 == 1;
        let j = if twist {
            twist_jac.get_or_insert(Jacobian::new(&curve.quadratic_twist())?)
        } else {
            &jac
        };
        let pt = j.random_point(rng);
        let tested: Vec<(i128, i128)> =
            alive.iter().map(|&c| (c, order_at(p, a1, c, twist))).collect();
        alive = tested
            .iter()
            .filter(|&&(_, n)| j.is_identity(&j.scalar_mul(n as u128, &pt)))
            .map(|&(c, _)| c)
            .collect();
        rounds.push(Round { twist, tested, survivors: alive.clone() });
    }
    match alive.len() {
        0 => Err(Error::InconsistentInput("every candidate was eliminated".into())),
        1 => Ok((alive[0], rounds)),
        _ => Err(Error::Internal(format!("{MAX_ITERATIONS} samples left {alive:?} undecided"))),
    }
}

/// Check that the chosen orders kill one random point of J and/or of the
/// twist. Guards against inconsistent mod-p data that refinement alone
/// cannot detect; the correct answer always passes.
fn confirm<R: Rng + ?Sized>(
    curve: &CurveFp,
    a1: i64,
    a2: i128,
    on_jacobian: bool,
    on_twist: bool,
    rng: &mut R,
) -> Result<()> {
    let p = curve.p();
    for (twist, wanted) in [(false, on_jacobian), (true, on_twist)] {
        if !wanted {
            continue;
        }
        let n = order_at(p, a1, a2, twist);
        if n <= 0 {
            return Err(Error::InconsistentInput(format!("L({}) = {n}", if twist { -1 } else { 1 })));
        }
        let j = if twist { Jacobian::new(&curve.quadratic_twist())? } else { Jacobian::new(curve)? };
        if !j.is_identity(&j.scalar_mul(n as u128, &j.random_point(rng))) {
            return Err(Error::InconsistentInput(format!("a2 = {a2} fails the group-order check")));
        }
    }
    Ok(())
}

/// The full pipeline. `curve` is the reduction at p; `input` the mod-p data.
pub fn lift<R: Rng + ?Sized>(
    curve: &CurveFp,
    input: ModPInput,
    rng: &mut R,
) -> std::result::Result<LiftReport, LiftError> {
    let at = |stage| move |e| LiftError::new(stage, e);
    let p = curve.p();
    let (work, converted) = if curve.degree() == 6 && curve.has_rational_root() {
        (curve.to_degree5_model().map_err(at(Stage::ModelConversion))?, true)
    } else {
        (curve.clone(), false)
    };
    let a1 = recover_a1(p, input.a1).map_err(at(Stage::RecoverA1))?;
    if input.a2 >= p {
        return Err(LiftError::new(
            Stage::InitialCandidates,
            Error::InconsistentInput(format!("a2 mod p = {} is not reduced", input.a2)),
        ));
    }
    let initial = initial_candidates(p, a1, input.a2).map_err(at(Stage::InitialCandidates))?;
    let rank = two_rank(work.f()).map_err(at(Stage::TwoRank))?;
    let mod4 = if rank == 1 {
        Some(residue_mod_4(work.f()).map_err(at(Stage::TwoRank))?)
    } else {
        None
    };
    let refined =
        refine_candidates(&initial, p, a1, rank, mod4).map_err(at(Stage::Refinement))?;
    let (a2, rounds) = if refined.len() == 1 {
        (refined[0], Vec::new())
    } else {
        eliminate_by_group(&refined, &work, a1, rng).map_err(at(Stage::GroupElimination))?
    };
    let checked = |twist| rounds.iter().any(|r: &Round| r.twist == twist);
    confirm(&work, a1, a2, !checked(false), !checked(true), rng)
        .map_err(at(Stage::GroupElimination))?;
    Ok(LiftReport {
        lpoly: LPolynomial { p, a1, a2 },
        iterations: rounds.len() as u32,
        initial,
        refined,
        two_rank: rank,
        mod4,
        rounds,
        converted,
    })
}

/// `lift` with a ChaCha8 stream seeded from `seed`.
pub fn lift_seeded(
    curve: &CurveFp,
    input: ModPInput,
    seed: u64,
) -> std::result::Result<LiftReport, LiftError> {
    lift(curve, input, &mut ChaCha8Rng::seed_from_u64(seed))
}

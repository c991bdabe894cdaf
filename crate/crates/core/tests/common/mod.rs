#![allow(dead_code)]

use g2zeta::{CurveFp, CurveQ, LPolynomial, ModPInput, OracleResult, Poly, PrimeModulus};
use rand::Rng;

/// Fixed test curves, coefficients c0..c6.
pub const CORPUS: [&str; 10] = [
    "283,34,153,152,77,202,1",
    "1,1,0,0,0,1",
    "1,0,0,0,0,1",
    "0,1,0,0,0,1",
    "1,1,0,0,0,0,1",
    "-1,2,-3,1,0,4,1",
    "1,3,-2,0,5,1",
    "3,-1,4,1,-5,9,2",
    "-7,0,5,-3,1,0,-1",
    "12,-5,0,7,2,-3",
];

pub fn corpus() -> Vec<CurveQ> {
    CORPUS.iter().map(|s| s.parse().unwrap()).collect()
}

pub fn random_curve(rng: &mut impl Rng, p: u64, deg: usize) -> CurveFp {
    let m = PrimeModulus::new(p).unwrap();
    loop {
        let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(0..p as i64)).collect();
        c.push(rng.gen_range(1..p as i64));
        if let Ok(curve) = CurveFp::new(Poly::from_i64s(m, &c)) {
            return curve;
        }
    }
}

pub fn lpoly(r: &OracleResult) -> LPolynomial {
    LPolynomial { p: r.p, a1: r.a1, a2: r.a2 as i128 }
}

pub fn reduced(r: &OracleResult) -> ModPInput {
    lpoly(r).reduce()
}

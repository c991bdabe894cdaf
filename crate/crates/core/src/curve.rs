//! Genus-2 curves y^2 = f(x): reduction from Z, model normalization, twists
//! and point counts.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{Fp, Fp2, PrimeModulus};
use crate::poly::Poly;

/// Default largest p for the O(p) count over F_p.
pub const FP_COUNT_CAP: u64 = 1 << 20;
/// Default largest p for the O(p^2) count over F_{p^2}.
pub const FP2_COUNT_CAP: u64 = 1 << 10;
/// Hard ceiling for the F_{p^2} scan; its lazy reductions need p^3 < 2^63.
const FP2_COUNT_HARD_LIMIT: u64 = 1 << 20;

/// y^2 = f(x) over Q with integer coefficients c0..c6 (low to high).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveQ {
    coeffs: [i64; 7],
}

impl CurveQ {
    /// Requires deg f in {5, 6} and f squarefree over Q.
    pub fn new(coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() > 7 {
            return Err(Error::Parse(format!("expected at most 7 coefficients, got {}", coeffs.len())));
        }
        let mut c = [0i64; 7];
        c[..coeffs.len()].copy_from_slice(coeffs);
        let curve = CurveQ { coeffs: c };
        let deg = curve.degree();
        if deg != Some(5) && deg != Some(6) {
            return Err(Error::Parse(format!("degree must be 5 or 6, got {deg:?}")));
        }
        if !curve.is_squarefree_over_q() {
            return Err(Error::NotSquarefree);
        }
        Ok(curve)
    }

    pub fn coeffs(&self) -> &[i64; 7] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    // A polynomial that is squarefree mod p with unchanged degree is squarefree
    // over Q; a nonzero discriminant has only finitely many prime divisors.
    fn is_squarefree_over_q(&self) -> bool {
        let deg = self.degree().unwrap_or(0);
        (3u64..5000)
            .filter(|&p| crate::field::is_prime(p))
            .filter(|&p| self.coeffs[deg] % p as i64 != 0)
            .any(|p| {
                let m = PrimeModulus::new(p).expect("prime");
                Poly::from_i64s(m, &self.coeffs).is_squarefree()
            })
    }

    /// Reduce at an odd prime; accepted iff the reduction is squarefree of
    /// degree at least 5.
    pub fn reduce(&self, m: PrimeModulus) -> Result<CurveFp> {
        let f = Poly::from_i64s(m, &self.coeffs);
        if f.deg() < 5 {
            return Err(Error::BadReduction(format!("degree drops to {} mod {}", f.deg(), m.p())));
        }
        if !f.is_squarefree() {
            return Err(Error::BadReduction(format!("not squarefree mod {}", m.p())));
        }
        Ok(CurveFp { f, provenance: Provenance::Reduced })
    }
}

impl FromStr for CurveQ {
    type Err = Error;

    /// Comma-separated integer coefficients c0,...,c6, low to high.
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        CurveQ::new(&coeffs)
    }
}

impl fmt::Display for CurveQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// How a curve over F_p was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Reduced,
    Direct,
    Twisted,
    ModelConverted,
}

/// y^2 = f(x) over F_p with f squarefree of degree 5 or 6.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveFp {
    f: Poly,
    provenance: Provenance,
}

impl CurveFp {
    pub fn new(f: Poly) -> Result<Self> {
        if f.deg() != 5 && f.deg() != 6 {
            return Err(Error::BadReduction(format!("degree {} is not 5 or 6", f.deg())));
        }
        if !f.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        Ok(CurveFp { f, provenance: Provenance::Direct })
    }

    pub fn from_coeffs(p: u64, coeffs: &[i64]) -> Result<Self> {
        CurveFp::new(Poly::from_i64s(PrimeModulus::new(p)?, coeffs))
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.f.modulus()
    }

    pub fn p(&self) -> u64 {
        self.f.modulus().p()
    }

    pub fn degree(&self) -> usize {
        self.f.deg() as usize
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Degree-6 curve with a rational root r: pass to t^6 f(r + 1/t), which
    /// has degree exactly 5 and defines an isomorphic curve.
    pub fn to_degree5_model(&self) -> Result<CurveFp> {
        if self.degree() != 6 {
            return Err(Error::BadReduction("model conversion needs a sextic".into()));
        }
        let r = *self.f.roots().first().ok_or(Error::NoRationalRoot)?;
        let g = self.f.shift(r).reverse(6);
        debug_assert_eq!(g.deg(), 5);
        Ok(CurveFp { f: g, provenance: Provenance::ModelConverted })
    }

    pub fn has_rational_root(&self) -> bool {
        !self.f.roots().is_empty()
    }

    /// y^2 = d f(x) with d the canonical non-residue.
    pub fn quadratic_twist(&self) -> CurveFp {
        let d = self.modulus().nonresidue();
        CurveFp { f: self.f.scale(d), provenance: Provenance::Twisted }
    }

    /// Points at infinity over F_p: one for degree 5, 1 + chi(lc) for degree 6.
    fn points_at_infinity(&self) -> i64 {
        if self.degree() == 5 {
            1
        } else {
            1 + self.f.lc().legendre() as i64
        }
    }

    pub fn count_points_fp(&self) -> Result<u64> {
        self.count_points_fp_with(FP_COUNT_CAP, Exec::default())
    }

    pub fn count_points_fp_with(&self, cap: u64, exec: Exec) -> Result<u64> {
        let p = self.p();
        if p > cap {
            return Err(Error::CapExceeded { p, cap });
        }
        let m = self.modulus();
        let f = &self.f;
        let affine = exec.sum_range(p, |x| 1 + f.eval(m.elem(x)).legendre() as i64);
        Ok((affine + self.points_at_infinity()) as u64)
    }

    pub fn count_points_fp2(&self) -> Result<u64> {
        self.count_points_fp2_with(FP2_COUNT_CAP, Exec::default())
    }

    /// Count over F_{p^2} = F_p[z]/(z^2 - s). Each x outside F_p is paired
    /// with its conjugate, which has the same fibre size.
    pub fn count_points_fp2_with(&self, cap: u64, exec: Exec) -> Result<u64> {
        let p = self.p();
        let cap = cap.min(FP2_COUNT_HARD_LIMIT);
        if p > cap {
            return Err(Error::CapExceeded { p, cap });
        }
        let s = self.modulus().nonresidue().value();
        let c: Vec<u64> = self.f.coeffs().iter().map(Fp::value).collect();
        let d = c.len() - 1;
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        for x in 1..p {
            chi[(x * x % p) as usize] = 1;
        }
        // x in F_p: f(x) lies in F_p, always a square in F_{p^2}
        let base = exec.sum_range(p, |a| {
            let v = c.iter().rev().fold(0u64, |acc, &k| (acc * a + k) % p);
            if v == 0 {
                1
            } else {
                2
            }
        });
        let conj = exec.sum_range((p - 1) / 2, |i| {
            let b = i + 1;
            let mut total = 0i64;
            for a in 0..p {
                let (mut r0, mut r1) = (c[d], 0u64);
                for k in (0..d).rev() {
                    let t0 = (r0 * a + s * (r1 * b % p) + c[k]) % p;
                    let t1 = (r0 * b + r1 * a) % p;
                    r0 = t0;
                    r1 = t1;
                }
                let norm = (r0 * r0 % p + s * (p - r1 * r1 % p)) % p;
                total += 1 + chi[norm as usize] as i64;
            }
            2 * total
        });
        // the leading coefficient is a square in F_{p^2}
        let infinity = if d == 5 { 1 } else { 2 };
        Ok((base + conj + infinity) as u64)
    }

    /// Same count through the generic F_{p^2} element type; O(p^2) and slow.
    pub fn count_points_fp2_reference(&self) -> u64 {
        let m = self.modulus();
        let mut total = if self.degree() == 5 { 1 } else { 2 };
        for a in m.elements() {
            for b in m.elements() {
                let y2 = self.f.eval_fp2(Fp2::new(a, b));
                total += 1 + y2.legendre() as i64;
            }
        }
        total as u64
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    pub(crate) fn random_curve(rng: &mut impl Rng, p: u64, deg: usize) -> CurveFp {
        let md = m(p);
        loop {
            let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(0..p as i64)).collect();
            c.push(rng.gen_range(1..p as i64));
            if let Ok(curve) = CurveFp::new(Poly::from_i64s(md, &c)) {
                return curve;
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let c: CurveQ = "283,34,153,152,77,202,1".parse().unwrap();
        assert_eq!(c.degree(), Some(6));
        assert_eq!(c.to_string(), "283,34,153,152,77,202,1");
        let q: CurveQ = "1, 0, 0, 0, 0, 1".parse().unwrap();
        assert_eq!(q.degree(), Some(5));
        assert!("1,2".parse::<CurveQ>().is_err());
        assert!("a,b".parse::<CurveQ>().is_err());
        // (x^3 + 1)^2 is not squarefree
        assert_eq!(CurveQ::new(&[1, 0, 0, 2, 0, 0, 1]), Err(Error::NotSquarefree));
    }

    #[test]
    fn reduction_examples() {
        let c: CurveQ = "283,34,153,152,77,202,1".parse().unwrap();
        assert_eq!(c.reduce(m(313)).unwrap().degree(), 6);
        let q = CurveQ::new(&[1, 0, 0, 0, 0, 1]).unwrap();
        assert!(matches!(q.reduce(m(5)), Err(Error::BadReduction(_))));
        assert!(q.reduce(m(3)).is_ok());
        // degree drops from 6 to 5 when p divides c6
        let d = CurveQ::new(&[1, 2, 0, 1, 0, 1, 7]).unwrap();
        let r = d.reduce(m(7));
        if let Ok(r) = r {
            assert_eq!(r.degree(), 5);
        }
    }

    #[test]
    fn hand_count_over_f3() {
        let c = CurveFp::from_coeffs(3, &[1, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(c.count_points_fp().unwrap(), 4);
    }

    #[test]
    fn degree6_infinity_points() {
        let c = CurveFp::from_coeffs(13, &[2, 1, 0, 0, 0, 0, 4]).unwrap();
        assert_eq!(c.points_at_infinity(), 2);
        let c = CurveFp::from_coeffs(13, &[2, 1, 0, 0, 0, 0, 2]).unwrap();
        assert_eq!(c.points_at_infinity(), 0);
    }

    #[test]
    fn count_matches_naive_double_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61] {
            for deg in [5, 6] {
                let c = random_curve(&mut rng, p, deg);
                let md = c.modulus();
                let mut naive = 0u64;
                for x in md.elements() {
                    let fx = c.f().eval(x);
                    for y in md.elements() {
                        if y * y == fx {
                            naive += 1;
                        }
                    }
                }
                naive += match deg {
                    5 => 1,
                    _ => md.elements().filter(|&y| y * y == c.f().lc()).count() as u64,
                };
                assert_eq!(c.count_points_fp().unwrap(), naive);
            }
        }
    }

    #[test]
    fn weil_bounds_at_101() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..40 {
            let deg = rng.gen_range(5..=6);
            let c = random_curve(&mut rng, 101, deg);
            let n1 = c.count_points_fp().unwrap() as i64;
            assert!((n1 - 102).pow(2) <= 16 * 101);
            let n2 = c.count_points_fp2().unwrap() as i64;
            assert!((n2 - 101 * 101 - 1).abs() <= 4 * 101);
        }
    }

    #[test]
    fn twist_complements_affine_fibres() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for p in [13u64, 101, 313] {
            for _ in 0..10 {
                let c = random_curve(&mut rng, p, 5);
                let t = c.quadratic_twist();
                assert_eq!(t.provenance(), Provenance::Twisted);
                let sum = c.count_points_fp().unwrap() + t.count_points_fp().unwrap();
                assert_eq!(sum, 2 * p + 2);
                let tt = t.quadratic_twist();
                assert_eq!(tt.count_points_fp().unwrap(), c.count_points_fp().unwrap());
            }
        }
    }

    #[test]
    fn fp2_fast_count_matches_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for p in [3u64, 5, 7, 13, 31] {
            for deg in [5, 6] {
                let c = random_curve(&mut rng, p, deg);
                assert_eq!(c.count_points_fp2().unwrap(), c.count_points_fp2_reference());
                assert_eq!(
                    c.count_points_fp2_with(FP2_COUNT_CAP, Exec::Sequential).unwrap(),
                    c.count_points_fp2_reference()
                );
            }
        }
    }

    #[test]
    fn caps_enforced() {
        let c = CurveFp::from_coeffs(1031, &[1, 0, 0, 0, 0, 1]).unwrap();
        assert!(matches!(c.count_points_fp2(), Err(Error::CapExceeded { .. })));
        assert!(c.count_points_fp_with(1000, Exec::Sequential).is_err());
    }

    #[test]
    fn degree5_model_conversion() {
        // x (x^5 + x + 1) has the root 0
        let c = CurveFp::from_coeffs(101, &[0, 1, 1, 0, 0, 0, 1]).unwrap();
        let d = c.to_degree5_model().unwrap();
        assert_eq!(d.degree(), 5);
        assert_eq!(d.f(), &c.f().reverse(6));

        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let mut done = 0;
        while done < 20 {
            let c = random_curve(&mut rng, 101, 6);
            if !c.has_rational_root() {
                assert_eq!(c.to_degree5_model(), Err(Error::NoRationalRoot));
                continue;
            }
            let d = c.to_degree5_model().unwrap();
            assert_eq!(d.degree(), 5);
            assert!(d.f().is_squarefree());
            assert_eq!(d.count_points_fp().unwrap(), c.count_points_fp().unwrap());
            assert_eq!(d.count_points_fp2().unwrap(), c.count_points_fp2().unwrap());
            done += 1;
        }
    }
}

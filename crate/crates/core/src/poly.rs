//! Dense univariate polynomials over F_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Fp, Fp2, PrimeModulus};

/// Coefficients are stored lowest degree first with no trailing zeros, so the
/// zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    m: PrimeModulus,
    c: Vec<Fp>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*x")?,
                _ => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(m: PrimeModulus, c: Vec<Fp>) -> Self {
        let mut p = Poly { m, c };
        p.trim();
        p
    }

    pub fn from_u64s(m: PrimeModulus, c: &[u64]) -> Self {
        Poly::new(m, c.iter().map(|&v| m.elem(v)).collect())
    }

    pub fn from_i64s(m: PrimeModulus, c: &[i64]) -> Self {
        Poly::new(m, c.iter().map(|&v| m.from_i64(v)).collect())
    }

    pub fn zero(m: PrimeModulus) -> Self {
        Poly { m, c: Vec::new() }
    }

    pub fn one(m: PrimeModulus) -> Self {
        Poly::constant(m.one())
    }

    pub fn constant(c: Fp) -> Self {
        Poly::new(c.modulus(), vec![c])
    }

    pub fn x(m: PrimeModulus) -> Self {
        Poly { m, c: vec![m.zero(), m.one()] }
    }

    /// The monic linear polynomial x - a.
    pub fn linear(a: Fp) -> Self {
        let m = a.modulus();
        Poly { m, c: vec![-a, m.one()] }
    }

    pub fn monomial(c: Fp, deg: usize) -> Self {
        let m = c.modulus();
        let mut v = vec![m.zero(); deg + 1];
        v[deg] = c;
        Poly::new(m, v)
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|a| a.is_zero()) {
            self.c.pop();
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.m
    }

    pub fn coeffs(&self) -> &[Fp] {
        &self.c
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Fp {
        self.c.get(i).copied().unwrap_or(self.m.zero())
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == self.m.one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().is_some_and(|a| *a == self.m.one())
    }

    pub fn lc(&self) -> Fp {
        self.c.last().copied().unwrap_or(self.m.zero())
    }

    pub fn monic(&self) -> Poly {
        match self.c.last() {
            None => self.clone(),
            Some(lc) => self.scale(lc.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn scale(&self, s: Fp) -> Poly {
        Poly::new(self.m, self.c.iter().map(|&a| a * s).collect())
    }

    pub fn eval(&self, x: Fp) -> Fp {
        self.c.iter().rev().fold(self.m.zero(), |acc, &a| acc * x + a)
    }

    pub fn eval_fp2(&self, x: Fp2) -> Fp2 {
        let zero = Fp2::from_base(self.m.zero());
        self.c.iter().rev().fold(zero, |acc, &a| acc * x + Fp2::from_base(a))
    }

    pub fn derivative(&self) -> Poly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| a * self.m.elem(i as u64))
            .collect();
        Poly::new(self.m, c)
    }

    /// f(x + r).
    pub fn shift(&self, r: Fp) -> Poly {
        // Horner in the ring: ((c_n)(x + r) + c_{n-1})(x + r) + ...
        let xr = Poly::new(self.m, vec![r, self.m.one()]);
        self.c
            .iter()
            .rev()
            .fold(Poly::zero(self.m), |acc, &a| &(&acc * &xr) + &Poly::constant(a))
    }

    /// x^n f(1/x); requires n >= deg f.
    pub fn reverse(&self, n: usize) -> Poly {
        debug_assert!(self.deg() <= n as i64);
        let mut c = vec![self.m.zero(); n + 1];
        for (i, &a) in self.c.iter().enumerate() {
            c[n - i] = a;
        }
        Poly::new(self.m, c)
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let Some(nd) = self.degree() else {
            return Ok((Poly::zero(self.m), Poly::zero(self.m)));
        };
        if nd < dd {
            return Ok((Poly::zero(self.m), self.clone()));
        }
        let inv = d.lc().inv()?;
        let mut r = self.c.clone();
        let mut q = vec![self.m.zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let t = r[i + dd] * inv;
            q[i] = t;
            if t.is_zero() {
                continue;
            }
            for (j, &b) in d.c.iter().enumerate() {
                r[i + j] -= t * b;
            }
        }
        r.truncate(dd);
        Ok((Poly::new(self.m, q), Poly::new(self.m, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    /// Quotient of an exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// (g, s, t) with g = s*self + t*other and g monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let m = self.m;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(m), Poly::zero(m));
        let (mut t0, mut t1) = (Poly::zero(m), Poly::one(m));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("r1 is nonzero");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv().expect("nonzero");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly) -> Poly {
        (self * other).rem(modulus).expect("nonzero modulus")
    }

    /// self^e mod `modulus` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u128, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus).expect("nonzero modulus");
        let mut acc = Poly::one(self.m).rem(modulus).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus);
            }
            base = base.mul_mod(&base, modulus);
            e >>= 1;
        }
        acc
    }

    /// x^p mod self.
    pub fn frobenius_power(&self) -> Poly {
        Poly::x(self.m).pow_mod(self.m.p() as u128, self)
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Distinct-degree factorization of a squarefree polynomial: pairs (d, g_d)
    /// where g_d is the monic product of all irreducible factors of degree d.
    pub fn ddf(&self) -> Result<Vec<(usize, Poly)>> {
        if !self.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let x = Poly::x(self.m);
        let mut rest = self.monic();
        let mut out = Vec::new();
        let mut h = x.clone();
        let mut d = 1;
        while rest.deg() >= 2 * d as i64 {
            h = h.pow_mod(self.m.p() as u128, &rest);
            let g = rest.gcd(&(&h - &x));
            if !g.is_one() {
                rest = rest.div_exact(&g)?;
                h = h.rem(&rest)?;
                out.push((d, g));
            }
            d += 1;
        }
        if rest.deg() > 0 {
            out.push((rest.deg() as usize, rest));
        }
        Ok(out)
    }

    /// Multiset of irreducible factor degrees, sorted descending.
    pub fn ddf_pattern(&self) -> Result<Vec<usize>> {
        let mut pattern: Vec<usize> = self
            .ddf()?
            .iter()
            .flat_map(|(d, g)| std::iter::repeat(*d).take(g.deg() as usize / d))
            .collect();
        pattern.sort_unstable_by(|a, b| b.cmp(a));
        Ok(pattern)
    }

    pub fn is_irreducible(&self) -> bool {
        match self.ddf_pattern() {
            Ok(pat) => pat.len() == 1,
            Err(_) => false,
        }
    }

    /// Split f = lc(f) * g1 * g2 for the 2-rank-one patterns {4,1}, {3,2} and
    /// {4,2}. g1 is the even-degree factor (the quadratic for {4,2}).
    pub fn split_two_factors(&self) -> Result<(Poly, Poly)> {
        let parts = self.ddf()?;
        let pattern = self.ddf_pattern()?;
        if !matches!(pattern.as_slice(), [4, 1] | [3, 2] | [4, 2]) {
            return Err(Error::PatternMismatch(pattern));
        }
        // both degrees differ, so each DDF part is a single irreducible
        let (mut g1, mut g2) = (parts[0].1.clone(), parts[1].1.clone());
        let d1 = g1.degree().unwrap();
        let d2 = g2.degree().unwrap();
        let swap = if d1 % 2 == 0 && d2 % 2 == 0 { d1 > d2 } else { d1 % 2 == 1 };
        if swap {
            std::mem::swap(&mut g1, &mut g2);
        }
        Ok((g1, g2))
    }

    /// Res(self, other) by the Euclidean remainder sequence.
    pub fn resultant(&self, other: &Poly) -> Fp {
        let m = self.m;
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = m.one();
        loop {
            if a.is_zero() || b.is_zero() {
                return m.zero();
            }
            let da = a.deg() as u64;
            let db = b.deg() as u64;
            if db == 0 {
                return acc * b.lc().pow(da);
            }
            let r = a.rem(&b).expect("nonzero");
            if r.is_zero() {
                return m.zero();
            }
            // Res(a, b) = (-1)^{da db} lc(b)^{da - dr} Res(b, r)
            if (da * db) % 2 == 1 {
                acc = -acc;
            }
            acc *= b.lc().pow(da - r.deg() as u64);
            a = b;
            b = r;
        }
    }

    /// Roots in F_p, ascending. Splits the linear part gcd(x^p - x, f) by
    /// gcd((x + delta)^((p-1)/2) - 1, .) for delta = 0, 1, 2, ...
    pub fn roots(&self) -> Vec<Fp> {
        let m = self.m;
        if self.deg() <= 0 {
            return Vec::new();
        }
        let x = Poly::x(m);
        let lin = self.gcd(&(&self.monic().frobenius_power() - &x));
        let mut roots = Vec::new();
        let mut stack = vec![lin];
        let half = (m.p() - 1) / 2;
        while let Some(g) = stack.pop() {
            match g.deg() {
                d if d <= 0 => {}
                1 => roots.push(-g.coeff(0)),
                _ => {
                    let mut delta = 0u64;
                    loop {
                        let t = Poly::new(m, vec![m.elem(delta), m.one()]);
                        let h = &t.pow_mod(half as u128, &g) - &Poly::one(m);
                        let s = g.gcd(&h);
                        if s.deg() > 0 && s.deg() < g.deg() {
                            let other = g.div_exact(&s).expect("s divides g");
                            stack.push(s);
                            stack.push(other);
                            break;
                        }
                        // delta = -root also separates that root from the rest
                        let z = g.gcd(&t);
                        if z.deg() == 1 {
                            stack.push(z.clone());
                            stack.push(g.div_exact(&z).expect("z divides g"));
                            break;
                        }
                        delta += 1;
                    }
                }
            }
        }
        roots.sort_by_key(|r| r.value());
        roots
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let c = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Poly::new(self.m, c)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let c = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Poly::new(self.m, c)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.m);
        }
        let mut c = vec![self.m.zero(); self.c.len() + rhs.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(self.m, c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { m: self.m, c: self.c.iter().map(|&a| -a).collect() }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

//! Arithmetic in F_p for odd primes p < 2^62, and in F_{p^2} = F_p[z]/(z^2 - s)
//! where s is the smallest quadratic non-residue mod p.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Exclusive upper bound on supported moduli.
pub const MODULUS_LIMIT: u64 = 1 << 62;

/// An odd prime below 2^62 together with its canonical non-residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeModulus {
    p: u64,
    nonresidue: u64,
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p >= MODULUS_LIMIT || p % 2 == 0 || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        let nonresidue = (2..p)
            .find(|&s| jacobi(s, p) == -1)
            .expect("odd primes have non-residues");
        Ok(PrimeModulus { p, nonresidue })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: u64) -> Fp {
        Fp { v: v % self.p, m: *self }
    }

    pub fn from_i64(&self, v: i64) -> Fp {
        Fp { v: (v as i128).rem_euclid(self.p as i128) as u64, m: *self }
    }

    pub fn from_i128(&self, v: i128) -> Fp {
        Fp { v: v.rem_euclid(self.p as i128) as u64, m: *self }
    }

    pub fn zero(&self) -> Fp {
        Fp { v: 0, m: *self }
    }

    pub fn one(&self) -> Fp {
        Fp { v: 1, m: *self }
    }

    /// The smallest quadratic non-residue; it defines F_{p^2}.
    pub fn nonresidue(&self) -> Fp {
        Fp { v: self.nonresidue, m: *self }
    }

    /// Iterate over every element of F_p in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Fp> + '_ {
        let m = *self;
        (0..self.p).map(move |v| Fp { v, m })
    }
}

/// Returns the smallest non-residue mod p.
pub fn find_nonresidue(m: &PrimeModulus) -> Fp {
    m.nonresidue()
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        (a * b) % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set is exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &WITNESSES {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Jacobi symbol (a/n) for odd n by the binary reciprocity walk.
pub fn jacobi(a: u64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// An element of F_p, stored as its canonical representative in [0, p).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u64,
    m: PrimeModulus,
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Fp {
    #[inline]
    pub fn value(&self) -> u64 {
        self.v
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.m
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    /// Centered representative in (-p/2, p/2).
    pub fn centered(&self) -> i64 {
        let p = self.m.p;
        if self.v > p / 2 {
            self.v as i64 - p as i64
        } else {
            self.v as i64
        }
    }

    pub fn pow(&self, e: u64) -> Fp {
        Fp { v: pow_mod(self.v, e, self.m.p), m: self.m }
    }

    pub fn square(&self) -> Fp {
        *self * *self
    }

    pub fn double(&self) -> Fp {
        *self + *self
    }

    pub fn inv(&self) -> Result<Fp> {
        if self.v == 0 {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid on (v, p); p prime so gcd is 1
        let (mut r0, mut r1) = (self.m.p as i128, self.v as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.m.from_i128(t0))
    }

    pub fn div(&self, rhs: Fp) -> Result<Fp> {
        Ok(*self * rhs.inv()?)
    }

    /// Quadratic character: 0, +1 or -1.
    pub fn legendre(&self) -> i8 {
        jacobi(self.v, self.m.p)
    }

    pub fn is_square(&self) -> bool {
        self.legendre() >= 0
    }

    /// A square root by Tonelli-Shanks, using the modulus' fixed non-residue so
    /// the result is a deterministic function of the input.
    pub fn sqrt(&self) -> Result<Fp> {
        match self.legendre() {
            0 => return Ok(*self),
            -1 => return Err(Error::NonResidue),
            _ => {}
        }
        let p = self.m.p;
        if p % 4 == 3 {
            return Ok(self.pow((p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut c = self.m.nonresidue().pow(q);
        let mut x = self.pow((q + 1) / 2);
        let mut t = self.pow(q);
        let mut m = s;
        let one = self.m.one();
        while t != one {
            let mut i = 0;
            let mut t2 = t;
            while t2 != one {
                t2 = t2.square();
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = b.square();
            }
            x *= b;
            c = b.square();
            t *= c;
            m = i;
        }
        Ok(x)
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.m.p, rhs.m.p);
        let p = self.m.p;
        let s = self.v + rhs.v;
        Fp { v: if s >= p { s - p } else { s }, m: self.m }
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.m.p, rhs.m.p);
        let v = if self.v >= rhs.v { self.v - rhs.v } else { self.v + self.m.p - rhs.v };
        Fp { v, m: self.m }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.m.p, rhs.m.p);
        Fp { v: mul_mod(self.v, rhs.v, self.m.p), m: self.m }
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        Fp { v: if self.v == 0 { 0 } else { self.m.p - self.v }, m: self.m }
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

/// An element c0 + c1*z of F_{p^2}, with z^2 equal to the modulus' non-residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp2 {
    pub c0: Fp,
    pub c1: Fp,
}

impl Fp2 {
    pub fn new(c0: Fp, c1: Fp) -> Self {
        debug_assert_eq!(c0.m.p, c1.m.p);
        Fp2 { c0, c1 }
    }

    pub fn from_base(c0: Fp) -> Self {
        Fp2 { c0, c1: c0.m.zero() }
    }

    /// The generator z with z^2 = s.
    pub fn z(m: &PrimeModulus) -> Self {
        Fp2 { c0: m.zero(), c1: m.one() }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.c0.m
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    /// c0^2 - s*c1^2, the norm down to F_p.
    pub fn norm(&self) -> Fp {
        let s = self.c0.m.nonresidue();
        self.c0.square() - s * self.c1.square()
    }

    /// The p-power Frobenius, which is conjugation z -> -z.
    pub fn frobenius(&self) -> Fp2 {
        Fp2 { c0: self.c0, c1: -self.c1 }
    }

    pub fn inv(&self) -> Result<Fp2> {
        let n = self.norm().inv()?;
        Ok(Fp2 { c0: self.c0 * n, c1: -self.c1 * n })
    }

    pub fn square(&self) -> Fp2 {
        *self * *self
    }

    pub fn pow(&self, mut e: u128) -> Fp2 {
        let mut acc = Fp2::from_base(self.c0.m.one());
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b;
            }
            b = b.square();
            e >>= 1;
        }
        acc
    }

    /// Quadratic character in F_{p^2}, read off the norm.
    pub fn legendre(&self) -> i8 {
        self.norm().legendre()
    }

    pub fn is_square(&self) -> bool {
        self.legendre() >= 0
    }

    pub fn sqrt(&self) -> Result<Fp2> {
        let m = self.c0.m;
        if self.c1.is_zero() {
            // a in F_p: either sqrt(a) in F_p or sqrt(a/s)*z
            return Ok(match self.c0.sqrt() {
                Ok(r) => Fp2::from_base(r),
                Err(_) => {
                    let r = self.c0.div(m.nonresidue())?.sqrt()?;
                    Fp2 { c0: m.zero(), c1: r }
                }
            });
        }
        let r = self.norm().sqrt()?;
        let half = m.elem(2).inv()?;
        // exactly one of (c0 +- r)/2 is a square in F_p
        let mut x2 = (self.c0 + r) * half;
        if !x2.is_square() {
            x2 = (self.c0 - r) * half;
        }
        let x = x2.sqrt()?;
        let y = self.c1.div(x.double())?;
        Ok(Fp2 { c0: x, c1: y })
    }
}

impl Add for Fp2 {
    type Output = Fp2;
    fn add(self, rhs: Fp2) -> Fp2 {
        Fp2 { c0: self.c0 + rhs.c0, c1: self.c1 + rhs.c1 }
    }
}

impl Sub for Fp2 {
    type Output = Fp2;
    fn sub(self, rhs: Fp2) -> Fp2 {
        Fp2 { c0: self.c0 - rhs.c0, c1: self.c1 - rhs.c1 }
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    fn mul(self, rhs: Fp2) -> Fp2 {
        let s = self.c0.m.nonresidue();
        Fp2 {
            c0: self.c0 * rhs.c0 + s * self.c1 * rhs.c1,
            c1: self.c0 * rhs.c1 + self.c1 * rhs.c0,
        }
    }
}

impl Neg for Fp2 {
    type Output = Fp2;
    fn neg(self) -> Fp2 {
        Fp2 { c0: -self.c0, c1: -self.c1 }
    }
}

//! Arithmetic in J(F_p) for y^2 = f(x).
//!
//! Degree-5 curves use the usual Mumford/Cantor arithmetic. Degree-6 curves
//! use the balanced representation on a model with square leading
//! coefficient: a class is `[u, v, n]`, meaning
//! `A(u, v) + n*inf+ + (2 - deg u - n)*inf- - (inf+ + inf-)`,
//! reduced when `deg u <= 2` and `0 <= n <= 2 - deg u`. Reduced
//! representatives are unique, so structural equality is group equality.

use rand::Rng;

use crate::curve::CurveFp;
use crate::error::{Error, Result};
use crate::field::{Fp, Fp2, PrimeModulus};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    /// Degree 5, one point at infinity.
    Imaginary,
    /// Degree 6 with two rational points at infinity.
    Real,
}

/// A reduced divisor class. `n` is always 0 in the imaginary model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JacElement {
    pub u: Poly,
    pub v: Poly,
    pub n: u8,
}

/// Group context for one curve. Holds the working model; RNGs are passed
/// per call so a context can be shared read-only.
#[derive(Clone, Debug)]
pub struct Jacobian {
    model: Model,
    f: Poly,
    // real model only: the monic cubic with deg(f - V^2) <= 2, and that degree
    big_v: Poly,
    e: i64,
}

impl Jacobian {
    /// Errors with `ModelUnavailable` for a sextic with non-square leading
    /// coefficient and no affine point with y != 0 (only possible for p <= 13).
    pub fn new(curve: &CurveFp) -> Result<Self> {
        let f = curve.f().clone();
        let m = f.modulus();
        if curve.degree() == 5 {
            return Ok(Jacobian { model: Model::Imaginary, f, big_v: Poly::zero(m), e: 0 });
        }
        let f = if f.lc().is_square() {
            f
        } else {
            // x -> x0 + 1/x moves f(x0) into the leading coefficient
            let x0 = m
                .elements()
                .find(|&x| {
                    let y2 = f.eval(x);
                    !y2.is_zero() && y2.is_square()
                })
                .ok_or(Error::ModelUnavailable)?;
            f.shift(x0).reverse(6)
        };
        // y -> y * sqrt(lc) makes f monic
        let f = f.monic();
        let c = f.coeffs();
        let half = m.elem(2).inv()?;
        let b2 = c[5] * half;
        let b1 = (c[4] - b2 * b2) * half;
        let b0 = (c[3] - b1 * b2.double()) * half;
        let big_v = Poly::new(m, vec![b0, b1, b2, m.one()]);
        let e = (&f - &(&big_v * &big_v)).deg();
        debug_assert!((0..=2).contains(&e));
        Ok(Jacobian { model: Model::Real, f, big_v, e })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// The polynomial of the working model.
    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.f.modulus()
    }

    pub fn identity(&self) -> JacElement {
        let m = self.modulus();
        let n = match self.model {
            Model::Imaginary => 0,
            Model::Real => 1,
        };
        JacElement { u: Poly::one(m), v: Poly::zero(m), n }
    }

    pub fn is_identity(&self, a: &JacElement) -> bool {
        *a == self.identity()
    }

    /// Embed an affine Mumford pair; the real model gets the balanced counter.
    pub fn from_mumford(&self, u: Poly, v: Poly) -> Result<JacElement> {
        let n = match self.model {
            Model::Imaginary => 0,
            Model::Real => (2 - u.deg() as u8).div_ceil(2),
        };
        let el = JacElement { u, v, n };
        if !self.is_valid(&el) {
            return Err(Error::Internal(format!("not a reduced class: {el:?}")));
        }
        Ok(el)
    }

    pub fn is_valid(&self, a: &JacElement) -> bool {
        let du = a.u.deg();
        if !(0..=2).contains(&du) || !a.u.is_monic() || a.v.deg() >= du {
            return false;
        }
        let n_ok = match self.model {
            Model::Imaginary => a.n == 0,
            Model::Real => (a.n as i64) <= 2 - du,
        };
        n_ok && (&(&a.v * &a.v) - &self.f).rem(&a.u).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn neg(&self, a: &JacElement) -> JacElement {
        let v = rem(&-&a.v, &a.u);
        let n = match self.model {
            Model::Imaginary => 0,
            Model::Real => 2 - a.u.deg() as u8 - a.n,
        };
        JacElement { u: a.u.clone(), v, n }
    }

    pub fn add(&self, a: &JacElement, b: &JacElement) -> JacElement {
        let (u, v, deg_d) = self.compose(a, b);
        match self.model {
            Model::Imaginary => self.reduce_imaginary(u, v),
            Model::Real => {
                let n = a.n as i64 + b.n as i64 + deg_d - 1;
                self.reduce_real(u, v, n)
            }
        }
    }

    pub fn double(&self, a: &JacElement) -> JacElement {
        self.add(a, a)
    }

    /// k * a by left-to-right double-and-add.
    pub fn scalar_mul(&self, k: u128, a: &JacElement) -> JacElement {
        let mut acc = self.identity();
        if k == 0 {
            return acc;
        }
        for i in (0..128 - k.leading_zeros()).rev() {
            acc = self.double(&acc);
            if (k >> i) & 1 == 1 {
                acc = self.add(&acc, a);
            }
        }
        acc
    }

    // Cantor composition of the affine parts; returns (u, v mod u, deg d).
    fn compose(&self, a: &JacElement, b: &JacElement) -> (Poly, Poly, i64) {
        let (d1, e1, e2) = a.u.xgcd(&b.u);
        let (d, c1, c2) = d1.xgcd(&(&a.v + &b.v));
        let u = (&a.u * &b.u).div_exact(&(&d * &d)).expect("d^2 divides u1 u2");
        let num = &(&(&(&c1 * &e1) * &a.u) * &b.v) + &(&(&(&c1 * &e2) * &b.u) * &a.v);
        let num = &num + &(&c2 * &(&(&a.v * &b.v) + &self.f));
        let v = rem(&num.div_exact(&d).expect("d divides the composed v"), &u);
        (u, v, d.deg())
    }

    fn reduce_imaginary(&self, mut u: Poly, mut v: Poly) -> JacElement {
        while u.deg() > 2 {
            let u2 = (&self.f - &(&v * &v)).div_exact(&u).expect("u divides f - v^2").monic();
            v = rem(&-&v, &u2);
            u = u2;
        }
        JacElement { u, v, n: 0 }
    }

    fn reduce_real(&self, mut u: Poly, mut v: Poly, mut n: i64) -> JacElement {
        while u.deg() > 2 {
            let m = 2 - u.deg() - n;
            (u, v, n) = self.real_step(&u, &v, n, n >= m);
        }
        loop {
            let m = 2 - u.deg() - n;
            if n < 0 {
                (u, v, n) = self.real_step(&u, &v, n, false);
            } else if m < 0 {
                (u, v, n) = self.real_step(&u, &v, n, true);
            } else {
                break;
            }
        }
        JacElement { u, v, n: n as u8 }
    }

    // One step along y - w with w = +-V + r, w = v mod u. The positive
    // step moves weight from inf+ to the affine part, the negative one from
    // inf-.
    fn real_step(&self, u: &Poly, v: &Poly, n: i64, positive: bool) -> (Poly, Poly, i64) {
        let bv = &self.big_v;
        let w = if positive { bv + &rem(&(v - bv), u) } else { &rem(&(v + bv), u) - bv };
        let u2 = (&self.f - &(&w * &w)).div_exact(u).expect("u divides f - w^2");
        let diff = &w - bv;
        let a = if diff.is_zero() { self.e - 3 } else { diff.deg() };
        let n2 = n + a - u2.deg();
        let u2 = u2.monic();
        let v2 = rem(&-&w, &u2);
        (u2, v2, n2)
    }

    /// A random class with nontrivial affine part: draw u uniformly among the
    /// p + p^2 monic polynomials of degree 1 or 2 until f is a square mod u.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> JacElement {
        self.random_point_counted(rng).0
    }

    /// Like `random_point`, also returning the number of rejected draws.
    pub fn random_point_counted<R: Rng + ?Sized>(&self, rng: &mut R) -> (JacElement, u32) {
        let mut redraws = 0;
        loop {
            if let Some((u, v)) = self.try_sample(rng) {
                let el = self.from_mumford(u, v).expect("sampler output is reduced");
                return (el, redraws);
            }
            redraws += 1;
        }
    }

    fn try_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<(Poly, Poly)> {
        let m = self.modulus();
        let p = m.p() as u128;
        let f = &self.f;
        let k = rng.gen_range(0..p + p * p);
        let mut signed = |y: Fp| if rng.gen::<bool>() { y } else { -y };
        if k < p {
            let a = m.elem(k as u64);
            let y = f.eval(a).sqrt().ok()?;
            return Some((Poly::linear(a), Poly::constant(signed(y))));
        }
        let k = k - p;
        let (b, c) = (m.elem((k / p) as u64), m.elem((k % p) as u64));
        let u = Poly::new(m, vec![c, b, m.one()]);
        let half = m.elem(2).inv().ok()?;
        let disc = b * b - c.double().double();
        if disc.is_zero() {
            // u = (x - a)^2: lift a root of y^2 = f(a) to a root mod u
            let a = -b * half;
            let fa = f.eval(a);
            if fa.is_zero() {
                return None;
            }
            let v0 = signed(fa.sqrt().ok()?);
            let v1 = f.derivative().eval(a).div(v0.double()).ok()?;
            return Some((u, Poly::new(m, vec![v0 - v1 * a, v1])));
        }
        if disc.is_square() {
            let t = disc.sqrt().ok()?;
            let (r1, r2) = ((-b + t) * half, (-b - t) * half);
            let y1 = signed(f.eval(r1).sqrt().ok()?);
            let y2 = signed(f.eval(r2).sqrt().ok()?);
            let slope = (y2 - y1).div(r2 - r1).ok()?;
            return Some((u, Poly::new(m, vec![y1 - slope * r1, slope])));
        }
        // irreducible u: root alpha in F_{p^2} = F_p(z), z^2 = s, disc = s t^2
        let t = disc.div(m.nonresidue()).ok()?.sqrt().ok()?;
        let alpha = Fp2::new(-b * half, t * half);
        let beta = f.eval_fp2(alpha).sqrt().ok()?;
        let beta = if rng.gen::<bool>() { beta } else { -beta };
        let v1 = beta.c1.div(alpha.c1).ok()?;
        let v0 = beta.c0 - v1 * alpha.c0;
        Some((u, Poly::new(m, vec![v0, v1])))
    }
}

fn rem(a: &Poly, u: &Poly) -> Poly {
    a.rem(u).expect("monic modulus")
}

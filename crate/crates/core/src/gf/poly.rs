use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{FieldCtx, Fq, GfError};

/// Univariate polynomial over a finite field, coefficients lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ctx: &'static FieldCtx,
    c: Vec<Fq>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.c)
    }
}

impl Poly {
    pub fn new(ctx: &'static FieldCtx, c: Vec<Fq>) -> Poly {
        for x in &c {
            assert!(std::ptr::eq(x.ctx(), ctx), "field context mismatch");
        }
        let mut p = Poly { ctx, c };
        p.trim();
        p
    }

    pub fn from_i64s(ctx: &'static FieldCtx, c: &[i64]) -> Poly {
        Poly::new(ctx, c.iter().map(|&x| ctx.from_i64(x)).collect())
    }

    pub fn zero(ctx: &'static FieldCtx) -> Poly {
        Poly { ctx, c: Vec::new() }
    }

    pub fn one(ctx: &'static FieldCtx) -> Poly {
        Poly::constant(ctx.one())
    }

    pub fn constant(c: Fq) -> Poly {
        Poly::new(c.ctx(), vec![c])
    }

    /// The variable.
    pub fn x(ctx: &'static FieldCtx) -> Poly {
        Poly::new(ctx, vec![ctx.zero(), ctx.one()])
    }

    /// `x − a`.
    pub fn linear(a: Fq) -> Poly {
        Poly::new(a.ctx(), vec![-a, a.one_like()])
    }

    /// `c·x^n`.
    pub fn monomial(c: Fq, n: usize) -> Poly {
        let mut v = vec![c.zero_like(); n + 1];
        v[n] = c;
        Poly::new(c.ctx(), v)
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
    }

    pub fn ctx(&self) -> &'static FieldCtx {
        self.ctx
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.c.get(i).copied().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `deg 0 = −1`.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lead(&self) -> Fq {
        self.c.last().copied().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().inv().expect("nonzero lead");
        self.scale(&l)
    }

    pub fn scale(&self, a: &Fq) -> Poly {
        Poly::new(self.ctx, self.c.iter().map(|x| *x * *a).collect())
    }

    pub fn eval(&self, x: &Fq) -> Fq {
        self.c.iter().rev().fold(self.ctx.zero(), |acc, c| acc * *x + *c)
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero(self.ctx);
        }
        let v = self.c.iter().enumerate().skip(1).map(|(i, c)| c.scale_int(i as i64)).collect();
        Poly::new(self.ctx, v)
    }

    /// Lowest index with a nonzero coefficient (the multiplicity of 0 as a root).
    pub fn low_order(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    /// Division by `x^k`, dropping the low coefficients.
    pub fn shift_down(&self, k: usize) -> Poly {
        Poly::new(self.ctx, self.c.iter().skip(k).copied().collect())
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![self.ctx.zero(); k];
        v.extend_from_slice(&self.c);
        Poly::new(self.ctx, v)
    }

    /// `x^n·f(1/x)`; requires `n ≥ deg f`.
    pub fn reversed(&self, n: usize) -> Poly {
        assert!(self.deg() <= n as i64, "reversal length below degree");
        let mut v = vec![self.ctx.zero(); n + 1];
        for (i, c) in self.c.iter().enumerate() {
            v[n - i] = *c;
        }
        Poly::new(self.ctx, v)
    }

    /// `f(x + a)`.
    pub fn taylor_shift(&self, a: &Fq) -> Poly {
        let lin = Poly::new(self.ctx, vec![*a, self.ctx.one()]);
        let mut acc = Poly::zero(self.ctx);
        for c in self.c.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(*c);
        }
        acc
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut r = Poly::one(self.ctx);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        r
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly), GfError> {
        if d.is_zero() {
            return Err(GfError::ZeroPolynomial);
        }
        if !std::ptr::eq(self.ctx, d.ctx) {
            return Err(GfError::CtxMismatch);
        }
        if self.c.len() < d.c.len() {
            return Ok((Poly::zero(self.ctx), self.clone()));
        }
        let li = d.lead().inv()?;
        let mut r = self.c.clone();
        let dn = d.c.len() - 1;
        let mut q = vec![self.ctx.zero(); r.len() - dn];
        for k in (dn..r.len()).rev() {
            let coef = r[k] * li;
            if coef.is_zero() {
                continue;
            }
            q[k - dn] = coef;
            for (j, dj) in d.c.iter().enumerate() {
                r[k - dn + j] -= coef * *dj;
            }
        }
        r.truncate(dn);
        Ok((Poly::new(self.ctx, q), Poly::new(self.ctx, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly, GfError> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly, GfError> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(q)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g` and `g` monic.
    pub fn xgcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let ctx = self.ctx;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(ctx), Poly::zero(ctx));
        let (mut t0, mut t1) = (Poly::zero(ctx), Poly::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            r0 = r1;
            r1 = r;
            let s2 = &s0 - &(&q * &s1);
            s0 = s1;
            s1 = s2;
            let t2 = &t0 - &(&q * &t1);
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = r0.lead().inv().expect("nonzero lead");
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    pub fn mul_mod(&self, o: &Poly, m: &Poly) -> Poly {
        (self * o).rem(m).expect("nonzero modulus")
    }

    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut r = Poly::one(self.ctx).rem(m).expect("nonzero modulus");
        let mut b = self.rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_mod(&b, m);
            }
            b = b.mul_mod(&b, m);
            e >>= 1;
        }
        r
    }

    /// Applies `f` to every coefficient, producing a polynomial over `ctx`.
    pub fn map(&self, ctx: &'static FieldCtx, f: impl Fn(&Fq) -> Fq) -> Poly {
        Poly::new(ctx, self.c.iter().map(f).collect())
    }

    /// Sort key: degree, then coefficients from the top.
    pub fn sort_key(&self) -> (usize, Vec<u64>) {
        (self.c.len(), self.c.iter().rev().map(|x| x.key()).collect())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        assert!(std::ptr::eq(self.ctx, o.ctx), "field context mismatch");
        let n = self.c.len().max(o.c.len());
        let v = (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect();
        Poly::new(self.ctx, v)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        assert!(std::ptr::eq(self.ctx, o.ctx), "field context mismatch");
        let n = self.c.len().max(o.c.len());
        let v = (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect();
        Poly::new(self.ctx, v)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        assert!(std::ptr::eq(self.ctx, o.ctx), "field context mismatch");
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.ctx);
        }
        let mut v = vec![self.ctx.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                v[i + j] += *a * *b;
            }
        }
        Poly::new(self.ctx, v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.ctx, self.c.iter().map(|x| -*x).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let k = FieldCtx::prime(7).unwrap();
        let a = Poly::from_i64s(k, &[3, 1, 4, 1, 5]);
        let b = Poly::from_i64s(k, &[2, 0, 3]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn xgcd_bezout() {
        let k = FieldCtx::prime(5).unwrap();
        let a = Poly::from_i64s(k, &[1, 2, 0, 1]);
        let b = Poly::from_i64s(k, &[4, 1, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
        assert_eq!(g, a.gcd(&b));
    }

    #[test]
    fn shift_and_reverse() {
        let k = FieldCtx::prime(11).unwrap();
        let f = Poly::from_i64s(k, &[1, 2, 3]);
        let a = k.from_u64(4);
        let g = f.taylor_shift(&a);
        for x in k.elements() {
            assert_eq!(g.eval(&x), f.eval(&(x + a)));
        }
        assert_eq!(f.reversed(3), Poly::from_i64s(k, &[0, 3, 2, 1]));
    }
}

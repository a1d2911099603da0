//! Truncated polynomial rings `R_m = R[t]/(t^m)` with the truncated exponential,
//! the branch logarithm `log°`, the coefficient functionals `ℓ_i` and the
//! canonical unit decomposition `u = a₀·ē^{Σ α_i t^i}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::gf::{FieldCtx, Fq};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruncError {
    #[error("truncated element needs at least one coefficient")]
    Empty,
    #[error("moduli differ: t^{left} vs t^{right}")]
    ModulusMismatch { left: usize, right: usize },
    #[error("constant term is not a unit")]
    NonUnitConstantTerm,
    #[error("constant term is not zero")]
    NonzeroConstantTerm,
    #[error("index {index} out of range for modulus t^{m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("modulus t^{m} exceeds t^p with p = {p}")]
    ModulusTooLarge { m: usize, p: u64 },
    #[error("cannot reduce from t^{from} to t^{to}")]
    BadReduction { from: usize, to: usize },
}

/// A commutative ring of characteristic p that can serve as coefficients of [`Trunc`].
pub trait CoeffRing: Clone + PartialEq + fmt::Debug {
    /// The prime-power field the ring is an algebra over.
    fn field(&self) -> &'static FieldCtx;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, c: &Fq) -> Self;
    /// Multiplicative inverse, `None` for non-units.
    fn inv(&self) -> Option<Self>;

    fn from_scalar(&self, c: &Fq) -> Self {
        self.one_like().scale(c)
    }

    fn scale_int(&self, n: i64) -> Self {
        self.scale(&self.field().from_i64(n))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut r = self.one_like();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }
}

/// A coefficient ring with a derivation `d/ds`.
pub trait Derivation: CoeffRing {
    fn derive(&self) -> Self;
}

impl CoeffRing for Fq {
    fn field(&self) -> &'static FieldCtx {
        self.ctx()
    }
    fn zero_like(&self) -> Self {
        self.ctx().zero()
    }
    fn one_like(&self) -> Self {
        self.ctx().one()
    }
    fn is_zero(&self) -> bool {
        Fq::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn scale(&self, c: &Fq) -> Self {
        *self * *c
    }
    fn inv(&self) -> Option<Self> {
        Fq::inv(self).ok()
    }
}

/// Constants have zero derivative.
impl Derivation for Fq {
    fn derive(&self) -> Self {
        self.ctx().zero()
    }
}

/// An element `a₀ + a₁t + … + a_{m−1}t^{m−1}` of `R[t]/(t^m)`.
#[derive(Clone, PartialEq)]
pub struct Trunc<R> {
    c: Vec<R>,
}

impl<R: fmt::Debug> fmt::Debug for Trunc<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Trunc{:?}", self.c)
    }
}

impl<R: fmt::Display> fmt::Display for Trunc<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}] mod t^{}", parts.join(", "), self.c.len())
    }
}

/// `a₀` together with `α_i = ℓ_i(u)`, so that `u = a₀·ē^{Σ α_i t^i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitDecomp<R> {
    pub a0: R,
    pub exps: Vec<R>,
}

impl<R: CoeffRing> UnitDecomp<R> {
    pub fn recompose(&self) -> Result<Trunc<R>, TruncError> {
        let mut e = vec![self.a0.zero_like()];
        e.extend(self.exps.iter().cloned());
        let ex = Trunc::new(e)?.exp()?;
        Ok(ex.mul_scalar(&self.a0))
    }

    pub fn modulus(&self) -> usize {
        self.exps.len() + 1
    }

    /// `ℓ_i`, for `1 ≤ i < m`.
    pub fn ell(&self, i: usize) -> &R {
        &self.exps[i - 1]
    }
}

impl<R: CoeffRing> Trunc<R> {
    pub fn new(c: Vec<R>) -> Result<Trunc<R>, TruncError> {
        if c.is_empty() {
            return Err(TruncError::Empty);
        }
        Ok(Trunc { c })
    }

    /// The constant `a` in `R_m`.
    pub fn constant(a: R, m: usize) -> Trunc<R> {
        assert!(m >= 1, "modulus must be at least 1");
        let z = a.zero_like();
        let mut c = vec![z; m];
        c[0] = a;
        Trunc { c }
    }

    /// `a·t^k` in `R_m` (zero if `k ≥ m`).
    pub fn monomial(a: R, k: usize, m: usize) -> Trunc<R> {
        let mut c = vec![a.zero_like(); m];
        if k < m {
            c[k] = a;
        }
        Trunc { c }
    }

    /// `ē^{α t^a}` in `R_m`.
    pub fn exp_monomial(alpha: R, a: usize, m: usize) -> Result<Trunc<R>, TruncError> {
        if a == 0 {
            return Err(TruncError::NonzeroConstantTerm);
        }
        Trunc::monomial(alpha, a, m).exp()
    }

    pub fn modulus(&self) -> usize {
        self.c.len()
    }

    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> &R {
        &self.c[i]
    }

    pub fn get(&self, i: usize) -> Result<&R, TruncError> {
        self.c.get(i).ok_or(TruncError::IndexOutOfRange { index: i, m: self.c.len() })
    }

    pub fn set(&mut self, i: usize, x: R) {
        self.c[i] = x;
    }

    pub fn constant_term(&self) -> &R {
        &self.c[0]
    }

    pub fn zero_like(&self) -> Trunc<R> {
        Trunc::constant(self.c[0].zero_like(), self.c.len())
    }

    pub fn one_like(&self) -> Trunc<R> {
        Trunc::constant(self.c[0].one_like(), self.c.len())
    }

    /// The element `t` of the same ring.
    pub fn t_like(&self) -> Trunc<R> {
        Trunc::monomial(self.c[0].one_like(), 1, self.c.len())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        self.c[0].inv().is_some()
    }

    fn same_m(&self, o: &Trunc<R>) -> Result<(), TruncError> {
        if self.c.len() == o.c.len() {
            Ok(())
        } else {
            Err(TruncError::ModulusMismatch { left: self.c.len(), right: o.c.len() })
        }
    }

    pub fn try_add(&self, o: &Trunc<R>) -> Result<Trunc<R>, TruncError> {
        self.same_m(o)?;
        Ok(Trunc { c: self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect() })
    }

    pub fn try_sub(&self, o: &Trunc<R>) -> Result<Trunc<R>, TruncError> {
        self.same_m(o)?;
        Ok(Trunc { c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub(b)).collect() })
    }

    pub fn try_mul(&self, o: &Trunc<R>) -> Result<Trunc<R>, TruncError> {
        self.same_m(o)?;
        let m = self.c.len();
        let mut c = vec![self.c[0].zero_like(); m];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().take(m - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Ok(Trunc { c })
    }

    pub fn neg(&self) -> Trunc<R> {
        Trunc { c: self.c.iter().map(|a| a.neg()).collect() }
    }

    pub fn scale(&self, k: &Fq) -> Trunc<R> {
        Trunc { c: self.c.iter().map(|a| a.scale(k)).collect() }
    }

    pub fn scale_int(&self, n: i64) -> Trunc<R> {
        Trunc { c: self.c.iter().map(|a| a.scale_int(n)).collect() }
    }

    pub fn mul_scalar(&self, r: &R) -> Trunc<R> {
        Trunc { c: self.c.iter().map(|a| a.mul(r)).collect() }
    }

    /// Multiplicative inverse; needs a unit constant term.
    pub fn inv(&self) -> Result<Trunc<R>, TruncError> {
        let a0i = self.c[0].inv().ok_or(TruncError::NonUnitConstantTerm)?;
        let m = self.c.len();
        let mut b: Vec<R> = Vec::with_capacity(m);
        b.push(a0i.clone());
        for n in 1..m {
            let mut s = self.c[0].zero_like();
            for i in 1..=n {
                if !self.c[i].is_zero() {
                    s = s.add(&self.c[i].mul(&b[n - i]));
                }
            }
            b.push(s.mul(&a0i).neg());
        }
        Ok(Trunc { c: b })
    }

    pub fn try_div(&self, o: &Trunc<R>) -> Result<Trunc<R>, TruncError> {
        self.try_mul(&o.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Trunc<R> {
        let mut r = self.one_like();
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

    /// Integer power; negative exponents need a unit.
    pub fn powi(&self, e: i64) -> Result<Trunc<R>, TruncError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Image in `R_{m'}` for `m' ≤ m`.
    pub fn reduce_to(&self, m: usize) -> Result<Trunc<R>, TruncError> {
        if m == 0 || m > self.c.len() {
            return Err(TruncError::BadReduction { from: self.c.len(), to: m });
        }
        Ok(Trunc { c: self.c[..m].to_vec() })
    }

    /// The lift to `R_{m'}` (`m' ≥ m`) whose new coefficients are `fill`.
    pub fn extend_with(&self, fill: &[R]) -> Trunc<R> {
        let mut c = self.c.clone();
        c.extend(fill.iter().cloned());
        Trunc { c }
    }

    /// The lift to `R_{m'}` with zero higher coefficients; reduces if `m' < m`.
    pub fn resized(&self, m: usize) -> Trunc<R> {
        let mut c: Vec<R> = self.c.iter().take(m).cloned().collect();
        while c.len() < m {
            c.push(self.c[0].zero_like());
        }
        Trunc { c }
    }

    /// Substitution `t ↦ λt`.
    pub fn scale_t(&self, lambda: &Fq) -> Trunc<R> {
        let mut pw = lambda.one_like();
        let mut c = Vec::with_capacity(self.c.len());
        for a in &self.c {
            c.push(a.scale(&pw));
            pw *= *lambda;
        }
        Trunc { c }
    }

    /// Multiplication by `t^k`.
    pub fn shift_t(&self, k: usize) -> Trunc<R> {
        let m = self.c.len();
        let mut c = vec![self.c[0].zero_like(); m];
        for i in 0..m.saturating_sub(k) {
            c[i + k] = self.c[i].clone();
        }
        Trunc { c }
    }

    pub fn map<S: CoeffRing>(&self, f: impl Fn(&R) -> S) -> Trunc<S> {
        Trunc { c: self.c.iter().map(f).collect() }
    }

    pub fn try_map<S: CoeffRing, E>(&self, f: impl Fn(&R) -> Result<S, E>) -> Result<Trunc<S>, E> {
        Ok(Trunc { c: self.c.iter().map(f).collect::<Result<_, _>>()? })
    }

    fn check_log_range(&self) -> Result<(), TruncError> {
        let p = self.c[0].field().p();
        if self.c.len() as u64 > p {
            return Err(TruncError::ModulusTooLarge { m: self.c.len(), p });
        }
        Ok(())
    }

    /// `ē^α = Σ_{n<p} αⁿ/n!` for `α ∈ (t)`.
    pub fn exp(&self) -> Result<Trunc<R>, TruncError> {
        if !self.c[0].is_zero() {
            return Err(TruncError::NonzeroConstantTerm);
        }
        self.check_log_range()?;
        let k = self.c[0].field();
        let mut acc = self.one_like();
        let mut pw = self.one_like();
        for n in 1..self.c.len() {
            pw = &pw * self;
            acc = &acc + &pw.scale(&k.inv_factorial(n));
        }
        Ok(acc)
    }

    /// `log°(u) = log(u/u(0))` with the series truncated below `p`.
    pub fn log_circ(&self) -> Result<Trunc<R>, TruncError> {
        self.check_log_range()?;
        let a0i = self.c[0].inv().ok_or(TruncError::NonUnitConstantTerm)?;
        let mut z = self.mul_scalar(&a0i);
        z.c[0] = z.c[0].zero_like();
        let k = self.c[0].field();
        let mut acc = self.zero_like();
        let mut pw = self.one_like();
        for n in 1..self.c.len() {
            pw = &pw * &z;
            let coef = k.from_u64(n as u64).inv().expect("n < p");
            let term = pw.scale(&coef);
            acc = if n % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        Ok(acc)
    }

    /// `ℓ_i(u)`, the i-th coefficient of `log°(u)`.
    pub fn ell(&self, i: usize) -> Result<R, TruncError> {
        if i == 0 || i >= self.c.len() {
            return Err(TruncError::IndexOutOfRange { index: i, m: self.c.len() });
        }
        Ok(self.log_circ()?.c[i].clone())
    }

    pub fn unit_decompose(&self) -> Result<UnitDecomp<R>, TruncError> {
        let l = self.log_circ()?;
        Ok(UnitDecomp { a0: self.c[0].clone(), exps: l.c[1..].to_vec() })
    }
}

impl<R: Derivation> Trunc<R> {
    /// Coefficientwise `d/ds`.
    pub fn derive(&self) -> Trunc<R> {
        Trunc { c: self.c.iter().map(|a| a.derive()).collect() }
    }
}

impl<R: CoeffRing> Add for &Trunc<R> {
    type Output = Trunc<R>;
    fn add(self, o: &Trunc<R>) -> Trunc<R> {
        self.try_add(o).expect("truncation moduli differ")
    }
}
impl<R: CoeffRing> Sub for &Trunc<R> {
    type Output = Trunc<R>;
    fn sub(self, o: &Trunc<R>) -> Trunc<R> {
        self.try_sub(o).expect("truncation moduli differ")
    }
}
impl<R: CoeffRing> Mul for &Trunc<R> {
    type Output = Trunc<R>;
    fn mul(self, o: &Trunc<R>) -> Trunc<R> {
        self.try_mul(o).expect("truncation moduli differ")
    }
}
impl<R: CoeffRing> Neg for &Trunc<R> {
    type Output = Trunc<R>;
    fn neg(self) -> Trunc<R> {
        Trunc::neg(self)
    }
}

impl Trunc<Fq> {
    /// Convenience constructor from integer coefficients.
    pub fn from_i64s(k: &'static FieldCtx, c: &[i64]) -> Trunc<Fq> {
        Trunc::new(c.iter().map(|&x| k.from_i64(x)).collect()).expect("nonempty")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> &'static FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn ring_examples() {
        let k = f(5);
        let a = Trunc::from_i64s(k, &[1, 1]);
        let b = Trunc::from_i64s(k, &[1, -1]);
        assert_eq!(&a * &b, Trunc::from_i64s(k, &[1, 0]));
        let c = Trunc::from_i64s(k, &[1, 1, 0]);
        assert_eq!(c.inv().unwrap(), Trunc::from_i64s(k, &[1, -1, 1]));
        let d = Trunc::from_i64s(k, &[2, 3, 4]);
        assert_eq!(d.reduce_to(2).unwrap(), Trunc::from_i64s(k, &[2, 3]));
        assert_eq!(Trunc::from_i64s(k, &[0, 1]).inv(), Err(TruncError::NonUnitConstantTerm));
    }

    #[test]
    fn exp_of_t() {
        let k = f(5);
        let t = Trunc::from_i64s(k, &[0, 1, 0, 0, 0]);
        let e = t.exp().unwrap();
        let expect: Vec<Fq> = (0..5).map(|n| k.inv_factorial(n)).collect();
        assert_eq!(e.coeffs(), &expect[..]);
        assert_eq!(Trunc::from_i64s(k, &[1, 1]).exp(), Err(TruncError::NonzeroConstantTerm));
        assert_eq!(t.zero_like().exp().unwrap(), t.one_like());
    }

    #[test]
    fn log_examples() {
        let k = f(7);
        let c = Trunc::from_i64s(k, &[3, 0, 0]);
        assert!(c.log_circ().unwrap().is_zero());
        let u = Trunc::from_i64s(k, &[1, 1, 0]);
        let half = k.from_u64(2).inv().unwrap();
        assert_eq!(u.log_circ().unwrap().coeffs(), &[k.zero(), k.one(), -half]);
        assert_eq!(u.ell(1).unwrap(), k.one());
        assert_eq!(u.ell(2).unwrap(), -half);
        assert_eq!(u.ell(3), Err(TruncError::IndexOutOfRange { index: 3, m: 3 }));
        let big = Trunc::constant(k.one(), 8);
        assert_eq!(big.log_circ(), Err(TruncError::ModulusTooLarge { m: 8, p: 7 }));
    }

    #[test]
    fn ell_top_coefficient() {
        for p in [5u64, 7, 11] {
            let k = f(p);
            let m = p as usize;
            let mut u = Trunc::constant(k.one(), m);
            u.set(m - 1, k.one());
            assert_eq!(u.ell(m - 1).unwrap(), k.one());
        }
    }

    #[test]
    fn decompose_constant_and_monomial() {
        let k = f(7);
        let c = Trunc::constant(k.from_u64(4), 7);
        let d = c.unit_decompose().unwrap();
        assert_eq!(d.a0, k.from_u64(4));
        assert!(d.exps.iter().all(|x| x.is_zero()));
        let beta = k.from_u64(5);
        let u = Trunc::exp_monomial(beta, 2, 7).unwrap().mul_scalar(&k.from_u64(3));
        let d = u.unit_decompose().unwrap();
        assert_eq!(d.a0, k.from_u64(3));
        let mut expect = vec![k.zero(); 6];
        expect[1] = beta;
        assert_eq!(d.exps, expect);
        assert_eq!(d.recompose().unwrap(), u);
    }
}

//! Finite fields `F_p` (p ≥ 5) and their extensions `F_p[u]/(m(u))` of degree at most 4.
//!
//! Field contexts are interned: two contexts built from the same prime and
//! modulus are the same `&'static FieldCtx`, so elements stay `Copy` and
//! context comparison is a pointer comparison.

mod embed;
mod factor;
mod poly;

pub use embed::{Embedding, ResidueField};
pub use factor::{
    distinct_degree, equal_degree, factor, factor_with_seed, is_irreducible, roots, squarefree,
    Factorization,
};
pub use poly::Poly;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use rand::Rng;
use thiserror::Error;

/// Largest supported total extension degree over the prime field.
pub const MAX_DEGREE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not a prime >= 5")]
    BadPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    CtxMismatch,
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("extension degree {0} exceeds the supported maximum of {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("element does not lie in the subfield")]
    NotInSubfield,
}

/// Context of a finite field `F_p[u]/(m(u))`. A prime field uses the modulus `u`.
pub struct FieldCtx {
    p: u32,
    modulus: Vec<u32>,
    degree: usize,
    order: u64,
    inv: Vec<u32>,
    prime: OnceLock<&'static FieldCtx>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}[u]/{:?}", self.p, self.modulus)
        }
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
    }
}
impl Eq for FieldCtx {}

impl Hash for FieldCtx {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self as *const FieldCtx as usize).hash(state);
    }
}

fn registry() -> &'static Mutex<Vec<&'static FieldCtx>> {
    static REG: OnceLock<Mutex<Vec<&'static FieldCtx>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(Vec::new()))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn intern(p: u32, modulus: Vec<u32>) -> &'static FieldCtx {
    let mut reg = registry().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(c) = reg.iter().find(|c| c.p == p && c.modulus == modulus) {
        return c;
    }
    let degree = modulus.len() - 1;
    let mut inv = vec![0u32; p as usize];
    for a in 1..p {
        inv[a as usize] = pow_mod(a as u64, (p - 2) as u64, p as u64) as u32;
    }
    let ctx: &'static FieldCtx = Box::leak(Box::new(FieldCtx {
        p,
        modulus,
        degree,
        order: (p as u64).pow(degree as u32),
        inv,
        prime: OnceLock::new(),
    }));
    reg.push(ctx);
    ctx
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl FieldCtx {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<&'static FieldCtx, GfError> {
        if p < 5 || p > u16::MAX as u64 || !is_prime(p) {
            return Err(GfError::BadPrime(p));
        }
        let ctx = intern(p as u32, vec![0, 1]);
        let _ = ctx.prime.set(ctx);
        Ok(ctx)
    }

    /// `F_p[u]/(m)` for a monic irreducible `m` given by its coefficients, lowest first.
    pub fn extension(p: u64, modulus: &[i64]) -> Result<&'static FieldCtx, GfError> {
        let fp = Self::prime(p)?;
        let mut m: Vec<u32> = modulus.iter().map(|&c| c.rem_euclid(p as i64) as u32).collect();
        while m.last() == Some(&0) {
            m.pop();
        }
        if m.len() < 2 {
            return Err(GfError::BadModulus("degree must be at least 1".into()));
        }
        if m.len() - 1 > MAX_DEGREE {
            return Err(GfError::DegreeTooLarge(m.len() - 1));
        }
        if *m.last().unwrap() != 1 {
            return Err(GfError::BadModulus("modulus must be monic".into()));
        }
        if m.len() == 2 {
            return Ok(fp);
        }
        let poly = Poly::new(fp, m.iter().map(|&c| fp.from_u64(c as u64)).collect());
        if !is_irreducible(&poly) {
            return Err(GfError::BadModulus(format!("{m:?} is reducible over F_{p}")));
        }
        let ctx = intern(p as u32, m);
        let _ = ctx.prime.set(fp);
        Ok(ctx)
    }

    /// The extension of degree `d` given by the lexicographically first monic irreducible.
    pub fn standard(p: u64, d: usize) -> Result<&'static FieldCtx, GfError> {
        let fp = Self::prime(p)?;
        if d == 1 {
            return Ok(fp);
        }
        if d == 0 || d > MAX_DEGREE {
            return Err(GfError::DegreeTooLarge(d));
        }
        let total = p.pow(d as u32);
        for idx in 0..total {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                coeffs.push((x % p) as i64);
                x /= p;
            }
            coeffs.push(1);
            if coeffs[0] == 0 {
                continue;
            }
            if let Ok(ctx) = Self::extension(p, &coeffs) {
                return Ok(ctx);
            }
        }
        unreachable!("irreducible polynomials of every degree exist")
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.degree == 1
    }

    pub fn prime_field(&'static self) -> &'static FieldCtx {
        self.prime.get().copied().unwrap_or(self)
    }

    pub fn zero(&'static self) -> Fq {
        Fq { ctx: self, v: [0; MAX_DEGREE] }
    }

    pub fn one(&'static self) -> Fq {
        self.from_u64(1)
    }

    pub fn from_u64(&'static self, n: u64) -> Fq {
        let mut v = [0; MAX_DEGREE];
        v[0] = (n % self.p as u64) as u32;
        Fq { ctx: self, v }
    }

    pub fn from_i64(&'static self, n: i64) -> Fq {
        let mut v = [0; MAX_DEGREE];
        v[0] = n.rem_euclid(self.p as i64) as u32;
        Fq { ctx: self, v }
    }

    /// Element with the given coefficients in the power basis `1, u, u², …`.
    pub fn from_coeffs(&'static self, c: &[i64]) -> Result<Fq, GfError> {
        if c.len() > self.degree {
            return Err(GfError::BadModulus(format!(
                "{} coefficients given for a degree-{} field",
                c.len(),
                self.degree
            )));
        }
        let mut v = [0; MAX_DEGREE];
        for (i, &x) in c.iter().enumerate() {
            v[i] = x.rem_euclid(self.p as i64) as u32;
        }
        Ok(Fq { ctx: self, v })
    }

    /// The class of `u` (zero in a prime field, whose modulus is `u`).
    pub fn generator(&'static self) -> Fq {
        let mut v = [0; MAX_DEGREE];
        if self.degree > 1 {
            v[1] = 1;
        }
        Fq { ctx: self, v }
    }

    /// The element with index `i` in the enumeration `Σ v_j p^j`.
    pub fn element(&'static self, mut i: u64) -> Fq {
        let mut v = [0; MAX_DEGREE];
        for slot in v.iter_mut().take(self.degree) {
            *slot = (i % self.p as u64) as u32;
            i /= self.p as u64;
        }
        Fq { ctx: self, v }
    }

    pub fn elements(&'static self) -> impl Iterator<Item = Fq> {
        (0..self.order).map(move |i| self.element(i))
    }

    pub fn random<R: Rng + ?Sized>(&'static self, rng: &mut R) -> Fq {
        self.element(rng.gen_range(0..self.order))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&'static self, rng: &mut R) -> Fq {
        self.element(rng.gen_range(1..self.order))
    }

    /// `1/n!` for `n < p`.
    pub fn inv_factorial(&'static self, n: usize) -> Fq {
        let mut acc = 1u64;
        for k in 1..=n as u64 {
            acc = acc * self.inv[(k % self.p as u64) as usize] as u64 % self.p as u64;
        }
        self.from_u64(acc)
    }
}

/// An element of a finite field.
#[derive(Clone, Copy)]
pub struct Fq {
    ctx: &'static FieldCtx,
    v: [u32; MAX_DEGREE],
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.ctx, other.ctx) && self.v == other.v
    }
}
impl Eq for Fq {}

impl Hash for Fq {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.ctx as *const FieldCtx as usize).hash(state);
        self.v.hash(state);
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.degree == 1 {
            write!(f, "{}", self.v[0])
        } else {
            let parts: Vec<String> = self.coeffs().iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

impl Fq {
    pub fn ctx(&self) -> &'static FieldCtx {
        self.ctx
    }

    /// Power-basis coefficients, length equal to the field degree.
    pub fn coeffs(&self) -> Vec<u32> {
        self.v[..self.ctx.degree].to_vec()
    }

    /// Index in the enumeration of the field; a total order used for canonical sorting.
    pub fn key(&self) -> u64 {
        let p = self.ctx.p as u64;
        self.v[..self.ctx.degree].iter().rev().fold(0, |acc, &c| acc * p + c as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.v == [0; MAX_DEGREE]
    }

    pub fn is_one(&self) -> bool {
        self.v[0] == 1 && self.v[1..].iter().all(|&c| c == 0)
    }

    pub fn zero_like(&self) -> Fq {
        self.ctx.zero()
    }

    pub fn one_like(&self) -> Fq {
        self.ctx.one()
    }

    /// The value as an integer in `[0, p)` if the element lies in the prime field.
    pub fn as_prime(&self) -> Option<u64> {
        if self.v[1..].iter().all(|&c| c == 0) {
            Some(self.v[0] as u64)
        } else {
            None
        }
    }

    fn check(&self, o: &Fq) -> Result<(), GfError> {
        if std::ptr::eq(self.ctx, o.ctx) {
            Ok(())
        } else {
            Err(GfError::CtxMismatch)
        }
    }

    pub fn checked_add(&self, o: &Fq) -> Result<Fq, GfError> {
        self.check(o)?;
        let p = self.ctx.p;
        let mut v = [0; MAX_DEGREE];
        for i in 0..MAX_DEGREE {
            let s = self.v[i] + o.v[i];
            v[i] = if s >= p { s - p } else { s };
        }
        Ok(Fq { ctx: self.ctx, v })
    }

    pub fn checked_sub(&self, o: &Fq) -> Result<Fq, GfError> {
        self.check(o)?;
        self.checked_add(&-*o)
    }

    pub fn checked_mul(&self, o: &Fq) -> Result<Fq, GfError> {
        self.check(o)?;
        let ctx = self.ctx;
        let p = ctx.p as u64;
        let d = ctx.degree;
        if d == 1 {
            return Ok(ctx.from_u64(self.v[0] as u64 * o.v[0] as u64));
        }
        let mut prod = [0u64; 2 * MAX_DEGREE - 1];
        for i in 0..d {
            if self.v[i] == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] = (prod[i + j] + self.v[i] as u64 * o.v[j] as u64) % p;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..d {
                let mj = ctx.modulus[j] as u64;
                prod[k - d + j] = (prod[k - d + j] + (p - c) * mj) % p;
            }
        }
        let mut v = [0; MAX_DEGREE];
        for i in 0..d {
            v[i] = prod[i] as u32;
        }
        Ok(Fq { ctx, v })
    }

    pub fn pow(&self, mut e: u128) -> Fq {
        let mut r = self.ctx.one();
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                r *= b;
            }
            b = b * b;
            e >>= 1;
        }
        r
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<Fq, GfError> {
        if e >= 0 {
            Ok(self.pow(e as u128))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs() as u128))
        }
    }

    pub fn inv(&self) -> Result<Fq, GfError> {
        if self.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        if self.ctx.degree == 1 {
            return Ok(self.ctx.from_u64(self.ctx.inv[self.v[0] as usize] as u64));
        }
        Ok(self.pow(self.ctx.order as u128 - 2))
    }

    pub fn checked_div(&self, o: &Fq) -> Result<Fq, GfError> {
        self.check(o)?;
        Ok(*self * o.inv()?)
    }

    pub fn scale_int(&self, n: i64) -> Fq {
        *self * self.ctx.from_i64(n)
    }

    pub fn frobenius(&self) -> Fq {
        self.pow(self.ctx.p as u128)
    }

    /// Absolute trace `Σ_{i<deg} x^{p^i}`, as an element of the prime field.
    pub fn trace_to_prime(&self) -> Fq {
        let mut acc = self.ctx.zero();
        let mut x = *self;
        for _ in 0..self.ctx.degree {
            acc += x;
            x = x.frobenius();
        }
        let fp = self.ctx.prime_field();
        fp.from_u64(acc.v[0] as u64)
    }

    /// Inverse of the Frobenius `x ↦ x^p`.
    pub fn frobenius_inv(&self) -> Fq {
        let mut x = *self;
        for _ in 1..self.ctx.degree {
            x = x.frobenius();
        }
        x
    }
}

impl Add for Fq {
    type Output = Fq;
    fn add(self, o: Fq) -> Fq {
        self.checked_add(&o).expect("field context mismatch")
    }
}
impl Sub for Fq {
    type Output = Fq;
    fn sub(self, o: Fq) -> Fq {
        self.checked_sub(&o).expect("field context mismatch")
    }
}
impl Mul for Fq {
    type Output = Fq;
    fn mul(self, o: Fq) -> Fq {
        self.checked_mul(&o).expect("field context mismatch")
    }
}
impl Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        let p = self.ctx.p;
        let mut v = [0; MAX_DEGREE];
        for i in 0..MAX_DEGREE {
            v[i] = if self.v[i] == 0 { 0 } else { p - self.v[i] };
        }
        Fq { ctx: self.ctx, v }
    }
}
impl AddAssign for Fq {
    fn add_assign(&mut self, o: Fq) {
        *self = *self + o;
    }
}
impl SubAssign for Fq {
    fn sub_assign(&mut self, o: Fq) {
        *self = *self - o;
    }
}
impl MulAssign for Fq {
    fn mul_assign(&mut self, o: Fq) {
        *self = *self * o;
    }
}

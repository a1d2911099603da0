//! Rational functions `F_q(s)`, local Laurent expansions, 1-forms `f·ds` and residues.

mod laurent;

pub use laurent::{Center, LaurentLocal, EXACT};

use std::fmt;

use thiserror::Error;

use crate::gf::{factor, Embedding, FieldCtx, Fq, GfError, Poly, ResidueField};
use crate::tpoly::{CoeffRing, Derivation, Trunc, TruncError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("argument is zero")]
    ZeroArgument,
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient of exponent {requested} requested, expansion exact below {prec}")]
    InsufficientPrecision { requested: i64, prec: i64 },
    #[error("function has a pole at the evaluation point")]
    NotRegular,
    #[error("expansions around different centers")]
    CenterMismatch,
    #[error("no simple root to lift")]
    HenselFailure,
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Trunc(#[from] TruncError),
}

/// A reduced quotient `num/den` with `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num.coeffs(), self.den.coeffs())
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &Poly| {
            let v: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
            format!("[{}]", v.join(","))
        };
        if self.den.is_one() {
            write!(f, "{}", show(&self.num))
        } else {
            write!(f, "{}/{}", show(&self.num), show(&self.den))
        }
    }
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<RatFn, LocalError> {
        if den.is_zero() {
            return Err(LocalError::DivisionByZero);
        }
        if !std::ptr::eq(num.ctx(), den.ctx()) {
            return Err(GfError::CtxMismatch.into());
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> RatFn {
        let ctx = den.ctx();
        if num.is_zero() {
            return RatFn { num, den: Poly::one(ctx) };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let li = den.lead().inv().expect("nonzero");
        if li.is_one() {
            RatFn { num, den }
        } else {
            RatFn { num: num.scale(&li), den: den.scale(&li) }
        }
    }

    pub fn from_poly(p: Poly) -> RatFn {
        let ctx = p.ctx();
        RatFn { num: p, den: Poly::one(ctx) }
    }

    pub fn constant(c: Fq) -> RatFn {
        RatFn::from_poly(Poly::constant(c))
    }

    pub fn zero(ctx: &'static FieldCtx) -> RatFn {
        RatFn::from_poly(Poly::zero(ctx))
    }

    pub fn one(ctx: &'static FieldCtx) -> RatFn {
        RatFn::from_poly(Poly::one(ctx))
    }

    /// The coordinate `s`.
    pub fn s(ctx: &'static FieldCtx) -> RatFn {
        RatFn::from_poly(Poly::x(ctx))
    }

    pub fn ctx(&self) -> &'static FieldCtx {
        self.den.ctx()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Fq> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// `deg num − deg den` (the negative of the order at ∞); zero has no degree.
    pub fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.num.deg() - self.den.deg())
        }
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return Self::normalized(&self.num + &o.num, self.den.clone());
        }
        Self::normalized(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        Self::normalized(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn scale(&self, c: &Fq) -> RatFn {
        if c.is_zero() {
            return RatFn::zero(self.ctx());
        }
        RatFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RatFn, LocalError> {
        if self.is_zero() {
            return Err(LocalError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &RatFn) -> Result<RatFn, LocalError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn powi(&self, e: i64) -> Result<RatFn, LocalError> {
        let b = if e < 0 { self.inv()? } else { self.clone() };
        let n = e.unsigned_abs();
        Ok(RatFn { num: b.num.pow(n), den: b.den.pow(n) })
    }

    /// `d/ds` by the quotient rule.
    pub fn derive(&self) -> RatFn {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::normalized(n, &self.den * &self.den)
    }

    /// `f′/f`.
    pub fn dlog(&self) -> Result<RatFn, LocalError> {
        if self.is_zero() {
            return Err(LocalError::ZeroArgument);
        }
        self.derive().div(self)
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &Fq) -> Option<Fq> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) * d.inv().expect("nonzero"))
    }

    /// Multiplicity of the monic irreducible `pl` in num minus that in den.
    pub fn ord_at(&self, place: &Place) -> Result<i64, LocalError> {
        if self.is_zero() {
            return Err(LocalError::ZeroArgument);
        }
        match place {
            Place::Infinity => Ok(self.den.deg() - self.num.deg()),
            Place::Finite(pl) => Ok(multiplicity(&self.num, pl) - multiplicity(&self.den, pl)),
        }
    }

    /// Order at the rational point `s = c`.
    pub fn ord_at_point(&self, c: &Fq) -> Result<i64, LocalError> {
        self.ord_at(&Place::rational(*c))
    }

    /// Transport of coefficients along a field embedding.
    pub fn base_change(&self, e: &Embedding) -> RatFn {
        RatFn { num: e.apply_poly(&self.num), den: e.apply_poly(&self.den) }
    }

    /// `f(s + c)`.
    pub fn shift(&self, c: &Fq) -> RatFn {
        RatFn { num: self.num.taylor_shift(c), den: self.den.taylor_shift(c) }
    }

    /// Laurent expansion at `center`, exact for exponents `≤ order`.
    pub fn expand_at(&self, center: Center, order: i64) -> Result<LaurentLocal, LocalError> {
        if self.is_zero() {
            return Err(LocalError::ZeroArgument);
        }
        let (n, d, shift) = match center {
            Center::Finite(c) => {
                let n = self.num.taylor_shift(&c);
                let d = self.den.taylor_shift(&c);
                let jn = n.low_order().expect("nonzero");
                let jd = d.low_order().expect("nonzero");
                (n.shift_down(jn), d.shift_down(jd), jn as i64 - jd as i64)
            }
            Center::Infinity => {
                let dn = self.num.deg() as usize;
                let dd = self.den.deg() as usize;
                (self.num.reversed(dn), self.den.reversed(dd), dd as i64 - dn as i64)
            }
        };
        let count = (order - shift + 1).max(0) as usize;
        let d0i = d.coeff(0).inv()?;
        let mut q: Vec<Fq> = Vec::with_capacity(count);
        for k in 0..count {
            let mut acc = n.coeff(k);
            for i in 1..=k.min(d.deg() as usize) {
                acc -= d.coeff(i) * q[k - i];
            }
            q.push(acc * d0i);
        }
        Ok(LaurentLocal::from_parts(center, self.ctx(), shift, q, order + 1))
    }

    /// Finite poles as monic irreducibles, in canonical order.
    pub fn finite_poles(&self) -> Vec<Place> {
        if self.den.is_constant() {
            return Vec::new();
        }
        factor(&self.den)
            .expect("nonzero")
            .factors
            .into_iter()
            .map(|(g, _)| Place::Finite(g))
            .collect()
    }

    /// Finite zeros as monic irreducibles, in canonical order.
    pub fn finite_zeros(&self) -> Vec<Place> {
        if self.num.is_constant() {
            return Vec::new();
        }
        factor(&self.num)
            .expect("nonzero")
            .factors
            .into_iter()
            .map(|(g, _)| Place::Finite(g))
            .collect()
    }
}

fn multiplicity(f: &Poly, pl: &Poly) -> i64 {
    let mut f = f.clone();
    let mut k = 0;
    loop {
        let (q, r) = f.divrem(pl).expect("nonzero");
        if !r.is_zero() || f.is_zero() {
            return k;
        }
        f = q;
        k += 1;
    }
}

impl CoeffRing for RatFn {
    fn field(&self) -> &'static FieldCtx {
        self.ctx()
    }
    fn zero_like(&self) -> Self {
        RatFn::zero(self.ctx())
    }
    fn one_like(&self) -> Self {
        RatFn::one(self.ctx())
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFn::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFn::sub(self, o)
    }
    fn neg(&self) -> Self {
        RatFn::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFn::mul(self, o)
    }
    fn scale(&self, c: &Fq) -> Self {
        RatFn::scale(self, c)
    }
    fn inv(&self) -> Option<Self> {
        RatFn::inv(self).ok()
    }
}

impl Derivation for RatFn {
    fn derive(&self) -> Self {
        RatFn::derive(self)
    }
}

/// A closed point of `P¹`: a monic irreducible polynomial or `∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    /// The point `s = c`.
    pub fn rational(c: Fq) -> Place {
        Place::Finite(Poly::linear(c))
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.deg() as usize,
            Place::Infinity => 1,
        }
    }
}

/// The 1-form `f·ds`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneForm {
    pub f: RatFn,
}

impl OneForm {
    pub fn new(f: RatFn) -> OneForm {
        OneForm { f }
    }

    pub fn zero(ctx: &'static FieldCtx) -> OneForm {
        OneForm { f: RatFn::zero(ctx) }
    }

    /// `dg`.
    pub fn d(g: &RatFn) -> OneForm {
        OneForm { f: g.derive() }
    }

    /// `dg/g`.
    pub fn dlog(g: &RatFn) -> Result<OneForm, LocalError> {
        Ok(OneForm { f: g.dlog()? })
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    pub fn add(&self, o: &OneForm) -> OneForm {
        OneForm { f: self.f.add(&o.f) }
    }

    pub fn sub(&self, o: &OneForm) -> OneForm {
        OneForm { f: self.f.sub(&o.f) }
    }

    pub fn mul(&self, g: &RatFn) -> OneForm {
        OneForm { f: self.f.mul(g) }
    }

    /// Residue at a closed point, in its residue field (at the fixed root for degree > 1).
    pub fn residue_at(&self, place: &Place) -> Result<Fq, LocalError> {
        Ok(self.residue_with_field(place)?.0)
    }

    fn residue_with_field(&self, place: &Place) -> Result<(Fq, Option<ResidueField>), LocalError> {
        let ctx = self.f.ctx();
        if self.f.is_zero() {
            return Ok((ctx.zero(), None));
        }
        match place {
            Place::Infinity => {
                let e = self.f.expand_at(Center::Infinity, 1)?;
                Ok((-e.coefficient(1)?, None))
            }
            Place::Finite(pl) if pl.deg() == 1 => {
                let e = self.f.expand_at(Center::Finite(-pl.coeff(0)), -1)?;
                Ok((e.coefficient(-1)?, None))
            }
            Place::Finite(pl) => {
                let rf = ResidueField::new(pl)?;
                let fk = self.f.base_change(&rf.embed);
                let e = fk.expand_at(Center::Finite(rf.root), -1)?;
                Ok((e.coefficient(-1)?, Some(rf)))
            }
        }
    }

    /// Trace of the residue down to the coefficient field of the form.
    pub fn residue_trace(&self, place: &Place) -> Result<Fq, LocalError> {
        let (r, rf) = self.residue_with_field(place)?;
        Ok(match rf {
            Some(rf) => rf.trace(&r),
            None => r,
        })
    }

    /// The finite poles of `f` together with `∞`.
    pub fn singular_places(&self) -> Vec<Place> {
        let mut v = self.f.finite_poles();
        v.push(Place::Infinity);
        v
    }
}

impl Trunc<RatFn> {
    pub fn base_change(&self, e: &Embedding) -> Trunc<RatFn> {
        self.map(|x| x.base_change(e))
    }

    /// `Σ_i x_i(s)·tⁱ` for the polynomial `Σ_j c_j s^j` with coefficients `c_j ∈ K[t]/(t^m)`.
    pub fn from_poly_coeffs(c: &[Trunc<Fq>]) -> Trunc<RatFn> {
        let k = c[0].constant_term().ctx();
        let m = c[0].modulus();
        let col = |i: usize| RatFn::from_poly(Poly::new(k, c.iter().map(|x| *x.coeff(i)).collect()));
        Trunc::new((0..m).map(col).collect()).expect("m ≥ 1")
    }

    /// The element with constant rational coefficients given by a `Trunc<Fq>`.
    pub fn from_scalars(x: &Trunc<Fq>) -> Trunc<RatFn> {
        x.map(|c| RatFn::constant(*c))
    }
}

/// `f(Z)` for `Z ∈ K[t]/(t^m)`; needs `den(Z(0)) ≠ 0`.
pub fn eval_trunc(f: &RatFn, z: &Trunc<Fq>) -> Result<Trunc<Fq>, LocalError> {
    let ev = |p: &Poly| {
        p.coeffs()
            .iter()
            .rev()
            .fold(z.zero_like(), |acc, c| &(&acc * z) + &Trunc::constant(*c, z.modulus()))
    };
    let d = ev(&f.den);
    if d.constant_term().is_zero() {
        return Err(LocalError::NotRegular);
    }
    Ok(&ev(&f.num) * &d.inv()?)
}

/// `Σ_n x_n(Z)·tⁿ`: substitutes a point of `K[t]/(t^m)` for `s` in an element of `F(s)[t]/(t^m)`.
pub fn reduce_at(x: &Trunc<RatFn>, z: &Trunc<Fq>) -> Result<Trunc<Fq>, LocalError> {
    let m = x.modulus();
    if z.modulus() != m {
        return Err(TruncError::ModulusMismatch { left: m, right: z.modulus() }.into());
    }
    let mut acc = z.zero_like();
    for (n, xn) in x.coeffs().iter().enumerate() {
        if xn.is_zero() {
            continue;
        }
        acc = &acc + &eval_trunc(xn, z)?.shift_t(n);
    }
    Ok(acc)
}

/// The root `Z(t) ≡ z0` of `x(Z) = 0` by Newton iteration; `z0` must be a simple root of `x₀`.
pub fn hensel_root(x: &Trunc<RatFn>, z0: &Fq) -> Result<Trunc<Fq>, LocalError> {
    let m = x.modulus();
    let x0 = x.constant_term();
    match x0.eval(z0) {
        Some(v) if v.is_zero() => {}
        _ => return Err(LocalError::HenselFailure),
    }
    let dx = x.derive();
    let mut z = Trunc::constant(*z0, m);
    let mut prec = 1;
    while prec < m {
        let fz = reduce_at(x, &z)?;
        let dfz = reduce_at(&dx, &z)?;
        if dfz.constant_term().is_zero() {
            return Err(LocalError::HenselFailure);
        }
        z = &z - &(&fz * &dfz.inv()?);
        prec *= 2;
    }
    Ok(z)
}

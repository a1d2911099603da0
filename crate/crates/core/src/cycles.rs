//! Parametrized cycles in `□³` over `k[t]/(t^m)`, their boundary, and the
//! invariants `ρ = ℓ∘∂`, `ρ_K = ℓ^(p)∘∂`.

use std::fmt;

use thiserror::Error;

use crate::gf::{factor, Embedding, FieldCtx, Fq, GfError, Poly, ResidueField};
use crate::localfield::{hensel_root, LocalError, Place, RatFn};
use crate::regulator::{GlobalLift, GoodFunction, RegulatorInput};
use crate::tpoly::{Trunc, TruncError};
use crate::wedge::{ell, ell_p, WedgeError, WedgeK};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("cycle is not admissible: {0:?}")]
    NotAdmissible(Vec<AdmissibilityFailure>),
    #[error("root at {0} does not lift")]
    HenselFailure(String),
    #[error("needs modulus at least t^{need}, got t^{got}")]
    ModulusTooSmall { need: usize, got: usize },
    #[error("coefficients have inconsistent moduli or fields")]
    Inconsistent,
    #[error("empty polynomial")]
    EmptyPolynomial,
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Trunc(#[from] TruncError),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
}

type Result<T> = std::result::Result<T, CycleError>;

/// A polynomial in `z` with coefficients in `k[t]/(t^m)`, constant term first.
pub type ZPoly = Vec<Trunc<Fq>>;

fn zpoly_trim(mut c: ZPoly) -> ZPoly {
    while c.len() > 1 && c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    c
}

pub fn zpoly_mul(a: &[Trunc<Fq>], b: &[Trunc<Fq>]) -> ZPoly {
    let mut out = vec![a[0].zero_like(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn zpoly_pow(a: &[Trunc<Fq>], e: u32) -> ZPoly {
    let mut acc = vec![a[0].one_like()];
    for _ in 0..e {
        acc = zpoly_mul(&acc, a);
    }
    acc
}

fn reduction(c: &[Trunc<Fq>]) -> Poly {
    let k = c[0].constant_term().ctx();
    Poly::new(k, c.iter().map(|x| *x.constant_term()).collect())
}

fn horner(c: &[Trunc<Fq>], e: &Embedding, z: &Trunc<Fq>) -> Trunc<Fq> {
    c.iter().rev().fold(z.zero_like(), |acc, x| &(&acc * z) + &x.map(|v| e.apply(v)))
}

/// `num(z)/den(z)` with coefficients in `k[t]/(t^m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamFn {
    pub num: ZPoly,
    pub den: ZPoly,
}

impl ParamFn {
    pub fn new(num: ZPoly, den: ZPoly) -> Result<ParamFn> {
        if num.is_empty() || den.is_empty() {
            return Err(CycleError::EmptyPolynomial);
        }
        let m = num[0].modulus();
        let k = num[0].constant_term().ctx();
        let ok = |x: &Trunc<Fq>| x.modulus() == m && x.coeffs().iter().all(|c| c.ctx() == k);
        if !num.iter().chain(den.iter()).all(ok) {
            return Err(CycleError::Inconsistent);
        }
        Ok(ParamFn { num: zpoly_trim(num), den: zpoly_trim(den) })
    }

    pub fn constant(c: Trunc<Fq>) -> ParamFn {
        let one = c.one_like();
        ParamFn { num: vec![c], den: vec![one] }
    }

    /// `(z − a)/(z − b)` scaled by `u`.
    pub fn linear_fraction(u: &Trunc<Fq>, a: &Trunc<Fq>, b: &Trunc<Fq>) -> ParamFn {
        let one = u.one_like();
        ParamFn { num: vec![-&(u * a), u.clone()], den: vec![-b, one] }
    }

    /// From integer grids indexed by z-degree, then t-degree.
    pub fn from_grid(k: &'static FieldCtx, m: usize, num: &[Vec<i64>], den: &[Vec<i64>]) -> Result<ParamFn> {
        let conv = |g: &[Vec<i64>]| -> ZPoly { g.iter().map(|row| Trunc::from_i64s(k, row).resized(m)).collect() };
        ParamFn::new(conv(num), conv(den))
    }

    pub fn ctx(&self) -> &'static FieldCtx {
        self.num[0].constant_term().ctx()
    }

    pub fn modulus(&self) -> usize {
        self.num[0].modulus()
    }

    /// The same function in the chart `w = 1/z`.
    pub fn at_infinity(&self) -> ParamFn {
        let (dn, dd) = (self.num.len() - 1, self.den.len() - 1);
        let zero = self.num[0].zero_like();
        let rev = |c: &ZPoly, pad: usize| -> ZPoly {
            let mut v = vec![zero.clone(); pad];
            v.extend(c.iter().rev().cloned());
            v
        };
        ParamFn { num: rev(&self.num, dd.saturating_sub(dn)), den: rev(&self.den, dn.saturating_sub(dd)) }
    }

    pub fn reduction(&self) -> Option<RatFn> {
        RatFn::new(reduction(&self.num), reduction(&self.den)).ok()
    }

    fn eval(&self, e: &Embedding, z: &Trunc<Fq>) -> Option<Trunc<Fq>> {
        let d = horner(&self.den, e, z);
        let inv = d.inv().ok()?;
        Some(&horner(&self.num, e, z) * &inv)
    }

    fn resized(&self, m: usize) -> ParamFn {
        ParamFn { num: self.num.iter().map(|x| x.resized(m)).collect(), den: self.den.iter().map(|x| x.resized(m)).collect() }
    }

    /// `t ↦ λt`.
    pub fn scale_t(&self, lambda: &Fq) -> ParamFn {
        ParamFn { num: self.num.iter().map(|x| x.scale_t(lambda)).collect(), den: self.den.iter().map(|x| x.scale_t(lambda)).collect() }
    }

    /// The lifted good function `unit·∏ m̃ᵢ^{eᵢ}`.
    pub fn from_good_function(lift: &GlobalLift, f: &GoodFunction, which: usize) -> Result<ParamFn> {
        let unit = lift.units[which].clone();
        let mut num = vec![unit.clone()];
        let mut den = vec![unit.one_like()];
        for &(j, e) in &f.factors {
            let c = lift.points[j].as_ref().ok_or(CycleError::Inconsistent)?;
            if e > 0 {
                num = zpoly_mul(&num, &zpoly_pow(c, e as u32));
            } else {
                den = zpoly_mul(&den, &zpoly_pow(c, (-e) as u32));
            }
        }
        ParamFn::new(num, den)
    }
}

/// `z ↦ (y₁(z), y₂(z), y₃(z))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamCycle {
    pub y: [ParamFn; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaceValue {
    Zero,
    Infinity,
}

impl fmt::Display for FaceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceValue::Zero => write!(f, "0"),
            FaceValue::Infinity => write!(f, "∞"),
        }
    }
}

/// The face `y_coord = at`, `coord ∈ {1, 2, 3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Face {
    pub coord: usize,
    pub at: FaceValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibilityFailure {
    IdenticallyZero { coord: usize },
    IdenticallyInfinite { coord: usize },
    IdenticallyOne { coord: usize },
    /// Numerator and denominator of the reduction share a zero.
    CommonFactor { coord: usize, place: Place },
    NonSimpleRoot { face: Face, place: Place },
    /// Another coordinate takes a value in `{0, 1, ∞}` on the face.
    FaceIntersection { face: Face, place: Place, other: usize },
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub failures: Vec<AdmissibilityFailure>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The factor in front of `∂_i^∞ − ∂_i^0`: `(−1)^i`, its negative `(−1)^{i+1}`,
/// or the literal constant exponent `(−1)^n` with `n = 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignConvention {
    #[default]
    IndexPower,
    NegatedIndexPower,
    ConstantPower,
}

impl SignConvention {
    pub fn sign(self, face: Face) -> i64 {
        let e = match self {
            SignConvention::IndexPower => face.coord,
            SignConvention::NegatedIndexPower => face.coord + 1,
            SignConvention::ConstantPower => 3,
        };
        let s = if e % 2 == 0 { 1 } else { -1 };
        match face.at {
            FaceValue::Infinity => s,
            FaceValue::Zero => -s,
        }
    }
}

/// A point of `∂Z`: the values `(u, v)` of the two surviving coordinates in `k(r)[t]/(t^m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint {
    pub embed: Embedding,
    pub u: Trunc<Fq>,
    pub v: Trunc<Fq>,
    pub sign: i64,
    pub face: Face,
    pub place: Place,
}

/// A candidate boundary point before lifting.
struct Candidate {
    face: Face,
    place: Place,
    /// The chart the point lives in: the original functions or their `w = 1/z` form.
    chart: [ParamFn; 3],
    factor: Poly,
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

impl ParamCycle {
    pub fn new(y1: ParamFn, y2: ParamFn, y3: ParamFn) -> ParamCycle {
        ParamCycle { y: [y1, y2, y3] }
    }

    /// The graph of the lifted functions of a regulator input.
    pub fn graph(input: &RegulatorInput, lift: &GlobalLift) -> Result<ParamCycle> {
        let [f, g, h] = input.functions();
        Ok(ParamCycle::new(
            ParamFn::from_good_function(lift, f, 0)?,
            ParamFn::from_good_function(lift, g, 1)?,
            ParamFn::from_good_function(lift, h, 2)?,
        ))
    }

    pub fn ctx(&self) -> &'static FieldCtx {
        self.y[0].ctx()
    }

    pub fn modulus(&self) -> usize {
        self.y[0].modulus()
    }

    fn consistent(&self) -> bool {
        let (k, m) = (self.ctx(), self.modulus());
        self.y.iter().all(|f| f.ctx() == k && f.modulus() == m)
    }

    pub fn resized(&self, m: usize) -> ParamCycle {
        ParamCycle { y: self.y.clone().map(|f| f.resized(m)) }
    }

    pub fn scale_t(&self, lambda: &Fq) -> ParamCycle {
        ParamCycle { y: self.y.clone().map(|f| f.scale_t(lambda)) }
    }

    /// Scans every face; failures are collected, candidates are returned for lifting.
    fn scan(&self) -> (Vec<AdmissibilityFailure>, Vec<Candidate>) {
        let mut fails = Vec::new();
        let mut cands = Vec::new();
        if !self.consistent() {
            return (vec![AdmissibilityFailure::Inconsistent], cands);
        }
        let k = self.ctx();
        for (i, f) in self.y.iter().enumerate() {
            let (n0, d0) = (reduction(&f.num), reduction(&f.den));
            let coord = i + 1;
            if n0.is_zero() {
                fails.push(AdmissibilityFailure::IdenticallyZero { coord });
            } else if d0.is_zero() {
                fails.push(AdmissibilityFailure::IdenticallyInfinite { coord });
            } else if n0 == d0 {
                fails.push(AdmissibilityFailure::IdenticallyOne { coord });
            }
        }
        if !fails.is_empty() {
            return (fails, cands);
        }
        let inf = self.y.clone().map(|f| f.at_infinity());
        for (i, f) in self.y.iter().enumerate() {
            let coord = i + 1;
            for at in [FaceValue::Zero, FaceValue::Infinity] {
                let face = Face { coord, at };
                // finite chart
                let (p0, q0) = match at {
                    FaceValue::Zero => (reduction(&f.num), reduction(&f.den)),
                    FaceValue::Infinity => (reduction(&f.den), reduction(&f.num)),
                };
                if p0.deg() > 0 {
                    let fac = factor(&p0).expect("nonzero");
                    for (g, e) in fac.factors {
                        let place = Place::Finite(g.clone());
                        if q0.rem(&g).expect("nonzero").is_zero() {
                            fails.push(AdmissibilityFailure::CommonFactor { coord, place });
                        } else if e > 1 {
                            fails.push(AdmissibilityFailure::NonSimpleRoot { face, place });
                        } else {
                            cands.push(Candidate { face, place, chart: self.y.clone(), factor: g });
                        }
                    }
                }
                // the chart at z = ∞
                let fi = &inf[i];
                let (p0, q0) = match at {
                    FaceValue::Zero => (reduction(&fi.num), reduction(&fi.den)),
                    FaceValue::Infinity => (reduction(&fi.den), reduction(&fi.num)),
                };
                if p0.coeff(0).is_zero() {
                    if q0.coeff(0).is_zero() {
                        fails.push(AdmissibilityFailure::CommonFactor { coord, place: Place::Infinity });
                    } else if p0.coeffs().get(1).is_none_or(|c| c.is_zero()) {
                        fails.push(AdmissibilityFailure::NonSimpleRoot { face, place: Place::Infinity });
                    } else {
                        cands.push(Candidate { face, place: Place::Infinity, chart: inf.clone(), factor: Poly::x(k) });
                    }
                }
            }
        }
        let mut good = Vec::new();
        for c in cands {
            match face_intersection(&c) {
                Ok(None) => good.push(c),
                Ok(Some(other)) => fails.push(AdmissibilityFailure::FaceIntersection { face: c.face, place: c.place.clone(), other }),
                Err(_) => fails.push(AdmissibilityFailure::Inconsistent),
            }
        }
        (fails, good)
    }

    pub fn admissibility_check(&self) -> AdmissibilityReport {
        AdmissibilityReport { failures: self.scan().0 }
    }

    pub fn boundary(&self) -> Result<Vec<BoundaryPoint>> {
        self.boundary_with(SignConvention::default())
    }

    pub fn boundary_with(&self, conv: SignConvention) -> Result<Vec<BoundaryPoint>> {
        let (fails, cands) = self.scan();
        if !fails.is_empty() {
            return Err(CycleError::NotAdmissible(fails));
        }
        cands.into_iter().map(|c| lift_point(c, conv)).collect()
    }
}

/// The first other coordinate whose reduction at the point lies in `{0, 1, ∞}`.
fn face_intersection(c: &Candidate) -> Result<Option<usize>> {
    let rf = ResidueField::new(&c.factor)?;
    let i = c.face.coord - 1;
    let (a, b) = others(i);
    for j in [a, b] {
        let f = &c.chart[j];
        let n = rf.embed.apply_poly(&reduction(&f.num)).eval(&rf.root);
        let d = rf.embed.apply_poly(&reduction(&f.den)).eval(&rf.root);
        if n.is_zero() || d.is_zero() || n == d {
            return Ok(Some(j + 1));
        }
    }
    Ok(None)
}

fn lift_point(c: Candidate, conv: SignConvention) -> Result<BoundaryPoint> {
    let rf = ResidueField::new(&c.factor)?;
    let i = c.face.coord - 1;
    let f = &c.chart[i];
    let poly = match c.face.at {
        FaceValue::Zero => &f.num,
        FaceValue::Infinity => &f.den,
    };
    let up: ZPoly = poly.iter().map(|x| x.map(|v| rf.embed.apply(v))).collect();
    let z = hensel_root(&Trunc::<RatFn>::from_poly_coeffs(&up), &rf.root)
        .map_err(|_| CycleError::HenselFailure(format!("{:?}", c.place)))?;
    if !horner(poly, &rf.embed, &z).is_zero() {
        return Err(CycleError::HenselFailure(format!("{:?}", c.place)));
    }
    let (a, b) = others(i);
    let val = |j: usize| c.chart[j].eval(&rf.embed, &z).ok_or(CycleError::HenselFailure(format!("{:?}", c.place)));
    Ok(BoundaryPoint { u: val(a)?, v: val(b)?, sign: conv.sign(c.face), face: c.face, place: c.place, embed: rf.embed })
}

fn functional_sum(
    k: &'static FieldCtx,
    pts: &[BoundaryPoint],
    m: usize,
    f: impl Fn(&WedgeK<Trunc<Fq>>) -> std::result::Result<Fq, WedgeError>,
) -> Result<Fq> {
    let mut acc = k.zero();
    for pt in pts {
        if pt.u.modulus() < m {
            return Err(CycleError::ModulusTooSmall { need: m, got: pt.u.modulus() });
        }
        let w = WedgeK::pair(pt.u.resized(m), pt.v.resized(m));
        acc += pt.embed.trace(&f(&w)?).scale_int(pt.sign);
    }
    Ok(acc)
}

/// `Σ sign·Tr ℓ(u∧v)`; only the pairs mod `t³` enter.
pub fn ell_zero_cycle(k: &'static FieldCtx, pts: &[BoundaryPoint]) -> Result<Fq> {
    functional_sum(k, pts, 3, ell)
}

/// `Σ sign·Tr ℓ^(p)(u∧v)`.
pub fn ell_p_zero_cycle(k: &'static FieldCtx, pts: &[BoundaryPoint]) -> Result<Fq> {
    functional_sum(k, pts, k.p() as usize, ell_p)
}

pub fn rho_cycle(z: &ParamCycle) -> Result<Fq> {
    ell_zero_cycle(z.ctx(), &z.boundary()?)
}

pub fn rho_k_cycle(z: &ParamCycle) -> Result<Fq> {
    ell_p_zero_cycle(z.ctx(), &z.boundary()?)
}

pub fn rho_cycle_with(z: &ParamCycle, conv: SignConvention) -> Result<Fq> {
    ell_zero_cycle(z.ctx(), &z.boundary_with(conv)?)
}

pub fn rho_k_cycle_with(z: &ParamCycle, conv: SignConvention) -> Result<Fq> {
    ell_p_zero_cycle(z.ctx(), &z.boundary_with(conv)?)
}

/// `ρ_K` of a formal combination `Σ nᵢ Zᵢ`.
pub fn rho_k_combination(k: &'static FieldCtx, terms: &[(i64, ParamCycle)]) -> Result<Fq> {
    terms.iter().try_fold(k.zero(), |acc, (n, z)| Ok(acc + rho_k_cycle(z)?.scale_int(*n)))
}

pub fn rho_combination(k: &'static FieldCtx, terms: &[(i64, ParamCycle)]) -> Result<Fq> {
    terms.iter().try_fold(k.zero(), |acc, (n, z)| Ok(acc + rho_cycle(z)?.scale_int(*n)))
}

/// Whether `y_i⁽¹⁾ ≡ y_i⁽²⁾ mod t^m` for all `i`, compared as `num₁·den₂ ≡ num₂·den₁`.
pub fn modulus_compare(z1: &ParamCycle, z2: &ParamCycle, m: usize) -> bool {
    if z1.ctx() != z2.ctx() || m == 0 || m > z1.modulus().min(z2.modulus()) {
        return false;
    }
    z1.y.iter().zip(&z2.y).all(|(a, b)| {
        let a = a.resized(m);
        let b = b.resized(m);
        zpoly_trim(zpoly_mul(&a.num, &b.den)) == zpoly_trim(zpoly_mul(&b.num, &a.den))
    })
}

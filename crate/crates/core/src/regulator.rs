//! The regulators `ρ_K` and `ρ` on `P¹` over `k₂ = k[t]/(t²)`.
//!
//! Every `k₂` coefficient is lifted to `k_p` (resp. `k₃`) with seeded higher
//! coefficients. Products of lifted monic polynomials form a global good lifting, so
//! the value is `Σ_c Tr ℓ^(p)(res_c)` over the points in the support and `∞`.

use rand::Rng;
use thiserror::Error;

use crate::bloch::pounds1;
use crate::gf::{is_irreducible, FieldCtx, Fq, GfError, Poly, ResidueField};
use crate::localfield::{hensel_root, LocalError, Place, RatFn};
use crate::omega::{res_omega_pair, OmegaError};
use crate::sample;
use crate::tpoly::{Trunc, TruncError};
use crate::wedge::{ell, ell_p, res_good, WedgeError, WedgeK};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegulatorError {
    #[error("inputs live over different fields")]
    CtxMismatch,
    #[error("expected an element of k[t]/(t^2), got modulus t^{0}")]
    NotK2(usize),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("point {0}: {1}")]
    BadPoint(usize, String),
    #[error("points {0} and {1} have the same reduction")]
    DuplicatePoint(usize, usize),
    #[error("factor refers to unknown point {0}")]
    UnknownPoint(usize),
    #[error("the point at infinity cannot be a factor")]
    InfinityFactor,
    #[error("constant is not a unit")]
    NotAUnit,
    #[error("local lifting is not congruent to the global lifting mod t^2")]
    NotCongruentModT2,
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Trunc(#[from] TruncError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
    #[error(transparent)]
    Omega(OmegaError),
}

impl From<OmegaError> for RegulatorError {
    fn from(e: OmegaError) -> Self {
        match e {
            OmegaError::NotCongruentModT2 | OmegaError::PairNotCongruent => RegulatorError::NotCongruentModT2,
            e => RegulatorError::Omega(e),
        }
    }
}

type Result<T> = std::result::Result<T, RegulatorError>;

/// A closed point of `P¹` lifted to `k₂`: `∞`, or a monic `m̃(z)` with coefficients in
/// `k₂` listed from the constant term up.
#[derive(Debug, Clone, PartialEq)]
pub enum LiftedPoint {
    Infinity,
    Finite(Vec<Trunc<Fq>>),
}

impl LiftedPoint {
    /// `z − α`.
    pub fn linear(alpha: &Trunc<Fq>) -> LiftedPoint {
        LiftedPoint::Finite(vec![-alpha, alpha.one_like()])
    }

    /// `(z − α)(z − ᾱ)` for `α` over the quadratic extension `big` of the base `k`,
    /// with `ᾱ` the coefficientwise conjugate.
    pub fn conjugate_pair(alpha: &Trunc<Fq>, k: &'static FieldCtx) -> Result<LiftedPoint> {
        let big = alpha.constant_term().ctx();
        let emb = crate::gf::Embedding::new(k, big)?;
        let q = k.order() as u128;
        let bar = alpha.map(|x| x.pow(q));
        let sum = alpha + &bar;
        let prod = alpha * &bar;
        let down = |x: &Trunc<Fq>| x.try_map(|c| emb.pull_back(c));
        Ok(LiftedPoint::Finite(vec![down(&prod)?, down(&-&sum)?, Trunc::constant(k.one(), alpha.modulus())]))
    }

    pub fn reduction(&self) -> Option<Poly> {
        match self {
            LiftedPoint::Infinity => None,
            LiftedPoint::Finite(c) => {
                let k = c[0].constant_term().ctx();
                Some(Poly::new(k, c.iter().map(|x| *x.constant_term()).collect()))
            }
        }
    }

    pub fn place(&self) -> Place {
        match self.reduction() {
            None => Place::Infinity,
            Some(p) => Place::Finite(p),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            LiftedPoint::Infinity => 1,
            LiftedPoint::Finite(c) => c.len() - 1,
        }
    }
}

/// `unit·∏ m̃ᵢ(z)^{eᵢ}`, factors indexing the shared point table.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodFunction {
    pub unit: Trunc<Fq>,
    pub factors: Vec<(usize, i64)>,
}

impl GoodFunction {
    pub fn constant(unit: Trunc<Fq>) -> GoodFunction {
        GoodFunction { unit, factors: Vec::new() }
    }

    pub fn monomial(unit: Trunc<Fq>, point: usize, e: i64) -> GoodFunction {
        GoodFunction { unit, factors: vec![(point, e)] }
    }

    /// The exponent of point `i`.
    pub fn exponent(&self, i: usize) -> i64 {
        self.factors.iter().filter(|(j, _)| *j == i).map(|(_, e)| e).sum()
    }

    fn scale_t(&self, lambda: &Fq) -> GoodFunction {
        GoodFunction { unit: self.unit.scale_t(lambda), factors: self.factors.clone() }
    }
}

/// `f ∧ g ∧ h` over a common point table.
#[derive(Debug, Clone, PartialEq)]
pub struct RegulatorInput {
    pub points: Vec<LiftedPoint>,
    pub f: GoodFunction,
    pub g: GoodFunction,
    pub h: GoodFunction,
}

/// Which functional the pipeline evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    /// `ℓ^(p)` on lifts to `k_p`.
    Kontsevich,
    /// `ℓ = ℓ₂∧ℓ₁` on lifts to `k₃`.
    Plain,
}

impl Functional {
    pub fn modulus(self, k: &'static FieldCtx) -> usize {
        match self {
            Functional::Kontsevich => k.p() as usize,
            Functional::Plain => 3,
        }
    }

    fn eval(self, w: &WedgeK<Trunc<Fq>>) -> std::result::Result<Fq, WedgeError> {
        match self {
            Functional::Kontsevich => ell_p(w),
            Functional::Plain => ell(w),
        }
    }
}

/// A point in a breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointRef {
    Table(usize),
    Infinity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointTerm {
    pub point: PointRef,
    pub degree: usize,
    pub value: Fq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Breakdown {
    pub total: Fq,
    pub terms: Vec<PointTerm>,
}

impl RegulatorInput {
    pub fn new(points: Vec<LiftedPoint>, f: GoodFunction, g: GoodFunction, h: GoodFunction) -> RegulatorInput {
        RegulatorInput { points, f, g, h }
    }

    /// `(z−α)∧(z−β)∧(z−γ)`.
    pub fn linear_factors(alpha: &Trunc<Fq>, beta: &Trunc<Fq>, gamma: &Trunc<Fq>) -> RegulatorInput {
        let one = alpha.one_like();
        RegulatorInput {
            points: vec![LiftedPoint::linear(alpha), LiftedPoint::linear(beta), LiftedPoint::linear(gamma)],
            f: GoodFunction::monomial(one.clone(), 0, 1),
            g: GoodFunction::monomial(one.clone(), 1, 1),
            h: GoodFunction::monomial(one, 2, 1),
        }
    }

    pub fn functions(&self) -> [&GoodFunction; 3] {
        [&self.f, &self.g, &self.h]
    }

    /// The coefficient field `k`, after checking the input.
    pub fn validate(&self) -> Result<&'static FieldCtx> {
        let k = self.f.unit.constant_term().ctx();
        let check = |x: &Trunc<Fq>| -> Result<()> {
            if x.modulus() != 2 {
                return Err(RegulatorError::NotK2(x.modulus()));
            }
            if x.coeffs().iter().any(|c| c.ctx() != k) {
                return Err(RegulatorError::CtxMismatch);
            }
            Ok(())
        };
        let mut reds: Vec<(usize, Poly)> = Vec::new();
        for (i, pt) in self.points.iter().enumerate() {
            let LiftedPoint::Finite(c) = pt else { continue };
            if c.len() < 2 {
                return Err(RegulatorError::BadPoint(i, "constant polynomial".into()));
            }
            c.iter().try_for_each(check)?;
            let lead = c.last().expect("nonempty");
            if !lead.coeff(0).is_one() || !lead.coeff(1).is_zero() {
                return Err(RegulatorError::BadPoint(i, "not monic".into()));
            }
            let red = pt.reduction().expect("finite");
            if !is_irreducible(&red) {
                return Err(RegulatorError::BadPoint(i, "reduction is not irreducible".into()));
            }
            if let Some((j, _)) = reds.iter().find(|(_, r)| *r == red) {
                return Err(RegulatorError::DuplicatePoint(*j, i));
            }
            reds.push((i, red));
        }
        for f in self.functions() {
            check(&f.unit)?;
            if f.unit.constant_term().is_zero() {
                return Err(RegulatorError::NotAUnit);
            }
            for &(j, _) in &f.factors {
                match self.points.get(j) {
                    None => return Err(RegulatorError::UnknownPoint(j)),
                    Some(LiftedPoint::Infinity) => return Err(RegulatorError::InfinityFactor),
                    Some(_) => {}
                }
            }
        }
        Ok(k)
    }

    /// The substitution `t ↦ λt`.
    pub fn scale_t(&self, lambda: &Fq) -> RegulatorInput {
        RegulatorInput {
            points: self
                .points
                .iter()
                .map(|p| match p {
                    LiftedPoint::Infinity => LiftedPoint::Infinity,
                    LiftedPoint::Finite(c) => LiftedPoint::Finite(c.iter().map(|x| x.scale_t(lambda)).collect()),
                })
                .collect(),
            f: self.f.scale_t(lambda),
            g: self.g.scale_t(lambda),
            h: self.h.scale_t(lambda),
        }
    }
}

/// Lifts of all coefficients to `k_m`.
#[derive(Debug, Clone)]
pub struct GlobalLift {
    pub modulus: usize,
    /// `None` for `∞`.
    pub points: Vec<Option<Vec<Trunc<Fq>>>>,
    pub units: [Trunc<Fq>; 3],
}

fn lift_elem<R: Rng>(x: &Trunc<Fq>, m: usize, rng: &mut R) -> Trunc<Fq> {
    let k = x.constant_term().ctx();
    let fill: Vec<Fq> = (2..m).map(|_| k.random(rng)).collect();
    x.extend_with(&fill).resized(m)
}

fn poly_in_t(c: &[Trunc<Fq>]) -> Trunc<RatFn> {
    Trunc::<RatFn>::from_poly_coeffs(c)
}

impl GlobalLift {
    /// The seeded lift; leading coefficients stay exactly `1`.
    pub fn new(input: &RegulatorInput, m: usize, seed: u64) -> Result<GlobalLift> {
        input.validate()?;
        let mut rng = sample::rng(seed);
        let points = input
            .points
            .iter()
            .map(|p| match p {
                LiftedPoint::Infinity => None,
                LiftedPoint::Finite(c) => {
                    let n = c.len() - 1;
                    Some(
                        c.iter()
                            .enumerate()
                            .map(|(i, x)| if i == n { x.resized(m) } else { lift_elem(x, m, &mut rng) })
                            .collect(),
                    )
                }
            })
            .collect();
        let units = input.functions().map(|f| lift_elem(&f.unit, m, &mut rng));
        Ok(GlobalLift { modulus: m, points, units })
    }

    /// The lifted function `unit·∏ m̃ᵢ^{eᵢ}` as an element of `k(z)[t]/(t^m)`.
    pub fn function(&self, f: &GoodFunction, which: usize) -> Result<Trunc<RatFn>> {
        let mut acc = Trunc::<RatFn>::from_scalars(&self.units[which]);
        for &(j, e) in &f.factors {
            let c = self.points[j].as_ref().ok_or(RegulatorError::InfinityFactor)?;
            acc = acc.try_mul(&poly_in_t(c).powi(e)?)?;
        }
        Ok(acc)
    }

    pub fn wedge(&self, input: &RegulatorInput) -> Result<WedgeK<Trunc<RatFn>>> {
        let [f, g, h] = input.functions();
        Ok(WedgeK::triple(self.function(f, 0)?, self.function(g, 1)?, self.function(h, 2)?))
    }

    /// `m̃_c` as a uniformizer at point `c`, `1/z` at `∞`.
    pub fn uniformizer(&self, c: PointRef) -> Result<Trunc<RatFn>> {
        let k = self.units[0].constant_term().ctx();
        Ok(match c {
            PointRef::Infinity => Trunc::constant(RatFn::s(k).inv()?, self.modulus),
            PointRef::Table(i) => match &self.points[i] {
                None => Trunc::constant(RatFn::s(k).inv()?, self.modulus),
                Some(c) => poly_in_t(c),
            },
        })
    }
}

fn horner(c: &[Trunc<Fq>], z: &Trunc<Fq>) -> Trunc<Fq> {
    c.iter().rev().fold(z.zero_like(), |acc, x| &(&acc * z) + x)
}

/// `n_f·(ū_g∧ū_h) − n_g·(ū_f∧ū_h) + n_h·(ū_f∧ū_g)`.
fn residue_wedge(ns: [i64; 3], us: [Trunc<Fq>; 3]) -> WedgeK<Trunc<Fq>> {
    let mut w = WedgeK::new(2);
    for (n, a, b) in [(ns[0], 1, 2), (-ns[1], 0, 2), (ns[2], 0, 1)] {
        if n != 0 {
            w.push(n, vec![us[a].clone(), us[b].clone()]).expect("arity 2");
        }
    }
    w
}

fn finite_term(input: &RegulatorInput, lift: &GlobalLift, c: usize, fun: Functional) -> Result<Fq> {
    let fs = input.functions();
    let ns = fs.map(|f| f.exponent(c));
    let k = lift.units[0].constant_term().ctx();
    if ns.iter().all(|n| *n == 0) {
        return Ok(k.zero());
    }
    let mc = lift.points[c].as_ref().expect("finite");
    let rf = ResidueField::new(&input.points[c].reduction().expect("finite"))?;
    let up = |x: &Trunc<Fq>| x.map(|v| rf.embed.apply(v));
    let mc_up: Vec<Trunc<Fq>> = mc.iter().map(up).collect();
    let z = hensel_root(&poly_in_t(&mc_up), &rf.root)?;
    let mut us = Vec::with_capacity(3);
    for (i, f) in fs.iter().enumerate() {
        let mut u = up(&lift.units[i]);
        for &(j, e) in &f.factors {
            if j == c {
                continue;
            }
            let cj: Vec<Trunc<Fq>> = lift.points[j].as_ref().expect("finite").iter().map(up).collect();
            u = &u * &horner(&cj, &z).powi(e)?;
        }
        us.push(u);
    }
    let us: [Trunc<Fq>; 3] = us.try_into().expect("three entries");
    Ok(rf.trace(&fun.eval(&residue_wedge(ns, us))?))
}

fn infinity_term(input: &RegulatorInput, lift: &GlobalLift, fun: Functional) -> Result<Fq> {
    let ns = input.functions().map(|f| -f.factors.iter().map(|&(j, e)| input.points[j].degree() as i64 * e).sum::<i64>());
    if ns.iter().all(|n| *n == 0) {
        return Ok(lift.units[0].constant_term().zero_like());
    }
    Ok(fun.eval(&residue_wedge(ns, lift.units.clone()))?)
}

fn support(input: &RegulatorInput) -> Vec<usize> {
    let mut v: Vec<usize> = input.functions().iter().flat_map(|f| f.factors.iter().map(|&(j, _)| j)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// The value of `fun` with its per-point summands.
pub fn regulator_breakdown(input: &RegulatorInput, fun: Functional, seed: u64) -> Result<Breakdown> {
    let k = input.validate()?;
    let lift = GlobalLift::new(input, fun.modulus(k), seed)?;
    let mut terms = Vec::new();
    for c in support(input) {
        terms.push(PointTerm { point: PointRef::Table(c), degree: input.points[c].degree(), value: finite_term(input, &lift, c, fun)? });
    }
    terms.push(PointTerm { point: PointRef::Infinity, degree: 1, value: infinity_term(input, &lift, fun)? });
    let total = terms.iter().fold(k.zero(), |acc, t| acc + t.value);
    Ok(Breakdown { total, terms })
}

/// `ρ_K(f∧g∧h) ∈ k`.
pub fn rho_k(input: &RegulatorInput, seed: u64) -> Result<Fq> {
    Ok(regulator_breakdown(input, Functional::Kontsevich, seed)?.total)
}

/// `ρ(f∧g∧h) ∈ k`.
pub fn rho(input: &RegulatorInput, seed: u64) -> Result<Fq> {
    Ok(regulator_breakdown(input, Functional::Plain, seed)?.total)
}

/// `a^p·£₁(s)` where `(γ−β)/(α−β) = s + a·s(1−s)t`.
pub fn theorem1_closed_form(alpha: &Trunc<Fq>, beta: &Trunc<Fq>, gamma: &Trunc<Fq>) -> Result<Fq> {
    for x in [alpha, beta, gamma] {
        if x.modulus() != 2 {
            return Err(RegulatorError::NotK2(x.modulus()));
        }
    }
    let (a0, b0, c0) = (alpha.constant_term(), beta.constant_term(), gamma.constant_term());
    if a0 == b0 || b0 == c0 || a0 == c0 {
        return Err(RegulatorError::DegenerateConfiguration("points coincide mod t".into()));
    }
    let r = (gamma - beta).try_div(&(alpha - beta))?;
    let s = *r.constant_term();
    let k = s.ctx();
    let a = *r.coeff(1) * (s * (k.one() - s)).inv()?;
    Ok(a.pow(k.p() as u128) * pounds1(&s))
}

/// A good lifting at one point: the uniformizer `s̃` and the three entries, in `k(z)[t]/(t^p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalLift {
    pub unif: Trunc<RatFn>,
    pub entries: [Trunc<RatFn>; 3],
}

fn resolve(input: &RegulatorInput, point: PointRef) -> Result<(PointRef, Place)> {
    match point {
        PointRef::Infinity => Ok((PointRef::Infinity, Place::Infinity)),
        PointRef::Table(i) => match input.points.get(i).ok_or(RegulatorError::UnknownPoint(i))? {
            LiftedPoint::Infinity => Ok((PointRef::Infinity, Place::Infinity)),
            pt => Ok((point, pt.place())),
        },
    }
}

/// `Tr res ω^(p)` between the global lifting and `alt` at `point`.
pub fn relift_defect(input: &RegulatorInput, seed: u64, point: PointRef, alt: &LocalLift) -> Result<Fq> {
    let k = input.validate()?;
    let lift = GlobalLift::new(input, Functional::Kontsevich.modulus(k), seed)?;
    let (_, place) = resolve(input, point)?;
    let [a, b, c] = alt.entries.clone();
    Ok(res_omega_pair(&lift.wedge(input)?, &WedgeK::triple(a, b, c), &place)?)
}

/// `ρ_K` with the summand at `point` computed from `alt` plus the defect
/// `Tr res ω^(p)` against the global lifting.
pub fn rho_k_with_local_relift(input: &RegulatorInput, seed: u64, point: PointRef, alt: &LocalLift) -> Result<Fq> {
    let (point, place) = resolve(input, point)?;
    let defect = relift_defect(input, seed, point, alt)?;
    let [a, b, c] = alt.entries.clone();
    let here = res_good(&WedgeK::triple(a, b, c), &alt.unif, &place)?.trace_ell_p()?;
    let rest = regulator_breakdown(input, Functional::Kontsevich, seed)?;
    let others = rest.terms.iter().filter(|t| t.point != point).fold(here + defect, |acc, t| acc + t.value);
    Ok(others)
}

//! Formal presentations of `Λ²` and `Λ³` of unit groups, the alternating
//! functionals `ℓ = ℓ₂∧ℓ₁` and `ℓ^(p)`, and the residue map on good triples.

use thiserror::Error;

use crate::gf::{Embedding, Fq, ResidueField};
use crate::localfield::{hensel_root, reduce_at, LocalError, Place, RatFn};
use crate::tpoly::{CoeffRing, Trunc, TruncError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WedgeError {
    #[error("expected {expected} entries per term, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("functional needs modulus at least t^{need}, got t^{got}")]
    ModulusTooSmall { need: usize, got: usize },
    #[error("functional needs modulus t^{expected}, got t^{got}")]
    ModulusMismatch { expected: usize, got: usize },
    #[error("wedge has no terms")]
    Empty,
    #[error("element is not good at the point: {0}")]
    NotGood(String),
    #[error("not a uniformizer at the point")]
    NotAUniformizer,
    #[error(transparent)]
    Trunc(#[from] TruncError),
    #[error(transparent)]
    Local(#[from] LocalError),
}

/// A formal integer combination of k-tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeK<T> {
    arity: usize,
    terms: Vec<(i64, Vec<T>)>,
}

impl<T: Clone> WedgeK<T> {
    pub fn new(arity: usize) -> WedgeK<T> {
        WedgeK { arity, terms: Vec::new() }
    }

    pub fn single(coef: i64, entries: Vec<T>) -> WedgeK<T> {
        WedgeK { arity: entries.len(), terms: vec![(coef, entries)] }
    }

    pub fn pair(a: T, b: T) -> WedgeK<T> {
        WedgeK::single(1, vec![a, b])
    }

    pub fn triple(a: T, b: T, c: T) -> WedgeK<T> {
        WedgeK::single(1, vec![a, b, c])
    }

    pub fn push(&mut self, coef: i64, entries: Vec<T>) -> Result<(), WedgeError> {
        if entries.len() != self.arity {
            return Err(WedgeError::ArityMismatch { expected: self.arity, got: entries.len() });
        }
        self.terms.push((coef, entries));
        Ok(())
    }

    pub fn extend(&mut self, o: &WedgeK<T>) -> Result<(), WedgeError> {
        for (c, e) in &o.terms {
            self.push(*c, e.clone())?;
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[(i64, Vec<T>)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, n: i64) -> WedgeK<T> {
        WedgeK { arity: self.arity, terms: self.terms.iter().map(|(c, e)| (c * n, e.clone())).collect() }
    }

    pub fn neg(&self) -> WedgeK<T> {
        self.scaled(-1)
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> WedgeK<U> {
        WedgeK {
            arity: self.arity,
            terms: self.terms.iter().map(|(c, e)| (*c, e.iter().map(&f).collect())).collect(),
        }
    }

    pub fn try_map<U, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<WedgeK<U>, E> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (c, e) in &self.terms {
            terms.push((*c, e.iter().map(&f).collect::<Result<Vec<U>, E>>()?));
        }
        Ok(WedgeK { arity: self.arity, terms })
    }
}

fn check_pairs<R: CoeffRing>(w: &WedgeK<Trunc<R>>) -> Result<&Trunc<R>, WedgeError> {
    if w.arity != 2 {
        return Err(WedgeError::ArityMismatch { expected: 2, got: w.arity });
    }
    w.terms.first().map(|(_, e)| &e[0]).ok_or(WedgeError::Empty)
}

/// `ℓ = ℓ₂∧ℓ₁` on `Λ²` of units of `R_m`, `m ≥ 3`.
pub fn ell<R: CoeffRing>(w: &WedgeK<Trunc<R>>) -> Result<R, WedgeError> {
    let first = check_pairs(w)?;
    let mut acc = first.constant_term().zero_like();
    for (c, e) in &w.terms {
        let m = e[0].modulus().min(e[1].modulus());
        if m < 3 {
            return Err(WedgeError::ModulusTooSmall { need: 3, got: m });
        }
        let a = e[0].log_circ()?;
        let b = e[1].log_circ()?;
        let v = a.coeff(2).mul(b.coeff(1)).sub(&b.coeff(2).mul(a.coeff(1)));
        acc = acc.add(&v.scale_int(*c));
    }
    Ok(acc)
}

/// `ℓ^(p) = ½ Σ_{1≤i<p} i·ℓ_{p−i}∧ℓ_i` on `Λ²` of units of `R_p`.
pub fn ell_p<R: CoeffRing>(w: &WedgeK<Trunc<R>>) -> Result<R, WedgeError> {
    let first = check_pairs(w)?;
    let k = first.constant_term().field();
    let p = k.p() as usize;
    let mut acc = first.constant_term().zero_like();
    for (c, e) in &w.terms {
        for x in e {
            if x.modulus() != p {
                return Err(WedgeError::ModulusMismatch { expected: p, got: x.modulus() });
            }
        }
        let a = e[0].log_circ()?;
        let b = e[1].log_circ()?;
        let mut s = acc.zero_like();
        for i in 1..p {
            let v = a.coeff(p - i).mul(b.coeff(i)).sub(&b.coeff(p - i).mul(a.coeff(i)));
            s = s.add(&v.scale_int(i as i64));
        }
        acc = acc.add(&s.scale_int(*c));
    }
    let half = k.from_u64(2).inv().expect("p odd");
    Ok(acc.scale(&half))
}

/// `f = unit·s̃ⁿ` with `unit` invertible at the point.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodElem {
    pub n: i64,
    pub unit: Trunc<RatFn>,
}

/// Splits `f` against the uniformizer `s̃` at the rational point `center`.
pub fn goodness_split(f: &Trunc<RatFn>, unif: &Trunc<RatFn>, center: &Fq) -> Result<GoodElem, WedgeError> {
    let f0 = f.constant_term();
    if f0.is_zero() {
        return Err(WedgeError::NotGood("reduction is zero".into()));
    }
    let s0 = unif.constant_term();
    if s0.is_zero() || s0.ord_at_point(center)? != 1 {
        return Err(WedgeError::NotAUniformizer);
    }
    let n = f0.ord_at_point(center)?;
    let unit = f.try_mul(&unif.powi(-n)?)?;
    for (i, c) in unit.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let ord = c.ord_at_point(center)?;
        if ord < 0 || (i == 0 && ord != 0) {
            return Err(WedgeError::NotGood(format!("unit part has order {ord} in t-degree {i}")));
        }
    }
    Ok(GoodElem { n, unit })
}

/// A `Λ²` residue together with the embedding of the base field into the residue field.
#[derive(Debug, Clone)]
pub struct LocalResidue {
    pub embed: Embedding,
    pub wedge: WedgeK<Trunc<Fq>>,
}

impl LocalResidue {
    /// `Tr(ℓ^(p)(·))` down to the base field.
    pub fn trace_ell_p(&self) -> Result<Fq, WedgeError> {
        Ok(self.embed.trace(&ell_p(&self.wedge)?))
    }

    pub fn trace_ell(&self) -> Result<Fq, WedgeError> {
        Ok(self.embed.trace(&ell(&self.wedge)?))
    }
}

/// `f(1/s)`.
pub fn invert_coordinate(f: &RatFn) -> RatFn {
    if f.is_zero() {
        return f.clone();
    }
    let dn = f.num().deg() as usize;
    let dd = f.den().deg() as usize;
    let n = f.num().reversed(dn);
    let d = f.den().reversed(dd);
    let (n, d) = if dd >= dn { (n.shift_up(dd - dn), d) } else { (n, d.shift_up(dn - dd)) };
    RatFn::new(n, d).expect("nonzero denominator")
}

/// `res_𝔠` of a `Λ³` of good elements: with `f = u s̃^a, g = v s̃^b, h = w s̃^c` it is
/// `a·(v̄∧w̄) − b·(ū∧w̄) + c·(ū∧v̄)`, reductions taken at the lifted point `s̃ = 0`.
pub fn res_good(
    w: &WedgeK<Trunc<RatFn>>,
    unif: &Trunc<RatFn>,
    place: &Place,
) -> Result<LocalResidue, WedgeError> {
    if w.arity != 3 {
        return Err(WedgeError::ArityMismatch { expected: 3, got: w.arity });
    }
    let base = unif.constant_term().ctx();
    let (w, unif, embed, center) = match place {
        Place::Infinity => {
            let w = w.map(|x| x.map(invert_coordinate));
            let u = unif.map(invert_coordinate);
            (w, u, Embedding::identity(base), base.zero())
        }
        Place::Finite(pl) => {
            let rf = ResidueField::new(pl).map_err(LocalError::from)?;
            let w = w.map(|x| x.base_change(&rf.embed));
            let u = unif.base_change(&rf.embed);
            (w, u, rf.embed, rf.root)
        }
    };
    let z = hensel_root(&unif, &center).map_err(|_| WedgeError::NotAUniformizer)?;
    let mut out = WedgeK::new(2);
    for (coef, e) in w.terms() {
        let mut ns = Vec::with_capacity(3);
        let mut us = Vec::with_capacity(3);
        for x in e {
            let g = goodness_split(x, &unif, &center)?;
            ns.push(g.n);
            us.push(reduce_at(&g.unit, &z)?);
        }
        out.push(coef * ns[0], vec![us[1].clone(), us[2].clone()])?;
        out.push(-coef * ns[1], vec![us[0].clone(), us[2].clone()])?;
        out.push(coef * ns[2], vec![us[0].clone(), us[1].clone()])?;
    }
    Ok(LocalResidue { embed, wedge: out })
}

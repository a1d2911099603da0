//! The comparison form `Ω^(p)`, reparametrizations `σ`, the exactness identity and
//! pair residues.

mod antider;
mod residue;
mod sigma;

pub use antider::{antider_primitive, s_coeff, SCoeff};
pub use residue::{omega_char0_defect, omega_char0_defect_coeff, res_omega_pair};
pub use sigma::{res_invariance_check, sigma_apply, sigma_decomp, taylor_apply, GeneralSigma};

use thiserror::Error;

use crate::localfield::{LocalError, OneForm, RatFn};
use crate::tpoly::{CoeffRing, Derivation, Trunc, TruncError, UnitDecomp};
use crate::wedge::{WedgeError, WedgeK};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmegaError {
    #[error("expected entries mod t^{expected}, got t^{got}")]
    ModulusMismatch { expected: usize, got: usize },
    #[error("pair entries differ mod t")]
    PairNotCongruent,
    #[error("liftings differ mod t^2")]
    NotCongruentModT2,
    #[error("weight {w} does not divide {r} or the quotient is not positive")]
    NotDivisible { w: usize, r: i64 },
    #[error("no case applies to S({a},{b},{c};{i},{j},{k}) with w = {w}")]
    CaseTableGap { a: usize, b: usize, c: usize, i: usize, j: usize, k: usize, w: usize },
    #[error("entry is not a unit")]
    NotAUnit,
    #[error("expected a Λ^{expected} element, got Λ^{got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("empty wedge")]
    Empty,
    #[error(transparent)]
    Trunc(#[from] TruncError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
}

/// `ē^{αt^a}` for `a ≥ 1`, or a unit `α` of `R` when `a = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Letter<R> {
    pub a: usize,
    pub payload: R,
}

/// The letters of the canonical decomposition, zero exponents dropped.
pub fn letters<R: CoeffRing>(d: &UnitDecomp<R>) -> Vec<Letter<R>> {
    let mut v = vec![Letter { a: 0, payload: d.a0.clone() }];
    for (i, x) in d.exps.iter().enumerate() {
        if !x.is_zero() {
            v.push(Letter { a: i + 1, payload: x.clone() });
        }
    }
    v
}

fn dlog<R: Derivation>(u: &R) -> Result<R, OmegaError> {
    Ok(u.derive().mul(&u.inv().ok_or(OmegaError::NotAUnit)?))
}

/// A letter with its differential: `dα`, or `dα₀/α₀` for `a = 0`.
struct Prepared<R> {
    a: usize,
    v: R,
    d: R,
}

fn prepare<R: Derivation>(d: &UnitDecomp<R>) -> Result<Vec<Prepared<R>>, OmegaError> {
    letters(d)
        .into_iter()
        .map(|l| {
            let d = if l.a == 0 { dlog(&l.payload)? } else { l.payload.derive() };
            Ok(Prepared { a: l.a, v: l.payload, d })
        })
        .collect()
}

fn omega_triple<R: Derivation>(x: [&Prepared<R>; 3], p: usize) -> Option<R> {
    if x[0].a + x[1].a + x[2].a != p {
        return None;
    }
    let mut idx = [0usize, 1, 2];
    let mut sign = 1i64;
    for i in 0..3 {
        for j in 0..2 - i {
            if x[idx[j]].a < x[idx[j + 1]].a {
                idx.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    let (u, v, w) = (x[idx[0]], x[idx[1]], x[idx[2]]);
    let (a, b, c) = (u.a as i64, v.a as i64, w.a as i64);
    let val = if a > b {
        let t1 = v.v.mul(&w.d).scale_int(b);
        let t2 = if c == 0 { t1.zero_like() } else { w.v.mul(&v.d).scale_int(c) };
        u.v.mul(&t1.sub(&t2))
    } else {
        assert!(c > 0, "a = b > c = 0 cannot sum to an odd prime");
        let t = u.v.mul(&v.d).scale_int(a).sub(&v.v.mul(&u.d).scale_int(b));
        w.v.mul(&t)
    };
    Some(val.scale_int(sign))
}

/// The coefficient of `ds` in `Ω^(p)(u∧v∧w)` for decomposed units of `R_p`.
pub fn omega_decomp<R: Derivation>(d: [&UnitDecomp<R>; 3]) -> Result<R, OmegaError> {
    let p = d[0].a0.field().p() as usize;
    for x in d {
        if x.modulus() != p {
            return Err(OmegaError::ModulusMismatch { expected: p, got: x.modulus() });
        }
    }
    let ls = [prepare(d[0])?, prepare(d[1])?, prepare(d[2])?];
    let mut acc = d[0].a0.zero_like();
    for x in &ls[0] {
        for y in &ls[1] {
            if x.a + y.a > p {
                continue;
            }
            for z in &ls[2] {
                if let Some(v) = omega_triple([x, y, z], p) {
                    acc = acc.add(&v);
                }
            }
        }
    }
    Ok(acc)
}

fn check_arity<T: Clone>(w: &WedgeK<T>) -> Result<(), OmegaError> {
    if w.arity() != 3 {
        return Err(OmegaError::ArityMismatch { expected: 3, got: w.arity() });
    }
    if w.is_empty() {
        return Err(OmegaError::Empty);
    }
    Ok(())
}

/// `Ω^(p)` on `Λ³` of units of `R_p`, as the coefficient of `ds`.
pub fn omega_p_coeff<R: Derivation>(w: &WedgeK<Trunc<R>>) -> Result<R, OmegaError> {
    check_arity(w)?;
    let mut acc = w.terms()[0].1[0].constant_term().zero_like();
    for (c, e) in w.terms() {
        let d = [e[0].unit_decompose()?, e[1].unit_decompose()?, e[2].unit_decompose()?];
        acc = acc.add(&omega_decomp([&d[0], &d[1], &d[2]])?.scale_int(*c));
    }
    Ok(acc)
}

/// `Ω^(p)` on `Λ³` of units of `F_q(s)_p`.
pub fn omega_p(w: &WedgeK<Trunc<RatFn>>) -> Result<OneForm, OmegaError> {
    Ok(OneForm::new(omega_p_coeff(w)?))
}

/// `Λ³π₁ − Λ³π₂` on a wedge of pairs congruent mod `t`.
pub fn split_pairs<R: CoeffRing>(
    w: &WedgeK<(Trunc<R>, Trunc<R>)>,
) -> Result<WedgeK<Trunc<R>>, OmegaError> {
    check_arity(w)?;
    let mut out = WedgeK::new(3);
    for (c, e) in w.terms() {
        for (x, y) in e {
            if x.constant_term() != y.constant_term() {
                return Err(OmegaError::PairNotCongruent);
            }
        }
        out.push(*c, e.iter().map(|(x, _)| x.clone()).collect())?;
        out.push(-c, e.iter().map(|(_, y)| y.clone()).collect())?;
    }
    Ok(out)
}

/// `Ω̃^(p) = Ω^(p)∘(Λ³π₁ − Λ³π₂)`.
pub fn omega_p_pair(w: &WedgeK<(Trunc<RatFn>, Trunc<RatFn>)>) -> Result<OneForm, OmegaError> {
    omega_p(&split_pairs(w)?)
}

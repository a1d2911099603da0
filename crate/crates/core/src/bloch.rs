//! Bloch-group symbols over truncated rings, the five-term relation, `δ`, `£₁`
//! and the additive dilogarithms `ℓi₂` and `ℓi₂^(p)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf::Fq;
use crate::tpoly::{CoeffRing, Trunc, TruncError};
use crate::wedge::{ell, ell_p, WedgeError, WedgeK};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlochError {
    #[error("generator x does not satisfy x(1 - x) invertible")]
    NotFlat,
    #[error("x - y is not a unit")]
    DifferenceNotUnit,
    #[error("lift is not flat or does not reduce to the generator")]
    LiftNotFlat,
    #[error("expected generators mod t^{expected}, got t^{got}")]
    ModulusMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Trunc(#[from] TruncError),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
}

/// `x ∈ R^♭`, i.e. `x(1−x)` is a unit.
pub fn flat_check<R: CoeffRing>(x: &Trunc<R>) -> bool {
    let c = x.constant_term();
    c.mul(&c.one_like().sub(c)).inv().is_some()
}

/// A formal combination `Σ n_i [x_i]` of flat generators.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochSym<R> {
    terms: Vec<(i64, Trunc<R>)>,
}

impl<R: CoeffRing> Default for BlochSym<R> {
    fn default() -> Self {
        BlochSym { terms: Vec::new() }
    }
}

impl<R: CoeffRing> BlochSym<R> {
    pub fn new() -> BlochSym<R> {
        BlochSym::default()
    }

    /// The symbol `[x]`.
    pub fn gen(x: Trunc<R>) -> Result<BlochSym<R>, BlochError> {
        let mut b = BlochSym::new();
        b.push(1, x)?;
        Ok(b)
    }

    pub fn push(&mut self, coef: i64, x: Trunc<R>) -> Result<(), BlochError> {
        if !flat_check(&x) {
            return Err(BlochError::NotFlat);
        }
        self.terms.push((coef, x));
        Ok(())
    }

    pub fn terms(&self) -> &[(i64, Trunc<R>)] {
        &self.terms
    }

    pub fn add(&self, o: &BlochSym<R>) -> BlochSym<R> {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        BlochSym { terms }
    }

    pub fn scaled(&self, n: i64) -> BlochSym<R> {
        BlochSym { terms: self.terms.iter().map(|(c, x)| (c * n, x.clone())).collect() }
    }

    /// Substitution `t ↦ λt` in every generator.
    pub fn scale_t(&self, lambda: &Fq) -> BlochSym<R> {
        BlochSym { terms: self.terms.iter().map(|(c, x)| (*c, x.scale_t(lambda))).collect() }
    }

    fn check_modulus(&self, m: usize) -> Result<(), BlochError> {
        for (_, x) in &self.terms {
            if x.modulus() != m {
                return Err(BlochError::ModulusMismatch { expected: m, got: x.modulus() });
            }
        }
        Ok(())
    }
}

/// `[x] − [y] + [y/x] − [(1−x⁻¹)/(1−y⁻¹)] + [(1−x)/(1−y)]`.
pub fn five_term<R: CoeffRing>(x: &Trunc<R>, y: &Trunc<R>) -> Result<BlochSym<R>, BlochError> {
    if !flat_check(x) || !flat_check(y) {
        return Err(BlochError::NotFlat);
    }
    if !x.try_sub(y)?.is_unit() {
        return Err(BlochError::DifferenceNotUnit);
    }
    let one = x.one_like();
    let xi = x.inv()?;
    let yi = y.inv()?;
    let mut b = BlochSym::new();
    b.push(1, x.clone())?;
    b.push(-1, y.clone())?;
    b.push(1, &yi.inv()? * &xi)?;
    b.push(-1, (&one - &xi).try_div(&(&one - &yi))?)?;
    b.push(1, (&one - x).try_div(&(&one - y))?)?;
    Ok(b)
}

/// `δ[x] = (1−x)∧x`, extended linearly.
pub fn delta<R: CoeffRing>(b: &BlochSym<R>) -> Result<WedgeK<Trunc<R>>, BlochError> {
    let mut w = WedgeK::new(2);
    for (c, x) in &b.terms {
        if !flat_check(x) {
            return Err(BlochError::NotFlat);
        }
        w.push(*c, vec![&x.one_like() - x, x.clone()])?;
    }
    Ok(w)
}

/// `£₁(s) = Σ_{1≤i≤p−1} s^i/i`.
pub fn pounds1<R: CoeffRing>(s: &R) -> R {
    let k = s.field();
    let p = k.p();
    let mut acc = s.zero_like();
    let mut pw = s.one_like();
    for i in 1..p {
        pw = pw.mul(s);
        acc = acc.add(&pw.scale(&k.from_u64(i).inv().expect("i < p")));
    }
    acc
}

fn zero_of<R: CoeffRing>(b: &BlochSym<R>) -> Option<R> {
    b.terms.first().map(|(_, x)| x.constant_term().zero_like())
}

/// `ℓi₂([s + at]) = −a³/(2s²(1−s)²)` on `B₂(R₂)`; the empty symbol gives `None`.
pub fn li2<R: CoeffRing>(b: &BlochSym<R>) -> Result<Option<R>, BlochError> {
    b.check_modulus(2)?;
    let Some(mut acc) = zero_of(b) else { return Ok(None) };
    for (c, x) in &b.terms {
        let s = x.coeff(0);
        let a = x.coeff(1);
        let d = s.mul(&s.one_like().sub(s));
        let den = d.mul(&d).scale_int(2).inv().ok_or(BlochError::NotFlat)?;
        let v = a.pow(3).mul(&den).neg();
        acc = acc.add(&v.scale_int(*c));
    }
    Ok(Some(acc))
}

/// `ℓi₂^(p)([s + αt]) = α^p/(s^p(1−s)^p)·£₁(s)` on `B₂(R₂)`.
pub fn li2p<R: CoeffRing>(b: &BlochSym<R>) -> Result<Option<R>, BlochError> {
    b.check_modulus(2)?;
    let Some(mut acc) = zero_of(b) else { return Ok(None) };
    let p = acc.field().p();
    for (c, x) in &b.terms {
        let s = x.coeff(0);
        let a = x.coeff(1);
        let d = s.mul(&s.one_like().sub(s)).pow(p).inv().ok_or(BlochError::NotFlat)?;
        let v = a.pow(p).mul(&d).mul(&pounds1(s));
        acc = acc.add(&v.scale_int(*c));
    }
    Ok(Some(acc))
}

fn via_lift<R: CoeffRing>(
    b: &BlochSym<R>,
    m: usize,
    mut lift: impl FnMut(&Trunc<R>) -> Trunc<R>,
    functional: impl Fn(&WedgeK<Trunc<R>>) -> Result<R, WedgeError>,
) -> Result<Option<R>, BlochError> {
    b.check_modulus(2)?;
    if b.terms.is_empty() {
        return Ok(None);
    }
    let mut lifted = BlochSym::new();
    for (c, x) in &b.terms {
        let y = lift(x);
        if y.modulus() != m || y.reduce_to(2)? != *x || !flat_check(&y) {
            return Err(BlochError::LiftNotFlat);
        }
        lifted.push(*c, y)?;
    }
    Ok(Some(functional(&delta(&lifted)?)?))
}

/// `ℓ∘δ` after lifting every generator to `R₃` with the supplied lift.
pub fn li2_via_lift_with<R: CoeffRing>(
    b: &BlochSym<R>,
    lift: impl FnMut(&Trunc<R>) -> Trunc<R>,
) -> Result<Option<R>, BlochError> {
    via_lift(b, 3, lift, ell)
}

/// `ℓ^(p)∘δ` after lifting every generator to `R_p` with the supplied lift.
pub fn li2p_via_lift_with<R: CoeffRing>(
    b: &BlochSym<R>,
    lift: impl FnMut(&Trunc<R>) -> Trunc<R>,
) -> Result<Option<R>, BlochError> {
    let p = match b.terms.first() {
        Some((_, x)) => x.constant_term().field().p() as usize,
        None => return Ok(None),
    };
    via_lift(b, p, lift, ell_p)
}

fn random_lift(x: &Trunc<Fq>, m: usize, rng: &mut ChaCha8Rng) -> Trunc<Fq> {
    let k = x.constant_term().ctx();
    let fill: Vec<Fq> = (x.modulus()..m).map(|_| k.random(rng)).collect();
    x.extend_with(&fill)
}

/// `ℓi₂` through a seeded random lift to `k₃`.
pub fn li2_via_lift(b: &BlochSym<Fq>, seed: u64) -> Result<Option<Fq>, BlochError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    li2_via_lift_with(b, |x| random_lift(x, 3, &mut rng))
}

/// `ℓi₂^(p)` through a seeded random lift to `k_p`.
pub fn li2p_via_lift(b: &BlochSym<Fq>, seed: u64) -> Result<Option<Fq>, BlochError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = match b.terms.first() {
        Some((_, x)) => x.constant_term().ctx().p() as usize,
        None => return Ok(None),
    };
    li2p_via_lift_with(b, |x| random_lift(x, p, &mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{FieldCtx, Poly};
    use crate::localfield::RatFn;

    #[test]
    fn flat_examples() {
        let k = FieldCtx::prime(5).unwrap();
        assert!(flat_check(&Trunc::from_i64s(k, &[2, 0])));
        assert!(!flat_check(&Trunc::from_i64s(k, &[1, 3])));
        assert!(!flat_check(&Trunc::from_i64s(k, &[0, 3])));
        let s = RatFn::s(k);
        let a = RatFn::from_poly(Poly::from_i64s(k, &[1, 1]));
        assert!(flat_check(&Trunc::new(vec![s, a]).unwrap()));
    }

    #[test]
    fn pounds1_examples() {
        for p in [5u64, 7, 11] {
            let k = FieldCtx::prime(p).unwrap();
            assert!(pounds1(&k.zero()).is_zero());
            assert!(pounds1(&k.one()).is_zero());
        }
        let k = FieldCtx::prime(5).unwrap();
        let two = k.from_u64(2);
        let mut direct = k.zero();
        for i in 1..5u64 {
            direct += two.pow(i as u128) * k.from_u64(i).inv().unwrap();
        }
        assert_eq!(pounds1(&two), direct);
    }

    #[test]
    fn zero_slope_vanishes() {
        let k = FieldCtx::prime(7).unwrap();
        let b = BlochSym::gen(Trunc::from_i64s(k, &[3, 0])).unwrap();
        assert!(li2(&b).unwrap().unwrap().is_zero());
        assert!(li2p(&b).unwrap().unwrap().is_zero());
    }

    #[test]
    fn closed_forms_match_lifts() {
        let k = FieldCtx::prime(7).unwrap();
        let b = BlochSym::gen(Trunc::from_i64s(k, &[3, 4])).unwrap();
        for seed in 0..5 {
            assert_eq!(li2(&b).unwrap(), li2_via_lift(&b, seed).unwrap());
            assert_eq!(li2p(&b).unwrap(), li2p_via_lift(&b, seed).unwrap());
        }
    }

    #[test]
    fn delta_linear() {
        let k = FieldCtx::prime(5).unwrap();
        let x = Trunc::from_i64s(k, &[2, 1, 3, 0, 1]);
        let b = BlochSym::gen(x.clone()).unwrap();
        let w2 = delta(&b.add(&b)).unwrap();
        let w = delta(&b).unwrap();
        assert_eq!(ell_p(&w2).unwrap(), ell_p(&w.scaled(2)).unwrap());
        assert_eq!(w.terms()[0].1, vec![&x.one_like() - &x, x]);
    }
}

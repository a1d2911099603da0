use crate::localfield::{OneForm, Place, RatFn};
use crate::tpoly::{CoeffRing, Derivation, Trunc, UnitDecomp};
use crate::wedge::WedgeK;

use super::{omega_decomp, OmegaError};

/// Successive derivatives `y, y', …, y^{(n−1)}`.
fn derivatives<R: Derivation>(y: &R, n: usize) -> Vec<R> {
    let mut v = Vec::with_capacity(n);
    let mut cur = y.clone();
    for _ in 0..n {
        let next = cur.derive();
        v.push(cur);
        cur = next;
    }
    v
}

fn powers<R: Derivation>(x: &R, n: usize) -> Vec<R> {
    let mut v = Vec::with_capacity(n);
    let mut cur = x.one_like();
    for _ in 0..n {
        let next = cur.mul(x);
        v.push(cur);
        cur = next;
    }
    v
}

/// `s ↦ s + x·t^w` on an arbitrary element, by the truncated Taylor formula.
pub fn taylor_apply<R: Derivation>(x: &R, w: usize, g: &Trunc<R>) -> Trunc<R> {
    assert!(w >= 1, "weight must be positive");
    let m = g.modulus();
    let k = x.field();
    let xp = powers(x, m);
    let mut out = g.zero_like().into_coeffs();
    for (j, gj) in g.coeffs().iter().enumerate() {
        if gj.is_zero() {
            continue;
        }
        let n_max = (m - 1 - j) / w + 1;
        for (i, d) in derivatives(gj, n_max).iter().enumerate() {
            let n = j + i * w;
            out[n] = out[n].add(&xp[i].mul(d).scale(&k.inv_factorial(i)));
        }
    }
    Trunc::new(out).expect("nonempty")
}

/// `σ` on a decomposed unit: each letter `ē^{αt^a}` becomes `∏ ē^{x^iα^{(i)}/i!·t^{a+iw}}`,
/// with `α^{(i)} = (α₀'/α₀)^{(i−1)}` for the constant letter.
pub fn sigma_decomp<R: Derivation>(x: &R, w: usize, d: &UnitDecomp<R>) -> Result<UnitDecomp<R>, OmegaError> {
    assert!(w >= 1, "weight must be positive");
    let m = d.modulus();
    let k = x.field();
    let xp = powers(x, m);
    let mut exps = d.exps.clone();
    let mut spread = |a: usize, first: usize, ders: &[R]| {
        for (i, der) in ders.iter().enumerate() {
            let i = i + first;
            let n = a + i * w;
            if n >= m {
                break;
            }
            exps[n - 1] = exps[n - 1].add(&xp[i].mul(der).scale(&k.inv_factorial(i)));
        }
    };
    if w < m {
        let g = d.a0.derive().mul(&d.a0.inv().ok_or(OmegaError::NotAUnit)?);
        spread(0, 1, &derivatives(&g, (m - 1) / w));
    }
    for (idx, alpha) in d.exps.iter().enumerate() {
        let a = idx + 1;
        if alpha.is_zero() || a + w >= m {
            continue;
        }
        let ders = derivatives(alpha, (m - 1 - a) / w + 1);
        spread(a, 1, &ders[1..]);
    }
    Ok(UnitDecomp { a0: d.a0.clone(), exps })
}

/// `σ(u)` for `σ(s) = s + x·t^w`.
pub fn sigma_apply<R: Derivation>(x: &R, w: usize, u: &Trunc<R>) -> Result<Trunc<R>, OmegaError> {
    Ok(sigma_decomp(x, w, &u.unit_decompose()?)?.recompose()?)
}

/// `σ(s) = s + Σ_{1≤w} x_w t^w`, stored as `xs[w−1] = x_w`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralSigma<R> {
    pub xs: Vec<R>,
}

impl<R: Derivation> GeneralSigma<R> {
    pub fn new(xs: Vec<R>) -> GeneralSigma<R> {
        GeneralSigma { xs }
    }

    /// `y_1, …, y_{m−1}` with `σ ≡ τ_{m−1}∘…∘τ_1 mod t^m`, `τ_w(s) = s + y_w t^w`.
    pub fn factors(&self, s: &R, m: usize) -> Vec<R> {
        let zero = s.zero_like();
        let mut img = Trunc::constant(s.clone(), m);
        let mut ys = Vec::with_capacity(m.saturating_sub(1));
        for w in 1..m {
            let x = self.xs.get(w - 1).unwrap_or(&zero);
            let y = x.sub(img.coeff(w));
            img = taylor_apply(&y, w, &img);
            ys.push(y);
        }
        ys
    }

    pub fn apply_decomp(&self, s: &R, d: &UnitDecomp<R>) -> Result<UnitDecomp<R>, OmegaError> {
        let mut cur = d.clone();
        for (i, y) in self.factors(s, d.modulus()).iter().enumerate() {
            if !y.is_zero() {
                cur = sigma_decomp(y, i + 1, &cur)?;
            }
        }
        Ok(cur)
    }

    pub fn apply(&self, s: &R, u: &Trunc<R>) -> Result<Trunc<R>, OmegaError> {
        Ok(self.apply_decomp(s, &u.unit_decompose()?)?.recompose()?)
    }
}

/// `res_{s=0} Ω^(p)(σ(w3)) = res_{s=0} Ω^(p)(w3)`.
pub fn res_invariance_check(sigma: &GeneralSigma<RatFn>, w3: &WedgeK<Trunc<RatFn>>) -> Result<bool, OmegaError> {
    if w3.arity() != 3 {
        return Err(OmegaError::ArityMismatch { expected: 3, got: w3.arity() });
    }
    let Some((_, first)) = w3.terms().first() else { return Ok(true) };
    let k = first[0].constant_term().ctx();
    let s = RatFn::s(k);
    let mut before = RatFn::zero(k);
    let mut after = RatFn::zero(k);
    for (c, e) in w3.terms() {
        let d: Vec<UnitDecomp<RatFn>> = e.iter().map(|x| x.unit_decompose()).collect::<Result<_, _>>()?;
        let sd: Vec<UnitDecomp<RatFn>> = d.iter().map(|x| sigma.apply_decomp(&s, x)).collect::<Result<_, _>>()?;
        before = before.add(&omega_decomp([&d[0], &d[1], &d[2]])?.scale_int(*c));
        after = after.add(&omega_decomp([&sd[0], &sd[1], &sd[2]])?.scale_int(*c));
    }
    let origin = Place::rational(k.zero());
    Ok(OneForm::new(after).residue_at(&origin)? == OneForm::new(before).residue_at(&origin)?)
}

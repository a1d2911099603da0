use crate::gf::Fq;
use crate::localfield::{OneForm, Place, RatFn};
use crate::tpoly::{CoeffRing, Derivation, Trunc};
use crate::wedge::WedgeK;

use super::{omega_p_coeff, OmegaError};

fn congruent_mod_t2<R: CoeffRing>(x: &Trunc<R>, y: &Trunc<R>) -> bool {
    x.modulus() >= 2 && y.modulus() >= 2 && x.coeff(0) == y.coeff(0) && x.coeff(1) == y.coeff(1)
}

/// `Tr res(Ω^(p)(q̃) − Ω^(p)(q̂))` at `place`, both liftings realized in one coordinate `s`.
/// The wedges must match term by term with entries congruent mod `t²`.
pub fn res_omega_pair(
    qtilde: &WedgeK<Trunc<RatFn>>,
    qhat: &WedgeK<Trunc<RatFn>>,
    place: &Place,
) -> Result<Fq, OmegaError> {
    if qtilde.terms().len() != qhat.terms().len() {
        return Err(OmegaError::NotCongruentModT2);
    }
    for ((c1, e1), (c2, e2)) in qtilde.terms().iter().zip(qhat.terms()) {
        if c1 != c2 || e1.len() != e2.len() || !e1.iter().zip(e2).all(|(x, y)| congruent_mod_t2(x, y)) {
            return Err(OmegaError::NotCongruentModT2);
        }
    }
    if qtilde.is_empty() {
        return Err(OmegaError::Empty);
    }
    let form = OneForm::new(omega_p_coeff(qtilde)?.sub(&omega_p_coeff(qhat)?));
    Ok(form.residue_trace(place)?)
}

/// `Σ_{σ∈S₃} (−1)^σ α_{1σ(1)}(α̃_{2σ(3)} − α̂_{2σ(3)})·dlog α_{0σ(2)}` as the coefficient of `ds`.
pub fn omega_char0_defect_coeff<R: Derivation>(qtilde: &[Trunc<R>; 3], qhat: &[Trunc<R>; 3]) -> Result<R, OmegaError> {
    let mut a0 = Vec::with_capacity(3);
    let mut a1 = Vec::with_capacity(3);
    let mut diff = Vec::with_capacity(3);
    for (x, y) in qtilde.iter().zip(qhat) {
        for z in [x, y] {
            if z.modulus() != 3 {
                return Err(OmegaError::ModulusMismatch { expected: 3, got: z.modulus() });
            }
        }
        if !congruent_mod_t2(x, y) {
            return Err(OmegaError::NotCongruentModT2);
        }
        let dx = x.unit_decompose()?;
        let dy = y.unit_decompose()?;
        let u = &dx.a0;
        a0.push(u.derive().mul(&u.inv().ok_or(OmegaError::NotAUnit)?));
        a1.push(dx.exps[0].clone());
        diff.push(dx.exps[1].sub(&dy.exps[1]));
    }
    const PERMS: [([usize; 3], i64); 6] =
        [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([1, 0, 2], -1), ([0, 2, 1], -1), ([2, 1, 0], -1)];
    let mut acc = a0[0].zero_like();
    for (s, sign) in PERMS {
        let t = a1[s[0]].mul(&diff[s[2]]).mul(&a0[s[1]]);
        acc = acc.add(&t.scale_int(sign));
    }
    Ok(acc)
}

/// The defect form `Ω(q̃, q̂)` for triples of units of `F_q(s)_3` congruent mod `t²`.
pub fn omega_char0_defect(qtilde: &[Trunc<RatFn>; 3], qhat: &[Trunc<RatFn>; 3]) -> Result<OneForm, OmegaError> {
    Ok(OneForm::new(omega_char0_defect_coeff(qtilde, qhat)?))
}

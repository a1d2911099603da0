use crate::gf::{FieldCtx, Fq};
use crate::tpoly::Derivation;

use super::OmegaError;

/// Arguments of `S(a,b,c;i,j,k)` at weight `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SCoeff {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub w: usize,
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl SCoeff {
    fn tilde(&self) -> (usize, usize, usize) {
        (self.a + self.i * self.w, self.b + self.j * self.w, self.c + self.k * self.w)
    }

    fn rotate(&self) -> SCoeff {
        SCoeff { a: self.c, b: self.a, c: self.b, w: self.w, i: self.k, j: self.i, k: self.j }
    }

    fn swap(&self) -> SCoeff {
        SCoeff { a: self.b, b: self.a, c: self.c, w: self.w, i: self.j, j: self.i, k: self.k }
    }

    fn gap(&self) -> OmegaError {
        OmegaError::CaseTableGap { a: self.a, b: self.b, c: self.c, i: self.i, j: self.j, k: self.k, w: self.w }
    }
}

fn base(ctx: &'static FieldCtx, sc: &SCoeff) -> Fq {
    let num = ctx.from_i64(sc.b as i64 * sc.k as i64 - sc.c as i64 * sc.j as i64);
    num * ctx.inv_factorial(sc.i) * ctx.inv_factorial(sc.j) * ctx.inv_factorial(sc.k)
}

/// `S(a,b,c;i,j,k)` by the case table.
pub fn s_coeff(ctx: &'static FieldCtx, sc: &SCoeff) -> Result<Fq, OmegaError> {
    s_inner(ctx, sc, 2)
}

fn s_inner(ctx: &'static FieldCtx, sc: &SCoeff, depth: u8) -> Result<Fq, OmegaError> {
    let (a, b, c) = sc.tilde();
    if a > b.max(c) || (b == c && b > a) {
        return Ok(base(ctx, sc));
    }
    if depth == 0 {
        return Err(sc.gap());
    }
    if b > a.max(c) || (a == c && a > b) {
        return Ok(-s_inner(ctx, &sc.swap(), depth - 1)?);
    }
    if c > a.max(b) || (a == b && a > c) {
        return s_inner(ctx, &sc.rotate(), depth - 1);
    }
    Err(sc.gap())
}

/// `α^{(0)}, …, α^{(n)}`; for an exponent-0 slot the payload is the unit `f` and the
/// order-`i` entry is `(f'/f)^{(i−1)}`, order 0 being absent.
fn slot_derivatives<R: Derivation>(exp: usize, v: &R, n: usize) -> Result<Vec<Option<R>>, OmegaError> {
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = if exp == 0 {
        out.push(None);
        v.derive().mul(&v.inv().ok_or(OmegaError::NotAUnit)?)
    } else {
        v.clone()
    };
    while out.len() <= n {
        let next = cur.derive();
        out.push(Some(cur));
        cur = next;
    }
    Ok(out)
}

/// `Σ_{i+j+k=q} (x^q/q)·S(a,b,c;i,j,k)·α^{(i)}β^{(j)}γ^{(k)}` with `q = (p−(a+b+c))/w`.
#[allow(clippy::too_many_arguments)]
pub fn antider_primitive<R: Derivation>(
    a: usize,
    b: usize,
    c: usize,
    w: usize,
    x: &R,
    alpha: &R,
    beta: &R,
    gamma: &R,
) -> Result<R, OmegaError> {
    let ctx = x.field();
    let p = ctx.p() as usize;
    let r = p as i64 - (a + b + c) as i64;
    if w == 0 || r <= 0 || r % w as i64 != 0 {
        return Err(OmegaError::NotDivisible { w, r });
    }
    let q = r as usize / w;
    let da = slot_derivatives(a, alpha, q)?;
    let db = slot_derivatives(b, beta, q)?;
    let dc = slot_derivatives(c, gamma, q)?;
    let mut acc = x.zero_like();
    for i in 0..=q {
        for j in 0..=q - i {
            let k = q - i - j;
            let sc = SCoeff { a, b, c, w, i, j, k };
            let s = s_coeff(ctx, &sc)?;
            if s.is_zero() {
                continue;
            }
            let (Some(u), Some(v), Some(t)) = (&da[i], &db[j], &dc[k]) else {
                return Err(sc.gap());
            };
            acc = acc.add(&u.mul(v).mul(t).scale(&s));
        }
    }
    let qi = ctx.from_u64(q as u64).inv().map_err(crate::localfield::LocalError::from)?;
    Ok(acc.mul(&x.pow(q as u64)).scale(&qi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn admissible(p: usize) -> Vec<SCoeff> {
        let mut v = Vec::new();
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for w in 1..p {
                        let r = p as i64 - (a + b + c) as i64;
                        if r <= 0 || r % w as i64 != 0 {
                            continue;
                        }
                        let q = r as usize / w;
                        for i in 0..=q {
                            for j in 0..=q - i {
                                v.push(SCoeff { a, b, c, w, i, j, k: q - i - j });
                            }
                        }
                    }
                }
            }
        }
        v
    }

    #[test]
    fn antisymmetric_sweep() {
        let ctx = FieldCtx::prime(5).unwrap();
        for sc in admissible(5) {
            let s = s_coeff(ctx, &sc).unwrap();
            assert_eq!(s, -s_coeff(ctx, &sc.swap()).unwrap(), "{sc:?}");
            assert_eq!(s, s_coeff(ctx, &sc.rotate()).unwrap(), "{sc:?}");
            if sc.k == 0 && sc.c == 0 {
                assert!(s.is_zero(), "{sc:?}");
            }
        }
    }

    #[test]
    fn leading_branch() {
        let ctx = FieldCtx::prime(7).unwrap();
        let sc = SCoeff { a: 3, b: 1, c: 0, w: 1, i: 1, j: 1, k: 1 };
        assert_eq!(s_coeff(ctx, &sc).unwrap(), ctx.from_i64(1));
        let sc = SCoeff { a: 2, b: 1, c: 2, w: 1, i: 0, j: 1, k: 1 };
        assert_eq!(s_coeff(ctx, &sc).unwrap(), ctx.from_i64(2));
    }

    #[test]
    fn bad_weight() {
        let k = FieldCtx::prime(5).unwrap();
        let one = k.one();
        assert_eq!(
            antider_primitive(1, 1, 1, 3, &one, &one, &one, &one),
            Err(OmegaError::NotDivisible { w: 3, r: 2 })
        );
        assert!(antider_primitive(2, 2, 1, 1, &one, &one, &one, &one).is_err());
    }
}

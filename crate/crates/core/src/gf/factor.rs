use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Fq, GfError, Poly};

/// `f = unit · ∏ factor^mult` with monic irreducible factors in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fq,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(self.unit);
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e as u64);
        }
        acc
    }
}

/// Squarefree decomposition of a monic polynomial: `f = ∏ g_i^{i}` with `g_i` squarefree.
pub fn squarefree(f: &Poly) -> Vec<(Poly, usize)> {
    let ctx = f.ctx();
    let p = ctx.p() as usize;
    let f = f.monic();
    let mut out = Vec::new();
    if f.deg() <= 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).expect("gcd divides");
        if fac.deg() > 0 {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w).expect("gcd divides");
        i += 1;
    }
    if !c.is_one() {
        // c is a p-th power
        let root: Vec<Fq> = c
            .coeffs()
            .iter()
            .step_by(p)
            .map(|x| x.frobenius_inv())
            .collect();
        let root = Poly::new(ctx, root);
        for (g, e) in squarefree(&root) {
            out.push((g, e * p));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of equal degree.
pub fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let ctx = f.ctx();
    let q = ctx.order() as u128;
    let x = Poly::x(ctx);
    let mut rest = f.monic();
    let mut h = x.rem(&rest).unwrap_or_else(|_| x.clone());
    let mut out = Vec::new();
    let mut i = 1;
    while rest.deg() >= 2 * i as i64 {
        h = h.pow_mod(q, &rest);
        let g = rest.gcd(&(&h - &x));
        if !g.is_one() {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest).expect("nonzero");
            out.push((g, i));
        }
        i += 1;
    }
    if rest.deg() > 0 {
        let d = rest.deg() as usize;
        out.push((rest, d));
    }
    out
}

/// Cantor–Zassenhaus splitting of a squarefree monic product of degree-`d` irreducibles.
pub fn equal_degree<R: Rng>(f: &Poly, d: usize, rng: &mut R) -> Vec<Poly> {
    let n = f.deg() as usize;
    if n == d {
        return vec![f.monic()];
    }
    let ctx = f.ctx();
    let exp = ((ctx.order() as u128).pow(d as u32) - 1) / 2;
    loop {
        let a = Poly::new(ctx, (0..n).map(|_| ctx.random(rng)).collect());
        if a.deg() <= 0 {
            continue;
        }
        let mut g = a.gcd(f);
        if g.is_one() {
            let b = &a.pow_mod(exp, f) - &Poly::one(ctx);
            g = b.gcd(f);
        }
        if g.deg() > 0 && g.deg() < n as i64 {
            let h = f.div_exact(&g).expect("gcd divides");
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

pub fn factor_with_seed(f: &Poly, seed: u64) -> Result<Factorization, GfError> {
    if f.is_zero() {
        return Err(GfError::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = f.lead();
    let mut factors = Vec::new();
    for (g, e) in squarefree(f) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree(&h, d, &mut rng) {
                factors.push((irr, e));
            }
        }
    }
    factors.sort_by_key(|(g, e)| (g.sort_key(), *e));
    Ok(Factorization { unit, factors })
}

/// Factorization into monic irreducibles; the result does not depend on the seed.
pub fn factor(f: &Poly) -> Result<Factorization, GfError> {
    factor_with_seed(f, 0)
}

/// Distinct roots in the coefficient field, sorted by [`Fq::key`].
pub fn roots(f: &Poly) -> Result<Vec<Fq>, GfError> {
    let fac = factor(f)?;
    let mut r: Vec<Fq> = fac
        .factors
        .iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| -g.coeff(0))
        .collect();
    r.sort_by_key(|x| x.key());
    Ok(r)
}

pub fn is_irreducible(f: &Poly) -> bool {
    if f.deg() < 1 {
        return false;
    }
    if f.deg() == 1 {
        return true;
    }
    let g = f.monic();
    if !g.gcd(&g.derivative()).is_one() {
        return false;
    }
    let dd = distinct_degree(&g);
    dd.len() == 1 && dd[0].1 == g.deg() as usize
}

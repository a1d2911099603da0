use super::{factor::roots, FieldCtx, Fq, GfError, Poly, MAX_DEGREE};

/// A field embedding `from ↪ to`, fixed by the image of the generator of `from`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Embedding {
    from: &'static FieldCtx,
    to: &'static FieldCtx,
    gen_image: Fq,
}

impl Embedding {
    pub fn identity(k: &'static FieldCtx) -> Embedding {
        Embedding { from: k, to: k, gen_image: k.generator() }
    }

    /// The embedding sending the generator of `from` to the smallest root of its
    /// modulus in `to`.
    pub fn new(from: &'static FieldCtx, to: &'static FieldCtx) -> Result<Embedding, GfError> {
        if from.p() != to.p() {
            return Err(GfError::CtxMismatch);
        }
        if std::ptr::eq(from, to) {
            return Ok(Embedding::identity(from));
        }
        if !to.degree().is_multiple_of(from.degree()) {
            return Err(GfError::CtxMismatch);
        }
        if from.degree() == 1 {
            return Ok(Embedding { from, to, gen_image: to.zero() });
        }
        let m = Poly::new(to, from.modulus().iter().map(|&c| to.from_u64(c as u64)).collect());
        let r = roots(&m)?;
        Ok(Embedding { from, to, gen_image: r[0] })
    }

    pub fn from(&self) -> &'static FieldCtx {
        self.from
    }

    pub fn to(&self) -> &'static FieldCtx {
        self.to
    }

    pub fn apply(&self, x: &Fq) -> Fq {
        assert!(std::ptr::eq(x.ctx(), self.from), "field context mismatch");
        if std::ptr::eq(self.from, self.to) {
            return *x;
        }
        x.coeffs()
            .iter()
            .rev()
            .fold(self.to.zero(), |acc, &c| acc * self.gen_image + self.to.from_u64(c as u64))
    }

    pub fn apply_poly(&self, f: &Poly) -> Poly {
        f.map(self.to, |c| self.apply(c))
    }

    /// Preimage of `y`, or `NotInSubfield`.
    pub fn pull_back(&self, y: &Fq) -> Result<Fq, GfError> {
        if !std::ptr::eq(y.ctx(), self.to) {
            return Err(GfError::CtxMismatch);
        }
        if std::ptr::eq(self.from, self.to) {
            return Ok(*y);
        }
        let p = self.to.p();
        let df = self.from.degree();
        let dt = self.to.degree();
        // columns: images of 1, g, g², …; last column: y
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(df + 1);
        let mut pw = self.to.one();
        for _ in 0..df {
            cols.push(pw.coeffs().iter().map(|&c| c as u64).collect());
            pw *= self.gen_image;
        }
        cols.push(y.coeffs().iter().map(|&c| c as u64).collect());
        let mut a: Vec<Vec<u64>> = (0..dt).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let inv = |x: u64| self.to.prime_field().from_u64(x).inv().expect("nonzero").as_prime().unwrap();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..df {
            let Some(pr) = (row..dt).find(|&r| a[r][col] != 0) else { continue };
            a.swap(row, pr);
            let iv = inv(a[row][col]);
            for x in a[row].iter_mut() {
                *x = *x * iv % p;
            }
            for r in 0..dt {
                if r != row && a[r][col] != 0 {
                    let f = a[r][col];
                    for c in 0..=df {
                        a[r][c] = (a[r][c] + (p - f) * a[row][c]) % p;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if a[row..].iter().any(|r| r[df] != 0) {
            return Err(GfError::NotInSubfield);
        }
        let mut v = [0i64; MAX_DEGREE];
        for (r, &col) in pivots.iter().enumerate() {
            v[col] = a[r][df] as i64;
        }
        self.from.from_coeffs(&v[..df])
    }

    /// `Tr_{to/from}(y)`.
    pub fn trace(&self, y: &Fq) -> Fq {
        let r = self.to.degree() / self.from.degree();
        let q = self.from.order() as u128;
        let mut acc = self.to.zero();
        let mut x = *y;
        for _ in 0..r {
            acc += x;
            x = x.pow(q);
        }
        self.pull_back(&acc).expect("trace lies in the subfield")
    }
}

/// Residue field `k[z]/(P)` of a closed point, realized as a standard extension
/// containing `k`, with a fixed root of `P`.
#[derive(Debug, Clone)]
pub struct ResidueField {
    pub poly: Poly,
    pub embed: Embedding,
    pub root: Fq,
}

impl ResidueField {
    pub fn new(poly: &Poly) -> Result<ResidueField, GfError> {
        let base = poly.ctx();
        let poly = poly.monic();
        let d = poly.degree().ok_or(GfError::ZeroPolynomial)?;
        if d == 0 {
            return Err(GfError::BadModulus("constant polynomial has no root".into()));
        }
        if d == 1 {
            return Ok(ResidueField { root: -poly.coeff(0), embed: Embedding::identity(base), poly });
        }
        let total = base.degree() * d;
        if total > MAX_DEGREE {
            return Err(GfError::DegreeTooLarge(total));
        }
        let ext = FieldCtx::standard(base.p(), total)?;
        let embed = Embedding::new(base, ext)?;
        let r = roots(&embed.apply_poly(&poly))?;
        if r.len() != d {
            return Err(GfError::BadModulus("point polynomial is not irreducible".into()));
        }
        Ok(ResidueField { root: r[0], embed, poly })
    }

    pub fn base(&self) -> &'static FieldCtx {
        self.embed.from()
    }

    pub fn ext(&self) -> &'static FieldCtx {
        self.embed.to()
    }

    pub fn degree(&self) -> usize {
        self.poly.deg() as usize
    }

    pub fn trace(&self, x: &Fq) -> Fq {
        self.embed.trace(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_roundtrip() {
        let k = FieldCtx::extension(5, &[2, 0, 1]).unwrap();
        let big = FieldCtx::standard(5, 4).unwrap();
        let e = Embedding::new(k, big).unwrap();
        for x in k.elements() {
            assert_eq!(e.pull_back(&e.apply(&x)).unwrap(), x);
        }
        for x in k.elements() {
            for y in k.elements().step_by(3) {
                assert_eq!(e.apply(&(x * y)), e.apply(&x) * e.apply(&y));
            }
        }
        assert_eq!(e.pull_back(&big.generator()), Err(GfError::NotInSubfield));
    }

    #[test]
    fn relative_trace_composes() {
        let fp = FieldCtx::prime(7).unwrap();
        let k = FieldCtx::standard(7, 2).unwrap();
        let big = FieldCtx::standard(7, 4).unwrap();
        let e1 = Embedding::new(fp, k).unwrap();
        let e2 = Embedding::new(k, big).unwrap();
        let e12 = Embedding::new(fp, big).unwrap();
        for i in (0..big.order()).step_by(97) {
            let x = big.element(i);
            assert_eq!(e1.trace(&e2.trace(&x)), e12.trace(&x));
            assert_eq!(e12.trace(&x), x.trace_to_prime());
        }
    }

    #[test]
    fn residue_field_root() {
        let k = FieldCtx::prime(7).unwrap();
        let p = Poly::from_i64s(k, &[1, 0, 1]);
        let rf = ResidueField::new(&p).unwrap();
        assert_eq!(rf.ext().degree(), 2);
        assert!(rf.embed.apply_poly(&p).eval(&rf.root).is_zero());
    }
}

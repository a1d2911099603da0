use crate::gf::{FieldCtx, Fq};
use crate::tpoly::{CoeffRing, Derivation};

use super::LocalError;

/// Precision marker for expansions known exactly in every degree.
pub const EXACT: i64 = i64::MAX / 4;

/// Terms kept when inverting an exact expansion.
const INV_TERMS: i64 = 64;

/// Expansion point: `u = s − c` or `u = 1/s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Center {
    Finite(Fq),
    Infinity,
}

/// `Σ coeffs[i]·u^{val+i} + O(u^{prec})`; coefficients past the list and below `prec` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentLocal {
    center: Center,
    ctx: &'static FieldCtx,
    val: i64,
    coeffs: Vec<Fq>,
    prec: i64,
}

fn sat(a: i64, b: i64) -> i64 {
    a.saturating_add(b).min(EXACT)
}

impl LaurentLocal {
    pub fn from_parts(
        center: Center,
        ctx: &'static FieldCtx,
        val: i64,
        mut coeffs: Vec<Fq>,
        prec: i64,
    ) -> LaurentLocal {
        let keep = (prec - val).max(0) as usize;
        coeffs.truncate(keep);
        let mut l = LaurentLocal { center, ctx, val, coeffs, prec: prec.min(EXACT) };
        l.normalize();
        l
    }

    pub fn constant(center: Center, c: Fq) -> LaurentLocal {
        LaurentLocal::from_parts(center, c.ctx(), 0, vec![c], EXACT)
    }

    /// The local parameter `u` itself.
    pub fn parameter(center: Center, ctx: &'static FieldCtx) -> LaurentLocal {
        LaurentLocal::from_parts(center, ctx, 1, vec![ctx.one()], EXACT)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        self.coeffs.drain(..lead);
        self.val += lead as i64;
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.val = self.prec;
        }
    }

    pub fn center(&self) -> Center {
        self.center
    }

    /// Exponent of the first nonzero coefficient (equals `prec` if none is known).
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    pub fn coefficient(&self, e: i64) -> Result<Fq, LocalError> {
        if e >= self.prec {
            return Err(LocalError::InsufficientPrecision { requested: e, prec: self.prec });
        }
        if e < self.val || e >= self.val + self.coeffs.len() as i64 {
            return Ok(self.ctx.zero());
        }
        Ok(self.coeffs[(e - self.val) as usize])
    }

    /// Residue of `f·ds` in the local parameter.
    pub fn residue(&self) -> Result<Fq, LocalError> {
        match self.center {
            Center::Finite(_) => self.coefficient(-1),
            Center::Infinity => Ok(-self.coefficient(1)?),
        }
    }

    fn end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    fn same_center(&self, o: &LaurentLocal) {
        assert!(self.center == o.center, "expansions around different centers");
    }

    pub fn try_add(&self, o: &LaurentLocal) -> Result<LaurentLocal, LocalError> {
        if self.center != o.center {
            return Err(LocalError::CenterMismatch);
        }
        Ok(self.add_impl(o))
    }

    fn add_impl(&self, o: &LaurentLocal) -> LaurentLocal {
        let prec = self.prec.min(o.prec);
        let lo = self.val.min(o.val).min(prec);
        let hi = self.end().max(o.end()).min(prec);
        let coeffs = (lo..hi.max(lo))
            .map(|e| self.coefficient(e).unwrap() + o.coefficient(e).unwrap())
            .collect();
        LaurentLocal::from_parts(self.center, self.ctx, lo, coeffs, prec)
    }

    fn mul_impl(&self, o: &LaurentLocal) -> LaurentLocal {
        let prec = sat(self.val, o.prec).min(sat(o.val, self.prec));
        let val = self.val + o.val;
        let n = if self.coeffs.is_empty() || o.coeffs.is_empty() {
            0
        } else {
            self.coeffs.len() + o.coeffs.len() - 1
        };
        let mut c = vec![self.ctx.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += *a * *b;
            }
        }
        LaurentLocal::from_parts(self.center, self.ctx, if n == 0 { prec } else { val }, c, prec)
    }

    pub fn inverse(&self) -> Option<LaurentLocal> {
        if self.coeffs.is_empty() {
            return None;
        }
        let r = if self.is_exact() {
            INV_TERMS.max(self.coeffs.len() as i64)
        } else {
            self.prec - self.val
        } as usize;
        let a0i = self.coeffs[0].inv().ok()?;
        let mut b: Vec<Fq> = Vec::with_capacity(r);
        b.push(a0i);
        for n in 1..r {
            let mut s = self.ctx.zero();
            for i in 1..=n.min(self.coeffs.len() - 1) {
                s += self.coeffs[i] * b[n - i];
            }
            b.push(-s * a0i);
        }
        Some(LaurentLocal::from_parts(self.center, self.ctx, -self.val, b, -self.val + r as i64))
    }

    /// `d/ds`, expressed in the local parameter.
    pub fn derive_s(&self) -> LaurentLocal {
        let k = self.ctx;
        match self.center {
            Center::Finite(_) => {
                let c = self.coeffs.iter().enumerate().map(|(i, a)| a.scale_int(self.val + i as i64)).collect();
                let prec = if self.is_exact() { EXACT } else { self.prec - 1 };
                LaurentLocal::from_parts(self.center, k, self.val - 1, c, prec)
            }
            Center::Infinity => {
                let c = self.coeffs.iter().enumerate().map(|(i, a)| -a.scale_int(self.val + i as i64)).collect();
                let prec = if self.is_exact() { EXACT } else { self.prec + 1 };
                LaurentLocal::from_parts(self.center, k, self.val + 1, c, prec)
            }
        }
    }
}

impl CoeffRing for LaurentLocal {
    fn field(&self) -> &'static FieldCtx {
        self.ctx
    }
    fn zero_like(&self) -> Self {
        LaurentLocal::from_parts(self.center, self.ctx, 0, Vec::new(), EXACT)
    }
    fn one_like(&self) -> Self {
        LaurentLocal::constant(self.center, self.ctx.one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        self.same_center(o);
        self.add_impl(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.same_center(o);
        self.add_impl(&CoeffRing::neg(o))
    }
    fn neg(&self) -> Self {
        LaurentLocal { coeffs: self.coeffs.iter().map(|c| -*c).collect(), ..self.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        self.same_center(o);
        self.mul_impl(o)
    }
    fn scale(&self, c: &Fq) -> Self {
        LaurentLocal::from_parts(
            self.center,
            self.ctx,
            self.val,
            self.coeffs.iter().map(|a| *a * *c).collect(),
            self.prec,
        )
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
}

impl Derivation for LaurentLocal {
    fn derive(&self) -> Self {
        self.derive_s()
    }
}

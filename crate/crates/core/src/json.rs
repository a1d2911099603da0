//! JSON wire formats, schema version 1.
//!
//! Field elements are integers in a prime field and power-basis coefficient arrays in an
//! extension. Truncated elements are arrays of field elements, lowest `t`-degree first.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycles::{CycleError, ParamCycle, ParamFn, ZPoly};
use crate::gf::{FieldCtx, Fq, GfError, Poly};
use crate::localfield::{LocalError, RatFn};
use crate::regulator::{Breakdown, GoodFunction, LiftedPoint, PointRef, RegulatorInput};
use crate::tpoly::{Trunc, TruncError};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Trunc(#[from] TruncError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
}

type Result<T> = std::result::Result<T, JsonError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemJson {
    Int(i64),
    Coeffs(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TruncJson {
    Sized { m: usize, coeffs: Vec<ElemJson> },
    Plain(Vec<ElemJson>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFnJson {
    pub num: Vec<ElemJson>,
    pub den: Vec<ElemJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointJson {
    Finite { poly: Vec<Vec<ElemJson>> },
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub unit: Vec<ElemJson>,
    #[serde(default)]
    pub factors: Vec<(usize, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegulatorJson {
    #[serde(default = "schema_v1")]
    pub schema: u32,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<Vec<i64>>,
    pub points: Vec<PointJson>,
    pub f: FunctionJson,
    pub g: FunctionJson,
    pub h: FunctionJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamFnJson {
    pub num: Vec<Vec<ElemJson>>,
    pub den: Vec<Vec<ElemJson>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleJson {
    #[serde(default = "schema_v1")]
    pub schema: u32,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub y1: ParamFnJson,
    pub y2: ParamFnJson,
    pub y3: ParamFnJson,
}

fn schema_v1() -> u32 {
    SCHEMA
}

fn check_schema(v: u32) -> Result<()> {
    if v == SCHEMA {
        Ok(())
    } else {
        Err(JsonError::Schema(v))
    }
}

/// The field `F_p` or `F_p[u]/(ext)`.
pub fn field(p: u64, ext: Option<&[i64]>) -> Result<&'static FieldCtx> {
    Ok(match ext {
        None => FieldCtx::prime(p)?,
        Some(m) => FieldCtx::extension(p, m)?,
    })
}

/// The modulus of a field in the form accepted by [`field`], or `None` for a prime field.
pub fn ext_of(k: &'static FieldCtx) -> Option<Vec<i64>> {
    (!k.is_prime_field()).then(|| k.modulus().iter().map(|&c| c as i64).collect())
}

pub fn elem_to_json(x: &Fq) -> ElemJson {
    if x.ctx().is_prime_field() {
        ElemJson::Int(x.coeffs()[0] as i64)
    } else {
        ElemJson::Coeffs(x.coeffs().iter().map(|&c| c as i64).collect())
    }
}

pub fn elem_from_json(k: &'static FieldCtx, e: &ElemJson) -> Result<Fq> {
    Ok(match e {
        ElemJson::Int(n) => k.from_i64(*n),
        ElemJson::Coeffs(c) => k.from_coeffs(c)?,
    })
}

fn elems(k: &'static FieldCtx, v: &[ElemJson]) -> Result<Vec<Fq>> {
    v.iter().map(|e| elem_from_json(k, e)).collect()
}

fn elems_to_json(v: &[Fq]) -> Vec<ElemJson> {
    v.iter().map(elem_to_json).collect()
}

pub fn trunc_to_json(x: &Trunc<Fq>) -> TruncJson {
    TruncJson::Sized { m: x.modulus(), coeffs: elems_to_json(x.coeffs()) }
}

/// A truncated element; plain arrays are padded with zeros to `min_m`.
pub fn trunc_from_json(k: &'static FieldCtx, t: &TruncJson, min_m: usize) -> Result<Trunc<Fq>> {
    let (c, m) = match t {
        TruncJson::Sized { m, coeffs } => {
            if coeffs.len() > *m {
                return Err(JsonError::Invalid(format!("{} coefficients for modulus {m}", coeffs.len())));
            }
            (coeffs, *m)
        }
        TruncJson::Plain(c) => (c, c.len().max(min_m)),
    };
    if m == 0 {
        return Err(JsonError::Invalid("empty truncated element".into()));
    }
    Ok(Trunc::new(elems(k, c)?)?.resized(m))
}

fn plain_trunc(k: &'static FieldCtx, v: &[ElemJson], min_m: usize) -> Result<Trunc<Fq>> {
    if v.is_empty() {
        return Ok(Trunc::constant(k.zero(), min_m));
    }
    Ok(Trunc::new(elems(k, v)?)?.resized(v.len().max(min_m)))
}

pub fn ratfn_to_json(f: &RatFn) -> RatFnJson {
    RatFnJson { num: elems_to_json(f.num().coeffs()), den: elems_to_json(f.den().coeffs()) }
}

pub fn ratfn_from_json(k: &'static FieldCtx, f: &RatFnJson) -> Result<RatFn> {
    Ok(RatFn::new(Poly::new(k, elems(k, &f.num)?), Poly::new(k, elems(k, &f.den)?))?)
}

fn function_to_json(f: &GoodFunction) -> FunctionJson {
    FunctionJson { unit: elems_to_json(f.unit.coeffs()), factors: f.factors.clone() }
}

fn function_from_json(k: &'static FieldCtx, f: &FunctionJson) -> Result<GoodFunction> {
    Ok(GoodFunction { unit: plain_trunc(k, &f.unit, 2)?, factors: f.factors.clone() })
}

impl RegulatorJson {
    pub fn from_input(input: &RegulatorInput) -> Result<RegulatorJson> {
        let k = input.f.unit.constant_term().ctx();
        let points = input
            .points
            .iter()
            .map(|pt| match pt {
                LiftedPoint::Infinity => PointJson::Named("inf".into()),
                LiftedPoint::Finite(c) => PointJson::Finite { poly: c.iter().map(|x| elems_to_json(x.coeffs())).collect() },
            })
            .collect();
        Ok(RegulatorJson {
            schema: SCHEMA,
            p: k.p(),
            ext: ext_of(k),
            points,
            f: function_to_json(&input.f),
            g: function_to_json(&input.g),
            h: function_to_json(&input.h),
        })
    }

    pub fn to_input(&self) -> Result<RegulatorInput> {
        check_schema(self.schema)?;
        let k = field(self.p, self.ext.as_deref())?;
        let mut points = Vec::with_capacity(self.points.len());
        for pt in &self.points {
            points.push(match pt {
                PointJson::Named(s) if s == "inf" => LiftedPoint::Infinity,
                PointJson::Named(s) => return Err(JsonError::Invalid(format!("unknown point {s:?}"))),
                PointJson::Finite { poly } => {
                    if poly.is_empty() {
                        return Err(JsonError::Invalid("empty point polynomial".into()));
                    }
                    LiftedPoint::Finite(poly.iter().map(|c| plain_trunc(k, c, 2)).collect::<Result<_>>()?)
                }
            });
        }
        Ok(RegulatorInput {
            points,
            f: function_from_json(k, &self.f)?,
            g: function_from_json(k, &self.g)?,
            h: function_from_json(k, &self.h)?,
        })
    }
}

pub fn parse_regulator(text: &str) -> Result<RegulatorInput> {
    serde_json::from_str::<RegulatorJson>(text)?.to_input()
}

fn zpoly_to_json(c: &ZPoly) -> Vec<Vec<ElemJson>> {
    c.iter().map(|x| elems_to_json(x.coeffs())).collect()
}

impl CycleJson {
    pub fn from_cycle(z: &ParamCycle) -> CycleJson {
        let k = z.ctx();
        let f = |y: &ParamFn| ParamFnJson { num: zpoly_to_json(&y.num), den: zpoly_to_json(&y.den) };
        CycleJson {
            schema: SCHEMA,
            p: k.p(),
            ext: ext_of(k),
            m: Some(z.modulus()),
            y1: f(&z.y[0]),
            y2: f(&z.y[1]),
            y3: f(&z.y[2]),
        }
    }

    pub fn to_cycle(&self) -> Result<ParamCycle> {
        check_schema(self.schema)?;
        let k = field(self.p, self.ext.as_deref())?;
        let ys = [&self.y1, &self.y2, &self.y3];
        let longest = ys.iter().flat_map(|y| y.num.iter().chain(y.den.iter())).map(Vec::len).max().unwrap_or(1);
        let m = self.m.unwrap_or(longest.max(2));
        if longest > m {
            return Err(JsonError::Invalid(format!("t-degree {} exceeds modulus {m}", longest - 1)));
        }
        let conv = |g: &[Vec<ElemJson>]| -> Result<ZPoly> {
            if g.is_empty() {
                return Err(JsonError::Invalid("empty polynomial".into()));
            }
            g.iter().map(|c| plain_trunc(k, c, m).map(|x| x.resized(m))).collect()
        };
        let mut out = Vec::with_capacity(3);
        for y in ys {
            out.push(ParamFn::new(conv(&y.num)?, conv(&y.den)?)?);
        }
        let [a, b, c]: [ParamFn; 3] = out.try_into().expect("three coordinates");
        Ok(ParamCycle::new(a, b, c))
    }
}

pub fn parse_cycle(text: &str) -> Result<ParamCycle> {
    serde_json::from_str::<CycleJson>(text)?.to_cycle()
}

/// `{"total": .., "terms": [{"point": .., "degree": .., "value": ..}]}`.
pub fn breakdown_to_json(b: &Breakdown) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = b
        .terms
        .iter()
        .map(|t| {
            let point = match t.point {
                PointRef::Table(i) => serde_json::json!(i),
                PointRef::Infinity => serde_json::json!("inf"),
            };
            serde_json::json!({"point": point, "degree": t.degree, "value": elem_to_json(&t.value)})
        })
        .collect();
    serde_json::json!({"total": elem_to_json(&b.total), "terms": terms})
}

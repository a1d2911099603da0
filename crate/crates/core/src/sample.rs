//! Seeded random generators shared by the verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycles::ParamCycle;
use crate::gf::{is_irreducible, FieldCtx, Fq, Poly};
use crate::localfield::RatFn;
use crate::regulator::{GlobalLift, GoodFunction, LiftedPoint, RegulatorInput};
use crate::tpoly::Trunc;

/// The generator used everywhere randomness is needed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

pub fn poly<R: Rng>(k: &'static FieldCtx, deg: usize, rng: &mut R) -> Poly {
    Poly::new(k, (0..=deg).map(|_| k.random(rng)).collect())
}

pub fn monic<R: Rng>(k: &'static FieldCtx, deg: usize, rng: &mut R) -> Poly {
    let mut c: Vec<Fq> = (0..deg).map(|_| k.random(rng)).collect();
    c.push(k.one());
    Poly::new(k, c)
}

/// A rational function with numerator and denominator degrees at most `deg`.
pub fn ratfn<R: Rng>(k: &'static FieldCtx, deg: usize, rng: &mut R) -> RatFn {
    let n = poly(k, deg, rng);
    let d = monic(k, rng.gen_range(0..=deg), rng);
    RatFn::new(n, d).expect("monic denominator")
}

pub fn nonzero_ratfn<R: Rng>(k: &'static FieldCtx, deg: usize, rng: &mut R) -> RatFn {
    loop {
        let f = ratfn(k, deg, rng);
        if !f.is_zero() {
            return f;
        }
    }
}

/// A rational function without a pole at `c`.
pub fn regular_at<R: Rng>(k: &'static FieldCtx, c: &Fq, deg: usize, rng: &mut R) -> RatFn {
    loop {
        let f = ratfn(k, deg, rng);
        if f.eval(c).is_some() {
            return f;
        }
    }
}

/// A rational function regular and nonvanishing at `c`.
pub fn unit_at<R: Rng>(k: &'static FieldCtx, c: &Fq, deg: usize, rng: &mut R) -> RatFn {
    loop {
        let f = ratfn(k, deg, rng);
        if f.eval(c).is_some_and(|v| !v.is_zero()) {
            return f;
        }
    }
}

pub fn trunc<R: Rng>(k: &'static FieldCtx, m: usize, rng: &mut R) -> Trunc<Fq> {
    Trunc::new((0..m).map(|_| k.random(rng)).collect()).expect("m ≥ 1")
}

/// An element whose constant term avoids `0` and `1`.
pub fn flat<R: Rng>(k: &'static FieldCtx, m: usize, rng: &mut R) -> Trunc<Fq> {
    let mut x = trunc(k, m, rng);
    loop {
        let c = k.random(rng);
        if !c.is_zero() && !c.is_one() {
            x.set(0, c);
            return x;
        }
    }
}

/// A unit of `F_q(s)_m` with coefficients of degree at most `deg`.
pub fn ratfn_unit<R: Rng>(k: &'static FieldCtx, m: usize, deg: usize, rng: &mut R) -> Trunc<RatFn> {
    let mut c = vec![nonzero_ratfn(k, deg, rng)];
    c.extend((1..m).map(|_| ratfn(k, deg, rng)));
    Trunc::new(c).expect("m ≥ 1")
}

/// A random element of `k₂` with nonzero constant term.
pub fn k2_unit<R: Rng>(k: &'static FieldCtx, rng: &mut R) -> Trunc<Fq> {
    Trunc::new(vec![k.random_nonzero(rng), k.random(rng)]).expect("m = 2")
}

/// A random regulator input: up to `n` finite points of degree 1 or 2 with distinct
/// irreducible reductions, and three functions with exponents in `−2..=2`.
pub fn regulator_input<R: Rng>(k: &'static FieldCtx, n: usize, rng: &mut R) -> RegulatorInput {
    let mut points: Vec<LiftedPoint> = Vec::new();
    let mut reds: Vec<Poly> = Vec::new();
    let mut tries = 0;
    while points.len() < n && tries < 100 * n {
        tries += 1;
        let d = if rng.gen_bool(0.7) { 1 } else { 2 };
        let mut c: Vec<Trunc<Fq>> = (0..d).map(|_| trunc(k, 2, rng)).collect();
        c.push(Trunc::constant(k.one(), 2));
        let pt = LiftedPoint::Finite(c);
        let red = pt.reduction().expect("finite");
        if is_irreducible(&red) && !reds.contains(&red) {
            reds.push(red);
            points.push(pt);
        }
    }
    let func = |rng: &mut R| {
        let factors = (0..points.len()).map(|j| (j, rng.gen_range(-2..=2))).filter(|(_, e)| *e != 0).collect();
        GoodFunction { unit: k2_unit(k, rng), factors }
    };
    let (f, g, h) = (func(rng), func(rng), func(rng));
    RegulatorInput { points, f, g, h }
}

/// A regulator input whose graph is an admissible cycle candidate: every point occurs in
/// exactly one function, with exponent `±1`, and each function has degree `0`.
pub fn cycle_input<R: Rng>(k: &'static FieldCtx, rng: &mut R) -> RegulatorInput {
    loop {
        let base = regulator_input(k, 6, rng);
        if base.points.len() < 6 {
            continue;
        }
        if base.points.chunks(2).any(|pr| pr[0].degree() != pr[1].degree()) {
            continue;
        }
        let func = |i: usize, rng: &mut R| GoodFunction { unit: k2_unit(k, rng), factors: vec![(2 * i, 1), (2 * i + 1, -1)] };
        let (f, g, h) = (func(0, rng), func(1, rng), func(2, rng));
        return RegulatorInput { points: base.points, f, g, h };
    }
}

/// Adds random multiples of `t^from, …, t^{m−1}` to every coefficient.
pub fn perturb_cycle<R: Rng>(z: &ParamCycle, from: usize, rng: &mut R) -> ParamCycle {
    let k = z.ctx();
    let bump = |c: &Trunc<Fq>, rng: &mut R| {
        let mut c = c.clone();
        for i in from..c.modulus() {
            c.set(i, *c.coeff(i) + k.random(rng));
        }
        c
    };
    let mut out = z.clone();
    for f in out.y.iter_mut() {
        for c in f.num.iter_mut().chain(f.den.iter_mut()) {
            *c = bump(c, rng);
        }
    }
    out
}

/// A random regulator input with an admissible graph cycle, lifted to `k_p` with a seed drawn
/// from `rng`; `None` after `attempts` rejected samples.
pub fn admissible_graph<R: Rng>(
    k: &'static FieldCtx,
    attempts: usize,
    rng: &mut R,
) -> Option<(RegulatorInput, ParamCycle)> {
    let p = k.p() as usize;
    for _ in 0..attempts {
        let inp = cycle_input(k, rng);
        let lift = GlobalLift::new(&inp, p, rng.gen()).ok()?;
        let z = ParamCycle::graph(&inp, &lift).ok()?;
        if z.admissibility_check().is_admissible() {
            return Some((inp, z));
        }
    }
    None
}

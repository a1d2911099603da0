use charp_dilog::gf::{FieldCtx, Fq};
use charp_dilog::localfield::RatFn;
use charp_dilog::sample;
use charp_dilog::tpoly::{Trunc, TruncError, UnitDecomp};
use rand::Rng;

fn unit(k: &'static FieldCtx, m: usize, rng: &mut impl Rng) -> Trunc<Fq> {
    let mut x = sample::trunc(k, m, rng);
    x.set(0, k.random_nonzero(rng));
    x
}

fn in_ideal(k: &'static FieldCtx, m: usize, rng: &mut impl Rng) -> Trunc<Fq> {
    let mut x = sample::trunc(k, m, rng);
    x.set(0, k.zero());
    x
}

/// `Σ_{n<p} αⁿ/n!` with factorials inverted one at a time.
fn exp_oracle(a: &Trunc<Fq>) -> Trunc<Fq> {
    let k = a.constant_term().ctx();
    let p = k.p();
    let mut acc = a.one_like();
    let mut pw = a.one_like();
    let mut fact = 1u64;
    for n in 1..p {
        pw = &pw * a;
        fact = fact * n % p;
        acc = &acc + &pw.scale(&k.from_u64(fact).inv().unwrap());
    }
    acc
}

#[test]
fn ring_examples() {
    let k = FieldCtx::prime(5).unwrap();
    let a = Trunc::from_i64s(k, &[1, 1]);
    let b = Trunc::from_i64s(k, &[1, -1]);
    assert_eq!(&a * &b, Trunc::from_i64s(k, &[1, 0]));
    assert_eq!(Trunc::from_i64s(k, &[1, 1, 0]).inv().unwrap(), Trunc::from_i64s(k, &[1, -1, 1]));
    assert_eq!(Trunc::from_i64s(k, &[2, 3, 4]).reduce_to(2).unwrap(), Trunc::from_i64s(k, &[2, 3]));
    assert_eq!(Trunc::from_i64s(k, &[0, 1]).inv(), Err(TruncError::NonUnitConstantTerm));
}

#[test]
fn reduce_commutes_with_ring_ops() {
    for p in [5u64, 7] {
        let k = FieldCtx::prime(p).unwrap();
        let mut rng = sample::rng(p);
        for _ in 0..100 {
            let m = p as usize;
            let (x, y) = (unit(k, m, &mut rng), sample::trunc(k, m, &mut rng));
            let r = |z: &Trunc<Fq>| z.reduce_to(2).unwrap();
            assert_eq!(r(&(&x * &y)), &r(&x) * &r(&y));
            assert_eq!(r(&(&x + &y)), &r(&x) + &r(&y));
            assert_eq!(r(&x.inv().unwrap()), r(&x).inv().unwrap());
        }
    }
}

#[test]
fn exp_examples() {
    let k = FieldCtx::prime(5).unwrap();
    assert_eq!(Trunc::from_i64s(k, &[0, 0, 0]).exp().unwrap(), Trunc::from_i64s(k, &[1, 0, 0]));
    let t = Trunc::monomial(k.one(), 1, 5);
    // 1 + t + t²/2 + t³/6 + t⁴/24 with 1/2 = 3, 1/6 = 1, 1/24 = 4 mod 5
    assert_eq!(t.exp().unwrap(), Trunc::from_i64s(k, &[1, 1, 3, 1, 4]));
    assert_eq!(Trunc::from_i64s(k, &[1, 1]).exp(), Err(TruncError::NonzeroConstantTerm));
}

#[test]
fn exp_matches_oracle_and_is_homomorphic() {
    for p in [5u64, 7] {
        let k = FieldCtx::prime(p).unwrap();
        let mut rng = sample::rng(10 + p);
        for _ in 0..100 {
            let (a, b) = (in_ideal(k, p as usize, &mut rng), in_ideal(k, p as usize, &mut rng));
            assert_eq!(a.exp().unwrap(), exp_oracle(&a));
            assert_eq!(&a.exp().unwrap() * &b.exp().unwrap(), (&a + &b).exp().unwrap());
        }
    }
}

#[test]
fn log_examples() {
    let k = FieldCtx::prime(7).unwrap();
    let c = Trunc::from_i64s(k, &[3, 0, 0]);
    assert!(c.log_circ().unwrap().is_zero());
    let half = k.from_u64(2).inv().unwrap();
    let got = Trunc::from_i64s(k, &[1, 1, 0]).log_circ().unwrap();
    assert_eq!(got.coeffs(), &[k.zero(), k.one(), -half]);
    let mut rng = sample::rng(4);
    for _ in 0..20 {
        let a = k.random(&mut rng);
        let e = Trunc::monomial(a, 2, 7).exp().unwrap();
        assert_eq!(e.log_circ().unwrap(), Trunc::monomial(a, 2, 7));
    }
}

#[test]
fn log_is_homomorphism_and_inverts_exp() {
    for p in [5u64, 7] {
        let k = FieldCtx::prime(p).unwrap();
        let m = p as usize;
        let mut rng = sample::rng(20 + p);
        for _ in 0..200 {
            let (u, v) = (unit(k, m, &mut rng), unit(k, m, &mut rng));
            let lhs = (&u * &v).log_circ().unwrap();
            assert_eq!(lhs, &u.log_circ().unwrap() + &v.log_circ().unwrap());
            let a = in_ideal(k, m, &mut rng);
            assert_eq!(a.exp().unwrap().log_circ().unwrap(), a);
            let c = u.constant_term().inv().unwrap();
            let w = u.scale(&c);
            assert_eq!(w.log_circ().unwrap().exp().unwrap(), w);
        }
    }
}

#[test]
fn ell_examples() {
    let k = FieldCtx::prime(5).unwrap();
    let x = Trunc::from_i64s(k, &[1, 1, 0]);
    assert!(x.ell(1).unwrap().is_one());
    assert_eq!(x.ell(2).unwrap(), -k.from_u64(2).inv().unwrap());
    for p in [5u64, 7] {
        let k = FieldCtx::prime(p).unwrap();
        let mut c = vec![0i64; p as usize];
        c[0] = 1;
        c[p as usize - 1] = 1;
        assert!(Trunc::from_i64s(k, &c).ell(p as usize - 1).unwrap().is_one());
    }
    assert!(matches!(x.ell(3), Err(TruncError::IndexOutOfRange { .. })));
}

#[test]
fn decompose_examples() {
    let k = FieldCtx::prime(7).unwrap();
    let c = Trunc::constant(k.from_u64(3), 4);
    let d = c.unit_decompose().unwrap();
    assert_eq!(d.a0, k.from_u64(3));
    assert!(d.exps.iter().all(|e| e.is_zero()));
    let beta = k.from_u64(5);
    let u = Trunc::monomial(beta, 2, 4).exp().unwrap().scale(&k.from_u64(3));
    let d = u.unit_decompose().unwrap();
    assert_eq!(d.exps, vec![k.zero(), beta, k.zero()]);
}

#[test]
fn decompose_round_trip() {
    for p in [5u64, 7] {
        let k = FieldCtx::prime(p).unwrap();
        let mut rng = sample::rng(30 + p);
        for _ in 0..500 {
            let m = rng.gen_range(2..=p as usize);
            let u = unit(k, m, &mut rng);
            let d = u.unit_decompose().unwrap();
            assert_eq!(d.a0, *u.constant_term());
            for i in 1..m {
                assert_eq!(d.exps[i - 1], u.ell(i).unwrap());
            }
            assert_eq!(d.recompose().unwrap(), u);
            let d2 = UnitDecomp { a0: k.random_nonzero(&mut rng), exps: (1..m).map(|_| k.random(&mut rng)).collect() };
            assert_eq!(d2.recompose().unwrap().unit_decompose().unwrap(), d2);
        }
    }
}

#[test]
fn rational_function_coefficients() {
    let k = FieldCtx::prime(5).unwrap();
    let mut rng = sample::rng(7);
    for _ in 0..30 {
        let u = sample::ratfn_unit(k, 5, 2, &mut rng);
        let v = sample::ratfn_unit(k, 5, 2, &mut rng);
        assert_eq!((&u * &v).log_circ().unwrap(), &u.log_circ().unwrap() + &v.log_circ().unwrap());
        assert_eq!(u.unit_decompose().unwrap().recompose().unwrap(), u);
        assert_eq!(&u * &u.inv().unwrap(), Trunc::constant(RatFn::one(k), 5));
    }
}

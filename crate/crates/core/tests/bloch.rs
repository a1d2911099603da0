use charp_dilog::bloch::{
    delta, five_term, flat_check, li2, li2_via_lift, li2p, li2p_via_lift, li2p_via_lift_with, pounds1, BlochError,
    BlochSym,
};
use charp_dilog::gf::{FieldCtx, Fq};
use charp_dilog::localfield::RatFn;
use charp_dilog::sample;
use charp_dilog::tpoly::Trunc;
use charp_dilog::wedge::{ell_p, WedgeK};
use rand::Rng;

fn admissible_pair(k: &'static FieldCtx, rng: &mut impl Rng) -> (Trunc<Fq>, Trunc<Fq>) {
    loop {
        let (x, y) = (sample::flat(k, 2, rng), sample::flat(k, 2, rng));
        if x.constant_term() != y.constant_term() {
            return (x, y);
        }
    }
}

#[test]
fn flat_examples() {
    let k = FieldCtx::prime(5).unwrap();
    assert!(flat_check(&Trunc::from_i64s(k, &[2, 0])));
    assert!(!flat_check(&Trunc::from_i64s(k, &[1, 3])));
    assert!(!flat_check(&Trunc::from_i64s(k, &[0, 3])));
    let mut x = Trunc::constant(RatFn::s(k), 2);
    x.set(1, RatFn::constant(k.from_u64(4)));
    assert!(flat_check(&x));
}

#[test]
fn pounds1_examples() {
    for p in [5u64, 7, 11] {
        let k = FieldCtx::prime(p).unwrap();
        assert!(pounds1(&k.zero()).is_zero());
        assert!(pounds1(&k.one()).is_zero());
        for x in k.elements() {
            let direct: u64 = (1..p).map(|i| modpow(x.as_prime().unwrap(), i, p) * modinv(i, p) % p).sum::<u64>() % p;
            assert_eq!(pounds1(&x).as_prime(), Some(direct));
        }
    }
}

fn modpow(b: u64, e: u64, p: u64) -> u64 {
    (0..e).fold(1, |acc, _| acc * b % p)
}

fn modinv(a: u64, p: u64) -> u64 {
    (1..p).find(|x| a * x % p == 1).unwrap()
}

#[test]
fn five_term_arguments_are_flat() {
    let k = FieldCtx::prime(7).unwrap();
    let mut rng = sample::rng(1);
    for _ in 0..200 {
        let (x, y) = admissible_pair(k, &mut rng);
        let b = five_term(&x, &y).unwrap();
        assert_eq!(b.terms().iter().map(|(c, _)| *c).collect::<Vec<_>>(), vec![1, -1, 1, -1, 1]);
        assert!(b.terms().iter().all(|(_, g)| flat_check(g)));
    }
    let x = Trunc::from_i64s(k, &[3, 1]);
    assert_eq!(five_term(&x, &Trunc::from_i64s(k, &[3, 5])), Err(BlochError::DifferenceNotUnit));
    assert_eq!(five_term(&x, &Trunc::from_i64s(k, &[1, 5])), Err(BlochError::NotFlat));
}

#[test]
fn five_term_vanishing() {
    for p in [5u64, 7, 11] {
        for d in [1usize, 2] {
            let k = FieldCtx::standard(p, d).unwrap();
            let mut rng = sample::rng(100 * p + d as u64);
            for _ in 0..500 {
                let (x, y) = admissible_pair(k, &mut rng);
                let b = five_term(&x, &y).unwrap();
                assert!(li2(&b).unwrap().unwrap().is_zero(), "p = {p}, d = {d}");
                assert!(li2p(&b).unwrap().unwrap().is_zero(), "p = {p}, d = {d}");
            }
        }
    }
}

#[test]
fn five_term_vanishing_through_lifts() {
    for p in [5u64, 7] {
        let k = FieldCtx::prime(p).unwrap();
        let mut rng = sample::rng(200 + p);
        for _ in 0..100 {
            let (x, y) = admissible_pair(k, &mut rng);
            let b = five_term(&x, &y).unwrap();
            assert!(li2_via_lift(&b, rng.gen()).unwrap().unwrap().is_zero());
            assert!(li2p_via_lift(&b, rng.gen()).unwrap().unwrap().is_zero());
        }
    }
}

/// `−a³/(2s²(1−s)²)` evaluated with modular integers.
fn li2_oracle(s: u64, a: u64, p: u64) -> u64 {
    let d = s * ((1 + p - s) % p) % p;
    let den = 2 * d % p * d % p;
    (p - modpow(a, 3, p) * modinv(den, p) % p) % p
}

#[test]
fn closed_forms_agree_with_lift_routes() {
    for p in [5u64, 7, 11] {
        let k = FieldCtx::prime(p).unwrap();
        let mut rng = sample::rng(300 + p);
        for _ in 0..200 {
            let x = sample::flat(k, 2, &mut rng);
            let b = BlochSym::gen(x.clone()).unwrap();
            let (s, a) = (x.coeff(0).as_prime().unwrap(), x.coeff(1).as_prime().unwrap());
            let closed = li2(&b).unwrap().unwrap();
            let closed_p = li2p(&b).unwrap().unwrap();
            assert_eq!(closed.as_prime(), Some(li2_oracle(s, a, p)));
            for _ in 0..5 {
                assert_eq!(li2_via_lift(&b, rng.gen()).unwrap().unwrap(), closed);
                assert_eq!(li2p_via_lift(&b, rng.gen()).unwrap().unwrap(), closed_p);
            }
        }
    }
}

#[test]
fn lift_route_by_hand() {
    let k = FieldCtx::prime(7).unwrap();
    let mut rng = sample::rng(9);
    for _ in 0..50 {
        let x = sample::flat(k, 2, &mut rng);
        let mut y = x.resized(7);
        for i in 2..7 {
            y.set(i, k.random(&mut rng));
        }
        let one = Trunc::constant(k.one(), 7);
        let by_hand = ell_p(&WedgeK::pair(&one - &y, y.clone())).unwrap();
        let b = BlochSym::gen(x).unwrap();
        assert_eq!(by_hand, li2p(&b).unwrap().unwrap());
        assert_eq!(ell_p(&delta(&BlochSym::gen(y.clone()).unwrap()).unwrap()).unwrap(), by_hand);
        let bad = |_: &Trunc<Fq>| Trunc::constant(k.one(), 7);
        assert_eq!(li2p_via_lift_with(&b, bad), Err(BlochError::LiftNotFlat));
    }
}

#[test]
fn zero_slope_and_empty() {
    let k = FieldCtx::prime(5).unwrap();
    let b = BlochSym::gen(Trunc::from_i64s(k, &[3, 0])).unwrap();
    assert!(li2(&b).unwrap().unwrap().is_zero());
    assert!(li2p(&b).unwrap().unwrap().is_zero());
    assert_eq!(li2(&BlochSym::<Fq>::new()).unwrap(), None);
}

#[test]
fn additivity_and_delta_linearity() {
    let k = FieldCtx::prime(7).unwrap();
    let mut rng = sample::rng(11);
    for _ in 0..50 {
        let (x, y) = (sample::flat(k, 2, &mut rng), sample::flat(k, 2, &mut rng));
        let bx = BlochSym::gen(x.clone()).unwrap();
        let by = BlochSym::gen(y).unwrap();
        let sum = bx.add(&by.scaled(3));
        let expect = li2p(&bx).unwrap().unwrap() + li2p(&by).unwrap().unwrap().scale_int(3);
        assert_eq!(li2p(&sum).unwrap().unwrap(), expect);
        let expect = li2(&bx).unwrap().unwrap() + li2(&by).unwrap().unwrap().scale_int(3);
        assert_eq!(li2(&sum).unwrap().unwrap(), expect);

        let d = delta(&bx.add(&bx)).unwrap();
        let one = x.one_like();
        assert_eq!(d.terms(), &[(1, vec![&one - &x, x.clone()]), (1, vec![&one - &x, x.clone()])]);
    }
}

#[test]
fn scaling_of_generators() {
    for p in [5u64, 7, 11] {
        let k = FieldCtx::prime(p).unwrap();
        let mut rng = sample::rng(400 + p);
        for _ in 0..50 {
            let b = BlochSym::gen(sample::flat(k, 2, &mut rng)).unwrap();
            let l = k.random_nonzero(&mut rng);
            let sb = b.scale_t(&l);
            assert_eq!(li2(&sb).unwrap().unwrap(), l.pow(3) * li2(&b).unwrap().unwrap());
            assert_eq!(li2p(&sb).unwrap().unwrap(), l.pow(p as u128) * li2p(&b).unwrap().unwrap());
        }
    }
}

#[test]
fn rational_function_generators() {
    let k = FieldCtx::prime(5).unwrap();
    let mut rng = sample::rng(12);
    let s = RatFn::s(k);
    for _ in 0..20 {
        let a = sample::ratfn(k, 2, &mut rng);
        let mut x = Trunc::constant(s.clone(), 2);
        x.set(1, a.clone());
        let b = BlochSym::gen(x).unwrap();
        let expect = a.powi(5).unwrap().mul(&s.mul(&RatFn::one(k).sub(&s)).powi(-5).unwrap()).mul(&pounds1(&s));
        assert_eq!(li2p(&b).unwrap().unwrap(), expect);
    }
}

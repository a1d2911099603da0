use charp_dilog::gf::{factor, factor_with_seed, is_irreducible, roots, FieldCtx, Fq, GfError, Poly};
use charp_dilog::sample;
use rand::Rng;

/// All monic polynomials of degree `d` over the prime field.
fn monics(k: &'static FieldCtx, d: usize) -> Vec<Poly> {
    let p = k.p();
    (0..p.pow(d as u32))
        .map(|mut idx| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push(k.from_u64(idx % p));
                idx /= p;
            }
            c.push(k.one());
            Poly::new(k, c)
        })
        .collect()
}

fn brute_irreducible(f: &Poly) -> bool {
    let d = f.deg() as usize;
    (1..=d / 2).all(|e| monics(f.ctx(), e).iter().all(|g| !f.rem(g).unwrap().is_zero()))
}

#[test]
fn inverse_examples() {
    let k5 = FieldCtx::prime(5).unwrap();
    assert!(k5.one().inv().unwrap().is_one());
    assert_eq!(k5.from_u64(2).inv().unwrap(), k5.from_u64(3));
    assert_eq!(k5.zero().inv(), Err(GfError::DivisionByZero));

    let f25 = FieldCtx::extension(5, &[2, 0, 1]).unwrap();
    let u = f25.from_coeffs(&[0, 1]).unwrap();
    let found: Vec<Fq> = f25.elements().filter(|x| (*x * u).is_one()).collect();
    assert_eq!(found, vec![u.inv().unwrap()]);
}

#[test]
fn every_nonzero_element_inverts() {
    for (p, m) in [(5u64, vec![2i64, 0, 1]), (7, vec![1, 0, 1]), (5, vec![1, 1, 0, 1])] {
        let k = FieldCtx::extension(p, &m).unwrap();
        for x in k.elements().filter(|x| !x.is_zero()) {
            assert!((x * x.inv().unwrap()).is_one());
        }
    }
}

#[test]
fn field_axioms_sampled() {
    let k = FieldCtx::standard(7, 3).unwrap();
    let mut rng = sample::rng(1);
    for _ in 0..200 {
        let (a, b, c) = (k.random(&mut rng), k.random(&mut rng), k.random(&mut rng));
        assert_eq!(a * (b + c), a * b + a * c);
        assert_eq!((a * b) * c, a * (b * c));
        assert_eq!(a - a, k.zero());
        assert_eq!(a.pow(k.order() as u128), a);
    }
}

#[test]
fn cross_field_operations_fail() {
    let a = FieldCtx::prime(5).unwrap().one();
    let b = FieldCtx::prime(7).unwrap().one();
    assert_eq!(a.checked_add(&b), Err(GfError::CtxMismatch));
    assert_eq!(a.checked_mul(&b), Err(GfError::CtxMismatch));
}

#[test]
fn bad_primes() {
    for n in [0u64, 1, 2, 3, 4, 9, 15, 25] {
        assert_eq!(FieldCtx::prime(n), Err(GfError::BadPrime(n)));
    }
    assert!(FieldCtx::extension(5, &[1, 0, 1]).is_err());
}

#[test]
fn frobenius_fixes_prime_subfield() {
    for p in [5u64, 7] {
        let k = FieldCtx::standard(p, 2).unwrap();
        let fixed: Vec<Fq> = k.elements().filter(|x| x.frobenius() == *x).collect();
        assert_eq!(fixed.len(), p as usize);
        assert!(fixed.iter().all(|x| x.as_prime().is_some()));
    }
}

#[test]
fn trace_examples() {
    let k = FieldCtx::extension(5, &[2, 0, 1]).unwrap();
    assert_eq!(k.one().trace_to_prime(), k.prime_field().from_u64(2));
    let c = k.from_u64(3);
    assert_eq!(c.trace_to_prime(), k.prime_field().from_u64(6));
    let u = k.from_coeffs(&[0, 1]).unwrap();
    // u + u⁵ computed by repeated multiplication
    let mut u5 = k.one();
    for _ in 0..5 {
        u5 *= u;
    }
    assert_eq!((u + u5).as_prime(), Some(0));
    assert!(u.trace_to_prime().is_zero());
}

#[test]
fn trace_additive_and_frobenius_invariant() {
    for (p, d) in [(5u64, 2usize), (7, 2), (5, 3), (11, 2)] {
        let k = FieldCtx::standard(p, d).unwrap();
        let mut rng = sample::rng(p * 10 + d as u64);
        for _ in 0..100 {
            let (x, y) = (k.random(&mut rng), k.random(&mut rng));
            assert_eq!((x + y).trace_to_prime(), x.trace_to_prime() + y.trace_to_prime());
            assert_eq!(x.frobenius().trace_to_prime(), x.trace_to_prime());
            let direct = (0..d).fold((k.zero(), x), |(acc, cur), _| (acc + cur, cur.pow(p as u128))).0;
            assert_eq!(Some(x.trace_to_prime().as_prime().unwrap()), direct.as_prime());
        }
    }
}

#[test]
fn factor_examples() {
    let k5 = FieldCtx::prime(5).unwrap();
    let f = factor(&Poly::from_i64s(k5, &[1, 0, 1])).unwrap();
    assert_eq!(f.factors, vec![(Poly::from_i64s(k5, &[2, 1]), 1), (Poly::from_i64s(k5, &[3, 1]), 1)]);
    let brute: Vec<u64> = (0..5).filter(|x| (x * x + 1) % 5 == 0).collect();
    assert_eq!(brute, vec![2, 3]);

    let k7 = FieldCtx::prime(7).unwrap();
    let z = Poly::x(k7);
    assert_eq!(factor(&z).unwrap().factors, vec![(z, 1)]);
    let g = Poly::from_i64s(k7, &[1, 0, 1]);
    assert!((0..7).all(|x| (x * x + 1) % 7 != 0));
    assert_eq!(factor(&g).unwrap().factors, vec![(g, 1)]);
    assert_eq!(factor(&Poly::zero(k7)), Err(GfError::ZeroPolynomial));
}

#[test]
fn factorizations_remultiply() {
    for p in [5u64, 7, 11] {
        let k = FieldCtx::prime(p).unwrap();
        let mut rng = sample::rng(100 + p);
        for _ in 0..200 {
            let deg = rng.gen_range(1..=6);
            let mut f = sample::poly(k, deg, &mut rng);
            if f.is_zero() {
                f = Poly::one(k);
            }
            let fac = factor_with_seed(&f, rng.gen()).unwrap();
            assert_eq!(fac.expand(), f);
            for (g, e) in &fac.factors {
                assert!(*e >= 1 && g.is_monic());
                if g.deg() <= 3 {
                    assert!(brute_irreducible(g), "{g:?}");
                }
            }
        }
    }
}

#[test]
fn irreducibility_matches_brute_force() {
    let k = FieldCtx::prime(5).unwrap();
    for d in 1..=3 {
        for f in monics(k, d) {
            assert_eq!(is_irreducible(&f), brute_irreducible(&f), "{f:?}");
        }
    }
}

#[test]
fn roots_over_extensions() {
    let k = FieldCtx::standard(5, 2).unwrap();
    let mut rng = sample::rng(3);
    for _ in 0..50 {
        let f = sample::monic(k, 3, &mut rng);
        let mut got = roots(&f).unwrap();
        got.sort_by_key(|x| x.key());
        let mut brute: Vec<Fq> = k.elements().filter(|x| f.eval(x).is_zero()).collect();
        brute.sort_by_key(|x| x.key());
        assert_eq!(got, brute);
    }
}

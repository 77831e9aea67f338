use std::collections::HashSet;

use agcode::gf::{Embedding, FieldError, FieldSpec};
use proptest::prelude::*;

/// Monic polynomials of degree `k` over `F_p` that are products of two
/// monic polynomials of positive degree, found by multiplying every pair.
fn reducible_monics(p: u64, k: usize) -> HashSet<Vec<u64>> {
    fn monics(p: u64, d: usize) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for idx in 0..p.pow(d as u32) {
            let mut c: Vec<u64> = (0..d).map(|i| (idx / p.pow(i as u32)) % p).collect();
            c.push(1);
            out.push(c);
        }
        out
    }
    let mut out = HashSet::new();
    for d in 1..k {
        for a in monics(p, d) {
            for b in monics(p, k - d) {
                let mut prod = vec![0u64; k + 1];
                for (i, x) in a.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                out.insert(prod);
            }
        }
    }
    out
}

/// Lex-smallest irreducible, with tuples compared from the constant term.
fn smallest_irreducible_oracle(p: u64, k: usize) -> Vec<u64> {
    let reducible = reducible_monics(p, k);
    let mut candidates: Vec<Vec<u64>> = (0..p.pow(k as u32))
        .map(|idx| {
            // idx read with c0 as the most significant digit
            let mut c: Vec<u64> = (0..k)
                .map(|i| (idx / p.pow((k - 1 - i) as u32)) % p)
                .collect();
            c.push(1);
            c
        })
        .filter(|c| !reducible.contains(c))
        .collect();
    candidates.sort();
    candidates.remove(0)
}

#[test]
fn default_moduli_match_sieve() {
    for (p, k) in [
        (2, 1),
        (2, 2),
        (2, 3),
        (2, 4),
        (3, 2),
        (3, 3),
        (3, 4),
        (5, 2),
        (7, 2),
        (2, 8),
    ] {
        let f = FieldSpec::new(p, k).unwrap();
        if k == 1 {
            assert_eq!(f.modulus(), &[0, 1]);
        } else {
            assert_eq!(
                f.modulus(),
                smallest_irreducible_oracle(p, k as usize).as_slice(),
                "F_{p}^{k}"
            );
        }
    }
}

#[test]
fn quartic_irreducibles_over_f2() {
    // 16 monic quartics, 13 of them reducible
    assert_eq!(16 - reducible_monics(2, 4).len(), 3);
    assert_eq!(FieldSpec::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
}

#[test]
fn rejected_moduli() {
    assert!(FieldSpec::with_modulus(2, vec![1, 0, 0, 0, 1]).is_err());
    assert!(FieldSpec::with_modulus(2, vec![1, 1, 0, 0, 1]).is_ok());
    assert!(FieldSpec::with_modulus(3, vec![1, 0, 2]).is_err());
    assert_eq!(FieldSpec::new(1, 1).unwrap_err(), FieldError::NotPrime(1));
}

fn exhaustive_axioms(f: &FieldSpec) {
    let els: Vec<_> = f.elements().collect();
    for a in &els {
        assert_eq!(a + &f.zero(), *a);
        assert_eq!(a * &f.one(), *a);
        assert!((a + &(-a)).is_zero());
        if !a.is_zero() {
            assert!((a * &a.inv().unwrap()).is_one());
        }
        for b in &els {
            assert_eq!(a + b, b + a);
            assert_eq!(a * b, b * a);
            for c in &els {
                assert_eq!(&(a * b) * c, a * &(b * c));
                assert_eq!(&(a + b) + c, a + &(b + c));
                assert_eq!(a * &(b + c), &(a * b) + &(a * c));
            }
        }
    }
}

#[test]
fn field_axioms_exhaustive_small() {
    for (p, k) in [
        (2, 1),
        (3, 1),
        (5, 1),
        (2, 2),
        (3, 2),
        (2, 3),
        (7, 1),
        (2, 4),
        (5, 2),
    ] {
        exhaustive_axioms(&FieldSpec::new(p, k).unwrap());
    }
}

#[test]
fn field_axioms_exhaustive_order_81() {
    exhaustive_axioms(&FieldSpec::new(3, 4).unwrap());
}

#[test]
fn encoding_is_a_bijection() {
    for (p, k) in [(2, 8), (3, 4), (5, 2), (13, 2), (3, 5)] {
        let f = FieldSpec::new(p, k).unwrap();
        let mut seen = HashSet::new();
        for e in 0..f.order() {
            let a = f.decode(e).unwrap();
            assert_eq!(a.enc(), e);
            assert!(seen.insert(a.coeffs().to_vec()));
        }
        assert!(f.decode(f.order()).is_err());
    }
}

#[test]
fn unit_orders_divide() {
    let f16 = FieldSpec::new(2, 4).unwrap();
    for a in f16.elements().skip(1) {
        assert!(a.pow(15).is_one());
    }
    let f9 = FieldSpec::new(3, 2).unwrap();
    let x = f9.generator();
    assert_eq!(&x * &x, f9.from_int(-1));
}

#[test]
fn roots_of_unity_are_primitive_and_smallest() {
    for (p, k, n) in [
        (3, 2, 4),
        (3, 2, 8),
        (2, 2, 3),
        (2, 4, 5),
        (2, 4, 3),
        (5, 1, 2),
        (7, 1, 3),
        (3, 4, 10),
    ] {
        let f = FieldSpec::new(p, k).unwrap();
        let z = f.root_of_unity(n).unwrap();
        assert!(z.pow(n).is_one());
        for i in 1..n {
            assert!(!z.pow(i).is_one(), "zeta^{i} = 1 in F_{}", f.order());
        }
        // nothing with a smaller encoding has exact order n
        for a in f.elements().skip(1).take_while(|a| a.enc() < z.enc()) {
            let order = (1..=n).find(|&i| a.pow(i).is_one());
            assert_ne!(order, Some(n));
        }
    }
    let f9 = FieldSpec::new(3, 2).unwrap();
    let z = f9.root_of_unity(4).unwrap();
    assert!(!z.pow(2).is_one());
    assert_eq!(f9.root_of_unity(1).unwrap(), f9.one());
    assert!(f9.root_of_unity(3).is_err());
}

#[test]
fn frobenius_on_f9() {
    let f9 = FieldSpec::new(3, 2).unwrap();
    let mut fixed = 0;
    for a in f9.elements() {
        let fa = f9.frobenius(3, &a).unwrap();
        assert_eq!(f9.frobenius(3, &fa).unwrap(), a);
        assert_eq!(f9.frobenius(9, &a).unwrap(), a);
        if fa == a {
            fixed += 1;
            assert!(a.coeffs()[1] == 0);
        }
    }
    assert_eq!(fixed, 3);
    assert_eq!(
        f9.frobenius(27, &f9.one()).unwrap_err(),
        FieldError::InvalidSubfield(27)
    );
}

#[test]
fn frobenius_is_an_automorphism() {
    for (p, k, s) in [(2, 4, 2), (2, 4, 4), (3, 2, 3), (5, 2, 5)] {
        let f = FieldSpec::new(p, k).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                let fr = |x: &agcode::FieldElement| f.frobenius(s, x).unwrap();
                assert_eq!(fr(&(&a + &b)), &fr(&a) + &fr(&b));
                assert_eq!(fr(&(&a * &b)), &fr(&a) * &fr(&b));
            }
        }
    }
}

#[test]
fn embeddings_are_homomorphisms() {
    let f3 = FieldSpec::new(3, 1).unwrap();
    let f9 = FieldSpec::new(3, 2).unwrap();
    let e = Embedding::new(&f3, &f9).unwrap();
    assert_eq!(e.apply(&f3.from_int(2)).unwrap(), f9.from_int(2));
    assert!(e.apply(&f3.zero()).unwrap().is_zero());

    let f4 = FieldSpec::new(2, 2).unwrap();
    let f16 = FieldSpec::new(2, 4).unwrap();
    let e = Embedding::new(&f4, &f16).unwrap();
    assert!(e.apply(&f4.one()).unwrap().is_one());
    let mut image = HashSet::new();
    for a in f4.elements() {
        let ea = e.apply(&a).unwrap();
        assert!(f16.in_subfield(4, &ea).unwrap());
        assert_eq!(e.preimage(&ea).unwrap(), a);
        image.insert(ea.enc());
        for b in f4.elements() {
            assert_eq!(e.apply(&(&a * &b)).unwrap(), &ea * &e.apply(&b).unwrap());
            assert_eq!(e.apply(&(&a + &b)).unwrap(), &ea + &e.apply(&b).unwrap());
        }
    }
    assert_eq!(image.len(), 4);
    assert_eq!(e.apply(&f16.one()).unwrap_err(), FieldError::FieldMismatch);
}

fn f256() -> FieldSpec {
    FieldSpec::new(2, 8).unwrap()
}

fn f6561() -> FieldSpec {
    FieldSpec::new(3, 8).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn axioms_sampled_f256(a in 0u64..256, b in 0u64..256, c in 0u64..256) {
        let f = f256();
        let (a, b, c) = (f.decode(a).unwrap(), f.decode(b).unwrap(), f.decode(c).unwrap());
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn axioms_sampled_f6561(a in 0u64..6561, b in 0u64..6561, c in 0u64..6561) {
        let f = f6561();
        let (a, b, c) = (f.decode(a).unwrap(), f.decode(b).unwrap(), f.decode(c).unwrap());
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }
}

use std::collections::HashSet;

use agcode::autgroup::{preserves_curve, AutGroup, ProjMap, DEFAULT_CLOSURE_CAP};
use agcode::families::{builtin_generators, Family};
use agcode::geometry::{projective_space, ProjPoint};
use agcode::gf::FieldSpec;

fn builtin_groups(family: Family, q: u64) -> (FieldSpec, AutGroup, AutGroup) {
    let f = family.field(q).unwrap();
    let (a, b) = builtin_generators(family, q, &f).unwrap();
    (
        f,
        AutGroup::close("G1", a, DEFAULT_CLOSURE_CAP).unwrap(),
        AutGroup::close("G2", b, DEFAULT_CLOSURE_CAP).unwrap(),
    )
}

#[test]
fn builtin_group_orders() {
    for (family, q, each, joined) in [
        (Family::Fermat, 3, 4, 16),
        (Family::Fermat, 4, 5, 25),
        (Family::ProjLine, 5, 2, 10),
        (Family::ProjLine, 7, 3, 21),
        (Family::ProjLine, 9, 4, 36),
        (Family::Bf, 2, 12, 144),
    ] {
        let (_, g1, g2) = builtin_groups(family, q);
        assert_eq!((g1.order(), g2.order()), (each, each), "{family} q={q}");
        assert!(g1.intersect(&g2).unwrap().is_trivial());
        let g = AutGroup::join("G", &[&g1, &g2], DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(g.order(), joined, "{family} q={q}");
        assert!(g.verify_closed().unwrap());
        assert!(g.elements()[0].is_identity());
        for sub in [&g1, &g2] {
            assert_eq!(g.order() % sub.order(), 0);
            assert!(sub.elements().iter().all(|x| g.contains(x)));
        }
    }
}

#[test]
fn every_element_preserves_the_curve() {
    for (family, q) in [(Family::Fermat, 3), (Family::Fermat, 4), (Family::Bf, 2)] {
        let (f, g1, g2) = builtin_groups(family, q);
        let curve = family.curve(q, &f).unwrap();
        let g = AutGroup::join("G", &[&g1, &g2], DEFAULT_CLOSURE_CAP).unwrap();
        for x in g.elements() {
            assert!(preserves_curve(x, &curve).unwrap());
        }
        let pts: HashSet<_> = curve.enumerate_points(&f).unwrap().into_iter().collect();
        for x in g.generators() {
            for p in &pts {
                assert!(pts.contains(&x.apply(p).unwrap()));
            }
        }
    }
}

#[test]
fn orbit_stabilizer() {
    let (f, g1, g2) = builtin_groups(Family::Fermat, 3);
    let g = AutGroup::join("G", &[&g1, &g2], DEFAULT_CLOSURE_CAP).unwrap();
    let curve = Family::Fermat.curve(3, &f).unwrap();
    for p in curve.enumerate_points(&f).unwrap() {
        let orbit = g.orbit(&p).unwrap();
        let stab = g
            .elements()
            .iter()
            .filter(|x| x.apply(&p).unwrap() == p)
            .count();
        assert_eq!(orbit.len() * stab, g.order());
        let multiset = g1.orbit_multiset(&p).unwrap();
        assert_eq!(multiset.values().sum::<u32>() as usize, g1.order());
    }
}

#[test]
fn galois_group_orbits_on_the_line_section() {
    let (f, g1, g2) = builtin_groups(Family::Fermat, 3);
    let curve = Family::Fermat.curve(3, &f).unwrap();
    let section = curve.line_section_points(&f).unwrap();
    let q = &section[0];
    assert_eq!(g1.orbit(q).unwrap(), section);
    assert_eq!(g2.orbit(q).unwrap(), section);
    let q_prime = ProjPoint::new(vec![f.one(), f.one(), f.one()]).unwrap();
    assert_eq!(g1.orbit(&q_prime).unwrap().len(), 4);
}

#[test]
fn compose_matches_apply() {
    let (f, g1, g2) = builtin_groups(Family::ProjLine, 7);
    let pts = projective_space(&f, 2).unwrap();
    for a in g1.elements().iter().chain(g2.elements()) {
        for b in g2.elements() {
            let ab = a.compose(b).unwrap();
            for p in &pts {
                assert_eq!(ab.apply(p).unwrap(), a.apply(&b.apply(p).unwrap()).unwrap());
            }
        }
        assert!(a.compose(&a.inverse()).unwrap().is_identity());
    }
}

#[test]
fn shear_is_not_an_automorphism() {
    let f = Family::Fermat.field(3).unwrap();
    let curve = Family::Fermat.curve(3, &f).unwrap();
    let (o, l) = (f.zero(), f.one());
    let shear = ProjMap::new(vec![
        vec![l.clone(), l.clone(), o.clone()],
        vec![o.clone(), l.clone(), o.clone()],
        vec![o.clone(), o, l],
    ])
    .unwrap();
    assert!(!preserves_curve(&shear, &curve).unwrap());
    // a non-preserving element still closes to a group of order 3
    let g = AutGroup::close("shear", vec![shear], DEFAULT_CLOSURE_CAP).unwrap();
    assert_eq!(g.order(), 3);
}

#[test]
fn scalar_matrices_are_the_identity() {
    let f = FieldSpec::new(5, 1).unwrap();
    let two = f.from_int(2);
    let m = ProjMap::diagonal(&[two.clone(), two.clone(), two]).unwrap();
    assert!(m.is_identity());
    assert!(ProjMap::diagonal(&[f.one(), f.zero(), f.one()]).is_err());
}

#[test]
fn closure_cap_is_enforced() {
    let (_, g1, g2) = builtin_groups(Family::Bf, 2);
    assert!(AutGroup::join("G", &[&g1, &g2], 100).is_err());
}

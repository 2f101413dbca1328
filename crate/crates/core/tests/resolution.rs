
use purederive_core::complex::homotopy_between;
use purederive_core::gen::{self, Limits};
use purederive_core::resolve::lift_along_resolutions;
use purederive_core::{
    is_pure_quasi_iso, pure_injective_resolution, pure_projective_resolution, purity_profile, total_hom, BaseRing, BoundedComplex, ChainMap,
    ExtendedInt, FgModule, ModuleMap, Resolution, Side, TestFamily,
};

fn small() -> Limits {
    Limits { max_gens: 2, max_relations: 2, max_entry: 4, free_weight: 0.3 }
}

fn contractible(m: &FgModule, n: i64) -> BoundedComplex {
    BoundedComplex::two_term(&ModuleMap::identity(m), n)
}

fn identity_resolution(p: &BoundedComplex, side: Side, tests: &TestFamily) -> Resolution {
    let map = ChainMap::identity(p);
    let certificate = is_pure_quasi_iso(&map, tests).unwrap();
    Resolution { side, target: p.clone(), resolvent: p.clone(), map, certificate }
}

#[test]
fn padding_by_contractibles_preserves_profile() {
    let mut rng = gen::rng(41);
    for k in 0..60 {
        let ring = if k % 2 == 0 { BaseRing::Integers } else { BaseRing::integers_mod(8).unwrap() };
        let tests = TestFamily::base(&ring, 64);
        let x = gen::complex(&mut rng, &ring, -1, 3, &small());
        let m = gen::module(&mut rng, &ring, &small());
        let sum = x.direct_sum(&contractible(&m, (k % 3) as i64 - 1));
        let inc = &sum.inclusions[0];
        assert!(is_pure_quasi_iso(inc, &tests).unwrap().is_yes(), "#{k}");
        let (a, b) = (purity_profile(&x, &tests).unwrap(), purity_profile(&sum.complex, &tests).unwrap());
        assert_eq!((a.inf_p, a.sup_p), (b.inf_p, b.sup_p), "#{k}");
    }
}

#[test]
fn failure_sets_are_additive() {
    let mut rng = gen::rng(42);
    for k in 0..60 {
        let ring = if k % 2 == 0 { BaseRing::Integers } else { BaseRing::integers_mod(4).unwrap() };
        let tests = TestFamily::base(&ring, 64);
        let x = gen::complex(&mut rng, &ring, -1, 2 + k % 2, &small());
        let y = gen::complex(&mut rng, &ring, 0, 2, &small());
        let s = x.direct_sum(&y).complex;
        let mut union = purity_profile(&x, &tests).unwrap().failing_degrees();
        union.extend(purity_profile(&y, &tests).unwrap().failing_degrees());
        union.sort();
        union.dedup();
        assert_eq!(purity_profile(&s, &tests).unwrap().failing_degrees(), union, "#{k}");
    }
}

#[test]
fn pure_exact_complexes_stay_exact_under_tensor() {
    let mut rng = gen::rng(43);
    let mut seen = 0;
    for k in 0..150 {
        let ring = if k % 2 == 0 { BaseRing::Integers } else { BaseRing::integers_mod(12).unwrap() };
        let tests = TestFamily::base(&ring, 64);
        let x = gen::complex(&mut rng, &ring, -1, 3, &small());
        let p = purity_profile(&x, &tests).unwrap();
        if !p.is_pure_exact() {
            continue;
        }
        seen += 1;
        for d in [0, 2, 3, 4, 6, 8, 9, 12] {
            let f = FgModule::cyclic(&ring, d);
            assert!(x.tensor_with(&f).is_acyclic(), "#{k} against R/({d})");
        }
    }
    // split pieces always give pure exact complexes
    let r = BaseRing::Integers;
    let c = contractible(&FgModule::cyclic(&r, 6), 0).direct_sum(&contractible(&FgModule::free(&r, 1), 1)).complex;
    assert!(purity_profile(&c, &TestFamily::base(&r, 64)).unwrap().is_pure_exact());
    assert!(seen > 0);
}

#[test]
fn resolutions_have_the_right_shape() {
    let mut rng = gen::rng(44);
    for k in 0..80 {
        let ring = if k % 2 == 0 { BaseRing::Integers } else { BaseRing::integers_mod(8).unwrap() };
        let tests = TestFamily::base(&ring, 64);
        let x = gen::complex(&mut rng, &ring, -1, 1 + k % 4, &small());
        let profile = purity_profile(&x, &tests).unwrap();
        let r = pure_projective_resolution(&x, &tests).unwrap();
        assert!(r.terms_in_class() && r.certificate.is_yes(), "#{k}");
        let rp = purity_profile(&r.resolvent, &tests).unwrap();
        assert_eq!((rp.inf_p, rp.sup_p), (profile.inf_p, profile.sup_p));
        if ring.is_finite() {
            let i = pure_injective_resolution(&x, &tests).unwrap();
            assert!(i.terms_in_class() && i.certificate.is_yes(), "#{k}");
        }
    }
}

#[test]
fn hom_from_resolvents_into_pure_exact_is_exact() {
    let mut rng = gen::rng(45);
    for k in 0..40 {
        let ring = if k % 2 == 0 { BaseRing::Integers } else { BaseRing::integers_mod(8).unwrap() };
        let tests = TestFamily::base(&ring, 64);
        let x = gen::complex(&mut rng, &ring, -1, 2, &small());
        let p = pure_projective_resolution(&x, &tests).unwrap().resolvent;
        let m = gen::finite_module(&mut rng, &ring, &small());
        let n = gen::module(&mut rng, &ring, &small());
        let e = contractible(&m, 0).direct_sum(&contractible(&n, -1)).complex;
        assert!(total_hom(&p, &e).unwrap().complex.is_acyclic(), "#{k}");
        if ring.is_finite() {
            let i = pure_injective_resolution(&x, &tests).unwrap().resolvent;
            assert!(total_hom(&e, &i).unwrap().complex.is_acyclic(), "#{k}");
        }
    }
}

#[test]
fn lifts_between_resolvents_are_homotopy_equivalences() {
    let mut rng = gen::rng(46);
    for k in 0..40 {
        let ring = if k % 2 == 0 { BaseRing::Integers } else { BaseRing::integers_mod(6).unwrap() };
        let tests = TestFamily::base(&ring, 64);
        let x = gen::complex(&mut rng, &ring, -1, 2 + k % 2, &small());
        let r1 = pure_projective_resolution(&x, &tests).unwrap();
        let pad = contractible(&gen::module(&mut rng, &ring, &small()), -1);
        let sum = r1.resolvent.direct_sum(&pad);
        let map = sum.projections[0].then(&r1.map).unwrap();
        let certificate = is_pure_quasi_iso(&map, &tests).unwrap();
        let r2 = Resolution { side: Side::Projective, target: x.clone(), resolvent: sum.complex.clone(), map, certificate };
        let id = ChainMap::identity(&x);
        let (phi, _) = lift_along_resolutions(&id, &r1, &r2).unwrap();
        let (psi, _) = lift_along_resolutions(&id, &r2, &r1).unwrap();
        assert!(homotopy_between(&phi.then(&psi).unwrap(), &ChainMap::identity(&r1.resolvent)).is_some(), "#{k}");
        assert!(homotopy_between(&psi.then(&phi).unwrap(), &ChainMap::identity(&r2.resolvent)).is_some(), "#{k}");

        // resolving a resolvent gives a homotopy-equivalent complex
        let p = &r1.resolvent;
        let again = pure_projective_resolution(p, &tests).unwrap();
        let (t, _) = lift_along_resolutions(&ChainMap::identity(p), &identity_resolution(p, Side::Projective, &tests), &again).unwrap();
        assert!(homotopy_between(&t.then(&again.map).unwrap(), &ChainMap::identity(p)).is_some());
        assert!(homotopy_between(&again.map.then(&t).unwrap(), &ChainMap::identity(&again.resolvent)).is_some());
    }
}

#[test]
fn two_term_resolution_keeps_profile() {
    let r = BaseRing::Integers;
    let z = FgModule::free(&r, 1);
    let x = BoundedComplex::two_term(&ModuleMap::scalar(&z, &purederive_core::int(2)), -1);
    let tests = TestFamily::base(&r, 64);
    let res = pure_projective_resolution(&x, &tests).unwrap();
    let p = purity_profile(&res.resolvent, &tests).unwrap();
    assert_eq!(p.inf_p, ExtendedInt::Finite(-1));
    assert_eq!(p.sup_p, ExtendedInt::Finite(0));
}

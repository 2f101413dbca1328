use purederive_core::dim::{pgldim_probe, pid, ppd, ppd_with_samples, Evidence, Samples};
use purederive_core::gen::{self, Limits};
use purederive_core::{BaseRing, BoundedComplex, ExtendedInt, TestFamily};

fn small() -> Limits {
    Limits { max_gens: 2, max_relations: 2, max_entry: 4, free_weight: 0.3 }
}

#[test]
fn projective_criteria_agree_on_random_complexes() {
    let mut rng = gen::rng(11);
    for ring in [BaseRing::Integers, BaseRing::integers_mod(8).unwrap()] {
        let tests = TestFamily::base(&ring, TestFamily::DEFAULT_CAP);
        for k in 0..100 {
            let len = 1 + k % 3;
            let x = gen::complex(&mut rng, &ring, -1, len, &small());
            let rep = ppd(&x, &tests).unwrap_or_else(|e| panic!("{ring:?} #{k}: {e}\n{x:?}"));
            // in scope every finitely generated cokernel is pure projective
            let expected = match rep.inf_p {
                ExtendedInt::Finite(i) => ExtendedInt::Finite(-i),
                ExtendedInt::PosInf => ExtendedInt::NegInf,
                other => panic!("inf_p = {other}"),
            };
            assert_eq!(rep.value, expected, "{ring:?} #{k}");
        }
    }
}

#[test]
fn injective_criteria_agree_over_z8() {
    let mut rng = gen::rng(12);
    let ring = BaseRing::integers_mod(8).unwrap();
    let tests = TestFamily::base(&ring, TestFamily::DEFAULT_CAP);
    for k in 0..100 {
        let x = gen::complex(&mut rng, &ring, 0, 1 + k % 3, &small());
        let rep = pid(&x, &tests).unwrap_or_else(|e| panic!("#{k}: {e}\n{x:?}"));
        assert_eq!(rep.value, rep.sup_p, "#{k}");
    }
}

#[test]
fn sampled_partners_never_contradict() {
    let mut rng = gen::rng(13);
    for ring in [BaseRing::Integers, BaseRing::integers_mod(8).unwrap()] {
        let tests = TestFamily::base(&ring, TestFamily::DEFAULT_CAP);
        for k in 0..15 {
            let x = gen::complex(&mut rng, &ring, -1, 2, &small());
            let samples = Samples { complexes: (0..3).map(|_| gen::complex(&mut rng, &ring, -1, 2, &small())).collect() };
            let rep = ppd_with_samples(&x, &tests, &samples).unwrap_or_else(|e| panic!("#{k}: {e}"));
            for c in &rep.per_n {
                let four = c.outcome(4).unwrap();
                assert!(c.verdict() == Some(false) || four.holds);
                if four.holds {
                    assert!(matches!(four.evidence, Evidence::Consistent { .. }));
                }
            }
        }
    }
}

#[test]
fn probe_over_z_mod_4() {
    let r = BaseRing::integers_mod(4).unwrap();
    let mut rng = gen::rng(14);
    let samples: Vec<BoundedComplex> =
        (0..50).map(|_| BoundedComplex::stalk(&gen::finite_module(&mut rng, &r, &small()), 0)).collect();
    let rep = pgldim_probe(&r, &samples, 0, false, &TestFamily::base(&r, 64)).unwrap();
    assert_eq!(rep.observed_bound, ExtendedInt::Finite(0));
    assert_eq!(rep.nonzero_higher_pext, 0);
    assert!(rep.all_hold());
}

#[test]
fn global_dimension_inequalities_on_complexes() {
    let mut rng = gen::rng(15);
    for (ring, n) in [(BaseRing::integers_mod(4).unwrap(), 0), (BaseRing::Integers, 1)] {
        let samples: Vec<BoundedComplex> = (0..12).map(|k| gen::complex(&mut rng, &ring, -1, 1 + k % 3, &small())).collect();
        let rep = pgldim_probe(&ring, &samples, n, false, &TestFamily::base(&ring, 64)).unwrap();
        let bad: Vec<_> = rep.checks.iter().filter(|c| !c.holds).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }
    let samples: Vec<BoundedComplex> = (0..5).map(|_| BoundedComplex::stalk(&gen::module(&mut rng, &BaseRing::Integers, &small()), 0)).collect();
    let rep = pgldim_probe(&BaseRing::Integers, &samples, 1, false, &TestFamily::base(&BaseRing::Integers, 64)).unwrap();
    assert_eq!(rep.observed_bound, ExtendedInt::Finite(0));
    assert!(rep.fg_blind);
    let rep = pgldim_probe(&BaseRing::Integers, &samples, 1, true, &TestFamily::base(&BaseRing::Integers, 64)).unwrap();
    assert_eq!(rep.reported_bound(), ExtendedInt::Finite(1));
    assert!(!rep.fg_blind);
}

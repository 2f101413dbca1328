use num_integer::Integer;
use num_traits::{One, Zero};
use purederive_core::gen;
use purederive_core::tower::{verify_witness, CocycleTail, CocycleVerdict, Direction, TailRule};
use purederive_core::{
    cocycle_decide, colim_presentation, hocolim_resolution, holim_injective_resolution, int, pext1_colim, BaseRing, Cocycle, FgModule, Int,
    ModuleMap, RingMatrix, TestFamily, Tower,
};
use rand::Rng;

fn z() -> BaseRing {
    BaseRing::Integers
}

#[test]
fn truncated_one_shift_sequences_are_exact_and_pure() {
    let mut rng = gen::rng(51);
    for _ in 0..12 {
        let t = gen::direct_tower(&mut rng);
        for d in 1..=8 {
            let p = colim_presentation(&t, d).unwrap();
            assert!(p.exact && p.monic && p.truncation_pure, "{:?} depth {d}", t.tail());
        }
    }
}

#[test]
fn hocolim_certificates_up_to_depth_five() {
    let tests = TestFamily::base(&z(), 64);
    for t in [Tower::rational(), Tower::prufer(2), Tower::constant(&FgModule::cyclic(&z(), 4), Direction::Direct)] {
        for d in 1..=5 {
            let h = hocolim_resolution(&t, d, &tests).unwrap();
            assert!(h.resolution.terms_in_class() && h.resolution.certificate.is_yes());
            assert!(h.ppd_bound <= 1);
        }
    }
}

#[test]
fn rational_hom_tower_into_z() {
    let mut lim = pext1_colim(&Tower::rational(), &FgModule::free(&z(), 1)).unwrap();
    for i in 0..6 {
        let h = lim.stage_hom(i).module;
        assert_eq!(h.canonical_form().free_rank, 1);
        let rho = lim.restriction(i);
        let one = lim.stage_hom(i + 1).module.from_canonical(&[Int::one()]);
        assert_eq!(lim.stage_hom(i).module.to_canonical(&rho.apply(&one)), vec![int(i as i64 + 2)]);
    }
    let mut zero = pext1_colim(&Tower::rational(), &FgModule::zero(&z())).unwrap();
    assert!(zero.is_zero_system());
    let mut prufer = pext1_colim(&Tower::prufer(2), &FgModule::free(&z(), 1)).unwrap();
    assert!(prufer.is_zero_system());
}

/// All-ones on the rational tower: `a_0 = 1 + 2 a_1 = 1 + 2 + 2*3 a_2 = ...`.
/// Enumerate integers in `[-B, B]` and keep those meeting every prefix congruence.
#[test]
fn all_ones_cocycle_has_no_integer_solution() {
    let mut lim = pext1_colim(&Tower::rational(), &FgModule::free(&z(), 1)).unwrap();
    let verdict = cocycle_decide(&mut lim, &Cocycle::all_ones(), 8).unwrap();
    let CocycleVerdict::NotCoboundary(cert) = verdict else { panic!("{verdict:?}") };
    let depth = 8;
    let (mut m, mut s) = (Int::one(), Int::zero());
    let mut congruences = vec![];
    for k in 0..depth {
        s += &m;
        m *= int(k as i64 + 2);
        congruences.push((m.clone(), s.mod_floor(&m)));
    }
    let bound = 2000;
    let survivors: Vec<i64> = (-bound..=bound).filter(|&a| congruences.iter().all(|(m, r)| int(a).mod_floor(m) == *r)).collect();
    assert!(survivors.is_empty(), "{survivors:?}");
    // residues stay away from both ends of [0, M_k)
    for (k, mk, rk) in cert.residues.iter().skip(2) {
        let (_, prev, _) = &cert.residues[k - 1];
        assert!(rk >= prev && &(mk - rk) >= prev, "k = {k}");
    }
    for (k, (mk, rk)) in congruences.iter().enumerate() {
        assert_eq!(&cert.residues[k + 1].1, mk);
        assert_eq!(&cert.residues[k + 1].2, rk);
    }
}

#[test]
fn cocycles_into_finite_targets_are_coboundaries() {
    let mut rng = gen::rng(52);
    for k in 0..40 {
        let t = gen::direct_tower(&mut rng);
        let n = FgModule::cyclic(&z(), [2, 4, 8, 6, 3][k % 5]);
        let mut lim = pext1_colim(&t, &n).unwrap();
        assert!(lim.has_finite_stages());
        let len = rng.gen_range(1..4);
        let prefix: Vec<Vec<Int>> = (0..len)
            .map(|i| (0..lim.stage_hom(i).module.gens()).map(|_| int(rng.gen_range(0..8))).collect())
            .collect();
        let tail = if rng.gen_bool(0.5) { CocycleTail::RepeatLast } else { CocycleTail::Zero };
        let c = Cocycle { prefix, tail };
        match cocycle_decide(&mut lim, &c, 12).unwrap() {
            CocycleVerdict::Coboundary(w) => assert!(verify_witness(&mut lim, &c, &w, 30), "#{k}"),
            other => panic!("#{k} {:?}: {other:?}", t.tail()),
        }
    }
}

#[test]
fn eventually_zero_cocycles_are_coboundaries() {
    let mut lim = pext1_colim(&Tower::rational(), &FgModule::free(&z(), 1)).unwrap();
    let c = Cocycle { prefix: vec![vec![int(5)], vec![int(-3)], vec![int(7)]], tail: CocycleTail::Zero };
    match cocycle_decide(&mut lim, &c, 8).unwrap() {
        CocycleVerdict::Coboundary(w) => {
            assert!(verify_witness(&mut lim, &c, &w, 20));
            // a_2 = 7, a_1 = -3 + 3 * 7, a_0 = 5 + 2 * 18
            assert_eq!(w.value(0), vec![int(41)]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn power_quotient_cocycles_into_two_power_targets() {
    for e in [2, 4, 8] {
        let mut lim = pext1_colim(&Tower::prufer(2), &FgModule::cyclic(&z(), e)).unwrap();
        let c = Cocycle { prefix: vec![vec![Int::one()]], tail: CocycleTail::RepeatLast };
        assert!(cocycle_decide(&mut lim, &c, 8).unwrap().is_coboundary());
    }
}

#[test]
fn holim_examples() {
    let r4 = BaseRing::integers_mod(4).unwrap();
    let m = FgModule::from_factors(&r4, &[int(2), int(4)]);
    let h = holim_injective_resolution(&Tower::constant(&m, Direction::Inverse), 3, &TestFamily::base(&r4, 64)).unwrap();
    assert_eq!(h.pid_bound, 0);
    let r8 = BaseRing::integers_mod(8).unwrap();
    let stages = vec![FgModule::cyclic(&r8, 2), FgModule::cyclic(&r8, 4), FgModule::cyclic(&r8, 8)];
    let maps = vec![
        ModuleMap::new(&stages[1], &stages[0], RingMatrix::ints(&r8, &[&[1]])).unwrap(),
        ModuleMap::new(&stages[2], &stages[1], RingMatrix::ints(&r8, &[&[1]])).unwrap(),
    ];
    let t = Tower::new(&r8, Direction::Inverse, stages, maps, TailRule::EventuallyIso).unwrap();
    for d in 1..=5 {
        let h = holim_injective_resolution(&t, d, &TestFamily::base(&r8, 64)).unwrap();
        assert!(h.resolution.terms_in_class());
        assert!(h.pid_bound <= 1);
    }
}

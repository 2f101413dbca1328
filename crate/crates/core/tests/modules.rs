use std::collections::HashSet;

use purederive_core::gen::{self, Limits};
use purederive_core::module::{hom_module, hom_post, split_analysis, tensor_left, tensor_module, SplitVerdict};
use purederive_core::purity::SequenceVerdict;
use purederive_core::{int, is_pure_sequence, BaseRing, FgModule, Int, ModuleMap, RingMatrix, TestFamily};
use rand::Rng;

fn order(m: &FgModule) -> usize {
    m.elements().expect("finite").len()
}

/// Random unimodular matrix with its inverse, as a product of elementary moves.
fn unimodular(rng: &mut impl Rng, ring: &BaseRing, n: usize) -> (RingMatrix, RingMatrix) {
    let mut p = RingMatrix::identity(ring, n);
    let mut q = RingMatrix::identity(ring, n);
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = int(rng.gen_range(-3..=3));
        // row_i += c row_j on p; inverse acts on q columns
        let mut e = RingMatrix::identity(ring, n);
        e.set(i, j, c.clone());
        let mut e_inv = RingMatrix::identity(ring, n);
        e_inv.set(i, j, -c);
        p = e.mul(&p).unwrap();
        q = q.mul(&e_inv).unwrap();
    }
    (p, q)
}

#[test]
fn canonical_form_is_presentation_invariant() {
    let mut rng = gen::rng(21);
    for ring in [BaseRing::Integers, BaseRing::integers_mod(12).unwrap()] {
        for _ in 0..200 {
            let m = gen::module(&mut rng, &ring, &Limits::default());
            let g = m.gens();
            // new generators e' = P e, so a relation r e = 0 reads (r P^-1) e' = 0
            let (_, p_inv) = unimodular(&mut rng, &ring, g);
            let rel = m.relations();
            let mut rows: Vec<Vec<Int>> = (0..rel.rows()).map(|i| p_inv.left_apply(rel.row(i))).collect();
            // a redundant combination of relations
            if rows.len() >= 2 {
                let extra: Vec<Int> = rows[0].iter().zip(&rows[1]).map(|(a, b)| a * 2 - b).collect();
                rows.push(extra);
            }
            let m2 = FgModule::from_relations(&ring, g, &rows).unwrap();
            assert_eq!(m.canonical_form(), m2.canonical_form());
            let (c, _, _) = m.canonical_iso();
            assert_eq!(c.canonical_form(), m.canonical_form());
        }
    }
}

#[test]
fn hom_and_tensor_sizes_for_cyclic_pairs() {
    let z = BaseRing::Integers;
    for a in 1..=12i64 {
        for b in 1..=12i64 {
            let (ma, mb) = (FgModule::cyclic(&z, a), FgModule::cyclic(&z, b));
            // Hom(Z/a, Z/b) = { x in Z/b : a x = 0 }
            let homs = (0..b).filter(|x| (a * x) % b == 0).count();
            assert_eq!(order(&hom_module(&ma, &mb).module), homs, "Hom(Z/{a}, Z/{b})");
            // Z/a (x) Z/b = (Z/b) / a(Z/b)
            let multiples: HashSet<i64> = (0..b).map(|x| (a * x) % b).collect();
            assert_eq!(order(&tensor_module(&ma, &mb).module), (b as usize) / multiples.len(), "Z/{a} (x) Z/{b}");
        }
    }
    for m in 2..=12i64 {
        let r = BaseRing::integers_mod(m).unwrap();
        for a in (1..=m).filter(|d| m % d == 0) {
            for b in (1..=m).filter(|d| m % d == 0) {
                let (ma, mb) = (FgModule::cyclic(&r, a), FgModule::cyclic(&r, b));
                let homs = (0..b).filter(|x| (a * x) % b == 0).count();
                assert_eq!(order(&hom_module(&ma, &mb).module), homs);
                let multiples: HashSet<i64> = (0..b).map(|x| (a * x) % b).collect();
                assert_eq!(order(&tensor_module(&ma, &mb).module), (b as usize) / multiples.len());
            }
        }
    }
}

#[test]
fn kernel_times_image_is_domain() {
    let mut rng = gen::rng(22);
    for m in [4, 6, 8, 12] {
        let ring = BaseRing::integers_mod(m).unwrap();
        for _ in 0..60 {
            let a = gen::module(&mut rng, &ring, &Limits::default());
            let b = gen::module(&mut rng, &ring, &Limits::default());
            let f = gen::map(&mut rng, &a, &b, 6);
            let elems = a.elements().unwrap();
            let ker = elems.iter().filter(|x| b.is_zero_element(&f.apply(x))).count();
            let img: HashSet<Vec<Int>> = elems.iter().map(|x| b.to_canonical(&f.apply(x))).collect();
            assert_eq!(ker * img.len(), elems.len());
            let sq = f.subquotients();
            assert_eq!(order(&sq.kernel), ker);
            assert_eq!(order(&sq.image), img.len());
            assert_eq!(order(&sq.cokernel) * img.len(), order(&b));
        }
    }
}

/// Does `g` admit a section? Decided by enumerating `Hom(C, B)`.
fn splits_by_enumeration(g: &ModuleMap) -> bool {
    let h = hom_module(g.codomain(), g.domain());
    let id = ModuleMap::identity(g.codomain());
    h.module.elements().unwrap().iter().any(|c| h.decode(c).then(g).unwrap().equals(&id))
}

#[test]
fn purity_oracles_agree_on_random_sequences() {
    let mut rng = gen::rng(23);
    let rings = [
        BaseRing::Integers,
        BaseRing::integers_mod(4).unwrap(),
        BaseRing::integers_mod(6).unwrap(),
        BaseRing::integers_mod(8).unwrap(),
    ];
    let mut pure = 0;
    for ring in &rings {
        let tests = TestFamily::base(ring, TestFamily::DEFAULT_CAP);
        for _ in 0..80 {
            let s = gen::short_exact(&mut rng, ring, &Limits::default());
            let verdict = is_pure_sequence(&s, &tests).expect("oracles agree");
            let split = matches!(split_analysis(&s).unwrap(), SplitVerdict::Split { .. });
            assert_eq!(verdict.is_pure(), split);
            if s.middle().is_finite() && s.right().is_finite() {
                assert_eq!(split, splits_by_enumeration(&s.g));
            }
            if let SequenceVerdict::Pure(_) = verdict {
                pure += 1;
                let mut family = tests.clone();
                family.add_modules(&[s.left().clone(), s.middle().clone(), s.right().clone()]);
                for f in family.modules() {
                    assert!(tensor_left(f, &s.f).2.is_injective());
                    let (_, hc, post) = hom_post(f, &s.g);
                    assert!((0..hc.module.gens()).all(|t| post.preimage(&hc.module.basis_vector(t)).is_some()));
                }
            }
        }
    }
    assert!(pure > 0 && pure < 320, "{pure} pure sequences of 320");
}

#[test]
fn multiplication_by_two_on_z_mod_four_is_not_pure() {
    let r = BaseRing::integers_mod(4).unwrap();
    let z2 = FgModule::cyclic(&r, 2);
    let z4 = FgModule::free(&r, 1);
    let f = ModuleMap::new(&z2, &z4, RingMatrix::ints(&r, &[&[2]])).unwrap();
    let g = ModuleMap::new(&z4, &z2, RingMatrix::ints(&r, &[&[1]])).unwrap();
    let s = purederive_core::ShortSequence::new(f, g).unwrap();
    let v = is_pure_sequence(&s, &TestFamily::base(&r, 64)).unwrap();
    match v {
        SequenceVerdict::NotPure(w) => assert_eq!(w.test_module.canonical_form(), z2.canonical_form()),
        other => panic!("{other:?}"),
    }
}

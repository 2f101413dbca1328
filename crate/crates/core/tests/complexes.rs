use std::collections::BTreeMap;

use purederive_core::complex::{null_homotopy, TruncationMode};
use purederive_core::dim::{pext_table, PextRoute};
use purederive_core::gen::{self, Limits};
use purederive_core::module::hom_module;
use rand::Rng;
use purederive_core::{
    cone, int, purity_profile, total_hom, truncate, BaseRing, BoundedComplex, ChainMap, Error, FgModule, Int, ModuleMap, RingMatrix, TestFamily,
};

fn small() -> Limits {
    Limits { max_gens: 2, max_relations: 2, max_entry: 4, free_weight: 0.3 }
}

/// `a` then `b` is exact in the middle.
fn exact_at(a: &ModuleMap, b: &ModuleMap) -> bool {
    if !a.then(b).unwrap().is_zero() {
        return false;
    }
    let k = b.subquotients();
    (0..k.kernel.gens()).all(|t| a.preimage(&k.kernel_inclusion.apply(&k.kernel.basis_vector(t))).is_some())
}

#[test]
fn cone_long_exact_sequence() {
    let mut rng = gen::rng(31);
    for k in 0..200 {
        let ring = if k % 2 == 0 { BaseRing::Integers } else { BaseRing::integers_mod(12).unwrap() };
        let x = gen::complex(&mut rng, &ring, -1, 2 + k % 2, &small());
        let y = gen::complex(&mut rng, &ring, -1, 2 + (k / 2) % 2, &small());
        let f = gen::chain_map(&mut rng, &x, &y, 3);
        let t = cone(&f);
        let (lo, hi) = t.cone.range().unwrap();
        for n in lo - 1..=hi + 1 {
            let hf = f.on_homology(n);
            let hi_ = t.into_cone.on_homology(n);
            let hp = t.to_shift.on_homology(n);
            let hf1 = f.shift(1).on_homology(n);
            assert!(exact_at(&hf, &hi_), "#{k} at H^{n}(Y)");
            assert!(exact_at(&hi_, &hp), "#{k} at H^{n}(cone)");
            assert!(exact_at(&hp, &hf1), "#{k} at H^{}(X)", n + 1);
        }
    }
}

#[test]
fn total_hom_differential_squares_to_zero() {
    let mut rng = gen::rng(32);
    for k in 0..200 {
        let ring = if k % 2 == 0 { BaseRing::Integers } else { BaseRing::integers_mod(8).unwrap() };
        let x = gen::complex(&mut rng, &ring, -1, 1 + k % 3, &small());
        let y = gen::complex(&mut rng, &ring, 0, 1 + (k / 3) % 3, &small());
        let th = total_hom(&x, &y).unwrap();
        let (lo, hi) = th.complex.range().unwrap();
        for n in lo - 1..=hi {
            assert!(th.differential(n).then(&th.differential(n + 1)).unwrap().is_zero(), "#{k} degree {n}");
        }
    }
}

fn all_matrices(ring: &BaseRing, rows: usize, cols: usize) -> Vec<RingMatrix> {
    let n = rows * cols;
    (0..1u32 << n)
        .map(|bits| {
            let entries: Vec<Int> = (0..n).map(|i| int(((bits >> i) & 1) as i64)).collect();
            RingMatrix::new(ring.clone(), rows, cols, entries).unwrap()
        })
        .collect()
}

/// Every `(R/2)`-linear map family of degree `deg` between two complexes of free `Z/2`-modules.
fn graded_maps(x: &BoundedComplex, y: &BoundedComplex, deg: i64) -> Vec<BTreeMap<i64, ModuleMap>> {
    let ring = x.ring().clone();
    let (lo, hi) = x.range().unwrap();
    let mut out = vec![BTreeMap::new()];
    for i in lo..=hi {
        let (a, b) = (x.term(i), y.term(i + deg));
        let choices = all_matrices(&ring, a.gens(), b.gens());
        out = out
            .into_iter()
            .flat_map(|m| {
                let (a, b) = (a.clone(), b.clone());
                choices.iter().map(move |c| {
                    let mut m = m.clone();
                    m.insert(i, ModuleMap::new(&a, &b, c.clone()).unwrap());
                    m
                })
            })
            .collect();
    }
    out
}

/// Three free `Z/2` terms with random differentials, rejection-sampled for `d o d = 0`.
fn free_complex(rng: &mut impl Rng, r: &BaseRing, lo: i64) -> BoundedComplex {
    loop {
        let ranks: Vec<usize> = (0..3).map(|_| rng.gen_range(0..=2)).collect();
        let terms: Vec<FgModule> = ranks.iter().map(|&n| FgModule::free(r, n)).collect();
        let diffs: Vec<ModuleMap> = (0..2)
            .map(|i| {
                let entries = (0..ranks[i] * ranks[i + 1]).map(|_| int(rng.gen_range(0..2))).collect();
                ModuleMap::new(&terms[i], &terms[i + 1], RingMatrix::new(r.clone(), ranks[i], ranks[i + 1], entries).unwrap()).unwrap()
            })
            .collect();
        if let Ok(x) = BoundedComplex::new(r, lo, terms, diffs) {
            return x;
        }
    }
}

#[test]
fn homotopy_classes_match_degree_zero_cohomology() {
    let r = BaseRing::integers_mod(2).unwrap();
    let mut rng = gen::rng(33);
    for k in 0..25 {
        let x = free_complex(&mut rng, &r, 0);
        let y = free_complex(&mut rng, &r, -(k % 2));
        let chain: Vec<ChainMap> = graded_maps(&x, &y, 0).into_iter().filter_map(|c| ChainMap::new(&x, &y, c).ok()).collect();
        let null = chain.iter().filter(|f| null_homotopy(f).is_some()).count();
        // brute force: null-homotopic maps are exactly d h + h d over all h
        let mut boundaries = std::collections::HashSet::new();
        for h in graded_maps(&x, &y, -1) {
            let (lo, hi) = x.range().unwrap();
            let key: Vec<Vec<Int>> = (lo..=hi)
                .map(|i| {
                    let hd = x.differential(i).then(h.get(&(i + 1)).unwrap_or(&ModuleMap::zero(&x.term(i + 1), &y.term(i)))).unwrap();
                    let dh = h.get(&i).unwrap().then(&y.differential(i - 1)).unwrap();
                    hd.add(&dh).unwrap().matrix().entries().iter().map(|v| r.reduce(v)).collect()
                })
                .collect();
            boundaries.insert(key);
        }
        assert_eq!(null, boundaries.len(), "#{k}");
        let classes = chain.len() / null;
        let h0 = total_hom(&x, &y).unwrap().homology(0);
        assert_eq!(h0.elements().unwrap().len(), classes, "#{k}");
    }
}

#[test]
fn truncations_certified_when_profile_allows() {
    let mut rng = gen::rng(34);
    for k in 0..60 {
        let ring = if k % 2 == 0 { BaseRing::Integers } else { BaseRing::integers_mod(8).unwrap() };
        let x = gen::complex(&mut rng, &ring, -1, 3, &small());
        let tests = TestFamily::base(&ring, 64);
        let profile = purity_profile(&x, &tests).unwrap();
        for m in -2..=2 {
            for mode in [TruncationMode::KernelStyle, TruncationMode::CokernelStyle] {
                let allowed = profile.failing_degrees().iter().all(|&n| match mode {
                    TruncationMode::KernelStyle => n <= m,
                    TruncationMode::CokernelStyle => n >= m,
                });
                match truncate(&x, m, mode, &tests) {
                    Ok(t) => {
                        assert!(allowed);
                        assert!(t.certificate.is_yes());
                        let p = purity_profile(&t.complex, &tests).unwrap();
                        assert_eq!((p.inf_p, p.sup_p), (profile.inf_p, profile.sup_p), "#{k}");
                    }
                    Err(Error::PrereqPurityFails(_)) => assert!(!allowed),
                    Err(e) => panic!("#{k}: {e}"),
                }
            }
        }
    }
}

#[test]
fn pext_routes_agree_over_finite_rings() {
    let mut rng = gen::rng(35);
    for k in 0..60 {
        let ring = BaseRing::integers_mod(if k % 2 == 0 { 8 } else { 6 }).unwrap();
        let tests = TestFamily::base(&ring, 64);
        let x = gen::complex(&mut rng, &ring, -1, 1 + k % 3, &small());
        let y = gen::complex(&mut rng, &ring, 0, 1 + (k / 3) % 3, &small());
        pext_table(&x, &y, PextRoute::Both, &tests).unwrap_or_else(|e| panic!("#{k}: {e}"));
    }
}

#[test]
fn pext_shift_and_degree_zero() {
    let mut rng = gen::rng(36);
    for k in 0..40 {
        let ring = if k % 2 == 0 { BaseRing::Integers } else { BaseRing::integers_mod(4).unwrap() };
        let tests = TestFamily::base(&ring, 64);
        let x = gen::complex(&mut rng, &ring, -1, 2, &small());
        let y = gen::complex(&mut rng, &ring, 0, 2, &small());
        let base = pext_table(&x, &y, PextRoute::ViaProjective, &tests).unwrap();
        for s in [-1, 1, 2] {
            let shifted = pext_table(&x, &y.shift(s), PextRoute::ViaProjective, &tests).unwrap();
            let moved: BTreeMap<i64, String> = base.iter().map(|(i, m)| (i - s, m.canonical_form().to_string())).collect();
            let got: BTreeMap<i64, String> = shifted.iter().map(|(i, m)| (*i, m.canonical_form().to_string())).collect();
            assert_eq!(moved, got, "#{k} shift {s}");
        }
        let m = gen::module(&mut rng, &ring, &small());
        let n = gen::module(&mut rng, &ring, &small());
        let p0 = pext_table(&BoundedComplex::stalk(&m, 0), &BoundedComplex::stalk(&n, 0), PextRoute::ViaProjective, &tests).unwrap();
        let hom = hom_module(&m, &n).module;
        assert_eq!(p0.get(&0).map(FgModule::canonical_form), (!hom.is_zero()).then(|| hom.canonical_form()));
        assert!(p0.keys().all(|&i| i == 0));
    }
}

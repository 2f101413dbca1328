//! Seeded random modules, maps, sequences, complexes and towers.

use num_integer::Integer;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{total_hom, BoundedComplex, ChainMap};
use crate::module::{hom_module, FgModule, ModuleMap, ShortSequence};
use crate::ring::{int, BaseRing, Int};
use crate::tower::{Direction, TailRule, Tower};

/// The generator used everywhere a seed is accepted.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for generated objects.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_gens: usize,
    pub max_relations: usize,
    pub max_entry: i64,
    /// chance that a generated module over `Z` is left without relations on some generator
    pub free_weight: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_gens: 3, max_relations: 3, max_entry: 6, free_weight: 0.3 }
    }
}

fn modulus_i64(m: &Int) -> i64 {
    i64::try_from(m).expect("small modulus")
}

fn entry(rng: &mut impl Rng, ring: &BaseRing, bound: i64) -> Int {
    match ring.modulus() {
        Some(m) => int(rng.gen_range(0..modulus_i64(m))),
        None => int(rng.gen_range(-bound..=bound)),
    }
}

/// A module given by a random presentation.
pub fn module(rng: &mut impl Rng, ring: &BaseRing, lim: &Limits) -> FgModule {
    let g = rng.gen_range(1..=lim.max_gens);
    let free = ring.modulus().is_none() && rng.gen_bool(lim.free_weight);
    let r = if free { rng.gen_range(0..g) } else { rng.gen_range(g..=lim.max_relations.max(g)) };
    let rows: Vec<Vec<Int>> = (0..r).map(|_| (0..g).map(|_| entry(rng, ring, lim.max_entry)).collect()).collect();
    FgModule::from_relations(ring, g, &rows).expect("random presentation")
}

/// A finite module (no free summand).
pub fn finite_module(rng: &mut impl Rng, ring: &BaseRing, lim: &Limits) -> FgModule {
    loop {
        let m = module(rng, ring, &Limits { free_weight: 0.0, ..*lim });
        if m.is_finite() {
            return m;
        }
    }
}

/// A cyclic module `R/(d)` with `d` a divisor-friendly small number.
pub fn cyclic(rng: &mut impl Rng, ring: &BaseRing) -> FgModule {
    match ring.modulus() {
        Some(m) => {
            let m = modulus_i64(m);
            let ds: Vec<i64> = (1..=m).filter(|d| m % d == 0).collect();
            FgModule::cyclic(ring, *ds.choose(rng).unwrap())
        }
        None => FgModule::cyclic(ring, *[0, 2, 3, 4, 6, 8, 9, 12].choose(rng).unwrap()),
    }
}

/// A uniformly chosen element of `Hom(m, n)` with small coordinates.
pub fn map(rng: &mut impl Rng, m: &FgModule, n: &FgModule, bound: i64) -> ModuleMap {
    let h = hom_module(m, n);
    let coords: Vec<Int> = h.module.factors().iter().map(|f| {
        if f.is_zero() {
            int(rng.gen_range(-bound..=bound))
        } else {
            int(rng.gen_range(0..bound.max(1) * 2)) % f
        }
    }).collect();
    h.decode(&h.module.from_canonical(&coords))
}

/// `0 -> Ker g -> B -> Im g -> 0` for a random `g : B -> C`.
pub fn short_exact(rng: &mut impl Rng, ring: &BaseRing, lim: &Limits) -> ShortSequence {
    let b = module(rng, ring, lim);
    let c = module(rng, ring, lim);
    let g = map(rng, &b, &c, lim.max_entry);
    let sq = g.subquotients();
    ShortSequence::new(sq.kernel_inclusion, sq.image_projection).expect("kernel/image sequence is exact")
}

/// A complex in degrees `lo..lo+len` whose differentials factor through the previous cokernel.
pub fn complex(rng: &mut impl Rng, ring: &BaseRing, lo: i64, len: usize, lim: &Limits) -> BoundedComplex {
    let mut terms = vec![module(rng, ring, lim)];
    let mut diffs: Vec<ModuleMap> = Vec::new();
    for _ in 1..len.max(1) {
        let prev = terms.last().unwrap().clone();
        let next = module(rng, ring, lim);
        let d = match diffs.last() {
            None => map(rng, &prev, &next, lim.max_entry),
            Some(last) => {
                let sq = last.subquotients();
                let out = map(rng, &sq.cokernel, &next, lim.max_entry);
                sq.cokernel_projection.then(&out).expect("shape")
            }
        };
        diffs.push(d);
        terms.push(next);
    }
    BoundedComplex::new(ring, lo, terms, diffs).expect("d o d = 0 by construction")
}

/// A complex all of whose terms are finite.
pub fn finite_complex(rng: &mut impl Rng, ring: &BaseRing, lo: i64, len: usize, lim: &Limits) -> BoundedComplex {
    let lim = Limits { free_weight: 0.0, ..*lim };
    loop {
        let x = complex(rng, ring, lo, len, &lim);
        if x.range().is_none_or(|(a, b)| (a..=b).all(|n| x.term(n).is_finite())) {
            return x;
        }
    }
}

/// A random chain map `x -> y`: a random cycle of degree 0 in the total Hom complex.
pub fn chain_map(rng: &mut impl Rng, x: &BoundedComplex, y: &BoundedComplex, bound: i64) -> ChainMap {
    let th = total_hom(x, y).expect("same ring");
    let cycles = th.differential(0).subquotients();
    let k = &cycles.kernel;
    let coords: Vec<Int> = k
        .factors()
        .iter()
        .map(|f| {
            let v = int(rng.gen_range(-bound..=bound));
            if f.is_zero() { v } else { v.mod_floor(f) }
        })
        .collect();
    let phi = th.decode(0, &cycles.kernel_inclusion.apply(&k.from_canonical(&coords)));
    ChainMap::new(x, y, phi.components).expect("cycles of total Hom are chain maps")
}

/// A direct tower with cyclic stages and a random tail rule.
pub fn direct_tower(rng: &mut impl Rng) -> Tower {
    let r = BaseRing::Integers;
    match rng.gen_range(0..4) {
        0 => Tower::rational(),
        1 => Tower::prufer(*[2, 3].choose(rng).unwrap()),
        2 => {
            let m = cyclic(rng, &r);
            Tower::constant(&m, Direction::Direct)
        }
        _ => {
            let slope = rng.gen_range(0..3);
            let offset = rng.gen_range(2..5);
            let z = FgModule::free(&r, 1);
            let first = FgModule::cyclic(&r, *[0, 2, 4].choose(rng).unwrap());
            let into = map(rng, &first, &z, 3);
            Tower::new(&r, Direction::Direct, vec![first, z], vec![into], TailRule::MultiplicationBy { slope, offset })
                .expect("valid tower")
        }
    }
}

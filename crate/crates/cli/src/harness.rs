//! Randomized verification suites. Instance `i` of a suite draws from its
//! own generator, so results do not depend on scheduling.

use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use purederive_core::dim::{pid_with_samples, ppd_with_samples, Samples};
use purederive_core::gen::{self, Limits};
use purederive_core::module::ShortSequence;
use purederive_core::tower::{self, rational_witness, Direction};
use purederive_core::{
    is_pure_sequence, pext, pgldim_probe, ppd, purity_profile, total_hom, truncate, BaseRing, BoundedComplex, ExtendedInt, FgModule,
    ModuleMap, PextRoute, RingMatrix, TestFamily, Tower, TruncationMode,
};
use rand::Rng;
use serde_json::{json, Value};

use crate::encode;
use crate::report::Check;
use crate::workspace::HarnessConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Thm45,
    Thm46,
    Prop34,
    Thm47,
    Wellknown,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Thm45, Suite::Thm46, Suite::Prop34, Suite::Thm47, Suite::Wellknown];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm45 => "thm45",
            Suite::Thm46 => "thm46",
            Suite::Prop34 => "prop34",
            Suite::Thm47 => "thm47",
            Suite::Wellknown => "wellknown",
        }
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

pub struct SuiteOutcome {
    pub results: Value,
    pub checks: Vec<Check>,
}

/// Generator for instance `i` of a suite.
pub fn instance_rng(seed: u64, suite: Suite, i: usize) -> rand_chacha::ChaCha8Rng {
    gen::rng(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (suite.tag() << 48) ^ i as u64)
}

/// Evaluate `f` on `0..count` across threads; output is in index order.
pub fn par_map<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(count.max(1));
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<T>>> = Mutex::new((0..count).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let v = f(i);
                out.lock().unwrap()[i] = Some(v);
            });
        }
    });
    out.into_inner().unwrap().into_iter().map(|v| v.expect("every index evaluated")).collect()
}

fn limits(cfg: &HarnessConfig) -> Limits {
    Limits { max_gens: cfg.max_generators, max_relations: cfg.max_generators, max_entry: 4, free_weight: 0.3 }
}

fn ring_name(r: &BaseRing) -> String {
    r.to_string()
}

fn negate(v: ExtendedInt) -> ExtendedInt {
    match v {
        ExtendedInt::Finite(n) => ExtendedInt::Finite(-n),
        ExtendedInt::PosInf => ExtendedInt::NegInf,
        ExtendedInt::NegInf => ExtendedInt::PosInf,
    }
}

fn z8() -> BaseRing {
    BaseRing::integers_mod(8).expect("modulus")
}

type Instance = (Value, Check);

fn collect(suite: Suite, rows: Vec<Instance>) -> SuiteOutcome {
    let passed = rows.iter().filter(|(_, c)| c.passed).count();
    let total = rows.len();
    let (values, checks): (Vec<Value>, Vec<Check>) = rows.into_iter().unzip();
    SuiteOutcome { results: json!({ "suite": suite.name(), "passed": passed, "total": total, "instances": values }), checks }
}

fn dimension_instance(cfg: &HarnessConfig, suite: Suite, i: usize) -> Instance {
    let mut rng = instance_rng(cfg.seed, suite, i);
    let lim = limits(cfg);
    let injective = suite == Suite::Thm46;
    let ring = if i.is_multiple_of(2) { BaseRing::Integers } else { z8() };
    let len = rng.gen_range(1..=cfg.max_length);
    let lo = rng.gen_range(-2..=0);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng, len: usize| {
        if injective && ring == BaseRing::Integers {
            gen::finite_complex(rng, &ring, lo, len, &lim)
        } else {
            gen::complex(rng, &ring, lo, len, &lim)
        }
    };
    let x = draw(&mut rng, len);
    let samples = Samples { complexes: (0..2).map(|_| draw(&mut rng, 2)).collect() };
    let tests = TestFamily::base(&ring, cfg.family_cap);
    let name = format!("instance {i}");
    let rep = if injective { pid_with_samples(&x, &tests, &samples) } else { ppd_with_samples(&x, &tests, &samples) };
    match rep {
        Ok(rep) => {
            let (expected, what) = if injective { (rep.sup_p, "pid = sup_p") } else { (negate(rep.inf_p), "ppd = -inf_p") };
            let ok = rep.value == expected;
            let v = json!({
                "index": i,
                "ring": ring_name(&ring),
                "complex": encode::complex(&x),
                "value": encode::ext(rep.value),
                "inf_p": encode::ext(rep.inf_p),
                "sup_p": encode::ext(rep.sup_p),
                "bounds_checked": rep.per_n.len(),
            });
            (v, Check::new(name, ok, format!("criteria agree; {what}: {} vs {expected}", rep.value)))
        }
        Err(e) => (json!({ "index": i, "ring": ring_name(&ring), "error": e.to_string() }), Check::new(name, false, e.to_string())),
    }
}

fn contractible(m: &FgModule, n: i64) -> BoundedComplex {
    BoundedComplex::two_term(&ModuleMap::identity(m), n)
}

/// Pure quasi-isomorphic pairs: contractible padding and truncations.
fn invariance_instance(cfg: &HarnessConfig, i: usize) -> Instance {
    let mut rng = instance_rng(cfg.seed, Suite::Prop34, i);
    let lim = limits(cfg);
    let ring = match i % 3 {
        0 => BaseRing::Integers,
        1 => z8(),
        _ => BaseRing::integers_mod(6).expect("modulus"),
    };
    let tests = TestFamily::base(&ring, cfg.family_cap);
    let len = rng.gen_range(1..=cfg.max_length);
    let x = gen::complex(&mut rng, &ring, -1, len, &lim);
    let name = format!("instance {i}");
    let mut run = || -> purederive_core::Result<(Value, bool)> {
        let p = purity_profile(&x, &tests)?;
        let m = gen::module(&mut rng, &ring, &lim);
        let at = rng.gen_range(-2..=1);
        let padded = x.direct_sum(&contractible(&m, at)).complex;
        let q = purity_profile(&padded, &tests)?;
        let mut pairs = vec![json!({ "kind": "padding", "degree": at, "inf_p": encode::ext(q.inf_p), "sup_p": encode::ext(q.sup_p) })];
        let mut ok = (p.inf_p, p.sup_p) == (q.inf_p, q.sup_p);
        if let Some((lo, hi)) = x.range() {
            for m in lo..=hi {
                for mode in [TruncationMode::KernelStyle, TruncationMode::CokernelStyle] {
                    let t = match truncate(&x, m, mode, &tests) {
                        Ok(t) => t,
                        Err(purederive_core::Error::PrereqPurityFails(_)) => continue,
                        Err(e) => return Err(e),
                    };
                    let r = purity_profile(&t.complex, &tests)?;
                    ok &= t.certificate.is_yes() && (p.inf_p, p.sup_p) == (r.inf_p, r.sup_p);
                    pairs.push(json!({
                        "kind": if mode == TruncationMode::KernelStyle { "kernel_truncation" } else { "cokernel_truncation" },
                        "degree": m,
                        "inf_p": encode::ext(r.inf_p),
                        "sup_p": encode::ext(r.sup_p),
                    }));
                }
            }
        }
        let v = json!({
            "index": i,
            "ring": ring_name(&ring),
            "inf_p": encode::ext(p.inf_p),
            "sup_p": encode::ext(p.sup_p),
            "pairs": pairs,
        });
        Ok((v, ok))
    };
    match run() {
        Ok((v, ok)) => (v, Check::new(name, ok, "inf_p and sup_p equal across every pair")),
        Err(e) => (json!({ "index": i, "error": e.to_string() }), Check::new(name, false, e.to_string())),
    }
}

fn probes(cfg: &HarnessConfig) -> SuiteOutcome {
    let mut checks = Vec::new();
    let mut results = serde_json::Map::new();
    let lim = limits(cfg);

    let z4 = BaseRing::integers_mod(4).expect("modulus");
    let mods: Vec<BoundedComplex> = par_map(cfg.count, |i| {
        let mut rng = instance_rng(cfg.seed, Suite::Thm47, i);
        if i % 2 == 0 {
            BoundedComplex::stalk(&gen::finite_module(&mut rng, &z4, &lim), 0)
        } else {
            let len = rng.gen_range(1..=cfg.max_length);
            gen::complex(&mut rng, &z4, -1, len, &lim)
        }
    });
    match pgldim_probe(&z4, &mods, 0, false, &TestFamily::base(&z4, cfg.family_cap)) {
        Ok(rep) => {
            checks.push(Check::new("Z/4: inequalities", rep.all_hold(), format!("{} checks on {} samples", rep.checks.len(), rep.samples)));
            checks.push(Check::new("Z/4: higher Pext vanish", rep.nonzero_higher_pext == 0, format!("{} nonzero", rep.nonzero_higher_pext)));
            results.insert("Z/4".into(), json!({ "samples": rep.samples, "observed_bound": encode::ext(rep.observed_bound) }));
        }
        Err(e) => checks.push(Check::new("Z/4: probe", false, e.to_string())),
    }

    let zc = (cfg.count / 4).max(4);
    let cs: Vec<BoundedComplex> = par_map(zc, |i| {
        let mut rng = instance_rng(cfg.seed, Suite::Thm47, cfg.count + i);
        let len = rng.gen_range(1..=cfg.max_length);
        gen::complex(&mut rng, &BaseRing::Integers, -1, len, &lim)
    });
    let z = BaseRing::Integers;
    match pgldim_probe(&z, &cs, 1, true, &TestFamily::base(&z, cfg.family_cap)) {
        Ok(rep) => {
            let bad = rep.checks.iter().filter(|c| !c.holds).count();
            checks.push(Check::new("Z: ppd X <= 1 - inf_p X", bad == 0, format!("{} of {} hold", rep.checks.len() - bad, rep.checks.len())));
            checks.push(Check::new(
                "Z: rational tower bound",
                rep.reported_bound() == ExtendedInt::Finite(1) && rep.tower_lower_bound == Some(1),
                format!("reported bound {}", rep.reported_bound()),
            ));
            results.insert("Z".into(), json!({ "samples": rep.samples, "observed_bound": encode::ext(rep.observed_bound), "reported_bound": encode::ext(rep.reported_bound()) }));
        }
        Err(e) => checks.push(Check::new("Z: probe", false, e.to_string())),
    }
    let mut out = json!({ "suite": "thm47" });
    out.as_object_mut().unwrap().extend(results);
    SuiteOutcome { results: out, checks }
}

fn stalk(m: &FgModule) -> BoundedComplex {
    BoundedComplex::stalk(m, 0)
}

/// Classical `Ext^1(Z/n, M)` from the free resolution `Z -n-> Z`.
pub fn classical_ext1_z(n: i64, m: &FgModule) -> FgModule {
    let z = FgModule::free(&BaseRing::Integers, 1);
    let times = ModuleMap::new(&z, &z, RingMatrix::ints(&BaseRing::Integers, &[&[n]])).expect("map");
    let res = BoundedComplex::two_term(&times, -1);
    total_hom(&res, &stalk(m)).expect("same ring").homology(1)
}

fn known_examples(cfg: &HarnessConfig) -> SuiteOutcome {
    let z = BaseRing::Integers;
    let tests = TestFamily::base(&z, cfg.family_cap);
    let mut checks = Vec::new();
    let mut results = serde_json::Map::new();
    let cyc = |d: i64| FgModule::cyclic(&z, d);
    let zz = FgModule::free(&z, 1);
    let two = ModuleMap::new(&zz, &zz, RingMatrix::ints(&z, &[&[2]])).expect("map");
    let x = BoundedComplex::two_term(&two, -1);

    let mut record = |name: &str, value: String, expected: &str| {
        checks.push(Check::new(name, value == expected, format!("{value} (expected {expected})")));
        results.insert(name.to_string(), json!(value));
    };
    let fmt = |r: purederive_core::Result<String>| r.unwrap_or_else(|e| format!("error: {e}"));

    record("profile of Z -2-> Z", fmt(purity_profile(&x, &tests).map(|p| format!("[{}, {}]", p.inf_p, p.sup_p))), "[-1, 0]");
    record("ppd of Z -2-> Z", fmt(ppd(&x, &tests).map(|r| r.value.to_string())), "1");
    record("ppd of Z/6", fmt(ppd(&stalk(&cyc(6)), &tests).map(|r| r.value.to_string())), "0");
    record("ppd of Z -1-> Z", fmt(ppd(&contractible(&zz, 0), &tests).map(|r| r.value.to_string())), "-inf");
    let pe = |a: &BoundedComplex, b: &BoundedComplex, i: i64| {
        fmt(pext(a, b, i, PextRoute::ViaProjective, &tests).map(|m| m.canonical_form().to_string()))
    };
    record("Pext^0(Z/6, Z/4)", pe(&stalk(&cyc(6)), &stalk(&cyc(4)), 0), &cyc(2).canonical_form().to_string());
    record("Pext^1(Z/2, Z/2)", pe(&stalk(&cyc(2)), &stalk(&cyc(2)), 1), &cyc(1).canonical_form().to_string());
    record("classical Ext^1(Z/2, Z/2)", classical_ext1_z(2, &cyc(2)).canonical_form().to_string(), &cyc(2).canonical_form().to_string());
    record("Pext^1(Z -2-> Z, Z/2)", pe(&x, &stalk(&cyc(2)), 1), &cyc(2).canonical_form().to_string());

    let f = ModuleMap::new(&cyc(2), &cyc(4), RingMatrix::ints(&z, &[&[2]])).expect("map");
    let g = ModuleMap::new(&cyc(4), &cyc(2), RingMatrix::ints(&z, &[&[1]])).expect("map");
    let verdict = ShortSequence::new(f, g).and_then(|s| is_pure_sequence(&s, &tests));
    record("0 -> Z/2 -> Z/4 -> Z/2 -> 0", fmt(verdict.map(|v| if v.is_pure() { "pure" } else { "not pure" }.to_string())), "not pure");

    let z8 = z8();
    let t8 = TestFamily::base(&z8, cfg.family_cap);
    record(
        "pid of Z/2 over Z/8",
        fmt(purederive_core::pid(&stalk(&FgModule::cyclic(&z8, 2)), &t8).map(|r| r.value.to_string())),
        "0",
    );

    record(
        "ppd of Q",
        fmt(rational_witness(cfg.depth, &tests).map(|w| {
            let lower_ok = w.lower.residues.len() > cfg.depth;
            if lower_ok { w.upper.ppd_bound.to_string() } else { "lower bound missing".into() }
        })),
        "1",
    );
    let prufer = Tower::prufer(2);
    let coboundary = tower::pext1_colim(&prufer, &cyc(4)).and_then(|mut lim| {
        let c = tower::Cocycle::all_ones();
        let v = tower::cocycle_decide(&mut lim, &c, cfg.depth)?;
        Ok(match v {
            tower::CocycleVerdict::Coboundary(w) => {
                if tower::verify_witness(&mut lim, &c, &w, 4 * cfg.depth) { "verified coboundary".to_string() } else { "witness fails".into() }
            }
            other => format!("{other:?}"),
        })
    });
    record("all-ones cocycle on Prufer-2 into Z/4", fmt(coboundary), "verified coboundary");
    let constant = Tower::constant(&cyc(4), Direction::Direct);
    record(
        "hocolim bound of constant Z/4",
        fmt(tower::hocolim_resolution(&constant, cfg.depth, &tests).map(|h| h.ppd_bound.to_string())),
        "0",
    );
    let mut out = json!({ "suite": "wellknown" });
    out.as_object_mut().unwrap().extend(results);
    SuiteOutcome { results: out, checks }
}

pub fn run_suite(suite: Suite, cfg: &HarnessConfig) -> SuiteOutcome {
    match suite {
        Suite::Thm45 | Suite::Thm46 => collect(suite, par_map(cfg.count, |i| dimension_instance(cfg, suite, i))),
        Suite::Prop34 => collect(suite, par_map(cfg.count, |i| invariance_instance(cfg, i))),
        Suite::Thm47 => probes(cfg),
        Suite::Wellknown => known_examples(cfg),
    }
}

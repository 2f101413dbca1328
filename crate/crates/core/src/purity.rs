//! Pure exact sequences, pure exactness of complexes at a degree, purity
//! profiles and pure quasi-isomorphisms.
//!
//! A sequence verdict is computed three ways (Hom from cyclic test modules,
//! tensor with cyclic test modules, existence of a retraction) and the three
//! answers must agree.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::complex::{cone, BoundedComplex, ChainMap};
use crate::error::{Error, Result};
use crate::module::{hom_post, split_analysis, tensor_left, CanonicalForm, FgModule, ModuleMap, ShortSequence, SplitVerdict};
use crate::ring::{BaseRing, Int};

/// Cyclic finitely presented test modules `R/(d)`.
#[derive(Clone, Debug)]
pub struct TestFamily {
    ring: BaseRing,
    modules: Vec<FgModule>,
    cap: usize,
    capped: bool,
}

fn divisors(n: &Int) -> Vec<Int> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = Int::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl TestFamily {
    pub const DEFAULT_CAP: usize = 64;

    /// Just `R`.
    pub fn base(ring: &BaseRing, cap: usize) -> Self {
        TestFamily { ring: ring.clone(), modules: vec![FgModule::free(ring, 1)], cap: cap.max(1), capped: false }
    }

    /// `R` together with `R/(d)` for every divisor `d > 1` of `exponent`.
    pub fn from_exponent(ring: &BaseRing, exponent: &Int, cap: usize) -> Self {
        let mut t = Self::base(ring, cap);
        t.add_exponent(exponent);
        t
    }

    /// Family sufficient for sequences built from the given modules.
    pub fn for_modules(ring: &BaseRing, modules: &[FgModule], cap: usize) -> Self {
        let mut t = Self::base(ring, cap);
        t.add_modules(modules);
        t
    }

    /// Family sufficient for the terms, kernels, images and cokernels of `x`.
    pub fn for_complex(x: &BoundedComplex, cap: usize) -> Self {
        let mut t = Self::base(x.ring(), cap);
        t.add_complex(x);
        t
    }

    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    pub fn modules(&self) -> &[FgModule] {
        &self.modules
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// True when some divisor was dropped because of the cap.
    pub fn was_capped(&self) -> bool {
        self.capped
    }

    fn contains(&self, form: &CanonicalForm) -> bool {
        self.modules.iter().any(|m| &m.canonical_form() == form)
    }

    pub fn add_module(&mut self, m: &FgModule) {
        if m.is_zero() || self.contains(&m.canonical_form()) {
            return;
        }
        if self.modules.len() >= self.cap {
            self.capped = true;
            return;
        }
        self.modules.push(m.clone());
    }

    fn add_exponent(&mut self, e: &Int) {
        for d in divisors(e) {
            if !d.is_one() {
                self.add_module(&FgModule::cyclic(&self.ring, d));
            }
        }
    }

    pub fn add_modules(&mut self, modules: &[FgModule]) {
        let e = modules.iter().fold(Int::one(), |acc, m| acc.lcm(&m.torsion_exponent()));
        self.add_exponent(&e);
    }

    pub fn add_complex(&mut self, x: &BoundedComplex) {
        let Some((lo, hi)) = x.range() else { return };
        let mut mods = Vec::new();
        for n in lo..=hi {
            mods.push(x.term(n));
            let sq = x.differential(n).subquotients();
            mods.extend([sq.kernel, sq.image, sq.cokernel]);
        }
        self.add_modules(&mods);
    }

    fn with_complex(&self, x: &BoundedComplex) -> Self {
        let mut t = self.clone();
        t.add_complex(x);
        t
    }

    fn with_sequence(&self, s: &ShortSequence) -> Self {
        let mut t = self.clone();
        t.add_modules(&[s.left().clone(), s.middle().clone(), s.right().clone()]);
        t
    }
}

/// Evidence that a sequence is pure: the three oracles agree and a splitting exists.
#[derive(Clone, Debug)]
pub struct PureCertificate {
    pub retraction: ModuleMap,
    pub section: ModuleMap,
    pub tests_checked: usize,
}

/// A test module `F` and a map `F -> C` that does not lift to `B`.
#[derive(Clone, Debug)]
pub struct NotPureWitness {
    pub test_module: FgModule,
    pub unliftable: ModuleMap,
}

#[derive(Clone, Debug)]
pub enum SequenceVerdict {
    Pure(PureCertificate),
    NotPure(NotPureWitness),
}

impl SequenceVerdict {
    pub fn is_pure(&self) -> bool {
        matches!(self, SequenceVerdict::Pure(_))
    }
}

/// Hom route: the first test module against which `Hom(F, g)` is not onto.
fn cohn_witness(s: &ShortSequence, tests: &TestFamily) -> Option<NotPureWitness> {
    for f in tests.modules() {
        let (_, hc, map) = hom_post(f, &s.g);
        for t in 0..hc.module.gens() {
            let e = hc.module.basis_vector(t);
            if map.preimage(&e).is_none() {
                return Some(NotPureWitness { test_module: f.clone(), unliftable: hc.decode(&e) });
            }
        }
    }
    None
}

/// Tensor route: `F (x) f` injective for every test module.
fn tensor_pure(s: &ShortSequence, tests: &TestFamily) -> bool {
    tests.modules().iter().all(|f| tensor_left(f, &s.f).2.is_injective())
}

/// Decide purity of a short exact sequence of finitely generated modules.
pub fn is_pure_sequence(s: &ShortSequence, tests: &TestFamily) -> Result<SequenceVerdict> {
    s.check_exact()?;
    let tests = tests.with_sequence(s);
    let cohn = cohn_witness(s, &tests);
    let split = split_analysis(s)?;
    let tensor = tensor_pure(s, &tests);
    if cohn.is_none() != split.is_split() || tensor != split.is_split() {
        return Err(Error::InconsistentVerdicts(format!(
            "Hom test says {}, tensor test says {}, splitting says {} for 0 -> {} -> {} -> {} -> 0",
            if cohn.is_none() { "pure" } else { "not pure" },
            if tensor { "pure" } else { "not pure" },
            if split.is_split() { "split" } else { "not split" },
            s.left(),
            s.middle(),
            s.right()
        )));
    }
    Ok(match (split, cohn) {
        (SplitVerdict::Split { retraction, section }, None) => {
            SequenceVerdict::Pure(PureCertificate { retraction, section, tests_checked: tests.modules().len() })
        }
        (_, Some(w)) => SequenceVerdict::NotPure(w),
        (SplitVerdict::NotSplit { .. }, None) => unreachable!("checked above"),
    })
}

/// Integers extended by `-inf` and `+inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedInt {
    NegInf,
    Finite(i64),
    PosInf,
}

impl fmt::Display for ExtendedInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedInt::NegInf => write!(f, "-inf"),
            ExtendedInt::Finite(n) => write!(f, "{n}"),
            ExtendedInt::PosInf => write!(f, "+inf"),
        }
    }
}

impl ExtendedInt {
    pub fn finite(&self) -> Option<i64> {
        match self {
            ExtendedInt::Finite(n) => Some(*n),
            _ => None,
        }
    }
}

/// Which half of the image factorization of a differential failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorPart {
    /// `0 -> Ker d -> X -> Im d -> 0`
    Epi,
    /// `0 -> Im d -> X' -> Coker d -> 0`
    Mono,
}

#[derive(Clone, Debug)]
pub enum FailureReason {
    /// Clause (a): the image factorization of `d^{map_degree}` is not pure.
    Factorization { map_degree: i64, part: FactorPart, witness: NotPureWitness },
    /// Clause (b): `0 -> Ker d^n -> X^n -> Coker d^{n-1} -> 0` is not exact.
    Homology { homology: FgModule },
    /// Clause (b): exact but not pure.
    KernelCokernel { witness: NotPureWitness },
}

#[derive(Clone, Debug)]
pub enum DegreeVerdict {
    PureExact,
    Fails(Vec<FailureReason>),
}

impl DegreeVerdict {
    pub fn is_pure_exact(&self) -> bool {
        matches!(self, DegreeVerdict::PureExact)
    }
}

#[derive(Clone, Debug)]
pub struct PurityProfile {
    pub complex: BoundedComplex,
    /// verdicts for the stored range; every other degree is pure exact
    pub verdicts: BTreeMap<i64, DegreeVerdict>,
    pub inf_p: ExtendedInt,
    pub sup_p: ExtendedInt,
    pub tests_used: usize,
    pub family_capped: bool,
}

impl PurityProfile {
    pub fn failing_degrees(&self) -> Vec<i64> {
        self.verdicts.iter().filter(|(_, v)| !v.is_pure_exact()).map(|(n, _)| *n).collect()
    }

    pub fn is_pure_exact_at(&self, n: i64) -> bool {
        self.verdicts.get(&n).is_none_or(DegreeVerdict::is_pure_exact)
    }

    pub fn is_pure_exact(&self) -> bool {
        self.failing_degrees().is_empty()
    }

    pub fn pure_exact_below(&self, n: i64) -> bool {
        self.failing_degrees().iter().all(|&k| k > n)
    }

    pub fn pure_exact_above(&self, n: i64) -> bool {
        self.failing_degrees().iter().all(|&k| k < n)
    }
}

struct Decomposition {
    epi: Option<NotPureWitness>,
    mono: Option<NotPureWitness>,
}

fn decompose(d: &ModuleMap, tests: &TestFamily) -> Result<Decomposition> {
    let sq = d.subquotients();
    let first = ShortSequence::new(sq.kernel_inclusion.clone(), sq.image_projection.clone())?;
    let second = ShortSequence::new(sq.image_inclusion.clone(), sq.cokernel_projection.clone())?;
    let witness = |v: SequenceVerdict| match v {
        SequenceVerdict::Pure(_) => None,
        SequenceVerdict::NotPure(w) => Some(w),
    };
    Ok(Decomposition {
        epi: witness(is_pure_sequence(&first, tests)?),
        mono: witness(is_pure_sequence(&second, tests)?),
    })
}

/// Per-degree pure exactness of a bounded complex.
pub fn purity_profile(x: &BoundedComplex, tests: &TestFamily) -> Result<PurityProfile> {
    let tests = tests.with_complex(x);
    let mut verdicts = BTreeMap::new();
    if let Some((lo, hi)) = x.range() {
        let mut decomps = BTreeMap::new();
        for k in lo - 1..=hi {
            decomps.insert(k, decompose(&x.differential(k), &tests)?);
        }
        for n in lo..=hi {
            let mut reasons = Vec::new();
            for k in [n - 1, n] {
                let dk = &decomps[&k];
                for (part, w) in [(FactorPart::Epi, &dk.epi), (FactorPart::Mono, &dk.mono)] {
                    if let Some(w) = w {
                        reasons.push(FailureReason::Factorization { map_degree: k, part, witness: w.clone() });
                    }
                }
            }
            let ker = x.differential(n).subquotients();
            let coker = x.differential(n - 1).subquotients();
            let s = ShortSequence::new(ker.kernel_inclusion, coker.cokernel_projection)?;
            match s.check_exact() {
                Err(Error::NotExact(_)) => reasons.push(FailureReason::Homology { homology: x.homology_at(n) }),
                Err(e) => return Err(e),
                Ok(()) => {
                    if let SequenceVerdict::NotPure(witness) = is_pure_sequence(&s, &tests)? {
                        reasons.push(FailureReason::KernelCokernel { witness });
                    }
                }
            }
            let v = if reasons.is_empty() { DegreeVerdict::PureExact } else { DegreeVerdict::Fails(reasons) };
            verdicts.insert(n, v);
        }
    }
    let failing: Vec<i64> = verdicts.iter().filter(|(_, v)| !v.is_pure_exact()).map(|(n, _)| *n).collect();
    let (inf_p, sup_p) = match (failing.first(), failing.last()) {
        (Some(&a), Some(&b)) => (ExtendedInt::Finite(a), ExtendedInt::Finite(b)),
        _ => (ExtendedInt::PosInf, ExtendedInt::NegInf),
    };
    let profile = PurityProfile {
        complex: x.clone(),
        verdicts,
        inf_p,
        sup_p,
        tests_used: tests.modules().len(),
        family_capped: tests.was_capped(),
    };
    range_cross_check(&profile, &tests)?;
    Ok(profile)
}

fn nonexact_degrees(x: &BoundedComplex) -> Vec<i64> {
    match x.range() {
        None => vec![],
        Some((lo, hi)) => (lo..=hi).filter(|&n| !x.homology_at(n).is_zero()).collect(),
    }
}

/// Pure exactness in degrees `<= n` must match tensor exactness in degrees
/// `<= n`, and pure exactness in degrees `>= n` must match exactness of
/// `Hom(F, X)` in degrees `>= n`.
fn range_cross_check(profile: &PurityProfile, tests: &TestFamily) -> Result<()> {
    let x = &profile.complex;
    let Some((lo, hi)) = x.range() else { return Ok(()) };
    let mut tensor_bad: Vec<i64> = Vec::new();
    let mut hom_bad: Vec<i64> = Vec::new();
    for f in tests.modules() {
        tensor_bad.extend(nonexact_degrees(&x.tensor_with(f)));
        hom_bad.extend(nonexact_degrees(&x.hom_from(f)));
    }
    for n in lo - 1..=hi + 1 {
        let tensor_ok = tensor_bad.iter().all(|&k| k > n);
        if tensor_ok != profile.pure_exact_below(n) {
            return Err(Error::InconsistentVerdicts(format!(
                "pure exactness in degrees <= {n} disagrees with tensor exactness"
            )));
        }
        let hom_ok = hom_bad.iter().all(|&k| k < n);
        if hom_ok != profile.pure_exact_above(n) {
            return Err(Error::InconsistentVerdicts(format!(
                "pure exactness in degrees >= {n} disagrees with Hom exactness"
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub enum PureQuasiIsoVerdict {
    /// The cone is pure exact (its profile has no failures).
    Yes { cone_profile: Box<PurityProfile> },
    No { first_failing_degree: i64 },
}

impl PureQuasiIsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, PureQuasiIsoVerdict::Yes { .. })
    }
}

/// `f` is a pure quasi-isomorphism iff its cone is pure exact; cross-checked
/// against `Hom(F, f)` being a quasi-isomorphism for every test module.
pub fn is_pure_quasi_iso(f: &ChainMap, tests: &TestFamily) -> Result<PureQuasiIsoVerdict> {
    let c = cone(f).cone;
    let profile = purity_profile(&c, tests)?;
    let tests = tests.with_complex(&c);
    let hom_route = tests.modules().iter().all(|m| c.hom_from(m).is_acyclic());
    if hom_route != profile.is_pure_exact() {
        return Err(Error::InconsistentVerdicts(
            "cone profile and Hom(F, f) quasi-isomorphism test disagree".into(),
        ));
    }
    Ok(match profile.failing_degrees().first() {
        None => PureQuasiIsoVerdict::Yes { cone_profile: Box::new(profile) },
        Some(&n) => PureQuasiIsoVerdict::No { first_failing_degree: n },
    })
}

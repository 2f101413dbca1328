//! `Pext`, pure projective and pure injective dimension of complexes, and
//! probes of pure global dimension.
//!
//! Each dimension is computed by evaluating five independent criteria at
//! every candidate bound; the criteria must agree, and the fourth (which
//! quantifies over all complexes `Y`) is only ever sampled.

use std::collections::BTreeMap;
use std::fmt;

use crate::complex::{total_hom, truncate, BoundedComplex, TruncationMode};
use crate::error::{Error, Result};
use crate::module::{purity_class, FgModule, PureInjectivity};
use crate::purity::{is_pure_quasi_iso, purity_profile, ExtendedInt, PurityProfile, TestFamily};
use crate::resolve::{pure_injective_resolution, pure_projective_resolution, solve_lift, split_off_tail, Resolution, Side};
use crate::ring::BaseRing;
use crate::tower::{rational_witness, RationalWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PextRoute {
    ViaProjective,
    ViaInjective,
    Both,
}

/// Nonzero cohomology of a total Hom complex, by degree.
pub type PextTable = BTreeMap<i64, FgModule>;

fn cohomology_table(x: &BoundedComplex, y: &BoundedComplex) -> Result<PextTable> {
    let th = total_hom(x, y)?;
    let mut out = BTreeMap::new();
    if let Some((lo, hi)) = th.complex.range() {
        for n in lo..=hi {
            let h = th.complex.homology_at(n);
            if !h.is_zero() {
                out.insert(n, h);
            }
        }
    }
    Ok(out)
}

fn with_complexes(tests: &TestFamily, xs: &[&BoundedComplex]) -> TestFamily {
    let mut t = tests.clone();
    for x in xs {
        t.add_complex(x);
    }
    t
}

/// `Pext^*(X, Y)` from a pure projective resolution of `X`.
pub fn pext_table_projective(rx: &Resolution, y: &BoundedComplex) -> Result<PextTable> {
    cohomology_table(&rx.resolvent, y)
}

/// `Pext^*(X, Y)` from a pure injective resolution of `Y`.
pub fn pext_table_injective(x: &BoundedComplex, ry: &Resolution) -> Result<PextTable> {
    cohomology_table(x, &ry.resolvent)
}

fn tables_agree(a: &PextTable, b: &PextTable) -> bool {
    a.len() == b.len() && a.iter().all(|(n, m)| b.get(n).is_some_and(|k| k.canonical_form() == m.canonical_form()))
}

/// All nonzero `Pext^i(X, Y)`.
pub fn pext_table(x: &BoundedComplex, y: &BoundedComplex, route: PextRoute, tests: &TestFamily) -> Result<PextTable> {
    let tests = with_complexes(tests, &[x, y]);
    let proj = || -> Result<PextTable> { pext_table_projective(&pure_projective_resolution(x, &tests)?, y) };
    let inj = || -> Result<PextTable> { pext_table_injective(x, &pure_injective_resolution(y, &tests)?) };
    match route {
        PextRoute::ViaProjective => proj(),
        PextRoute::ViaInjective => inj(),
        PextRoute::Both => {
            let (a, b) = (proj()?, inj()?);
            if !tables_agree(&a, &b) {
                return Err(Error::InconsistentVerdicts(format!("Pext routes disagree: {a:?} vs {b:?}")));
            }
            Ok(a)
        }
    }
}

/// `Pext^i(X, Y) = H^i RHom(X, Y)`.
pub fn pext(x: &BoundedComplex, y: &BoundedComplex, i: i64, route: PextRoute, tests: &TestFamily) -> Result<FgModule> {
    let t = pext_table(x, y, route, tests)?;
    Ok(t.get(&i).cloned().unwrap_or_else(|| FgModule::zero(x.ring())))
}

/// How a criterion was settled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Decided by a certificate or a finite check.
    Proven,
    /// Sampled quantifier with no counterexample among `checked` instances.
    Consistent { checked: usize },
    /// Sampled quantifier with a counterexample.
    Refuted,
}

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub criterion: u8,
    pub holds: bool,
    pub evidence: Evidence,
    pub detail: String,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match &self.evidence {
            Evidence::Proven => "proven".to_string(),
            Evidence::Consistent { checked } => format!("consistent on {checked} samples"),
            Evidence::Refuted => "refuted by sample".to_string(),
        };
        write!(f, "({}) {} [{}]: {}", self.criterion, self.holds, status, self.detail)
    }
}

/// All five criteria at one candidate bound `n`.
#[derive(Clone, Debug)]
pub struct CriteriaReport {
    pub side: Side,
    pub n: i64,
    pub outcomes: Vec<CriterionOutcome>,
}

impl CriteriaReport {
    /// Common verdict of the decidable criteria (1), (2), (3), (5).
    pub fn verdict(&self) -> Option<bool> {
        let mut v = self.outcomes.iter().filter(|o| o.criterion != 4).map(|o| o.holds);
        let first = v.next()?;
        v.all(|b| b == first).then_some(first)
    }

    pub fn outcome(&self, criterion: u8) -> Option<&CriterionOutcome> {
        self.outcomes.iter().find(|o| o.criterion == criterion)
    }

    fn check(&self) -> Result<bool> {
        let v = self.verdict().ok_or_else(|| {
            Error::InconsistentVerdicts(format!("criteria disagree at n = {}: {:#?}", self.n, self.outcomes))
        })?;
        if v && self.outcome(4).is_some_and(|o| !o.holds) {
            return Err(Error::InconsistentVerdicts(format!(
                "sampled criterion (4) contradicts the others at n = {}: {:#?}",
                self.n, self.outcomes
            )));
        }
        Ok(v)
    }
}

#[derive(Clone, Debug)]
pub struct DimReport {
    pub complex: BoundedComplex,
    pub side: Side,
    pub value: ExtendedInt,
    pub inf_p: ExtendedInt,
    pub sup_p: ExtendedInt,
    pub per_n: Vec<CriteriaReport>,
}

/// Extra complexes used to sample criterion (4).
#[derive(Clone, Debug, Default)]
pub struct Samples {
    pub complexes: Vec<BoundedComplex>,
}

/// Shared state for evaluating criteria at several `n`.
struct Engine {
    x: BoundedComplex,
    side: Side,
    tests: TestFamily,
    res: Resolution,
    profile: PurityProfile,
    /// `Pext^*` against each test module (criterion 5)
    test_tables: Vec<(FgModule, PextTable)>,
    /// `(sup_p Y or inf_p X', table)` for each sampled partner (criterion 4)
    sample_tables: Vec<(ExtendedInt, PextTable)>,
}

impl Engine {
    fn new(x: &BoundedComplex, side: Side, tests: &TestFamily, samples: &Samples) -> Result<Self> {
        let tests = with_complexes(tests, &[x]);
        let profile = purity_profile(x, &tests)?;
        let res = match side {
            Side::Projective => pure_projective_resolution(x, &tests)?,
            Side::Injective => pure_injective_resolution(x, &tests)?,
        };
        let stalks: Vec<BoundedComplex> = tests.modules().iter().map(|m| BoundedComplex::stalk(m, 0)).collect();
        let mut test_tables = Vec::new();
        for (m, s) in tests.modules().iter().zip(&stalks) {
            let t = match side {
                Side::Projective => pext_table_projective(&res, s)?,
                Side::Injective => pext_table_injective(s, &res)?,
            };
            test_tables.push((m.clone(), t));
        }
        let mut partners: Vec<BoundedComplex> = stalks;
        partners.push(x.clone());
        partners.push(x.shift(1));
        partners.extend(samples.complexes.iter().filter(|c| c.ring() == x.ring()).cloned());
        let mut sample_tables = Vec::new();
        for p in &partners {
            let pt = with_complexes(&tests, &[p]);
            let prof = purity_profile(p, &pt)?;
            let table = match side {
                Side::Projective => (prof.sup_p, pext_table_projective(&res, p)?),
                Side::Injective => (prof.inf_p, pext_table_injective(p, &res)?),
            };
            sample_tables.push(table);
        }
        Ok(Engine { x: x.clone(), side, tests, res, profile, test_tables, sample_tables })
    }

    fn within_bound(&self, n: i64) -> bool {
        match self.side {
            Side::Projective => self.profile.inf_p >= ExtendedInt::Finite(-n),
            Side::Injective => self.profile.sup_p <= ExtendedInt::Finite(n),
        }
    }

    fn bound_text(&self, n: i64) -> String {
        match self.side {
            Side::Projective => format!("inf_p = {} vs -n = {}", self.profile.inf_p, -n),
            Side::Injective => format!("sup_p = {} vs n = {}", self.profile.sup_p, n),
        }
    }

    /// (1): a resolution concentrated on the right side of `n`.
    fn criterion1(&self, n: i64) -> Result<CriterionOutcome> {
        let p = &self.res.resolvent;
        let (mode, m) = match self.side {
            Side::Projective => (TruncationMode::CokernelStyle, -n),
            Side::Injective => (TruncationMode::KernelStyle, n),
        };
        let out = |holds, detail: String| Ok(CriterionOutcome { criterion: 1, holds, evidence: Evidence::Proven, detail });
        let tr = match truncate(p, m, mode, &self.tests) {
            Ok(t) => t,
            Err(Error::PrereqPurityFails(d)) => {
                return out(false, format!("resolvent is not pure exact at {d}, so no resolution vanishes past {m}"))
            }
            Err(e) => return Err(e),
        };
        let t = &tr.complex;
        let (res, class_ok) = match self.side {
            Side::Projective => {
                // homotopy inverse u : T -> P of the comparison, then T -> X
                let (u, _) = solve_lift(t, p, None, Some(&tr.comparison), &crate::complex::ChainMap::identity(t))?;
                let map = u.then(&self.res.map)?;
                let certificate = is_pure_quasi_iso(&map, &self.tests)?;
                let r = Resolution { side: Side::Projective, target: self.x.clone(), resolvent: t.clone(), map, certificate };
                let ok = r.terms_in_class();
                (r, ok)
            }
            Side::Injective => {
                let (u, _) = solve_lift(p, t, None, Some(&tr.comparison), &crate::complex::ChainMap::identity(p))?;
                let map = self.res.map.then(&u)?;
                let certificate = is_pure_quasi_iso(&map, &self.tests)?;
                let r = Resolution { side: Side::Injective, target: self.x.clone(), resolvent: t.clone(), map, certificate };
                let ok = r.terms_in_class();
                (r, ok)
            }
        };
        if !res.certificate.is_yes() {
            return Err(Error::InconsistentVerdicts(format!("truncated resolution at {m} is not a pure quasi-isomorphism")));
        }
        out(class_ok, format!("resolution in degrees {:?} certified", res.resolvent.range()))
    }

    /// (2): the profile bound and the boundary module lies in the class.
    fn criterion2(&self, n: i64) -> CriterionOutcome {
        let p = &self.res.resolvent;
        let (holds, detail) = if !self.within_bound(n) {
            (false, self.bound_text(n))
        } else {
            match self.side {
                Side::Projective => {
                    let c = p.differential(-n - 1).subquotients().cokernel;
                    let ok = purity_class(&c).pure_projective;
                    (ok, format!("{}; Coker d^{} = {c} pure projective: {ok}", self.bound_text(n), -n - 1))
                }
                Side::Injective => {
                    let k = p.differential(n).subquotients().kernel;
                    let ok = purity_class(&k).pure_injective == PureInjectivity::Yes;
                    (ok, format!("{}; Ker d^{n} = {k} pure injective: {ok}", self.bound_text(n)))
                }
            }
        };
        CriterionOutcome { criterion: 2, holds, evidence: Evidence::Proven, detail }
    }

    /// (3): the resolvent splits as a bounded part plus a contractible tail.
    fn criterion3(&self, n: i64) -> Result<CriterionOutcome> {
        let (holds, detail) = match split_off_tail(&self.res, n, &self.tests) {
            Ok(s) => (true, format!("kept part in degrees {:?}, contractible tail in {:?}", s.kept.range(), s.tail.range())),
            Err(Error::PrereqFails(why)) => (false, why),
            Err(e) => return Err(e),
        };
        Ok(CriterionOutcome { criterion: 3, holds, evidence: Evidence::Proven, detail })
    }

    /// (4): `Pext^i` against sampled partners vanishes above the shifted bound.
    fn criterion4(&self, n: i64) -> CriterionOutcome {
        let mut counter = None;
        for (k, (bound, table)) in self.sample_tables.iter().enumerate() {
            let above = |i: i64| match (self.side, bound) {
                (_, ExtendedInt::NegInf) | (_, ExtendedInt::PosInf) => true,
                (Side::Projective, ExtendedInt::Finite(s)) => i > n + s,
                (Side::Injective, ExtendedInt::Finite(s)) => i > n - s,
            };
            if let Some((i, m)) = table.iter().find(|(i, _)| above(**i)) {
                counter = Some(format!("sample {k}: Pext^{i} = {m}"));
                break;
            }
        }
        match counter {
            None => CriterionOutcome {
                criterion: 4,
                holds: true,
                evidence: Evidence::Consistent { checked: self.sample_tables.len() },
                detail: "no sampled partner has Pext above the bound".into(),
            },
            Some(d) => CriterionOutcome { criterion: 4, holds: false, evidence: Evidence::Refuted, detail: d },
        }
    }

    /// (5): the profile bound and `Pext^{n+1}` against every test module vanishes.
    fn criterion5(&self, n: i64) -> CriterionOutcome {
        let (holds, detail) = if !self.within_bound(n) {
            (false, self.bound_text(n))
        } else {
            match self.test_tables.iter().find(|(_, t)| t.contains_key(&(n + 1))) {
                Some((m, t)) => (false, format!("Pext^{}(.., {m}) = {}", n + 1, t[&(n + 1)])),
                None => (true, format!("{}; Pext^{} vanishes on {} test modules", self.bound_text(n), n + 1, self.test_tables.len())),
            }
        };
        CriterionOutcome { criterion: 5, holds, evidence: Evidence::Proven, detail }
    }

    fn report(&self, n: i64) -> Result<CriteriaReport> {
        let outcomes = vec![self.criterion1(n)?, self.criterion2(n), self.criterion3(n)?, self.criterion4(n), self.criterion5(n)];
        Ok(CriteriaReport { side: self.side, n, outcomes })
    }

    fn scan(&self) -> Result<DimReport> {
        let (lo, hi) = self.x.support().unwrap_or((0, -1));
        let range: Vec<i64> = if lo > hi {
            vec![0]
        } else {
            match self.side {
                Side::Projective => (-hi - 1..=-lo).collect(),
                Side::Injective => (lo - 1..=hi).collect(),
            }
        };
        let mut per_n = Vec::new();
        let mut first_true = None;
        for &n in &range {
            let r = self.report(n)?;
            let v = r.check()?;
            match (v, first_true) {
                (true, None) => first_true = Some(n),
                (false, Some(m)) => {
                    return Err(Error::InconsistentVerdicts(format!("criteria hold at {m} but fail at larger n = {n}")));
                }
                _ => {}
            }
            per_n.push(r);
        }
        let value = match first_true {
            Some(n) if n == range[0] => ExtendedInt::NegInf,
            Some(n) => ExtendedInt::Finite(n),
            None => ExtendedInt::PosInf,
        };
        Ok(DimReport {
            complex: self.x.clone(),
            side: self.side,
            value,
            inf_p: self.profile.inf_p,
            sup_p: self.profile.sup_p,
            per_n,
        })
    }
}

/// Evaluate the five criteria for `ppd X <= n` (projective side) or `pid X <= n` (injective side).
pub fn criteria_report(x: &BoundedComplex, n: i64, side: Side, tests: &TestFamily, samples: &Samples) -> Result<CriteriaReport> {
    Engine::new(x, side, tests, samples)?.report(n)
}

/// Pure projective dimension with the per-bound criteria.
pub fn ppd(x: &BoundedComplex, tests: &TestFamily) -> Result<DimReport> {
    ppd_with_samples(x, tests, &Samples::default())
}

pub fn ppd_with_samples(x: &BoundedComplex, tests: &TestFamily, samples: &Samples) -> Result<DimReport> {
    Engine::new(x, Side::Projective, tests, samples)?.scan()
}

/// Pure injective dimension with the per-bound criteria.
pub fn pid(y: &BoundedComplex, tests: &TestFamily) -> Result<DimReport> {
    pid_with_samples(y, tests, &Samples::default())
}

pub fn pid_with_samples(y: &BoundedComplex, tests: &TestFamily, samples: &Samples) -> Result<DimReport> {
    Engine::new(y, Side::Injective, tests, samples)?.scan()
}

/// One inequality checked by the probe.
#[derive(Clone, Debug)]
pub struct ProbeCheck {
    pub sample: usize,
    pub statement: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub ring: BaseRing,
    pub candidate: i64,
    pub samples: usize,
    /// max of `ppd X + inf_p X` over samples that are not pure exact
    pub observed_bound: ExtendedInt,
    pub checks: Vec<ProbeCheck>,
    /// nonzero `Pext^i`, `i >= 1`, between consecutive module samples
    pub nonzero_higher_pext: usize,
    /// lower bound backed by the rational tower over `Z`
    pub tower_lower_bound: Option<i64>,
    pub tower_witness: Option<Box<RationalWitness>>,
    /// finitely generated samples cannot see non-finitely-generated witnesses
    pub fg_blind: bool,
}

impl ProbeReport {
    pub fn reported_bound(&self) -> ExtendedInt {
        match self.tower_lower_bound {
            Some(b) => self.observed_bound.max(ExtendedInt::Finite(b)),
            None => self.observed_bound,
        }
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn add_ext(a: ExtendedInt, b: ExtendedInt) -> ExtendedInt {
    match (a, b) {
        (ExtendedInt::Finite(x), ExtendedInt::Finite(y)) => ExtendedInt::Finite(x + y),
        (ExtendedInt::NegInf, _) | (_, ExtendedInt::NegInf) => ExtendedInt::NegInf,
        _ => ExtendedInt::PosInf,
    }
}

fn is_module_stalk(x: &BoundedComplex) -> bool {
    x.support().is_none_or(|(lo, hi)| lo == hi && lo == 0)
}

/// Check the global-dimension inequalities for candidate `n` on a sample.
pub fn pgldim_probe(ring: &BaseRing, samples: &[BoundedComplex], n: i64, tower_witness: bool, tests: &TestFamily) -> Result<ProbeReport> {
    let mut checks = Vec::new();
    let mut observed = ExtendedInt::NegInf;
    let finite_ring = ring.modulus().is_some();
    let mut profiles = Vec::new();
    for (k, x) in samples.iter().enumerate() {
        let r = ppd(x, tests)?;
        profiles.push((r.inf_p, r.sup_p));
        if r.inf_p != ExtendedInt::PosInf {
            observed = observed.max(add_ext(r.value, r.inf_p));
        }
        let bound = match r.inf_p {
            ExtendedInt::Finite(i) => ExtendedInt::Finite(n - i),
            _ => ExtendedInt::PosInf,
        };
        checks.push(ProbeCheck { sample: k, statement: format!("ppd = {} <= n - inf_p = {bound}", r.value), holds: r.value <= bound });
        let torsion = x.range().is_none_or(|(lo, hi)| (lo..=hi).all(|d| x.term(d).is_finite()));
        if finite_ring || torsion {
            let q = pid(x, tests)?;
            let bound = match q.sup_p {
                ExtendedInt::Finite(s) => ExtendedInt::Finite(n + s),
                _ => ExtendedInt::PosInf,
            };
            checks.push(ProbeCheck { sample: k, statement: format!("pid = {} <= n + sup_p = {bound}", q.value), holds: q.value <= bound });
        }
    }
    let mut nonzero = 0;
    for k in 0..samples.len().saturating_sub(1) {
        let (x, y) = (&samples[k], &samples[k + 1]);
        let table = pext_table(x, y, PextRoute::ViaProjective, tests)?;
        let (inf_x, _) = profiles[k];
        let (_, sup_y) = profiles[k + 1];
        if let (ExtendedInt::Finite(i0), ExtendedInt::Finite(s)) = (inf_x, sup_y) {
            let bad = table.keys().find(|&&i| i > n + s - i0);
            checks.push(ProbeCheck {
                sample: k,
                statement: format!("Pext^i(X_{k}, X_{}) = 0 for i > {}", k + 1, n + s - i0),
                holds: bad.is_none(),
            });
        }
        if is_module_stalk(x) && is_module_stalk(y) {
            nonzero += table.keys().filter(|&&i| i >= 1).count();
        }
    }
    let (tower_lower_bound, witness) = if tower_witness && *ring == BaseRing::Integers {
        let w = rational_witness(8, tests)?;
        (Some(1), Some(Box::new(w)))
    } else {
        (None, None)
    };
    Ok(ProbeReport {
        ring: ring.clone(),
        candidate: n,
        samples: samples.len(),
        observed_bound: observed,
        checks,
        nonzero_higher_pext: nonzero,
        tower_lower_bound,
        fg_blind: witness.is_none(),
        tower_witness: witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::ModuleMap;
    use crate::ring::int;

    fn z() -> BaseRing {
        BaseRing::Integers
    }

    fn tf(r: &BaseRing) -> TestFamily {
        TestFamily::base(r, TestFamily::DEFAULT_CAP)
    }

    fn two_on_z() -> BoundedComplex {
        let zz = FgModule::free(&z(), 1);
        BoundedComplex::two_term(&ModuleMap::scalar(&zz, &int(2)), -1)
    }

    #[test]
    fn pext_examples() {
        let r = z();
        let s = |d: i64| BoundedComplex::stalk(&FgModule::cyclic(&r, d), 0);
        let p0 = pext(&s(6), &s(4), 0, PextRoute::ViaProjective, &tf(&r)).unwrap();
        assert_eq!(p0.factors(), &[int(2)]);
        let p1 = pext(&s(2), &s(2), 1, PextRoute::Both, &tf(&r)).unwrap();
        assert!(p1.is_zero());
        let p = pext(&two_on_z(), &s(2), 1, PextRoute::ViaProjective, &tf(&r)).unwrap();
        assert_eq!(p.factors(), &[int(2)]);
    }

    #[test]
    fn ppd_examples() {
        let r = z();
        let stalk = BoundedComplex::stalk(&FgModule::cyclic(&r, 6), 0);
        assert_eq!(ppd(&stalk, &tf(&r)).unwrap().value, ExtendedInt::Finite(0));
        let zz = FgModule::free(&r, 1);
        let contractible = BoundedComplex::two_term(&ModuleMap::identity(&zz), 0);
        assert_eq!(ppd(&contractible, &tf(&r)).unwrap().value, ExtendedInt::NegInf);
        let rep = ppd(&two_on_z(), &tf(&r)).unwrap();
        assert_eq!(rep.value, ExtendedInt::Finite(1));
        let at0 = rep.per_n.iter().find(|c| c.n == 0).unwrap();
        assert_eq!(at0.verdict(), Some(false));
        assert!(!at0.outcome(4).unwrap().holds);
    }

    #[test]
    fn pid_examples() {
        let r = BaseRing::integers_mod(4).unwrap();
        let stalk = BoundedComplex::stalk(&FgModule::cyclic(&r, 2), 0);
        assert_eq!(pid(&stalk, &tf(&r)).unwrap().value, ExtendedInt::Finite(0));
        let m = FgModule::free(&r, 1);
        let contractible = BoundedComplex::two_term(&ModuleMap::identity(&m), 0);
        assert_eq!(pid(&contractible, &tf(&r)).unwrap().value, ExtendedInt::NegInf);
        let pi = ModuleMap::new(&m, &FgModule::cyclic(&r, 2), crate::ring::RingMatrix::ints(&r, &[&[1]])).unwrap();
        let y = BoundedComplex::two_term(&pi, 0);
        let rep = pid(&y, &tf(&r)).unwrap();
        assert_eq!(rep.value, rep.sup_p);
    }

    #[test]
    fn criteria_on_two_term() {
        let r = z();
        let x = two_on_z();
        let c0 = criteria_report(&x, 0, Side::Projective, &tf(&r), &Samples::default()).unwrap();
        assert!(c0.outcomes.iter().all(|o| !o.holds));
        let c1 = criteria_report(&x, 1, Side::Projective, &tf(&r), &Samples::default()).unwrap();
        assert!(c1.outcomes.iter().all(|o| o.holds));
    }

    #[test]
    fn probe_over_integers() {
        let r = z();
        let samples: Vec<BoundedComplex> = [2, 3, 4].iter().map(|&d| BoundedComplex::stalk(&FgModule::cyclic(&r, d), 0)).collect();
        let rep = pgldim_probe(&r, &samples, 1, false, &tf(&r)).unwrap();
        assert_eq!(rep.observed_bound, ExtendedInt::Finite(0));
        assert!(rep.fg_blind && rep.all_hold());
        let rep = pgldim_probe(&r, &samples, 1, true, &tf(&r)).unwrap();
        assert_eq!(rep.reported_bound(), ExtendedInt::Finite(1));
    }
}

//! Bounded cochain complexes, chain maps, homotopies, cones and total Hom.
//!
//! Conventions: `X[k]^n = X^{n+k}` with differential `(-1)^k d`; the cone of
//! `f : X -> Y` has `cone^n = X^{n+1} (+) Y^n` and `(x, y) |-> (-d x, f x + d y)`;
//! a degree-`n` element of `Hom(X, Y)` is a family `phi^i : X^i -> Y^{i+n}`
//! with `d(phi)^i = d_Y o phi^i - (-1)^n phi^{i+1} o d_X`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::module::{
    block_map, direct_sum, hom_module, tensor_left, DirectSum, FgModule, HomModule, ModuleMap,
};
use crate::ring::{BaseRing, Int, RingMatrix};

/// A cochain complex with finitely many nonzero terms.
#[derive(Clone)]
pub struct BoundedComplex {
    ring: BaseRing,
    lo: i64,
    terms: Vec<FgModule>,
    /// `diffs[k] : terms[k] -> terms[k + 1]`
    diffs: Vec<ModuleMap>,
}

impl fmt::Debug for BoundedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex[")?;
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " -> ")?;
            }
            write!(f, "{}:{}", self.lo + k as i64, t)?;
        }
        write!(f, "]")
    }
}

impl BoundedComplex {
    /// Terms `X^{lo}, ..., X^{lo + len - 1}` and the differentials between
    /// consecutive terms. Validated.
    pub fn new(ring: &BaseRing, lo: i64, terms: Vec<FgModule>, diffs: Vec<ModuleMap>) -> Result<Self> {
        let x = Self::unchecked(ring, lo, terms, diffs)?;
        x.validate()?;
        Ok(x)
    }

    fn unchecked(ring: &BaseRing, lo: i64, terms: Vec<FgModule>, diffs: Vec<ModuleMap>) -> Result<Self> {
        if diffs.len() != terms.len().saturating_sub(1) {
            return Err(Error::InvalidComplex {
                degree: lo,
                reason: format!("{} terms need {} differentials", terms.len(), terms.len().saturating_sub(1)),
            });
        }
        Ok(BoundedComplex { ring: ring.clone(), lo, terms, diffs })
    }

    /// Build from sparse degree maps; missing terms are zero and missing
    /// differentials are zero maps.
    pub fn from_parts(
        ring: &BaseRing,
        terms: &BTreeMap<i64, FgModule>,
        diffs: &BTreeMap<i64, ModuleMap>,
    ) -> Result<Self> {
        let (Some(&lo), Some(&hi)) = (terms.keys().next(), terms.keys().next_back()) else {
            if let Some((&n, _)) = diffs.iter().find(|(_, d)| d.domain().gens() + d.codomain().gens() > 0) {
                return Err(Error::InvalidComplex { degree: n, reason: "differential between zero terms".into() });
            }
            return Ok(Self::zero(ring));
        };
        for &n in diffs.keys() {
            if n < lo || n >= hi {
                let d = &diffs[&n];
                if d.domain().gens() > 0 && d.codomain().gens() > 0 {
                    return Err(Error::InvalidComplex { degree: n, reason: "differential outside the support".into() });
                }
            }
        }
        let zero = FgModule::zero(ring);
        let ts: Vec<FgModule> = (lo..=hi).map(|n| terms.get(&n).cloned().unwrap_or_else(|| zero.clone())).collect();
        let mut ds = Vec::new();
        for n in lo..hi {
            let (a, b) = (&ts[(n - lo) as usize], &ts[(n - lo + 1) as usize]);
            let d = match diffs.get(&n) {
                Some(d) => {
                    if d.domain().gens() != a.gens() || d.codomain().gens() != b.gens() {
                        return Err(Error::InvalidComplex { degree: n, reason: "differential shape".into() });
                    }
                    d.retarget(a, b)
                }
                None => ModuleMap::zero(a, b),
            };
            ds.push(d);
        }
        Self::new(ring, lo, ts, ds)
    }

    pub fn zero(ring: &BaseRing) -> Self {
        BoundedComplex { ring: ring.clone(), lo: 0, terms: vec![], diffs: vec![] }
    }

    /// The module `m` concentrated in degree `n`.
    pub fn stalk(m: &FgModule, n: i64) -> Self {
        BoundedComplex { ring: m.ring().clone(), lo: n, terms: vec![m.clone()], diffs: vec![] }
    }

    /// Two-term complex `a -f-> b` in degrees `n, n + 1`.
    pub fn two_term(f: &ModuleMap, n: i64) -> Self {
        BoundedComplex {
            ring: f.ring().clone(),
            lo: n,
            terms: vec![f.domain().clone(), f.codomain().clone()],
            diffs: vec![f.clone()],
        }
    }

    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    /// Degrees carrying a stored term (possibly zero modules).
    pub fn range(&self) -> Option<(i64, i64)> {
        (!self.terms.is_empty()).then(|| (self.lo, self.lo + self.terms.len() as i64 - 1))
    }

    /// Smallest interval containing every nonzero term.
    pub fn support(&self) -> Option<(i64, i64)> {
        let nz: Vec<i64> = self
            .terms
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.is_zero())
            .map(|(k, _)| self.lo + k as i64)
            .collect();
        Some((*nz.first()?, *nz.last()?))
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_none()
    }

    fn index(&self, n: i64) -> Option<usize> {
        let k = n.checked_sub(self.lo)?;
        (k >= 0 && (k as usize) < self.terms.len()).then_some(k as usize)
    }

    pub fn term(&self, n: i64) -> FgModule {
        match self.index(n) {
            Some(k) => self.terms[k].clone(),
            None => FgModule::zero(&self.ring),
        }
    }

    /// `d^n : X^n -> X^{n+1}`.
    pub fn differential(&self, n: i64) -> ModuleMap {
        match (self.index(n), self.index(n + 1)) {
            (Some(k), Some(_)) => self.diffs[k].clone(),
            _ => ModuleMap::zero(&self.term(n), &self.term(n + 1)),
        }
    }

    /// Confirms well-defined differentials and `d o d = 0`; the error names the first failing degree.
    pub fn validate(&self) -> Result<()> {
        for (k, d) in self.diffs.iter().enumerate() {
            let n = self.lo + k as i64;
            if d.domain().gens() != self.terms[k].gens() || d.codomain().gens() != self.terms[k + 1].gens() {
                return Err(Error::InvalidComplex { degree: n, reason: "differential shape".into() });
            }
            if d.ring() != &self.ring {
                return Err(Error::RingMismatch);
            }
            if !d.is_well_defined() {
                return Err(Error::InvalidComplex { degree: n, reason: "differential is not well defined".into() });
            }
        }
        for k in 1..self.diffs.len() {
            if !self.diffs[k - 1].then(&self.diffs[k])?.is_zero() {
                return Err(Error::InvalidComplex {
                    degree: self.lo + k as i64,
                    reason: "d o d is not zero".into(),
                });
            }
        }
        Ok(())
    }

    /// `X[k]`.
    pub fn shift(&self, k: i64) -> Self {
        let sign: Int = if k % 2 == 0 { 1.into() } else { (-1).into() };
        BoundedComplex {
            ring: self.ring.clone(),
            lo: self.lo - k,
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&sign)).collect(),
        }
    }

    /// Degreewise direct sum with its structure maps.
    pub fn direct_sum(&self, other: &BoundedComplex) -> ComplexSum {
        let (lo, hi) = union_range(&[self, other]);
        let mut sums = BTreeMap::new();
        let mut terms = Vec::new();
        for n in lo..=hi {
            let s = direct_sum(&self.ring, &[self.term(n), other.term(n)]);
            terms.push(s.module.clone());
            sums.insert(n, s);
        }
        let mut diffs = Vec::new();
        for n in lo..hi {
            diffs.push(block_map(
                &sums[&n],
                &sums[&(n + 1)],
                &[
                    vec![Some(self.differential(n)), None],
                    vec![None, Some(other.differential(n))],
                ],
            ));
        }
        let complex = BoundedComplex { ring: self.ring.clone(), lo, terms, diffs };
        let inj = |which: usize, src: &BoundedComplex| {
            let comps = (lo..=hi).map(|n| (n, sums[&n].injections[which].clone())).collect();
            ChainMap::raw(src.clone(), complex.clone(), comps)
        };
        let proj = |which: usize, tgt: &BoundedComplex| {
            let comps = (lo..=hi).map(|n| (n, sums[&n].projections[which].clone())).collect();
            ChainMap::raw(complex.clone(), tgt.clone(), comps)
        };
        ComplexSum {
            inclusions: [inj(0, self), inj(1, other)],
            projections: [proj(0, self), proj(1, other)],
            complex: complex.clone(),
        }
    }

    /// `H^n(X)` with the cycle module and quotient data.
    pub fn homology(&self, n: i64) -> Homology {
        let ker = self.differential(n).subquotients();
        let incoming = self.differential(n - 1);
        let into_cycles = ker
            .kernel_inclusion
            .factor_through(&incoming)
            .expect("image of d^{n-1} lies in ker d^n");
        let rel = ker.kernel.relations().vstack(into_cycles.matrix()).expect("width");
        let pres = FgModule::new(&self.ring, ker.kernel.gens(), rel).expect("homology presentation");
        let (module, to, from) = pres.canonical_iso();
        let projection = ModuleMap::identity(&ker.kernel).retarget(&ker.kernel, &pres).then(&to).expect("shape");
        Homology {
            module,
            cycles: ker.kernel,
            cycle_inclusion: ker.kernel_inclusion,
            projection,
            representatives: from.matrix().clone(),
        }
    }

    pub fn homology_at(&self, n: i64) -> FgModule {
        self.homology(n).module
    }

    /// True when every homology group vanishes.
    pub fn is_acyclic(&self) -> bool {
        match self.range() {
            None => true,
            Some((lo, hi)) => (lo..=hi).all(|n| self.homology_at(n).is_zero()),
        }
    }

    pub fn is_contractible(&self) -> bool {
        null_homotopy(&ChainMap::identity(self)).is_some()
    }

    /// `Hom(F, X)` degreewise.
    pub fn hom_from(&self, f: &FgModule) -> BoundedComplex {
        let Some((lo, hi)) = self.range() else { return Self::zero(&self.ring) };
        let homs: Vec<HomModule> = (lo..=hi).map(|n| hom_module(f, &self.term(n))).collect();
        let terms: Vec<FgModule> = homs.iter().map(|h| h.module.clone()).collect();
        let diffs = (lo..hi)
            .map(|n| {
                let d = self.differential(n);
                let k = (n - lo) as usize;
                homs[k].induced(&homs[k + 1], |phi| phi.then(&d).expect("shape"))
            })
            .collect();
        BoundedComplex { ring: self.ring.clone(), lo, terms, diffs }
    }

    /// `F (x) X` degreewise.
    pub fn tensor_with(&self, f: &FgModule) -> BoundedComplex {
        let Some((lo, hi)) = self.range() else { return Self::zero(&self.ring) };
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            let (from, _, m) = tensor_left(f, &self.differential(n));
            terms.push(from.module.clone());
            if n < hi {
                diffs.push(m);
            }
        }
        let terms_fixed = terms.clone();
        let diffs = diffs
            .into_iter()
            .enumerate()
            .map(|(k, d)| d.retarget(&terms_fixed[k], &terms_fixed[k + 1]))
            .collect();
        BoundedComplex { ring: self.ring.clone(), lo, terms, diffs }
    }
}

fn union_range(xs: &[&BoundedComplex]) -> (i64, i64) {
    let ranges: Vec<(i64, i64)> = xs.iter().filter_map(|x| x.range()).collect();
    if ranges.is_empty() {
        return (0, -1);
    }
    (ranges.iter().map(|r| r.0).min().unwrap(), ranges.iter().map(|r| r.1).max().unwrap())
}

/// `X (+) Y` with inclusions and projections.
#[derive(Clone, Debug)]
pub struct ComplexSum {
    pub complex: BoundedComplex,
    pub inclusions: [ChainMap; 2],
    pub projections: [ChainMap; 2],
}

/// `H^n = Z^n / B^n`.
#[derive(Clone, Debug)]
pub struct Homology {
    pub module: FgModule,
    pub cycles: FgModule,
    pub cycle_inclusion: ModuleMap,
    pub projection: ModuleMap,
    /// row `j`: a cycle (in cycle-module coordinates) representing generator `j` of `module`
    pub representatives: RingMatrix,
}

/// A family `f^n : X^n -> Y^n` commuting with the differentials.
#[derive(Clone)]
pub struct ChainMap {
    source: BoundedComplex,
    target: BoundedComplex,
    components: BTreeMap<i64, ModuleMap>,
}

impl fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainMap({:?} -> {:?})", self.source, self.target)
    }
}

impl ChainMap {
    /// Validated constructor; missing components are zero.
    pub fn new(source: &BoundedComplex, target: &BoundedComplex, components: BTreeMap<i64, ModuleMap>) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch);
        }
        let mut fixed = BTreeMap::new();
        for (n, m) in components {
            let (a, b) = (source.term(n), target.term(n));
            if m.domain().gens() != a.gens() || m.codomain().gens() != b.gens() {
                return Err(Error::ShapeMismatch(format!("chain map component at degree {n}")));
            }
            let m = ModuleMap::new(&a, &b, m.matrix().clone()).map_err(|_| Error::NotChainMap { degree: n })?;
            fixed.insert(n, m);
        }
        let f = ChainMap { source: source.clone(), target: target.clone(), components: fixed };
        if let Some(n) = f.first_noncommuting_degree() {
            return Err(Error::NotChainMap { degree: n });
        }
        Ok(f)
    }

    pub(crate) fn raw(source: BoundedComplex, target: BoundedComplex, components: BTreeMap<i64, ModuleMap>) -> Self {
        let f = ChainMap { source, target, components };
        debug_assert!(f.first_noncommuting_degree().is_none(), "internal chain map does not commute");
        f
    }

    fn degrees(&self) -> (i64, i64) {
        union_range(&[&self.source, &self.target])
    }

    fn first_noncommuting_degree(&self) -> Option<i64> {
        let (lo, hi) = self.degrees();
        (lo - 1..=hi).find(|&n| {
            let left = self.component(n).then(&self.target.differential(n)).expect("shape");
            let right = self.source.differential(n).then(&self.component(n + 1)).expect("shape");
            !left.equals(&right)
        })
    }

    pub fn identity(x: &BoundedComplex) -> Self {
        let comps = x.range().map_or(BTreeMap::new(), |(lo, hi)| {
            (lo..=hi).map(|n| (n, ModuleMap::identity(&x.term(n)))).collect()
        });
        ChainMap { source: x.clone(), target: x.clone(), components: comps }
    }

    pub fn zero(x: &BoundedComplex, y: &BoundedComplex) -> Self {
        ChainMap { source: x.clone(), target: y.clone(), components: BTreeMap::new() }
    }

    pub fn source(&self) -> &BoundedComplex {
        &self.source
    }

    pub fn target(&self) -> &BoundedComplex {
        &self.target
    }

    pub fn component(&self, n: i64) -> ModuleMap {
        match self.components.get(&n) {
            Some(m) => m.clone(),
            None => ModuleMap::zero(&self.source.term(n), &self.target.term(n)),
        }
    }

    /// `other o self`.
    pub fn then(&self, other: &ChainMap) -> Result<ChainMap> {
        let (lo, hi) = union_range(&[&self.source, &other.target]);
        let mut comps = BTreeMap::new();
        for n in lo..=hi {
            comps.insert(n, self.component(n).then(&other.component(n))?);
        }
        Ok(ChainMap::raw(self.source.clone(), other.target.clone(), comps))
    }

    fn pointwise(&self, other: &ChainMap, op: impl Fn(&ModuleMap, &ModuleMap) -> Result<ModuleMap>) -> Result<ChainMap> {
        let (lo, hi) = self.degrees();
        let mut comps = BTreeMap::new();
        for n in lo..=hi {
            comps.insert(n, op(&self.component(n), &other.component(n))?);
        }
        Ok(ChainMap::raw(self.source.clone(), self.target.clone(), comps))
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        self.pointwise(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.pointwise(other, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> ChainMap {
        let comps = self.components.iter().map(|(n, m)| (*n, m.neg())).collect();
        ChainMap { source: self.source.clone(), target: self.target.clone(), components: comps }
    }

    /// `f[k] : X[k] -> Y[k]`, components unsigned.
    pub fn shift(&self, k: i64) -> ChainMap {
        let (xs, ys) = (self.source.shift(k), self.target.shift(k));
        let comps = self.components.iter().map(|(n, m)| (n - k, m.clone())).collect();
        ChainMap { source: xs, target: ys, components: comps }
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(ModuleMap::is_zero)
    }

    pub fn as_graded(&self) -> GradedMap {
        GradedMap { degree: 0, components: self.components.clone() }
    }

    /// `H^n(f)`.
    pub fn on_homology(&self, n: i64) -> ModuleMap {
        let hx = self.source.homology(n);
        let hy = self.target.homology(n);
        let into = hx.cycle_inclusion.then(&self.component(n)).expect("shape");
        let on_cycles = hy.cycle_inclusion.factor_through(&into).expect("cycles map to cycles");
        let m = hx
            .representatives
            .mul(on_cycles.matrix())
            .and_then(|m| m.mul(hy.projection.matrix()))
            .expect("shape");
        ModuleMap::new(&hx.module, &hy.module, m).expect("induced map on homology")
    }

    pub fn is_quasi_iso(&self) -> bool {
        let (lo, hi) = self.degrees();
        (lo..=hi).all(|n| self.on_homology(n).is_isomorphism())
    }
}

/// A homogeneous family `phi^i : X^i -> Y^{i + degree}`.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub degree: i64,
    pub components: BTreeMap<i64, ModuleMap>,
}

/// Homotopy `s^n : X^n -> Y^{n-1}` witnessing `f - g = d s + s d`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    pub components: BTreeMap<i64, ModuleMap>,
}

impl Homotopy {
    pub fn component(&self, x: &BoundedComplex, y: &BoundedComplex, n: i64) -> ModuleMap {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| ModuleMap::zero(&x.term(n), &y.term(n - 1)))
    }

    /// Checks `f^n - g^n = d_Y^{n-1} s^n + s^{n+1} d_X^n` at every degree.
    pub fn verify(&self, f: &ChainMap, g: &ChainMap) -> bool {
        let (x, y) = (f.source(), f.target());
        let (lo, hi) = f.degrees();
        (lo..=hi).all(|n| {
            let diff = f.component(n).sub(&g.component(n)).expect("shape");
            let a = self.component(x, y, n).then(&y.differential(n - 1)).expect("shape");
            let b = x.differential(n).then(&self.component(x, y, n + 1)).expect("shape");
            diff.equals(&a.add(&b).expect("shape"))
        })
    }
}

/// Degree-`n` part of the total Hom complex.
#[derive(Clone, Debug)]
struct HomDegree {
    sum: DirectSum,
    parts: Vec<(i64, HomModule)>,
}

/// `Hom(X, Y)` as a complex with encoding of graded maps.
#[derive(Clone, Debug)]
pub struct TotalHom {
    pub source: BoundedComplex,
    pub target: BoundedComplex,
    pub complex: BoundedComplex,
    degrees: BTreeMap<i64, HomDegree>,
}

impl TotalHom {
    fn build_degree(x: &BoundedComplex, y: &BoundedComplex, n: i64) -> HomDegree {
        let parts: Vec<(i64, HomModule)> = match x.range() {
            None => vec![],
            Some((lo, hi)) => (lo..=hi)
                .filter(|&i| !x.term(i).is_zero() && !y.term(i + n).is_zero())
                .map(|i| (i, hom_module(&x.term(i), &y.term(i + n))))
                .collect(),
        };
        let sum = direct_sum(x.ring(), &parts.iter().map(|(_, h)| h.module.clone()).collect::<Vec<_>>());
        HomDegree { sum, parts }
    }

    fn degree_data(&self, n: i64) -> HomDegree {
        self.degrees
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Self::build_degree(&self.source, &self.target, n))
    }

    /// Coordinates of a graded map of degree `n` in `Hom^n`.
    pub fn encode(&self, phi: &GradedMap) -> Vec<Int> {
        let data = self.degree_data(phi.degree);
        let mut out = Vec::with_capacity(data.sum.module.gens());
        for (i, h) in &data.parts {
            match phi.components.get(i) {
                Some(m) => out.extend(h.encode(m)),
                None => out.extend(std::iter::repeat_n(Int::zero(), h.module.gens())),
            }
        }
        out
    }

    pub fn decode(&self, n: i64, coords: &[Int]) -> GradedMap {
        let data = self.degree_data(n);
        let mut components = BTreeMap::new();
        for ((i, h), off) in data.parts.iter().zip(&data.sum.offsets) {
            components.insert(*i, h.decode(&coords[*off..*off + h.module.gens()]));
        }
        GradedMap { degree: n, components }
    }

    /// `d(phi)` computed from the defining formula.
    pub fn differential_of(&self, phi: &GradedMap) -> GradedMap {
        let (x, y) = (&self.source, &self.target);
        let n = phi.degree;
        let sign: Int = if n % 2 == 0 { 1.into() } else { (-1).into() };
        let mut components = BTreeMap::new();
        if let Some((lo, hi)) = x.range() {
            for i in lo..=hi {
                let zero = || ModuleMap::zero(&x.term(i), &y.term(i + n));
                let phi_i = phi.components.get(&i).cloned().unwrap_or_else(zero);
                let phi_next = phi
                    .components
                    .get(&(i + 1))
                    .cloned()
                    .unwrap_or_else(|| ModuleMap::zero(&x.term(i + 1), &y.term(i + 1 + n)));
                let a = phi_i.then(&y.differential(i + n)).expect("shape");
                let b = x.differential(i).then(&phi_next).expect("shape").scale(&sign);
                components.insert(i, a.sub(&b).expect("shape"));
            }
        }
        GradedMap { degree: n + 1, components }
    }

    fn differential_matrix(&self, n: i64) -> ModuleMap {
        let from = self.degree_data(n);
        let to = self.degree_data(n + 1);
        let g = from.sum.module.gens();
        let mut rows = Vec::with_capacity(g);
        for t in 0..g {
            let phi = self.decode(n, &from.sum.module.basis_vector(t));
            rows.push(self.encode(&self.differential_of(&phi)));
        }
        let m = RingMatrix::new(self.source.ring().clone(), g, to.sum.module.gens(), rows.into_iter().flatten().collect())
            .expect("shape");
        ModuleMap::new(&from.sum.module, &to.sum.module, m).expect("total Hom differential")
    }

    /// `d^n : Hom^n -> Hom^{n+1}`, computed for any degree.
    pub fn differential(&self, n: i64) -> ModuleMap {
        match (self.degrees.get(&n), self.degrees.get(&(n + 1))) {
            (Some(_), Some(_)) => self.complex.differential(n),
            _ => self.differential_matrix(n),
        }
    }

    /// `H^n(Hom(X, Y))`.
    pub fn homology(&self, n: i64) -> FgModule {
        if self.degrees.contains_key(&n) && self.degrees.contains_key(&(n - 1)) && self.degrees.contains_key(&(n + 1)) {
            return self.complex.homology_at(n);
        }
        let c = BoundedComplex::new(
            self.source.ring(),
            n - 1,
            vec![self.degree_data(n - 1).sum.module, self.degree_data(n).sum.module, self.degree_data(n + 1).sum.module],
            vec![self.differential(n - 1), self.differential(n)],
        )
        .expect("total Hom window");
        c.homology_at(n)
    }

    /// Preimage of a degree-`n` graded map under `d^{n-1}`.
    pub fn preimage(&self, phi: &GradedMap) -> Option<GradedMap> {
        let d = self.differential(phi.degree - 1);
        let coords = d.preimage(&self.encode(phi))?;
        Some(self.decode(phi.degree - 1, &coords))
    }
}

pub fn total_hom(x: &BoundedComplex, y: &BoundedComplex) -> Result<TotalHom> {
    if x.ring() != y.ring() {
        return Err(Error::RingMismatch);
    }
    let ring = x.ring();
    let (Some((xl, xh)), Some((yl, yh))) = (x.range(), y.range()) else {
        return Ok(TotalHom {
            source: x.clone(),
            target: y.clone(),
            complex: BoundedComplex::zero(ring),
            degrees: BTreeMap::new(),
        });
    };
    let (lo, hi) = (yl - xh, yh - xl);
    let degrees: BTreeMap<i64, HomDegree> = (lo..=hi).map(|n| (n, TotalHom::build_degree(x, y, n))).collect();
    let mut th = TotalHom { source: x.clone(), target: y.clone(), complex: BoundedComplex::zero(ring), degrees };
    let terms: Vec<FgModule> = (lo..=hi).map(|n| th.degrees[&n].sum.module.clone()).collect();
    let diffs: Vec<ModuleMap> = (lo..hi).map(|n| th.differential_matrix(n)).collect();
    th.complex = BoundedComplex::new(ring, lo, terms, diffs)?;
    Ok(th)
}

/// A homotopy `s` with `f = d s + s d`, if one exists.
pub fn null_homotopy(f: &ChainMap) -> Option<Homotopy> {
    let th = total_hom(f.source(), f.target()).expect("same ring");
    let s = th.preimage(&f.as_graded())?;
    let h = Homotopy { components: s.components };
    debug_assert!(h.verify(f, &ChainMap::zero(f.source(), f.target())));
    Some(h)
}

pub fn homotopy_between(f: &ChainMap, g: &ChainMap) -> Option<Homotopy> {
    null_homotopy(&f.sub(g).ok()?)
}

/// The mapping cone triangle `X -f-> Y -> cone(f) -> X[1]`.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub f: ChainMap,
    pub cone: BoundedComplex,
    /// `Y -> cone`, `y |-> (0, y)`
    pub into_cone: ChainMap,
    /// `cone -> X[1]`, `(x, y) |-> x`
    pub to_shift: ChainMap,
    sums: BTreeMap<i64, DirectSum>,
}

impl Triangle {
    /// Direct-sum data of `cone^n = X^{n+1} (+) Y^n`.
    pub fn sum_at(&self, n: i64) -> DirectSum {
        self.sums.get(&n).cloned().unwrap_or_else(|| {
            direct_sum(self.cone.ring(), &[self.f.source().term(n + 1), self.f.target().term(n)])
        })
    }

    /// Chain map `cone(f) -> cone(g)` given by block components
    /// `(x, y) |-> (a x, b y + h x)` with `a : X^{n+1} -> X'^{n+1}`,
    /// `b : Y^n -> Y'^n`, `h : X^{n+1} -> Y'^n`.
    pub fn map_to(
        &self,
        other: &Triangle,
        a: &ChainMap,
        b: &ChainMap,
        h: &BTreeMap<i64, ModuleMap>,
    ) -> Result<ChainMap> {
        let (lo, hi) = union_range(&[&self.cone, &other.cone]);
        let mut comps = BTreeMap::new();
        for n in lo..=hi {
            let hn = h.get(&(n + 1)).cloned();
            let m = block_map(
                &self.sum_at(n),
                &other.sum_at(n),
                &[vec![Some(a.component(n + 1)), hn], vec![None, Some(b.component(n))]],
            );
            comps.insert(n, m.retarget(&self.cone.term(n), &other.cone.term(n)));
        }
        ChainMap::new(&self.cone, &other.cone, comps)
    }
}

pub fn cone(f: &ChainMap) -> Triangle {
    let (x, y) = (f.source(), f.target());
    let ring = x.ring();
    let (lo, hi) = union_range(&[&x.shift(1), y]);
    let mut sums = BTreeMap::new();
    for n in lo..=hi {
        sums.insert(n, direct_sum(ring, &[x.term(n + 1), y.term(n)]));
    }
    let terms: Vec<FgModule> = (lo..=hi).map(|n| sums[&n].module.clone()).collect();
    let diffs: Vec<ModuleMap> = (lo..hi)
        .map(|n| {
            block_map(
                &sums[&n],
                &sums[&(n + 1)],
                &[
                    vec![Some(x.differential(n + 1).neg()), Some(f.component(n + 1))],
                    vec![None, Some(y.differential(n))],
                ],
            )
        })
        .collect();
    let c = if lo > hi {
        BoundedComplex::zero(ring)
    } else {
        BoundedComplex { ring: ring.clone(), lo, terms, diffs }
    };
    debug_assert!(c.validate().is_ok());
    let into = sums.iter().map(|(n, s)| (*n, s.injections[1].clone())).collect();
    let out = sums.iter().map(|(n, s)| (*n, s.projections[0].clone())).collect();
    let into_cone = ChainMap::raw(y.clone(), c.clone(), into);
    let to_shift = ChainMap::raw(c.clone(), x.shift(1), out);
    Triangle { f: f.clone(), cone: c, into_cone, to_shift, sums }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationMode {
    /// `... -> X^{m-1} -> Ker d^m -> 0`, needs pure exactness above `m`.
    KernelStyle,
    /// `0 -> Coker d^{m-1} -> X^{m+1} -> ...`, needs pure exactness below `m`.
    CokernelStyle,
}

#[derive(Clone, Debug)]
pub struct Truncation {
    pub complex: BoundedComplex,
    /// `X' -> X` for kernel style, `X -> X'` for cokernel style.
    pub comparison: ChainMap,
    pub certificate: crate::purity::PureQuasiIsoVerdict,
}

/// Replace the part of `x` above (kernel style) or below (cokernel style)
/// degree `m`, keeping the pure quasi-isomorphism class.
pub fn truncate(x: &BoundedComplex, m: i64, mode: TruncationMode, tests: &crate::purity::TestFamily) -> Result<Truncation> {
    use crate::purity::{is_pure_quasi_iso, purity_profile, PureQuasiIsoVerdict};
    let ring = x.ring();
    let profile = purity_profile(x, tests)?;
    let bad = profile.failing_degrees().into_iter().find(|&n| match mode {
        TruncationMode::KernelStyle => n > m,
        TruncationMode::CokernelStyle => n < m,
    });
    if let Some(n) = bad {
        return Err(Error::PrereqPurityFails(n));
    }
    let (lo, hi) = x.range().unwrap_or((m, m));
    let (complex, comparison) = match mode {
        TruncationMode::KernelStyle => {
            let sq = x.differential(m).subquotients();
            let k = sq.kernel.clone();
            let start = lo.min(m);
            let mut terms: Vec<FgModule> = (start..m).map(|n| x.term(n)).collect();
            terms.push(k.clone());
            let mut diffs: Vec<ModuleMap> = (start..m - 1).map(|n| x.differential(n)).collect();
            let into_k = sq.kernel_inclusion.factor_through(&x.differential(m - 1)).expect("d o d = 0");
            if m > start {
                diffs.push(into_k);
            }
            let t = BoundedComplex::new(ring, start, terms, diffs)?;
            let mut comps: BTreeMap<i64, ModuleMap> = (start..m).map(|n| (n, ModuleMap::identity(&x.term(n)))).collect();
            comps.insert(m, sq.kernel_inclusion.clone());
            let comps = comps
                .into_iter()
                .map(|(n, c)| (n, c.retarget(&t.term(n), &x.term(n))))
                .collect();
            let cmp = ChainMap::new(&t, x, comps)?;
            (t, cmp)
        }
        TruncationMode::CokernelStyle => {
            let sq = x.differential(m - 1).subquotients();
            let c = sq.cokernel.clone();
            let end = hi.max(m);
            let proj = sq.cokernel_projection.clone();
            let out = proj.lift_rows(&ModuleMap::identity(&c)).expect("projection is onto");
            let down = ModuleMap::new(&c, &x.term(m + 1), out.mul(x.differential(m).matrix())?)?;
            let mut terms = vec![c.clone()];
            terms.extend((m + 1..=end).map(|n| x.term(n)));
            let mut diffs = Vec::new();
            if end > m {
                diffs.push(down);
            }
            diffs.extend((m + 1..end).map(|n| x.differential(n)));
            let t = BoundedComplex::new(ring, m, terms, diffs)?;
            let mut comps: BTreeMap<i64, ModuleMap> = (m + 1..=end).map(|n| (n, ModuleMap::identity(&x.term(n)))).collect();
            comps.insert(m, proj);
            let comps = comps
                .into_iter()
                .map(|(n, c)| (n, c.retarget(&x.term(n), &t.term(n))))
                .collect();
            let cmp = ChainMap::new(x, &t, comps)?;
            (t, cmp)
        }
    };
    let certificate = is_pure_quasi_iso(&comparison, tests)?;
    if !matches!(certificate, PureQuasiIsoVerdict::Yes { .. }) {
        return Err(Error::InconsistentVerdicts(format!(
            "truncation comparison at {m} is not a pure quasi-isomorphism"
        )));
    }
    Ok(Truncation { complex, comparison, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    fn z() -> BaseRing {
        BaseRing::Integers
    }

    fn two_on_z() -> BoundedComplex {
        let zz = FgModule::free(&z(), 1);
        BoundedComplex::two_term(&ModuleMap::scalar(&zz, &int(2)), -1)
    }

    #[test]
    fn validate_examples() {
        let two = FgModule::cyclic(&z(), 2);
        assert!(BoundedComplex::stalk(&two, 0).validate().is_ok());
        assert!(two_on_z().validate().is_ok());
        let id = ModuleMap::identity(&two);
        let r = BoundedComplex::new(&z(), 0, vec![two.clone(), two.clone(), two.clone()], vec![id.clone(), id]);
        assert!(matches!(r, Err(Error::InvalidComplex { degree: 1, .. })));
    }

    #[test]
    fn shift_and_homology() {
        let x = two_on_z();
        let s = x.shift(1);
        assert_eq!(s.range(), Some((-2, -1)));
        assert_eq!(s.differential(-2).matrix().get(0, 0), &int(-2));
        assert_eq!(x.shift(2).differential(-3).matrix().get(0, 0), &int(2));
        assert!(x.homology_at(0).is_isomorphic(&FgModule::cyclic(&z(), 2)));
        assert!(x.homology_at(-1).is_zero());
        assert!(x.homology_at(5).is_zero());
    }

    #[test]
    fn cone_of_quotient() {
        let zz = FgModule::free(&z(), 1);
        let two = FgModule::cyclic(&z(), 2);
        let q = ModuleMap::new(&zz, &two, RingMatrix::ints(&z(), &[&[1]])).unwrap();
        let f = ChainMap::new(
            &BoundedComplex::stalk(&zz, 0),
            &BoundedComplex::stalk(&two, 0),
            BTreeMap::from([(0, q)]),
        )
        .unwrap();
        let t = cone(&f);
        assert!(t.cone.homology_at(-1).is_isomorphic(&zz));
        assert!(t.cone.homology_at(0).is_zero());
        assert!(null_homotopy(&f.then(&t.into_cone).unwrap()).is_some());
        assert!(null_homotopy(&t.into_cone.then(&t.to_shift).unwrap()).is_some());
    }

    #[test]
    fn total_hom_examples() {
        let two = FgModule::cyclic(&z(), 2);
        let four = FgModule::cyclic(&z(), 4);
        let th = total_hom(&BoundedComplex::stalk(&two, 0), &BoundedComplex::stalk(&four, 0)).unwrap();
        assert!(th.complex.term(0).is_isomorphic(&two));
        let th = total_hom(&two_on_z(), &BoundedComplex::stalk(&two, 0)).unwrap();
        assert!(th.complex.term(0).is_isomorphic(&two));
        assert!(th.complex.term(1).is_isomorphic(&two));
        assert!(th.complex.differential(0).is_zero());
    }

    #[test]
    fn homotopies() {
        let zz = FgModule::free(&z(), 1);
        let x = BoundedComplex::two_term(&ModuleMap::identity(&zz), 0);
        assert!(x.is_contractible());
        assert!(!BoundedComplex::stalk(&FgModule::cyclic(&z(), 2), 0).is_contractible());
        let f = ChainMap::zero(&x, &x);
        assert!(null_homotopy(&f).is_some());
    }

    #[test]
    fn truncation_examples() {
        use crate::purity::TestFamily;
        let r = z();
        let tests = TestFamily::base(&r, TestFamily::DEFAULT_CAP);
        let m = FgModule::cyclic(&r, 6);
        let two = FgModule::cyclic(&r, 2);
        let pad = BoundedComplex::two_term(&ModuleMap::identity(&two), 1);
        let x = BoundedComplex::stalk(&m, 0).direct_sum(&pad).complex;
        let t = truncate(&x, 0, TruncationMode::KernelStyle, &tests).unwrap();
        assert_eq!(t.complex.support(), Some((0, 0)));
        assert!(t.complex.term(0).is_isomorphic(&m));

        for mode in [TruncationMode::KernelStyle, TruncationMode::CokernelStyle] {
            for k in 0..4 {
                assert!(truncate(&pad, k, mode, &tests).is_ok());
            }
        }

        let r = truncate(&two_on_z(), -1, TruncationMode::KernelStyle, &tests);
        assert!(matches!(r, Err(Error::PrereqPurityFails(0))));
        let r = truncate(&two_on_z(), 0, TruncationMode::CokernelStyle, &tests);
        assert!(matches!(r, Err(Error::PrereqPurityFails(-1))));
    }
}

//! Finitely generated modules over `Z` and `Z/m`.
//!
//! A module is a presentation: `gens` generators and a relation matrix whose
//! rows are relations (row-vector convention, so a map `M -> N` is a
//! `gens(M) x gens(N)` matrix acting by `x |-> x * F`). Over `Z/m` every
//! computation runs on the lifted integer presentation with `m * I` appended,
//! so all lattice work happens over `Z`.
//!
//! Each module caches a Smith decomposition `M ~ (+)_j Z/(e_j)` with `e_j = 0`
//! for free summands. Canonical coordinates are coordinates in that
//! decomposition and are reduced modulo `e_j`.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{left_kernel, row_lattice_basis, smith_normal_form, BaseRing, Int, LeftSolver, RingMatrix};

#[derive(Debug)]
struct Canon {
    /// Nontrivial cyclic factors: torsion (> 1) ascending, then zeros.
    factors: Vec<Int>,
    /// gens x k, generator coordinates -> canonical coordinates.
    to: RingMatrix,
    /// k x gens, canonical generators in generator coordinates.
    from: RingMatrix,
}

#[derive(Debug)]
struct ModuleData {
    ring: BaseRing,
    gens: usize,
    relations: RingMatrix,
    canon: Canon,
}

/// A finitely generated module given by generators and relations.
#[derive(Clone)]
pub struct FgModule(Arc<ModuleData>);

/// Isomorphism type `R^free_rank (+) R/(d_1) (+) ... (+) R/(d_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub free_rank: usize,
    pub invariant_factors: Vec<Int>,
}

impl CanonicalForm {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn lift(m: &RingMatrix) -> RingMatrix {
    m.change_ring(&BaseRing::Integers)
}

fn effective_relations(ring: &BaseRing, gens: usize, relations: &RingMatrix) -> RingMatrix {
    let rel = lift(relations);
    match ring.modulus() {
        None => rel,
        Some(m) => rel
            .vstack(&RingMatrix::scalar(&BaseRing::Integers, gens, m))
            .expect("same width"),
    }
}

fn compute_canon(ring: &BaseRing, gens: usize, relations: &RingMatrix) -> Canon {
    let eff = effective_relations(ring, gens, relations);
    let snf = smith_normal_form(&eff);
    let diag = snf.diagonal();
    let mut kept = Vec::new();
    let mut factors = Vec::new();
    for j in 0..gens {
        let d = diag.get(j).cloned().unwrap_or_else(Int::zero);
        if !d.is_one() {
            kept.push(j);
            factors.push(d);
        }
    }
    Canon { factors, to: snf.v.select_cols(&kept), from: snf.v_inv.select_rows(&kept) }
}

impl FgModule {
    pub fn new(ring: &BaseRing, gens: usize, relations: RingMatrix) -> Result<Self> {
        if relations.cols() != gens {
            return Err(Error::ShapeMismatch(format!(
                "relation matrix has {} columns for {gens} generators",
                relations.cols()
            )));
        }
        if relations.ring() != ring {
            return Err(Error::RingMismatch);
        }
        let canon = compute_canon(ring, gens, &relations);
        Ok(FgModule(Arc::new(ModuleData { ring: ring.clone(), gens, relations, canon })))
    }

    /// Module from integer relation rows (reduced into the ring).
    pub fn from_relations(ring: &BaseRing, gens: usize, rows: &[Vec<Int>]) -> Result<Self> {
        let entries: Vec<Int> = rows.iter().flatten().cloned().collect();
        if rows.iter().any(|r| r.len() != gens) {
            return Err(Error::ShapeMismatch("relation length".into()));
        }
        Self::new(ring, gens, RingMatrix::new(ring.clone(), rows.len(), gens, entries)?)
    }

    /// `(+)_j R/(e_j)` with the diagonal presentation; `e_j = 0` gives `R`.
    pub fn from_factors(ring: &BaseRing, factors: &[Int]) -> Self {
        let rows: Vec<Vec<Int>> = factors
            .iter()
            .enumerate()
            .filter(|(_, e)| !ring.is_zero(e))
            .map(|(j, e)| {
                let mut r = vec![Int::zero(); factors.len()];
                r[j] = e.clone();
                r
            })
            .collect();
        Self::from_relations(ring, factors.len(), &rows).expect("diagonal presentation")
    }

    pub fn cyclic(ring: &BaseRing, d: impl Into<Int>) -> Self {
        Self::from_factors(ring, &[d.into()])
    }

    pub fn free(ring: &BaseRing, rank: usize) -> Self {
        Self::from_factors(ring, &vec![Int::zero(); rank])
    }

    pub fn zero(ring: &BaseRing) -> Self {
        Self::from_factors(ring, &[])
    }

    pub fn ring(&self) -> &BaseRing {
        &self.0.ring
    }

    pub fn gens(&self) -> usize {
        self.0.gens
    }

    pub fn relations(&self) -> &RingMatrix {
        &self.0.relations
    }

    pub fn same(&self, other: &FgModule) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Cyclic factors `e_j` of the cached decomposition (`0` = free).
    pub fn factors(&self) -> &[Int] {
        &self.0.canon.factors
    }

    pub fn canonical_rank(&self) -> usize {
        self.0.canon.factors.len()
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        let f = &self.0.canon.factors;
        let free_rank = f.iter().filter(|e| e.is_zero()).count();
        let mut invariant_factors: Vec<Int> = f.iter().filter(|e| !e.is_zero()).cloned().collect();
        invariant_factors.sort();
        CanonicalForm { free_rank, invariant_factors }
    }

    /// The canonical module with witness isomorphisms `self -> C` and `C -> self`.
    pub fn canonical_iso(&self) -> (FgModule, ModuleMap, ModuleMap) {
        let c = FgModule::from_factors(self.ring(), self.factors());
        let to = ModuleMap::raw(self.clone(), c.clone(), self.0.canon.to.change_ring(self.ring()));
        let from = ModuleMap::raw(c.clone(), self.clone(), self.0.canon.from.change_ring(self.ring()));
        (c, to, from)
    }

    pub fn is_zero(&self) -> bool {
        self.0.canon.factors.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.0.canon.factors.iter().filter(|e| e.is_zero()).count()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    /// Cardinality for finite modules.
    pub fn order(&self) -> Option<Int> {
        self.is_finite().then(|| self.0.canon.factors.iter().product())
    }

    /// Least common multiple of the torsion factors (1 for torsion-free).
    pub fn torsion_exponent(&self) -> Int {
        self.0
            .canon
            .factors
            .iter()
            .filter(|e| !e.is_zero())
            .fold(Int::one(), |acc, e| acc.lcm(e))
    }

    pub fn is_isomorphic(&self, other: &FgModule) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    /// Canonical coordinates of an element given in generator coordinates.
    pub fn to_canonical(&self, x: &[Int]) -> Vec<Int> {
        let lifted: Vec<Int> = x.to_vec();
        let y = lift(&self.0.canon.to).left_apply(&lifted);
        y.into_iter()
            .zip(&self.0.canon.factors)
            .map(|(v, e)| if e.is_zero() { v } else { v.mod_floor(e) })
            .collect()
    }

    /// Generator coordinates of an element given in canonical coordinates.
    pub fn from_canonical(&self, y: &[Int]) -> Vec<Int> {
        let x = lift(&self.0.canon.from).left_apply(y);
        x.iter().map(|v| self.ring().reduce(v)).collect()
    }

    pub fn is_zero_element(&self, x: &[Int]) -> bool {
        self.to_canonical(x).iter().all(Zero::is_zero)
    }

    pub fn elements_equal(&self, x: &[Int], y: &[Int]) -> bool {
        let d: Vec<Int> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero_element(&d)
    }

    /// All elements (generator coordinates) of a finite module.
    pub fn elements(&self) -> Option<Vec<Vec<Int>>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![vec![]];
        for e in self.factors() {
            let mut next = Vec::new();
            for prefix in &out {
                let mut v = Int::zero();
                while &v < e {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    next.push(p);
                    v += 1;
                }
            }
            out = next;
        }
        Some(out.iter().map(|c| self.from_canonical(c)).collect())
    }

    /// Generator `i` as an element.
    pub fn basis_vector(&self, i: usize) -> Vec<Int> {
        let mut v = vec![Int::zero(); self.gens()];
        v[i] = Int::one();
        v
    }

    /// Diagonal matrix of canonical factors, the relation lattice in canonical coordinates.
    fn factor_lattice(&self) -> RingMatrix {
        let k = self.canonical_rank();
        let mut d = RingMatrix::zeros(&BaseRing::Integers, k, k);
        for (j, e) in self.factors().iter().enumerate() {
            d.set(j, j, e.clone());
        }
        d
    }
}

impl fmt::Debug for FgModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgModule({} over {})", self.canonical_form(), self.ring())
    }
}

impl fmt::Display for FgModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_form())
    }
}

/// An element of a module in generator coordinates.
#[derive(Clone, Debug)]
pub struct Element {
    pub module: FgModule,
    pub coords: Vec<Int>,
}

impl Element {
    pub fn new(module: &FgModule, coords: Vec<Int>) -> Result<Self> {
        if coords.len() != module.gens() {
            return Err(Error::ShapeMismatch("element length".into()));
        }
        let coords = coords.iter().map(|c| module.ring().reduce(c)).collect();
        Ok(Element { module: module.clone(), coords })
    }

    pub fn is_zero(&self) -> bool {
        self.module.is_zero_element(&self.coords)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.module.gens() == other.module.gens() && self.module.elements_equal(&self.coords, &other.coords)
    }
}

/// Homomorphism between finitely generated modules, given on generators.
#[derive(Clone)]
pub struct ModuleMap {
    domain: FgModule,
    codomain: FgModule,
    matrix: RingMatrix,
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleMap({:?} -> {:?}, {})", self.domain, self.codomain, self.matrix)
    }
}

impl ModuleMap {
    /// Validated constructor: every domain relation must map into the
    /// codomain relation lattice.
    pub fn new(domain: &FgModule, codomain: &FgModule, matrix: RingMatrix) -> Result<Self> {
        if domain.ring() != codomain.ring() || matrix.ring() != domain.ring() {
            return Err(Error::RingMismatch);
        }
        if matrix.rows() != domain.gens() || matrix.cols() != codomain.gens() {
            return Err(Error::ShapeMismatch(format!(
                "map matrix {}x{} between modules with {} and {} generators",
                matrix.rows(),
                matrix.cols(),
                domain.gens(),
                codomain.gens()
            )));
        }
        let f = ModuleMap { domain: domain.clone(), codomain: codomain.clone(), matrix };
        if let Some(i) = f.first_bad_relation() {
            return Err(Error::IllFormedMap(format!("relation {i} of the domain is not preserved")));
        }
        Ok(f)
    }

    pub(crate) fn raw(domain: FgModule, codomain: FgModule, matrix: RingMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), domain.gens());
        debug_assert_eq!(matrix.cols(), codomain.gens());
        let f = ModuleMap { domain, codomain, matrix };
        debug_assert!(f.first_bad_relation().is_none(), "ill-formed internal map {f:?}");
        f
    }

    fn first_bad_relation(&self) -> Option<usize> {
        let rel = self.domain.relations();
        (0..rel.rows()).find(|&i| {
            let img = self.matrix.left_apply(rel.row(i));
            !self.codomain.is_zero_element(&img)
        })
    }

    pub fn is_well_defined(&self) -> bool {
        self.first_bad_relation().is_none()
    }

    pub fn identity(m: &FgModule) -> Self {
        Self::raw(m.clone(), m.clone(), RingMatrix::identity(m.ring(), m.gens()))
    }

    pub fn zero(domain: &FgModule, codomain: &FgModule) -> Self {
        Self::raw(
            domain.clone(),
            codomain.clone(),
            RingMatrix::zeros(domain.ring(), domain.gens(), codomain.gens()),
        )
    }

    /// Multiplication by a scalar on one module.
    pub fn scalar(m: &FgModule, c: &Int) -> Self {
        Self::raw(m.clone(), m.clone(), RingMatrix::scalar(m.ring(), m.gens(), c))
    }

    pub fn domain(&self) -> &FgModule {
        &self.domain
    }

    pub fn codomain(&self) -> &FgModule {
        &self.codomain
    }

    pub fn matrix(&self) -> &RingMatrix {
        &self.matrix
    }

    pub fn ring(&self) -> &BaseRing {
        self.domain.ring()
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        self.matrix.left_apply(x)
    }

    /// `other o self` (apply `self` first).
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if self.codomain.gens() != other.domain.gens() {
            return Err(Error::ShapeMismatch("composition".into()));
        }
        Ok(ModuleMap::raw(self.domain.clone(), other.codomain.clone(), self.matrix.mul(&other.matrix)?))
    }

    pub fn add(&self, other: &ModuleMap) -> Result<ModuleMap> {
        Ok(ModuleMap::raw(self.domain.clone(), self.codomain.clone(), self.matrix.add(&other.matrix)?))
    }

    pub fn sub(&self, other: &ModuleMap) -> Result<ModuleMap> {
        Ok(ModuleMap::raw(self.domain.clone(), self.codomain.clone(), self.matrix.sub(&other.matrix)?))
    }

    pub fn neg(&self) -> ModuleMap {
        ModuleMap::raw(self.domain.clone(), self.codomain.clone(), self.matrix.neg())
    }

    pub fn scale(&self, c: &Int) -> ModuleMap {
        ModuleMap::raw(self.domain.clone(), self.codomain.clone(), self.matrix.scale(c))
    }

    /// Same matrix reinterpreted between other presentations with the same generator counts.
    pub(crate) fn retarget(&self, domain: &FgModule, codomain: &FgModule) -> ModuleMap {
        ModuleMap::raw(domain.clone(), codomain.clone(), self.matrix.clone())
    }

    pub fn is_zero(&self) -> bool {
        (0..self.domain.gens()).all(|i| self.codomain.is_zero_element(self.matrix.row(i)))
    }

    pub fn equals(&self, other: &ModuleMap) -> bool {
        self.matrix.rows() == other.matrix.rows()
            && self.matrix.cols() == other.matrix.cols()
            && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Integer matrix from canonical domain coordinates to canonical codomain
    /// coordinates (entries reduced modulo the codomain factors).
    pub fn canonical_matrix(&self) -> RingMatrix {
        let from = lift(&self.domain.0.canon.from);
        let m = from.mul(&lift(&self.matrix)).expect("shape");
        let m = m.mul(&lift(&self.codomain.0.canon.to)).expect("shape");
        reduce_columns(&m, self.codomain.factors())
    }

    /// Matrix from generator coordinates to canonical codomain coordinates.
    fn image_matrix(&self) -> RingMatrix {
        let m = lift(&self.matrix).mul(&lift(&self.codomain.0.canon.to)).expect("shape");
        reduce_columns(&m, self.codomain.factors())
    }

    fn preimage_solver(&self) -> (LeftSolver, usize) {
        let stacked = self.image_matrix().vstack(&self.codomain.factor_lattice()).expect("width");
        (LeftSolver::new(&stacked), self.domain.gens())
    }

    /// Some `x` with `f(x) = y`.
    pub fn preimage(&self, y: &[Int]) -> Option<Vec<Int>> {
        let (solver, g) = self.preimage_solver();
        let w = solver.solve(&self.codomain.to_canonical(y))?;
        Some(w[..g].iter().map(|v| self.ring().reduce(v)).collect())
    }

    /// Generator-wise preimages of the rows of `target`; not necessarily a
    /// well-defined map out of `target.domain()`.
    pub(crate) fn lift_rows(&self, target: &ModuleMap) -> Option<RingMatrix> {
        let (solver, g) = self.preimage_solver();
        let mut rows = Vec::with_capacity(target.domain.gens());
        for i in 0..target.domain.gens() {
            let w = solver.solve(&self.codomain.to_canonical(target.matrix.row(i)))?;
            rows.push(w[..g].iter().map(|v| self.ring().reduce(v)).collect::<Vec<_>>());
        }
        Some(RingMatrix::new(self.ring().clone(), rows.len(), g, rows.into_iter().flatten().collect()).expect("shape"))
    }

    /// A map `h` with `h.then(self) == target`, if `target` factors through `self`.
    pub fn factor_through(&self, target: &ModuleMap) -> Option<ModuleMap> {
        let m = self.lift_rows(target)?;
        let h = ModuleMap { domain: target.domain.clone(), codomain: self.domain.clone(), matrix: m };
        if h.is_well_defined() {
            return Some(h);
        }
        let (hb, hc, post) = hom_post(&target.domain, self);
        let w = post.preimage(&hc.encode(target))?;
        Some(hb.decode(&w))
    }

    /// Lattice `{ x in Z^gens(domain) : f(x) = 0 }` as generating rows.
    fn kernel_lattice(&self) -> RingMatrix {
        let stacked = self.image_matrix().vstack(&self.codomain.factor_lattice()).expect("width");
        let k = left_kernel(&stacked);
        let g = self.domain.gens();
        let proj = k.select_cols(&(0..g).collect::<Vec<_>>());
        row_lattice_basis(&proj)
    }

    /// Kernel, image and cokernel, each in canonical (diagonal) presentation.
    pub fn subquotients(&self) -> Subquotients {
        let ring = self.ring().clone();
        let lat = self.kernel_lattice();
        // kernel: generators = lattice basis, relations = preimage of the domain relations
        let gens_k = lat.rows();
        let in_dom = lat.mul(&lift(&self.domain.0.canon.to)).expect("shape");
        let in_dom = reduce_columns(&in_dom, self.domain.factors());
        let stacked = in_dom.vstack(&self.domain.factor_lattice()).expect("width");
        let rel = left_kernel(&stacked).select_cols(&(0..gens_k).collect::<Vec<_>>());
        let kernel_pres =
            FgModule::new(&ring, gens_k, row_lattice_basis(&rel).change_ring(&ring)).expect("kernel presentation");
        let (kernel, _, k_from) = kernel_pres.canonical_iso();
        let incl = ModuleMap::raw(kernel_pres, self.domain.clone(), lat.change_ring(&ring));
        let kernel_inclusion = k_from.then(&incl).expect("shape");

        // image: domain generators modulo the kernel lattice
        let image_pres =
            FgModule::new(&ring, self.domain.gens(), lat.change_ring(&ring)).expect("image presentation");
        let (image, i_to, i_from) = image_pres.canonical_iso();
        let image_projection = ModuleMap::identity(&self.domain).retarget(&self.domain, &image_pres).then(&i_to).expect("shape");
        let image_inclusion = i_from
            .then(&self.retarget(&image_pres, &self.codomain))
            .expect("shape");

        // cokernel: codomain modulo the image
        let rel = self.codomain.relations().vstack(&self.matrix).expect("width");
        let coker_pres = FgModule::new(&ring, self.codomain.gens(), rel).expect("cokernel presentation");
        let (cokernel, c_to, _) = coker_pres.canonical_iso();
        let cokernel_projection = ModuleMap::identity(&self.codomain).retarget(&self.codomain, &coker_pres).then(&c_to).expect("shape");

        Subquotients { kernel, kernel_inclusion, image, image_projection, image_inclusion, cokernel, cokernel_projection }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_lattice_is_trivial()
    }

    fn kernel_lattice_is_trivial(&self) -> bool {
        // kernel lattice equals the domain relation lattice
        let lat = self.kernel_lattice();
        (0..lat.rows()).all(|i| self.domain.is_zero_element(lat.row(i)))
    }

    pub fn is_surjective(&self) -> bool {
        (0..self.codomain.gens()).all(|i| self.preimage(&self.codomain.basis_vector(i)).is_some())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Two-sided inverse of an isomorphism.
    pub fn inverse(&self) -> Option<ModuleMap> {
        if !self.is_injective() {
            return None;
        }
        self.factor_through(&ModuleMap::identity(&self.codomain))
    }
}

fn reduce_columns(m: &RingMatrix, factors: &[Int]) -> RingMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for (j, e) in factors.iter().enumerate() {
            if !e.is_zero() {
                out.set(i, j, m.get(i, j).mod_floor(e));
            }
        }
    }
    out
}

/// Kernel, image and cokernel of a map with their structure maps.
#[derive(Clone, Debug)]
pub struct Subquotients {
    pub kernel: FgModule,
    pub kernel_inclusion: ModuleMap,
    pub image: FgModule,
    /// domain -> image (surjective)
    pub image_projection: ModuleMap,
    /// image -> codomain (injective)
    pub image_inclusion: ModuleMap,
    pub cokernel: FgModule,
    pub cokernel_projection: ModuleMap,
}

/// Direct sum with its injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: FgModule,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
    pub offsets: Vec<usize>,
}

pub fn direct_sum(ring: &BaseRing, parts: &[FgModule]) -> DirectSum {
    let total: usize = parts.iter().map(FgModule::gens).sum();
    let mut rel = RingMatrix::zeros(ring, 0, 0);
    let mut offsets = Vec::with_capacity(parts.len());
    let mut off = 0;
    for p in parts {
        offsets.push(off);
        off += p.gens();
        rel = rel.block_diag(p.relations());
    }
    let module = if total == 0 {
        FgModule::zero(ring)
    } else {
        FgModule::new(ring, total, rel).expect("block presentation")
    };
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    for (p, &o) in parts.iter().zip(&offsets) {
        let mut inj = RingMatrix::zeros(ring, p.gens(), total);
        let mut proj = RingMatrix::zeros(ring, total, p.gens());
        for i in 0..p.gens() {
            inj.set(i, o + i, Int::one());
            proj.set(o + i, i, Int::one());
        }
        injections.push(ModuleMap::raw(p.clone(), module.clone(), inj));
        projections.push(ModuleMap::raw(module.clone(), p.clone(), proj));
    }
    DirectSum { module, injections, projections, offsets }
}

/// Block map `(+) A_i -> (+) B_j` with `blocks[i][j] : A_i -> B_j`.
pub fn block_map(source: &DirectSum, target: &DirectSum, blocks: &[Vec<Option<ModuleMap>>]) -> ModuleMap {
    let ring = source.module.ring();
    let mut m = RingMatrix::zeros(ring, source.module.gens(), target.module.gens());
    for (i, row) in blocks.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            let Some(b) = b else { continue };
            for r in 0..b.matrix().rows() {
                for c in 0..b.matrix().cols() {
                    let v = b.matrix().get(r, c);
                    if !v.is_zero() {
                        m.set(source.offsets[i] + r, target.offsets[j] + c, v.clone());
                    }
                }
            }
        }
    }
    ModuleMap::raw(source.module.clone(), target.module.clone(), m)
}

/// `Hom(source, target)` as a module, with encoding and decoding of maps.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub module: FgModule,
    pub source: FgModule,
    pub target: FgModule,
    /// generator t corresponds to the canonical map `e_i |-> scale * f_j`
    generators: Vec<(usize, usize, Int)>,
}

/// `Hom(M, N)`; both canonical decompositions are cyclic so the answer is
/// `(+)_{i,j} Hom(R/(a_i), R/(b_j))`.
pub fn hom_module(source: &FgModule, target: &FgModule) -> HomModule {
    let ring = source.ring();
    let mut generators = Vec::new();
    let mut factors = Vec::new();
    for (i, a) in source.factors().iter().enumerate() {
        for (j, b) in target.factors().iter().enumerate() {
            let (order, scale) = if b.is_zero() {
                if a.is_zero() {
                    (Int::zero(), Int::one())
                } else {
                    continue;
                }
            } else {
                let g = a.gcd(b);
                if g.is_one() {
                    continue;
                }
                (g.clone(), b / &g)
            };
            generators.push((i, j, scale));
            factors.push(order);
        }
    }
    HomModule { module: FgModule::from_factors(ring, &factors), source: source.clone(), target: target.clone(), generators }
}

impl HomModule {
    pub fn decode(&self, coords: &[Int]) -> ModuleMap {
        let ks = self.source.canonical_rank();
        let kt = self.target.canonical_rank();
        let mut phi = RingMatrix::zeros(&BaseRing::Integers, ks, kt);
        for ((i, j, scale), c) in self.generators.iter().zip(coords) {
            let v = phi.get(*i, *j) + c * scale;
            phi.set(*i, *j, v);
        }
        let m = lift(&self.source.0.canon.to)
            .mul(&phi)
            .and_then(|p| p.mul(&lift(&self.target.0.canon.from)))
            .expect("shape");
        ModuleMap::raw(self.source.clone(), self.target.clone(), m.change_ring(self.source.ring()))
    }

    pub fn encode(&self, f: &ModuleMap) -> Vec<Int> {
        let phi = f.canonical_matrix();
        self.generators
            .iter()
            .map(|(i, j, scale)| {
                let v = phi.get(*i, *j);
                let v = if self.target.factors()[*j].is_zero() { v.clone() } else { v.mod_floor(&self.target.factors()[*j]) };
                debug_assert!((&v % scale).is_zero());
                self.source.ring().reduce(&(v / scale))
            })
            .collect()
    }

    /// Map between Hom modules induced by `op` on each generator.
    pub fn induced(&self, to: &HomModule, op: impl Fn(&ModuleMap) -> ModuleMap) -> ModuleMap {
        let ring = self.module.ring();
        let g = self.module.gens();
        let mut rows = Vec::with_capacity(g);
        for t in 0..g {
            let f = self.decode(&self.module.basis_vector(t));
            rows.push(to.encode(&op(&f)));
        }
        let m = RingMatrix::new(ring.clone(), g, to.module.gens(), rows.into_iter().flatten().collect())
            .expect("shape");
        ModuleMap::raw(self.module.clone(), to.module.clone(), m)
    }
}

/// `Hom(f, N) : Hom(B, N) -> Hom(A, N)` for `f : A -> B`.
pub fn hom_pre(f: &ModuleMap, n: &FgModule) -> (HomModule, HomModule, ModuleMap) {
    let hb = hom_module(f.codomain(), n);
    let ha = hom_module(f.domain(), n);
    let m = hb.induced(&ha, |phi| f.then(phi).expect("shape"));
    (hb, ha, m)
}

/// `Hom(M, g) : Hom(M, B) -> Hom(M, C)` for `g : B -> C`.
pub fn hom_post(m: &FgModule, g: &ModuleMap) -> (HomModule, HomModule, ModuleMap) {
    let hb = hom_module(m, g.domain());
    let hc = hom_module(m, g.codomain());
    let map = hb.induced(&hc, |phi| phi.then(g).expect("shape"));
    (hb, hc, map)
}

/// `M (x) N` with the bilinear map on canonical generators.
#[derive(Clone, Debug)]
pub struct TensorModule {
    pub module: FgModule,
    pub left: FgModule,
    pub right: FgModule,
    /// generator t is `e_i (x) f_j`
    generators: Vec<(usize, usize)>,
}

pub fn tensor_module(left: &FgModule, right: &FgModule) -> TensorModule {
    let mut generators = Vec::new();
    let mut factors = Vec::new();
    for (i, a) in left.factors().iter().enumerate() {
        for (j, b) in right.factors().iter().enumerate() {
            let g = a.gcd(b);
            if g.is_one() {
                continue;
            }
            generators.push((i, j));
            factors.push(g);
        }
    }
    TensorModule { module: FgModule::from_factors(left.ring(), &factors), left: left.clone(), right: right.clone(), generators }
}

impl TensorModule {
    /// `x (x) y` in generator coordinates of the tensor module.
    pub fn bilinear(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        let xc = self.left.to_canonical(x);
        let yc = self.right.to_canonical(y);
        self.generators.iter().map(|(i, j)| self.module.ring().reduce(&(&xc[*i] * &yc[*j]))).collect()
    }

    fn pair_coordinates(&self, phi_l: &RingMatrix, i: usize, phi_r: &RingMatrix, j: usize, to: &TensorModule) -> Vec<Int> {
        to.generators
            .iter()
            .map(|(a, b)| to.module.ring().reduce(&(phi_l.get(i, *a) * phi_r.get(j, *b))))
            .collect()
    }
}

/// `f (x) g : M (x) N -> M' (x) N'`.
pub fn tensor_map(f: &ModuleMap, g: &ModuleMap, from: &TensorModule, to: &TensorModule) -> ModuleMap {
    let phi_l = f.canonical_matrix();
    let phi_r = g.canonical_matrix();
    let ring = from.module.ring();
    let rows: Vec<Int> = from
        .generators
        .iter()
        .flat_map(|(i, j)| from.pair_coordinates(&phi_l, *i, &phi_r, *j, to))
        .collect();
    let m = RingMatrix::new(ring.clone(), from.generators.len(), to.generators.len(), rows).expect("shape");
    ModuleMap::raw(from.module.clone(), to.module.clone(), m)
}

/// `F (x) f` for a fixed module `F`.
pub fn tensor_left(fmod: &FgModule, f: &ModuleMap) -> (TensorModule, TensorModule, ModuleMap) {
    let from = tensor_module(fmod, f.domain());
    let to = tensor_module(fmod, f.codomain());
    let m = tensor_map(&ModuleMap::identity(fmod), f, &from, &to);
    (from, to, m)
}

/// A short exact sequence candidate `0 -> A -f-> B -g-> C -> 0`.
#[derive(Clone, Debug)]
pub struct ShortSequence {
    pub f: ModuleMap,
    pub g: ModuleMap,
}

impl ShortSequence {
    pub fn new(f: ModuleMap, g: ModuleMap) -> Result<Self> {
        if f.codomain().gens() != g.domain().gens() {
            return Err(Error::ShapeMismatch("sequence maps do not compose".into()));
        }
        Ok(ShortSequence { f, g })
    }

    pub fn left(&self) -> &FgModule {
        self.f.domain()
    }

    pub fn middle(&self) -> &FgModule {
        self.f.codomain()
    }

    pub fn right(&self) -> &FgModule {
        self.g.codomain()
    }

    /// `Ok(())` if exact; otherwise `Err(NotExact)` naming the failing spot.
    pub fn check_exact(&self) -> Result<()> {
        if !self.f.then(&self.g)?.is_zero() {
            return Err(Error::NotExact("g o f is not zero".into()));
        }
        if !self.f.is_injective() {
            return Err(Error::NotExact("first map is not injective".into()));
        }
        if !self.g.is_surjective() {
            return Err(Error::NotExact("second map is not surjective".into()));
        }
        let sq = self.g.subquotients();
        if self.f.lift_rows(&sq.kernel_inclusion).is_none() {
            return Err(Error::NotExact("kernel of the second map exceeds the image of the first".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum SplitVerdict {
    /// `retraction o f = id_A` and `g o section = id_C`.
    Split { retraction: ModuleMap, section: ModuleMap },
    /// `id_A` is not in the image of `Hom(f, A) : Hom(B, A) -> Hom(A, A)`.
    NotSplit { obstruction: String },
}

impl SplitVerdict {
    pub fn is_split(&self) -> bool {
        matches!(self, SplitVerdict::Split { .. })
    }
}

/// Decide whether a short exact sequence splits, with a verified retraction.
pub fn split_analysis(s: &ShortSequence) -> Result<SplitVerdict> {
    s.check_exact()?;
    let (hb, ha, pre) = hom_pre(&s.f, s.left());
    let id = ha.encode(&ModuleMap::identity(s.left()));
    match pre.preimage(&id) {
        None => Ok(SplitVerdict::NotSplit {
            obstruction: format!(
                "identity of {} is not in the image of Hom({}, {}) -> Hom({}, {})",
                s.left(),
                s.middle(),
                s.left(),
                s.left(),
                s.left()
            ),
        }),
        Some(r) => {
            let retraction = hb.decode(&r);
            debug_assert!(s.f.then(&retraction)?.equals(&ModuleMap::identity(s.left())));
            // section: c |-> b - f(r(b)) for a preimage b
            let proj = ModuleMap::identity(s.middle()).sub(&retraction.then(&s.f)?)?;
            let lift = s.g.lift_rows(&ModuleMap::identity(s.right())).ok_or_else(|| {
                Error::NotExact("second map is not surjective".into())
            })?;
            let section = ModuleMap::new(s.right(), s.middle(), lift.mul(proj.matrix())?)?;
            debug_assert!(section.then(&s.g)?.equals(&ModuleMap::identity(s.right())));
            Ok(SplitVerdict::Split { retraction, section })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PureInjectivity {
    Yes,
    No,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PurityJustification {
    /// Finitely generated over these rings means finitely presented.
    FinitelyPresented,
    /// Finite modules are algebraically compact.
    FiniteModule,
    /// A free summand of `Z` admits a non-split pure extension (lim^1 certificate on the Q tower).
    FreeSummandOverIntegers,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityClass {
    pub pure_projective: bool,
    pub projective_reason: PurityJustification,
    pub pure_injective: PureInjectivity,
    pub injective_reason: PurityJustification,
}

pub fn purity_class(m: &FgModule) -> PurityClass {
    let (pure_injective, injective_reason) = if m.is_finite() {
        (PureInjectivity::Yes, PurityJustification::FiniteModule)
    } else {
        (PureInjectivity::No, PurityJustification::FreeSummandOverIntegers)
    };
    PurityClass {
        pure_projective: true,
        projective_reason: PurityJustification::FinitelyPresented,
        pure_injective,
        injective_reason,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    fn z() -> BaseRing {
        BaseRing::Integers
    }

    fn zm(m: i64) -> BaseRing {
        BaseRing::integers_mod(m).unwrap()
    }

    fn cf(free: usize, t: &[i64]) -> CanonicalForm {
        CanonicalForm { free_rank: free, invariant_factors: t.iter().map(|&x| int(x)).collect() }
    }

    #[test]
    fn canonical_form_examples() {
        let m = FgModule::new(&z(), 2, RingMatrix::ints(&z(), &[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(m.canonical_form(), cf(0, &[6]));
        assert!(m.is_isomorphic(&FgModule::from_factors(&z(), &[int(2), int(3)])));
        let m = FgModule::new(&z(), 2, RingMatrix::ints(&z(), &[&[2, 4]])).unwrap();
        assert_eq!(m.canonical_form(), cf(1, &[2]));
        let m = FgModule::new(&zm(4), 1, RingMatrix::zeros(&zm(4), 0, 1)).unwrap();
        assert_eq!(m.canonical_form(), cf(0, &[4]));
    }

    #[test]
    fn canonical_iso_roundtrip() {
        let m = FgModule::new(&z(), 3, RingMatrix::ints(&z(), &[&[2, 4, 0], &[0, 6, 3]])).unwrap();
        let (_, to, from) = m.canonical_iso();
        assert!(to.then(&from).unwrap().equals(&ModuleMap::identity(m.domain_helper())));
        assert!(from.then(&to).unwrap().equals(&ModuleMap::identity(to.codomain())));
    }

    impl FgModule {
        fn domain_helper(&self) -> &FgModule {
            self
        }
    }

    #[test]
    fn hom_and_tensor_examples() {
        let a = FgModule::cyclic(&z(), 6);
        let b = FgModule::cyclic(&z(), 4);
        assert_eq!(hom_module(&a, &b).module.canonical_form(), cf(0, &[2]));
        assert_eq!(tensor_module(&a, &b).module.canonical_form(), cf(0, &[2]));
        let zz = FgModule::free(&z(), 1);
        let n = FgModule::from_factors(&z(), &[int(3), int(0)]);
        assert!(hom_module(&zz, &n).module.is_isomorphic(&n));
        assert!(tensor_module(&zz, &n).module.is_isomorphic(&n));
        assert!(hom_module(&FgModule::cyclic(&z(), 2), &zz).module.is_zero());
        assert!(tensor_module(&FgModule::zero(&z()), &n).module.is_zero());
    }

    #[test]
    fn hom_decode_encode() {
        let a = FgModule::new(&z(), 2, RingMatrix::ints(&z(), &[&[2, 4]])).unwrap();
        let b = FgModule::from_factors(&z(), &[int(4), int(0)]);
        let h = hom_module(&a, &b);
        for t in 0..h.module.gens() {
            let e = h.module.basis_vector(t);
            let f = h.decode(&e);
            assert!(f.is_well_defined());
            assert!(h.module.elements_equal(&h.encode(&f), &e));
        }
    }

    #[test]
    fn subquotients_times_two_on_z4() {
        let m = FgModule::cyclic(&z(), 4);
        let f = ModuleMap::scalar(&m, &int(2));
        let sq = f.subquotients();
        assert_eq!(sq.kernel.canonical_form(), cf(0, &[2]));
        assert_eq!(sq.image.canonical_form(), cf(0, &[2]));
        assert_eq!(sq.cokernel.canonical_form(), cf(0, &[2]));
        assert!(sq.kernel_inclusion.then(&f).unwrap().is_zero());
        assert!(sq.image_projection.then(&sq.image_inclusion).unwrap().equals(&f));
        let id = ModuleMap::identity(&m).subquotients();
        assert!(id.kernel.is_zero() && id.cokernel.is_zero());
        let n = FgModule::cyclic(&z(), 3);
        let zero = ModuleMap::zero(&m, &n).subquotients();
        assert!(zero.kernel.is_isomorphic(&m) && zero.image.is_zero() && zero.cokernel.is_isomorphic(&n));
    }

    #[test]
    fn ill_formed_map_rejected() {
        let a = FgModule::cyclic(&z(), 2);
        let b = FgModule::free(&z(), 1);
        let r = ModuleMap::new(&a, &b, RingMatrix::ints(&z(), &[&[1]]));
        assert!(matches!(r, Err(Error::IllFormedMap(_))));
    }

    #[test]
    fn split_examples() {
        let r = z();
        let two = FgModule::cyclic(&r, 2);
        let ds = direct_sum(&r, &[two.clone(), two.clone()]);
        let s = ShortSequence::new(ds.injections[0].clone(), ds.projections[1].clone()).unwrap();
        assert!(split_analysis(&s).unwrap().is_split());

        let four = FgModule::cyclic(&r, 4);
        let f = ModuleMap::new(&two, &four, RingMatrix::ints(&r, &[&[2]])).unwrap();
        let g = ModuleMap::new(&four, &two, RingMatrix::ints(&r, &[&[1]])).unwrap();
        assert!(!split_analysis(&ShortSequence::new(f, g).unwrap()).unwrap().is_split());

        let zz = FgModule::free(&r, 1);
        let f = ModuleMap::new(&zz, &zz, RingMatrix::ints(&r, &[&[2]])).unwrap();
        let g = ModuleMap::new(&zz, &two, RingMatrix::ints(&r, &[&[1]])).unwrap();
        assert!(!split_analysis(&ShortSequence::new(f, g).unwrap()).unwrap().is_split());
    }

    #[test]
    fn split_rejects_non_exact() {
        let r = z();
        let two = FgModule::cyclic(&r, 2);
        let f = ModuleMap::zero(&two, &two);
        let g = ModuleMap::identity(&two);
        assert!(matches!(split_analysis(&ShortSequence::new(f, g).unwrap()), Err(Error::NotExact(_))));
    }

    #[test]
    fn purity_class_examples() {
        let c = purity_class(&FgModule::cyclic(&z(), 6));
        assert!(c.pure_projective);
        assert_eq!(c.pure_injective, PureInjectivity::Yes);
        let c = purity_class(&FgModule::free(&z(), 1));
        assert_eq!(c.pure_injective, PureInjectivity::No);
        let c = purity_class(&FgModule::cyclic(&zm(4), 2));
        assert_eq!(c.pure_injective, PureInjectivity::Yes);
    }
}

//! Pure projective and pure injective resolutions by cone induction,
//! lifting maps along resolutions, splitting off contractible tails and
//! normalizing left roofs.

use std::collections::BTreeMap;

use crate::complex::{cone, total_hom, truncate, BoundedComplex, ChainMap, GradedMap, Homotopy, Truncation, TruncationMode};
use crate::error::{Error, Result};
use crate::module::{direct_sum, purity_class, split_analysis, FgModule, ModuleMap, PureInjectivity, ShortSequence, SplitVerdict};
use crate::purity::{is_pure_quasi_iso, purity_profile, ExtendedInt, PureQuasiIsoVerdict, TestFamily};
use crate::ring::RingMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Projective,
    Injective,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub side: Side,
    pub target: BoundedComplex,
    pub resolvent: BoundedComplex,
    /// `resolvent -> target` (projective) or `target -> resolvent` (injective)
    pub map: ChainMap,
    pub certificate: PureQuasiIsoVerdict,
}

impl Resolution {
    fn identity(x: &BoundedComplex, side: Side, tests: &TestFamily) -> Result<Self> {
        let map = ChainMap::identity(x);
        let certificate = is_pure_quasi_iso(&map, tests)?;
        Ok(Resolution { side, target: x.clone(), resolvent: x.clone(), map, certificate })
    }

    /// Every resolvent term lies in the right purity class.
    pub fn terms_in_class(&self) -> bool {
        let Some((lo, hi)) = self.resolvent.range() else { return true };
        (lo..=hi).all(|n| {
            let c = purity_class(&self.resolvent.term(n));
            match self.side {
                Side::Projective => c.pure_projective,
                Side::Injective => c.pure_injective == PureInjectivity::Yes,
            }
        })
    }
}

/// Post/pre-composition of a degree-0 graded map with chain maps.
fn sandwich(phi: &GradedMap, s: &BoundedComplex, t: &BoundedComplex, pre: Option<&ChainMap>, post: Option<&ChainMap>) -> GradedMap {
    let mut components = BTreeMap::new();
    if let Some((lo, hi)) = s.range() {
        for i in lo..=hi {
            let mid_src = pre.map_or_else(|| s.term(i), |p| p.target().term(i));
            let mid_tgt = post.map_or_else(|| t.term(i), |p| p.source().term(i));
            let mut m = phi.components.get(&i).cloned().unwrap_or_else(|| ModuleMap::zero(&mid_src, &mid_tgt));
            if let Some(p) = pre {
                m = p.component(i).then(&m).expect("shape");
            }
            if let Some(p) = post {
                m = m.then(&p.component(i)).expect("shape");
            }
            components.insert(i, m);
        }
    }
    GradedMap { degree: 0, components }
}

/// Find a chain map `phi : P -> Q` and `h : S -> T` of degree `-1` with
/// `post o phi o pre - rhs = d h + h d`, where `pre : S -> P`, `post : Q -> T`
/// (identities when absent) and `rhs : S -> T`.
pub(crate) fn solve_lift(
    p: &BoundedComplex,
    q: &BoundedComplex,
    pre: Option<&ChainMap>,
    post: Option<&ChainMap>,
    rhs: &ChainMap,
) -> Result<(ChainMap, Homotopy)> {
    let (s, t) = (rhs.source(), rhs.target());
    let ring = p.ring();
    let th_pq = total_hom(p, q)?;
    let th_st = total_hom(s, t)?;
    let cycles = th_pq.differential(0).subquotients().kernel_inclusion;
    let dh = th_st.differential(-1);
    let hom0 = dh.codomain().clone();
    let (zc, hc) = (cycles.domain().gens(), dh.domain().gens());
    let mut rows: Vec<Vec<crate::ring::Int>> = Vec::with_capacity(zc + hc);
    for k in 0..zc {
        let phi = th_pq.decode(0, cycles.matrix().row(k));
        rows.push(th_st.encode(&sandwich(&phi, s, t, pre, post)));
    }
    for k in 0..hc {
        rows.push(dh.matrix().row(k).iter().map(|v| -v).collect());
    }
    let unknowns = direct_sum(ring, &[cycles.domain().clone(), dh.domain().clone()]);
    let m = RingMatrix::new(ring.clone(), zc + hc, hom0.gens(), rows.into_iter().flatten().collect())?;
    let system = ModuleMap::new(&unknowns.module, &hom0, m)?;
    let w = system
        .preimage(&th_st.encode(&rhs.as_graded()))
        .ok_or_else(|| Error::LiftSearchFailed("homotopy-commutation system has no solution".into()))?;
    let phi_coords = cycles.apply(&w[..zc]);
    let phi = th_pq.decode(0, &phi_coords);
    let phi = ChainMap::new(p, q, phi.components)?;
    let h = th_st.decode(-1, &w[zc..]);
    let homotopy = Homotopy { components: h.components };
    let lhs = ChainMap::new(s, t, sandwich(&phi.as_graded(), s, t, pre, post).components)?;
    if !homotopy.verify(&lhs, rhs) {
        return Err(Error::LiftSearchFailed("solution does not verify".into()));
    }
    Ok((phi, homotopy))
}

fn nonzero_degrees(x: &BoundedComplex) -> Vec<i64> {
    x.range().map_or(vec![], |(lo, hi)| (lo..=hi).filter(|&n| !x.term(n).is_zero()).collect())
}

/// Terms of `x` in `keep` degrees only, with the inherited differentials.
fn restrict(x: &BoundedComplex, lo: i64, hi: i64) -> BoundedComplex {
    let terms: Vec<FgModule> = (lo..=hi).map(|n| x.term(n)).collect();
    let diffs: Vec<ModuleMap> = (lo..hi).map(|n| x.differential(n)).collect();
    BoundedComplex::new(x.ring(), lo, terms, diffs).expect("subcomplex of a valid complex")
}

/// Chain map between complexes whose terms have identical generator counts and
/// whose differentials agree as matrices (zero terms may be presented differently).
fn relabel(from: &BoundedComplex, to: &BoundedComplex) -> Result<ChainMap> {
    let mut comps = BTreeMap::new();
    if let Some((lo, hi)) = from.range() {
        for n in lo..=hi {
            let (a, b) = (from.term(n), to.term(n));
            let m = if a.gens() != b.gens() && a.is_zero() && b.is_zero() {
                ModuleMap::zero(&a, &b)
            } else {
                ModuleMap::new(&a, &b, RingMatrix::identity(a.ring(), a.gens()))?
            };
            comps.insert(n, m);
        }
    }
    ChainMap::new(from, to, comps)
}

/// Pure projective resolution by induction on the number of nonzero terms.
pub fn pure_projective_resolution(x: &BoundedComplex, tests: &TestFamily) -> Result<Resolution> {
    let w = nonzero_degrees(x);
    if w.len() <= 1 {
        return Resolution::identity(x, Side::Projective, tests);
    }
    let (j, top) = (w[0], *w.last().unwrap());
    // X_1 = X^j placed in degree j + 1, X_2 = X^{>j}, u = d^j; cone(u) = X
    let x1 = BoundedComplex::stalk(&x.term(j), j + 1);
    let x2 = restrict(x, j + 1, top);
    let u = ChainMap::new(&x1, &x2, BTreeMap::from([(j + 1, x.differential(j).retarget(&x1.term(j + 1), &x2.term(j + 1)))]))?;
    let r1 = pure_projective_resolution(&x1, tests)?;
    let r2 = pure_projective_resolution(&x2, tests)?;
    // f : P_1 -> P_2 with b o f - u o a = dH + Hd
    let rhs = r1.map.then(&u)?;
    let (f, h) = solve_lift(&r1.resolvent, &r2.resolvent, None, Some(&r2.map), &rhs)?;
    let tp = cone(&f);
    let tx = cone(&u);
    let to_cone_u = tp.map_to(&tx, &r1.map, &r2.map, &h.components)?;
    let map = to_cone_u.then(&relabel(&tx.cone, x)?)?;
    let certificate = is_pure_quasi_iso(&map, tests)?;
    if !certificate.is_yes() {
        return Err(Error::InconsistentVerdicts("cone comparison is not a pure quasi-isomorphism".into()));
    }
    Ok(Resolution { side: Side::Projective, target: x.clone(), resolvent: tp.cone, map, certificate })
}

/// Pure injective resolution by the dual induction; finite terms only.
pub fn pure_injective_resolution(x: &BoundedComplex, tests: &TestFamily) -> Result<Resolution> {
    let w = nonzero_degrees(x);
    if let Some(&n) = w.iter().find(|&&n| !x.term(n).is_finite()) {
        return Err(Error::UnsupportedInjectiveBase(format!(
            "term in degree {n} is {}, which has a free summand over Z",
            x.term(n)
        )));
    }
    if w.len() <= 1 {
        return Resolution::identity(x, Side::Injective, tests);
    }
    let (bottom, k) = (w[0], *w.last().unwrap());
    // A = X^{<k}, B = X^k in degree k, g = d^{k-1} : A[-1] -> B; cone(g) = X
    let a = restrict(x, bottom, k - 1);
    let b = BoundedComplex::stalk(&x.term(k), k);
    let a_shift = a.shift(-1);
    let g = ChainMap::new(
        &a_shift,
        &b,
        BTreeMap::from([(k, x.differential(k - 1).retarget(&a_shift.term(k), &b.term(k)))]),
    )?;
    let ra = pure_injective_resolution(&a, tests)?;
    let rb = pure_injective_resolution(&b, tests)?;
    let ra_shift = ra.map.shift(-1);
    // g' : I_A[-1] -> I_B with b o g - g' o a = dH + Hd
    let rhs = g.then(&rb.map)?;
    let (g2, h) = solve_lift(ra_shift.target(), &rb.resolvent, Some(&ra_shift), None, &rhs)?;
    let neg_h: BTreeMap<i64, ModuleMap> = h.components.iter().map(|(n, m)| (*n, m.neg())).collect();
    let tx = cone(&g);
    let ti = cone(&g2);
    let from_x = relabel(x, &tx.cone)?;
    let map = from_x.then(&tx.map_to(&ti, &ra_shift, &rb.map, &neg_h)?)?;
    let certificate = is_pure_quasi_iso(&map, tests)?;
    if !certificate.is_yes() {
        return Err(Error::InconsistentVerdicts("cone comparison is not a pure quasi-isomorphism".into()));
    }
    Ok(Resolution { side: Side::Injective, target: x.clone(), resolvent: ti.cone, map, certificate })
}

/// `f' : P_X -> P_Y` with `f_Y o f' ~ f o f_X` (projective), or
/// `f' : I_X -> I_Y` with `f' o f_X ~ f_Y o f` (injective), with the homotopy.
pub fn lift_along_resolutions(f: &ChainMap, rx: &Resolution, ry: &Resolution) -> Result<(ChainMap, Homotopy)> {
    if rx.side != ry.side {
        return Err(Error::PrereqFails("resolutions are on different sides".into()));
    }
    match rx.side {
        Side::Projective => {
            let rhs = rx.map.then(f)?;
            solve_lift(&rx.resolvent, &ry.resolvent, None, Some(&ry.map), &rhs)
        }
        Side::Injective => {
            let rhs = f.then(&ry.map)?;
            solve_lift(&rx.resolvent, &ry.resolvent, Some(&rx.map), None, &rhs)
        }
    }
}

/// `P = P_1 (+) P_2` with `P_2` contractible.
#[derive(Clone, Debug)]
pub struct TailSplit {
    pub kept: BoundedComplex,
    pub tail: BoundedComplex,
    pub kept_inclusion: ChainMap,
    pub kept_projection: ChainMap,
    pub tail_inclusion: ChainMap,
    pub tail_projection: ChainMap,
    pub tail_contraction: Homotopy,
}

fn check_tail_split(p: &BoundedComplex, s: &TailSplit) -> Result<()> {
    let id = ChainMap::identity(p);
    let sum = s.kept_projection.then(&s.kept_inclusion)?.add(&s.tail_projection.then(&s.tail_inclusion)?)?;
    let (lo, hi) = p.range().unwrap_or((0, -1));
    let ok = (lo..=hi).all(|n| sum.component(n).equals(&id.component(n)))
        && s.kept_inclusion.then(&s.kept_projection)?.sub(&ChainMap::identity(&s.kept))?.is_zero()
        && s.tail_inclusion.then(&s.tail_projection)?.sub(&ChainMap::identity(&s.tail))?.is_zero()
        && s.kept_inclusion.then(&s.tail_projection)?.is_zero();
    if ok {
        Ok(())
    } else {
        Err(Error::InconsistentVerdicts("tail splitting maps are not a direct-sum decomposition".into()))
    }
}

/// Split a resolvent into a part concentrated in degrees `>= -n`
/// (projective) or `<= n` (injective) and a contractible remainder.
pub fn split_off_tail(r: &Resolution, n: i64, tests: &TestFamily) -> Result<TailSplit> {
    let profile = purity_profile(&r.target, tests)?;
    let p = &r.resolvent;
    let ring = p.ring();
    let (lo, hi) = p.range().unwrap_or((0, 0));
    let split = match r.side {
        Side::Projective => {
            let m = -n;
            if profile.inf_p < ExtendedInt::Finite(m) {
                return Err(Error::PrereqFails(format!("inf_p of the target is {} < {m}", profile.inf_p)));
            }
            let sq = p.differential(m - 1).subquotients();
            if !purity_class(&sq.cokernel).pure_projective {
                return Err(Error::PrereqFails(format!("Coker d^{} is not pure projective", m - 1)));
            }
            let seq = ShortSequence::new(sq.image_inclusion.clone(), sq.cokernel_projection.clone())?;
            let SplitVerdict::Split { retraction, section } = split_analysis(&seq)? else {
                return Err(Error::PrereqFails(format!("0 -> Im d^{} -> P^{m} -> Coker -> 0 does not split", m - 1)));
            };
            let (c, im) = (sq.cokernel.clone(), sq.image.clone());
            let top = hi.max(m);
            // kept: Coker d^{m-1} -> P^{m+1} -> ...
            let down = section.then(&p.differential(m))?;
            let mut kt = vec![c.clone()];
            kt.extend((m + 1..=top).map(|k| p.term(k)));
            let mut kd = vec![];
            if top > m {
                kd.push(ModuleMap::new(&c, &p.term(m + 1), down.matrix().clone())?);
            }
            kd.extend((m + 1..top).map(|k| p.differential(k)));
            let kept = BoundedComplex::new(ring, m, kt, kd)?;
            // tail: ... -> P^{m-1} -> Im d^{m-1}
            let bottom = lo.min(m);
            let mut tt: Vec<FgModule> = (bottom..m).map(|k| p.term(k)).collect();
            tt.push(im.clone());
            let mut td: Vec<ModuleMap> = (bottom..m - 1).map(|k| p.differential(k)).collect();
            if m > bottom {
                td.push(sq.image_projection.retarget(&p.term(m - 1), &im));
            }
            let tail = BoundedComplex::new(ring, bottom, tt, td)?;
            let ident = |k: i64, a: &BoundedComplex, b: &BoundedComplex| ModuleMap::identity(&p.term(k)).retarget(&a.term(k), &b.term(k));
            let mut ki = BTreeMap::from([(m, section.clone())]);
            let mut kp = BTreeMap::from([(m, sq.cokernel_projection.clone())]);
            for k in m + 1..=top {
                ki.insert(k, ident(k, &kept, p));
                kp.insert(k, ident(k, p, &kept));
            }
            let mut ti = BTreeMap::from([(m, sq.image_inclusion.clone())]);
            let mut tp = BTreeMap::from([(m, retraction.clone())]);
            for k in bottom..m {
                ti.insert(k, ident(k, &tail, p));
                tp.insert(k, ident(k, p, &tail));
            }
            TailSplit {
                kept_inclusion: ChainMap::new(&kept, p, ki)?,
                kept_projection: ChainMap::new(p, &kept, kp)?,
                tail_inclusion: ChainMap::new(&tail, p, ti)?,
                tail_projection: ChainMap::new(p, &tail, tp)?,
                tail_contraction: Homotopy { components: BTreeMap::new() },
                kept,
                tail,
            }
        }
        Side::Injective => {
            if profile.sup_p > ExtendedInt::Finite(n) {
                return Err(Error::PrereqFails(format!("sup_p of the target is {} > {n}", profile.sup_p)));
            }
            let sq = p.differential(n).subquotients();
            if purity_class(&sq.kernel).pure_injective != PureInjectivity::Yes {
                return Err(Error::PrereqFails(format!("Ker d^{n} is not pure injective")));
            }
            let seq = ShortSequence::new(sq.kernel_inclusion.clone(), sq.image_projection.clone())?;
            let SplitVerdict::Split { retraction, section } = split_analysis(&seq)? else {
                return Err(Error::PrereqFails(format!("0 -> Ker d^{n} -> I^{n} -> Im -> 0 does not split")));
            };
            let (kmod, im) = (sq.kernel.clone(), sq.image.clone());
            let bottom = lo.min(n);
            let top = hi.max(n);
            // kept: ... -> I^{n-1} -> Ker d^n
            let mut kt: Vec<FgModule> = (bottom..n).map(|k| p.term(k)).collect();
            kt.push(kmod.clone());
            let mut kd: Vec<ModuleMap> = (bottom..n - 1).map(|k| p.differential(k)).collect();
            if n > bottom {
                let into = sq.kernel_inclusion.factor_through(&p.differential(n - 1)).expect("d o d = 0");
                kd.push(into.retarget(&p.term(n - 1), &kmod));
            }
            let kept = BoundedComplex::new(ring, bottom, kt, kd)?;
            // tail: Im d^n -> I^{n+1} -> ...
            let mut tt = vec![im.clone()];
            tt.extend((n + 1..=top).map(|k| p.term(k)));
            let mut td = vec![];
            if top > n {
                td.push(sq.image_inclusion.clone());
            }
            td.extend((n + 1..top).map(|k| p.differential(k)));
            let tail = BoundedComplex::new(ring, n, tt, td)?;
            let ident = |k: i64, a: &BoundedComplex, b: &BoundedComplex| ModuleMap::identity(&p.term(k)).retarget(&a.term(k), &b.term(k));
            let mut ki = BTreeMap::from([(n, sq.kernel_inclusion.clone())]);
            let mut kp = BTreeMap::from([(n, retraction.clone())]);
            for k in bottom..n {
                ki.insert(k, ident(k, &kept, p));
                kp.insert(k, ident(k, p, &kept));
            }
            let mut ti = BTreeMap::from([(n, section.clone())]);
            let mut tp = BTreeMap::from([(n, sq.image_projection.clone())]);
            for k in n + 1..=top {
                ti.insert(k, ident(k, &tail, p));
                tp.insert(k, ident(k, p, &tail));
            }
            TailSplit {
                kept_inclusion: ChainMap::new(&kept, p, ki)?,
                kept_projection: ChainMap::new(p, &kept, kp)?,
                tail_inclusion: ChainMap::new(&tail, p, ti)?,
                tail_projection: ChainMap::new(p, &tail, tp)?,
                tail_contraction: Homotopy { components: BTreeMap::new() },
                kept,
                tail,
            }
        }
    };
    check_tail_split(p, &split)?;
    let contraction = crate::complex::null_homotopy(&ChainMap::identity(&split.tail))
        .ok_or_else(|| Error::InconsistentVerdicts("split-off tail is not contractible".into()))?;
    Ok(TailSplit { tail_contraction: contraction, ..split })
}

/// A left roof `X <-s- Z -a-> Y`.
#[derive(Clone, Debug)]
pub struct Roof {
    pub s: ChainMap,
    pub a: ChainMap,
}

impl Roof {
    pub fn new(s: ChainMap, a: ChainMap) -> Result<Self> {
        if s.source().range() != a.source().range() {
            return Err(Error::ShapeMismatch("roof legs start at different apexes".into()));
        }
        Ok(Roof { s, a })
    }

    pub fn apex(&self) -> &BoundedComplex {
        self.s.source()
    }
}

#[derive(Clone, Debug)]
pub enum RoofCertificate {
    /// `t : X -> Z` with `s o t ~ id_X`; then `g = a o t`.
    HomotopyInverse { t: ChainMap, homotopy: Homotopy },
    /// Stalks in degree `k`: the kernel truncation `Z'` of the apex with
    /// `q : Z' -> H^k(Z)` satisfies `s o c = H^k(s) o q` and `a o c = H^k(a) o q`.
    StalkHomology { degree: i64, truncation: Box<Truncation>, q: ModuleMap },
}

#[derive(Clone, Debug)]
pub struct NormalizedRoof {
    pub g: ChainMap,
    pub certificate: RoofCertificate,
}

fn single_degree(x: &BoundedComplex) -> Option<i64> {
    let w = nonzero_degrees(x);
    match w.as_slice() {
        [k] => Some(*k),
        _ => None,
    }
}

/// Map `X^k -> H^k(X)` for a complex concentrated in degree `k`.
fn stalk_to_homology(x: &BoundedComplex, k: i64) -> ModuleMap {
    let h = x.homology(k);
    let into = h.cycle_inclusion.factor_through(&ModuleMap::identity(&x.term(k))).expect("stalk is all cycles");
    into.then(&h.projection).expect("shape")
}

/// Replace a roof by an honest chain map `g : X -> Y` with `(s, a) ~ (id, g)`.
pub fn roof_normalize(r: &Roof, tests: &TestFamily) -> Result<NormalizedRoof> {
    if let PureQuasiIsoVerdict::No { first_failing_degree } = is_pure_quasi_iso(&r.s, tests)? {
        return Err(Error::NotPureQuasiIso(first_failing_degree));
    }
    let (x, y) = (r.s.target(), r.a.target());
    let stalk = match (single_degree(x), single_degree(y)) {
        (Some(i), Some(j)) if i == j => Some(i),
        _ => None,
    };
    match stalk {
        Some(k) => {
            let z = r.apex();
            let hs = r.s.on_homology(k);
            let ha = r.a.on_homology(k);
            let hs_inv = hs
                .inverse()
                .ok_or_else(|| Error::InconsistentVerdicts("H(s) is not invertible for a pure quasi-isomorphism".into()))?;
            let to_hx = stalk_to_homology(x, k);
            let from_hy = stalk_to_homology(y, k)
                .inverse()
                .expect("stalk homology is the term");
            let gk = to_hx.then(&hs_inv)?.then(&ha)?.then(&from_hy)?;
            let g = ChainMap::new(x, y, BTreeMap::from([(k, gk)]))?;
            let truncation = truncate(z, k, TruncationMode::KernelStyle, tests)?;
            let hz = z.homology(k);
            let q = hz.projection.retarget(&truncation.complex.term(k), &hz.module);
            let c = truncation.comparison.component(k);
            let sc = c.then(&r.s.component(k))?;
            let ac = c.then(&r.a.component(k))?;
            let via_s = q.then(&hs)?.then(&stalk_to_homology(x, k).inverse().expect("iso"))?;
            let via_a = q.then(&ha)?.then(&from_hy)?;
            if !sc.equals(&via_s) || !ac.equals(&via_a) {
                return Err(Error::InconsistentVerdicts("roof does not factor through apex homology".into()));
            }
            Ok(NormalizedRoof { g, certificate: RoofCertificate::StalkHomology { degree: k, truncation: Box::new(truncation), q } })
        }
        None => {
            let (t, homotopy) = solve_lift(x, r.apex(), None, Some(&r.s), &ChainMap::identity(x))?;
            let g = t.then(&r.a)?;
            Ok(NormalizedRoof { g, certificate: RoofCertificate::HomotopyInverse { t, homotopy } })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::homotopy_between;
    use crate::ring::{int, BaseRing};

    fn tf(r: &BaseRing) -> TestFamily {
        TestFamily::base(r, TestFamily::DEFAULT_CAP)
    }

    #[test]
    fn stalk_resolution_is_identity() {
        let r = BaseRing::Integers;
        let x = BoundedComplex::stalk(&FgModule::cyclic(&r, 6), 0);
        let res = pure_projective_resolution(&x, &tf(&r)).unwrap();
        assert!(res.certificate.is_yes());
        assert!(res.resolvent.term(0).is_isomorphic(&FgModule::cyclic(&r, 6)));
    }

    #[test]
    fn two_term_resolution() {
        let r = BaseRing::Integers;
        let four = FgModule::cyclic(&r, 4);
        let two = FgModule::cyclic(&r, 2);
        let pi = ModuleMap::new(&four, &two, RingMatrix::ints(&r, &[&[1]])).unwrap();
        let x = BoundedComplex::two_term(&pi, 0);
        let res = pure_projective_resolution(&x, &tf(&r)).unwrap();
        assert!(res.certificate.is_yes() && res.terms_in_class());
        assert!(res.resolvent.term(0).is_isomorphic(&four));
        assert!(res.resolvent.term(1).is_isomorphic(&two));
        let inj = pure_injective_resolution(&x, &tf(&r)).unwrap();
        assert!(inj.certificate.is_yes() && inj.terms_in_class());
    }

    #[test]
    fn injective_rejects_free() {
        let r = BaseRing::Integers;
        let x = BoundedComplex::stalk(&FgModule::free(&r, 1), 0);
        assert!(matches!(pure_injective_resolution(&x, &tf(&r)), Err(Error::UnsupportedInjectiveBase(_))));
    }

    #[test]
    fn lift_of_projection() {
        let r = BaseRing::Integers;
        let four = FgModule::cyclic(&r, 4);
        let two = FgModule::cyclic(&r, 2);
        let pi = ModuleMap::new(&four, &two, RingMatrix::ints(&r, &[&[1]])).unwrap();
        let (x, y) = (BoundedComplex::stalk(&four, 0), BoundedComplex::stalk(&two, 0));
        let f = ChainMap::new(&x, &y, BTreeMap::from([(0, pi)])).unwrap();
        let rx = pure_projective_resolution(&x, &tf(&r)).unwrap();
        let ry = pure_projective_resolution(&y, &tf(&r)).unwrap();
        let (lift, _) = lift_along_resolutions(&f, &rx, &ry).unwrap();
        assert!(homotopy_between(&lift, &f).is_some());
    }

    #[test]
    fn split_off_tail_examples() {
        let r = BaseRing::Integers;
        let zz = FgModule::free(&r, 1);
        let two = FgModule::cyclic(&r, 2);
        let p = BoundedComplex::two_term(&ModuleMap::identity(&zz), -1)
            .direct_sum(&BoundedComplex::stalk(&two, 0))
            .complex;
        let res = pure_projective_resolution(&p, &tf(&r)).unwrap();
        let s = split_off_tail(&res, 0, &tf(&r)).unwrap();
        assert_eq!(s.kept.support(), Some((0, 0)));
        assert!(s.kept.term(0).is_isomorphic(&two));
        assert!(s.tail.is_contractible());

        let x = BoundedComplex::two_term(&ModuleMap::scalar(&zz, &int(2)), -1);
        let res = pure_projective_resolution(&x, &tf(&r)).unwrap();
        assert!(matches!(split_off_tail(&res, 0, &tf(&r)), Err(Error::PrereqFails(_))));
    }

    #[test]
    fn roof_examples() {
        let r = BaseRing::integers_mod(4).unwrap();
        let two = FgModule::cyclic(&r, 2);
        let x = BoundedComplex::stalk(&two, 0);
        let res = pure_projective_resolution(&x, &tf(&r)).unwrap();
        let a = res.map.clone();
        let roof = Roof::new(res.map.clone(), a).unwrap();
        let n = roof_normalize(&roof, &tf(&r)).unwrap();
        assert!(n.g.component(0).equals(&ModuleMap::identity(&two)));
    }
}

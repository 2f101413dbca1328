//! Exact arithmetic over `Z` and `Z/m`, dense matrices, Smith normal form
//! and linear solving.
//!
//! Matrices over `Z/m` always hold least nonnegative residues. Every routine
//! here is exact: entries are arbitrary precision integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Coefficient ring: the integers or the integers modulo `m >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Integers,
    IntegersMod(Int),
}

impl BaseRing {
    pub fn integers_mod(m: impl Into<Int>) -> Result<Self> {
        let m = m.into();
        if m < int(2) {
            return Err(Error::InvalidRing(format!("modulus {m} must be at least 2")));
        }
        Ok(BaseRing::IntegersMod(m))
    }

    pub fn modulus(&self) -> Option<&Int> {
        match self {
            BaseRing::Integers => None,
            BaseRing::IntegersMod(m) => Some(m),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BaseRing::IntegersMod(_))
    }

    /// Canonical residue (identity over `Z`).
    pub fn reduce(&self, x: &Int) -> Int {
        match self {
            BaseRing::Integers => x.clone(),
            BaseRing::IntegersMod(m) => x.mod_floor(m),
        }
    }

    pub fn is_zero(&self, x: &Int) -> bool {
        match self {
            BaseRing::Integers => x.is_zero(),
            BaseRing::IntegersMod(m) => x.mod_floor(m).is_zero(),
        }
    }

    pub fn add(&self, a: &Int, b: &Int) -> Int {
        self.reduce(&(a + b))
    }

    pub fn sub(&self, a: &Int, b: &Int) -> Int {
        self.reduce(&(a - b))
    }

    pub fn mul(&self, a: &Int, b: &Int) -> Int {
        self.reduce(&(a * b))
    }

    pub fn neg(&self, a: &Int) -> Int {
        self.reduce(&(-a))
    }

    /// Canonical associate: `|x|` over `Z`, `gcd(x, m)` (with `0` for zero) over `Z/m`.
    pub fn canonical_associate(&self, x: &Int) -> Int {
        match self {
            BaseRing::Integers => x.abs(),
            BaseRing::IntegersMod(m) => {
                let r = x.mod_floor(m);
                if r.is_zero() {
                    Int::zero()
                } else {
                    r.gcd(m)
                }
            }
        }
    }

    /// Size used for pivot selection; smaller means a larger ideal.
    fn norm(&self, x: &Int) -> Int {
        match self {
            BaseRing::Integers => x.abs(),
            BaseRing::IntegersMod(m) => x.gcd(m),
        }
    }

    /// `Some(q)` with `p * q = x` in the ring, if `p` divides `x`.
    pub fn divide(&self, x: &Int, p: &Int) -> Option<Int> {
        match self {
            BaseRing::Integers => {
                if p.is_zero() {
                    return x.is_zero().then(Int::zero);
                }
                let (q, r) = x.div_rem(p);
                r.is_zero().then_some(q)
            }
            BaseRing::IntegersMod(m) => {
                let x = x.mod_floor(m);
                let p = p.mod_floor(m);
                let e = p.extended_gcd(m);
                if !(&x % &e.gcd).is_zero() {
                    return None;
                }
                Some((e.x * (&x / &e.gcd)).mod_floor(m))
            }
        }
    }

    pub fn is_unit(&self, x: &Int) -> bool {
        match self {
            BaseRing::Integers => x.abs().is_one(),
            BaseRing::IntegersMod(m) => x.gcd(m).is_one(),
        }
    }

    pub fn inverse(&self, x: &Int) -> Option<Int> {
        self.divide(&Int::one(), x)
    }

    /// A unit `u` with `u * canonical_associate(x) = x`.
    fn associate_unit(&self, x: &Int) -> Int {
        match self {
            BaseRing::Integers => {
                if x.is_negative() {
                    -Int::one()
                } else {
                    Int::one()
                }
            }
            BaseRing::IntegersMod(m) => {
                let x = x.mod_floor(m);
                if x.is_zero() {
                    return Int::one();
                }
                let g = x.gcd(m);
                let step = m / &g;
                let base = (&x / &g).mod_floor(&step);
                let mut u = base;
                // some lift of x/g modulo m/g is a unit modulo m
                while !u.gcd(m).is_one() {
                    u += &step;
                }
                u
            }
        }
    }

    /// All elements of a finite ring; `None` over `Z`.
    pub fn elements(&self) -> Option<Vec<Int>> {
        let m = self.modulus()?;
        let mut out = Vec::new();
        let mut x = Int::zero();
        while &x < m {
            out.push(x.clone());
            x += 1;
        }
        Some(out)
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integers => write!(f, "Z"),
            BaseRing::IntegersMod(m) => write!(f, "Z/{m}"),
        }
    }
}

/// Dense row-major matrix over a [`BaseRing`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    ring: BaseRing,
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl RingMatrix {
    pub fn new(ring: BaseRing, rows: usize, cols: usize, entries: Vec<Int>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let entries = entries.iter().map(|e| ring.reduce(e)).collect();
        Ok(RingMatrix { ring, rows, cols, entries })
    }

    pub fn from_rows<T: Into<Int> + Clone>(ring: &BaseRing, rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let entries = rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect();
        Self::new(ring.clone(), rows.len(), cols, entries)
    }

    /// Shorthand for tests and examples. Panics on ragged input.
    pub fn ints(ring: &BaseRing, rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(ring, &rows).expect("rectangular")
    }

    pub fn zeros(ring: &BaseRing, rows: usize, cols: usize) -> Self {
        RingMatrix { ring: ring.clone(), rows, cols, entries: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(ring: &BaseRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = ring.reduce(&Int::one());
        }
        m
    }

    pub fn scalar(ring: &BaseRing, n: usize, c: &Int) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = ring.reduce(c);
        }
        m
    }

    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Int] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.entries[i * self.cols + j] = self.ring.reduce(&v);
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        if self.ring.is_finite() {
            for e in &mut out.entries {
                *e = self.ring.reduce(e);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &RingMatrix) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch("matrix sum".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Self::new(self.ring.clone(), self.rows, self.cols, entries)
    }

    pub fn sub(&self, other: &RingMatrix) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let entries = self.entries.iter().map(|a| self.ring.neg(a)).collect();
        RingMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, c: &Int) -> Self {
        let entries = self.entries.iter().map(|a| self.ring.mul(a, c)).collect();
        RingMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries }
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.rows, "vector length");
        let mut out = vec![Int::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += xi * a;
                }
            }
        }
        out.iter().map(|v| self.ring.reduce(v)).collect()
    }

    /// Matrix times column vector.
    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let s: Int = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
                self.ring.reduce(&s)
            })
            .collect()
    }

    /// Stack `self` above `other`.
    pub fn vstack(&self, other: &RingMatrix) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch("vstack".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Self::new(self.ring.clone(), self.rows + other.rows, self.cols, entries)
    }

    pub fn hstack(&self, other: &RingMatrix) -> Result<Self> {
        Ok(self.transpose().vstack(&other.transpose())?.transpose())
    }

    /// Block diagonal sum.
    pub fn block_diag(&self, other: &RingMatrix) -> Self {
        let mut out = Self::zeros(&self.ring, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[i * out.cols + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.entries[(self.rows + i) * out.cols + self.cols + j] = other.get(i, j).clone();
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            entries.extend(self.row(i).iter().cloned());
        }
        RingMatrix { ring: self.ring.clone(), rows: idx.len(), cols: self.cols, entries }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        self.transpose().select_rows(idx).transpose()
    }

    /// The same integer entries viewed over another ring.
    pub fn change_ring(&self, ring: &BaseRing) -> Self {
        Self::new(ring.clone(), self.rows, self.cols, self.entries.clone()).expect("same shape")
    }

    /// Determinant over `Z` by fraction-free elimination (Bareiss). Square only.
    pub fn det_integer(&self) -> Int {
        assert_eq!(self.rows, self.cols, "square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a: Vec<Vec<Int>> = self.to_rows();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// Determinant in the ring (integer determinant reduced).
    pub fn det(&self) -> Int {
        self.ring.reduce(&self.det_integer())
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `U * A * V = S` with `S` diagonal and invertible `U`, `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: RingMatrix,
    pub s: RingMatrix,
    pub v: RingMatrix,
    /// Inverse of `v`, tracked during elimination.
    pub v_inv: RingMatrix,
    /// Nonzero diagonal entries of `s`, each a canonical associate.
    pub invariant_factors: Vec<Int>,
}

impl SmithForm {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s.get(i, i).clone()).collect()
    }
}

struct Elimination<'r> {
    ring: &'r BaseRing,
    a: Vec<Vec<Int>>,
    u: Vec<Vec<Int>>,
    v: Vec<Vec<Int>>,
    v_inv: Vec<Vec<Int>>,
}

impl Elimination<'_> {
    fn red(&self, x: Int) -> Int {
        self.ring.reduce(&x)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in &mut self.a {
            r.swap(i, j);
        }
        for r in &mut self.v {
            r.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// rows (i, j) <- [[p, q], [r, s]] * (rows i, j), determinant one.
    fn combine_rows(&mut self, i: usize, j: usize, m: [&Int; 4]) {
        let [p, q, r, s] = m;
        for mat in [&mut self.a, &mut self.u] {
            for k in 0..mat[i].len() {
                let x = &mat[i][k];
                let y = &mat[j][k];
                let ni = p * x + q * y;
                let nj = r * x + s * y;
                mat[i][k] = self.ring.reduce(&ni);
                mat[j][k] = self.ring.reduce(&nj);
            }
        }
    }

    /// columns (i, j) <- (columns i, j) * [[p, r], [q, s]], determinant one.
    fn combine_cols(&mut self, i: usize, j: usize, m: [&Int; 4]) {
        let [p, q, r, s] = m;
        for mat in [&mut self.a, &mut self.v] {
            for row in mat.iter_mut() {
                let x = &row[i];
                let y = &row[j];
                let ni = p * x + q * y;
                let nj = r * x + s * y;
                row[i] = self.ring.reduce(&ni);
                row[j] = self.ring.reduce(&nj);
            }
        }
        // inverse transform acts on rows of v_inv
        let (ni, nj): (Vec<Int>, Vec<Int>) = (0..self.v_inv[i].len())
            .map(|k| {
                let x = &self.v_inv[i][k];
                let y = &self.v_inv[j][k];
                (self.ring.reduce(&(s * x - r * y)), self.ring.reduce(&(p * y - q * x)))
            })
            .unzip();
        self.v_inv[i] = ni;
        self.v_inv[j] = nj;
    }

    fn scale_row(&mut self, i: usize, c: &Int) {
        for mat in [&mut self.a, &mut self.u] {
            for x in mat[i].iter_mut() {
                *x = self.ring.reduce(&(&*x * c));
            }
        }
    }

    /// Clear `a[i][k]` against pivot `a[k][k]` using rows.
    fn clear_row_entry(&mut self, k: usize, i: usize) -> bool {
        let pivot = self.a[k][k].clone();
        let x = self.a[i][k].clone();
        if let Some(q) = self.ring.divide(&x, &pivot) {
            let mq = self.red(-q);
            let (one, zero) = (Int::one(), Int::zero());
            self.combine_rows(i, k, [&one, &mq, &zero, &one]);
            // combine_rows(i, k, ...) sets row i <- row i - q row k; row k unchanged
            false
        } else {
            let e = pivot.extended_gcd(&x);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let r = -(&x / &g);
            let w = &pivot / &g;
            self.combine_rows(k, i, [&s, &t, &r, &w]);
            true
        }
    }

    fn clear_col_entry(&mut self, k: usize, j: usize) -> bool {
        let pivot = self.a[k][k].clone();
        let x = self.a[k][j].clone();
        if let Some(q) = self.ring.divide(&x, &pivot) {
            let mq = self.red(-q);
            let (one, zero) = (Int::one(), Int::zero());
            self.combine_cols(j, k, [&one, &mq, &zero, &one]);
            false
        } else {
            let e = pivot.extended_gcd(&x);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let r = -(&x / &g);
            let w = &pivot / &g;
            self.combine_cols(k, j, [&s, &t, &r, &w]);
            true
        }
    }

    fn run(&mut self) {
        let rows = self.a.len();
        let cols = self.a.first().map_or(0, Vec::len);
        for k in 0..rows.min(cols) {
            // pivot of least norm in the trailing block
            let mut best: Option<(Int, usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if self.ring.is_zero(&self.a[i][j]) {
                        continue;
                    }
                    let n = self.ring.norm(&self.a[i][j]);
                    if best.as_ref().is_none_or(|(b, _, _)| &n < b) {
                        best = Some((n, i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = best else { break };
            self.swap_rows(k, pi);
            self.swap_cols(k, pj);
            loop {
                let mut dirty = true;
                while dirty {
                    dirty = false;
                    for i in k + 1..rows {
                        if !self.ring.is_zero(&self.a[i][k]) {
                            self.clear_row_entry(k, i);
                            dirty |= !self.ring.is_zero(&self.a[i][k]);
                        }
                    }
                    for j in k + 1..cols {
                        if !self.ring.is_zero(&self.a[k][j]) {
                            self.clear_col_entry(k, j);
                            dirty |= !self.ring.is_zero(&self.a[k][j]);
                        }
                    }
                    if !dirty {
                        dirty = (k + 1..rows).any(|i| !self.ring.is_zero(&self.a[i][k]));
                    }
                }
                // the pivot must divide the whole trailing block
                let pivot = self.a[k][k].clone();
                let bad = (k + 1..rows).find(|&i| {
                    (k + 1..cols).any(|j| self.ring.divide(&self.a[i][j], &pivot).is_none())
                });
                match bad {
                    Some(i) => {
                        let (one, zero) = (Int::one(), Int::zero());
                        self.combine_rows(k, i, [&one, &one, &zero, &one]);
                    }
                    None => break,
                }
            }
            let unit = self.ring.associate_unit(&self.a[k][k]);
            if !unit.is_one() {
                let inv = self.ring.inverse(&unit).expect("unit");
                self.scale_row(k, &inv);
            }
        }
    }
}

fn rows_of(m: &RingMatrix) -> Vec<Vec<Int>> {
    m.to_rows()
}

fn matrix_of(ring: &BaseRing, rows: Vec<Vec<Int>>, cols: usize) -> RingMatrix {
    let r = rows.len();
    RingMatrix::new(ring.clone(), r, cols, rows.into_iter().flatten().collect()).expect("shape")
}

/// Smith normal form by unimodular row and column elimination.
///
/// Works directly over `Z/m` using `gcd(x, m)` as the size of a residue; the
/// final diagonal is normalized to canonical associates.
pub fn smith_normal_form(a: &RingMatrix) -> SmithForm {
    let ring = a.ring().clone();
    let (r, c) = (a.rows(), a.cols());
    let mut e = Elimination {
        ring: &ring,
        a: rows_of(a),
        u: rows_of(&RingMatrix::identity(&ring, r)),
        v: rows_of(&RingMatrix::identity(&ring, c)),
        v_inv: rows_of(&RingMatrix::identity(&ring, c)),
    };
    e.run();
    let Elimination { a: s, u, v, v_inv, .. } = e;
    let s = matrix_of(&ring, s, c);
    let invariant_factors = (0..r.min(c))
        .map(|i| s.get(i, i).clone())
        .filter(|d| !d.is_zero())
        .collect();
    SmithForm {
        u: matrix_of(&ring, u, r),
        s,
        v: matrix_of(&ring, v, c),
        v_inv: matrix_of(&ring, v_inv, c),
        invariant_factors,
    }
}

/// Why `A x = b` has no solution: after the Smith change of basis the
/// equation at `index` reads `diagonal * y = residue`, which is unsolvable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub index: usize,
    pub diagonal: Int,
    pub residue: Int,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub solution: Option<Vec<Int>>,
    /// Generators of the solution module of `A x = 0`.
    pub kernel: Vec<Vec<Int>>,
    pub obstruction: Option<Obstruction>,
}

/// Solve `A x = b` for a column vector `x`.
pub fn solve_linear(a: &RingMatrix, b: &[Int]) -> Result<LinearSolution> {
    if b.len() != a.rows() {
        return Err(Error::ShapeMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    let ring = a.ring();
    let snf = smith_normal_form(a);
    let ub = snf.u.apply(&b.iter().map(|x| ring.reduce(x)).collect::<Vec<_>>());
    let n = a.cols();
    let diag = snf.diagonal();
    let mut y = vec![Int::zero(); n];
    let mut obstruction = None;
    for (i, c) in ub.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(Int::zero);
        if i < n {
            match ring.divide(c, &d) {
                Some(q) => y[i] = q,
                None => {
                    obstruction = Some(Obstruction { index: i, diagonal: d, residue: c.clone() });
                    break;
                }
            }
        } else if !ring.is_zero(c) {
            obstruction = Some(Obstruction { index: i, diagonal: Int::zero(), residue: c.clone() });
            break;
        }
    }
    let mut kernel = Vec::new();
    for i in 0..n {
        let d = diag.get(i).cloned().unwrap_or_else(Int::zero);
        // generator of the annihilator of d
        let k = match ring {
            BaseRing::Integers => {
                if d.is_zero() {
                    Some(Int::one())
                } else {
                    None
                }
            }
            BaseRing::IntegersMod(m) => {
                let k = m / d.gcd(m);
                (!ring.is_zero(&k)).then_some(k)
            }
        };
        if let Some(k) = k {
            kernel.push(snf.v.column(i).iter().map(|x| ring.mul(x, &k)).collect());
        }
    }
    let solution = obstruction.is_none().then(|| snf.v.apply(&y));
    Ok(LinearSolution { solution, kernel, obstruction })
}

// Integer lattice helpers used by the module layer. Matrices here are over Z
// and act on row vectors.

/// Basis of `{ w : w * B = 0 }` (integer row vectors), as matrix rows.
pub(crate) fn left_kernel(b: &RingMatrix) -> RingMatrix {
    debug_assert_eq!(b.ring(), &BaseRing::Integers);
    let snf = smith_normal_form(b);
    let rank = snf.rank();
    let idx: Vec<usize> = (rank..b.rows()).collect();
    snf.u.select_rows(&idx)
}

/// Reusable solver for `w * B = y` over `Z`.
pub(crate) struct LeftSolver {
    snf: SmithForm,
    rows: usize,
}

impl LeftSolver {
    pub fn new(b: &RingMatrix) -> Self {
        debug_assert_eq!(b.ring(), &BaseRing::Integers);
        LeftSolver { snf: smith_normal_form(b), rows: b.rows() }
    }

    pub fn solve(&self, y: &[Int]) -> Option<Vec<Int>> {
        let yv = self.snf.v.left_apply(y);
        let diag = self.snf.diagonal();
        let mut z = vec![Int::zero(); self.rows];
        for (j, c) in yv.iter().enumerate() {
            let d = diag.get(j).cloned().unwrap_or_else(Int::zero);
            if d.is_zero() {
                if !c.is_zero() {
                    return None;
                }
            } else {
                let (q, r) = c.div_rem(&d);
                if !r.is_zero() {
                    return None;
                }
                z[j] = q;
            }
        }
        Some(self.snf.u.left_apply(&z))
    }

}

/// A basis for the row lattice of `g` (rows of the result are independent).
pub(crate) fn row_lattice_basis(g: &RingMatrix) -> RingMatrix {
    debug_assert_eq!(g.ring(), &BaseRing::Integers);
    let snf = smith_normal_form(g);
    // rowspace(G) = rowspace(S * V^-1)
    let mut rows = Vec::new();
    for (i, d) in snf.diagonal().iter().enumerate() {
        if !d.is_zero() {
            rows.push(snf.v_inv.row(i).iter().map(|x| x * d).collect::<Vec<_>>());
        }
    }
    matrix_of(&BaseRing::Integers, rows, g.cols())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> BaseRing {
        BaseRing::Integers
    }

    fn zm(m: i64) -> BaseRing {
        BaseRing::integers_mod(m).unwrap()
    }

    fn check(a: &RingMatrix) -> SmithForm {
        let f = smith_normal_form(a);
        assert_eq!(f.u.mul(a).unwrap().mul(&f.v).unwrap(), f.s, "U A V = S for {a}");
        assert!(a.ring().is_unit(&f.u.det()));
        assert!(a.ring().is_unit(&f.v.det()));
        assert_eq!(f.v.mul(&f.v_inv).unwrap(), RingMatrix::identity(a.ring(), a.cols()));
        f
    }

    #[test]
    fn snf_examples() {
        let f = check(&RingMatrix::ints(&z(), &[&[2, 4], &[6, 8]]));
        assert_eq!(f.invariant_factors, vec![int(2), int(4)]);
        let f = check(&RingMatrix::zeros(&z(), 3, 2));
        assert!(f.invariant_factors.is_empty());
        let f = check(&RingMatrix::identity(&z(), 3));
        assert_eq!(f.invariant_factors, vec![int(1); 3]);
    }

    #[test]
    fn snf_modular() {
        let f = check(&RingMatrix::ints(&zm(12), &[&[8, 6], &[3, 9]]));
        for d in &f.invariant_factors {
            assert!((int(12) % d).is_zero());
        }
        let f = check(&RingMatrix::ints(&zm(4), &[&[2]]));
        assert_eq!(f.invariant_factors, vec![int(2)]);
        let f = check(&RingMatrix::ints(&zm(4), &[&[3]]));
        assert_eq!(f.invariant_factors, vec![int(1)]);
    }

    #[test]
    fn solve_examples() {
        let s = solve_linear(&RingMatrix::ints(&z(), &[&[2]]), &[int(4)]).unwrap();
        assert_eq!(s.solution, Some(vec![int(2)]));
        assert!(s.kernel.is_empty());
        let s = solve_linear(&RingMatrix::ints(&z(), &[&[2]]), &[int(3)]).unwrap();
        assert!(s.solution.is_none());
        assert!(s.obstruction.is_some());
        let s = solve_linear(&RingMatrix::ints(&zm(4), &[&[2]]), &[int(2)]).unwrap();
        assert_eq!(s.solution, Some(vec![int(1)]));
        assert_eq!(s.kernel, vec![vec![int(2)]]);
    }

    #[test]
    fn solve_shape_mismatch() {
        let r = solve_linear(&RingMatrix::ints(&z(), &[&[2, 1]]), &[int(1), int(2)]);
        assert!(matches!(r, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn rejects_small_modulus() {
        assert!(BaseRing::integers_mod(1).is_err());
        assert!(BaseRing::integers_mod(0).is_err());
    }

    #[test]
    fn left_solver_and_kernel() {
        let b = RingMatrix::ints(&z(), &[&[2, 0], &[0, 3], &[2, 3]]);
        let k = left_kernel(&b);
        assert_eq!(k.rows(), 1);
        assert!(k.mul(&b).unwrap().is_zero());
        let s = LeftSolver::new(&b);
        let w = s.solve(&[int(4), int(9)]).unwrap();
        assert_eq!(b.left_apply(&w), vec![int(4), int(9)]);
        assert!(s.solve(&[int(1), int(0)]).is_none());
    }

    #[test]
    fn det_bareiss() {
        let m = RingMatrix::ints(&z(), &[&[2, 4, 1], &[6, 8, 0], &[1, 1, 1]]);
        // 2(8-0) - 4(6-0) + 1(6-8) = 16 - 24 - 2
        assert_eq!(m.det_integer(), int(-10));
    }
}

//! Exact dense linear algebra over the prime fields F_2, F_3, F_5 and F_7.
//!
//! Matrices are stored row-major with one byte per residue. Every routine is
//! exact; there are no tolerances anywhere. Bases are always returned in
//! reduced row-echelon form so that two subspaces can be compared with `==`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A supported prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u8);

impl Prime {
    pub const TWO: Prime = Prime(2);
    pub const THREE: Prime = Prime(3);

    pub fn new(p: u32) -> Result<Prime> {
        match p {
            2 | 3 | 5 | 7 => Ok(Prime(p as u8)),
            _ => Err(Error::UnsupportedPrime(p)),
        }
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u8 {
        x.rem_euclid(self.0 as i64) as u8
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        (a + self.0 - b) % self.0
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        (a * b) % self.0
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        (self.0 - a) % self.0
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: u8) -> u8 {
        debug_assert!(a != 0 && a < self.0);
        (1..self.0).find(|&b| (a * b) % self.0 == 1).expect("nonzero residue is invertible")
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0 as u32
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `dst += c * src` over F_p.
#[inline]
pub(crate) fn axpy(dst: &mut [u8], src: &[u8], c: u8, p: Prime) {
    debug_assert_eq!(dst.len(), src.len());
    if c == 0 {
        return;
    }
    match p.0 {
        2 => dst.iter_mut().zip(src).for_each(|(d, s)| *d ^= *s),
        3 => axpy_mod::<3>(dst, src, c),
        5 => axpy_mod::<5>(dst, src, c),
        7 => axpy_mod::<7>(dst, src, c),
        _ => unreachable!("Prime is validated at construction"),
    }
}

#[inline]
fn axpy_mod<const P: u8>(dst: &mut [u8], src: &[u8], c: u8) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = (*d + c * *s) % P;
    }
}

#[inline]
fn scale_row(row: &mut [u8], c: u8, p: Prime) {
    if c == 1 {
        return;
    }
    for x in row.iter_mut() {
        *x = (*x * c) % p.0;
    }
}

/// A dense matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    p: Prime,
    data: Vec<u8>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} mod {} [", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl FpMatrix {
    pub fn zero(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = FpMatrix::zero(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed integer entries, reducing each mod p.
    pub fn from_fn(p: Prime, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(p.reduce(f(r, c)));
            }
        }
        FpMatrix { rows, cols, p, data }
    }

    /// Builds a matrix from rows of residues. Entries are reduced mod p.
    pub fn from_rows<R: AsRef<[u8]>>(p: Prime, cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {} but {cols} columns were expected",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&x| x % p.0));
        }
        Ok(FpMatrix { rows: rows.len(), cols, p, data })
    }

    pub fn from_data(p: Prime, rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data.into_iter().map(|x| x % p.0).collect();
        Ok(FpMatrix { rows, cols, p, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v % self.p.0;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, r: usize) -> &mut [u8] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u8]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.row_iter().map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zero(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    fn check_same_shape(&self, other: &FpMatrix) -> Result<()> {
        if self.p != other.p {
            return Err(Error::DimensionMismatch(format!("moduli {} and {}", self.p, other.p)));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} versus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_same_shape(other)?;
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| p.add(a, b)).collect();
        Ok(self.with_data(data))
    }

    pub fn sub(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_same_shape(other)?;
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| p.sub(a, b)).collect();
        Ok(self.with_data(data))
    }

    pub fn neg(&self) -> FpMatrix {
        let p = self.p;
        self.with_data(self.data.iter().map(|&a| p.neg(a)).collect())
    }

    fn with_data(&self, data: Vec<u8>) -> FpMatrix {
        FpMatrix { rows: self.rows, cols: self.cols, p: self.p, data }
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.p != other.p || self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = FpMatrix::zero(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let c = self.data[r * self.cols + k];
                if c != 0 {
                    axpy(dst, other.row(k), c, self.p);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `A·v`.
    pub fn apply(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for a matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        let p = self.p.0 as u32;
        Ok(self
            .row_iter()
            .map(|row| (row.iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum::<u32>() % p) as u8)
            .collect())
    }

    /// Stacks matrices vertically; all must share column count and modulus.
    pub fn vstack(p: Prime, cols: usize, parts: &[&FpMatrix]) -> Result<FpMatrix> {
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            if m.cols != cols || m.p != p {
                return Err(Error::DimensionMismatch(format!(
                    "cannot stack a {}-column matrix mod {} under {cols} columns mod {p}",
                    m.cols, m.p
                )));
            }
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        Ok(FpMatrix { rows, cols, p, data })
    }

    /// Places `parts` side by side; all must share row count and modulus.
    pub fn hstack(p: Prime, rows: usize, parts: &[&FpMatrix]) -> Result<FpMatrix> {
        let cols: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = FpMatrix::zero(p, rows, cols);
        let mut offset = 0;
        for m in parts {
            if m.rows != rows || m.p != p {
                return Err(Error::DimensionMismatch("hstack shape mismatch".into()));
            }
            for r in 0..rows {
                out.data[r * cols + offset..r * cols + offset + m.cols].copy_from_slice(m.row(r));
            }
            offset += m.cols;
        }
        Ok(out)
    }

    /// Gaussian elimination in place restricted to the first `col_limit`
    /// columns (later columns are carried along). Returns pivot columns.
    fn eliminate(&mut self, col_limit: usize, reduced: bool) -> Vec<usize> {
        let p = self.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..col_limit {
            if rank == self.rows {
                break;
            }
            let Some(piv) = (rank..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if piv != rank {
                let (a, b) = self.data.split_at_mut(piv * cols);
                a[rank * cols..(rank + 1) * cols].swap_with_slice(&mut b[..cols]);
            }
            let lead = self.data[rank * cols + c];
            if lead != 1 {
                let inv = p.inv(lead);
                scale_row(&mut self.data[rank * cols + c..(rank + 1) * cols], inv, p);
            }
            let start = if reduced { 0 } else { rank + 1 };
            for r in start..self.rows {
                if r == rank {
                    continue;
                }
                let e = self.data[r * cols + c];
                if e == 0 {
                    continue;
                }
                let factor = p.neg(e);
                let (src, dst) = if r < rank {
                    let (lo, hi) = self.data.split_at_mut(rank * cols);
                    (&hi[c..cols], &mut lo[r * cols + c..(r + 1) * cols])
                } else {
                    let (lo, hi) = self.data.split_at_mut(r * cols);
                    (&lo[rank * cols + c..(rank + 1) * cols], &mut hi[c..cols])
                };
                axpy(dst, src, factor, p);
            }
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    /// Reduced row-echelon form (zero rows retained at the bottom) and pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(m.cols, true);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.p == Prime::TWO && self.rows * self.cols > (1 << 16) {
            return packed_rank_f2(self);
        }
        let mut m = self.clone();
        m.eliminate(m.cols, false).len()
    }

    /// Reduced-echelon basis of `{x : A·x = 0}`.
    pub fn kernel_basis(&self) -> Subspace {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// The row space of this matrix.
    pub fn row_space(&self) -> Subspace {
        Subspace::from_spanning(self.p, self.cols, self)
    }

    pub fn select_rows(&self, idx: &[usize]) -> FpMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        FpMatrix { rows: idx.len(), cols: self.cols, p: self.p, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> FpMatrix {
        FpMatrix::from_fn(self.p, self.rows, idx.len(), |r, c| self.get(r, idx[c]) as i64)
    }
}

fn kernel_from_rref(r: &FpMatrix, pivots: &[usize]) -> Subspace {
    let p = r.p;
    let n = r.cols;
    let mut is_pivot = vec![false; n];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut vectors = Vec::new();
    for f in (0..n).filter(|&c| !is_pivot[c]) {
        let mut x = vec![0u8; n];
        x[f] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = p.neg(r.get(row, f));
        }
        vectors.push(x);
    }
    let m = FpMatrix::from_rows(p, n, &vectors).expect("kernel vectors have ambient length");
    Subspace::from_spanning(p, n, &m)
}

/// Rank over F_2 using 64-bit packed rows.
fn packed_rank_f2(a: &FpMatrix) -> usize {
    let words = a.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = a
        .row_iter()
        .map(|row| {
            let mut packed = vec![0u64; words];
            for (c, &x) in row.iter().enumerate() {
                if x != 0 {
                    packed[c / 64] |= 1 << (c % 64);
                }
            }
            packed
        })
        .collect();
    let mut rank = 0;
    for c in 0..a.cols {
        if rank == rows.len() {
            break;
        }
        let (w, bit) = (c / 64, 1u64 << (c % 64));
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(piv, rank);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            if row[w] & bit != 0 {
                for (d, s) in row[w..].iter_mut().zip(&pivot_row[w..]) {
                    *d ^= *s;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solves `A·X = B`.
///
/// Returns `Ok(None)` when the system is inconsistent and an error when the
/// shapes or moduli do not match.
pub fn solve(a: &FpMatrix, b: &FpMatrix) -> Result<Option<FpMatrix>> {
    if a.p != b.p || a.rows != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{} mod {}, B is {}x{} mod {}",
            a.rows, a.cols, a.p, b.rows, b.cols, b.p
        )));
    }
    let mut aug = FpMatrix::hstack(a.p, a.rows, &[a, b])?;
    let pivots = aug.eliminate(a.cols, true);
    let rank = pivots.len();
    for r in rank..aug.rows {
        if aug.row(r)[a.cols..].iter().any(|&x| x != 0) {
            return Ok(None);
        }
    }
    let mut x = FpMatrix::zero(a.p, a.cols, b.cols);
    for (r, &pc) in pivots.iter().enumerate() {
        x.row_mut(pc).copy_from_slice(&aug.row(r)[a.cols..]);
    }
    Ok(Some(x))
}

/// Reusable preimage computation for a fixed matrix `A`.
///
/// Stores the reduced echelon form `R` of `A` together with an invertible
/// `T` satisfying `T·A = R`, so each subsequent solve costs one
/// matrix-vector product.
#[derive(Clone, Debug)]
pub struct Solver {
    echelon: FpMatrix,
    transform: FpMatrix,
    pivots: Vec<usize>,
}

impl Solver {
    pub fn new(a: &FpMatrix) -> Solver {
        let id = FpMatrix::identity(a.p, a.rows);
        let mut aug = FpMatrix::hstack(a.p, a.rows, &[a, &id]).expect("shapes agree");
        let pivots = aug.eliminate(a.cols, true);
        let all_cols: Vec<usize> = (0..a.cols).collect();
        let rest: Vec<usize> = (a.cols..a.cols + a.rows).collect();
        let echelon = aug.select_rows(&(0..pivots.len()).collect::<Vec<_>>()).select_cols(&all_cols);
        let transform = aug.select_cols(&rest);
        Solver { echelon, transform, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.echelon.cols
    }

    pub fn rows(&self) -> usize {
        self.transform.rows
    }

    pub fn kernel(&self) -> Subspace {
        kernel_from_rref(&self.echelon, &self.pivots)
    }

    /// Some `x` with `A·x = v`, or `None` if `v` is not in the image.
    pub fn preimage(&self, v: &[u8]) -> Option<Vec<u8>> {
        let u = self.transform.apply(v).ok()?;
        if u[self.rank()..].iter().any(|&x| x != 0) {
            return None;
        }
        let mut x = vec![0u8; self.cols()];
        for (r, &pc) in self.pivots.iter().enumerate() {
            x[pc] = u[r];
        }
        Some(x)
    }
}

/// A subspace of F_p^n held by its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: FpMatrix,
}

impl Subspace {
    /// The span of the rows of `m`.
    pub fn from_spanning(p: Prime, ambient_dim: usize, m: &FpMatrix) -> Subspace {
        assert_eq!(m.cols, ambient_dim, "spanning rows must have ambient length");
        debug_assert_eq!(m.p, p);
        let (r, pivots) = m.rref();
        let basis = r.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        Subspace { ambient_dim, basis }
    }

    pub fn from_vectors<R: AsRef<[u8]>>(p: Prime, ambient_dim: usize, vectors: &[R]) -> Result<Subspace> {
        let m = FpMatrix::from_rows(p, ambient_dim, vectors)?;
        Ok(Subspace::from_spanning(p, ambient_dim, &m))
    }

    pub fn full(p: Prime, n: usize) -> Subspace {
        Subspace { ambient_dim: n, basis: FpMatrix::identity(p, n) }
    }

    pub fn zero(p: Prime, n: usize) -> Subspace {
        Subspace { ambient_dim: n, basis: FpMatrix::zero(p, 0, n) }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn prime(&self) -> Prime {
        self.basis.p
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis
            .row_iter()
            .map(|row| row.iter().position(|&x| x != 0).expect("basis rows are nonzero"))
            .collect()
    }

    /// Residue of `v` after reduction against the basis; zero iff `v` lies in the space.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let p = self.prime();
        let mut v = v.to_vec();
        for (row, pc) in self.basis.row_iter().zip(self.pivots()) {
            let e = v[pc];
            if e != 0 {
                axpy(&mut v, row, p.neg(e), p);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        v.len() == self.ambient_dim && self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.ambient_dim == self.ambient_dim && other.basis.row_iter().all(|r| self.contains(r))
    }

    /// Vectors orthogonal (under the standard pairing) to every basis vector.
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.prime(), self.ambient_dim);
        }
        self.basis.kernel_basis()
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if other.ambient_dim != self.ambient_dim || other.prime() != self.prime() {
            return Err(Error::DimensionMismatch("subspace sum over different ambients".into()));
        }
        let m = FpMatrix::vstack(self.prime(), self.ambient_dim, &[&self.basis, &other.basis])?;
        Ok(Subspace::from_spanning(self.prime(), self.ambient_dim, &m))
    }

    /// Image of this subspace under `m` (vectors treated as columns).
    pub fn image_under(&self, m: &FpMatrix) -> Result<Subspace> {
        let images = m.mul(&self.basis.transpose())?.transpose();
        Ok(Subspace::from_spanning(m.p, m.rows, &images))
    }
}

/// Intersection of a non-empty list of subspaces of a common ambient space.
pub fn intersect(spaces: &[Subspace]) -> Result<Subspace> {
    let first = spaces
        .first()
        .ok_or_else(|| Error::DimensionMismatch("intersection of an empty list".into()))?;
    let (p, n) = (first.prime(), first.ambient_dim);
    if let Some(bad) = spaces.iter().find(|s| s.ambient_dim != n || s.prime() != p) {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {} and {} (moduli {} and {})",
            n,
            bad.ambient_dim,
            p,
            bad.prime()
        )));
    }
    let annihilators: Vec<Subspace> = spaces.iter().map(Subspace::annihilator).collect();
    let parts: Vec<&FpMatrix> = annihilators.iter().map(|s| s.basis()).collect();
    let conditions = FpMatrix::vstack(p, n, &parts)?;
    if conditions.rows() == 0 {
        return Ok(Subspace::full(p, n));
    }
    Ok(conditions.kernel_basis())
}

/// Greedy basis extension: keeps an echelon basis and accepts a vector only
/// if it is independent of everything accepted so far.
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    p: Prime,
    n: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl IncrementalBasis {
    pub fn new(p: Prime, n: usize) -> Self {
        IncrementalBasis { p, n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduced(&self, v: &[u8]) -> Vec<u8> {
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let e = v[pc];
            if e != 0 {
                axpy(&mut v, row, self.p.neg(e), self.p);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduced(v).iter().all(|&x| x == 0)
    }

    /// Inserts `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        assert_eq!(v.len(), self.n);
        let mut r = self.reduced(v);
        let Some(pc) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.p.inv(r[pc]);
        scale_row(&mut r, inv, self.p);
        self.rows.push(r);
        self.pivots.push(pc);
        true
    }

    pub fn into_subspace(self) -> Subspace {
        let m = FpMatrix::from_rows(self.p, self.n, &self.rows).expect("rows have ambient length");
        Subspace::from_spanning(self.p, self.n, &m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(rows: &[&[u8]]) -> FpMatrix {
        FpMatrix::from_rows(Prime::TWO, rows[0].len(), rows).unwrap()
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(11).is_err());
        assert_eq!(Prime::new(7).unwrap().get(), 7);
        let p = Prime::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(p.mul(a, p.inv(a)), 1);
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(FpMatrix::identity(Prime::TWO, 3).rank(), 3);
        assert_eq!(m2(&[&[1, 1], &[1, 1]]).rank(), 1);
        let cyc = m2(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 1]]);
        assert_eq!(cyc.rank(), 3);
    }

    #[test]
    fn kernel_examples() {
        let p3 = Prime::THREE;
        let k = FpMatrix::zero(p3, 2, 3).kernel_basis();
        assert_eq!(k, Subspace::full(p3, 3));

        let k = m2(&[&[1, 1]]).kernel_basis();
        assert_eq!(k.basis().to_rows(), vec![vec![1, 1]]);

        let cyc = m2(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 1]]);
        let k = cyc.kernel_basis();
        assert_eq!(k.basis().to_rows(), vec![vec![1, 1, 1, 1]]);
        assert_eq!(cyc.apply(&[1, 1, 1, 1]).unwrap(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn solve_examples() {
        let id = FpMatrix::identity(Prime::TWO, 3);
        let b = m2(&[&[1, 0], &[1, 1], &[0, 1]]);
        assert_eq!(solve(&id, &b).unwrap().unwrap(), b);

        let a = m2(&[&[1, 1]]);
        let b = m2(&[&[1]]);
        let x = solve(&a, &b).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), b);

        let z = FpMatrix::zero(Prime::TWO, 1, 2);
        assert_eq!(solve(&z, &b).unwrap(), None);

        let bad = m2(&[&[1], &[0]]);
        assert!(matches!(solve(&a, &bad), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn intersect_examples() {
        let p = Prime::TWO;
        let full = Subspace::full(p, 3);
        assert_eq!(intersect(&[full.clone(), full.clone()]).unwrap(), full);

        let e = |i: usize| {
            let mut v = vec![0u8; 4];
            v[i] = 1;
            v
        };
        let a = Subspace::from_vectors(p, 4, &[e(0), e(1)]).unwrap();
        let b = Subspace::from_vectors(p, 4, &[e(1), e(2)]).unwrap();
        assert_eq!(intersect(&[a, b]).unwrap(), Subspace::from_vectors(p, 4, &[e(1)]).unwrap());

        let k1 = m2(&[&[1, 1, 0]]).kernel_basis();
        let k2 = m2(&[&[0, 1, 1]]).kernel_basis();
        let i = intersect(&[k1, k2]).unwrap();
        assert_eq!(i.basis().to_rows(), vec![vec![1, 1, 1]]);

        let small = Subspace::full(p, 2);
        assert!(intersect(&[full, small]).is_err());
        assert!(intersect(&[]).is_err());
    }

    #[test]
    fn solver_matches_solve() {
        let p = Prime::new(5).unwrap();
        let a = FpMatrix::from_fn(p, 3, 4, |r, c| (r * 3 + c * c + 1) as i64);
        let s = Solver::new(&a);
        assert_eq!(s.rank(), a.rank());
        let x0 = [1u8, 2, 3, 4];
        let v = a.apply(&x0).unwrap();
        let x = s.preimage(&v).unwrap();
        assert_eq!(a.apply(&x).unwrap(), v);
        assert_eq!(s.kernel(), a.kernel_basis());
    }

    #[test]
    fn packed_rank_agrees_with_dense() {
        let p = Prime::TWO;
        let a = FpMatrix::from_fn(p, 300, 260, |r, c| ((r * 7 + c * 13 + r * c) % 5 == 0) as i64);
        let mut dense = a.clone();
        let dense_rank = dense.eliminate(a.cols(), false).len();
        assert_eq!(packed_rank_f2(&a), dense_rank);
    }

    #[test]
    fn incremental_basis_greedy() {
        let p = Prime::TWO;
        let mut b = IncrementalBasis::new(p, 3);
        assert!(b.insert(&[1, 1, 0]));
        assert!(!b.insert(&[0, 0, 0]));
        assert!(b.insert(&[0, 1, 1]));
        assert!(!b.insert(&[1, 0, 1]));
        assert!(b.contains(&[1, 0, 1]));
        assert_eq!(b.dim(), 2);
    }
}

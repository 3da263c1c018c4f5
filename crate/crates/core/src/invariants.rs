//! Invariant theory of F_2[x_1..x_n] under subgroups of GL(n, F_2), Dickson
//! invariants, and the identification of `H^*((Z/2)^n; F_2)` with the
//! polynomial ring.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::catalog;
use crate::category::{CategorySpec, AMBIENT_NAME};
use crate::error::{Error, Result};
use crate::group::{GroupHom, PermGroup};
use crate::linalg::{intersect, FpMatrix, Prime, Subspace};
use crate::resolution::{minimal_resolution, CupTable, Resolution};
use crate::stable::CategoryCohomology;

pub const DEFAULT_MAX_DEGREE: usize = 12;
pub const MAX_VARIABLES: usize = 4;

/// A polynomial over F_2 in `n` variables, stored as its set of monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly2 {
    n: usize,
    terms: BTreeSet<Vec<u32>>,
}

impl Poly2 {
    pub fn zero(n: usize) -> Poly2 {
        Poly2 { n, terms: BTreeSet::new() }
    }

    pub fn one(n: usize) -> Poly2 {
        Poly2::monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Poly2 {
        let mut e = vec![0; n];
        e[i] = 1;
        Poly2::monomial(e)
    }

    pub fn monomial(exponents: Vec<u32>) -> Poly2 {
        Poly2 { n: exponents.len(), terms: BTreeSet::from([exponents]) }
    }

    pub fn variables(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        Poly2 { n: self.n, terms: self.terms.symmetric_difference(&other.terms).cloned().collect() }
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = BTreeSet::new();
        for a in &self.terms {
            for b in &other.terms {
                let m: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if !out.remove(&m) {
                    out.insert(m);
                }
            }
        }
        Poly2 { n: self.n, terms: out }
    }

    pub fn pow(&self, k: u32) -> Poly2 {
        (0..k).fold(Poly2::one(self.n), |acc, _| acc.mul(self))
    }

    /// Coordinates in [`monomial_basis`] of degree `d`; `None` if not homogeneous of that degree.
    pub fn to_vector(&self, d: u32) -> Option<Vec<u8>> {
        let basis = monomial_basis(self.n, d);
        let mut v = vec![0u8; basis.len()];
        for t in &self.terms {
            v[basis.iter().position(|b| b == t)?] = 1;
        }
        Some(v)
    }

    pub fn from_vector(n: usize, d: u32, v: &[u8]) -> Poly2 {
        let terms = monomial_basis(n, d).into_iter().zip(v).filter(|(_, &c)| c % 2 == 1).map(|(m, _)| m).collect();
        Poly2 { n, terms }
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|t| {
                let factors: Vec<String> = t
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                    .collect();
                if factors.is_empty() {
                    "1".to_string()
                } else {
                    factors.join("*")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Degree-`d` monomials in `n` variables, in descending lexicographic order.
pub fn monomial_basis(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// A subgroup of GL(n, F_2), kept with a generating set.
#[derive(Clone, Debug)]
pub struct MatrixGroup2 {
    n: usize,
    generators: Vec<FpMatrix>,
    elements: Vec<FpMatrix>,
}

impl MatrixGroup2 {
    pub fn generate(n: usize, generators: Vec<FpMatrix>) -> Result<MatrixGroup2> {
        for g in &generators {
            if g.rows() != n || g.cols() != n || g.prime() != Prime::TWO || g.rank() != n {
                return Err(Error::DimensionMismatch(format!("generators must be invertible {n}×{n} matrices over F_2")));
            }
        }
        let id = FpMatrix::identity(Prime::TWO, n);
        let mut seen = BTreeSet::from([id.to_rows()]);
        let mut elements = vec![id];
        let mut i = 0;
        while i < elements.len() {
            for g in &generators {
                let y = elements[i].mul(g)?;
                if seen.insert(y.to_rows()) {
                    elements.push(y);
                }
            }
            i += 1;
        }
        Ok(MatrixGroup2 { n, generators, elements })
    }

    pub fn trivial(n: usize) -> MatrixGroup2 {
        MatrixGroup2::generate(n, Vec::new()).expect("identity")
    }

    /// GL(n, F_2), generated by elementary transvections.
    pub fn general_linear(n: usize) -> Result<MatrixGroup2> {
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let mut e = FpMatrix::identity(Prime::TWO, n);
                    e.set(i, j, 1);
                    gens.push(e);
                }
            }
        }
        MatrixGroup2::generate(n, gens)
    }

    /// The group generated by the transposition of the first two coordinates.
    pub fn swap(n: usize) -> Result<MatrixGroup2> {
        if n < 2 {
            return Err(Error::DimensionMismatch("swap needs at least two variables".into()));
        }
        let mut s = FpMatrix::identity(Prime::TWO, n);
        s.set(0, 0, 0);
        s.set(1, 1, 0);
        s.set(0, 1, 1);
        s.set(1, 0, 1);
        MatrixGroup2::generate(n, vec![s])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[FpMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[FpMatrix] {
        &self.elements
    }

    pub fn verify_closure(&self) -> bool {
        let set: BTreeSet<Vec<Vec<u8>>> = self.elements.iter().map(FpMatrix::to_rows).collect();
        self.elements.iter().all(|a| a.rank() == self.n)
            && self
                .elements
                .iter()
                .all(|a| self.elements.iter().all(|b| set.contains(&a.mul(b).expect("square").to_rows())))
    }
}

fn linear_form(g: &FpMatrix, j: usize) -> Poly2 {
    let n = g.rows();
    (0..n).filter(|&i| g.get(i, j) == 1).fold(Poly2::zero(n), |acc, i| acc.add(&Poly2::var(n, i)))
}

/// Matrix of the substitution `x_j ↦ Σ_i g_ij x_i` on degree-`d` polynomials.
pub fn action_matrix(g: &FpMatrix, d: u32) -> FpMatrix {
    let n = g.rows();
    let forms: Vec<Poly2> = (0..n).map(|j| linear_form(g, j)).collect();
    let basis = monomial_basis(n, d);
    let cols: Vec<Vec<u8>> = basis
        .iter()
        .map(|m| {
            let image = m.iter().zip(&forms).fold(Poly2::one(n), |acc, (&e, f)| acc.mul(&f.pow(e)));
            image.to_vector(d).expect("substitution preserves degree")
        })
        .collect();
    FpMatrix::from_rows(Prime::TWO, basis.len(), &cols).expect("columns have basis length").transpose()
}

/// Polynomials of degree `d` fixed by every element of `h`.
pub fn invariant_basis(h: &MatrixGroup2, d: u32) -> Subspace {
    let dim = monomial_basis(h.n, d).len();
    let id = FpMatrix::identity(Prime::TWO, dim);
    let kernels: Vec<Subspace> =
        h.generators.iter().map(|g| action_matrix(g, d).sub(&id).expect("square").kernel_basis()).collect();
    if kernels.is_empty() {
        return Subspace::full(Prime::TWO, dim);
    }
    intersect(&kernels).expect("same ambient dimension")
}

/// Coefficients of `t^0..t^max` in `1/((1 - t^2)(1 - t^3))`.
pub fn dickson2_series(max: usize) -> Vec<usize> {
    (0..=max).map(|d| (0..=d / 2).filter(|a| (d - 2 * a) % 3 == 0).count()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DicksonGenerator {
    pub index: usize,
    pub degree: u32,
    pub polynomial: String,
    pub invariant: bool,
    #[serde(skip)]
    pub poly: Poly2,
}

/// The coefficients of `X^{2^i}` in `∏_v (X + v)` over all linear forms `v`.
pub fn dickson_generators(n: usize) -> Result<Vec<DicksonGenerator>> {
    if n == 0 || n > MAX_VARIABLES {
        return Err(Error::DimensionMismatch(format!("Dickson generators need 1 <= n <= {MAX_VARIABLES}")));
    }
    // coefficients of the polynomial in X, lowest power first
    let mut f: Vec<Poly2> = vec![Poly2::one(n)];
    for v in 0u32..(1 << n) {
        let form = (0..n).filter(|i| v >> i & 1 == 1).fold(Poly2::zero(n), |acc, i| acc.add(&Poly2::var(n, i)));
        let mut next = vec![Poly2::zero(n); f.len() + 1];
        for (k, c) in f.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].add(&c.mul(&form));
        }
        f = next;
    }
    let gl = MatrixGroup2::general_linear(n)?;
    let mut out: Vec<DicksonGenerator> = (0..n)
        .map(|i| {
            let poly = f[1 << i].clone();
            let degree = (1u32 << n) - (1u32 << i);
            let invariant = poly.to_vector(degree).is_some_and(|v| invariant_basis(&gl, degree).contains(&v));
            DicksonGenerator { index: i, degree, polynomial: poly.to_string(), invariant, poly }
        })
        .collect();
    out.sort_by_key(|g| g.degree);
    if let Some(bad) = out.iter().find(|g| !g.invariant) {
        return Err(Error::Consistency(format!("Dickson generator of degree {} is not invariant", bad.degree)));
    }
    Ok(out)
}

/// Elementary abelian catalog group of rank `n`.
pub fn elementary_abelian(n: usize) -> Result<PermGroup> {
    let name = match n {
        1 => "z2",
        2 => "klein4",
        3 => "z2^3",
        4 => "z2^4",
        _ => return Err(Error::DimensionMismatch(format!("rank {n} is outside 1..=4"))),
    };
    Ok(catalog::lookup(name)?.group)
}

/// Change of basis between monomials and the resolution's dual basis.
#[derive(Clone, Debug)]
pub struct PolynomialModel {
    n: usize,
    /// `to_cohomology[d]`: column `k` is the class of the `k`-th degree-d monomial.
    to_cohomology: Vec<FpMatrix>,
    from_cohomology: Vec<FpMatrix>,
}

fn invert(m: &FpMatrix) -> Result<FpMatrix> {
    let n = m.rows();
    crate::linalg::solve(m, &FpMatrix::identity(m.prime(), n))?
        .filter(|_| m.rank() == n && m.cols() == n)
        .ok_or_else(|| Error::Consistency("monomial classes do not form a basis".into()))
}

/// Coordinates of element `i` with respect to the generators of an elementary abelian 2-group.
fn coordinates(p: &PermGroup, i: usize) -> Vec<u8> {
    let mut v = vec![0u8; p.generators().len()];
    for g in p.word(i) {
        v[g] ^= 1;
    }
    v
}

pub fn polynomial_model(p: &PermGroup, r: &Resolution, max_degree: usize) -> Result<PolynomialModel> {
    let n = p.generators().len();
    if r.prime() != Prime::TWO || p.order() != 1 << n || !p.is_abelian() || (0..p.order()).any(|i| p.element_order(i) > 2) {
        return Err(Error::DimensionMismatch("the polynomial model needs (Z/2)^n on n generators".into()));
    }
    if r.group() != p {
        return Err(Error::DimensionMismatch("resolution is over a different group".into()));
    }
    let table = CupTable::new(r, max_degree)?;
    // x_i is the homomorphism reading the i-th coordinate
    let xs = (0..n)
        .map(|i| {
            let values: Vec<u8> = (0..p.order()).map(|e| coordinates(p, e)[i]).collect();
            r.h1_class_from_hom(&values)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut to = Vec::new();
    let mut from = Vec::new();
    for d in 0..=max_degree {
        let cols = monomial_basis(n, d as u32)
            .iter()
            .map(|m| {
                let mut c = r.unit();
                for (i, &e) in m.iter().enumerate() {
                    for _ in 0..e {
                        c = table.product(&c, &xs[i])?;
                    }
                }
                Ok(c.coeffs)
            })
            .collect::<Result<Vec<_>>>()?;
        let m = FpMatrix::from_rows(Prime::TWO, r.rank(d), &cols)?.transpose();
        from.push(invert(&m)?);
        to.push(m);
    }
    Ok(PolynomialModel { n, to_cohomology: to, from_cohomology: from })
}

impl PolynomialModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.to_cohomology.len() - 1
    }

    pub fn to_cohomology(&self, d: usize) -> &FpMatrix {
        &self.to_cohomology[d]
    }

    pub fn from_cohomology(&self, d: usize) -> &FpMatrix {
        &self.from_cohomology[d]
    }

    /// A cohomology-side linear map on `H^d` expressed on polynomials.
    pub fn transport(&self, d: usize, m: &FpMatrix) -> Result<FpMatrix> {
        self.from_cohomology[d].mul(m)?.mul(&self.to_cohomology[d])
    }

    pub fn subspace_to_polynomials(&self, d: usize, s: &Subspace) -> Result<Subspace> {
        s.image_under(&self.from_cohomology[d])
    }
}

/// The automorphism of `p` whose polynomial substitution matrix is `g`.
pub fn automorphism_for(p: &PermGroup, g: &FpMatrix) -> Result<GroupHom> {
    let n = p.generators().len();
    let gens = p.generator_indices();
    // h(g_j) = Σ_i A_ij g_i with A = gᵀ
    let images = (0..n)
        .map(|j| {
            let idx = (0..n).filter(|&i| g.get(j, i) == 1).fold(PermGroup::IDENTITY, |acc, i| p.mul(acc, gens[i]));
            p.element(idx).clone()
        })
        .collect();
    GroupHom::new(p.clone(), p.clone(), images)
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantComparison {
    pub n: usize,
    pub group_order: usize,
    pub max_degree: usize,
    pub limit_dims: Vec<usize>,
    pub invariant_dims: Vec<usize>,
    pub equal: Vec<bool>,
    pub all_equal: bool,
}

/// Builds the one-object category of `h` acting on `(Z/2)^n`, transports its
/// limit through the polynomial model and compares with the fixed spaces.
pub fn compare_invariants_vs_limit(n: usize, h: &MatrixGroup2, max_degree: usize) -> Result<InvariantComparison> {
    if n > 3 || max_degree > 8 || h.n() != n {
        return Err(Error::DimensionMismatch("comparison needs n <= 3, degree <= 8 and matching sizes".into()));
    }
    let p = elementary_abelian(n)?;
    let morphisms = h
        .elements()
        .iter()
        .map(|g| Ok((AMBIENT_NAME.to_string(), AMBIENT_NAME.to_string(), automorphism_for(&p, g)?)))
        .collect::<Result<Vec<_>>>()?;
    let spec = CategorySpec::subgroup(Prime::TWO, p.clone(), vec![], morphisms)?;
    let cc = CategoryCohomology::new(&spec, max_degree)?;
    let model = polynomial_model(&p, cc.resolution(0), max_degree)?;
    let mut limit_dims = Vec::new();
    let mut invariant_dims = Vec::new();
    let mut equal = Vec::new();
    for d in 0..=max_degree {
        let limit = model.subspace_to_polynomials(d, &cc.limit_basis(d)?)?;
        let inv = invariant_basis(h, d as u32);
        limit_dims.push(limit.dim());
        invariant_dims.push(inv.dim());
        equal.push(limit.contains_space(&inv) && inv.contains_space(&limit));
    }
    Ok(InvariantComparison {
        n,
        group_order: h.order(),
        max_degree,
        all_equal: equal.iter().all(|&e| e),
        limit_dims,
        invariant_dims,
        equal,
    })
}

/// Resolution and model for `(Z/2)^n` in one step.
pub fn model_for_rank(n: usize, max_degree: usize) -> Result<(PermGroup, Resolution, PolynomialModel)> {
    let p = elementary_abelian(n)?;
    let r = minimal_resolution(&p, Prime::TWO, max_degree)?;
    let m = polynomial_model(&p, &r, max_degree)?;
    Ok((p, r, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::induced_maps;

    fn m2(rows: [[i64; 2]; 2]) -> FpMatrix {
        FpMatrix::from_fn(Prime::TWO, 2, 2, |i, j| rows[i][j])
    }

    #[test]
    fn printing() {
        let x = Poly2::var(2, 0);
        let y = Poly2::var(2, 1);
        let p = x.pow(2).mul(&y).add(&x.mul(&y.pow(2)));
        assert_eq!(p.to_string(), "x1^2*x2 + x1*x2^2");
        assert_eq!(Poly2::one(2).to_string(), "1");
        assert_eq!(Poly2::zero(2).to_string(), "0");
    }

    #[test]
    fn action_examples() {
        assert_eq!(action_matrix(&FpMatrix::identity(Prime::TWO, 2), 3), FpMatrix::identity(Prime::TWO, 4));
        assert_eq!(action_matrix(&m2([[0, 1], [1, 0]]), 1), m2([[0, 1], [1, 0]]));
        let g = m2([[1, 1], [0, 1]]);
        let a = action_matrix(&g, 2);
        let y2 = Poly2::var(2, 1).pow(2).to_vector(2).unwrap();
        let xy = Poly2::var(2, 0).mul(&Poly2::var(2, 1)).to_vector(2).unwrap();
        assert_eq!(Poly2::from_vector(2, 2, &a.apply(&y2).unwrap()).to_string(), "x1^2 + x2^2");
        assert_eq!(Poly2::from_vector(2, 2, &a.apply(&xy).unwrap()).to_string(), "x1^2 + x1*x2");
    }

    #[test]
    fn invariant_examples() {
        let gl2 = MatrixGroup2::general_linear(2).unwrap();
        assert_eq!(gl2.order(), 6);
        assert!(gl2.verify_closure());
        assert_eq!(invariant_basis(&gl2, 1).dim(), 0);
        let d2 = invariant_basis(&gl2, 2);
        assert_eq!(d2.dim(), 1);
        assert_eq!(Poly2::from_vector(2, 2, d2.basis().row(0)).to_string(), "x1^2 + x1*x2 + x2^2");
        let swap = MatrixGroup2::swap(2).unwrap();
        let s1 = invariant_basis(&swap, 1);
        assert_eq!(Poly2::from_vector(2, 1, s1.basis().row(0)).to_string(), "x1 + x2");
        let dims: Vec<usize> = (0..=8).map(|d| invariant_basis(&gl2, d).dim()).collect();
        assert_eq!(dims, dickson2_series(8));
    }

    #[test]
    fn dickson() {
        let g1 = dickson_generators(1).unwrap();
        assert_eq!((g1[0].degree, g1[0].polynomial.as_str()), (1, "x1"));
        let g2 = dickson_generators(2).unwrap();
        assert_eq!(g2.iter().map(|g| g.degree).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(g2[0].polynomial, "x1^2 + x1*x2 + x2^2");
        assert_eq!(g2[1].polynomial, "x1^2*x2 + x1*x2^2");
        let g3 = dickson_generators(3).unwrap();
        assert_eq!(g3.iter().map(|g| g.degree).collect::<Vec<_>>(), vec![4, 6, 7]);
    }

    #[test]
    fn model_and_transport() {
        let (p, r, model) = model_for_rank(2, 4).unwrap();
        assert_eq!(model.to_cohomology(2).rank(), 3);
        for g in MatrixGroup2::general_linear(2).unwrap().elements() {
            let h = automorphism_for(&p, g).unwrap();
            let maps = induced_maps(&h, &r, &r, 4).unwrap();
            for (d, m) in maps.iter().enumerate() {
                assert_eq!(model.transport(d, m).unwrap(), action_matrix(g, d as u32));
            }
        }
        let (_, _, m1) = model_for_rank(1, 5).unwrap();
        for d in 0..=5 {
            assert_eq!(m1.to_cohomology(d).rows(), 1);
        }
    }

    #[test]
    fn comparisons() {
        let c = compare_invariants_vs_limit(2, &MatrixGroup2::general_linear(2).unwrap(), 6).unwrap();
        assert!(c.all_equal);
        assert_eq!(c.limit_dims, vec![1, 0, 1, 1, 1, 1, 2]);
        let c = compare_invariants_vs_limit(2, &MatrixGroup2::swap(2).unwrap(), 6).unwrap();
        assert!(c.all_equal);
        assert_eq!(c.limit_dims, vec![1, 1, 2, 2, 3, 3, 4]);
        let c = compare_invariants_vs_limit(1, &MatrixGroup2::trivial(1), 5).unwrap();
        assert_eq!(c.limit_dims, vec![1; 6]);
    }
}

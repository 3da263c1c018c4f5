//! Minimal free resolutions of F_p over F_p[G] for p-groups G.
//!
//! Because F_p[G] is local when G is a p-group, a minimal set of module
//! generators for a submodule K is any F_p-basis of K modulo J·K, where J is
//! the augmentation ideal. The resolution is built degree by degree from the
//! kernels of the expanded differentials.
//!
//! Minimality makes every differential of `Hom_G(F_*, F_p)` vanish, so
//! `H^n(G; F_p)` is the dual of the generators of `F_n` and a class is just
//! a coefficient vector of length `b_n`.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::algebra::{AlgebraMap, GroupAlgebra};
use crate::error::{Error, Result};
use crate::group::{GroupHom, PermGroup};
use crate::linalg::{axpy, FpMatrix, IncrementalBasis, Prime, Solver, Subspace};

/// Largest group order accepted by [`minimal_resolution`].
pub const MAX_GROUP_ORDER: usize = 16;
/// Largest resolution length accepted by [`minimal_resolution`].
pub const MAX_DEGREE: usize = 12;

#[derive(Clone, Debug)]
pub struct Resolution {
    algebra: GroupAlgebra,
    max_degree: usize,
    ranks: Vec<usize>,
    /// `differentials[n - 1]` is `d_n : F_n -> F_{n-1}`.
    differentials: Vec<AlgebraMap>,
    /// `solvers[n]` inverts the expanded `d_n`; `solvers[0]` is the augmentation.
    solvers: Vec<Solver>,
}

/// A cohomology class: coefficients in the dual basis of the degree-n generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CohomClass {
    pub degree: usize,
    pub coeffs: Vec<u8>,
}

impl CohomClass {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&x| x == 0)
    }
}

fn augmentation_matrix(alg: &GroupAlgebra) -> FpMatrix {
    FpMatrix::from_fn(alg.prime(), 1, alg.dim(), |_, _| 1)
}

/// Minimal resolution of the trivial module up to degree `max_degree`.
pub fn minimal_resolution(group: &PermGroup, p: Prime, max_degree: usize) -> Result<Resolution> {
    if !group.is_p_group(p.get() as u32) {
        return Err(Error::NotPGroup(format!("group of order {}", group.order()), p.get() as u32));
    }
    if group.order() > MAX_GROUP_ORDER {
        return Err(Error::OrderCapExceeded { cap: MAX_GROUP_ORDER });
    }
    if max_degree > MAX_DEGREE {
        return Err(Error::DegreeOutOfRange { degree: max_degree, max: MAX_DEGREE });
    }
    let alg = GroupAlgebra::new(group, p);
    let eps = Solver::new(&augmentation_matrix(&alg));
    let mut kernel = eps.kernel();
    let mut solvers = vec![eps];
    let mut ranks = vec![1];
    let mut differentials = Vec::new();
    for n in 0..max_degree {
        let k_basis = kernel.basis().to_rows();
        let jk = alg.augmentation_ideal_times(&k_basis);
        let mut span = IncrementalBasis::new(p, kernel.ambient_dim());
        for v in &jk {
            span.insert(v);
        }
        let jk_dim = span.dim();
        let gens: Vec<Vec<u8>> = k_basis.into_iter().filter(|v| span.insert(v)).collect();
        if gens.len() + jk_dim != kernel.dim() {
            return Err(Error::Consistency(format!("J·K is not contained in K at degree {n}")));
        }
        let d = AlgebraMap::from_images(&alg, ranks[n], gens)?;
        let solver = Solver::new(&d.expand(&alg));
        kernel = solver.kernel();
        ranks.push(d.source_rank());
        differentials.push(d);
        solvers.push(solver);
    }
    Ok(Resolution { algebra: alg, max_degree, ranks, differentials, solvers })
}

impl Resolution {
    pub fn algebra(&self) -> &GroupAlgebra {
        &self.algebra
    }

    pub fn group(&self) -> &PermGroup {
        self.algebra.group()
    }

    pub fn prime(&self) -> Prime {
        self.algebra.prime()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Ranks `b_0..b_N`; by minimality these are the cohomology dimensions.
    pub fn betti(&self) -> Vec<usize> {
        self.ranks.clone()
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks[n]
    }

    /// `d_n` for `1 <= n <= N`.
    pub fn differential(&self, n: usize) -> &AlgebraMap {
        &self.differentials[n - 1]
    }

    /// Expanded F_p matrix of `d_n`; `n = 0` gives the augmentation.
    pub fn expanded_differential(&self, n: usize) -> FpMatrix {
        if n == 0 {
            augmentation_matrix(&self.algebra)
        } else {
            self.differential(n).expand(&self.algebra)
        }
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree {
            return Err(Error::DegreeOutOfRange { degree: n, max: self.max_degree });
        }
        Ok(())
    }

    pub fn class(&self, degree: usize, coeffs: Vec<u8>) -> Result<CohomClass> {
        self.check_degree(degree)?;
        if coeffs.len() != self.ranks[degree] {
            return Err(Error::DimensionMismatch(format!(
                "class of length {} in degree {degree} where H^{degree} has dimension {}",
                coeffs.len(),
                self.ranks[degree]
            )));
        }
        let p = self.prime().get();
        Ok(CohomClass { degree, coeffs: coeffs.into_iter().map(|x| x % p).collect() })
    }

    /// The `i`-th dual basis class in degree `degree`.
    pub fn basis_class(&self, degree: usize, i: usize) -> CohomClass {
        let mut coeffs = vec![0u8; self.ranks[degree]];
        coeffs[i] = 1;
        CohomClass { degree, coeffs }
    }

    pub fn unit(&self) -> CohomClass {
        self.basis_class(0, 0)
    }

    /// Checks the defining invariants: complex, minimality and exactness.
    pub fn verify(&self) -> Result<()> {
        if self.ranks[0] != 1 {
            return Err(Error::Consistency("b_0 must be 1".into()));
        }
        for n in 1..=self.max_degree {
            let d = self.differential(n);
            if !d.is_minimal(&self.algebra) {
                return Err(Error::Consistency(format!("d_{n} has an entry outside the augmentation ideal")));
            }
            let prev = self.expanded_differential(n - 1);
            let cur = self.expanded_differential(n);
            if !prev.mul(&cur)?.is_zero() {
                return Err(Error::Consistency(format!("d_{} ∘ d_{n} is not zero", n - 1)));
            }
            let kernel_dim = prev.cols() - prev.rank();
            if cur.rank() != kernel_dim {
                return Err(Error::Consistency(format!("not exact at degree {}", n - 1)));
            }
        }
        Ok(())
    }

    /// Debugging report: ranks and, per differential, which entries are nonzero.
    pub fn report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "group order {} prime {}", self.group().order(), self.prime());
        let _ = writeln!(out, "ranks {:?}", self.ranks);
        for n in 1..=self.max_degree {
            let d = self.differential(n);
            let _ = writeln!(out, "d_{n}: {} -> {}", d.source_rank(), d.target_rank());
            for i in 0..d.target_rank() {
                let row: String = (0..d.source_rank())
                    .map(|j| if d.entry(i, j).iter().any(|&x| x != 0) { '*' } else { '.' })
                    .collect();
                let _ = writeln!(out, "  {row}");
            }
        }
        out
    }

    fn preimage(&self, n: usize, v: &[u8]) -> Result<Vec<u8>> {
        self.solvers[n]
            .preimage(v)
            .ok_or_else(|| Error::Consistency(format!("lifting failed: target not in the image of d_{n}")))
    }

    /// Chain map `u_i : F_{m+i} -> F_i` (for `0 <= i <= up_to`) covering the
    /// cocycle `x` of degree `m`.
    pub fn lift_class(&self, x: &CohomClass, up_to: usize) -> Result<Vec<AlgebraMap>> {
        let m = x.degree;
        self.check_degree(m + up_to)?;
        let alg = &self.algebra;
        let p = self.prime();
        let u0_images = x
            .coeffs
            .iter()
            .map(|&c| {
                let mut v = alg.one();
                v[PermGroup::IDENTITY] = c % p.get();
                v
            })
            .collect();
        let mut lifts = vec![AlgebraMap::from_images(alg, 1, u0_images)?];
        for i in 1..=up_to {
            let d = self.differential(m + i);
            let prev = &lifts[i - 1];
            let images = (0..d.source_rank())
                .map(|k| self.preimage(i, &prev.apply(alg, d.image(k))))
                .collect::<Result<Vec<_>>>()?;
            lifts.push(AlgebraMap::from_images(alg, self.ranks[i], images)?);
        }
        Ok(lifts)
    }

    /// Matrix of `y ↦ x ⌣ y` from `H^b` to `H^{m+b}` read off a chain lift.
    fn product_matrix_from_lift(&self, lift: &AlgebraMap) -> FpMatrix {
        let alg = &self.algebra;
        let rows: Vec<Vec<u8>> = lift.images().iter().map(|v| alg.augment_blocks(v)).collect();
        FpMatrix::from_rows(self.prime(), lift.target_rank(), &rows).expect("augmented blocks have target rank")
    }

    /// Cup product, computed by lifting `x` to a chain map and evaluating `y`.
    pub fn cup(&self, x: &CohomClass, y: &CohomClass) -> Result<CohomClass> {
        self.check_degree(x.degree + y.degree)?;
        let lifts = self.lift_class(x, y.degree)?;
        let m = self.product_matrix_from_lift(&lifts[y.degree]);
        Ok(CohomClass { degree: x.degree + y.degree, coeffs: m.apply(&y.coeffs)? })
    }

    /// Values `f(g)` of the homomorphism `G -> F_p` corresponding to a degree-one class.
    pub fn h1_hom_values(&self, y: &CohomClass) -> Result<Vec<u8>> {
        if y.degree != 1 {
            return Err(Error::DimensionMismatch("degree-one class required".into()));
        }
        self.check_degree(1)?;
        let alg = &self.algebra;
        let p = self.prime();
        (0..alg.dim())
            .map(|g| {
                let mut v = alg.basis_element(g);
                v[PermGroup::IDENTITY] = p.sub(v[PermGroup::IDENTITY], 1);
                let w = self.preimage(1, &v)?;
                let aug = alg.augment_blocks(&w);
                Ok((aug.iter().zip(&y.coeffs).map(|(&a, &b)| a as u32 * b as u32).sum::<u32>() % p.get() as u32) as u8)
            })
            .collect()
    }

    /// The degree-one class whose homomorphism has the given values.
    pub fn h1_class_from_hom(&self, values: &[u8]) -> Result<CohomClass> {
        let b1 = self.rank(1);
        let cols = (0..b1).map(|i| self.h1_hom_values(&self.basis_class(1, i))).collect::<Result<Vec<_>>>()?;
        let a = FpMatrix::from_rows(self.prime(), self.algebra.dim(), &cols)?.transpose();
        let rhs = FpMatrix::from_rows(self.prime(), 1, &values.iter().map(|&v| vec![v]).collect::<Vec<_>>())?;
        let x = crate::linalg::solve(&a, &rhs)?
            .ok_or_else(|| Error::InvalidHomomorphism("values do not define a homomorphism to F_p".into()))?;
        Ok(CohomClass { degree: 1, coeffs: x.column(0) })
    }
}

/// Precomputed multiplication by each basis class, for repeated products.
#[derive(Clone, Debug)]
pub struct CupTable {
    p: Prime,
    max_degree: usize,
    /// `left[a][s][b]`: matrix of `y ↦ e_s ⌣ y` from `H^b` to `H^{a+b}`.
    left: Vec<Vec<Vec<FpMatrix>>>,
}

impl CupTable {
    pub fn new(res: &Resolution, max_degree: usize) -> Result<CupTable> {
        res.check_degree(max_degree)?;
        let mut left = Vec::new();
        for a in 0..=max_degree {
            let per_class = (0..res.rank(a))
                .into_par_iter()
                .map(|s| {
                    let lifts = res.lift_class(&res.basis_class(a, s), max_degree - a)?;
                    Ok(lifts.iter().map(|l| res.product_matrix_from_lift(l)).collect())
                })
                .collect::<Result<Vec<Vec<FpMatrix>>>>()?;
            left.push(per_class);
        }
        Ok(CupTable { p: res.prime(), max_degree, left })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Matrix of `y ↦ x ⌣ y` on `H^b`.
    pub fn left_multiplication(&self, x: &CohomClass, b: usize) -> Result<FpMatrix> {
        if x.degree + b > self.max_degree {
            return Err(Error::DegreeOutOfRange { degree: x.degree + b, max: self.max_degree });
        }
        let mats = &self.left[x.degree];
        let mut acc = FpMatrix::zero(self.p, mats.first().map_or(0, |m| m[b].rows()), mats.first().map_or(0, |m| m[b].cols()));
        for (s, &c) in x.coeffs.iter().enumerate() {
            if c != 0 {
                let mut scaled = mats[s][b].clone();
                for _ in 1..c {
                    scaled = scaled.add(&mats[s][b])?;
                }
                acc = acc.add(&scaled)?;
            }
        }
        Ok(acc)
    }

    pub fn product(&self, x: &CohomClass, y: &CohomClass) -> Result<CohomClass> {
        let coeffs = if x.coeffs.is_empty() {
            Vec::new()
        } else {
            self.left_multiplication(x, y.degree)?.apply(&y.coeffs)?
        };
        Ok(CohomClass { degree: x.degree + y.degree, coeffs })
    }
}

/// Choice of coordinates for the restricted module in [`induced_maps_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CosetOrder {
    /// Coordinates follow the element enumeration of the larger group.
    #[default]
    LeastIndex,
    /// Coordinates reversed within every free block; gives an independent lift.
    Reversed,
}

/// Matrices of `φ*: H^n(P) -> H^n(Q)` for `0 <= n <= up_to`, in the dual bases.
pub fn induced_maps(phi: &GroupHom, rp: &Resolution, rq: &Resolution, up_to: usize) -> Result<Vec<FpMatrix>> {
    induced_maps_with(phi, rp, rq, up_to, CosetOrder::LeastIndex)
}

/// The matrix of `φ*` in a single degree.
pub fn induced_map(phi: &GroupHom, rp: &Resolution, rq: &Resolution, n: usize) -> Result<FpMatrix> {
    Ok(induced_maps(phi, rp, rq, n)?.pop().expect("at least degree 0"))
}

pub fn induced_maps_with(
    phi: &GroupHom,
    rp: &Resolution,
    rq: &Resolution,
    up_to: usize,
    order: CosetOrder,
) -> Result<Vec<FpMatrix>> {
    if rp.prime() != rq.prime() {
        return Err(Error::DimensionMismatch(format!("primes {} and {}", rp.prime(), rq.prime())));
    }
    if !phi.is_injective() {
        return Err(Error::InvalidHomomorphism("induced maps require an injective homomorphism".into()));
    }
    if phi.domain() != rq.group() || phi.codomain() != rp.group() {
        return Err(Error::InvalidHomomorphism("resolutions do not match the homomorphism".into()));
    }
    rp.check_degree(up_to)?;
    rq.check_degree(up_to)?;
    let p = rp.prime();
    let alg_p = rp.algebra();
    let alg_q = rq.algebra();
    let np = alg_p.dim();

    let push = |c: &[u8]| -> Vec<u8> {
        let mut out = vec![0u8; np];
        for (q, &x) in c.iter().enumerate() {
            let t = phi.apply_index(q);
            out[t] = p.add(out[t], x);
        }
        out
    };

    // Reversed coordinates: a fresh solver on the permuted matrix per degree.
    type Reversed = Option<(Solver, Vec<usize>, Vec<usize>)>;
    let reversed_solvers: Vec<Reversed> = match order {
        CosetOrder::LeastIndex => vec![None; up_to + 1],
        CosetOrder::Reversed => (0..=up_to)
            .map(|i| {
                if i == 0 {
                    return None;
                }
                let a = rp.expanded_differential(i);
                let rev = |len: usize| -> Vec<usize> {
                    (0..len).map(|k| (k / np) * np + (np - 1 - k % np)).collect()
                };
                let row_perm = rev(a.rows());
                let col_perm = rev(a.cols());
                let permuted = a.select_rows(&row_perm).select_cols(&col_perm);
                Some((Solver::new(&permuted), row_perm, col_perm))
            })
            .collect(),
    };
    let solve = |i: usize, v: &[u8]| -> Result<Vec<u8>> {
        match &reversed_solvers[i] {
            None => rp.preimage(i, v),
            Some((solver, row_perm, col_perm)) => {
                let pv: Vec<u8> = row_perm.iter().map(|&r| v[r]).collect();
                let w = solver
                    .preimage(&pv)
                    .ok_or_else(|| Error::Consistency(format!("restricted lifting failed in degree {i}")))?;
                let mut out = vec![0u8; w.len()];
                for (k, &c) in col_perm.iter().enumerate() {
                    out[c] = w[k];
                }
                Ok(out)
            }
        }
    };

    let mut lifts: Vec<Vec<Vec<u8>>> = vec![vec![alg_p.one()]];
    for i in 1..=up_to {
        let d = rq.differential(i);
        let prev = &lifts[i - 1];
        let images = (0..d.source_rank())
            .map(|k| {
                let img = d.image(k);
                let mut rhs = vec![0u8; rp.rank(i - 1) * np];
                for (j, c) in img.chunks(alg_q.dim()).enumerate() {
                    if c.iter().any(|&x| x != 0) {
                        let t = alg_p.scalar_mul(&push(c), &prev[j]);
                        axpy(&mut rhs, &t, 1, p);
                    }
                }
                solve(i, &rhs)
            })
            .collect::<Result<Vec<_>>>()?;
        lifts.push(images);
    }
    Ok(lifts
        .iter()
        .enumerate()
        .map(|(i, imgs)| {
            let rows: Vec<Vec<u8>> = imgs.iter().map(|v| alg_p.augment_blocks(v)).collect();
            FpMatrix::from_rows(p, rp.rank(i), &rows).expect("rows have length b_i(P)")
        })
        .collect())
}

/// Restriction of a subspace's basis vectors, as classes.
pub fn classes_of(space: &Subspace, degree: usize) -> Vec<CohomClass> {
    space.basis().row_iter().map(|r| CohomClass { degree, coeffs: r.to_vec() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn res(name: &str, n: usize) -> Resolution {
        let c = catalog::lookup(name).unwrap();
        minimal_resolution(&c.group, c.prime, n).unwrap()
    }

    #[test]
    fn forced_ranks() {
        assert_eq!(res("z2", 10).betti(), vec![1; 11]);
        assert_eq!(res("z3", 6).betti(), vec![1; 7]);
        assert_eq!(res("z4", 6).betti(), vec![1; 7]);
    }

    #[test]
    fn klein_and_q8_ranks() {
        assert_eq!(res("klein4", 8).betti(), (1..=9).collect::<Vec<_>>());
        assert_eq!(res("q8", 8).betti(), vec![1, 2, 2, 1, 1, 2, 2, 1, 1]);
    }

    #[test]
    fn trivial_group_resolution() {
        let g = PermGroup::trivial(3);
        let r = minimal_resolution(&g, Prime::TWO, 4).unwrap();
        assert_eq!(r.betti(), vec![1, 0, 0, 0, 0]);
        r.verify().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let s3 = PermGroup::from_cycle_strings(3, &["(1 2 3)", "(1 2)"]).unwrap();
        assert!(matches!(minimal_resolution(&s3, Prime::TWO, 2), Err(Error::NotPGroup(..))));
        let z2 = catalog::lookup("z2").unwrap().group;
        assert!(matches!(minimal_resolution(&z2, Prime::TWO, 13), Err(Error::DegreeOutOfRange { .. })));
        assert!(minimal_resolution(&z2, Prime::THREE, 2).is_err());
    }

    #[test]
    fn resolutions_verify() {
        for name in ["z2", "z4", "klein4", "q8", "d8", "z3", "z5"] {
            res(name, 5).verify().unwrap();
        }
    }

    #[test]
    fn cup_examples() {
        let r = res("z2", 4);
        let x = r.basis_class(1, 0);
        assert!(!r.cup(&x, &x).unwrap().is_zero());

        let r = res("z4", 4);
        let x = r.basis_class(1, 0);
        assert!(r.cup(&x, &x).unwrap().is_zero());

        let r = res("klein4", 4);
        let products: Vec<Vec<u8>> = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| r.cup(&r.basis_class(1, i), &r.basis_class(1, j)).unwrap().coeffs)
            .collect();
        let span = Subspace::from_vectors(r.prime(), 3, &products).unwrap();
        assert_eq!(span.dim(), 3);

        for d in 0..=4 {
            for i in 0..r.rank(d) {
                let x = r.basis_class(d, i);
                assert_eq!(r.cup(&r.unit(), &x).unwrap(), x);
                assert_eq!(r.cup(&x, &r.unit()).unwrap(), x);
            }
        }
    }

    #[test]
    fn cup_table_matches_direct_cup() {
        let r = res("d8", 5);
        let t = CupTable::new(&r, 5).unwrap();
        for a in 0..=2 {
            for b in 0..=(5 - a).min(3) {
                for i in 0..r.rank(a) {
                    for j in 0..r.rank(b) {
                        let x = r.basis_class(a, i);
                        let y = r.basis_class(b, j);
                        assert_eq!(t.product(&x, &y).unwrap(), r.cup(&x, &y).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn identity_induces_identity() {
        let c = catalog::lookup("q8").unwrap();
        let r = minimal_resolution(&c.group, c.prime, 5).unwrap();
        let maps = induced_maps(&GroupHom::identity(&c.group), &r, &r, 5).unwrap();
        for (n, m) in maps.iter().enumerate() {
            assert_eq!(*m, FpMatrix::identity(c.prime, r.rank(n)));
        }
    }

    #[test]
    fn restriction_z4_to_z2() {
        let z4 = catalog::lookup("z4").unwrap().group;
        let z2 = PermGroup::from_cycle_strings(4, &["(1 3)(2 4)"]).unwrap();
        assert!(z4.contains_group(&z2));
        let rp = minimal_resolution(&z4, Prime::TWO, 4).unwrap();
        let rq = minimal_resolution(&z2, Prime::TWO, 4).unwrap();
        let incl = GroupHom::inclusion(&z2, &z4).unwrap();
        let maps = induced_maps(&incl, &rp, &rq, 4).unwrap();
        assert!(maps[1].is_zero());
        assert_eq!(maps[2].rank(), 1);
        let reversed = induced_maps_with(&incl, &rp, &rq, 4, CosetOrder::Reversed).unwrap();
        assert_eq!(maps, reversed);
    }

    #[test]
    fn h1_homs_round_trip() {
        let r = res("klein4", 2);
        for i in 0..2 {
            let x = r.basis_class(1, i);
            let vals = r.h1_hom_values(&x).unwrap();
            assert_eq!(vals[0], 0);
            assert_eq!(r.h1_class_from_hom(&vals).unwrap(), x);
        }
    }
}

//! The group algebra F_p[G] and homomorphisms between free F_p[G]-modules.
//!
//! An element of the free module of rank `r` is a vector of length `r·|G|`:
//! block `i` holds the coefficients of the `i`-th free generator over the
//! fixed element enumeration of `G`. Modules are left modules.

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::linalg::{axpy, FpMatrix, Prime};

#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    group: PermGroup,
    p: Prime,
    n: usize,
    table: Vec<u32>,
}

impl GroupAlgebra {
    pub fn new(group: &PermGroup, p: Prime) -> GroupAlgebra {
        let n = group.order();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(group.mul(a, b) as u32);
            }
        }
        GroupAlgebra { group: group.clone(), p, n, table }
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// `|G|`, the F_p-dimension of the algebra.
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul_index(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    pub fn one(&self) -> Vec<u8> {
        self.basis_element(PermGroup::IDENTITY)
    }

    pub fn basis_element(&self, g: usize) -> Vec<u8> {
        let mut v = vec![0u8; self.n];
        v[g] = 1;
        v
    }

    /// Sum of coefficients.
    pub fn augmentation(&self, a: &[u8]) -> u8 {
        (a.iter().map(|&x| x as u32).sum::<u32>() % self.p.get() as u32) as u8
    }

    pub fn mul(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let mut out = vec![0u32; self.n];
        for (g, &ag) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (h, &bh) in b.iter().enumerate().filter(|(_, &x)| x != 0) {
                out[self.mul_index(g, h)] += ag as u32 * bh as u32;
            }
        }
        out.into_iter().map(|x| (x % self.p.get() as u32) as u8).collect()
    }

    /// `g·v` for a group element `g` and a free-module vector `v`.
    pub fn translate(&self, g: usize, v: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; v.len()];
        for (block_in, block_out) in v.chunks(self.n).zip(out.chunks_mut(self.n)) {
            for (h, &c) in block_in.iter().enumerate() {
                block_out[self.mul_index(g, h)] = c;
            }
        }
        out
    }

    /// `c·v` for an algebra element `c` and a free-module vector `v`.
    pub fn scalar_mul(&self, c: &[u8], v: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; v.len()];
        for (g, &cg) in c.iter().enumerate() {
            if cg != 0 {
                let t = self.translate(g, v);
                axpy(&mut out, &t, cg, self.p);
            }
        }
        out
    }

    /// Augmentation of each block of a free-module vector.
    pub fn augment_blocks(&self, v: &[u8]) -> Vec<u8> {
        v.chunks(self.n).map(|b| self.augmentation(b)).collect()
    }

    /// F_p-spanning set of `J·M` for the submodule `M` spanned (as a module)
    /// by `vectors`: the translates `(s - 1)·v` over group generators `s`.
    pub fn augmentation_ideal_times(&self, vectors: &[Vec<u8>]) -> Vec<Vec<u8>> {
        let p = self.p;
        let mut out = Vec::new();
        for s in self.group.generator_indices() {
            for v in vectors {
                let mut t = self.translate(s, v);
                axpy(&mut t, v, p.neg(1), p);
                out.push(t);
            }
        }
        out
    }
}

/// A homomorphism `F^a -> F^b` of free left F_p[G]-modules, stored by the
/// images of the `a` free generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMap {
    source_rank: usize,
    target_rank: usize,
    n: usize,
    images: Vec<Vec<u8>>,
}

impl AlgebraMap {
    pub fn from_images(alg: &GroupAlgebra, target_rank: usize, images: Vec<Vec<u8>>) -> Result<AlgebraMap> {
        let len = target_rank * alg.dim();
        if let Some(bad) = images.iter().find(|v| v.len() != len) {
            return Err(Error::DimensionMismatch(format!("generator image of length {} (expected {len})", bad.len())));
        }
        Ok(AlgebraMap { source_rank: images.len(), target_rank, n: alg.dim(), images })
    }

    pub fn zero(alg: &GroupAlgebra, source_rank: usize, target_rank: usize) -> AlgebraMap {
        AlgebraMap { source_rank, target_rank, n: alg.dim(), images: vec![vec![0; target_rank * alg.dim()]; source_rank] }
    }

    pub fn identity(alg: &GroupAlgebra, rank: usize) -> AlgebraMap {
        let n = alg.dim();
        let images = (0..rank)
            .map(|j| {
                let mut v = vec![0u8; rank * n];
                v[j * n + PermGroup::IDENTITY] = 1;
                v
            })
            .collect();
        AlgebraMap { source_rank: rank, target_rank: rank, n, images }
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn image(&self, j: usize) -> &[u8] {
        &self.images[j]
    }

    pub fn images(&self) -> &[Vec<u8>] {
        &self.images
    }

    /// Entry `(i, j)`: the coefficient of target generator `i` in the image of source generator `j`.
    pub fn entry(&self, i: usize, j: usize) -> &[u8] {
        &self.images[j][i * self.n..(i + 1) * self.n]
    }

    pub fn apply(&self, alg: &GroupAlgebra, v: &[u8]) -> Vec<u8> {
        debug_assert_eq!(v.len(), self.source_rank * self.n);
        let mut out = vec![0u8; self.target_rank * self.n];
        for (j, coeff) in v.chunks(self.n).enumerate() {
            if coeff.iter().any(|&x| x != 0) {
                let t = alg.scalar_mul(coeff, &self.images[j]);
                axpy(&mut out, &t, 1, alg.prime());
            }
        }
        out
    }

    /// `other ∘ self`.
    pub fn then(&self, alg: &GroupAlgebra, other: &AlgebraMap) -> Result<AlgebraMap> {
        if other.source_rank != self.target_rank {
            return Err(Error::DimensionMismatch("composition of non-composable module maps".into()));
        }
        let images = self.images.iter().map(|v| other.apply(alg, v)).collect();
        AlgebraMap::from_images(alg, other.target_rank, images)
    }

    /// The F_p matrix of shape `(b·|G|) × (a·|G|)`; column `(j, g)` is `g·image_j`.
    pub fn expand(&self, alg: &GroupAlgebra) -> FpMatrix {
        let mut cols = Vec::with_capacity(self.source_rank * self.n);
        for img in &self.images {
            for g in 0..self.n {
                cols.push(alg.translate(g, img));
            }
        }
        FpMatrix::from_rows(alg.prime(), self.target_rank * self.n, &cols)
            .expect("columns have target length")
            .transpose()
    }

    /// True when every entry lies in the augmentation ideal.
    pub fn is_minimal(&self, alg: &GroupAlgebra) -> bool {
        self.images.iter().all(|v| alg.augment_blocks(v).iter().all(|&x| x == 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn augmentation_ideal_is_nilpotent_for_p_groups() {
        for name in ["z2", "z4", "klein4", "q8", "z3", "d8"] {
            let c = catalog::lookup(name).unwrap();
            let alg = GroupAlgebra::new(&c.group, c.prime);
            let n = alg.dim();
            // J spanned by g - e
            let p = alg.prime();
            let j: Vec<Vec<u8>> = (1..n)
                .map(|g| {
                    let mut v = alg.basis_element(g);
                    v[0] = p.neg(1);
                    v
                })
                .collect();
            let mut power = j.clone();
            let mut k = 1;
            while power.iter().any(|v| v.iter().any(|&x| x != 0)) {
                power = power.iter().flat_map(|a| j.iter().map(move |b| (a, b))).map(|(a, b)| alg.mul(a, b)).collect();
                let m = FpMatrix::from_rows(p, n, &power).unwrap();
                let basis = m.row_space();
                power = basis.basis().to_rows();
                k += 1;
                assert!(k <= n, "J is not nilpotent for {name}");
            }
        }
    }

    #[test]
    fn expansion_commutes_with_composition() {
        let c = catalog::lookup("klein4").unwrap();
        let alg = GroupAlgebra::new(&c.group, c.prime);
        let n = alg.dim();
        let f = AlgebraMap::from_images(&alg, 2, vec![vec![1, 1, 0, 0, 0, 1, 0, 1], vec![0, 0, 1, 1, 1, 0, 0, 0]]).unwrap();
        let g = AlgebraMap::from_images(&alg, 1, vec![vec![1, 0, 1, 0], vec![0, 1, 1, 1]]).unwrap();
        let gf = f.then(&alg, &g).unwrap();
        assert_eq!(gf.expand(&alg), g.expand(&alg).mul(&f.expand(&alg)).unwrap());
        assert_eq!(gf.expand(&alg).cols(), 2 * n);
        let id = AlgebraMap::identity(&alg, 2);
        assert_eq!(f.then(&alg, &id).unwrap(), f);
    }
}

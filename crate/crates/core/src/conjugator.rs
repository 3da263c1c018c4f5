//! Cayley embeddings and the constructive conjugator for injections `Q -> P`.
//!
//! Identify the underlying set of `P` with `{1..|P|}` through the element
//! list. Left translation embeds `P` in `Sym(|P|)`, and any injection
//! `phi: Q -> P` becomes conjugation by a permutation `g` matching the free
//! `Q`-orbits of the two translation actions (through the inclusion of `Q`
//! and through `phi`).

use crate::error::{Error, Result};
use crate::group::{GroupHom, PermGroup};
use crate::perm::Perm;

/// Left-regular embedding of a group into `Sym(|P|)`.
#[derive(Clone, Debug)]
pub struct CayleyEmbedding {
    group: PermGroup,
    image: PermGroup,
    hom: GroupHom,
}

impl CayleyEmbedding {
    pub fn new(group: &PermGroup) -> Result<CayleyEmbedding> {
        let n = group.order();
        let gens: Vec<Perm> = group.generator_indices().into_iter().map(|s| translation(group, s)).collect();
        let image = PermGroup::close_generators_capped(n, gens.clone(), n.max(1))?;
        let hom = GroupHom::new(group.clone(), image.clone(), gens)?;
        Ok(CayleyEmbedding { group: group.clone(), image, hom })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    /// The regular subgroup of `Sym(|P|)`.
    pub fn image(&self) -> &PermGroup {
        &self.image
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    /// Translation by element `i` of the group.
    pub fn translation(&self, i: usize) -> Perm {
        translation(&self.group, i)
    }

    /// Injective, with a regular (free and transitive) image.
    pub fn is_regular(&self) -> bool {
        let n = self.group.order();
        if !self.hom.is_injective() || self.image.order() != n {
            return false;
        }
        // free: only the identity fixes a point; transitive: point 0 reaches all points
        let free = (1..n).all(|i| (0..n).all(|x| self.translation(i).apply(x) != x));
        let mut reached = vec![false; n];
        for i in 0..n {
            reached[self.translation(i).apply(0)] = true;
        }
        free && reached.into_iter().all(|r| r)
    }
}

fn translation(group: &PermGroup, i: usize) -> Perm {
    Perm::from_images_unchecked((0..group.order()).map(|x| group.mul(i, x) as u32).collect())
}

pub fn cayley_embedding(group: &PermGroup) -> Result<CayleyEmbedding> {
    CayleyEmbedding::new(group)
}

/// A permutation `g` with `g ∘ λ(q) ∘ g⁻¹ = λ(φ(q))` for every `q ∈ Q`.
#[derive(Clone, Debug)]
pub struct ConjugatorWitness {
    pub hom: GroupHom,
    pub inclusion: GroupHom,
    pub conjugator: Perm,
    pub embedding: CayleyEmbedding,
}

impl ConjugatorWitness {
    /// Exhaustive check over all elements of `Q`.
    pub fn verify(&self) -> bool {
        let g = &self.conjugator;
        let g_inv = g.inverse();
        let q = self.hom.domain();
        (0..q.order()).all(|i| {
            let lhs = g.compose(&self.embedding.translation(self.inclusion.apply_index(i))).compose(&g_inv);
            lhs == self.embedding.translation(self.hom.apply_index(i))
        })
    }
}

/// Constructs the conjugator for an injection whose domain is a subgroup of
/// its codomain (same degree, elements contained).
pub fn find_conjugator(phi: &GroupHom) -> Result<ConjugatorWitness> {
    let inclusion = GroupHom::inclusion(phi.domain(), phi.codomain())
        .map_err(|_| Error::InvalidHomomorphism("domain is not a subgroup of the ambient group".into()))?;
    find_conjugator_with_inclusion(phi, &inclusion)
}

/// Constructs the conjugator given an explicit inclusion `Q -> P`.
pub fn find_conjugator_with_inclusion(phi: &GroupHom, inclusion: &GroupHom) -> Result<ConjugatorWitness> {
    if !phi.is_injective() {
        return Err(Error::InvalidHomomorphism("homomorphism is not injective".into()));
    }
    if !inclusion.is_injective() {
        return Err(Error::InvalidHomomorphism("inclusion is not injective".into()));
    }
    if inclusion.domain() != phi.domain() || inclusion.codomain() != phi.codomain() {
        return Err(Error::InvalidHomomorphism("inclusion and homomorphism have different ambient groups".into()));
    }
    let p = phi.codomain();
    let q = phi.domain();
    let n = p.order();

    // Orbit decomposition of X = P under Q acting by left translation
    // through the given map; representatives are least indices.
    let orbits = |map: &GroupHom| -> Vec<usize> {
        let mut assigned = vec![false; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if assigned[x] {
                continue;
            }
            reps.push(x);
            for qi in 0..q.order() {
                assigned[p.mul(map.apply_index(qi), x)] = true;
            }
        }
        reps
    };
    let source_reps = orbits(inclusion);
    let target_reps = orbits(phi);
    if source_reps.len() != target_reps.len() {
        return Err(Error::Consistency("orbit counts differ for an injective map".into()));
    }

    // g(q·r_j) = φ(q)·s_j
    let mut images = vec![u32::MAX; n];
    for (&r, &s) in source_reps.iter().zip(&target_reps) {
        for qi in 0..q.order() {
            let x = p.mul(inclusion.apply_index(qi), r);
            images[x] = p.mul(phi.apply_index(qi), s) as u32;
        }
    }
    let conjugator = Perm::from_images(images)?;
    let witness = ConjugatorWitness {
        hom: phi.clone(),
        inclusion: inclusion.clone(),
        conjugator,
        embedding: CayleyEmbedding::new(p)?,
    };
    if !witness.verify() {
        return Err(Error::Consistency("constructed conjugator fails its defining identity".into()));
    }
    Ok(witness)
}

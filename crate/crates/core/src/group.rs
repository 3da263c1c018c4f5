//! Finite permutation groups carried with their complete element lists.
//!
//! At desk scale (orders up to a few hundred for the algebraic work, up to
//! the closure cap for plain enumeration) every question is answered by
//! brute force over the element list.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Default cap on the order of a group produced by closure.
pub const DEFAULT_ORDER_CAP: usize = 20_160;

/// Largest order for which subgroup and injection enumeration is supported.
pub const ENUMERATION_CAP: usize = 64;

const TABLE_LIMIT: usize = 512;

struct Inner {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    /// `parent[i] = Some((j, g))` means `elements[i] = elements[j] ∘ generators[g]`.
    parent: Vec<Option<(usize, usize)>>,
    table: Vec<u32>,
    inverses: Vec<usize>,
}

/// A finite permutation group with its complete element list.
///
/// Element 0 is always the identity. The element order is the breadth-first
/// order in which right multiplication by the generators discovers elements,
/// so it is fully determined by the generator list.
#[derive(Clone)]
pub struct PermGroup(Arc<Inner>);

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators().iter().map(|g| g.to_string()).collect();
        write!(f, "PermGroup(order {}, degree {}, gens [{}])", self.order(), self.degree(), gens.join(", "))
    }
}

impl PartialEq for PermGroup {
    /// Groups are equal when they have the same degree and element set.
    fn eq(&self, other: &Self) -> bool {
        self.degree() == other.degree()
            && self.order() == other.order()
            && self.elements().iter().all(|e| other.contains(e))
    }
}

impl Eq for PermGroup {}

impl PermGroup {
    /// Closes `gens` under composition with the default order cap.
    pub fn close_generators(degree: usize, gens: Vec<Perm>) -> Result<PermGroup> {
        PermGroup::close_generators_capped(degree, gens, DEFAULT_ORDER_CAP)
    }

    pub fn close_generators_capped(degree: usize, gens: Vec<Perm>, cap: usize) -> Result<PermGroup> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::InvalidPermutation {
                    text: g.to_string(),
                    reason: format!("degree {} where {degree} was expected", g.degree()),
                });
            }
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut parent = vec![None];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (gi, g) in gens.iter().enumerate() {
                let y = elements[i].compose(g);
                if index.contains_key(&y) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(Error::OrderCapExceeded { cap });
                }
                index.insert(y.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(y);
                parent.push(Some((i, gi)));
            }
        }
        let n = elements.len();
        let inverses = elements.iter().map(|e| index[&e.inverse()]).collect();
        let table = if n <= TABLE_LIMIT {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(index[&a.compose(b)] as u32);
                }
            }
            t
        } else {
            Vec::new()
        };
        Ok(PermGroup(Arc::new(Inner { degree, generators: gens, elements, index, parent, table, inverses })))
    }

    /// Parses generators in cycle notation and closes them.
    pub fn from_cycle_strings<S: AsRef<str>>(degree: usize, gens: &[S]) -> Result<PermGroup> {
        let perms = gens.iter().map(|s| Perm::parse(s.as_ref(), degree)).collect::<Result<Vec<_>>>()?;
        PermGroup::close_generators(degree, perms)
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::close_generators(degree, Vec::new()).expect("trivial group")
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn order(&self) -> usize {
        self.0.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.0.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.0.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.0.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.0.index.get(p).copied()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.0.index.contains_key(p)
    }

    pub const IDENTITY: usize = 0;

    /// Index of `elements[a] ∘ elements[b]`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let n = self.order();
        if !self.0.table.is_empty() {
            return self.0.table[a * n + b] as usize;
        }
        self.0.index[&self.0.elements[a].compose(&self.0.elements[b])]
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.0.inverses[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != Self::IDENTITY {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Generator indices whose left-to-right product is element `i`.
    pub fn word(&self, i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        let mut cur = i;
        while let Some((p, g)) = self.0.parent[cur] {
            w.push(g);
            cur = p;
        }
        w.reverse();
        w
    }

    /// Index of the product of generators along `word`.
    pub fn evaluate_word(&self, word: &[usize]) -> usize {
        let gens: Vec<usize> = self.generator_indices();
        word.iter().fold(Self::IDENTITY, |acc, &g| self.mul(acc, gens[g]))
    }

    pub fn generator_indices(&self) -> Vec<usize> {
        self.generators().iter().map(|g| self.index_of(g).expect("generators lie in the group")).collect()
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generator_indices();
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// True when the order is a power of `p` (the trivial group included).
    pub fn is_p_group(&self, p: u32) -> bool {
        let mut n = self.order();
        while n.is_multiple_of(p as usize) {
            n /= p as usize;
        }
        n == 1
    }

    /// The smallest prime dividing the order, if the group is nontrivial.
    pub fn smallest_prime_divisor(&self) -> Option<u32> {
        let n = self.order() as u32;
        (2..=n).find(|&d| n.is_multiple_of(d))
    }

    /// True if every element of `other` lies in this group.
    pub fn contains_group(&self, other: &PermGroup) -> bool {
        other.degree() == self.degree() && other.elements().iter().all(|e| self.contains(e))
    }

    /// Exhaustive check of closure under composition and inversion.
    pub fn verify_closure(&self) -> bool {
        let els = self.elements();
        els.iter().all(|a| self.contains(&a.inverse()) && els.iter().all(|b| self.contains(&a.compose(b))))
    }

    /// Bitmask of element indices, for groups of order at most 64.
    fn mask_of(&self, idx: impl IntoIterator<Item = usize>) -> u64 {
        idx.into_iter().fold(0u64, |m, i| m | (1 << i))
    }

    fn close_mask(&self, mut mask: u64) -> u64 {
        // Finite sets closed under multiplication are subgroups.
        loop {
            let members: Vec<usize> = (0..self.order()).filter(|&i| mask >> i & 1 == 1).collect();
            let mut grown = mask;
            for &a in &members {
                for &b in &members {
                    grown |= 1 << self.mul(a, b);
                }
            }
            if grown == mask {
                return mask;
            }
            mask = grown;
        }
    }

    /// Every subgroup exactly once, sorted by order then by element indices.
    /// The full group is last and the trivial group first.
    pub fn subgroups(&self) -> Result<Vec<PermGroup>> {
        if self.order() > ENUMERATION_CAP {
            return Err(Error::OrderCapExceeded { cap: ENUMERATION_CAP });
        }
        let trivial = self.mask_of([Self::IDENTITY]);
        let mut found: HashMap<u64, Vec<usize>> = HashMap::from([(trivial, Vec::new())]);
        let mut queue = VecDeque::from([trivial]);
        while let Some(h) = queue.pop_front() {
            for g in 0..self.order() {
                if h >> g & 1 == 1 {
                    continue;
                }
                let k = self.close_mask(h | 1 << g);
                if !found.contains_key(&k) {
                    let mut gens = found[&h].clone();
                    gens.push(g);
                    found.insert(k, gens);
                    queue.push_back(k);
                }
            }
        }
        let mut subs: Vec<(Vec<usize>, Vec<usize>)> = found
            .into_iter()
            .map(|(mask, gens)| ((0..self.order()).filter(|&i| mask >> i & 1 == 1).collect(), gens))
            .collect();
        subs.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        subs.into_iter()
            .map(|(_, gens)| {
                let perms = gens.iter().map(|&g| self.element(g).clone()).collect();
                PermGroup::close_generators(self.degree(), perms)
            })
            .collect()
    }

    /// The subgroup generated by the given elements of this group.
    pub fn subgroup_generated_by(&self, gens: Vec<Perm>) -> Result<PermGroup> {
        for g in &gens {
            if !self.contains(g) {
                return Err(Error::InvalidHomomorphism(format!("{g} is not an element of the group")));
            }
        }
        PermGroup::close_generators(self.degree(), gens)
    }
}

/// A homomorphism between permutation groups, given by generator images
/// and carried with its full element map.
#[derive(Clone)]
pub struct GroupHom {
    domain: PermGroup,
    codomain: PermGroup,
    generator_images: Vec<Perm>,
    map: Vec<usize>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> = self.generator_images.iter().map(|g| g.to_string()).collect();
        write!(f, "GroupHom(|Q|={} -> |P|={}, images [{}])", self.domain.order(), self.codomain.order(), imgs.join(", "))
    }
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.codomain == other.codomain
            && self.domain.elements().iter().all(|e| self.apply(e) == other.apply(e))
    }
}

impl GroupHom {
    /// Builds the homomorphism sending the i-th generator of `domain` to
    /// `images[i]`, failing if the assignment does not extend.
    pub fn new(domain: PermGroup, codomain: PermGroup, images: Vec<Perm>) -> Result<GroupHom> {
        if images.len() != domain.generators().len() {
            return Err(Error::InvalidHomomorphism(format!(
                "{} images for {} generators",
                images.len(),
                domain.generators().len()
            )));
        }
        let img_idx = images
            .iter()
            .map(|p| {
                codomain
                    .index_of(p)
                    .ok_or_else(|| Error::InvalidHomomorphism(format!("image {p} is not in the codomain")))
            })
            .collect::<Result<Vec<_>>>()?;
        let map = extend_generator_map(&domain, &codomain, &img_idx)
            .ok_or_else(|| Error::InvalidHomomorphism("generator images do not extend to a homomorphism".into()))?;
        Ok(GroupHom { domain, codomain, generator_images: images, map })
    }

    pub fn identity(g: &PermGroup) -> GroupHom {
        GroupHom::new(g.clone(), g.clone(), g.generators().to_vec()).expect("identity is a homomorphism")
    }

    /// The inclusion of a subgroup (same degree, contained elements).
    pub fn inclusion(sub: &PermGroup, sup: &PermGroup) -> Result<GroupHom> {
        if !sup.contains_group(sub) {
            return Err(Error::InvalidHomomorphism("domain is not a subgroup of the codomain".into()));
        }
        GroupHom::new(sub.clone(), sup.clone(), sub.generators().to_vec())
    }

    pub fn domain(&self) -> &PermGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &PermGroup {
        &self.codomain
    }

    pub fn generator_images(&self) -> &[Perm] {
        &self.generator_images
    }

    /// `map[i]` is the codomain index of the image of domain element `i`.
    pub fn element_map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply_index(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn apply(&self, p: &Perm) -> Option<&Perm> {
        self.domain.index_of(p).map(|i| self.codomain.element(self.map[i]))
    }

    pub fn is_injective(&self) -> bool {
        let set: HashSet<usize> = self.map.iter().copied().collect();
        set.len() == self.map.len()
    }

    /// Exhaustive multiplicativity check of the element map.
    pub fn verify(&self) -> bool {
        let n = self.domain.order();
        (0..n).all(|a| (0..n).all(|b| self.map[self.domain.mul(a, b)] == self.codomain.mul(self.map[a], self.map[b])))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom> {
        if inner.codomain != self.domain {
            return Err(Error::InvalidHomomorphism("composition of non-composable homomorphisms".into()));
        }
        let images = inner
            .generator_images
            .iter()
            .map(|g| self.apply(g).expect("image lies in the domain").clone())
            .collect();
        GroupHom::new(inner.domain.clone(), self.codomain.clone(), images)
    }

    /// Reinterprets the codomain as the larger group `sup` containing it.
    pub fn widen_codomain(&self, sup: &PermGroup) -> Result<GroupHom> {
        GroupHom::new(self.domain.clone(), sup.clone(), self.generator_images.clone())
    }
}

fn extend_generator_map(domain: &PermGroup, codomain: &PermGroup, img: &[usize]) -> Option<Vec<usize>> {
    let n = domain.order();
    let mut map = vec![usize::MAX; n];
    map[PermGroup::IDENTITY] = PermGroup::IDENTITY;
    for i in 1..n {
        let (parent, g) = domain.0.parent[i].expect("non-identity elements have parents");
        map[i] = codomain.mul(map[parent], img[g]);
    }
    let gens = domain.generator_indices();
    for i in 0..n {
        for (g, &gi) in gens.iter().enumerate() {
            if map[domain.mul(i, gi)] != codomain.mul(map[i], img[g]) {
                return None;
            }
        }
    }
    Some(map)
}

/// All injective homomorphisms `q -> p`, one per distinct element map.
pub fn injections(q: &PermGroup, p: &PermGroup) -> Result<Vec<GroupHom>> {
    if q.order() > ENUMERATION_CAP || p.order() > ENUMERATION_CAP {
        return Err(Error::OrderCapExceeded { cap: ENUMERATION_CAP });
    }
    if q.order() > p.order() || !p.order().is_multiple_of(q.order()) {
        return Ok(Vec::new());
    }
    let gens = q.generator_indices();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let ord = q.element_order(g);
            (0..p.order()).filter(|&x| p.element_order(x) == ord).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(out);
    }
    loop {
        let img: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(map) = extend_generator_map(q, p, &img) {
            let distinct: HashSet<usize> = map.iter().copied().collect();
            if distinct.len() == map.len() {
                let images = img.iter().map(|&i| p.element(i).clone()).collect();
                out.push(GroupHom { domain: q.clone(), codomain: p.clone(), generator_images: images, map });
            }
        }
        // odometer
        let mut k = choice.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// All automorphisms of `g`.
pub fn automorphisms(g: &PermGroup) -> Result<Vec<GroupHom>> {
    injections(g, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein() -> PermGroup {
        PermGroup::from_cycle_strings(4, &["(1 2)(3 4)", "(1 3)(2 4)"]).unwrap()
    }

    #[test]
    fn closure_examples() {
        let c4 = PermGroup::from_cycle_strings(4, &["(1 2 3 4)"]).unwrap();
        assert_eq!(c4.order(), 4);
        assert!(c4.is_abelian());
        assert_eq!(klein().order(), 4);
        assert!(klein().verify_closure());
        let s4 = PermGroup::from_cycle_strings(4, &["(1 2 3 4)", "(1 2)"]).unwrap();
        assert_eq!(s4.order(), 24);
        assert!(!s4.is_p_group(2));
    }

    #[test]
    fn order_cap_is_enforced() {
        let s8 = PermGroup::from_cycle_strings(8, &["(1 2 3 4 5 6 7 8)", "(1 2)"]);
        assert!(matches!(s8, Err(Error::OrderCapExceeded { cap: DEFAULT_ORDER_CAP })));
        let err = PermGroup::close_generators(4, vec![Perm::identity(3)]);
        assert!(matches!(err, Err(Error::InvalidPermutation { .. })));
    }

    #[test]
    fn words_evaluate_to_elements() {
        let g = klein();
        for i in 0..g.order() {
            assert_eq!(g.evaluate_word(&g.word(i)), i);
        }
        // breadth-first order e, a, b, ab
        assert_eq!(g.word(3), vec![0, 1]);
    }

    #[test]
    fn subgroup_counts() {
        let c4 = PermGroup::from_cycle_strings(4, &["(1 2 3 4)"]).unwrap();
        assert_eq!(c4.subgroups().unwrap().len(), 3);
        let subs = klein().subgroups().unwrap();
        assert_eq!(subs.len(), 5);
        assert_eq!(subs[0].order(), 1);
        assert_eq!(subs.last().unwrap().order(), 4);
    }

    #[test]
    fn injection_counts() {
        let c4 = PermGroup::from_cycle_strings(4, &["(1 2 3 4)"]).unwrap();
        let c2 = PermGroup::from_cycle_strings(2, &["(1 2)"]).unwrap();
        assert_eq!(injections(&c2, &c4).unwrap().len(), 1);
        assert_eq!(injections(&klein(), &klein()).unwrap().len(), 6);
        assert_eq!(injections(&c2, &klein()).unwrap().len(), 3);
        assert_eq!(injections(&klein(), &c4).unwrap().len(), 0);
        for h in injections(&klein(), &klein()).unwrap() {
            assert!(h.verify() && h.is_injective());
        }
    }

    #[test]
    fn bad_generator_images_are_rejected() {
        let c4 = PermGroup::from_cycle_strings(4, &["(1 2 3 4)"]).unwrap();
        let k = klein();
        let four_cycle = c4.element(1).clone();
        let h = GroupHom::new(k.clone(), c4.clone(), vec![four_cycle.clone(), four_cycle]);
        assert!(h.is_err(), "an involution cannot map to an element of order 4");
        let collapse = GroupHom::new(c4.clone(), k.clone(), vec![k.element(1).clone()]).unwrap();
        assert!(collapse.verify());
        assert!(!collapse.is_injective());
    }

    #[test]
    fn composition_of_homs() {
        let k = klein();
        let auts = automorphisms(&k).unwrap();
        for a in &auts {
            for b in &auts {
                let c = a.compose(b).unwrap();
                assert!(c.verify());
                for e in k.elements() {
                    assert_eq!(c.apply(e), a.apply(b.apply(e).unwrap()));
                }
            }
        }
    }
}

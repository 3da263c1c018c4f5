//! Presentations of the graph-of-groups group attached to a category, and
//! its finite quotient into the symmetric group on the ambient group.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::category::{require_valid, CategorySpec, Mode};
use crate::conjugator::{find_conjugator_with_inclusion, CayleyEmbedding};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    fn inv(self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }
}

pub type Word = Vec<Letter>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<Word>,
}

fn invert(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inv()).collect()
}

fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn cyclic_reduce(w: &[Letter]) -> Word {
    let mut w = free_reduce(w);
    while w.len() >= 2 && w[0] == w[w.len() - 1].inv() {
        w.pop();
        w.remove(0);
    }
    w
}

/// Least rotation of `w` or of its inverse; identifies cyclic conjugates.
fn cyclic_key(w: &[Letter]) -> Word {
    let mut best: Option<Word> = None;
    for cand in [w.to_vec(), invert(w)] {
        for r in 0..cand.len().max(1) {
            let mut rot = cand[r..].to_vec();
            rot.extend_from_slice(&cand[..r]);
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// Multiplication-table relators `w_x · s · w_{xs}^{-1}` of `g`, reduced and
/// without cyclic duplicates. `offset` shifts generator numbers.
fn table_relators(g: &PermGroup, offset: usize) -> Vec<Word> {
    let gens = g.generator_indices();
    let word = |i: usize| -> Word {
        g.word(i).into_iter().map(|k| Letter { generator: k + offset, inverse: false }).collect()
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for x in 0..g.order() {
        for (k, &s) in gens.iter().enumerate() {
            let mut w = word(x);
            w.push(Letter { generator: k + offset, inverse: false });
            w.extend(invert(&word(g.mul(x, s))));
            let w = cyclic_reduce(&w);
            if !w.is_empty() && seen.insert(cyclic_key(&w)) {
                out.push(w);
            }
        }
    }
    out
}

fn letter_names(count: usize, prefix: &str) -> Vec<String> {
    (0..count)
        .map(|j| match (prefix.is_empty(), j < 19) {
            (true, true) => ((b'a' + j as u8) as char).to_string(),
            (true, false) => format!("g{}", j + 1),
            (false, _) => format!("{prefix}_{}", if j < 19 { ((b'a' + j as u8) as char).to_string() } else { format!("g{}", j + 1) }),
        })
        .collect()
}

/// Presentation of the graph-of-groups group of a category.
///
/// Subgroup mode: one vertex `P`, one stable letter per morphism. Abstract
/// mode: one vertex per object; a spanning tree of morphisms becomes
/// amalgamation relations, every other morphism gets a stable letter.
pub fn gamma_presentation(spec: &CategorySpec) -> Result<Presentation> {
    match spec.mode() {
        Mode::Subgroup => {
            require_valid(spec)?;
            let p = &spec.objects()[0].group;
            let np = p.generators().len();
            let mut generators = letter_names(np, "");
            let mut relations = table_relators(p, 0);
            let pword = |i: usize| -> Word {
                p.word(i).into_iter().map(|k| Letter { generator: k, inverse: false }).collect()
            };
            for (i, m) in spec.morphisms().iter().enumerate() {
                let t = generators.len();
                generators.push(format!("t{}", i + 1));
                let into_p = spec.into_ambient(m)?;
                let incl = spec.inclusion(m.source)?;
                for q in m.hom.domain().generator_indices() {
                    let mut w = vec![Letter { generator: t, inverse: false }];
                    w.extend(pword(incl.apply_index(q)));
                    w.push(Letter { generator: t, inverse: true });
                    w.extend(invert(&pword(into_p.apply_index(q))));
                    relations.push(w);
                }
            }
            Ok(Presentation { generators, relations })
        }
        Mode::Abstract => {
            if !spec.is_connected() {
                return Err(Error::InvalidCategory("the graph of groups needs a connected category".into()));
            }
            let objects = spec.objects();
            let mut generators = Vec::new();
            let mut offsets = Vec::new();
            let mut relations = Vec::new();
            for o in objects {
                offsets.push(generators.len());
                relations.extend(table_relators(&o.group, generators.len()));
                generators.extend(letter_names(o.group.generators().len(), &o.name));
            }
            let word = |obj: usize, i: usize| -> Word {
                objects[obj].group.word(i).into_iter().map(|k| Letter { generator: k + offsets[obj], inverse: false }).collect()
            };
            // spanning tree in morphism order
            let mut in_tree = vec![false; objects.len()];
            in_tree[0] = true;
            let mut tree_edge = vec![false; spec.morphisms().len()];
            let mut grew = true;
            while grew {
                grew = false;
                for (k, m) in spec.morphisms().iter().enumerate() {
                    if !tree_edge[k] && in_tree[m.source] != in_tree[m.target] {
                        tree_edge[k] = true;
                        in_tree[m.source] = true;
                        in_tree[m.target] = true;
                        grew = true;
                    }
                }
            }
            let mut letters = 0;
            for (k, m) in spec.morphisms().iter().enumerate() {
                let stable = (!tree_edge[k]).then(|| {
                    letters += 1;
                    generators.push(format!("t{letters}"));
                    generators.len() - 1
                });
                for q in m.hom.domain().generator_indices() {
                    let mut w = Vec::new();
                    if let Some(t) = stable {
                        w.push(Letter { generator: t, inverse: false });
                    }
                    w.extend(word(m.source, q));
                    if let Some(t) = stable {
                        w.push(Letter { generator: t, inverse: true });
                    }
                    w.extend(invert(&word(m.target, m.hom.apply_index(q))));
                    relations.push(w);
                }
            }
            Ok(Presentation { generators, relations })
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.generators {
            writeln!(f, "gen {g}")?;
        }
        for r in &self.relations {
            let letters: Vec<String> = r
                .iter()
                .map(|l| format!("{}{}", self.generators[l.generator], if l.inverse { "'" } else { "" }))
                .collect();
            writeln!(f, "rel {}", letters.join(" "))?;
        }
        Ok(())
    }
}

impl Presentation {
    pub fn parse(text: &str) -> Result<Presentation> {
        let mut generators: Vec<String> = Vec::new();
        let mut relations = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (kind, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match kind {
                "gen" => {
                    let name = rest.trim();
                    if name.is_empty() || name.contains(char::is_whitespace) || name.ends_with('\'') {
                        return Err(Error::Parse(format!("line {}: bad generator name {name:?}", ln + 1)));
                    }
                    if generators.iter().any(|g| g == name) {
                        return Err(Error::Parse(format!("line {}: duplicate generator {name}", ln + 1)));
                    }
                    generators.push(name.to_string());
                }
                "rel" => {
                    let word = rest
                        .split_whitespace()
                        .map(|tok| {
                            let (name, inverse) = match tok.strip_suffix('\'') {
                                Some(n) => (n, true),
                                None => (tok, false),
                            };
                            generators
                                .iter()
                                .position(|g| g == name)
                                .map(|generator| Letter { generator, inverse })
                                .ok_or_else(|| Error::Parse(format!("line {}: unknown generator {name}", ln + 1)))
                        })
                        .collect::<Result<Word>>()?;
                    relations.push(word);
                }
                other => return Err(Error::Parse(format!("line {}: unknown directive {other:?}", ln + 1))),
            }
        }
        Ok(Presentation { generators, relations })
    }

    pub fn evaluate(&self, word: &[Letter], images: &[Perm]) -> Perm {
        let degree = images.first().map_or(0, Perm::degree);
        word.iter().fold(Perm::identity(degree), |acc, l| {
            let g = &images[l.generator];
            acc.compose(&if l.inverse { g.inverse() } else { g.clone() })
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorImage {
    pub generator: String,
    pub image: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiniteQuotientReport {
    pub degree: usize,
    pub images: Vec<GeneratorImage>,
    pub relations: usize,
    pub relations_verified: bool,
    pub conjugators_verified: bool,
    pub injective_on_p: bool,
    /// `None` when the closure exceeded `order_cap`.
    pub image_order: Option<usize>,
    pub order_cap: usize,
    /// `|P|!` as a decimal string.
    pub bound: String,
    pub divides_bound: Option<bool>,
}

impl FiniteQuotientReport {
    pub fn all_verified(&self) -> bool {
        self.relations_verified && self.conjugators_verified && self.injective_on_p && self.divides_bound != Some(false)
    }
}

pub const DEFAULT_QUOTIENT_CAP: usize = 1_000_000;

fn factorial_string(n: usize) -> String {
    let mut digits = vec![1u32];
    for k in 2..=n as u32 {
        let mut carry = 0;
        for d in digits.iter_mut() {
            let v = *d * k + carry;
            *d = v % 10;
            carry = v / 10;
        }
        while carry > 0 {
            digits.push(carry % 10);
            carry /= 10;
        }
    }
    digits.iter().rev().map(|d| char::from(b'0' + *d as u8)).collect()
}

fn divides_factorial(order: usize, n: usize) -> bool {
    let mut rest = order;
    for k in 2..=n {
        let g = gcd(rest, k);
        rest /= g;
    }
    rest == 1
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Maps the presentation into `Sym(|P|)`: Cayley images for `P`, conjugators
/// for the stable letters. Subgroup mode only.
pub fn finite_quotient(spec: &CategorySpec, order_cap: usize) -> Result<FiniteQuotientReport> {
    if spec.mode() != Mode::Subgroup {
        return Err(Error::InvalidCategory("the finite quotient is built in subgroup mode".into()));
    }
    let pres = gamma_presentation(spec)?;
    let p = &spec.objects()[0].group;
    let cayley = CayleyEmbedding::new(p)?;
    let mut images: Vec<Perm> = p.generator_indices().into_iter().map(|s| cayley.translation(s)).collect();
    let witnesses = spec
        .morphisms()
        .par_iter()
        .map(|m| find_conjugator_with_inclusion(&spec.into_ambient(m)?, &spec.inclusion(m.source)?))
        .collect::<Result<Vec<_>>>()?;
    let conjugators_verified = witnesses.iter().all(|w| w.verify());
    images.extend(witnesses.into_iter().map(|w| w.conjugator));

    let identity = Perm::identity(p.order());
    let relations_verified = pres.relations.par_iter().all(|r| pres.evaluate(r, &images) == identity);
    let injective_on_p = cayley.hom().is_injective() && cayley.image().order() == p.order();

    let image_order = match PermGroup::close_generators_capped(p.order(), images.clone(), order_cap) {
        Ok(g) => Some(g.order()),
        Err(Error::OrderCapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let report = FiniteQuotientReport {
        degree: p.order(),
        images: pres
            .generators
            .iter()
            .zip(&images)
            .map(|(g, im)| GeneratorImage { generator: g.clone(), image: im.to_string() })
            .collect(),
        relations: pres.relations.len(),
        relations_verified,
        conjugators_verified,
        injective_on_p,
        image_order,
        order_cap,
        bound: factorial_string(p.order()),
        divides_bound: image_order.map(|o| divides_factorial(o, p.order()) && o % p.order() == 0),
    };
    if !report.all_verified() {
        return Err(Error::Consistency("finite quotient failed verification".into()));
    }
    Ok(report)
}

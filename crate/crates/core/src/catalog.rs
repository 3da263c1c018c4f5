//! Built-in small p-groups, all realized as regular permutation groups.

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::linalg::Prime;
use crate::perm::Perm;

/// Letters used to name catalog generators, in generator order.
pub const GENERATOR_LETTERS: [char; 4] = ['a', 'b', 'c', 'd'];

#[derive(Clone, Debug)]
pub struct CatalogGroup {
    pub name: &'static str,
    pub description: &'static str,
    pub group: PermGroup,
    pub prime: Prime,
}

impl CatalogGroup {
    pub fn generator_names(&self) -> Vec<String> {
        GENERATOR_LETTERS[..self.group.generators().len()].iter().map(|c| c.to_string()).collect()
    }
}

struct Entry {
    name: &'static str,
    aliases: &'static [&'static str],
    description: &'static str,
    prime: u32,
    degree: usize,
    generators: &'static [&'static str],
}

const ENTRIES: &[Entry] = &[
    Entry { name: "z2", aliases: &["c2"], description: "cyclic group of order 2", prime: 2, degree: 2, generators: &["(1 2)"] },
    Entry { name: "z4", aliases: &["c4"], description: "cyclic group of order 4", prime: 2, degree: 4, generators: &["(1 2 3 4)"] },
    Entry { name: "z8", aliases: &["c8"], description: "cyclic group of order 8", prime: 2, degree: 8, generators: &["(1 2 3 4 5 6 7 8)"] },
    Entry {
        name: "z16",
        aliases: &["c16"],
        description: "cyclic group of order 16",
        prime: 2,
        degree: 16,
        generators: &["(1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16)"],
    },
    Entry { name: "z3", aliases: &["c3"], description: "cyclic group of order 3", prime: 3, degree: 3, generators: &["(1 2 3)"] },
    Entry { name: "z9", aliases: &["c9"], description: "cyclic group of order 9", prime: 3, degree: 9, generators: &["(1 2 3 4 5 6 7 8 9)"] },
    Entry { name: "z5", aliases: &["c5"], description: "cyclic group of order 5", prime: 5, degree: 5, generators: &["(1 2 3 4 5)"] },
    Entry { name: "z7", aliases: &["c7"], description: "cyclic group of order 7", prime: 7, degree: 7, generators: &["(1 2 3 4 5 6 7)"] },
    Entry {
        name: "klein4",
        aliases: &["z2^2", "v4"],
        description: "elementary abelian group of order 4",
        prime: 2,
        degree: 4,
        generators: &["(1 2)", "(3 4)"],
    },
    Entry {
        name: "z2^3",
        aliases: &["e8"],
        description: "elementary abelian group of order 8",
        prime: 2,
        degree: 6,
        generators: &["(1 2)", "(3 4)", "(5 6)"],
    },
    Entry {
        name: "z2^4",
        aliases: &["e16"],
        description: "elementary abelian group of order 16",
        prime: 2,
        degree: 8,
        generators: &["(1 2)", "(3 4)", "(5 6)", "(7 8)"],
    },
    Entry {
        name: "z3^2",
        aliases: &["e9"],
        description: "elementary abelian group of order 9",
        prime: 3,
        degree: 6,
        generators: &["(1 2 3)", "(4 5 6)"],
    },
    Entry { name: "d8", aliases: &["dihedral8"], description: "dihedral group of order 8", prime: 2, degree: 4, generators: &["(1 2 3 4)", "(1 3)"] },
    Entry {
        name: "q8",
        aliases: &["quaternion8"],
        description: "quaternion group of order 8",
        prime: 2,
        degree: 8,
        generators: &["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"],
    },
    Entry {
        name: "z4xz2",
        aliases: &["c4xc2"],
        description: "direct product of cyclic groups of orders 4 and 2",
        prime: 2,
        degree: 6,
        generators: &["(1 2 3 4)", "(5 6)"],
    },
];

/// The left regular representation of `g`, keeping generator correspondence.
pub fn regular_representation(g: &PermGroup) -> Result<PermGroup> {
    let n = g.order();
    let gens = g
        .generator_indices()
        .into_iter()
        .map(|s| Perm::from_images((0..n).map(|i| g.mul(s, i) as u32).collect()))
        .collect::<Result<Vec<_>>>()?;
    PermGroup::close_generators(n, gens)
}

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

pub fn lookup(name: &str) -> Result<CatalogGroup> {
    let key = name.trim().to_ascii_lowercase();
    let entry = ENTRIES
        .iter()
        .find(|e| e.name == key || e.aliases.contains(&key.as_str()))
        .ok_or_else(|| Error::Unknown { kind: "group", name: name.to_string() })?;
    let faithful = PermGroup::from_cycle_strings(entry.degree, entry.generators)?;
    let group = regular_representation(&faithful)?;
    Ok(CatalogGroup { name: entry.name, description: entry.description, group, prime: Prime::new(entry.prime)? })
}

/// All catalog groups, in catalog order.
pub fn all() -> Vec<CatalogGroup> {
    names().into_iter().map(|n| lookup(n).expect("catalog entries are valid")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders_and_primes() {
        let expected = [
            ("z2", 2),
            ("z4", 4),
            ("z8", 8),
            ("z16", 16),
            ("z3", 3),
            ("z9", 9),
            ("z5", 5),
            ("z7", 7),
            ("klein4", 4),
            ("z2^3", 8),
            ("z2^4", 16),
            ("z3^2", 9),
            ("d8", 8),
            ("q8", 8),
            ("z4xz2", 8),
        ];
        for (name, order) in expected {
            let g = lookup(name).unwrap();
            assert_eq!(g.group.order(), order, "{name}");
            assert_eq!(g.group.degree(), order, "{name} is regular");
            assert!(g.group.is_p_group(g.prime.get() as u32));
        }
        assert!(lookup("s4").is_err());
    }

    #[test]
    fn q8_and_d8_are_distinct_nonabelian_groups() {
        let q8 = lookup("q8").unwrap().group;
        let d8 = lookup("d8").unwrap().group;
        assert!(!q8.is_abelian() && !d8.is_abelian());
        let involutions = |g: &PermGroup| (0..g.order()).filter(|&i| g.element_order(i) == 2).count();
        assert_eq!(involutions(&q8), 1);
        assert_eq!(involutions(&d8), 5);
    }

    #[test]
    fn regular_generators_act_freely() {
        for g in all() {
            for s in g.group.generators() {
                if !s.is_identity() {
                    assert!((0..s.degree()).all(|x| s.apply(x) != x));
                }
            }
        }
    }
}

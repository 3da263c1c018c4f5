//! Permutations of `{1..n}` with disjoint-cycle text notation.

use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{1..degree}`, stored 0-indexed.
///
/// Products compose right to left: `a.compose(&b)` maps `x` to `a(b(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm { images: (0..degree as u32).collect() }
    }

    /// Builds a permutation from 0-indexed images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation {
                    text: format!("{images:?}"),
                    reason: "images are not a bijection".into(),
                });
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Perm {
        Perm { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Nontrivial cycles, each starting at its least point (0-indexed).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        self.cycles().iter().fold(1, |acc, c| acc / gcd(acc, c.len()) * c.len())
    }

    /// Parses disjoint-cycle notation such as `"(1 2)(3 4)"`; `"()"` is the identity.
    ///
    /// Points are 1-indexed and separated by whitespace or commas. Cycles need
    /// not be disjoint; they are composed right to left.
    pub fn parse(text: &str, degree: usize) -> Result<Perm> {
        let err = |reason: &str| Error::InvalidPermutation { text: text.to_string(), reason: reason.to_string() };
        let mut result = Perm::identity(degree);
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(err("empty string"));
        }
        let mut cycles = Vec::new();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(err("expected '('"));
            }
            let close = rest.find(')').ok_or_else(|| err("unbalanced parenthesis"))?;
            let body = &rest[1..close];
            let mut points = Vec::new();
            for tok in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                let v: usize = tok.parse().map_err(|_| err(&format!("bad point {tok:?}")))?;
                if v == 0 || v > degree {
                    return Err(err(&format!("point {v} outside 1..{degree}")));
                }
                if points.contains(&(v - 1)) {
                    return Err(err(&format!("point {v} repeated within a cycle")));
                }
                points.push(v - 1);
            }
            cycles.push(points);
            rest = rest[close + 1..].trim_start();
        }
        for points in cycles.iter().rev() {
            if points.len() < 2 {
                continue;
            }
            let mut images: Vec<u32> = (0..degree as u32).collect();
            for (i, &x) in points.iter().enumerate() {
                images[x] = points[(i + 1) % points.len()] as u32;
            }
            result = Perm { images }.compose(&result);
        }
        Ok(result)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{}[{}]", self, self.degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p = Perm::parse("(1 2)(3 4)", 4).unwrap();
        assert_eq!(p.to_string(), "(1 2)(3 4)");
        assert_eq!(Perm::parse("()", 5).unwrap(), Perm::identity(5));
        assert_eq!(Perm::identity(3).to_string(), "()");
        let c = Perm::parse("(1 2 3 4)", 4).unwrap();
        assert_eq!(c.apply(0), 1);
        assert_eq!(c.apply(3), 0);
        assert_eq!(c.order(), 4);
        assert_eq!(Perm::parse("(3, 1, 2)", 3).unwrap().to_string(), "(1 2 3)");
    }

    #[test]
    fn parse_errors() {
        assert!(Perm::parse("(1 5)", 4).is_err());
        assert!(Perm::parse("(1 1)", 4).is_err());
        assert!(Perm::parse("(1 2", 4).is_err());
        assert!(Perm::parse("1 2", 4).is_err());
        assert!(Perm::parse("", 4).is_err());
        assert!(Perm::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn composition_is_right_to_left() {
        let a = Perm::parse("(1 2)", 3).unwrap();
        let b = Perm::parse("(2 3)", 3).unwrap();
        // (1 2)∘(2 3): 2 -> 3 -> 3, 3 -> 2 -> 1, 1 -> 1 -> 2
        assert_eq!(a.compose(&b).to_string(), "(1 2 3)");
        assert_eq!(Perm::parse("(1 2)(2 3)", 3).unwrap(), a.compose(&b));
        assert!(a.compose(&a.inverse()).is_identity());
    }
}

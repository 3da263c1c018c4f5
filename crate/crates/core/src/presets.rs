//! Named category builders, looked up at runtime through a registry.

use std::path::PathBuf;

use crate::catalog;
use crate::category::{CategorySpec, AMBIENT_NAME};
use crate::error::{Error, Result};
use crate::group::{automorphisms, injections, GroupHom, PermGroup};
use crate::linalg::Prime;

/// Inputs a preset may draw on.
#[derive(Clone, Debug, Default)]
pub struct PresetContext {
    pub group: Option<PermGroup>,
    pub prime: Option<Prime>,
    pub path: Option<PathBuf>,
}

impl PresetContext {
    pub fn for_group(group: PermGroup, prime: Prime) -> PresetContext {
        PresetContext { group: Some(group), prime: Some(prime), path: None }
    }

    pub fn for_path(path: impl Into<PathBuf>) -> PresetContext {
        PresetContext { group: None, prime: None, path: Some(path.into()) }
    }

    fn group(&self, preset: &str) -> Result<(PermGroup, Prime)> {
        let g = self
            .group
            .clone()
            .ok_or_else(|| Error::InvalidCategory(format!("preset {preset} needs a group")))?;
        let p = match self.prime {
            Some(p) => p,
            None => Prime::new(g.smallest_prime_divisor().unwrap_or(2))?,
        };
        Ok((g, p))
    }
}

pub trait CategoryPreset: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn matches(&self, name: &str) -> bool {
        name == self.name()
    }
    fn build(&self, name: &str, ctx: &PresetContext) -> Result<CategorySpec>;
}

fn ambient_only(p: Prime, g: &PermGroup, morphisms: Vec<GroupHom>) -> Result<CategorySpec> {
    let morphisms = morphisms.into_iter().map(|h| (AMBIENT_NAME.to_string(), AMBIENT_NAME.to_string(), h)).collect();
    CategorySpec::subgroup(p, g.clone(), vec![], morphisms)
}

struct IdentityPreset;

impl CategoryPreset for IdentityPreset {
    fn name(&self) -> &'static str {
        "identity"
    }
    fn description(&self) -> &'static str {
        "the ambient group with its identity morphism"
    }
    fn build(&self, _: &str, ctx: &PresetContext) -> Result<CategorySpec> {
        let (g, p) = ctx.group(self.name())?;
        ambient_only(p, &g, vec![GroupHom::identity(&g)])
    }
}

struct AutPreset;

impl CategoryPreset for AutPreset {
    fn name(&self) -> &'static str {
        "aut"
    }
    fn description(&self) -> &'static str {
        "the ambient group with all of its automorphisms"
    }
    fn build(&self, _: &str, ctx: &PresetContext) -> Result<CategorySpec> {
        let (g, p) = ctx.group(self.name())?;
        ambient_only(p, &g, automorphisms(&g)?)
    }
}

struct UniversalPreset;

impl CategoryPreset for UniversalPreset {
    fn name(&self) -> &'static str {
        "cu"
    }
    fn description(&self) -> &'static str {
        "all subgroups with all injective homomorphisms between them"
    }
    fn build(&self, _: &str, ctx: &PresetContext) -> Result<CategorySpec> {
        let (g, p) = ctx.group(self.name())?;
        let mut objects: Vec<(String, PermGroup)> = vec![(AMBIENT_NAME.to_string(), g.clone())];
        let subs = g.subgroups()?;
        for (i, s) in subs.into_iter().filter(|s| s.order() < g.order()).enumerate() {
            objects.push((format!("Q{}", i + 1), s));
        }
        let mut morphisms = Vec::new();
        for (sn, s) in &objects {
            for (tn, t) in &objects {
                for h in injections(s, t)? {
                    morphisms.push((sn.clone(), tn.clone(), h));
                }
            }
        }
        CategorySpec::subgroup(p, g, objects.split_off(1), morphisms)
    }
}

struct DicksonPreset;

impl CategoryPreset for DicksonPreset {
    fn name(&self) -> &'static str {
        "dickson-n"
    }
    fn description(&self) -> &'static str {
        "elementary abelian (Z/2)^n with all of GL(n, F_2), n from 1 to 4"
    }
    fn matches(&self, name: &str) -> bool {
        name.strip_prefix("dickson-").is_some_and(|n| n.parse::<usize>().is_ok())
    }
    fn build(&self, name: &str, _: &PresetContext) -> Result<CategorySpec> {
        let n: usize = name
            .strip_prefix("dickson-")
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| Error::Unknown { kind: "preset", name: name.into() })?;
        let group_name = match n {
            1 => "z2",
            2 => "klein4",
            3 => "z2^3",
            4 => "z2^4",
            _ => return Err(Error::InvalidCategory(format!("dickson preset needs 1 <= n <= 4, got {n}"))),
        };
        let g = catalog::lookup(group_name)?.group;
        ambient_only(Prime::TWO, &g, automorphisms(&g)?)
    }
}

struct UserPreset;

impl CategoryPreset for UserPreset {
    fn name(&self) -> &'static str {
        "user"
    }
    fn description(&self) -> &'static str {
        "a category read from a JSON file"
    }
    fn build(&self, _: &str, ctx: &PresetContext) -> Result<CategorySpec> {
        let path = ctx.path.as_ref().ok_or_else(|| Error::InvalidCategory("preset user needs a file".into()))?;
        CategorySpec::load(path)
    }
}

pub struct PresetRegistry {
    presets: Vec<Box<dyn CategoryPreset>>,
}

impl Default for PresetRegistry {
    fn default() -> Self {
        let mut r = PresetRegistry { presets: Vec::new() };
        r.register(Box::new(UniversalPreset));
        r.register(Box::new(AutPreset));
        r.register(Box::new(IdentityPreset));
        r.register(Box::new(DicksonPreset));
        r.register(Box::new(UserPreset));
        r
    }
}

impl PresetRegistry {
    pub fn register(&mut self, preset: Box<dyn CategoryPreset>) {
        self.presets.push(preset);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.presets.iter().map(|p| p.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn CategoryPreset> {
        self.presets
            .iter()
            .find(|p| p.matches(name))
            .map(|p| p.as_ref())
            .ok_or_else(|| Error::Unknown { kind: "preset", name: name.into() })
    }

    pub fn build(&self, name: &str, ctx: &PresetContext) -> Result<CategorySpec> {
        self.get(name)?.build(name, ctx)
    }
}

/// Builds a preset from the default registry.
pub fn build_preset(name: &str, ctx: &PresetContext) -> Result<CategorySpec> {
    PresetRegistry::default().build(name, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::validate_category;

    fn ctx(name: &str) -> PresetContext {
        let c = catalog::lookup(name).unwrap();
        PresetContext::for_group(c.group, c.prime)
    }

    #[test]
    fn presets_are_valid() {
        for group in ["z2", "z4", "klein4", "q8", "d8", "z3"] {
            for preset in ["identity", "aut", "cu"] {
                let spec = build_preset(preset, &ctx(group)).unwrap();
                assert!(validate_category(&spec).valid, "{preset} on {group}");
            }
        }
    }

    #[test]
    fn preset_sizes() {
        assert_eq!(build_preset("aut", &ctx("klein4")).unwrap().morphisms().len(), 6);
        assert_eq!(build_preset("dickson-2", &PresetContext::default()).unwrap().morphisms().len(), 6);
        assert_eq!(build_preset("dickson-3", &PresetContext::default()).unwrap().morphisms().len(), 168);
        // Z/4: objects 1, Z/2, Z/4; injections 1->each (3), Z/2->Z/2, Z/2->Z/4, Z/4->Z/4 (2)
        let cu = build_preset("cu", &ctx("z4")).unwrap();
        assert_eq!(cu.objects().len(), 3);
        assert_eq!(cu.morphisms().len(), 7);
    }

    #[test]
    fn unknown_presets() {
        assert!(build_preset("nope", &ctx("z2")).is_err());
        assert!(build_preset("dickson-5", &PresetContext::default()).is_err());
        assert!(build_preset("cu", &PresetContext::default()).is_err());
    }
}

//! Finite categories of groups and injective homomorphisms.
//!
//! In subgroup mode every object is a subgroup of a fixed ambient group named
//! `P` (always object 0). In abstract mode objects are unrelated groups.
//! The morphism list is taken literally: identities are morphisms only when
//! listed.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupHom, PermGroup};
use crate::linalg::Prime;
use crate::perm::Perm;

pub const AMBIENT_NAME: &str = "P";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Subgroup,
    Abstract,
}

#[derive(Clone, Debug)]
pub struct CategoryObject {
    pub name: String,
    pub group: PermGroup,
}

#[derive(Clone, Debug)]
pub struct Morphism {
    pub source: usize,
    pub target: usize,
    pub hom: GroupHom,
}

#[derive(Clone, Debug)]
pub struct CategorySpec {
    prime: Prime,
    mode: Mode,
    objects: Vec<CategoryObject>,
    morphisms: Vec<Morphism>,
}

/// Outcome of [`validate_category`].
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub problems: Vec<String>,
    pub objects: usize,
    pub morphisms: usize,
    /// Connected components of the object graph, as lists of object names.
    pub components: Vec<Vec<String>>,
    /// True when adjoining a trivial initial object would connect the category.
    pub plus_completion_offered: bool,
}

impl CategorySpec {
    /// A subgroup-mode category. `objects` excludes the ambient group.
    pub fn subgroup(
        prime: Prime,
        ambient: PermGroup,
        objects: Vec<(String, PermGroup)>,
        morphisms: Vec<(String, String, GroupHom)>,
    ) -> Result<CategorySpec> {
        let mut objs = vec![CategoryObject { name: AMBIENT_NAME.into(), group: ambient.clone() }];
        for (name, group) in objects {
            if name == AMBIENT_NAME {
                if group != ambient {
                    return Err(Error::InvalidCategory(format!("object {AMBIENT_NAME} differs from the ambient group")));
                }
                continue;
            }
            if !ambient.contains_group(&group) {
                return Err(Error::InvalidCategory(format!("object {name} is not a subgroup of {AMBIENT_NAME}")));
            }
            objs.push(CategoryObject { name, group });
        }
        CategorySpec::assemble(prime, Mode::Subgroup, objs, morphisms)
    }

    pub fn abstract_mode(
        prime: Prime,
        objects: Vec<(String, PermGroup)>,
        morphisms: Vec<(String, String, GroupHom)>,
    ) -> Result<CategorySpec> {
        let objs = objects.into_iter().map(|(name, group)| CategoryObject { name, group }).collect();
        CategorySpec::assemble(prime, Mode::Abstract, objs, morphisms)
    }

    fn assemble(
        prime: Prime,
        mode: Mode,
        objects: Vec<CategoryObject>,
        morphisms: Vec<(String, String, GroupHom)>,
    ) -> Result<CategorySpec> {
        let mut seen = BTreeMap::new();
        for (i, o) in objects.iter().enumerate() {
            if o.name.is_empty() || o.name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidCategory(format!("object name {:?} must be a non-empty token", o.name)));
            }
            if seen.insert(o.name.clone(), i).is_some() {
                return Err(Error::InvalidCategory(format!("duplicate object {}", o.name)));
            }
            if !o.group.is_p_group(prime.get() as u32) {
                return Err(Error::NotPGroup(o.name.clone(), prime.get() as u32));
            }
        }
        let mut morphs = Vec::with_capacity(morphisms.len());
        for (k, (from, to, hom)) in morphisms.into_iter().enumerate() {
            let source = *seen
                .get(&from)
                .ok_or_else(|| Error::InvalidCategory(format!("morphism {k} starts at unknown object {from}")))?;
            let target =
                *seen.get(&to).ok_or_else(|| Error::InvalidCategory(format!("morphism {k} ends at unknown object {to}")))?;
            if hom.domain() != &objects[source].group || hom.codomain() != &objects[target].group {
                return Err(Error::InvalidCategory(format!("morphism {k} ({from} -> {to}) does not match its objects")));
            }
            if !hom.is_injective() {
                return Err(Error::InvalidCategory(format!("morphism {k} ({from} -> {to}) is not injective")));
            }
            morphs.push(Morphism { source, target, hom });
        }
        Ok(CategorySpec { prime, mode, objects, morphisms: morphs })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn objects(&self) -> &[CategoryObject] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    /// The ambient group in subgroup mode.
    pub fn ambient(&self) -> Option<&PermGroup> {
        (self.mode == Mode::Subgroup).then(|| &self.objects[0].group)
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.name == name)
    }

    /// `ι_target ∘ φ` as a map into the ambient group (subgroup mode).
    pub fn into_ambient(&self, m: &Morphism) -> Result<GroupHom> {
        let p = self.ambient().ok_or_else(|| Error::InvalidCategory("no ambient group in abstract mode".into()))?;
        m.hom.widen_codomain(p)
    }

    /// The inclusion of object `i` into the ambient group (subgroup mode).
    pub fn inclusion(&self, i: usize) -> Result<GroupHom> {
        let p = self.ambient().ok_or_else(|| Error::InvalidCategory("no ambient group in abstract mode".into()))?;
        GroupHom::inclusion(&self.objects[i].group, p)
    }

    /// Same objects, only the morphisms accepted by `keep`.
    pub fn filter_morphisms(&self, mut keep: impl FnMut(&Morphism) -> bool) -> CategorySpec {
        CategorySpec {
            prime: self.prime,
            mode: self.mode,
            objects: self.objects.clone(),
            morphisms: self.morphisms.iter().filter(|m| keep(m)).cloned().collect(),
        }
    }

    /// Connected components of the underlying undirected graph, by object index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.objects.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for m in &self.morphisms {
            let (a, b) = (find(&mut parent, m.source), find(&mut parent, m.target));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Adjoins a trivial group as an initial object (abstract mode).
    pub fn plus_completion(&self) -> Result<CategorySpec> {
        if self.mode != Mode::Abstract {
            return Err(Error::InvalidCategory("the completion applies to abstract categories".into()));
        }
        let mut name = String::from("1");
        while self.object_index(&name).is_some() {
            name.push('\'');
        }
        let one = PermGroup::trivial(1);
        let mut objects: Vec<(String, PermGroup)> =
            self.objects.iter().map(|o| (o.name.clone(), o.group.clone())).collect();
        let mut morphisms: Vec<(String, String, GroupHom)> = self
            .morphisms
            .iter()
            .map(|m| (self.objects[m.source].name.clone(), self.objects[m.target].name.clone(), m.hom.clone()))
            .collect();
        for o in &self.objects {
            morphisms.push((name.clone(), o.name.clone(), GroupHom::new(one.clone(), o.group.clone(), Vec::new())?));
        }
        objects.push((name, one));
        CategorySpec::abstract_mode(self.prime, objects, morphisms)
    }

    pub fn from_json_str(text: &str) -> Result<CategorySpec> {
        let file: CategoryFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("category file: {e}")))?;
        file.into_spec()
    }

    pub fn load(path: &Path) -> Result<CategorySpec> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        CategorySpec::from_json_str(&text)
    }

    pub fn to_file(&self) -> CategoryFile {
        let gens = |g: &PermGroup| g.generators().iter().map(|p| p.to_string()).collect::<Vec<_>>();
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| MorphismEntry {
                from: self.objects[m.source].name.clone(),
                to: self.objects[m.target].name.clone(),
                images: m.hom.generator_images().iter().map(|p| p.to_string()).collect(),
            })
            .collect();
        match self.mode {
            Mode::Subgroup => CategoryFile {
                prime: self.prime.get() as u32,
                mode: Mode::Subgroup,
                ambient: Some(GroupEntry { degree: self.objects[0].group.degree(), generators: gens(&self.objects[0].group) }),
                objects: self.objects[1..]
                    .iter()
                    .map(|o| ObjectEntry { name: o.name.clone(), degree: None, generators: gens(&o.group) })
                    .collect(),
                morphisms,
            },
            Mode::Abstract => CategoryFile {
                prime: self.prime.get() as u32,
                mode: Mode::Abstract,
                ambient: None,
                objects: self
                    .objects
                    .iter()
                    .map(|o| ObjectEntry { name: o.name.clone(), degree: Some(o.group.degree()), generators: gens(&o.group) })
                    .collect(),
                morphisms,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("category files serialize")
    }
}

/// On-disk category description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CategoryFile {
    pub prime: u32,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<GroupEntry>,
    #[serde(default)]
    pub objects: Vec<ObjectEntry>,
    #[serde(default)]
    pub morphisms: Vec<MorphismEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupEntry {
    pub degree: usize,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObjectEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismEntry {
    pub from: String,
    pub to: String,
    pub images: Vec<String>,
}

impl CategoryFile {
    pub fn into_spec(self) -> Result<CategorySpec> {
        let prime = Prime::new(self.prime)?;
        let parse_group = |degree: usize, gens: &[String]| PermGroup::from_cycle_strings(degree, gens);
        let mut objects = Vec::new();
        match self.mode {
            Mode::Subgroup => {
                let amb = self
                    .ambient
                    .as_ref()
                    .ok_or_else(|| Error::InvalidCategory("subgroup mode requires an ambient group".into()))?;
                let p = parse_group(amb.degree, &amb.generators)?;
                objects.push((AMBIENT_NAME.to_string(), p.clone()));
                for o in &self.objects {
                    if o.degree.is_some_and(|d| d != amb.degree) {
                        return Err(Error::InvalidCategory(format!("object {} has a different degree", o.name)));
                    }
                    objects.push((o.name.clone(), parse_group(amb.degree, &o.generators)?));
                }
            }
            Mode::Abstract => {
                for o in &self.objects {
                    let d = o
                        .degree
                        .ok_or_else(|| Error::InvalidCategory(format!("object {} needs a degree", o.name)))?;
                    objects.push((o.name.clone(), parse_group(d, &o.generators)?));
                }
            }
        }
        let find = |name: &str| {
            objects
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, g)| g.clone())
                .ok_or_else(|| Error::InvalidCategory(format!("unknown object {name}")))
        };
        let mut morphisms = Vec::new();
        for m in &self.morphisms {
            let src = find(&m.from)?;
            let tgt = find(&m.to)?;
            let images = m.images.iter().map(|s| Perm::parse(s, tgt.degree())).collect::<Result<Vec<_>>>()?;
            let hom = GroupHom::new(src, tgt, images)
                .map_err(|e| Error::InvalidCategory(format!("morphism {} -> {}: {e}", m.from, m.to)))?;
            morphisms.push((m.from.clone(), m.to.clone(), hom));
        }
        match self.mode {
            Mode::Subgroup => {
                let ambient = objects[0].1.clone();
                CategorySpec::subgroup(prime, ambient, objects.split_off(1), morphisms)
            }
            Mode::Abstract => CategorySpec::abstract_mode(prime, objects, morphisms),
        }
    }
}

/// Checks the standing conditions and reports connectivity.
pub fn validate_category(spec: &CategorySpec) -> ValidationReport {
    let mut problems = Vec::new();
    if spec.mode == Mode::Subgroup {
        for (i, o) in spec.objects.iter().enumerate() {
            let Ok(incl) = spec.inclusion(i) else {
                problems.push(format!("object {} is not a subgroup of {AMBIENT_NAME}", o.name));
                continue;
            };
            let listed = spec
                .morphisms
                .iter()
                .any(|m| m.source == i && m.target == 0 && m.hom.element_map() == incl.element_map());
            if !listed {
                problems.push(format!("inclusion of {} into {AMBIENT_NAME} is not a listed morphism", o.name));
            }
        }
    }
    if spec.objects.is_empty() {
        problems.push("category has no objects".into());
    }
    let components: Vec<Vec<String>> = spec
        .components()
        .into_iter()
        .map(|c| c.into_iter().map(|i| spec.objects[i].name.clone()).collect())
        .collect();
    ValidationReport {
        valid: problems.is_empty(),
        problems,
        objects: spec.objects.len(),
        morphisms: spec.morphisms.len(),
        plus_completion_offered: spec.mode == Mode::Abstract && components.len() > 1,
        components,
    }
}

/// Fails with the first violated standing condition.
pub fn require_valid(spec: &CategorySpec) -> Result<()> {
    let report = validate_category(spec);
    match report.problems.first() {
        Some(p) => Err(Error::InvalidCategory(p.clone())),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn klein() -> PermGroup {
        catalog::lookup("klein4").unwrap().group
    }

    #[test]
    fn identity_category_is_valid() {
        let p = klein();
        let spec = CategorySpec::subgroup(Prime::TWO, p.clone(), vec![], vec![("P".into(), "P".into(), GroupHom::identity(&p))])
            .unwrap();
        assert!(validate_category(&spec).valid);
    }

    #[test]
    fn missing_inclusion_names_the_object() {
        let p = klein();
        let q = p.subgroup_generated_by(vec![p.element(1).clone()]).unwrap();
        let spec = CategorySpec::subgroup(
            Prime::TWO,
            p.clone(),
            vec![("Q".into(), q)],
            vec![("P".into(), "P".into(), GroupHom::identity(&p))],
        )
        .unwrap();
        let report = validate_category(&spec);
        assert!(!report.valid);
        assert!(report.problems[0].contains('Q'));
    }

    #[test]
    fn disconnected_abstract_category() {
        let a = catalog::lookup("z2").unwrap().group;
        let b = catalog::lookup("z4").unwrap().group;
        let spec = CategorySpec::abstract_mode(Prime::TWO, vec![("A".into(), a), ("B".into(), b)], vec![]).unwrap();
        let report = validate_category(&spec);
        assert!(report.valid);
        assert_eq!(report.components.len(), 2);
        assert!(report.plus_completion_offered);
        let plus = spec.plus_completion().unwrap();
        assert!(plus.is_connected());
        assert_eq!(plus.objects().len(), 3);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"prime": 2, "mode": "subgroup", "ambient": {"degree": 4, "generators": ["(1 2 3 4)"]},
            "objects": [{"name": "Q1", "generators": ["(1 3)(2 4)"]}],
            "morphisms": [{"from": "Q1", "to": "P", "images": ["(1 3)(2 4)"]},
                          {"from": "P", "to": "P", "images": ["(1 2 3 4)"]}]}"#;
        let spec = CategorySpec::from_json_str(text).unwrap();
        assert!(validate_category(&spec).valid);
        let again = CategorySpec::from_json_str(&spec.to_json()).unwrap();
        assert_eq!(again.to_json(), spec.to_json());
        assert_eq!(again.morphisms().len(), 2);
    }

    #[test]
    fn rejects_non_injective_morphisms() {
        let p = klein();
        let collapse = GroupHom::new(p.clone(), p.clone(), vec![p.element(1).clone(), p.element(1).clone()]).unwrap();
        assert!(CategorySpec::subgroup(Prime::TWO, p, vec![], vec![("P".into(), "P".into(), collapse)]).is_err());
    }
}

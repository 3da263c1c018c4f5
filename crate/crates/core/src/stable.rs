//! Limits of cohomology over a category, the edge differential `d_1`, the
//! cohomology dimensions of the associated graph of groups, and degreewise
//! module-finiteness data.
//!
//! Subgroup mode works inside `H^n(P)`: for a morphism `φ: Q_s -> Q_t` the
//! condition block is `Res(ι_s) - (ι_t ∘ φ)^*`. Abstract mode works inside
//! `⊕_Q H^n(Q)` with blocks `(x_Q) ↦ φ^*(x_t) - x_s`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::category::{require_valid, CategorySpec, Mode};
use crate::error::{Error, Result};
use crate::group::GroupHom;
use crate::linalg::{FpMatrix, IncrementalBasis, Prime, Subspace};
use crate::resolution::{induced_maps, minimal_resolution, CohomClass, CupTable, Resolution};

/// Default number of top degrees watched for new module generators.
pub const DEFAULT_WINDOW: usize = 3;

type MapKey = (usize, usize, Vec<usize>);

/// Resolutions and induced maps for every object and morphism of a category.
pub struct CategoryCohomology {
    spec: CategorySpec,
    max_degree: usize,
    resolutions: Vec<Resolution>,
    /// Per morphism, indices into `induced`: (restriction, composite) in
    /// subgroup mode, (φ*, unused) in abstract mode.
    blocks: Vec<(usize, usize)>,
    induced: Vec<Vec<FpMatrix>>,
    cup_tables: Vec<OnceLock<CupTable>>,
    conditions: Vec<OnceLock<FpMatrix>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeLimit {
    pub degree: usize,
    /// `dim H^n(P)` in subgroup mode, `Σ_Q dim H^n(Q)` in abstract mode.
    pub ambient_dim: usize,
    pub limit_dim: usize,
    pub condition_rows: usize,
    pub condition_rank: usize,
    pub cokernel_dim: usize,
    pub basis: Vec<Vec<u8>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StableReport {
    pub mode: Mode,
    pub prime: u32,
    pub max_degree: usize,
    pub objects: usize,
    pub edges: usize,
    pub degrees: Vec<DegreeLimit>,
}

impl StableReport {
    pub fn limit_dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.limit_dim).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaDegree {
    pub degree: usize,
    pub limit_dim: usize,
    /// `dim coker d_1` one degree lower (zero in degree 0).
    pub cokernel_below: usize,
    pub gamma_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaReport {
    pub max_degree: usize,
    pub vertices: usize,
    pub edges: usize,
    pub degrees: Vec<GammaDegree>,
}

impl GammaReport {
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.gamma_dim).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureViolation {
    pub left_degree: usize,
    pub left_index: usize,
    pub right_degree: usize,
    pub right_index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub max_degree: usize,
    pub pairs_checked: usize,
    pub closed: bool,
    pub violations: Vec<ClosureViolation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FinitenessReport {
    pub max_degree: usize,
    pub window: usize,
    pub generator_degrees: Vec<usize>,
    pub generators_per_degree: Vec<usize>,
    pub limit_dims: Vec<usize>,
    /// True if a generator appeared in one of the last `window` degrees.
    pub new_generators_in_window: bool,
}

impl CategoryCohomology {
    pub fn new(spec: &CategorySpec, max_degree: usize) -> Result<CategoryCohomology> {
        if spec.mode() == Mode::Subgroup {
            require_valid(spec)?;
        }
        let p = spec.prime();
        let resolutions = spec
            .objects()
            .par_iter()
            .map(|o| minimal_resolution(&o.group, p, max_degree))
            .collect::<Result<Vec<_>>>()?;

        // Collect distinct maps, keyed by (source object, target object, element map).
        let mut keys: BTreeMap<MapKey, (usize, GroupHom, usize, usize)> = BTreeMap::new();
        let mut key_of = |src: usize, tgt: usize, hom: GroupHom| -> usize {
            let next = keys.len();
            let key = (src, tgt, hom.element_map().to_vec());
            keys.entry(key).or_insert((next, hom, src, tgt)).0
        };
        let mut blocks = Vec::with_capacity(spec.morphisms().len());
        for m in spec.morphisms() {
            match spec.mode() {
                Mode::Subgroup => {
                    let r = key_of(m.source, 0, spec.inclusion(m.source)?);
                    let c = key_of(m.source, 0, spec.into_ambient(m)?);
                    blocks.push((r, c));
                }
                Mode::Abstract => {
                    let f = key_of(m.source, m.target, m.hom.clone());
                    blocks.push((f, f));
                }
            }
        }
        let mut jobs: Vec<(usize, GroupHom, usize, usize)> = keys.into_values().collect();
        jobs.sort_by_key(|j| j.0);
        let induced = jobs
            .par_iter()
            .map(|(_, hom, src, tgt)| induced_maps(hom, &resolutions[*tgt], &resolutions[*src], max_degree))
            .collect::<Result<Vec<_>>>()?;
        Ok(CategoryCohomology {
            spec: spec.clone(),
            max_degree,
            cup_tables: (0..resolutions.len()).map(|_| OnceLock::new()).collect(),
            conditions: (0..=max_degree).map(|_| OnceLock::new()).collect(),
            resolutions,
            blocks,
            induced,
        })
    }

    pub fn spec(&self) -> &CategorySpec {
        &self.spec
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn prime(&self) -> Prime {
        self.spec.prime()
    }

    pub fn resolution(&self, object: usize) -> &Resolution {
        &self.resolutions[object]
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree {
            return Err(Error::DegreeOutOfRange { degree: n, max: self.max_degree });
        }
        Ok(())
    }

    /// Objects whose cohomology makes up the ambient space.
    fn components(&self) -> std::ops::Range<usize> {
        match self.spec.mode() {
            Mode::Subgroup => 0..1,
            Mode::Abstract => 0..self.resolutions.len(),
        }
    }

    pub fn ambient_dim(&self, n: usize) -> usize {
        self.components().map(|i| self.resolutions[i].rank(n)).sum()
    }

    fn offsets(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0];
        for i in self.components() {
            out.push(out.last().unwrap() + self.resolutions[i].rank(n));
        }
        out
    }

    /// The matrix of `d_1` in degree `n`.
    pub fn condition_map(&self, n: usize) -> Result<&FpMatrix> {
        self.check_degree(n)?;
        Ok(self.conditions[n].get_or_init(|| self.build_condition_map(n)))
    }

    fn build_condition_map(&self, n: usize) -> FpMatrix {
        let p = self.prime();
        let cols = self.ambient_dim(n);
        let offsets = self.offsets(n);
        let mut parts = Vec::with_capacity(self.blocks.len());
        for (m, &(a, b)) in self.spec.morphisms().iter().zip(&self.blocks) {
            let block = match self.spec.mode() {
                Mode::Subgroup => self.induced[a][n].sub(&self.induced[b][n]).expect("same shape"),
                Mode::Abstract => {
                    let phi = &self.induced[a][n];
                    let rows = self.resolutions[m.source].rank(n);
                    let mut block = FpMatrix::zero(p, rows, cols);
                    for r in 0..rows {
                        for c in 0..phi.cols() {
                            let at = offsets[m.target] + c;
                            block.set(r, at, p.add(block.get(r, at), phi.get(r, c)));
                        }
                        let at = offsets[m.source] + r;
                        block.set(r, at, p.sub(block.get(r, at), 1));
                    }
                    block
                }
            };
            parts.push(block);
        }
        let refs: Vec<&FpMatrix> = parts.iter().collect();
        FpMatrix::vstack(p, cols, &refs).expect("blocks share the column count")
    }

    /// `I^n`, the kernel of the condition map.
    pub fn limit_basis(&self, n: usize) -> Result<Subspace> {
        Ok(self.condition_map(n)?.kernel_basis())
    }

    pub fn stable_report(&self) -> Result<StableReport> {
        let degrees = (0..=self.max_degree)
            .map(|n| {
                let d1 = self.condition_map(n)?;
                let rank = d1.rank();
                let limit = d1.kernel_basis();
                Ok(DegreeLimit {
                    degree: n,
                    ambient_dim: self.ambient_dim(n),
                    limit_dim: limit.dim(),
                    condition_rows: d1.rows(),
                    condition_rank: rank,
                    cokernel_dim: d1.rows() - rank,
                    basis: limit.basis().to_rows(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StableReport {
            mode: self.spec.mode(),
            prime: self.prime().get() as u32,
            max_degree: self.max_degree,
            objects: self.spec.objects().len(),
            edges: self.spec.morphisms().len(),
            degrees,
        })
    }

    /// Dimensions of `H^n(Γ)` from the two-row spectral sequence.
    pub fn gamma_dims(&self) -> Result<GammaReport> {
        if self.spec.mode() == Mode::Abstract && !self.spec.is_connected() {
            return Err(Error::InvalidCategory("the graph of groups needs a connected category".into()));
        }
        let report = self.stable_report()?;
        let degrees = report
            .degrees
            .iter()
            .enumerate()
            .map(|(n, d)| {
                let below = if n == 0 { 0 } else { report.degrees[n - 1].cokernel_dim };
                GammaDegree { degree: n, limit_dim: d.limit_dim, cokernel_below: below, gamma_dim: d.limit_dim + below }
            })
            .collect();
        Ok(GammaReport {
            max_degree: self.max_degree,
            vertices: self.spec.objects().len(),
            edges: self.spec.morphisms().len(),
            degrees,
        })
    }

    fn cup_table(&self, object: usize) -> Result<&CupTable> {
        if let Some(t) = self.cup_tables[object].get() {
            return Ok(t);
        }
        let table = CupTable::new(&self.resolutions[object], self.max_degree)?;
        Ok(self.cup_tables[object].get_or_init(|| table))
    }

    /// Componentwise cup product on the ambient space.
    pub fn ambient_cup(&self, a: usize, x: &[u8], b: usize, y: &[u8]) -> Result<Vec<u8>> {
        self.check_degree(a + b)?;
        let (ox, oy) = (self.offsets(a), self.offsets(b));
        let mut out = Vec::with_capacity(self.ambient_dim(a + b));
        for (k, obj) in self.components().enumerate() {
            let cx = CohomClass { degree: a, coeffs: x[ox[k]..ox[k + 1]].to_vec() };
            let cy = CohomClass { degree: b, coeffs: y[oy[k]..oy[k + 1]].to_vec() };
            out.extend(self.cup_table(obj)?.product(&cx, &cy)?.coeffs);
        }
        Ok(out)
    }

    /// Checks that products of limit elements are limit elements.
    pub fn ring_closure_check(&self) -> Result<ClosureReport> {
        let limits = (0..=self.max_degree).map(|n| self.limit_basis(n)).collect::<Result<Vec<_>>>()?;
        let mut pairs = 0;
        let mut violations = Vec::new();
        for a in 0..=self.max_degree {
            for b in a..=self.max_degree - a {
                for (i, x) in limits[a].basis().row_iter().enumerate() {
                    for (j, y) in limits[b].basis().row_iter().enumerate() {
                        pairs += 1;
                        let z = self.ambient_cup(a, x, b, y)?;
                        if !limits[a + b].contains(&z) {
                            violations.push(ClosureViolation { left_degree: a, left_index: i, right_degree: b, right_index: j });
                        }
                    }
                }
            }
        }
        Ok(ClosureReport { max_degree: self.max_degree, pairs_checked: pairs, closed: violations.is_empty(), violations })
    }

    /// Greedy degreewise module generators of the ambient ring over the limit.
    pub fn module_finiteness(&self, window: usize) -> Result<FinitenessReport> {
        let p = self.prime();
        let limits = (0..=self.max_degree).map(|n| self.limit_basis(n)).collect::<Result<Vec<_>>>()?;
        let mut generators: Vec<Vec<Vec<u8>>> = Vec::new();
        for n in 0..=self.max_degree {
            let dim = self.ambient_dim(n);
            let mut span = IncrementalBasis::new(p, dim);
            for d in 1..=n {
                for i in limits[d].basis().row_iter() {
                    for h in &generators[n - d] {
                        span.insert(&self.ambient_cup(d, i, n - d, h)?);
                    }
                }
            }
            let mut fresh = Vec::new();
            for k in 0..dim {
                let mut e = vec![0u8; dim];
                e[k] = 1;
                if span.insert(&e) {
                    fresh.push(e);
                }
            }
            generators.push(fresh);
        }
        let per_degree: Vec<usize> = generators.iter().map(Vec::len).collect();
        let degrees = per_degree.iter().enumerate().flat_map(|(n, &c)| std::iter::repeat_n(n, c)).collect();
        let start = (self.max_degree + 1).saturating_sub(window);
        Ok(FinitenessReport {
            max_degree: self.max_degree,
            window,
            generator_degrees: degrees,
            new_generators_in_window: per_degree[start..].iter().any(|&c| c > 0),
            generators_per_degree: per_degree,
            limit_dims: limits.iter().map(Subspace::dim).collect(),
        })
    }
}

/// Subgroup-mode category keeping only morphisms that end at the ambient group.
pub fn target_reduction(spec: &CategorySpec) -> Result<CategorySpec> {
    if spec.mode() != Mode::Subgroup {
        return Err(Error::InvalidCategory("target reduction applies to subgroup mode".into()));
    }
    Ok(spec.filter_morphisms(|m| m.target == 0))
}

pub fn condition_map(spec: &CategorySpec, n: usize) -> Result<FpMatrix> {
    Ok(CategoryCohomology::new(spec, n)?.condition_map(n)?.clone())
}

pub fn limit_basis(spec: &CategorySpec, n: usize) -> Result<Subspace> {
    CategoryCohomology::new(spec, n)?.limit_basis(n)
}

pub fn gamma_dims(spec: &CategorySpec, max_degree: usize) -> Result<GammaReport> {
    CategoryCohomology::new(spec, max_degree)?.gamma_dims()
}

pub fn ring_closure_check(spec: &CategorySpec, max_degree: usize) -> Result<ClosureReport> {
    CategoryCohomology::new(spec, max_degree)?.ring_closure_check()
}

pub fn module_finiteness(spec: &CategorySpec, max_degree: usize) -> Result<FinitenessReport> {
    CategoryCohomology::new(spec, max_degree)?.module_finiteness(DEFAULT_WINDOW)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::presets::{build_preset, PresetContext};

    fn preset(name: &str, group: &str) -> CategorySpec {
        let c = catalog::lookup(group).unwrap();
        build_preset(name, &PresetContext::for_group(c.group, c.prime)).unwrap()
    }

    #[test]
    fn identity_category() {
        let cc = CategoryCohomology::new(&preset("identity", "q8"), 4).unwrap();
        for n in 0..=4 {
            assert!(cc.condition_map(n).unwrap().is_zero());
            assert_eq!(cc.limit_basis(n).unwrap().dim(), cc.ambient_dim(n));
        }
        let g = cc.gamma_dims().unwrap().dims();
        assert_eq!(g, vec![1, 3, 4, 3, 2]);
        assert!(cc.ring_closure_check().unwrap().closed);
    }

    #[test]
    fn gl2_category() {
        let cc = CategoryCohomology::new(&preset("aut", "klein4"), 6).unwrap();
        assert!(cc.condition_map(0).unwrap().is_zero());
        let d2 = cc.condition_map(2).unwrap();
        assert_eq!((d2.cols(), d2.rank()), (3, 2));
        let r = cc.stable_report().unwrap();
        assert_eq!(r.limit_dims(), vec![1, 0, 1, 1, 1, 1, 2]);
        let g = cc.gamma_dims().unwrap();
        assert_eq!(g.dims()[..2], [1, 6]);
        assert_eq!(g.degrees[2].limit_dim, 1);
        let f = cc.module_finiteness(DEFAULT_WINDOW).unwrap();
        assert_eq!(f.generator_degrees, vec![0, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn z4_universal_category() {
        let cc = CategoryCohomology::new(&preset("cu", "z4"), 8).unwrap();
        assert_eq!(cc.stable_report().unwrap().limit_dims(), vec![1; 9]);
        assert!(cc.ring_closure_check().unwrap().closed);
    }

    #[test]
    fn abstract_mode_matches_subgroup_mode() {
        let spec = preset("cu", "klein4");
        let file = spec.to_file();
        let mut abs = file.clone();
        abs.mode = Mode::Abstract;
        let degree = file.ambient.as_ref().unwrap().degree;
        let mut objects = vec![crate::category::ObjectEntry {
            name: "P".into(),
            degree: Some(degree),
            generators: file.ambient.as_ref().unwrap().generators.clone(),
        }];
        objects.extend(file.objects.iter().cloned().map(|mut o| {
            o.degree = Some(degree);
            o
        }));
        abs.objects = objects;
        abs.ambient = None;
        let abs = abs.into_spec().unwrap();
        let sub = CategoryCohomology::new(&spec, 4).unwrap().stable_report().unwrap();
        let ab = CategoryCohomology::new(&abs, 4).unwrap().stable_report().unwrap();
        assert_eq!(sub.limit_dims(), ab.limit_dims());
    }

    #[test]
    fn abstract_degree_zero_counts_components() {
        let a = catalog::lookup("z2").unwrap().group;
        let b = catalog::lookup("z4").unwrap().group;
        let spec = CategorySpec::abstract_mode(Prime::TWO, vec![("A".into(), a), ("B".into(), b)], vec![]).unwrap();
        let cc = CategoryCohomology::new(&spec, 2).unwrap();
        assert_eq!(cc.limit_basis(0).unwrap().dim(), 2);
        assert!(cc.gamma_dims().is_err());
        let plus = CategoryCohomology::new(&spec.plus_completion().unwrap(), 2).unwrap();
        assert_eq!(plus.limit_basis(0).unwrap().dim(), 1);
    }
}

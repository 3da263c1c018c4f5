use serde::Serialize;
use serde_json::{json, Value};

use stablecoh::bar::{bar_betti_series, ORACLE_MAX_DEGREE, ORACLE_MAX_ORDER};
use stablecoh::catalog::{self, CatalogGroup, GENERATOR_LETTERS};
use stablecoh::category::{validate_category, CategorySpec, Mode};
use stablecoh::conjugator::find_conjugator_with_inclusion;
use stablecoh::gamma::{finite_quotient, gamma_presentation};
use stablecoh::invariants::{compare_invariants_vs_limit, dickson_generators, invariant_basis, MatrixGroup2, Poly2};
use stablecoh::presets::{PresetContext, PresetRegistry};
use stablecoh::resolution::CupTable;
use stablecoh::stable::CategoryCohomology;
use stablecoh::{minimal_resolution, Error, GroupHom, Perm, PermGroup, Prime, Result};

use crate::{CategoryArgs, CohomologyArgs, ConjugatorArgs, FinitenessArgs, GammaArgs, InvariantArgs, MatrixGroupKind, Outcome, Progress, QuotientArgs};

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn group_and_prime(name: &str, prime: Option<u32>) -> Result<(CatalogGroup, Prime)> {
    let c = catalog::lookup(name)?;
    let p = match prime {
        Some(p) => Prime::new(p)?,
        None => c.prime,
    };
    if !c.group.is_p_group(p.get() as u32) {
        return Err(Error::NotPGroup(c.name.to_string(), p.get() as u32));
    }
    Ok((c, p))
}

fn check_degree(n: usize) -> Result<()> {
    if n > stablecoh::resolution::MAX_DEGREE {
        return Err(Error::DegreeOutOfRange { degree: n, max: stablecoh::resolution::MAX_DEGREE });
    }
    Ok(())
}

fn load_category(args: &CategoryArgs) -> Result<CategorySpec> {
    check_degree(args.max_degree)?;
    let registry = PresetRegistry::default();
    let preset = match (&args.preset, &args.category) {
        (Some(p), Some(_)) if p != "user" => {
            return Err(Error::InvalidCategory("--preset and --category are mutually exclusive".into()))
        }
        (_, Some(_)) => "user".to_string(),
        (Some(p), None) => p.clone(),
        (None, None) => return Err(Error::InvalidCategory("give --preset or --category".into())),
    };
    let mut ctx = PresetContext::default();
    if let Some(path) = &args.category {
        ctx.path = Some(path.clone());
    }
    if let Some(g) = &args.group {
        let (c, p) = group_and_prime(g, args.prime)?;
        ctx.group = Some(c.group);
        ctx.prime = Some(p);
    } else if let Some(p) = args.prime {
        ctx.prime = Some(Prime::new(p)?);
    }
    let spec = registry.build(&preset, &ctx)?;
    if let Some(p) = args.prime {
        if spec.prime().get() as u32 != p {
            return Err(Error::InvalidCategory(format!("category is over F_{} but --prime {p} was given", spec.prime())));
        }
    }
    Ok(spec)
}

fn build(args: &CategoryArgs, progress: &Progress) -> Result<(CategorySpec, CategoryCohomology)> {
    let spec = load_category(args)?;
    progress.line(format!(
        "category with {} objects and {} morphisms; resolving to degree {}",
        spec.objects().len(),
        spec.morphisms().len(),
        args.max_degree
    ));
    let cc = CategoryCohomology::new(&spec, args.max_degree)?;
    progress.line("resolutions and induced maps done");
    Ok((spec, cc))
}

pub fn cohomology(args: &CohomologyArgs, progress: &Progress) -> Result<Outcome> {
    check_degree(args.max_degree)?;
    let (c, p) = group_and_prime(&args.group, args.prime)?;
    progress.line(format!("resolving {} over F_{p} to degree {}", c.name, args.max_degree));
    let res = minimal_resolution(&c.group, p, args.max_degree)?;
    res.verify()?;
    let betti = res.betti();
    let mut checks = true;
    let oracle = if args.oracle {
        if c.group.order() > ORACLE_MAX_ORDER {
            return Err(Error::OrderCapExceeded { cap: ORACLE_MAX_ORDER });
        }
        let top = args.max_degree.min(ORACLE_MAX_DEGREE);
        progress.line(format!("bar complex up to degree {top}"));
        let dims = bar_betti_series(&c.group, p, top)?;
        let agrees = dims[..] == betti[..=top];
        checks &= agrees;
        Some(json!({ "degrees_checked": top, "dims": dims, "agrees": agrees }))
    } else {
        None
    };
    let cup = if args.cup {
        let table = CupTable::new(&res, args.max_degree)?;
        let mut products = Vec::new();
        for a in 1..=args.max_degree {
            for b in a..=args.max_degree - a {
                for i in 0..res.rank(a) {
                    for j in 0..res.rank(b) {
                        let z = table.product(&res.basis_class(a, i), &res.basis_class(b, j))?;
                        products.push(json!({ "left": [a, i], "right": [b, j], "product": z.coeffs }));
                    }
                }
            }
        }
        Some(products)
    } else {
        None
    };
    Ok(Outcome {
        report: json!({
            "group": c.name,
            "order": c.group.order(),
            "prime": p.get(),
            "max_degree": args.max_degree,
            "betti": betti,
            "resolution_verified": true,
            "oracle": oracle,
            "cup_products": cup,
        }),
        checks_passed: checks,
    })
}

pub fn stable(args: &CategoryArgs, progress: &Progress) -> Result<Outcome> {
    let (spec, cc) = build(args, progress)?;
    let report = cc.stable_report()?;
    let closure = match spec.mode() {
        Mode::Subgroup => Some(cc.ring_closure_check()?),
        Mode::Abstract => None,
    };
    let closed = closure.as_ref().is_none_or(|c| c.closed);
    Ok(Outcome {
        report: json!({
            "validation": to_value(&validate_category(&spec)),
            "dims": report.limit_dims(),
            "stable": to_value(&report),
            "ring_closure": closure.map(|c| to_value(&c)),
        }),
        checks_passed: closed,
    })
}

pub fn gamma(args: &GammaArgs, progress: &Progress) -> Result<Outcome> {
    let (spec, cc) = build(&args.input, progress)?;
    let report = cc.gamma_dims()?;
    let pres = gamma_presentation(&spec)?;
    let text = pres.to_string();
    if let Some(path) = &args.emit {
        std::fs::write(path, &text).map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
    }
    let round_trip = stablecoh::gamma::Presentation::parse(&text)? == pres;
    Ok(Outcome {
        report: json!({
            "dims": report.dims(),
            "gamma": to_value(&report),
            "presentation": {
                "generators": pres.generators.len(),
                "relations": pres.relations.len(),
                "round_trip": round_trip,
                "text": text,
            },
        }),
        checks_passed: round_trip,
    })
}

pub fn quotient(args: &QuotientArgs, progress: &Progress) -> Result<Outcome> {
    let spec = load_category(&args.input)?;
    progress.line(format!("building conjugators for {} morphisms", spec.morphisms().len()));
    let report = finite_quotient(&spec, args.order_cap)?;
    Ok(Outcome { checks_passed: report.all_verified(), report: to_value(&report) })
}

fn parse_word(word: &str, group: &PermGroup, letters: &[char]) -> Result<usize> {
    let gens = group.generator_indices();
    let mut acc = PermGroup::IDENTITY;
    let mut chars = word.trim().chars().peekable();
    while let Some(ch) = chars.next() {
        if ch.is_whitespace() || ch == '*' {
            continue;
        }
        let k = letters
            .iter()
            .position(|&l| l == ch)
            .ok_or_else(|| Error::Parse(format!("unknown generator letter {ch:?} in {word:?}")))?;
        let mut g = gens[k];
        if chars.peek() == Some(&'\'') {
            chars.next();
            g = group.inverse(g);
        }
        acc = group.mul(acc, g);
    }
    Ok(acc)
}

pub fn conjugator(args: &ConjugatorArgs) -> Result<Outcome> {
    let c = catalog::lookup(&args.group)?;
    let p = c.group.clone();
    let letters = &GENERATOR_LETTERS[..p.generators().len()];
    let q = if args.subgroup_gen.is_empty() {
        p.clone()
    } else {
        let gens = args.subgroup_gen.iter().map(|s| Perm::parse(s, p.degree())).collect::<Result<Vec<_>>>()?;
        p.subgroup_generated_by(gens)?
    };
    if q.generators().len() > GENERATOR_LETTERS.len() {
        return Err(Error::InvalidHomomorphism("too many domain generators".into()));
    }
    let domain_letters = &GENERATOR_LETTERS[..q.generators().len()];
    let mut images: Vec<Option<Perm>> = vec![None; q.generators().len()];
    for entry in args.phi.split(',').filter(|e| !e.trim().is_empty()) {
        let (from, to) = entry
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected letter:word in {entry:?}")))?;
        let from = from.trim();
        let k = domain_letters
            .iter()
            .position(|l| from.len() == 1 && from.starts_with(*l))
            .ok_or_else(|| Error::Parse(format!("unknown domain generator {from:?}")))?;
        images[k] = Some(p.element(parse_word(to, &p, letters)?).clone());
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(k, im)| im.ok_or_else(|| Error::InvalidHomomorphism(format!("no image for generator {}", domain_letters[k]))))
        .collect::<Result<Vec<_>>>()?;
    let phi = GroupHom::new(q.clone(), p.clone(), images)?;
    let inclusion = GroupHom::inclusion(&q, &p)?;
    let w = find_conjugator_with_inclusion(&phi, &inclusion)?;
    let holds = w.verify();
    Ok(Outcome {
        report: json!({
            "group": c.name,
            "domain_order": q.order(),
            "symmetric_degree": p.order(),
            "phi": domain_letters.iter().zip(phi.generator_images()).map(|(l, im)| json!({ "generator": l.to_string(), "image": im.to_string() })).collect::<Vec<_>>(),
            "conjugator": w.conjugator.to_string(),
            "verification": {
                "identity": "g * L(q) * g^-1 = L(phi(q)) for every q, L the left-regular embedding",
                "elements_checked": q.order(),
                "holds": holds,
            },
        }),
        checks_passed: holds,
    })
}

pub fn invariants(args: &InvariantArgs, progress: &Progress) -> Result<Outcome> {
    if args.max_degree > stablecoh::invariants::DEFAULT_MAX_DEGREE {
        return Err(Error::DegreeOutOfRange { degree: args.max_degree, max: stablecoh::invariants::DEFAULT_MAX_DEGREE });
    }
    if args.n == 0 || args.n > stablecoh::invariants::MAX_VARIABLES {
        return Err(Error::DimensionMismatch(format!("--n must lie in 1..={}", stablecoh::invariants::MAX_VARIABLES)));
    }
    let h = match args.subgroup {
        MatrixGroupKind::Gl => MatrixGroup2::general_linear(args.n)?,
        MatrixGroupKind::Swap => MatrixGroup2::swap(args.n)?,
        MatrixGroupKind::Trivial => MatrixGroup2::trivial(args.n),
    };
    progress.line(format!("fixed spaces of a group of order {} up to degree {}", h.order(), args.max_degree));
    let fixed: Vec<Value> = (0..=args.max_degree)
        .map(|d| {
            let s = invariant_basis(&h, d as u32);
            let basis: Vec<String> = s.basis().row_iter().map(|r| Poly2::from_vector(args.n, d as u32, r).to_string()).collect();
            json!({ "degree": d, "dim": s.dim(), "basis": basis })
        })
        .collect();
    let dims: Vec<usize> = fixed.iter().map(|v| v["dim"].as_u64().unwrap_or(0) as usize).collect();
    let dickson = match args.subgroup {
        MatrixGroupKind::Gl => Some(to_value(&dickson_generators(args.n)?)),
        _ => None,
    };
    let mut checks = true;
    let comparison = if args.compare {
        progress.line("comparing with the one-object category limit");
        let c = compare_invariants_vs_limit(args.n, &h, args.max_degree)?;
        checks &= c.all_equal;
        Some(to_value(&c))
    } else {
        None
    };
    Ok(Outcome {
        report: json!({
            "n": args.n,
            "group_order": h.order(),
            "dims": dims,
            "fixed_spaces": fixed,
            "dickson_generators": dickson,
            "comparison": comparison,
        }),
        checks_passed: checks,
    })
}

pub fn finiteness(args: &FinitenessArgs, progress: &Progress) -> Result<Outcome> {
    let (_, cc) = build(&args.input, progress)?;
    let report = cc.module_finiteness(args.window)?;
    Ok(Outcome { report: to_value(&report), checks_passed: true })
}

pub fn category(args: &CategoryArgs) -> Result<Outcome> {
    let spec = load_category(args)?;
    let validation = validate_category(&spec);
    let plus = if validation.plus_completion_offered {
        Some(to_value(&spec.plus_completion()?.to_file()))
    } else {
        None
    };
    Ok(Outcome {
        report: json!({
            "validation": to_value(&validation),
            "category": to_value(&spec.to_file()),
            "plus_completion": plus,
        }),
        checks_passed: true,
    })
}

pub fn catalog() -> Result<Outcome> {
    let groups: Vec<Value> = catalog::all()
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "order": c.group.order(),
                "prime": c.prime.get(),
                "description": c.description,
                "generators": c.generator_names().iter().zip(c.group.generators()).map(|(n, g)| json!({ "name": n, "permutation": g.to_string() })).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Outcome {
        report: json!({ "groups": groups, "presets": PresetRegistry::default().names() }),
        checks_passed: true,
    })
}

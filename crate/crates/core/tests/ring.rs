use proptest::prelude::*;
use stablecoh::catalog;
use stablecoh::group::{injections, GroupHom};
use stablecoh::resolution::{induced_maps, induced_maps_with, CosetOrder, CupTable};
use stablecoh::{minimal_resolution, CohomClass, FpMatrix, Resolution};

fn res(name: &str, n: usize) -> Resolution {
    let c = catalog::lookup(name).unwrap();
    minimal_resolution(&c.group, c.prime, n).unwrap()
}

fn classes(r: &Resolution, d: usize) -> Vec<CohomClass> {
    (0..r.rank(d)).map(|i| r.basis_class(d, i)).collect()
}

#[test]
fn graded_commutativity_at_odd_primes() {
    for name in ["z3", "z9", "z3^2", "z5"] {
        let r = res(name, 4);
        let t = CupTable::new(&r, 4).unwrap();
        let p = r.prime();
        for a in 0..=4 {
            for b in 0..=4 - a {
                for x in classes(&r, a) {
                    for y in classes(&r, b) {
                        let xy = t.product(&x, &y).unwrap();
                        let yx = t.product(&y, &x).unwrap();
                        let signed: Vec<u8> =
                            if a * b % 2 == 1 { yx.coeffs.iter().map(|&c| p.neg(c)).collect() } else { yx.coeffs };
                        assert_eq!(xy.coeffs, signed, "{name} degrees {a},{b}");
                    }
                }
            }
        }
    }
}

#[test]
fn functoriality_on_subgroup_chains() {
    for name in ["z8", "q8", "d8"] {
        let c = catalog::lookup(name).unwrap();
        let p = c.group.clone();
        let rp = minimal_resolution(&p, c.prime, 4).unwrap();
        let subs = p.subgroups().unwrap();
        for q in &subs {
            for r in subs.iter().filter(|r| r.contains_group(q)) {
                let rq = minimal_resolution(q, c.prime, 4).unwrap();
                let rr = minimal_resolution(r, c.prime, 4).unwrap();
                for phi in injections(q, r).unwrap().into_iter().take(4) {
                    for psi in injections(r, &p).unwrap().into_iter().take(4) {
                        let both = psi.compose(&phi).unwrap();
                        let m_both = induced_maps(&both, &rp, &rq, 4).unwrap();
                        let m_phi = induced_maps(&phi, &rr, &rq, 4).unwrap();
                        let m_psi = induced_maps(&psi, &rp, &rr, 4).unwrap();
                        for n in 0..=4 {
                            assert_eq!(m_both[n], m_phi[n].mul(&m_psi[n]).unwrap(), "{name} degree {n}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn induced_maps_are_ring_maps_and_natural_in_degree_one() {
    for name in ["klein4", "q8", "z4xz2", "z3^2"] {
        let c = catalog::lookup(name).unwrap();
        let p = c.group.clone();
        let rp = minimal_resolution(&p, c.prime, 4).unwrap();
        let tp = CupTable::new(&rp, 4).unwrap();
        for q in p.subgroups().unwrap() {
            let rq = minimal_resolution(&q, c.prime, 4).unwrap();
            let tq = CupTable::new(&rq, 4).unwrap();
            for phi in injections(&q, &p).unwrap().into_iter().take(6) {
                let maps = induced_maps(&phi, &rp, &rq, 4).unwrap();
                let pull = |x: &CohomClass| CohomClass { degree: x.degree, coeffs: maps[x.degree].apply(&x.coeffs).unwrap() };
                for a in 1..=2 {
                    for b in a..=4 - a {
                        for x in classes(&rp, a) {
                            for y in classes(&rp, b) {
                                let lhs = pull(&tp.product(&x, &y).unwrap());
                                let rhs = tq.product(&pull(&x), &pull(&y)).unwrap();
                                assert_eq!(lhs, rhs, "{name}");
                            }
                        }
                    }
                }
                // degree one: pulling back a homomorphism is precomposition
                for y in classes(&rp, 1) {
                    let values = rp.h1_hom_values(&y).unwrap();
                    let composed: Vec<u8> = (0..q.order()).map(|i| values[phi.apply_index(i)]).collect();
                    assert_eq!(pull(&y), rq.h1_class_from_hom(&composed).unwrap());
                }
                let reversed = induced_maps_with(&phi, &rp, &rq, 4, CosetOrder::Reversed).unwrap();
                assert_eq!(maps, reversed);
            }
        }
    }
}

#[test]
fn klein_swap_in_degree_one() {
    let c = catalog::lookup("klein4").unwrap();
    let k = c.group.clone();
    let swap = GroupHom::new(k.clone(), k.clone(), vec![k.generators()[1].clone(), k.generators()[0].clone()]).unwrap();
    let r = minimal_resolution(&k, c.prime, 2).unwrap();
    let m = induced_maps(&swap, &r, &r, 1).unwrap().pop().unwrap();
    let id = FpMatrix::identity(c.prime, 2);
    assert_ne!(m, id);
    assert_eq!(m.mul(&m).unwrap(), id);
    // in the basis dual to the generators it is the coordinate swap
    let duals: Vec<CohomClass> = (0..2)
        .map(|i| {
            let values: Vec<u8> = (0..4).map(|e| k.word(e).iter().filter(|&&g| g == i).count() as u8 % 2).collect();
            r.h1_class_from_hom(&values).unwrap()
        })
        .collect();
    assert_eq!(m.apply(&duals[0].coeffs).unwrap(), duals[1].coeffs);
    assert_eq!(m.apply(&duals[1].coeffs).unwrap(), duals[0].coeffs);
}

fn ring_case() -> impl Strategy<Value = (&'static str, usize, usize, usize, u64)> {
    (
        prop::sample::select(vec!["z2", "z4", "klein4", "q8", "d8", "z4xz2", "z2^3", "z8"]),
        0usize..=2,
        0usize..=2,
        0usize..=2,
        any::<u64>(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cup_is_associative_commutative_and_unital((name, a, b, c, seed) in ring_case()) {
        let r = res(name, 6);
        let t = CupTable::new(&r, 6).unwrap();
        let pick = |d: usize, s: u64| {
            let coeffs = (0..r.rank(d)).map(|i| ((s >> (i % 60)) & 1) as u8).collect();
            r.class(d, coeffs).unwrap()
        };
        let (x, y, z) = (pick(a, seed), pick(b, seed.rotate_left(17)), pick(c, seed.rotate_left(41)));
        let left = t.product(&t.product(&x, &y).unwrap(), &z).unwrap();
        let right = t.product(&x, &t.product(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(t.product(&x, &y).unwrap(), t.product(&y, &x).unwrap());
        prop_assert_eq!(t.product(&r.unit(), &x).unwrap(), x.clone());
        prop_assert_eq!(t.product(&x, &r.unit()).unwrap(), x);
    }
}

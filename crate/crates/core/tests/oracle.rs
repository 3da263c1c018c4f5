use stablecoh::bar::bar_betti_series;
use stablecoh::catalog;
use stablecoh::minimal_resolution;

#[test]
fn resolution_matches_bar_complex_for_small_catalog_groups() {
    for c in catalog::all().into_iter().filter(|c| c.group.order() <= 8) {
        let res = minimal_resolution(&c.group, c.prime, 4).unwrap();
        let oracle = bar_betti_series(&c.group, c.prime, 4).unwrap();
        assert_eq!(res.betti(), oracle, "{}", c.name);
    }
}

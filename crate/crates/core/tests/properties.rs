//! Cross-module invariants on randomly chosen inputs.

use ghcomplex::biorder::BiorderedSet;
use ghcomplex::complex::{
    build_gh, components, euler_characteristic, green_closure, h1_abelian_invariants,
    pi1_presentation, spanning_tree, Complex2, Side,
};
use ghcomplex::cover::{build_cover, check_cover_axioms, cover_connected, Voltage};
use ghcomplex::grouppres::{abelian_invariants, tietze_simplify, units_group};
use ghcomplex::linmonoid::enumerate_idempotents;
use proptest::prelude::*;

fn sub_biordered_set(mask: &[bool]) -> BiorderedSet {
    let all = enumerate_idempotents(3, 3, 1, 1 << 20).unwrap();
    let recs = all
        .into_iter()
        .zip(mask)
        .filter(|(_, &keep)| keep)
        .map(|(r, _)| r)
        .collect();
    BiorderedSet::from_records(3, 3, recs, 1 << 20)
}

fn bipartite(l: usize, r: usize, edges: &[(usize, usize)]) -> Complex2 {
    let mut c = Complex2::new();
    for i in 0..l {
        c.add_vertex(Side::L, format!("L{i}"));
    }
    for j in 0..r {
        c.add_vertex(Side::R, format!("R{j}"));
    }
    for &(a, b) in edges {
        c.add_edge(a % l, l + b % r, "").unwrap();
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // every component: generators = E - V + 1, abelianized π₁ = H_1,
    // green closure implies trivial Tietze result and H_1 = 0
    #[test]
    fn presentation_homology_and_green(mask in prop::collection::vec(prop::bool::weighted(0.6), 117)) {
        let e = sub_biordered_set(&mask);
        let gh = build_gh(&e).unwrap();
        let c = &gh.complex;
        c.validate().unwrap();
        let comps = components(c);
        for k in 0..comps.count {
            let root = comps.vertices(k)[0];
            let tree = spanning_tree(c, &comps, k, root).unwrap();
            prop_assert_eq!(tree.edge_count() + 1, comps.vertices(k).len());
            let p = pi1_presentation(c, &comps, k, root, &tree).unwrap();
            prop_assert_eq!(p.generators + comps.vertices(k).len(), comps.edges(c, k).len() + 1);
            let h1 = h1_abelian_invariants(c, &comps, k);
            prop_assert_eq!(&abelian_invariants(&p), &h1);
            let simplified = tietze_simplify(&p, 100_000);
            prop_assert_eq!(&abelian_invariants(&simplified.presentation), &h1);
            if green_closure(c, &comps, k, &tree).all_green {
                prop_assert!(simplified.presentation.is_trivial_presentation());
                prop_assert!(h1.is_trivial());
            }
        }
    }

    // covers of cell-free graphs with arbitrary voltages
    #[test]
    fn cover_axioms_for_random_voltages(
        edges in prop::collection::vec((0usize..4, 0usize..4), 1..12),
        volts in prop::collection::vec(0usize..6, 12),
    ) {
        let c = bipartite(4, 4, &edges);
        let g = units_group(7).unwrap();
        let phi = Voltage(volts[..c.edges.len()].to_vec());
        let cover = build_cover(&c, &g, &phi, 1 << 20).unwrap();
        prop_assert!(check_cover_axioms(&c, &cover, &g, &phi).all());
        let comps = components(&c);
        let root = c.edges[0].source;
        let k = comps.of_vertex[root];
        let tree = spanning_tree(&c, &comps, k, root).unwrap();
        let conn = cover_connected(&c, &comps, &tree, &g, &phi, &cover);
        prop_assert_eq!(conn.by_voltage, conn.by_reachability);
        let cc = components(&cover.complex);
        let chi: i64 = (0..cc.count).map(|i| euler_characteristic(&cover.complex, &cc, i)).sum();
        let base_chi: i64 = (0..comps.count).map(|i| euler_characteristic(&c, &comps, i)).sum();
        prop_assert_eq!(chi, 6 * base_chi);
    }

    // GH complexes of sub-biordered sets lift along the pairing voltage
    #[test]
    fn pairing_voltage_closes_cells(mask in prop::collection::vec(prop::bool::weighted(0.7), 117)) {
        let e = sub_biordered_set(&mask);
        let gh = build_gh(&e).unwrap();
        let g = ghcomplex::grouppres::gl_table(1, 3, 1 << 20).unwrap();
        let phi = ghcomplex::cover::gh_voltage(&e, &g).unwrap();
        prop_assert!(ghcomplex::cover::voltages_close_cells(&gh.complex, &g.table, &phi));
        let cover = build_cover(&gh.complex, &g.table, &phi, 1 << 20).unwrap();
        prop_assert!(check_cover_axioms(&gh.complex, &cover, &g.table, &phi).all());
    }
}

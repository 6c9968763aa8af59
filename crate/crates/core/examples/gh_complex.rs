//! The square complex of a biordered set: components, spanning tree, π₁
//! presentation, green closure, H_1 and a DOT rendering.
//!
//!     cargo run --example gh_complex -- 3 3 1 > /tmp/gh.dot

use ghcomplex::biorder::BiorderedSet;
use ghcomplex::complex::{
    build_gh, components, euler_characteristic, green_closure, h1_abelian_invariants,
    pi1_presentation, spanning_tree, to_dot,
};
use ghcomplex::grouppres::{abelian_invariants, tietze_simplify};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let (n, q, k) = match args[..] {
        [n, q, k] => (n, q as u32, k),
        [] => (3, 3, 1),
        _ => return Err("usage: gh_complex [n q k]".into()),
    };
    let e = BiorderedSet::from_matrix_monoid(n, q, [k], 1 << 20)?;
    let gh = build_gh(&e)?;
    let c = &gh.complex;
    eprintln!(
        "V={} E={} squares={} cells={}",
        c.vertices.len(),
        c.edges.len(),
        gh.squares.len(),
        c.cells.len()
    );

    let comps = components(c);
    let mut green_all = vec![false; c.edges.len()];
    for comp in 0..comps.count {
        let base = comps.vertices(comp)[0];
        let tree = spanning_tree(c, &comps, comp, base)?;
        let p = pi1_presentation(c, &comps, comp, base, &tree)?;
        let simplified = tietze_simplify(&p, 100_000).presentation;
        let green = green_closure(c, &comps, comp, &tree);
        for (i, g) in green.green.iter().enumerate() {
            green_all[i] |= *g;
        }
        eprintln!(
            "component {comp}: chi={} tree edges={} pi1 gens={} rels={} -> simplified gens={} rels={}",
            euler_characteristic(c, &comps, comp),
            tree.edge_count(),
            p.generators,
            p.relators.len(),
            simplified.generators,
            simplified.relators.len()
        );
        eprintln!(
            "  H1 = {}   abelianized pi1 = {}   green {}/{}",
            h1_abelian_invariants(c, &comps, comp),
            abelian_invariants(&p),
            green.green_count,
            green.component_edges
        );
    }
    print!("{}", to_dot(c, Some(&green_all)));
    Ok(())
}

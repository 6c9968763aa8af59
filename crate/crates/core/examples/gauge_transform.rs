//! Two voltage conventions on the rank-1 complex: the pairing `w0ᵀv0` on
//! every edge, and the same voltage gauged to be trivial on a spanning tree.
//! Their covers agree up to isomorphism.

use ghcomplex::biorder::BiorderedSet;
use ghcomplex::complex::{build_gh, components, spanning_tree};
use ghcomplex::cover::{build_cover, fingerprint, gh_voltage, tree_gauge};
use ghcomplex::grouppres::gl_table;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = std::env::args().nth(1).map_or(Ok(3), |a| a.parse())?;
    let e = BiorderedSet::from_matrix_monoid(3, q, [1], 1 << 20)?;
    let gh = build_gh(&e)?;
    let base = &gh.complex;
    let g = gl_table(1, q, 1 << 20)?;
    let phi = gh_voltage(&e, &g)?;
    let comps = components(base);
    let tree = spanning_tree(base, &comps, 0, gh.l_vertex_of(&e, 0))?;
    let gauged = tree_gauge(base, &comps, &tree, &g.table, &phi);

    let non_identity = |v: &[usize]| v.iter().filter(|&&x| x != g.table.identity()).count();
    println!(
        "edges with non-identity voltage: pairing {} / tree-gauged {}",
        non_identity(&phi.0),
        non_identity(&gauged.0)
    );
    let a = fingerprint(&build_cover(base, &g.table, &phi, 1 << 22)?.complex);
    let b = fingerprint(&build_cover(base, &g.table, &gauged, 1 << 22)?.complex);
    println!("pairing cover: {a:?}");
    println!("gauged cover:  {b:?}");
    println!("agree: {}", a == b);
    Ok(())
}

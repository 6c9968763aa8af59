//! Finite groups by table and finitely presented groups: unit groups,
//! GL_k(q), abelianization, subgroup closure and Tietze simplification.

use ghcomplex::grouppres::{
    abelian_invariants, gl_table, subgroup_generated, tietze_simplify, units_group, Presentation,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for q in [2, 3, 5, 7] {
        let g = units_group(q)?;
        let gen = g.cyclic_generator().map(|i| g.label(i).to_string());
        println!("GF({q})^*: order {}, generator {:?}", g.order(), gen);
    }
    for (k, q) in [(2, 2), (2, 3)] {
        let gl = gl_table(k, q, 1 << 20)?;
        let t = &gl.table;
        println!(
            "GL({k},{q}): order {}, abelianization {}, identity {}",
            t.order(),
            t.abelian_invariants(),
            gl.elements[t.identity()]
        );
        let some = [1usize, 2];
        println!(
            "  <{},{}> has order {}",
            t.label(1),
            t.label(2),
            subgroup_generated(t, &some).len()
        );
    }

    // <a, b, c | a b^-1, b c^-1, c^3, a^2 b> collapses to the trivial group
    let p = Presentation::unlabeled(
        3,
        vec![vec![1, -2], vec![2, -3], vec![3, 3, 3], vec![1, 1, 2]],
    )?;
    let out = tietze_simplify(&p, 1000);
    println!(
        "input:\n{}abelianization {}",
        p.to_text(),
        abelian_invariants(&p)
    );
    println!("after {} moves:\n{}", out.moves, out.presentation.to_text());

    // <a, b | a^2, b^3, a b a^-1 b^-1> is Z/6 but Tietze alone keeps two generators
    let p = Presentation::unlabeled(2, vec![vec![1, 1], vec![2, 2, 2], vec![1, 2, -1, -2]])?;
    println!(
        "Z/2 x Z/3 abelianizes to {}; simplified:\n{}",
        abelian_invariants(&p),
        tietze_simplify(&p, 1000).presentation.to_text()
    );
    Ok(())
}

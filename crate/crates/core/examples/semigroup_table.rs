//! Biordered sets of small semigroups given by multiplication tables, the
//! same JSON the `--table` flag reads.

use ghcomplex::biorder::{BiorderedSet, TableSpec};
use ghcomplex::complex::{build_gh, complex_report};
use ghcomplex::grouppres::{abelian_invariants, Presentation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tables = [
        (
            "left zero, 3 elements",
            r#"{"size": 3, "table": [0,0,0, 1,1,1, 2,2,2]}"#,
        ),
        (
            "right zero, 3 elements",
            r#"{"size": 3, "table": [0,1,2, 0,1,2, 0,1,2]}"#,
        ),
        (
            "2x2 rectangular band",
            r#"{"size": 4, "table": [0,1,0,1, 0,1,0,1, 2,3,2,3, 2,3,2,3]}"#,
        ),
        (
            "band with adjoined identity",
            r#"{"size": 5, "table": [0,1,0,1,0, 0,1,0,1,1, 2,3,2,3,2, 2,3,2,3,3, 0,1,2,3,4]}"#,
        ),
    ];
    for (name, text) in tables {
        let e = BiorderedSet::from_table(TableSpec::from_json(text)?, 256)?;
        let gh = build_gh(&e)?;
        let report = complex_report(&gh.complex)?;
        println!(
            "{name}: {} idempotents, {} squares, {} cells, {} components",
            e.len(),
            gh.squares.len(),
            gh.complex.cells.len(),
            report.components
        );
        for (i, h1) in report.h1.iter().enumerate() {
            let p = &report.pi1[i];
            let pres = Presentation::unlabeled(p.generators, p.relators.clone())?;
            println!(
                "  component {i}: H1 = {h1}, abelianized pi1 = {}",
                abelian_invariants(&pres)
            );
        }
        for s in &gh.sewn {
            println!(
                "  cell from square {:?} singularized by {} ({})",
                s.square.as_array(),
                s.witness.t,
                s.witness.direction
            );
        }
    }
    Ok(())
}

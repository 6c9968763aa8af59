//! The rank-1 maximal subgroup of the free idempotent generated semigroup on
//! the idempotents of M_n(GF(q)), identified as the unit group of GF(q) by a
//! simply connected cover.
//!
//!     cargo run --release --example rank1_cover -- 4 3

use ghcomplex::cover::{verify_rank1, RunOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let cases: Vec<(usize, u32)> = match args[..] {
        [n, q] => vec![(n, q as u32)],
        [] => vec![(3, 2), (3, 3), (4, 2)],
        _ => return Err("usage: rank1_cover [n q]".into()),
    };
    for (n, q) in cases {
        let r = verify_rank1(n, q, RunOptions::default())?;
        let ev = r
            .evidence
            .as_ref()
            .expect("rank 1 below n-1 runs the cover test");
        println!(
            "n={n} q={q}: base V={} E={} F={} | cover V={} E={} F={} connected={} | all green={} tietze trivial={} H1={} | verdict {:?}, group order {}",
            r.base.vertices,
            r.base.edges,
            r.base.cells,
            r.cover.vertices,
            r.cover.edges,
            r.cover.cells,
            r.cover.connected,
            ev.all_green,
            ev.tietze_trivial,
            ev.h1,
            r.verdict,
            r.group.order
        );
        for w in &r.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(())
}

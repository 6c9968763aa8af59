//! Higher ranks: rank n-1 complexes have no cells, so their fundamental
//! group is free; lower ranks are tested against a GL_k(q) cover.
//!
//!     cargo run --release --example rank_analysis -- 4 2 2

use ghcomplex::cover::{analyze_rank, RunOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let cases: Vec<(usize, u32, usize)> = match args[..] {
        [n, q, k] => vec![(n, q as u32, k)],
        [] => vec![(3, 2, 2), (3, 3, 2), (4, 2, 2)],
        _ => return Err("usage: rank_analysis [n q k]".into()),
    };
    for (n, q, k) in cases {
        let r = analyze_rank(n, q, k, RunOptions::default())?;
        print!(
            "n={n} q={q} k={k}: V={} E={} F={} components={} verdict {:?}",
            r.base.vertices, r.base.edges, r.base.cells, r.base.components, r.verdict
        );
        match (r.free_rank, &r.evidence) {
            (Some(rank), _) => println!(", free of rank {rank}"),
            (None, Some(ev)) => println!(
                ", cover by {} (order {}): all green={} H1={}",
                r.group.name, r.group.order, ev.all_green, ev.h1
            ),
            _ => println!(),
        }
    }
    Ok(())
}

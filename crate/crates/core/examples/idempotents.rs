//! Idempotents of M_n(GF(q)) of a given rank, their R/L-class keys, and the
//! Rees sandwich matrix of the rank-k D-class.
//!
//!     cargo run --example idempotents -- 3 2 1

use ghcomplex::linmonoid::{
    enumerate_idempotents, idempotent_count, rees_structure, SandwichEntry,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let (n, q, k) = match args[..] {
        [n, q, k] => (n, q as u32, k),
        [] => (3, 2, 1),
        _ => return Err("usage: idempotents [n q k]".into()),
    };

    let recs = enumerate_idempotents(n, q, k, 1 << 20)?;
    println!(
        "rank-{k} idempotents of M_{n}(GF({q})): {} (closed form {})",
        recs.len(),
        idempotent_count(n, k, q)
    );
    for r in recs.iter().take(6) {
        println!(
            "  {}  v={}  wT={}  R-key={}  L-key={}",
            r.matrix, r.v, r.wt, r.rclass, r.lclass
        );
    }
    if recs.len() > 6 {
        println!("  ...");
    }

    if k > 0 {
        let rees = rees_structure(n, q, k, 1 << 20)?;
        println!(
            "sandwich matrix: {} x {} with {} invertible entries",
            rees.yset.len(),
            rees.xset.len(),
            rees.nonzero_count()
        );
        for y in 0..rees.yset.len().min(8) {
            let row: String = (0..rees.xset.len().min(16))
                .map(|x| match rees.entry(y, x) {
                    SandwichEntry::Zero => '.',
                    SandwichEntry::Unit(_) => '#',
                })
                .collect();
            println!("  {row}");
        }
    }
    Ok(())
}

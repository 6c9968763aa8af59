//! E-squares of a rank-1 biordered set: which are rectangular bands, how the
//! matrix identity on the pairings agrees with the band test, and explicit
//! singularizers.
//!
//!     cargo run --example biordered_squares -- 3 3

use ghcomplex::biorder::BiorderedSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(3), |a| a.parse())?;
    let q: u32 = args.next().map_or(Ok(3), |a| a.parse())?;

    let e = BiorderedSet::from_matrix_monoid(n, q, [1], 1 << 20)?;
    let squares = e.enumerate_esquares();
    println!(
        "{} idempotents, {} R-classes, {} L-classes, {} E-squares",
        e.len(),
        e.rclass_count(),
        e.lclass_count(),
        squares.len()
    );

    let mut bands = 0;
    let mut disagreements = 0;
    for sq in &squares {
        let band = e.is_rectangular_band(sq);
        bands += band as usize;
        if e.star_identity_holds(sq)? != band {
            disagreements += 1;
        }
    }
    println!("rectangular bands: {bands}; non-bands: {}; pairing identity disagrees with band test: {disagreements}", squares.len() - bands);

    if let Some(sq) = squares.iter().find(|s| e.is_rectangular_band(s)) {
        let w = e.construct_singularizer(sq)?;
        println!(
            "square e={} f={} g={} h={}",
            e.label(sq.e),
            e.label(sq.f),
            e.label(sq.g),
            e.label(sq.h)
        );
        println!(
            "  constructed singularizer {} ({}), verified: {}",
            w.t,
            w.direction,
            e.check_witness(sq, &w)
        );
        if let Some(b) = e.find_singularizer(sq)? {
            println!("  first brute-force singularizer {} ({})", b.t, b.direction);
        }
    }
    if let Some(sq) = squares.iter().find(|s| !e.is_rectangular_band(s)) {
        println!(
            "non-band square e={} f={} g={} h={}: singularizer {}",
            e.label(sq.e),
            e.label(sq.f),
            e.label(sq.g),
            e.label(sq.h),
            e.find_singularizer(sq)?
                .map_or("none".to_string(), |w| w.t.to_string())
        );
    }
    Ok(())
}

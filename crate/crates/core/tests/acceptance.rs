//! Acceptance criteria, one PASS/FAIL line each. Every check is exact: the
//! tolerance on all counts, invariants and verdicts is zero.
//!
//! Runs without the libtest harness so the lines always reach the console;
//! the process fails if any criterion fails.

use std::time::Instant;

use ghcomplex::biorder::{star_identity, BiorderedSet, ESquare, TableSpec, WitnessElement};
use ghcomplex::complex::{
    build_gh, components, h1_abelian_invariants, pi1_presentation, spanning_tree, Complex2,
};
use ghcomplex::cover::{
    analyze_rank, build_cover, fingerprint, gh_voltage, tree_gauge, verify_rank1, Report,
    RunOptions, Verdict,
};
use ghcomplex::gf::Matrix;
use ghcomplex::grouppres::{abelian_invariants, gl_table};
use ghcomplex::linmonoid::IdempotentRecord;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(cond: bool, failures: &mut Vec<String>, msg: impl FnOnce() -> String) {
    if !cond {
        failures.push(msg());
    }
}

fn outcome(failures: Vec<String>, detail: String) -> Outcome {
    if failures.is_empty() {
        Outcome { ok: true, detail }
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
        Outcome {
            ok: false,
            detail: format!(
                "{detail}; {} failure(s): {}",
                failures.len(),
                shown.join(" | ")
            ),
        }
    }
}

/// Reachability by edge relaxation, independent of the library's BFS.
fn reachable_everywhere(c: &Complex2) -> bool {
    if c.vertices.is_empty() {
        return true;
    }
    let mut seen = vec![false; c.vertices.len()];
    seen[0] = true;
    loop {
        let mut changed = false;
        for e in &c.edges {
            if seen[e.source] != seen[e.target] {
                seen[e.source] = true;
                seen[e.target] = true;
                changed = true;
            }
        }
        if !changed {
            return seen.iter().all(|&b| b);
        }
    }
}

fn rank1_reports() -> Vec<(usize, u32, Report, f64)> {
    [(3, 2), (3, 3), (3, 5), (4, 2), (4, 3)]
        .into_iter()
        .map(|(n, q)| {
            let t = Instant::now();
            let r = verify_rank1(n, q, RunOptions::default()).expect("verify_rank1 runs");
            (n, q, r, t.elapsed().as_secs_f64())
        })
        .collect()
}

fn free_reports() -> Vec<(usize, u32, Report)> {
    [(3, 2), (3, 3)]
        .into_iter()
        .map(|(n, q)| {
            (
                n,
                q,
                analyze_rank(n, q, n - 1, RunOptions::default()).expect("analyze_rank runs"),
            )
        })
        .collect()
}

fn criterion1(reports: &[(usize, u32, Report, f64)]) -> Outcome {
    let mut f = Vec::new();
    let mut detail = Vec::new();
    for (n, q, r, secs) in reports {
        let want = (*q - 1) as usize;
        let torsion: Vec<u64> = if want > 1 { vec![want as u64] } else { vec![] };
        check(r.verdict == Verdict::Yes, &mut f, || {
            format!("({n},{q}) verdict {:?}", r.verdict)
        });
        check(r.group.order == want, &mut f, || {
            format!("({n},{q}) group order {}", r.group.order)
        });
        check(r.group.cyclic, &mut f, || {
            format!("({n},{q}) group not cyclic")
        });
        check(r.group.invariants.torsion == torsion, &mut f, || {
            format!("({n},{q}) invariants {}", r.group.invariants)
        });
        check(r.base.components == 1, &mut f, || {
            format!("({n},{q}) {} components", r.base.components)
        });
        check(r.warnings.is_empty(), &mut f, || {
            format!("({n},{q}) warnings {:?}", r.warnings)
        });
        detail.push(format!("({n},{q}) yes |G|={want} {secs:.1}s"));
    }
    outcome(f, detail.join(", "))
}

fn criterion2(reports: &[(usize, u32, Report)]) -> Outcome {
    let mut f = Vec::new();
    let mut detail = Vec::new();
    for (n, q, r) in reports {
        let e = BiorderedSet::from_matrix_monoid(*n, *q, [n - 1], 1 << 20).unwrap();
        let gh = build_gh(&e).unwrap();
        let c = &gh.complex;
        let connected = reachable_everywhere(c);
        let rank = c.edges.len() - c.vertices.len() + 1;
        let comps = components(c);
        let tree = spanning_tree(c, &comps, 0, 0).unwrap();
        let p = pi1_presentation(c, &comps, 0, 0, &tree).unwrap();
        check(connected, &mut f, || {
            format!("({n},{q}) not connected by reachability")
        });
        check(c.cells.is_empty() && r.base.cells == 0, &mut f, || {
            format!("({n},{q}) has {} cells", c.cells.len())
        });
        check(
            r.verdict == Verdict::Free && r.free_rank == Some(rank),
            &mut f,
            || format!("({n},{q}) verdict {:?} rank {:?}", r.verdict, r.free_rank),
        );
        check(
            p.generators == rank && p.relators.is_empty(),
            &mut f,
            || {
                format!(
                    "({n},{q}) presentation {}/{}",
                    p.generators,
                    p.relators.len()
                )
            },
        );
        check(
            h1_abelian_invariants(c, &comps, 0).free_rank == rank,
            &mut f,
            || format!("({n},{q}) H1 rank"),
        );
        if (*n, *q) == (3, 2) {
            check(rank == 15, &mut f, || {
                format!("(3,2) free rank {rank}, expected 15")
            });
        }
        detail.push(format!("({n},{q}) free rank {rank}, 0 cells"));
    }
    outcome(f, detail.join(", "))
}

fn scopes() -> Vec<(&'static str, BiorderedSet)> {
    vec![
        (
            "M3(F2) ranks 1,2",
            BiorderedSet::from_matrix_monoid(3, 2, [1, 2], 1 << 20).unwrap(),
        ),
        (
            "M3(F3) rank 1",
            BiorderedSet::from_matrix_monoid(3, 3, [1], 1 << 20).unwrap(),
        ),
    ]
}

fn mat(e: &BiorderedSet, i: usize) -> &Matrix {
    &e.records().unwrap()[i].matrix
}

/// efghe = e by raw matrix products.
fn closes(e: &BiorderedSet, sq: &ESquare) -> bool {
    let [a, b, c, d] = sq.as_array().map(|i| mat(e, i));
    &(&(&(a * b) * c) * d) * a == *a
}

/// Direction equations by raw products, independent of the library's check.
fn raw_singularizes(e: &BiorderedSet, sq: &ESquare, t: &Matrix, dir: &str) -> bool {
    let [a, b, c, d] = sq.as_array().map(|i| mat(e, i));
    match dir {
        "left-right" => &(t * a) == a && &(t * d) == d && &(a * t) == b && &(d * t) == c,
        "right-left" => &(t * b) == b && &(t * c) == c && &(b * t) == a && &(c * t) == d,
        "top-bottom" => &(a * t) == a && &(b * t) == b && &(t * a) == d && &(t * b) == c,
        "bottom-top" => &(d * t) == d && &(c * t) == c && &(t * d) == a && &(t * c) == b,
        _ => false,
    }
}

fn criterion3() -> Outcome {
    let mut f = Vec::new();
    let mut detail = Vec::new();
    for (name, e) in scopes() {
        let squares = e.enumerate_esquares();
        let mut singular = 0;
        for sq in &squares {
            if e.find_singularizer(sq).unwrap().is_some() {
                singular += 1;
                check(closes(&e, sq), &mut f, || {
                    format!("{name}: singular square {:?} has efghe != e", sq.as_array())
                });
            }
        }
        detail.push(format!(
            "{name}: {singular}/{} singular, 0 violations",
            squares.len()
        ));
    }
    outcome(f, detail.join(", "))
}

fn criterion4() -> Outcome {
    let mut f = Vec::new();
    let mut detail = Vec::new();
    for (name, e) in scopes() {
        let squares = e.enumerate_esquares();
        let mut bands = 0;
        for sq in squares.iter().filter(|s| closes(&e, s)) {
            bands += 1;
            let distinct = {
                let mut a = sq.as_array();
                a.sort_unstable();
                a.windows(2).all(|w| w[0] != w[1])
            };
            check(distinct, &mut f, || {
                format!("{name}: degenerate square {:?}", sq.as_array())
            });
            check(e.find_singularizer(sq).unwrap().is_some(), &mut f, || {
                format!("{name}: band {:?} has no singularizer", sq.as_array())
            });
            match e.construct_singularizer(sq) {
                Ok(w) => {
                    let ok = match &w.t {
                        WitnessElement::Matrix(t) => {
                            &(t * t) == t && raw_singularizes(&e, sq, t, &w.direction.to_string())
                        }
                        WitnessElement::Index(_) => false,
                    };
                    check(ok, &mut f, || {
                        format!(
                            "{name}: constructed witness for {:?} fails raw check",
                            sq.as_array()
                        )
                    });
                }
                Err(err) => f.push(format!(
                    "{name}: construct failed on {:?}: {err}",
                    sq.as_array()
                )),
            }
        }
        detail.push(format!("{name}: {bands} band squares"));
    }
    outcome(f, detail.join(", "))
}

fn record(e: &BiorderedSet, i: usize) -> &IdempotentRecord {
    &e.records().unwrap()[i]
}

fn criterion5() -> Outcome {
    let mut f = Vec::new();
    let mut detail = Vec::new();
    for (name, e) in scopes() {
        let squares = e.enumerate_esquares();
        let mut variants = 0usize;
        for sq in &squares {
            let (re, rg) = (record(&e, sq.e), record(&e, sq.g));
            let star = star_identity(&re.v, &rg.v, &re.wt, &rg.wt).unwrap();
            let band = closes(&e, sq);
            check(star == band, &mut f, || {
                format!("{name}: {:?} star {star} band {band}", sq.as_array())
            });
            let k = re.rank;
            let q = re.matrix.modulus();
            for x in gl_table(k, q, 1 << 20).unwrap().elements {
                let xi = x.mat_inv().unwrap();
                let changes = [
                    (&re.v * &x, &x * &re.wt, rg.v.clone(), rg.wt.clone()),
                    (re.v.clone(), re.wt.clone(), &rg.v * &x, &x * &rg.wt),
                    (&re.v * &x, &x * &re.wt, &rg.v * &x, &x * &rg.wt),
                    (&re.v * &x, &xi * &re.wt, &rg.v * &x, &xi * &rg.wt),
                ];
                for (v1, w1, v2, w2) in changes {
                    variants += 1;
                    let s = star_identity(&v1, &v2, &w1, &w2).unwrap();
                    check(s == star, &mut f, || {
                        format!("{name}: {:?} changes under x={x}", sq.as_array())
                    });
                }
            }
        }
        detail.push(format!(
            "{name}: {} squares, {variants} representative changes",
            squares.len()
        ));
    }
    outcome(f, detail.join(", "))
}

fn criterion6(rank1: &[(usize, u32, Report, f64)], free: &[(usize, u32, Report)]) -> Outcome {
    let mut f = Vec::new();
    let all = rank1
        .iter()
        .map(|(n, q, r, _)| (n, q, r))
        .chain(free.iter().map(|(n, q, r)| (n, q, r)));
    let mut count = 0;
    for (n, q, r) in all {
        count += 1;
        let m = r.group.order;
        let (b, c) = (&r.base, &r.cover);
        check(c.axioms.all(), &mut f, || {
            format!("({n},{q},{}) axioms {:?}", r.k, c.axioms)
        });
        check(c.vertices == m * b.vertices, &mut f, || {
            format!("({n},{q}) |V| {}", c.vertices)
        });
        check(c.edges == m * b.edges, &mut f, || {
            format!("({n},{q}) |E| {}", c.edges)
        });
        check(c.cells == m * b.cells, &mut f, || {
            format!("({n},{q}) |F| {}", c.cells)
        });
        let chi = |v: usize, e: usize, x: usize| v as i64 - e as i64 + x as i64;
        check(
            chi(c.vertices, c.edges, c.cells) == m as i64 * chi(b.vertices, b.edges, b.cells),
            &mut f,
            || format!("({n},{q}) chi"),
        );
    }
    outcome(f, format!("{count} covers: vertex count, star bijection, free action, |G| lifts per cell, chi, fibre collapse"))
}

fn table(text: &str) -> BiorderedSet {
    BiorderedSet::from_table(TableSpec::from_json(text).unwrap(), 256).unwrap()
}

fn criterion7(rank1: &[(usize, u32, Report, f64)], free: &[(usize, u32, Report)]) -> Outcome {
    let mut f = Vec::new();
    let mut compared = 0;
    for (n, q, r, _) in rank1 {
        compared += r.base.h1.len() + 1;
        check(r.base.h1 == r.base.pi1_abelianization, &mut f, || {
            format!("({n},{q}) base")
        });
        let ev = r.evidence.as_ref().unwrap();
        check(ev.h1 == ev.pi1_abelianization, &mut f, || {
            format!("({n},{q}) cover")
        });
        let torsion: Vec<u64> = if *q > 2 {
            vec![(*q - 1) as u64]
        } else {
            vec![]
        };
        check(
            r.base
                .h1
                .iter()
                .all(|h| h.free_rank == 0 && h.torsion == torsion),
            &mut f,
            || format!("({n},{q}) base H1 {:?}", r.base.h1),
        );
    }
    for (n, q, r) in free {
        compared += r.base.h1.len();
        check(r.base.h1 == r.base.pi1_abelianization, &mut f, || {
            format!("({n},{q}) rank n-1")
        });
    }
    let tables = [
        (
            "left zero",
            r#"{"size": 3, "table": [0,0,0, 1,1,1, 2,2,2]}"#,
        ),
        (
            "right zero",
            r#"{"size": 3, "table": [0,1,2, 0,1,2, 0,1,2]}"#,
        ),
        (
            "2x2 band",
            r#"{"size": 4, "table": [0,1,0,1, 0,1,0,1, 2,3,2,3, 2,3,2,3]}"#,
        ),
    ];
    for (name, text) in tables {
        let e = table(text);
        let gh = build_gh(&e).unwrap();
        let c = &gh.complex;
        let comps = components(c);
        for k in 0..comps.count {
            compared += 1;
            let root = comps.vertices(k)[0];
            let tree = spanning_tree(c, &comps, k, root).unwrap();
            let p = pi1_presentation(c, &comps, k, root, &tree).unwrap();
            check(
                abelian_invariants(&p) == h1_abelian_invariants(c, &comps, k),
                &mut f,
                || format!("{name} component {k}"),
            );
        }
    }
    outcome(f, format!("{compared} components compared"))
}

fn criterion8(rank1: &[(usize, u32, Report, f64)]) -> Outcome {
    let mut f = Vec::new();
    let mut green = 0;
    for (n, q, r, _) in rank1 {
        let ev = r.evidence.as_ref().unwrap();
        if ev.all_green {
            green += 1;
            check(
                ev.tietze_trivial && ev.presentation_size.generators == 0,
                &mut f,
                || format!("({n},{q}) Tietze not trivial"),
            );
            check(ev.h1.is_trivial(), &mut f, || {
                format!("({n},{q}) H1 {}", ev.h1)
            });
        }
    }
    outcome(
        f,
        format!(
            "{green}/{} covers all green, each with trivial Tietze result and H1 = 0",
            rank1.len()
        ),
    )
}

fn criterion9() -> Outcome {
    let mut f = Vec::new();
    let q = 3;
    let e = BiorderedSet::from_matrix_monoid(3, q, [1], 1 << 20).unwrap();
    let gh = build_gh(&e).unwrap();
    let base = &gh.complex;
    let g = gl_table(1, q, 1 << 20).unwrap();
    let phi = gh_voltage(&e, &g).unwrap();
    let comps = components(base);
    let root = gh.l_vertex_of(&e, 0);
    let tree = spanning_tree(base, &comps, comps.of_vertex[root], root).unwrap();
    let gauged = tree_gauge(base, &comps, &tree, &g.table, &phi);
    let tree_identity = (0..base.edges.len())
        .filter(|&i| tree.in_tree[i])
        .all(|i| gauged.0[i] == g.table.identity());
    check(tree_identity, &mut f, || {
        "gauged voltage not trivial on the tree".into()
    });
    let a = fingerprint(&build_cover(base, &g.table, &phi, 1 << 22).unwrap().complex);
    let b = fingerprint(
        &build_cover(base, &g.table, &gauged, 1 << 22)
            .unwrap()
            .complex,
    );
    check(a == b, &mut f, || format!("{a:?} vs {b:?}"));
    check(a.components == 1, &mut f, || {
        format!("{} components", a.components)
    });
    outcome(
        f,
        format!(
            "V={} E={} F={} components={} H1={:?}",
            a.vertices, a.edges, a.cells, a.components, a.h1
        ),
    )
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    // `cargo test -- --list` and similar probes get an empty listing
    if args.iter().any(|a| a == "--list") {
        return;
    }
    println!("acceptance criteria (tolerance: exact, zero discrepancies)");
    let rank1 = rank1_reports();
    let free = free_reports();
    let results = [
        (
            "1 rank-1 maximal subgroup is cyclic of order q-1",
            criterion1(&rank1),
        ),
        (
            "2 rank n-1 fundamental group is free of rank E-V+1",
            criterion2(&free),
        ),
        ("3 singular squares satisfy efghe = e", criterion3()),
        ("4 band squares have verified singularizers", criterion4()),
        (
            "5 pairing identity matches band test, representative-free",
            criterion5(),
        ),
        ("6 cover axioms", criterion6(&rank1, &free)),
        ("7 abelianized pi1 equals H1", criterion7(&rank1, &free)),
        ("8 green closure is sound", criterion8(&rank1)),
        ("9 tree gauge gives an isomorphic cover", criterion9()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "{} criterion {name}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += !o.ok as usize;
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

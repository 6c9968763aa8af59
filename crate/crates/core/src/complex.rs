//! Square 2-complexes over bipartite graphs, and the complex built from a
//! biordered set.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::biorder::{BiorderError, BiorderedSet, ESquare, SingularizerWitness};
use crate::grouppres::Presentation;
use crate::smith::{quotient_invariants, AbelianInvariants};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("vertex {0} out of range")]
    NoSuchVertex(usize),
    #[error("edge {0} out of range")]
    NoSuchEdge(usize),
    #[error("edge {from}->{to} does not run from an L-side to an R-side vertex")]
    NotBipartite { from: usize, to: usize },
    #[error("cell boundary {0:?} is not a closed walk")]
    OpenBoundary(Vec<(usize, i8)>),
    #[error("root vertex {0} is not in the component")]
    RootNotInComponent(usize),
    #[error("basepoint vertex {0} is not in the component")]
    BasepointNotInComponent(usize),
    #[error("component {0} out of range")]
    NoSuchComponent(usize),
    #[error("malformed complex JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Biorder(#[from] BiorderError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub side: Side,
    pub label: String,
}

/// Positively oriented from an L-side vertex to an R-side vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub label: String,
}

/// Boundary word `e f⁻¹ g h⁻¹` as (edge, ±1) steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub boundary: [(usize, i8); 4],
}

impl Cell {
    pub fn square(e: usize, f: usize, g: usize, h: usize) -> Self {
        Self {
            boundary: [(e, 1), (f, -1), (g, 1), (h, -1)],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Complex2 {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub cells: Vec<Cell>,
}

impl Complex2 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, side: Side, label: impl Into<String>) -> usize {
        self.vertices.push(Vertex {
            side,
            label: label.into(),
        });
        self.vertices.len() - 1
    }

    pub fn add_edge(
        &mut self,
        source: usize,
        target: usize,
        label: impl Into<String>,
    ) -> Result<usize, ComplexError> {
        let side = |v: usize| {
            self.vertices
                .get(v)
                .map(|x| x.side)
                .ok_or(ComplexError::NoSuchVertex(v))
        };
        if side(source)? != Side::L || side(target)? != Side::R {
            return Err(ComplexError::NotBipartite {
                from: source,
                to: target,
            });
        }
        self.edges.push(Edge {
            source,
            target,
            label: label.into(),
        });
        Ok(self.edges.len() - 1)
    }

    pub fn add_cell(&mut self, cell: Cell) -> Result<usize, ComplexError> {
        self.check_cell(&cell)?;
        self.cells.push(cell);
        Ok(self.cells.len() - 1)
    }

    /// Start vertex of the boundary walk.
    pub fn cell_start(&self, cell: &Cell) -> usize {
        let (e, s) = cell.boundary[0];
        if s > 0 {
            self.edges[e].source
        } else {
            self.edges[e].target
        }
    }

    fn check_cell(&self, cell: &Cell) -> Result<(), ComplexError> {
        let mut at = None;
        let mut start = None;
        for &(e, s) in &cell.boundary {
            let edge = self.edges.get(e).ok_or(ComplexError::NoSuchEdge(e))?;
            let (from, to) = if s > 0 {
                (edge.source, edge.target)
            } else {
                (edge.target, edge.source)
            };
            if s != 1 && s != -1 || at.is_some_and(|a| a != from) {
                return Err(ComplexError::OpenBoundary(cell.boundary.to_vec()));
            }
            start.get_or_insert(from);
            at = Some(to);
        }
        if at != start {
            return Err(ComplexError::OpenBoundary(cell.boundary.to_vec()));
        }
        Ok(())
    }

    /// Checks the bipartite orientation and closure of every cell.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for e in &self.edges {
            let side = |v: usize| {
                self.vertices
                    .get(v)
                    .map(|x| x.side)
                    .ok_or(ComplexError::NoSuchVertex(v))
            };
            if side(e.source)? != Side::L || side(e.target)? != Side::R {
                return Err(ComplexError::NotBipartite {
                    from: e.source,
                    to: e.target,
                });
            }
        }
        self.cells.iter().try_for_each(|c| self.check_cell(c))
    }

    /// Neighbours of each vertex as (vertex, edge), ordered by vertex then edge.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.source].push((e.target, i));
            adj[e.target].push((e.source, i));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Cells incident to each edge (a cell appears once per occurrence).
    pub fn cells_of_edge(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.edges.len()];
        for (i, c) in self.cells.iter().enumerate() {
            for &(e, _) in &c.boundary {
                out[e].push(i);
            }
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        let c: Complex2 =
            serde_json::from_str(text).map_err(|e| ComplexError::Json(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("complex serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub of_vertex: Vec<usize>,
    pub count: usize,
}

impl Components {
    pub fn vertices(&self, component: usize) -> Vec<usize> {
        (0..self.of_vertex.len())
            .filter(|&v| self.of_vertex[v] == component)
            .collect()
    }

    pub fn edges(&self, c: &Complex2, component: usize) -> Vec<usize> {
        (0..c.edges.len())
            .filter(|&e| self.of_vertex[c.edges[e].source] == component)
            .collect()
    }

    pub fn cells(&self, c: &Complex2, component: usize) -> Vec<usize> {
        (0..c.cells.len())
            .filter(|&i| self.of_vertex[c.cell_start(&c.cells[i])] == component)
            .collect()
    }

    fn check(&self, component: usize) -> Result<(), ComplexError> {
        if component < self.count {
            Ok(())
        } else {
            Err(ComplexError::NoSuchComponent(component))
        }
    }
}

/// Connected components of the 1-skeleton, numbered by least vertex.
pub fn components(c: &Complex2) -> Components {
    let adj = c.adjacency();
    let mut of_vertex = vec![usize::MAX; c.vertices.len()];
    let mut count = 0;
    for s in 0..c.vertices.len() {
        if of_vertex[s] != usize::MAX {
            continue;
        }
        of_vertex[s] = count;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if of_vertex[w] == usize::MAX {
                    of_vertex[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    Components { of_vertex, count }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: usize,
    pub component: usize,
    /// Edge to the parent, `None` at the root and outside the component.
    pub parent_edge: Vec<Option<usize>>,
    pub in_tree: Vec<bool>,
    /// Component vertices in BFS order.
    pub order: Vec<usize>,
}

impl SpanningTree {
    pub fn edge_count(&self) -> usize {
        self.in_tree.iter().filter(|&&b| b).count()
    }

    /// Neighbour reached from `v` through its parent edge.
    pub fn parent(&self, c: &Complex2, v: usize) -> Option<usize> {
        self.parent_edge[v].map(|e| {
            if c.edges[e].source == v {
                c.edges[e].target
            } else {
                c.edges[e].source
            }
        })
    }
}

/// Breadth-first tree; neighbours visited in vertex order.
pub fn spanning_tree(
    c: &Complex2,
    comps: &Components,
    component: usize,
    root: usize,
) -> Result<SpanningTree, ComplexError> {
    comps.check(component)?;
    if comps.of_vertex.get(root) != Some(&component) {
        return Err(ComplexError::RootNotInComponent(root));
    }
    let adj = c.adjacency();
    let mut seen = vec![false; c.vertices.len()];
    let mut parent_edge = vec![None; c.vertices.len()];
    let mut in_tree = vec![false; c.edges.len()];
    let mut order = vec![root];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent_edge[w] = Some(e);
                in_tree[e] = true;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    Ok(SpanningTree {
        root,
        component,
        parent_edge,
        in_tree,
        order,
    })
}

/// Generators are the non-tree edges of the component (in edge order); each
/// cell contributes its boundary word with tree edges deleted.
pub fn pi1_presentation(
    c: &Complex2,
    comps: &Components,
    component: usize,
    basepoint: usize,
    tree: &SpanningTree,
) -> Result<Presentation, ComplexError> {
    comps.check(component)?;
    if comps.of_vertex.get(basepoint) != Some(&component) {
        return Err(ComplexError::BasepointNotInComponent(basepoint));
    }
    let mut gen_of = vec![usize::MAX; c.edges.len()];
    let mut labels = Vec::new();
    for e in comps.edges(c, component) {
        if !tree.in_tree[e] {
            gen_of[e] = labels.len();
            labels.push(format!("e{e}"));
        }
    }
    let relators = comps
        .cells(c, component)
        .into_iter()
        .map(|i| {
            c.cells[i]
                .boundary
                .iter()
                .filter(|&&(e, _)| !tree.in_tree[e])
                .map(|&(e, s)| s as i64 * (gen_of[e] as i64 + 1))
                .collect()
        })
        .collect();
    Ok(Presentation {
        generators: labels.len(),
        relators,
        labels,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreenClosure {
    pub green: Vec<bool>,
    pub green_count: usize,
    pub component_edges: usize,
    pub all_green: bool,
}

/// Starting from the tree edges, repeatedly colours the last non-green edge
/// of any cell whose other boundary edges are green.
pub fn green_closure(
    c: &Complex2,
    comps: &Components,
    component: usize,
    tree: &SpanningTree,
) -> GreenClosure {
    let order = comps.cells(c, component);
    green_closure_with_schedule(c, comps, component, tree, &order)
}

/// Same fixpoint, with cells seeded in the given order.
pub fn green_closure_with_schedule(
    c: &Complex2,
    comps: &Components,
    component: usize,
    tree: &SpanningTree,
    schedule: &[usize],
) -> GreenClosure {
    let mut green = tree.in_tree.clone();
    let cells_of_edge = c.cells_of_edge();
    let lone_red = |green: &[bool], cell: usize| {
        let mut red = c.cells[cell]
            .boundary
            .iter()
            .map(|&(e, _)| e)
            .filter(|&e| !green[e]);
        let first = red.next()?;
        red.all(|e| e == first).then_some(first)
    };
    let mut work: Vec<usize> = schedule.iter().rev().copied().collect();
    while let Some(cell) = work.pop() {
        if let Some(e) = lone_red(&green, cell) {
            green[e] = true;
            for &other in cells_of_edge[e].iter().rev() {
                work.push(other);
            }
        }
    }
    let component_edges = comps.edges(c, component);
    let green_count = component_edges.iter().filter(|&&e| green[e]).count();
    GreenClosure {
        all_green: green_count == component_edges.len(),
        green,
        green_count,
        component_edges: component_edges.len(),
    }
}

/// H_1 of the component: cycle space modulo cell boundaries.
pub fn h1_abelian_invariants(
    c: &Complex2,
    comps: &Components,
    component: usize,
) -> AbelianInvariants {
    let edges = comps.edges(c, component);
    let mut col = vec![usize::MAX; c.edges.len()];
    for (i, &e) in edges.iter().enumerate() {
        col[e] = i;
    }
    let rows: Vec<Vec<(usize, i64)>> = comps
        .cells(c, component)
        .into_iter()
        .map(|i| {
            let mut row: Vec<(usize, i64)> = Vec::with_capacity(4);
            for &(e, s) in &c.cells[i].boundary {
                match row.iter_mut().find(|(cc, _)| *cc == col[e]) {
                    Some(x) => x.1 += s as i64,
                    None => row.push((col[e], s as i64)),
                }
            }
            row.retain(|&(_, v)| v != 0);
            row.sort_unstable();
            row
        })
        .collect();
    let boundaries = quotient_invariants(edges.len(), &rows);
    // edges.len() - free_rank = rank of the boundary map; cycles have rank E - V + 1
    let vertices = comps.vertices(component).len();
    let cycle_rank = edges.len() + 1 - vertices;
    let boundary_rank = edges.len() - boundaries.free_rank;
    AbelianInvariants {
        free_rank: cycle_rank - boundary_rank,
        torsion: boundaries.torsion,
    }
}

pub fn euler_characteristic(c: &Complex2, comps: &Components, component: usize) -> i64 {
    comps.vertices(component).len() as i64 - comps.edges(c, component).len() as i64
        + comps.cells(c, component).len() as i64
}

/// Graphviz rendering of the 1-skeleton; `green` edges are coloured.
pub fn to_dot(c: &Complex2, green: Option<&[bool]>) -> String {
    let mut s = String::from("graph gh {\n");
    for (i, v) in c.vertices.iter().enumerate() {
        let shape = match v.side {
            Side::L => "box",
            Side::R => "circle",
        };
        let _ = writeln!(
            s,
            "  v{i} [shape={shape}, label=\"{}\"];",
            v.label.replace('"', "'")
        );
    }
    for (i, e) in c.edges.iter().enumerate() {
        let colour = if green.is_some_and(|g| g[i]) {
            ", color=green"
        } else {
            ""
        };
        let _ = writeln!(
            s,
            "  v{} -- v{} [label=\"{}\"{colour}];",
            e.source,
            e.target,
            e.label.replace('"', "'")
        );
    }
    s.push_str("}\n");
    s
}

/// A singular square and the idempotent that singularizes it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SewnSquare {
    pub square: ESquare,
    pub witness: SingularizerWitness,
}

/// The complex of a biordered set: L-class vertices first, then R-class
/// vertices, edge `i` for idempotent `i`, and cell `j` for `sewn[j]`.
#[derive(Debug, Clone)]
pub struct GhComplex {
    pub complex: Complex2,
    pub squares: Vec<ESquare>,
    pub sewn: Vec<SewnSquare>,
    pub lclass_vertex: Vec<usize>,
    pub rclass_vertex: Vec<usize>,
}

impl GhComplex {
    /// Vertex of the L-class of idempotent `i`.
    pub fn l_vertex_of(&self, e: &BiorderedSet, i: usize) -> usize {
        self.lclass_vertex[e.lclass_of(i)]
    }
}

pub fn build_gh(e: &BiorderedSet) -> Result<GhComplex, ComplexError> {
    let mut c = Complex2::new();
    let mut lrep = vec![usize::MAX; e.lclass_count()];
    let mut rrep = vec![usize::MAX; e.rclass_count()];
    for i in (0..e.len()).rev() {
        lrep[e.lclass_of(i)] = i;
        rrep[e.rclass_of(i)] = i;
    }
    let lclass_vertex: Vec<usize> = lrep
        .iter()
        .map(|&i| c.add_vertex(Side::L, e.lclass_label(i)))
        .collect();
    let rclass_vertex: Vec<usize> = rrep
        .iter()
        .map(|&i| c.add_vertex(Side::R, e.rclass_label(i)))
        .collect();
    for i in 0..e.len() {
        c.add_edge(
            lclass_vertex[e.lclass_of(i)],
            rclass_vertex[e.rclass_of(i)],
            e.label(i),
        )?;
    }
    let squares = e.enumerate_esquares();
    let witnesses: Vec<Option<SingularizerWitness>> = squares
        .par_iter()
        .map(|sq| e.singular_witness(sq))
        .collect::<Result<_, _>>()?;
    let mut sewn = Vec::new();
    for (sq, w) in squares.iter().zip(witnesses) {
        if let Some(witness) = w {
            c.add_cell(Cell::square(sq.e, sq.f, sq.g, sq.h))?;
            sewn.push(SewnSquare {
                square: *sq,
                witness,
            });
        }
    }
    Ok(GhComplex {
        complex: c,
        squares,
        sewn,
        lclass_vertex,
        rclass_vertex,
    })
}

/// π₁ presentation of one component, based at its least vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pi1Entry {
    pub component: usize,
    pub basepoint: usize,
    pub generators: usize,
    pub relators: Vec<Vec<i64>>,
}

/// The complex itself plus per-component invariants. Extra keys are ignored
/// by [`Complex2::from_json`], so the report re-ingests as a complex.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexReport {
    #[serde(flatten)]
    pub complex: Complex2,
    pub components: usize,
    pub pi1: Vec<Pi1Entry>,
    pub h1: Vec<AbelianInvariants>,
    pub chi: Vec<i64>,
    /// Green closure from the BFS tree, per component.
    pub all_green: Vec<bool>,
    #[serde(skip)]
    pub green: Vec<bool>,
}

/// Basepoint is the least vertex of each component, which is an L-side
/// vertex for every complex built here.
pub fn complex_report(c: &Complex2) -> Result<ComplexReport, ComplexError> {
    let comps = components(c);
    let mut report = ComplexReport {
        complex: c.clone(),
        components: comps.count,
        pi1: Vec::new(),
        h1: Vec::new(),
        chi: Vec::new(),
        all_green: Vec::new(),
        green: vec![false; c.edges.len()],
    };
    for k in 0..comps.count {
        let base = comps.vertices(k)[0];
        let tree = spanning_tree(c, &comps, k, base)?;
        let p = pi1_presentation(c, &comps, k, base, &tree)?;
        report.pi1.push(Pi1Entry {
            component: k,
            basepoint: base,
            generators: p.generators,
            relators: p.relators,
        });
        report.h1.push(h1_abelian_invariants(c, &comps, k));
        report.chi.push(euler_characteristic(c, &comps, k));
        let gc = green_closure(c, &comps, k, &tree);
        for e in comps.edges(c, k) {
            report.green[e] = gc.green[e];
        }
        report.all_green.push(gc.all_green);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biorder::TableSpec;
    use crate::grouppres::{abelian_invariants, tietze_simplify};
    use proptest::prelude::*;

    fn gh(n: usize, q: u32, ranks: &[usize]) -> (BiorderedSet, GhComplex) {
        let e = BiorderedSet::from_matrix_monoid(n, q, ranks.iter().copied(), 1 << 20).unwrap();
        let g = build_gh(&e).unwrap();
        (e, g)
    }

    // reachability by repeated relaxation, independent of the BFS code
    fn reach_count(c: &Complex2, start: usize) -> usize {
        let mut seen = vec![false; c.vertices.len()];
        seen[start] = true;
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
                return seen.iter().filter(|&&b| b).count();
            }
        }
    }

    fn single_edge() -> Complex2 {
        let mut c = Complex2::new();
        let l = c.add_vertex(Side::L, "L");
        let r = c.add_vertex(Side::R, "R");
        c.add_edge(l, r, "e").unwrap();
        c
    }

    #[test]
    fn rank1_gf2_counts() {
        let (_, g) = gh(3, 2, &[1]);
        let c = &g.complex;
        let lines = crate::gf::all_matrices(3, 1, 2)
            .filter(|m| !m.is_zero())
            .count();
        assert_eq!(lines, 7);
        assert_eq!(c.vertices.len(), 14);
        assert_eq!(c.edges.len(), 28);
        assert_eq!(c.vertices.iter().filter(|v| v.side == Side::L).count(), 7);
        c.validate().unwrap();
    }

    #[test]
    fn rank2_gf2_has_no_cells() {
        let (_, g) = gh(3, 2, &[2]);
        let c = &g.complex;
        assert_eq!(
            (c.vertices.len(), c.edges.len(), c.cells.len()),
            (14, 28, 0)
        );
        let comps = components(c);
        assert_eq!(comps.count, 1);
        assert_eq!(reach_count(c, 0), 14);
        let tree = spanning_tree(c, &comps, 0, 0).unwrap();
        let p = pi1_presentation(c, &comps, 0, 0, &tree).unwrap();
        assert_eq!((p.generators, p.relators.len()), (15, 0));
        assert_eq!(
            h1_abelian_invariants(c, &comps, 0),
            AbelianInvariants {
                free_rank: 15,
                torsion: vec![]
            }
        );
        assert_eq!(euler_characteristic(c, &comps, 0), -14);
    }

    #[test]
    fn single_idempotent_and_empty() {
        let c = single_edge();
        let comps = components(&c);
        assert_eq!(comps.count, 1);
        let tree = spanning_tree(&c, &comps, 0, 0).unwrap();
        assert_eq!(tree.edge_count(), 1);
        assert!(green_closure(&c, &comps, 0, &tree).all_green);
        assert!(h1_abelian_invariants(&c, &comps, 0).is_trivial());
        assert_eq!(euler_characteristic(&c, &comps, 0), 1);
        let p = pi1_presentation(&c, &comps, 0, 0, &tree).unwrap();
        assert!(p.is_trivial_presentation());
        assert_eq!(components(&Complex2::new()).count, 0);
    }

    #[test]
    fn two_ranks_two_components() {
        let (e, g) = gh(3, 2, &[1, 2]);
        let comps = components(&g.complex);
        assert_eq!(comps.count, 2);
        // each rank is one D-class; components never mix ranks
        let ranks: Vec<usize> = e.records().unwrap().iter().map(|r| r.rank).collect();
        for (i, edge) in g.complex.edges.iter().enumerate() {
            let same = (0..ranks.len()).filter(|&j| {
                comps.of_vertex[g.complex.edges[j].source] == comps.of_vertex[edge.source]
            });
            assert!(same.into_iter().all(|j| ranks[j] == ranks[i]));
        }
    }

    #[test]
    fn rank1_gf3_is_connected_with_torsion_2() {
        let (_, g) = gh(3, 3, &[1]);
        let c = &g.complex;
        let comps = components(c);
        assert_eq!(comps.count, 1);
        assert_eq!(reach_count(c, 0), c.vertices.len());
        assert_eq!(
            h1_abelian_invariants(c, &comps, 0),
            AbelianInvariants {
                free_rank: 0,
                torsion: vec![2]
            }
        );
        let tree = spanning_tree(c, &comps, 0, 0).unwrap();
        let p = pi1_presentation(c, &comps, 0, 0, &tree).unwrap();
        assert_eq!(
            abelian_invariants(&p),
            AbelianInvariants {
                free_rank: 0,
                torsion: vec![2]
            }
        );
    }

    #[test]
    fn rank1_gf2_presentation_is_trivial() {
        let (_, g) = gh(3, 2, &[1]);
        let c = &g.complex;
        let comps = components(c);
        let tree = spanning_tree(c, &comps, 0, 0).unwrap();
        assert_eq!(tree.edge_count(), 13);
        let p = pi1_presentation(c, &comps, 0, 0, &tree).unwrap();
        assert_eq!(p.generators, 28 - 14 + 1);
        assert!(abelian_invariants(&p).is_trivial());
        assert!(tietze_simplify(&p, 10_000)
            .presentation
            .is_trivial_presentation());
        assert!(green_closure(c, &comps, 0, &tree).all_green);
    }

    #[test]
    fn spanning_tree_errors_and_determinism() {
        let (_, g) = gh(3, 2, &[1, 2]);
        let c = &g.complex;
        let comps = components(c);
        let other = (0..c.vertices.len())
            .find(|&v| comps.of_vertex[v] == 1)
            .unwrap();
        assert_eq!(
            spanning_tree(c, &comps, 0, other),
            Err(ComplexError::RootNotInComponent(other))
        );
        let t = spanning_tree(c, &comps, 0, 0).unwrap();
        assert_eq!(t, spanning_tree(c, &comps, 0, 0).unwrap());
        assert!(matches!(
            pi1_presentation(c, &comps, 0, other, &t),
            Err(ComplexError::BasepointNotInComponent(_))
        ));
    }

    #[test]
    fn green_closure_stalls_on_isolated_generator() {
        // a 4-cycle with a cell plus a second 4-cycle without one
        let mut c = Complex2::new();
        let l: Vec<usize> = (0..3)
            .map(|i| c.add_vertex(Side::L, format!("L{i}")))
            .collect();
        let r: Vec<usize> = (0..2)
            .map(|i| c.add_vertex(Side::R, format!("R{i}")))
            .collect();
        let e00 = c.add_edge(l[0], r[0], "a").unwrap();
        let e01 = c.add_edge(l[0], r[1], "b").unwrap();
        let e11 = c.add_edge(l[1], r[1], "c").unwrap();
        let e10 = c.add_edge(l[1], r[0], "d").unwrap();
        c.add_edge(l[2], r[0], "x").unwrap();
        c.add_edge(l[2], r[1], "y").unwrap();
        c.add_cell(Cell::square(e00, e10, e11, e01)).unwrap();
        let comps = components(&c);
        let tree = spanning_tree(&c, &comps, 0, 0).unwrap();
        let gc = green_closure(&c, &comps, 0, &tree);
        assert!(!gc.all_green);
        assert_eq!(h1_abelian_invariants(&c, &comps, 0).free_rank, 1);
    }

    #[test]
    fn open_boundary_rejected() {
        let mut c = single_edge();
        assert!(c.add_cell(Cell::square(0, 0, 0, 0)).is_ok());
        let r2 = c.add_vertex(Side::R, "R2");
        c.add_edge(0, r2, "f").unwrap();
        assert!(matches!(
            c.add_cell(Cell::square(0, 1, 1, 1)),
            Err(ComplexError::OpenBoundary(_))
        ));
        assert!(matches!(
            c.add_edge(r2, 0, "bad"),
            Err(ComplexError::NotBipartite { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let (_, g) = gh(3, 2, &[1]);
        let text = g.complex.to_json();
        assert_eq!(Complex2::from_json(&text).unwrap(), g.complex);
        let report = serde_json::to_string(&complex_report(&g.complex).unwrap()).unwrap();
        assert_eq!(Complex2::from_json(&report).unwrap(), g.complex);
        assert!(Complex2::from_json("{\"vertices\": []}").is_err());
    }

    #[test]
    fn dot_shapes() {
        let c = single_edge();
        let dot = to_dot(&c, Some(&[true]));
        assert!(
            dot.contains("shape=box")
                && dot.contains("shape=circle")
                && dot.contains("color=green")
        );
    }

    #[test]
    fn band_table_has_square_without_cell() {
        // 2x2 rectangular band (i,j)(k,l) = (i,l), element = 2i + j
        let table: Vec<usize> = (0..16)
            .map(|x| {
                let (a, b) = (x / 4, x % 4);
                2 * (a / 2) + b % 2
            })
            .collect();
        let e = BiorderedSet::from_table(TableSpec { size: 4, table }, 256).unwrap();
        let g = build_gh(&e).unwrap();
        assert_eq!((g.squares.len(), g.complex.cells.len()), (1, 0));
        let comps = components(&g.complex);
        assert_eq!(h1_abelian_invariants(&g.complex, &comps, 0).free_rank, 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn closure_is_schedule_independent(seed in any::<u64>()) {
            let (_, g) = gh(3, 3, &[1]);
            let c = &g.complex;
            let comps = components(c);
            let tree = spanning_tree(c, &comps, 0, 0).unwrap();
            let mut order = comps.cells(c, 0);
            // deterministic shuffle from the seed
            let mut s = seed | 1;
            for i in (1..order.len()).rev() {
                s ^= s << 13; s ^= s >> 7; s ^= s << 17;
                order.swap(i, (s % (i as u64 + 1)) as usize);
            }
            let a = green_closure(c, &comps, 0, &tree);
            let b = green_closure_with_schedule(c, &comps, 0, &tree, &order);
            prop_assert_eq!(a, b);
        }
    }
}

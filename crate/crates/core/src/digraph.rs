//! Finite digraphs: strong connectivity, algebraic length, boolean
//! relational powers, the uniform walk constant, deterministic walk tables,
//! and the finite-core and odd-girth reductions.
//!
//! Adjacency is stored as one bitset row per vertex; relational powers are
//! boolean matrix powers. Everything is immutable after construction and all
//! tie-breaking picks the smallest vertex index, so repeated runs produce
//! identical structures.

use serde::Serialize;

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::gcd;

#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    vertices: usize,
    adj: BitMatrix,
    undirected: bool,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Digraph(m={}, edges={:?}{})",
            self.vertices,
            self.edges(),
            if self.undirected { ", undirected" } else { "" }
        )
    }
}

impl Digraph {
    /// Build a digraph from an edge list. When `undirected` is claimed, the
    /// edge set must already be symmetric; undirectedness is declared, never
    /// inferred.
    pub fn new(vertices: usize, edges: &[(usize, usize)], undirected: bool) -> Result<Self> {
        let mut adj = BitMatrix::zeros(vertices);
        for &(u, v) in edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {vertices} vertices"
                )));
            }
            adj.set(u, v);
        }
        if undirected && !adj.is_symmetric() {
            return Err(Error::InvalidGraph(
                "declared undirected but the edge set is not symmetric".into(),
            ));
        }
        Ok(Digraph {
            vertices,
            adj,
            undirected,
        })
    }

    pub fn directed(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Digraph::new(vertices, edges, false)
    }

    pub(crate) fn from_matrix(adj: BitMatrix, undirected: bool) -> Self {
        Digraph {
            vertices: adj.size(),
            adj,
            undirected,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.count_ones()
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.vertices {
            for v in self.adj.ones_in_row(u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj.ones_in_row(u)
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn has_loop(&self) -> bool {
        self.adj.has_diagonal_one()
    }

    pub fn first_loop(&self) -> Option<usize> {
        self.adj.first_diagonal_one()
    }
}

/// Strongly connected components, topologically ordered: if there is an edge
/// from component `A` to component `B` then `A` appears before `B`. Vertices
/// inside a component are sorted ascending.
pub fn scc_decompose(g: &Digraph) -> Vec<Vec<usize>> {
    struct State<'a> {
        g: &'a Digraph,
        counter: usize,
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        stack: Vec<usize>,
        on_stack: Vec<bool>,
        comps: Vec<Vec<usize>>,
    }

    fn connect(v: usize, st: &mut State) {
        st.index[v] = Some(st.counter);
        st.low[v] = st.counter;
        st.counter += 1;
        st.stack.push(v);
        st.on_stack[v] = true;

        let neighbors: Vec<usize> = st.g.out_neighbors(v).collect();
        for w in neighbors {
            if st.index[w].is_none() {
                connect(w, st);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if st.on_stack[w] {
                st.low[v] = st.low[v].min(st.index[w].unwrap());
            }
        }

        if st.low[v] == st.index[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().unwrap();
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            st.comps.push(comp);
        }
    }

    let m = g.vertex_count();
    let mut st = State {
        g,
        counter: 0,
        index: vec![None; m],
        low: vec![0; m],
        stack: Vec::new(),
        on_stack: vec![false; m],
        comps: Vec::new(),
    };
    for v in 0..m {
        if st.index[v].is_none() {
            connect(v, &mut st);
        }
    }
    // Tarjan emits sinks first; reverse for topological order.
    st.comps.reverse();
    st.comps
}

pub fn is_strongly_connected(g: &Digraph) -> bool {
    scc_decompose(g).len() <= 1
}

/// Does a strongly connected digraph have algebraic length 1, i.e. is the
/// gcd of its directed cycle lengths equal to 1?
///
/// Computed from a BFS level labeling: the gcd of `level(u) + 1 - level(v)`
/// over all edges `u -> v`. The criterion is only meaningful on strongly
/// connected digraphs with at least one edge, so anything else is rejected.
pub fn algebraic_length_one(g: &Digraph) -> Result<bool> {
    if !is_strongly_connected(g) {
        return Err(Error::Hypothesis {
            name: "strong connectivity",
            detail: "algebraic length is only computed on strongly connected digraphs".into(),
        });
    }
    if g.edge_count() == 0 {
        return Err(Error::Hypothesis {
            name: "cycle lengths",
            detail: "digraph has no edges, hence no cycles".into(),
        });
    }
    let m = g.vertex_count();
    let mut level = vec![usize::MAX; m];
    let mut queue = std::collections::VecDeque::new();
    level[0] = 0;
    queue.push_back(0);
    while let Some(u) = queue.pop_front() {
        for v in g.out_neighbors(u) {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g_acc: usize = 0;
    for (u, v) in g.edges() {
        let diff = (level[u] as i64 + 1 - level[v] as i64).unsigned_abs() as usize;
        g_acc = gcd(g_acc, diff);
    }
    debug_assert!(g_acc >= 1, "strongly connected with an edge implies a cycle");
    Ok(g_acc == 1)
}

/// The `k`-th relational power: `u -> v` iff a `k`-walk from `u` to `v`
/// exists.
pub fn relational_power(g: &Digraph, k: usize) -> Result<Digraph> {
    if k == 0 {
        return Err(Error::InvalidParams("relational power needs k >= 1".into()));
    }
    let mut p = g.adj.clone();
    for _ in 1..k {
        p = p.mul(&g.adj);
    }
    Ok(Digraph::from_matrix(p, g.undirected))
}

/// Powers `A^0, A^1, ..., A^k_max` of the adjacency matrix.
pub(crate) fn power_list(adj: &BitMatrix, k_max: usize) -> Vec<BitMatrix> {
    let mut powers = Vec::with_capacity(k_max + 1);
    powers.push(BitMatrix::identity(adj.size()));
    for k in 1..=k_max {
        let next = powers[k - 1].mul(adj);
        powers.push(next);
    }
    powers
}

/// The Wielandt primitivity bound `(m - 1)^2 + 1`: a safety cap for power
/// searches whose success is guaranteed but not effectively bounded by the
/// hypotheses alone.
pub fn wielandt_bound(m: usize) -> usize {
    if m == 0 {
        1
    } else {
        (m - 1) * (m - 1) + 1
    }
}

/// The minimal `K >= 1` such that a `k`-walk exists between every ordered
/// pair of vertices for every `k >= K`.
///
/// Requires strong connectivity and algebraic length 1. The all-ones
/// relation is absorbing under these hypotheses, so `K` is the first power
/// at which the boolean power becomes all-ones; the search is capped at the
/// Wielandt bound.
pub fn uniform_walk_constant(g: &Digraph) -> Result<usize> {
    if g.vertex_count() == 0 {
        return Err(Error::InvalidGraph("empty digraph".into()));
    }
    if !algebraic_length_one(g)? {
        return Err(Error::Hypothesis {
            name: "algebraic length",
            detail: "digraph maps onto a directed cycle of length > 1; no uniform walk length exists"
                .into(),
        });
    }
    let cap = wielandt_bound(g.vertex_count());
    let mut p = g.adj.clone();
    for k in 1..=cap {
        if p.is_all_ones() {
            return Ok(k);
        }
        p = p.mul(&g.adj);
    }
    Err(Error::Hypothesis {
        name: "walk constant",
        detail: format!(
            "no all-ones boolean power up to the Wielandt bound {cap}; preconditions violated"
        ),
    })
}

/// Lengths `1 <= l <= max_len` for which a closed `l`-walk exists, read off
/// the diagonals of the boolean powers.
pub fn cycle_lengths(g: &Digraph, max_len: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = BitMatrix::identity(g.vertex_count());
    for l in 1..=max_len {
        p = p.mul(&g.adj);
        if p.has_diagonal_one() {
            out.push(l);
        }
    }
    out
}

/// The deterministic walk of length exactly `k` from `u` to `v`: each step
/// moves to the smallest successor from which a walk of the remaining length
/// still reaches `v`. Requires `powers[0..=k]`.
pub(crate) fn deterministic_walk(
    adj: &BitMatrix,
    powers: &[BitMatrix],
    u: usize,
    v: usize,
    k: usize,
) -> Option<Vec<usize>> {
    if !powers[k].get(u, v) {
        return None;
    }
    let mut walk = Vec::with_capacity(k + 1);
    walk.push(u);
    let mut cur = u;
    for remaining in (1..=k).rev() {
        let next = adj
            .ones_in_row(cur)
            .find(|&w| powers[remaining - 1].get(w, v))
            .expect("a k-walk exists, so some successor continues it");
        walk.push(next);
        cur = next;
    }
    debug_assert_eq!(cur, v);
    Some(walk)
}

/// Deterministic table of fixed walks `walk(u, v, k)` for `K <= k <= k_max`.
///
/// Walks are recomputed on demand from the stored boolean powers by the
/// smallest-successor rule, so the same query always yields the identical
/// walk and the table is safe to share across threads.
pub struct WalkTable {
    k_min: usize,
    adj: BitMatrix,
    powers: Vec<BitMatrix>,
}

impl WalkTable {
    pub fn min_length(&self) -> usize {
        self.k_min
    }

    pub fn max_length(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn walk(&self, u: usize, v: usize, k: usize) -> Result<Vec<usize>> {
        if k < self.k_min || k > self.max_length() {
            return Err(Error::InvalidParams(format!(
                "walk length {k} outside the table range [{}, {}]",
                self.k_min,
                self.max_length()
            )));
        }
        deterministic_walk(&self.adj, &self.powers, u, v, k).ok_or_else(|| {
            Error::Inconsistency(format!(
                "no {k}-walk from {u} to {v} although {k} >= K = {}",
                self.k_min
            ))
        })
    }

    pub(crate) fn powers(&self) -> &[BitMatrix] {
        &self.powers
    }
}

pub fn build_walk_table(g: &Digraph, k_max: usize) -> Result<WalkTable> {
    let k_min = uniform_walk_constant(g)?;
    if k_min > k_max {
        return Err(Error::InvalidParams(format!(
            "walk table bound {k_max} is below the uniform walk constant {k_min}"
        )));
    }
    Ok(WalkTable {
        k_min,
        adj: g.adj.clone(),
        powers: power_list(&g.adj, k_max),
    })
}

/// Lexicographically smallest shortest path `from -> to` (sequence of
/// vertices), via the exact-length deterministic walk at the BFS distance.
fn shortest_path(adj: &BitMatrix, powers: &[BitMatrix], from: usize, to: usize) -> Option<Vec<usize>> {
    (0..powers.len()).find(|&k| powers[k].get(from, to)).map(|k| {
        deterministic_walk(adj, powers, from, to, k).expect("power says a k-walk exists")
    })
}

/// A strongly connected subdigraph of `g` that contains the anchors, two
/// coprime cycles, and a closed walk of every length in `[2, C)` for the
/// bound `C` derived from the chosen coprime pair. Minimality is not
/// attempted.
///
/// Returns the core on renumbered vertices together with the map from new
/// indices to the original ones (ascending, so a core that uses every vertex
/// of `g` keeps the original numbering).
pub fn finite_core(g: &Digraph, anchors: &[usize]) -> Result<(Digraph, Vec<usize>)> {
    let m = g.vertex_count();
    if m == 0 {
        return Err(Error::InvalidGraph("empty digraph".into()));
    }
    for &a in anchors {
        if a >= m {
            return Err(Error::InvalidGraph(format!("anchor {a} out of range")));
        }
    }
    if !is_strongly_connected(g) {
        return Err(Error::Hypothesis {
            name: "strong connectivity",
            detail: "finite core requires a strongly connected digraph".into(),
        });
    }

    // Smallest coprime pair of closed-walk lengths, scanning ascending.
    let scan_cap = 2 * m * m + 2;
    let mut present: Vec<usize> = Vec::new();
    let mut pair: Option<(usize, usize)> = None;
    let mut p = BitMatrix::identity(m);
    for l in 1..=scan_cap {
        p = p.mul(&g.adj);
        if p.has_diagonal_one() {
            if let Some(&a) = present.iter().find(|&&a| gcd(a, l) == 1) {
                pair = Some((a, l));
                break;
            }
            present.push(l);
        }
    }
    let (a, b) = pair.ok_or_else(|| Error::Hypothesis {
        name: "cycle lengths",
        detail: format!("no coprime pair of closed-walk lengths up to {scan_cap}"),
    })?;

    // Frobenius-style bound: every length >= (a-1)(b-1) is a non-negative
    // combination of a and b; add the hub detour for the b-cycle.
    let powers = power_list(&g.adj, scan_cap.max(m));
    let hub = powers[a]
        .first_diagonal_one()
        .expect("an a-cycle exists by the scan");
    let vb = powers[b]
        .first_diagonal_one()
        .expect("a b-cycle exists by the scan");
    let hub_to_vb = shortest_path(&g.adj, &powers, hub, vb).expect("strongly connected");
    let vb_to_hub = shortest_path(&g.adj, &powers, vb, hub).expect("strongly connected");
    let detour = (hub_to_vb.len() - 1) + (vb_to_hub.len() - 1);
    let c_bound = if a == 1 { 2 } else { (detour + (a - 1) * (b - 1)).max(2) };

    let mut edges: std::collections::BTreeSet<(usize, usize)> = std::collections::BTreeSet::new();
    let mut used: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
    let add_walk = |walk: &[usize],
                        edges: &mut std::collections::BTreeSet<(usize, usize)>,
                        used: &mut std::collections::BTreeSet<usize>| {
        for w in walk.windows(2) {
            edges.insert((w[0], w[1]));
        }
        used.extend(walk.iter().copied());
    };

    let cycle_a = deterministic_walk(&g.adj, &powers, hub, hub, a).expect("a-cycle");
    let cycle_b = deterministic_walk(&g.adj, &powers, vb, vb, b).expect("b-cycle");
    add_walk(&cycle_a, &mut edges, &mut used);
    add_walk(&cycle_b, &mut edges, &mut used);
    add_walk(&hub_to_vb, &mut edges, &mut used);
    add_walk(&vb_to_hub, &mut edges, &mut used);

    // One closed walk per length in [2, C).
    for l in 2..c_bound {
        if l > powers.len() - 1 {
            break;
        }
        let v = powers[l]
            .first_diagonal_one()
            .ok_or(Error::MissingCycle { length: l })?;
        let walk = deterministic_walk(&g.adj, &powers, v, v, l).expect("diagonal power is set");
        add_walk(&walk, &mut edges, &mut used);
    }

    used.extend(anchors.iter().copied());

    // Connect everything to the hub in both directions.
    let targets: Vec<usize> = used.iter().copied().collect();
    for v in targets {
        let there = shortest_path(&g.adj, &powers, hub, v).expect("strongly connected");
        let back = shortest_path(&g.adj, &powers, v, hub).expect("strongly connected");
        add_walk(&there, &mut edges, &mut used);
        add_walk(&back, &mut edges, &mut used);
    }

    let vertex_map: Vec<usize> = used.iter().copied().collect();
    let mut renumber = vec![usize::MAX; m];
    for (new, &old) in vertex_map.iter().enumerate() {
        renumber[old] = new;
    }
    let core_edges: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(u, v)| (renumber[u], renumber[v]))
        .collect();
    let core = Digraph::new(vertex_map.len(), &core_edges, false)?;

    // Re-run the precondition checks on the result.
    if !is_strongly_connected(&core) {
        return Err(Error::Inconsistency(
            "finite core is not strongly connected".into(),
        ));
    }
    let have = cycle_lengths(&core, c_bound.max(b));
    for l in 2..c_bound {
        if !have.contains(&l) {
            return Err(Error::Inconsistency(format!(
                "finite core lost the closed walk of length {l}"
            )));
        }
    }
    if !have.contains(&a) || !have.contains(&b) {
        return Err(Error::Inconsistency(
            "finite core lost one of the coprime cycles".into(),
        ));
    }
    Ok((core, vertex_map))
}

/// Odd girth of an undirected graph via BFS parity distances, together with
/// the relational power `g^(l-2)` whose edge set extends the original one.
pub fn odd_girth_reduce(g: &Digraph) -> Result<(usize, Digraph)> {
    if !g.is_undirected() {
        return Err(Error::InvalidGraph(
            "odd girth reduction expects a declared undirected graph".into(),
        ));
    }
    if g.has_loop() {
        return Err(Error::InvalidGraph(
            "odd girth reduction expects a loop-free graph".into(),
        ));
    }
    if !is_strongly_connected(g) {
        return Err(Error::Hypothesis {
            name: "connectivity",
            detail: "odd girth reduction expects a connected graph".into(),
        });
    }
    let m = g.vertex_count();
    let mut best: Option<usize> = None;
    for s in 0..m {
        // BFS over (vertex, parity); dist[v][p] = shortest walk s -> v of parity p.
        let mut dist = vec![[usize::MAX; 2]; m];
        let mut queue = std::collections::VecDeque::new();
        dist[s][0] = 0;
        queue.push_back((s, 0usize));
        while let Some((u, par)) = queue.pop_front() {
            let d = dist[u][par];
            if let Some(b) = best {
                if d + 1 >= b {
                    continue;
                }
            }
            for v in g.out_neighbors(u) {
                let np = 1 - par;
                if dist[v][np] == usize::MAX {
                    dist[v][np] = d + 1;
                    queue.push_back((v, np));
                }
            }
        }
        if dist[s][1] != usize::MAX {
            best = Some(best.map_or(dist[s][1], |b| b.min(dist[s][1])));
        }
    }
    let l = best.ok_or(Error::Hypothesis {
        name: "non-bipartite",
        detail: "graph has no odd cycle".into(),
    })?;
    debug_assert!(l >= 3, "loop-free graphs have odd girth at least 3");
    let reduced = relational_power(g, l - 2)?;
    Ok((l, reduced))
}

/// Summary emitted by the `analyze` subcommand.
#[derive(Debug, Serialize)]
pub struct GraphAnalysis {
    pub vertices: usize,
    pub edges: usize,
    pub undirected: bool,
    pub scc: Vec<Vec<usize>>,
    pub strongly_connected: bool,
    pub has_loop: bool,
    pub algebraic_length_one: Option<bool>,
    pub uniform_walk_constant: Option<usize>,
    pub cycle_lengths: Vec<usize>,
}

pub fn analyze(g: &Digraph) -> GraphAnalysis {
    let scc = scc_decompose(g);
    let strongly_connected = scc.len() <= 1;
    let algebraic = algebraic_length_one(g).ok();
    let k = uniform_walk_constant(g).ok();
    let bound = (2 * g.vertex_count() * g.vertex_count()).max(4);
    GraphAnalysis {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        undirected: g.is_undirected(),
        strongly_connected,
        has_loop: g.has_loop(),
        algebraic_length_one: algebraic,
        uniform_walk_constant: k,
        cycle_lengths: cycle_lengths(g, bound.min(64)),
        scc,
    }
}

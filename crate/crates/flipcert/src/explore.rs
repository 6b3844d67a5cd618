//! Desk-scale flip-graph exploration: breadth-first enumeration over
//! triangulations with canonical keys, an independent exhaustive search for
//! tiny configurations, and component statistics.
//!
//! Node identity is the full sorted cell list; no hashes stand in for it, so
//! two nodes are equal exactly when their canonical forms are. The frontier
//! is processed in canonical key order, which makes node numbering and every
//! exported artifact deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num::{Signed, Zero};
use thiserror::Error;

use crate::exactgeom::{GeomError, PointConfiguration, Rational};
use crate::flips::{apply_flip, find_flips, FlipError};
use crate::orientation::triangulation_to_orientation;
use crate::triangulation::{
    cells_properly_intersect, hull_volume_detsum, Simplex, Triangulation, TriangulationError,
};

#[derive(Debug, Error)]
pub enum ExploreError {
    #[error("configuration with {points} points in dimension {dim} exceeds the exhaustive-search guard (at most 9 points, dimension at most 3)")]
    SizeGuard { points: usize, dim: usize },
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Flip(#[from] FlipError),
}

/// Caps for a breadth-first search; a search that hits either cap returns a
/// partial result flagged as incomplete.
#[derive(Debug, Clone)]
pub struct ExploreLimits {
    /// Maximum nodes retained (at least 1; the seed always counts).
    pub node_limit: usize,
    pub time_limit: Option<Duration>,
}

impl Default for ExploreLimits {
    fn default() -> Self {
        ExploreLimits {
            node_limit: 1_000_000,
            time_limit: None,
        }
    }
}

/// An undirected graph of triangulations connected by flips.
#[derive(Debug, Clone)]
pub struct FlipGraph {
    /// Canonically ordered nodes; indices are the exported IDs.
    pub nodes: Vec<Triangulation>,
    /// Unordered node pairs, ascending, each flip edge once.
    pub edges: Vec<(usize, usize)>,
    /// Partition of node indices into connected components, each ascending,
    /// ordered by smallest member.
    pub components: Vec<Vec<usize>>,
    /// False when a cap cut the search off or a flip led outside the node
    /// set.
    pub complete: bool,
}

impl FlipGraph {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn summary(&self) -> String {
        format!(
            "{} nodes, {} edges, {} component{}, {}",
            self.nodes.len(),
            self.edges.len(),
            self.components.len(),
            if self.components.len() == 1 { "" } else { "s" },
            if self.complete { "complete" } else { "partial" }
        )
    }

    /// One line per node: `id: neighbor neighbor ...`, neighbors ascending.
    pub fn render_adjacency(&self) -> String {
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for &(u, v) in &self.edges {
            nbrs[u].push(v);
            nbrs[v].push(u);
        }
        let mut out = String::new();
        for (u, mut ns) in nbrs.into_iter().enumerate() {
            ns.sort_unstable();
            let list: Vec<String> = ns.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("{}: {}\n", u, list.join(" ")));
        }
        out
    }

    /// One line per node: `id: {cell} {cell} ...`, cells in canonical order.
    pub fn render_dictionary(&self) -> String {
        let mut out = String::new();
        for (u, t) in self.nodes.iter().enumerate() {
            let cells: Vec<String> = t.cells().iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("{}: {}\n", u, cells.join(" ")));
        }
        out
    }
}

fn undirected(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn components_of(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru.max(rv)] = ru.min(rv);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        groups.entry(r).or_default().push(x);
    }
    groups.into_values().collect()
}

/// Breadth-first closure from the seed. New nodes of each level are assigned
/// IDs in canonical key order; `on_node` sees every retained node once, in
/// ID order.
fn bfs_core(
    seed: &Triangulation,
    limits: &ExploreLimits,
    mut on_node: impl FnMut(usize, &Triangulation),
) -> Result<(usize, BTreeSet<(usize, usize)>, bool), ExploreError> {
    seed.validate()?;
    let node_limit = limits.node_limit.max(1);
    let start = Instant::now();
    let mut index: BTreeMap<Vec<Simplex>, usize> = BTreeMap::new();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut complete = true;
    index.insert(seed.cells().to_vec(), 0);
    on_node(0, seed);
    let mut n_nodes = 1usize;
    let mut level: Vec<Triangulation> = vec![seed.clone()];
    'outer: while !level.is_empty() {
        let mut discovered: BTreeMap<Vec<Simplex>, Triangulation> = BTreeMap::new();
        let mut pending: Vec<(usize, Vec<Simplex>)> = Vec::new();
        for t in &level {
            if let Some(cap) = limits.time_limit {
                if start.elapsed() > cap {
                    complete = false;
                    break 'outer;
                }
            }
            let u = *index.get(t.cells()).expect("level nodes are indexed");
            for f in find_flips(t) {
                let t2 = apply_flip(t, &f)?;
                let key = t2.cells().to_vec();
                if let Some(&v) = index.get(key.as_slice()) {
                    if v != u {
                        edges.insert(undirected(u, v));
                    }
                } else {
                    pending.push((u, key.clone()));
                    discovered.entry(key).or_insert(t2);
                }
            }
        }
        let mut next_level = Vec::new();
        for (key, t2) in discovered {
            if n_nodes >= node_limit {
                complete = false;
                break;
            }
            let id = n_nodes;
            n_nodes += 1;
            index.insert(key, id);
            on_node(id, &t2);
            next_level.push(t2);
        }
        for (u, key) in pending {
            match index.get(key.as_slice()) {
                Some(&v) => {
                    edges.insert(undirected(u, v));
                }
                // discovered but dropped by the node cap
                None => complete = false,
            }
        }
        level = next_level;
    }
    Ok((n_nodes, edges, complete))
}

/// Breadth-first flip closure from a valid seed, up to the limits.
pub fn enumerate_flip_graph(
    seed: &Triangulation,
    limits: &ExploreLimits,
) -> Result<FlipGraph, ExploreError> {
    let mut nodes = Vec::new();
    let (_, edges, complete) = bfs_core(seed, limits, |_, t| nodes.push(t.clone()))?;
    let edges: Vec<(usize, usize)> = edges.into_iter().collect();
    let components = components_of(nodes.len(), &edges);
    Ok(FlipGraph {
        nodes,
        edges,
        components,
        complete,
    })
}

/// The flip graph induced on a given node set, e.g. an exhaustively
/// enumerated one. `complete` is false when some flip leads outside the set.
pub fn graph_of_nodes(mut nodes: Vec<Triangulation>) -> Result<FlipGraph, ExploreError> {
    nodes.sort_by(|a, b| a.cells().cmp(b.cells()));
    nodes.dedup_by(|a, b| a.cells() == b.cells());
    let index: BTreeMap<Vec<Simplex>, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, t)| (t.cells().to_vec(), i))
        .collect();
    let mut edges = BTreeSet::new();
    let mut complete = true;
    for (u, t) in nodes.iter().enumerate() {
        for f in find_flips(t) {
            let t2 = apply_flip(t, &f)?;
            match index.get(t2.cells()) {
                Some(&v) if v != u => {
                    edges.insert(undirected(u, v));
                }
                Some(_) => {}
                None => complete = false,
            }
        }
    }
    let edges: Vec<(usize, usize)> = edges.into_iter().collect();
    let components = components_of(nodes.len(), &edges);
    Ok(FlipGraph {
        nodes,
        edges,
        components,
        complete,
    })
}

/// Statistics of one breadth-first component search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentStats {
    pub nodes_reached: usize,
    pub edges_seen: usize,
    pub complete: bool,
    /// With a restriction observer: whether every reached node restricts to
    /// the seed's diagonal orientation. `None` without an observer.
    pub shared_restriction: Option<bool>,
}

/// Component search from a valid seed, optionally watching the restriction
/// to the base edges `(edge domain, base point count)` on every node.
pub fn component_of(
    seed: &Triangulation,
    limits: &ExploreLimits,
    restriction: Option<(&BTreeSet<(usize, usize)>, usize)>,
) -> Result<ComponentStats, ExploreError> {
    let mut shared = restriction.map(|_| true);
    let base: Option<BTreeSet<(usize, usize)>> = match restriction {
        Some((edges, nbase)) => match triangulation_to_orientation(seed, edges, nbase) {
            Ok(o) => Some(o.arcs().collect()),
            Err(_) => {
                shared = Some(false);
                None
            }
        },
        None => None,
    };
    let (n, edges, complete) = bfs_core(seed, limits, |_, t| {
        if let (Some((edge_dom, nbase)), Some(b)) = (restriction, base.as_ref()) {
            match triangulation_to_orientation(t, edge_dom, nbase) {
                Ok(o) => {
                    if o.arcs().collect::<BTreeSet<_>>() != *b {
                        shared = Some(false);
                    }
                }
                Err(_) => shared = Some(false),
            }
        }
    })?;
    Ok(ComponentStats {
        nodes_reached: n,
        edges_seen: edges.len(),
        complete,
        shared_restriction: shared,
    })
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
        }
        if cur[i] == i + n - k {
            return out;
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

struct BruteState<'a> {
    config: &'a Arc<PointConfiguration>,
    cand: &'a [Simplex],
    vols: &'a [Rational],
    compat: &'a [Vec<bool>],
    target: &'a Rational,
    chosen: Vec<usize>,
    out: Vec<Triangulation>,
}

fn brute_rec(st: &mut BruteState<'_>, start: usize, vol: &Rational) -> Result<(), ExploreError> {
    if *vol == *st.target {
        let cells: Vec<Simplex> = st.chosen.iter().map(|&i| st.cand[i].clone()).collect();
        st.out
            .push(Triangulation::new(Arc::clone(st.config), cells)?);
        return Ok(());
    }
    for i in start..st.cand.len() {
        let next = vol + &st.vols[i];
        if next > *st.target {
            continue;
        }
        if !st.chosen.iter().all(|&j| st.compat[j][i]) {
            continue;
        }
        st.chosen.push(i);
        brute_rec(st, i + 1, &next)?;
        st.chosen.pop();
    }
    Ok(())
}

/// Every triangulation of a tiny configuration, by exhaustive search over
/// pairwise-proper cell sets reaching the exact hull volume. Independent of
/// the flip machinery, so it can cross-check [`enumerate_flip_graph`].
pub fn all_triangulations_bruteforce(
    config: &Arc<PointConfiguration>,
) -> Result<Vec<Triangulation>, ExploreError> {
    let n = config.len();
    let d = config.dim();
    if n > 9 || d > 3 {
        return Err(ExploreError::SizeGuard { points: n, dim: d });
    }
    let target = hull_volume_detsum(config)?;
    let mut cand = Vec::new();
    let mut vols = Vec::new();
    for subset in k_subsets(n, d + 1) {
        let det = config.simplex_determinant(&subset)?;
        if !det.is_zero() {
            cand.push(Simplex::new(subset)?);
            vols.push(det.abs());
        }
    }
    let m = cand.len();
    let mut compat = vec![vec![false; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let ok = cells_properly_intersect(config, &cand[i], &cand[j])?;
            compat[i][j] = ok;
            compat[j][i] = ok;
        }
    }
    let mut st = BruteState {
        config,
        cand: &cand,
        vols: &vols,
        compat: &compat,
        target: &target,
        chosen: Vec::new(),
        out: Vec::new(),
    };
    brute_rec(&mut st, 0, &Rational::zero())?;
    Ok(st.out)
}

//! Exact Euclidean Steiner minimal trees for small terminal sets.
//!
//! Every full Steiner topology is enumerated, each one is relaxed to its
//! shortest embedding by Gauss–Seidel geometric-median sweeps over the Steiner
//! points, and the shortest result wins. Degenerate optima show up as
//! zero-length edges. The minimum spanning tree comes from Prim's algorithm on
//! the complete graph.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::network::{TopologyTag, TreeNetwork};

pub const DEFAULT_N_CAP: usize = 8;

/// Distance below which a Steiner point counts as sitting on a neighbour.
const COINCIDENT: f64 = 1e-12;
/// Step used to move a Steiner point off a neighbour it should leave.
const SEPARATION_STEP: f64 = 1e-10;
/// Shortest edge (relative to the terminal scale) for which Newton polishing
/// is attempted.
const POLISH_MIN_EDGE: f64 = 1e-7;
/// Relative distance below which a Steiner point may snap onto a neighbour.
const SNAP_DISTANCE: f64 = 1e-7;
/// Relative per-sweep change below which a merged configuration counts as stalled.
const STALL_TOL: f64 = 1e-9;

/// Canonical index of a full Steiner topology.
///
/// The digits of the id in the mixed radix `3, 5, …, 2n−5` are the edges into
/// which terminals `3, 4, …, n−1` are inserted, most significant first, so ids
/// order topologies lexicographically by insertion sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TopologyId(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxOptions {
    /// Stop when the relative change in total length over one sweep drops below this.
    pub rel_tol: f64,
    pub max_sweeps: usize,
    /// Finish non-degenerate trees with Newton steps on the exact length.
    pub polish: bool,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_sweeps: 100_000,
            polish: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOptions {
    pub n_cap: usize,
    pub relax: RelaxOptions,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            n_cap: DEFAULT_N_CAP,
            relax: RelaxOptions::default(),
        }
    }
}

/// Outcome of relaxing one network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxReport {
    pub length: f64,
    pub sweeps: usize,
    pub converged: bool,
    /// Stopped early with two Steiner points merged; such embeddings are
    /// never minimal.
    pub collapsed: bool,
    pub newton_steps: usize,
}

/// Shortest embedding of one fixed topology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyOptimum {
    pub network: TreeNetwork,
    pub length: f64,
    pub report: RelaxReport,
}

/// Steiner minimal tree against the minimum spanning tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub smt_length: f64,
    pub mst_length: f64,
    pub ratio: f64,
    pub best_topology: TreeNetwork,
    pub topologies_examined: usize,
    /// Topologies whose relaxation hit the sweep budget.
    pub unconverged: usize,
    /// Topologies abandoned with merged Steiner points.
    pub collapsed: usize,
}

/// Total length of the Euclidean minimum spanning tree (Prim, O(n²)).
pub fn mst_length(points: &[Point3]) -> Result<f64> {
    Ok(mst_edges(points)?
        .iter()
        .map(|&(a, b)| points[a].distance(points[b]))
        .sum())
}

/// Edges of the Euclidean minimum spanning tree; ties go to the lowest index.
pub fn mst_edges(points: &[Point3]) -> Result<Vec<(usize, usize)>> {
    let n = points.len();
    if n < 2 {
        return Err(Error::Range(format!(
            "MST needs at least 2 points, got {n}"
        )));
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![0usize; n];
    let mut edges = Vec::with_capacity(n - 1);
    in_tree[0] = true;
    for v in 1..n {
        best[v] = points[0].distance(points[v]);
    }
    for _ in 1..n {
        let (v, _) = (0..n).filter(|&v| !in_tree[v]).map(|v| (v, best[v])).fold(
            (usize::MAX, f64::INFINITY),
            |acc, c| {
                if c.1 < acc.1 || acc.0 == usize::MAX {
                    c
                } else {
                    acc
                }
            },
        );
        in_tree[v] = true;
        edges.push((parent[v], v));
        for w in 0..n {
            if !in_tree[w] {
                let d = points[v].distance(points[w]);
                if d < best[w] {
                    best[w] = d;
                    parent[w] = v;
                }
            }
        }
    }
    Ok(edges)
}

/// `(2n−5)!!`, the number of full Steiner topologies on `n ≥ 3` terminals.
pub fn full_topology_count(n: usize) -> u64 {
    (3..n).map(|t| (2 * t - 3) as u64).product()
}

fn check_terminals(n: usize, cap: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Range(format!(
            "full topologies need n >= 3, got {n}"
        )));
    }
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(())
}

/// All full topology ids on `n` terminals in canonical order.
pub fn enumerate_full_topologies(n: usize, n_cap: usize) -> Result<Vec<TopologyId>> {
    check_terminals(n, n_cap)?;
    Ok((0..full_topology_count(n)).map(TopologyId).collect())
}

/// Decodes a topology id into an edge list (terminals `0..n`, Steiner points
/// `n..2n−2`) and returns, for each Steiner point, the three vertices it was
/// inserted between.
/// Edges of a decoded topology and the insertion triple seeding each Steiner point.
type Decoded = (Vec<(usize, usize)>, Vec<[usize; 3]>);

fn decode_topology(n: usize, id: TopologyId) -> Result<Decoded> {
    let total = full_topology_count(n);
    if id.0 >= total {
        return Err(Error::Range(format!(
            "topology id {} >= {total} for n={n}",
            id.0
        )));
    }
    // Digits, least significant first, then reversed to insertion order.
    let mut digits = Vec::with_capacity(n.saturating_sub(3));
    let mut rest = id.0;
    for t in (3..n).rev() {
        let radix = (2 * t - 3) as u64;
        digits.push((rest % radix) as usize);
        rest /= radix;
    }
    digits.reverse();

    let first = n;
    let mut edges = vec![(0, first), (1, first), (2, first)];
    let mut attachments = vec![[0, 1, 2]];
    for (i, &choice) in digits.iter().enumerate() {
        let t = i + 3;
        let s = n + t - 2;
        let (a, b) = edges[choice];
        edges[choice] = (a, s);
        edges.push((s, b));
        edges.push((t, s));
        attachments.push([a, b, t]);
    }
    Ok((edges, attachments))
}

/// Builds the network for topology `id` with Steiner points seeded at the
/// centroid of the three vertices each was inserted between.
pub fn full_topology_network(points: &[Point3], id: TopologyId) -> Result<TreeNetwork> {
    let n = points.len();
    check_terminals(n, usize::MAX)?;
    let (edges, attachments) = decode_topology(n, id)?;
    let mut steiner: Vec<Point3> = Vec::with_capacity(n - 2);
    for att in &attachments {
        let pos = |v: usize| if v < n { points[v] } else { steiner[v - n] };
        let seed = (pos(att[0]) + pos(att[1]) + pos(att[2])) / 3.0;
        steiner.push(seed);
    }
    Ok(TreeNetwork {
        terminals: points.to_vec(),
        steiner_points: steiner,
        edges,
        topology: TopologyTag::Full { id: id.0 },
    })
}

/// Shortest embedding of a fixed full topology.
pub fn optimize_topology(
    points: &[Point3],
    id: TopologyId,
    opts: &RelaxOptions,
) -> Result<TopologyOptimum> {
    let mut network = full_topology_network(points, id)?;
    let report = relax_network(&mut network, opts);
    Ok(TopologyOptimum {
        length: report.length,
        network,
        report,
    })
}

/// Exact Steiner minimal tree by exhaustive topology search.
pub fn smt(points: &[Point3], opts: &OracleOptions) -> Result<OracleResult> {
    let n = points.len();
    check_terminals(n, opts.n_cap)?;
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(Error::Invalid(format!("non-finite terminal {p:?}")));
    }
    let mst = mst_length(points)?;
    let mut best: Option<TopologyOptimum> = None;
    let mut examined = 0;
    let mut unconverged = 0;
    let mut collapsed = 0;
    for id in enumerate_full_topologies(n, opts.n_cap)? {
        let opt = optimize_topology(points, id, &opts.relax)?;
        examined += 1;
        if opt.report.collapsed {
            collapsed += 1;
        } else if !opt.report.converged {
            unconverged += 1;
        }
        // Strict improvement keeps the lowest id on ties.
        if best.as_ref().is_none_or(|b| opt.length < b.length) {
            best = Some(opt);
        }
    }
    let best = best.expect("at least one topology for n >= 3");
    Ok(OracleResult {
        smt_length: best.length,
        mst_length: mst,
        ratio: best.length / mst,
        best_topology: best.network,
        topologies_examined: examined,
        unconverged,
        collapsed,
    })
}

/// Moves every Steiner point of `network` to minimise total edge length with
/// the adjacency held fixed. Works for Steiner points of any degree.
pub fn relax_network(network: &mut TreeNetwork, opts: &RelaxOptions) -> RelaxReport {
    let adj = network.neighbors();
    let n_t = network.terminal_count();
    let mut length = network.length();
    let mut sweeps = 0;
    let mut converged = network.steiner_points.is_empty();
    let mut collapsed = false;
    while !converged && sweeps < opts.max_sweeps {
        for k in 0..network.steiner_points.len() {
            let v = n_t + k;
            let next = median_step(network, v, &adj[v]);
            network.steiner_points[k] = next;
        }
        sweeps += 1;
        let next_len = network.length();
        let change = (length - next_len).abs();
        converged = change <= opts.rel_tol * next_len;
        length = next_len;
        if !converged && change <= STALL_TOL * next_len && has_merged_steiner_pair(network) {
            collapsed = true;
            break;
        }
    }
    let mut newton_steps = 0;
    if opts.polish {
        newton_steps = newton_polish(network, &adj);
        length = network.length();
    }
    length = snap_to_neighbors(network, &adj, length);
    RelaxReport {
        length,
        sweeps,
        converged,
        collapsed,
        newton_steps,
    }
}

fn has_merged_steiner_pair(network: &TreeNetwork) -> bool {
    let tol = SNAP_DISTANCE * network.scale();
    network.edges.iter().any(|&(a, b)| {
        network.is_steiner(a) && network.is_steiner(b) && network.edge_length((a, b)) <= tol
    })
}

/// Moves Steiner points lying very close to a neighbour
fn snap_to_neighbors(network: &mut TreeNetwork, adj: &[Vec<usize>], mut length: f64) -> f64 {
    let n_t = network.terminal_count();
    let tol = SNAP_DISTANCE * network.scale();
    let mut changed = true;
    while changed {
        changed = false;
        for k in 0..network.steiner_points.len() {
            let v = n_t + k;
            let x = network.steiner_points[k];
            for &w in &adj[v] {
                let y = network.position(w);
                if x == y || x.distance(y) >= tol {
                    continue;
                }
                network.steiner_points[k] = y;
                let next = network.length();
                if next <= length {
                    length = next;
                    changed = true;
                    break;
                }
                network.steiner_points[k] = x;
            }
        }
    }
    length
}

/// One geometric-median (Weiszfeld) update of vertex `v` against its neighbours.
///
/// A point sitting on a neighbour stays there when the pull of the remaining
/// edges is at most the number of coincident neighbours; otherwise it is
/// pushed off along that pull.
fn median_step(network: &TreeNetwork, v: usize, nbrs: &[usize]) -> Point3 {
    let x = network.position(v);
    let mut coincident: Option<Point3> = None;
    let mut n_coincident = 0usize;
    let mut pull = Point3::ORIGIN;
    let mut weighted = Point3::ORIGIN;
    let mut weight = 0.0;
    for &w in nbrs {
        let y = network.position(w);
        let d = x.distance(y);
        if d < COINCIDENT {
            coincident.get_or_insert(y);
            n_coincident += 1;
        } else {
            pull += (y - x) / d;
            weighted += y / d;
            weight += 1.0 / d;
        }
    }
    match coincident {
        Some(anchor) => {
            let strength = pull.norm();
            if strength <= n_coincident as f64 {
                anchor
            } else {
                anchor + pull * (SEPARATION_STEP / strength)
            }
        }
        None if weight > 0.0 => weighted / weight,
        None => x,
    }
}

/// Newton iterations on the exact length for trees whose edges are all
/// clearly non-zero. Steps only move the network when they shorten it.
fn newton_polish(network: &mut TreeNetwork, adj: &[Vec<usize>]) -> usize {
    let q = network.steiner_points.len();
    if q == 0 {
        return 0;
    }
    let n_t = network.terminal_count();
    let min_edge = POLISH_MIN_EDGE * network.scale();
    let mut steps = 0;
    for _ in 0..50 {
        if network.edge_lengths().iter().any(|&l| l < min_edge) {
            break;
        }
        let mut grad = DVector::<f64>::zeros(3 * q);
        let mut hess = DMatrix::<f64>::zeros(3 * q, 3 * q);
        for &(a, b) in &network.edges {
            let d = network.position(a) - network.position(b);
            let len = d.norm();
            let u = d / len;
            let ua = u.to_array();
            let mut block = [[0.0; 3]; 3];
            for (i, row) in block.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    let id = if i == j { 1.0 } else { 0.0 };
                    *cell = (id - ua[i] * ua[j]) / len;
                }
            }
            let sa = (a >= n_t).then(|| a - n_t);
            let sb = (b >= n_t).then(|| b - n_t);
            if let Some(ka) = sa {
                for i in 0..3 {
                    grad[3 * ka + i] += ua[i];
                }
            }
            if let Some(kb) = sb {
                for i in 0..3 {
                    grad[3 * kb + i] -= ua[i];
                }
            }
            for (ka, kb, sign) in [(sa, sa, 1.0), (sb, sb, 1.0), (sa, sb, -1.0), (sb, sa, -1.0)] {
                if let (Some(ka), Some(kb)) = (ka, kb) {
                    for i in 0..3 {
                        for j in 0..3 {
                            hess[(3 * ka + i, 3 * kb + j)] += sign * block[i][j];
                        }
                    }
                }
            }
        }
        if grad.amax() < 1e-15 {
            break;
        }
        let trace = hess.trace();
        for i in 0..3 * q {
            hess[(i, i)] += 1e-14 * trace.max(1.0);
        }
        let Some(delta) = hess
            .clone()
            .cholesky()
            .map(|c| c.solve(&(-&grad)))
            .or_else(|| hess.lu().solve(&(-&grad)))
        else {
            break;
        };
        let start = network.steiner_points.clone();
        let base = network.length();
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            for k in 0..q {
                let step = Point3::new(delta[3 * k], delta[3 * k + 1], delta[3 * k + 2]) * t;
                network.steiner_points[k] = start[k] + step;
            }
            if network.length() < base {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            network.steiner_points = start;
            break;
        }
        steps += 1;
        let _ = adj;
    }
    steps
}

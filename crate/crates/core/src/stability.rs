//! p-regular Steiner chains on helices under elastic edge forces.
//!
//! A p-chain on `n` terminals has `q = (n−2)/(p−2)` Steiner points joined in
//! a path. The end Steiner points carry `p − 1` terminals and interior ones
//! `p − 2`. Terminals are numbered `r_1..r_n` here; `r_j` is helix input
//! point `j − 1`.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::helix::{helix_point, inner_radius, inner_radius_raw, input_point, HelixParams};
use crate::network::{TopologyTag, TreeNetwork};
use crate::oracle::{relax_network, RelaxOptions, RelaxReport};

/// Relative step for central differences of the tree length.
pub const FD_STEP: f64 = 1e-5;

/// `q = (n−2)/(p−2)` when it is a positive integer.
pub fn feasible_q(n: usize, p: usize) -> Option<usize> {
    if n < 3 || p < 3 || n < p {
        return None;
    }
    let (num, den) = (n - 2, p - 2);
    (num % den == 0).then_some(num / den).filter(|&q| q >= 1)
}

/// `cos = −1/(p−1)`, the common pairwise cosine of `p` unit vectors summing to zero.
pub fn regular_angle_cos(p: usize) -> f64 {
    -1.0 / (p as f64 - 1.0)
}

/// The `p = 3` inner radius `αω/√(A_1(A_1+1))`, unclamped.
pub fn r3_radius(params: HelixParams) -> Result<f64> {
    inner_radius_raw(params, 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PChainSpec {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub params: HelixParams,
    /// Radius of the helix carrying the Steiner points.
    pub radius: f64,
}

impl PChainSpec {
    pub fn new(n: usize, p: usize, params: HelixParams, radius: f64) -> Result<Self> {
        let q = feasible_q(n, p).ok_or(Error::Infeasible { n, p })?;
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::Domain(format!(
                "chain radius {radius} must be finite and >= 0"
            )));
        }
        Ok(Self {
            n,
            p,
            q,
            params,
            radius,
        })
    }

    /// A chain whose Steiner helix has the `p = 3` equilibrium radius.
    pub fn with_r3_radius(n: usize, p: usize, params: HelixParams) -> Result<Self> {
        Self::new(n, p, params, r3_radius(params)?)
    }

    /// 1-based terminals `r_j` attached to Steiner point `S_k` (1-based).
    pub fn attached_terminals(&self, k: usize) -> RangeInclusive<usize> {
        let (n, p, q) = (self.n, self.p, self.q);
        if q == 1 {
            1..=n
        } else if k == 1 {
            1..=p - 1
        } else if k == q {
            n - p + 2..=n
        } else {
            (k - 1) * p + 4 - 2 * k..=k * p + 1 - 2 * k
        }
    }

    /// Terminal-count identity `2(p−1) + (q−2)(p−2) = n`.
    pub fn adjacency_accounting_holds(&self) -> bool {
        let (n, p, q) = (self.n as i64, self.p as i64, self.q as i64);
        2 * (p - 1) + (q - 2) * (p - 2) == n
    }
}

/// Places terminals on the unit helix and Steiner points on the helix of
/// radius `spec.radius`, wired as a p-chain.
pub fn build_p_chain(spec: &PChainSpec) -> TreeNetwork {
    let terminals: Vec<Point3> = (0..spec.n).map(|j| input_point(j, spec.params)).collect();
    let steiner_points: Vec<Point3> = (1..=spec.q)
        .map(|k| helix_point(spec.radius, k, spec.params))
        .collect();
    let mut edges = Vec::with_capacity(spec.n + spec.q - 1);
    for k in 1..=spec.q {
        let s = spec.n + k - 1;
        edges.extend(spec.attached_terminals(k).map(|j| (j - 1, s)));
        if k < spec.q {
            edges.push((s, s + 1));
        }
    }
    TreeNetwork {
        terminals,
        steiner_points,
        edges,
        topology: TopologyTag::PChain {
            n: spec.n,
            p: spec.p,
        },
    }
}

/// Hooke force along one edge, directed from `tail` to `head`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeForce {
    pub tail: usize,
    pub head: usize,
    /// `C·(x_head − x_tail)`.
    pub force: Point3,
    /// Modulus of the force component parallel to the edge.
    pub modulus: f64,
}

impl EdgeForce {
    pub fn unit(&self) -> Point3 {
        self.force / self.modulus
    }
}

/// Edge forces for a network, one per edge in network order.
///
/// Terminal edges point from the Steiner point to the terminal (`f_j`);
/// Steiner–Steiner edges point from the lower to the higher Steiner index
/// (`f_{S_k}`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForceAssignment {
    pub elastic_constant: f64,
    pub edges: Vec<EdgeForce>,
}

impl ForceAssignment {
    /// `Σ_{tail = v} û − Σ_{head = v} û`: the balance at vertex `v`.
    pub fn vertex_balance(&self, v: usize) -> Point3 {
        self.edges.iter().fold(Point3::ORIGIN, |acc, e| {
            if e.tail == v {
                acc + e.unit()
            } else if e.head == v {
                acc - e.unit()
            } else {
                acc
            }
        })
    }
}

/// Hooke forces `C·Δx` along every edge.
pub fn hooke_forces(network: &TreeNetwork, elastic_constant: f64) -> Result<ForceAssignment> {
    if !(elastic_constant > 0.0 && elastic_constant.is_finite()) {
        return Err(Error::Domain(format!(
            "elastic constant {elastic_constant} must be positive"
        )));
    }
    let edges = network
        .edges
        .iter()
        .map(|&(a, b)| {
            let (tail, head) = match (network.is_steiner(a), network.is_steiner(b)) {
                (true, false) => (a, b),
                (false, true) => (b, a),
                _ => (a.min(b), a.max(b)),
            };
            let force = (network.position(head) - network.position(tail)) * elastic_constant;
            let modulus = force.norm();
            if modulus == 0.0 {
                return Err(Error::Singular(format!("zero-length edge ({a}, {b})")));
            }
            Ok(EdgeForce {
                tail,
                head,
                force,
                modulus,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ForceAssignment {
        elastic_constant,
        edges,
    })
}

/// Norm of the unit-force balance at each Steiner point, in Steiner order.
pub fn fermat_residuals(network: &TreeNetwork) -> Result<Vec<f64>> {
    let forces = hooke_forces(network, 1.0)?;
    Ok((0..network.steiner_points.len())
        .map(|k| forces.vertex_balance(network.steiner_vertex(k)).norm())
        .collect())
}

/// Sum of Euclidean edge lengths.
pub fn length_geometric(network: &TreeNetwork) -> f64 {
    network.length()
}

/// Total length rebuilt from force directions:
/// `Σ_j r_j·f̂_j − Σ_k S_k·(balance at S_k)`.
///
/// This is an identity for any configuration.
pub fn length_force_form(network: &TreeNetwork, forces: &ForceAssignment) -> f64 {
    (0..network.vertex_count())
        .map(|v| -network.position(v).dot(forces.vertex_balance(v)))
        .sum()
}

/// Terminal part `Σ_j r_j·f̂_j` of the force form. Equals the tree length only
/// when every Steiner point is balanced; it depends on the choice of origin.
pub fn length_force_truncated(network: &TreeNetwork, forces: &ForceAssignment) -> f64 {
    (0..network.terminal_count())
        .map(|v| -network.position(v).dot(forces.vertex_balance(v)))
        .sum()
}

/// The stationarity integrand `T_jkp` for terminal `r_j` and Steiner point
/// `S_k` (both 1-based) on the helical chain.
pub fn t_jkp(j: usize, k: usize, spec: &PChainSpec) -> Result<f64> {
    if j == 0 || k == 0 {
        return Err(Error::Range("t_jkp indices are 1-based".into()));
    }
    let w = spec.params.omega();
    let aw2 = spec.params.rise().powi(2);
    let r = spec.radius;
    let jm1 = (j - 1) as f64;
    let kf = k as f64;
    let delta = jm1 - kf;
    let c = (delta * w).cos();
    let numerator =
        (c * c - 1.0 - aw2 * jm1 * jm1) * r * r + aw2 * (2.0 * r * jm1 * kf * c - kf * kf);
    let base = 1.0 + r * r - 2.0 * r * c + aw2 * delta * delta;
    if base <= 1e-24 {
        return Err(Error::Singular(format!("r_{j} and S_{k} coincide")));
    }
    Ok(numerator / base.powf(1.5))
}

/// Which terminals enter the per-Steiner-point `T_jkp` sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TSumRange {
    /// Only terminals adjacent to `S_k`.
    Adjacent,
    /// All terminals `j = 1..n`.
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub fermat_residuals: Vec<f64>,
    /// Central-difference gradient of the length per Steiner point.
    pub gradient: Vec<[f64; 3]>,
    /// Largest absolute gradient component over all Steiner coordinates.
    pub gradient_norm: f64,
    /// Same, over chain-interior Steiner points only (`None` if `q < 3`).
    pub interior_gradient_norm: Option<f64>,
    pub length_geometric: f64,
    pub length_force_form: f64,
    pub length_force_truncated: f64,
    /// `Σ_j T_jkp` per Steiner point; empty unless the network is the helical chain.
    pub t_sum_residuals: Vec<f64>,
}

/// Central-difference gradient of total length over Steiner coordinates.
pub fn length_gradient(network: &TreeNetwork) -> Vec<[f64; 3]> {
    let mut work = network.clone();
    (0..network.steiner_points.len())
        .map(|k| {
            let base = network.steiner_points[k].to_array();
            let mut g = [0.0; 3];
            for (i, gi) in g.iter_mut().enumerate() {
                let h = FD_STEP * base[i].abs().max(1.0);
                let mut plus = base;
                plus[i] += h;
                work.steiner_points[k] = Point3::from_array(plus);
                let lp = work.length();
                let mut minus = base;
                minus[i] -= h;
                work.steiner_points[k] = Point3::from_array(minus);
                let lm = work.length();
                *gi = (lp - lm) / (2.0 * h);
            }
            work.steiner_points[k] = network.steiner_points[k];
            g
        })
        .collect()
}

fn max_abs(g: &[[f64; 3]]) -> f64 {
    g.iter().flatten().fold(0.0, |m: f64, &x| m.max(x.abs()))
}

/// Equilibrium diagnostics for any network (no `T_jkp` sums).
pub fn diagnose_network(network: &TreeNetwork) -> Result<EquilibriumReport> {
    let forces = hooke_forces(network, 1.0)?;
    let fermat = (0..network.steiner_points.len())
        .map(|k| forces.vertex_balance(network.steiner_vertex(k)).norm())
        .collect();
    let gradient = length_gradient(network);
    let q = gradient.len();
    let interior_gradient_norm = match network.topology {
        TopologyTag::PChain { .. } if q >= 3 => Some(max_abs(&gradient[1..q - 1])),
        _ => None,
    };
    Ok(EquilibriumReport {
        fermat_residuals: fermat,
        gradient_norm: max_abs(&gradient),
        interior_gradient_norm,
        gradient,
        length_geometric: network.length(),
        length_force_form: length_force_form(network, &forces),
        length_force_truncated: length_force_truncated(network, &forces),
        t_sum_residuals: Vec::new(),
    })
}

/// Full stationarity report for the helical p-chain described by `spec`.
pub fn stationarity_report(spec: &PChainSpec, range: TSumRange) -> Result<EquilibriumReport> {
    let network = build_p_chain(spec);
    let mut report = diagnose_network(&network)?;
    report.t_sum_residuals = (1..=spec.q)
        .map(|k| {
            let js: Vec<usize> = match range {
                TSumRange::Adjacent => spec.attached_terminals(k).collect(),
                TSumRange::All => (1..=spec.n).collect(),
            };
            js.into_iter()
                .map(|j| t_jkp(j, k, spec))
                .sum::<Result<f64>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(report)
}

/// Relaxes the helical p-chain to the force equilibrium of its topology.
pub fn relax_p_chain(spec: &PChainSpec, opts: &RelaxOptions) -> (TreeNetwork, RelaxReport) {
    let mut network = build_p_chain(spec);
    let report = relax_network(&mut network, opts);
    (network, report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PLengthRow {
    pub p: usize,
    pub q: Option<usize>,
    /// Optimised length, `None` when `(n, p)` admits no chain.
    pub length: Option<f64>,
    pub converged: bool,
}

/// Optimised p-chain length on `n` helical terminals for each `p`.
///
/// Each chain starts with its Steiner points on the `m = 1` inner helix and is
/// relaxed freely.
pub fn compare_p_lengths(n: usize, params: HelixParams, p_list: &[usize]) -> Vec<PLengthRow> {
    let start_radius = inner_radius(params, 1).unwrap_or(0.5);
    p_list
        .iter()
        .map(|&p| match PChainSpec::new(n, p, params, start_radius) {
            Ok(spec) => {
                let (_, report) = relax_p_chain(&spec, &RelaxOptions::default());
                PLengthRow {
                    p,
                    q: Some(spec.q),
                    length: Some(report.length),
                    converged: report.converged,
                }
            }
            Err(_) => PLengthRow {
                p,
                q: None,
                length: None,
                converged: false,
            },
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusScanRow {
    pub radius: f64,
    pub max_residual: f64,
    pub max_interior_residual: Option<f64>,
}

/// Fermat residuals of the helical p-chain as its Steiner radius varies over
/// `steps` evenly spaced values in `[lo, hi]`.
pub fn radius_scan(
    n: usize,
    p: usize,
    params: HelixParams,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Result<Vec<RadiusScanRow>> {
    let steps = steps.max(1);
    (0..steps)
        .map(|i| {
            let t = if steps == 1 {
                0.0
            } else {
                i as f64 / (steps - 1) as f64
            };
            let radius = lo + (hi - lo) * t;
            let spec = PChainSpec::new(n, p, params, radius)?;
            let res = fermat_residuals(&build_p_chain(&spec))?;
            let max_residual = res.iter().copied().fold(0.0, f64::max);
            let max_interior_residual =
                (res.len() >= 3).then(|| res[1..res.len() - 1].iter().copied().fold(0.0, f64::max));
            Ok(RadiusScanRow {
                radius,
                max_residual,
                max_interior_residual,
            })
        })
        .collect()
}

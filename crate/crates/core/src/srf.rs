//! Exact and asymptotic tree lengths for skip-`m` helical constructions, the
//! Steiner Ratio Function and the full-Steiner-tree restriction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::helix::{a_m, inner_radius, HelixParams};

/// Default upper bound on the skip modulus in the denominator minimum.
pub const DEFAULT_M_MAX: usize = 12;

/// Relative tolerance under which two denominators count as tied.
pub const M_TIE_TOLERANCE: f64 = 1e-12;

/// A tree length together with its per-point share.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthBreakdown {
    pub total: f64,
    pub per_point: f64,
    pub m: usize,
    /// Point count; `None` for the large-`n` limit.
    pub n: Option<usize>,
}

/// Value of the Steiner Ratio Function at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SrfValue {
    pub value: f64,
    /// Smallest `m` attaining the denominator minimum.
    pub m_star: usize,
    /// Full-tree condition `cos θ_1 ≥ −1/2` for the `m = 1` construction.
    pub feasible_m1: bool,
    /// Set when the minimum sits at `m_max`, so a larger cutoff might lower it.
    pub at_cutoff: bool,
}

/// `Σ_{j=0}^{m−1} ⌊(n−j−1)/m⌋`, the edge count of the skip-`m` chains through
/// the input points. Equals `n − m`.
pub fn input_floor_sum(n: usize, m: usize) -> usize {
    (0..m).map(|j| (n.saturating_sub(j + 1)) / m).sum()
}

/// `Σ_{k=1}^{m} ⌊(n−k−2)/m⌋`, the edge count of the skip-`m` chains through
/// the Steiner points. Equals `n − m − 2`.
pub fn steiner_floor_sum(n: usize, m: usize) -> usize {
    (1..=m).map(|k| (n.saturating_sub(k + 2)) / m).sum()
}

fn check_exact_range(n: usize, m: usize) -> Result<()> {
    if m == 0 || n < 3 || m >= n - 2 {
        return Err(Error::Range(format!(
            "exact lengths need 1 <= m < n-2 (m={m}, n={n})"
        )));
    }
    Ok(())
}

/// Length of the skip-`m` spanning tree on `n` helical input points: the `m`
/// skip chains joined by `m − 1` consecutive edges.
pub fn spanning_length_exact(n: usize, m: usize, params: HelixParams) -> Result<LengthBreakdown> {
    check_exact_range(n, m)?;
    let rise2 = params.rise().powi(2);
    let mf = m as f64;
    let skip_edge = (mf * mf * rise2 + a_m(params.omega(), m) + 1.0).sqrt();
    let step_edge = (rise2 + a_m(params.omega(), 1) + 1.0).sqrt();
    let total = skip_edge * input_floor_sum(n, m) as f64 + (mf - 1.0) * step_edge;
    Ok(LengthBreakdown {
        total,
        per_point: total / n as f64,
        m,
        n: Some(n),
    })
}

/// Length of the skip-`m` helical Steiner tree on `n` input points.
///
/// Sums `n − 2` radial terminal edges of length `1 − r_m`, the chain edges
/// between consecutive Steiner points of each skip subsequence (chord
/// `√(m²α²ω² + r_m²(A_m+1))`), and the two end edges joining `P_0` and
/// `P_{n−1}` to the Steiner helix.
pub fn steiner_length_exact(n: usize, m: usize, params: HelixParams) -> Result<LengthBreakdown> {
    check_exact_range(n, m)?;
    let r = inner_radius(params, m)?;
    let mf = m as f64;
    let a = a_m(params.omega(), m);
    let rise2 = mf * mf * params.rise().powi(2);
    let chains = steiner_floor_sum(n, m) as f64;
    let radial = (1.0 - r) * (mf + chains);
    let chain = (rise2 + r * r * (a + 1.0)).sqrt() * chains;
    let ends = 2.0 * (rise2 + (1.0 - r).powi(2) + r * (a + 1.0)).sqrt();
    let total = radial + chain + ends;
    Ok(LengthBreakdown {
        total,
        per_point: total / n as f64,
        m,
        n: Some(n),
    })
}

/// Large-`n` spanning length per point, `√(m²α²ω² + A_m + 1)`.
pub fn spanning_length_per_point(m: usize, params: HelixParams) -> f64 {
    let mf = m as f64;
    (mf * mf * params.rise().powi(2) + a_m(params.omega(), m) + 1.0).sqrt()
}

/// Large-`n` Steiner length per point, `1 + mαω√(A_m/(A_m+1))`.
pub fn steiner_length_per_point(m: usize, params: HelixParams) -> Result<f64> {
    let a = a_m(params.omega(), m);
    if a <= 0.0 {
        return Err(Error::Domain(format!(
            "A_m={a} <= 0 at omega={}, m={m}",
            params.omega()
        )));
    }
    Ok(1.0 + m as f64 * params.rise() * (a / (a + 1.0)).sqrt())
}

/// Cosine of the angle at an input point between its two skip-`m` spanning
/// edges: `−1 + (A_m+1)² / (2(m²α²ω² + A_m + 1))`.
///
/// NaN only in the planar case `α = 0` with `mω ≡ 0 (mod 2π)`, where the
/// edges have zero length.
pub fn cos_theta_m(m: usize, params: HelixParams) -> f64 {
    let mf = m as f64;
    let ap1 = a_m(params.omega(), m) + 1.0;
    -1.0 + ap1 * ap1 / (2.0 * (mf * mf * params.rise().powi(2) + ap1))
}

/// Whether the skip-`m` construction yields a full Steiner tree
/// (`cos θ_m ≥ −1/2`, i.e. spanning edges meet at less than 120°).
pub fn full_tree_feasible(m: usize, params: HelixParams) -> bool {
    cos_theta_m(m, params) >= -0.5
}

fn srf_numerator(params: HelixParams) -> Result<f64> {
    let a1 = a_m(params.omega(), 1);
    if a1 <= 0.0 {
        return Err(Error::Domain(format!(
            "A_1={a1} <= 0 at omega={}: SRF numerator undefined",
            params.omega()
        )));
    }
    Ok(1.0 + params.rise() * (a1 / (a1 + 1.0)).sqrt())
}

/// `ρ_m = (1 + αω√(A_1/(A_1+1))) / √(m²α²ω² + A_m + 1)`.
pub fn rho_m(m: usize, params: HelixParams) -> Result<f64> {
    if m == 0 {
        return Err(Error::Range("m must be >= 1".into()));
    }
    Ok(srf_numerator(params)? / spanning_length_per_point(m, params))
}

/// Steiner Ratio Function: the `m = 1` Steiner length per point over the
/// smallest spanning length per point among `m = 1..=m_max`.
pub fn srf(params: HelixParams, m_max: usize) -> Result<SrfValue> {
    if m_max == 0 {
        return Err(Error::Range("m_max must be >= 1".into()));
    }
    let numerator = srf_numerator(params)?;
    let denominators: Vec<f64> = (1..=m_max)
        .map(|m| spanning_length_per_point(m, params))
        .collect();
    let min = denominators.iter().copied().fold(f64::INFINITY, f64::min);
    let cutoff = min * (1.0 + M_TIE_TOLERANCE);
    let m_star = denominators
        .iter()
        .position(|&d| d <= cutoff)
        .map(|i| i + 1)
        .unwrap_or(1);
    Ok(SrfValue {
        value: numerator / min,
        m_star,
        feasible_m1: full_tree_feasible(1, params),
        at_cutoff: m_star == m_max && m_max > 1,
    })
}

//! Locating the minimum of the Steiner Ratio Function and tabulating it (and
//! related quantities) over parameter grids.

use std::f64::consts::{FRAC_PI_3, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::helix::HelixParams;
use crate::simplex::{self, SimplexOptions};
use crate::srf::{self, DEFAULT_M_MAX};

/// The known minimiser of the ratio function and its value:
/// `ω = π − arccos(2/3)`, `α = √30 / (9ω)`, `ρ = (3√3 + √7)/10`.
pub fn closed_form_minimum() -> (f64, f64, f64) {
    let omega = PI - (2.0f64 / 3.0).acos();
    let alpha = 30f64.sqrt() / (9.0 * omega);
    let rho = (3.0 * 3f64.sqrt() + 7f64.sqrt()) / 10.0;
    (omega, alpha, rho)
}

/// Rectangle in `(ω, α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub omega_lo: f64,
    pub omega_hi: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
}

impl Default for SearchBox {
    /// `(π/3 + 0.05, π − 0.05) × (0.05, 1.0)`.
    fn default() -> Self {
        Self {
            omega_lo: FRAC_PI_3 + 0.05,
            omega_hi: PI - 0.05,
            alpha_lo: 0.05,
            alpha_hi: 1.0,
        }
    }
}

impl SearchBox {
    pub fn point(omega: f64, alpha: f64) -> Self {
        Self {
            omega_lo: omega,
            omega_hi: omega,
            alpha_lo: alpha,
            alpha_hi: alpha,
        }
    }

    /// The box must lie where `A_1 > 0` (`ω > π/3`) and inside `ω ≤ π`, `α ≥ 0`.
    pub fn validate(&self) -> Result<()> {
        let vals = [self.omega_lo, self.omega_hi, self.alpha_lo, self.alpha_hi];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("search box bounds must be finite".into()));
        }
        if self.omega_lo > self.omega_hi || self.alpha_lo > self.alpha_hi {
            return Err(Error::Domain("search box has lo > hi".into()));
        }
        if self.omega_lo <= FRAC_PI_3 || self.omega_hi > PI {
            return Err(Error::Domain(format!(
                "omega range [{}, {}] must lie in (pi/3, pi]",
                self.omega_lo, self.omega_hi
            )));
        }
        if self.alpha_lo < 0.0 {
            return Err(Error::Domain("alpha must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    pub m_max: usize,
    /// Simplex-diameter tolerance.
    pub tol: f64,
    /// Value-stagnation tolerance.
    pub f_tol: f64,
    /// Extra simplex runs from seeded random starts.
    pub restarts: usize,
    pub seed: u64,
    /// Grid points per axis in the coarse phase.
    pub grid: usize,
    pub max_evaluations_per_start: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            m_max: DEFAULT_M_MAX,
            tol: 1e-9,
            f_tol: 1e-12,
            restarts: 8,
            seed: 0,
            grid: 64,
            max_evaluations_per_start: 20_000,
        }
    }
}

/// Where one simplex run ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalMinimum {
    pub start_omega: f64,
    pub start_alpha: f64,
    pub omega: f64,
    pub alpha: f64,
    pub rho: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizationResult {
    pub omega_star: f64,
    pub alpha_star: f64,
    pub rho_star: f64,
    /// `m` attaining the denominator minimum at the optimum.
    pub m_star: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub restarts_used: usize,
    /// Best value seen on the coarse grid.
    pub grid_best: f64,
    /// Every refined run, in start order (grid start first).
    pub local_minima: Vec<LocalMinimum>,
}

fn srf_or_inf(omega: f64, alpha: f64, m_max: usize) -> f64 {
    HelixParams::new(omega, alpha)
        .and_then(|p| srf::srf(p, m_max))
        .map_or(f64::INFINITY, |v| v.value)
}

fn lattice(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 || hi == lo {
        return vec![lo];
    }
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

/// Two-phase search for the ratio-function minimum: a coarse grid, then
/// bounded simplex refinement from the best grid point and from `restarts`
/// seeded random points.
pub fn minimize_srf(search: &SearchBox, opts: &MinimizeOptions) -> Result<MinimizationResult> {
    search.validate()?;
    if opts.tol.is_nan() || opts.tol <= 0.0 || opts.m_max == 0 || opts.grid == 0 {
        return Err(Error::Invalid(
            "tol must be > 0, m_max and grid >= 1".into(),
        ));
    }
    let omegas = lattice(search.omega_lo, search.omega_hi, opts.grid);
    let alphas = lattice(search.alpha_lo, search.alpha_hi, opts.grid);
    let mut evaluations = 0;
    let mut grid_best = (f64::INFINITY, search.omega_lo, search.alpha_lo);
    for &w in &omegas {
        for &a in &alphas {
            let v = srf_or_inf(w, a, opts.m_max);
            evaluations += 1;
            if v < grid_best.0 {
                grid_best = (v, w, a);
            }
        }
    }

    let mut starts = vec![(grid_best.1, grid_best.2)];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        let w = if search.omega_hi > search.omega_lo {
            rng.gen_range(search.omega_lo..=search.omega_hi)
        } else {
            search.omega_lo
        };
        let a = if search.alpha_hi > search.alpha_lo {
            rng.gen_range(search.alpha_lo..=search.alpha_hi)
        } else {
            search.alpha_lo
        };
        starts.push((w, a));
    }

    let lo = [search.omega_lo, search.alpha_lo];
    let hi = [search.omega_hi, search.alpha_hi];
    let step = [
        (search.omega_hi - search.omega_lo) / opts.grid.max(2) as f64,
        (search.alpha_hi - search.alpha_lo) / opts.grid.max(2) as f64,
    ];
    let sopts = SimplexOptions {
        x_tol: opts.tol,
        f_tol: opts.f_tol,
        max_evaluations: opts.max_evaluations_per_start,
    };
    let local_minima: Vec<LocalMinimum> = starts
        .iter()
        .map(|&(w, a)| {
            let r = simplex::minimize(
                |x| srf_or_inf(x[0], x[1], opts.m_max),
                &[w, a],
                &lo,
                &hi,
                &step,
                &sopts,
            );
            LocalMinimum {
                start_omega: w,
                start_alpha: a,
                omega: r.x[0],
                alpha: r.x[1],
                rho: r.value,
                evaluations: r.evaluations,
                converged: r.converged,
            }
        })
        .collect();
    evaluations += local_minima.iter().map(|m| m.evaluations).sum::<usize>();

    let best = local_minima
        .iter()
        .min_by(|a, b| {
            a.rho
                .total_cmp(&b.rho)
                .then(a.omega.total_cmp(&b.omega))
                .then(a.alpha.total_cmp(&b.alpha))
        })
        .copied()
        .expect("at least the grid start");
    let value = HelixParams::new(best.omega, best.alpha).and_then(|p| srf::srf(p, opts.m_max))?;
    Ok(MinimizationResult {
        omega_star: best.omega,
        alpha_star: best.alpha,
        rho_star: value.value,
        m_star: value.m_star,
        evaluations,
        converged: best.converged,
        restarts_used: opts.restarts,
        grid_best: grid_best.0,
        local_minima,
    })
}

/// Scan axis `lo:hi:steps`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanAxis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl ScanAxis {
    pub fn fixed(value: f64) -> Self {
        Self {
            lo: value,
            hi: value,
            steps: 1,
        }
    }

    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        let axis = Self { lo, hi, steps };
        axis.validate()?;
        Ok(axis)
    }

    fn validate(&self) -> Result<()> {
        if self.steps == 0 || !self.lo.is_finite() || !self.hi.is_finite() || self.lo > self.hi {
            return Err(Error::Invalid(format!(
                "bad scan axis {}:{}:{}",
                self.lo, self.hi, self.steps
            )));
        }
        if self.steps > 1 && self.lo == self.hi {
            return Err(Error::Invalid(
                "scan axis with several steps needs lo < hi".into(),
            ));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        lattice(self.lo, self.hi, self.steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanQuantity {
    /// Ratio function with `m_max = max(m_list)`: columns `srf`, `m_star`, `feasible_m1`.
    Srf,
    /// `rho_m` per `m`.
    RhoM,
    /// `cos θ_m` per `m`.
    CosThetaM,
    /// Spanning and Steiner length per point for each `m`.
    PerPointLengths,
}

impl std::str::FromStr for ScanQuantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "srf" => Ok(Self::Srf),
            "rho_m" => Ok(Self::RhoM),
            "cos_theta_m" => Ok(Self::CosThetaM),
            "per_point_lengths" => Ok(Self::PerPointLengths),
            other => Err(Error::Invalid(format!("unknown scan quantity '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub omega: f64,
    pub alpha: f64,
    /// One entry per column; `None` where the quantity is undefined.
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub omega_axis: ScanAxis,
    pub alpha_axis: ScanAxis,
    pub quantity: ScanQuantity,
    pub m_list: Vec<usize>,
    pub columns: Vec<String>,
    /// `ω`-major, then `α`, both ascending.
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    pub fn missing_cells(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| &r.values)
            .filter(|v| v.is_none())
            .count()
    }
}

/// Tabulates `quantity` over the `ω × α` grid.
pub fn scan_grid(
    omega_axis: ScanAxis,
    alpha_axis: ScanAxis,
    quantity: ScanQuantity,
    m_list: &[usize],
) -> Result<ScanTable> {
    omega_axis.validate()?;
    alpha_axis.validate()?;
    if m_list.is_empty() || m_list.contains(&0) {
        return Err(Error::Invalid(
            "m list must be non-empty with entries >= 1".into(),
        ));
    }
    let columns: Vec<String> = match quantity {
        ScanQuantity::Srf => vec!["srf".into(), "m_star".into(), "feasible_m1".into()],
        ScanQuantity::RhoM => m_list.iter().map(|m| format!("rho_m{m}")).collect(),
        ScanQuantity::CosThetaM => m_list.iter().map(|m| format!("cos_theta_m{m}")).collect(),
        ScanQuantity::PerPointLengths => m_list
            .iter()
            .flat_map(|m| [format!("spanning_m{m}"), format!("steiner_m{m}")])
            .collect(),
    };
    let m_max = m_list.iter().copied().max().unwrap_or(1);
    let mut rows = Vec::with_capacity(omega_axis.steps * alpha_axis.steps);
    for omega in omega_axis.values() {
        for alpha in alpha_axis.values() {
            let params = HelixParams::new(omega, alpha).ok();
            let values = match params {
                None => vec![None; columns.len()],
                Some(p) => match quantity {
                    ScanQuantity::Srf => match srf::srf(p, m_max) {
                        Ok(v) => vec![
                            Some(v.value),
                            Some(v.m_star as f64),
                            Some(if v.feasible_m1 { 1.0 } else { 0.0 }),
                        ],
                        Err(_) => vec![None; 3],
                    },
                    ScanQuantity::RhoM => m_list.iter().map(|&m| srf::rho_m(m, p).ok()).collect(),
                    ScanQuantity::CosThetaM => m_list
                        .iter()
                        .map(|&m| Some(srf::cos_theta_m(m, p)).filter(|v| v.is_finite()))
                        .collect(),
                    ScanQuantity::PerPointLengths => m_list
                        .iter()
                        .flat_map(|&m| {
                            [
                                Some(srf::spanning_length_per_point(m, p)),
                                srf::steiner_length_per_point(m, p).ok(),
                            ]
                        })
                        .collect(),
                },
            };
            rows.push(ScanRow {
                omega,
                alpha,
                values,
            });
        }
    }
    Ok(ScanTable {
        omega_axis,
        alpha_axis,
        quantity,
        m_list: m_list.to_vec(),
        columns,
        rows,
    })
}

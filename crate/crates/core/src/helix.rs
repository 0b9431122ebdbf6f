//! Helical input and Steiner point sets, m-skip subsequences and the
//! inner-helix radius.
//!
//! Input points sit on the unit-radius helix `P_j = (cos jω, sin jω, αjω)`
//! (0-based `j`). Steiner points of the skip-`m` construction sit on a
//! coaxial helix of the same pitch and radius `r_m(ω, α)`, chosen so that
//! edges meet at 120° at every interior Steiner point.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point3;

/// Angular step `omega` (radians) and pitch factor `alpha` of a helix with
/// unit radius; the pitch is `2π·alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelixParams {
    omega: f64,
    alpha: f64,
}

impl HelixParams {
    /// Validates `omega ∈ (0, π]` and `alpha ≥ 0`.
    ///
    /// `alpha = 0` (the planar limit) is accepted because several length and
    /// angle formulas stay meaningful there; most constructions need
    /// `alpha > 0`.
    pub fn new(omega: f64, alpha: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 || omega > PI {
            return Err(Error::Domain(format!("omega={omega} outside (0, pi]")));
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::Domain(format!(
                "alpha={alpha} must be finite and >= 0"
            )));
        }
        Ok(Self { omega, alpha })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Axial rise per step, `αω`.
    pub fn rise(&self) -> f64 {
        self.alpha * self.omega
    }
}

/// `A_m = 1 − 2 cos(mω)`.
pub fn a_m(omega: f64, m: usize) -> f64 {
    1.0 - 2.0 * (m as f64 * omega).cos()
}

/// Analytic inner radius `mαω / √(A_m(A_m+1))` without any clamping.
pub fn inner_radius_raw(params: HelixParams, m: usize) -> Result<f64> {
    check_modulus(m)?;
    let a = a_m(params.omega, m);
    let disc = a * (a + 1.0);
    if disc <= 0.0 {
        return Err(Error::Domain(format!(
            "A_m(A_m+1)={disc} <= 0 at omega={}, m={m}: no real inner radius",
            params.omega
        )));
    }
    Ok(m as f64 * params.rise() / disc.sqrt())
}

/// Inner-helix radius `r_m`, clamped to at most 1.
///
/// A raw value above 1 would put the Steiner helix outside the input helix;
/// the construction degenerates there and the radius is held at the boundary.
pub fn inner_radius(params: HelixParams, m: usize) -> Result<f64> {
    inner_radius_raw(params, m).map(|r| r.min(1.0))
}

/// Input point `P_j = (cos jω, sin jω, αjω)`.
pub fn input_point(j: usize, params: HelixParams) -> Point3 {
    helix_point(1.0, j, params)
}

/// Steiner point `S_k` on the inner helix of the skip-`m` construction.
pub fn steiner_point_on_helix(k: usize, params: HelixParams, m: usize) -> Result<Point3> {
    let r = inner_radius(params, m)?;
    Ok(helix_point(r, k, params))
}

/// Point at step `index` on a helix of the given radius sharing `params`.
pub fn helix_point(radius: f64, index: usize, params: HelixParams) -> Point3 {
    let t = index as f64 * params.omega;
    Point3::new(radius * t.cos(), radius * t.sin(), params.alpha * t)
}

/// Which of the two helical point families a subsequence indexes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointKind {
    Input,
    Steiner,
}

/// An m-skip subsequence `start, start+m, …, start+count_bound·m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsequenceSpec {
    pub kind: PointKind,
    pub start: usize,
    pub modulus: usize,
    pub count_bound: usize,
}

impl SubsequenceSpec {
    /// Builds the subsequence for `n` input points.
    ///
    /// Input subsequences take `0 ≤ start ≤ m−1` and `l_max = ⌊(n−start−1)/m⌋`;
    /// Steiner subsequences take `1 ≤ start ≤ m` and `l_max = ⌊(n−start−2)/m⌋`.
    pub fn new(kind: PointKind, start: usize, m: usize, n: usize) -> Result<Self> {
        check_modulus(m)?;
        let count_bound = match kind {
            PointKind::Input => {
                if start >= m || start >= n {
                    return Err(Error::Range(format!(
                        "input subsequence start {start} needs start < m={m} and start < n={n}"
                    )));
                }
                (n - start - 1) / m
            }
            PointKind::Steiner => {
                if start == 0 || start > m || start + 2 > n {
                    return Err(Error::Range(format!(
                        "steiner subsequence start {start} needs 1 <= start <= m={m} and start <= n-2 (n={n})"
                    )));
                }
                (n - start - 2) / m
            }
        };
        Ok(Self {
            kind,
            start,
            modulus: m,
            count_bound,
        })
    }

    /// Number of points in the subsequence, `l_max + 1`.
    pub fn point_count(&self) -> usize {
        self.count_bound + 1
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..=self.count_bound)
            .map(|l| self.start + l * self.modulus)
            .collect()
    }
}

/// Indices of one m-skip subsequence over `n` input points.
pub fn subsequence_indices(
    start: usize,
    m: usize,
    n: usize,
    kind: PointKind,
) -> Result<Vec<usize>> {
    SubsequenceSpec::new(kind, start, m, n).map(|s| s.indices())
}

/// The skip-`m` regrouping of input indices (`ℙ_m`) and Steiner indices (`𝕊_m`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub modulus: usize,
    pub n: usize,
    pub input: Vec<SubsequenceSpec>,
    pub steiner: Vec<SubsequenceSpec>,
}

/// Splits `0..n` into `m` input subsequences and `1..=n−2` into `m` Steiner
/// subsequences. Requires `1 ≤ m < n−2`.
pub fn partition(m: usize, n: usize) -> Result<Partition> {
    check_modulus(m)?;
    if n < 3 || m >= n - 2 {
        return Err(Error::Range(format!(
            "partition needs m < n-2 (m={m}, n={n})"
        )));
    }
    let input = (0..m)
        .map(|j| SubsequenceSpec::new(PointKind::Input, j, m, n))
        .collect::<Result<Vec<_>>>()?;
    let steiner = (1..=m)
        .map(|k| SubsequenceSpec::new(PointKind::Steiner, k, m, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(Partition {
        modulus: m,
        n,
        input,
        steiner,
    })
}

fn check_modulus(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::Range("skip modulus m must be >= 1".into()))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::collections::BTreeSet;
    use std::f64::consts::FRAC_PI_2;

    fn omega_r() -> f64 {
        PI - (2.0f64 / 3.0).acos()
    }

    fn params_r() -> HelixParams {
        let w = omega_r();
        HelixParams::new(w, 30f64.sqrt() / (9.0 * w)).unwrap()
    }

    #[test]
    fn a_m_values() {
        assert_abs_diff_eq!(a_m(FRAC_PI_2, 1), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a_m(omega_r(), 1), 7.0 / 3.0, epsilon = 1e-14);
        // cos 3w = 4cos^3 w - 3 cos w with cos w = -2/3
        assert_abs_diff_eq!(a_m(omega_r(), 3), -17.0 / 27.0, epsilon = 1e-14);
    }

    #[test]
    fn inner_radius_values() {
        let p = HelixParams::new(FRAC_PI_2, 0.4).unwrap();
        assert_abs_diff_eq!(
            inner_radius(p, 1).unwrap(),
            0.4 * PI / (2.0 * 2f64.sqrt()),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            inner_radius(params_r(), 1).unwrap(),
            (3.0f64 / 7.0).sqrt() / 3.0,
            epsilon = 1e-14
        );
        let bad = HelixParams::new(PI / 6.0, 0.4).unwrap();
        assert!(matches!(inner_radius(bad, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn inner_radius_clamps_at_one() {
        let p = HelixParams::new(FRAC_PI_2, 5.0).unwrap();
        assert!(inner_radius_raw(p, 1).unwrap() > 1.0);
        assert_eq!(inner_radius(p, 1).unwrap(), 1.0);
    }

    #[test]
    fn params_validation() {
        assert!(HelixParams::new(0.0, 0.3).is_err());
        assert!(HelixParams::new(PI + 1e-9, 0.3).is_err());
        assert!(HelixParams::new(1.0, -0.1).is_err());
        assert!(HelixParams::new(PI, 0.0).is_ok());
    }

    #[test]
    fn input_points() {
        let p = HelixParams::new(FRAC_PI_2, 0.4).unwrap();
        assert_eq!(input_point(0, p), Point3::new(1.0, 0.0, 0.0));
        let p1 = input_point(1, p);
        assert_abs_diff_eq!(p1.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p1.y, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p1.z, 0.6283185307179586, epsilon = 1e-15);
        let p2 = input_point(2, p);
        assert_abs_diff_eq!(p2.x, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p2.z, 1.2566370614359172, epsilon = 1e-15);
    }

    #[test]
    fn steiner_points() {
        let pr = params_r();
        let r = (3.0f64 / 7.0).sqrt() / 3.0;
        let s1 = steiner_point_on_helix(1, pr, 1).unwrap();
        assert_abs_diff_eq!(s1.x, r * omega_r().cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(s1.y, r * omega_r().sin(), epsilon = 1e-14);
        assert_abs_diff_eq!(s1.z, 30f64.sqrt() / 9.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s1.z, 0.6085806, epsilon = 1e-7);

        let p = HelixParams::new(FRAC_PI_2, 0.4).unwrap();
        let s2 = steiner_point_on_helix(2, p, 1).unwrap();
        assert_abs_diff_eq!(s2.x, -0.4442882938158366, epsilon = 1e-14);
        assert_abs_diff_eq!(s2.y, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s2.z, 1.2566370614359172, epsilon = 1e-14);
        assert!(steiner_point_on_helix(1, HelixParams::new(0.5, 0.4).unwrap(), 1).is_err());
    }

    #[test]
    fn subsequences() {
        assert_eq!(
            subsequence_indices(0, 2, 23, PointKind::Input).unwrap(),
            (0..=22).step_by(2).collect::<Vec<_>>()
        );
        assert_eq!(
            subsequence_indices(1, 3, 10, PointKind::Input).unwrap(),
            vec![1, 4, 7]
        );
        assert_eq!(
            subsequence_indices(1, 1, 9, PointKind::Steiner).unwrap(),
            (1..=7).collect::<Vec<_>>()
        );
        assert!(subsequence_indices(2, 2, 10, PointKind::Input).is_err());
        assert!(subsequence_indices(0, 2, 10, PointKind::Steiner).is_err());
        assert!(subsequence_indices(3, 2, 10, PointKind::Steiner).is_err());
        assert!(subsequence_indices(0, 0, 10, PointKind::Input).is_err());
    }

    #[test]
    fn partitions() {
        let p1 = partition(1, 7).unwrap();
        assert_eq!(p1.input.len(), 1);
        assert_eq!(p1.input[0].indices(), (0..7).collect::<Vec<_>>());

        let p3 = partition(3, 23).unwrap();
        let starts: Vec<_> = p3.input.iter().map(|s| s.start).collect();
        assert_eq!(starts, vec![0, 1, 2]);

        let p2 = partition(2, 10).unwrap();
        let mut seen = BTreeSet::new();
        for s in &p2.input {
            for i in s.indices() {
                assert!(seen.insert(i), "index {i} repeated");
            }
        }
        assert_eq!(seen, (0..10).collect());

        assert!(partition(8, 10).is_err());
        assert!(partition(7, 10).is_ok());
    }
}

//! Ratio-function minimisation and parameter scans.

use helix_steiner::optimize::{self, closed_form_minimum, MinimizeOptions, ScanAxis, ScanQuantity};
use helix_steiner::{srf, HelixParams, SearchBox};

#[test]
fn closed_form_constants() {
    let (w, a, rho) = closed_form_minimum();
    assert!((w - 2.300523983021863).abs() < 1e-14);
    assert!((a - 0.2645400021654115).abs() < 1e-14);
    assert!((rho - 0.7841903733771279).abs() < 1e-14);
    let v = srf::srf(HelixParams::new(w, a).unwrap(), 12).unwrap();
    assert!((v.value - rho).abs() < 1e-12);
}

#[test]
fn default_search_finds_the_closed_form() {
    let (w, a, rho) = closed_form_minimum();
    let r = optimize::minimize_srf(&SearchBox::default(), &MinimizeOptions::default()).unwrap();
    assert!((r.rho_star - rho).abs() < 1e-8);
    assert!((r.omega_star - w).abs() < 1e-6);
    assert!((r.alpha_star - a).abs() < 1e-6);
    assert_eq!(r.m_star, 1);
    assert!(r.rho_star <= r.grid_best);
    let again = srf::srf(HelixParams::new(r.omega_star, r.alpha_star).unwrap(), 12).unwrap();
    assert_eq!(again.value, r.rho_star);
}

#[test]
fn search_is_deterministic() {
    let opts = MinimizeOptions {
        seed: 42,
        restarts: 4,
        ..MinimizeOptions::default()
    };
    let a = optimize::minimize_srf(&SearchBox::default(), &opts).unwrap();
    let b = optimize::minimize_srf(&SearchBox::default(), &opts).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.local_minima.len(), 5);
}

#[test]
fn seeds_agree_on_the_minimum() {
    let (_, _, rho) = closed_form_minimum();
    for seed in [1, 2, 3] {
        let opts = MinimizeOptions {
            seed,
            ..MinimizeOptions::default()
        };
        let r = optimize::minimize_srf(&SearchBox::default(), &opts).unwrap();
        assert!((r.rho_star - rho).abs() < 1e-8, "seed {seed}");
    }
}

#[test]
fn grid_bounds_refinement() {
    // the grid best is always an upper bound on the refined value
    let boxes = [
        SearchBox {
            omega_lo: 1.2,
            omega_hi: 2.0,
            alpha_lo: 0.1,
            alpha_hi: 0.6,
        },
        SearchBox {
            omega_lo: 2.5,
            omega_hi: 3.0,
            alpha_lo: 0.2,
            alpha_hi: 0.9,
        },
    ];
    for b in boxes {
        let r = optimize::minimize_srf(&b, &MinimizeOptions::default()).unwrap();
        assert!(r.rho_star <= r.grid_best);
        assert!(r.omega_star >= b.omega_lo && r.omega_star <= b.omega_hi);
        assert!(r.alpha_star >= b.alpha_lo && r.alpha_star <= b.alpha_hi);
    }
}

#[test]
fn bad_boxes_are_rejected() {
    let low = SearchBox {
        omega_lo: 0.5,
        ..SearchBox::default()
    };
    assert!(optimize::minimize_srf(&low, &MinimizeOptions::default()).is_err());
    let inverted = SearchBox {
        alpha_lo: 0.9,
        alpha_hi: 0.1,
        ..SearchBox::default()
    };
    assert!(optimize::minimize_srf(&inverted, &MinimizeOptions::default()).is_err());
}

#[test]
fn cos_theta_scan_is_complete_and_repeatable() {
    let (w, _, _) = closed_form_minimum();
    let omega = ScanAxis::fixed(w);
    let alpha = ScanAxis::new(0.0, 1.0, 200).unwrap();
    let a = optimize::scan_grid(omega, alpha, ScanQuantity::CosThetaM, &[1, 2, 3]).unwrap();
    let b = optimize::scan_grid(omega, alpha, ScanQuantity::CosThetaM, &[1, 2, 3]).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.rows.len(), 200);
    assert_eq!(a.missing_cells(), 0);
    assert_eq!(a.columns, ["cos_theta_m1", "cos_theta_m2", "cos_theta_m3"]);
    assert_eq!(a.rows[0].alpha, 0.0);
    assert_eq!(a.rows[199].alpha, 1.0);
    for row in &a.rows {
        for v in &row.values {
            assert!((-1.0..=1.0).contains(&v.unwrap()));
        }
    }
}

#[test]
fn scan_rows_are_omega_major() {
    let t = optimize::scan_grid(
        ScanAxis::new(1.5, 2.5, 3).unwrap(),
        ScanAxis::new(0.1, 0.3, 4).unwrap(),
        ScanQuantity::Srf,
        &[4],
    )
    .unwrap();
    assert_eq!(t.rows.len(), 12);
    assert_eq!(t.rows[3].omega, 1.5);
    assert_eq!(t.rows[4].omega, 2.0);
    assert_eq!(t.rows[4].alpha, 0.1);
    let per = optimize::scan_grid(
        ScanAxis::fixed(2.0),
        ScanAxis::fixed(0.3),
        ScanQuantity::PerPointLengths,
        &[1, 2],
    )
    .unwrap();
    assert_eq!(
        per.columns,
        ["spanning_m1", "steiner_m1", "spanning_m2", "steiner_m2"]
    );
}

//! Elastic equilibrium of helical p-chains.

use std::f64::consts::{FRAC_PI_3, PI};

use helix_steiner::helix::{inner_radius_raw, input_point};
use helix_steiner::optimize::closed_form_minimum;
use helix_steiner::oracle::{self, OracleOptions, RelaxOptions};
use helix_steiner::stability::{self, PChainSpec, TSumRange};
use helix_steiner::{srf, HelixParams, Point3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn at_minimum() -> HelixParams {
    let (w, a, _) = closed_form_minimum();
    HelixParams::new(w, a).unwrap()
}

fn random_feasible(rng: &mut ChaCha8Rng) -> HelixParams {
    loop {
        let w = rng.gen_range(FRAC_PI_3 + 0.05..PI - 0.05);
        let a = rng.gen_range(0.05..1.0);
        let p = HelixParams::new(w, a).unwrap();
        if inner_radius_raw(p, 1).is_ok_and(|r| r <= 1.0) && srf::full_tree_feasible(1, p) {
            return p;
        }
    }
}

#[test]
fn helical_three_chain_interior_is_balanced() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut samples = vec![at_minimum()];
    samples.extend((0..20).map(|_| random_feasible(&mut rng)));
    for p in samples {
        for n in [6, 9, 14] {
            let spec = PChainSpec::with_r3_radius(n, 3, p).unwrap();
            let net = stability::build_p_chain(&spec);
            let res = stability::fermat_residuals(&net).unwrap();
            for r in &res[1..res.len() - 1] {
                assert!(*r < 1e-9, "residual {r} at {p:?}, n={n}");
            }
        }
    }
}

#[test]
fn end_points_are_not_balanced_on_the_helix() {
    let spec = PChainSpec::with_r3_radius(8, 3, at_minimum()).unwrap();
    let res = stability::fermat_residuals(&stability::build_p_chain(&spec)).unwrap();
    assert!((res[0] - 0.5377).abs() < 1e-3);
    assert!((res[5] - res[0]).abs() < 1e-9);
}

#[test]
fn three_chain_length_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let p = random_feasible(&mut rng);
        for n in 4..40 {
            let spec = PChainSpec::with_r3_radius(n, 3, p).unwrap();
            let geo = stability::length_geometric(&stability::build_p_chain(&spec));
            let exact = srf::steiner_length_exact(n, 1, p).unwrap().total;
            assert!((geo - exact).abs() < 1e-10 * exact, "n={n} {p:?}");
        }
    }
}

#[test]
fn relaxed_three_chain_is_the_minimal_tree() {
    let p = at_minimum();
    for n in 4..=7 {
        let spec = PChainSpec::with_r3_radius(n, 3, p).unwrap();
        let (net, report) = stability::relax_p_chain(&spec, &RelaxOptions::default());
        assert!(report.converged);
        let pts: Vec<Point3> = (0..n).map(|j| input_point(j, p)).collect();
        let smt = oracle::smt(&pts, &OracleOptions::default()).unwrap();
        assert!(report.length >= smt.smt_length - 1e-9);
        let diag = stability::diagnose_network(&net).unwrap();
        assert!(diag.gradient_norm < 1e-6);
        assert!((diag.length_force_truncated - diag.length_geometric).abs() < 1e-9);
    }
}

#[test]
fn equilibrium_and_truncated_form_agree() {
    // at equilibrium the truncated form equals the length; off it the gap grows
    let spec = PChainSpec::with_r3_radius(10, 3, at_minimum()).unwrap();
    let (mut net, _) = stability::relax_p_chain(&spec, &RelaxOptions::default());
    let f = stability::hooke_forces(&net, 1.0).unwrap();
    assert!(
        (stability::length_force_truncated(&net, &f) - stability::length_geometric(&net)).abs()
            < 1e-9
    );
    for s in &mut net.steiner_points {
        s.x *= 1.1;
        s.y *= 1.1;
    }
    let f = stability::hooke_forces(&net, 1.0).unwrap();
    assert!(
        (stability::length_force_truncated(&net, &f) - stability::length_geometric(&net)).abs()
            > 1e-3
    );
    assert!(
        (stability::length_force_form(&net, &f) - stability::length_geometric(&net)).abs() < 1e-9
    );
}

#[test]
fn t_sums_are_reported_not_zero() {
    let spec = PChainSpec::with_r3_radius(8, 3, at_minimum()).unwrap();
    for range in [TSumRange::Adjacent, TSumRange::All] {
        let rep = stability::stationarity_report(&spec, range).unwrap();
        assert_eq!(rep.t_sum_residuals.len(), spec.q);
        assert!(rep.t_sum_residuals.iter().all(|t| *t < 0.0));
        assert!(rep.interior_gradient_norm.unwrap() < 1e-6);
    }
}

#[test]
fn longer_chains_are_longer() {
    let p = at_minimum();
    let rows = stability::compare_p_lengths(8, p, &[3, 4, 5, 8]);
    let len = |p: usize| rows.iter().find(|r| r.p == p).unwrap().length.unwrap();
    assert!((len(3) - 10.789320526271519).abs() < 1e-9);
    assert!((len(5) - 11.498283746941837).abs() < 1e-9);
    assert!(len(3) < len(5));
    assert_eq!(rows.iter().find(|r| r.p == 4).unwrap().q, Some(3));
    assert!(rows.iter().all(|r| r.length.is_some()));
    let odd = stability::compare_p_lengths(9, p, &[5]);
    assert_eq!(odd[0].length, None);
    assert_eq!(stability::feasible_q(9, 5), None);
}

#[test]
fn chain_accounting() {
    for p in 3..9 {
        for q in 1..12 {
            let n = q * (p - 2) + 2;
            let spec = PChainSpec::new(n, p, at_minimum(), 0.3).unwrap();
            assert_eq!(spec.q, q);
            if q >= 2 {
                assert!(spec.adjacency_accounting_holds());
            }
            let net = stability::build_p_chain(&spec);
            net.validate_tree().unwrap();
            let degrees = net.degrees();
            for k in 0..q {
                assert_eq!(degrees[net.steiner_vertex(k)], p, "p={p} q={q} k={k}");
            }
        }
    }
}

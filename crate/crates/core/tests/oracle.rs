//! Exact Steiner tree oracle on helical and reference point sets.

use helix_steiner::helix::input_point;
use helix_steiner::optimize::closed_form_minimum;
use helix_steiner::oracle::{self, OracleOptions, RelaxOptions, TopologyId};
use helix_steiner::{srf, HelixParams, Point3, TreeNetwork};

fn helical(n: usize, p: HelixParams) -> Vec<Point3> {
    (0..n).map(|j| input_point(j, p)).collect()
}

fn parameter_sets() -> Vec<HelixParams> {
    let (w, a, _) = closed_form_minimum();
    vec![
        HelixParams::new(w, a).unwrap(),
        HelixParams::new(2.0, 0.3).unwrap(),
        HelixParams::new(2.6, 0.5).unwrap(),
        HelixParams::new(1.5, 0.1).unwrap(),
    ]
}

/// Largest deviation from 120° over Steiner points whose edges are all longer
/// than `min_edge`, in radians.
fn worst_angle_error(net: &TreeNetwork, min_edge: f64) -> f64 {
    let adj = net.neighbors();
    let mut worst: f64 = 0.0;
    for k in 0..net.steiner_points.len() {
        let v = net.steiner_vertex(k);
        let x = net.position(v);
        let dirs: Vec<Point3> = adj[v].iter().map(|&w| net.position(w) - x).collect();
        if dirs.iter().any(|d| d.norm() <= min_edge) {
            continue;
        }
        assert_eq!(dirs.len(), 3);
        for a in 0..3 {
            for b in a + 1..3 {
                let c = dirs[a].dot(dirs[b]) / (dirs[a].norm() * dirs[b].norm());
                let err = (c.clamp(-1.0, 1.0).acos() - 2.0 * std::f64::consts::FRAC_PI_3).abs();
                worst = worst.max(err);
            }
        }
    }
    worst
}

#[test]
fn helical_sets_respect_dominance() {
    for p in parameter_sets() {
        for n in 3..=7 {
            let pts = helical(n, p);
            let r = oracle::smt(&pts, &OracleOptions::default()).unwrap();
            assert!(r.smt_length <= r.mst_length + 1e-12, "n={n} {p:?}");
            assert!(r.ratio > 0.0 && r.ratio <= 1.0);
            assert_eq!(r.unconverged, 0);
            for m in 1..n.saturating_sub(2) {
                let span = srf::spanning_length_exact(n, m, p).unwrap().total;
                assert!(r.mst_length <= span + 1e-12, "n={n} m={m} {p:?}");
            }
            // only the single-chain construction is a connected tree
            if let Ok(st) = srf::steiner_length_exact(n, 1, p) {
                assert!(r.smt_length <= st.total + 1e-9, "n={n} {p:?}");
            }
            let scale = r.best_topology.scale();
            let err = worst_angle_error(&r.best_topology, 1e-6 * scale);
            assert!(err < 1e-4, "angle error {err} at n={n} {p:?}");
        }
    }
}

#[test]
fn frozen_helical_values() {
    let (w, a, _) = closed_form_minimum();
    let p = HelixParams::new(w, a).unwrap();
    let r = oracle::smt(&helical(6, p), &OracleOptions::default()).unwrap();
    assert!((r.smt_length - 7.775608473759753).abs() < 1e-9);
    assert!((r.ratio - 0.8080649361788991).abs() < 1e-9);
}

#[test]
fn unit_square_length() {
    let sq = [
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(1.0, 1.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
    ];
    let r = oracle::smt(&sq, &OracleOptions::default()).unwrap();
    assert!((r.smt_length - (1.0 + 3f64.sqrt())).abs() < 1e-9);
    assert!((r.mst_length - 3.0).abs() < 1e-12);
}

#[test]
fn every_topology_is_a_full_tree() {
    let p = parameter_sets()[1];
    let pts = helical(6, p);
    for id in oracle::enumerate_full_topologies(6, 8).unwrap() {
        let net = oracle::full_topology_network(&pts, id).unwrap();
        net.validate_tree().unwrap();
        assert!(net.is_full_topology());
        let opt = oracle::optimize_topology(&pts, id, &RelaxOptions::default()).unwrap();
        assert!(opt.length <= net.length() + 1e-12);
    }
    assert!(oracle::full_topology_network(&pts, TopologyId(105)).is_err());
}

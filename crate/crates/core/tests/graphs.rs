use crofton_core::graphs::{
    build_bn, find_interval_convexity_violation, graph_distortion_report, interval, interval_violation_at,
    polygon_shortcut_ratio, shortcut_sweep, GraphInstance, ShortcutCase, SHORTCUT_BOUND,
};
use std::f64::consts::PI;

fn graph(n: usize, edges: &[(usize, usize)]) -> GraphInstance {
    GraphInstance::from_edges((0..n).map(|i| format!("v{i}")).collect(), edges).unwrap()
}

/// Floyd-Warshall, independent of the BFS used by the library.
fn all_pairs(g: &GraphInstance) -> Vec<Vec<u32>> {
    let n = g.len();
    let mut d = vec![vec![u32::MAX / 4; n]; n];
    for v in 0..n {
        d[v][v] = 0;
        for &w in g.neighbors(v) {
            d[v][w] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    d
}

#[test]
fn distances_match_floyd_warshall() {
    for n in 1..=8 {
        let (g, _) = build_bn(n).unwrap();
        let d = all_pairs(&g);
        for a in 0..g.len() {
            for b in 0..g.len() {
                assert_eq!(g.distance(a, b), d[a][b]);
            }
        }
    }
}

#[test]
fn bn_shape() {
    for n in 1..=10 {
        let (g, r) = build_bn(n).unwrap();
        assert_eq!(g.len(), 4 * n);
        if n >= 2 {
            // two (2n+1)-cycles sharing an edge plus the two triangle edges
            assert_eq!(g.edge_count(), 2 * (2 * n + 1) - 1 + 2);
            assert_eq!(g.degree(r.u), 3);
            assert_eq!(g.degree(r.v), 3);
            assert_eq!(g.distance(r.u1, r.u2), 1);
            assert_eq!(g.distance(r.v1, r.v2), 1);
        }
        assert_eq!(g.distance(r.u, r.v), 1);
        assert!(g.labels().iter().all(|l| g.vertex(l).is_some()));
    }
    let (g, r) = build_bn(6).unwrap();
    assert_eq!(g.len(), 24);
    assert_eq!((g.distance(r.x, r.u), g.distance(r.x, r.v)), (6, 6));
    assert_eq!((g.distance(r.y, r.u), g.distance(r.y, r.v)), (6, 6));
    assert!(build_bn(0).is_err());
}

#[test]
fn b6_obstruction_by_role() {
    let (g, r) = build_bn(6).unwrap();
    let ixy = interval(&g, r.x, r.y);
    for c in [r.u1, r.u2, r.v1, r.v2] {
        assert!(ixy.contains(&c));
    }
    assert!(!ixy.contains(&r.u) && !ixy.contains(&r.v));
    let iuv = interval(&g, r.u1, r.v1);
    assert!(iuv.contains(&r.u) && iuv.contains(&r.v));

    let w = interval_violation_at(&g, r.x, r.y).unwrap();
    assert!(w.holds(&g));
    assert!(w.outside == r.u || w.outside == r.v);
}

#[test]
fn obstruction_exists_from_two_on() {
    for n in 2..=10 {
        let (g, r) = build_bn(n).unwrap();
        let w = find_interval_convexity_violation(&g).expect("B_n should have a non-convex interval");
        assert!(w.holds(&g));
        assert!(interval_violation_at(&g, r.x, r.y).is_some(), "n = {n}");
    }
}

#[test]
fn small_bn() {
    // B_1 is K4, which embeds in l1
    let (g, _) = build_bn(1).unwrap();
    assert_eq!(g.edge_count(), 6);
    assert!(find_interval_convexity_violation(&g).is_none());
    let (g, r) = build_bn(2).unwrap();
    let w = find_interval_convexity_violation(&g).unwrap();
    assert!(w.holds(&g));
    assert_eq!(w.endpoints, (r.x, r.y));
}

#[test]
fn interval_properties() {
    let (g, _) = build_bn(5).unwrap();
    for a in 0..g.len() {
        assert_eq!(interval(&g, a, a), vec![a]);
        for b in 0..g.len() {
            let i = interval(&g, a, b);
            assert_eq!(i, interval(&g, b, a));
            assert!(i.iter().all(|&c| g.distance(a, c) <= g.distance(a, b)));
        }
    }
}

#[test]
fn embeddable_graphs_have_convex_intervals() {
    let path = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
    let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
    let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    let c6 = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
    let cube: Vec<(usize, usize)> = (0..8usize)
        .flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b))))
        .filter(|(a, b)| a < b)
        .collect();
    for g in [path, star, c4, c6, graph(8, &cube)] {
        assert!(find_interval_convexity_violation(&g).is_none());
    }
    assert!(GraphInstance::from_edges(vec!["a".into(), "b".into()], &[]).is_err());
}

#[test]
fn polygon_examples() {
    let s = polygon_shortcut_ratio(4, 0.5, 2.5).unwrap();
    assert!((s.walk - 2.0).abs() < 1e-12 && (s.chord - 1.0).abs() < 1e-12);
    assert!((s.ratio - 2.0).abs() < 1e-12);
    assert_eq!(s.case, ShortcutCase::NonIncident);
    let (walk, chord) = s.corner_walk.unwrap();
    assert!((walk - 1.0).abs() < 1e-12 && (chord - 1.0).abs() < 1e-12);
    assert_eq!(polygon_shortcut_ratio(4, 0.5, 1.5).unwrap().case, ShortcutCase::Incident);
    let t = polygon_shortcut_ratio(3, 1.0 - 1e-7, 1.0 + 1e-7).unwrap();
    assert!((t.ratio - 2.0).abs() < 1e-6);
    assert!(polygon_shortcut_ratio(5, 1.0, 6.0).is_err());
    assert!(polygon_shortcut_ratio(2, 0.0, 1.0).is_err());
}

#[test]
fn shortcut_ratio_against_closed_form() {
    // two points at distance t from a corner with interior angle a:
    // chord = 2 t sin(a/2), walk = 2 t
    for m in 3..=20 {
        let angle = PI * (m as f64 - 2.0) / m as f64;
        for t in [0.1, 0.25, 0.5] {
            let s = polygon_shortcut_ratio(m, 1.0 - t, 1.0 + t).unwrap();
            assert!((s.ratio - 1.0 / (angle / 2.0).sin()).abs() < 1e-9, "m = {m}");
        }
    }
}

#[test]
fn sweeps_stay_within_bound() {
    for m in [3, 4, 7, 13, 20] {
        let f = shortcut_sweep(m, 2000, 1).unwrap();
        assert!(f.max_ratio <= SHORTCUT_BOUND + 1e-9);
        assert!(f.max_corner_ratio <= PI / 2.0 + 1e-9);
        assert!(f.within_bound);
    }
    let (g, _) = build_bn(6).unwrap();
    let report = graph_distortion_report(&g, &[3, 4, 13], 1000, 0).unwrap();
    assert_eq!(report.faces.len(), 3);
    assert!(report.all_within);
    let empty = graph_distortion_report(&g, &[], 1000, 0).unwrap();
    assert!(empty.faces.is_empty() && empty.all_within);
}

mod common;

use common::{euclid, models, no_collinear_triple, pt, random_config};
use crofton_core::embedding::audit::{classify_chord, double_counting_audit, ChordCase};
use crofton_core::embedding::{
    count_collinear_triples, crofton_embed, crofton_embed_with, embed_any, perturb_to_general_position, verify_crofton,
    EmbedOptions, DEFAULT_SCHEDULE,
};
use crofton_core::separations::enumerate_classes;
use crofton_core::{Error, GeometryModel, Point, PointConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid(model: GeometryModel, step: f64) -> PointConfig {
    let pts = (0..3)
        .flat_map(|i| (0..3).map(move |j| pt(i as f64 * step, j as f64 * step)))
        .collect();
    PointConfig::new(model, pts, None).unwrap()
}

#[test]
fn triangle_cut_weights_by_hand() {
    let cfg = euclid(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
    let dec = crofton_embed(&cfg).unwrap();
    let r2 = 2f64.sqrt();
    let mut weights: Vec<f64> = dec.cuts.iter().map(|c| c.weight).collect();
    weights.sort_by(f64::total_cmp);
    let want = [(2.0 - r2) / 2.0, r2 / 2.0, r2 / 2.0];
    for (w, e) in weights.iter().zip(want) {
        assert!((w - e).abs() < 1e-12, "{w} vs {e}");
    }
    // the light cut isolates the right-angle corner
    let light = dec.cuts.iter().find(|c| (c.weight - want[0]).abs() < 1e-12).unwrap();
    assert_eq!(light.side, vec![0]);
    for (i, j, d) in [(0, 1, 1.0), (0, 2, 1.0), (1, 2, r2)] {
        assert!((dec.l1_distance(i, j) - d).abs() < 1e-15);
        assert!((dec.cut_distance(i, j) - d).abs() < 1e-15);
    }
}

#[test]
fn random_configurations_embed_isometrically() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in models() {
        let tol = if g == GeometryModel::Klein { 1e-7 } else { 1e-9 };
        for _ in 0..20 {
            let n = rng.gen_range(2..=12);
            let cfg = random_config(&mut rng, g, n);
            let dec = crofton_embed(&cfg).unwrap();
            assert!(dec.cuts.iter().all(|c| c.weight >= -1e-9));
            for i in 0..n {
                for j in i + 1..n {
                    let d = g.metric(cfg.point(i), cfg.point(j));
                    assert!((dec.l1_distance(i, j) - d).abs() <= tol * d, "{g:?}");
                }
            }
        }
    }
}

#[test]
fn verification_catches_a_tampered_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cfg = random_config(&mut rng, GeometryModel::Euclidean, 6);
    let mut dec = crofton_embed(&cfg).unwrap();
    assert!(verify_crofton(&cfg, &dec, 1e-9).unwrap().passed);
    dec.cuts[3].weight *= 1.01;
    let report = verify_crofton(&cfg, &dec, 1e-9).unwrap();
    assert!(!report.passed);
    assert!(report.flagged().count() > 0);
    assert!(report.flagged().all(|p| dec.cuts[3].side.contains(&p.i) != dec.cuts[3].side.contains(&p.j)));
}

#[test]
fn no_zero_cuts_in_general_position() {
    let cfg = euclid(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
    let all = crofton_embed(&cfg).unwrap();
    let kept = crofton_embed_with(&cfg, &EmbedOptions { drop_zero_cuts: true, tolerance: None }).unwrap();
    assert!(all.cuts.iter().all(|c| c.weight > 0.0));
    assert_eq!(kept, all);
}

#[test]
fn embedding_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cfg = random_config(&mut rng, GeometryModel::Klein, 10);
    assert_eq!(crofton_embed(&cfg).unwrap(), crofton_embed(&cfg).unwrap());
}

#[test]
fn collinear_input_is_rejected_by_the_exact_embedder() {
    let cfg = euclid(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
    assert!(matches!(crofton_embed(&cfg), Err(Error::NotInGeneralPosition(..))));
}

#[test]
fn grid_collinear_count() {
    assert_eq!(count_collinear_triples(&grid(GeometryModel::Euclidean, 1.0)), 8);
    assert_eq!(count_collinear_triples(&euclid(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)])), 4);
}

#[test]
fn perturbation_of_grids_in_every_model() {
    for g in models() {
        let step = if g == GeometryModel::Klein { 0.3 } else { 1.0 };
        let cfg = grid(g, step);
        let eps = 1e-4;
        let (out, report) = perturb_to_general_position(&cfg, eps, 0).unwrap();
        assert!(no_collinear_triple(out.points()));
        assert_eq!(report.initial_collinear, 8);
        assert_eq!(report.final_collinear, 0);
        assert!(report.steps.len() <= 729);
        for i in 0..9 {
            let moved = g.metric(cfg.point(i), out.point(i));
            assert!(moved < eps / 2.0, "{g:?} moved {moved}");
            for j in 0..9 {
                let drift = (g.metric(cfg.point(i), cfg.point(j)) - g.metric(out.point(i), out.point(j))).abs();
                assert!(drift < eps);
            }
        }
        assert!(report.steps.windows(2).all(|w| w[1].collinear_before < w[0].collinear_before));
    }
}

#[test]
fn perturbation_depends_only_on_the_seed() {
    let cfg = grid(GeometryModel::Euclidean, 1.0);
    let (a, ra) = perturb_to_general_position(&cfg, 1e-3, 42).unwrap();
    let (b, rb) = perturb_to_general_position(&cfg, 1e-3, 42).unwrap();
    assert_eq!(a.points(), b.points());
    assert_eq!(ra, rb);
}

#[test]
fn approximants_converge_on_collinear_points() {
    let cfg = euclid(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
    let out = embed_any(&cfg, &DEFAULT_SCHEDULE, 0, &EmbedOptions::default()).unwrap();
    assert_eq!(out.levels.len(), 3);
    for w in out.levels.windows(2) {
        assert!(w[1].max_abs < w[0].max_abs);
    }
    assert!(out.residual.max_abs < 1e-5);
    // the limit is the line metric: cut {1} weight vanishes
    for (i, j, d) in [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)] {
        assert!((out.decomposition.l1_distance(i, j) - d).abs() < 1e-5);
    }
}

#[test]
fn embed_any_is_exact_on_general_position() {
    let cfg = euclid(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
    let out = embed_any(&cfg, &[], 0, &EmbedOptions::default()).unwrap();
    assert!(out.levels.is_empty() && out.perturbation.is_none());
    assert_eq!(out.decomposition, crofton_embed(&cfg).unwrap());
    let collinear = euclid(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
    assert!(embed_any(&collinear, &[], 0, &EmbedOptions::default()).is_err());
}

#[test]
fn audit_chord_cases() {
    let cfg = euclid(&[(0.0, 0.0), (2.0, 0.0), (1.0, 1.0), (1.0, -1.0), (5.0, 5.0), (6.0, 5.0)]);
    assert_eq!(classify_chord(&cfg, (0, 1), (0, 1)), ChordCase::Probe);
    assert_eq!(classify_chord(&cfg, (0, 1), (1, 0)), ChordCase::Probe);
    assert_eq!(classify_chord(&cfg, (0, 1), (0, 2)), ChordCase::SharedEndpoint);
    assert_eq!(classify_chord(&cfg, (0, 1), (2, 3)), ChordCase::Crossing);
    assert_eq!(classify_chord(&cfg, (0, 1), (4, 5)), ChordCase::Missing);
}

#[test]
fn double_counting_audit_passes_on_random_configurations() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for g in models() {
        for _ in 0..8 {
            let n = rng.gen_range(2..=10);
            let cfg = random_config(&mut rng, g, n);
            let classes = enumerate_classes(&cfg).unwrap();
            let report = double_counting_audit(&cfg, &classes);
            assert_eq!(report.probes, n * (n - 1) / 2);
            assert!(report.passed(), "{:?}", report.violations);
        }
    }
}

#[test]
fn audit_flags_a_missing_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = random_config(&mut rng, GeometryModel::Euclidean, 6);
    let mut classes = enumerate_classes(&cfg).unwrap();
    classes.remove(2);
    assert!(!double_counting_audit(&cfg, &classes).passed());
}

#[test]
fn embedding_scales_with_the_configuration() {
    let base = [(0.1, 0.2), (0.7, -0.3), (-0.4, 0.5), (0.3, 0.9), (-0.6, -0.6), (0.9, 0.8)];
    let a = crofton_embed(&euclid(&base)).unwrap();
    let b = crofton_embed(&euclid(&base.map(|(x, y)| (8.0 * x, 8.0 * y)))).unwrap();
    for (x, y) in a.cuts.iter().zip(&b.cuts) {
        assert_eq!(x.side, y.side);
        assert!((y.weight - 8.0 * x.weight).abs() < 1e-12);
    }
}

#[test]
fn decimal_inputs_stay_exact() {
    let pts = vec![
        Point::from_decimal("0.1", "0.1").unwrap(),
        Point::from_decimal("0.2", "0.2").unwrap(),
        Point::from_decimal("0.3", "0.3").unwrap(),
    ];
    let cfg = PointConfig::new(GeometryModel::Euclidean, pts, None).unwrap();
    assert!(!cfg.is_general_position());
}

#[test]
fn perturbed_grids_are_clearly_in_general_position() {
    for g in models() {
        let step = if g == GeometryModel::Klein { 0.3 } else { 1.0 };
        let cfg = grid(g, step);
        for fraction in [1e-2, 1e-4, 1e-6] {
            let eps = fraction * cfg.diameter();
            let (out, report) = perturb_to_general_position(&cfg, eps, 3).unwrap();
            let p = out.points();
            let moved = report.steps.iter().map(|s| s.length).fold(f64::INFINITY, f64::min);
            for i in 0..9 {
                for j in i + 1..9 {
                    for k in j + 1..9 {
                        let (ux, uy) = (p[j].x() - p[i].x(), p[j].y() - p[i].y());
                        let h = (ux * (p[k].y() - p[i].y()) - uy * (p[k].x() - p[i].x())).abs() / ux.hypot(uy);
                        assert!(h > 1e-6 * moved, "{g:?} {fraction}: triple ({i},{j},{k}) off by {h:e}");
                    }
                }
            }
            if let Err(e) = crofton_embed(&out) {
                panic!("{g:?} {fraction}: {e}");
            }
        }
    }
}

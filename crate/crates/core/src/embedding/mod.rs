//! Cut decompositions built from the weighted separation classes.
//!
//! For a configuration in general position the classes give the identity
//! `2 d(p_i, p_j) = sum of sigma_t over classes separating p_i and p_j`, so
//! the cuts weighted by `sigma_t / 2` form an exact l1 embedding.

pub mod audit;
mod config;
mod perturb;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::GeometryModel;
use crate::separations::{enumerate_classes, SeparationClass};

pub use config::{count_collinear_triples, count_collinear_triples_in, PointConfig};
pub use perturb::{perturb_to_general_position, PerturbationReport, PerturbationStep};

/// Default relative residual tolerance for the Euclidean and Minkowski models.
pub const NORMED_REL_TOLERANCE: f64 = 1e-9;
/// Default relative residual tolerance for the Klein model.
pub const KLEIN_REL_TOLERANCE: f64 = 1e-7;
/// Default schedule for perturbed embeddings, as fractions of the diameter.
pub const DEFAULT_SCHEDULE: [f64; 3] = [1e-2, 1e-4, 1e-6];

pub fn default_tolerance(model: GeometryModel) -> f64 {
    match model {
        GeometryModel::Klein => KLEIN_REL_TOLERANCE,
        _ => NORMED_REL_TOLERANCE,
    }
}

/// A cut: the points of `side` versus the rest, with weight `weight`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub side: Vec<usize>,
    pub weight: f64,
}

/// Nonnegative combination of cut semimetrics realizing a metric, together
/// with the induced l1 coordinates (one coordinate per cut).
#[derive(Clone, Debug, PartialEq)]
pub struct CutDecomposition {
    pub cuts: Vec<Cut>,
    pub coords: Vec<Vec<f64>>,
}

impl CutDecomposition {
    /// Coordinates: point `i` gets `weight_t` in coordinate `t` when it lies in
    /// `side_t`, else zero.
    pub fn from_cuts(cuts: Vec<Cut>, n: usize) -> Self {
        let mut coords = vec![vec![0.0; cuts.len()]; n];
        for (t, cut) in cuts.iter().enumerate() {
            for &i in &cut.side {
                coords[i][t] = cut.weight;
            }
        }
        Self { cuts, coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// l1 distance between the coordinate vectors of `i` and `j`.
    pub fn l1_distance(&self, i: usize, j: usize) -> f64 {
        self.coords[i]
            .iter()
            .zip(&self.coords[j])
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    /// Total weight of the cuts separating `i` and `j`.
    pub fn cut_distance(&self, i: usize, j: usize) -> f64 {
        self.cuts
            .iter()
            .filter(|c| c.side.contains(&i) != c.side.contains(&j))
            .map(|c| c.weight)
            .sum()
    }
}

#[derive(Clone, Debug, Default)]
pub struct EmbedOptions {
    pub drop_zero_cuts: bool,
    /// Relative residual above which the embedding is rejected; defaults per
    /// model.
    pub tolerance: Option<f64>,
}

/// Cut decomposition of a configuration in general position.
pub fn crofton_embed(cfg: &PointConfig) -> Result<CutDecomposition> {
    crofton_embed_with(cfg, &EmbedOptions::default())
}

pub fn crofton_embed_with(cfg: &PointConfig, opts: &EmbedOptions) -> Result<CutDecomposition> {
    let classes = enumerate_classes(cfg)?;
    let dec = decomposition_from_classes(cfg, &classes, opts.drop_zero_cuts);
    let tol = opts.tolerance.unwrap_or_else(|| default_tolerance(cfg.model()));
    let report = verify_crofton(cfg, &dec, tol)?;
    if !report.passed {
        return Err(Error::InvariantViolation(format!(
            "cut decomposition failed verification: max relative residual {:e}, tolerance {tol:e}",
            report.max_rel
        )));
    }
    Ok(dec)
}

/// One cut of weight `sigma / 2` per class. Weights that rounding pushed
/// below zero (within the class weight floor) are stored as zero.
pub fn decomposition_from_classes(cfg: &PointConfig, classes: &[SeparationClass], drop_zero: bool) -> CutDecomposition {
    let cuts = classes
        .iter()
        .map(|c| Cut {
            side: c.left.clone(),
            weight: (c.sigma / 2.0).max(0.0),
        })
        .filter(|c| !(drop_zero && c.weight == 0.0))
        .collect();
    CutDecomposition::from_cuts(cuts, cfg.len())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairResidual {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
    pub l1: f64,
    pub abs: f64,
    pub rel: f64,
    pub flagged: bool,
}

/// Pairwise comparison of the embedding against the model distances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub max_rel: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub pairs: Vec<PairResidual>,
}

impl ResidualReport {
    pub fn flagged(&self) -> impl Iterator<Item = &PairResidual> {
        self.pairs.iter().filter(|p| p.flagged)
    }
}

/// Recomputes both sides of the identity for every pair. The embedded side is
/// evaluated from the coordinates and from the cut list; the worse of the two
/// counts, so tampering with either is caught.
pub fn verify_crofton(cfg: &PointConfig, dec: &CutDecomposition, tol: f64) -> Result<ResidualReport> {
    let n = cfg.len();
    if dec.coords.len() != n {
        return Err(Error::InvalidInput(format!(
            "decomposition has {} coordinate rows for {n} points",
            dec.coords.len()
        )));
    }
    for (i, row) in dec.coords.iter().enumerate() {
        if row.len() != dec.cuts.len() {
            return Err(Error::InvalidInput(format!(
                "coordinate row {i} has {} entries for {} cuts",
                row.len(),
                dec.cuts.len()
            )));
        }
    }
    for cut in &dec.cuts {
        if let Some(&bad) = cut.side.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidInput(format!("cut references point {bad} of {n}")));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let rows: Vec<PairResidual> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let distance = cfg.distance(i, j);
            let by_coords = dec.l1_distance(i, j);
            let by_cuts = dec.cut_distance(i, j);
            let (l1, abs) = if (by_coords - distance).abs() >= (by_cuts - distance).abs() {
                (by_coords, (by_coords - distance).abs())
            } else {
                (by_cuts, (by_cuts - distance).abs())
            };
            let rel = if distance > 0.0 { abs / distance } else { abs };
            PairResidual {
                i,
                j,
                distance,
                l1,
                abs,
                rel,
                flagged: rel >= tol,
            }
        })
        .collect();
    let max_abs = rows.iter().map(|r| r.abs).fold(0.0, f64::max);
    let max_rel = rows.iter().map(|r| r.rel).fold(0.0, f64::max);
    let passed = rows.iter().all(|r| !r.flagged) && dec.cuts.iter().all(|c| c.weight >= 0.0);
    Ok(ResidualReport {
        max_abs,
        max_rel,
        tolerance: tol,
        passed,
        pairs: rows,
    })
}

/// One level of an approximation schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleLevel {
    /// Fraction of the diameter.
    pub fraction: f64,
    /// Absolute perturbation bound.
    pub epsilon: f64,
    pub steps: usize,
    /// Max over pairs of `|l1 - d|` against the original distances.
    pub max_abs: f64,
    pub max_rel: f64,
}

/// Embedding of an arbitrary configuration: exact when in general position,
/// otherwise the embedding of the finest perturbation of the schedule.
#[derive(Clone, Debug)]
pub struct ApproximateEmbedding {
    pub decomposition: CutDecomposition,
    pub levels: Vec<ScheduleLevel>,
    /// Residuals of `decomposition` against the original distances.
    pub residual: ResidualReport,
    pub perturbation: Option<PerturbationReport>,
}

/// Embeds any configuration of distinct points. `schedule` holds perturbation
/// bounds as fractions of the diameter; it is only used when the input is not
/// in general position.
pub fn embed_any(cfg: &PointConfig, schedule: &[f64], seed: u64, opts: &EmbedOptions) -> Result<ApproximateEmbedding> {
    let tol = opts.tolerance.unwrap_or_else(|| default_tolerance(cfg.model()));
    if cfg.is_general_position() {
        let decomposition = crofton_embed_with(cfg, opts)?;
        let residual = verify_crofton(cfg, &decomposition, tol)?;
        return Ok(ApproximateEmbedding {
            decomposition,
            levels: Vec::new(),
            residual,
            perturbation: None,
        });
    }
    if schedule.is_empty() {
        return Err(Error::InvalidInput(
            "configuration is not in general position and no perturbation schedule was given".into(),
        ));
    }
    if let Some(bad) = schedule.iter().find(|f| !(f.is_finite() && **f > 0.0)) {
        return Err(Error::InvalidInput(format!("schedule entries must be positive, got {bad}")));
    }
    let diameter = cfg.diameter();
    let mut levels = Vec::with_capacity(schedule.len());
    let mut finest: Option<(f64, CutDecomposition, ResidualReport, PerturbationReport)> = None;
    for &fraction in schedule {
        let epsilon = fraction * diameter;
        let (moved, report) = perturb_to_general_position(cfg, epsilon, seed)?;
        let decomposition = crofton_embed_with(&moved, opts)?;
        let residual = verify_crofton(cfg, &decomposition, tol)?;
        levels.push(ScheduleLevel {
            fraction,
            epsilon,
            steps: report.steps.len(),
            max_abs: residual.max_abs,
            max_rel: residual.max_rel,
        });
        let finer = finest.as_ref().is_none_or(|(e, ..)| epsilon < *e);
        if finer {
            finest = Some((epsilon, decomposition, residual, report));
        }
    }
    let (_, decomposition, residual, report) = finest.expect("nonempty schedule");
    Ok(ApproximateEmbedding {
        decomposition,
        levels,
        residual,
        perturbation: Some(report),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn cfg(model: GeometryModel, pts: &[(f64, f64)]) -> PointConfig {
        let points = pts.iter().map(|&(x, y)| Point::new(x, y).unwrap()).collect();
        PointConfig::new(model, points, None).unwrap()
    }

    #[test]
    fn two_points() {
        let c = cfg(GeometryModel::Euclidean, &[(0.0, 0.0), (1.0, 0.0)]);
        let dec = crofton_embed(&c).unwrap();
        assert_eq!(dec.cuts, vec![Cut { side: vec![0], weight: 1.0 }]);
        assert_eq!(dec.l1_distance(0, 1), 1.0);
    }

    #[test]
    fn zeroed_weight_is_flagged_on_separated_pairs() {
        let c = cfg(GeometryModel::Euclidean, &[(0.0, 0.0), (1.0, 0.1), (0.3, 1.0), (0.8, 0.7)]);
        let mut dec = crofton_embed(&c).unwrap();
        let victim = dec.cuts[0].clone();
        dec.cuts[0].weight = 0.0;
        let dec = CutDecomposition::from_cuts(dec.cuts, c.len());
        let report = verify_crofton(&c, &dec, 1e-9).unwrap();
        assert!(!report.passed);
        for r in &report.pairs {
            let separated = victim.side.contains(&r.i) != victim.side.contains(&r.j);
            assert_eq!(r.flagged, separated, "pair ({}, {})", r.i, r.j);
        }
    }

    #[test]
    fn single_point_trivial() {
        let c = cfg(GeometryModel::Euclidean, &[(0.3, 0.3)]);
        let dec = CutDecomposition::from_cuts(Vec::new(), 1);
        let report = verify_crofton(&c, &dec, 1e-9).unwrap();
        assert!(report.passed);
        assert_eq!(report.max_abs, 0.0);
        assert!(report.pairs.is_empty());
    }

    #[test]
    fn mismatched_sizes_are_rejected() {
        let c = cfg(GeometryModel::Euclidean, &[(0.0, 0.0), (1.0, 0.0)]);
        let dec = CutDecomposition::from_cuts(Vec::new(), 3);
        assert!(verify_crofton(&c, &dec, 1e-9).is_err());
    }

    #[test]
    fn embed_any_on_general_position_is_exact() {
        let c = cfg(GeometryModel::Euclidean, &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let any = embed_any(&c, &DEFAULT_SCHEDULE, 0, &EmbedOptions::default()).unwrap();
        assert_eq!(any.decomposition, crofton_embed(&c).unwrap());
        assert!(any.levels.is_empty());
    }

    #[test]
    fn embed_any_without_schedule_rejects_degenerate_input() {
        let c = cfg(GeometryModel::Euclidean, &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert!(embed_any(&c, &[], 0, &EmbedOptions::default()).is_err());
        assert!(matches!(crofton_embed(&c), Err(Error::NotInGeneralPosition(0, 1, 2))));
    }
}

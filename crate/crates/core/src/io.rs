//! JSON file formats: point sets, embeddings and graphs.

use serde::{Deserialize, Serialize};

use crate::embedding::{Cut, CutDecomposition, PointConfig, ResidualReport, ScheduleLevel};
use crate::error::{Error, Result};
use crate::geometry::exact::to_decimal_string;
use crate::geometry::{GeometryModel, OrientedLine, Point};
use crate::graphs::GraphInstance;

/// A coordinate as a JSON number (taken at its double value) or a decimal
/// string (taken exactly).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Number(f64),
    Text(String),
}

impl Coordinate {
    fn text(&self) -> String {
        match self {
            Coordinate::Number(v) => format!("{v:?}"),
            Coordinate::Text(s) => s.clone(),
        }
    }
}

/// `{"geometry": "euclidean"|"minkowski"|"klein", "p": 3.0, "points": [[x, y], ...], "labels": [...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointFile {
    pub geometry: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub points: Vec<[Coordinate; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

pub fn parse_model(name: &str, p: Option<f64>) -> Result<GeometryModel> {
    match name.to_ascii_lowercase().as_str() {
        "euclidean" => Ok(GeometryModel::Euclidean),
        "klein" | "hyperbolic" => Ok(GeometryModel::Klein),
        "minkowski" => {
            let p = p.ok_or_else(|| Error::InvalidModel("minkowski geometry needs \"p\"".into()))?;
            GeometryModel::minkowski(p)
        }
        other => Err(Error::InvalidModel(format!("unknown geometry {other:?}"))),
    }
}

fn model_fields(model: GeometryModel) -> (String, Option<f64>) {
    match model {
        GeometryModel::Euclidean => ("euclidean".into(), None),
        GeometryModel::Minkowski { p } => ("minkowski".into(), Some(p)),
        GeometryModel::Klein => ("klein".into(), None),
    }
}

fn coordinate_of(exact: &num_rational::BigRational, value: f64) -> Coordinate {
    if crate::geometry::exact::rational_from_f64(value) == *exact {
        Coordinate::Number(value)
    } else {
        to_decimal_string(exact).map_or(Coordinate::Number(value), Coordinate::Text)
    }
}

impl PointFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("point file: {e}")))
    }

    /// Parses into a validated configuration; `model` overrides the file's
    /// geometry when given.
    pub fn to_config(&self, model: Option<GeometryModel>) -> Result<PointConfig> {
        let model = match model {
            Some(m) => m,
            None => parse_model(&self.geometry, self.p)?,
        };
        let mut points = Vec::with_capacity(self.points.len());
        for (i, [x, y]) in self.points.iter().enumerate() {
            let point = match (x, y) {
                (Coordinate::Number(a), Coordinate::Number(b)) => Point::new(*a, *b),
                _ => Point::from_decimal(&x.text(), &y.text()),
            }
            .map_err(|e| Error::InvalidInput(format!("points[{i}]: {e}")))?;
            points.push(point);
        }
        PointConfig::new(model, points, self.labels.clone())
    }

    pub fn from_config(cfg: &PointConfig) -> Self {
        let (geometry, p) = model_fields(cfg.model());
        let points = cfg
            .points()
            .iter()
            .map(|q| [coordinate_of(q.exact_x(), q.x()), coordinate_of(q.exact_y(), q.y())])
            .collect();
        Self {
            geometry,
            p,
            points,
            labels: Some(cfg.labels().to_vec()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub max_abs: f64,
    pub max_rel: f64,
}

impl From<&ResidualReport> for ResidualSummary {
    fn from(r: &ResidualReport) -> Self {
        Self {
            max_abs: r.max_abs,
            max_rel: r.max_rel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessLineRecord {
    pub anchor: [f64; 2],
    pub direction: [f64; 2],
}

impl From<&OrientedLine> for WitnessLineRecord {
    fn from(l: &OrientedLine) -> Self {
        let (dx, dy) = l.direction();
        Self {
            anchor: [l.anchor().x(), l.anchor().y()],
            direction: [dx, dy],
        }
    }
}

/// `{"cuts": [{"side": [...], "weight": w}], "coords": [[...], ...], "residual": {"max_abs": .., "max_rel": ..}}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingFile {
    pub cuts: Vec<Cut>,
    pub coords: Vec<Vec<f64>>,
    pub residual: ResidualSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_lines: Option<Vec<WitnessLineRecord>>,
    /// Present when the input was perturbed into general position first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<ScheduleLevel>>,
}

impl EmbeddingFile {
    pub fn new(dec: &CutDecomposition, residual: &ResidualReport) -> Self {
        Self {
            cuts: dec.cuts.clone(),
            coords: dec.coords.clone(),
            residual: residual.into(),
            witness_lines: None,
            schedule: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("embedding file: {e}")))
    }

    pub fn decomposition(&self) -> CutDecomposition {
        CutDecomposition {
            cuts: self.cuts.clone(),
            coords: self.coords.clone(),
        }
    }
}

/// `{"vertices": ["u", ...], "edges": [["u", "v"], ...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

impl GraphFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("graph file: {e}")))
    }

    pub fn to_graph(&self) -> Result<GraphInstance> {
        let edges: Vec<(String, String)> = self.edges.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
        GraphInstance::from_labeled_edges(self.vertices.clone(), &edges)
    }
}

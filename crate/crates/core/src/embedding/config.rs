use crate::error::{Error, Result};
use crate::geometry::{collinear, GeometryModel, Point};

/// A finite labeled point set in one geometry model.
#[derive(Clone, Debug)]
pub struct PointConfig {
    model: GeometryModel,
    points: Vec<Point>,
    labels: Vec<String>,
    collinear_witness: Option<[usize; 3]>,
}

impl PointConfig {
    /// Validates the points (finite, inside the model domain, pairwise
    /// distinct) and records whether they are in general position.
    pub fn new(model: GeometryModel, points: Vec<Point>, labels: Option<Vec<String>>) -> Result<Self> {
        for (i, q) in points.iter().enumerate() {
            model
                .validate_point(q)
                .map_err(|e| Error::InvalidInput(format!("point {i}: {e}")))?;
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::InvalidInput(format!("points {i} and {j} coincide")));
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() != points.len() => {
                return Err(Error::InvalidInput(format!(
                    "{} labels for {} points",
                    l.len(),
                    points.len()
                )))
            }
            Some(l) => l,
            None => (0..points.len()).map(|i| format!("p{i}")).collect(),
        };
        let collinear_witness = first_collinear_triple(&points);
        Ok(Self {
            model,
            points,
            labels,
            collinear_witness,
        })
    }

    pub fn model(&self) -> GeometryModel {
        self.model
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_general_position(&self) -> bool {
        self.collinear_witness.is_none()
    }

    /// Lexicographically first collinear triple, if any.
    pub fn collinear_witness(&self) -> Option<[usize; 3]> {
        self.collinear_witness
    }

    pub fn require_general_position(&self) -> Result<()> {
        match self.collinear_witness {
            Some([i, j, k]) => Err(Error::NotInGeneralPosition(i, j, k)),
            None => Ok(()),
        }
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.model.metric(&self.points[i], &self.points[j])
    }

    /// Largest pairwise distance; zero for fewer than two points.
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.distance(i, j))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn first_collinear_triple(points: &[Point]) -> Option<[usize; 3]> {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if collinear(&points[i], &points[j], &points[k]) {
                    return Some([i, j, k]);
                }
            }
        }
    }
    None
}

/// Number of unordered collinear triples.
pub fn count_collinear_triples_in(points: &[Point]) -> usize {
    let n = points.len();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if collinear(&points[i], &points[j], &points[k]) {
                    count += 1;
                }
            }
        }
    }
    count
}

pub fn count_collinear_triples(cfg: &PointConfig) -> usize {
    count_collinear_triples_in(cfg.points())
}

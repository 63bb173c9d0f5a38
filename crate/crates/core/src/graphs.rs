//! Graph metrics, interval convexity and polygon shortcut bounds.
//!
//! Intervals of l1-embeddable graphs are convex, so a non-convex interval
//! certifies that a graph does not embed isometrically into l1. [`build_bn`]
//! constructs the planar graph made of two triangles and two odd cycles that
//! fails this test. The shortcut functions bound how much longer the shorter
//! boundary walk of a regular polygon with unit sides can be than the straight
//! chord, which caps the distortion of a face-by-face graph embedding at
//! `2 + pi/2`.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The face shortcut bound `2 + pi/2`.
pub const SHORTCUT_BOUND: f64 = 2.0 + PI / 2.0;

/// A connected graph with its all-pairs hop distances.
#[derive(Clone, Debug)]
pub struct GraphInstance {
    labels: Vec<String>,
    adjacency: Vec<Vec<usize>>,
    dist: Vec<Vec<u32>>,
}

impl GraphInstance {
    /// Builds a graph from vertex labels and edges given by label.
    pub fn from_labeled_edges(labels: Vec<String>, edges: &[(String, String)]) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Graph(format!("duplicate vertex label {l:?}")));
            }
        }
        let mut pairs = Vec::with_capacity(edges.len());
        for (k, (a, b)) in edges.iter().enumerate() {
            let ia = *index
                .get(a)
                .ok_or_else(|| Error::Graph(format!("edge {k} names unknown vertex {a:?}")))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| Error::Graph(format!("edge {k} names unknown vertex {b:?}")))?;
            pairs.push((ia, ib));
        }
        Self::from_edges(labels, &pairs)
    }

    pub fn from_edges(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Graph("graph has no vertices".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Graph(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::Graph(format!("self loop at {:?}", labels[a])));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
            adj.dedup();
        }
        let dist: Vec<Vec<u32>> = (0..n).into_par_iter().map(|s| bfs(&adjacency, s)).collect();
        if let Some(v) = dist[0].iter().position(|&d| d == u32::MAX) {
            return Err(Error::Graph(format!("graph is disconnected: {:?} unreachable", labels[v])));
        }
        Ok(Self { labels, adjacency, dist })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn distance(&self, a: usize, b: usize) -> u32 {
        self.dist[a][b]
    }
}

fn bfs(adjacency: &[Vec<usize>], source: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; adjacency.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Vertices of B_n by role. For small `n` some roles share a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BnRoles {
    pub u: usize,
    pub v: usize,
    pub u1: usize,
    pub u2: usize,
    pub v1: usize,
    pub v2: usize,
    pub x: usize,
    pub y: usize,
}

/// The graph B_n: triangles `u' u u''` and `v' v v''` and two `(2n+1)`-cycles
/// through the edge `uv`, the first passing `u'` and `v'`, the second `u''`
/// and `v''`. `x` and `y` are the vertices of the two cycles opposite `uv`.
///
/// The triangles only add the edges `u'u''` and `v'v''`, so B_n has `4n`
/// vertices.
pub fn build_bn(n: usize) -> Result<(GraphInstance, BnRoles)> {
    if n < 1 {
        return Err(Error::Graph("B_n needs n >= 1".into()));
    }
    let len = 2 * n + 1;
    // cycle positions: 0 = u, 2n = v, 1 = u', 2n - 1 = v', n = x
    let mut labels: Vec<String> = Vec::new();
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut add = |labels: &mut Vec<String>, key: (usize, usize), name: String| -> usize {
        *ids.entry(key).or_insert_with(|| {
            labels.push(name);
            labels.len() - 1
        })
    };
    // vertices in role order so that canonical searches meet roles first
    let u = add(&mut labels, (0, 0), "u".into());
    let v = add(&mut labels, (0, len - 1), "v".into());
    let name = |cycle: usize, pos: usize| -> String {
        let primes = if cycle == 1 { "'" } else { "''" };
        if pos == 1 {
            format!("u{primes}")
        } else if pos == len - 2 {
            format!("v{primes}")
        } else if pos == n {
            if cycle == 1 { "x".into() } else { "y".into() }
        } else {
            format!("c{cycle}_{pos}")
        }
    };
    let u1 = add(&mut labels, (1, 1), name(1, 1));
    let u2 = add(&mut labels, (2, 1), name(2, 1));
    let v1 = add(&mut labels, (1, len - 2), name(1, len - 2));
    let v2 = add(&mut labels, (2, len - 2), name(2, len - 2));
    let x = add(&mut labels, (1, n), name(1, n));
    let y = add(&mut labels, (2, n), name(2, n));
    let mut cycle_ids = [Vec::with_capacity(len), Vec::with_capacity(len)];
    for cycle in 1..=2 {
        for pos in 0..len {
            let id = if pos == 0 {
                u
            } else if pos == len - 1 {
                v
            } else {
                add(&mut labels, (cycle, pos), name(cycle, pos))
            };
            cycle_ids[cycle - 1].push(id);
        }
    }
    let mut edges = Vec::new();
    for ring in &cycle_ids {
        for k in 0..len {
            edges.push((ring[k], ring[(k + 1) % len]));
        }
    }
    edges.push((u1, u2));
    edges.push((v1, v2));
    let graph = GraphInstance::from_edges(labels, &edges)?;
    Ok((graph, BnRoles { u, v, u1, u2, v1, v2, x, y }))
}

/// `I(a, b) = { w : d(a, w) + d(w, b) = d(a, b) }`, in vertex order.
pub fn interval(g: &GraphInstance, a: usize, b: usize) -> Vec<usize> {
    let dab = g.distance(a, b);
    (0..g.len())
        .filter(|&w| g.distance(a, w) + g.distance(w, b) == dab)
        .collect()
}

/// A non-convex interval: `c', c''` in `I(a, b)`, `c` in `I(c', c'')` but not
/// in `I(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalWitness {
    pub endpoints: (usize, usize),
    pub inner: (usize, usize),
    pub outside: usize,
}

impl IntervalWitness {
    /// Re-checks the membership conditions against the distance matrix.
    pub fn holds(&self, g: &GraphInstance) -> bool {
        let (a, b) = self.endpoints;
        let (c1, c2) = self.inner;
        let c = self.outside;
        let in_interval = |s: usize, t: usize, w: usize| g.distance(s, w) + g.distance(w, t) == g.distance(s, t);
        in_interval(a, b, c1) && in_interval(a, b, c2) && in_interval(c1, c2, c) && !in_interval(a, b, c)
    }
}

/// First violation of convexity of `I(a, b)` in vertex order.
pub fn interval_violation_at(g: &GraphInstance, a: usize, b: usize) -> Option<IntervalWitness> {
    let iab = interval(g, a, b);
    let mut member = vec![false; g.len()];
    for &w in &iab {
        member[w] = true;
    }
    for (k, &c1) in iab.iter().enumerate() {
        for &c2 in &iab[k + 1..] {
            let d12 = g.distance(c1, c2);
            if let Some(c) =
                (0..g.len()).find(|&c| !member[c] && g.distance(c1, c) + g.distance(c, c2) == d12)
            {
                return Some(IntervalWitness {
                    endpoints: (a, b),
                    inner: (c1, c2),
                    outside: c,
                });
            }
        }
    }
    None
}

/// Searches all endpoint pairs for a non-convex interval; the first witness
/// in canonical vertex order is returned. `None` means the necessary
/// condition for l1-embeddability holds, nothing more.
pub fn find_interval_convexity_violation(g: &GraphInstance) -> Option<IntervalWitness> {
    let n = g.len();
    (0..n)
        .into_par_iter()
        .filter_map(|a| (a + 1..n).find_map(|b| interval_violation_at(g, a, b)))
        .min_by_key(|w| w.endpoints)
}

/// Which case of the shortcut argument a boundary pair falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShortcutCase {
    /// At most one polygon corner strictly inside the shorter boundary walk.
    Incident,
    /// Two or more corners inside the walk.
    NonIncident,
}

/// One pair of boundary points of a regular polygon with unit sides.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShortcutSample {
    /// Shorter boundary walk length.
    pub walk: f64,
    /// Euclidean chord length.
    pub chord: f64,
    pub ratio: f64,
    pub case: ShortcutCase,
    /// For non-incident pairs: boundary length and chord between the first
    /// and last corner inside the walk.
    pub corner_walk: Option<(f64, f64)>,
}

fn polygon_point(m: usize, s: f64) -> (f64, f64) {
    let radius = 0.5 / (PI / m as f64).sin();
    let k = s.floor();
    let f = s - k;
    let corner = |i: f64| {
        let angle = 2.0 * PI * i / m as f64;
        (radius * angle.cos(), radius * angle.sin())
    };
    let (a, b) = (corner(k), corner(k + 1.0));
    (a.0 + f * (b.0 - a.0), a.1 + f * (b.1 - a.1))
}

/// Ratio of the shorter boundary walk to the chord between two boundary
/// points of the regular `m`-gon with unit sides. Points are given by arc
/// length from corner 0, taken modulo `m`.
pub fn polygon_shortcut_ratio(m: usize, a: f64, b: f64) -> Result<ShortcutSample> {
    if m < 3 {
        return Err(Error::InvalidInput(format!("polygon needs at least 3 sides, got {m}")));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput("boundary parameters must be finite".into()));
    }
    let mf = m as f64;
    let (a, b) = (a.rem_euclid(mf), b.rem_euclid(mf));
    let (pa, pb) = (polygon_point(m, a), polygon_point(m, b));
    let chord = (pa.0 - pb.0).hypot(pa.1 - pb.1);
    if chord == 0.0 {
        return Err(Error::InvalidInput(format!("boundary points {a} and {b} coincide")));
    }
    // walk forward from `start` by `walk`
    let forward = (b - a).rem_euclid(mf);
    let (start, walk) = if forward <= mf - forward { (a, forward) } else { (b, mf - forward) };
    let end = start + walk;
    let first = start.floor() + 1.0;
    let last = end.ceil() - 1.0;
    let corners = if last >= first { (last - first) as usize + 1 } else { 0 };
    let (case, corner_walk) = if corners >= 2 {
        let (z1, zk) = (polygon_point(m, first.rem_euclid(mf)), polygon_point(m, last.rem_euclid(mf)));
        (ShortcutCase::NonIncident, Some((last - first, (z1.0 - zk.0).hypot(z1.1 - zk.1))))
    } else {
        (ShortcutCase::Incident, None)
    };
    Ok(ShortcutSample {
        walk,
        chord,
        ratio: walk / chord,
        case,
        corner_walk,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceReport {
    pub sides: usize,
    pub samples: usize,
    pub max_ratio: f64,
    /// Largest corner-walk to corner-chord ratio among non-incident pairs.
    pub max_corner_ratio: f64,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub bound: f64,
    pub vertices: usize,
    pub faces: Vec<FaceReport>,
    pub all_within: bool,
}

/// Samples `samples` uniform boundary pairs of the regular `m`-gon.
pub fn shortcut_sweep(m: usize, samples: usize, seed: u64) -> Result<FaceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (m as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut max_ratio: f64 = 0.0;
    let mut max_corner_ratio: f64 = 0.0;
    let mut taken = 0;
    while taken < samples {
        let a = rng.gen_range(0.0..m as f64);
        let b = rng.gen_range(0.0..m as f64);
        let Ok(s) = polygon_shortcut_ratio(m, a, b) else {
            continue;
        };
        taken += 1;
        max_ratio = max_ratio.max(s.ratio);
        if let Some((walk, chord)) = s.corner_walk {
            max_corner_ratio = max_corner_ratio.max(walk / chord);
        }
    }
    Ok(FaceReport {
        sides: m,
        samples,
        max_ratio,
        max_corner_ratio,
        within_bound: max_ratio <= SHORTCUT_BOUND + 1e-9 && max_corner_ratio <= PI / 2.0 + 1e-9,
    })
}

/// Shortcut sweep for every declared face size of `g`. Faces are regular
/// polygons with unit sides, so a face cannot have more sides than `g` has
/// vertices.
pub fn graph_distortion_report(g: &GraphInstance, faces: &[usize], samples: usize, seed: u64) -> Result<DistortionReport> {
    let mut sizes = faces.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if let Some(&bad) = sizes.iter().find(|&&m| m < 3 || m > g.len()) {
        return Err(Error::InvalidInput(format!(
            "face size {bad} impossible in a graph with {} vertices",
            g.len()
        )));
    }
    let reports = sizes
        .par_iter()
        .map(|&m| shortcut_sweep(m, samples, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(DistortionReport {
        bound: SHORTCUT_BOUND,
        vertices: g.len(),
        all_within: reports.iter().all(|f| f.within_bound),
        faces: reports,
    })
}

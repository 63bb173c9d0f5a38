//! Double-counting audit of the cut identity.
//!
//! For a probed pair `(p_i, p_j)` and any other chord `[q, r]`, sum the
//! appearances of `[q, r]` as an extremal segment over all classes that
//! separate `p_i` from `p_j` (+1 positive, -1 negative). The identity holds
//! because these signed tallies vanish for every chord except the probed one,
//! which collects +2. The audit checks the finer per-case structure too:
//!
//! * disjoint chord whose line misses `[p_i, p_j]`: no appearances,
//! * disjoint chord whose line crosses `[p_i, p_j]`: four classes, two
//!   positive and two negative,
//! * chord sharing one endpoint with the probe: two classes, one positive and
//!   one negative,
//! * the probe itself: two positive appearances.
//!
//! This only looks at the combinatorics, never at distances.

use serde::{Deserialize, Serialize};

use super::PointConfig;
use crate::geometry::{side_of_chord, Side};
use crate::separations::SeparationClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChordCase {
    /// Disjoint from the probe, line does not cut it.
    Missing,
    /// Disjoint from the probe, line cuts it.
    Crossing,
    /// Shares exactly one endpoint with the probe.
    SharedEndpoint,
    /// Is the probe.
    Probe,
}

impl ChordCase {
    /// Expected `(positive, negative, classes)` appearances.
    fn expected(self, n: usize) -> (usize, usize, usize) {
        match self {
            ChordCase::Missing => (0, 0, 0),
            ChordCase::Crossing => (2, 2, 4),
            ChordCase::SharedEndpoint => (1, 1, 2),
            // with two points both assignments name the same class
            ChordCase::Probe if n == 2 => (2, 0, 1),
            ChordCase::Probe => (2, 0, 2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChordTally {
    pub probe: (usize, usize),
    pub chord: (usize, usize),
    pub case: ChordCase,
    pub positive: usize,
    pub negative: usize,
    pub classes: usize,
}

impl ChordTally {
    pub fn signed(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub probes: usize,
    pub tallies_checked: usize,
    pub violations: Vec<ChordTally>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn classify_chord(cfg: &PointConfig, probe: (usize, usize), chord: (usize, usize)) -> ChordCase {
    let (i, j) = probe;
    let (q, r) = chord;
    let shared = [q, r].iter().filter(|&&v| v == i || v == j).count();
    match shared {
        2 => ChordCase::Probe,
        1 => ChordCase::SharedEndpoint,
        _ => {
            let si = side_of_chord(cfg.point(q), cfg.point(r), cfg.point(i));
            let sj = side_of_chord(cfg.point(q), cfg.point(r), cfg.point(j));
            if si != Side::On && sj == si.flipped() {
                ChordCase::Crossing
            } else {
                ChordCase::Missing
            }
        }
    }
}

/// Runs the audit over every probe pair and every chord.
pub fn double_counting_audit(cfg: &PointConfig, classes: &[SeparationClass]) -> AuditReport {
    let n = cfg.len();
    // per class: positive multiplicity and negative flag, indexed by chord
    let tables: Vec<(Vec<u8>, Vec<u8>)> = classes
        .iter()
        .map(|c| {
            let mut pos = vec![0u8; n * n];
            let mut neg = vec![0u8; n * n];
            for (a, b) in c.positive_chords() {
                pos[a * n + b] += 1;
            }
            for &(a, b) in &c.negative_segments {
                neg[a * n + b] += 1;
            }
            (pos, neg)
        })
        .collect();
    let mut report = AuditReport::default();
    for i in 0..n {
        for j in i + 1..n {
            report.probes += 1;
            let separating: Vec<usize> = (0..classes.len()).filter(|&t| classes[t].separates(i, j)).collect();
            for q in 0..n {
                for r in q + 1..n {
                    let key = q * n + r;
                    let mut tally = ChordTally {
                        probe: (i, j),
                        chord: (q, r),
                        case: classify_chord(cfg, (i, j), (q, r)),
                        positive: 0,
                        negative: 0,
                        classes: 0,
                    };
                    for &t in &separating {
                        let (pos, neg) = (tables[t].0[key] as usize, tables[t].1[key] as usize);
                        tally.positive += pos;
                        tally.negative += neg;
                        if pos + neg > 0 {
                            tally.classes += 1;
                        }
                    }
                    report.tallies_checked += 1;
                    let expected_signed = if tally.case == ChordCase::Probe { 2 } else { 0 };
                    let counts = (tally.positive, tally.negative, tally.classes);
                    if tally.signed() != expected_signed || counts != tally.case.expected(n) {
                        report.violations.push(tally);
                    }
                }
            }
        }
    }
    report
}

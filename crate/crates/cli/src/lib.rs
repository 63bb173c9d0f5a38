//! Job runner behind the `crofton` binary.
//!
//! Every command reads its inputs, runs one pipeline of `crofton-core` and
//! writes a single JSON artifact, atomically, to `--output` or stdout.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use serde::Serialize;
use serde_json::{json, Value};

use crofton_core::embedding::{
    count_collinear_triples, decomposition_from_classes, default_tolerance, embed_any, perturb_to_general_position,
    verify_crofton, EmbedOptions, ResidualReport,
};
use crofton_core::graphs::{
    build_bn, find_interval_convexity_violation, graph_distortion_report, interval, shortcut_sweep, BnRoles,
    GraphInstance, IntervalWitness, SHORTCUT_BOUND,
};
use crofton_core::io::{parse_model, EmbeddingFile, GraphFile, PointFile, WitnessLineRecord};
use crofton_core::separations::{enumerate_classes, SeparationClass};
use crofton_core::{Error, GeometryModel, PointConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Embed,
    Verify,
    Classes,
    Perturb,
    GraphCheck,
    DistortionCheck,
    Selftest,
}

/// Everything a run needs. Unused fields are ignored by commands that do not
/// read them.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    /// Embedding file for `verify`.
    pub embedding: Option<PathBuf>,
    /// Side report for `perturb`.
    pub report: Option<PathBuf>,
    pub geometry: Option<String>,
    pub p: Option<f64>,
    pub tolerance: Option<f64>,
    pub seed: u64,
    pub schedule: Option<Vec<f64>>,
    pub epsilon: Option<f64>,
    pub bn: Option<usize>,
    pub faces: Vec<usize>,
    pub samples: usize,
    pub drop_zero_cuts: bool,
    pub emit_witness_lines: bool,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            output: None,
            embedding: None,
            report: None,
            geometry: None,
            p: None,
            tolerance: None,
            seed: 0,
            schedule: None,
            epsilon: None,
            bn: None,
            faces: Vec::new(),
            samples: 10_000,
            drop_zero_cuts: false,
            emit_witness_lines: false,
        }
    }
}

/// Why a run failed. Input problems exit with 1, invariant violations with 2.
#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Invariant { message: String, diagnostic: Value },
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Invariant { .. } => 2,
        }
    }

    fn invariant(message: impl Into<String>, diagnostic: Value) -> Self {
        Failure::Invariant {
            message: message.into(),
            diagnostic,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_invariant_violation() {
            let message = e.to_string();
            Failure::invariant(message.clone(), json!({ "error": message }))
        } else {
            Failure::Input(e.into())
        }
    }
}

pub type Outcome = std::result::Result<(), Failure>;

pub fn run(spec: &JobSpec) -> Outcome {
    if let Some(t) = spec.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(anyhow!("--tolerance must be positive, got {t}").into());
        }
    }
    match spec.command {
        Command::Embed => embed(spec),
        Command::Verify => verify(spec),
        Command::Classes => classes(spec),
        Command::Perturb => perturb(spec),
        Command::GraphCheck => graph_check(spec),
        Command::DistortionCheck => distortion_check(spec),
        Command::Selftest => selftest(spec),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> anyhow::Result<&'a Path> {
    path.as_deref().ok_or_else(|| anyhow!("{flag} is required"))
}

fn load_config(spec: &JobSpec) -> anyhow::Result<PointConfig> {
    let path = required(&spec.input, "--input")?;
    let file = PointFile::from_json(&read(path)?).with_context(|| format!("{}", path.display()))?;
    let model = match (&spec.geometry, spec.p) {
        (Some(name), p) => Some(parse_model(name, p.or(file.p))?),
        (None, Some(p)) => Some(parse_model(&file.geometry, Some(p))?),
        (None, None) => None,
    };
    file.to_config(model).with_context(|| format!("{}", path.display()))
}

fn tolerance(spec: &JobSpec, model: GeometryModel) -> f64 {
    spec.tolerance.unwrap_or_else(|| default_tolerance(model))
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Writes `text` to `path` through a temporary file in the same directory, so
/// readers never see a partial file.
pub fn write_atomic(path: &Path, text: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write to {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn emit(spec: &JobSpec, text: &str) -> anyhow::Result<()> {
    match &spec.output {
        Some(path) => write_atomic(path, text),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn not_in_general_position(cfg: &PointConfig) -> Failure {
    let [i, j, k] = cfg.collinear_witness().unwrap_or([0, 0, 0]);
    let l = cfg.labels();
    Failure::Input(anyhow!(
        "points {} ({i}), {} ({j}) and {} ({k}) are collinear, so the exact formula does not apply; \
         run `crofton perturb --epsilon E` first or pass --schedule 1e-2,1e-4,1e-6",
        l[i],
        l[j],
        l[k]
    ))
}

fn residual_diagnostic(report: &ResidualReport, labels: &[String]) -> Value {
    let flagged: Vec<Value> = report
        .flagged()
        .map(|p| {
            json!({
                "i": labels[p.i], "j": labels[p.j],
                "distance": p.distance, "l1": p.l1, "abs": p.abs, "rel": p.rel,
            })
        })
        .collect();
    json!({
        "error": "crofton residual above tolerance",
        "tolerance": report.tolerance,
        "max_abs": report.max_abs,
        "max_rel": report.max_rel,
        "pairs": flagged,
    })
}

fn csv_path(output: &Path) -> PathBuf {
    output.with_extension("csv")
}

fn coords_csv(labels: &[String], coords: &[Vec<f64>]) -> anyhow::Result<String> {
    let width = coords.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["label".to_string()];
    header.extend((0..width).map(|t| format!("c{t}")));
    w.write_record(&header)?;
    for (label, row) in labels.iter().zip(coords) {
        let mut rec = vec![label.clone()];
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn check_sigmas(classes: &[SeparationClass], labels: &[String]) -> Outcome {
    let floor = crofton_core::separations::SIGMA_FLOOR;
    let bad: Vec<Value> = classes
        .iter()
        .filter(|c| c.sigma < -floor)
        .map(|c| json!({ "side": c.left.iter().map(|&i| &labels[i]).collect::<Vec<_>>(), "sigma": c.sigma }))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::invariant(
            format!("{} classes with negative weight", bad.len()),
            json!({ "error": "negative class weight", "floor": -floor, "classes": bad }),
        ))
    }
}

fn embed(spec: &JobSpec) -> Outcome {
    let cfg = load_config(spec)?;
    let tol = tolerance(spec, cfg.model());
    let file = if cfg.is_general_position() {
        let classes = enumerate_classes(&cfg)?;
        check_sigmas(&classes, cfg.labels())?;
        let dec = decomposition_from_classes(&cfg, &classes, spec.drop_zero_cuts);
        let report = verify_crofton(&cfg, &dec, tol)?;
        if !report.passed {
            return Err(Failure::invariant(
                format!("crofton residual {:e} above tolerance {tol:e}", report.max_rel),
                residual_diagnostic(&report, cfg.labels()),
            ));
        }
        let mut file = EmbeddingFile::new(&dec, &report);
        if spec.emit_witness_lines {
            file.witness_lines = Some(
                classes
                    .iter()
                    .filter(|c| !(spec.drop_zero_cuts && c.sigma <= 0.0))
                    .map(|c| WitnessLineRecord::from(&c.witness_line))
                    .collect(),
            );
        }
        file
    } else {
        let Some(schedule) = &spec.schedule else {
            return Err(not_in_general_position(&cfg));
        };
        let opts = EmbedOptions {
            drop_zero_cuts: spec.drop_zero_cuts,
            tolerance: Some(tol),
        };
        let approx = embed_any(&cfg, schedule, spec.seed, &opts)?;
        let mut file = EmbeddingFile::new(&approx.decomposition, &approx.residual);
        file.schedule = Some(approx.levels);
        file
    };
    if file.witness_lines.is_none() && spec.emit_witness_lines && spec.schedule.is_some() {
        eprintln!("note: witness lines are only emitted for inputs in general position");
    }
    let text = to_json(&file)?;
    if let Some(out) = &spec.output {
        write_atomic(&csv_path(out), &coords_csv(cfg.labels(), &file.coords)?)?;
    }
    emit(spec, &text)?;
    Ok(())
}

fn verify(spec: &JobSpec) -> Outcome {
    let cfg = load_config(spec)?;
    let path = required(&spec.embedding, "--embedding")?;
    let file = EmbeddingFile::from_json(&read(path)?).with_context(|| format!("{}", path.display()))?;
    let dec = file.decomposition();
    let tol = tolerance(spec, cfg.model());
    let report = verify_crofton(&cfg, &dec, tol).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    emit(spec, &to_json(&report)?)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::invariant(
            format!("crofton residual {:e} above tolerance {tol:e}", report.max_rel),
            residual_diagnostic(&report, cfg.labels()),
        ))
    }
}

#[derive(Serialize)]
struct ClassRecord<'a> {
    left: &'a [usize],
    right: &'a [usize],
    sigma: f64,
    weight: f64,
    positive_segments: [(usize, usize); 2],
    negative_segments: &'a [(usize, usize)],
    crossing: [f64; 2],
    witness_line: WitnessLineRecord,
}

fn classes(spec: &JobSpec) -> Outcome {
    let cfg = load_config(spec)?;
    if !cfg.is_general_position() {
        return Err(not_in_general_position(&cfg));
    }
    let classes = enumerate_classes(&cfg)?;
    let records: Vec<ClassRecord> = classes
        .iter()
        .map(|c| ClassRecord {
            left: &c.left,
            right: &c.right,
            sigma: c.sigma,
            weight: c.sigma / 2.0,
            positive_segments: c.positive_segments,
            negative_segments: &c.negative_segments,
            crossing: [c.crossing.x(), c.crossing.y()],
            witness_line: (&c.witness_line).into(),
        })
        .collect();
    emit(spec, &to_json(&json!({ "labels": cfg.labels(), "classes": records }))?)?;
    check_sigmas(&classes, cfg.labels())
}

fn perturb(spec: &JobSpec) -> Outcome {
    let cfg = load_config(spec)?;
    let eps = spec.epsilon.ok_or_else(|| anyhow!("--epsilon is required"))?;
    let (out, report) = match perturb_to_general_position(&cfg, eps, spec.seed) {
        Ok(r) => r,
        Err(Error::StepBudgetExhausted { budget, remaining, report }) => {
            return Err(Failure::invariant(
                format!("perturbation budget {budget} exhausted with {remaining} collinear triples left"),
                serde_json::to_value(&*report).map_err(anyhow::Error::from)?,
            ))
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(path) = &spec.report {
        write_atomic(path, &to_json(&report)?)?;
    }
    eprintln!(
        "collinear triples {} -> {} in {} steps; max displacement {:e}",
        report.initial_collinear,
        count_collinear_triples(&out),
        report.steps.len(),
        report.max_displacement
    );
    emit(spec, &to_json(&PointFile::from_config(&out))?)?;
    Ok(())
}

fn load_graph(spec: &JobSpec) -> anyhow::Result<Option<(GraphInstance, Option<BnRoles>)>> {
    match (spec.bn, &spec.input) {
        (Some(_), Some(_)) => bail!("pass either --bn or --input, not both"),
        (Some(n), None) => {
            let (g, roles) = build_bn(n)?;
            Ok(Some((g, Some(roles))))
        }
        (None, Some(path)) => {
            let file = GraphFile::from_json(&read(path)?).with_context(|| format!("{}", path.display()))?;
            Ok(Some((file.to_graph().with_context(|| format!("{}", path.display()))?, None)))
        }
        (None, None) => Ok(None),
    }
}

fn witness_json(g: &GraphInstance, w: &IntervalWitness) -> Value {
    let (a, b) = w.endpoints;
    let (c1, c2) = w.inner;
    json!({
        "endpoints": [g.label(a), g.label(b)],
        "inner": [g.label(c1), g.label(c2)],
        "outside": g.label(w.outside),
        "interval": interval(g, a, b).iter().map(|&v| g.label(v)).collect::<Vec<_>>(),
        "holds": w.holds(g),
    })
}

fn graph_check(spec: &JobSpec) -> Outcome {
    let (g, roles) = load_graph(spec)?.ok_or_else(|| anyhow!("pass --bn N or --input GRAPH"))?;
    let found = find_interval_convexity_violation(&g);
    let mut out = json!({
        "vertices": g.len(),
        "edges": g.edge_count(),
        "intervals_convex": found.is_none(),
        "witness": found.as_ref().map(|w| witness_json(&g, w)),
    });
    if let Some(r) = roles {
        let label = |v: usize| g.label(v).to_string();
        let ixy = interval(&g, r.x, r.y);
        let iuv = interval(&g, r.u1, r.v1);
        let role_witness = IntervalWitness {
            endpoints: (r.x, r.y),
            inner: (r.u1, r.v1),
            outside: r.u,
        };
        out["roles"] = json!({
            "u": label(r.u), "v": label(r.v), "x": label(r.x), "y": label(r.y),
            "u'": label(r.u1), "u''": label(r.u2), "v'": label(r.v1), "v''": label(r.v2),
        });
        let triangles_in = [r.u1, r.u2, r.v1, r.v2].iter().all(|v| ixy.contains(v));
        out["role_witness"] = json!({
            "witness": witness_json(&g, &role_witness),
            "triangle_vertices_in_interval_xy": triangles_in,
            "u_in_interval_u'_v'": iuv.contains(&r.u),
            "v_in_interval_u'_v'": iuv.contains(&r.v),
            "u_outside_interval_xy": !ixy.contains(&r.u),
            "v_outside_interval_xy": !ixy.contains(&r.v),
        });
    }
    emit(spec, &to_json(&out)?)?;
    Ok(())
}

fn distortion_check(spec: &JobSpec) -> Outcome {
    if spec.faces.is_empty() {
        return Err(anyhow!("--faces is required, e.g. --faces 3,4,13").into());
    }
    if spec.samples == 0 {
        return Err(anyhow!("--samples must be positive").into());
    }
    let report = match load_graph(spec)? {
        Some((g, _)) => graph_distortion_report(&g, &spec.faces, spec.samples, spec.seed)?,
        None => {
            let mut faces = spec.faces.clone();
            faces.sort_unstable();
            faces.dedup();
            let faces = faces
                .into_iter()
                .map(|m| shortcut_sweep(m, spec.samples, spec.seed))
                .collect::<Result<Vec<_>, _>>()?;
            crofton_core::graphs::DistortionReport {
                bound: SHORTCUT_BOUND,
                vertices: 0,
                all_within: faces.iter().all(|f| f.within_bound),
                faces,
            }
        }
    };
    let text = to_json(&report)?;
    emit(spec, &text)?;
    if report.all_within {
        Ok(())
    } else {
        Err(Failure::invariant(
            "shortcut ratio above 2 + pi/2",
            serde_json::to_value(&report).map_err(anyhow::Error::from)?,
        ))
    }
}

/// One named check of the self test.
type Check = (&'static str, fn() -> anyhow::Result<bool>);

fn selftest_checks() -> Vec<Check> {
    vec![
        ("triangle cut weights", || {
            let cfg = PointFile::from_json(r#"{"geometry":"euclidean","points":[[0,0],[1,0],[0,1]]}"#)?.to_config(None)?;
            let dec = crofton_core::embedding::crofton_embed(&cfg)?;
            let mut w: Vec<f64> = dec.cuts.iter().map(|c| c.weight).collect();
            w.sort_by(f64::total_cmp);
            let r2 = 2f64.sqrt();
            Ok(w.len() == 3
                && (w[0] - (2.0 - r2) / 2.0).abs() < 1e-12
                && (w[1] - r2 / 2.0).abs() < 1e-12
                && (w[2] - r2 / 2.0).abs() < 1e-12)
        }),
        ("klein identity", || {
            let cfg = PointFile::from_json(
                r#"{"geometry":"klein","points":[[0,0],[0.5,0.1],[-0.3,0.6],[0.2,-0.7],[-0.6,-0.2]]}"#,
            )?
            .to_config(None)?;
            let dec = crofton_core::embedding::crofton_embed(&cfg)?;
            Ok(verify_crofton(&cfg, &dec, 1e-7)?.passed)
        }),
        ("grid perturbation", || {
            let pts: Vec<[f64; 2]> = (0..3).flat_map(|i| (0..3).map(move |j| [i as f64, j as f64])).collect();
            let cfg = PointFile::from_json(&json!({ "geometry": "euclidean", "points": pts }).to_string())?.to_config(None)?;
            let (out, report) = perturb_to_general_position(&cfg, 1e-4, 0)?;
            Ok(out.is_general_position() && report.max_displacement < 5e-5 && report.max_distance_drift < 1e-4)
        }),
        ("B_6 interval obstruction", || {
            let (g, r) = build_bn(6)?;
            let ixy = interval(&g, r.x, r.y);
            Ok([r.u1, r.u2, r.v1, r.v2].iter().all(|v| ixy.contains(v))
                && !ixy.contains(&r.u)
                && interval(&g, r.u1, r.v1).contains(&r.u))
        }),
        ("shortcut bound", || {
            Ok((3..=20).all(|m| shortcut_sweep(m, 500, 0).is_ok_and(|f| f.within_bound)))
        }),
    ]
}

fn selftest(spec: &JobSpec) -> Outcome {
    let mut results = Vec::new();
    for (name, check) in selftest_checks() {
        let ok = match check() {
            Ok(ok) => ok,
            Err(e) => {
                eprintln!("{name}: {e:#}");
                false
            }
        };
        eprintln!("{} {name}", if ok { "PASS" } else { "FAIL" });
        results.push(json!({ "check": name, "passed": ok }));
    }
    let passed = results.iter().all(|r| r["passed"] == true);
    let out = json!({ "passed": passed, "checks": results });
    emit(spec, &to_json(&out)?)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::invariant("self test failed", out))
    }
}

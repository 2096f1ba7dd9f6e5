//! Grid runner: builds one channel model per grid point, solves every requested
//! bound on a worker pool and emits rows in a fixed order.

use super::config::{BoundSpec, Scenario, ScenarioConfig};
use crate::bounds::{channel_bound, state_bound, tight_relaxation, BoundKind, BoundOptions, BoundResult};
use crate::channels::{depolarizing_qubit, field_sensing, generalized_pauli, ghz3d, max_entangled, su2_depolarizing};
use crate::conic_ir::WeightMatrix;
use crate::error::{Error, Result};
use crate::model::ChannelModel;
use crate::qmatrix::{partial_trace, ComplexMatrix, C64};
use serde::Deserialize;
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub const CSV_HEADER: &str = "scenario,n,noise,bound,value,reference,rel_dev,status,iterations,probe_purity";

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub scenario: String,
    /// n, d or j depending on the scenario
    pub n: String,
    pub noise: f64,
    pub bound: String,
    pub value: Option<f64>,
    pub reference: Option<f64>,
    pub rel_dev: Option<f64>,
    /// Optimal, Infeasible, MaxIter, NumError or Error
    pub status: String,
    pub iterations: Option<usize>,
    pub probe_purity: Option<f64>,
}

impl ResultRow {
    pub fn is_optimal(&self) -> bool {
        self.status == "Optimal"
    }
}

fn num(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

pub fn write_csv(rows: &[ResultRow], mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.scenario,
            r.n,
            num(Some(r.noise)),
            r.bound,
            num(r.value),
            num(r.reference),
            num(r.rel_dev),
            r.status,
            r.iterations.map(|i| i.to_string()).unwrap_or_default(),
            num(r.probe_purity)
        )?;
    }
    Ok(())
}

pub fn to_csv(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to a Vec");
    String::from_utf8(buf).expect("ascii output")
}

pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(Error::Config(format!("csv: unexpected header {other:?}"))),
    }
    let opt = |ln: usize, s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            return Ok(None);
        }
        s.parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("csv line {ln}: '{s}' is not a number")))
    };
    lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let ln = i + 2;
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 10 {
                return Err(Error::Config(format!("csv line {ln}: expected 10 fields, got {}", f.len())));
            }
            Ok(ResultRow {
                scenario: f[0].into(),
                n: f[1].into(),
                noise: opt(ln, f[2])?.ok_or_else(|| Error::Config(format!("csv line {ln}: empty noise")))?,
                bound: f[3].into(),
                value: opt(ln, f[4])?,
                reference: opt(ln, f[5])?,
                rel_dev: opt(ln, f[6])?,
                status: f[7].into(),
                iterations: if f[8].is_empty() {
                    None
                } else {
                    Some(
                        f[8].parse()
                            .map_err(|_| Error::Config(format!("csv line {ln}: bad iteration count")))?,
                    )
                },
                probe_purity: opt(ln, f[9])?,
            })
        })
        .collect()
}

/// Entry of a JSON matrix: a real number or [re, im].
#[derive(Deserialize)]
#[serde(untagged)]
enum JsonEntry {
    Re(f64),
    Cx([f64; 2]),
}

#[derive(Deserialize)]
struct ChoiFile {
    d_a: usize,
    d_b: usize,
    choi: Vec<Vec<JsonEntry>>,
    derivatives: Vec<Vec<Vec<JsonEntry>>>,
}

fn json_matrix(rows: &[Vec<JsonEntry>], n: usize, what: &str) -> Result<ComplexMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Config(format!("{what}: expected a {n}x{n} matrix")));
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| match rows[i][j] {
        JsonEntry::Re(x) => C64::new(x, 0.0),
        JsonEntry::Cx([re, im]) => C64::new(re, im),
    }))
}

/// Channel model from a JSON file {d_a, d_b, choi, derivatives}; entries are numbers or [re, im].
pub fn load_choi(path: &Path) -> Result<ChannelModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_choi(&text)
}

pub fn parse_choi(text: &str) -> Result<ChannelModel> {
    let f: ChoiFile = serde_json::from_str(text).map_err(|e| Error::Config(format!("choi json: {e}")))?;
    let n = f.d_a * f.d_b;
    let t = json_matrix(&f.choi, n, "choi")?;
    let fs = f
        .derivatives
        .iter()
        .enumerate()
        .map(|(k, m)| json_matrix(m, n, &format!("derivatives[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    ChannelModel::new(t, fs, f.d_a, f.d_b)
}

/// Label used in the n column.
pub fn size_label(cfg: &ScenarioConfig) -> String {
    match cfg.scenario {
        Scenario::OneParam => "1".into(),
        Scenario::Su2 => format!("{}", cfg.j),
        Scenario::Pauli | Scenario::FieldSensing => cfg.n.to_string(),
        Scenario::CustomChoi => String::new(),
    }
}

/// Model of the scenario at one noise value.
pub fn scenario_model(cfg: &ScenarioConfig, noise: f64) -> Result<ChannelModel> {
    match cfg.scenario {
        Scenario::OneParam => depolarizing_qubit(noise)?.model(cfg.fd),
        Scenario::Pauli => {
            if !(noise > 0.0 && noise < 1.0) {
                return Err(Error::InvalidParameter(format!("bit-flip probability {noise} not in (0,1)")));
            }
            let d = cfg.n;
            // all weight on W(0,0) and W(1,0)
            generalized_pauli(d, vec![noise], move |th| {
                let mut p = vec![0.0; d * d];
                p[0] = 1.0 - th[0];
                p[d] = th[0];
                p
            })?
            .model(cfg.fd)
        }
        Scenario::Su2 => su2_depolarizing(cfg.j, noise)?.model(cfg.fd),
        Scenario::FieldSensing => field_sensing(cfg.n, noise)?.model(cfg.fd),
        Scenario::CustomChoi => {
            let path = cfg
                .choi
                .as_ref()
                .ok_or_else(|| Error::Config("custom-choi needs a choi file".into()))?;
            load_choi(path)
        }
    }
}

/// Closed-form value of a bound where one is known.
pub fn reference(cfg: &ScenarioConfig, noise: f64, b: BoundSpec) -> Option<f64> {
    let ghz = matches!(b, BoundSpec::Ghz(_));
    let sld = matches!(b, BoundSpec::Channel(BoundKind::Sld) | BoundSpec::Sym(BoundKind::Sld));
    match cfg.scenario {
        Scenario::OneParam => Some((2.0 - noise) / (8.0 * (1.0 - noise).powi(2))),
        Scenario::Pauli => Some(noise * (1.0 - noise)),
        Scenario::Su2 => {
            let j = cfg.j;
            let c = (4.0 * j * j + 4.0 * j - 1.0) / (2.0 * j + 1.0).powi(2);
            let v = 9.0 * (1.0 - c * noise) / (8.0 * j * (j + 1.0) * (1.0 - noise).powi(2));
            (sld || noise == 0.0).then_some(v)
        }
        Scenario::FieldSensing => {
            let n = cfg.n as f64;
            (noise == 0.0 && !ghz).then(|| 9.0 / (n * (n + 2.0)))
        }
        Scenario::CustomChoi => None,
    }
}

fn purity_of_probe(psi: &[C64], d_a: usize, d_c: usize) -> Result<f64> {
    let rho = partial_trace(&ComplexMatrix::projector(psi), &[d_a, d_c], &[1])?;
    Ok(rho.trace_mul(&rho).re)
}

/// Solve a single bound on a prepared model.
pub fn solve_bound(
    cfg: &ScenarioConfig,
    model: &ChannelModel,
    g: &WeightMatrix,
    b: BoundSpec,
    opts: &BoundOptions,
) -> Result<(BoundResult, Option<f64>)> {
    match b {
        BoundSpec::Channel(k) => {
            let r = channel_bound(k, model, g, opts)?;
            let p = r.probe_purity();
            Ok((r, p))
        }
        BoundSpec::Extension(m) => {
            let r = tight_relaxation(model, g, m, opts)?;
            let p = r.probe_purity();
            Ok((r, p))
        }
        BoundSpec::Sym(k) => {
            let psi = max_entangled(model.d_a);
            let st = model.evolve(&psi, model.d_a)?;
            let p = purity_of_probe(&psi, model.d_a, model.d_a)?;
            Ok((state_bound(k, &st, g, opts)?, Some(p)))
        }
        BoundSpec::Ghz(k) => {
            if cfg.scenario != Scenario::FieldSensing {
                return Err(Error::Config(format!("{} needs scenario field-sensing", b.label())));
            }
            let psi = ghz3d(cfg.n);
            let st = model.evolve(&psi, 1)?;
            Ok((state_bound(k, &st, g, opts)?, Some(1.0)))
        }
    }
}

/// Rows of a run plus whether every solve reached Optimal.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub rows: Vec<ResultRow>,
}

impl RunReport {
    pub fn all_optimal(&self) -> bool {
        self.rows.iter().all(ResultRow::is_optimal)
    }

    /// 0 when every solve succeeded, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_optimal() {
            0
        } else {
            2
        }
    }

    pub fn csv(&self) -> String {
        to_csv(&self.rows)
    }
}

/// Hook for fault injection in the verification suites.
pub type WeightHook = dyn Fn(BoundSpec, &WeightMatrix) -> WeightMatrix + Sync;

pub fn run(cfg: &ScenarioConfig) -> Result<RunReport> {
    run_with(cfg, None)
}

pub fn run_with(cfg: &ScenarioConfig, hook: Option<&WeightHook>) -> Result<RunReport> {
    cfg.validate()?;
    let noises = cfg.noise.values();
    let mut bounds = cfg.bounds.clone();
    bounds.sort_by_key(|b| b.order());
    bounds.dedup();

    let mut opts = BoundOptions::default();
    opts.solver.gap_tol = cfg.tol;
    opts.solver.feas_tol = cfg.tol;

    let models: Vec<Result<ChannelModel>> = noises.iter().map(|&x| scenario_model(cfg, x)).collect();
    let g0: Option<WeightMatrix> = match models.iter().flatten().next() {
        Some(m) => Some(cfg.weight.resolve(m.d())?),
        None => None,
    };
    if g0.is_none() {
        // every point failed; report the first failure as a config-level error
        if let Some(Err(e)) = models.into_iter().next() {
            return Err(e);
        }
        return Err(Error::Config("empty run".into()));
    }
    let g0 = g0.unwrap();

    let tasks: Vec<(usize, BoundSpec)> = (0..noises.len()).flat_map(|i| bounds.iter().map(move |&b| (i, b))).collect();
    let slots: Vec<Mutex<Option<ResultRow>>> = tasks.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let label = size_label(cfg);

    let work = || loop {
        let t = next.fetch_add(1, Ordering::Relaxed);
        if t >= tasks.len() {
            break;
        }
        let (i, b) = tasks[t];
        let noise = noises[i];
        let reference = reference(cfg, noise, b);
        let mut row = ResultRow {
            scenario: cfg.scenario.name().into(),
            n: label.clone(),
            noise,
            bound: b.label(),
            value: None,
            reference,
            rel_dev: None,
            status: "Error".into(),
            iterations: None,
            probe_purity: None,
        };
        let res = match &models[i] {
            Ok(m) => {
                let g = match hook {
                    Some(h) => h(b, &g0),
                    None => g0.clone(),
                };
                solve_bound(cfg, m, &g, b, &opts)
            }
            Err(e) => Err(e.clone()),
        };
        match res {
            Ok((r, purity)) => {
                row.value = Some(r.value);
                row.status = format!("{:?}", r.stats.status);
                row.iterations = Some(r.stats.iterations);
                row.probe_purity = purity;
                row.rel_dev = reference.map(|x| (r.value - x).abs() / x.abs().max(f64::MIN_POSITIVE));
            }
            Err(Error::Solver { status, message, .. }) => {
                log::warn!("{} at noise {noise}: {status}: {message}", b.label());
                row.status = status;
            }
            Err(e) => {
                log::warn!("{} at noise {noise}: {e}", b.label());
            }
        }
        *slots[t].lock().unwrap() = Some(row);
    };

    let jobs = cfg.jobs.clamp(1, tasks.len().max(1));
    std::thread::scope(|s| {
        for _ in 1..jobs {
            s.spawn(work);
        }
        work();
    });

    let rows = slots
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every task ran"))
        .collect();
    Ok(RunReport { rows })
}

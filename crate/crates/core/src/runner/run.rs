use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::checkpoint::Checkpoint;
use super::config::RunConfig;
use super::table::{create_csv, flush, format_row, CsvOut, Table};
use crate::bounds::{compare, write_reports, BoundReport};
use crate::diagnostics::{
    alpha_exponent, budget_terms, fluxes, h_norm, quartic_mean, Moment, NormHierarchy, TimeAverage,
};
use crate::nondim::{nondimensionalize, Scales, U0Choice};
use crate::solver::{init_condition, Simulation};
use crate::spectral::{max_divergence_ratio, Grid, SpectralField};
use crate::{Error, Result};

pub const TIMESERIES_BASE: [&str; 10] = [
    "step",
    "time",
    "e_tot",
    "h0",
    "h1",
    "h2",
    "quartic",
    "h1_over_h0",
    "cfl",
    "div_ratio",
];

pub const SPECTRA_COLUMNS: [&str; 10] = [
    "step",
    "time",
    "shell",
    "E",
    "T",
    "T_alpha",
    "T_beta",
    "dissipation",
    "Pi",
    "Pi_beta",
];

pub const SPECTRA_AVG_COLUMNS: [&str; 8] = [
    "shell",
    "E",
    "T",
    "T_alpha",
    "T_beta",
    "dissipation",
    "Pi",
    "Pi_beta",
];

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const SPECTRA_FILE: &str = "spectra.csv";
pub const SPECTRA_AVG_FILE: &str = "spectra_avg.csv";
pub const BOUNDS_FILE: &str = "bounds.csv";
pub const CONFIG_FILE: &str = "config.txt";
pub const CHECKPOINT_DIR: &str = "checkpoints";

/// Column name of a weighted norm, e.g. `P_1_inf_nu` or `D_2_ab`.
pub fn norm_column(letter: &str, n: Option<u32>, m: Moment, choice: U0Choice) -> String {
    match n {
        Some(n) => format!("{letter}_{n}_{m}_{}", choice.tag()),
        None => format!("{letter}_{m}_{}", choice.tag()),
    }
}

pub fn checkpoint_path(run_dir: &Path, step: u64) -> PathBuf {
    run_dir
        .join(CHECKPOINT_DIR)
        .join(format!("step_{step:010}.itts"))
}

/// What a run samples and how it names the columns.
#[derive(Clone, Debug)]
struct Layout {
    dim: u32,
    n_max: u32,
    moments: Vec<Moment>,
    scales: Vec<Scales>,
    columns: Vec<String>,
}

impl Layout {
    fn new(cfg: &RunConfig) -> Self {
        let dim = cfg.dim as u32;
        let moments = Moment::sweep(cfg.m_max);
        let mut scales = Vec::new();
        for &choice in &cfg.u0_modes {
            match Scales::new(&cfg.params, choice) {
                Ok(s) => scales.push(s),
                Err(e) => log::info!("skipping weighted norms for U0 = {choice}: {e}"),
            }
        }
        let letter = if dim == 2 { "P" } else { "Q" };
        let mut columns: Vec<String> = TIMESERIES_BASE.iter().map(|s| s.to_string()).collect();
        for s in &scales {
            for n in 0..=cfg.n_max {
                for &m in &moments {
                    if alpha_exponent(n, m, dim).is_ok() {
                        columns.push(norm_column(letter, Some(n), m, s.choice));
                    }
                }
            }
            if dim == 3 {
                for &m in &moments {
                    columns.push(norm_column("D", None, m, s.choice));
                }
            }
        }
        Layout {
            dim,
            n_max: cfg.n_max,
            moments,
            scales,
            columns,
        }
    }

    fn sample(&self, step: u64, u: &SpectralField, cfl: f64) -> Vec<f64> {
        let h0 = h_norm(u, 0);
        let h1 = h_norm(u, 1);
        let mut row = vec![
            step as f64,
            u.time(),
            0.5 * h0,
            h0,
            h1,
            h_norm(u, 2),
            quartic_mean(u),
            if h0 > 0.0 { h1 / h0 } else { 0.0 },
            cfl,
            max_divergence_ratio(u),
        ];
        if !self.scales.is_empty() {
            let hier = NormHierarchy::compute(u, self.n_max, &self.moments);
            for s in &self.scales {
                row.extend(
                    hier.weighted(|n| s.norm_factor(n))
                        .into_iter()
                        .map(|(_, _, v)| v),
                );
                if self.dim == 3 {
                    row.extend(
                        hier.vorticity_weighted(s.norm_factor(1))
                            .into_iter()
                            .map(|(_, v)| v),
                    );
                }
            }
        }
        row
    }
}

fn spectra_rows(step: u64, u: &SpectralField, cfg: &RunConfig) -> Result<Vec<Vec<f64>>> {
    let b = budget_terms(u, &cfg.params)?;
    let (pi, pi_beta) = fluxes(&b);
    Ok((0..b.num_shells())
        .map(|k| {
            vec![
                step as f64,
                u.time(),
                k as f64,
                b.energy[k],
                b.transfer[k],
                b.active[k],
                b.cubic[k],
                b.dissipation[k],
                pi[k],
                pi_beta[k],
            ]
        })
        .collect())
}

fn spectra_record(row: &[f64]) -> Vec<String> {
    let mut rec = format_row(row, 1);
    rec[2] = format!("{}", row[2] as u64);
    rec
}

/// Adds one spectra sample (all shells at one time) to the average.
fn push_spectra(rows: &[Vec<f64>], skip: f64, avg: &mut Option<TimeAverage>) -> Result<()> {
    let flat: Vec<f64> = rows.iter().flat_map(|r| r[3..].iter().copied()).collect();
    let a = avg.get_or_insert_with(|| TimeAverage::starting_at(flat.len(), skip));
    a.push(rows[0][1], &flat)
}

/// Time averages over the whole run and over the part after the
/// transient skip.
#[derive(Clone, Debug)]
struct Averages {
    full: TimeAverage,
    skip: Option<TimeAverage>,
}

impl Averages {
    fn new(width: usize, skip: f64) -> Self {
        Averages {
            full: TimeAverage::new(width),
            skip: (skip > 0.0).then(|| TimeAverage::starting_at(width, skip)),
        }
    }

    fn push(&mut self, t: f64, values: &[f64]) -> Result<()> {
        self.full.push(t, values)?;
        if let Some(s) = &mut self.skip {
            s.push(t, values)?;
        }
        Ok(())
    }

    fn windows(&self) -> Vec<(&'static str, &TimeAverage)> {
        let mut out = vec![("full", &self.full)];
        if let Some(s) = &self.skip {
            out.push(("skip", s));
        }
        out
    }
}

/// Everything a finished run produced, also written to `run_dir`.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub run_dir: PathBuf,
    pub steps: u64,
    pub columns: Vec<String>,
    /// One row per sample, in `columns` order.
    pub samples: Vec<Vec<f64>>,
    /// Time averages of every column after `step` and `time`, per window
    /// name (`full`, and `skip` when a transient skip is configured).
    pub averages: BTreeMap<String, Vec<f64>>,
    pub reports: Vec<BoundReport>,
    pub max_cfl: f64,
    pub state: SpectralField,
}

impl RunSummary {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.samples.iter().map(|r| r[i]).collect())
    }

    pub fn average(&self, window: &str, name: &str) -> Option<f64> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.averages
            .get(window)
            .and_then(|a| a.get(i.checked_sub(2)?).copied())
    }
}

/// Measured, dimensionless time averages keyed by bound id.
fn measured(layout: &Layout, cfg: &RunConfig, s: &Scales, mean: &[f64]) -> BTreeMap<String, f64> {
    let col = |name: &str| {
        let i = layout
            .columns
            .iter()
            .position(|c| c == name)
            .expect("known column");
        mean[i - 2]
    };
    let f0 = s.norm_factor(0);
    let f1 = s.norm_factor(1);
    let mut out = BTreeMap::new();
    out.insert("H0".into(), f0 * f0 * col("h0"));
    out.insert("H1".into(), f1 * f1 * col("h1"));
    out.insert("L4".into(), f0.powi(4) * col("quartic"));
    out.insert(
        "H1/H0".into(),
        cfg.params.box_length.powi(2) * col("h1_over_h0"),
    );
    let letter = if layout.dim == 2 { "P" } else { "Q" };
    for n in 0..=layout.n_max {
        for &m in &layout.moments {
            let name = norm_column(letter, Some(n), m, s.choice);
            if let Some(i) = layout.columns.iter().position(|c| *c == name) {
                out.insert(crate::bounds::norm_id(layout.dim, n, m), mean[i - 2]);
            }
        }
    }
    out
}

fn bound_reports(
    layout: &Layout,
    cfg: &RunConfig,
    averages: &Averages,
) -> Result<Vec<BoundReport>> {
    let mut reports = Vec::new();
    for s in &layout.scales {
        let params = nondimensionalize(&cfg.params, s.choice)?;
        for (name, avg) in averages.windows() {
            let Some(mean) = avg.mean() else { continue };
            let label = format!("{}:{}:{name}", cfg.label, s.choice.tag());
            let m = measured(layout, cfg, s, &mean);
            reports.push(compare(
                &label,
                layout.dim,
                s.time(avg.span()),
                &m,
                &params,
                &cfg.bounds,
                layout.n_max,
                &layout.moments,
            ));
        }
    }
    Ok(reports)
}

/// Rows of an earlier run's CSV with `step < before`, after checking
/// that the columns match.
fn retained_rows(path: &Path, columns: &[String], before: u64) -> Result<Vec<Vec<f64>>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let t = Table::read(path)?;
    if t.columns != columns {
        return Err(Error::Config(format!(
            "{} has different columns from this configuration; cannot resume into it",
            path.display()
        )));
    }
    Ok(t.rows
        .into_iter()
        .filter(|r| (r[0] as u64) < before)
        .collect())
}

struct Outputs {
    dir: PathBuf,
    timeseries: CsvOut,
    spectra: Option<CsvOut>,
}

impl Outputs {
    fn flush(&mut self) -> Result<()> {
        flush(&mut self.timeseries, &self.dir.join(TIMESERIES_FILE))?;
        if let Some(w) = &mut self.spectra {
            flush(w, &self.dir.join(SPECTRA_FILE))?;
        }
        Ok(())
    }
}

fn save_checkpoint(dir: &Path, sim: &Simulation) -> Result<PathBuf> {
    let path = checkpoint_path(dir, sim.steps());
    Checkpoint {
        step: sim.steps(),
        params: *sim.params(),
        state: sim.state().clone(),
    }
    .save(&path)?;
    Ok(path)
}

/// Flushes the outputs and saves the current (last good) state before
/// passing the error on.
fn abort(out: &mut Outputs, dir: &Path, sim: &Simulation, e: Error) -> Error {
    if let Err(f) = out.flush() {
        log::error!("{f}");
    }
    match save_checkpoint(dir, sim) {
        Ok(path) => log::error!("{e}; last good state saved to {}", path.display()),
        Err(f) => log::error!("{e}; saving the last good state failed: {f}"),
    }
    e
}

fn initial_simulation(cfg: &RunConfig) -> Result<Simulation> {
    let grid = Grid::new(
        cfg.dim,
        cfg.resolution(),
        cfg.params.box_length,
        cfg.dealias_fraction,
    )?;
    let Some(path) = &cfg.resume else {
        let u = init_condition(&cfg.ic, &grid, cfg.seed)?;
        return Simulation::new(cfg.params, u, cfg.dt);
    };
    let c = Checkpoint::load(path)?;
    if **c.state.grid() != *grid {
        return Err(Error::Config(format!(
            "checkpoint {} has grid {:?}, configuration asks for {:?}",
            path.display(),
            c.state.grid(),
            grid
        )));
    }
    if c.params != cfg.params {
        return Err(Error::Config(format!(
            "checkpoint {} has parameters {:?}, configuration has {:?}",
            path.display(),
            c.params,
            cfg.params
        )));
    }
    let mut sim = Simulation::new(cfg.params, c.state.clone(), cfg.dt)?;
    sim.restore(c.state, c.step)?;
    Ok(sim)
}

/// Runs the configured simulation and writes every output file into
/// `output_dir/label`.
///
/// Samples are taken every `sample_every` steps and at the last step.
/// When resuming, rows of earlier output with a step before the
/// checkpoint are kept and fed into the averages, so an interrupted and
/// resumed run produces the same files as an uninterrupted one.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let dir = cfg.output_dir.join(&cfg.label);
    fs::create_dir_all(dir.join(CHECKPOINT_DIR)).map_err(|e| Error::io(&dir, e))?;
    let mut sim = initial_simulation(cfg)?;
    let start = sim.steps();
    let total = cfg.total_steps();
    if start > total {
        return Err(Error::Config(format!(
            "checkpoint step {start} lies beyond the final step {total}"
        )));
    }
    fs::write(dir.join(CONFIG_FILE), cfg.to_string())
        .map_err(|e| Error::io(dir.join(CONFIG_FILE), e))?;

    let layout = Layout::new(cfg);
    let width = layout.columns.len() - 2;
    let mut averages = Averages::new(width, cfg.transient_skip);
    let mut samples = retained_rows(&dir.join(TIMESERIES_FILE), &layout.columns, start)?;
    for row in &samples {
        averages.push(row[1], &row[2..])?;
    }
    let spectra_header: Vec<String> = SPECTRA_COLUMNS.iter().map(|s| s.to_string()).collect();
    let old_spectra = if cfg.spectra_every > 0 {
        retained_rows(&dir.join(SPECTRA_FILE), &spectra_header, start)?
    } else {
        Vec::new()
    };

    let ts_path = dir.join(TIMESERIES_FILE);
    let mut out = Outputs {
        timeseries: create_csv(&ts_path, &layout.columns)?,
        spectra: if cfg.spectra_every > 0 {
            Some(create_csv(&dir.join(SPECTRA_FILE), &spectra_header)?)
        } else {
            None
        },
        dir: dir.clone(),
    };
    for row in &samples {
        out.timeseries.write_record(format_row(row, 1))?;
    }
    let mut spectra_avg: Option<TimeAverage> = None;
    if let Some(w) = &mut out.spectra {
        for group in old_spectra.chunk_by(|a, b| a[0] == b[0]) {
            for row in group {
                w.write_record(spectra_record(row))?;
            }
            push_spectra(group, cfg.transient_skip, &mut spectra_avg)?;
        }
    }

    let mut max_cfl = samples.iter().map(|r| r[8]).fold(0.0, f64::max);
    let mut warned = false;
    let mut step = start;
    loop {
        let sample_due = step % cfg.sample_every == 0 || step == total;
        if sample_due {
            let cfl = sim.cfl();
            if cfl > cfg.cfl_max && !warned {
                log::warn!(
                    "CFL number {cfl:.3} exceeds {} at step {step}; consider a smaller dt",
                    cfg.cfl_max
                );
                warned = true;
            }
            max_cfl = max_cfl.max(cfl);
            let row = layout.sample(step, sim.state(), cfl);
            out.timeseries.write_record(format_row(&row, 1))?;
            averages.push(row[1], &row[2..])?;
            samples.push(row);
        }
        let spectra_due = cfg.spectra_every > 0 && (step % cfg.spectra_every == 0 || step == total);
        if spectra_due {
            let rows = match spectra_rows(step, sim.state(), cfg) {
                Ok(rows) => rows,
                Err(e) => return Err(abort(&mut out, &dir, &sim, e)),
            };
            if let Some(w) = &mut out.spectra {
                for row in &rows {
                    w.write_record(spectra_record(row))?;
                }
            }
            push_spectra(&rows, cfg.transient_skip, &mut spectra_avg)?;
        }
        if step > start && cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0 && step != total
        {
            save_checkpoint(&dir, &sim)?;
        }
        if step == total {
            break;
        }
        if step > start && step % (total / 10).max(1) == 0 {
            log::info!("{}: step {step}/{total}, t = {:.4}", cfg.label, sim.time());
        }
        if let Err(e) = sim.step() {
            return Err(abort(&mut out, &dir, &sim, e));
        }
        step += 1;
    }
    out.flush()?;
    if total > start {
        save_checkpoint(&dir, &sim)?;
    }

    if let Some(avg) = spectra_avg.as_ref().and_then(TimeAverage::mean) {
        let path = dir.join(SPECTRA_AVG_FILE);
        let header: Vec<String> = SPECTRA_AVG_COLUMNS.iter().map(|s| s.to_string()).collect();
        let mut w = create_csv(&path, &header)?;
        let per = SPECTRA_AVG_COLUMNS.len() - 1;
        for (k, chunk) in avg.chunks(per).enumerate() {
            let mut row = vec![k as f64];
            row.extend_from_slice(chunk);
            w.write_record(format_row(&row, 1))?;
        }
        flush(&mut w, &path)?;
    }

    let reports = bound_reports(&layout, cfg, &averages)?;
    let bounds_path = dir.join(BOUNDS_FILE);
    let file = fs::File::create(&bounds_path).map_err(|e| Error::io(&bounds_path, e))?;
    write_reports(&reports, std::io::BufWriter::new(file))?;

    let mut avg_map = BTreeMap::new();
    for (name, a) in averages.windows() {
        if let Some(m) = a.mean() {
            avg_map.insert(name.to_string(), m);
        }
    }
    Ok(RunSummary {
        run_dir: dir,
        steps: sim.steps() - start,
        columns: layout.columns,
        samples,
        averages: avg_map,
        reports,
        max_cfl,
        state: sim.into_state(),
    })
}

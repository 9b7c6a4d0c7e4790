use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::run::{BOUNDS_FILE, SPECTRA_AVG_FILE, TIMESERIES_FILE};
use super::table::{create_csv, flush, format_row, Table};
use crate::diagnostics::Moment;
use crate::{Error, Result};

pub const REPORT_DIR: &str = "report";

/// Monotonicity of the time-averaged weighted norms in `m` for one `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTrend {
    pub letter: String,
    pub tag: String,
    pub n: u32,
    /// Finite moments in increasing order with their averages.
    pub means: Vec<(u32, f64)>,
    pub nonincreasing: bool,
    pub nondecreasing: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportSummary {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub trends: Vec<MomentTrend>,
}

struct NormColumn {
    letter: String,
    n: u32,
    m: Moment,
    tag: String,
    index: usize,
}

fn parse_norm_column(name: &str, index: usize) -> Option<NormColumn> {
    let parts: Vec<&str> = name.split('_').collect();
    match parts.as_slice() {
        [letter @ ("P" | "Q"), n, m, tag] => Some(NormColumn {
            letter: letter.to_string(),
            n: n.parse().ok()?,
            m: m.parse().ok()?,
            tag: tag.to_string(),
            index,
        }),
        _ => None,
    }
}

/// Trapezoid average of `values` over `times`; a single sample is its own
/// average.
fn time_mean(times: &[f64], values: &[f64]) -> f64 {
    if times.len() < 2 {
        return values.first().copied().unwrap_or(f64::NAN);
    }
    let span = times[times.len() - 1] - times[0];
    if span <= 0.0 {
        return values[0];
    }
    let area: f64 = times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum();
    area / span
}

/// Centered differences inside, one-sided at the ends.
pub fn derivative(times: &[f64], values: &[f64]) -> Vec<f64> {
    let n = times.len();
    (0..n)
        .map(|i| {
            if n < 2 {
                return 0.0;
            }
            let (a, b) = match i {
                0 => (0, 1),
                _ if i == n - 1 => (n - 2, n - 1),
                _ => (i - 1, i + 1),
            };
            (values[b] - values[a]) / (times[b] - times[a])
        })
        .collect()
}

struct Writer {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Writer {
    fn table(
        &mut self,
        name: &str,
        columns: &[(&str, &str)],
        rows: &[Vec<f64>],
        integer_columns: usize,
    ) -> Result<()> {
        let path = self.dir.join(format!("{name}.csv"));
        let header: Vec<String> = columns.iter().map(|(c, _)| c.to_string()).collect();
        let mut w = create_csv(&path, &header)?;
        for row in rows {
            w.write_record(format_row(row, integer_columns))?;
        }
        flush(&mut w, &path)?;
        let mut doc = String::new();
        for (c, d) in columns {
            let _ = writeln!(doc, "{c}: {d}");
        }
        let side = self.dir.join(format!("{name}.columns.txt"));
        fs::write(&side, doc).map_err(|e| Error::io(&side, e))?;
        self.files.push(path);
        self.files.push(side);
        Ok(())
    }

    fn svg(&mut self, name: &str, plot: &Plot) -> Result<()> {
        let path = self.dir.join(format!("{name}.svg"));
        fs::write(&path, plot.render()).map_err(|e| Error::io(&path, e))?;
        self.files.push(path);
        Ok(())
    }
}

/// A minimal line chart.
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<(String, Vec<(f64, f64)>)>,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
];

impl Plot {
    fn new(title: &str, x_label: &str, y_label: &str, log_x: bool, log_y: bool) -> Self {
        Plot {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            log_x,
            log_y,
            series: Vec::new(),
        }
    }

    fn add(&mut self, name: impl Into<String>, points: Vec<(f64, f64)>) {
        self.series.push((name.into(), points));
    }

    pub fn render(&self) -> String {
        let (w, h, margin) = (640.0, 420.0, 60.0);
        let tx = |x: f64| if self.log_x { x.log10() } else { x };
        let ty = |y: f64| if self.log_y { y.log10() } else { y };
        let usable = |&(x, y): &(f64, f64)| {
            let x = tx(x);
            let y = ty(y);
            (x.is_finite() && y.is_finite()).then_some((x, y))
        };
        let pts: Vec<(f64, f64)> = self
            .series
            .iter()
            .flat_map(|(_, p)| p.iter().filter_map(usable))
            .collect();
        let (mut x0, mut x1, mut y0, mut y1) = pts.iter().fold(
            (
                f64::INFINITY,
                f64::NEG_INFINITY,
                f64::INFINITY,
                f64::NEG_INFINITY,
            ),
            |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
        );
        if pts.is_empty() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let sx = |x: f64| margin + (x - x0) / (x1 - x0) * (w - 2.0 * margin);
        let sy = |y: f64| h - margin - (y - y0) / (y1 - y0) * (h - 2.0 * margin);
        let axis = |v: f64, log: bool| {
            if log {
                format!("1e{v:.1}")
            } else {
                format!("{v:.3e}")
            }
        };
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
            w / 2.0,
            self.title
        );
        let _ = writeln!(
            s,
            r#"<rect x="{margin}" y="{margin}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            w - 2.0 * margin,
            h - 2.0 * margin
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            w / 2.0,
            h - 15.0,
            self.x_label
        );
        let _ = writeln!(
            s,
            r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
            h / 2.0,
            h / 2.0,
            self.y_label
        );
        let _ = writeln!(
            s,
            r#"<text x="{margin}" y="{}">{}</text>"#,
            h - margin + 15.0,
            axis(x0, self.log_x)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            w - margin,
            h - margin + 15.0,
            axis(x1, self.log_x)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            margin - 4.0,
            h - margin,
            axis(y0, self.log_y)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            margin - 4.0,
            margin + 10.0,
            axis(y1, self.log_y)
        );
        for (i, (name, points)) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let path: Vec<String> = points
                .iter()
                .filter_map(usable)
                .map(|(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            if !path.is_empty() {
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    path.join(" ")
                );
            }
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" fill="{color}">{name}</text>"#,
                w - margin + 5.0,
                margin + 14.0 * (i as f64 + 1.0)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Writes plot data (CSV with a `.columns.txt` sidecar) and SVG charts
/// for a finished run into `run_dir/report`.
pub fn report(run_dir: &Path) -> Result<ReportSummary> {
    let ts_path = run_dir.join(TIMESERIES_FILE);
    if !ts_path.is_file() {
        return Err(Error::io(
            &ts_path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "run output not found"),
        ));
    }
    let ts = Table::read(&ts_path)?;
    let dir = run_dir.join(REPORT_DIR);
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut out = Writer {
        dir: dir.clone(),
        files: Vec::new(),
    };

    let time = ts.require("time", &ts_path)?;
    let energy = ts.require("e_tot", &ts_path)?;
    let h0 = ts.require("h0", &ts_path)?;
    let h1 = ts.require("h1", &ts_path)?;
    let rate = derivative(&time, &energy);
    let rows: Vec<Vec<f64>> = (0..time.len())
        .map(|i| {
            let rel = if energy[i] > 0.0 {
                rate[i] / energy[i]
            } else {
                0.0
            };
            vec![time[i], energy[i], h0[i], h1[i], rate[i], rel]
        })
        .collect();
    out.table(
        "energy",
        &[
            ("time", "simulation time"),
            ("e_tot", "volume-averaged kinetic energy"),
            ("h0", "mean square velocity"),
            ("h1", "mean square velocity gradient"),
            ("de_dt", "finite-difference rate of change of e_tot"),
            ("rel_de_dt", "de_dt divided by e_tot"),
        ],
        &rows,
        0,
    )?;
    let mut plot = Plot::new("Total energy", "t", "E_tot", false, false);
    plot.add(
        "E_tot",
        time.iter().copied().zip(energy.iter().copied()).collect(),
    );
    out.svg("energy", &plot)?;

    let norms: Vec<NormColumn> = ts
        .columns
        .iter()
        .enumerate()
        .filter_map(|(i, c)| parse_norm_column(c, i))
        .collect();
    let mut tags: Vec<(String, String)> = norms
        .iter()
        .map(|c| (c.letter.clone(), c.tag.clone()))
        .collect();
    tags.dedup();
    let mut trends = Vec::new();
    for (letter, tag) in &tags {
        let mine: Vec<&NormColumn> = norms
            .iter()
            .filter(|c| &c.letter == letter && &c.tag == tag)
            .collect();
        let low: Vec<&NormColumn> = mine.iter().copied().filter(|c| c.n <= 1).collect();
        let mut columns: Vec<(String, String)> = vec![("time".into(), "simulation time".into())];
        columns.extend(low.iter().map(|c| {
            let name = ts.columns[c.index].clone();
            (
                name,
                format!(
                    "weighted norm n = {}, m = {} with U0 choice '{tag}'",
                    c.n, c.m
                ),
            )
        }));
        let rows: Vec<Vec<f64>> = ts
            .rows
            .iter()
            .map(|r| {
                std::iter::once(r[1])
                    .chain(low.iter().map(|c| r[c.index]))
                    .collect()
            })
            .collect();
        let cols: Vec<(&str, &str)> = columns
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        out.table(&format!("norms_{tag}"), &cols, &rows, 0)?;
        let mut plot = Plot::new(
            &format!("{letter}(0,m) and {letter}(1,m), U0 '{tag}'"),
            "t",
            "weighted norm",
            false,
            true,
        );
        for c in &low {
            plot.add(
                format!("{}({},{})", letter, c.n, c.m),
                ts.rows.iter().map(|r| (r[1], r[c.index])).collect(),
            );
        }
        out.svg(&format!("norms_{tag}"), &plot)?;

        let mut rows = Vec::new();
        let mut n_values: Vec<u32> = mine.iter().map(|c| c.n).collect();
        n_values.dedup();
        for n in n_values {
            let mut means = Vec::new();
            for c in mine.iter().filter(|c| c.n == n) {
                let values: Vec<f64> = ts.rows.iter().map(|r| r[c.index]).collect();
                let mean = time_mean(&time, &values);
                let m = match c.m {
                    Moment::Finite(m) => m as f64,
                    Moment::Infinite => f64::INFINITY,
                };
                rows.push(vec![n as f64, m, mean]);
                if let Moment::Finite(m) = c.m {
                    means.push((m, mean));
                }
            }
            let nonincreasing = means.windows(2).all(|w| w[1].1 <= w[0].1);
            let nondecreasing = means.windows(2).all(|w| w[1].1 >= w[0].1);
            trends.push(MomentTrend {
                letter: letter.clone(),
                tag: tag.clone(),
                n,
                means,
                nonincreasing,
                nondecreasing,
            });
        }
        out.table(
            &format!("moments_{tag}"),
            &[
                ("n", "number of derivatives"),
                ("m", "moment index (inf for the sup norm)"),
                ("mean", "time average of the weighted norm"),
            ],
            &rows,
            1,
        )?;
    }
    let trend_rows: Vec<String> = trends
        .iter()
        .map(|t| {
            format!(
                "{},{},{},{},{}\n",
                t.letter, t.tag, t.n, t.nonincreasing, t.nondecreasing
            )
        })
        .collect();
    let mono = dir.join("monotonicity.csv");
    fs::write(
        &mono,
        format!(
            "letter,u0,n,nonincreasing,nondecreasing\n{}",
            trend_rows.concat()
        ),
    )
    .map_err(|e| Error::io(&mono, e))?;
    out.files.push(mono);

    let spectra_path = run_dir.join(SPECTRA_AVG_FILE);
    if spectra_path.is_file() {
        let sp = Table::read(&spectra_path)?;
        let shell = sp.require("shell", &spectra_path)?;
        let get = |c: &str| sp.require(c, &spectra_path);
        let (e, t, ta, tb, pi, pib) = (
            get("E")?,
            get("T")?,
            get("T_alpha")?,
            get("T_beta")?,
            get("Pi")?,
            get("Pi_beta")?,
        );
        let rows: Vec<Vec<f64>> = (0..shell.len())
            .skip(1)
            .map(|k| vec![shell[k], e[k]])
            .collect();
        out.table(
            "spectrum",
            &[
                ("shell", "integer wavenumber shell"),
                ("E", "time-averaged energy in the shell"),
            ],
            &rows,
            1,
        )?;
        let mut plot = Plot::new("Energy spectrum", "k", "E(k)", true, true);
        plot.add("E(k)", rows.iter().map(|r| (r[0], r[1])).collect());
        out.svg("spectrum", &plot)?;
        let rows: Vec<Vec<f64>> = (0..shell.len())
            .skip(1)
            .map(|k| vec![shell[k], t[k], ta[k], tb[k], pi[k], pib[k]])
            .collect();
        out.table(
            "budget",
            &[
                ("shell", "integer wavenumber shell"),
                ("T", "advective transfer"),
                ("T_alpha", "linear source"),
                ("T_beta", "cubic sink"),
                ("Pi", "advective flux through the shell"),
                ("Pi_beta", "cubic flux through the shell"),
            ],
            &rows,
            1,
        )?;
        let mut plot = Plot::new("Spectral budget", "k", "time-averaged value", true, false);
        for (j, name) in ["T", "T_alpha", "T_beta", "Pi", "Pi_beta"]
            .iter()
            .enumerate()
        {
            plot.add(*name, rows.iter().map(|r| (r[0], r[j + 1])).collect());
        }
        out.svg("budget", &plot)?;
    }

    let bounds_path = run_dir.join(BOUNDS_FILE);
    if bounds_path.is_file() {
        let mut r = csv::Reader::from_path(&bounds_path)?;
        let path = dir.join("p11_bound.csv");
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["label", "bound", "measured", "rhs", "ratio", "re_nu"])?;
        for rec in r.records() {
            let rec = rec?;
            if matches!(&rec[1], "P(1,1)" | "Q(1,1)") {
                w.write_record([&rec[0], &rec[1], &rec[2], &rec[3], &rec[4], &rec[8]])?;
            }
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        out.files.push(path);
    }

    Ok(ReportSummary {
        dir,
        files: out.files,
        trends,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_quadratic() {
        let t: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let v: Vec<f64> = t.iter().map(|x| x * x).collect();
        let d = derivative(&t, &v);
        for i in 1..10 {
            assert!((d[i] - 2.0 * t[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_of_linear_series() {
        let t = [0.0, 1.0, 3.0];
        let v = [0.0, 1.0, 3.0];
        assert!((time_mean(&t, &v) - 1.5).abs() < 1e-15);
        assert_eq!(time_mean(&[2.0], &[5.0]), 5.0);
    }

    #[test]
    fn column_names() {
        let c = parse_norm_column("P_1_inf_nu", 3).unwrap();
        assert_eq!(
            (c.n, c.m, c.tag.as_str(), c.index),
            (1, Moment::Infinite, "nu", 3)
        );
        assert!(parse_norm_column("h0", 0).is_none());
        assert!(parse_norm_column("D_2_ab", 0).is_none());
    }

    #[test]
    fn empty_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let err = report(dir.path()).unwrap_err().to_string();
        assert!(err.contains("timeseries.csv"), "{err}");
    }

    #[test]
    fn svg_is_well_formed() {
        let mut p = Plot::new("t", "x", "y", true, true);
        p.add("a", vec![(1.0, 1.0), (10.0, 0.1), (0.0, 1.0)]);
        let s = p.render();
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("polyline"));
    }
}

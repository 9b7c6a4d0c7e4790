//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_rational::Ratio;

use itt_core::bounds::{
    bound_p, bound_q, gn_exponent, gn_exponent_with_base, BoundSettings, BoundStatus, BoundVariant,
    LpIndex,
};
use itt_core::diagnostics::{
    alpha_exponent, d_m, h_norm, q_nm, vorticity_magnitude_squared, weight_exponent, Moment,
    NormHierarchy,
};
use itt_core::nondim::{nondimensionalize, U0Choice};
use itt_core::runner::{run, RunConfig, RunSummary, Table, SPECTRA_FILE};
use itt_core::solver::{init_condition, InitialCondition, PhysicalParams, Simulation};
use itt_core::spectral::{inverse_transform, max_divergence_ratio, Grid, SpectralField};

type Check = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn simulation(
    params: PhysicalParams,
    dim: usize,
    n: usize,
    ic: &InitialCondition,
    dt: f64,
) -> Result<Simulation, String> {
    let grid = Grid::new(dim, n, params.box_length, 0.5).map_err(|e| e.to_string())?;
    let u = init_condition(ic, &grid, 7).map_err(|e| e.to_string())?;
    Simulation::new(params, u, dt).map_err(|e| e.to_string())
}

fn taylor_green() -> Check {
    let params = PhysicalParams {
        lambda: 1.0,
        alpha: 0.0,
        beta: 0.0,
        nu: 0.1,
        box_length: 2.0 * PI,
    };
    let ic = InitialCondition::TaylorGreen { amplitude: 1.0 };
    let clock = Instant::now();
    let mut sim = simulation(params, 2, 64, &ic, 1e-3)?;
    let u0 = inverse_transform(sim.state());
    sim.advance(1000).map_err(|e| e.to_string())?;
    let elapsed = clock.elapsed().as_secs_f64();
    let t = sim.time();
    let decay = (-2.0 * params.nu * t).exp();
    let u = inverse_transform(sim.state());
    let err = u
        .components()
        .iter()
        .zip(u0.components())
        .flat_map(|(a, b)| a.iter().zip(b).map(move |(x, y)| (x - y * decay).abs()))
        .fold(0.0, f64::max);
    ensure(
        err < 1e-8 && elapsed < 10.0 && (t - 1.0).abs() < 1e-12,
        format!("t = {t}, max pointwise error {err:.2e} (< 1e-8), runtime {elapsed:.2} s (< 10 s)"),
    )
}

fn linear_mode() -> Check {
    let mut worst = 0.0f64;
    for (dim, k) in [(2, vec![2, 1]), (3, vec![1, -2, 3])] {
        let params = PhysicalParams {
            lambda: 0.0,
            alpha: 1.5,
            beta: 0.0,
            nu: 0.02,
            box_length: 2.0 * PI,
        };
        let ic = InitialCondition::SingleMode {
            k: k.clone(),
            amplitude: 0.3,
        };
        let dt = 1e-3;
        let mut sim = simulation(params, dim, 16, &ic, dt)?;
        let start = sim.state().clone();
        sim.advance(1000).map_err(|e| e.to_string())?;
        let k2: f64 = k.iter().map(|&c| (c * c) as f64).sum();
        let factor = ((params.alpha - params.nu * k2) * sim.time()).exp();
        let err =
            sim.state().max_difference(&start.clone().scaled(factor)) / (start.max_abs() * factor);
        worst = worst.max(err);
    }
    ensure(
        worst < 1e-12,
        format!("relative error after 1000 steps {worst:.2e} (< 1e-12) in d = 2 and 3"),
    )
}

fn logistic() -> Check {
    let params = PhysicalParams {
        lambda: 1.0,
        alpha: 2.0,
        beta: 0.5,
        nu: 0.1,
        box_length: 2.0 * PI,
    };
    let target = params.alpha / params.beta;
    let dt = 1e-3;
    let steps = (20.0 / params.alpha / dt).round() as u64;
    let mut lines = Vec::new();
    let mut ok = true;
    for u0 in [0.1, 3.0] {
        let ic = InitialCondition::Uniform(vec![u0 * 0.6, u0 * 0.8]);
        let mut sim = simulation(params, 2, 8, &ic, dt)?;
        sim.advance(steps).map_err(|e| e.to_string())?;
        let speed2 = h_norm(sim.state(), 0);
        let err = rel(speed2, target);
        ok &= err < 1e-8;
        lines.push(format!(
            "|u0|^2 = {:.2}: |u|^2 at t = {:.1} off by {err:.1e}",
            u0 * u0,
            sim.time()
        ));
    }
    ensure(
        ok,
        format!(
            "{} (< 1e-8 relative to alpha/beta = {target})",
            lines.join("; ")
        ),
    )
}

/// Desk A-series run shared by the energy, budget, bound and ordering
/// criteria.
fn desk_run(dir: &std::path::Path) -> Result<RunSummary, String> {
    let mut cfg = RunConfig::default();
    cfg.apply_registry("A6").map_err(|e| e.to_string())?;
    cfg.n = Some(128);
    cfg.t_end = 0.6;
    cfg.sample_every = 10;
    cfg.spectra_every = 50;
    cfg.n_max = 1;
    cfg.m_max = 10;
    cfg.transient_skip = 0.1;
    cfg.output_dir = dir.to_path_buf();
    cfg.label = "A6-desk".into();
    run(&cfg).map_err(|e| e.to_string())
}

/// Start of the post-transient window: ten linear growth times.
fn settled(params: &PhysicalParams) -> f64 {
    10.0 / params.alpha
}

fn energy_balance(s: &RunSummary, p: &PhysicalParams) -> Check {
    let col = |c: &str| s.column(c).ok_or(format!("missing column {c}"));
    let (t, h0, h1, q) = (col("time")?, col("h0")?, col("h1")?, col("quartic")?);
    let mut worst = 0.0f64;
    let mut count = 0;
    for i in 2..t.len().saturating_sub(2) {
        if t[i - 2] < settled(p) {
            continue;
        }
        let h = t[i + 1] - t[i];
        if (t[i] - t[i - 1] - h).abs() > 1e-9 || (t[i + 2] - t[i + 1] - h).abs() > 1e-9 {
            continue;
        }
        let lhs = 0.5 * (-h0[i + 2] + 8.0 * h0[i + 1] - 8.0 * h0[i - 1] + h0[i - 2]) / (12.0 * h);
        let terms = [p.alpha * h0[i], p.nu * h1[i], p.beta * q[i]];
        let rhs = terms[0] - terms[1] - terms[2];
        let largest = terms.iter().fold(0.0, |a: f64, b| a.max(b.abs()));
        worst = worst.max((lhs - rhs).abs() / largest);
        count += 1;
    }
    ensure(
        count > 100 && worst < 1e-4,
        format!("max residual {worst:.2e} of the largest term (< 1e-4) over {count} samples every 10 steps, t >= {}", settled(p)),
    )
}

fn budget(s: &RunSummary, p: &PhysicalParams) -> Check {
    let path = s.run_dir.join(SPECTRA_FILE);
    let sp = Table::read(&path).map_err(|e| e.to_string())?;
    let idx = |c: &str| sp.index(c).ok_or(format!("missing column {c}"));
    let (step_i, time_i, t_i, tb_i, pi_i, pib_i) = (
        idx("step")?,
        idx("time")?,
        idx("T")?,
        idx("T_beta")?,
        idx("Pi")?,
        idx("Pi_beta")?,
    );
    let steps = s.column("step").ok_or("missing step")?;
    let quartic = s.column("quartic").ok_or("missing quartic")?;
    let (mut sum_t, mut sum_tb, mut pi_end) = (0.0f64, 0.0f64, 0.0f64);
    let mut positive_pib = 0usize;
    let mut samples = 0usize;
    for group in sp.rows.chunk_by(|a, b| a[step_i] == b[step_i]) {
        let step = group[0][step_i];
        let Some(row) = steps.iter().position(|&x| x == step) else {
            continue;
        };
        let t_abs: f64 = group.iter().map(|r| r[t_i].abs()).sum();
        let t_sum: f64 = group.iter().map(|r| r[t_i]).sum();
        sum_t = sum_t.max(t_sum.abs() / t_abs);
        let tb: f64 = group.iter().map(|r| r[tb_i]).sum();
        sum_tb = sum_tb.max(rel(tb, p.beta * quartic[row]));
        let pi_max = group.iter().fold(0.0, |a: f64, r| a.max(r[pi_i].abs()));
        pi_end = pi_end.max(group[group.len() - 1][pi_i].abs() / pi_max);
        if group[0][time_i] >= settled(p) {
            positive_pib += group.iter().filter(|r| r[pib_i] > 0.0).count();
            samples += 1;
        }
    }
    ensure(
        sum_t < 1e-8 && sum_tb < 1e-8 && pi_end < 1e-8 && positive_pib == 0 && samples > 0,
        format!(
            "|sum T|/sum|T| {sum_t:.1e}, sum T_beta vs beta<|u|^4> {sum_tb:.1e}, |Pi(k_max)|/max|Pi| {pi_end:.1e} (all < 1e-8); \
             Pi_beta > 0 at {positive_pib} shells over {samples} steady samples"
        ),
    )
}

fn exponent_table() -> Check {
    let r = |a: i64, b: i64| Ratio::new(a, b);
    let mut fails = Vec::new();
    let mut check = |name: String, got: Option<Ratio<i64>>, want: Ratio<i64>| {
        if got != Some(want) {
            fails.push(format!("{name}: got {got:?}, want {want}"));
        }
    };
    for d in [2u32, 3] {
        let a = alpha_exponent(1, Moment::Finite(1), d).ok();
        check(
            format!("(4-d)alpha(1,1,{d})"),
            a.map(|a| a * (4 - d as i64)),
            r(2, 1),
        );
        check(
            format!("weight(1,1,{d})"),
            weight_exponent(1, Moment::Finite(1), d).ok(),
            r(2, 1),
        );
    }
    for n in 1..=8u32 {
        check(
            format!("alpha({n},1,2)"),
            alpha_exponent(n, Moment::Finite(1), 2).ok(),
            r(1, n as i64),
        );
    }
    for m in 1..=12u32 {
        let mi = m as i64;
        check(
            format!("alpha(1,{m},2)"),
            alpha_exponent(1, Moment::Finite(m), 2).ok(),
            r(mi, 2 * mi - 1),
        );
        if m >= 2 {
            check(
                format!("alpha(0,{m},3)"),
                alpha_exponent(0, Moment::Finite(m), 3).ok(),
                r(2 * mi, 2 * mi - 3),
            );
        }
    }
    let p = |a: i64, b: i64| LpIndex::Finite(r(a, b));
    check(
        "GN a = 1/3".into(),
        gn_exponent(0, 1, p(6, 1), p(2, 1), p(4, 1), 2).ok(),
        r(1, 3),
    );
    for m in 3..=12i64 {
        check(
            format!("GN (m-2)/(3m), m = {m}"),
            gn_exponent(0, 2, p(2 * m, 1), p(2, 1), p(4, 1), 2).ok(),
            r(m - 2, 3 * m),
        );
        check(
            format!("GN 3(m-2)/(5m), m = {m}"),
            gn_exponent(0, 2, p(2 * m, 1), p(2, 1), p(4, 1), 3).ok(),
            r(3 * (m - 2), 5 * m),
        );
    }
    for n in 2..=8u32 {
        check(
            format!("Agmon 1/(2(n-1)), n = {n}"),
            gn_exponent_with_base(0, n, 1, LpIndex::Infinite, p(2, 1), p(2, 1), 3).ok(),
            r(1, 2 * (n as i64 - 1)),
        );
    }
    if fails.is_empty() {
        Ok("all exponents equal as exact rationals".into())
    } else {
        Err(fails.join("; "))
    }
}

fn bounds_consistency() -> Check {
    let physical = PhysicalParams {
        lambda: 1.0,
        alpha: 100.0,
        beta: 5.0,
        nu: 0.0177,
        box_length: 2.0 * PI,
    };
    let lead = BoundSettings::default();
    let full = BoundSettings {
        variant: BoundVariant::Full,
        ..Default::default()
    };
    let mut worst = 0.0f64;
    let mut track = |a: f64, b: f64| worst = worst.max(rel(a, b));
    for choice in U0Choice::ALL {
        let p = nondimensionalize(&physical, choice).map_err(|e| e.to_string())?;
        let (a, act, re) = (p.alpha0, p.activity, p.re_nu);
        let p2g = |n: f64, m: f64| {
            let den = m * (n + 1.0) - 1.0;
            a.powf(2.0 * m / den) * (a * act * re.powi(3)).powf((m * n - 1.0) / den)
        };
        let p1c = a * (a * act * re.powi(3)).sqrt();
        track(p2g(2.0, 1.0), p1c);
        track(
            bound_p(2, Moment::Finite(1), &p, &lead).map_err(|e| e.to_string())?,
            p1c,
        );
        for m in 2..=10u32 {
            track(
                bound_p(2, Moment::Finite(m), &p, &lead).map_err(|e| e.to_string())?,
                p2g(2.0, m as f64),
            );
        }
        track(
            bound_p(1, Moment::Finite(1), &p, &lead).map_err(|e| e.to_string())?,
            a * act * re,
        );
        let q0 = bound_q(0, Moment::Infinite, &p, &lead).map_err(|e| e.to_string())?;
        track(
            q0.value().ok_or("Q(0,inf) has no value")?,
            a.powf(0.9) * act.powf(0.2) * re.powf(1.8),
        );
    }
    let p = nondimensionalize(&physical, U0Choice::NuOverL).map_err(|e| e.to_string())?;
    let extra = p.alpha0.powf(1.5) * (1.0 + p.alpha0).sqrt() / p.re_beta.sqrt();
    track(
        bound_p(2, Moment::Finite(1), &p, &full).map_err(|e| e.to_string())?,
        extra,
    );
    ensure(
        worst < 1e-12,
        format!("largest relative difference {worst:.1e} (< 1e-12)"),
    )
}

fn bound_satisfaction(s: &RunSummary) -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for report in s.reports.iter().filter(|r| r.label.ends_with(":full")) {
        for id in ["H0", "H1", "L4", "P(1,1)"] {
            let row = report.row(id).ok_or(format!("no {id} row"))?;
            ok &= row.status == BoundStatus::Satisfied;
            parts.push(format!(
                "{} {id} {:.3e}",
                report.label,
                row.ratio.unwrap_or(f64::NAN)
            ));
        }
    }
    ensure(
        ok && !parts.is_empty(),
        format!("measured/bound ratios: {}", parts.join(", ")),
    )
}

fn ordering(s: &RunSummary) -> Check {
    let mut avg = Vec::new();
    for m in 2..=10u32 {
        let name = format!("P_1_{m}_nu");
        avg.push(s.average("full", &name).ok_or(format!("missing {name}"))?);
    }
    let decreasing = avg.windows(2).all(|w| w[1] <= w[0]);

    // Raw norms recovered from P_{1,m} with U0 = sqrt(alpha/beta).
    let raw: Vec<Vec<f64>> = (1..=10u32)
        .map(|m| {
            let w = 2.0 * m as f64 / (2.0 * m as f64 - 1.0);
            let col = s
                .column(&format!("P_1_{m}_ab"))
                .ok_or(format!("missing P_1_{m}_ab"))?;
            Ok(col.iter().map(|p| p.powf(1.0 / w)).collect())
        })
        .collect::<Result<_, String>>()?;
    let raw_ok = raw.windows(2).all(|pair| {
        pair[0]
            .iter()
            .zip(&pair[1])
            .all(|(lo, hi)| *hi >= lo * (1.0 - 1e-12))
    });
    ensure(
        decreasing && raw_ok,
        format!(
            "<P(1,m)> with U0 = nu/L for m = 2..10: {} ({}); raw norms nondecreasing in m at every sample: {raw_ok}",
            avg.iter().map(|v| format!("{v:.4e}")).collect::<Vec<_>>().join(" "),
            if decreasing { "nonincreasing" } else { "NOT nonincreasing" }
        ),
    )
}

/// Registered A-series run long enough for the energy to settle.
const FROZEN_LABEL: &str = "A1";
const FROZEN_T_END: f64 = 12.0;

fn frozen_state(dir: &std::path::Path) -> Check {
    let mut cfg = RunConfig::default();
    cfg.apply_registry(FROZEN_LABEL)
        .map_err(|e| e.to_string())?;
    cfg.n = Some(128);
    cfg.t_end = FROZEN_T_END;
    cfg.sample_every = 50;
    cfg.spectra_every = 0;
    cfg.n_max = 0;
    cfg.m_max = 2;
    cfg.output_dir = dir.to_path_buf();
    let s = run(&cfg).map_err(|e| e.to_string())?;
    let t = s.column("time").ok_or("missing time")?;
    let e = s.column("e_tot").ok_or("missing e_tot")?;
    let start = 0.75 * cfg.t_end;
    let mut worst = 0.0f64;
    for i in 2..t.len().saturating_sub(2) {
        if t[i] < start {
            continue;
        }
        let h = t[i + 1] - t[i];
        let de = (-e[i + 2] + 8.0 * e[i + 1] - 8.0 * e[i - 1] + e[i - 2]) / (12.0 * h);
        worst = worst.max(de.abs() / e[i]);
    }
    ensure(
        worst < 1e-3 && s.max_cfl < 1.0,
        format!(
            "{FROZEN_LABEL} at N = 128 to t = {}: max |dE/dt|/E over t >= {start} is {worst:.2e} (< 1e-3), max CFL {:.3} (< 1)",
            cfg.t_end, s.max_cfl
        ),
    )
}

fn smoke_3d() -> Check {
    let mut cfg = RunConfig::default();
    cfg.apply_registry("B2").map_err(|e| e.to_string())?;
    let p = cfg.params;
    let ic = InitialCondition::RandomLowK {
        k_max: 4.0,
        energy: 0.5 * p.alpha / p.beta,
    };
    let mut sim = simulation(p, 3, 48, &ic, cfg.dt)?;
    let mut worst = [0.0f64; 3];
    let check = |u: &SpectralField, worst: &mut [f64; 3]| {
        let h1 = h_norm(u, 1);
        let w = vorticity_magnitude_squared(u);
        let enstrophy = w.iter().sum::<f64>() / w.len() as f64;
        worst[0] = worst[0].max(rel(enstrophy, h1));
        let phys = inverse_transform(u).magnitude_squared();
        let mean = phys.iter().sum::<f64>() / phys.len() as f64;
        worst[1] = worst[1].max(rel(mean, h_norm(u, 0)));
        worst[2] = worst[2].max(max_divergence_ratio(u));
    };
    check(sim.state(), &mut worst);
    for _ in 0..20 {
        sim.advance(100).map_err(|e| e.to_string())?;
        check(sim.state(), &mut worst);
    }
    let u = sim.state();
    let h1 = h_norm(u, 1);
    let q11 = q_nm(u, 1, Moment::Finite(1)).map_err(|e| e.to_string())?;
    let d1 = d_m(u, Moment::Finite(1)).map_err(|e| e.to_string())?;
    let hier = NormHierarchy::compute(u, 1, &[Moment::Finite(1)]);
    let q11_hier = hier
        .weighted(|_| 1.0)
        .iter()
        .find(|e| e.0 == 1)
        .map(|e| e.2)
        .unwrap_or(f64::NAN);
    let (eq, ed, eh) = (rel(q11, h1), rel(d1, h1), rel(q11_hier, h1));
    ensure(
        sim.steps() == 2000 && worst[0] < 1e-10 && worst[1] < 1e-10 && worst[2] < 1e-10 && eq < 1e-10 && ed < 1e-10 && eh < 1e-10,
        format!(
            "2000 steps to t = {:.2}; enstrophy identity {:.1e}, Parseval {:.1e}, divergence {:.1e}; Q(1,1) vs H1 {eq:.1e}, D1 vs H1 {ed:.1e}",
            sim.time(),
            worst[0],
            worst[1],
            worst[2]
        ),
    )
}

fn report(id: usize, name: &str, outcome: Check) -> bool {
    match outcome {
        Ok(detail) => {
            println!("PASS [{id:>2}] {name}: {detail}");
            true
        }
        Err(detail) => {
            println!("FAIL [{id:>2}] {name}: {detail}");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= report(1, "Taylor-Green decay", taylor_green());
    ok &= report(2, "linear mode growth", linear_mode());
    ok &= report(3, "uniform-mode equilibration", logistic());

    let dir = tempfile::tempdir().expect("temporary directory");
    let a6 = desk_run(dir.path());
    let a6_params = {
        let mut c = RunConfig::default();
        c.apply_registry("A6").expect("registered");
        c.params
    };
    let shared = |f: &dyn Fn(&RunSummary) -> Check| match &a6 {
        Ok(s) => f(s),
        Err(e) => Err(format!("desk run failed: {e}")),
    };
    ok &= report(
        4,
        "energy balance",
        shared(&|s| energy_balance(s, &a6_params)),
    );
    ok &= report(
        5,
        "spectral budget identities",
        shared(&|s| budget(s, &a6_params)),
    );
    ok &= report(6, "exponent table", exponent_table());
    ok &= report(7, "bounds consistency", bounds_consistency());
    ok &= report(8, "bound satisfaction", shared(&bound_satisfaction));
    ok &= report(9, "ordering in m", shared(&ordering));
    ok &= report(10, "frozen state", frozen_state(dir.path()));
    ok &= report(11, "d = 3 smoke run", smoke_3d());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

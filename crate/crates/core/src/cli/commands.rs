//! Subcommand implementations. Each returns the exit status and writes its
//! report to `out`; diagnostics go to `err`.

use std::io::Write;

use super::config::{OutputFormat, RunConfig};
use super::format::{Cell, Report, Table};
use super::ExitStatus;
use crate::economy::TaxMode;
use crate::error::Error;
use crate::isoelastic::{iso_crosscheck, iso_solution};
use crate::par;
use crate::planner::{brute_force_oracle, solve_optimal_tax, trust_threshold, Regime};
use crate::statistics::{check_decomposition, sufficient_stats};

/// CSV header of the `schedule` subcommand.
pub const SCHEDULE_HEADER: [&str; 11] = [
    "theta",
    "regime",
    "tau_star",
    "revenue",
    "g_star",
    "welfare",
    "theta_bar",
    "meb",
    "mr",
    "mvf",
    "ramsey_residual",
];

/// Decomposition-identity tolerance used by `verify`.
pub const DECOMPOSITION_TOL: f64 = 1e-6;
/// Closed-form crosscheck tolerance used by `verify`.
pub const CROSSCHECK_TOL: f64 = 1e-8;
/// Points in the `verify` decomposition grid, spanning `[0, 0.8 tau_max]`.
pub const DECOMPOSITION_POINTS: usize = 50;
const DECOMPOSITION_SPAN: f64 = 0.8;

/// Evenly spaced grid of `n` points on `[0, hi]`.
pub fn tau_grid(hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| hi * i as f64 / (n - 1) as f64).collect()
}

pub(super) struct Ctx<'a> {
    pub config: &'a RunConfig,
    pub format: OutputFormat,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn solver_error(&mut self, e: &Error) -> ExitStatus {
        let _ = writeln!(self.err, "error: {}: {e}", e.name());
        ExitStatus::SolveError
    }

    fn input_error(&mut self, e: impl std::fmt::Display) -> ExitStatus {
        let _ = writeln!(self.err, "error: {e}");
        ExitStatus::InputError
    }

    fn emit_report(&mut self, report: &Report) -> ExitStatus {
        match report.write(self.format, self.out) {
            Ok(()) => ExitStatus::Success,
            Err(e) => self.input_error(e),
        }
    }

    fn emit_table(&mut self, table: &Table) -> std::io::Result<()> {
        table.write(self.format, self.out)
    }
}

macro_rules! try_input {
    ($ctx:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return $ctx.input_error(e),
        }
    };
}

macro_rules! try_solve {
    ($ctx:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return $ctx.solver_error(&e),
        }
    };
}

pub(super) fn solve(ctx: &mut Ctx) -> ExitStatus {
    let econ = try_input!(ctx, ctx.config.economy());
    let sol = try_solve!(ctx, solve_optimal_tax(&econ));
    let s = &sol.stats;
    let mut r = Report::default();
    r.add("regime", sol.regime.to_string())
        .add("theta", sol.theta)
        .add("theta_bar", sol.theta_bar)
        .add("tau_star", sol.tau_star)
        .add("g_star", sol.g_star)
        .add("welfare", sol.w_star)
        .add("meb", s.meb)
        .add("mr", s.mr)
        .add("meb_over_mr", s.meb / s.mr)
        .add("mvf", s.mvf)
        .add("ramsey_residual", Cell::opt(sol.ramsey_residual))
        .add("iterations", sol.iterations as f64);
    ctx.emit_report(&r)
}

pub(super) fn threshold(ctx: &mut Ctx) -> ExitStatus {
    let econ = try_input!(ctx, ctx.config.economy_at(ctx.config.representative_theta()));
    let t = try_solve!(ctx, trust_threshold(&econ));
    let mut r = Report::default();
    r.add("theta_bar", t.theta_bar)
        .add("meb0", t.meb0)
        .add("mr0", t.mr0)
        .add("uc0", t.uc0)
        .add("ug0", t.ug0)
        .add("in_unit_interval", t.in_unit_interval);
    ctx.emit_report(&r)
}

/// One schedule row, or the name of the error that prevented it.
fn schedule_row(config: &RunConfig, theta: f64) -> Vec<Cell> {
    let solved = config
        .economy_at(theta)
        .map_err(|e| e.to_string())
        .and_then(|econ| solve_optimal_tax(&econ).map_err(|e| e.name().to_string()));
    match solved {
        Ok(sol) => {
            let s = &sol.stats;
            let revenue = match sol.regime {
                Regime::Corner => 0.0,
                Regime::Interior => s.equilibrium.revenue,
            };
            vec![
                theta.into(),
                sol.regime.to_string().into(),
                sol.tau_star.into(),
                revenue.into(),
                sol.g_star.into(),
                sol.w_star.into(),
                sol.theta_bar.into(),
                s.meb.into(),
                s.mr.into(),
                s.mvf.into(),
                Cell::opt(sol.ramsey_residual),
            ]
        }
        Err(name) => {
            let mut row = vec![theta.into(), format!("error:{name}").into()];
            row.resize(SCHEDULE_HEADER.len(), Cell::Empty);
            row
        }
    }
}

pub(super) fn schedule(ctx: &mut Ctx) -> ExitStatus {
    let thetas = try_input!(ctx, ctx.config.theta_grid());
    let config = ctx.config;
    let rows = par::map(&thetas, |&theta| schedule_row(config, theta));
    let succeeded = rows
        .iter()
        .filter(|row| matches!(&row[1], Cell::Text(t) if !t.starts_with("error:")))
        .count();
    let mut table = Table::new(SCHEDULE_HEADER.to_vec());
    for row in rows {
        table.push(row);
    }
    if let Err(e) = ctx.emit_table(&table) {
        return ctx.input_error(e);
    }
    if succeeded == 0 {
        let _ = writeln!(ctx.err, "error: no schedule row succeeded");
        return ExitStatus::EmptySchedule;
    }
    ExitStatus::Success
}

pub(super) fn stats(ctx: &mut Ctx) -> ExitStatus {
    let econ = try_input!(ctx, ctx.config.economy());
    let n = ctx.config.run.tau_points;
    let taus: Vec<f64> = (0..n).map(|i| econ.tau_max() * i as f64 / n as f64).collect();
    let all = try_solve!(ctx, par::try_map(&taus, |&tau| sufficient_stats(&econ, tau)));
    let mut table = Table::new(vec![
        "tau",
        "labor",
        "consumption",
        "base",
        "revenue",
        "welfare",
        "mr",
        "meb",
        "mvf",
        "dw_scaled",
        "decomposition_residual",
        "one_sided",
    ]);
    for s in all {
        let eq = &s.equilibrium;
        table.push(vec![
            s.tau.into(),
            eq.labor.into(),
            eq.consumption.into(),
            eq.base.into(),
            eq.revenue.into(),
            s.welfare.into(),
            s.mr.into(),
            s.meb.into(),
            s.mvf.into(),
            s.dw_scaled.into(),
            s.decomposition_residual().into(),
            s.step_underflow().into(),
        ]);
    }
    match ctx.emit_table(&table) {
        Ok(()) => ExitStatus::Success,
        Err(e) => ctx.input_error(e),
    }
}

pub(super) fn oracle(ctx: &mut Ctx) -> ExitStatus {
    let econ = try_input!(ctx, ctx.config.economy());
    let sol = try_solve!(ctx, solve_optimal_tax(&econ));
    let o = try_solve!(ctx, brute_force_oracle(&econ, ctx.config.run.oracle_step));
    let mut r = Report::default();
    r.add("theta", econ.theta())
        .add("regime", sol.regime.to_string())
        .add("tau_star", sol.tau_star)
        .add("welfare", sol.w_star)
        .add("oracle_tau_argmax", o.tau_argmax)
        .add("oracle_welfare", o.w_max)
        .add("tau_gap", (sol.tau_star - o.tau_argmax).abs())
        .add("grid_step", o.grid_step)
        .add("grid_points", o.points as f64);
    ctx.emit_report(&r)
}

struct Check {
    name: &'static str,
    value: f64,
    tolerance: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

pub(super) fn verify(ctx: &mut Ctx) -> ExitStatus {
    let econ = try_input!(ctx, ctx.config.economy());
    let run = &ctx.config.run;
    let grid = tau_grid(DECOMPOSITION_SPAN * econ.tau_max(), DECOMPOSITION_POINTS);
    let mut checks = vec![Check {
        name: "decomposition",
        value: try_solve!(ctx, check_decomposition(&econ, &grid)),
        tolerance: DECOMPOSITION_TOL,
    }];
    let sol = try_solve!(ctx, solve_optimal_tax(&econ));
    let o = try_solve!(ctx, brute_force_oracle(&econ, run.oracle_step));
    checks.push(Check {
        name: "oracle",
        value: (sol.tau_star - o.tau_argmax).abs(),
        tolerance: run.oracle_tolerance,
    });
    if econ.mode() == TaxMode::IsoelasticNormalized {
        checks.push(Check {
            name: "crosscheck",
            value: try_solve!(ctx, iso_crosscheck(&econ)).max(),
            tolerance: CROSSCHECK_TOL,
        });
    }

    let mut table = Table::new(vec!["check", "value", "tolerance", "status"]);
    for c in &checks {
        table.push(vec![
            c.name.into(),
            c.value.into(),
            c.tolerance.into(),
            if c.passed() { "pass" } else { "FAIL" }.into(),
        ]);
    }
    if let Err(e) = ctx.emit_table(&table) {
        return ctx.input_error(e);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    if failed.is_empty() {
        ExitStatus::Success
    } else {
        let _ = writeln!(ctx.err, "error: verification failed: {}", failed.join(", "));
        ExitStatus::VerificationFailed
    }
}

pub(super) fn compare(ctx: &mut Ctx) -> ExitStatus {
    let thetas = match ctx.config.economy.theta {
        Some(theta) => vec![theta],
        None => try_input!(ctx, ctx.config.theta_grid()),
    };
    let config = ctx.config;
    let rows = par::try_map(&thetas, |&theta| {
        let econ = config
            .economy_at(theta)
            .map_err(|e| Error::DomainError(e.to_string()))?;
        let report = iso_crosscheck(&econ)?;
        let closed = iso_solution(report.y_star, theta)?;
        let numeric = solve_optimal_tax(&econ)?;
        Ok::<_, Error>(vec![
            theta.into(),
            report.y_star.into(),
            closed.theta_bar.into(),
            numeric.theta_bar.into(),
            closed.tau_star.into(),
            numeric.tau_star.into(),
            closed.g_star.into(),
            numeric.g_star.into(),
            report.threshold.into(),
            report.tau_star.into(),
            report.welfare_slope.into(),
        ])
    });
    let rows = try_solve!(ctx, rows);
    let mut table = Table::new(vec![
        "theta",
        "y_star",
        "closed_theta_bar",
        "numeric_theta_bar",
        "closed_tau_star",
        "numeric_tau_star",
        "closed_g_star",
        "numeric_g_star",
        "threshold_gap",
        "tau_star_gap",
        "slope_gap",
    ]);
    for row in rows {
        table.push(row);
    }
    match ctx.emit_table(&table) {
        Ok(()) => ExitStatus::Success,
        Err(e) => ctx.input_error(e),
    }
}

//! Private equilibrium: the allocation induced by a tax rate.

use crate::economy::{Economy, TaxMode};
use crate::error::{Error, Result};
use crate::numerics::{expand_bracket_upward, find_root, RootOptions};
use crate::par;
use crate::statistics::expectation;

/// Lower end of the labor bracket.
pub const LABOR_FLOOR: f64 = 1e-9;
const BRACKET_GROWTH: f64 = 2.0;
const BRACKET_STEPS: usize = 200;

/// Allocation at one tax rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub tau: f64,
    pub labor: f64,
    pub consumption: f64,
    pub output: f64,
    pub wage: f64,
    pub profit: f64,
    pub base: f64,
    pub revenue: f64,
    /// Household first-order-condition residual at `labor`.
    pub foc_residual: f64,
    pub iterations: usize,
}

fn check_tau(econ: &Economy, tau: f64) -> Result<()> {
    if !(tau >= 0.0 && tau < econ.tau_max() && tau < 1.0) {
        return Err(Error::DomainError(format!(
            "tax rate {tau} outside [0, {})",
            econ.tau_max()
        )));
    }
    Ok(())
}

/// Solves the household problem jointly with competitive factor pricing.
pub fn solve_household(econ: &Economy, tau: f64) -> Result<Equilibrium> {
    let solve = || {
        check_tau(econ, tau)?;
        match econ.mode() {
            TaxMode::IsoelasticNormalized => isoelastic(econ, tau),
            TaxMode::GeneralLaborTax => general(econ, tau),
        }
    };
    solve().map_err(|e| e.at_tau(tau))
}

/// Labor that maximizes `ln f(L) - phi(L)`, the tax-invariant labor supply
/// of the isoelastic normalization.
pub fn no_tax_labor(econ: &Economy) -> Result<(f64, usize)> {
    let f = econ.production();
    let u = econ.utility();
    let residual = |l: f64| {
        let (y, w) = f.eval(l).unwrap_or((f64::NAN, f64::NAN));
        w / y - u.marginal_disutility(l)
    };
    let root = bracketed(&residual)?;
    Ok((root.x, root.iterations))
}

fn bracketed<F: Fn(f64) -> f64>(residual: &F) -> Result<crate::numerics::Root> {
    let hi = expand_bracket_upward(residual, LABOR_FLOOR, 1.0, BRACKET_GROWTH, BRACKET_STEPS)
        .ok_or_else(|| Error::NoConvergence("could not bracket the labor first-order condition".into()))?;
    find_root(residual, LABOR_FLOOR, hi, RootOptions::default())
}

fn isoelastic(econ: &Economy, tau: f64) -> Result<Equilibrium> {
    let (labor, iterations) = no_tax_labor(econ)?;
    let (output, wage) = econ.production().eval(labor)?;
    let consumption = (1.0 - tau) * output;
    if !(consumption > 0.0) {
        return Err(Error::DegenerateAllocation { tau, consumption });
    }
    let base = output;
    let foc_residual = wage / output - econ.utility().marginal_disutility(labor);
    Ok(Equilibrium {
        tau,
        labor,
        consumption,
        output,
        wage,
        profit: output - wage * labor,
        base,
        revenue: tau * base,
        foc_residual,
        iterations,
    })
}

/// Allocation implied by labor `l` with competitive pricing:
/// `(C, Y, w, Pi, B)`.
fn general_allocation(econ: &Economy, tau: f64, labor: f64) -> Result<(f64, f64, f64, f64, f64)> {
    let (output, wage) = econ.production().eval(labor)?;
    let profit = output - wage * labor;
    let base = wage * labor;
    let consumption = (1.0 - tau) * base + profit;
    Ok((consumption, output, wage, profit, base))
}

/// `(1 - tau) w E[u_C] + E[u_L]` with `w = f'(L)` and the public good at
/// `T` (honest) or `0` (opportunistic).
fn general_foc(econ: &Economy, tau: f64, labor: f64) -> f64 {
    let Ok((consumption, _, wage, _, base)) = general_allocation(econ, tau, labor) else {
        return f64::NAN;
    };
    if !(consumption > 0.0) {
        return f64::NAN;
    }
    let theta = econ.theta();
    let u = econ.utility();
    let (Ok(honest), Ok(opp)) = (u.eval(consumption, tau * base, labor), u.eval(consumption, 0.0, labor)) else {
        return f64::NAN;
    };
    let e_uc = expectation(theta, honest.u_c, opp.u_c);
    let e_ul = expectation(theta, honest.u_l, opp.u_l);
    (1.0 - tau) * wage * e_uc + e_ul
}

fn general(econ: &Economy, tau: f64) -> Result<Equilibrium> {
    let residual = |l: f64| general_foc(econ, tau, l);
    let root = bracketed(&residual)?;
    let labor = root.x;
    let (consumption, output, wage, profit, base) = general_allocation(econ, tau, labor)?;
    if !(consumption > 0.0) {
        return Err(Error::DegenerateAllocation { tau, consumption });
    }
    Ok(Equilibrium {
        tau,
        labor,
        consumption,
        output,
        wage,
        profit,
        base,
        revenue: tau * base,
        foc_residual: root.residual,
        iterations: root.iterations,
    })
}

/// One point of a revenue curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevenuePoint {
    pub tau: f64,
    pub base: f64,
    pub revenue: f64,
}

/// Tax base and revenue along a grid of rates, in grid order.
pub fn revenue_curve(econ: &Economy, taus: &[f64]) -> Result<Vec<RevenuePoint>> {
    par::try_map(taus, |&tau| {
        solve_household(econ, tau).map(|eq| RevenuePoint {
            tau,
            base: eq.base,
            revenue: eq.revenue,
        })
    })
}

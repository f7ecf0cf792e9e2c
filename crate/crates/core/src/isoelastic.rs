//! Closed forms for log consumption utility, a linear public good and
//! tax-invariant labor. With output `Y*` fixed,
//!
//! ```text
//! W(tau) = ln((1 - tau) Y*) - phi(L0) + theta tau Y*
//! theta_bar = 1 / Y*
//! tau*(theta) = 1 - 1 / (theta Y*),   G*(theta) = Y* - 1 / theta   (theta > theta_bar)
//! ```
//!
//! These double as an independent check on the numerical pipeline.

use crate::economy::{Economy, TaxMode};
use crate::equilibrium::solve_household;
use crate::error::{Error, Result};
use crate::par;
use crate::planner::{solve_optimal_tax, trust_threshold, Regime};
use crate::statistics::sufficient_stats;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoClosedForm {
    pub y_star: f64,
    pub theta: f64,
    pub theta_bar: f64,
    pub regime: Regime,
    pub tau_star: f64,
    pub g_star: f64,
}

pub fn iso_threshold(y_star: f64) -> Result<f64> {
    if !(y_star > 0.0 && y_star.is_finite()) {
        return Err(Error::DomainError(format!("Y* must be positive, got {y_star}")));
    }
    Ok(1.0 / y_star)
}

pub fn iso_solution(y_star: f64, theta: f64) -> Result<IsoClosedForm> {
    let theta_bar = iso_threshold(y_star)?;
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::DomainError(format!("theta must lie in (0, 1), got {theta}")));
    }
    // theta <= 1/Y* is the same comparison as theta * Y* <= 1 up to rounding;
    // use the product so the corner matches the sign of dW/dtau at zero.
    let (regime, tau_star, g_star) = if theta * y_star <= 1.0 {
        (Regime::Corner, 0.0, 0.0)
    } else {
        (Regime::Interior, 1.0 - 1.0 / (theta * y_star), y_star - 1.0 / theta)
    };
    Ok(IsoClosedForm {
        y_star,
        theta,
        theta_bar,
        regime,
        tau_star,
        g_star,
    })
}

/// `W(tau)` for given `Y*` and labor disutility `phi(L0)`.
pub fn iso_welfare(y_star: f64, disutility: f64, theta: f64, tau: f64) -> f64 {
    ((1.0 - tau) * y_star).ln() - disutility + theta * tau * y_star
}

/// `dW/dtau = -1/(1 - tau) + theta Y*`.
pub fn iso_welfare_slope(y_star: f64, theta: f64, tau: f64) -> f64 {
    -1.0 / (1.0 - tau) + theta * y_star
}

/// Largest discrepancies between the closed forms and the numerical
/// pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrosscheckReport {
    pub y_star: f64,
    pub threshold: f64,
    pub tau_star: f64,
    pub welfare_slope: f64,
}

impl CrosscheckReport {
    pub fn max(&self) -> f64 {
        self.threshold.max(self.tau_star).max(self.welfare_slope)
    }
}

/// Points in the welfare-slope comparison grid.
pub const CROSSCHECK_POINTS: usize = 20;
/// The slope grid spans `[0, CROSSCHECK_SPAN * tau_max]`; central differences
/// of `ln(1 - tau)` lose accuracy like `(1 - tau)^-3` near one.
pub const CROSSCHECK_SPAN: f64 = 0.75;

pub fn iso_crosscheck(econ: &Economy) -> Result<CrosscheckReport> {
    if econ.mode() != TaxMode::IsoelasticNormalized {
        return Err(Error::ModeMismatch("closed forms need isoelastic-normalized mode"));
    }
    let y_star = solve_household(econ, 0.0)?.output;
    let theta = econ.theta();

    let numeric_bar = trust_threshold(econ)?.theta_bar;
    let threshold = (iso_threshold(y_star)? - numeric_bar).abs();

    let closed = iso_solution(y_star, theta)?;
    let numeric = solve_optimal_tax(econ)?;
    let tau_star = (closed.tau_star - numeric.tau_star).abs();

    let taus: Vec<f64> = (0..CROSSCHECK_POINTS)
        .map(|i| CROSSCHECK_SPAN * econ.tau_max() * i as f64 / (CROSSCHECK_POINTS - 1) as f64)
        .collect();
    let gaps = par::try_map(&taus, |&tau| {
        let s = sufficient_stats(econ, tau)?;
        Ok::<_, Error>((s.dw() - iso_welfare_slope(y_star, theta, tau)).abs())
    })?;
    let welfare_slope = gaps.into_iter().fold(0.0, f64::max);

    Ok(CrosscheckReport {
        y_star,
        threshold,
        tau_star,
        welfare_slope,
    })
}

//! Expected welfare and the sufficient statistics MR, MEB and MVF.
//!
//! All derivatives along the equilibrium map are three-point finite
//! differences with step `h = 1e-5 * max(1, tau)`. Near `tau = 0` or
//! `tau_max` the second-order one-sided stencil is used and the result is
//! flagged. Both MEB and MVF are normalised by the expected marginal utility
//! of consumption `E[u_C] = theta u_C(honest) + (1 - theta) u_C(opportunistic)`,
//! which makes
//!
//! ```text
//! dW/dtau / E[u_C] = -MEB + MVF * MR
//! ```
//!
//! an identity of the stencil arithmetic.

use crate::economy::Economy;
use crate::equilibrium::{solve_household, Equilibrium};
use crate::error::Result;
use crate::numerics::{Stencil, StencilKind};
use crate::par;

/// Base differentiation step; scaled by `max(1, tau)`.
pub const BASE_STEP: f64 = 1e-5;

pub fn default_step(tau: f64) -> f64 {
    BASE_STEP * tau.max(1.0)
}

/// Sufficient statistics at one tax rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SufficientStats {
    pub tau: f64,
    /// Marginal revenue `T'(tau)`.
    pub mr: f64,
    /// Marginal excess burden, consumption units per unit of `tau`.
    pub meb: f64,
    /// Trust-adjusted marginal value of public funds.
    pub mvf: f64,
    /// `dW/dtau` divided by `u_c_bar`.
    pub dw_scaled: f64,
    /// Expected marginal utility of consumption.
    pub u_c_bar: f64,
    pub uc_honest: f64,
    pub ug_honest: f64,
    pub ul_honest: f64,
    pub uc_opp: f64,
    pub ul_opp: f64,
    pub welfare: f64,
    pub equilibrium: Equilibrium,
    pub step: f64,
    pub stencil: StencilKind,
}

impl SufficientStats {
    /// True when a one-sided stencil had to be used near a domain edge.
    pub fn step_underflow(&self) -> bool {
        self.stencil != StencilKind::Central
    }

    /// `|dW_scaled - (-MEB + MVF * MR)|`.
    pub fn decomposition_residual(&self) -> f64 {
        (self.dw_scaled - (-self.meb + self.mvf * self.mr)).abs()
    }

    /// `|MEB / MR - MVF|`, the Ramsey-rule gap.
    pub fn ramsey_residual(&self) -> f64 {
        (self.meb / self.mr - self.mvf).abs()
    }

    /// Unscaled welfare derivative `dW/dtau`.
    pub fn dw(&self) -> f64 {
        self.dw_scaled * self.u_c_bar
    }
}

/// `theta * honest + (1 - theta) * opportunistic`, written so that equal
/// branches return the common value exactly.
pub(crate) fn expectation(theta: f64, honest: f64, opportunistic: f64) -> f64 {
    opportunistic + theta * (honest - opportunistic)
}

/// Expected welfare at an already-solved allocation.
pub fn welfare_at(econ: &Economy, eq: &Equilibrium) -> Result<f64> {
    let u = econ.utility();
    let theta = econ.theta();
    let honest = u.eval(eq.consumption, eq.revenue, eq.labor)?;
    let opp = u.eval(eq.consumption, 0.0, eq.labor)?;
    Ok(expectation(theta, honest.value, opp.value))
}

/// `W(tau) = theta u(C, T, L) + (1 - theta) u(C, 0, L)`.
pub fn expected_welfare(econ: &Economy, tau: f64) -> Result<f64> {
    let eq = solve_household(econ, tau)?;
    welfare_at(econ, &eq)
}

pub fn sufficient_stats(econ: &Economy, tau: f64) -> Result<SufficientStats> {
    sufficient_stats_with_step(econ, tau, default_step(tau))
}

/// [`sufficient_stats`] with an explicit differentiation step.
pub fn sufficient_stats_with_step(econ: &Economy, tau: f64, step: f64) -> Result<SufficientStats> {
    let stencil = Stencil::choose(tau, step, 0.0, econ.tau_max().min(1.0)).map_err(|e| e.at_tau(tau))?;
    let mut samples = [None; 3];
    for (slot, &point) in samples.iter_mut().zip(&stencil.points) {
        // The centre point of a central stencil has zero weight but is still
        // needed for marginal utilities.
        let eq = solve_household(econ, point)?;
        let w = welfare_at(econ, &eq)?;
        *slot = Some((eq, w));
    }
    let samples = samples.map(|s| s.expect("filled above"));
    let centre = match stencil.kind {
        StencilKind::Central => samples[1].0,
        StencilKind::Forward => samples[0].0,
        StencilKind::Backward => samples[2].0,
    };
    let welfare = match stencil.kind {
        StencilKind::Central => samples[1].1,
        StencilKind::Forward => samples[0].1,
        StencilKind::Backward => samples[2].1,
    };

    let d_c = stencil.apply(samples.map(|(eq, _)| eq.consumption));
    let d_l = stencil.apply(samples.map(|(eq, _)| eq.labor));
    let mr = stencil.apply(samples.map(|(eq, _)| eq.revenue));
    let d_w = stencil.apply(samples.map(|(_, w)| w));

    let theta = econ.theta();
    let u = econ.utility();
    let honest = u.eval(centre.consumption, centre.revenue, centre.labor)?;
    let opp = u.eval(centre.consumption, 0.0, centre.labor)?;
    let u_c_bar = expectation(theta, honest.u_c, opp.u_c);

    let private = theta * (honest.u_c * d_c + honest.u_l * d_l) + (1.0 - theta) * (opp.u_c * d_c + opp.u_l * d_l);
    Ok(SufficientStats {
        tau,
        mr,
        meb: -private / u_c_bar,
        mvf: theta * honest.u_g / u_c_bar,
        dw_scaled: d_w / u_c_bar,
        u_c_bar,
        uc_honest: honest.u_c,
        ug_honest: honest.u_g,
        ul_honest: honest.u_l,
        uc_opp: opp.u_c,
        ul_opp: opp.u_l,
        welfare,
        equilibrium: centre,
        step,
        stencil: stencil.kind,
    })
}

/// Maximum decomposition residual over a grid of tax rates.
pub fn check_decomposition(econ: &Economy, taus: &[f64]) -> Result<f64> {
    let residuals = par::try_map(taus, |&tau| {
        sufficient_stats(econ, tau).map(|s| s.decomposition_residual())
    })?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::economy::{build_economy, EconomyParams, ProductionSpec, TaxMode, UtilitySpec};

    fn iso(tfp: f64, alpha: f64, psi: f64, theta: f64) -> Economy {
        build_economy(&EconomyParams {
            utility: UtilitySpec::LogSeparable { psi, eta: 0.0, g: 1.0 },
            production: ProductionSpec::Power { tfp, alpha },
            theta,
            tau_max: 0.99,
            mode: TaxMode::IsoelasticNormalized,
        })
        .unwrap()
    }

    fn general(theta: f64) -> Economy {
        build_economy(&EconomyParams {
            utility: UtilitySpec::LogSeparable {
                psi: 1.0,
                eta: 1.0,
                g: 1.0,
            },
            production: ProductionSpec::Power { tfp: 1.0, alpha: 0.5 },
            theta,
            tau_max: 0.99,
            mode: TaxMode::GeneralLaborTax,
        })
        .unwrap()
    }

    #[test]
    fn isoelastic_welfare_values() {
        let econ = iso(2.0, 0.5, 1.0, 0.9);
        let w0 = expected_welfare(&econ, 0.0).unwrap();
        assert!((w0 - (-0.153_426_409_720_027_3)).abs() < 1e-12);
        let w3 = expected_welfare(&econ, 0.3).unwrap();
        assert!((w3 - (-0.128_263_691_818_023_94)).abs() < 1e-12);
    }

    #[test]
    fn welfare_at_zero_tax_ignores_trust() {
        for econ in [iso(2.0, 0.5, 1.0, 0.9), general(0.9)] {
            let a = expected_welfare(&econ, 0.0).unwrap();
            let b = expected_welfare(&econ.with_theta(0.1).unwrap(), 0.0).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn isoelastic_statistics_constants() {
        // psi = alpha puts L0 = 1 so Y* = tfp = 2.
        let econ = iso(2.0, 0.5, 0.5, 0.8);
        for tau in [0.0, 0.25, 0.6] {
            let s = sufficient_stats(&econ, tau).unwrap();
            assert!((s.mr - 2.0).abs() < 1e-8, "{s:?}");
            assert!((s.meb - 2.0).abs() < 1e-8);
            assert!((s.mvf - 0.8 * (1.0 - tau) * 2.0).abs() < 1e-12);
        }
        let s = sufficient_stats(&econ, 0.25).unwrap();
        assert!((s.dw() - (-4.0 / 3.0 + 1.6)).abs() < 1e-9);
    }

    #[test]
    fn decomposition_at_origin() {
        for econ in [iso(2.0, 0.5, 0.5, 0.8), general(0.3), general(0.9)] {
            let s = sufficient_stats(&econ, 0.0).unwrap();
            assert!(s.step_underflow());
            assert!(s.decomposition_residual() <= 1e-9, "{s:?}");
            assert_eq!(check_decomposition(&econ, &[0.0]).unwrap(), s.decomposition_residual());
        }
    }

    #[test]
    fn general_mode_origin_statistics() {
        // At tau = 0 the household FOC collapses MEB(0) and MR(0) onto the
        // base w L = alpha Y = 0.5 * 0.5^(1/4).
        let s = sufficient_stats(&general(0.9), 0.0).unwrap();
        let base = 0.5 * 0.5f64.powf(0.25);
        assert!((s.mr - base).abs() < 1e-9);
        assert!((s.meb - base).abs() < 1e-9);
    }

    #[test]
    fn decomposition_on_grids() {
        let grid: Vec<f64> = (0..50).map(|i| 0.8 * 0.99 * i as f64 / 49.0).collect();
        assert!(check_decomposition(&iso(2.0, 0.5, 0.5, 0.6), &grid).unwrap() <= 1e-8);
        let grid20: Vec<f64> = (0..20).map(|i| 0.9 * i as f64 / 19.0).collect();
        assert!(check_decomposition(&general(0.7), &grid20).unwrap() <= 1e-6);
    }

    #[test]
    fn backward_stencil_near_cap() {
        let econ = iso(2.0, 0.5, 0.5, 0.8);
        let s = sufficient_stats(&econ, 0.99 - 5e-6).unwrap();
        assert_eq!(s.stencil, StencilKind::Backward);
        assert!((s.mr - 2.0).abs() < 1e-6);
    }

    #[test]
    fn mvf_is_linear_in_trust_in_isoelastic_mode() {
        let a = sufficient_stats(&iso(2.0, 0.5, 0.5, 0.3), 0.4).unwrap();
        let b = sufficient_stats(&iso(2.0, 0.5, 0.5, 0.6), 0.4).unwrap();
        assert!((b.mvf / a.mvf - 2.0).abs() < 1e-12);
    }
}

//! Preferences, technology and trust: the primitives every other module
//! derives from.
//!
//! Utility is additively separable in three parts,
//!
//! ```text
//! u(C, G, L) = ln C - phi(L) + v(G),   phi(L) = psi * L^(1+eta) / (1+eta)
//! ```
//!
//! with `v(G) = g * G` (log-separable) or `v(G) = g * G^(1-gamma) / (1-gamma)`
//! (power public good). Technology is `f(L) = A * L^alpha`.

use crate::error::{Error, Result};

/// Household preferences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UtilitySpec {
    /// `ln C - phi(L) + g * G`.
    LogSeparable { psi: f64, eta: f64, g: f64 },
    /// `ln C - phi(L) + g * G^(1-gamma) / (1-gamma)`, `gamma` in `[0, 1)`.
    PowerG { psi: f64, eta: f64, g: f64, gamma: f64 },
}

/// Utility level and its first partials at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityEval {
    pub value: f64,
    pub u_c: f64,
    pub u_g: f64,
    pub u_l: f64,
}

impl UtilitySpec {
    fn labor_params(&self) -> (f64, f64) {
        match *self {
            UtilitySpec::LogSeparable { psi, eta, .. } | UtilitySpec::PowerG { psi, eta, .. } => (psi, eta),
        }
    }

    /// Weight `g` on the public good.
    pub fn public_good_weight(&self) -> f64 {
        match *self {
            UtilitySpec::LogSeparable { g, .. } | UtilitySpec::PowerG { g, .. } => g,
        }
    }

    /// Labor disutility `phi(L)`.
    pub fn disutility(&self, labor: f64) -> f64 {
        let (psi, eta) = self.labor_params();
        psi * labor.powf(1.0 + eta) / (1.0 + eta)
    }

    /// Marginal disutility `phi'(L)`.
    pub fn marginal_disutility(&self, labor: f64) -> f64 {
        let (psi, eta) = self.labor_params();
        psi * labor.powf(eta)
    }

    /// Value of the public good `v(G)` and its derivative. At `G = 0` the
    /// derivative is `+inf` whenever `gamma > 0`.
    fn public_good(&self, g_level: f64) -> (f64, f64) {
        match *self {
            UtilitySpec::LogSeparable { g, .. } => (g * g_level, g),
            UtilitySpec::PowerG { g, gamma, .. } => {
                let value = g * g_level.powf(1.0 - gamma) / (1.0 - gamma);
                let slope = if g_level == 0.0 && gamma > 0.0 {
                    f64::INFINITY
                } else {
                    g * g_level.powf(-gamma)
                };
                (value, slope)
            }
        }
    }

    /// Utility and analytic first partials at `(C, G, L)`.
    pub fn eval(&self, consumption: f64, public_good: f64, labor: f64) -> Result<UtilityEval> {
        if !(consumption > 0.0) {
            return Err(Error::DomainError(format!(
                "consumption must be positive, got {consumption}"
            )));
        }
        if !(public_good >= 0.0) {
            return Err(Error::DomainError(format!(
                "public good must be non-negative, got {public_good}"
            )));
        }
        if !(labor >= 0.0) {
            return Err(Error::DomainError(format!("labor must be non-negative, got {labor}")));
        }
        let (v, v_prime) = self.public_good(public_good);
        Ok(UtilityEval {
            value: consumption.ln() - self.disutility(labor) + v,
            u_c: 1.0 / consumption,
            u_g: v_prime,
            u_l: -self.marginal_disutility(labor),
        })
    }

    fn validate(&self) -> Result<()> {
        let (psi, eta) = self.labor_params();
        check_finite("psi", psi)?;
        check_finite("eta", eta)?;
        check_finite("g", self.public_good_weight())?;
        if psi <= 0.0 {
            return Err(invalid("psi", psi, "psi > 0"));
        }
        if eta < 0.0 {
            return Err(invalid("eta", eta, "eta >= 0"));
        }
        if self.public_good_weight() <= 0.0 {
            return Err(invalid("g", self.public_good_weight(), "g > 0"));
        }
        if let UtilitySpec::PowerG { gamma, .. } = *self {
            check_finite("gamma", gamma)?;
            if !(0.0..1.0).contains(&gamma) {
                return Err(invalid("gamma", gamma, "gamma in [0, 1)"));
            }
        }
        Ok(())
    }
}

/// Production technology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProductionSpec {
    /// `f(L) = tfp * L^alpha` with `0 < alpha < 1`.
    Power { tfp: f64, alpha: f64 },
}

impl ProductionSpec {
    /// Output `f(L)` and the competitive wage `f'(L)`. The wage at `L = 0`
    /// is `+inf`.
    pub fn eval(&self, labor: f64) -> Result<(f64, f64)> {
        if !(labor >= 0.0) {
            return Err(Error::DomainError(format!("labor must be non-negative, got {labor}")));
        }
        let ProductionSpec::Power { tfp, alpha } = *self;
        if labor == 0.0 {
            return Ok((0.0, f64::INFINITY));
        }
        let output = tfp * labor.powf(alpha);
        Ok((output, alpha * output / labor))
    }

    /// Elasticity `L f'(L) / f(L)`; constant for the power family.
    pub fn labor_share(&self) -> f64 {
        let ProductionSpec::Power { alpha, .. } = *self;
        alpha
    }

    fn validate(&self) -> Result<()> {
        let ProductionSpec::Power { tfp, alpha } = *self;
        check_finite("tfp", tfp)?;
        check_finite("alpha", alpha)?;
        if tfp <= 0.0 {
            return Err(invalid("tfp", tfp, "tfp > 0"));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(invalid("alpha", alpha, "alpha in (0, 1)"));
        }
        Ok(())
    }
}

/// How the household problem responds to the tax rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaxMode {
    /// Labor is pinned at the no-tax optimum `argmax ln f(L) - phi(L)`;
    /// the tax falls on total output.
    IsoelasticNormalized,
    /// Proportional labor-income tax with profits rebated lump-sum.
    GeneralLaborTax,
}

/// Raw, unvalidated parameter set accepted by [`build_economy`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EconomyParams {
    pub utility: UtilitySpec,
    pub production: ProductionSpec,
    pub theta: f64,
    pub tau_max: f64,
    pub mode: TaxMode,
}

/// A validated, immutable economy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Economy {
    utility: UtilitySpec,
    production: ProductionSpec,
    theta: f64,
    tau_max: f64,
    mode: TaxMode,
}

/// Validates `params` and freezes them into an [`Economy`].
pub fn build_economy(params: &EconomyParams) -> Result<Economy> {
    params.utility.validate()?;
    params.production.validate()?;
    check_finite("theta", params.theta)?;
    check_finite("tau_max", params.tau_max)?;
    if !(params.theta > 0.0 && params.theta < 1.0) {
        return Err(invalid("theta", params.theta, "theta in (0, 1)"));
    }
    if !(params.tau_max > 0.0 && params.tau_max <= 1.0) {
        return Err(invalid("tau_max", params.tau_max, "tau_max in (0, 1]"));
    }
    if params.mode == TaxMode::IsoelasticNormalized {
        match params.utility {
            UtilitySpec::LogSeparable { g: 1.0, .. } => {}
            UtilitySpec::LogSeparable { .. } => {
                return Err(Error::IncompatibleMode(
                    "isoelastic-normalized mode requires a public-good weight g = 1",
                ))
            }
            UtilitySpec::PowerG { .. } => {
                return Err(Error::IncompatibleMode(
                    "isoelastic-normalized mode requires log-separable utility",
                ))
            }
        }
    }
    Ok(Economy {
        utility: params.utility,
        production: params.production,
        theta: params.theta,
        tau_max: params.tau_max,
        mode: params.mode,
    })
}

impl Economy {
    pub fn utility(&self) -> &UtilitySpec {
        &self.utility
    }

    pub fn production(&self) -> &ProductionSpec {
        &self.production
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    pub fn mode(&self) -> TaxMode {
        self.mode
    }

    pub fn params(&self) -> EconomyParams {
        EconomyParams {
            utility: self.utility,
            production: self.production,
            theta: self.theta,
            tau_max: self.tau_max,
            mode: self.mode,
        }
    }

    /// Same economy with a different trust level.
    pub fn with_theta(&self, theta: f64) -> Result<Economy> {
        build_economy(&EconomyParams { theta, ..self.params() })
    }

    /// Same economy with a different tax cap.
    pub fn with_tau_max(&self, tau_max: f64) -> Result<Economy> {
        build_economy(&EconomyParams {
            tau_max,
            ..self.params()
        })
    }
}

/// Free-function form of [`UtilitySpec::eval`].
pub fn eval_utility(u: &UtilitySpec, consumption: f64, public_good: f64, labor: f64) -> Result<UtilityEval> {
    u.eval(consumption, public_good, labor)
}

/// Free-function form of [`ProductionSpec::eval`].
pub fn eval_production(f: &ProductionSpec, labor: f64) -> Result<(f64, f64)> {
    f.eval(labor)
}

fn invalid(field: &'static str, value: f64, bound: &'static str) -> Error {
    Error::InvalidParameter { field, value, bound }
}

fn check_finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, value, "finite value"))
    }
}

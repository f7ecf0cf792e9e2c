#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use trust_ramsey::{build_economy, Economy, EconomyParams, ProductionSpec, TaxMode, UtilitySpec};

/// Isoelastic economy with `psi = alpha`, `eta = 0`, hence `L0 = 1` and
/// `Y* = tfp`.
pub fn iso(y_star: f64, theta: f64) -> Economy {
    build_economy(&EconomyParams {
        utility: UtilitySpec::LogSeparable {
            psi: 0.5,
            eta: 0.0,
            g: 1.0,
        },
        production: ProductionSpec::Power {
            tfp: y_star,
            alpha: 0.5,
        },
        theta,
        tau_max: 0.99,
        mode: TaxMode::IsoelasticNormalized,
    })
    .unwrap()
}

pub fn general(psi: f64, eta: f64, g: f64, tfp: f64, alpha: f64, theta: f64) -> Economy {
    build_economy(&EconomyParams {
        utility: UtilitySpec::LogSeparable { psi, eta, g },
        production: ProductionSpec::Power { tfp, alpha },
        theta,
        tau_max: 0.99,
        mode: TaxMode::GeneralLaborTax,
    })
    .unwrap()
}

/// Random isoelastic economy; `Y*` ranges over roughly `[1.2, 6]`.
pub fn random_iso(rng: &mut ChaCha8Rng, theta: f64) -> Economy {
    let alpha = rng.random_range(0.3..0.8);
    let eta = rng.random_range(0.0..2.0);
    let psi = rng.random_range(0.5..1.5) * alpha;
    let tfp = rng.random_range(1.2..5.0);
    build_economy(&EconomyParams {
        utility: UtilitySpec::LogSeparable { psi, eta, g: 1.0 },
        production: ProductionSpec::Power { tfp, alpha },
        theta,
        tau_max: 0.99,
        mode: TaxMode::IsoelasticNormalized,
    })
    .unwrap()
}

pub fn random_general(rng: &mut ChaCha8Rng, theta: f64) -> Economy {
    general(
        rng.random_range(0.5..2.0),
        rng.random_range(0.5..2.0),
        rng.random_range(1.5..4.0),
        rng.random_range(0.8..2.0),
        rng.random_range(0.3..0.7),
        theta,
    )
}

pub fn config_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs")
}

pub fn shipped_configs() -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(config_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    paths
}

//! Noise model and device parameter ingestion.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SimError;

/// Stochastic Pauli noise parameters.
///
/// After every one-qubit gate a uniformly random Pauli from {X, Y, Z} fires
/// with probability `p1`; after every two-qubit gate a uniformly random
/// non-identity two-qubit Pauli (15 choices) fires with probability
/// `p2 * m`, where `m` is the swap error multiplier for router-inserted
/// SWAPs and 1 otherwise. A SWAP counts as three CNOT applications for
/// noise purposes (three independent draws). At measurement each bit flips
/// independently with probability `readout`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    p1: f64,
    p2: f64,
    readout: f64,
    #[serde(default = "default_multiplier")]
    swap_error_multiplier: f64,
}

fn default_multiplier() -> f64 {
    1.0
}

fn check_probability(what: &'static str, value: f64) -> Result<(), SimError> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        return Err(SimError::InvalidProbability { what, value });
    }
    Ok(())
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, readout: f64) -> Result<Self, SimError> {
        check_probability("p1", p1)?;
        check_probability("p2", p2)?;
        check_probability("readout", readout)?;
        Ok(NoiseModel {
            p1,
            p2,
            readout,
            swap_error_multiplier: 1.0,
        })
    }

    pub fn noiseless() -> Self {
        NoiseModel {
            p1: 0.0,
            p2: 0.0,
            readout: 0.0,
            swap_error_multiplier: 1.0,
        }
    }

    pub fn with_swap_multiplier(mut self, m: f64) -> Result<Self, SimError> {
        if !m.is_finite() || m < 1.0 {
            return Err(SimError::InvalidMultiplier(m));
        }
        self.swap_error_multiplier = m;
        Ok(self)
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn readout(&self) -> f64 {
        self.readout
    }

    pub fn swap_error_multiplier(&self) -> f64 {
        self.swap_error_multiplier
    }

    /// Per-draw error probability for a two-qubit gate.
    pub fn effective_p2(&self, router_inserted: bool) -> f64 {
        if router_inserted {
            self.p2 * self.swap_error_multiplier
        } else {
            self.p2
        }
    }

    /// Rejects models whose boosted two-qubit error is no longer a
    /// probability.
    pub fn validate_effective(&self) -> Result<(), SimError> {
        let boosted = self.p2 * self.swap_error_multiplier;
        if boosted > 1.0 {
            return Err(SimError::EffectiveErrorOverUnity(boosted));
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.readout == 0.0
    }
}

/// Published per-device performance metrics. Gate and readout errors are
/// percentages; T1/T2 and gate speed are carried verbatim but unused by
/// the depolarizing noise model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    pub name: String,
    pub t1: String,
    pub t2: String,
    pub two_qubit_gate_speed: String,
    pub one_qubit_gate_error_pct: f64,
    pub two_qubit_gate_error_pct: f64,
    pub readout_error_pct: f64,
    pub topology: String,
    pub native_gates: String,
}

impl DeviceParams {
    pub fn validate(&self) -> Result<(), SimError> {
        for (what, value) in [
            ("one_qubit_gate_error_pct", self.one_qubit_gate_error_pct),
            ("two_qubit_gate_error_pct", self.two_qubit_gate_error_pct),
            ("readout_error_pct", self.readout_error_pct),
        ] {
            if !(0.0..=100.0).contains(&value) || value.is_nan() {
                return Err(SimError::PercentOutOfRange { what, value });
            }
        }
        Ok(())
    }
}

/// Converts published percentages into a noise model:
/// `p1 = 1q%/100`, `p2 = 2q%/100`, `readout = readout%/100`.
pub fn noise_model_from_device(
    params: &DeviceParams,
    swap_error_multiplier: f64,
) -> Result<NoiseModel, SimError> {
    params.validate()?;
    NoiseModel::new(
        params.one_qubit_gate_error_pct / 100.0,
        params.two_qubit_gate_error_pct / 100.0,
        params.readout_error_pct / 100.0,
    )?
    .with_swap_multiplier(swap_error_multiplier)
}

const BUILTIN_DEVICES_JSON: &str = include_str!("../../data/devices.json");

/// The six devices shipped with the crate.
pub fn builtin_devices() -> Vec<DeviceParams> {
    serde_json::from_str(BUILTIN_DEVICES_JSON).expect("embedded devices.json is valid")
}

/// Case- and punctuation-insensitive lookup among the built-in devices
/// ("aria-1" and "Aria 1" both resolve).
pub fn find_device(name: &str) -> Result<DeviceParams, SimError> {
    let norm = |s: &str| {
        s.chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase()
    };
    let wanted = norm(name);
    builtin_devices()
        .into_iter()
        .find(|d| norm(&d.name) == wanted)
        .ok_or_else(|| SimError::UnknownDevice(name.to_string()))
}

/// Loads device parameters from a JSON file with the same schema as the
/// shipped `devices.json`.
pub fn load_devices(path: &Path) -> Result<Vec<DeviceParams>, SimError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SimError::DeviceFile(format!("{}: {e}", path.display())))?;
    let devices: Vec<DeviceParams> = serde_json::from_str(&text)
        .map_err(|e| SimError::DeviceFile(format!("{}: {e}", path.display())))?;
    for d in &devices {
        d.validate()?;
    }
    Ok(devices)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_devices_cover_all_six() {
        let names: Vec<String> = builtin_devices().into_iter().map(|d| d.name).collect();
        assert_eq!(
            names,
            ["Brisbane", "Osaka", "Kyoto", "Forte", "Aria 1", "Harmony"]
        );
    }

    fn assert_pct(actual: f64, expected: f64) {
        assert!((actual - expected).abs() < 1e-15, "{actual} != {expected}");
    }

    #[test]
    fn brisbane_model_values() {
        let model = noise_model_from_device(&find_device("Brisbane").unwrap(), 1.0).unwrap();
        assert_pct(model.p1(), 0.0003);
        assert_pct(model.p2(), 0.0074);
        assert_pct(model.readout(), 0.0132);
    }

    #[test]
    fn aria_model_values() {
        let model = noise_model_from_device(&find_device("aria-1").unwrap(), 1.0).unwrap();
        assert_pct(model.p1(), 0.0006);
        assert_pct(model.p2(), 0.0857);
        assert_pct(model.readout(), 0.0052);
    }

    #[test]
    fn harmony_model_values() {
        let model = noise_model_from_device(&find_device("Harmony").unwrap(), 1.0).unwrap();
        assert_pct(model.p1(), 0.0067);
        assert_pct(model.p2(), 0.0307);
        assert_pct(model.readout(), 0.0042);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(NoiseModel::new(-0.1, 0.0, 0.0).is_err());
        assert!(NoiseModel::new(0.0, 1.5, 0.0).is_err());
        assert!(NoiseModel::new(0.0, 0.0, 0.0).unwrap().with_swap_multiplier(0.5).is_err());
        let mut device = find_device("Kyoto").unwrap();
        device.readout_error_pct = 120.0;
        assert!(noise_model_from_device(&device, 1.0).is_err());
    }

    #[test]
    fn boosted_error_over_unity_is_rejected() {
        let model = NoiseModel::new(0.0, 0.3, 0.0)
            .unwrap()
            .with_swap_multiplier(4.0)
            .unwrap();
        assert!(matches!(
            model.validate_effective().unwrap_err(),
            SimError::EffectiveErrorOverUnity(p) if p > 1.0
        ));
    }
}

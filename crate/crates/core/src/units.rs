//! Unit handling. Internally ħ = 1 and k_B = 1; energies are in units of the
//! chosen frequency scale. SI output multiplies by the Boltzmann constant.

use serde::{Deserialize, Serialize};

/// Boltzmann constant in J/K (exact since the 2019 SI redefinition).
pub const BOLTZMANN_SI: f64 = 1.380_649e-23;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    #[serde(alias = "NATURAL")]
    Natural,
    #[serde(alias = "SI")]
    Si,
}

impl Units {
    /// Value of k_B in this unit system.
    pub fn boltzmann(self) -> f64 {
        match self {
            Units::Natural => 1.0,
            Units::Si => BOLTZMANN_SI,
        }
    }

    /// Converts a temperature into an energy k_B·T.
    pub fn thermal_energy(self, temperature: f64) -> f64 {
        self.boltzmann() * temperature
    }
}

//! Normalized run settings: every subcommand folds its flags into a
//! [`RunConfig`] and validates it before touching any input file.

use std::path::PathBuf;

/// One scenario run as seen from the command line.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: String,
    pub inputs: Vec<PathBuf>,
    /// Divisor or ladder height H.
    pub height: Option<f64>,
    /// Atom cutoff T.
    pub cutoff: Option<f64>,
    /// Zero-table cap N.
    pub zero_cap: Option<usize>,
    /// Prime limit X.
    pub prime_limit: Option<u64>,
    pub test_spec: Option<String>,
    pub tolerance: f64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Enforces the config invariants: truncations positive, tolerance
    /// strictly inside (0, 1).
    pub fn validate(&self) -> Result<(), String> {
        for (name, value) in [("height H", self.height), ("cutoff T", self.cutoff)] {
            if let Some(v) = value {
                if !(v.is_finite() && v > 0.0) {
                    return Err(format!(
                        "{name} must be positive and finite, got {v} (scenario {})",
                        self.scenario
                    ));
                }
            }
        }
        if self.zero_cap == Some(0) {
            return Err(format!(
                "zero cap N must be at least 1 (scenario {})",
                self.scenario
            ));
        }
        if let Some(x) = self.prime_limit {
            if x < 2 {
                return Err(format!(
                    "prime limit X = {x} leaves no primes (scenario {})",
                    self.scenario
                ));
            }
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(format!(
                "tolerance must lie strictly inside (0, 1), got {} (scenario {})",
                self.tolerance, self.scenario
            ));
        }
        Ok(())
    }
}

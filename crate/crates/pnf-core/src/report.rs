//! Uniform pass/fail records for formula checks.
//!
//! Every end-to-end scenario reduces to comparing two complex numbers
//! that the formula says are equal.  The report freezes both sides, the
//! error measures, and every truncation knob that produced them, so a
//! failure is diagnosable as truncation versus bug from the JSON alone.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Default relative tolerance for floating scenarios.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

// guards rel_err against 0/0 when both sides vanish
const REL_FLOOR: f64 = 1e-300;

mod complex_parts {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Parts {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Parts { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let p = Parts::deserialize(d)?;
        Ok(Complex64::new(p.re, p.im))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub scenario: String,
    #[serde(with = "complex_parts")]
    pub lhs: Complex64,
    #[serde(with = "complex_parts")]
    pub rhs: Complex64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// All truncation and tolerance settings that shaped the run.
    pub params: BTreeMap<String, serde_json::Value>,
}

impl VerificationReport {
    /// Builds a report; `abs_err`, `rel_err` and `pass` are derived,
    /// never supplied.
    pub fn new(
        scenario: impl Into<String>,
        lhs: Complex64,
        rhs: Complex64,
        tolerance: f64,
        params: BTreeMap<String, serde_json::Value>,
    ) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = abs_err / lhs.norm().max(rhs.norm()).max(REL_FLOOR);
        VerificationReport {
            scenario: scenario.into(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            tolerance,
            pass: rel_err <= tolerance,
            params,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Convenience for assembling the params map from heterogeneous values.
pub fn params_from(entries: &[(&str, serde_json::Value)]) -> BTreeMap<String, serde_json::Value> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

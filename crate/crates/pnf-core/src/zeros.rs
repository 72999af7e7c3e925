//! Ingesting tables of Riemann zeta zero ordinates.
//!
//! Zeros are ingested, never computed.  The format is the de-facto one
//! used by published tables: one positive decimal ordinate per line,
//! ascending, with `#` comment lines allowed.  Multiple zeros would be
//! represented by repeated lines, so equal neighbours are accepted;
//! any strictly descending step is a corrupt table.

use std::io::{BufRead, BufReader};
use std::path::Path;
use thiserror::Error;

// any genuine zeta table starts with the first Gram-verified ordinate
const FIRST_ZERO_WINDOW: (f64, f64) = (14.13, 14.14);

#[derive(Debug, Error)]
pub enum ZeroTableError {
    #[error("cannot read zero table: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: cannot parse {text:?} as a positive ordinate")]
    Format { line: usize, text: String },
    #[error("line {line}: ordinate {value} below its predecessor {previous}")]
    Order {
        line: usize,
        value: f64,
        previous: f64,
    },
    #[error("first ordinate {value} is outside ({:.2}, {:.2}); not a zeta zero table", FIRST_ZERO_WINDOW.0, FIRST_ZERO_WINDOW.1)]
    NotZetaTable { value: f64 },
}

/// Ordinates of nontrivial zeros `rho = 1/2 + i gamma`, ascending.
#[derive(Debug, Clone)]
pub struct ZeroTable {
    gammas: Vec<f64>,
    source_path: String,
}

impl ZeroTable {
    /// Wraps ordinates already held in memory, bypassing file checks.
    pub fn from_ordinates(gammas: Vec<f64>) -> ZeroTable {
        ZeroTable {
            gammas,
            source_path: "<memory>".to_string(),
        }
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn count(&self) -> usize {
        self.gammas.len()
    }

    pub fn source_path(&self) -> &str {
        &self.source_path
    }

    /// A prefix view sharing the validated source, for truncation
    /// studies.
    pub fn truncated(&self, count: usize) -> ZeroTable {
        ZeroTable {
            gammas: self.gammas[..count.min(self.gammas.len())].to_vec(),
            source_path: self.source_path.clone(),
        }
    }
}

pub fn load_zeta_zeros(path: &Path) -> Result<ZeroTable, ZeroTableError> {
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut gammas = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let value: f64 = text.parse().map_err(|_| ZeroTableError::Format {
            line: idx + 1,
            text: text.to_string(),
        })?;
        if !value.is_finite() || value <= 0.0 {
            return Err(ZeroTableError::Format {
                line: idx + 1,
                text: text.to_string(),
            });
        }
        if let Some(&previous) = gammas.last() {
            if value < previous {
                return Err(ZeroTableError::Order {
                    line: idx + 1,
                    value,
                    previous,
                });
            }
        }
        gammas.push(value);
    }
    if let Some(&first) = gammas.first() {
        if first <= FIRST_ZERO_WINDOW.0 || first >= FIRST_ZERO_WINDOW.1 {
            return Err(ZeroTableError::NotZetaTable { value: first });
        }
    }
    Ok(ZeroTable {
        gammas,
        source_path: path.display().to_string(),
    })
}

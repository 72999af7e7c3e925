//! Plot-ready CSV dumps of divisors and atom measures.
//!
//! Floats are written in Rust's shortest round-trip notation, so a
//! re-imported dump compares bit-for-bit equal to the in-memory values.

use pnf_core::{AtomMeasure, Complex64, Divisor, DivisorPoint};
use std::fmt::Write as _;

pub const DIVISOR_HEADER: &str = "re,im,mult";
pub const ATOMS_HEADER: &str = "frequency,weight_re,weight_im";

pub fn divisor_csv(divisor: &Divisor) -> String {
    let mut out = String::from(DIVISOR_HEADER);
    out.push('\n');
    for p in divisor.points() {
        writeln!(out, "{},{},{}", p.location.re, p.location.im, p.multiplicity)
            .expect("string write");
    }
    out
}

pub fn parse_divisor_csv(text: &str) -> Result<Vec<DivisorPoint>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == DIVISOR_HEADER => {}
        other => return Err(format!("expected header {DIVISOR_HEADER:?}, got {other:?}")),
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            let [re, im, mult] = fields[..] else {
                return Err(format!("line {}: expected 3 fields", i + 2));
            };
            Ok(DivisorPoint {
                location: Complex64::new(
                    re.trim().parse().map_err(|e| format!("line {}: {e}", i + 2))?,
                    im.trim().parse().map_err(|e| format!("line {}: {e}", i + 2))?,
                ),
                multiplicity: mult.trim().parse().map_err(|e| format!("line {}: {e}", i + 2))?,
            })
        })
        .collect()
}

pub fn atoms_csv(atoms: &AtomMeasure) -> String {
    let mut out = String::from(ATOMS_HEADER);
    out.push('\n');
    for atom in &atoms.atoms {
        writeln!(out, "{},{},{}", atom.frequency, atom.weight.re, atom.weight.im)
            .expect("string write");
    }
    out
}

pub fn parse_atoms_csv(text: &str) -> Result<Vec<(f64, Complex64)>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == ATOMS_HEADER => {}
        other => return Err(format!("expected header {ATOMS_HEADER:?}, got {other:?}")),
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            let [freq, re, im] = fields[..] else {
                return Err(format!("line {}: expected 3 fields", i + 2));
            };
            Ok((
                freq.trim().parse().map_err(|e| format!("line {}: {e}", i + 2))?,
                Complex64::new(
                    re.trim().parse().map_err(|e| format!("line {}: {e}", i + 2))?,
                    im.trim().parse().map_err(|e| format!("line {}: {e}", i + 2))?,
                ),
            ))
        })
        .collect()
}

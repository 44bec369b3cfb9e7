//! Flat `key = value` parameter files.
//!
//! One key per line, `#` starts a comment, blank lines are ignored. Keys are
//! the field names of [`SystemParams`] plus the drive keys `epsilon`,
//! `kappa`, `kappa_m` and `theta`. Unknown or repeated keys are errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::scalar::Real;

const SYSTEM_KEYS: [&str; 9] = [
    "omega", "omega_m", "lambda_v", "lambda_h", "g_h", "g_v", "mass", "hbar", "k_b",
];
const DRIVE_KEYS: [&str; 4] = ["epsilon", "kappa", "kappa_m", "theta"];

/// Drive keys present in a parameter file.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DriveKeys<T> {
    pub epsilon: Option<T>,
    pub kappa: Option<T>,
    pub kappa_m: Option<T>,
    pub theta: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamFile<T> {
    pub system: SystemParams<T>,
    pub drive: DriveKeys<T>,
}

/// Parses `text`, overriding the fields of `base` that appear in it.
pub fn parse_params<T: Real>(text: &str, base: SystemParams<T>) -> Result<ParamFile<T>> {
    let mut seen = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::ParamFile {
            line: line_no,
            reason: format!("expected `key = value`, found `{line}`"),
        })?;
        let key = key.trim();
        if !SYSTEM_KEYS.contains(&key) && !DRIVE_KEYS.contains(&key) {
            return Err(Error::ParamFile {
                line: line_no,
                reason: format!("unknown key `{key}`"),
            });
        }
        let value: f64 = value.trim().parse().map_err(|_| Error::ParamFile {
            line: line_no,
            reason: format!("`{}` is not a number", value.trim()),
        })?;
        if !value.is_finite() {
            return Err(Error::ParamFile {
                line: line_no,
                reason: format!("`{key}` must be finite"),
            });
        }
        if seen.insert(key.to_string(), value).is_some() {
            return Err(Error::ParamFile {
                line: line_no,
                reason: format!("duplicate key `{key}`"),
            });
        }
    }

    let get = |k: &str| seen.get(k).map(|&v| T::lit(v));
    let mut system = base;
    for (key, slot) in [
        ("omega", &mut system.omega),
        ("omega_m", &mut system.omega_m),
        ("lambda_v", &mut system.lambda_v),
        ("lambda_h", &mut system.lambda_h),
        ("g_h", &mut system.g_h),
        ("g_v", &mut system.g_v),
        ("mass", &mut system.mass),
        ("hbar", &mut system.hbar),
        ("k_b", &mut system.k_b),
    ] {
        if let Some(v) = get(key) {
            *slot = v;
        }
    }
    system.validate()?;
    Ok(ParamFile {
        system,
        drive: DriveKeys {
            epsilon: get("epsilon"),
            kappa: get("kappa"),
            kappa_m: get("kappa_m"),
            theta: get("theta"),
        },
    })
}

pub fn read_params<T: Real>(path: &Path, base: SystemParams<T>) -> Result<ParamFile<T>> {
    let text = std::fs::read_to_string(path)?;
    parse_params(&text, base)
}

/// Renders parameters in the same format [`parse_params`] reads.
pub fn format_params<T: Real>(file: &ParamFile<T>) -> String {
    let s = &file.system;
    let mut out = String::new();
    for (k, v) in [
        ("omega", s.omega),
        ("omega_m", s.omega_m),
        ("lambda_v", s.lambda_v),
        ("lambda_h", s.lambda_h),
        ("g_h", s.g_h),
        ("g_v", s.g_v),
        ("mass", s.mass),
        ("hbar", s.hbar),
        ("k_b", s.k_b),
    ] {
        let _ = writeln!(out, "{k} = {:e}", v.to_f64_lossy());
    }
    let d = &file.drive;
    for (k, v) in [
        ("epsilon", d.epsilon),
        ("kappa", d.kappa),
        ("kappa_m", d.kappa_m),
        ("theta", d.theta),
    ] {
        if let Some(v) = v {
            let _ = writeln!(out, "{k} = {:e}", v.to_f64_lossy());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_overrides_and_comments() {
        let text = "# fig 3\nomega = 12\n\n  g_v=0.1 # trailing\nkappa = 0.5\n";
        let f = parse_params(text, SystemParams::<f64>::fig3()).unwrap();
        assert_eq!(f.system.omega, 12.0);
        assert_eq!(f.system.g_v, 0.1);
        assert_eq!(f.system.lambda_v, 2.0);
        assert_eq!(f.drive.kappa, Some(0.5));
        assert_eq!(f.drive.epsilon, None);
    }

    #[test]
    fn rejects_unknown_duplicate_and_malformed() {
        let base = SystemParams::<f64>::fig3();
        assert!(matches!(
            parse_params("omega_M = 1", base),
            Err(Error::ParamFile { line: 1, .. })
        ));
        assert!(matches!(
            parse_params("omega = 1\nomega = 2", base),
            Err(Error::ParamFile { line: 2, .. })
        ));
        assert!(matches!(parse_params("omega 1", base), Err(Error::ParamFile { .. })));
        assert!(matches!(
            parse_params("omega = fast", base),
            Err(Error::ParamFile { .. })
        ));
        assert!(matches!(
            parse_params("mass = -1", base),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn format_round_trips() {
        let mut f = parse_params("", SystemParams::<f64>::fig6_si()).unwrap();
        f.drive.epsilon = Some(40e9);
        let g = parse_params(&format_params(&f), SystemParams::<f64>::fig3()).unwrap();
        assert_eq!(f, g);
    }
}

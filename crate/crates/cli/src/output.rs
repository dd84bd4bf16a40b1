//! Deterministic CSV/JSON artifacts with a provenance line.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// First 16 hex digits of the SHA-256 of the command name and resolved config.
pub fn config_hash<T: Serialize>(command: &str, config: &T) -> Result<String, CliError> {
    let json = serde_json::to_string(config).map_err(|e| CliError::Config(e.to_string()))?;
    let digest = Sha256::digest(format!("{command}\n{json}").as_bytes());
    Ok(digest.iter().take(8).fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    }))
}

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn provenance(hash: &str) -> String {
    format!("# fade {VERSION} {hash}")
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(hash: &str, header: &str) -> Self {
        Self {
            text: format!("{}\n{header}\n", provenance(hash)),
        }
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) {
        let mut first = true;
        for c in cells {
            if !first {
                self.text.push(',');
            }
            self.text.push_str(c.as_ref());
            first = false;
        }
        self.text.push('\n');
    }

    pub fn write(&self, dir: &Path, name: &str) -> Result<(), CliError> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(name), &self.text)?;
        Ok(())
    }
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
    fs::write(dir.join(name), text + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.0), "-2.0000000000000000e0");
        let x = 1.0 / 3.0;
        assert_eq!(num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = config_hash("run", &[1.0, 2.0]).unwrap();
        assert_eq!(a, config_hash("run", &[1.0, 2.0]).unwrap());
        assert_ne!(a, config_hash("run", &[1.0, 2.5]).unwrap());
        assert_ne!(a, config_hash("converge", &[1.0, 2.0]).unwrap());
        assert_eq!(a.len(), 16);
    }

    #[test]
    fn csv_layout() {
        let mut c = Csv::new("abc", "x,y");
        c.row(&["1", "2"]);
        assert_eq!(c.text, format!("# fade {VERSION} abc\nx,y\n1,2\n"));
    }
}

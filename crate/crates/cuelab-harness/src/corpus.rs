//! Symbol corpus files: one record per line, whitespace-separated fields in
//! the order
//!
//! ```text
//! theta theta_prime alpha1 alpha2 k1 k2 [t_re t_im]... beta1 beta2
//! ```
//!
//! with any number of 𝒯-coefficient pairs in the middle (inferred from the
//! token count). Lines starting with `#` and blank lines are skipped.

use crate::{io_err, Error, Result};
use cuelab::symbol::SymbolParams;
use cuelab::Complex64;
use std::path::Path;

/// The reference symbols shipped in corpus/default.txt: two generic
/// two-point records, a pure Fisher-Hartwig pair, a smooth symbol, and a
/// merged-angle record.
pub fn builtin() -> Vec<SymbolParams> {
    vec![
        SymbolParams {
            theta: 0.7,
            theta_prime: 2.3,
            alpha1: 0.6,
            alpha2: -0.4,
            k1: 2,
            k2: 3,
            t_coeffs: vec![Complex64::new(0.15, 0.1), Complex64::new(-0.05, 0.02)],
            beta1: 1.0,
            beta2: 0.5,
        },
        SymbolParams {
            theta: 4.0,
            theta_prime: 1.2,
            alpha1: -0.5,
            alpha2: 0.3,
            k1: 1,
            k2: 4,
            t_coeffs: vec![Complex64::new(0.2, -0.05)],
            beta1: 0.8,
            beta2: 1.2,
        },
        SymbolParams {
            theta: 0.5,
            theta_prime: 3.5,
            alpha1: 0.0,
            alpha2: 0.0,
            k1: 0,
            k2: 0,
            t_coeffs: vec![],
            beta1: 1.5,
            beta2: 0.7,
        },
        SymbolParams {
            theta: 2.0,
            theta_prime: 5.0,
            alpha1: 0.4,
            alpha2: 0.0,
            k1: 3,
            k2: 3,
            t_coeffs: vec![
                Complex64::new(0.1, 0.05),
                Complex64::new(-0.04, 0.08),
                Complex64::new(0.02, -0.03),
            ],
            beta1: 0.0,
            beta2: 0.0,
        },
        SymbolParams {
            theta: 1.3,
            theta_prime: 1.3,
            alpha1: 0.5,
            alpha2: 0.0,
            k1: 2,
            k2: 2,
            t_coeffs: vec![],
            beta1: 0.6,
            beta2: 0.9,
        },
    ]
}

pub fn parse(text: &str) -> Result<Vec<SymbolParams>> {
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        records.push(parse_record(line).map_err(|message| Error::CorpusParse {
            line: idx + 1,
            message,
        })?);
    }
    Ok(records)
}

fn parse_record(line: &str) -> std::result::Result<SymbolParams, String> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() < 8 {
        return Err(format!("expected at least 8 fields, found {}", tokens.len()));
    }
    if tokens.len() % 2 != 0 {
        return Err("𝒯 coefficients must come in re/im pairs".into());
    }
    let float = |tok: &str| -> std::result::Result<f64, String> {
        tok.parse::<f64>().map_err(|_| format!("bad number {tok:?}"))
    };
    let index = |tok: &str| -> std::result::Result<usize, String> {
        tok.parse::<usize>().map_err(|_| format!("bad cutoff {tok:?}"))
    };
    let pairs = (tokens.len() - 8) / 2;
    let mut t_coeffs = Vec::with_capacity(pairs);
    for p in 0..pairs {
        t_coeffs.push(Complex64::new(
            float(tokens[6 + 2 * p])?,
            float(tokens[7 + 2 * p])?,
        ));
    }
    Ok(SymbolParams {
        theta: float(tokens[0])?,
        theta_prime: float(tokens[1])?,
        alpha1: float(tokens[2])?,
        alpha2: float(tokens[3])?,
        k1: index(tokens[4])?,
        k2: index(tokens[5])?,
        t_coeffs,
        beta1: float(tokens[tokens.len() - 2])?,
        beta2: float(tokens[tokens.len() - 1])?,
    })
}

pub fn render(records: &[SymbolParams]) -> String {
    let mut out = String::from(
        "# theta theta_prime alpha1 alpha2 k1 k2 [t_re t_im]... beta1 beta2\n",
    );
    for p in records {
        let mut fields = vec![
            p.theta.to_string(),
            p.theta_prime.to_string(),
            p.alpha1.to_string(),
            p.alpha2.to_string(),
            p.k1.to_string(),
            p.k2.to_string(),
        ];
        for t in &p.t_coeffs {
            fields.push(t.re.to_string());
            fields.push(t.im.to_string());
        }
        fields.push(p.beta1.to_string());
        fields.push(p.beta2.to_string());
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

/// Loads a corpus file; an empty path selects the built-in corpus.
pub fn load(path: &Path) -> Result<Vec<SymbolParams>> {
    if path.as_os_str().is_empty() {
        return Ok(builtin());
    }
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse(&text)
}

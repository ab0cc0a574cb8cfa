//! File formats: code, decoder, and decoupling-group text files, and the
//! JSON form of enumerator tables.
//!
//! All text formats are UTF-8 with `#` comments and blank lines ignored.
//! Loaders report the offending line number; the decoder loader additionally
//! verifies totality, `D(0) = I`, and per-row syndrome consistency against
//! the code.

use std::fs;
use std::path::Path;

use ddqec_core::code::{parse_syndrome, DecoderMap, DecouplingGroup, StabilizerCode, Violation};
use ddqec_core::pauli::{format_pauli, parse_pauli, PauliOperator};
use ddqec_core::wep::{Setting, Tag, WepTable};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("{path}: code violates invariants: {}", render_violations(.violations))]
    InvalidCode { path: String, violations: Vec<Violation> },
    #[error("{path}: decoder table is missing syndrome {syndrome}")]
    MissingSyndrome { path: String, syndrome: String },
    #[error("{path}:{line}: duplicate entry for syndrome {syndrome}")]
    DuplicateSyndrome { path: String, line: usize, syndrome: String },
    #[error("{path}:{line}: recovery {recovery} has syndrome {actual}, expected {expected}")]
    InconsistentRecovery {
        path: String,
        line: usize,
        recovery: String,
        expected: String,
        actual: String,
    },
    #[error("{path}: the trivial syndrome must map to the identity, got {recovery}")]
    NontrivialIdentity { path: String, recovery: String },
    #[error("{path}: {message}")]
    Semantic { path: String, message: String },
}

fn render_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl FormatError {
    /// Process exit status: 2 for missing files, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            FormatError::Io { source, .. }
                if source.kind() == std::io::ErrorKind::NotFound =>
            {
                2
            }
            _ => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Content lines with their 1-based line numbers, comments stripped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

pub fn parse_code(text: &str, path: &str) -> Result<StabilizerCode, FormatError> {
    let err = |line: usize, message: String| FormatError::Parse {
        path: path.to_string(),
        line,
        message,
    };
    let mut n: Option<usize> = None;
    let mut k: Option<usize> = None;
    let mut stabilizers = Vec::new();
    let mut logical_x = Vec::new();
    let mut logical_z = Vec::new();
    for (line_no, line) in content_lines(text) {
        let mut fields = line.split_whitespace();
        let keyword = fields.next().unwrap();
        let value = fields.next().ok_or_else(|| {
            err(line_no, format!("expected a value after {keyword:?}"))
        })?;
        if fields.next().is_some() {
            return Err(err(line_no, "trailing fields".into()));
        }
        let parse_op = |line_no: usize| {
            parse_pauli(value).map_err(|e| err(line_no, e.to_string()))
        };
        match keyword {
            "n" => {
                n = Some(value.parse().map_err(|_| {
                    err(line_no, format!("invalid qubit count {value:?}"))
                })?)
            }
            "k" => {
                k = Some(value.parse().map_err(|_| {
                    err(line_no, format!("invalid logical count {value:?}"))
                })?)
            }
            "stabilizer" => stabilizers.push(parse_op(line_no)?),
            "logical_x" => logical_x.push(parse_op(line_no)?),
            "logical_z" => logical_z.push(parse_op(line_no)?),
            other => return Err(err(line_no, format!("unknown keyword {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| err(0, "missing \"n\" line".into()))?;
    let k = k.ok_or_else(|| err(0, "missing \"k\" line".into()))?;
    let code = StabilizerCode::new(n, k, stabilizers, logical_x, logical_z);
    let violations = code.validate();
    if !violations.is_empty() {
        return Err(FormatError::InvalidCode { path: path.to_string(), violations });
    }
    Ok(code)
}

pub fn load_code(path: &Path) -> Result<StabilizerCode, FormatError> {
    parse_code(&read(path)?, &path.display().to_string())
}

pub fn render_code(code: &StabilizerCode) -> String {
    let mut out = String::new();
    out.push_str(&format!("n {}\nk {}\n", code.n(), code.k()));
    for s in code.stabilizer_gens() {
        out.push_str(&format!("stabilizer {}\n", format_pauli(s)));
    }
    for l in code.logical_x() {
        out.push_str(&format!("logical_x {}\n", format_pauli(l)));
    }
    for l in code.logical_z() {
        out.push_str(&format!("logical_z {}\n", format_pauli(l)));
    }
    out
}

pub fn store_code(path: &Path, code: &StabilizerCode) -> Result<(), FormatError> {
    fs::write(path, render_code(code)).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_decoder(
    text: &str,
    path: &str,
    code: &StabilizerCode,
) -> Result<DecoderMap, FormatError> {
    let width = code.syndrome_bits();
    let mut table: Vec<Option<(usize, PauliOperator)>> = vec![None; 1usize << width];
    for (line_no, line) in content_lines(text) {
        let mut fields = line.split_whitespace();
        let (Some(syn_text), Some(rec_text), None) =
            (fields.next(), fields.next(), fields.next())
        else {
            return Err(FormatError::Parse {
                path: path.to_string(),
                line: line_no,
                message: "expected \"<syndrome bits> <PauliString>\"".into(),
            });
        };
        let syndrome = parse_syndrome(syn_text).ok_or_else(|| FormatError::Parse {
            path: path.to_string(),
            line: line_no,
            message: format!("invalid syndrome {syn_text:?}"),
        })?;
        if syndrome.width() != width {
            return Err(FormatError::Parse {
                path: path.to_string(),
                line: line_no,
                message: format!(
                    "syndrome {syn_text:?} has {} bits, expected {width}",
                    syndrome.width()
                ),
            });
        }
        let recovery = parse_pauli(rec_text).map_err(|e| FormatError::Parse {
            path: path.to_string(),
            line: line_no,
            message: e.to_string(),
        })?;
        let actual = code.syndrome(&recovery).map_err(|e| FormatError::Parse {
            path: path.to_string(),
            line: line_no,
            message: e.to_string(),
        })?;
        if actual.bits() != syndrome.bits() {
            return Err(FormatError::InconsistentRecovery {
                path: path.to_string(),
                line: line_no,
                recovery: rec_text.to_string(),
                expected: syndrome.to_string(),
                actual: actual.to_string(),
            });
        }
        let slot = &mut table[syndrome.bits() as usize];
        if slot.is_some() {
            return Err(FormatError::DuplicateSyndrome {
                path: path.to_string(),
                line: line_no,
                syndrome: syndrome.to_string(),
            });
        }
        *slot = Some((line_no, recovery));
    }
    let mut entries = Vec::with_capacity(table.len());
    for (bits, slot) in table.into_iter().enumerate() {
        let Some((_, recovery)) = slot else {
            return Err(FormatError::MissingSyndrome {
                path: path.to_string(),
                syndrome: ddqec_core::Syndrome::new(bits as u64, width).to_string(),
            });
        };
        entries.push(recovery);
    }
    if !entries[0].is_identity() {
        return Err(FormatError::NontrivialIdentity {
            path: path.to_string(),
            recovery: format_pauli(&entries[0]),
        });
    }
    DecoderMap::from_table(width, entries).map_err(|e| FormatError::Semantic {
        path: path.to_string(),
        message: e.to_string(),
    })
}

pub fn load_decoder(path: &Path, code: &StabilizerCode) -> Result<DecoderMap, FormatError> {
    parse_decoder(&read(path)?, &path.display().to_string(), code)
}

pub fn render_decoder(decoder: &DecoderMap) -> String {
    let mut out = String::new();
    for (syndrome, recovery) in decoder.entries() {
        out.push_str(&format!("{syndrome} {}\n", format_pauli(recovery)));
    }
    out
}

pub fn parse_dd(text: &str, path: &str) -> Result<DecouplingGroup, FormatError> {
    let mut generators = Vec::new();
    for (line_no, line) in content_lines(text) {
        let mut fields = line.split_whitespace();
        let (Some(keyword), Some(value), None) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(FormatError::Parse {
                path: path.to_string(),
                line: line_no,
                message: "expected \"generator <PauliString>\"".into(),
            });
        };
        if keyword != "generator" {
            return Err(FormatError::Parse {
                path: path.to_string(),
                line: line_no,
                message: format!("unknown keyword {keyword:?}"),
            });
        }
        generators.push(parse_pauli(value).map_err(|e| FormatError::Parse {
            path: path.to_string(),
            line: line_no,
            message: e.to_string(),
        })?);
    }
    DecouplingGroup::new(generators).map_err(|e| FormatError::Semantic {
        path: path.to_string(),
        message: e.to_string(),
    })
}

pub fn load_dd(path: &Path) -> Result<DecouplingGroup, FormatError> {
    parse_dd(&read(path)?, &path.display().to_string())
}

pub fn render_dd(dd: &DecouplingGroup) -> String {
    dd.generators()
        .iter()
        .map(|g| format!("generator {}\n", format_pauli(g)))
        .collect()
}

pub fn store_dd(path: &Path, dd: &DecouplingGroup) -> Result<(), FormatError> {
    fs::write(path, render_dd(dd)).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Serializes a table as the canonical JSON object. `meta` is attached under
/// `"_meta"` when present (invocation and input digests).
pub fn wep_to_json(wep: &WepTable, meta: Option<serde_json::Value>) -> serde_json::Value {
    let mut coeffs = serde_json::Map::new();
    for (tag, v) in wep.tags() {
        coeffs.insert(tag.name().to_string(), serde_json::json!(v));
    }
    let mut obj = serde_json::Map::new();
    obj.insert("n".into(), serde_json::json!(wep.n()));
    obj.insert("k".into(), serde_json::json!(wep.k()));
    obj.insert("setting".into(), serde_json::json!(wep.setting().name()));
    obj.insert("coeffs".into(), serde_json::Value::Object(coeffs));
    if let Some(meta) = meta {
        obj.insert("_meta".into(), meta);
    }
    serde_json::Value::Object(obj)
}

pub fn wep_from_json(text: &str) -> Result<WepTable, String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| e.to_string())?;
    let n = value["n"].as_u64().ok_or("missing n")? as usize;
    let k = value["k"].as_u64().ok_or("missing k")? as usize;
    let setting = match value["setting"].as_str() {
        Some("qec") => Setting::Qec,
        Some("qed") => Setting::Qed,
        other => return Err(format!("invalid setting {other:?}")),
    };
    let coeffs = value["coeffs"].as_object().ok_or("missing coeffs")?;
    let mut tags = Vec::new();
    for (name, vec) in coeffs {
        let tag = Tag::from_name(name).ok_or_else(|| format!("unknown tag {name:?}"))?;
        let v: Vec<u64> = vec
            .as_array()
            .ok_or("coefficients must be arrays")?
            .iter()
            .map(|x| x.as_u64().ok_or("coefficients must be nonnegative integers"))
            .collect::<Result<_, _>>()?;
        if v.len() != n + 1 {
            return Err(format!("tag {name} has {} coefficients, expected {}", v.len(), n + 1));
        }
        tags.push((tag, v));
    }
    Ok(WepTable::from_tag_vectors(n, k, setting, tags))
}

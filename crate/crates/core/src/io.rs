//! File formats: code and family JSON, bit files, LLR and profile CSV.
//!
//! Every index on disk is 1-based.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::ChannelModel;
use crate::codeword::{CodeSpec, CouplingSequence, RateMatchMode, RateMatchedCode};
use crate::construction::{CodeFamily, FamilyEntry};
use crate::crc::CrcConfig;
use crate::error::{Error, Result};
use crate::reliability::ReliabilityProfile;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateMatchJson {
    pub mode: String,
    pub pattern: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeJson {
    pub n: usize,
    pub pairs: Vec<[usize; 2]>,
    pub frozen: Vec<usize>,
    pub info: Vec<usize>,
    pub crc: Option<CrcConfig>,
    #[serde(default = "no_rate_match")]
    pub rate_match: RateMatchJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Value>,
}

fn no_rate_match() -> RateMatchJson {
    RateMatchJson {
        mode: "none".into(),
        pattern: Vec::new(),
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn zero_based(v: &[usize], n: usize, what: &str) -> Result<Vec<usize>> {
    v.iter()
        .map(|&i| {
            if i == 0 || i > n {
                Err(Error::InvalidCode(format!("{what} index {i} outside 1..={n}")))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

impl CodeJson {
    pub fn from_code(code: &RateMatchedCode, meta: Option<Value>) -> Self {
        let m = code.mother();
        CodeJson {
            n: m.n(),
            pairs: m.sequence().to_one_based().into_iter().map(|(a, b)| [a, b]).collect(),
            frozen: one_based(&m.frozen()),
            info: one_based(m.info()),
            crc: m.crc().cloned(),
            rate_match: RateMatchJson {
                mode: code.mode().as_str().into(),
                pattern: one_based(code.pattern()),
            },
            meta,
        }
    }

    pub fn to_code(&self) -> Result<RateMatchedCode> {
        let pairs: Vec<(usize, usize)> = self.pairs.iter().map(|p| (p[0], p[1])).collect();
        let seq = CouplingSequence::from_one_based(self.n, &pairs)?;
        let info = zero_based(&self.info, self.n, "information")?;
        let frozen = zero_based(&self.frozen, self.n, "frozen")?;
        let mut seen = vec![0u8; self.n];
        for &i in info.iter().chain(&frozen) {
            seen[i] += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return Err(Error::InvalidCode("frozen and information sets must partition [N]".into()));
        }
        let mother = CodeSpec::new(seq, info, self.crc.clone())?;
        let mode = RateMatchMode::parse(&self.rate_match.mode)?;
        let pattern = zero_based(&self.rate_match.pattern, self.n, "rate-matching")?;
        RateMatchedCode::new(mother, mode, pattern)
    }
}

pub fn code_to_json(code: &RateMatchedCode, meta: Option<Value>) -> Value {
    serde_json::to_value(CodeJson::from_code(code, meta)).expect("code serializes")
}

pub fn code_from_json(v: &Value) -> Result<RateMatchedCode> {
    let c: CodeJson = serde_json::from_value(v.clone())?;
    c.to_code()
}

pub fn code_from_str(s: &str) -> Result<RateMatchedCode> {
    let c: CodeJson = serde_json::from_str(s)?;
    c.to_code()
}

pub fn read_code(path: &Path) -> Result<RateMatchedCode> {
    code_from_str(&std::fs::read_to_string(path)?)
}

pub fn write_code(path: &Path, code: &RateMatchedCode, meta: Option<Value>) -> Result<()> {
    let v = code_to_json(code, meta);
    std::fs::write(path, serde_json::to_string_pretty(&v)? + "\n")?;
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FamilyJson {
    max_len: usize,
    channel: ChannelModel,
    codes: BTreeMap<String, CodeJson>,
}

pub fn family_to_json(family: &CodeFamily) -> Value {
    let mut codes = BTreeMap::new();
    for e in family.iter() {
        let meta = serde_json::json!({ "de_error": e.error });
        codes.insert(
            format!("{},{}", e.code.n(), e.code.k()),
            CodeJson::from_code(&RateMatchedCode::plain(e.code.clone()), Some(meta)),
        );
    }
    serde_json::to_value(FamilyJson {
        max_len: family.max_len(),
        channel: family.channel(),
        codes,
    })
    .expect("family serializes")
}

pub fn family_from_json(v: &Value) -> Result<CodeFamily> {
    let f: FamilyJson = serde_json::from_value(v.clone())?;
    let mut entries: Vec<Vec<Option<FamilyEntry>>> = (1..=f.max_len).map(|n| vec![None; n + 1]).collect();
    for (key, cj) in &f.codes {
        let (n, k) = key
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
            .ok_or_else(|| Error::Parse(format!("family key {key:?} is not \"N,K\"")))?;
        let code = cj.to_code()?;
        if code.mode() != RateMatchMode::None {
            return Err(Error::InvalidCode(format!("family entry {key} is rate matched")));
        }
        let error = cj
            .meta
            .as_ref()
            .and_then(|m| m.get("de_error"))
            .and_then(Value::as_f64)
            .unwrap_or(f64::NAN);
        let slot = entries
            .get_mut(n.wrapping_sub(1))
            .and_then(|row| row.get_mut(k))
            .ok_or_else(|| Error::InvalidCode(format!("family entry {key} outside max_len {}", f.max_len)))?;
        *slot = Some(FamilyEntry {
            code: code.mother().clone(),
            error,
        });
    }
    let mut rows = Vec::with_capacity(f.max_len);
    for (i, row) in entries.into_iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (k, e) in row.into_iter().enumerate() {
            out.push(e.ok_or(Error::MissingFamilyEntry { n: i + 1, k })?);
        }
        rows.push(out);
    }
    CodeFamily::from_entries(f.max_len, f.channel, rows)
}

pub fn read_family(path: &Path) -> Result<CodeFamily> {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    family_from_json(&v)
}

pub fn write_family(path: &Path, family: &CodeFamily) -> Result<()> {
    std::fs::write(path, serde_json::to_string(&family_to_json(family))? + "\n")?;
    Ok(())
}

/// One bit vector per non-empty line of '0'/'1' characters.
pub fn parse_bits(text: &str) -> Result<Vec<Vec<u8>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(Error::Parse(format!("unexpected character {other:?} in bit line"))),
                })
                .collect()
        })
        .collect()
}

pub fn format_bits(words: &[Vec<u8>]) -> String {
    let mut out = String::new();
    for w in words {
        out.extend(w.iter().map(|&b| if b & 1 == 1 { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

/// One LLR vector per non-empty line, values separated by commas.
pub fn parse_llr_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad LLR value {t:?}")))
                })
                .collect()
        })
        .collect()
}

/// CSV with one row per position: index, metric, pe.
pub fn profile_csv(profile: &ReliabilityProfile) -> String {
    let mut out = String::from("index,metric,pe\n");
    for (i, (m, p)) in profile.metric.iter().zip(&profile.pe).enumerate() {
        out.push_str(&format!("{},{:e},{:e}\n", i + 1, m, p));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::build_family;

    #[test]
    fn code_round_trip() {
        let seq = CouplingSequence::regular(3);
        let mother = CodeSpec::new(seq, vec![5, 6, 7], Some(CrcConfig::new("11").unwrap())).unwrap();
        let code = RateMatchedCode::new(mother, RateMatchMode::Puncture, vec![0, 1]).unwrap();
        let v = code_to_json(&code, Some(serde_json::json!({"note": "x"})));
        assert_eq!(v["info"], serde_json::json!([6, 7, 8]));
        assert_eq!(v["rate_match"]["pattern"], serde_json::json!([1, 2]));
        assert_eq!(code_from_json(&v).unwrap(), code);
    }

    #[test]
    fn rejects_overlapping_sets() {
        let text = r#"{"n":2,"pairs":[[1,2]],"frozen":[1,2],"info":[2],"crc":null}"#;
        assert!(code_from_str(text).is_err());
        let text = r#"{"n":2,"pairs":[[1,2]],"frozen":[1],"info":[2],"crc":null}"#;
        assert_eq!(code_from_str(text).unwrap().mode(), RateMatchMode::None);
    }

    #[test]
    fn family_round_trip() {
        let f = build_family(5, &ChannelModel::Bec { epsilon: 0.5 }).unwrap();
        let back = family_from_json(&family_to_json(&f)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn bit_and_llr_text() {
        let w = parse_bits("0110\n\n1000\n").unwrap();
        assert_eq!(w, vec![vec![0, 1, 1, 0], vec![1, 0, 0, 0]]);
        assert_eq!(format_bits(&w), "0110\n1000\n");
        assert!(parse_bits("01a").is_err());
        assert_eq!(parse_llr_csv("1.5, -2\n").unwrap(), vec![vec![1.5, -2.0]]);
        assert!(parse_llr_csv("1,x").is_err());
    }
}

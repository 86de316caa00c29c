//! Input files and output encodings.
//!
//! Floats are written as `{:.16e}` (17 significant digits) so that repeated
//! runs produce byte-identical output.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use pwtrace_core::generating::WeightProfile;
use pwtrace_core::serde_point::PointRepr;
use pwtrace_core::{Complex, NodeSequence, SpaceParams, TraceData};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// `{"nodes": [...], "trace": [...], "params": {...}}`; `trace` and `params`
/// may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    pub nodes: Vec<PointRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<PointRepr>>,
    #[serde(default)]
    pub params: SpaceParams,
}

/// A validated [`SequenceFile`].
#[derive(Debug, Clone)]
pub struct Input {
    pub seq: NodeSequence,
    pub trace: Option<TraceData>,
    pub params: SpaceParams,
}

impl SequenceFile {
    pub fn from_reals(xs: &[f64]) -> Self {
        SequenceFile {
            nodes: xs.iter().map(|&x| PointRepr { re: x, im: 0.0 }).collect(),
            trace: None,
            params: SpaceParams::default(),
        }
    }

    pub fn validate(self) -> CliResult<Input> {
        if self.nodes.is_empty() {
            return Err(CliError::Input("node list is empty".into()));
        }
        let seq = NodeSequence::new(self.nodes.into_iter().map(Complex::from).collect())?;
        let trace = match self.trace {
            Some(t) => {
                if t.len() != seq.len() {
                    return Err(CliError::Input(format!(
                        "trace has {} values for {} nodes",
                        t.len(),
                        seq.len()
                    )));
                }
                let values: Vec<Complex> = t.into_iter().map(Complex::from).collect();
                if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(CliError::Input("trace contains a non-finite value".into()));
                }
                Some(TraceData::new(values))
            }
            None => None,
        };
        self.params.validate()?;
        Ok(Input {
            seq,
            trace,
            params: self.params,
        })
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load(path: &Path) -> CliResult<Input> {
    read_json::<SequenceFile>(path)?.validate()
}

/// Writes floats with 17 significant digits; everything else as compact JSON.
#[derive(Debug, Clone, Copy, Default)]
pub struct FixedFloats;

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(buf)
}

fn fmt_float(x: f64) -> String {
    if x.is_infinite() && x > 0.0 {
        "inf".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub const PROFILE_HEADER: &str = "x,abs_S,d_N,weight";

pub fn profile_csv(profile: &WeightProfile) -> Vec<u8> {
    let mut out = String::with_capacity(80 * (profile.len() + 1));
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for i in 0..profile.len() {
        let row = [
            profile.grid[i],
            profile.s_values[i],
            profile.dn_values[i],
            profile.ratio[i],
        ];
        let cells: Vec<String> = row.iter().map(|&x| fmt_float(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out.into_bytes()
}

/// Writes `bytes` to `out`, or to stdout when no path is given.
pub fn emit(bytes: &[u8], out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Parses `XMIN:XMAX:STEP`.
pub fn parse_grid(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected XMIN:XMAX:STEP, got {s:?}"));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok((v[0], v[1], v[2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        let bytes = to_json(&serde_json::json!({"x": 0.1, "n": 3})).unwrap();
        assert_eq!(
            String::from_utf8(bytes).unwrap(),
            "{\"n\":3,\"x\":1.0000000000000001e-1}\n"
        );
        let back: f64 = "1.0000000000000001e-1".parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn sequence_file_defaults_params() {
        let f: SequenceFile = serde_json::from_str(r#"{"nodes":[{"re":0.5,"im":0.0}]}"#).unwrap();
        assert_eq!(f.params, SpaceParams::default());
        assert!(f.trace.is_none());
        let f: SequenceFile = serde_json::from_str(
            r#"{"nodes":[{"re":0.5,"im":0}],"params":{"tau":3.0,"p":2.0,"epsilon":null,"capacity":2}}"#,
        )
        .unwrap();
        assert_eq!(f.params.capacity, 2);
    }

    #[test]
    fn validation_rejects_bad_sequences() {
        let empty = SequenceFile::from_reals(&[]);
        assert!(empty.validate().is_err());
        let dup = SequenceFile::from_reals(&[0.5, 0.5]);
        assert!(dup.validate().is_err());
        let zero = SequenceFile::from_reals(&[0.0, 1.0]);
        assert!(zero.validate().is_err());
        let mut short = SequenceFile::from_reals(&[0.5, 1.5]);
        short.trace = Some(vec![PointRepr { re: 1.0, im: 0.0 }]);
        assert!(short.validate().is_err());
    }

    #[test]
    fn csv_marks_nodes_with_inf() {
        let p = WeightProfile::from_rows(vec![0.5, 0.75], vec![(0.0, 0.0, f64::INFINITY), (0.5, 0.25, 4.0)]);
        let text = String::from_utf8(profile_csv(&p)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,abs_S,d_N,weight");
        assert!(lines[1].ends_with(",inf"));
        assert_eq!(lines[2], "7.5000000000000000e-1,5.0000000000000000e-1,2.5000000000000000e-1,4.0000000000000000e0");
    }

    #[test]
    fn grid_spec() {
        assert_eq!(parse_grid("-5:5:0.01"), Ok((-5.0, 5.0, 0.01)));
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("a:2:3").is_err());
    }
}

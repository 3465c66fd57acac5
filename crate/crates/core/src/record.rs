//! JSON Lines result files.
//!
//! Each file starts with one `header` line followed by `solution` or
//! `family` lines. Integers beyond the 53-bit safe range are written as
//! decimal strings.

use std::fmt;
use std::io::{BufRead, Write};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bounds::BoundSet;
use crate::parametric::{FamilyForm, FamilyRecord};
use crate::search::SolutionRecord;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

const SAFE_INT: i128 = (1 << 53) - 1;

/// Integer written as a JSON number when it fits in 53 bits, as a decimal
/// string otherwise. Reading accepts both.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct JsonInt(pub i128);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.abs() <= SAFE_INT {
            s.serialize_i64(self.0 as i64)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                v.parse().map(JsonInt).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

fn ints<I: IntoIterator<Item = V>, V: Into<i128>>(it: I) -> Vec<JsonInt> {
    it.into_iter().map(|v| JsonInt(v.into())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsLine {
    #[serde(rename = "X")]
    pub x: JsonInt,
    pub a_cap: JsonInt,
    pub sporadic: Vec<u32>,
    pub form1: Vec<u32>,
    pub form2: Vec<u32>,
}

impl From<&BoundSet> for BoundsLine {
    fn from(b: &BoundSet) -> Self {
        Self {
            x: JsonInt(b.x.into()),
            a_cap: JsonInt(b.a_cap.into()),
            sporadic: b.sporadic.to_vec(),
            form1: b.form1.to_vec(),
            form2: b.form2.to_vec(),
        }
    }
}

/// Run settings that determine the output. Worker count and output path
/// are left out so that reruns compare byte for byte.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigLine {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coefficients: Option<Vec<JsonInt>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub collide: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a_range: Option<[JsonInt; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pool: Option<Vec<Vec<JsonInt>>>,
    #[serde(rename = "X", skip_serializing_if = "Option::is_none", default)]
    pub x: Option<JsonInt>,
    pub strict: bool,
    pub budget: JsonInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeaderLine {
    pub tool_version: String,
    pub config: ConfigLine,
    pub bounds: BoundsLine,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionLine {
    #[serde(rename = "A")]
    pub a: JsonInt,
    #[serde(rename = "X")]
    pub x: JsonInt,
    pub indices: Vec<u32>,
    pub coefficients: Vec<JsonInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyLine {
    #[serde(rename = "A")]
    pub a: JsonInt,
    #[serde(rename = "X")]
    pub x: JsonInt,
    pub offsets: Vec<u32>,
    pub coefficients: Vec<JsonInt>,
    pub form: FamilyForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Line {
    Header(Box<HeaderLine>),
    Solution(SolutionLine),
    Family(FamilyLine),
}

impl Line {
    pub fn solution(rec: &SolutionRecord, x: u64) -> Self {
        Line::Solution(SolutionLine {
            a: JsonInt(rec.a.into()),
            x: JsonInt(x.into()),
            indices: rec.indices.to_vec(),
            coefficients: ints(rec.coefficients),
        })
    }

    pub fn family(rec: &FamilyRecord, x: u64) -> Self {
        Line::Family(FamilyLine {
            a: JsonInt(rec.a.into()),
            x: JsonInt(x.into()),
            offsets: rec.offsets.clone(),
            coefficients: ints(rec.coefficients.iter().copied()),
            form: rec.form,
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn narrow<T: TryFrom<i128>>(v: JsonInt, line: usize, what: &str) -> Result<T, RecordError> {
    T::try_from(v.0).map_err(|_| RecordError::Parse {
        line,
        msg: format!("{what} {} out of range", v.0),
    })
}

impl SolutionLine {
    pub fn to_record(&self, line: usize) -> Result<(SolutionRecord, u64), RecordError> {
        let bad = |msg: &str| RecordError::Parse {
            line,
            msg: msg.to_string(),
        };
        let indices: [u32; 6] = self
            .indices
            .clone()
            .try_into()
            .map_err(|_| bad("expected six indices"))?;
        if self.coefficients.len() != 6 {
            return Err(bad("expected six coefficients"));
        }
        let mut coefficients = [0i64; 6];
        for (slot, v) in coefficients.iter_mut().zip(&self.coefficients) {
            *slot = narrow(*v, line, "coefficient")?;
        }
        let rec = SolutionRecord {
            a: narrow(self.a, line, "A")?,
            indices,
            coefficients,
            residual_check: false,
        };
        Ok((rec, narrow(self.x, line, "X")?))
    }
}

impl FamilyLine {
    pub fn to_record(&self, line: usize) -> Result<(FamilyRecord, u64), RecordError> {
        let coefficients = self
            .coefficients
            .iter()
            .map(|v| narrow(*v, line, "coefficient"))
            .collect::<Result<Vec<i64>, _>>()?;
        let rec = FamilyRecord::new(
            narrow(self.a, line, "A")?,
            self.offsets.clone(),
            coefficients,
        )
        .map_err(|e| RecordError::Parse {
            line,
            msg: e.to_string(),
        })?;
        if rec.form != self.form {
            return Err(RecordError::Parse {
                line,
                msg: "form tag does not match the number of offsets".into(),
            });
        }
        Ok((rec, narrow(self.x, line, "X")?))
    }
}

pub fn write_lines<W: Write>(mut w: W, lines: &[Line]) -> std::io::Result<()> {
    for l in lines {
        serde_json::to_writer(&mut w, l)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

/// Reads every non-blank line; line numbers in errors are 1-based.
pub fn read_lines<R: BufRead>(r: R) -> Result<Vec<Line>, RecordError> {
    let mut out = Vec::new();
    for (i, text) in r.lines().enumerate() {
        let text = text?;
        if text.trim().is_empty() {
            continue;
        }
        let line = serde_json::from_str(&text).map_err(|e| RecordError::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(line);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::reference_hit;
    use proptest::prelude::*;

    #[test]
    fn large_integers_become_strings() {
        let s = serde_json::to_string(&JsonInt(1 << 60)).unwrap();
        assert_eq!(s, "\"1152921504606846976\"");
        assert_eq!(serde_json::to_string(&JsonInt(-42)).unwrap(), "-42");
        assert_eq!(
            serde_json::to_string(&JsonInt(SAFE_INT)).unwrap(),
            "9007199254740991"
        );
        assert_eq!(
            serde_json::to_string(&JsonInt(SAFE_INT + 1)).unwrap(),
            "\"9007199254740992\""
        );
    }

    #[test]
    fn solution_line_shape() {
        let text = serde_json::to_string(&Line::solution(&reference_hit(), 1)).unwrap();
        assert_eq!(
            text,
            r#"{"kind":"solution","A":5,"X":1,"indices":[2,1,1,1,1,1],"coefficients":[1,-1,-1,-1,-1,-1]}"#
        );
    }

    #[test]
    fn bad_lines_report_position() {
        let input = "\n{\"kind\":\"solution\",\"A\":5,\"X\":1,\"indices\":[2,1],\"coefficients\":[1]}\n{oops\n";
        let err = read_lines(input.as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("line 3"), "{err}");
        let lines = read_lines(&input.as_bytes()[..input.len() - 6]).unwrap();
        let Line::Solution(s) = &lines[0] else {
            panic!()
        };
        assert!(s.to_record(2).is_err());
    }

    #[test]
    fn family_form_must_match() {
        let f = FamilyRecord::new(3, vec![4, 2, 0], vec![1, -7, 1]).unwrap();
        let Line::Family(mut line) = Line::family(&f, 1) else {
            panic!()
        };
        assert_eq!(line.to_record(1).unwrap().0, f);
        line.form = FamilyForm::SixTerm;
        assert!(line.to_record(1).is_err());
    }

    proptest! {
        #[test]
        fn lines_round_trip(a in 3u64..1000, x in 1u64..50, c in proptest::array::uniform6(any::<i64>()), idx in proptest::array::uniform6(0u32..40)) {
            let rec = SolutionRecord { a, indices: idx, coefficients: c, residual_check: false };
            let mut buf = Vec::new();
            write_lines(&mut buf, &[Line::solution(&rec, x)]).unwrap();
            let back = read_lines(buf.as_slice()).unwrap();
            let Line::Solution(s) = &back[0] else { panic!() };
            prop_assert_eq!(s.to_record(1).unwrap(), (rec, x));
        }
    }
}

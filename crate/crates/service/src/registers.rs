//! Register updates as they arrive over HTTP, and the register view that
//! every register endpoint returns.

use serde::Serialize;
use serde_json::Value;
use skinforge_core::tone_adjust::{decode_range, encode_percent, register_bits};
use skinforge_core::AdjustRegisters;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    I,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Spelling {
    Raw,
    Percent,
}

fn field(key: &str) -> Option<(Axis, Spelling)> {
    Some(match key {
        "i_range_q15" => (Axis::I, Spelling::Raw),
        "q_range_q15" => (Axis::Q, Spelling::Raw),
        "i_percent" => (Axis::I, Spelling::Percent),
        "q_percent" => (Axis::Q, Spelling::Percent),
        _ => return None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Int(i64),
    Float(f64),
}

impl Scalar {
    pub fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(Scalar::Int)
                .or_else(|| n.as_f64().map(Scalar::Float)),
            _ => None,
        }
    }

    pub fn from_text(s: &str) -> Option<Self> {
        let s = s.trim();
        s.parse()
            .map(Scalar::Int)
            .ok()
            .or_else(|| s.parse().ok().filter(|f: &f64| f.is_finite()).map(Scalar::Float))
    }
}

/// New values for either or both registers. A register that is not named
/// keeps its current value when the update is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RegisterUpdate {
    pub i: Option<i16>,
    pub q: Option<i16>,
}

impl RegisterUpdate {
    /// Validates `(key, value)` pairs; `value` is `None` when it is not a
    /// number at all. Raw and percent spellings cannot be mixed.
    pub fn parse<'a, I>(pairs: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = (&'a str, Option<Scalar>)>,
    {
        let mut update = RegisterUpdate::default();
        let mut spelling = None;
        for (key, value) in pairs {
            let (axis, sp) = field(key).ok_or_else(|| format!("unknown field {key:?}"))?;
            if spelling.is_some_and(|s| s != sp) {
                return Err("mixed raw and percent spellings in one request".into());
            }
            spelling = Some(sp);
            let value = value.ok_or_else(|| format!("{key}: expected a number"))?;
            let reg = match (sp, value) {
                (Spelling::Raw, Scalar::Int(v)) => i16::try_from(v)
                    .map_err(|_| format!("{key}: {v} is outside [-32768, 32767]"))?,
                (Spelling::Raw, Scalar::Float(v)) => {
                    return Err(format!("{key}: {v} is not an integer"))
                }
                (Spelling::Percent, Scalar::Int(v)) => {
                    encode_percent(v as f64).map_err(|e| format!("{key}: {e}"))?
                }
                (Spelling::Percent, Scalar::Float(v)) => {
                    encode_percent(v).map_err(|e| format!("{key}: {e}"))?
                }
            };
            let slot = match axis {
                Axis::I => &mut update.i,
                Axis::Q => &mut update.q,
            };
            if slot.replace(reg).is_some() {
                return Err(format!("{key}: register given twice"));
            }
        }
        Ok(update)
    }

    pub fn parse_json(body: &Value) -> Result<Self, String> {
        let obj = body.as_object().ok_or("expected a JSON object")?;
        let update = Self::parse(obj.iter().map(|(k, v)| (k.as_str(), Scalar::from_json(v))))?;
        if update.is_empty() {
            return Err("no register given".into());
        }
        Ok(update)
    }

    pub fn is_empty(&self) -> bool {
        self.i.is_none() && self.q.is_none()
    }

    pub fn apply(self, base: AdjustRegisters) -> AdjustRegisters {
        AdjustRegisters::new(
            self.i.unwrap_or(base.i_range_q15),
            self.q.unwrap_or(base.q_range_q15),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegisterView {
    pub i_range_q15: i16,
    pub q_range_q15: i16,
    pub i_fraction: f64,
    pub q_fraction: f64,
    pub i_bits: String,
    pub q_bits: String,
    pub direction: String,
}

impl From<AdjustRegisters> for RegisterView {
    fn from(r: AdjustRegisters) -> Self {
        RegisterView {
            i_range_q15: r.i_range_q15,
            q_range_q15: r.q_range_q15,
            i_fraction: decode_range(r.i_range_q15),
            q_fraction: decode_range(r.q_range_q15),
            i_bits: register_bits(r.i_range_q15),
            q_bits: register_bits(r.q_range_q15),
            direction: r.direction().label().to_string(),
        }
    }
}

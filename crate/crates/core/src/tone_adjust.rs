//! Skin-tone adjustment along the I and Q axes.
//!
//! Each axis is steered by a signed 16-bit Q15 register holding a fraction
//! in `[-1, 1)`: `value = register / 32768`. A skin pixel moves to
//! `i + i * range_i` and `q + q * range_q`; luma is untouched, and nothing
//! is clamped until the pixel is converted back to RGB.
//!
//! `-18%` encodes as `-5898`, bit pattern `1110100011110110`.

use std::fmt;
use std::str::FromStr;

use crate::colorspace::YiqPixel;
use crate::exec::{for_each_row, Parallelism};
use crate::plane::{BinaryMask, Plane, YiqPlane};

pub const Q15_SCALE: f64 = 32768.0;

/// Magnitude used by the quadrant presets.
pub const DEFAULT_PRESET_FRACTION: f64 = 0.10;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ToneError {
    #[error("range fraction {0} is outside [-1, 1]")]
    FractionOutOfRange(f64),
    #[error("range percent {0} is outside [-100, 100]")]
    PercentOutOfRange(f64),
    #[error("register value {0} does not fit in 16 bits")]
    RegisterOutOfRange(i64),
    #[error("cannot parse range {0:?}: expected e.g. \"-18%\" or \"q15:-5898\"")]
    BadSpelling(String),
    #[error("frame is {frame:?} but mask is {mask:?}")]
    DimensionMismatch {
        frame: (usize, usize),
        mask: (usize, usize),
    },
}

/// Fraction to Q15, rounding half away from zero and saturating at
/// `[-32768, 32767]`, so `1.0` maps to `32767`.
pub fn encode_range(fraction: f64) -> Result<i16, ToneError> {
    if !(-1.0..=1.0).contains(&fraction) {
        return Err(ToneError::FractionOutOfRange(fraction));
    }
    let scaled = (fraction * Q15_SCALE).round();
    Ok(scaled.clamp(i16::MIN as f64, i16::MAX as f64) as i16)
}

pub fn encode_percent(percent: f64) -> Result<i16, ToneError> {
    if !(-100.0..=100.0).contains(&percent) {
        return Err(ToneError::PercentOutOfRange(percent));
    }
    encode_range(percent / 100.0)
}

pub fn decode_range(reg: i16) -> f64 {
    reg as f64 / Q15_SCALE
}

/// Two's-complement bit pattern, most significant bit first.
pub fn register_bits(reg: i16) -> String {
    format!("{:016b}", reg as u16)
}

/// Parses `"-18%"` (percent) or `"q15:-5898"` (raw register).
pub fn parse_range(spelling: &str) -> Result<i16, ToneError> {
    let s = spelling.trim();
    let bad = || ToneError::BadSpelling(spelling.to_string());
    if let Some(raw) = s.strip_prefix("q15:") {
        let v: i64 = raw.trim().parse().map_err(|_| bad())?;
        return i16::try_from(v).map_err(|_| ToneError::RegisterOutOfRange(v));
    }
    if let Some(pct) = s.strip_suffix('%') {
        let v: f64 = pct.trim().parse().map_err(|_| bad())?;
        if !v.is_finite() {
            return Err(bad());
        }
        return encode_percent(v);
    }
    Err(bad())
}

/// Which way the registers push skin tones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Red,
    Yellow,
    Green,
    Magenta,
    Neutral,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::Red => "Red",
            Direction::Yellow => "Yellow",
            Direction::Green => "Green",
            Direction::Magenta => "Magenta",
            Direction::Neutral => "Neutral",
        }
    }

    /// Signs of `(i, q)` for the four quadrants; `None` for `Neutral`.
    pub fn signs(self) -> Option<(i8, i8)> {
        match self {
            Direction::Red => Some((1, 1)),
            Direction::Yellow => Some((1, -1)),
            Direction::Green => Some((-1, -1)),
            Direction::Magenta => Some((-1, 1)),
            Direction::Neutral => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Direction::Red,
            Direction::Yellow,
            Direction::Green,
            Direction::Magenta,
            Direction::Neutral,
        ]
        .into_iter()
        .find(|d| d.label().eq_ignore_ascii_case(s))
        .ok_or_else(|| format!("unknown direction {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AdjustRegisters {
    pub i_range_q15: i16,
    pub q_range_q15: i16,
}

impl AdjustRegisters {
    pub const ZERO: AdjustRegisters = AdjustRegisters::new(0, 0);

    pub const fn new(i_range_q15: i16, q_range_q15: i16) -> Self {
        Self {
            i_range_q15,
            q_range_q15,
        }
    }

    pub fn from_fractions(i: f64, q: f64) -> Result<Self, ToneError> {
        Ok(Self::new(encode_range(i)?, encode_range(q)?))
    }

    /// Quadrant preset with the given magnitude on both axes.
    pub fn preset(direction: Direction, magnitude: f64) -> Result<Self, ToneError> {
        match direction.signs() {
            None => Ok(Self::ZERO),
            Some((si, sq)) => Self::from_fractions(si as f64 * magnitude, sq as f64 * magnitude),
        }
    }

    pub fn i_fraction(&self) -> f64 {
        decode_range(self.i_range_q15)
    }

    pub fn q_fraction(&self) -> f64 {
        decode_range(self.q_range_q15)
    }

    pub fn direction(&self) -> Direction {
        direction_for(*self)
    }

    /// Both registers in one word, I in the high half.
    pub fn pack(self) -> u32 {
        ((self.i_range_q15 as u16 as u32) << 16) | self.q_range_q15 as u16 as u32
    }

    pub fn unpack(word: u32) -> Self {
        Self::new((word >> 16) as u16 as i16, word as u16 as i16)
    }
}

pub fn direction_for(regs: AdjustRegisters) -> Direction {
    use std::cmp::Ordering::*;
    match (regs.i_range_q15.cmp(&0), regs.q_range_q15.cmp(&0)) {
        (Greater, Greater) => Direction::Red,
        (Greater, Less) => Direction::Yellow,
        (Less, Less) => Direction::Green,
        (Less, Greater) => Direction::Magenta,
        _ => Direction::Neutral,
    }
}

pub fn adjust_pixel(p: YiqPixel, regs: AdjustRegisters) -> YiqPixel {
    YiqPixel {
        y: p.y,
        i: p.i + p.i * regs.i_fraction(),
        q: p.q + p.q * regs.q_fraction(),
    }
}

/// Adjusts one row in place where `mask` is set.
pub(crate) fn adjust_row(row: &mut [YiqPixel], mask: &[bool], regs: AdjustRegisters) {
    for (p, &skin) in row.iter_mut().zip(mask) {
        if skin {
            *p = adjust_pixel(*p, regs);
        }
    }
}

pub fn apply_adjustment(
    frame: &YiqPlane,
    skin: &BinaryMask,
    regs: AdjustRegisters,
) -> Result<YiqPlane, ToneError> {
    apply_adjustment_with(frame, skin, regs, Parallelism::default())
}

pub fn apply_adjustment_with(
    frame: &YiqPlane,
    skin: &BinaryMask,
    regs: AdjustRegisters,
    par: Parallelism,
) -> Result<YiqPlane, ToneError> {
    if frame.dims() != skin.dims() {
        return Err(ToneError::DimensionMismatch {
            frame: frame.dims(),
            mask: skin.dims(),
        });
    }
    let (w, h) = frame.dims();
    let mut out = frame.as_slice().to_vec();
    for_each_row(&mut out, w, par, |y, row| adjust_row(row, skin.row(y), regs));
    Ok(Plane::from_vec(w, h, out).expect("dimensions preserved"))
}

//! Per-pixel skin classification.
//!
//! A pixel is skin when it lies in the Cg-Cr band, in the I-Q rectangle,
//! and is not marked as texture. The texture bit is the OR of a thresholded
//! morphological gradient and two RGB heuristics (too dark, or not ordered
//! `r > g > b` while below the bright limit). All intervals are closed;
//! all RGB comparisons are strict.

use std::fmt;
use std::str::FromStr;

use crate::colorspace::{rgb_to_ycgcr, rgb_to_yiq, RgbPixel, YCgCrPixel, YiqPixel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkinModelParams {
    pub cgcr_sum_lo: f64,
    pub cgcr_sum_hi: f64,
    pub cg_lo: f64,
    pub cg_hi: f64,
    pub i_lo: f64,
    pub i_hi: f64,
    pub q_lo: f64,
    pub q_hi: f64,
    pub dark_limit: u8,
    pub bright_limit: u8,
    pub gradient_threshold: f64,
}

impl Default for SkinModelParams {
    fn default() -> Self {
        Self {
            cgcr_sum_lo: 260.0,
            cgcr_sum_hi: 280.0,
            cg_lo: 85.0,
            cg_hi: 135.0,
            i_lo: 15.0,
            i_hi: 90.0,
            q_lo: -20.0,
            q_hi: 10.0,
            dark_limit: 80,
            bright_limit: 230,
            gradient_threshold: 24.0,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ModelError {
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

const KEYS: [&str; 11] = [
    "cgcr_sum_lo",
    "cgcr_sum_hi",
    "cg_lo",
    "cg_hi",
    "i_lo",
    "i_hi",
    "q_lo",
    "q_hi",
    "dark_limit",
    "bright_limit",
    "gradient_threshold",
];

impl SkinModelParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let reals = [
            self.cgcr_sum_lo,
            self.cgcr_sum_hi,
            self.cg_lo,
            self.cg_hi,
            self.i_lo,
            self.i_hi,
            self.q_lo,
            self.q_hi,
            self.gradient_threshold,
        ];
        if reals.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::Invalid("all bounds must be finite".into()));
        }
        let ordered = [
            ("cgcr_sum", self.cgcr_sum_lo, self.cgcr_sum_hi),
            ("cg", self.cg_lo, self.cg_hi),
            ("i", self.i_lo, self.i_hi),
            ("q", self.q_lo, self.q_hi),
            ("limit", self.dark_limit as f64, self.bright_limit as f64),
        ];
        for (name, lo, hi) in ordered {
            if lo >= hi {
                return Err(ModelError::Invalid(format!(
                    "{name} lower bound {lo} must be below upper bound {hi}"
                )));
            }
        }
        if self.gradient_threshold < 0.0 {
            return Err(ModelError::Invalid(format!(
                "gradient_threshold must be non-negative, got {}",
                self.gradient_threshold
            )));
        }
        Ok(())
    }

    /// Flat `key=value` text, one key per line, in canonical order.
    pub fn to_kv(&self) -> String {
        self.to_string()
    }

    /// Parses the `key=value` form. Blank lines and `#` comments are
    /// ignored; keys not present keep their default. Unknown or repeated
    /// keys are errors, and the result must pass [`validate`](Self::validate).
    pub fn from_kv(text: &str) -> Result<Self, ModelError> {
        let mut params = Self::default();
        let mut seen = [false; KEYS.len()];
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| ModelError::Parse {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key=value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let slot = KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| parse_err(format!("unknown key {key:?}")))?;
            if std::mem::replace(&mut seen[slot], true) {
                return Err(parse_err(format!("duplicate key {key:?}")));
            }
            let real = || {
                value
                    .parse::<f64>()
                    .map_err(|e| parse_err(format!("{key}: {e}")))
            };
            let byte = || {
                value
                    .parse::<u8>()
                    .map_err(|e| parse_err(format!("{key}: {e}")))
            };
            match key {
                "cgcr_sum_lo" => params.cgcr_sum_lo = real()?,
                "cgcr_sum_hi" => params.cgcr_sum_hi = real()?,
                "cg_lo" => params.cg_lo = real()?,
                "cg_hi" => params.cg_hi = real()?,
                "i_lo" => params.i_lo = real()?,
                "i_hi" => params.i_hi = real()?,
                "q_lo" => params.q_lo = real()?,
                "q_hi" => params.q_hi = real()?,
                "dark_limit" => params.dark_limit = byte()?,
                "bright_limit" => params.bright_limit = byte()?,
                "gradient_threshold" => params.gradient_threshold = real()?,
                _ => unreachable!("key validated above"),
            }
        }
        params.validate()?;
        Ok(params)
    }
}

impl fmt::Display for SkinModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cgcr_sum_lo={}", self.cgcr_sum_lo)?;
        writeln!(f, "cgcr_sum_hi={}", self.cgcr_sum_hi)?;
        writeln!(f, "cg_lo={}", self.cg_lo)?;
        writeln!(f, "cg_hi={}", self.cg_hi)?;
        writeln!(f, "i_lo={}", self.i_lo)?;
        writeln!(f, "i_hi={}", self.i_hi)?;
        writeln!(f, "q_lo={}", self.q_lo)?;
        writeln!(f, "q_hi={}", self.q_hi)?;
        writeln!(f, "dark_limit={}", self.dark_limit)?;
        writeln!(f, "bright_limit={}", self.bright_limit)?;
        writeln!(f, "gradient_threshold={}", self.gradient_threshold)
    }
}

impl FromStr for SkinModelParams {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_kv(s)
    }
}

/// Cg-Cr band: `cg` in `[cg_lo, cg_hi]` and `cg + cr` in
/// `[cgcr_sum_lo, cgcr_sum_hi]`.
pub fn in_skin_cgcr(p: &YCgCrPixel, m: &SkinModelParams) -> bool {
    let sum = p.cg + p.cr;
    (m.cg_lo..=m.cg_hi).contains(&p.cg) && (m.cgcr_sum_lo..=m.cgcr_sum_hi).contains(&sum)
}

pub fn in_skin_iq(p: &YiqPixel, m: &SkinModelParams) -> bool {
    (m.i_lo..=m.i_hi).contains(&p.i) && (m.q_lo..=m.q_hi).contains(&p.q)
}

/// True for pixels that cannot be skin on RGB grounds alone.
pub fn rgb_nonskin_heuristic(p: RgbPixel, m: &SkinModelParams) -> bool {
    let all_below = |limit: u8| p.r < limit && p.g < limit && p.b < limit;
    let ordered = p.r > p.g && p.g > p.b;
    all_below(m.dark_limit) || (all_below(m.bright_limit) && !ordered)
}

pub fn texture_bit(gradient_value: f64, p: RgbPixel, m: &SkinModelParams) -> bool {
    gradient_value > m.gradient_threshold || rgb_nonskin_heuristic(p, m)
}

/// Both color models accept the pixel; the texture bit is not consulted.
pub fn color_test(p: RgbPixel, m: &SkinModelParams) -> bool {
    in_skin_iq(&rgb_to_yiq(p), m) && in_skin_cgcr(&rgb_to_ycgcr(p), m)
}

/// The three-input AND: I-Q test, Cg-Cr test, and the inverted texture bit.
pub fn classify_pixel(p: RgbPixel, gradient_value: f64, m: &SkinModelParams) -> bool {
    color_test(p, m) && !texture_bit(gradient_value, p, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ycc(cg: f64, cr: f64) -> YCgCrPixel {
        YCgCrPixel { y: 128.0, cg, cr }
    }

    fn iq(i: f64, q: f64) -> YiqPixel {
        YiqPixel::new(128.0, i, q)
    }

    const SKIN: RgbPixel = RgbPixel::new(200, 150, 120);

    #[test]
    fn cgcr_band() {
        let m = SkinModelParams::default();
        assert!(in_skin_cgcr(&ycc(100.0, 165.0), &m));
        assert!(!in_skin_cgcr(&ycc(84.0, 180.0), &m));
        assert!(in_skin_cgcr(&rgb_to_ycgcr(SKIN), &m));
        // closed boundaries
        assert!(in_skin_cgcr(&ycc(85.0, 175.0), &m));
        assert!(in_skin_cgcr(&ycc(135.0, 145.0), &m));
        assert!(!in_skin_cgcr(&ycc(100.0, 180.5), &m));
    }

    #[test]
    fn iq_rectangle() {
        let m = SkinModelParams::default();
        assert!(in_skin_iq(&iq(50.0, 0.0), &m));
        assert!(!in_skin_iq(&iq(14.9, 0.0), &m));
        assert!(in_skin_iq(&iq(90.0, 10.0), &m));
        assert!(in_skin_iq(&iq(15.0, -20.0), &m));
        assert!(!in_skin_iq(&iq(50.0, 10.01), &m));
        assert!(in_skin_iq(&rgb_to_yiq(SKIN), &m));
    }

    #[test]
    fn heuristics() {
        let m = SkinModelParams::default();
        assert!(rgb_nonskin_heuristic(RgbPixel::gray(70), &m));
        assert!(!rgb_nonskin_heuristic(SKIN, &m));
        assert!(rgb_nonskin_heuristic(RgbPixel::new(100, 150, 120), &m));
        // equal channels break strict ordering
        assert!(rgb_nonskin_heuristic(RgbPixel::new(200, 150, 150), &m));
        // bright pixels escape the ordering test
        assert!(!rgb_nonskin_heuristic(RgbPixel::new(240, 250, 235), &m));
        // limit itself is not "below"
        assert!(!rgb_nonskin_heuristic(RgbPixel::new(80, 79, 78), &m));
    }

    #[test]
    fn texture() {
        let m = SkinModelParams::default();
        assert!(!texture_bit(0.0, SKIN, &m));
        assert!(texture_bit(255.0, SKIN, &m));
        assert!(texture_bit(0.0, RgbPixel::gray(70), &m));
        assert!(!texture_bit(24.0, SKIN, &m), "threshold is strict");
    }

    #[test]
    fn classify_examples() {
        let m = SkinModelParams::default();
        assert!(classify_pixel(SKIN, 0.0, &m));
        assert!(!classify_pixel(RgbPixel::gray(128), 0.0, &m));
        assert!(!classify_pixel(RgbPixel::gray(70), 0.0, &m));
        assert!(!classify_pixel(SKIN, 25.0, &m));
    }

    #[test]
    fn kv_round_trip_and_errors() {
        let m = SkinModelParams {
            gradient_threshold: 12.5,
            q_lo: -22.25,
            ..Default::default()
        };
        assert_eq!(SkinModelParams::from_kv(&m.to_kv()), Ok(m));

        let partial = "# tweak\n\ngradient_threshold = 30\n";
        assert_eq!(
            SkinModelParams::from_kv(partial).unwrap().gradient_threshold,
            30.0
        );
        assert!(matches!(
            SkinModelParams::from_kv("nope=1"),
            Err(ModelError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            SkinModelParams::from_kv("i_lo=1\ni_lo=2"),
            Err(ModelError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            SkinModelParams::from_kv("dark_limit=300"),
            Err(ModelError::Parse { .. })
        ));
        assert!(matches!(
            SkinModelParams::from_kv("i_lo=100"),
            Err(ModelError::Invalid(_))
        ));
        assert!(matches!(
            SkinModelParams::from_kv("gradient_threshold=-1"),
            Err(ModelError::Invalid(_))
        ));
    }
}

//! RGB, YCgCr and YIQ conversions.
//!
//! YCgCr takes unit-range RGB (each channel divided by 255) and produces
//! studio-range output: Y in [16, 235], Cg and Cr in [16, 240].
//! YIQ takes raw [0, 255] channels. The Q row is `(0.212, -0.523, 0.311)`
//! so that grays land exactly on the Y axis.

/// An 8-bit-per-channel RGB triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RgbPixel {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl RgbPixel {
    pub const BLACK: RgbPixel = RgbPixel::new(0, 0, 0);
    pub const WHITE: RgbPixel = RgbPixel::new(255, 255, 255);

    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b }
    }

    pub const fn gray(v: u8) -> Self {
        Self { r: v, g: v, b: v }
    }

    fn as_f64(self) -> [f64; 3] {
        [self.r as f64, self.g as f64, self.b as f64]
    }
}

impl From<[u8; 3]> for RgbPixel {
    fn from([r, g, b]: [u8; 3]) -> Self {
        Self { r, g, b }
    }
}

impl From<RgbPixel> for [u8; 3] {
    fn from(p: RgbPixel) -> Self {
        [p.r, p.g, p.b]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YCgCrPixel {
    pub y: f64,
    pub cg: f64,
    pub cr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YiqPixel {
    pub y: f64,
    pub i: f64,
    pub q: f64,
}

impl YiqPixel {
    pub const fn new(y: f64, i: f64, q: f64) -> Self {
        Self { y, i, q }
    }
}

type Mat3 = [[f64; 3]; 3];

const YCGCR_OFFSET: [f64; 3] = [16.0, 128.0, 128.0];

const RGB_TO_YCGCR: Mat3 = [
    [65.481, 128.553, 24.966],
    [-81.085, 112.0, -30.915],
    [112.0, -93.786, -18.214],
];

const RGB_TO_YIQ: Mat3 = [
    [0.299, 0.587, 0.114],
    [0.596, -0.274, -0.322],
    [0.212, -0.523, 0.311],
];

const YIQ_TO_RGB: Mat3 = invert(&RGB_TO_YIQ);

const fn invert(m: &Mat3) -> Mat3 {
    // adjugate / determinant
    let c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    let c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    let c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    let det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    let inv = 1.0 / det;
    [
        [
            c00 * inv,
            (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv,
            (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv,
        ],
        [
            c01 * inv,
            (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv,
            (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv,
        ],
        [
            c02 * inv,
            (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv,
            (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv,
        ],
    ]
}

#[inline]
fn mul(m: &Mat3, v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

pub fn rgb_to_ycgcr(p: RgbPixel) -> YCgCrPixel {
    let [r, g, b] = p.as_f64();
    let [y, cg, cr] = mul(&RGB_TO_YCGCR, [r / 255.0, g / 255.0, b / 255.0]);
    YCgCrPixel {
        y: YCGCR_OFFSET[0] + y,
        cg: YCGCR_OFFSET[1] + cg,
        cr: YCGCR_OFFSET[2] + cr,
    }
}

pub fn rgb_to_yiq(p: RgbPixel) -> YiqPixel {
    let [y, i, q] = mul(&RGB_TO_YIQ, p.as_f64());
    YiqPixel { y, i, q }
}

/// Inverse YIQ transform, rounded half away from zero and clamped to
/// [0, 255]. Total over any real triple.
pub fn yiq_to_rgb(p: YiqPixel) -> RgbPixel {
    let [r, g, b] = mul(&YIQ_TO_RGB, [p.y, p.i, p.q]);
    RgbPixel::new(quantize(r), quantize(g), quantize(b))
}

/// Luma used by the texture detector; the Y row of the YIQ transform.
pub fn rgb_to_gray(p: RgbPixel) -> f64 {
    let [r, g, b] = p.as_f64();
    RGB_TO_YIQ[0][0] * r + RGB_TO_YIQ[0][1] * g + RGB_TO_YIQ[0][2] * b
}

/// Round half away from zero, then saturate to a byte.
pub fn quantize(v: f64) -> u8 {
    // NaN never reaches here from finite inputs; clamp maps it to 0 anyway.
    let r = v.round();
    if r.is_nan() {
        0
    } else {
        r.clamp(0.0, 255.0) as u8
    }
}

//! Literal reference implementations and scene generators for tests.
//!
//! Nothing here calls into the library's kernels: formulas are written out
//! term by term, morphology is evaluated per pixel from its set definition,
//! and the YIQ inverse is obtained by Gaussian elimination rather than the
//! closed-form adjugate the library uses.

#![allow(dead_code)]

use rand::Rng;
use skinforge_core::{AdjustRegisters, Frame, Plane, RgbPixel, SkinModelParams};

pub fn ref_ycgcr(p: RgbPixel) -> (f64, f64, f64) {
    let (r, g, b) = (p.r as f64 / 255.0, p.g as f64 / 255.0, p.b as f64 / 255.0);
    (
        16.0 + 65.481 * r + 128.553 * g + 24.966 * b,
        128.0 - 81.085 * r + 112.0 * g - 30.915 * b,
        128.0 + 112.0 * r - 93.786 * g - 18.214 * b,
    )
}

pub fn ref_yiq(p: RgbPixel) -> (f64, f64, f64) {
    let (r, g, b) = (p.r as f64, p.g as f64, p.b as f64);
    (
        0.299 * r + 0.587 * g + 0.114 * b,
        0.596 * r - 0.274 * g - 0.322 * b,
        0.212 * r - 0.523 * g + 0.311 * b,
    )
}

/// Solves `M x = v` for the YIQ matrix by Gaussian elimination with
/// partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn ref_yiq_inverse(y: f64, i: f64, q: f64) -> [f64; 3] {
    let mut a = [
        [0.299, 0.587, 0.114, y],
        [0.596, -0.274, -0.322, i],
        [0.212, -0.523, 0.311, q],
    ];
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&x, &z| a[x][col].abs().partial_cmp(&a[z][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        for row in 0..3 {
            if row != col {
                let f = a[row][col] / a[col][col];
                for k in col..4 {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
    }
    [a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]]
}

pub fn ref_heuristic(p: RgbPixel, m: &SkinModelParams) -> bool {
    let dark = p.r < m.dark_limit && p.g < m.dark_limit && p.b < m.dark_limit;
    let sub_bright = p.r < m.bright_limit && p.g < m.bright_limit && p.b < m.bright_limit;
    let ordered = p.r > p.g && p.g > p.b;
    dark || (sub_bright && !ordered)
}

/// Cr band written in its printed form, `Cr in [-Cg + lo, -Cg + hi]`.
pub fn ref_classify(p: RgbPixel, gradient: f64, m: &SkinModelParams) -> bool {
    let (_, cg, cr) = ref_ycgcr(p);
    let cgcr = cr >= -cg + m.cgcr_sum_lo
        && cr <= -cg + m.cgcr_sum_hi
        && cg >= m.cg_lo
        && cg <= m.cg_hi;
    let (_, i, q) = ref_yiq(p);
    let iq = i >= m.i_lo && i <= m.i_hi && q >= m.q_lo && q <= m.q_hi;
    let texture = gradient > m.gradient_threshold || ref_heuristic(p, m);
    cgcr && iq && !texture
}

pub fn disk(radius: i32) -> Vec<(i32, i32)> {
    let mut v = Vec::new();
    for dy in -radius..=radius {
        for dx in -radius..=radius {
            if dx * dx + dy * dy <= radius * radius {
                v.push((dx, dy));
            }
        }
    }
    v
}

pub type Grid<T> = Vec<Vec<T>>;

fn at<T: Copy>(g: &Grid<T>, x: i64, y: i64) -> Option<T> {
    if y < 0 || x < 0 {
        return None;
    }
    g.get(y as usize)?.get(x as usize).copied()
}

pub fn ref_erode(m: &Grid<bool>, se: &[(i32, i32)]) -> Grid<bool> {
    let (h, w) = (m.len(), m[0].len());
    (0..h)
        .map(|y| {
            (0..w)
                .map(|x| {
                    se.iter().all(|&(dx, dy)| {
                        at(m, x as i64 + dx as i64, y as i64 + dy as i64) == Some(true)
                    })
                })
                .collect()
        })
        .collect()
}

pub fn ref_dilate(m: &Grid<bool>, se: &[(i32, i32)]) -> Grid<bool> {
    let (h, w) = (m.len(), m[0].len());
    (0..h)
        .map(|y| {
            (0..w)
                .map(|x| {
                    se.iter().any(|&(dx, dy)| {
                        at(m, x as i64 + dx as i64, y as i64 + dy as i64) == Some(true)
                    })
                })
                .collect()
        })
        .collect()
}

pub fn ref_open(m: &Grid<bool>, se: &[(i32, i32)]) -> Grid<bool> {
    ref_dilate(&ref_erode(m, se), se)
}

pub fn ref_gradient(g: &Grid<f64>) -> Grid<f64> {
    let (h, w) = (g.len() as i64, g[0].len() as i64);
    (0..h)
        .map(|y| {
            (0..w)
                .map(|x| {
                    let mut vals = vec![];
                    for dy in -1..=1 {
                        for dx in -1..=1 {
                            let sx = (x + dx).clamp(0, w - 1);
                            let sy = (y + dy).clamp(0, h - 1);
                            vals.push(g[sy as usize][sx as usize]);
                        }
                    }
                    let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
                    let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
                    hi - lo
                })
                .collect()
        })
        .collect()
}

pub fn to_grid<T: Copy>(p: &Plane<T>) -> Grid<T> {
    p.rows().map(|r| r.to_vec()).collect()
}

pub fn from_grid<T: Copy>(g: &Grid<T>) -> Plane<T> {
    Plane::from_vec(g[0].len(), g.len(), g.iter().flatten().copied().collect()).unwrap()
}

/// Opened skin mask computed entirely from the reference definitions.
pub fn ref_detect(frame: &Frame, m: &SkinModelParams, radius: i32) -> Grid<bool> {
    let px = to_grid(frame);
    let gray: Grid<f64> = px
        .iter()
        .map(|r| r.iter().map(|&p| ref_yiq(p).0).collect())
        .collect();
    let grad = ref_gradient(&gray);
    let raw: Grid<bool> = px
        .iter()
        .zip(&grad)
        .map(|(r, gr)| r.iter().zip(gr).map(|(&p, &g)| ref_classify(p, g, m)).collect())
        .collect();
    ref_open(&raw, &disk(radius))
}

fn ref_quantize(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Adjusted output from the reference path.
pub fn ref_process(frame: &Frame, m: &SkinModelParams, regs: AdjustRegisters, radius: i32) -> Frame {
    let mask = ref_detect(frame, m, radius);
    let (fi, fq) = (
        regs.i_range_q15 as f64 / 32768.0,
        regs.q_range_q15 as f64 / 32768.0,
    );
    Plane::from_fn(frame.width(), frame.height(), |x, y| {
        let (yy, mut i, mut q) = ref_yiq(*frame.get(x, y));
        if mask[y][x] {
            i += i * fi;
            q += q * fq;
        }
        let [r, g, b] = ref_yiq_inverse(yy, i, q);
        RgbPixel::new(ref_quantize(r), ref_quantize(g), ref_quantize(b))
    })
}

pub const SKIN: RgbPixel = RgbPixel::new(200, 150, 120);

/// Random scene: a background, several skin-toned rectangles and disks with
/// jitter, and sprinkled noise pixels. Gives the classifier, the gradient
/// and the opening all something to do.
pub fn random_scene<R: Rng>(rng: &mut R, w: usize, h: usize) -> Frame {
    let bg = match rng.random_range(0..3) {
        0 => RgbPixel::gray(rng.random_range(0..=255)),
        1 => RgbPixel::new(rng.random(), rng.random(), rng.random()),
        _ => SKIN,
    };
    let mut f = Plane::filled(w, h, bg);
    let shapes = rng.random_range(1..8);
    for _ in 0..shapes {
        let base = RgbPixel::new(
            rng.random_range(170..=230),
            rng.random_range(120..=175),
            rng.random_range(90..=145),
        );
        let (cx, cy) = (rng.random_range(0..w) as i64, rng.random_range(0..h) as i64);
        let (rx, ry) = (
            rng.random_range(1..=w.max(2) / 2) as i64,
            rng.random_range(1..=h.max(2) / 2) as i64,
        );
        let round = rng.random_bool(0.5);
        let jitter = rng.random_range(0..12u8);
        for y in 0..h as i64 {
            for x in 0..w as i64 {
                let (dx, dy) = (x - cx, y - cy);
                let inside = if round {
                    dx * dx * ry * ry + dy * dy * rx * rx <= rx * rx * ry * ry
                } else {
                    dx.abs() <= rx && dy.abs() <= ry
                };
                if inside {
                    let mut j = |c: u8| {
                        let d = if jitter == 0 { 0 } else { rng.random_range(0..=jitter) };
                        c.saturating_sub(d)
                    };
                    f.set(x as usize, y as usize, RgbPixel::new(j(base.r), j(base.g), j(base.b)));
                }
            }
        }
    }
    let noise = rng.random_range(0.0..0.08);
    for y in 0..h {
        for x in 0..w {
            if rng.random_bool(noise) {
                f.set(x, y, RgbPixel::new(rng.random(), rng.random(), rng.random()));
            }
        }
    }
    f
}

pub fn random_mask<R: Rng>(rng: &mut R, w: usize, h: usize, density: f64) -> Plane<bool> {
    Plane::from_fn(w, h, |_, _| rng.random_bool(density))
}

pub fn random_regs<R: Rng>(rng: &mut R) -> AdjustRegisters {
    AdjustRegisters::new(rng.random(), rng.random())
}

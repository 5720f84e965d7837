//! Grayscale gradient and binary erosion, dilation and opening.
//!
//! Binary operators treat everything outside the mask as background. The
//! grayscale gradient replicates edge pixels, so a flat border reads as
//! zero texture.
//!
//! The row kernels here are shared by the full-frame functions and by the
//! streaming engine in [`crate::pipeline`].

use std::collections::BTreeSet;

use crate::exec::{for_each_row, Parallelism};
use crate::plane::{BinaryMask, GrayPlane, Plane};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MorphError {
    #[error("disk radius must be at least 1, got {0}")]
    InvalidRadius(u32),
    #[error("structuring element must contain the origin")]
    MissingOrigin,
    #[error("structuring element is not symmetric: ({0}, {1}) has no mirror")]
    Asymmetric(i32, i32),
}

/// A horizontal stretch of offsets `dx in lo..=hi` at a fixed `dy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Run {
    pub dy: i32,
    pub lo: i32,
    pub hi: i32,
}

/// A set of `(dx, dy)` offsets around an anchor at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuringElement {
    offsets: Vec<(i32, i32)>,
    runs: Vec<Run>,
}

impl StructuringElement {
    /// Validates that the set contains `(0, 0)` and is closed under negation.
    pub fn from_offsets(
        offsets: impl IntoIterator<Item = (i32, i32)>,
    ) -> Result<Self, MorphError> {
        // BTreeSet sorts by (dx, dy); re-sort by row for run building
        let set: BTreeSet<(i32, i32)> = offsets.into_iter().collect();
        if !set.contains(&(0, 0)) {
            return Err(MorphError::MissingOrigin);
        }
        if let Some(&(dx, dy)) = set.iter().find(|&&(dx, dy)| !set.contains(&(-dx, -dy))) {
            return Err(MorphError::Asymmetric(dx, dy));
        }
        let mut offsets: Vec<(i32, i32)> = set.into_iter().collect();
        offsets.sort_by_key(|&(dx, dy)| (dy, dx));

        let mut runs: Vec<Run> = Vec::new();
        for &(dx, dy) in &offsets {
            match runs.last_mut() {
                Some(run) if run.dy == dy && run.hi + 1 == dx => run.hi = dx,
                _ => runs.push(Run { dy, lo: dx, hi: dx }),
            }
        }
        Ok(Self { offsets, runs })
    }

    /// Offsets sorted by `(dy, dx)`.
    pub fn offsets(&self) -> &[(i32, i32)] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// Largest `|dy|`: how many rows above and below a window must see.
    pub fn vertical_reach(&self) -> usize {
        self.offsets
            .iter()
            .map(|&(_, dy)| dy.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn runs(&self) -> &[Run] {
        &self.runs
    }
}

/// Lattice disk: every `(dx, dy)` with `dx² + dy² <= radius²`.
pub fn disk_se(radius: u32) -> Result<StructuringElement, MorphError> {
    if radius < 1 {
        return Err(MorphError::InvalidRadius(radius));
    }
    let r = radius as i32;
    let r2 = (r as i64) * (r as i64);
    let offsets = (-r..=r).flat_map(|dy| {
        (-r..=r).filter_map(move |dx| {
            ((dx as i64).pow(2) + (dy as i64).pow(2) <= r2).then_some((dx, dy))
        })
    });
    StructuringElement::from_offsets(offsets)
}

/// A binary row with its running popcount, so any horizontal run can be
/// tested in O(1).
#[derive(Debug, Clone)]
pub(crate) struct CountedRow {
    pub bits: Vec<bool>,
    prefix: Vec<u32>,
}

impl CountedRow {
    pub fn new(bits: Vec<bool>) -> Self {
        let mut prefix = Vec::with_capacity(bits.len() + 1);
        let mut acc = 0u32;
        prefix.push(0);
        for &b in &bits {
            acc += b as u32;
            prefix.push(acc);
        }
        Self { bits, prefix }
    }

    fn width(&self) -> usize {
        self.bits.len()
    }

    /// Set bits in `lo..=hi`, clipped to the row.
    fn count(&self, lo: isize, hi: isize) -> u32 {
        let w = self.width() as isize;
        let lo = lo.max(0);
        let hi = hi.min(w - 1);
        if lo > hi {
            return 0;
        }
        self.prefix[hi as usize + 1] - self.prefix[lo as usize]
    }
}

/// Erodes one output row. `row_at(dy)` returns the source row at offset
/// `dy` from the output row, or `None` when it lies outside the image.
pub(crate) fn erode_row<'a>(
    se: &StructuringElement,
    row_at: impl Fn(i32) -> Option<&'a CountedRow>,
    out: &mut [bool],
) {
    let w = out.len() as isize;
    out.fill(true);
    for run in se.runs() {
        let Some(src) = row_at(run.dy) else {
            out.fill(false);
            return;
        };
        let need = (run.hi - run.lo + 1) as u32;
        for (x, o) in out.iter_mut().enumerate() {
            if !*o {
                continue;
            }
            let lo = x as isize + run.lo as isize;
            let hi = x as isize + run.hi as isize;
            *o = lo >= 0 && hi < w && src.count(lo, hi) == need;
        }
    }
}

pub(crate) fn dilate_row<'a>(
    se: &StructuringElement,
    row_at: impl Fn(i32) -> Option<&'a CountedRow>,
    out: &mut [bool],
) {
    out.fill(false);
    for run in se.runs() {
        let Some(src) = row_at(run.dy) else {
            continue;
        };
        for (x, o) in out.iter_mut().enumerate() {
            if *o {
                continue;
            }
            // SE is symmetric, so the reflected run is the run itself
            *o = src.count(x as isize + run.lo as isize, x as isize + run.hi as isize) > 0;
        }
    }
}

/// Max minus min over the 3x3 window centred on each pixel of `rows[1]`.
/// Callers pass replicated rows at the top and bottom border.
pub(crate) fn gradient_row(rows: [&[f64]; 3], out: &mut [f64]) {
    let w = out.len();
    for (x, o) in out.iter_mut().enumerate() {
        let x0 = x.saturating_sub(1);
        let x1 = (x + 1).min(w - 1);
        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        for row in rows {
            for &v in &row[x0..=x1] {
                hi = hi.max(v);
                lo = lo.min(v);
            }
        }
        *o = hi - lo;
    }
}

pub fn gray_gradient(img: &GrayPlane) -> GrayPlane {
    gray_gradient_with(img, Parallelism::default())
}

pub fn gray_gradient_with(img: &GrayPlane, par: Parallelism) -> GrayPlane {
    let (w, h) = img.dims();
    let mut out = vec![0.0; w * h];
    for_each_row(&mut out, w, par, |y, row| {
        let above = img.row(y.saturating_sub(1));
        let below = img.row((y + 1).min(h - 1));
        gradient_row([above, img.row(y), below], row);
    });
    Plane::from_vec(w, h, out).expect("dimensions preserved")
}

fn counted_rows(mask: &BinaryMask) -> Vec<CountedRow> {
    mask.rows().map(|r| CountedRow::new(r.to_vec())).collect()
}

fn row_lookup(rows: &[CountedRow], y: usize, dy: i32) -> Option<&CountedRow> {
    let sy = y as isize + dy as isize;
    if sy < 0 {
        return None;
    }
    rows.get(sy as usize)
}

pub fn binary_erode(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    binary_erode_with(mask, se, Parallelism::default())
}

pub fn binary_erode_with(
    mask: &BinaryMask,
    se: &StructuringElement,
    par: Parallelism,
) -> BinaryMask {
    let (w, h) = mask.dims();
    let rows = counted_rows(mask);
    let mut out = vec![false; w * h];
    for_each_row(&mut out, w, par, |y, row| {
        erode_row(se, |dy| row_lookup(&rows, y, dy), row)
    });
    Plane::from_vec(w, h, out).expect("dimensions preserved")
}

pub fn binary_dilate(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    binary_dilate_with(mask, se, Parallelism::default())
}

pub fn binary_dilate_with(
    mask: &BinaryMask,
    se: &StructuringElement,
    par: Parallelism,
) -> BinaryMask {
    let (w, h) = mask.dims();
    let rows = counted_rows(mask);
    let mut out = vec![false; w * h];
    for_each_row(&mut out, w, par, |y, row| {
        dilate_row(se, |dy| row_lookup(&rows, y, dy), row)
    });
    Plane::from_vec(w, h, out).expect("dimensions preserved")
}

/// Erosion followed by dilation with the same element.
pub fn binary_open(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    binary_open_with(mask, se, Parallelism::default())
}

pub fn binary_open_with(
    mask: &BinaryMask,
    se: &StructuringElement,
    par: Parallelism,
) -> BinaryMask {
    binary_dilate_with(&binary_erode_with(mask, se, par), se, par)
}

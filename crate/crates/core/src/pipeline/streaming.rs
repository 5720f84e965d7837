//! Single-pass, row-at-a-time engine.
//!
//! Four bounded row windows carry data between stages:
//!
//! * a 3-row line window (RGB and gray) feeding the 3x3 gradient and the
//!   classifier,
//! * a `2r+1`-row window of raw mask rows feeding erosion,
//! * a `2r+1`-row window of eroded rows feeding dilation,
//! * a YIQ delay line holding the rows still waiting for their opened mask
//!   row, `2r+2` rows deep.
//!
//! `r` is the vertical reach of the opening element (2 for the default
//! disk). Nothing in the engine grows with frame height.

use std::collections::VecDeque;

use crate::colorspace::{rgb_to_gray, rgb_to_yiq, yiq_to_rgb, RgbPixel, YiqPixel};
use crate::morphology::{dilate_row, erode_row, gradient_row, CountedRow};
use crate::plane::{Frame, Plane};
use crate::skin_model::classify_pixel;
use crate::tone_adjust::adjust_row;

use super::{PipelineConfig, PipelineError, PipelineOutput, PipelineStats, MIN_STREAMING_SIDE};

/// One finished output row.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRow {
    pub y: usize,
    pub pixels: Vec<RgbPixel>,
    pub mask: Vec<bool>,
}

/// Peak number of rows each window has held.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BufferProbe {
    pub line_rows: usize,
    pub erode_rows: usize,
    pub dilate_rows: usize,
    pub yiq_rows: usize,
}

impl BufferProbe {
    /// Rows held by the three morphology-facing windows.
    pub fn window_rows(&self) -> usize {
        self.line_rows + self.erode_rows + self.dilate_rows
    }

    pub fn total_rows(&self) -> usize {
        self.window_rows() + self.yiq_rows
    }
}

/// Consecutive rows `base..base + rows.len()`.
#[derive(Debug)]
struct Window<T> {
    base: usize,
    rows: VecDeque<T>,
    peak: usize,
}

impl<T> Window<T> {
    fn new() -> Self {
        Self {
            base: 0,
            rows: VecDeque::new(),
            peak: 0,
        }
    }

    fn end(&self) -> usize {
        self.base + self.rows.len()
    }

    fn push(&mut self, row: T) {
        self.rows.push_back(row);
        self.peak = self.peak.max(self.rows.len());
    }

    fn get(&self, idx: usize) -> &T {
        assert!(
            idx >= self.base && idx < self.end(),
            "row {idx} not retained (window {}..{})",
            self.base,
            self.end()
        );
        &self.rows[idx - self.base]
    }

    fn drop_below(&mut self, idx: usize) {
        while self.base < idx && !self.rows.is_empty() {
            self.rows.pop_front();
            self.base += 1;
        }
    }

    fn pop_front(&mut self) -> Option<T> {
        let row = self.rows.pop_front()?;
        self.base += 1;
        Some(row)
    }
}

struct InputLine {
    rgb: Vec<RgbPixel>,
    gray: Vec<f64>,
}

/// Incremental engine: feed rows with [`push_row`](Self::push_row), then
/// call [`finish`](Self::finish) to flush the rows still in flight.
pub struct StreamingPipeline {
    cfg: PipelineConfig,
    width: usize,
    reach: usize,
    lines: Window<InputLine>,
    raw: Window<CountedRow>,
    eroded: Window<CountedRow>,
    yiq: Window<Vec<YiqPixel>>,
    rows_in: usize,
    next_classify: usize,
    next_erode: usize,
    next_dilate: usize,
    finished: bool,
    stats: PipelineStats,
}

impl StreamingPipeline {
    pub fn new(width: usize, cfg: PipelineConfig) -> Result<Self, PipelineError> {
        if width < MIN_STREAMING_SIDE {
            return Err(PipelineError::UnsupportedSize {
                width,
                height: 0,
                min: MIN_STREAMING_SIDE,
            });
        }
        cfg.model.validate()?;
        let reach = cfg.opening_se.vertical_reach();
        Ok(Self {
            cfg,
            width,
            reach,
            lines: Window::new(),
            raw: Window::new(),
            eroded: Window::new(),
            yiq: Window::new(),
            rows_in: 0,
            next_classify: 0,
            next_erode: 0,
            next_dilate: 0,
            finished: false,
            stats: PipelineStats::default(),
        })
    }

    pub fn probe(&self) -> BufferProbe {
        BufferProbe {
            line_rows: self.lines.peak,
            erode_rows: self.raw.peak,
            dilate_rows: self.eroded.peak,
            yiq_rows: self.yiq.peak,
        }
    }

    pub fn stats(&self) -> PipelineStats {
        self.stats
    }

    pub fn push_row(&mut self, row: &[RgbPixel]) -> Result<Vec<OutputRow>, PipelineError> {
        if self.finished {
            return Err(PipelineError::Finished);
        }
        if row.len() != self.width {
            return Err(PipelineError::RowWidth {
                row: self.rows_in,
                expected: self.width,
                actual: row.len(),
            });
        }
        // classifying row k-1 needs rows k-2..=k
        self.lines.drop_below(self.next_classify.saturating_sub(1));
        self.lines.push(InputLine {
            rgb: row.to_vec(),
            gray: row.iter().map(|&p| rgb_to_gray(p)).collect(),
        });
        self.yiq.push(row.iter().map(|&p| rgb_to_yiq(p)).collect());
        self.rows_in += 1;
        self.stats.total += self.width;

        let mut out = Vec::new();
        self.advance(&mut out);
        Ok(out)
    }

    /// Marks end of frame and drains the remaining rows.
    pub fn finish(&mut self) -> Result<Vec<OutputRow>, PipelineError> {
        if self.finished {
            return Err(PipelineError::Finished);
        }
        if self.rows_in < MIN_STREAMING_SIDE {
            return Err(PipelineError::UnsupportedSize {
                width: self.width,
                height: self.rows_in,
                min: MIN_STREAMING_SIDE,
            });
        }
        self.finished = true;
        let mut out = Vec::new();
        self.advance(&mut out);
        debug_assert_eq!(self.next_dilate, self.rows_in);
        Ok(out)
    }

    fn advance(&mut self, out: &mut Vec<OutputRow>) {
        loop {
            let mut progressed = self.drain_morphology(out);
            if self.classify_ready() {
                self.classify_next();
                progressed = true;
            }
            if !progressed {
                break;
            }
        }
    }

    fn drain_morphology(&mut self, out: &mut Vec<OutputRow>) -> bool {
        let mut progressed = false;
        // downstream first, so each window is drained before it is refilled
        loop {
            if self.dilate_ready() {
                out.push(self.dilate_next());
            } else if self.erode_ready() {
                self.erode_next();
            } else {
                return progressed;
            }
            progressed = true;
        }
    }

    fn classify_ready(&self) -> bool {
        let y = self.next_classify;
        y < self.rows_in && (y + 1 < self.rows_in || self.finished)
    }

    fn erode_ready(&self) -> bool {
        let y = self.next_erode;
        let avail = self.raw.end();
        y < avail && (y + self.reach < avail || (self.finished && avail == self.rows_in))
    }

    fn dilate_ready(&self) -> bool {
        let y = self.next_dilate;
        let avail = self.eroded.end();
        y < avail && (y + self.reach < avail || (self.finished && avail == self.rows_in))
    }

    fn classify_next(&mut self) {
        let y = self.next_classify;
        let last = self.rows_in - 1;
        let above = self.lines.get(y.saturating_sub(1));
        let cur = self.lines.get(y);
        let below = self.lines.get((y + 1).min(last));

        let mut gradient = vec![0.0; self.width];
        gradient_row([&above.gray, &cur.gray, &below.gray], &mut gradient);
        let bits: Vec<bool> = cur
            .rgb
            .iter()
            .zip(&gradient)
            .map(|(&p, &g)| classify_pixel(p, g, &self.cfg.model))
            .collect();
        self.stats.pre_opening += bits.iter().filter(|&&b| b).count();
        self.raw.push(CountedRow::new(bits));
        self.next_classify += 1;
    }

    fn erode_next(&mut self) {
        let y = self.next_erode;
        let mut bits = vec![false; self.width];
        {
            let (raw, height) = (&self.raw, self.known_height());
            erode_row(
                &self.cfg.opening_se,
                |dy| offset_row(raw, y, dy, height),
                &mut bits,
            );
        }
        self.eroded.push(CountedRow::new(bits));
        self.next_erode += 1;
        self.raw.drop_below(self.next_erode.saturating_sub(self.reach));
    }

    fn dilate_next(&mut self) -> OutputRow {
        let y = self.next_dilate;
        let mut mask = vec![false; self.width];
        {
            let (eroded, height) = (&self.eroded, self.known_height());
            dilate_row(
                &self.cfg.opening_se,
                |dy| offset_row(eroded, y, dy, height),
                &mut mask,
            );
        }
        self.next_dilate += 1;
        self.eroded.drop_below(self.next_dilate.saturating_sub(self.reach));

        debug_assert_eq!(self.yiq.base, y);
        let mut yiq = self.yiq.pop_front().expect("yiq row buffered");
        adjust_row(&mut yiq, &mask, self.cfg.regs);
        self.stats.post_opening += mask.iter().filter(|&&b| b).count();
        OutputRow {
            y,
            pixels: yiq.into_iter().map(yiq_to_rgb).collect(),
            mask,
        }
    }

    /// Frame height once known; until then every requested row is
    /// guaranteed to have arrived.
    fn known_height(&self) -> usize {
        if self.finished {
            self.rows_in
        } else {
            usize::MAX
        }
    }
}

fn offset_row(
    window: &Window<CountedRow>,
    y: usize,
    dy: i32,
    height: usize,
) -> Option<&CountedRow> {
    let idx = y as isize + dy as isize;
    if idx < 0 || idx as usize >= height {
        return None;
    }
    Some(window.get(idx as usize))
}

pub fn process_streaming(
    frame: &Frame,
    cfg: &PipelineConfig,
) -> Result<PipelineOutput, PipelineError> {
    process_streaming_probed(frame, cfg).map(|(out, _)| out)
}

/// Like [`process_streaming`], also returning the peak window occupancy.
pub fn process_streaming_probed(
    frame: &Frame,
    cfg: &PipelineConfig,
) -> Result<(PipelineOutput, BufferProbe), PipelineError> {
    let (w, h) = frame.dims();
    if w < MIN_STREAMING_SIDE || h < MIN_STREAMING_SIDE {
        return Err(PipelineError::UnsupportedSize {
            width: w,
            height: h,
            min: MIN_STREAMING_SIDE,
        });
    }
    let mut engine = StreamingPipeline::new(w, cfg.clone())?;
    let mut pixels = Vec::with_capacity(w * h);
    let mut mask = cfg.emit_mask.then(|| Vec::with_capacity(w * h));
    let mut sink = |rows: Vec<OutputRow>| {
        for row in rows {
            debug_assert_eq!(row.y * w, pixels.len());
            pixels.extend(row.pixels);
            if let Some(m) = mask.as_mut() {
                m.extend(row.mask);
            }
        }
    };
    for row in frame.rows() {
        sink(engine.push_row(row)?);
    }
    sink(engine.finish()?);
    let output = PipelineOutput {
        adjusted: Plane::from_vec(w, h, pixels).expect("every row emitted"),
        skin_mask: mask.map(|m| Plane::from_vec(w, h, m).expect("every row emitted")),
        stats: engine.stats(),
    };
    Ok((output, engine.probe()))
}

//! End-to-end detection and adjustment.
//!
//! Stages, in order: per-pixel gray and color conversion, 3x3 morphological
//! gradient, the three-input AND classifier, binary opening, and masked
//! tone adjustment followed by the YIQ to RGB output conversion.
//!
//! [`process_oracle`] runs each stage over the whole frame. [`process_streaming`]
//! (and the incremental [`StreamingPipeline`]) consumes rows one at a time
//! and holds only a fixed number of rows per stage. The two agree bit for
//! bit on every frame of at least 5x5 pixels.

mod oracle;
mod streaming;

pub use oracle::{detect_oracle, detect_stages, process_oracle, process_oracle_with, DetectStages};
pub use streaming::{
    process_streaming, process_streaming_probed, BufferProbe, OutputRow, StreamingPipeline,
};

use crate::morphology::{disk_se, StructuringElement};
use crate::plane::{BinaryMask, Frame};
use crate::skin_model::{ModelError, SkinModelParams};
use crate::tone_adjust::AdjustRegisters;

/// Smallest frame side the streaming engine accepts.
pub const MIN_STREAMING_SIDE: usize = 5;

/// Radius of the default opening disk.
pub const DEFAULT_OPENING_RADIUS: u32 = 2;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PipelineError {
    #[error("streaming needs at least {min}x{min} pixels, got {width}x{height}")]
    UnsupportedSize {
        width: usize,
        height: usize,
        min: usize,
    },
    #[error("row {row} has {actual} pixels, expected {expected}")]
    RowWidth {
        row: usize,
        expected: usize,
        actual: usize,
    },
    #[error("pipeline already finished")]
    Finished,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub model: SkinModelParams,
    pub regs: AdjustRegisters,
    pub opening_se: StructuringElement,
    /// Keep the full-frame skin mask in the output. Without it the
    /// streaming engine retains no per-frame mask state.
    pub emit_mask: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            model: SkinModelParams::default(),
            regs: AdjustRegisters::ZERO,
            opening_se: disk_se(DEFAULT_OPENING_RADIUS).expect("radius is positive"),
            emit_mask: true,
        }
    }
}

impl PipelineConfig {
    pub fn with_regs(mut self, regs: AdjustRegisters) -> Self {
        self.regs = regs;
        self
    }

    pub fn with_model(mut self, model: SkinModelParams) -> Self {
        self.model = model;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineStats {
    /// Pixels set by the classifier before opening.
    pub pre_opening: usize,
    /// Pixels left after opening, i.e. the ones that were adjusted.
    pub post_opening: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub adjusted: Frame,
    /// Opened skin mask; `None` when the config did not ask for it.
    pub skin_mask: Option<BinaryMask>,
    pub stats: PipelineStats,
}

/// Reporting view over [`PipelineStats`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatsSummary {
    pub skin_pixels: usize,
    pub total_pixels: usize,
    pub coverage: f64,
    pub pre_opening: usize,
    pub post_opening: usize,
    pub removed_by_opening: usize,
}

pub fn pipeline_stats(out: &PipelineOutput) -> StatsSummary {
    let s = out.stats;
    StatsSummary {
        skin_pixels: s.post_opening,
        total_pixels: s.total,
        coverage: if s.total == 0 {
            0.0
        } else {
            s.post_opening as f64 / s.total as f64
        },
        pre_opening: s.pre_opening,
        post_opening: s.post_opening,
        removed_by_opening: s.pre_opening - s.post_opening,
    }
}

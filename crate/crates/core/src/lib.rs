//! Skin-tone detection and user-steered tone adjustment.
//!
//! Pixels are classified as skin when they fall inside both a Cg-Cr band
//! (YCgCr space) and an I-Q rectangle (YIQ space), are not flagged as
//! texture, and survive a morphological opening. Detected skin is then
//! shifted along the I and Q axes by two Q15 registers and converted back
//! to RGB.
//!
//! Two interchangeable engines are provided in [`pipeline`]: a full-frame
//! reference that runs stage after stage over whole planes, and a streaming
//! engine that consumes one row at a time through bounded line buffers.
//! Both produce bit-identical output.

pub mod colorspace;
pub mod exec;
pub mod imageio;
pub mod morphology;
pub mod pipeline;
pub mod plane;
pub mod skin_model;
pub mod tone_adjust;

pub use colorspace::{RgbPixel, YCgCrPixel, YiqPixel};
pub use exec::Parallelism;
pub use morphology::StructuringElement;
pub use pipeline::{PipelineConfig, PipelineOutput, PipelineStats};
pub use plane::{BinaryMask, Frame, GrayPlane, Plane, YiqPlane};
pub use skin_model::SkinModelParams;
pub use tone_adjust::{AdjustRegisters, Direction};

use crate::colorspace::{rgb_to_gray, rgb_to_yiq, yiq_to_rgb};
use crate::exec::{for_each_row, map_slice, Parallelism};
use crate::morphology::{binary_open_with, gray_gradient_with};
use crate::plane::{BinaryMask, Frame, GrayPlane, Plane};
use crate::skin_model::classify_pixel;
use crate::tone_adjust::apply_adjustment_with;

use super::{PipelineConfig, PipelineOutput, PipelineStats};

/// Every intermediate plane of the detection half of the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectStages {
    pub gray: GrayPlane,
    pub gradient: GrayPlane,
    /// Classifier output before opening.
    pub raw: BinaryMask,
    pub opened: BinaryMask,
}

pub fn detect_stages(frame: &Frame, cfg: &PipelineConfig, par: Parallelism) -> DetectStages {
    let (w, h) = frame.dims();
    let gray = Plane::from_vec(w, h, map_slice(frame.as_slice(), par, |&p| rgb_to_gray(p)))
        .expect("dimensions preserved");
    let gradient = gray_gradient_with(&gray, par);

    let mut raw = vec![false; w * h];
    for_each_row(&mut raw, w, par, |y, row| {
        for ((out, &p), &g) in row.iter_mut().zip(frame.row(y)).zip(gradient.row(y)) {
            *out = classify_pixel(p, g, &cfg.model);
        }
    });
    let raw = Plane::from_vec(w, h, raw).expect("dimensions preserved");
    let opened = binary_open_with(&raw, &cfg.opening_se, par);
    DetectStages {
        gray,
        gradient,
        raw,
        opened,
    }
}

pub fn detect_oracle(frame: &Frame, cfg: &PipelineConfig) -> BinaryMask {
    detect_stages(frame, cfg, Parallelism::default()).opened
}

pub fn process_oracle(frame: &Frame, cfg: &PipelineConfig) -> PipelineOutput {
    process_oracle_with(frame, cfg, Parallelism::default())
}

pub fn process_oracle_with(frame: &Frame, cfg: &PipelineConfig, par: Parallelism) -> PipelineOutput {
    let stages = detect_stages(frame, cfg, par);
    let (w, h) = frame.dims();
    let yiq = Plane::from_vec(w, h, map_slice(frame.as_slice(), par, |&p| rgb_to_yiq(p)))
        .expect("dimensions preserved");
    let adjusted_yiq =
        apply_adjustment_with(&yiq, &stages.opened, cfg.regs, par).expect("mask matches frame");
    let adjusted = Plane::from_vec(
        w,
        h,
        map_slice(adjusted_yiq.as_slice(), par, |&p| yiq_to_rgb(p)),
    )
    .expect("dimensions preserved");

    let stats = PipelineStats {
        pre_opening: stages.raw.count_true(),
        post_opening: stages.opened.count_true(),
        total: w * h,
    };
    PipelineOutput {
        adjusted,
        skin_mask: cfg.emit_mask.then_some(stages.opened),
        stats,
    }
}

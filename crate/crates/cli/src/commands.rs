use std::fmt;
use std::fs;
use std::path::Path;

use log::{debug, info, warn};
use skinforge_core::imageio::{self, ImageError, ImageFormat};
use skinforge_core::pipeline::{
    self, detect_stages, pipeline_stats, process_oracle, PipelineConfig, PipelineError,
    PipelineOutput,
};
use skinforge_core::tone_adjust::{parse_range, register_bits};
use skinforge_core::{AdjustRegisters, BinaryMask, Frame, Parallelism, SkinModelParams};

use crate::{Command, Common, Engine};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

impl From<ImageError> for CliError {
    fn from(e: ImageError) -> Self {
        match e {
            // an output path with an unknown extension is a usage problem
            ImageError::UnsupportedFormat(m) if m.starts_with("cannot infer") => CliError::Usage(m),
            other => CliError::Data(other.to_string()),
        }
    }
}

pub fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::EncodeRange { value } => {
            let reg = parse_range(&value).map_err(|e| CliError::Usage(e.to_string()))?;
            println!("{reg}  {}", register_bits(reg));
            Ok(())
        }
        Command::Detect { common, output } => {
            let out_fmt = ImageFormat::from_path(&output)?;
            let (frame, cfg) = load(&common, AdjustRegisters::ZERO)?;
            let out = execute(&frame, &cfg, common.engine)?;
            report(&out);
            let mask = out.skin_mask.as_ref().expect("mask requested");
            imageio::save_mask(mask, &output, out_fmt)?;
            Ok(())
        }
        Command::Adjust {
            common,
            output,
            i_range,
            q_range,
            mask_out,
        } => {
            let regs = registers(&i_range, &q_range)?;
            let out_fmt = ImageFormat::from_path(&output)?;
            let mask_fmt = mask_out.as_deref().map(ImageFormat::from_path).transpose()?;
            let (frame, cfg) = load(&common, regs)?;
            info!(
                "registers i={} q={} direction={}",
                regs.i_range_q15,
                regs.q_range_q15,
                regs.direction()
            );
            let out = execute(&frame, &cfg, common.engine)?;
            report(&out);
            imageio::save_frame(&out.adjusted, &output, out_fmt)?;
            if let (Some(path), Some(fmt)) = (mask_out, mask_fmt) {
                imageio::save_mask(out.skin_mask.as_ref().expect("mask requested"), path, fmt)?;
            }
            Ok(())
        }
        Command::Stages {
            common,
            out_dir,
            i_range,
            q_range,
        } => {
            let regs = registers(&i_range, &q_range)?;
            let (frame, cfg) = load(&common, regs)?;
            dump_stages(&frame, &cfg, common.engine, &out_dir)
        }
    }
}

fn registers(i: &str, q: &str) -> Result<AdjustRegisters, CliError> {
    let parse = |flag: &str, v: &str| {
        parse_range(v).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
    };
    Ok(AdjustRegisters::new(parse("i-range", i)?, parse("q-range", q)?))
}

fn load(common: &Common, regs: AdjustRegisters) -> Result<(Frame, PipelineConfig), CliError> {
    let mut model = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            SkinModelParams::from_kv(&text)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
        }
        None => SkinModelParams::default(),
    };
    if let Some(t) = common.gradient_threshold {
        model.gradient_threshold = t;
        model
            .validate()
            .map_err(|e| CliError::Usage(format!("--gradient-threshold: {e}")))?;
    }
    let frame = imageio::load_image(&common.input)?;
    debug!(
        "loaded {} ({}x{})",
        common.input.display(),
        frame.width(),
        frame.height()
    );
    let cfg = PipelineConfig::default().with_model(model).with_regs(regs);
    Ok((frame, cfg))
}

fn execute(frame: &Frame, cfg: &PipelineConfig, engine: Engine) -> Result<PipelineOutput, CliError> {
    match engine {
        Engine::FullFrame => Ok(process_oracle(frame, cfg)),
        Engine::Streaming => match pipeline::process_streaming(frame, cfg) {
            Ok(out) => Ok(out),
            Err(PipelineError::UnsupportedSize { .. }) => {
                warn!("frame too small for streaming; using the full-frame engine");
                Ok(process_oracle(frame, cfg))
            }
            Err(e) => Err(CliError::Data(e.to_string())),
        },
    }
}

fn report(out: &PipelineOutput) {
    let s = pipeline_stats(out);
    info!(
        "skin pixels {} of {} ({:.2}%), opening removed {}",
        s.skin_pixels,
        s.total_pixels,
        s.coverage * 100.0,
        s.removed_by_opening
    );
}

pub const STAGE_FILES: [&str; 5] = [
    "input.ppm",
    "gradient.pgm",
    "raw_mask.ppm",
    "opened_mask.ppm",
    "adjusted.ppm",
];

fn dump_stages(
    frame: &Frame,
    cfg: &PipelineConfig,
    engine: Engine,
    dir: &Path,
) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
    let stages = detect_stages(frame, cfg, Parallelism::default());
    let out = execute(frame, cfg, engine)?;
    let opened: &BinaryMask = out.skin_mask.as_ref().expect("mask requested");
    debug_assert_eq!(opened, &stages.opened);
    report(&out);

    let [input, gradient, raw, opened_name, adjusted] = STAGE_FILES.map(|f| dir.join(f));
    imageio::save_frame(frame, input, ImageFormat::Ppm)?;
    imageio::save_gray(&stages.gradient, gradient, ImageFormat::Pgm)?;
    imageio::save_mask(&stages.raw, raw, ImageFormat::Ppm)?;
    imageio::save_mask(opened, opened_name, ImageFormat::Ppm)?;
    imageio::save_frame(&out.adjusted, adjusted, ImageFormat::Ppm)?;
    Ok(())
}

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_skinforge")
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn golden(name: &str) -> PathBuf {
    fixture("golden").join(name)
}

pub fn skinforge<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(bin())
        .args(args)
        .env_remove("SKINFORGE_LOG")
        .output()
        .expect("spawn skinforge")
}

/// One golden invocation: arguments with `{out}` standing for the output
/// directory, and the files it produces.
pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub outputs: &'static [&'static str],
}

pub const GOLDEN_CASES: &[GoldenCase] = &[
    GoldenCase {
        name: "detect_half_skin",
        args: &["detect", "--in", "@half_skin.ppm", "--out", "{out}/mask.ppm"],
        outputs: &["mask.ppm"],
    },
    GoldenCase {
        name: "detect_portrait",
        args: &["detect", "--in", "@portrait.ppm", "--out", "{out}/mask.ppm"],
        outputs: &["mask.ppm"],
    },
    GoldenCase {
        name: "adjust_portrait",
        args: &[
            "adjust",
            "--in",
            "@portrait.ppm",
            "--out",
            "{out}/adjusted.ppm",
            "--i-range",
            "-18%",
            "--q-range",
            "q15:3277",
            "--mask-out",
            "{out}/mask.ppm",
        ],
        outputs: &["adjusted.ppm", "mask.ppm"],
    },
    GoldenCase {
        name: "stages_portrait",
        args: &[
            "stages",
            "--in",
            "@portrait.ppm",
            "--out-dir",
            "{out}",
            "--i-range",
            "10%",
            "--q-range",
            "10%",
        ],
        outputs: &[
            "input.ppm",
            "gradient.pgm",
            "raw_mask.ppm",
            "opened_mask.ppm",
            "adjusted.ppm",
        ],
    },
];

pub fn expand_args(case: &GoldenCase, out: &Path) -> Vec<String> {
    case.args
        .iter()
        .map(|a| {
            if let Some(name) = a.strip_prefix('@') {
                fixture(name).display().to_string()
            } else {
                a.replace("{out}", &out.display().to_string())
            }
        })
        .collect()
}

/// Runs a case into `out`, returning the produced files' bytes.
pub fn run_case(case: &GoldenCase, out: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let res = skinforge(expand_args(case, out));
    if !res.status.success() {
        return Err(format!(
            "{} exited with {:?}: {}",
            case.name,
            res.status.code(),
            String::from_utf8_lossy(&res.stderr)
        ));
    }
    case.outputs
        .iter()
        .map(|f| {
            std::fs::read(out.join(f))
                .map(|b| (f.to_string(), b))
                .map_err(|e| format!("{}: {f}: {e}", case.name))
        })
        .collect()
}

/// The encode-range golden line.
pub const ENCODE_RANGE_GOLDEN: &str = "-5898  1110100011110110\n";

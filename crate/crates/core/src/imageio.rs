//! PPM/PGM and PNG reading and writing.
//!
//! Binary PPM (`P6`) with maxval 255 is the reference format. PGM (`P5`)
//! is used for grayscale dumps and loads as gray RGB. PNG goes through the
//! `image` crate; alpha is dropped and gray is expanded on load.
//!
//! Masks are written white for skin and black elsewhere.

use std::io::Cursor;
use std::path::{Path, PathBuf};

use crate::colorspace::{quantize, RgbPixel};
use crate::plane::{BinaryMask, Frame, GrayPlane, Plane};

#[derive(Debug, thiserror::Error)]
pub enum ImageError {
    #[error("{0}: no such file")]
    NotFound(PathBuf),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("png: {0}")]
    Png(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Ppm,
    Pgm,
    Png,
}

impl ImageFormat {
    /// Picks a format from the file extension.
    pub fn from_path(path: &Path) -> Result<Self, ImageError> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("ppm") => Ok(ImageFormat::Ppm),
            Some("pgm") => Ok(ImageFormat::Pgm),
            Some("png") => Ok(ImageFormat::Png),
            _ => Err(ImageError::UnsupportedFormat(format!(
                "cannot infer image format from {}",
                path.display()
            ))),
        }
    }
}

const PNG_SIGNATURE: &[u8] = b"\x89PNG\r\n\x1a\n";

/// Decodes PPM, PGM or PNG bytes, sniffing the format from the magic.
pub fn decode(bytes: &[u8]) -> Result<Frame, ImageError> {
    if bytes.is_empty() {
        return Err(ImageError::Parse {
            offset: 0,
            message: "empty input".into(),
        });
    }
    if bytes.starts_with(PNG_SIGNATURE) {
        return decode_png(bytes);
    }
    match bytes.get(..2) {
        Some(b"P6") => decode_pnm(bytes, 3),
        Some(b"P5") => decode_pnm(bytes, 1),
        Some([b'P', d]) if d.is_ascii_digit() => Err(ImageError::UnsupportedFormat(format!(
            "netpbm variant P{}",
            *d as char
        ))),
        _ => Err(ImageError::Parse {
            offset: 0,
            message: "unrecognized image signature".into(),
        }),
    }
}

pub fn load_image(path: impl AsRef<Path>) -> Result<Frame, ImageError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            ImageError::NotFound(path.to_path_buf())
        } else {
            ImageError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })?;
    decode(&bytes)
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderReader<'_> {
    fn err(&self, message: impl Into<String>) -> ImageError {
        ImageError::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_space_and_comments(&mut self) {
        while let Some(&c) = self.bytes.get(self.pos) {
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else if c == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, ImageError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| ImageError::Parse {
                offset: start,
                message: format!("{what} out of range"),
            })
    }
}

fn decode_pnm(bytes: &[u8], channels: usize) -> Result<Frame, ImageError> {
    let mut rd = HeaderReader { bytes, pos: 2 };
    let width = rd.number("width")?;
    let height = rd.number("height")?;
    let maxval = rd.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(rd.err(format!("zero dimension {width}x{height}")));
    }
    if maxval != 255 {
        return Err(ImageError::UnsupportedFormat(format!(
            "maxval {maxval} (only 8-bit, maxval 255, is supported)"
        )));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(rd.pos) {
        Some(c) if c.is_ascii_whitespace() => rd.pos += 1,
        _ => return Err(rd.err("expected whitespace before raster")),
    }
    let need = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| rd.err("dimensions overflow"))?;
    let raster = &bytes[rd.pos..];
    if raster.len() < need {
        return Err(ImageError::Parse {
            offset: bytes.len(),
            message: format!("truncated raster: {} of {need} bytes", raster.len()),
        });
    }
    let pixels = raster[..need]
        .chunks_exact(channels)
        .map(|c| match *c {
            [v] => RgbPixel::gray(v),
            [r, g, b] => RgbPixel::new(r, g, b),
            _ => unreachable!("channel count is 1 or 3"),
        })
        .collect();
    Ok(Plane::from_vec(width, height, pixels).expect("checked dimensions"))
}

fn decode_png(bytes: &[u8]) -> Result<Frame, ImageError> {
    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|e| ImageError::Png(e.to_string()))?;
    use image::ColorType::*;
    match img.color() {
        L8 | La8 | Rgb8 | Rgba8 => {}
        other => {
            return Err(ImageError::UnsupportedFormat(format!(
                "png color type {other:?} (only 8-bit channels are supported)"
            )))
        }
    }
    let rgb = img.to_rgb8();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    let pixels = rgb.pixels().map(|p| RgbPixel::from(p.0)).collect();
    Plane::from_vec(w, h, pixels).map_err(|e| ImageError::Png(e.to_string()))
}

fn pnm_bytes(magic: &str, width: usize, height: usize, raster: &[u8]) -> Vec<u8> {
    let mut out = format!("{magic}\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(raster);
    out
}

fn png_bytes(width: usize, height: usize, raster: Vec<u8>, color: image::ColorType) -> Vec<u8> {
    let mut out = Cursor::new(Vec::new());
    let enc = image::codecs::png::PngEncoder::new(&mut out);
    image::ImageEncoder::write_image(
        enc,
        &raster,
        width as u32,
        height as u32,
        color.into(),
    )
    .expect("in-memory png encoding of a well-formed raster");
    out.into_inner()
}

fn encode_raster(
    width: usize,
    height: usize,
    rgb: Vec<u8>,
    gray: Option<Vec<u8>>,
    format: ImageFormat,
) -> Vec<u8> {
    match (format, gray) {
        (ImageFormat::Ppm, _) => pnm_bytes("P6", width, height, &rgb),
        (ImageFormat::Pgm, Some(g)) => pnm_bytes("P5", width, height, &g),
        (ImageFormat::Pgm, None) => {
            // luma of each pixel; only reached for color frames
            let g: Vec<u8> = rgb
                .chunks_exact(3)
                .map(|c| {
                    quantize(crate::colorspace::rgb_to_gray(RgbPixel::new(c[0], c[1], c[2])))
                })
                .collect();
            pnm_bytes("P5", width, height, &g)
        }
        (ImageFormat::Png, Some(g)) => png_bytes(width, height, g, image::ColorType::L8),
        (ImageFormat::Png, None) => png_bytes(width, height, rgb, image::ColorType::Rgb8),
    }
}

pub fn encode_frame(frame: &Frame, format: ImageFormat) -> Vec<u8> {
    let rgb = frame
        .as_slice()
        .iter()
        .flat_map(|&p| <[u8; 3]>::from(p))
        .collect();
    encode_raster(frame.width(), frame.height(), rgb, None, format)
}

/// Masks are always written as RGB (or gray under PGM) with skin white.
pub fn encode_mask(mask: &BinaryMask, format: ImageFormat) -> Vec<u8> {
    encode_frame(&mask_to_frame(mask), format)
}

/// Gray planes are quantized half away from zero and written single-channel
/// for PGM and PNG, or replicated across RGB for PPM.
pub fn encode_gray(plane: &GrayPlane, format: ImageFormat) -> Vec<u8> {
    let g: Vec<u8> = plane.as_slice().iter().map(|&v| quantize(v)).collect();
    let rgb = g.iter().flat_map(|&v| [v, v, v]).collect();
    encode_raster(plane.width(), plane.height(), rgb, Some(g), format)
}

pub fn mask_to_frame(mask: &BinaryMask) -> Frame {
    mask.map(|&b| if b { RgbPixel::WHITE } else { RgbPixel::BLACK })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), ImageError> {
    std::fs::write(path, bytes).map_err(|source| ImageError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_frame(frame: &Frame, path: impl AsRef<Path>, format: ImageFormat) -> Result<(), ImageError> {
    write(path.as_ref(), &encode_frame(frame, format))
}

pub fn save_mask(mask: &BinaryMask, path: impl AsRef<Path>, format: ImageFormat) -> Result<(), ImageError> {
    write(path.as_ref(), &encode_mask(mask, format))
}

pub fn save_gray(plane: &GrayPlane, path: impl AsRef<Path>, format: ImageFormat) -> Result<(), ImageError> {
    write(path.as_ref(), &encode_gray(plane, format))
}

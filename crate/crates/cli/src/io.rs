//! Bit-exact image file I/O.
//!
//! Three self-describing binary formats, chosen for trivially verifiable
//! byte-level contracts and zero decoder dependencies:
//!
//! - **PGM (P5)** / **PPM (P6)** with maxval 255 or 65535 for interchange.
//!   16-bit samples are big-endian, per the Netpbm convention. Writing
//!   quantizes by clipping to [0, 1] and rounding half away from zero, so
//!   quality metrics computed on exported files are reproducible.
//! - **PFM** (`Pf` gray / `PF` color) for lossless staging between
//!   commands: 32-bit floats, scale field −1.0 (little-endian), rows
//!   bottom-to-top per the format's convention. Values written by this
//!   crate round-trip bit-exactly (after the one-time f64→f32 narrowing).
//!
//! The writer always emits a canonical header, so identical samples give
//! identical files. The reader is tolerant: Netpbm comments and arbitrary
//! token whitespace are accepted.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use hyperlens::{Error as CoreError, ImageGrid};

use crate::CliError;

/// Integer sample depth for the Netpbm formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn maxval(self) -> u32 {
        match self {
            BitDepth::Eight => 255,
            BitDepth::Sixteen => 65535,
        }
    }
}

/// clap value parser for `--bits`.
pub fn parse_bits(s: &str) -> Result<BitDepth, String> {
    match s {
        "8" => Ok(BitDepth::Eight),
        "16" => Ok(BitDepth::Sixteen),
        other => Err(format!("bit depth must be 8 or 16, got {other}")),
    }
}

/// On-disk encoding, decided by file extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Netpbm(BitDepth),
    Pfm,
}

/// Map a path's extension to its encoding. `.pgm`/`.ppm` use the given
/// integer depth; `.pfm` is always float.
pub fn format_for_path(path: &Path, bits: BitDepth) -> Result<FileFormat, CliError> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("pgm") | Some("ppm") => Ok(FileFormat::Netpbm(bits)),
        Some("pfm") => Ok(FileFormat::Pfm),
        _ => Err(CliError::Core(CoreError::ParseError {
            token: path.display().to_string(),
            message: "output extension must be .pgm, .ppm, or .pfm".into(),
        })),
    }
}

/// The extension that matches an image's channel count in each format.
pub fn extension_for(channels: usize, float: bool) -> &'static str {
    match (channels, float) {
        (_, true) => "pfm",
        (3, false) => "ppm",
        (_, false) => "pgm",
    }
}

/// Clip to [0, 1] and round half away from zero onto `0..=maxval`.
pub fn quantize(x: f64, maxval: u32) -> u32 {
    let clipped = x.clamp(0.0, 1.0);
    (clipped * maxval as f64 + 0.5).floor() as u32
}

/// The image as a reader of the exported file would see it: each sample
/// mapped through the format's write→read round trip. Idempotent, and
/// writing the view produces the same bytes as writing the original.
pub fn export_view(img: &ImageGrid, format: FileFormat) -> ImageGrid {
    let mut out = img.clone();
    match format {
        FileFormat::Netpbm(bits) => {
            let maxval = bits.maxval();
            for ch in 0..img.channels() {
                for v in out.channel_mut(ch) {
                    *v = quantize(*v, maxval) as f64 / maxval as f64;
                }
            }
        }
        FileFormat::Pfm => {
            for ch in 0..img.channels() {
                for v in out.channel_mut(ch) {
                    *v = *v as f32 as f64;
                }
            }
        }
    }
    out
}

pub fn write_image(path: &Path, img: &ImageGrid, format: FileFormat) -> Result<(), CliError> {
    let bytes = encode(path, img, format)?;
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn encode(path: &Path, img: &ImageGrid, format: FileFormat) -> Result<Vec<u8>, CliError> {
    let (channels, h, w) = img.shape();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    let want = match format {
        FileFormat::Netpbm(_) if channels == 1 => "pgm",
        FileFormat::Netpbm(_) => "ppm",
        FileFormat::Pfm => "pfm",
    };
    if ext != want {
        return Err(CliError::Core(CoreError::InvalidImage(format!(
            "{}-channel image needs a .{want} path, got {}",
            channels,
            path.display()
        ))));
    }

    let mut out = Vec::with_capacity(channels * h * w * 4 + 64);
    match format {
        FileFormat::Netpbm(bits) => {
            let magic = if channels == 1 { "P5" } else { "P6" };
            let maxval = bits.maxval();
            write!(out, "{magic}\n{w} {h}\n{maxval}\n").expect("vec write");
            for r in 0..h {
                for c in 0..w {
                    for ch in 0..channels {
                        let v = quantize(img.get(ch, r, c), maxval);
                        match bits {
                            BitDepth::Eight => out.push(v as u8),
                            BitDepth::Sixteen => out.extend_from_slice(&(v as u16).to_be_bytes()),
                        }
                    }
                }
            }
        }
        FileFormat::Pfm => {
            let magic = if channels == 1 { "Pf" } else { "PF" };
            write!(out, "{magic}\n{w} {h}\n-1.0\n").expect("vec write");
            for r in (0..h).rev() {
                for c in 0..w {
                    for ch in 0..channels {
                        let v = img.get(ch, r, c) as f32;
                        out.extend_from_slice(&v.to_le_bytes());
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn read_image(path: &Path) -> Result<ImageGrid, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    decode(&bytes).map_err(|message| {
        CliError::BadFile(format!("{}: {message}", path.display()))
    })
}

fn decode(bytes: &[u8]) -> Result<ImageGrid, String> {
    let magic = bytes.get(..2).ok_or("file too short for a magic number")?;
    match magic {
        b"P5" | b"P6" => decode_netpbm(bytes, magic == b"P6"),
        b"Pf" | b"PF" => decode_pfm(bytes, magic == b"PF"),
        other => Err(format!(
            "unknown magic {:?}; expected P5, P6, Pf, or PF",
            String::from_utf8_lossy(other)
        )),
    }
}

/// Reads the next whitespace-delimited ASCII token, skipping `#` comments.
fn next_token(bytes: &[u8], pos: &mut usize) -> Result<u64, String> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err("truncated header".into());
    }
    std::str::from_utf8(&bytes[start..*pos])
        .map_err(|_| "non-ASCII header token".to_string())?
        .parse::<u64>()
        .map_err(|_| {
            format!(
                "bad header token {:?}",
                String::from_utf8_lossy(&bytes[start..*pos])
            )
        })
}

fn decode_netpbm(bytes: &[u8], color: bool) -> Result<ImageGrid, String> {
    let mut pos = 2;
    let w = next_token(bytes, &mut pos)? as usize;
    let h = next_token(bytes, &mut pos)? as usize;
    let maxval = next_token(bytes, &mut pos)?;
    if maxval == 0 || maxval > 65535 {
        return Err(format!("maxval {maxval} out of range 1..=65535"));
    }
    // Exactly one whitespace byte separates header and raster.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err("missing separator before raster".into());
    }
    pos += 1;

    let channels = if color { 3 } else { 1 };
    let wide = maxval > 255;
    let sample_bytes = if wide { 2 } else { 1 };
    let expected = h * w * channels * sample_bytes;
    let raster = bytes
        .get(pos..pos + expected)
        .ok_or_else(|| format!("raster truncated: need {expected} bytes"))?;

    let mut img = ImageGrid::new(channels, h, w).map_err(|e| e.to_string())?;
    let mut it = raster.iter();
    // Divide per sample (not multiply by a reciprocal): correctly rounded,
    // so k/maxval is reproduced bit-exactly on a write→read→write cycle.
    let scale = maxval as f64;
    for r in 0..h {
        for c in 0..w {
            for ch in 0..channels {
                let v = if wide {
                    let hi = *it.next().expect("sized above") as u16;
                    let lo = *it.next().expect("sized above") as u16;
                    u16::from_be_bytes([hi as u8, lo as u8]) as f64
                } else {
                    *it.next().expect("sized above") as f64
                };
                img.set(ch, r, c, v / scale);
            }
        }
    }
    Ok(img)
}

fn decode_pfm(bytes: &[u8], color: bool) -> Result<ImageGrid, String> {
    // Header: magic line, "w h" line, scale line — whitespace-delimited.
    let mut pos = 2;
    let w = next_token(bytes, &mut pos)? as usize;
    let h = next_token(bytes, &mut pos)? as usize;

    // The scale token is a float; negative means little-endian. Its
    // magnitude is ignored (this crate always writes 1.0-scaled data).
    while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    let start = pos;
    while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    let scale: f64 = std::str::from_utf8(&bytes[start..pos])
        .map_err(|_| "non-ASCII scale token".to_string())?
        .parse()
        .map_err(|_| "bad scale token".to_string())?;
    if pos >= bytes.len() {
        return Err("missing separator before raster".into());
    }
    pos += 1; // single whitespace byte

    let little_endian = scale < 0.0;
    let channels = if color { 3 } else { 1 };
    let expected = h * w * channels * 4;
    let raster = bytes
        .get(pos..pos + expected)
        .ok_or_else(|| format!("raster truncated: need {expected} bytes"))?;

    let mut img = ImageGrid::new(channels, h, w).map_err(|e| e.to_string())?;
    let mut chunks = raster.chunks_exact(4);
    for r in (0..h).rev() {
        for c in 0..w {
            for ch in 0..channels {
                let b: [u8; 4] = chunks.next().expect("sized above").try_into().unwrap();
                let v = if little_endian {
                    f32::from_le_bytes(b)
                } else {
                    f32::from_be_bytes(b)
                };
                if !v.is_finite() {
                    return Err(format!("non-finite sample at ({r},{c})"));
                }
                img.set(ch, r, c, v as f64);
            }
        }
    }
    Ok(img)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

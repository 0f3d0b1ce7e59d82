//! Deterministic synthetic scenes.
//!
//! The corpus replaces photographic test material with procedural content
//! whose every sample is reproducible bit-for-bit from a short textual spec.
//! Five kinds cover the features the reconstruction pipeline is judged on:
//!
//! - `grid_lines` — thin dark rules on a light field (line continuity)
//! - `circle` — an anti-aliased circumference (curved-edge continuity)
//! - `edges` — a step wedge of sharp vertical bands (edge response)
//! - `vernier` — two collinear segments with a sub-pixel-scale lateral
//!   offset, the classic alignment-acuity probe
//! - `bandlimited_noise` — seeded noise with its spectrum cut to a chosen
//!   band (recoverability experiments)
//!
//! ## Spec grammar
//!
//! A scene spec is `kind,key=value,key=value,...`, e.g.
//! `grid_lines,h=500,w=500,pitch=50,width=1`. `h` and `w` are required for
//! every kind; `margin` (default 0) keeps all content at least that many
//! pixels away from every border, so circular blur cannot wrap content
//! around the edges. Remaining keys are per-kind, all optional unless noted:
//!
//! - `grid_lines`: `pitch` (required), `width` (1)
//! - `circle`: `radius` (required), `cy`, `cx` (center), `stroke` (1)
//! - `edges`: `steps` (8), `channels` (1; 3 gives per-channel shifted bands)
//! - `vernier`: `length` (h/4), `thickness` (1), `offset` (0), `x` (w/2)
//! - `bandlimited_noise`: `bandlimit` (required), `seed` (0)
//!
//! [`SceneSpec::to_string`] emits the canonical form with every parameter
//! explicit; parsing it back yields the identical spec.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::Error;
use crate::grid::{dft2, idft2, ImageGrid};
use crate::metrics::{mse, signed_frequency};
use crate::rng::SplitMix64;
use crate::Result;

/// The five bundled benchmark scenes the comparison harness is judged on,
/// one per kind. All are 500×500 — fifty sensor cells across at the default
/// decimation — and all carry detail finer than the coarse grid: single-pixel
/// rules and strokes, an off-lattice vernier pair (x ≡ 5 mod 10, offset 3,
/// both invisible to a stride-10 point sensor), and noise holding spectral
/// energy well beyond the coarse grid's band.
pub const CORPUS: [&str; 5] = [
    "grid_lines,h=500,w=500,pitch=50,width=1",
    "circle,h=500,w=500,radius=150,stroke=2",
    "edges,h=500,w=500,steps=8,channels=3",
    "vernier,h=500,w=500,length=200,thickness=1,offset=3,x=255",
    "bandlimited_noise,h=500,w=500,bandlimit=0.3,seed=7",
];

/// Scene family plus its geometry parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum SceneKind {
    GridLines {
        /// Distance between line starts, px.
        pitch: usize,
        /// Line width, px; must stay below `pitch`.
        line_width: usize,
    },
    Circle {
        /// Center row/column in pixel coordinates.
        cy: f64,
        cx: f64,
        radius: f64,
        /// Stroke width of the circumference band, px.
        stroke: f64,
    },
    Edges {
        /// Number of vertical bands; gray levels span 0..1.
        steps: usize,
        /// 1 or 3; with 3 the band levels rotate per channel.
        channels: usize,
    },
    Vernier {
        /// Length of each of the two segments, px.
        length: usize,
        /// Segment thickness, px.
        thickness: usize,
        /// Lateral shift of the lower segment, high-res px (may be negative
        /// and smaller than any sensor pitch — that is the point).
        offset: isize,
        /// Column of the upper segment's left edge.
        x: usize,
    },
    BandlimitedNoise {
        /// Spectrum kept inside this fraction of Nyquist per axis.
        bandlimit: f64,
        seed: u64,
    },
}

impl SceneKind {
    pub fn name(&self) -> &'static str {
        match self {
            SceneKind::GridLines { .. } => "grid_lines",
            SceneKind::Circle { .. } => "circle",
            SceneKind::Edges { .. } => "edges",
            SceneKind::Vernier { .. } => "vernier",
            SceneKind::BandlimitedNoise { .. } => "bandlimited_noise",
        }
    }
}

/// A complete, deterministic description of one scene.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub height: usize,
    pub width: usize,
    /// Blank border width: no content is drawn within `margin` pixels of
    /// any edge. Zero means content may touch the borders.
    pub margin: usize,
    pub kind: SceneKind,
}

impl SceneSpec {
    /// The constant value the margin band (and any undrawn area) holds, if
    /// the kind has one. `bandlimited_noise` has none: band-limiting spreads
    /// small ripples everywhere, including a requested margin.
    pub fn background(&self) -> Option<f64> {
        match self.kind {
            SceneKind::GridLines { .. } | SceneKind::Circle { .. } | SceneKind::Edges { .. } => {
                Some(1.0)
            }
            SceneKind::Vernier { .. } => Some(0.0),
            SceneKind::BandlimitedNoise { .. } => None,
        }
    }

    /// Parse the `kind,key=value,...` grammar.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.split(',');
        let kind_token = parts.next().unwrap_or("").trim().to_string();

        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for raw in parts {
            let part = raw.trim();
            let Some((key, value)) = part.split_once('=') else {
                return Err(Error::ParseError {
                    token: part.to_string(),
                    message: "expected key=value".into(),
                });
            };
            let (key, value) = (key.trim().to_string(), value.trim().to_string());
            if key.is_empty() || value.is_empty() {
                return Err(Error::ParseError {
                    token: part.to_string(),
                    message: "empty key or value".into(),
                });
            }
            if map.insert(key.clone(), value).is_some() {
                return Err(Error::ParseError {
                    token: key,
                    message: "duplicate key".into(),
                });
            }
        }

        let height: usize = require(&mut map, "h")?;
        let width: usize = require(&mut map, "w")?;
        let margin: usize = optional(&mut map, "margin", 0)?;

        let kind = match kind_token.as_str() {
            "grid_lines" => SceneKind::GridLines {
                pitch: require(&mut map, "pitch")?,
                line_width: optional(&mut map, "width", 1)?,
            },
            "circle" => SceneKind::Circle {
                cy: optional(&mut map, "cy", height as f64 / 2.0)?,
                cx: optional(&mut map, "cx", width as f64 / 2.0)?,
                radius: require(&mut map, "radius")?,
                stroke: optional(&mut map, "stroke", 1.0)?,
            },
            "edges" => SceneKind::Edges {
                steps: optional(&mut map, "steps", 8)?,
                channels: optional(&mut map, "channels", 1)?,
            },
            "vernier" => SceneKind::Vernier {
                length: optional(&mut map, "length", height / 4)?,
                thickness: optional(&mut map, "thickness", 1)?,
                offset: optional(&mut map, "offset", 0)?,
                x: optional(&mut map, "x", width / 2)?,
            },
            "bandlimited_noise" => SceneKind::BandlimitedNoise {
                bandlimit: require(&mut map, "bandlimit")?,
                seed: optional(&mut map, "seed", 0)?,
            },
            other => {
                return Err(Error::ParseError {
                    token: other.to_string(),
                    message: "unknown scene kind (expected grid_lines, circle, edges, \
                              vernier, or bandlimited_noise)"
                        .into(),
                })
            }
        };

        if let Some((key, _)) = map.into_iter().next() {
            return Err(Error::ParseError {
                token: key,
                message: format!("unknown key for scene kind {kind_token}"),
            });
        }

        Ok(SceneSpec {
            height,
            width,
            margin,
            kind,
        })
    }
}

impl std::fmt::Display for SceneSpec {
    /// Canonical spec string: every parameter explicit, fixed order.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (h, w, m) = (self.height, self.width, self.margin);
        match &self.kind {
            SceneKind::GridLines { pitch, line_width } => write!(
                f,
                "grid_lines,h={h},w={w},pitch={pitch},width={line_width},margin={m}"
            ),
            SceneKind::Circle {
                cy,
                cx,
                radius,
                stroke,
            } => write!(
                f,
                "circle,h={h},w={w},cy={cy},cx={cx},radius={radius},stroke={stroke},margin={m}"
            ),
            SceneKind::Edges { steps, channels } => {
                write!(f, "edges,h={h},w={w},steps={steps},channels={channels},margin={m}")
            }
            SceneKind::Vernier {
                length,
                thickness,
                offset,
                x,
            } => write!(
                f,
                "vernier,h={h},w={w},length={length},thickness={thickness},offset={offset},x={x},margin={m}"
            ),
            SceneKind::BandlimitedNoise { bandlimit, seed } => write!(
                f,
                "bandlimited_noise,h={h},w={w},bandlimit={bandlimit},seed={seed},margin={m}"
            ),
        }
    }
}

fn require<T: FromStr>(map: &mut BTreeMap<String, String>, key: &str) -> Result<T> {
    match map.remove(key) {
        Some(value) => value.parse().map_err(|_| Error::ParseError {
            token: value,
            message: format!("invalid value for {key}"),
        }),
        None => Err(Error::ParseError {
            token: key.to_string(),
            message: "missing required key".into(),
        }),
    }
}

fn optional<T: FromStr>(map: &mut BTreeMap<String, String>, key: &str, default: T) -> Result<T> {
    match map.remove(key) {
        Some(value) => value.parse().map_err(|_| Error::ParseError {
            token: value,
            message: format!("invalid value for {key}"),
        }),
        None => Ok(default),
    }
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

/// Render the scene. Deterministic: equal specs give bit-identical rasters
/// on every platform (noise uses the pinned generator from [`crate::rng`]).
pub fn generate(spec: &SceneSpec) -> Result<ImageGrid> {
    let (h, w, m) = (spec.height, spec.width, spec.margin);
    if h < 64 || w < 64 {
        return Err(Error::InvalidParams(format!(
            "scene dimensions must be at least 64x64, got {h}x{w}"
        )));
    }
    if 2 * m >= h || 2 * m >= w {
        return Err(Error::InvalidParams(format!(
            "margin {m} leaves no content area on a {h}x{w} grid"
        )));
    }

    match &spec.kind {
        SceneKind::GridLines { pitch, line_width } => {
            generate_grid_lines(h, w, m, *pitch, *line_width)
        }
        SceneKind::Circle {
            cy,
            cx,
            radius,
            stroke,
        } => generate_circle(h, w, m, *cy, *cx, *radius, *stroke),
        SceneKind::Edges { steps, channels } => generate_edges(h, w, m, *steps, *channels),
        SceneKind::Vernier {
            length,
            thickness,
            offset,
            x,
        } => generate_vernier(h, w, m, *length, *thickness, *offset, *x),
        SceneKind::BandlimitedNoise { bandlimit, seed } => {
            generate_bandlimited_noise(h, w, m, *bandlimit, *seed)
        }
    }
}

fn generate_grid_lines(
    h: usize,
    w: usize,
    margin: usize,
    pitch: usize,
    line_width: usize,
) -> Result<ImageGrid> {
    if pitch == 0 {
        return Err(Error::InvalidParams("grid pitch must be at least 1".into()));
    }
    if line_width == 0 || line_width >= pitch {
        return Err(Error::InvalidParams(format!(
            "line width {line_width} must be in 1..pitch ({pitch})"
        )));
    }
    let mut img = ImageGrid::constant(1, h, w, 1.0)?;
    // Loop bounds keep everything inside the content box already.
    let on_line = |i: usize| (i - margin) % pitch < line_width;
    for r in margin..h - margin {
        for c in margin..w - margin {
            if on_line(r) || on_line(c) {
                img.set(0, r, c, 0.0);
            }
        }
    }
    Ok(img)
}

fn generate_circle(
    h: usize,
    w: usize,
    margin: usize,
    cy: f64,
    cx: f64,
    radius: f64,
    stroke: f64,
) -> Result<ImageGrid> {
    if radius <= 0.0 || !radius.is_finite() {
        return Err(Error::InvalidParams("circle radius must be positive".into()));
    }
    if stroke <= 0.0 || !stroke.is_finite() {
        return Err(Error::InvalidParams("circle stroke must be positive".into()));
    }
    // The outer edge of the stroke, plus the 1 px anti-aliasing ramp, must
    // stay inside the content box.
    let reach = radius + stroke / 2.0 + 1.0;
    let lo = margin as f64;
    if cy - reach < lo
        || cx - reach < lo
        || cy + reach > (h - margin) as f64
        || cx + reach > (w - margin) as f64
    {
        return Err(Error::InvalidParams(format!(
            "circle (center {cy},{cx}, radius {radius}, stroke {stroke}) does not fit \
             inside the {margin} px margin of a {h}x{w} grid"
        )));
    }

    let mut img = ImageGrid::constant(1, h, w, 1.0)?;
    for r in margin..h - margin {
        for c in margin..w - margin {
            let d = (r as f64 - cy).hypot(c as f64 - cx);
            // Coverage of the annulus [radius - stroke/2, radius + stroke/2]
            // over this pixel, via the signed distance to the band: a linear
            // 1 px ramp instead of a hard staircase.
            let signed = (d - radius).abs() - stroke / 2.0;
            let coverage = (0.5 - signed).clamp(0.0, 1.0);
            img.set(0, r, c, 1.0 - coverage);
        }
    }
    Ok(img)
}

fn generate_edges(
    h: usize,
    w: usize,
    margin: usize,
    steps: usize,
    channels: usize,
) -> Result<ImageGrid> {
    if steps < 2 {
        return Err(Error::InvalidParams(
            "edges needs at least 2 steps to have an edge".into(),
        ));
    }
    if channels != 1 && channels != 3 {
        return Err(Error::InvalidParams(format!(
            "edges channels must be 1 or 3, got {channels}"
        )));
    }
    let content_w = w - 2 * margin;
    if steps > content_w {
        return Err(Error::InvalidParams(format!(
            "{steps} steps do not fit {content_w} content columns"
        )));
    }

    let mut img = ImageGrid::constant(channels, h, w, 1.0)?;
    for r in margin..h - margin {
        for c in margin..w - margin {
            let band = (c - margin) * steps / content_w;
            for ch in 0..channels {
                let level = (band + ch) % steps;
                img.set(ch, r, c, level as f64 / (steps - 1) as f64);
            }
        }
    }
    Ok(img)
}

fn generate_vernier(
    h: usize,
    w: usize,
    margin: usize,
    length: usize,
    thickness: usize,
    offset: isize,
    x: usize,
) -> Result<ImageGrid> {
    if length == 0 || thickness == 0 {
        return Err(Error::InvalidParams(
            "vernier length and thickness must be at least 1".into(),
        ));
    }
    let top = h as isize / 2 - length as isize;
    let bottom_end = h as isize / 2 + length as isize;
    let lower_x = x as isize + offset;
    let fits = |col: isize| col >= margin as isize && col + thickness as isize <= (w - margin) as isize;
    if top < margin as isize || bottom_end > (h - margin) as isize || !fits(x as isize) || !fits(lower_x)
    {
        return Err(Error::InvalidParams(format!(
            "vernier segments (length {length}, thickness {thickness}, x {x}, offset {offset}) \
             do not fit inside the {margin} px margin of a {h}x{w} grid"
        )));
    }

    let mut img = ImageGrid::new(1, h, w)?;
    let mid = h / 2;
    for r in top as usize..mid {
        for t in 0..thickness {
            img.set(0, r, x + t, 1.0);
        }
    }
    for r in mid..bottom_end as usize {
        for t in 0..thickness {
            img.set(0, r, (lower_x as usize) + t, 1.0);
        }
    }
    Ok(img)
}

fn generate_bandlimited_noise(
    h: usize,
    w: usize,
    margin: usize,
    bandlimit: f64,
    seed: u64,
) -> Result<ImageGrid> {
    if !(bandlimit > 0.0 && bandlimit <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "bandlimit {bandlimit} is outside (0, 1]"
        )));
    }

    // White noise confined to the content box; the spectral cut then smears
    // a little energy into the margin, which is inherent to band-limiting.
    let mut rng = SplitMix64::new(seed);
    let mut img = ImageGrid::new(1, h, w)?;
    for r in margin..h - margin {
        for c in margin..w - margin {
            img.set(0, r, c, rng.next_f64());
        }
    }

    let mut spec = dft2(&img);
    let rmax = bandlimit * h as f64 / 2.0;
    let cmax = bandlimit * w as f64 / 2.0;
    for r in 0..h {
        let fr = signed_frequency(r, h).abs() as f64;
        for c in 0..w {
            let fc = signed_frequency(c, w).abs() as f64;
            if fr > rmax || fc > cmax {
                spec.set(0, r, c, num_complex::Complex::new(0.0, 0.0));
            }
        }
    }
    let filtered = idft2(&spec)?;

    // Affine rescale to [0, 1]. This only scales the spectrum and shifts DC,
    // so the band limit is preserved exactly.
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &s in filtered.channel(0) {
        lo = lo.min(s);
        hi = hi.max(s);
    }
    if hi - lo < 1e-12 {
        return ImageGrid::constant(1, h, w, 0.5);
    }
    let scale = 1.0 / (hi - lo);
    let samples = filtered.channel(0).iter().map(|&s| (s - lo) * scale).collect();
    ImageGrid::from_samples(1, h, w, samples)
}

// ---------------------------------------------------------------------------
// Separability
// ---------------------------------------------------------------------------

/// How distinguishable two reconstructions of a vernier pair are: the
/// pooled MSE between them. Zero means the system cannot tell the offset
/// scene from the aligned one at all.
pub fn vernier_separability(recon_aligned: &ImageGrid, recon_offset: &ImageGrid) -> Result<f64> {
    let per_channel = mse(recon_aligned, recon_offset)?;
    Ok(per_channel.iter().sum::<f64>() / per_channel.len() as f64)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

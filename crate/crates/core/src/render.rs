//! Deterministic raster and vector images of the depth-`D` point cloud.
//!
//! Pixels come from integer arithmetic on lattice coordinates, so identical
//! inputs give identical bytes on every platform and thread count.
//!
//! PGM layout: `P5\n{width} {height}\n255\n` followed by `width*height` bytes,
//! rows top to bottom; background 255, points 0.
//!
//! SVG layout: one `<circle r="0.5"/>` per point inside a single black group,
//! coordinates with three decimals, y axis pointing up.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{attractor_cloud, Lattice, LatticeBox, PieceCloud};
use crate::params::AffinePair;

pub const DEFAULT_RASTER_SIZE: u32 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Pgm,
    Svg,
}

impl FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pgm" | "portable_graymap" => Ok(Self::Pgm),
            "svg" | "scalable_vector" => Ok(Self::Svg),
            other => Err(Error::Parse {
                field: "format".into(),
                reason: format!("expected pgm or svg, got {other:?}"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: u32,
    pub height: u32,
    /// Row-major, top row first.
    pub pixels: Vec<u8>,
}

impl Raster {
    pub fn blank(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            pixels: vec![255; width as usize * height as usize],
        }
    }

    pub fn get(&self, col: u32, row: u32) -> u8 {
        self.pixels[(row * self.width + col) as usize]
    }

    /// Fraction of marked pixels, as `(marked, total)`.
    pub fn coverage(&self) -> (usize, usize) {
        let marked = self.pixels.iter().filter(|&&v| v == 0).count();
        (marked, self.pixels.len())
    }

    pub fn encode_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn decode_pgm(bytes: &[u8]) -> Result<Self> {
        let bad = |reason: &str| Error::Parse {
            field: "pgm".into(),
            reason: reason.into(),
        };
        let mut fields = Vec::new();
        let mut pos = 0;
        while fields.len() < 4 {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(bad("truncated header"));
            }
            fields.push(
                std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("header is not text"))?,
            );
        }
        if fields[0] != "P5" || fields[3] != "255" {
            return Err(bad("expected P5 with maxval 255"));
        }
        let width: u32 = fields[1].parse().map_err(|_| bad("width"))?;
        let height: u32 = fields[2].parse().map_err(|_| bad("height"))?;
        let pixels = bytes
            .get(pos + 1..)
            .ok_or_else(|| bad("missing raster"))?
            .to_vec();
        if pixels.len() != width as usize * height as usize {
            return Err(bad("raster size does not match header"));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }
}

/// Maps lattice coordinates into a `size x size` frame in thousandths of a pixel.
struct Frame {
    frame: LatticeBox,
    width: i128,
    height: i128,
}

impl Frame {
    fn new(frame: LatticeBox, width: u32, height: u32) -> Self {
        Self {
            frame,
            width: i128::from(width),
            height: i128::from(height),
        }
    }

    /// Offset from the left or bottom edge, in `1/unit` pixels.
    fn along(value: i128, lo: i128, hi: i128, extent: i128, unit: i128) -> i128 {
        if hi == lo {
            extent * unit / 2
        } else {
            (value - lo) * extent * unit / (hi - lo)
        }
    }

    fn pixel(&self, pt: (i128, i128)) -> (u32, u32) {
        let f = &self.frame;
        let col = Self::along(pt.0, f.x0, f.x1, self.width, 1).clamp(0, self.width - 1);
        let up = Self::along(pt.1, f.y0, f.y1, self.height, 1).clamp(0, self.height - 1);
        (col as u32, (self.height - 1 - up) as u32)
    }

    fn vector(&self, pt: (i128, i128)) -> (i128, i128) {
        let f = &self.frame;
        let x = Self::along(pt.0, f.x0, f.x1, self.width, 1000);
        let up = Self::along(pt.1, f.y0, f.y1, self.height, 1000);
        (x, self.height * 1000 - up)
    }
}

fn thousandths(v: i128) -> String {
    let sign = if v < 0 { "-" } else { "" };
    let a = v.abs();
    format!("{sign}{}.{:03}", a / 1000, a % 1000)
}

fn cloud_and_frame(pair: &AffinePair, depth: u32, budget: u64) -> Result<(PieceCloud, LatticeBox)> {
    let (cloud, lattice) = attractor_cloud(pair, depth, budget)?;
    Ok((cloud, lattice.outer_box()))
}

/// Streams the cloud into the raster without storing it. The point budget
/// is raised to 16 points per pixel when that is larger.
pub fn rasterize(pair: &AffinePair, depth: u32, size: u32, budget: u64) -> Result<Raster> {
    if size == 0 {
        return Err(Error::InvalidParameter(
            "raster size must be positive".into(),
        ));
    }
    let lattice = Lattice::new(pair, depth)?;
    let budget = budget.max(16 * u64::from(size) * u64::from(size));
    lattice.cloud_size(pair.digit_count(), budget)?;
    let frame = Frame::new(lattice.outer_box(), size, size);
    let mut raster = Raster::blank(size, size);
    lattice.for_each_word(&mut |pt| {
        let (col, row) = frame.pixel(pt);
        raster.pixels[(row * size + col) as usize] = 0;
    });
    Ok(raster)
}

pub fn svg(pair: &AffinePair, depth: u32, size: u32, budget: u64) -> Result<String> {
    if size == 0 {
        return Err(Error::InvalidParameter(
            "raster size must be positive".into(),
        ));
    }
    let (cloud, frame) = cloud_and_frame(pair, depth, budget)?;
    let frame = Frame::new(frame, size, size);
    let mut out = String::with_capacity(64 + cloud.len() * 40);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{size}" height="{size}" fill="white"/>"#
    );
    out.push_str("<g fill=\"black\">\n");
    for &pt in &cloud.lattice_points {
        let (x, y) = frame.vector(pt);
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="0.5"/>"#,
            thousandths(x),
            thousandths(y)
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

pub fn render(
    pair: &AffinePair,
    depth: u32,
    format: RenderFormat,
    size: u32,
    budget: u64,
) -> Result<Vec<u8>> {
    match format {
        RenderFormat::Pgm => Ok(rasterize(pair, depth, size, budget)?.encode_pgm()),
        RenderFormat::Svg => Ok(svg(pair, depth, size, budget)?.into_bytes()),
    }
}

pub fn render_to_file(
    pair: &AffinePair,
    depth: u32,
    format: RenderFormat,
    size: u32,
    budget: u64,
    path: &Path,
) -> Result<()> {
    let bytes = render(pair, depth, format, size, budget)?;
    std::fs::write(path, bytes)
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn square_fills_the_raster() {
        let pr = AffinePair::new(2, 2, int(0), 2, 2).unwrap();
        let r = rasterize(&pr, 10, 512, 1 << 21).unwrap();
        let (marked, total) = r.coverage();
        assert!(marked * 100 >= total * 99, "{marked}/{total}");
    }

    #[test]
    fn singleton_marks_one_pixel() {
        let pr = AffinePair::new(3, 3, int(4), 1, 1).unwrap();
        let r = rasterize(&pr, 5, 64, 100).unwrap();
        assert_eq!(r.coverage().0, 1);
        let s = svg(&pr, 5, 64, 100).unwrap();
        assert_eq!(s.matches("<circle").count(), 1);
    }

    #[test]
    fn output_is_repeatable_and_round_trips() {
        let pr = AffinePair::new(4, -3, frac(7, 2), 6, 2).unwrap();
        let a = render(&pr, 4, RenderFormat::Pgm, 128, 100_000).unwrap();
        let b = render(&pr, 4, RenderFormat::Pgm, 128, 100_000).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with(b"P5\n128 128\n255\n"));
        let decoded = Raster::decode_pgm(&a).unwrap();
        assert_eq!(decoded.encode_pgm(), a);
        let s1 = render(&pr, 3, RenderFormat::Svg, 128, 100_000).unwrap();
        assert_eq!(s1, render(&pr, 3, RenderFormat::Svg, 128, 100_000).unwrap());
        assert_eq!(
            String::from_utf8(s1).unwrap().matches("<circle").count(),
            12usize.pow(3)
        );
    }

    #[test]
    fn thousandths_formatting() {
        assert_eq!(thousandths(12_345), "12.345");
        assert_eq!(thousandths(7), "0.007");
        assert_eq!(thousandths(-1500), "-1.500");
    }

    #[test]
    fn format_names_parse() {
        assert_eq!("pgm".parse::<RenderFormat>().unwrap(), RenderFormat::Pgm);
        assert_eq!(
            "scalable_vector".parse::<RenderFormat>().unwrap(),
            RenderFormat::Svg
        );
        assert!("png".parse::<RenderFormat>().is_err());
    }
}

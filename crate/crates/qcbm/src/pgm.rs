//! Netpbm grayscale images (`P2` ASCII and `P5` binary, maxval up to 65535).

use std::fs;
use std::io::Write;
use std::path::Path;

use qcbm_core::imgio::GrayImage;

use crate::{Error, Result};

fn bad(msg: impl Into<String>) -> Error {
    Error::Pgm(msg.into())
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&b| b != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_space();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(format!("expected a number at byte {start}")))
    }
}

/// Parses PGM bytes; intensities are scaled to `[0, 1]` by maxval.
pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(bad("missing P2/P5 magic")),
    };
    let mut h = Header { bytes, pos: 2 };
    let width = h.number()? as usize;
    let height = h.number()? as usize;
    let maxval = h.number()?;
    if maxval == 0 || maxval > 65535 {
        return Err(bad(format!("maxval {maxval} outside 1..=65535")));
    }
    let count = width * height;
    let samples: Vec<u32> = if binary {
        // Exactly one whitespace byte separates the header from the raster.
        let start = h.pos + 1;
        let wide = maxval > 255;
        let need = count * if wide { 2 } else { 1 };
        let raster = bytes.get(start..start + need).ok_or_else(|| bad("raster truncated"))?;
        if wide {
            raster.chunks_exact(2).map(|c| u32::from(u16::from_be_bytes([c[0], c[1]]))).collect()
        } else {
            raster.iter().map(|&b| u32::from(b)).collect()
        }
    } else {
        (0..count).map(|_| h.number()).collect::<Result<_>>()?
    };
    if let Some(v) = samples.iter().find(|&&v| v > maxval) {
        return Err(bad(format!("sample {v} exceeds maxval {maxval}")));
    }
    Ok(GrayImage::new(height, width, samples.iter().map(|&v| f64::from(v) / f64::from(maxval)).collect())?)
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    parse_pgm(&fs::read(path).map_err(Error::io(path))?)
}

/// Binary PGM bytes, quantized to `maxval` (255 or 65535 are typical).
pub fn encode_pgm(image: &GrayImage, maxval: u16) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", image.width(), image.height(), maxval).into_bytes();
    let m = f64::from(maxval);
    for &p in image.pixels() {
        let v = (p * m).round().clamp(0.0, m) as u16;
        if maxval > 255 {
            out.extend_from_slice(&v.to_be_bytes());
        } else {
            out.push(v as u8);
        }
    }
    out
}

/// ASCII PGM text.
pub fn encode_pgm_ascii(image: &GrayImage, maxval: u16) -> String {
    let mut out = format!("P2\n{} {}\n{}\n", image.width(), image.height(), maxval);
    let m = f64::from(maxval);
    for row in image.pixels().chunks(image.width()) {
        let line: Vec<String> = row.iter().map(|p| ((p * m).round().clamp(0.0, m) as u16).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_pgm(path: impl AsRef<Path>, image: &GrayImage, maxval: u16) -> Result<()> {
    let path = path.as_ref();
    let mut file = fs::File::create(path).map_err(Error::io(path))?;
    file.write_all(&encode_pgm(image, maxval)).map_err(Error::io(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_with_comments() {
        let img = parse_pgm(b"P2\n# made by hand\n3 2\n# max\n4\n0 1 2\n3 4 0\n").unwrap();
        assert_eq!((img.height(), img.width()), (2, 3));
        assert_eq!(img.pixels(), &[0.0, 0.25, 0.5, 0.75, 1.0, 0.0]);
    }

    #[test]
    fn binary_roundtrips() {
        let img = GrayImage::from_fn(3, 5, |r, c| ((r * 5 + c) as f64) / 14.0).unwrap();
        for maxval in [255u16, 65535] {
            let back = parse_pgm(&encode_pgm(&img, maxval)).unwrap();
            for (a, b) in back.pixels().iter().zip(img.pixels()) {
                assert!((a - b).abs() <= 0.5 / f64::from(maxval) + 1e-15);
            }
        }
        let exact = GrayImage::from_fn(2, 2, |r, c| ((r * 2 + c) * 85) as f64 / 255.0).unwrap();
        assert_eq!(parse_pgm(&encode_pgm(&exact, 255)).unwrap(), exact);
        assert_eq!(parse_pgm(encode_pgm_ascii(&exact, 255).as_bytes()).unwrap(), exact);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_pgm(b"P6\n1 1\n255\n\0\0\0").is_err());
        assert!(parse_pgm(b"P5\n2 2\n255\n\0").is_err());
        assert!(parse_pgm(b"P2\n1 1\n10\n11\n").is_err());
        assert!(parse_pgm(b"P2\n1 1\n0\n0\n").is_err());
    }
}

//! Minimal Netpbm greyscale reader/writer (P2 ASCII and P5 binary,
//! `maxval <= 65535`).

use std::fs;
use std::path::Path;

use crate::fht::ImageGrid;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u32,
    pub pixels: Vec<u32>,
}

impl Pgm {
    pub fn into_grid(self) -> Result<ImageGrid> {
        ImageGrid::from_dimensions(self.width, self.height, self.pixels)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&str> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Format("unexpected end of PGM data".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .map_err(|_| Error::Format("non-ASCII PGM header".into()))
    }

    fn number(&mut self, what: &str) -> Result<u64> {
        let tok = self.token()?;
        tok.parse()
            .map_err(|_| Error::Format(format!("bad {what} `{tok}` in PGM")))
    }
}

pub fn parse(bytes: &[u8]) -> Result<Pgm> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic = cur.token()?.to_owned();
    let binary = match magic.as_str() {
        "P2" => false,
        "P5" => true,
        other => return Err(Error::Format(format!("unsupported magic `{other}`"))),
    };
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Format(format!("maxval {maxval} outside [1, 65535]")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::Format("image dimensions overflow".into()))?;

    let mut pixels = Vec::with_capacity(count);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        cur.pos += 1;
        let wide = maxval > 255;
        let need = count * if wide { 2 } else { 1 };
        let raster = bytes
            .get(cur.pos..cur.pos + need)
            .ok_or_else(|| Error::Format("truncated P5 raster".into()))?;
        if wide {
            pixels.extend(raster.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]]) as u32));
        } else {
            pixels.extend(raster.iter().map(|&b| b as u32));
        }
    } else {
        for _ in 0..count {
            pixels.push(cur.number("pixel")? as u32);
        }
    }
    if let Some(v) = pixels.iter().find(|&&v| v as u64 > maxval) {
        return Err(Error::Format(format!("pixel {v} exceeds maxval {maxval}")));
    }
    Ok(Pgm { width, height, maxval: maxval as u32, pixels })
}

pub fn read(path: impl AsRef<Path>) -> Result<Pgm> {
    parse(&fs::read(path)?)
}

/// Loads a PGM and validates it as a square power-of-two image.
pub fn read_grid(path: impl AsRef<Path>) -> Result<ImageGrid> {
    read(path)?.into_grid()
}

/// ASCII (P2) encoding, one image row per line.
pub fn to_ascii(image: &ImageGrid) -> String {
    let n = image.side();
    let maxval = image.pixels().iter().copied().max().unwrap_or(0).max(1);
    let mut out = format!("P2\n{n} {n}\n{maxval}\n");
    for row in image.pixels().chunks(n) {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ascii_with_comments() {
        let pgm = parse(b"P2\n# a comment\n2 2\n# more\n9\n1 2\n3 9\n").unwrap();
        assert_eq!(pgm.pixels, vec![1, 2, 3, 9]);
        assert_eq!(pgm.maxval, 9);
    }

    #[test]
    fn parses_binary_8_and_16_bit() {
        let mut raw = b"P5 2 2 255\n".to_vec();
        raw.extend([0u8, 10, 200, 255]);
        assert_eq!(parse(&raw).unwrap().pixels, vec![0, 10, 200, 255]);

        let mut wide = b"P5\n2 2\n65535\n".to_vec();
        for v in [1u16, 256, 65535, 0] {
            wide.extend(v.to_be_bytes());
        }
        assert_eq!(parse(&wide).unwrap().pixels, vec![1, 256, 65535, 0]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(parse(b"P6 1 1 255\n\0\0\0"), Err(Error::Format(_))));
        assert!(matches!(parse(b"P2 2 2 5\n1 2 3"), Err(Error::Format(_))));
        assert!(matches!(parse(b"P2 1 1 5\n6"), Err(Error::Format(_))));
        assert!(matches!(parse(b"P5 2 2 255\n\0"), Err(Error::Format(_))));
    }

    #[test]
    fn ascii_round_trip() {
        let img = ImageGrid::from_fn(2, |y, x| (y * 4 + x) as u32).unwrap();
        let back = parse(to_ascii(&img).as_bytes()).unwrap().into_grid().unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn non_square_is_a_parameter_error() {
        let pgm = parse(b"P2 5 5 1\n0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0").unwrap();
        assert!(matches!(pgm.into_grid(), Err(Error::Parameter(_))));
    }
}

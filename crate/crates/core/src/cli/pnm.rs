//! Binary portable pixmap (`P6`, maxval 255) reading and writing.
//!
//! Header comments (`#` to end of line) are skipped on load and never written.
//! Bytes after the pixel payload are ignored.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::RgbImage;

fn format_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Format {
        offset,
        message: message.into(),
    }
}

struct Header<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.data.get(self.pos) {
                None => format_err(start, format!("header truncated before {what}")),
                Some(&b) => format_err(start, format!("expected {what}, found byte 0x{b:02x}")),
            });
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| format_err(start, format!("{what} too large")))
    }
}

/// Decodes a P6 pixmap held in memory.
pub fn decode(data: &[u8]) -> Result<RgbImage> {
    if data.len() < 2 {
        return Err(format_err(0, "file too short for a pixmap magic number"));
    }
    if &data[..2] != b"P6" {
        return Err(format_err(
            0,
            format!(
                "expected magic P6, found {:?}",
                String::from_utf8_lossy(&data[..2])
            ),
        ));
    }
    let mut header = Header { data, pos: 2 };
    if !data
        .get(2)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(format_err(2, "expected whitespace after magic number"));
    }
    let width_at = header.pos;
    let width = header.number("width")?;
    let height = header.number("height")?;
    if width == 0 || height == 0 {
        return Err(format_err(
            width_at,
            format!("zero dimension {width}x{height}"),
        ));
    }
    let maxval_at = {
        header.skip_whitespace_and_comments();
        header.pos
    };
    let maxval = header.number("maxval")?;
    if maxval != 255 {
        return Err(format_err(
            maxval_at,
            format!("maxval must be 255, got {maxval}"),
        ));
    }
    match data.get(header.pos) {
        Some(b) if b.is_ascii_whitespace() => header.pos += 1,
        Some(_) => {
            return Err(format_err(
                header.pos,
                "expected single whitespace before pixel data",
            ))
        }
        None => return Err(format_err(header.pos, "header truncated before pixel data")),
    }

    let start = header.pos;
    let needed = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| format_err(width_at, "dimensions overflow"))?;
    let available = data.len() - start;
    if available < needed {
        return Err(format_err(
            data.len(),
            format!("pixel data truncated: expected {needed} bytes from offset {start}, found {available}"),
        ));
    }
    RgbImage::from_raw(height, width, &data[start..start + needed])
}

/// Encodes as `P6\n<W> <H>\n255\n` followed by the raw pixels.
pub fn encode(img: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.reserve(3 * img.len());
    for p in img.pixels() {
        out.extend_from_slice(&p.channels());
    }
    out
}

pub fn load_image(path: impl AsRef<Path>) -> Result<RgbImage> {
    decode(&fs::read(path)?)
}

pub fn save_image(img: &RgbImage, path: impl AsRef<Path>) -> Result<()> {
    let mut f = std::io::BufWriter::new(fs::File::create(path)?);
    f.write_all(&encode(img))?;
    f.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::Pixel;
    use proptest::prelude::*;

    #[test]
    fn single_pixel_round_trip() {
        let img = RgbImage::new(1, 1, vec![Pixel::new(1, 2, 3)]).unwrap();
        let bytes = encode(&img);
        assert_eq!(bytes, b"P6\n1 1\n255\n\x01\x02\x03");
        assert_eq!(decode(&bytes).unwrap(), img);
    }

    #[test]
    fn comments_are_tolerated() {
        let data = b"P6 # made by hand\n# another\n2 # w\n1\n255\n\x00\x01\x02\x03\x04\x05";
        let img = decode(data).unwrap();
        assert_eq!(img.dims(), (1, 2));
        assert_eq!(img.get(0, 1), Pixel::new(3, 4, 5));
    }

    #[test]
    fn wrong_magic() {
        let err = decode(b"P3\n1 1\n255\n0 0 0").unwrap_err();
        assert!(matches!(err, Error::Format { offset: 0, .. }), "{err}");
    }

    #[test]
    fn wrong_maxval() {
        let err = decode(b"P6\n1 1\n65535\n\0\0\0\0\0\0").unwrap_err();
        assert!(matches!(err, Error::Format { offset: 7, .. }), "{err}");
    }

    #[test]
    fn truncated_payload() {
        let err = decode(b"P6\n2 2\n255\n\0\0\0\0\0").unwrap_err();
        match err {
            Error::Format { offset, message } => {
                assert_eq!(offset, 16);
                assert!(message.contains("truncated"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn truncated_header() {
        assert!(matches!(
            decode(b"P6\n2 "),
            Err(Error::Format { offset: 5, .. })
        ));
        assert!(matches!(decode(b"P"), Err(Error::Format { offset: 0, .. })));
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(
            decode(b"P6\n0 2\n255\n"),
            Err(Error::Format { .. })
        ));
    }

    proptest! {
        #[test]
        fn encode_decode_round_trip(h in 1usize..20, w in 1usize..20, seed in any::<u64>()) {
            let raw: Vec<u8> = (0..3 * h * w).map(|i| (seed.wrapping_mul(i as u64 + 1) >> 13) as u8).collect();
            let img = RgbImage::from_raw(h, w, &raw).unwrap();
            let bytes = encode(&img);
            prop_assert_eq!(&decode(&bytes).unwrap(), &img);
            prop_assert_eq!(encode(&decode(&bytes).unwrap()), bytes);
        }
    }
}

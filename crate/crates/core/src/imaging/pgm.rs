//! Binary PGM (P5) reading and writing.
//!
//! Output is always `P5\n<width> <height>\n255\n` followed by the raw bytes.
//! Input accepts `#` comments and arbitrary whitespace in the header, and any
//! maxval up to 255.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{GrayImage, ImagingError};

pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage, ImagingError> {
    let bytes = fs::read(path)?;
    read_pgm(&bytes)
}

pub fn save_image(path: impl AsRef<Path>, img: &GrayImage) -> Result<(), ImagingError> {
    let mut f = fs::File::create(path)?;
    f.write_all(&write_pgm(img))?;
    Ok(())
}

pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, ImagingError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ImagingError::Format(format!(
                "missing {what} in PGM header"
            )));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ImagingError::Format(format!("{what} out of range in PGM header")))
    }
}

pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage, ImagingError> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        let magic = String::from_utf8_lossy(&bytes[..bytes.len().min(2)]).into_owned();
        return Err(ImagingError::Format(format!(
            "expected binary PGM magic P5, found {magic:?}"
        )));
    }
    let mut hdr = Header { bytes, pos: 2 };
    let width = hdr.number("width")?;
    let height = hdr.number("height")?;
    let maxval = hdr.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(ImagingError::Format(format!(
            "zero dimension {width}x{height}"
        )));
    }
    if maxval == 0 || maxval > 255 {
        return Err(ImagingError::Format(format!(
            "only 8-bit PGM is supported, maxval {maxval}"
        )));
    }
    match bytes.get(hdr.pos) {
        Some(c) if c.is_ascii_whitespace() => hdr.pos += 1,
        _ => {
            return Err(ImagingError::Format(
                "missing whitespace after maxval".into(),
            ))
        }
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| ImagingError::Format("image too large".into()))?;
    let data = &bytes[hdr.pos..];
    if data.len() < n {
        return Err(ImagingError::Format(format!(
            "truncated raster: expected {n} bytes, found {}",
            data.len()
        )));
    }
    GrayImage::new(width, height, data[..n].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_two_by_two() {
        let mut file = b"P5\n2 2\n255\n".to_vec();
        file.extend_from_slice(&[0, 255, 128, 7]);
        let img = read_pgm(&file).unwrap();
        assert_eq!((img.width(), img.height()), (2, 2));
        assert_eq!(img.pixels(), &[0, 255, 128, 7]);
    }

    #[test]
    fn rejects_p6() {
        let mut file = b"P6\n1 1\n255\n".to_vec();
        file.extend_from_slice(&[1, 2, 3]);
        assert!(matches!(read_pgm(&file), Err(ImagingError::Format(_))));
    }

    #[test]
    fn rejects_truncated_raster() {
        let mut file = b"P5\n2 2\n255\n".to_vec();
        file.extend_from_slice(&[1, 2, 3]);
        assert!(matches!(read_pgm(&file), Err(ImagingError::Format(_))));
    }

    #[test]
    fn rejects_sixteen_bit() {
        let file = b"P5\n1 1\n65535\n\0\0".to_vec();
        assert!(matches!(read_pgm(&file), Err(ImagingError::Format(_))));
    }

    #[test]
    fn header_comments_are_skipped() {
        let mut file = b"P5\n# scanner\n3 1 # width height\n255\n".to_vec();
        file.extend_from_slice(&[9, 8, 7]);
        assert_eq!(read_pgm(&file).unwrap().pixels(), &[9, 8, 7]);
    }

    #[test]
    fn writer_header_is_exact() {
        let img = GrayImage::new(3, 2, vec![1, 2, 3, 4, 5, 6]).unwrap();
        let bytes = write_pgm(&img);
        assert_eq!(&bytes[..11], b"P5\n3 2\n255\n");
        assert_eq!(&bytes[11..], &[1, 2, 3, 4, 5, 6]);
        assert_eq!(read_pgm(&bytes).unwrap(), img);
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_image("/nonexistent/definitely/missing.pgm"),
            Err(ImagingError::Io(_))
        ));
    }
}

//! Grayscale raster type and netpbm (PGM/PPM) codec.
//!
//! Color inputs are reduced to gray on load with the Rec.601 weights
//! `0.299 R + 0.587 G + 0.114 B`, rounded half-up in integer arithmetic.
//! Output is always PGM.

use crate::error::{Error, ParseError, Result};

/// Row-major 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    max_level: u8,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, max_level: u8, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if max_level == 0 {
            return Err(Error::InvalidImage("max_level must be positive".into()));
        }
        let expected = width.checked_mul(height).ok_or_else(|| {
            Error::InvalidImage(format!("{width}x{height} overflows the pixel count"))
        })?;
        if pixels.len() != expected {
            return Err(Error::InvalidImage(format!(
                "expected {expected} pixels for {width}x{height}, got {}",
                pixels.len()
            )));
        }
        if let Some(&p) = pixels.iter().find(|&&p| p > max_level) {
            return Err(Error::InvalidImage(format!(
                "pixel value {p} exceeds max_level {max_level}"
            )));
        }
        Ok(Self {
            width,
            height,
            max_level,
            pixels,
        })
    }

    /// Image with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, max_level: u8, value: u8) -> Result<Self> {
        Self::new(width, height, max_level, vec![value; width * height])
    }

    /// Builds an image from a generator called with `(row, col)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        max_level: u8,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Self::new(width, height, max_level, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Largest representable level (`L - 1`).
    pub fn max_level(&self) -> u8 {
        self.max_level
    }

    /// Number of representable levels `L`.
    pub fn levels(&self) -> usize {
        self.max_level as usize + 1
    }

    pub fn pixel_count(&self) -> usize {
        self.pixels.len()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    /// Pixel at `(row, col)` with out-of-range coordinates clamped to the border.
    pub fn get_clamped(&self, row: isize, col: isize) -> u8 {
        let r = row.clamp(0, self.height as isize - 1) as usize;
        let c = col.clamp(0, self.width as isize - 1) as usize;
        self.pixels[r * self.width + c]
    }

    /// Same geometry, new pixel values. Values are assumed to be within `max_level`.
    pub(crate) fn with_pixels(&self, pixels: Vec<u8>) -> Self {
        debug_assert_eq!(pixels.len(), self.pixels.len());
        debug_assert!(pixels.iter().all(|&p| p <= self.max_level));
        Self {
            width: self.width,
            height: self.height,
            max_level: self.max_level,
            pixels,
        }
    }

    /// Number of distinct gray levels present.
    pub fn distinct_levels(&self) -> usize {
        let mut seen = [false; 256];
        for &p in &self.pixels {
            seen[p as usize] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    PgmAscii,
    PpmAscii,
    PgmBinary,
    PpmBinary,
}

impl Kind {
    fn from_magic(magic: &[u8]) -> Option<Self> {
        match magic {
            b"P2" => Some(Kind::PgmAscii),
            b"P3" => Some(Kind::PpmAscii),
            b"P5" => Some(Kind::PgmBinary),
            b"P6" => Some(Kind::PpmBinary),
            _ => None,
        }
    }

    fn channels(self) -> usize {
        match self {
            Kind::PgmAscii | Kind::PgmBinary => 1,
            Kind::PpmAscii | Kind::PpmBinary => 3,
        }
    }

    fn is_binary(self) -> bool {
        matches!(self, Kind::PgmBinary | Kind::PpmBinary)
    }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&b) = self.data.get(self.pos) {
                    self.pos += 1;
                    if b == b'\n' || b == b'\r' {
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

    /// Next whitespace-delimited token, or `None` at end of input.
    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while let Some(&b) = self.data.get(self.pos) {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.data[start..self.pos])
    }

    fn number(&mut self, field: &'static str) -> Result<u64, ParseError> {
        let tok = self.token().ok_or(ParseError::MissingField(field))?;
        let invalid = || ParseError::InvalidNumber {
            field,
            text: String::from_utf8_lossy(tok).into_owned(),
        };
        if !tok.iter().all(u8::is_ascii_digit) {
            return Err(invalid());
        }
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse::<u64>().ok())
            .ok_or_else(invalid)
    }
}

/// Rec.601 luminance, rounded half-up.
pub fn luminance(r: u8, g: u8, b: u8) -> u8 {
    let weighted = 299 * r as u32 + 587 * g as u32 + 114 * b as u32;
    ((weighted + 500) / 1000) as u8
}

/// Decodes a PGM (P2/P5) or PPM (P3/P6) stream with maxval at most 255.
///
/// PPM input is reduced to gray with [`luminance`].
pub fn load_netpbm(bytes: &[u8]) -> Result<GrayImage, ParseError> {
    let magic = bytes.get(..2).unwrap_or(bytes);
    let kind = Kind::from_magic(magic).ok_or_else(|| ParseError::BadMagic(magic.to_vec()))?;
    let mut cur = Cursor { data: bytes, pos: 2 };
    // The magic number must be followed by whitespace or a comment.
    match bytes.get(2) {
        Some(b) if b.is_ascii_whitespace() || *b == b'#' => {}
        _ => return Err(ParseError::BadMagic(bytes[..bytes.len().min(3)].to_vec())),
    }

    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 {
        return Err(ParseError::ZeroField("width"));
    }
    if height == 0 {
        return Err(ParseError::ZeroField("height"));
    }
    if maxval == 0 {
        return Err(ParseError::ZeroField("maxval"));
    }
    if maxval > 255 {
        return Err(ParseError::MaxvalTooLarge(maxval));
    }
    let overflow = ParseError::DimensionOverflow { width, height };
    let (width, height) = match (usize::try_from(width), usize::try_from(height)) {
        (Ok(w), Ok(h)) => (w, h),
        _ => return Err(overflow),
    };
    let pixel_count = width.checked_mul(height).ok_or(overflow.clone())?;
    let sample_count = pixel_count.checked_mul(kind.channels()).ok_or(overflow)?;

    let samples: Vec<u8> = if kind.is_binary() {
        // Exactly one whitespace byte separates maxval from the raster.
        let start = cur.pos + 1;
        let raster = bytes.get(start..).unwrap_or(&[]);
        if raster.len() < sample_count {
            return Err(ParseError::Truncated {
                expected: sample_count,
                found: raster.len(),
            });
        }
        let raster = &raster[..sample_count];
        if let Some(&v) = raster.iter().find(|&&v| v as u64 > maxval) {
            return Err(ParseError::SampleOutOfRange {
                value: v as u64,
                maxval,
            });
        }
        raster.to_vec()
    } else {
        let mut out = Vec::with_capacity(sample_count);
        while out.len() < sample_count {
            let value = match cur.number("sample") {
                Ok(v) => v,
                Err(ParseError::MissingField(_)) => {
                    return Err(ParseError::Truncated {
                        expected: sample_count,
                        found: out.len(),
                    })
                }
                Err(e) => return Err(e),
            };
            if value > maxval {
                return Err(ParseError::SampleOutOfRange { value, maxval });
            }
            out.push(value as u8);
        }
        out
    };

    let pixels = match kind.channels() {
        1 => samples,
        _ => samples
            .chunks_exact(3)
            .map(|rgb| luminance(rgb[0], rgb[1], rgb[2]))
            .collect(),
    };
    Ok(GrayImage {
        width,
        height,
        max_level: maxval as u8,
        pixels,
    })
}

/// Encodes `img` as P5 (`binary`) or P2 with maxval equal to the image's `max_level`.
pub fn save_pgm(img: &GrayImage, binary: bool) -> Vec<u8> {
    let magic = if binary { "P5" } else { "P2" };
    let mut out = format!(
        "{magic}\n{} {}\n{}\n",
        img.width, img.height, img.max_level
    )
    .into_bytes();
    if binary {
        out.extend_from_slice(&img.pixels);
        return out;
    }
    // netpbm asks for ASCII lines of at most 70 characters.
    for row in img.pixels.chunks(img.width) {
        let mut line_len = 0;
        for (i, v) in row.iter().enumerate() {
            let text = v.to_string();
            if i > 0 {
                if line_len + 1 + text.len() > 70 {
                    out.push(b'\n');
                    line_len = 0;
                } else {
                    out.push(b' ');
                    line_len += 1;
                }
            }
            out.extend_from_slice(text.as_bytes());
            line_len += text.len();
        }
        out.push(b'\n');
    }
    out
}

//! Grey-tone image model, histograms and PGM/luminance ingestion.
//!
//! Samples are kept as `f64` brightness values on the 0..=255 tone scale.
//! Tone curves routinely produce non-integer brightness, and the functionals
//! are evaluated on those values directly; quantization to 8-bit tones only
//! happens when histogramming, looking up a LUT, or writing a file.

use crate::error::{ImageError, PgmError};

/// Number of grey tones on the 8-bit scale.
pub const TONES: usize = 256;

/// Largest brightness value.
pub const MAX_TONE: f64 = 255.0;

/// Quantizes a brightness value to an 8-bit tone: round half up, then clamp.
#[inline]
pub fn quantize(sample: f64) -> u8 {
    let rounded = (sample + 0.5).floor();
    if rounded <= 0.0 {
        0
    } else if rounded >= MAX_TONE {
        255
    } else {
        rounded as u8
    }
}

/// A rectangular grid of brightness samples in `[0, 255]`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BrightnessImage {
    width: usize,
    height: usize,
    samples: Vec<f64>,
}

impl BrightnessImage {
    pub fn new(width: usize, height: usize, samples: Vec<f64>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::ZeroDimension { width, height });
        }
        let expected = width
            .checked_mul(height)
            .ok_or(ImageError::ZeroDimension { width, height })?;
        if samples.len() != expected {
            return Err(ImageError::SampleCount {
                expected,
                actual: samples.len(),
            });
        }
        if let Some((index, &value)) = samples
            .iter()
            .enumerate()
            .find(|(_, s)| !(0.0..=MAX_TONE).contains(*s))
        {
            return Err(ImageError::SampleOutOfRange { index, value });
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    /// Builds an image from 8-bit tones.
    pub fn from_tones(width: usize, height: usize, tones: &[u8]) -> Result<Self, ImageError> {
        Self::new(width, height, tones.iter().map(|&t| f64::from(t)).collect())
    }

    /// A `width × height` image where every sample equals `value`.
    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self, ImageError> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.samples.len()
    }

    /// Row-major samples.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        if x < self.width && y < self.height {
            Some(self.samples[y * self.width + x])
        } else {
            None
        }
    }

    /// Quantized 8-bit tones, row-major.
    pub fn tones(&self) -> Vec<u8> {
        self.samples.iter().map(|&s| quantize(s)).collect()
    }

    /// Returns a new image with `f` applied to every sample.
    pub fn map<F>(&self, f: F) -> Result<Self, ImageError>
    where
        F: Fn(f64) -> f64,
    {
        Self::new(
            self.width,
            self.height,
            self.samples.iter().map(|&s| f(s)).collect(),
        )
    }

    pub fn histogram(&self) -> Histogram {
        compute_histogram(self)
    }
}

/// Pixel counts per integer tone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: [u64; TONES],
    total: u64,
}

impl Histogram {
    /// Builds a histogram from raw counts. Fails if every count is zero.
    pub fn from_counts(counts: [u64; TONES]) -> Result<Self, ImageError> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(ImageError::EmptyHistogram);
        }
        Ok(Self { counts, total })
    }

    pub fn counts(&self) -> &[u64; TONES] {
        &self.counts
    }

    pub fn count(&self, tone: u8) -> u64 {
        self.counts[tone as usize]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Iterates over `(tone, count)` for tones with a non-zero count, in tone order.
    pub fn occupied(&self) -> impl Iterator<Item = (u8, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(t, &c)| (t as u8, c))
    }

    /// 256 lines of `tone,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(TONES * 8);
        for (tone, count) in self.counts.iter().enumerate() {
            out.push_str(&format!("{tone},{count}\n"));
        }
        out
    }
}

/// Counts samples per quantized tone.
pub fn compute_histogram(image: &BrightnessImage) -> Histogram {
    let mut counts = [0u64; TONES];
    for &s in image.samples() {
        counts[quantize(s) as usize] += 1;
    }
    Histogram {
        counts,
        total: image.pixel_count() as u64,
    }
}

const LUMA_R: f64 = 0.299;
const LUMA_G: f64 = 0.587;
const LUMA_B: f64 = 0.114;

/// Converts interleaved 8-bit RGB triples to luma brightness (`0.299 R + 0.587 G + 0.114 B`).
///
/// The result is not quantized.
pub fn rgb_to_brightness(
    rgb: &[u8],
    width: usize,
    height: usize,
) -> Result<BrightnessImage, ImageError> {
    let expected = width.saturating_mul(height).saturating_mul(3);
    if rgb.len() != expected {
        return Err(ImageError::SampleCount {
            expected,
            actual: rgb.len(),
        });
    }
    let samples = rgb
        .chunks_exact(3)
        .map(|px| {
            let y =
                LUMA_R * f64::from(px[0]) + LUMA_G * f64::from(px[1]) + LUMA_B * f64::from(px[2]);
            // the weights sum to one only up to rounding
            y.clamp(0.0, MAX_TONE)
        })
        .collect();
    BrightnessImage::new(width, height, samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PgmKind {
    Ascii,
    Binary,
}

struct HeaderReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.data.len() {
            match self.data[self.pos] {
                b'#' => {
                    while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn read_number(&mut self, field: &'static str) -> Result<u64, PgmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PgmError::BadField {
                field,
                offset: start,
            });
        }
        // the digits are ASCII, so this cannot fail
        let text = std::str::from_utf8(&self.data[start..self.pos]).unwrap_or_default();
        text.parse::<u64>().map_err(|_| PgmError::BadField {
            field,
            offset: start,
        })
    }
}

/// Parses a PGM file (`P2` ASCII or `P5` binary, maxval ≤ 255).
///
/// Files with maxval `m < 255` are rescaled onto the 0..=255 scale by `255/m`
/// and the rescaled values are kept as reals.
pub fn load_pgm(bytes: &[u8]) -> Result<BrightnessImage, PgmError> {
    let kind = match bytes.get(..2) {
        Some(b"P2") => PgmKind::Ascii,
        Some(b"P5") => PgmKind::Binary,
        _ => return Err(PgmError::BadMagic),
    };
    let mut reader = HeaderReader {
        data: bytes,
        pos: 2,
    };
    match bytes.get(2) {
        Some(c) if c.is_ascii_whitespace() || *c == b'#' => {}
        _ => return Err(PgmError::BadMagic),
    }

    let width = reader.read_number("width")?;
    let height = reader.read_number("height")?;
    let maxval_offset = reader.pos;
    let maxval = reader.read_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(PgmError::ZeroDimension { width, height });
    }
    if maxval == 0 || maxval > 255 {
        return Err(PgmError::BadMaxval {
            maxval,
            offset: maxval_offset,
        });
    }
    let width = usize::try_from(width).map_err(|_| PgmError::BadField {
        field: "width",
        offset: 2,
    })?;
    let height = usize::try_from(height).map_err(|_| PgmError::BadField {
        field: "height",
        offset: 2,
    })?;
    let pixels = width.checked_mul(height).ok_or(PgmError::BadField {
        field: "height",
        offset: 2,
    })?;

    let mut raw = Vec::with_capacity(pixels);
    match kind {
        PgmKind::Binary => {
            // exactly one whitespace byte separates maxval from the raster
            match bytes.get(reader.pos) {
                Some(c) if c.is_ascii_whitespace() => reader.pos += 1,
                _ => {
                    return Err(PgmError::BadField {
                        field: "maxval",
                        offset: reader.pos,
                    })
                }
            }
            let start = reader.pos;
            let available = bytes.len().saturating_sub(start);
            if available < pixels {
                return Err(PgmError::Truncated {
                    offset: bytes.len(),
                    expected: pixels,
                    found: available,
                });
            }
            for (i, &b) in bytes[start..start + pixels].iter().enumerate() {
                if u64::from(b) > maxval {
                    return Err(PgmError::SampleAboveMaxval {
                        offset: start + i,
                        value: u64::from(b),
                        maxval,
                    });
                }
                raw.push(b);
            }
        }
        PgmKind::Ascii => {
            for found in 0..pixels {
                reader.skip_whitespace_and_comments();
                if reader.pos >= bytes.len() {
                    return Err(PgmError::Truncated {
                        offset: bytes.len(),
                        expected: pixels,
                        found,
                    });
                }
                let offset = reader.pos;
                let value = reader.read_number("pixel")?;
                if value > maxval {
                    return Err(PgmError::SampleAboveMaxval {
                        offset,
                        value,
                        maxval,
                    });
                }
                raw.push(value as u8);
            }
        }
    }

    let samples = if maxval == 255 {
        raw.iter().map(|&b| f64::from(b)).collect()
    } else {
        let m = maxval as f64;
        raw.iter()
            .map(|&b| (f64::from(b) * MAX_TONE / m).min(MAX_TONE))
            .collect()
    };
    Ok(BrightnessImage::new(width, height, samples)?)
}

/// Encodes an image as binary `P5` with maxval 255, quantizing every sample.
pub fn save_pgm(image: &BrightnessImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", image.width(), image.height());
    let mut out = Vec::with_capacity(header.len() + image.pixel_count());
    out.extend_from_slice(header.as_bytes());
    out.extend(image.samples().iter().map(|&s| quantize(s)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p5(width: usize, height: usize, maxval: u8, data: &[u8]) -> Vec<u8> {
        let mut v = format!("P5\n{width} {height}\n{maxval}\n").into_bytes();
        v.extend_from_slice(data);
        v
    }

    #[test]
    fn quantize_rounds_half_up_and_clamps() {
        assert_eq!(quantize(127.5), 128);
        assert_eq!(quantize(63.36), 63);
        assert_eq!(quantize(0.49), 0);
        assert_eq!(quantize(-3.0), 0);
        assert_eq!(quantize(254.5), 255);
        assert_eq!(quantize(300.0), 255);
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(matches!(
            BrightnessImage::new(0, 3, vec![]),
            Err(ImageError::ZeroDimension { .. })
        ));
        assert!(matches!(
            BrightnessImage::new(2, 2, vec![1.0; 3]),
            Err(ImageError::SampleCount { .. })
        ));
        assert!(matches!(
            BrightnessImage::new(1, 1, vec![255.5]),
            Err(ImageError::SampleOutOfRange { index: 0, .. })
        ));
        assert!(BrightnessImage::new(1, 1, vec![f64::NAN]).is_err());
    }

    #[test]
    fn load_p5_direct_bytes() {
        let img = load_pgm(&p5(2, 2, 255, &[0, 255, 255, 0])).unwrap();
        assert_eq!(img.samples(), &[0.0, 255.0, 255.0, 0.0]);
    }

    #[test]
    fn load_p2_single_pixel() {
        let img = load_pgm(b"P2\n1 1\n255\n128\n").unwrap();
        assert_eq!((img.width(), img.height()), (1, 1));
        assert_eq!(img.samples(), &[128.0]);
    }

    #[test]
    fn load_rescales_small_maxval() {
        let img = load_pgm(&p5(1, 1, 127, &[127])).unwrap();
        assert_eq!(img.samples(), &[255.0]);
        let img = load_pgm(b"P2 2 1 15 5 15").unwrap();
        assert_eq!(img.samples(), &[85.0, 255.0]);
    }

    #[test]
    fn load_accepts_comments_anywhere_in_header() {
        let data = b"P2\n# made by hand\n2 # width done\n# another\n1\n255\n# pixels\n3 4\n";
        let img = load_pgm(data).unwrap();
        assert_eq!(img.samples(), &[3.0, 4.0]);
    }

    #[test]
    fn load_errors_name_the_problem() {
        assert_eq!(load_pgm(b"P6\n1 1\n255\n\0"), Err(PgmError::BadMagic));
        assert_eq!(load_pgm(b""), Err(PgmError::BadMagic));
        assert!(matches!(
            load_pgm(b"P5\n1 1\n256\n\0"),
            Err(PgmError::BadMaxval { maxval: 256, .. })
        ));
        assert!(matches!(
            load_pgm(b"P5\n0 1\n255\n"),
            Err(PgmError::ZeroDimension { .. })
        ));
        assert!(matches!(
            load_pgm(&p5(2, 2, 255, &[1, 2, 3])),
            Err(PgmError::Truncated {
                expected: 4,
                found: 3,
                ..
            })
        ));
        assert!(matches!(
            load_pgm(b"P2\n2 1\n255\n7"),
            Err(PgmError::Truncated { found: 1, .. })
        ));
        assert!(matches!(
            load_pgm(b"P5\nx 1\n255\n"),
            Err(PgmError::BadField {
                field: "width",
                offset: 3
            })
        ));
        assert!(matches!(
            load_pgm(&p5(1, 1, 100, &[101])),
            Err(PgmError::SampleAboveMaxval { value: 101, .. })
        ));
    }

    #[test]
    fn save_quantizes_and_writes_p5() {
        let img = BrightnessImage::new(1, 1, vec![127.5]).unwrap();
        let bytes = save_pgm(&img);
        assert_eq!(bytes, b"P5\n1 1\n255\n\x80");

        let img = BrightnessImage::new(1, 1, vec![63.36]).unwrap();
        assert_eq!(*save_pgm(&img).last().unwrap(), 63);
    }

    #[test]
    fn save_load_round_trip() {
        let img = BrightnessImage::from_tones(2, 2, &[0, 255, 255, 0]).unwrap();
        assert_eq!(load_pgm(&save_pgm(&img)).unwrap(), img);
    }

    #[test]
    fn luma_conversion() {
        let img = rgb_to_brightness(&[255, 255, 255, 0, 0, 0, 255, 0, 0], 3, 1).unwrap();
        assert_eq!(img.samples()[0], 255.0);
        assert_eq!(img.samples()[1], 0.0);
        assert!((img.samples()[2] - 76.245).abs() < 1e-12);
        assert!(rgb_to_brightness(&[1, 2], 1, 1).is_err());
    }

    #[test]
    fn histogram_counts_tones() {
        let img = BrightnessImage::from_tones(2, 2, &[0, 255, 255, 0]).unwrap();
        let h = compute_histogram(&img);
        assert_eq!(h.count(0), 2);
        assert_eq!(h.count(255), 2);
        assert_eq!(h.total(), 4);
        assert_eq!(h.occupied().count(), 2);

        let h = BrightnessImage::new(1, 1, vec![127.5]).unwrap().histogram();
        assert_eq!(h.count(128), 1);
    }

    #[test]
    fn histogram_csv_has_256_lines() {
        let h = BrightnessImage::from_tones(1, 1, &[128])
            .unwrap()
            .histogram();
        let csv = h.to_csv();
        assert_eq!(csv.lines().count(), 256);
        assert!(csv.lines().any(|l| l == "128,1"));
        assert!(csv.starts_with("0,0\n"));
    }

    #[test]
    fn empty_histogram_is_rejected() {
        assert_eq!(
            Histogram::from_counts([0; TONES]),
            Err(ImageError::EmptyHistogram)
        );
    }
}

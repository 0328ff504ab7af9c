//! Scalar functionals of a brightness distribution.
//!
//! Mean and variance are the usual population statistics. The visibility
//! functional borrows the optical fringe visibility `(I_max - I_min) / (I_max + I_min)`
//! and substitutes for the two intensities the mean brightness of the pixels
//! at or above the image mean and of those at or below it.
//!
//! Pixels exactly equal to the mean belong to both subsets, so
//! `count_low + count_high >= pixel_count`. Membership uses exact comparison
//! on the stored values.
//!
//! Sums run left to right in row-major order (per-pixel path) or in tone
//! order (LUT path), which makes results bit-reproducible.

use crate::curves::ToneCurve;
use crate::error::FunctionalError;
use crate::image::{BrightnessImage, Histogram};

/// All functional values for one image or one candidate variation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityReport {
    pub mean: f64,
    /// Population variance around `mean`.
    pub variance: f64,
    pub sub_mean_low: f64,
    pub sub_mean_high: f64,
    pub count_low: u64,
    pub count_high: u64,
    /// Fringe-visibility analogue built from the two sub-means.
    pub visibility: f64,
}

/// Means of the two subsets split at the image mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubMeans {
    pub low: f64,
    pub count_low: u64,
    pub high: f64,
    pub count_high: u64,
}

/// Mean brightness. The value is clamped into `[min, max]` of the samples so that
/// rounding can never push it outside the data (a constant image has mean equal to
/// its value, and both split subsets stay non-empty).
pub fn brightness_mean(image: &BrightnessImage) -> f64 {
    let samples = image.samples();
    let mut sum = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &s in samples {
        sum += s;
        lo = lo.min(s);
        hi = hi.max(s);
    }
    (sum / samples.len() as f64).clamp(lo, hi)
}

/// Population variance, divided by the pixel count.
pub fn brightness_variance(image: &BrightnessImage) -> f64 {
    variance_about(image, brightness_mean(image))
}

fn variance_about(image: &BrightnessImage, mean: f64) -> f64 {
    let samples = image.samples();
    let sum_sq: f64 = samples
        .iter()
        .map(|&s| {
            let d = s - mean;
            d * d
        })
        .fold(0.0, |acc, x| acc + x);
    sum_sq / samples.len() as f64
}

/// Splits the pixels at the mean and returns each subset's mean and size.
pub fn split_sub_means(image: &BrightnessImage) -> SubMeans {
    split_about(image, brightness_mean(image))
}

fn split_about(image: &BrightnessImage, mean: f64) -> SubMeans {
    let (mut sum_low, mut n_low) = (0.0, 0u64);
    let (mut sum_high, mut n_high) = (0.0, 0u64);
    for &s in image.samples() {
        if s <= mean {
            sum_low += s;
            n_low += 1;
        }
        if s >= mean {
            sum_high += s;
            n_high += 1;
        }
    }
    // both subsets hold at least the min / max sample since mean lies in [min, max]
    SubMeans {
        low: sum_low / n_low as f64,
        count_low: n_low,
        high: sum_high / n_high as f64,
        count_high: n_high,
    }
}

fn visibility_from(low: f64, high: f64) -> f64 {
    let denom = high + low;
    if denom == 0.0 {
        0.0
    } else {
        (high - low) / denom
    }
}

/// Visibility functional; 0 for an all-black image.
pub fn visibility(image: &BrightnessImage) -> f64 {
    let sub = split_sub_means(image);
    visibility_from(sub.low, sub.high)
}

/// Optical fringe visibility of a bright/dark intensity pair.
pub fn fringe_visibility(i_max: f64, i_min: f64) -> Result<f64, FunctionalError> {
    if !(i_min >= 0.0 && i_max >= i_min && i_max + i_min > 0.0) || !i_max.is_finite() {
        return Err(FunctionalError::Domain { i_max, i_min });
    }
    Ok((i_max - i_min) / (i_max + i_min))
}

/// Computes every functional of `image` on the per-pixel path.
pub fn report(image: &BrightnessImage) -> VisibilityReport {
    let mean = brightness_mean(image);
    let variance = variance_about(image, mean);
    let sub = split_about(image, mean);
    VisibilityReport {
        mean,
        variance,
        sub_mean_low: sub.low,
        sub_mean_high: sub.high,
        count_low: sub.count_low,
        count_high: sub.count_high,
        visibility: visibility_from(sub.low, sub.high),
    }
}

/// Computes the report of an integer-tone image after applying `curve`, using only
/// its histogram. Cost is O(256) regardless of image size.
///
/// The curve is expected to map every occupied tone into `[0, 255]`
/// (see [`crate::curves::validate_range`]); otherwise the visibility may leave `[0, 1]`.
pub fn report_from_lut(histogram: &Histogram, curve: &ToneCurve) -> VisibilityReport {
    let lut = curve.lut();
    let n = histogram.total() as f64;

    let mut sum = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (tone, count) in histogram.occupied() {
        let v = lut[tone as usize];
        sum += count as f64 * v;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let mean = (sum / n).clamp(lo, hi);

    let mut sum_sq = 0.0;
    let (mut sum_low, mut n_low) = (0.0, 0u64);
    let (mut sum_high, mut n_high) = (0.0, 0u64);
    for (tone, count) in histogram.occupied() {
        let v = lut[tone as usize];
        let d = v - mean;
        sum_sq += count as f64 * (d * d);
        if v <= mean {
            sum_low += count as f64 * v;
            n_low += count;
        }
        if v >= mean {
            sum_high += count as f64 * v;
            n_high += count;
        }
    }
    let low = sum_low / n_low as f64;
    let high = sum_high / n_high as f64;
    VisibilityReport {
        mean,
        variance: sum_sq / n,
        sub_mean_low: low,
        sub_mean_high: high,
        count_low: n_low,
        count_high: n_high,
        visibility: visibility_from(low, high),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(samples: &[f64]) -> BrightnessImage {
        BrightnessImage::new(samples.len(), 1, samples.to_vec()).unwrap()
    }

    #[test]
    fn mean_examples() {
        assert_eq!(brightness_mean(&img(&[0.0, 255.0, 255.0, 0.0])), 127.5);
        assert_eq!(
            brightness_mean(&BrightnessImage::constant(3, 5, 42.0).unwrap()),
            42.0
        );
        assert_eq!(brightness_mean(&img(&[100.0, 100.0, 200.0, 200.0])), 150.0);
    }

    #[test]
    fn mean_of_constant_real_image_is_exact() {
        // 0.1 + 0.1 + 0.1 rounds above 0.3; the clamp keeps the mean on the data
        let c = BrightnessImage::constant(3, 1, 0.1).unwrap();
        assert_eq!(brightness_mean(&c), 0.1);
        let sub = split_sub_means(&c);
        assert_eq!((sub.count_low, sub.count_high), (3, 3));
        assert_eq!(visibility(&c), 0.0);
    }

    #[test]
    fn variance_examples() {
        assert_eq!(
            brightness_variance(&BrightnessImage::constant(4, 4, 17.0).unwrap()),
            0.0
        );
        assert_eq!(
            brightness_variance(&img(&[0.0, 255.0, 255.0, 0.0])),
            16256.25
        );
    }

    #[test]
    fn split_examples() {
        let s = split_sub_means(&img(&[0.0, 255.0, 255.0, 0.0]));
        assert_eq!(
            (s.low, s.count_low, s.high, s.count_high),
            (0.0, 2, 255.0, 2)
        );

        let s = split_sub_means(&BrightnessImage::constant(2, 3, 42.0).unwrap());
        assert_eq!(
            (s.low, s.count_low, s.high, s.count_high),
            (42.0, 6, 42.0, 6)
        );

        let s = split_sub_means(&img(&[100.0, 100.0, 200.0, 200.0]));
        assert_eq!(
            (s.low, s.count_low, s.high, s.count_high),
            (100.0, 2, 200.0, 2)
        );
    }

    #[test]
    fn pixels_at_the_mean_join_both_subsets() {
        let s = split_sub_means(&img(&[100.0, 150.0, 200.0]));
        assert_eq!((s.count_low, s.count_high), (2, 2));
        assert_eq!(s.low, 125.0);
        assert_eq!(s.high, 175.0);
    }

    #[test]
    fn visibility_examples() {
        assert_eq!(visibility(&img(&[0.0, 255.0, 255.0, 0.0])), 1.0);
        assert_eq!(
            visibility(&BrightnessImage::constant(2, 2, 9.0).unwrap()),
            0.0
        );
        assert!((visibility(&img(&[100.0, 100.0, 200.0, 200.0])) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            visibility(&BrightnessImage::constant(2, 2, 0.0).unwrap()),
            0.0
        );
    }

    #[test]
    fn fringe_visibility_examples_and_domain() {
        assert_eq!(fringe_visibility(1.0, 0.0), Ok(1.0));
        assert_eq!(fringe_visibility(7.5, 7.5), Ok(0.0));
        assert_eq!(fringe_visibility(3.0, 1.0), Ok(0.5));
        assert!(fringe_visibility(1.0, 3.0).is_err());
        assert!(fringe_visibility(0.0, 0.0).is_err());
        assert!(fringe_visibility(1.0, -0.5).is_err());
        assert!(fringe_visibility(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn report_bundles_individual_values() {
        let image = img(&[0.0, 255.0, 255.0, 0.0]);
        let r = report(&image);
        assert_eq!(r.mean, 127.5);
        assert_eq!(r.variance, 16256.25);
        assert_eq!(r.visibility, 1.0);
        assert_eq!((r.count_low, r.count_high), (2, 2));

        let image = img(&[3.0, 17.5, 200.25, 99.0, 42.0]);
        let r = report(&image);
        let s = split_sub_means(&image);
        assert_eq!(r.mean.to_bits(), brightness_mean(&image).to_bits());
        assert_eq!(r.variance.to_bits(), brightness_variance(&image).to_bits());
        assert_eq!(r.visibility.to_bits(), visibility(&image).to_bits());
        assert_eq!((r.sub_mean_low, r.sub_mean_high), (s.low, s.high));

        let r = report(&BrightnessImage::constant(2, 2, 0.0).unwrap());
        assert_eq!((r.mean, r.variance, r.visibility), (0.0, 0.0, 0.0));
    }

    #[test]
    fn lut_report_identity_matches_pixels() {
        let image = BrightnessImage::from_tones(2, 2, &[0, 255, 255, 0]).unwrap();
        let r = report_from_lut(&image.histogram(), &ToneCurve::identity());
        assert_eq!(r, report(&image));
    }

    #[test]
    fn lut_report_single_tone_has_zero_visibility() {
        let image = BrightnessImage::from_tones(3, 3, &[77; 9]).unwrap();
        let curve = ToneCurve::from_fn(|t| 255.0 - t as f64 * 0.37, "test");
        let r = report_from_lut(&image.histogram(), &curve);
        assert_eq!(r.visibility, 0.0);
        assert_eq!((r.count_low, r.count_high), (9, 9));

        let black = BrightnessImage::from_tones(2, 1, &[0, 0]).unwrap();
        let r = report_from_lut(&black.histogram(), &ToneCurve::identity());
        assert_eq!(r.visibility, 0.0);
    }
}

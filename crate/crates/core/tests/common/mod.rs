//! Test-only oracles. Nothing here calls into the functionals or optimizer code
//! under test; only the image and curve containers are shared.
#![allow(dead_code)]

use rand::Rng;
use tonevis::BrightnessImage;

/// Per-pixel functional values computed the textbook way.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub mean: f64,
    pub variance: f64,
    pub low: f64,
    pub high: f64,
    pub n_low: u64,
    pub n_high: u64,
    pub visibility: f64,
}

pub fn oracle(samples: &[f64]) -> Oracle {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let variance = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n;
    let low: Vec<f64> = samples.iter().copied().filter(|&s| s <= mean).collect();
    let high: Vec<f64> = samples.iter().copied().filter(|&s| s >= mean).collect();
    let low_mean = low.iter().sum::<f64>() / low.len() as f64;
    let high_mean = high.iter().sum::<f64>() / high.len() as f64;
    let visibility = if high_mean + low_mean == 0.0 {
        0.0
    } else {
        (high_mean - low_mean) / (high_mean + low_mean)
    };
    Oracle {
        mean,
        variance,
        low: low_mean,
        high: high_mean,
        n_low: low.len() as u64,
        n_high: high.len() as u64,
        visibility,
    }
}

/// Per-pixel evaluation of the pivoted power-law family, written out independently.
pub fn power_law(b: f64, a1: f64, a2: f64, alpha: f64, beta: f64, pivot: f64) -> f64 {
    if b <= pivot {
        b - a1 * (b * (b - pivot)).abs().powf(alpha)
    } else {
        b + a2 * ((b - 255.0) * (b - pivot)).abs().powf(beta)
    }
}

pub fn random_tones<R: Rng>(rng: &mut R, width: usize, height: usize) -> Vec<u8> {
    (0..width * height).map(|_| rng.gen()).collect()
}

pub fn random_image<R: Rng>(rng: &mut R, max_side: usize) -> BrightnessImage {
    let w = rng.gen_range(1..=max_side);
    let h = rng.gen_range(1..=max_side);
    BrightnessImage::from_tones(w, h, &random_tones(rng, w, h)).unwrap()
}

/// The low-contrast test pattern: tones in 90..=160.
pub fn dull_pattern(width: usize, height: usize) -> BrightnessImage {
    let mut tones = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            tones.push((90 + ((x * 37 + y * 91 + (x * y) % 13) % 71)) as u8);
        }
    }
    BrightnessImage::from_tones(width, height, &tones).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

//! Brightening, darkening and S-shaped control-point curves on a dull image.
//!
//! Curves that only lift or drop the tones squeeze the histogram and lower the
//! variance; a curve with an inflection inside the occupied range stretches it and
//! raises both variance and visibility. The darkening curve here passes through
//! the origin, so it only rescales the image and leaves visibility unchanged.
//!
//! ```text
//! cargo run -p tonevis --example freehand_curves
//! ```

use tonevis::{apply_curve, curve_from_points, report, BrightnessImage, ControlPointCurve};

fn dull_image() -> BrightnessImage {
    let (w, h) = (96, 64);
    let tones: Vec<u8> = (0..w * h)
        .map(|i| {
            let (x, y) = (i % w, i / w);
            (90 + (x * 37 + y * 91 + (x * y) % 13) % 71) as u8
        })
        .collect();
    BrightnessImage::from_tones(w, h, &tones).unwrap()
}

fn main() {
    let image = dull_image();
    let original = report(&image);
    println!(
        "{:<12} {:>10} {:>10} {:>10}",
        "curve", "mean", "variance", "visibility"
    );
    println!(
        "{:<12} {:>10.3} {:>10.3} {:>10.5}",
        "original", original.mean, original.variance, original.visibility
    );

    let curves = [
        ("identity", "0,0;255,255"),
        ("brighten", "0,0;60,170;255,255"),
        ("darken", "0,0;195,85;255,255"),
        ("invert", "0,255;255,0"),
        ("s-curve", "0,0;90,40;160,220;255,255"),
    ];
    for (name, spec) in curves {
        let points: ControlPointCurve = spec.parse().unwrap();
        let varied = apply_curve(&image, &curve_from_points(&points)).unwrap();
        let r = report(&varied);
        println!(
            "{name:<12} {:>10.3} {:>10.3} {:>10.5}",
            r.mean, r.variance, r.visibility
        );
    }
}

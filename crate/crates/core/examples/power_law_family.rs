//! The pivoted power-law family and its range check.
//!
//! ```text
//! cargo run -p tonevis --example power_law_family
//! ```

use tonevis::{
    apply_curve, brightness_mean, eq7_curve, report, validate_range, BrightnessImage, RangeMode,
    TransformParams,
};

fn main() {
    let tones: Vec<u8> = (0..64u32).map(|i| (100 + (i * 29) % 60) as u8).collect();
    let image = BrightnessImage::from_tones(8, 8, &tones).unwrap();
    let pivot = brightness_mean(&image);
    let hist = image.histogram();
    println!("pivot (image mean) = {pivot:.4}");

    let params = TransformParams::new(4.5, 1.2, 0.3, 0.5, pivot).unwrap();
    let curve = eq7_curve(&params);
    println!("\n{}", curve.label());
    for t in [0u8, 50, 100, 120, 130, 150, 200, 255] {
        println!("  {t:>3} -> {:>9.3}", curve.get(t));
    }

    match validate_range(&curve, &hist, RangeMode::Reject) {
        Ok(ok) => {
            let r = report(&apply_curve(&image, &ok).unwrap());
            println!(
                "accepted: visibility {:.5} -> {:.5}",
                report(&image).visibility,
                r.visibility
            );
        }
        Err(e) => println!("rejected: {e}"),
    }

    // strong darkening leaves the tone range and is refused unless clamped
    let harsh = eq7_curve(&TransformParams::new(5.0, 3.0, 1.0, 1.0, pivot).unwrap());
    match validate_range(&harsh, &hist, RangeMode::Reject) {
        Ok(_) => println!("harsh curve accepted"),
        Err(e) => println!("harsh curve rejected: {e}"),
    }
    let clamped = validate_range(&harsh, &hist, RangeMode::Clamp).unwrap();
    let r = report(&apply_curve(&image, &clamped).unwrap());
    println!(
        "clamped instead: visibility {:.5}, variance {:.1}",
        r.visibility, r.variance
    );
}

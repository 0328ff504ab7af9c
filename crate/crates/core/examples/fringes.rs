//! Compares the image visibility functional with the optical fringe visibility.
//!
//! A cosine fringe `I(x) = A + B cos(kx)` has optical visibility `B / A`. The
//! image functional replaces the extreme intensities by the means of the bright
//! and dark halves, `A ± 2B/π`, so it reads `(2/π) · B / A` on the same pattern.
//!
//! ```text
//! cargo run -p tonevis --example fringes
//! ```

use std::f64::consts::PI;

use tonevis::{fringe_visibility, report, BrightnessImage};

fn fringe_image(mean: f64, amplitude: f64, periods: usize) -> BrightnessImage {
    let width = 720 * periods;
    let samples = (0..width)
        .map(|x| mean + amplitude * (2.0 * PI * x as f64 * periods as f64 / width as f64).cos())
        .collect();
    BrightnessImage::new(width, 1, samples).unwrap()
}

fn main() {
    println!(
        "{:>6} {:>6} {:>10} {:>10} {:>10}",
        "A", "B", "optical", "image", "2/pi*B/A"
    );
    for (a, b) in [
        (128.0, 127.0),
        (128.0, 64.0),
        (128.0, 16.0),
        (200.0, 40.0),
        (60.0, 55.0),
    ] {
        let optical = fringe_visibility(a + b, a - b).unwrap();
        let r = report(&fringe_image(a, b, 4));
        println!(
            "{a:>6} {b:>6} {optical:>10.5} {:>10.5} {:>10.5}",
            r.visibility,
            2.0 / PI * b / a
        );
    }

    // a two-tone pattern is the one case where both readings coincide
    let bars = BrightnessImage::from_tones(4, 1, &[40, 200, 40, 200]).unwrap();
    println!(
        "\nbars 40/200: image {:.5}, optical {:.5}",
        report(&bars).visibility,
        fringe_visibility(200.0, 40.0).unwrap()
    );
}

//! Searches the default lattice for the most visible variation of a dull image
//! and writes the before/after PGMs, the winning LUT and the search trace.
//!
//! ```text
//! cargo run --release -p tonevis --example optimize_visibility [out_dir]
//! ```

use std::path::PathBuf;
use std::time::Instant;

use tonevis::optimizer::trace_to_csv;
use tonevis::{
    apply_curve, optimize_with, report, save_pgm, BrightnessImage, SearchGrid, SearchOptions,
};

fn dull_landscape(w: usize, h: usize) -> BrightnessImage {
    // a faint figure on a grainy background, all within tones 95..=150
    let samples = (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as f64, (i / w) as f64);
            let grain = ((x * 12.9898 + y * 78.233).sin() * 43758.5453)
                .fract()
                .abs();
            let ring = ((x - w as f64 / 2.0).hypot(y - h as f64 / 2.0) / 9.0).sin();
            (118.0 + 14.0 * ring + 18.0 * grain).round()
        })
        .collect();
    BrightnessImage::new(w, h, samples).unwrap()
}

fn main() -> std::io::Result<()> {
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("tonevis-example"));
    std::fs::create_dir_all(&out_dir)?;

    let image = dull_landscape(160, 120);
    let before = report(&image);

    let start = Instant::now();
    let options = SearchOptions {
        workers: None,
        record_trace: true,
    };
    let result =
        optimize_with(&image, &SearchGrid::default(), &options).expect("identity is feasible");
    let elapsed = start.elapsed();

    let p = result.best_params;
    println!(
        "searched {} candidates ({} rejected) in {:.2?}",
        result.candidates_total, result.candidates_rejected, elapsed
    );
    println!(
        "best: a1={:.1} a2={:.1} alpha={:.1} beta={:.1} (pivot {:.3})",
        p.a1, p.a2, p.alpha, p.beta, p.pivot
    );
    println!(
        "visibility {:.5} -> {:.5}, variance {:.1} -> {:.1}",
        before.visibility,
        result.best_report.visibility,
        before.variance,
        result.best_report.variance
    );

    let curve = result.best_curve();
    let enhanced = apply_curve(&image, &curve).expect("winner is in range");
    std::fs::write(out_dir.join("before.pgm"), save_pgm(&image))?;
    std::fs::write(out_dir.join("after.pgm"), save_pgm(&enhanced))?;
    std::fs::write(out_dir.join("curve.csv"), curve.to_csv())?;
    std::fs::write(
        out_dir.join("trace.csv"),
        trace_to_csv(result.trace.as_deref().unwrap_or(&[])),
    )?;
    println!(
        "wrote before.pgm, after.pgm, curve.csv, trace.csv to {}",
        out_dir.display()
    );
    Ok(())
}

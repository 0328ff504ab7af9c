//! The lattice search gives identical answers for any number of workers.
//!
//! ```text
//! cargo run --release -p tonevis --example parallel_search
//! ```

use std::time::Instant;

use tonevis::{optimize_with, BrightnessImage, SearchGrid, SearchOptions};

fn main() {
    let (w, h) = (256, 256);
    let tones: Vec<u8> = (0..w * h)
        .map(|i| {
            let (x, y) = (i % w, i / w);
            (80 + (x * 7 + y * 13 + (x ^ y) % 17) % 90) as u8
        })
        .collect();
    let image = BrightnessImage::from_tones(w, h, &tones).unwrap();
    let grid = SearchGrid::default();

    let mut reference = None;
    for workers in [1, 2, 4, 8] {
        let options = SearchOptions {
            workers: Some(workers),
            record_trace: false,
        };
        let start = Instant::now();
        let result = optimize_with(&image, &grid, &options).unwrap();
        let p = result.best_params;
        println!(
            "{workers} worker(s): {:>8.2?}  best a1={:.1} a2={:.1} alpha={:.1} beta={:.1} visibility={:.6}",
            start.elapsed(),
            p.a1,
            p.a2,
            p.alpha,
            p.beta,
            result.best_report.visibility
        );
        match &reference {
            None => reference = Some(result),
            Some(r) => assert_eq!(r, &result),
        }
    }
}

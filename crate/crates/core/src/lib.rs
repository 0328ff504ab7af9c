//! Tone-curve variations of grey-tone images, scored by a fringe-visibility functional.
//!
//! An image is a brightness function `b(x, y)` on the 0..=255 scale. A *variation*
//! replaces every brightness `b` by `γ(b)` for some tone curve `γ`, and a
//! *functional* maps the varied image to a number. This crate provides
//!
//! * the image model, histograms and PGM I/O ([`image`]);
//! * mean, variance and the visibility functional, computed per pixel or from a
//!   histogram and a LUT ([`functionals`]);
//! * freehand control-point curves and a pivoted power-law family ([`curves`]);
//! * an exhaustive lattice search for the most visible variation ([`optimizer`]);
//! * the `tonevis` command line front end ([`cli`]).
//!
//! ```
//! use tonevis::{optimize, report, BrightnessImage, SearchGrid};
//!
//! let image = BrightnessImage::from_tones(4, 1, &[100, 110, 140, 150]).unwrap();
//! let before = report(&image).visibility;
//! let result = optimize(&image, &SearchGrid::default()).unwrap();
//! assert!(result.best_report.visibility > before);
//! ```

pub mod cli;
pub mod curves;
pub mod error;
pub mod functionals;
pub mod image;
pub mod optimizer;

pub use curves::{
    apply_curve, curve_from_points, eq7_curve, validate_range, ControlPointCurve, RangeMode,
    ToneCurve, TransformParams,
};
pub use error::{CurveError, FunctionalError, ImageError, PgmError, SearchError};
pub use functionals::{
    brightness_mean, brightness_variance, fringe_visibility, report, report_from_lut,
    split_sub_means, visibility, SubMeans, VisibilityReport,
};
pub use image::{
    compute_histogram, load_pgm, quantize, rgb_to_brightness, save_pgm, BrightnessImage, Histogram,
};
pub use optimizer::{
    evaluate_candidate, optimize, optimize_with, Axis, GridPoint, SearchGrid, SearchOptions,
    SearchResult,
};

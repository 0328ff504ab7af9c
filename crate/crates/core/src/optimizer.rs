//! Exhaustive lattice search for the variation that maximizes visibility.
//!
//! Every point of a four-axis grid over `(a1, a2, alpha, beta)` is turned into a
//! pivoted power-law curve (pivot = mean of the input image), checked against the
//! image's occupied tones, and scored with the histogram-weighted visibility.
//! Candidates that push any occupied tone outside `[0, 255]` are rejected.
//!
//! The winner is the candidate with the highest visibility; ties go to the
//! lexicographically smallest `(a1, a2, alpha, beta)`, which is also the smallest
//! lattice index. Because that order is total, the parallel reduction returns the
//! same result for any worker count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::curves::{eq7_curve, eq7_value, validate_range, RangeMode, ToneCurve, TransformParams};
use crate::error::{CurveError, SearchError};
use crate::functionals::{brightness_mean, report_from_lut, VisibilityReport};
use crate::image::{BrightnessImage, Histogram};

/// Slack used when counting lattice points, so that `0.1:1.0:0.1` yields 10 values.
const COUNT_EPS: f64 = 1e-9;

/// One axis of the grid: `start + k * step` for `k = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    start: f64,
    stop: f64,
    step: f64,
}

impl Axis {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, SearchError> {
        let bad = |reason: &str| SearchError::BadAxis {
            axis: format!("{start}:{stop}:{step}"),
            reason: reason.to_string(),
        };
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(bad("values must be finite"));
        }
        if step <= 0.0 {
            return Err(bad("step must be positive"));
        }
        if start > stop {
            return Err(bad("start must not exceed stop"));
        }
        Ok(Self { start, stop, step })
    }

    /// A single-value axis.
    pub fn point(value: f64) -> Result<Self, SearchError> {
        Self::new(value, value, 1.0)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        ((self.stop - self.start) / self.step + COUNT_EPS).floor() as usize + 1
    }

    /// The `k`-th lattice value, computed by multiplication rather than accumulation.
    pub fn value(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count()).map(|k| self.value(k))
    }

    /// Index of the lattice value within `tol` of `x`, if any.
    pub fn index_of(&self, x: f64, tol: f64) -> Option<usize> {
        let k = ((x - self.start) / self.step).round();
        if k < 0.0 || k as usize >= self.count() {
            return None;
        }
        let k = k as usize;
        ((self.value(k) - x).abs() <= tol).then_some(k)
    }
}

impl FromStr for Axis {
    type Err = SearchError;

    /// Parses `start:stop:step`, e.g. `0:5:0.1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let bad = |reason: String| SearchError::BadAxis {
            axis: s.to_string(),
            reason,
        };
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step".to_string()));
        }
        let mut nums = [0.0; 3];
        for (slot, part) in nums.iter_mut().zip(&parts) {
            *slot = part
                .parse::<f64>()
                .map_err(|e| bad(format!("{part:?}: {e}")))?;
        }
        Self::new(nums[0], nums[1], nums[2])
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

/// The four-axis parameter lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchGrid {
    pub a1: Axis,
    pub a2: Axis,
    pub alpha: Axis,
    pub beta: Axis,
}

impl Default for SearchGrid {
    /// `a1` in 0..=5, `a2` in 0..=3, `alpha` and `beta` in 0.1..=1.0, all with step 0.1.
    fn default() -> Self {
        Self {
            a1: Axis {
                start: 0.0,
                stop: 5.0,
                step: 0.1,
            },
            a2: Axis {
                start: 0.0,
                stop: 3.0,
                step: 0.1,
            },
            alpha: Axis {
                start: 0.1,
                stop: 1.0,
                step: 0.1,
            },
            beta: Axis {
                start: 0.1,
                stop: 1.0,
                step: 0.1,
            },
        }
    }
}

/// A lattice point without its pivot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub a1: f64,
    pub a2: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl GridPoint {
    pub fn with_pivot(self, pivot: f64) -> TransformParams {
        TransformParams {
            a1: self.a1,
            a2: self.a2,
            alpha: self.alpha,
            beta: self.beta,
            pivot,
        }
    }
}

impl SearchGrid {
    pub fn len(&self) -> usize {
        self.a1.count() * self.a2.count() * self.alpha.count() * self.beta.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The lattice point at `index`, with `beta` varying fastest and `a1` slowest.
    pub fn point(&self, index: usize) -> GridPoint {
        let (nb, nal, na2) = (self.beta.count(), self.alpha.count(), self.a2.count());
        let kb = index % nb;
        let rest = index / nb;
        let kal = rest % nal;
        let rest = rest / nal;
        let ka2 = rest % na2;
        let ka1 = rest / na2;
        GridPoint {
            a1: self.a1.value(ka1),
            a2: self.a2.value(ka2),
            alpha: self.alpha.value(kal),
            beta: self.beta.value(kb),
        }
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// Whether the lattice has a point within `tol` of `target` on every axis.
    pub fn contains(&self, target: GridPoint, tol: f64) -> bool {
        self.a1.index_of(target.a1, tol).is_some()
            && self.a2.index_of(target.a2, tol).is_some()
            && self.alpha.index_of(target.alpha, tol).is_some()
            && self.beta.index_of(target.beta, tol).is_some()
    }

    /// Whether the identity variation `a1 = a2 = 0` is on the lattice.
    pub fn contains_identity(&self) -> bool {
        self.a1.start == 0.0 && self.a2.start == 0.0
    }
}

/// Scores one variation against an image histogram.
///
/// Builds the curve, rejects it if an occupied tone leaves `[0, 255]`, and
/// otherwise returns the histogram-weighted report.
pub fn evaluate_candidate(
    histogram: &Histogram,
    params: &TransformParams,
) -> Result<VisibilityReport, CurveError> {
    let curve = eq7_curve(params);
    let curve = validate_range(&curve, histogram, RangeMode::Reject)?;
    Ok(report_from_lut(histogram, &curve))
}

/// Same computation as [`evaluate_candidate`] without building the curve label.
fn score(histogram: &Histogram, params: &TransformParams) -> Result<VisibilityReport, CurveError> {
    let curve = ToneCurve::from_fn(|t| eq7_value(f64::from(t), params), String::new());
    let curve = validate_range(&curve, histogram, RangeMode::Reject)?;
    Ok(report_from_lut(histogram, &curve))
}

/// One evaluated lattice point.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub params: TransformParams,
    /// `Err` holds the range rejection.
    pub outcome: Result<VisibilityReport, CurveError>,
}

impl TraceEntry {
    pub fn accepted(&self) -> bool {
        self.outcome.is_ok()
    }
}

/// Header of the trace CSV.
pub const TRACE_CSV_HEADER: &str = "a1,a2,alpha,beta,visibility,variance,accepted";

/// Renders a trace as CSV. Rejected candidates have empty visibility and variance.
pub fn trace_to_csv(trace: &[TraceEntry]) -> String {
    let mut out = String::with_capacity(64 * (trace.len() + 1));
    out.push_str(TRACE_CSV_HEADER);
    out.push('\n');
    for e in trace {
        let p = &e.params;
        match &e.outcome {
            Ok(r) => out.push_str(&format!(
                "{},{},{},{},{},{},true\n",
                p.a1, p.a2, p.alpha, p.beta, r.visibility, r.variance
            )),
            Err(_) => out.push_str(&format!(
                "{},{},{},{},,,false\n",
                p.a1, p.a2, p.alpha, p.beta
            )),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best_params: TransformParams,
    pub best_report: VisibilityReport,
    pub candidates_total: usize,
    pub candidates_rejected: usize,
    /// Every lattice point in lattice order, when requested.
    pub trace: Option<Vec<TraceEntry>>,
}

impl SearchResult {
    pub fn best_curve(&self) -> ToneCurve {
        eq7_curve(&self.best_params)
    }
}

/// Knobs for [`optimize_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchOptions {
    /// `None` uses rayon's global pool; `Some(1)` runs on the calling thread.
    pub workers: Option<usize>,
    pub record_trace: bool,
}

#[derive(Debug, Clone, Copy)]
struct Best {
    index: usize,
    report: VisibilityReport,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    best: Option<Best>,
    rejected: usize,
}

impl Tally {
    fn push(mut self, index: usize, outcome: Result<VisibilityReport, CurveError>) -> Self {
        match outcome {
            Ok(report) => self.best = pick(self.best, Some(Best { index, report })),
            Err(_) => self.rejected += 1,
        }
        self
    }

    fn merge(self, other: Self) -> Self {
        Self {
            best: pick(self.best, other.best),
            rejected: self.rejected + other.rejected,
        }
    }
}

/// Higher visibility wins, then the smaller lattice index.
fn pick(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            let by_vis = a.report.visibility.total_cmp(&b.report.visibility);
            let a_wins = by_vis.is_gt() || (by_vis.is_eq() && a.index < b.index);
            Some(if a_wins { a } else { b })
        }
    }
}

/// Searches `grid` for the variation of `image` with maximum visibility.
pub fn optimize(image: &BrightnessImage, grid: &SearchGrid) -> Result<SearchResult, SearchError> {
    optimize_with(image, grid, &SearchOptions::default())
}

pub fn optimize_with(
    image: &BrightnessImage,
    grid: &SearchGrid,
    options: &SearchOptions,
) -> Result<SearchResult, SearchError> {
    let histogram = image.histogram();
    let pivot = brightness_mean(image);
    let (tally, trace) = match options.workers {
        Some(0) => return Err(SearchError::Workers(0)),
        Some(1) => search_sequential(&histogram, pivot, grid, options.record_trace),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|_| SearchError::Workers(n))?;
            pool.install(|| search_parallel(&histogram, pivot, grid, options.record_trace))
        }
        None => search_parallel(&histogram, pivot, grid, options.record_trace),
    };
    finish(grid, pivot, tally, trace)
}

type Partial = (Tally, Option<Vec<TraceEntry>>);

fn search_sequential(histogram: &Histogram, pivot: f64, grid: &SearchGrid, trace: bool) -> Partial {
    let mut tally = Tally::default();
    let mut entries = trace.then(|| Vec::with_capacity(grid.len()));
    for index in 0..grid.len() {
        let params = grid.point(index).with_pivot(pivot);
        let outcome = score(histogram, &params);
        if let Some(entries) = entries.as_mut() {
            entries.push(TraceEntry {
                params,
                outcome: outcome.clone(),
            });
        }
        tally = tally.push(index, outcome);
    }
    (tally, entries)
}

fn search_parallel(histogram: &Histogram, pivot: f64, grid: &SearchGrid, trace: bool) -> Partial {
    if trace {
        let entries: Vec<TraceEntry> = (0..grid.len())
            .into_par_iter()
            .map(|index| {
                let params = grid.point(index).with_pivot(pivot);
                TraceEntry {
                    params,
                    outcome: score(histogram, &params),
                }
            })
            .collect();
        let tally = entries
            .iter()
            .enumerate()
            .fold(Tally::default(), |t, (i, e)| t.push(i, e.outcome.clone()));
        (tally, Some(entries))
    } else {
        let tally = (0..grid.len())
            .into_par_iter()
            .fold(Tally::default, |t, index| {
                let params = grid.point(index).with_pivot(pivot);
                t.push(index, score(histogram, &params))
            })
            .reduce(Tally::default, Tally::merge);
        (tally, None)
    }
}

fn finish(
    grid: &SearchGrid,
    pivot: f64,
    tally: Tally,
    trace: Option<Vec<TraceEntry>>,
) -> Result<SearchResult, SearchError> {
    let best = tally.best.ok_or(SearchError::NoFeasibleVariation {
        candidates: grid.len(),
    })?;
    Ok(SearchResult {
        best_params: grid.point(best.index).with_pivot(pivot),
        best_report: best.report,
        candidates_total: grid.len(),
        candidates_rejected: tally.rejected,
        trace,
    })
}

//! Tone curves: the brightness variations applied to an image.
//!
//! Every variation is compiled to a 256-entry lookup table indexed by integer
//! tone. Two families are provided:
//!
//! * freehand curves given by control points and interpolated piecewise-linearly,
//!   the scriptable counterpart of an interactive "Curves" dialog;
//! * the parametric family that pushes tones below a pivot (the original image mean)
//!   down and tones above it up:
//!
//! ```text
//! b' = b - a1 * |b * (b - pivot)|^alpha           for b <= pivot
//! b' = b + a2 * |(b - 255) * (b - pivot)|^beta    for b >  pivot
//! ```
//!
//! Both correction terms vanish at 0, at 255 and at the pivot, so the endpoints
//! are fixed and the curve is continuous with an inflection at the pivot.

use std::fmt;
use std::str::FromStr;

use crate::error::CurveError;
use crate::image::{quantize, BrightnessImage, Histogram, MAX_TONE, TONES};

/// A 256-entry lookup table `tone -> brightness`, plus a free-form label.
///
/// Entries may leave `[0, 255]`; see [`validate_range`].
#[derive(Debug, Clone, PartialEq)]
pub struct ToneCurve {
    lut: [f64; TONES],
    label: String,
}

impl ToneCurve {
    pub fn identity() -> Self {
        Self::from_fn(|t| t as f64, "identity")
    }

    /// Builds a curve by evaluating `f` on every tone.
    pub fn from_fn<F>(f: F, label: impl Into<String>) -> Self
    where
        F: Fn(u8) -> f64,
    {
        let mut lut = [0.0; TONES];
        for (t, slot) in lut.iter_mut().enumerate() {
            *slot = f(t as u8);
        }
        Self {
            lut,
            label: label.into(),
        }
    }

    pub fn from_lut(lut: [f64; TONES], label: impl Into<String>) -> Self {
        Self {
            lut,
            label: label.into(),
        }
    }

    pub fn lut(&self) -> &[f64; TONES] {
        &self.lut
    }

    pub fn get(&self, tone: u8) -> f64 {
        self.lut[tone as usize]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// 256 lines of `tone,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(TONES * 12);
        for (tone, value) in self.lut.iter().enumerate() {
            out.push_str(&format!("{tone},{value}\n"));
        }
        out
    }
}

/// Parameters of the pivoted power-law family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformParams {
    /// Amplitude of the darkening below the pivot.
    pub a1: f64,
    /// Amplitude of the brightening above the pivot.
    pub a2: f64,
    /// Exponent of the low branch.
    pub alpha: f64,
    /// Exponent of the high branch.
    pub beta: f64,
    /// Branch point, normally the mean brightness of the untransformed image.
    pub pivot: f64,
}

impl TransformParams {
    pub fn new(a1: f64, a2: f64, alpha: f64, beta: f64, pivot: f64) -> Result<Self, CurveError> {
        let params = Self {
            a1,
            a2,
            alpha,
            beta,
            pivot,
        };
        params.validate()?;
        Ok(params)
    }

    /// The identity member of the family (`a1 = a2 = 0`, unit exponents).
    pub fn identity(pivot: f64) -> Self {
        Self {
            a1: 0.0,
            a2: 0.0,
            alpha: 1.0,
            beta: 1.0,
            pivot,
        }
    }

    pub fn validate(&self) -> Result<(), CurveError> {
        let fail = |what: &str| Err(CurveError::InvalidParams(what.to_string()));
        if !(self.a1 >= 0.0 && self.a1.is_finite()) {
            return fail("a1 must be finite and >= 0");
        }
        if !(self.a2 >= 0.0 && self.a2.is_finite()) {
            return fail("a2 must be finite and >= 0");
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return fail("alpha must be finite and > 0");
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return fail("beta must be finite and > 0");
        }
        if !(0.0..=MAX_TONE).contains(&self.pivot) {
            return fail("pivot must lie in [0, 255]");
        }
        Ok(())
    }
}

impl fmt::Display for TransformParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a1={} a2={} alpha={} beta={} pivot={}",
            self.a1, self.a2, self.alpha, self.beta, self.pivot
        )
    }
}

/// Evaluates the pivoted power-law variation at brightness `b`.
///
/// Equality with the pivot takes the low branch; both branches give `b` there.
#[inline]
pub fn eq7_value(b: f64, params: &TransformParams) -> f64 {
    if b <= params.pivot {
        b - params.a1 * (b * (b - params.pivot)).abs().powf(params.alpha)
    } else {
        b + params.a2
            * ((b - MAX_TONE) * (b - params.pivot))
                .abs()
                .powf(params.beta)
    }
}

/// Compiles the pivoted power-law variation into a LUT.
///
/// `params` are assumed valid (see [`TransformParams::validate`]). Values outside
/// `[0, 255]` are kept; range checking is [`validate_range`]'s job.
pub fn eq7_curve(params: &TransformParams) -> ToneCurve {
    ToneCurve::from_fn(|t| eq7_value(f64::from(t), params), format!("eq7 {params}"))
}

/// A freehand curve through `(tone, value)` control points.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlPointCurve {
    points: Vec<(f64, f64)>,
}

impl ControlPointCurve {
    /// Tones must be strictly increasing and start at 0 and end at 255.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, CurveError> {
        for (index, &(tone, value)) in points.iter().enumerate() {
            if !(0.0..=MAX_TONE).contains(&tone) || !(0.0..=MAX_TONE).contains(&value) {
                return Err(CurveError::PointOutOfRange { index, tone, value });
            }
        }
        if let Some(index) = points.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(CurveError::Unsorted { index: index + 1 });
        }
        match (points.first(), points.last()) {
            (Some(first), Some(last)) if first.0 == 0.0 && last.0 == MAX_TONE => {}
            _ => return Err(CurveError::MissingEndpoint),
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn interpolate(&self, t: f64) -> f64 {
        // `new` guarantees at least the two endpoints
        let seg = self
            .points
            .windows(2)
            .find(|w| t <= w[1].0)
            .unwrap_or(&self.points[self.points.len() - 2..]);
        let (t0, v0) = seg[0];
        let (t1, v1) = seg[1];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }
}

impl FromStr for ControlPointCurve {
    type Err = CurveError;

    /// Parses `"t0,v0;t1,v1;...;255,v"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut points = Vec::new();
        for pair in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (t, v) = pair
                .split_once(',')
                .ok_or_else(|| CurveError::Parse(format!("expected tone,value in {pair:?}")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|e| CurveError::Parse(format!("{x:?}: {e}")))
            };
            points.push((parse(t)?, parse(v)?));
        }
        Self::new(points)
    }
}

impl fmt::Display for ControlPointCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .points
            .iter()
            .map(|(t, v)| format!("{t},{v}"))
            .collect();
        f.write_str(&parts.join(";"))
    }
}

/// Compiles a control-point curve into a LUT by linear interpolation, clamped to `[0, 255]`.
pub fn curve_from_points(curve: &ControlPointCurve) -> ToneCurve {
    ToneCurve::from_fn(
        |t| curve.interpolate(f64::from(t)).clamp(0.0, MAX_TONE),
        format!("points {curve}"),
    )
}

/// Maps every pixel through the curve after quantizing it to a tone.
///
/// Fails on the first pixel whose mapped value leaves `[0, 255]`.
pub fn apply_curve(
    image: &BrightnessImage,
    curve: &ToneCurve,
) -> Result<BrightnessImage, CurveError> {
    let mut out = Vec::with_capacity(image.pixel_count());
    for &s in image.samples() {
        let tone = quantize(s);
        let value = curve.get(tone);
        if !(0.0..=MAX_TONE).contains(&value) {
            return Err(CurveError::OutOfRange { tone, value });
        }
        out.push(value);
    }
    Ok(BrightnessImage::new(image.width(), image.height(), out)?)
}

/// How [`validate_range`] treats LUT entries outside `[0, 255]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RangeMode {
    /// Refuse the curve if any occupied tone maps out of range.
    #[default]
    Reject,
    /// Clamp every entry into range.
    Clamp,
}

impl FromStr for RangeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reject" => Ok(Self::Reject),
            "clamp" => Ok(Self::Clamp),
            other => Err(format!(
                "unknown range mode {other:?} (expected reject or clamp)"
            )),
        }
    }
}

/// Checks that the curve keeps the image's brightness inside `[0, 255]`.
///
/// Only tones present in `histogram` are inspected in reject mode. Clamp mode
/// clamps all 256 entries; NaN entries at occupied tones are rejected in both modes.
pub fn validate_range(
    curve: &ToneCurve,
    histogram: &Histogram,
    mode: RangeMode,
) -> Result<ToneCurve, CurveError> {
    let first_bad = histogram.occupied().find_map(|(tone, _)| {
        let value = curve.get(tone);
        let bad = match mode {
            RangeMode::Reject => !(0.0..=MAX_TONE).contains(&value),
            RangeMode::Clamp => value.is_nan(),
        };
        bad.then_some(CurveError::OutOfRange { tone, value })
    });
    if let Some(err) = first_bad {
        return Err(err);
    }
    match mode {
        RangeMode::Reject => Ok(curve.clone()),
        RangeMode::Clamp => {
            let mut lut = *curve.lut();
            for v in lut.iter_mut() {
                *v = if v.is_nan() {
                    0.0
                } else {
                    v.clamp(0.0, MAX_TONE)
                };
            }
            Ok(ToneCurve::from_lut(
                lut,
                format!("{} (clamped)", curve.label()),
            ))
        }
    }
}

use super::Trajectory;
use crate::Scalar;

/// Relative amplitude below which a signal counts as stationary.
pub const MIN_RELATIVE_AMPLITUDE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodEstimate<T> {
    /// Mean spacing of successive maxima.
    pub period: T,
    /// Mean peak-to-trough half range.
    pub amplitude: T,
    /// Number of maxima used.
    pub cycles: usize,
}

/// Period and amplitude of the named column over the second half of the
/// run. `None` when fewer than four extrema (two of them maxima) remain or
/// the oscillation is below [`MIN_RELATIVE_AMPLITUDE`] of the mean level.
pub fn estimate_period<T: Scalar>(traj: &Trajectory<T>, column: &str) -> Option<PeriodEstimate<T>> {
    let values = traj.column(column)?;
    period_of_samples(&traj.times, &values)
}

/// As [`estimate_period`] for raw samples on a uniform grid.
pub fn period_of_samples<T: Scalar>(times: &[T], values: &[T]) -> Option<PeriodEstimate<T>> {
    let start = times.len() / 2;
    let (t, x) = (&times[start..], &values[start..]);
    if x.len() < 3 {
        return None;
    }
    let mut maxima = Vec::new();
    let mut peaks = Vec::new();
    let mut troughs = Vec::new();
    for i in 1..x.len() - 1 {
        let (a, b, c) = (x[i - 1], x[i], x[i + 1]);
        let is_max = b > a && b >= c;
        let is_min = b < a && b <= c;
        if !(is_max || is_min) {
            continue;
        }
        // Vertex of the parabola through the three samples.
        let h = t[i + 1] - t[i];
        let curvature = a - T::lit(2.0) * b + c;
        let (shift, value) = if curvature != T::zero() {
            let d = (a - c) / (T::lit(2.0) * curvature);
            (d * h, b - (a - c) * d / T::lit(4.0))
        } else {
            (T::zero(), b)
        };
        if is_max {
            maxima.push(t[i] + shift);
            peaks.push(value);
        } else {
            troughs.push(value);
        }
    }
    if maxima.len() < 2 || maxima.len() + troughs.len() < 4 {
        return None;
    }
    let mean = |v: &[T]| v.iter().fold(T::zero(), |acc, &y| acc + y) / T::from_count(v.len());
    let amplitude = (mean(&peaks) - mean(&troughs)) / T::lit(2.0);
    let level = mean(x).abs().max(T::min_positive_value());
    if !(amplitude > T::lit(MIN_RELATIVE_AMPLITUDE) * level) {
        return None;
    }
    let period = (maxima[maxima.len() - 1] - maxima[0]) / T::from_count(maxima.len() - 1);
    Some(PeriodEstimate { period, amplitude, cycles: maxima.len() })
}

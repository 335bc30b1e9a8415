//! Scalar summaries of time series.

use otoc_core::otoc::SeriesResult;

/// A series counts as having left its initial value once it falls below this.
pub const DEPARTURE_LEVEL: f64 = 0.99;

/// Distance from the initial value that counts as a return.
pub const RECURRENCE_TOL: f64 = 1e-3;

/// Grid average of the values; NaN if any point is flagged.
pub fn time_average(s: &SeriesResult) -> f64 {
    if s.values.is_empty() {
        return f64::NAN;
    }
    s.values.iter().sum::<f64>() / s.values.len() as f64
}

/// Smallest value; NaN if any point is flagged.
pub fn min_value(s: &SeriesResult) -> f64 {
    s.values
        .iter()
        .try_fold(f64::INFINITY, |m, &v| (!v.is_nan()).then(|| m.min(v)))
        .unwrap_or(f64::NAN)
}

/// Index of the first point below `level`.
fn departure(s: &SeriesResult, level: f64) -> Option<usize> {
    s.values.iter().position(|&v| v < level)
}

/// Largest value after the series first drops below `level`, or `None` if it
/// never does.
pub fn max_after_departure(s: &SeriesResult, level: f64) -> Option<f64> {
    let k = departure(s, level)?;
    Some(s.values[k..].iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// First time, after the series has dropped below `level`, at which it is
/// back within `tol` of its initial value.
pub fn recurrence_time(s: &SeriesResult, level: f64, tol: f64) -> Option<f64> {
    let start = *s.values.first()?;
    let k = departure(s, level)?;
    (k..s.values.len())
        .find(|&i| (s.values[i] - start).abs() <= tol)
        .map(|i| s.times[i])
}

/// Largest pointwise difference between two series on the same grid.
pub fn max_deviation(a: &SeriesResult, b: &SeriesResult) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cosine(period: f64, t_max: f64, n: usize) -> SeriesResult {
        let times: Vec<f64> = (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect();
        let values = times.iter().map(|t| (2.0 * std::f64::consts::PI * t / period).cos()).collect();
        SeriesResult::new("F", times, values)
    }

    #[test]
    fn recurrence_of_cosine_is_its_period() {
        let s = cosine(3.0, 10.0, 10001);
        let t = recurrence_time(&s, DEPARTURE_LEVEL, RECURRENCE_TOL).unwrap();
        assert!((t - 3.0).abs() < 0.05, "{t}");
        assert!(max_after_departure(&s, DEPARTURE_LEVEL).unwrap() > 0.999);
        assert!((min_value(&s) + 1.0).abs() < 1e-6);
    }

    #[test]
    fn monotone_decay_has_no_recurrence() {
        let times: Vec<f64> = (0..100).map(|k| k as f64 * 0.1).collect();
        let values = times.iter().map(|t| (-t).exp()).collect();
        let s = SeriesResult::new("F", times, values);
        assert_eq!(recurrence_time(&s, DEPARTURE_LEVEL, RECURRENCE_TOL), None);
        let flat = SeriesResult::new("F", vec![0.0, 1.0], vec![1.0, 1.0]);
        assert_eq!(max_after_departure(&flat, DEPARTURE_LEVEL), None);
        assert!((time_average(&flat) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn flagged_points_poison_summaries() {
        let s = SeriesResult::new("F_c", vec![0.0, 1.0], vec![1.0, f64::NAN]);
        assert!(min_value(&s).is_nan());
        assert!(time_average(&s).is_nan());
    }
}

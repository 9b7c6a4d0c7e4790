use crate::{Error, Result};

/// Trapezoid-rule running time average of a fixed number of quantities.
///
/// Samples before `start` are discarded; the window opens at the first
/// sample at or after it.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeAverage {
    start: f64,
    width: usize,
    first: Option<f64>,
    last: Option<(f64, Vec<f64>)>,
    integral: Vec<f64>,
}

impl TimeAverage {
    pub fn new(width: usize) -> Self {
        Self::starting_at(width, f64::NEG_INFINITY)
    }

    /// An accumulator that ignores samples with `t < start`.
    pub fn starting_at(width: usize, start: f64) -> Self {
        TimeAverage {
            start,
            width,
            first: None,
            last: None,
            integral: vec![0.0; width],
        }
    }

    pub fn push(&mut self, t: f64, values: &[f64]) -> Result<()> {
        if values.len() != self.width {
            return Err(Error::Shape(format!(
                "sample has {} values, accumulator tracks {}",
                values.len(),
                self.width
            )));
        }
        if let Some((t_last, _)) = &self.last {
            if t < *t_last {
                return Err(Error::Domain(format!(
                    "time went backwards: {t} after {t_last}"
                )));
            }
        }
        if t < self.start {
            return Ok(());
        }
        match &self.last {
            Some((t_last, prev)) => {
                let h = t - t_last;
                for ((acc, a), b) in self.integral.iter_mut().zip(prev).zip(values) {
                    *acc += 0.5 * h * (a + b);
                }
            }
            None => self.first = Some(t),
        }
        self.last = Some((t, values.to_vec()));
        Ok(())
    }

    /// Length of the averaging window so far.
    pub fn span(&self) -> f64 {
        match (self.first, &self.last) {
            (Some(a), Some((b, _))) => b - a,
            _ => 0.0,
        }
    }

    pub fn window(&self) -> Option<(f64, f64)> {
        Some((self.first?, self.last.as_ref()?.0))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// `(1/T)∫ ·dt` over the window; a single sample is its own average.
    pub fn mean(&self) -> Option<Vec<f64>> {
        let (_, last) = self.last.as_ref()?;
        let span = self.span();
        if span == 0.0 {
            return Some(last.clone());
        }
        Some(self.integral.iter().map(|v| v / span).collect())
    }

    /// Joins an accumulator whose window starts where this one ends.
    pub fn merge(&mut self, other: &TimeAverage) -> Result<()> {
        if other.width != self.width {
            return Err(Error::Shape(
                "accumulators track different quantities".into(),
            ));
        }
        let (Some(other_first), Some(other_last)) = (other.first, &other.last) else {
            return Ok(());
        };
        match &self.last {
            None => {
                *self = other.clone();
                Ok(())
            }
            Some((t_end, _)) if (t_end - other_first).abs() <= 1e-12 * t_end.abs().max(1.0) => {
                for (a, b) in self.integral.iter_mut().zip(&other.integral) {
                    *a += b;
                }
                self.last = Some(other_last.clone());
                Ok(())
            }
            Some((t_end, _)) => Err(Error::Domain(format!(
                "windows are not contiguous: {t_end} then {other_first}"
            ))),
        }
    }
}

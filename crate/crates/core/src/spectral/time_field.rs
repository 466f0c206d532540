use super::field::Field;
use super::grid::FourierGrid;
use crate::error::{Error, Result};

/// Fields on a strictly increasing time grid, linear in time between nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeField {
    times: Vec<f64>,
    values: Vec<Field>,
    theta: f64,
}

/// `m + 1` equispaced nodes from `t0` to `t1`.
pub fn uniform_times(t0: f64, t1: f64, m: usize) -> Vec<f64> {
    let h = (t1 - t0) / m as f64;
    (0..=m)
        .map(|i| if i == m { t1 } else { t0 + i as f64 * h })
        .collect()
}

impl TimeField {
    pub fn new(times: Vec<f64>, values: Vec<Field>, theta: f64) -> Result<Self> {
        if times.is_empty() || times.len() != values.len() {
            return Err(Error::Precondition(format!(
                "{} times vs {} values",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Precondition("times must be strictly increasing".into()));
        }
        let g = values[0].grid();
        if values.iter().any(|v| v.grid() != g) {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            times,
            values,
            theta,
        })
    }

    pub fn constant(times: Vec<f64>, f: &Field, theta: f64) -> Result<Self> {
        let values = vec![f.clone(); times.len()];
        Self::new(times, values, theta)
    }

    pub fn zeros(times: Vec<f64>, grid: FourierGrid) -> Result<Self> {
        Self::constant(times, &Field::zeros(grid), 0.0)
    }

    pub fn from_fn(times: Vec<f64>, theta: f64, f: impl Fn(f64) -> Field) -> Result<Self> {
        let values = times.iter().map(|&t| f(t)).collect();
        Self::new(times, values, theta)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Field] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Field {
        &self.values[i]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn grid(&self) -> FourierGrid {
        self.values[0].grid()
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Index of a node equal to `t` up to `1e-12` relative.
    pub fn node_index(&self, t: f64) -> Option<usize> {
        let tol = 1e-12 * self.t_end().abs().max(1.0);
        self.times.iter().position(|&s| (s - t).abs() <= tol)
    }

    /// Segment `i` with `times[i] <= t <= times[i+1]` and the weight of node `i + 1`.
    pub fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let (lo, hi) = (self.t_start(), self.t_end());
        let tol = 1e-12 * hi.abs().max(1.0);
        if t < lo - tol || t > hi + tol {
            return Err(Error::TimeRange { t, lo, hi });
        }
        if self.len() == 1 {
            return Ok((0, 0.0));
        }
        let t = t.clamp(lo, hi);
        let i = match self.times.partition_point(|&s| s <= t) {
            0 => 0,
            p => (p - 1).min(self.len() - 2),
        };
        let w = (t - self.times[i]) / (self.times[i + 1] - self.times[i]);
        Ok((i, w))
    }

    /// Linear interpolation in time.
    pub fn at(&self, t: f64) -> Result<Field> {
        let (i, w) = self.locate(t)?;
        if w == 0.0 {
            return Ok(self.values[i].clone());
        }
        if w == 1.0 {
            return Ok(self.values[i + 1].clone());
        }
        self.values[i].scale(1.0 - w).axpy(w, &self.values[i + 1])
    }

    pub fn map(&self, f: impl Fn(&Field) -> Field) -> TimeField {
        TimeField {
            times: self.times.clone(),
            values: self.values.iter().map(f).collect(),
            theta: self.theta,
        }
    }

    pub fn try_map(&self, f: impl Fn(&Field) -> Result<Field>) -> Result<TimeField> {
        Ok(TimeField {
            times: self.times.clone(),
            values: self.values.iter().map(f).collect::<Result<_>>()?,
            theta: self.theta,
        })
    }

    pub fn zip_map(
        &self,
        other: &TimeField,
        f: impl Fn(&Field, &Field) -> Result<Field>,
    ) -> Result<TimeField> {
        self.check_times(other)?;
        Ok(TimeField {
            times: self.times.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect::<Result<_>>()?,
            theta: self.theta,
        })
    }

    pub fn check_times(&self, other: &TimeField) -> Result<()> {
        if self.times != other.times {
            return Err(Error::InconsistentGrids("time grids differ".into()));
        }
        if self.grid() != other.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &TimeField) -> Result<TimeField> {
        self.zip_map(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &TimeField) -> Result<TimeField> {
        self.zip_map(other, |a, b| a.sub(b))
    }

    pub fn axpy(&self, a: f64, other: &TimeField) -> Result<TimeField> {
        self.zip_map(other, |x, y| x.axpy(a, y))
    }

    pub fn scale(&self, s: f64) -> TimeField {
        self.map(|f| f.scale(s))
    }

    /// Restriction to nodes `a ..= b`.
    pub fn slice(&self, a: usize, b: usize) -> TimeField {
        TimeField {
            times: self.times[a..=b].to_vec(),
            values: self.values[a..=b].to_vec(),
            theta: self.theta,
        }
    }

    /// `sup_t ||u(t)||_inf`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(Field::sup_norm).fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.values.iter().map(Field::max_abs_coeff).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_times() {
        let g = FourierGrid::one_d(8).unwrap();
        let f = Field::zeros(g);
        assert!(TimeField::new(vec![0.0, 0.0], vec![f.clone(), f.clone()], 0.0).is_err());
        assert!(TimeField::new(vec![0.0, 1.0], vec![f.clone(), f], 0.0).is_ok());
    }

    #[test]
    fn interpolation_is_linear() {
        let g = FourierGrid::one_d(8).unwrap();
        let tf = TimeField::from_fn(uniform_times(0.0, 1.0, 4), 0.0, |t| Field::constant(g, t * t)).unwrap();
        let v = tf.at(0.3).unwrap().coeffs()[0].re;
        // nodes 0.25 and 0.5 carry 0.0625 and 0.25
        assert!((v - (0.0625 + 0.2 * (0.25 - 0.0625))).abs() < 1e-15);
        assert!(tf.at(1.5).is_err());
        assert_eq!(tf.node_index(0.75), Some(3));
    }
}

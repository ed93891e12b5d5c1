//! Monotone piecewise cubic Hermite interpolation (Fritsch–Carlson).
//!
//! Used to invert the tabulated mean-separation curve: the slopes are limited
//! so the interpolant never overshoots monotone data.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    /// Fits the interpolant to knots with strictly increasing `x`.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n != y.len() || n < 2 {
            return Err(Error::Config(format!(
                "monotone cubic needs >= 2 matching knots, got {} x and {} y",
                n,
                y.len()
            )));
        }
        for i in 1..n {
            if !(x[i] > x[i - 1]) {
                return Err(Error::Config(format!(
                    "knot abscissae must be strictly increasing: x[{}]={} <= x[{}]={}",
                    i,
                    x[i],
                    i - 1,
                    x[i - 1]
                )));
            }
        }

        let h: Vec<f64> = (0..n - 1).map(|i| x[i + 1] - x[i]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            d[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
            for i in 1..n - 1 {
                let (dp, dn) = (delta[i - 1], delta[i]);
                if dp == 0.0 || dn == 0.0 || dp.signum() != dn.signum() {
                    d[i] = 0.0;
                } else {
                    // Brodlie weighted harmonic mean.
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / dp + w2 / dn);
                }
            }
        }
        Ok(Self { x, y, slope: d })
    }

    pub fn x_min(&self) -> f64 {
        self.x[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.x.last().unwrap()
    }

    /// Evaluates the interpolant; arguments outside the knot range clamp to
    /// the endpoint values.
    pub fn eval(&self, q: f64) -> f64 {
        let n = self.x.len();
        if q <= self.x[0] {
            return self.y[0];
        }
        if q >= self.x[n - 1] {
            return self.y[n - 1];
        }
        // partition_point returns the first knot > q, so seg is the interval
        // [x[seg], x[seg+1]) containing q.
        let seg = self.x.partition_point(|&xi| xi <= q) - 1;
        let h = self.x[seg + 1] - self.x[seg];
        let t = (q - self.x[seg]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.y[seg] + h10 * h * self.slope[seg] + h01 * self.y[seg + 1] + h11 * h * self.slope[seg + 1]
    }
}

/// Non-centered three-point slope estimate, limited as in Fritsch–Carlson.
fn endpoint_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let mut d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        d = 0.0;
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        d = 3.0 * del0;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_knots_exactly() {
        let x = vec![0.0, 1.0, 2.5, 4.0];
        let y = vec![10.0, 7.0, 3.0, 2.5];
        let c = MonotoneCubic::new(x.clone(), y.clone()).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert!((c.eval(*xi) - yi).abs() < 1e-14);
        }
    }

    #[test]
    fn stays_monotone_between_monotone_knots() {
        let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 / (1.0 + v)).collect();
        let c = MonotoneCubic::new(x, y).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..400 {
            let q = 19.0 * i as f64 / 399.0;
            let v = c.eval(q);
            assert!(v <= prev + 1e-12, "not monotone at q={q}");
            prev = v;
        }
    }

    #[test]
    fn clamps_outside_range() {
        let c = MonotoneCubic::new(vec![1.0, 2.0], vec![5.0, 3.0]).unwrap();
        assert_eq!(c.eval(0.0), 5.0);
        assert_eq!(c.eval(9.0), 3.0);
    }

    #[test]
    fn rejects_unsorted_knots() {
        assert!(MonotoneCubic::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(MonotoneCubic::new(vec![1.0], vec![2.0]).is_err());
    }
}

use statrs::distribution::{ContinuousCDF, StudentsT};

/// Mean over replications with a Student-t confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub half_width: f64,
    pub replications: usize,
}

impl Estimate {
    pub fn lower(&self) -> f64 {
        self.mean - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.mean + self.half_width
    }

    pub fn covers(&self, value: f64) -> bool {
        self.lower() <= value && value <= self.upper()
    }
}

/// Two-sided Student-t quantile `t_{1-(1-level)/2, dof}`.
pub fn t_quantile(level: f64, dof: usize) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, dof as f64).expect("positive degrees of freedom");
    dist.inverse_cdf(1.0 - (1.0 - level) / 2.0)
}

/// Needs at least two samples.
pub fn estimate(samples: &[f64], level: f64) -> Estimate {
    let r = samples.len();
    assert!(
        r >= 2,
        "confidence interval needs at least two replications"
    );
    let mean = samples.iter().sum::<f64>() / r as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1) as f64;
    let half_width = t_quantile(level, r - 1) * (var / r as f64).sqrt();
    Estimate {
        mean,
        half_width,
        replications: r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_match_tables() {
        assert!((t_quantile(0.95, 9) - 2.262157).abs() < 1e-5);
        assert!((t_quantile(0.99, 19) - 2.860935).abs() < 1e-5);
    }

    #[test]
    fn interval_of_known_samples() {
        let e = estimate(&[1.0, 2.0, 3.0, 4.0], 0.95);
        assert_eq!(e.mean, 2.5);
        // s = sqrt(5/3), t(0.975, 3) = 3.182446
        let expected = 3.182446 * (5.0f64 / 3.0 / 4.0).sqrt();
        assert!((e.half_width - expected).abs() < 1e-5);
        assert!(e.covers(2.5) && !e.covers(10.0));
    }

    #[test]
    fn constant_samples_have_zero_width() {
        let e = estimate(&[0.0; 5], 0.99);
        assert_eq!(e.half_width, 0.0);
    }
}

/// Sample statistics of one column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std: f64,
    pub stderr: f64,
    /// Half-width of the normal 95% interval.
    pub ci95: f64,
}

impl Stats {
    /// `None` for an empty input.
    pub fn of<I: IntoIterator<Item = f64>>(values: I) -> Option<Stats> {
        let values: Vec<f64> = values.into_iter().collect();
        let count = values.len();
        if count == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / count as f64;
        let std = if count > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        let stderr = std / (count as f64).sqrt();
        Some(Stats { count, mean, std, stderr, ci95: 1.96 * stderr })
    }

    /// True when `value` lies within `sigmas` standard errors of the mean,
    /// widened by `slack`.
    pub fn within(&self, value: f64, sigmas: f64, slack: f64) -> bool {
        (self.mean - value).abs() <= sigmas * self.stderr + slack
    }
}

use super::record::ExperimentRecord;

/// Fitted slope of one series against its predicted exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFit {
    pub series: String,
    pub p: f64,
    pub slope: f64,
    pub r2: f64,
    pub predicted: f64,
}

impl SeriesFit {
    pub fn deviation(&self) -> f64 {
        (self.slope - self.predicted).abs()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentReport {
    pub records: Vec<ExperimentRecord>,
    pub fits: Vec<SeriesFit>,
}

impl ExperimentReport {
    pub fn fit(&self, series: &str, p: f64) -> Option<&SeriesFit> {
        self.fits.iter().find(|f| f.series == series && (f.p - p).abs() < 1e-12)
    }

    /// `(index, value)` pairs of one series at one `p`, in record order.
    pub fn series(&self, series: &str, p: f64) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .filter(|r| r.experiment == series && (r.p - p).abs() < 1e-12)
            .map(|r| (r.index, r.value))
            .collect()
    }
}

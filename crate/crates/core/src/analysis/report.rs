use serde::{Deserialize, Serialize};

/// Grid, step and backend a measurement was taken with.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<String>,
}

/// One fitted quantity with its residual and comparison target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementReport {
    pub scenario: String,
    pub quantity: String,
    pub value: f64,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_err: Option<f64>,
    pub flagged: bool,
    pub metadata: RunMetadata,
}

impl MeasurementReport {
    pub fn new(scenario: &str, quantity: &str, value: f64, residual: f64) -> Self {
        MeasurementReport {
            scenario: scenario.to_string(),
            quantity: quantity.to_string(),
            value,
            residual,
            expected: None,
            rel_err: None,
            flagged: false,
            metadata: RunMetadata::default(),
        }
    }

    /// Records the target and the relative error against it (absolute when the target is 0).
    pub fn expect(mut self, expected: f64) -> Self {
        let err = (self.value - expected).abs();
        self.rel_err = Some(if expected != 0.0 {
            err / expected.abs()
        } else {
            err
        });
        self.expected = Some(expected);
        self
    }

    pub fn flag(mut self, flagged: bool) -> Self {
        self.flagged |= flagged;
        self
    }

    pub fn with_metadata(mut self, metadata: RunMetadata) -> Self {
        self.metadata = metadata;
        self
    }
}

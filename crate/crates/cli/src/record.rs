use octacount::CountReport;
use serde::{Deserialize, Serialize};

/// One count, as emitted by `count --json`. Exact integers are decimal
/// strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub sides: [u32; 4],
    pub method: String,
    pub count: String,
    pub terms: String,
    pub tiles: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy: Option<f64>,
    pub elapsed_ms: u64,
    pub workers: usize,
}

impl OutputRecord {
    pub fn from_report(report: &CountReport) -> Self {
        let entropy = octacount::entropy(&report.sides, &report.count).ok();
        OutputRecord {
            sides: report.sides.as_array(),
            method: report.method.tag().to_string(),
            count: report.count.to_str_radix(10),
            terms: report.terms_evaluated.to_str_radix(10),
            tiles: report.sides.tile_count(),
            entropy,
            elapsed_ms: u64::try_from(report.elapsed_ms()).unwrap_or(u64::MAX),
            workers: report.workers,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

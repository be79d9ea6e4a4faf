use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::EvalError;

/// One human judgement of one generated clue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingRecord {
    pub candidate_id: String,
    pub model_id: String,
    pub accepted: bool,
    pub rater: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateRow {
    pub model_id: String,
    pub accepted: usize,
    pub total: usize,
}

impl RateRow {
    pub fn rate(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.accepted as f64 / self.total as f64
        }
    }

    /// Percentage rounded to 0.1, e.g. `51.8%`.
    pub fn display(&self) -> String {
        format!("{:.1}%", self.rate() * 100.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptabilityReport {
    pub overall: RateRow,
    pub per_model: Vec<RateRow>,
}

pub const OVERALL_ID: &str = "overall";

pub fn acceptability_rate(ratings: &[RatingRecord]) -> Result<AcceptabilityReport, EvalError> {
    if ratings.is_empty() {
        return Err(EvalError::EmptyEvaluationSet);
    }
    let mut per: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for r in ratings {
        let slot = per.entry(r.model_id.as_str()).or_default();
        slot.1 += 1;
        if r.accepted {
            slot.0 += 1;
        }
    }
    let per_model: Vec<RateRow> = per
        .into_iter()
        .map(|(m, (accepted, total))| RateRow { model_id: m.to_string(), accepted, total })
        .collect();
    let overall = RateRow {
        model_id: OVERALL_ID.to_string(),
        accepted: per_model.iter().map(|r| r.accepted).sum(),
        total: ratings.len(),
    };
    Ok(AcceptabilityReport { overall, per_model })
}

//! Report rendering: aligned text tables with 1-decimal percentages, and
//! the side-by-side model comparison (strata × top-k × model, with a shared
//! total-number column).

use serde::{Deserialize, Serialize};

use super::eval::{EvalReport, SplitScores, TOP_KS};

#[derive(Debug, thiserror::Error)]
pub enum CompareError {
    #[error("stratum-count mismatch: `{a}` has {a_count} strata, `{b}` has {b_count}")]
    StratumCount { a: String, a_count: usize, b: String, b_count: usize },
    #[error("total mismatch in stratum `{stratum}`: `{a}` scored {a_total}, `{b}` scored {b_total}")]
    TotalMismatch { stratum: String, a: String, a_total: usize, b: String, b_total: usize },
    #[error("no reports to compare")]
    Empty,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelRow {
    pub model: String,
    /// Accuracy per k, as fractions.
    pub accuracies: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StratumBlock {
    pub stratum: String,
    pub total: usize,
    pub rows: Vec<ModelRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Comparison {
    pub scoring: String,
    pub test: Vec<StratumBlock>,
    pub validation: Vec<StratumBlock>,
}

fn blocks(
    split_of: impl Fn(&EvalReport) -> &SplitScores,
    reports: &[EvalReport],
) -> Result<Vec<StratumBlock>, CompareError> {
    let first = &reports[0];
    for other in &reports[1..] {
        let (a, b) = (split_of(first), split_of(other));
        if a.strata.len() != b.strata.len() {
            return Err(CompareError::StratumCount {
                a: first.model.clone(),
                a_count: a.strata.len(),
                b: other.model.clone(),
                b_count: b.strata.len(),
            });
        }
        for (sa, sb) in a.strata.iter().zip(&b.strata) {
            if sa.total != sb.total {
                return Err(CompareError::TotalMismatch {
                    stratum: sa.stratum.clone(),
                    a: first.model.clone(),
                    a_total: sa.total,
                    b: other.model.clone(),
                    b_total: sb.total,
                });
            }
        }
    }
    Ok(split_of(first)
        .strata
        .iter()
        .enumerate()
        .map(|(si, stratum)| StratumBlock {
            stratum: stratum.stratum.clone(),
            total: stratum.total,
            rows: reports
                .iter()
                .map(|r| ModelRow {
                    model: r.model.clone(),
                    accuracies: split_of(r).strata[si]
                        .per_k
                        .iter()
                        .map(|ks| ks.accuracy)
                        .collect(),
                })
                .collect(),
        })
        .collect())
}

/// Side-by-side comparison of reports produced on the same split/config.
pub fn compare_models(reports: &[EvalReport]) -> Result<Comparison, CompareError> {
    if reports.is_empty() {
        return Err(CompareError::Empty);
    }
    Ok(Comparison {
        scoring: reports[0].scoring.clone(),
        test: blocks(|r| &r.test, reports)?,
        validation: blocks(|r| &r.validation, reports)?,
    })
}

fn pct(x: f64) -> String {
    format!("{:.1}", x * 100.0)
}

fn render_blocks(out: &mut String, title: &str, blocks: &[StratumBlock]) {
    let name_width = blocks
        .iter()
        .flat_map(|b| b.rows.iter().map(|r| r.model.len()))
        .chain(blocks.iter().map(|b| b.stratum.len()))
        .max()
        .unwrap_or(10)
        .max(18);
    out.push_str(&format!("{:=^64}\n", format!(" {title} ")));
    for block in blocks {
        out.push_str(&format!("{:<name_width$}", block.stratum));
        for k in TOP_KS {
            out.push_str(&format!("{:>8}", format!("top{k}")));
        }
        out.push_str(&format!("{:>14}\n", "total number"));
        for row in &block.rows {
            out.push_str(&format!("{:<name_width$}", row.model));
            for acc in &row.accuracies {
                out.push_str(&format!("{:>8}", pct(*acc)));
            }
            out.push_str(&format!("{:>14}\n", block.total));
        }
    }
}

/// Aligned text table for a comparison, 1-decimal percentages.
pub fn render_comparison(comparison: &Comparison) -> String {
    let mut out = String::new();
    out.push_str(&format!("scoring: {}\n", comparison.scoring));
    render_blocks(&mut out, "test set", &comparison.test);
    render_blocks(&mut out, "validation set", &comparison.validation);
    out
}

/// Single-model report in the same layout.
pub fn render_report(report: &EvalReport) -> String {
    let comparison =
        compare_models(std::slice::from_ref(report)).expect("single report always compares");
    render_comparison(&comparison)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::train::eval::{KScore, StratumScores};

    fn scores(split: &str, totals: [usize; 3], acc: f64) -> SplitScores {
        SplitScores {
            split: split.to_string(),
            strata: ["all", "cared", "unseen-cared"]
                .iter()
                .zip(totals)
                .map(|(name, total)| StratumScores {
                    stratum: name.to_string(),
                    total,
                    per_k: TOP_KS
                        .iter()
                        .map(|&k| KScore {
                            k,
                            hits: (acc * total as f64) as usize,
                            accuracy: acc,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    fn report(model: &str, acc: f64) -> EvalReport {
        EvalReport {
            model: model.to_string(),
            scoring: "content tokens only".to_string(),
            validation: scores("validation", [100, 40, 10], acc),
            test: scores("test", [100, 40, 10], acc),
        }
    }

    #[test]
    fn shared_total_column_and_rows_per_model() {
        let cmp = compare_models(&[report("LSTM", 0.4), report("REP", 0.5)]).unwrap();
        assert_eq!(cmp.test.len(), 3);
        assert_eq!(cmp.test[0].rows.len(), 2);
        assert_eq!(cmp.test[0].total, 100);
    }

    #[test]
    fn total_mismatch_is_rejected() {
        let a = report("LSTM", 0.4);
        let mut b = report("REP", 0.5);
        b.test.strata[1].total = 39;
        assert!(matches!(
            compare_models(&[a, b]),
            Err(CompareError::TotalMismatch { .. })
        ));
    }

    #[test]
    fn stratum_count_mismatch_is_rejected() {
        let a = report("LSTM", 0.4);
        let mut b = report("REP", 0.5);
        b.test.strata.pop();
        assert!(matches!(
            compare_models(&[a, b]),
            Err(CompareError::StratumCount { .. })
        ));
    }

    #[test]
    fn single_model_renders_degenerate_table() {
        let text = render_report(&report("LSTM", 0.467));
        assert!(text.contains("LSTM"));
        assert!(text.contains("46.7"));
        assert!(text.contains("total number"));
    }

    #[test]
    fn percentages_round_trip_at_one_decimal() {
        let cmp = compare_models(&[report("REP", 0.456)]).unwrap();
        let text = render_comparison(&cmp);
        // independent parse of the rendered numbers
        for line in text.lines().filter(|l| l.trim_start().starts_with("REP")) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            for value in &fields[1..=4] {
                let parsed: f64 = value.parse().unwrap();
                assert_eq!(format!("{parsed:.1}"), format!("{:.1}", 45.6));
            }
        }
        let json = serde_json::to_string(&cmp).unwrap();
        let back: Comparison = serde_json::from_str(&json).unwrap();
        for (a, b) in cmp.test.iter().zip(&back.test) {
            for (ra, rb) in a.rows.iter().zip(&b.rows) {
                for (x, y) in ra.accuracies.iter().zip(&rb.accuracies) {
                    assert_eq!(format!("{:.1}", x * 100.0), format!("{:.1}", y * 100.0));
                }
            }
        }
    }
}

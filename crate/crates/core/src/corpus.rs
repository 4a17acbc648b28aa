//! Corpus harness: run the certifying pipeline plus the verifier across a
//! batch of instances and produce a CSV report with stable columns.

use rayon::prelude::*;

use crate::certify::{verify, Verdict};
use crate::colorer::{color_auto, PipelineStats};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::{chromatic_number, clique_number};

pub const CSV_HEADER: &str =
    "name,n,m,omega,chi_exact,colors_used,bound,verdict,violations,runtime_ms";

/// Default vertex ceiling under which the runner also computes the exact
/// chromatic number for the sanity column.
pub const DEFAULT_CHI_EXACT_MAX: usize = 16;

#[derive(Clone, Debug)]
pub struct CorpusOptions {
    pub t: usize,
    pub mode: String,
    pub chi_exact_max: usize,
    /// Per-instance soft budget; overruns are recorded, not fatal.
    pub timeout_ms: Option<u64>,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            t: 2,
            mode: "auto".into(),
            chi_exact_max: DEFAULT_CHI_EXACT_MAX,
            timeout_ms: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusRow {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub omega: usize,
    pub chi_exact: Option<usize>,
    pub colors_used: Option<usize>,
    pub bound: u64,
    pub verdict: String,
    pub violations: usize,
    pub runtime_ms: u64,
    pub timed_out: bool,
    pub stats: PipelineStats,
}

impl CorpusRow {
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.name,
            self.n,
            self.m,
            self.omega,
            self.chi_exact.map_or(String::new(), |v| v.to_string()),
            self.colors_used.map_or(String::new(), |v| v.to_string()),
            self.bound,
            self.verdict,
            self.violations,
            self.runtime_ms
        )
    }
}

#[derive(Clone, Debug)]
pub struct CorpusReport {
    pub rows: Vec<CorpusRow>,
    pub accepted: usize,
    pub witnesses: usize,
    pub rejected_certificates: usize,
    pub violation_total: usize,
    /// max over colored rows of colors_used / omega², the chair-mode
    /// headline ratio.
    pub max_ratio: f64,
}

impl CorpusReport {
    pub fn csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv());
            out.push('\n');
        }
        out
    }

    /// The run fails when any of our own certificates is rejected, or a
    /// lemma validator produced a non-advisory violation on an instance we
    /// colored.
    pub fn ok(&self) -> bool {
        self.rejected_certificates == 0
    }
}

/// Run color + verify on every named instance. Instances run in parallel;
/// rows come back in input order.
pub fn run_corpus(instances: &[(String, Graph)], options: &CorpusOptions) -> Result<CorpusReport> {
    let rows: Vec<CorpusRow> = instances
        .par_iter()
        .map(|(name, g)| run_one(name, g, options))
        .collect::<Result<Vec<_>>>()?;
    let mut accepted = 0;
    let mut witnesses = 0;
    let mut rejected = 0;
    let mut violation_total = 0;
    let mut max_ratio = 0.0f64;
    for row in &rows {
        violation_total += row.violations;
        match row.verdict.as_str() {
            "colored" => {
                accepted += 1;
                if let Some(used) = row.colors_used {
                    if row.omega > 0 {
                        let ratio = used as f64 / (row.omega * row.omega) as f64;
                        max_ratio = max_ratio.max(ratio);
                    }
                }
            }
            "witness" => witnesses += 1,
            _ => rejected += 1,
        }
    }
    Ok(CorpusReport {
        rows,
        accepted,
        witnesses,
        rejected_certificates: rejected,
        violation_total,
        max_ratio,
    })
}

fn run_one(name: &str, g: &Graph, options: &CorpusOptions) -> Result<CorpusRow> {
    let start = std::time::Instant::now();
    let (omega, _) = clique_number(g);
    let outcome = color_auto(g, options.t, &options.mode);
    let runtime_ms = start.elapsed().as_millis() as u64;
    let timed_out = options.timeout_ms.is_some_and(|limit| runtime_ms > limit);

    let (verdict, colors_used, bound, violations) = match &outcome {
        Ok(cert) => {
            let report = verify(g, cert)?;
            let verdict = match (cert.verdict, report.accepted) {
                (_, false) => "rejected".to_string(),
                (Verdict::Colored, true) => "colored".to_string(),
                (Verdict::NotInClass, true) => "witness".to_string(),
            };
            let used = cert.colors.as_ref().map(|_| cert.colors_used());
            (verdict, used, cert.bound, 0usize)
        }
        Err(Error::Contradiction(msg)) => (format!("error: {msg}"), None, 0, 1),
        Err(e) => (format!("error: {e}"), None, 0, 1),
    };

    let chi_exact = if g.n() <= options.chi_exact_max {
        chromatic_number(g).ok().map(|(chi, _)| chi)
    } else {
        None
    };

    Ok(CorpusRow {
        name: name.to_string(),
        n: g.n(),
        m: g.m(),
        omega,
        chi_exact,
        colors_used,
        bound,
        verdict,
        violations,
        runtime_ms,
        timed_out,
        stats: PipelineStats::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, Family, GenSpec};
    use crate::graph::cycle_graph;

    #[test]
    fn empty_corpus_empty_report() {
        let report = run_corpus(&[], &CorpusOptions::default()).unwrap();
        assert!(report.rows.is_empty());
        assert_eq!(report.csv(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn cograph_batch_all_accepted() {
        let mut instances = Vec::new();
        for seed in 0..20 {
            let spec = GenSpec { family: Family::Cograph, n: 12, p: 0.5, seed, t: 2, ktt: false };
            instances.push((format!("cograph-{seed}"), generate(&spec).unwrap()));
        }
        let report = run_corpus(&instances, &CorpusOptions::default()).unwrap();
        assert!(report.ok());
        assert_eq!(report.accepted, 20);
        assert_eq!(report.witnesses, 0);
        assert_eq!(report.violation_total, 0);
        // sanity on the chair headline ratio
        assert!(report.max_ratio <= 7.5);
    }

    #[test]
    fn mixed_batch_counts_witnesses() {
        let chairless = ("c5".to_string(), cycle_graph(5));
        let chairful = (
            "planted".to_string(),
            generate(&GenSpec {
                family: Family::NegativeControl,
                n: 10,
                p: 0.5,
                seed: 4,
                t: 2,
                ktt: false,
            })
            .unwrap(),
        );
        let report = run_corpus(&[chairless, chairful], &CorpusOptions::default()).unwrap();
        assert!(report.ok());
        assert_eq!(report.accepted, 1);
        assert_eq!(report.witnesses, 1);
        assert_eq!(report.rows[0].chi_exact, Some(3));
    }

    #[test]
    fn csv_columns_stable() {
        let report =
            run_corpus(&[("c5".into(), cycle_graph(5))], &CorpusOptions::default()).unwrap();
        let csv = report.csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let row = lines.next().unwrap();
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
        assert!(row.starts_with("c5,5,5,2,3,"));
    }
}

//! Report emission: trace files, CSV exports, metric JSON, and the stdout
//! table in the t-test / MAPE / DTW / Z-score column layout.

use std::path::{Path, PathBuf};

use groupsim_core::metrics::{build_report, dtw_dispersion, MetricReport, Series};
use groupsim_core::model::{ActionKind, EventRecord, GROUND_TRUTH_DAYS};
use groupsim_core::runtime::{ReplicationSet, SimulationTrace};

use crate::CliError;

/// Write a trace as pretty JSON (with a trailing newline).
pub fn write_trace(trace: &SimulationTrace, path: &Path) -> Result<(), CliError> {
    let mut json =
        serde_json::to_string_pretty(trace).map_err(|e| CliError::Validation(e.to_string()))?;
    json.push('\n');
    std::fs::write(path, json).map_err(|e| CliError::io(&format!("writing {}", path.display()), e))
}

pub fn read_trace(path: &Path) -> Result<SimulationTrace, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(&format!("reading trace {}", path.display()), e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("malformed trace {}: {e}", path.display())))
}

/// `daily_totals.csv`: one row per simulated day.
pub fn write_daily_totals_csv(trace: &SimulationTrace, path: &Path) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    writer
        .write_record(["day", "date", "views", "likes", "comments", "shares"])
        .map_err(|e| CliError::Io(e.to_string()))?;
    for day in &trace.days {
        writer
            .write_record([
                day.day.to_string(),
                day.date.to_string(),
                day.totals.views.to_string(),
                day.totals.likes.to_string(),
                day.totals.comments.to_string(),
                day.totals.shares.to_string(),
            ])
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    writer.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// `engagements.csv`: one row per day per agent.
pub fn write_engagements_csv(trace: &SimulationTrace, path: &Path) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    writer
        .write_record([
            "event_id", "day", "agent_id", "views", "likes", "comments", "shares",
        ])
        .map_err(|e| CliError::Io(e.to_string()))?;
    for day in &trace.days {
        for row in &day.rows {
            writer
                .write_record([
                    trace.event_id.clone(),
                    day.day.to_string(),
                    row.agent_id.clone(),
                    row.engagement.views.to_string(),
                    row.engagement.likes.to_string(),
                    row.engagement.comments.to_string(),
                    row.engagement.shares.to_string(),
                ])
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    writer.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn pred_series(trace: &SimulationTrace, action: ActionKind) -> Result<Series, CliError> {
    let mut totals = trace.daily_totals(action);
    if totals.len() > GROUND_TRUTH_DAYS {
        log::warn!(
            "trace covers {} days; evaluating the first {GROUND_TRUTH_DAYS}",
            totals.len()
        );
        totals.truncate(GROUND_TRUTH_DAYS);
    }
    if totals.len() < GROUND_TRUTH_DAYS {
        return Err(CliError::Validation(format!(
            "trace covers {} days but ground truth has {GROUND_TRUTH_DAYS}",
            totals.len()
        )));
    }
    Ok(Series::from_u64(&totals))
}

/// Evaluate traces against an event's ground truth.
///
/// The first complete trace supplies the predicted curves; the view totals of
/// all complete traces feed the reproducibility Z (reference: ground truth).
pub fn evaluate_traces(
    traces: &[SimulationTrace],
    event: &EventRecord,
) -> Result<MetricReport, CliError> {
    let primary = traces
        .iter()
        .find(|t| t.complete)
        .ok_or_else(|| CliError::Validation("no complete trace to evaluate".into()))?;
    let actions = [
        ActionKind::View,
        ActionKind::Like,
        ActionKind::Comment,
        ActionKind::Share,
    ];
    let pred: [Series; 4] = [
        pred_series(primary, actions[0])?,
        pred_series(primary, actions[1])?,
        pred_series(primary, actions[2])?,
        pred_series(primary, actions[3])?,
    ];
    let actual: [Series; 4] = [
        Series::from_counts(&event.ground_truth.views),
        Series::from_counts(&event.ground_truth.likes),
        Series::from_counts(&event.ground_truth.comments),
        Series::from_counts(&event.ground_truth.shares),
    ];
    let replicate_totals: Vec<f64> = traces
        .iter()
        .filter(|t| t.complete)
        .map(|t| t.total_views() as f64)
        .collect();
    let reference = event.ground_truth.total_views() as f64;
    build_report(&event.id, &pred, &actual, &replicate_totals, reference)
        .map_err(|e| CliError::Validation(e.to_string()))
}

pub fn write_metrics(report: &MetricReport, path: &Path) -> Result<(), CliError> {
    let mut json =
        serde_json::to_string_pretty(report).map_err(|e| CliError::Validation(e.to_string()))?;
    json.push('\n');
    std::fs::write(path, json).map_err(|e| CliError::io(&format!("writing {}", path.display()), e))
}

fn fmt_t(t: f64, diverged: bool) -> String {
    if diverged {
        "diverged".into()
    } else {
        format!("{t:.3}")
    }
}

fn fmt_z(report: &MetricReport) -> String {
    match report.z_max_abs {
        Some(z) => format!(
            "{z:.2} ({})",
            report.z_label.as_deref().unwrap_or("unlabeled")
        ),
        None => "-".into(),
    }
}

/// One event's metrics in the standard column layout.
pub fn render_table(report: &MetricReport) -> String {
    let mut out = String::new();
    out.push_str("| event | t-test | MAPE | DTW Mean | DTW Std | Z-score |\n");
    out.push_str("|-------|--------|------|----------|---------|---------|\n");
    out.push_str(&format!(
        "| {} | {} | {:.2}% | {:.3e} | {:.4} | {} |\n",
        report.event_id,
        fmt_t(report.t_statistic, report.t_diverged),
        report.mape_percent,
        report.dtw_mean,
        report.dtw_std,
        fmt_z(report),
    ));
    out
}

/// Cross-event aggregate in the same layout.
///
/// The DTW column aggregates each event's views distance: the mean and the
/// population standard deviation over events.
pub fn render_aggregate_table(reports: &[MetricReport]) -> Result<String, CliError> {
    if reports.is_empty() {
        return Err(CliError::Validation("no reports to aggregate".into()));
    }
    let mut out = String::new();
    out.push_str("| event | t-test | MAPE | DTW Mean | DTW Std | Z-score |\n");
    out.push_str("|-------|--------|------|----------|---------|---------|\n");
    for report in reports {
        out.push_str(&format!(
            "| {} | {} | {:.2}% | {:.3e} | {:.4} | {} |\n",
            report.event_id,
            fmt_t(report.t_statistic, report.t_diverged),
            report.mape_percent,
            report.dtw_mean,
            report.dtw_std,
            fmt_z(report),
        ));
    }
    let n = reports.len() as f64;
    let t_mean = reports.iter().map(|r| r.t_statistic).sum::<f64>() / n;
    let mape_mean = reports.iter().map(|r| r.mape_percent).sum::<f64>() / n;
    let view_dtws: Vec<f64> = reports.iter().map(|r| r.dtw_distances[0]).collect();
    let (dtw_mean, dtw_std) =
        dtw_dispersion(&view_dtws).map_err(|e| CliError::Validation(e.to_string()))?;
    let z_max = reports
        .iter()
        .filter_map(|r| r.z_max_abs)
        .fold(None::<f64>, |acc, z| Some(acc.map_or(z, |a| a.max(z))));
    out.push_str(&format!(
        "| aggregate ({} events) | {:.3} | {:.2}% | {:.3e} | {:.4} | {} |\n",
        reports.len(),
        t_mean,
        mape_mean,
        dtw_mean,
        dtw_std,
        z_max.map_or("-".into(), |z| format!(
            "{z:.2} ({})",
            groupsim_core::metrics::z_label(z)
        )),
    ));
    // Two labeled t-test pairings: per-day t averaged over events (above),
    // and one t over per-event view totals (below).
    if reports.len() >= 2 {
        let pred_totals: Vec<f64> = reports.iter().map(|r| r.pred_total_views).collect();
        let actual_totals: Vec<f64> = reports.iter().map(|r| r.actual_total_views).collect();
        let t_totals = groupsim_core::metrics::paired_t(
            &Series::new(pred_totals).map_err(|e| CliError::Validation(e.to_string()))?,
            &Series::new(actual_totals).map_err(|e| CliError::Validation(e.to_string()))?,
        )
        .map_err(|e| CliError::Validation(e.to_string()))?;
        out.push_str(&format!(
            "t-test pairings: per-day within events (mean) = {t_mean:.3}; per-event totals = {}\n",
            fmt_t(t_totals.t, t_totals.diverged),
        ));
    }
    Ok(out)
}

/// Write the full report bundle for a replication set.
///
/// Emits `trace.json` (primary), one `trace_seed<seed>.json` per replicate,
/// `daily_totals.csv`, `engagements.csv`, and `metrics.json`, and returns the
/// paths written. The metrics table goes to stdout separately via
/// [`render_table`].
pub fn emit_report(
    set: &ReplicationSet,
    event: &EventRecord,
    outdir: &Path,
) -> Result<(Vec<PathBuf>, MetricReport), CliError> {
    let primary = set
        .traces
        .iter()
        .find(|t| t.complete)
        .ok_or_else(|| CliError::Validation("no complete trace to report".into()))?;
    std::fs::create_dir_all(outdir)
        .map_err(|e| CliError::io(&format!("creating {}", outdir.display()), e))?;
    let mut written = Vec::new();

    let trace_path = outdir.join("trace.json");
    write_trace(primary, &trace_path)?;
    written.push(trace_path);
    for trace in &set.traces {
        let path = outdir.join(format!("trace_seed{}.json", trace.seed));
        write_trace(trace, &path)?;
        written.push(path);
    }

    let totals_path = outdir.join("daily_totals.csv");
    write_daily_totals_csv(primary, &totals_path)?;
    written.push(totals_path);

    let engagements_path = outdir.join("engagements.csv");
    write_engagements_csv(primary, &engagements_path)?;
    written.push(engagements_path);

    let report = evaluate_traces(&set.traces, event)?;
    let metrics_path = outdir.join("metrics.json");
    write_metrics(&report, &metrics_path)?;
    written.push(metrics_path);

    Ok((written, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use groupsim_core::hierarchy::KnowledgeGraph;
    use groupsim_core::oracle::StubOracle;
    use groupsim_core::runtime::{run_replications, EngineConfig, Scenario};

    fn fixture_event() -> EventRecord {
        crate::fixtures::make_fixture(crate::fixtures::Archetype::DoublePeak, 5_000_000, 1).unwrap()
    }

    fn replication_set(event: &EventRecord, seeds: &[u64]) -> ReplicationSet {
        let mut scenario = Scenario::new(event.clone(), 1);
        scenario.heat = groupsim_core::reasoning::HeatModel::Schedule {
            schedule: crate::fixtures::Archetype::DoublePeak.heat_schedule(),
        };
        let stub = StubOracle::default();
        let mut graph = KnowledgeGraph::with_bundled_education();
        run_replications(
            &scenario,
            &EngineConfig::default(),
            &stub,
            &mut graph,
            seeds,
            1,
        )
        .unwrap()
    }

    #[test]
    fn report_bundle_has_expected_files_and_counts() {
        let event = fixture_event();
        let set = replication_set(&event, &[1, 2, 3, 4, 5]);
        let dir = tempfile::tempdir().unwrap();
        let (written, report) = emit_report(&set, &event, dir.path()).unwrap();
        assert!(written.iter().any(|p| p.ends_with("trace.json")));
        assert_eq!(report.z_scores.len(), 5);

        let csv = std::fs::read_to_string(dir.path().join("daily_totals.csv")).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows.len(), 8); // header + 7 days

        let metrics: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("metrics.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(metrics["z_scores"].as_array().unwrap().len(), 5);

        let engagements = std::fs::read_to_string(dir.path().join("engagements.csv")).unwrap();
        assert_eq!(engagements.lines().count(), 1 + 7 * 2); // header + days * L1 agents
    }

    #[test]
    fn unwritable_outdir_is_io() {
        let event = fixture_event();
        let set = replication_set(&event, &[1, 2]);
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "x").unwrap();
        // A path under a regular file cannot be created.
        let bad = blocker.join("outdir");
        assert!(matches!(
            emit_report(&set, &event, &bad),
            Err(CliError::Io(_))
        ));
    }

    #[test]
    fn tables_render_every_column() {
        let event = fixture_event();
        let set = replication_set(&event, &[1, 2]);
        let report = evaluate_traces(&set.traces, &event).unwrap();
        let table = render_table(&report);
        for needle in ["t-test", "MAPE", "DTW Mean", "DTW Std", "Z-score"] {
            assert!(table.contains(needle), "missing {needle}: {table}");
        }
        let aggregate = render_aggregate_table(&[report.clone(), report]).unwrap();
        assert!(aggregate.contains("aggregate (2 events)"));
    }
}

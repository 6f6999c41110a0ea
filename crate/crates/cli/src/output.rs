//! Report, trace and curve writers.

use std::fmt::Write as _;

use camcov_core::geometry::Mesh;
use camcov_core::objective::CoverageReport;
use camcov_core::optimizer::{HeuristicStep, TraceRecord};
use serde::Serialize;

#[derive(Debug, Serialize)]
struct PieceRow {
    id: usize,
    area: f64,
    strength: f64,
    recognized: bool,
    principal: Option<usize>,
    resolution: f64,
}

#[derive(Debug, Serialize)]
struct ReportDoc<'a> {
    fusion: &'static str,
    thold: f64,
    cameras: usize,
    piece_count: usize,
    recognized_count: usize,
    recognized_ratio: f64,
    recognized_area: f64,
    total_area: f64,
    average_coverage_strength: f64,
    average_coverage_strength_recognized: f64,
    average_resolution: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_fitness: Option<f64>,
    pieces: &'a [PieceRow],
}

/// JSON report of every [`CoverageReport`] field plus per-piece values.
/// Camera indices in `principal` are 0-based.
pub fn report_json(report: &CoverageReport, mesh: &Mesh, cameras: usize, best_fitness: Option<f64>) -> String {
    let pieces: Vec<PieceRow> = report
        .pieces
        .iter()
        .zip(mesh.iter())
        .map(|(c, p)| PieceRow { id: p.id, area: p.area, strength: c.strength, recognized: c.recognized, principal: c.principal, resolution: c.resolution })
        .collect();
    let doc = ReportDoc {
        fusion: report.fusion.name(),
        thold: report.thold,
        cameras,
        piece_count: report.pieces.len(),
        recognized_count: report.recognized_count,
        recognized_ratio: report.recognized_ratio,
        recognized_area: report.recognized_area,
        total_area: report.total_area,
        average_coverage_strength: report.average_coverage_strength,
        average_coverage_strength_recognized: report.average_coverage_strength_recognized,
        average_resolution: report.average_resolution,
        best_fitness,
        pieces: &pieces,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report always serializes");
    s.push('\n');
    s
}

pub fn trace_csv(trace: &[TraceRecord]) -> String {
    let mut s = String::from("iteration,best_fitness,recognized_ratio\n");
    for r in trace {
        writeln!(s, "{},{},{}", r.iteration, r.best_fitness, r.recognized_ratio).unwrap();
    }
    s
}

pub fn heuristic_csv(steps: &[HeuristicStep]) -> String {
    let mut s = String::from("cameras,recognized_ratio,recognized_area\n");
    for st in steps {
        writeln!(s, "{},{},{}", st.cameras, st.recognized_ratio, st.fitness).unwrap();
    }
    s
}

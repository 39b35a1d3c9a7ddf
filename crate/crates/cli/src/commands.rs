use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use topa_core::eval::{write_ccdf_csv, write_summary_csv, write_trace_csv};
use topa_core::geom::first_blocking;
use topa_core::solver::solve_position_with;
use topa_core::{
    build_context, compare_positions, sample_feasible_region, throughput_trace, Error, Point3, PositionsDocument,
    Scenario, SolverOptions,
};

/// Process exit status; the numeric values are part of the interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Infeasible = 1,
    InputError = 2,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Infeasible => "infeasible",
            Status::InputError => "input-error",
        }
    }
}

#[derive(Debug)]
pub struct CommandOutcome {
    pub status: Status,
    pub artifacts: Vec<PathBuf>,
}

impl CommandOutcome {
    fn ok(artifacts: Vec<PathBuf>) -> Self {
        Self {
            status: Status::Ok,
            artifacts,
        }
    }

    fn fail(status: Status) -> Self {
        Self {
            status,
            artifacts: Vec::new(),
        }
    }
}

fn load(path: &Path, out: &mut dyn Write) -> std::io::Result<Option<Scenario>> {
    match Scenario::from_path(path) {
        Ok(s) => Ok(Some(s)),
        Err(e) => {
            report_error(&e, out)?;
            Ok(None)
        }
    }
}

fn report_error(err: &Error, out: &mut dyn Write) -> std::io::Result<()> {
    match err {
        Error::Validation(diags) => {
            for d in diags {
                writeln!(out, "error: {d}")?;
            }
        }
        other => writeln!(out, "error: {other}")?,
    }
    Ok(())
}

fn create(path: &Path) -> std::io::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn solve(scenario: &Path, out_path: Option<&Path>, resolution_m: f64, out: &mut dyn Write) -> std::io::Result<CommandOutcome> {
    let Some(s) = load(scenario, out)? else {
        return Ok(CommandOutcome::fail(Status::InputError));
    };
    let opts = SolverOptions {
        grid_resolution_m: resolution_m,
        ..SolverOptions::default()
    };
    let solution = match solve_position_with(&s, &opts) {
        Ok(sol) => sol,
        Err(Error::Infeasible(report)) => {
            writeln!(out, "no feasible position up to {} dBm", s.radio.max_tx_power_dbm)?;
            write!(out, "{report}")?;
            return Ok(CommandOutcome::fail(Status::Infeasible));
        }
        Err(e) => {
            report_error(&e, out)?;
            return Ok(CommandOutcome::fail(Status::InputError));
        }
    };

    writeln!(out, "tx_power_dbm = {}", solution.tx_power_dbm)?;
    writeln!(
        out,
        "position     = ({:.3}, {:.3}, {:.3})",
        solution.position.x, solution.position.y, solution.position.z
    )?;
    for ue in &solution.ues {
        writeln!(
            out,
            "  {:<12} d={:>8.3} m  d_max={:>8.3} m  snr={:>7.3} dB  margin={:>6.3} dB  mcs={}  los={}",
            ue.ue_id, ue.distance_m, ue.d_max_m, ue.snr_db, ue.snr_margin_db, ue.mcs_index, ue.los
        )?;
    }

    let mut artifacts = Vec::new();
    if let Some(path) = out_path {
        let mut w = create(path)?;
        serde_json::to_writer_pretty(&mut w, &solution)?;
        writeln!(w)?;
        w.flush()?;
        artifacts.push(path.to_path_buf());
    }
    Ok(CommandOutcome::ok(artifacts))
}

pub fn check_los(scenario: &Path, position: Point3, out: &mut dyn Write) -> std::io::Result<CommandOutcome> {
    let Some(s) = load(scenario, out)? else {
        return Ok(CommandOutcome::fail(Status::InputError));
    };
    if let Some(o) = s.obstacles.iter().find(|o| o.shape.contains(&position)) {
        writeln!(out, "error: degenerate position {position}: inside obstacle {}", o.id)?;
        return Ok(CommandOutcome::fail(Status::InputError));
    }
    let boxes = s.boxes();
    let mut lines = Vec::with_capacity(s.ues.len());
    for ue in &s.ues {
        match first_blocking(ue.position, position, &boxes) {
            Ok(blocker) => {
                let by = blocker.map_or("-", |i| s.obstacles[i].id.as_str());
                lines.push(format!("{} los={} blocked_by={}", ue.id, blocker.is_none(), by));
            }
            Err(e) => {
                writeln!(out, "error: degenerate position {position} for {}: {e}", ue.id)?;
                return Ok(CommandOutcome::fail(Status::InputError));
            }
        }
    }
    for line in lines {
        writeln!(out, "{line}")?;
    }
    Ok(CommandOutcome::ok(Vec::new()))
}

pub struct TraceArgs {
    pub seconds: u32,
    pub jitter: f64,
    pub seed: u64,
}

/// `<stem>.<suffix>.csv` next to the summary file.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map_or_else(|| "evaluate".into(), |s| s.to_string_lossy().into_owned());
    path.with_file_name(format!("{stem}.{suffix}.csv"))
}

pub fn evaluate(
    scenario: &Path,
    positions: &Path,
    out_csv: &Path,
    trace: Option<TraceArgs>,
    out: &mut dyn Write,
) -> std::io::Result<CommandOutcome> {
    let Some(s) = load(scenario, out)? else {
        return Ok(CommandOutcome::fail(Status::InputError));
    };
    let doc = match std::fs::read_to_string(positions)
        .map_err(Error::from)
        .and_then(|text| PositionsDocument::from_json_str(&text))
    {
        Ok(doc) => doc,
        Err(e) => {
            report_error(&e, out)?;
            return Ok(CommandOutcome::fail(Status::InputError));
        }
    };
    let reports = match compare_positions(&doc.positions, &s) {
        Ok(r) => r,
        Err(e) => {
            report_error(&e, out)?;
            return Ok(CommandOutcome::fail(Status::InputError));
        }
    };

    let mut traces = Vec::new();
    if let Some(t) = &trace {
        for p in &doc.positions {
            match throughput_trace(p.position, &s, t.seconds, t.jitter, t.seed) {
                Ok(tr) => traces.push(tr),
                Err(e) => {
                    report_error(&e, out)?;
                    return Ok(CommandOutcome::fail(Status::InputError));
                }
            }
        }
    }

    let mut artifacts = Vec::new();
    let write_result = (|| -> topa_core::Result<()> {
        let mut w = create(out_csv)?;
        write_summary_csv(&mut w, &reports, &s)?;
        artifacts.push(out_csv.to_path_buf());
        if trace.is_some() {
            let named: Vec<(&str, &topa_core::Trace)> =
                doc.positions.iter().map(|p| p.name.as_str()).zip(&traces).collect();
            let trace_path = sibling(out_csv, "trace");
            write_trace_csv(create(&trace_path)?, &named)?;
            artifacts.push(trace_path);
            let ccdf_path = sibling(out_csv, "ccdf");
            write_ccdf_csv(create(&ccdf_path)?, &named)?;
            artifacts.push(ccdf_path);
        }
        Ok(())
    })();
    if let Err(e) = write_result {
        report_error(&e, out)?;
        return Ok(CommandOutcome::fail(Status::InputError));
    }

    for r in &reports {
        writeln!(
            out,
            "{:<16} {}  aggregate={:>9.3} Mbit/s  airtime={:.3}",
            r.name,
            r.position,
            r.aggregate_bps / 1e6,
            r.airtime_used
        )?;
    }
    Ok(CommandOutcome::ok(artifacts))
}

pub fn region(
    scenario: &Path,
    tx_power_dbm: f64,
    resolution_m: f64,
    out_csv: &Path,
    out: &mut dyn Write,
) -> std::io::Result<CommandOutcome> {
    let Some(s) = load(scenario, out)? else {
        return Ok(CommandOutcome::fail(Status::InputError));
    };
    let points = match build_context(&s, tx_power_dbm).and_then(|ctx| sample_feasible_region(&ctx, &s, resolution_m)) {
        Ok(p) => p,
        Err(e) => {
            report_error(&e, out)?;
            return Ok(CommandOutcome::fail(Status::InputError));
        }
    };
    let mut w = create(out_csv)?;
    writeln!(w, "x,y,z")?;
    for p in &points {
        writeln!(w, "{:.6},{:.6},{:.6}", p.x, p.y, p.z)?;
    }
    w.flush()?;
    writeln!(out, "{} feasible points at {} dBm, {} m grid", points.len(), tx_power_dbm, resolution_m)?;
    Ok(CommandOutcome::ok(vec![out_csv.to_path_buf()]))
}

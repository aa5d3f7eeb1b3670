//! CSV emission and parsing for the benchmark artifacts.
//!
//! All files are UTF-8 with LF line endings and a header row; real numbers
//! are written with 17 significant digits so files round-trip exactly and
//! identical runs produce byte-identical output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::bench::RunSummary;
use crate::profile::PerformanceProfile;
use crate::solver::IterationRecord;
use crate::Error;

/// 17 significant digits, scientific; enough to reproduce any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn open(path: &Path) -> Result<BufWriter<File>, Error> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<(), Error> {
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub const ITERATION_HEADER: &str = "k,f,nu,tau,alpha,proj_work,f_evals,stat_measure";

pub fn write_iteration_csv(path: &Path, records: &[IterationRecord]) -> Result<(), Error> {
    let mut w = open(path)?;
    let mut body = String::new();
    body.push_str(ITERATION_HEADER);
    body.push('\n');
    for r in records {
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.k,
            fmt_f64(r.f),
            fmt_f64(r.nu),
            fmt_f64(r.tau),
            fmt_f64(r.alpha),
            r.proj_work,
            r.f_evals,
            fmt_f64(r.stat_measure),
        ));
    }
    w.write_all(body.as_bytes()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    finish(w, path)
}

pub const SUMMARY_HEADER: &str =
    "instance_id,strategy,mode_param,status,outer_iters,f_evals,proj_work,wall_time_s,f_final";

pub fn write_summary_csv(path: &Path, summaries: &[RunSummary]) -> Result<(), Error> {
    let mut w = open(path)?;
    let mut body = String::new();
    body.push_str(SUMMARY_HEADER);
    body.push('\n');
    for s in summaries {
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            s.instance_id,
            s.strategy,
            fmt_f64(s.mode_param),
            s.status,
            s.outer_iters,
            s.f_evals,
            s.proj_work,
            fmt_f64(s.wall_time_s),
            fmt_f64(s.f_final),
        ));
    }
    w.write_all(body.as_bytes()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    finish(w, path)
}

pub fn read_summary_csv(path: &Path) -> Result<Vec<RunSummary>, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == SUMMARY_HEADER => {}
        _ => {
            return Err(Error::InvalidInput(format!(
                "{} is not a summary file (bad header)",
                path.display()
            )))
        }
    }
    let mut out = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(Error::InvalidInput(format!(
                "{}:{}: expected 9 fields, got {}",
                path.display(),
                lineno + 2,
                fields.len()
            )));
        }
        let parse_f = |s: &str| -> Result<f64, Error> {
            s.parse()
                .map_err(|_| Error::InvalidInput(format!("bad real '{s}'")))
        };
        let parse_u = |s: &str| -> Result<u64, Error> {
            s.parse()
                .map_err(|_| Error::InvalidInput(format!("bad integer '{s}'")))
        };
        out.push(RunSummary {
            instance_id: fields[0].to_string(),
            strategy: fields[1].to_string(),
            mode_param: parse_f(fields[2])?,
            status: fields[3].to_string(),
            outer_iters: parse_u(fields[4])?,
            f_evals: parse_u(fields[5])?,
            proj_work: parse_u(fields[6])?,
            wall_time_s: parse_f(fields[7])?,
            f_final: parse_f(fields[8])?,
        });
    }
    Ok(out)
}

pub fn write_profile_csv(path: &Path, profile: &PerformanceProfile) -> Result<(), Error> {
    let mut w = open(path)?;
    let mut body = String::from("theta");
    for v in &profile.variants {
        body.push_str(",rho_");
        body.push_str(v);
    }
    body.push('\n');
    for (i, theta) in profile.thetas.iter().enumerate() {
        body.push_str(&fmt_f64(*theta));
        for r in &profile.rho {
            body.push(',');
            body.push_str(&fmt_f64(r[i]));
        }
        body.push('\n');
    }
    w.write_all(body.as_bytes()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    finish(w, path)
}

//! CSV tables and JSON sidecars.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which
//! round-trips every `f64`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use hopfkit_core::simulator::Trajectory;
use hopfkit_core::Scalar;
use serde::Serialize;

use crate::{CliError, RunConfig};

pub fn number(v: f64) -> String {
    format!("{v:.16e}")
}

/// `<out>.meta.json` next to the primary output.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn write_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |source| CliError::Write { path: path.display().to_string(), source }
}

/// Writes a header line and rows of numbers.
pub fn write_table<'a>(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = &'a [f64]>,
) -> Result<(), CliError> {
    let err = write_err(path);
    let mut w = BufWriter::new(File::create(path).map_err(&err)?);
    writeln!(w, "{}", header.join(",")).map_err(&err)?;
    let mut line = String::new();
    for row in rows {
        line.clear();
        for (i, &v) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&number(v));
        }
        writeln!(w, "{line}").map_err(&err)?;
    }
    w.flush().map_err(&err)
}

/// `t,x,y,z[,u[,v]]`.
pub fn write_trajectory<T: Scalar>(path: &Path, traj: &Trajectory<T>) -> Result<(), CliError> {
    let mut header = vec!["t"];
    header.extend(traj.columns.iter().copied());
    let rows: Vec<Vec<f64>> = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(t, s)| std::iter::once(t).chain(s).map(|v| v.to_f64().unwrap_or(f64::NAN)).collect())
        .collect();
    write_table(path, &header, rows.iter().map(Vec::as_slice))
}

#[derive(Serialize)]
struct Sidecar<'a, R> {
    #[serde(flatten)]
    config: &'a RunConfig,
    run: R,
}

/// Writes the effective config plus a `run` object describing the output.
/// The file parses back as the same [`RunConfig`].
pub fn write_sidecar<R: Serialize>(out: &Path, config: &RunConfig, run: R) -> Result<PathBuf, CliError> {
    let path = sidecar_path(out);
    let mut text = serde_json::to_string_pretty(&Sidecar { config, run })
        .map_err(|e| CliError::Config(format!("cannot serialize the config: {e}")))?;
    text.push('\n');
    std::fs::write(&path, text).map_err(write_err(&path))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, 33.29333333333333, 1e-300, -2.5e17, 0.0] {
            let s = number(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(number(0.12), "1.2000000000000000e-1");
    }

    #[test]
    fn sidecar_sits_next_to_the_output() {
        assert_eq!(sidecar_path(Path::new("out/run.csv")), PathBuf::from("out/run.csv.meta.json"));
    }
}

//! CSV output and a matching plot script.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{SweepResult, TracePoint};
use crate::error::Result;

/// Writes `result` as CSV: `#` comment lines with run metadata, then a
/// header row and one row per `(h, r)`. Floats use the shortest
/// round-trip representation, so equal results give identical bytes.
pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut out = out;
    match result.master_seed {
        Some(seed) => writeln!(out, "# master_seed = {seed}")?,
        None => writeln!(out, "# master_seed = none")?,
    }
    writeln!(out, "# n_sites = {}", result.n_sites)?;
    writeln!(out, "# boundary = {}", result.boundary)?;
    writeln!(out, "# parity_fixups = {}", result.parity_fixups)?;
    writeln!(out, "# version = {}", result.version)?;
    let mut writer = csv::Writer::from_writer(out);
    for row in &result.rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_trace_csv<W: Write>(trace: &[TracePoint], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for point in trace {
        writer.serialize(point)?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes the CSV to `path`, and a plot script next to it when asked.
pub fn emit(result: &SweepResult, path: &Path, with_plot_script: bool) -> Result<()> {
    write_csv(result, BufWriter::new(File::create(path)?))?;
    if with_plot_script {
        let script = path.with_extension("py");
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        std::fs::write(script, plot_script(&name))?;
    }
    Ok(())
}

/// A matplotlib script that draws `C(r)` against `h` from `csv_name`, one
/// curve per `r`, with error bars when the rows carry them.
pub fn plot_script(csv_name: &str) -> String {
    format!(
        r##"import csv
import os
import sys

import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "{csv_name}")
with open(path) as f:
    rows = list(csv.DictReader(line for line in f if not line.startswith("#")))

curves = {{}}
for row in rows:
    curves.setdefault(int(row["r"]), []).append(row)

fig, ax = plt.subplots()
for r, points in sorted(curves.items()):
    h = [float(p["h"]) for p in points]
    c = [float(p["mean_concurrence"]) for p in points]
    err = [float(p["std_error"]) for p in points]
    ax.errorbar(h, c, yerr=err if any(err) else None, label=f"r = {{r}}", capsize=2)
ax.set_xlabel("h / J")
ax.set_ylabel("C(r)")
ax.legend()
fig.savefig(os.path.splitext(path)[0] + ".png", dpi=150)
"##
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ChainSpec, Regime, SweepSpec};
    use crate::sweep::run_uniform_zero_t;

    #[test]
    fn csv_layout() {
        let res = run_uniform_zero_t(
            &ChainSpec::new(20),
            &SweepSpec::new(Regime::UniformZeroT, vec![0.0, 2.0]).with_r_max(2),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&res, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# master_seed = none");
        assert_eq!(lines[1], "# n_sites = 20");
        assert_eq!(lines[2], "# boundary = periodic");
        assert_eq!(
            lines[5],
            "regime,q,a,kt,h,r,mean_concurrence,std_error,n_samples,n_pairs"
        );
        assert!(lines[6].starts_with("uniform_zero_t,,,0.0,0.0,1,0.339"));
        assert_eq!(lines[8], "uniform_zero_t,,,0.0,2.0,1,0.0,0.0,1,1");
        assert_eq!(lines.len(), 10);
    }

    #[test]
    fn emit_writes_both_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        let res = run_uniform_zero_t(
            &ChainSpec::new(20),
            &SweepSpec::new(Regime::UniformZeroT, vec![0.5]).with_r_max(1),
        )
        .unwrap();
        emit(&res, &path, true).unwrap();
        assert!(path.exists());
        let script = std::fs::read_to_string(dir.path().join("sweep.py")).unwrap();
        assert!(script.contains("\"sweep.csv\""));
    }
}

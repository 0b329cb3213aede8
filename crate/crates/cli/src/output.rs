//! CSV / manifest / plot-script emission. CSVs are RFC-4180 (CRLF, header
//! row, `.` decimal separator) with 17 significant digits so re-runs are
//! byte-identical. The manifest is written last and lists every file with
//! its SHA-256.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ScenarioConfig;

/// 17 significant digits, locale-independent.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
struct FileEntry {
    name: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    version: &'a str,
    seed: u64,
    trials: usize,
    generated_unix_s: u64,
    config: &'a ScenarioConfig,
    files: Vec<FileEntry>,
}

/// Collects output files for one run and writes the manifest last.
pub struct OutputDir {
    dir: PathBuf,
    files: Vec<FileEntry>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(OutputDir {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn register(&mut self, name: &str, bytes: &[u8]) -> std::io::Result<()> {
        let mut f = std::fs::File::create(self.dir.join(name))?;
        f.write_all(bytes)?;
        self.files.push(FileEntry {
            name: name.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
        Ok(())
    }

    /// Write a CSV with the given header and rows of numbers.
    pub fn write_csv<I, R>(&mut self, name: &str, header: &[&str], rows: I) -> std::io::Result<()>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = f64>,
    {
        let mut out = String::new();
        out.push_str(&header.join(","));
        out.push_str("\r\n");
        for row in rows {
            let cells: Vec<String> = row.into_iter().map(fmt).collect();
            out.push_str(&cells.join(","));
            out.push_str("\r\n");
        }
        self.register(name, out.as_bytes())
    }

    /// Write a plain-text companion (plot script).
    pub fn write_text(&mut self, name: &str, content: &str) -> std::io::Result<()> {
        self.register(name, content.as_bytes())
    }

    /// Write `manifest.json` listing everything emitted so far, plus a
    /// diff-friendly echo of the fully resolved configuration.
    pub fn finalize(
        mut self,
        command: &str,
        config: &ScenarioConfig,
        seed: u64,
        trials: usize,
    ) -> std::io::Result<()> {
        self.write_text("config_resolved.toml", &config.to_toml())?;
        let manifest = RunManifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            seed,
            trials,
            generated_unix_s: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            config,
            files: std::mem::take(&mut self.files),
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        let mut f = std::fs::File::create(self.dir.join("manifest.json"))?;
        f.write_all(text.as_bytes())?;
        f.write_all(b"\n")
    }
}

/// Minimal line-plot companion script for two-or-three-column CSVs.
pub fn line_plot_script(csvs: &[String], x_label: &str, y_label: &str, out_png: &str) -> String {
    let mut s = String::from(
        "#!/usr/bin/env python3\nimport csv\nimport matplotlib.pyplot as plt\n\nfiles = [\n",
    );
    for f in csvs {
        s.push_str(&format!("    \"{f}\",\n"));
    }
    s.push_str(&format!(
        "]\n\nfor path in files:\n    with open(path, newline=\"\") as fh:\n        rows = list(csv.reader(fh))\n    xs = [float(r[0]) for r in rows[1:]]\n    ys = [float(r[1]) for r in rows[1:]]\n    plt.plot(xs, ys, label=path)\nplt.xlabel(\"{x_label}\")\nplt.ylabel(\"{y_label}\")\nplt.legend()\nplt.grid(True)\nplt.savefig(\"{out_png}\", dpi=150)\n"
    ));
    s
}

/// Heat-map companion script for the 2-D spectrum CSVs.
pub fn spectrum_plot_script(csvs: &[String]) -> String {
    let mut s = String::from(
        "#!/usr/bin/env python3\nimport csv\nimport matplotlib.pyplot as plt\n\nfiles = [\n",
    );
    for f in csvs {
        s.push_str(&format!("    \"{f}\",\n"));
    }
    s.push_str(
        "]\n\nfor path in files:\n    with open(path, newline=\"\") as fh:\n        rows = list(csv.reader(fh))\n    grid = [[float(v) for v in r[1:]] for r in rows[1:]]\n    plt.figure()\n    plt.imshow(grid, origin=\"lower\", aspect=\"auto\",\n               extent=(-0.5, 0.5, -0.5, 0.5), vmin=-60, vmax=0)\n    plt.xlabel(\"normalized spatial frequency\")\n    plt.ylabel(\"normalized Doppler\")\n    plt.colorbar(label=\"dB\")\n    plt.title(path)\n    plt.savefig(path.replace(\".csv\", \".png\"), dpi=150)\n",
    );
    s
}

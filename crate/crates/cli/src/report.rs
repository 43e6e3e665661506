//! Report formats: the sweep CSV schema, float formatting, plot-data files,
//! and a raw binary dump of solution fields.
//!
//! Every writer here is deterministic: identical inputs produce identical
//! bytes, so reruns of an experiment can be compared with `cmp`.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use curl_homog_core::field::EdgeField;

use crate::CliError;

/// Column schema of the sweep table. The order is load-bearing: downstream
/// tooling indexes columns by this exact header line.
pub const CSV_HEADER: &str =
    "family_A,family_B,eps,h,p,norm_u,norm_curl_u,norm_F,norm_G,norm_f,norm_divf,ratio,iters,seconds";

/// Render a float with 17 significant digits so that reading it back
/// reproduces the same bit pattern.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Human-readable label for a Lebesgue exponent: `2`, `4`, `2.5`, or `inf`.
pub fn p_label(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else if p.fract() == 0.0 && p.abs() < 1e15 {
        format!("{}", p as i64)
    } else {
        format!("{p}")
    }
}

/// One line of the sweep table.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub family_a: String,
    pub family_b: String,
    pub eps: f64,
    pub h: f64,
    pub p: f64,
    pub norm_u: f64,
    pub norm_curl_u: f64,
    pub norm_f: f64,
    pub norm_g: f64,
    pub norm_trace: f64,
    pub norm_divtrace: f64,
    pub ratio: f64,
    pub iters: usize,
    pub seconds: f64,
}

impl SweepRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.family_a,
            self.family_b,
            fmt_float(self.eps),
            fmt_float(self.h),
            p_label(self.p),
            fmt_float(self.norm_u),
            fmt_float(self.norm_curl_u),
            fmt_float(self.norm_f),
            fmt_float(self.norm_g),
            fmt_float(self.norm_trace),
            fmt_float(self.norm_divtrace),
            fmt_float(self.ratio),
            self.iters,
            fmt_float(self.seconds),
        )
    }
}

/// Write `content` to `dir/name`, creating `dir` as needed.
pub fn write_text(dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let mut f = fs::File::create(dir.join(name))?;
    f.write_all(content.as_bytes())?;
    Ok(())
}

/// Write raw bytes to `dir/name`, creating `dir` as needed.
pub fn write_bytes(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let mut f = fs::File::create(dir.join(name))?;
    f.write_all(bytes)?;
    Ok(())
}

/// Two-column whitespace-separated plot data (e.g. eps vs ratio).
pub fn two_column(rows: &[(f64, f64)]) -> String {
    let mut s = String::new();
    for (a, b) in rows {
        s.push_str(&fmt_float(*a));
        s.push(' ');
        s.push_str(&fmt_float(*b));
        s.push('\n');
    }
    s
}

/// Raw little-endian dump of an edge field: three u64 cell counts, a u64
/// length, then the degrees of freedom in storage order.
pub fn edge_field_bytes(u: &EdgeField) -> Vec<u8> {
    let dims = u.grid().cells();
    let mut bytes = Vec::with_capacity(32 + 8 * u.len());
    for d in dims {
        bytes.extend_from_slice(&(d as u64).to_le_bytes());
    }
    bytes.extend_from_slice(&(u.len() as u64).to_le_bytes());
    for v in u.data() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    bytes
}

//! Tabulated exchange couplings J(separation) and the fractional errors they
//! imply for a gate calibrated to the target row.
//!
//! File format (CSV, `#` comments):
//!
//! ```text
//! # direction=[100]
//! # bias=0V
//! separation_nm,J_ueV,tag
//! 20.634,0.132,target
//! 21.72,0.0673,anchor
//! ```
//!
//! Exactly one row carries the tag `target`; its coupling is J₀. The tag
//! column is optional for other rows.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pulse::{build_cnot, cnot_sequence_error, ErrorModel};

pub const TARGET_TAG: &str = "target";

const SAMPLE: &str = include_str!("../data/exchange_100.csv");

#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeRow {
    pub separation_nm: f64,
    pub j_uev: f64,
    pub tag: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeTable {
    rows: Vec<ExchangeRow>,
    target: usize,
    direction: Option<String>,
    bias: Option<String>,
}

impl ExchangeTable {
    /// Validates ordering and positivity, and designates the row at
    /// `target_separation_nm` (exact match) as the target.
    pub fn new(
        mut rows: Vec<ExchangeRow>,
        target_separation_nm: f64,
        direction: Option<String>,
        bias: Option<String>,
    ) -> Result<Self> {
        validate_rows(&rows, |i| i + 1)?;
        let target = rows
            .iter()
            .position(|r| r.separation_nm == target_separation_nm)
            .ok_or_else(|| {
                Error::invalid(format!("no row at target separation {target_separation_nm} nm"))
            })?;
        for (i, r) in rows.iter_mut().enumerate() {
            if i == target {
                r.tag = Some(TARGET_TAG.to_owned());
            } else if r.tag.as_deref() == Some(TARGET_TAG) {
                r.tag = None;
            }
        }
        Ok(ExchangeTable {
            rows,
            target,
            direction,
            bias,
        })
    }

    pub fn rows(&self) -> &[ExchangeRow] {
        &self.rows
    }

    pub fn target(&self) -> &ExchangeRow {
        &self.rows[self.target]
    }

    pub fn target_index(&self) -> usize {
        self.target
    }

    /// J₀.
    pub fn target_coupling(&self) -> f64 {
        self.target().j_uev
    }

    pub fn direction(&self) -> Option<&str> {
        self.direction.as_deref()
    }

    pub fn bias(&self) -> Option<&str> {
        self.bias.as_deref()
    }

    /// Every coupling (J₀ included) multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        let mut t = self.clone();
        t.rows.iter_mut().for_each(|r| r.j_uev *= factor);
        validate_rows(&t.rows, |i| i + 1)?;
        Ok(t)
    }
}

fn validate_rows(rows: &[ExchangeRow], line_of: impl Fn(usize) -> usize) -> Result<()> {
    if rows.len() < 2 {
        return Err(Error::format(line_of(rows.len()), "need at least two rows"));
    }
    for (i, r) in rows.iter().enumerate() {
        if !r.separation_nm.is_finite() {
            return Err(Error::format(line_of(i), "separation must be finite"));
        }
        if !(r.j_uev > 0.0 && r.j_uev.is_finite()) {
            return Err(Error::format(line_of(i), format!("coupling {} must be positive", r.j_uev)));
        }
        if i > 0 && r.separation_nm <= rows[i - 1].separation_nm {
            return Err(Error::format(
                line_of(i),
                format!(
                    "separation {} does not increase past {}",
                    r.separation_nm,
                    rows[i - 1].separation_nm
                ),
            ));
        }
    }
    Ok(())
}

pub fn load_table(path: impl AsRef<Path>) -> Result<ExchangeTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_table(&text)
}

/// The bundled [100] sample table.
pub fn sample_table() -> ExchangeTable {
    parse_table(SAMPLE).expect("bundled table is valid")
}

pub fn sample_table_text() -> &'static str {
    SAMPLE
}

pub fn parse_table(text: &str) -> Result<ExchangeTable> {
    let mut direction = None;
    let mut bias = None;
    for line in text.lines() {
        let Some(comment) = line.trim().strip_prefix('#') else { continue };
        if let Some((k, v)) = comment.trim().split_once('=') {
            match k.trim() {
                "direction" => direction = Some(v.trim().to_owned()),
                "bias" => bias = Some(v.trim().to_owned()),
                _ => {}
            }
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header_line = reader.position().line();
    let headers = reader
        .headers()
        .map_err(|e| Error::format(header_line.max(1) as usize, e.to_string()))?
        .clone();
    let cols: Vec<&str> = headers.iter().collect();
    if cols.len() < 2 || cols[0] != "separation_nm" || cols[1] != "J_ueV" {
        return Err(Error::format(1, "header must start with `separation_nm,J_ueV`"));
    }

    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::format(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() < 2 || record.len() > 3 {
            return Err(Error::format(line, "expected `separation_nm,J_ueV[,tag]`"));
        }
        let num = |i: usize, what: &str| -> Result<f64> {
            record[i]
                .parse()
                .map_err(|_| Error::format(line, format!("bad {what} `{}`", &record[i])))
        };
        rows.push(ExchangeRow {
            separation_nm: num(0, "separation")?,
            j_uev: num(1, "coupling")?,
            tag: record.get(2).filter(|t| !t.is_empty()).map(str::to_owned),
        });
        lines.push(line);
    }
    let last_line = lines.last().copied().unwrap_or(1);
    validate_rows(&rows, |i| lines.get(i).copied().unwrap_or(last_line))?;

    let targets: Vec<usize> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.tag.as_deref() == Some(TARGET_TAG))
        .map(|(i, _)| i)
        .collect();
    let target = match targets.as_slice() {
        [t] => *t,
        [] => return Err(Error::format(last_line, "no row is tagged `target`")),
        [_, second, ..] => {
            return Err(Error::format(lines[*second], "more than one row is tagged `target`"))
        }
    };
    Ok(ExchangeTable {
        rows,
        target,
        direction,
        bias,
    })
}

/// Serializes in the format [`parse_table`] reads; floats use shortest
/// round-trip form so the table reloads unchanged.
pub fn write_table(table: &ExchangeTable) -> String {
    let mut out = String::new();
    if let Some(d) = &table.direction {
        let _ = writeln!(out, "# direction={d}");
    }
    if let Some(b) = &table.bias {
        let _ = writeln!(out, "# bias={b}");
    }
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let has_tags = table.rows.iter().any(|r| r.tag.is_some());
    if has_tags {
        w.write_record(["separation_nm", "J_ueV", "tag"]).expect("in-memory write");
    } else {
        w.write_record(["separation_nm", "J_ueV"]).expect("in-memory write");
    }
    for r in &table.rows {
        let mut rec = vec![r.separation_nm.to_string(), r.j_uev.to_string()];
        if has_tags {
            rec.push(r.tag.clone().unwrap_or_default());
        }
        w.write_record(&rec).expect("in-memory write");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"));
    out
}

/// Δ₀ = J/J₀ − 1.
pub fn delta0(j_uev: f64, j0_uev: f64) -> Result<f64> {
    if !(j0_uev > 0.0) {
        return Err(Error::invalid(format!("target coupling {j0_uev} must be positive")));
    }
    Ok(j_uev / j0_uev - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationPoint {
    pub separation_nm: f64,
    pub j_uev: f64,
    pub delta0: f64,
    pub level: u32,
    pub error: f64,
}

/// CNOT error for every row when the gate is calibrated to J₀.
///
/// Rows with |Δ₀| ≥ 1 are evaluated like any other.
pub fn fidelity_vs_separation(table: &ExchangeTable, level: u32, nr: u32) -> Result<Vec<SeparationPoint>> {
    let seq = build_cnot(level, nr)?;
    let j0 = table.target_coupling();
    table
        .rows
        .iter()
        .map(|r| {
            let d = delta0(r.j_uev, j0)?;
            Ok(SeparationPoint {
                separation_nm: r.separation_nm,
                j_uev: r.j_uev,
                delta0: d,
                level,
                error: cnot_sequence_error(&seq, ErrorModel::new(d)?),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_anchors() {
        let t = sample_table();
        assert_eq!(t.target().separation_nm, 20.634);
        assert_eq!(t.target_coupling(), 0.132);
        assert_eq!(t.direction(), Some("[100]"));
        let anchor = t.rows().iter().find(|r| r.separation_nm == 21.72).unwrap();
        let d = delta0(anchor.j_uev, t.target_coupling()).unwrap();
        assert!((d + 0.49).abs() < 1e-3, "{d}");
        // one site is 1.086 nm
        for w in t.rows().windows(2) {
            assert!((w[1].separation_nm - w[0].separation_nm - 1.086).abs() < 1e-9);
        }
    }

    #[test]
    fn delta0_values() {
        assert_eq!(delta0(0.132, 0.132).unwrap(), 0.0);
        assert_eq!(delta0(0.264, 0.132).unwrap(), 1.0);
        assert!((delta0(0.51 * 0.132, 0.132).unwrap() + 0.49).abs() < 1e-12);
        assert!(delta0(1.0, 0.0).is_err());
        assert!(delta0(1.0, -0.1).is_err());
    }

    #[test]
    fn rejects_non_positive_coupling() {
        let text = "separation_nm,J_ueV,tag\n1.0,0.1,target\n2.0,0.0,\n";
        let e = parse_table(text).unwrap_err();
        assert!(matches!(e, Error::Format { line: 3, .. }), "{e}");
    }

    #[test]
    fn rejects_unsorted_or_duplicate() {
        let text = "separation_nm,J_ueV,tag\n2.0,0.1,target\n1.0,0.2,\n";
        assert!(matches!(parse_table(text), Err(Error::Format { line: 3, .. })));
        let text = "separation_nm,J_ueV,tag\n1.0,0.1,target\n1.0,0.2,\n";
        assert!(matches!(parse_table(text), Err(Error::Format { line: 3, .. })));
    }

    #[test]
    fn rejects_missing_or_double_target() {
        let text = "separation_nm,J_ueV\n1.0,0.1\n2.0,0.2\n";
        assert!(matches!(parse_table(text), Err(Error::Format { .. })));
        let text = "separation_nm,J_ueV,tag\n1.0,0.1,target\n2.0,0.2,target\n";
        assert!(matches!(parse_table(text), Err(Error::Format { line: 3, .. })));
    }

    #[test]
    fn rejects_bad_header_and_short_tables() {
        assert!(parse_table("sep,J\n1,2,target\n3,4\n").is_err());
        assert!(parse_table("separation_nm,J_ueV,tag\n1.0,0.1,target\n").is_err());
        let e = parse_table("separation_nm,J_ueV,tag\n1.0,abc,target\n2,1\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 2, .. }), "{e}");
    }

    #[test]
    fn load_reports_path() {
        let e = load_table("/nonexistent/table.csv").unwrap_err();
        assert!(e.to_string().contains("/nonexistent/table.csv"));
    }

    #[test]
    fn new_designates_target() {
        let rows = sample_table().rows().to_vec();
        let t = ExchangeTable::new(rows.clone(), 21.72, None, None).unwrap();
        assert_eq!(t.target_coupling(), 0.0673);
        assert_eq!(t.rows().iter().filter(|r| r.tag.as_deref() == Some(TARGET_TAG)).count(), 1);
        assert!(ExchangeTable::new(rows, 21.7, None, None).is_err());
    }

    #[test]
    fn separation_sweep_target_is_exact() {
        let t = sample_table();
        for level in 0..=1 {
            let pts = fidelity_vs_separation(&t, level, 8).unwrap();
            assert_eq!(pts.len(), t.rows().len());
            assert!(pts[t.target_index()].error < 1e-12);
        }
    }
}

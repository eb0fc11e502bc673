//! CSV documents with leading `#` comment lines and fixed float formatting.

use std::path::Path;

use crate::error::{CliError, CliResult};

/// `%.10g`: 10 significant digits, trailing zeros dropped, exponent form
/// outside [1e-4, 1e10).
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..10).contains(&exp) {
        let fixed = format!("{:.*}", (9 - exp) as usize, x);
        trim_fraction(&fixed).to_owned()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvDoc {
    comments: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvDoc {
    pub fn new(params: &str, header: &[&str]) -> Self {
        CsvDoc {
            comments: vec![format!("params: {params}")],
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"));
        out
    }

    pub fn write_to(&self, path: &Path) -> CliResult<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        std::fs::write(path, self.render()).map_err(|e| CliError::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(fmt_float(3.92), "3.92");
        assert_eq!(fmt_float(2.0 * 1272.04), "2544.08");
        assert_eq!(fmt_float(35.28 + 1e-13), "35.28");
        assert_eq!(fmt_float(180.0), "180");
        assert_eq!(fmt_float(-0.49), "-0.49");
        assert_eq!(fmt_float(1e-4), "0.0001");
        assert_eq!(fmt_float(1.25e-5), "1.25e-05");
        assert_eq!(fmt_float(3.0842512177e-7), "3.084251218e-07");
        assert_eq!(fmt_float(1.5e12), "1.5e+12");
        assert_eq!(fmt_float(9.99999999999), "10");
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(f64::INFINITY), "inf");
    }

    #[test]
    fn document_layout() {
        let mut d = CsvDoc::new("a=1", &["x", "y"]);
        d.comment("note");
        d.push(vec!["1".into(), "2".into()]);
        assert_eq!(d.render(), "# params: a=1\n# note\nx,y\n1,2\n");
    }
}

//! Line-oriented text form of a [`PulseSeq`].
//!
//! ```text
//! # level 1 nr 8 target_angle 1.5707963267948966
//! SQ target H 3.141592653589793
//! PAR 2
//! SQ control Z -1.5707963267948966
//! SQ target Z -1.5707963267948966
//! EV 0.39269908169872414
//! ```
//!
//! Angles are radians written in shortest round-trip form, so parsing the
//! output of [`write_seq`] reproduces the sequence bit for bit. Other `#`
//! lines and blank lines are ignored.

use std::fmt::Write as _;

use super::{PulseSeq, PulseStep, SingleQubitRotation};
use crate::error::{Error, Result};

pub fn write_seq(seq: &PulseSeq) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# level {} nr {} target_angle {}",
        seq.level(),
        seq.nr(),
        seq.target_angle()
    );
    for step in seq.steps() {
        match step {
            PulseStep::Single(r) => write_single(&mut out, r),
            PulseStep::Evolution { zz_angle } => {
                let _ = writeln!(out, "EV {zz_angle}");
            }
            PulseStep::Parallel(members) => {
                let _ = writeln!(out, "PAR {}", members.len());
                for r in members {
                    write_single(&mut out, r);
                }
            }
        }
    }
    out
}

fn write_single(out: &mut String, r: &SingleQubitRotation) {
    let _ = writeln!(out, "SQ {} {} {}", r.qubit, r.axis, r.angle);
}

pub fn parse_seq(input: &str) -> Result<PulseSeq> {
    let mut steps = Vec::new();
    let mut meta: Option<(u32, u32, f64)> = None;
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

    while let Some((no, line)) = lines.next() {
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(m) = parse_meta(comment) {
                meta = Some(m.map_err(|e| Error::format(no, e))?);
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "SQ" => steps.push(PulseStep::Single(parse_single(no, &fields)?)),
            "EV" => {
                if fields.len() != 2 {
                    return Err(Error::format(no, "EV takes one angle"));
                }
                steps.push(PulseStep::Evolution {
                    zz_angle: parse_f64(no, fields[1])?,
                });
            }
            "PAR" => {
                if fields.len() != 2 {
                    return Err(Error::format(no, "PAR takes a member count"));
                }
                let k: usize = fields[1]
                    .parse()
                    .map_err(|_| Error::format(no, format!("bad member count `{}`", fields[1])))?;
                let mut members = Vec::with_capacity(k);
                for _ in 0..k {
                    let (no, line) = lines
                        .next()
                        .ok_or_else(|| Error::format(no, "parallel group truncated"))?;
                    let fields: Vec<&str> = line.split_whitespace().collect();
                    members.push(parse_single(no, &fields)?);
                }
                steps.push(PulseStep::Parallel(members));
            }
            other => return Err(Error::format(no, format!("unknown step kind `{other}`"))),
        }
    }

    let (level, nr, target_angle) = match meta {
        Some(m) => m,
        None => {
            let total = steps
                .iter()
                .map(|s| match s {
                    PulseStep::Evolution { zz_angle } => *zz_angle,
                    _ => 0.0,
                })
                .sum();
            (0, 1, total)
        }
    };
    PulseSeq::new(steps, target_angle, level, nr)
}

/// `Some` if the comment is a metadata line; the inner result reports bad values.
fn parse_meta(comment: &str) -> Option<std::result::Result<(u32, u32, f64), String>> {
    let f: Vec<&str> = comment.split_whitespace().collect();
    if f.first() != Some(&"level") {
        return None;
    }
    if f.len() != 6 || f[2] != "nr" || f[4] != "target_angle" {
        return Some(Err("metadata must read `level L nr N target_angle A`".into()));
    }
    let parsed = (|| {
        Some((
            f[1].parse().ok()?,
            f[3].parse().ok()?,
            f[5].parse().ok()?,
        ))
    })();
    Some(parsed.ok_or_else(|| format!("bad metadata values in `{}`", comment.trim())))
}

fn parse_single(no: usize, fields: &[&str]) -> Result<SingleQubitRotation> {
    if fields.len() != 4 || fields[0] != "SQ" {
        return Err(Error::format(no, "expected `SQ <qubit> <axis> <angle>`"));
    }
    let qubit = fields[1].parse().map_err(|e: Error| Error::format(no, e.to_string()))?;
    let axis = fields[2].parse().map_err(|e: Error| Error::format(no, e.to_string()))?;
    Ok(SingleQubitRotation::new(qubit, axis, parse_f64(no, fields[3])?))
}

fn parse_f64(no: usize, s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::format(no, format!("bad number `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::{build_cnot, build_level};

    #[test]
    fn cnot_round_trips() {
        for level in 0..=2 {
            let seq = build_cnot(level, 4).unwrap();
            assert_eq!(parse_seq(&write_seq(&seq)).unwrap(), seq);
        }
    }

    #[test]
    fn header_line_format() {
        let text = write_seq(&build_level(1.0, 0, 1).unwrap());
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# level 0 nr 1 target_angle 1"));
        assert_eq!(lines.next(), Some("EV 0.5"));
        assert_eq!(lines.next(), Some("SQ control Z 3.141592653589793"));
    }

    #[test]
    fn bad_lines_report_line_numbers() {
        let e = parse_seq("EV 0.5\nFOO 1\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 2, .. }), "{e}");
        let e = parse_seq("PAR 2\nSQ control Z 1\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 1, .. }), "{e}");
        let e = parse_seq("SQ middle Z 1\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 1, .. }), "{e}");
        let e = parse_seq("# level x nr 1 target_angle 1\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 1, .. }), "{e}");
    }

    #[test]
    fn missing_metadata_defaults() {
        let seq = parse_seq("# hand written\nEV 0.25\nEV 0.5\n").unwrap();
        assert_eq!(seq.level(), 0);
        assert_eq!(seq.nr(), 1);
        assert_eq!(seq.target_angle(), 0.75);
    }

    #[test]
    fn invariants_checked_on_parse() {
        assert!(parse_seq("EV -0.5\n").is_err());
        assert!(parse_seq("PAR 2\nSQ target Z 1\nSQ target X 1\n").is_err());
    }
}

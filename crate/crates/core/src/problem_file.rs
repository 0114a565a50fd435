//! Line-oriented problem files.
//!
//! ```text
//! [timescale]
//! interval 0 1
//! points 2
//!
//! [problem]
//! u = 1
//! L = v^2
//! alpha = 0
//! beta = 1
//! h = 1e-3          # optional
//!
//! [constraint]      # optional
//! w = 1
//! G = y
//! K = 0.16666666666666666
//! ```
//!
//! `#` starts a comment. Keys are unique within a section; numbers are
//! decimal literals and expressions use the Lagrangian grammar.

use std::collections::HashMap;

use thiserror::Error;

use crate::error::Result;
use crate::lagrangian::Lagrangian;
use crate::timescale::TimeScale;
use crate::variational::{IsoProblem, Problem};

pub const DEFAULT_H: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ProblemFileError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> std::result::Result<T, ProblemFileError> {
    Err(ProblemFileError { line, message: message.into() })
}

#[derive(Debug, Clone)]
pub struct ConstraintSpec {
    pub w: f64,
    pub g: Lagrangian,
    pub k: f64,
}

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub scale: TimeScale,
    pub u: f64,
    pub lagrangian: Lagrangian,
    pub alpha: f64,
    pub beta: f64,
    pub h: Option<f64>,
    pub constraint: Option<ConstraintSpec>,
}

#[derive(Default)]
struct Section {
    header_line: usize,
    lines: Vec<(usize, String)>,
}

fn key_values(
    section: &Section,
    allowed: &[&str],
) -> std::result::Result<HashMap<String, (usize, String)>, ProblemFileError> {
    let mut map = HashMap::new();
    for (line, text) in &section.lines {
        let Some((key, value)) = text.split_once('=') else {
            return err(*line, format!("expected 'key = value', found '{text}'"));
        };
        let key = key.trim();
        if !allowed.contains(&key) {
            return err(*line, format!("unknown key '{key}' (expected one of {})", allowed.join(", ")));
        }
        if map.insert(key.to_string(), (*line, value.trim().to_string())).is_some() {
            return err(*line, format!("duplicate key '{key}'"));
        }
    }
    Ok(map)
}

fn required<'m>(
    map: &'m HashMap<String, (usize, String)>,
    key: &str,
    section: &str,
    header_line: usize,
) -> std::result::Result<&'m (usize, String), ProblemFileError> {
    map.get(key).ok_or_else(|| ProblemFileError {
        line: header_line,
        message: format!("section [{section}] is missing key '{key}'"),
    })
}

fn number(entry: &(usize, String), key: &str) -> std::result::Result<f64, ProblemFileError> {
    match entry.1.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => err(entry.0, format!("'{key}' must be a finite decimal number, found '{}'", entry.1)),
    }
}

fn expression(entry: &(usize, String), key: &str) -> std::result::Result<Lagrangian, ProblemFileError> {
    entry.1.parse::<Lagrangian>().or_else(|e| err(entry.0, format!("in '{key}': {e}")))
}

/// Extracts only the `[timescale]` section; a file with no section headers
/// is read as a bare time-scale literal.
pub fn parse_timescale(text: &str) -> std::result::Result<TimeScale, ProblemFileError> {
    let sections = split_sections(text)?;
    if sections.is_empty() {
        return scale_from_lines(&Section { header_line: 1, lines: bare_lines(text) });
    }
    match sections.get("timescale") {
        Some(s) => scale_from_lines(s),
        None => err(1, "missing [timescale] section"),
    }
}

fn bare_lines(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).to_string()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn split_sections(text: &str) -> std::result::Result<HashMap<String, Section>, ProblemFileError> {
    let mut sections: HashMap<String, Section> = HashMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = strip_comment(raw);
        if l.is_empty() {
            continue;
        }
        if let Some(name) = l.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return err(line, format!("malformed section header '{l}'"));
            };
            let name = name.trim().to_string();
            if !matches!(name.as_str(), "timescale" | "problem" | "constraint") {
                return err(line, format!("unknown section [{name}]"));
            }
            if sections.contains_key(&name) {
                return err(line, format!("duplicate section [{name}]"));
            }
            sections.insert(name.clone(), Section { header_line: line, lines: Vec::new() });
            current = Some(name);
            continue;
        }
        match &current {
            Some(name) => sections.get_mut(name).expect("section exists").lines.push((line, l.to_string())),
            None if sections.is_empty() && !text.contains('[') => {}
            None => return err(line, "content before the first section header"),
        }
    }
    Ok(sections)
}

fn scale_from_lines(section: &Section) -> std::result::Result<TimeScale, ProblemFileError> {
    for (line, text) in &section.lines {
        if let Err(e) = text.parse::<TimeScale>() {
            return err(*line, e.to_string());
        }
    }
    let joined: Vec<&str> = section.lines.iter().map(|(_, l)| l.as_str()).collect();
    joined.join("\n").parse::<TimeScale>().or_else(|e| err(section.header_line, e.to_string()))
}

impl ProblemFile {
    pub fn parse(text: &str) -> std::result::Result<Self, ProblemFileError> {
        let sections = split_sections(text)?;
        let Some(ts) = sections.get("timescale") else {
            return err(1, "missing [timescale] section");
        };
        let Some(ps) = sections.get("problem") else {
            return err(1, "missing [problem] section");
        };
        let scale = scale_from_lines(ts)?;

        let map = key_values(ps, &["u", "L", "alpha", "beta", "h"])?;
        let u_entry = required(&map, "u", "problem", ps.header_line)?;
        let u = number(u_entry, "u")?;
        if u == 0.0 {
            return err(
                u_entry.0,
                "u = 0 makes the functional constant: there is nothing to minimize or maximize, \
                 any y with y(a) = alpha and y(b) = beta is a solution",
            );
        }
        let lagrangian = expression(required(&map, "L", "problem", ps.header_line)?, "L")?;
        let alpha = number(required(&map, "alpha", "problem", ps.header_line)?, "alpha")?;
        let beta = number(required(&map, "beta", "problem", ps.header_line)?, "beta")?;
        let h = match map.get("h") {
            Some(e) => {
                let h = number(e, "h")?;
                if !(h > 0.0) {
                    return err(e.0, format!("'h' must be positive, found {h}"));
                }
                Some(h)
            }
            None => None,
        };

        let constraint = match sections.get("constraint") {
            None => None,
            Some(cs) => {
                let map = key_values(cs, &["w", "G", "K"])?;
                let w_entry = required(&map, "w", "constraint", cs.header_line)?;
                let w = number(w_entry, "w")?;
                if w == 0.0 {
                    return err(w_entry.0, "w must be nonzero");
                }
                Some(ConstraintSpec {
                    w,
                    g: expression(required(&map, "G", "constraint", cs.header_line)?, "G")?,
                    k: number(required(&map, "K", "constraint", cs.header_line)?, "K")?,
                })
            }
        };

        Ok(Self { scale, u, lagrangian, alpha, beta, h, constraint })
    }

    /// Discretization step: explicit override, else the file's `h`, else [`DEFAULT_H`].
    pub fn step(&self, h_override: Option<f64>) -> f64 {
        h_override.or(self.h).unwrap_or(DEFAULT_H)
    }

    pub fn problem(&self, h_override: Option<f64>) -> Result<Problem> {
        Problem::new(self.scale.clone(), self.u, self.lagrangian.clone(), self.alpha, self.beta, self.step(h_override))
    }

    pub fn iso_problem(&self, h_override: Option<f64>) -> Result<Option<IsoProblem>> {
        let Some(c) = &self.constraint else {
            return Ok(None);
        };
        Ok(Some(IsoProblem::new(self.problem(h_override)?, c.g.clone(), c.w, c.k)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLASSICAL: &str = "\
# straight line
[timescale]
interval 0 1

[problem]
u = 1
L = v^2
alpha = 0
beta = 1
";

    #[test]
    fn parses_classical_file() {
        let f = ProblemFile::parse(CLASSICAL).unwrap();
        assert_eq!(f.u, 1.0);
        assert_eq!(f.lagrangian.source(), "v^2");
        assert_eq!((f.alpha, f.beta), (0.0, 1.0));
        assert_eq!(f.step(None), DEFAULT_H);
        assert_eq!(f.step(Some(0.5)), 0.5);
        assert!(f.constraint.is_none());
        assert_eq!(f.problem(Some(0.25)).unwrap().grid().len(), 5);
    }

    #[test]
    fn parses_constraint() {
        let text = format!("{CLASSICAL}h = 0.01\n[constraint]\nw = -1\nG = y\nK = 0.5\n");
        let f = ProblemFile::parse(&text).unwrap();
        let c = f.constraint.as_ref().unwrap();
        assert_eq!((c.w, c.k), (-1.0, 0.5));
        assert_eq!(f.step(None), 0.01);
        assert!(f.iso_problem(None).unwrap().is_some());
    }

    #[test]
    fn zero_direction_cites_the_trivial_case() {
        let e = ProblemFile::parse(&CLASSICAL.replace("u = 1", "u = 0")).unwrap_err();
        assert_eq!(e.line, 6);
        assert!(e.message.contains("nothing to minimize or maximize"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = ProblemFile::parse(&CLASSICAL.replace("L = v^2", "L = v^")).unwrap_err();
        assert_eq!(e.line, 7);
        let e = ProblemFile::parse(&CLASSICAL.replace("alpha = 0", "alpha = zero")).unwrap_err();
        assert_eq!(e.line, 8);
        let e = ProblemFile::parse(&format!("{CLASSICAL}beta = 2\n")).unwrap_err();
        assert_eq!(e.line, 10);
        assert!(e.message.contains("duplicate"));
        let e = ProblemFile::parse(&CLASSICAL.replace("interval 0 1", "interval 0")).unwrap_err();
        assert_eq!(e.line, 3);
        let e = ProblemFile::parse(&CLASSICAL.replace("beta = 1\n", "")).unwrap_err();
        assert!(e.message.contains("missing key 'beta'"));
        let e = ProblemFile::parse(&format!("{CLASSICAL}[problem]\n")).unwrap_err();
        assert!(e.message.contains("duplicate section"));
        let e = ProblemFile::parse("[problem]\nu = 1\n").unwrap_err();
        assert!(e.message.contains("[timescale]"));
        let e = ProblemFile::parse(&CLASSICAL.replace("u = 1", "speed = 1")).unwrap_err();
        assert!(e.message.contains("unknown key"));
    }

    #[test]
    fn bare_timescale_files() {
        let t = parse_timescale("interval 0 1\npoints 2\n").unwrap();
        assert_eq!(t.b(), 2.0);
        let t = parse_timescale(CLASSICAL).unwrap();
        assert_eq!(t.b(), 1.0);
        assert_eq!(parse_timescale("points 0 x").unwrap_err().line, 1);
    }
}

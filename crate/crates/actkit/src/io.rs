//! Text file formats: monoids (Cayley tables), acts (action tables with a
//! monoid reference), equation systems (over an act reference), and
//! congruence dumps. Parsing is strict; every error names the offending
//! line. Serializers and parsers round-trip.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::act::FiniteAct;
use crate::congruence::ActCongruence;
use crate::equation::{EqSystem, Equation};
use crate::monoid::FiniteMonoid;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}:{line}: {msg}")]
    Format {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("{path}: {msg}")]
    Invalid { path: String, msg: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl IoError {
    pub fn is_format(&self) -> bool {
        matches!(self, IoError::Format { .. } | IoError::Io { .. })
    }
}

fn fmt_err(path: &str, line: usize, msg: impl Into<String>) -> IoError {
    IoError::Format {
        path: path.to_string(),
        line,
        msg: msg.into(),
    }
}

/// Content lines with their 1-based line numbers; `#` starts a comment
/// (whole-line or trailing), blank lines are skipped.
fn content_lines(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let stripped = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let trimmed = stripped.trim();
            if trimmed.is_empty() {
                None
            } else {
                Some((i + 1, trimmed.to_string()))
            }
        })
        .collect()
}

fn parse_index(token: &str, path: &str, line: usize, what: &str) -> Result<usize, IoError> {
    token
        .parse::<usize>()
        .map_err(|_| fmt_err(path, line, format!("expected {what}, found `{token}`")))
}

fn read_to_string(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses a monoid file: `monoid <m> identity <e>` then m rows of m
/// space-separated indices. `origin` names the file in diagnostics.
pub fn parse_monoid(text: &str, origin: &str) -> Result<FiniteMonoid, IoError> {
    let lines = content_lines(text);
    let (hline, header) = lines
        .first()
        .ok_or_else(|| fmt_err(origin, 1, "empty file, expected `monoid <m> identity <e>`"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "monoid" || tokens[2] != "identity" {
        return Err(fmt_err(
            origin,
            *hline,
            "expected header `monoid <m> identity <e>`",
        ));
    }
    let m = parse_index(tokens[1], origin, *hline, "monoid size")?;
    let e = parse_index(tokens[3], origin, *hline, "identity index")?;
    if lines.len() != m + 1 {
        let last = lines.last().map(|(l, _)| *l).unwrap_or(1);
        return Err(fmt_err(
            origin,
            last,
            format!("expected {m} table rows, found {}", lines.len() - 1),
        ));
    }
    let mut table = Vec::with_capacity(m * m);
    for (row, (lno, line)) in lines[1..].iter().enumerate() {
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != m {
            return Err(fmt_err(
                origin,
                *lno,
                format!("row {row} has {} entries, expected {m}", entries.len()),
            ));
        }
        for token in entries {
            table.push(parse_index(token, origin, *lno, "element index")?);
        }
    }
    FiniteMonoid::from_table(m, e, table).map_err(|e| IoError::Invalid {
        path: origin.to_string(),
        msg: e.to_string(),
    })
}

pub fn read_monoid(path: &Path) -> Result<FiniteMonoid, IoError> {
    parse_monoid(&read_to_string(path)?, &path.display().to_string())
}

pub fn monoid_to_string(m: &FiniteMonoid) -> String {
    let mut out = format!("monoid {} identity {}\n", m.size(), m.identity());
    for i in 0..m.size() {
        let row: Vec<String> = (0..m.size()).map(|j| m.mul(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses an act file against an already-loaded base monoid:
/// `act <a> over <monoid-file-path>` then a rows of m indices, then
/// optional `label <i> <name>` lines. Returns the act and the referenced
/// monoid path (unresolved, as written).
pub fn parse_act(
    text: &str,
    origin: &str,
    base: Arc<FiniteMonoid>,
) -> Result<(FiniteAct, String), IoError> {
    let lines = content_lines(text);
    let (hline, header) = lines
        .first()
        .ok_or_else(|| fmt_err(origin, 1, "empty file, expected `act <a> over <path>`"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "act" || tokens[2] != "over" {
        return Err(fmt_err(origin, *hline, "expected header `act <a> over <path>`"));
    }
    let a = parse_index(tokens[1], origin, *hline, "act size")?;
    let monoid_ref = tokens[3].to_string();
    let m = base.size();
    if lines.len() < a + 1 {
        let last = lines.last().map(|(l, _)| *l).unwrap_or(1);
        return Err(fmt_err(
            origin,
            last,
            format!("expected {a} table rows, found {}", lines.len() - 1),
        ));
    }
    let mut action = Vec::with_capacity(a * m);
    for (row, (lno, line)) in lines[1..=a].iter().enumerate() {
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != m {
            return Err(fmt_err(
                origin,
                *lno,
                format!("row {row} has {} entries, expected {m}", entries.len()),
            ));
        }
        for token in entries {
            action.push(parse_index(token, origin, *lno, "act element index")?);
        }
    }
    let mut act = FiniteAct::from_table(base, a, action).map_err(|e| IoError::Invalid {
        path: origin.to_string(),
        msg: e.to_string(),
    })?;
    for (lno, line) in &lines[a + 1..] {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 || tokens[0] != "label" {
            return Err(fmt_err(origin, *lno, "expected `label <i> <name>`"));
        }
        let i = parse_index(tokens[1], origin, *lno, "act element index")?;
        if i >= a {
            return Err(fmt_err(origin, *lno, format!("label index {i} out of range")));
        }
        act.set_label(i, tokens[2]);
    }
    Ok((act, monoid_ref))
}

/// Reads an act file, loading the referenced monoid relative to the act
/// file's directory (absolute references are used as-is).
pub fn read_act(path: &Path) -> Result<(FiniteAct, PathBuf), IoError> {
    let text = read_to_string(path)?;
    let origin = path.display().to_string();
    let lines = content_lines(&text);
    let (hline, header) = lines
        .first()
        .ok_or_else(|| fmt_err(&origin, 1, "empty file, expected `act <a> over <path>`"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "act" || tokens[2] != "over" {
        return Err(fmt_err(&origin, *hline, "expected header `act <a> over <path>`"));
    }
    let monoid_path = resolve_reference(path, tokens[3]);
    let base = Arc::new(read_monoid(&monoid_path)?);
    let (act, _) = parse_act(&text, &origin, base)?;
    Ok((act, monoid_path))
}

fn resolve_reference(from: &Path, reference: &str) -> PathBuf {
    let r = Path::new(reference);
    if r.is_absolute() {
        r.to_path_buf()
    } else {
        from.parent().unwrap_or_else(|| Path::new(".")).join(r)
    }
}

pub fn act_to_string(act: &FiniteAct, monoid_ref: &str) -> String {
    let m = act.base().size();
    let mut out = format!("act {} over {}\n", act.size(), monoid_ref);
    for i in 0..act.size() {
        let row: Vec<String> = (0..m).map(|s| act.act(i, s).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    for (i, label) in act.labels().iter().enumerate() {
        if let Some(name) = label {
            out.push_str(&format!("label {i} {name}\n"));
        }
    }
    out
}

/// Resolves an act constant written either as an index or as a label.
fn resolve_constant(act: &FiniteAct, token: &str, origin: &str, line: usize) -> Result<usize, IoError> {
    if let Ok(i) = token.parse::<usize>() {
        return Ok(i);
    }
    act.labels()
        .iter()
        .position(|l| l.as_deref() == Some(token))
        .ok_or_else(|| fmt_err(origin, line, format!("unknown act element `{token}`")))
}

/// One side of an equation: `x.s` (variable dot monoid element) or `@a`.
enum Side {
    Var(usize, usize),
    Const(usize),
}

fn parse_side(
    token: &str,
    vars: &[String],
    act: &FiniteAct,
    origin: &str,
    line: usize,
) -> Result<Side, IoError> {
    if let Some(rest) = token.strip_prefix('@') {
        return Ok(Side::Const(resolve_constant(act, rest, origin, line)?));
    }
    let (v, s) = token.split_once('.').ok_or_else(|| {
        fmt_err(origin, line, format!("expected `x.s` or `@a`, found `{token}`"))
    })?;
    let x = vars
        .iter()
        .position(|name| name == v)
        .ok_or_else(|| fmt_err(origin, line, format!("unknown variable `{v}`")))?;
    let s = parse_index(s, origin, line, "monoid element index")?;
    Ok(Side::Var(x, s))
}

/// Parses a system file against an already-loaded act:
/// `system over <act-file> vars <x1> <x2> …` then one equation per line
/// (`x.s = y.t` or `x.s = @a`). Returns the system and the act reference.
pub fn parse_system(
    text: &str,
    origin: &str,
    act: Arc<FiniteAct>,
) -> Result<(EqSystem, String), IoError> {
    let lines = content_lines(text);
    let (hline, header) = lines.first().ok_or_else(|| {
        fmt_err(origin, 1, "empty file, expected `system over <act-file> vars …`")
    })?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() < 4 || tokens[0] != "system" || tokens[1] != "over" || tokens[3] != "vars" {
        return Err(fmt_err(
            origin,
            *hline,
            "expected header `system over <act-file> vars <x1> …`",
        ));
    }
    let act_ref = tokens[2].to_string();
    let vars: Vec<String> = tokens[4..].iter().map(|t| t.to_string()).collect();
    if vars.is_empty() {
        return Err(fmt_err(origin, *hline, "at least one variable required"));
    }
    let mut equations = Vec::new();
    for (lno, line) in &lines[1..] {
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| fmt_err(origin, *lno, "expected `<side> = <side>`"))?;
        let lhs = parse_side(lhs.trim(), &vars, &act, origin, *lno)?;
        let rhs = parse_side(rhs.trim(), &vars, &act, origin, *lno)?;
        let eq = match (lhs, rhs) {
            (Side::Var(x, s), Side::Var(y, t)) if x == y => Equation::vsame(x, s, t),
            (Side::Var(x, s), Side::Var(y, t)) => Equation::vv(x, s, y, t),
            (Side::Var(x, s), Side::Const(a)) | (Side::Const(a), Side::Var(x, s)) => {
                Equation::vc(x, s, a)
            }
            (Side::Const(_), Side::Const(_)) => {
                return Err(fmt_err(origin, *lno, "both sides are constants"))
            }
        };
        equations.push(eq);
    }
    let sys = EqSystem::new(act, vars, equations).map_err(|e| IoError::Invalid {
        path: origin.to_string(),
        msg: e.to_string(),
    })?;
    Ok((sys, act_ref))
}

/// Reads a system file, loading the referenced act (and its monoid)
/// relative to the system file's directory.
pub fn read_system(path: &Path) -> Result<(EqSystem, PathBuf), IoError> {
    let text = read_to_string(path)?;
    let origin = path.display().to_string();
    let lines = content_lines(&text);
    let (hline, header) = lines.first().ok_or_else(|| {
        fmt_err(&origin, 1, "empty file, expected `system over <act-file> vars …`")
    })?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() < 4 || tokens[0] != "system" || tokens[1] != "over" || tokens[3] != "vars" {
        return Err(fmt_err(
            &origin,
            *hline,
            "expected header `system over <act-file> vars <x1> …`",
        ));
    }
    let act_path = resolve_reference(path, tokens[2]);
    let (act, _) = read_act(&act_path)?;
    let (sys, _) = parse_system(&text, &origin, Arc::new(act))?;
    Ok((sys, act_path))
}

fn side_to_string(sys: &EqSystem, x: usize, s: usize) -> String {
    format!("{}.{}", sys.variables()[x], s)
}

fn const_to_string(sys: &EqSystem, a: usize) -> String {
    match sys.act().label(a) {
        Some(name) => format!("@{name}"),
        None => format!("@{a}"),
    }
}

pub fn system_to_string(sys: &EqSystem, act_ref: &str) -> String {
    let mut out = format!("system over {} vars {}\n", act_ref, sys.variables().join(" "));
    for eq in sys.equations() {
        let line = match *eq {
            Equation::VV { x, s, y, t } => format!(
                "{} = {}",
                side_to_string(sys, x, s),
                side_to_string(sys, y, t)
            ),
            Equation::VSameV { x, s, t } => format!(
                "{} = {}",
                side_to_string(sys, x, s),
                side_to_string(sys, x, t)
            ),
            Equation::VC { x, s, a } => {
                format!("{} = {}", side_to_string(sys, x, s), const_to_string(sys, a))
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Serializes a congruence: `classes`, one line per class with member
/// indices ascending, then `generators` with one `u v` pair per line.
pub fn congruence_to_string(c: &ActCongruence) -> String {
    let mut out = String::from("classes\n");
    for class in c.classes() {
        let row: Vec<String> = class.iter().map(|i| i.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.push_str("generators\n");
    for &(u, v) in c.generators() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses a congruence dump back into (classes, generators).
pub fn parse_congruence_dump(
    text: &str,
    origin: &str,
) -> Result<(Vec<Vec<usize>>, Vec<(usize, usize)>), IoError> {
    let lines = content_lines(text);
    let mut classes = Vec::new();
    let mut generators = Vec::new();
    let mut section = None;
    for (lno, line) in &lines {
        match line.as_str() {
            "classes" => section = Some(0),
            "generators" => section = Some(1),
            _ => {
                let entries: Result<Vec<usize>, IoError> = line
                    .split_whitespace()
                    .map(|t| parse_index(t, origin, *lno, "index"))
                    .collect();
                let entries = entries?;
                match section {
                    Some(0) => classes.push(entries),
                    Some(1) => {
                        if entries.len() != 2 {
                            return Err(fmt_err(origin, *lno, "generator line needs two indices"));
                        }
                        generators.push((entries[0], entries[1]));
                    }
                    _ => return Err(fmt_err(origin, *lno, "expected `classes` or `generators`")),
                }
            }
        }
    }
    Ok((classes, generators))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::close;
    use crate::monoid::fountain_monoid;

    #[test]
    fn monoid_round_trip() {
        let fd = fountain_monoid(&FiniteMonoid::cyclic_group(2)).unwrap();
        let text = monoid_to_string(fd.monoid());
        let parsed = parse_monoid(&text, "mem").unwrap();
        assert_eq!(parsed, **fd.monoid());
    }

    #[test]
    fn monoid_parse_errors_name_lines() {
        let err = parse_monoid("monoid 2 identity 0\n0 1\n", "f.mon").unwrap_err();
        assert!(err.to_string().contains("f.mon"));
        let err = parse_monoid("monoid 2 identity 0\n0 1\n1 2\n", "f.mon").unwrap_err();
        assert!(matches!(err, IoError::Invalid { .. }));
        let err = parse_monoid("monoid 2 identity 0\n0 x\n1 0\n", "f.mon").unwrap_err();
        assert!(err.to_string().contains(":2:"));
    }

    #[test]
    fn act_round_trip_with_labels() {
        let s = Arc::new(FiniteMonoid::cyclic(4, 1));
        let mut act = FiniteAct::monoid_as_act(Arc::clone(&s));
        act.set_label(0, "one");
        act.set_label(4, "zero");
        let text = act_to_string(&act, "n5.mon");
        let (parsed, monoid_ref) = parse_act(&text, "mem", s).unwrap();
        assert_eq!(parsed, act);
        assert_eq!(monoid_ref, "n5.mon");
    }

    #[test]
    fn system_round_trip_with_label_constants() {
        let s = Arc::new(FiniteMonoid::cyclic(4, 1));
        let mut raw = FiniteAct::monoid_as_act(Arc::clone(&s));
        raw.set_label(3, "c");
        let act = Arc::new(raw);
        let sys = EqSystem::new(
            Arc::clone(&act),
            vec!["x".into(), "y".into()],
            vec![
                Equation::vv(0, 1, 1, 2),
                Equation::vsame(0, 2, 3),
                Equation::vc(1, 3, 3),
            ],
        )
        .unwrap();
        let text = system_to_string(&sys, "a.act");
        assert!(text.contains("y.3 = @c"));
        let (parsed, act_ref) = parse_system(&text, "mem", act).unwrap();
        assert_eq!(parsed, sys);
        assert_eq!(act_ref, "a.act");
    }

    #[test]
    fn system_parse_rejects_bad_lines() {
        let s = Arc::new(FiniteMonoid::cyclic(4, 1));
        let act = Arc::new(FiniteAct::monoid_as_act(s));
        let header = "system over a.act vars x\n";
        for bad in ["x.1 y.2\n", "x.1 = z.2\n", "@1 = @2\n", "x.9 = @0\n"] {
            let text = format!("{header}{bad}");
            assert!(parse_system(&text, "mem", Arc::clone(&act)).is_err(), "{bad}");
        }
    }

    #[test]
    fn files_resolve_references_relative_to_location() {
        let dir = std::env::temp_dir().join(format!("actkit-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let s = FiniteMonoid::cyclic(4, 1);
        fs::write(dir.join("n5.mon"), monoid_to_string(&s)).unwrap();
        let act = FiniteAct::monoid_as_act(Arc::new(s));
        fs::write(dir.join("a.act"), act_to_string(&act, "n5.mon")).unwrap();
        let sys_text = "system over a.act vars x\nx.3 = @3\n";
        fs::write(dir.join("s.sys"), sys_text).unwrap();
        let (parsed_act, monoid_path) = read_act(&dir.join("a.act")).unwrap();
        assert_eq!(parsed_act, act);
        assert!(monoid_path.ends_with("n5.mon"));
        let (sys, act_path) = read_system(&dir.join("s.sys")).unwrap();
        assert_eq!(sys.equations(), &[Equation::vc(0, 3, 3)]);
        assert!(act_path.ends_with("a.act"));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn congruence_dump_round_trip() {
        let s = Arc::new(FiniteMonoid::cyclic(4, 1));
        let act = FiniteAct::monoid_as_act(s);
        let c = close(&act, &[(1, 2)]);
        let text = congruence_to_string(&c);
        let (classes, gens) = parse_congruence_dump(&text, "mem").unwrap();
        assert_eq!(classes, c.classes());
        assert_eq!(gens, c.generators().to_vec());
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let text = "# a monoid\nmonoid 1 identity 0 # trailing\n\n0\n";
        let m = parse_monoid(text, "mem").unwrap();
        assert_eq!(m.size(), 1);
    }
}

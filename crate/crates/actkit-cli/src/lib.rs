//! Command-line front end: parse monoid/act/system files, run the toolkit
//! operations, and emit deterministic text (or JSON-lines) reports.
//!
//! Exit codes: 0 for positive results, 1 for negative mathematical results
//! (inconsistent, unsolvable, not pure, no retraction, cap exceeded), 2
//! for file-format or usage errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use actkit::congruence::{certify, close, principal_intersection};
use actkit::elimination::{fountain_sigma_prime, forbidden_patterns, solve_by_elimination};
use actkit::equation::{identity_embedding, solve_in, SigmaComplex};
use actkit::io::{
    act_to_string, congruence_to_string, monoid_to_string, read_act, read_monoid, read_system,
    system_to_string, IoError,
};
use actkit::monoid::{fountain_monoid, small_monoid_catalog, FiniteMonoid, FountainDescriptor};
use actkit::purity::is_n_absolutely_pure;
use actkit::tower::{stage_one, theorem57_check, tower, TowerError};
use actkit::{annihilator, find_retraction, HSequence};

#[derive(Parser)]
#[command(name = "actkit", version, about = "finite monoid / act toolkit")]
struct Cli {
    /// Emit JSON-lines instead of text reports.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized sweeps (accepted globally; sweeps are seeded
    /// deterministically when omitted).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monoid files: validation, catalogs, the Fountain family.
    #[command(subcommand)]
    Monoid(MonoidCmd),
    /// Act files: validation and local left zeros.
    #[command(subcommand)]
    Act(ActCmd),
    /// Act congruences: closure, certificates, annihilators, intersections.
    #[command(subcommand)]
    Cong(CongCmd),
    /// Equation systems: consistency, solving, canonical extensions, purity.
    #[command(subcommand)]
    Eq(EqCmd),
    /// Variable elimination and Fountain reductions.
    #[command(subcommand)]
    Elim(ElimCmd),
    /// Canonical extension stages and towers.
    #[command(subcommand)]
    Tower(TowerCmd),
}

#[derive(Subcommand)]
enum MonoidCmd {
    /// Validate a monoid file and report basic structure.
    Check { file: PathBuf },
    /// List all monoids of order up to --order, up to isomorphism.
    Catalog {
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Emit the Fountain monoid over an abelian group (Z1/Z2/Z3/..., Z2xZ2).
    Fountain {
        #[arg(long)]
        group: String,
        /// Write the monoid file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a left-cancellable pair with disjoint principal ideals.
    Fem { file: PathBuf },
}

#[derive(Subcommand)]
enum ActCmd {
    /// Validate an act file and report basic structure.
    Check { file: PathBuf },
    /// Find a local left zero for a subset of the monoid (default: all).
    Localzeros {
        file: PathBuf,
        /// Comma-separated monoid element indices.
        #[arg(long)]
        subset: Option<String>,
    },
}

#[derive(Args)]
struct PairArgs {
    /// Generating pair `u,v`; repeatable.
    #[arg(long = "pair")]
    pairs: Vec<String>,
}

#[derive(Subcommand)]
enum CongCmd {
    /// Close a pair set to a congruence and dump classes + generators.
    Close {
        act: PathBuf,
        #[command(flatten)]
        pairs: PairArgs,
    },
    /// Produce a step-by-step rewrite certificate joining two elements.
    Certify {
        act: PathBuf,
        #[command(flatten)]
        pairs: PairArgs,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Right congruence {(u,v) : e·u = e·v} with a reduced generating set.
    Annihilator {
        act: PathBuf,
        #[arg(long)]
        element: usize,
    },
    /// Intersection of two principal subacts with reaching witnesses.
    Intersect {
        act: PathBuf,
        #[arg(long)]
        left: usize,
        #[arg(long)]
        right: usize,
    },
}

#[derive(Subcommand)]
enum EqCmd {
    /// Decide consistency; print a certificate when inconsistent.
    Consistent { system: PathBuf },
    /// Solve the system inside its own act.
    Solve { system: PathBuf },
    /// Report the canonical extension quotients attached to the system.
    Complex { system: PathBuf },
    /// Decide n-absolute purity of an act.
    Pure {
        act: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum ElimCmd {
    /// Solve by variable elimination.
    Run { system: PathBuf },
    /// Solve by elimination, printing one block per step.
    Trace { system: PathBuf },
    /// Constant-normal-form reduction over a Fountain monoid.
    FountainReduce {
        system: PathBuf,
        #[arg(long)]
        group: String,
    },
}

#[derive(Subcommand)]
enum TowerCmd {
    /// Build the first canonical extension stage.
    Stage {
        act: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        cap: Option<usize>,
        /// Write the stage act file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a depth-bounded tower, writing per-stage files and an index.
    Build {
        act: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
    },
    /// Finite-shadow report for the purity equivalences.
    Theorem57 {
        act: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
}

/// A report sink that renders either text lines or JSON-lines.
struct Reporter<'a, W: Write> {
    out: &'a mut W,
    json: bool,
}

impl<'a, W: Write> Reporter<'a, W> {
    fn line(&mut self, text: &str, value: serde_json::Value) {
        if self.json {
            let _ = writeln!(self.out, "{value}");
        } else {
            let _ = writeln!(self.out, "{text}");
        }
    }

    /// Raw file-format payload (never mirrored to JSON).
    fn payload(&mut self, text: &str) {
        if self.json {
            let _ = writeln!(self.out, "{}", json!({ "event": "payload", "text": text }));
        } else {
            let _ = write!(self.out, "{text}");
        }
    }
}

pub fn run<W: Write>(args: &[String], out: &mut W) -> i32 {
    let mut argv = vec!["actkit".to_string()];
    argv.extend(args.iter().cloned());
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            // --help/--version render through the error path but are not
            // usage errors
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut rep = Reporter { out, json: cli.json };
    let result = match cli.cmd {
        Cmd::Monoid(c) => run_monoid(c, &mut rep),
        Cmd::Act(c) => run_act(c, &mut rep),
        Cmd::Cong(c) => run_cong(c, &mut rep),
        Cmd::Eq(c) => run_eq(c, &mut rep),
        Cmd::Elim(c) => run_elim(c, &mut rep),
        Cmd::Tower(c) => run_tower(c, &mut rep),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let code = if e.is_format() { 2 } else { 1 };
            rep.line(
                &format!("error: {e}"),
                json!({ "event": "error", "message": e.to_string() }),
            );
            code
        }
    }
}

fn parse_group(name: &str) -> Option<FiniteMonoid> {
    match name {
        "trivial" | "Z1" => Some(FiniteMonoid::trivial()),
        "Z2xZ2" => {
            let z2 = FiniteMonoid::cyclic_group(2);
            Some(z2.direct_product(&z2))
        }
        _ => {
            let n: usize = name.strip_prefix('Z')?.parse().ok()?;
            (n >= 1).then(|| FiniteMonoid::cyclic_group(n))
        }
    }
}

fn parse_pairs(specs: &[String]) -> Result<Vec<(usize, usize)>, IoError> {
    specs
        .iter()
        .map(|s| {
            let err = || IoError::Format {
                path: "--pair".into(),
                line: 0,
                msg: format!("expected `u,v`, found `{s}`"),
            };
            let (u, v) = s.split_once(',').ok_or_else(err)?;
            Ok((
                u.trim().parse().map_err(|_| err())?,
                v.trim().parse().map_err(|_| err())?,
            ))
        })
        .collect()
}

fn parse_subset(spec: &str) -> Result<Vec<usize>, IoError> {
    spec.split(',')
        .map(|t| {
            t.trim().parse().map_err(|_| IoError::Format {
                path: "--subset".into(),
                line: 0,
                msg: format!("expected index, found `{t}`"),
            })
        })
        .collect()
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn run_monoid<W: Write>(cmd: MonoidCmd, rep: &mut Reporter<W>) -> Result<i32, IoError> {
    match cmd {
        MonoidCmd::Check { file } => {
            let m = read_monoid(&file)?;
            rep.line(
                &format!(
                    "monoid {}: valid, size {}, identity {}, commutative {}, group {}",
                    file.display(),
                    m.size(),
                    m.identity(),
                    m.is_commutative(),
                    m.is_group()
                ),
                json!({
                    "event": "monoid-check", "file": file.display().to_string(),
                    "size": m.size(), "identity": m.identity(),
                    "commutative": m.is_commutative(), "group": m.is_group(),
                }),
            );
            Ok(0)
        }
        MonoidCmd::Catalog { order } => {
            let monoids = small_monoid_catalog(order);
            rep.line(
                &format!("{} monoids of order <= {} up to isomorphism", monoids.len(), order),
                json!({ "event": "catalog", "order": order, "count": monoids.len() }),
            );
            for (i, m) in monoids.iter().enumerate() {
                rep.payload(&format!("# catalog entry {i}\n"));
                rep.payload(&monoid_to_string(m));
            }
            Ok(0)
        }
        MonoidCmd::Fountain { group, out } => {
            let g = parse_group(&group).ok_or_else(|| IoError::Format {
                path: "--group".into(),
                line: 0,
                msg: format!("unknown group `{group}`"),
            })?;
            let fd = fountain_monoid(&g).map_err(|e| IoError::Invalid {
                path: "--group".into(),
                msg: e.to_string(),
            })?;
            let text = monoid_to_string(fd.monoid());
            match out {
                Some(path) => {
                    write_file(&path, &text)?;
                    rep.line(
                        &format!(
                            "fountain monoid over {}: size {}, written to {}",
                            group,
                            fd.monoid().size(),
                            path.display()
                        ),
                        json!({
                            "event": "fountain", "group": group,
                            "size": fd.monoid().size(), "file": path.display().to_string(),
                        }),
                    );
                }
                None => rep.payload(&text),
            }
            Ok(0)
        }
        MonoidCmd::Fem { file } => {
            let m = read_monoid(&file)?;
            match m.fem_check() {
                Some((s, t)) => {
                    rep.line(
                        &format!("fem witness: left-cancellable pair ({s}, {t}) with disjoint principal ideals"),
                        json!({ "event": "fem", "witness": [s, t] }),
                    );
                    Ok(0)
                }
                None => {
                    rep.line(
                        "fem witness: none",
                        json!({ "event": "fem", "witness": serde_json::Value::Null }),
                    );
                    Ok(1)
                }
            }
        }
    }
}

fn run_act<W: Write>(cmd: ActCmd, rep: &mut Reporter<W>) -> Result<i32, IoError> {
    match cmd {
        ActCmd::Check { file } => {
            let (act, monoid_path) = read_act(&file)?;
            rep.line(
                &format!(
                    "act {}: valid, size {}, over monoid {} (size {})",
                    file.display(),
                    act.size(),
                    monoid_path.display(),
                    act.base().size()
                ),
                json!({
                    "event": "act-check", "file": file.display().to_string(),
                    "size": act.size(), "monoid": monoid_path.display().to_string(),
                    "monoid_size": act.base().size(),
                }),
            );
            Ok(0)
        }
        ActCmd::Localzeros { file, subset } => {
            let (act, _) = read_act(&file)?;
            let t_set: Vec<usize> = match subset {
                Some(spec) => parse_subset(&spec)?,
                None => (0..act.base().size()).collect(),
            };
            match act.has_local_left_zeros(&t_set) {
                Some(a) => {
                    rep.line(
                        &format!("local left zero: {a}"),
                        json!({ "event": "localzeros", "zero": a }),
                    );
                    Ok(0)
                }
                None => {
                    rep.line(
                        "local left zero: none",
                        json!({ "event": "localzeros", "zero": serde_json::Value::Null }),
                    );
                    Ok(1)
                }
            }
        }
    }
}

fn hsequence_text(seq: &HSequence) -> String {
    let mut text = format!("certificate start {} end {}\n", seq.start, seq.end);
    for (c, d, t) in &seq.steps {
        let _ = writeln!(text, "step {c} {d} {t}");
    }
    text
}

fn hsequence_json(seq: &HSequence) -> serde_json::Value {
    json!({
        "start": seq.start, "end": seq.end,
        "steps": seq.steps.iter().map(|&(c, d, t)| json!([c, d, t])).collect::<Vec<_>>(),
    })
}

fn run_cong<W: Write>(cmd: CongCmd, rep: &mut Reporter<W>) -> Result<i32, IoError> {
    match cmd {
        CongCmd::Close { act, pairs } => {
            let (a, _) = read_act(&act)?;
            let h = parse_pairs(&pairs.pairs)?;
            let c = close(&a, &h);
            if rep.json {
                rep.line(
                    "",
                    json!({
                        "event": "congruence",
                        "classes": c.classes(),
                        "generators": c.generators(),
                    }),
                );
            } else {
                rep.payload(&congruence_to_string(&c));
            }
            Ok(0)
        }
        CongCmd::Certify { act, pairs, from, to } => {
            let (a, _) = read_act(&act)?;
            let h = parse_pairs(&pairs.pairs)?;
            match certify(&a, &h, from, to) {
                Some(seq) => {
                    assert!(seq.validate(&a, &h), "emitted certificate must validate");
                    rep.line(
                        hsequence_text(&seq).trim_end(),
                        json!({ "event": "certificate", "sequence": hsequence_json(&seq) }),
                    );
                    Ok(0)
                }
                None => {
                    rep.line(
                        &format!("not related: {from} and {to}"),
                        json!({ "event": "certificate", "sequence": serde_json::Value::Null }),
                    );
                    Ok(1)
                }
            }
        }
        CongCmd::Annihilator { act, element } => {
            let (a, _) = read_act(&act)?;
            if element >= a.size() {
                return Err(IoError::Invalid {
                    path: act.display().to_string(),
                    msg: format!("element {element} out of range"),
                });
            }
            let ann = annihilator(&a, element);
            let mut text = String::from("classes\n");
            for class in ann.classes() {
                let row: Vec<String> = class.iter().map(|i| i.to_string()).collect();
                text.push_str(&row.join(" "));
                text.push('\n');
            }
            text.push_str("generators\n");
            for &(u, v) in ann.generators() {
                let _ = writeln!(text, "{u} {v}");
            }
            if rep.json {
                rep.line(
                    "",
                    json!({
                        "event": "annihilator", "element": element,
                        "classes": ann.classes(), "generators": ann.generators(),
                    }),
                );
            } else {
                rep.payload(&text);
            }
            Ok(0)
        }
        CongCmd::Intersect { act, left, right } => {
            let (a, _) = read_act(&act)?;
            if left >= a.size() || right >= a.size() {
                return Err(IoError::Invalid {
                    path: act.display().to_string(),
                    msg: "element out of range".into(),
                });
            }
            let pi = principal_intersection(&a, left, right);
            let elements: Vec<String> = pi.elements.iter().map(|e| e.to_string()).collect();
            let mut text = format!("elements {}\n", elements.join(" "));
            for &(k, (u, v)) in &pi.generators {
                let _ = writeln!(text, "generator {k} via {u} {v}");
            }
            rep.line(
                text.trim_end(),
                json!({
                    "event": "intersection", "elements": pi.elements,
                    "generators": pi.generators.iter()
                        .map(|&(k, (u, v))| json!({ "element": k, "via": [u, v] }))
                        .collect::<Vec<_>>(),
                }),
            );
            Ok(0)
        }
    }
}

fn solution_text(vars: &[String], solution: &[usize]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(solution)
        .map(|(v, s)| format!("{v}={s}"))
        .collect();
    format!("solution {}", parts.join(" "))
}

fn run_eq<W: Write>(cmd: EqCmd, rep: &mut Reporter<W>) -> Result<i32, IoError> {
    match cmd {
        EqCmd::Consistent { system } => {
            let (sys, _) = read_system(&system)?;
            let complex = SigmaComplex::build(sys);
            if complex.is_consistent() {
                rep.line("consistent", json!({ "event": "consistency", "consistent": true }));
                Ok(0)
            } else {
                let seq = complex.certificate().expect("inconsistency carries a certificate");
                rep.line(
                    &format!("inconsistent\n{}", hsequence_text(seq).trim_end()),
                    json!({
                        "event": "consistency", "consistent": false,
                        "certificate": hsequence_json(seq),
                    }),
                );
                Ok(1)
            }
        }
        EqCmd::Solve { system } => {
            let (sys, _) = read_system(&system)?;
            let act = Arc::clone(sys.act());
            match solve_in(&sys, &act, &identity_embedding(&act)) {
                Some(sol) => {
                    rep.line(
                        &solution_text(sys.variables(), &sol),
                        json!({ "event": "solve", "solution": sol }),
                    );
                    Ok(0)
                }
                None => {
                    rep.line(
                        "unsolvable",
                        json!({ "event": "solve", "solution": serde_json::Value::Null }),
                    );
                    Ok(1)
                }
            }
        }
        EqCmd::Complex { system } => {
            let (sys, _) = read_system(&system)?;
            let complex = SigmaComplex::build(sys);
            let (b_act, _) = complex.b_sigma();
            rep.line(
                &format!(
                    "consistent {}\nextension size {}\nfree-quotient size {}\nconstant-part size {}",
                    complex.is_consistent(),
                    complex.a_sigma().size(),
                    complex.c_sigma().size(),
                    b_act.size()
                ),
                json!({
                    "event": "complex",
                    "consistent": complex.is_consistent(),
                    "extension_size": complex.a_sigma().size(),
                    "free_quotient_size": complex.c_sigma().size(),
                    "constant_part_size": b_act.size(),
                }),
            );
            Ok(if complex.is_consistent() { 0 } else { 1 })
        }
        EqCmd::Pure { act, n } => {
            let (a, act_ref) = read_act(&act)?;
            let a = Arc::new(a);
            match is_n_absolutely_pure(&a, n) {
                Ok(()) => {
                    rep.line(
                        &format!("{n}-absolutely pure: yes"),
                        json!({ "event": "purity", "n": n, "pure": true }),
                    );
                    Ok(0)
                }
                Err(witness) => {
                    let text = system_to_string(&witness, &act_ref.display().to_string());
                    rep.line(
                        &format!("{n}-absolutely pure: no\nunsolvable consistent system:\n{}", text.trim_end()),
                        json!({ "event": "purity", "n": n, "pure": false, "witness": text }),
                    );
                    Ok(1)
                }
            }
        }
    }
}

fn run_elim<W: Write>(cmd: ElimCmd, rep: &mut Reporter<W>) -> Result<i32, IoError> {
    match cmd {
        ElimCmd::Run { system } => {
            let (sys, _) = read_system(&system)?;
            match solve_by_elimination(&sys) {
                Ok((solution, steps)) => {
                    rep.line(
                        &format!(
                            "{} (after {} elimination steps)",
                            solution_text(sys.variables(), &solution),
                            steps.len()
                        ),
                        json!({ "event": "elimination", "solution": solution, "steps": steps.len() }),
                    );
                    Ok(0)
                }
                Err(e) => {
                    rep.line(
                        &format!("elimination failed: {e}"),
                        json!({ "event": "elimination", "error": e.to_string() }),
                    );
                    Ok(1)
                }
            }
        }
        ElimCmd::Trace { system } => {
            let (sys, act_ref) = read_system(&system)?;
            match solve_by_elimination(&sys) {
                Ok((solution, steps)) => {
                    let act_name = act_ref.display().to_string();
                    let mut text = String::new();
                    let mut blocks = Vec::new();
                    for (i, step) in steps.iter().enumerate() {
                        let _ = writeln!(text, "block {}", i + 1);
                        let _ = writeln!(text, "eliminate {}", step.var_name);
                        let _ = writeln!(text, "companion");
                        text.push_str(&system_to_string(&step.pi, &act_name));
                        let _ = writeln!(text, "chosen {}", step.chosen);
                        let _ = writeln!(text, "residual");
                        text.push_str(&system_to_string(&step.residual, &act_name));
                        blocks.push(json!({
                            "eliminate": step.var_name,
                            "companion": system_to_string(&step.pi, &act_name),
                            "chosen": step.chosen,
                            "residual": system_to_string(&step.residual, &act_name),
                        }));
                    }
                    let _ = write!(text, "{}", solution_text(sys.variables(), &solution));
                    rep.line(
                        &text,
                        json!({ "event": "elimination-trace", "blocks": blocks, "solution": solution }),
                    );
                    Ok(0)
                }
                Err(e) => {
                    rep.line(
                        &format!("elimination failed: {e}"),
                        json!({ "event": "elimination-trace", "error": e.to_string() }),
                    );
                    Ok(1)
                }
            }
        }
        ElimCmd::FountainReduce { system, group } => {
            let (sys, _) = read_system(&system)?;
            let g = parse_group(&group).ok_or_else(|| IoError::Format {
                path: "--group".into(),
                line: 0,
                msg: format!("unknown group `{group}`"),
            })?;
            let fd = fountain_monoid(&g).map_err(|e| IoError::Invalid {
                path: "--group".into(),
                msg: e.to_string(),
            })?;
            run_fountain_reduce(&sys, &fd, rep)
        }
    }
}

fn run_fountain_reduce<W: Write>(
    sys: &actkit::EqSystem,
    fd: &FountainDescriptor,
    rep: &mut Reporter<W>,
) -> Result<i32, IoError> {
    if **sys.act().base() != **fd.monoid() {
        return Err(IoError::Invalid {
            path: "--group".into(),
            msg: "system's base monoid is not the requested Fountain monoid".into(),
        });
    }
    let complex = SigmaComplex::build(sys.clone());
    if !complex.is_consistent() {
        rep.line(
            "inconsistent",
            json!({ "event": "fountain-reduce", "consistent": false }),
        );
        return Ok(1);
    }
    let b = complex.a_sigma().clone();
    let emb = complex.a_embedded_in_a_sigma();
    let solution = complex.canonical_tuple();
    let red = fountain_sigma_prime(sys, fd, &b, &emb, &solution)
        .expect("consistent Fountain system reduces");
    let mut text = String::new();
    let mut vars_json = Vec::new();
    for (x, name) in sys.variables().iter().enumerate() {
        match (red.tau[x], red.a_of[x]) {
            (Some(t), Some(a)) => {
                let _ = writeln!(
                    text,
                    "{name}: ideal size {} tau {t} constant {a}",
                    red.k_ideals[x].len()
                );
                vars_json.push(json!({ "var": name, "ideal": red.k_ideals[x], "tau": t, "constant": a }));
            }
            _ => {
                let _ = writeln!(text, "{name}: orbit misses the act");
                vars_json.push(json!({ "var": name, "ideal": [] }));
            }
        }
        let report = forbidden_patterns(sys, x, fd).expect("family already checked");
        let _ = writeln!(
            text,
            "{name}: forbidden patterns family-one {} family-two {}",
            report.family_one.len(),
            report.family_two.len()
        );
    }
    let sp = system_to_string(&red.sigma_prime, "-");
    let _ = write!(text, "reduced system\n{sp}");
    rep.line(
        text.trim_end(),
        json!({
            "event": "fountain-reduce", "consistent": true,
            "variables": vars_json, "reduced": sp,
        }),
    );
    Ok(0)
}

fn run_tower<W: Write>(cmd: TowerCmd, rep: &mut Reporter<W>) -> Result<i32, IoError> {
    match cmd {
        TowerCmd::Stage { act, n, cap, out } => {
            let (a, monoid_path) = read_act(&act)?;
            let a = Arc::new(a);
            let stage = stage_one(&a, n);
            if let Some(cap) = cap {
                if stage.act.size() > cap {
                    rep.line(
                        &format!("stage size {} exceeds cap {cap}", stage.act.size()),
                        json!({ "event": "stage", "error": "cap exceeded", "size": stage.act.size() }),
                    );
                    return Ok(1);
                }
            }
            let retraction = find_retraction(&stage.act, &stage.inclusion).is_some();
            if let Some(path) = out {
                write_file(&path, &act_to_string(&stage.act, &monoid_path.display().to_string()))?;
            }
            rep.line(
                &format!(
                    "stage size {}\nsystems amalgamated {}\nretraction {}",
                    stage.act.size(),
                    stage.systems.len(),
                    if retraction { "present" } else { "absent" }
                ),
                json!({
                    "event": "stage", "size": stage.act.size(),
                    "systems": stage.systems.len(), "retraction": retraction,
                }),
            );
            Ok(if retraction { 0 } else { 1 })
        }
        TowerCmd::Build { act, n, depth, cap, out_dir } => {
            let (a, monoid_path) = read_act(&act)?;
            let a = Arc::new(a);
            match tower(&a, n, depth, cap) {
                Ok(stages) => {
                    std::fs::create_dir_all(&out_dir).map_err(|source| IoError::Io {
                        path: out_dir.display().to_string(),
                        source,
                    })?;
                    let monoid_ref = monoid_path.display().to_string();
                    let mut index = String::new();
                    for stage in &stages {
                        let name = format!("stage{}.act", stage.level);
                        write_file(&out_dir.join(&name), &act_to_string(&stage.act, &monoid_ref))?;
                        let _ = writeln!(
                            index,
                            "stage {} size {} systems {} file {name}",
                            stage.level,
                            stage.act.size(),
                            stage.systems.len()
                        );
                    }
                    write_file(&out_dir.join("index.txt"), &index)?;
                    rep.line(
                        &format!("tower of {} stages written to {}", stages.len(), out_dir.display()),
                        json!({
                            "event": "tower", "stages": stages.len(),
                            "sizes": stages.iter().map(|s| s.act.size()).collect::<Vec<_>>(),
                            "dir": out_dir.display().to_string(),
                        }),
                    );
                    Ok(0)
                }
                Err(e @ TowerError::SizeCapExceeded { .. }) => {
                    rep.line(
                        &format!("tower failed: {e}"),
                        json!({ "event": "tower", "error": e.to_string() }),
                    );
                    Ok(1)
                }
                Err(e) => unreachable!("stage construction cannot fail with {e}"),
            }
        }
        TowerCmd::Theorem57 { act, cap } => {
            let (a, _) = read_act(&act)?;
            let a = Arc::new(a);
            match theorem57_check(&a, cap) {
                Ok(report) => {
                    rep.line(
                        &format!(
                            "almost pure {}\nbase retracts from stage one {}\nstage one size {}\nstage one 2-absolutely pure {}\nbound-two stage size {}\nstage one retracts from bound-two stage {}",
                            report.almost_pure,
                            report.base_retracts_from_stage_one,
                            report.stage_one_size,
                            report.stage_one_two_absolutely_pure,
                            report.bound_two_stage_size,
                            report.stage_one_retracts_from_bound_two
                        ),
                        json!({
                            "event": "theorem57",
                            "almost_pure": report.almost_pure,
                            "base_retracts_from_stage_one": report.base_retracts_from_stage_one,
                            "stage_one_size": report.stage_one_size,
                            "stage_one_two_absolutely_pure": report.stage_one_two_absolutely_pure,
                            "bound_two_stage_size": report.bound_two_stage_size,
                            "stage_one_retracts_from_bound_two": report.stage_one_retracts_from_bound_two,
                        }),
                    );
                    Ok(0)
                }
                Err(e) => {
                    rep.line(
                        &format!("theorem57 check failed: {e}"),
                        json!({ "event": "theorem57", "error": e.to_string() }),
                    );
                    Ok(1)
                }
            }
        }
    }
}

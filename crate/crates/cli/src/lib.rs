//! Command-line front end. [`run`] takes the arguments and output streams so
//! it can be driven from tests; `main` only forwards to it.
//!
//! Exit codes: 0 when something was found, verified or solved, 1 when the
//! answer is negative (`ABSENT`, a rejected certificate or sequence), 2 on
//! bad input or exceeded limits.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;

use rainbowfrac::complex::format::{parse_complex, parse_sequence, write_complex, write_sequence, write_trace};
use rainbowfrac::complex::{
    blow_up_complex, blow_up_sequence, build_nu_complex, generate_collapse, verify_collapse, CollapseMode,
    DEFAULT_MAX_ENUM,
};
use rainbowfrac::constructions::{ConstructionKind, ConstructionSpec};
use rainbowfrac::lp::{nu_star, tau_star, FractionalMatching};
use rainbowfrac::matroid::{km_witness, LabeledUniverse, Matroid, MatroidError};
use rainbowfrac::rainbow::{
    find_rainbow_fractional, find_rainbow_integral, verify_certificate, verify_integral_certificate,
    IntegralRainbowCertificate, RainbowCertificate, SearchOptions, DEFAULT_MAX_COLORS, DEFAULT_MAX_EDGES,
};
use rainbowfrac::{EdgeSet, Instance, Rational};

#[derive(Parser, Debug)]
#[command(name = "rainbowfrac", version, about = "Exact fractional matchings, rainbow search and collapse sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the fractional matching and cover programs.
    Solve {
        file: PathBuf,
        /// Restrict to one color instead of all edges.
        #[arg(long)]
        color: Option<usize>,
        #[arg(long, conflicts_with_all = ["tau", "both"])]
        nu: bool,
        #[arg(long, conflicts_with = "both")]
        tau: bool,
        #[arg(long)]
        both: bool,
    },
    /// Search for a rainbow fractional matching of size n.
    Rainbow {
        file: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        n: Rational,
        /// Check a certificate file instead of searching.
        #[arg(long)]
        verify: Option<PathBuf>,
        /// Search only the first ⌊rn⌋ colors.
        #[arg(long)]
        floor_rn: bool,
        #[arg(long)]
        no_prune: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// Search for a rainbow matching of n disjoint edges.
    RainbowIntegral {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        verify: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Print the facets of {E' : nu*(E') < n}.
    Complex {
        file: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        n: Rational,
        #[arg(long, default_value_t = DEFAULT_MAX_ENUM)]
        max_enum: usize,
    },
    /// Generate a collapse sequence of the complex.
    Collapse {
        file: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        n: Rational,
        #[arg(long, value_enum, default_value_t = Mode::General)]
        mode: Mode,
        /// Also print the per-iteration trace.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_ENUM)]
        max_enum: usize,
    },
    /// Replay a collapse sequence on the complex.
    VerifyCollapse {
        file: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        n: Rational,
        #[arg(long)]
        seq: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_ENUM)]
        max_enum: usize,
    },
    /// Blow up a complex file, and optionally a collapse sequence of it.
    BlowUp {
        #[arg(long)]
        complex: PathBuf,
        /// Multiplicities as `element:count,...`; unlisted elements keep one copy.
        #[arg(long)]
        mult: String,
        #[arg(long)]
        seq: Option<PathBuf>,
        /// Write the complex here instead of standard output.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Write the sequence here instead of standard output.
        #[arg(long)]
        seq_out: Option<PathBuf>,
    },
    /// Search a face of the labeled complex whose complement has rank ≤ d.
    KmWitness {
        file: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        n: Rational,
        /// Defaults to ⌈rn/(a̲b̲)⌉ − 1.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_MAX_ENUM)]
        max_enum: usize,
    },
    /// Write an extremal family as an instance file.
    Generate {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        copies: Option<usize>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Limits {
    #[arg(long, default_value_t = DEFAULT_MAX_EDGES)]
    max_edges: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_COLORS)]
    max_colors: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    General,
    Partite,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    #[value(name = "drisko")]
    Drisko,
    #[value(name = "bgs")]
    Bgs,
    #[value(name = "odd_cycle")]
    OddCycle,
    #[value(name = "two_odd_cycles")]
    TwoOddCycles,
    #[value(name = "truncated_plane")]
    TruncatedPlane,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

/// Whether the command's answer was positive.
enum Answer {
    Yes,
    No,
}

/// Runs one command line; returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let mut buf = String::new();
    let result = dispatch(cli.command, &mut buf);
    let _ = out.write_all(buf.as_bytes());
    match result {
        Ok(Answer::Yes) => 0,
        Ok(Answer::No) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    Instance::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn dispatch(command: Command, out: &mut String) -> Result<Answer> {
    match command {
        Command::Solve {
            file,
            color,
            nu,
            tau,
            ..
        } => solve(&file, color, !tau, !nu, out),
        Command::Rainbow {
            file,
            n,
            verify,
            floor_rn,
            no_prune,
            limits,
        } => rainbow(&file, &n, verify.as_deref(), floor_rn, !no_prune, &limits, out),
        Command::RainbowIntegral {
            file,
            n,
            verify,
            limits,
        } => rainbow_integral(&file, n, verify.as_deref(), &limits, out),
        Command::Complex { file, n, max_enum } => {
            let inst = load_instance(&file)?;
            let h = inst.hypergraph();
            let x = build_nu_complex(h, &h.all_edges(), inst.weights(), &n, max_enum)?;
            out.push_str(&write_complex(&x, None));
            Ok(Answer::Yes)
        }
        Command::Collapse {
            file,
            n,
            mode,
            trace,
            max_enum,
        } => {
            let inst = load_instance(&file)?;
            let h = inst.hypergraph();
            let mode = match mode {
                Mode::General => CollapseMode::General,
                Mode::Partite => CollapseMode::Partite,
            };
            let (seq, tr) = generate_collapse(h, &h.all_edges(), inst.weights(), &n, mode, max_enum)?;
            out.push_str(&write_sequence(&seq));
            if trace {
                out.push_str(&write_trace(&tr));
            }
            Ok(Answer::Yes)
        }
        Command::VerifyCollapse {
            file,
            n,
            seq,
            max_enum,
        } => {
            let inst = load_instance(&file)?;
            let h = inst.hypergraph();
            let x = build_nu_complex(h, &h.all_edges(), inst.weights(), &n, max_enum)?;
            let seq = parse_sequence(&read(&seq)?)?;
            match verify_collapse(&x, &seq) {
                Ok(()) => {
                    writeln!(out, "VALID d {} steps {}", seq.d, seq.steps.len())?;
                    Ok(Answer::Yes)
                }
                Err(e) => {
                    writeln!(out, "INVALID {e}")?;
                    Ok(Answer::No)
                }
            }
        }
        Command::BlowUp {
            complex,
            mult,
            seq,
            output,
            seq_out,
        } => blow_up(&complex, &mult, seq.as_deref(), output.as_deref(), seq_out.as_deref(), out),
        Command::KmWitness { file, n, d, max_enum } => km(&file, &n, d, max_enum, out),
        Command::Generate {
            kind,
            n,
            k,
            q,
            copies,
            output,
        } => generate(kind, n, k, q, copies, output.as_deref(), out),
    }
}

fn selected_edges(inst: &Instance, color: Option<usize>) -> Result<EdgeSet> {
    match color {
        None => Ok(inst.hypergraph().all_edges()),
        Some(i) => inst
            .colors()
            .get(i)
            .cloned()
            .ok_or_else(|| anyhow!("color {i} out of range ({} colors)", inst.colors().len())),
    }
}

fn solve(file: &Path, color: Option<usize>, show_nu: bool, show_tau: bool, out: &mut String) -> Result<Answer> {
    let inst = load_instance(file)?;
    let h = inst.hypergraph();
    let edges = selected_edges(&inst, color)?;
    let res = if show_nu {
        nu_star(h, &edges, inst.weights())?
    } else {
        tau_star(h, &edges, inst.weights())?
    };
    writeln!(out, "edges {edges}")?;
    writeln!(out, "value {}", res.value)?;
    if show_nu {
        for e in edges.iter() {
            writeln!(out, "f {e} {}", res.primal.value(e))?;
        }
    }
    if show_tau {
        for (v, g) in res.dual.values.iter().enumerate() {
            writeln!(out, "g {v} {g}")?;
        }
    }
    Ok(Answer::Yes)
}

fn write_certificate(cert: &RainbowCertificate, out: &mut String) -> Result<()> {
    writeln!(out, "FOUND")?;
    writeln!(out, "target {}", cert.target)?;
    for (c, e) in &cert.assignment {
        writeln!(out, "pick {c} {e}")?;
    }
    for (e, x) in &cert.matching.values {
        writeln!(out, "f {e} {x}")?;
    }
    writeln!(out, "size {}", cert.matching.size)?;
    Ok(())
}

type ParsedCertificate = (Vec<(usize, usize)>, FractionalMatching, Option<Rational>);

fn parse_certificate(text: &str) -> Result<ParsedCertificate> {
    let mut assignment = Vec::new();
    let mut values = std::collections::BTreeMap::new();
    let mut size = None;
    let mut target = None;
    for (i, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = || anyhow!("certificate line {}: cannot read `{line}`", i + 1);
        match toks.as_slice() {
            [] | ["FOUND"] => {}
            ["target", t] => target = Some(t.parse::<Rational>().map_err(|_| bad())?),
            ["pick", c, e] => assignment.push((c.parse().map_err(|_| bad())?, e.parse().map_err(|_| bad())?)),
            ["f", e, x] => {
                values.insert(
                    e.parse::<usize>().map_err(|_| bad())?,
                    x.parse::<Rational>().map_err(|_| bad())?,
                );
            }
            ["size", x] => size = Some(x.parse::<Rational>().map_err(|_| bad())?),
            _ => return Err(bad()),
        }
    }
    let size = size.ok_or_else(|| anyhow!("certificate has no `size` line"))?;
    Ok((assignment, FractionalMatching { values, size }, target))
}

fn rainbow(
    file: &Path,
    n: &Rational,
    verify: Option<&Path>,
    floor_rn: bool,
    prune: bool,
    limits: &Limits,
    out: &mut String,
) -> Result<Answer> {
    let inst = load_instance(file)?;
    let mut family = inst.family()?;
    if let Some(path) = verify {
        let (assignment, matching, target) = parse_certificate(&read(path)?)?;
        if target.as_ref().is_some_and(|t| t != n) {
            bail!("certificate target {} differs from --n {n}", target.unwrap());
        }
        let cert = RainbowCertificate {
            assignment,
            matching,
            target: n.clone(),
        };
        return Ok(match verify_certificate(&family, n, inst.weights(), &cert) {
            Ok(()) => {
                writeln!(out, "VALID")?;
                Answer::Yes
            }
            Err(e) => {
                writeln!(out, "INVALID {e}")?;
                Answer::No
            }
        });
    }
    if floor_rn {
        let rn = Rational::from(family.hypergraph().uniformity()) * n;
        let m = rn.floor().to_usize().unwrap_or(usize::MAX);
        family = family.truncated(m)?;
        writeln!(out, "% searching the first {} colors", family.color_count())?;
    }
    let opts = SearchOptions {
        max_edges: limits.max_edges,
        max_colors: limits.max_colors,
        prune,
    };
    match find_rainbow_fractional(&family, n, inst.weights(), &opts)? {
        Some(cert) => {
            write_certificate(&cert, out)?;
            Ok(Answer::Yes)
        }
        None => {
            writeln!(out, "ABSENT")?;
            Ok(Answer::No)
        }
    }
}

fn rainbow_integral(
    file: &Path,
    n: usize,
    verify: Option<&Path>,
    limits: &Limits,
    out: &mut String,
) -> Result<Answer> {
    let inst = load_instance(file)?;
    let family = inst.family()?;
    if let Some(path) = verify {
        let (assignment, _, _) = parse_certificate(&format!("{}\nsize 0", read(path)?))?;
        let cert = IntegralRainbowCertificate { assignment, target: n };
        return Ok(match verify_integral_certificate(&family, n, &cert) {
            Ok(()) => {
                writeln!(out, "VALID")?;
                Answer::Yes
            }
            Err(e) => {
                writeln!(out, "INVALID {e}")?;
                Answer::No
            }
        });
    }
    let opts = SearchOptions {
        max_edges: limits.max_edges,
        max_colors: limits.max_colors,
        prune: true,
    };
    match find_rainbow_integral(&family, n, &opts)? {
        Some(cert) => {
            writeln!(out, "FOUND")?;
            writeln!(out, "target {n}")?;
            for (c, e) in &cert.assignment {
                writeln!(out, "pick {c} {e}")?;
            }
            Ok(Answer::Yes)
        }
        None => {
            writeln!(out, "ABSENT")?;
            Ok(Answer::No)
        }
    }
}

fn parse_multiplicities(spec: &str, ground: usize) -> Result<Vec<usize>> {
    let mut mult = vec![1; ground];
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (v, k) = part
            .split_once(':')
            .ok_or_else(|| anyhow!("multiplicity `{part}` is not of the form element:count"))?;
        let v: usize = v.trim().parse().with_context(|| format!("bad element in `{part}`"))?;
        let k: usize = k.trim().parse().with_context(|| format!("bad count in `{part}`"))?;
        if v >= ground {
            bail!("element {v} outside the ground set of size {ground}");
        }
        mult[v] = k;
    }
    Ok(mult)
}

fn blow_up(
    complex: &Path,
    mult: &str,
    seq: Option<&Path>,
    output: Option<&Path>,
    seq_out: Option<&Path>,
    out: &mut String,
) -> Result<Answer> {
    let x = parse_complex(&read(complex)?)?;
    let mult = parse_multiplicities(mult, x.ground_size())?;
    let b = blow_up_complex(&x, &mult)?;
    let text = write_complex(&b.complex, Some(&b.labels));
    match output {
        Some(p) => write_file(p, &text)?,
        None => out.push_str(&text),
    }
    let Some(seq_path) = seq else {
        return Ok(Answer::Yes);
    };
    let seq = parse_sequence(&read(seq_path)?)?;
    if let Err(e) = verify_collapse(&x, &seq) {
        writeln!(out, "INVALID input sequence: {e}")?;
        return Ok(Answer::No);
    }
    let lifted = blow_up_sequence(&x, &seq, &mult)?;
    if let Err(e) = verify_collapse(&b.complex, &lifted) {
        bail!("transformed sequence rejected: {e}");
    }
    let text = write_sequence(&lifted);
    match seq_out {
        Some(p) => write_file(p, &text)?,
        None => out.push_str(&text),
    }
    Ok(Answer::Yes)
}

fn km(file: &Path, n: &Rational, d: Option<usize>, max_enum: usize, out: &mut String) -> Result<Answer> {
    let inst = load_instance(file)?;
    let family = inst.family()?;
    let h = inst.hypergraph();
    let w = inst.weights();
    let x = build_nu_complex(h, &h.all_edges(), w, n, max_enum)?;
    let universe = LabeledUniverse::from_family(&family)?;
    let lifted = universe.lift_complex(&x, |e| e)?;
    let m = universe.partition_matroid();
    let d = match d {
        Some(d) => d,
        None => {
            let ab = w.min_edge_weight(&h.all_edges()).unwrap_or_else(Rational::one)
                * w.min_vertex_weight().unwrap_or_else(Rational::one);
            let bound = Rational::from(h.uniformity()) * n / ab;
            (bound.ceil() - num_bigint::BigInt::from(1)).to_usize().unwrap_or(0)
        }
    };
    let label = |f: rainbowfrac::complex::Face| {
        let mut s = String::new();
        for (i, el) in f.iter().enumerate() {
            let (e, c) = universe.elements[el];
            let _ = write!(s, "{}{e}:{c}", if i > 0 { "," } else { "" });
        }
        if s.is_empty() {
            s.push('-');
        }
        s
    };
    writeln!(out, "universe {} d {d}", universe.len())?;
    match km_witness(&lifted, &m, d) {
        Ok(Some(tau)) => {
            let rank = m.rank(rainbowfrac::complex::Face::full(universe.len()).minus(tau));
            writeln!(out, "WITNESS")?;
            writeln!(out, "face {}", label(tau))?;
            writeln!(out, "complement_rank {rank}")?;
            Ok(Answer::Yes)
        }
        Ok(None) => {
            writeln!(out, "ABSENT")?;
            Ok(Answer::No)
        }
        Err(MatroidError::NotContained(bad)) => {
            writeln!(out, "NOT_CONTAINED")?;
            writeln!(out, "independent {}", label(bad))?;
            Ok(Answer::No)
        }
        Err(e) => Err(e.into()),
    }
}

fn generate(
    kind: Kind,
    n: Option<usize>,
    k: Option<usize>,
    q: Option<usize>,
    copies: Option<usize>,
    output: Option<&Path>,
    out: &mut String,
) -> Result<Answer> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| anyhow!("this kind needs --{flag}"));
    let kind = match kind {
        Kind::Drisko => ConstructionKind::Drisko { n: need(n, "n")? },
        Kind::Bgs => ConstructionKind::Bgs { n: need(n, "n")? },
        Kind::OddCycle => ConstructionKind::OddCycle { k: need(k, "k")? },
        Kind::TwoOddCycles => ConstructionKind::TwoOddCycles { n: need(n, "n")? },
        Kind::TruncatedPlane => ConstructionKind::TruncatedPlane { q: need(q, "q")? },
    };
    let (family, target) = ConstructionSpec { kind, copies }.build()?;
    let text = format!(
        "% {} colors, each with fractional matching number {target}\n{}",
        family.color_count(),
        Instance::from_family(&family).to_text()
    );
    match output {
        Some(p) => write_file(p, &text)?,
        None => out.push_str(&text),
    }
    Ok(Answer::Yes)
}

//! Command-line front end.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::bound::{palette_lower_bound, verify};
use crate::coloring::{
    determinant, enumerate_canonical_colorings, enumerate_colorings, prime_factors, ColoringClass,
    ColoringError, ColoringFilter, ColoringStream, DEFAULT_CAP,
};
use crate::diagram::{build_diagram, parse_named_pd, DiagramError, LinkDiagram, PdError};
use crate::tables::{bundled_entries, check_expected, lookup_entry, resolve_table, TableError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_INVALID: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "linkchroma", version, about = "Fox colorings of link diagrams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the determinant of each diagram.
    Det {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// List colorings mod n with their classification.
    Colorings {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        moduli: Moduli,
        /// Keep only these colorings (default: all).
        #[arg(long, value_parser = parse_filter)]
        filter: Option<ColoringFilter>,
        #[arg(long, default_value_t = DEFAULT_CAP, value_parser = clap::value_parser!(u64).range(1..))]
        cap: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Least palette on the diagram next to the lower bound 2^(l-1) >= n.
    Mincolors {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        moduli: Moduli,
        #[arg(long, value_parser = parse_filter, default_value = "effective")]
        filter: ColoringFilter,
        #[arg(long, default_value_t = DEFAULT_CAP, value_parser = clap::value_parser!(u64).range(1..))]
        cap: u64,
        /// Scan every coloring instead of one per affine orbit.
        #[arg(long)]
        full_enumeration: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Emit a bound certificate for every effective coloring.
    Verify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        moduli: Moduli,
        #[arg(long, default_value_t = DEFAULT_CAP, value_parser = clap::value_parser!(u64).range(1..))]
        cap: u64,
        /// Certify every effective coloring instead of one per affine orbit.
        #[arg(long)]
        full_enumeration: bool,
        #[command(flatten)]
        output: Output,
    },
    /// CSV summary of a table.
    Table {
        /// Table path or file name (default: all bundled tables).
        #[arg(long)]
        table: Option<String>,
        /// Moduli for the per-n columns; repeatable.
        #[arg(short = 'n', value_parser = parse_modulus)]
        n: Vec<ModulusSpec>,
        #[arg(long, default_value_t = DEFAULT_CAP, value_parser = clap::value_parser!(u64).range(1..))]
        cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Inline PD code, e.g. "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]".
    #[arg(long)]
    pd: Option<String>,
    /// File holding a PD code or a {"name", "pd"} JSON object.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Entry name looked up in the tables.
    #[arg(long)]
    knot: Option<String>,
    /// Every entry of a table (path, or file name under $LINKCHROMA_TABLE_DIR or bundled).
    #[arg(long)]
    table: Option<String>,
}

#[derive(Debug, Args)]
pub struct Moduli {
    /// Modulus `n` or inclusive range `a..b`; repeatable. Ranges keep only n
    /// whose prime factors all divide the determinant.
    #[arg(short = 'n', required = true, value_parser = parse_modulus)]
    n: Vec<ModulusSpec>,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write data rows here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusSpec {
    Single(u64),
    Range(u64, u64),
}

impl FromStr for ModulusSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("'{t}' is not a non-negative integer"))
                .and_then(|n| {
                    if n < 2 {
                        Err(format!("n must be at least 2, got {n}"))
                    } else {
                        Ok(n)
                    }
                })
        };
        match s.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range {a}..{b}"));
                }
                Ok(Self::Range(a, b))
            }
            None => num(s).map(Self::Single),
        }
    }
}

fn parse_modulus(s: &str) -> Result<ModulusSpec, String> {
    s.parse()
}

fn parse_filter(s: &str) -> Result<ColoringFilter, String> {
    s.parse()
}

/// Sorted, deduplicated moduli for a diagram with determinant `det`.
pub fn expand_moduli(specs: &[ModulusSpec], det: &BigUint) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    for spec in specs {
        match *spec {
            ModulusSpec::Single(n) => out.push(n),
            ModulusSpec::Range(a, b) => out
                .extend((a..=b).filter(|&n| prime_factors(n).iter().all(|&p| (det % p).is_zero()))),
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown table entry {0:?}")]
    UnknownEntry(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("{0}")]
    Pd(#[from] PdError),
    #[error("{0}")]
    Diagram(#[from] DiagramError),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
}

struct Target {
    name: Option<String>,
    diagram: LinkDiagram,
    crossings: usize,
    det: BigUint,
}

impl Target {
    fn new(name: Option<String>, diagram: LinkDiagram) -> Self {
        let det = determinant(&diagram);
        Self {
            name,
            crossings: diagram.crossing_count(),
            diagram,
            det,
        }
    }

    fn label(&self) -> &str {
        self.name.as_deref().unwrap_or("-")
    }
}

fn resolve_targets(source: &Source) -> Result<Vec<Target>, CliError> {
    if let Some(text) = &source.pd {
        let (name, pd) = parse_named_pd(text)?;
        return Ok(vec![Target::new(name, build_diagram(&pd)?)]);
    }
    if let Some(path) = &source.file {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.clone(),
            source,
        })?;
        let (name, pd) = parse_named_pd(text.trim())?;
        return Ok(vec![Target::new(name, build_diagram(&pd)?)]);
    }
    if let Some(name) = &source.knot {
        let entry = lookup_entry(name)?.ok_or_else(|| CliError::UnknownEntry(name.clone()))?;
        return Ok(vec![Target::new(
            Some(entry.name.clone()),
            entry.diagram()?,
        )]);
    }
    let spec = source.table.as_deref().expect("clap enforces one source");
    resolve_table(spec)?
        .into_iter()
        .map(|e| Ok(Target::new(Some(e.name.clone()), e.diagram()?)))
        .collect()
}

/// Output of one target: data for stdout or `--out`, diagnostics for stderr.
#[derive(Default)]
struct Chunk {
    data: String,
    diag: String,
    cap_hit: bool,
    invalid: bool,
}

fn exit_code(chunks: &[Chunk]) -> u8 {
    if chunks.iter().any(|c| c.invalid) {
        EXIT_INVALID
    } else if chunks.iter().any(|c| c.cap_hit) {
        EXIT_CAP
    } else {
        EXIT_OK
    }
}

fn emit(
    header: Option<&str>,
    chunks: &[Chunk],
    out: Option<&PathBuf>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let mut data = String::new();
    if let Some(h) = header {
        data.push_str(h);
        data.push('\n');
    }
    for c in chunks {
        data.push_str(&c.data);
        stderr.write_all(c.diag.as_bytes())?;
    }
    match out {
        Some(path) => std::fs::write(path, data)?,
        None => stdout.write_all(data.as_bytes())?,
    }
    Ok(())
}

/// Runs a parsed command and returns the process exit status.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Det { source, output } => {
            let targets = resolve_targets(&source)?;
            let chunks: Vec<Chunk> = targets
                .par_iter()
                .map(|t| det_chunk(t, output.format))
                .collect();
            let header = (output.format == Format::Csv).then_some("name,crossings,det");
            emit(header, &chunks, output.out.as_ref(), stdout, stderr)?;
            Ok(exit_code(&chunks))
        }
        Command::Colorings {
            source,
            moduli,
            filter,
            cap,
            output,
        } => {
            let targets = resolve_targets(&source)?;
            let filter = filter.unwrap_or(ColoringFilter::All);
            let chunks: Vec<Chunk> = targets
                .par_iter()
                .map(|t| colorings_chunk(t, &moduli.n, filter, cap, output.format))
                .collect();
            let header = (output.format == Format::Csv).then_some("name,n,coloring,palette,class");
            emit(header, &chunks, output.out.as_ref(), stdout, stderr)?;
            Ok(exit_code(&chunks))
        }
        Command::Mincolors {
            source,
            moduli,
            filter,
            cap,
            full_enumeration,
            output,
        } => {
            let targets = resolve_targets(&source)?;
            let chunks: Vec<Chunk> = targets
                .par_iter()
                .map(|t| {
                    mincolors_chunk(t, &moduli.n, filter, cap, full_enumeration, output.format)
                })
                .collect();
            let header = (output.format == Format::Csv).then_some("name,n,lower,diagram_min");
            emit(header, &chunks, output.out.as_ref(), stdout, stderr)?;
            Ok(exit_code(&chunks))
        }
        Command::Verify {
            source,
            moduli,
            cap,
            full_enumeration,
            output,
        } => {
            let targets = resolve_targets(&source)?;
            let chunks: Vec<Chunk> = targets
                .par_iter()
                .map(|t| verify_chunk(t, &moduli.n, cap, full_enumeration, output.format))
                .collect();
            let header = (output.format == Format::Csv).then_some("name,n,coloring,l,det_B,valid");
            emit(header, &chunks, output.out.as_ref(), stdout, stderr)?;
            Ok(exit_code(&chunks))
        }
        Command::Table { table, n, cap, out } => {
            let entries = match &table {
                Some(spec) => resolve_table(spec)?,
                None => bundled_entries(),
            };
            let report = check_expected(&entries);
            let targets: Vec<Target> = entries
                .into_iter()
                .map(|e| Ok(Target::new(Some(e.name.clone()), e.diagram()?)))
                .collect::<Result<_, CliError>>()?;
            let moduli = expand_moduli(&n, &BigUint::zero());
            let mut header = String::from("name,crossings,det");
            for m in &moduli {
                write!(header, ",eff_n{m},min_n{m},bound_n{m},cert_n{m}").unwrap();
            }
            let chunks: Vec<Chunk> = targets
                .par_iter()
                .map(|t| table_chunk(t, &moduli, cap))
                .collect();
            emit(Some(&header), &chunks, out.as_ref(), stdout, stderr)?;
            for m in &report.mismatches {
                writeln!(
                    stderr,
                    "error: {}: determinant {} but table says {}",
                    m.name, m.computed, m.expected
                )?;
            }
            Ok(if report.is_clean() {
                exit_code(&chunks)
            } else {
                EXIT_INPUT
            })
        }
    }
}

fn json_number(v: &BigUint) -> serde_json::Value {
    match v.to_u64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

fn det_chunk(t: &Target, format: Format) -> Chunk {
    let mut c = Chunk::default();
    match format {
        Format::Human => match &t.name {
            Some(name) => writeln!(c.data, "{name} {}", t.det),
            None => writeln!(c.data, "{}", t.det),
        },
        Format::Json => writeln!(
            c.data,
            "{}",
            json!({"name": t.name, "crossings": t.crossings, "det": json_number(&t.det)})
        ),
        Format::Csv => writeln!(
            c.data,
            "{},{},{}",
            t.name.as_deref().unwrap_or(""),
            t.crossings,
            t.det
        ),
    }
    .unwrap();
    c
}

fn class_label(class: &ColoringClass) -> &'static str {
    if class.is_trivial {
        "trivial"
    } else if class.is_effective {
        "effective"
    } else {
        "nontrivial"
    }
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn cap_marker(c: &mut Chunk, t: &Target, n: u64, cap: u64, format: Format) {
    c.cap_hit = true;
    match format {
        Format::Json => writeln!(
            c.data,
            "{}",
            json!({"name": t.name, "n": n, "partial": true, "cap": cap})
        ),
        _ => writeln!(
            c.data,
            "# PARTIAL {} n={n}: enumeration cap {cap} reached",
            t.label()
        ),
    }
    .unwrap();
    writeln!(
        c.diag,
        "{} n={n}: enumeration cap {cap} reached, output is partial",
        t.label()
    )
    .unwrap();
}

fn colorings_chunk(
    t: &Target,
    specs: &[ModulusSpec],
    filter: ColoringFilter,
    cap: u64,
    format: Format,
) -> Chunk {
    let mut c = Chunk::default();
    for n in expand_moduli(specs, &t.det) {
        let stream = enumerate_colorings(&t.diagram, n, ColoringFilter::All, cap).expect("n >= 2");
        let (mut total, mut nontrivial, mut effective, mut shown) = (0u64, 0u64, 0u64, 0u64);
        let mut capped = false;
        for item in stream {
            let (col, class) = match item {
                Ok(v) => v,
                Err(ColoringError::CapExceeded { .. }) => {
                    capped = true;
                    break;
                }
                Err(e) => unreachable!("enumeration only fails on the cap: {e}"),
            };
            total += 1;
            nontrivial += u64::from(!class.is_trivial);
            effective += u64::from(class.is_effective);
            if !filter.accepts(&class) {
                continue;
            }
            shown += 1;
            let label = class_label(&class);
            match format {
                Format::Human => writeln!(
                    c.data,
                    "{}  palette {}  {label}",
                    join(col.values()),
                    class.palette_size
                ),
                Format::Json => writeln!(
                    c.data,
                    "{}",
                    json!({
                        "name": t.name,
                        "n": n,
                        "coloring": col.values(),
                        "palette": class.palette_size,
                        "class": label,
                        "p_trivial": class.p_trivial_primes,
                    })
                ),
                Format::Csv => writeln!(
                    c.data,
                    "{},{n},{},{},{label}",
                    t.name.as_deref().unwrap_or(""),
                    join(col.values()),
                    class.palette_size
                ),
            }
            .unwrap();
        }
        if capped {
            cap_marker(&mut c, t, n, cap, format);
        }
        let summary = format!(
            "{} n={n}: {total} colorings, {nontrivial} nontrivial, {effective} effective, {shown} shown ({filter})",
            t.label()
        );
        if format == Format::Human {
            writeln!(c.data, "{summary}").unwrap();
        } else {
            writeln!(c.diag, "{summary}").unwrap();
        }
    }
    c
}

fn stream_for(t: &Target, n: u64, filter: ColoringFilter, cap: u64, full: bool) -> ColoringStream {
    if full {
        enumerate_colorings(&t.diagram, n, filter, cap)
    } else {
        enumerate_canonical_colorings(&t.diagram, n, filter, cap)
    }
    .expect("n >= 2")
}

/// Least palette and whether the cap cut the scan short.
fn scan_min(
    t: &Target,
    n: u64,
    filter: ColoringFilter,
    cap: u64,
    full: bool,
) -> (Option<usize>, bool) {
    let mut best: Option<usize> = None;
    for item in stream_for(t, n, filter, cap, full) {
        match item {
            Ok((_, class)) => {
                best = Some(best.map_or(class.palette_size, |b| b.min(class.palette_size)))
            }
            Err(_) => return (best, true),
        }
    }
    (best, false)
}

fn mincolors_chunk(
    t: &Target,
    specs: &[ModulusSpec],
    filter: ColoringFilter,
    cap: u64,
    full: bool,
    format: Format,
) -> Chunk {
    let mut c = Chunk::default();
    for n in expand_moduli(specs, &t.det) {
        let lower = palette_lower_bound(n);
        let (best, capped) = scan_min(t, n, filter, cap, full);
        let upper = best.map_or_else(|| "none".to_string(), |b| b.to_string());
        match format {
            Format::Human => writeln!(
                c.data,
                "{} n={n}: lower {lower}, diagram-min {upper}, C*_{n} in [{lower}, {upper}]",
                t.label()
            ),
            Format::Json => writeln!(
                c.data,
                "{}",
                json!({
                    "name": t.name,
                    "n": n,
                    "lower": lower,
                    "diagram_min": best,
                    "interval": [json!(lower), json!(best)],
                })
            ),
            Format::Csv => writeln!(
                c.data,
                "{},{n},{lower},{upper}",
                t.name.as_deref().unwrap_or("")
            ),
        }
        .unwrap();
        if capped {
            cap_marker(&mut c, t, n, cap, format);
        }
    }
    c
}

fn verify_chunk(t: &Target, specs: &[ModulusSpec], cap: u64, full: bool, format: Format) -> Chunk {
    let mut c = Chunk::default();
    if t.det.is_zero() {
        writeln!(c.diag, "{}: determinant 0, skipped", t.label()).unwrap();
        return c;
    }
    for n in expand_moduli(specs, &t.det) {
        let (mut valid, mut invalid) = (0u64, 0u64);
        let mut capped = false;
        for item in stream_for(t, n, ColoringFilter::Effective, cap, full) {
            let col = match item {
                Ok((col, _)) => col,
                Err(_) => {
                    capped = true;
                    break;
                }
            };
            let cert = match verify(&t.diagram, &col, t.name.as_deref()) {
                Ok(cert) => cert,
                Err(e) => {
                    invalid += 1;
                    c.invalid = true;
                    writeln!(c.diag, "{} n={n}: coloring {col}: {e}", t.label()).unwrap();
                    continue;
                }
            };
            let rec = cert.record();
            if rec.valid {
                valid += 1;
            } else {
                invalid += 1;
                c.invalid = true;
            }
            match format {
                Format::Csv => writeln!(
                    c.data,
                    "{},{n},{},{},{},{}",
                    t.name.as_deref().unwrap_or(""),
                    join(&rec.coloring),
                    rec.l,
                    rec.det_b,
                    rec.valid
                ),
                _ => writeln!(
                    c.data,
                    "{}",
                    serde_json::to_string(&rec).expect("record serializes")
                ),
            }
            .unwrap();
        }
        if capped {
            cap_marker(&mut c, t, n, cap, format);
        }
        if valid + invalid == 0 {
            writeln!(c.diag, "{} n={n}: no effective colorings", t.label()).unwrap();
        } else {
            let total = valid + invalid;
            let noun = if total == 1 {
                "certificate"
            } else {
                "certificates"
            };
            writeln!(
                c.diag,
                "{} n={n}: {total} {noun}, {valid} valid, {invalid} invalid",
                t.label()
            )
            .unwrap();
        }
    }
    c
}

fn table_chunk(t: &Target, moduli: &[u64], cap: u64) -> Chunk {
    let mut c = Chunk::default();
    write!(c.data, "{},{},{}", t.label(), t.crossings, t.det).unwrap();
    for &n in moduli {
        let mut eff = 0u64;
        let mut capped = false;
        for item in
            enumerate_colorings(&t.diagram, n, ColoringFilter::Effective, cap).expect("n >= 2")
        {
            match item {
                Ok(_) => eff += 1,
                Err(_) => {
                    capped = true;
                    break;
                }
            }
        }
        let (best, min_capped) = scan_min(t, n, ColoringFilter::Effective, cap, false);
        let cert = table_cert_status(t, n, cap);
        if cert == "invalid" {
            c.invalid = true;
        }
        let capped = capped || min_capped || cert == "capped";
        if capped {
            c.cap_hit = true;
            writeln!(
                c.diag,
                "{} n={n}: enumeration cap {cap} reached, counts are partial",
                t.label()
            )
            .unwrap();
        }
        let eff = if capped {
            format!("{eff}+")
        } else {
            eff.to_string()
        };
        let min = best.map_or_else(|| "none".to_string(), |b| b.to_string());
        write!(c.data, ",{eff},{min},{},{cert}", palette_lower_bound(n)).unwrap();
    }
    c.data.push('\n');
    c
}

fn table_cert_status(t: &Target, n: u64, cap: u64) -> &'static str {
    if t.det.is_zero() {
        return "skipped";
    }
    let mut any = false;
    for item in stream_for(t, n, ColoringFilter::Effective, cap, false) {
        let Ok((col, _)) = item else {
            return "capped";
        };
        any = true;
        match verify(&t.diagram, &col, t.name.as_deref()) {
            Ok(cert) if cert.is_valid() => {}
            _ => return "invalid",
        }
    }
    if any {
        "valid"
    } else {
        "none"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_specs() {
        assert_eq!("7".parse::<ModulusSpec>(), Ok(ModulusSpec::Single(7)));
        assert_eq!(
            "2..30".parse::<ModulusSpec>(),
            Ok(ModulusSpec::Range(2, 30))
        );
        assert!("1".parse::<ModulusSpec>().is_err());
        assert!("5..3".parse::<ModulusSpec>().is_err());
        assert!("x".parse::<ModulusSpec>().is_err());
    }

    #[test]
    fn invalid_outranks_cap() {
        let capped = Chunk {
            cap_hit: true,
            ..Chunk::default()
        };
        let invalid = Chunk {
            invalid: true,
            ..Chunk::default()
        };
        assert_eq!(exit_code(&[]), EXIT_OK);
        assert_eq!(exit_code(&[Chunk::default(), capped]), EXIT_CAP);
        let capped = Chunk {
            cap_hit: true,
            ..Chunk::default()
        };
        assert_eq!(exit_code(&[capped, invalid]), EXIT_INVALID);
    }

    #[test]
    fn ranges_keep_divisor_primes() {
        let specs = [ModulusSpec::Range(2, 30)];
        assert_eq!(expand_moduli(&specs, &BigUint::from(3u32)), vec![3, 9, 27]);
        assert_eq!(
            expand_moduli(&specs, &BigUint::from(45u32)),
            vec![3, 5, 9, 15, 25, 27]
        );
        let mixed = [ModulusSpec::Single(4), ModulusSpec::Range(2, 10)];
        assert_eq!(expand_moduli(&mixed, &BigUint::from(5u32)), vec![4, 5]);
    }
}

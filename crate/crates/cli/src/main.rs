//! `ddlift`: build, verify and inspect divisible designs.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use ddlift::construct::{self, ConstructError, Construction, ConstructionSpec};
use ddlift::design::{DivisibleDesign, PointTable};
use ddlift::document::{DesignDocument, DocumentError};
use ddlift::limits::{GuardExceeded, Limits};
use ddlift::verify::{self, HypersimpleReport, VerificationReport, VerifyError};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_GUARD: u8 = 3;

const BUILD_EXAMPLES: &str = "\
Constructions:
  nrc-lift       one-block design on the normal rational curve of PG(t-1,q), lifted by c
  veronese-lift  one-block design on the Veronese variety of PG(m,q), degree t-1, lifted by c
  witt12         W12 embedded in PG(5,3)
  witt12-lift    W12 lifted by c
  witt24         W24 embedded in PG(11,2), optionally lifted by c
  trivial-lift   one-block design on --base nrc|veronese|witt12|witt24|quadric|code, lifted by c
  quadric        circles of the elliptic quadric of PG(3,q), optionally lifted by c
  product        product lift of --base fano|witt12|witt24|quadric or of an --input document, fibre size w
  code           one-block design on the columns of a parity-check matrix (--input), lifted by c
  affine-poly    graphs of c-tuples of polynomials in m variables of degree < t over GF(q)
  sections       like trivial-lift, with blocks computed as sections of the cone

Examples:
  ddlift build nrc-lift --q 3 --t 3 --c 1 --out nrc.json
  ddlift build witt12-lift --c 1
  ddlift build product --base fano --w 2
  ddlift build code --q 2 --t 2 --c 1 --input hamming.txt
  ddlift build affine-poly --q 3 --m 1 --t 3 --c 1

Matrix files hold one row per line with space-separated residues; '#' starts a comment.";

const VERIFY_EXAMPLES: &str = "\
Examples:
  ddlift verify nrc.json
  ddlift verify w12.json --hypersimple --s-expected 1
  ddlift build witt12-lift --c 1 | ddlift verify -";

#[derive(Parser)]
#[command(name = "ddlift", version, about = "Construct and verify t-divisible designs by lifting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a design and write its JSON document.
    #[command(after_help = BUILD_EXAMPLES)]
    Build(BuildArgs),
    /// Check every axiom of a design document exhaustively.
    #[command(after_help = VERIFY_EXAMPLES)]
    Verify(VerifyArgs),
    /// Print the parameters a construction will have, without building it.
    #[command(after_help = "Example:\n  ddlift params witt12-lift --c 2")]
    Params(ParamsArgs),
    /// Compute the isomorphism-invariant fingerprint of a design document.
    Fingerprint(FingerprintArgs),
    /// Rewrite a design document canonically, or as plain text.
    Export(ExportArgs),
}

#[derive(Args)]
struct SpecArgs {
    /// Field order (a prime power)
    #[arg(long)]
    q: Option<u64>,
    /// Field characteristic
    #[arg(long)]
    p: Option<u32>,
    /// Extension degree (with --p)
    #[arg(long)]
    e: Option<u32>,
    /// Irreducible modulus coefficients, constant term first, comma separated (with --p, --e)
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// Dimension of the Veronese source or number of polynomial variables
    #[arg(long)]
    m: Option<usize>,
    /// Strength t
    #[arg(long)]
    t: Option<u64>,
    /// Lift count c (class size grows by q^c)
    #[arg(long)]
    c: Option<usize>,
    /// Fibre size of the product lift
    #[arg(long)]
    w: Option<u64>,
    /// Use only the first k points of the base point set
    #[arg(long)]
    k: Option<usize>,
    /// Base point set or base design
    #[arg(long)]
    base: Option<String>,
    /// Matrix file (code) or design document (product)
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct GuardArgs {
    /// Largest number of blocks to materialize
    #[arg(long)]
    max_blocks: Option<u64>,
    /// Largest number of t-subsets to enumerate
    #[arg(long)]
    max_subsets: Option<u64>,
}

impl GuardArgs {
    fn limits(&self) -> Limits {
        let mut l = Limits::default();
        if let Some(b) = self.max_blocks {
            l.max_blocks = b;
        }
        if let Some(s) = self.max_subsets {
            l.max_subsets = s;
        }
        l
    }
}

/// Contents of a --config file: the construction name and any construction or
/// guard flag, keyed by its long name with `-` written as `_`.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    construction: Option<String>,
    q: Option<u64>,
    p: Option<u32>,
    e: Option<u32>,
    modulus: Option<Vec<u32>>,
    m: Option<usize>,
    t: Option<u64>,
    c: Option<usize>,
    w: Option<u64>,
    k: Option<usize>,
    base: Option<String>,
    input: Option<PathBuf>,
    max_blocks: Option<u64>,
    max_subsets: Option<u64>,
}

#[derive(Args)]
struct ConstructionArgs {
    /// Construction name (see --help); may come from --config instead
    construction: Option<String>,
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    guards: GuardArgs,
    /// JSON file bundling any of the flags above; command-line flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    construction: ConstructionArgs,
    /// Also compute and embed the fingerprint
    #[arg(long)]
    fingerprint: bool,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParamsArgs {
    #[command(flatten)]
    construction: ConstructionArgs,
    /// Print JSON instead of a table
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Design document, or - for stdin
    document: PathBuf,
    /// Strength to check instead of the declared t
    #[arg(long)]
    t: Option<u64>,
    /// Also check s-hypersimplicity
    #[arg(long, requires = "s_expected")]
    hypersimple: bool,
    /// Expected s for --hypersimple
    #[arg(long)]
    s_expected: Option<u64>,
    #[command(flatten)]
    guards: GuardArgs,
    /// Output file for the JSON report (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FingerprintArgs {
    /// Design document, or - for stdin
    document: PathBuf,
    /// Write the document with the fingerprint embedded instead of the bare fingerprint
    #[arg(long)]
    attach: bool,
    #[command(flatten)]
    guards: GuardArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    /// Canonical JSON document
    Json,
    /// One block per line, point indices separated by spaces
    Blocks,
    /// One point per line: index, class, coordinates
    Points,
}

#[derive(Args)]
struct ExportArgs {
    /// Design document, or - for stdin
    document: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: ExportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let error = e.into();
        let code = classify(&error);
        Failure { code, error }
    }
}

fn classify(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.downcast_ref::<GuardExceeded>().is_some() {
            return EXIT_GUARD;
        }
        if let Some(c) = cause.downcast_ref::<ConstructError>() {
            if c.guard().is_some() {
                return EXIT_GUARD;
            }
        }
        if let Some(VerifyError::Guard(_)) = cause.downcast_ref::<VerifyError>() {
            return EXIT_GUARD;
        }
    }
    EXIT_USAGE
}

fn read_source(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn read_document(path: &Path) -> Result<DivisibleDesign> {
    let text = read_source(path)?;
    let doc: std::result::Result<DesignDocument, DocumentError> = DesignDocument::parse(&text);
    let doc = doc.with_context(|| format!("parsing {}", path.display()))?;
    Ok(doc.to_design()?)
}

/// Merges --config with the command line; flags given on the command line win.
fn resolve(args: &ConstructionArgs) -> Result<(Construction, ConstructionSpec, Limits)> {
    let config: ConfigFile = match &args.config {
        Some(path) => {
            let text = read_source(path)?;
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?
        }
        None => ConfigFile::default(),
    };
    let cfg = config;
    let name = args
        .construction
        .clone()
        .or(cfg.construction.clone())
        .ok_or_else(|| ConstructError::Usage("a construction name is required".into()))?;
    let construction: Construction = name.parse()?;
    let s = &args.spec;
    let input = s.input.clone().or(cfg.input);
    let spec = ConstructionSpec {
        q: s.q.or(cfg.q),
        p: s.p.or(cfg.p),
        e: s.e.or(cfg.e),
        modulus: s.modulus.clone().or(cfg.modulus),
        m: s.m.or(cfg.m),
        t: s.t.or(cfg.t),
        c: s.c.or(cfg.c),
        w: s.w.or(cfg.w),
        k: s.k.or(cfg.k),
        base: s.base.clone().or(cfg.base),
        input: input.as_deref().map(read_source).transpose()?,
    };
    let guards = GuardArgs {
        max_blocks: args.guards.max_blocks.or(cfg.max_blocks),
        max_subsets: args.guards.max_subsets.or(cfg.max_subsets),
    };
    Ok((construction, spec, guards.limits()))
}

fn cmd_build(args: &BuildArgs) -> Result<u8, Failure> {
    let (c, spec, limits) = resolve(&args.construction)?;
    let built = construct::build(c, &spec, &limits)?;
    for note in &built.notes {
        eprintln!("warning: {note}");
    }
    let fp = if args.fingerprint { Some(verify::fingerprint(&built.design, &limits)?) } else { None };
    let mut text = DesignDocument::from_design(&built.design, fp).to_json();
    text.push('\n');
    write_output(args.out.as_deref(), &text)?;
    eprintln!("built {c}: {} v={} blocks={}", built.design.params(), built.design.v(), built.design.b());
    Ok(0)
}

fn cmd_params(args: &ParamsArgs) -> Result<u8, Failure> {
    let (c, spec, limits) = resolve(&args.construction)?;
    let p = construct::predict(c, &spec, &limits)?;
    if args.json {
        println!("{}", serde_json::to_string(&p)?);
    } else {
        println!("t           {}", p.t);
        println!("s           {}", p.s);
        println!("k           {}", p.k);
        println!("lambda      {}", p.lambda);
        println!("v           {}", p.v);
        println!("block_count {}", p.block_count);
    }
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    verification: &'a VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    hypersimple: Option<&'a HypersimpleReport>,
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let d = read_document(&args.document)?;
    let limits = args.guards.limits();
    let t = args.t.unwrap_or(d.params().t);
    let report = verify::check_axioms(&d, t, &limits)?;
    let hyper = match (args.hypersimple, args.s_expected) {
        (true, Some(s)) => Some(verify::check_hypersimple(&d, t, s, &limits)?),
        _ => None,
    };
    let out = VerifyOutput { verification: &report, hypersimple: hyper.as_ref() };
    let mut text = serde_json::to_string(&out)?;
    text.push('\n');
    write_output(args.out.as_deref(), &text)?;
    let pass = report.pass && hyper.as_ref().is_none_or(|h| h.pass);
    let checks = [
        ("A", &report.axiom_a),
        ("B", &report.axiom_b),
        ("C", &report.axiom_c),
        ("D", &report.axiom_d),
    ];
    for (name, check) in checks {
        if let Some(w) = &check.witness {
            eprintln!("axiom {name} fails: {}", serde_json::to_string(w)?);
        }
    }
    if let Some(h) = &hyper {
        if let Some(w) = &h.witness {
            eprintln!("not {}-hypersimple: block {}, subset {:?}, {} blocks", h.s_expected, w.0, w.1, w.2);
        }
    }
    eprintln!(
        "{}: declared {}, checked t={} over {} transversal subsets",
        if pass { "PASS" } else { "FAIL" },
        report.declared,
        t,
        report.counts.transversal_subsets
    );
    Ok(if pass { 0 } else { EXIT_FAIL })
}

fn cmd_fingerprint(args: &FingerprintArgs) -> Result<u8, Failure> {
    let d = read_document(&args.document)?;
    let fp = verify::fingerprint(&d, &args.guards.limits())?;
    let mut text = if args.attach {
        DesignDocument::from_design(&d, Some(fp)).to_json()
    } else {
        serde_json::to_string(&fp)?
    };
    text.push('\n');
    write_output(args.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_export(args: &ExportArgs) -> Result<u8, Failure> {
    let text = read_source(&args.document)?;
    let doc = DesignDocument::parse(&text).with_context(|| format!("parsing {}", args.document.display()))?;
    let d = doc.to_design()?;
    let mut out = String::new();
    match args.format {
        ExportFormat::Json => {
            out = doc.to_json();
            out.push('\n');
        }
        ExportFormat::Blocks => {
            for b in d.blocks() {
                let line: Vec<String> = b.iter().map(u32::to_string).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
        ExportFormat::Points => {
            let coords: Vec<String> = match d.points() {
                PointTable::Projective { points, .. } => points.iter().map(|p| p.to_string()).collect(),
                PointTable::Affine { points, .. } => points
                    .iter()
                    .map(|p| {
                        let cs: Vec<String> = p.iter().map(|e| e.0.to_string()).collect();
                        format!("({})", cs.join(","))
                    })
                    .collect(),
                PointTable::Labels(labels) => labels.iter().map(|l| format!("{l:?}")).collect(),
            };
            for (i, c) in coords.iter().enumerate() {
                out.push_str(&format!("{i} {} {c}\n", d.class_of()[i]));
            }
        }
    }
    write_output(args.out.as_deref(), &out)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Params(a) => cmd_params(a),
        Command::Fingerprint(a) => cmd_fingerprint(a),
        Command::Export(a) => cmd_export(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}

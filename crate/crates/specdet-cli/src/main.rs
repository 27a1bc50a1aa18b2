//! Command-line frontend for the spectral determinant library.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use specdet::combinatorics::{coeff_table, CoeffKind};
use specdet::expansion::explicit_build;
use specdet::{
    det_closed_form, det_lowdim_constant, det_table, det_voros, DetResult, Manifold, ManifoldKind,
    Rational,
};

#[derive(Parser)]
#[command(
    name = "specdet",
    version,
    about = "Zeta-regularized Laplacian determinants on spheres, hemispheres, \
             projective spaces, and the quantum harmonic oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a single determinant
    Det(DetArgs),
    /// Tabulate determinants for every dimension up to a bound
    Table(TableArgs),
    /// Emit plot-ready determinant data with a parity column
    Figure(FigureArgs),
    /// Evaluate the shifted spectral zeta function, its derivative, or its poles
    Zeta(ZetaArgs),
    /// Print one row of an exact coefficient table
    Coeffs(CoeffsArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum FamilyArg {
    Sphere,
    Hemisphere,
    Projective,
    Oscillator,
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum FamilyOrAll {
    Sphere,
    Hemisphere,
    Projective,
    Oscillator,
    All,
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum MethodArg {
    /// Stirling-number closed form
    ClosedForm,
    /// Shifted-series assembly with a tail bound
    Voros,
    /// Exact low-dimension sphere constants
    Lowdim,
}

#[derive(Copy, Clone, ValueEnum)]
enum CoeffArg {
    StirlingS1,
    CentralT,
    U,
    V,
    UBar,
    VBar,
}

#[derive(Args)]
struct DetArgs {
    /// Manifold family
    #[arg(long, value_enum)]
    manifold: FamilyArg,
    /// Dimension of the manifold (degrees of freedom for the oscillator)
    #[arg(long)]
    dim: u32,
    /// Significant digits; defaults to SPECDET_DIGITS or 64
    #[arg(long)]
    digits: Option<u32>,
    /// Evaluation route
    #[arg(long, value_enum, default_value_t = MethodArg::ClosedForm)]
    method: MethodArg,
    /// Series budget for the voros method
    #[arg(long, default_value_t = 1_000_000)]
    series_terms: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_enum, default_value_t = FamilyOrAll::All)]
    manifold: FamilyOrAll,
    /// Largest dimension to include (rows run from 1)
    #[arg(long)]
    max_dim: u32,
    #[arg(long)]
    digits: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    #[arg(long, value_enum)]
    manifold: FamilyArg,
    /// Largest dimension to include, at most 10000
    #[arg(long)]
    max_dim: u32,
    #[arg(long)]
    digits: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ZetaArgs {
    #[arg(long, value_enum)]
    manifold: FamilyArg,
    #[arg(long)]
    dim: u32,
    /// Evaluation point, an integer, fraction, or decimal such as 3, 5/2, or -2.5
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    /// Evaluate the derivative instead of the function
    #[arg(long)]
    deriv: bool,
    /// List the poles and residues instead of evaluating
    #[arg(long)]
    poles: bool,
    #[arg(long)]
    digits: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CoeffsArgs {
    /// Coefficient family
    #[arg(long, value_enum)]
    kind: CoeffArg,
    /// Row index; entries k = 0..=n are printed
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code().clamp(0, 255) as u8;
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_for(&err))
        }
    }
}

fn exit_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<specdet::Error>() {
        Some(specdet::Error::Pole(_)) => 4,
        Some(specdet::Error::ConvergenceTooSlow { .. }) => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Det(args) => cmd_det(args),
        Command::Table(args) => cmd_table(args),
        Command::Figure(args) => cmd_figure(args),
        Command::Zeta(args) => cmd_zeta(args),
        Command::Coeffs(args) => cmd_coeffs(args),
    }
}

fn kind_of(family: FamilyArg) -> ManifoldKind {
    match family {
        FamilyArg::Sphere => ManifoldKind::Sphere,
        FamilyArg::Hemisphere => ManifoldKind::HemisphereDirichlet,
        FamilyArg::Projective => ManifoldKind::RealProjective,
        FamilyArg::Oscillator => ManifoldKind::HarmonicOscillator,
    }
}

fn resolve_digits(flag: Option<u32>) -> Result<u32> {
    let digits = match flag {
        Some(d) => d,
        None => match std::env::var("SPECDET_DIGITS") {
            Ok(text) => text
                .trim()
                .parse()
                .with_context(|| format!("SPECDET_DIGITS must be an integer, got {text:?}"))?,
            Err(_) => 64,
        },
    };
    if !(10..=10_000).contains(&digits) {
        bail!("digits must lie in 10..=10000, got {digits}");
    }
    Ok(digits)
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Accepts integers, fractions, and plain decimal strings.
fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    if let Ok(q) = trimmed.parse::<Rational>() {
        return Ok(q);
    }
    let (negative, unsigned) = match trimmed.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, trimmed.strip_prefix('+').unwrap_or(trimmed)),
    };
    let (int_part, frac_part) = match unsigned.split_once('.') {
        Some((i, f)) => (i, f),
        None => (unsigned, ""),
    };
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !(all_digits(int_part) || int_part.is_empty() && all_digits(frac_part))
        || !(frac_part.is_empty() || all_digits(frac_part))
    {
        bail!("cannot parse {text:?} as a number");
    }
    let numer = format!("{int_part}{frac_part}");
    let fraction = format!("{numer}/1{}", "0".repeat(frac_part.len()));
    let q: Rational = fraction
        .parse()
        .with_context(|| format!("cannot parse {text:?} as a number"))?;
    Ok(if negative { -q } else { q })
}

fn cmd_det(args: DetArgs) -> Result<()> {
    let digits = resolve_digits(args.digits)?;
    let result = match args.method {
        MethodArg::ClosedForm => {
            det_closed_form(Manifold::new(kind_of(args.manifold), args.dim)?, digits)
        }
        MethodArg::Voros => det_voros(
            Manifold::new(kind_of(args.manifold), args.dim)?,
            digits,
            args.series_terms,
        )?,
        MethodArg::Lowdim => {
            if !matches!(args.manifold, FamilyArg::Sphere) {
                bail!("the lowdim method covers spheres only");
            }
            det_lowdim_constant(args.dim, digits)?
        }
    };
    let mut w = sink(&args.out)?;
    write_det(&mut w, &result, args.format)
}

fn write_det(w: &mut dyn Write, r: &DetResult, format: Format) -> Result<()> {
    let neg_log = r.log_det_negated.to_decimal_string(r.digits as usize);
    let det = r.det.to_decimal_string(r.digits as usize);
    match format {
        Format::Text => {
            writeln!(w, "manifold  = {}", r.manifold)?;
            writeln!(w, "method    = {}", r.method.name())?;
            writeln!(w, "digits    = {}", r.digits)?;
            writeln!(w, "-log det  = {neg_log}")?;
            writeln!(w, "det       = {det}")?;
            if let Some(bound) = &r.tail_bound {
                writeln!(w, "tail      <= {}", bound.to_decimal_string(3))?;
            }
        }
        Format::Csv => {
            writeln!(w, "dim,value")?;
            writeln!(w, "{},{det}", r.manifold.dim)?;
        }
        Format::Json => {
            writeln!(
                w,
                "{{\"manifold\": \"{}\", \"dim\": {}, \"digits\": {}, \
                 \"neg_log_det\": \"{neg_log}\", \"det\": \"{det}\"}}",
                r.manifold.kind.name(),
                r.manifold.dim,
                r.digits,
            )?;
        }
    }
    Ok(())
}

fn cmd_table(args: TableArgs) -> Result<()> {
    let digits = resolve_digits(args.digits)?;
    if args.max_dim == 0 {
        bail!("max-dim must be at least 1");
    }
    let value = |r: &DetResult| r.det.to_decimal_string(digits as usize);
    let (header, rows): (Vec<&str>, Vec<Vec<String>>) = match args.manifold {
        FamilyOrAll::All => {
            let sphere = det_table(ManifoldKind::Sphere, args.max_dim, digits);
            let hemi = det_table(ManifoldKind::HemisphereDirichlet, args.max_dim, digits);
            let proj = det_table(ManifoldKind::RealProjective, args.max_dim, digits);
            let rows = (0..args.max_dim as usize)
                .map(|i| {
                    vec![
                        (i + 1).to_string(),
                        value(&sphere[i]),
                        value(&hemi[i]),
                        value(&proj[i]),
                    ]
                })
                .collect();
            (vec!["dim", "sphere", "hemisphere", "projective"], rows)
        }
        single => {
            let kind = match single {
                FamilyOrAll::Sphere => ManifoldKind::Sphere,
                FamilyOrAll::Hemisphere => ManifoldKind::HemisphereDirichlet,
                FamilyOrAll::Projective => ManifoldKind::RealProjective,
                FamilyOrAll::Oscillator => ManifoldKind::HarmonicOscillator,
                FamilyOrAll::All => unreachable!(),
            };
            let rows = det_table(kind, args.max_dim, digits)
                .iter()
                .map(|r| vec![r.manifold.dim.to_string(), value(r)])
                .collect();
            (vec!["dim", "value"], rows)
        }
    };
    let mut w = sink(&args.out)?;
    write_rows(&mut w, args.format, &header, &rows)
}

fn cmd_figure(args: FigureArgs) -> Result<()> {
    let digits = resolve_digits(args.digits)?;
    if !(1..=10_000).contains(&args.max_dim) {
        bail!("max-dim must lie in 1..=10000, got {}", args.max_dim);
    }
    let rows: Vec<Vec<String>> = det_table(kind_of(args.manifold), args.max_dim, digits)
        .iter()
        .map(|r| {
            let parity = if r.manifold.dim % 2 == 0 {
                "even"
            } else {
                "odd"
            };
            vec![
                r.manifold.dim.to_string(),
                r.det.to_decimal_string(digits as usize),
                parity.to_string(),
            ]
        })
        .collect();
    let mut w = sink(&args.out)?;
    write_rows(&mut w, Format::Csv, &["dim", "value", "parity"], &rows)
}

fn cmd_zeta(args: ZetaArgs) -> Result<()> {
    let digits = resolve_digits(args.digits)?;
    let manifold = Manifold::new(kind_of(args.manifold), args.dim)?;
    let expansion = explicit_build(manifold);
    let mut w = sink(&args.out)?;
    if args.poles {
        let rows: Vec<Vec<String>> = expansion
            .poles()
            .iter()
            .map(|(loc, res)| vec![loc.to_string(), res.to_string()])
            .collect();
        return write_rows(&mut w, args.format, &["location", "residue"], &rows);
    }
    let Some(s_text) = &args.s else {
        bail!("either --s or --poles is required");
    };
    let s = parse_rational(s_text)?;
    let value = if args.deriv {
        expansion.eval_deriv(&s, digits)?
    } else {
        expansion.eval(&s, digits)?
    };
    let printed = value.to_decimal_string(digits as usize);
    match args.format {
        Format::Text => writeln!(&mut w, "{printed}")?,
        Format::Csv => {
            writeln!(&mut w, "s,value")?;
            writeln!(&mut w, "{s_text},{printed}")?;
        }
        Format::Json => writeln!(
            &mut w,
            "{{\"manifold\": \"{}\", \"dim\": {}, \"s\": \"{}\", \"digits\": {digits}, \
             \"deriv\": {}, \"value\": \"{printed}\"}}",
            manifold.kind.name(),
            manifold.dim,
            s_text.trim(),
            args.deriv,
        )?,
    }
    Ok(())
}

fn cmd_coeffs(args: CoeffsArgs) -> Result<()> {
    let kind = match args.kind {
        CoeffArg::StirlingS1 => CoeffKind::StirlingS1,
        CoeffArg::CentralT => CoeffKind::CentralT,
        CoeffArg::U => CoeffKind::U,
        CoeffArg::V => CoeffKind::V,
        CoeffArg::UBar => CoeffKind::UBar,
        CoeffArg::VBar => CoeffKind::VBar,
    };
    let table = coeff_table(kind, args.n);
    let row = &table.rows[args.n as usize];
    let mut w = sink(&args.out)?;
    match args.format {
        Format::Text => {
            for (k, value) in row.iter().enumerate() {
                writeln!(&mut w, "{}({},{}) = {}", kind.name(), args.n, k, value)?;
            }
        }
        Format::Csv | Format::Json => {
            let rows: Vec<Vec<String>> = row
                .iter()
                .enumerate()
                .map(|(k, value)| vec![k.to_string(), value.to_string()])
                .collect();
            write_rows(&mut w, args.format, &["k", "value"], &rows)?;
        }
    }
    Ok(())
}

fn write_rows(
    w: &mut dyn Write,
    format: Format,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    match format {
        Format::Csv => {
            writeln!(w, "{}", header.join(","))?;
            for row in rows {
                writeln!(w, "{}", row.join(","))?;
            }
        }
        Format::Text => {
            writeln!(w, "{}", header.join("  "))?;
            for row in rows {
                writeln!(w, "{}", row.join("  "))?;
            }
        }
        Format::Json => {
            writeln!(w, "[")?;
            for (i, row) in rows.iter().enumerate() {
                let fields: Vec<String> = header
                    .iter()
                    .zip(row)
                    .map(|(name, value)| {
                        if matches!(*name, "dim" | "k") {
                            format!("\"{name}\": {value}")
                        } else {
                            format!("\"{name}\": \"{value}\"")
                        }
                    })
                    .collect();
                let comma = if i + 1 == rows.len() { "" } else { "," };
                writeln!(w, "  {{{}}}{comma}", fields.join(", "))?;
            }
            writeln!(w, "]")?;
        }
    }
    Ok(())
}

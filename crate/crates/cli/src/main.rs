use std::fs;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use orthopack::cases::{evaluate_on, CaseId, Mode};
use orthopack::survey::{
    default_allowlist, find_extrema, parse_allowlist, regen_tables, render, run_sweep, Format, Record, SurveyReport,
    SweepSpec,
};
use orthopack::{Error, Order, OrthoParams, Orthoscheme};

const EXIT_USAGE: u8 = 1;
const EXIT_COMPUTATION: u8 = 2;
const EXIT_DISCREPANCY: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "orthopack", version, about = "Ball packing and covering densities of Coxeter orthoscheme groups")]
struct Cli {
    /// First orthoscheme parameter (integer >= 3 or inf)
    #[arg(long)]
    u: Option<Order>,
    #[arg(long)]
    v: Option<Order>,
    #[arg(long)]
    w: Option<Order>,

    /// Case id such as 1.s.i.a, or all
    #[arg(long, default_value = "all")]
    case: String,

    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,

    /// Regenerate a reference table (case id) or all of them
    #[arg(long)]
    table: Option<String>,

    /// Sweep ranges, e.g. u=3..9,v=3..9,w=3..9,+inf
    #[arg(long)]
    sweep: Option<String>,

    /// Report the largest packing and smallest covering density of the sweep
    #[arg(long)]
    find_extrema: bool,

    #[arg(long, value_enum, default_value_t = FormatArg::Md)]
    format: FormatArg,

    /// Decimals in md and csv output
    #[arg(long, default_value_t = 5)]
    precision: usize,

    /// Absolute tolerance for table comparisons
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,

    /// CSV of known discrepancies (table_id,mode,u,v,w,field,note)
    #[arg(long)]
    allowlist: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Packing,
    Covering,
    Both,
}

impl ModeArg {
    fn modes(self) -> Vec<Mode> {
        match self {
            ModeArg::Packing => vec![Mode::Packing],
            ModeArg::Covering => vec![Mode::Covering],
            ModeArg::Both => Mode::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Md,
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Md => Format::Markdown,
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidOrder(_) | Error::NotHyperbolic(_) | Error::UnknownCase(_) | Error::InvalidSweep(_) => {
                EXIT_USAGE
            }
            _ => EXIT_COMPUTATION,
        };
        Failure { code, message: e.to_string() }
    }
}

fn parse_cases(text: &str) -> Result<Option<Vec<CaseId>>, Failure> {
    if text == "all" {
        return Ok(None);
    }
    let ids = text
        .split(',')
        .map(|s| s.parse::<CaseId>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Some(ids))
}

fn load_allowlist(path: Option<&str>) -> Result<Vec<orthopack::survey::AllowEntry>, Failure> {
    match path {
        None => Ok(default_allowlist()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::usage(format!("cannot read allowlist {p}: {e}")))?;
            Ok(parse_allowlist(&text)?)
        }
    }
}

fn single(cli: &Cli, params: OrthoParams) -> Result<SurveyReport, Failure> {
    let w = Orthoscheme::new(params)?;
    let cases = parse_cases(&cli.case)?;
    let explicit = cases.is_some();
    let mut results = vec![];
    for case in cases.unwrap_or_else(|| CaseId::ALL.to_vec()) {
        for mode in cli.mode.modes() {
            match evaluate_on(&w, case, mode) {
                Ok(r) => results.push(Record::new(None, &r)),
                Err(e) if explicit => return Err(e.into()),
                Err(
                    Error::CaseInapplicable { .. }
                    | Error::NotSymmetric { .. }
                    | Error::CoveringUndefined { .. }
                    | Error::InfiniteStabilizer { .. },
                ) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    if results.is_empty() {
        return Err(Failure { code: EXIT_COMPUTATION, message: format!("no case applies to {params}") });
    }
    Ok(SurveyReport { results, discrepancies: vec![], extrema: None, notes: vec![] })
}

fn describe(r: &Record, precision: usize) -> String {
    let p = precision;
    let halved = if r.halved { " (halved)" } else { "" };
    format!(
        "{} {} {}\n  radius   {:.p$} ({})\n  Vol(W)   {:.p$}\n  Vol(B)   {:.p$}\n  stab     {}{halved}\n  density  {:.p$}\n",
        r.params_label(),
        r.case_id,
        r.mode,
        r.radius,
        r.witness,
        r.vol_w,
        r.vol_ball,
        r.stab_order,
        r.density
    )
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let format = Format::from(cli.format);
    let point = (cli.u, cli.v, cli.w);
    if cli.table.is_some() && (cli.sweep.is_some() || cli.find_extrema) {
        return Err(Failure::usage("--table cannot be combined with --sweep or --find-extrema"));
    }
    if let Some(table) = &cli.table {
        let which = if table == "all" { None } else { parse_cases(table)? };
        let allowlist = load_allowlist(cli.allowlist.as_deref())?;
        let report = regen_tables(which.as_deref(), cli.tolerance, &allowlist)?;
        print!("{}", render(&report, format, cli.precision));
        let open = report.unallowlisted().count();
        if open > 0 {
            eprintln!("{open} discrepancies above {} without allowlist entry", cli.tolerance);
            return Ok(EXIT_DISCREPANCY);
        }
        return Ok(0);
    }
    if cli.sweep.is_some() || cli.find_extrema {
        let mut spec = match &cli.sweep {
            Some(s) => SweepSpec::parse(s)?,
            None => SweepSpec::default(),
        };
        if let Some(cases) = parse_cases(&cli.case)? {
            spec = spec.with_cases(cases);
        }
        spec = spec.with_modes(cli.mode.modes());
        let report = if cli.find_extrema { find_extrema(&spec)? } else { run_sweep(&spec)? };
        print!("{}", render(&report, format, cli.precision));
        return Ok(0);
    }
    match point {
        (Some(u), Some(v), Some(w)) => {
            let report = single(cli, OrthoParams::new(u, v, w)?)?;
            if format == Format::Markdown {
                for r in &report.results {
                    print!("{}", describe(r, cli.precision));
                }
            } else {
                print!("{}", render(&report, format, cli.precision));
            }
            Ok(0)
        }
        (None, None, None) => Err(Failure::usage("nothing to do: give --u/--v/--w, --table, --sweep or --find-extrema")),
        _ => Err(Failure::usage("--u, --v and --w must be given together")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

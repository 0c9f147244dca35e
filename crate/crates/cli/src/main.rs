use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use shifted_graver::analysis::{augment_with_basis, bases_by};
use shifted_graver::oracle::{factorizations, hilbert_oracle_with};
use shifted_graver::shift::base_plan;
use shifted_graver::{
    count_scan, differential_test, empirical_bounds, graver_by, verify_period_law, Error,
    Execution, Format, Method, Objective, Orthant, OutputDocument, Payload, SemigroupInstance,
    Sense, ShiftedFamily,
};

/// Exit status for a completed verification that found a mismatch.
const MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(
    name = "shgraver",
    version,
    about = "Graver bases of shifted numerical semigroups <t-da, t, t+db>"
)]
struct Cli {
    /// Run every computation on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the family parameters, bounds and base decomposition of an instance.
    Params {
        #[arg(long, value_name = "N1,N2,N3")]
        gens: String,
    },
    /// Compute the Graver basis, one representative per sign pair.
    Graver {
        #[arg(long, value_name = "N1,N2,N3")]
        gens: String,
        /// Emit both signs of every trade.
        #[arg(long)]
        both_signs: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Compute the Hilbert basis of one orthant.
    Hilbert {
        #[arg(long, value_name = "N1,N2,N3")]
        gens: String,
        /// pnp, ppn or npp.
        #[arg(long)]
        orthant: String,
        #[command(flatten)]
        out: Output,
    },
    /// Tabulate basis sizes over a range of shifts.
    Count {
        #[command(flatten)]
        range: FamilyRange,
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the per-period count increments with the oracle.
    Verify {
        #[command(flatten)]
        range: FamilyRange,
        #[command(flatten)]
        report: ReportOutput,
    },
    /// Locate where the three extremal properties start to hold.
    ScanBounds {
        #[arg(long, value_name = "A,B,D")]
        family: String,
        #[arg(long)]
        t_max: i64,
        #[command(flatten)]
        report: ReportOutput,
    },
    /// Optimize a linear objective over factorizations by Graver augmentation.
    Augment {
        #[arg(long, value_name = "N1,N2,N3")]
        gens: String,
        /// Element to factor; starts from its lexicographically first factorization.
        #[arg(long, conflicts_with = "start", required_unless_present = "start")]
        element: Option<i64>,
        #[arg(long, value_name = "Z0,Z1,Z2", allow_hyphen_values = true)]
        start: Option<String>,
        /// Weights, each an integer or a fraction p/q.
        #[arg(long, value_name = "C0,C1,C2", allow_hyphen_values = true)]
        objective: String,
        #[arg(long, default_value = "min")]
        sense: String,
    },
    /// Compare the shift route with the oracle over whole periods.
    Difftest {
        /// Semicolon-separated list of a,b,d triples.
        #[arg(long, default_value = "1,1,1;1,2,1;2,3,1;3,4,2;2,5,3;1,3,2")]
        families: String,
        #[arg(long, default_value_t = 2)]
        periods: i64,
        #[command(flatten)]
        report: ReportOutput,
    },
}

#[derive(Args)]
struct Output {
    /// auto, oracle or shift (alias fast).
    #[arg(long, default_value = "auto")]
    method: String,
    /// 4ti2, json or csv.
    #[arg(long, default_value = "4ti2")]
    format: String,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyRange {
    #[arg(long, value_name = "A,B,D")]
    family: String,
    /// Inclusive range of shifts, e.g. 7..96.
    #[arg(long, value_name = "LO..HI")]
    t_range: String,
}

#[derive(Args)]
struct ReportOutput {
    /// csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn parse_list<T: FromStr>(s: &str, n: usize, what: &str) -> Result<Vec<T>, Error> {
    let items: Vec<T> = s
        .split(',')
        .map(|x| x.trim().parse::<T>())
        .collect::<Result<_, _>>()
        .map_err(|_| invalid(format!("{what}: cannot parse {s:?}")))?;
    if items.len() != n {
        return Err(invalid(format!(
            "{what}: expected {n} comma-separated values, found {}",
            items.len()
        )));
    }
    Ok(items)
}

fn parse_triple(s: &str, what: &str) -> Result<[i64; 3], Error> {
    let v = parse_list::<i64>(s, 3, what)?;
    Ok([v[0], v[1], v[2]])
}

fn parse_gens(s: &str) -> Result<SemigroupInstance, Error> {
    let [n1, n2, n3] = parse_triple(s, "--gens")?;
    SemigroupInstance::from_generators(n1, n2, n3)
}

fn parse_family(s: &str) -> Result<ShiftedFamily, Error> {
    let [a, b, d] = parse_triple(s, "family")?;
    ShiftedFamily::new(a, b, d)
}

fn parse_range(s: &str) -> Result<(i64, i64), Error> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| invalid(format!("--t-range: expected LO..HI, found {s:?}")))?;
    let num = |x: &str| {
        x.trim()
            .parse::<i64>()
            .map_err(|_| invalid(format!("--t-range: bad bound {x:?}")))
    };
    Ok((num(lo)?, num(hi)?))
}

fn emit(doc: &OutputDocument, path: Option<&PathBuf>) -> Result<(), Error> {
    let text = doc.render()?;
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| invalid(format!("cannot write {}: {e}", p.display())))
        }
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                Err(invalid(format!("cannot write stdout: {e}")))
            }
            _ => Ok(()),
        },
    }
}

fn params(inst: &SemigroupInstance) -> String {
    let fam = inst.family();
    let b = fam.bounds();
    let h = fam.h();
    let mut line = format!(
        "t={} a={} b={} d={} rho={} B+={} B+-={} B-={} B={} h=({},{},{})",
        inst.t(),
        fam.a(),
        fam.b(),
        fam.d(),
        fam.rho(),
        b.plus,
        b.plus_minus,
        b.minus,
        b.max,
        h[0],
        h[1],
        h[2]
    );
    match base_plan(inst) {
        Some(p) => line.push_str(&format!(" t0={} k={}\n", p.t0, p.k)),
        None => line.push_str(&format!(
            "\nnote: t <= B = {}, bases come from the oracle\n",
            b.max
        )),
    }
    line
}

fn run(cli: Cli) -> Result<u8, Error> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Params { gens } => {
            print!("{}", params(&parse_gens(&gens)?));
        }
        Command::Graver {
            gens,
            both_signs,
            out,
        } => {
            let inst = parse_gens(&gens)?;
            let (method, format) = (out.method.parse::<Method>()?, out.format.parse::<Format>()?);
            let (mut set, used) = graver_by(&inst, method, exec)?;
            if both_signs {
                set = set.expanded();
            }
            emit(
                &OutputDocument::new(format, Payload::Trades(set)).with_instance(inst, used),
                out.output.as_ref(),
            )?;
        }
        Command::Hilbert { gens, orthant, out } => {
            let inst = parse_gens(&gens)?;
            let orthant: Orthant = orthant.parse()?;
            let (method, format) = (out.method.parse::<Method>()?, out.format.parse::<Format>()?);
            let (set, used) = match method.resolve(&inst) {
                Method::Shift => {
                    let (bases, used) = bases_by(&inst, method, exec)?;
                    (bases.get(orthant).clone(), used)
                }
                _ => (hilbert_oracle_with(&inst, orthant, exec)?, Method::Oracle),
            };
            emit(
                &OutputDocument::new(format, Payload::Trades(set)).with_instance(inst, used),
                out.output.as_ref(),
            )?;
        }
        Command::Count {
            range,
            method,
            format,
            output,
        } => {
            let fam = parse_family(&range.family)?;
            let (lo, hi) = parse_range(&range.t_range)?;
            let (method, format) = (method.parse::<Method>()?, format.parse::<Format>()?);
            let table = count_scan(&fam, lo, hi, method, exec)?;
            emit(
                &OutputDocument::new(format, Payload::Counts(table)),
                output.as_ref(),
            )?;
        }
        Command::Verify { range, report } => {
            let fam = parse_family(&range.family)?;
            let (lo, hi) = parse_range(&range.t_range)?;
            let format = report.format.parse::<Format>()?;
            let rep = verify_period_law(&fam, lo, hi, exec)?;
            let ok = rep.ok();
            emit(
                &OutputDocument::new(format, Payload::Period(rep)),
                report.output.as_ref(),
            )?;
            if !ok {
                eprintln!("period law violated");
                return Ok(MISMATCH);
            }
        }
        Command::ScanBounds {
            family,
            t_max,
            report,
        } => {
            let fam = parse_family(&family)?;
            let format = report.format.parse::<Format>()?;
            let rep = empirical_bounds(&fam, t_max, exec)?;
            for (name, th) in [
                ("B+-", &rep.h_irreducible),
                ("B+", &rep.ppn_length_d),
                ("B-", &rep.npp_length_minus_d),
            ] {
                let last = th
                    .last_failure
                    .map_or("none".to_string(), |t| t.to_string());
                eprintln!(
                    "{name}: formula={} last_failure={last} consistent={}",
                    th.formula, th.consistent
                );
            }
            emit(
                &OutputDocument::new(format, Payload::Bounds(rep)),
                report.output.as_ref(),
            )?;
        }
        Command::Augment {
            gens,
            element,
            start,
            objective,
            sense,
        } => {
            let inst = parse_gens(&gens)?;
            let weights = parse_list::<Ratio<i64>>(&objective, 3, "--objective")?;
            let objective = Objective::new([weights[0], weights[1], weights[2]])?;
            let sense: Sense = sense.parse()?;
            let start = match (element, start) {
                (_, Some(s)) => parse_triple(&s, "--start")?,
                (Some(n), None) => *factorizations(&inst, n)?
                    .first()
                    .ok_or_else(|| invalid(format!("{n} has no factorization in {inst}")))?,
                (None, None) => return Err(invalid("one of --element or --start is required")),
            };
            let (graver, _) = graver_by(&inst, Method::Auto, exec)?;
            let z = augment_with_basis(&graver, start, &objective, sense)?;
            let n: i128 = inst
                .generators()
                .iter()
                .zip(&z)
                .map(|(&g, &x)| g as i128 * x as i128)
                .sum();
            println!(
                "element={n} start=({},{},{}) optimum=({},{},{}) value={}",
                start[0],
                start[1],
                start[2],
                z[0],
                z[1],
                z[2],
                objective.value(&z)
            );
        }
        Command::Difftest {
            families,
            periods,
            report,
        } => {
            let fams = families
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(parse_family)
                .collect::<Result<Vec<_>, _>>()?;
            if periods < 0 {
                return Err(invalid("--periods must be non-negative"));
            }
            let format = report.format.parse::<Format>()?;
            let rep = differential_test(&fams, periods, exec);
            let ok = rep.ok() || fams.is_empty();
            for f in &rep.families {
                eprintln!(
                    "{}: {} instances, {} mismatches, increment/rho={} (expected {})",
                    f.family,
                    f.instances,
                    f.mismatches,
                    f.observed_leading_coefficient
                        .map_or("n/a".to_string(), |r| r.to_string()),
                    f.expected_leading_coefficient
                );
            }
            emit(
                &OutputDocument::new(format, Payload::Diff(rep)),
                report.output.as_ref(),
            )?;
            if !ok {
                return Ok(MISMATCH);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use frobtile_core::constructor::{construct_box, gn_bound, BrickSystem};
use frobtile_core::model::{
    decode, encode, verify_full, verify_sampled, BoxShape, Brick, RotationPolicy, Tiling,
    VerifyReport,
};
use frobtile_core::oracle::{exact_cover_search, threshold_scan, SearchConfig, SearchOutcome};
use frobtile_core::planar::{self, Decision};
use frobtile_core::render::{render, Format, RenderOptions};
use frobtile_core::semigroup::{
    closed_form_primes, frobenius_general, frobenius_pair, reduce_brauer_shockley, represent,
    GeneratorSet,
};
use frobtile_core::Error;

#[derive(Parser)]
#[command(
    name = "frobtile",
    version,
    about = "Frobenius numbers and brick tilings of boxes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frobenius numbers and representations
    #[command(subcommand)]
    Frob(Frob),
    /// Side bounds above which boxes are tileable
    #[command(subcommand)]
    Bound(Bound),
    /// Build explicit tilings
    #[command(subcommand)]
    Tile(Tile),
    /// Decide tileability, with a witness when positive
    #[command(subcommand)]
    Decide(Decide),
    /// Brute-force exact-cover search
    #[command(subcommand)]
    Oracle(Oracle),
    /// Check a stored tiling
    #[command(subcommand)]
    Verify(Verify),
    /// Draw a 2-D tiling as ASCII art or SVG
    Render(RenderArgs),
}

#[derive(Subcommand)]
enum Frob {
    /// g(a, b) = ab - a - b
    Pair {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// Frobenius number from residue classes modulo the smallest generator
    General {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<u64>,
    },
    /// Frobenius number after dropping redundant generators and common factors
    Reduced {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<u64>,
    },
    /// Lexicographically greatest coefficients, largest generator first
    Represent {
        #[arg(long)]
        target: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<u64>,
    },
    /// Frobenius number of the products of all primes but one
    ClosedForm {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
}

#[derive(Subcommand)]
enum Bound {
    /// Largest Frobenius number over the generator sets of a brick system
    Gn {
        /// n + 1 bricks of dimension n, e.g. 2x3,3x5,5x2
        #[arg(long, value_delimiter = ',', required = true)]
        bricks: Vec<String>,
    },
    /// Threshold for (p x q), (r x s), (s x r)
    Corollary1(Pqrs),
    /// Bound for the n-cube by cubes of n + 1 primes
    PrimeCubes {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
}

#[derive(Args)]
struct Pqrs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    r: u64,
    #[arg(long)]
    s: u64,
}

#[derive(Args)]
struct Output {
    /// Write the tiling here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Tile {
    /// General construction for an admissible brick system
    Construct {
        /// Box sides, e.g. 30x30
        #[arg(long = "box")]
        box_shape: String,
        #[arg(long, value_delimiter = ',', required = true)]
        bricks: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// a1 x a2 by (p x q), (r x s), (s x r)
    Corollary1 {
        #[arg(long = "box")]
        box_shape: String,
        #[command(flatten)]
        pqrs: Pqrs,
        #[command(flatten)]
        out: Output,
    },
    /// The n-cube of side a by cubes of n + 1 primes
    PrimeCubes {
        #[arg(long)]
        side: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// The a x a square by 2 x 2, 3 x 3 and p x p
    #[command(name = "squares-235p")]
    Squares235p {
        #[arg(long)]
        side: u64,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum Decide {
    /// Rectangle by one brick, rotations allowed
    SingleBrick {
        #[arg(long = "box")]
        box_shape: String,
        #[arg(long)]
        brick: String,
        /// Write the witness here
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Rectangle by two coprime squares
    TwoSquares {
        #[arg(long = "box")]
        box_shape: String,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: u64,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Square by 2 x 2, 3 x 3 and p x p
    #[command(name = "235p")]
    Squares235p {
        #[arg(long)]
        side: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Limits {
    #[arg(long, default_value_t = 2_000_000_000)]
    node_limit: u64,
    /// Seconds
    #[arg(long, default_value_t = 600)]
    time_limit: u64,
    /// Search the first-cell branches concurrently
    #[arg(long)]
    parallel: bool,
}

#[derive(Subcommand)]
enum Oracle {
    /// Exact cover of one box
    Search {
        #[arg(long = "box")]
        box_shape: String,
        #[arg(long, value_delimiter = ',', required = true)]
        bricks: Vec<String>,
        /// Allow axis permutations of the bricks
        #[arg(long)]
        rotations: bool,
        #[command(flatten)]
        limits: Limits,
        #[command(flatten)]
        out: Output,
    },
    /// Side lengths up to a limit whose squares the given squares cannot tile
    Scan {
        /// Square brick sides, e.g. 2,3,5
        #[arg(long, value_delimiter = ',', required = true)]
        squares: Vec<u64>,
        #[arg(long)]
        limit: u64,
        #[command(flatten)]
        limits: Limits,
    },
    /// Rewrite the stored square tilings from a fresh search
    RegenFixtures {
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Containment, pairwise disjointness and volume
    Full {
        #[arg(long)]
        tiling: PathBuf,
    },
    /// Containment, volume and random cell coverage
    Sampled {
        #[arg(long)]
        tiling: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Ascii,
    Svg,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    tiling: PathBuf,
    #[arg(long, value_enum, default_value = "ascii")]
    format: FormatArg,
    /// Pixels per cell (svg)
    #[arg(long, default_value_t = 20)]
    cell_size: u32,
    /// Fill colours per brick index (svg)
    #[arg(long, value_delimiter = ',')]
    palette: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure of a subcommand, mapped to an exit code.
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<ExitCode, Failure>;

const NEGATIVE: u8 = 1;
const PRECONDITION: u8 = 2;
const RESOURCE: u8 = 3;

fn parse_shape(text: &str) -> Result<Vec<u64>, Error> {
    text.split(['x', 'X'])
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|e| Error::PreconditionViolated(format!("bad shape {text:?}: {e}")))
        })
        .collect()
}

fn parse_box(text: &str) -> Result<BoxShape, Error> {
    BoxShape::new(parse_shape(text)?)
}

fn parse_bricks(texts: &[String]) -> Result<Vec<Brick>, Error> {
    texts.iter().map(|t| Brick::new(parse_shape(t)?)).collect()
}

fn plane(text: &str) -> Result<(u64, u64), Error> {
    match parse_shape(text)?.as_slice() {
        &[a1, a2] => Ok((a1, a2)),
        other => Err(Error::DimensionMismatch {
            expected: 2,
            got: other.len(),
        }),
    }
}

fn config(limits: &Limits, policy: RotationPolicy) -> Result<SearchConfig, Error> {
    if limits.node_limit == 0 || limits.time_limit == 0 {
        return Err(Error::PreconditionViolated(
            "limits must be at least 1".into(),
        ));
    }
    Ok(SearchConfig {
        rotation_policy: policy,
        node_limit: limits.node_limit,
        time_limit: Duration::from_secs(limits.time_limit),
        parallel: limits.parallel,
    })
}

fn read_tiling(path: &Path) -> Result<Tiling, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(decode(&text)?)
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_tiling(out: &Output, t: &Tiling) -> Outcome {
    write_text(out.out.as_deref(), &encode(t))?;
    Ok(ExitCode::SUCCESS)
}

fn print_value(v: u64) -> Outcome {
    println!("{v}");
    Ok(ExitCode::SUCCESS)
}

fn report_decision(d: &Decision, witness: Option<&Path>) -> Outcome {
    if d.tileable {
        println!("tileable ({})", d.reason);
        if let (Some(path), Some(t)) = (witness, &d.witness) {
            write_text(Some(path), &encode(t))?;
        }
        Ok(ExitCode::SUCCESS)
    } else {
        println!("not tileable ({})", d.reason);
        Ok(ExitCode::from(NEGATIVE))
    }
}

fn report_verify(r: &VerifyReport) -> Outcome {
    match r {
        VerifyReport::Valid => {
            println!("valid");
            Ok(ExitCode::SUCCESS)
        }
        VerifyReport::Invalid(v) => {
            println!(
                "invalid {}",
                serde_json::to_string(v).expect("violation serializes")
            );
            Ok(ExitCode::from(NEGATIVE))
        }
    }
}

fn run_frob(cmd: Frob) -> Outcome {
    match cmd {
        Frob::Pair { a, b } => print_value(frobenius_pair(a, b)?),
        Frob::General { gens } => print_value(frobenius_general(&GeneratorSet::new(gens)?)?),
        Frob::Reduced { gens } => print_value(reduce_brauer_shockley(&GeneratorSet::new(gens)?)?),
        Frob::Represent { target, gens } => {
            let set = GeneratorSet::new(gens)?;
            match represent(target, &set)? {
                Some(rep) => {
                    let terms: Vec<String> = rep
                        .coefficients
                        .iter()
                        .zip(set.generators())
                        .map(|(c, g)| format!("{c}*{g}"))
                        .collect();
                    println!("{target} = {}", terms.join(" + "));
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("absent");
                    Ok(ExitCode::from(NEGATIVE))
                }
            }
        }
        Frob::ClosedForm { primes } => print_value(closed_form_primes(&primes)?),
    }
}

fn run_bound(cmd: Bound) -> Outcome {
    match cmd {
        Bound::Gn { bricks } => {
            let sys = BrickSystem::new(parse_bricks(&bricks)?)?;
            print_value(gn_bound(&sys)?)
        }
        Bound::Corollary1(Pqrs { p, q, r, s }) => {
            print_value(planar::corollary1_threshold(p, q, r, s)?)
        }
        Bound::PrimeCubes { primes } => print_value(planar::prime_cubes_bound(&primes)?),
    }
}

fn run_tile(cmd: Tile) -> Outcome {
    match cmd {
        Tile::Construct {
            box_shape,
            bricks,
            out,
        } => {
            let sys = BrickSystem::new(parse_bricks(&bricks)?)?;
            emit_tiling(&out, &construct_box(&parse_box(&box_shape)?, &sys)?)
        }
        Tile::Corollary1 {
            box_shape,
            pqrs: Pqrs { p, q, r, s },
            out,
        } => {
            let (a1, a2) = plane(&box_shape)?;
            emit_tiling(&out, &planar::corollary1_construct(a1, a2, p, q, r, s)?)
        }
        Tile::PrimeCubes { side, primes, out } => {
            emit_tiling(&out, &planar::prime_cubes_construct(side, &primes)?)
        }
        Tile::Squares235p { side, p, out } => {
            let d = planar::tile_square_235p(side, p)?;
            match &d.witness {
                Some(t) => emit_tiling(&out, t),
                None => {
                    println!("not tileable ({})", d.reason);
                    Ok(ExitCode::from(NEGATIVE))
                }
            }
        }
    }
}

fn run_decide(cmd: Decide) -> Outcome {
    match cmd {
        Decide::SingleBrick {
            box_shape,
            brick,
            witness,
        } => {
            let (a1, a2) = plane(&box_shape)?;
            let (x1, x2) = plane(&brick)?;
            report_decision(
                &planar::decide_single_brick(a1, a2, x1, x2)?,
                witness.as_deref(),
            )
        }
        Decide::TwoSquares {
            box_shape,
            x,
            y,
            witness,
        } => {
            let (a1, a2) = plane(&box_shape)?;
            report_decision(
                &planar::decide_two_squares(a1, a2, x, y)?,
                witness.as_deref(),
            )
        }
        Decide::Squares235p { side, p, witness } => {
            report_decision(&planar::tile_square_235p(side, p)?, witness.as_deref())
        }
    }
}

fn run_oracle(cmd: Oracle) -> Outcome {
    match cmd {
        Oracle::Search {
            box_shape,
            bricks,
            rotations,
            limits,
            out,
        } => {
            let policy = if rotations {
                RotationPolicy::AxisPermutations
            } else {
                RotationPolicy::Fixed
            };
            let cfg = config(&limits, policy)?;
            match exact_cover_search(&parse_box(&box_shape)?, &parse_bricks(&bricks)?, &cfg)? {
                SearchOutcome::Found(t) => emit_tiling(&out, &t),
                SearchOutcome::Infeasible => {
                    println!("infeasible");
                    Ok(ExitCode::from(NEGATIVE))
                }
                SearchOutcome::Exhausted => Err(Error::SearchExhausted.into()),
            }
        }
        Oracle::Scan {
            squares,
            limit,
            limits,
        } => {
            let bricks: Vec<Brick> = squares
                .iter()
                .map(|&s| Brick::new(vec![s, s]))
                .collect::<Result<_, _>>()?;
            let cfg = config(&limits, RotationPolicy::Fixed)?;
            let bad = threshold_scan(&bricks, limit, &cfg)?;
            let list: Vec<String> = bad.iter().map(u64::to_string).collect();
            println!("{}", list.join(","));
            Ok(ExitCode::SUCCESS)
        }
        Oracle::RegenFixtures { dir } => {
            for (a, p) in planar::STORED_SQUARES {
                let text = planar::regenerate_stored_square(a, p)?;
                let path = dir.join(format!("square_{a}_p{p}.json"));
                write_text(Some(&path), &text)?;
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_verify(cmd: Verify) -> Outcome {
    match cmd {
        Verify::Full { tiling } => report_verify(&verify_full(&read_tiling(&tiling)?)),
        Verify::Sampled {
            tiling,
            samples,
            seed,
        } => report_verify(&verify_sampled(&read_tiling(&tiling)?, samples, seed)),
    }
}

fn run_render(args: RenderArgs) -> Outcome {
    let t = read_tiling(&args.tiling)?;
    let mut opts = RenderOptions {
        format: match args.format {
            FormatArg::Ascii => Format::Ascii,
            FormatArg::Svg => Format::Svg,
        },
        cell_size: args.cell_size,
        ..Default::default()
    };
    if !args.palette.is_empty() {
        opts.palette = args.palette;
    }
    write_text(args.out.as_deref(), &render(&t, &opts)?)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let text = e.to_string();
            let first = match e.kind() {
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => "missing subcommand",
                _ => text.lines().next().unwrap_or_default(),
            };
            eprintln!("error: usage: {}", first.trim_start_matches("error: "));
            return ExitCode::from(PRECONDITION);
        }
    };
    let result = match cli.command {
        Command::Frob(c) => run_frob(c),
        Command::Bound(c) => run_bound(c),
        Command::Tile(c) => run_tile(c),
        Command::Decide(c) => run_decide(c),
        Command::Oracle(c) => run_oracle(c),
        Command::Verify(c) => run_verify(c),
        Command::Render(a) => run_render(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {}: {e}", e.kind());
            ExitCode::from(if e.is_resource_limit() {
                RESOURCE
            } else {
                PRECONDITION
            })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: io: {msg}");
            ExitCode::from(PRECONDITION)
        }
    }
}

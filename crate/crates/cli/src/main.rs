mod fixtures;
mod schema;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clforms::blocks::descend_to_unitary;
use clforms::exec::Exec;
use clforms::identities;
use clforms::orbit::{self, Budget, OrbitSpace};
use clforms::verify::{run_suite, Suite, SuiteConfig, EXHAUSTIVE_LIMIT};
use clforms::witness::witness_global;
use clforms::{classify, Error, Field, FormSpace, GroupKind};
use serde::Serialize;

use schema::{DecompositionDto, DescentDto, OrbitReportDto, PairReportDto, ProblemInstance, Report, WitnessDto};

#[derive(Parser)]
#[command(name = "clforms", version, about = "Classical Lie algebras over finite fields: normal forms, witnesses, checks")]
struct Cli {
    /// Seed recorded in the report and used by randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Run without the thread pool.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose A into simple orthogonal blocks.
    Classify(InputArgs),
    /// Build (T, −1) with TAT⁻¹ = −A.
    Witness(InputArgs),
    /// Hermitian descent of a symplectic A with A² scalar.
    Descend(InputArgs),
    /// Run a property suite.
    Verify {
        #[arg(long)]
        suite: String,
        /// Random instances; defaults to 0 when the suite sweeps the whole space and 100 otherwise.
        #[arg(long)]
        trials: Option<usize>,
        /// `p`, `p,2`, or a field order such as 9.
        #[arg(long)]
        field: String,
        #[arg(long)]
        kind: String,
        #[arg(long)]
        dim: usize,
    },
    /// Orbit stability over a small finite field.
    Shadow {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        field: String,
        /// Conjugation orbits of G(V) on G(V ⊕ line) instead.
        #[arg(long)]
        pair: bool,
    },
    /// Write the fixture corpus.
    Fixtures {
        #[arg(long)]
        out: PathBuf,
        /// Random operators per (kind, field, dimension).
        #[arg(long, default_value_t = 1)]
        per_space: usize,
    },
}

enum Failure {
    /// Bad input: exit 1.
    Input(String),
    /// A mathematical check failed: exit 2.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn parse_field(s: &str) -> Result<Field, Failure> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| Failure::Input(format!("invalid field {s:?}")));
    Ok(match s.split_once(',') {
        Some((p, d)) => Field::new(num(p)?, num(d)? as u8)?,
        None => Field::from_order(num(s)?)?,
    })
}

fn read_instance(path: &Path) -> Result<ProblemInstance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("malformed JSON in {}: {e}", path.display())))
}

/// Whether the suite covers every instance without sampling.
fn exhaustive(suite: Suite, space: &FormSpace) -> bool {
    let q = space.field().order() as f64;
    let n = space.dim() as f64;
    let size = match suite {
        Suite::Perturbation => q.powf(n * n + 2.0 * n),
        Suite::Qr => (space.field().p() as f64).powf(space.lie_algebra_basis().len() as f64) * q.powf(n),
        _ => return false,
    };
    size <= EXHAUSTIVE_LIMIT as f64
}

struct Ctx {
    seed: u64,
    output: Option<PathBuf>,
    exec: Exec,
}

impl Ctx {
    fn emit<T: Serialize>(&self, command: &str, digest: String, header: Option<&str>, result: T) -> Result<(), Failure> {
        let report = Report {
            schema_version: schema::SCHEMA_VERSION,
            command: command.to_string(),
            instance_digest: digest,
            seed: self.seed,
            header: header.map(str::to_string),
            result,
        };
        let mut text = serde_json::to_string_pretty(&report).expect("serializable");
        text.push('\n');
        match &self.output {
            Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx { seed: cli.seed, output: cli.output, exec: if cli.sequential { Exec::Sequential } else { Exec::Parallel } };
    match cli.command {
        Command::Classify(args) => {
            let inst = read_instance(&args.input)?;
            let l = inst.load()?;
            let dec = classify(&l.space, &l.operator)?;
            let mut dto = DecompositionDto::from(&dec);
            dto.vector = l.vector.map(|v| schema::VectorChecks {
                in_r: identities::in_r(&l.space, &l.operator, &v),
                in_q: identities::in_q(&l.space, &l.operator, &v),
            });
            ctx.emit("classify", inst.digest(), None, dto)?;
            Ok(true)
        }
        Command::Witness(args) => {
            let inst = read_instance(&args.input)?;
            let l = inst.load()?;
            let w = witness_global(&l.space, &l.operator)?;
            ctx.emit("witness", inst.digest(), None, WitnessDto::from(&w))?;
            Ok(w.checks.all())
        }
        Command::Descend(args) => {
            let inst = read_instance(&args.input)?;
            let l = inst.load()?;
            let d = descend_to_unitary(&l.space, &l.operator)?;
            if l.poly.as_ref().is_some_and(|g| g.monic() != d.factor) {
                return Err(Failure::Input("given polynomial is not the irreducible factor of the characteristic polynomial".into()));
            }
            ctx.emit("descend", inst.digest(), None, DescentDto::from(&d))?;
            Ok(true)
        }
        Command::Verify { suite, trials, field, kind, dim } => {
            let suite: Suite = suite.parse()?;
            let field = parse_field(&field)?;
            let group = GroupKind::from_algebra_name(&kind)?;
            let space = FormSpace::standard(group, field, dim)?;
            let trials = trials.unwrap_or(if exhaustive(suite, &space) { 0 } else { 100 });
            let cfg = SuiteConfig { field, group, dim, trials, seed: ctx.seed, exec: ctx.exec };
            let digest = schema::digest(&(suite.name(), schema::field_dto(cfg.field), &kind, dim, trials));
            let result = schema::sorted_suite(run_suite(suite, &cfg)?);
            let passed = result.passed();
            ctx.emit("verify", digest, None, result)?;
            Ok(passed)
        }
        Command::Shadow { kind, dim, field, pair } => {
            let space = FormSpace::standard(GroupKind::from_algebra_name(&kind)?, parse_field(&field)?, dim)?;
            let digest = schema::digest(&(schema::space_dto(&space), pair));
            let budget = Budget::default();
            if pair {
                let r = orbit::check_pair_sigma(&space, &budget, ctx.exec)?;
                ctx.emit("shadow", digest, Some(orbit::HEADER), PairReportDto::from(&r))?;
                return Ok(r.all_stable());
            }
            let en = orbit::enumerate_group(&space, &budget, ctx.exec)?;
            let mut reports = Vec::new();
            let mut stable = true;
            for kind in [OrbitSpace::LieTimesV, OrbitSpace::GroupTimesV] {
                let mut r = orbit::orbits(&en, kind, &budget, ctx.exec)?;
                stable &= orbit::check_twisted_stability(&mut r, &en, ctx.exec);
                reports.push(OrbitReportDto::from(&r));
            }
            ctx.emit("shadow", digest, Some(orbit::HEADER), reports)?;
            Ok(stable)
        }
        Command::Fixtures { out, per_space } => {
            let corpus = fixtures::generate(ctx.seed, per_space)?;
            fixtures::write(&out, &corpus).map_err(|e| Failure::Input(format!("cannot write {}: {e}", out.display())))?;
            let names: Vec<&str> = corpus.iter().map(|i| i.name.as_str()).collect();
            ctx.emit("fixtures", schema::digest(&(ctx.seed, per_space)), None, names)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
    }
}

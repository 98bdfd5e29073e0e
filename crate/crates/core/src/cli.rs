//! The `manip` command line. Every command prints `key: value` lines to
//! stdout and exits 0 for yes or a computed result, 1 for no, 2 for bad
//! input and 3 when a search ran out of budget.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Zero;

use crate::ballots::{parse_election, serialize_election, ElectionFile, Mode, Profile, Protocol};
use crate::error::{Error, Result};
use crate::gadgets::{
    add_null_manipulator, build_gadget, lift_to_uncertain, partition_oracle, unweight_with_correlation, verify_theorem,
    PartitionInstance, Theorem, VerifyConfig,
};
use crate::manipulate::{
    solve_ccwm_exact, solve_cup_ccwm, solve_dcwm_monotone, solve_dcwm_via_ccwm, solve_unweighted_coalition, Decision,
    ManipulationAnswer, SearchConfig,
};
use crate::protocols::{randomized_cup_distribution, score_table, CupSchedule, Rule};
use crate::scalar::parse_probability;
use crate::uncertain::{
    evaluate_exact, evaluate_montecarlo, parse_distribution, serialize_distribution, solve_uiccwm_randomized_cup,
    solve_uvcimw, DistributionFile, Evaluation, IndividualManipulation,
};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser)]
#[command(name = "manip", version, about = "Weighted election manipulation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Winner set (and scores) of the fixed votes in an election file.
    Winner {
        #[arg(long)]
        election: PathBuf,
        /// Overrides the file's `protocol:` line.
        #[arg(long)]
        protocol: Option<Protocol>,
    },
    /// Decide whether the coalition can reach the file's target.
    Manipulate {
        #[arg(long)]
        election: PathBuf,
        #[arg(long)]
        protocol: Option<Protocol>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Search node budget.
        #[arg(long)]
        budget: Option<u64>,
        /// Probability threshold for randomized-cup (exclusive).
        #[arg(long, default_value = "0")]
        threshold: String,
    },
    /// Winning probability of a distribution file, exact or sampled.
    Evaluate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write the manipulation instance a PARTITION instance reduces to.
    Gadget {
        #[arg(long)]
        theorem: Theorem,
        /// Comma-separated positive integers.
        #[arg(long)]
        partition: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Transform an instance into the uncertain setting.
    Lift {
        #[arg(long, value_enum)]
        theorem: LiftKind,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a reduction against the PARTITION oracle on random instances.
    Verify {
        #[arg(long)]
        theorem: Theorem,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        min_items: usize,
        #[arg(long, default_value_t = 8)]
        max_items: usize,
        #[arg(long, default_value_t = 10)]
        max_value: u64,
        #[arg(long)]
        budget: Option<u64>,
        /// Also write the per-trial CSV report here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the canonical balanced cup tree.
    CupSchedule {
        #[arg(long)]
        show: bool,
        /// Leaves in order; defaults to the election file's candidates.
        #[arg(long, conflicts_with = "election")]
        candidates: Option<String>,
        #[arg(long)]
        election: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Exact,
    Unweighted,
    Cup,
    Monotone,
    ViaCcwm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LiftKind {
    /// Election file to distribution file.
    Uvcwe,
    /// Distribution file plus a weight-0 manipulator.
    Uvcimw,
    /// Weighted distribution to correlated unit voters.
    Unweight,
}

/// Runs one command line. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_INPUT } else { EXIT_YES };
            let text = e.render().to_string();
            return if status == EXIT_YES {
                CommandOutcome {
                    status,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CommandOutcome {
                    status,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let mut out = Output::default();
    match dispatch(cli.command, &mut out) {
        Ok(status) => CommandOutcome {
            status,
            stdout: out.text,
            stderr: String::new(),
        },
        Err(e) => CommandOutcome {
            status: EXIT_INPUT,
            stdout: out.text,
            stderr: format!("error: {e}\n"),
        },
    }
}

#[derive(Default)]
struct Output {
    text: String,
}

impl Output {
    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        writeln!(self.text, "{key}: {value}").unwrap();
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

fn load_election(path: &Path, protocol: Option<Protocol>) -> Result<(ElectionFile, Protocol)> {
    let file = parse_election(&read(path)?)?;
    let protocol = protocol
        .or(file.protocol)
        .ok_or_else(|| Error::Syntax("no protocol: add a `protocol:` line or pass --protocol".into()))?;
    Ok((file, protocol))
}

fn decision_status(decision: Decision) -> i32 {
    match decision {
        Decision::Yes => EXIT_YES,
        Decision::No => EXIT_NO,
        Decision::Exhausted => EXIT_EXHAUSTED,
    }
}

fn dispatch(command: Command, out: &mut Output) -> Result<i32> {
    match command {
        Command::Winner { election, protocol } => winner(&election, protocol, out),
        Command::Manipulate {
            election,
            protocol,
            method,
            budget,
            threshold,
        } => manipulate(&election, protocol, method, budget, &threshold, out),
        Command::Evaluate { input, samples, seed } => evaluate(&input, samples, seed, out),
        Command::Gadget {
            theorem,
            partition,
            out: path,
        } => {
            let partition: PartitionInstance = partition.parse()?;
            let instance = build_gadget(theorem, &partition)?;
            let file = ElectionFile {
                protocol: Some(theorem.protocol()),
                schedule: None,
                instance,
            };
            write(&path, &serialize_election(&file))?;
            out.kv("theorem", theorem);
            out.kv(
                "partition",
                partition
                    .items()
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            );
            out.kv("half", partition.half().unwrap_or_default());
            out.kv(
                "oracle",
                if partition_oracle(&partition).exists() {
                    "yes"
                } else {
                    "no"
                },
            );
            out.kv("out", path.display());
            Ok(EXIT_YES)
        }
        Command::Lift {
            theorem,
            input,
            out: path,
        } => lift(theorem, &input, &path, out),
        Command::Verify {
            theorem,
            trials,
            seed,
            min_items,
            max_items,
            max_value,
            budget,
            csv,
        } => {
            let mut config = VerifyConfig::new(trials, max_items, max_value, seed);
            config.min_items = min_items;
            if let Some(b) = budget {
                config.search.node_budget = b;
            }
            let report = verify_theorem(theorem, &config)?;
            if let Some(path) = csv {
                write(&path, &report.to_csv())?;
            }
            let yes = report.trials.iter().filter(|t| t.oracle).count();
            out.kv("theorem", theorem);
            out.kv("trials", report.trials.len());
            out.kv("oracle_yes", yes);
            out.kv("oracle_no", report.trials.len() - yes);
            out.kv("exhausted", report.exhausted());
            out.kv("agreement", format!("{:.3}", report.agreement_rate()));
            Ok(if report.agreement_rate() == 1.0 {
                EXIT_YES
            } else {
                EXIT_NO
            })
        }
        Command::CupSchedule {
            show,
            candidates,
            election,
        } => {
            let profile = match (candidates, election) {
                (Some(text), _) => Profile::new(text.split_whitespace(), Vec::new())?,
                (None, Some(path)) => parse_election(&read(&path)?)?.instance.profile().clone(),
                (None, None) => return Err(Error::Syntax("pass --candidates or --election".into())),
            };
            let schedule = CupSchedule::canonical(&(0..profile.m()).collect::<Vec<_>>())?;
            if show {
                out.kv("schedule", schedule.render(&profile.labels()));
            }
            out.kv("leaves", profile.m());
            Ok(EXIT_YES)
        }
    }
}

fn winner(path: &Path, protocol: Option<Protocol>, out: &mut Output) -> Result<i32> {
    let (file, protocol) = load_election(path, protocol)?;
    let profile = file.instance.profile();
    out.kv("protocol", protocol);
    if protocol == Protocol::RandomizedCup {
        let dist = randomized_cup_distribution::<BigRational>(profile, &[])?;
        let probs: Vec<String> = (0..profile.m())
            .map(|c| format!("{}={}", profile.label(c), dist.probabilities[c]))
            .collect();
        out.kv("probabilities", probs.join(" "));
        out.kv("ambiguous", &dist.ambiguous);
        return Ok(EXIT_YES);
    }
    let rule = Rule::from_protocol(protocol, file.schedule.clone())?;
    if let Some(sp) = rule.score_protocol() {
        out.kv("scores", score_table(sp, profile, &[])?.render(profile));
    }
    if let Rule::Cup(schedule) = &rule {
        out.kv("schedule", schedule.render(&profile.labels()));
    }
    out.kv("winners", rule.winners(profile, &[])?.labels(profile));
    Ok(EXIT_YES)
}

fn print_answer(out: &mut Output, profile: &Profile, weights: &[u64], answer: &ManipulationAnswer) {
    out.kv("answer", answer.decision);
    out.kv("nodes_expanded", answer.nodes_expanded);
    if let Some(witness) = &answer.witness {
        let labels = profile.labels();
        for (order, w) in witness.iter().zip(weights) {
            out.kv("witness", format!("{} weight {w}", order.display(&labels)));
        }
    }
}

fn manipulate(
    path: &Path,
    protocol: Option<Protocol>,
    method: Method,
    budget: Option<u64>,
    threshold: &str,
    out: &mut Output,
) -> Result<i32> {
    let (file, protocol) = load_election(path, protocol)?;
    let instance = &file.instance;
    let profile = instance.profile();
    let mut config = SearchConfig::default();
    if let Some(b) = budget {
        config.node_budget = b;
    }
    out.kv("protocol", protocol);
    out.kv("mode", instance.mode());
    out.kv("target", profile.label(instance.target()));

    if protocol == Protocol::RandomizedCup {
        if !matches!(method, Method::Auto | Method::Exact) {
            return Err(Error::Unsupported(
                "randomized-cup only supports the exact search".into(),
            ));
        }
        let r = parse_probability(threshold)?;
        let result = solve_uiccwm_randomized_cup(instance, &r, &config)?;
        out.kv("method", "exact");
        out.kv("threshold", &r);
        out.kv("probability", &result.probability);
        print_answer(out, profile, instance.coalition_weights(), &result.answer);
        return Ok(decision_status(result.answer.decision));
    }
    if parse_probability(threshold)? != BigRational::zero() {
        return Err(Error::Unsupported("--threshold only applies to randomized-cup".into()));
    }

    let rule = Rule::from_protocol(protocol, file.schedule.clone())?;
    let method = match (method, instance.mode()) {
        (Method::Auto, Mode::Constructive) if matches!(rule, Rule::Cup(_)) => Method::Cup,
        (Method::Auto, Mode::Constructive) => Method::Exact,
        (Method::Auto, Mode::Destructive) if rule.score_protocol().is_some() => Method::Monotone,
        (Method::Auto, Mode::Destructive) => Method::ViaCcwm,
        (m, _) => m,
    };
    let answer = match method {
        Method::Exact => {
            out.kv("method", "exact");
            solve_ccwm_exact(instance, &rule, &config)?
        }
        Method::Unweighted => {
            out.kv("method", "unweighted");
            solve_unweighted_coalition(instance, &rule)?
        }
        Method::Cup => {
            let Rule::Cup(schedule) = &rule else {
                return Err(Error::Unsupported("--method cup needs the cup protocol".into()));
            };
            if instance.mode() != Mode::Constructive {
                return Err(Error::Unsupported("--method cup decides constructive instances".into()));
            }
            out.kv("method", "cup");
            let result = solve_cup_ccwm(instance, schedule)?;
            let root = result.nodes.last().expect("root node");
            let pw: Vec<&str> = root.potential_winners.iter().map(|&c| profile.label(c)).collect();
            out.kv("potential_winners", pw.join(" "));
            result.answer
        }
        Method::Monotone => {
            let sp = rule
                .score_protocol()
                .ok_or_else(|| Error::Unsupported(format!("--method monotone does not apply to {protocol}")))?;
            out.kv("method", "monotone");
            solve_dcwm_monotone(instance, sp)?
        }
        Method::ViaCcwm => {
            out.kv("method", "via-ccwm");
            solve_dcwm_via_ccwm(instance, &rule, &config)?
        }
        Method::Auto => unreachable!(),
    };
    print_answer(out, profile, instance.coalition_weights(), &answer);
    Ok(decision_status(answer.decision))
}

fn print_evaluation(out: &mut Output, eval: &Evaluation<BigRational>) {
    out.kv("probability", &eval.probability);
    out.kv(
        "probability_decimal",
        format!("{:.6}", eval.favourable as f64 / eval.outcomes as f64),
    );
    out.kv("favourable", eval.favourable);
    out.kv("outcomes", eval.outcomes);
    out.kv("answer", if eval.exceeds_threshold { "yes" } else { "no" });
}

fn evaluate(path: &Path, samples: Option<u64>, seed: Option<u64>, out: &mut Output) -> Result<i32> {
    let file: DistributionFile = parse_distribution(&read(path)?)?;
    let instance = &file.instance;
    let profile = instance.candidates();
    out.kv("protocol", instance.rule());
    out.kv("target", profile.label(instance.target()));
    out.kv("threshold", instance.threshold());
    match (samples, seed) {
        (Some(n), Some(seed)) => {
            if file.manipulator.is_some() {
                return Err(Error::Unsupported("sampling does not search manipulator votes".into()));
            }
            let est = evaluate_montecarlo(instance, n, seed)?;
            out.kv("method", "montecarlo");
            out.kv("samples", est.samples);
            out.kv("seed", seed);
            out.kv("wins", est.wins);
            out.kv("estimate", format!("{:.6}", est.estimate));
            out.kv("ci95", format!("{:.6} {:.6}", est.lower, est.upper));
            Ok(EXIT_YES)
        }
        (Some(_), None) => Err(Error::Syntax("--samples needs an explicit --seed".into())),
        (None, Some(_)) => Err(Error::Syntax("--seed only applies with --samples".into())),
        (None, None) => match file.manipulation() {
            Some(manip) => {
                let result: IndividualManipulation<BigRational> = solve_uvcimw(&manip)?;
                out.kv("method", "exact");
                out.kv("manipulator_weight", manip.manipulator_weight);
                out.kv("best_vote", result.best_vote.display(&profile.labels()));
                print_evaluation(out, &result.evaluation);
                Ok(if result.evaluation.exceeds_threshold {
                    EXIT_YES
                } else {
                    EXIT_NO
                })
            }
            None => {
                let eval = evaluate_exact::<BigRational>(instance)?;
                out.kv("method", "exact");
                print_evaluation(out, &eval);
                Ok(if eval.exceeds_threshold { EXIT_YES } else { EXIT_NO })
            }
        },
    }
}

fn lift(kind: LiftKind, input: &Path, path: &Path, out: &mut Output) -> Result<i32> {
    let text = read(input)?;
    let lifted = match kind {
        LiftKind::Uvcwe => {
            let (file, protocol) = load_election(input, None)?;
            let rule = Rule::from_protocol(protocol, file.schedule.clone())?;
            DistributionFile {
                instance: lift_to_uncertain(&file.instance, &rule)?,
                manipulator: None,
            }
        }
        LiftKind::Uvcimw => {
            let file = parse_distribution(&text)?;
            if file.manipulator.is_some() {
                return Err(Error::InvalidInstance("input already has a manipulator".into()));
            }
            let manip = add_null_manipulator(&file.instance);
            DistributionFile {
                instance: manip.evaluation,
                manipulator: Some(manip.manipulator_weight),
            }
        }
        LiftKind::Unweight => {
            let file = parse_distribution(&text)?;
            if file.manipulator.is_some() {
                return Err(Error::Unsupported("unweighting applies to evaluation instances".into()));
            }
            DistributionFile {
                instance: unweight_with_correlation(&file.instance)?,
                manipulator: None,
            }
        }
    };
    write(path, &serialize_distribution(&lifted))?;
    let dist = lifted.instance.distribution();
    out.kv("voters", dist.voters().len());
    out.kv("groups", dist.groups().len());
    out.kv("independent_draws", dist.independent_draws());
    out.kv("total_weight", dist.total_weight());
    out.kv("out", path.display());
    Ok(EXIT_YES)
}

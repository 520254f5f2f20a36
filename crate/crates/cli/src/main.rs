use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use teachsched::chromosome::DecodePolicy;
use teachsched::domain::{validate_instance, Instance, Severity};
use teachsched::engine::{run, GaConfig};
use teachsched::io::{
    load_instance, read_schedule, write_explanations, write_instance, write_prolog_facts,
    write_run_report, write_schedule, InstanceFiles,
};
use teachsched::postopt::{apply_swap, find_all, find_conflicts};
use teachsched::synth::{generate, GenParams};

#[derive(Parser)]
#[command(
    name = "teachsched",
    version,
    about = "Assign class sections to professors with a genetic algorithm"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the GA on an instance and write the schedule and reports.
    Solve(SolveArgs),
    /// Check an instance, and optionally a schedule, for violations.
    Validate(ValidateArgs),
    /// List post-optimization suggestions for a schedule, or apply one.
    Suggest(SuggestArgs),
    /// Write a synthetic instance.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Modulo,
    Skip,
}

#[derive(Args)]
struct SolveArgs {
    /// Directory holding the five instance CSV files.
    #[arg(long)]
    instance: PathBuf,
    /// Output directory for schedule.csv, schedule.pl, explanations.txt and run reports.
    #[arg(long)]
    out: PathBuf,
    /// Chromosomes per generation.
    #[arg(long, default_value_t = 100)]
    population: usize,
    /// Probability that a selected pair is crossed over.
    #[arg(long, default_value_t = 0.25)]
    crossover_prob: f64,
    /// Per-bit flip probability.
    #[arg(long, default_value_t = 0.01)]
    mutation_prob: f64,
    /// Generations after the random initial one.
    #[arg(long, default_value_t = 400)]
    generations: usize,
    /// Stop after this many generations without a new best.
    #[arg(long, default_value_t = 400)]
    stagnation: usize,
    /// Seed for every random draw.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Assign lecture/lab association groups as a whole.
    #[arg(long)]
    enforce_associations: bool,
    /// How out-of-range chunk values are read.
    #[arg(long, value_enum, default_value_t = Policy::Modulo)]
    decode_policy: Policy,
    /// Threads for fitness evaluation. Output does not depend on it.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Schedule CSV to check against the instance.
    #[arg(long)]
    schedule: Option<PathBuf>,
}

#[derive(Args)]
struct SuggestArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    schedule: PathBuf,
    /// Apply suggestion number N (as listed) instead of printing.
    #[arg(long, value_name = "N", requires = "out")]
    apply: Option<usize>,
    /// Where to write the revised schedule.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Output directory for the instance CSV files.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 52)]
    professors: usize,
    /// Non-major sections to generate.
    #[arg(long, default_value_t = 155)]
    sections: usize,
    /// Lecture sections per lab section.
    #[arg(long, default_value_t = 1.0)]
    lecture_lab_ratio: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Fraction of professors with preferences.
    #[arg(long, default_value_t = 0.8)]
    preference_density: f64,
}

type CmdResult = Result<ExitCode, String>;

fn load(dir: &Path) -> Result<Instance, String> {
    load_instance(&InstanceFiles::from_dir(dir)).map_err(|e| e.to_string())
}

fn solve(a: SolveArgs) -> CmdResult {
    let inst = load(&a.instance)?;
    let cfg = GaConfig {
        population_size: a.population,
        crossover_prob: a.crossover_prob,
        mutation_prob: a.mutation_prob,
        max_generations: a.generations,
        stagnation_limit: a.stagnation,
        seed: a.seed,
        enforce_associations: a.enforce_associations,
        decode_policy: match a.decode_policy {
            Policy::Modulo => DecodePolicy::Modulo,
            Policy::Skip => DecodePolicy::Skip,
        },
        workers: a.workers,
    };
    let started = Instant::now();
    let result = run(&inst, &cfg).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();

    let s = result.best_schedule();
    let err = |e: teachsched::io::IoError| e.to_string();
    write_schedule(s, &inst, &a.out.join("schedule.csv")).map_err(err)?;
    write_prolog_facts(s, &inst, &a.out.join("schedule.pl")).map_err(err)?;
    write_explanations(s, &inst, &a.out.join("explanations.txt")).map_err(err)?;
    write_run_report(&result, &inst, &a.out.join("run")).map_err(err)?;

    println!("final fitness: {}", result.best_breakdown().global_f);
    println!("initial fitness: {}", result.initial.breakdown.global_f);
    println!("assigned: {}/{}", s.assigned_count(), inst.sections().len());
    println!("generations: {}", result.generations_run);
    println!("wall time: {:.2}s", elapsed.as_secs_f64());
    println!("artifacts: {}", a.out.display());
    Ok(ExitCode::SUCCESS)
}

fn validate(a: ValidateArgs) -> CmdResult {
    let inst = match load_instance(&InstanceFiles::from_dir(&a.instance)) {
        Ok(inst) => inst,
        Err(e) => {
            eprintln!("{e}");
            return Ok(ExitCode::from(1));
        }
    };
    let mut bad = false;
    for v in validate_instance(&inst) {
        eprintln!("{v}");
        bad |= v.severity == Severity::Error;
    }
    if let Some(path) = a.schedule {
        let s = read_schedule(&inst, &path).map_err(|e| e.to_string())?;
        for p in inst.prof_indices() {
            let (load, prof) = (s.load_of(&inst, p), inst.professor(p));
            if load > prof.mandated_units {
                eprintln!(
                    "error: {}: assigned {load} units, mandated {}",
                    prof.id, prof.mandated_units
                );
                bad = true;
            }
        }
        for (p, x, y) in find_conflicts(&s, &inst) {
            eprintln!(
                "error: {}: Conflict between {} and {}",
                inst.professor(p).id,
                inst.section(x).label(),
                inst.section(y).label()
            );
            bad = true;
        }
    }
    if bad {
        return Ok(ExitCode::from(1));
    }
    println!("ok");
    Ok(ExitCode::SUCCESS)
}

fn suggest(a: SuggestArgs) -> CmdResult {
    let inst = load(&a.instance)?;
    let s = read_schedule(&inst, &a.schedule).map_err(|e| e.to_string())?;
    let suggestions = find_all(&s, &inst);
    match (a.apply, a.out) {
        (Some(n), Some(out)) => {
            let sug = n
                .checked_sub(1)
                .and_then(|i| suggestions.get(i))
                .ok_or_else(|| format!("no suggestion number {n} ({} found)", suggestions.len()))?;
            let revised = apply_swap(&s, &inst, sug).map_err(|e| e.to_string())?;
            write_schedule(&revised, &inst, &out).map_err(|e| e.to_string())?;
            println!(
                "applied suggestion {n} ({}); wrote {}",
                sug.kind,
                out.display()
            );
        }
        _ if suggestions.is_empty() => println!("no suggestions"),
        _ => {
            let mut text = String::new();
            for (i, sug) in suggestions.iter().enumerate() {
                text.push_str(&format!("[{}] {}\n{}\n", i + 1, sug.kind, sug.rationale));
            }
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn gen(a: GenArgs) -> CmdResult {
    let params = GenParams {
        n_professors: a.professors,
        n_sections: a.sections,
        lecture_lab_ratio: a.lecture_lab_ratio,
        seed: a.seed,
        preference_density: a.preference_density,
    };
    let inst = generate(&params).map_err(|e| e.to_string())?;
    write_instance(&inst, &InstanceFiles::from_dir(&a.out)).map_err(|e| e.to_string())?;
    println!(
        "wrote {} professors and {} sections to {}",
        inst.professors().len(),
        inst.sections().len(),
        a.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Validate(a) => validate(a),
        Command::Suggest(a) => suggest(a),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

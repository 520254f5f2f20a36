//! Generational GA loop.
//!
//! Each generation is decoded, built into clean schedules and scored, then
//! sorted by fitness. Parents are drawn by inverse-fitness roulette, crossed
//! over with probability `crossover_prob` and mutated bitwise. The whole
//! generation is replaced; the best chromosome ever seen is held aside and
//! never reinjected.
//!
//! All random draws come from one ChaCha8 stream seeded with `seed`, in this
//! order: initial chromosomes (one after another), then per offspring pair
//! the two roulette draws, the crossover coin, the crossover point (only
//! when crossing over), and the mutation of each child in turn. Evaluation
//! may run on several threads; it draws nothing, so results do not depend
//! on the worker count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::chromosome::{
    build_schedule, crossover, decode_pairings, mutate, random_chromosome, Chromosome,
    ChromosomeError, DecodePolicy, Layout,
};
use crate::domain::{validate_instance, Instance, Schedule, Severity, Violation};
use crate::fitness::{global_fitness, FitnessBreakdown, FitnessError};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("instance has {} invariant violation(s)", .0.len())]
    InvalidInstance(Vec<Violation>),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Chromosome(#[from] ChromosomeError),
    #[error(transparent)]
    Fitness(#[from] FitnessError),
    #[error("could not start worker pool: {0}")]
    Workers(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub max_generations: usize,
    /// Stop after this many consecutive generations without a new best.
    pub stagnation_limit: usize,
    pub seed: u64,
    pub enforce_associations: bool,
    pub decode_policy: DecodePolicy,
    /// Threads used for fitness evaluation. Results are identical for any value.
    pub workers: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 100,
            crossover_prob: 0.25,
            mutation_prob: 0.01,
            max_generations: 400,
            stagnation_limit: 400,
            seed: 0,
            enforce_associations: false,
            decode_policy: DecodePolicy::Modulo,
            workers: 1,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.population_size < 2 || !self.population_size.is_multiple_of(2) {
            return Err(EngineError::InvalidConfig(format!(
                "population size must be even and at least 2, got {}",
                self.population_size
            )));
        }
        for (name, p) in [
            ("crossover", self.crossover_prob),
            ("mutation", self.mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(EngineError::InvalidConfig(format!(
                    "{name} probability must lie in [0, 1], got {p}"
                )));
            }
        }
        if self.workers == 0 {
            return Err(EngineError::InvalidConfig(
                "workers must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluated {
    pub chromosome: Chromosome,
    pub fitness: f64,
    /// Sections assigned by the GA (pre-assignments excluded).
    pub assigned_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub min_fitness: f64,
    pub mean_fitness: f64,
    pub max_fitness: f64,
    pub assigned_count: usize,
    pub new_global_best: bool,
}

/// A decoded chromosome: its schedule and fitness breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub chromosome: Chromosome,
    pub schedule: Schedule,
    pub breakdown: FitnessBreakdown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best: Solution,
    /// Best chromosome of the random generation 0.
    pub initial: Solution,
    pub history: Vec<GenerationStats>,
    /// Index of the last generation evaluated.
    pub generations_run: usize,
}

impl RunResult {
    pub fn best_schedule(&self) -> &Schedule {
        &self.best.schedule
    }

    pub fn best_breakdown(&self) -> &FitnessBreakdown {
        &self.best.breakdown
    }
}

struct Evaluator<'a> {
    inst: &'a Instance,
    layout: Layout,
    policy: DecodePolicy,
    enforce: bool,
    pool: Option<rayon::ThreadPool>,
}

impl<'a> Evaluator<'a> {
    fn new(inst: &'a Instance, cfg: &GaConfig) -> Result<Self, EngineError> {
        let pool = if cfg.workers > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(cfg.workers)
                    .build()?,
            )
        } else {
            None
        };
        Ok(Evaluator {
            inst,
            layout: Layout::for_instance(inst)?,
            policy: cfg.decode_policy,
            enforce: cfg.enforce_associations,
            pool,
        })
    }

    fn schedule(&self, c: &Chromosome) -> Result<Schedule, EngineError> {
        let pairings = decode_pairings(
            c,
            self.layout,
            self.inst.professors().len(),
            self.inst.free_sections().len(),
            self.policy,
        )?;
        Ok(build_schedule(&pairings, self.inst, self.enforce))
    }

    fn solve(&self, c: &Chromosome) -> Result<Solution, EngineError> {
        let schedule = self.schedule(c)?;
        let breakdown = global_fitness(&schedule, self.inst)?;
        Ok(Solution {
            chromosome: c.clone(),
            schedule,
            breakdown,
        })
    }

    fn score(&self, c: Chromosome) -> Result<Evaluated, EngineError> {
        let schedule = self.schedule(&c)?;
        let fitness = global_fitness(&schedule, self.inst)?.global_f;
        Ok(Evaluated {
            assigned_count: schedule.ga_assigned_count(self.inst),
            chromosome: c,
            fitness,
        })
    }

    fn evaluate(&self, pop: Vec<Chromosome>) -> Result<Vec<Evaluated>, EngineError> {
        let mut scored = match &self.pool {
            Some(pool) => pool.install(|| {
                pop.into_par_iter()
                    .map(|c| self.score(c))
                    .collect::<Result<Vec<_>, _>>()
            })?,
            None => pop
                .into_iter()
                .map(|c| self.score(c))
                .collect::<Result<Vec<_>, _>>()?,
        };
        scored.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
        Ok(scored)
    }
}

/// Scores each chromosome and returns them sorted by ascending fitness.
/// Ties keep their input order.
pub fn evaluate_population(
    pop: Vec<Chromosome>,
    inst: &Instance,
    cfg: &GaConfig,
) -> Result<Vec<Evaluated>, EngineError> {
    Evaluator::new(inst, cfg)?.evaluate(pop)
}

/// Roulette pick for a given uniform draw `r` in `[0, 1)`.
///
/// Weights are `f_max - g_i`; the pick is the smallest `k` whose running
/// weight strictly exceeds `r` times the total. When every weight is zero
/// the pick is uniform, `floor(r * n)`.
pub fn roulette_pick(sorted_fitnesses: &[f64], r: f64) -> usize {
    let n = sorted_fitnesses.len();
    let f_max = sorted_fitnesses
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let total = sorted_fitnesses
        .iter()
        .fold(0.0, |acc, g| acc + (f_max - g));
    if total <= 0.0 {
        return ((r * n as f64) as usize).min(n - 1);
    }
    let threshold = r * total;
    let mut running = 0.0;
    let mut last_weighted = 0;
    for (k, g) in sorted_fitnesses.iter().enumerate() {
        let w = f_max - g;
        running += w;
        if w > 0.0 {
            last_weighted = k;
        }
        if running > threshold {
            return k;
        }
    }
    last_weighted
}

pub fn roulette_select<R: Rng>(sorted_fitnesses: &[f64], rng: &mut R) -> usize {
    assert!(
        !sorted_fitnesses.is_empty(),
        "roulette over an empty population"
    );
    let r: f64 = rng.gen();
    roulette_pick(sorted_fitnesses, r)
}

/// Breeds a full replacement generation from a sorted, evaluated one.
pub fn next_generation<R: Rng>(
    sorted: &[Evaluated],
    cfg: &GaConfig,
    rng: &mut R,
) -> Vec<Chromosome> {
    let fitnesses: Vec<f64> = sorted.iter().map(|e| e.fitness).collect();
    let mut out = Vec::with_capacity(cfg.population_size);
    while out.len() < cfg.population_size {
        let a = &sorted[roulette_select(&fitnesses, rng)].chromosome;
        let b = &sorted[roulette_select(&fitnesses, rng)].chromosome;
        let (x, y) = if rng.gen::<f64>() < cfg.crossover_prob {
            crossover(a, b, rng).expect("population chromosomes share one length")
        } else {
            (a.clone(), b.clone())
        };
        out.push(mutate(&x, cfg.mutation_prob, rng));
        if out.len() < cfg.population_size {
            out.push(mutate(&y, cfg.mutation_prob, rng));
        }
    }
    out
}

fn stats(generation: usize, evaluated: &[Evaluated], new_global_best: bool) -> GenerationStats {
    let min = evaluated[0].fitness;
    let max = evaluated[evaluated.len() - 1].fitness;
    let mean = evaluated.iter().map(|e| e.fitness).sum::<f64>() / evaluated.len() as f64;
    GenerationStats {
        generation,
        min_fitness: min,
        mean_fitness: mean.clamp(min, max),
        max_fitness: max,
        assigned_count: evaluated[0].assigned_count,
        new_global_best,
    }
}

/// Runs the GA to completion.
pub fn run(inst: &Instance, cfg: &GaConfig) -> Result<RunResult, EngineError> {
    let errors: Vec<Violation> = validate_instance(inst)
        .into_iter()
        .filter(|v| v.severity == Severity::Error)
        .collect();
    if !errors.is_empty() {
        return Err(EngineError::InvalidInstance(errors));
    }
    cfg.validate()?;

    let evaluator = Evaluator::new(inst, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let bits = evaluator.layout.bit_len();
    let mut population = (0..cfg.population_size)
        .map(|_| random_chromosome(&mut rng, bits))
        .collect::<Result<Vec<_>, _>>()?;

    let mut history = Vec::with_capacity(cfg.max_generations + 1);
    let mut best: Option<Evaluated> = None;
    let mut initial: Option<Chromosome> = None;
    let mut stagnant = 0;
    let mut generation = 0;
    loop {
        let evaluated = evaluator.evaluate(population)?;
        let leader = &evaluated[0];
        let improved = best.as_ref().is_none_or(|b| leader.fitness < b.fitness);
        if improved {
            best = Some(leader.clone());
            stagnant = 0;
        } else {
            stagnant += 1;
        }
        if initial.is_none() {
            initial = Some(leader.chromosome.clone());
        }
        history.push(stats(generation, &evaluated, improved));

        if generation >= cfg.max_generations || stagnant >= cfg.stagnation_limit {
            break;
        }
        population = next_generation(&evaluated, cfg, &mut rng);
        generation += 1;
    }

    let best = best.expect("at least one generation is evaluated");
    Ok(RunResult {
        best: evaluator.solve(&best.chromosome)?,
        initial: evaluator.solve(&initial.expect("generation 0 is evaluated"))?,
        history,
        generations_run: generation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate, GenParams};

    fn small() -> Instance {
        generate(&GenParams {
            n_professors: 12,
            n_sections: 36,
            ..GenParams::default()
        })
        .unwrap()
    }

    #[test]
    fn roulette_degenerate_weights() {
        for r in [0.0, 0.3, 0.999] {
            assert_eq!(roulette_pick(&[0.0, 10.0], r), 0);
        }
        assert_eq!(roulette_pick(&[1.0, 1.0, 1.0], 0.1), 0);
        assert_eq!(roulette_pick(&[1.0, 1.0, 1.0], 0.5), 1);
        assert_eq!(roulette_pick(&[1.0, 1.0, 1.0], 0.9), 2);
        assert_eq!(roulette_pick(&[5.0], 0.7), 0);
    }

    #[test]
    fn roulette_follows_cumulative_weights() {
        // weights 4, 2, 0 → cut points at 4/6 of the total
        assert_eq!(roulette_pick(&[2.0, 4.0, 6.0], 0.0), 0);
        assert_eq!(roulette_pick(&[2.0, 4.0, 6.0], 0.66), 0);
        assert_eq!(roulette_pick(&[2.0, 4.0, 6.0], 0.67), 1);
        assert_eq!(roulette_pick(&[2.0, 4.0, 6.0], 1.0), 1);
    }

    #[test]
    fn config_validation() {
        assert!(GaConfig::default().validate().is_ok());
        for bad in [
            GaConfig {
                population_size: 3,
                ..GaConfig::default()
            },
            GaConfig {
                population_size: 0,
                ..GaConfig::default()
            },
            GaConfig {
                crossover_prob: 1.5,
                ..GaConfig::default()
            },
            GaConfig {
                mutation_prob: -0.1,
                ..GaConfig::default()
            },
            GaConfig {
                workers: 0,
                ..GaConfig::default()
            },
        ] {
            assert!(matches!(bad.validate(), Err(EngineError::InvalidConfig(_))));
        }
    }

    #[test]
    fn evaluation_sorts_and_scores_independently() {
        let inst = small();
        let cfg = GaConfig::default();
        let layout = Layout::for_instance(&inst).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pop: Vec<Chromosome> = (0..20)
            .map(|_| random_chromosome(&mut rng, layout.bit_len()).unwrap())
            .collect();
        let evaluated = evaluate_population(pop.clone(), &inst, &cfg).unwrap();
        assert!(evaluated.windows(2).all(|w| w[0].fitness <= w[1].fitness));

        let mut expected: Vec<(Chromosome, f64)> = pop
            .iter()
            .map(|c| {
                let single = evaluate_population(vec![c.clone()], &inst, &cfg).unwrap();
                (c.clone(), single[0].fitness)
            })
            .collect();
        let mut got: Vec<(Chromosome, f64)> = evaluated
            .into_iter()
            .map(|e| (e.chromosome, e.fitness))
            .collect();
        expected.sort_by(|a, b| a.0.bytes().cmp(b.0.bytes()));
        got.sort_by(|a, b| a.0.bytes().cmp(b.0.bytes()));
        assert_eq!(got, expected);

        let same = evaluate_population(vec![pop[0].clone(); 4], &inst, &cfg).unwrap();
        assert!(same.iter().all(|e| e.fitness == same[0].fitness));
    }

    #[test]
    fn reproduction_without_operators_resamples() {
        let inst = small();
        let cfg = GaConfig {
            crossover_prob: 0.0,
            mutation_prob: 0.0,
            population_size: 10,
            ..GaConfig::default()
        };
        let layout = Layout::for_instance(&inst).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pop: Vec<Chromosome> = (0..10)
            .map(|_| random_chromosome(&mut rng, layout.bit_len()).unwrap())
            .collect();
        let sorted = evaluate_population(pop.clone(), &inst, &cfg).unwrap();
        let next = next_generation(&sorted, &cfg, &mut rng);
        assert_eq!(next.len(), 10);
        assert!(next.iter().all(|c| pop.contains(c)));

        let a = next_generation(
            &sorted,
            &GaConfig::default(),
            &mut ChaCha8Rng::seed_from_u64(1),
        );
        let b = next_generation(
            &sorted,
            &GaConfig::default(),
            &mut ChaCha8Rng::seed_from_u64(1),
        );
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
    }

    #[test]
    fn zero_generations_keeps_the_random_best() {
        let inst = small();
        let cfg = GaConfig {
            max_generations: 0,
            seed: 3,
            ..GaConfig::default()
        };
        let r = run(&inst, &cfg).unwrap();
        assert_eq!(r.history.len(), 1);
        assert_eq!(r.generations_run, 0);
        assert_eq!(r.best, r.initial);
        assert_eq!(r.best.breakdown.global_f, r.history[0].min_fitness);
    }

    #[test]
    fn runs_are_deterministic_and_greedy() {
        let inst = small();
        let cfg = GaConfig {
            max_generations: 30,
            seed: 21,
            ..GaConfig::default()
        };
        let a = run(&inst, &cfg).unwrap();
        let b = run(&inst, &cfg).unwrap();
        assert_eq!(a, b);
        let c = run(
            &inst,
            &GaConfig {
                workers: 3,
                ..cfg.clone()
            },
        )
        .unwrap();
        assert_eq!(a, c);

        let mut best = f64::INFINITY;
        for g in &a.history {
            assert!(g.min_fitness <= g.mean_fitness && g.mean_fitness <= g.max_fitness);
            assert_eq!(g.new_global_best, g.min_fitness < best);
            best = best.min(g.min_fitness);
        }
        assert_eq!(a.best.breakdown.global_f, best);
        assert!(a.best.breakdown.global_f <= a.initial.breakdown.global_f);
    }

    #[test]
    fn stagnation_stops_early() {
        let inst = small();
        let cfg = GaConfig {
            max_generations: 200,
            stagnation_limit: 3,
            seed: 2,
            ..GaConfig::default()
        };
        let r = run(&inst, &cfg).unwrap();
        assert!(r.generations_run < 200);
        let tail = &r.history[r.history.len() - 3..];
        assert!(tail.iter().all(|g| !g.new_global_best));
    }

    #[test]
    fn invalid_instance_is_rejected_before_evolution() {
        let base = small();
        let mut profs = base.professors().to_vec();
        profs[0].mandated_units = 99;
        let inst = Instance::new(
            profs,
            base.sections().to_vec(),
            base.associations().to_vec(),
            base.preferences().to_vec(),
            base.pre_assignments().to_vec(),
        );
        assert!(matches!(
            run(&inst, &GaConfig::default()),
            Err(EngineError::InvalidInstance(_))
        ));
    }
}

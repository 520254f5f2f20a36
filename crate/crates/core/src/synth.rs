//! Synthetic instances shaped like a physics department term.
//!
//! Non-major sections come from six courses: two lecture-only courses with
//! 4-unit lectures, and four lecture/lab courses generated as association
//! groups of a 3-unit lecture plus two 2-unit labs. A tenth of the
//! professors are prescheduled with major courses and left out of the GA;
//! some others carry one pre-assigned major course. Workloads are adjusted so
//! the units the GA can hand out match the non-major units on offer.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::domain::{
    overlaps, AssociationGroup, Category, DaySet, HalfChoice, Instance, Mode, PreferenceProfile,
    ProfIdx, Professor, Section, SectionIdx, TimeBlock, Weekday, Weights,
};

const LECTURE_ONLY: [&str; 2] = ["PHYS-121", "PHYS-141"];
const WITH_LABS: [&str; 4] = ["PHYS-122", "PHYS-123", "PHYS-142", "PHYS-143"];
const MAJOR_COURSES: [&str; 6] = [
    "PHYS-211", "PHYS-322", "PHYS-405", "PHYS-428", "ASTR-102", "GEOL-203",
];

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("cannot spread {units} units over {professors} professors within 2-15 units each")]
    InfeasibleWorkload { units: u32, professors: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub n_professors: usize,
    /// Non-major sections for the GA to assign.
    pub n_sections: usize,
    /// Lecture sections per lab section.
    pub lecture_lab_ratio: f64,
    pub seed: u64,
    /// Fraction of professors who lodge preferences.
    pub preference_density: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n_professors: 52,
            n_sections: 155,
            lecture_lab_ratio: 1.0,
            seed: 1,
            preference_density: 0.8,
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.n_professors == 0 || self.n_sections == 0 {
            return Err(SynthError::InvalidParams(
                "professor and section counts must be positive".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.preference_density) {
            return Err(SynthError::InvalidParams(format!(
                "preference density {} is outside [0, 1]",
                self.preference_density
            )));
        }
        if !(self.lecture_lab_ratio.is_finite() && self.lecture_lab_ratio > 0.0) {
            return Err(SynthError::InvalidParams(format!(
                "lecture/lab ratio {} must be positive",
                self.lecture_lab_ratio
            )));
        }
        Ok(())
    }
}

struct Rooms {
    prefix: &'static str,
    base: u32,
    booked: Vec<Vec<TimeBlock>>,
}

impl Rooms {
    fn new(prefix: &'static str, base: u32) -> Self {
        Rooms {
            prefix,
            base,
            booked: Vec::new(),
        }
    }

    /// First room free for `block`, opening a new one when all are busy.
    fn book(&mut self, block: TimeBlock) -> String {
        let idx = match self
            .booked
            .iter()
            .position(|taken| !taken.iter().any(|t| overlaps(t, &block)))
        {
            Some(i) => i,
            None => {
                self.booked.push(Vec::new());
                self.booked.len() - 1
            }
        };
        self.booked[idx].push(block);
        format!("{}-{:04}", self.prefix, self.base + idx as u32)
    }
}

fn hours(start_hour: u16, len: u16) -> (u16, u16) {
    (start_hour * 60, (start_hour + len) * 60)
}

fn four_unit_block(rng: &mut ChaCha8Rng) -> TimeBlock {
    let (days, (start, end)) = if rng.gen_bool(0.5) {
        ("MTWR", hours(rng.gen_range(8..18), 1))
    } else {
        ("TR", hours([8, 10, 12, 14, 16][rng.gen_range(0..5)], 2))
    };
    TimeBlock::new(DaySet::parse(days).unwrap(), start, end).unwrap()
}

fn mwf_block(rng: &mut ChaCha8Rng) -> TimeBlock {
    let (start, end) = hours(rng.gen_range(8..18), 1);
    TimeBlock::new(DaySet::parse("MWF").unwrap(), start, end).unwrap()
}

fn lab_block(rng: &mut ChaCha8Rng) -> TimeBlock {
    let day = Weekday::ALL[rng.gen_range(0..5)];
    let (start, end) = hours([8, 9, 12, 15][rng.gen_range(0..4)], 3);
    TimeBlock::new(DaySet::from_days(&[day]), start, end).unwrap()
}

/// Builds a random instance. Same parameters, same instance.
pub fn generate(params: &GenParams) -> Result<Instance, SynthError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut lecture_rooms = Rooms::new("180", 101);
    let mut lab_rooms = Rooms::new("180", 601);

    // groups g and standalone lectures x: lectures = x + g, labs = 2g
    let m = params.n_sections;
    let ideal = m as f64 / (2.0 * params.lecture_lab_ratio + 2.0);
    let groups = (ideal.round() as usize).min(m / 3);
    let standalone = m - 3 * groups;

    let mut sections: Vec<Section> = Vec::new();
    let mut associations = Vec::new();
    let mut next_no = std::collections::HashMap::<&str, u16>::new();
    let mut number = |course: &'static str| {
        let n = next_no.entry(course).or_insert(0);
        *n += 1;
        *n
    };

    let mut kinds: Vec<bool> = std::iter::repeat_n(true, groups)
        .chain(std::iter::repeat_n(false, standalone))
        .collect();
    kinds.shuffle(&mut rng);
    for is_group in kinds {
        if is_group {
            let course = WITH_LABS[rng.gen_range(0..WITH_LABS.len())];
            let lecture = mwf_block(&mut rng);
            let mut labs: Vec<TimeBlock> = Vec::new();
            while labs.len() < 2 {
                let lab = lab_block(&mut rng);
                if !overlaps(&lab, &lecture) && !labs.iter().any(|l| overlaps(l, &lab)) {
                    labs.push(lab);
                }
            }
            let lecture_idx = SectionIdx(sections.len());
            sections.push(Section {
                course: course.to_string(),
                section_no: number(course),
                units: 3,
                mode: Mode::Lecture,
                room: lecture_rooms.book(lecture),
                meeting: lecture,
                category: Category::NonMajor,
            });
            let mut lab_idx = Vec::new();
            for lab in labs {
                lab_idx.push(SectionIdx(sections.len()));
                sections.push(Section {
                    course: course.to_string(),
                    section_no: number(course),
                    units: 2,
                    mode: Mode::Laboratory,
                    room: lab_rooms.book(lab),
                    meeting: lab,
                    category: Category::NonMajor,
                });
            }
            associations.push(AssociationGroup {
                lecture: lecture_idx,
                labs: lab_idx,
            });
        } else {
            let course = LECTURE_ONLY[rng.gen_range(0..LECTURE_ONLY.len())];
            let block = four_unit_block(&mut rng);
            sections.push(Section {
                course: course.to_string(),
                section_no: number(course),
                units: 4,
                mode: Mode::Lecture,
                room: lecture_rooms.book(block),
                meeting: block,
                category: Category::NonMajor,
            });
        }
    }
    let non_major_units: u32 = sections.iter().map(|s| s.units).sum();

    // Professors: ~10% prescheduled, ~20% of the rest with one major course.
    let n = params.n_professors;
    let prescheduled = if n >= 5 { (n + 5) / 10 } else { 0 };
    let mut professors = Vec::with_capacity(n);
    let mut pre_assignments = Vec::new();
    let mut major_units = vec![0u32; n];
    for (i, units) in major_units.iter_mut().enumerate() {
        let ga_eligible = i >= prescheduled;
        let majors = if !ga_eligible {
            rng.gen_range(1..=2)
        } else if rng.gen_bool(0.2) {
            1
        } else {
            0
        };
        let mut held: Vec<TimeBlock> = Vec::new();
        for _ in 0..majors {
            let block = loop {
                let b = if rng.gen_bool(0.5) {
                    four_unit_block(&mut rng)
                } else {
                    mwf_block(&mut rng)
                };
                if !held.iter().any(|h| overlaps(h, &b)) {
                    break b;
                }
            };
            held.push(block);
            let course = MAJOR_COURSES[rng.gen_range(0..MAJOR_COURSES.len())];
            let category = if course.starts_with("PHYS") {
                Category::Major
            } else {
                Category::Speciality
            };
            pre_assignments.push((ProfIdx(i), SectionIdx(sections.len())));
            sections.push(Section {
                course: course.to_string(),
                section_no: number(course),
                units: 4,
                mode: Mode::Lecture,
                room: lecture_rooms.book(block),
                meeting: block,
                category,
            });
            *units += 4;
        }
        let mandated = if ga_eligible {
            rng.gen_range(2..=15).max(*units + 2)
        } else {
            *units
        };
        professors.push(Professor {
            id: format!("prof{}", i + 1),
            mandated_units: mandated,
            ga_eligible,
        });
    }

    // Nudge eligible workloads until their free capacity equals the offer.
    let eligible: Vec<usize> = (prescheduled..n).collect();
    let capacity = |ps: &[Professor]| -> i64 {
        eligible
            .iter()
            .map(|&i| i64::from(ps[i].mandated_units) - i64::from(major_units[i]))
            .sum()
    };
    let lo = |i: usize| (major_units[i] + 2).max(2);
    let max_cap: i64 = eligible
        .iter()
        .map(|&i| 15 - i64::from(major_units[i]))
        .sum();
    let min_cap: i64 = eligible
        .iter()
        .map(|&i| i64::from(lo(i) - major_units[i]))
        .sum();
    let target = i64::from(non_major_units);
    if eligible.is_empty() || target > max_cap || target < min_cap {
        return Err(SynthError::InfeasibleWorkload {
            units: non_major_units,
            professors: eligible.len(),
        });
    }
    let mut diff = target - capacity(&professors);
    while diff != 0 {
        let i = eligible[rng.gen_range(0..eligible.len())];
        let p = &mut professors[i];
        if diff > 0 && p.mandated_units < 15 {
            p.mandated_units += 1;
            diff -= 1;
        } else if diff < 0 && p.mandated_units > lo(i) {
            p.mandated_units -= 1;
            diff += 1;
        }
    }

    let non_major: Vec<&str> = LECTURE_ONLY
        .iter()
        .chain(WITH_LABS.iter())
        .copied()
        .collect();
    let mut preferences = Vec::new();
    for i in 0..n {
        if !rng.gen_bool(params.preference_density) {
            continue;
        }
        let mut tenths = [0u32; 5];
        for _ in 0..10 {
            tenths[rng.gen_range(0..5)] += 1;
        }
        let w = tenths.map(|t| f64::from(t) / 10.0);
        let half_choice = if rng.gen_bool(0.5) {
            HalfChoice::FirstHalf
        } else {
            HalfChoice::SecondHalf
        };
        let n_fav = rng.gen_range(1..=2);
        let favorite_courses = non_major
            .choose_multiple(&mut rng, n_fav)
            .map(|c| c.to_string())
            .collect();
        preferences.push(PreferenceProfile {
            owner: ProfIdx(i),
            weights: Weights {
                eight_am: w[0],
                half: w[1],
                fav: w[2],
                gap: w[3],
                prep: w[4],
            },
            half_choice,
            favorite_courses,
            avoid_8am: w[0] > 0.0,
        });
    }

    Ok(Instance::new(
        professors,
        sections,
        associations,
        preferences,
        pre_assignments,
    ))
}

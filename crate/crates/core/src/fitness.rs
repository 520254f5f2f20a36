//! Seven-component penalty for a professor's schedule, and the department
//! total the GA minimizes.
//!
//! The two departmental components (`units`, `assoc`) are raw counts. The
//! five faculty components are `alpha * weight` with `alpha` in `[0, 1]`.
//! Every component is computed over the professor's full schedule,
//! pre-assignments included.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::domain::{HalfChoice, Instance, ProfIdx, Schedule, Weekday, DAY_START, MIDDAY};

/// Normalizer for the 8am count: 8am classes every weekday.
const WEEKDAYS: f64 = 5.0;
/// Normalizer for gap time: a 7-hour gap every weekday, in minutes.
const MAX_GAP_MINUTES: u32 = 35 * 60;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FitnessError {
    #[error("professor {professor} holds {assigned} units but is mandated {mandated}")]
    UnitOverrun {
        professor: String,
        mandated: u32,
        assigned: u32,
    },
}

/// Raw quantities behind the seven components.
#[derive(Debug, Clone, PartialEq)]
pub struct Measures {
    pub mandated_units: u32,
    pub assigned_units: u32,
    pub missing_assoc: u32,
    pub eight_am_days: u32,
    pub half_choice: HalfChoice,
    pub non_preferred_minutes: u32,
    pub total_minutes: u32,
    pub non_favorite_courses: u32,
    pub favorite_courses: u32,
    pub non_major_courses: u32,
    pub gap_minutes: u32,
    pub preparations: u32,
}

impl Measures {
    pub fn collect(s: &Schedule, inst: &Instance, p: ProfIdx) -> Self {
        let secs = s.sections_of(p);
        let profile = inst.profile(p);
        let half_choice = profile.map(|pr| pr.half_choice).unwrap_or(HalfChoice::None);

        let mut eight_am = 0u8;
        let mut total_minutes = 0;
        let mut non_preferred_minutes = 0;
        let mut courses = BTreeSet::new();
        for &sec in secs {
            let m = &inst.section(sec).meeting;
            if m.start == DAY_START {
                for d in m.days.iter() {
                    eight_am |= 1 << d as u8;
                }
            }
            total_minutes += m.weekly_minutes();
            let np = match half_choice {
                HalfChoice::FirstHalf => m.minutes_within(MIDDAY, u16::MAX),
                HalfChoice::SecondHalf => m.minutes_within(0, MIDDAY),
                HalfChoice::None => 0,
            };
            non_preferred_minutes += np * m.days.len();
            let c = inst.course_id(sec);
            if inst.is_non_major_course(c) {
                courses.insert(c);
            }
        }

        let favorites = inst.favorite_course_ids(p);
        let non_favorite_courses = courses
            .iter()
            .filter(|c| favorites.is_none_or(|f| !f.contains(c)))
            .count() as u32;

        Measures {
            mandated_units: inst.professor(p).mandated_units,
            assigned_units: s.load_of(inst, p),
            missing_assoc: missing_assoc(s, inst, p),
            eight_am_days: eight_am.count_ones(),
            half_choice,
            non_preferred_minutes,
            total_minutes,
            non_favorite_courses,
            favorite_courses: favorites.map_or(0, |f| f.len() as u32),
            non_major_courses: inst.non_major_course_count() as u32,
            gap_minutes: gap_minutes(s, inst, p),
            preparations: courses.len() as u32,
        }
    }

    pub fn alpha_8am(&self) -> f64 {
        f64::from(self.eight_am_days) / WEEKDAYS
    }

    pub fn alpha_half(&self) -> f64 {
        if self.half_choice == HalfChoice::None || self.total_minutes == 0 {
            return 0.0;
        }
        f64::from(self.non_preferred_minutes) / f64::from(self.total_minutes)
    }

    pub fn alpha_fav(&self) -> f64 {
        let open = self.non_major_courses.saturating_sub(self.favorite_courses);
        if self.non_favorite_courses == 0 || open == 0 {
            return 0.0;
        }
        f64::from(self.non_favorite_courses) / f64::from(open)
    }

    pub fn alpha_gap(&self) -> f64 {
        f64::from(self.gap_minutes.min(MAX_GAP_MINUTES)) / f64::from(MAX_GAP_MINUTES)
    }

    pub fn alpha_prep(&self) -> f64 {
        if self.preparations <= 1 || self.non_major_courses <= 1 {
            return 0.0;
        }
        f64::from(self.preparations - 1) / f64::from(self.non_major_courses - 1)
    }
}

/// Members missing from each association group that `p` holds only partly.
fn missing_assoc(s: &Schedule, inst: &Instance, p: ProfIdx) -> u32 {
    let groups: BTreeSet<usize> = s
        .sections_of(p)
        .iter()
        .filter_map(|sec| inst.group_of(*sec))
        .collect();
    groups
        .into_iter()
        .map(|g| {
            let group = &inst.associations()[g];
            let held = group.members().filter(|m| s.owner(*m) == Some(p)).count();
            (group.len() - held) as u32
        })
        .sum()
}

/// Idle minutes between consecutive classes, summed over weekdays.
fn gap_minutes(s: &Schedule, inst: &Instance, p: ProfIdx) -> u32 {
    let mut total = 0;
    let mut day: Vec<(u16, u16)> = Vec::new();
    for d in Weekday::ALL {
        day.clear();
        day.extend(s.sections_of(p).iter().filter_map(|sec| {
            let m = &inst.section(*sec).meeting;
            m.days.contains(d).then_some((m.start, m.end))
        }));
        day.sort_unstable();
        total += day
            .windows(2)
            .map(|w| u32::from(w[1].0.saturating_sub(w[0].1)))
            .sum::<u32>();
    }
    total
}

pub fn delta_units(s: &Schedule, inst: &Instance, p: ProfIdx) -> Result<u32, FitnessError> {
    let prof = inst.professor(p);
    let assigned = s.load_of(inst, p);
    prof.mandated_units
        .checked_sub(assigned)
        .ok_or_else(|| FitnessError::UnitOverrun {
            professor: prof.id.clone(),
            mandated: prof.mandated_units,
            assigned,
        })
}

pub fn delta_assoc(s: &Schedule, inst: &Instance, p: ProfIdx) -> u32 {
    missing_assoc(s, inst, p)
}

pub fn delta_8am(s: &Schedule, inst: &Instance, p: ProfIdx) -> f64 {
    Measures::collect(s, inst, p).alpha_8am() * inst.weights(p).eight_am
}

pub fn delta_half(s: &Schedule, inst: &Instance, p: ProfIdx) -> f64 {
    Measures::collect(s, inst, p).alpha_half() * inst.weights(p).half
}

pub fn delta_fav(s: &Schedule, inst: &Instance, p: ProfIdx) -> f64 {
    Measures::collect(s, inst, p).alpha_fav() * inst.weights(p).fav
}

pub fn delta_gap(s: &Schedule, inst: &Instance, p: ProfIdx) -> f64 {
    Measures::collect(s, inst, p).alpha_gap() * inst.weights(p).gap
}

pub fn delta_prep(s: &Schedule, inst: &Instance, p: ProfIdx) -> f64 {
    Measures::collect(s, inst, p).alpha_prep() * inst.weights(p).prep
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfessorFitness {
    pub d_units: u32,
    pub d_assoc: u32,
    pub d_8am: f64,
    pub d_half: f64,
    pub d_fav: f64,
    pub d_gap: f64,
    pub d_prep: f64,
    pub f_p: f64,
}

impl ProfessorFitness {
    fn from_measures(m: &Measures, inst: &Instance, p: ProfIdx) -> Result<Self, FitnessError> {
        let w = inst.weights(p);
        let d_units = m
            .mandated_units
            .checked_sub(m.assigned_units)
            .ok_or_else(|| FitnessError::UnitOverrun {
                professor: inst.professor(p).id.clone(),
                mandated: m.mandated_units,
                assigned: m.assigned_units,
            })?;
        let mut pf = ProfessorFitness {
            d_units,
            d_assoc: m.missing_assoc,
            d_8am: m.alpha_8am() * w.eight_am,
            d_half: m.alpha_half() * w.half,
            d_fav: m.alpha_fav() * w.fav,
            d_gap: m.alpha_gap() * w.gap,
            d_prep: m.alpha_prep() * w.prep,
            f_p: 0.0,
        };
        pf.f_p = sum_components(&pf.components());
        Ok(pf)
    }

    /// The seven Δ values in fixed order: units, assoc, 8am, half, fav, gap, prep.
    pub fn components(&self) -> [f64; 7] {
        [
            f64::from(self.d_units),
            f64::from(self.d_assoc),
            self.d_8am,
            self.d_half,
            self.d_fav,
            self.d_gap,
            self.d_prep,
        ]
    }
}

/// Left-to-right sum; the order is part of the contract so that text
/// round-trips reproduce `f_p` bit-for-bit.
pub fn sum_components(c: &[f64; 7]) -> f64 {
    c.iter().fold(0.0, |acc, x| acc + x)
}

pub fn professor_fitness(
    s: &Schedule,
    inst: &Instance,
    p: ProfIdx,
) -> Result<ProfessorFitness, FitnessError> {
    ProfessorFitness::from_measures(&Measures::collect(s, inst, p), inst, p)
}

pub fn local_fitness(s: &Schedule, inst: &Instance, p: ProfIdx) -> Result<f64, FitnessError> {
    professor_fitness(s, inst, p).map(|pf| pf.f_p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitnessBreakdown {
    /// Indexed by professor position in the instance.
    pub per_professor: Vec<ProfessorFitness>,
    pub global_f: f64,
}

/// Per-professor fitness and their sum, accumulated in professor order.
pub fn global_fitness(s: &Schedule, inst: &Instance) -> Result<FitnessBreakdown, FitnessError> {
    let per_professor = inst
        .prof_indices()
        .map(|p| professor_fitness(s, inst, p))
        .collect::<Result<Vec<_>, _>>()?;
    let global_f = per_professor.iter().fold(0.0, |acc, pf| acc + pf.f_p);
    Ok(FitnessBreakdown {
        per_professor,
        global_f,
    })
}

fn weight_note(w: f64) -> String {
    if w == 0.0 {
        "w=0, no contribution".to_string()
    } else {
        format!("w={w}")
    }
}

/// Seven human-readable lines, one per component. Each ends in
/// `delta=<value>` with the exact value, so the lines parse back.
pub fn explain(s: &Schedule, inst: &Instance, p: ProfIdx) -> Result<Vec<String>, FitnessError> {
    let m = Measures::collect(s, inst, p);
    let pf = ProfessorFitness::from_measures(&m, inst, p)?;
    let w = inst.weights(p);
    let half = match m.half_choice {
        HalfChoice::FirstHalf => "first half preferred",
        HalfChoice::SecondHalf => "second half preferred",
        HalfChoice::None => "no half-day preference",
    };
    Ok(vec![
        format!(
            "units: mandated {} units, assigned {}; w=1 (departmental); delta={}",
            m.mandated_units, m.assigned_units, pf.d_units
        ),
        format!(
            "assoc: {} associated section(s) held by someone else or unassigned; w=1 (departmental); delta={}",
            m.missing_assoc, pf.d_assoc
        ),
        format!(
            "8am: D={} day(s) with an 8am class; {}; delta={}",
            m.eight_am_days,
            weight_note(w.eight_am),
            pf.d_8am
        ),
        format!(
            "half: H_np={} of H_total={} weekly hours in the non-preferred half ({half}); {}; delta={}",
            f64::from(m.non_preferred_minutes) / 60.0,
            f64::from(m.total_minutes) / 60.0,
            weight_note(w.half),
            pf.d_half
        ),
        format!(
            "fav: {} non-favorite course(s) of {} possible; {}; delta={}",
            m.non_favorite_courses,
            m.non_major_courses.saturating_sub(m.favorite_courses),
            weight_note(w.fav),
            pf.d_fav
        ),
        format!(
            "gap: H={} gap hour(s) per week; {}; delta={}",
            f64::from(m.gap_minutes) / 60.0,
            weight_note(w.gap),
            pf.d_gap
        ),
        format!(
            "prep: N={} different course(s); {}; delta={}",
            m.preparations,
            weight_note(w.prep),
            pf.d_prep
        ),
    ])
}

/// Pulls the `delta=` value out of an explanation line.
pub fn parse_explained_delta(line: &str) -> Option<f64> {
    line.rsplit_once("delta=")?.1.trim().parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::fixtures::*;
    use crate::domain::{AssociationGroup, Instance, Section, SectionIdx};
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    fn six_courses() -> Vec<Section> {
        // One section of each non-major course, spread so none overlap.
        vec![
            section("PHYS-121", 1, 4, "MTWR", hm(9, 0), hm(10, 0)),
            section("PHYS-122", 1, 3, "MWF", hm(10, 0), hm(11, 0)),
            section("PHYS-123", 1, 3, "MWF", hm(11, 0), hm(12, 0)),
            section("PHYS-141", 1, 4, "TR", hm(14, 0), hm(16, 0)),
            section("PHYS-142", 1, 3, "MWF", hm(12, 0), hm(13, 0)),
            section("PHYS-143", 1, 2, "F", hm(15, 0), hm(18, 0)),
        ]
    }

    fn single(
        mandated: u32,
        sections: Vec<Section>,
        weights: [f64; 5],
        half: HalfChoice,
        favs: &[&str],
        assign: &[usize],
    ) -> (Instance, Schedule) {
        let mut secs = six_courses();
        let base = secs.len();
        secs.extend(sections);
        let inst = Instance::new(
            vec![prof("prof1", mandated)],
            secs,
            vec![],
            vec![profile(0, weights, half, favs)],
            vec![],
        );
        let mut s = Schedule::empty(&inst);
        for &i in assign {
            s.assign(ProfIdx(0), SectionIdx(base + i));
        }
        (inst, s)
    }

    #[test]
    fn units_examples() {
        // 13 mandated, 4 + 4 + 3 assigned
        let extra = vec![
            section("PHYS-121", 2, 4, "MTWR", hm(8, 0), hm(9, 0)),
            section("PHYS-141", 2, 4, "TR", hm(10, 0), hm(12, 0)),
            section("PHYS-123", 2, 3, "MWF", hm(13, 0), hm(14, 0)),
        ];
        let (inst, s) = single(
            13,
            extra.clone(),
            [0.0; 5],
            HalfChoice::None,
            &[],
            &[0, 1, 2],
        );
        assert_eq!(delta_units(&s, &inst, ProfIdx(0)).unwrap(), 2);
        let (inst, s) = single(
            11,
            extra.clone(),
            [0.0; 5],
            HalfChoice::None,
            &[],
            &[0, 1, 2],
        );
        assert_eq!(delta_units(&s, &inst, ProfIdx(0)).unwrap(), 0);
        let (inst, s) = single(
            15,
            extra.clone(),
            [0.0; 5],
            HalfChoice::None,
            &[],
            &[0, 1, 2],
        );
        let oracle = 15 - extra.iter().map(|x| x.units).sum::<u32>();
        assert_eq!(delta_units(&s, &inst, ProfIdx(0)).unwrap(), oracle);
        assert_eq!(oracle, 4);
        let (inst, s) = single(10, extra, [0.0; 5], HalfChoice::None, &[], &[0, 1, 2]);
        assert!(matches!(
            delta_units(&s, &inst, ProfIdx(0)),
            Err(FitnessError::UnitOverrun { assigned: 11, .. })
        ));
        assert!(global_fitness(&s, &inst).is_err());
    }

    fn assoc_instance() -> Instance {
        Instance::new(
            vec![prof("p", 15), prof("q", 15)],
            vec![
                section("PHYS-122", 1, 3, "MWF", hm(8, 0), hm(9, 0)),
                section("PHYS-122", 2, 2, "W", hm(12, 0), hm(15, 0)),
                section("PHYS-122", 3, 2, "R", hm(15, 0), hm(18, 0)),
            ],
            vec![AssociationGroup {
                lecture: SectionIdx(0),
                labs: vec![SectionIdx(1), SectionIdx(2)],
            }],
            vec![],
            vec![],
        )
    }

    #[test]
    fn assoc_examples() {
        let inst = assoc_instance();
        let mut s = Schedule::empty(&inst);
        s.assign(ProfIdx(0), SectionIdx(1));
        assert_eq!(delta_assoc(&s, &inst, ProfIdx(0)), 2);
        s.assign(ProfIdx(1), SectionIdx(0));
        s.assign(ProfIdx(1), SectionIdx(2));
        assert_eq!(delta_assoc(&s, &inst, ProfIdx(1)), 1);

        let mut whole = Schedule::empty(&inst);
        for i in 0..3 {
            whole.assign(ProfIdx(0), SectionIdx(i));
        }
        assert_eq!(delta_assoc(&whole, &inst, ProfIdx(0)), 0);
        assert_eq!(delta_assoc(&whole, &inst, ProfIdx(1)), 0);
    }

    #[test]
    fn eight_am_examples() {
        let mwf8 = vec![section("PHYS-122", 2, 3, "MWF", hm(8, 0), hm(9, 0))];
        let (inst, s) = single(
            15,
            mwf8.clone(),
            [0.4, 0.2, 0.1, 0.2, 0.1],
            HalfChoice::None,
            &[],
            &[0],
        );
        assert!((delta_8am(&s, &inst, ProfIdx(0)) - 0.24).abs() < TOL);
        let (inst, s) = single(
            15,
            mwf8,
            [0.3, 0.0, 0.3, 0.1, 0.3],
            HalfChoice::None,
            &[],
            &[0],
        );
        assert!((delta_8am(&s, &inst, ProfIdx(0)) - 0.18).abs() < TOL);
        let late = vec![section("PHYS-122", 2, 3, "MWF", hm(8, 10), hm(9, 0))];
        let (inst, s) = single(
            15,
            late,
            [0.4, 0.2, 0.1, 0.2, 0.1],
            HalfChoice::None,
            &[],
            &[0],
        );
        assert_eq!(delta_8am(&s, &inst, ProfIdx(0)), 0.0);
    }

    #[test]
    fn half_day_example_from_twelve_hours() {
        // 9 first-half hours (MTWR 9-10, MWF 10-11, F 8-10) plus MWF 2-3pm
        let extra = vec![
            section("PHYS-121", 2, 4, "MTWR", hm(9, 0), hm(10, 0)),
            section("PHYS-122", 2, 3, "MWF", hm(10, 0), hm(11, 0)),
            section("PHYS-143", 2, 2, "F", hm(8, 0), hm(10, 0)),
            section("PHYS-141", 2, 4, "MWF", hm(14, 0), hm(15, 0)),
        ];
        let (inst, s) = single(
            15,
            extra,
            [0.4, 0.2, 0.1, 0.2, 0.1],
            HalfChoice::FirstHalf,
            &[],
            &[0, 1, 2, 3],
        );
        let m = Measures::collect(&s, &inst, ProfIdx(0));
        assert_eq!(
            (m.total_minutes, m.non_preferred_minutes),
            (12 * 60, 3 * 60)
        );
        assert!((delta_half(&s, &inst, ProfIdx(0)) - 0.05).abs() < TOL);
    }

    #[test]
    fn half_day_prorates_sections_spanning_one_pm() {
        let lab = vec![section("PHYS-122", 2, 2, "M", hm(12, 10), hm(15, 0))];
        let (inst, s) = single(
            15,
            lab,
            [0.0, 1.0, 0.0, 0.0, 0.0],
            HalfChoice::FirstHalf,
            &[],
            &[0],
        );
        // minute-grid oracle over the single meeting day
        let after: u32 = (hm(12, 10)..hm(15, 0))
            .filter(|m| *m >= 780 && *m < 1080)
            .count() as u32;
        let total = hm(15, 0) - hm(12, 10);
        assert_eq!((after, total), (120, 170));
        let expected = f64::from(after) / f64::from(total);
        assert!((delta_half(&s, &inst, ProfIdx(0)) - expected).abs() < TOL);
    }

    #[test]
    fn half_day_zero_in_preferred_half_or_without_choice() {
        let am = vec![section("PHYS-122", 2, 3, "MWF", hm(9, 0), hm(10, 0))];
        let (inst, s) = single(
            15,
            am.clone(),
            [0.0, 1.0, 0.0, 0.0, 0.0],
            HalfChoice::FirstHalf,
            &[],
            &[0],
        );
        assert_eq!(delta_half(&s, &inst, ProfIdx(0)), 0.0);
        let (inst, s) = single(
            15,
            am,
            [0.0, 1.0, 0.0, 0.0, 0.0],
            HalfChoice::None,
            &[],
            &[0],
        );
        assert_eq!(delta_half(&s, &inst, ProfIdx(0)), 0.0);
    }

    #[test]
    fn favorite_examples() {
        let favs = ["PHYS-121", "PHYS-142"];
        let w = [0.4, 0.2, 0.1, 0.2, 0.1];
        let (inst, mut s) = single(15, vec![], w, HalfChoice::None, &favs, &[]);
        s.assign(ProfIdx(0), SectionIdx(0));
        s.assign(ProfIdx(0), SectionIdx(4));
        assert_eq!(delta_fav(&s, &inst, ProfIdx(0)), 0.0);

        // 122, 123, 141, 142 assigned: three of them are not favorites
        let mut s = Schedule::empty(&inst);
        for i in [1, 2, 3, 4] {
            s.assign(ProfIdx(0), SectionIdx(i));
        }
        let assigned: BTreeSet<&str> = [1, 2, 3, 4]
            .iter()
            .map(|i| inst.sections()[*i].course.as_str())
            .collect();
        let non_fav = assigned.iter().filter(|c| !favs.contains(c)).count();
        assert_eq!(non_fav, 3);
        let alpha = non_fav as f64 / (6 - favs.len()) as f64;
        assert!((delta_fav(&s, &inst, ProfIdx(0)) - alpha * 0.1).abs() < TOL);
        assert!((alpha - 0.75).abs() < TOL);

        // all four non-favorites: the worst case
        s.assign(ProfIdx(0), SectionIdx(5));
        s.unassign(SectionIdx(4));
        assert!((delta_fav(&s, &inst, ProfIdx(0)) - 0.1).abs() < TOL);
    }

    #[test]
    fn gap_examples() {
        let w = [0.0, 0.0, 0.0, 1.0, 0.0];
        let spread = vec![
            section("PHYS-121", 2, 4, "MTWRF", hm(8, 0), hm(9, 0)),
            section("PHYS-141", 2, 4, "MTWRF", hm(17, 0), hm(18, 0)),
        ];
        let (inst, s) = single(15, spread, w, HalfChoice::None, &[], &[0, 1]);
        assert!((delta_gap(&s, &inst, ProfIdx(0)) - 1.0).abs() < TOL);

        let packed = vec![
            section("PHYS-121", 2, 4, "MTWRF", hm(8, 0), hm(9, 0)),
            section("PHYS-141", 2, 4, "MTWRF", hm(9, 0), hm(10, 0)),
        ];
        let (inst, s) = single(15, packed, w, HalfChoice::None, &[], &[0, 1]);
        assert_eq!(delta_gap(&s, &inst, ProfIdx(0)), 0.0);

        let one_a_day = vec![
            section("PHYS-121", 2, 4, "MW", hm(8, 0), hm(9, 0)),
            section("PHYS-141", 2, 4, "TR", hm(15, 0), hm(17, 0)),
        ];
        let (inst, s) = single(15, one_a_day, w, HalfChoice::None, &[], &[0, 1]);
        assert_eq!(delta_gap(&s, &inst, ProfIdx(0)), 0.0);

        let two_hours = vec![
            section("PHYS-121", 2, 4, "M", hm(8, 0), hm(9, 0)),
            section("PHYS-141", 2, 4, "M", hm(11, 0), hm(12, 0)),
        ];
        let (inst, s) = single(15, two_hours, w, HalfChoice::None, &[], &[0, 1]);
        assert!((delta_gap(&s, &inst, ProfIdx(0)) - 2.0 / 35.0).abs() < TOL);
    }

    #[test]
    fn prep_examples() {
        let w = [0.0, 0.0, 0.0, 0.5, 0.5];
        let (inst, mut s) = single(15, vec![], w, HalfChoice::None, &[], &[]);
        s.assign(ProfIdx(0), SectionIdx(1));
        assert_eq!(delta_prep(&s, &inst, ProfIdx(0)), 0.0);
        s.assign(ProfIdx(0), SectionIdx(2));
        s.assign(ProfIdx(0), SectionIdx(3));
        assert!((delta_prep(&s, &inst, ProfIdx(0)) - (3.0 - 1.0) / 5.0 * 0.5).abs() < TOL);
        assert!((delta_prep(&s, &inst, ProfIdx(0)) - 0.2).abs() < TOL);

        let w = [0.0, 0.0, 0.0, 0.0, 1.0];
        let (inst, mut s) = single(100, vec![], w, HalfChoice::None, &[], &[]);
        for i in 0..6 {
            s.assign(ProfIdx(0), SectionIdx(i));
        }
        assert!((Measures::collect(&s, &inst, ProfIdx(0)).alpha_prep() - 1.0).abs() < TOL);
    }

    #[test]
    fn local_fitness_simple_cases() {
        let (inst, s) = single(0, vec![], [0.0; 5], HalfChoice::None, &[], &[]);
        assert_eq!(local_fitness(&s, &inst, ProfIdx(0)).unwrap(), 0.0);
        let (inst, s) = single(2, vec![], [0.0; 5], HalfChoice::None, &[], &[]);
        assert_eq!(local_fitness(&s, &inst, ProfIdx(0)).unwrap(), 2.0);
    }

    #[test]
    fn global_fitness_sums_professors() {
        let inst = Instance::new(
            vec![prof("a", 0), prof("b", 0)],
            vec![],
            vec![],
            vec![],
            vec![],
        );
        let s = Schedule::empty(&inst);
        assert_eq!(global_fitness(&s, &inst).unwrap().global_f, 0.0);

        let inst = Instance::new(
            vec![prof("a", 1), prof("b", 3)],
            vec![],
            vec![],
            vec![],
            vec![],
        );
        let s = Schedule::empty(&inst);
        assert_eq!(global_fitness(&s, &inst).unwrap().global_f, 4.0);
    }

    #[test]
    fn explanation_lines() {
        let (inst, s) = single(4, vec![], [0.0; 5], HalfChoice::None, &[], &[]);
        let lines = explain(&s, &inst, ProfIdx(0)).unwrap();
        assert_eq!(lines.len(), 7);
        assert_eq!(
            lines
                .iter()
                .filter(|l| l.contains("w=0, no contribution"))
                .count(),
            5
        );

        let mwf8 = vec![section("PHYS-122", 2, 3, "MWF", hm(8, 0), hm(9, 0))];
        let (inst, s) = single(
            15,
            mwf8,
            [0.4, 0.2, 0.1, 0.2, 0.1],
            HalfChoice::None,
            &[],
            &[0],
        );
        let lines = explain(&s, &inst, ProfIdx(0)).unwrap();
        assert!(lines[2].contains("D=3") && lines[2].contains("w=0.4"));
        let d = parse_explained_delta(&lines[2]).unwrap();
        assert!((d - 0.24).abs() < TOL);
    }

    // Random schedules on a small fixed pool of sections.
    fn pool() -> Vec<Section> {
        let mut v = six_courses();
        v.extend([
            section("PHYS-121", 2, 4, "MTWR", hm(8, 0), hm(9, 0)),
            section("PHYS-122", 2, 2, "W", hm(15, 0), hm(18, 0)),
            section("PHYS-122", 3, 2, "T", hm(8, 0), hm(11, 0)),
            section("PHYS-142", 2, 2, "R", hm(12, 10), hm(15, 0)),
            section("PHYS-143", 2, 2, "T", hm(14, 0), hm(17, 0)),
        ]);
        v
    }

    fn random_case(weights: [u8; 5], half: u8, mask: u16, owners: u16) -> (Instance, Schedule) {
        let total: u32 = weights.iter().map(|w| u32::from(*w)).sum();
        let w: [f64; 5] = if total == 0 {
            [0.0; 5]
        } else {
            weights.map(|x| f64::from(x) / f64::from(total))
        };
        let half = [
            HalfChoice::FirstHalf,
            HalfChoice::SecondHalf,
            HalfChoice::None,
        ][half as usize % 3];
        let inst = Instance::new(
            vec![prof("a", 15), prof("b", 15)],
            pool(),
            vec![AssociationGroup {
                lecture: SectionIdx(1),
                labs: vec![SectionIdx(7), SectionIdx(8)],
            }],
            vec![profile(0, w, half, &["PHYS-121"]), profile(1, w, half, &[])],
            vec![],
        );
        let mut s = Schedule::empty(&inst);
        for i in 0..inst.sections().len() {
            if mask & (1 << i) != 0 {
                let p = ProfIdx(((owners >> i) & 1) as usize);
                let sec = SectionIdx(i);
                let clash = s.sections_of(p).iter().any(|o| {
                    crate::domain::overlaps(&inst.section(*o).meeting, &inst.section(sec).meeting)
                });
                if !clash && s.load_of(&inst, p) + inst.section(sec).units <= 15 {
                    s.assign(p, sec);
                }
            }
        }
        (inst, s)
    }

    proptest! {
        #[test]
        fn components_stay_in_range(w in any::<[u8; 5]>(), half in 0u8..3, mask in any::<u16>(), owners in any::<u16>()) {
            let (inst, s) = random_case(w, half, mask, owners);
            let bd = global_fitness(&s, &inst).unwrap();
            for (i, pf) in bd.per_professor.iter().enumerate() {
                let wt = inst.weights(ProfIdx(i));
                for (d, wv) in [(pf.d_8am, wt.eight_am), (pf.d_half, wt.half), (pf.d_fav, wt.fav), (pf.d_gap, wt.gap), (pf.d_prep, wt.prep)] {
                    prop_assert!(d >= 0.0 && d <= wv + 1e-15);
                }
            }
        }

        #[test]
        fn local_is_independent_sum_and_global_is_sum_of_locals(w in any::<[u8; 5]>(), half in 0u8..3, mask in any::<u16>(), owners in any::<u16>()) {
            let (inst, s) = random_case(w, half, mask, owners);
            let bd = global_fitness(&s, &inst).unwrap();
            let mut total = 0.0;
            for p in inst.prof_indices() {
                let separate = f64::from(delta_units(&s, &inst, p).unwrap())
                    + f64::from(delta_assoc(&s, &inst, p))
                    + delta_8am(&s, &inst, p)
                    + delta_half(&s, &inst, p)
                    + delta_fav(&s, &inst, p)
                    + delta_gap(&s, &inst, p)
                    + delta_prep(&s, &inst, p);
                let local = local_fitness(&s, &inst, p).unwrap();
                prop_assert_eq!(local, separate);
                total += local;
            }
            prop_assert_eq!(bd.global_f, total);
        }

        #[test]
        fn explanation_round_trips(w in any::<[u8; 5]>(), half in 0u8..3, mask in any::<u16>(), owners in any::<u16>()) {
            let (inst, s) = random_case(w, half, mask, owners);
            for p in inst.prof_indices() {
                let lines = explain(&s, &inst, p).unwrap();
                prop_assert_eq!(lines.len(), 7);
                let parsed: Vec<f64> = lines.iter().map(|l| parse_explained_delta(l).unwrap()).collect();
                let arr: [f64; 7] = parsed.try_into().unwrap();
                prop_assert_eq!(sum_components(&arr), local_fitness(&s, &inst, p).unwrap());
            }
        }

        #[test]
        fn extra_8am_day_never_lowers_penalty(w in any::<[u8; 5]>(), mask in any::<u16>()) {
            let (inst, s) = random_case(w, 2, mask & 0b1111_1111, 0);
            let before = delta_8am(&s, &inst, ProfIdx(0));
            // PHYS-121-02 meets MTWR at 8am
            let mut s2 = s.clone();
            s2.assign(ProfIdx(0), SectionIdx(6));
            prop_assert!(delta_8am(&s2, &inst, ProfIdx(0)) >= before);
        }

        #[test]
        fn dropping_a_broken_member_does_not_hurt_others(mask in any::<u16>(), owners in any::<u16>()) {
            let (inst, s) = random_case([1, 1, 1, 1, 1], 0, mask, owners);
            for sec in [SectionIdx(1), SectionIdx(7), SectionIdx(8)] {
                if let Some(holder) = s.owner(sec) {
                    let mut s2 = s.clone();
                    s2.unassign(sec);
                    for p in inst.prof_indices().filter(|p| *p != holder) {
                        prop_assert!(delta_assoc(&s2, &inst, p) <= delta_assoc(&s, &inst, p));
                    }
                }
            }
        }
    }

    #[test]
    fn perfect_professor_has_zero_fitness() {
        let inst = assoc_instance();
        let mut s = Schedule::empty(&inst);
        for i in 0..3 {
            s.assign(ProfIdx(0), SectionIdx(i));
        }
        let inst = Instance::new(
            vec![prof("p", 7), prof("q", 0)],
            inst.sections().to_vec(),
            inst.associations().to_vec(),
            vec![],
            vec![],
        );
        assert_eq!(global_fitness(&s, &inst).unwrap().global_f, 0.0);
    }
}

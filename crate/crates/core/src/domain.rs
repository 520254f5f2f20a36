//! Instance and schedule data model.
//!
//! Professors and sections are referred to by their position in the
//! [`Instance`] ([`ProfIdx`], [`SectionIdx`]). String identifiers only matter
//! at the file boundary.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// 8:00am in minutes since midnight.
pub const DAY_START: u16 = 8 * 60;
/// 6:00pm in minutes since midnight.
pub const DAY_END: u16 = 18 * 60;
/// 1:00pm, the boundary between the first and second half of the teaching day.
pub const MIDDAY: u16 = 13 * 60;

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;
const MAX_TEACHING_UNITS: u32 = 15;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DomainError {
    #[error("unknown professor `{0}`")]
    UnknownProfessor(String),
    #[error("unknown day letter `{0}`")]
    UnknownDay(char),
    #[error("empty day set")]
    EmptyDays,
    #[error("time block must start before it ends ({start} >= {end})")]
    EmptyInterval { start: u16, end: u16 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weekday {
    Mon,
    Tue,
    Wed,
    Thu,
    Fri,
}

impl Weekday {
    pub const ALL: [Weekday; 5] = [
        Weekday::Mon,
        Weekday::Tue,
        Weekday::Wed,
        Weekday::Thu,
        Weekday::Fri,
    ];

    /// Single-letter code; Thursday is `r`.
    pub fn letter(self) -> char {
        match self {
            Weekday::Mon => 'm',
            Weekday::Tue => 't',
            Weekday::Wed => 'w',
            Weekday::Thu => 'r',
            Weekday::Fri => 'f',
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

/// A subset of the five teaching weekdays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DaySet(u8);

impl DaySet {
    pub const EMPTY: DaySet = DaySet(0);

    pub fn from_days(days: &[Weekday]) -> Self {
        DaySet(days.iter().fold(0, |acc, d| acc | d.bit()))
    }

    /// Parses a day pattern such as `MWF`, `tr` or `MTWRF`.
    pub fn parse(text: &str) -> Result<Self, DomainError> {
        let mut bits = 0u8;
        for ch in text.trim().chars() {
            let day = match ch.to_ascii_lowercase() {
                'm' => Weekday::Mon,
                't' => Weekday::Tue,
                'w' => Weekday::Wed,
                'r' => Weekday::Thu,
                'f' => Weekday::Fri,
                other => return Err(DomainError::UnknownDay(other)),
            };
            bits |= day.bit();
        }
        if bits == 0 {
            return Err(DomainError::EmptyDays);
        }
        Ok(DaySet(bits))
    }

    pub fn contains(self, day: Weekday) -> bool {
        self.0 & day.bit() != 0
    }

    pub fn intersects(self, other: DaySet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn iter(self) -> impl Iterator<Item = Weekday> {
        Weekday::ALL.into_iter().filter(move |d| self.contains(*d))
    }
}

impl fmt::Display for DaySet {
    /// Lowercase letters in weekday order, e.g. `mwf`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for day in self.iter() {
            write!(f, "{}", day.letter())?;
        }
        Ok(())
    }
}

/// Weekly meeting pattern. Intervals are end-exclusive, in minutes since midnight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeBlock {
    pub days: DaySet,
    pub start: u16,
    pub end: u16,
}

impl TimeBlock {
    pub fn new(days: DaySet, start: u16, end: u16) -> Result<Self, DomainError> {
        if days.is_empty() {
            return Err(DomainError::EmptyDays);
        }
        if start >= end {
            return Err(DomainError::EmptyInterval { start, end });
        }
        Ok(TimeBlock { days, start, end })
    }

    pub fn minutes_per_meeting(&self) -> u32 {
        u32::from(self.end.saturating_sub(self.start))
    }

    pub fn weekly_minutes(&self) -> u32 {
        self.minutes_per_meeting() * self.days.len()
    }

    /// Minutes per meeting falling inside `[lo, hi)`.
    pub fn minutes_within(&self, lo: u16, hi: u16) -> u32 {
        let a = self.start.max(lo);
        let b = self.end.min(hi);
        u32::from(b.saturating_sub(a))
    }
}

/// True when the blocks share a day and their half-open intervals intersect.
pub fn overlaps(a: &TimeBlock, b: &TimeBlock) -> bool {
    a.days.intersects(b.days) && a.start < b.end && b.start < a.end
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Lecture,
    Laboratory,
}

/// Course classification. Only non-major courses take part in the
/// favorite-course and preparation-count preferences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    NonMajor,
    Major,
    Speciality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProfIdx(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SectionIdx(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub course: String,
    pub section_no: u16,
    pub units: u32,
    pub mode: Mode,
    pub meeting: TimeBlock,
    pub room: String,
    pub category: Category,
}

impl Section {
    /// `PHYS-122-02` style label.
    pub fn label(&self) -> String {
        format!("{}-{:02}", self.course, self.section_no)
    }
}

/// Room name as a lowercase atom: `180-0101` becomes `room_180_0101`.
pub fn room_atom(room: &str) -> String {
    format!("room_{}", room.replace('-', "_").to_lowercase())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Professor {
    pub id: String,
    pub mandated_units: u32,
    pub ga_eligible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfChoice {
    FirstHalf,
    SecondHalf,
    None,
}

/// The five preference weights. Either they sum to 1 or they are all zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Weights {
    pub eight_am: f64,
    pub half: f64,
    pub fav: f64,
    pub gap: f64,
    pub prep: f64,
}

impl Weights {
    pub fn as_array(&self) -> [f64; 5] {
        [self.eight_am, self.half, self.fav, self.gap, self.prep]
    }

    pub fn sum(&self) -> f64 {
        self.as_array().iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.as_array().iter().all(|w| *w == 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceProfile {
    pub owner: ProfIdx,
    pub weights: Weights,
    pub half_choice: HalfChoice,
    pub favorite_courses: BTreeSet<String>,
    /// The survey answer to "no 8am classes". Informational: the 8am
    /// penalty is driven by the weight alone.
    pub avoid_8am: bool,
}

impl PreferenceProfile {
    pub fn empty(owner: ProfIdx) -> Self {
        PreferenceProfile {
            owner,
            weights: Weights::default(),
            half_choice: HalfChoice::None,
            favorite_courses: BTreeSet::new(),
            avoid_8am: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationGroup {
    pub lecture: SectionIdx,
    pub labs: Vec<SectionIdx>,
}

impl AssociationGroup {
    pub fn members(&self) -> impl Iterator<Item = SectionIdx> + '_ {
        std::iter::once(self.lecture).chain(self.labs.iter().copied())
    }

    pub fn len(&self) -> usize {
        1 + self.labs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// The complete problem input plus lookup tables derived from it.
///
/// Construction never fails; call [`validate_instance`] to check invariants.
#[derive(Debug, Clone)]
pub struct Instance {
    professors: Vec<Professor>,
    sections: Vec<Section>,
    associations: Vec<AssociationGroup>,
    preferences: Vec<PreferenceProfile>,
    pre_assignments: Vec<(ProfIdx, SectionIdx)>,

    prof_by_id: HashMap<String, ProfIdx>,
    profile_of: Vec<Option<usize>>,
    group_of: Vec<Option<usize>>,
    course_of: Vec<usize>,
    courses: Vec<String>,
    non_major_courses: Vec<bool>,
    favorites_of: Vec<BTreeSet<usize>>,
    pre_assigned: Vec<bool>,
    free_sections: Vec<SectionIdx>,
}

impl Instance {
    pub fn new(
        professors: Vec<Professor>,
        sections: Vec<Section>,
        associations: Vec<AssociationGroup>,
        preferences: Vec<PreferenceProfile>,
        pre_assignments: Vec<(ProfIdx, SectionIdx)>,
    ) -> Self {
        let mut prof_by_id = HashMap::new();
        for (i, p) in professors.iter().enumerate() {
            prof_by_id.entry(p.id.clone()).or_insert(ProfIdx(i));
        }

        let mut profile_of = vec![None; professors.len()];
        for (i, pref) in preferences.iter().enumerate() {
            if let Some(slot) = profile_of.get_mut(pref.owner.0) {
                slot.get_or_insert(i);
            }
        }

        let mut group_of = vec![None; sections.len()];
        for (g, group) in associations.iter().enumerate() {
            for member in group.members() {
                if let Some(slot) = group_of.get_mut(member.0) {
                    slot.get_or_insert(g);
                }
            }
        }

        let mut courses: Vec<String> = Vec::new();
        let mut course_index: HashMap<&str, usize> = HashMap::new();
        let mut course_of = Vec::with_capacity(sections.len());
        for s in &sections {
            let idx = *course_index.entry(s.course.as_str()).or_insert_with(|| {
                courses.push(s.course.clone());
                courses.len() - 1
            });
            course_of.push(idx);
        }
        let mut non_major_courses = vec![false; courses.len()];
        for (s, &c) in sections.iter().zip(&course_of) {
            if s.category == Category::NonMajor {
                non_major_courses[c] = true;
            }
        }

        let favorites_of = preferences
            .iter()
            .map(|pref| {
                pref.favorite_courses
                    .iter()
                    .filter_map(|name| course_index.get(name.as_str()).copied())
                    .filter(|&c| non_major_courses[c])
                    .collect()
            })
            .collect();

        let mut pre_assigned = vec![false; sections.len()];
        for &(_, s) in &pre_assignments {
            if let Some(flag) = pre_assigned.get_mut(s.0) {
                *flag = true;
            }
        }
        let free_sections = (0..sections.len())
            .filter(|&i| !pre_assigned[i])
            .map(SectionIdx)
            .collect();

        Instance {
            professors,
            sections,
            associations,
            preferences,
            pre_assignments,
            prof_by_id,
            profile_of,
            group_of,
            course_of,
            courses,
            non_major_courses,
            favorites_of,
            pre_assigned,
            free_sections,
        }
    }

    pub fn professors(&self) -> &[Professor] {
        &self.professors
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn associations(&self) -> &[AssociationGroup] {
        &self.associations
    }

    pub fn preferences(&self) -> &[PreferenceProfile] {
        &self.preferences
    }

    pub fn pre_assignments(&self) -> &[(ProfIdx, SectionIdx)] {
        &self.pre_assignments
    }

    pub fn professor(&self, p: ProfIdx) -> &Professor {
        &self.professors[p.0]
    }

    pub fn section(&self, s: SectionIdx) -> &Section {
        &self.sections[s.0]
    }

    pub fn prof_indices(&self) -> impl Iterator<Item = ProfIdx> {
        (0..self.professors.len()).map(ProfIdx)
    }

    pub fn find_professor(&self, id: &str) -> Result<ProfIdx, DomainError> {
        self.prof_by_id
            .get(id)
            .copied()
            .ok_or_else(|| DomainError::UnknownProfessor(id.to_string()))
    }

    pub fn find_section(&self, course: &str, section_no: u16) -> Option<SectionIdx> {
        self.sections
            .iter()
            .position(|s| s.course == course && s.section_no == section_no)
            .map(SectionIdx)
    }

    pub fn profile(&self, p: ProfIdx) -> Option<&PreferenceProfile> {
        self.profile_of[p.0].map(|i| &self.preferences[i])
    }

    pub fn weights(&self, p: ProfIdx) -> Weights {
        self.profile(p).map(|pr| pr.weights).unwrap_or_default()
    }

    /// Favorite non-major courses of `p`, as course indices.
    pub fn favorite_course_ids(&self, p: ProfIdx) -> Option<&BTreeSet<usize>> {
        self.profile_of[p.0].map(|i| &self.favorites_of[i])
    }

    pub fn group_of(&self, s: SectionIdx) -> Option<usize> {
        self.group_of[s.0]
    }

    pub fn course_id(&self, s: SectionIdx) -> usize {
        self.course_of[s.0]
    }

    pub fn course_name(&self, course_id: usize) -> &str {
        &self.courses[course_id]
    }

    pub fn is_non_major_course(&self, course_id: usize) -> bool {
        self.non_major_courses[course_id]
    }

    /// Number of distinct non-major courses offered (six in a typical term).
    pub fn non_major_course_count(&self) -> usize {
        self.non_major_courses.iter().filter(|b| **b).count()
    }

    pub fn is_pre_assigned(&self, s: SectionIdx) -> bool {
        self.pre_assigned[s.0]
    }

    /// Sections left for the GA, in instance order. Chromosome class
    /// indices enumerate this list.
    pub fn free_sections(&self) -> &[SectionIdx] {
        &self.free_sections
    }
}

/// Professor → sections map with unassigned sections implied.
///
/// A section has at most one owner by construction. Rooms can be
/// overridden per section by post-optimization room swaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    owner: Vec<Option<ProfIdx>>,
    by_prof: Vec<Vec<SectionIdx>>,
    room_overrides: BTreeMap<SectionIdx, String>,
}

impl Schedule {
    pub fn empty(inst: &Instance) -> Self {
        Schedule {
            owner: vec![None; inst.sections().len()],
            by_prof: vec![Vec::new(); inst.professors().len()],
            room_overrides: BTreeMap::new(),
        }
    }

    /// Empty schedule with the instance's pre-assignments installed.
    pub fn with_pre_assignments(inst: &Instance) -> Self {
        let mut s = Schedule::empty(inst);
        for &(p, sec) in inst.pre_assignments() {
            s.assign(p, sec);
        }
        s
    }

    /// Records `p` as the owner of `s`, replacing any previous owner.
    /// No hard-constraint checks are made here.
    pub fn assign(&mut self, p: ProfIdx, s: SectionIdx) {
        self.unassign(s);
        self.owner[s.0] = Some(p);
        let list = &mut self.by_prof[p.0];
        let pos = list.binary_search(&s).unwrap_or_else(|e| e);
        list.insert(pos, s);
    }

    pub fn unassign(&mut self, s: SectionIdx) {
        if let Some(prev) = self.owner[s.0].take() {
            self.by_prof[prev.0].retain(|x| *x != s);
        }
    }

    pub fn owner(&self, s: SectionIdx) -> Option<ProfIdx> {
        self.owner[s.0]
    }

    /// Sections held by `p`, sorted by index.
    pub fn sections_of(&self, p: ProfIdx) -> &[SectionIdx] {
        &self.by_prof[p.0]
    }

    pub fn assignments(&self) -> impl Iterator<Item = (ProfIdx, &[SectionIdx])> {
        self.by_prof
            .iter()
            .enumerate()
            .map(|(i, v)| (ProfIdx(i), v.as_slice()))
    }

    pub fn unassigned(&self) -> impl Iterator<Item = SectionIdx> + '_ {
        self.owner
            .iter()
            .enumerate()
            .filter(|(_, o)| o.is_none())
            .map(|(i, _)| SectionIdx(i))
    }

    pub fn assigned_count(&self) -> usize {
        self.owner.iter().filter(|o| o.is_some()).count()
    }

    /// Assigned sections that were not pre-assigned.
    pub fn ga_assigned_count(&self, inst: &Instance) -> usize {
        inst.free_sections()
            .iter()
            .filter(|s| self.owner[s.0].is_some())
            .count()
    }

    pub fn room_of<'a>(&'a self, inst: &'a Instance, s: SectionIdx) -> &'a str {
        self.room_overrides
            .get(&s)
            .map(String::as_str)
            .unwrap_or(&inst.section(s).room)
    }

    pub fn set_room(&mut self, inst: &Instance, s: SectionIdx, room: &str) {
        if inst.section(s).room == room {
            self.room_overrides.remove(&s);
        } else {
            self.room_overrides.insert(s, room.to_string());
        }
    }

    pub fn load_of(&self, inst: &Instance, p: ProfIdx) -> u32 {
        self.by_prof[p.0]
            .iter()
            .map(|s| inst.section(*s).units)
            .sum()
    }
}

/// Units assigned to professor `id`, pre-assignments included.
pub fn professor_load(s: &Schedule, inst: &Instance, id: &str) -> Result<u32, DomainError> {
    let p = inst.find_professor(id)?;
    Ok(s.load_of(inst, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub severity: Severity,
    pub entity: String,
    pub message: String,
}

impl Violation {
    fn error(entity: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            severity: Severity::Error,
            entity: entity.into(),
            message: message.into(),
        }
    }

    fn warning(entity: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            severity: Severity::Warning,
            entity: entity.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{tag}: {}: {}", self.entity, self.message)
    }
}

/// Checks every data-model invariant. Only the 8am–6pm bounds are warnings.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    let n_prof = inst.professors().len();
    let n_sec = inst.sections().len();

    let mut seen_ids = BTreeSet::new();
    for p in inst.professors() {
        if !seen_ids.insert(p.id.as_str()) {
            out.push(Violation::error(&p.id, "duplicate professor id"));
        }
        if p.mandated_units > MAX_TEACHING_UNITS {
            out.push(Violation::error(
                &p.id,
                format!(
                    "mandated units {} exceed {MAX_TEACHING_UNITS}",
                    p.mandated_units
                ),
            ));
        }
    }

    let mut seen_sections = BTreeSet::new();
    for s in inst.sections() {
        let label = s.label();
        if !seen_sections.insert((s.course.as_str(), s.section_no)) {
            out.push(Violation::error(&label, "duplicate (course, section) pair"));
        }
        if s.units == 0 {
            out.push(Violation::error(&label, "units must be positive"));
        }
        let m = &s.meeting;
        if m.days.is_empty() {
            out.push(Violation::error(&label, "meeting has no days"));
        }
        if m.start >= m.end {
            out.push(Violation::error(
                &label,
                "meeting must start before it ends",
            ));
        } else if m.start < DAY_START || m.end > DAY_END {
            out.push(Violation::warning(
                &label,
                "meeting falls outside the 8am-6pm teaching day",
            ));
        }
    }

    let mut grouped = vec![false; n_sec];
    for (g, group) in inst.associations().iter().enumerate() {
        let entity = format!("association group {g}");
        let mut course: Option<&str> = None;
        for member in group.members() {
            let Some(sec) = inst.sections().get(member.0) else {
                out.push(Violation::error(
                    &entity,
                    format!("unknown section #{}", member.0),
                ));
                continue;
            };
            match course {
                None => course = Some(&sec.course),
                Some(c) if c != sec.course => {
                    out.push(Violation::error(
                        &entity,
                        "members belong to different courses",
                    ));
                }
                _ => {}
            }
            if std::mem::replace(&mut grouped[member.0], true) {
                out.push(Violation::error(
                    sec.label(),
                    "section appears in more than one association group",
                ));
            }
        }
    }

    let mut has_profile = vec![false; n_prof];
    for pref in inst.preferences() {
        let Some(prof) = inst.professors().get(pref.owner.0) else {
            out.push(Violation::error(
                format!("preference #{}", pref.owner.0),
                "owner is not a known professor",
            ));
            continue;
        };
        if std::mem::replace(&mut has_profile[pref.owner.0], true) {
            out.push(Violation::error(
                &prof.id,
                "more than one preference profile",
            ));
        }
        let w = pref.weights;
        if w.as_array().iter().any(|x| !(0.0..=1.0).contains(x)) {
            out.push(Violation::error(
                &prof.id,
                "preference weights must lie in [0, 1]",
            ));
        } else if !w.is_zero() && (w.sum() - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            out.push(Violation::error(
                &prof.id,
                format!("preference weights sum to {} instead of 1.0", w.sum()),
            ));
        }
        for fav in &pref.favorite_courses {
            let known = inst
                .sections()
                .iter()
                .any(|s| &s.course == fav && s.category == Category::NonMajor);
            if !known {
                out.push(Violation::error(
                    &prof.id,
                    format!("favorite course {fav} is not an offered non-major course"),
                ));
            }
        }
    }

    let mut pre = Schedule::empty(inst);
    let mut pre_ok = true;
    for &(p, s) in inst.pre_assignments() {
        if p.0 >= n_prof || s.0 >= n_sec {
            out.push(Violation::error(
                "pre-assignment",
                format!("references unknown professor #{} or section #{}", p.0, s.0),
            ));
            pre_ok = false;
            continue;
        }
        if let Some(prev) = pre.owner(s) {
            out.push(Violation::error(
                inst.section(s).label(),
                format!(
                    "pre-assigned to both {} and {}",
                    inst.professor(prev).id,
                    inst.professor(p).id
                ),
            ));
            continue;
        }
        pre.assign(p, s);
    }
    if pre_ok {
        out.extend(hard_violations(&pre, inst));
    }
    out
}

/// Unit overruns and time conflicts in `s`, one violation per breach.
pub fn hard_violations(s: &Schedule, inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    for (p, secs) in s.assignments() {
        let prof = inst.professor(p);
        let load = s.load_of(inst, p);
        if load > prof.mandated_units {
            out.push(Violation::error(
                &prof.id,
                format!("assigned {load} units, mandated {}", prof.mandated_units),
            ));
        }
        for (i, a) in secs.iter().enumerate() {
            for b in &secs[i + 1..] {
                let (sa, sb) = (inst.section(*a), inst.section(*b));
                if overlaps(&sa.meeting, &sb.meeting) {
                    out.push(Violation::error(
                        &prof.id,
                        format!("{} conflicts in time with {}", sa.label(), sb.label()),
                    ));
                }
            }
        }
    }
    out
}

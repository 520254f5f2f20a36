//! CSV instance files, schedule and report writers, and the facts file.
//!
//! Input schemas (header row required, columns exactly as listed):
//!
//! | file                 | columns |
//! |----------------------|---------|
//! | `professors.csv`     | `id,mandated_units,ga_eligible` |
//! | `sections.csv`       | `course,section,units,mode,days,start,end,room,category` |
//! | `associations.csv`   | `course,lecture,labs` (labs separated by `;`) |
//! | `preferences.csv`    | `professor,w_8am,w_half,w_fav,w_gap,w_prep,half_choice,favorites,avoid_8am` |
//! | `preassignments.csv` | `professor,course,section` |
//!
//! Days are letters from `MTWRF` (Thursday is `R`), times are 24-hour
//! `HH:MM`, modes are `lecture`/`laboratory`, categories are
//! `non-major`/`major`/`speciality`, half choices are `first`/`second`/`none`
//! and favorites are course names separated by `;`.

use std::collections::{BTreeMap, HashMap};
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use csv::StringRecord;
use thiserror::Error;

use crate::domain::{
    room_atom, validate_instance, AssociationGroup, Category, DaySet, DomainError, HalfChoice,
    Instance, Mode, PreferenceProfile, ProfIdx, Professor, Schedule, Section, SectionIdx, Severity,
    TimeBlock, Violation, Weights,
};
use crate::engine::RunResult;
use crate::fitness::{explain, local_fitness, FitnessBreakdown, FitnessError};

pub const PROFESSORS_HEADER: [&str; 3] = ["id", "mandated_units", "ga_eligible"];
pub const SECTIONS_HEADER: [&str; 9] = [
    "course", "section", "units", "mode", "days", "start", "end", "room", "category",
];
pub const ASSOCIATIONS_HEADER: [&str; 3] = ["course", "lecture", "labs"];
pub const PREFERENCES_HEADER: [&str; 9] = [
    "professor",
    "w_8am",
    "w_half",
    "w_fav",
    "w_gap",
    "w_prep",
    "half_choice",
    "favorites",
    "avoid_8am",
];
pub const PREASSIGNMENTS_HEADER: [&str; 3] = ["professor", "course", "section"];
pub const SCHEDULE_HEADER: [&str; 9] = [
    "professor",
    "course",
    "section",
    "units",
    "mode",
    "days",
    "start",
    "end",
    "room",
];
pub const GENERATIONS_HEADER: [&str; 6] = [
    "generation",
    "min_fitness",
    "mean_fitness",
    "max_fitness",
    "assigned_count",
    "new_global_best",
];
pub const PROFESSOR_REPORT_HEADER: [&str; 10] = [
    "phase",
    "professor",
    "d_units",
    "d_assoc",
    "d_8am",
    "d_half",
    "d_fav",
    "d_gap",
    "d_prep",
    "f_p",
];

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{file}:{line}:{column}: {message}")]
    Parse {
        file: String,
        line: u64,
        column: usize,
        message: String,
    },
    #[error("{file}:{line}: {message}")]
    Reference {
        file: String,
        line: u64,
        message: String,
    },
    #[error("instance is invalid:\n{}", list(.0))]
    Invalid(Vec<Violation>),
    #[error("`{0}` cannot be written as a facts token")]
    BadToken(String),
    #[error(transparent)]
    Fitness(#[from] FitnessError),
}

fn list(v: &[Violation]) -> String {
    v.iter()
        .map(|x| format!("  {x}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn csv_io(path: &Path, e: csv::Error) -> IoError {
    let position = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => IoError::Io {
            path: path.display().to_string(),
            source,
        },
        other => IoError::Parse {
            file: path.display().to_string(),
            line: position,
            column: 1,
            message: format!("{other:?}"),
        },
    }
}

/// Where the five instance tables live.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFiles {
    pub professors: PathBuf,
    pub sections: PathBuf,
    pub associations: PathBuf,
    pub preferences: PathBuf,
    pub preassignments: PathBuf,
}

impl InstanceFiles {
    /// The conventional file names inside `dir`.
    pub fn from_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        InstanceFiles {
            professors: dir.join("professors.csv"),
            sections: dir.join("sections.csv"),
            associations: dir.join("associations.csv"),
            preferences: dir.join("preferences.csv"),
            preassignments: dir.join("preassignments.csv"),
        }
    }
}

struct Row {
    file: String,
    line: u64,
    record: StringRecord,
}

impl Row {
    fn str(&self, col: usize) -> &str {
        self.record.get(col).unwrap_or("").trim()
    }

    fn fail(&self, col: usize, message: impl Into<String>) -> IoError {
        IoError::Parse {
            file: self.file.clone(),
            line: self.line,
            column: col + 1,
            message: message.into(),
        }
    }

    fn dangling(&self, message: impl Into<String>) -> IoError {
        IoError::Reference {
            file: self.file.clone(),
            line: self.line,
            message: message.into(),
        }
    }

    fn parse<T: FromStr>(&self, col: usize, what: &str) -> Result<T, IoError> {
        let text = self.str(col);
        text.parse()
            .map_err(|_| self.fail(col, format!("`{text}` is not a valid {what}")))
    }

    fn with<T>(
        &self,
        col: usize,
        what: &str,
        f: impl FnOnce(&str) -> Option<T>,
    ) -> Result<T, IoError> {
        let text = self.str(col);
        f(text).ok_or_else(|| self.fail(col, format!("`{text}` is not a valid {what}")))
    }
}

fn read_table(path: &Path, header: &[&str]) -> Result<Vec<Row>, IoError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file);
    let found = reader.headers().map_err(|e| csv_io(path, e))?.clone();
    let name = path.display().to_string();
    if found.len() != header.len() || found.iter().zip(header).any(|(a, b)| a.trim() != *b) {
        let column = found
            .iter()
            .zip(header)
            .position(|(a, b)| a.trim() != *b)
            .unwrap_or(found.len().min(header.len()));
        return Err(IoError::Parse {
            file: name,
            line: 1,
            column: column + 1,
            message: format!("expected header `{}`", header.join(",")),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_io(path, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        rows.push(Row {
            file: name.clone(),
            line,
            record,
        });
    }
    Ok(rows)
}

/// `HH:MM` to minutes since midnight.
pub fn parse_time(text: &str) -> Option<u16> {
    let (h, m) = text.split_once(':')?;
    let (h, m): (u16, u16) = (h.parse().ok()?, m.parse().ok()?);
    (h < 24 && m < 60).then_some(h * 60 + m)
}

pub fn format_time(minutes: u16) -> String {
    format!("{:02}:{:02}", minutes / 60, minutes % 60)
}

fn parse_bool(text: &str) -> Option<bool> {
    match text.to_ascii_lowercase().as_str() {
        "true" | "yes" => Some(true),
        "false" | "no" => Some(false),
        _ => None,
    }
}

fn parse_mode(text: &str) -> Option<Mode> {
    match text.to_ascii_lowercase().as_str() {
        "lecture" => Some(Mode::Lecture),
        "laboratory" | "lab" => Some(Mode::Laboratory),
        _ => None,
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Lecture => "lecture",
        Mode::Laboratory => "laboratory",
    }
}

fn parse_category(text: &str) -> Option<Category> {
    match text.to_ascii_lowercase().as_str() {
        "non-major" => Some(Category::NonMajor),
        "major" => Some(Category::Major),
        "speciality" | "specialty" => Some(Category::Speciality),
        _ => None,
    }
}

fn category_name(c: Category) -> &'static str {
    match c {
        Category::NonMajor => "non-major",
        Category::Major => "major",
        Category::Speciality => "speciality",
    }
}

fn parse_half(text: &str) -> Option<HalfChoice> {
    match text.to_ascii_lowercase().as_str() {
        "first" => Some(HalfChoice::FirstHalf),
        "second" => Some(HalfChoice::SecondHalf),
        "none" | "" => Some(HalfChoice::None),
        _ => None,
    }
}

fn half_name(h: HalfChoice) -> &'static str {
    match h {
        HalfChoice::FirstHalf => "first",
        HalfChoice::SecondHalf => "second",
        HalfChoice::None => "none",
    }
}

fn days_upper(d: DaySet) -> String {
    d.to_string().to_uppercase()
}

fn split_list(text: &str) -> impl Iterator<Item = &str> {
    text.split(';').map(str::trim).filter(|s| !s.is_empty())
}

fn section_key(s: &Section) -> (String, u16) {
    (s.course.clone(), s.section_no)
}

/// Reads and validates an instance. Any error-severity violation from
/// [`validate_instance`] fails the load, listing all of them.
pub fn load_instance(files: &InstanceFiles) -> Result<Instance, IoError> {
    let mut professors = Vec::new();
    let mut prof_by_id: HashMap<String, ProfIdx> = HashMap::new();
    for row in read_table(&files.professors, &PROFESSORS_HEADER)? {
        let id = row.str(0).to_string();
        if id.is_empty() {
            return Err(row.fail(0, "professor id is empty"));
        }
        prof_by_id
            .entry(id.clone())
            .or_insert(ProfIdx(professors.len()));
        professors.push(Professor {
            id,
            mandated_units: row.parse(1, "unit count")?,
            ga_eligible: row.with(2, "boolean", parse_bool)?,
        });
    }

    let mut sections = Vec::new();
    let mut section_by_key: HashMap<(String, u16), SectionIdx> = HashMap::new();
    for row in read_table(&files.sections, &SECTIONS_HEADER)? {
        let days = DaySet::parse(row.str(4)).map_err(|e| row.fail(4, e.to_string()))?;
        let start = row.with(5, "HH:MM time", parse_time)?;
        let end = row.with(6, "HH:MM time", parse_time)?;
        let meeting = TimeBlock::new(days, start, end).map_err(|e| row.fail(6, e.to_string()))?;
        let section = Section {
            course: row.str(0).to_string(),
            section_no: row.parse(1, "section number")?,
            units: row.parse(2, "unit count")?,
            mode: row.with(3, "mode", parse_mode)?,
            meeting,
            room: row.str(7).to_string(),
            category: row.with(8, "category", parse_category)?,
        };
        section_by_key
            .entry(section_key(&section))
            .or_insert(SectionIdx(sections.len()));
        sections.push(section);
    }

    let find_section = |row: &Row, course: &str, col: usize| -> Result<SectionIdx, IoError> {
        let no: u16 = row.parse(col, "section number")?;
        section_by_key
            .get(&(course.to_string(), no))
            .copied()
            .ok_or_else(|| {
                row.dangling(format!(
                    "section {course}-{no:02} is not listed in {}",
                    files.sections.display()
                ))
            })
    };
    let find_prof = |row: &Row, col: usize| -> Result<ProfIdx, IoError> {
        let id = row.str(col);
        prof_by_id.get(id).copied().ok_or_else(|| {
            row.dangling(format!(
                "professor `{id}` is not listed in {}",
                files.professors.display()
            ))
        })
    };

    let mut associations = Vec::new();
    for row in read_table(&files.associations, &ASSOCIATIONS_HEADER)? {
        let course = row.str(0).to_string();
        let lecture = find_section(&row, &course, 1)?;
        let mut labs = Vec::new();
        for lab in split_list(row.str(2)) {
            let no: u16 = lab
                .parse()
                .map_err(|_| row.fail(2, format!("`{lab}` is not a valid section number")))?;
            let idx = section_by_key
                .get(&(course.clone(), no))
                .copied()
                .ok_or_else(|| {
                    row.dangling(format!(
                        "lab {course}-{no:02} is not listed in {}",
                        files.sections.display()
                    ))
                })?;
            labs.push(idx);
        }
        associations.push(AssociationGroup { lecture, labs });
    }

    let mut preferences = Vec::new();
    for row in read_table(&files.preferences, &PREFERENCES_HEADER)? {
        let owner = find_prof(&row, 0)?;
        preferences.push(PreferenceProfile {
            owner,
            weights: Weights {
                eight_am: row.parse(1, "weight")?,
                half: row.parse(2, "weight")?,
                fav: row.parse(3, "weight")?,
                gap: row.parse(4, "weight")?,
                prep: row.parse(5, "weight")?,
            },
            half_choice: row.with(6, "half choice", parse_half)?,
            favorite_courses: split_list(row.str(7)).map(str::to_string).collect(),
            avoid_8am: row.with(8, "boolean", parse_bool)?,
        });
    }

    let mut pre_assignments = Vec::new();
    for row in read_table(&files.preassignments, &PREASSIGNMENTS_HEADER)? {
        let p = find_prof(&row, 0)?;
        let course = row.str(1).to_string();
        pre_assignments.push((p, find_section(&row, &course, 2)?));
    }

    let inst = Instance::new(
        professors,
        sections,
        associations,
        preferences,
        pre_assignments,
    );
    let errors: Vec<Violation> = validate_instance(&inst)
        .into_iter()
        .filter(|v| v.severity == Severity::Error)
        .collect();
    if !errors.is_empty() {
        return Err(IoError::Invalid(errors));
    }
    Ok(inst)
}

fn csv_file(path: &Path) -> Result<csv::Writer<BufWriter<File>>, IoError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let file = File::create(path).map_err(io_err(path))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file)))
}

fn write_rows<W: Write>(
    path: &Path,
    w: &mut csv::Writer<W>,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<(), IoError> {
    w.write_record(header).map_err(|e| csv_io(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(io_err(path))
}

fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<(), IoError> {
    let mut w = csv_file(path)?;
    write_rows(path, &mut w, header, rows)
}

/// Writes the five instance tables; [`load_instance`] reads them back unchanged.
pub fn write_instance(inst: &Instance, files: &InstanceFiles) -> Result<(), IoError> {
    write_csv(
        &files.professors,
        &PROFESSORS_HEADER,
        inst.professors().iter().map(|p| {
            vec![
                p.id.clone(),
                p.mandated_units.to_string(),
                p.ga_eligible.to_string(),
            ]
        }),
    )?;
    write_csv(
        &files.sections,
        &SECTIONS_HEADER,
        inst.sections().iter().map(|s| {
            vec![
                s.course.clone(),
                format!("{:02}", s.section_no),
                s.units.to_string(),
                mode_name(s.mode).to_string(),
                days_upper(s.meeting.days),
                format_time(s.meeting.start),
                format_time(s.meeting.end),
                s.room.clone(),
                category_name(s.category).to_string(),
            ]
        }),
    )?;
    write_csv(
        &files.associations,
        &ASSOCIATIONS_HEADER,
        inst.associations().iter().map(|g| {
            let lecture = inst.section(g.lecture);
            let labs: Vec<String> = g
                .labs
                .iter()
                .map(|l| format!("{:02}", inst.section(*l).section_no))
                .collect();
            vec![
                lecture.course.clone(),
                format!("{:02}", lecture.section_no),
                labs.join(";"),
            ]
        }),
    )?;
    write_csv(
        &files.preferences,
        &PREFERENCES_HEADER,
        inst.preferences().iter().map(|pr| {
            let w = pr.weights;
            vec![
                inst.professor(pr.owner).id.clone(),
                w.eight_am.to_string(),
                w.half.to_string(),
                w.fav.to_string(),
                w.gap.to_string(),
                w.prep.to_string(),
                half_name(pr.half_choice).to_string(),
                pr.favorite_courses
                    .iter()
                    .cloned()
                    .collect::<Vec<_>>()
                    .join(";"),
                pr.avoid_8am.to_string(),
            ]
        }),
    )?;
    write_csv(
        &files.preassignments,
        &PREASSIGNMENTS_HEADER,
        inst.pre_assignments().iter().map(|(p, s)| {
            let sec = inst.section(*s);
            vec![
                inst.professor(*p).id.clone(),
                sec.course.clone(),
                format!("{:02}", sec.section_no),
            ]
        }),
    )
}

/// Assigned sections by professor (instance order), then course and
/// section; unassigned sections last.
fn schedule_order(s: &Schedule, inst: &Instance) -> Vec<SectionIdx> {
    let mut order: Vec<SectionIdx> = (0..inst.sections().len()).map(SectionIdx).collect();
    order.sort_by_cached_key(|&sec| {
        let section = inst.section(sec);
        (
            s.owner(sec).map_or(usize::MAX, |p| p.0),
            section.course.clone(),
            section.section_no,
            sec,
        )
    });
    order
}

/// One row per section. Unassigned sections have an empty professor field.
pub fn write_schedule(s: &Schedule, inst: &Instance, path: &Path) -> Result<(), IoError> {
    write_csv(
        path,
        &SCHEDULE_HEADER,
        schedule_order(s, inst).into_iter().map(|sec| {
            let section = inst.section(sec);
            vec![
                s.owner(sec)
                    .map(|p| inst.professor(p).id.clone())
                    .unwrap_or_default(),
                section.course.clone(),
                format!("{:02}", section.section_no),
                section.units.to_string(),
                mode_name(section.mode).to_string(),
                days_upper(section.meeting.days),
                format_time(section.meeting.start),
                format_time(section.meeting.end),
                s.room_of(inst, sec).to_string(),
            ]
        }),
    )
}

/// Reads a schedule written by [`write_schedule`]. Every row must describe
/// a section of `inst` as the instance has it; only the professor and room
/// columns are taken from the file.
pub fn read_schedule(inst: &Instance, path: &Path) -> Result<Schedule, IoError> {
    let mut s = Schedule::empty(inst);
    let mut seen = BTreeMap::new();
    for row in read_table(path, &SCHEDULE_HEADER)? {
        let course = row.str(1);
        let no: u16 = row.parse(2, "section number")?;
        let sec = inst.find_section(course, no).ok_or_else(|| {
            row.dangling(format!("section {course}-{no:02} is not in the instance"))
        })?;
        if let Some(first) = seen.insert(sec, row.line) {
            return Err(row.dangling(format!(
                "section {course}-{no:02} already listed on line {first}"
            )));
        }
        let section = inst.section(sec);
        let days =
            DaySet::parse(row.str(5)).map_err(|e: DomainError| row.fail(5, e.to_string()))?;
        let expected = [
            (3, section.units.to_string(), row.str(3).to_string()),
            (
                4,
                mode_name(section.mode).to_string(),
                row.str(4).to_lowercase(),
            ),
            (5, section.meeting.days.to_string(), days.to_string()),
            (
                6,
                format_time(section.meeting.start),
                row.str(6).to_string(),
            ),
            (7, format_time(section.meeting.end), row.str(7).to_string()),
        ];
        for (col, want, got) in expected {
            let same = if col >= 6 {
                parse_time(&got).map(format_time) == Some(want.clone())
            } else {
                want == got
            };
            if !same {
                return Err(row.fail(
                    col,
                    format!("`{got}` does not match the instance's `{want}`"),
                ));
            }
        }
        let prof = row.str(0);
        if !prof.is_empty() {
            let p = inst
                .find_professor(prof)
                .map_err(|e| row.dangling(e.to_string()))?;
            s.assign(p, sec);
        }
        let room = row.str(8);
        if !room.is_empty() {
            s.set_room(inst, sec, room);
        }
    }
    Ok(s)
}

fn token(text: &str) -> Result<String, IoError> {
    let lower = text.to_lowercase();
    let ok = !lower.is_empty()
        && lower
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '-');
    if ok {
        Ok(lower)
    } else {
        Err(IoError::BadToken(text.to_string()))
    }
}

/// `class(prof1,astr-102-01,mtwr,[17,10,18,00],room_180_0101).` lines for
/// every assigned section.
pub fn prolog_facts(s: &Schedule, inst: &Instance) -> Result<Vec<String>, IoError> {
    let mut out = Vec::new();
    for sec in schedule_order(s, inst) {
        let Some(p) = s.owner(sec) else { continue };
        let section = inst.section(sec);
        let m = &section.meeting;
        out.push(format!(
            "class({},{}-{:02},{},[{:02},{:02},{:02},{:02}],{}).",
            token(&inst.professor(p).id)?,
            token(&section.course)?,
            section.section_no,
            m.days,
            m.start / 60,
            m.start % 60,
            m.end / 60,
            m.end % 60,
            token(&room_atom(s.room_of(inst, sec)))?,
        ));
    }
    Ok(out)
}

pub fn write_prolog_facts(s: &Schedule, inst: &Instance, path: &Path) -> Result<(), IoError> {
    let lines = prolog_facts(s, inst)?;
    let mut text = String::new();
    for line in lines {
        text.push_str(&line);
        text.push('\n');
    }
    write_text(path, &text)
}

fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, text).map_err(io_err(path))
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut os = OsString::from(prefix.as_os_str());
    os.push(suffix);
    PathBuf::from(os)
}

fn breakdown_rows<'a>(
    phase: &'a str,
    b: &'a FitnessBreakdown,
    inst: &'a Instance,
) -> impl Iterator<Item = Vec<String>> + 'a {
    b.per_professor.iter().enumerate().map(move |(i, pf)| {
        let mut row = vec![phase.to_string(), inst.professors()[i].id.clone()];
        row.extend(pf.components().iter().map(|c| c.to_string()));
        row.push(pf.f_p.to_string());
        row
    })
}

/// Writes `<prefix>_generations.csv` (one row per generation) and
/// `<prefix>_professors.csv` (per-professor components for the
/// generation-0 best and the final best). Returns both paths.
pub fn write_run_report(
    r: &RunResult,
    inst: &Instance,
    prefix: &Path,
) -> Result<(PathBuf, PathBuf), IoError> {
    let generations = suffixed(prefix, "_generations.csv");
    let professors = suffixed(prefix, "_professors.csv");
    write_csv(
        &generations,
        &GENERATIONS_HEADER,
        r.history.iter().map(|g| {
            vec![
                g.generation.to_string(),
                g.min_fitness.to_string(),
                g.mean_fitness.to_string(),
                g.max_fitness.to_string(),
                g.assigned_count.to_string(),
                g.new_global_best.to_string(),
            ]
        }),
    )?;
    write_csv(
        &professors,
        &PROFESSOR_REPORT_HEADER,
        breakdown_rows("initial", &r.initial.breakdown, inst).chain(breakdown_rows(
            "final",
            &r.best.breakdown,
            inst,
        )),
    )?;
    Ok((generations, professors))
}

/// Per professor: a header line, then the seven explanation lines indented
/// by two spaces.
pub fn explanations_text(s: &Schedule, inst: &Instance) -> Result<String, IoError> {
    let mut text = String::new();
    for p in inst.prof_indices() {
        let lines = explain(s, inst, p)?;
        let total = local_fitness(s, inst, p)?;
        text.push_str(&format!(
            "{}: fitness {total} (lower is better)\n",
            inst.professor(p).id
        ));
        for line in lines {
            text.push_str("  ");
            text.push_str(&line);
            text.push('\n');
        }
    }
    Ok(text)
}

pub fn write_explanations(s: &Schedule, inst: &Instance, path: &Path) -> Result<(), IoError> {
    write_text(path, &explanations_text(s, inst)?)
}

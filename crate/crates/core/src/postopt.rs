//! Audits of a finished schedule: time conflicts, room swaps that keep a
//! professor in one room, and pairwise section exchanges that repair broken
//! associations or cut course preparations.
//!
//! Finders never modify the schedule. Suggestions are applied explicitly
//! with [`apply_swap`].

use std::fmt;

use thiserror::Error;

use crate::domain::{
    hard_violations, overlaps, room_atom, Instance, ProfIdx, Schedule, SectionIdx, TimeBlock,
    Violation,
};
use crate::fitness::{delta_assoc, Measures};

/// Largest passing period between two classes that still counts as back-to-back.
pub const PASSING_MINUTES: u16 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SwapKind {
    RoomSwap,
    AssocRecombine,
    PrepReduce,
}

impl fmt::Display for SwapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SwapKind::RoomSwap => "room swap",
            SwapKind::AssocRecombine => "association recombination",
            SwapKind::PrepReduce => "preparation reduction",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Holder {
    Professor(ProfIdx),
    Room(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub section: SectionIdx,
    pub from: Holder,
    pub to: Holder,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapSuggestion {
    pub kind: SwapKind,
    pub moves: Vec<Move>,
    /// One line per line of the printed suggestion.
    pub rationale: String,
}

#[derive(Debug, Error, PartialEq)]
pub enum PostoptError {
    #[error("suggestion is stale: {0}")]
    Stale(String),
    #[error("suggestion would break hard constraints: {}", join(.0))]
    HardViolation(Vec<Violation>),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// `phys-123-1 is mwf [10,10,11,0] in room_053_0202 (prof1)`
pub fn class_line(s: &Schedule, inst: &Instance, sec: SectionIdx) -> String {
    let section = inst.section(sec);
    let m = &section.meeting;
    let owner = s
        .owner(sec)
        .map(|p| inst.professor(p).id.as_str())
        .unwrap_or("unassigned");
    format!(
        "{}-{} is {} [{},{},{},{}] in {} ({})",
        section.course.to_lowercase(),
        section.section_no,
        m.days,
        m.start / 60,
        m.start % 60,
        m.end / 60,
        m.end % 60,
        room_atom(s.room_of(inst, sec)),
        owner
    )
}

/// Every pair of sections held by one professor whose meetings overlap.
pub fn find_conflicts(s: &Schedule, inst: &Instance) -> Vec<(ProfIdx, SectionIdx, SectionIdx)> {
    let mut out = Vec::new();
    for (p, secs) in s.assignments() {
        for (i, &a) in secs.iter().enumerate() {
            for &b in &secs[i + 1..] {
                if overlaps(&inst.section(a).meeting, &inst.section(b).meeting) {
                    out.push((p, a, b));
                }
            }
        }
    }
    out
}

/// `second` starts on the same days as `first`, within the passing period
/// after `first` ends.
pub fn back_to_back(first: &TimeBlock, second: &TimeBlock) -> bool {
    first.days == second.days
        && second.start >= first.end
        && second.start - first.end <= PASSING_MINUTES
}

fn same_slot(a: &TimeBlock, b: &TimeBlock) -> bool {
    a.days == b.days && a.start == b.start && a.end == b.end
}

fn room_move(s: &Schedule, inst: &Instance, sec: SectionIdx, to: &str) -> Move {
    Move {
        section: sec,
        from: Holder::Room(s.room_of(inst, sec).to_string()),
        to: Holder::Room(to.to_string()),
    }
}

/// Room exchanges that let a professor teach back-to-back classes in one
/// room. For classes C1 then C2 in rooms R1 and R2, a class C of another
/// professor in C1's slot and room R2 (or C2's slot and room R1) trades rooms
/// with C1 (or C2).
pub fn find_room_swaps(s: &Schedule, inst: &Instance) -> Vec<SwapSuggestion> {
    let mut out = Vec::new();
    for (p, secs) in s.assignments() {
        for &c1 in secs {
            for &c2 in secs {
                let (t1, t2) = (&inst.section(c1).meeting, &inst.section(c2).meeting);
                if c1 == c2 || !back_to_back(t1, t2) {
                    continue;
                }
                let (r1, r2) = (s.room_of(inst, c1), s.room_of(inst, c2));
                if r1 == r2 {
                    continue;
                }
                for (q, others) in s.assignments() {
                    if q == p {
                        continue;
                    }
                    for &c in others {
                        let tc = &inst.section(c).meeting;
                        let rc = s.room_of(inst, c);
                        let partner = if same_slot(tc, t1) && rc == r2 {
                            c1
                        } else if same_slot(tc, t2) && rc == r1 {
                            c2
                        } else {
                            continue;
                        };
                        let partner_room = s.room_of(inst, partner);
                        let rationale = [c1, c2, c]
                            .iter()
                            .map(|x| class_line(s, inst, *x))
                            .collect::<Vec<_>>()
                            .join("\n");
                        out.push((
                            sort_key(s, inst, &[c1, c2, c]),
                            SwapSuggestion {
                                kind: SwapKind::RoomSwap,
                                moves: vec![
                                    room_move(s, inst, partner, rc),
                                    room_move(s, inst, c, partner_room),
                                ],
                                rationale,
                            },
                        ));
                    }
                }
            }
        }
    }
    sorted(out)
}

fn exchange_fits(
    s: &Schedule,
    inst: &Instance,
    p: ProfIdx,
    give: SectionIdx,
    take: SectionIdx,
) -> bool {
    let incoming = &inst.section(take).meeting;
    s.sections_of(p)
        .iter()
        .filter(|&&x| x != give)
        .all(|&x| !overlaps(&inst.section(x).meeting, incoming))
}

/// Equal-unit, conflict-free exchanges of one section between two professors
/// that strictly lower `score(p) + score(q)`.
fn find_exchanges(
    s: &Schedule,
    inst: &Instance,
    kind: SwapKind,
    what: &str,
    score: impl Fn(&Schedule, ProfIdx) -> u32,
) -> Vec<SwapSuggestion> {
    let mut out = Vec::new();
    let n = inst.professors().len();
    for p in (0..n).map(ProfIdx) {
        for q in (p.0 + 1..n).map(ProfIdx) {
            let before = score(s, p) + score(s, q);
            for &a in s.sections_of(p) {
                for &b in s.sections_of(q) {
                    if inst.is_pre_assigned(a)
                        || inst.is_pre_assigned(b)
                        || inst.section(a).units != inst.section(b).units
                        || !exchange_fits(s, inst, p, a, b)
                        || !exchange_fits(s, inst, q, b, a)
                    {
                        continue;
                    }
                    let mut trial = s.clone();
                    trial.assign(q, a);
                    trial.assign(p, b);
                    let after = score(&trial, p) + score(&trial, q);
                    if after < before {
                        let rationale = format!(
                            "{}\n{}\nexchange lowers {what} from {before} to {after}",
                            class_line(s, inst, a),
                            class_line(s, inst, b)
                        );
                        out.push((
                            sort_key(s, inst, &[a, b]),
                            SwapSuggestion {
                                kind,
                                moves: vec![
                                    Move {
                                        section: a,
                                        from: Holder::Professor(p),
                                        to: Holder::Professor(q),
                                    },
                                    Move {
                                        section: b,
                                        from: Holder::Professor(q),
                                        to: Holder::Professor(p),
                                    },
                                ],
                                rationale,
                            },
                        ));
                    }
                }
            }
        }
    }
    sorted(out)
}

/// Exchanges that strictly reduce the pair's broken-association count.
pub fn find_assoc_recombinations(s: &Schedule, inst: &Instance) -> Vec<SwapSuggestion> {
    find_exchanges(
        s,
        inst,
        SwapKind::AssocRecombine,
        "broken associations",
        |sch, p| delta_assoc(sch, inst, p),
    )
}

/// Exchanges that strictly reduce the pair's total course preparations.
pub fn find_prep_reductions(s: &Schedule, inst: &Instance) -> Vec<SwapSuggestion> {
    find_exchanges(
        s,
        inst,
        SwapKind::PrepReduce,
        "course preparations",
        |sch, p| Measures::collect(sch, inst, p).preparations,
    )
}

/// All four audits' suggestions: room swaps, then association
/// recombinations, then preparation reductions.
pub fn find_all(s: &Schedule, inst: &Instance) -> Vec<SwapSuggestion> {
    let mut out = find_room_swaps(s, inst);
    out.extend(find_assoc_recombinations(s, inst));
    out.extend(find_prep_reductions(s, inst));
    out
}

type SortKey = Vec<(String, String, u16)>;

/// Owner id, course and section number of each listed section, in order.
fn sort_key(s: &Schedule, inst: &Instance, sections: &[SectionIdx]) -> SortKey {
    sections
        .iter()
        .map(|&sec| {
            let owner = s
                .owner(sec)
                .map(|p| inst.professor(p).id.clone())
                .unwrap_or_default();
            let section = inst.section(sec);
            (owner, section.course.clone(), section.section_no)
        })
        .collect()
}

fn sorted(mut keyed: Vec<(SortKey, SwapSuggestion)>) -> Vec<SwapSuggestion> {
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, sug)| sug).collect()
}

/// Applies a suggestion to a copy of `s`. Fails if the schedule no longer
/// matches what the suggestion was computed against, or if the result
/// breaks a hard constraint.
pub fn apply_swap(
    s: &Schedule,
    inst: &Instance,
    suggestion: &SwapSuggestion,
) -> Result<Schedule, PostoptError> {
    let mut out = s.clone();
    for m in &suggestion.moves {
        if m.section.0 >= inst.sections().len() {
            return Err(PostoptError::Stale(format!("no section #{}", m.section.0)));
        }
        let label = inst.section(m.section).label();
        let current_ok = match &m.from {
            Holder::Professor(p) => s.owner(m.section) == Some(*p),
            Holder::Room(r) => s.room_of(inst, m.section) == r,
        };
        if !current_ok {
            return Err(PostoptError::Stale(format!(
                "{label} has moved since the suggestion was made"
            )));
        }
        match &m.to {
            Holder::Professor(p) => out.assign(*p, m.section),
            Holder::Room(r) => out.set_room(inst, m.section, r),
        }
    }
    let violations = hard_violations(&out, inst);
    if !violations.is_empty() {
        return Err(PostoptError::HardViolation(violations));
    }
    Ok(out)
}

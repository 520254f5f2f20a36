//! Bit-string encoding of professor/class pairings and the genetic operators.
//!
//! A chromosome is two concatenated parts of 8-bit chunks: one chunk per
//! professor slot, then one chunk per class slot. Chunks are read most
//! significant bit first. Class chunk `i` is paired with professor chunk
//! `i mod prof_chunks`, so every class chunk yields a pairing even when the
//! professor part is shorter.

use rand::{Rng, RngCore};
use rand_distr::{Distribution, Geometric};
use thiserror::Error;

use crate::domain::{overlaps, Instance, ProfIdx, Schedule, SectionIdx};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChromosomeError {
    #[error("chromosome length {0} is not a multiple of 8")]
    LengthNotByteAligned(usize),
    #[error("chromosome has {actual} bits, layout needs {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("an 8-bit chunk cannot address {count} {what}")]
    TooMany { what: &'static str, count: usize },
}

/// Fixed-length bit string stored as packed bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chromosome {
    bytes: Vec<u8>,
}

impl Chromosome {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Chromosome { bytes }
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_bit_str(bits: &str) -> Result<Self, ChromosomeError> {
        let bits: Vec<bool> = bits
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c == '1')
            .collect();
        if !bits.len().is_multiple_of(8) {
            return Err(ChromosomeError::LengthNotByteAligned(bits.len()));
        }
        let bytes = bits
            .chunks(8)
            .map(|chunk| chunk.iter().fold(0u8, |acc, b| (acc << 1) | u8::from(*b)))
            .collect();
        Ok(Chromosome { bytes })
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn len_bits(&self) -> usize {
        self.bytes.len() * 8
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bytes[i / 8] & (0x80 >> (i % 8)) != 0
    }

    fn flip(&mut self, i: usize) {
        self.bytes[i / 8] ^= 0x80 >> (i % 8);
    }

    pub fn count_ones(&self) -> usize {
        self.bytes.iter().map(|b| b.count_ones() as usize).sum()
    }
}

/// How many professor and class chunks a chromosome carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub prof_chunks: usize,
    pub class_chunks: usize,
}

impl Layout {
    /// One chunk per professor and one per GA-assignable section.
    pub fn for_instance(inst: &Instance) -> Result<Self, ChromosomeError> {
        let n_prof = inst.professors().len();
        let n_class = inst.free_sections().len();
        if n_prof > 256 {
            return Err(ChromosomeError::TooMany {
                what: "professors",
                count: n_prof,
            });
        }
        if n_class > 256 {
            return Err(ChromosomeError::TooMany {
                what: "classes",
                count: n_class,
            });
        }
        Ok(Layout {
            prof_chunks: n_prof,
            class_chunks: n_class,
        })
    }

    pub fn bit_len(&self) -> usize {
        8 * (self.prof_chunks + self.class_chunks)
    }
}

/// Treatment of chunk values at or beyond the number of professors/classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecodePolicy {
    /// Reduce the byte modulo the count.
    #[default]
    Modulo,
    /// Drop the pairing.
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pairing {
    pub prof_index: usize,
    /// Index into [`Instance::free_sections`].
    pub class_index: usize,
}

pub fn random_chromosome<R: RngCore>(
    rng: &mut R,
    length: usize,
) -> Result<Chromosome, ChromosomeError> {
    if !length.is_multiple_of(8) {
        return Err(ChromosomeError::LengthNotByteAligned(length));
    }
    let mut bytes = vec![0u8; length / 8];
    rng.fill_bytes(&mut bytes);
    Ok(Chromosome { bytes })
}

pub fn decode_pairings(
    c: &Chromosome,
    layout: Layout,
    n_prof: usize,
    n_class: usize,
    policy: DecodePolicy,
) -> Result<Vec<Pairing>, ChromosomeError> {
    if c.len_bits() != layout.bit_len() {
        return Err(ChromosomeError::LengthMismatch {
            expected: layout.bit_len(),
            actual: c.len_bits(),
        });
    }
    if layout.prof_chunks == 0 || n_prof == 0 || n_class == 0 {
        return Ok(Vec::new());
    }
    let (prof_part, class_part) = c.bytes.split_at(layout.prof_chunks);
    let reduce = |value: u8, n: usize| -> Option<usize> {
        let v = usize::from(value);
        match policy {
            DecodePolicy::Modulo => Some(v % n),
            DecodePolicy::Skip => (v < n).then_some(v),
        }
    };
    Ok(class_part
        .iter()
        .enumerate()
        .filter_map(|(i, &class_byte)| {
            let prof_byte = prof_part[i % layout.prof_chunks];
            Some(Pairing {
                prof_index: reduce(prof_byte, n_prof)?,
                class_index: reduce(class_byte, n_class)?,
            })
        })
        .collect())
}

/// Applies pairings in order on top of the pre-assignments, silently
/// rejecting any that would assign a class twice, push a professor past
/// their mandated units, or create a time conflict. Pairings naming a
/// professor who is not GA-eligible are rejected too.
///
/// With `enforce_associations`, a class in an association group pulls in
/// the whole group, and the pairing is rejected unless every member passes.
pub fn build_schedule(
    pairings: &[Pairing],
    inst: &Instance,
    enforce_associations: bool,
) -> Schedule {
    let mut schedule = Schedule::with_pre_assignments(inst);
    let mut loads: Vec<u32> = inst
        .prof_indices()
        .map(|p| schedule.load_of(inst, p))
        .collect();
    let mut members: Vec<SectionIdx> = Vec::new();

    for pairing in pairings {
        let Some(&class) = inst.free_sections().get(pairing.class_index) else {
            continue;
        };
        let Some(prof) = inst.professors().get(pairing.prof_index) else {
            continue;
        };
        if !prof.ga_eligible {
            continue;
        }
        let p = ProfIdx(pairing.prof_index);

        members.clear();
        match inst.group_of(class).filter(|_| enforce_associations) {
            Some(g) => members.extend(inst.associations()[g].members()),
            None => members.push(class),
        }

        if members.iter().any(|m| schedule.owner(*m).is_some()) {
            continue;
        }
        let added: u32 = members.iter().map(|m| inst.section(*m).units).sum();
        if loads[p.0] + added > prof.mandated_units {
            continue;
        }
        let clash = members.iter().enumerate().any(|(i, m)| {
            let block = &inst.section(*m).meeting;
            members[..i]
                .iter()
                .any(|o| overlaps(&inst.section(*o).meeting, block))
                || schedule
                    .sections_of(p)
                    .iter()
                    .any(|o| overlaps(&inst.section(*o).meeting, block))
        });
        if clash {
            continue;
        }
        for m in &members {
            schedule.assign(p, *m);
        }
        loads[p.0] += added;
    }
    schedule
}

/// Swaps every bit from `point` to the end between the two parents.
pub fn crossover_at(
    a: &Chromosome,
    b: &Chromosome,
    point: usize,
) -> Result<(Chromosome, Chromosome), ChromosomeError> {
    if a.bytes.len() != b.bytes.len() {
        return Err(ChromosomeError::LengthMismatch {
            expected: a.len_bits(),
            actual: b.len_bits(),
        });
    }
    let mut x = a.clone();
    let mut y = b.clone();
    if point >= a.len_bits() {
        return Ok((x, y));
    }
    let first = point / 8;
    let mask = 0xFFu8 >> (point % 8);
    let (xa, yb) = (x.bytes[first], y.bytes[first]);
    x.bytes[first] = (xa & !mask) | (yb & mask);
    y.bytes[first] = (yb & !mask) | (xa & mask);
    x.bytes[first + 1..].copy_from_slice(&b.bytes[first + 1..]);
    y.bytes[first + 1..].copy_from_slice(&a.bytes[first + 1..]);
    Ok((x, y))
}

/// Single-point crossover at a point drawn uniformly from `[0, L)`.
pub fn crossover<R: Rng>(
    a: &Chromosome,
    b: &Chromosome,
    rng: &mut R,
) -> Result<(Chromosome, Chromosome), ChromosomeError> {
    if a.bytes.len() != b.bytes.len() {
        return Err(ChromosomeError::LengthMismatch {
            expected: a.len_bits(),
            actual: b.len_bits(),
        });
    }
    if a.bytes.is_empty() {
        return Ok((a.clone(), b.clone()));
    }
    let point = rng.gen_range(0..a.len_bits());
    crossover_at(a, b, point)
}

/// Flips each bit independently with probability `rate`.
///
/// The distance to the next flipped bit is drawn from a geometric
/// distribution, which is equivalent to a Bernoulli trial per bit.
pub fn mutate<R: Rng>(c: &Chromosome, rate: f64, rng: &mut R) -> Chromosome {
    let mut out = c.clone();
    let len = c.len_bits();
    if rate <= 0.0 || len == 0 {
        return out;
    }
    if rate >= 1.0 {
        out.bytes.iter_mut().for_each(|b| *b = !*b);
        return out;
    }
    let skip = Geometric::new(rate).expect("rate lies in (0, 1)");
    let mut pos = 0usize;
    loop {
        let gap = skip.sample(rng);
        pos = match usize::try_from(gap).ok().and_then(|g| pos.checked_add(g)) {
            Some(p) if p < len => p,
            _ => break,
        };
        out.flip(pos);
        pos += 1;
    }
    out
}

//! Two-qubit gate patterns, their bitstring codes, cycle sequences and
//! materialized circuit layouts.
//!
//! Pattern `A` takes, in every `F1` row, either the even (`0`) or the odd
//! (`1`) bonds; `B` takes the rest of the family. `C` and `D` do the same for
//! `F2`. A [`PatternCode`] fixes `A` and `C` plus an order-swap bit that lets
//! the `C`/`D` pair open the sequence instead of `A`/`B`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{BondId, Family, Lattice};

/// Default cap on `m + n + 1`, the bit width of the code space.
pub const DEFAULT_ENUMERATION_CAP: u32 = 40;

const STANDARD_CYCLE: [Letter; 8] = [
    Letter::A,
    Letter::B,
    Letter::C,
    Letter::D,
    Letter::C,
    Letter::D,
    Letter::A,
    Letter::B,
];

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
    C,
    D,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::C, Letter::D];

    pub fn family(self) -> Family {
        match self {
            Letter::A | Letter::B => Family::F1,
            Letter::C | Letter::D => Family::F2,
        }
    }

    /// Whether the letter is the complement layer of its family (`B` or `D`).
    pub fn is_complement(self) -> bool {
        matches!(self, Letter::B | Letter::D)
    }

    /// The letter that plays this role once the `AB` and `CD` pairs swap.
    pub fn swapped(self) -> Letter {
        match self {
            Letter::A => Letter::C,
            Letter::B => Letter::D,
            Letter::C => Letter::A,
            Letter::D => Letter::B,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    fn from_char(c: char) -> Option<Letter> {
        match c {
            'A' => Some(Letter::A),
            'B' => Some(Letter::B),
            'C' => Some(Letter::C),
            'D' => Some(Letter::D),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Letter::A => 'A',
            Letter::B => 'B',
            Letter::C => 'C',
            Letter::D => 'D',
        };
        write!(f, "{c}")
    }
}

fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidPattern(format!("'{c}' is not a bit in \"{s}\""))),
        })
        .collect()
}

/// One candidate choice of `A`, `C` and the order swap.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternCode {
    /// One bit per `F1` row, first row first: `1` picks the odd bonds.
    pub a_bits: Vec<bool>,
    /// One bit per `F2` row.
    pub c_bits: Vec<bool>,
    pub order_swap: bool,
}

impl PatternCode {
    pub fn new(a_bits: Vec<bool>, c_bits: Vec<bool>, order_swap: bool) -> Self {
        PatternCode {
            a_bits,
            c_bits,
            order_swap,
        }
    }

    /// `A` with all ones, `C` with all zeros, no swap: the layout used on
    /// Google's Sycamore experiments.
    pub fn baseline(lattice: &Lattice) -> Self {
        PatternCode::new(vec![true; lattice.m()], vec![false; lattice.n()], false)
    }

    pub fn check(&self, lattice: &Lattice) -> Result<()> {
        for (family, bits) in [(Family::F1, &self.a_bits), (Family::F2, &self.c_bits)] {
            let expected = lattice.rows(family).len();
            if bits.len() != expected {
                return Err(Error::BitLengthMismatch {
                    family,
                    expected,
                    got: bits.len(),
                });
            }
        }
        Ok(())
    }

    /// Position in the enumeration order: swap bit most significant, then
    /// `A` (first row highest), then `C`.
    pub fn index(&self) -> u64 {
        let fold = |acc: u64, &b: &bool| (acc << 1) | b as u64;
        let a = self.a_bits.iter().fold(0, fold);
        let c = self.c_bits.iter().fold(0, fold);
        ((self.order_swap as u64) << (self.a_bits.len() + self.c_bits.len())) | (a << self.c_bits.len()) | c
    }

    pub fn bits(&self, family: Family) -> &[bool] {
        match family {
            Family::F1 => &self.a_bits,
            Family::F2 => &self.c_bits,
        }
    }
}

impl fmt::Display for PatternCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "A={} C={} swap={}",
            bits_to_string(&self.a_bits),
            bits_to_string(&self.c_bits),
            self.order_swap as u8
        )
    }
}

impl FromStr for PatternCode {
    type Err = Error;

    /// Parses `A=<bits> C=<bits> [swap=0|1]`, fields in any order.
    fn from_str(s: &str) -> Result<Self> {
        let (mut a, mut c, mut swap) = (None, None, false);
        for field in s.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::InvalidPattern(format!("expected key=value, got \"{field}\"")))?;
            match key {
                "A" | "a" => a = Some(parse_bits(value)?),
                "C" | "c" => c = Some(parse_bits(value)?),
                "swap" => {
                    swap = match value {
                        "0" => false,
                        "1" => true,
                        _ => return Err(Error::InvalidPattern(format!("swap must be 0 or 1, got \"{value}\""))),
                    }
                }
                _ => return Err(Error::InvalidPattern(format!("unknown field \"{key}\""))),
            }
        }
        match (a, c) {
            (Some(a), Some(c)) => Ok(PatternCode::new(a, c, swap)),
            _ => Err(Error::InvalidPattern("both A= and C= are required".into())),
        }
    }
}

impl Serialize for PatternCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Text<'a> {
            a: String,
            c: String,
            swap: u8,
            text: &'a str,
        }
        Text {
            a: bits_to_string(&self.a_bits),
            c: bits_to_string(&self.c_bits),
            swap: self.order_swap as u8,
            text: &self.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PatternCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Flag {
            Bool(bool),
            Bit(u8),
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Fields { a: String, c: String, swap: Option<Flag> },
        }
        let code = match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse(),
            Repr::Fields { a, c, swap } => {
                let swap = match swap {
                    None | Some(Flag::Bool(false)) | Some(Flag::Bit(0)) => false,
                    Some(Flag::Bool(true)) | Some(Flag::Bit(1)) => true,
                    Some(Flag::Bit(_)) => return Err(serde::de::Error::custom("swap must be 0 or 1")),
                };
                parse_bits(&a).and_then(|a| parse_bits(&c).map(|c| PatternCode::new(a, c, swap)))
            }
        };
        code.map_err(serde::de::Error::custom)
    }
}

/// Bonds of `family` whose parity index matches `bits[row]` (or its negation
/// when `complement` is set).
pub fn pattern_layer(lattice: &Lattice, family: Family, bits: &[bool], complement: bool) -> Result<Vec<BondId>> {
    let expected = lattice.rows(family).len();
    if bits.len() != expected {
        return Err(Error::BitLengthMismatch {
            family,
            expected,
            got: bits.len(),
        });
    }
    Ok(lattice
        .bonds()
        .iter()
        .filter(|b| b.family == family && (b.parity.rem_euclid(2) == 1) == (bits[b.row] ^ complement))
        .map(|b| b.id)
        .collect())
}

/// The pattern letter each bond belongs to under `code`, indexed by bond id.
pub fn bond_letters(lattice: &Lattice, code: &PatternCode) -> Result<Vec<Letter>> {
    code.check(lattice)?;
    Ok(lattice
        .bonds()
        .iter()
        .map(|b| {
            let odd = b.parity.rem_euclid(2) == 1;
            let picked = odd == code.bits(b.family)[b.row];
            match (b.family, picked) {
                (Family::F1, true) => Letter::A,
                (Family::F1, false) => Letter::B,
                (Family::F2, true) => Letter::C,
                (Family::F2, false) => Letter::D,
            }
        })
        .collect())
}

/// Size of the code space for a lattice: `m + n + 1` bits.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeSpace {
    pub m: usize,
    pub n: usize,
}

impl CodeSpace {
    pub fn new(lattice: &Lattice, cap_bits: u32) -> Result<CodeSpace> {
        let bits = (lattice.m() + lattice.n() + 1) as u32;
        if bits > cap_bits || bits > 63 {
            return Err(Error::EnumerationCap {
                bits,
                cap: cap_bits.min(63),
            });
        }
        Ok(CodeSpace {
            m: lattice.m(),
            n: lattice.n(),
        })
    }

    pub fn bits(&self) -> u32 {
        (self.m + self.n + 1) as u32
    }

    pub fn len(&self) -> u64 {
        1u64 << self.bits()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Inverse of [`PatternCode::index`].
    pub fn code(&self, index: u64) -> PatternCode {
        debug_assert!(index < self.len());
        let bit = |pos: usize| (index >> pos) & 1 == 1;
        let c_bits = (0..self.n).map(|i| bit(self.n - 1 - i)).collect();
        let a_bits = (0..self.m).map(|i| bit(self.n + self.m - 1 - i)).collect();
        PatternCode::new(a_bits, c_bits, bit(self.m + self.n))
    }

    pub fn iter(&self) -> impl Iterator<Item = PatternCode> + '_ {
        (0..self.len()).map(|i| self.code(i))
    }
}

/// Every pattern code of `lattice` in index order.
pub fn enumerate_codes(lattice: &Lattice, cap_bits: u32) -> Result<impl Iterator<Item = PatternCode>> {
    let space = CodeSpace::new(lattice, cap_bits)?;
    Ok((0..space.len()).map(move |i| space.code(i)))
}

/// Letters of a circuit, one per cycle, in role form (before the order swap).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleSequence {
    letters: Vec<Letter>,
    /// Number of trailing letters chosen freely rather than taken from the
    /// standard repetition.
    tail: usize,
}

impl CycleSequence {
    /// Validates that no two consecutive letters are equal.
    pub fn from_letters(letters: Vec<Letter>, tail: usize) -> Result<CycleSequence> {
        if letters.is_empty() {
            return Err(Error::InvalidDepth {
                depth: 0,
                reason: "a circuit needs at least one cycle",
            });
        }
        if let Some(w) = letters.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidPattern(format!("cycle letter {} repeats", w[0])));
        }
        if tail > letters.len() {
            return Err(Error::InvalidParameter("tail longer than the sequence".into()));
        }
        Ok(CycleSequence { letters, tail })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn depth(&self) -> usize {
        self.letters.len()
    }

    pub fn tail_len(&self) -> usize {
        self.tail
    }

    /// The freely chosen trailing letters as a string, if any.
    pub fn tail_word(&self) -> Option<String> {
        (self.tail > 0).then(|| {
            self.letters[self.letters.len() - self.tail..]
                .iter()
                .map(Letter::to_string)
                .collect()
        })
    }

    /// Letters with the order swap applied, i.e. the layers actually run.
    pub fn physical(&self, order_swap: bool) -> Vec<Letter> {
        self.letters
            .iter()
            .map(|&l| if order_swap { l.swapped() } else { l })
            .collect()
    }
}

impl fmt::Display for CycleSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters.iter().try_for_each(|l| write!(f, "{l}"))
    }
}

impl FromStr for CycleSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::InvalidPattern(format!("'{c}' is not a pattern letter"))))
            .collect::<Result<Vec<_>>>()?;
        CycleSequence::from_letters(letters, 0)
    }
}

fn standard_letters(d: usize) -> Vec<Letter> {
    STANDARD_CYCLE.iter().copied().cycle().take(d).collect()
}

/// The first `d` letters of the repeated `ABCDCDAB` sequence; `d` must be a
/// positive multiple of four.
pub fn cycle_sequence(d: usize) -> Result<CycleSequence> {
    if d == 0 || !d.is_multiple_of(4) {
        return Err(Error::InvalidDepth {
            depth: d,
            reason: "the standard sequence needs a positive multiple of 4 cycles",
        });
    }
    CycleSequence::from_letters(standard_letters(d), 0)
}

/// All sequences for a depth that is not a multiple of four: the standard
/// prefix of `4 * (d / 4)` cycles followed by every non-repeating tail of
/// `d % 4` letters. With `allow_junction_repeat` the first tail letter may
/// equal the last prefix letter.
pub fn tail_sequences(d: usize, allow_junction_repeat: bool) -> Result<Vec<CycleSequence>> {
    let r = d % 4;
    if d == 0 || r == 0 {
        return Err(Error::InvalidDepth {
            depth: d,
            reason: "tails exist only for depths not divisible by 4",
        });
    }
    let prefix = standard_letters(d - r);
    let junction = if allow_junction_repeat { None } else { prefix.last().copied() };
    let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..r {
        let mut longer = Vec::with_capacity(words.len() * 4);
        for w in &words {
            let prev = w.last().copied().or(junction);
            for l in Letter::ALL.into_iter().filter(|&l| Some(l) != prev) {
                let mut next = w.clone();
                next.push(l);
                longer.push(next);
            }
        }
        words = longer;
    }
    Ok(words
        .into_iter()
        .map(|w| {
            let mut letters = prefix.clone();
            letters.extend(w);
            CycleSequence { letters, tail: r }
        })
        .collect())
}

/// Standard sequence when `d % 4 == 0`, otherwise every tail variant.
pub fn sequences_for_depth(d: usize, allow_junction_repeat: bool) -> Result<Vec<CycleSequence>> {
    if d.is_multiple_of(4) {
        cycle_sequence(d).map(|s| vec![s])
    } else {
        tail_sequences(d, allow_junction_repeat)
    }
}

/// A fully materialized circuit: which bonds carry a gate in each cycle.
#[derive(Clone, Debug)]
pub struct CircuitLayout<'a> {
    lattice: &'a Lattice,
    code: PatternCode,
    sequence: CycleSequence,
    letters: Vec<Letter>,
    cycles: Vec<Vec<BondId>>,
}

impl<'a> CircuitLayout<'a> {
    pub fn lattice(&self) -> &'a Lattice {
        self.lattice
    }

    pub fn code(&self) -> &PatternCode {
        &self.code
    }

    pub fn sequence(&self) -> &CycleSequence {
        &self.sequence
    }

    pub fn depth(&self) -> usize {
        self.cycles.len()
    }

    /// Gates of each cycle as ascending bond ids.
    pub fn cycles(&self) -> &[Vec<BondId>] {
        &self.cycles
    }

    /// Physical letter of each cycle (order swap applied).
    pub fn physical_letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn gate_count(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }
}

pub fn assemble_circuit<'a>(lattice: &'a Lattice, code: &PatternCode, seq: &CycleSequence) -> Result<CircuitLayout<'a>> {
    let by_bond = bond_letters(lattice, code)?;
    let mut layers: [Vec<BondId>; 4] = Default::default();
    for (id, letter) in by_bond.iter().enumerate() {
        layers[letter.index()].push(id);
    }
    let letters = seq.physical(code.order_swap);
    let cycles = letters.iter().map(|l| layers[l.index()].clone()).collect();
    Ok(CircuitLayout {
        lattice,
        code: code.clone(),
        sequence: seq.clone(),
        letters,
        cycles,
    })
}

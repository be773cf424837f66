//! Freely reduced words over a finite-rank free group.
//!
//! Words are immutable and always kept in freely reduced form: no letter is
//! ever adjacent to its inverse. Generators are named `a..z`, with the
//! matching uppercase letter denoting the inverse, so rank is capped at 26.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported rank; the grammar maps generators onto `a..z`.
pub const MAX_RANK: u8 = 26;

/// Cap on the expanded letter count accepted by the parser.
const MAX_PARSED_LETTERS: u64 = 4_000_000;

/// A single generator or inverse generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    generator: u8,
    inverse: bool,
}

impl Letter {
    /// # Panics
    /// Panics if `generator >= 26`.
    pub fn new(generator: u8, inverse: bool) -> Self {
        assert!(generator < MAX_RANK, "generator index {generator} out of range");
        Letter { generator, inverse }
    }

    pub fn generator(self) -> u8 {
        self.generator
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    /// The letter cancelling this one.
    pub fn inverted(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }

    pub fn to_char(self) -> char {
        let base = if self.inverse { b'A' } else { b'a' };
        (base + self.generator) as char
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a'..='z' => Some(Letter { generator: c as u8 - b'a', inverse: false }),
            'A'..='Z' => Some(Letter { generator: c as u8 - b'A', inverse: true }),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A freely reduced word in the free group of the given rank.
///
/// The empty word is the identity. Constructors reduce their input, so the
/// no-adjacent-cancellation invariant always holds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    rank: u8,
    letters: Vec<Letter>,
}

/// Free reduction by a cancellation stack.
fn reduce_letters(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::new();
    for l in letters {
        if stack.last().is_some_and(|top| top.cancels(l)) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}

fn check_rank(rank: u8) {
    assert!(
        (1..=MAX_RANK).contains(&rank),
        "rank must be between 1 and {MAX_RANK}, got {rank}"
    );
}

impl Word {
    /// The identity element.
    ///
    /// # Panics
    /// Panics if `rank` is 0 or exceeds 26.
    pub fn identity(rank: u8) -> Self {
        check_rank(rank);
        Word { rank, letters: Vec::new() }
    }

    /// Builds the free reduction of an arbitrary letter sequence.
    ///
    /// # Panics
    /// Panics if `rank` is out of range or a letter's generator is not below
    /// `rank`.
    pub fn from_letters(rank: u8, letters: impl IntoIterator<Item = Letter>) -> Self {
        check_rank(rank);
        let reduced = reduce_letters(letters);
        for l in &reduced {
            assert!(l.generator() < rank, "letter {l} out of rank {rank}");
        }
        Word { rank, letters: reduced }
    }

    /// Parses the word grammar: terms are letters with an optional `^` integer
    /// exponent, whitespace separates terms, lowercase is a generator and
    /// uppercase its inverse (`a^-2` spells the same word as `AA`). The empty
    /// input and the digit `1` denote the identity.
    pub fn parse(text: &str, rank: u8) -> Result<Self> {
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::RankOutOfRange { rank: rank as usize });
        }
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let mut letters: Vec<Letter> = Vec::new();
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && (bytes[*pos] as char).is_whitespace() {
                *pos += 1;
            }
        };
        skip_ws(&mut pos);
        while pos < bytes.len() {
            let c = bytes[pos] as char;
            if c == '1' {
                // identity term, as printed for the empty word
                pos += 1;
                skip_ws(&mut pos);
                continue;
            }
            let Some(letter) = Letter::from_char(c) else {
                return Err(Error::Syntax {
                    pos,
                    message: format!("expected a letter or '1', found {c:?}"),
                });
            };
            if letter.generator() >= rank {
                return Err(Error::GeneratorOutOfRank { letter: c, rank });
            }
            pos += 1;
            skip_ws(&mut pos);
            let mut exponent: i64 = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                skip_ws(&mut pos);
                let negative = if pos < bytes.len() && bytes[pos] == b'-' {
                    pos += 1;
                    skip_ws(&mut pos);
                    true
                } else {
                    false
                };
                let digits_start = pos;
                let mut value: i64 = 0;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(i64::from(bytes[pos] - b'0')))
                        .ok_or(Error::Syntax { pos, message: "exponent overflow".into() })?;
                    pos += 1;
                }
                if pos == digits_start {
                    return Err(Error::Syntax { pos, message: "expected digits after '^'".into() });
                }
                exponent = if negative { -value } else { value };
            }
            let (l, n) = if exponent >= 0 {
                (letter, exponent as u64)
            } else {
                (letter.inverted(), exponent.unsigned_abs())
            };
            if letters.len() as u64 + n > MAX_PARSED_LETTERS {
                return Err(Error::Syntax { pos, message: "word too long".into() });
            }
            letters.extend(std::iter::repeat_n(l, n as usize));
            skip_ws(&mut pos);
        }
        Ok(Word { rank, letters: reduce_letters(letters) })
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Word length `|x|`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The empty word is the group identity.
    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Group multiplication: concatenate, then reduce at the seam.
    ///
    /// # Panics
    /// Panics if the ranks differ.
    pub fn mul(&self, other: &Word) -> Word {
        assert_eq!(
            self.rank, other.rank,
            "rank mismatch: {} vs {}",
            self.rank, other.rank
        );
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            if letters.last().is_some_and(|top| top.cancels(l)) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        Word { rank: self.rank, letters }
    }

    /// Reverses the word and flips every sign.
    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    /// Integer power, with negative exponents through the inverse.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `by * self * by^-1`.
    pub fn conjugate(&self, by: &Word) -> Word {
        by.mul(self).mul(&by.inverse())
    }

    /// True when the first letter is not the inverse of the last.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&first), Some(&last)) => !first.cancels(last),
            _ => true,
        }
    }

    /// Peels mutually inverse end letters, producing the cyclically reduced
    /// core together with the conjugator that restores the original word.
    pub fn cyclic_reduce(&self) -> CyclicWord {
        let letters = &self.letters;
        let mut i = 0usize;
        let mut j = letters.len();
        while j - i >= 2 && letters[i].cancels(letters[j - 1]) {
            i += 1;
            j -= 1;
        }
        let core = Word { rank: self.rank, letters: letters[i..j].to_vec() };
        let conjugator = Word { rank: self.rank, letters: letters[..i].to_vec() };
        CyclicWord { core, conjugator }
    }

    /// Length of the longest common prefix, which in a tree is the distance
    /// from the basepoint to the center of the tripod on `(1, x, y)`; it
    /// equals `(|x| + |y| - |x^-1 y|) / 2`.
    ///
    /// # Panics
    /// Panics if the ranks differ.
    pub fn gromov_product(&self, other: &Word) -> usize {
        assert_eq!(
            self.rank, other.rank,
            "rank mismatch: {} vs {}",
            self.rank, other.rank
        );
        self.letters
            .iter()
            .zip(other.letters.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Relabels two generators into each other. The swap is an automorphism,
    /// so reducedness is preserved letterwise.
    ///
    /// # Panics
    /// Panics if either generator index is not below the rank.
    pub fn swap_generators(&self, first: u8, second: u8) -> Word {
        assert!(first < self.rank && second < self.rank, "generator out of rank");
        let letters = self
            .letters
            .iter()
            .map(|l| {
                let g = if l.generator() == first {
                    second
                } else if l.generator() == second {
                    first
                } else {
                    l.generator()
                };
                Letter::new(g, l.is_inverse())
            })
            .collect();
        Word { rank: self.rank, letters }
    }
}

impl fmt::Display for Word {
    /// Runs of a letter print with a caret exponent, e.g. `ab^2ab^3`; the
    /// identity prints as `1`. The output parses back to the same word.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i + 1;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let run = j - i;
            write!(f, "{}", l.to_char())?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// `[x, y] = x y x^-1 y^-1`.
pub fn commutator(x: &Word, y: &Word) -> Word {
    x.mul(y).mul(&x.inverse()).mul(&y.inverse())
}

/// A word split as `conjugator * core * conjugator^-1` with the core
/// cyclically reduced. The core is canonical only up to rotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicWord {
    core: Word,
    conjugator: Word,
}

impl CyclicWord {
    pub fn core(&self) -> &Word {
        &self.core
    }

    pub fn conjugator(&self) -> &Word {
        &self.conjugator
    }

    /// Reassembles the word this was split from.
    pub fn original(&self) -> Word {
        self.core.conjugate(&self.conjugator)
    }

    pub fn into_core(self) -> Word {
        self.core
    }
}

/// All freely reduced words of length at most `radius`, in length order and
/// lexicographic within a length (letters ordered `a < A < b < B < ...`).
///
/// This is the raw enumerator; [`crate::oracle::enumerate_ball`] adds the
/// guard and the closed-form count.
pub(crate) fn enumerate_ball_unchecked(rank: u8, radius: usize) -> Vec<Word> {
    check_rank(rank);
    let alphabet: Vec<Letter> = (0..rank)
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect();
    let mut out = vec![Word::identity(rank)];
    let mut sphere_start = 0usize;
    for _ in 1..=radius {
        let sphere_end = out.len();
        for idx in sphere_start..sphere_end {
            let last = out[idx].letters.last().copied();
            for &l in &alphabet {
                if last.is_some_and(|last| last.cancels(l)) {
                    continue;
                }
                let mut letters = out[idx].letters.clone();
                letters.push(l);
                out.push(Word { rank, letters });
            }
        }
        sphere_start = sphere_end;
    }
    out
}

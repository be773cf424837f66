//! Counting quasi-morphisms and the audits backing their key properties.
//!
//! A counting quasi-morphism scores a word by the number of copies of a fixed
//! pattern minus the number of copies of the pattern's inverse. The family
//! `a b^2i a b^2i+1` gives one such map per index `i`; the even/odd run
//! lengths force distinct copies apart, which is what makes the family
//! members act independently of each other.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::kmp;
use crate::word::{enumerate_ball_unchecked, Word};

/// Where occurrences are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Scan the reduced word as written.
    #[default]
    Linear,
    /// Scan the cyclic word spelled by the cyclically reduced core, so the
    /// value only depends on the conjugacy class.
    Cyclic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Linear => f.write_str("linear"),
            Mode::Cyclic => f.write_str("cyclic"),
        }
    }
}

/// Occurrences of `pattern` in `subject`, overlaps included.
///
/// In cyclic mode the subject is read as a cyclic word; callers who want a
/// conjugacy invariant should pass a cyclically reduced core (as
/// [`CountingQM::value`] does).
pub fn count_occurrences(pattern: &Word, subject: &Word, mode: Mode) -> Result<u64> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    Ok(match mode {
        Mode::Linear => kmp::count(pattern.letters(), subject.letters()),
        Mode::Cyclic => kmp::count_cyclic(pattern.letters(), subject.letters()),
    })
}

/// A counting quasi-morphism `x -> N_p(x) - N_p^-1(x)` for a fixed pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingQM {
    pattern: Word,
    pattern_inverse: Word,
    mode: Mode,
}

impl CountingQM {
    /// The pattern must be non-empty, and cyclically reduced in cyclic mode.
    pub fn new(pattern: Word, mode: Mode) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::EmptyPattern);
        }
        if matches!(mode, Mode::Cyclic) && !pattern.is_cyclically_reduced() {
            return Err(Error::PatternNotCyclicallyReduced { pattern: pattern.to_string() });
        }
        let pattern_inverse = pattern.inverse();
        Ok(CountingQM { pattern, pattern_inverse, mode })
    }

    pub fn pattern(&self) -> &Word {
        &self.pattern
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The score of `x`. Antisymmetric: the inverse of `x` scores the
    /// negation. In cyclic mode `x` is replaced by its cyclically reduced
    /// core first.
    pub fn value(&self, x: &Word) -> i64 {
        match self.mode {
            Mode::Linear => {
                let pos = kmp::count(self.pattern.letters(), x.letters());
                let neg = kmp::count(self.pattern_inverse.letters(), x.letters());
                pos as i64 - neg as i64
            }
            Mode::Cyclic => {
                let core = x.cyclic_reduce().into_core();
                let pos = kmp::count_cyclic(self.pattern.letters(), core.letters());
                let neg = kmp::count_cyclic(self.pattern_inverse.letters(), core.letters());
                pos as i64 - neg as i64
            }
        }
    }

    /// Two-variable form `r(x, y) = H(x^-1 y)`; invariant under simultaneous
    /// left translation of both arguments.
    pub fn bicombing(&self, x: &Word, y: &Word) -> i64 {
        self.value(&x.inverse().mul(y))
    }
}

/// The detector pattern `a b^2i a b^2i+1` of index `i >= 1`, a positive word
/// of length `4i + 3` over rank 2.
///
/// # Panics
/// Panics if `i` is 0.
pub fn family_pattern(i: u32) -> Word {
    let (front, back) = family_halves(i);
    front.mul(&back)
}

/// The two halves `a b^2i` and `a b^2i+1` whose product is
/// [`family_pattern`]. The even/odd split is what keeps neighbouring
/// patterns from matching across seams.
pub fn family_halves(i: u32) -> (Word, Word) {
    assert!(i >= 1, "family index starts at 1");
    let a = Word::parse("a", 2).unwrap();
    let b = Word::parse("b", 2).unwrap();
    let front = a.mul(&b.pow(2 * i64::from(i)));
    let back = a.mul(&b.pow(2 * i64::from(i) + 1));
    (front, back)
}

/// Linear-mode counting quasi-morphism on [`family_pattern`]`(i)`.
pub fn family_qm(i: u32) -> CountingQM {
    CountingQM::new(family_pattern(i), Mode::Linear).expect("family pattern is non-empty")
}

/// True when no proper suffix of the pattern equals a prefix of the same
/// length, so two occurrences in a reduced word can never share a letter.
///
/// # Panics
/// Panics on the empty pattern.
pub fn self_overlap_free(pattern: &Word) -> bool {
    let letters = pattern.letters();
    assert!(!letters.is_empty(), "overlap check needs a non-empty pattern");
    for shift in 1..letters.len() {
        if letters[shift..] == letters[..letters.len() - shift] {
            return false;
        }
    }
    true
}

/// How the certified defect bound for a pattern was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectPolicy {
    /// Overlap-free patterns meet a tripod in at most one copy per leg pair.
    SelfOverlapFree,
    /// Fallback for patterns whose copies can chain across each other.
    General,
}

impl fmt::Display for DefectPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefectPolicy::SelfOverlapFree => f.write_str("self-overlap-free"),
            DefectPolicy::General => f.write_str("general"),
        }
    }
}

/// A defect bound for a counting quasi-morphism together with the policy
/// that produced it. Certificates carry this instead of silently trusting a
/// constant: 3 for self-overlap-free patterns, `3(|p| - 1)` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DefectBound {
    pub value: u64,
    pub policy: DefectPolicy,
}

impl fmt::Display for DefectBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.value, self.policy)
    }
}

/// Certified defect bound for a counting pattern in linear mode.
pub fn certified_defect_bound(pattern: &Word) -> DefectBound {
    if self_overlap_free(pattern) {
        DefectBound { value: 3, policy: DefectPolicy::SelfOverlapFree }
    } else {
        DefectBound { value: 3 * (pattern.len() as u64 - 1), policy: DefectPolicy::General }
    }
}

/// Exhaustive maximum of `|H(xy) - H(x) - H(y)|` over all reduced pairs of
/// length at most `radius`. Exact on that ball, hence a lower estimate for
/// the true defect. The pair count `ball^2` must stay within `max_pairs`.
pub fn defect_exact(q: &CountingQM, radius: usize, max_pairs: u64) -> Result<u64> {
    let rank = q.pattern().rank();
    let ball_count = crate::oracle::ball_size(rank, radius);
    let pairs = ball_count.saturating_mul(ball_count);
    if pairs > u128::from(max_pairs) {
        return Err(Error::GuardExceeded { needed: pairs, guard: max_pairs });
    }
    let ball = enumerate_ball_unchecked(rank, radius);
    let values: Vec<i64> = ball.iter().map(|x| q.value(x)).collect();
    let mut worst = 0u64;
    for (x, hx) in ball.iter().zip(&values) {
        for (y, hy) in ball.iter().zip(&values) {
            let defect = (q.value(&x.mul(y)) - hx - hy).unsigned_abs();
            worst = worst.max(defect);
        }
    }
    Ok(worst)
}

/// Indices `i <= k` whose family quasi-morphism fails additivity on the pair:
/// `H_i(yz) != H_i(y) + H_i(z)`.
pub fn exceptional_indices(y: &Word, z: &Word, k: u32) -> BTreeSet<u32> {
    additivity_audit(y, z, k)
        .rows
        .iter()
        .filter(|row| row.delta() != 0)
        .map(|row| row.index)
        .collect()
}

/// One additivity measurement for a family index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdditivityRow {
    pub index: u32,
    pub h_y: i64,
    pub h_z: i64,
    pub h_yz: i64,
}

impl AdditivityRow {
    /// The additivity error `H(yz) - H(y) - H(z)`.
    pub fn delta(&self) -> i64 {
        self.h_yz - self.h_y - self.h_z
    }
}

/// Per-index additivity table for a pair, the data behind
/// [`exceptional_indices`].
#[derive(Debug, Clone)]
pub struct AdditivityAudit {
    pub rows: Vec<AdditivityRow>,
    pub k: u32,
}

impl AdditivityAudit {
    pub fn exceptional(&self) -> BTreeSet<u32> {
        self.rows.iter().filter(|r| r.delta() != 0).map(|r| r.index).collect()
    }

    /// CSV with columns `i,H_i(y),H_i(z),H_i(yz),delta` and a closing
    /// summary row with the exceptional count and the audited bound.
    pub fn csv(&self, bound: u64) -> String {
        let mut out = String::from("i,h_y,h_z,h_yz,delta\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.index,
                row.h_y,
                row.h_z,
                row.h_yz,
                row.delta()
            ));
        }
        out.push_str(&format!("count,{},bound,{},\n", self.exceptional().len(), bound));
        out
    }
}

/// Evaluates additivity of the first `k` family quasi-morphisms on a pair.
pub fn additivity_audit(y: &Word, z: &Word, k: u32) -> AdditivityAudit {
    let yz = y.mul(z);
    let rows = (1..=k)
        .map(|i| {
            let q = family_qm(i);
            AdditivityRow { index: i, h_y: q.value(y), h_z: q.value(z), h_yz: q.value(&yz) }
        })
        .collect();
    AdditivityAudit { rows, k }
}

/// Non-vanishing counts for the three bicombing sums over a triple of pairs,
/// reported against the bounds `L`, `2L`, `3L + 3`, where `L` is the largest
/// of the three pair distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairAudit {
    /// Indices with `r_i(x-, x+) != 0`.
    pub nonzero_single: u64,
    /// Indices with `r_i(x-, y+) + r_i(y-, x+) != 0`.
    pub nonzero_pair: u64,
    /// Indices with `r_i(x-, y+) + r_i(y-, z+) + r_i(z-, x+) != 0`.
    pub nonzero_triple: u64,
    /// Largest pair distance of the three input pairs.
    pub max_pair_distance: u64,
    pub k: u32,
}

impl PairAudit {
    pub fn single_ok(&self) -> bool {
        self.nonzero_single <= self.max_pair_distance
    }

    pub fn pair_ok(&self) -> bool {
        self.nonzero_pair <= 2 * self.max_pair_distance
    }

    pub fn triple_ok(&self) -> bool {
        self.nonzero_triple <= 3 * self.max_pair_distance + 3
    }

    pub fn all_ok(&self) -> bool {
        self.single_ok() && self.pair_ok() && self.triple_ok()
    }

    pub fn csv_header() -> &'static str {
        "k,L,single,pair,triple,single_ok,pair_ok,triple_ok"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.k,
            self.max_pair_distance,
            self.nonzero_single,
            self.nonzero_pair,
            self.nonzero_triple,
            self.single_ok(),
            self.pair_ok(),
            self.triple_ok()
        )
    }
}

/// Counts, over the first `k` family bicombings, how often the single, mixed
/// pair, and cyclic triple sums fail to vanish for the given endpoint pairs.
pub fn audit_pair_bounds(
    x: (&Word, &Word),
    y: (&Word, &Word),
    z: (&Word, &Word),
    k: u32,
) -> PairAudit {
    let distance = |(m, p): (&Word, &Word)| m.inverse().mul(p).len() as u64;
    let max_pair_distance = distance(x).max(distance(y)).max(distance(z));
    let mut nonzero_single = 0u64;
    let mut nonzero_pair = 0u64;
    let mut nonzero_triple = 0u64;
    for i in 1..=k {
        let q = family_qm(i);
        if q.bicombing(x.0, x.1) != 0 {
            nonzero_single += 1;
        }
        if q.bicombing(x.0, y.1) + q.bicombing(y.0, x.1) != 0 {
            nonzero_pair += 1;
        }
        if q.bicombing(x.0, y.1) + q.bicombing(y.0, z.1) + q.bicombing(z.0, x.1) != 0 {
            nonzero_triple += 1;
        }
    }
    PairAudit { nonzero_single, nonzero_pair, nonzero_triple, max_pair_distance, k }
}

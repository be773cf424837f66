//! Independent brute-force checks: ball enumeration, bounded verbal-length
//! upper bounds, and certificate cross-checks.
//!
//! Everything here is deliberately separate from the main counting path: the
//! occurrence counts are naive position scans rather than the automaton the
//! library uses, so a certificate is re-derived along a second route. All
//! searches are bounded and report an upper bound only; running out of budget
//! is an explicit outcome, distinct from a definitive "not found".

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::certificate::WidthCertificate;
use crate::counting::{family_pattern, Mode};
use crate::error::{Error, Result};
use crate::word::{enumerate_ball_unchecked, Word};
use crate::wordmap::WordMap;

/// Caps for the bounded searches. All searches stay exact within the caps;
/// exceeding one is reported, never silently truncated into a wrong answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Ball radius for substitution arguments.
    pub max_factor_len: usize,
    /// Longest product of verbal values considered.
    pub max_product_factors: u32,
    /// Cap on enumerated tuples and on breadth-first states.
    pub max_states: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_factor_len: 4, max_product_factors: 6, max_states: 200_000 }
    }
}

impl SearchBudget {
    /// Parses `key=value` lines; `#` starts a comment. Keys are
    /// `max_factor_len`, `max_product_factors`, and `max_states`; missing
    /// keys keep their defaults.
    pub fn parse_config(text: &str) -> Result<Self> {
        let mut budget = SearchBudget::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Syntax {
                    pos: lineno + 1,
                    message: format!("expected key=value, found {line:?}"),
                });
            };
            let value = value.trim();
            let parse = |v: &str| -> Result<u64> {
                v.parse().map_err(|_| Error::Syntax {
                    pos: lineno + 1,
                    message: format!("expected an integer, found {v:?}"),
                })
            };
            match key.trim() {
                "max_factor_len" => budget.max_factor_len = parse(value)? as usize,
                "max_product_factors" => budget.max_product_factors = parse(value)? as u32,
                "max_states" => budget.max_states = parse(value)?,
                other => {
                    return Err(Error::Syntax {
                        pos: lineno + 1,
                        message: format!("unknown budget key {other:?}"),
                    })
                }
            }
        }
        Ok(budget)
    }
}

/// Closed-form size of the radius-`radius` ball:
/// `1 + sum over l of 2r (2r-1)^(l-1)`.
pub fn ball_size(rank: u8, radius: usize) -> u128 {
    let two_r = 2 * u128::from(rank);
    let mut total: u128 = 1;
    let mut sphere = two_r;
    for _ in 1..=radius {
        total = total.saturating_add(sphere);
        sphere = sphere.saturating_mul(two_r - 1);
    }
    total
}

/// Every freely reduced word of length at most `radius`, each exactly once,
/// in length order and lexicographic within a length. Errors when the
/// closed-form count exceeds `max_states`.
pub fn enumerate_ball(rank: u8, radius: usize, max_states: u64) -> Result<Vec<Word>> {
    let needed = ball_size(rank, radius);
    if needed > u128::from(max_states) {
        return Err(Error::GuardExceeded { needed, guard: max_states });
    }
    let ball = enumerate_ball_unchecked(rank, radius);
    debug_assert_eq!(ball.len() as u128, needed);
    Ok(ball)
}

/// All values of the map on argument tuples from the ball of radius
/// `budget.max_factor_len`, deduplicated. The tuple count
/// `ball^arity` must stay within `budget.max_states`.
pub fn verbal_values_bounded(
    map: &WordMap,
    rank: u8,
    budget: &SearchBudget,
) -> Result<BTreeSet<Word>> {
    let count = ball_size(rank, budget.max_factor_len);
    let tuples = count.saturating_pow(map.arity() as u32);
    if tuples > u128::from(budget.max_states) {
        return Err(Error::GuardExceeded { needed: tuples, guard: budget.max_states });
    }
    let ball = enumerate_ball_unchecked(rank, budget.max_factor_len);
    let mut values = BTreeSet::new();
    let k = map.arity();
    let mut indices = vec![0usize; k];
    loop {
        let args: Vec<Word> = indices.iter().map(|&i| ball[i].clone()).collect();
        values.insert(map.substitute(&args)?);
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(values);
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < ball.len() {
                break;
            }
            indices[pos] = 0;
        }
    }
}

/// Generator set for the upper-bound searches: bounded substitution values,
/// the degree-power family, and all inverses, minus the identity.
///
/// Substitution tuples are enumerated at the largest radius whose tuple count
/// fits `max_states` (never above `max_factor_len`). For maps of positive
/// degree the Bézout power family `u^degree`, `u` over the full factor-length
/// ball, is added: each such power is a single verbal value, verified through
/// [`WordMap::power_as_verbal_value`]. Returns the generators and whether any
/// enumeration had to shrink.
fn bounded_generators(
    map: &WordMap,
    rank: u8,
    budget: &SearchBudget,
) -> Result<(BTreeSet<Word>, bool)> {
    let k = map.arity() as u32;
    let mut tuple_radius = 0usize;
    while tuple_radius < budget.max_factor_len
        && ball_size(rank, tuple_radius + 1).saturating_pow(k) <= u128::from(budget.max_states)
    {
        tuple_radius += 1;
    }
    let mut shrunk = tuple_radius < budget.max_factor_len;
    let tuple_budget = SearchBudget { max_factor_len: tuple_radius, ..*budget };
    let mut values = verbal_values_bounded(map, rank, &tuple_budget)?;

    let degree = map.exponent_data().degree;
    if degree >= 1 {
        let mut power_radius = budget.max_factor_len;
        while power_radius > 0 && ball_size(rank, power_radius) > u128::from(budget.max_states) {
            power_radius -= 1;
            shrunk = true;
        }
        for base in enumerate_ball_unchecked(rank, power_radius) {
            let args = map.power_as_verbal_value(&base)?;
            values.insert(map.substitute(&args)?);
        }
    }

    let mut generators = BTreeSet::new();
    for value in values {
        if !value.is_identity() {
            generators.insert(value.inverse());
            generators.insert(value);
        }
    }
    Ok((generators, shrunk))
}

/// Shortest cut of `g` into consecutive generator segments: factorizations
/// with no cancellation between factors, found by a positional breadth-first
/// search. Returns the factor count when one exists within the factor cap.
fn segmentation_search(generators: &BTreeSet<Word>, g: &Word, max_factors: u32) -> Option<u32> {
    let max_len = generators.iter().map(Word::len).max()?;
    let n = g.len();
    let mut dist = vec![u32::MAX; n + 1];
    dist[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        if dist[p] >= max_factors {
            continue;
        }
        for q in (p + 1)..=(p + max_len).min(n) {
            if dist[q] != u32::MAX {
                continue;
            }
            let segment = Word::from_letters(g.rank(), g.letters()[p..q].iter().copied());
            if generators.contains(&segment) {
                dist[q] = dist[p] + 1;
                queue.push_back(q);
            }
        }
    }
    (dist[n] != u32::MAX).then_some(dist[n])
}

/// Layered breadth-first search over products of generators, cancellation
/// allowed. Returns the depth at which `g` appears, plus a flag for hitting
/// the state cap.
fn product_bfs(generators: &BTreeSet<Word>, g: &Word, budget: &SearchBudget) -> (Option<u32>, bool) {
    let mut visited: HashSet<Word> = HashSet::from([Word::identity(g.rank())]);
    let mut frontier = vec![Word::identity(g.rank())];
    let mut truncated = false;
    for depth in 1..=budget.max_product_factors {
        let mut next = Vec::new();
        'layer: for state in &frontier {
            for generator in generators {
                let product = state.mul(generator);
                if &product == g {
                    return (Some(depth), truncated);
                }
                if visited.len() as u64 >= budget.max_states {
                    truncated = true;
                    break 'layer;
                }
                if visited.insert(product.clone()) {
                    next.push(product);
                }
            }
        }
        if truncated || next.is_empty() {
            break;
        }
        frontier = next;
    }
    (None, truncated)
}

/// Smallest factor count found for writing `g` as a product of bounded
/// verbal values and their inverses. This is an upper bound on the verbal
/// length only, since factors outside the budget are unseen.
///
/// Two bounded searches run: a positional search over cancellation-free
/// segmentations and a layered product search that allows cancellation. The
/// better result wins. `Ok(None)` means the complete bounded search space was
/// exhausted; if any cap cut the search short without a result, the distinct
/// outcome is [`Error::BudgetExhausted`].
pub fn vl_upper_bound(map: &WordMap, g: &Word, budget: &SearchBudget) -> Result<Option<u32>> {
    if g.is_identity() {
        return Ok(Some(0));
    }
    let (generators, shrunk) = bounded_generators(map, g.rank(), budget)?;
    let seg = segmentation_search(&generators, g, budget.max_product_factors);
    let (bfs, bfs_truncated) = product_bfs(&generators, g, budget);
    let best = match (seg, bfs) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    match best {
        Some(bound) => Ok(Some(bound)),
        None if shrunk || bfs_truncated => Err(Error::BudgetExhausted(format!(
            "no factorization found before the state cap ({} states)",
            budget.max_states
        ))),
        None => Ok(None),
    }
}

/// Reference occurrence count by direct position scan; the independent
/// counterpart of the automaton-based counting.
pub fn naive_count_occurrences(pattern: &Word, subject: &Word, mode: Mode) -> u64 {
    let p = pattern.letters();
    let s = subject.letters();
    assert!(!p.is_empty(), "naive count needs a non-empty pattern");
    if p.len() > s.len() {
        return 0;
    }
    match mode {
        Mode::Linear => (0..=s.len() - p.len())
            .filter(|&start| (0..p.len()).all(|t| s[start + t] == p[t]))
            .count() as u64,
        Mode::Cyclic => (0..s.len())
            .filter(|&start| (0..p.len()).all(|t| s[(start + t) % s.len()] == p[t]))
            .count() as u64,
    }
}

/// Outcome of re-deriving a certificate along the independent route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Everything re-derived matches; the upper bound is attached when the
    /// bounded search found one, otherwise the comparison is inconclusive.
    Consistent { upper_bound: Option<u32> },
    /// A recorded quasi-morphism value disagrees with the naive recount.
    ValueMismatch { index: u32, recorded: i64, recomputed: i64 },
    /// The recorded index set or bound does not follow from the values.
    SummaryMismatch { field: &'static str },
    /// A factorization shorter than the certified lower bound exists.
    UpperBoundViolated { lower_bound: u64, upper_bound: u32 },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Consistent { .. })
    }

    pub fn csv_header() -> &'static str {
        "verdict,detail,upper_bound"
    }

    /// Single CSV row `verdict,detail,upper_bound`.
    pub fn csv_row(&self) -> String {
        match self {
            Verdict::Consistent { upper_bound: Some(u) } => format!("OK,,{u}"),
            Verdict::Consistent { upper_bound: None } => "OK,upper bound inconclusive,".into(),
            Verdict::ValueMismatch { index, recorded, recomputed } => {
                format!("FAIL,value mismatch at index {index}: {recorded} vs {recomputed},")
            }
            Verdict::SummaryMismatch { field } => format!("FAIL,{field} mismatch,"),
            Verdict::UpperBoundViolated { lower_bound, upper_bound } => {
                format!("FAIL,lower bound {lower_bound} exceeds upper bound,{upper_bound}")
            }
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.csv_row())
    }
}

/// Re-derives every part of a certificate independently: each value by naive
/// recount, the bad-index set and bound from the recounted values, and a
/// bounded upper-bound search that the lower bound must not exceed. The first
/// mismatching index is reported. A missing upper bound is inconclusive, not
/// a failure.
pub fn cross_check_certificate(cert: &WidthCertificate, budget: &SearchBudget) -> Verdict {
    let degree = cert.word_map.exponent_data().degree as i64;
    if degree < 2 {
        return Verdict::SummaryMismatch { field: "degree" };
    }
    for (idx, &recorded) in cert.values.iter().enumerate() {
        let i = idx as u32 + 1;
        let pattern = family_pattern(i);
        let recomputed = naive_count_occurrences(&pattern, &cert.element, Mode::Linear) as i64
            - naive_count_occurrences(&pattern.inverse(), &cert.element, Mode::Linear) as i64;
        if recomputed != recorded {
            return Verdict::ValueMismatch { index: i, recorded, recomputed };
        }
    }
    let bad: BTreeSet<u32> = cert
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| *v % degree != 0)
        .map(|(idx, _)| idx as u32 + 1)
        .collect();
    if bad != cert.bad_indices {
        return Verdict::SummaryMismatch { field: "bad_indices" };
    }
    let m = u64::from(cert.m);
    let w_len = cert.word_map.len() as u64;
    let expected_bound = if !bad.is_empty() {
        (bad.len() as u64 + m).div_ceil(m * w_len)
    } else if !cert.element.is_identity() {
        1
    } else {
        0
    };
    if expected_bound != cert.lower_bound {
        return Verdict::SummaryMismatch { field: "lower_bound" };
    }
    match vl_upper_bound(&cert.word_map, &cert.element, budget) {
        Ok(Some(upper)) if u64::from(upper) < cert.lower_bound => {
            Verdict::UpperBoundViolated { lower_bound: cert.lower_bound, upper_bound: upper }
        }
        Ok(Some(upper)) => Verdict::Consistent { upper_bound: Some(upper) },
        Ok(None) | Err(_) => Verdict::Consistent { upper_bound: None },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{certify_vl_lower_bound, witness};

    fn map(text: &str) -> WordMap {
        WordMap::parse(text).unwrap()
    }

    fn w(text: &str) -> Word {
        Word::parse(text, 2).unwrap()
    }

    #[test]
    fn ball_sizes_and_enumeration() {
        assert_eq!(ball_size(2, 0), 1);
        assert_eq!(ball_size(2, 1), 5);
        assert_eq!(ball_size(2, 2), 17);
        assert_eq!(ball_size(1, 3), 7);
        for radius in 0..=6 {
            let ball = enumerate_ball(2, radius, 10_000_000).unwrap();
            assert_eq!(ball.len() as u128, ball_size(2, radius));
            let distinct: HashSet<&Word> = ball.iter().collect();
            assert_eq!(distinct.len(), ball.len());
        }
        assert!(matches!(enumerate_ball(2, 9, 100), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn bounded_values_of_small_maps() {
        let budget = SearchBudget { max_factor_len: 1, ..SearchBudget::default() };
        let comm = verbal_values_bounded(&map("[x1,x2]"), 2, &budget).unwrap();
        assert!(comm.contains(&Word::identity(2)));
        assert!(comm.contains(&w("abAB")));

        let squares = verbal_values_bounded(&map("x1^2"), 2, &budget).unwrap();
        let expected: BTreeSet<Word> =
            ["1", "aa", "AA", "bb", "BB"].iter().map(|t| w(t)).collect();
        assert_eq!(squares, expected);

        let tiny = SearchBudget { max_factor_len: 4, max_states: 10, ..SearchBudget::default() };
        assert!(matches!(
            verbal_values_bounded(&map("[x1,x2]"), 2, &tiny),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn upper_bounds_for_commutators() {
        let comm = map("[x1,x2]");
        let budget = SearchBudget::default();
        assert_eq!(vl_upper_bound(&comm, &Word::identity(2), &budget).unwrap(), Some(0));
        assert_eq!(vl_upper_bound(&comm, &w("abAB"), &budget).unwrap(), Some(1));
        let two = vl_upper_bound(&comm, &w("abABabAB"), &budget).unwrap().unwrap();
        assert!(two <= 2);
    }

    #[test]
    fn upper_bound_monotone_in_budget() {
        let comm = map("[x1,x2]");
        let g = w("abABabAB");
        let small = SearchBudget { max_factor_len: 1, max_product_factors: 3, max_states: 50_000 };
        let large = SearchBudget { max_factor_len: 2, max_product_factors: 5, max_states: 80_000 };
        let a = vl_upper_bound(&comm, &g, &small).unwrap();
        let b = vl_upper_bound(&comm, &g, &large).unwrap();
        match (a, b) {
            (Some(x), Some(y)) => assert!(y <= x),
            (None, _) => {}
            (Some(_), None) => panic!("bound lost when budget grew"),
        }
    }

    #[test]
    fn budget_exhaustion_is_distinct_from_none() {
        let comm = map("[x1,x2]");
        // far away target with a choked state cap
        let g = w("abababababababababab");
        let tiny = SearchBudget { max_factor_len: 1, max_product_factors: 2, max_states: 40 };
        assert!(matches!(
            vl_upper_bound(&comm, &g, &tiny),
            Err(Error::BudgetExhausted(_))
        ));
        // complete tiny search spaces report a definitive none
        let square = map("x1^2");
        let odd = w("a");
        let budget = SearchBudget { max_factor_len: 1, max_product_factors: 2, max_states: 50_000 };
        assert_eq!(vl_upper_bound(&square, &odd, &budget).unwrap(), None);
    }

    #[test]
    fn naive_counts_match_expectations() {
        assert_eq!(naive_count_occurrences(&w("ab"), &w("abab"), Mode::Linear), 2);
        assert_eq!(naive_count_occurrences(&w("aa"), &w("aaa"), Mode::Linear), 2);
        assert_eq!(naive_count_occurrences(&w("ba"), &w("ab"), Mode::Cyclic), 1);
        assert_eq!(naive_count_occurrences(&w("aba"), &w("ab"), Mode::Cyclic), 0);
    }

    #[test]
    fn cross_check_accepts_genuine_certificates() {
        let m = map("x1 x2 x1 x2^-1");
        let h = witness(&m, 2).unwrap();
        let cert = certify_vl_lower_bound(&m, &h, 2, 3).unwrap();
        let budget = SearchBudget { max_factor_len: 6, max_product_factors: 4, max_states: 200_000 };
        let verdict = cross_check_certificate(&cert, &budget);
        match verdict {
            Verdict::Consistent { upper_bound: Some(upper) } => {
                assert!(upper <= 4, "witness factors into 2K values");
                assert!(u64::from(upper) >= cert.lower_bound);
            }
            other => panic!("expected a consistent verdict with a bound, got {other:?}"),
        }
    }

    #[test]
    fn cross_check_identity_certificate() {
        let m = map("x1 x2 x1 x2^-1");
        let cert = certify_vl_lower_bound(&m, &Word::identity(2), 5, 3).unwrap();
        let verdict = cross_check_certificate(&cert, &SearchBudget::default());
        assert!(verdict.is_ok());
    }

    #[test]
    fn cross_check_catches_tampering() {
        let m = map("x1 x2 x1 x2^-1");
        let h = witness(&m, 3).unwrap();
        let mut cert = certify_vl_lower_bound(&m, &h, 3, 3).unwrap();
        cert.values[1] = 7;
        let verdict = cross_check_certificate(&cert, &SearchBudget::default());
        assert_eq!(
            verdict,
            Verdict::ValueMismatch { index: 2, recorded: 7, recomputed: 1 }
        );
        assert!(!verdict.is_ok());
        assert!(verdict.csv_row().starts_with("FAIL,"));

        let mut cert = certify_vl_lower_bound(&m, &h, 3, 3).unwrap();
        cert.lower_bound += 10;
        assert_eq!(
            cross_check_certificate(&cert, &SearchBudget::default()),
            Verdict::SummaryMismatch { field: "lower_bound" }
        );
    }

    #[test]
    fn budget_config_parsing() {
        let budget = SearchBudget::parse_config(
            "# comment\nmax_factor_len = 7\nmax_states=1000\n\nmax_product_factors=9\n",
        )
        .unwrap();
        assert_eq!(budget.max_factor_len, 7);
        assert_eq!(budget.max_product_factors, 9);
        assert_eq!(budget.max_states, 1000);
        assert!(SearchBudget::parse_config("bogus").is_err());
        assert!(SearchBudget::parse_config("max_states=abc").is_err());
        assert!(SearchBudget::parse_config("unknown=3").is_err());
    }
}

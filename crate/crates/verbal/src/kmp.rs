//! Knuth-Morris-Pratt occurrence counting over letter slices.
//!
//! Occurrences may overlap: every starting position with a full match is
//! counted, which is what the counting quasi-morphisms need.

use crate::word::Letter;

/// failure[n-1] is the length of the longest proper border of the first n
/// letters (a border is a prefix that is also a suffix).
fn failure(pattern: &[Letter]) -> Vec<usize> {
    let mut fail = vec![0usize; pattern.len()];
    let mut matched = 0usize;
    for i in 1..pattern.len() {
        while matched > 0 && pattern[matched] != pattern[i] {
            matched = fail[matched - 1];
        }
        if pattern[matched] == pattern[i] {
            matched += 1;
        }
        fail[i] = matched;
    }
    fail
}

/// Number of (possibly overlapping) occurrences of `pattern` in `text`.
pub(crate) fn count(pattern: &[Letter], text: &[Letter]) -> u64 {
    debug_assert!(!pattern.is_empty());
    if pattern.len() > text.len() {
        return 0;
    }
    let fail = failure(pattern);
    let mut matched = 0usize;
    let mut hits = 0u64;
    for &l in text {
        while matched > 0 && pattern[matched] != l {
            matched = fail[matched - 1];
        }
        if pattern[matched] == l {
            matched += 1;
        }
        if matched == pattern.len() {
            hits += 1;
            matched = fail[matched - 1];
        }
    }
    hits
}

/// Occurrences of `pattern` in the cyclic word spelled by `text`: starting
/// positions in `0..text.len()` whose wrapped window matches. Zero when the
/// pattern is longer than the cycle.
pub(crate) fn count_cyclic(pattern: &[Letter], text: &[Letter]) -> u64 {
    debug_assert!(!pattern.is_empty());
    if pattern.len() > text.len() {
        return 0;
    }
    // Scan text twice so every wrapped window of the first copy is visible,
    // then keep only match starts inside the first copy.
    let fail = failure(pattern);
    let mut matched = 0usize;
    let mut hits = 0u64;
    let total = text.len() + pattern.len() - 1;
    for i in 0..total {
        let l = text[i % text.len()];
        while matched > 0 && pattern[matched] != l {
            matched = fail[matched - 1];
        }
        if pattern[matched] == l {
            matched += 1;
        }
        if matched == pattern.len() {
            if i + 1 >= pattern.len() && i + 1 - pattern.len() < text.len() {
                hits += 1;
            }
            matched = fail[matched - 1];
        }
    }
    hits
}

//! Small deterministic generator for the randomized audits.
//!
//! The property batteries must reproduce byte-identical reports from a seed,
//! across platforms and releases, so the generator is pinned here instead of
//! pulling in an external crate whose stream might change.

use crate::word::{Letter, Word};
use crate::wordmap::{VarLetter, WordMap};

/// SplitMix64: a tiny fixed-stream generator, plenty for audit sampling.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-enough value in `0..bound`; the modulo bias is irrelevant at
    /// the bounds the audits use.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below(0)");
        self.next_u64() % bound
    }

    /// A freely reduced word of exactly `len` letters: each letter is drawn
    /// uniformly among those not cancelling its predecessor.
    pub fn random_reduced_word(&mut self, rank: u8, len: usize) -> Word {
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        for _ in 0..len {
            let letter = match letters.last() {
                None => {
                    let code = self.below(2 * u64::from(rank));
                    Letter::new((code / 2) as u8, code % 2 == 1)
                }
                Some(&prev) => {
                    let forbidden = prev.inverted();
                    let forbidden_code =
                        2 * u64::from(forbidden.generator()) + u64::from(forbidden.is_inverse());
                    let mut code = self.below(2 * u64::from(rank) - 1);
                    if code >= forbidden_code {
                        code += 1;
                    }
                    Letter::new((code / 2) as u8, code % 2 == 1)
                }
            };
            letters.push(letter);
        }
        Word::from_letters(rank, letters)
    }

    /// A word map with a freely reduced body of exactly `len` variable
    /// letters over at most `arity` variables. Reduced by construction, so
    /// never trivial for `len >= 1`.
    pub fn random_word_map(&mut self, arity: u8, len: usize) -> WordMap {
        assert!(len >= 1, "a word map body cannot be empty");
        let mut letters: Vec<VarLetter> = Vec::with_capacity(len);
        for _ in 0..len {
            let letter = match letters.last() {
                None => {
                    let code = self.below(2 * u64::from(arity));
                    VarLetter::new((code / 2) as u8, code % 2 == 1)
                }
                Some(&prev) => {
                    let forbidden = prev.inverted();
                    let forbidden_code =
                        2 * u64::from(forbidden.index()) + u64::from(forbidden.is_inverse());
                    let mut code = self.below(2 * u64::from(arity) - 1);
                    if code >= forbidden_code {
                        code += 1;
                    }
                    VarLetter::new((code / 2) as u8, code % 2 == 1)
                }
            };
            letters.push(letter);
        }
        WordMap::from_letters(letters).expect("non-cancelling letters cannot reduce away")
    }
}

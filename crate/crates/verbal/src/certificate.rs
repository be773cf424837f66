//! Witness words and machine-checkable length certificates.
//!
//! For a word map of degree `d >= 2` the witness `h_K` multiplies the powers
//! `(a b^2i)^d (a b^2i+1)^d` for `i = 1..K`. Every factor is a single verbal
//! value, yet each of the first `K` family quasi-morphisms scores the product
//! exactly 1, an odd value that `d` cannot divide. Counting such indices
//! bounds the verbal length from below; letting `K` grow makes the bound
//! arbitrarily large.

use std::collections::BTreeSet;

use crate::counting::{
    certified_defect_bound, count_occurrences, family_halves, family_pattern, family_qm,
    CountingQM, DefectBound, Mode,
};
use crate::error::{Error, Result};
use crate::word::{enumerate_ball_unchecked, Word};
use crate::wordmap::WordMap;

/// Default factor-length budget for the substitution search behind
/// [`cyclically_reduced_verbal_element`].
pub const DEFAULT_ELEMENT_SEARCH_LEN: usize = 4;

/// Default cap on substitution tuples tried by the element search.
pub const DEFAULT_ELEMENT_SEARCH_TUPLES: u64 = 10_000_000;

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// The witness word `h_K`: the product of `(a b^2i)^d (a b^2i+1)^d` over
/// `i = 1..=K`, where `d >= 2` is the degree of `map`.
///
/// Each power factor is realized as a single verbal value through
/// [`WordMap::power_as_verbal_value`], so the result is a product of `2K`
/// verbal values. Before returning, the construction verifies that the
/// concatenation is reduced and positive and that the word contains exactly
/// one copy of each detector pattern up to `K` and none of their inverses;
/// any failure is reported, never ignored.
pub fn witness(map: &WordMap, k: u32) -> Result<Word> {
    let data = map.exponent_data();
    if data.degree < 2 {
        return Err(Error::DegreeTooSmall { degree: data.degree, needed: 2 });
    }
    if k == 0 {
        return Err(Error::ParameterOutOfRange("witness needs K >= 1".into()));
    }
    let d = data.degree as i64;
    let mut product = Word::identity(2);
    let mut expected_len = 0usize;
    for i in 1..=k {
        let (front, back) = family_halves(i);
        // both powers must be single verbal values of the map
        map.power_as_verbal_value(&front)?;
        map.power_as_verbal_value(&back)?;
        let factor = front.pow(d).mul(&back.pow(d));
        expected_len += factor.len();
        product = product.mul(&factor);
    }
    if product.len() != expected_len {
        return Err(Error::VerificationFailed(format!(
            "witness concatenation collapsed from {expected_len} to {} letters",
            product.len()
        )));
    }
    if product.letters().iter().any(|l| l.is_inverse()) {
        return Err(Error::VerificationFailed(
            "witness word contains an inverse letter".into(),
        ));
    }
    for i in 1..=k {
        let pattern = family_pattern(i);
        let hits = count_occurrences(&pattern, &product, Mode::Linear)?;
        if hits != 1 {
            return Err(Error::VerificationFailed(format!(
                "witness contains {hits} copies of detector {i}, expected 1"
            )));
        }
        let inverse_hits = count_occurrences(&pattern.inverse(), &product, Mode::Linear)?;
        if inverse_hits != 0 {
            return Err(Error::VerificationFailed(format!(
                "witness contains {inverse_hits} copies of the inverse of detector {i}"
            )));
        }
    }
    Ok(product)
}

/// Evidence that an element has large verbal length: the first `K` family
/// values, the indices the degree fails to divide, and the bound they force.
///
/// The bound is `ceil((count + M) / (M |w|))` when `count > 0`, else 1 for a
/// non-identity element and 0 for the identity. It is sound conditionally on
/// `M` being a valid exceptional-index constant; `M` is always recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidthCertificate {
    pub word_map: WordMap,
    pub element: Word,
    pub k: u32,
    pub m: u32,
    /// `H_i(element)` for `i = 1..=k`, linear mode.
    pub values: Vec<i64>,
    /// Indices whose value is not divisible by the degree.
    pub bad_indices: BTreeSet<u32>,
    pub lower_bound: u64,
}

impl WidthCertificate {
    /// Degree of the certified word map.
    pub fn degree(&self) -> u64 {
        self.word_map.exponent_data().degree
    }

    /// CSV with columns `i,h_i,divisible`.
    pub fn csv(&self) -> String {
        let d = self.degree() as i64;
        let mut out = String::from("i,h_i,divisible\n");
        for (idx, value) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", idx + 1, value, value % d == 0));
        }
        out
    }

    /// Single-line summary record in JSON form.
    pub fn summary(&self) -> String {
        let policy = certified_defect_bound(&family_pattern(1));
        format!(
            "{{\"w\":\"{}\",\"d\":{},\"K\":{},\"M\":{},\"count\":{},\"lower_bound\":{},\
             \"defect_bound_policy\":\"{}\",\
             \"soundness\":\"conditional on M being a valid exceptional-index constant\"}}",
            self.word_map,
            self.degree(),
            self.k,
            self.m,
            self.bad_indices.len(),
            self.lower_bound,
            policy,
        )
    }

    /// Plain-text table of the lower bound as a function of the prefix `K`,
    /// for external plotting.
    pub fn plot_table(&self) -> String {
        let d = self.degree() as i64;
        let w_len = self.word_map.len() as u64;
        let m = u64::from(self.m);
        let mut out = String::from("K lower_bound\n");
        let mut count = 0u64;
        for (idx, value) in self.values.iter().enumerate() {
            if value % d != 0 {
                count += 1;
            }
            let bound = if count > 0 {
                ceil_div(count + m, m * w_len)
            } else if !self.element.is_identity() {
                1
            } else {
                0
            };
            out.push_str(&format!("{} {}\n", idx + 1, bound));
        }
        out
    }
}

/// Evaluates the first `k` family quasi-morphisms on `element` and turns the
/// indices not divisible by the map's degree into a verbal-length lower
/// bound. Needs degree at least 2 and `k, m >= 1`.
pub fn certify_vl_lower_bound(
    map: &WordMap,
    element: &Word,
    k: u32,
    m: u32,
) -> Result<WidthCertificate> {
    let data = map.exponent_data();
    if data.degree < 2 {
        return Err(Error::DegreeTooSmall { degree: data.degree, needed: 2 });
    }
    if k == 0 {
        return Err(Error::ParameterOutOfRange("certificate needs K >= 1".into()));
    }
    if m == 0 {
        return Err(Error::ParameterOutOfRange("certificate needs M >= 1".into()));
    }
    let d = data.degree as i64;
    let values: Vec<i64> = (1..=k).map(|i| family_qm(i).value(element)).collect();
    let bad_indices: BTreeSet<u32> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| *v % d != 0)
        .map(|(idx, _)| idx as u32 + 1)
        .collect();
    let lower_bound = if !bad_indices.is_empty() {
        ceil_div(bad_indices.len() as u64 + u64::from(m), u64::from(m) * map.len() as u64)
    } else if !element.is_identity() {
        1
    } else {
        0
    };
    Ok(WidthCertificate {
        word_map: map.clone(),
        element: element.clone(),
        k,
        m,
        values,
        bad_indices,
        lower_bound,
    })
}

/// Finds a non-trivial cyclically reduced value in the subgroup generated by
/// the map's values over rank 2, for maps of degree 0.
///
/// Substitution tuples are tried in increasing ball order (shells by the
/// longest argument, lexicographic within a shell). If the first non-trivial
/// value is not cyclically reduced it starts and ends with mutually inverse
/// letters, and multiplying by its image under the `a`-`b` swap produces a
/// cyclically reduced product of two values. The result is verified to be
/// non-trivial, cyclically reduced, and a product of at most two values.
pub fn cyclically_reduced_verbal_element(
    map: &WordMap,
    max_factor_len: usize,
    max_tuples: u64,
) -> Result<Word> {
    let data = map.exponent_data();
    if data.degree != 0 {
        return Err(Error::DegreeNotZero { degree: data.degree });
    }
    let ball = enumerate_ball_unchecked(2, max_factor_len);
    // shell boundaries: words are emitted in length order
    let mut shell_end = vec![0usize; max_factor_len + 1];
    for (idx, word) in ball.iter().enumerate() {
        shell_end[word.len()] = idx + 1;
    }
    for r in 1..shell_end.len() {
        shell_end[r] = shell_end[r].max(shell_end[r - 1]);
    }
    let k = map.arity();
    let mut tried = 0u64;
    for radius in 0..=max_factor_len {
        let limit = shell_end[radius];
        let fresh = if radius == 0 { 0 } else { shell_end[radius - 1] };
        let mut indices = vec![0usize; k];
        'tuples: loop {
            // only tuples whose longest argument has length exactly `radius`
            if indices.iter().any(|&i| i >= fresh) || radius == 0 {
                tried += 1;
                if tried > max_tuples {
                    return Err(Error::BudgetExhausted(format!(
                        "no non-trivial value found in {tried} substitution tuples \
                         with factor length <= {max_factor_len}"
                    )));
                }
                let args: Vec<Word> = indices.iter().map(|&i| ball[i].clone()).collect();
                let h = map.substitute(&args)?;
                if !h.is_identity() {
                    return finish_element(map, &args, h);
                }
            }
            // odometer, last position fastest
            let mut pos = k;
            loop {
                if pos == 0 {
                    break 'tuples;
                }
                pos -= 1;
                indices[pos] += 1;
                if indices[pos] < limit {
                    break;
                }
                indices[pos] = 0;
            }
        }
    }
    Err(Error::BudgetExhausted(format!(
        "no non-trivial value found in {tried} substitution tuples \
         with factor length <= {max_factor_len}"
    )))
}

fn finish_element(map: &WordMap, args: &[Word], h: Word) -> Result<Word> {
    let result = if h.is_cyclically_reduced() {
        h
    } else {
        let swapped_args: Vec<Word> = args.iter().map(|a| a.swap_generators(0, 1)).collect();
        let h_swapped = map.substitute(&swapped_args)?;
        if h_swapped != h.swap_generators(0, 1) {
            return Err(Error::VerificationFailed(
                "swapped substitution disagrees with the swapped value".into(),
            ));
        }
        h.mul(&h_swapped)
    };
    if result.is_identity() {
        return Err(Error::VerificationFailed("element collapsed to the identity".into()));
    }
    if !result.is_cyclically_reduced() {
        return Err(Error::VerificationFailed("element is not cyclically reduced".into()));
    }
    Ok(result)
}

/// Evidence for a positive stable lower bound on a degree-0 map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvlEvidence {
    pub word_map: WordMap,
    /// The cyclically reduced value whose powers are measured.
    pub element: Word,
    /// Certified defect bound used in the denominator, with its policy.
    pub defect_bound: DefectBound,
    /// `(n, H(element^n))` for `n = 1..=n_max`; every value is at least `n`.
    pub powers: Vec<(u32, i64)>,
    /// The stable bound is `1 / denominator`.
    pub denominator: u64,
}

impl SvlEvidence {
    /// The bound as an exact fraction `(1, denominator)`.
    pub fn bound(&self) -> (u64, u64) {
        (1, self.denominator)
    }

    /// CSV of the measured power values, columns `n,h`.
    pub fn csv(&self) -> String {
        let mut out = String::from("n,h\n");
        for (n, h) in &self.powers {
            out.push_str(&format!("{n},{h}\n"));
        }
        out
    }

    /// Single-line summary record in JSON form.
    pub fn summary(&self) -> String {
        format!(
            "{{\"w\":\"{}\",\"element\":\"{}\",\"defect_bound\":{},\
             \"defect_bound_policy\":\"{}\",\"svl_lower_bound\":\"1/{}\"}}",
            self.word_map,
            self.element,
            self.defect_bound.value,
            self.defect_bound.policy,
            self.denominator,
        )
    }
}

/// For a degree-0 map: constructs a cyclically reduced value `g`, measures
/// the counting quasi-morphism on `g` against the powers `g^n` for
/// `n <= n_max` (each value must reach `n`), and emits the stable bound
/// `1 / (defect_bound * |w|)`.
///
/// A positive degree is rejected: high powers are then single values and the
/// stable length vanishes identically.
pub fn certify_svl_positive(
    map: &WordMap,
    n_max: u32,
    max_factor_len: usize,
) -> Result<SvlEvidence> {
    let data = map.exponent_data();
    if data.degree != 0 {
        return Err(Error::DegreeNotZero { degree: data.degree });
    }
    let element =
        cyclically_reduced_verbal_element(map, max_factor_len, DEFAULT_ELEMENT_SEARCH_TUPLES)?;
    if element.len() < 2 {
        // a single letter degenerates toward a homomorphism
        return Err(Error::VerificationFailed("element is a single generator".into()));
    }
    let defect_bound = certified_defect_bound(&element);
    let qm = CountingQM::new(element.clone(), Mode::Cyclic)?;
    let mut powers = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let value = qm.value(&element.pow(i64::from(n)));
        if value < i64::from(n) {
            return Err(Error::VerificationFailed(format!(
                "H(g^{n}) = {value} fell below {n}"
            )));
        }
        powers.push((n, value));
    }
    let denominator = defect_bound.value * map.len() as u64;
    Ok(SvlEvidence { word_map: map.clone(), element, defect_bound, powers, denominator })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{self_overlap_free, DefectPolicy};

    fn map(text: &str) -> WordMap {
        WordMap::parse(text).unwrap()
    }

    fn w(text: &str) -> Word {
        Word::parse(text, 2).unwrap()
    }

    #[test]
    fn witness_k1_exact_word() {
        let m = map("x1 x2 x1 x2^-1");
        let h = witness(&m, 1).unwrap();
        assert_eq!(h, w("abbabbabbbabbb"));
        assert_eq!(h.to_string(), "ab^2ab^2ab^3ab^3");
        // the detector sits at position 3 and nowhere else
        let g1 = family_pattern(1);
        let hit: Vec<usize> = (0..=h.len() - g1.len())
            .filter(|&p| h.letters()[p..p + g1.len()] == *g1.letters())
            .collect();
        assert_eq!(hit, vec![3]);
    }

    #[test]
    fn witness_k2_profile() {
        let m = map("x1 x2 x1 x2^-1");
        let h = witness(&m, 2).unwrap();
        let expected = w("abb")
            .pow(2)
            .mul(&w("abbb").pow(2))
            .mul(&w("abbbb").pow(2))
            .mul(&w("abbbbb").pow(2));
        assert_eq!(h, expected);
        for i in 1..=2 {
            assert_eq!(family_qm(i).value(&h), 1);
        }
        for i in 3..=12 {
            assert_eq!(family_qm(i).value(&h), 0);
        }
    }

    #[test]
    fn witness_values_for_degree_three() {
        let m = map("x1^3");
        let h = witness(&m, 5).unwrap();
        for i in 1..=5 {
            assert_eq!(family_qm(i).value(&h), 1);
        }
        for i in 6..=20 {
            assert_eq!(family_qm(i).value(&h), 0);
        }
    }

    #[test]
    fn witness_rejects_small_degree() {
        assert!(matches!(
            witness(&map("x2 x1 x2^-2"), 3),
            Err(Error::DegreeTooSmall { degree: 1, needed: 2 })
        ));
        assert!(matches!(
            witness(&map("[x1,x2]"), 3),
            Err(Error::DegreeTooSmall { degree: 0, needed: 2 })
        ));
        assert!(matches!(
            witness(&map("x1^2"), 0),
            Err(Error::ParameterOutOfRange(_))
        ));
    }

    #[test]
    fn certificate_for_witness_120() {
        let m = map("x1 x2 x1 x2^-1");
        let h = witness(&m, 120).unwrap();
        let cert = certify_vl_lower_bound(&m, &h, 120, 3).unwrap();
        assert_eq!(cert.bad_indices.len(), 120);
        assert_eq!(cert.lower_bound, 11); // ceil(123 / 12)
        assert!(cert.lower_bound >= 120 / (3 * 4));
        // a witness is a product of 2K values, so the bound cannot exceed 2K
        assert!(cert.lower_bound <= 240);
    }

    #[test]
    fn certificate_on_single_value_and_identity() {
        let m = map("x1 x2 x1 x2^-1");
        let g = m.substitute(&[w("a"), w("b")]).unwrap();
        let cert = certify_vl_lower_bound(&m, &g, 60, 3).unwrap();
        assert!(cert.bad_indices.len() as u64 <= 3 * (m.len() as u64 - 1));
        assert!(cert.lower_bound <= 1);

        let id_cert = certify_vl_lower_bound(&m, &Word::identity(2), 10, 3).unwrap();
        assert!(id_cert.bad_indices.is_empty());
        assert_eq!(id_cert.lower_bound, 0);
    }

    #[test]
    fn certificate_reports() {
        let m = map("x1 x2 x1 x2^-1");
        let h = witness(&m, 4).unwrap();
        let cert = certify_vl_lower_bound(&m, &h, 4, 3).unwrap();
        let csv = cert.csv();
        assert!(csv.starts_with("i,h_i,divisible\n1,1,false\n"));
        let summary = cert.summary();
        assert!(summary.contains("\"w\":\"x1x2x1x2^-1\""));
        assert!(summary.contains("\"d\":2"));
        assert!(summary.contains("\"count\":4"));
        let table = cert.plot_table();
        assert!(table.starts_with("K lower_bound\n1 1\n"));
    }

    #[test]
    fn lower_bound_monotone_in_k() {
        let m = map("x1 x2 x1 x2^-1");
        let mut last = 0;
        for k in [12, 60, 120] {
            let h = witness(&m, k).unwrap();
            let cert = certify_vl_lower_bound(&m, &h, k, 3).unwrap();
            assert!(cert.lower_bound >= last);
            last = cert.lower_bound;
        }
        assert_eq!(last, 11);
    }

    #[test]
    fn any_target_bound_is_reachable() {
        // K = target * M * |w| pushes the certified bound past the target
        let m = map("x1 x2 x1 x2^-1");
        let target = 7u64;
        let k = (target * 3 * m.len() as u64) as u32;
        let h = witness(&m, k).unwrap();
        let cert = certify_vl_lower_bound(&m, &h, k, 3).unwrap();
        assert!(cert.lower_bound >= target, "{} < {target}", cert.lower_bound);
    }

    #[test]
    fn commutator_element_is_the_standard_one() {
        let m = map("[x1,x2]");
        let g = cyclically_reduced_verbal_element(&m, 4, 1_000_000).unwrap();
        assert_eq!(g, w("abAB"));
        assert!(g.cyclic_reduce().conjugator().is_identity());
    }

    #[test]
    fn double_commutator_element_is_found_and_verified() {
        let m = map("[[x1,x2],[x3,x4]]");
        let g = cyclically_reduced_verbal_element(&m, 2, 10_000_000).unwrap();
        assert!(!g.is_identity());
        assert!(g.is_cyclically_reduced());
        assert!(g.cyclic_reduce().conjugator().is_identity());
    }

    #[test]
    fn element_search_rejects_positive_degree() {
        assert!(matches!(
            cyclically_reduced_verbal_element(&map("x1^2"), 4, 1000),
            Err(Error::DegreeNotZero { degree: 2 })
        ));
    }

    #[test]
    fn svl_certificate_for_the_commutator() {
        let m = map("[x1,x2]");
        let ev = certify_svl_positive(&m, 10, 4).unwrap();
        assert_eq!(ev.element, w("abAB"));
        assert!(self_overlap_free(&ev.element));
        assert_eq!(ev.defect_bound.value, 3);
        assert_eq!(ev.defect_bound.policy, DefectPolicy::SelfOverlapFree);
        assert_eq!(ev.denominator, 12);
        assert_eq!(ev.bound(), (1, 12));
        for (n, h) in &ev.powers {
            assert!(*h >= i64::from(*n));
        }
        // growth between consecutive powers
        for pair in ev.powers.windows(2) {
            assert!(pair[1].1 > pair[0].1);
        }
        assert!(ev.summary().contains("\"svl_lower_bound\":\"1/12\""));
    }

    #[test]
    fn svl_certificate_rejects_positive_degree() {
        assert!(matches!(
            certify_svl_positive(&map("x1 x2 x1 x2^-1"), 5, 4),
            Err(Error::DegreeNotZero { degree: 2 })
        ));
    }
}

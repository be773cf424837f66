//! Word maps: reduced words in the variables `x1..x9`, evaluated on group
//! tuples by substitution.
//!
//! The exponent-sum vector of a map and the gcd of its non-zero entries
//! (the map's degree) control which powers are single verbal values: Bézout
//! coefficients for the degree turn `g^d` into one substitution instance.

use std::fmt;

use crate::error::{Error, Result};
use crate::word::Word;

/// Largest variable index the grammar admits (`x1` through `x9`).
pub const MAX_ARITY: u8 = 9;

/// One variable letter in a word-map body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarLetter {
    index: u8,
    inverse: bool,
}

impl VarLetter {
    pub fn new(index: u8, inverse: bool) -> Self {
        assert!(index < MAX_ARITY, "variable index out of range");
        VarLetter { index, inverse }
    }

    /// Zero-based variable index.
    pub fn index(self) -> u8 {
        self.index
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn inverted(self) -> Self {
        VarLetter { index: self.index, inverse: !self.inverse }
    }

    fn cancels(self, other: VarLetter) -> bool {
        self.index == other.index && self.inverse != other.inverse
    }
}

/// A non-trivial freely reduced word in the variables `x1..xk`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WordMap {
    arity: u8,
    body: Vec<VarLetter>,
}

/// Exponent sums per variable, their gcd, and Bézout coefficients for it.
///
/// `degree` is the gcd of the absolute values of the non-zero exponent sums,
/// or 0 when every sum vanishes. When `degree >= 1` the coefficients satisfy
/// `sum(bezout[i] * exponent_sums[i]) == degree`; otherwise they are all 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentData {
    pub exponent_sums: Vec<i64>,
    pub degree: u64,
    pub bezout: Vec<i64>,
}

fn reduce_var_letters(letters: impl IntoIterator<Item = VarLetter>) -> Vec<VarLetter> {
    let mut stack: Vec<VarLetter> = Vec::new();
    for l in letters {
        if stack.last().is_some_and(|top| top.cancels(l)) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b == g == gcd(|a|, |b|)`
/// and `g >= 0`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return (a.abs(), a.signum(), 0);
    }
    let (g, s, t) = ext_gcd(b, a % b);
    // g = s*b + t*(a - (a/b)*b) = t*a + (s - (a/b)*t)*b
    (g, t, s - (a / b) * t)
}

impl WordMap {
    /// Builds a map from raw variable letters; the body is freely reduced and
    /// must stay non-trivial. Arity is one more than the largest index used.
    pub fn from_letters(letters: impl IntoIterator<Item = VarLetter>) -> Result<Self> {
        let body = reduce_var_letters(letters);
        if body.is_empty() {
            return Err(Error::TrivialWordMap);
        }
        let arity = body.iter().map(|l| l.index()).max().unwrap() + 1;
        Ok(WordMap { arity, body })
    }

    /// Parses the word-map grammar: variables `x1..x9`, optional `^` integer
    /// exponents, and commutator brackets `[u,v]` expanding to
    /// `u v u^-1 v^-1`. Whitespace between tokens is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parser = MapParser { bytes: text.as_bytes(), pos: 0 };
        parser.skip_ws();
        let letters = parser.body()?;
        parser.skip_ws();
        if parser.pos < parser.bytes.len() {
            return Err(Error::Syntax {
                pos: parser.pos,
                message: format!("unexpected {:?}", parser.bytes[parser.pos] as char),
            });
        }
        WordMap::from_letters(letters)
    }

    /// Number of variables, `k`.
    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    /// Number of variable letters in the reduced body, `|w|`.
    pub fn len(&self) -> usize {
        self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the body is non-trivial by construction
    }

    pub fn body(&self) -> &[VarLetter] {
        &self.body
    }

    /// Exponent sums, degree, and Bézout coefficients. The Bézout identity
    /// is checked before returning.
    pub fn exponent_data(&self) -> ExponentData {
        let mut sums = vec![0i64; self.arity()];
        for l in &self.body {
            sums[l.index() as usize] += if l.is_inverse() { -1 } else { 1 };
        }
        let mut degree = 0i64;
        let mut bezout = vec![0i64; self.arity()];
        for (i, &e) in sums.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if degree == 1 {
                break; // the gcd cannot shrink further
            }
            if degree == 0 {
                degree = e.abs();
                bezout[i] = e.signum();
            } else {
                let (g, s, t) = ext_gcd(degree, e);
                for b in bezout.iter_mut() {
                    *b *= s;
                }
                bezout[i] = t;
                degree = g;
            }
        }
        let check: i64 = sums.iter().zip(&bezout).map(|(e, a)| e * a).sum();
        assert_eq!(check, degree, "Bézout identity failed");
        ExponentData { exponent_sums: sums, degree: degree as u64, bezout }
    }

    /// Replaces each variable letter by the matching argument (inverted for
    /// negative letters) and reduces. All arguments must share one rank and
    /// there must be exactly one per variable.
    pub fn substitute(&self, args: &[Word]) -> Result<Word> {
        if args.len() != self.arity() {
            return Err(Error::ArityMismatch { arity: self.arity(), given: args.len() });
        }
        let rank = args[0].rank();
        for arg in &args[1..] {
            if arg.rank() != rank {
                return Err(Error::RankMismatch { left: rank, right: arg.rank() });
            }
        }
        let mut out = Word::identity(rank);
        for l in &self.body {
            let arg = &args[l.index() as usize];
            if l.is_inverse() {
                out = out.mul(&arg.inverse());
            } else {
                out = out.mul(arg);
            }
        }
        Ok(out)
    }

    /// Arguments exhibiting `g^degree` as a single value of this map: the
    /// `i`-th argument is `g` raised to the `i`-th Bézout coefficient, so the
    /// substitution collapses inside the cyclic group generated by `g`. The
    /// identity `w(args) == g^degree` is verified before returning.
    ///
    /// Fails with [`Error::DegreeTooSmall`] when the degree is 0, where no
    /// such expression exists.
    pub fn power_as_verbal_value(&self, g: &Word) -> Result<Vec<Word>> {
        let data = self.exponent_data();
        if data.degree == 0 {
            return Err(Error::DegreeTooSmall { degree: 0, needed: 1 });
        }
        let args: Vec<Word> = data.bezout.iter().map(|&a| g.pow(a)).collect();
        let value = self.substitute(&args)?;
        let expected = g.pow(data.degree as i64);
        if value != expected {
            return Err(Error::VerificationFailed(format!(
                "power expression produced {value}, expected {expected}"
            )));
        }
        Ok(args)
    }
}

impl fmt::Display for WordMap {
    /// Prints runs with caret exponents, e.g. `x1x2x1x2^-1`; output parses
    /// back to the same map.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        while i < self.body.len() {
            let l = self.body[i];
            let mut j = i + 1;
            while j < self.body.len() && self.body[j] == l {
                j += 1;
            }
            let run = (j - i) as i64;
            write!(f, "x{}", l.index() + 1)?;
            if l.is_inverse() {
                write!(f, "^-{run}")?;
            } else if run > 1 {
                write!(f, "^{run}")?;
            }
            i = j;
        }
        Ok(())
    }
}

struct MapParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl MapParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && (self.bytes[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    /// BODY := TERM+
    fn body(&mut self) -> Result<Vec<VarLetter>> {
        let mut letters = Vec::new();
        let mut any = false;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'x') | Some(b'[') => {
                    letters.extend(self.term()?);
                    any = true;
                }
                _ => break,
            }
        }
        if !any {
            return Err(Error::Syntax {
                pos: self.pos,
                message: "expected 'x<digit>' or '['".into(),
            });
        }
        Ok(letters)
    }

    /// TERM := (VAR | '[' BODY ',' BODY ']') EXP?
    fn term(&mut self) -> Result<Vec<VarLetter>> {
        let base = match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let Some(d @ b'1'..=b'9') = self.peek() else {
                    return Err(Error::Syntax {
                        pos: self.pos,
                        message: "expected a digit 1-9 after 'x'".into(),
                    });
                };
                self.pos += 1;
                vec![VarLetter::new(d - b'1', false)]
            }
            Some(b'[') => {
                self.pos += 1;
                let left = self.body()?;
                self.skip_ws();
                if self.peek() != Some(b',') {
                    return Err(Error::Syntax { pos: self.pos, message: "expected ','".into() });
                }
                self.pos += 1;
                let right = self.body()?;
                self.skip_ws();
                if self.peek() != Some(b']') {
                    return Err(Error::Syntax { pos: self.pos, message: "expected ']'".into() });
                }
                self.pos += 1;
                let mut expanded = left.clone();
                expanded.extend(&right);
                expanded.extend(left.iter().rev().map(|l| l.inverted()));
                expanded.extend(right.iter().rev().map(|l| l.inverted()));
                expanded
            }
            _ => {
                return Err(Error::Syntax {
                    pos: self.pos,
                    message: "expected 'x<digit>' or '['".into(),
                })
            }
        };
        self.skip_ws();
        let mut exponent = 1i64;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let negative = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let start = self.pos;
            let mut value = 0i64;
            while let Some(d @ b'0'..=b'9') = self.peek() {
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(i64::from(d - b'0')))
                    .ok_or(Error::Syntax { pos: self.pos, message: "exponent overflow".into() })?;
                self.pos += 1;
            }
            if self.pos == start {
                return Err(Error::Syntax {
                    pos: self.pos,
                    message: "expected digits after '^'".into(),
                });
            }
            if value > 10_000 {
                return Err(Error::Syntax { pos: start, message: "exponent too large".into() });
            }
            exponent = if negative { -value } else { value };
        }
        let mut expanded = Vec::new();
        if exponent >= 0 {
            for _ in 0..exponent {
                expanded.extend(&base);
            }
        } else {
            let inverse: Vec<VarLetter> = base.iter().rev().map(|l| l.inverted()).collect();
            for _ in 0..-exponent {
                expanded.extend(&inverse);
            }
        }
        Ok(expanded)
    }
}

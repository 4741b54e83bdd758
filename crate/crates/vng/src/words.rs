//! Finite words over the alphabet, complete antichains of the prefix order,
//! and eventually periodic points of Cantor space in canonical form.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{Letter, Perm};

/// A finite word over `{0, .., n-1}`. Prints 1-based: digits while every
/// letter fits in one digit, space-separated numbers beyond that.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn push(&mut self, x: Letter) {
        self.0.push(x);
    }

    pub fn appended(&self, x: Letter) -> Word {
        let mut w = self.clone();
        w.push(x);
        w
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// `other = self‖rest` gives `rest`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        if prefix.is_prefix_of(self) {
            Some(Word(self.0[prefix.len()..].to_vec()))
        } else {
            None
        }
    }

    pub fn comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Letterwise image under a permutation of the alphabet.
    pub fn permuted(&self, g: &Perm) -> Word {
        Word(self.0.iter().map(|&x| g.apply(x)).collect())
    }

    pub fn validate_degree(&self, degree: u8) -> Result<()> {
        for &x in &self.0 {
            if x >= degree {
                return Err(Error::LetterOutOfRange { letter: x + 1, degree });
            }
        }
        Ok(())
    }

    /// Parses 1-based text: "121" digit-wise, or "10 2 11" space-separated.
    /// "-" and "∅" denote the empty word.
    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "-" || s == "∅" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        if s.contains(char::is_whitespace) {
            for tok in s.split_whitespace() {
                let v: u16 = tok
                    .parse()
                    .map_err(|_| Error::BadWord(format!("bad letter {tok:?}")))?;
                if v == 0 || v > u8::MAX as u16 {
                    return Err(Error::BadWord(format!("letter {v} out of range")));
                }
                letters.push((v - 1) as u8);
            }
        } else {
            for c in s.chars() {
                let v = c
                    .to_digit(10)
                    .ok_or_else(|| Error::BadWord(format!("bad digit {c:?} in {s:?}")))?;
                if v == 0 {
                    return Err(Error::BadWord("letter 0 out of range".into()));
                }
                letters.push((v - 1) as u8);
            }
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().any(|&x| x > 8) {
            for (k, x) in self.0.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", *x as u16 + 1)?;
            }
            Ok(())
        } else {
            for x in &self.0 {
                write!(f, "{}", x + 1)?;
            }
            Ok(())
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "∅")
        } else {
            fmt::Display::fmt(self, f)
        }
    }
}

/// True when the words are pairwise prefix-incomparable and the cones they
/// span exhaust the space: the cone measures `n^{-|w|}` must add up to 1.
pub fn is_complete_antichain(words: &[Word], degree: u8) -> bool {
    if degree < 2 || words.is_empty() {
        return false;
    }
    for (i, a) in words.iter().enumerate() {
        if a.validate_degree(degree).is_err() {
            return false;
        }
        for b in &words[i + 1..] {
            if a.comparable(b) {
                return false;
            }
        }
    }
    let max_len = words.iter().map(Word::len).max().unwrap();
    let mut total: u128 = 0;
    let full = (degree as u128).pow(max_len as u32);
    for w in words {
        total += (degree as u128).pow((max_len - w.len()) as u32);
    }
    total == full
}

/// The coarsest complete antichain containing every listed word: expand from
/// the root, splitting any member that is a proper prefix of a target.
pub fn antichain_containing(words: &[Word], degree: u8) -> Vec<Word> {
    let mut frontier = vec![Word::empty()];
    let mut out = Vec::new();
    while let Some(w) = frontier.pop() {
        if words.iter().any(|t| w.is_prefix_of(t) && w.len() < t.len()) {
            for x in (0..degree).rev() {
                frontier.push(w.appended(x));
            }
        } else {
            out.push(w);
        }
    }
    out.sort();
    out
}

/// An eventually periodic point `pre·per^ω`, kept in canonical form: the
/// period is primitive and the preperiod is as short as possible. Two points
/// are equal as infinite sequences exactly when the canonical forms match.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EPPoint {
    preperiod: Word,
    period: Word,
}

impl EPPoint {
    pub fn new(preperiod: Word, period: Word) -> Result<EPPoint> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let mut pre = preperiod.0;
        let mut per = period.0;
        // shrink the period to its primitive root
        let plen = per.len();
        for d in 1..=plen {
            if plen % d == 0 && per.chunks(d).all(|c| c == &per[..d]) {
                per.truncate(d);
                break;
            }
        }
        // absorb preperiod letters that match the tail of the period,
        // rotating the period as they move
        while let Some(&a) = pre.last() {
            if *per.last().unwrap() == a {
                pre.pop();
                per.rotate_right(1);
            } else {
                break;
            }
        }
        Ok(EPPoint {
            preperiod: Word(pre),
            period: Word(per),
        })
    }

    pub fn periodic(period: Word) -> Result<EPPoint> {
        EPPoint::new(Word::empty(), period)
    }

    pub fn preperiod(&self) -> &Word {
        &self.preperiod
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn validate_degree(&self, degree: u8) -> Result<()> {
        self.preperiod.validate_degree(degree)?;
        self.period.validate_degree(degree)
    }

    /// The i-th letter of the infinite sequence.
    pub fn letter(&self, i: usize) -> Letter {
        if i < self.preperiod.len() {
            self.preperiod.0[i]
        } else {
            self.period.0[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// First `k` letters as a finite word.
    pub fn prefix(&self, k: usize) -> Word {
        Word((0..k).map(|i| self.letter(i)).collect())
    }

    /// True when `w` is a prefix of the sequence.
    pub fn has_prefix(&self, w: &Word) -> bool {
        w.0.iter().enumerate().all(|(i, &x)| self.letter(i) == x)
    }

    /// The point with the first `k` letters removed.
    pub fn shifted(&self, k: usize) -> EPPoint {
        let mut pre = self.preperiod.0.clone();
        let mut per = self.period.0.clone();
        let drop = k.min(pre.len());
        pre.drain(..drop);
        let mut rest = k - drop;
        rest %= per.len();
        per.rotate_left(rest);
        EPPoint::new(Word(pre), Word(per)).expect("period stays nonempty")
    }

    /// The point `w‖self`.
    pub fn prepended(&self, w: &Word) -> EPPoint {
        EPPoint::new(w.concat(&self.preperiod), self.period.clone())
            .expect("period stays nonempty")
    }

    /// Letterwise image under a permutation of the alphabet.
    pub fn permuted(&self, g: &Perm) -> EPPoint {
        EPPoint::new(self.preperiod.permuted(g), self.period.permuted(g))
            .expect("period stays nonempty")
    }

    /// Parses "pre(per)", e.g. "12(3)" or "(21)". The parentheses are
    /// required even when the preperiod is empty.
    pub fn parse(s: &str) -> Result<EPPoint> {
        let s = s.trim();
        let open = s
            .find('(')
            .ok_or_else(|| Error::BadPoint(format!("{s:?} lacks a (period)")))?;
        let close = s
            .rfind(')')
            .filter(|&c| c == s.len() - 1 && c > open)
            .ok_or_else(|| Error::BadPoint(format!("{s:?} lacks a closing ')'")))?;
        let pre = Word::parse(&s[..open])?;
        let per = Word::parse(&s[open + 1..close])?;
        if per.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        EPPoint::new(pre, per)
    }
}

impl fmt::Display for EPPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.preperiod, self.period)
    }
}

impl fmt::Debug for EPPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    let gcd = {
        let (mut x, mut y) = (a, b);
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    a / gcd * b
}

/// Letter-by-letter equality test that never consults the canonical form:
/// two eventually periodic sequences agree everywhere iff they agree on the
/// first `|pre₁| + |pre₂| + 2·lcm(|per₁|, |per₂|)` letters.
pub fn same_sequence(a: &EPPoint, b: &EPPoint) -> bool {
    let bound = a.preperiod.len()
        + b.preperiod.len()
        + 2 * lcm(a.period.len(), b.period.len());
    (0..bound).all(|i| a.letter(i) == b.letter(i))
}

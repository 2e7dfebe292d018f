//! Reduced words in a free group of finite rank.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A generator or its inverse, encoded as `2·generator + inverse`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter(u8);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self((2 * generator + usize::from(inverse)) as u8)
    }

    pub fn from_index(index: usize) -> Self {
        Self(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Self(self.0 ^ 1)
    }

    /// `A`, `B`, ... for generators; lowercase for inverses.
    pub fn symbol(self) -> char {
        let c = (b'A' + self.generator() as u8) as char;
        if self.is_inverse() {
            c.to_ascii_lowercase()
        } else {
            c
        }
    }

    /// All `2r` letters of rank `r`.
    pub fn all(rank: usize) -> impl Iterator<Item = Letter> {
        (0..2 * rank).map(Letter::from_index)
    }
}

/// A word in the letters; ordered shortlex.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self(letters)
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

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn pop(&mut self) -> Option<Letter> {
        self.0.pop()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[1] != p[0].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced() && (self.len() < 2 || self.0[0] != self.0[self.len() - 1].inverse())
    }

    /// Free reduction.
    pub fn reduced(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Self {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        Self(w).reduced()
    }

    pub fn prefix(&self, k: usize) -> Self {
        Self(self.0[..k].to_vec())
    }

    pub fn split_at(&self, k: usize) -> (Self, Self) {
        let (a, b) = self.0.split_at(k);
        (Self(a.to_vec()), Self(b.to_vec()))
    }

    /// `self^n` without reduction.
    pub fn repeat(&self, n: usize) -> Self {
        Self(self.0.repeat(n))
    }

    /// Parses `A`, `b`, `ABa`, ... with `e` or the empty string for the
    /// identity. Generators beyond `rank` are rejected.
    pub fn parse(s: &str, rank: usize) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "1" {
            return Ok(Self::empty());
        }
        s.chars()
            .map(|c| {
                let upper = c.to_ascii_uppercase();
                if !upper.is_ascii_uppercase() || (upper as u8 - b'A') as usize >= rank {
                    return Err(Error::UnknownGenerator(c.to_string()));
                }
                Ok(Letter::new((upper as u8 - b'A') as usize, c.is_ascii_lowercase()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("e");
        }
        self.0.iter().try_for_each(|l| write!(f, "{}", l.symbol()))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Number of reduced words of length `len` in rank `rank`.
pub fn sphere_size(rank: usize, len: usize) -> u64 {
    match (rank, len) {
        (_, 0) => 1,
        (0, _) => 0,
        _ => 2 * rank as u64 * (2 * rank as u64 - 1).saturating_pow(len as u32 - 1),
    }
}

/// Number of reduced words of length `1..=radius`.
pub fn ball_size(rank: usize, radius: usize) -> u64 {
    (1..=radius).fold(0u64, |acc, l| acc.saturating_add(sphere_size(rank, l)))
}

/// Depth-first walk over the reduced extensions of `prefix` up to length
/// `max_len`, carrying a state that is extended one letter at a time.
/// `prefix` itself is visited first; siblings are visited in letter order.
pub fn walk<S, Step, Visit>(rank: usize, max_len: usize, prefix: &mut Word, state: &S, step: &Step, visit: &mut Visit)
where
    Step: Fn(&S, Letter) -> S,
    Visit: FnMut(&Word, &S),
{
    visit(prefix, state);
    if prefix.len() >= max_len {
        return;
    }
    let last = prefix.last();
    for l in Letter::all(rank) {
        if Some(l.inverse()) == last {
            continue;
        }
        let next = step(state, l);
        prefix.push(l);
        walk(rank, max_len, prefix, &next, step, visit);
        prefix.pop();
    }
}

/// All reduced words of exactly length `len`, shortlex order.
pub fn reduced_words(rank: usize, len: usize) -> Vec<Word> {
    let mut out = Vec::with_capacity(sphere_size(rank, len) as usize);
    walk(rank, len, &mut Word::empty(), &(), &|_, _| (), &mut |w: &Word, _| {
        if w.len() == len {
            out.push(w.clone());
        }
    });
    out
}

/// Reduced words whose cyclic rotations are all reduced.
pub fn cyclically_reduced_words(rank: usize, len: usize) -> Vec<Word> {
    reduced_words(rank, len).into_iter().filter(Word::is_cyclically_reduced).collect()
}

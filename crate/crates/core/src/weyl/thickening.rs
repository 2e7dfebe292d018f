use std::cmp::Ordering;
use std::fmt;

use super::element::WeylElement;
use super::face::{relative_position_coset, FaceType};
use crate::error::{Error, Result};

/// Lookup tables for `S_d` indexed by lexicographic rank.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    dim: usize,
    elements: Vec<WeylElement>,
    lengths: Vec<usize>,
    longest_left: Vec<usize>,
    lower_covers: Vec<Vec<usize>>,
}

impl WeylGroup {
    pub fn new(dim: usize) -> Self {
        let elements = WeylElement::all(dim);
        let lengths = elements.iter().map(WeylElement::length).collect();
        let longest_left = elements.iter().map(|w| w.left_by_longest().lex_rank()).collect();
        let lower_covers = elements
            .iter()
            .map(|w| w.lower_covers().iter().map(WeylElement::lex_rank).collect())
            .collect();
        Self { dim, elements, lengths, longest_left, lower_covers }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, index: usize) -> &WeylElement {
        &self.elements[index]
    }

    pub fn length(&self, index: usize) -> usize {
        self.lengths[index]
    }

    /// Index of `w₀ · w`.
    pub fn longest_times(&self, index: usize) -> usize {
        self.longest_left[index]
    }

    pub fn lower_covers(&self, index: usize) -> &[usize] {
        &self.lower_covers[index]
    }
}

/// A subset of `S_d` stored as a bitset over lexicographic ranks.
///
/// Construction does not require downward closure; [`Thickening::classify`]
/// reports it along with the fat/slim/balanced flags.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Thickening {
    dim: usize,
    order: usize,
    bits: Vec<u64>,
}

/// Exact combinatorial properties of a subset of `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThickeningClass {
    pub downward_closed: bool,
    /// `W = Th ∪ w₀Th`.
    pub fat: bool,
    /// `Th ∩ w₀Th = ∅`.
    pub slim: bool,
    /// `W = Th ⊔ w₀Th`.
    pub balanced: bool,
    /// Left invariance under the face stabilizer, when a face was given.
    pub stabilizer_invariant: Option<bool>,
}

impl Thickening {
    pub fn empty(dim: usize) -> Self {
        let order: usize = (1..=dim).product();
        Self { dim, order, bits: vec![0; order.div_ceil(64)] }
    }

    pub fn from_elements<'a, I>(dim: usize, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a WeylElement>,
    {
        let mut t = Self::empty(dim);
        for w in elements {
            if w.dim() != dim {
                return Err(Error::DimMismatch { expected: dim, found: w.dim() });
            }
            t.insert_index(w.lex_rank());
        }
        Ok(t)
    }

    pub fn from_indices(dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut t = Self::empty(dim);
        for i in indices {
            t.insert_index(i);
        }
        t
    }

    /// Parses one-line permutations separated by `|`, e.g. `123|213|132`.
    pub fn parse(s: &str) -> Result<Self> {
        let elems: Vec<WeylElement> =
            s.trim().split('|').filter(|t| !t.trim().is_empty()).map(WeylElement::parse).collect::<Result<_>>()?;
        let dim = elems.first().map(WeylElement::dim).ok_or_else(|| Error::Invalid("empty thickening".into()))?;
        Self::from_elements(dim, &elems)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert_index(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        w.dim() == self.dim && self.contains_index(w.lex_rank())
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.order).filter(|&i| self.contains_index(i))
    }

    /// Members sorted by length, then by their smallest reduced word.
    pub fn members(&self) -> Vec<WeylElement> {
        let mut m: Vec<WeylElement> = self.indices().map(|i| WeylElement::from_lex_rank(self.dim, i)).collect();
        m.sort_by_cached_key(|w| (w.length(), w.reduced_word()));
        m
    }

    /// `w · Th`.
    pub fn left_translate(&self, w: &WeylElement) -> Result<Self> {
        if w.dim() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: w.dim() });
        }
        let mut t = Self::empty(self.dim);
        for i in self.indices() {
            let x = w * &WeylElement::from_lex_rank(self.dim, i);
            t.insert_index(x.lex_rank());
        }
        Ok(t)
    }

    pub fn is_downward_closed(&self) -> bool {
        self.indices().all(|i| {
            WeylElement::from_lex_rank(self.dim, i).lower_covers().iter().all(|c| self.contains(c))
        })
    }

    pub fn is_stabilizer_invariant(&self, face: &FaceType) -> Result<bool> {
        if face.dim() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: face.dim() });
        }
        for u in face.stabilizer_generators() {
            if &self.left_translate(&u)? != self {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn classify(&self, face: Option<&FaceType>) -> Result<ThickeningClass> {
        let translate = self.left_translate(&WeylElement::longest(self.dim))?;
        let union_full = self.bits.iter().zip(&translate.bits).map(|(a, b)| (a | b).count_ones() as usize).sum::<usize>()
            == self.order;
        let disjoint = self.bits.iter().zip(&translate.bits).all(|(a, b)| a & b == 0);
        // Partition test element by element: exactly one of w, w₀w is a member.
        let balanced = (0..self.order).all(|i| {
            let w0w = WeylElement::from_lex_rank(self.dim, i).left_by_longest().lex_rank();
            self.contains_index(i) != self.contains_index(w0w)
        });
        Ok(ThickeningClass {
            downward_closed: self.is_downward_closed(),
            fat: union_full,
            slim: disjoint,
            balanced,
            stabilizer_invariant: face.map(|f| self.is_stabilizer_invariant(f)).transpose()?,
        })
    }

    pub fn one_line(&self) -> String {
        self.members().iter().map(WeylElement::one_line).collect::<Vec<_>>().join("|")
    }
}

impl Ord for Thickening {
    /// Lexicographic on membership indicators, element of rank 0 first,
    /// absent before present.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dim, self.order).cmp(&(other.dim, other.order)).then_with(|| {
            for (a, b) in self.bits.iter().zip(&other.bits) {
                if a != b {
                    let low = (a ^ b).trailing_zeros();
                    return if a >> low & 1 == 1 { Ordering::Greater } else { Ordering::Less };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Thickening {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Thickening {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.one_line())
    }
}

impl fmt::Debug for Thickening {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Thickening({})", self.one_line())
    }
}

pub fn classify_thickening(t: &Thickening, face: Option<&FaceType>) -> Result<ThickeningClass> {
    t.classify(face)
}

/// All balanced thickenings of `S_d` that are left invariant under the
/// stabilizer of `face`, sorted by [`Thickening`]'s order.
///
/// Works on the quotient poset `W_τ\W`: an invariant subset is an order
/// ideal iff its set of minimal coset representatives is, and the quotient
/// is graded by the length of those representatives. Cosets are decided in
/// order of that length, so every lower cover is already decided when a
/// coset is reached; `w₀` maps cosets to cosets and each decision fixes the
/// partner coset's fate.
pub fn enumerate_balanced(d: usize, face: &FaceType) -> Result<Vec<Thickening>> {
    if face.dim() != d {
        return Err(Error::DimMismatch { expected: d, found: face.dim() });
    }
    face.ensure_iota_invariant()?;
    let group = WeylGroup::new(d);
    let n = group.order();

    // Coset id per element, keyed by the minimal representative's rank.
    let mut rep_of = vec![0usize; n];
    for (i, w) in group.elements().iter().enumerate() {
        rep_of[i] = relative_position_coset(w, face)?.lex_rank();
    }
    let mut reps: Vec<usize> = rep_of.clone();
    reps.sort_unstable();
    reps.dedup();
    reps.sort_by_key(|&r| (group.length(r), r));
    let mut coset_index = vec![usize::MAX; n];
    for (c, &r) in reps.iter().enumerate() {
        coset_index[r] = c;
    }
    let coset_of = |i: usize| coset_index[rep_of[i]];
    let m = reps.len();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 0..n {
        members[coset_of(i)].push(i);
    }
    let partner: Vec<usize> = reps.iter().map(|&r| coset_of(group.longest_times(r))).collect();
    let below: Vec<Vec<usize>> = (0..m)
        .map(|c| {
            let mut b: Vec<usize> = members[c]
                .iter()
                .flat_map(|&i| group.lower_covers(i).iter().map(|&j| coset_of(j)))
                .filter(|&x| x != c)
                .collect();
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();
    if (0..m).any(|c| partner[c] == c) {
        return Ok(Vec::new());
    }

    let mut state: Vec<Option<bool>> = vec![None; m];
    let mut out = Vec::new();
    search(0, &mut state, &partner, &below, &mut |st: &[Option<bool>]| {
        let t = Thickening::from_indices(
            d,
            (0..m).filter(|&c| st[c] == Some(true)).flat_map(|c| members[c].iter().cloned()),
        );
        out.push(t);
    });
    out.sort();
    debug_assert!(out.iter().all(|t| t.classify(Some(face)).map(|c| c.balanced && c.downward_closed).unwrap_or(false)));
    Ok(out)
}

fn search(
    c: usize,
    state: &mut Vec<Option<bool>>,
    partner: &[usize],
    below: &[Vec<usize>],
    emit: &mut dyn FnMut(&[Option<bool>]),
) {
    if c == state.len() {
        emit(state);
        return;
    }
    let lower_ok = below[c].iter().all(|&b| state[b] == Some(true));
    match state[c] {
        Some(true) => {
            if lower_ok {
                search(c + 1, state, partner, below, emit);
            }
        }
        Some(false) => search(c + 1, state, partner, below, emit),
        None => {
            let p = partner[c];
            if lower_ok {
                state[c] = Some(true);
                state[p] = Some(false);
                search(c + 1, state, partner, below, emit);
            }
            state[c] = Some(false);
            state[p] = Some(true);
            search(c + 1, state, partner, below, emit);
            state[c] = None;
            state[p] = None;
        }
    }
}

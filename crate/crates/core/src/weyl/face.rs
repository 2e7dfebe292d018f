use std::collections::BTreeSet;
use std::fmt;

use super::element::WeylElement;
use crate::error::{Error, Result};

/// A face of the model Weyl chamber of SL(d,R), i.e. a flag type, given by
/// its pivot dimensions `1 <= D_1 < ... < D_k <= d - 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FaceType {
    dim: usize,
    pivots: Vec<usize>,
}

impl FaceType {
    pub fn new(dim: usize, mut pivots: Vec<usize>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadFace(format!("dimension {dim} < 2")));
        }
        let sorted = pivots.windows(2).all(|w| w[0] < w[1]);
        if !sorted {
            pivots.sort_unstable();
            if pivots.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::BadFace(format!("repeated pivot in {pivots:?}")));
            }
        }
        if pivots.is_empty() {
            return Err(Error::BadFace("empty pivot set".into()));
        }
        if let Some(&p) = pivots.iter().find(|&&p| p == 0 || p >= dim) {
            return Err(Error::BadFace(format!("pivot {p} outside 1..{}", dim - 1)));
        }
        Ok(Self { dim, pivots })
    }

    /// The full flag type `{1, ..., d - 1}` (chambers).
    pub fn full(dim: usize) -> Self {
        Self { dim, pivots: (1..dim).collect() }
    }

    /// Parses `1,2` or `1 2`.
    pub fn parse(dim: usize, s: &str) -> Result<Self> {
        let pivots: std::result::Result<Vec<usize>, _> =
            s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(str::parse).collect();
        let pivots = pivots.map_err(|_| Error::BadFace(format!("cannot parse pivots `{s}`")))?;
        Self::new(dim, pivots)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() + 1 == self.dim
    }

    pub fn is_iota_invariant(&self) -> bool {
        self.pivots.iter().all(|&i| self.pivots.binary_search(&(self.dim - i)).is_ok())
    }

    pub fn ensure_iota_invariant(&self) -> Result<()> {
        if self.is_iota_invariant() {
            Ok(())
        } else {
            Err(Error::NotIotaInvariant { dim: self.dim, pivots: self.pivots.clone() })
        }
    }

    /// Image under the opposition involution: pivots `d - i`.
    pub fn opposite(&self) -> Self {
        let mut pivots: Vec<usize> = self.pivots.iter().map(|&i| self.dim - i).collect();
        pivots.reverse();
        Self { dim: self.dim, pivots }
    }

    /// Block index (0-based) of the 0-based coordinate `v`: the number of
    /// pivots `<= v`.
    pub fn block_of(&self, v: usize) -> usize {
        self.pivots.iter().take_while(|&&p| p <= v).count()
    }

    /// 0-based coordinate ranges between consecutive pivots.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut edges = vec![0];
        edges.extend_from_slice(&self.pivots);
        edges.push(self.dim);
        edges.windows(2).map(|w| w[0]..w[1]).collect()
    }

    /// Simple reflections fixing the face: `s_i` for `i` not a pivot.
    pub fn stabilizer_generators(&self) -> Vec<WeylElement> {
        (1..self.dim)
            .filter(|i| self.pivots.binary_search(i).is_err())
            .map(|i| WeylElement::simple(self.dim, i).expect("in range"))
            .collect()
    }
}

impl fmt::Display for FaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.pivots.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", p.join(","))
    }
}

/// The parabolic subgroup `W_τ` generated by the simple reflections off the
/// pivot set, by closure under multiplication. Sorted lexicographically.
pub fn face_stabilizer(face: &FaceType) -> Vec<WeylElement> {
    let gens = face.stabilizer_generators();
    let mut seen: BTreeSet<WeylElement> = BTreeSet::new();
    let mut frontier = vec![WeylElement::identity(face.dim())];
    seen.insert(frontier[0].clone());
    while let Some(w) = frontier.pop() {
        for g in &gens {
            let x = g * &w;
            if seen.insert(x.clone()) {
                frontier.push(x);
            }
        }
    }
    seen.into_iter().collect()
}

/// Minimal-length representative of the left coset `W_τ · w`.
///
/// Left multiplication by `W_τ` permutes values inside each pivot block,
/// so the shortest element lists each block's values in increasing order
/// along the positions they occupy.
pub fn relative_position_coset(w: &WeylElement, face: &FaceType) -> Result<WeylElement> {
    if w.dim() != face.dim() {
        return Err(Error::DimMismatch { expected: face.dim(), found: w.dim() });
    }
    let d = w.dim();
    let blocks: Vec<usize> = (0..d).map(|k| face.block_of(w.at(k))).collect();
    Ok(coset_rep_from_blocks(&blocks, face))
}

/// Shortest permutation whose value at position `k` lies in block
/// `blocks[k]`.
pub(crate) fn coset_rep_from_blocks(blocks: &[usize], face: &FaceType) -> WeylElement {
    let ranges = face.blocks();
    let mut next: Vec<usize> = ranges.iter().map(|r| r.start).collect();
    let images: Vec<usize> = blocks
        .iter()
        .map(|&b| {
            let v = next[b];
            next[b] += 1;
            v + 1
        })
        .collect();
    WeylElement::from_images(&images).expect("block counts match block sizes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(d: usize, i: usize) -> WeylElement {
        WeylElement::simple(d, i).unwrap()
    }

    #[test]
    fn validation() {
        assert!(FaceType::new(3, vec![0]).is_err());
        assert!(FaceType::new(3, vec![3]).is_err());
        assert!(FaceType::new(3, vec![]).is_err());
        assert!(FaceType::new(3, vec![1, 1]).is_err());
        assert_eq!(FaceType::new(4, vec![3, 1]).unwrap().pivots(), &[1, 3]);
        assert!(FaceType::full(4).is_iota_invariant());
        assert!(FaceType::new(4, vec![2]).unwrap().is_iota_invariant());
        assert!(!FaceType::new(4, vec![1]).unwrap().is_iota_invariant());
        assert_eq!(FaceType::parse(3, "1,2").unwrap(), FaceType::full(3));
        assert_eq!(FaceType::new(5, vec![1, 2]).unwrap().opposite().pivots(), &[3, 4]);
    }

    #[test]
    fn stabilizer_examples() {
        assert_eq!(face_stabilizer(&FaceType::full(3)), vec![WeylElement::identity(3)]);
        let st = face_stabilizer(&FaceType::new(3, vec![1]).unwrap());
        assert_eq!(st, vec![WeylElement::identity(3), s(3, 2)]);
        let st = face_stabilizer(&FaceType::new(4, vec![2]).unwrap());
        assert_eq!(st.len(), 4);
        assert!(st.contains(&(&s(4, 1) * &s(4, 3))));
    }

    #[test]
    fn coset_examples() {
        let face = FaceType::new(3, vec![1]).unwrap();
        assert!(relative_position_coset(&WeylElement::identity(3), &face).unwrap().is_identity());
        assert!(relative_position_coset(&s(3, 2), &face).unwrap().is_identity());
        let s1s2 = &s(3, 1) * &s(3, 2);
        assert_eq!(relative_position_coset(&s1s2, &face).unwrap(), s1s2);
        let s2s1s2 = &s(3, 2) * &s1s2;
        assert_eq!(relative_position_coset(&s2s1s2, &face).unwrap(), s1s2);
    }

    #[test]
    fn coset_rep_matches_closure_oracle() {
        for pivots in [vec![1], vec![2], vec![1, 3], vec![2, 3]] {
            let face = FaceType::new(4, pivots).unwrap();
            let stab = face_stabilizer(&face);
            for w in WeylElement::all(4) {
                let coset: Vec<WeylElement> = stab.iter().map(|u| u * &w).collect();
                let min = coset.iter().min_by_key(|x| x.length()).unwrap();
                let rep = relative_position_coset(&w, &face).unwrap();
                assert_eq!(&rep, min);
                assert!(coset.contains(&rep));
            }
        }
    }
}

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// An element of the type-A Weyl group `S_d`, stored as its image array.
///
/// Composition follows functions: `(u * v)(k) = u(v(k))`. The simple
/// reflection `s_i` swaps `i` and `i + 1` (1-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    // 0-based images.
    perm: Vec<u8>,
}

impl WeylElement {
    pub fn identity(d: usize) -> Self {
        Self { perm: (0..d as u8).collect() }
    }

    /// Simple reflection `s_i`, `1 <= i < d`.
    pub fn simple(d: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= d {
            return Err(Error::BadPermutation(format!("s_{i} does not exist in S_{d}")));
        }
        let mut w = Self::identity(d);
        w.perm.swap(i - 1, i);
        Ok(w)
    }

    /// The order-reversing permutation `i ↦ d + 1 - i`.
    pub fn longest(d: usize) -> Self {
        Self { perm: (0..d as u8).rev().collect() }
    }

    /// From 1-based images.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in images {
            if x == 0 || x > d || seen[x - 1] {
                return Err(Error::BadPermutation(format!("{images:?}")));
            }
            seen[x - 1] = true;
        }
        Ok(Self { perm: images.iter().map(|&x| (x - 1) as u8).collect() })
    }

    /// Parses one-line notation such as `213`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let images: Option<Vec<usize>> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(|x| x as usize)).collect()
        };
        images
            .ok_or_else(|| Error::BadPermutation(s.to_string()))
            .and_then(|v| Self::from_images(&v))
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// 0-based image of the 0-based point `k`.
    pub fn at(&self, k: usize) -> usize {
        self.perm[k] as usize
    }

    /// 1-based images.
    pub fn images(&self) -> Vec<usize> {
        self.perm.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.dim()];
        for (i, &x) in self.perm.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Self { perm: inv }
    }

    pub fn compose(&self, other: &WeylElement) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(Self { perm: other.perm.iter().map(|&k| self.perm[k as usize]).collect() })
    }

    /// Coxeter length: number of inversions.
    pub fn length(&self) -> usize {
        let p = &self.perm;
        (0..p.len()).map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count()).sum()
    }

    /// `w₀ · self` (left multiplication: `k ↦ d + 1 - w(k)`).
    pub fn left_by_longest(&self) -> Self {
        let d = self.dim() as u8;
        Self { perm: self.perm.iter().map(|&x| d - 1 - x).collect() }
    }

    /// `self · w₀` (reverses the image array).
    pub fn right_by_longest(&self) -> Self {
        Self { perm: self.perm.iter().rev().cloned().collect() }
    }

    /// Conjugation by the longest element, `w₀ w w₀`.
    pub fn opposition(&self) -> Self {
        self.left_by_longest().right_by_longest()
    }

    /// Rank in the lexicographic order of image arrays (Lehmer code).
    pub fn lex_rank(&self) -> usize {
        let d = self.dim();
        let mut rank = 0;
        let mut fact = 1;
        for i in (0..d).rev() {
            let smaller = (i + 1..d).filter(|&j| self.perm[j] < self.perm[i]).count();
            rank += smaller * fact;
            fact *= d - i;
        }
        rank
    }

    pub fn from_lex_rank(d: usize, mut rank: usize) -> Self {
        let mut fact: Vec<usize> = vec![1; d + 1];
        for i in 1..=d {
            fact[i] = fact[i - 1] * i;
        }
        let mut pool: Vec<u8> = (0..d as u8).collect();
        let mut perm = Vec::with_capacity(d);
        for i in (0..d).rev() {
            let idx = rank / fact[i];
            rank %= fact[i];
            perm.push(pool.remove(idx));
        }
        Self { perm }
    }

    /// All of `S_d` in lexicographic order.
    pub fn all(d: usize) -> Vec<Self> {
        let n: usize = (1..=d).product();
        (0..n).map(|r| Self::from_lex_rank(d, r)).collect()
    }

    /// Permutation matrix with `P e_k = e_{w(k)}`.
    pub fn permutation_matrix(&self) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for k in 0..d {
            m[(self.at(k), k)] = 1.0;
        }
        m
    }

    /// Lexicographically smallest reduced word `[i_1, ..., i_k]` with
    /// `w = s_{i_1} ⋯ s_{i_k}`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::new();
        loop {
            // Left descent i: w⁻¹(i) > w⁻¹(i + 1).
            let inv = w.inverse();
            let Some(i) = (0..w.dim().saturating_sub(1)).find(|&i| inv.perm[i] > inv.perm[i + 1]) else {
                break;
            };
            word.push(i + 1);
            w.perm.iter_mut().for_each(|x| {
                if *x as usize == i {
                    *x += 1;
                } else if *x as usize == i + 1 {
                    *x -= 1;
                }
            });
        }
        word
    }

    /// Elements covered by `self` in Bruhat order: `w·(i j)` for positions
    /// `i < j` with `w(i) > w(j)` and no intermediate value in between.
    pub fn lower_covers(&self) -> Vec<Self> {
        let p = &self.perm;
        let d = p.len();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                if p[i] > p[j] && !(i + 1..j).any(|k| p[k] > p[j] && p[k] < p[i]) {
                    let mut q = p.clone();
                    q.swap(i, j);
                    out.push(Self { perm: q });
                }
            }
        }
        out
    }

    pub fn one_line(&self) -> String {
        if self.dim() <= 9 {
            self.perm.iter().map(|&x| char::from(b'1' + x)).collect()
        } else {
            self.images().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        self.compose(rhs).expect("composition of elements of different rank")
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.one_line())
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W[{}]", self.one_line())
    }
}

/// Strong Bruhat order via the rank-matrix criterion:
/// `u <= v` iff `#{a <= i : u(a) >= j} <= #{a <= i : v(a) >= j}` for all `i, j`.
pub fn bruhat_leq(u: &WeylElement, v: &WeylElement) -> Result<bool> {
    if u.dim() != v.dim() {
        return Err(Error::DimMismatch { expected: u.dim(), found: v.dim() });
    }
    let d = u.dim();
    for j in 0..d {
        let (mut ru, mut rv) = (0, 0);
        for i in 0..d {
            ru += usize::from(u.at(i) >= j);
            rv += usize::from(v.at(i) >= j);
            if ru > rv {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn longest_element(d: usize) -> WeylElement {
    WeylElement::longest(d)
}

pub fn opposition(w: &WeylElement) -> WeylElement {
    w.opposition()
}

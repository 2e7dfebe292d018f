//! Representations of free groups into SL(d,R).

use crate::error::{Error, Result};
use crate::linalg::{Matrix, ScaledElement, Tolerances};
use crate::words::{Letter, Word};

/// Images of the free generators `A, B, ...`, kept in log-scaled form
/// together with their inverses.
#[derive(Clone, Debug)]
pub struct Representation {
    dim: usize,
    // Indexed by letter: generator images at even, inverses at odd indices.
    letters: Vec<ScaledElement>,
}

impl Representation {
    /// Checks squareness, shared dimension and unimodularity.
    pub fn new(generators: &[Matrix]) -> Result<Self> {
        Self::new_with(generators, &Tolerances::default())
    }

    pub fn new_with(generators: &[Matrix], tol: &Tolerances) -> Result<Self> {
        let first = generators.first().ok_or_else(|| Error::Invalid("no generators".into()))?;
        let dim = first.ensure_square()?;
        let mut elements = Vec::with_capacity(generators.len());
        for g in generators {
            let d = g.ensure_square()?;
            if d != dim {
                return Err(Error::DimMismatch { expected: dim, found: d });
            }
            if !g.is_finite() {
                return Err(Error::NonFinite);
            }
            let det = g.det()?;
            if (det - 1.0).abs() > tol.det_tol {
                return Err(Error::NotUnimodular { det });
            }
            elements.push(ScaledElement::from_matrix(g)?);
        }
        Self::from_elements(elements)
    }

    /// Trusts that the elements are unimodular.
    pub fn from_elements(generators: Vec<ScaledElement>) -> Result<Self> {
        let dim = generators.first().ok_or_else(|| Error::Invalid("no generators".into()))?.dim();
        if generators.len() > 26 {
            return Err(Error::Invalid("at most 26 generators".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.dim() != dim) {
            return Err(Error::DimMismatch { expected: dim, found: g.dim() });
        }
        let letters = generators.into_iter().flat_map(|g| [g.inverse(), g].into_iter().rev()).collect();
        Ok(Self { dim, letters })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.letters.len() / 2
    }

    pub fn generator(&self, i: usize) -> &ScaledElement {
        &self.letters[2 * i]
    }

    pub fn generators(&self) -> Vec<ScaledElement> {
        (0..self.rank()).map(|i| self.generator(i).clone()).collect()
    }

    pub fn letter(&self, l: Letter) -> &ScaledElement {
        &self.letters[l.index()]
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        Letter::all(self.rank())
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        Word::parse(s, self.rank())
    }

    /// `ρ(w)` for a reduced word.
    pub fn evaluate(&self, w: &Word) -> Result<ScaledElement> {
        if !w.is_reduced() {
            return Err(Error::NotReduced(w.to_string()));
        }
        if let Some(l) = w.letters().iter().find(|l| l.generator() >= self.rank()) {
            return Err(Error::UnknownGenerator(l.symbol().to_string()));
        }
        Ok(w.letters().iter().fold(ScaledElement::identity(self.dim), |acc, &l| acc.mul(self.letter(l))))
    }

    pub fn evaluate_str(&self, s: &str) -> Result<ScaledElement> {
        self.evaluate(&self.parse_word(s)?)
    }

    /// `A ↦ ρ(A)⁻¹` for every generator.
    pub fn inverse_representation(&self) -> Self {
        let letters = self.letters.chunks(2).flat_map(|p| [p[1].clone(), p[0].clone()]).collect();
        Self { dim: self.dim, letters }
    }

    /// Composes with a map on generator matrices, e.g. a symmetric power.
    pub fn map_generators<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&Matrix) -> Result<Matrix>,
    {
        let gens = (0..self.rank()).map(|i| f(&self.generator(i).to_matrix())).collect::<Result<Vec<_>>>()?;
        let elements = gens.iter().map(ScaledElement::from_matrix).collect::<Result<Vec<_>>>()?;
        Self::from_elements(elements)
    }

    /// Generator matrices (may overflow for huge powers).
    pub fn generator_matrices(&self) -> Vec<Matrix> {
        (0..self.rank()).map(|i| self.generator(i).to_matrix()).collect()
    }
}

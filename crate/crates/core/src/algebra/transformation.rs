use std::fmt;

use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// A total self-map of the point set `{0, .., n-1}`.
///
/// Composition is diagrammatic: `f.then(g)` maps `x` to `g(f(x))`, so a word
/// `a b` acts by first applying `a` and then `b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transformation {
    image: Vec<usize>,
}

impl Transformation {
    pub fn new(image: Vec<usize>) -> Result<Self, AlgebraError> {
        let n = image.len();
        if let Some((point, &value)) = image.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(AlgebraError::PointOutOfRange {
                point,
                value,
                domain_size: n,
            });
        }
        Ok(Transformation { image })
    }

    /// Builds a transformation from 1-based images, the way tables are
    /// usually written down by hand.
    pub fn from_one_based(image: &[usize]) -> Result<Self, AlgebraError> {
        let n = image.len();
        let mut zero = Vec::with_capacity(n);
        for (point, &v) in image.iter().enumerate() {
            if v == 0 || v > n {
                return Err(AlgebraError::PointOutOfRange {
                    point,
                    value: v,
                    domain_size: n,
                });
            }
            zero.push(v - 1);
        }
        Ok(Transformation { image: zero })
    }

    pub fn identity(n: usize) -> Self {
        Transformation {
            image: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, value: usize) -> Self {
        assert!(value < n, "constant value {value} outside domain of size {n}");
        Transformation {
            image: vec![value; n],
        }
    }

    pub fn domain_size(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.image[point]
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Transformation) -> Transformation {
        assert_eq!(
            self.domain_size(),
            other.domain_size(),
            "composing transformations of different domain sizes"
        );
        Transformation {
            image: self.image.iter().map(|&x| other.image[x]).collect(),
        }
    }

    /// Number of distinct values, `|S·τ|`.
    pub fn rank(&self) -> usize {
        let mut seen = vec![false; self.image.len()];
        let mut count = 0;
        for &v in &self.image {
            if !seen[v] {
                seen[v] = true;
                count += 1;
            }
        }
        count
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.image.len()
    }

    /// Exactly one distinct value.
    pub fn is_reset(&self) -> bool {
        self.rank() == 1
    }

    /// Inverse of a permutation, `None` otherwise.
    pub fn inverse(&self) -> Option<Transformation> {
        if !self.is_permutation() {
            return None;
        }
        let mut inv = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Some(Transformation { image: inv })
    }

    /// Image of a set of points, sorted and deduplicated.
    pub fn image_of(&self, points: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = points.iter().map(|&p| self.image[p]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.image)
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

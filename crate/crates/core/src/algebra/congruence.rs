use super::{AlgebraError, FiniteMonoid};

/// A congruence on a finite monoid, stored as a class index per element.
///
/// Classes are numbered in order of first appearance, so two congruences
/// with the same blocks compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    class_of: Vec<usize>,
    class_count: usize,
}

impl Congruence {
    /// Checks compatibility `x≡x' ∧ y≡y' ⇒ xy≡x'y'`; a failure names one
    /// violating quadruple `(x, x', y, y')`.
    pub fn new(monoid: &FiniteMonoid, class_of: Vec<usize>) -> Result<Self, AlgebraError> {
        if class_of.len() != monoid.order() {
            return Err(AlgebraError::SizeMismatch {
                expected: monoid.order(),
                found: class_of.len(),
            });
        }
        let (class_of, class_count) = normalize(&class_of);
        let c = Congruence {
            class_of,
            class_count,
        };
        if let Some(q) = c.violation(monoid) {
            return Err(AlgebraError::InvalidCongruence {
                x: q.0,
                x2: q.1,
                y: q.2,
                y2: q.3,
            });
        }
        Ok(c)
    }

    pub fn from_blocks(monoid: &FiniteMonoid, blocks: &[Vec<usize>]) -> Result<Self, AlgebraError> {
        let mut class_of = vec![usize::MAX; monoid.order()];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= monoid.order() || class_of[x] != usize::MAX {
                    return Err(AlgebraError::NotAPartition { element: x });
                }
                class_of[x] = b;
            }
        }
        if let Some(x) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(AlgebraError::NotAPartition { element: x });
        }
        Self::new(monoid, class_of)
    }

    pub fn finest(monoid: &FiniteMonoid) -> Self {
        Congruence {
            class_of: (0..monoid.order()).collect(),
            class_count: monoid.order(),
        }
    }

    pub fn coarsest(monoid: &FiniteMonoid) -> Self {
        Congruence {
            class_of: vec![0; monoid.order()],
            class_count: 1,
        }
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class_of
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// First element of each class.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.class_count];
        for (x, &c) in self.class_of.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = x;
            }
        }
        reps
    }

    // Two one-sided checks against class representatives are equivalent to
    // the quadruple condition and cost O(n²).
    fn violation(&self, m: &FiniteMonoid) -> Option<(usize, usize, usize, usize)> {
        let reps = self.representatives();
        let n = m.order();
        for x in 0..n {
            let r = reps[self.class_of[x]];
            if r == x {
                continue;
            }
            for z in 0..n {
                if self.class_of[m.mul(x, z)] != self.class_of[m.mul(r, z)] {
                    return Some((x, r, z, z));
                }
                if self.class_of[m.mul(z, x)] != self.class_of[m.mul(z, r)] {
                    return Some((z, z, x, r));
                }
            }
        }
        None
    }
}

fn normalize(class_of: &[usize]) -> (Vec<usize>, usize) {
    let mut renumber = std::collections::HashMap::new();
    let out = class_of
        .iter()
        .map(|&c| {
            let next = renumber.len();
            *renumber.entry(c).or_insert(next)
        })
        .collect();
    (out, renumber.len())
}

/// A monoid homomorphism between two finite monoids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidHom {
    source: FiniteMonoid,
    target: FiniteMonoid,
    map: Vec<usize>,
}

impl MonoidHom {
    /// Checks `h(e) = e'` and `h(xy) = h(x)h(y)` for all pairs.
    pub fn new(source: FiniteMonoid, target: FiniteMonoid, map: Vec<usize>) -> Result<Self, AlgebraError> {
        if map.len() != source.order() {
            return Err(AlgebraError::SizeMismatch {
                expected: source.order(),
                found: map.len(),
            });
        }
        if let Some(x) = map.iter().position(|&y| y >= target.order()) {
            return Err(AlgebraError::InvalidHom {
                x,
                y: x,
                reason: "image outside the target".into(),
            });
        }
        if map[source.identity()] != target.identity() {
            return Err(AlgebraError::InvalidHom {
                x: source.identity(),
                y: source.identity(),
                reason: "identity is not mapped to identity".into(),
            });
        }
        for x in 0..source.order() {
            for y in 0..source.order() {
                if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                    return Err(AlgebraError::InvalidHom {
                        x,
                        y,
                        reason: "h(xy) differs from h(x)h(y)".into(),
                    });
                }
            }
        }
        Ok(MonoidHom { source, target, map })
    }

    pub fn source(&self) -> &FiniteMonoid {
        &self.source
    }

    pub fn target(&self) -> &FiniteMonoid {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &MonoidHom) -> Result<MonoidHom, AlgebraError> {
        if self.target != other.source {
            return Err(AlgebraError::SizeMismatch {
                expected: self.target.order(),
                found: other.source.order(),
            });
        }
        let map = self.map.iter().map(|&y| other.map[y]).collect();
        MonoidHom::new(self.source.clone(), other.target.clone(), map)
    }
}

/// `M/≡` with `[x]·[y] = [xy]`, and the projection `x ↦ [x]`.
pub fn quotient_monoid(m: &FiniteMonoid, c: &Congruence) -> (FiniteMonoid, MonoidHom) {
    let reps = c.representatives();
    let k = c.class_count();
    let mut table = vec![0usize; k * k];
    for (i, &x) in reps.iter().enumerate() {
        for (j, &y) in reps.iter().enumerate() {
            table[i * k + j] = c.class_of(m.mul(x, y));
        }
    }
    let labels = reps.iter().map(|&x| format!("[{}]", m.label(x))).collect();
    let quotient = FiniteMonoid::from_parts(labels, table, c.class_of(m.identity()));
    let projection = MonoidHom::new(m.clone(), quotient.clone(), c.classes().to_vec())
        .expect("projection onto a quotient by a congruence is a homomorphism");
    (quotient, projection)
}

/// `x ≡ y ⇔ h(x) = h(y)`.
pub fn kernel_congruence(h: &MonoidHom) -> Congruence {
    let (class_of, class_count) = normalize(h.map());
    Congruence {
        class_of,
        class_count,
    }
}

/// The factorization `h = π ψ` through `M/ker(h)`.
#[derive(Clone, Debug)]
pub struct HomFactorization {
    pub kernel: Congruence,
    pub quotient: FiniteMonoid,
    pub projection: MonoidHom,
    pub embedding: MonoidHom,
}

pub fn hom_factorize(h: &MonoidHom) -> Result<HomFactorization, AlgebraError> {
    let kernel = kernel_congruence(h);
    let (quotient, projection) = quotient_monoid(h.source(), &kernel);
    let embedding_map = kernel
        .representatives()
        .into_iter()
        .map(|x| h.apply(x))
        .collect();
    let embedding = MonoidHom::new(quotient.clone(), h.target().clone(), embedding_map)?;
    debug_assert!(embedding.is_injective());
    Ok(HomFactorization {
        kernel,
        quotient,
        projection,
        embedding,
    })
}

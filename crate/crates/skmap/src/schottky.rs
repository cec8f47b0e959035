//! Enumeration of reduced words of the free group generated by the domain's
//! Möbius maps, keeping one representative per inverse pair as required by
//! the truncated prime-function product.

use num_complex::Complex64;

use crate::domain::{CircularDomain, MobiusMap};
use crate::error::{Error, Result};

pub const DEFAULT_WORD_CAP: usize = 1_000_000;

/// A reduced composition of generators. Letters are signed indices: `+j`
/// applies `theta_j`, `-j` applies its inverse; adjacent cancelling letters
/// never occur. `composed` is the full composition as a single Möbius map.
#[derive(Debug, Clone)]
pub struct GroupWord {
    letters: Vec<i32>,
    composed: MobiusMap,
}

impl GroupWord {
    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn map(&self) -> &MobiusMap {
        &self.composed
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn inverse_letters(&self) -> Vec<i32> {
        self.letters.iter().rev().map(|l| -l).collect()
    }

    /// Recomposes the letter maps from scratch; used to cross-check the
    /// cached composition.
    pub fn recompose(&self, domain: &CircularDomain) -> Result<MobiusMap> {
        let mut m = MobiusMap::identity();
        for &l in &self.letters {
            let g = domain.generator(l.unsigned_abs() as usize)?;
            let g = if l > 0 { g } else { g.inverse() };
            // Renormalize per step: coefficient growth otherwise drags the
            // determinant away from one.
            m = m.compose(&g).normalized();
        }
        Ok(m)
    }
}

impl std::fmt::Display for GroupWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{l:+}")?;
        }
        Ok(())
    }
}

/// Ordering key giving `+j < -j` and lower indices first, used for the
/// deterministic representative rule.
fn letter_key(l: i32) -> u64 {
    let j = l.unsigned_abs() as u64;
    2 * j + u64::from(l < 0)
}

fn lex_less(a: &[i32], b: &[i32]) -> bool {
    let ka = a.iter().map(|&l| letter_key(l));
    let kb = b.iter().map(|&l| letter_key(l));
    ka.cmp(kb) == std::cmp::Ordering::Less
}

/// The level-truncated half set of nontrivial reduced words: exactly one of
/// each pair `{w, w^-1}` up to the given length, ordered by length and then
/// lexicographically.
#[derive(Debug, Clone)]
pub struct WordSet {
    level: usize,
    half_set: Vec<GroupWord>,
    full_set: bool,
}

impl WordSet {
    /// Breadth-first enumeration of all reduced words of length `1..=level`,
    /// composing child maps incrementally and keeping the lexicographically
    /// smaller of each inverse pair.
    pub fn enumerate(domain: &CircularDomain, level: usize) -> Result<Self> {
        Self::enumerate_capped(domain, level, DEFAULT_WORD_CAP)
    }

    pub fn enumerate_capped(domain: &CircularDomain, level: usize, cap: usize) -> Result<Self> {
        let m = domain.inner_count();
        let mut gens: Vec<(i32, MobiusMap)> = Vec::with_capacity(2 * m);
        for j in 1..=m {
            let g = domain.generator(j)?;
            gens.push((j as i32, g));
            gens.push((-(j as i32), g.inverse()));
        }
        let mut half_set: Vec<GroupWord> = Vec::new();
        let mut frontier: Vec<GroupWord> = vec![GroupWord {
            letters: Vec::new(),
            composed: MobiusMap::identity(),
        }];
        for _ in 1..=level {
            let mut next = Vec::with_capacity(frontier.len() * (2 * m).max(1));
            for parent in &frontier {
                let last = parent.letters.last().copied();
                for (l, g) in &gens {
                    if last == Some(-l) {
                        continue; // would cancel; not reduced
                    }
                    let mut letters = parent.letters.clone();
                    letters.push(*l);
                    let composed = parent.composed.compose(g).normalized();
                    next.push(GroupWord { letters, composed });
                }
            }
            for w in &next {
                if lex_less(&w.letters, &w.inverse_letters()) {
                    if half_set.len() >= cap {
                        return Err(Error::WordCap { cap, level });
                    }
                    half_set.push(w.clone());
                }
            }
            frontier = next;
        }
        Ok(Self {
            level,
            half_set,
            full_set: false,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn words(&self) -> &[GroupWord] {
        &self.half_set
    }

    pub fn len(&self) -> usize {
        self.half_set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.half_set.is_empty()
    }

    /// Whether inverses have been materialized alongside the representatives.
    pub fn has_inverses(&self) -> bool {
        self.full_set
    }

    /// The same set with every inverse word materialized as well. The prime
    /// product never needs this; it exists for brute-force comparisons.
    pub fn with_inverses(&self, domain: &CircularDomain) -> Result<Self> {
        let mut all = self.half_set.clone();
        for w in &self.half_set {
            let letters = w.inverse_letters();
            let composed = GroupWord {
                letters: letters.clone(),
                composed: MobiusMap::identity(),
            }
            .recompose(domain)?;
            all.push(GroupWord { letters, composed });
        }
        Ok(Self {
            level: self.level,
            half_set: all,
            full_set: true,
        })
    }

    /// Copy of the set with word `index` replaced by its inverse. The prime
    /// function must be unchanged by this; tests rely on it.
    pub fn with_flipped_representative(
        &self,
        domain: &CircularDomain,
        index: usize,
    ) -> Result<Self> {
        let mut half_set = self.half_set.clone();
        let letters = half_set[index].inverse_letters();
        let composed = GroupWord {
            letters: letters.clone(),
            composed: MobiusMap::identity(),
        }
        .recompose(domain)?;
        half_set[index] = GroupWord { letters, composed };
        Ok(Self {
            level: self.level,
            half_set,
            full_set: self.full_set,
        })
    }
}

/// Applies the composed word map; letters act right to left. Poles produce an
/// infinite value for the caller to handle.
pub fn compose(word: &GroupWord, z: Complex64) -> Complex64 {
    word.map().apply(z)
}

//! Reduced words in free groups of finite rank.
//!
//! Letters are signed generator indices: `i` stands for `s_i` and `-i` for
//! `s_i^{-1}`, with `1 <= i <= rank`.

use alloc::vec::Vec;

/// Errors raised by word constructors.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    /// A letter is zero or exceeds the rank.
    #[error("letter {letter} is not a signed generator index for rank {rank}")]
    BadIndex {
        /// Offending letter.
        letter: i32,
        /// Rank of the free group.
        rank: u32,
    },
    /// The ball to enumerate exceeds the budget.
    #[error("ball of radius {radius} has {size} elements, over the budget {budget}")]
    BallTooLarge {
        /// Requested radius.
        radius: usize,
        /// Number of elements (or pairs) it would produce.
        size: u128,
        /// Configured budget.
        budget: u128,
    },
}

/// Maximal run `s_gen^exp` of a reduced word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    /// Generator index, starting at 1.
    pub generator: u32,
    /// Nonzero exponent.
    pub exponent: i64,
}

/// A freely reduced word together with its syllable decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    rank: u32,
    letters: Vec<i32>,
    syllables: Vec<Syllable>,
}

fn syllables_of(letters: &[i32]) -> Vec<Syllable> {
    let mut out: Vec<Syllable> = Vec::new();
    for &l in letters {
        let generator = l.unsigned_abs();
        let step = l.signum() as i64;
        match out.last_mut() {
            Some(s) if s.generator == generator => s.exponent += step,
            _ => out.push(Syllable {
                generator,
                exponent: step,
            }),
        }
    }
    out
}

/// Freely reduces `letters` in the free group of the given rank.
pub fn reduce_word(rank: u32, letters: &[i32]) -> Result<Word, WordError> {
    let mut stack: Vec<i32> = Vec::with_capacity(letters.len());
    for &l in letters {
        if l == 0 || l.unsigned_abs() > rank {
            return Err(WordError::BadIndex { letter: l, rank });
        }
        if stack.last() == Some(&-l) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    Ok(Word::from_reduced(rank, stack))
}

impl Word {
    fn from_reduced(rank: u32, letters: Vec<i32>) -> Self {
        let syllables = syllables_of(&letters);
        Self {
            rank,
            letters,
            syllables,
        }
    }

    /// The empty word.
    pub fn empty(rank: u32) -> Self {
        Self::from_reduced(rank, Vec::new())
    }

    /// The generator `s_i` (or its inverse for negative `i`).
    pub fn generator(rank: u32, i: i32) -> Result<Self, WordError> {
        reduce_word(rank, &[i])
    }

    /// Rank of the ambient free group.
    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Signed letters.
    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Maximal powers of single generators, left to right.
    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// Word length.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Whether this is the identity.
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Reduced product `self * other`.
    pub fn mul(&self, other: &Word) -> Word {
        let a = &self.letters;
        let b = &other.letters;
        let mut k = 0;
        while k < a.len() && k < b.len() && a[a.len() - 1 - k] == -b[k] {
            k += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * k);
        letters.extend_from_slice(&a[..a.len() - k]);
        letters.extend_from_slice(&b[k..]);
        Word::from_reduced(self.rank.max(other.rank), letters)
    }

    /// Inverse word.
    pub fn inverse(&self) -> Word {
        let letters = self.letters.iter().rev().map(|l| -l).collect();
        Word::from_reduced(self.rank, letters)
    }

    /// `self^k`, negative `k` allowed.
    pub fn pow(&self, k: i64) -> Word {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty(self.rank);
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }
}

/// Number of reduced words of length at most `radius` in rank `rank`.
pub fn ball_size(rank: u32, radius: usize) -> u128 {
    let r = rank as u128;
    if r == 0 {
        return 1;
    }
    let mut total: u128 = 1;
    let mut layer: u128 = 2 * r;
    for _ in 0..radius {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(2 * r - 1);
    }
    total
}

/// Default budget on the number of enumerated words.
pub const DEFAULT_BALL_BUDGET: u128 = 10_000_000;

/// All reduced words of length at most `radius`, in depth-first order
/// starting with the empty word.
pub fn ball(rank: u32, radius: usize) -> Result<Vec<Word>, WordError> {
    ball_with_budget(rank, radius, DEFAULT_BALL_BUDGET)
}

/// [`ball`] with an explicit budget on the number of words.
pub fn ball_with_budget(rank: u32, radius: usize, budget: u128) -> Result<Vec<Word>, WordError> {
    let size = ball_size(rank, radius);
    if size > budget {
        return Err(WordError::BallTooLarge {
            radius,
            size,
            budget,
        });
    }
    let alphabet: Vec<i32> = (1..=rank as i32).flat_map(|i| [i, -i]).collect();
    let mut out = Vec::with_capacity(size as usize);
    let mut prefix: Vec<i32> = Vec::with_capacity(radius);
    dfs(rank, radius, &alphabet, &mut prefix, &mut out);
    Ok(out)
}

fn dfs(rank: u32, radius: usize, alphabet: &[i32], prefix: &mut Vec<i32>, out: &mut Vec<Word>) {
    out.push(Word::from_reduced(rank, prefix.clone()));
    if prefix.len() == radius {
        return;
    }
    for &l in alphabet {
        if prefix.last() == Some(&-l) {
            continue;
        }
        prefix.push(l);
        dfs(rank, radius, alphabet, prefix, out);
        prefix.pop();
    }
}

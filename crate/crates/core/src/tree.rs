//! Vertices of the d-ary rooted tree and level coordinates.
//!
//! Vertices are finite words over `{0..d-1}`; the empty word is the root.
//! Words of a fixed length are ordered lexicographically, which matches
//! the numeric order of their base-d digit expansion (most significant
//! letter first). That ordering is part of the external contract.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A vertex of the rooted tree, as a word of letters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Vertex(Vec<u32>);

impl Vertex {
    pub fn root() -> Vertex {
        Vertex(Vec::new())
    }

    pub fn new(letters: Vec<u32>) -> Vertex {
        Vertex(letters)
    }

    /// Parses a vertex. Single digits for alphabets up to 10 letters,
    /// dot-separated numbers otherwise (also accepted for small alphabets).
    pub fn parse(text: &str, d: usize) -> Result<Vertex> {
        let bad = || Error::BadVertex(String::from(text));
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vertex::root());
        }
        let letters: Vec<u32> = if text.contains('.') {
            text.split('.')
                .map(|part| part.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| c.to_digit(10).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        let v = Vertex(letters);
        v.check_arity(d)?;
        Ok(v)
    }

    pub fn check_arity(&self, d: usize) -> Result<()> {
        if self.0.iter().any(|&x| x as usize >= d) {
            return Err(Error::BadVertex(self.to_string(d)));
        }
        Ok(())
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, letter: u32) -> Vertex {
        let mut letters = self.0.clone();
        letters.push(letter);
        Vertex(letters)
    }

    pub fn concat(&self, tail: &Vertex) -> Vertex {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&tail.0);
        Vertex(letters)
    }

    pub fn to_string(&self, d: usize) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        if d <= 10 {
            for &x in &self.0 {
                let _ = write!(s, "{x}");
            }
        } else {
            for (i, &x) in self.0.iter().enumerate() {
                if i > 0 {
                    s.push('.');
                }
                let _ = write!(s, "{x}");
            }
        }
        s
    }
}

/// `d^n` with an overflow guard.
pub fn point_count(d: usize, n: u32) -> Result<usize> {
    let mut count: usize = 1;
    for _ in 0..n {
        count = count
            .checked_mul(d)
            .filter(|&c| c <= MAX_LEVEL_POINTS)
            .ok_or_else(|| {
                Error::ResourceLimit(alloc::format!("level {n} of the {d}-ary tree is too large"))
            })?;
    }
    Ok(count)
}

/// Hard cap on explicit level sizes, independent of configured limits.
pub const MAX_LEVEL_POINTS: usize = 1 << 26;

/// The word of length `n` at lexicographic position `index`.
pub fn word_of_index(index: usize, d: usize, n: u32) -> Vec<u32> {
    let mut letters = alloc::vec![0u32; n as usize];
    let mut rest = index;
    for i in (0..n as usize).rev() {
        letters[i] = (rest % d) as u32;
        rest /= d;
    }
    letters
}

/// Lexicographic position of a word of length `n` among all such words.
pub fn index_of_word(word: &[u32], d: usize) -> usize {
    word.iter().fold(0usize, |acc, &x| acc * d + x as usize)
}

/// The contiguous index range of level-`n` words descending from `v`.
pub fn subtree_range(v: &Vertex, d: usize, n: u32) -> Result<core::ops::Range<usize>> {
    if v.len() > n as usize {
        return Err(Error::BadVertex(v.to_string(d)));
    }
    let width = point_count(d, n - v.len() as u32)?;
    let start = index_of_word(v.letters(), d) * width;
    Ok(start..start + width)
}

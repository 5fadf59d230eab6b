use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A bijection on `{base, …, base+len-1}` stored as its image list:
/// `images[i]` is the image of `base + i`. Time-side permutations κ use
/// `base = 0`, frequency-side permutations ρ use `base = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<usize>,
    base: usize,
}

impl Perm {
    pub fn new(images: Vec<usize>, base: usize) -> Result<Self> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &v in &images {
            if v < base || v >= base + n || seen[v - base] {
                return Err(Error::InvalidPerm(format!("{images:?} is not a permutation of {base}..={}", base + n - 1)));
            }
            seen[v - base] = true;
        }
        Ok(Perm { images, base })
    }

    /// κ on `{0..=m}`.
    pub fn time(images: &[usize]) -> Result<Self> {
        Perm::new(images.to_vec(), 0)
    }

    /// ρ on `{1..=m+1}`.
    pub fn freq(images: &[usize]) -> Result<Self> {
        Perm::new(images.to_vec(), 1)
    }

    pub fn identity(len: usize, base: usize) -> Self {
        Perm { images: (base..base + len).collect(), base }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of the position `pos` (in the same numbering as the domain).
    pub fn at(&self, pos: usize) -> usize {
        self.images[pos - self.base]
    }

    /// The position mapped to `value`.
    pub fn preimage(&self, value: usize) -> usize {
        self.base + self.images.iter().position(|&v| v == value).expect("value outside the permutation's range")
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == self.base + i)
    }

    /// Every permutation of `{base..base+len}` in lexicographic order of image lists.
    pub fn all(len: usize, base: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (base..base + len).collect();
        loop {
            out.push(Perm { images: cur.clone(), base });
            if !next_permutation(&mut cur) {
                break;
            }
        }
        out
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

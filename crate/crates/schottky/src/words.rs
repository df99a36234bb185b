//! Reduced-word combinatorics of the free group on g generators and the
//! associated subshift of finite type.
//!
//! Letters are 0-indexed over the alphabet {0, .., 2g-1}; letter i+g is the
//! inverse of letter i (indices mod 2g). A word is reduced when no letter is
//! followed by its inverse.

use crate::error::{Result, SchottkyError};
use num::bigint::BigInt;
use num::traits::{One, Zero};

/// Inverse letter under the 0-indexed convention.
pub fn inverse_letter(g: usize, letter: usize) -> usize {
    (letter + g) % (2 * g)
}

/// A reduced word over the 2g-letter alphabet. The empty word is the group
/// identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub letters: Vec<usize>,
}

impl Word {
    /// Builds a word, rejecting non-reduced input.
    pub fn new(g: usize, letters: Vec<usize>) -> Result<Self> {
        for (pos, pair) in letters.windows(2).enumerate() {
            if pair[1] == inverse_letter(g, pair[0]) {
                return Err(SchottkyError::WordNotReduced(pos));
            }
        }
        Ok(Word { letters })
    }

    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The inverse word: reversed letters, each inverted.
    pub fn inverse(&self, g: usize) -> Self {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&a| inverse_letter(g, a))
                .collect(),
        }
    }
}

/// Free-group product: concatenate and cancel at the junction.
pub fn group_multiply(g: usize, w1: &Word, w2: &Word) -> Word {
    let mut left = w1.letters.clone();
    let mut right_start = 0;
    while let Some(&last) = left.last() {
        if right_start < w2.letters.len() && w2.letters[right_start] == inverse_letter(g, last) {
            left.pop();
            right_start += 1;
        } else {
            break;
        }
    }
    left.extend_from_slice(&w2.letters[right_start..]);
    Word { letters: left }
}

/// A cyclically reduced necklace: canonical form is the lexicographically
/// least rotation. `primitive_flag` is true iff the word is not a proper
/// power.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    pub letters: Vec<usize>,
    pub primitive_flag: bool,
}

impl CyclicWord {
    pub fn new(g: usize, letters: Vec<usize>) -> Result<Self> {
        if letters.is_empty() {
            return Err(SchottkyError::WordNotReduced(0));
        }
        for (pos, pair) in letters.windows(2).enumerate() {
            if pair[1] == inverse_letter(g, pair[0]) {
                return Err(SchottkyError::WordNotReduced(pos));
            }
        }
        if letters.len() > 1 && letters[0] == inverse_letter(g, *letters.last().unwrap()) {
            return Err(SchottkyError::WordNotReduced(letters.len() - 1));
        }
        if letters.len() == 1 && letters[0] == inverse_letter(g, letters[0]) {
            return Err(SchottkyError::WordNotReduced(0));
        }
        let canonical = least_rotation(&letters);
        let primitive_flag = is_primitive(&canonical);
        Ok(CyclicWord { letters: canonical, primitive_flag })
    }

    pub fn period(&self) -> usize {
        self.letters.len()
    }

    /// Rotation by one step (the shift on the orbit); canonical form is
    /// unchanged.
    pub fn shift(&self) -> Self {
        self.clone()
    }

    /// One full period read as a plain word starting at rotation `offset`.
    pub fn window_word(&self, offset: usize) -> Word {
        let n = self.letters.len();
        Word {
            letters: (0..n).map(|i| self.letters[(offset + i) % n]).collect(),
        }
    }

    /// The necklace of the inverse group element (reverse and invert letters).
    pub fn inverse(&self, g: usize) -> Self {
        let inv: Vec<usize> = self
            .letters
            .iter()
            .rev()
            .map(|&a| inverse_letter(g, a))
            .collect();
        CyclicWord::new(g, inv).expect("inverse of a cyclically reduced word is cyclically reduced")
    }
}

fn least_rotation(letters: &[usize]) -> Vec<usize> {
    let n = letters.len();
    let mut best = 0;
    for start in 1..n {
        for i in 0..n {
            let a = letters[(start + i) % n];
            let b = letters[(best + i) % n];
            if a != b {
                if a < b {
                    best = start;
                }
                break;
            }
        }
    }
    (0..n).map(|i| letters[(best + i) % n]).collect()
}

fn is_primitive(letters: &[usize]) -> bool {
    let n = letters.len();
    for d in 1..n {
        if n % d == 0 && (0..n).all(|i| letters[i] == letters[i % d]) {
            return false;
        }
    }
    true
}

/// The 2g x 2g subshift transition matrix: zero exactly at (i, inverse(i)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub size: usize,
    pub entries: Vec<Vec<u8>>,
}

pub fn transition_matrix(g: usize) -> TransitionMatrix {
    let size = 2 * g;
    let entries = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| u8::from(j != inverse_letter(g, i)))
                .collect()
        })
        .collect();
    TransitionMatrix { size, entries }
}

/// Number of reduced words of length n: 2g(2g-1)^(n-1).
pub fn count_words(g: usize, n: usize) -> BigInt {
    assert!(n >= 1, "count_words requires n >= 1");
    BigInt::from(2 * g) * BigInt::from(2 * g - 1).pow(n as u32 - 1)
}

fn transition_power_trace(g: usize, n: usize) -> BigInt {
    let a = transition_matrix(g);
    let size = a.size;
    let ident: Vec<Vec<BigInt>> = (0..size)
        .map(|i| (0..size).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let base: Vec<Vec<BigInt>> = a
        .entries
        .iter()
        .map(|row| row.iter().map(|&e| BigInt::from(e)).collect())
        .collect();
    let mut acc = ident;
    for _ in 0..n {
        let mut next = vec![vec![BigInt::zero(); size]; size];
        for i in 0..size {
            for k in 0..size {
                if acc[i][k].is_zero() {
                    continue;
                }
                for j in 0..size {
                    let t = &acc[i][k] * &base[k][j];
                    next[i][j] += t;
                }
            }
        }
        acc = next;
    }
    (0..size).map(|i| acc[i][i].clone()).sum()
}

/// Number of N-periodic points of the shift: tr(A^N) over big integers.
pub fn periodic_points(g: usize, n: usize) -> BigInt {
    assert!(n >= 1, "periodic_points requires N >= 1");
    transition_power_trace(g, n)
}

fn moebius_mu(mut n: usize) -> i64 {
    let mut mu = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of primitive shift orbits of period N, by Moebius inversion over
/// tr(A^d). Equals direct necklace enumeration; the commonly quoted
/// simplified closed form differs at small N and is reported separately.
pub fn primitive_orbits(g: usize, n: usize) -> BigInt {
    assert!(n >= 1);
    let mut total = BigInt::zero();
    for d in 1..=n {
        if n % d == 0 {
            total += BigInt::from(moebius_mu(n / d)) * periodic_points(g, d);
        }
    }
    let (q, r) = num::Integer::div_rem(&total, &BigInt::from(n));
    assert!(r.is_zero(), "Moebius sum must be divisible by N");
    q
}

/// The simplified closed form R_N = (1/N) sum mu(d) (2g-1)^(N/d),
/// kept for side-by-side reporting only (it disagrees with enumeration).
pub fn simplified_closed_form(g: usize, n: usize) -> BigInt {
    let mut total = BigInt::zero();
    for d in 1..=n {
        if n % d == 0 {
            total += BigInt::from(moebius_mu(d)) * BigInt::from(2 * g - 1).pow((n / d) as u32);
        }
    }
    let (q, _r) = num::Integer::div_rem(&total, &BigInt::from(n));
    q
}

/// All reduced words of length n, in ranking order (see `word_rank`).
pub fn enumerate_words(g: usize, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..2 * g).rev().map(|a| vec![a]).collect();
    // depth-first in reverse push order yields ascending rank order
    while let Some(w) = stack.pop() {
        if w.len() == n {
            out.push(Word { letters: w });
            continue;
        }
        let last = *w.last().unwrap();
        let forbidden = inverse_letter(g, last);
        for a in (0..2 * g).rev() {
            if a != forbidden {
                let mut next = w.clone();
                next.push(a);
                stack.push(next);
            }
        }
    }
    out
}

/// O(1) rank of a length-n reduced word within `enumerate_words(g, n)`:
/// mixed-radix digits (first letter base 2g, then base 2g-1 skipping the
/// forbidden inverse).
pub fn word_rank(g: usize, letters: &[usize]) -> usize {
    let mut rank = letters[0];
    for k in 1..letters.len() {
        let forbidden = inverse_letter(g, letters[k - 1]);
        let digit = if letters[k] < forbidden { letters[k] } else { letters[k] - 1 };
        rank = rank * (2 * g - 1) + digit;
    }
    rank
}

/// Inverse of `word_rank` for length-n words.
pub fn word_at_rank(g: usize, n: usize, rank: usize) -> Vec<usize> {
    let base = 2 * g - 1;
    let mut digits = vec![0usize; n];
    let mut r = rank;
    for k in (1..n).rev() {
        digits[k] = r % base;
        r /= base;
    }
    let mut letters = vec![0usize; n];
    letters[0] = r;
    for k in 1..n {
        let forbidden = inverse_letter(g, letters[k - 1]);
        let d = digits[k];
        letters[k] = if d < forbidden { d } else { d + 1 };
    }
    letters
}

/// All cyclically admissible letter cycles of length N (periodic points
/// listed explicitly, not up to rotation).
pub fn enumerate_cycles(g: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..2 * g).rev().map(|a| vec![a]).collect();
    while let Some(w) = stack.pop() {
        if w.len() == n {
            if n == 1 || w[0] != inverse_letter(g, *w.last().unwrap()) {
                out.push(w);
            }
            continue;
        }
        let forbidden = inverse_letter(g, *w.last().unwrap());
        for a in (0..2 * g).rev() {
            if a != forbidden {
                let mut next = w.clone();
                next.push(a);
                stack.push(next);
            }
        }
    }
    out
}

/// Primitive necklaces of period exactly N, counted up to rotation.
pub fn enumerate_primitive_necklaces(g: usize, n: usize) -> Vec<CyclicWord> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for cycle in enumerate_cycles(g, n) {
        let cw = CyclicWord::new(g, cycle).expect("enumerated cycles are cyclically reduced");
        if cw.primitive_flag && seen.insert(cw.letters.clone()) {
            out.push(cw);
        }
    }
    out
}

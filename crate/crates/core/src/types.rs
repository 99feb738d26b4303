//! Method-of-types combinatorics over a finite alphabet.
//!
//! Types are integer count vectors, so `Π p_a^{n t_a}` uses exact integer exponents.

use alloc::vec;
use alloc::vec::Vec;

use crate::channel::Prior;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::math;

/// A sequence of alphabet indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence(pub Vec<usize>);

impl Sequence {
    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Empirical distribution with denominator `n`, stored as letter counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeClass {
    counts: Vec<usize>,
}

impl TypeClass {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidType("empty alphabet"));
        }
        if counts.iter().sum::<usize>() == 0 {
            return Err(Error::InvalidType("blocklength must be positive"));
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    /// `t_a = counts_a / n`.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.n() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// `|T_n^t| = n! / Π counts_a!`, exact while it fits in `u128`.
    pub fn class_size(&self) -> Option<u128> {
        multinomial(&self.counts)
    }

    /// `|T_n^t|` as a float (always available).
    pub fn class_size_f64(&self) -> f64 {
        let mut acc = 1.0;
        let mut total = 0usize;
        for &c in &self.counts {
            for i in 1..=c {
                total += 1;
                acc = acc * total as f64 / i as f64;
            }
        }
        acc
    }

    /// Point-mass type on letter `a`.
    pub fn point_mass(n: usize, alphabet_size: usize, a: usize) -> Result<Self> {
        let mut counts = vec![0; alphabet_size];
        counts[a] = n;
        Self::new(counts)
    }

    /// Type with denominator `n` closest to `prior` (largest-remainder rounding,
    /// ties broken toward the lower letter index).
    pub fn nearest(prior: &Prior, n: usize) -> Result<Self> {
        let w = prior.weights();
        let scaled: Vec<f64> = w.iter().map(|p| p * n as f64).collect();
        let mut counts: Vec<usize> = scaled.iter().map(|s| libm::floor(*s) as usize).collect();
        let mut left = n.saturating_sub(counts.iter().sum());
        let mut order: Vec<usize> = (0..w.len()).collect();
        order.sort_by(|&a, &b| {
            let ra = scaled[a] - counts[a] as f64;
            let rb = scaled[b] - counts[b] as f64;
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        for &i in order.iter().cycle() {
            if left == 0 {
                break;
            }
            counts[i] += 1;
            left -= 1;
        }
        Self::new(counts)
    }
}

/// Exact multinomial coefficient, `None` on overflow.
pub fn multinomial(counts: &[usize]) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut total: u128 = 0;
    for &c in counts {
        for i in 1..=c as u128 {
            total += 1;
            // acc * total / i stays integral: acc * C(total, i) progression.
            acc = acc.checked_mul(total)? / i;
        }
    }
    Some(acc)
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.checked_mul(n - k + i)? / i;
    }
    Some(acc)
}

/// Number of types `C(n + k − 1, k − 1)`.
pub fn type_count(n: usize, alphabet_size: usize) -> Option<u128> {
    if alphabet_size == 0 {
        return Some(0);
    }
    binomial((n + alphabet_size - 1) as u128, (alphabet_size - 1) as u128)
}

/// The type of a sequence.
pub fn type_of(x: &Sequence, alphabet_size: usize) -> Result<TypeClass> {
    let mut counts = vec![0; alphabet_size];
    for &letter in x.letters() {
        if letter >= alphabet_size {
            return Err(Error::InvalidSequence { letter, alphabet_size });
        }
        counts[letter] += 1;
    }
    TypeClass::new(counts)
}

/// All types with denominator `n`, first count descending: `(n,0,…), (n−1,1,…), …`.
pub fn enumerate_types(n: usize, alphabet_size: usize, limits: &Limits) -> Result<Vec<TypeClass>> {
    let count = type_count(n, alphabet_size).unwrap_or(u128::MAX);
    if count > limits.max_enumeration {
        return Err(Error::TooLarge { what: "type enumeration", size: count, cap: limits.max_enumeration });
    }
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<TypeClass>) {
        if cur.len() + 1 == k {
            cur.push(left);
            out.push(TypeClass { counts: cur.clone() });
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c);
            rec(k, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(count as usize);
    if n > 0 && alphabet_size > 0 {
        rec(alphabet_size, n, &mut Vec::with_capacity(alphabet_size), &mut out);
    }
    Ok(out)
}

/// Lazily enumerates `T_n^t` in lexicographic order.
pub fn enumerate_sequences(t: &TypeClass, limits: &Limits) -> Result<TypeSequences> {
    let size = t.class_size().unwrap_or(u128::MAX);
    if size > limits.max_enumeration {
        return Err(Error::TooLarge { what: "type class", size, cap: limits.max_enumeration });
    }
    let first: Vec<usize> = t.counts.iter().enumerate().flat_map(|(a, &c)| core::iter::repeat(a).take(c)).collect();
    Ok(TypeSequences { next: Some(first) })
}

/// Iterator over the sequences of one type class.
#[derive(Debug, Clone)]
pub struct TypeSequences {
    next: Option<Vec<usize>>,
}

impl Iterator for TypeSequences {
    type Item = Sequence;

    fn next(&mut self) -> Option<Sequence> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Sequence(current))
    }
}

/// Advances to the next lexicographic permutation; false when `v` was the last one.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `p^n(T_n^t) = |T_n^t| · Π_a p_a^{n t_a}`; zero when `t` puts mass outside `supp p`.
pub fn type_probability(p: &Prior, t: &TypeClass) -> Result<f64> {
    if p.len() != t.alphabet_size() {
        return Err(Error::DimensionError { expected: t.alphabet_size(), found: p.len() });
    }
    let mut prob = t.class_size_f64();
    for (&w, &c) in p.weights().iter().zip(&t.counts) {
        if c > 0 {
            if w == 0.0 {
                return Ok(0.0);
            }
            prob *= math::powi(w, c);
        }
    }
    Ok(prob)
}

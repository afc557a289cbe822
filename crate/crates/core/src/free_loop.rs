//! The free Moufang loop on `x_1, x_2, ...` with canonical-word elements.

use std::cmp::Ordering;
use std::fmt;

use dashmap::DashMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::WordError;
use crate::rewrite::{moufang_closure, normal_form, Limits};
use crate::word::{Generator, Literal, Word};

/// An element of the free Moufang loop, held as its canonical reduced word.
///
/// Ordered by length, then by word order; the identity comes first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LoopElement {
    word: Word,
    len: usize,
}

impl LoopElement {
    pub(crate) fn from_canonical(word: Word) -> Self {
        let len = word.len();
        LoopElement { word, len }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_identity(&self) -> bool {
        self.len == 0
    }

    pub fn max_generator(&self) -> u32 {
        self.word.max_generator()
    }

    pub fn degree(&self, n_gens: usize) -> Vec<i32> {
        self.word.degree(n_gens)
    }
}

impl Ord for LoopElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for LoopElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LoopElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

impl fmt::Debug for LoopElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LoopElement({})", self.word)
    }
}

/// Canonicalizing front end to the word calculus.
///
/// Products of canonical elements are memoized; the memo is internally
/// synchronized, so one instance can be shared across threads.
pub struct FreeMoufangLoop {
    limits: Limits,
    products: DashMap<(Word, Word), LoopElement>,
}

impl Default for FreeMoufangLoop {
    fn default() -> Self {
        Self::new(Limits::default())
    }
}

impl FreeMoufangLoop {
    pub fn new(limits: Limits) -> Self {
        FreeMoufangLoop { limits, products: DashMap::new() }
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn identity(&self) -> LoopElement {
        LoopElement::from_canonical(Word::empty())
    }

    pub fn generator(&self, index: u32) -> Result<LoopElement, WordError> {
        Ok(self.literal(Literal::new(Generator::new(index)?, false)))
    }

    pub fn literal(&self, lit: Literal) -> LoopElement {
        LoopElement::from_canonical(Word::literal(lit))
    }

    /// Canonical element of an arbitrary word.
    pub fn element(&self, w: &Word) -> Result<LoopElement, WordError> {
        let class = normal_form(w, self.limits)?;
        Ok(LoopElement::from_canonical(class.canonical().clone()))
    }

    pub fn mul(&self, a: &LoopElement, b: &LoopElement) -> Result<LoopElement, WordError> {
        if a.is_identity() {
            return Ok(b.clone());
        }
        if b.is_identity() {
            return Ok(a.clone());
        }
        let key = (a.word.clone(), b.word.clone());
        if let Some(hit) = self.products.get(&key) {
            return Ok(hit.clone());
        }
        let c = self.element(&Word::product(&a.word, &b.word))?;
        self.products.insert(key, c.clone());
        Ok(c)
    }

    /// Inversion maps reduced classes onto reduced classes of the same size,
    /// so only the order-minimal member has to be recomputed.
    pub fn inv(&self, a: &LoopElement) -> LoopElement {
        let inv = a.word.invert();
        let class = moufang_closure(&inv, usize::MAX).expect("uncapped closure");
        LoopElement::from_canonical(class.canonical().clone())
    }

    pub fn eq(&self, a: &LoopElement, b: &LoopElement) -> bool {
        a == b
    }

    /// `x(y·zy) = (xy·z)y` evaluated with canonicalizing products.
    pub fn check_moufang(&self, x: &LoopElement, y: &LoopElement, z: &LoopElement) -> Result<bool, WordError> {
        let lhs = self.mul(x, &self.mul(y, &self.mul(z, y)?)?)?;
        let rhs = self.mul(&self.mul(&self.mul(x, y)?, z)?, y)?;
        Ok(lhs == rhs)
    }

    /// `x⁻¹(xy) = y` and `(yx)x⁻¹ = y`.
    pub fn check_ip(&self, x: &LoopElement, y: &LoopElement) -> Result<bool, WordError> {
        let xi = self.inv(x);
        let left = self.mul(&xi, &self.mul(x, y)?)?;
        let right = self.mul(&self.mul(y, x)?, &xi)?;
        Ok(&left == y && &right == y)
    }

    /// Every canonical element of length at most `max_len` over
    /// `x_1..x_n` and inverses, sorted, identity first.
    pub fn enumerate_universe(&self, n_gens: u32, max_len: usize) -> Result<Vec<LoopElement>, WordError> {
        let mut by_len: Vec<Vec<LoopElement>> = vec![vec![self.identity()]];
        if max_len >= 1 {
            let mut lits = Vec::new();
            for i in 1..=n_gens {
                let g = Generator::new(i)?;
                lits.push(self.literal(Literal::new(g, false)));
                lits.push(self.literal(Literal::new(g, true)));
            }
            lits.sort();
            by_len.push(lits);
        }
        for k in 2..=max_len {
            let mut level = std::collections::BTreeSet::new();
            for i in 1..k {
                for a in &by_len[i] {
                    for b in &by_len[k - i] {
                        let c = self.mul(a, b)?;
                        if c.len() == k {
                            level.insert(c);
                        }
                    }
                }
            }
            by_len.push(level.into_iter().collect());
        }
        Ok(by_len.into_iter().flatten().collect())
    }

    /// A deterministic pseudo-random element of length at most `max_len`.
    pub fn random_element(&self, n_gens: u32, max_len: usize, seed: u64) -> Result<LoopElement, WordError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = rng.gen_range(0..=max_len);
        self.element(&random_word(&mut rng, n_gens, len))
    }
}

/// A uniformly shaped random word of exactly `len` leaves.
pub fn random_word<R: Rng>(rng: &mut R, n_gens: u32, len: usize) -> Word {
    match len {
        0 => Word::empty(),
        1 => {
            let g = Generator::new(rng.gen_range(1..=n_gens)).expect("generator in range");
            Word::literal(Literal::new(g, rng.gen_bool(0.5)))
        }
        _ => {
            let left = rng.gen_range(1..len);
            let l = random_word(rng, n_gens, left);
            let r = random_word(rng, n_gens, len - left);
            Word::product(&l, &r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_word;

    fn el(m: &FreeMoufangLoop, s: &str) -> LoopElement {
        m.element(&parse_word(s).unwrap()).unwrap()
    }

    #[test]
    fn identity_laws() {
        let m = FreeMoufangLoop::default();
        let a = el(&m, "(x1*x2)*x3^-1");
        assert_eq!(m.mul(&m.identity(), &a).unwrap(), a);
        assert_eq!(m.mul(&a, &m.identity()).unwrap(), a);
        assert_eq!(m.inv(&m.identity()), m.identity());
        assert!(m.identity().is_identity());
    }

    #[test]
    fn products_and_inverses() {
        let m = FreeMoufangLoop::default();
        let x1 = el(&m, "x1");
        let x2 = el(&m, "x2");
        assert_eq!(m.mul(&x1, &m.inv(&x1)).unwrap(), m.identity());
        let x1x2 = m.mul(&x1, &x2).unwrap();
        assert_eq!(x1x2.len(), 2);
        assert_eq!(m.mul(&x1x2, &m.inv(&x2)).unwrap(), x1);
        assert_eq!(m.inv(&x1x2), m.mul(&m.inv(&x2), &m.inv(&x1)).unwrap());
        assert_eq!(m.inv(&x1), el(&m, "x1^-1"));
    }

    #[test]
    fn moufang_move_identifies_elements() {
        let m = FreeMoufangLoop::default();
        assert_eq!(el(&m, "((x1*x2)*x1)*x3"), el(&m, "x1*(x2*(x1*x3))"));
        assert_ne!(el(&m, "x1"), el(&m, "x2"));
    }

    #[test]
    fn laws_on_generators() {
        let m = FreeMoufangLoop::default();
        let (x1, x2, x3) = (el(&m, "x1"), el(&m, "x2"), el(&m, "x3"));
        assert!(m.check_moufang(&x1, &x2, &x3).unwrap());
        assert!(m.check_moufang(&m.identity(), &x1, &x2).unwrap());
        assert!(m.check_ip(&x1, &x2).unwrap());
        assert!(m.check_ip(&m.identity(), &x2).unwrap());
    }

    #[test]
    fn small_universes() {
        let m = FreeMoufangLoop::default();
        let u = m.enumerate_universe(1, 1).unwrap();
        assert_eq!(u, vec![m.identity(), el(&m, "x1"), el(&m, "x1^-1")]);
        assert_eq!(m.enumerate_universe(1, 0).unwrap(), vec![m.identity()]);
        let u2 = m.enumerate_universe(2, 2).unwrap();
        assert!(!u2.iter().any(|e| e.word() == &parse_word("x1*x1^-1").unwrap()));
        assert!(u2.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn random_elements_are_deterministic() {
        let m = FreeMoufangLoop::default();
        let a = m.random_element(2, 3, 42).unwrap();
        assert_eq!(a, m.random_element(2, 3, 42).unwrap());
        assert!(a.len() <= 3);
        for seed in 0..20 {
            let e = m.random_element(1, 1, seed).unwrap();
            assert!(["e", "x1", "x1^-1"].contains(&e.to_string().as_str()));
        }
    }
}

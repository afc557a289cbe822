//! Free magma words over signed generators.
//!
//! A [`Word`] is stored as its prefix (Polish) token string: one byte per
//! node, `PRODUCT` for an inner node and an encoded literal for a leaf. The
//! empty word `e` is the empty token string. Comparing two encodings byte by
//! byte gives the total order used to pick canonical representatives: the
//! empty word first, then leaves ordered by generator index and sign
//! (positive before inverse), and every leaf before every product node,
//! with product nodes compared left subtree first.

use std::fmt;

use crate::error::WordError;

pub(crate) const PRODUCT: u8 = 0xFF;

/// Largest supported generator index.
pub const MAX_GENERATOR: u32 = 127;

/// A free generator `x_i`, `i >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(u8);

impl Generator {
    pub fn new(index: u32) -> Result<Self, WordError> {
        if index == 0 || index > MAX_GENERATOR {
            return Err(WordError::GeneratorOutOfRange(index));
        }
        Ok(Generator(index as u8))
    }

    pub fn index(self) -> u32 {
        u32::from(self.0)
    }
}

/// A generator or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub generator: Generator,
    pub inverse: bool,
}

impl Literal {
    pub fn new(generator: Generator, inverse: bool) -> Self {
        Literal { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Literal { inverse: !self.inverse, ..self }
    }

    /// Exponent contributed to the generator's degree: `+1` or `-1`.
    pub fn sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub(crate) fn token(self) -> u8 {
        (self.generator.0 - 1) * 2 + u8::from(self.inverse)
    }

    pub(crate) fn from_token(token: u8) -> Self {
        debug_assert!(token != PRODUCT);
        Literal { generator: Generator(token / 2 + 1), inverse: token % 2 == 1 }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.generator.0)?;
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

/// A binary product tree with literal leaves, or the empty word `e`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn literal(lit: Literal) -> Self {
        Word(vec![lit.token()])
    }

    /// Shorthand for the positive generator `x_index`.
    ///
    /// Panics if the index is outside `1..=MAX_GENERATOR`.
    pub fn gen(index: u32) -> Self {
        Word::literal(Literal::new(Generator::new(index).expect("generator index"), false))
    }

    /// Shorthand for the inverse generator `x_index^-1`.
    pub fn gen_inv(index: u32) -> Self {
        Word::literal(Literal::new(Generator::new(index).expect("generator index"), true))
    }

    /// `u · v`, with the empty word acting as identity.
    pub fn product(left: &Word, right: &Word) -> Word {
        Word(product_tokens(&left.0, &right.0))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of literal leaves, `l(w)`.
    pub fn len(&self) -> usize {
        self.0.iter().filter(|&&t| t != PRODUCT).count()
    }

    pub fn as_literal(&self) -> Option<Literal> {
        match self.0.as_slice() {
            [t] => Some(Literal::from_token(*t)),
            _ => None,
        }
    }

    /// The two factors of a product node.
    pub fn split(&self) -> Option<(Word, Word)> {
        split(&self.0).map(|(l, r)| (Word(l.to_vec()), Word(r.to_vec())))
    }

    /// Left-to-right sequence of leaves.
    pub fn leaves(&self) -> impl Iterator<Item = Literal> + '_ {
        self.0.iter().filter(|&&t| t != PRODUCT).map(|&t| Literal::from_token(t))
    }

    /// Formal inverse: leaves flip sign, product factors swap.
    pub fn invert(&self) -> Word {
        let mut out = Vec::with_capacity(self.0.len());
        invert_into(&self.0, &mut out);
        Word(out)
    }

    /// Largest generator index occurring in the word, 0 for `e`.
    pub fn max_generator(&self) -> u32 {
        self.leaves().map(|l| l.generator.index()).max().unwrap_or(0)
    }

    /// Exponent sum of every generator `x_1..x_n`.
    pub fn degree(&self, n_gens: usize) -> Vec<i32> {
        let mut deg = vec![0; n_gens];
        for lit in self.leaves() {
            let i = lit.generator.index() as usize - 1;
            if i < n_gens {
                deg[i] += lit.sign();
            }
        }
        deg
    }

    /// Number of nodes; preorder positions range over `0..node_count()`.
    pub fn node_count(&self) -> usize {
        self.0.len()
    }

    /// The subterm rooted at a preorder position.
    pub fn subterm(&self, pos: usize) -> Option<Word> {
        (pos < self.0.len()).then(|| Word(self.0[pos..subterm_end(&self.0, pos)].to_vec()))
    }

    /// Replaces the subterm at `pos`. Substituting `e` collapses the parent
    /// node onto the sibling.
    pub fn replace_at(&self, pos: usize, replacement: &Word) -> Word {
        Word(replace_tokens(&self.0, pos, &replacement.0))
    }

    pub(crate) fn tokens(&self) -> &[u8] {
        &self.0
    }

    pub(crate) fn from_tokens(tokens: Vec<u8>) -> Word {
        Word(tokens)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        write_tokens(&self.0, f)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

fn write_tokens(tokens: &[u8], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match split(tokens) {
        Some((l, r)) => {
            f.write_str("(")?;
            write_tokens(l, f)?;
            f.write_str("*")?;
            write_tokens(r, f)?;
            f.write_str(")")
        }
        None => write!(f, "{}", Literal::from_token(tokens[0])),
    }
}

/// End (exclusive) of the subterm starting at `start`.
pub(crate) fn subterm_end(tokens: &[u8], start: usize) -> usize {
    let mut need = 1usize;
    let mut i = start;
    while need > 0 {
        if tokens[i] == PRODUCT {
            need += 1;
        } else {
            need -= 1;
        }
        i += 1;
    }
    i
}

pub(crate) fn split(tokens: &[u8]) -> Option<(&[u8], &[u8])> {
    if tokens.first() != Some(&PRODUCT) {
        return None;
    }
    let mid = subterm_end(tokens, 1);
    Some((&tokens[1..mid], &tokens[mid..]))
}

pub(crate) fn product_tokens(left: &[u8], right: &[u8]) -> Vec<u8> {
    if left.is_empty() {
        return right.to_vec();
    }
    if right.is_empty() {
        return left.to_vec();
    }
    let mut out = Vec::with_capacity(left.len() + right.len() + 1);
    out.push(PRODUCT);
    out.extend_from_slice(left);
    out.extend_from_slice(right);
    out
}

pub(crate) fn invert_into(tokens: &[u8], out: &mut Vec<u8>) {
    match split(tokens) {
        Some((l, r)) => {
            out.push(PRODUCT);
            invert_into(r, out);
            invert_into(l, out);
        }
        None => {
            if let Some(&t) = tokens.first() {
                out.push(t ^ 1);
            }
        }
    }
}

pub(crate) fn inverted(tokens: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(tokens.len());
    invert_into(tokens, &mut out);
    out
}

fn replace_tokens(tokens: &[u8], pos: usize, replacement: &[u8]) -> Vec<u8> {
    if pos == 0 {
        return replacement.to_vec();
    }
    let (l, r) = split(tokens).expect("position inside a product");
    let l_start = 1;
    let r_start = 1 + l.len();
    if pos < r_start {
        let new_left = replace_tokens(l, pos - l_start, replacement);
        product_tokens(&new_left, r)
    } else {
        let new_right = replace_tokens(r, pos - r_start, replacement);
        product_tokens(l, &new_right)
    }
}

/// Splices a replacement for the subterm `[start, end)` into `tokens`. The
/// replacement must be non-empty.
pub(crate) fn splice(tokens: &[u8], start: usize, end: usize, replacement: &[u8]) -> Vec<u8> {
    debug_assert!(!replacement.is_empty());
    let mut out = Vec::with_capacity(tokens.len() - (end - start) + replacement.len());
    out.extend_from_slice(&tokens[..start]);
    out.extend_from_slice(replacement);
    out.extend_from_slice(&tokens[end..]);
    out
}

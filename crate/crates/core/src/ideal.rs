//! Truncated spans of the associator ideal `I(M)` and the circle algebra.
//!
//! `I(M)` is generated by
//!
//! ```text
//! v1(a,b,c) = (a,b,c) + (b,a,c)        v2(a,b,c) = (a,b,c) + (a,c,b)
//! ```
//!
//! and its elements are combinations of nested one-sided products
//! `d1·(… (v·dk) …)` with monomials `d_i`. A [`SpanBasis`] keeps exactly the
//! generators whose syntactic size `l(a)+l(b)+l(c)+Σ l(d_i)` is at most the
//! universe length `L`. Canonical reduction only shortens words, so every
//! such element is supported on elements of length `≤ L`.
//!
//! The ideal is graded by exponent-sum vectors (every generator and every
//! multiplier is homogeneous), so elimination runs per degree component.
//! A non-membership verdict only says that the element is outside this finite
//! truncation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, Field, LoopAlgebra, Scalar};
use crate::error::{AlgebraError, IdealError};
use crate::free_loop::{FreeMoufangLoop, LoopElement};
use crate::linalg::{field_row, scalar_row, Arith, Echelon, Row};
use crate::parse::parse_word;
use crate::with_arith;
use crate::word::Word;

pub const FORMAT_VERSION: u32 = 1;

pub fn v1(alg: &LoopAlgebra, a: &LoopElement, b: &LoopElement, c: &LoopElement) -> Result<AlgebraElement, AlgebraError> {
    let (a, b, c) = (alg.basis(a.clone()), alg.basis(b.clone()), alg.basis(c.clone()));
    alg.associator(&a, &b, &c)?.add(&alg.associator(&b, &a, &c)?)
}

pub fn v2(alg: &LoopAlgebra, a: &LoopElement, b: &LoopElement, c: &LoopElement) -> Result<AlgebraElement, AlgebraError> {
    let (a, b, c) = (alg.basis(a.clone()), alg.basis(b.clone()), alg.basis(c.clone()));
    alg.associator(&a, &b, &c)?.add(&alg.associator(&a, &c, &b)?)
}

/// Truncation parameters of a span.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanParams {
    pub n_gens: u32,
    /// Universe length `L`.
    pub max_len: usize,
    /// Longest argument of a seeded `v1`/`v2`.
    pub seed_len: usize,
    /// Refuse spans of larger rank.
    pub max_rank: usize,
    /// Restrict the universe to these degree components.
    pub components: Option<BTreeSet<Vec<i32>>>,
}

impl SpanParams {
    pub fn new(n_gens: u32, max_len: usize, seed_len: usize) -> Self {
        SpanParams { n_gens, max_len, seed_len, max_rank: 5_000_000, components: None }
    }
}

/// The admissible support of a span: canonical elements over `x_1..x_n` of
/// length `≤ L` (and of an admitted degree, if components are restricted).
/// Only elements that occur in some row are listed; they are sorted by
/// length, then word.
#[derive(Clone, Debug)]
pub struct SupportUniverse {
    n_gens: u32,
    max_len: usize,
    components: Option<BTreeSet<Vec<i32>>>,
    elements: Vec<LoopElement>,
    index: HashMap<LoopElement, usize>,
}

impl SupportUniverse {
    fn new(params: &SpanParams, mut elements: Vec<LoopElement>) -> Self {
        elements.sort();
        elements.dedup();
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        SupportUniverse { n_gens: params.n_gens, max_len: params.max_len, components: params.components.clone(), elements, index }
    }

    pub fn admits(&self, u: &LoopElement) -> bool {
        u.len() <= self.max_len
            && u.max_generator() <= self.n_gens
            && self.components.as_ref().map_or(true, |c| c.contains(&u.degree(self.n_gens as usize)))
    }

    pub fn elements(&self) -> &[LoopElement] {
        &self.elements
    }

    pub fn index_of(&self, u: &LoopElement) -> Option<usize> {
        self.index.get(u).copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Reduced row-echelon basis of a truncated span of `I(M)`.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    field: Field,
    params: SpanParams,
    universe: SupportUniverse,
    rows: Vec<Vec<(usize, Scalar)>>,
    pivots: HashMap<usize, usize>,
}

impl SpanBasis {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn params(&self) -> &SpanParams {
        &self.params
    }

    pub fn universe(&self) -> &SupportUniverse {
        &self.universe
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rows as coordinate lists over the universe, ascending pivots.
    pub fn rows(&self) -> &[Vec<(usize, Scalar)>] {
        &self.rows
    }

    pub fn row_element(&self, i: usize) -> AlgebraElement {
        let terms = self.rows[i].iter().map(|(c, v)| (self.universe.elements[*c].clone(), v.clone()));
        AlgebraElement::from_terms(self.field, terms).expect("uniform field")
    }

    pub fn row_elements(&self) -> impl Iterator<Item = AlgebraElement> + '_ {
        (0..self.rows.len()).map(|i| self.row_element(i))
    }

    /// Row-reduces arbitrary elements into a basis with the given
    /// parameters; used for imports and for hand-built spans.
    pub fn from_elements(field: Field, params: SpanParams, elements: &[AlgebraElement]) -> Result<SpanBasis, IdealError> {
        let mut support = BTreeSet::new();
        for x in elements {
            if x.field() != field {
                return Err(AlgebraError::FieldMismatch { left: field.to_string(), right: x.field().to_string() }.into());
            }
            support.extend(x.support().cloned());
        }
        let universe = SupportUniverse::new(&params, support.into_iter().collect());
        let outside: Vec<String> =
            universe.elements.iter().filter(|u| !universe.admits(u)).map(|u| u.to_string()).collect();
        if !outside.is_empty() {
            return Err(IdealError::SupportOutsideUniverse { elements: outside });
        }
        let rows = with_arith!(field, a => {
            let mut e = Echelon::new(a);
            for x in elements {
                let row: Vec<(usize, Scalar)> =
                    x.coeffs().iter().map(|(u, c)| (universe.index[u], c.clone())).collect();
                e.insert(&field_row(&a, &row));
            }
            e.into_reduced().iter().map(|r| scalar_row(&a, r)).collect::<Vec<_>>()
        });
        Ok(SpanBasis::assemble(field, params, universe, rows))
    }

    fn assemble(field: Field, params: SpanParams, universe: SupportUniverse, rows: Vec<Vec<(usize, Scalar)>>) -> Self {
        let pivots = rows.iter().enumerate().map(|(i, r)| (r[0].0, i)).collect();
        SpanBasis { field, params, universe, rows, pivots }
    }
}

/// Outcome of a membership query against a truncated span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub member: bool,
    /// Zero exactly for members.
    pub residue: AlgebraElement,
    pub universe_len: usize,
    pub rank: usize,
    pub params: SpanParams,
}

impl MembershipVerdict {
    /// One-line reminder of what a negative verdict means.
    pub fn caveat(&self) -> String {
        format!(
            "bounded certificate: relative to the span truncated at universe length {} over {} generators, seed length {}",
            self.params.max_len, self.params.n_gens, self.params.seed_len
        )
    }
}

pub fn membership(x: &AlgebraElement, basis: &SpanBasis) -> Result<MembershipVerdict, IdealError> {
    if x.field() != basis.field {
        return Err(AlgebraError::FieldMismatch { left: basis.field.to_string(), right: x.field().to_string() }.into());
    }
    let outside: Vec<String> = x.support().filter(|u| !basis.universe.admits(u)).map(|u| u.to_string()).collect();
    if !outside.is_empty() {
        return Err(IdealError::SupportOutsideUniverse { elements: outside });
    }
    // Rows are fully reduced, so one pass over the pivot columns suffices.
    let mut residue = x.clone();
    for (u, c) in x.coeffs() {
        let Some(col) = basis.universe.index_of(u) else { continue };
        let Some(&r) = basis.pivots.get(&col) else { continue };
        let factor = c.neg();
        for (k, v) in &basis.rows[r] {
            residue.add_term(basis.universe.elements[*k].clone(), &factor.mul(v)?)?;
        }
    }
    Ok(MembershipVerdict {
        member: residue.is_zero(),
        residue,
        universe_len: basis.universe.len(),
        rank: basis.rank(),
        params: basis.params.clone(),
    })
}

/// Builds the truncated span level by level, where the level of a generator
/// is its syntactic size. Candidates already in the span are not multiplied
/// further: their products are combinations of products of accepted rows of
/// no larger level.
pub fn generate_ideal_span(alg: &LoopAlgebra, params: &SpanParams) -> Result<SpanBasis, IdealError> {
    with_arith!(alg.field(), a => SpanBuilder::new(alg, params, a).run())
}

struct SpanBuilder<'a, A: Arith> {
    alg: &'a LoopAlgebra,
    params: &'a SpanParams,
    arith: A,
    columns: Vec<LoopElement>,
    column_of: HashMap<LoopElement, usize>,
    components: HashMap<Vec<i32>, Echelon<A>>,
    /// Accepted rows per level, as (degree, terms).
    levels: Vec<Vec<(Vec<i32>, Vec<(LoopElement, A::E)>)>>,
    rank: usize,
}

type Candidate = AlgebraElement;

impl<'a, A: Arith> SpanBuilder<'a, A> {
    fn new(alg: &'a LoopAlgebra, params: &'a SpanParams, arith: A) -> Self {
        SpanBuilder {
            alg,
            params,
            arith,
            columns: Vec::new(),
            column_of: HashMap::new(),
            components: HashMap::new(),
            levels: vec![Vec::new(); params.max_len + 1],
            rank: 0,
        }
    }

    fn free(&self) -> &FreeMoufangLoop {
        self.alg.free_loop()
    }

    fn n(&self) -> usize {
        self.params.n_gens as usize
    }

    /// Whether an element of degree `deg` at `level` can still feed an
    /// admitted component.
    fn reachable(&self, deg: &[i32], level: usize) -> bool {
        let Some(targets) = &self.params.components else { return true };
        let budget = (self.params.max_len - level) as i32;
        targets.iter().any(|t| t.iter().zip(deg).map(|(x, y)| (x - y).abs()).sum::<i32>() <= budget)
    }

    fn run(mut self) -> Result<SpanBasis, IdealError> {
        let l = self.params.max_len;
        let elems = self.free().enumerate_universe(self.params.n_gens, l.saturating_sub(3).max(self.params.seed_len))?;
        let by_len = |k: usize| elems.iter().filter(move |e| e.len() == k);
        for level in 3..=l {
            let mut candidates: Vec<Candidate> = Vec::new();
            // seeds whose argument lengths add up to this level
            let seeds: Vec<(&LoopElement, &LoopElement, &LoopElement)> = (1..=self.params.seed_len)
                .flat_map(|i| (1..=self.params.seed_len).map(move |j| (i, j)))
                .filter(|&(i, j)| i + j < level && level - i - j <= self.params.seed_len)
                .flat_map(|(i, j)| {
                    let k = level - i - j;
                    by_len(i).flat_map(move |x| by_len(j).flat_map(move |y| by_len(k).map(move |z| (x, y, z))))
                })
                .collect();
            let seed_rows: Vec<Result<[Candidate; 2], AlgebraError>> = seeds
                .par_iter()
                .map(|(x, y, z)| Ok([v1(self.alg, x, y, z)?, v2(self.alg, x, y, z)?]))
                .collect();
            for r in seed_rows {
                candidates.extend(r?);
            }
            // products of accepted rows of lower level
            for j in 1..=level - 3 {
                let rows = &self.levels[level - j];
                let ds: Vec<&LoopElement> = by_len(j).collect();
                let jobs: Vec<(usize, usize, bool)> = (0..rows.len())
                    .flat_map(|r| ds.iter().enumerate().flat_map(move |(d, _)| [(r, d, true), (r, d, false)]))
                    .filter(|&(r, d, _)| {
                        let deg: Vec<i32> =
                            rows[r].0.iter().zip(ds[d].degree(self.n())).map(|(x, y)| x + y).collect();
                        self.reachable(&deg, level)
                    })
                    .collect();
                let products: Vec<Result<Candidate, AlgebraError>> = jobs
                    .par_iter()
                    .map(|&(r, d, left)| self.multiply(&rows[r].1, ds[d], left))
                    .collect();
                for p in products {
                    candidates.push(p?);
                }
            }
            for c in candidates {
                self.offer(c, level)?;
            }
        }
        Ok(self.finish())
    }

    fn multiply(&self, row: &[(LoopElement, A::E)], d: &LoopElement, left: bool) -> Result<Candidate, AlgebraError> {
        let mut out = self.alg.zero();
        for (m, c) in row {
            let p = if left { self.free().mul(d, m)? } else { self.free().mul(m, d)? };
            out.add_term(p, &self.arith.to_scalar(c))?;
        }
        Ok(out)
    }

    fn offer(&mut self, c: Candidate, level: usize) -> Result<(), IdealError> {
        let Some(first) = c.support().next() else { return Ok(()) };
        let deg = first.degree(self.n());
        if !self.reachable(&deg, level) {
            return Ok(());
        }
        let mut row: Row<A::E> = Vec::with_capacity(c.len());
        for (u, s) in c.coeffs() {
            let col = match self.column_of.get(u) {
                Some(&col) => col,
                None => {
                    self.columns.push(u.clone());
                    self.column_of.insert(u.clone(), self.columns.len() - 1);
                    self.columns.len() - 1
                }
            };
            row.push((col, self.arith.from_scalar(s)));
        }
        row.sort_by_key(|(col, _)| *col);
        let arith = self.arith.clone();
        let echelon = self.components.entry(deg.clone()).or_insert_with(|| Echelon::new(arith));
        if echelon.insert(&row) {
            self.rank += 1;
            if self.rank > self.params.max_rank {
                return Err(IdealError::DimensionOverflow { bound: self.params.max_rank });
            }
            let terms = c.coeffs().iter().map(|(u, s)| (u.clone(), self.arith.from_scalar(s))).collect();
            self.levels[level].push((deg, terms));
        }
        Ok(())
    }

    /// Re-indexes columns in universe order and recomputes each component's
    /// reduced echelon form there.
    fn finish(self) -> SpanBasis {
        let SpanBuilder { alg, params, arith, columns, components, .. } = self;
        let keep: Vec<LoopElement> = match &params.components {
            None => columns.clone(),
            Some(t) => columns.iter().filter(|u| t.contains(&u.degree(params.n_gens as usize))).cloned().collect(),
        };
        let universe = SupportUniverse::new(params, keep);
        let mut keys: Vec<&Vec<i32>> = components.keys().collect();
        keys.sort();
        let blocks: Vec<Vec<Row<A::E>>> = keys
            .par_iter()
            .filter(|k| params.components.as_ref().map_or(true, |t| t.contains(**k)))
            .map(|k| {
                let mut e = Echelon::new(arith.clone());
                for r in components[*k].rows() {
                    let mut moved: Row<A::E> =
                        r.iter().map(|(c, v)| (universe.index[&columns[*c]], v.clone())).collect();
                    moved.sort_by_key(|(c, _)| *c);
                    e.insert(&moved);
                }
                e.into_reduced()
            })
            .collect();
        let mut rows: Vec<Vec<(usize, Scalar)>> = blocks.iter().flatten().map(|r| scalar_row(&arith, r)).collect();
        rows.sort_by_key(|r| r[0].0);
        SpanBasis::assemble(alg.field(), params.clone(), universe, rows)
    }
}

/// `x ∘ y = x + y - xy`.
pub fn circle(alg: &LoopAlgebra, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    x.add(y)?.sub(&alg.mul(x, y)?)
}

/// The circle inverse `1 - v⁻¹` of an element `1 - v`.
pub fn circle_inverse(alg: &LoopAlgebra, x: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    if x.is_zero() {
        return Ok(x.clone());
    }
    let v = alg.one().sub(x)?;
    match v.as_monomial() {
        Some((c, u)) if c.is_one() => Ok(alg.one_minus(&alg.free_loop().inv(u))),
        _ => Err(AlgebraError::NotCircleInvertible(x.to_string())),
    }
}

/// Evaluates `w` with `∘` for the product and circle inverses at inverted
/// leaves; the empty word evaluates to `0`, the circle identity.
pub fn circle_word_eval(
    alg: &LoopAlgebra,
    w: &Word,
    assignment: &BTreeMap<u32, AlgebraElement>,
) -> Result<AlgebraElement, AlgebraError> {
    if w.is_empty() {
        return Ok(alg.zero());
    }
    if let Some(lit) = w.as_literal() {
        let g = lit.generator.index();
        let x = assignment.get(&g).ok_or(AlgebraError::UnassignedGenerator(g))?;
        return if lit.inverse { circle_inverse(alg, x) } else { Ok(x.clone()) };
    }
    let (l, r) = w.split().expect("product node");
    circle(alg, &circle_word_eval(alg, &l, assignment)?, &circle_word_eval(alg, &r, assignment)?)
}

/// An element of the formal circle algebra, written in the barred basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleAlgebraElement {
    field: Field,
    coeffs: BTreeMap<LoopElement, Scalar>,
}

impl CircleAlgebraElement {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &BTreeMap<LoopElement, Scalar> {
        &self.coeffs
    }
}

impl std::fmt::Display for CircleAlgebraElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(u, c)| format!("{c}*bar({u})")).collect();
        f.write_str(&parts.join(" + "))
    }
}

pub fn phi_iso(x: &AlgebraElement) -> CircleAlgebraElement {
    CircleAlgebraElement { field: x.field(), coeffs: x.coeffs().clone() }
}

pub fn phi_inv(z: &CircleAlgebraElement) -> AlgebraElement {
    AlgebraElement::from_terms(z.field, z.coeffs.iter().map(|(u, c)| (u.clone(), c.clone()))).expect("uniform field")
}

/// Bilinear product with `ū ⋄ v̄ = (uv)‾`.
pub fn circle_product(
    alg: &LoopAlgebra,
    x: &CircleAlgebraElement,
    y: &CircleAlgebraElement,
) -> Result<CircleAlgebraElement, AlgebraError> {
    let mut out = AlgebraElement::zero(x.field);
    for (u, a) in &x.coeffs {
        for (v, b) in &y.coeffs {
            out.add_term(alg.free_loop().mul(u, v)?, &a.mul(b)?)?;
        }
    }
    Ok(phi_iso(&out))
}

/// Coefficient sum in the barred basis.
pub fn c_aug(z: &CircleAlgebraElement) -> Scalar {
    phi_inv(z).augmentation()
}

/// Circle associator of `1-a, 1-b, 1-c` equals `-(a,b,c)`.
pub fn check_lemma5_identity(alg: &LoopAlgebra, a: &LoopElement, b: &LoopElement, c: &LoopElement) -> Result<bool, AlgebraError> {
    let (x, y, z) = (alg.one_minus(a), alg.one_minus(b), alg.one_minus(c));
    let left = circle(alg, &circle(alg, &x, &y)?, &z)?;
    let right = circle(alg, &x, &circle(alg, &y, &z)?)?;
    let assoc = alg.associator(&alg.basis(a.clone()), &alg.basis(b.clone()), &alg.basis(c.clone()))?;
    Ok(left.sub(&right)? == assoc.neg())
}

/// Both `(x,x,y)` and `(y,x,x)` lie in the span.
pub fn check_alternative(alg: &LoopAlgebra, x: &AlgebraElement, y: &AlgebraElement, basis: &SpanBasis) -> Result<bool, IdealError> {
    let left = alg.associator(x, x, y)?;
    let right = alg.associator(y, x, x)?;
    Ok(membership(&left, basis)?.member && membership(&right, basis)?.member)
}

/// Membership of `1 - u`; a non-member verdict is the expected outcome.
pub fn check_embedding(alg: &LoopAlgebra, u: &LoopElement, basis: &SpanBasis) -> Result<MembershipVerdict, IdealError> {
    if u.is_identity() {
        return Err(IdealError::IdentityInput);
    }
    membership(&alg.one_minus(u), basis)
}

/// Every row has vanishing barred augmentation.
pub fn check_c_vanishing(basis: &SpanBasis) -> bool {
    basis.row_elements().all(|x| c_aug(&phi_iso(&x)).is_zero())
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Rational(usize, String, String),
    Prime(usize, u64),
}

#[derive(Serialize, Deserialize)]
struct BasisDocument {
    format_version: u32,
    field: String,
    n_gens: u32,
    max_len: usize,
    seed_len: usize,
    max_rank: usize,
    components: Option<Vec<Vec<i32>>>,
    elements: Vec<String>,
    rows: Vec<Vec<Entry>>,
}

impl SpanBasis {
    pub fn to_json(&self) -> String {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(c, v)| match v {
                        Scalar::Rational(q) => Entry::Rational(*c, q.numer().to_string(), q.denom().to_string()),
                        Scalar::Prime { value, .. } => Entry::Prime(*c, *value),
                    })
                    .collect()
            })
            .collect();
        let doc = BasisDocument {
            format_version: FORMAT_VERSION,
            field: self.field.to_string(),
            n_gens: self.params.n_gens,
            max_len: self.params.max_len,
            seed_len: self.params.seed_len,
            max_rank: self.params.max_rank,
            components: self.params.components.as_ref().map(|c| c.iter().cloned().collect()),
            elements: self.universe.elements.iter().map(|e| e.to_string()).collect(),
            rows,
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    /// Reads a document written by [`SpanBasis::to_json`]; element words
    /// must already be canonical.
    pub fn from_json(text: &str, free: &FreeMoufangLoop) -> Result<SpanBasis, IdealError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| IdealError::Malformed(e.to_string()))?;
        let found = value.get("format_version").and_then(|v| v.as_u64()).ok_or_else(|| {
            IdealError::Malformed("missing format_version".into())
        })?;
        if found != u64::from(FORMAT_VERSION) {
            return Err(IdealError::FormatVersion { found: found as u32, expected: FORMAT_VERSION });
        }
        let doc: BasisDocument = serde_json::from_value(value).map_err(|e| IdealError::Malformed(e.to_string()))?;
        let field = Field::parse(&doc.field)?;
        let params = SpanParams {
            n_gens: doc.n_gens,
            max_len: doc.max_len,
            seed_len: doc.seed_len,
            max_rank: doc.max_rank,
            components: doc.components.map(|c| c.into_iter().collect()),
        };
        let mut elements = Vec::with_capacity(doc.elements.len());
        for s in &doc.elements {
            let w = parse_word(s).map_err(|e| IdealError::Malformed(format!("element {s:?}: {e}")))?;
            let u = free.element(&w)?;
            if u.word() != &w {
                return Err(IdealError::Malformed(format!("element {s:?} is not canonical")));
            }
            elements.push(u);
        }
        if elements.windows(2).any(|p| p[0] >= p[1]) {
            return Err(IdealError::Malformed("elements are not strictly sorted".into()));
        }
        let universe = SupportUniverse::new(&params, elements);
        if let Some(u) = universe.elements.iter().find(|u| !universe.admits(u)) {
            return Err(IdealError::SupportOutsideUniverse { elements: vec![u.to_string()] });
        }
        let mut rows = Vec::with_capacity(doc.rows.len());
        for r in doc.rows {
            let mut row = Vec::with_capacity(r.len());
            for e in r {
                let (c, v) = match (e, field) {
                    (Entry::Rational(c, n, d), Field::Rational) => {
                        let parse = |s: &str| s.parse::<BigInt>().map_err(|e| IdealError::Malformed(e.to_string()));
                        let (n, d) = (parse(&n)?, parse(&d)?);
                        if d == BigInt::from(0) {
                            return Err(IdealError::Malformed("zero denominator".into()));
                        }
                        (c, Scalar::Rational(BigRational::new(n, d)))
                    }
                    (Entry::Prime(c, v), Field::Prime(p)) if v < p => (c, Scalar::Prime { value: v, modulus: p }),
                    _ => return Err(IdealError::Malformed("row entry does not match the field".into())),
                };
                if c >= universe.len() {
                    return Err(IdealError::Malformed(format!("column {c} outside universe")));
                }
                row.push((c, v));
            }
            if row.is_empty() || row.windows(2).any(|p| p[0].0 >= p[1].0) {
                return Err(IdealError::Malformed("row columns must be non-empty and increasing".into()));
            }
            rows.push(row);
        }
        if rows.windows(2).any(|p| p[0][0].0 >= p[1][0].0) {
            return Err(IdealError::Malformed("pivots must be strictly increasing".into()));
        }
        Ok(SpanBasis::assemble(field, params, universe, rows))
    }
}

//! Moufang-equivalence, μ-contractions and normal forms.
//!
//! Two words are Moufang-equivalent when a chain of moves connects them. The
//! moves are applied at any subterm, in both directions:
//!
//! * `((r·s)·r)·t  <->  r·(s·(r·t))` (left Moufang)
//! * `x·(y·(z·y))  <->  ((x·y)·z)·y` (right Moufang), plus the instances of
//!   both with one pattern variable erased: `(r·r)·t <-> r·(r·t)`,
//!   `(r·s)·r <-> r·(s·r)`, `x·(y·y) <-> (x·y)·y`
//! * `(x·y)·(z·x)  <->  x·((y·z)·x)` (middle Moufang)
//! * `u⁻¹·((y·u)·z)  <->  (u⁻¹·y)·(u·z)` and its mirror image
//! * `((u·a)·c)·u⁻¹  <->  u·(a·(c·u⁻¹))` and `u·(y·u⁻¹) <-> (u·y)·u⁻¹`
//! * free rebracketing of any subterm built from at most two generators
//!
//! Every one of these holds in all Moufang loops, and every one keeps the
//! left-to-right leaf sequence, so a class is a subset of the bracketings of
//! one leaf sequence and is always finite. The left Moufang move alone is not
//! enough for reduction to be confluent; the others close the gaps that show
//! up on short words.
//!
//! A μ-contraction replaces a subterm `u⁻¹·(v·z)` or `(z·v)·u⁻¹` by `z`
//! whenever `u ≈ v` (`z` may be empty, which turns `u⁻¹·v` and `v·u⁻¹` into
//! `e`). Two further contractions come from the Moufang autotopisms:
//! `(u·(a·u))·(u⁻¹·b) -> u·(a·b)` and `(a·u⁻¹)·((u·b)·u) -> (a·b)·u`. The
//! normal form of a word is the Moufang class reached once no member admits
//! a contraction; [`normal_form`] walks every reduction path and refuses to
//! answer if two paths end in different classes.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::WordError;
use crate::word::{inverted, split, splice, subterm_end, Word, PRODUCT};

pub const DEFAULT_CLOSURE_CAP: usize = 20_000;
pub const DEFAULT_PATH_BUDGET: usize = 100_000;

/// Resource bounds for closure enumeration and reduction search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub closure_cap: usize,
    pub path_budget: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { closure_cap: DEFAULT_CLOSURE_CAP, path_budget: DEFAULT_PATH_BUDGET }
    }
}

/// A Moufang-equivalence class, members in ascending word order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquivalenceClass {
    members: Vec<Word>,
}

impl EquivalenceClass {
    /// The order-minimal member.
    pub fn canonical(&self) -> &Word {
        &self.members[0]
    }

    pub fn members(&self) -> &[Word] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.members.binary_search(w).is_ok()
    }
}

fn prod(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(a.len() + b.len() + 1);
    out.push(PRODUCT);
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out
}

/// All words obtained from `s` by one move applied at the root.
fn root_moves(s: &[u8], out: &mut Vec<Vec<u8>>) {
    let Some((left, right)) = split(s) else { return };

    if let Some((b, r2)) = split(left) {
        // ((r·s)·r)·t -> r·(s·(r·t))
        if let Some((r, sx)) = split(b) {
            if r == r2 {
                out.push(prod(r, &prod(sx, &prod(r, right))));
            }
        }
        // ((x·y)·z)·y -> x·(y·(z·y))
        if let Some((x, y)) = split(b) {
            if y == right {
                out.push(prod(x, &prod(y, &prod(r2, y))));
            }
        }
        // (r·r)·t -> r·(r·t)
        if b == r2 {
            out.push(prod(b, &prod(b, right)));
        }
        // (r·s)·r -> r·(s·r)
        if b == right {
            out.push(prod(b, &prod(r2, b)));
        }
        // (x·y)·y -> x·(y·y)
        if r2 == right {
            out.push(prod(b, &prod(r2, r2)));
        }
    }

    if let Some((c1, c2)) = split(right) {
        // r·(s·(r·t)) -> ((r·s)·r)·t
        if let Some((r2, t)) = split(c2) {
            if r2 == left {
                out.push(prod(&prod(&prod(left, c1), left), t));
            }
        }
        // x·(y·(z·y)) -> ((x·y)·z)·y
        if let Some((z, y2)) = split(c2) {
            if y2 == c1 {
                out.push(prod(&prod(&prod(left, c1), z), c1));
            }
        }
        // r·(r·t) -> (r·r)·t
        if c1 == left {
            out.push(prod(&prod(left, left), c2));
        }
        // r·(s·r) -> (r·s)·r
        if c2 == left {
            out.push(prod(&prod(left, c1), left));
        }
        // x·(y·y) -> (x·y)·y
        if c1 == c2 {
            out.push(prod(&prod(left, c1), c1));
        }
    }

    // (x·y)·(z·x) <-> x·((y·z)·x)
    if let (Some((x, y)), Some((z, x2))) = (split(left), split(right)) {
        if x == x2 {
            out.push(prod(x, &prod(&prod(y, z), x)));
        }
    }
    if let Some((yz, x2)) = split(right) {
        if x2 == left {
            if let Some((y, z)) = split(yz) {
                out.push(prod(&prod(left, y), &prod(z, left)));
            }
        }
    }

    // u⁻¹·((y·u)·z) <-> (u⁻¹·y)·(u·z)
    if let Some((a, z)) = split(right) {
        if let Some((y, u)) = split(a) {
            if is_inverse_pair(left, u) {
                out.push(prod(&prod(left, y), &prod(u, z)));
            }
        }
    }
    if let (Some((ui, y)), Some((u, z))) = (split(left), split(right)) {
        if is_inverse_pair(ui, u) {
            out.push(prod(ui, &prod(&prod(y, u), z)));
        }
    }
    // (z·(u·y))·u⁻¹ <-> (z·u)·(y·u⁻¹)
    if let Some((z, a)) = split(left) {
        if let Some((u, y)) = split(a) {
            if is_inverse_pair(u, right) {
                out.push(prod(&prod(z, u), &prod(y, right)));
            }
        }
    }
    if let (Some((z, u)), Some((y, ui))) = (split(left), split(right)) {
        if is_inverse_pair(u, ui) {
            out.push(prod(&prod(z, &prod(u, y)), ui));
        }
    }
    // ((u·a)·c)·u⁻¹ <-> u·(a·(c·u⁻¹))
    if let Some((ua, c)) = split(left) {
        if let Some((u, a)) = split(ua) {
            if is_inverse_pair(u, right) {
                out.push(prod(u, &prod(a, &prod(c, right))));
            }
        }
    }
    if let Some((a, cu)) = split(right) {
        if let Some((c, ui)) = split(cu) {
            if is_inverse_pair(left, ui) {
                out.push(prod(&prod(&prod(left, a), c), ui));
            }
        }
    }
    // u·(y·u⁻¹) <-> (u·y)·u⁻¹
    if let Some((y, ui)) = split(right) {
        if is_inverse_pair(left, ui) {
            out.push(prod(&prod(left, y), ui));
        }
    }
    if let Some((u, y)) = split(left) {
        if is_inverse_pair(u, right) {
            out.push(prod(u, &prod(y, right)));
        }
    }

    // two-generator subterms associate freely
    if generator_count(s) <= 2 {
        if let Some((a1, a2)) = split(left) {
            out.push(prod(a1, &prod(a2, right)));
        }
        if let Some((b1, b2)) = split(right) {
            out.push(prod(&prod(left, b1), b2));
        }
    }
}

fn is_inverse_pair(a: &[u8], b: &[u8]) -> bool {
    a.len() == b.len() && inverted(a) == b
}

fn generator_count(s: &[u8]) -> usize {
    let mut first = None;
    for &t in s {
        if t == PRODUCT {
            continue;
        }
        let g = t >> 1;
        match first {
            None => first = Some(g),
            Some(f) if f == g => {}
            Some(f) => {
                if s.iter().any(|&u| u != PRODUCT && u >> 1 != f && u >> 1 != g) {
                    return 3;
                }
                return 2;
            }
        }
    }
    usize::from(first.is_some())
}

/// All words one Moufang move away from `w`.
pub fn moufang_neighbours(w: &Word) -> Vec<Word> {
    let mut out = Vec::new();
    neighbours_into(w.tokens(), &mut out, &mut Vec::new());
    out.into_iter().map(Word::from_tokens).collect()
}

fn neighbours_into(tokens: &[u8], out: &mut Vec<Vec<u8>>, scratch: &mut Vec<Vec<u8>>) {
    for start in 0..tokens.len() {
        if tokens[start] != PRODUCT {
            continue;
        }
        let end = subterm_end(tokens, start);
        scratch.clear();
        root_moves(&tokens[start..end], scratch);
        for repl in scratch.iter() {
            out.push(splice(tokens, start, end, repl));
        }
    }
}

fn closure_tokens(tokens: &[u8], cap: usize) -> Result<Vec<Vec<u8>>, WordError> {
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(tokens.to_vec());
    queue.push_back(tokens.to_vec());
    let mut next = Vec::new();
    let mut scratch = Vec::new();
    while let Some(w) = queue.pop_front() {
        next.clear();
        neighbours_into(&w, &mut next, &mut scratch);
        for n in next.drain(..) {
            if !seen.contains(&n) {
                if seen.len() >= cap {
                    return Err(WordError::ClosureCapExceeded { cap, size: seen.len() + 1 });
                }
                seen.insert(n.clone());
                queue.push_back(n);
            }
        }
    }
    let mut members: Vec<Vec<u8>> = seen.into_iter().collect();
    members.sort_unstable();
    Ok(members)
}

/// Breadth-first Moufang-equivalence closure of `w`, refusing beyond `cap`
/// members.
pub fn moufang_closure(w: &Word, cap: usize) -> Result<EquivalenceClass, WordError> {
    let members = closure_tokens(w.tokens(), cap)?;
    Ok(EquivalenceClass { members: members.into_iter().map(Word::from_tokens).collect() })
}

pub fn moufang_equivalent(u: &Word, v: &Word, cap: usize) -> Result<bool, WordError> {
    Session::new(Limits { closure_cap: cap, ..Limits::default() }).equivalent(u.tokens(), v.tokens())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContractionKind {
    /// `u⁻¹·(v·z)` or `(z·v)·u⁻¹` with `u ≈ v`.
    Mu,
    /// One of the two autotopism contractions.
    Autotopism,
}

/// A contraction available in a word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Redex {
    /// Preorder node index of the contracted subterm (0 is the root).
    pub position: usize,
    /// The whole word after the contraction.
    pub result: Word,
    pub kind: ContractionKind,
}

/// Every μ-contraction of `w` itself (not of other members of its class).
pub fn find_mu_redexes(w: &Word, cap: usize) -> Result<Vec<Redex>, WordError> {
    let mut all = find_redexes(w, cap)?;
    all.retain(|r| r.kind == ContractionKind::Mu);
    Ok(all)
}

/// Every contraction of `w` itself, μ and autotopism alike.
pub fn find_redexes(w: &Word, cap: usize) -> Result<Vec<Redex>, WordError> {
    let mut session = Session::new(Limits { closure_cap: cap, ..Limits::default() });
    let mut out = Vec::new();
    session.redexes(w.tokens(), &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Terminal classes of the reduction search from one word.
#[derive(Clone, Debug)]
pub struct ReductionOutcome {
    /// Reduced classes reachable from the word, ascending by canonical member.
    pub terminals: Vec<EquivalenceClass>,
    /// Number of Moufang classes visited.
    pub explored: usize,
}

impl ReductionOutcome {
    pub fn is_confluent(&self) -> bool {
        self.terminals.len() == 1
    }
}

/// Explores every maximal reduction path from `w`.
pub fn explore_reductions(w: &Word, limits: Limits) -> Result<ReductionOutcome, WordError> {
    Session::new(limits).explore(w.tokens())
}

/// The unique reduced Moufang class of `w`.
pub fn normal_form(w: &Word, limits: Limits) -> Result<EquivalenceClass, WordError> {
    let outcome = explore_reductions(w, limits)?;
    if outcome.is_confluent() {
        Ok(outcome.terminals.into_iter().next().expect("one terminal"))
    } else {
        Err(WordError::ConfluenceViolation {
            word: w.to_string(),
            classes: outcome.terminals.iter().map(|c| c.canonical().to_string()).collect(),
        })
    }
}

/// Per-call memo of closures, shared by equivalence tests and the reduction
/// search.
struct Session {
    limits: Limits,
    class_of: HashMap<Vec<u8>, Arc<Vec<Vec<u8>>>>,
}

impl Session {
    fn new(limits: Limits) -> Self {
        Session { limits, class_of: HashMap::new() }
    }

    fn class(&mut self, tokens: &[u8]) -> Result<Arc<Vec<Vec<u8>>>, WordError> {
        if let Some(c) = self.class_of.get(tokens) {
            return Ok(c.clone());
        }
        let members = Arc::new(closure_tokens(tokens, self.limits.closure_cap)?);
        for m in members.iter() {
            self.class_of.insert(m.clone(), members.clone());
        }
        Ok(members)
    }

    fn equivalent(&mut self, a: &[u8], b: &[u8]) -> Result<bool, WordError> {
        if a == b {
            return Ok(true);
        }
        let leaves = |t: &[u8]| t.iter().copied().filter(|&x| x != PRODUCT).collect::<Vec<u8>>();
        if leaves(a) != leaves(b) {
            return Ok(false);
        }
        let ca = self.class(a)?;
        Ok(ca.binary_search_by(|m| m.as_slice().cmp(b)).is_ok())
    }

    fn redexes(&mut self, tokens: &[u8], out: &mut Vec<Redex>) -> Result<(), WordError> {
        use ContractionKind::*;
        for start in 0..tokens.len() {
            if tokens[start] != PRODUCT {
                continue;
            }
            let end = subterm_end(tokens, start);
            let (l, r) = split(&tokens[start..end]).expect("product node");
            let l_inv = inverted(l);
            let r_inv = inverted(r);
            let here = |repl: &[u8]| -> Word {
                let w = Word::from_tokens(tokens.to_vec());
                w.replace_at(start, &Word::from_tokens(repl.to_vec()))
            };
            // u⁻¹·v with u ≈ v
            if self.equivalent(&l_inv, r)? {
                out.push(Redex { position: start, result: here(&[]), kind: Mu });
            }
            // u⁻¹·(v·z)
            if let Some((v, z)) = split(r) {
                if self.equivalent(&l_inv, v)? {
                    out.push(Redex { position: start, result: here(z), kind: Mu });
                }
            }
            // (z·v)·u⁻¹
            if let Some((z, v)) = split(l) {
                if self.equivalent(&r_inv, v)? {
                    out.push(Redex { position: start, result: here(z), kind: Mu });
                }
            }
            // (u·(a·u))·(u⁻¹·b) -> u·(a·b)
            if let (Some((u, au)), Some((ui, b))) = (split(l), split(r)) {
                if let Some((a, u2)) = split(au) {
                    if u == u2 && is_inverse_pair(u, ui) {
                        out.push(Redex { position: start, result: here(&prod(u, &prod(a, b))), kind: Autotopism });
                    }
                }
            }
            // (a·u⁻¹)·((u·b)·u) -> (a·b)·u
            if let (Some((a, ui)), Some((ub, u))) = (split(l), split(r)) {
                if let Some((u2, b)) = split(ub) {
                    if u == u2 && is_inverse_pair(u, ui) {
                        out.push(Redex { position: start, result: here(&prod(&prod(a, b), u)), kind: Autotopism });
                    }
                }
            }
        }
        Ok(())
    }

    fn explore(&mut self, start: &[u8]) -> Result<ReductionOutcome, WordError> {
        let first = self.class(start)?;
        let mut visited: HashSet<Vec<u8>> = HashSet::new();
        let mut queue = VecDeque::new();
        visited.insert(first[0].clone());
        queue.push_back(first);
        let mut terminals: BTreeMap<Vec<u8>, Arc<Vec<Vec<u8>>>> = BTreeMap::new();
        let mut explored = 0usize;
        let mut found = Vec::new();
        while let Some(class) = queue.pop_front() {
            explored += 1;
            if explored > self.limits.path_budget {
                return Err(WordError::PathBudgetExceeded { budget: self.limits.path_budget });
            }
            found.clear();
            for m in class.iter() {
                self.redexes(m, &mut found)?;
            }
            if found.is_empty() {
                terminals.insert(class[0].clone(), class.clone());
                continue;
            }
            let mut results: Vec<Vec<u8>> = found.drain(..).map(|r| r.result.tokens().to_vec()).collect();
            results.sort_unstable();
            results.dedup();
            for r in results {
                let next = self.class(&r)?;
                if visited.insert(next[0].clone()) {
                    queue.push_back(next);
                }
            }
        }
        let terminals = terminals
            .into_values()
            .map(|members| EquivalenceClass {
                members: members.iter().cloned().map(Word::from_tokens).collect(),
            })
            .collect();
        Ok(ReductionOutcome { terminals, explored })
    }
}

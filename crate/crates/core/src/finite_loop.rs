//! Loops given by Cayley tables, normal subloops, quotients, and the ideals
//! `ωH` of their loop algebras.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::algebra::Field;
use crate::error::FiniteLoopError;
use crate::linalg::{left_kernel, Arith, Echelon, Row};
use crate::with_arith;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyDocument {
    pub order: usize,
    pub labels: Vec<String>,
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
}

/// A finite loop: a Latin square with a two-sided identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLoop {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

/// A set of element indices closed under the loop product.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subloop {
    members: BTreeSet<usize>,
}

impl Subloop {
    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(&x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &Subloop) -> bool {
        self.members.is_subset(&other.members)
    }
}

pub fn load_cayley(text: &str) -> Result<FiniteLoop, FiniteLoopError> {
    let doc: CayleyDocument = serde_json::from_str(text).map_err(|e| FiniteLoopError::Malformed(e.to_string()))?;
    FiniteLoop::from_document(doc)
}

impl FiniteLoop {
    pub fn from_document(doc: CayleyDocument) -> Result<FiniteLoop, FiniteLoopError> {
        let n = doc.order;
        if n == 0 {
            return Err(FiniteLoopError::Shape { order: 0, detail: "empty loop".into() });
        }
        if doc.labels.len() != n {
            return Err(FiniteLoopError::Shape { order: n, detail: format!("{} labels", doc.labels.len()) });
        }
        let distinct: BTreeSet<&String> = doc.labels.iter().collect();
        if distinct.len() != n {
            return Err(FiniteLoopError::Shape { order: n, detail: "labels are not distinct".into() });
        }
        if doc.table.len() != n {
            return Err(FiniteLoopError::Shape { order: n, detail: format!("{} rows", doc.table.len()) });
        }
        for (row, r) in doc.table.iter().enumerate() {
            if r.len() != n {
                return Err(FiniteLoopError::Shape { order: n, detail: format!("row {row} has {} entries", r.len()) });
            }
            for (column, &value) in r.iter().enumerate() {
                if value >= n {
                    return Err(FiniteLoopError::IndexOutOfRange { row, column, value, order: n });
                }
            }
        }
        for (row, r) in doc.table.iter().enumerate() {
            if let Some(value) = first_repeat(r.iter().copied()) {
                return Err(FiniteLoopError::RowNotPermutation { row, value });
            }
        }
        for column in 0..n {
            if let Some(value) = first_repeat(doc.table.iter().map(|r| r[column])) {
                return Err(FiniteLoopError::ColumnNotPermutation { column, value });
            }
        }
        let e = doc.identity;
        if e >= n || (0..n).any(|k| doc.table[e][k] != k || doc.table[k][e] != k) {
            return Err(FiniteLoopError::MissingIdentity(e));
        }
        Ok(FiniteLoop { labels: doc.labels, table: doc.table, identity: e })
    }

    pub fn to_document(&self) -> CayleyDocument {
        CayleyDocument { order: self.order(), labels: self.labels.clone(), identity: self.identity, table: self.table.clone() }
    }

    /// The cyclic group `Z_n`, elements labelled `0..n`.
    pub fn cyclic(n: usize) -> FiniteLoop {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteLoop { labels: (0..n).map(|i| i.to_string()).collect(), table, identity: 0 }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// The `x` with `x·a = e`.
    pub fn left_inverse(&self, a: usize) -> usize {
        (0..self.order()).find(|&x| self.mul(x, a) == self.identity).expect("Latin square")
    }

    /// The `x` with `a·x = e`.
    pub fn right_inverse(&self, a: usize) -> usize {
        (0..self.order()).find(|&x| self.mul(a, x) == self.identity).expect("Latin square")
    }

    /// Resolves a label, or a decimal index when no label matches.
    pub fn element(&self, name: &str) -> Result<usize, FiniteLoopError> {
        if let Some(i) = self.labels.iter().position(|l| l == name) {
            return Ok(i);
        }
        match name.parse::<usize>() {
            Ok(i) if i < self.order() => Ok(i),
            _ => Err(FiniteLoopError::UnknownElement(name.to_string())),
        }
    }

    /// A triple violating `x(y·zy) = (xy·z)y`, if any.
    pub fn moufang_violation(&self) -> Option<[usize; 3]> {
        let n = self.order();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = self.mul(x, self.mul(y, self.mul(z, y)));
                    let rhs = self.mul(self.mul(self.mul(x, y), z), y);
                    if lhs != rhs {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    pub fn is_moufang(&self) -> bool {
        self.moufang_violation().is_none()
    }

    /// A pair violating `x⁻¹(xy) = y = (yx)x⁻¹`, if any.
    pub fn ip_violation(&self) -> Option<[usize; 2]> {
        let n = self.order();
        for x in 0..n {
            let (li, ri) = (self.left_inverse(x), self.right_inverse(x));
            if li != ri {
                return Some([x, x]);
            }
            for y in 0..n {
                if self.mul(li, self.mul(x, y)) != y || self.mul(self.mul(y, x), ri) != y {
                    return Some([x, y]);
                }
            }
        }
        None
    }

    pub fn is_ip(&self) -> bool {
        self.ip_violation().is_none()
    }

    /// The subloop generated by `gens`; `{e}` for no generators.
    pub fn subloop(&self, gens: &[usize]) -> Subloop {
        let mut members: BTreeSet<usize> = gens.iter().copied().collect();
        members.insert(self.identity);
        let mut queue: VecDeque<usize> = members.iter().copied().collect();
        while let Some(a) = queue.pop_front() {
            let current: Vec<usize> = members.iter().copied().collect();
            for b in current {
                for p in [self.mul(a, b), self.mul(b, a)] {
                    if members.insert(p) {
                        queue.push_back(p);
                    }
                }
            }
        }
        Subloop { members }
    }

    /// Subloop generated by labels or indices.
    pub fn subloop_from_spec<S: AsRef<str>>(&self, spec: &[S]) -> Result<Subloop, FiniteLoopError> {
        let gens = spec.iter().map(|s| self.element(s.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Ok(self.subloop(&gens))
    }

    pub fn whole(&self) -> Subloop {
        Subloop { members: (0..self.order()).collect() }
    }

    pub fn trivial(&self) -> Subloop {
        Subloop { members: [self.identity].into() }
    }

    fn left_coset(&self, x: usize, h: &Subloop) -> BTreeSet<usize> {
        h.members.iter().map(|&k| self.mul(x, k)).collect()
    }

    fn right_coset(&self, h: &Subloop, x: usize) -> BTreeSet<usize> {
        h.members.iter().map(|&k| self.mul(k, x)).collect()
    }

    /// The first failing condition of `xH = Hx`, `x·yH = xy·H`,
    /// `H·xy = Hx·y`, if any.
    pub fn normality_violation(&self, h: &Subloop) -> Option<String> {
        let n = self.order();
        for x in 0..n {
            if self.left_coset(x, h) != self.right_coset(h, x) {
                return Some(format!("xH != Hx for x = {}", self.labels[x]));
            }
            for y in 0..n {
                let xy = self.mul(x, y);
                let a: BTreeSet<usize> = h.members.iter().map(|&k| self.mul(x, self.mul(y, k))).collect();
                if a != self.left_coset(xy, h) {
                    return Some(format!("x(yH) != (xy)H for x = {}, y = {}", self.labels[x], self.labels[y]));
                }
                let b: BTreeSet<usize> = h.members.iter().map(|&k| self.mul(self.mul(k, x), y)).collect();
                if b != self.right_coset(h, xy) {
                    return Some(format!("H(xy) != (Hx)y for x = {}, y = {}", self.labels[x], self.labels[y]));
                }
            }
        }
        None
    }

    pub fn is_normal_subloop(&self, h: &Subloop) -> bool {
        self.normality_violation(h).is_none()
    }

    /// `L/H` with cosets labelled by their least member, and the
    /// projection `L -> L/H`. Coset multiplication is checked to be well
    /// defined on every pair of representatives.
    pub fn quotient_loop(&self, h: &Subloop) -> Result<(FiniteLoop, Vec<usize>), FiniteLoopError> {
        if let Some(v) = self.normality_violation(h) {
            return Err(FiniteLoopError::NotNormal(v));
        }
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if coset_of[x] == usize::MAX {
                for y in self.left_coset(x, h) {
                    coset_of[y] = reps.len();
                }
                reps.push(x);
            }
        }
        let m = reps.len();
        let mut table = vec![vec![usize::MAX; m]; m];
        for x in 0..n {
            for y in 0..n {
                let (cx, cy, c) = (coset_of[x], coset_of[y], coset_of[self.mul(x, y)]);
                match table[cx][cy] {
                    usize::MAX => table[cx][cy] = c,
                    d if d != c => {
                        return Err(FiniteLoopError::NotNormal(format!(
                            "coset product of {} and {} is not well defined",
                            self.labels[x], self.labels[y]
                        )))
                    }
                    _ => {}
                }
            }
        }
        let labels = reps
            .iter()
            .map(|&r| {
                let names: Vec<&str> = self.left_coset(r, h).iter().map(|&k| self.labels[k].as_str()).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        let doc = CayleyDocument { order: m, labels, identity: coset_of[self.identity], table };
        Ok((FiniteLoop::from_document(doc)?, coset_of))
    }

    /// Product of a sparse vector with a basis element, on either side.
    fn times<A: Arith>(&self, v: &Row<A::E>, q: usize, left: bool) -> Row<A::E> {
        let mut out: BTreeMap<usize, A::E> = BTreeMap::new();
        for (p, c) in v {
            let k = if left { self.mul(q, *p) } else { self.mul(*p, q) };
            out.insert(k, c.clone());
        }
        out.into_iter().collect()
    }

    fn one_minus<A: Arith>(&self, a: &A, q: usize) -> Row<A::E> {
        if q == self.identity {
            return Vec::new();
        }
        let mut r = vec![(self.identity, a.one()), (q, a.neg(&a.one()))];
        r.sort_by_key(|(c, _)| *c);
        r
    }

    /// Two-sided ideal generated by `gens`, closed under multiplication by
    /// basis elements.
    fn ideal_closure<A: Arith>(&self, a: &A, gens: Vec<Row<A::E>>) -> Echelon<A> {
        let mut e = Echelon::new(a.clone());
        let mut queue: VecDeque<Row<A::E>> = VecDeque::new();
        for g in gens {
            if e.insert(&g) {
                queue.push_back(g);
            }
        }
        while let Some(r) = queue.pop_front() {
            for q in 0..self.order() {
                for left in [true, false] {
                    let p = self.times::<A>(&r, q, left);
                    if e.insert(&p) {
                        queue.push_back(p);
                    }
                }
            }
        }
        e
    }

    fn omega_echelon<A: Arith>(&self, a: &A, gens: &[usize]) -> Echelon<A> {
        self.ideal_closure(a, gens.iter().map(|&h| self.one_minus(a, h)).filter(|r| !r.is_empty()).collect())
    }

    fn kernel_rows<A: Arith>(&self, a: &A, h: &Subloop) -> Result<Vec<Row<A::E>>, FiniteLoopError> {
        let (quot, proj) = self.quotient_loop(h)?;
        let rows: Vec<Row<A::E>> = (0..self.order()).map(|q| vec![(proj[q], a.one())]).collect();
        Ok(left_kernel(a, &rows, quot.order()))
    }
}

fn first_repeat(values: impl Iterator<Item = usize>) -> Option<usize> {
    let mut seen = BTreeSet::new();
    values.into_iter().find(|&v| !seen.insert(v))
}

/// A subspace of `FL` given by a reduced echelon basis over dense
/// coordinates `0..|L|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpan {
    pub field: Field,
    pub dim: usize,
    /// Rows as `(coordinate, value)` lists, rendered as scalars.
    pub rows: Vec<Vec<(usize, crate::algebra::Scalar)>>,
}

fn to_span<A: Arith>(field: Field, e: Echelon<A>) -> FiniteSpan {
    let a = e.arith().clone();
    let rows: Vec<_> = e.into_reduced().iter().map(|r| crate::linalg::scalar_row(&a, r)).collect();
    FiniteSpan { field, dim: rows.len(), rows }
}

/// `ωH`: the ideal generated by `1 - h`, `h ∈ H`.
pub fn omega_h(l: &FiniteLoop, h: &Subloop, field: Field) -> FiniteSpan {
    let gens: Vec<usize> = h.members.iter().copied().collect();
    with_arith!(field, a => to_span(field, l.omega_echelon(&a, &gens)))
}

/// Kernel of the coefficient pushforward `FL -> F(L/H)`.
pub fn ker_phi(l: &FiniteLoop, h: &Subloop, field: Field) -> Result<FiniteSpan, FiniteLoopError> {
    with_arith!(field, a => {
        let rows = l.kernel_rows(&a, h)?;
        let mut e = Echelon::new(a);
        for r in &rows {
            e.insert(r);
        }
        Ok(to_span(field, e))
    })
}

/// Outcome of one item of the ideal/kernel lemma.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaItem {
    pub item: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Checks the six items relating `ωH`, `ker φ`, `L/H` and the augmentation
/// ideal. `nested`, when given, is a second normal subloop used for the
/// comparison statements of item 3.
pub fn verify_lemma1(
    l: &FiniteLoop,
    h: &Subloop,
    field: Field,
    nested: Option<&Subloop>,
) -> Result<Vec<LemmaItem>, FiniteLoopError> {
    if let Some(v) = l.normality_violation(h) {
        return Err(FiniteLoopError::NotNormal(v));
    }
    if let Some(v) = nested.and_then(|h2| l.normality_violation(h2)) {
        return Err(FiniteLoopError::NotNormal(v));
    }
    with_arith!(field, a => lemma1_items(l, h, &a, nested))
}

fn subspace_eq<A: Arith>(x: &Echelon<A>, y: &Echelon<A>) -> bool {
    x.rank() == y.rank() && x.rows().iter().all(|r| y.contains(r))
}

fn subspace_le<A: Arith>(x: &Echelon<A>, y: &Echelon<A>) -> bool {
    x.rows().iter().all(|r| y.contains(r))
}

fn lemma1_items<A: Arith>(
    l: &FiniteLoop,
    h: &Subloop,
    a: &A,
    nested: Option<&Subloop>,
) -> Result<Vec<LemmaItem>, FiniteLoopError> {
    let n = l.order();
    let hs: Vec<usize> = h.members.iter().copied().collect();
    let omega = l.omega_echelon(a, &hs);
    let mut ker = Echelon::new(a.clone());
    for r in l.kernel_rows(a, h)? {
        ker.insert(&r);
    }
    let (quot, proj) = l.quotient_loop(h)?;
    let mut items = Vec::new();
    let mut push = |item: u8, name: &str, passed: bool, detail: String| {
        items.push(LemmaItem { item, name: name.to_string(), passed, detail });
    };

    // 1) Ker φ = ωH, with ωH ⊆ Ker φ checked on its own as well
    let pushforward_vanishes = omega.rows().iter().all(|r| {
        let mut img: BTreeMap<usize, A::E> = BTreeMap::new();
        for (q, c) in r {
            let slot = img.entry(proj[*q]).or_insert_with(|| a.zero());
            *slot = a.add(slot, c);
        }
        img.values().all(|v| a.is_zero(v))
    });
    let eq = subspace_eq(&omega, &ker);
    push(
        1,
        "ker_phi_equals_omega_h",
        eq && pushforward_vanishes,
        format!("dim ωH = {}, dim ker φ = {}, ωH ⊆ ker φ: {}", omega.rank(), ker.rank(), pushforward_vanishes),
    );

    // 2) 1 - q ∈ ωH iff q ∈ H
    let wrong: Vec<&str> = (0..n)
        .filter(|&q| omega.contains(&l.one_minus(a, q)) != h.contains(q))
        .map(|q| l.labels[q].as_str())
        .collect();
    push(
        2,
        "one_minus_q_membership",
        wrong.is_empty(),
        if wrong.is_empty() { format!("checked all {n} elements") } else { format!("wrong verdict for {}", wrong.join(", ")) },
    );

    // 3) generation by a generating set, and comparisons with a second subloop
    let mut gens = Vec::new();
    for &x in &hs {
        if !l.subloop(&gens).contains(x) {
            gens.push(x);
        }
    }
    let from_gens = l.omega_echelon(a, &gens);
    let mut ok = subspace_eq(&from_gens, &omega);
    let names: Vec<&str> = gens.iter().map(|&g| l.labels[g].as_str()).collect();
    let mut detail = format!("generators {{{}}} give dim {}", names.join(","), from_gens.rank());
    if let Some(h2) = nested {
        let h2s: Vec<usize> = h2.members.iter().copied().collect();
        let omega2 = l.omega_echelon(a, &h2s);
        let distinct = (h != h2) == !subspace_eq(&omega, &omega2);
        let monotone = if h2.is_subset(h) {
            subspace_le(&omega2, &omega)
        } else if h.is_subset(h2) {
            subspace_le(&omega, &omega2)
        } else {
            true
        };
        // ω⟨H, H2⟩ = ωH + ωH2
        let joined: Vec<usize> = hs.iter().chain(&h2s).copied().collect();
        let join = l.subloop(&joined);
        let join_s: Vec<usize> = join.members.iter().copied().collect();
        let omega_join = l.omega_echelon(a, &join_s);
        let mut sum = omega.clone();
        for r in omega2.rows() {
            sum.insert(r);
        }
        let additive = subspace_eq(&sum, &omega_join);
        ok &= distinct && monotone && additive;
        detail.push_str(&format!(
            "; second subloop of order {}: distinct ideals {}, inclusion {}, ω(H1H2) = ωH1 + ωH2 {}",
            h2.len(),
            distinct,
            monotone,
            additive
        ));
    }
    push(3, "generation_and_comparison", ok, detail);

    // 4) ωL is the hyperplane of coefficient sum zero
    let all: Vec<usize> = (0..n).collect();
    let omega_l = l.omega_echelon(a, &all);
    let hyper = omega_l.rank() == n - 1
        && omega_l.rows().iter().all(|r| r.iter().fold(a.zero(), |s, (_, c)| a.add(&s, c)) == a.zero());
    push(4, "augmentation_hyperplane", hyper, format!("dim ωL = {}, |L| - 1 = {}", omega_l.rank(), n - 1));

    // 5) dim FL/ωH = |L/H| and dim ωL/ωH = dim ω(L/H)
    let m = quot.order();
    let quot_all: Vec<usize> = (0..m).collect();
    let omega_quot = quot.omega_echelon(a, &quot_all);
    let five = n - omega.rank() == m && omega_l.rank() - omega.rank() == omega_quot.rank();
    push(
        5,
        "quotient_dimensions",
        five,
        format!("dim FL - dim ωH = {}, |L/H| = {m}, dim ωL/ωH = {}, dim ω(L/H) = {}", n - omega.rank(), omega_l.rank() - omega.rank(), omega_quot.rank()),
    );

    // 6) the elements 1 - q span ωL as a vector space
    let mut plain = Echelon::new(a.clone());
    for q in 0..n {
        let r = l.one_minus(a, q);
        if !r.is_empty() {
            plain.insert(&r);
        }
    }
    push(6, "augmentation_spanned_by_one_minus_q", subspace_eq(&plain, &omega_l), format!("dim span{{1 - q}} = {}", plain.rank()));
    Ok(items)
}

//! Sparse exact elimination over ℚ and prime fields.
//!
//! Rows are sorted `(column, value)` lists without zeros. The pivot of a row
//! is its smallest column.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{mod_inv, Field, Scalar};

/// Field arithmetic on a compact element type.
pub trait Arith: Clone + Send + Sync {
    type E: Clone + PartialEq + Debug + Send + Sync;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Panics on zero.
    fn inv(&self, a: &Self::E) -> Self::E;
    fn to_scalar(&self, a: &Self::E) -> Scalar;
    fn from_scalar(&self, s: &Scalar) -> Self::E;
}

#[derive(Clone, Copy, Debug)]
pub struct ModP(pub u64);

impl Arith for ModP {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        mod_inv(*a, self.0)
    }
    fn to_scalar(&self, a: &u64) -> Scalar {
        Scalar::Prime { value: *a, modulus: self.0 }
    }
    fn from_scalar(&self, s: &Scalar) -> u64 {
        match s {
            Scalar::Prime { value, modulus } if *modulus == self.0 => *value,
            other => panic!("scalar {other:?} is not in GF({})", self.0),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Rationals;

impl Arith for Rationals {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn to_scalar(&self, a: &BigRational) -> Scalar {
        Scalar::Rational(a.clone())
    }
    fn from_scalar(&self, s: &Scalar) -> BigRational {
        match s {
            Scalar::Rational(q) => q.clone(),
            other => panic!("scalar {other:?} is not rational"),
        }
    }
}

pub type Row<E> = Vec<(usize, E)>;

/// Binds `$a` to the arithmetic of a [`Field`](crate::algebra::Field) and
/// evaluates `$body` with it.
#[macro_export]
macro_rules! with_arith {
    ($field:expr, $a:ident => $body:expr) => {
        match $field {
            $crate::algebra::Field::Rational => {
                let $a = $crate::linalg::Rationals;
                $body
            }
            $crate::algebra::Field::Prime(p) => {
                let $a = $crate::linalg::ModP(p);
                $body
            }
        }
    };
}

pub fn scalar_row<A: Arith>(arith: &A, row: &Row<A::E>) -> Vec<(usize, Scalar)> {
    row.iter().map(|(c, v)| (*c, arith.to_scalar(v))).collect()
}

pub fn field_row<A: Arith>(arith: &A, row: &[(usize, Scalar)]) -> Row<A::E> {
    row.iter().map(|(c, v)| (*c, arith.from_scalar(v))).collect()
}

/// Row-echelon form built by insertion; every stored row is monic at its
/// pivot and free of the other rows' pivots only after [`Echelon::into_reduced`].
#[derive(Clone, Debug)]
pub struct Echelon<A: Arith> {
    arith: A,
    rows: Vec<Row<A::E>>,
    pivot_row: HashMap<usize, usize>,
}

impl<A: Arith> Echelon<A> {
    pub fn new(arith: A) -> Self {
        Echelon { arith, rows: Vec::new(), pivot_row: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row<A::E>] {
        &self.rows
    }

    pub fn arith(&self) -> &A {
        &self.arith
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &Row<A::E>) -> Row<A::E> {
        let a = &self.arith;
        let mut acc: BTreeMap<usize, A::E> = v.iter().cloned().collect();
        let mut out = Vec::new();
        while let Some((col, val)) = acc.pop_first() {
            if a.is_zero(&val) {
                continue;
            }
            match self.pivot_row.get(&col) {
                Some(&r) => {
                    let factor = a.neg(&val);
                    for (c, x) in &self.rows[r][1..] {
                        let delta = a.mul(&factor, x);
                        let slot = acc.entry(*c).or_insert_with(|| a.zero());
                        *slot = a.add(slot, &delta);
                    }
                }
                None => out.push((col, val)),
            }
        }
        out
    }

    pub fn contains(&self, v: &Row<A::E>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &Row<A::E>) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let a = &self.arith;
        let inv = a.inv(&r[0].1);
        let row: Row<A::E> = r.iter().map(|(c, x)| (*c, a.mul(&inv, x))).collect();
        self.pivot_row.insert(row[0].0, self.rows.len());
        self.rows.push(row);
        true
    }

    /// Reduced row-echelon rows, sorted by pivot.
    pub fn into_reduced(self) -> Vec<Row<A::E>> {
        let a = self.arith.clone();
        let mut rows = self.rows;
        rows.sort_by_key(|r| r[0].0);
        let mut done: Echelon<A> = Echelon::new(a);
        // back substitution from the largest pivot down
        let mut reduced = Vec::with_capacity(rows.len());
        for row in rows.into_iter().rev() {
            let pivot = row[0].clone();
            let tail: Row<A::E> = row[1..].to_vec();
            let mut r = done.reduce(&tail);
            r.insert(0, pivot);
            done.pivot_row.insert(r[0].0, done.rows.len());
            done.rows.push(r.clone());
            reduced.push(r);
        }
        reduced.reverse();
        reduced
    }
}

/// Basis of the null space of the map `x ↦ x·M` given by `rows` (one row
/// per source coordinate, `n_cols` target coordinates): the row vectors
/// `λ` of length `rows.len()` with `Σ λ_i rows[i] = 0`.
pub fn left_kernel<A: Arith>(arith: &A, rows: &[Row<A::E>], n_cols: usize) -> Vec<Row<A::E>> {
    // eliminate on [M | I]; rows that vanish on the M part carry a kernel vector
    let mut e = Echelon::new(arith.clone());
    let mut kernel = Echelon::new(arith.clone());
    for (i, r) in rows.iter().enumerate() {
        let mut aug = r.clone();
        aug.push((n_cols + i, arith.one()));
        let red = e.reduce(&aug);
        if red.first().is_some_and(|(c, _)| *c >= n_cols) {
            let k: Row<A::E> = red.iter().map(|(c, x)| (c - n_cols, x.clone())).collect();
            kernel.insert(&k);
        } else {
            e.insert(&aug);
        }
    }
    kernel.into_reduced()
}

/// Rank of field-tagged rows.
pub fn rank_of(field: Field, rows: &[Vec<(usize, Scalar)>]) -> usize {
    crate::with_arith!(field, a => {
        let mut e = Echelon::new(a);
        for r in rows {
            e.insert(&field_row(&a, r));
        }
        e.rank()
    })
}

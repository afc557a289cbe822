//! Brute-force Moufang classes: every bracketing of a leaf sequence is
//! compared pairwise against the move rules, written here as predicates on
//! (before, after) pairs, and classes are read off with union-find.

use std::collections::{BTreeSet, HashMap};

use moufang::rewrite::moufang_closure;
use moufang::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum T {
    Leaf(u32, bool),
    Node(Box<T>, Box<T>),
}

pub use T::*;

pub fn node(a: &T, b: &T) -> T {
    Node(Box::new(a.clone()), Box::new(b.clone()))
}

fn parts(t: &T) -> Option<(&T, &T)> {
    match t {
        Node(a, b) => Some((a, b)),
        Leaf(..) => None,
    }
}

fn inverse(t: &T) -> T {
    match t {
        Leaf(g, i) => Leaf(*g, !i),
        Node(a, b) => node(&inverse(b), &inverse(a)),
    }
}

fn gens(t: &T, out: &mut BTreeSet<u32>) {
    match t {
        Leaf(g, _) => {
            out.insert(*g);
        }
        Node(a, b) => {
            gens(a, out);
            gens(b, out);
        }
    }
}

fn to_word(t: &T) -> Word {
    match t {
        Leaf(g, false) => Word::gen(*g),
        Leaf(g, true) => Word::gen_inv(*g),
        Node(a, b) => Word::product(&to_word(a), &to_word(b)),
    }
}

/// `((a·b)·c)` as nested accessors: returns `(a, b, c)` when `t = (a·b)·c`.
fn lassoc(t: &T) -> Option<(&T, &T, &T)> {
    let (ab, c) = parts(t)?;
    let (a, b) = parts(ab)?;
    Some((a, b, c))
}

/// `(a, b, c)` when `t = a·(b·c)`.
fn rassoc(t: &T) -> Option<(&T, &T, &T)> {
    let (a, bc) = parts(t)?;
    let (b, c) = parts(bc)?;
    Some((a, b, c))
}

/// One directed rule application at the root, `p` before and `q` after.
fn root_step(p: &T, q: &T) -> bool {
    // ((r·s)·r)·t -> r·(s·(r·t))
    if let (Some((rsr, t)), Some((r, s, rt))) = (parts(p), rassoc(q)) {
        if let (Some((r1, s1, r2)), Some((r3, t2))) = (lassoc(rsr), parts(rt)) {
            if r1 == r && r2 == r && r3 == r && s1 == s && t2 == t {
                return true;
            }
        }
    }
    // ((x·y)·z)·y -> x·(y·(z·y))
    if let (Some((xyz, y)), Some((x2, y2, zy))) = (parts(p), rassoc(q)) {
        if let (Some((x, y1, z)), Some((z2, y3))) = (lassoc(xyz), parts(zy)) {
            if x == x2 && y1 == y && y2 == y && y3 == y && z == z2 {
                return true;
            }
        }
    }
    if let (Some((a, b, c)), Some((a2, b2, c2))) = (lassoc(p), rassoc(q)) {
        let same = a == a2 && b == b2 && c == c2;
        // (r·r)·t, (r·s)·r and (x·y)·y reassociate
        if same && (a == b || a == c || b == c) {
            return true;
        }
        // free rebracketing with at most two generators
        let mut g = BTreeSet::new();
        gens(p, &mut g);
        if same && g.len() <= 2 {
            return true;
        }
    }
    // (x·y)·(z·x) -> x·((y·z)·x)
    if let (Some((xy, zx)), Some((x, yzx))) = (parts(p), parts(q)) {
        if let (Some((x1, y)), Some((z, x2)), Some((yz, x3))) = (parts(xy), parts(zx), parts(yzx)) {
            if let Some((y2, z2)) = parts(yz) {
                if x1 == x && x2 == x && x3 == x && y == y2 && z == z2 {
                    return true;
                }
            }
        }
    }
    // u⁻¹·((y·u)·z) -> (u⁻¹·y)·(u·z)
    if let (Some((ui, yuz)), Some((uiy, uz))) = (parts(p), parts(q)) {
        if let (Some((y, u, z)), Some((ui2, y2)), Some((u2, z2))) = (lassoc(yuz), parts(uiy), parts(uz)) {
            if &inverse(u) == ui && ui2 == ui && y2 == y && u2 == u && z2 == z {
                return true;
            }
        }
    }
    // (z·(u·y))·u⁻¹ -> (z·u)·(y·u⁻¹)
    if let (Some((zuy, ui)), Some((zu, yui))) = (parts(p), parts(q)) {
        if let (Some((z, u, y)), Some((z2, u2)), Some((y2, ui2))) = (rassoc(zuy), parts(zu), parts(yui)) {
            if &inverse(u) == ui && ui2 == ui && z2 == z && u2 == u && y2 == y {
                return true;
            }
        }
    }
    // ((u·a)·c)·u⁻¹ -> u·(a·(c·u⁻¹))
    if let (Some((uac, ui)), Some((u2, a2, cui))) = (parts(p), rassoc(q)) {
        if let (Some((u, a, c)), Some((c2, ui2))) = (lassoc(uac), parts(cui)) {
            if &inverse(u) == ui && u2 == u && a2 == a && c2 == c && ui2 == ui {
                return true;
            }
        }
    }
    // u·(y·u⁻¹) -> (u·y)·u⁻¹
    if let (Some((u, y, ui)), Some((u2, y2, ui2))) = (rassoc(p), lassoc(q)) {
        if &inverse(u) == ui && u2 == u && y2 == y && ui2 == ui {
            return true;
        }
    }
    false
}

/// `p` and `q` differ by one move at one position.
pub fn one_move(p: &T, q: &T) -> bool {
    if root_step(p, q) || root_step(q, p) {
        return true;
    }
    match (p, q) {
        (Node(a, b), Node(c, d)) => (a == c && one_move(b, d)) || (b == d && one_move(a, c)),
        _ => false,
    }
}

fn bracketings(leaves: &[T]) -> Vec<T> {
    if leaves.len() == 1 {
        return vec![leaves[0].clone()];
    }
    let mut out = Vec::new();
    for k in 1..leaves.len() {
        for l in bracketings(&leaves[..k]) {
            for r in bracketings(&leaves[k..]) {
                out.push(node(&l, &r));
            }
        }
    }
    out
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// Compares `moufang_closure` with the oracle classes on every bracketing
/// of `leaves`.
pub fn check_leaf_sequence(leaves: &[T]) -> Result<(), String> {
    let trees = bracketings(leaves);
    let mut parent: Vec<usize> = (0..trees.len()).collect();
    for i in 0..trees.len() {
        for j in i + 1..trees.len() {
            if one_move(&trees[i], &trees[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut classes: HashMap<usize, BTreeSet<Word>> = HashMap::new();
    for (i, t) in trees.iter().enumerate() {
        let root = find(&mut parent, i);
        classes.entry(root).or_default().insert(to_word(t));
    }
    for (i, t) in trees.iter().enumerate() {
        let root = find(&mut parent, i);
        let w = to_word(t);
        let got: BTreeSet<Word> =
            moufang_closure(&w, 100_000).map_err(|e| format!("{w}: {e}"))?.members().iter().cloned().collect();
        if got != classes[&root] {
            return Err(format!("closure of {w} has {} members, oracle class has {}", got.len(), classes[&root].len()));
        }
    }
    Ok(())
}

/// Runs the comparison for all words of length at most `max_len` over
/// `x1, x2`; returns the number of leaf sequences checked.
pub fn check_all(max_len: u32) -> Result<usize, String> {
    let alphabet = [Leaf(1, false), Leaf(1, true), Leaf(2, false), Leaf(2, true)];
    if moufang_closure(&Word::empty(), 10).map_err(|e| e.to_string())?.members() != [Word::empty()] {
        return Err("closure of e".into());
    }
    let mut checked = 1;
    for n in 1..=max_len {
        for code in 0..4usize.pow(n) {
            let leaves: Vec<T> = (0..n).map(|k| alphabet[(code / 4usize.pow(k)) % 4].clone()).collect();
            check_leaf_sequence(&leaves)?;
            checked += 1;
        }
    }
    Ok(checked)
}


//! Every move, contraction and canonical form must hold in concrete
//! Moufang loops. Two models are used: the nonzero octonions (floating
//! point, compared with a tolerance) and the free group, through which every
//! loop word maps to its reduced letter sequence.

use moufang::error::WordError;
use moufang::free_loop::{random_word, FreeMoufangLoop};
use moufang::parse::parse_word;
use moufang::rewrite::{find_redexes, moufang_neighbours};
use moufang::word::Word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Oct = [f64; 8];

fn quat_mul(a: &[f64], b: &[f64]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn quat_conj(a: &[f64]) -> [f64; 4] {
    [a[0], -a[1], -a[2], -a[3]]
}

/// Cayley–Dickson: `(a,b)(c,d) = (ac - d̄b, da + bc̄)`.
fn oct_mul(x: &Oct, y: &Oct) -> Oct {
    let (a, b) = (&x[..4], &x[4..]);
    let (c, d) = (&y[..4], &y[4..]);
    let ac = quat_mul(a, c);
    let db = quat_mul(&quat_conj(d), b);
    let da = quat_mul(d, a);
    let bc = quat_mul(b, &quat_conj(c));
    let mut out = [0.0; 8];
    for i in 0..4 {
        out[i] = ac[i] - db[i];
        out[i + 4] = da[i] + bc[i];
    }
    out
}

fn oct_inv(x: &Oct) -> Oct {
    let n: f64 = x.iter().map(|v| v * v).sum();
    let mut out = [0.0; 8];
    out[0] = x[0] / n;
    for i in 1..8 {
        out[i] = -x[i] / n;
    }
    out
}

fn eval(w: &Word, vals: &[Oct]) -> Oct {
    if w.is_empty() {
        let mut one = [0.0; 8];
        one[0] = 1.0;
        return one;
    }
    if let Some(l) = w.as_literal() {
        let v = &vals[l.generator.index() as usize - 1];
        return if l.inverse { oct_inv(v) } else { *v };
    }
    let (a, b) = w.split().unwrap();
    oct_mul(&eval(&a, vals), &eval(&b, vals))
}

fn close(x: &Oct, y: &Oct) -> bool {
    let scale = x.iter().chain(y).fold(1.0f64, |m, v| m.max(v.abs()));
    x.iter().zip(y).all(|(a, b)| (a - b).abs() <= 1e-9 * scale)
}

fn assignments(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Oct>> {
    (0..3)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let mut v = [0.0; 8];
                    for c in v.iter_mut() {
                        *c = rng.gen_range(-1.0..1.0);
                    }
                    v
                })
                .collect()
        })
        .collect()
}

fn same_value(a: &Word, b: &Word, vals: &[Vec<Oct>]) -> bool {
    vals.iter().all(|v| close(&eval(a, v), &eval(b, v)))
}

#[test]
fn octonions_are_alternative_but_not_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let v = &assignments(&mut rng, 3)[0];
    let (x, y, z) = (&v[0], &v[1], &v[2]);
    assert!(close(&oct_mul(&oct_mul(x, x), y), &oct_mul(x, &oct_mul(x, y))));
    assert!(close(&oct_mul(&oct_mul(y, x), x), &oct_mul(y, &oct_mul(x, x))));
    assert!(!close(&oct_mul(&oct_mul(x, y), z), &oct_mul(x, &oct_mul(y, z))));
}

#[test]
fn every_move_holds_in_the_octonions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut moves = 0;
    for _ in 0..400 {
        let len = rng.gen_range(2..=7);
        let w = random_word(&mut rng, 3, len);
        let vals = assignments(&mut rng, 3);
        for n in moufang_neighbours(&w) {
            assert!(same_value(&w, &n, &vals), "{w} -> {n}");
            moves += 1;
        }
    }
    assert!(moves > 400);
}

/// Words with cancelling structure, so that contractions actually occur.
fn word_with_redexes(rng: &mut ChaCha8Rng) -> Word {
    let u = { let n = rng.gen_range(1..=2); random_word(rng, 3, n) };
    let a = { let n = rng.gen_range(0..=2); random_word(rng, 3, n) };
    let b = { let n = rng.gen_range(0..=2); random_word(rng, 3, n) };
    let p = |x: &Word, y: &Word| {
        if x.is_empty() {
            y.clone()
        } else if y.is_empty() {
            x.clone()
        } else {
            Word::product(x, y)
        }
    };
    match rng.gen_range(0..4) {
        0 => p(&u.invert(), &p(&u, &b)),
        1 => p(&p(&a, &u), &u.invert()),
        2 => p(&p(&u, &p(&a, &u)), &p(&u.invert(), &b)),
        _ => p(&p(&a, &u.invert()), &p(&p(&u, &b), &u)),
    }
}

#[test]
fn every_contraction_holds_in_the_octonions() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut seen = 0;
    for _ in 0..300 {
        let w = word_with_redexes(&mut rng);
        let vals = assignments(&mut rng, 3);
        for r in find_redexes(&w, 20_000).unwrap() {
            assert!(same_value(&w, &r.result, &vals), "{w} -> {}", r.result);
            seen += 1;
        }
    }
    assert!(seen >= 300);
}

#[test]
fn canonical_forms_hold_in_the_octonions() {
    let free = FreeMoufangLoop::default();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..300 {
        let w = if rng.gen_bool(0.5) { word_with_redexes(&mut rng) } else {
            let n = rng.gen_range(0..=6);
            random_word(&mut rng, 3, n)
        };
        let vals = assignments(&mut rng, 3);
        match free.element(&w) {
            Ok(u) => assert!(same_value(&w, u.word(), &vals), "{w} -> {u}"),
            // the calculus may fail to join two reductions, but both must stay sound
            Err(WordError::ConfluenceViolation { classes, .. }) => {
                for c in classes {
                    assert!(same_value(&w, &parse_word(&c).unwrap(), &vals), "{w} -> {c}");
                }
            }
            Err(e) => assert!(e.is_resource_limit(), "{w}: {e}"),
        }
    }
}

/// Image of a word in the free group: freely reduced signed letters.
fn free_group_image(w: &Word) -> Vec<(u32, bool)> {
    let mut out: Vec<(u32, bool)> = Vec::new();
    for l in w.leaves() {
        let g = (l.generator.index(), l.inverse);
        if out.last() == Some(&(g.0, !g.1)) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

#[test]
fn canonical_forms_keep_the_free_group_image() {
    let free = FreeMoufangLoop::default();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..400 {
        let w = if rng.gen_bool(0.5) { word_with_redexes(&mut rng) } else {
            let n = rng.gen_range(0..=7);
            random_word(&mut rng, 3, n)
        };
        if let Ok(u) = free.element(&w) {
            assert_eq!(free_group_image(&w), free_group_image(u.word()), "{w} -> {u}");
            assert!(u.len() <= w.len());
        }
    }
}

#[test]
fn products_and_inverses_hold_in_the_octonions() {
    let free = FreeMoufangLoop::default();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..200 {
        let a = free.element(&{ let n = rng.gen_range(0..=3); random_word(&mut rng, 3, n) }).unwrap();
        let b = free.element(&{ let n = rng.gen_range(0..=3); random_word(&mut rng, 3, n) }).unwrap();
        let vals = assignments(&mut rng, 3);
        let p = free.mul(&a, &b).unwrap();
        assert!(same_value(&Word::product(a.word(), b.word()), p.word(), &vals) || a.is_identity() || b.is_identity());
        let i = free.inv(&a);
        assert!(same_value(&a.word().invert(), i.word(), &vals));
    }
}

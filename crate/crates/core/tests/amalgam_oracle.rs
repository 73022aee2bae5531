use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treeprod::amalgam::{AmalgamWord, NormalForm, Side, Syllable};
use treeprod::matgroup::sl2_model;
use treeprod::oracle::relation_classes;

fn word(s: &[(Side, usize)]) -> AmalgamWord {
    AmalgamWord::new(s.iter().map(|&(side, x)| Syllable::new(side, x)).collect())
}

/// Reduce agrees with the relation closure on every word of length ≤ 4.
///
/// The closure is explored over words of length ≤ 5: rewriting a length-4
/// word into normal form can pass through one extra syllable.
#[test]
fn reduce_matches_relation_closure() {
    let spec = sl2_model();
    let rc = relation_classes(&spec, 5);
    let mut by_class: HashMap<usize, NormalForm> = HashMap::new();
    let mut by_form: HashMap<NormalForm, usize> = HashMap::new();
    let mut compared = 0;
    for (w, &class) in rc.words.iter().zip(&rc.class) {
        if w.len() > 4 {
            continue;
        }
        compared += 1;
        let nf = spec.reduce(w);
        let prev = by_class.entry(class).or_insert_with(|| nf.clone());
        assert_eq!(*prev, nf, "same class, different normal forms at {w}");
        let prev = by_form.entry(nf.clone()).or_insert(class);
        assert_eq!(*prev, class, "normal form {nf} shared by separated classes");
    }
    assert_eq!(compared, 11_111);
}

#[test]
fn closure_at_word_length_is_too_fine() {
    // a:1 b:1 a:1 b:1 and a:3 b:4 a:1 b:1 are equal, but no move applies to
    // either without first growing to five syllables.
    let spec = sl2_model();
    let u = word(&[(Side::A, 1), (Side::B, 1), (Side::A, 1), (Side::B, 1)]);
    let v = word(&[(Side::A, 3), (Side::B, 4), (Side::A, 1), (Side::B, 1)]);
    assert!(spec.word_eq(&u, &v));
    let class_of = |rc: &treeprod::oracle::RelationClasses, w: &AmalgamWord| {
        rc.class[rc.words.iter().position(|x| x == w).unwrap()]
    };
    let tight = relation_classes(&spec, 4);
    assert_ne!(class_of(&tight, &u), class_of(&tight, &v));
    let loose = relation_classes(&spec, 5);
    assert_eq!(class_of(&loose, &u), class_of(&loose, &v));
}

#[test]
fn reduce_is_idempotent_and_never_lengthens() {
    let spec = sl2_model();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for len in 0..12 {
        for _ in 0..200 {
            let w = spec.random_word(&mut rng, len);
            let nf = spec.reduce(&w);
            assert!(spec.is_normal(&nf));
            assert!(nf.len() <= w.len());
            assert_eq!(spec.reduce(&spec.embed(&nf)), nf);
        }
    }
}

#[test]
fn word_mul_is_associative() {
    let spec = sl2_model();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10_000 {
        let u = spec.random_normal_form(&mut rng, 5);
        let v = spec.random_normal_form(&mut rng, 5);
        let w = spec.random_normal_form(&mut rng, 5);
        assert_eq!(
            spec.word_mul(&spec.word_mul(&u, &v), &w),
            spec.word_mul(&u, &spec.word_mul(&v, &w))
        );
        assert_eq!(spec.word_mul(&u, &spec.identity()), u);
        assert_eq!(spec.word_mul(&u, &spec.word_inv(&u)), spec.identity());
    }
}

#[test]
fn factor_embeddings_are_injective_homomorphisms() {
    let spec = sl2_model();
    for side in [Side::A, Side::B] {
        let g = spec.group(side);
        let forms: Vec<NormalForm> = g.elements().map(|x| spec.syllable(side, x)).collect();
        for x in g.elements() {
            for y in g.elements() {
                assert_eq!(forms[g.mul(x, y)], spec.word_mul(&forms[x], &forms[y]));
                if x != y {
                    assert_ne!(forms[x], forms[y]);
                }
            }
        }
    }
    let d = spec.amalgamated();
    for x in d.elements() {
        let a = spec.syllable(Side::A, spec.iota(Side::A).apply(x));
        let b = spec.syllable(Side::B, spec.iota(Side::B).apply(x));
        assert_eq!(a, b);
    }
    // outside ι(D) the two factors never meet
    for x in spec.group(Side::A).elements().filter(|&x| spec.preimage(Side::A, x).is_none()) {
        for y in spec.group(Side::B).elements() {
            assert_ne!(spec.syllable(Side::A, x), spec.syllable(Side::B, y));
        }
    }
}

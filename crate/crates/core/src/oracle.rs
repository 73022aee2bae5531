//! Brute-force oracles for the test suites.
//!
//! Neither oracle uses coset transversals or the reduction routine: the
//! relation closure only reads multiplication tables and the two embeddings,
//! and the BFS only multiplies matrices.

use std::collections::{HashMap, VecDeque};

use crate::amalgam::{AmalgamSpec, AmalgamWord, Side, Syllable};
use crate::matgroup::{gen_s, gen_u, Mat2};

/// Words of bounded length partitioned by the defining relations of the amalgam.
pub struct RelationClasses {
    pub words: Vec<AmalgamWord>,
    /// Class representative index for each word.
    pub class: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], x: usize, y: usize) {
    let (rx, ry) = (find(parent, x), find(parent, y));
    if rx != ry {
        parent[rx.max(ry)] = rx.min(ry);
    }
}

/// Connected components of all words with at most `max_len` syllables under
/// the undirected moves: merge two adjacent same-side syllables, delete a
/// trivial syllable, and move an amalgamated element across sides.
pub fn relation_classes(spec: &AmalgamSpec, max_len: usize) -> RelationClasses {
    let letters: Vec<Syllable> = [Side::A, Side::B]
        .into_iter()
        .flat_map(|side| spec.group(side).elements().map(move |x| Syllable::new(side, x)))
        .collect();
    let mut words: Vec<AmalgamWord> = vec![AmalgamWord::default()];
    let mut frontier = vec![AmalgamWord::default()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * letters.len());
        for w in &frontier {
            for &l in &letters {
                let mut s = w.syllables.clone();
                s.push(l);
                next.push(AmalgamWord::new(s));
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let index: HashMap<&AmalgamWord, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut parent: Vec<usize> = (0..words.len()).collect();
    let (ia, ib) = (spec.iota(Side::A), spec.iota(Side::B));
    let d = spec.amalgamated();
    let a_to_b: HashMap<usize, usize> = d.elements().map(|x| (ia.apply(x), ib.apply(x))).collect();

    for (i, w) in words.iter().enumerate() {
        let s = &w.syllables;
        for k in 0..s.len() {
            let g = spec.group(s[k].side);
            if s[k].elem == g.identity() {
                let mut t = s.clone();
                t.remove(k);
                union(&mut parent, i, index[&AmalgamWord::new(t)]);
            }
            if s[k].side == Side::A {
                if let Some(&y) = a_to_b.get(&s[k].elem) {
                    let mut t = s.clone();
                    t[k] = Syllable::new(Side::B, y);
                    union(&mut parent, i, index[&AmalgamWord::new(t)]);
                }
            }
            if k + 1 < s.len() && s[k].side == s[k + 1].side {
                let mut t = s.clone();
                t[k] = Syllable::new(s[k].side, g.mul(s[k].elem, s[k + 1].elem));
                t.remove(k + 1);
                union(&mut parent, i, index[&AmalgamWord::new(t)]);
            }
        }
    }
    let class = (0..words.len()).map(|i| find(&mut parent, i)).collect();
    RelationClasses { words, class }
}

/// Every matrix reachable by a product of at most `max_len` letters from
/// `S^{±1}, U^{±1}`, with the first (shortest) word found, spelled over
/// `ℤ₄ ∗_{ℤ₂} ℤ₆` (`S ↦ a:1`, `U ↦ b:1`).
pub fn sl2_bfs(max_len: usize) -> Vec<(Mat2, AmalgamWord)> {
    let gens = [
        (gen_s(), Syllable::new(Side::A, 1)),
        (gen_s().inv().expect("unimodular"), Syllable::new(Side::A, 3)),
        (gen_u(), Syllable::new(Side::B, 1)),
        (gen_u().inv().expect("unimodular"), Syllable::new(Side::B, 5)),
    ];
    let mut seen: HashMap<Mat2, usize> = HashMap::new();
    let mut out: Vec<(Mat2, AmalgamWord)> = vec![(Mat2::identity(), AmalgamWord::default())];
    seen.insert(Mat2::identity(), 0);
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((i, depth)) = queue.pop_front() {
        if depth == max_len {
            continue;
        }
        let (m, w) = out[i].clone();
        for (g, syl) in &gens {
            let next = m.mul(g);
            if seen.contains_key(&next) {
                continue;
            }
            let mut word = w.clone();
            word.syllables.push(*syl);
            seen.insert(next.clone(), out.len());
            queue.push_back((out.len(), depth + 1));
            out.push((next, word));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::sl2_model;

    #[test]
    fn short_words_classes() {
        let spec = sl2_model();
        let rc = relation_classes(&spec, 2);
        let pos = |w: &AmalgamWord| rc.words.iter().position(|x| x == w).unwrap();
        let a2 = AmalgamWord::new(vec![Syllable::new(Side::A, 2)]);
        let b3 = AmalgamWord::new(vec![Syllable::new(Side::B, 3)]);
        let a1 = AmalgamWord::new(vec![Syllable::new(Side::A, 1)]);
        assert_eq!(rc.class[pos(&a2)], rc.class[pos(&b3)]);
        assert_ne!(rc.class[pos(&a1)], rc.class[pos(&b3)]);
    }

    #[test]
    fn bfs_finds_t() {
        let found = sl2_bfs(2);
        assert!(found.iter().any(|(m, _)| *m == Mat2::new(1, 1, 0, 1)));
    }
}

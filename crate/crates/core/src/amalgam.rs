//! Free products with amalgamation `A ∗_D B` of finite groups.
//!
//! Elements are kept in transversal normal form `t1 t2 ⋯ tn · d`: the `ti`
//! alternate between the two factors, each is a non-identity representative
//! of a coset `t·ι(D)`, and the trailing `d` lies in `D`. Representatives are
//! the lowest element index in each coset, except that the subgroup's own
//! coset is represented by the identity.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngExt};
use thiserror::Error;

use crate::group::{Elem, FiniteGroup, GroupHom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmalgamError {
    #[error("embedding of D into {0} is not injective")]
    NotInjective(Side),
    #[error("embedding mismatch: {0}")]
    Mismatch(String),
    #[error("syllable {index} ({syllable}) is out of range for its factor")]
    InvalidSyllable { index: usize, syllable: Syllable },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    fn idx(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "a",
            Side::B => "b",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub side: Side,
    pub elem: Elem,
}

impl Syllable {
    pub fn new(side: Side, elem: Elem) -> Self {
        Syllable { side, elem }
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.side, self.elem)
    }
}

/// A raw word: any sequence of syllables, adjacent sides and trivial entries allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AmalgamWord {
    pub syllables: Vec<Syllable>,
}

impl AmalgamWord {
    pub fn new(syllables: Vec<Syllable>) -> Self {
        AmalgamWord { syllables }
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }
}

impl fmt::Display for AmalgamWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    head: Vec<Syllable>,
    tail: Elem,
}

impl NormalForm {
    pub fn head(&self) -> &[Syllable] {
        &self.head
    }

    pub fn tail(&self) -> Elem {
        self.tail
    }

    pub fn len(&self) -> usize {
        self.head.len()
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_empty()
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.head {
            write!(f, "{s} * ")?;
        }
        write!(f, "d:{}", self.tail)
    }
}

#[derive(Debug, Clone)]
struct Factor {
    group: Arc<FiniteGroup>,
    iota: GroupHom,
    // D-preimage of each factor element, if it lies in ι(D)
    pre: Vec<Option<Elem>>,
    transversal: Vec<Elem>,
    // a = t · ι(d)  ↦  (t, d)
    decomp: Vec<(Elem, Elem)>,
}

impl Factor {
    fn new(group: Arc<FiniteGroup>, iota: GroupHom) -> Self {
        let pre = iota.preimages();
        let d = iota.source().clone();
        let e = group.identity();
        let mut rep = vec![usize::MAX; group.order()];
        for x in group.elements() {
            if rep[x] != usize::MAX {
                continue;
            }
            let coset: Vec<Elem> = d.elements().map(|h| group.mul(x, iota.apply(h))).collect();
            let r = if coset.contains(&e) {
                e
            } else {
                *coset.iter().min().expect("D is nonempty")
            };
            for y in coset {
                rep[y] = r;
            }
        }
        let decomp: Vec<(Elem, Elem)> = group
            .elements()
            .map(|x| {
                let t = rep[x];
                let h = pre[group.mul(group.inv(t), x)].expect("t⁻¹x lies in ι(D)");
                (t, h)
            })
            .collect();
        let mut others: Vec<Elem> = rep.iter().copied().filter(|&t| t != e).collect();
        others.sort_unstable();
        others.dedup();
        let mut transversal = vec![e];
        transversal.extend(others);
        debug_assert!(group
            .elements()
            .all(|x| group.mul(decomp[x].0, iota.apply(decomp[x].1)) == x));
        Factor {
            group,
            iota,
            pre,
            transversal,
            decomp,
        }
    }
}

/// The data of `A ∗_D B`: embeddings, transversals and decomposition tables.
#[derive(Debug, Clone)]
pub struct AmalgamSpec {
    d: Arc<FiniteGroup>,
    factors: [Factor; 2],
}

pub fn make_amalgam(
    a: Arc<FiniteGroup>,
    b: Arc<FiniteGroup>,
    d: Arc<FiniteGroup>,
    iota_a: GroupHom,
    iota_b: GroupHom,
) -> Result<AmalgamSpec, AmalgamError> {
    for (side, group, iota) in [(Side::A, &a, &iota_a), (Side::B, &b, &iota_b)] {
        if !iota.source().same_table(&d) {
            return Err(AmalgamError::Mismatch(format!(
                "embedding into {side} does not start at {}",
                d.label()
            )));
        }
        if !iota.target().same_table(group) {
            return Err(AmalgamError::Mismatch(format!(
                "embedding into {side} does not land in {}",
                group.label()
            )));
        }
        if !iota.is_injective() {
            return Err(AmalgamError::NotInjective(side));
        }
    }
    Ok(AmalgamSpec {
        d,
        factors: [Factor::new(a, iota_a), Factor::new(b, iota_b)],
    })
}

impl AmalgamSpec {
    pub fn group(&self, side: Side) -> &Arc<FiniteGroup> {
        &self.factors[side.idx()].group
    }

    pub fn amalgamated(&self) -> &Arc<FiniteGroup> {
        &self.d
    }

    pub fn iota(&self, side: Side) -> &GroupHom {
        &self.factors[side.idx()].iota
    }

    /// Coset representatives for `side`, identity first.
    pub fn transversal(&self, side: Side) -> &[Elem] {
        &self.factors[side.idx()].transversal
    }

    /// `(t, d)` with `x = t · ι(d)` and `t` in the transversal.
    pub fn decompose(&self, side: Side, x: Elem) -> (Elem, Elem) {
        self.factors[side.idx()].decomp[x]
    }

    /// The element of `D` that `x` comes from, if any.
    pub fn preimage(&self, side: Side, x: Elem) -> Option<Elem> {
        self.factors[side.idx()].pre[x]
    }

    pub fn label(&self) -> String {
        format!(
            "{} *_{} {}",
            self.group(Side::A).label(),
            self.d.label(),
            self.group(Side::B).label()
        )
    }

    pub fn check_word(&self, w: &AmalgamWord) -> Result<(), AmalgamError> {
        match w
            .syllables
            .iter()
            .enumerate()
            .find(|(_, s)| s.elem >= self.group(s.side).order())
        {
            Some((index, &syllable)) => Err(AmalgamError::InvalidSyllable { index, syllable }),
            None => Ok(()),
        }
    }

    pub fn identity(&self) -> NormalForm {
        NormalForm {
            head: Vec::new(),
            tail: self.d.identity(),
        }
    }

    /// Whether `nf` satisfies the normal-form shape for this spec.
    pub fn is_normal(&self, nf: &NormalForm) -> bool {
        nf.tail < self.d.order()
            && nf.head.windows(2).all(|w| w[0].side != w[1].side)
            && nf.head.iter().all(|s| {
                s.elem < self.group(s.side).order()
                    && s.elem != self.group(s.side).identity()
                    && self.decompose(s.side, s.elem).0 == s.elem
            })
    }

    /// The raw word spelled by a normal form; the tail becomes an `A` syllable.
    pub fn embed(&self, nf: &NormalForm) -> AmalgamWord {
        let mut syllables = nf.head.clone();
        if nf.tail != self.d.identity() {
            syllables.push(Syllable::new(Side::A, self.iota(Side::A).apply(nf.tail)));
        }
        AmalgamWord { syllables }
    }

    /// The normal form of a single factor element.
    pub fn syllable(&self, side: Side, x: Elem) -> NormalForm {
        self.reduce(&AmalgamWord::new(vec![Syllable::new(side, x)]))
    }

    /// Normal form of a raw word.
    ///
    /// Syllables are folded in from the right onto a normal-form suffix; the
    /// `D`-part split off each new syllable is pushed rightward through the
    /// suffix until it becomes trivial or reaches the tail.
    ///
    /// Panics if a syllable index is out of range; see [`Self::check_word`].
    pub fn reduce(&self, w: &AmalgamWord) -> NormalForm {
        let mut acc = Reducer::new(self, self.identity());
        for s in w.syllables.iter().rev() {
            acc.prepend(s.side, s.elem);
        }
        acc.finish()
    }

    pub fn word_mul(&self, u: &NormalForm, v: &NormalForm) -> NormalForm {
        let mut acc = Reducer::new(self, v.clone());
        acc.push_d(u.tail);
        for s in u.head.iter().rev() {
            acc.prepend(s.side, s.elem);
        }
        acc.finish()
    }

    pub fn word_inv(&self, u: &NormalForm) -> NormalForm {
        let mut acc = Reducer::new(self, self.identity());
        for s in &u.head {
            acc.prepend(s.side, self.group(s.side).inv(s.elem));
        }
        acc.push_d(self.d.inv(u.tail));
        acc.finish()
    }

    pub fn word_eq(&self, u: &AmalgamWord, v: &AmalgamWord) -> bool {
        self.reduce(u) == self.reduce(v)
    }

    /// Every normal form with at most `max_head` head syllables.
    pub fn normal_forms(&self, max_head: usize) -> Vec<NormalForm> {
        let mut heads: Vec<Vec<Syllable>> = vec![Vec::new()];
        let mut frontier: Vec<Vec<Syllable>> = vec![Vec::new()];
        for _ in 0..max_head {
            let mut next = Vec::new();
            for h in &frontier {
                let sides: &[Side] = match h.last() {
                    None => &[Side::A, Side::B],
                    Some(s) if s.side == Side::A => &[Side::B],
                    Some(_) => &[Side::A],
                };
                for &side in sides {
                    for &t in &self.transversal(side)[1..] {
                        let mut h2 = h.clone();
                        h2.push(Syllable::new(side, t));
                        next.push(h2);
                    }
                }
            }
            heads.extend(next.iter().cloned());
            frontier = next;
        }
        heads
            .into_iter()
            .flat_map(|head| {
                self.d.elements().map(move |tail| NormalForm {
                    head: head.clone(),
                    tail,
                })
            })
            .collect()
    }

    /// A random normal form with head length drawn uniformly from `0..=max_head`.
    pub fn random_normal_form<R: Rng + ?Sized>(&self, rng: &mut R, max_head: usize) -> NormalForm {
        let len = rng.random_range(0..=max_head);
        let mut side = if rng.random_bool(0.5) { Side::A } else { Side::B };
        let mut head = Vec::with_capacity(len);
        for _ in 0..len {
            let reps = &self.transversal(side)[1..];
            if reps.is_empty() {
                side = side.other();
                if self.transversal(side).len() == 1 || !head.is_empty() {
                    break;
                }
                continue;
            }
            head.push(Syllable::new(side, reps[rng.random_range(0..reps.len())]));
            side = side.other();
        }
        NormalForm {
            head,
            tail: rng.random_range(0..self.d.order()),
        }
    }

    /// A random raw word of exactly `len` syllables, trivial entries allowed.
    pub fn random_word<R: Rng + ?Sized>(&self, rng: &mut R, len: usize) -> AmalgamWord {
        let syllables = (0..len)
            .map(|_| {
                let side = if rng.random_bool(0.5) { Side::A } else { Side::B };
                Syllable::new(side, rng.random_range(0..self.group(side).order()))
            })
            .collect();
        AmalgamWord { syllables }
    }
}

/// A normal form under construction; `rev_head` stores the head right-to-left.
struct Reducer<'a> {
    spec: &'a AmalgamSpec,
    rev_head: Vec<Syllable>,
    tail: Elem,
}

impl<'a> Reducer<'a> {
    fn new(spec: &'a AmalgamSpec, nf: NormalForm) -> Self {
        let mut rev_head = nf.head;
        rev_head.reverse();
        Reducer {
            spec,
            rev_head,
            tail: nf.tail,
        }
    }

    /// Left-multiplies by `ι(d)` for `d ∈ D`.
    fn push_d(&mut self, mut d: Elem) {
        let d_id = self.spec.d.identity();
        for s in self.rev_head.iter_mut().rev() {
            if d == d_id {
                return;
            }
            let f = &self.spec.factors[s.side.idx()];
            let (t, d2) = f.decomp[f.group.mul(f.iota.apply(d), s.elem)];
            s.elem = t;
            d = d2;
        }
        self.tail = self.spec.d.mul(d, self.tail);
    }

    /// Left-multiplies by the factor element `x` on `side`.
    fn prepend(&mut self, side: Side, x: Elem) {
        let f = &self.spec.factors[side.idx()];
        let x = match self.rev_head.last() {
            Some(first) if first.side == side => {
                let merged = f.group.mul(x, first.elem);
                self.rev_head.pop();
                merged
            }
            _ => x,
        };
        let (t, d) = f.decomp[x];
        self.push_d(d);
        if t != f.group.identity() {
            self.rev_head.push(Syllable::new(side, t));
        }
    }

    fn finish(mut self) -> NormalForm {
        self.rev_head.reverse();
        NormalForm {
            head: self.rev_head,
            tail: self.tail,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{hom_from_generators, make_cyclic, make_dihedral};

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(make_cyclic(n).unwrap())
    }

    pub(crate) fn z4_z6() -> AmalgamSpec {
        let (a, b, d) = (z(4), z(6), z(2));
        let ia = hom_from_generators(d.clone(), a.clone(), &[(1, 2)]).unwrap();
        let ib = hom_from_generators(d.clone(), b.clone(), &[(1, 3)]).unwrap();
        make_amalgam(a, b, d, ia, ib).unwrap()
    }

    fn w(s: &[(Side, Elem)]) -> AmalgamWord {
        AmalgamWord::new(s.iter().map(|&(side, e)| Syllable::new(side, e)).collect())
    }

    #[test]
    fn transversals() {
        let spec = z4_z6();
        assert_eq!(spec.transversal(Side::A), &[0, 1]);
        assert_eq!(spec.transversal(Side::B), &[0, 1, 2]);
        assert_eq!(spec.decompose(Side::A, 3), (1, 1));
        assert_eq!(spec.decompose(Side::B, 5), (2, 1));
    }

    #[test]
    fn trivial_d_is_free_product() {
        let (a, b, d) = (z(3), z(2), z(1));
        let ia = GroupHom::from_table(d.clone(), a.clone(), vec![0]).unwrap();
        let ib = GroupHom::from_table(d.clone(), b.clone(), vec![0]).unwrap();
        let spec = make_amalgam(a.clone(), b, d, ia, ib).unwrap();
        assert_eq!(spec.transversal(Side::A), &[0, 1, 2]);
        for x in a.elements() {
            assert_eq!(spec.decompose(Side::A, x), (x, 0));
        }
    }

    #[test]
    fn degenerate_amalgam_collapses() {
        let g = Arc::new(make_dihedral(3).unwrap());
        let id = GroupHom::identity(g.clone());
        let spec = make_amalgam(g.clone(), g.clone(), g.clone(), id.clone(), id).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        for len in 0..8 {
            let nf = spec.reduce(&spec.random_word(&mut rng, len));
            assert!(nf.head().is_empty());
        }
        let nf = spec.reduce(&w(&[(Side::A, 1), (Side::B, 3), (Side::A, 4)]));
        assert_eq!(nf.tail(), g.mul(g.mul(1, 3), 4));
    }

    #[test]
    fn rejects_non_injective_embedding() {
        let (a, b, d) = (z(4), z(6), z(2));
        let ia = GroupHom::from_table(d.clone(), a.clone(), vec![0, 0]).unwrap();
        let ib = hom_from_generators(d.clone(), b.clone(), &[(1, 3)]).unwrap();
        assert_eq!(
            make_amalgam(a, b, d, ia, ib).unwrap_err(),
            AmalgamError::NotInjective(Side::A)
        );
    }

    #[test]
    fn rejects_mismatched_domain() {
        let (a, b, d) = (z(4), z(6), z(2));
        let ia = hom_from_generators(d.clone(), a.clone(), &[(1, 2)]).unwrap();
        let ib = hom_from_generators(d, b.clone(), &[(1, 3)]).unwrap();
        assert!(matches!(make_amalgam(a, b, z(3), ia, ib), Err(AmalgamError::Mismatch(_))));
    }

    #[test]
    fn reduce_examples() {
        let spec = z4_z6();
        assert_eq!(spec.reduce(&AmalgamWord::default()), spec.identity());
        let nf = spec.reduce(&w(&[(Side::A, 2)]));
        assert!(nf.head().is_empty());
        assert_eq!(nf.tail(), 1);
        assert_eq!(spec.reduce(&w(&[(Side::A, 1), (Side::A, 1)])), nf);
        assert_eq!(spec.reduce(&w(&[(Side::B, 3)])), nf);
    }

    #[test]
    fn reduce_pushes_d_through_head() {
        let spec = z4_z6();
        // a:3 * b:1 = a:1 · ι(1) · b:1 = a:1 * b:4 = a:1 * b:1 · ι(1)
        let nf = spec.reduce(&w(&[(Side::A, 3), (Side::B, 1)]));
        assert_eq!(nf.head(), &[Syllable::new(Side::A, 1), Syllable::new(Side::B, 1)]);
        assert_eq!(nf.tail(), 1);
    }

    #[test]
    fn word_eq_examples() {
        let spec = z4_z6();
        assert!(spec.word_eq(&w(&[(Side::A, 1), (Side::A, 3)]), &AmalgamWord::default()));
        assert!(!spec.word_eq(&w(&[(Side::A, 1)]), &w(&[(Side::B, 1)])));
        assert!(spec.word_eq(&w(&[(Side::A, 2)]), &w(&[(Side::B, 3)])));
    }

    #[test]
    fn inverse_examples() {
        let spec = z4_z6();
        let id = spec.identity();
        assert_eq!(spec.word_inv(&id), id);
        assert_eq!(spec.word_inv(&spec.syllable(Side::A, 1)), spec.syllable(Side::A, 3));
        let u = spec.reduce(&w(&[(Side::A, 1), (Side::B, 2), (Side::A, 1)]));
        assert_eq!(u.len(), 3);
        assert_eq!(spec.word_mul(&u, &spec.word_inv(&u)), id);
        assert_eq!(spec.word_mul(&spec.word_inv(&u), &u), id);
    }

    #[test]
    fn mul_matches_concatenation() {
        let spec = z4_z6();
        for &t1 in &spec.transversal(Side::A)[1..] {
            for &t2 in &spec.transversal(Side::B)[1..] {
                for d in 0..2 {
                    for d2 in 0..2 {
                        let u = NormalForm { head: vec![Syllable::new(Side::A, t1)], tail: d };
                        let v = NormalForm { head: vec![Syllable::new(Side::B, t2)], tail: d2 };
                        let mut raw = spec.embed(&u);
                        raw.syllables.extend(spec.embed(&v).syllables);
                        assert_eq!(spec.word_mul(&u, &v), spec.reduce(&raw));
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        let spec = z4_z6();
        // heads: 1 + 3 + 4 + 6 (lengths 0..=3), times |D| = 2
        let nfs = spec.normal_forms(3);
        assert_eq!(nfs.len(), 28);
        assert!(nfs.iter().all(|nf| spec.is_normal(nf)));
        let mut sorted = nfs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), nfs.len());
    }

    #[test]
    fn check_word_flags_bad_index() {
        let spec = z4_z6();
        assert!(spec.check_word(&w(&[(Side::B, 5)])).is_ok());
        assert_eq!(
            spec.check_word(&w(&[(Side::B, 5), (Side::A, 4)])),
            Err(AmalgamError::InvalidSyllable { index: 1, syllable: Syllable::new(Side::A, 4) })
        );
    }

    #[test]
    fn display() {
        let spec = z4_z6();
        let nf = spec.reduce(&w(&[(Side::A, 3), (Side::B, 1)]));
        assert_eq!(nf.to_string(), "a:1 * b:1 * d:1");
        assert_eq!(spec.embed(&nf).to_string(), "a:1 * b:1 * a:2");
        assert_eq!(AmalgamWord::default().to_string(), "1");
    }
}

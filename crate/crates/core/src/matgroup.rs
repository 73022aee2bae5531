//! `GL₂(ℤ)` as exact integer matrices, and its decomposition into `D₄ ∗_{D₂} D₆`.
//!
//! Generators: `S = [[0,-1],[1,0]]` (order 4), `U = [[0,-1],[1,1]]` (order 6),
//! `J = [[0,1],[1,0]]` (determinant −1, the section of `det`). `S² = U³ = −I`.
//! `SL₂(ℤ)` words live in `ℤ₄ ∗_{ℤ₂} ℤ₆` with `1 ↦ S`, `1 ↦ U` and the
//! amalgamated generator `↦ −I`; `GL₂(ℤ)` words live in the amalgam of the
//! inversion products `ℤ₄⋊ℤ₂`, `ℤ₆⋊ℤ₂` over `ℤ₂⋊ℤ₂`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::amalgam::{make_amalgam, AmalgamSpec, AmalgamWord, NormalForm, Side, Syllable};
use crate::group::{hom_from_generators, make_cyclic, Elem, GroupAction};
use crate::iso::{CompatibleActionTriple, IsoInstance, SmallElement};
use crate::products::SemidirectElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("determinant {0} is not ±1")]
    NotUnimodular(BigInt),
    #[error("determinant {0} is not +1")]
    NotSpecial(BigInt),
    #[error("Euclidean quotient {0} is too large to expand into a word")]
    QuotientTooLarge(BigInt),
}

// T^q expands to 2|q| syllables; beyond this the word is not worth building.
const MAX_QUOTIENT: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// `det⁻¹ · adj`, defined only for determinant ±1.
    pub fn inv(&self) -> Result<Mat2, MatError> {
        let det = self.det();
        if !det.abs().is_one() {
            return Err(MatError::NotUnimodular(det));
        }
        Ok(Mat2 {
            a: &det * &self.d,
            b: -(&det * &self.b),
            c: -(&det * &self.c),
            d: &det * &self.a,
        })
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// Non-negative powers only; use [`Mat2::inv`] first for negative ones.
    pub fn pow(&self, k: u64) -> Mat2 {
        let mut acc = Mat2::identity();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

pub fn mat_mul(m: &Mat2, n: &Mat2) -> Mat2 {
    m.mul(n)
}

pub fn mat_inv(m: &Mat2) -> Result<Mat2, MatError> {
    m.inv()
}

pub fn mat_det(m: &Mat2) -> BigInt {
    m.det()
}

pub fn gen_s() -> Mat2 {
    Mat2::new(0, -1, 1, 0)
}

pub fn gen_u() -> Mat2 {
    Mat2::new(0, -1, 1, 1)
}

pub fn gen_j() -> Mat2 {
    Mat2::new(0, 1, 1, 0)
}

/// `(S, U, J)`.
pub fn standard_generators() -> (Mat2, Mat2, Mat2) {
    (gen_s(), gen_u(), gen_j())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    S,
    U,
    J,
}

impl Letter {
    pub fn order(self) -> i64 {
        match self {
            Letter::S => 4,
            Letter::U => 6,
            Letter::J => 2,
        }
    }

    pub fn matrix(self) -> Mat2 {
        match self {
            Letter::S => gen_s(),
            Letter::U => gen_u(),
            Letter::J => gen_j(),
        }
    }

    /// `self^k`, reducing `k` modulo the letter's order.
    pub fn power(self, k: i64) -> Mat2 {
        self.matrix().pow(k.rem_euclid(self.order()) as u64)
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::S => 's',
            Letter::U => 'u',
            Letter::J => 'j',
        }
    }
}

/// A word in `s`, `u`, `j` with nonzero exponents and no two equal adjacent letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Glt2Word {
    letters: Vec<(Letter, i64)>,
}

impl Glt2Word {
    /// Folds adjacent repeats and drops zero exponents.
    pub fn new(raw: impl IntoIterator<Item = (Letter, i64)>) -> Self {
        let mut letters: Vec<(Letter, i64)> = Vec::new();
        for (l, k) in raw {
            match letters.last_mut() {
                Some((prev, e)) if *prev == l => {
                    *e += k;
                    if *e == 0 {
                        letters.pop();
                    }
                }
                _ if k != 0 => letters.push((l, k)),
                _ => {}
            }
        }
        Glt2Word { letters }
    }

    pub fn letters(&self) -> &[(Letter, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn j_count(&self) -> i64 {
        self.letters
            .iter()
            .filter(|(l, _)| *l == Letter::J)
            .map(|(_, k)| *k)
            .sum()
    }

    pub fn evaluate(&self) -> Mat2 {
        self.letters
            .iter()
            .fold(Mat2::identity(), |acc, &(l, k)| acc.mul(&l.power(k)))
    }
}

impl fmt::Display for Glt2Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, &(l, k)) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if k == 1 {
                write!(f, "{}", l.symbol())?;
            } else {
                write!(f, "{}^{}", l.symbol(), k)?;
            }
        }
        Ok(())
    }
}

/// `ℤ₄ ∗_{ℤ₂} ℤ₆` with `ι(1) = 2` and `ι(1) = 3`, i.e. `S² = U³`.
pub fn sl2_model() -> AmalgamSpec {
    let z = |n| Arc::new(make_cyclic(n).expect("n > 0"));
    let (a, b, d) = (z(4), z(6), z(2));
    let ia = hom_from_generators(d.clone(), a.clone(), &[(1, 2)]).expect("Z2 -> Z4");
    let ib = hom_from_generators(d.clone(), b.clone(), &[(1, 3)]).expect("Z2 -> Z6");
    make_amalgam(a, b, d, ia, ib).expect("injective embeddings")
}

/// The `SL₂` amalgam and its `ℤ₂`-extension to the dihedral amalgam.
#[derive(Debug, Clone)]
pub struct DihedralModel {
    inst: IsoInstance,
}

/// `D₄ ∗_{D₂} D₆` built as `(ℤ₄⋊ℤ₂) ∗_{ℤ₂⋊ℤ₂} (ℤ₆⋊ℤ₂)` with inversion actions.
pub fn build_dihedral_model() -> DihedralModel {
    let small = sl2_model();
    let c = Arc::new(make_cyclic(2).expect("Z2"));
    let inv = |side: Option<Side>| {
        let space = match side {
            Some(s) => small.group(s).clone(),
            None => small.amalgamated().clone(),
        };
        GroupAction::inversion(c.clone(), space).expect("cyclic groups are abelian")
    };
    let acts = CompatibleActionTriple::new(&small, inv(Some(Side::A)), inv(Some(Side::B)), inv(None))
        .expect("inversion commutes with every embedding of abelian groups");
    DihedralModel {
        inst: IsoInstance::new(small, acts).expect("valid instance"),
    }
}

impl DihedralModel {
    pub fn instance(&self) -> &IsoInstance {
        &self.inst
    }

    pub fn sl2(&self) -> &AmalgamSpec {
        self.inst.small()
    }

    pub fn spec(&self) -> &AmalgamSpec {
        self.inst.big().spec()
    }

    /// Matrix of an element of `ℤ₄` (side A) or `ℤ₆` (side B).
    pub fn sl2_image(&self, side: Side, x: Elem) -> Mat2 {
        match side {
            Side::A => Letter::S.power(x as i64),
            Side::B => Letter::U.power(x as i64),
        }
    }

    pub fn sl2_tail_image(&self, d: Elem) -> Mat2 {
        Letter::S.power(2 * d as i64)
    }

    fn pair(&self, side: Option<Side>, x: Elem) -> SemidirectElement {
        match side {
            Some(s) => self.inst.big().factor(s).pair(x),
            None => self.inst.big().d_product().pair(x),
        }
    }

    /// Letters of an element of `D₄` (side A), `D₆` (side B) or `D₂` (`None`).
    pub fn letters(&self, side: Option<Side>, x: Elem) -> Vec<(Letter, i64)> {
        let p = self.pair(side, x);
        let mut out = Vec::with_capacity(2);
        let (letter, k) = match side {
            Some(Side::A) => (Letter::S, p.n as i64),
            Some(Side::B) => (Letter::U, p.n as i64),
            None => (Letter::S, 2 * p.n as i64),
        };
        if k != 0 {
            out.push((letter, k));
        }
        if p.c != 0 {
            out.push((Letter::J, 1));
        }
        out
    }

    pub fn dihedral_image(&self, side: Option<Side>, x: Elem) -> Mat2 {
        self.letters(side, x)
            .into_iter()
            .fold(Mat2::identity(), |acc, (l, k)| acc.mul(&l.power(k)))
    }

    /// Product of the matrix images of an `SL₂` normal form.
    pub fn evaluate_sl2(&self, w: &NormalForm) -> Mat2 {
        w.head()
            .iter()
            .fold(Mat2::identity(), |acc, s| acc.mul(&self.sl2_image(s.side, s.elem)))
            .mul(&self.sl2_tail_image(w.tail()))
    }

    /// Product of the matrix images of a dihedral normal form.
    pub fn evaluate(&self, form: &NormalForm) -> Mat2 {
        form.head()
            .iter()
            .fold(Mat2::identity(), |acc, s| acc.mul(&self.dihedral_image(Some(s.side), s.elem)))
            .mul(&self.dihedral_image(None, form.tail()))
    }

    /// The `s`/`u`/`j` spelling of a dihedral normal form.
    pub fn render(&self, form: &NormalForm) -> Glt2Word {
        let mut raw: Vec<(Letter, i64)> = Vec::new();
        for s in form.head() {
            raw.extend(self.letters(Some(s.side), s.elem));
        }
        raw.extend(self.letters(None, form.tail()));
        Glt2Word::new(raw)
    }

    /// Normal form of a word, computed in the amalgam without touching matrices.
    pub fn word_to_form(&self, w: &Glt2Word) -> NormalForm {
        let big = self.inst.big();
        let mut syllables = Vec::new();
        for &(l, k) in w.letters() {
            let syl = match l {
                Letter::S => Syllable::new(Side::A, big.factor(Side::A).index(SemidirectElement {
                    n: k.rem_euclid(4) as usize,
                    c: 0,
                })),
                Letter::U => Syllable::new(Side::B, big.factor(Side::B).index(SemidirectElement {
                    n: k.rem_euclid(6) as usize,
                    c: 0,
                })),
                Letter::J => Syllable::new(Side::A, big.factor(Side::A).index(SemidirectElement {
                    n: 0,
                    c: k.rem_euclid(2) as usize,
                })),
            };
            syllables.push(syl);
        }
        big.spec().reduce(&AmalgamWord::new(syllables))
    }

    /// Normal form over `ℤ₄ ∗_{ℤ₂} ℤ₆` of a determinant-one matrix.
    ///
    /// Euclidean reduction on the first column: peel off `T^q` with
    /// `T = S⁻¹U` so that `|a - qc| < |c|`, swap the column with `S`, and
    /// repeat until the lower-left entry vanishes. What remains is `±T^b`.
    pub fn sl2_decompose(&self, m: &Mat2) -> Result<NormalForm, MatError> {
        let det = m.det();
        if !det.is_one() {
            return Err(MatError::NotSpecial(det));
        }
        let t_pos = [Syllable::new(Side::A, 3), Syllable::new(Side::B, 1)];
        let t_neg = [Syllable::new(Side::B, 5), Syllable::new(Side::A, 1)];
        let push_t = |out: &mut Vec<Syllable>, q: &BigInt| -> Result<(), MatError> {
            let n = q
                .abs()
                .to_u64()
                .filter(|&n| n <= MAX_QUOTIENT)
                .ok_or_else(|| MatError::QuotientTooLarge(q.clone()))?;
            let block = if q.is_negative() { &t_neg } else { &t_pos };
            for _ in 0..n {
                out.extend_from_slice(block);
            }
            Ok(())
        };

        // invariant: original = prefix · m
        let original = m.clone();
        let mut m = m.clone();
        let mut prefix: Vec<Syllable> = Vec::new();
        while !m.c.is_zero() {
            let q = m.a.div_floor(&m.c);
            push_t(&mut prefix, &q)?;
            // T^-q m
            m = Mat2 {
                a: &m.a - &q * &m.c,
                b: &m.b - &q * &m.d,
                c: m.c,
                d: m.d,
            };
            // m = S⁻¹ (S m)
            prefix.push(Syllable::new(Side::A, 3));
            m = Mat2 {
                a: -m.c,
                b: -m.d,
                c: m.a,
                d: m.b,
            };
        }
        if m.a.is_negative() {
            prefix.push(Syllable::new(Side::A, 2));
            m = m.neg();
        }
        debug_assert!(m.a.is_one() && m.d.is_one());
        push_t(&mut prefix, &m.b)?;
        let nf = self.sl2().reduce(&AmalgamWord::new(prefix));
        debug_assert_eq!(self.evaluate_sl2(&nf), original);
        Ok(nf)
    }

    /// `GL₂(ℤ) → D₄ ∗_{D₂} D₆` through the split extension and `Φ`.
    pub fn gl2_decompose(&self, m: &Mat2) -> Result<NormalForm, MatError> {
        let (special, eps) = gl2_split(m)?;
        let word = self.sl2_decompose(&special)?;
        Ok(self.inst.phi(&SmallElement { word, c: eps }))
    }
}

fn shared_model() -> &'static DihedralModel {
    static MODEL: OnceLock<DihedralModel> = OnceLock::new();
    MODEL.get_or_init(build_dihedral_model)
}

pub fn sl2_decompose(m: &Mat2) -> Result<NormalForm, MatError> {
    shared_model().sl2_decompose(m)
}

pub fn gl2_decompose(m: &Mat2) -> Result<NormalForm, MatError> {
    shared_model().gl2_decompose(m)
}

/// Evaluates a dihedral normal form over the shared model.
pub fn evaluate_form(form: &NormalForm) -> Mat2 {
    shared_model().evaluate(form)
}

pub fn evaluate_word(w: &Glt2Word) -> Mat2 {
    w.evaluate()
}

/// `M ↦ (M·J^{-ε}, ε)` with `ε = 0` for determinant `+1` and `1` for `−1`.
pub fn gl2_split(m: &Mat2) -> Result<(Mat2, Elem), MatError> {
    let det = m.det();
    if det.is_one() {
        Ok((m.clone(), 0))
    } else if det == -BigInt::one() {
        Ok((m.mul(&gen_j()), 1))
    } else {
        Err(MatError::NotUnimodular(det))
    }
}

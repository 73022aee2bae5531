//! The isomorphism `(A ∗_D B) ⋊ C ≅ (A⋊C) ∗_{D⋊C} (B⋊C)`.
//!
//! The left-hand side is represented as pairs `(w, c)` with `w` a normal form
//! over the small amalgam, and `C` acting syllable-wise. The right-hand side is
//! an ordinary [`AmalgamSpec`] whose factors are flattened semidirect products.
//! `Φ(w, c) = ν(w)·τ(c)`; the inverse reads `c = μ(g)` and strips the
//! `C`-components off `g·τ(c)⁻¹` by pushing them rightward.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::amalgam::{make_amalgam, AmalgamError, AmalgamSpec, AmalgamWord, NormalForm, Side, Syllable};
use crate::group::{Elem, FiniteGroup, GroupAction, GroupError, GroupHom};
use crate::products::{ProductError, SemidirectElement, SemidirectGroup};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("actions are not compatible with the amalgam: {0}")]
    Incompatible(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Amalgam(#[from] AmalgamError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Actions of one group `C` on `A`, `B` and `D` that commute with both embeddings.
#[derive(Debug, Clone)]
pub struct CompatibleActionTriple {
    act_a: GroupAction,
    act_b: GroupAction,
    act_d: GroupAction,
}

impl CompatibleActionTriple {
    pub fn new(
        spec: &AmalgamSpec,
        act_a: GroupAction,
        act_b: GroupAction,
        act_d: GroupAction,
    ) -> Result<Self, IsoError> {
        let actor = act_d.actor();
        if !act_a.actor().same_table(actor) || !act_b.actor().same_table(actor) {
            return Err(IsoError::Incompatible("the three actions have different actors".into()));
        }
        if !act_d.space().same_table(spec.amalgamated()) {
            return Err(IsoError::Incompatible("actD does not act on D".into()));
        }
        for (side, act) in [(Side::A, &act_a), (Side::B, &act_b)] {
            if !act.space().same_table(spec.group(side)) {
                return Err(IsoError::Incompatible(format!("act{side} does not act on {side}")));
            }
            let iota = spec.iota(side);
            for c in actor.elements() {
                for d in spec.amalgamated().elements() {
                    if iota.apply(act_d.apply(c, d)) != act.apply(c, iota.apply(d)) {
                        return Err(IsoError::Incompatible(format!(
                            "iota{side}(c·d) != c·iota{side}(d) at c={c}, d={d}"
                        )));
                    }
                }
            }
        }
        Ok(CompatibleActionTriple { act_a, act_b, act_d })
    }

    pub fn actor(&self) -> &Arc<FiniteGroup> {
        self.act_d.actor()
    }

    pub fn on(&self, side: Side) -> &GroupAction {
        match side {
            Side::A => &self.act_a,
            Side::B => &self.act_b,
        }
    }

    pub fn on_d(&self) -> &GroupAction {
        &self.act_d
    }

    /// The induced action of `c` on a normal form, applied syllable-wise and re-reduced.
    pub fn act_on(&self, spec: &AmalgamSpec, c: Elem, w: &NormalForm) -> NormalForm {
        let mut syllables: Vec<Syllable> = w
            .head()
            .iter()
            .map(|s| Syllable::new(s.side, self.on(s.side).apply(c, s.elem)))
            .collect();
        let d = self.act_d.apply(c, w.tail());
        syllables.push(Syllable::new(Side::A, spec.iota(Side::A).apply(d)));
        spec.reduce(&AmalgamWord::new(syllables))
    }
}

/// `C`'s action on the small amalgam, packaged as a function of `(c, w)`.
pub fn induce_action_on_amalgam(
    spec: &AmalgamSpec,
    acts: &CompatibleActionTriple,
) -> impl Fn(Elem, &NormalForm) -> NormalForm {
    let spec = spec.clone();
    let acts = acts.clone();
    move |c, w| acts.act_on(&spec, c, w)
}

/// `(A⋊C) ∗_{D⋊C} (B⋊C)` with the induced embeddings `(d, c) ↦ (ι(d), c)`.
#[derive(Debug, Clone)]
pub struct BigAmalgam {
    spec: AmalgamSpec,
    a_c: SemidirectGroup,
    b_c: SemidirectGroup,
    d_c: SemidirectGroup,
}

impl BigAmalgam {
    pub fn new(small: &AmalgamSpec, acts: &CompatibleActionTriple) -> Result<Self, IsoError> {
        let a_c = SemidirectGroup::new(acts.act_a.clone())?;
        let b_c = SemidirectGroup::new(acts.act_b.clone())?;
        let d_c = SemidirectGroup::new(acts.act_d.clone())?;
        let induced = |side: Side, target: &SemidirectGroup| -> Result<GroupHom, IsoError> {
            let iota = small.iota(side);
            let table = d_c
                .flat()
                .elements()
                .map(|x| {
                    let p = d_c.pair(x);
                    target.index(SemidirectElement { n: iota.apply(p.n), c: p.c })
                })
                .collect();
            Ok(GroupHom::from_table(d_c.flat().clone(), target.flat().clone(), table)?)
        };
        let iota_a = induced(Side::A, &a_c)?;
        let iota_b = induced(Side::B, &b_c)?;
        let spec = make_amalgam(
            a_c.flat().clone(),
            b_c.flat().clone(),
            d_c.flat().clone(),
            iota_a,
            iota_b,
        )?;
        Ok(BigAmalgam { spec, a_c, b_c, d_c })
    }

    pub fn spec(&self) -> &AmalgamSpec {
        &self.spec
    }

    pub fn factor(&self, side: Side) -> &SemidirectGroup {
        match side {
            Side::A => &self.a_c,
            Side::B => &self.b_c,
        }
    }

    pub fn d_product(&self) -> &SemidirectGroup {
        &self.d_c
    }
}

/// An element of `(A ∗_D B) ⋊ C`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmallElement {
    pub word: NormalForm,
    pub c: Elem,
}

/// Both sides of the isomorphism for one choice of `A, B, D, C` and actions.
#[derive(Debug, Clone)]
pub struct IsoInstance {
    small: AmalgamSpec,
    acts: CompatibleActionTriple,
    big: BigAmalgam,
}

impl IsoInstance {
    pub fn new(small: AmalgamSpec, acts: CompatibleActionTriple) -> Result<Self, IsoError> {
        let big = BigAmalgam::new(&small, &acts)?;
        Ok(IsoInstance { small, acts, big })
    }

    pub fn small(&self) -> &AmalgamSpec {
        &self.small
    }

    pub fn big(&self) -> &BigAmalgam {
        &self.big
    }

    pub fn actions(&self) -> &CompatibleActionTriple {
        &self.acts
    }

    pub fn actor(&self) -> &Arc<FiniteGroup> {
        self.acts.actor()
    }

    pub fn label(&self) -> String {
        format!("({}) ⋊ {}", self.small.label(), self.actor().label())
    }

    pub fn act(&self, c: Elem, w: &NormalForm) -> NormalForm {
        self.acts.act_on(&self.small, c, w)
    }

    /// `(w1, c1)(w2, c2) = (w1 · c1(w2), c1 c2)`.
    pub fn small_mul(&self, x: &SmallElement, y: &SmallElement) -> SmallElement {
        SmallElement {
            word: self.small.word_mul(&x.word, &self.act(x.c, &y.word)),
            c: self.actor().mul(x.c, y.c),
        }
    }

    pub fn small_inv(&self, x: &SmallElement) -> SmallElement {
        let ci = self.actor().inv(x.c);
        SmallElement {
            word: self.act(ci, &self.small.word_inv(&x.word)),
            c: ci,
        }
    }

    pub fn small_identity(&self) -> SmallElement {
        SmallElement {
            word: self.small.identity(),
            c: self.actor().identity(),
        }
    }

    fn lift(&self, side: Side, x: Elem) -> Elem {
        self.big.factor(side).index(SemidirectElement {
            n: x,
            c: self.actor().identity(),
        })
    }

    /// `ν`: each syllable `x` becomes `(x, 1_C)`.
    pub fn nu(&self, w: &NormalForm) -> NormalForm {
        let mut syllables: Vec<Syllable> = w
            .head()
            .iter()
            .map(|s| Syllable::new(s.side, self.lift(s.side, s.elem)))
            .collect();
        let tail = self.small.iota(Side::A).apply(w.tail());
        syllables.push(Syllable::new(Side::A, self.lift(Side::A, tail)));
        self.big.spec.reduce(&AmalgamWord::new(syllables))
    }

    /// `μ` on any raw word over the big amalgam: the product of the `C`-components.
    pub fn mu_word(&self, w: &AmalgamWord) -> Elem {
        let actor = self.actor();
        w.syllables.iter().fold(actor.identity(), |acc, s| {
            actor.mul(acc, self.big.factor(s.side).pair(s.elem).c)
        })
    }

    pub fn mu(&self, g: &NormalForm) -> Elem {
        let actor = self.actor();
        let c = g.head().iter().fold(actor.identity(), |acc, s| {
            actor.mul(acc, self.big.factor(s.side).pair(s.elem).c)
        });
        actor.mul(c, self.big.d_c.pair(g.tail()).c)
    }

    /// `τ(c)`: the normal form of `(1_A, c)`.
    pub fn tau(&self, c: Elem) -> NormalForm {
        let a_c = &self.big.a_c;
        let x = a_c.index(SemidirectElement { n: a_c.space().identity(), c });
        self.big.spec.syllable(Side::A, x)
    }

    /// `Φ(w, c) = ν(w)·τ(c)`.
    pub fn phi(&self, x: &SmallElement) -> NormalForm {
        self.big.spec.word_mul(&self.nu(&x.word), &self.tau(x.c))
    }

    pub fn phi_inv(&self, g: &NormalForm) -> Result<SmallElement, IsoError> {
        let big = &self.big.spec;
        let c = self.mu(g);
        let stripped = big.word_mul(g, &big.word_inv(&self.tau(c)));
        let (word, residual) = self.push_components(&stripped);
        if residual != self.actor().identity() {
            return Err(IsoError::Inconsistent(format!(
                "residual C-component {residual} after stripping τ({c}) from {g}"
            )));
        }
        Ok(SmallElement { word, c })
    }

    /// Rewrites `(x1, c1)(x2, c2)⋯` as `x1 · c1(x2) · (c1c2)(x3) ⋯ · (c1⋯cn)`,
    /// returning the small normal form and the accumulated `C`-part.
    fn push_components(&self, g: &NormalForm) -> (NormalForm, Elem) {
        let actor = self.actor();
        let mut k = actor.identity();
        let mut syllables = Vec::with_capacity(g.len() + 1);
        for s in g.head() {
            let p = self.big.factor(s.side).pair(s.elem);
            syllables.push(Syllable::new(s.side, self.acts.on(s.side).apply(k, p.n)));
            k = actor.mul(k, p.c);
        }
        let p = self.big.d_c.pair(g.tail());
        let d = self.acts.act_d.apply(k, p.n);
        syllables.push(Syllable::new(Side::A, self.small.iota(Side::A).apply(d)));
        k = actor.mul(k, p.c);
        (self.small.reduce(&AmalgamWord::new(syllables)), k)
    }

    /// `α`: the factor `side` of the small amalgam, embedded.
    pub fn alpha(&self, side: Side, x: Elem) -> NormalForm {
        self.small.syllable(side, x)
    }

    /// `α̃`: the factor `side` of the big amalgam, embedded.
    pub fn alpha_big(&self, side: Side, x: Elem) -> NormalForm {
        self.big.spec.syllable(side, x)
    }

    pub fn random_small<R: Rng + ?Sized>(&self, rng: &mut R, max_head: usize) -> SmallElement {
        SmallElement {
            word: self.small.random_normal_form(rng, max_head),
            c: rng.random_range(0..self.actor().order()),
        }
    }

    pub fn random_big<R: Rng + ?Sized>(&self, rng: &mut R, max_head: usize) -> NormalForm {
        self.big.spec.random_normal_form(rng, max_head)
    }
}

/// Sampling parameters for the randomized verifiers.
#[derive(Debug, Clone, Copy)]
pub struct SampleConfig {
    pub samples: usize,
    pub max_head: usize,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            samples: 10_000,
            max_head: 6,
            seed: 0,
        }
    }
}

/// Bounded exactness of `1 → A∗_D B → big → C → 1`.
pub fn verify_exact_sequence(inst: &IsoInstance, bound: usize) -> Report {
    let mut report = Report::new();
    let label = format!("{} bound {bound}", inst.label());
    let e_c = inst.actor().identity();
    let big_forms = inst.big.spec.normal_forms(bound);
    let kernel: BTreeSet<NormalForm> =
        big_forms.iter().filter(|g| inst.mu(g) == e_c).cloned().collect();

    let mut image: BTreeMap<NormalForm, NormalForm> = BTreeMap::new();
    let mut nu_injective = Ok(());
    let mut nu_in_kernel = Ok(());
    for w in inst.small.normal_forms(bound) {
        let g = inst.nu(&w);
        if inst.mu(&g) != e_c && nu_in_kernel.is_ok() {
            nu_in_kernel = Err(format!("μ(ν({w})) = {} ≠ e", inst.mu(&g)));
        }
        if let Some(prev) = image.insert(g.clone(), w.clone()) {
            if nu_injective.is_ok() {
                nu_injective = Err(format!("ν({prev}) = ν({w}) = {g}"));
            }
        }
    }
    report.record("mu-after-nu-trivial", &label, nu_in_kernel);
    report.record("nu-injective", &label, nu_injective);

    let image_set: BTreeSet<NormalForm> =
        image.keys().filter(|g| g.len() <= bound).cloned().collect();
    let kernel_eq = match (kernel.difference(&image_set).next(), image_set.difference(&kernel).next())
    {
        (None, None) => Ok(()),
        (Some(g), _) => Err(format!("{g} is in ker μ but not in im ν")),
        (_, Some(g)) => Err(format!("{g} is in im ν but not in ker μ")),
    };
    report.record("kernel-mu-equals-image-nu", &label, kernel_eq);

    let hit: BTreeSet<Elem> = big_forms.iter().map(|g| inst.mu(g)).collect();
    let surj = match inst.actor().elements().find(|c| !hit.contains(c)) {
        None => Ok(()),
        Some(c) => Err(format!("no normal form of head length ≤ {bound} maps to {c}")),
    };
    report.record("mu-surjective", &label, surj);
    report
}

/// `μ∘τ = id`, `τ` homomorphic, and the homomorphism and round-trip laws for
/// `ν` and `Φ` on seeded random samples.
pub fn verify_isomorphism(inst: &IsoInstance, cfg: SampleConfig) -> Report {
    let mut report = Report::new();
    let label = inst.label();
    let big = &inst.big.spec;
    let actor = inst.actor();

    let mut split = Ok(());
    let mut tau_hom = Ok(());
    for c in actor.elements() {
        if inst.mu(&inst.tau(c)) != c && split.is_ok() {
            split = Err(format!("μ(τ({c})) = {}", inst.mu(&inst.tau(c))));
        }
        for c2 in actor.elements() {
            let lhs = big.word_mul(&inst.tau(c), &inst.tau(c2));
            if lhs != inst.tau(actor.mul(c, c2)) && tau_hom.is_ok() {
                tau_hom = Err(format!("τ({c})τ({c2}) = {lhs} ≠ τ({c}{c2})"));
            }
        }
    }
    report.record("mu-tau-identity", &label, split);
    report.record("tau-homomorphism", &label, tau_hom);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut nu_hom = Ok(());
    let mut phi_hom = Ok(());
    let mut left_inv = Ok(());
    for _ in 0..cfg.samples {
        let x = inst.random_small(&mut rng, cfg.max_head);
        let y = inst.random_small(&mut rng, cfg.max_head);
        if nu_hom.is_ok() {
            let lhs = inst.nu(&inst.small.word_mul(&x.word, &y.word));
            let rhs = big.word_mul(&inst.nu(&x.word), &inst.nu(&y.word));
            if lhs != rhs {
                nu_hom = Err(format!("ν({}·{}) = {lhs} but ν·ν = {rhs}", x.word, y.word));
            }
        }
        if phi_hom.is_ok() {
            let lhs = inst.phi(&inst.small_mul(&x, &y));
            let rhs = big.word_mul(&inst.phi(&x), &inst.phi(&y));
            if lhs != rhs {
                phi_hom = Err(format!("Φ(xy) = {lhs} but Φ(x)Φ(y) = {rhs} for x=({}, {})", x.word, x.c));
            }
        }
        if left_inv.is_ok() {
            match inst.phi_inv(&inst.phi(&x)) {
                Ok(back) if back == x => {}
                Ok(back) => {
                    left_inv = Err(format!("Φ⁻¹Φ({}, {}) = ({}, {})", x.word, x.c, back.word, back.c))
                }
                Err(e) => left_inv = Err(e.to_string()),
            }
        }
    }
    report.record("nu-homomorphism", &label, nu_hom);
    report.record("phi-homomorphism", &label, phi_hom);
    report.record("phi-inv-after-phi", &label, left_inv);

    let mut right_inv = Ok(());
    let mut phi_inv_hom = Ok(());
    for _ in 0..cfg.samples {
        let g = inst.random_big(&mut rng, cfg.max_head);
        let h = inst.random_big(&mut rng, cfg.max_head);
        if right_inv.is_ok() {
            match inst.phi_inv(&g) {
                Ok(x) if inst.phi(&x) == g => {}
                Ok(x) => right_inv = Err(format!("ΦΦ⁻¹({g}) = {}", inst.phi(&x))),
                Err(e) => right_inv = Err(e.to_string()),
            }
        }
        if phi_inv_hom.is_ok() {
            let lhs = inst.phi_inv(&big.word_mul(&g, &h));
            let rhs = inst
                .phi_inv(&g)
                .and_then(|x| inst.phi_inv(&h).map(|y| inst.small_mul(&x, &y)));
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if l == r => {}
                (Ok(l), Ok(r)) => {
                    phi_inv_hom = Err(format!("Φ⁻¹({g}·{h}) = ({}, {}) ≠ ({}, {})", l.word, l.c, r.word, r.c))
                }
                (Err(e), _) | (_, Err(e)) => phi_inv_hom = Err(e.to_string()),
            }
        }
    }
    report.record("phi-after-phi-inv", &label, right_inv);
    report.record("phi-inv-homomorphism", &label, phi_inv_hom);
    report
}

/// `Φ` on all pairs of single-syllable elements, and bijectivity of `Φ` onto
/// the big normal forms of head length ≤ `bound`.
pub fn verify_bounded_bijection(inst: &IsoInstance, bound: usize) -> Report {
    let mut report = Report::new();
    let label = format!("{} bound {bound}", inst.label());
    let big = &inst.big.spec;

    let mut singles: Vec<SmallElement> = Vec::new();
    for c in inst.actor().elements() {
        singles.push(SmallElement { word: inst.small.identity(), c });
        for side in [Side::A, Side::B] {
            for x in inst.small.group(side).elements() {
                singles.push(SmallElement { word: inst.small.syllable(side, x), c });
            }
        }
    }
    let mut hom = Ok(());
    'outer: for x in &singles {
        for y in &singles {
            let lhs = inst.phi(&inst.small_mul(x, y));
            let rhs = big.word_mul(&inst.phi(x), &inst.phi(y));
            if lhs != rhs {
                hom = Err(format!("Φ(xy) = {lhs} ≠ {rhs} for x = ({}, {}), y = ({}, {})", x.word, x.c, y.word, y.c));
                break 'outer;
            }
        }
    }
    report.record("phi-homomorphism-single-syllables", &label, hom);

    let mut images = BTreeSet::new();
    let mut result = Ok(());
    for g in big.normal_forms(bound) {
        match inst.phi_inv(&g) {
            Ok(x) => {
                if inst.phi(&x) != g {
                    result = Err(format!("ΦΦ⁻¹({g}) ≠ {g}"));
                    break;
                }
                if !images.insert(x.clone()) {
                    result = Err(format!("Φ⁻¹ not injective at {g}"));
                    break;
                }
                if inst.phi_inv(&inst.phi(&x)).as_ref() != Ok(&x) {
                    result = Err(format!("Φ⁻¹Φ({}, {}) ≠ itself", x.word, x.c));
                    break;
                }
            }
            Err(e) => {
                result = Err(e.to_string());
                break;
            }
        }
    }
    report.record("phi-bijective-bounded", &label, result);
    report
}

/// The commuting squares `ν∘α = α̃∘ν_A`, `ν∘β = β̃∘ν_B` and `μ∘α̃ = μ_A`.
pub fn verify_naturality(inst: &IsoInstance) -> Report {
    let mut report = Report::new();
    let label = inst.label();
    for side in [Side::A, Side::B] {
        let factor = inst.big.factor(side);
        let maps = factor.split_maps();
        let embed = inst
            .small
            .group(side)
            .elements()
            .find(|&x| inst.nu(&inst.alpha(side, x)) != inst.alpha_big(side, maps.nu.apply(x)))
            .map_or(Ok(()), |x| Err(format!("squares disagree at {side}:{x}")));
        report.record(&format!("naturality-nu-{side}"), &label, embed);
        let proj = factor
            .flat()
            .elements()
            .find(|&x| inst.mu(&inst.alpha_big(side, x)) != maps.mu.apply(x))
            .map_or(Ok(()), |x| Err(format!("μ∘α̃ ≠ μ_{side} at {x}")));
        report.record(&format!("naturality-mu-{side}"), &label, proj);
    }
    // the two embeddings of the factors agree exactly on D
    let small = &inst.small;
    let agree = small
        .amalgamated()
        .elements()
        .find(|&d| {
            small.syllable(Side::A, small.iota(Side::A).apply(d))
                != small.syllable(Side::B, small.iota(Side::B).apply(d))
        })
        .map_or(Ok(()), |d| Err(format!("ι_A({d}) and ι_B({d}) reduce differently")));
    report.record("amalgamation-relation", &label, agree);
    report
}

/// The induced action is an action by automorphisms on sampled normal forms.
pub fn verify_induced_action(inst: &IsoInstance, cfg: SampleConfig) -> Report {
    let mut report = Report::new();
    let label = inst.label();
    let actor = inst.actor();
    let small = &inst.small;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut result = Ok(());
    for _ in 0..cfg.samples.min(2_000) {
        let u = small.random_normal_form(&mut rng, cfg.max_head);
        let v = small.random_normal_form(&mut rng, cfg.max_head);
        let c1 = rng.random_range(0..actor.order());
        let c2 = rng.random_range(0..actor.order());
        let lhs = inst.act(c1, &small.word_mul(&u, &v));
        let rhs = small.word_mul(&inst.act(c1, &u), &inst.act(c1, &v));
        if lhs != rhs {
            result = Err(format!("{c1}·({u} {v}) = {lhs} ≠ {rhs}"));
            break;
        }
        if inst.act(actor.mul(c1, c2), &u) != inst.act(c1, &inst.act(c2, &u)) {
            result = Err(format!("action law fails at c1={c1}, c2={c2}, w={u}"));
            break;
        }
        if inst.act(actor.identity(), &u) != u {
            result = Err(format!("identity moves {u}"));
            break;
        }
    }
    report.record("induced-action-automorphism", &label, result);
    report
}

/// Every verifier in this module.
pub fn verify_all(inst: &IsoInstance, bound: usize, cfg: SampleConfig) -> Report {
    let mut report = verify_exact_sequence(inst, bound);
    report.extend(verify_isomorphism(inst, cfg));
    report.extend(verify_bounded_bijection(inst, bound));
    report.extend(verify_naturality(inst));
    report.extend(verify_induced_action(inst, cfg));
    report
}

//! Finite groups given by explicit multiplication tables.
//!
//! Elements are plain indices `0..order`. Every constructor either returns a
//! group whose axioms have been checked exhaustively or an error; the one
//! exception is [`FiniteGroup::from_table_unchecked`], which exists so that
//! malformed tables can be loaded and diagnosed with [`check_group_axioms`].

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Index of a group element.
pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order must be positive")]
    EmptyGroup,
    #[error("table shape mismatch: {0}")]
    Shape(String),
    #[error("group axiom violated: {0}")]
    Axiom(AxiomViolation),
    #[error("not a homomorphism: witness ({x}, {y})")]
    NotHomomorphism { x: Elem, y: Elem },
    #[error("generator images do not generate the source group (element {missing} unreachable)")]
    DoesNotGenerate { missing: Elem },
    #[error("homomorphism domain/codomain mismatch: {0}")]
    Mismatch(String),
    #[error("invalid action: {0}")]
    Action(String),
}

/// The first axiom failure found by [`check_group_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    Identity { x: Elem },
    Inverse { x: Elem },
    Associativity { x: Elem, y: Elem, z: Elem },
    Generation { missing: Elem },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Identity { x } => write!(f, "identity fails at x={x}"),
            AxiomViolation::Inverse { x } => write!(f, "inverse fails at x={x}"),
            AxiomViolation::Associativity { x, y, z } => {
                write!(f, "associativity fails at (x,y,z)=({x},{y},{z})")
            }
            AxiomViolation::Generation { missing } => {
                write!(f, "generators miss element {missing}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub elem: Elem,
}

/// A finite group stored as a full Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    // row-major, order * order
    mul: Vec<Elem>,
    identity: Elem,
    inv: Vec<Elem>,
    generators: Vec<Generator>,
}

impl FiniteGroup {
    /// Builds a group from table rows and verifies all axioms.
    pub fn from_table(
        label: impl Into<String>,
        identity: Elem,
        rows: Vec<Vec<Elem>>,
        generators: Vec<Generator>,
    ) -> Result<Self, GroupError> {
        let g = Self::from_table_unchecked(label, identity, rows, generators)?;
        check_group_axioms(&g).map_err(GroupError::Axiom)?;
        Ok(g)
    }

    /// Builds a group checking only the table shape and index ranges.
    ///
    /// Inverses are read off the table; an element with no right inverse is
    /// given `identity` as a placeholder, which [`check_group_axioms`] then
    /// reports.
    pub fn from_table_unchecked(
        label: impl Into<String>,
        identity: Elem,
        rows: Vec<Vec<Elem>>,
        generators: Vec<Generator>,
    ) -> Result<Self, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::EmptyGroup);
        }
        if identity >= order {
            return Err(GroupError::Shape(format!(
                "identity {identity} out of range for order {order}"
            )));
        }
        let mut mul = Vec::with_capacity(order * order);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::Shape(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= order) {
                return Err(GroupError::Shape(format!("row {i} contains {bad} >= {order}")));
            }
            mul.extend(row);
        }
        if let Some(g) = generators.iter().find(|g| g.elem >= order) {
            return Err(GroupError::Shape(format!(
                "generator {} = {} out of range",
                g.name, g.elem
            )));
        }
        let inv = (0..order)
            .map(|x| {
                (0..order)
                    .find(|&y| mul[x * order + y] == identity)
                    .unwrap_or(identity)
            })
            .collect();
        Ok(FiniteGroup {
            label: label.into(),
            order,
            mul,
            identity,
            inv,
            generators,
        })
    }

    pub(crate) fn from_fn(
        label: impl Into<String>,
        order: usize,
        identity: Elem,
        generators: Vec<Generator>,
        f: impl Fn(Elem, Elem) -> Elem,
    ) -> Result<Self, GroupError> {
        let rows = (0..order)
            .map(|x| (0..order).map(|y| f(x, y)).collect())
            .collect();
        Self::from_table(label, identity, rows, generators)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mul[x * self.order + y]
    }

    #[inline]
    pub fn inv(&self, x: Elem) -> Elem {
        self.inv[x]
    }

    /// `x^k` for any integer `k`.
    pub fn pow(&self, x: Elem, k: i64) -> Elem {
        let base = if k < 0 { self.inv(x) } else { x };
        let mut acc = self.identity;
        for _ in 0..k.unsigned_abs() % self.element_order(x) as u64 {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, x: Elem) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
            if k > self.order {
                // only reachable for tables that are not groups
                break;
            }
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|x| self.elements().all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Same multiplication table and identity; labels and generator names are ignored.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.order == other.order && self.identity == other.identity && self.mul == other.mul
    }

    /// Closure of `gens` under multiplication (finite, so inverses come for free).
    pub fn closure(&self, gens: &[Elem]) -> Vec<bool> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Returns a copy with one table entry overwritten. Intended for building
    /// counterexamples; the result is not re-validated.
    pub fn with_entry(&self, x: Elem, y: Elem, value: Elem) -> FiniteGroup {
        let mut g = self.clone();
        g.mul[x * self.order + y] = value;
        g
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Elem]> {
        self.mul.chunks(self.order)
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.label, self.order)
    }
}

/// Exhaustively checks identity, inverses, associativity and generation.
pub fn check_group_axioms(g: &FiniteGroup) -> Result<(), AxiomViolation> {
    let e = g.identity();
    for x in g.elements() {
        if g.mul(e, x) != x || g.mul(x, e) != x {
            return Err(AxiomViolation::Identity { x });
        }
    }
    for x in g.elements() {
        let y = g.inv(x);
        if g.mul(x, y) != e || g.mul(y, x) != e {
            return Err(AxiomViolation::Inverse { x });
        }
    }
    for x in g.elements() {
        for y in g.elements() {
            let xy = g.mul(x, y);
            for z in g.elements() {
                if g.mul(xy, z) != g.mul(x, g.mul(y, z)) {
                    return Err(AxiomViolation::Associativity { x, y, z });
                }
            }
        }
    }
    let gens: Vec<Elem> = g.generators().iter().map(|g| g.elem).collect();
    let reached = g.closure(&gens);
    if let Some(missing) = reached.iter().position(|&r| !r) {
        return Err(AxiomViolation::Generation { missing });
    }
    Ok(())
}

/// The cyclic group of order `n`; element `i` is the residue `i`.
pub fn make_cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::EmptyGroup);
    }
    let gens = if n > 1 {
        vec![Generator { name: "g".into(), elem: 1 }]
    } else {
        vec![]
    };
    FiniteGroup::from_fn(format!("Z{n}"), n, 0, gens, |x, y| (x + y) % n)
}

/// The dihedral group of order `2n`.
///
/// Index `i < n` is `r^i` and index `n + i` is `r^i f`, with `f r f = r^-1`.
pub fn make_dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::EmptyGroup);
    }
    let mut gens = Vec::new();
    if n > 1 {
        gens.push(Generator { name: "r".into(), elem: 1 });
    }
    gens.push(Generator { name: "f".into(), elem: n });
    FiniteGroup::from_fn(format!("D{n}"), 2 * n, 0, gens, |x, y| {
        let (i, a) = (x % n, x / n);
        let (j, b) = (y % n, y / n);
        let j = if a == 1 { (n - j) % n } else { j };
        ((i + j) % n) + n * (a ^ b)
    })
}

/// A homomorphism stored as its full image table.
#[derive(Debug, Clone)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    image: Vec<Elem>,
}

impl GroupHom {
    /// Wraps an image table after verifying the homomorphism law exhaustively.
    pub fn from_table(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        image: Vec<Elem>,
    ) -> Result<Self, GroupError> {
        if image.len() != source.order() {
            return Err(GroupError::Shape(format!(
                "image table has {} entries, source order is {}",
                image.len(),
                source.order()
            )));
        }
        if image.iter().any(|&v| v >= target.order()) {
            return Err(GroupError::Shape("image entry out of target range".into()));
        }
        let hom = GroupHom { source, target, image };
        hom.verify()?;
        Ok(hom)
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let image = group.elements().collect();
        GroupHom {
            source: group.clone(),
            target: group,
            image,
        }
    }

    fn verify(&self) -> Result<(), GroupError> {
        let (s, t) = (&*self.source, &*self.target);
        if self.image[s.identity()] != t.identity() {
            return Err(GroupError::NotHomomorphism {
                x: s.identity(),
                y: s.identity(),
            });
        }
        for x in s.elements() {
            for y in s.elements() {
                if self.image[s.mul(x, y)] != t.mul(self.image[x], self.image[y]) {
                    return Err(GroupError::NotHomomorphism { x, y });
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.image[x]
    }

    pub fn table(&self) -> &[Elem] {
        &self.image
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom, GroupError> {
        hom_compose(self, next)
    }

    pub fn is_injective(&self) -> bool {
        is_injective(self)
    }

    /// Preimage table: `Some(x)` with `self(x) = y`, for injective homs.
    pub fn preimages(&self) -> Vec<Option<Elem>> {
        let mut pre = vec![None; self.target.order()];
        for (x, &y) in self.image.iter().enumerate() {
            pre[y].get_or_insert(x);
        }
        pre
    }
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image
            && self.source.same_table(&other.source)
            && self.target.same_table(&other.target)
    }
}

impl Eq for GroupHom {}

/// Extends an assignment on generating elements to the whole source group.
///
/// `gen_images` pairs a source element with its image; the paired source
/// elements must generate the source. Fails with a witness pair if the
/// extension is ambiguous or does not respect multiplication.
pub fn hom_from_generators(
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    gen_images: &[(Elem, Elem)],
) -> Result<GroupHom, GroupError> {
    for &(g, h) in gen_images {
        if g >= source.order() || h >= target.order() {
            return Err(GroupError::Shape(format!("generator image {g}:{h} out of range")));
        }
    }
    let mut image: Vec<Option<Elem>> = vec![None; source.order()];
    image[source.identity()] = Some(target.identity());
    let mut queue = VecDeque::from([source.identity()]);
    while let Some(x) = queue.pop_front() {
        let ix = image[x].expect("queued elements have images");
        for &(g, h) in gen_images {
            let y = source.mul(x, g);
            let iy = target.mul(ix, h);
            match image[y] {
                None => {
                    image[y] = Some(iy);
                    queue.push_back(y);
                }
                Some(prev) if prev != iy => return Err(GroupError::NotHomomorphism { x, y: g }),
                Some(_) => {}
            }
        }
    }
    if let Some(missing) = image.iter().position(Option::is_none) {
        return Err(GroupError::DoesNotGenerate { missing });
    }
    GroupHom::from_table(source, target, image.into_iter().map(Option::unwrap).collect())
}

/// `f` followed by `g`; requires `f.target` and `g.source` to share a table.
pub fn hom_compose(f: &GroupHom, g: &GroupHom) -> Result<GroupHom, GroupError> {
    if !f.target.same_table(&g.source) {
        return Err(GroupError::Mismatch(format!(
            "target {} of first map is not source {} of second",
            f.target.label(),
            g.source.label()
        )));
    }
    let image = f.image.iter().map(|&y| g.image[y]).collect();
    GroupHom::from_table(f.source.clone(), g.target.clone(), image)
}

pub fn is_injective(f: &GroupHom) -> bool {
    let mut hit = vec![false; f.target.order()];
    f.image.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
}

/// Searches for an isomorphism by trying every assignment of the source
/// generators to target elements of matching order.
pub fn find_isomorphism(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Option<GroupHom> {
    if source.order() != target.order() {
        return None;
    }
    let gens: Vec<Elem> = source.generators().iter().map(|g| g.elem).collect();
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&g| {
            let k = source.element_order(g);
            target.elements().filter(|&h| target.element_order(h) == k).collect()
        })
        .collect();
    let mut choice = vec![0usize; gens.len()];
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    loop {
        let pairs: Vec<(Elem, Elem)> = gens
            .iter()
            .zip(&choice)
            .zip(&candidates)
            .map(|((&g, &i), c)| (g, c[i]))
            .collect();
        if let Ok(h) = hom_from_generators(source.clone(), target.clone(), &pairs) {
            if h.is_injective() {
                return Some(h);
            }
        }
        // odometer over the candidate lists
        let mut k = 0;
        loop {
            if k == choice.len() {
                return None;
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// A left action of `actor` on `space` by automorphisms.
///
/// `table[c][n]` is the image of `n` under `c`, and
/// `table[c1 c2] = table[c1] ∘ table[c2]`.
#[derive(Debug, Clone)]
pub struct GroupAction {
    actor: Arc<FiniteGroup>,
    space: Arc<FiniteGroup>,
    table: Vec<Vec<Elem>>,
}

impl GroupAction {
    pub fn new(
        actor: Arc<FiniteGroup>,
        space: Arc<FiniteGroup>,
        table: Vec<Vec<Elem>>,
    ) -> Result<Self, GroupError> {
        if table.len() != actor.order() {
            return Err(GroupError::Action(format!(
                "{} permutations given for an actor of order {}",
                table.len(),
                actor.order()
            )));
        }
        for (c, perm) in table.iter().enumerate() {
            if perm.len() != space.order() {
                return Err(GroupError::Action(format!("permutation {c} has wrong length")));
            }
            let mut hit = vec![false; space.order()];
            for &v in perm {
                if v >= space.order() || std::mem::replace(&mut hit[v], true) {
                    return Err(GroupError::Action(format!("entry {c} is not a permutation")));
                }
            }
            for x in space.elements() {
                for y in space.elements() {
                    if perm[space.mul(x, y)] != space.mul(perm[x], perm[y]) {
                        return Err(GroupError::Action(format!(
                            "c={c} is not an automorphism: witness ({x}, {y})"
                        )));
                    }
                }
            }
        }
        if table[actor.identity()].iter().enumerate().any(|(i, &v)| i != v) {
            return Err(GroupError::Action("identity does not act trivially".into()));
        }
        for c1 in actor.elements() {
            for c2 in actor.elements() {
                let lhs = &table[actor.mul(c1, c2)];
                if let Some(n) = space.elements().find(|&n| lhs[n] != table[c1][table[c2][n]]) {
                    return Err(GroupError::Action(format!(
                        "action law fails at c1={c1}, c2={c2}, n={n}"
                    )));
                }
            }
        }
        Ok(GroupAction { actor, space, table })
    }

    pub fn trivial(actor: Arc<FiniteGroup>, space: Arc<FiniteGroup>) -> Self {
        let table = vec![space.elements().collect(); actor.order()];
        GroupAction { actor, space, table }
    }

    /// Order-two actor acting on an abelian group by inversion.
    pub fn inversion(actor: Arc<FiniteGroup>, space: Arc<FiniteGroup>) -> Result<Self, GroupError> {
        if actor.order() != 2 {
            return Err(GroupError::Action(format!(
                "inversion action needs an actor of order 2, got {}",
                actor.order()
            )));
        }
        if !space.is_abelian() {
            return Err(GroupError::Action(format!(
                "inversion is not an automorphism of nonabelian {}",
                space.label()
            )));
        }
        let table = actor
            .elements()
            .map(|c| {
                space
                    .elements()
                    .map(|n| if c == actor.identity() { n } else { space.inv(n) })
                    .collect()
            })
            .collect();
        Self::new(actor, space, table)
    }

    pub fn actor(&self) -> &Arc<FiniteGroup> {
        &self.actor
    }

    pub fn space(&self) -> &Arc<FiniteGroup> {
        &self.space
    }

    #[inline]
    pub fn apply(&self, c: Elem, n: Elem) -> Elem {
        self.table[c][n]
    }

    pub fn permutation(&self, c: Elem) -> &[Elem] {
        &self.table[c]
    }
}

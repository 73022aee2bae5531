//! Semidirect products `N ⋊ C` and the functor `N ↦ N ⋊ C` on equivariant maps.
//!
//! Multiplication is `(n1, c1)(n2, c2) = (n1 · c1(n2), c1 c2)` with `C` acting
//! on the left. The flattened group indexes `(n, c)` as `n·|C| + c`.

use std::sync::Arc;

use thiserror::Error;

use crate::group::{
    check_group_axioms, hom_compose, hom_from_generators, Elem, FiniteGroup, Generator,
    GroupAction, GroupError, GroupHom,
};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("action does not match the given groups: {0}")]
    ActionMismatch(String),
    #[error("map is not equivariant: witness (c={c}, n={n})")]
    NotEquivariant { c: Elem, n: Elem },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SemidirectElement {
    pub n: Elem,
    pub c: Elem,
}

#[derive(Debug, Clone)]
pub struct SemidirectGroup {
    action: GroupAction,
    flat: Arc<FiniteGroup>,
}

/// `semidirect(N, C, act)`.
pub fn semidirect(
    space: &Arc<FiniteGroup>,
    actor: &Arc<FiniteGroup>,
    action: &GroupAction,
) -> Result<SemidirectGroup, ProductError> {
    if !action.space().same_table(space) {
        return Err(ProductError::ActionMismatch(format!(
            "action space {} is not {}",
            action.space().label(),
            space.label()
        )));
    }
    if !action.actor().same_table(actor) {
        return Err(ProductError::ActionMismatch(format!(
            "action actor {} is not {}",
            action.actor().label(),
            actor.label()
        )));
    }
    SemidirectGroup::new(action.clone())
}

impl SemidirectGroup {
    pub fn new(action: GroupAction) -> Result<Self, ProductError> {
        let (space, actor) = (action.space().clone(), action.actor().clone());
        let k = actor.order();
        let order = space.order() * k;
        let identity = space.identity() * k + actor.identity();
        let mut gens: Vec<Generator> = space
            .generators()
            .iter()
            .map(|g| Generator {
                name: format!("n.{}", g.name),
                elem: g.elem * k + actor.identity(),
            })
            .collect();
        gens.extend(actor.generators().iter().map(|g| Generator {
            name: format!("c.{}", g.name),
            elem: space.identity() * k + g.elem,
        }));
        let rows = (0..order)
            .map(|x| {
                (0..order)
                    .map(|y| {
                        let (n1, c1) = (x / k, x % k);
                        let (n2, c2) = (y / k, y % k);
                        space.mul(n1, action.apply(c1, n2)) * k + actor.mul(c1, c2)
                    })
                    .collect()
            })
            .collect();
        let label = format!("{}⋊{}", space.label(), actor.label());
        let flat = FiniteGroup::from_table_unchecked(label, identity, rows, gens)?;
        check_group_axioms(&flat).map_err(GroupError::Axiom)?;
        Ok(SemidirectGroup {
            action,
            flat: Arc::new(flat),
        })
    }

    pub fn space(&self) -> &Arc<FiniteGroup> {
        self.action.space()
    }

    pub fn actor(&self) -> &Arc<FiniteGroup> {
        self.action.actor()
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn flat(&self) -> &Arc<FiniteGroup> {
        &self.flat
    }

    #[inline]
    pub fn index(&self, el: SemidirectElement) -> Elem {
        el.n * self.actor().order() + el.c
    }

    #[inline]
    pub fn pair(&self, x: Elem) -> SemidirectElement {
        let k = self.actor().order();
        SemidirectElement { n: x / k, c: x % k }
    }

    pub fn mul_pairs(&self, x: SemidirectElement, y: SemidirectElement) -> SemidirectElement {
        self.pair(self.flat.mul(self.index(x), self.index(y)))
    }

    /// The embedding `N → N⋊C`, projection `N⋊C → C` and section `C → N⋊C`.
    pub fn split_maps(&self) -> SplitMaps {
        let (space, actor) = (self.space(), self.actor());
        let nu = space
            .elements()
            .map(|n| self.index(SemidirectElement { n, c: actor.identity() }))
            .collect();
        let mu = self.flat.elements().map(|x| self.pair(x).c).collect();
        let tau = actor
            .elements()
            .map(|c| self.index(SemidirectElement { n: space.identity(), c }))
            .collect();
        let build = |s: &Arc<FiniteGroup>, t: &Arc<FiniteGroup>, table| {
            GroupHom::from_table(s.clone(), t.clone(), table)
                .expect("split maps of a valid semidirect product are homomorphisms")
        };
        SplitMaps {
            nu: build(space, &self.flat, nu),
            mu: build(&self.flat, actor, mu),
            tau: build(actor, &self.flat, tau),
        }
    }
}

/// Split extension data `N → N⋊C ⇄ C`.
#[derive(Debug, Clone)]
pub struct SplitMaps {
    pub nu: GroupHom,
    pub mu: GroupHom,
    pub tau: GroupHom,
}

/// `psi ⋊ id_C : (n, c) ↦ (psi(n), c)`.
///
/// `psi` must intertwine the two actions, otherwise the map is not a homomorphism.
pub fn functor_on_hom(
    psi: &GroupHom,
    src: &SemidirectGroup,
    dst: &SemidirectGroup,
) -> Result<GroupHom, ProductError> {
    if !psi.source().same_table(src.space()) || !psi.target().same_table(dst.space()) {
        return Err(GroupError::Mismatch("psi does not map between the two spaces".into()).into());
    }
    if !src.actor().same_table(dst.actor()) {
        return Err(ProductError::ActionMismatch("actors differ".into()));
    }
    let (act_n, act_m) = (src.action(), dst.action());
    for c in src.actor().elements() {
        for n in src.space().elements() {
            if psi.apply(act_n.apply(c, n)) != act_m.apply(c, psi.apply(n)) {
                return Err(ProductError::NotEquivariant { c, n });
            }
        }
    }
    let image = src
        .flat()
        .elements()
        .map(|x| {
            let p = src.pair(x);
            dst.index(SemidirectElement { n: psi.apply(p.n), c: p.c })
        })
        .collect();
    Ok(GroupHom::from_table(src.flat().clone(), dst.flat().clone(), image)?)
}

#[derive(Debug, Clone)]
pub struct CatalogHom {
    pub src: usize,
    pub dst: usize,
    pub hom: GroupHom,
}

/// A claimed composite `first ; second = composite` to be checked under the functor.
#[derive(Debug, Clone)]
pub struct DeclaredComposite {
    pub first: usize,
    pub second: usize,
    pub composite: GroupHom,
}

/// Objects (all over one actor) and equivariant maps between them.
#[derive(Debug, Clone, Default)]
pub struct FunctorCatalog {
    pub objects: Vec<SemidirectGroup>,
    pub homs: Vec<CatalogHom>,
    pub composites: Vec<DeclaredComposite>,
}

impl FunctorCatalog {
    /// `Z_n` for each `n` with the inversion action of `Z2`, and every injective
    /// homomorphism between them.
    pub fn inversion_catalog(orders: &[usize]) -> Result<Self, ProductError> {
        let c2 = Arc::new(crate::group::make_cyclic(2)?);
        let mut objects = Vec::new();
        for &n in orders {
            let zn = Arc::new(crate::group::make_cyclic(n)?);
            let act = GroupAction::inversion(c2.clone(), zn)?;
            objects.push(SemidirectGroup::new(act)?);
        }
        let mut homs = Vec::new();
        for (i, s) in objects.iter().enumerate() {
            for (j, t) in objects.iter().enumerate() {
                for hom in all_embeddings(s.space(), t.space()) {
                    homs.push(CatalogHom { src: i, dst: j, hom });
                }
            }
        }
        Ok(FunctorCatalog {
            objects,
            homs,
            composites: Vec::new(),
        })
    }
}

/// Every injective homomorphism between two groups, found by trying all
/// images of the source generators.
pub fn all_embeddings(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Vec<GroupHom> {
    let gens: Vec<Elem> = source.generators().iter().map(|g| g.elem).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let pairs: Vec<(Elem, Elem)> = gens.iter().copied().zip(choice.iter().copied()).collect();
        if let Ok(h) = hom_from_generators(source.clone(), target.clone(), &pairs) {
            if h.is_injective() {
                out.push(h);
            }
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < target.order() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Checks `F(id) = id` for every object and `F(g∘f) = F(g)∘F(f)` for every
/// composable pair and declared composite.
pub fn verify_functor_laws(catalog: &FunctorCatalog) -> Report {
    let mut report = Report::new();
    let lifted: Vec<Result<GroupHom, ProductError>> = catalog
        .homs
        .iter()
        .map(|h| functor_on_hom(&h.hom, &catalog.objects[h.src], &catalog.objects[h.dst]))
        .collect();

    for (i, obj) in catalog.objects.iter().enumerate() {
        let instance = obj.flat().label().to_string();
        let lifted_id = functor_on_hom(&GroupHom::identity(obj.space().clone()), obj, obj);
        let id = GroupHom::identity(obj.flat().clone());
        match lifted_id {
            Ok(f) => match first_difference(&f, &id) {
                None => report.pass("functor-identity", &instance),
                Some(x) => report.fail(
                    "functor-identity",
                    &instance,
                    format!("object {i}: F(id)({x}) = {} but id({x}) = {x}", f.apply(x)),
                ),
            },
            Err(e) => report.fail("functor-identity", &instance, e.to_string()),
        }
    }

    for (i, f) in catalog.homs.iter().enumerate() {
        for (j, g) in catalog.homs.iter().enumerate() {
            if f.dst != g.src {
                continue;
            }
            let composite = hom_compose(&f.hom, &g.hom).map_err(ProductError::from);
            check_composite(&mut report, catalog, &lifted, i, j, composite);
        }
    }
    for declared in &catalog.composites {
        check_composite(
            &mut report,
            catalog,
            &lifted,
            declared.first,
            declared.second,
            Ok(declared.composite.clone()),
        );
    }
    report
}

fn check_composite(
    report: &mut Report,
    catalog: &FunctorCatalog,
    lifted: &[Result<GroupHom, ProductError>],
    i: usize,
    j: usize,
    composite: Result<GroupHom, ProductError>,
) {
    let (f, g) = (&catalog.homs[i], &catalog.homs[j]);
    let instance = format!(
        "{} -> {} -> {} (maps {i}, {j})",
        catalog.objects[f.src].space().label(),
        catalog.objects[f.dst].space().label(),
        catalog.objects[g.dst].space().label()
    );
    let lhs = composite.and_then(|h| {
        functor_on_hom(&h, &catalog.objects[f.src], &catalog.objects[g.dst])
    });
    let rhs = match (&lifted[i], &lifted[j]) {
        (Ok(a), Ok(b)) => hom_compose(a, b).map_err(ProductError::from),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => match first_difference(&l, &r) {
            None => report.pass("functor-composition", &instance),
            Some(x) => report.fail(
                "functor-composition",
                &instance,
                format!("F(g∘f)({x}) = {} but F(g)(F(f)({x})) = {}", l.apply(x), r.apply(x)),
            ),
        },
        (Err(e), _) | (_, Err(e)) => report.fail("functor-composition", &instance, e.to_string()),
    }
}

fn first_difference(f: &GroupHom, g: &GroupHom) -> Option<Elem> {
    f.source().elements().find(|&x| f.apply(x) != g.apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{find_isomorphism, is_injective, make_cyclic, make_dihedral};

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(make_cyclic(n).unwrap())
    }

    fn inv_product(n: usize) -> SemidirectGroup {
        SemidirectGroup::new(GroupAction::inversion(z(2), z(n)).unwrap()).unwrap()
    }

    #[test]
    fn inversion_products_are_dihedral() {
        for n in [2, 3, 4, 6] {
            let sd = inv_product(n);
            let d = Arc::new(make_dihedral(n).unwrap());
            assert!(find_isomorphism(sd.flat(), &d).is_some(), "Z{n}⋊Z2 vs D{n}");
        }
    }

    #[test]
    fn trivial_actor_gives_space() {
        let n = Arc::new(make_dihedral(3).unwrap());
        let act = GroupAction::trivial(z(1), n.clone());
        let sd = semidirect(&n, &z(1), &act).unwrap();
        assert!(sd.flat().same_table(&n));
    }

    #[test]
    fn semidirect_rejects_mismatched_action() {
        let act = GroupAction::inversion(z(2), z(4)).unwrap();
        assert!(matches!(semidirect(&z(6), &z(2), &act), Err(ProductError::ActionMismatch(_))));
    }

    #[test]
    fn multiplication_law_exhaustive() {
        let sd = inv_product(6);
        let (n, c, act) = (sd.space(), sd.actor(), sd.action());
        for x in sd.flat().elements() {
            for y in sd.flat().elements() {
                let (p, q) = (sd.pair(x), sd.pair(y));
                let expected = SemidirectElement {
                    n: n.mul(p.n, act.apply(p.c, q.n)),
                    c: c.mul(p.c, q.c),
                };
                assert_eq!(sd.mul_pairs(p, q), expected);
            }
        }
    }

    #[test]
    fn split_maps_laws() {
        let sd = inv_product(4);
        let SplitMaps { nu, mu, tau } = sd.split_maps();
        let c = sd.actor();
        for x in c.elements() {
            assert_eq!(mu.apply(tau.apply(x)), x);
        }
        for n in sd.space().elements() {
            assert_eq!(mu.apply(nu.apply(n)), c.identity());
        }
        assert_eq!(nu.apply(0), sd.flat().identity());
        assert_eq!(mu.apply(sd.index(SemidirectElement { n: 3, c: 1 })), 1);
        let kernel: Vec<Elem> = sd.flat().elements().filter(|&x| mu.apply(x) == 0).collect();
        let mut image: Vec<Elem> = sd.space().elements().map(|n| nu.apply(n)).collect();
        image.sort();
        assert_eq!(kernel, image);
    }

    #[test]
    fn functor_examples() {
        let (s2, s4) = (inv_product(2), inv_product(4));
        let psi = hom_from_generators(z(2), z(4), &[(1, 2)]).unwrap();
        let lifted = functor_on_hom(&psi, &s2, &s4).unwrap();
        for c in 0..2 {
            let x = s2.index(SemidirectElement { n: 1, c });
            assert_eq!(s4.pair(lifted.apply(x)), SemidirectElement { n: 2, c });
        }
        assert!(is_injective(&lifted));
        let id = functor_on_hom(&GroupHom::identity(z(4)), &s4, &s4).unwrap();
        assert_eq!(id, GroupHom::identity(s4.flat().clone()));
    }

    #[test]
    fn functor_rejects_non_equivariant() {
        // Z4 acted on trivially, Z4 acted on by inversion: identity does not intertwine.
        let triv = SemidirectGroup::new(GroupAction::trivial(z(2), z(4))).unwrap();
        let inv = inv_product(4);
        let err = functor_on_hom(&GroupHom::identity(z(4)), &triv, &inv).unwrap_err();
        assert_eq!(err, ProductError::NotEquivariant { c: 1, n: 1 });
    }

    #[test]
    fn catalog_embeddings() {
        let cat = FunctorCatalog::inversion_catalog(&[2, 4, 6]).unwrap();
        // Z2: id; Z2->Z4; Z2->Z6; Z4: two automorphisms; Z6: two automorphisms
        assert_eq!(cat.homs.len(), 7);
        assert!(verify_functor_laws(&cat).passed());
        assert!(verify_functor_laws(&FunctorCatalog::default()).passed());
    }

    #[test]
    fn corrupted_composite_is_caught() {
        let mut cat = FunctorCatalog::inversion_catalog(&[2, 4]).unwrap();
        let f = cat.homs.iter().position(|h| h.src == 0 && h.dst == 1).unwrap();
        let g = cat
            .homs
            .iter()
            .position(|h| h.src == 1 && h.dst == 1 && h.hom.apply(1) == 3)
            .unwrap();
        // the true composite sends 1 to 2; claim it is trivial instead
        let wrong = hom_from_generators(z(2), z(4), &[(1, 0)]).unwrap();
        cat.composites.push(DeclaredComposite { first: f, second: g, composite: wrong });
        let report = verify_functor_laws(&cat);
        assert!(!report.passed());
        let failure = report.failures().next().unwrap();
        assert_eq!(failure.check, "functor-composition");
        assert!(failure.witness.is_some());
    }
}

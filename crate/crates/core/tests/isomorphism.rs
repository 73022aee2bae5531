use std::sync::Arc;

use treeprod::group::{hom_from_generators, make_cyclic, make_dihedral, GroupAction, GroupHom};
use treeprod::iso::{
    verify_all, verify_bounded_bijection, verify_exact_sequence, verify_isomorphism, verify_naturality,
    CompatibleActionTriple, IsoInstance, SampleConfig,
};
use treeprod::make_amalgam;
use treeprod::matgroup::build_dihedral_model;

fn assert_passed(report: &treeprod::Report) {
    let failures: Vec<_> = report.failures().collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn z4_z6_instance_passes_everything() {
    let model = build_dihedral_model();
    let inst = model.instance();
    assert_passed(&verify_exact_sequence(inst, 3));
    assert_passed(&verify_isomorphism(inst, SampleConfig::default()));
    assert_passed(&verify_bounded_bijection(inst, 3));
    assert_passed(&verify_naturality(inst));
}

#[test]
fn big_amalgam_is_dihedral() {
    let model = build_dihedral_model();
    let big = model.instance().big();
    let iso = |g: &Arc<treeprod::FiniteGroup>, n| {
        treeprod::group::find_isomorphism(g, &Arc::new(make_dihedral(n).unwrap())).is_some()
    };
    assert!(iso(big.factor(treeprod::Side::A).flat(), 4));
    assert!(iso(big.factor(treeprod::Side::B).flat(), 6));
    assert!(iso(big.d_product().flat(), 2));
}

/// A nonabelian instance: D3 *_{Z3} D3 with Z2 acting by conjugation by a flip
/// on both factors (and by inversion on the shared rotations).
#[test]
fn nonabelian_instance() {
    let d3 = Arc::new(make_dihedral(3).unwrap());
    let z3 = Arc::new(make_cyclic(3).unwrap());
    let c = Arc::new(make_cyclic(2).unwrap());
    let iota = hom_from_generators(z3.clone(), d3.clone(), &[(1, 1)]).unwrap();
    let spec = make_amalgam(d3.clone(), d3.clone(), z3.clone(), iota.clone(), iota).unwrap();
    let conj: Vec<usize> = d3.elements().map(|x| d3.mul(d3.mul(3, x), 3)).collect();
    let act = GroupAction::new(c.clone(), d3.clone(), vec![d3.elements().collect(), conj]).unwrap();
    let act_d = GroupAction::inversion(c, z3).unwrap();
    let acts = CompatibleActionTriple::new(&spec, act.clone(), act, act_d).unwrap();
    let inst = IsoInstance::new(spec, acts).unwrap();
    let cfg = SampleConfig { samples: 2_000, max_head: 5, seed: 9 };
    assert_passed(&verify_all(&inst, 3, cfg));
}

/// Free product (trivial D) with a nontrivial actor.
#[test]
fn free_product_instance() {
    let z3 = Arc::new(make_cyclic(3).unwrap());
    let z1 = Arc::new(make_cyclic(1).unwrap());
    let c = Arc::new(make_cyclic(2).unwrap());
    let triv = GroupHom::from_table(z1.clone(), z3.clone(), vec![0]).unwrap();
    let spec = make_amalgam(z3.clone(), z3.clone(), z1.clone(), triv.clone(), triv).unwrap();
    let acts = CompatibleActionTriple::new(
        &spec,
        GroupAction::inversion(c.clone(), z3.clone()).unwrap(),
        GroupAction::trivial(c.clone(), z3),
        GroupAction::trivial(c, z1),
    )
    .unwrap();
    let inst = IsoInstance::new(spec, acts).unwrap();
    let cfg = SampleConfig { samples: 2_000, max_head: 6, seed: 4 };
    assert_passed(&verify_all(&inst, 3, cfg));
}

#[test]
fn same_seed_same_report() {
    let model = build_dihedral_model();
    let cfg = SampleConfig { samples: 500, max_head: 6, seed: 42 };
    let a = verify_isomorphism(model.instance(), cfg);
    let b = verify_isomorphism(model.instance(), cfg);
    assert_eq!(a, b);
}

use oscillator_core::error::Error;
use oscillator_core::fields::field_of_order;
use oscillator_core::forms::SymmetricForm;
use oscillator_core::orbits::*;

fn problem(side: Side, q: u64, half: usize, form: &str) -> OrbitProblem {
    let f = field_of_order(q).unwrap();
    let w = SymmetricForm::parse(f.clone(), form).unwrap();
    OrbitProblem::new(side, f, half, w).unwrap()
}

#[test]
fn descriptor_counts() {
    assert_eq!(descriptor_count(Side::Sp, 3, 1).unwrap(), 2);
    assert_eq!(descriptor_count(Side::Sp, 3, 2).unwrap(), 8);
    assert_eq!(descriptor_count(Side::O, 3, 2).unwrap(), 40);
    for (side, len) in [(Side::Sp, 3), (Side::O, 2), (Side::O, 3)] {
        let f = field_of_order(3).unwrap();
        let listed = enumerate_descriptors(side, f, len).count() as u128;
        assert_eq!(listed, descriptor_count(side, 3, len).unwrap(), "{side} len={len}");
    }
}

#[test]
fn closed_forms() {
    assert_eq!(stable_orbit_count(&problem(Side::Sp, 3, 1, "odd:1")).unwrap(), 2);
    assert_eq!(stable_orbit_count(&problem(Side::Sp, 3, 2, "plus:2")).unwrap(), 8);
    assert_eq!(stable_orbit_count(&problem(Side::O, 3, 1, "plus:4")).unwrap(), 40);
    assert!(matches!(stable_orbit_count(&problem(Side::Sp, 3, 1, "plus:2")), Err(Error::NotInStableRange(_))));
    assert!(matches!(stable_orbit_count(&problem(Side::O, 3, 1, "minus:4")), Err(Error::NotInStableRange(_))));
}

#[test]
fn census_matches_burnside() {
    for (side, q, half, form, want) in [
        (Side::Sp, 3, 1, "odd:1", 2),
        (Side::Sp, 5, 1, "odd:1", 2),
        (Side::Sp, 3, 2, "plus:2", 8),
        (Side::O, 3, 1, "plus:4", 40),
        (Side::O, 3, 1, "odd:3", 35),
        (Side::O, 5, 1, "minus:2", 65),
    ] {
        let p = problem(side, q, half, form);
        assert_eq!(census(&p).unwrap(), burnside_count(&p.group().unwrap(), p.tuple_len()).unwrap(), "{side} q={q} {form}");
        assert_eq!(census(&p).unwrap(), want, "{side} q={q} {form}");
    }
}

#[test]
fn pairs_in_the_symplectic_plane() {
    // independent pairs with S(u, v) = 0 do not exist in dimension 2: the raw
    // descriptor list has 8 entries but only 7 orbits are inhabited
    let p = problem(Side::Sp, 3, 1, "plus:2");
    assert!(!p.stable());
    assert_eq!(descriptor_count(Side::Sp, 3, 2).unwrap(), 8);
    assert_eq!(census(&p).unwrap(), 7);
    let g = p.group().unwrap();
    assert_eq!(burnside_count(&g, 2).unwrap(), 7);
    assert_eq!(burnside_count_points(&g, 2).unwrap(), 7);
    let empty: Vec<_> = enumerate_descriptors(Side::Sp, p.field().clone(), 2)
        .filter(|d| !descriptor_nonempty(&p, d).unwrap())
        .collect();
    assert_eq!(empty.len(), 1);
    assert_eq!(empty[0].d, 2);
}

#[test]
fn kernel_and_point_burnside_agree() {
    for (side, q, half, form) in [(Side::Sp, 3, 1, "odd:3"), (Side::O, 3, 1, "minus:2"), (Side::O, 5, 1, "odd:1")] {
        let p = problem(side, q, half, form);
        let g = p.group().unwrap();
        assert_eq!(burnside_count(&g, p.tuple_len()).unwrap(), burnside_count_points(&g, p.tuple_len()).unwrap());
    }
}

#[test]
fn group_orders() {
    for (kind, q, size, want) in [
        (GroupKind::Sp, 3, 1, 24),
        (GroupKind::Sp, 5, 1, 120),
        (GroupKind::Oodd, 3, 1, 48),
        (GroupKind::Oplus, 3, 1, 4),
        (GroupKind::Ominus, 3, 1, 8),
        (GroupKind::Oplus, 3, 2, 1152),
        (GroupKind::Ominus, 3, 2, 1440),
        (GroupKind::Sp, 3, 2, 51840),
    ] {
        let g = build_group(kind, field_of_order(q).unwrap(), size).unwrap();
        assert!(g.preserves_form());
        assert_eq!(g.order().unwrap(), want, "{kind:?} q={q} size={size}");
        assert_eq!(g.expected_order().unwrap(), want.into());
    }
}

#[test]
fn size_limits() {
    let g = build_group(GroupKind::Sp, field_of_order(5).unwrap(), 2).unwrap();
    assert!(matches!(g.order(), Err(Error::SizeLimit(_))));
    let g = build_group(GroupKind::Sp, field_of_order(3).unwrap(), 2).unwrap();
    assert!(matches!(burnside_count_points(&g, 3), Err(Error::SizeLimit(_))));
    let p = problem(Side::O, 3, 3, "plus:6");
    assert!(matches!(census(&p), Err(Error::SizeLimit(_))));
}

#[test]
fn counters_by_name() {
    let p = problem(Side::O, 3, 1, "plus:4");
    for name in ["descriptors", "closed-form", "burnside"] {
        assert_eq!(find_counter(name).unwrap().count(&p).unwrap(), 40, "{name}");
    }
    assert!(find_counter("guess").is_err());
    assert_eq!(counter_registry().len(), 4);
}

use tritower::artin::{ati1, artin_pattern, tkt, Tkt};
use tritower::classify::{babu_soluble_length, detect_state, Family};
use tritower::families::{
    build, resolve_str, GroupDescriptor, Kind, RelativeIdentifier, Resolved, Tree, Unconstructible,
    Variant,
};
use tritower::pq::{p_cover, p_quotient, rank_report, FpPresentation};
use tritower::sigma::{schur_status, SchurClass, SigmaOptions};
use tritower::PcPresentation;

fn k(s: &str) -> Tkt {
    s.parse().unwrap()
}

#[test]
fn mainline_vertices() {
    let root = build(&GroupDescriptor::mainline(Tree::Q, 3, 2)).unwrap();
    let s = root.series_and_sizes();
    assert_eq!((s.log_order, s.class), (5, 3));
    let fork = build(&GroupDescriptor::mainline(Tree::Q, 4, 2)).unwrap();
    let s = fork.series_and_sizes();
    assert_eq!((s.log_order, s.class, s.coclass), (6, 4, 2));
}

#[test]
fn class_one_quotient_is_elementary() {
    let fp = FpPresentation::parse("fp n=2\nx1^9\n[x1,x2,x2]\n").unwrap();
    let g = p_quotient(&fp, 3, 1).unwrap();
    assert_eq!(g.ngens(), 2);
    assert!(g.is_abelian());
}

#[test]
fn cover_quotient_ground_state() {
    let d = GroupDescriptor::cover(0, 0, 5);
    let g = build(&d).unwrap();
    let s = g.series_and_sizes();
    assert_eq!((s.log_order, s.class, s.coclass, s.derived_length), (8, 5, 3, 3));
    let second = g.derived_of(&g.derived_subgroup());
    let m = g.quotient(&second).unwrap();
    assert_eq!(m.ngens(), 7);
    assert!(m.is_consistent());
}

#[test]
fn metabelian_ground_state() {
    let g = build(&GroupDescriptor::metabelian(Tree::Q, 5, Variant::Primary)).unwrap();
    let s = g.series_and_sizes();
    assert_eq!((s.log_order, s.class, s.coclass, s.derived_length), (7, 5, 2, 2));
    assert_eq!(g.derived_subgroup().log_index(), 2);
    let p = artin_pattern(&g, false).unwrap();
    assert!(p.tkt.equivalent(&k("1122")));
    assert_eq!(p.ati.alpha0.to_string(), "221");
    assert!(p.ati.matches("[32,111,21,21]"));
    assert_eq!(g.metabelianization().ngens(), 7);

    let u = build(&GroupDescriptor::metabelian(Tree::U, 5, Variant::Primary)).unwrap();
    assert!(tkt(&u).unwrap().equivalent(&k("1231")));
}

#[test]
fn excited_cover_on_u() {
    let g = build(&GroupDescriptor::cover(1, -1, 7)).unwrap();
    assert_eq!(g.ngens(), 11);
    assert_eq!(g.nilpotency_class(), 7);
    let m = g.metabelianization();
    assert_eq!(m.ngens(), 9);
    assert!(tkt(&m).unwrap().equivalent(&k("2231")));
}

#[test]
fn rank_data() {
    let e = PcPresentation::elementary_abelian(3, 2);
    assert_eq!(p_cover(&e).unwrap().multiplicator.log_order(), 3);
    for tree in [Tree::Q, Tree::U] {
        let fork = build(&GroupDescriptor::mainline(tree, 4, 2)).unwrap();
        assert_eq!(rank_report(&fork).unwrap().nu, 2);
    }
    let m = build(&GroupDescriptor::metabelian(Tree::U, 5, Variant::SecondA)).unwrap();
    assert_eq!(rank_report(&m).unwrap().d2, 3);
    let s = build(&GroupDescriptor::cover(1, 0, 5)).unwrap();
    let st = schur_status(&s, &SigmaOptions::default()).unwrap();
    assert_eq!((st.d1, st.d2, st.class), (2, 2, SchurClass::Schur));
    let st = schur_status(&m, &SigmaOptions::default()).unwrap();
    assert_eq!(st.class, SchurClass::SchurPlusOne);
}

#[test]
fn broken_relation_is_reported() {
    let g = PcPresentation::from_text("pc p=3 n=2\n[g2,g1] = g2\n");
    match g {
        Ok(g) => assert!(!g.consistency_check().is_empty()),
        Err(e) => assert!(!e.to_string().is_empty()),
    }
    let ok = build(&GroupDescriptor::metabelian(Tree::Q, 5, Variant::Primary)).unwrap();
    assert!(ok.consistency_check().is_empty());
}

#[test]
fn identifiers_parse_and_print() {
    for s in ["F", "F(-#1;1-#1;1)^2[-#1;3]", "N(-#2;1-#1;1)^3-#2;2"] {
        let r: RelativeIdentifier = s.parse().unwrap();
        assert_eq!(r.to_string(), s);
        assert_eq!(r.to_string().parse::<RelativeIdentifier>().unwrap(), r);
    }
    let r: RelativeIdentifier = "F(-#1;1-#1;1)^2[-#1;3]".parse().unwrap();
    assert_eq!(r.flatten().len(), 5);
    assert!("F(-#1;1".parse::<RelativeIdentifier>().is_err());
}

#[test]
fn identifiers_resolve() {
    let m = resolve_str("F(-#1;1-#1;1)^0[-#1;2]", Tree::U).unwrap();
    assert_eq!(m, Resolved::Constructible(GroupDescriptor::metabelian(Tree::U, 5, Variant::Primary)));
    let s = resolve_str("F(-#2;1-#1;1)^1[-#2;3]", Tree::U).unwrap();
    assert_eq!(s, Resolved::Constructible(GroupDescriptor::cover(1, -1, 7)));
    let t = resolve_str("F(-#2;1-#1;1)^1(-#1;1-#1;1)^0[-#1;2]", Tree::Q).unwrap();
    assert!(matches!(
        t,
        Resolved::Unconstructible(Unconstructible::ForkSchurPlusOne { n: 1, u: 1, i: 2 })
    ));
    let chain = resolve_str("N(-#2;1-#1;1)^3-#2;2", Tree::Q).unwrap();
    assert!(matches!(chain, Resolved::Unconstructible(Unconstructible::SolubleLengthChain { .. })));
}

#[test]
fn resolved_groups_have_claimed_orders() {
    for (s, tree) in [("F(-#1;1-#1;1)^1[-#1;4]", Tree::U), ("F(-#2;1-#1;1)^0[-#2;2]", Tree::Q)] {
        let Resolved::Constructible(d) = resolve_str(s, tree).unwrap() else {
            panic!("{s} resolves to a group")
        };
        let g = build(&d).unwrap();
        assert_eq!(g.ngens(), d.expected_log_order(), "{s}");
        if let Kind::Metabelian { variant, .. } = d.kind {
            assert_eq!(variant, Variant::SecondB);
        }
    }
}

#[test]
fn states_from_first_order_invariants() {
    for tree in [Tree::Q, Tree::U] {
        for n in 0..=4u32 {
            let g = build(&GroupDescriptor::metabelian(tree, 2 * n + 5, Variant::SecondA)).unwrap();
            let reading = detect_state(&ati1(&g).unwrap().raw);
            assert_eq!(reading.n, Some(n));
            assert_eq!(reading.tree, Some(tree));
            // first-order invariants leave the type family open
            assert_eq!(reading.family, Family::Undetermined);
        }
    }
}

#[test]
fn soluble_length_examples() {
    assert_eq!(babu_soluble_length(2).unwrap(), 3);
    assert_eq!(babu_soluble_length(5).unwrap(), 4);
    assert_eq!(babu_soluble_length(21).unwrap(), 6);
    assert!(babu_soluble_length(0).is_err());
}

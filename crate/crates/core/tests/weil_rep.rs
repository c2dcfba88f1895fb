use dft_core::weil::{check_relations_with_conductor, default_conductor};
use dft_core::{
    build_form, check_lift_equivariance, check_relations, enumerate_symbols, isotropic_subgroups,
    parse_symbol, rho_s_scaled, rho_t, Bounds, Cyclotomic, CyclotomicField, DiscriminantForm,
    Error,
};

fn build(s: &str) -> DiscriminantForm {
    build_form(&parse_symbol(s).unwrap()).unwrap()
}

#[test]
fn rho_t_examples() {
    let f = CyclotomicField::new(8);
    let t = rho_t(&build("2_1^+1"));
    assert_eq!(t, vec![Cyclotomic::one(&f), Cyclotomic::root_of_unity(&f, 2)]);
    assert_eq!(rho_t(&build("1")), vec![Cyclotomic::one(&f)]);
}

#[test]
fn determinant_of_rho_t_is_a_root_of_unity() {
    for s in enumerate_symbols(64, &[2, 3, 5, 7]) {
        let d = build_form(&s).unwrap();
        let t = rho_t(&d);
        let det = t.iter().skip(1).fold(t[0].clone(), |a, x| a * x.clone());
        let m = default_conductor(&d) as u32;
        assert_eq!(det.pow(m), Cyclotomic::one(det.field()), "{s}");
    }
}

#[test]
fn scaled_s_examples() {
    let f = CyclotomicField::new(8);
    let w = rho_s_scaled(&build("2_1^+1")).unwrap();
    let z = Cyclotomic::root_of_unity(&f, -1);
    assert_eq!(w.scale_exp, 1);
    assert_eq!(w.entries, vec![vec![z.clone(), z.clone()], vec![z.clone(), -&z]]);
    let w = rho_s_scaled(&build("1")).unwrap();
    assert_eq!((w.entries.len(), w.scale_exp, w.order), (1, 1, 1));
    assert_eq!(w.entries[0][0], Cyclotomic::one(&f));
}

#[test]
fn unitary_after_folding() {
    let w = rho_s_scaled(&build("3^-1")).unwrap();
    let n = w.entries.len();
    let adj = dft_core::ScaledWeilMatrix {
        entries: (0..n).map(|i| (0..n).map(|j| w.entries[j][i].conj()).collect()).collect(),
        scale_exp: 1,
        order: w.order,
    };
    let id = w.mul(&adj).unwrap().folded().unwrap();
    let f = id[0][0].field().clone();
    for (i, row) in id.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let expected = if i == j { Cyclotomic::one(&f) } else { Cyclotomic::zero(&f) };
            assert_eq!(*x, expected);
        }
    }
    assert!(w.folded().is_none());
}

#[test]
fn relation_examples() {
    let b = Bounds::default();
    for s in ["2_1^+1", "3^-1", "1"] {
        let r = check_relations(&build(s), &b).unwrap();
        assert_eq!(r.checked.len(), 4);
    }
    // W² = |D| e(−sign/4) P with P ≠ I on 3^-1
    let d = build("3^-1");
    assert_ne!(d.neg(1), 1);
    assert!(matches!(
        check_relations(&build("2_II^+8"), &b),
        Err(Error::BoundExceeded { .. })
    ));
}

#[test]
fn relations_hold_on_all_small_forms() {
    let b = Bounds::default();
    for s in enumerate_symbols(64, &[2, 3, 5, 7]) {
        let d = build_form(&s).unwrap();
        check_relations(&d, &b).unwrap_or_else(|e| panic!("{s}: {e}"));
    }
}

#[test]
fn relations_do_not_depend_on_the_conductor() {
    let b = Bounds::default();
    for s in ["3^-1", "2_1^+1.3^+1", "4_3^-1.5^+1"] {
        let d = build(s);
        let m = default_conductor(&d);
        let r1 = check_relations_with_conductor(&d, m, &b).unwrap();
        let r2 = check_relations_with_conductor(&d, 2 * m, &b).unwrap();
        assert_eq!(r1.checked, r2.checked);
        assert_eq!(r2.conductor, 2 * m);
    }
    assert!(matches!(
        check_relations_with_conductor(&build("3^-1"), 12, &b),
        Err(Error::Validity(_))
    ));
}

#[test]
fn lifts_are_equivariant() {
    let b = Bounds::default();
    let d = build("2_II^+2");
    let a = d.element_from_coords(&[1, 0]).unwrap();
    assert!(check_lift_equivariance(&d, &d.span(&[a]), &b).unwrap());

    let d = build("2_II^+2").direct_sum(&build("2_II^+2"));
    let a1 = d.element_from_coords(&[1, 0, 0, 0]).unwrap();
    let a2 = d.element_from_coords(&[0, 0, 1, 0]).unwrap();
    assert!(check_lift_equivariance(&d, &d.span(&[a1, a2]), &b).unwrap());
    assert!(matches!(
        check_lift_equivariance(&d, &d.span(&[]), &b),
        Err(Error::TrivialSubgroup)
    ));

    for s in enumerate_symbols(64, &[2, 3, 5, 7]) {
        let d = build_form(&s).unwrap();
        for h in isotropic_subgroups(&d, &b).unwrap() {
            check_lift_equivariance(&d, &h, &b).unwrap_or_else(|e| panic!("{s}: {e}"));
        }
    }
}

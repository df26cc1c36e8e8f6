use oscillator_core::error::Error;
use oscillator_core::fields::{field_of_order, FqElem};
use oscillator_core::forms::{FormType, SymmetricForm, SymplecticSpace};
use oscillator_core::linalg;
use proptest::prelude::*;

fn gram(q: u64, rows: &[&[i64]]) -> SymmetricForm {
    let f = field_of_order(q).unwrap();
    let g = rows.iter().flat_map(|r| r.iter().map(|&x| f.from_int(x))).collect();
    SymmetricForm::new(f, rows.len(), g).unwrap()
}

fn is_diagonalized(b: &SymmetricForm) -> bool {
    let f = b.field();
    let n = b.dim();
    let (d, p) = b.diagonalize();
    let pt = linalg::transpose(&p, n, n);
    let m = linalg::mat_mul(f, &linalg::mat_mul(f, &pt, b.gram(), n, n, n), &p, n, n, n);
    (0..n).all(|i| (0..n).all(|j| m[i * n + j] == if i == j { d[i] } else { f.zero() }))
}

#[test]
fn witt_indices() {
    assert_eq!(gram(3, &[&[1, 0], &[0, -1]]).witt_index(), 1);
    assert_eq!(gram(3, &[&[1, 0], &[0, 1]]).witt_index(), 0);
    for q in [3, 5, 7, 9] {
        let f = field_of_order(q).unwrap();
        for spec in ["odd:3", "odd:3:ns"] {
            assert_eq!(SymmetricForm::parse(f.clone(), spec).unwrap().witt_index(), 1);
        }
        assert_eq!(SymmetricForm::parse(f.clone(), "minus:4").unwrap().form_type(), FormType::Minus);
        assert_eq!(SymmetricForm::parse(f.clone(), "plus:6").unwrap().witt_index(), 3);
    }
}

#[test]
fn hyperbolic_plane_keeps_its_discriminant() {
    let b = gram(3, &[&[0, 1], &[1, 0]]);
    assert_eq!(b.disc(), -1);
    assert!(is_diagonalized(&b));
}

#[test]
fn reductions() {
    let f = field_of_order(3).unwrap();
    let b = SymmetricForm::parse(f.clone(), "odd:5").unwrap();
    assert_eq!(b.reduce(0).unwrap().gram(), b.gram());
    let r = b.reduce(2).unwrap();
    assert_eq!(r.dim(), 1);
    // removing two hyperbolic planes multiplies the determinant by (−1)² = 1
    assert_eq!(r.disc(), b.disc());
    assert_eq!(SymmetricForm::parse(f.clone(), "plus:4").unwrap().reduce(2).unwrap().dim(), 0);
    assert!(matches!(b.reduce(3), Err(Error::RangeExceeded { .. })));
    let v = SymplecticSpace::new(f, 3);
    assert_eq!(v.reduce(2).unwrap().dim(), 2);
}

#[test]
fn degenerate_forms_are_rejected() {
    let f = field_of_order(5).unwrap();
    let g = [1, 2, 2, 4].iter().map(|&x| f.from_int(x)).collect();
    assert_eq!(SymmetricForm::new(f, 2, g).unwrap_err(), Error::Degenerate);
}

#[test]
fn reflections_are_isometric_involutions() {
    let f = field_of_order(5).unwrap();
    let b = SymmetricForm::parse(f.clone(), "minus:4").unwrap();
    let n = 4;
    for i in 1..625u64 {
        let l = linalg::decode(&f, i, n);
        if b.quad(&l).is_zero() {
            assert_eq!(b.reflection_matrix(&l).unwrap_err(), Error::IsotropicInput);
            continue;
        }
        let r = b.reflection_matrix(&l).unwrap();
        assert_eq!(linalg::mat_mul(&f, &r, &r, n, n, n), linalg::identity(&f, n));
        let img: Vec<FqElem> = b.reflect(&l, &l).unwrap();
        assert_eq!(img, l.iter().map(|&x| f.neg(x)).collect::<Vec<_>>());
    }
}

proptest! {
    #[test]
    fn random_forms_diagonalize(entries in prop::collection::vec(0i64..5, 10)) {
        // upper triangle of a 4×4 symmetric matrix over F_5
        let f = field_of_order(5).unwrap();
        let mut g = vec![f.zero(); 16];
        let mut it = entries.iter();
        for i in 0..4 {
            for j in i..4 {
                let x = f.from_int(*it.next().unwrap());
                g[i * 4 + j] = x;
                g[j * 4 + i] = x;
            }
        }
        match SymmetricForm::new(f, 4, g) {
            Ok(b) => {
                prop_assert!(is_diagonalized(&b));
                prop_assert_eq!(2 * b.witt_index() + b.aniso_dim(), 4);
            }
            Err(e) => prop_assert_eq!(e, Error::Degenerate),
        }
    }
}

//! Known values checked through the public API.

use hermlift::elliptic::{bundled_cm_form, extend_coeffs};
use hermlift::hecke::{descend_op, maass_eigenvalue, HeckeError, HeckeOpId};
use hermlift::lfun::{primes_above_k, verify_factorization};
use hermlift::maass::{a_k, CoeffTable};
use hermlift::quadfield::{inert_primes, split_primes, ClassChar, ClassGroup};
use hermlift::ring::{Elem, Ring};

#[test]
fn cm_form_leading_coefficients() {
    let f = bundled_cm_form();
    let q = extend_coeffs(&f, 11).unwrap();
    let want = [1i64, -3, 0, 5, 0, 0, -7, -3, 9, 0, -6];
    for (n, w) in want.iter().enumerate() {
        assert_eq!(q.get(n + 1), &Elem::from_int(&f.ring, *w), "a({})", n + 1);
    }
}

#[test]
fn cm_form_euler_factors() {
    let f = bundled_cm_form();
    let cg = ClassGroup::new(7).unwrap();
    let chi = ClassChar::trivial(1);
    for p in [2u64, 3, 5, 11, 13] {
        for kp in primes_above_k(&cg, p).unwrap() {
            assert!(verify_factorization(&f, &kp, &chi).unwrap().ok, "p = {p}");
        }
    }
}

#[test]
fn cm_lift_vanishes() {
    // A CM form over Q(sqrt(-7)) equals its own twist, so its lift is zero.
    let f = bundled_cm_form();
    let cg = ClassGroup::new(7).unwrap();
    assert_eq!(
        maass_eigenvalue(&f, &ClassChar::trivial(1), &cg, HeckeOpId::SplitT1(2)),
        Err(HeckeError::DegenerateLift)
    );
}

#[test]
fn small_field_tables() {
    assert_eq!(inert_primes(7, 3), [3, 5, 13]);
    assert_eq!(split_primes(7, 3), [2, 11, 23]);
    assert_eq!(inert_primes(23, 2), [5, 7]);
    assert_eq!(split_primes(23, 2), [2, 3]);
    let a: Vec<u32> = (0..7).map(|n| a_k(7, n)).collect();
    assert_eq!(a, [1, 0, 0, 2, 0, 2, 2]);
}

#[test]
fn class_group_of_23_is_cyclic_of_order_three() {
    let cg = ClassGroup::new(23).unwrap();
    assert_eq!(cg.order(), 3);
    let chars = cg.characters().unwrap();
    assert_eq!(chars.len(), 3);
    assert!(chars.iter().filter(|c| c.order == 3).count() == 2);
    assert!((0..3).any(|i| cg.element_order(i) == 3));
}

#[test]
fn descended_t0_at_three() {
    let op = descend_op(HeckeOpId::InertT0(3), 8);
    assert_eq!(op.degree(), 2);
    let r = Ring::integers();
    // 3^-4 (3^2 + 1) a^2 + 200 at a(3) = 9
    let v = op.eval(&Elem::from_int(&r, 9));
    assert_eq!(v, Elem::from_int(&r, 10 + 200));
}

#[test]
fn table_parse_rejects_garbage() {
    assert!(CoeffTable::parse("").is_err());
    assert!(CoeffTable::parse("hermlift-table v1\nfield x\ndata\n").is_err());
}

//! Frozen values. A change here means the algebra changed, not the test.

use qwh::diffcalc::WzCalculus;
use qwh::linalg::{eigensplit, pair_index, rhat_builtin};
use qwh::presentations::builtin;
use qwh::quantumgroup::{commutation_factor, printed_rd_factors, QuantumGroup, Which};
use qwh::rewrite::RewriteSystem;
use qwh::{NCPoly, Param, Scalar};

fn nf(sys: &RewriteSystem, pres: &qwh::presentations::Presentation, expr: &str) -> String {
    sys.render(&sys.normal_form(&pres.parse_expr(expr).unwrap()))
}

fn at_u2(name: &str) -> qwh::presentations::Presentation {
    builtin(name)
        .unwrap()
        .substitute(&[(Param::Q, Scalar::upow(2))])
        .unwrap()
}

#[test]
fn xspace_normal_forms() {
    let p = at_u2("xspace");
    let sys = p.system().unwrap();
    for (e, want) in [
        ("x1 x2", "u^2*x2*x1 + s*x3*x3"),
        ("x1 x3", "u*x3*x1"),
        ("x2 x3", "u^(-1)*x3*x2"),
        ("x2 x1", "x2*x1"),
        ("x1 x1 x2", "u^4*x2*x1*x1 + 2*u^2*s*x3*x3*x1"),
    ] {
        assert_eq!(nf(&sys, &p, e), want, "{e}");
    }
}

#[test]
fn xispace_normal_forms() {
    let p = builtin("xispace").unwrap();
    let sys = p.system().unwrap();
    for (e, want) in [
        ("xi1 xi1", "0"),
        ("xi3 xi3", "0"),
        ("xi1 xi2", "-u^2*xi2*xi1"),
        ("xi1 xi3", "-u*xi3*xi1"),
        ("xi2 xi3", "-u^(-1)*xi3*xi2"),
    ] {
        assert_eq!(nf(&sys, &p, e), want, "{e}");
    }
}

#[test]
fn tt7_binomial_relations() {
    let p = builtin("TT7").unwrap();
    let sys = p.system().unwrap();
    let table = [
        ("T11", "T12", -2),
        ("T11", "T13", -1),
        ("T11", "T22", 0),
        ("T11", "T21", 2),
        ("T11", "T23", 1),
        ("T11", "T33", 0),
        ("T12", "T13", 1),
        ("T12", "T22", 2),
        ("T12", "T21", 4),
        ("T12", "T23", 3),
        ("T12", "T33", 2),
        ("T13", "T22", 1),
        ("T13", "T21", 3),
        ("T13", "T33", 1),
        ("T22", "T21", 2),
        ("T22", "T23", 1),
        ("T22", "T33", 0),
        ("T21", "T23", -1),
        ("T21", "T33", -2),
        ("T23", "T33", -1),
    ];
    for (a, b, e) in table {
        let lhs = sys.normal_form(&p.parse_expr(&format!("{a} {b}")).unwrap());
        let rhs = sys.normal_form(&p.parse_expr(&format!("{b} {a}")).unwrap()).scale(&Scalar::upow(e));
        assert_eq!(lhs, rhs, "{a} {b} = u^{e} {b} {a}");
    }
}

#[test]
fn tt7_inhomogeneous_relation() {
    let p = builtin("TT7").unwrap();
    let sys = p.system().unwrap();
    let r = p
        .parse_expr("T13 T23 - u^2 T23 T13 + s (T11 T22 - u^2 T21 T12 - T33 T33)")
        .unwrap();
    assert!(sys.normal_form(&r).is_zero());
}

#[test]
fn h8_determinant_factors() {
    let h8 = QuantumGroup::new(Which::H8).unwrap();
    let dinv = NCPoly::gen(h8.table.id("Dinv"));
    for (name, e) in [("T11", 0), ("T12", 6), ("T13", 3), ("T22", 0), ("T21", -6), ("T23", -3), ("T33", 0)] {
        let g = NCPoly::gen(h8.table.id(name));
        assert_eq!(commutation_factor(&h8.system, &dinv, &g), Some(Scalar::upow(e)), "{name}");
    }
}

#[test]
fn h10_determinant_factors() {
    let h10 = QuantumGroup::new(Which::H10).unwrap();
    let dinv = NCPoly::gen(h10.table.id("dinv"));
    for (name, e) in [
        ("t11", 0),
        ("t12", -6),
        ("t13", -3),
        ("t21", 6),
        ("t22", 0),
        ("t23", 3),
        ("t31", 3),
        ("t32", -3),
        ("t33", 0),
    ] {
        let g = NCPoly::gen(h10.table.id(name));
        assert_eq!(commutation_factor(&h10.system, &g, &dinv), Some(Scalar::upow(e)), "{name}");
    }
}

#[test]
fn printed_rd_table() {
    let t = printed_rd_factors();
    assert_eq!(t.len(), 9);
    assert_eq!(t[&(2, 1)], Scalar::upow(4));
    assert_eq!(t[&(2, 3)], Scalar::upow(-3));
    assert_eq!(t[&(3, 1)], Scalar::upow(3));
}

#[test]
fn rhat_entries() {
    let r = rhat_builtin();
    assert_eq!(r.nonzero_entries().len(), 11);
    assert_eq!(r.get(pair_index(1, 2), pair_index(2, 1)), &Scalar::upow(2));
    assert_eq!(r.get(pair_index(1, 2), pair_index(3, 3)), &Scalar::s());
    assert_eq!(
        r.get(pair_index(2, 1), pair_index(3, 3)),
        &Scalar::parse("-s u^(-2)").unwrap()
    );
    let e = eigensplit(&r).unwrap();
    assert_eq!((e.plus.len(), e.minus.len()), (6, 3));
}

#[test]
fn derivatives() {
    let calc = WzCalculus::new(&rhat_builtin()).unwrap();
    for (i, e, want) in [
        (1, "x1", "1"),
        (2, "x1", "0"),
        (1, "x1 x2", "x2"),
        (2, "x1 x2", "u^2*x1"),
        (3, "x1 x2", "s*x3"),
        (1, "x2 x1", "u^(-2)*x2"),
        (1, "x1 x1", "2*x1"),
        (3, "x3 x3", "2*x3"),
        (1, "x3 x1 x1", "2*u^(-1)*x3*x1"),
    ] {
        let p = calc.system.normal_form(&calc.parse(e).unwrap());
        assert_eq!(calc.render(&calc.apply_derivative(i, &p)), want, "d{i}({e})");
    }
}

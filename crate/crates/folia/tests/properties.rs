//! Property suites for the spec-level invariants: exact-field laws, the
//! eigenvalue-ratio classifier, factorization round-trips, coordinate-change
//! invariance of the local invariants, and reduction fixpoints.

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use folia::factor::{extend_field, factor_univariate};
use folia::field::{FieldDescriptor, FieldElem};
use folia::localclass::classify_tree;
use folia::milnor::{milnor_number, Milnor};
use folia::poly1::Poly1;
use folia::poly2::{ratio_class, OneForm, Poly2, RatioClass, RatioSign};
use folia::rat::{int, rat};
use folia::reduction::{reduce, Config, PointStatus};

fn q() -> Arc<FieldDescriptor> {
    FieldDescriptor::rationals()
}

fn small_rat() -> impl Strategy<Value = num_rational::BigRational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn sqrt2_field() -> Arc<FieldDescriptor> {
    let f = q();
    let minpoly = Poly1::from_coeffs(
        &f,
        vec![
            FieldElem::from_int(&f, -2),
            FieldElem::zero(&f),
            FieldElem::one(&f),
        ],
    );
    extend_field(&f, "r", &minpoly).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_arithmetic_laws(
        a0 in small_rat(), a1 in small_rat(),
        b0 in small_rat(), b1 in small_rat(),
        c0 in small_rat(), c1 in small_rat(),
    ) {
        let k = sqrt2_field();
        let gen = FieldElem::generator(&k, 0);
        let mk = |x: num_rational::BigRational, y: num_rational::BigRational| {
            FieldElem::from_rational(&k, x).add(&gen.mul_rat(&y))
        };
        let a = mk(a0.clone(), a1);
        let b = mk(b0, b1);
        let c = mk(c0.clone(), c1);
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
        // embedding respects + and ×
        let e0 = FieldElem::from_rational(&q(), a0.clone());
        let f0 = FieldElem::from_rational(&q(), c0.clone());
        prop_assert_eq!(
            e0.add(&f0).embed(&k),
            e0.embed(&k).add(&f0.embed(&k))
        );
        prop_assert_eq!(
            e0.mul(&f0).embed(&k),
            e0.embed(&k).mul(&f0.embed(&k))
        );
    }

    #[test]
    fn ratio_class_soundness(l1 in -9i64..=9, l2 in -9i64..=9, d1 in 1i64..=4, d2 in 1i64..=4) {
        prop_assume!(l1 != 0 && l2 != 0);
        let e1 = rat(l1, d1);
        let e2 = rat(l2, d2);
        let f = q();
        let trace = FieldElem::from_rational(&f, &e1 + &e2);
        let det = FieldElem::from_rational(&f, &e1 * &e2);
        match ratio_class(&trace, &det) {
            RatioClass::RationalRatio { p, q: qq, sign, .. } => {
                let r = num_rational::BigRational::new(p, qq);
                let r12 = &e2 / &e1;
                let r21 = &e1 / &e2;
                prop_assert!(r == r12 || r == r21, "{} vs {}/{}", r, r12, r21);
                let expect_sign = if (l1 > 0) == (l2 > 0) {
                    RatioSign::Positive
                } else {
                    RatioSign::Negative
                };
                prop_assert_eq!(sign, expect_sign);
            }
            other => prop_assert!(false, "expected rational ratio, got {:?}", other),
        }
    }

    #[test]
    fn ratio_class_rationality_rule(t in -9i64..=9, d in -9i64..=9) {
        prop_assume!(d != 0);
        let f = q();
        let trace = FieldElem::from_int(&f, t);
        let det = FieldElem::from_int(&f, d);
        let s = rat(t * t, d);
        match ratio_class(&trace, &det) {
            RatioClass::RationalRatio { witness, .. } => {
                let disc = &s * (&s - int(4));
                prop_assert!(folia::rat::perfect_square(&disc).is_some());
                prop_assert_eq!(witness, s);
            }
            RatioClass::IrrationalOrComplexRatio { witness } => {
                prop_assert_eq!(witness, Some(s.clone()));
                let disc = &s * (&s - int(4));
                prop_assert!(folia::rat::perfect_square(&disc).is_none());
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn factor_product_reproduces_input(coeffs in prop::collection::vec(-6i64..=6, 2..=7)) {
        prop_assume!(*coeffs.last().unwrap() != 0);
        let f = q();
        let p = Poly1::from_coeffs(
            &f,
            coeffs.iter().map(|&c| FieldElem::from_int(&f, c)).collect(),
        );
        prop_assume!(!p.is_zero() && p.degree() >= 1);
        let factors = factor_univariate(&p);
        let mut prod = Poly1::constant(p.lead().clone());
        for (g, m) in &factors {
            prop_assert!(g.lead().is_one());
            for _ in 0..*m {
                prod = prod.mul(g);
            }
        }
        prop_assert_eq!(prod, p);
    }
}

// ---------------------------------------------------------------------------
// coordinate-change invariance
// ---------------------------------------------------------------------------

fn mono(c: i64, i: u32, j: u32) -> Poly2 {
    Poly2::monomial(&q(), FieldElem::from_int(&q(), c), i, j)
}

fn linear_change(form: &OneForm, m: [[i64; 2]; 2]) -> OneForm {
    let f = Arc::clone(form.field());
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    assert!(det != 0);
    let x_img = {
        let mut t = Poly2::monomial(&f, FieldElem::from_int(&f, m[0][0]), 1, 0);
        t.add_term(0, 1, FieldElem::from_int(&f, m[0][1]));
        t
    };
    let y_img = {
        let mut t = Poly2::monomial(&f, FieldElem::from_int(&f, m[1][0]), 1, 0);
        t.add_term(0, 1, FieldElem::from_int(&f, m[1][1]));
        t
    };
    let a_sub = form.a.subst(&x_img, &y_img);
    let b_sub = form.b.subst(&x_img, &y_img);
    let new_a = a_sub
        .scale(&FieldElem::from_int(&f, m[0][0]))
        .add(&b_sub.scale(&FieldElem::from_int(&f, m[1][0])));
    let new_b = a_sub
        .scale(&FieldElem::from_int(&f, m[0][1]))
        .add(&b_sub.scale(&FieldElem::from_int(&f, m[1][1])));
    OneForm::new(new_a, new_b)
}

fn unimodular_matrices(n: usize) -> Vec<[[i64; 2]; 2]> {
    // deterministic enumeration of small invertible integer matrices
    let mut out = Vec::new();
    'outer: for a in -3i64..=3 {
        for b in -3i64..=3 {
            for c in -3i64..=3 {
                for d in -3i64..=3 {
                    if a * d - b * c != 0 {
                        out.push([[a, b], [c, d]]);
                        if out.len() == n {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn milnor_invariant_under_linear_changes() {
    let corpus = vec![
        OneForm::new(mono(-3, 2, 0), mono(2, 0, 1)),       // cusp differential
        OneForm::new(mono(1, 0, 1), mono(1, 1, 0)),        // d(xy)
        OneForm::new(mono(1, 0, 2), mono(-1, 1, 0)),       // saddle-node
        OneForm::new(mono(-5, 4, 0), mono(2, 0, 1)),       // d(y²−x⁵)
    ];
    for form in &corpus {
        let base = milnor_number(&form.a, &form.b, 256);
        for m in unimodular_matrices(100) {
            let changed = linear_change(form, m);
            assert_eq!(milnor_number(&changed.a, &changed.b, 256), base);
        }
    }
}

#[test]
fn delta_hat_invariant_under_linear_changes() {
    // δ̂ only sees the ν-multiset of the tree, which is a coordinate
    // invariant; check directly on a ν₀ = 3 example.
    let a = mono(-4, 1, 1);
    let b = mono(3, 0, 2).add(&mono(-2, 2, 0));
    let form = OneForm::new(a, b);
    let cfg = Config::default();
    let base = folia::invariants::delta_hat(&reduce(&form, &cfg).unwrap());
    for m in unimodular_matrices(25) {
        let changed = linear_change(&form, m);
        let tree = reduce(&changed, &cfg).unwrap();
        assert_eq!(folia::invariants::delta_hat(&tree), base);
    }
}

#[test]
fn classification_invariant_under_linear_changes() {
    // a resonant saddle keeps its kind and resonance under conjugation
    let form = OneForm::new(mono(3, 0, 1), mono(2, 1, 0)); // 3y dx + 2x dy
    let cfg = Config::default();
    let rec = folia::localclass::classify_reduced(&form, &[], &cfg).unwrap();
    let folia::localclass::Kind::ResonantProbed { p, q, .. } = rec.kind else {
        panic!("expected resonant kind");
    };
    for m in unimodular_matrices(40) {
        let changed = linear_change(&form, m);
        let rec2 = folia::localclass::classify_reduced(&changed, &[], &cfg).unwrap();
        match rec2.kind {
            folia::localclass::Kind::ResonantProbed { p: p2, q: q2, .. } => {
                assert_eq!((p, q), (p2, q2));
            }
            other => panic!("kind changed to {:?}", other),
        }
    }
}

#[test]
fn reduced_fixpoint() {
    // every cime local form of a completed tree reduces in zero steps
    let cfg = Config::default();
    let forms = vec![
        OneForm::new(mono(-3, 2, 0), mono(2, 0, 1)),
        OneForm::new(mono(-5, 4, 0), mono(2, 0, 1)),
    ];
    for form in forms {
        let tree = reduce(&form, &cfg).unwrap();
        for p in tree.cime_points() {
            let sub = reduce(&p.form, &cfg).unwrap();
            assert_eq!(sub.height, 0, "cime point {} not a fixpoint", p.id);
        }
    }
}

#[test]
fn orbit_consistency_after_splitting() {
    // d(y³ − 2x²y) has an orbit of size 2 over Q(√2); embedding the form
    // into Q(√2) splits it into two rational points with identical data.
    let a = mono(-4, 1, 1);
    let b = mono(3, 0, 2).add(&mono(-2, 2, 0));
    let form = OneForm::new(a, b);
    let cfg = Config::default();
    let mut base_tree = reduce(&form, &cfg).unwrap();
    classify_tree(&mut base_tree, &cfg).unwrap();
    let rep = base_tree
        .cime_points()
        .find(|p| p.orbit == 2)
        .expect("orbit representative");
    let rep_kind = base_tree.classifications[&rep.id].kind.clone();

    let k = sqrt2_field();
    let mut split_tree = reduce(&form.embed(&k), &cfg).unwrap();
    classify_tree(&mut split_tree, &cfg).unwrap();
    assert_eq!(split_tree.height, base_tree.height);
    let cime: Vec<_> = split_tree.cime_points().collect();
    assert_eq!(cime.len(), 3);
    assert!(cime.iter().all(|p| p.orbit == 1));
    let mut matching = 0;
    for p in &cime {
        if split_tree.classifications[&p.id].kind == rep_kind {
            matching += 1;
        }
    }
    assert!(matching >= 2, "split points must repeat the orbit data");
}

#[test]
fn pre_reduce_is_prefix() {
    let cfg = Config::default();
    let forms = vec![
        OneForm::new(mono(-3, 2, 0), mono(2, 0, 1)),
        OneForm::new(mono(-5, 4, 0), mono(2, 0, 1)),
        OneForm::new(mono(1, 0, 2), mono(-1, 1, 0)),
    ];
    for form in forms {
        let pre = folia::reduction::pre_reduce(&form, &cfg).unwrap();
        let full = reduce(&form, &cfg).unwrap();
        assert!(pre.height <= full.height);
        let full_paths: std::collections::BTreeMap<&str, (u32, usize)> = full
            .points
            .iter()
            .map(|p| (p.path.as_str(), (p.nu, p.orbit)))
            .collect();
        for p in &pre.points {
            let Some(&(nu, orbit)) = full_paths.get(p.path.as_str()) else {
                panic!("pre-reduction point {} missing from the full tree", p.path);
            };
            assert_eq!((p.nu, p.orbit), (nu, orbit), "data differs at {}", p.path);
        }
    }
}

#[test]
fn self_intersection_bookkeeping() {
    let cfg = Config::default();
    let form = OneForm::new(mono(-5, 4, 0), mono(2, 0, 1)); // d(y² − x⁵)
    let tree = reduce(&form, &cfg).unwrap();
    for comp in &tree.comps {
        // e(D) = −1 − (orbit-weighted count of blown points on D)
        let blown_on: i64 = tree
            .points
            .iter()
            .filter(|p| {
                p.status == PointStatus::Blown
                    && p.branches.iter().any(|&(c, _)| c == comp.id)
            })
            .map(|p| (p.orbit / comp.orbit) as i64)
            .sum();
        assert_eq!(comp.self_int, -1 - blown_on);
    }
}

#[test]
fn trager_example_against_norms() {
    // x² + 1 splits over Q(i) but not over Q(√2)
    let f = q();
    let xx = Poly1::from_coeffs(
        &f,
        vec![
            FieldElem::one(&f),
            FieldElem::zero(&f),
            FieldElem::one(&f),
        ],
    );
    let k2 = sqrt2_field();
    let over_k2 = factor_univariate(&xx.embed(&k2));
    assert_eq!(over_k2.len(), 1);
    let i_min = Poly1::from_coeffs(
        &f,
        vec![
            FieldElem::one(&f),
            FieldElem::zero(&f),
            FieldElem::one(&f),
        ],
    );
    let ki = extend_field(&f, "i", &i_min).unwrap();
    let over_ki = factor_univariate(&xx.embed(&ki));
    assert_eq!(over_ki.len(), 2);
    let _ = BigInt::from(1);
}

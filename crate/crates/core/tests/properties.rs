use isolink::check::sampling::admissible;
use isolink::isometry::{
    isometry_from_bivector, minimal_poly_residual, presentation_action, reflection, stabilizer_element,
};
use isolink::kinematics::{boost, gamma, Observer, Velocity3};
use isolink::linker::{link_generator, p_link, planar_link, reciprocal_link_generator, LinkProblem};
use isolink::{Endomorphism, MetricSpace, SimpleBivector, Vector};
use proptest::prelude::*;

fn space(n: usize, family: usize) -> MetricSpace {
    match family {
        0 => MetricSpace::euclidean(n),
        1 => MetricSpace::minkowski(n),
        _ => MetricSpace::signature_pq(2, n - 2),
    }
    .unwrap()
}

fn dot(s: &MetricSpace, a: &Vector, b: &Vector) -> f64 {
    s.scalar_product(a, b).unwrap()
}

/// Scales `P ∧ Q` so that `|(P∧Q)²| ≤ 0.8`.
fn admissible_bivector(s: &MetricSpace, p: Vec<f64>, q: Vec<f64>) -> SimpleBivector {
    let b = SimpleBivector::new(Vector::new(p), Vector::new(q)).unwrap();
    let b2 = s.bivector_product(&b, &b).unwrap().abs();
    if b2 > 0.8 {
        b.scaled((0.8 / b2).sqrt())
    } else {
        b
    }
}

fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, n)
}

/// `(dim, family, k vectors)`.
fn setting(k: usize) -> impl Strategy<Value = (usize, usize, Vec<Vec<f64>>)> {
    (2usize..=6, 0usize..3).prop_flat_map(move |(n, f)| (Just(n), Just(f), prop::collection::vec(coords(n), k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn scalar_product_is_exactly_symmetric((n, f, v) in setting(2)) {
        let s = space(n, f);
        let (a, b) = (Vector::new(v[0].clone()), Vector::new(v[1].clone()));
        prop_assert_eq!(dot(&s, &a, &b), dot(&s, &b, &a));
    }

    #[test]
    fn bivector_square_is_presentation_invariant(
        (n, f, v) in setting(2),
        a in 0.5..1.5f64, b in -1.0..1.0f64, c in -1.0..1.0f64,
    ) {
        let s = space(n, f);
        let biv = SimpleBivector::new(Vector::new(v[0].clone()), Vector::new(v[1].clone())).unwrap();
        let other = s.represent_sl2(&biv, a, b, c, (1.0 + b * c) / a).unwrap();
        let x = s.bivector_product(&biv, &biv).unwrap();
        let y = s.bivector_product(&other, &other).unwrap();
        prop_assert!((x - y).abs() <= 1e-8 * x.abs().max(1.0));
    }

    #[test]
    fn lie_map_is_skew_and_idempotent_is_idempotent((n, f, v) in setting(2)) {
        let s = space(n, f);
        let biv = SimpleBivector::new(Vector::new(v[0].clone()), Vector::new(v[1].clone())).unwrap();
        prop_assert!(s.skew_defect(&s.lie_map(&biv).unwrap()) <= 1e-12);
        let p = Vector::new(v[0].clone());
        prop_assume!(dot(&s, &p, &p).abs() > 0.05);
        let idem = s.idempotent_of(&p).unwrap();
        prop_assert!(idem.compose(&idem).distance(&idem) <= 1e-12 * idem.max_abs().max(1.0).powi(2));
    }

    #[test]
    fn isometry_preserves_scalar_products((n, f, v) in setting(4)) {
        let s = space(n, f);
        let l = isometry_from_bivector(&s, &admissible_bivector(&s, v[0].clone(), v[1].clone())).unwrap();
        let (a, b) = (Vector::new(v[2].clone()), Vector::new(v[3].clone()));
        let ab = dot(&s, &a, &b);
        let lab = dot(&s, &l.apply(&a), &l.apply(&b));
        prop_assert!((lab - ab).abs() <= 1e-9 * (1.0 + ab.abs()));
    }

    #[test]
    fn reversed_bivector_inverts((n, f, v) in setting(2)) {
        let s = space(n, f);
        let b = admissible_bivector(&s, v[0].clone(), v[1].clone());
        let l = isometry_from_bivector(&s, &b).unwrap();
        let inv = isometry_from_bivector(&s, &b.reversed()).unwrap();
        prop_assert!(l.compose(&inv).distance(&Endomorphism::identity(n)) <= 1e-8);
    }

    #[test]
    fn isometry_ignores_presentation(
        (n, f, v) in setting(2),
        a in 0.5..1.5f64, b in -1.0..1.0f64, c in -1.0..1.0f64,
    ) {
        let s = space(n, f);
        let biv = admissible_bivector(&s, v[0].clone(), v[1].clone());
        let other = s.represent_sl2(&biv, a, b, c, (1.0 + b * c) / a).unwrap();
        let l1 = isometry_from_bivector(&s, &biv).unwrap();
        let l2 = isometry_from_bivector(&s, &other).unwrap();
        prop_assert!(l1.distance(&l2) <= 1e-8);
    }

    #[test]
    fn action_on_presentation_pair((n, f, v) in setting(2)) {
        let s = space(n, f);
        let b = admissible_bivector(&s, v[0].clone(), v[1].clone());
        let l = isometry_from_bivector(&s, &b).unwrap();
        let (lp, lq) = presentation_action(&s, &b).unwrap();
        prop_assert!(l.apply(b.first()).distance(&lp) <= 1e-12);
        prop_assert!(l.apply(b.second()).distance(&lq) <= 1e-12);
    }

    #[test]
    fn corrected_cubic_annihilates((n, f, v) in setting(2)) {
        let s = space(n, f);
        let l = isometry_from_bivector(&s, &admissible_bivector(&s, v[0].clone(), v[1].clone())).unwrap();
        prop_assert!(minimal_poly_residual(&l).unwrap() <= 1e-9 * l.map().max_abs().max(1.0).powi(3));
    }

    #[test]
    fn reflection_links_isomagnitude_pair((n, f, v) in setting(3)) {
        let s = space(n, f);
        let r = Vector::new(v[0].clone());
        let l = isometry_from_bivector(&s, &admissible_bivector(&s, v[1].clone(), v[2].clone())).unwrap();
        let target = l.apply(&r);
        let d = &r - &target;
        prop_assume!(dot(&s, &d, &d).abs() > 1e-2);
        let refl = reflection(&s, &d).unwrap();
        prop_assert!(refl.apply(&r).distance(&target) <= 1e-9 * target.max_abs().max(1.0));
    }

    #[test]
    fn link_maps_initial_to_target((n, f, v) in setting(4)) {
        let s = space(n, f);
        let r = Vector::new(v[0].clone());
        prop_assume!(dot(&s, &r, &r).abs() > 0.1);
        let target = isometry_from_bivector(&s, &admissible_bivector(&s, v[1].clone(), v[2].clone())).unwrap().apply(&r);
        let problem = admissible(&s, r.clone(), target.clone(), Vector::new(v[3].clone()));
        prop_assume!(problem.is_some());
        let problem = problem.unwrap();
        let l = p_link(&s, &problem).unwrap();
        prop_assert!(l.apply(&r).distance(&target) <= 1e-9 * target.max_abs().max(1.0));
        let same = LinkProblem::new(&s, r.clone(), r, problem.preferred().cloned()).unwrap();
        let fixed = p_link(&s, &same).unwrap();
        prop_assert!(fixed.map().distance(&Endomorphism::identity(n)) <= 1e-12);
    }

    #[test]
    fn generator_forms_agree_and_differ_from_planar((n, f, v) in setting(4)) {
        let s = space(n, f);
        let r = Vector::new(v[0].clone());
        prop_assume!(dot(&s, &r, &r).abs() > 0.1);
        let target = isometry_from_bivector(&s, &admissible_bivector(&s, v[1].clone(), v[2].clone())).unwrap().apply(&r);
        let problem = admissible(&s, r.clone(), target.clone(), Vector::new(v[3].clone()));
        prop_assume!(problem.is_some());
        let problem = problem.unwrap();
        let generator = link_generator(&s, &problem).unwrap();
        prop_assume!(dot(&s, &(&r - &target), &(&r - &target)).abs() > 1e-2);
        let reciprocal = reciprocal_link_generator(&s, &problem).unwrap();
        prop_assert!(s.same_bivector(&generator, &reciprocal));

        let p = problem.preferred().unwrap();
        let scale = p.max_abs().max(r.max_abs()).max(target.max_abs());
        prop_assume!(s.trivector_max(p, &r, &target) > 1e-2 * scale.powi(3));
        let s2 = dot(&s, &target, &target);
        let sr = SimpleBivector::new(target.clone(), r.clone()).unwrap();
        let planar_mag = s.bivector_product(&sr, &sr).unwrap() / (s2 * s2);
        let link_mag = s.bivector_product(&generator, &generator).unwrap();
        prop_assert!((planar_mag - link_mag).abs() > 1e-9 * planar_mag.abs().max(link_mag.abs()).max(1.0));
        let planar = planar_link(&s, &r, &target);
        if let Ok(planar) = planar {
            prop_assert!(p_link(&s, &problem).unwrap().distance(&planar) > 1e-9);
        }
    }

    #[test]
    fn dressed_link_still_links(v in prop::collection::vec(coords(4), 7)) {
        let s = MetricSpace::minkowski(4).unwrap();
        let r = Vector::new(v[0].clone());
        prop_assume!(dot(&s, &r, &r).abs() > 0.1);
        let target = isometry_from_bivector(&s, &admissible_bivector(&s, v[1].clone(), v[2].clone())).unwrap().apply(&r);
        let problem = admissible(&s, r.clone(), target.clone(), Vector::new(v[3].clone()));
        prop_assume!(problem.is_some());
        let l = p_link(&s, &problem.unwrap()).unwrap();
        let orth = |x: &Vector, fixed: &Vector| x - &(fixed * (dot(&s, fixed, x) / dot(&s, fixed, fixed)));
        let stab = |fixed: &Vector, a: &Vec<f64>, b: &Vec<f64>| {
            let biv = SimpleBivector::new(orth(&Vector::new(a.clone()), fixed), orth(&Vector::new(b.clone()), fixed)).unwrap();
            let b2 = s.bivector_product(&biv, &biv).unwrap().abs();
            let biv = if b2 > 0.8 { biv.scaled((0.8 / b2).sqrt()) } else { biv };
            stabilizer_element(&s, fixed, &biv)
        };
        let (Ok(rr), Ok(ss)) = (stab(&r, &v[4], &v[5]), stab(&target, &v[5], &v[6])) else {
            return Err(TestCaseError::reject("orthogonal projection left the tolerance band"));
        };
        let dressed = ss.map().compose(l.map()).compose(rr.map());
        prop_assert!(dressed.apply(&r).distance(&target) <= 1e-9 * target.max_abs().max(1.0));
        prop_assert!(s.isometry_defect(&dressed) <= 1e-9);
    }

    #[test]
    fn contraction_identity(v in coords(3), u in coords(3), beta in 0.0..0.95f64, c in 0.5..20.0f64) {
        let s = MetricSpace::minkowski(4).unwrap();
        let rest = Observer::at_rest(&s).unwrap();
        let spatial = |x: &Vec<f64>| Vector::from_slice(&[0.0, x[0], x[1], x[2]]);
        let dir = spatial(&v);
        let norm = dot(&s, &dir, &dir).sqrt();
        prop_assume!(norm > 1e-2);
        let vel = Velocity3::new(&s, &rest, dir * (beta * c / norm), c).unwrap();
        let g = gamma(&vel).unwrap();
        let (vv, uu) = (vel.vector(), spatial(&u));
        let lhs = vv * dot(&s, vv, &uu);
        let biv = SimpleBivector::new(uu.clone(), vv.clone()).unwrap();
        let rhs = &s.contract(vv, &biv).unwrap() + &(&uu * (c * c * (1.0 - 1.0 / (g * g))));
        prop_assert!(lhs.distance(&rhs) <= 1e-9 * c * c);
    }

    #[test]
    fn boost_inverse_is_negated_velocity(w in coords(3), v in coords(3), beta in 0.0..0.95f64) {
        let s = MetricSpace::minkowski(4).unwrap();
        let rest = Observer::at_rest(&s).unwrap();
        let spatial = |x: &Vec<f64>| Vector::from_slice(&[0.0, x[0], x[1], x[2]]);
        let p = boost(&s, &Velocity3::new(&s, &rest, spatial(&w) * 0.5, 1.0).unwrap()).unwrap().apply(rest.vector());
        let p = Observer::new(&s, p).unwrap();
        let dir = p.spatial(&s, &spatial(&v));
        let norm = dot(&s, &dir, &dir).sqrt();
        prop_assume!(norm > 1e-2);
        let vel = Velocity3::new(&s, &p, dir * (beta / norm), 1.0).unwrap();
        let l = boost(&s, &vel).unwrap();
        let back = boost(&s, &vel.negated()).unwrap();
        prop_assert!(l.compose(&back).distance(&Endomorphism::identity(4)) <= 1e-8);
    }
}

#[test]
fn every_observer_of_a_velocity_boosts_correctly() {
    // observers orthogonal to v = 0.6 e1 form the hyperboloid in the e0,e2,e3 space
    let s = MetricSpace::minkowski(4).unwrap();
    let v = Vector::from_slice(&[0.0, 0.6, 0.0, 0.0]);
    for i in -5..=5 {
        for j in -5..=5 {
            let (a, b) = (0.3 * i as f64, 0.3 * j as f64);
            let t = (1.0 + a * a + b * b).sqrt();
            let p = Observer::new(&s, Vector::from_slice(&[t, 0.0, a, b])).unwrap();
            let vel = Velocity3::new(&s, &p, v.clone(), 1.0).unwrap();
            let l = boost(&s, &vel).unwrap();
            let expect = (p.vector() + &v) * gamma(&vel).unwrap();
            assert!(l.apply(p.vector()).distance(&expect) < 1e-12);
        }
    }
}

#[test]
fn results_do_not_depend_on_the_basis() {
    // congruence by a shear A: g' = AᵀgA, components v' = A⁻¹v
    let s = MetricSpace::minkowski(4).unwrap();
    let t = 0.7;
    let a = Endomorphism::from_row_slice(4, &[1.0, t, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    let a_inv = Endomorphism::from_row_slice(4, &[1.0, -t, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    let s2 = MetricSpace::from_rows(4, &s.pullback(&a).to_rows().concat(), s.tolerance()).unwrap();
    let r = Vector::from_slice(&[1.0, 0.0, 0.0, 0.0]);
    let target = Vector::from_slice(&[1.25, 0.75, 0.0, 0.0]);
    let p = Vector::from_slice(&[1.25, 0.0, 0.75, 0.0]);
    let l = p_link(&s, &LinkProblem::new(&s, r.clone(), target.clone(), Some(p.clone())).unwrap()).unwrap();
    let moved = |x: &Vector| a_inv.apply(x);
    let l2 = p_link(&s2, &LinkProblem::new(&s2, moved(&r), moved(&target), Some(moved(&p))).unwrap()).unwrap();
    let expect = a_inv.compose(l.map()).compose(&a);
    assert!(l2.map().distance(&expect) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn groupoid_laws_hold_exactly(seed in any::<u64>(), c in 0.5..20.0f64) {
        use isolink::check::sampling::observer;
        use isolink::{Groupoid, ObserverObject};
        use rand::SeedableRng;
        let s = MetricSpace::minkowski(4).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let objects: Vec<ObserverObject> = ["p", "q", "r"]
            .iter()
            .map(|l| ObserverObject::new(observer(&mut rng, &s).unwrap(), *l))
            .collect();
        let g = Groupoid::new(s.clone(), c).unwrap();
        let (p, q, r) = (&objects[0], &objects[1], &objects[2]);
        let pq = g.hom(p, q).unwrap();
        let qr = g.hom(q, r).unwrap();
        let (pr, chain) = (g.hom(p, r).unwrap(), g.compose(&qr, &pq).unwrap());
        prop_assert_eq!(chain.velocity(), pr.velocity());
        let (left, right) = (g.compose(&pq, &g.identity(p)).unwrap(), g.compose(&g.identity(q), &pq).unwrap());
        prop_assert_eq!(left.velocity(), pq.velocity());
        prop_assert_eq!(right.velocity(), pq.velocity());
        prop_assert!(g.spatial_norm(pq.velocity()) < c);
        prop_assert!(g.compose(&pq, &qr).is_err());
    }
}

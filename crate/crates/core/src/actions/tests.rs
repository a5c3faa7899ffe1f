use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;
use crate::jetcalc::{compare_fields, jet_of_poly, restrict, JetField, PointCloud};
use crate::matrix::Matrix;
use crate::multiindex::MultiIndex;
use crate::pullback::{plan, pullback_multi};
use crate::random;
use crate::scalar::{rational, Rational};
use crate::symbolic::{PolyMap, Polynomial};

type Q = Rational;

fn r(n: i64) -> Q {
    rational(n, 1)
}

fn cloud(points: &[&[i64]]) -> PointCloud<Q> {
    let dim = points[0].len();
    PointCloud::new(dim, points.iter().map(|p| p.iter().map(|&v| r(v)).collect()).collect()).unwrap()
}

fn x(n: usize, i: usize) -> Polynomial<Q> {
    Polynomial::var(n, i)
}

fn sign_group() -> FiniteGroup<Q> {
    group_closure(&standard::sign(1), 0.0, 10).unwrap()
}

fn z4() -> FiniteGroup<Q> {
    group_closure(&standard::quarter_turn(), 0.0, 10).unwrap()
}

fn table(f: &JetField<Q>, p: usize) -> Vec<Q> {
    f.table(p).to_vec()
}

fn ints(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&k| r(k)).collect()
}

#[test]
fn closure_examples() {
    assert_eq!(z4().order(), 4);
    assert_eq!(sign_group().order(), 2);
    let (c, s) = (1f64.cos(), 1f64.sin());
    let rot = OrthogonalElement::new(Matrix::from_rows(vec![vec![c, -s], vec![s, c]]).unwrap(), 1e-9).unwrap();
    let err = group_closure(&[rot], 1e-9, 1000).unwrap_err();
    assert!(matches!(err, Error::BoundExceeded { .. }));
}

#[test]
fn closure_tables_are_groups() {
    for gens in [standard::permutations::<Q>(3), standard::signed_permutations::<Q>(2), standard::permutations::<Q>(4)] {
        let g = group_closure(&gens, 0.0, 100).unwrap();
        let n = g.order();
        for a in 0..n {
            assert_eq!(g.multiply(a, g.inverse(a)), g.identity());
            for b in 0..n {
                let expected = g.element(a).compose(g.element(b));
                assert_eq!(g.element(g.multiply(a, b)).matrix(), expected.matrix());
                for c in 0..n {
                    assert_eq!(g.multiply(g.multiply(a, b), c), g.multiply(a, g.multiply(b, c)));
                }
            }
        }
    }
    assert_eq!(group_closure(&standard::permutations::<Q>(4), 0.0, 100).unwrap().order(), 24);
    assert_eq!(group_closure(&standard::signed_permutations::<Q>(3), 0.0, 100).unwrap().order(), 48);
}

#[test]
fn non_orthogonal_rejected() {
    let m = Matrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
    assert!(matches!(OrthogonalElement::<Q>::new(m, 0.0), Err(Error::NotOrthogonal(_))));
}

#[test]
fn orbit_examples() {
    let o = orbit_cloud(&sign_group(), &cloud(&[&[1]]), 0.0).unwrap();
    assert_eq!(o.cloud.points(), &[vec![r(1)], vec![r(-1)]]);
    assert_eq!(o.provenance, vec![vec![(0, 0)], vec![(1, 0)]]);

    let stable = cloud(&[&[1], &[-1]]);
    let o = orbit_cloud(&sign_group(), &stable, 0.0).unwrap();
    assert_eq!(o.cloud.len(), 2);
    assert_eq!(o.provenance[0], vec![(0, 0), (1, 1)]);

    let o = orbit_cloud(&z4(), &cloud(&[&[1, 0]]), 0.0).unwrap();
    let mut pts = o.cloud.points().to_vec();
    pts.sort();
    let mut expected = vec![ints(&[1, 0]), ints(&[0, 1]), ints(&[-1, 0]), ints(&[0, -1])];
    expected.sort();
    assert_eq!(pts, expected);
}

#[test]
fn group_pullback_examples() {
    let g = sign_group();
    let minus = g.element(1).clone();
    let f = jet_of_poly(&x(1, 0).pow(2), &cloud(&[&[-1]]), 2).unwrap();
    assert_eq!(table(&f, 0), ints(&[1, -2, 2]));
    let pulled = group_pullback(&minus, &f).unwrap();
    assert_eq!(pulled.cloud().points(), &[vec![r(1)]]);
    assert_eq!(table(&pulled, 0), ints(&[1, 2, 2]));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = random::cloud::<Q>(&mut rng, 2, 3);
    let f = random::jet_field(&mut rng, &c, 3);
    assert_eq!(group_pullback(&OrthogonalElement::identity(2), &f).unwrap(), f);
}

#[test]
fn group_pullback_agrees_with_chain_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let g = group_closure(&standard::signed_permutations::<Q>(2), 0.0, 100).unwrap();
    for gi in 0..g.order() {
        let e = g.element(gi);
        let target = random::cloud::<Q>(&mut rng, 2, 3);
        let f = random::jet_field(&mut rng, &target, 3);
        let fast = group_pullback(e, &f).unwrap();
        let p = plan(PolyMap::linear(e.matrix()), fast.cloud(), &target, 0.0).unwrap();
        assert_eq!(pullback_multi(&p, &f, 3).unwrap(), fast);
    }
}

#[test]
fn cocycle_holds_for_all_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for g in [z4(), group_closure(&standard::permutations::<Q>(3), 0.0, 10).unwrap()] {
        let c = random::cloud::<Q>(&mut rng, g.dim(), 2);
        let f = random::jet_field(&mut rng, &c, 3);
        for a in 0..g.order() {
            for b in 0..g.order() {
                let (ga, gb) = (g.element(a), g.element(b));
                let lhs = group_pullback(&ga.compose(gb), &f).unwrap();
                let rhs = group_pullback(gb, &group_pullback(ga, &f).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn arrow_examples() {
    let g: ActingGroup<Q> = z4().into();
    let arrows = groupoid_arrows(&g, &cloud(&[&[1, 0], &[0, 1]]), 0.0).unwrap();
    assert_eq!(arrows.len(), 4);
    assert_eq!(arrows.iter().filter(|a| a.is_unit()).count(), 2);
    let cross: Vec<_> = arrows.iter().filter(|a| a.source != a.target).collect();
    assert_eq!(cross.len(), 2);
    for a in cross {
        let ArrowElement::Finite(e) = a.element else { panic!() };
        let m = match &g {
            ActingGroup::Finite(grp) => grp.element(e).clone(),
            _ => unreachable!(),
        };
        let src = if a.source == 0 { ints(&[1, 0]) } else { ints(&[0, 1]) };
        let dst = if a.target == 0 { ints(&[1, 0]) } else { ints(&[0, 1]) };
        assert_eq!(m.apply(&src).unwrap(), dst);
    }

    let circle: ActingGroup<Q> = CircleAction::planar().into();
    let arrows = groupoid_arrows(&circle, &cloud(&[&[0, 1]]), 0.0).unwrap();
    assert_eq!(arrows.len(), 1);
    assert!(arrows[0].is_unit());

    assert!(groupoid_arrows(&g, &PointCloud::empty(2), 0.0).unwrap().is_empty());

    let weighted: ActingGroup<Q> = CircleAction::new(vec![2], 0).unwrap().into();
    assert!(matches!(
        groupoid_arrows(&weighted, &cloud(&[&[0, 1]]), 0.0),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn circle_arrows_solve_angles() {
    let circle: ActingGroup<Q> = CircleAction::planar().into();
    let c = cloud(&[&[1, 0], &[0, 1], &[3, 4], &[0, 0]]);
    let arrows = groupoid_arrows(&circle, &c, 0.0).unwrap();
    // units plus the two arrows between the unit-circle points
    assert_eq!(arrows.len(), 6);
    let a = arrows.iter().find(|a| a.source == 0 && a.target == 1).unwrap();
    let ArrowElement::Angle(theta) = a.element else { panic!() };
    assert!((theta - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    let f = jet_of_poly(&x(2, 0).pow(2).add(&x(2, 1).pow(2)).unwrap(), &c, 3).unwrap();
    assert!(check_inv1(&circle, &arrows, &f, 1e-9).unwrap().holds);
    let f = jet_of_poly(&x(2, 0), &c, 1).unwrap();
    assert!(!check_inv1(&circle, &arrows, &f, 1e-9).unwrap().holds);
}

#[test]
fn inv1_examples() {
    let g: ActingGroup<Q> = sign_group().into();
    let z = cloud(&[&[1], &[-1]]);
    let arrows = groupoid_arrows(&g, &z, 0.0).unwrap();
    assert_eq!(arrows.len(), 4);

    let even = jet_of_poly(&x(1, 0).pow(2), &z, 2).unwrap();
    let rep = check_inv1(&g, &arrows, &even, 0.0).unwrap();
    assert!(rep.holds);
    assert_eq!(rep.arrows_checked, 4);

    // jet of x at 1 is (1, 1, 0); pulled back from -1 along -I it is (-1, -1, 0)
    let odd = jet_of_poly(&x(1, 0), &z, 2).unwrap();
    let rep = check_inv1(&g, &arrows, &odd, 0.0).unwrap();
    assert!(!rep.holds);
    let first = &rep.violations[0];
    assert_eq!(first.alpha, MultiIndex::zero(1));
    assert_eq!((first.arrow.source, first.arrow.target), (0, 1));
    assert_eq!(first.at_source, "1");
    assert_eq!(first.pulled_back, "-1");
    assert_eq!(rep.violations.len(), 4);

    let units: Vec<_> = arrows.into_iter().filter(|a| a.is_unit()).collect();
    assert!(check_inv1(&g, &units, &odd, 0.0).unwrap().holds);
}

#[test]
fn inv2_examples() {
    let a = CircleAction::planar().generator::<Q>();
    assert_eq!(a, Matrix::from_i64_rows(&[&[0, -1], &[1, 0]]));
    // the generator at (0, 1) is -d/dx
    let xi = fundamental_field(&a);
    assert_eq!(xi.eval(&ints(&[0, 1])).unwrap(), ints(&[-1, 0]));

    let z = cloud(&[&[0, 1]]);
    let r2 = x(2, 0).pow(2).add(&x(2, 1).pow(2)).unwrap();
    assert!(check_inv2(std::slice::from_ref(&a), &jet_of_poly(&r2, &z, 2).unwrap(), 0.0).unwrap().holds);

    let rep = check_inv2(std::slice::from_ref(&a), &jet_of_poly(&x(2, 1), &z, 2).unwrap(), 0.0).unwrap();
    assert!(!rep.holds);
    // xi(y) = x, whose first nonvanishing component at (0, 1) is d/dx
    assert_eq!(rep.violations[0].alpha, MultiIndex::new(vec![1, 0]));
    assert_eq!(rep.violations[0].value, "1");

    let zero = Matrix::<Q>::zeros(2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let c = random::cloud::<Q>(&mut rng, 2, 3);
    assert!(check_inv2(std::slice::from_ref(&zero), &random::jet_field(&mut rng, &c, 3), 0.0).unwrap().holds);
    assert!(matches!(
        check_inv2(&[zero], &jet_of_poly(&r2, &z, 0).unwrap(), 0.0),
        Err(Error::OrderMismatch(_))
    ));
}

#[test]
fn average_examples() {
    assert!(average_poly(&sign_group(), &x(1, 0)).unwrap().is_zero());
    let avg = average_poly(&z4(), &x(2, 0).pow(2)).unwrap();
    let half = x(2, 0).pow(2).add(&x(2, 1).pow(2)).unwrap().scale(&rational(1, 2));
    assert_eq!(avg, half);

    let circ = average_poly_circle(&CircleAction::planar(), &x(2, 0).pow(2), 5).unwrap();
    assert!(circ.near(&half.to_f64(), 1e-9));
    assert!((circ.eval(&[1.0, 0.0]).unwrap() - 0.5).abs() < 1e-9);

    assert!(matches!(
        average_poly_circle(&CircleAction::planar(), &x(2, 0).pow(2), 2),
        Err(Error::TooFewNodes { required: 3, got: 2 })
    ));
    // constants are fixed
    let one = Polynomial::<Q>::one(2);
    assert_eq!(average_poly(&z4(), &one).unwrap(), one);
    assert!(average_poly_circle(&CircleAction::planar(), &one, 1).unwrap().near(&one.to_f64(), 1e-12));
}

#[test]
fn weighted_circle_average() {
    // weight 2 on the first plane, fixed third coordinate: x1*x3 averages to 0, x1^2 to r^2/2
    let c = CircleAction::new(vec![2], 1).unwrap();
    let f = x(3, 0).pow(2).add(&x(3, 0).mul(&x(3, 2)).unwrap()).unwrap();
    let n = required_nodes(&c, &f);
    assert_eq!(n, 5);
    let avg = average_poly_circle(&c, &f, n).unwrap();
    let expected = x(3, 0).pow(2).add(&x(3, 1).pow(2)).unwrap().scale(&rational(1, 2)).to_f64();
    assert!(avg.near(&expected, 1e-9));
}

#[test]
fn extend_examples() {
    let g = sign_group();
    let z = cloud(&[&[1]]);
    let f = jet_of_poly(&x(1, 0).pow(2), &z, 2).unwrap();
    let ext = extend_invariant(&g, &z, &f, 0.0).unwrap();
    assert_eq!(ext.cloud().points(), &[vec![r(1)], vec![r(-1)]]);
    assert_eq!(table(&ext, 1), ints(&[1, -2, 2]));

    let stable = cloud(&[&[1], &[-1]]);
    let f = jet_of_poly(&x(1, 0).pow(2), &stable, 3).unwrap();
    assert_eq!(extend_invariant(&g, &stable, &f, 0.0).unwrap(), f);

    // Z has only the unit arrow, so the odd function x extends; the extension
    // is the even function x o (-I) near -1
    let f = jet_of_poly(&x(1, 0), &z, 2).unwrap();
    let ext = extend_invariant(&g, &z, &f, 0.0).unwrap();
    assert_eq!(table(&ext, 1), ints(&[1, -1, 0]));
}

#[test]
fn extend_rejects_non_invariant_data() {
    let g = sign_group();
    let z = cloud(&[&[1], &[-1]]);
    let f = jet_of_poly(&x(1, 0), &z, 2).unwrap();
    let err = extend_invariant(&g, &z, &f, 0.0).unwrap_err();
    let Error::Conflict { point, .. } = &err else { panic!("{err:?}") };
    assert_eq!(point, "(1)");
}

#[test]
fn round_trip_on_invariant_polynomials() {
    let g = group_closure(&standard::permutations::<Q>(3), 0.0, 10).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..4 {
        let f = average_poly(&g, &random::polynomial::<Q>(&mut rng, 3, 3, 4)).unwrap();
        let z = random::cloud::<Q>(&mut rng, 3, 2);
        let orbit = orbit_cloud(&g, &z, 0.0).unwrap().cloud;
        let full = jet_of_poly(&f, &orbit, 3).unwrap();
        let ext = extend_invariant(&g, &z, &restrict(&full, &z).unwrap(), 0.0).unwrap();
        assert_eq!(ext, full);
        assert_eq!(restrict(&ext, &z).unwrap(), jet_of_poly(&f, &z, 3).unwrap());
        let arrows = groupoid_arrows(&g.clone().into(), &orbit, 0.0).unwrap();
        assert!(check_inv1(&g.clone().into(), &arrows, &ext, 0.0).unwrap().holds);
    }
}

#[test]
fn groupoid_axioms_exhaustive() {
    let g = group_closure(&standard::signed_permutations::<Q>(3), 0.0, 100).unwrap();
    assert_eq!(g.order(), 48);
    let mut pts = vec![vec![r(0), r(0), r(0)]];
    for p in [[1, 0, 0], [0, 1, 0], [1, 1, 0], [-1, 1, 0], [1, 2, 3], [3, 2, 1], [2, 2, 2]] {
        pts.push(p.iter().map(|&v| r(v)).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    while pts.len() < 16 {
        let p = random::point::<Q>(&mut rng, 3);
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let z = PointCloud::new(3, pts).unwrap();
    let acting: ActingGroup<Q> = g.clone().into();
    let arrows = groupoid_arrows(&acting, &z, 0.0).unwrap();
    for i in 0..z.len() {
        assert!(arrows.iter().any(|a| a.is_unit() && a.source == i));
    }
    for a in &arrows {
        assert!(arrows.contains(&inverse_arrow(&acting, a)));
        for b in arrows.iter().filter(|b| b.source == a.target) {
            let c = compose_arrows(&acting, b, a).unwrap();
            assert_eq!((c.source, c.target), (a.source, b.target));
            assert!(arrows.contains(&c));
        }
    }
    // brute force count
    let count: usize = (0..z.len())
        .map(|s| {
            g.elements()
                .iter()
                .filter(|e| z.index_of(&e.apply(z.point(s)).unwrap()).is_some())
                .count()
        })
        .sum();
    assert_eq!(arrows.len(), count);
}

#[test]
fn float_groups_match_exact() {
    let exact = z4();
    let float = exact.to_f64();
    assert_eq!(float.table(), exact.table());
    let f = jet_of_poly(&x(2, 0).pow(3), &cloud(&[&[1, 2]]), 3).unwrap();
    let a = group_pullback(exact.element(1), &f).unwrap().to_f64();
    let b = group_pullback(float.element(1), &f.to_f64()).unwrap();
    assert!(compare_fields(&a, &b, 1e-12).unwrap().equal);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn averaging_is_idempotent_and_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = if rng.gen_bool(0.5) { standard::permutations::<Q>(3) } else { standard::signed_permutations::<Q>(2) };
        let g = group_closure(&gens, 0.0, 100).unwrap();
        let f = random::polynomial::<Q>(&mut rng, g.dim(), 3, 4);
        let avg = average_poly(&g, &f).unwrap();
        prop_assert_eq!(average_poly(&g, &avg).unwrap(), avg.clone());
        let z = random::cloud::<Q>(&mut rng, g.dim(), 3);
        let (inv1, _) = polynomial_is_invariant(&g.clone().into(), &[], &avg, &orbit_cloud(&g, &z, 0.0).unwrap().cloud, 4, 0.0).unwrap();
        prop_assert!(inv1.holds);
    }

    #[test]
    fn circle_average_is_infinitesimally_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random::polynomial::<f64>(&mut rng, 2, 4, 5);
        let c = CircleAction::planar();
        let avg = average_poly_circle(&c, &f, required_nodes(&c, &f)).unwrap();
        let z = random::cloud::<f64>(&mut rng, 2, 3);
        let jet = jet_of_poly(&avg, &z, 4).unwrap();
        prop_assert!(check_inv2(&[c.generator::<f64>()], &jet, 1e-9).unwrap().holds);
        let again = average_poly_circle(&c, &avg, required_nodes(&c, &avg)).unwrap();
        prop_assert!(again.near(&avg, 1e-9));
    }
}

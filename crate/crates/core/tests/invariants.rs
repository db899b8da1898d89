mod common;

use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use rand::Rng;
use weil_core::bundle::{
    evaluate_lifted_form, lift_connection, lift_vector_field, ChristoffelData, DifferentialForm, WeilPoint,
};
use weil_core::diophantine::DiophantineSystem;
use weil_core::elliptic::{FormalGroupLaw, WeierstrassCurve};
use weil_core::mahler::binomial_polynomial;
use weil_core::weil::{make_dual_numbers, make_jet_algebra, WeilAlgebra};
use weil_core::{PadicAlgebra, PadicContext, PadicElement, PadicNumber, PadicSeries, Valuation};

use common::*;

const N: u32 = 20;

fn q(p: u64) -> PadicContext {
    PadicContext::new(p, N).unwrap()
}

/// `Q_p[x, y]/(x^2, y^2)` with basis `1, x, y, xy`.
fn bidual(ctx: &PadicContext) -> PadicAlgebra {
    let one = ctx.one();
    let entries = [
        (0, 0, 0),
        (0, 1, 1),
        (1, 0, 1),
        (0, 2, 2),
        (2, 0, 2),
        (0, 3, 3),
        (3, 0, 3),
        (1, 2, 3),
        (2, 1, 3),
    ]
    .map(|(i, j, k)| (i, j, k, one.clone()));
    WeilAlgebra::from_entries(ctx, 4, entries).unwrap()
}

fn algebras(ctx: &PadicContext) -> Vec<PadicAlgebra> {
    vec![
        make_dual_numbers(ctx).unwrap(),
        make_jet_algebra(ctx, 3).unwrap(),
        bidual(ctx),
    ]
}

fn mixed(ctx: &PadicContext, rng: &mut TestRng) -> PadicNumber {
    match rng.gen_range(0..8) {
        0 => ctx.zero(),
        _ => {
            let v = rng.gen_range(-3..=3);
            with_valuation(ctx, rng, v)
        }
    }
}

fn random_element(ctx: &PadicContext, alg: &PadicAlgebra, rng: &mut TestRng) -> PadicElement {
    PadicElement::new(alg, (0..alg.dim()).map(|_| mixed(ctx, rng)).collect()).unwrap()
}

fn integral_element(ctx: &PadicContext, alg: &PadicAlgebra, rng: &mut TestRng) -> PadicElement {
    PadicElement::new(alg, (0..alg.dim()).map(|_| integral(ctx, rng)).collect()).unwrap()
}

fn integral_point(ctx: &PadicContext, alg: &PadicAlgebra, rng: &mut TestRng, n: usize) -> WeilPoint<PadicNumber> {
    WeilPoint::from_rows((0..n).map(|_| integral_element(ctx, alg, rng)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn field_laws(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let ctx = q(p);
        let mut rng = rng(seed);
        let [a, b, c] = [(); 3].map(|_| {
            let v = rng.gen_range(0..=4);
            with_valuation(&ctx, &mut rng, v)
        });
        let n = N as i64;
        prop_assert!(agree(&((a.clone() + &b) + &c), &(a.clone() + &(b.clone() + &c)), n));
        prop_assert!(agree(&((a.clone() * &b) * &c), &(a.clone() * &(b.clone() * &c)), n));
        prop_assert!(agree(&(a.clone() * &(b.clone() + &c)), &(a.clone() * &b + &(a.clone() * &c)), n));
        prop_assert!(agree(&(a.clone() * &a.checked_inv().unwrap()), &ctx.one(), n));
    }

    #[test]
    fn digits_reassemble(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 5, 7, 11])) {
        let ctx = q(p);
        let x = integral(&ctx, &mut rng(seed));
        let digits = x.digit_expansion().unwrap();
        prop_assert_eq!(digits.len(), N as usize);
        prop_assert_eq!(PadicNumber::from_digits(p, &digits).unwrap(), x);
    }

    #[test]
    fn projection_is_a_ring_map(seed in any::<u64>()) {
        let ctx = q(5);
        let mut rng = rng(seed);
        for alg in algebras(&ctx) {
            let a = random_element(&ctx, &alg, &mut rng);
            let b = random_element(&ctx, &alg, &mut rng);
            let (product, sum) = (&a * &b, &a + &b);
            prop_assert_eq!(product.project(), &(a.project().clone() * b.project()));
            prop_assert_eq!(sum.project(), &(a.project().clone() + b.project()));
        }
    }

    #[test]
    fn units_and_nilpotents(seed in any::<u64>()) {
        let ctx = q(5);
        let mut rng = rng(seed);
        for alg in algebras(&ctx) {
            let a = integral_element(&ctx, &alg, &mut rng);
            let nil = a.nilpotent_part();
            prop_assert!(nil.pow(alg.nilpotency_index() as u32).is_zero());
            prop_assert!(nil.nilpotency_order().is_some_and(|k| k <= alg.nilpotency_index()));
            let u = a.add_scalar(&unit(&ctx, &mut rng));
            if u.project().is_zero() {
                continue;
            }
            let inv = u.inverse().unwrap();
            let product = &u * &inv;
            prop_assert!(agree_all(product.coeffs(), PadicElement::one(&alg).coeffs(), N as i64));
        }
    }

    #[test]
    fn algebra_norm_is_ultrametric(seed in any::<u64>()) {
        let ctx = q(3);
        let mut rng = rng(seed);
        for alg in algebras(&ctx) {
            let a = random_element(&ctx, &alg, &mut rng);
            let b = random_element(&ctx, &alg, &mut rng);
            prop_assert!((&a + &b).norm() <= a.norm().max(b.norm()));
            prop_assert!((&a * &b).norm() <= a.norm() * b.norm());
        }
    }

    #[test]
    fn lift_is_linear(seed in any::<u64>(), n in 1usize..=3) {
        let ctx = q(5);
        let mut rng = rng(seed);
        for alg in algebras(&ctx) {
            let xi: Vec<_> = (0..n).map(|_| integral_element(&ctx, &alg, &mut rng)).collect();
            let f = polynomial(&ctx, &mut rng, n, 5, 8);
            let g = polynomial(&ctx, &mut rng, n, 5, 8);
            let lambda = integral(&ctx, &mut rng);
            let lhs = f.add(&g.scale(&lambda)).unwrap().lift_series(&xi).unwrap();
            let rhs = &f.lift_series(&xi).unwrap() + &g.lift_series(&xi).unwrap().scale(&lambda);
            prop_assert!(agree_all(lhs.coeffs(), rhs.coeffs(), N as i64));
            // determinism
            prop_assert_eq!(f.lift_series(&xi).unwrap(), f.lift_series(&xi).unwrap());
        }
    }

    #[test]
    fn chain_rule_univariate(seed in any::<u64>(), n in 1usize..=3) {
        let ctx = q(7);
        let mut rng = rng(seed);
        let alg = make_jet_algebra(&ctx, 3).unwrap();
        let xi: Vec<_> = (0..n).map(|_| integral_element(&ctx, &alg, &mut rng)).collect();
        let dg = rng.gen_range(1..=3);
        let f = polynomial(&ctx, &mut rng, 1, 6 / dg, 6);
        let g = polynomial(&ctx, &mut rng, n, dg, 6);
        let lhs = f.compose(std::slice::from_ref(&g)).unwrap().lift_series(&xi).unwrap();
        let rhs = f.lift_series(&[g.lift_series(&xi).unwrap()]).unwrap();
        prop_assert!(agree_all(lhs.coeffs(), rhs.coeffs(), N as i64));
    }

    #[test]
    fn vector_fields_and_connections_project(seed in any::<u64>()) {
        let ctx = q(5);
        let mut rng = rng(seed);
        let alg = make_jet_algebra(&ctx, 2).unwrap();
        let n = 2;
        let xi = integral_point(&ctx, &alg, &mut rng, n);
        let base = xi.project_point();
        let x: Vec<_> = (0..n).map(|_| polynomial(&ctx, &mut rng, n, 3, 4)).collect();
        let y: Vec<_> = (0..n).map(|_| polynomial(&ctx, &mut rng, n, 3, 4)).collect();

        let lifted = lift_vector_field(&x, &xi).unwrap();
        for (a, l) in x.iter().zip(&lifted) {
            prop_assert!(agree(l.project(), &a.series_eval(&base).unwrap(), N as i64));
        }

        let symbols: Vec<Vec<Vec<PadicSeries>>> = (0..n)
            .map(|_| (0..n).map(|_| (0..n).map(|_| polynomial(&ctx, &mut rng, n, 2, 3)).collect()).collect())
            .collect();
        let gamma = ChristoffelData::new(symbols).unwrap();
        let nabla = lift_connection(&gamma, &x, &y, &xi).unwrap();
        let at = |f: &PadicSeries| f.series_eval(&base).unwrap();
        for (k, component) in nabla.iter().enumerate() {
            let mut classical = ctx.zero();
            for i in 0..n {
                classical = classical + at(&x[i]) * &at(&y[k].partial_derivative(i).unwrap());
                for j in 0..n {
                    classical = classical + at(&x[i]) * &at(&y[j]) * &at(gamma.symbol(i, j, k));
                }
            }
            prop_assert!(agree(component.project(), &classical, N as i64));
        }
    }

    #[test]
    fn lifted_two_form_projects(seed in any::<u64>()) {
        let ctx = q(5);
        let mut rng = rng(seed);
        let alg = make_dual_numbers(&ctx).unwrap();
        let n = 3;
        let xi = integral_point(&ctx, &alg, &mut rng, n);
        let base = xi.project_point();
        let index_sets = [vec![0, 1], vec![0, 2], vec![1, 2]];
        let terms: Vec<_> = index_sets
            .iter()
            .map(|i| (i.clone(), polynomial(&ctx, &mut rng, n, 3, 4)))
            .collect();
        let omega = DifferentialForm::new(2, terms.clone()).unwrap();
        let v: Vec<Vec<Vec<PadicNumber>>> = (0..2)
            .map(|_| (0..n).map(|_| (0..2).map(|_| integral(&ctx, &mut rng)).collect()).collect())
            .collect();
        let value = evaluate_lifted_form(&omega, &xi, &v).unwrap();
        let classical = terms.iter().fold(ctx.zero(), |acc, (i, f)| {
            let det = v[0][i[0]][0].clone() * &v[1][i[1]][0] - &(v[0][i[1]][0].clone() * &v[1][i[0]][0]);
            acc + f.series_eval(&base).unwrap() * &det
        });
        prop_assert!(agree(value.project(), &classical, N as i64));
    }

    #[test]
    fn jet_group_is_lifted_law(seed in any::<u64>()) {
        const D: u32 = 6;
        let ctx = q(5);
        let mut rng = rng(seed);
        let coeffs = [(); 5].map(|_| small_int(&ctx, &mut rng, 20));
        let fgl = FormalGroupLaw::build(&WeierstrassCurve::new(&ctx, coeffs).unwrap(), D).unwrap();
        let dual = make_dual_numbers(&ctx).unwrap();
        let jet = |rng: &mut TestRng, v: i64| {
            let z0 = integral(&ctx, rng) * &ctx.prime_power(v);
            PadicElement::new(&dual, vec![z0, integral(&ctx, rng)]).unwrap()
        };

        // deep in the formal group the certified lift applies and agrees exactly
        let (x, y) = (jet(&mut rng, 10), jet(&mut rng, 10));
        let sum = fgl.jet_group_add(&x, &y).unwrap();
        prop_assert_eq!(&sum, &fgl.law().lift_series(&[x, y]).unwrap());

        let [x, y, z] = [(); 3].map(|_| jet(&mut rng, 1));
        prop_assert_eq!(fgl.jet_group_add(&x, &y).unwrap(), fgl.jet_group_add(&y, &x).unwrap());
        let left = fgl.jet_group_add(&fgl.jet_group_add(&x, &y).unwrap(), &z).unwrap();
        let right = fgl.jet_group_add(&x, &fgl.jet_group_add(&y, &z).unwrap()).unwrap();
        // the truncated law is associative up to terms of degree D + 1, whose
        // eps-parts have base degree D
        prop_assert!(agree_all(left.coeffs(), right.coeffs(), D as i64));
    }

    #[test]
    fn rank_nullity(rows in prop::collection::vec(prop::collection::vec(-12i64..12, 5), 1..6)) {
        let ctx = q(3);
        let n = 5;
        let equations = rows
            .iter()
            .map(|row| {
                let terms = (0..n).map(|j| {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    (e, ctx.integer(row[j]))
                });
                PadicSeries::polynomial(&ctx, n, terms).unwrap()
            })
            .collect();
        let system = DiophantineSystem::new(&ctx, n, equations).unwrap();
        let tangent = system.tangent_space(&vec![ctx.zero(); n]).unwrap();
        prop_assert_eq!(tangent.kernel_basis.len() + tangent.rank, n);
        prop_assert_eq!(tangent.rank, rational_rank(&rows));
    }

    #[test]
    fn hensel_converges_quadratically(seed in any::<u64>(), p in prop::sample::select(vec![3u64, 5, 7, 11])) {
        let ctx = q(p);
        let mut rng = rng(seed);
        let root = rng.gen_range(1..p as i64);
        let a = root * root + p as i64 * rng.gen_range(-50..50);
        let f = PadicSeries::polynomial(&ctx, 1, [(vec![2], ctx.one()), (vec![0], ctx.integer(-a))]).unwrap();
        let result = DiophantineSystem::new(&ctx, 1, vec![f]).unwrap().hensel_lift(&[ctx.integer(root)]).unwrap();
        let record = &result.residual_valuations;
        prop_assert!(record.last().unwrap().at_least(N as i64));
        for w in record.windows(2) {
            if let Valuation::Finite(v) = w[0] {
                prop_assert!(w[1].at_least((2 * v).min(N as i64)));
            }
        }
    }
}

#[test]
fn binomials_are_integral() {
    let ctx = q(5);
    let mut rng = rng(11);
    for _ in 0..1000 {
        let x = integral(&ctx, &mut rng);
        let n = rng.gen_range(0..25);
        let c = binomial_polynomial(&x, n).unwrap();
        assert!(c.norm() <= BigRational::one(), "C({x}, {n}) = {c}");
    }
}

#[test]
fn tangent_points_on_quadrics() {
    let ctx = q(7);
    let dual = make_dual_numbers(&ctx).unwrap();
    let mut rng = rng(12);
    let sq = |i: usize, n: usize| {
        let mut e = vec![0; n];
        e[i] = 2;
        (e, ctx.one())
    };
    let circle = PadicSeries::polynomial(&ctx, 2, [sq(0, 2), sq(1, 2), (vec![0, 0], ctx.integer(-1))]).unwrap();
    let sphere = PadicSeries::polynomial(
        &ctx,
        3,
        [sq(0, 3), sq(1, 3), sq(2, 3), (vec![0, 0, 0], ctx.integer(-1))],
    )
    .unwrap();
    let cases = [
        (DiophantineSystem::new(&ctx, 2, vec![circle]).unwrap(), vec![ctx.ratio(3, 5).unwrap(), ctx.ratio(4, 5).unwrap()]),
        (
            DiophantineSystem::new(&ctx, 3, vec![sphere]).unwrap(),
            vec![ctx.ratio(2, 3).unwrap(), ctx.ratio(1, 3).unwrap(), ctx.ratio(2, 3).unwrap()],
        ),
    ];
    for (system, base) in &cases {
        assert!(system.evaluate(base).unwrap().verdict);
        let points = system.infinitesimal_points(base, &dual).unwrap();
        assert_eq!(points.kernel_basis().len(), system.nvars() - 1);
        for _ in 0..100 {
            let t: Vec<_> = points.kernel_basis().iter().map(|_| integral(&ctx, &mut rng)).collect();
            let check = points.verify(&points.combination(&t).unwrap()).unwrap();
            assert!(check.passed, "{check:?}");
        }
    }
}

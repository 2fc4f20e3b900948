mod support;

use ballmap::ball_map::{
    compose_source_automorphism, compose_target_automorphism, is_proper, lowest_terms_check, sphere_tensor,
    tensor_components, underlying_form, BallAutomorphism, LowestTerms,
};
use ballmap::constructions::{construct_with_denominator, example_map};
use ballmap::poly::{Complex, PolyMap, Polynomial};
use ballmap::unitary::{ball_point, inner, norm, seeded_rng, sphere_point, UnitaryElement};
use ballmap::RationalBallMap;
use rand::Rng;
use support::normalized_resultant;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn h_map() -> RationalBallMap {
    let z1 = Polynomial::variable(2, 0);
    let z2 = Polynomial::variable(2, 1);
    let s = Complex::new(2f64.sqrt(), 0.0);
    RationalBallMap::polynomial(PolyMap::new(2, vec![&z1 * &z1, (&z1 * &z2).scale(s), &z2 * &z2]).unwrap())
}

fn form_distance(f: &RationalBallMap, g: &RationalBallMap) -> f64 {
    let a = underlying_form(f).unwrap();
    let b = underlying_form(g).unwrap();
    a.sub(&b).max_abs() / a.max_abs().max(b.max_abs())
}

/// Direct `|g|^2 - ||p||^2` without going through the form.
fn direct_form(f: &RationalBallMap, z: &[Complex]) -> f64 {
    let g = f.denominator().evaluate(z).unwrap();
    let p = f.numerator().evaluate(z).unwrap();
    g.norm_sqr() - p.iter().map(|x| x.norm_sqr()).sum::<f64>()
}

/// A proper monomial map built by tensoring random components by the identity.
fn random_monomial_map(n: usize, steps: usize, rng: &mut impl Rng) -> RationalBallMap {
    let mut f = RationalBallMap::identity(n);
    for _ in 0..steps {
        let len = f.target_dim();
        let picks: Vec<usize> = (0..len).filter(|_| rng.random_bool(0.4)).collect();
        let picks = if picks.is_empty() { vec![rng.random_range(0..len)] } else { picks };
        f = tensor_components(&f, &picks, &PolyMap::identity(n)).unwrap();
    }
    f
}

#[test]
fn basic_forms() {
    let id = underlying_form(&RationalBallMap::identity(3)).unwrap();
    assert_eq!(id, ballmap::RealForm::sphere(3));
    let h = underlying_form(&h_map()).unwrap();
    let expected = ballmap::RealForm::constant(2, 1.0).sub(&ballmap::RealForm::norm_power(2, 2));
    assert!(h.sub(&expected).max_abs() < 1e-15);
}

#[test]
fn properness_examples() {
    let id = is_proper(&RationalBallMap::identity(2), 500, 0);
    assert!(id.verdict);
    assert!(id.max_sphere_residual < 1e-14);
    let doubled = RationalBallMap::polynomial(PolyMap::new(1, vec![Polynomial::variable(1, 0).scale(c(2.0, 0.0))]).unwrap());
    assert!(!is_proper(&doubled, 500, 0).verdict);
}

#[test]
fn proper_maps_vanish_on_sphere_and_are_positive_inside() {
    let maps = [example_map(0.3, 0.4).unwrap(), h_map(), random_monomial_map(3, 3, &mut seeded_rng(5))];
    let mut rng = seeded_rng(17);
    for f in &maps {
        let r = underlying_form(f).unwrap();
        for _ in 0..100 {
            let z = sphere_point(f.n(), &mut rng);
            assert!(r.evaluate(&z).unwrap().abs() <= 1e-9);
            let w = ball_point(f.n(), 0.99, &mut rng);
            assert!(r.evaluate(&w).unwrap() > 0.0);
            assert!(direct_form(f, &w) > 0.0);
        }
    }
}

#[test]
fn automorphism_fixed_points() {
    let mut rng = seeded_rng(23);
    for _ in 0..50 {
        let alpha = ball_point(3, 0.95, &mut rng);
        let phi = BallAutomorphism::involution(alpha.clone()).unwrap();
        let zero = phi.apply(&alpha).unwrap();
        assert!(norm(&zero) < 1e-12);
        let back = phi.apply(&[c(0.0, 0.0); 3]).unwrap();
        assert!(back.iter().zip(&alpha).all(|(a, b)| (a - b).norm() < 1e-14));
        // the explicit formula
        let z = ball_point(3, 0.9, &mut rng);
        let a2 = norm(&alpha).powi(2);
        let t = (1.0 - a2).sqrt();
        let za = inner(&z, &alpha);
        let expected: Vec<Complex> = (0..3)
            .map(|i| (alpha[i] - (za / (t + 1.0) * alpha[i] + z[i] * t)) / (c(1.0, 0.0) - za))
            .collect();
        let got = phi.apply(&z).unwrap();
        assert!(got.iter().zip(&expected).all(|(a, b)| (a - b).norm() < 1e-13));
        assert!(norm(&phi.apply(&got).unwrap().iter().zip(&z).map(|(a, b)| a - b).collect::<Vec<_>>()) < 1e-12);
    }
    assert!(BallAutomorphism::involution(vec![c(1.0, 0.0), c(0.0, 0.0)]).is_err());
}

#[test]
fn origin_automorphism_negates() {
    let phi = BallAutomorphism::new(vec![c(0.0, 0.0); 2], UnitaryElement::identity(2)).unwrap();
    let z = [c(0.2, 0.1), c(-0.3, 0.4)];
    let w = phi.apply(&z).unwrap();
    assert!(w.iter().zip(&z).all(|(a, b)| (a + b).norm() < 1e-15));
    let f = example_map(0.3, 0.4).unwrap();
    let moved = compose_source_automorphism(&f, &phi).unwrap();
    let expected = f.compose_unitaries(Some(&UnitaryElement::negative_identity(2)), None).unwrap();
    assert!(form_distance(&moved, &expected) < 1e-14);
}

#[test]
fn whitney_target_denominator() {
    let alpha = vec![c(-0.3, 0.0), c(0.0, 0.0), c(-0.4, 0.0)];
    let tau = BallAutomorphism::new(alpha, UnitaryElement::identity(3)).unwrap();
    let f = compose_target_automorphism(&h_map(), &tau).unwrap();
    let g = f.denominator();
    assert_eq!(g.num_terms(), 3);
    assert!((g.coeff_of(&[0, 0]) - c(1.0, 0.0)).norm() < 1e-15);
    assert!((g.coeff_of(&[2, 0]) - c(0.3, 0.0)).norm() < 1e-15);
    assert!((g.coeff_of(&[0, 2]) - c(0.4, 0.0)).norm() < 1e-15);
}

#[test]
fn source_composition_matches_pointwise() {
    let mut rng = seeded_rng(29);
    let h = h_map();
    for _ in 0..5 {
        let phi = BallAutomorphism::new(ball_point(2, 0.7, &mut rng), UnitaryElement::random_haar(2, &mut rng)).unwrap();
        let composed = compose_source_automorphism(&h, &phi).unwrap();
        assert!((composed.denominator().constant_term() - c(1.0, 0.0)).norm() < 1e-14);
        for _ in 0..100 {
            let z = ball_point(2, 0.95, &mut rng);
            let a = composed.evaluate(&z).unwrap();
            let b = h.evaluate(&phi.apply(&z).unwrap()).unwrap();
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).norm() <= 1e-10));
        }
    }
}

#[test]
fn source_composition_preserves_degree() {
    let f = example_map(0.3, 0.4).unwrap();
    let mut rng = seeded_rng(31);
    for _ in 0..10 {
        let phi = BallAutomorphism::involution(ball_point(2, 0.6, &mut rng)).unwrap();
        assert_eq!(compose_source_automorphism(&f, &phi).unwrap().degree(), f.degree());
    }
}

#[test]
fn involution_returns_the_form() {
    let mut rng = seeded_rng(37);
    for f in [example_map(0.3, 0.4).unwrap(), h_map()] {
        for _ in 0..5 {
            let phi = BallAutomorphism::involution(ball_point(2, 0.6, &mut rng)).unwrap();
            let twice = compose_source_automorphism(&compose_source_automorphism(&f, &phi).unwrap(), &phi).unwrap();
            assert!(form_distance(&twice, &f) <= 1e-9);
            assert_eq!(twice.degree(), f.degree());
        }
    }
}

#[test]
fn target_automorphisms_keep_the_normalized_form() {
    let mut rng = seeded_rng(41);
    let f = example_map(0.3, 0.4).unwrap();
    for _ in 0..10 {
        let tau = BallAutomorphism::new(ball_point(7, 0.6, &mut rng), UnitaryElement::random_haar(7, &mut rng)).unwrap();
        let moved = compose_target_automorphism(&f, &tau).unwrap();
        assert!(form_distance(&moved, &f) <= 1e-9);
        assert!(is_proper(&moved, 200, 1).verdict);
    }
    let v = BallAutomorphism::unitary_only(UnitaryElement::random_haar(7, &mut rng));
    assert!(form_distance(&compose_target_automorphism(&f, &v).unwrap(), &f) < 1e-14);
    // moving the image of the origin back to the origin
    let displaced = compose_source_automorphism(&f, &BallAutomorphism::involution(vec![c(0.2, 0.1), c(-0.1, 0.3)]).unwrap()).unwrap();
    let beta = displaced.evaluate(&[c(0.0, 0.0); 2]).unwrap();
    let centered = compose_target_automorphism(&displaced, &BallAutomorphism::involution(beta).unwrap()).unwrap();
    assert!(norm(&centered.evaluate(&[c(0.0, 0.0); 2]).unwrap()) < 1e-13);
}

#[test]
fn tensor_identity_in_one_variable() {
    let sq = tensor_components(&RationalBallMap::identity(1), &[0], &PolyMap::identity(1)).unwrap();
    assert_eq!(sq.numerator().components(), &[Polynomial::variable(1, 0).pow(2)]);
    assert!(is_proper(&sq, 200, 0).verdict);
}

#[test]
fn tensoring_preserves_properness() {
    let mut rng = seeded_rng(43);
    for i in 0..10 {
        let n = 1 + i % 3;
        let f = random_monomial_map(n, 2, &mut rng);
        assert!(is_proper(&f, 300, i as u64).verdict);
        let picks: Vec<usize> = (0..f.target_dim()).step_by(2).collect();
        let k = 1 + i % 2;
        let t = tensor_components(&f, &picks, &sphere_tensor(n, k)).unwrap();
        assert!(is_proper(&t, 300, i as u64).verdict);
        let mut srng = seeded_rng(100 + i as u64);
        for _ in 0..50 {
            assert!(direct_form(&t, &sphere_point(n, &mut srng)).abs() < 1e-12);
        }
    }
}

#[test]
fn tensor_rejects_bad_factor() {
    let f = RationalBallMap::identity(2);
    let bad = PolyMap::new(2, vec![Polynomial::variable(2, 0)]).unwrap();
    assert!(tensor_components(&f, &[0], &bad).is_err());
    assert!(tensor_components(&f, &[5], &PolyMap::identity(2)).is_err());
}

#[test]
fn cubic_denominator_construction_is_proper_on_many_points() {
    let g = Polynomial::from_terms(2, vec![(vec![2, 0], c(1.0, 0.0)), (vec![0, 3], c(1.0, 0.0))]).unwrap();
    let out = construct_with_denominator(&g, 4, false).unwrap();
    let f = &out.map;
    assert!(is_proper(f, 10_000, 7).verdict);
    let mut rng = seeded_rng(47);
    for _ in 0..10_000 {
        let z = sphere_point(2, &mut rng);
        assert!(direct_form(f, &z).abs() <= 1e-9);
    }
    assert_eq!(lowest_terms_check(f, 20, 0).verdict, LowestTerms::Certified);
}

#[test]
fn planted_factor_is_detected() {
    let z1 = Polynomial::variable(2, 0);
    let g = &Polynomial::one(2) + &(&z1 * &z1).scale(c(0.5, 0.0));
    let f = RationalBallMap::new(PolyMap::new(2, vec![&z1 * &g]).unwrap(), g).unwrap();
    assert_eq!(lowest_terms_check(&f, 20, 0).verdict, LowestTerms::Failed);
}

/// Coefficients of `t -> q(a + t b)` by sampling on a circle and inverting
/// the discrete Fourier transform.
fn restrict_to_line(q: &Polynomial, a: &[Complex], b: &[Complex], deg: usize) -> Vec<(f64, f64)> {
    let m = deg + 1;
    let values: Vec<Complex> = (0..m)
        .map(|k| {
            let t = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64);
            let z: Vec<Complex> = a.iter().zip(b).map(|(x, y)| x + t * y).collect();
            q.evaluate(&z).unwrap()
        })
        .collect();
    (0..m)
        .map(|j| {
            let s: Complex = (0..m)
                .map(|k| values[k] * Complex::from_polar(1.0, -2.0 * std::f64::consts::PI * (j * k) as f64 / m as f64))
                .sum::<Complex>()
                / m as f64;
            (s.re, s.im)
        })
        .collect()
}

#[test]
fn example_map_has_no_common_factor() {
    let f = example_map(0.3, 0.4).unwrap();
    let verdict = lowest_terms_check(&f, 20, 0).verdict;
    assert!(matches!(verdict, LowestTerms::Likely | LowestTerms::Certified));
    let mut rng = seeded_rng(53);
    let d = f.degree();
    for _ in 0..20 {
        let a = ball_point(2, 1.0, &mut rng);
        // long enough lines that the quadratic part of g is not negligible
        let b: Vec<Complex> = sphere_point(2, &mut rng).into_iter().map(|x| x * 2.0).collect();
        let g = restrict_to_line(f.denominator(), &a, &b, d);
        let weights: Vec<Complex> = (0..f.target_dim()).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let mix = f
            .numerator()
            .components()
            .iter()
            .zip(&weights)
            .fold(Polynomial::zero(2), |acc, (p, w)| &acc + &p.scale(*w));
        let p = restrict_to_line(&mix, &a, &b, d);
        let res = normalized_resultant(&g, &p);
        assert!(res > 1e-8);
    }
}

#[test]
fn json_round_trip() {
    let f = example_map(0.3, 0.4).unwrap();
    let s = serde_json::to_string(&f).unwrap();
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["n"], 2);
    assert_eq!(v["N"], 7);
    let back: RationalBallMap = serde_json::from_str(&s).unwrap();
    assert_eq!(back, f);
}

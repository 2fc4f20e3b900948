//! Fixture maps shared by the benchmarks.

use ballmap::ball_map::{compose_source_automorphism, BallAutomorphism, RationalBallMap};
use ballmap::poly::Complex;
use ballmap::unitary::UnitaryElement;

/// `(z1, z1 z2, z2^2)` moved off normal form by an automorphism at `alpha`.
pub fn displaced_whitney(alpha: [f64; 2]) -> RationalBallMap {
    let whitney = whitney();
    let a = vec![Complex::new(alpha[0], 0.0), Complex::new(alpha[1], 0.0)];
    let aut = BallAutomorphism::new(a, UnitaryElement::identity(2)).expect("alpha inside the ball");
    compose_source_automorphism(&whitney, &aut).expect("composition is defined")
}

pub fn whitney() -> RationalBallMap {
    use ballmap::poly::{PolyMap, Polynomial};
    let z1 = Polynomial::variable(2, 0);
    let z2 = Polynomial::variable(2, 1);
    let p = PolyMap::new(2, vec![z1.clone(), &z1 * &z2, &z2 * &z2]).expect("same dimension");
    RationalBallMap::polynomial(p)
}

//! Exact rational polynomial algebra in the velocity variable, weighted by
//! the standard Maxwellian M = (2pi)^{-3/2} exp(-|v|^2/2).
//!
//! Everything here is exact: coefficients are arbitrary-precision rationals
//! and Gaussian moments come from the double-factorial closed form, so the
//! module serves as the ground-truth oracle for the collision-operator
//! identities and transport coefficients checked elsewhere.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Real;

/// Exact rational scalar. Stored in lowest terms with positive denominator
/// by the underlying type.
pub type Rational = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A velocity axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }
}

/// Multivariate polynomial in (v1, v2, v3) with exact rational coefficients.
///
/// Terms map an exponent triple to a nonzero coefficient; entries with zero
/// coefficient are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VelocityPolynomial {
    terms: BTreeMap<[u8; 3], Rational>,
}

impl VelocityPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term([0, 0, 0], c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The coordinate polynomial v_i.
    pub fn variable(axis: Axis) -> Self {
        let mut e = [0u8; 3];
        e[axis.index()] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exponents: [u8; 3], coeff: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exponents, coeff);
        p
    }

    /// |v|^2 = v1^2 + v2^2 + v3^2.
    pub fn speed_squared() -> Self {
        let mut p = Self::zero();
        p.add_term([2, 0, 0], Rational::one());
        p.add_term([0, 2, 0], Rational::one());
        p.add_term([0, 0, 2], Rational::one());
        p
    }

    fn add_term(&mut self, exponents: [u8; 3], coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponents) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, max over terms of a+b+c. Zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8; 3], &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut p = Self::zero();
        for (e, a) in &self.terms {
            p.terms.insert(*e, a * c);
        }
        p
    }

    /// Evaluate at a velocity point, rounding coefficients to the target
    /// scalar type.
    pub fn eval<T: Real>(&self, v: [T; 3]) -> T {
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut t = T::from_f64(rational_to_f64(c)).unwrap();
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    t = t * v[i];
                }
            }
            acc = acc + t;
        }
        acc
    }
}

/// Round a big rational to f64 (used only when leaving the exact layer).
pub fn rational_to_f64(r: &Rational) -> f64 {
    // Scale so numerator/denominator fit in f64 range before dividing.
    let n = r.numer();
    let d = r.denom();
    let nf = bigint_to_f64(n);
    let df = bigint_to_f64(d);
    nf / df
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    // BigInt -> f64 via string is exact enough for the magnitudes used here
    // (coefficients stay far below 2^53 in practice).
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

impl Add for &VelocityPolynomial {
    type Output = VelocityPolynomial;
    fn add(self, rhs: &VelocityPolynomial) -> VelocityPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &VelocityPolynomial {
    type Output = VelocityPolynomial;
    fn sub(self, rhs: &VelocityPolynomial) -> VelocityPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &VelocityPolynomial {
    type Output = VelocityPolynomial;
    fn neg(self) -> VelocityPolynomial {
        VelocityPolynomial::zero() - self.clone()
    }
}

impl Sub for VelocityPolynomial {
    type Output = VelocityPolynomial;
    fn sub(self, rhs: VelocityPolynomial) -> VelocityPolynomial {
        &self - &rhs
    }
}

impl Add for VelocityPolynomial {
    type Output = VelocityPolynomial;
    fn add(self, rhs: VelocityPolynomial) -> VelocityPolynomial {
        &self + &rhs
    }
}

impl Mul for &VelocityPolynomial {
    type Output = VelocityPolynomial;
    fn mul(self, rhs: &VelocityPolynomial) -> VelocityPolynomial {
        let mut out = VelocityPolynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// (e-1)!! as a rational, with (-1)!! = 1.
fn double_factorial_odd_below(e: u8) -> Rational {
    let mut acc = BigInt::one();
    let mut k = e as i64 - 1;
    while k >= 2 {
        acc *= BigInt::from(k);
        k -= 2;
    }
    Rational::from_integer(acc)
}

/// Exact moment of the monomial v1^a v2^b v3^c against the unit Maxwellian.
///
/// Zero when any exponent is odd; otherwise the product of one-dimensional
/// standard-Gaussian moments (e-1)!!.
pub fn gaussian_moment(a: u8, b: u8, c: u8) -> Rational {
    if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 {
        return Rational::zero();
    }
    double_factorial_odd_below(a) * double_factorial_odd_below(b) * double_factorial_odd_below(c)
}

/// Exact inner product <p, q>_M = integral of p q M dv.
pub fn inner_product(p: &VelocityPolynomial, q: &VelocityPolynomial) -> Rational {
    let prod = p * q;
    let mut acc = Rational::zero();
    for (e, c) in prod.terms() {
        let m = gaussian_moment(e[0], e[1], e[2]);
        if !m.is_zero() {
            acc += c * &m;
        }
    }
    acc
}

/// The five collision invariants {1, v1, v2, v3, |v|^2}.
pub fn kernel_basis() -> [VelocityPolynomial; 5] {
    [
        VelocityPolynomial::one(),
        VelocityPolynomial::variable(Axis::X),
        VelocityPolynomial::variable(Axis::Y),
        VelocityPolynomial::variable(Axis::Z),
        VelocityPolynomial::speed_squared(),
    ]
}

/// Orthogonal kernel basis {1, v1, v2, v3, |v|^2 - 3} with squared norms
/// {1, 1, 1, 1, 6}.
fn orthogonal_kernel_basis() -> [(VelocityPolynomial, Rational); 5] {
    let shifted = VelocityPolynomial::speed_squared() - VelocityPolynomial::constant(rat(3, 1));
    [
        (VelocityPolynomial::one(), rat(1, 1)),
        (VelocityPolynomial::variable(Axis::X), rat(1, 1)),
        (VelocityPolynomial::variable(Axis::Y), rat(1, 1)),
        (VelocityPolynomial::variable(Axis::Z), rat(1, 1)),
        (shifted, rat(6, 1)),
    ]
}

/// Orthogonal projection of p onto Span{1, v1, v2, v3, |v|^2} in <.,.>_M.
pub fn project_collision_invariants(p: &VelocityPolynomial) -> VelocityPolynomial {
    let mut out = VelocityPolynomial::zero();
    for (e, norm_sq) in orthogonal_kernel_basis() {
        let coeff = inner_product(p, &e) / norm_sq;
        out = &out + &e.scale(&coeff);
    }
    out
}

/// Heat-flux vector component A_i = (1/2)(|v|^2 - 5) v_i.
pub fn make_a(i: Axis) -> VelocityPolynomial {
    let s = VelocityPolynomial::speed_squared() - VelocityPolynomial::constant(rat(5, 1));
    let vi = VelocityPolynomial::variable(i);
    (&s * &vi).scale(&rat(1, 2))
}

/// Traceless stress tensor component B_ij = v_i v_j - (1/3)|v|^2 delta_ij.
pub fn make_b(i: Axis, j: Axis) -> VelocityPolynomial {
    let vij = &VelocityPolynomial::variable(i) * &VelocityPolynomial::variable(j);
    if i == j {
        vij - VelocityPolynomial::speed_squared().scale(&rat(1, 3))
    } else {
        vij
    }
}

/// Squared-magnitude signed check used by tests: <p,p>_M.
pub fn norm_squared(p: &VelocityPolynomial) -> Rational {
    inner_product(p, p)
}

/// True if <p,p>_M >= 0 holds (it always should for a positive weight).
pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b11() -> VelocityPolynomial {
        make_b(Axis::X, Axis::X)
    }

    #[test]
    fn gaussian_moment_values() {
        assert_eq!(gaussian_moment(0, 0, 0), rat(1, 1));
        assert_eq!(gaussian_moment(1, 0, 0), rat(0, 1));
        assert_eq!(gaussian_moment(2, 0, 0), rat(1, 1));
        // (4-1)!! * (2-1)!! = 3
        assert_eq!(gaussian_moment(4, 2, 0), rat(3, 1));
        assert_eq!(gaussian_moment(8, 0, 0), rat(105, 1));
        assert_eq!(gaussian_moment(6, 4, 2), rat(45, 1));
    }

    #[test]
    fn inner_product_values() {
        let v1 = VelocityPolynomial::variable(Axis::X);
        assert_eq!(inner_product(&v1, &v1), rat(1, 1));
        let s = VelocityPolynomial::speed_squared();
        assert_eq!(inner_product(&s, &s), rat(15, 1));
        let a1 = make_a(Axis::X);
        assert_eq!(inner_product(&a1, &a1), rat(5, 2));
        assert_eq!(inner_product(&b11(), &b11()), rat(4, 3));
        let b12 = make_b(Axis::X, Axis::Y);
        assert_eq!(inner_product(&b12, &b12), rat(1, 1));
    }

    #[test]
    fn projection_examples() {
        let v1 = VelocityPolynomial::variable(Axis::X);
        assert_eq!(project_collision_invariants(&v1), v1);

        let v1sq = VelocityPolynomial::monomial([2, 0, 0], rat(1, 1));
        let expect = VelocityPolynomial::speed_squared().scale(&rat(1, 3));
        assert_eq!(project_collision_invariants(&v1sq), expect);

        assert!(project_collision_invariants(&b11()).is_zero());
        assert!(project_collision_invariants(&make_a(Axis::Y)).is_zero());
    }

    #[test]
    fn a_expanded_form() {
        // A_1 = (1/2)v1^3 + (1/2)v1 v2^2 + (1/2)v1 v3^2 - (5/2)v1
        let mut expect = VelocityPolynomial::zero();
        expect = expect + VelocityPolynomial::monomial([3, 0, 0], rat(1, 2));
        expect = expect + VelocityPolynomial::monomial([1, 2, 0], rat(1, 2));
        expect = expect + VelocityPolynomial::monomial([1, 0, 2], rat(1, 2));
        expect = expect + VelocityPolynomial::monomial([1, 0, 0], rat(-5, 2));
        assert_eq!(make_a(Axis::X), expect);
    }

    #[test]
    fn b_trace_free_and_off_diagonal() {
        let v1v2 = VelocityPolynomial::monomial([1, 1, 0], rat(1, 1));
        assert_eq!(make_b(Axis::X, Axis::Y), v1v2);
        let trace = Axis::ALL
            .iter()
            .fold(VelocityPolynomial::zero(), |acc, &i| acc + make_b(i, i));
        assert!(trace.is_zero());
    }

    #[test]
    fn kernel_orthogonality_of_a_and_b() {
        for k in kernel_basis() {
            for i in Axis::ALL {
                assert!(inner_product(&make_a(i), &k).is_zero());
                for j in Axis::ALL {
                    assert!(inner_product(&make_b(i, j), &k).is_zero());
                }
            }
        }
    }

    #[test]
    fn moment_oracle_matches_1d_quadrature() {
        // Independent cross-check of the double-factorial closed form:
        // 1D Gauss-Hermite-free midpoint quadrature on [-12, 12].
        for e in [0u8, 2, 4, 6] {
            let exact = rational_to_f64(&gaussian_moment(e, 0, 0));
            let n = 400_000usize;
            let (a, b) = (-12.0f64, 12.0f64);
            let h = (b - a) / n as f64;
            let mut acc = 0.0;
            for i in 0..n {
                let x = a + (i as f64 + 0.5) * h;
                acc += x.powi(e as i32) * (-0.5 * x * x).exp();
            }
            acc *= h / (2.0 * std::f64::consts::PI).sqrt();
            assert!((acc - exact).abs() < 1e-9, "e={e}: {acc} vs {exact}");
        }
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=9).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_poly(max_degree: u8) -> impl Strategy<Value = VelocityPolynomial> {
        prop::collection::vec(
            ((0u8..=6, 0u8..=6, 0u8..=6), arb_rational()),
            1..6,
        )
        .prop_map(move |terms| {
            let mut p = VelocityPolynomial::zero();
            for ((a, b, c), r) in terms {
                if a + b + c <= max_degree {
                    p = p + VelocityPolynomial::monomial([a, b, c], r);
                }
            }
            p
        })
    }

    proptest! {
        #[test]
        fn bilinear_and_symmetric(p in arb_poly(6), q in arb_poly(6), r in arb_poly(6), c in arb_rational()) {
            let lhs = inner_product(&(&p + &q.scale(&c)), &r);
            let rhs = inner_product(&p, &r) + c.clone() * inner_product(&q, &r);
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(inner_product(&p, &q), inner_product(&q, &p));
        }

        #[test]
        fn projection_idempotent_and_orthogonal(p in arb_poly(6)) {
            let pp = project_collision_invariants(&p);
            prop_assert_eq!(project_collision_invariants(&pp), pp.clone());
            let residual = &p - &pp;
            for k in kernel_basis() {
                prop_assert!(inner_product(&residual, &k).is_zero());
            }
        }

        #[test]
        fn positivity(p in arb_poly(6)) {
            let n = norm_squared(&p);
            prop_assert!(is_nonnegative(&n));
            prop_assert_eq!(n.is_zero(), p.is_zero());
        }
    }
}

//! BGK surrogate for the linearized collision operator, transport
//! coefficients, and the (r, q) scaling-regime classifier.
//!
//! The surrogate is L = nu0 (I - P) with P the orthogonal projection onto
//! the collision invariants. It keeps exactly the structure the limit
//! derivation uses: the kernel, self-adjointness, solvability of the
//! hat problems, and the quadratic identity Gamma(g,g) = (1/2) L(g^2).

use num_traits::{One, Signed, Zero};

use crate::error::ModelError;
use crate::moment_algebra::{
    gaussian_moment, inner_product, make_a, make_b, project_collision_invariants, rat, Axis,
    Rational, VelocityPolynomial,
};

/// The BGK relaxation operator L = nu0 (I - P).
#[derive(Clone, Debug)]
pub struct BgkOperator {
    nu0: Rational,
}

impl BgkOperator {
    pub fn new(nu0: Rational) -> Result<Self, ModelError> {
        if !nu0.is_positive() {
            return Err(ModelError::NonPositiveFrequency(nu0.to_string()));
        }
        Ok(Self { nu0 })
    }

    pub fn nu0(&self) -> &Rational {
        &self.nu0
    }

    /// L p = nu0 (p - P p). Annihilates collision invariants exactly.
    pub fn apply_l(&self, p: &VelocityPolynomial) -> VelocityPolynomial {
        let perp = p - &project_collision_invariants(p);
        perp.scale(&self.nu0)
    }

    /// Gamma(p, q) = (1/2) L(p q), extending the kernel identity to all
    /// arguments. Symmetric in (p, q).
    pub fn gamma(&self, p: &VelocityPolynomial, q: &VelocityPolynomial) -> VelocityPolynomial {
        self.apply_l(&(p * q)).scale(&rat(1, 2))
    }

    /// Solve L(A_hat) = A and L(B_hat) = B in the kernel orthocomplement.
    ///
    /// For BGK the scalar functions reduce to the constant 1/nu0. The
    /// defining relations are re-applied and checked exactly before
    /// returning.
    pub fn solve_hats(&self) -> HatSolution {
        let alpha = Rational::one() / &self.nu0;
        let a_hat: [VelocityPolynomial; 3] = [
            make_a(Axis::X).scale(&alpha),
            make_a(Axis::Y).scale(&alpha),
            make_a(Axis::Z).scale(&alpha),
        ];
        let mut b_hat: Vec<VelocityPolynomial> = Vec::with_capacity(9);
        for i in Axis::ALL {
            for j in Axis::ALL {
                b_hat.push(make_b(i, j).scale(&alpha));
            }
        }
        let b_hat: [VelocityPolynomial; 9] = b_hat.try_into().unwrap();

        for (i, ah) in a_hat.iter().enumerate() {
            debug_assert_eq!(self.apply_l(ah), make_a(Axis::from_index(i)));
        }
        for i in Axis::ALL {
            for j in Axis::ALL {
                let bh = &b_hat[3 * i.index() + j.index()];
                debug_assert_eq!(self.apply_l(bh), make_b(i, j));
            }
        }

        HatSolution {
            a_hat,
            b_hat,
            alpha: alpha.clone(),
            beta: alpha,
        }
    }
}

/// Pre-images of A and B under L, with the scalar multipliers.
#[derive(Clone, Debug)]
pub struct HatSolution {
    /// A_hat_i, i = 1..3.
    pub a_hat: [VelocityPolynomial; 3],
    /// B_hat_ij flattened row-major, 3x3.
    pub b_hat: [VelocityPolynomial; 9],
    pub alpha: Rational,
    pub beta: Rational,
}

impl HatSolution {
    pub fn b_hat(&self, i: Axis, j: Axis) -> &VelocityPolynomial {
        &self.b_hat[3 * i.index() + j.index()]
    }
}

/// Heat conductivity and viscosity of the surrogate model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportCoefficients {
    pub kappa: Rational,
    pub nu: Rational,
}

fn delta(i: Axis, j: Axis) -> Rational {
    if i == j {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// Extract kappa and nu from a hat solution and verify the full tensor
/// identities (9 entries for A, 81 for B) exactly.
pub fn transport_coefficients(hats: &HatSolution) -> Result<TransportCoefficients, ModelError> {
    let kappa = rat(2, 5) * inner_product(&hats.a_hat[0], &make_a(Axis::X));
    let nu = rat(3, 4) * inner_product(hats.b_hat(Axis::X, Axis::X), &make_b(Axis::X, Axis::X));

    for i in Axis::ALL {
        for j in Axis::ALL {
            let got = inner_product(&hats.a_hat[i.index()], &make_a(j));
            let expected = rat(5, 2) * &kappa * delta(i, j);
            if got != expected {
                return Err(ModelError::TensorMismatch {
                    i: i.index() + 1,
                    j: j.index() + 1,
                    k: 0,
                    l: 0,
                    got: got.to_string(),
                    expected: expected.to_string(),
                });
            }
        }
    }
    for i in Axis::ALL {
        for j in Axis::ALL {
            for k in Axis::ALL {
                for l in Axis::ALL {
                    let got = inner_product(hats.b_hat(i, j), &make_b(k, l));
                    let tensor = delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k)
                        - rat(2, 3) * delta(i, j) * delta(k, l);
                    let expected = &nu * tensor;
                    if got != expected {
                        return Err(ModelError::TensorMismatch {
                            i: i.index() + 1,
                            j: j.index() + 1,
                            k: k.index() + 1,
                            l: l.index() + 1,
                            got: got.to_string(),
                            expected: expected.to_string(),
                        });
                    }
                }
            }
        }
    }

    Ok(TransportCoefficients { kappa, nu })
}

/// Which limiting system a scaling pair (r, q) selects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegimeClass {
    /// 0 < r = q < 1: stationary Navier-Stokes-Fourier.
    NavierStokesFourier,
    /// 0 < q < min{1, r}, q != r: stationary Stokes.
    Stokes,
    /// 0 < r < min{1, q}, r != q: stationary Euler.
    Euler,
    /// Everything else (including r, q >= 1 boundaries).
    OutOfScope,
}

/// The scaling pair with its classification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingRegime {
    pub r: f64,
    pub q: f64,
    pub class: RegimeClass,
}

/// Classify (r, q) by the strict inequalities selecting the limit system.
pub fn classify_regime(r: f64, q: f64) -> ScalingRegime {
    let class = if r > 0.0 && q > 0.0 {
        if r == q && r < 1.0 {
            RegimeClass::NavierStokesFourier
        } else if q < 1.0 && q < r {
            RegimeClass::Stokes
        } else if r < 1.0 && r < q {
            RegimeClass::Euler
        } else {
            RegimeClass::OutOfScope
        }
    } else {
        RegimeClass::OutOfScope
    };
    ScalingRegime { r, q, class }
}

/// Exact value of the half-line Gaussian radial moment
/// integral_0^inf r^{2k} e^{-r^2/2} dr, divided by sqrt(2 pi):
/// equals (2k-1)!!/2.
pub fn radial_moment_over_sqrt_2pi(k: u8) -> Rational {
    gaussian_moment(2 * k, 0, 0) * rat(1, 2)
}

/// Exact evaluations of the candidate radial formulas for the transport
/// coefficients, with constant multipliers alpha = beta = 1/nu0.
///
/// `*_tensor` come from the defining tensor identities; `*_printed` are the
/// radial forms as printed (kappa with prefactor 2/15 and integrand r^6,
/// nu with prefactor 1/6 and integrand (r^2-5)^2 r^4); `*_swapped` use the
/// integrands swapped with prefactors 2/15 for nu and 1/15 for kappa.
#[derive(Clone, Debug)]
pub struct RadialFormulaVerdict {
    pub kappa_tensor: Rational,
    pub nu_tensor: Rational,
    pub kappa_printed: Rational,
    pub nu_printed: Rational,
    pub kappa_swapped: Rational,
    pub nu_swapped: Rational,
}

impl RadialFormulaVerdict {
    pub fn printed_consistent(&self) -> (bool, bool) {
        (
            self.kappa_printed == self.kappa_tensor,
            self.nu_printed == self.nu_tensor,
        )
    }

    pub fn swapped_consistent(&self) -> (bool, bool) {
        (
            self.kappa_swapped == self.kappa_tensor,
            self.nu_swapped == self.nu_tensor,
        )
    }
}

/// Evaluate the radial formulas exactly for a given BGK operator.
pub fn radial_formula_verdict(op: &BgkOperator) -> Result<RadialFormulaVerdict, ModelError> {
    let hats = op.solve_hats();
    let coeffs = transport_coefficients(&hats)?;
    let c = Rational::one() / op.nu0();

    // integral r^6 e^{-r^2/2} dr / sqrt(2 pi) = 15/2
    let m3 = radial_moment_over_sqrt_2pi(3);
    // integral (r^2-5)^2 r^4 e^{-r^2/2} dr / sqrt(2 pi)
    //   = (105 - 10*15 + 25*3)/2 = 15
    let m_a = radial_moment_over_sqrt_2pi(4) - rat(10, 1) * radial_moment_over_sqrt_2pi(3)
        + rat(25, 1) * radial_moment_over_sqrt_2pi(2);

    Ok(RadialFormulaVerdict {
        kappa_tensor: coeffs.kappa,
        nu_tensor: coeffs.nu,
        kappa_printed: rat(2, 15) * &c * &m3,
        nu_printed: rat(1, 6) * &c * &m_a,
        kappa_swapped: rat(1, 15) * &c * &m_a,
        nu_swapped: rat(2, 15) * &c * &m3,
    })
}

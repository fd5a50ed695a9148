//! Tensor Gauss-Hermite velocity grid for the weight e^{-|v|^2/2},
//! normalized so the weights sum to one and discrete sums reproduce
//! Maxwellian moments.
//!
//! Nodes are the roots of the probabilists' Hermite polynomial He_N; the
//! 1D rule integrates polynomials of degree <= 2N-1 exactly, and the grid
//! is verified against the exact moment oracle at build time.

use crate::error::KineticError;
use crate::moment_algebra::{
    gaussian_moment, kernel_basis, rational_to_f64, VelocityPolynomial,
};
use crate::Real;

/// Probabilists' Hermite polynomial He_n and its derivative at x.
fn hermite_he<T: Real>(n: usize, x: T) -> (T, T) {
    let mut h_prev = T::one(); // He_0
    let mut h = x; // He_1
    if n == 0 {
        return (h_prev, T::zero());
    }
    for k in 1..n {
        let next = x * h - T::from_usize(k).unwrap() * h_prev;
        h_prev = h;
        h = next;
    }
    // He_n' = n He_{n-1}
    (h, T::from_usize(n).unwrap() * h_prev)
}

/// 1D Gauss-Hermite rule: nodes and weights for the normalized weight
/// e^{-x^2/2}/sqrt(2 pi), so sum(w) = 1.
pub fn gauss_hermite_1d<T: Real>(n: usize) -> Result<(Vec<T>, Vec<T>), KineticError> {
    if n < 1 {
        return Err(KineticError::QuadratureDegeneracy(
            "need at least one node".into(),
        ));
    }
    // All roots of He_n lie in (-2 sqrt(n), 2 sqrt(n)). Scan for sign
    // changes, then polish with Newton.
    let bound = T::from_f64(2.0).unwrap() * T::from_usize(n).unwrap().sqrt()
        + T::from_f64(1.0).unwrap();
    let scan = 200 * n;
    let mut roots: Vec<T> = Vec::with_capacity(n);
    let step = (bound + bound) / T::from_usize(scan).unwrap();
    let mut x_prev = -bound;
    let mut f_prev = hermite_he(n, x_prev).0;
    for i in 1..=scan {
        let x = -bound + step * T::from_usize(i).unwrap();
        let f = hermite_he(n, x).0;
        if f_prev * f < T::zero() || f_prev == T::zero() {
            // Newton from the midpoint, fall back to bisection steps if it
            // leaves the bracket.
            let (mut lo, mut hi) = (x_prev, x);
            let mut r = (lo + hi) * T::from_f64(0.5).unwrap();
            for _ in 0..200 {
                let (v, d) = hermite_he(n, r);
                if v == T::zero() {
                    break;
                }
                if v * f_prev < T::zero() {
                    hi = r;
                } else {
                    lo = r;
                }
                let newton = r - v / d;
                r = if newton > lo && newton < hi {
                    newton
                } else {
                    (lo + hi) * T::from_f64(0.5).unwrap()
                };
                if (hi - lo).abs() <= T::epsilon() * bound {
                    break;
                }
            }
            roots.push(r);
        }
        x_prev = x;
        f_prev = f;
    }
    if roots.len() != n {
        return Err(KineticError::QuadratureDegeneracy(format!(
            "found {} of {} Hermite roots",
            roots.len(),
            n
        )));
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Symmetrize paired roots so odd discrete moments cancel exactly.
    for i in 0..n / 2 {
        let m = (roots[n - 1 - i] - roots[i]) * T::from_f64(0.5).unwrap();
        roots[i] = -m;
        roots[n - 1 - i] = m;
    }
    if n % 2 == 1 {
        roots[n / 2] = T::zero();
    }

    // w_i = (n-1)! / (n * He_{n-1}(x_i)^2) for the unit-mass weight.
    let mut fact = T::one();
    for k in 1..n {
        fact = fact * T::from_usize(k).unwrap();
    }
    let weights: Vec<T> = roots
        .iter()
        .map(|&x| {
            let (h_prev, _) = hermite_he(n - 1, x);
            fact / (T::from_usize(n).unwrap() * h_prev * h_prev)
        })
        .collect();
    Ok((roots, weights))
}

/// Tensor-product velocity grid with Maxwellian-absorbing weights.
#[derive(Clone, Debug)]
pub struct VelocityGrid<T: Real> {
    n: usize,
    nodes: Vec<[T; 3]>,
    weights: Vec<T>,
    projector: KernelProjector<T>,
    max_speed: T,
}

impl<T: Real> VelocityGrid<T> {
    /// Build an N^3 grid, N >= 4 and even, and verify the 1D rule against
    /// the exact oracle for all monomial degrees <= 2N-1.
    pub fn build(n: usize) -> Result<Self, KineticError> {
        if n < 4 || n % 2 != 0 {
            return Err(KineticError::QuadratureDegeneracy(format!(
                "velocity grid needs even N >= 4, got {n}"
            )));
        }
        let (x, w) = gauss_hermite_1d::<T>(n)?;

        // Exactness check against the oracle, relative 1e-13.
        let tol = T::from_f64(1e-13).unwrap();
        for d in 0..(2 * n) {
            let discrete: T = (0..n).map(|i| w[i] * x[i].powi(d as i32)).sum();
            let exact =
                T::from_f64(rational_to_f64(&gaussian_moment(d as u8, 0, 0))).unwrap();
            let scale = T::max(T::one(), exact.abs());
            if (discrete - exact).abs() > tol * scale {
                return Err(KineticError::QuadratureDegeneracy(format!(
                    "1D moment of degree {d} off by {:e}",
                    (discrete - exact).abs()
                )));
            }
        }

        let mut nodes = Vec::with_capacity(n * n * n);
        let mut weights = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    nodes.push([x[i], x[j], x[k]]);
                    weights.push(w[i] * w[j] * w[k]);
                }
            }
        }
        let max_speed = x[n - 1];
        let projector = KernelProjector::build(&nodes, &weights)?;
        Ok(Self {
            n,
            nodes,
            weights,
            projector,
            max_speed,
        })
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[[T; 3]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Largest 1D node magnitude, used for CFL-style time-step choices.
    pub fn max_speed(&self) -> T {
        self.max_speed
    }

    /// Discrete Maxwellian inner product, fixed summation order with
    /// Neumaier compensation: high-degree odd integrands produce huge
    /// terms that must cancel in pairs, and a naive sum leaves a
    /// cancellation residue ~ eps * max|term| far above eps * |result|.
    pub fn inner(&self, a: &[T], b: &[T]) -> T {
        let mut sum = T::zero();
        let mut comp = T::zero();
        for k in 0..self.weights.len() {
            let term = self.weights[k] * a[k] * b[k];
            let t = sum + term;
            comp = comp
                + if sum.abs() >= term.abs() {
                    (sum - t) + term
                } else {
                    (term - t) + sum
                };
            sum = t;
        }
        sum + comp
    }

    /// Discrete moment of samples against a polynomial observable.
    pub fn moment(&self, samples: &[T], observable: &VelocityPolynomial) -> T {
        let obs = self.eval_poly(observable);
        self.inner(samples, &obs)
    }

    /// Sample a polynomial on all grid nodes.
    pub fn eval_poly(&self, p: &VelocityPolynomial) -> Vec<T> {
        self.nodes.iter().map(|&v| p.eval(v)).collect()
    }

    pub fn projector(&self) -> &KernelProjector<T> {
        &self.projector
    }

    /// Gram-matrix orthogonal projection of a velocity vector onto the
    /// discrete span of the collision invariants.
    pub fn discrete_projection(&self, g: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); g.len()];
        self.projector.project_into(g, &mut out);
        out
    }
}

/// Precomputed projection onto the discrete kernel span {1, v, |v|^2}.
#[derive(Clone, Debug)]
pub struct KernelProjector<T: Real> {
    /// Kernel basis sampled on the nodes, 5 rows of length nv.
    basis: Vec<Vec<T>>,
    /// Weighted basis rows w_k e_i(v_k), for fast moment evaluation.
    weighted_basis: Vec<Vec<T>>,
    /// Inverse Gram matrix, 5x5 row-major.
    gram_inv: [[T; 5]; 5],
}

impl<T: Real> KernelProjector<T> {
    fn build(nodes: &[[T; 3]], weights: &[T]) -> Result<Self, KineticError> {
        let basis: Vec<Vec<T>> = kernel_basis()
            .iter()
            .map(|p| nodes.iter().map(|&v| p.eval(v)).collect())
            .collect();
        let weighted_basis: Vec<Vec<T>> = basis
            .iter()
            .map(|row| row.iter().zip(weights).map(|(&e, &w)| e * w).collect())
            .collect();
        let mut gram = [[T::zero(); 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                let mut acc = T::zero();
                for k in 0..nodes.len() {
                    acc = acc + weights[k] * basis[i][k] * basis[j][k];
                }
                gram[i][j] = acc;
            }
        }
        let gram_inv = invert_5x5(gram).ok_or_else(|| {
            KineticError::QuadratureDegeneracy("singular kernel Gram matrix".into())
        })?;
        Ok(Self {
            basis,
            weighted_basis,
            gram_inv,
        })
    }

    /// Discrete kernel moments m_i = <g, e_i>_h.
    pub fn moments(&self, g: &[T]) -> [T; 5] {
        let mut m = [T::zero(); 5];
        for i in 0..5 {
            let row = &self.weighted_basis[i];
            let mut acc = T::zero();
            for k in 0..g.len() {
                acc = acc + row[k] * g[k];
            }
            m[i] = acc;
        }
        m
    }

    /// Write P_h g into `out`.
    pub fn project_into(&self, g: &[T], out: &mut [T]) {
        let m = self.moments(g);
        let mut c = [T::zero(); 5];
        for i in 0..5 {
            let mut acc = T::zero();
            for j in 0..5 {
                acc = acc + self.gram_inv[i][j] * m[j];
            }
            c[i] = acc;
        }
        for x in out.iter_mut() {
            *x = T::zero();
        }
        for i in 0..5 {
            let row = &self.basis[i];
            for k in 0..out.len() {
                out[k] = out[k] + c[i] * row[k];
            }
        }
    }
}

fn invert_5x5<T: Real>(a: [[T; 5]; 5]) -> Option<[[T; 5]; 5]> {
    // Gauss-Jordan with partial pivoting on the augmented system.
    let mut m = [[T::zero(); 10]; 5];
    for i in 0..5 {
        for j in 0..5 {
            m[i][j] = a[i][j];
        }
        m[i][5 + i] = T::one();
    }
    for col in 0..5 {
        let mut piv = col;
        for r in col + 1..5 {
            if m[r][col].abs() > m[piv][col].abs() {
                piv = r;
            }
        }
        if m[piv][col].abs() <= T::epsilon() {
            return None;
        }
        m.swap(col, piv);
        let d = m[col][col];
        for j in 0..10 {
            m[col][j] = m[col][j] / d;
        }
        for r in 0..5 {
            if r != col {
                let f = m[r][col];
                if f != T::zero() {
                    for j in 0..10 {
                        m[r][j] = m[r][j] - f * m[col][j];
                    }
                }
            }
        }
    }
    let mut inv = [[T::zero(); 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            inv[i][j] = m[i][5 + j];
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moment_algebra::{inner_product, make_a, make_b, rat, Axis};

    #[test]
    fn unit_mass_and_variance_n4() {
        let grid = VelocityGrid::<f64>::build(4).unwrap();
        let total: f64 = grid.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
        let v1sq = VelocityPolynomial::monomial([2, 0, 0], rat(1, 1));
        let one = VelocityPolynomial::one();
        let m = grid.moment(&grid.eval_poly(&v1sq), &one);
        assert!((m - 1.0).abs() < 1e-14);
    }

    #[test]
    fn degree_boundary_probe_n4() {
        // Degree 8 exceeds 2N-1 = 7: the rule must NOT reproduce 105.
        let grid = VelocityGrid::<f64>::build(4).unwrap();
        let v1_8 = VelocityPolynomial::monomial([8, 0, 0], rat(1, 1));
        let m = grid.moment(&grid.eval_poly(&v1_8), &VelocityPolynomial::one());
        assert!((m - 105.0).abs() > 1.0, "degree-8 moment unexpectedly exact: {m}");
    }

    #[test]
    fn a1_norm_n8() {
        let grid = VelocityGrid::<f64>::build(8).unwrap();
        let a1 = make_a(Axis::X);
        let s = grid.eval_poly(&a1);
        let m = grid.inner(&s, &s);
        assert!((m - 2.5).abs() < 1e-13, "got {m}");
    }

    #[test]
    fn projection_matches_exact_oracle() {
        let grid = VelocityGrid::<f64>::build(6).unwrap();
        // v1 is fixed.
        let v1 = grid.eval_poly(&VelocityPolynomial::variable(Axis::X));
        let pv1 = grid.discrete_projection(&v1);
        for (a, b) in v1.iter().zip(&pv1) {
            assert!((a - b).abs() < 1e-13);
        }
        // B11 projects to zero.
        let b11 = grid.eval_poly(&make_b(Axis::X, Axis::X));
        for x in grid.discrete_projection(&b11) {
            assert!(x.abs() < 1e-13);
        }
        // v1^2 projects to |v|^2 / 3.
        let v1sq = grid.eval_poly(&VelocityPolynomial::monomial([2, 0, 0], rat(1, 1)));
        let expect =
            grid.eval_poly(&VelocityPolynomial::speed_squared().scale(&rat(1, 3)));
        for (a, b) in grid.discrete_projection(&v1sq).iter().zip(&expect) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn projection_idempotent_and_moment_preserving() {
        let grid = VelocityGrid::<f64>::build(6).unwrap();
        let g = grid.eval_poly(&(make_a(Axis::Y) + VelocityPolynomial::variable(Axis::Z)));
        let pg = grid.discrete_projection(&g);
        let ppg = grid.discrete_projection(&pg);
        for (a, b) in pg.iter().zip(&ppg) {
            assert!((a - b).abs() < 1e-13);
        }
        let m_g = grid.projector().moments(&g);
        let m_pg = grid.projector().moments(&pg);
        for (a, b) in m_g.iter().zip(&m_pg) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn discrete_matches_exact_inner_products_n8() {
        let grid = VelocityGrid::<f64>::build(8).unwrap();
        let polys = [
            make_a(Axis::X),
            make_b(Axis::X, Axis::Y),
            make_b(Axis::Z, Axis::Z),
            VelocityPolynomial::speed_squared(),
        ];
        for p in &polys {
            for q in &polys {
                let exact = rational_to_f64(&inner_product(p, q));
                let d = grid.inner(&grid.eval_poly(p), &grid.eval_poly(q));
                assert!(
                    (d - exact).abs() <= 1e-12 * exact.abs().max(1.0),
                    "{d} vs {exact}"
                );
            }
        }
    }
}

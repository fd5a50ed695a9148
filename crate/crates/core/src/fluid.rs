//! Stationary fluid references on the 2D torus: Stokes, heat diffusion,
//! Navier-Stokes-Fourier by Picard iteration, and Euler residual
//! evaluation. Pressure is recovered spectrally as the Lagrange
//! multiplier of the divergence constraint, never time-stepped.

use num_complex::Complex;

use crate::error::FluidError;
use crate::spectral::{advect, divergence, gradient, leray_project, SpectralField};
use crate::Real;

/// Divergence-free velocity, pressure multiplier, and Boussinesq-paired
/// temperature/density fluctuations (rho = -theta).
#[derive(Clone, Debug)]
pub struct FluidState<T: Real> {
    pub u: [SpectralField<T>; 2],
    pub p: SpectralField<T>,
    pub theta: SpectralField<T>,
    pub rho: SpectralField<T>,
}

impl<T: Real> FluidState<T> {
    pub fn rest(grid: crate::spectral::SpatialGrid) -> Self {
        Self {
            u: [SpectralField::zeros(grid), SpectralField::zeros(grid)],
            p: SpectralField::zeros(grid),
            theta: SpectralField::zeros(grid),
            rho: SpectralField::zeros(grid),
        }
    }
}

fn mean_magnitude<T: Real>(f: &[SpectralField<T>; 2]) -> T {
    let m0 = f[0].coeffs()[(0, 0)];
    let m1 = f[1].coeffs()[(0, 0)];
    (m0.norm_sqr() + m1.norm_sqr()).sqrt()
}

/// Solve the stationary Stokes balance nu Lap u + f = grad p, div u = 0.
///
/// Velocity comes from the solenoidal part of f mode by mode; the gradient
/// part of f is absorbed into p.
pub fn solve_stationary_stokes<T: Real>(
    f: &[SpectralField<T>; 2],
    nu: T,
) -> Result<FluidState<T>, FluidError> {
    let grid = f[0].grid();
    let m = grid.modes_per_axis();
    let mean = mean_magnitude(f);
    if mean > T::from_f64(1e-13).unwrap() {
        return Err(FluidError::SingularMode(
            mean.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let f_sol = leray_project(f);
    let mut state = FluidState::rest(grid);
    for i in 0..m {
        for j in 0..m {
            let kx = T::from_i32(grid.wavenumber(i)).unwrap();
            let ky = T::from_i32(grid.wavenumber(j)).unwrap();
            let k2 = kx * kx + ky * ky;
            if k2 == T::zero() {
                continue;
            }
            let scale = T::one() / (nu * k2);
            state.u[0].coeffs_mut()[(i, j)] = f_sol[0].coeffs()[(i, j)] * scale;
            state.u[1].coeffs_mut()[(i, j)] = f_sol[1].coeffs()[(i, j)] * scale;
            // grad p = f - f_sol: p_hat = -i k . f_hat / |k|^2.
            let fx = f[0].coeffs()[(i, j)];
            let fy = f[1].coeffs()[(i, j)];
            let kdotf = fx * kx + fy * ky;
            state.p.coeffs_mut()[(i, j)] =
                kdotf * Complex::new(T::zero(), -T::one() / k2);
        }
    }
    Ok(state)
}

/// Solve kappa Lap theta + h = 0 with mean-zero theta (h must be mean-zero).
pub fn solve_heat_diffusion<T: Real>(h: &SpectralField<T>, kappa: T) -> SpectralField<T> {
    poisson_neg(h, kappa)
}

/// theta with -kappa Lap theta = rhs, mean pinned to zero.
fn poisson_neg<T: Real>(rhs: &SpectralField<T>, kappa: T) -> SpectralField<T> {
    let grid = rhs.grid();
    let m = grid.modes_per_axis();
    let mut out = SpectralField::zeros(grid);
    for i in 0..m {
        for j in 0..m {
            let kx = T::from_i32(grid.wavenumber(i)).unwrap();
            let ky = T::from_i32(grid.wavenumber(j)).unwrap();
            let k2 = kx * kx + ky * ky;
            if k2 == T::zero() {
                continue;
            }
            out.coeffs_mut()[(i, j)] = rhs.coeffs()[(i, j)] * (T::one() / (kappa * k2));
        }
    }
    out
}

/// PDE residuals of a candidate NSF state: momentum (Leray-projected) and
/// heat.
pub fn nsf_residuals<T: Real>(
    state: &FluidState<T>,
    f: &[SpectralField<T>; 2],
    h: &SpectralField<T>,
    nu: T,
    kappa: T,
) -> (T, T) {
    let conv = [advect(&state.u, &state.u[0]), advect(&state.u, &state.u[1])];
    let visc = [
        state.u[0].dx().dx().add(&state.u[0].dy().dy()),
        state.u[1].dx().dx().add(&state.u[1].dy().dy()),
    ];
    let mom = [
        conv[0].sub(&visc[0].scaled(nu)).sub(&f[0]),
        conv[1].sub(&visc[1].scaled(nu)).sub(&f[1]),
    ];
    let mom_p = leray_project(&mom);
    let r_m = (mom_p[0].l2_norm().powi(2) + mom_p[1].l2_norm().powi(2)).sqrt();

    let lap_theta = state.theta.dx().dx().add(&state.theta.dy().dy());
    let r_h = advect(&state.u, &state.theta)
        .sub(&lap_theta.scaled(kappa))
        .sub(h)
        .l2_norm();
    (r_m, r_h)
}

/// Stationary incompressible Navier-Stokes-Fourier by Picard iteration.
///
/// u <- Stokes(f - P(u . grad u)), theta <- Heat(h - u . grad theta),
/// iterated until the successive-iterate change drops below `tol`. Fails
/// with `NoContraction` if the change does not decrease for 20 consecutive
/// iterations. The returned state has rho = -theta (Boussinesq, mean
/// pinned to zero) and both PDE residuals below 10 * tol.
pub fn solve_stationary_nsf<T: Real>(
    f: &[SpectralField<T>; 2],
    h: &SpectralField<T>,
    nu: T,
    kappa: T,
    tol: T,
) -> Result<FluidState<T>, FluidError> {
    let grid = f[0].grid();
    let mut state = FluidState::rest(grid);
    let mut best_change = T::infinity();
    let mut stale = 0usize;
    let max_iters = 10_000usize;

    for iter in 0..max_iters {
        let conv = [advect(&state.u, &state.u[0]), advect(&state.u, &state.u[1])];
        let conv_p = leray_project(&conv);
        let f_eff = [f[0].sub(&conv_p[0]), f[1].sub(&conv_p[1])];
        let next = solve_stationary_stokes(&f_eff, nu)?;

        let h_eff = h.sub(&advect(&state.u, &state.theta));
        let mut theta = solve_heat_diffusion(&h_eff, kappa);
        theta.set_mean_zero();

        let change = (next.u[0].sub(&state.u[0]).l2_norm().powi(2)
            + next.u[1].sub(&state.u[1]).l2_norm().powi(2)
            + theta.sub(&state.theta).l2_norm().powi(2))
        .sqrt();

        state.u = next.u;
        state.p = next.p;
        state.theta = theta;

        if change < tol {
            state.rho = state.theta.scaled(-T::one());
            let (r_m, r_h) = nsf_residuals(&state, f, h, nu, kappa);
            let bound = T::from_f64(10.0).unwrap() * tol;
            debug_assert!(r_m < bound && r_h < bound, "picard residuals too large");
            return Ok(state);
        }
        if change < best_change {
            best_change = change;
            stale = 0;
        } else {
            stale += 1;
            if stale >= 20 {
                return Err(FluidError::NoContraction {
                    iterations: iter + 1,
                    change: change.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
    }
    Err(FluidError::NoContraction {
        iterations: max_iters,
        change: best_change.to_f64().unwrap_or(f64::NAN),
    })
}

/// Residuals of the stationary Euler system for given limit forcings:
/// (|P(u . grad u - f)|_2, |u . grad theta - h|_2).
pub fn euler_residual<T: Real>(
    u: &[SpectralField<T>; 2],
    theta: &SpectralField<T>,
    f: &[SpectralField<T>; 2],
    h: &SpectralField<T>,
) -> (T, T) {
    let conv = [
        advect(u, &u[0]).sub(&f[0]),
        advect(u, &u[1]).sub(&f[1]),
    ];
    let proj = leray_project(&conv);
    let r_m = (proj[0].l2_norm().powi(2) + proj[1].l2_norm().powi(2)).sqrt();
    let r_h = advect(u, theta).sub(h).l2_norm();
    (r_m, r_h)
}

/// Check div u and the Boussinesq pairing of a state.
pub fn boussinesq_residuals<T: Real>(state: &FluidState<T>) -> (T, T) {
    let div = divergence(&state.u).l2_norm();
    let sum = state.rho.add(&state.theta);
    let grad = gradient(&sum);
    let g = (grad[0].l2_norm().powi(2) + grad[1].l2_norm().powi(2)).sqrt();
    (div, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpatialGrid;

    fn grid() -> SpatialGrid {
        SpatialGrid::new(32)
    }

    fn shear_forcing(g: SpatialGrid, a: f64) -> [SpectralField<f64>; 2] {
        [
            SpectralField::from_fn(g, move |_: f64, y: f64| a * y.sin()),
            SpectralField::zeros(g),
        ]
    }

    #[test]
    fn stokes_zero_forcing() {
        let g = grid();
        let f = [SpectralField::<f64>::zeros(g), SpectralField::zeros(g)];
        let s = solve_stationary_stokes(&f, 1.0).unwrap();
        assert!(s.u[0].l2_norm() < 1e-15);
        assert!(s.u[1].l2_norm() < 1e-15);
    }

    #[test]
    fn stokes_single_mode_and_linearity() {
        let g = grid();
        let f = shear_forcing(g, 1.0);
        let s1 = solve_stationary_stokes(&f, 1.0).unwrap();
        // |k|^2 = 1: u = f.
        assert!(s1.u[0].sub(&f[0]).l2_norm() < 1e-12);
        let s2 = solve_stationary_stokes(&f, 2.0).unwrap();
        assert!(s2.u[0].sub(&s1.u[0].scaled(0.5)).l2_norm() < 1e-12);

        // Residual check: nu Lap u + f - grad p ~ 0.
        let lap = s1.u[0].dx().dx().add(&s1.u[0].dy().dy());
        let res = lap.add(&f[0]).sub(&s1.p.dx());
        assert!(res.l2_norm() < 1e-12);
    }

    #[test]
    fn stokes_rejects_mean_forcing() {
        let g = grid();
        let f = [
            SpectralField::<f64>::from_fn(g, |_, _| 0.5),
            SpectralField::zeros(g),
        ];
        assert!(matches!(
            solve_stationary_stokes(&f, 1.0),
            Err(FluidError::SingularMode(_))
        ));
    }

    #[test]
    fn stokes_energy_identity() {
        let g = grid();
        let f = [
            SpectralField::<f64>::from_fn(g, |x, y| (y).sin() + (2.0 * y).cos() * x.sin()),
            SpectralField::<f64>::from_fn(g, |x, y| (x).sin() * (y).cos()),
        ];
        let f = leray_project(&f);
        let nu = 0.7;
        let s = solve_stationary_stokes(&f, nu).unwrap();
        // nu |grad u|^2 = <f, u> (all RMS-normalized, consistent on both sides).
        let mut grad_sq = 0.0;
        for c in 0..2 {
            grad_sq += s.u[c].dx().l2_norm().powi(2) + s.u[c].dy().l2_norm().powi(2);
        }
        let mut f_dot_u = 0.0;
        for c in 0..2 {
            let pf = f[c].to_physical();
            let pu = s.u[c].to_physical();
            let n = pf.len() as f64;
            f_dot_u += pf.iter().zip(pu.iter()).map(|(a, b)| a * b).sum::<f64>() / n;
        }
        assert!(
            (nu * grad_sq - f_dot_u).abs() <= 1e-10 * f_dot_u.abs().max(1e-30),
            "{} vs {}",
            nu * grad_sq,
            f_dot_u
        );
    }

    #[test]
    fn nsf_zero_forcing_is_rest() {
        let g = grid();
        let f = [SpectralField::<f64>::zeros(g), SpectralField::zeros(g)];
        let h = SpectralField::zeros(g);
        let s = solve_stationary_nsf(&f, &h, 1.0, 1.0, 1e-12).unwrap();
        assert!(s.u[0].l2_norm() < 1e-11);
        assert!(s.theta.l2_norm() < 1e-11);
    }

    #[test]
    fn nsf_shear_equals_stokes_exactly() {
        // For unidirectional shear forcing u . grad u = 0, so the NSF
        // velocity coincides with the Stokes velocity.
        let g = grid();
        let f = shear_forcing(g, 0.05);
        let h = SpectralField::<f64>::from_fn(g, |x, _| 0.02 * x.sin());
        let nsf = solve_stationary_nsf(&f, &h, 1.0, 1.0, 1e-13).unwrap();
        let stokes = solve_stationary_stokes(&f, 1.0).unwrap();
        assert!(nsf.u[0].sub(&stokes.u[0]).l2_norm() < 1e-11);
        assert!(nsf.u[1].l2_norm() < 1e-11);
        // theta is advected, so it differs from pure diffusion at O(a^2),
        // but satisfies the PDE residual.
        let (rm, rh) = nsf_residuals(&nsf, &f, &h, 1.0, 1.0);
        assert!(rm < 1e-11 && rh < 1e-11, "rm={rm} rh={rh}");
    }

    #[test]
    fn nsf_approaches_stokes_quadratically() {
        let g = grid();
        // Non-shear solenoidal forcing so the nonlinearity is active.
        let psi = SpectralField::<f64>::from_fn(g, |x, y| x.sin() * y.sin());
        let make_f = |a: f64| [psi.dy().scaled(a), psi.dx().scaled(-a)];
        let h = SpectralField::<f64>::from_fn(g, |x, _| 0.0 * x);
        let mut gaps = Vec::new();
        for &a in &[0.2, 0.1] {
            let f = make_f(a);
            let nsf = solve_stationary_nsf(&f, &h, 1.0, 1.0, 1e-13).unwrap();
            let st = solve_stationary_stokes(&f, 1.0).unwrap();
            let gap = (nsf.u[0].sub(&st.u[0]).l2_norm().powi(2)
                + nsf.u[1].sub(&st.u[1]).l2_norm().powi(2))
            .sqrt();
            gaps.push(gap / a);
        }
        // gap/a should drop by ~2x when a halves (gap = O(a^2)).
        assert!(gaps[1] < 0.6 * gaps[0], "gaps: {gaps:?}");
    }

    #[test]
    fn nonlinear_term_is_energy_neutral() {
        let g = grid();
        let psi = SpectralField::<f64>::from_fn(g, |x, y| x.sin() * y.sin() + (2.0 * y).cos());
        let u = leray_project(&[psi.dy(), psi.dx().scaled(-1.0)]);
        let conv = leray_project(&[advect(&u, &u[0]), advect(&u, &u[1])]);
        let mut dot = 0.0;
        let mut scale = 0.0;
        for c in 0..2 {
            let pc = conv[c].to_physical();
            let pu = u[c].to_physical();
            let n = pc.len() as f64;
            dot += pc.iter().zip(pu.iter()).map(|(a, b)| a * b).sum::<f64>() / n;
            scale += pc.iter().map(|a| a * a).sum::<f64>() / n;
        }
        assert!(dot.abs() <= 1e-10 * scale.sqrt().max(1e-30), "dot={dot}");
    }

    #[test]
    fn euler_residual_examples() {
        let g = grid();
        let zero2 = [SpectralField::<f64>::zeros(g), SpectralField::zeros(g)];
        let zero = SpectralField::zeros(g);
        let (rm, rh) = euler_residual(&zero2, &zero, &zero2, &zero);
        assert!(rm == 0.0 && rh == 0.0);

        // Shear flow: u . grad u = 0.
        let shear = [
            SpectralField::<f64>::from_fn(g, |_, y| y.sin()),
            SpectralField::zeros(g),
        ];
        let (rm, _) = euler_residual(&shear, &zero, &zero2, &zero);
        assert!(rm < 1e-12);

        // Stream-function transport: theta = psi is constant on
        // streamlines of u = perp grad psi.
        let psi = SpectralField::<f64>::from_fn(g, |x, y| (x + y).sin());
        let u = [psi.dy(), psi.dx().scaled(-1.0)];
        let (_, rh) = euler_residual(&u, &psi, &zero2, &zero);
        assert!(rh < 1e-12, "rh={rh}");
    }
}

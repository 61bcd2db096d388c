//! Implicit theta-scheme machinery for one-dimensional linear parabolic
//! problems u_t = k2(s) u_ss + k1(s) u_s + k0(s) u + q on a log-radial grid.
//!
//! The default theta = 1 (backward Euler) makes the step operator an
//! M-matrix inverse on these grids, so discrete maximum principles and
//! kernel positivity hold to rounding instead of failing at large steps.

use crate::grid::RadialGrid;

/// Tridiagonal system a_i u_{i-1} + b_i u_i + c_i u_{i+1} = d_i.
#[derive(Debug, Clone)]
pub struct Tridiag {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl Tridiag {
    pub fn zeros(n: usize) -> Self {
        Tridiag { a: vec![0.0; n], b: vec![0.0; n], c: vec![0.0; n] }
    }

    /// Thomas algorithm; overwrites d with the solution.
    pub fn solve(&self, d: &mut [f64]) {
        let n = self.b.len();
        assert_eq!(d.len(), n);
        let mut cp = vec![0.0; n];
        cp[0] = self.c[0] / self.b[0];
        d[0] /= self.b[0];
        for i in 1..n {
            let m = self.b[i] - self.a[i] * cp[i - 1];
            cp[i] = self.c[i] / m;
            d[i] = (d[i] - self.a[i] * d[i - 1]) / m;
        }
        for i in (0..n - 1).rev() {
            d[i] -= cp[i] * d[i + 1];
        }
    }
}

/// Spatial operator L u = k2 u_ss + k1 u_s + k0 u with node-wise
/// coefficients in s = ln r.
#[derive(Debug, Clone)]
pub struct Operator1D {
    pub k2: Vec<f64>,
    pub k1: Vec<f64>,
    pub k0: Vec<f64>,
    pub ds: f64,
}

impl Operator1D {
    /// Radial Laplacian in real dimension mu on the log grid:
    /// Delta_mu = d_rr + (mu-1)/r d_r = e^{-2s} (d_ss + (mu-2) d_s).
    pub fn delta_mu(grid: &RadialGrid, mu: f64) -> Self {
        let w: Vec<f64> = grid.s().iter().map(|s| (-2.0 * s).exp()).collect();
        Operator1D {
            k2: w.clone(),
            k1: w.iter().map(|x| (mu - 2.0) * x).collect(),
            k0: vec![0.0; grid.len()],
            ds: grid.ds(),
        }
    }

    /// Spatial part of -box_nu: d_rr + r^{-1} d_r - nu^2 r^{-2}
    /// = e^{-2s} (d_ss - nu^2).
    pub fn box_nu_spatial(grid: &RadialGrid, nu: f64) -> Self {
        let w: Vec<f64> = grid.s().iter().map(|s| (-2.0 * s).exp()).collect();
        Operator1D {
            k2: w.clone(),
            k1: vec![0.0; grid.len()],
            k0: w.iter().map(|x| -nu * nu * x).collect(),
            ds: grid.ds(),
        }
    }

    /// Stencil weights (sub, diag, super) of L at interior node i.
    pub fn stencil(&self, i: usize) -> (f64, f64, f64) {
        let inv2 = 1.0 / (self.ds * self.ds);
        let inv1 = 1.0 / (2.0 * self.ds);
        (
            self.k2[i] * inv2 - self.k1[i] * inv1,
            -2.0 * self.k2[i] * inv2 + self.k0[i],
            self.k2[i] * inv2 + self.k1[i] * inv1,
        )
    }

    /// Apply L at interior nodes; boundary entries are left as zero.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let n = u.len();
        let mut out = vec![0.0; n];
        for i in 1..n - 1 {
            let (a, b, c) = self.stencil(i);
            out[i] = a * u[i - 1] + b * u[i] + c * u[i + 1];
        }
        out
    }
}

/// Boundary conditions for a single time step.
#[derive(Clone, Copy)]
pub enum Bc<'a> {
    /// u = g(t) at the boundary node.
    Dirichlet(&'a dyn Fn(f64) -> f64),
    /// u_boundary = factor * u_neighbour (corotational origin proxy).
    Linked(f64),
}

/// One theta-scheme step of u_t = L u + q from t0 to t0 + dt, in place.
///
/// `source` gives q at (node, time); pass None for the homogeneous problem.
pub fn theta_step(
    op: &Operator1D,
    u: &mut [f64],
    t0: f64,
    dt: f64,
    theta: f64,
    bc_lo: Bc,
    bc_hi: Bc,
    source: Option<&dyn Fn(usize, f64) -> f64>,
) {
    let n = u.len();
    let t1 = t0 + dt;
    let mut mat = Tridiag::zeros(n);
    let mut rhs = vec![0.0; n];

    // interior rows: (I - theta dt L) u^{n+1} = u^n + (1-theta) dt L u^n + dt q
    for i in 1..n - 1 {
        let (a, b, c) = op.stencil(i);
        mat.a[i] = -theta * dt * a;
        mat.b[i] = 1.0 - theta * dt * b;
        mat.c[i] = -theta * dt * c;
        let expl = if theta < 1.0 {
            (1.0 - theta) * dt * (a * u[i - 1] + b * u[i] + c * u[i + 1])
        } else {
            0.0
        };
        let q = match source {
            Some(f) => dt * ((1.0 - theta) * f(i, t0) + theta * f(i, t1)),
            None => 0.0,
        };
        rhs[i] = u[i] + expl + q;
    }

    match bc_lo {
        Bc::Dirichlet(g) => {
            mat.b[0] = 1.0;
            rhs[0] = g(t1);
        }
        Bc::Linked(factor) => {
            mat.b[0] = 1.0;
            mat.c[0] = -factor;
            rhs[0] = 0.0;
        }
    }
    match bc_hi {
        Bc::Dirichlet(g) => {
            mat.b[n - 1] = 1.0;
            rhs[n - 1] = g(t1);
        }
        Bc::Linked(factor) => {
            mat.b[n - 1] = 1.0;
            mat.a[n - 1] = -factor;
            rhs[n - 1] = 0.0;
        }
    }

    mat.solve(&mut rhs);
    u.copy_from_slice(&rhs);
}

/// Substep plan between save times: geometric ramp from dt0 up to dt_max.
/// Used to resolve rough initial data while keeping long runs cheap.
pub fn ramped_substeps(t_from: f64, t_to: f64, dt0: f64, dt_max: f64) -> Vec<f64> {
    assert!(t_to > t_from);
    let span = t_to - t_from;
    let mut ts = Vec::new();
    let mut t = t_from;
    let mut dt = dt0.min(dt_max).min(span);
    while t < t_to - 1e-15 * span.max(1.0) {
        let remaining = t_to - t;
        let step = dt.min(remaining);
        t += step;
        ts.push(t);
        dt = (dt * 1.25).min(dt_max);
    }
    if let Some(last) = ts.last_mut() {
        *last = t_to;
    }
    ts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thomas_solves_small_system() {
        // [2 1 0; 1 2 1; 0 1 2] x = [4; 8; 8] -> x = [1; 2; 3]
        let m = Tridiag {
            a: vec![0.0, 1.0, 1.0],
            b: vec![2.0, 2.0, 2.0],
            c: vec![1.0, 1.0, 0.0],
        };
        let mut d = vec![4.0, 8.0, 8.0];
        m.solve(&mut d);
        for (got, want) in d.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn heat_step_preserves_discrete_steady_state() {
        // the discrete harmonic profile (L u = 0 with u(rho)=1, u(R)=0) is
        // an exact fixed point of the theta step
        let grid = RadialGrid::log_uniform(0.1, 1.0, 201);
        let mu = 3.0;
        let op = Operator1D::delta_mu(&grid, mu);
        let n = grid.len();
        let mut sys = Tridiag::zeros(n);
        let mut prof = vec![0.0; n];
        for i in 1..n - 1 {
            let (a, b, c) = op.stencil(i);
            sys.a[i] = a;
            sys.b[i] = b;
            sys.c[i] = c;
        }
        sys.b[0] = 1.0;
        prof[0] = 1.0;
        sys.b[n - 1] = 1.0;
        prof[n - 1] = 0.0;
        sys.solve(&mut prof);
        // sanity: close to the continuum harmonic profile
        let cont = |r: f64| (r.powf(2.0 - mu) - 1.0) / (0.1f64.powf(2.0 - mu) - 1.0);
        let dev = grid
            .r()
            .iter()
            .zip(&prof)
            .map(|(&r, &u)| (u - cont(r)).abs())
            .fold(0.0_f64, f64::max);
        assert!(dev < 1e-4, "discrete harmonic profile off by {dev}");

        let mut u = prof.clone();
        let one = |_t: f64| 1.0;
        let zero = |_t: f64| 0.0;
        for k in 0..50 {
            theta_step(&op, &mut u, k as f64 * 1e-3, 1e-3, 1.0, Bc::Dirichlet(&one), Bc::Dirichlet(&zero), None);
        }
        let drift = u
            .iter()
            .zip(&prof)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        assert!(drift < 1e-12, "steady profile drifted by {drift}");
    }

    #[test]
    fn backward_euler_respects_maximum_principle() {
        // positive bump, zero boundaries: solution stays in [0, max(initial)]
        let grid = RadialGrid::log_uniform(0.05, 1.0, 301);
        let op = Operator1D::delta_mu(&grid, 2.5);
        let mut u: Vec<f64> = grid
            .s()
            .iter()
            .map(|s| (-(s + 1.5) * (s + 1.5) / 0.02).exp())
            .collect();
        let n = u.len();
        u[0] = 0.0;
        u[n - 1] = 0.0;
        let m0 = u.iter().cloned().fold(0.0_f64, f64::max);
        let zero = |_t: f64| 0.0;
        for k in 0..40 {
            theta_step(&op, &mut u, k as f64 * 0.01, 0.01, 1.0, Bc::Dirichlet(&zero), Bc::Dirichlet(&zero), None);
            let hi = u.iter().cloned().fold(f64::MIN, f64::max);
            let lo = u.iter().cloned().fold(f64::MAX, f64::min);
            assert!(hi <= m0 + 1e-12 && lo >= -1e-12);
        }
    }

    #[test]
    fn ramp_covers_interval() {
        let ts = ramped_substeps(0.0, 1.0, 1e-4, 0.05);
        assert!((ts.last().unwrap() - 1.0).abs() < 1e-12);
        let mut prev = 0.0;
        for &t in &ts {
            assert!(t > prev);
            prev = t;
        }
    }
}

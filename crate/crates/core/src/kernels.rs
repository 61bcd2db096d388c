//! Radial heat kernel in real dimension mu > 1 and its associated solution
//! operators on an annulus [rho, R].
//!
//! The kernel is H(r,s,t) = c_mu t^{-mu/2} exp(-(r-s)^2/4t) I1(rs/2t) with
//! I1(x) = exp(-x) I(x) the scaled angular integral
//! I(x) = int_0^pi exp(x cos th) sin^{mu-2} th dth. Everything downstream
//! (Dirichlet solution operator, boundary kernel G, envelope checks) is
//! built from I1 and an implicit theta-scheme on a log-radial grid; the
//! Dirichlet kernel itself is never materialised.

use crate::field::{FieldManifest, KernelField};
use crate::grid::RadialGrid;
use crate::quad::{tanh_sinh, GaussJacobi};
use crate::stepper::{ramped_substeps, theta_step, Bc, Operator1D};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Switch point between the angular-integral form and the
/// u = sqrt(x(1-cos th)) substitution form of I1.
const I_SWITCH: f64 = 50.0;

#[derive(Debug, thiserror::Error)]
pub enum KernelError {
    #[error("mu must exceed 1 (the angular integral diverges at the endpoints): got {0}")]
    MuOutOfRange(f64),
    #[error("time must be positive: got {0}")]
    NonPositiveTime(f64),
    #[error("weight w^a is undefined at r = 0, t = 0")]
    WeightAtOrigin,
    #[error("solution operators require rho > 0 (the operator is singular at the origin)")]
    SingularOrigin,
    #[error("invalid domain: rho = {rho}, r_outer = {r_outer}")]
    BadDomain { rho: f64, r_outer: f64 },
    #[error("save times must start at 0 and be strictly increasing")]
    BadTimes,
}

/// Exponent container for the parabolic weight w^a(r,t) = (r^2/(r^2+t))^{a/2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightExponent {
    pub a: f64,
}

/// Parabolic weight w^a(r,t) = (r^2/(r^2+t))^{a/2}; equals 1 at t = 0 and
/// is non-increasing in t for a > 0.
pub fn weight_w(a: WeightExponent, r: f64, t: f64) -> Result<f64, KernelError> {
    if r == 0.0 && t == 0.0 {
        return Err(KernelError::WeightAtOrigin);
    }
    Ok((r * r / (r * r + t)).powf(a.a / 2.0))
}

struct IRules {
    /// Gauss-Jacobi in c = cos th with weight (1-c^2)^{(mu-3)/2}.
    angular: GaussJacobi,
    /// Gauss-Jacobi on [-1,1] with weight (1+c)^{mu-2}, mapped to u in [0,U].
    tail: GaussJacobi,
}

fn rules_for(mu: f64) -> Arc<IRules> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<IRules>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = mu.to_bits();
    let mut guard = cache.lock().unwrap();
    guard
        .entry(key)
        .or_insert_with(|| {
            Arc::new(IRules {
                angular: GaussJacobi::new(200, (mu - 3.0) / 2.0, (mu - 3.0) / 2.0),
                tail: GaussJacobi::new(160, 0.0, mu - 2.0),
            })
        })
        .clone()
}

/// Scaled angular integral I1(x) = exp(-x) I(x)
/// = int_0^pi exp(x(cos th - 1)) sin^{mu-2} th dth.
///
/// Strictly decreasing in x; I1(0) = B(1/2, (mu-1)/2). Evaluated in the
/// scaled form throughout so nothing overflows at large x.
pub fn eval_i_scaled(x: f64, mu: f64) -> Result<f64, KernelError> {
    if !(mu > 1.0) {
        return Err(KernelError::MuOutOfRange(mu));
    }
    assert!(x >= 0.0, "eval_i_scaled requires x >= 0, got {x}");
    let rules = rules_for(mu);
    if x <= I_SWITCH {
        // substitute c = cos th: integral of exp(x(c-1)) against the
        // Jacobi weight (1-c^2)^{(mu-3)/2}
        Ok(rules.angular.integrate(|c| (x * (c - 1.0)).exp()))
    } else {
        // u = sqrt(x (1 - cos th)):
        // I1 = 2 x^{-(mu-1)/2} int_0^U exp(-u^2) u^{mu-2} (2 - u^2/x)^{(mu-3)/2} du
        // truncated at U = 9 (exp(-81) is below double noise)
        let u_max = 9.0_f64.min((2.0 * x).sqrt());
        let half = 0.5 * u_max;
        let pow = (half).powf(mu - 1.0);
        let integral = rules.tail.integrate(|c| {
            let u = half * (c + 1.0);
            (-u * u).exp() * (2.0 - u * u / x).powf((mu - 3.0) / 2.0)
        });
        Ok(2.0 * x.powf(-(mu - 1.0) / 2.0) * pow * integral)
    }
}

/// Real dimension, annulus, and normalisation for the radial heat kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub mu: f64,
    pub rho: f64,
    pub r_outer: f64,
    pub c_mu: f64,
}

impl KernelParams {
    /// Validates the domain and fixes c_mu by the unit-mass condition
    /// int H s^{mu-1} ds = 1, computed once by adaptive quadrature at a
    /// reference point.
    pub fn new(mu: f64, rho: f64, r_outer: f64) -> Result<Self, KernelError> {
        if !(mu > 1.0) {
            return Err(KernelError::MuOutOfRange(mu));
        }
        if !(rho >= 0.0 && r_outer > rho) {
            return Err(KernelError::BadDomain { rho, r_outer });
        }
        let c_mu = 1.0 / unnormalized_mass(mu, 1.0, 0.25)?;
        Ok(KernelParams { mu, rho, r_outer, c_mu })
    }

    pub fn manifest(
        &self,
        grid: &RadialGrid,
        tolerances: std::collections::BTreeMap<String, f64>,
    ) -> FieldManifest {
        FieldManifest {
            mu: self.mu,
            rho: self.rho,
            r_outer: self.r_outer,
            c_mu: self.c_mu,
            grid: grid.spec(),
            tolerances,
        }
    }
}

/// int_0^inf t^{-mu/2} exp(-(r-s)^2/4t) I1(rs/2t) s^{mu-1} ds — the kernel
/// mass with c_mu left out.
pub fn unnormalized_mass(mu: f64, r: f64, t: f64) -> Result<f64, KernelError> {
    if !(t > 0.0) {
        return Err(KernelError::NonPositiveTime(t));
    }
    let s_max = r + 42.0 * t.sqrt();
    let f = |s: f64| {
        let x = r * s / (2.0 * t);
        let i1 = eval_i_scaled(x, mu).expect("mu validated");
        t.powf(-mu / 2.0) * (-(r - s) * (r - s) / (4.0 * t)).exp() * i1 * s.powf(mu - 1.0)
    };
    Ok(tanh_sinh(f, 0.0, s_max, 1e-12))
}

/// The radial heat kernel H(r,s,t); symmetric in (r,s), strictly positive
/// for r,s,t > 0, and unit mass against s^{mu-1} ds.
pub fn eval_h(r: f64, s: f64, t: f64, params: &KernelParams) -> Result<f64, KernelError> {
    if !(t > 0.0) {
        return Err(KernelError::NonPositiveTime(t));
    }
    assert!(r >= 0.0 && s >= 0.0);
    let x = r * s / (2.0 * t);
    let i1 = eval_i_scaled(x, params.mu)?;
    Ok(params.c_mu * t.powf(-params.mu / 2.0) * (-(r - s) * (r - s) / (4.0 * t)).exp() * i1)
}

/// Ratio of H to the two-sided envelope
/// t^{-1/2} (rs + t)^{-(mu-1)/2} exp(-(r-s)^2/4t).
///
/// The Gaussian factor cancels algebraically, so the ratio reduces to
/// c_mu I1(x) (1+2x)^{(mu-1)/2} with x = rs/2t and never under/overflows.
pub fn sandwich_ratio(r: f64, s: f64, t: f64, params: &KernelParams) -> Result<f64, KernelError> {
    if !(t > 0.0) {
        return Err(KernelError::NonPositiveTime(t));
    }
    let x = r * s / (2.0 * t);
    let i1 = eval_i_scaled(x, params.mu)?;
    Ok(params.c_mu * i1 * (1.0 + 2.0 * x).powf((params.mu - 1.0) / 2.0))
}

/// Bracket of the sandwich ratio over a log-uniform (r,s,t) box.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub mu: f64,
    pub lower: f64,
    pub upper: f64,
    pub samples: usize,
}

/// Sweeps H / envelope over a log-uniform box. Lemma-type content: the
/// ratio stays inside a fixed positive bracket [lower, upper].
pub fn check_h_sandwich(
    params: &KernelParams,
    range_r: (f64, f64),
    range_s: (f64, f64),
    range_t: (f64, f64),
    n_per_axis: usize,
) -> Result<SandwichReport, KernelError> {
    let axis = |lo: f64, hi: f64| -> Vec<f64> {
        (0..n_per_axis)
            .map(|i| {
                let f = i as f64 / (n_per_axis - 1) as f64;
                (lo.ln() + f * (hi / lo).ln()).exp()
            })
            .collect()
    };
    let (mut lower, mut upper) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut samples = 0;
    for &r in &axis(range_r.0, range_r.1) {
        for &s in &axis(range_s.0, range_s.1) {
            for &t in &axis(range_t.0, range_t.1) {
                let ratio = sandwich_ratio(r, s, t, params)?;
                lower = lower.min(ratio);
                upper = upper.max(ratio);
                samples += 1;
            }
        }
    }
    Ok(SandwichReport { mu: params.mu, lower, upper, samples })
}

/// Options for the implicit solution operators.
#[derive(Debug, Clone, Copy)]
pub struct SolveOpts {
    /// Theta of the time scheme; 1.0 = backward Euler (default, inverse
    /// positive), 0.5 = Crank-Nicolson (second order, used where accuracy
    /// is checked against quadrature oracles).
    pub theta: f64,
    /// First substep of the geometric ramp after each save time.
    pub dt0: f64,
    /// Substep ceiling.
    pub dt_max: f64,
}

impl Default for SolveOpts {
    fn default() -> Self {
        SolveOpts { theta: 1.0, dt0: 1e-7, dt_max: 1e-3 }
    }
}

impl SolveOpts {
    /// One implicit substep per save interval; appropriate when the save
    /// times themselves form the ramp (geometric grids).
    pub fn per_save() -> Self {
        SolveOpts { theta: 1.0, dt0: f64::INFINITY, dt_max: f64::INFINITY }
    }
}

/// Evenly spaced save times [0, t_end] with n_steps intervals.
pub fn uniform_times(t_end: f64, n_steps: usize) -> Vec<f64> {
    (0..=n_steps)
        .map(|i| t_end * i as f64 / n_steps as f64)
        .collect()
}

fn validate_solver_domain(params: &KernelParams, times: &[f64]) -> Result<(), KernelError> {
    if params.rho <= 0.0 {
        return Err(KernelError::SingularOrigin);
    }
    if times.len() < 2 || times[0] != 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(KernelError::BadTimes);
    }
    Ok(())
}

/// Initial-value problem for d_t - Delta_mu on [rho, R] with zero Dirichlet
/// data: v(., 0) = phi, v(rho, t) = v(R, t) = 0. Realised as an implicit
/// solution operator on the log grid; the row at each save time is the
/// discrete solution there.
pub fn solve_ivp(
    phi: &dyn Fn(f64) -> f64,
    params: &KernelParams,
    grid: &RadialGrid,
    times: &[f64],
    opts: &SolveOpts,
) -> Result<KernelField, KernelError> {
    validate_solver_domain(params, times)?;
    let op = Operator1D::delta_mu(grid, params.mu);
    let zero = |_t: f64| 0.0;
    let mut u: Vec<f64> = grid.r().iter().map(|&r| phi(r)).collect();
    let mut field = KernelField::zeros(grid.clone(), times.to_vec());
    field.row_mut(0).copy_from_slice(&u);
    let mut t = 0.0;
    for (j, &t_save) in times.iter().enumerate().skip(1) {
        for t_next in ramped_substeps(t, t_save, opts.dt0, opts.dt_max) {
            let dt = t_next - t;
            theta_step(
                &op,
                &mut u,
                t,
                dt,
                opts.theta,
                Bc::Dirichlet(&zero),
                Bc::Dirichlet(&zero),
                None,
            );
            t = t_next;
        }
        field.row_mut(j).copy_from_slice(&u);
    }
    Ok(field)
}

/// Boundary problem: v(rho, t) = psi(t), v(R, t) = 0, v(., 0) = 0.
pub fn solve_boundary(
    psi: &dyn Fn(f64) -> f64,
    params: &KernelParams,
    grid: &RadialGrid,
    times: &[f64],
    opts: &SolveOpts,
) -> Result<KernelField, KernelError> {
    validate_solver_domain(params, times)?;
    let op = Operator1D::delta_mu(grid, params.mu);
    let zero = |_t: f64| 0.0;
    let mut u = vec![0.0; grid.len()];
    let mut field = KernelField::zeros(grid.clone(), times.to_vec());
    let mut t = 0.0;
    for (j, &t_save) in times.iter().enumerate().skip(1) {
        for t_next in ramped_substeps(t, t_save, opts.dt0, opts.dt_max) {
            let dt = t_next - t;
            theta_step(
                &op,
                &mut u,
                t,
                dt,
                opts.theta,
                Bc::Dirichlet(&psi),
                Bc::Dirichlet(&zero),
                None,
            );
            t = t_next;
        }
        field.row_mut(j).copy_from_slice(&u);
    }
    Ok(field)
}

/// Harmonic profile with h(rho) = 1, h(R) = 0:
/// h(r) = (r^{2-mu} - R^{2-mu}) / (rho^{2-mu} - R^{2-mu}), with the
/// logarithmic branch ln(R/r)/ln(R/rho) when |mu - 2| < 1e-6 (the power
/// form degenerates there).
pub fn boundary_profile_h(r: f64, params: &KernelParams) -> Result<f64, KernelError> {
    if params.rho <= 0.0 {
        return Err(KernelError::SingularOrigin);
    }
    let (mu, rho, rr) = (params.mu, params.rho, params.r_outer);
    assert!(r >= rho * (1.0 - 1e-12) && r <= rr * (1.0 + 1e-12), "r outside [rho, R]");
    if (mu - 2.0).abs() < 1e-6 {
        Ok((rr / r).ln() / (rr / rho).ln())
    } else {
        Ok((r.powf(2.0 - mu) - rr.powf(2.0 - mu)) / (rho.powf(2.0 - mu) - rr.powf(2.0 - mu)))
    }
}

/// Geometric save times for the boundary kernel: t_min * gamma^j up to
/// t_end, prefixed with 0. Log spacing keeps every node's switch-on time
/// resolved, which is what makes the discrete G non-negative.
pub fn geometric_times(t_min: f64, t_end: f64, n_steps: usize) -> Vec<f64> {
    assert!(t_min > 0.0 && t_end > t_min && n_steps >= 2);
    let gamma = (t_end / t_min).powf(1.0 / (n_steps - 1) as f64);
    let mut times = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    for j in 0..n_steps {
        times.push(t_min * gamma.powi(j as i32));
    }
    *times.last_mut().unwrap() = t_end;
    times
}

/// Inner-boundary kernel G = d_t y1 where y1 solves the homogeneous problem
/// with data h at the inner radius. Computed with a three-point backward
/// stencil on the (geometric) save times; the first two rows fall back to
/// the monotone two-point difference, and the delta at t = 0 is not
/// represented, so the returned field starts at the first save time.
pub fn eval_g(
    params: &KernelParams,
    grid: &RadialGrid,
    t_end: f64,
    n_steps: usize,
    opts: &SolveOpts,
) -> Result<KernelField, KernelError> {
    let t_min = t_end * 3e-6;
    let times = geometric_times(t_min, t_end, n_steps);
    let y1 = eval_y1_substepped(params, grid, &times, opts, 12)?;
    let n = grid.len();
    let out_times: Vec<f64> = times[1..].to_vec();
    let mut g = KernelField::zeros(grid.clone(), out_times);
    for j in 1..times.len() {
        let h1 = times[j] - times[j - 1];
        for i in 0..n {
            let v = if j <= 2 {
                (y1.value(j, i) - y1.value(j - 1, i)) / h1
            } else {
                // variable-step backward differentiation through three points
                let h2 = times[j - 1] - times[j - 2];
                let c0 = (2.0 * h1 + h2) / (h1 * (h1 + h2));
                let c1 = -(h1 + h2) / (h1 * h2);
                let c2 = h1 / (h2 * (h1 + h2));
                c0 * y1.value(j, i) + c1 * y1.value(j - 1, i) + c2 * y1.value(j - 2, i)
            };
            g.set(j - 1, i, v);
        }
    }
    Ok(g)
}

/// y1(r,t) = h(r) - (kernel-propagated h): rises monotonically from 0 to h.
pub fn eval_y1(
    params: &KernelParams,
    grid: &RadialGrid,
    times: &[f64],
    opts: &SolveOpts,
) -> Result<KernelField, KernelError> {
    eval_y1_substepped(params, grid, times, opts, 1)
}

/// Like [`eval_y1`] but with `substeps` geometric substeps inside each save
/// interval. A single implicit step has algebraic far-field tails that sit
/// far above the Gaussian envelope at small times; substepping restores the
/// envelope up to the sampled floor.
pub fn eval_y1_substepped(
    params: &KernelParams,
    grid: &RadialGrid,
    times: &[f64],
    opts: &SolveOpts,
    substeps: usize,
) -> Result<KernelField, KernelError> {
    validate_solver_domain(params, times)?;
    let h_vals: Vec<f64> = grid
        .r()
        .iter()
        .map(|&r| boundary_profile_h(r, params))
        .collect::<Result<_, _>>()?;
    let op = Operator1D::delta_mu(grid, params.mu);
    let zero = |_t: f64| 0.0;
    let mut u = h_vals.clone();
    let mut y = KernelField::zeros(grid.clone(), times.to_vec());
    // row 0 is exactly the continuum statement: y1(., 0) = 0 in the interior
    for i in [0usize, grid.len() - 1] {
        y.set(0, i, h_vals[i] - u[i]);
    }
    let m = substeps.max(1);
    let mut t = 0.0;
    for (j, &t_save) in times.iter().enumerate().skip(1) {
        // geometric intermediate points within [t, t_save]
        let mut targets = Vec::with_capacity(m);
        if t == 0.0 {
            let mut dt = t_save / (1 << m.min(30)) as f64;
            let mut tt: f64 = 0.0;
            while tt < t_save {
                tt = (tt + dt).min(t_save);
                targets.push(tt);
                dt *= 2.0;
            }
        } else {
            let gamma = (t_save / t).powf(1.0 / m as f64);
            for k in 1..=m {
                targets.push(t * gamma.powi(k as i32));
            }
            *targets.last_mut().unwrap() = t_save;
        }
        for t_next in targets {
            let dt = t_next - t;
            theta_step(
                &op,
                &mut u,
                t,
                dt,
                opts.theta,
                Bc::Dirichlet(&zero),
                Bc::Dirichlet(&zero),
                None,
            );
            t = t_next;
        }
        for i in 0..grid.len() {
            y.set(j, i, h_vals[i] - u[i]);
        }
    }
    Ok(y)
}

/// Empirical envelope constant for a field against a pointwise bound.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeReport {
    pub c_emp: f64,
    pub samples: usize,
    pub skipped: usize,
}

/// max field/envelope over all samples where the envelope is above
/// `floor * max(envelope)` (below that the true solution is dominated by
/// discretisation noise and the ratio is meaningless).
pub fn envelope_constant<F: Fn(f64, f64) -> f64>(
    field: &KernelField,
    envelope: F,
    floor: f64,
) -> EnvelopeReport {
    let mut env_max = 0.0_f64;
    for (j, &t) in field.times.iter().enumerate() {
        for (i, &r) in field.grid.r().iter().enumerate() {
            let _ = j;
            let _ = i;
            env_max = env_max.max(envelope(r, t));
        }
    }
    let cutoff = floor * env_max;
    let mut c = 0.0_f64;
    let mut samples = 0;
    let mut skipped = 0;
    for (j, &t) in field.times.iter().enumerate() {
        for (i, &r) in field.grid.r().iter().enumerate() {
            let e = envelope(r, t);
            if e <= cutoff {
                skipped += 1;
                continue;
            }
            c = c.max(field.value(j, i) / e);
            samples += 1;
        }
    }
    EnvelopeReport { c_emp: c, samples, skipped }
}

/// Prop.-B.1-type check: with phi(r) = r^{-k}, 0 <= k <= mu-1, the solution
/// obeys |v0| <= C r^{-k} w^k(r,t) w^{mu-k}(R,t). Returns the empirical C.
pub fn check_initial_value_envelope(
    params: &KernelParams,
    k: f64,
    grid: &RadialGrid,
    times: &[f64],
    opts: &SolveOpts,
) -> Result<EnvelopeReport, KernelError> {
    assert!(k >= 0.0 && k <= params.mu - 1.0, "need 0 <= k <= mu-1");
    let v0 = solve_ivp(&|r: f64| r.powf(-k), params, grid, times, opts)?;
    let r_outer = params.r_outer;
    let env = move |r: f64, t: f64| {
        r.powf(-k)
            * weight_w(WeightExponent { a: k }, r, t).unwrap()
            * weight_w(WeightExponent { a: params.mu - k }, r_outer, t).unwrap()
    };
    let mut report = envelope_constant(&v0, env, 1e-8);
    // drop the t = 0 row from the sample count: it is the data itself
    report.samples = report.samples.saturating_sub(grid.len());
    Ok(report)
}

/// Prop.-B.2-type check: with boundary data psi, for 2 rho <= r <= R,
/// |v1(r,t)| <= C exp(-(r-rho)^2/6t) rho^{mu-2} r^{1-mu} ||psi||_{L2(0,t)}.
pub fn check_boundary_envelope(
    params: &KernelParams,
    psi: &dyn Fn(f64) -> f64,
    grid: &RadialGrid,
    times: &[f64],
    opts: &SolveOpts,
) -> Result<EnvelopeReport, KernelError> {
    let v1 = solve_boundary(psi, params, grid, times, opts)?;
    // running L2 norm of psi on the save grid (fine trapezoid per interval)
    let mut l2sq = vec![0.0f64; times.len()];
    for j in 1..times.len() {
        let (a, b) = (times[j - 1], times[j]);
        let m = 64;
        let mut acc = 0.0;
        for q in 0..=m {
            let t = a + (b - a) * q as f64 / m as f64;
            let w = if q == 0 || q == m { 0.5 } else { 1.0 };
            let p = psi(t);
            acc += w * p * p;
        }
        l2sq[j] = l2sq[j - 1] + acc * (b - a) / m as f64;
    }
    let rho = params.rho;
    let mu = params.mu;
    let times_v = times.to_vec();
    let env = move |r: f64, t: f64| {
        if r < 2.0 * rho || t <= 0.0 {
            return 0.0; // outside the proposition's range; envelope 0 => skipped
        }
        let j = times_v.partition_point(|&x| x <= t).saturating_sub(1);
        let norm = l2sq[j].sqrt();
        (-(r - rho) * (r - rho) / (6.0 * t)).exp() * rho.powf(mu - 2.0) * r.powf(1.0 - mu) * norm
    };
    Ok(envelope_constant(&v1, env, 1e-8))
}

/// Lemma-B.2-type envelope for the boundary kernel G (t <= 1 branch and the
/// flat branch for t >= 1). Returns the empirical constant.
///
/// Rows with t below (a few boundary cells)^2 are excluded: at such times
/// the boundary layer is thinner than the radial grid can represent, so the
/// discrete solution has no meaningful deep-tail values to compare.
pub fn check_g_envelope(g: &KernelField, params: &KernelParams) -> EnvelopeReport {
    let rho = params.rho;
    let mu = params.mu;
    let env = move |r: f64, t: f64| {
        if r <= rho || t <= 0.0 {
            return 0.0;
        }
        let gauss = (-(r - rho) * (r - rho) / (5.0 * t)).exp();
        let pre = rho.powf(mu - 2.0) / (t * (t + rho * rho).powf(mu / 2.0 - 1.0));
        let cut = if t <= 1.0 {
            ((r - rho) / t.sqrt()).min(1.0)
        } else {
            (r - rho).min(1.0)
        };
        gauss * pre * cut
    };
    let cell = rho * g.grid.ds();
    let t_floor = (6.0 * cell) * (6.0 * cell);
    let keep: Vec<usize> = (2..g.n_times()).filter(|&j| g.times[j] >= t_floor).collect();
    let trimmed = KernelField::from_rows(
        g.grid.clone(),
        keep.iter().map(|&j| g.times[j]).collect(),
        keep.iter().map(|&j| g.row(j).to_vec()).collect(),
    );
    envelope_constant(&trimmed, env, 1e-8)
}

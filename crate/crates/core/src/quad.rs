//! Quadrature rules used by the kernel evaluators: Gauss–Jacobi rules for
//! integrands with algebraic endpoint weights, and a tanh-sinh (double
//! exponential) rule for one-off integrals with mild endpoint singularities.

use crate::special::{beta, ln_gamma};

/// Minimal double-double value for the final weight evaluation: the Jacobi
/// recurrence cancels catastrophically at near-endpoint roots with singular
/// weights, and the quadrature carries a 1e-10 relative-accuracy contract.
#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Dd { hi: s, lo: err }
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        let err = lo - (s - hi);
        Dd { hi: s, lo: err }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Self::two_sum(self.hi, o.hi);
        Self::renorm(s.hi, s.lo + self.lo + o.lo)
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(Dd { hi: -o.hi, lo: -o.lo })
    }

    fn mul_f(self, b: f64) -> Dd {
        let p = self.hi * b;
        let e = f64::mul_add(self.hi, b, -p);
        Self::renorm(p, e + self.lo * b)
    }

    fn div_f(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self.sub(Dd::from(q1).mul_f(b));
        let q2 = (r.hi + r.lo) / b;
        Self::renorm(q1, q2)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// A Gauss–Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
///
/// Nodes are found by Newton iteration on the Jacobi recurrence, weights by
/// the standard derivative formula. With the weight pulled out of the
/// integrand the rule is exact for polynomials of degree 2n-1 and converges
/// spectrally for analytic integrands.
#[derive(Debug, Clone)]
pub struct GaussJacobi {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

impl GaussJacobi {
    pub fn new(n: usize, alpha: f64, beta: f64) -> Self {
        assert!(n >= 2, "need at least 2 nodes");
        assert!(alpha > -1.0 && beta > -1.0, "Jacobi weight requires exponents > -1");
        let (alf, bet) = (alpha, beta);
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];

        // Evaluate P_n and its derivative by the three-term recurrence.
        let eval = |z: f64| -> (f64, f64, f64) {
            let mut temp = 2.0 + alf + bet;
            let mut p1 = (alf - bet + temp * z) / 2.0;
            let mut p2 = 1.0;
            for j in 2..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                temp = 2.0 * jf + alf + bet;
                let a = 2.0 * jf * (jf + alf + bet) * (temp - 2.0);
                let b = (temp - 1.0) * (alf * alf - bet * bet + temp * (temp - 2.0) * z);
                let c = 2.0 * (jf - 1.0 + alf) * (jf - 1.0 + bet) * temp;
                p1 = (b * p2 - c * p3) / a;
            }
            let pp = (nf * (alf - bet - temp * z) * p1 + 2.0 * (nf + alf) * (nf + bet) * p2)
                / (temp * (1.0 - z * z));
            (p1, pp, p2)
        };

        // Same recurrence in compensated arithmetic, used once per node for
        // the weight; returns (P_n, P_n', P_{n-1}).
        let eval_dd = |z: f64| -> (f64, f64, f64) {
            let mut temp = 2.0 + alf + bet;
            let mut p1 = Dd::from((alf - bet + temp * z) / 2.0);
            let mut p2 = Dd::from(1.0);
            for j in 2..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                temp = 2.0 * jf + alf + bet;
                let a = 2.0 * jf * (jf + alf + bet) * (temp - 2.0);
                let b0 = alf * alf - bet * bet;
                let b1 = temp * (temp - 2.0);
                let c = 2.0 * (jf - 1.0 + alf) * (jf - 1.0 + bet) * temp;
                // b * p2 = (temp-1) * (b0 + b1 z) * p2, accumulated in dd
                let bp = p2.mul_f(b0).add(p2.mul_f(b1).mul_f(z)).mul_f(temp - 1.0);
                p1 = bp.sub(p3.mul_f(c)).div_f(a);
            }
            let one_minus_z2 = Dd::two_sum(1.0, -z).mul_f(1.0 + z);
            let num = p1
                .mul_f(nf)
                .mul_f(alf - bet - temp * z)
                .add(p2.mul_f(2.0 * (nf + alf) * (nf + bet)));
            let pp = num.div_f(temp).div_f(one_minus_z2.to_f64());
            (p1.to_f64(), pp.to_f64(), p2.to_f64())
        };

        // Independent initial guesses from the Szegő angle asymptotic
        // x_k = cos theta_k, theta_k ~ (k + alf/2 - 1/4) pi / (n + (alf+bet+1)/2),
        // each polished by a step-clamped Newton iteration.
        let denom = nf + 0.5 * (alf + bet + 1.0);
        let log_norm = ln_gamma(alf + nf) + ln_gamma(bet + nf)
            - ln_gamma(nf + 1.0)
            - ln_gamma(nf + alf + bet + 1.0);
        for i in 0..n {
            let k = (i + 1) as f64;
            let theta = (k + alf / 2.0 - 0.25) * std::f64::consts::PI / denom;
            let mut z = theta.cos();
            // local node spacing in x, used to keep Newton in its basin
            let spacing = (std::f64::consts::PI / denom) * theta.sin().max(1.0 / nf);
            for _ in 0..100 {
                let (p1, pp, _) = eval(z);
                let mut step = p1 / pp;
                let cap = 0.5 * spacing;
                if step.abs() > cap {
                    step = cap * step.signum();
                }
                let z1 = z;
                z -= step;
                if z >= 1.0 {
                    z = 0.5 * (z1 + 1.0);
                }
                if z <= -1.0 {
                    z = 0.5 * (z1 - 1.0);
                }
                if (z - z1).abs() <= 1e-15 {
                    break;
                }
            }
            // one compensated polish step plus a compensated weight pass
            let (p1, pp, _) = eval_dd(z);
            z -= p1 / pp;
            let (_, pp, p2) = eval_dd(z);
            nodes[i] = z;
            let temp = 2.0 * nf + alf + bet;
            weights[i] = log_norm.exp() * temp * 2f64.powf(alf + bet) / (pp * p2);
        }
        GaussJacobi { nodes, weights, alpha, beta }
    }

    /// Integrate f against the Jacobi weight over [-1, 1]:
    /// returns sum w_i f(x_i) ~ int (1-x)^a (1+x)^b f(x) dx.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Total mass of the weight, int_{-1}^{1} (1-x)^a (1+x)^b dx.
    pub fn weight_mass(&self) -> f64 {
        2f64.powf(self.alpha + self.beta + 1.0) * beta(self.alpha + 1.0, self.beta + 1.0)
    }
}

/// Adaptive tanh-sinh quadrature of f over (a, b).
///
/// Handles integrable endpoint singularities; doubles the node density
/// until two successive levels agree to `rel_tol` (or 12 levels).
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    assert!(b > a);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let pi_half = std::f64::consts::FRAC_PI_2;

    // phi(t) = tanh(pi/2 sinh t); evaluate the node and its weight,
    // keeping 1 -| phi| accurate so endpoint silence is graceful.
    let node = |t: f64| -> Option<(f64, f64)> {
        let u = pi_half * t.sinh();
        if u.abs() > 350.0 {
            return None;
        }
        let phi = u.tanh();
        let dphi = pi_half * t.cosh() / u.cosh().powi(2);
        let x = mid + half * phi;
        if x <= a || x >= b {
            return None;
        }
        Some((x, half * dphi))
    };

    let mut h = 1.0_f64;
    let mut sum = {
        // level 0: t = k h for all k
        let mut s = 0.0;
        let mut k = 0i64;
        loop {
            let t = k as f64 * h;
            let mut contrib = 0.0;
            let mut alive = false;
            if let Some((x, w)) = node(t) {
                contrib += w * f(x);
                alive = true;
            }
            if k > 0 {
                if let Some((x, w)) = node(-t) {
                    contrib += w * f(x);
                    alive = true;
                }
            }
            s += contrib;
            if k > 3 && (!alive || contrib.abs() <= 1e-300) {
                break;
            }
            k += 1;
            if k > 10_000 {
                break;
            }
        }
        s * h
    };

    for _level in 0..12 {
        h *= 0.5;
        // add the odd multiples of the new h
        let mut s_new = 0.0;
        let mut k = 0i64;
        loop {
            let t = (2 * k + 1) as f64 * h;
            let mut contrib = 0.0;
            let mut alive = false;
            if let Some((x, w)) = node(t) {
                contrib += w * f(x);
                alive = true;
            }
            if let Some((x, w)) = node(-t) {
                contrib += w * f(x);
                alive = true;
            }
            s_new += contrib;
            if k > 3 && (!alive || contrib.abs() <= 1e-300) {
                break;
            }
            k += 1;
            if k > 100_000 {
                break;
            }
        }
        let refined = 0.5 * sum + h * s_new;
        let err = (refined - sum).abs();
        sum = refined;
        if err <= rel_tol * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

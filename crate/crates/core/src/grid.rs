//! Shared 1D log-radial discretisation. Nodes are uniform in s = ln r, so
//! spacing is fine near the inner radius and coarsens outward in r.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    /// Node radii, strictly increasing.
    r: Vec<f64>,
    /// ln of node radii (uniformly spaced).
    s: Vec<f64>,
    /// Spacing in s = ln r.
    ds: f64,
}

impl RadialGrid {
    /// Log-uniform grid with `n` nodes from `r_min` to `r_max` inclusive.
    pub fn log_uniform(r_min: f64, r_max: f64, n: usize) -> Self {
        assert!(r_min > 0.0, "log grid requires r_min > 0");
        assert!(r_max > r_min, "need r_max > r_min");
        assert!(n >= 2, "need at least two nodes");
        let s0 = r_min.ln();
        let s1 = r_max.ln();
        let ds = (s1 - s0) / (n - 1) as f64;
        let s: Vec<f64> = (0..n).map(|i| s0 + ds * i as f64).collect();
        let r: Vec<f64> = s.iter().map(|&si| si.exp()).collect();
        RadialGrid { r, s, ds }
    }

    /// Grid with a fixed node density per decade of radius.
    pub fn per_decade(r_min: f64, r_max: f64, nodes_per_decade: usize) -> Self {
        let decades = (r_max / r_min).log10();
        let n = ((nodes_per_decade as f64) * decades).round() as usize + 1;
        Self::log_uniform(r_min, r_max, n.max(2))
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn ds(&self) -> f64 {
        self.ds
    }

    pub fn r_min(&self) -> f64 {
        self.r[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.r.last().unwrap()
    }

    /// Largest index i with r[i] <= r (clamped to valid range).
    pub fn index_at(&self, r: f64) -> usize {
        if r <= self.r[0] {
            return 0;
        }
        let i = ((r.ln() - self.s[0]) / self.ds).floor() as isize;
        (i.max(0) as usize).min(self.len() - 1)
    }

    /// Index of the node closest to r in log distance.
    pub fn nearest(&self, r: f64) -> usize {
        if r <= self.r[0] {
            return 0;
        }
        let i = ((r.ln() - self.s[0]) / self.ds).round() as isize;
        (i.max(0) as usize).min(self.len() - 1)
    }

    /// Linear-in-s interpolation of nodal values at radius r (clamped).
    pub fn interp(&self, values: &[f64], r: f64) -> f64 {
        assert_eq!(values.len(), self.len());
        let s = r.max(self.r[0]).min(self.r_max()).ln();
        let x = (s - self.s[0]) / self.ds;
        let i = (x.floor() as usize).min(self.len() - 2);
        let frac = x - i as f64;
        values[i] * (1.0 - frac) + values[i + 1] * frac
    }

    /// Integral of f(r) r^{mu-1} dr over [r_lo, r_hi]: the weighted
    /// integrand g(s) = f e^{mu s} is interpolated piecewise-linearly in
    /// s between nodes and integrated exactly, so the rule is exactly
    /// interval-additive at any split point.
    pub fn integrate_weighted(&self, values: &[f64], mu: f64, r_lo: f64, r_hi: f64) -> f64 {
        assert_eq!(values.len(), self.len());
        let lo = r_lo.max(self.r_min());
        let hi = r_hi.min(self.r_max());
        if hi <= lo {
            return 0.0;
        }
        // g(s) = f(r) r^mu, since f r^{mu-1} dr = f e^{mu s} ds
        let g = |i: usize| values[i] * (mu * self.s[i]).exp();
        let g_at = |s: f64| -> f64 {
            let x = (s - self.s[0]) / self.ds;
            let i = (x.floor() as usize).min(self.len() - 2);
            let frac = x - i as f64;
            g(i) * (1.0 - frac) + g(i + 1) * frac
        };
        let s_lo = lo.ln();
        let s_hi = hi.ln();
        let i_lo = ((s_lo - self.s[0]) / self.ds).ceil() as usize;
        let i_hi = ((s_hi - self.s[0]) / self.ds).floor() as usize;
        let i_lo = i_lo.min(self.len() - 1);
        let i_hi = i_hi.min(self.len() - 1);
        if i_lo > i_hi {
            // both endpoints inside a single cell
            return 0.5 * (g_at(s_lo) + g_at(s_hi)) * (s_hi - s_lo);
        }
        let mut total = 0.0;
        // partial head cell
        if s_lo < self.s[i_lo] {
            total += 0.5 * (g_at(s_lo) + g(i_lo)) * (self.s[i_lo] - s_lo);
        }
        // whole cells
        for i in i_lo..i_hi {
            total += 0.5 * (g(i) + g(i + 1)) * self.ds;
        }
        // partial tail cell
        if s_hi > self.s[i_hi] {
            total += 0.5 * (g(i_hi) + g_at(s_hi)) * (s_hi - self.s[i_hi]);
        }
        total
    }

    /// Descriptor for manifests.
    pub fn spec(&self) -> GridSpec {
        GridSpec {
            r_min: self.r_min(),
            r_max: self.r_max(),
            nodes: self.len(),
            ds: self.ds,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub nodes: usize,
    pub ds: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn log_uniform_endpoints_and_spacing() {
        let g = RadialGrid::log_uniform(1e-3, 1.0, 301);
        assert_eq!(g.len(), 301);
        assert!((g.r_min() - 1e-3).abs() < 1e-18);
        assert!((g.r_max() - 1.0).abs() < 1e-12);
        let ratio = g.r()[1] / g.r()[0];
        assert!((ratio.ln() - g.ds()).abs() < 1e-14);
    }

    #[test]
    fn integrate_power_matches_closed_form() {
        // int_a^b r^{mu-1} dr = (b^mu - a^mu)/mu, f = 1
        let g = RadialGrid::log_uniform(0.01, 1.0, 4001);
        let ones = vec![1.0; g.len()];
        for mu in [1.5, 2.0, 3.0] {
            let got = g.integrate_weighted(&ones, mu, 0.01, 1.0);
            let want = (1.0 - 0.01f64.powf(mu)) / mu;
            assert!((got - want).abs() < 1e-6 * want, "mu={mu}: {got} vs {want}");
        }
    }

    proptest! {
        #[test]
        fn integral_is_interval_additive(split in 0.02f64..0.9) {
            let g = RadialGrid::log_uniform(0.01, 1.0, 257);
            let vals: Vec<f64> = g.r().iter().map(|r| (3.0 * r).sin() + 1.5).collect();
            let whole = g.integrate_weighted(&vals, 2.0, 0.01, 1.0);
            let a = g.integrate_weighted(&vals, 2.0, 0.01, split);
            let b = g.integrate_weighted(&vals, 2.0, split, 1.0);
            prop_assert!((whole - (a + b)).abs() < 1e-13 * whole.abs().max(1.0));
        }

        #[test]
        fn interp_agrees_at_nodes(idx in 0usize..100) {
            let g = RadialGrid::log_uniform(0.1, 10.0, 101);
            let vals: Vec<f64> = g.r().iter().map(|r| r * r).collect();
            let i = idx.min(g.len() - 1);
            prop_assert!((g.interp(&vals, g.r()[i]) - vals[i]).abs() < 1e-12 * vals[i].max(1.0));
        }
    }
}

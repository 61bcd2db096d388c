//! Discrete space-time fields on a radial grid: the common carrier for
//! kernel solutions, barriers, and residuals, with CSV/JSON export.

use crate::grid::RadialGrid;
use serde::Serialize;
use std::io::Write;

/// Values of a scalar field sampled on `grid` x `times`, row-major in time.
#[derive(Debug, Clone)]
pub struct KernelField {
    pub grid: RadialGrid,
    pub times: Vec<f64>,
    values: Vec<f64>,
}

impl KernelField {
    pub fn zeros(grid: RadialGrid, times: Vec<f64>) -> Self {
        let values = vec![0.0; grid.len() * times.len()];
        KernelField { grid, times, values }
    }

    pub fn from_rows(grid: RadialGrid, times: Vec<f64>, rows: Vec<Vec<f64>>) -> Self {
        assert_eq!(rows.len(), times.len());
        let n = grid.len();
        let mut values = Vec::with_capacity(n * times.len());
        for row in rows {
            assert_eq!(row.len(), n);
            values.extend_from_slice(&row);
        }
        KernelField { grid, times, values }
    }

    pub fn n_times(&self) -> usize {
        self.times.len()
    }

    pub fn value(&self, it: usize, ir: usize) -> f64 {
        self.values[it * self.grid.len() + ir]
    }

    pub fn set(&mut self, it: usize, ir: usize, v: f64) {
        self.values[it * self.grid.len() + ir] = v;
    }

    pub fn row(&self, it: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[it * n..(it + 1) * n]
    }

    pub fn row_mut(&mut self, it: usize) -> &mut [f64] {
        let n = self.grid.len();
        &mut self.values[it * n..(it + 1) * n]
    }

    /// Elementwise map, preserving shape.
    pub fn map<F: Fn(f64, f64, f64) -> f64>(&self, f: F) -> KernelField {
        let mut out = self.clone();
        for it in 0..self.times.len() {
            let t = self.times[it];
            for ir in 0..self.grid.len() {
                let r = self.grid.r()[ir];
                out.set(it, ir, f(r, t, self.value(it, ir)));
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Long-format CSV with header `r,t,value`; floats are written in
    /// shortest round-trip form so repeated runs are byte-identical.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "r,t,value")?;
        for it in 0..self.times.len() {
            for ir in 0..self.grid.len() {
                writeln!(
                    w,
                    "{:?},{:?},{:?}",
                    self.grid.r()[ir],
                    self.times[it],
                    self.value(it, ir)
                )?;
            }
        }
        Ok(())
    }
}

/// JSON manifest accompanying exported kernel fields.
#[derive(Debug, Clone, Serialize)]
pub struct FieldManifest {
    pub mu: f64,
    pub rho: f64,
    pub r_outer: f64,
    pub c_mu: f64,
    pub grid: crate::grid::GridSpec,
    pub tolerances: std::collections::BTreeMap<String, f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_values() {
        let grid = RadialGrid::log_uniform(0.1, 1.0, 3);
        let mut f = KernelField::zeros(grid, vec![0.0, 0.5]);
        f.set(0, 1, 1.0 / 3.0);
        f.set(1, 2, 1e-17);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "r,t,value");
        // every float parses back to the same bits
        for line in lines {
            for tok in line.split(',') {
                let x: f64 = tok.parse().unwrap();
                assert_eq!(format!("{:?}", x), tok);
            }
        }
    }
}

/// Sampled function with optional exact derivatives; interpolates by cubic
/// Hermite when derivatives are known and linearly otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    t: Vec<f64>,
    v: Vec<f64>,
    d: Option<Vec<f64>>,
}

/// Relative tolerance for dyadic grid refinement.
pub const GRID_REL_TOL: f64 = 1e-8;

impl GridFunction {
    pub fn new(t: Vec<f64>, v: Vec<f64>, d: Option<Vec<f64>>) -> Self {
        assert_eq!(t.len(), v.len());
        assert!(t.len() >= 2);
        assert!(t.windows(2).all(|w| w[0] < w[1]));
        if let Some(d) = &d {
            assert_eq!(d.len(), t.len());
        }
        GridFunction { t, v, d }
    }

    pub fn sample(f: impl Fn(f64) -> f64, grid: &[f64]) -> Self {
        Self::new(grid.to_vec(), grid.iter().map(|&x| f(x)).collect(), None)
    }

    pub fn points(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn interpolate(&self, x: f64) -> f64 {
        let n = self.t.len();
        if x <= self.t[0] {
            return self.v[0];
        }
        if x >= self.t[n - 1] {
            return self.v[n - 1];
        }
        let k = self.t.partition_point(|&p| p <= x) - 1;
        let (x0, x1) = (self.t[k], self.t[k + 1]);
        let h = x1 - x0;
        let s = (x - x0) / h;
        match &self.d {
            Some(d) => {
                let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
                let h10 = s * (1.0 - s) * (1.0 - s);
                let h01 = s * s * (3.0 - 2.0 * s);
                let h11 = s * s * (s - 1.0);
                h00 * self.v[k] + h10 * h * d[k] + h01 * self.v[k + 1] + h11 * h * d[k + 1]
            }
            None => self.v[k] + s * (self.v[k + 1] - self.v[k]),
        }
    }
}

/// Geometric grid with `n` points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| if i + 1 == n { hi } else { (a + (b - a) * i as f64 / (n - 1) as f64).exp() }).collect()
}

/// Inserts geometric midpoints between consecutive positive points.
pub fn refine_dyadic(grid: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * grid.len());
    for w in grid.windows(2) {
        out.push(w[0]);
        let m = if w[0] > 0.0 { (w[0] * w[1]).sqrt() } else { 0.5 * w[1] };
        if m > w[0] && m < w[1] {
            out.push(m);
        }
    }
    out.extend(grid.last());
    out
}

/// Sorted union with duplicates removed.
pub fn merge_points(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = a.iter().chain(b).copied().collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reproduces_cubics() {
        let f = |x: f64| x * x * x - x;
        let df = |x: f64| 3.0 * x * x - 1.0;
        let t = vec![0.0, 0.5, 1.0];
        let g = GridFunction::new(t.clone(), t.iter().map(|&x| f(x)).collect(), Some(t.iter().map(|&x| df(x)).collect()));
        assert!((g.interpolate(0.3) - f(0.3)).abs() < 1e-15);
    }

    #[test]
    fn refinement_is_superset() {
        let g = log_grid(1e-6, 1.0, 7);
        let r = refine_dyadic(&g);
        assert_eq!(r.len(), 13);
        assert!(g.iter().all(|x| r.contains(x)));
    }
}

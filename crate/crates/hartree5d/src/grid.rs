//! Uniform radial mesh on [0, R] with the 5D spherical measure.
//!
//! Integrals over R^5 of radial functions reduce to omega * int f(r) r^4 dr
//! with omega = 8 pi^2 / 3 (the area of the unit 4-sphere). The grid carries
//! trapezoid quadrature weights w_i = omega r_i^4 c_i h, a second-order radial
//! derivative, and the radial Laplacian in conservative form
//! r^-4 d/dr (r^4 du/dr), which is the form the implicit time stepper reuses.

use num_complex::Complex64;

use crate::error::GridError;

/// Area of the unit sphere S^4 in R^5: 2 pi^{5/2} / Gamma(5/2) = 8 pi^2 / 3.
pub const OMEGA_S4: f64 = 8.0 * std::f64::consts::PI * std::f64::consts::PI / 3.0;

/// Smallest mesh accepted outside of unit tests.
pub const MIN_POINTS: usize = 8;

/// Uniform mesh r_i = i * h on [0, r_max] with 5D quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    n_points: usize,
    r_max: f64,
    h: f64,
    nodes: Vec<f64>,
    quad_weights: Vec<f64>,
}

impl RadialGrid {
    /// Builds the mesh. Rejects `n_points < 8` and non-finite or
    /// non-positive `r_max`.
    pub fn new(n_points: usize, r_max: f64) -> Result<Self, GridError> {
        if n_points < MIN_POINTS {
            return Err(GridError::TooFewPoints { n_points, min: MIN_POINTS });
        }
        if !r_max.is_finite() || r_max <= 0.0 {
            return Err(GridError::BadRadius { r_max });
        }
        Ok(Self::new_unchecked(n_points, r_max))
    }

    pub(crate) fn new_unchecked(n_points: usize, r_max: f64) -> Self {
        let h = r_max / (n_points - 1) as f64;
        let nodes: Vec<f64> = (0..n_points).map(|i| i as f64 * h).collect();
        let quad_weights = nodes
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let c = if i == 0 || i == n_points - 1 { 0.5 } else { 1.0 };
                OMEGA_S4 * r.powi(4) * c * h
            })
            .collect();
        RadialGrid { n_points, r_max, h, nodes, quad_weights }
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Mesh spacing r_max / (n_points - 1).
    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Quadrature weights w_i = omega r_i^4 c_i h. Note w_0 = 0: the origin
    /// carries no measure.
    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    /// Trapezoid quadrature of a radial density against the 5D measure:
    /// sum_i w_i d_i = omega * int d(r) r^4 dr.
    pub fn integrate(&self, density: &[f64]) -> f64 {
        assert_eq!(density.len(), self.n_points, "density length mismatch");
        self.quad_weights
            .iter()
            .zip(density)
            .map(|(w, d)| w * d)
            .sum()
    }

    /// int r^p |u|^2 dmu over the whole mesh.
    pub fn moment(&self, u: &RadialField, p: u32) -> f64 {
        let d: Vec<f64> = u
            .samples()
            .iter()
            .zip(self.nodes.iter())
            .map(|(s, r)| r.powi(p as i32) * s.norm_sqr())
            .collect();
        self.integrate(&d)
    }

    /// int_{r > R} |u|^2 dmu. The cell containing R is split linearly.
    pub fn tail_l2_sq(&self, u: &RadialField, r_cut: f64) -> Result<f64, GridError> {
        let d: Vec<f64> = u.samples().iter().map(|s| s.norm_sqr()).collect();
        self.tail_integral(&d, r_cut)
    }

    /// Tail of `integrate` beyond `r_cut`, splitting the straddling cell
    /// linearly in the integrand g(r) = omega r^4 d(r).
    pub fn tail_integral(&self, density: &[f64], r_cut: f64) -> Result<f64, GridError> {
        assert_eq!(density.len(), self.n_points, "density length mismatch");
        if !(0.0..=self.r_max).contains(&r_cut) {
            return Err(GridError::CutOutOfRange { r_cut, r_max: self.r_max });
        }
        if r_cut >= self.r_max {
            return Ok(0.0);
        }
        let g = |i: usize| OMEGA_S4 * self.nodes[i].powi(4) * density[i];
        // cell index k with r_cut in [r_k, r_{k+1})
        let k = ((r_cut / self.h).floor() as usize).min(self.n_points - 2);
        let mut total = 0.0;
        for i in (k + 1..self.n_points - 1).rev() {
            total += 0.5 * self.h * (g(i) + g(i + 1));
        }
        // straddling cell [r_k, r_{k+1}]: integrate the linear interpolant
        // of g over [r_cut, r_{k+1}]
        let frac = (r_cut - self.nodes[k]) / self.h;
        let g_cut = g(k) + (g(k + 1) - g(k)) * frac;
        total += 0.5 * (self.h - (r_cut - self.nodes[k])) * (g_cut + g(k + 1));
        Ok(total)
    }

    /// Radial derivative: second-order central differences in the interior,
    /// one-sided at r_max, and exactly zero at the origin (radial functions
    /// extend evenly through r = 0).
    pub fn radial_derivative(&self, u: &RadialField) -> RadialField {
        let s = u.samples();
        let n = self.n_points;
        let inv2h = 1.0 / (2.0 * self.h);
        let mut d = vec![Complex64::new(0.0, 0.0); n];
        for i in 1..n - 1 {
            d[i] = (s[i + 1] - s[i - 1]) * inv2h;
        }
        d[n - 1] = (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) * inv2h;
        RadialField::from_raw(u.grid_params(), d)
    }

    /// int |du/dr|^2 dmu with the central-difference derivative.
    pub fn kinetic(&self, u: &RadialField) -> f64 {
        let d = self.radial_derivative(u);
        let dens: Vec<f64> = d.samples().iter().map(|z| z.norm_sqr()).collect();
        self.integrate(&dens)
    }

    /// Quadratic form -<Lap u, u>_w of the discrete Laplacian. This is the
    /// kinetic functional the implicit stepper conserves exactly; it differs
    /// from `kinetic` by O(h^2) on smooth fields.
    pub fn kinetic_form(&self, u: &RadialField) -> f64 {
        let lap = self.apply_laplacian(u);
        let dens: Vec<f64> = lap
            .samples()
            .iter()
            .zip(u.samples())
            .map(|(l, s)| -(l * s.conj()).re)
            .collect();
        self.integrate(&dens)
    }

    /// Half-node flux coefficients r_{i+1/2}^4 for i = 0..n-1 (the last
    /// entry is the flux node just beyond the boundary).
    pub(crate) fn half_node_r4(&self) -> Vec<f64> {
        (0..self.n_points)
            .map(|i| (self.nodes[i] + 0.5 * self.h).powi(4))
            .collect()
    }

    /// Discrete radial Laplacian. Interior nodes use the conservative flux
    /// form (r_{i+1/2}^4 (u_{i+1}-u_i) - r_{i-1/2}^4 (u_i-u_{i-1})) / (r_i^4 h^2);
    /// the origin uses 5 u''(0) = 10 (u_1 - u_0)/h^2 from the even extension;
    /// the last node takes a zero ghost value beyond r_max.
    pub fn apply_laplacian(&self, u: &RadialField) -> RadialField {
        let s = u.samples();
        let n = self.n_points;
        let h2 = self.h * self.h;
        let rp = self.half_node_r4();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[0] = (s[1] - s[0]) * (10.0 / h2);
        for i in 1..n - 1 {
            let r4 = self.nodes[i].powi(4);
            out[i] = ((s[i + 1] - s[i]) * rp[i] - (s[i] - s[i - 1]) * rp[i - 1]) / (r4 * h2);
        }
        let r4 = self.nodes[n - 1].powi(4);
        out[n - 1] = ((-s[n - 1]) * rp[n - 1] - (s[n - 1] - s[n - 2]) * rp[n - 2]) / (r4 * h2);
        RadialField::from_raw(u.grid_params(), out)
    }

    /// Weighted inner product <u, v>_w = sum w_i u_i conj(v_i).
    pub fn inner(&self, u: &RadialField, v: &RadialField) -> Complex64 {
        self.quad_weights
            .iter()
            .zip(u.samples().iter().zip(v.samples()))
            .map(|(w, (a, b))| a * b.conj() * *w)
            .sum()
    }

    /// Weighted L2 norm.
    pub fn norm(&self, u: &RadialField) -> f64 {
        self.moment(u, 0).sqrt()
    }
}

/// Grid identity used to check that two fields live on the same mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridParams {
    pub n_points: usize,
    pub r_max: f64,
}

/// Complex samples of a radial function on a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    params: GridParams,
    samples: Vec<Complex64>,
}

impl RadialField {
    /// Wraps samples after checking length and finiteness.
    pub fn new(grid: &RadialGrid, samples: Vec<Complex64>) -> Result<Self, GridError> {
        if samples.len() != grid.n_points() {
            return Err(GridError::LengthMismatch {
                expected: grid.n_points(),
                got: samples.len(),
            });
        }
        if let Some(i) = samples.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GridError::NonFiniteSample { index: i });
        }
        Ok(RadialField {
            params: GridParams { n_points: grid.n_points(), r_max: grid.r_max() },
            samples,
        })
    }

    /// Real-valued field from a density-like slice.
    pub fn from_real(grid: &RadialGrid, values: &[f64]) -> Result<Self, GridError> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zero(grid: &RadialGrid) -> Self {
        RadialField {
            params: GridParams { n_points: grid.n_points(), r_max: grid.r_max() },
            samples: vec![Complex64::new(0.0, 0.0); grid.n_points()],
        }
    }

    pub(crate) fn from_raw(params: GridParams, samples: Vec<Complex64>) -> Self {
        RadialField { params, samples }
    }

    pub fn grid_params(&self) -> GridParams {
        self.params
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    /// |u_i|^2 per node.
    pub fn density(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Pointwise scaling by a complex constant.
    pub fn scaled(&self, factor: Complex64) -> Self {
        RadialField {
            params: self.params,
            samples: self.samples.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn matches_grid(&self, grid: &RadialGrid) -> bool {
        self.params.n_points == grid.n_points() && self.params.r_max == grid.r_max()
    }
}

/// Density samples of the ball indicator 1_{r <= radius}, with the cell
/// straddling the boundary split linearly so the quadrature error stays
/// O(h^2) regardless of where the jump falls.
pub fn ball_indicator_density(grid: &RadialGrid, radius: f64) -> Vec<f64> {
    let h = grid.spacing();
    grid.nodes()
        .iter()
        .map(|&r| ((radius - r) / h + 0.5).clamp(0.0, 1.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss_field(grid: &RadialGrid, inv_two_sigma_sq: f64) -> RadialField {
        let vals: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|&r| (-inv_two_sigma_sq * r * r).exp())
            .collect();
        RadialField::from_real(grid, &vals).unwrap()
    }

    #[test]
    fn uniform_spacing_nodes() {
        // n = 3 is below the public minimum; the raw constructor exercises
        // the spacing arithmetic directly.
        let g = RadialGrid::new_unchecked(3, 2.0);
        assert_eq!(g.nodes(), &[0.0, 1.0, 2.0]);
        assert_eq!(g.spacing(), 1.0);
        assert_eq!(g.quad_weights()[0], 0.0);
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(matches!(RadialGrid::new(3, 2.0), Err(GridError::TooFewPoints { .. })));
        assert!(matches!(RadialGrid::new(64, f64::NAN), Err(GridError::BadRadius { .. })));
        assert!(matches!(RadialGrid::new(64, -1.0), Err(GridError::BadRadius { .. })));
        assert!(matches!(RadialGrid::new(64, f64::INFINITY), Err(GridError::BadRadius { .. })));
    }

    #[test]
    fn node_invariants() {
        let g = RadialGrid::new(1024, 12.0).unwrap();
        assert_eq!(g.nodes()[0], 0.0);
        assert!((g.nodes()[1023] - 12.0).abs() < 1e-12);
        assert!(g.nodes().windows(2).all(|p| p[1] > p[0]));
        assert_eq!(g.quad_weights()[0], 0.0);
    }

    #[test]
    fn ball_volume_quadrature() {
        let g = RadialGrid::new(4096, 4.0).unwrap();
        let d = ball_indicator_density(&g, 1.0);
        let v = g.integrate(&d);
        let exact = 8.0 * std::f64::consts::PI.powi(2) / 15.0;
        assert!(((v - exact) / exact).abs() < 1e-3, "v = {v}, exact = {exact}");
    }

    #[test]
    fn gaussian_mass_quadrature() {
        let g = RadialGrid::new(4096, 12.0).unwrap();
        let u = gauss_field(&g, 0.5);
        let m = g.integrate(&u.density());
        let exact = std::f64::consts::PI.powf(2.5);
        assert!(((m - exact) / exact).abs() < 1e-6, "m = {m}");
    }

    #[test]
    fn zero_density_integrates_to_zero() {
        let g = RadialGrid::new(64, 4.0).unwrap();
        assert_eq!(g.integrate(&vec![0.0; 64]), 0.0);
    }

    #[test]
    fn gaussian_second_moment() {
        let g = RadialGrid::new(4096, 12.0).unwrap();
        let u = gauss_field(&g, 0.5);
        let exact = 2.5 * std::f64::consts::PI.powf(2.5);
        let m2 = g.moment(&u, 2);
        assert!(((m2 - exact) / exact).abs() < 1e-6, "m2 = {m2}");
        // refinement sanity: moment p = 0 equals integrate of |u|^2
        assert!((g.moment(&u, 0) - g.integrate(&u.density())).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_h2_signature_on_truncated_gaussian() {
        // On a short box the boundary term of the Euler-Maclaurin expansion
        // survives and the quadrature error must shrink by ~4x per halving.
        let exact = {
            // oracle: very fine trapezoid of the same truncated integral
            let g = RadialGrid::new(1 << 18, 2.0).unwrap();
            let u = gauss_field(&g, 1.0);
            g.integrate(&u.density())
        };
        let mut errs = Vec::new();
        for n in [512usize, 1024, 2048] {
            let g = RadialGrid::new(n + 1, 2.0).unwrap();
            let u = gauss_field(&g, 1.0);
            errs.push((g.integrate(&u.density()) - exact).abs());
        }
        let q1 = errs[0] / errs[1];
        let q2 = errs[1] / errs[2];
        assert!((3.0..5.0).contains(&q1), "ratio {q1}");
        assert!((3.0..5.0).contains(&q2), "ratio {q2}");
    }

    #[test]
    fn derivative_constant_and_quadratic() {
        let g = RadialGrid::new(256, 8.0).unwrap();
        let ones = RadialField::from_real(&g, &vec![1.5; 256]).unwrap();
        let d = g.radial_derivative(&ones);
        assert!(d.samples().iter().all(|z| z.norm() < 1e-12));

        let sq: Vec<f64> = g.nodes().iter().map(|r| r * r).collect();
        let u = RadialField::from_real(&g, &sq).unwrap();
        let d = g.radial_derivative(&u);
        for (i, &r) in g.nodes().iter().enumerate().skip(1) {
            assert!(
                (d.samples()[i].re - 2.0 * r).abs() < 1e-9,
                "node {i}: {} vs {}",
                d.samples()[i].re,
                2.0 * r
            );
        }
    }

    #[test]
    fn derivative_second_order_convergence() {
        // e^{-r^2/2} -> derivative -r e^{-r^2/2}; interior max error ~ h^2
        let mut errs = Vec::new();
        for n in [257usize, 513, 1025] {
            let g = RadialGrid::new(n, 8.0).unwrap();
            let u = gauss_field(&g, 0.5);
            let d = g.radial_derivative(&u);
            let mut emax: f64 = 0.0;
            for (i, &r) in g.nodes().iter().enumerate().skip(1).take(n - 2) {
                let exact = -r * (-0.5 * r * r).exp();
                emax = emax.max((d.samples()[i].re - exact).abs());
            }
            errs.push(emax);
        }
        assert!(errs[0] / errs[1] > 3.0, "{errs:?}");
        assert!(errs[1] / errs[2] > 3.0, "{errs:?}");
    }

    #[test]
    fn laplacian_of_quadratic_is_2d() {
        // Lap |x|^2 = 2d = 10 in R^5. The flux form carries a 5 h^2 / r^2
        // relative-to-radius error (large only within a few cells of the
        // axis), so check O(h^2) at fixed radius under refinement; the
        // origin row is exact for quadratics.
        let mut errs = Vec::new();
        for n in [257usize, 513, 1025] {
            let g = RadialGrid::new(n, 8.0).unwrap();
            let sq: Vec<f64> = g.nodes().iter().map(|r| r * r).collect();
            let u = RadialField::from_real(&g, &sq).unwrap();
            let lap = g.apply_laplacian(&u);
            assert!((lap.samples()[0].re - 10.0).abs() < 1e-10, "origin row");
            let i_mid = (n - 1) / 4; // r = 2 on every grid in the sweep
            assert_eq!(g.nodes()[i_mid], 2.0);
            errs.push((lap.samples()[i_mid].re - 10.0).abs());
        }
        assert!(errs[0] / errs[1] > 3.9 && errs[0] / errs[1] < 4.1, "{errs:?}");
        assert!(errs[1] / errs[2] > 3.9 && errs[1] / errs[2] < 4.1, "{errs:?}");
    }

    #[test]
    fn laplacian_of_constant_vanishes_interior() {
        let g = RadialGrid::new(256, 8.0).unwrap();
        let u = RadialField::from_real(&g, &vec![3.0; 256]).unwrap();
        let lap = g.apply_laplacian(&u);
        for i in 0..255 {
            assert!(lap.samples()[i].norm() < 1e-10, "node {i}");
        }
    }

    #[test]
    fn laplacian_self_adjoint_in_weighted_product() {
        // random-ish compactly supported pair, vanishing at r_max
        let g = RadialGrid::new(512, 10.0).unwrap();
        let mut s1 = 0x9e3779b97f4a7c15u64;
        let mut rnd = move || {
            s1 ^= s1 << 13;
            s1 ^= s1 >> 7;
            s1 ^= s1 << 17;
            (s1 >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut a = vec![Complex64::new(0.0, 0.0); 512];
        let mut b = vec![Complex64::new(0.0, 0.0); 512];
        for i in 0..511 {
            a[i] = Complex64::new(rnd(), rnd());
            b[i] = Complex64::new(rnd(), rnd());
        }
        let u = RadialField::new(&g, a).unwrap();
        let v = RadialField::new(&g, b).unwrap();
        let lhs = g.inner(&g.apply_laplacian(&u), &v);
        let rhs = g.inner(&u, &g.apply_laplacian(&v));
        let scale = g.norm(&u) * g.norm(&v) / (g.spacing() * g.spacing());
        assert!(
            (lhs - rhs).norm() <= 1e-10 * scale,
            "asymmetry {} vs scale {}",
            (lhs - rhs).norm(),
            scale
        );
    }

    #[test]
    fn tail_mass_limits_and_monotonicity() {
        let g = RadialGrid::new(1024, 6.0).unwrap();
        let u = gauss_field(&g, 0.5);
        let total = g.moment(&u, 0);
        let t0 = g.tail_l2_sq(&u, 0.0).unwrap();
        assert!((t0 - total).abs() < 1e-12 * total);
        assert_eq!(g.tail_l2_sq(&u, 6.0).unwrap(), 0.0);
        let mut prev = t0;
        for k in 1..60 {
            let t = g.tail_l2_sq(&u, 0.1 * k as f64).unwrap();
            assert!(
                t <= prev + 1e-12 * total,
                "tail not monotone at R = {}: {t} > {prev}",
                0.1 * k as f64
            );
            prev = t;
        }
        assert!(matches!(
            g.tail_l2_sq(&u, 7.0),
            Err(GridError::CutOutOfRange { .. })
        ));
    }

    #[test]
    fn tail_of_indicator_vanishes_outside_support() {
        // sharp open-ball sampling: no node at or beyond the edge carries mass
        let g = RadialGrid::new(1025, 4.0).unwrap();
        let sq: Vec<f64> = g.nodes().iter().map(|&r| if r < 1.0 { 1.0 } else { 0.0 }).collect();
        let u = RadialField::from_real(&g, &sq).unwrap();
        let t = g.tail_l2_sq(&u, 1.0).unwrap();
        assert!(t < 1e-12, "tail = {t}");
    }

    #[test]
    fn field_construction_errors() {
        let g = RadialGrid::new(64, 4.0).unwrap();
        assert!(matches!(
            RadialField::new(&g, vec![Complex64::new(0.0, 0.0); 63]),
            Err(GridError::LengthMismatch { .. })
        ));
        let mut s = vec![Complex64::new(0.0, 0.0); 64];
        s[7] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            RadialField::new(&g, s),
            Err(GridError::NonFiniteSample { index: 7 })
        ));
    }
}

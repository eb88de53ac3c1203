//! Whole-space constructions on compactly supported lattice data: heat
//! kernel quadrature and the principal-value Helmholtz projector.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::nsf1;
use crate::reduce;

/// Default kernel tail mass allowed outside the truncation ball.
pub const TAIL_MASS: f64 = 1e-10;

/// Three-dimensional heat kernel `(4 pi t)^{-3/2} exp(-|x|^2 / 4t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatKernel {
    t: f64,
}

impl HeatKernel {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidTime { t, constraint: "> 0" });
        }
        Ok(HeatKernel { t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Standard deviation of each coordinate, `sqrt(2t)`.
    pub fn width(&self) -> f64 {
        (2.0 * self.t).sqrt()
    }

    pub fn peak(&self) -> f64 {
        (4.0 * PI * self.t).powf(-1.5)
    }

    pub fn eval(&self, x: [f64; 3]) -> f64 {
        self.peak() * (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (4.0 * self.t)).exp()
    }

    /// One-dimensional factor `g(s)` or its first two derivatives.
    fn factor(&self, s: f64, order: u32) -> f64 {
        let t = self.t;
        let g = (4.0 * PI * t).powf(-0.5) * (-s * s / (4.0 * t)).exp();
        match order {
            0 => g,
            1 => -s / (2.0 * t) * g,
            2 => (s * s / (4.0 * t * t) - 1.0 / (2.0 * t)) * g,
            _ => unreachable!("order checked by caller"),
        }
    }

    /// `D^alpha Phi(x)` for `|alpha| <= 2`.
    pub fn derivative(&self, alpha: [u32; 3], x: [f64; 3]) -> Result<f64> {
        check_alpha(alpha)?;
        Ok((0..3).map(|i| self.factor(x[i], alpha[i])).product())
    }

    /// Radius outside which the kernel carries less than `tail` mass.
    pub fn truncation_radius(&self, tail: f64) -> f64 {
        self.width() * chi3_quantile(tail)
    }

    fn require_resolved(&self, h: f64) -> Result<()> {
        if h > 0.5 * self.width() {
            return Err(Error::KernelUnresolved { h, width: self.width(), t: self.t });
        }
        Ok(())
    }
}

fn check_alpha(alpha: [u32; 3]) -> Result<()> {
    if alpha.iter().sum::<u32>() > 2 {
        return Err(Error::Domain(format!("derivative kernels need |alpha| <= 2, got {alpha:?}")));
    }
    Ok(())
}

/// Mass of a standard 3D Gaussian beyond radius `s` standard deviations.
fn chi3_tail(s: f64) -> f64 {
    libm::erfc(s / 2f64.sqrt()) + (2.0 / PI).sqrt() * s * (-0.5 * s * s).exp()
}

fn chi3_quantile(tail: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 40.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chi3_tail(mid) < tail {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Lattice quadrature of the kernel over its truncation ball, on the
/// lattice `h Z^3`.
pub fn kernel_mass(t: f64, h: f64) -> Result<f64> {
    let k = HeatKernel::new(t)?;
    k.require_resolved(h)?;
    let rho = k.truncation_radius(TAIL_MASS);
    let m = (rho / h).ceil() as i64;
    let side = (2 * m + 1) as usize;
    let rho2 = rho * rho;
    let total = reduce::sum_indexed(side * side * side, |idx| {
        let i = (idx % side) as i64 - m;
        let j = ((idx / side) % side) as i64 - m;
        let l = (idx / (side * side)) as i64 - m;
        let x = [i as f64 * h, j as f64 * h, l as f64 * h];
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        if r2 <= rho2 {
            k.eval(x)
        } else {
            0.0
        }
    });
    Ok(total * h * h * h)
}

/// Uniform lattice `-R + i h`, `i = 0..n`, on each axis of `[-R, R]^3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    pub n: usize,
    pub radius: f64,
}

impl Lattice {
    pub fn new(n: usize, radius: f64) -> Result<Self> {
        if n < 3 || !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidGrid(format!("lattice n = {n}, R = {radius}")));
        }
        Ok(Lattice { n, radius })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.radius / (self.n - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.radius + i as f64 * self.spacing()
    }

    pub fn point(&self, idx: usize) -> [f64; 3] {
        let n = self.n;
        [self.coord(idx % n), self.coord((idx / n) % n), self.coord(idx / (n * n))]
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n * (j + self.n * k)
    }

    /// Index of `x` if it is a lattice node (to `1e-9` of a spacing).
    pub fn node_of(&self, x: [f64; 3]) -> Option<usize> {
        let h = self.spacing();
        let mut ijk = [0usize; 3];
        for a in 0..3 {
            let s = (x[a] + self.radius) / h;
            let r = s.round();
            if (s - r).abs() > 1e-9 || r < 0.0 || r > (self.n - 1) as f64 {
                return None;
            }
            ijk[a] = r as usize;
        }
        Some(self.index(ijk[0], ijk[1], ijk[2]))
    }
}

/// Sampled values on a lattice, one array per component.
#[derive(Clone, Debug)]
pub struct LatticeValues {
    pub lattice: Lattice,
    pub components: Vec<Vec<f64>>,
}

impl LatticeValues {
    /// Component-sum `L^q` norm by the rectangle rule.
    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        crate::fields::norms::validate_q(q)?;
        let h = self.lattice.spacing();
        let parts: Vec<(&[f64], f64)> = self.components.iter().map(|c| (c.as_slice(), 1.0)).collect();
        Ok(crate::fields::norms::lq_of_samples(&parts, q, h * h * h))
    }
}

/// Smooth compactly supported data sampled on a lattice.
#[derive(Clone, Debug)]
pub struct CompactField {
    values: LatticeValues,
    support: f64,
}

/// Samples outside the support radius must be below this magnitude.
const SUPPORT_TOL: f64 = 1e-14;

impl CompactField {
    pub fn new(lattice: Lattice, support: f64, components: Vec<Vec<f64>>) -> Result<Self> {
        if !(support > 0.0 && support < lattice.radius) {
            return Err(Error::Domain(format!(
                "support radius {support} must lie in (0, R = {})",
                lattice.radius
            )));
        }
        if components.len() != 1 && components.len() != 3 {
            return Err(Error::Domain(format!("{} components (expected 1 or 3)", components.len())));
        }
        for c in &components {
            if c.len() != lattice.len() {
                return Err(Error::Representation(format!("expected {} samples, got {}", lattice.len(), c.len())));
            }
        }
        for (idx, _) in components[0].iter().enumerate() {
            let x = lattice.point(idx);
            if norm(x) > support {
                if let Some(bad) = components.iter().map(|c| c[idx]).find(|v| v.abs() > SUPPORT_TOL) {
                    return Err(Error::Domain(format!(
                        "sample {bad:e} at {x:?} lies outside the support radius {support}"
                    )));
                }
            }
        }
        Ok(CompactField { values: LatticeValues { lattice, components }, support })
    }

    pub fn from_scalar_fn<F>(lattice: Lattice, support: f64, f: F) -> Result<Self>
    where
        F: Fn([f64; 3]) -> f64 + Sync,
    {
        let v = (0..lattice.len()).into_par_iter().map(|i| f(lattice.point(i))).collect();
        Self::new(lattice, support, vec![v])
    }

    pub fn from_vector_fn<F>(lattice: Lattice, support: f64, f: F) -> Result<Self>
    where
        F: Fn([f64; 3]) -> [f64; 3] + Sync,
    {
        let pts: Vec<[f64; 3]> = (0..lattice.len()).into_par_iter().map(|i| f(lattice.point(i))).collect();
        let comps = (0..3).map(|c| pts.iter().map(|p| p[c]).collect()).collect();
        Self::new(lattice, support, comps)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.values.lattice
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.values.components
    }

    pub fn values(&self) -> &LatticeValues {
        &self.values
    }

    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        self.values.lq_norm(q)
    }

    /// Nodes carrying data, as `(point, values)`.
    fn sources(&self) -> Vec<([f64; 3], Vec<f64>)> {
        let lat = self.values.lattice;
        (0..lat.len())
            .filter(|&i| self.values.components.iter().any(|c| c[i] != 0.0))
            .map(|i| (lat.point(i), self.values.components.iter().map(|c| c[i]).collect()))
            .collect()
    }

    /// NSF1 layout with an extra `f64` R after the header; the L slot holds
    /// `n h`.
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        let lat = self.values.lattice;
        w.write_all(nsf1::MAGIC)?;
        w.write_all(&(lat.n as u32).to_le_bytes())?;
        w.write_all(&(lat.spacing() * lat.n as f64).to_le_bytes())?;
        w.write_all(&lat.radius.to_le_bytes())?;
        w.write_all(&self.support.to_le_bytes())?;
        nsf1::write_samples(&mut w, self.values.components.iter().map(|c| c.as_slice()))?;
        w.flush()?;
        Ok(())
    }

    pub fn read<R: Read>(mut r: R) -> Result<Self> {
        let (n, _l) = nsf1::read_header(&mut r)?;
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let radius = f64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        let support = f64::from_le_bytes(b8);
        let lattice = Lattice::new(n, radius)?;
        let comps = nsf1::read_components(&mut r, lattice.len())?;
        Self::new(lattice, support, comps)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read(BufReader::new(File::open(path)?))
    }
}

fn norm(x: [f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// `D^alpha (Phi(t) * f)` at arbitrary points by direct quadrature over the
/// data inside the kernel's truncation ball. Returns one array per
/// component.
pub fn heat_convolve_r3(f: &CompactField, t: f64, points: &[[f64; 3]], alpha: [u32; 3]) -> Result<Vec<Vec<f64>>> {
    let k = HeatKernel::new(t)?;
    check_alpha(alpha)?;
    let h = f.lattice().spacing();
    k.require_resolved(h)?;
    let rho2 = k.truncation_radius(TAIL_MASS).powi(2);
    let src = f.sources();
    let nc = f.components().len();
    let cell = h * h * h;
    let per_point: Vec<Vec<f64>> = points
        .par_iter()
        .map(|&x| {
            (0..nc)
                .map(|c| {
                    let terms: Vec<f64> = src
                        .iter()
                        .filter_map(|(y, v)| {
                            let z = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
                            if z[0] * z[0] + z[1] * z[1] + z[2] * z[2] > rho2 {
                                return None;
                            }
                            let d: f64 = (0..3).map(|i| k.factor(z[i], alpha[i])).product();
                            Some(d * v[c])
                        })
                        .collect();
                    cell * reduce::pairwise_sum(&terms)
                })
                .collect()
        })
        .collect();
    Ok((0..nc).map(|c| per_point.iter().map(|p| p[c]).collect()).collect())
}

/// Same quadrature evaluated at every lattice node, using the separable
/// structure of the kernel (three 1D passes, no truncation).
pub fn heat_convolve_r3_lattice(f: &CompactField, t: f64, alpha: [u32; 3]) -> Result<LatticeValues> {
    let k = HeatKernel::new(t)?;
    check_alpha(alpha)?;
    let lat = *f.lattice();
    let h = lat.spacing();
    k.require_resolved(h)?;
    let n = lat.n;
    // taps[a][d] = h * g^{(alpha_a)}(d h), d in -(n-1)..=(n-1)
    let taps: Vec<Vec<f64>> = (0..3)
        .map(|a| {
            (0..2 * n - 1)
                .map(|d| h * k.factor((d as f64 - (n - 1) as f64) * h, alpha[a]))
                .collect()
        })
        .collect();
    let components = f
        .components()
        .iter()
        .map(|c| {
            let mut data = c.clone();
            for (axis, tap) in taps.iter().enumerate() {
                data = convolve_axis(&data, n, axis, tap);
            }
            data
        })
        .collect();
    Ok(LatticeValues { lattice: lat, components })
}

fn convolve_axis(data: &[f64], n: usize, axis: usize, taps: &[f64]) -> Vec<f64> {
    let stride = [1, n, n * n][axis];
    (0..data.len())
        .into_par_iter()
        .map(|idx| {
            let i = (idx / stride) % n;
            let base = idx - i * stride;
            let mut acc = 0.0;
            for j in 0..n {
                acc += taps[i + n - 1 - j] * data[base + j * stride];
            }
            acc
        })
        .collect()
}

/// Kernel `K_ij(z) = d_i d_j (1/|z|) = (3 z_i z_j - delta_ij |z|^2) / |z|^5`.
#[inline]
fn pv_kernel(z: [f64; 3], r2: f64) -> [[f64; 3]; 3] {
    let r5 = r2 * r2 * r2.sqrt();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (3.0 * z[i] * z[j] - if i == j { r2 } else { 0.0 }) / r5)
    })
}

/// Output of the principal-value projector.
#[derive(Clone, Debug)]
pub struct PvProjection {
    /// Extrapolated `w(x)` per evaluation point.
    pub values: Vec<[f64; 3]>,
    /// `|S(eps_last) - S(eps_prev)|` per point, the error proxy.
    pub increments: Vec<f64>,
}

/// Whole-space Helmholtz projection of a compactly supported vector field
/// by principal-value quadrature.
///
/// Because `d_i d_j (1/|z|) = PV K_ij - (4 pi / 3) delta_ij delta`, the
/// divergence-free part is
/// `w_j = (2/3) v_j + (1/4 pi) PV sum_i int K_ij(x - y) v_i(y) dy`.
/// The punched-ball sum is evaluated for every `eps` in the sequence and
/// Richardson-extrapolated in `eps^2` from the last two levels.
pub fn helmholtz_pv_r3(v: &CompactField, points: &[[f64; 3]], eps: &[f64]) -> Result<PvProjection> {
    if v.components().len() != 3 {
        return Err(Error::Domain("the projector needs a 3-component field".into()));
    }
    if eps.len() < 2 {
        return Err(Error::EpsSequence("need at least two levels".into()));
    }
    if eps.windows(2).any(|w| !(w[1] < w[0])) || eps.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::EpsSequence("levels must be positive and strictly decreasing".into()));
    }
    let lat = *v.lattice();
    let h = lat.spacing();
    let floor = *eps.last().unwrap();
    if floor < 2.0 * h {
        return Err(Error::EpsSequence(format!("floor {floor} is below twice the spacing {h}")));
    }
    let mut local = Vec::with_capacity(points.len());
    for &x in points {
        let node = lat.node_of(x);
        if node.is_none() && norm(x) < v.support() {
            return Err(Error::OffLattice(x));
        }
        local.push(node.map(|i| [v.components()[0][i], v.components()[1][i], v.components()[2][i]]));
    }
    let src = v.sources();
    let eps2: Vec<f64> = eps.iter().map(|e| e * e).collect();
    let nl = eps.len();
    let cell = h * h * h / (4.0 * PI);
    let results: Vec<([f64; 3], f64)> = points
        .par_iter()
        .zip(&local)
        .map(|(&x, vx)| {
            // shell[l] collects sources with eps_l <= |z| < eps_{l-1}
            let mut shell = vec![[0.0f64; 3]; nl];
            for (y, vy) in &src {
                let z = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
                let r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
                if r2 < eps2[nl - 1] {
                    continue;
                }
                let l = eps2.iter().position(|&e2| r2 >= e2).unwrap_or(nl - 1);
                let kk = pv_kernel(z, r2);
                for j in 0..3 {
                    shell[l][j] += kk[0][j] * vy[0] + kk[1][j] * vy[1] + kk[2][j] * vy[2];
                }
            }
            let mut level = [0.0f64; 3];
            let mut sums = Vec::with_capacity(nl);
            for s in &shell {
                for j in 0..3 {
                    level[j] += s[j];
                }
                sums.push(level.map(|a| a * cell));
            }
            let (a, b) = (&sums[nl - 2], &sums[nl - 1]);
            let (ea, eb) = (eps2[nl - 2], eps2[nl - 1]);
            let base = vx.map(|v| v.map(|c| 2.0 / 3.0 * c)).unwrap_or([0.0; 3]);
            let w = std::array::from_fn(|j| base[j] + (ea * b[j] - eb * a[j]) / (ea - eb));
            let inc = (0..3).map(|j| (b[j] - a[j]).powi(2)).sum::<f64>().sqrt();
            (w, inc)
        })
        .collect();
    Ok(PvProjection {
        values: results.iter().map(|r| r.0).collect(),
        increments: results.iter().map(|r| r.1).collect(),
    })
}

/// Component-sum `L^q` norm of point values with uniform weight `cell`.
pub fn point_values_lq(values: &[[f64; 3]], q: f64, cell: f64) -> Result<f64> {
    crate::fields::norms::validate_q(q)?;
    let comps: Vec<Vec<f64>> = (0..3).map(|j| values.iter().map(|v| v[j]).collect()).collect();
    let parts: Vec<(&[f64], f64)> = comps.iter().map(|c| (c.as_slice(), 1.0)).collect();
    Ok(crate::fields::norms::lq_of_samples(&parts, q, cell))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_basics() {
        let k = HeatKernel::new(1.0).unwrap();
        assert!((k.eval([0.0; 3]) - k.peak()).abs() < 1e-18);
        assert!(HeatKernel::new(0.0).is_err());
        assert!(chi3_tail(chi3_quantile(1e-10)) < 1e-10);
        let x = [0.3, -0.2, 0.5];
        let d = k.derivative([1, 0, 0], x).unwrap();
        let fd = (k.eval([0.3 + 1e-6, -0.2, 0.5]) - k.eval([0.3 - 1e-6, -0.2, 0.5])) / 2e-6;
        assert!((d - fd).abs() < 1e-8);
        assert!(k.derivative([1, 1, 1], x).is_err());
    }

    #[test]
    fn mass_close_to_one() {
        for t in [0.1, 1.0, 10.0] {
            let h = 0.5 * (2.0 * t as f64).sqrt();
            let m = kernel_mass(t, h).unwrap();
            assert!(m <= 1.0 && m >= 1.0 - 1e-6, "t={t}: {m}");
        }
        assert!(matches!(kernel_mass(0.1, 1.0), Err(Error::KernelUnresolved { .. })));
    }

    #[test]
    fn separable_matches_direct() {
        let lat = Lattice::new(21, 3.0).unwrap();
        let f = CompactField::from_scalar_fn(lat, 2.5, |x| {
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            if r2 < 6.25 { (-r2).exp() * (1.0 - r2 / 6.25).powi(3) } else { 0.0 }
        })
        .unwrap();
        let grid = heat_convolve_r3_lattice(&f, 0.5, [0, 1, 0]).unwrap();
        let idx = lat.index(12, 9, 10);
        let direct = heat_convolve_r3(&f, 0.5, &[lat.point(idx)], [0, 1, 0]).unwrap();
        assert!((grid.components[0][idx] - direct[0][0]).abs() < 1e-12);
    }

    #[test]
    fn support_and_eps_validation() {
        let lat = Lattice::new(11, 1.0).unwrap();
        assert!(CompactField::from_scalar_fn(lat, 0.5, |_| 1.0).is_err());
        let v = CompactField::from_vector_fn(lat, 0.5, |_| [0.0; 3]).unwrap();
        let h = lat.spacing();
        assert!(matches!(helmholtz_pv_r3(&v, &[[0.0; 3]], &[0.5, 0.6]), Err(Error::EpsSequence(_))));
        assert!(matches!(helmholtz_pv_r3(&v, &[[0.0; 3]], &[4.0 * h, h]), Err(Error::EpsSequence(_))));
        assert!(matches!(
            helmholtz_pv_r3(&v, &[[0.01, 0.0, 0.0]], &[4.0 * h, 2.0 * h]),
            Err(Error::OffLattice(_))
        ));
    }

    #[test]
    fn compact_round_trip() {
        let lat = Lattice::new(9, 1.0).unwrap();
        let f = CompactField::from_scalar_fn(lat, 0.8, |x| if norm(x) < 0.8 { 1.0 - norm(x) / 0.8 } else { 0.0 }).unwrap();
        let mut buf = Vec::new();
        f.write(&mut buf).unwrap();
        let g = CompactField::read(buf.as_slice()).unwrap();
        assert_eq!(g.components(), f.components());
        assert_eq!(g.support(), 0.8);
    }
}

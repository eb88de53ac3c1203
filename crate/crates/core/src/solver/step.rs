//! Integrating-factor RK4 (Lawson) stepping of the projected equations
//! `u_t = lap u - P(u . grad u)`.

use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{fft_plan, Complex64, GridSpec, ScalarField, VectorField, Wavenumbers};
use crate::operators::{convective, dealias_mask, leray_project, pressure_solve_with, sym};

type Coeffs = [Vec<Complex64>; 3];

/// Products formed per stage: `(a, a)` stands for `u_a^2 - u_3^2`.
const PRODUCTS: [(usize, usize); 5] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2)];
/// Slot in `PRODUCTS` for each entry of the symmetric index map; the
/// `(3, 3)` entry is zero.
const TRACELESS: [Option<usize>; 6] = [Some(0), Some(1), Some(2), Some(3), Some(4), None];

/// `P(u . grad u)`, the projected nonlinear term.
pub fn nonlinear_term(u: &VectorField, dealiased: bool) -> VectorField {
    leray_project(&convective(u, dealiased))
}

/// Velocity at time `t` in spectral form.
#[derive(Clone, Debug)]
pub struct SolverState {
    pub t: f64,
    pub step: usize,
    pub u: VectorField,
}

impl SolverState {
    pub fn new(u: VectorField) -> Self {
        SolverState { t: 0.0, step: 0, u: u.to_spectral() }
    }

    pub fn pressure(&self, dealiased: bool) -> ScalarField {
        pressure_solve_with(&self.u, dealiased)
    }
}

/// Fixed-step integrator with precomputed half-step heat factors.
pub struct Integrator {
    grid: GridSpec,
    dt: f64,
    half: Vec<f64>,
    full: Vec<f64>,
    ones: Vec<f64>,
    waves: Wavenumbers,
    keep: Vec<bool>,
    cut: Option<usize>,
    heat_only: bool,
    scratch: Mutex<Scratch>,
}

impl Integrator {
    pub fn new(grid: GridSpec, dt: f64, dealias: bool) -> Result<Self> {
        grid.validate()?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidTime { t: dt, constraint: "dt > 0" });
        }
        let kk = Wavenumbers::full(&grid);
        let half: Vec<f64> = (0..grid.spectral_len())
            .map(|idx| {
                let k = kk.at(idx);
                (-(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) * dt / 2.0).exp()
            })
            .collect();
        let keep = if dealias { dealias_mask(&grid, grid.dealias_cutoff()) } else { vec![true; grid.spectral_len()] };
        let cut = dealias.then(|| grid.dealias_cutoff() as usize);
        let full = half.iter().map(|h| h * h).collect();
        let ones = vec![1.0; grid.spectral_len()];
        Ok(Integrator {
            grid,
            dt,
            half,
            full,
            ones,
            waves: Wavenumbers::derivative(&grid),
            keep,
            cut,
            heat_only: false,
            scratch: Mutex::new(Scratch::new(&grid)),
        })
    }

    /// Drop the nonlinear term, leaving the exact heat flow.
    pub fn heat_only(mut self) -> Self {
        self.heat_only = true;
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// `-P(u . grad u)` on raw coefficients, written into `out`.
    fn rhs(&self, c: &Coeffs, bufs: &mut Buffers, out: &mut Coeffs) {
        let zero = Complex64::new(0.0, 0.0);
        if self.heat_only {
            out.iter_mut().for_each(|o| o.fill(zero));
            return;
        }
        let plan = fft_plan(self.grid.n);
        // The velocity is truncated to the band before the products are
        // formed and the products after, so both transforms skip the
        // pencils outside it.
        let cut = self.cut;
        let Buffers { work, phys, prod, spec } = bufs;
        c.par_iter()
            .zip(work.par_iter_mut())
            .zip(phys.par_iter_mut())
            .for_each(|((ci, w), u)| plan.inverse_into(ci, cut, w, u));
        // Subtracting u_3^2 from the diagonal changes the tendency by a
        // gradient, which the projection removes; five transforms remain.
        PRODUCTS.par_iter().zip(prod.par_iter_mut()).zip(spec.par_iter_mut()).for_each(|((&(a, b), pr), sp)| {
            let (x, y, w) = (&phys[a], &phys[b], &phys[2]);
            if a == b {
                for (i, z) in pr.iter_mut().enumerate() {
                    *z = x[i] * x[i] - w[i] * w[i];
                }
            } else {
                for (i, z) in pr.iter_mut().enumerate() {
                    *z = x[i] * y[i];
                }
            }
            plan.forward_into(pr, cut, sp);
        });
        let p = &*spec;
        let [o0, o1, o2] = out;
        o0.par_iter_mut()
            .zip(o1.par_iter_mut())
            .zip(o2.par_iter_mut())
            .enumerate()
            .for_each(|(idx, ((r0, r1), r2))| {
                if !self.keep[idx] {
                    (*r0, *r1, *r2) = (zero, zero, zero);
                    return;
                }
                let k = self.waves.at(idx);
                let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                // -i (k_b p_ab), then remove the component along k
                let pab = |a: usize, b: usize| match TRACELESS[sym(a, b)] {
                    Some(i) => p[i][idx],
                    None => zero,
                };
                let v: [Complex64; 3] = std::array::from_fn(|a| {
                    let s = pab(a, 0) * k[0] + pab(a, 1) * k[1] + pab(a, 2) * k[2];
                    Complex64::new(s.im, -s.re)
                });
                let kv = if k2 > 0.0 { (v[0] * k[0] + v[1] * k[1] + v[2] * k[2]) / k2 } else { zero };
                *r0 = v[0] - kv * k[0];
                *r1 = v[1] - kv * k[1];
                *r2 = v[2] - kv * k[2];
            });
    }

    /// `out = e1 * a + s * e2 * b` mode by mode, where `e1`, `e2` are powers
    /// (0, 1 or 2) of the half-step factor.
    fn combine(&self, a: &Coeffs, e1: i32, b: &Coeffs, s: f64, e2: i32, out: &mut Coeffs) {
        let (f1, f2) = (self.factor(e1), self.factor(e2));
        for j in 0..3 {
            out[j].par_chunks_mut(4096).enumerate().for_each(|(c, o)| {
                let base = c * 4096;
                for (m, o) in o.iter_mut().enumerate() {
                    let i = base + m;
                    *o = a[j][i] * f1[i] + b[j][i] * (s * f2[i]);
                }
            });
        }
    }

    /// Power 0, 1 or 2 of the half-step factor.
    fn factor(&self, e: i32) -> &[f64] {
        match e {
            0 => &self.ones,
            1 => &self.half,
            _ => &self.full,
        }
    }

    /// Advance one step. Fails with `Breakdown` when the new state is not
    /// finite.
    pub fn step(&self, state: &mut SolverState) -> Result<()> {
        let dt = self.dt;
        let mut guard = self.scratch.lock().unwrap_or_else(|e| e.into_inner());
        let Scratch { bufs, k, v } = &mut *guard;
        let [k1, k2, k3, k4] = k;
        let u = state.u.coefficients();
        self.rhs(&u, bufs, k1);
        self.combine(&u, 1, k1, dt / 2.0, 1, v);
        self.rhs(v, bufs, k2);
        self.combine(&u, 1, k2, dt / 2.0, 0, v);
        self.rhs(v, bufs, k3);
        self.combine(&u, 2, k3, dt, 1, v);
        self.rhs(v, bufs, k4);
        for j in 0..3 {
            let (uj, a, b, c, d) = (&u[j], &k1[j], &k2[j], &k3[j], &k4[j]);
            v[j].par_chunks_mut(4096).enumerate().for_each(|(ch, o)| {
                for (off, o) in o.iter_mut().enumerate() {
                    let m = ch * 4096 + off;
                    let (h, h2) = (self.half[m], self.full[m]);
                    *o = uj[m] * h2 + (a[m] * h2 + (b[m] + c[m]) * (2.0 * h) + d[m]) * (dt / 6.0);
                }
            });
            v[j][0] = Complex64::new(0.0, 0.0);
        }
        drop(u);
        state.t = (state.step + 1) as f64 * dt;
        state.step += 1;
        let finite = v.iter().all(|c| c.par_iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        if !finite {
            return Err(Error::Breakdown { t: state.t });
        }
        // the old state becomes next step's stage buffer
        std::mem::swap(v, state.u.coefficients_mut());
        Ok(())
    }
}

/// Transform buffers reused across right-hand-side evaluations.
struct Buffers {
    work: Vec<Vec<Complex64>>,
    phys: Vec<Vec<f64>>,
    prod: Vec<Vec<f64>>,
    spec: Vec<Vec<Complex64>>,
}

/// Stage storage for one step; large buffers are kept between steps
/// because fresh allocations of this size cost more than the transforms.
struct Scratch {
    bufs: Buffers,
    k: [Coeffs; 4],
    v: Coeffs,
}

impl Scratch {
    fn new(g: &GridSpec) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = || -> Coeffs { std::array::from_fn(|_| vec![zero; g.spectral_len()]) };
        Scratch {
            bufs: Buffers {
                work: vec![Vec::with_capacity(g.spectral_len()); 3],
                phys: vec![vec![0.0; g.len()]; 3],
                prod: vec![vec![0.0; g.len()]; 5],
                spec: vec![vec![zero; g.spectral_len()]; 5],
            },
            k: std::array::from_fn(|_| coeffs()),
            v: coeffs(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{divergence, norms, Field};
    use crate::solver::{initial_condition, IcSpec};
    use std::f64::consts::PI;

    #[test]
    fn shear_decays_exactly() {
        let g = GridSpec::periodic_2pi(16).unwrap();
        let u0 = initial_condition(&IcSpec::new("shear"), g).unwrap();
        let it = Integrator::new(g, 0.01, true).unwrap();
        let mut s = SolverState::new(u0.clone());
        for _ in 0..50 {
            it.step(&mut s).unwrap();
        }
        let expect = u0.scale((-s.t).exp());
        assert!(s.u.max_abs_diff(&expect).unwrap() < 1e-13);
        assert!((s.t - 0.5).abs() < 1e-15);
    }

    #[test]
    fn beltrami_is_exact() {
        // u x curl u = 0 for a curl eigenfield, so only diffusion acts
        let g = GridSpec::periodic_2pi(16).unwrap();
        let u0 = initial_condition(&IcSpec::new("abc_beltrami"), g).unwrap();
        let it = Integrator::new(g, 0.01, true).unwrap();
        let mut s = SolverState::new(u0.clone());
        for _ in 0..20 {
            it.step(&mut s).unwrap();
        }
        assert!(s.u.max_abs_diff(&u0.scale((-s.t).exp())).unwrap() < 1e-12);
    }

    #[test]
    fn stays_divergence_free_and_dissipates() {
        let g = GridSpec::periodic_2pi(16).unwrap();
        let u0 = initial_condition(&IcSpec::new("random_divfree").with("k0", 2.0).with("urms", 2.0), g).unwrap();
        let it = Integrator::new(g, 0.005, true).unwrap();
        let mut s = SolverState::new(u0);
        let mut e = norms::l2_norm_sq(&s.u);
        for _ in 0..20 {
            it.step(&mut s).unwrap();
            let e1 = norms::l2_norm_sq(&s.u);
            assert!(e1 < e);
            e = e1;
        }
        assert!(divergence(&s.u).max_abs() < 1e-11);
        assert!(s.u.mean().iter().all(|m| m.abs() < 1e-15));
        assert!(e / (2.0 * PI).powi(3) > 0.0);
    }

    #[test]
    fn breakdown_reported() {
        let g = GridSpec::periodic_2pi(16).unwrap();
        let u0 = initial_condition(&IcSpec::new("random_divfree").with("k0", 4.0).with("urms", 1e6), g).unwrap();
        let it = Integrator::new(g, 0.5, false).unwrap();
        let mut s = SolverState::new(u0);
        let err = (0..200).find_map(|_| it.step(&mut s).err()).expect("blows up");
        assert!(matches!(err, Error::Breakdown { .. }));
    }

    #[test]
    fn fused_rhs_matches_operators() {
        let g = GridSpec::periodic_2pi(16).unwrap();
        let u0 = initial_condition(&IcSpec::new("random_divfree").seeded(9), g).unwrap();
        let it = Integrator::new(g, 0.01, true).unwrap();
        let mut guard = it.scratch.lock().unwrap();
        let Scratch { bufs, k, .. } = &mut *guard;
        it.rhs(&u0.coefficients(), bufs, &mut k[0]);
        let fused = Field::from_coefficients(g, k[0].clone()).unwrap();
        let direct = nonlinear_term(&u0, true).scale(-1.0);
        assert!(fused.max_abs_diff(&direct).unwrap() < 1e-12);
    }
}

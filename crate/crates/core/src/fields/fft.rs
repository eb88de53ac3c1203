//! Real-to-complex 3D transforms on the `n^3` grid.
//!
//! Forward coefficients are normalized by `1/n^3` so that `c_0` is the
//! sample mean and the inverse is a plain Fourier sum. Real lines along x
//! are transformed two at a time as one complex line. The band-limited
//! variants skip pencils that are known to be zero.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct Plan3 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

type PlanCache = Mutex<HashMap<usize, Arc<Plan3>>>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub(crate) fn plan(n: usize) -> Arc<Plan3> {
    static CACHE: OnceLock<PlanCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("fft plan cache poisoned");
    map.entry(n)
        .or_insert_with(|| {
            let mut cp = FftPlanner::<f64>::new();
            Arc::new(Plan3 { n, fwd: cp.plan_fft_forward(n), inv: cp.plan_fft_inverse(n) })
        })
        .clone()
}

/// Which part of the half spectrum a transform must touch.
struct Band {
    /// Columns `kx < kx_count`.
    kx_count: usize,
    /// Rows `j` with `|m_y| <= cut` (all rows without a cut).
    rows: Vec<usize>,
    cut: Option<usize>,
}

impl Plan3 {
    fn nh(&self) -> usize {
        self.n / 2 + 1
    }

    fn band(&self, cut: Option<usize>) -> Band {
        let n = self.n;
        match cut {
            None => Band { kx_count: self.nh(), rows: (0..n).collect(), cut },
            Some(c) => Band {
                kx_count: (c + 1).min(self.nh()),
                rows: (0..n).filter(|&j| j.min(n - j) <= c).collect(),
                cut,
            },
        }
    }

    pub fn forward(&self, input: &[f64]) -> Vec<Complex64> {
        self.forward_band(input, None)
    }

    pub fn inverse(&self, spec: &[Complex64]) -> Vec<f64> {
        self.inverse_band(spec, None)
    }

    /// Forward transform keeping only modes with every `|m_i| <= cut`; the
    /// rest of the output is zero.
    pub fn forward_band(&self, input: &[f64], cut: Option<usize>) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.nh() * self.n * self.n];
        self.forward_into(input, cut, &mut out);
        out
    }

    /// [`Plan3::forward_band`] writing into a caller-owned buffer.
    pub fn forward_into(&self, input: &[f64], cut: Option<usize>, out: &mut [Complex64]) {
        let n = self.n;
        let nh = self.nh();
        assert_eq!(input.len(), n * n * n);
        assert_eq!(out.len(), nh * n * n);
        let band = self.band(cut);
        let scale = 1.0 / (n * n * n) as f64;
        let half = n / 2;
        out.par_chunks_mut(nh * n).zip(input.par_chunks(n * n)).for_each_init(
            || (vec![ZERO; half * n], vec![ZERO; self.fwd.get_inplace_scratch_len()]),
            |(buf, scratch), (oplane, iplane)| {
                for p in 0..half {
                    let a = &iplane[2 * p * n..(2 * p + 1) * n];
                    let b = &iplane[(2 * p + 1) * n..(2 * p + 2) * n];
                    for (slot, (x, y)) in buf[p * n..(p + 1) * n].iter_mut().zip(a.iter().zip(b)) {
                        *slot = Complex64::new(*x, *y);
                    }
                }
                self.fwd.process_with_scratch(buf, scratch);
                for p in 0..half {
                    let z = &buf[p * n..(p + 1) * n];
                    let (la, lb) = oplane[2 * p * nh..(2 * p + 2) * nh].split_at_mut(nh);
                    for m in 0..band.kx_count {
                        let zm = z[m];
                        let zc = z[(n - m) % n].conj();
                        la[m] = (zm + zc) * (0.5 * scale);
                        let d = (zm - zc) * (0.5 * scale);
                        // (zm - zc) / 2i
                        lb[m] = Complex64::new(d.im, -d.re);
                    }
                }
            },
        );
        self.y_pass(out, &self.fwd, band.kx_count);
        self.z_pass(out, &self.fwd, &band);
        if let Some(c) = band.cut {
            let keep = |m: usize| m.min(n - m) <= c;
            out.par_chunks_mut(nh * n).enumerate().for_each(|(k, plane)| {
                let kz_in = keep(k);
                for (j, row) in plane.chunks_mut(nh).enumerate() {
                    let row_in = kz_in && keep(j);
                    for (kx, z) in row.iter_mut().enumerate() {
                        if !row_in || kx > c {
                            *z = ZERO;
                        }
                    }
                }
            });
        }
    }

    /// Inverse transform of a spectrum whose modes with some `|m_i| > cut`
    /// are zero. Nothing outside the band is read.
    pub fn inverse_band(&self, spec: &[Complex64], cut: Option<usize>) -> Vec<f64> {
        let mut out = vec![0.0; self.n * self.n * self.n];
        self.inverse_into(spec, cut, &mut Vec::new(), &mut out);
        out
    }

    /// [`Plan3::inverse_band`] with caller-owned scratch and output, so
    /// repeated calls do not allocate.
    pub fn inverse_into(&self, spec: &[Complex64], cut: Option<usize>, work: &mut Vec<Complex64>, out: &mut [f64]) {
        let n = self.n;
        let nh = self.nh();
        assert_eq!(spec.len(), nh * n * n);
        assert_eq!(out.len(), n * n * n);
        let band = self.band(cut);
        work.clear();
        work.extend_from_slice(spec);
        if band.cut.is_some() {
            for plane in work.chunks_mut(nh * n) {
                for (j, row) in plane.chunks_mut(nh).enumerate() {
                    if band.rows.binary_search(&j).is_err() {
                        row.fill(ZERO);
                    } else {
                        row[band.kx_count..].fill(ZERO);
                    }
                }
            }
        }
        self.z_pass(work, &self.inv, &band);
        self.y_pass(work, &self.inv, band.kx_count);
        let half = n / 2;
        out.par_chunks_mut(n * n).zip(work.par_chunks(nh * n)).for_each_init(
            || (vec![ZERO; half * n], vec![ZERO; self.inv.get_inplace_scratch_len()]),
            |(buf, scratch), (oplane, splane)| {
                for p in 0..half {
                    let la = &splane[2 * p * nh..(2 * p + 1) * nh];
                    let lb = &splane[(2 * p + 1) * nh..(2 * p + 2) * nh];
                    let z = &mut buf[p * n..(p + 1) * n];
                    // the imaginary parts of the self-conjugate modes are ignored
                    let fix = |c: Complex64, m: usize| if m == 0 || m == n / 2 { Complex64::new(c.re, 0.0) } else { c };
                    for m in 0..nh {
                        let (a, b) = (fix(la[m], m), fix(lb[m], m));
                        z[m] = a + Complex64::new(-b.im, b.re);
                    }
                    for m in nh..n {
                        let (a, b) = (la[n - m].conj(), lb[n - m].conj());
                        z[m] = a + Complex64::new(-b.im, b.re);
                    }
                }
                self.inv.process_with_scratch(buf, scratch);
                for p in 0..half {
                    let z = &buf[p * n..(p + 1) * n];
                    let (a, b) = oplane[2 * p * n..(2 * p + 2) * n].split_at_mut(n);
                    for i in 0..n {
                        a[i] = z[i].re;
                        b[i] = z[i].im;
                    }
                }
            },
        );
    }

    /// Transform along y inside each z-plane, columns `kx < kx_count` only.
    fn y_pass(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>, kx_count: usize) {
        let n = self.n;
        let nh = self.nh();
        data.par_chunks_mut(nh * n).for_each_init(
            || (vec![ZERO; kx_count * n], vec![ZERO; fft.get_inplace_scratch_len()]),
            |(tmp, scratch), plane| {
                for j in 0..n {
                    for kx in 0..kx_count {
                        tmp[kx * n + j] = plane[kx + nh * j];
                    }
                }
                fft.process_with_scratch(tmp, scratch);
                for j in 0..n {
                    for kx in 0..kx_count {
                        plane[kx + nh * j] = tmp[kx * n + j];
                    }
                }
            },
        );
    }

    /// Transform along z. Each task owns one `j` row of every z-plane,
    /// gathers it into pencils, transforms and scatters it back.
    fn z_pass(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>, band: &Band) {
        let n = self.n;
        let nh = self.nh();
        let plane = nh * n;
        let w = band.kx_count;
        let base = SharedMut(data.as_mut_ptr());
        band.rows.par_iter().for_each_init(
            || (vec![ZERO; w * n], vec![ZERO; fft.get_inplace_scratch_len()]),
            |(block, scratch), &j| {
                let ptr = base.get();
                for k in 0..n {
                    // SAFETY: row j of plane k lies inside `data`, and rows
                    // with different j never overlap, so tasks are disjoint.
                    let row = unsafe { std::slice::from_raw_parts(ptr.add(plane * k + nh * j), w) };
                    for (kx, z) in row.iter().enumerate() {
                        block[kx * n + k] = *z;
                    }
                }
                fft.process_with_scratch(block, scratch);
                for k in 0..n {
                    // SAFETY: as above.
                    let row = unsafe { std::slice::from_raw_parts_mut(ptr.add(plane * k + nh * j), w) };
                    for (kx, z) in row.iter_mut().enumerate() {
                        *z = block[kx * n + k];
                    }
                }
            },
        );
    }
}

/// A raw pointer that tasks writing provably disjoint regions may share.
#[derive(Clone, Copy)]
struct SharedMut(*mut Complex64);

// SAFETY: only used by `z_pass`, whose tasks touch disjoint elements.
unsafe impl Send for SharedMut {}
unsafe impl Sync for SharedMut {}

impl SharedMut {
    fn get(self) -> *mut Complex64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_coefficients() {
        let n = 8;
        let p = plan(n);
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let mut x = vec![0.0; n * n * n];
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    x[i + n * (j + n * k)] = (h * j as f64).sin() + 0.5;
                }
            }
        }
        let c = p.forward(&x);
        let nh = n / 2 + 1;
        assert!((c[0].re - 0.5).abs() < 1e-15);
        // sin y = (e^{iy} - e^{-iy}) / 2i
        let plus = c[nh];
        let minus = c[nh * (n - 1)];
        assert!((plus - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((minus - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        let nonzero = c.iter().filter(|z| z.norm() > 1e-14).count();
        assert_eq!(nonzero, 3);
    }

    #[test]
    fn round_trip() {
        let n = 16;
        let p = plan(n);
        let x: Vec<f64> = (0..n * n * n).map(|i| ((i * 7919) % 1013) as f64 / 1013.0 - 0.5).collect();
        let y = p.inverse(&p.forward(&x));
        let err = x.iter().zip(&y).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-13, "round trip error {err}");
    }

    #[test]
    fn band_limited_transforms_match_masking() {
        let n = 12;
        let p = plan(n);
        let cut = (n - 1) / 3;
        let x: Vec<f64> = (0..n * n * n).map(|i| ((i * 7919) % 1013) as f64 / 1013.0 - 0.5).collect();
        let full = p.forward(&x);
        let band = p.forward_band(&x, Some(cut));
        let nh = n / 2 + 1;
        let inside = |idx: usize| {
            let (kx, j, k) = (idx % nh, (idx / nh) % n, idx / (nh * n));
            kx <= cut && j.min(n - j) <= cut && k.min(n - k) <= cut
        };
        let mut masked = full.clone();
        for (idx, z) in masked.iter_mut().enumerate() {
            if inside(idx) {
                assert!((*z - band[idx]).norm() < 1e-15);
            } else {
                assert_eq!(band[idx], ZERO);
                *z = ZERO;
            }
        }
        let a = p.inverse(&masked);
        let b = p.inverse_band(&masked, Some(cut));
        let err = a.iter().zip(&b).fold(0.0_f64, |m, (u, v)| m.max((u - v).abs()));
        assert!(err < 1e-14, "{err}");
    }
}

// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Truncated number-basis oracle.
//!
//! Nothing here calls into [`crate::coherent`] beyond reading the terms of a
//! superposition in [`FockVector::from_coherent`]. Amplitudes, the beam
//! splitter, the loss isometry and the partial trace are all implemented
//! directly on dense arrays.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::coherent::CoherentSuperposition;
use crate::error::{Error, Result};

/// Truncation loss above this flags a conversion as under-resolved.
pub const TRUNCATION_WARN: f64 = 1e-3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `ceil(lambda + 8 sqrt(lambda) + 10)` for the largest `|amp|^2`.
pub fn default_cutoff(max_amp_sqr: f64) -> usize {
    let l = max_amp_sqr.max(0.0);
    (l + 8.0 * l.sqrt() + 10.0).ceil() as usize
}

/// Upper bound on the Poisson tail `sum_{n > cutoff} e^{-l} l^n / n!`.
pub fn poisson_tail(amp_sq: f64, cutoff: usize) -> f64 {
    if amp_sq <= 0.0 {
        return 0.0;
    }
    let ln_l = amp_sq.ln();
    let mut n = cutoff + 1;
    let mut ln_term = -amp_sq + n as f64 * ln_l - (2..=n).map(|k| (k as f64).ln()).sum::<f64>();
    let mut sum = 0.0;
    loop {
        let term = ln_term.exp();
        sum += term;
        let ratio = amp_sq / (n + 1) as f64;
        if ratio < 0.5 && (term <= sum * 1e-17 || term < 1e-300) {
            // Remaining terms are dominated by a geometric series.
            return sum + term * ratio / (1.0 - ratio);
        }
        n += 1;
        ln_term += ln_l - (n as f64).ln();
    }
}

/// Number-basis amplitudes `<n|a>` for `n = 0..=cutoff`, by recurrence.
fn coherent_column(a: Complex64, cutoff: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(cutoff + 1);
    let mut cur = Complex64::new((-0.5 * a.norm_sqr()).exp(), 0.0);
    out.push(cur);
    for n in 1..=cutoff {
        cur = cur * a / (n as f64).sqrt();
        out.push(cur);
    }
    out
}

/// Dense truncated state over modes with per-mode cutoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    cutoffs: Vec<usize>,
    amps: Vec<Complex64>,
}

impl FockVector {
    pub fn zeros(cutoffs: Vec<usize>) -> Self {
        let size = cutoffs.iter().map(|c| c + 1).product();
        Self { cutoffs, amps: vec![ZERO; size] }
    }

    pub fn vacuum(cutoffs: Vec<usize>) -> Self {
        let mut v = Self::zeros(cutoffs);
        v.amps[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// Builds a vector from `(occupations, amplitude)` pairs.
    pub fn from_components(cutoffs: Vec<usize>, comps: &[(Vec<usize>, Complex64)]) -> Result<Self> {
        let mut v = Self::zeros(cutoffs);
        for (occ, amp) in comps {
            let idx = v.index_of(occ)?;
            v.amps[idx] += amp;
        }
        Ok(v)
    }

    /// Expands every coherent ket in the number basis, one cutoff per mode.
    pub fn from_coherent(s: &CoherentSuperposition, cutoffs: Vec<usize>) -> Result<Self> {
        if cutoffs.len() != s.n_modes() {
            return Err(Error::ShapeMismatch(format!(
                "{} cutoffs for a {}-mode state",
                cutoffs.len(),
                s.n_modes()
            )));
        }
        if cutoffs.iter().any(|&c| c < 1) {
            return Err(Error::InvalidParameter("cutoff must be at least 1".into()));
        }
        let mut v = Self::zeros(cutoffs);
        let dims = v.dims();
        for t in s.terms() {
            let cols: Vec<Vec<Complex64>> =
                t.amps.iter().zip(&v.cutoffs).map(|(a, &c)| coherent_column(*a, c)).collect();
            // Build the outer product mode by mode.
            let mut block = vec![t.coeff];
            for (m, col) in cols.iter().enumerate() {
                let mut next = Vec::with_capacity(block.len() * dims[m]);
                for b in &block {
                    next.extend(col.iter().map(|x| b * x));
                }
                block = next;
            }
            for (dst, src) in v.amps.iter_mut().zip(block) {
                *dst += src;
            }
        }
        Ok(v)
    }

    /// Conversion with the same cutoff on every mode.
    pub fn from_coherent_uniform(s: &CoherentSuperposition, cutoff: usize) -> Result<Self> {
        Self::from_coherent(s, vec![cutoff; s.n_modes()])
    }

    /// Conversion with [`default_cutoff`] on every mode.
    pub fn from_coherent_default(s: &CoherentSuperposition) -> Result<Self> {
        Self::from_coherent_uniform(s, default_cutoff(s.max_amp_sqr()))
    }

    pub fn n_modes(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    fn dims(&self) -> Vec<usize> {
        self.cutoffs.iter().map(|c| c + 1).collect()
    }

    fn strides(&self) -> Vec<usize> {
        let dims = self.dims();
        let mut s = vec![1; dims.len()];
        for m in (0..dims.len().saturating_sub(1)).rev() {
            s[m] = s[m + 1] * dims[m + 1];
        }
        s
    }

    fn index_of(&self, occ: &[usize]) -> Result<usize> {
        if occ.len() != self.n_modes() {
            return Err(Error::ShapeMismatch("occupation length".into()));
        }
        let strides = self.strides();
        let mut idx = 0;
        for (m, (&n, &c)) in occ.iter().zip(&self.cutoffs).enumerate() {
            if n > c {
                return Err(Error::InvalidParameter(format!("occupation {n} exceeds cutoff {c}")));
            }
            idx += n * strides[m];
        }
        Ok(idx)
    }

    fn occupations(&self, mut idx: usize) -> Vec<usize> {
        let dims = self.dims();
        let mut occ = vec![0; dims.len()];
        for m in (0..dims.len()).rev() {
            occ[m] = idx % dims[m];
            idx /= dims[m];
        }
        occ
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `1 - <v|v>`, meaningful for conversions of unit-norm states.
    pub fn truncation_loss(&self) -> f64 {
        (1.0 - self.norm_sqr()).max(0.0)
    }

    pub fn is_under_resolved(&self) -> bool {
        self.truncation_loss() > TRUNCATION_WARN
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.cutoffs != other.cutoffs {
            return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.cutoffs, other.cutoffs)));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Squared weight in the even and odd total-photon-number sectors.
    pub fn parity_masses(&self) -> (f64, f64) {
        let mut even = 0.0;
        let mut odd = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            let total: usize = self.occupations(i).iter().sum();
            if total.is_multiple_of(2) {
                even += a.norm_sqr();
            } else {
                odd += a.norm_sqr();
            }
        }
        (even, odd)
    }

    pub fn mean_photon_number(&self, mode: usize) -> Result<f64> {
        self.check_mode(mode)?;
        let norm = self.norm_sqr();
        let mut acc = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            acc += self.occupations(i)[mode] as f64 * a.norm_sqr();
        }
        Ok(acc / norm)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes() {
            return Err(Error::InvalidMode { mode, n_modes: self.n_modes() });
        }
        Ok(())
    }

    /// Projects `mode` onto `|n>` and removes it; returns the remainder and
    /// its squared norm.
    pub fn project(&self, mode: usize, n: usize) -> Result<(Self, f64)> {
        self.check_mode(mode)?;
        let mut cutoffs = self.cutoffs.clone();
        cutoffs.remove(mode);
        let mut out = Self::zeros(cutoffs);
        if n <= self.cutoffs[mode] {
            let stride = self.strides()[mode];
            let dim = self.cutoffs[mode] + 1;
            for (dst, slot) in out.amps.iter_mut().enumerate() {
                let outer = dst / stride;
                let inner = dst % stride;
                *slot = self.amps[(outer * dim + n) * stride + inner];
            }
        }
        let p = out.norm_sqr();
        Ok((out, p))
    }

    /// Loss isometry `|n> -> sum_j sqrt(C(n, j)) eta^{(n-j)/2} (1-eta)^{j/2} |n-j>|j>_E`
    /// with the environment mode appended last.
    pub fn loss(&self, mode: usize, eta: f64, env_cutoff: usize) -> Result<Self> {
        self.check_mode(mode)?;
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::EtaOutOfRange(eta));
        }
        let c = self.cutoffs[mode];
        let mut table = vec![vec![0.0; env_cutoff + 1]; c + 1];
        for (n, row) in table.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate().take(n.min(env_cutoff) + 1) {
                let ln_binom = ln_fact(n) - ln_fact(j) - ln_fact(n - j);
                let mut v = (0.5 * ln_binom).exp();
                v *= eta.powf(0.5 * (n - j) as f64);
                v *= (1.0 - eta).powf(0.5 * j as f64);
                *entry = v;
            }
        }
        let mut cutoffs = self.cutoffs.clone();
        cutoffs.push(env_cutoff);
        let mut out = Self::zeros(cutoffs);
        let stride = self.strides()[mode];
        let dim = c + 1;
        let env_dim = env_cutoff + 1;
        for (idx, a) in self.amps.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            let n = (idx / stride) % dim;
            for (j, &w) in table[n].iter().enumerate().take(n.min(env_cutoff) + 1) {
                if w == 0.0 {
                    continue;
                }
                let base = idx - j * stride;
                out.amps[base * env_dim + j] += a * w;
            }
        }
        Ok(out)
    }

    /// 50/50 beam splitter with `a^dag -> (a^dag + b^dag)/sqrt 2`,
    /// `b^dag -> (a^dag - b^dag)/sqrt 2`, i.e. coherent amplitudes
    /// `(x, y) -> ((x + y)/sqrt 2, (x - y)/sqrt 2)`. Output occupations above
    /// the cutoffs are discarded.
    pub fn beam_splitter(&self, mode_i: usize, mode_j: usize) -> Result<Self> {
        self.check_mode(mode_i)?;
        self.check_mode(mode_j)?;
        if mode_i == mode_j {
            return Err(Error::SameMode(mode_i));
        }
        let ci = self.cutoffs[mode_i];
        let cj = self.cutoffs[mode_j];
        let sectors = BeamSplitterSectors::new(ci, cj);
        let strides = self.strides();
        let (si, sj) = (strides[mode_i], strides[mode_j]);
        let mut out = Self::zeros(self.cutoffs.clone());
        for (idx, a) in self.amps.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            let n = (idx / si) % (ci + 1);
            let m = (idx / sj) % (cj + 1);
            let rest = idx - n * si - m * sj;
            let col = sectors.column(n, m);
            let total = n + m;
            for (p, u) in col.iter().enumerate() {
                let q = total - p;
                if p > ci || q > cj || *u == 0.0 {
                    continue;
                }
                out.amps[rest + p * si + q * sj] += a * *u;
            }
        }
        Ok(out)
    }

    /// Reduced density matrix over `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<FockDensity> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        for (i, &m) in keep.iter().enumerate() {
            self.check_mode(m)?;
            if keep[..i].contains(&m) {
                return Err(Error::InvalidParameter(format!("mode {m} listed twice")));
            }
        }
        let traced: Vec<usize> = (0..self.n_modes()).filter(|m| !keep.contains(m)).collect();
        let dims = self.dims();
        let dk: usize = keep.iter().map(|&m| dims[m]).product();
        let dt: usize = traced.iter().map(|&m| dims[m]).product();
        let mut mat = DMatrix::from_element(dk, dt, ZERO);
        for (idx, a) in self.amps.iter().enumerate() {
            let occ = self.occupations(idx);
            let r = keep.iter().fold(0, |acc, &m| acc * dims[m] + occ[m]);
            let c = traced.iter().fold(0, |acc, &m| acc * dims[m] + occ[m]);
            mat[(r, c)] = *a;
        }
        let matrix = &mat * mat.adjoint();
        Ok(FockDensity { dims: keep.iter().map(|&m| dims[m]).collect(), matrix })
    }
}

fn ln_fact(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Beam-splitter images of `|n, m>` built by applying the transformed
/// creation operators one photon at a time.
struct BeamSplitterSectors {
    cj: usize,
    // columns[n * (cj + 1) + m][p] = <p, n+m-p| U |n, m>
    columns: Vec<Vec<f64>>,
}

impl BeamSplitterSectors {
    fn new(ci: usize, cj: usize) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut columns: Vec<Vec<f64>> = vec![Vec::new(); (ci + 1) * (cj + 1)];
        columns[0] = vec![1.0];
        // raise(v, sign): (a^dag + sign b^dag)/sqrt2 on a vector over p of
        // |p, N-p>, giving a vector over the N+1 sector.
        let raise = |v: &[f64], sign: f64| -> Vec<f64> {
            let total = v.len() - 1;
            let mut out = vec![0.0; total + 2];
            for (p, x) in v.iter().enumerate() {
                let q = total - p;
                out[p + 1] += h * x * ((p + 1) as f64).sqrt();
                out[p] += sign * h * x * ((q + 1) as f64).sqrt();
            }
            out
        };
        for m in 1..=cj {
            let prev = &columns[m - 1];
            let scaled: Vec<f64> = raise(prev, -1.0).into_iter().map(|x| x / (m as f64).sqrt()).collect();
            columns[m] = scaled;
        }
        for n in 1..=ci {
            for m in 0..=cj {
                let prev = &columns[(n - 1) * (cj + 1) + m];
                let scaled: Vec<f64> = raise(prev, 1.0).into_iter().map(|x| x / (n as f64).sqrt()).collect();
                columns[n * (cj + 1) + m] = scaled;
            }
        }
        Self { cj, columns }
    }

    fn column(&self, n: usize, m: usize) -> &[f64] {
        &self.columns[n * (self.cj + 1) + m]
    }
}

/// Dense reduced density over the kept modes' truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensity {
    dims: Vec<usize>,
    matrix: DMatrix<Complex64>,
}

impl FockDensity {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// `<v|rho|v>`.
    pub fn sandwich(&self, v: &FockVector) -> Result<f64> {
        let dims: Vec<usize> = v.cutoffs().iter().map(|c| c + 1).collect();
        if dims != self.dims {
            return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", dims, self.dims)));
        }
        let x = nalgebra::DVector::from_column_slice(v.amps());
        Ok((x.adjoint() * &self.matrix * &x)[(0, 0)].re)
    }
}

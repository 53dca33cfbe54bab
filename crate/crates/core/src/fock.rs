//! S2-symmetric Fock space truncated at a maximal particle number.
//!
//! Sector `n` holds a dense tensor over `grid^n` in the weighted
//! convention: entry `(i1..in)` is `prod_k sqrt(w_{ik})` times the wave
//! function at the node tuple, so plain Euclidean sums realize the L2
//! norms sector by sector. The Zamolodchikov-Faddeev creation and
//! annihilation operators, the field built from them, the Poincare
//! representation and the PCT conjugation all act on these tensors.
//!
//! Symmetrization is by explicit enumeration of the `n!` permutations,
//! each weighted by the product of scattering factors over its
//! inversions; the particle cutoff is capped at 4 to keep that feasible.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::RapidityGrid;
use crate::scalar::{cx_abs, cx_exp, lit, Real};
use crate::scattering::ScatteringFunction;

/// Hard cap on the particle-number truncation.
pub const N_MAX_LIMIT: usize = 4;

/// One-particle coefficient vector on the grid (weighted convention).
pub type Smearing<T> = DVector<Complex<T>>;

/// Dense amplitude tensor of one particle-number sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorTensor<T: Real> {
    n: usize,
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> SectorTensor<T> {
    pub fn zeros(n: usize, dim: usize) -> Self {
        let len = dim.pow(n as u32);
        Self {
            n,
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); len],
        }
    }

    pub fn from_data(n: usize, dim: usize, data: Vec<Complex<T>>) -> Self {
        assert_eq!(data.len(), dim.pow(n as u32));
        Self { n, dim, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    /// Decode a flat index into a multi-index (first axis slowest).
    pub fn decode(&self, mut flat: usize, idx: &mut [usize]) {
        for k in (0..self.n).rev() {
            idx[k] = flat % self.dim;
            flat /= self.dim;
        }
    }

    pub fn encode(&self, idx: &[usize]) -> usize {
        let mut flat = 0;
        for &i in idx {
            flat = flat * self.dim + i;
        }
        flat
    }

    /// Squared Euclidean norm, fixed summation order.
    pub fn norm_sqr(&self) -> T {
        let mut acc = T::zero();
        for z in &self.data {
            acc += z.norm_sqr();
        }
        acc
    }

    pub fn scale(&mut self, c: Complex<T>) {
        for z in &mut self.data {
            *z *= c;
        }
    }
}

/// Truncated Fock vector: tensors for sectors `0..=top`.
#[derive(Debug, Clone)]
pub struct FockVector<T: Real> {
    sectors: Vec<SectorTensor<T>>,
    dim: usize,
}

impl<T: Real> FockVector<T> {
    /// The vacuum: sector 0 equal to one.
    pub fn vacuum(dim: usize) -> Self {
        let mut s0 = SectorTensor::zeros(0, dim);
        s0.data[0] = Complex::new(T::one(), T::zero());
        Self {
            sectors: vec![s0],
            dim,
        }
    }

    pub fn from_sectors(dim: usize, sectors: Vec<SectorTensor<T>>) -> Self {
        for (n, s) in sectors.iter().enumerate() {
            assert_eq!(s.n, n);
            assert_eq!(s.dim, dim);
        }
        Self { sectors, dim }
    }

    /// A vector occupying only the one-particle sector.
    pub fn one_particle(f: &Smearing<T>) -> Self {
        let dim = f.len();
        let s0 = SectorTensor::zeros(0, dim);
        let s1 = SectorTensor::from_data(1, dim, f.iter().copied().collect());
        Self {
            sectors: vec![s0, s1],
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Highest allocated sector index.
    pub fn top(&self) -> usize {
        self.sectors.len() - 1
    }

    /// Highest sector with a nonzero amplitude, if any.
    pub fn top_occupied(&self) -> Option<usize> {
        (0..self.sectors.len()).rev().find(|&n| self.sectors[n].norm_sqr() > T::zero())
    }

    pub fn sector(&self, n: usize) -> Option<&SectorTensor<T>> {
        self.sectors.get(n)
    }

    pub fn sector_mut(&mut self, n: usize) -> Option<&mut SectorTensor<T>> {
        self.sectors.get_mut(n)
    }

    /// Per-sector squared norms.
    pub fn sector_norms_sqr(&self) -> Vec<T> {
        self.sectors.iter().map(|s| s.norm_sqr()).collect()
    }

    pub fn norm(&self) -> T {
        let mut acc = T::zero();
        for s in &self.sectors {
            acc += s.norm_sqr();
        }
        acc.sqrt()
    }

    /// Inner product, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (a, b) in self.sectors.iter().zip(&other.sectors) {
            for (x, y) in a.data.iter().zip(&b.data) {
                acc += x.conj() * *y;
            }
        }
        acc
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        let mut out = self.clone();
        for s in &mut out.sectors {
            s.scale(c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.sectors.len() >= other.sectors.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = long.clone();
        for (n, s) in short.sectors.iter().enumerate() {
            for (a, b) in out.sectors[n].data.iter_mut().zip(&s.data) {
                *a += *b;
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(Complex::new(-T::one(), T::zero())))
    }
}

/// Norms of the three smeared Zamolodchikov-Faddeev relation defects.
#[derive(Debug, Clone, Copy)]
pub struct ZfResiduals<T> {
    /// `z(g) zd(f) - exchange - <g,f> 1` applied to the probe.
    pub mixed: T,
    /// Creator exchange relation defect.
    pub creators: T,
    /// Annihilator exchange relation defect.
    pub annihilators: T,
}

impl<T: Real> ZfResiduals<T> {
    pub fn max(&self) -> T {
        self.mixed.max(self.creators).max(self.annihilators)
    }
}

/// Permutations of `0..n` with their inversion pair lists, cached per `n`.
fn permutations_with_inversions(n: usize) -> Vec<(Vec<usize>, Vec<(usize, usize)>)> {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for k in 0..n {
        let mut next = Vec::new();
        for p in &perms {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        perms = next;
    }
    perms
        .into_iter()
        .map(|p| {
            let mut inv = Vec::new();
            for a in 0..n {
                for b in (a + 1)..n {
                    if p[a] > p[b] {
                        inv.push((a, b));
                    }
                }
            }
            (p, inv)
        })
        .collect()
}

/// The discretized S2-symmetric Fock space: grid, scattering model and
/// particle cutoff, with the pairwise scattering table precomputed.
#[derive(Debug, Clone)]
pub struct FockSpace<T: Real> {
    grid: RapidityGrid<T>,
    scattering: ScatteringFunction<T>,
    mass: T,
    n_max: usize,
    /// `s_table[(i, j)] = S2(t_i - t_j)`.
    s_table: DMatrix<Complex<T>>,
}

impl<T: Real> FockSpace<T> {
    pub fn new(
        grid: RapidityGrid<T>,
        scattering: ScatteringFunction<T>,
        mass: T,
        n_max: usize,
    ) -> Result<Self> {
        if n_max > N_MAX_LIMIT {
            return Err(Error::Config(format!(
                "n_max = {n_max} exceeds the supported maximum {N_MAX_LIMIT}"
            )));
        }
        if mass <= T::zero() {
            return Err(Error::Config("mass must be positive".into()));
        }
        let m = grid.len();
        let s_table = DMatrix::from_fn(m, m, |i, j| {
            scattering.eval_real(grid.nodes()[i] - grid.nodes()[j])
        });
        Ok(Self {
            grid,
            scattering,
            mass,
            n_max,
            s_table,
        })
    }

    pub fn grid(&self) -> &RapidityGrid<T> {
        &self.grid
    }

    pub fn scattering(&self) -> &ScatteringFunction<T> {
        &self.scattering
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn vacuum(&self) -> FockVector<T> {
        FockVector::vacuum(self.grid.len())
    }

    /// S2-symmetric part of a raw sector tensor: average over all `n!`
    /// permutations, each weighted by the product of scattering factors
    /// over the permutation's inversions. Idempotent.
    pub fn symmetrize(&self, t: &SectorTensor<T>) -> Result<SectorTensor<T>> {
        if t.n > self.n_max {
            return Err(Error::Capacity(format!(
                "cannot symmetrize a {}-particle tensor with n_max = {}",
                t.n, self.n_max
            )));
        }
        if t.n <= 1 {
            return Ok(t.clone());
        }
        let n = t.n;
        let dim = t.dim;
        let perms = permutations_with_inversions(n);
        let inv_fact = T::one() / lit::<T>(perms.len() as f64);
        let mut out = SectorTensor::zeros(n, dim);
        let mut idx = vec![0usize; n];
        let mut pidx = vec![0usize; n];
        for flat in 0..t.data.len() {
            t.decode(flat, &mut idx);
            let mut acc = Complex::new(T::zero(), T::zero());
            for (perm, inversions) in &perms {
                for k in 0..n {
                    pidx[k] = idx[perm[k]];
                }
                let mut w = Complex::new(T::one(), T::zero());
                for &(a, b) in inversions {
                    w *= self.s_table[(idx[perm[a]], idx[perm[b]])];
                }
                acc += w * t.data[t.encode(&pidx)];
            }
            out.data[flat] = acc * Complex::new(inv_fact, T::zero());
        }
        Ok(out)
    }

    /// Worst-case relative defect of the adjacent-transposition symmetry
    /// over all sectors of `psi`.
    pub fn symmetry_residual(&self, psi: &FockVector<T>) -> T {
        let mut worst = T::zero();
        for s in &psi.sectors {
            if s.n < 2 {
                continue;
            }
            let norm = s.norm_sqr().sqrt();
            if norm <= T::zero() {
                continue;
            }
            let mut idx = vec![0usize; s.n];
            let mut sidx = vec![0usize; s.n];
            for flat in 0..s.data.len() {
                s.decode(flat, &mut idx);
                for pos in 0..s.n - 1 {
                    sidx.copy_from_slice(&idx);
                    sidx.swap(pos, pos + 1);
                    // psi(.., t_{i+1}, t_i, ..) = S2(t_i - t_{i+1}) psi(..)
                    let lhs = s.data[s.encode(&sidx)];
                    let rhs = self.s_table[(idx[pos], idx[pos + 1])] * s.data[flat];
                    worst = worst.max(cx_abs(lhs - rhs) / norm);
                }
            }
        }
        worst
    }

    /// Creation operator `zd(f)`: sector `n+1` receives
    /// `sqrt(n+1) Sym(f (x) psi_n)`.
    pub fn create(&self, f: &Smearing<T>, psi: &FockVector<T>) -> Result<FockVector<T>> {
        let top = psi.top_occupied().unwrap_or(0);
        if top + 1 > self.n_max {
            return Err(Error::Capacity(format!(
                "creation would populate sector {} beyond n_max = {}",
                top + 1,
                self.n_max
            )));
        }
        let dim = psi.dim;
        let mut sectors = Vec::with_capacity(top + 2);
        sectors.push(SectorTensor::zeros(0, dim));
        for n in 0..=top {
            let src = &psi.sectors[n];
            let mut raw = SectorTensor::zeros(n + 1, dim);
            // place f in the first slot
            for j in 0..dim {
                let fj = f[j];
                let base = j * dim.pow(n as u32);
                for (k, v) in src.data.iter().enumerate() {
                    raw.data[base + k] = fj * *v;
                }
            }
            let mut sym = self.symmetrize(&raw)?;
            sym.scale(Complex::new(lit::<T>((n as f64) + 1.0).sqrt(), T::zero()));
            sectors.push(sym);
        }
        Ok(FockVector::from_sectors(dim, sectors))
    }

    /// Annihilation operator `z(g)`: contracts `g` (complex linearly, no
    /// conjugation) against the first argument of each sector with weight
    /// `sqrt(n)`; `z(g) vacuum = 0`.
    pub fn annihilate(&self, g: &Smearing<T>, psi: &FockVector<T>) -> FockVector<T> {
        let dim = psi.dim;
        let top = psi.top();
        if top == 0 {
            return FockVector::vacuum(dim).scaled(Complex::new(T::zero(), T::zero()));
        }
        let mut sectors = Vec::with_capacity(top);
        for n in 1..=top {
            let src = &psi.sectors[n];
            let stride = dim.pow((n - 1) as u32);
            let mut out = SectorTensor::zeros(n - 1, dim);
            let root_n = Complex::new(lit::<T>(n as f64).sqrt(), T::zero());
            for j in 0..dim {
                let gj = g[j] * root_n;
                let base = j * stride;
                for k in 0..stride {
                    out.data[k] += gj * src.data[base + k];
                }
            }
            sectors.push(out);
        }
        FockVector::from_sectors(dim, sectors)
    }

    /// Kernel-weighted double creation: `sum_{j,i} F[(j,i)] zd(e_j) zd(e_i)`,
    /// realized as a single symmetrization of `F (x) psi_n`.
    pub fn create_pair(
        &self,
        f2: &DMatrix<Complex<T>>,
        psi: &FockVector<T>,
    ) -> Result<FockVector<T>> {
        let top = psi.top_occupied().unwrap_or(0);
        if top + 2 > self.n_max {
            return Err(Error::Capacity(format!(
                "pair creation would populate sector {} beyond n_max = {}",
                top + 2,
                self.n_max
            )));
        }
        let dim = psi.dim;
        let mut sectors = vec![
            SectorTensor::zeros(0, dim),
            SectorTensor::zeros(1, dim),
        ];
        for n in 0..=top {
            let src = &psi.sectors[n];
            let mut raw = SectorTensor::zeros(n + 2, dim);
            let stride = dim.pow(n as u32);
            for j in 0..dim {
                for i in 0..dim {
                    let c = f2[(j, i)];
                    if c == Complex::new(T::zero(), T::zero()) {
                        continue;
                    }
                    let base = (j * dim + i) * stride;
                    for (k, v) in src.data.iter().enumerate() {
                        raw.data[base + k] += c * *v;
                    }
                }
            }
            let mut sym = self.symmetrize(&raw)?;
            let amp = (lit::<T>((n + 1) as f64) * lit::<T>((n + 2) as f64)).sqrt();
            sym.scale(Complex::new(amp, T::zero()));
            sectors.push(sym);
        }
        Ok(FockVector::from_sectors(dim, sectors))
    }

    /// Kernel-weighted double annihilation:
    /// `sum_{i,j} F[(i,j)] z(e_i) z(e_j)`.
    pub fn annihilate_pair(
        &self,
        f2: &DMatrix<Complex<T>>,
        psi: &FockVector<T>,
    ) -> FockVector<T> {
        let dim = psi.dim;
        let top = psi.top();
        if top < 2 {
            return FockVector::vacuum(dim).scaled(Complex::new(T::zero(), T::zero()));
        }
        let mut sectors = Vec::with_capacity(top - 1);
        for n in 2..=top {
            let src = &psi.sectors[n];
            let stride = dim.pow((n - 2) as u32);
            let mut out = SectorTensor::zeros(n - 2, dim);
            let amp = Complex::new(
                (lit::<T>(n as f64) * lit::<T>((n - 1) as f64)).sqrt(),
                T::zero(),
            );
            for i in 0..dim {
                for j in 0..dim {
                    let c = f2[(i, j)] * amp;
                    if c == Complex::new(T::zero(), T::zero()) {
                        continue;
                    }
                    // z(e_j) strips the first slot, z(e_i) the next
                    let base = (j * dim + i) * stride;
                    for k in 0..stride {
                        out.data[k] += c * src.data[base + k];
                    }
                }
            }
            sectors.push(out);
        }
        FockVector::from_sectors(dim, sectors)
    }

    /// Defect norms of the three smeared ZF relations on a probe vector.
    pub fn zf_relation_residuals(
        &self,
        f: &Smearing<T>,
        g: &Smearing<T>,
        probe: &FockVector<T>,
    ) -> Result<ZfResiduals<T>> {
        let top = probe.top_occupied().unwrap_or(0);
        if top + 2 > self.n_max {
            return Err(Error::Capacity(format!(
                "probe occupies sector {top}; need two free sectors below n_max = {}",
                self.n_max
            )));
        }
        let dim = probe.dim;

        // mixed relation: z(g) zd(f) = exchange + <g, f> 1 with the plain
        // (unconjugated) pairing, both smearings being complex linear
        let lhs = self.annihilate(g, &self.create(f, probe)?);
        // exchange term: sum_{j,i} f_j g_i S(t_j - t_i) zd(e_j) z(e_i)
        let mut exch_applied = probe.scaled(Complex::new(T::zero(), T::zero()));
        for j in 0..dim {
            let mut gj: Smearing<T> = DVector::zeros(dim);
            for i in 0..dim {
                gj[i] = g[i] * self.s_table[(j, i)];
            }
            let lowered = self.annihilate(&gj, probe);
            let mut ej: Smearing<T> = DVector::zeros(dim);
            ej[j] = f[j];
            exch_applied = exch_applied.add(&self.create(&ej, &lowered)?);
        }
        let mut pairing = Complex::new(T::zero(), T::zero());
        for i in 0..dim {
            pairing += g[i] * f[i];
        }
        let mixed = lhs.sub(&exch_applied).sub(&probe.scaled(pairing)).norm();

        // creator exchange: zd(f) zd(g) = sum S(t_i - t_j) weighted reorder
        let lhs_c = self.create(f, &self.create(g, probe)?)?;
        let kern_c = DMatrix::from_fn(dim, dim, |j, i| f[i] * g[j] * self.s_table[(i, j)]);
        let rhs_c = self.create_pair(&kern_c, probe)?;
        let creators = lhs_c.sub(&rhs_c).norm();

        // annihilator exchange: z(f) z(g) = S-weighted reversed order
        let lhs_a = self.annihilate(f, &self.annihilate(g, probe));
        let kern_a = DMatrix::from_fn(dim, dim, |i, j| f[i] * g[j] * self.s_table[(i, j)]);
        let rhs_a = self.annihilate_pair(&kern_a, probe);
        let annihilators = lhs_a.sub(&rhs_a).norm();

        Ok(ZfResiduals {
            mixed,
            creators,
            annihilators,
        })
    }

    /// The field `phi(f) = zd(f_plus) + z(f_minus)` applied to `psi`.
    pub fn field_apply(
        &self,
        f_plus: &Smearing<T>,
        f_minus: &Smearing<T>,
        psi: &FockVector<T>,
    ) -> Result<FockVector<T>> {
        let created = self.create(f_plus, psi)?;
        let annihilated = self.annihilate(f_minus, psi);
        Ok(created.add(&annihilated))
    }

    /// Phase representation of a spacetime translation together with a
    /// boost by resampling: sector `n` picks up the diagonal phase
    /// `exp(i x . sum p(t_k))` and the arguments shift by the boost
    /// rapidity via per-panel barycentric interpolation. Returns the
    /// transformed vector and the squared norm lost over the grid edge.
    pub fn poincare_apply(
        &self,
        x: [T; 2],
        boost: T,
        psi: &FockVector<T>,
    ) -> (FockVector<T>, T) {
        let dim = psi.dim;
        let m = self.mass;
        let nodes = self.grid.nodes();
        let norm_before = psi.norm();

        // one-particle resampling matrix in the weighted convention
        let resample = if boost == T::zero() {
            None
        } else {
            Some(self.resample_matrix(boost))
        };

        let mut sectors = Vec::with_capacity(psi.sectors.len());
        for s in &psi.sectors {
            let n = s.n;
            let mut out = s.clone();
            // boost first (argument shift), then the translation phase
            if let Some(r) = &resample {
                for axis in 0..n {
                    out = apply_along_axis(&out, axis, r);
                }
            }
            if x[0] != T::zero() || x[1] != T::zero() {
                let phase: Vec<Complex<T>> = nodes
                    .iter()
                    .map(|&t| {
                        // p x = p0 x0 - p1 x1
                        let arg = m * (t.cosh() * x[0] - t.sinh() * x[1]);
                        cx_exp(Complex::new(T::zero(), arg))
                    })
                    .collect();
                let mut idx = vec![0usize; n];
                for flat in 0..out.data.len() {
                    out.decode(flat, &mut idx);
                    let mut p = Complex::new(T::one(), T::zero());
                    for &k in idx.iter() {
                        p *= phase[k];
                    }
                    out.data[flat] *= p;
                }
            }
            sectors.push(out);
        }
        let result = FockVector::from_sectors(dim, sectors);
        let norm_after = result.norm();
        let tail = (norm_before * norm_before - norm_after * norm_after).max(T::zero());
        (result, tail)
    }

    /// Weighted one-particle resampling matrix for an argument shift by
    /// `boost`: rows evaluate the interpolant of the de-weighted samples
    /// at `t_i - boost`, zero outside the grid.
    fn resample_matrix(&self, boost: T) -> DMatrix<Complex<T>> {
        let dim = self.grid.len();
        let mut r = DMatrix::<Complex<T>>::zeros(dim, dim);
        for j in 0..dim {
            let mut basis = vec![Complex::new(T::zero(), T::zero()); dim];
            basis[j] = Complex::new(T::one(), T::zero());
            for i in 0..dim {
                let target = self.grid.nodes()[i] - boost;
                if let Some(v) = self.grid.interpolate(&basis, target) {
                    let w_ratio =
                        (self.grid.weights()[i] / self.grid.weights()[j]).sqrt();
                    r[(i, j)] = v * Complex::new(w_ratio, T::zero());
                }
            }
        }
        r
    }

    /// PCT conjugation: reverses the argument order and conjugates the
    /// amplitudes. Antiunitary involution fixing the vacuum.
    pub fn pct_apply(&self, psi: &FockVector<T>) -> FockVector<T> {
        let dim = psi.dim;
        let mut sectors = Vec::with_capacity(psi.sectors.len());
        for s in &psi.sectors {
            let mut out = SectorTensor::zeros(s.n, dim);
            let mut idx = vec![0usize; s.n];
            let mut rev = vec![0usize; s.n];
            for flat in 0..s.data.len() {
                s.decode(flat, &mut idx);
                for k in 0..s.n {
                    rev[k] = idx[s.n - 1 - k];
                }
                out.data[flat] = s.data[s.encode(&rev)].conj();
            }
            sectors.push(out);
        }
        FockVector::from_sectors(dim, sectors)
    }
}

/// Apply a one-particle matrix along one tensor axis.
fn apply_along_axis<T: Real>(
    t: &SectorTensor<T>,
    axis: usize,
    m: &DMatrix<Complex<T>>,
) -> SectorTensor<T> {
    let n = t.n;
    let dim = t.dim;
    assert!(axis < n);
    let inner: usize = dim.pow((n - 1 - axis) as u32);
    let outer: usize = dim.pow(axis as u32);
    let mut out = SectorTensor::zeros(n, dim);
    for o in 0..outer {
        for i in 0..dim {
            for j in 0..dim {
                let c = m[(i, j)];
                if c == Complex::new(T::zero(), T::zero()) {
                    continue;
                }
                let src_base = (o * dim + j) * inner;
                let dst_base = (o * dim + i) * inner;
                for k in 0..inner {
                    out.data[dst_base + k] += c * t.data[src_base + k];
                }
            }
        }
    }
    out
}

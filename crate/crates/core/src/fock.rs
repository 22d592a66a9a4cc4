//! Truncated two-mode Fock-space oracle.
//!
//! The oracle evolves density matrices under the time-independent generator
//! of the co-rotating frame (rotation angle `(w_bar + y) tau` on both modes),
//! in units of `g`:
//!
//! ```text
//! H = (d - y) n1 + (-d - y) n2 - (b1^dag b2^dag + b1 b2),   d = (w1 - w2) / 2
//! ```
//!
//! `H` conserves `n1 - n2`, so operators are stored as dense blocks between
//! the sectors of fixed `k = n1 - n2`. Nothing about the closed-form
//! solution is used here; moments are read off the density matrix and
//! rotated back to the lab frame.

use faer::{c64, Mat, MatRef};

use crate::dynamics::{InitialState, ModelParams};
use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix4;
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, singular_values, UnionFind};

pub const DEFAULT_NMAX: usize = 40;

/// Default bound on `nmax^2`.
pub const DEFAULT_CAP: usize = 65_536;

/// Largest probability mass the initial-state truncation may discard.
pub const TRUNCATION_LIMIT: f64 = 1e-6;

const UNITARITY_TOLERANCE: f64 = 1e-9;

/// Eigenvalues below this are dropped from entropy sums.
const ENTROPY_EIGEN_FLOOR: f64 = 1e-14;

/// States with `1 - Tr rho^2 / (Tr rho)^2` below this are treated as pure.
const PURITY_TOLERANCE: f64 = 1e-10;

/// Per-mode truncation: the basis is `|n1>|n2>` with `n1, n2 < nmax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpec {
    nmax: usize,
    cap: usize,
}

impl FockSpec {
    pub fn new(nmax: usize) -> Result<Self> {
        Self::with_cap(nmax, DEFAULT_CAP)
    }

    pub fn with_cap(nmax: usize, cap: usize) -> Result<Self> {
        if nmax < 2 || nmax.saturating_mul(nmax) > cap {
            return Err(Error::CutoffOutOfRange { nmax, cap });
        }
        Ok(Self { nmax, cap })
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Dimension of the two-mode space, `nmax^2`.
    pub fn dim(&self) -> usize {
        self.nmax * self.nmax
    }

    /// Flat basis index `n1 nmax + n2`.
    pub fn index(&self, n1: usize, n2: usize) -> usize {
        n1 * self.nmax + n2
    }
}

/// Sector bookkeeping for fixed `k = n1 - n2`. Sector `s` holds
/// `k = s - (nmax - 1)`; its states are ordered by `n1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Layout {
    nmax: usize,
}

impl Layout {
    fn sectors(&self) -> usize {
        2 * self.nmax - 1
    }

    fn k(&self, s: usize) -> isize {
        s as isize - (self.nmax as isize - 1)
    }

    fn first_n1(&self, s: usize) -> usize {
        self.k(s).max(0) as usize
    }

    fn len(&self, s: usize) -> usize {
        self.nmax - self.k(s).unsigned_abs()
    }

    fn locate(&self, n1: usize, n2: usize) -> (usize, usize) {
        let s = n1 + self.nmax - 1 - n2;
        (s, n1 - self.first_n1(s))
    }

    fn state(&self, s: usize, i: usize) -> (usize, usize) {
        let n1 = self.first_n1(s) + i;
        (n1, (n1 as isize - self.k(s)) as usize)
    }
}

/// Generator of the co-rotating-frame dynamics, stored per `n1 - n2` sector.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    layout: Layout,
    blocks: Vec<Mat<c64>>,
}

impl Hamiltonian {
    pub fn nmax(&self) -> usize {
        self.layout.nmax
    }

    /// Block of the sector with `n1 - n2 = k`.
    pub fn sector(&self, k: isize) -> Option<MatRef<'_, c64>> {
        let s = k + self.layout.nmax as isize - 1;
        if s < 0 {
            return None;
        }
        self.blocks.get(s as usize).map(|b| b.as_ref())
    }

    /// Full `nmax^2 x nmax^2` matrix in the flat basis `n1 nmax + n2`.
    pub fn to_dense(&self) -> Mat<c64> {
        let n = self.layout.nmax;
        let mut out = Mat::<c64>::zeros(n * n, n * n);
        for (s, block) in self.blocks.iter().enumerate() {
            for i in 0..block.nrows() {
                let (a1, a2) = self.layout.state(s, i);
                for j in 0..block.ncols() {
                    let (b1, b2) = self.layout.state(s, j);
                    out[(a1 * n + a2, b1 * n + b2)] = block[(i, j)];
                }
            }
        }
        out
    }
}

pub fn build_hamiltonian(params: &ModelParams, spec: &FockSpec) -> Result<Hamiltonian> {
    let layout = Layout { nmax: spec.nmax() };
    let d = 0.5 * (params.w1() - params.w2());
    let y = params.y();
    let blocks = (0..layout.sectors())
        .map(|s| {
            let len = layout.len(s);
            let mut h = Mat::<c64>::zeros(len, len);
            for i in 0..len {
                let (n1, n2) = layout.state(s, i);
                h[(i, i)] = c64::new((d - y) * n1 as f64 - (d + y) * n2 as f64, 0.0);
                if i + 1 < len {
                    // <n1+1, n2+1| b1^dag b2^dag |n1, n2>
                    let pair = -(((n1 + 1) * (n2 + 1)) as f64).sqrt();
                    h[(i + 1, i)] = c64::new(pair, 0.0);
                    h[(i, i + 1)] = c64::new(pair, 0.0);
                }
            }
            h
        })
        .collect();
    Ok(Hamiltonian { layout, blocks })
}

/// Two-mode density matrix stored as dense blocks between `n1 - n2` sectors.
/// Absent blocks are exactly zero.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    layout: Layout,
    blocks: Vec<Option<Mat<c64>>>,
    cut_mass: f64,
}

impl DensityMatrix {
    /// `rho1 (x) rho2` from single-mode matrices of equal size.
    pub fn product(rho1: MatRef<'_, c64>, rho2: MatRef<'_, c64>, cut_mass: f64) -> Result<Self> {
        let nmax = rho1.nrows();
        if rho2.nrows() != nmax || rho1.ncols() != nmax || rho2.ncols() != nmax {
            return Err(Error::CutoffMismatch(nmax, rho2.nrows()));
        }
        let layout = Layout { nmax };
        let ns = layout.sectors();
        let mut blocks: Vec<Option<Mat<c64>>> = vec![None; ns * ns];
        let nonzero = |m: MatRef<'_, c64>| {
            let mut out = Vec::new();
            for j in 0..nmax {
                for i in 0..nmax {
                    if m[(i, j)] != c64::new(0.0, 0.0) {
                        out.push((i, j, m[(i, j)]));
                    }
                }
            }
            out
        };
        let (nz1, nz2) = (nonzero(rho1), nonzero(rho2));
        for &(n1, m1, v1) in &nz1 {
            for &(n2, m2, v2) in &nz2 {
                let (a, i) = layout.locate(n1, n2);
                let (b, j) = layout.locate(m1, m2);
                let block = blocks[a * ns + b].get_or_insert_with(|| Mat::zeros(layout.len(a), layout.len(b)));
                block[(i, j)] = v1 * v2;
            }
        }
        Ok(Self { layout, blocks, cut_mass })
    }

    pub fn nmax(&self) -> usize {
        self.layout.nmax
    }

    /// Probability mass discarded when the initial state was truncated.
    pub fn cut_mass(&self) -> f64 {
        self.cut_mass
    }

    fn block(&self, a: usize, b: usize) -> Option<&Mat<c64>> {
        self.blocks[a * self.layout.sectors() + b].as_ref()
    }

    fn present(&self) -> impl Iterator<Item = (usize, usize, &Mat<c64>)> {
        let ns = self.layout.sectors();
        self.blocks.iter().enumerate().filter_map(move |(idx, b)| b.as_ref().map(|m| (idx / ns, idx % ns, m)))
    }

    /// `<n1, n2| rho |m1, m2>`.
    pub fn get(&self, n1: usize, n2: usize, m1: usize, m2: usize) -> c64 {
        let (a, i) = self.layout.locate(n1, n2);
        let (b, j) = self.layout.locate(m1, m2);
        self.block(a, b).map_or(c64::new(0.0, 0.0), |m| m[(i, j)])
    }

    /// Joint photon-number distribution `P(n1, n2)`.
    pub fn population(&self, n1: usize, n2: usize) -> f64 {
        self.get(n1, n2, n1, n2).re
    }

    pub fn trace(&self) -> f64 {
        (0..self.layout.sectors())
            .filter_map(|s| self.block(s, s))
            .map(|m| (0..m.nrows()).map(|i| m[(i, i)].re).sum::<f64>())
            .sum()
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        self.present().map(|(_, _, m)| m.norm_l2().powi(2)).sum()
    }

    fn is_pure(&self) -> bool {
        1.0 - self.purity() / self.trace().powi(2) < PURITY_TOLERANCE
    }

    /// `psi[(n1, n2)]` with `rho = |psi><psi|`, up to a global phase.
    /// Only meaningful for a rank-one `rho`.
    fn amplitudes(&self) -> Mat<c64> {
        let n = self.layout.nmax;
        let (mut j1, mut j2) = (0, 0);
        for n1 in 0..n {
            for n2 in 0..n {
                if self.population(n1, n2) > self.population(j1, j2) {
                    (j1, j2) = (n1, n2);
                }
            }
        }
        let scale = self.population(j1, j2).sqrt();
        Mat::from_fn(n, n, |n1, n2| self.get(n1, n2, j1, j2) / scale)
    }

    /// Largest `|rho - rho^dag|` entry.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (a, b, m) in self.present() {
            match self.block(b, a) {
                Some(t) => {
                    for i in 0..m.nrows() {
                        for j in 0..m.ncols() {
                            worst = worst.max((m[(i, j)] - t[(j, i)].conj()).norm());
                        }
                    }
                }
                None => {
                    for i in 0..m.nrows() {
                        for j in 0..m.ncols() {
                            worst = worst.max(m[(i, j)].norm());
                        }
                    }
                }
            }
        }
        worst
    }

    /// Population of states with `n1 = nmax - 1` or `n2 = nmax - 1`.
    pub fn tail_mass(&self) -> f64 {
        let top = self.layout.nmax - 1;
        (0..self.layout.nmax)
            .map(|n| {
                let edge = self.population(top, n) + self.population(n, top);
                if n == top {
                    edge - self.population(top, top)
                } else {
                    edge
                }
            })
            .sum()
    }

    /// Smallest eigenvalue, from the connected groups of sectors.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let ns = self.layout.sectors();
        let mut uf = UnionFind::new(ns);
        for (a, b, _) in self.present() {
            uf.union(a, b);
        }
        let mut lowest = 0.0_f64;
        for group in uf.groups() {
            if !group.iter().any(|&s| self.block(s, s).is_some()) {
                continue;
            }
            let offsets: Vec<usize> = group
                .iter()
                .scan(0, |acc, &s| {
                    let o = *acc;
                    *acc += self.layout.len(s);
                    Some(o)
                })
                .collect();
            let dim: usize = group.iter().map(|&s| self.layout.len(s)).sum();
            let mut dense = Mat::<c64>::zeros(dim, dim);
            for (ga, &a) in group.iter().enumerate() {
                for (gb, &b) in group.iter().enumerate() {
                    if let Some(m) = self.block(a, b) {
                        for i in 0..m.nrows() {
                            for j in 0..m.ncols() {
                                dense[(offsets[ga] + i, offsets[gb] + j)] = m[(i, j)];
                            }
                        }
                    }
                }
            }
            let values = hermitian_eigenvalues(dense.as_ref())?;
            lowest = lowest.min(values[0]);
        }
        Ok(lowest)
    }

    /// Full matrix in the flat basis `n1 nmax + n2`.
    pub fn to_dense(&self) -> Mat<c64> {
        let n = self.layout.nmax;
        let mut out = Mat::<c64>::zeros(n * n, n * n);
        for (a, b, m) in self.present() {
            for i in 0..m.nrows() {
                let (r1, r2) = self.layout.state(a, i);
                for j in 0..m.ncols() {
                    let (c1, c2) = self.layout.state(b, j);
                    out[(r1 * n + r2, c1 * n + c2)] = m[(i, j)];
                }
            }
        }
        out
    }

    /// Reduced density matrix of mode 1 or 2.
    pub fn reduced(&self, mode: usize) -> Mat<c64> {
        let n = self.layout.nmax;
        let mut out = Mat::<c64>::zeros(n, n);
        for (a, b, m) in self.present() {
            for i in 0..m.nrows() {
                let (r1, r2) = self.layout.state(a, i);
                // partner column shares the traced-out photon number
                let (c1, c2) = if mode == 1 {
                    let c1 = r2 as isize + self.layout.k(b);
                    (c1, r2 as isize)
                } else {
                    let c2 = r1 as isize - self.layout.k(b);
                    (r1 as isize, c2)
                };
                if c1 < 0 || c2 < 0 || c1 >= n as isize || c2 >= n as isize {
                    continue;
                }
                let (_, j) = self.layout.locate(c1 as usize, c2 as usize);
                let (row, col) = if mode == 1 { (r1, c1 as usize) } else { (r2, c2 as usize) };
                out[(row, col)] += m[(i, j)];
            }
        }
        out
    }
}

fn single_mode_vacuum(nmax: usize) -> Mat<c64> {
    let mut m = Mat::<c64>::zeros(nmax, nmax);
    m[(0, 0)] = c64::new(1.0, 0.0);
    m
}

/// Geometric distribution truncated to `nmax` levels and renormalized,
/// with the discarded mass `(n/(1+n))^nmax`.
fn single_mode_thermal(nbar: f64, nmax: usize) -> (Mat<c64>, f64) {
    if nbar == 0.0 {
        return (single_mode_vacuum(nmax), 0.0);
    }
    let ratio = nbar / (1.0 + nbar);
    let mut weights = Vec::with_capacity(nmax);
    let mut w = 1.0 / (1.0 + nbar);
    for _ in 0..nmax {
        weights.push(w);
        w *= ratio;
    }
    let kept: f64 = weights.iter().sum();
    let cut = ratio.powi(nmax as i32);
    let mut m = Mat::<c64>::zeros(nmax, nmax);
    for (n, w) in weights.iter().enumerate() {
        m[(n, n)] = c64::new(w / kept, 0.0);
    }
    (m, cut)
}

/// Coherent-state projector truncated to `nmax` levels and renormalized,
/// with the discarded Poisson mass.
fn single_mode_coherent(alpha: c64, nmax: usize) -> (Mat<c64>, f64) {
    let lambda = alpha.norm_sqr();
    let mut amps = Vec::with_capacity(nmax);
    let mut amp = c64::new((-0.5 * lambda).exp(), 0.0);
    for n in 0..nmax {
        amps.push(amp);
        amp = amp * alpha / ((n + 1) as f64).sqrt();
    }
    // Poisson tail beyond the cutoff, summed term by term
    let mut cut = 0.0;
    let mut term = amp.norm_sqr();
    let mut n = nmax;
    while term > 0.0 && (term > 1e-300 && term > cut * 1e-18 || (n as f64) < lambda) {
        cut += term;
        n += 1;
        term *= lambda / n as f64;
    }
    let kept: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let m = Mat::from_fn(nmax, nmax, |i, j| amps[i] * amps[j].conj() / kept);
    (m, cut)
}

/// Truncated initial state `rho1 (x) rho2`.
pub fn initial_density(init: &InitialState, spec: &FockSpec) -> Result<DensityMatrix> {
    init.validate()?;
    let nmax = spec.nmax();
    let ((rho1, cut1), (rho2, cut2)) = match *init {
        InitialState::Vacuum => ((single_mode_vacuum(nmax), 0.0), (single_mode_vacuum(nmax), 0.0)),
        InitialState::Coherent { alpha } => (single_mode_coherent(alpha, nmax), (single_mode_vacuum(nmax), 0.0)),
        InitialState::Thermal { n10, n20 } => (single_mode_thermal(n10, nmax), single_mode_thermal(n20, nmax)),
    };
    let cut = 1.0 - (1.0 - cut1) * (1.0 - cut2);
    if cut > TRUNCATION_LIMIT {
        return Err(Error::TruncationLoss { nmax, cut, limit: TRUNCATION_LIMIT });
    }
    DensityMatrix::product(rho1.as_ref(), rho2.as_ref(), cut)
}

/// Eigendecomposition of every sector block of a [`Hamiltonian`], reusable
/// across evolution times.
#[derive(Debug, Clone)]
pub struct Propagator {
    layout: Layout,
    eigen: Vec<(Vec<f64>, Mat<c64>)>,
}

impl Propagator {
    pub fn new(h: &Hamiltonian) -> Result<Self> {
        let eigen = h.blocks.iter().map(|b| hermitian_eigen(b.as_ref())).collect::<Result<_>>()?;
        Ok(Self { layout: h.layout, eigen })
    }

    /// Sector blocks of `U = exp(-i H tau)`.
    pub fn unitary(&self, tau: f64) -> Result<Vec<Mat<c64>>> {
        self.eigen
            .iter()
            .map(|(values, vectors)| {
                let n = values.len();
                let scaled = Mat::from_fn(n, n, |i, j| vectors[(i, j)] * c64::from_polar(1.0, -values[j] * tau));
                let u = &scaled * vectors.adjoint();
                let residual = unitarity_residual(u.as_ref());
                if residual > UNITARITY_TOLERANCE {
                    return Err(Error::NonUnitary(residual));
                }
                Ok(u)
            })
            .collect()
    }

    /// `U rho U^dag`.
    pub fn evolve(&self, rho: &DensityMatrix, tau: f64) -> Result<DensityMatrix> {
        if rho.layout != self.layout {
            return Err(Error::CutoffMismatch(rho.nmax(), self.layout.nmax));
        }
        if tau == 0.0 {
            return Ok(rho.clone());
        }
        let u = self.unitary(tau)?;
        let ns = self.layout.sectors();
        let blocks = rho
            .blocks
            .iter()
            .enumerate()
            .map(|(idx, block)| {
                block.as_ref().map(|m| {
                    let (a, b) = (idx / ns, idx % ns);
                    &u[a] * m * u[b].adjoint()
                })
            })
            .collect();
        Ok(DensityMatrix { layout: rho.layout, blocks, cut_mass: rho.cut_mass })
    }
}

fn unitarity_residual(u: MatRef<'_, c64>) -> f64 {
    let prod = u.adjoint() * u;
    let mut worst = 0.0_f64;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - c64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// `rho(tau) = U rho0 U^dag` with `U = exp(-i H tau)`.
pub fn evolve(rho0: &DensityMatrix, h: &Hamiltonian, tau: f64) -> Result<DensityMatrix> {
    Propagator::new(h)?.evolve(rho0, tau)
}

/// Builds, truncates and evolves in one call.
pub fn simulate(params: &ModelParams, init: &InitialState, spec: &FockSpec) -> Result<DensityMatrix> {
    let h = build_hamiltonian(params, spec)?;
    evolve(&initial_density(init, spec)?, &h, params.tau())
}

/// A single ladder operator acting on mode 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Lower(usize),
    Raise(usize),
}

/// `Tr(rho W)` for a product `W` of ladder operators, applied right to left.
pub fn expect_word(rho: &DensityMatrix, word: &[Ladder]) -> c64 {
    let layout = rho.layout;
    let n = layout.nmax;
    let mut acc = c64::new(0.0, 0.0);
    for s in 0..layout.sectors() {
        for i in 0..layout.len(s) {
            let (n1, n2) = layout.state(s, i);
            let mut occ = [n1, n2];
            let mut coef = 1.0;
            let mut alive = true;
            for op in word.iter().rev() {
                match *op {
                    Ladder::Lower(m) => {
                        let k = occ[m - 1];
                        if k == 0 {
                            alive = false;
                            break;
                        }
                        coef *= (k as f64).sqrt();
                        occ[m - 1] = k - 1;
                    }
                    Ladder::Raise(m) => {
                        let k = occ[m - 1];
                        if k + 1 >= n {
                            alive = false;
                            break;
                        }
                        coef *= ((k + 1) as f64).sqrt();
                        occ[m - 1] = k + 1;
                    }
                }
            }
            if alive {
                // W|j> = coef |occ>, so Tr(rho W) picks rho[j, occ]
                acc += rho.get(n1, n2, occ[0], occ[1]) * coef;
            }
        }
    }
    acc
}

/// Moments read directly off a density matrix, expressed in the lab frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleMoments {
    pub n1: f64,
    pub n2: f64,
    /// First moments `(x1, p1, x2, p2)`.
    pub mean: [f64; 4],
    pub cm: CovarianceMatrix4,
    pub tail: f64,
}

/// Coefficient of `b` in each quadrature `q = c b + c* b^dag`, lab frame.
fn quadrature_coefficients(params: &ModelParams) -> [(usize, c64); 4] {
    // a = e^{-i theta} b on both modes
    let rot = c64::from_polar(std::f64::consts::FRAC_1_SQRT_2, -params.frame_angle());
    let minus_i = c64::new(0.0, -1.0);
    [(1, rot), (1, rot * minus_i), (2, rot), (2, rot * minus_i)]
}

/// `<q_i q_j>` for two quadratures.
fn quadrature_product(rho: &DensityMatrix, (mi, ci): (usize, c64), (mj, cj): (usize, c64)) -> c64 {
    use Ladder::{Lower, Raise};
    ci * cj * expect_word(rho, &[Lower(mi), Lower(mj)])
        + ci * cj.conj() * expect_word(rho, &[Lower(mi), Raise(mj)])
        + ci.conj() * cj * expect_word(rho, &[Raise(mi), Lower(mj)])
        + ci.conj() * cj.conj() * expect_word(rho, &[Raise(mi), Raise(mj)])
}

pub fn measure(rho: &DensityMatrix, params: &ModelParams) -> Result<OracleMoments> {
    use Ladder::{Lower, Raise};
    let quads = quadrature_coefficients(params);
    let mut mean = [0.0; 4];
    for (slot, &(mode, c)) in mean.iter_mut().zip(&quads) {
        *slot = (c * expect_word(rho, &[Lower(mode)]) + c.conj() * expect_word(rho, &[Raise(mode)])).re;
    }
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let sym = 0.5 * (quadrature_product(rho, quads[i], quads[j]) + quadrature_product(rho, quads[j], quads[i]));
            m[i][j] = sym.re - mean[i] * mean[j];
            m[j][i] = m[i][j];
        }
    }
    Ok(OracleMoments {
        n1: expect_word(rho, &[Raise(1), Lower(1)]).re,
        n2: expect_word(rho, &[Raise(2), Lower(2)]).re,
        mean,
        cm: CovarianceMatrix4::new(m)?,
        tail: rho.tail_mass(),
    })
}

/// Central third moments `<(q - <q>)^3>` of `(x1, p1, x2, p2)`.
pub fn third_central_moments(rho: &DensityMatrix, params: &ModelParams) -> [f64; 4] {
    let quads = quadrature_coefficients(params);
    let mut out = [0.0; 4];
    for (slot, &(mode, c)) in out.iter_mut().zip(&quads) {
        let raw = |power: usize| -> f64 {
            let mut total = c64::new(0.0, 0.0);
            for mask in 0..(1usize << power) {
                let mut coef = c64::new(1.0, 0.0);
                let word: Vec<Ladder> = (0..power)
                    .map(|bit| {
                        if mask >> bit & 1 == 1 {
                            coef *= c.conj();
                            Ladder::Raise(mode)
                        } else {
                            coef *= c;
                            Ladder::Lower(mode)
                        }
                    })
                    .collect();
                total += coef * expect_word(rho, &word);
            }
            total.re
        };
        let (m1, m2, m3) = (raw(1), raw(2), raw(3));
        *slot = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
    }
    out
}

/// Von Neumann entropy (nats) of the reduced state of `mode`.
pub fn direct_entropy(rho: &DensityMatrix, mode: usize) -> Result<f64> {
    let values = hermitian_eigenvalues(rho.reduced(mode).as_ref())?;
    Ok(values.iter().filter(|&&l| l > ENTROPY_EIGEN_FLOOR).map(|&l| -l * l.ln()).sum())
}

/// `ln || rho^{T_2} ||_1`, clamped at zero.
pub fn direct_log_negativity(rho: &DensityMatrix) -> Result<f64> {
    if rho.is_pure() {
        // for a pure state the trace norm is (sum of Schmidt coefficients)^2
        let schmidt: f64 = singular_values(rho.amplitudes().as_ref())?.iter().sum();
        return Ok((2.0 * schmidt.ln()).max(0.0));
    }
    partial_transpose_log_negativity(rho)
}

fn partial_transpose_log_negativity(rho: &DensityMatrix) -> Result<f64> {
    let layout = rho.layout;
    let n = layout.nmax;
    let flat = |a: usize, b: usize| a * n + b;
    // rho[(n1,n2),(m1,m2)] lands at PT[(n1,m2),(m1,n2)]
    let each_entry = |f: &mut dyn FnMut(usize, usize, c64)| {
        for (a, b, m) in rho.present() {
            for i in 0..m.nrows() {
                let (n1, n2) = layout.state(a, i);
                for j in 0..m.ncols() {
                    let (m1, m2) = layout.state(b, j);
                    f(flat(n1, m2), flat(m1, n2), m[(i, j)]);
                }
            }
        }
    };

    let mut uf = UnionFind::new(n * n);
    each_entry(&mut |r, c, _| uf.union(r, c));
    let groups = uf.groups();
    let mut slot = vec![(0usize, 0usize); n * n];
    for (g, members) in groups.iter().enumerate() {
        for (pos, &idx) in members.iter().enumerate() {
            slot[idx] = (g, pos);
        }
    }
    let mut dense: Vec<Option<Mat<c64>>> = vec![None; groups.len()];
    each_entry(&mut |r, c, v| {
        let (g, i) = slot[r];
        let (_, j) = slot[c];
        let size = groups[g].len();
        dense[g].get_or_insert_with(|| Mat::zeros(size, size))[(i, j)] = v;
    });

    let mut norm = 0.0;
    for m in dense.iter().flatten() {
        norm += hermitian_eigenvalues(m.as_ref())?.iter().map(|l| l.abs()).sum::<f64>();
    }
    Ok(norm.ln().max(0.0))
}

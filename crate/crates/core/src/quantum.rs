//! Pure states, density matrices and the Bloch ball, in floating point.

use num_bigint::BigInt;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Real};
use crate::space::{make_state_space, StateSpace};

fn tol<T: Real>(t: f64) -> T {
    T::lit(t)
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::input("matrix rows must form a square"));
        }
        Ok(CMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        let n = u.len();
        let mut m = Self::zeros(n);
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m.data[i * n + j] = ui * vj.conj();
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n + j]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                for j in 0..n {
                    m.data[i * n + j] = m.data[i * n + j] + a * other.data[k * n + j];
                }
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(Complex::new(T::zero(), T::zero()), |acc, j| {
                    acc + self.data[i * self.n + j] * v[j]
                })
            })
            .collect()
    }

    /// `⟨v|M|v⟩`, real part.
    pub fn expectation(&self, v: &[Complex<T>]) -> T {
        let mv = self.apply(v);
        v.iter()
            .zip(&mv)
            .fold(T::zero(), |acc, (a, b)| acc + (a.conj() * b).re)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self.get(i, i))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn is_hermitian(&self, tolerance: T) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tolerance
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    ///
    /// `A + iB` is embedded as the real symmetric `[[A, -B], [B, A]]`, whose
    /// spectrum is that of the original with every eigenvalue doubled.
    pub fn hermitian_eigenvalues(&self) -> Vec<T> {
        let n = self.n;
        let m = 2 * n;
        let mut s = vec![T::zero(); m * m];
        for i in 0..n {
            for j in 0..n {
                let z = self.get(i, j);
                s[i * m + j] = z.re;
                s[(i + n) * m + j + n] = z.re;
                s[i * m + j + n] = -z.im;
                s[(i + n) * m + j] = z.im;
            }
        }
        let mut eig = jacobi_eigenvalues(&mut s, m);
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        eig.into_iter().step_by(2).collect()
    }

    pub fn is_unitary(&self, tolerance: T) -> bool {
        self.adjoint().mul(self).max_abs_diff(&Self::identity(self.n)) <= tolerance
    }
}

/// Cyclic Jacobi rotations on a real symmetric matrix.
fn jacobi_eigenvalues<T: Real>(a: &mut [T], m: usize) -> Vec<T> {
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut total = T::zero();
        for i in 0..m {
            for j in 0..m {
                let v = a[i * m + j] * a[i * m + j];
                total = total + v;
                if i != j {
                    off = off + v;
                }
            }
        }
        if off <= eps * eps * total || off == T::zero() {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let theta = (aqq - app) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..m).map(|i| a[i * m + i]).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
}

fn norm_sqr<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
}

fn inner<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    u.iter()
        .zip(v)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
}

fn gaussian<T: Real, R: Rng>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

impl<T: Real> PureState<T> {
    /// Rejects vectors whose norm is off by more than the assertion tolerance.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::input("a pure state needs at least one amplitude"));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::input("amplitudes must be finite"));
        }
        let n2 = norm_sqr(&amplitudes);
        if (n2 - T::one()).abs() > tol(T::ASSERT_TOL) {
            return Err(Error::input(format!(
                "state is not normalized (squared norm {n2})"
            )));
        }
        Ok(PureState { amplitudes })
    }

    /// Scales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let n = norm_sqr(&amplitudes).sqrt();
        if !n.is_finite() || n <= T::zero() {
            return Err(Error::input("cannot normalize a zero or non-finite vector"));
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    pub fn from_real(amplitudes: &[T]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn basis(dimension: usize, k: usize) -> Result<Self> {
        if k >= dimension {
            return Err(Error::input(format!(
                "basis index {k} out of range for dimension {dimension}"
            )));
        }
        let mut v = vec![Complex::new(T::zero(), T::zero()); dimension];
        v[k] = Complex::new(T::one(), T::zero());
        Self::new(v)
    }

    /// Haar-distributed: a normalized complex Gaussian vector.
    pub fn random<R: Rng>(dimension: usize, rng: &mut R) -> Self {
        loop {
            let v: Vec<Complex<T>> = (0..dimension).map(|_| gaussian(rng)).collect();
            if let Ok(s) = Self::normalized(v) {
                return s;
            }
        }
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// `⟨self, other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        check_same_dimension(self, other)?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn with_phase(&self, angle: T) -> Self {
        let p = Complex::from_polar(T::one(), angle);
        PureState {
            amplitudes: self.amplitudes.iter().map(|z| z * p).collect(),
        }
    }

    pub fn transformed(&self, u: &CMatrix<T>) -> Result<Self> {
        if u.size() != self.dimension() {
            return Err(Error::input("unitary and state dimensions differ"));
        }
        Ok(PureState {
            amplitudes: u.apply(&self.amplitudes),
        })
    }

    pub fn projector(&self) -> CMatrix<T> {
        CMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix {
            matrix: self.projector(),
        }
    }
}

fn check_same_dimension<T: Real>(a: &PureState<T>, b: &PureState<T>) -> Result<()> {
    if a.dimension() != b.dimension() {
        return Err(Error::input(format!(
            "dimension mismatch: {} vs {}",
            a.dimension(),
            b.dimension()
        )));
    }
    Ok(())
}

/// Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let assert = tol::<T>(T::ASSERT_TOL);
        if !matrix.is_hermitian(assert) {
            return Err(Error::input("density matrix is not Hermitian"));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > assert || tr.im.abs() > assert {
            return Err(Error::input(format!("density matrix trace is {tr}, not 1")));
        }
        let min = matrix
            .hermitian_eigenvalues()
            .first()
            .copied()
            .unwrap_or_else(T::zero);
        if min < -tol::<T>(T::PSD_TOL) {
            return Err(Error::input(format!(
                "density matrix is not positive semidefinite (eigenvalue {min})"
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    /// `(I + n⃗·σ⃗)/2`.
    pub fn from_bloch(n: &BlochVector<T>) -> Self {
        let half = T::lit(0.5);
        let [x, y, z] = n.0;
        let c = |re: T, im: T| Complex::new(re * half, im * half);
        DensityMatrix {
            matrix: CMatrix {
                n: 2,
                data: vec![c(T::one() + z, T::zero()), c(x, -y), c(x, y), c(T::one() - z, T::zero())],
            },
        }
    }

    /// `Σ pᵢ ρᵢ`; weights must be nonnegative and sum to one.
    pub fn mixture(terms: &[(T, &DensityMatrix<T>)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::input("empty mixture"));
        };
        let n = first.matrix.size();
        let mut total = T::zero();
        let mut acc = CMatrix::zeros(n);
        for (w, rho) in terms {
            if *w < T::zero() {
                return Err(Error::input("mixture weights must be nonnegative"));
            }
            if rho.matrix.size() != n {
                return Err(Error::input("mixture components differ in dimension"));
            }
            total = total + *w;
            acc = acc.add(&rho.matrix.scale(*w));
        }
        if (total - T::one()).abs() > tol(T::ASSERT_TOL) {
            return Err(Error::input(format!("mixture weights sum to {total}, not 1")));
        }
        Ok(DensityMatrix { matrix: acc })
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.size()
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        self.matrix.hermitian_eigenvalues()
    }

    /// `tr(ρ σ⃗)` for a qubit.
    pub fn bloch(&self) -> Result<BlochVector<T>> {
        if self.dimension() != 2 {
            return Err(Error::input("Bloch vectors exist only for qubits"));
        }
        let two = T::lit(2.0);
        let off = self.matrix.get(1, 0);
        let z = self.matrix.get(0, 0).re - self.matrix.get(1, 1).re;
        BlochVector::new([two * off.re, two * off.im, z])
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> T {
        self.matrix.mul(&self.matrix).trace().re
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector<T>(pub [T; 3]);

impl<T: Real> BlochVector<T> {
    pub fn new(n: [T; 3]) -> Result<Self> {
        let v = BlochVector(n);
        if n.iter().any(|x| !x.is_finite()) {
            return Err(Error::input("Bloch vector must be finite"));
        }
        if v.norm() > T::one() + tol(T::ASSERT_TOL) {
            return Err(Error::input(format!(
                "Bloch vector has length {} > 1",
                v.norm()
            )));
        }
        Ok(v)
    }

    pub fn center() -> Self {
        BlochVector([T::zero(); 3])
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(&other.0)
            .fold(T::zero(), |acc, (a, b)| acc + *a * *b)
    }

    pub fn is_pure(&self) -> bool {
        (self.norm() - T::one()).abs() <= tol(T::ASSERT_TOL)
    }

    fn require_unit(&self) -> Result<()> {
        if !self.is_pure() {
            return Err(Error::input(format!(
                "expected a unit Bloch vector, got length {}",
                self.norm()
            )));
        }
        Ok(())
    }
}

/// `|⟨ψ,χ⟩|²`.
pub fn transition_probability<T: Real>(psi: &PureState<T>, chi: &PureState<T>) -> Result<T> {
    let p = psi.inner(chi)?.norm_sqr();
    Ok(p.min(T::one()))
}

/// `n⃗ = (2 Re(ᾱβ), 2 Im(ᾱβ), |α|² − |β|²)`.
pub fn bloch_from_pure<T: Real>(psi: &PureState<T>) -> Result<BlochVector<T>> {
    if psi.dimension() != 2 {
        return Err(Error::input(format!(
            "Bloch vectors exist only for qubits, got dimension {}",
            psi.dimension()
        )));
    }
    let [a, b] = [psi.amplitudes[0], psi.amplitudes[1]];
    let ab = a.conj() * b;
    let two = T::lit(2.0);
    Ok(BlochVector([
        two * ab.re,
        two * ab.im,
        a.norm_sqr() - b.norm_sqr(),
    ]))
}

/// The pure qubit with Bloch vector `n⃗`, with a real nonnegative first
/// amplitude. The south pole maps to `(0, 1)`.
pub fn pure_from_bloch<T: Real>(n: &BlochVector<T>) -> Result<PureState<T>> {
    n.require_unit()?;
    let [x, y, z] = n.0;
    let norm = n.norm();
    let (x, y, z) = (x / norm, y / norm, z / norm);
    let half = T::lit(0.5);
    let alpha = ((T::one() + z) * half).max(T::zero()).sqrt();
    if alpha <= tol(T::CONSTRUCTION_TOL) {
        return PureState::basis(2, 1);
    }
    let beta = Complex::new(x, y) / (T::lit(2.0) * alpha);
    PureState::normalized(vec![Complex::new(alpha, T::zero()), beta])
}

/// `(1 + n⃗₁·n⃗₂)/2` for unit Bloch vectors.
pub fn ball_detection_ratio<T: Real>(n1: &BlochVector<T>, n2: &BlochVector<T>) -> Result<T> {
    n1.require_unit()?;
    n2.require_unit()?;
    let r = (T::one() + n1.dot(n2)) * T::lit(0.5);
    Ok(r.max(T::zero()).min(T::one()))
}

/// Haar unitary: Gram–Schmidt on complex Gaussian columns.
pub fn random_unitary<T: Real, R: Rng>(n: usize, rng: &mut R) -> CMatrix<T> {
    loop {
        let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
        let mut ok = true;
        for _ in 0..n {
            let mut v: Vec<Complex<T>> = (0..n).map(|_| gaussian(rng)).collect();
            for u in &cols {
                let c = inner(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi = *vi - ui * c;
                }
            }
            let len = norm_sqr(&v).sqrt();
            if len <= tol(T::CONSTRUCTION_TOL) {
                ok = false;
                break;
            }
            cols.push(v.into_iter().map(|z| z / len).collect());
        }
        if ok {
            let mut m = CMatrix::zeros(n);
            for (j, col) in cols.iter().enumerate() {
                for (i, z) in col.iter().enumerate() {
                    m.data[i * n + j] = *z;
                }
            }
            return m;
        }
    }
}

/// A random effect with `Eψ = ψ`: `E = |ψ⟩⟨ψ| + Q U D U* Q`, `Q = I − |ψ⟩⟨ψ|`,
/// `D` diagonal uniform in `[0, 1]`, `U` Haar.
pub fn sample_effect<T: Real, R: Rng>(psi: &PureState<T>, rng: &mut R) -> CMatrix<T> {
    let n = psi.dimension();
    let p = psi.projector();
    let q = CMatrix::identity(n).sub(&p);
    let u = random_unitary::<T, R>(n, rng);
    let mut d = CMatrix::zeros(n);
    for i in 0..n {
        d.data[i * n + i] = Complex::new(T::lit(rng.random::<f64>()), T::zero());
    }
    let inner = u.mul(&d).mul(&u.adjoint());
    let e = p.add(&q.mul(&inner).mul(&q));
    // symmetrise away rounding
    e.add(&e.adjoint()).scale(T::lit(0.5))
}

/// Result of sampling effects against the transition-probability bound.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectReport<T> {
    pub bound: T,
    pub min_value: T,
    pub violations: usize,
    pub trials: usize,
}

impl<T: Real> EffectReport<T> {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

pub fn effect_lower_bound_report<T: Real>(
    psi: &PureState<T>,
    chi: &PureState<T>,
    trials: usize,
    seed: u64,
) -> Result<EffectReport<T>> {
    let bound = transition_probability(psi, chi)?;
    let slack = tol::<T>(T::ASSERT_TOL);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_value = T::infinity();
    let mut violations = 0;
    for _ in 0..trials {
        let e = sample_effect(psi, &mut rng);
        let v = e.expectation(chi.amplitudes());
        min_value = min_value.min(v);
        if v < bound - slack {
            violations += 1;
        }
    }
    Ok(EffectReport {
        bound,
        min_value,
        violations,
        trials,
    })
}

/// True iff every sampled effect detecting `ψ` with certainty gives
/// `⟨χ|E|χ⟩ ≥ |⟨ψ,χ⟩|² − tol`.
pub fn effect_lower_bound_check<T: Real>(
    psi: &PureState<T>,
    chi: &PureState<T>,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    effect_lower_bound_report(psi, chi, trials, seed).map(|r| r.holds())
}

/// Rational point on the unit circle at angle `2 atan(t)`, `t ≈ p/q`.
fn circle_point(t: f64) -> (ExactScalar, ExactScalar) {
    let (p, q) = best_rational(t, 1e-13);
    let (p, q) = (BigInt::from(p), BigInt::from(q));
    let den = &q * &q + &p * &p;
    (
        ExactScalar::new(&q * &q - &p * &p, den.clone()),
        ExactScalar::new(BigInt::from(2) * p * q, den),
    )
}

/// Continued-fraction convergent of `x ≥ 0` within `eps`.
fn best_rational(x: f64, eps: f64) -> (i64, i64) {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i64;
        let h2 = ai.saturating_mul(h1).saturating_add(h0);
        let k2 = ai.saturating_mul(k1).saturating_add(k0);
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (h1 as f64 / k1 as f64 - x).abs() <= eps || r - a == 0.0 {
            break;
        }
        r = 1.0 / (r - a);
    }
    (h1, k1)
}

/// Regular `N`-gon inscribed in the unit circle, vertex `k` at angle
/// `2πk/N`. Coordinates are exact rationals lying on the circle, within about
/// `1e-12` of the true positions; quarter turns are exact.
pub fn equator_polygon(n: usize) -> Result<StateSpace<ExactScalar>> {
    if n < 3 {
        return Err(Error::input(format!("a polygon needs N ≥ 3, got {n}")));
    }
    let nn = n as u64;
    let mut verts = Vec::with_capacity(n);
    for k in 0..nn {
        let quadrant = (4 * k) / nn;
        let r4 = (4 * k) % nn;
        // angle within the quadrant is (π/2)·r4/N
        let (x, y) = if 2 * r4 > nn {
            let beta = std::f64::consts::FRAC_PI_2 * (nn - r4) as f64 / nn as f64;
            let (c, s) = circle_point((beta / 2.0).tan());
            (s, c)
        } else {
            let alpha = std::f64::consts::FRAC_PI_2 * r4 as f64 / nn as f64;
            circle_point((alpha / 2.0).tan())
        };
        let (x, y) = match quadrant {
            0 => (x, y),
            1 => (-y, x),
            2 => (-x, -y),
            _ => (y, -x),
        };
        verts.push(vec![x, y]);
    }
    make_state_space(&format!("{n}-gon"), verts)
}

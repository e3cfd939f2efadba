//! Minimal circumscribed and maximal inscribed complex ellipsoids.
//!
//! The circumscribed problem is solved through its dual, the complex
//! D-optimal design problem `max_w log det H(w)`, `H(w) = Σ wᵢ xᵢxᵢ†`, by
//! Frank–Wolfe iterations with exact line search and (optionally) away steps.
//! With `κᵢ = xᵢ†H⁻¹xᵢ` the trace identity `Σ wᵢκᵢ = n` holds for every `w`,
//! and `w` is optimal iff `max κ = n`; the optimal ellipsoid is
//! `{x : x†H⁻¹x ≤ n}`.
//!
//! Non-centered problems are lifted to `(x, 1) ∈ ℂⁿ⁺¹`. A centered ellipsoid
//! there with shape `[[Q₁₁, q], [q†, q₀]]` cuts the slice `t = 1` in an
//! ellipsoid with the same points inside, and for a fixed slice the volume
//! of the lift is minimised by a choice of `q₀` that does not depend on the
//! slice, so minimal lifts restrict to minimal slices.

use rand::seq::SliceRandom;

use crate::ellipsoid::ComplexEllipsoid;
use crate::linalg::{eig_hermitian, CMatrix, ComplexVector, HermitianShape, C64};
use crate::{Error, Result};

pub const DEFAULT_EPS: f64 = 1e-7;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Weights above this count as support points.
pub const SUPPORT_WEIGHT_TOL: f64 = 1e-8;

/// Tolerance used for the design problem behind [`maie_symmetric`].
pub const MAIE_EPS: f64 = 1e-10;

/// Incremental inverse updates are recomputed from scratch this often.
const REFRESH_EVERY: usize = 64;

/// Probability weights over the input points.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignWeights(Vec<f64>);

impl DesignWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty);
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter("weights must be finite and nonnegative".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self(weights))
    }

    pub fn uniform(m: usize) -> Self {
        Self(vec![1.0 / m as f64; m])
    }

    /// Normalises a nonnegative vector to sum 1.
    pub fn normalized(raw: Vec<f64>) -> Result<Self> {
        let sum: f64 = raw.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::InvalidParameter("weights must have positive sum".into()));
        }
        Self::new(raw.into_iter().map(|w| w / sum).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverReport {
    pub iterations: usize,
    /// `max κ / n − 1`: how far the scaled design is from satisfying the
    /// optimality condition.
    pub duality_gap: f64,
    pub converged: bool,
    /// Indices with weight above [`SUPPORT_WEIGHT_TOL`].
    pub support_points: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct MiceOptions {
    pub eps: f64,
    pub max_iter: usize,
    pub away_steps: bool,
    pub initial_weights: Option<DesignWeights>,
}

impl Default for MiceOptions {
    fn default() -> Self {
        Self { eps: DEFAULT_EPS, max_iter: DEFAULT_MAX_ITER, away_steps: true, initial_weights: None }
    }
}

impl MiceOptions {
    pub fn new(eps: f64, max_iter: usize) -> Self {
        Self { eps, max_iter, ..Self::default() }
    }
}

/// Result of a solve, returned even when the iteration limit was hit.
#[derive(Clone, Debug)]
pub struct MiceSolution {
    pub ellipsoid: ComplexEllipsoid,
    pub report: SolverReport,
    pub weights: DesignWeights,
}

/// Per-iteration diagnostics of the design iteration.
#[derive(Clone, Debug, Default)]
pub struct MiceTrace {
    pub log_det: Vec<f64>,
    /// `Σ wᵢκᵢ`, equal to `n` in exact arithmetic.
    pub trace_sum: Vec<f64>,
}

struct Design<'a> {
    points: &'a [ComplexVector],
    n: usize,
    w: Vec<f64>,
    hinv: CMatrix,
    kappa: Vec<f64>,
}

impl<'a> Design<'a> {
    fn new(points: &'a [ComplexVector], w: Vec<f64>) -> Result<Self> {
        let n = points[0].dim();
        let mut d = Self { points, n, w, hinv: CMatrix::zeros(n, n), kappa: vec![0.0; points.len()] };
        d.refresh()?;
        Ok(d)
    }

    fn moment(&self) -> CMatrix {
        let n = self.n;
        let mut h = CMatrix::zeros(n, n);
        for (x, &w) in self.points.iter().zip(&self.w) {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let xi = x[i] * w;
                for j in 0..n {
                    h[(i, j)] += xi * x[j].conj();
                }
            }
        }
        h.hermitian_part()
    }

    /// Recomputes `H⁻¹` and `κ` from the weights.
    fn refresh(&mut self) -> Result<()> {
        let sum: f64 = self.w.iter().sum();
        self.w.iter_mut().for_each(|w| *w /= sum);
        let h = self.moment();
        let eig = eig_hermitian(&h)?;
        let max = eig.values[self.n - 1];
        if !(eig.values[0] > 1e-12 * max) {
            return Err(Error::Flat);
        }
        self.hinv = eig.map(|mu| 1.0 / mu);
        for (k, x) in self.kappa.iter_mut().zip(self.points) {
            *k = x.dot(&self.hinv.mul_vec(x)).re;
        }
        Ok(())
    }

    /// `w ← (1−γ)w + γeⱼ` with Sherman–Morrison updates of `H⁻¹` and `κ`.
    fn step(&mut self, j: usize, gamma: f64) {
        let y = self.hinv.mul_vec(&self.points[j]);
        let denom = 1.0 - gamma + gamma * self.kappa[j];
        let s = 1.0 / (1.0 - gamma);
        let coef = gamma / denom;
        for (k, x) in self.kappa.iter_mut().zip(self.points) {
            let g = x.dot(&y).norm_sqr();
            *k = s * (*k - coef * g);
        }
        let n = self.n;
        let mut hinv = CMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                hinv[(r, c)] = (self.hinv[(r, c)] - y[r] * y[c].conj() * coef) * s;
            }
        }
        self.hinv = hinv;
        self.w.iter_mut().for_each(|w| *w *= 1.0 - gamma);
        self.w[j] += gamma;
        if self.w[j] < 1e-15 {
            self.w[j] = 0.0;
        }
    }

    fn argmax(&self) -> (usize, f64) {
        self.kappa
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |b, (i, &k)| if k > b.1 { (i, k) } else { b })
    }

    /// Smallest `κ` among points with positive weight.
    fn argmin_support(&self) -> Option<(usize, f64)> {
        self.kappa
            .iter()
            .zip(&self.w)
            .enumerate()
            .filter(|(_, (_, &w))| w > 0.0)
            .fold(None, |b: Option<(usize, f64)>, (i, (&k, _))| match b {
                Some((_, bk)) if bk <= k => b,
                _ => Some((i, k)),
            })
    }

    fn log_det(&self) -> f64 {
        let h = self.moment();
        eig_hermitian(&h).map(|e| e.values.iter().map(|v| v.ln()).sum()).unwrap_or(f64::NEG_INFINITY)
    }

    fn trace_sum(&self) -> f64 {
        self.w.iter().zip(&self.kappa).map(|(w, k)| w * k).sum()
    }
}

fn check_points(points: &[ComplexVector]) -> Result<usize> {
    let first = points.first().ok_or(Error::Empty)?;
    for p in points {
        first.check_dim(p)?;
        if p.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
    }
    Ok(first.dim())
}

fn solve_centered(
    points: &[ComplexVector],
    opts: &MiceOptions,
    mut trace: Option<&mut MiceTrace>,
) -> Result<MiceSolution> {
    let n = check_points(points)?;
    if !(opts.eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {}", opts.eps)));
    }
    let m = points.len();
    if m < n {
        return Err(Error::Flat);
    }
    let w0 = match &opts.initial_weights {
        Some(w) if w.len() != m => return Err(Error::DimensionMismatch { expected: m, found: w.len() }),
        Some(w) => w.as_slice().to_vec(),
        None => DesignWeights::uniform(m).0,
    };
    let mut d = Design::new(points, w0)?;
    let nf = n as f64;
    let threshold = nf * (1.0 + opts.eps);
    let mut iterations = 0;
    let mut converged = false;
    let mut since_refresh = 0;

    loop {
        if let Some(t) = trace.as_deref_mut() {
            t.log_det.push(d.log_det());
            t.trace_sum.push(d.trace_sum());
        }
        let (j, kmax) = d.argmax();
        if kmax <= threshold {
            if since_refresh > 0 {
                d.refresh()?;
                since_refresh = 0;
                if d.argmax().1 > threshold {
                    continue;
                }
            }
            converged = true;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        let toward = (j, (kmax - nf) / (nf * (kmax - 1.0)));
        let mut choice = toward;
        if opts.away_steps {
            if let Some((k, kmin)) = d.argmin_support() {
                let wk = d.w[k];
                if 1.0 - kmin / nf > kmax / nf - 1.0 && wk < 1.0 {
                    let floor = -wk / (1.0 - wk);
                    let g = if kmin > 1.0 { (kmin - nf) / (nf * (kmin - 1.0)) } else { floor };
                    let g = g.max(floor);
                    if 1.0 - g + g * kmin > 1e-10 {
                        choice = (k, g);
                    }
                }
            }
        }
        let (idx, gamma) = choice;
        d.step(idx, gamma);
        since_refresh += 1;
        if trace.is_some() || since_refresh >= REFRESH_EVERY {
            d.refresh()?;
            since_refresh = 0;
        }
    }
    if since_refresh > 0 {
        d.refresh()?;
    }

    let (_, kmax) = d.argmax();
    let shape = HermitianShape::from_hermitian(d.hinv.scale_real(1.0 / kmax))?;
    let ellipsoid = ComplexEllipsoid::new(ComplexVector::zeros(n), shape)?;
    let support_points = d
        .w
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > SUPPORT_WEIGHT_TOL)
        .map(|(i, _)| i)
        .collect();
    let report = SolverReport { iterations, duality_gap: kmax / nf - 1.0, converged, support_points };
    Ok(MiceSolution { ellipsoid, report, weights: DesignWeights(d.w) })
}

/// Minimal centered complex ellipsoid containing `points` (equivalently the
/// absolutely convex hull of their circle orbits). Errors on non-convergence.
pub fn mice_centered(points: &[ComplexVector], eps: f64, max_iter: usize) -> Result<(ComplexEllipsoid, SolverReport)> {
    let sol = mice_centered_with(points, &MiceOptions::new(eps, max_iter))?;
    into_result(sol)
}

fn into_result(sol: MiceSolution) -> Result<(ComplexEllipsoid, SolverReport)> {
    if !sol.report.converged {
        return Err(Error::NonConvergence { iterations: sol.report.iterations, gap: sol.report.duality_gap });
    }
    Ok((sol.ellipsoid, sol.report))
}

pub fn mice_centered_with(points: &[ComplexVector], opts: &MiceOptions) -> Result<MiceSolution> {
    solve_centered(points, opts, None)
}

/// As [`mice_centered_with`], recording `log det H` and `Σ wκ` before every
/// iteration (with `H⁻¹` recomputed from scratch each time).
pub fn mice_centered_traced(points: &[ComplexVector], opts: &MiceOptions) -> Result<(MiceSolution, MiceTrace)> {
    let mut trace = MiceTrace::default();
    let sol = solve_centered(points, opts, Some(&mut trace))?;
    Ok((sol, trace))
}

/// Minimal-volume complex ellipsoid containing `points`. Errors on
/// non-convergence.
pub fn mice(points: &[ComplexVector], eps: f64, max_iter: usize) -> Result<(ComplexEllipsoid, SolverReport)> {
    into_result(mice_with(points, &MiceOptions::new(eps, max_iter))?)
}

pub fn mice_with(points: &[ComplexVector], opts: &MiceOptions) -> Result<MiceSolution> {
    let n = check_points(points)?;
    let lifted: Vec<ComplexVector> = points
        .iter()
        .map(|p| {
            let mut v = p.clone().into_vec();
            v.push(C64::new(1.0, 0.0));
            ComplexVector::from(v)
        })
        .collect();
    let sol = solve_centered(&lifted, opts, None)?;
    let q = sol.ellipsoid.shape().matrix();
    let q11 = CMatrix::from_fn(n, n, |i, j| q[(i, j)]);
    let qv = ComplexVector::from((0..n).map(|i| q[(i, n)]).collect::<Vec<_>>());
    let q0 = q[(n, n)].re;
    let q11_inv_q = q11.solve_vec(&qv)?;
    let denom = 1.0 - q0 + qv.dot(&q11_inv_q).re;
    if !(denom > 0.0) {
        return Err(Error::Flat);
    }
    let shape = HermitianShape::from_hermitian(q11.scale_real(1.0 / denom))?;
    let ellipsoid = ComplexEllipsoid::new(-&q11_inv_q, shape)?;
    Ok(MiceSolution { ellipsoid, ..sol })
}

/// Randomly shuffles `points` and draws random positive initial weights; used
/// to check that the solution does not depend on either.
pub fn shuffled_instance<R: rand::Rng + ?Sized>(
    rng: &mut R,
    points: &[ComplexVector],
) -> (Vec<ComplexVector>, DesignWeights) {
    let mut pts = points.to_vec();
    pts.shuffle(rng);
    let raw: Vec<f64> = (0..pts.len()).map(|_| rng.random_range(0.1..1.0)).collect();
    (pts, DesignWeights::normalized(raw).expect("positive weights"))
}

/// `e^{2πij/k}`, exact at multiples of a quarter turn.
fn root_of_unity(j: usize, k: usize) -> C64 {
    let j = j % k;
    if (4 * j) % k == 0 {
        return [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][4 * j / k];
    }
    C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / k as f64)
}

/// Orbit `{ωʲxᵢ : 0 ≤ j < k}` of the points under the `k`-th roots of unity.
pub fn symmetrize(points: &[ComplexVector], k: usize) -> Result<Vec<ComplexVector>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("orbit size must be at least 2, got {k}")));
    }
    Ok(points
        .iter()
        .flat_map(|x| {
            (0..k).map(move |j| x.scale(root_of_unity(j, k)))
        })
        .collect())
}

/// Maximal-volume complex ellipsoid inside `{x : |aᵢ†x| ≤ bᵢ}`.
///
/// The body is the polar of the absolutely convex hull of the `aᵢ/bᵢ`, so
/// its maximal inscribed ellipsoid is the polar of their minimal centered
/// circumscribed one.
pub fn maie_symmetric(slabs: &[(ComplexVector, f64)]) -> Result<ComplexEllipsoid> {
    if slabs.is_empty() {
        return Err(Error::Unbounded);
    }
    let mut normals = Vec::with_capacity(slabs.len());
    for (a, b) in slabs {
        if !(*b > 0.0) || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("slab half-width must be positive, got {b}")));
        }
        normals.push(a.scale_real(1.0 / b));
    }
    let (e, _) = match mice_centered(&normals, MAIE_EPS, DEFAULT_MAX_ITER) {
        Err(Error::Flat) => return Err(Error::Unbounded),
        other => other?,
    };
    let inner = e.polar()?;
    for (a, b) in slabs {
        if slab_reach(&inner, a) > b * (1.0 + 1e-8) {
            return Err(Error::Infeasible("polar ellipsoid violates a slab".into()));
        }
    }
    Ok(inner)
}

/// `sup_{x∈E} |a†x − a†c| = √(a†S⁻¹a)` for `E = {x : (x−c)†S(x−c) ≤ 1}`.
pub fn slab_reach(e: &ComplexEllipsoid, a: &ComplexVector) -> f64 {
    e.shape().inverse().form(a).max(0.0).sqrt()
}

//! Sampling-based decision procedures on convex bodies.
//!
//! Every verdict means "no counterexample found at this resolution": a
//! `true` report lists how many sections or projections were examined and
//! how far the worst one was from a disk.
//!
//! Random lines and planes are drawn from unitarily invariant distributions
//! (Haar frames through interior points). Work item `i` uses its own ChaCha
//! stream `i` of the report seed, and results are reduced in index order, so
//! reports are bit-for-bit reproducible whatever the thread count.

mod disk;
mod homothety;

pub use disk::{fit_disk, fit_support_disk, DiskFit};
pub use homothety::{homothety_detect, Homothety, SupportTable};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rayon::prelude::*;

use crate::bodies::{
    projection_oracle, section_oracle, section_samples, AffinePlane, BodyOracle,
};
use crate::ellipsoid::ComplexLine;
use crate::linalg::{CMatrix, ComplexVector, C64};
use crate::random::{complement_frame, random_frame, random_unit_vector, SeededRng};
use crate::{Error, Result};

/// Default relative deviation accepted as a disk.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Boundary samples per section.
pub const SECTION_SAMPLES: usize = 32;

/// Support samples per projection onto a complex line.
pub const PROJECTION_SAMPLES: usize = 32;

/// Random base points are drawn at most this fraction of the way from the
/// interior point to the boundary.
pub const BASE_POINT_DEPTH: f64 = 0.8;

/// Where the worst deviation of a sweep was observed.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    None,
    Line { base: ComplexVector, direction: ComplexVector },
    Direction(ComplexVector),
    Plane { base: ComplexVector, frame: CMatrix },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacterizationReport {
    /// `worst_deviation ≤ tol`.
    pub verdict: bool,
    pub worst_witness: Witness,
    pub worst_deviation: f64,
    /// Sections, projections or planes actually examined.
    pub samples_used: usize,
    pub seed: u64,
    pub tol: f64,
    /// Reconstructed symmetry center, when one was found.
    pub center: Option<ComplexVector>,
    /// Common point of the examined planes, for sweeps through a point.
    pub through_point: Option<ComplexVector>,
    /// Symmetry centers of the examined sections, in ambient coordinates.
    pub section_centers: Vec<ComplexVector>,
}

impl CharacterizationReport {
    fn from_items(items: Vec<(f64, Witness)>, tol: f64, seed: u64) -> Self {
        let samples_used = items.len();
        let (worst_deviation, worst_witness) = items
            .into_iter()
            .fold((0.0, Witness::None), |best, cur| if cur.0 > best.0 { cur } else { best });
        Self {
            verdict: worst_deviation <= tol,
            worst_witness,
            worst_deviation,
            samples_used,
            seed,
            tol,
            center: None,
            through_point: None,
            section_centers: Vec::new(),
        }
    }
}

fn item_rng(seed: u64, index: usize) -> SeededRng {
    let mut rng = SeededRng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// A point at a uniformly random fraction (up to [`BASE_POINT_DEPTH`]) of
/// the way from the interior point to the boundary, in a random direction.
fn random_interior_point<R: Rng + ?Sized>(body: &dyn BodyOracle, rng: &mut R) -> ComplexVector {
    let o = body.interior_point();
    let v = random_unit_vector(rng, body.dim());
    let s = rng.random_range(0.0..BASE_POINT_DEPTH);
    o.axpy(C64::new(s * body.radial(&o, &v), 0.0), &v)
}

/// Deviation from a disk of one complex-line section; `None` when the line
/// misses the body.
fn section_deviation(body: &dyn BodyOracle, line: &ComplexLine) -> Result<Option<f64>> {
    let Some(samples) = section_samples(body, line, SECTION_SAMPLES)? else {
        return Ok(None);
    };
    Ok(Some(fit_disk(&samples)?.max_rel_deviation))
}

/// Tests random complex-line sections for being disks (the property that
/// characterises complex ellipsoids among convex bodies).
pub fn bombon_check(body: &dyn BodyOracle, num_lines: usize, tol: f64, seed: u64) -> Result<CharacterizationReport> {
    check_tol(tol)?;
    let n = body.dim();
    let items: Vec<Option<(f64, Witness)>> = (0..num_lines)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(seed, i);
            let base = random_interior_point(body, &mut rng);
            let direction = random_unit_vector(&mut rng, n);
            let line = ComplexLine::new(base, direction)?;
            Ok(section_deviation(body, &line)?.map(|dev| {
                (dev, Witness::Line { base: line.base().clone(), direction: line.direction().clone() })
            }))
        })
        .collect::<Result<_>>()?;
    Ok(CharacterizationReport::from_items(items.into_iter().flatten().collect(), tol, seed))
}

/// Tests the complex-line sections through `p0` for being disks.
pub fn disk_sections_through_point(
    body: &dyn BodyOracle,
    p0: &ComplexVector,
    num_lines: usize,
    tol: f64,
    seed: u64,
) -> Result<CharacterizationReport> {
    check_tol(tol)?;
    if p0.dim() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), found: p0.dim() });
    }
    if !body.contains(p0) {
        return Err(Error::OutsideBody);
    }
    let n = body.dim();
    let items: Vec<Option<(f64, Witness)>> = (0..num_lines)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(seed, i);
            let line = ComplexLine::new(p0.clone(), random_unit_vector(&mut rng, n))?;
            Ok(section_deviation(body, &line)?.map(|dev| {
                (dev, Witness::Line { base: p0.clone(), direction: line.direction().clone() })
            }))
        })
        .collect::<Result<_>>()?;
    let mut report = CharacterizationReport::from_items(items.into_iter().flatten().collect(), tol, seed);
    report.through_point = Some(p0.clone());
    Ok(report)
}

/// Disk fit of the projection of `body` onto `ℂ·d`, from its support
/// function `θ ↦ h(e^{iθ}d)`.
pub fn projection_disk(body: &dyn BodyOracle, d: &ComplexVector) -> Result<DiskFit> {
    let values: Vec<f64> = (0..PROJECTION_SAMPLES)
        .map(|k| {
            let w = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / PROJECTION_SAMPLES as f64);
            body.support(&d.scale(w))
        })
        .collect();
    fit_support_disk(&values)
}

/// Looks for a point `x₀` such that every projection onto a complex line is
/// a disk centered at the image of `x₀`.
///
/// Each of `num_dirs` random unit directions `dⱼ` gives a projection; if all
/// are disks (within `tol`) with centers `cⱼ`, `x₀` solves `dⱼ†x₀ = cⱼ` in
/// the least-squares sense and is accepted when the largest residual is at
/// most `tol` times the body's inner radius. The report's deviation is the
/// larger of the worst disk deviation and that relative residual.
pub fn symmetry_center(
    body: &dyn BodyOracle,
    num_dirs: usize,
    tol: f64,
    seed: u64,
) -> Result<(Option<ComplexVector>, CharacterizationReport)> {
    check_tol(tol)?;
    let n = body.dim();
    if num_dirs < n {
        return Err(Error::InvalidParameter(format!("need at least {n} directions, got {num_dirs}")));
    }
    let fits: Vec<(ComplexVector, DiskFit)> = (0..num_dirs)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(seed, i);
            let d = random_unit_vector(&mut rng, n);
            let fit = projection_disk(body, &d)?;
            Ok((d, fit))
        })
        .collect::<Result<_>>()?;
    let items: Vec<(f64, Witness)> =
        fits.iter().map(|(d, f)| (f.max_rel_deviation, Witness::Direction(d.clone()))).collect();
    let mut report = CharacterizationReport::from_items(items, tol, seed);
    if !report.verdict {
        return Ok((None, report));
    }

    // normal equations D†D x = D†c with rows dⱼ†
    let mut gram = CMatrix::zeros(n, n);
    let mut rhs = ComplexVector::zeros(n);
    for (d, f) in &fits {
        for r in 0..n {
            rhs[r] += d[r] * f.center;
            for c in 0..n {
                gram[(r, c)] += d[r] * d[c].conj();
            }
        }
    }
    let Ok(x0) = gram.solve_vec(&rhs) else {
        return Ok((None, report));
    };
    let residual = fits.iter().map(|(d, f)| (d.dot(&x0) - f.center).norm()).fold(0.0, f64::max);
    let rel = residual / body.inner_radius();
    if rel > report.worst_deviation {
        report.worst_deviation = rel;
        report.worst_witness = Witness::None;
    }
    report.verdict = report.worst_deviation <= tol;
    if report.verdict {
        report.center = Some(x0.clone());
        Ok((Some(x0), report))
    } else {
        Ok((None, report))
    }
}

/// Tests random complex hyperplane sections for complex symmetry. With
/// `through_point`, every hyperplane passes through it; otherwise each one
/// passes through a random interior point.
pub fn sections_symmetric_sweep(
    body: &dyn BodyOracle,
    num_hyperplanes: usize,
    tol: f64,
    seed: u64,
    through_point: Option<&ComplexVector>,
) -> Result<CharacterizationReport> {
    check_tol(tol)?;
    let n = body.dim();
    if n < 2 {
        return Err(Error::InvalidParameter("hyperplane sections need dimension at least 2".into()));
    }
    if let Some(p) = through_point {
        if p.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
        }
        if !body.contains(p) {
            return Err(Error::OutsideBody);
        }
    }
    let dirs = 4 * (n - 1);
    let items: Vec<Option<(f64, Witness, Option<ComplexVector>)>> = (0..num_hyperplanes)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(seed, i);
            let base = match through_point {
                Some(p) => p.clone(),
                None => random_interior_point(body, &mut rng),
            };
            let normal = random_unit_vector(&mut rng, n);
            let plane = AffinePlane::new(base, complement_frame(&normal))?;
            let Some(section) = section_oracle(body, &plane)? else {
                return Ok(None);
            };
            let (center, rep) = symmetry_center(section.as_ref(), dirs, tol, rng.random())?;
            let witness = Witness::Plane { base: plane.base().clone(), frame: plane.frame().clone() };
            Ok(Some((rep.worst_deviation, witness, center.map(|c| plane.lift(&c)))))
        })
        .collect::<Result<_>>()?;
    let items: Vec<_> = items.into_iter().flatten().collect();
    let centers = items.iter().filter_map(|(_, _, c)| c.clone()).collect();
    let mut report =
        CharacterizationReport::from_items(items.into_iter().map(|(d, w, _)| (d, w)).collect(), tol, seed);
    report.through_point = through_point.cloned();
    report.section_centers = centers;
    Ok(report)
}

/// Relative misfit of the support function of `body` against the closest
/// complex-ellipsoid support function `h(u) = √(u†Qu) + Re⟨c, u⟩` over the
/// unit directions `dirs`.
///
/// The width `h(u) + h(−u) = 2√(u†Qu)` determines the Hermitian `Q` by
/// linear least squares and the odd part `h(u) − h(−u) = 2Re⟨c, u⟩`
/// determines `c`. The misfit is the largest residual divided by the mean
/// half-width. Needs at least `2k²` directions in dimension `k`.
pub fn ellipsoid_support_misfit(body: &dyn BodyOracle, dirs: &[ComplexVector]) -> Result<f64> {
    let k = body.dim();
    if dirs.len() < 2 * k * k {
        return Err(Error::InvalidParameter(format!("need at least {} directions, got {}", 2 * k * k, dirs.len())));
    }
    let m = dirs.len();
    let plus: Vec<f64> = dirs.iter().map(|u| body.support(u)).collect();
    let minus: Vec<f64> = dirs.iter().map(|u| body.support(&u.scale_real(-1.0))).collect();
    let half_width: Vec<f64> = plus.iter().zip(&minus).map(|(a, b)| 0.5 * (a + b)).collect();
    let scale = half_width.iter().sum::<f64>() / m as f64;
    if !(scale > 0.0) {
        return Err(Error::Flat);
    }

    // unknowns: q_ii, then (Re q_ij, Im q_ij) for i < j
    let params = k * k;
    let row = |u: &ComplexVector| {
        let mut r = Vec::with_capacity(params);
        for i in 0..k {
            r.push(u[i].norm_sqr());
        }
        for i in 0..k {
            for j in i + 1..k {
                let z = u[i].conj() * u[j];
                r.push(2.0 * z.re);
                r.push(-2.0 * z.im);
            }
        }
        r
    };
    let a = DMatrix::from_row_iterator(m, params, dirs.iter().flat_map(row));
    let b = DVector::from_iterator(m, half_width.iter().map(|w| w * w));
    let q = a.clone().svd(true, true).solve(&b, 1e-14).map_err(|_| Error::Singular)?;
    let forms = &a * &q;

    let a_odd = DMatrix::from_fn(m, 2 * k, |r, j| if j % 2 == 0 { dirs[r][j / 2].re } else { dirs[r][j / 2].im });
    let b_odd = DVector::from_iterator(m, plus.iter().zip(&minus).map(|(p, q)| 0.5 * (p - q)));
    let c = a_odd.clone().svd(true, true).solve(&b_odd, 1e-14).map_err(|_| Error::Singular)?;
    let odd = &a_odd * &c;

    let mut worst = 0.0f64;
    for r in 0..m {
        if !(forms[r] > 0.0) {
            return Ok(f64::INFINITY);
        }
        let model = forms[r].sqrt() + odd[r];
        worst = worst.max((plus[r] - model).abs());
    }
    Ok(worst / scale)
}

/// Tests orthogonal projections onto random complex `k`-planes for being
/// complex ellipsoids, fitting each projection's support function over
/// `dirs_per_plane` random directions with [`ellipsoid_support_misfit`].
pub fn projections_ellipsoid_sweep(
    body: &dyn BodyOracle,
    k: usize,
    num_planes: usize,
    dirs_per_plane: usize,
    tol: f64,
    seed: u64,
) -> Result<CharacterizationReport> {
    check_tol(tol)?;
    let n = body.dim();
    if k < 2 || k >= n {
        return Err(Error::InvalidParameter(format!("projection rank must satisfy 2 ≤ k < {n}, got {k}")));
    }
    let items: Vec<(f64, Witness)> = (0..num_planes)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(seed, i);
            let frame = random_frame(&mut rng, n, k);
            let projected = projection_oracle(body, &frame)?;
            let dirs: Vec<_> = (0..dirs_per_plane).map(|_| random_unit_vector(&mut rng, k)).collect();
            let dev = ellipsoid_support_misfit(projected.as_ref(), &dirs)?;
            Ok((dev, Witness::Plane { base: ComplexVector::zeros(n), frame }))
        })
        .collect::<Result<_>>()?;
    Ok(CharacterizationReport::from_items(items, tol, seed))
}

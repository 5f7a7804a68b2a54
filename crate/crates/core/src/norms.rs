//! `L^p` norms over the disk, empirical operator-norm estimates, and
//! sampled Hölder quotients.
//!
//! Everything here is one-sided by construction: sampled sups are lower
//! bounds for true sups, and the transform norm integrates a interpolated
//! grid that truncates just inside the rim. That keeps every comparison
//! of the form `empirical <= closed-form bound` meaningful: an honest
//! lower bound sitting below a proven upper bound.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::{PolarGrid, ScalarField};
use crate::geometry::DiskPoint;
use crate::operators::cauchy_transform;
use crate::parallel::par_map;
use crate::quadrature::{gauss_legendre, integrate_disk_real, QuadratureSpec, SingularitySpec};

/// Conjugate exponents `(p, q)` with `1/p + 1/q = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentPair {
    p: f64,
    q: f64,
}

impl ExponentPair {
    /// Any `p > 1` with its conjugate.
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::Domain {
                what: "exponent p",
                value: p,
                expected: "1 < p < infinity",
            });
        }
        Ok(Self { p, q: p / (p - 1.0) })
    }

    /// The range where the transform norm bound holds: `3/2 < p < 2`.
    pub fn for_transform_bound(p: f64) -> Result<Self> {
        if !(p > 1.5 && p < 2.0) {
            return Err(Error::Domain {
                what: "exponent p",
                value: p,
                expected: "3/2 < p < 2 (strict)",
            });
        }
        Self::new(p)
    }

    /// The range where the gradient is Hölder continuous: `p > 2`, with
    /// exponent `1 - 2/p`.
    pub fn for_gradient_holder(p: f64) -> Result<Self> {
        if !(p > 2.0) || !p.is_finite() {
            return Err(Error::Domain {
                what: "exponent p",
                value: p,
                expected: "2 < p < infinity",
            });
        }
        Self::new(p)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `1 - 2/p`, the Hölder exponent of the gradient for `p > 2`.
    pub fn holder_exponent(&self) -> f64 {
        1.0 - 2.0 / self.p
    }
}

fn require_integrable(field: &ScalarField, p: f64, inner_radius: f64) -> Result<()> {
    if field.max_radius() < 1.0 {
        return Err(Error::SampledExtrapolation {
            radius: 1.0,
            max_radius: field.max_radius(),
        });
    }
    for sing in &field.metadata().singularities {
        if sing.location.norm() < inner_radius {
            // Excluded by the annular hole along with its divergence.
            continue;
        }
        if sing.order * p >= 2.0 {
            return Err(Error::NonIntegrablePower {
                order: sing.order,
                p,
            });
        }
    }
    Ok(())
}

fn lp_norm_inner(field: &ScalarField, p: f64, inner_radius: f64, tol: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Domain {
            what: "norm exponent p",
            value: p,
            expected: "1 <= p < infinity",
        });
    }
    if !(0.0..1.0).contains(&inner_radius) {
        return Err(Error::Domain {
            what: "inner radius",
            value: inner_radius,
            expected: "0 <= inner_radius < 1",
        });
    }
    require_integrable(field, p, inner_radius)?;

    let mut spec = QuadratureSpec::with_tol(tol);
    spec.inner_radius = inner_radius;
    spec.angular_breakpoints = field.metadata().angular_breakpoints.clone();
    for sing in &field.metadata().singularities {
        if sing.location.norm() >= inner_radius {
            // |f|^p multiplies the blow-up rate by p.
            spec.singularities
                .push(SingularitySpec::new(sing.location, sing.order * p));
        }
    }
    let (value, _) = integrate_disk_real(
        |tau: Complex64| {
            field
                .eval(tau)
                .map(|v| v.norm().powf(p))
                .unwrap_or(f64::NAN)
        },
        &spec,
    )?;
    Ok(value.max(0.0).powf(1.0 / p))
}

/// `(∫ |f|^p dA)^(1/p)` against normalized area measure.
pub fn lp_norm(field: &ScalarField, p: f64, tol: f64) -> Result<f64> {
    lp_norm_inner(field, p, 0.0, tol)
}

/// [`lp_norm`] restricted to the annulus `inner_radius < |z| < 1`; the
/// truncation makes divergence scans possible for fields outside `L^p`.
pub fn lp_norm_annulus(field: &ScalarField, p: f64, inner_radius: f64, tol: f64) -> Result<f64> {
    lp_norm_inner(field, p, inner_radius, tol)
}

/// Sampling resolution for transform norms: Chebyshev-spaced rings times
/// uniform angles.
#[derive(Clone, Copy, Debug)]
pub struct GridResolution {
    pub radial: usize,
    pub angular: usize,
}

impl Default for GridResolution {
    fn default() -> Self {
        Self {
            radial: 64,
            angular: 128,
        }
    }
}

impl GridResolution {
    fn validate(&self) -> Result<()> {
        if self.radial < 2 {
            return Err(Error::Domain {
                what: "radial resolution",
                value: self.radial as f64,
                expected: "at least 2 rings",
            });
        }
        if self.angular < 8 {
            return Err(Error::Domain {
                what: "angular resolution",
                value: self.angular as f64,
                expected: "at least 8 angles",
            });
        }
        Ok(())
    }

    /// Chebyshev points of `[0, 1]`, ascending: denser near both the
    /// origin and the rim, where the transforms have structure.
    pub fn radii(&self) -> Vec<f64> {
        let n = self.radial;
        (0..n)
            .map(|k| {
                let angle = std::f64::consts::PI * (2.0 * (n - k) as f64 - 1.0)
                    / (2.0 * n as f64);
                0.5 * (1.0 + angle.cos())
            })
            .collect()
    }
}

/// Evaluates `d/dz` of the potential of `g` on the grid and returns the
/// sampled values as a polar grid for downstream interpolation.
pub fn transform_grid(
    g: &ScalarField,
    grid: GridResolution,
    tol: f64,
) -> Result<PolarGrid> {
    grid.validate()?;
    let radii = grid.radii();
    let m = grid.angular;
    let mut nodes = Vec::with_capacity(radii.len() * m);
    for &r in &radii {
        for j in 0..m {
            let theta = std::f64::consts::TAU * j as f64 / m as f64;
            nodes.push(Complex64::from_polar(r, theta));
        }
    }
    let values: Result<Vec<Complex64>> = par_map(nodes, |z| {
        let point = DiskPoint::new(z)?;
        Ok(cauchy_transform(g, point, tol)?.value)
    })
    .into_iter()
    .collect();
    PolarGrid::new(radii, m, values?)
}

/// `‖ d/dz potential(g) ‖_q` estimated from a sampled grid. Strictly a
/// lower bound: interpolation truncates just inside the rim.
pub fn lq_norm_of_transform(
    g: &ScalarField,
    pair: ExponentPair,
    grid: GridResolution,
    tol: f64,
) -> Result<f64> {
    let sampled = transform_grid(g, grid, tol)?;
    Ok(grid_lq_norm(&sampled, pair.q()))
}

/// `q`-norm of the bilinear interpolant of a polar grid, integrated
/// patchwise with a fixed product rule; the annulus beyond the outermost
/// ring is excluded, so this is a strict lower bound for the norm over
/// the full disk.
fn grid_lq_norm(grid: &PolarGrid, q: f64) -> f64 {
    let rule = gauss_legendre(6);
    let radii = grid.radii();
    let m = grid.angle_count();
    let step = std::f64::consts::TAU / m as f64;
    let half_t = 0.5 * step;

    let mut total = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut add = |x: f64| {
        let y = x - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
    };

    for i in 0..radii.len() {
        let (r_lo, r_hi) = if i == 0 {
            (0.0, radii[0])
        } else {
            (radii[i - 1], radii[i])
        };
        let half_r = 0.5 * (r_hi - r_lo);
        if half_r == 0.0 {
            continue;
        }
        let mid_r = 0.5 * (r_hi + r_lo);
        let patch_scale = half_r * half_t / std::f64::consts::PI;
        for j in 0..m {
            let mid_t = step * j as f64 + half_t;
            for &(xr, wr) in rule {
                let r = mid_r + half_r * xr;
                for &(xt, wt) in rule {
                    let theta = mid_t + half_t * xt;
                    let f = grid
                        .eval(Complex64::from_polar(r, theta))
                        .map(|v| v.norm().powf(q))
                        .unwrap_or(0.0);
                    add(f * r * wr * wt * patch_scale);
                }
            }
        }
    }
    total.max(0.0).powf(1.0 / q)
}

/// `max over the family of ‖transform(g)‖_q / ‖g‖_p`: an empirical lower
/// bound for the operator norm. Deterministic for a fixed family and grid.
pub fn operator_norm_lower_bound(
    pair: ExponentPair,
    family: &[ScalarField],
    grid: GridResolution,
    tol: f64,
) -> Result<f64> {
    let ratios = operator_norm_ratios(pair, family, grid, tol)?;
    Ok(ratios
        .iter()
        .map(|(_, r)| *r)
        .fold(0.0_f64, f64::max))
}

/// Per-field norm ratios behind [`operator_norm_lower_bound`], labeled by
/// field id so reports can show which member attains the maximum.
pub fn operator_norm_ratios(
    pair: ExponentPair,
    family: &[ScalarField],
    grid: GridResolution,
    tol: f64,
) -> Result<Vec<(String, f64)>> {
    if family.is_empty() {
        return Err(Error::Domain {
            what: "family size",
            value: 0.0,
            expected: "at least one nonzero field",
        });
    }
    let mut out = Vec::with_capacity(family.len());
    for field in family {
        let denom = lp_norm(field, pair.p(), tol)?;
        if denom == 0.0 {
            return Err(Error::Domain {
                what: "field norm",
                value: 0.0,
                expected: "nonzero members only",
            });
        }
        let numer = lq_norm_of_transform(field, pair, grid, tol)?;
        out.push((field.id().to_string(), numer / denom));
    }
    Ok(out)
}

/// Stratified random pair generator for Hölder quotients: uniform pairs,
/// near-diagonal pairs (separation log-uniform in `[1e-6, 1e-2]`), and
/// origin-anchored pairs (the second point's modulus log-uniform down to
/// `1e-8`, since Hölder failures concentrate at the singular point).
#[derive(Clone, Copy, Debug)]
pub struct PairSampler {
    pub pairs: usize,
    pub seed: u64,
}

impl Default for PairSampler {
    fn default() -> Self {
        Self {
            pairs: 3000,
            seed: 1729,
        }
    }
}

const MIN_SEPARATION: f64 = 1e-8;

impl PairSampler {
    pub fn new(pairs: usize, seed: u64) -> Self {
        Self { pairs, seed }
    }

    /// A doubled-budget sampler with a shifted stream, for
    /// stability-under-doubling checks.
    pub fn doubled(&self) -> Self {
        Self {
            pairs: self.pairs * 2,
            seed: self.seed.wrapping_add(1),
        }
    }

    pub fn sample_pairs(&self) -> Vec<(Complex64, Complex64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.pairs);
        let third = self.pairs / 3;

        let uniform_point = |rng: &mut ChaCha8Rng| -> Complex64 {
            let r = rng.gen::<f64>().sqrt() * (1.0 - 1e-9);
            let theta = std::f64::consts::TAU * rng.gen::<f64>();
            Complex64::from_polar(r, theta)
        };

        while out.len() < third {
            let z = uniform_point(&mut rng);
            let w = uniform_point(&mut rng);
            if (z - w).norm() >= MIN_SEPARATION {
                out.push((z, w));
            }
        }
        while out.len() < 2 * third {
            let mut z = uniform_point(&mut rng);
            if z.norm() > 0.98 {
                z *= 0.97 / z.norm();
            }
            let sep = 1e-6 * 10f64.powf(4.0 * rng.gen::<f64>());
            let theta = std::f64::consts::TAU * rng.gen::<f64>();
            let offset = Complex64::from_polar(sep, theta);
            let w = if (z + offset).norm() < 1.0 {
                z + offset
            } else {
                z - offset
            };
            out.push((z, w));
        }
        let origin = Complex64::new(0.0, 0.0);
        while out.len() < self.pairs {
            let lr = (MIN_SEPARATION.ln()
                + rng.gen::<f64>() * (0.99f64.ln() - MIN_SEPARATION.ln()))
            .exp();
            let theta = std::f64::consts::TAU * rng.gen::<f64>();
            out.push((origin, Complex64::from_polar(lr, theta)));
        }
        out
    }
}

/// Sampled Hölder data: the largest difference quotient seen and where.
#[derive(Clone, Copy, Debug)]
pub struct HolderReport {
    pub exponent: f64,
    pub quotient_sup: f64,
    pub pair_count: usize,
    pub max_pair: (DiskPoint, DiskPoint),
}

fn require_holder_exponent(exponent: f64) -> Result<()> {
    if !(exponent > 0.0 && exponent <= 1.0) {
        return Err(Error::Domain {
            what: "holder exponent",
            value: exponent,
            expected: "0 < exponent <= 1",
        });
    }
    Ok(())
}

fn report_from_quotients(
    exponent: f64,
    pairs: &[(Complex64, Complex64)],
    quotients: &[f64],
) -> Result<HolderReport> {
    let mut sup = -1.0;
    let mut arg = 0usize;
    for (k, &quot) in quotients.iter().enumerate() {
        if !quot.is_finite() {
            return Err(Error::Domain {
                what: "sampled quotient",
                value: quot,
                expected: "finite values (field evaluable at samples)",
            });
        }
        if quot > sup {
            sup = quot;
            arg = k;
        }
    }
    let (z, w) = pairs[arg];
    Ok(HolderReport {
        exponent,
        quotient_sup: sup,
        pair_count: pairs.len(),
        max_pair: (DiskPoint::new(z)?, DiskPoint::new(w)?),
    })
}

/// Largest sampled `|f(z) - f(w)| / |z - w|^exponent`: a lower bound for
/// the Hölder seminorm, reproducible for a fixed sampler.
pub fn holder_quotient<F>(f: F, exponent: f64, sampler: &PairSampler) -> Result<HolderReport>
where
    F: Fn(Complex64) -> Complex64 + Sync + Send,
{
    require_holder_exponent(exponent)?;
    let pairs = sampler.sample_pairs();
    let quotients = par_map(pairs.clone(), |(z, w)| {
        (f(z) - f(w)).norm() / (z - w).norm().powf(exponent)
    });
    report_from_quotients(exponent, &pairs, &quotients)
}

/// Hölder quotient of the potential's gradient: the max over both the
/// `d/dz` and `d/dzbar` components. Closed-form gradients are used when
/// the field has them; otherwise each sample point costs two quadratures.
pub fn grad_holder_quotient(
    g: &ScalarField,
    exponent: f64,
    sampler: &PairSampler,
    tol: f64,
) -> Result<HolderReport> {
    require_holder_exponent(exponent)?;
    let gradient = |z: Complex64| -> Result<(Complex64, Complex64)> {
        if let Some(pair) = g.known_gradient(z) {
            return Ok(pair);
        }
        let point = DiskPoint::new(z)?;
        let holo = cauchy_transform(g, point, tol)?.value;
        let anti = crate::operators::conj_cauchy_transform(g, point, tol)?.value;
        Ok((holo, anti))
    };
    let pairs = sampler.sample_pairs();
    let quotients: Result<Vec<f64>> = par_map(pairs.clone(), |(z, w)| {
        let (hz, az) = gradient(z)?;
        let (hw, aw) = gradient(w)?;
        let d = (z - w).norm().powf(exponent);
        Ok(((hz - hw).norm() / d).max((az - aw).norm() / d))
    })
    .into_iter()
    .collect();
    report_from_quotients(exponent, &pairs, &quotients?)
}

/// Least-squares line through `(xs, ys)` with its coefficient of
/// determination.
#[derive(Clone, Copy, Debug)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Domain {
            what: "fit sample count",
            value: xs.len() as f64,
            expected: "two matching samples or more",
        });
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::Domain {
            what: "fit abscissa spread",
            value: 0.0,
            expected: "nonconstant xs",
        });
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let fit = slope * x + intercept;
        ss_res += (y - fit) * (y - fit);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    let r_squared = if ss_tot == 0.0 {
        if ss_res == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

//! Sharp constants attached to the disk transforms: the kernel moment
//! integrals `I_β(z)` and `J_β(w)`, their uniform bounds, the resulting
//! `L^p → L^q` operator-norm bound, and the Hölder constant `C_q`.
//!
//! Each constant has two independent evaluations: an exact hypergeometric
//! series (fast, tight tail bounds) and a direct quadrature of the defining
//! integral (slow, used as an oracle in verification). Both integrals run
//! against normalized area measure.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::DiskPoint;
use crate::quadrature::{
    adaptive_1d, integrate_disk, DiskIntegral, DiskIntegrand, LineIntegral, QuadratureSpec,
    SingularitySpec,
};
use crate::series::{hypergeom, ln_gamma, HypergeomParams, SeriesValue};

/// Which constant a report describes: the exponent (`β` or `q`) and the
/// evaluation point, when the constant is pointwise.
#[derive(Clone, Copy, Debug)]
pub struct ConstantParameters {
    pub exponent: f64,
    pub point: Option<Complex64>,
}

/// A constant evaluated by series, alongside its closed-form uniform bound.
#[derive(Clone, Copy, Debug)]
pub struct ConstantReport {
    /// Series evaluation at the requested point.
    pub exact_value: f64,
    /// Closed-form bound valid uniformly over the disk;
    /// infinite when no such bound exists.
    pub uniform_bound: f64,
    /// Bound on the series truncation error of `exact_value`.
    pub tail_bound: f64,
    pub parameters: ConstantParameters,
}

fn require_kernel_exponent(beta: f64) -> Result<()> {
    if !(1.0 <= beta && beta < 2.0) {
        return Err(Error::Domain {
            what: "kernel moment exponent beta",
            value: beta,
            expected: "1 <= beta < 2",
        });
    }
    Ok(())
}

fn require_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::Domain {
            what: "tol",
            value: tol,
            expected: "tol > 0",
        });
    }
    Ok(())
}

/// `I_β(z) = ∫ ((1-|w|²) / (|z-w| |1-conj(z)w|))^β dA(w)` by exact series:
/// `(1-|z|²)^(2-β) Γ(1+β) Σ (n+1)² [Γ(n+1-β/2)/Γ(n+2+β/2)] |z|^(2n)`,
/// which is a ₃F₂ at `|z|²`. `tol` is relative.
pub fn i_beta(beta: f64, z: DiskPoint, tol: f64) -> Result<ConstantReport> {
    require_kernel_exponent(beta)?;
    require_tol(tol)?;
    let x = z.value().norm_sqr();
    let params = HypergeomParams::new(
        vec![2.0, 2.0, 1.0 - 0.5 * beta],
        vec![1.0, 2.0 + 0.5 * beta],
    )?;
    let series = hypergeom(&params, x, tol)?;
    let prefactor = (1.0 - x).powf(2.0 - beta)
        * (ln_gamma(1.0 + beta) + ln_gamma(1.0 - 0.5 * beta) - ln_gamma(2.0 + 0.5 * beta)).exp();
    Ok(ConstantReport {
        exact_value: prefactor * series.value,
        uniform_bound: i_beta_uniform_bound(beta)?,
        tail_bound: prefactor * series.tail_bound,
        parameters: ConstantParameters {
            exponent: beta,
            point: Some(z.value()),
        },
    })
}

/// Uniform-in-z bound `2^(1+β/2) Γ(1+β) Γ(2-β)` on `I_β`.
pub fn i_beta_uniform_bound(beta: f64) -> Result<f64> {
    require_kernel_exponent(beta)?;
    Ok(2f64.powf(1.0 + 0.5 * beta) * (ln_gamma(1.0 + beta) + ln_gamma(2.0 - beta)).exp())
}

/// `J_β(w) = ∫ ((1-|w|²) / (|z-w| |1-conj(z)w|))^β dA(z)` by exact series:
/// `2 (1-|w|²)^(2-β) [1/(2-β) + Σ_{n≥1} (Γ(n+2-β)/(n!Γ(2-β)))² |w|^(2n)/(2n+2-β)]`,
/// again a ₃F₂ at `|w|²`. `tol` is relative.
pub fn j_beta(beta: f64, w: DiskPoint, tol: f64) -> Result<ConstantReport> {
    require_kernel_exponent(beta)?;
    require_tol(tol)?;
    let x = w.value().norm_sqr();
    let params = HypergeomParams::new(
        vec![2.0 - beta, 2.0 - beta, 1.0 - 0.5 * beta],
        vec![1.0, 2.0 - 0.5 * beta],
    )?;
    let series = hypergeom(&params, x, tol)?;
    let prefactor = 2.0 * (1.0 - x).powf(2.0 - beta) / (2.0 - beta);
    Ok(ConstantReport {
        exact_value: prefactor * series.value,
        uniform_bound: j_beta_uniform_bound(beta)?,
        tail_bound: prefactor * series.tail_bound,
        parameters: ConstantParameters {
            exponent: beta,
            point: Some(w.value()),
        },
    })
}

/// Uniform-in-w bound `2/(2-β) + 1/Γ(2-β)` on `J_β`.
pub fn j_beta_uniform_bound(beta: f64) -> Result<f64> {
    require_kernel_exponent(beta)?;
    Ok(2.0 / (2.0 - beta) + (-ln_gamma(2.0 - beta)).exp())
}

/// The kernel power `((1-|w|²) / (|z-w| |1-conj(z)w|))^β`, singular at the
/// marked point; which argument varies decides whether it realizes the
/// defining integral of `I_β` (moving `w`) or `J_β` (moving `z`).
struct KernelPowerIntegrand {
    /// The fixed point: `z` for `I_β`, `w` for `J_β`.
    anchor: Complex64,
    beta: f64,
    /// True when the integration variable is the first kernel slot (`z`),
    /// i.e. the `J_β` orientation with the boundary weight frozen.
    moving_z: bool,
}

impl KernelPowerIntegrand {
    fn with_diff(&self, var: Complex64, diff: Complex64) -> Complex64 {
        let (z, w) = if self.moving_z {
            (var, self.anchor)
        } else {
            (self.anchor, var)
        };
        let base =
            (1.0 - w.norm_sqr()) / (diff.norm() * (1.0 - z.conj() * w).norm());
        Complex64::new(base.powf(self.beta), 0.0)
    }
}

impl DiskIntegrand for KernelPowerIntegrand {
    fn at(&self, var: Complex64) -> Complex64 {
        self.with_diff(var, var - self.anchor)
    }

    fn near(&self, center: Complex64, d: Complex64) -> Complex64 {
        if center == self.anchor {
            self.with_diff(center + d, d)
        } else {
            self.at(center + d)
        }
    }
}

/// Quadrature oracle for the defining integral of `I_β`.
pub fn i_beta_quadrature(beta: f64, z: DiskPoint, tol: f64) -> Result<DiskIntegral> {
    require_kernel_exponent(beta)?;
    let mut spec = QuadratureSpec::with_tol(tol);
    spec.singularities = vec![SingularitySpec::new(z.value(), beta)];
    integrate_disk(
        KernelPowerIntegrand {
            anchor: z.value(),
            beta,
            moving_z: false,
        },
        &spec,
    )
}

/// Quadrature oracle for the defining integral of `J_β`.
pub fn j_beta_quadrature(beta: f64, w: DiskPoint, tol: f64) -> Result<DiskIntegral> {
    require_kernel_exponent(beta)?;
    let mut spec = QuadratureSpec::with_tol(tol);
    spec.singularities = vec![SingularitySpec::new(w.value(), beta)];
    integrate_disk(
        KernelPowerIntegrand {
            anchor: w.value(),
            beta,
            moving_z: true,
        },
        &spec,
    )
}

/// Bound on the `L^p → L^q` norm of the gradient transform for conjugate
/// exponents with `3/2 < p < 2`: the q-th root of
/// `2^(3/2) (2/(2-q/p) + 1/Γ(2-q/p))`, assembled as the product of the
/// `I_1` and `J_(q/p)` uniform bounds.
pub fn thm1_norm_bound(p: f64) -> Result<f64> {
    if !(p > 1.5 && p < 2.0) {
        return Err(Error::Domain {
            what: "exponent p",
            value: p,
            expected: "3/2 < p < 2 (strict)",
        });
    }
    let q = p / (p - 1.0);
    let beta = q / p;
    let qth_power = i_beta_uniform_bound(1.0)? * j_beta_uniform_bound(beta)?;
    Ok(qth_power.powf(1.0 / q))
}

/// The two hypergeometric components of `C_q^q`, evaluated at argument 1:
/// `A = ₃F₂[1-q/2, q/2, q/2; 1, 2-q/2; 1] / (1-q/2)` and
/// `B = ₃F₂[q-1, q/2, q/2; 1, q; 1] / (q-1)`, the unit-disk and exterior
/// halves of the plane integral of `|ξ|^(-q)|1-ξ|^(-q)`. Any `q` in (1,2)
/// is accepted; near the endpoints the fixed term budget may not reach
/// `tol` (relative), reported as a budget error carrying the partial sums.
pub fn c_q_parts(q: f64, tol: f64) -> Result<(SeriesValue, SeriesValue)> {
    if !(q > 1.0 && q < 2.0) {
        return Err(Error::Domain {
            what: "holder exponent q",
            value: q,
            expected: "1 < q < 2",
        });
    }
    require_tol(tol)?;
    let half = 0.5 * q;
    let scale = |series: SeriesValue, c: f64| SeriesValue {
        value: c * series.value,
        tail_bound: c * series.tail_bound,
        terms_used: series.terms_used,
    };
    let a_params = HypergeomParams::new(vec![1.0 - half, half, half], vec![1.0, 2.0 - half])?;
    let a = scale(hypergeom(&a_params, 1.0, tol)?, 1.0 / (1.0 - half));
    let b_params = HypergeomParams::new(vec![q - 1.0, half, half], vec![1.0, q])?;
    let b = scale(hypergeom(&b_params, 1.0, tol)?, 1.0 / (q - 1.0));
    Ok((a, b))
}

fn c_q_report(q: f64, tol: f64) -> Result<ConstantReport> {
    let (a, b) = c_q_parts(q, tol)?;
    let total = a.value + b.value;
    let value = total.powf(1.0 / q);
    // d/dx x^(1/q) carries the parts' tails through the root.
    let tail_bound = value * (a.tail_bound + b.tail_bound) / (q * total);
    Ok(ConstantReport {
        exact_value: value,
        uniform_bound: f64::INFINITY,
        tail_bound,
        parameters: ConstantParameters {
            exponent: q,
            point: None,
        },
    })
}

/// The Hölder constant `C_q = (A + B)^(1/q)`; see [`c_q_parts`]. Diverges
/// at both endpoints of (1,2), so by default exponents outside
/// `[1.05, 1.95]` are refused; [`c_q_extended`] lifts that guard. `tol` is
/// relative.
pub fn c_q(q: f64, tol: f64) -> Result<ConstantReport> {
    if !(1.05..=1.95).contains(&q) {
        return Err(Error::Domain {
            what: "holder exponent q",
            value: q,
            expected: "1.05 <= q <= 1.95 (c_q_extended lifts this)",
        });
    }
    c_q_report(q, tol)
}

/// [`c_q`] without the endpoint guard: any `q` in (1,2). Tail bounds
/// degrade near the endpoints and the call may exhaust the term budget.
pub fn c_q_extended(q: f64, tol: f64) -> Result<ConstantReport> {
    c_q_report(q, tol)
}

/// Direct-quadrature oracle for the squared-coefficient boundary moment:
/// `(1/2π) ∫ |1 - r e^(iθ)|^(-2β) dθ`, the integral that
/// [`crate::series::boundary_moment`] sums in closed form.
pub fn boundary_moment_quadrature(beta: f64, r: f64, tol: f64) -> Result<LineIntegral> {
    if !(beta > 0.0) {
        return Err(Error::Domain {
            what: "beta",
            value: beta,
            expected: "beta > 0",
        });
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain {
            what: "r",
            value: r,
            expected: "0 <= r < 1",
        });
    }
    let f = move |theta: f64| {
        let d2 = 1.0 - 2.0 * r * theta.cos() + r * r;
        d2.powf(-beta)
    };
    let raw = adaptive_1d(f, 0.0, std::f64::consts::TAU, tol)?;
    Ok(LineIntegral {
        value: raw.value / std::f64::consts::TAU,
        error: raw.error / std::f64::consts::TAU,
        evals: raw.evals,
        converged: raw.converged,
    })
}

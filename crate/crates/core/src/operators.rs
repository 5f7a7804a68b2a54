//! Integral operators on disk densities.
//!
//! For a density `g` with potential `u` solving `u_{zzbar} = g` and zero
//! boundary values, this module evaluates, by adaptive quadrature against
//! normalized area measure `dA = dx dy / pi`:
//!
//! * [`green_potential`]: `u(z) = ∫ log(|z-t|^2 / |1-conj(z)t|^2) g(t) dA(t)`,
//! * [`cauchy_transform`]: `u_z(z) = ∫ (1-|t|^2) / ((z-t)(1-z conj(t))) g(t) dA(t)`,
//! * [`conj_cauchy_transform`]: `u_zbar(z)`, the mirror kernel,
//! * [`cauchy_integral`]: `∫ g(t) / (t - z) dA(t)`,
//! * [`j0star_transform`]: `∫ conj(t) g(t) / (1 - z conj(t)) dA(t)`,
//! * [`gradient_modulus`]: `|u_z(z)| + |u_zbar(z)|`.
//!
//! The transforms decompose as `cauchy_transform = j0star_transform -
//! cauchy_integral`, which verification exploits. Finite-difference helpers
//! for cross-checking derivatives live here too.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::geometry::DiskPoint;
use crate::quadrature::{
    integrate_disk, DiskIntegral, DiskIntegrand, QuadratureSpec, SingularitySpec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum KernelForm {
    Green,
    Cauchy,
    ConjCauchy,
    CauchyIntegral,
    J0Star,
}

impl KernelForm {
    /// Blow-up rate of |kernel| at `tau = z`, used to register the chart.
    fn order(self) -> Option<f64> {
        match self {
            KernelForm::Green => Some(0.0),
            KernelForm::Cauchy | KernelForm::ConjCauchy | KernelForm::CauchyIntegral => Some(1.0),
            KernelForm::J0Star => None,
        }
    }
}

/// Kernel times density, displacement-aware: when quadrature refines near
/// the evaluation point `z`, the exact offset `d = tau - z` arrives intact
/// even below the float spacing of `z`, keeping the `1/(z-tau)` and
/// `log|z-tau|` factors accurate.
struct KernelIntegrand<'a> {
    field: &'a ScalarField,
    z: Complex64,
    form: KernelForm,
}

impl KernelIntegrand<'_> {
    fn combine(&self, tau: Complex64, diff: Complex64) -> Complex64 {
        let g = self
            .field
            .eval(tau)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        let z = self.z;
        let kernel = match self.form {
            KernelForm::Green => {
                let den = (1.0 - z.conj() * tau).norm();
                Complex64::new(2.0 * (diff.norm().ln() - den.ln()), 0.0)
            }
            KernelForm::Cauchy => {
                let weight = 1.0 - tau.norm_sqr();
                weight / (-diff * (1.0 - z * tau.conj()))
            }
            KernelForm::ConjCauchy => {
                let weight = 1.0 - tau.norm_sqr();
                weight / (-diff.conj() * (1.0 - z.conj() * tau))
            }
            KernelForm::CauchyIntegral => diff.inv(),
            KernelForm::J0Star => tau.conj() / (1.0 - z * tau.conj()),
        };
        kernel * g
    }
}

impl DiskIntegrand for KernelIntegrand<'_> {
    fn at(&self, tau: Complex64) -> Complex64 {
        self.combine(tau, tau - self.z)
    }

    fn near(&self, center: Complex64, d: Complex64) -> Complex64 {
        if center == self.z {
            self.combine(center + d, d)
        } else {
            self.at(center + d)
        }
    }
}

fn require_full_disk(field: &ScalarField) -> Result<()> {
    let max_radius = field.max_radius();
    if max_radius < 1.0 {
        // The integrals run over the whole disk; sampled data stops short.
        return Err(Error::SampledExtrapolation {
            radius: 1.0,
            max_radius,
        });
    }
    Ok(())
}

fn transform(
    field: &ScalarField,
    z: DiskPoint,
    form: KernelForm,
    tol: f64,
) -> Result<DiskIntegral> {
    require_full_disk(field)?;
    let meta = field.metadata();
    let mut spec = QuadratureSpec::with_tol(tol);
    spec.singularities = meta.singularities.clone();
    if let Some(order) = form.order() {
        spec.singularities
            .push(SingularitySpec::new(z.value(), order));
    }
    spec.angular_breakpoints = meta.angular_breakpoints.clone();
    let integrand = KernelIntegrand {
        field,
        z: z.value(),
        form,
    };
    integrate_disk(integrand, &spec)
}

/// Solution of `u_{zzbar} = g` with zero boundary values.
pub fn green_potential(field: &ScalarField, z: DiskPoint, tol: f64) -> Result<DiskIntegral> {
    transform(field, z, KernelForm::Green, tol)
}

/// `d/dz` of the potential.
pub fn cauchy_transform(field: &ScalarField, z: DiskPoint, tol: f64) -> Result<DiskIntegral> {
    transform(field, z, KernelForm::Cauchy, tol)
}

/// `d/dzbar` of the potential.
pub fn conj_cauchy_transform(field: &ScalarField, z: DiskPoint, tol: f64) -> Result<DiskIntegral> {
    transform(field, z, KernelForm::ConjCauchy, tol)
}

/// The plain Cauchy integral `∫ g(t)/(t-z) dA(t)`.
pub fn cauchy_integral(field: &ScalarField, z: DiskPoint, tol: f64) -> Result<DiskIntegral> {
    transform(field, z, KernelForm::CauchyIntegral, tol)
}

/// The regular part `∫ conj(t) g(t) / (1 - z conj(t)) dA(t)`; smooth in the
/// open disk, so no chart is registered at `z`.
pub fn j0star_transform(field: &ScalarField, z: DiskPoint, tol: f64) -> Result<DiskIntegral> {
    transform(field, z, KernelForm::J0Star, tol)
}

/// Pointwise gradient size of the potential, with quadrature error.
#[derive(Clone, Copy, Debug)]
pub struct GradientModulus {
    /// `|u_z(z)| + |u_zbar(z)|`.
    pub value: f64,
    /// Sum of the two transforms' error estimates.
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

/// `|u_z| + |u_zbar|` at `z`, evaluating both transforms.
pub fn gradient_modulus(field: &ScalarField, z: DiskPoint, tol: f64) -> Result<GradientModulus> {
    let holo = cauchy_transform(field, z, tol)?;
    let anti = conj_cauchy_transform(field, z, tol)?;
    Ok(GradientModulus {
        value: holo.value.norm() + anti.value.norm(),
        error: holo.error + anti.error,
        evals: holo.evals + anti.evals,
        converged: holo.converged && anti.converged,
    })
}

/// Fourth-order central-difference Wirtinger derivatives `(d/dz, d/dzbar)`
/// of a complex function of a complex variable:
/// `d/dz = (d/dx - i d/dy)/2`, `d/dzbar = (d/dx + i d/dy)/2`.
pub fn wirtinger_fd<F>(f: F, z: Complex64, h: f64) -> (Complex64, Complex64)
where
    F: Fn(Complex64) -> Complex64,
{
    let i = Complex64::new(0.0, 1.0);
    let stencil = |dir: Complex64| -> Complex64 {
        (f(z - 2.0 * h * dir) - 8.0 * f(z - h * dir) + 8.0 * f(z + h * dir)
            - f(z + 2.0 * h * dir))
            / (12.0 * h)
    };
    let dx = stencil(Complex64::new(1.0, 0.0));
    let dy = stencil(i);
    (0.5 * (dx - i * dy), 0.5 * (dx + i * dy))
}

/// Fourth-order central-difference `d^2/dz dzbar = (d^2/dx^2 + d^2/dy^2)/4`.
pub fn mixed_second_fd<F>(f: F, z: Complex64, h: f64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let second = |dir: Complex64| -> Complex64 {
        (-f(z + 2.0 * h * dir) + 16.0 * f(z + h * dir) - 30.0 * f(z)
            + 16.0 * f(z - h * dir)
            - f(z + -2.0 * h * dir))
            / (12.0 * h * h)
    };
    let along_x = second(Complex64::new(1.0, 0.0));
    let along_y = second(Complex64::new(0.0, 1.0));
    0.25 * (along_x + along_y)
}

//! Points, Möbius maps, and the two kernels on the unit disk.
//!
//! Everything downstream evaluates one of two kernels:
//!
//! * the Green kernel `G(z, tau) = log |(z - tau) / (1 - conj(z) tau)|^2`,
//! * its z-derivative, the Cauchy kernel
//!   `(1 - |tau|^2) / ((z - tau)(1 - z conj(tau)))`,
//!
//! together with the pseudo-hyperbolic distance `rho(z, w) = |phi_w(z)|`
//! built from the Möbius involution `phi_w(z) = (w - z)/(1 - conj(w) z)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Points are kept this far away from the unit circle; construction rejects
/// anything closer, so kernel denominators stay bounded away from zero.
pub const DISK_RADIUS_CAP: f64 = 1.0 - 1e-12;

/// Two points closer than this are treated as coincident by the kernels.
pub const COINCIDENCE_THRESHOLD: f64 = 1e-14;

/// A validated point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    /// Accepts `z` with `|z| <= 1 - 1e-12`, rejects everything else.
    pub fn new(z: Complex64) -> Result<Self> {
        let m = z.norm();
        if m <= DISK_RADIUS_CAP && m.is_finite() {
            Ok(DiskPoint(z))
        } else {
            Err(Error::PointOutsideDisk { modulus: m })
        }
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(r, theta))
    }

    pub fn origin() -> Self {
        DiskPoint(Complex64::new(0.0, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn abs(self) -> f64 {
        self.0.norm()
    }
}

/// A kernel evaluation; `finite` is false exactly when the two arguments
/// coincide (within [`COINCIDENCE_THRESHOLD`]), in which case `value` is 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub finite: bool,
}

impl KernelValue {
    fn diagonal() -> Self {
        KernelValue { value: Complex64::new(0.0, 0.0), finite: false }
    }

    fn of(value: Complex64) -> Self {
        KernelValue { value, finite: true }
    }
}

/// The Möbius involution `phi_w(z) = (w - z) / (1 - conj(w) z)`.
///
/// Swaps `w` and the origin, and is its own inverse.
pub fn mobius(w: DiskPoint, z: DiskPoint) -> DiskPoint {
    let num = w.0 - z.0;
    let den = Complex64::new(1.0, 0.0) - w.0.conj() * z.0;
    // |phi_w(z)| < 1 whenever |z|, |w| < 1, so the constructor cannot fail;
    // clamp defensively against rounding at the cap.
    let v = num / den;
    DiskPoint::new(v).unwrap_or_else(|_| {
        let n = v.norm();
        DiskPoint(v * (DISK_RADIUS_CAP / n))
    })
}

/// Pseudo-hyperbolic distance `rho(z, w) = |z - w| / |1 - conj(z) w|`.
pub fn pseudo_hyperbolic(z: DiskPoint, w: DiskPoint) -> f64 {
    pseudo_hyperbolic_raw(z.0, w.0)
}

pub(crate) fn pseudo_hyperbolic_raw(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm();
    let den = (Complex64::new(1.0, 0.0) - z.conj() * w).norm();
    num / den
}

/// Green kernel `log |(z - tau)/(1 - conj(z) tau)|^2`, real-valued
/// (returned in the real part), nonpositive on the disk, `-inf` on the
/// diagonal (reported as non-finite).
pub fn green_kernel(z: DiskPoint, tau: DiskPoint) -> KernelValue {
    if (z.0 - tau.0).norm() < COINCIDENCE_THRESHOLD {
        return KernelValue::diagonal();
    }
    KernelValue::of(Complex64::new(green_kernel_raw(z.0, tau.0), 0.0))
}

pub(crate) fn green_kernel_raw(z: Complex64, tau: Complex64) -> f64 {
    let num = (z - tau).norm_sqr();
    let den = (Complex64::new(1.0, 0.0) - z.conj() * tau).norm_sqr();
    (num / den).ln()
}

/// Cauchy kernel `(1 - |tau|^2) / ((z - tau)(1 - z conj(tau)))`,
/// the z-derivative of the Green kernel.
pub fn cauchy_kernel(z: DiskPoint, tau: DiskPoint) -> KernelValue {
    if (z.0 - tau.0).norm() < COINCIDENCE_THRESHOLD {
        return KernelValue::diagonal();
    }
    KernelValue::of(cauchy_kernel_raw(z.0, tau.0))
}

pub(crate) fn cauchy_kernel_raw(z: Complex64, tau: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    (one - Complex64::new(tau.norm_sqr(), 0.0)) / ((z - tau) * (one - z * tau.conj()))
}

/// Conjugate Cauchy kernel `(1 - |tau|^2) / ((conj(z) - conj(tau))(1 - conj(z) tau))`,
/// the conj(z)-derivative of the Green kernel.
pub fn conj_cauchy_kernel(z: DiskPoint, tau: DiskPoint) -> KernelValue {
    if (z.0 - tau.0).norm() < COINCIDENCE_THRESHOLD {
        return KernelValue::diagonal();
    }
    KernelValue::of(conj_cauchy_kernel_raw(z.0, tau.0))
}

pub(crate) fn conj_cauchy_kernel_raw(z: Complex64, tau: Complex64) -> Complex64 {
    cauchy_kernel_raw(z, tau).conj()
}

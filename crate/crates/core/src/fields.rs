//! Source densities on the unit disk.
//!
//! A [`ScalarField`] is a complex-valued density `g` on the open unit disk,
//! the right-hand side of `u_{zzbar} = g`. Fields carry structural metadata
//! (sup norm when finite, singularity locations and orders, angular
//! breakpoints) so that downstream quadrature can register the right charts,
//! plus closed-form gradients and potentials where those are known, so that
//! verification suites can cross-check the integral operators against exact
//! expressions.
//!
//! The built-in catalog is addressed by string ids:
//!
//! | id                  | density                                           |
//! |---------------------|---------------------------------------------------|
//! | `zero`              | 0                                                 |
//! | `one`               | 1                                                 |
//! | `example1:alpha=A`  | -4A(A+1/3) z^(1/3) \|z\|^(2A-2), requires A > 1/6 |
//! | `example2`          | z / conj(z)                                       |
//! | `power:s=S`         | \|z\|^(-S), requires 0 < S < 2                    |
//! | `smooth:gauss`      | exp(-4 \|z\|^2)                                   |

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::SingularitySpec;

/// Closure type for user-supplied densities.
pub type FieldFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Structural facts about a density that quadrature and norm code need.
#[derive(Clone, Debug, Default)]
pub struct FieldMetadata {
    /// Essential sup of |g| over the disk, when finite and known.
    pub sup_norm: Option<f64>,
    /// Points where |g| blows up like distance^(-order), or is merely
    /// non-smooth (order 0). Quadrature clusters nodes at these.
    pub singularities: Vec<SingularitySpec>,
    /// Angles (radians) of rays across which g jumps; initial angular
    /// subdivision of the disk is aligned to these.
    pub angular_breakpoints: Vec<f64>,
}

#[derive(Clone)]
enum FieldKind {
    Zero,
    One,
    /// -4a(a+1/3) z^(1/3) |z|^(2a-2): the density whose potential is
    /// z^(1/3)(1 - |z|^(2a)) on the cut plane. Branch cut along the
    /// negative real axis.
    Example1 { alpha: f64 },
    /// z / conj(z), the unimodular angular density e^(2i arg z).
    Example2,
    /// |z|^(-s), radially symmetric with an origin singularity.
    Power { s: f64 },
    /// exp(-4|z|^2), entire in (x, y) and rapidly decaying.
    Gauss,
    Custom(FieldFn),
    Sampled(PolarGrid),
}

/// A complex density on the unit disk, with metadata.
#[derive(Clone)]
pub struct ScalarField {
    id: String,
    kind: FieldKind,
    meta: FieldMetadata,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("id", &self.id)
            .field("meta", &self.meta)
            .finish()
    }
}

impl ScalarField {
    /// Looks up a built-in density by id. See the module table for the
    /// grammar. Parameterized ids embed their parameter after `=`, e.g.
    /// `example1:alpha=0.5`.
    pub fn from_id(id: &str) -> Result<Self> {
        let id = id.trim();
        match id {
            "zero" => return Ok(Self::builtin("zero", FieldKind::Zero)),
            "one" => return Ok(Self::builtin("one", FieldKind::One)),
            "example2" => return Ok(Self::builtin("example2", FieldKind::Example2)),
            "smooth:gauss" => return Ok(Self::builtin("smooth:gauss", FieldKind::Gauss)),
            _ => {}
        }
        if let Some(rest) = id.strip_prefix("example1:alpha=") {
            let alpha: f64 = rest
                .parse()
                .map_err(|_| Error::UnknownField { id: id.to_string() })?;
            return Self::example1(alpha);
        }
        if let Some(rest) = id.strip_prefix("power:s=") {
            let s: f64 = rest
                .parse()
                .map_err(|_| Error::UnknownField { id: id.to_string() })?;
            return Self::power(s);
        }
        Err(Error::UnknownField { id: id.to_string() })
    }

    /// The density -4a(a+1/3) z^(1/3) |z|^(2a-2). Integrability of the
    /// p-norms used downstream requires the origin order 5/3 - 2a to stay
    /// below 4/3, i.e. a > 1/6.
    pub fn example1(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 / 6.0) || !alpha.is_finite() {
            return Err(Error::Domain {
                what: "example1 exponent alpha",
                value: alpha,
                expected: "alpha > 1/6",
            });
        }
        let origin_order = (5.0 / 3.0 - 2.0 * alpha).max(0.0);
        let meta = FieldMetadata {
            // |g| = 4a(a+1/3) r^(2a-5/3) is increasing in r iff a >= 5/6.
            sup_norm: if alpha >= 5.0 / 6.0 {
                Some(4.0 * alpha * (alpha + 1.0 / 3.0))
            } else {
                None
            },
            singularities: vec![SingularitySpec::new(Complex64::new(0.0, 0.0), origin_order)],
            angular_breakpoints: vec![std::f64::consts::PI],
        };
        Ok(Self {
            id: format!("example1:alpha={alpha}"),
            kind: FieldKind::Example1 { alpha },
            meta,
        })
    }

    /// The radial density |z|^(-s), 0 < s < 2 (integrable on the disk).
    pub fn power(s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 2.0) {
            return Err(Error::Domain {
                what: "power field exponent s",
                value: s,
                expected: "0 < s < 2",
            });
        }
        let meta = FieldMetadata {
            sup_norm: None,
            singularities: vec![SingularitySpec::new(Complex64::new(0.0, 0.0), s)],
            angular_breakpoints: Vec::new(),
        };
        Ok(Self {
            id: format!("power:s={s}"),
            kind: FieldKind::Power { s },
            meta,
        })
    }

    /// Wraps an arbitrary closure as a field. The metadata is the caller's
    /// responsibility; quadrature trusts it.
    pub fn custom(id: impl Into<String>, f: FieldFn, meta: FieldMetadata) -> Self {
        Self {
            id: id.into(),
            kind: FieldKind::Custom(f),
            meta,
        }
    }

    /// Wraps sampled values on a polar grid. Evaluation refuses points
    /// beyond the outermost sampled ring.
    pub fn sampled(id: impl Into<String>, grid: PolarGrid, meta: FieldMetadata) -> Self {
        Self {
            id: id.into(),
            kind: FieldKind::Sampled(grid),
            meta,
        }
    }

    fn builtin(id: &str, kind: FieldKind) -> Self {
        let meta = match kind {
            FieldKind::Zero => FieldMetadata {
                sup_norm: Some(0.0),
                ..Default::default()
            },
            FieldKind::One | FieldKind::Gauss => FieldMetadata {
                sup_norm: Some(1.0),
                ..Default::default()
            },
            FieldKind::Example2 => FieldMetadata {
                sup_norm: Some(1.0),
                // |g| = 1 everywhere but the phase wraps twice around the
                // origin; an order-0 marker keeps nodes clustered there.
                singularities: vec![SingularitySpec::new(Complex64::new(0.0, 0.0), 0.0)],
                ..Default::default()
            },
            _ => FieldMetadata::default(),
        };
        Self {
            id: id.to_string(),
            kind,
            meta,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn metadata(&self) -> &FieldMetadata {
        &self.meta
    }

    /// Largest modulus at which the field can be evaluated: 1 for analytic
    /// kinds, the outermost sampled ring for sampled fields. Operators use
    /// this to reject sampled inputs up front instead of failing mid-run.
    pub fn max_radius(&self) -> f64 {
        match &self.kind {
            FieldKind::Sampled(grid) => grid.max_radius(),
            _ => 1.0,
        }
    }

    /// Evaluates the density. Only sampled fields can fail (extrapolation
    /// beyond the outermost ring); every other kind is total on the disk,
    /// up to removable ambiguity at isolated points (e.g. `example2` at 0).
    pub fn eval(&self, tau: Complex64) -> Result<Complex64> {
        match &self.kind {
            FieldKind::Zero => Ok(Complex64::new(0.0, 0.0)),
            FieldKind::One => Ok(Complex64::new(1.0, 0.0)),
            FieldKind::Example1 { alpha } => {
                let r = tau.norm();
                if r == 0.0 {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                let scale = -4.0 * alpha * (alpha + 1.0 / 3.0);
                Ok(scale * tau.powf(1.0 / 3.0) * r.powf(2.0 * alpha - 2.0))
            }
            FieldKind::Example2 => {
                if tau.norm_sqr() == 0.0 {
                    // Every unimodular value is a subsequential limit here;
                    // pick 1 so the point is harmless in sampled sums.
                    return Ok(Complex64::new(1.0, 0.0));
                }
                Ok(tau / tau.conj())
            }
            FieldKind::Power { s } => Ok(Complex64::new(tau.norm().powf(-s), 0.0)),
            FieldKind::Gauss => Ok(Complex64::new((-4.0 * tau.norm_sqr()).exp(), 0.0)),
            FieldKind::Custom(f) => Ok(f(tau)),
            FieldKind::Sampled(grid) => grid.eval(tau),
        }
    }

    /// Closed-form pair `(d/dz, d/dzbar)` of the potential of this density,
    /// when known. These are the exact values the integral transforms must
    /// reproduce, used to validate quadrature.
    pub fn known_gradient(&self, z: Complex64) -> Option<(Complex64, Complex64)> {
        match &self.kind {
            FieldKind::Zero => Some((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))),
            FieldKind::One => Some((z.conj(), z)),
            FieldKind::Example2 => {
                let r2 = z.norm_sqr();
                if r2 == 0.0 {
                    return Some((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
                }
                let holo = z * (0.5 + r2.ln());
                let anti = z * z / (2.0 * z.conj());
                Some((holo, anti))
            }
            FieldKind::Power { s } => {
                let r = z.norm();
                if r == 0.0 {
                    // The potential is radial, so its gradient at the exact
                    // origin is 0 by symmetry even when the formula's
                    // modulus does not tend to 0 (s >= 1).
                    return Some((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
                }
                let factor = 2.0 * r.powf(-s) / (2.0 - s);
                Some((factor * z.conj(), factor * z))
            }
            FieldKind::Gauss => {
                let x = 4.0 * z.norm_sqr();
                // (1 - e^(-x))/x, extended continuously through x = 0.
                let factor = if x < 1e-8 {
                    1.0 - 0.5 * x
                } else {
                    -(-x).exp_m1() / x
                };
                Some((factor * z.conj(), factor * z))
            }
            _ => None,
        }
    }

    /// Closed-form potential `u` with `u_{zzbar} = g` and zero boundary
    /// values, when known.
    pub fn known_potential(&self, z: Complex64) -> Option<Complex64> {
        match &self.kind {
            FieldKind::Zero => Some(Complex64::new(0.0, 0.0)),
            FieldKind::One => Some(Complex64::new(z.norm_sqr() - 1.0, 0.0)),
            FieldKind::Example2 => {
                let r2 = z.norm_sqr();
                if r2 == 0.0 {
                    return Some(Complex64::new(0.0, 0.0));
                }
                Some(0.5 * z * z * r2.ln())
            }
            FieldKind::Power { s } => {
                let r = z.norm();
                let d = 2.0 - s;
                Some(Complex64::new(4.0 * (r.powf(d) - 1.0) / (d * d), 0.0))
            }
            _ => None,
        }
    }
}

/// Complex samples on concentric rings with uniformly spaced angles.
///
/// Evaluation is bilinear in `(r, theta)` with angular wrap-around,
/// constant radial extension inside the innermost ring, and a hard
/// refusal beyond the outermost ring (sampled data says nothing about
/// the annulus outside it).
#[derive(Clone, Debug)]
pub struct PolarGrid {
    radii: Vec<f64>,
    angle_count: usize,
    /// Ring-major: `values[i * angle_count + j]` is ring `i`, angle
    /// `j * 2 pi / angle_count`.
    values: Vec<Complex64>,
}

impl PolarGrid {
    pub fn new(radii: Vec<f64>, angle_count: usize, values: Vec<Complex64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::Domain {
                what: "polar grid ring count",
                value: 0.0,
                expected: "at least one ring",
            });
        }
        for pair in radii.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::Domain {
                    what: "polar grid radii",
                    value: pair[1],
                    expected: "strictly ascending",
                });
            }
        }
        let (lo, hi) = (radii[0], radii[radii.len() - 1]);
        if !(lo > 0.0) || !(hi < 1.0) {
            return Err(Error::Domain {
                what: "polar grid radial range",
                value: if lo > 0.0 { hi } else { lo },
                expected: "all radii in (0, 1)",
            });
        }
        if angle_count < 4 {
            return Err(Error::Domain {
                what: "polar grid angle count",
                value: angle_count as f64,
                expected: "at least 4 angles",
            });
        }
        if values.len() != radii.len() * angle_count {
            return Err(Error::Domain {
                what: "polar grid value count",
                value: values.len() as f64,
                expected: "ring count times angle count",
            });
        }
        Ok(Self {
            radii,
            angle_count,
            values,
        })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angle_count(&self) -> usize {
        self.angle_count
    }

    pub fn max_radius(&self) -> f64 {
        self.radii[self.radii.len() - 1]
    }

    pub fn value(&self, ring: usize, angle: usize) -> Complex64 {
        self.values[ring * self.angle_count + angle]
    }

    /// Bilinear interpolation; see the type docs for edge behavior.
    pub fn eval(&self, tau: Complex64) -> Result<Complex64> {
        let r = tau.norm();
        let r_max = self.max_radius();
        if r > r_max * (1.0 + 1e-12) {
            return Err(Error::SampledExtrapolation {
                radius: r,
                max_radius: r_max,
            });
        }
        let r = r.min(r_max);

        let m = self.angle_count;
        let step = std::f64::consts::TAU / m as f64;
        let theta = tau.arg().rem_euclid(std::f64::consts::TAU);
        let jf = theta / step;
        let j0 = (jf as usize).min(m - 1);
        let tfrac = (jf - j0 as f64).clamp(0.0, 1.0);
        let j1 = (j0 + 1) % m;

        let ring_at = |i: usize| -> Complex64 {
            let a = self.values[i * m + j0];
            let b = self.values[i * m + j1];
            a + (b - a) * tfrac
        };

        if r <= self.radii[0] {
            return Ok(ring_at(0));
        }
        let hi = self.radii.partition_point(|&rk| rk < r).min(self.radii.len() - 1);
        let lo = hi - 1;
        let (r0, r1) = (self.radii[lo], self.radii[hi]);
        let rfrac = ((r - r0) / (r1 - r0)).clamp(0.0, 1.0);
        let a = ring_at(lo);
        let b = ring_at(hi);
        Ok(a + (b - a) * rfrac)
    }
}

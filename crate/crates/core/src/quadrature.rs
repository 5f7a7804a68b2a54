//! Adaptive tensor-product Gauss-Legendre quadrature on the unit disk.
//!
//! The disk is integrated against the normalized area measure
//! `dA = (Lebesgue area) / pi`, so the whole disk has mass 1. The domain is
//! decomposed into
//!
//! * a global polar region `(x, theta) in [0,1] x [0,2pi)` whose radial map
//!   clusters nodes at the origin hard enough to absorb an origin
//!   singularity of the declared order,
//! * a local polar chart around each interior singularity, blended in and
//!   out with a C4 cutoff so the pieces add up to the original integral,
//! * a cap chart around each boundary singularity, parametrized by distance
//!   to the boundary point and the angular window that stays inside the disk.
//!
//! Every cell is scored by the difference of a low and a high tensor rule;
//! the worst cell is split until the error total passes the tolerance or the
//! evaluation budget runs out. Cells are totaled in creation order with
//! compensated summation, so a given call is reproducible bit for bit.

use std::collections::BinaryHeap;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Kernel evaluations allowed per disk integral before giving up.
pub const DEFAULT_EVAL_BUDGET: usize = 6_000_000;

/// Cells narrower than this (in parameter space) are never split again.
/// The value is 2^-42.
const MIN_CELL_WIDTH: f64 = 2.2737367544323206e-13;

/// Singularity locations closer than this to the origin fold into the
/// global radial map instead of getting their own chart.
const ORIGIN_BAND: f64 = 1e-6;

/// Locations within this distance of the unit circle get a cap chart.
const BOUNDARY_BAND: f64 = 1e-9;

/// Two singularities closer than this merge into one spec.
const MERGE_DISTANCE: f64 = 1e-6;

/// Merged singularity orders are capped here to keep the radial maps sane;
/// anything at or past 2 would not be integrable in the first place.
const MAX_MERGED_ORDER: f64 = 1.95;

const LOW_ORDER: usize = 6;
const HIGH_ORDER: usize = 10;

/// Something that can be integrated over the disk.
///
/// Plain closures `Fn(Complex64) -> Complex64` implement this with the
/// default `near`. Integrands with singularities away from the origin
/// should override `near`: inside a singularity chart the engine knows the
/// displacement `d` from the chart center exactly, while `center + d`
/// rounds to `center` once `|d|` drops under the float spacing there. An
/// integrand that recomputes `|tau - center|` from the rounded sum returns
/// garbage (or infinity) at deep chart nodes; one that uses `d` directly
/// stays exact down to subnormal distances.
pub trait DiskIntegrand {
    fn at(&self, tau: Complex64) -> Complex64;

    /// Evaluation at `center + d`, where `center` is a declared singularity
    /// location and `d` the exact displacement.
    fn near(&self, center: Complex64, d: Complex64) -> Complex64 {
        self.at(center + d)
    }
}

impl<F: Fn(Complex64) -> Complex64> DiskIntegrand for F {
    fn at(&self, tau: Complex64) -> Complex64 {
        self(tau)
    }
}

/// A point where the integrand blows up, with the power-law order of the
/// blow-up: `|f| ~ |tau - location|^(-order)` near the point. Use order 0
/// for log-type or merely non-smooth points. Locations may sit on the unit
/// circle (boundary singularities), which is why this is a raw complex
/// number rather than a disk point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularitySpec {
    pub location: Complex64,
    pub order: f64,
}

impl SingularitySpec {
    pub fn new(location: Complex64, order: f64) -> Self {
        SingularitySpec { location, order }
    }
}

/// Tolerance and structure hints for a disk integral.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    /// Target for the error total, relative to `max(1, |integral|)`.
    pub tol: f64,
    /// Points where the integrand is singular or non-smooth.
    pub singularities: Vec<SingularitySpec>,
    /// Angles (radians) where the integrand jumps or kinks along a ray;
    /// the initial angular mesh is split there.
    pub angular_breakpoints: Vec<f64>,
    /// Integrate over `inner_radius < |tau| < 1` instead of the full disk.
    pub inner_radius: f64,
    /// Hard cap on integrand evaluations.
    pub eval_budget: usize,
}

impl QuadratureSpec {
    pub fn with_tol(tol: f64) -> Self {
        QuadratureSpec {
            tol,
            singularities: Vec::new(),
            angular_breakpoints: Vec::new(),
            inner_radius: 0.0,
            eval_budget: DEFAULT_EVAL_BUDGET,
        }
    }
}

/// Result of a disk integral: the value, an error total from the per-cell
/// rule differences, the number of integrand evaluations spent, and whether
/// the error total met the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskIntegral {
    pub value: Complex64,
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Result of a 1d adaptive integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineIntegral {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Compensated (Kahan) accumulator; keeps long cell totals at roundoff.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub(crate) fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum
    }
}

/// Nodes and weights of the Gauss-Legendre rule on [-1, 1].
///
/// Computed once per order by Newton iteration on the Legendre recurrence
/// and cached for the life of the process.
pub(crate) fn gauss_legendre(order: usize) -> &'static [(f64, f64)] {
    static GL6: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static GL8: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static GL10: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static GL16: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    match order {
        6 => GL6.get_or_init(|| compute_gauss_legendre(6)),
        8 => GL8.get_or_init(|| compute_gauss_legendre(8)),
        10 => GL10.get_or_init(|| compute_gauss_legendre(10)),
        16 => GL16.get_or_init(|| compute_gauss_legendre(16)),
        _ => unreachable!("only orders 6, 8, 10, 16 are used"),
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

fn compute_gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for k in 1..=n {
        let mut x =
            (std::f64::consts::PI * (k as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((x, w));
    }
    rule
}

/// C4 smoothstep: 0 at 0, 1 at 1, first four derivatives vanishing at both
/// ends. Used to blend chart integrands in and out.
fn smoothstep4(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * x * x * (70.0 * x * x * x * x - 315.0 * x * x * x + 540.0 * x * x - 420.0 * x + 126.0)
}

/// Radial clustering exponent for a singularity of the given power order.
/// The local integrand behaves like x^(gamma (2 - order) - 1) after the
/// substitution r = c x^gamma, so this keeps it at least C1 at x = 0.
fn clustering_exponent(order: f64) -> f64 {
    if order > 1.0 {
        2.0 / (2.0 - order)
    } else {
        2.0
    }
}

#[derive(Debug, Clone, Copy)]
struct Chart {
    center: Complex64,
    radius: f64,
    gamma: f64,
    cap: bool,
}

impl Chart {
    /// Cutoff in the distance to the chart center: 1 inside radius/2,
    /// 0 outside radius, C4 blend between.
    fn cutoff_at_distance(&self, d: f64) -> f64 {
        if d <= 0.5 * self.radius {
            1.0
        } else if d >= self.radius {
            0.0
        } else {
            1.0 - smoothstep4(2.0 * d / self.radius - 1.0)
        }
    }

    fn cutoff(&self, tau: Complex64) -> f64 {
        self.cutoff_at_distance((tau - self.center).norm())
    }
}

#[derive(Debug, Clone, Copy)]
struct GlobalMap {
    /// Inner radius of the domain (0 for the full disk).
    r_min: f64,
    /// Parameter break below which the clustering map applies.
    xb: f64,
    /// Radius reached at the parameter break.
    r_in: f64,
    gamma: f64,
}

impl GlobalMap {
    fn radius(&self, x: f64) -> (f64, f64) {
        if self.r_min > 0.0 {
            let span = 1.0 - self.r_min;
            return (self.r_min + x * span, span);
        }
        if x <= self.xb {
            let u = x / self.xb;
            let r = self.r_in * u.powf(self.gamma);
            let dr = self.r_in * self.gamma / self.xb * u.powf(self.gamma - 1.0);
            (r, dr)
        } else {
            let slope = (1.0 - self.r_in) / (1.0 - self.xb);
            (self.r_in + (x - self.xb) * slope, slope)
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct HeapCell {
    err: f64,
    id: u64,
    /// 0 is the global region, i >= 1 is chart i - 1.
    region: usize,
    bounds: [f64; 4],
    value: Complex64,
}

impl PartialEq for HeapCell {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for HeapCell {}
impl PartialOrd for HeapCell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapCell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Max-heap on error; older cell wins ties so pops are deterministic.
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.id.cmp(&self.id))
    }
}

struct Engine<'a, I: DiskIntegrand> {
    f: &'a I,
    map: GlobalMap,
    charts: Vec<Chart>,
    evals: usize,
}

impl<'a, I: DiskIntegrand> Engine<'a, I> {
    /// Integrand of the global region: f times one minus the sum of chart
    /// cutoffs. Chart supports are disjoint, so this vanishes inside every
    /// chart core and restores f away from all charts.
    fn eval_cell(&mut self, region: usize, bounds: &[f64; 4], order: usize) -> Complex64 {
        let rule = gauss_legendre(order);
        let hx = 0.5 * (bounds[1] - bounds[0]);
        let mx = 0.5 * (bounds[1] + bounds[0]);
        let hy = 0.5 * (bounds[3] - bounds[2]);
        let my = 0.5 * (bounds[3] + bounds[2]);
        let mut acc_re = Kahan::default();
        let mut acc_im = Kahan::default();
        for &(xi, wi) in rule {
            let a = mx + hx * xi;
            for &(yj, wj) in rule {
                let b = my + hy * yj;
                let v = match region {
                    0 => {
                        let (r, dr) = self.map.radius(a);
                        let tau = Complex64::from_polar(r, b);
                        let mut mask = 1.0;
                        for chart in &self.charts {
                            mask -= chart.cutoff(tau);
                        }
                        if mask == 0.0 {
                            continue;
                        }
                        self.evals += 1;
                        self.f.at(tau) * (mask * r * dr / std::f64::consts::PI)
                    }
                    i => {
                        let chart = self.charts[i - 1];
                        let t = a;
                        let s = chart.radius * t.powf(chart.gamma);
                        let ds = chart.radius * chart.gamma * t.powf(chart.gamma - 1.0);
                        let mask = chart.cutoff_at_distance(s);
                        if mask == 0.0 {
                            continue;
                        }
                        self.evals += 1;
                        let (d, weight) = if chart.cap {
                            let phi0 = (-0.5 * s).acos();
                            let span = 2.0 * std::f64::consts::PI - 2.0 * phi0;
                            let phi = phi0 + b * span;
                            let d = chart.center * Complex64::from_polar(s, phi);
                            (d, s * ds * span / std::f64::consts::PI)
                        } else {
                            let phi = std::f64::consts::TAU * b;
                            (Complex64::from_polar(s, phi), 2.0 * s * ds)
                        };
                        self.f.near(chart.center, d) * (mask * weight)
                    }
                };
                let v = v * (wi * wj * hx * hy);
                acc_re.add(v.re);
                acc_im.add(v.im);
            }
        }
        Complex64::new(acc_re.total(), acc_im.total())
    }

    fn score(&mut self, region: usize, bounds: [f64; 4], id: u64) -> HeapCell {
        let lo = self.eval_cell(region, &bounds, LOW_ORDER);
        let hi = self.eval_cell(region, &bounds, HIGH_ORDER);
        HeapCell { err: (hi - lo).norm(), id, region, bounds, value: hi }
    }
}

fn validate_spec(spec: &QuadratureSpec) -> Result<()> {
    if !(spec.tol > 0.0) {
        return Err(Error::Domain { what: "tol", value: spec.tol, expected: "tol > 0" });
    }
    if !(0.0..1.0).contains(&spec.inner_radius) {
        return Err(Error::Domain {
            what: "inner_radius",
            value: spec.inner_radius,
            expected: "0 <= inner_radius < 1",
        });
    }
    for s in &spec.singularities {
        if !(s.order < 2.0) || !s.order.is_finite() || s.order < 0.0 {
            return Err(Error::Domain {
                what: "singularity order",
                value: s.order,
                expected: "0 <= order < 2 (order 2 is not integrable)",
            });
        }
        let m = s.location.norm();
        if m > 1.0 + 1e-9 || !m.is_finite() {
            return Err(Error::Domain {
                what: "singularity location modulus",
                value: m,
                expected: "inside the closed unit disk",
            });
        }
    }
    Ok(())
}

/// Merges singularities closer than [`MERGE_DISTANCE`] by adding their
/// orders (capped), then drops any that the annular hole excludes.
fn merge_singularities(spec: &QuadratureSpec) -> Vec<SingularitySpec> {
    let mut merged: Vec<SingularitySpec> = Vec::new();
    for s in &spec.singularities {
        if let Some(m) = merged
            .iter_mut()
            .find(|m| (m.location - s.location).norm() < MERGE_DISTANCE)
        {
            m.order = (m.order + s.order).min(MAX_MERGED_ORDER);
        } else {
            merged.push(*s);
        }
    }
    merged.retain(|s| s.location.norm() >= spec.inner_radius - BOUNDARY_BAND);
    merged
}

fn build_charts(merged: &[SingularitySpec], r_min: f64) -> Vec<Chart> {
    let mut charts = Vec::new();
    for (i, s) in merged.iter().enumerate() {
        let m = s.location.norm();
        if m < ORIGIN_BAND {
            continue; // folded into the global radial map
        }
        let mut limit = f64::INFINITY;
        for (j, other) in merged.iter().enumerate() {
            if i != j {
                limit = limit.min((s.location - other.location).norm());
            }
        }
        if r_min > 0.0 {
            limit = limit.min(m - r_min);
        }
        let cap = m >= 1.0 - BOUNDARY_BAND;
        let radius = if cap {
            (0.45 * limit.min(4.0 / 3.0)).min(0.6)
        } else {
            0.45 * limit.min(1.0 - m).min(0.5)
        };
        if radius <= 0.0 || !radius.is_finite() {
            continue;
        }
        charts.push(Chart { center: s.location, radius, gamma: clustering_exponent(s.order), cap });
    }
    charts
}

fn initial_angles(breakpoints: &[f64]) -> Vec<f64> {
    let mut angles = vec![
        0.0,
        std::f64::consts::FRAC_PI_2,
        std::f64::consts::PI,
        1.5 * std::f64::consts::PI,
        std::f64::consts::TAU,
    ];
    for &b in breakpoints {
        let mut t = b.rem_euclid(std::f64::consts::TAU);
        if t < 0.0 {
            t += std::f64::consts::TAU;
        }
        angles.push(t);
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if (angles[angles.len() - 1] - std::f64::consts::TAU).abs() > 1e-12 {
        angles.push(std::f64::consts::TAU);
    }
    angles
}

/// Integrates `f` over the disk (or annulus) against `dA / pi`.
pub fn integrate_disk<I: DiskIntegrand>(f: I, spec: &QuadratureSpec) -> Result<DiskIntegral> {
    validate_spec(spec)?;
    let merged = merge_singularities(spec);

    let origin_order = merged
        .iter()
        .filter(|s| s.location.norm() < ORIGIN_BAND)
        .map(|s| s.order)
        .fold(0.0f64, |a, b| a.max(b));
    let map = GlobalMap {
        r_min: spec.inner_radius,
        xb: 0.25,
        r_in: 0.25,
        gamma: clustering_exponent(origin_order),
    };
    let charts = build_charts(&merged, spec.inner_radius);

    let mut engine = Engine { f: &f, map, charts, evals: 0 };
    let mut next_id = 0u64;
    let mut heap: BinaryHeap<HeapCell> = BinaryHeap::new();
    let mut frozen: Vec<HeapCell> = Vec::new();

    let angles = initial_angles(&spec.angular_breakpoints);
    let x_breaks: &[f64] =
        if spec.inner_radius > 0.0 { &[0.0, 1.0] } else { &[0.0, 0.25, 1.0] };
    for w in x_breaks.windows(2) {
        for a in angles.windows(2) {
            let cell = engine.score(0, [w[0], w[1], a[0], a[1]], next_id);
            next_id += 1;
            heap.push(cell);
        }
    }
    let chart_count = engine.charts.len();
    for c in 1..=chart_count {
        for tw in [[0.0, 0.5], [0.5, 1.0]] {
            for yw in [[0.0, 0.5], [0.5, 1.0]] {
                let cell = engine.score(c, [tw[0], tw[1], yw[0], yw[1]], next_id);
                next_id += 1;
                heap.push(cell);
            }
        }
    }

    let mut total_value: Complex64 = heap.iter().map(|c| c.value).sum();
    let mut total_err: f64 = heap.iter().map(|c| c.err).sum();

    loop {
        if total_err <= spec.tol * total_value.norm().max(1.0) {
            break;
        }
        if engine.evals >= spec.eval_budget {
            break;
        }
        let Some(cell) = heap.pop() else { break };
        let wx = cell.bounds[1] - cell.bounds[0];
        let wy = cell.bounds[3] - cell.bounds[2];
        let split_x = wx > MIN_CELL_WIDTH;
        let split_y = wy > MIN_CELL_WIDTH;
        if !split_x && !split_y {
            frozen.push(cell);
            continue;
        }
        total_value -= cell.value;
        total_err -= cell.err;
        let [x0, x1, y0, y1] = cell.bounds;
        let xm = 0.5 * (x0 + x1);
        let ym = 0.5 * (y0 + y1);
        let children: Vec<[f64; 4]> = match (split_x, split_y) {
            (true, true) => vec![
                [x0, xm, y0, ym],
                [xm, x1, y0, ym],
                [x0, xm, ym, y1],
                [xm, x1, ym, y1],
            ],
            (true, false) => vec![[x0, xm, y0, y1], [xm, x1, y0, y1]],
            (false, true) => vec![[x0, x1, y0, ym], [x0, x1, ym, y1]],
            (false, false) => unreachable!(),
        };
        for b in children {
            let child = engine.score(cell.region, b, next_id);
            next_id += 1;
            total_value += child.value;
            total_err += child.err;
            heap.push(child);
        }
    }

    // Re-total the leaves in creation order; the incremental running sums
    // above only steer refinement.
    let mut leaves: Vec<HeapCell> = heap.into_vec();
    leaves.extend(frozen);
    leaves.sort_by_key(|c| c.id);
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    let mut err = Kahan::default();
    for c in &leaves {
        re.add(c.value.re);
        im.add(c.value.im);
        err.add(c.err);
    }
    let value = Complex64::new(re.total(), im.total());
    let error = err.total();
    Ok(DiskIntegral {
        value,
        error,
        evals: engine.evals,
        converged: error <= spec.tol * value.norm().max(1.0),
    })
}

/// Real-integrand convenience wrapper around [`integrate_disk`].
pub fn integrate_disk_real<F: Fn(Complex64) -> f64>(
    f: F,
    spec: &QuadratureSpec,
) -> Result<(f64, DiskIntegral)> {
    let out = integrate_disk(|tau: Complex64| Complex64::new(f(tau), 0.0), spec)?;
    Ok((out.value.re, out))
}

/// One half of the plane integral `∫_C |ξ|^(-q) |1-ξ|^(-q) dA(ξ)`:
/// either the unit-disk part of the integrand itself, or the exterior
/// part pulled back to the disk by `ξ = 1/w`, which turns it into
/// `|w|^(2q-4) |1-w|^(-q)`.
struct PlanePowerPiece {
    q: f64,
    inverted: bool,
}

impl PlanePowerPiece {
    fn value(&self, xi: Complex64, one_minus: f64) -> Complex64 {
        let radial = if self.inverted {
            xi.norm().powf(2.0 * self.q - 4.0)
        } else {
            xi.norm().powf(-self.q)
        };
        Complex64::new(radial * one_minus.powf(-self.q), 0.0)
    }
}

impl DiskIntegrand for PlanePowerPiece {
    fn at(&self, xi: Complex64) -> Complex64 {
        self.value(xi, (Complex64::new(1.0, 0.0) - xi).norm())
    }

    fn near(&self, center: Complex64, d: Complex64) -> Complex64 {
        if center == Complex64::new(1.0, 0.0) {
            // |1 - ξ| = |d| exactly inside the chart at 1.
            self.value(center + d, d.norm())
        } else {
            self.at(center + d)
        }
    }
}

/// Integral of `|ξ|^(-q) |1-ξ|^(-q)` over the whole plane against
/// normalized area measure, split as disk + inverted exterior. Finite
/// exactly for `1 < q < 2`.
pub fn integrate_plane_split(q: f64, tol: f64) -> Result<DiskIntegral> {
    if !(q > 1.0 && q < 2.0) {
        return Err(Error::Domain {
            what: "plane integral exponent q",
            value: q,
            expected: "1 < q < 2",
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);

    let mut interior_spec = QuadratureSpec::with_tol(0.5 * tol);
    interior_spec.singularities = vec![
        SingularitySpec::new(zero, q),
        SingularitySpec::new(one, q),
    ];
    let interior = integrate_disk(PlanePowerPiece { q, inverted: false }, &interior_spec)?;

    let mut exterior_spec = QuadratureSpec::with_tol(0.5 * tol);
    exterior_spec.singularities = vec![
        SingularitySpec::new(zero, 4.0 - 2.0 * q),
        SingularitySpec::new(one, q),
    ];
    let exterior = integrate_disk(PlanePowerPiece { q, inverted: true }, &exterior_spec)?;

    Ok(DiskIntegral {
        value: interior.value + exterior.value,
        error: interior.error + exterior.error,
        evals: interior.evals + exterior.evals,
        converged: interior.converged && exterior.converged,
    })
}

const LINE_LOW: usize = 8;
const LINE_HIGH: usize = 16;
const LINE_EVAL_BUDGET: usize = 400_000;

#[derive(Debug, Clone, Copy)]
struct LineCell {
    err: f64,
    id: u64,
    a: f64,
    b: f64,
    value: f64,
}

impl PartialEq for LineCell {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for LineCell {}
impl PartialOrd for LineCell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for LineCell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err).then_with(|| other.id.cmp(&self.id))
    }
}

fn line_panel<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, id: u64, evals: &mut usize) -> LineCell {
    let h = 0.5 * (hi - lo);
    let m = 0.5 * (hi + lo);
    let mut q = [0.0f64; 2];
    for (slot, order) in [(0usize, LINE_LOW), (1usize, LINE_HIGH)] {
        let mut acc = Kahan::default();
        for &(x, w) in gauss_legendre(order) {
            acc.add(f(m + h * x) * w);
            *evals += 1;
        }
        q[slot] = acc.total() * h;
    }
    LineCell { err: (q[1] - q[0]).abs(), id, a: lo, b: hi, value: q[1] }
}

/// Adaptive Gauss-Legendre integral of `f` on `[a, b]`, bisecting the worst
/// panel until the error total passes `tol` relative to `max(1, |value|)`.
pub fn adaptive_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<LineIntegral> {
    if !(tol > 0.0) {
        return Err(Error::Domain { what: "tol", value: tol, expected: "tol > 0" });
    }
    if !(b >= a) {
        return Err(Error::Domain { what: "b - a", value: b - a, expected: "b >= a" });
    }
    if a == b {
        return Ok(LineIntegral { value: 0.0, error: 0.0, evals: 0, converged: true });
    }
    let min_width = (b - a) * MIN_CELL_WIDTH;
    let mut evals = 0usize;

    let mut next_id = 0u64;
    let mut heap: BinaryHeap<LineCell> = BinaryHeap::new();
    let mut frozen: Vec<LineCell> = Vec::new();
    let first = line_panel(&f, a, b, next_id, &mut evals);
    next_id += 1;
    let mut total_value = first.value;
    let mut total_err = first.err;
    heap.push(first);

    loop {
        if total_err <= tol * total_value.abs().max(1.0) {
            break;
        }
        if evals >= LINE_EVAL_BUDGET {
            break;
        }
        let Some(cell) = heap.pop() else { break };
        if cell.b - cell.a <= min_width {
            frozen.push(cell);
            continue;
        }
        total_value -= cell.value;
        total_err -= cell.err;
        let mid = 0.5 * (cell.a + cell.b);
        for (lo, hi) in [(cell.a, mid), (mid, cell.b)] {
            let child = line_panel(&f, lo, hi, next_id, &mut evals);
            next_id += 1;
            total_value += child.value;
            total_err += child.err;
            heap.push(child);
        }
    }

    let mut leaves: Vec<LineCell> = heap.into_vec();
    leaves.extend(frozen);
    leaves.sort_by_key(|c| c.id);
    let mut val = Kahan::default();
    let mut err = Kahan::default();
    for c in &leaves {
        val.add(c.value);
        err.add(c.err);
    }
    let value = val.total();
    let error = err.total();
    Ok(LineIntegral { value, error, evals, converged: error <= tol * value.abs().max(1.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gauss_legendre_rules_integrate_polynomials_exactly() {
        for order in [6usize, 8, 10, 16] {
            let rule = gauss_legendre(order);
            assert_eq!(rule.len(), order);
            let wsum: f64 = rule.iter().map(|&(_, w)| w).sum();
            assert!((wsum - 2.0).abs() < 1e-14, "weights of order {order} sum to {wsum}");
            // Exact through degree 2*order - 1 on [-1, 1].
            for k in (0..2 * order).step_by(2) {
                let q: f64 = rule.iter().map(|&(x, w)| w * x.powi(k as i32)).sum();
                let exact = 2.0 / (k as f64 + 1.0);
                assert!(
                    (q - exact).abs() < 1e-13,
                    "order {order} missed x^{k}: {q} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn unit_mass_and_moments() {
        let spec = QuadratureSpec::with_tol(1e-12);
        let one = integrate_disk(|_: Complex64| c(1.0, 0.0), &spec).unwrap();
        assert!(one.converged);
        assert!((one.value.re - 1.0).abs() < 1e-12, "disk mass: {}", one.value.re);
        assert!(one.value.im.abs() < 1e-14);

        let sq = integrate_disk(|t: Complex64| c(t.norm_sqr(), 0.0), &spec).unwrap();
        assert!((sq.value.re - 0.5).abs() < 1e-12, "second moment: {}", sq.value.re);

        let first = integrate_disk(|t: Complex64| t, &spec).unwrap();
        assert!(first.value.norm() < 1e-13, "first moment should vanish");
    }

    #[test]
    fn origin_power_singularities() {
        for s in [0.5, 1.0, 1.5] {
            let mut spec = QuadratureSpec::with_tol(1e-10);
            spec.singularities.push(SingularitySpec::new(c(0.0, 0.0), s));
            let got = integrate_disk(|t: Complex64| c(t.norm().powf(-s), 0.0), &spec).unwrap();
            let exact = 2.0 / (2.0 - s);
            assert!(got.converged, "s = {s} did not converge: err {}", got.error);
            assert!(
                (got.value.re - exact).abs() < 1e-9 * exact,
                "s = {s}: {} vs {exact}",
                got.value.re
            );
        }
    }

    #[test]
    fn origin_log_singularity() {
        let mut spec = QuadratureSpec::with_tol(1e-11);
        spec.singularities.push(SingularitySpec::new(c(0.0, 0.0), 0.0));
        let got = integrate_disk(|t: Complex64| c(t.norm_sqr().ln(), 0.0), &spec).unwrap();
        assert!(got.converged);
        assert!((got.value.re - (-1.0)).abs() < 1e-10, "got {}", got.value.re);
    }

    #[test]
    fn interior_chart_handles_offset_singularity() {
        let mut spec = QuadratureSpec::with_tol(1e-9);
        spec.singularities.push(SingularitySpec::new(c(0.4, 0.0), 1.0));
        let got =
            integrate_disk(|t: Complex64| c(1.0 / (t - c(0.4, 0.0)).norm(), 0.0), &spec).unwrap();
        let exact = 1.9174244129190346;
        assert!(got.converged, "err {} evals {}", got.error, got.evals);
        assert!(
            (got.value.re - exact).abs() < 1e-8 * exact,
            "{} vs {exact}",
            got.value.re
        );
    }

    #[test]
    fn boundary_cap_handles_rim_singularity() {
        let mut spec = QuadratureSpec::with_tol(1e-9);
        spec.singularities.push(SingularitySpec::new(c(1.0, 0.0), 1.0));
        let got =
            integrate_disk(|t: Complex64| c(1.0 / (t - c(1.0, 0.0)).norm(), 0.0), &spec).unwrap();
        let exact = 4.0 / std::f64::consts::PI;
        assert!(got.converged, "err {} evals {}", got.error, got.evals);
        assert!(
            (got.value.re - exact).abs() < 1e-8 * exact,
            "{} vs {exact}",
            got.value.re
        );
    }

    #[test]
    fn angular_breakpoints_capture_jumps() {
        let mut spec = QuadratureSpec::with_tol(1e-13);
        spec.angular_breakpoints.push(std::f64::consts::PI);
        let got = integrate_disk(
            |t: Complex64| if t.im >= 0.0 { c(1.0, 0.0) } else { c(2.0, 0.0) },
            &spec,
        )
        .unwrap();
        assert!(got.converged);
        assert!((got.value.re - 1.5).abs() < 1e-13, "got {}", got.value.re);
    }

    #[test]
    fn annulus_mass() {
        let mut spec = QuadratureSpec::with_tol(1e-12);
        spec.inner_radius = 0.5;
        let got = integrate_disk(|_: Complex64| c(1.0, 0.0), &spec).unwrap();
        assert!((got.value.re - 0.75).abs() < 1e-12, "got {}", got.value.re);
    }

    #[test]
    fn results_are_deterministic() {
        let run = || {
            let mut spec = QuadratureSpec::with_tol(1e-8);
            spec.singularities.push(SingularitySpec::new(c(0.3, 0.1), 1.0));
            integrate_disk(
                |t: Complex64| c(1.0, 0.2) / Complex64::from(0.02 + (t - c(0.3, 0.1)).norm()),
                &spec,
            )
            .unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
        assert_eq!(a.value.im.to_bits(), b.value.im.to_bits());
        assert_eq!(a.evals, b.evals);
    }

    #[test]
    fn rejects_bad_specs() {
        let spec = QuadratureSpec::with_tol(0.0);
        assert!(integrate_disk(|_: Complex64| c(1.0, 0.0), &spec).is_err());
        let mut spec = QuadratureSpec::with_tol(1e-6);
        spec.singularities.push(SingularitySpec::new(c(0.0, 0.0), 2.0));
        assert!(integrate_disk(|_: Complex64| c(1.0, 0.0), &spec).is_err());
        let mut spec = QuadratureSpec::with_tol(1e-6);
        spec.inner_radius = 1.0;
        assert!(integrate_disk(|_: Complex64| c(1.0, 0.0), &spec).is_err());
    }

    /// `|τ - center|^(-order)`, displacement-aware.
    struct OffsetPower {
        center: Complex64,
        order: f64,
    }
    impl DiskIntegrand for OffsetPower {
        fn at(&self, tau: Complex64) -> Complex64 {
            self.near(self.center, tau - self.center)
        }
        fn near(&self, _center: Complex64, d: Complex64) -> Complex64 {
            Complex64::new(d.norm().powf(-self.order), 0.0)
        }
    }

    #[test]
    fn near_coincident_singularities_merge() {
        // An operator point sitting on a field singularity must not produce
        // two overlapping charts; the merged order is 1.9, deep enough that
        // only the displacement-aware path can evaluate the chart nodes.
        let mut spec = QuadratureSpec::with_tol(1e-8);
        spec.singularities.push(SingularitySpec::new(c(0.5, 0.0), 1.0));
        spec.singularities.push(SingularitySpec::new(c(0.5, 1e-9), 0.9));
        let f = OffsetPower { center: c(0.5, 0.0), order: 1.9 };
        let got = integrate_disk(f, &spec).unwrap();
        let exact = 19.729610951186723;
        assert!(got.converged, "err {} evals {}", got.error, got.evals);
        assert!(
            (got.value.re - exact).abs() < 1e-7 * exact,
            "{} vs {exact}",
            got.value.re
        );
    }

    #[test]
    fn adaptive_1d_smooth_and_singular() {
        let smooth = adaptive_1d(f64::sin, 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!(smooth.converged);
        assert!((smooth.value - 2.0).abs() < 1e-12);

        let logint = adaptive_1d(|x: f64| x.ln(), 1e-300, 1.0, 1e-9).unwrap();
        assert!(logint.converged);
        assert!((logint.value - (-1.0)).abs() < 1e-8, "got {}", logint.value);

        let rootint = adaptive_1d(|x: f64| x.powf(-0.5), 1e-300, 1.0, 1e-5).unwrap();
        assert!((rootint.value - 2.0).abs() < 1e-4, "got {}", rootint.value);
    }

    #[test]
    fn adaptive_1d_rejects_bad_input() {
        assert!(adaptive_1d(|x| x, 0.0, 1.0, 0.0).is_err());
        assert!(adaptive_1d(|x| x, 1.0, 0.0, 1e-6).is_err());
        let empty = adaptive_1d(|x| x, 2.0, 2.0, 1e-6).unwrap();
        assert_eq!(empty.value, 0.0);
    }

    #[test]
    fn monomial_moments_exact() {
        // ∫ τ^m conj(τ)^n dA = δ_mn / (n+1) against normalized measure.
        let spec = QuadratureSpec::with_tol(1e-13);
        for m in 0..=6u32 {
            for n in 0..=6u32 {
                let got = integrate_disk(
                    |t: Complex64| t.powu(m) * t.conj().powu(n),
                    &spec,
                )
                .unwrap();
                let expected = if m == n { 1.0 / (n as f64 + 1.0) } else { 0.0 };
                assert!(
                    (got.value - Complex64::new(expected, 0.0)).norm() < 1e-12,
                    "moment ({m},{n}): {} vs {expected}",
                    got.value
                );
            }
        }
    }

    #[test]
    fn rotation_invariant_integrand_ignores_angular_mesh() {
        // A radial integrand must produce the same value no matter how the
        // angular mesh is seeded with breakpoints.
        let f = |t: Complex64| Complex64::new((1.0 - t.norm_sqr()).powf(1.3), 0.0);
        let plain = QuadratureSpec::with_tol(1e-12);
        let mut rotated = QuadratureSpec::with_tol(1e-12);
        rotated.angular_breakpoints = vec![0.7, 2.1, 4.0];
        let a = integrate_disk(f, &plain).unwrap();
        let b = integrate_disk(f, &rotated).unwrap();
        assert!(
            (a.value - b.value).norm() < 1e-12,
            "{} vs {}",
            a.value,
            b.value
        );
    }

    #[test]
    fn tighter_tolerance_never_hurts_on_closed_form() {
        // True error against ∫ |τ - 0.4|^(-1) dA = 1.9174244129190346 is
        // nonincreasing as the tolerance shrinks by decades.
        let exact = 1.9174244129190346;
        let center = Complex64::new(0.4, 0.0);
        let mut last = f64::INFINITY;
        for k in 3..=9 {
            let mut spec = QuadratureSpec::with_tol(10f64.powi(-k));
            spec.singularities = vec![SingularitySpec::new(center, 1.0)];
            let got = integrate_disk(OffsetPower { center, order: 1.0 }, &spec).unwrap();
            let true_err = (got.value.re - exact).abs();
            assert!(
                true_err <= last + 1e-13,
                "tol 1e-{k}: error {true_err} grew past {last}"
            );
            last = true_err;
        }
        assert!(last < 1e-9);
    }

    #[test]
    fn plane_split_is_self_consistent_and_grows_toward_one() {
        // Two refinements at q = 1.2 agree to 1e-6 relative.
        let coarse = integrate_plane_split(1.2, 1e-6).unwrap();
        let fine = integrate_plane_split(1.2, 1e-8).unwrap();
        assert!(fine.converged);
        let rel = (coarse.value.re - fine.value.re).abs() / fine.value.re;
        assert!(rel < 1e-6, "refinement drift {rel}");
        assert!(coarse.value.re > 0.0);

        // The exterior piece carries a 1/(q-1) pole: the value must grow
        // as q decreases toward 1.
        let nearer = integrate_plane_split(1.1, 1e-5).unwrap();
        let nearest = integrate_plane_split(1.05, 1e-5).unwrap();
        assert!(nearer.value.re > coarse.value.re);
        assert!(nearest.value.re > nearer.value.re);

        assert!(integrate_plane_split(1.0, 1e-6).is_err());
        assert!(integrate_plane_split(2.0, 1e-6).is_err());
    }
}

//! Interval branch-and-bound certification of sign claims over polygons.
//!
//! A claim "target ⋈ 0 on region minus exclusions" is checked by recursive
//! bisection of the region's bounding box. Each box is discharged when it
//! lies outside the region or inside an exclusion, proved when an interval
//! enclosure of the target has the claimed sign, refuted when the enclosure
//! contradicts the claim on a box certified to lie inside the region, and
//! split otherwise. The frontier is processed level by level; the order
//! of boxes inside a level is fixed, so results do not depend on the number
//! of worker threads.

mod interval;
pub mod suite;

pub use interval::Interval;

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lyapunov::Psi;
use crate::region::{HalfPlane, Region, RegionId};
use crate::torus::{lift_distance, LiftPoint};

pub const DEFAULT_MAX_DEPTH: usize = 40;
pub const DEFAULT_MIN_WIDTH: f64 = 1e-4;
pub const DEFAULT_MAX_BOXES: usize = 4_000_000;
/// Number of undecided boxes retained verbatim in a certificate.
pub const UNDECIDED_SAMPLE: usize = 64;

/// Branch of `V̇ = a·h(x, y)` valid on one of the three sub-triangles of T1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VdotBranch {
    /// `h = -3 sin x + 3 sin y + 6 sin(y - x)`.
    I,
    /// `h = 3 sin x + 3 sin y`.
    II,
    /// `h = 3 sin x - 3 sin y - 6 sin(y - x)`.
    III,
}

impl VdotBranch {
    pub fn region(self) -> RegionId {
        match self {
            VdotBranch::I => RegionId::T1I,
            VdotBranch::II => RegionId::T1II,
            VdotBranch::III => RegionId::T1III,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Psi(Psi),
    Vdot(VdotBranch),
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Psi(Psi::One) => "psi1",
            Target::Psi(Psi::Two) => "psi2",
            Target::Psi(Psi::Three) => "psi3",
            Target::Psi(Psi::Four) => "psi4",
            Target::Vdot(VdotBranch::I) => "vdot_I",
            Target::Vdot(VdotBranch::II) => "vdot_II",
            Target::Vdot(VdotBranch::III) => "vdot_III",
        }
    }

    pub fn parse(s: &str) -> Option<Target> {
        Some(match s {
            "psi1" => Target::Psi(Psi::One),
            "psi2" => Target::Psi(Psi::Two),
            "psi3" => Target::Psi(Psi::Three),
            "psi4" => Target::Psi(Psi::Four),
            "vdot_I" => Target::Vdot(VdotBranch::I),
            "vdot_II" => Target::Vdot(VdotBranch::II),
            "vdot_III" => Target::Vdot(VdotBranch::III),
            _ => return None,
        })
    }

    /// Point evaluation, using the same formula as the interval extension.
    pub fn eval_point(self, p: LiftPoint, a: f64) -> f64 {
        let (x, y) = (p.x, p.y);
        match self {
            Target::Psi(w) => crate::lyapunov::psi(w, p, a),
            Target::Vdot(VdotBranch::I) => {
                a * (-3.0 * x.sin() + 3.0 * y.sin() + 6.0 * (y - x).sin())
            }
            Target::Vdot(VdotBranch::II) => a * (3.0 * x.sin() + 3.0 * y.sin()),
            Target::Vdot(VdotBranch::III) => {
                a * (3.0 * x.sin() - 3.0 * y.sin() - 6.0 * (y - x).sin())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignClaim {
    NonPositive,
    NonNegative,
    Negative,
}

impl SignClaim {
    pub fn symbol(self) -> &'static str {
        match self {
            SignClaim::NonPositive => "<=0",
            SignClaim::NonNegative => ">=0",
            SignClaim::Negative => "<0",
        }
    }

    pub fn parse(s: &str) -> Option<SignClaim> {
        match s {
            "<=0" | "le0" | "nonpositive" => Some(SignClaim::NonPositive),
            ">=0" | "ge0" | "nonnegative" => Some(SignClaim::NonNegative),
            "<0" | "lt0" | "negative" => Some(SignClaim::Negative),
            _ => None,
        }
    }

    fn holds_on(self, v: Interval) -> bool {
        match self {
            SignClaim::NonPositive => v.hi() <= 0.0,
            SignClaim::NonNegative => v.lo() >= 0.0,
            SignClaim::Negative => v.hi() < 0.0,
        }
    }

    fn fails_on(self, v: Interval) -> bool {
        match self {
            SignClaim::NonPositive => v.lo() > 0.0,
            SignClaim::NonNegative => v.hi() < 0.0,
            SignClaim::Negative => v.lo() >= 0.0,
        }
    }
}

/// Axis-aligned box `X × Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IBox {
    pub x: Interval,
    pub y: Interval,
}

impl IBox {
    pub fn new(x: Interval, y: Interval) -> Self {
        Self { x, y }
    }

    pub fn point(p: LiftPoint) -> Self {
        Self {
            x: Interval::point(p.x),
            y: Interval::point(p.y),
        }
    }

    /// A box enclosing the exact region.
    pub fn bounding(region: &Region) -> Self {
        let xs = region.vertices_third_pi.iter().map(|v| v.0);
        let ys = region.vertices_third_pi.iter().map(|v| v.1);
        let (x0, x1) = (xs.clone().min().unwrap(), xs.max().unwrap());
        let (y0, y1) = (ys.clone().min().unwrap(), ys.max().unwrap());
        Self {
            x: Interval::third_pi_multiple(x0).hull(&Interval::third_pi_multiple(x1)),
            y: Interval::third_pi_multiple(y0).hull(&Interval::third_pi_multiple(y1)),
        }
    }

    pub fn max_width(&self) -> f64 {
        self.x.width().max(self.y.width())
    }

    pub fn center(&self) -> LiftPoint {
        LiftPoint::new(self.x.mid(), self.y.mid())
    }

    pub fn corners(&self) -> [LiftPoint; 4] {
        [
            LiftPoint::new(self.x.lo(), self.y.lo()),
            LiftPoint::new(self.x.hi(), self.y.lo()),
            LiftPoint::new(self.x.lo(), self.y.hi()),
            LiftPoint::new(self.x.hi(), self.y.hi()),
        ]
    }

    /// Bisects the longer side.
    pub fn split(&self) -> (IBox, IBox) {
        if self.x.width() >= self.y.width() {
            let (l, r) = self.x.bisect();
            (IBox::new(l, self.y), IBox::new(r, self.y))
        } else {
            let (l, r) = self.y.bisect();
            (IBox::new(self.x, l), IBox::new(self.x, r))
        }
    }
}

fn affine(h: &HalfPlane, b: &IBox) -> Interval {
    b.x * Interval::point(h.cx as f64)
        + b.y * Interval::point(h.cy as f64)
        + Interval::pi() * Interval::point(h.c0 as f64)
}

/// Natural interval extension of the target over a box.
pub fn interval_eval(target: Target, b: &IBox, a: Interval) -> Interval {
    let (x, y) = (b.x, b.y);
    let c = |k: f64| Interval::point(k);
    let two_pi = Interval::pi() * c(2.0);
    match target {
        Target::Psi(Psi::One) => two_pi + x - c(2.0) * y,
        Target::Psi(Psi::Two) => y - c(2.0) * x,
        Target::Psi(Psi::Three) => {
            c(2.0) * x - y + c(3.0) * a * x.sin() - c(3.0) * a * (y - x).sin()
        }
        Target::Psi(Psi::Four) => {
            two_pi + x - c(2.0) * y - c(3.0) * a * y.sin() - c(3.0) * a * (y - x).sin()
        }
        Target::Vdot(VdotBranch::I) => {
            a * (c(-3.0) * x.sin() + c(3.0) * y.sin() + c(6.0) * (y - x).sin())
        }
        Target::Vdot(VdotBranch::II) => a * (c(3.0) * x.sin() + c(3.0) * y.sin()),
        Target::Vdot(VdotBranch::III) => {
            a * (c(3.0) * x.sin() - c(3.0) * y.sin() - c(6.0) * (y - x).sin())
        }
    }
}

/// Splits the target as `ℓ · C` with `ℓ` affine with integer coefficients
/// and `C` enclosed over the box.
///
/// `ψ₃ = -(y - 2x)·(1 + 3a cos(y/2) sinc((y - 2x)/2))` and
/// `ψ₄ = (2π + x - 2y)·(1 - 3a cos(x/2) sinc((2π + x - 2y)/2))`.
pub fn factorization(target: Target, b: &IBox, a: Interval) -> Option<(HalfPlane, Interval)> {
    let one = Interval::point(1.0);
    let half = Interval::point(0.5);
    let three_a = Interval::point(3.0) * a;
    let u_form = HalfPlane::new(-2, 1, 0);
    let w_form = HalfPlane::new(1, -2, 2);
    match target {
        Target::Psi(Psi::One) => Some((w_form, one)),
        Target::Psi(Psi::Two) => Some((u_form, one)),
        Target::Psi(Psi::Three) => {
            let u = affine(&u_form, b);
            let cof = -(one + three_a * (b.y * half).cos() * (u * half).sinc());
            Some((u_form, cof))
        }
        Target::Psi(Psi::Four) => {
            let w = affine(&w_form, b);
            let cof = one - three_a * (b.x * half).cos() * (w * half).sinc();
            Some((w_form, cof))
        }
        Target::Vdot(_) => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exclusion {
    Ball { center: LiftPoint, radius: f64 },
    /// Points within `radius` of the segment `from`–`to`.
    Tube {
        from: LiftPoint,
        to: LiftPoint,
        radius: f64,
    },
}

/// Relative shrink applied to exclusion radii before deciding containment.
const EXCLUSION_SLACK: f64 = 1e-12;

impl Exclusion {
    pub fn radius(&self) -> f64 {
        match *self {
            Exclusion::Ball { radius, .. } | Exclusion::Tube { radius, .. } => radius,
        }
    }

    pub fn distance(&self, p: LiftPoint) -> f64 {
        match *self {
            Exclusion::Ball { center, .. } => lift_distance(p, center),
            Exclusion::Tube { from, to, .. } => {
                let (dx, dy) = (to.x - from.x, to.y - from.y);
                let len2 = dx * dx + dy * dy;
                let t = if len2 == 0.0 {
                    0.0
                } else {
                    (((p.x - from.x) * dx + (p.y - from.y) * dy) / len2).clamp(0.0, 1.0)
                };
                lift_distance(p, LiftPoint::new(from.x + t * dx, from.y + t * dy))
            }
        }
    }

    /// Both shapes are convex, so a box whose corners lie strictly inside
    /// lies inside.
    pub fn contains_box(&self, b: &IBox) -> bool {
        let r = self.radius() * (1.0 - EXCLUSION_SLACK);
        b.corners().iter().all(|&c| self.distance(c) < r)
    }

    pub fn excludes_point(&self, p: LiftPoint) -> bool {
        self.distance(p) <= self.radius() * (1.0 + EXCLUSION_SLACK)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Proved,
    Refuted,
    Undecided,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Proved => "proved",
            Status::Refuted => "refuted",
            Status::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoxQuery {
    pub region: RegionId,
    pub target: Target,
    pub claim: SignClaim,
    pub exclusions: Vec<Exclusion>,
    pub a: Interval,
    pub max_depth: usize,
    pub min_width: f64,
    pub max_boxes: usize,
}

impl BoxQuery {
    pub fn new(region: RegionId, target: Target, claim: SignClaim, a: Interval) -> Self {
        Self {
            region,
            target,
            claim,
            exclusions: Vec::new(),
            a,
            max_depth: DEFAULT_MAX_DEPTH,
            min_width: DEFAULT_MIN_WIDTH,
            max_boxes: DEFAULT_MAX_BOXES,
        }
    }

    pub fn with_exclusions(mut self, exclusions: Vec<Exclusion>) -> Self {
        self.exclusions = exclusions;
        self
    }

    pub fn with_limits(mut self, max_depth: usize, min_width: f64) -> Self {
        self.max_depth = max_depth;
        self.min_width = min_width;
        self
    }

    fn validate(&self) -> Result<()> {
        let third = 1.0 / 3.0;
        if !(self.a.lo() > 0.0 && self.a.hi() < third) {
            return Err(Error::InvalidParameter(format!(
                "coupling interval {} is not inside (0, 1/3)",
                self.a
            )));
        }
        if !(self.min_width > 0.0 && self.min_width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "min_width must be positive, got {}",
                self.min_width
            )));
        }
        for e in &self.exclusions {
            if !(e.radius() > 0.0 && e.radius().is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "exclusion radius must be positive, got {}",
                    e.radius()
                )));
            }
        }
        Ok(())
    }
}

/// A point inside the region, outside all exclusions, where the claim is
/// violated for every `a` in the parameter interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub point: LiftPoint,
    pub value: Interval,
    pub enclosing_box: IBox,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub region: RegionId,
    pub target: Target,
    pub claim: SignClaim,
    pub status: Status,
    pub boxes_proved: usize,
    pub boxes_proved_factored: usize,
    pub boxes_excluded: usize,
    pub boxes_outside: usize,
    pub boxes_undecided: usize,
    /// The first few undecided boxes, in frontier order.
    pub undecided_sample: Vec<IBox>,
    pub depth_reached: usize,
    pub witness: Option<Witness>,
    pub wall_time_s: f64,
}

impl Certificate {
    /// Equality ignoring wall-clock time.
    pub fn same_outcome(&self, other: &Certificate) -> bool {
        let mut a = self.clone();
        a.wall_time_s = other.wall_time_s;
        a == *other
    }
}

enum Leaf {
    Outside,
    Excluded,
    Proved,
    ProvedFactored,
    Refuted(Witness),
    Undecided,
    Split(IBox, IBox),
}

fn examine(q: &BoxQuery, region: &Region, b: &IBox, depth: usize) -> Leaf {
    let side: Vec<Interval> = region.half_planes.iter().map(|h| affine(h, b)).collect();
    if side.iter().any(|v| v.hi() < 0.0) {
        return Leaf::Outside;
    }
    if q.exclusions.iter().any(|e| e.contains_box(b)) {
        return Leaf::Excluded;
    }
    let value = interval_eval(q.target, b, q.a);
    if q.claim.holds_on(value) {
        return Leaf::Proved;
    }
    if q.claim != SignClaim::Negative {
        if let Some((form, cof)) = factorization(q.target, b, q.a) {
            if let Some(s) = region.affine_sign(&form) {
                // On box ∩ region the affine factor has sign s (possibly 0),
                // so a strictly signed cofactor fixes the sign of the product.
                let product_sign = if cof.lo() > 0.0 {
                    Some(s)
                } else if cof.hi() < 0.0 {
                    Some(-s)
                } else {
                    None
                };
                let ok = match (product_sign, q.claim) {
                    (Some(1), SignClaim::NonNegative) | (Some(-1), SignClaim::NonPositive) => true,
                    _ => false,
                };
                if ok {
                    return Leaf::ProvedFactored;
                }
            }
        }
    }
    if q.claim.fails_on(value) && side.iter().all(|v| v.lo() >= 0.0) {
        let c = b.center();
        let cv = interval_eval(q.target, &IBox::point(c), q.a);
        if q.claim.fails_on(cv) && !q.exclusions.iter().any(|e| e.excludes_point(c)) {
            return Leaf::Refuted(Witness {
                point: c,
                value: cv,
                enclosing_box: *b,
            });
        }
    }
    if depth >= q.max_depth || b.max_width() * 0.5 < q.min_width {
        return Leaf::Undecided;
    }
    let (l, r) = b.split();
    Leaf::Split(l, r)
}

/// Runs the branch-and-bound on the current rayon pool.
pub fn certify(q: &BoxQuery) -> Result<Certificate> {
    q.validate()?;
    let start = Instant::now();
    let region = q.region.region();
    let mut cert = Certificate {
        region: q.region,
        target: q.target,
        claim: q.claim,
        status: Status::Undecided,
        boxes_proved: 0,
        boxes_proved_factored: 0,
        boxes_excluded: 0,
        boxes_outside: 0,
        boxes_undecided: 0,
        undecided_sample: Vec::new(),
        depth_reached: 0,
        witness: None,
        wall_time_s: 0.0,
    };
    let mut frontier = vec![IBox::bounding(&region)];
    let mut depth = 0usize;
    let mut seen = 0usize;
    while !frontier.is_empty() {
        cert.depth_reached = depth;
        seen += frontier.len();
        if seen > q.max_boxes {
            cert.boxes_undecided += frontier.len();
            for b in frontier.iter().take(UNDECIDED_SAMPLE.saturating_sub(cert.undecided_sample.len())) {
                cert.undecided_sample.push(*b);
            }
            break;
        }
        let leaves: Vec<Leaf> = frontier
            .par_iter()
            .map(|b| examine(q, &region, b, depth))
            .collect();
        let mut next = Vec::new();
        for (leaf, b) in leaves.into_iter().zip(&frontier) {
            match leaf {
                Leaf::Outside => cert.boxes_outside += 1,
                Leaf::Excluded => cert.boxes_excluded += 1,
                Leaf::Proved => cert.boxes_proved += 1,
                Leaf::ProvedFactored => {
                    cert.boxes_proved += 1;
                    cert.boxes_proved_factored += 1;
                }
                Leaf::Refuted(w) => {
                    if cert.witness.is_none() {
                        cert.witness = Some(w);
                    }
                }
                Leaf::Undecided => {
                    cert.boxes_undecided += 1;
                    if cert.undecided_sample.len() < UNDECIDED_SAMPLE {
                        cert.undecided_sample.push(*b);
                    }
                }
                Leaf::Split(l, r) => {
                    next.push(l);
                    next.push(r);
                }
            }
        }
        if cert.witness.is_some() {
            break;
        }
        frontier = next;
        depth += 1;
    }
    cert.status = if cert.witness.is_some() {
        Status::Refuted
    } else if cert.boxes_undecided == 0 {
        Status::Proved
    } else {
        Status::Undecided
    };
    cert.wall_time_s = start.elapsed().as_secs_f64();
    Ok(cert)
}

/// Runs [`certify`] on a dedicated pool with `threads` workers.
pub fn certify_with_threads(q: &BoxQuery, threads: usize) -> Result<Certificate> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    pool.install(|| certify(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lyapunov::{psi, vdot_closed_form};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const TARGETS: [Target; 7] = [
        Target::Psi(Psi::One),
        Target::Psi(Psi::Two),
        Target::Psi(Psi::Three),
        Target::Psi(Psi::Four),
        Target::Vdot(VdotBranch::I),
        Target::Vdot(VdotBranch::II),
        Target::Vdot(VdotBranch::III),
    ];

    #[test]
    fn degenerate_box_brackets_point_values() {
        let a = 0.1;
        let pts = [
            LiftPoint::new(0.4, 5.9),
            LiftPoint::new(2.5, 5.8),
            LiftPoint::new(3.5, 4.0),
            LiftPoint::new(PI, 2.0 * PI),
        ];
        for p in pts {
            for w in Psi::ALL {
                let v = interval_eval(Target::Psi(w), &IBox::point(p), Interval::point(a));
                assert!(v.contains(psi(w, p, a)), "{w:?} at {p:?}: {v}");
                assert!(v.width() < 1e-13);
            }
        }
        // Inside each sub-triangle the branch equals the closed form.
        for (branch, p) in [
            (VdotBranch::I, LiftPoint::new(1.0, 5.5)),
            (VdotBranch::II, LiftPoint::new(3.5, 5.8)),
            (VdotBranch::III, LiftPoint::new(3.5, 4.0)),
        ] {
            assert!(branch.region().region().contains_open(p));
            let v = interval_eval(Target::Vdot(branch), &IBox::point(p), Interval::point(a));
            let exact = vdot_closed_form(p, a);
            assert!(
                v.lo() - 1e-12 <= exact && exact <= v.hi() + 1e-12,
                "{branch:?}: {v} vs {exact}"
            );
        }
    }

    #[test]
    fn spec_box_example_has_nonpositive_enclosure() {
        let b = IBox::new(Interval::new(0.0, PI / 4.0), Interval::new(1.75 * PI, 2.0 * PI));
        let v = interval_eval(Target::Psi(Psi::One), &b, Interval::point(0.1));
        assert!(v.hi() <= 0.0);
    }

    #[test]
    fn factorizations_agree_with_direct_forms() {
        let a = 0.27;
        for p in [
            LiftPoint::new(0.3, 5.0),
            LiftPoint::new(2.0, 4.5),
            LiftPoint::new(4.0, 6.0),
        ] {
            for w in [Psi::Three, Psi::Four] {
                let b = IBox::point(p);
                let (form, cof) = factorization(Target::Psi(w), &b, Interval::point(a)).unwrap();
                let ell = form.value(p);
                let direct = psi(w, p, a);
                let lo = (ell * cof.lo()).min(ell * cof.hi());
                let hi = (ell * cof.lo()).max(ell * cof.hi());
                assert!(lo - 1e-12 <= direct && direct <= hi + 1e-12, "{w:?} at {p:?}");
            }
        }
    }

    #[test]
    fn rejects_parameter_interval_outside_band() {
        let q = BoxQuery::new(
            RegionId::T1I,
            Target::Psi(Psi::One),
            SignClaim::NonPositive,
            Interval::new(0.2, 0.34),
        );
        assert!(matches!(certify(&q), Err(Error::InvalidParameter(_))));
        let q = BoxQuery::new(
            RegionId::T1I,
            Target::Psi(Psi::One),
            SignClaim::NonPositive,
            Interval::new(0.0, 0.1),
        );
        assert!(certify(&q).is_err());
    }

    #[test]
    fn proves_psi_cell_and_refutes_false_sign() {
        let a = Interval::new(0.05, 0.3);
        let q = BoxQuery::new(RegionId::T1I, Target::Psi(Psi::Three), SignClaim::NonPositive, a);
        let c = certify(&q).unwrap();
        assert_eq!(c.status, Status::Proved);

        let q = BoxQuery::new(RegionId::T1II, Target::Psi(Psi::Three), SignClaim::NonPositive, a);
        let c = certify(&q).unwrap();
        assert_eq!(c.status, Status::Refuted);
        let w = c.witness.unwrap();
        assert!(RegionId::T1II.region().contains(w.point));
        assert!(psi(Psi::Three, w.point, 0.05) > 0.0);
        assert!(psi(Psi::Three, w.point, 0.3) > 0.0);
    }

    #[test]
    fn strict_branch_claim_needs_exclusions() {
        let a = Interval::point(0.1);
        let q = BoxQuery::new(
            RegionId::T1II,
            Target::Vdot(VdotBranch::II),
            SignClaim::Negative,
            a,
        )
        .with_limits(18, 1e-3);
        let c = certify(&q).unwrap();
        assert_ne!(c.status, Status::Proved);

        let r = 0.05;
        let ball = |x: f64, y: f64| Exclusion::Ball {
            center: LiftPoint::new(x, y),
            radius: r,
        };
        let q = q
            .with_exclusions(vec![
                ball(2.0 * PI / 3.0, 4.0 * PI / 3.0),
                ball(PI, 2.0 * PI),
                ball(2.0 * PI, 2.0 * PI),
            ])
            .with_limits(DEFAULT_MAX_DEPTH, DEFAULT_MIN_WIDTH);
        let c = certify(&q).unwrap();
        assert_eq!(c.status, Status::Proved, "{c:?}");
        assert!(c.boxes_excluded > 0);
    }

    #[test]
    fn result_is_independent_of_thread_count() {
        let r = 0.05;
        let q = BoxQuery::new(
            RegionId::T1III,
            Target::Vdot(VdotBranch::III),
            SignClaim::Negative,
            Interval::new(0.05, 0.3),
        )
        .with_exclusions(vec![
            Exclusion::Ball {
                center: LiftPoint::new(2.0 * PI / 3.0, 4.0 * PI / 3.0),
                radius: r,
            },
            Exclusion::Tube {
                from: LiftPoint::new(PI, PI),
                to: LiftPoint::new(2.0 * PI, 2.0 * PI),
                radius: r,
            },
        ]);
        let one = certify_with_threads(&q, 1).unwrap();
        let four = certify_with_threads(&q, 4).unwrap();
        assert!(one.same_outcome(&four));
        assert_eq!(one.status, Status::Proved);
    }

    #[test]
    fn exclusion_geometry() {
        let tube = Exclusion::Tube {
            from: LiftPoint::new(0.0, 0.0),
            to: LiftPoint::new(1.0, 1.0),
            radius: 0.1,
        };
        assert!(tube.excludes_point(LiftPoint::new(0.5, 0.55)));
        assert!(!tube.excludes_point(LiftPoint::new(1.2, 1.2)));
        let b = IBox::new(Interval::new(0.49, 0.51), Interval::new(0.49, 0.51));
        assert!(tube.contains_box(&b));
        let b = IBox::new(Interval::new(0.4, 0.6), Interval::new(0.0, 0.1));
        assert!(!tube.contains_box(&b));
    }

    #[test]
    fn bounding_box_encloses_region() {
        for id in RegionId::ALL {
            let r = id.region();
            let b = IBox::bounding(&r);
            for v in r.vertices() {
                assert!(b.x.contains(v.x) && b.y.contains(v.y), "{id}");
            }
        }
    }

    proptest! {
        #[test]
        fn enclosure_contains_sampled_values(
            x0 in 0.0f64..6.0, y0 in 0.0f64..6.0, w in 1e-6f64..0.5,
            s in 0.0f64..1.0, t in 0.0f64..1.0, a in 0.01f64..0.33, k in 0usize..7,
        ) {
            let b = IBox::new(Interval::new(x0, x0 + w), Interval::new(y0, y0 + w));
            let target = TARGETS[k];
            let v = interval_eval(target, &b, Interval::point(a));
            let p = LiftPoint::new(x0 + s * w, y0 + t * w);
            prop_assert!(v.contains(target.eval_point(p, a)));
        }

        #[test]
        fn refinement_never_widens(
            x0 in 0.0f64..6.0, y0 in 0.0f64..6.0, w in 1e-4f64..1.0, k in 0usize..7,
        ) {
            let b = IBox::new(Interval::new(x0, x0 + w), Interval::new(y0, y0 + w));
            let target = TARGETS[k];
            let a = Interval::new(0.1, 0.2);
            let parent = interval_eval(target, &b, a);
            let (l, r) = b.split();
            let hull = interval_eval(target, &l, a).hull(&interval_eval(target, &r, a));
            // Outward rounding may add a few ulps on the children.
            let tol = 1e-12 * (1.0 + parent.lo().abs().max(parent.hi().abs()));
            prop_assert!(hull.lo() >= parent.lo() - tol && hull.hi() <= parent.hi() + tol);
        }
    }
}

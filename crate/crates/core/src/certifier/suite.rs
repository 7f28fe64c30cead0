//! The fixed list of sign obligations behind the Lyapunov argument on `S̄`.
//!
//! Twelve sign cells fix the branch of `V̇` on each of `T1_I`, `T1_II`,
//! `T1_III`; three strict claims then bound each branch away from the
//! fixed-point vertices (and the invariant diagonal in `T1_III`). The
//! conclusion on `T2` follows by the symmetry `Φ₂`, which is cross-checked
//! on random samples rather than certified.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{certify, BoxQuery, Certificate, Exclusion, Interval, SignClaim, Status, Target, VdotBranch};
use crate::error::{Error, Result};
use crate::lyapunov::{orbital_derivative, LyapunovFn, Psi};
use crate::region::{Region, RegionId};
use crate::torus::{LiftPoint, MapSpec};

pub const DEFAULT_EXCLUSION_RADIUS: f64 = 0.05;
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub a: Interval,
    pub exclusion_radius: f64,
    pub max_depth: usize,
    pub min_width: f64,
    pub samples: usize,
    pub seed: u64,
    pub negative_control: bool,
}

impl SuiteConfig {
    pub fn new(a: Interval) -> Self {
        Self {
            a,
            exclusion_radius: DEFAULT_EXCLUSION_RADIUS,
            max_depth: super::DEFAULT_MAX_DEPTH,
            min_width: super::DEFAULT_MIN_WIDTH,
            samples: DEFAULT_SAMPLES,
            seed: 0,
            negative_control: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObligationRecord {
    pub id: String,
    pub lemma: &'static str,
    pub certificate: Certificate,
    /// Set when the obligation was not attempted.
    pub note: Option<String>,
}

impl ObligationRecord {
    pub fn status(&self) -> Status {
        self.certificate.status
    }
}

/// Outcome of the sampled check of the `T2` conclusion.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheck {
    pub samples: usize,
    pub evaluated: usize,
    /// Largest `|V̇(Φ₂ p) - V̇(p)|`.
    pub max_transport_error: f64,
    /// Largest `V̇` seen outside the exclusions.
    pub max_vdot: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub a: Interval,
    pub obligations: Vec<ObligationRecord>,
    pub negative_control: Option<ObligationRecord>,
    pub cross_check: CrossCheck,
}

impl SuiteReport {
    pub fn all_proved(&self) -> bool {
        self.obligations.iter().all(|o| o.status() == Status::Proved) && self.cross_check.passed
    }

    pub fn status(&self) -> Status {
        if self.obligations.iter().any(|o| o.status() == Status::Refuted) {
            Status::Refuted
        } else if self.all_proved() {
            Status::Proved
        } else {
            Status::Undecided
        }
    }

    pub fn total_time_s(&self) -> f64 {
        self.obligations
            .iter()
            .chain(self.negative_control.iter())
            .map(|o| o.certificate.wall_time_s)
            .sum()
    }
}

struct Cell {
    region: RegionId,
    psi: Psi,
    claim: SignClaim,
}

/// Sign of ψ₁..ψ₄ on each sub-triangle of T1.
fn sign_cells() -> Vec<Cell> {
    use Psi::*;
    use RegionId::*;
    use SignClaim::*;
    let table = [
        (T1I, [NonPositive, NonNegative, NonPositive, NonPositive]),
        (T1II, [NonPositive, NonPositive, NonNegative, NonPositive]),
        (T1III, [NonNegative, NonPositive, NonNegative, NonNegative]),
    ];
    let mut cells = Vec::new();
    for w in [One, Two, Three, Four] {
        for (region, signs) in table {
            cells.push(Cell {
                region,
                psi: w,
                claim: signs[w.index() - 1],
            });
        }
    }
    cells
}

fn lemma_of(w: Psi) -> &'static str {
    match w {
        Psi::One => "sign of psi1",
        Psi::Two => "sign of psi2",
        Psi::Three => "sign of psi3",
        Psi::Four => "sign of psi4",
    }
}

fn pt(i: f64, j: f64) -> LiftPoint {
    LiftPoint::new(i * PI / 3.0, j * PI / 3.0)
}

/// Exclusions around the zeros of the `V̇` branch on its closed sub-triangle.
pub fn branch_exclusions(branch: VdotBranch, radius: f64) -> Vec<Exclusion> {
    let ball = |c: LiftPoint| Exclusion::Ball { center: c, radius };
    match branch {
        VdotBranch::I => vec![ball(pt(0.0, 6.0)), ball(pt(2.0, 4.0)), ball(pt(3.0, 6.0))],
        VdotBranch::II => vec![ball(pt(2.0, 4.0)), ball(pt(3.0, 6.0)), ball(pt(6.0, 6.0))],
        VdotBranch::III => vec![
            ball(pt(2.0, 4.0)),
            Exclusion::Tube {
                from: pt(3.0, 3.0),
                to: pt(6.0, 6.0),
                radius,
            },
        ],
    }
}

fn skipped(id: String, lemma: &'static str, q: &BoxQuery, note: String) -> ObligationRecord {
    ObligationRecord {
        id,
        lemma,
        certificate: Certificate {
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
        },
        note: Some(note),
    }
}

/// Samples T2 and checks that `V̇`, computed by composing `V` with the map,
/// is negative away from the zero set and agrees with its value at the
/// mirror point `Φ₂ p` in T1.
fn cross_check_t2(cfg: &SuiteConfig) -> Result<CrossCheck> {
    let region = Region::get(RegionId::T2);
    let r = cfg.exclusion_radius;
    let ball = |c: LiftPoint| Exclusion::Ball { center: c, radius: r };
    let excl = [
        ball(pt(2.0, 4.0)),
        ball(pt(0.0, 3.0)),
        ball(pt(0.0, 6.0)),
        Exclusion::Tube {
            from: pt(0.0, 0.0),
            to: pt(3.0, 3.0),
            radius: r,
        },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = CrossCheck {
        samples: cfg.samples,
        evaluated: 0,
        max_transport_error: 0.0,
        max_vdot: f64::NEG_INFINITY,
        passed: true,
    };
    let two_pi = 2.0 * PI;
    let mut drawn = 0;
    while drawn < cfg.samples {
        // Uniform on T2 by rejection from [0, π] × [0, 2π].
        let p = LiftPoint::new(rng.random_range(0.0..PI), rng.random_range(0.0..two_pi));
        if !region.contains(p) {
            continue;
        }
        drawn += 1;
        let a = if cfg.a.width() > 0.0 {
            rng.random_range(cfg.a.lo()..=cfg.a.hi())
        } else {
            cfg.a.lo()
        };
        let spec = MapSpec::ring(a)?;
        let mirror = LiftPoint::new(two_pi - p.y, two_pi - p.x);
        let (v, vm) = match (
            orbital_derivative(LyapunovFn::V, &spec, p),
            orbital_derivative(LyapunovFn::V, &spec, mirror),
        ) {
            (Ok(v), Ok(vm)) => (v, vm),
            // Images leaving the domain happen only next to the corners.
            _ => continue,
        };
        out.evaluated += 1;
        out.max_transport_error = out.max_transport_error.max((v - vm).abs());
        if excl.iter().all(|e| !e.excludes_point(p)) {
            out.max_vdot = out.max_vdot.max(v);
            if v >= 0.0 {
                out.passed = false;
            }
        }
    }
    if out.max_transport_error > 1e-12 {
        out.passed = false;
    }
    Ok(out)
}

/// Runs every obligation for all `a` in `cfg.a`.
pub fn certify_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let third = 1.0 / 3.0;
    if !(cfg.a.lo() > 0.0 && cfg.a.hi() < third) {
        return Err(Error::InvalidParameter(format!(
            "coupling interval {} is not inside (0, 1/3)",
            cfg.a
        )));
    }
    if !(cfg.exclusion_radius > 0.0 && cfg.exclusion_radius < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "exclusion radius must lie in (0, 0.5), got {}",
            cfg.exclusion_radius
        )));
    }
    let limits = |q: BoxQuery| q.with_limits(cfg.max_depth, cfg.min_width);
    let mut obligations = Vec::new();
    for cell in sign_cells() {
        let q = limits(BoxQuery::new(cell.region, Target::Psi(cell.psi), cell.claim, cfg.a));
        let certificate = certify(&q)?;
        obligations.push(ObligationRecord {
            id: format!("{}@{}", Target::Psi(cell.psi).name(), cell.region),
            lemma: lemma_of(cell.psi),
            certificate,
            note: None,
        });
    }
    for branch in [VdotBranch::I, VdotBranch::II, VdotBranch::III] {
        let region = branch.region();
        let q = limits(
            BoxQuery::new(region, Target::Vdot(branch), SignClaim::Negative, cfg.a)
                .with_exclusions(branch_exclusions(branch, cfg.exclusion_radius)),
        );
        let id = format!("{}@{}", Target::Vdot(branch).name(), region);
        let prerequisites_ok = obligations
            .iter()
            .filter(|o| o.certificate.region == region)
            .all(|o| o.status() == Status::Proved);
        if !prerequisites_ok {
            obligations.push(skipped(
                id,
                "branch of vdot",
                &q,
                format!("sign cells on {region} not all proved"),
            ));
            continue;
        }
        obligations.push(ObligationRecord {
            id,
            lemma: "branch of vdot",
            certificate: certify(&q)?,
            note: None,
        });
    }
    let negative_control = if cfg.negative_control {
        let q = limits(BoxQuery::new(
            RegionId::T1II,
            Target::Psi(Psi::Three),
            SignClaim::NonPositive,
            cfg.a,
        ));
        Some(ObligationRecord {
            id: "control:psi3@T1_II".to_string(),
            lemma: "negative control",
            certificate: certify(&q)?,
            note: None,
        })
    } else {
        None
    };
    let cross_check = cross_check_t2(cfg)?;
    Ok(SuiteReport {
        a: cfg.a,
        obligations,
        negative_control,
        cross_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_has_fifteen_obligations_and_proves_them() {
        let mut cfg = SuiteConfig::new(Interval::point(0.1));
        cfg.samples = 2000;
        cfg.negative_control = true;
        let rep = certify_suite(&cfg).unwrap();
        assert_eq!(rep.obligations.len(), 15);
        for o in &rep.obligations {
            assert_eq!(o.status(), Status::Proved, "{}", o.id);
        }
        assert!(rep.cross_check.passed, "{:?}", rep.cross_check);
        assert_eq!(rep.negative_control.unwrap().status(), Status::Refuted);
    }

    #[test]
    fn rejects_bad_parameter_interval() {
        let cfg = SuiteConfig::new(Interval::new(0.1, 0.4));
        assert!(matches!(certify_suite(&cfg), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn sign_cells_cover_table() {
        let cells = sign_cells();
        assert_eq!(cells.len(), 12);
        let c = cells
            .iter()
            .find(|c| c.region == RegionId::T1III && c.psi == Psi::One)
            .unwrap();
        assert_eq!(c.claim, SignClaim::NonNegative);
    }
}

//! Closed polygons of the square `D = [0, 2π]²` used by the Lyapunov analysis.
//!
//! Every region is a triangle cut out by half-planes `cx·x + cy·y + c0·π ≥ 0`
//! with small integer coefficients, and every vertex is an integer multiple
//! of π/3. Keeping both exact lets the certifier decide the sign of any such
//! affine form over a whole region by integer arithmetic at the vertices.

use std::f64::consts::PI;
use std::fmt;

use crate::torus::LiftPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionId {
    /// Closure of `S = {0 < x < 2π, 0 < y < 2π, y > x}`.
    S,
    /// Closure of `R = {0 < x < 2π, 0 < y < 2π, y < x}`.
    R,
    T1,
    T2,
    T3,
    T4,
    T1I,
    T1II,
    T1III,
}

impl RegionId {
    pub const ALL: [RegionId; 9] = [
        RegionId::S,
        RegionId::R,
        RegionId::T1,
        RegionId::T2,
        RegionId::T3,
        RegionId::T4,
        RegionId::T1I,
        RegionId::T1II,
        RegionId::T1III,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegionId::S => "S",
            RegionId::R => "R",
            RegionId::T1 => "T1",
            RegionId::T2 => "T2",
            RegionId::T3 => "T3",
            RegionId::T4 => "T4",
            RegionId::T1I => "T1_I",
            RegionId::T1II => "T1_II",
            RegionId::T1III => "T1_III",
        }
    }

    pub fn region(self) -> Region {
        Region::get(self)
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `cx·x + cy·y + c0·π ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfPlane {
    pub cx: i64,
    pub cy: i64,
    pub c0: i64,
}

impl HalfPlane {
    pub const fn new(cx: i64, cy: i64, c0: i64) -> Self {
        Self { cx, cy, c0 }
    }

    pub fn value(&self, p: LiftPoint) -> f64 {
        self.cx as f64 * p.x + self.cy as f64 * p.y + self.c0 as f64 * PI
    }

    /// Exact value, in units of π/3, at a vertex given in units of π/3.
    pub fn value_at_vertex(&self, v: (i64, i64)) -> i64 {
        self.cx * v.0 + self.cy * v.1 + 3 * self.c0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub id: RegionId,
    /// Vertices in units of π/3, counter-clockwise.
    pub vertices_third_pi: Vec<(i64, i64)>,
    pub half_planes: Vec<HalfPlane>,
}

impl Region {
    pub fn get(id: RegionId) -> Region {
        let (vertices, half_planes): (&[(i64, i64)], &[HalfPlane]) = match id {
            RegionId::S => (
                &[(0, 0), (6, 6), (0, 6)],
                &[
                    HalfPlane::new(1, 0, 0),
                    HalfPlane::new(0, -1, 2),
                    HalfPlane::new(-1, 1, 0),
                ],
            ),
            RegionId::R => (
                &[(0, 0), (6, 0), (6, 6)],
                &[
                    HalfPlane::new(0, 1, 0),
                    HalfPlane::new(-1, 0, 2),
                    HalfPlane::new(1, -1, 0),
                ],
            ),
            RegionId::T1 => (
                &[(0, 6), (3, 3), (6, 6)],
                &[
                    HalfPlane::new(-1, 1, 0),
                    HalfPlane::new(1, 1, -2),
                    HalfPlane::new(0, -1, 2),
                ],
            ),
            RegionId::T2 => (
                &[(0, 0), (3, 3), (0, 6)],
                &[
                    HalfPlane::new(-1, 1, 0),
                    HalfPlane::new(-1, -1, 2),
                    HalfPlane::new(1, 0, 0),
                ],
            ),
            RegionId::T3 => (
                &[(0, 0), (6, 0), (3, 3)],
                &[
                    HalfPlane::new(1, -1, 0),
                    HalfPlane::new(-1, -1, 2),
                    HalfPlane::new(0, 1, 0),
                ],
            ),
            RegionId::T4 => (
                &[(6, 0), (6, 6), (3, 3)],
                &[
                    HalfPlane::new(1, -1, 0),
                    HalfPlane::new(1, 1, -2),
                    HalfPlane::new(-1, 0, 2),
                ],
            ),
            RegionId::T1I => (
                &[(0, 6), (2, 4), (3, 6)],
                &[
                    HalfPlane::new(-2, 1, 0),
                    HalfPlane::new(1, 1, -2),
                    HalfPlane::new(0, -1, 2),
                ],
            ),
            RegionId::T1II => (
                &[(2, 4), (6, 6), (3, 6)],
                &[
                    HalfPlane::new(2, -1, 0),
                    HalfPlane::new(-1, 2, -2),
                    HalfPlane::new(0, -1, 2),
                ],
            ),
            RegionId::T1III => (
                &[(2, 4), (3, 3), (6, 6)],
                &[
                    HalfPlane::new(-1, 1, 0),
                    HalfPlane::new(1, -2, 2),
                    HalfPlane::new(1, 1, -2),
                ],
            ),
        };
        Region {
            id,
            vertices_third_pi: vertices.to_vec(),
            half_planes: half_planes.to_vec(),
        }
    }

    pub fn vertices(&self) -> Vec<LiftPoint> {
        self.vertices_third_pi
            .iter()
            .map(|&(i, j)| LiftPoint::new(i as f64 * PI / 3.0, j as f64 * PI / 3.0))
            .collect()
    }

    /// Closed membership with zero tolerance.
    pub fn contains(&self, p: LiftPoint) -> bool {
        self.half_planes.iter().all(|h| h.value(p) >= 0.0)
    }

    /// Membership in the interior.
    pub fn contains_open(&self, p: LiftPoint) -> bool {
        self.half_planes.iter().all(|h| h.value(p) > 0.0)
    }

    /// Membership with the boundary widened by `slack`.
    pub fn contains_with_slack(&self, p: LiftPoint, slack: f64) -> bool {
        self.half_planes.iter().all(|h| h.value(p) >= -slack)
    }

    /// Exact sign of an affine form over the whole (convex) region: `Some(1)`
    /// if `≥ 0` everywhere, `Some(-1)` if `≤ 0` everywhere, `None` otherwise.
    /// A form vanishing identically on the region reports `Some(1)`.
    pub fn affine_sign(&self, form: &HalfPlane) -> Option<i8> {
        let values: Vec<i64> = self
            .vertices_third_pi
            .iter()
            .map(|&v| form.value_at_vertex(v))
            .collect();
        if values.iter().all(|&v| v >= 0) {
            Some(1)
        } else if values.iter().all(|&v| v <= 0) {
            Some(-1)
        } else {
            None
        }
    }
}

/// All regions whose closure contains `p`.
pub fn region_of(p: LiftPoint) -> Vec<RegionId> {
    RegionId::ALL
        .into_iter()
        .filter(|id| Region::get(*id).contains(p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertices_satisfy_all_half_planes() {
        for id in RegionId::ALL {
            let r = Region::get(id);
            for &v in &r.vertices_third_pi {
                for h in &r.half_planes {
                    assert!(h.value_at_vertex(v) >= 0, "{id}: {v:?} violates {h:?}");
                }
            }
            // Each vertex lies on exactly two bounding lines.
            for &v in &r.vertices_third_pi {
                let on = r.half_planes.iter().filter(|h| h.value_at_vertex(v) == 0).count();
                assert_eq!(on, 2, "{id}: vertex {v:?}");
            }
        }
    }

    #[test]
    fn region_of_examples() {
        let got = region_of(LiftPoint::new(PI / 2.0, 1.25 * PI));
        assert_eq!(got, vec![RegionId::S, RegionId::T2]);

        // On the closed boundary x + y = 2π shared by T1 and T2.
        let got = region_of(LiftPoint::new(PI / 2.0, 1.5 * PI));
        assert_eq!(
            got,
            vec![RegionId::S, RegionId::T1, RegionId::T2, RegionId::T1I]
        );

        let got = region_of(LiftPoint::new(PI, 2.0 * PI));
        assert_eq!(
            got,
            vec![RegionId::S, RegionId::T1, RegionId::T1I, RegionId::T1II]
        );

        let got = region_of(LiftPoint::new(PI, PI));
        assert_eq!(
            got,
            vec![
                RegionId::S,
                RegionId::R,
                RegionId::T1,
                RegionId::T2,
                RegionId::T3,
                RegionId::T4,
                RegionId::T1III
            ]
        );
    }

    #[test]
    fn affine_sign_is_exact_at_common_vertex() {
        // ψ₁ = 2π + x - 2y vanishes at the vertex (2π/3, 4π/3) of T1_I.
        let psi1 = HalfPlane::new(1, -2, 2);
        assert_eq!(Region::get(RegionId::T1I).affine_sign(&psi1), Some(-1));
        assert_eq!(Region::get(RegionId::T1II).affine_sign(&psi1), Some(-1));
        assert_eq!(Region::get(RegionId::T1III).affine_sign(&psi1), Some(1));
        assert_eq!(Region::get(RegionId::T1).affine_sign(&psi1), None);
    }
}

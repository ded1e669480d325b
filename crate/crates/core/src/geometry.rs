//! River-adapted coordinate system.
//!
//! Positions are expressed as (waterway kilometre, signed fairway-center
//! offset). The kilometre axis follows the centerline polyline; the offset is
//! the perpendicular distance from the centerline, negative for positions
//! left of the center *in navigation direction*. For [`Direction::Up`] the
//! navigation direction is the direction of increasing KM labels; for
//! [`Direction::Down`] it is reversed, which flips both the offset and the
//! curvature sign for the same plane point.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default corridor half-width in meters: projections farther from the
/// centerline than this are rejected.
pub const DEFAULT_CORRIDOR_HALF_WIDTH: f64 = 150.0;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("point ({x:.1}, {y:.1}) is {dist:.1} m from the centerline, beyond the {max:.1} m corridor")]
    OutOfCorridor { x: f64, y: f64, dist: f64, max: f64 },
    #[error("km {km:.3} outside river range [{min:.3}, {max:.3}]")]
    KmOutOfRange { km: f64, min: f64, max: f64 },
    #[error("offset {offset:.1} m beyond corridor half-width {max:.1} m")]
    OffsetOutOfRange { offset: f64, max: f64 },
    #[error("invalid geometry: {0}")]
    Invalid(String),
}

/// A point in the (planar, metric) map frame. Units are meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: &PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Navigation direction along the waterway.
///
/// `Up` navigates toward increasing KM labels, `Down` toward decreasing ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    /// +1 for `Up`, -1 for `Down`: the sign that takes a navigation-frame
    /// longitudinal displacement to a KM-label difference.
    pub fn km_sign(self) -> f64 {
        match self {
            Direction::Up => 1.0,
            Direction::Down => -1.0,
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Direction::Up => write!(f, "up"),
            Direction::Down => write!(f, "down"),
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "up" => Ok(Direction::Up),
            "down" => Ok(Direction::Down),
            other => Err(format!("unknown direction {other:?} (expected \"up\" or \"down\")")),
        }
    }
}

/// Position in river coordinates: KM along the waterway plus signed offset
/// from the fairway center (negative = left in navigation direction).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiverCoord {
    pub km: f64,
    pub offset: f64,
}

/// One of the four corridor bands. Lanes 2 and 3 are the inner lanes between
/// the fairway center and the left/right boundary; lanes 1 and 4 are the
/// outer bands beyond the boundaries, out to the corridor limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Lane(u8);

impl Lane {
    pub const OUTER_LEFT: Lane = Lane(1);
    pub const INNER_LEFT: Lane = Lane(2);
    pub const INNER_RIGHT: Lane = Lane(3);
    pub const OUTER_RIGHT: Lane = Lane(4);

    pub fn new(index: u8) -> Option<Lane> {
        (1..=4).contains(&index).then_some(Lane(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn all() -> [Lane; 4] {
        [Lane(1), Lane(2), Lane(3), Lane(4)]
    }

    /// Neighbouring lanes, nearest first (lower index on tie).
    pub fn neighbours(self) -> Vec<Lane> {
        let mut out = Vec::new();
        if self.0 > 1 {
            out.push(Lane(self.0 - 1));
        }
        if self.0 < 4 {
            out.push(Lane(self.0 + 1));
        }
        out
    }
}

impl std::fmt::Display for Lane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Geometry file schema: `{centerline: [{km, x, y}], left: [{x, y}], right: [{x, y}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometryFile {
    pub centerline: Vec<CenterlineNode>,
    pub left: Vec<PlanePoint>,
    pub right: Vec<PlanePoint>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CenterlineNode {
    pub km: f64,
    pub x: f64,
    pub y: f64,
}

/// Immutable river geometry: centerline with KM labels, fairway boundaries,
/// derived curvature and half-width tables, and a spatial index for
/// projection queries. All operations are pure; share freely across threads.
#[derive(Debug, Clone)]
pub struct RiverGeometry {
    points: Vec<PlanePoint>,
    kms: Vec<f64>,
    m_max: f64,
    /// Signed curvature per vertex in the `Up` frame: positive for curves
    /// turning right when navigating toward increasing KM.
    curvature_up: Vec<f64>,
    /// Distance from centerline vertex to the left/right boundary (left and
    /// right in the increasing-KM frame), linearly interpolated between the
    /// sampled vertices.
    half_width_left: Vec<f64>,
    half_width_right: Vec<f64>,
    grid: SegmentGrid,
}

impl RiverGeometry {
    /// Build from a parsed geometry file. Validates KM monotonicity and
    /// positive fairway half-widths.
    pub fn from_file(file: &GeometryFile) -> Result<Self, GeometryError> {
        let points: Vec<PlanePoint> = file
            .centerline
            .iter()
            .map(|n| PlanePoint::new(n.x, n.y))
            .collect();
        let kms: Vec<f64> = file.centerline.iter().map(|n| n.km).collect();
        Self::from_parts(points, kms, &file.left, &file.right, DEFAULT_CORRIDOR_HALF_WIDTH)
    }

    pub fn from_parts(
        points: Vec<PlanePoint>,
        kms: Vec<f64>,
        left: &[PlanePoint],
        right: &[PlanePoint],
        m_max: f64,
    ) -> Result<Self, GeometryError> {
        if points.len() < 2 {
            return Err(GeometryError::Invalid("centerline needs at least 2 points".into()));
        }
        if points.len() != kms.len() {
            return Err(GeometryError::Invalid("centerline_points/kms length mismatch".into()));
        }
        if kms.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GeometryError::Invalid("KM labels must be strictly increasing".into()));
        }
        if points
            .windows(2)
            .any(|w| w[0].dist(&w[1]) == 0.0 || !w[0].dist(&w[1]).is_finite())
        {
            return Err(GeometryError::Invalid("degenerate centerline segment".into()));
        }
        if left.len() < 2 || right.len() < 2 {
            return Err(GeometryError::Invalid("boundaries need at least 2 points".into()));
        }

        let curvature_up = vertex_curvature(&points, &kms)?;
        let half_width_left = boundary_distances(&points, left)?;
        let half_width_right = boundary_distances(&points, right)?;
        let grid = SegmentGrid::build(&points);

        Ok(Self {
            points,
            kms,
            m_max,
            curvature_up,
            half_width_left,
            half_width_right,
            grid,
        })
    }

    pub fn km_range(&self) -> (f64, f64) {
        (self.kms[0], *self.kms.last().unwrap())
    }

    pub fn corridor_half_width(&self) -> f64 {
        self.m_max
    }

    pub fn clamp_km(&self, km: f64) -> f64 {
        km.clamp(self.kms[0], *self.kms.last().unwrap())
    }

    fn check_km(&self, km: f64) -> Result<(), GeometryError> {
        let (min, max) = self.km_range();
        if km < min || km > max || !km.is_finite() {
            return Err(GeometryError::KmOutOfRange { km, min, max });
        }
        Ok(())
    }

    /// Locate the segment index holding `km` and the interpolation fraction
    /// within it.
    fn segment_at_km(&self, km: f64) -> (usize, f64) {
        let i = match self.kms.binary_search_by(|k| k.partial_cmp(&km).unwrap()) {
            Ok(i) => i.min(self.points.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.points.len() - 2),
        };
        let t = (km - self.kms[i]) / (self.kms[i + 1] - self.kms[i]);
        (i, t.clamp(0.0, 1.0))
    }

    /// Map a plane point to river coordinates by nearest-segment foot-point
    /// projection with linear KM interpolation along the hit segment.
    pub fn project_to_river(
        &self,
        point: PlanePoint,
        dir: Direction,
    ) -> Result<RiverCoord, GeometryError> {
        let hit = self
            .grid
            .nearest_segment(&self.points, point, self.m_max)
            .ok_or_else(|| {
                // Recover the true distance for the error message.
                let dist = self.brute_force_distance(point);
                GeometryError::OutOfCorridor { x: point.x, y: point.y, dist, max: self.m_max }
            })?;
        if hit.dist > self.m_max {
            return Err(GeometryError::OutOfCorridor {
                x: point.x,
                y: point.y,
                dist: hit.dist,
                max: self.m_max,
            });
        }
        let km = self.kms[hit.seg] + hit.t * (self.kms[hit.seg + 1] - self.kms[hit.seg]);
        let a = self.points[hit.seg];
        let b = self.points[hit.seg + 1];
        let (tx, ty) = unit_tangent(a, b);
        let foot = PlanePoint::new(a.x + hit.t * (b.x - a.x), a.y + hit.t * (b.y - a.y));
        // z-component of tangent x displacement: positive when the point lies
        // left of the increasing-KM direction.
        let cross = tx * (point.y - foot.y) - ty * (point.x - foot.x);
        let offset_up = if cross >= 0.0 { -hit.dist } else { hit.dist };
        let offset = dir.km_sign() * offset_up;
        Ok(RiverCoord { km, offset })
    }

    fn brute_force_distance(&self, point: PlanePoint) -> f64 {
        (0..self.points.len() - 1)
            .map(|i| segment_distance(self.points[i], self.points[i + 1], point).0)
            .fold(f64::INFINITY, f64::min)
    }

    /// Inverse of [`Self::project_to_river`]: place a river coordinate back
    /// into the plane.
    pub fn unproject(&self, coord: RiverCoord, dir: Direction) -> Result<PlanePoint, GeometryError> {
        self.check_km(coord.km)?;
        if coord.offset.abs() > self.m_max || !coord.offset.is_finite() {
            return Err(GeometryError::OffsetOutOfRange { offset: coord.offset, max: self.m_max });
        }
        let (i, t) = self.segment_at_km(coord.km);
        let a = self.points[i];
        let b = self.points[i + 1];
        let (tx, ty) = unit_tangent(a, b);
        let foot = PlanePoint::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
        // Right-hand normal of the increasing-KM direction.
        let (nx, ny) = (ty, -tx);
        let offset_up = dir.km_sign() * coord.offset;
        Ok(PlanePoint::new(foot.x + offset_up * nx, foot.y + offset_up * ny))
    }

    /// Signed curvature (1/m) at `km`: positive for curves turning right in
    /// navigation direction.
    pub fn curvature_at(&self, km: f64, dir: Direction) -> Result<f64, GeometryError> {
        self.check_km(km)?;
        let (i, t) = self.segment_at_km(km);
        let k = self.curvature_up[i] * (1.0 - t) + self.curvature_up[i + 1] * t;
        Ok(dir.km_sign() * k)
    }

    /// Fairway half-widths (left, right) in the navigation frame at `km`.
    pub fn half_widths_at(&self, km: f64, dir: Direction) -> Result<(f64, f64), GeometryError> {
        self.check_km(km)?;
        let (i, t) = self.segment_at_km(km);
        let hw_l = self.half_width_left[i] * (1.0 - t) + self.half_width_left[i + 1] * t;
        let hw_r = self.half_width_right[i] * (1.0 - t) + self.half_width_right[i + 1] * t;
        match dir {
            Direction::Up => Ok((hw_l, hw_r)),
            Direction::Down => Ok((hw_r, hw_l)),
        }
    }

    /// Lane assignment from the signed offset and the local half-widths.
    ///
    /// Boundary ties are deterministic: offset 0 belongs to the inner right
    /// lane, and offsets exactly on a fairway boundary belong to the inner
    /// lane on their side.
    pub fn lane_of(&self, coord: RiverCoord, dir: Direction) -> Result<Lane, GeometryError> {
        let (hw_l, hw_r) = self.half_widths_at(coord.km, dir)?;
        let o = coord.offset;
        Ok(if o < -hw_l {
            Lane::OUTER_LEFT
        } else if o < 0.0 {
            Lane::INNER_LEFT
        } else if o <= hw_r {
            Lane::INNER_RIGHT
        } else {
            Lane::OUTER_RIGHT
        })
    }
}

fn unit_tangent(a: PlanePoint, b: PlanePoint) -> (f64, f64) {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len = dx.hypot(dy);
    (dx / len, dy / len)
}

/// Distance from `p` to segment `ab` and the clamped foot-point parameter.
fn segment_distance(a: PlanePoint, b: PlanePoint, p: PlanePoint) -> (f64, f64) {
    let abx = b.x - a.x;
    let aby = b.y - a.y;
    let len2 = abx * abx + aby * aby;
    let t = (((p.x - a.x) * abx + (p.y - a.y) * aby) / len2).clamp(0.0, 1.0);
    let fx = a.x + t * abx;
    let fy = a.y + t * aby;
    ((p.x - fx).hypot(p.y - fy), t)
}

/// Discrete signed curvature per vertex from tangent-angle differences,
/// expressed in the `Up` frame (positive = right-hand curve toward +KM).
fn vertex_curvature(points: &[PlanePoint], kms: &[f64]) -> Result<Vec<f64>, GeometryError> {
    let n = points.len();
    let seg_angle: Vec<f64> = (0..n - 1)
        .map(|i| (points[i + 1].y - points[i].y).atan2(points[i + 1].x - points[i].x))
        .collect();
    let seg_len: Vec<f64> = (0..n - 1).map(|i| points[i].dist(&points[i + 1])).collect();
    let mut curv = vec![0.0; n];
    for i in 1..n - 1 {
        let mut dtheta = seg_angle[i] - seg_angle[i - 1];
        while dtheta > std::f64::consts::PI {
            dtheta -= 2.0 * std::f64::consts::PI;
        }
        while dtheta < -std::f64::consts::PI {
            dtheta += 2.0 * std::f64::consts::PI;
        }
        let ds = 0.5 * (seg_len[i - 1] + seg_len[i]);
        // dtheta/ds is positive for left (counter-clockwise) turns; the Up
        // convention is positive-right, hence the minus.
        curv[i] = -dtheta / ds;
        if !curv[i].is_finite() {
            return Err(GeometryError::Invalid(format!(
                "non-finite curvature near km {:.3}",
                kms[i]
            )));
        }
    }
    curv[0] = curv[1.min(n - 1)];
    curv[n - 1] = curv[n - 2];
    Ok(curv)
}

/// Distance from each centerline vertex to a boundary polyline.
///
/// Computed exactly on a subsample of vertices and interpolated in between;
/// boundaries vary slowly compared to the centerline sampling step.
fn boundary_distances(center: &[PlanePoint], boundary: &[PlanePoint]) -> Result<Vec<f64>, GeometryError> {
    let n = center.len();
    let stride = (n / 512).max(1);
    let mut anchor_idx: Vec<usize> = (0..n).step_by(stride).collect();
    if *anchor_idx.last().unwrap() != n - 1 {
        anchor_idx.push(n - 1);
    }
    // Boundary polylines are traversed in the same KM order as the
    // centerline, so a monotone sweep over boundary segments suffices.
    let mut dist = vec![0.0; n];
    let mut cursor = 0usize;
    let mut anchors = Vec::with_capacity(anchor_idx.len());
    for &ci in &anchor_idx {
        let p = center[ci];
        let mut best = f64::INFINITY;
        let lo = cursor.saturating_sub(2);
        let mut best_seg = lo;
        for s in lo..boundary.len() - 1 {
            let (d, _) = segment_distance(boundary[s], boundary[s + 1], p);
            if d < best {
                best = d;
                best_seg = s;
            }
            // The sweep can stop once segments start moving away for good.
            if s > best_seg + 16 && d > 2.0 * best {
                break;
            }
        }
        cursor = best_seg;
        if best <= 0.0 {
            return Err(GeometryError::Invalid(
                "fairway half-width must be positive everywhere".into(),
            ));
        }
        anchors.push((ci, best));
    }
    for w in anchors.windows(2) {
        let (i0, d0) = w[0];
        let (i1, d1) = w[1];
        for i in i0..=i1 {
            let t = if i1 == i0 { 0.0 } else { (i - i0) as f64 / (i1 - i0) as f64 };
            dist[i] = d0 * (1.0 - t) + d1 * t;
        }
    }
    Ok(dist)
}

#[derive(Debug, Clone, Copy)]
struct SegmentHit {
    seg: usize,
    t: f64,
    dist: f64,
}

/// Uniform spatial hash over centerline segments for nearest-segment queries.
#[derive(Debug, Clone)]
struct SegmentGrid {
    cell: f64,
    min_x: f64,
    min_y: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<u32>>,
}

impl SegmentGrid {
    fn build(points: &[PlanePoint]) -> Self {
        let min_x = points.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
        let max_x = points.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
        let min_y = points.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
        let max_y = points.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
        let max_seg = points
            .windows(2)
            .map(|w| w[0].dist(&w[1]))
            .fold(0.0_f64, f64::max);
        let cell = (4.0 * max_seg).max(50.0);
        let nx = (((max_x - min_x) / cell).floor() as usize + 1).max(1);
        let ny = (((max_y - min_y) / cell).floor() as usize + 1).max(1);
        let mut cells = vec![Vec::new(); nx * ny];
        for (i, w) in points.windows(2).enumerate() {
            let x0 = ((w[0].x.min(w[1].x) - min_x) / cell).floor() as usize;
            let x1 = ((w[0].x.max(w[1].x) - min_x) / cell).floor() as usize;
            let y0 = ((w[0].y.min(w[1].y) - min_y) / cell).floor() as usize;
            let y1 = ((w[0].y.max(w[1].y) - min_y) / cell).floor() as usize;
            for cx in x0..=x1.min(nx - 1) {
                for cy in y0..=y1.min(ny - 1) {
                    cells[cy * nx + cx].push(i as u32);
                }
            }
        }
        Self { cell, min_x, min_y, nx, ny, cells }
    }

    fn nearest_segment(
        &self,
        points: &[PlanePoint],
        p: PlanePoint,
        max_dist: f64,
    ) -> Option<SegmentHit> {
        let cx = ((p.x - self.min_x) / self.cell).floor() as i64;
        let cy = ((p.y - self.min_y) / self.cell).floor() as i64;
        let max_ring = (max_dist / self.cell).ceil() as i64 + 1;
        let mut best: Option<SegmentHit> = None;
        for ring in 0..=max_ring {
            // Any later ring is at least (ring-1)*cell away, so a hit closer
            // than that bound is final.
            if let Some(b) = best {
                if b.dist <= (ring - 1).max(0) as f64 * self.cell {
                    break;
                }
            }
            for (gx, gy) in ring_cells(cx, cy, ring) {
                if gx < 0 || gy < 0 || gx as usize >= self.nx || gy as usize >= self.ny {
                    continue;
                }
                for &si in &self.cells[gy as usize * self.nx + gx as usize] {
                    let s = si as usize;
                    let (d, t) = segment_distance(points[s], points[s + 1], p);
                    if best.map_or(true, |b| d < b.dist) {
                        best = Some(SegmentHit { seg: s, t, dist: d });
                    }
                }
            }
        }
        best.filter(|b| b.dist <= max_dist)
    }
}

fn ring_cells(cx: i64, cy: i64, ring: i64) -> Vec<(i64, i64)> {
    if ring == 0 {
        return vec![(cx, cy)];
    }
    let mut out = Vec::with_capacity((8 * ring) as usize);
    for dx in -ring..=ring {
        out.push((cx + dx, cy - ring));
        out.push((cx + dx, cy + ring));
    }
    for dy in (-ring + 1)..ring {
        out.push((cx - ring, cy + dy));
        out.push((cx + ring, cy + dy));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Straight east-west river: km 600 at x=0, 1 km of extent, 75 m fairway.
    fn straight_river() -> RiverGeometry {
        let n = 101;
        let points: Vec<PlanePoint> = (0..n).map(|i| PlanePoint::new(i as f64 * 10.0, 0.0)).collect();
        let kms: Vec<f64> = (0..n).map(|i| 600.0 + i as f64 * 0.01).collect();
        let left: Vec<PlanePoint> = (0..n).map(|i| PlanePoint::new(i as f64 * 10.0, 75.0)).collect();
        let right: Vec<PlanePoint> = (0..n).map(|i| PlanePoint::new(i as f64 * 10.0, -75.0)).collect();
        RiverGeometry::from_parts(points, kms, &left, &right, DEFAULT_CORRIDOR_HALF_WIDTH).unwrap()
    }

    /// Circular arc of radius 1000 m turning right for upstream navigation.
    fn arc_river(radius: f64) -> RiverGeometry {
        let step = 1.0;
        let total = 4000.0;
        let n = (total / step) as usize + 1;
        let mut points = Vec::with_capacity(n);
        let mut kms = Vec::with_capacity(n);
        let mut left = Vec::new();
        let mut right = Vec::new();
        for i in 0..n {
            let s = i as f64 * step;
            // Heading east initially, turning clockwise (right).
            let theta = -s / radius;
            let x = radius * (-theta).sin();
            let y = radius * ((theta).cos() - 1.0);
            points.push(PlanePoint::new(x, y));
            kms.push(500.0 + s / 1000.0);
            let (nx, ny) = (-theta.sin(), theta.cos());
            left.push(PlanePoint::new(x + 75.0 * nx, y + 75.0 * ny));
            right.push(PlanePoint::new(x - 75.0 * nx, y - 75.0 * ny));
        }
        RiverGeometry::from_parts(points, kms, &left, &right, DEFAULT_CORRIDOR_HALF_WIDTH).unwrap()
    }

    #[test]
    fn project_on_centerline_is_zero_offset() {
        let g = straight_river();
        let c = g.project_to_river(PlanePoint::new(0.0, 0.0), Direction::Up).unwrap();
        assert_relative_eq!(c.km, 600.0, epsilon = 1e-12);
        assert_relative_eq!(c.offset, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn left_of_center_is_negative_upstream() {
        let g = straight_river();
        // Navigation direction up = +x, so left is +y.
        let c = g.project_to_river(PlanePoint::new(0.0, 10.0), Direction::Up).unwrap();
        assert_relative_eq!(c.km, 600.0, epsilon = 1e-12);
        assert_relative_eq!(c.offset, -10.0, epsilon = 1e-12);
        let c = g.project_to_river(PlanePoint::new(0.0, 10.0), Direction::Down).unwrap();
        assert_relative_eq!(c.offset, 10.0, epsilon = 1e-12);
    }

    #[test]
    fn unproject_centerline_point() {
        let g = straight_river();
        let p = g.unproject(RiverCoord { km: 600.0, offset: 0.0 }, Direction::Up).unwrap();
        assert_relative_eq!(p.x, 0.0, epsilon = 1e-9);
        assert_relative_eq!(p.y, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn unproject_offset_out_of_range() {
        let g = straight_river();
        let err = g
            .unproject(RiverCoord { km: 600.0, offset: 151.0 }, Direction::Up)
            .unwrap_err();
        assert!(matches!(err, GeometryError::OffsetOutOfRange { .. }));
    }

    #[test]
    fn km_out_of_range() {
        let g = straight_river();
        assert!(g.unproject(RiverCoord { km: 599.0, offset: 0.0 }, Direction::Up).is_err());
        assert!(g.curvature_at(601.5, Direction::Up).is_err());
    }

    #[test]
    fn out_of_corridor_rejected() {
        let g = straight_river();
        let err = g.project_to_river(PlanePoint::new(0.0, 200.0), Direction::Up).unwrap_err();
        assert!(matches!(err, GeometryError::OutOfCorridor { .. }));
    }

    #[test]
    fn straight_curvature_is_zero() {
        let g = straight_river();
        assert_relative_eq!(g.curvature_at(600.5, Direction::Up).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn arc_curvature_matches_radius() {
        let g = arc_river(1000.0);
        let k = g.curvature_at(502.0, Direction::Up).unwrap();
        assert_relative_eq!(k, 0.001, max_relative = 1e-4);
        let k_down = g.curvature_at(502.0, Direction::Down).unwrap();
        assert_relative_eq!(k_down, -0.001, max_relative = 1e-4);
    }

    #[test]
    fn curvature_matches_tangent_angle_finite_difference() {
        let g = arc_river(600.0);
        // Independent estimate: finite difference of tangent angles of
        // unprojected centerline points around km 502.
        let h = 0.02;
        let p = |km: f64| g.unproject(RiverCoord { km, offset: 0.0 }, Direction::Up).unwrap();
        let ang = |km: f64| {
            let a = p(km - 0.005);
            let b = p(km + 0.005);
            (b.y - a.y).atan2(b.x - a.x)
        };
        let dtheta = ang(502.0 + h) - ang(502.0 - h);
        let ds = p(502.0 + h).dist(&p(502.0 - h));
        let k_fd = -dtheta / ds;
        let k = g.curvature_at(502.0, Direction::Up).unwrap();
        assert!(
            (k - k_fd).abs() / k_fd.abs() < 0.05,
            "finite-difference curvature {k_fd} vs {k}"
        );
    }

    #[test]
    fn lane_assignment_ties() {
        let g = straight_river();
        let lane = |offset: f64| g.lane_of(RiverCoord { km: 600.5, offset }, Direction::Up).unwrap();
        assert_eq!(lane(-5.0), Lane::INNER_LEFT);
        assert_eq!(lane(80.0), Lane::OUTER_RIGHT);
        assert_eq!(lane(0.0), Lane::INNER_RIGHT);
        assert_eq!(lane(-75.0), Lane::INNER_LEFT);
        assert_eq!(lane(75.0), Lane::INNER_RIGHT);
        assert_eq!(lane(-76.0), Lane::OUTER_LEFT);
    }

    #[test]
    fn direction_flip_negates_offset_and_curvature() {
        let g = arc_river(1000.0);
        let p = g.unproject(RiverCoord { km: 501.0, offset: -20.0 }, Direction::Up).unwrap();
        let up = g.project_to_river(p, Direction::Up).unwrap();
        let down = g.project_to_river(p, Direction::Down).unwrap();
        assert_relative_eq!(up.km, down.km, epsilon = 1e-9);
        assert_relative_eq!(up.offset, -down.offset, epsilon = 1e-9);
    }

    #[test]
    fn projected_km_monotone_along_path() {
        let g = arc_river(800.0);
        let mut last = f64::NEG_INFINITY;
        for i in 0..200 {
            let km = 500.0 + i as f64 * 0.015;
            let p = g.unproject(RiverCoord { km, offset: 12.0 }, Direction::Up).unwrap();
            let c = g.project_to_river(p, Direction::Up).unwrap();
            assert!(c.km >= last - 1e-12, "km regressed: {} after {}", c.km, last);
            last = c.km;
        }
    }
}

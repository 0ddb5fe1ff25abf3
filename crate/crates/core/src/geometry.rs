//! Integer lattice primitives: points, point sets, bounding rectangles and
//! the eight-element group of axis-preserving isometries plus translations.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex of the infinite grid.
///
/// Points order by `x` first and `y` second, which is exactly the
/// column-major scan order used for occupancy strings in a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub const ORIGIN: GridPoint = GridPoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        GridPoint { x, y }
    }

    pub fn dot(self, other: GridPoint) -> i64 {
        self.x * other.x + self.y * other.y
    }

    pub fn manhattan(self, other: GridPoint) -> i64 {
        (self.x - other.x).abs() + (self.y - other.y).abs()
    }

    pub fn step(self, dir: Dir) -> GridPoint {
        self + dir.vector()
    }

    /// Counter-clockwise quarter turn about the origin.
    pub fn rot90(self) -> GridPoint {
        GridPoint::new(-self.y, self.x)
    }
}

impl From<[i64; 2]> for GridPoint {
    fn from(v: [i64; 2]) -> Self {
        GridPoint::new(v[0], v[1])
    }
}

impl From<GridPoint> for [i64; 2] {
    fn from(p: GridPoint) -> Self {
        [p.x, p.y]
    }
}

impl From<(i64, i64)> for GridPoint {
    fn from((x, y): (i64, i64)) -> Self {
        GridPoint::new(x, y)
    }
}

impl Add for GridPoint {
    type Output = GridPoint;
    fn add(self, o: GridPoint) -> GridPoint {
        GridPoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for GridPoint {
    type Output = GridPoint;
    fn sub(self, o: GridPoint) -> GridPoint {
        GridPoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for GridPoint {
    type Output = GridPoint;
    fn neg(self) -> GridPoint {
        GridPoint::new(-self.x, -self.y)
    }
}

impl Mul<i64> for GridPoint {
    type Output = GridPoint;
    fn mul(self, k: i64) -> GridPoint {
        GridPoint::new(self.x * k, self.y * k)
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// One of the four lattice unit vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    PosX,
    NegX,
    PosY,
    NegY,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::PosX, Dir::NegX, Dir::PosY, Dir::NegY];

    pub fn vector(self) -> GridPoint {
        match self {
            Dir::PosX => GridPoint::new(1, 0),
            Dir::NegX => GridPoint::new(-1, 0),
            Dir::PosY => GridPoint::new(0, 1),
            Dir::NegY => GridPoint::new(0, -1),
        }
    }

    pub fn from_vector(v: GridPoint) -> Option<Dir> {
        Dir::ALL.into_iter().find(|d| d.vector() == v)
    }

    pub fn opposite(self) -> Dir {
        match self {
            Dir::PosX => Dir::NegX,
            Dir::NegX => Dir::PosX,
            Dir::PosY => Dir::NegY,
            Dir::NegY => Dir::PosY,
        }
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, Dir::PosX | Dir::NegX)
    }
}

/// A finite set of distinct grid points.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointSet {
    points: BTreeSet<GridPoint>,
}

impl PointSet {
    pub fn new() -> Self {
        PointSet::default()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &GridPoint) -> bool {
        self.points.contains(p)
    }

    /// Returns false if the point was already present.
    pub fn insert(&mut self, p: GridPoint) -> bool {
        self.points.insert(p)
    }

    pub fn remove(&mut self, p: &GridPoint) -> bool {
        self.points.remove(p)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = GridPoint> + ExactSizeIterator + '_ {
        self.points.iter().copied()
    }

    /// Smallest point in column-major order.
    pub fn first(&self) -> Option<GridPoint> {
        self.points.first().copied()
    }

    /// Largest point in column-major order.
    pub fn last(&self) -> Option<GridPoint> {
        self.points.last().copied()
    }

    pub fn without(&self, p: &GridPoint) -> PointSet {
        let mut s = self.clone();
        s.remove(p);
        s
    }

    pub fn translate(&self, by: GridPoint) -> PointSet {
        self.iter().map(|p| p + by).collect()
    }

    pub fn map(&self, f: impl Fn(GridPoint) -> GridPoint) -> PointSet {
        self.iter().map(f).collect()
    }

    /// Builds a set, rejecting duplicates.
    pub fn try_from_points(points: impl IntoIterator<Item = GridPoint>) -> Result<PointSet> {
        let mut set = PointSet::new();
        for p in points {
            if !set.insert(p) {
                return Err(Error::DuplicatePoint(p));
            }
        }
        Ok(set)
    }

    /// Translates the set so its bounding rectangle's bottom-left corner is
    /// the origin.
    pub fn normalized(&self) -> PointSet {
        match bounding_rect(self) {
            Ok(r) => self.translate(-r.min),
            Err(_) => PointSet::new(),
        }
    }
}

impl FromIterator<GridPoint> for PointSet {
    fn from_iter<I: IntoIterator<Item = GridPoint>>(iter: I) -> Self {
        PointSet {
            points: iter.into_iter().collect(),
        }
    }
}

impl<const N: usize> From<[(i64, i64); N]> for PointSet {
    fn from(arr: [(i64, i64); N]) -> Self {
        arr.into_iter().map(GridPoint::from).collect()
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = GridPoint;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, GridPoint>>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter().copied()
    }
}

/// Axis-aligned bounding rectangle. Side sizes count grid points, not length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub min: GridPoint,
    pub max: GridPoint,
    pub width_pts: i64,
    pub height_pts: i64,
}

impl Rect {
    pub fn from_corners(a: GridPoint, b: GridPoint) -> Rect {
        let min = GridPoint::new(a.x.min(b.x), a.y.min(b.y));
        let max = GridPoint::new(a.x.max(b.x), a.y.max(b.y));
        Rect {
            min,
            max,
            width_pts: max.x - min.x + 1,
            height_pts: max.y - min.y + 1,
        }
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        (self.min.x..=self.max.x).contains(&p.x) && (self.min.y..=self.max.y).contains(&p.y)
    }

    pub fn is_square(&self) -> bool {
        self.width_pts == self.height_pts
    }

    /// Corners in the order bottom-left, bottom-right, top-right, top-left.
    pub fn corners(&self) -> [GridPoint; 4] {
        [
            self.min,
            GridPoint::new(self.max.x, self.min.y),
            self.max,
            GridPoint::new(self.min.x, self.max.y),
        ]
    }
}

pub fn bounding_rect(c: &PointSet) -> Result<Rect> {
    let mut it = c.iter();
    let first = it.next().ok_or(Error::EmptyConfiguration)?;
    let (mut min, mut max) = (first, first);
    for p in it {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    Ok(Rect::from_corners(min, max))
}

/// A grid isometry: optional reflection `x -> -x`, then a counter-clockwise
/// rotation by `quarter_turns * 90°`, then a translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Isometry {
    pub quarter_turns: u8,
    pub reflect: bool,
    pub translation: GridPoint,
}

impl Default for Isometry {
    fn default() -> Self {
        Isometry::IDENTITY
    }
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        quarter_turns: 0,
        reflect: false,
        translation: GridPoint::ORIGIN,
    };

    pub fn new(quarter_turns: u8, reflect: bool, translation: GridPoint) -> Self {
        Isometry {
            quarter_turns: quarter_turns % 4,
            reflect,
            translation,
        }
    }

    pub fn translation(t: GridPoint) -> Self {
        Isometry::new(0, false, t)
    }

    /// The eight linear parts (no translation).
    pub fn orientations() -> impl Iterator<Item = Isometry> {
        (0..8u8).map(|i| Isometry::new(i % 4, i >= 4, GridPoint::ORIGIN))
    }

    pub fn apply_linear(&self, p: GridPoint) -> GridPoint {
        let mut q = if self.reflect {
            GridPoint::new(-p.x, p.y)
        } else {
            p
        };
        for _ in 0..self.quarter_turns {
            q = q.rot90();
        }
        q
    }

    pub fn apply(&self, p: GridPoint) -> GridPoint {
        self.apply_linear(p) + self.translation
    }

    pub fn apply_dir(&self, d: Dir) -> Dir {
        Dir::from_vector(self.apply_linear(d.vector()))
            .expect("isometries map unit vectors to unit vectors")
    }

    pub fn is_identity(&self) -> bool {
        *self == Isometry::IDENTITY
    }

    fn from_linear_images(ex: GridPoint, ey: GridPoint, translation: GridPoint) -> Isometry {
        Isometry::orientations()
            .find(|g| {
                g.apply_linear(GridPoint::new(1, 0)) == ex
                    && g.apply_linear(GridPoint::new(0, 1)) == ey
            })
            .map(|g| Isometry { translation, ..g })
            .expect("image of an orthonormal basis under a lattice isometry")
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Isometry) -> Isometry {
        let ex = self.apply_linear(first.apply_linear(GridPoint::new(1, 0)));
        let ey = self.apply_linear(first.apply_linear(GridPoint::new(0, 1)));
        Isometry::from_linear_images(ex, ey, self.apply(first.translation))
    }

    pub fn inverse(&self) -> Isometry {
        // The linear part is orthogonal, so its inverse is its transpose.
        let ex = self.apply_linear(GridPoint::new(1, 0));
        let ey = self.apply_linear(GridPoint::new(0, 1));
        let inv_ex = GridPoint::new(ex.x, ey.x);
        let inv_ey = GridPoint::new(ex.y, ey.y);
        let lin = Isometry::from_linear_images(inv_ex, inv_ey, GridPoint::ORIGIN);
        Isometry {
            translation: -lin.apply_linear(self.translation),
            ..lin
        }
    }
}

pub fn apply_isometry(g: &Isometry, c: &PointSet) -> PointSet {
    c.map(|p| g.apply(p))
}

/// Finds an isometry mapping `a` onto `b`, if the two sets are congruent
/// under translations, rotations and reflections.
pub fn similar(a: &PointSet, b: &PointSet) -> Option<Isometry> {
    if a.len() != b.len() {
        return None;
    }
    if a.is_empty() {
        return Some(Isometry::IDENTITY);
    }
    let rb = bounding_rect(b).ok()?;
    let nb = b.translate(-rb.min);
    for lin in Isometry::orientations() {
        let image = apply_isometry(&lin, a);
        let ri = bounding_rect(&image).ok()?;
        if image.translate(-ri.min) == nb {
            return Some(Isometry {
                translation: rb.min - ri.min,
                ..lin
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts<const N: usize>(a: [(i64, i64); N]) -> PointSet {
        PointSet::from(a)
    }

    #[test]
    fn bounding_rect_single_point() {
        let r = bounding_rect(&pts([(0, 0)])).unwrap();
        assert_eq!(r.min, GridPoint::new(0, 0));
        assert_eq!(r.max, GridPoint::new(0, 0));
        assert_eq!((r.width_pts, r.height_pts), (1, 1));
    }

    #[test]
    fn bounding_rect_collinear_pair() {
        let r = bounding_rect(&pts([(2, 3), (5, 3)])).unwrap();
        assert_eq!(r.min, GridPoint::new(2, 3));
        assert_eq!(r.max, GridPoint::new(5, 3));
        assert_eq!((r.width_pts, r.height_pts), (4, 1));
    }

    #[test]
    fn bounding_rect_empty_is_error() {
        assert!(matches!(
            bounding_rect(&PointSet::new()),
            Err(Error::EmptyConfiguration)
        ));
    }

    #[test]
    fn rotation_of_unit_vector() {
        let g = Isometry::new(1, false, GridPoint::ORIGIN);
        assert_eq!(apply_isometry(&g, &pts([(1, 0)])), pts([(0, 1)]));
    }

    #[test]
    fn reflect_then_translate() {
        let g = Isometry::new(0, true, GridPoint::new(3, 0));
        assert_eq!(
            apply_isometry(&g, &pts([(0, 0), (1, 0)])),
            pts([(2, 0), (3, 0)])
        );
    }

    #[test]
    fn identity_leaves_set_alone() {
        let c = pts([(4, -1), (0, 7), (2, 2)]);
        assert_eq!(apply_isometry(&Isometry::IDENTITY, &c), c);
    }

    #[test]
    fn compose_and_inverse_agree_with_pointwise_application() {
        let p = GridPoint::new(3, -2);
        for a in Isometry::orientations() {
            for b in Isometry::orientations() {
                let a = Isometry {
                    translation: GridPoint::new(1, 5),
                    ..a
                };
                let b = Isometry {
                    translation: GridPoint::new(-4, 2),
                    ..b
                };
                assert_eq!(a.compose(&b).apply(p), a.apply(b.apply(p)));
                assert_eq!(a.inverse().apply(a.apply(p)), p);
            }
        }
    }

    #[test]
    fn similar_examples() {
        let a = pts([(0, 0), (0, 1), (1, 0)]);
        assert_eq!(
            similar(&a, &a).map(|g| apply_isometry(&g, &a)),
            Some(a.clone())
        );

        let rot = apply_isometry(&Isometry::new(1, false, GridPoint::new(7, 7)), &a);
        let g = similar(&a, &rot).expect("rotated tromino is similar");
        assert_eq!(apply_isometry(&g, &a), rot);

        assert!(similar(
            &pts([(0, 0), (1, 0), (2, 0)]),
            &pts([(0, 0), (1, 0), (1, 1)])
        )
        .is_none());
    }

    #[test]
    fn dir_round_trip() {
        for d in Dir::ALL {
            assert_eq!(Dir::from_vector(d.vector()), Some(d));
            assert_eq!(d.opposite().opposite(), d);
        }
    }
}

//! Points and lines of PG(2,q).
//!
//! Points are normalized homogeneous triples whose leftmost nonzero
//! coordinate is 1, numbered in lexicographic order of their coordinates:
//!
//! ```text
//! id 0            (0:0:1)
//! id 1 ..= q      (0:1:t)      t = id - 1
//! id q+1 ..       (1:a:b)      a*q + b = id - q - 1
//! ```
//!
//! Lines use the same numbering on their dual coordinates `[a:b:c]`, so the
//! lines through point `i` are exactly the ids of the points on line `i`.

use thiserror::Error;

use crate::gf::{Field, FieldElement};

pub type PointId = u32;
pub type LineId = u32;

/// Homogeneous coordinates (or dual line coordinates).
pub type Triple = [FieldElement; 3];

/// Largest plane the default cap admits: q = 9109.
pub const DEFAULT_POINT_CAP: u64 = 9109 * 9109 + 9109 + 1;

/// Incidence lists are stored explicitly while they fit in this many ids.
const LINE_TABLE_CAP: u64 = 1 << 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaneError {
    #[error("plane of order {q} has {points} points, above the cap of {cap}")]
    MemoryBudgetExceeded { q: u32, points: u64, cap: u64 },
    #[error("a line needs two distinct points")]
    EqualPoints,
    #[error("the zero triple is not a projective point")]
    ZeroTriple,
    #[error("id {0} is out of range")]
    InvalidId(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    pub id: PointId,
    pub coords: Triple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Line {
    pub id: LineId,
    pub coeffs: Triple,
}

/// Enumeration and incidence structure of PG(2,q).
#[derive(Debug)]
pub struct PlaneIndex {
    field: Field,
    q: u32,
    n: u32,
    /// `(q+1)` sorted point ids per line, when small enough to store.
    line_points: Option<Vec<PointId>>,
}

impl PlaneIndex {
    pub fn build(field: Field) -> Result<Self, PlaneError> {
        Self::build_with_cap(field, DEFAULT_POINT_CAP)
    }

    pub fn build_with_cap(field: Field, point_cap: u64) -> Result<Self, PlaneError> {
        let q = field.order();
        let points = q as u64 * q as u64 + q as u64 + 1;
        if points > point_cap || points > u32::MAX as u64 {
            return Err(PlaneError::MemoryBudgetExceeded {
                q,
                points,
                cap: point_cap,
            });
        }
        let mut plane = PlaneIndex {
            field,
            q,
            n: points as u32,
            line_points: None,
        };
        if points * (q as u64 + 1) <= LINE_TABLE_CAP {
            let mut table = Vec::with_capacity((points * (q as u64 + 1)) as usize);
            let mut buf = Vec::with_capacity(q as usize + 1);
            for l in 0..plane.n {
                buf.clear();
                plane.enumerate_line(l, |p| buf.push(p));
                buf.sort_unstable();
                table.extend_from_slice(&buf);
            }
            plane.line_points = Some(table);
        }
        Ok(plane)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Number of points, equal to the number of lines: q² + q + 1.
    #[inline]
    pub fn n_points(&self) -> u32 {
        self.n
    }

    pub fn point(&self, id: PointId) -> Result<Point, PlaneError> {
        self.check(id)?;
        Ok(Point {
            id,
            coords: self.coords(id),
        })
    }

    pub fn line(&self, id: LineId) -> Result<Line, PlaneError> {
        self.check(id)?;
        Ok(Line {
            id,
            coeffs: self.coords(id),
        })
    }

    fn check(&self, id: u32) -> Result<(), PlaneError> {
        if id < self.n {
            Ok(())
        } else {
            Err(PlaneError::InvalidId(id))
        }
    }

    /// Normalized coordinates of a point id (or dual coordinates of a line id).
    #[inline]
    pub fn coords(&self, id: u32) -> Triple {
        let q = self.q;
        let el = FieldElement::from_raw;
        if id == 0 {
            [FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]
        } else if id <= q {
            [FieldElement::ZERO, FieldElement::ONE, el(id - 1)]
        } else {
            let r = id - q - 1;
            [FieldElement::ONE, el(r / q), el(r % q)]
        }
    }

    /// Id of the projective point `x`, which need not be normalized.
    pub fn id_of(&self, x: Triple) -> Result<u32, PlaneError> {
        if x.iter().all(|c| c.is_zero()) {
            return Err(PlaneError::ZeroTriple);
        }
        Ok(self.normalized_id(x))
    }

    /// Scales `x` so its leftmost nonzero coordinate is 1.
    pub fn normalize(&self, x: Triple) -> Result<Triple, PlaneError> {
        let id = self.id_of(x)?;
        Ok(self.coords(id))
    }

    #[inline]
    fn normalized_id(&self, [x0, x1, x2]: Triple) -> u32 {
        let f = &self.field;
        let q = self.q;
        if !x0.is_zero() {
            let s = f.inv_or_zero(x0);
            1 + q + f.mul(x1, s).index() * q + f.mul(x2, s).index()
        } else if !x1.is_zero() {
            1 + f.mul(x2, f.inv_or_zero(x1)).index()
        } else {
            0
        }
    }

    #[inline]
    fn cross(&self, a: Triple, b: Triple) -> Triple {
        let f = &self.field;
        let m = |x, y| f.mul(x, y);
        [
            f.sub(m(a[1], b[2]), m(a[2], b[1])),
            f.sub(m(a[2], b[0]), m(a[0], b[2])),
            f.sub(m(a[0], b[1]), m(a[1], b[0])),
        ]
    }

    #[inline]
    fn dot(&self, a: Triple, b: Triple) -> FieldElement {
        let f = &self.field;
        f.add(
            f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1])),
            f.mul(a[2], b[2]),
        )
    }

    /// The unique line through two distinct points (cross product).
    pub fn line_through(&self, p1: PointId, p2: PointId) -> Result<LineId, PlaneError> {
        self.check(p1)?;
        self.check(p2)?;
        if p1 == p2 {
            return Err(PlaneError::EqualPoints);
        }
        Ok(self.line_through_unchecked(p1, p2))
    }

    #[inline]
    pub(crate) fn line_through_unchecked(&self, p1: PointId, p2: PointId) -> LineId {
        self.normalized_id(self.cross(self.coords(p1), self.coords(p2)))
    }

    /// The common point of two distinct lines; the dual of [`Self::line_through`].
    pub fn meet(&self, l1: LineId, l2: LineId) -> Result<PointId, PlaneError> {
        self.line_through(l1, l2)
    }

    #[inline]
    pub fn incidence(&self, p: PointId, l: LineId) -> bool {
        self.dot(self.coords(p), self.coords(l)).is_zero()
    }

    /// The q+1 points of line `l`, sorted by id.
    pub fn points_on_line(&self, l: LineId) -> Vec<PointId> {
        match self.stored_line(l) {
            Some(s) => s.to_vec(),
            None => {
                let mut v = Vec::with_capacity(self.q as usize + 1);
                self.enumerate_line(l, |p| v.push(p));
                v.sort_unstable();
                v
            }
        }
    }

    /// The q+1 lines through point `p`, sorted by id.
    pub fn lines_through_point(&self, p: PointId) -> Vec<LineId> {
        self.points_on_line(p)
    }

    /// Calls `f` for every point of line `l`, in unspecified order.
    #[inline]
    pub fn for_each_point_on_line(&self, l: LineId, mut f: impl FnMut(PointId)) {
        match self.stored_line(l) {
            Some(s) => s.iter().for_each(|&p| f(p)),
            None => self.enumerate_line(l, f),
        }
    }

    /// Calls `f` for every line through point `p`, in unspecified order.
    #[inline]
    pub fn for_each_line_through(&self, p: PointId, f: impl FnMut(LineId)) {
        self.for_each_point_on_line(p, f)
    }

    #[inline]
    fn stored_line(&self, l: LineId) -> Option<&[PointId]> {
        let k = self.q as usize + 1;
        self.line_points
            .as_ref()
            .map(|t| &t[l as usize * k..(l as usize + 1) * k])
    }

    /// Solves `a x0 + b x1 + c x2 = 0` for the normalized line `[a:b:c]`.
    fn enumerate_line(&self, l: LineId, mut f: impl FnMut(PointId)) {
        let fld = &self.field;
        let [_, b, c] = self.coords(l);
        let zero = FieldElement::ZERO;
        let one = FieldElement::ONE;
        if l == 0 {
            // x2 = 0
            f(self.normalized_id([zero, one, zero]));
            for t in fld.elements() {
                f(self.normalized_id([one, t, zero]));
            }
        } else if l <= self.q {
            // x1 = -c x2
            let nc = fld.neg(c);
            f(self.normalized_id([one, zero, zero]));
            for t in fld.elements() {
                f(self.normalized_id([t, nc, one]));
            }
        } else {
            // x0 = -(b x1 + c x2)
            let (nb, nc) = (fld.neg(b), fld.neg(c));
            f(self.normalized_id([nc, zero, one]));
            for t in fld.elements() {
                f(self.normalized_id([fld.add(nb, fld.mul(nc, t)), one, t]));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(q: u64) -> PlaneIndex {
        PlaneIndex::build(Field::from_order(q).unwrap()).unwrap()
    }

    fn el(i: u32) -> FieldElement {
        Field::new(2, 1).unwrap().element(i as u64).unwrap()
    }

    fn id(pi: &PlaneIndex, c: [u32; 3]) -> u32 {
        let f = pi.field();
        let t = c.map(|i| f.element(i as u64).unwrap());
        pi.id_of(t).unwrap()
    }

    #[test]
    fn small_plane_sizes() {
        let fano = plane(2);
        assert_eq!(fano.n_points(), 7);
        let p3 = plane(3);
        assert_eq!(p3.n_points(), 13);
        for l in 0..13 {
            assert_eq!(p3.points_on_line(l).len(), 4);
        }
    }

    #[test]
    fn id_order_is_lexicographic() {
        for q in [2u64, 3, 4, 5, 9] {
            let pi = plane(q);
            let triples: Vec<Vec<u32>> = (0..pi.n_points())
                .map(|i| pi.coords(i).iter().map(|c| c.index()).collect())
                .collect();
            assert!(triples.windows(2).all(|w| w[0] < w[1]));
            for i in 0..pi.n_points() {
                assert_eq!(pi.id_of(pi.coords(i)).unwrap(), i);
            }
        }
    }

    #[test]
    fn fano_line_through_axis_points() {
        let pi = plane(2);
        let l = pi
            .line_through(id(&pi, [1, 0, 0]), id(&pi, [0, 1, 0]))
            .unwrap();
        assert_eq!(pi.coords(l), [el(0), el(0), el(1)]);
        let pts = pi.points_on_line(l);
        let mut expected = vec![id(&pi, [1, 0, 0]), id(&pi, [0, 1, 0]), id(&pi, [1, 1, 0])];
        expected.sort();
        assert_eq!(pts, expected);
    }

    #[test]
    fn fano_incidence_examples() {
        let pi = plane(2);
        let x2_zero = id(&pi, [0, 0, 1]);
        assert!(!pi.incidence(id(&pi, [1, 1, 1]), x2_zero));
        assert!(pi.incidence(id(&pi, [1, 1, 0]), x2_zero));
    }

    #[test]
    fn line_through_errors() {
        let pi = plane(3);
        assert_eq!(pi.line_through(4, 4), Err(PlaneError::EqualPoints));
        assert_eq!(pi.line_through(4, 13), Err(PlaneError::InvalidId(13)));
        let z = [FieldElement::ZERO; 3];
        assert_eq!(pi.id_of(z), Err(PlaneError::ZeroTriple));
    }

    #[test]
    fn line_through_is_incident_and_symmetric() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for q in [5u64, 7] {
            let pi = plane(q);
            for _ in 0..100 {
                let a = rng.gen_range(0..pi.n_points());
                let b = rng.gen_range(0..pi.n_points());
                if a == b {
                    continue;
                }
                let l = pi.line_through(a, b).unwrap();
                assert!(pi.incidence(a, l) && pi.incidence(b, l));
                assert_eq!(l, pi.line_through(b, a).unwrap());
            }
        }
    }

    /// Brute force over all lines for every pair, q <= 8.
    #[test]
    fn line_through_matches_scan() {
        for q in [2u64, 3, 4, 5, 7, 8] {
            let pi = plane(q);
            let n = pi.n_points();
            for a in 0..n {
                for b in a + 1..n {
                    let both: Vec<_> = (0..n)
                        .filter(|&l| pi.incidence(a, l) && pi.incidence(b, l))
                        .collect();
                    assert_eq!(both, vec![pi.line_through(a, b).unwrap()]);
                }
            }
        }
    }

    #[test]
    fn incidence_counts_exhaustive() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
            let pi = plane(q);
            let n = pi.n_points();
            for p in 0..n {
                let count = (0..n).filter(|&l| pi.incidence(p, l)).count();
                assert_eq!(count as u32, pi.order() + 1);
            }
        }
    }

    #[test]
    fn points_on_line_are_incident() {
        for q in [4u64, 8, 9, 16, 25, 27, 32] {
            let pi = plane(q);
            let mut tally = vec![0u32; pi.n_points() as usize];
            let mut total = 0u64;
            for l in 0..pi.n_points() {
                let pts = pi.points_on_line(l);
                assert_eq!(pts.len() as u32, pi.order() + 1);
                assert!(pts.windows(2).all(|w| w[0] < w[1]));
                for &p in &pts {
                    assert!(pi.incidence(p, l));
                    tally[p as usize] += 1;
                }
                total += pts.len() as u64;
            }
            assert!(tally.iter().all(|&c| c == pi.order() + 1));
            let n = pi.n_points() as u64;
            assert_eq!(total, n * (q + 1));
        }
    }

    #[test]
    fn sizes_across_orders() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 13, 16, 25, 27, 32] {
            let pi = plane(q);
            assert_eq!(pi.n_points() as u64, q * q + q + 1);
        }
    }

    /// Two points span one line and two lines meet in one point, exhaustive q <= 9.
    #[test]
    fn pair_uniqueness_exhaustive() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let pi = plane(q);
            let n = pi.n_points();
            let lines: Vec<Vec<u32>> = (0..n).map(|l| pi.points_on_line(l)).collect();
            for a in 0..n {
                for b in a + 1..n {
                    let common = lines
                        .iter()
                        .filter(|pts| pts.contains(&a) && pts.contains(&b))
                        .count();
                    assert_eq!(common, 1);
                    let shared = lines[a as usize]
                        .iter()
                        .filter(|p| lines[b as usize].contains(p))
                        .count();
                    assert_eq!(shared, 1);
                }
            }
        }
    }

    #[test]
    fn pair_uniqueness_sampled_large() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for q in [13u64, 16, 25, 27, 32, 401] {
            let pi = plane(q);
            let n = pi.n_points();
            for _ in 0..10_000 {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a == b {
                    continue;
                }
                let l = pi.line_through(a, b).unwrap();
                let pts = pi.points_on_line(l);
                assert!(pts.binary_search(&a).is_ok() && pts.binary_search(&b).is_ok());
                let m = pi.meet(a, b).unwrap();
                assert!(pi.incidence(m, a) && pi.incidence(m, b));
            }
        }
    }

    #[test]
    fn enumeration_agrees_without_table() {
        // q = 401 is above the stored-table size, exercise the on-the-fly path.
        let pi = plane(401);
        assert!(pi.line_points.is_none());
        for l in [0u32, 1, 400, 402, 1000, pi.n_points() - 1] {
            let pts = pi.points_on_line(l);
            assert_eq!(pts.len(), 402);
            assert!(pts.windows(2).all(|w| w[0] < w[1]));
            assert!(pts.iter().all(|&p| pi.incidence(p, l)));
        }
    }

    #[test]
    fn normalization_is_idempotent() {
        let pi = plane(9);
        let f = pi.field();
        for i in 0..pi.n_points() {
            let c = pi.coords(i);
            assert_eq!(pi.normalize(c).unwrap(), c);
            let k = f.element(5).unwrap();
            let scaled = c.map(|x| f.mul(x, k));
            assert_eq!(pi.normalize(scaled).unwrap(), c);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = PlaneIndex::build_with_cap(Field::new(7, 1).unwrap(), 50).unwrap_err();
        assert!(matches!(
            err,
            PlaneError::MemoryBudgetExceeded { points: 57, .. }
        ));
    }
}

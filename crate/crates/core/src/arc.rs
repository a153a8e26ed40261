//! Arcs, their independent verification, and incremental secant coverage.
//!
//! A point is *covered* by an arc when it belongs to the arc or lies on a
//! secant (a line through two arc points). The arc is complete exactly when
//! every point of the plane is covered, and an uncovered point is precisely
//! a point that can be added without creating three collinear points.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::plane::{LineId, PlaneIndex, PointId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArcError {
    #[error("point {0} is already covered by a secant or belongs to the arc")]
    CoveredPoint(PointId),
    #[error("the point set has three collinear points")]
    NotAnArc,
    #[error("point id {0} is out of range")]
    InvalidPoint(PointId),
    #[error("point {0} appears twice")]
    DuplicatePoint(PointId),
}

/// An ordered set of distinct plane points.
///
/// Insertion order is kept so certificates list points the way they were
/// found. Whether the points form an arc is checked by [`verify_arc`] or
/// maintained by [`CoverageState::add`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    points: Vec<PointId>,
    members: FixedBitSet,
}

impl Arc {
    pub fn new(plane: &PlaneIndex) -> Self {
        Arc {
            points: Vec::new(),
            members: FixedBitSet::with_capacity(plane.n_points() as usize),
        }
    }

    /// Collects distinct valid ids; the arc property itself is not checked.
    pub fn from_points(plane: &PlaneIndex, points: &[PointId]) -> Result<Self, ArcError> {
        let mut arc = Arc::new(plane);
        for &p in points {
            if p >= plane.n_points() {
                return Err(ArcError::InvalidPoint(p));
            }
            if arc.contains(p) {
                return Err(ArcError::DuplicatePoint(p));
            }
            arc.push(p);
        }
        Ok(arc)
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: PointId) -> bool {
        self.members.contains(p as usize)
    }

    pub(crate) fn push(&mut self, p: PointId) {
        self.members.insert(p as usize);
        self.points.push(p);
    }

    pub(crate) fn clear(&mut self) {
        self.members.clear();
        self.points.clear();
    }

    /// Point ids sorted ascending, for set comparisons.
    pub fn sorted_points(&self) -> Vec<PointId> {
        let mut v = self.points.clone();
        v.sort_unstable();
        v
    }
}

/// True iff no line meets `points` in three or more points.
///
/// Tallies the line of every pair from scratch; a line holding `m` points
/// collects `m(m-1)/2` pairs, so any line with a second pair has `m >= 3`.
/// Repeated ids are rejected.
pub fn verify_arc(plane: &PlaneIndex, points: &[PointId]) -> bool {
    let n = plane.n_points();
    if points.iter().any(|&p| p >= n) {
        return false;
    }
    let mut pairs_on_line = vec![0u32; n as usize];
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            let Ok(l) = plane.line_through(a, b) else {
                return false;
            };
            pairs_on_line[l as usize] += 1;
            if pairs_on_line[l as usize] > 1 {
                return false;
            }
        }
    }
    true
}

/// Outcome of a from-scratch completeness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completeness {
    pub complete: bool,
    /// Every point off all secants; each one extends the arc.
    pub uncovered: Vec<PointId>,
}

/// Recomputes coverage by marking every secant of the arc.
pub fn verify_complete(plane: &PlaneIndex, points: &[PointId]) -> Result<Completeness, ArcError> {
    if !verify_arc(plane, points) {
        return Err(ArcError::NotAnArc);
    }
    let covered = scratch_coverage(plane, points);
    let uncovered: Vec<PointId> = covered.zeroes().map(|p| p as PointId).collect();
    Ok(Completeness {
        complete: uncovered.is_empty(),
        uncovered,
    })
}

/// Points on some secant of `points`, or in `points`; no incremental state.
pub fn scratch_coverage(plane: &PlaneIndex, points: &[PointId]) -> FixedBitSet {
    let mut covered = FixedBitSet::with_capacity(plane.n_points() as usize);
    for &p in points {
        covered.insert(p as usize);
    }
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            if let Ok(l) = plane.line_through(a, b) {
                for x in plane.points_on_line(l) {
                    covered.insert(x as usize);
                }
            }
        }
    }
    covered
}

/// Incrementally maintained secant coverage of a growing arc.
#[derive(Debug, Clone)]
pub struct CoverageState {
    covered: FixedBitSet,
    covered_count: usize,
    /// Arc points per line, saturating at 2.
    line_hits: Vec<u8>,
}

impl CoverageState {
    pub fn new(plane: &PlaneIndex) -> Self {
        let n = plane.n_points() as usize;
        CoverageState {
            covered: FixedBitSet::with_capacity(n),
            covered_count: 0,
            line_hits: vec![0; n],
        }
    }

    /// Coverage of an existing arc, built by replaying its points.
    pub fn for_arc(plane: &PlaneIndex, arc: &Arc) -> Result<(Self, Arc), ArcError> {
        let mut state = CoverageState::new(plane);
        let mut rebuilt = Arc::new(plane);
        for &p in arc.points() {
            state.add(plane, &mut rebuilt, p)?;
        }
        Ok((state, rebuilt))
    }

    pub fn reset(&mut self) {
        self.covered.clear();
        self.covered_count = 0;
        self.line_hits.iter_mut().for_each(|h| *h = 0);
    }

    #[inline]
    pub fn is_covered(&self, p: PointId) -> bool {
        self.covered.contains(p as usize)
    }

    pub fn covered(&self) -> &FixedBitSet {
        &self.covered
    }

    pub fn covered_count(&self) -> usize {
        self.covered_count
    }

    pub fn is_complete(&self, plane: &PlaneIndex) -> bool {
        self.covered_count == plane.n_points() as usize
    }

    /// 0, 1, or 2 (meaning two or more) arc points on line `l`.
    #[inline]
    pub fn secant_count(&self, l: LineId) -> u8 {
        self.line_hits[l as usize]
    }

    /// Adds `p` to the arc and marks the new secants. Returns the number of
    /// newly covered points.
    pub fn add(
        &mut self,
        plane: &PlaneIndex,
        arc: &mut Arc,
        p: PointId,
    ) -> Result<usize, ArcError> {
        self.add_with(plane, arc, p, |_| {})
    }

    /// As [`Self::add`], reporting every newly covered point to `on_covered`.
    pub fn add_with(
        &mut self,
        plane: &PlaneIndex,
        arc: &mut Arc,
        p: PointId,
        mut on_covered: impl FnMut(PointId),
    ) -> Result<usize, ArcError> {
        if p >= plane.n_points() {
            return Err(ArcError::InvalidPoint(p));
        }
        if self.is_covered(p) {
            return Err(ArcError::CoveredPoint(p));
        }
        let before = self.covered_count;
        self.covered.insert(p as usize);
        self.covered_count += 1;
        on_covered(p);

        let mut new_secants = Vec::new();
        let hits = &mut self.line_hits;
        plane.for_each_line_through(p, |l| {
            let h = &mut hits[l as usize];
            if *h == 1 {
                new_secants.push(l);
            }
            *h = (*h + 1).min(2);
        });
        for l in new_secants {
            let covered = &mut self.covered;
            let count = &mut self.covered_count;
            plane.for_each_point_on_line(l, |x| {
                if !covered.put(x as usize) {
                    *count += 1;
                    on_covered(x);
                }
            });
        }
        arc.push(p);
        Ok(self.covered_count - before)
    }

    /// Points that adding `p` would newly cover, without mutating anything.
    ///
    /// Each line through `p` and a single arc point becomes a secant; those
    /// lines pairwise share only `p`, so their uncovered points add up.
    pub fn gain(&self, plane: &PlaneIndex, p: PointId) -> Result<usize, ArcError> {
        if p >= plane.n_points() {
            return Err(ArcError::InvalidPoint(p));
        }
        if self.is_covered(p) {
            return Err(ArcError::CoveredPoint(p));
        }
        let mut gain = 1usize;
        plane.for_each_line_through(p, |l| {
            if self.line_hits[l as usize] == 1 {
                plane.for_each_point_on_line(l, |x| {
                    if x != p && !self.is_covered(x) {
                        gain += 1;
                    }
                });
            }
        });
        Ok(gain)
    }
}

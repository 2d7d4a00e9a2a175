//! Incrementally maintained arc state with a bisecant-coverage bitmap, plus
//! slow trusted oracles for the arc and completeness properties.
//!
//! Coverage semantics: a bit is set iff the point is an arc point or lies on
//! a line through two distinct arc points. With fewer than two arc points
//! only the arc points themselves are covered, so "pick an uncovered point"
//! is meaningful from the very first step. An arc is complete exactly when
//! every bit is set, which the engine detects by counter rather than by
//! scanning.

use crate::plane::{Plane, PointIndex};
use crate::{Error, Result};

/// Dense bit array over all q² + q + 1 plane points with a running count of
/// set bits.
#[derive(Clone, Debug)]
pub struct CoverageBitmap {
    words: Vec<u64>,
    len: u64,
    covered: u64,
}

impl CoverageBitmap {
    pub fn new(len: u64) -> Self {
        CoverageBitmap {
            words: vec![0; len.div_ceil(64) as usize],
            len,
            covered: 0,
        }
    }

    #[inline]
    pub fn get(&self, i: u64) -> bool {
        debug_assert!(i < self.len);
        self.words[(i >> 6) as usize] & (1 << (i & 63)) != 0
    }

    /// Set bit i, bumping the counter only on a 0 -> 1 transition.
    #[inline]
    pub fn set(&mut self, i: u64) {
        debug_assert!(i < self.len);
        let w = &mut self.words[(i >> 6) as usize];
        let mask = 1 << (i & 63);
        if *w & mask == 0 {
            *w |= mask;
            self.covered += 1;
        }
    }

    #[inline]
    pub fn covered_count(&self) -> u64 {
        self.covered
    }

    #[inline]
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Heap footprint of the bit storage.
    pub fn byte_size(&self) -> usize {
        self.words.len() * 8
    }
}

/// An arc under construction: the accepted points plus the coverage bitmap.
/// Single-owner mutable state; clone it to branch (the exhaustive search
/// does), never share it across workers.
#[derive(Clone, Debug)]
pub struct ArcState {
    plane: Plane,
    points: Vec<PointIndex>,
    triples: Vec<[u64; 3]>,
    coverage: CoverageBitmap,
}

impl ArcState {
    pub fn new(plane: Plane) -> Self {
        let coverage = CoverageBitmap::new(plane.n_points());
        ArcState {
            plane,
            points: Vec::new(),
            triples: Vec::new(),
            coverage,
        }
    }

    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    pub fn points(&self) -> &[PointIndex] {
        &self.points
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn covered_count(&self) -> u64 {
        self.coverage.covered_count()
    }

    pub fn coverage_bytes(&self) -> usize {
        self.coverage.byte_size()
    }

    #[inline]
    pub fn is_covered(&self, i: PointIndex) -> bool {
        self.coverage.get(i)
    }

    /// The points whose coverage bit is still clear, in index order.
    pub fn uncovered(&self) -> Vec<PointIndex> {
        (0..self.plane.n_points())
            .filter(|&i| !self.coverage.get(i))
            .collect()
    }

    /// Attempt to extend the arc by the point with index `i`.
    ///
    /// A covered point is rejected (returns false, state untouched) — that
    /// is the normal outcome of the random procedure, not an error. An
    /// uncovered point is appended, marked covered, and each new bisecant
    /// through it and an existing arc point has all its q + 1 points marked.
    pub fn try_add(&mut self, i: PointIndex) -> bool {
        assert!(
            i < self.plane.n_points(),
            "point index {i} out of range for q = {}",
            self.plane.q()
        );
        if self.coverage.get(i) {
            return false;
        }
        let t = self
            .plane
            .point_from_index(i)
            .expect("index checked above")
            .coords();
        self.coverage.set(i);
        let plane = self.plane;
        let coverage = &mut self.coverage;
        for u in &self.triples {
            let line = plane.cross(t, *u);
            plane.for_each_point_on_line(line, |j| coverage.set(j));
        }
        self.points.push(i);
        self.triples.push(t);
        true
    }

    /// True iff every plane point is covered.
    pub fn is_complete(&self) -> bool {
        self.coverage.covered_count() == self.plane.n_points()
    }
}

/// Independent arc oracle: the indices are pairwise distinct, in range, and
/// no three of the points are collinear. Direct determinant checks, O(n³);
/// shares nothing with the coverage engine.
pub fn verify_arc(plane: &Plane, pts: &[PointIndex]) -> bool {
    let mut sorted = pts.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != pts.len() {
        return false;
    }
    let mut triples = Vec::with_capacity(pts.len());
    for &i in pts {
        match plane.point_from_index(i) {
            Ok(p) => triples.push(p),
            Err(_) => return false,
        }
    }
    for a in 0..triples.len() {
        for b in (a + 1)..triples.len() {
            for c in (b + 1)..triples.len() {
                if plane.collinear(triples[a], triples[b], triples[c]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Independent completeness oracle: rebuilds coverage from scratch with a
/// fresh byte map and the public line operations, never reusing the
/// incremental engine's state. Errors if `pts` is not an arc.
pub fn verify_complete(plane: &Plane, pts: &[PointIndex]) -> Result<bool> {
    if !verify_arc(plane, pts) {
        return Err(Error::NotAnArc);
    }
    let mut covered = vec![false; plane.n_points() as usize];
    for &i in pts {
        covered[i as usize] = true;
    }
    for a in 0..pts.len() {
        for b in (a + 1)..pts.len() {
            let p = plane.point_from_index(pts[a]).expect("verified above");
            let r = plane.point_from_index(pts[b]).expect("verified above");
            let l = plane.line_through(p, r).expect("distinct arc points");
            for j in plane.points_on_line(l) {
                covered[j as usize] = true;
            }
        }
    }
    Ok(covered.iter().all(|&c| c))
}

/// Serialize an arc as the one-line text format `q=<q> n=<n> pts=<i1,i2,...>`.
pub fn format_arc_line(q: u64, pts: &[PointIndex]) -> String {
    let joined = pts
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("q={} n={} pts={}", q, pts.len(), joined)
}

/// Parse the arc serialization format produced by [`format_arc_line`].
pub fn parse_arc_line(line: &str) -> Result<(u64, Vec<PointIndex>)> {
    let bad = |msg: &str| Error::Parse(format!("{msg} in arc line {line:?}"));
    let mut q = None;
    let mut n = None;
    let mut pts: Option<Vec<PointIndex>> = None;
    for part in line.split_whitespace() {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| bad("expected key=value field"))?;
        match key {
            "q" => {
                q = Some(
                    value
                        .parse::<u64>()
                        .map_err(|_| bad("unreadable q value"))?,
                )
            }
            "n" => {
                n = Some(
                    value
                        .parse::<u64>()
                        .map_err(|_| bad("unreadable n value"))?,
                )
            }
            "pts" => {
                let mut v = Vec::new();
                if !value.is_empty() {
                    for item in value.split(',') {
                        v.push(
                            item.parse::<PointIndex>()
                                .map_err(|_| bad("unreadable point index"))?,
                        );
                    }
                }
                pts = Some(v);
            }
            _ => return Err(bad("unknown field")),
        }
    }
    let q = q.ok_or_else(|| bad("missing q"))?;
    let n = n.ok_or_else(|| bad("missing n"))?;
    let pts = pts.ok_or_else(|| bad("missing pts"))?;
    if pts.len() as u64 != n {
        return Err(bad("n does not match the number of points"));
    }
    Ok((q, pts))
}

//! Points, lines, and incidence in the projective plane PG(2,q), q prime.
//!
//! Points are homogeneous triples (x0, x1, x2) over GF(q), canonicalized so
//! the first nonzero coordinate is 1. The canonical dense enumeration is
//!
//! - index i in [0, q²):  (1, i div q, i mod q)
//! - index q² + j, j in [0, q):  (0, 1, j)
//! - index q² + q:  (0, 0, 1)
//!
//! which is also the lexicographic point order used by the greedy
//! fixed-order constructor. Lines carry dual coordinates (a0, a1, a2): the
//! point (x0, x1, x2) lies on the line iff a0·x0 + a1·x1 + a2·x2 = 0, and
//! lines are canonicalized the same way points are.

use crate::field::PrimeField;
use crate::{Error, Result};

/// Dense index of a plane point under the canonical enumeration.
pub type PointIndex = u64;

/// A point in canonical form (first nonzero coordinate is 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Point([u64; 3]);

impl Point {
    pub fn coords(self) -> [u64; 3] {
        self.0
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// A line in canonical dual coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Line([u64; 3]);

impl Line {
    pub fn coords(self) -> [u64; 3] {
        self.0
    }
}

impl std::fmt::Display for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{},{}]", self.0[0], self.0[1], self.0[2])
    }
}

/// Shared geometry context: the prime order q and the derived counts.
/// PG(2,q) has q² + q + 1 points and as many lines; every line carries
/// q + 1 points and every point lies on q + 1 lines.
#[derive(Clone, Copy, Debug)]
pub struct Plane {
    field: PrimeField,
    q: u64,
    n_points: u64,
}

impl Plane {
    pub fn new(q: u64) -> Result<Self> {
        let field = PrimeField::new(q)?;
        let n_points = q
            .checked_mul(q)
            .and_then(|s| s.checked_add(q))
            .and_then(|s| s.checked_add(1))
            .ok_or(Error::ModulusTooLarge(q))?;
        Ok(Plane { field, q, n_points })
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn n_points(&self) -> u64 {
        self.n_points
    }

    #[inline]
    pub fn n_lines(&self) -> u64 {
        self.n_points
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Canonicalize an arbitrary nonzero triple into a point.
    pub fn point(&self, t: [u64; 3]) -> Result<Point> {
        Ok(Point(self.canonicalize(t)?))
    }

    pub fn line(&self, t: [u64; 3]) -> Result<Line> {
        Ok(Line(self.canonicalize(t)?))
    }

    fn canonicalize(&self, t: [u64; 3]) -> Result<[u64; 3]> {
        let f = self.field;
        let t = [f.reduce(t[0]), f.reduce(t[1]), f.reduce(t[2])];
        let k = t
            .iter()
            .position(|&c| c != 0)
            .ok_or(Error::ZeroTriple)?;
        let s = f.inv(t[k])?;
        Ok([f.mul(t[0], s), f.mul(t[1], s), f.mul(t[2], s)])
    }

    pub fn point_from_index(&self, i: PointIndex) -> Result<Point> {
        let q = self.q;
        if i >= self.n_points {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.n_points,
            });
        }
        Ok(Point(if i < q * q {
            [1, i / q, i % q]
        } else if i < q * q + q {
            [0, 1, i - q * q]
        } else {
            [0, 0, 1]
        }))
    }

    /// Index of an arbitrary (not necessarily canonical) nonzero triple.
    pub fn index_from_point(&self, t: [u64; 3]) -> Result<PointIndex> {
        let c = self.canonicalize(t)?;
        Ok(self.index_of_canonical(c))
    }

    pub fn index_of(&self, p: Point) -> PointIndex {
        self.index_of_canonical(p.0)
    }

    #[inline]
    fn index_of_canonical(&self, c: [u64; 3]) -> PointIndex {
        let q = self.q;
        if c[0] == 1 {
            c[1] * q + c[2]
        } else if c[1] == 1 {
            q * q + c[2]
        } else {
            q * q + q
        }
    }

    /// Cross product of two triples over GF(q); zero iff the inputs are
    /// projectively equal.
    pub(crate) fn cross(&self, a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
        let f = self.field;
        [
            f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
            f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
            f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
        ]
    }

    fn det(&self, a: [u64; 3], b: [u64; 3], c: [u64; 3]) -> u64 {
        let f = self.field;
        let x = self.cross(b, c);
        let mut acc = 0u64;
        for i in 0..3 {
            acc = f.add(acc, f.mul(a[i], x[i]));
        }
        acc
    }

    /// The unique line through two distinct points (the cross product,
    /// canonicalized). Both inputs satisfy its incidence equation.
    pub fn line_through(&self, p: Point, r: Point) -> Result<Line> {
        let x = self.cross(p.0, r.0);
        if x == [0, 0, 0] {
            return Err(Error::CoincidentPoints);
        }
        self.line(x)
    }

    /// True iff det[p; r; s] = 0 over GF(q). Arguments need not be distinct.
    pub fn collinear(&self, p: Point, r: Point, s: Point) -> bool {
        self.det(p.0, r.0, s.0) == 0
    }

    #[cfg(test)]
    pub(crate) fn collinear_raw(&self, a: [u64; 3], b: [u64; 3], c: [u64; 3]) -> bool {
        self.det(a, b, c) == 0
    }

    /// The q + 1 point indices on a line, by parametrizing the solution set
    /// of the incidence equation (no plane-wide scan).
    pub fn points_on_line(&self, l: Line) -> Vec<PointIndex> {
        let mut out = Vec::with_capacity(self.q as usize + 1);
        self.for_each_point_on_line(l.0, |i| out.push(i));
        out
    }

    /// Visit the indices of the q + 1 points on an (uncanonicalized, nonzero)
    /// line triple. Affine points (1, y, z) are visited in increasing y with
    /// z produced by one field inverse and additive stepping, so the whole
    /// walk costs O(q) additions.
    pub(crate) fn for_each_point_on_line(&self, a: [u64; 3], mut visit: impl FnMut(PointIndex)) {
        let f = self.field;
        let q = self.q;
        let a = [f.reduce(a[0]), f.reduce(a[1]), f.reduce(a[2])];
        debug_assert!(a != [0, 0, 0], "zero triple is not a line");
        if a[2] != 0 {
            // (1, y, z): z = -(a0 + a1 y) / a2, one point per y;
            // (0, 1, z): z = -a1 / a2.
            let inv2 = f.inv(a[2]).expect("a2 != 0");
            let neg_inv2 = f.neg(inv2);
            let mut z = f.mul(a[0], neg_inv2);
            let step = f.mul(a[1], neg_inv2);
            let mut base = 0u64;
            for _ in 0..q {
                visit(base + z);
                z = f.add(z, step);
                base += q;
            }
            visit(q * q + f.mul(a[1], neg_inv2));
        } else if a[1] != 0 {
            // (1, y, z): y = -a0 / a1 fixed, z free; plus (0, 0, 1).
            let y = f.mul(a[0], f.neg(f.inv(a[1]).expect("a1 != 0")));
            let base = y * q;
            for z in 0..q {
                visit(base + z);
            }
            visit(q * q + q);
        } else {
            // x0 = 0: the line at infinity, (0, 1, z) and (0, 0, 1).
            for z in 0..q {
                visit(q * q + z);
            }
            visit(q * q + q);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn plane(q: u64) -> Plane {
        Plane::new(q).unwrap()
    }

    #[test]
    fn rejects_non_prime_order() {
        assert!(matches!(Plane::new(9), Err(Error::NotPrime(9))));
        assert!(matches!(Plane::new(1), Err(Error::NotPrime(1))));
    }

    #[test]
    fn point_from_index_examples() {
        let pl = plane(3);
        assert_eq!(pl.point_from_index(0).unwrap().coords(), [1, 0, 0]);
        assert_eq!(pl.point_from_index(12).unwrap().coords(), [0, 0, 1]);
        assert_eq!(pl.point_from_index(4).unwrap().coords(), [1, 1, 1]);
        assert!(matches!(
            pl.point_from_index(13),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn index_from_point_examples() {
        let pl = plane(3);
        assert_eq!(pl.index_from_point([2, 0, 0]).unwrap(), 0);
        assert_eq!(pl.index_from_point([0, 2, 1]).unwrap(), 11);
        assert!(matches!(
            pl.index_from_point([0, 0, 0]),
            Err(Error::ZeroTriple)
        ));
        let pl5 = plane(5);
        assert_eq!(pl5.index_from_point([1, 4, 3]).unwrap(), 23);
    }

    #[test]
    fn enumeration_is_a_bijection() {
        // Exhaustive for q <= 101, sampled above that.
        for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
            73, 79, 83, 89, 97, 101]
        {
            let pl = plane(q);
            for i in 0..pl.n_points() {
                let p = pl.point_from_index(i).unwrap();
                assert_eq!(pl.index_of(p), i);
                assert_eq!(pl.index_from_point(p.coords()).unwrap(), i);
            }
        }
        let pl = plane(4999);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let i = rng.gen_range(0..pl.n_points());
            let p = pl.point_from_index(i).unwrap();
            assert_eq!(pl.index_of(p), i);
        }
    }

    #[test]
    fn line_through_examples() {
        let pl = plane(3);
        let p = |t| pl.point(t).unwrap();
        assert_eq!(
            pl.line_through(p([1, 0, 0]), p([0, 1, 0])).unwrap().coords(),
            [0, 0, 1]
        );
        assert_eq!(
            pl.line_through(p([1, 0, 0]), p([0, 0, 1])).unwrap().coords(),
            [0, 1, 0]
        );
        assert_eq!(
            pl.line_through(p([1, 0, 1]), p([1, 1, 0])).unwrap().coords(),
            [1, 2, 2]
        );
        assert!(matches!(
            pl.line_through(p([1, 0, 1]), p([2, 0, 2])),
            Err(Error::CoincidentPoints)
        ));
    }

    #[test]
    fn points_on_line_examples() {
        let pl = plane(3);
        let idx = |t| pl.index_from_point(t).unwrap();
        let on = |t| {
            let mut v = pl.points_on_line(pl.line(t).unwrap());
            v.sort_unstable();
            v
        };
        let mut expect1 = vec![
            idx([1, 0, 0]),
            idx([1, 1, 0]),
            idx([1, 2, 0]),
            idx([0, 1, 0]),
        ];
        expect1.sort_unstable();
        assert_eq!(on([0, 0, 1]), expect1);

        let mut expect2 = vec![
            idx([1, 0, 1]),
            idx([1, 1, 0]),
            idx([1, 2, 2]),
            idx([0, 1, 2]),
        ];
        expect2.sort_unstable();
        assert_eq!(on([1, 2, 2]), expect2);

        let pl13 = plane(13);
        let l = pl13.line([5, 1, 9]).unwrap();
        assert_eq!(pl13.points_on_line(l).len(), 14);
    }

    #[test]
    fn points_on_line_satisfy_incidence_and_are_distinct() {
        for q in [2u64, 3, 5, 7, 13] {
            let pl = plane(q);
            for li in 0..pl.n_lines() {
                // Lines and points share the same canonical enumeration.
                let l = Line(pl.point_from_index(li).unwrap().coords());
                let pts = pl.points_on_line(l);
                assert_eq!(pts.len(), q as usize + 1);
                let mut sorted = pts.clone();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), pts.len());
                let f = pl.field();
                for &i in &pts {
                    let c = pl.point_from_index(i).unwrap().coords();
                    let a = l.coords();
                    let mut acc = 0;
                    for k in 0..3 {
                        acc = f.add(acc, f.mul(a[k], c[k]));
                    }
                    assert_eq!(acc, 0);
                }
            }
        }
    }

    #[test]
    fn every_point_lies_on_q_plus_1_lines() {
        // Dual regularity, exhaustively for small q: lines share the
        // canonical enumeration with points.
        for q in [2u64, 3, 5, 7] {
            let pl = plane(q);
            for pi in 0..pl.n_points() {
                let p = pl.point_from_index(pi).unwrap();
                let mut lines_through = 0;
                for li in 0..pl.n_lines() {
                    let l = Line(pl.point_from_index(li).unwrap().coords());
                    if pl.points_on_line(l).contains(&pi) {
                        lines_through += 1;
                    }
                }
                assert_eq!(lines_through, q + 1, "point {p} at q={q}");
            }
        }
    }

    #[test]
    fn incidence_double_count() {
        // Sum of line sizes = (q^2 + q + 1)(q + 1), exhaustively for q <= 13.
        for q in [2u64, 3, 5, 7, 11, 13] {
            let pl = plane(q);
            let total: u64 = (0..pl.n_lines())
                .map(|li| {
                    let l = Line(pl.point_from_index(li).unwrap().coords());
                    pl.points_on_line(l).len() as u64
                })
                .sum();
            assert_eq!(total, pl.n_points() * (q + 1));
        }
    }

    #[test]
    fn collinear_examples() {
        let pl = plane(3);
        let p = |t| pl.point(t).unwrap();
        assert!(pl.collinear(p([1, 0, 0]), p([0, 1, 0]), p([1, 1, 0])));
        assert!(!pl.collinear(p([1, 0, 0]), p([0, 1, 0]), p([0, 0, 1])));
        assert!(pl.collinear(p([1, 0, 1]), p([1, 1, 0]), p([1, 2, 2])));
        // Repeated arguments are always collinear.
        assert!(pl.collinear(p([1, 0, 1]), p([1, 0, 1]), p([0, 0, 1])));
    }

    #[test]
    fn collinearity_is_symmetric_and_scale_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [3u64, 5, 7, 101] {
            let pl = plane(q);
            for _ in 0..2_000 {
                let mut pts = Vec::new();
                for _ in 0..3 {
                    let i = rng.gen_range(0..pl.n_points());
                    pts.push(pl.point_from_index(i).unwrap());
                }
                let c0 = pl.collinear(pts[0], pts[1], pts[2]);
                assert_eq!(c0, pl.collinear(pts[1], pts[0], pts[2]));
                assert_eq!(c0, pl.collinear(pts[2], pts[1], pts[0]));
                assert_eq!(c0, pl.collinear(pts[0], pts[2], pts[1]));
                // Rescale one argument by a random unit.
                let s = rng.gen_range(1..q);
                let f = pl.field();
                let c = pts[0].coords();
                let scaled = [f.mul(c[0], s), f.mul(c[1], s), f.mul(c[2], s)];
                assert_eq!(c0, pl.collinear_raw(scaled, pts[1].coords(), pts[2].coords()));
            }
        }
    }

    #[test]
    fn line_through_matches_collinearity() {
        // For random distinct P, Q: both lie on line_through(P, Q), and a
        // third point R is on that line iff collinear(P, Q, R).
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for q in [3u64, 5, 7, 101] {
            let pl = plane(q);
            for _ in 0..(10_000 / 4) {
                let i = rng.gen_range(0..pl.n_points());
                let j = rng.gen_range(0..pl.n_points());
                if i == j {
                    continue;
                }
                let p = pl.point_from_index(i).unwrap();
                let r = pl.point_from_index(j).unwrap();
                let l = pl.line_through(p, r).unwrap();
                let pts = pl.points_on_line(l);
                assert!(pts.contains(&i));
                assert!(pts.contains(&j));
                let k = rng.gen_range(0..pl.n_points());
                let s = pl.point_from_index(k).unwrap();
                assert_eq!(pts.contains(&k), pl.collinear(p, r, s));
            }
        }
    }
}

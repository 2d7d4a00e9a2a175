//! The Singer point order: a cyclic enumeration of PG(2,q) induced by
//! multiplication by a primitive element of GF(q³).
//!
//! With g = x in GF(q)[x]/(f) for the deterministic primitive cubic f, the
//! triples of 1, g, g², … g^(q²+q) hit every projective point exactly once,
//! because (q³ − 1)/(q − 1) = q² + q + 1. The successor map of the resulting
//! order is a collineation (it is induced by a GF(q)-linear map), which the
//! sampling check below exercises.

use rand::Rng;

use crate::construct::{OrderKind, PointOrder};
use crate::field::{find_primitive_cubic, CubicExt, CubicPolynomial, EXT_ONE, EXT_X};
use crate::plane::{Plane, PointIndex};
use crate::Result;

/// The Singer cyclic order of all plane points, together with the primitive
/// cubic that generated it. Immutable once built.
#[derive(Clone, Debug)]
pub struct SingerOrder {
    plane: Plane,
    poly: CubicPolynomial,
    permutation: Vec<PointIndex>,
}

impl SingerOrder {
    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    pub fn q(&self) -> u64 {
        self.plane.q()
    }

    pub fn poly(&self) -> CubicPolynomial {
        self.poly
    }

    pub fn permutation(&self) -> &[PointIndex] {
        &self.permutation
    }

    pub fn into_point_order(self) -> PointOrder {
        PointOrder {
            kind: OrderKind::Singer,
            permutation: self.permutation,
        }
    }

    /// Position of each point in the cycle (the inverse permutation).
    fn positions(&self) -> Vec<u64> {
        let mut pos = vec![0u64; self.permutation.len()];
        for (at, &p) in self.permutation.iter().enumerate() {
            pos[p as usize] = at as u64;
        }
        pos
    }
}

/// Build the Singer order for a prime q: entry i is the point of gⁱ where
/// g = x modulo the lexicographically smallest primitive cubic. Entry 0 is
/// always the point (1,0,0).
pub fn singer_point_order(plane: &Plane) -> Result<SingerOrder> {
    let field = plane.field();
    let poly = find_primitive_cubic(field)?;
    let ext = CubicExt::new(field, poly);
    let n = plane.n_points();
    let mut permutation = Vec::with_capacity(n as usize);
    let mut seen = vec![false; n as usize];
    let mut g = EXT_ONE;
    for step in 0..n {
        let idx = plane
            .index_from_point(g)
            .expect("powers of a unit are nonzero");
        assert!(
            !seen[idx as usize],
            "Singer orbit revisited point {idx} at step {step} for q={}",
            plane.q()
        );
        seen[idx as usize] = true;
        permutation.push(idx);
        g = ext.mul(g, EXT_X);
    }
    // The orbit closes exactly after q^2+q+1 steps: g^(q^2+q+1) is a scalar.
    debug_assert_eq!(plane.index_from_point(g).unwrap(), permutation[0]);
    Ok(SingerOrder {
        plane: *plane,
        poly,
        permutation,
    })
}

/// Sanity-sample the collineation property of the successor map σ (cycle
/// position i → i + 1): for random collinear triples (P, Q, R), the images
/// (σP, σQ, σR) must again be collinear. Returns true iff every sampled
/// triple is preserved. Repeated points in a triple are allowed.
pub fn singer_is_collineation_sample(
    order: &SingerOrder,
    trials: u64,
    rng: &mut impl Rng,
) -> bool {
    let plane = order.plane;
    let n = plane.n_points();
    let pos = order.positions();
    let succ = |i: PointIndex| order.permutation[((pos[i as usize] + 1) % n) as usize];
    for _ in 0..trials {
        // A random line and three random (not necessarily distinct) points
        // on it form the collinear triple.
        let i = rng.gen_range(0..n);
        let j = loop {
            let j = rng.gen_range(0..n);
            if j != i {
                break j;
            }
        };
        let p = plane.point_from_index(i).expect("in range");
        let q = plane.point_from_index(j).expect("in range");
        let line = plane.line_through(p, q).expect("distinct points");
        let pts = plane.points_on_line(line);
        let a = pts[rng.gen_range(0..pts.len())];
        let b = pts[rng.gen_range(0..pts.len())];
        let c = pts[rng.gen_range(0..pts.len())];
        let images = [succ(a), succ(b), succ(c)]
            .map(|k| plane.point_from_index(k).expect("permutation entry"));
        if !plane.collinear(images[0], images[1], images[2]) {
            return false;
        }
    }
    true
}

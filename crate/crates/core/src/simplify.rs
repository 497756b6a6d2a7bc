//! Greedy mu-simplification.
//!
//! The simplified curve keeps a subsequence of the input vertices. Starting
//! from the first vertex, the scan advances to the first vertex lying farther
//! than `mu` from the current one and keeps it; the last input vertex is
//! always kept. Every dropped vertex therefore lies within `mu` of the kept
//! vertex preceding it, and every simplified edge except the last is longer
//! than `mu`.

use crate::geometry::{Curve, Norm};

#[derive(Debug, Clone, PartialEq)]
pub struct Simplification {
    pub curve: Curve,
    /// `index_map[k]` is the input index of simplified vertex `k`.
    pub index_map: Vec<usize>,
    pub mu: f64,
}

impl Simplification {
    /// Checks order preservation, endpoint retention and the covering
    /// property against the original curve.
    pub fn is_valid_for(&self, original: &Curve, norm: Norm) -> bool {
        let map = &self.index_map;
        let n = original.len();
        let ordered = map.windows(2).all(|w| w[0] < w[1]);
        let ends = map.first() == Some(&0) && map.last() == Some(&(n - 1));
        let covered = map.windows(2).all(|w| {
            (w[0]..w[1]).all(|t| norm.dist(original.vertex(w[0]), original.vertex(t)) <= self.mu)
        });
        let copies = map
            .iter()
            .enumerate()
            .all(|(k, &i)| self.curve.vertex(k) == original.vertex(i));
        ordered && ends && covered && copies && self.curve.len() == map.len()
    }
}

/// Greedy mu-simplification in one linear pass.
///
/// Comparisons follow the covering rule exactly: a vertex at distance `<= mu`
/// from the current anchor is dropped, the first one at distance `> mu`
/// becomes the next anchor.
pub fn greedy_simplify(c: &Curve, mu: f64, norm: Norm) -> Simplification {
    let n = c.len();
    let mut index_map = vec![0usize];
    let mut anchor = 0;
    for t in 1..n {
        if norm.dist(c.vertex(anchor), c.vertex(t)) > mu {
            anchor = t;
            index_map.push(t);
        }
    }
    if anchor != n - 1 {
        index_map.push(n - 1);
    }
    Simplification {
        curve: c.select(&index_map),
        index_map,
        mu,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_traced_example() {
        let c = Curve::from_rows(&[[0.0, 0.0], [0.4, 0.0], [1.2, 0.0], [2.0, 0.0]]).unwrap();
        let s = greedy_simplify(&c, 1.0, Norm::L2);
        assert_eq!(s.index_map, vec![0, 2, 3]);
        assert_eq!(
            s.curve,
            Curve::from_rows(&[[0.0, 0.0], [1.2, 0.0], [2.0, 0.0]]).unwrap()
        );
        assert!(s.is_valid_for(&c, Norm::L2));
    }

    #[test]
    fn zero_mu_is_identity_on_distinct_vertices() {
        let c = Curve::from_rows(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let s = greedy_simplify(&c, 0.0, Norm::L2);
        assert_eq!(s.index_map, vec![0, 1, 2, 3]);
    }

    #[test]
    fn zero_mu_collapses_duplicate_runs() {
        let c = Curve::from_rows(&[[0.0], [0.0], [1.0], [1.0], [1.0], [2.0]]).unwrap();
        assert_eq!(greedy_simplify(&c, 0.0, Norm::L2).index_map, vec![0, 2, 5]);
        let c = Curve::from_rows(&[[0.0], [1.0], [1.0]]).unwrap();
        assert_eq!(greedy_simplify(&c, 0.0, Norm::L2).index_map, vec![0, 1, 2]);
    }

    #[test]
    fn large_mu_keeps_endpoints() {
        let c = Curve::from_rows(&[[0.0, 0.0], [1.0, 2.0], [2.0, -1.0], [3.0, 0.0]]).unwrap();
        let s = greedy_simplify(&c, 100.0, Norm::L2);
        assert_eq!(s.index_map, vec![0, 3]);
    }

    #[test]
    fn single_vertex() {
        let c = Curve::from_rows(&[[4.0, 2.0]]).unwrap();
        let s = greedy_simplify(&c, 1.0, Norm::L2);
        assert_eq!(s.index_map, vec![0]);
        assert_eq!(s.curve, c);
    }

    #[test]
    fn last_vertex_becomes_anchor_without_duplication() {
        let c = Curve::from_rows(&[[0.0], [0.5], [3.0]]).unwrap();
        assert_eq!(greedy_simplify(&c, 1.0, Norm::L2).index_map, vec![0, 2]);
    }
}

//! Vertex enumeration for sections of the probability simplex,
//! `{ m >= 0, sum m = 1, h_k . m <= 0 for every cut h_k }`, by the
//! double description method.
//!
//! Vertices start as the Dirac points. Each cut keeps the vertices on its
//! nonpositive side and adds, for every edge crossing the hyperplane, the
//! crossing point. Two vertices span an edge iff no third vertex is tight on
//! every constraint the two share (the combinatorial adjacency test).

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::rational::{dot, Rational};

/// Tight constraints of a vertex: bit `j < n` is `m_j = 0`, bit `n + k` is cut `k`.
type TightSet = u64;

struct Vertex {
    point: Vec<Rational>,
    tight: TightSet,
}

/// Vertices in lexicographic order, without duplicates; empty if the section is empty.
///
/// Panics if `n + cuts.len() > 64`.
pub fn simplex_section_vertices(n: usize, cuts: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    assert!(
        n + cuts.len() <= 64,
        "too many constraints for vertex enumeration"
    );
    let all_states: TightSet = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut vertices: Vec<Vertex> = (0..n)
        .map(|j| {
            let mut point = vec![Rational::zero(); n];
            point[j] = Rational::from_integer(1.into());
            Vertex {
                point,
                tight: all_states & !(1u64 << j),
            }
        })
        .collect();

    for (k, cut) in cuts.iter().enumerate() {
        let bit = 1u64 << (n + k);
        let levels: Vec<Rational> = vertices.iter().map(|v| dot(cut, &v.point)).collect();
        if levels.iter().all(|l| !l.is_positive()) {
            for (v, l) in vertices.iter_mut().zip(&levels) {
                if l.is_zero() {
                    v.tight |= bit;
                }
            }
            continue;
        }
        let mut added = Vec::new();
        for (p, lp) in vertices
            .iter()
            .zip(&levels)
            .filter(|(_, l)| l.is_positive())
        {
            for (q, lq) in vertices
                .iter()
                .zip(&levels)
                .filter(|(_, l)| l.is_negative())
            {
                let common = p.tight & q.tight;
                let adjacent = vertices.iter().all(|r| {
                    std::ptr::eq(r, p) || std::ptr::eq(r, q) || r.tight & common != common
                });
                if !adjacent {
                    continue;
                }
                // Point on [p, q] where the cut vanishes.
                let t = lp / (lp - lq);
                let point = p
                    .point
                    .iter()
                    .zip(&q.point)
                    .map(|(a, b)| a + &t * (b - a))
                    .collect();
                added.push(Vertex {
                    point,
                    tight: common | bit,
                });
            }
        }
        let mut kept: Vec<Vertex> = vertices
            .into_iter()
            .zip(levels)
            .filter(|(_, l)| !l.is_positive())
            .map(|(mut v, l)| {
                if l.is_zero() {
                    v.tight |= bit;
                }
                v
            })
            .collect();
        kept.extend(added);
        vertices = dedup(kept);
    }

    let mut points: Vec<Vec<Rational>> = vertices.into_iter().map(|v| v.point).collect();
    points.sort();
    points
}

fn dedup(vertices: Vec<Vertex>) -> Vec<Vertex> {
    let mut merged: BTreeMap<Vec<Rational>, TightSet> = BTreeMap::new();
    for v in vertices {
        *merged.entry(v.point).or_insert(0) |= v.tight;
    }
    merged
        .into_iter()
        .map(|(point, tight)| Vertex { point, tight })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    /// Brute force: solve every choice of `n - 1` tight inequalities with the
    /// normalization and keep the feasible solutions.
    fn brute_force(n: usize, cuts: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let mut ineqs: Vec<Vec<Rational>> = (0..n)
            .map(|j| {
                let mut e = vec![Rational::zero(); n];
                e[j] = int(-1);
                e
            })
            .collect();
        ineqs.extend(cuts.iter().cloned());
        let mut found = std::collections::BTreeSet::new();
        let k = n - 1;
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mut a = vec![vec![int(1); n]];
            let mut b = vec![int(1)];
            for &i in &idx {
                a.push(ineqs[i].clone());
                b.push(int(0));
            }
            if let Some(x) = linalg::solve(&a, &b, n) {
                if linalg::rank(&a) == n && ineqs.iter().all(|h| !dot(h, &x).is_positive()) {
                    found.insert(x);
                }
            }
            // next combination
            let total = ineqs.len();
            let mut i = k;
            loop {
                if i == 0 {
                    return found.into_iter().collect();
                }
                i -= 1;
                if idx[i] != i + total - k {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
            if k == 0 {
                return found.into_iter().collect();
            }
        }
    }

    #[test]
    fn unconstrained_simplex_has_dirac_vertices() {
        let v = simplex_section_vertices(3, &[]);
        assert_eq!(v.len(), 3);
        assert_eq!(v[0], vec![int(0), int(0), int(1)]);
    }

    #[test]
    fn opposing_cuts_pin_the_midpoint() {
        let cuts = vec![vec![int(1), int(-1)], vec![int(-1), int(1)]];
        assert_eq!(
            simplex_section_vertices(2, &cuts),
            vec![vec![ratio(1, 2), ratio(1, 2)]]
        );
    }

    #[test]
    fn infeasible_cut_empties_the_section() {
        assert!(simplex_section_vertices(2, &[vec![int(1), int(1)]]).is_empty());
    }

    #[test]
    fn single_state() {
        assert_eq!(
            simplex_section_vertices(1, &[vec![int(0)]]),
            vec![vec![int(1)]]
        );
        assert!(simplex_section_vertices(1, &[vec![int(2)]]).is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]
        #[test]
        fn matches_brute_force(
            n in 1usize..=4,
            raw in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 0..5),
        ) {
            let cuts: Vec<Vec<Rational>> = raw.iter().map(|c| c[..n].iter().map(|&v| int(v)).collect()).collect();
            prop_assert_eq!(simplex_section_vertices(n, &cuts), brute_force(n, &cuts));
        }
    }
}

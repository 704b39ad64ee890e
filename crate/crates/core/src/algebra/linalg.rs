//! Exact linear algebra over the rationals, for sparse systems with few
//! unknowns.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::poly::Rational;

/// A sparse row: column index to nonzero entry.
pub type Row = BTreeMap<usize, Rational>;

/// Basis of the nullspace of the system given by `rows` over `ncols`
/// unknowns. Each basis vector has a 1 in its free column.
pub fn nullspace(rows: &[Row], ncols: usize) -> Vec<Vec<Rational>> {
    // reduced row echelon form, pivot rows kept sparse
    let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
    for row in rows {
        let mut r = row.clone();
        r.retain(|_, v| !v.is_zero());
        // eliminate existing pivots
        loop {
            let hit = r.keys().find(|c| pivots.contains_key(c)).copied();
            let Some(c) = hit else { break };
            let factor = r[&c].clone();
            for (k, v) in &pivots[&c] {
                let e = r.entry(*k).or_insert_with(Rational::zero);
                *e -= &factor * v;
            }
            r.retain(|_, v| !v.is_zero());
        }
        let Some((&lead, lv)) = r.iter().next() else {
            continue;
        };
        let inv = Rational::one() / lv.clone();
        for v in r.values_mut() {
            *v *= &inv;
        }
        // back-substitute into earlier pivots
        for prow in pivots.values_mut() {
            if let Some(f) = prow.get(&lead).cloned() {
                for (k, v) in &r {
                    let e = prow.entry(*k).or_insert_with(Rational::zero);
                    *e -= &f * v;
                }
                prow.retain(|_, v| !v.is_zero());
            }
        }
        pivots.insert(lead, r);
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains_key(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (p, prow) in &pivots {
            if let Some(c) = prow.get(&free) {
                v[*p] = -c.clone();
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    fn row(entries: &[(usize, i64)]) -> Row {
        entries.iter().map(|&(c, v)| (c, int(v))).collect()
    }

    fn apply(rows: &[Row], v: &[Rational]) -> Vec<Rational> {
        rows.iter()
            .map(|r| r.iter().map(|(c, a)| a * &v[*c]).sum())
            .collect()
    }

    #[test]
    fn one_dimensional_kernel() {
        let rows = vec![row(&[(0, 1), (1, 2), (2, 3)]), row(&[(0, 4), (1, 5), (2, 6)])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        assert!(apply(&rows, &ns[0]).iter().all(|x| x.is_zero()));
        assert_eq!(ns[0], vec![int(1), int(-2), int(1)]);
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let rows = vec![row(&[(0, 1)]), row(&[(1, 1), (0, 3)])];
        assert!(nullspace(&rows, 2).is_empty());
    }

    #[test]
    fn no_rows() {
        assert_eq!(nullspace(&[], 2).len(), 2);
    }
}

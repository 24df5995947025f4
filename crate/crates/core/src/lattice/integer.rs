//! Small-integer linear algebra for exponent lattices.

/// Brings `rows` to row echelon form with unimodular integer row
/// operations, applying the same operations to `track`. Pivots end up
/// positive. Returns the pivot column of each nonzero row, in order.
pub(crate) fn echelon(rows: &mut [Vec<i64>], track: &mut [Vec<i64>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..ncols {
        if top == rows.len() {
            break;
        }
        loop {
            let best = (top..rows.len())
                .filter(|&i| rows[i][c] != 0)
                .min_by_key(|&i| rows[i][c].abs());
            let Some(b) = best else {
                break;
            };
            rows.swap(top, b);
            track.swap(top, b);
            let mut done = true;
            for j in top + 1..rows.len() {
                if rows[j][c] == 0 {
                    continue;
                }
                let k = rows[j][c] / rows[top][c];
                let (head, tail) = rows.split_at_mut(j);
                axpy(&mut tail[0], -k, &head[top]);
                let (thead, ttail) = track.split_at_mut(j);
                axpy(&mut ttail[0], -k, &thead[top]);
                if rows[j][c] != 0 {
                    done = false;
                }
            }
            if done {
                if rows[top][c] < 0 {
                    negate(&mut rows[top]);
                    negate(&mut track[top]);
                }
                pivots.push(c);
                top += 1;
                break;
            }
        }
    }
    pivots
}

fn axpy(dst: &mut [i64], k: i64, src: &[i64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = d
            .checked_add(k.checked_mul(*s).expect("exponent overflow"))
            .expect("exponent overflow");
    }
}

fn negate(v: &mut [i64]) {
    for x in v.iter_mut() {
        *x = -*x;
    }
}

/// Rank of an integer matrix (equal over the integers and the rationals).
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m = rows.to_vec();
    let mut t = vec![Vec::new(); m.len()];
    echelon(&mut m, &mut t).len()
}

pub(crate) fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
        m.iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(integer_rank(&[vec![2, 4], vec![1, 2]]), 1);
        assert_eq!(integer_rank(&[vec![2, 3], vec![3, 5]]), 2);
        assert_eq!(integer_rank(&[]), 0);
    }

    proptest! {
        #[test]
        fn echelon_preserves_row_lattice(
            m in prop::collection::vec(prop::collection::vec(-5i64..=5, 4), 1..5),
            x in prop::collection::vec(-3i64..=3, 4),
        ) {
            let mut e = m.clone();
            let mut u = identity(m.len());
            let piv = echelon(&mut e, &mut u);
            // U * M = E, so E x = U (M x).
            let mx = mat_vec(&m, &x);
            prop_assert_eq!(mat_vec(&e, &x), mat_vec(&u, &mx));
            for (k, &c) in piv.iter().enumerate() {
                prop_assert!(e[k][c] > 0);
                prop_assert!(e[k][..c].iter().all(|&v| v == 0));
            }
            for row in &e[piv.len()..] {
                prop_assert!(row.iter().all(|&v| v == 0));
            }
        }
    }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;

/// Exact rank of a rational matrix by fraction-free (Bareiss) elimination.
///
/// Each row is first scaled by the lcm of its denominators, then all
/// arithmetic stays in the integers; the Bareiss step divides exactly by the
/// previous pivot.
pub fn exact_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev_pivot = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot_row) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col].clone();
        for r in rank + 1..nrows {
            let factor = m[r][col].clone();
            for c in col..ncols {
                let v = &pivot * &m[r][c] - &factor * &m[rank][c];
                m[r][c] = v / &prev_pivot;
            }
        }
        prev_pivot = pivot;
        rank += 1;
    }
    rank
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denominator()));
    row.iter()
        .map(|x| x.numerator() * (&lcm / x.denominator()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
            .collect()
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(exact_rank(&m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(exact_rank(&[]), 0);
    }

    #[test]
    fn canonical_symplectic_block() {
        let j = m(&[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]);
        assert_eq!(exact_rank(&j), 4);
    }

    #[test]
    fn degenerate_poisson_matrix() {
        let j = m(&[
            &[0, 1, 0, -1],
            &[-1, 0, 1, 0],
            &[0, -1, 0, 1],
            &[1, 0, -1, 0],
        ]);
        assert_eq!(exact_rank(&j), 2);
    }

    #[test]
    fn rational_entries() {
        let half = Rational::new(1, 2).unwrap();
        let rows = vec![
            vec![half.clone(), Rational::from(1)],
            vec![Rational::from(1), Rational::from(2)],
        ];
        assert_eq!(exact_rank(&rows), 1);
    }
}

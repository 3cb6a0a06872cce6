//! Agreement between two partitions of the same journals: χ², Cramér's V,
//! Rajski's coherence and the adjusted Rand index.

use crate::error::{Error, Result};
use crate::model::{AssocReport, ContingencyTable, Partition};

fn check_aligned(pa: &Partition, pb: &Partition) -> Result<()> {
    if pa.len() != pb.len() {
        return Err(Error::PartitionLength {
            expected: pa.len(),
            found: pb.len(),
        });
    }
    Ok(())
}

/// Rows are communities of `pa`, columns communities of `pb`.
pub fn contingency(pa: &Partition, pb: &Partition) -> Result<ContingencyTable> {
    check_aligned(pa, pb)?;
    let (r, c) = (pa.n_communities(), pb.n_communities());
    let mut counts = vec![0u64; r * c];
    for (&a, &b) in pa.ids().iter().zip(pb.ids()) {
        counts[(a as usize - 1) * c + (b as usize - 1)] += 1;
    }
    ContingencyTable::new(r, c, counts)
}

/// Pearson χ² without continuity correction, with `(r−1)(c−1)` degrees of
/// freedom. A single row or column gives `(0, 0)`.
pub fn chi_square(t: &ContingencyTable) -> Result<(f64, u64)> {
    if t.total() == 0 {
        return Err(Error::Invalid("empty contingency table".into()));
    }
    if t.rows() < 2 || t.cols() < 2 {
        return Ok((0.0, 0));
    }
    let total = t.total() as f64;
    let mut chi2 = 0.0;
    for (r, &rm) in t.row_margins().iter().enumerate() {
        for (c, &cm) in t.col_margins().iter().enumerate() {
            let expected = rm as f64 * cm as f64 / total;
            if expected > 0.0 {
                let diff = t.get(r, c) as f64 - expected;
                chi2 += diff * diff / expected;
            }
        }
    }
    let df = (t.rows() as u64 - 1) * (t.cols() as u64 - 1);
    Ok((chi2, df))
}

/// `V = √(χ² / (n · (min(r, c) − 1)))`.
pub fn cramers_v(t: &ContingencyTable) -> Result<f64> {
    let k = t.rows().min(t.cols());
    if k < 2 {
        return Err(Error::CramersUndefined {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    let (chi2, _) = chi_square(t)?;
    cramers_v_from_chi2(chi2, t.total(), t.rows(), t.cols())
}

/// Cramér's V from an already computed χ² over `n` observations in an
/// `rows × cols` table.
pub fn cramers_v_from_chi2(chi2: f64, n: u64, rows: usize, cols: usize) -> Result<f64> {
    let k = rows.min(cols);
    if k < 2 {
        return Err(Error::CramersUndefined { rows, cols });
    }
    if n == 0 || chi2.is_nan() || chi2 < 0.0 {
        return Err(Error::Invalid(format!("χ²={chi2} over n={n} observations")));
    }
    Ok((chi2 / (n as f64 * (k - 1) as f64)).sqrt().min(1.0))
}

fn entropy<I: IntoIterator<Item = u64>>(counts: I, total: f64) -> f64 {
    counts
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum()
}

/// Rajski's coherence in its three forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rajski {
    /// `I / H(A,B)`
    pub sym: f64,
    /// `I / H(A)`: how much of the row classification the columns explain.
    pub left: f64,
    /// `I / H(B)`: how well the row classification predicts the columns.
    pub right: f64,
}

/// Rajski's coherence from the table's empirical entropies (natural log).
///
/// A zero-entropy side (a single community) is only meaningful when both
/// sides are single communities, in which case every variant is 1.
pub fn rajski(t: &ContingencyTable) -> Result<Rajski> {
    if t.total() == 0 {
        return Err(Error::Invalid("empty contingency table".into()));
    }
    let total = t.total() as f64;
    let ha = entropy(t.row_margins().iter().copied(), total);
    let hb = entropy(t.col_margins().iter().copied(), total);
    let cells = (0..t.rows()).flat_map(|r| (0..t.cols()).map(move |c| (r, c)));
    let hab = entropy(cells.map(|(r, c)| t.get(r, c)), total);
    let single_a = t.row_margins().iter().filter(|&&m| m > 0).count() <= 1;
    let single_b = t.col_margins().iter().filter(|&&m| m > 0).count() <= 1;
    if single_a && single_b {
        return Ok(Rajski {
            sym: 1.0,
            left: 1.0,
            right: 1.0,
        });
    }
    if single_a || single_b {
        return Err(Error::RajskiUndefined(
            "one partition has a single community",
        ));
    }
    // I ≤ min(H(A), H(B)) analytically; clamp away rounding overshoot
    let mi = (ha + hb - hab).max(0.0).min(ha.min(hb));
    Ok(Rajski {
        sym: (mi / hab).clamp(0.0, 1.0),
        left: (mi / ha).clamp(0.0, 1.0),
        right: (mi / hb).clamp(0.0, 1.0),
    })
}

fn pairs(x: u64) -> f64 {
    (x as f64) * (x as f64 - 1.0) / 2.0
}

/// Adjusted Rand index; 0 when both partitions are trivial.
pub fn adjusted_rand(pa: &Partition, pb: &Partition) -> Result<f64> {
    let t = contingency(pa, pb)?;
    let n = t.total();
    let mut index = 0.0;
    for r in 0..t.rows() {
        for c in 0..t.cols() {
            index += pairs(t.get(r, c));
        }
    }
    let sum_a: f64 = t.row_margins().iter().map(|&m| pairs(m)).sum();
    let sum_b: f64 = t.col_margins().iter().map(|&m| pairs(m)).sum();
    let total_pairs = pairs(n);
    let expected = if total_pairs > 0.0 {
        sum_a * sum_b / total_pairs
    } else {
        0.0
    };
    let max_index = 0.5 * (sum_a + sum_b);
    let denom = max_index - expected;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok((index - expected) / denom)
}

/// Every index for one pair of partitions. Cramér's V is reported as 0 when
/// either partition has a single community.
pub fn assoc_report(pa: &Partition, pb: &Partition) -> Result<AssocReport> {
    let t = contingency(pa, pb)?;
    let (chi2, df) = chi_square(&t)?;
    let cramers_v = match cramers_v(&t) {
        Ok(v) => v,
        Err(Error::CramersUndefined { .. }) => 0.0,
        Err(e) => return Err(e),
    };
    let r = rajski(&t)?;
    Ok(AssocReport {
        chi2,
        df,
        cramers_v,
        rajski_sym: r.sym,
        rajski_left: r.left,
        rajski_right: r.right,
        ari: adjusted_rand(pa, pb)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ids: &[u32]) -> Partition {
        Partition::new(ids.to_vec()).unwrap()
    }

    #[test]
    fn identical_partitions_table() {
        let t = contingency(&p(&[1, 1, 2]), &p(&[1, 1, 2])).unwrap();
        assert_eq!(
            (t.get(0, 0), t.get(0, 1), t.get(1, 0), t.get(1, 1)),
            (2, 0, 0, 1)
        );
    }

    #[test]
    fn crossed_design() {
        let t = contingency(&p(&[1, 1, 2, 2]), &p(&[1, 2, 1, 2])).unwrap();
        assert!((0..2).all(|r| (0..2).all(|c| t.get(r, c) == 1)));
        let (chi2, df) = chi_square(&t).unwrap();
        assert_eq!((chi2, df), (0.0, 1));
        assert_eq!(cramers_v(&t).unwrap(), 0.0);
        let r = rajski(&t).unwrap();
        assert_eq!((r.sym, r.left, r.right), (0.0, 0.0, 0.0));
    }

    #[test]
    fn misaligned_partitions() {
        let err = contingency(&p(&[1, 2]), &p(&[1, 2, 1])).unwrap_err();
        assert!(err.to_string().contains("partition length mismatch"));
    }

    #[test]
    fn proportional_rows_have_zero_chi2() {
        let t = ContingencyTable::new(2, 3, vec![1, 2, 3, 2, 4, 6]).unwrap();
        assert!(chi_square(&t).unwrap().0.abs() < 1e-12);
    }

    #[test]
    fn single_row_is_degenerate() {
        let t = ContingencyTable::new(1, 3, vec![1, 2, 3]).unwrap();
        assert_eq!(chi_square(&t).unwrap(), (0.0, 0));
        assert!(cramers_v(&t).is_err());
        assert!(rajski(&t).is_err());
    }

    #[test]
    fn perfect_association() {
        let a = p(&[1, 1, 2, 2, 3, 3]);
        let t = contingency(&a, &a).unwrap();
        assert!((cramers_v(&t).unwrap() - 1.0).abs() < 1e-12);
        let r = rajski(&t).unwrap();
        assert!(
            (r.sym - 1.0).abs() < 1e-12
                && (r.left - 1.0).abs() < 1e-12
                && (r.right - 1.0).abs() < 1e-12
        );
        assert_eq!(adjusted_rand(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn both_trivial() {
        let a = p(&[1, 1, 1]);
        assert_eq!(adjusted_rand(&a, &a).unwrap(), 0.0);
        let r = rajski(&contingency(&a, &a).unwrap()).unwrap();
        assert_eq!(r.sym, 1.0);
    }

    #[test]
    fn left_and_right_follow_the_finer_partition() {
        // rows split finer than columns: columns are fully predicted by rows
        let fine = p(&[1, 2, 3, 4, 1, 2, 3, 4]);
        let coarse = p(&[1, 1, 2, 2, 1, 1, 2, 2]);
        let r = rajski(&contingency(&fine, &coarse).unwrap()).unwrap();
        assert!((r.right - 1.0).abs() < 1e-12);
        assert!((r.left - 0.5).abs() < 1e-12);
        assert!((r.sym - 0.5).abs() < 1e-12);
    }

    #[test]
    fn report_for_identical() {
        let a = p(&[1, 2, 2, 3, 3, 3]);
        let r = assoc_report(&a, &a).unwrap();
        assert_eq!(r.df, 4);
        assert_eq!(r.ari, 1.0);
    }
}

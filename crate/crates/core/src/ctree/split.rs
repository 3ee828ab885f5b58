//! Split-point search on the selected covariate.

use super::{FitError, Response};

/// The chosen breakpoint `v` (rows with `x <= v` go left) and its criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitPoint {
    pub breakpoint: f64,
    pub criterion: f64,
}

/// Scan every distinct `x` value that leaves at least `minbucket` rows on
/// each side and keep the one maximising the discrepancy between the two
/// groups: between-group sum of squares for a continuous outcome, Pearson
/// chi-square of the 2 x c table for a categorical one. Ties go to the
/// smallest breakpoint.
pub fn best_split_point(
    response: Response<'_>,
    x: &[f64],
    minbucket: usize,
) -> Result<SplitPoint, FitError> {
    let n = response.len();
    if x.len() != n {
        return Err(FitError::LengthMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let minbucket = minbucket.max(1);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));

    let mut scorer = Scorer::new(response);
    let mut best: Option<SplitPoint> = None;
    let mut i = 0;
    while i < n {
        let v = x[order[i]];
        while i < n && x[order[i]] == v {
            scorer.move_left(order[i]);
            i += 1;
        }
        let n_left = i;
        if n_left < minbucket || n - n_left < minbucket {
            continue;
        }
        let criterion = scorer.criterion(n_left);
        if best.is_none_or(|b| criterion > b.criterion) {
            best = Some(SplitPoint {
                breakpoint: v,
                criterion,
            });
        }
    }
    best.ok_or(FitError::NoAdmissibleSplit)
}

enum Scorer<'a> {
    Continuous {
        centred: Vec<f64>,
        total: f64,
        left: f64,
    },
    Categorical {
        codes: &'a [usize],
        totals: Vec<usize>,
        left: Vec<usize>,
    },
}

impl<'a> Scorer<'a> {
    fn new(response: Response<'a>) -> Self {
        match response {
            Response::Continuous(y) => {
                let mean = y.iter().sum::<f64>() / y.len().max(1) as f64;
                let centred: Vec<f64> = y.iter().map(|v| v - mean).collect();
                let total = centred.iter().sum();
                Scorer::Continuous {
                    centred,
                    total,
                    left: 0.0,
                }
            }
            Response::Categorical { codes, levels } => {
                let mut totals = vec![0; levels];
                for &c in codes {
                    totals[c] += 1;
                }
                Scorer::Categorical {
                    codes,
                    totals,
                    left: vec![0; levels],
                }
            }
        }
    }

    fn move_left(&mut self, row: usize) {
        match self {
            Scorer::Continuous { centred, left, .. } => *left += centred[row],
            Scorer::Categorical { codes, left, .. } => left[codes[row]] += 1,
        }
    }

    fn criterion(&self, n_left: usize) -> f64 {
        match self {
            Scorer::Continuous {
                centred,
                total,
                left,
            } => {
                // n_L (ȳ_L - ȳ)² + n_R (ȳ_R - ȳ)² = S_L²/n_L + S_R²/n_R - S²/n
                let n = centred.len() as f64;
                let nl = n_left as f64;
                let nr = n - nl;
                let right = total - left;
                left * left / nl + right * right / nr - total * total / n
            }
            Scorer::Categorical { totals, left, .. } => {
                let n: usize = totals.iter().sum();
                let nf = n as f64;
                let sides = [(n_left as f64, true), ((n - n_left) as f64, false)];
                let mut chi2 = 0.0;
                for (c, &col) in totals.iter().enumerate() {
                    if col == 0 {
                        continue;
                    }
                    for &(side_n, is_left) in &sides {
                        let observed = if is_left { left[c] } else { col - left[c] } as f64;
                        let expected = side_n * col as f64 / nf;
                        chi2 += (observed - expected).powi(2) / expected;
                    }
                }
                chi2
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cont(y: &[f64], x: &[f64], minbucket: usize) -> Result<SplitPoint, FitError> {
        best_split_point(Response::Continuous(y), x, minbucket)
    }

    #[test]
    fn step_is_found() {
        let sp = cont(&[0.0, 0.0, 10.0, 10.0], &[1.0, 2.0, 3.0, 4.0], 1).unwrap();
        assert_eq!(sp.breakpoint, 2.0);
        assert!((sp.criterion - 100.0).abs() < 1e-12);
    }

    #[test]
    fn no_distinct_values() {
        assert!(matches!(
            cont(&[1.0, 2.0, 3.0, 4.0], &[1.0; 4], 1),
            Err(FitError::NoAdmissibleSplit)
        ));
    }

    #[test]
    fn constant_outcome_takes_smallest_breakpoint() {
        let sp = cont(&[5.0; 4], &[1.0, 2.0, 3.0, 4.0], 1).unwrap();
        assert_eq!(sp.breakpoint, 1.0);
        assert_eq!(sp.criterion, 0.0);
    }

    #[test]
    fn minbucket_restricts_candidates() {
        // Best unconstrained split is at 1, but minbucket 2 forbids it.
        let sp = cont(&[100.0, 0.0, 0.0, 0.0, 1.0], &[1.0, 2.0, 3.0, 4.0, 5.0], 2).unwrap();
        assert_eq!(sp.breakpoint, 2.0);
        assert!(matches!(
            cont(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 2),
            Err(FitError::NoAdmissibleSplit)
        ));
    }

    #[test]
    fn tied_x_values_stay_together() {
        let sp = cont(&[0.0, 0.0, 0.0, 9.0], &[1.0, 2.0, 2.0, 2.0], 1).unwrap();
        assert_eq!(sp.breakpoint, 1.0);
    }

    #[test]
    fn chi_square_on_pure_split() {
        let codes = [0, 0, 1, 1];
        let sp = best_split_point(
            Response::Categorical {
                codes: &codes,
                levels: 2,
            },
            &[1.0, 2.0, 3.0, 4.0],
            1,
        )
        .unwrap();
        assert_eq!(sp.breakpoint, 2.0);
        // Perfect 2x2 separation: chi-square = n.
        assert!((sp.criterion - 4.0).abs() < 1e-12);
    }
}

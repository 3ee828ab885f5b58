//! Per-covariate association tests and the Bonferroni-gated split decision.

use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use super::{FitControls, FitError, Response};

/// Statistic and two-sided p-value of one covariate's association test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovariateTest {
    /// Slope t statistic (continuous outcome) or F statistic (categorical).
    pub statistic: f64,
    pub p_value: f64,
}

impl CovariateTest {
    const NULL: CovariateTest = CovariateTest {
        statistic: 0.0,
        p_value: 1.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub covariate_index: usize,
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitDecision {
    Stop,
    Split {
        covariate_index: usize,
        adjusted_p: f64,
    },
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|&x| x == v[0])
}

/// t-test of the slope in the least-squares regression `y = b0 + b1 x`.
///
/// A constant `x` (or `y`) gives `t = 0, p = 1`; an exact linear fit with a
/// nonzero slope gives `p = 0` and an infinite `t`.
pub fn covariate_test(y: &[f64], x: &[f64]) -> Result<CovariateTest, FitError> {
    let n = y.len();
    if x.len() != n {
        return Err(FitError::LengthMismatch {
            expected: n,
            found: x.len(),
        });
    }
    if n < 3 {
        return Err(FitError::TooFewObservations(n));
    }
    if is_constant(x) || is_constant(y) {
        return Ok(CovariateTest::NULL);
    }
    let nf = n as f64;
    let x_mean = x.iter().sum::<f64>() / nf;
    let y_mean = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - x_mean;
        let dy = yi - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let r = yi - y_mean - slope * (xi - x_mean);
            r * r
        })
        .sum();
    if slope == 0.0 {
        return Ok(CovariateTest::NULL);
    }
    if rss <= syy * 1e-14 {
        return Ok(CovariateTest {
            statistic: slope.signum() * f64::INFINITY,
            p_value: 0.0,
        });
    }
    let df = nf - 2.0;
    let se = (rss / df / sxx).sqrt();
    let t = slope / se;
    let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
    Ok(CovariateTest {
        statistic: t,
        p_value: (2.0 * dist.sf(t.abs())).clamp(0.0, 1.0),
    })
}

/// One-way ANOVA F test of `x` grouped by outcome class.
///
/// Empty classes are ignored. Fewer than two occupied classes, a constant
/// `x`, or no residual degrees of freedom give `F = 0, p = 1`; zero
/// within-class spread with between-class spread gives `p = 0`.
pub fn anova_test(classes: &[usize], levels: usize, x: &[f64]) -> Result<CovariateTest, FitError> {
    let n = classes.len();
    if x.len() != n {
        return Err(FitError::LengthMismatch {
            expected: n,
            found: x.len(),
        });
    }
    if n < 3 {
        return Err(FitError::TooFewObservations(n));
    }
    if is_constant(x) {
        return Ok(CovariateTest::NULL);
    }
    let mut counts = vec![0usize; levels];
    let mut sums = vec![0.0; levels];
    for (&c, &xi) in classes.iter().zip(x) {
        counts[c] += 1;
        sums[c] += xi;
    }
    let groups = counts.iter().filter(|&&c| c > 0).count();
    if groups < 2 || groups >= n {
        return Ok(CovariateTest::NULL);
    }
    let nf = n as f64;
    let mean = x.iter().sum::<f64>() / nf;
    let group_mean = |c: usize| sums[c] / counts[c] as f64;
    let between: f64 = (0..levels)
        .filter(|&c| counts[c] > 0)
        .map(|c| counts[c] as f64 * (group_mean(c) - mean).powi(2))
        .sum();
    let within: f64 = classes
        .iter()
        .zip(x)
        .map(|(&c, &xi)| (xi - group_mean(c)).powi(2))
        .sum();
    let total = between + within;
    if between <= total * 1e-14 {
        return Ok(CovariateTest::NULL);
    }
    if within <= total * 1e-14 {
        return Ok(CovariateTest {
            statistic: f64::INFINITY,
            p_value: 0.0,
        });
    }
    let df1 = (groups - 1) as f64;
    let df2 = (n - groups) as f64;
    let f = (between / df1) / (within / df2);
    let dist = FisherSnedecor::new(df1, df2).expect("positive degrees of freedom");
    Ok(CovariateTest {
        statistic: f,
        p_value: dist.sf(f).clamp(0.0, 1.0),
    })
}

/// Association test appropriate to the outcome kind.
pub fn test_covariate(response: Response<'_>, x: &[f64]) -> Result<CovariateTest, FitError> {
    match response {
        Response::Continuous(y) => covariate_test(y, x),
        Response::Categorical { codes, levels } => anova_test(codes, levels, x),
    }
}

/// Bonferroni over all tests: take the smallest p (lowest index on ties),
/// multiply by the number of tests, cap at 1, and split when the result is
/// at most `alpha`.
pub fn bonferroni_decision(tests: &[TestResult], alpha: f64) -> SplitDecision {
    let m = tests.len() as f64;
    let best = tests
        .iter()
        .fold(None::<&TestResult>, |best, t| match best {
            Some(b) if b.p_value <= t.p_value => Some(b),
            _ => Some(t),
        });
    match best {
        Some(t) => {
            let adjusted_p = (t.p_value * m).min(1.0);
            if adjusted_p <= alpha {
                SplitDecision::Split {
                    covariate_index: t.covariate_index,
                    adjusted_p,
                }
            } else {
                SplitDecision::Stop
            }
        }
        None => SplitDecision::Stop,
    }
}

/// Test every covariate against the response and decide whether to split.
///
/// `covariates` holds each covariate's values for the node's rows.
pub fn select_split_variable(
    response: Response<'_>,
    covariates: &[&[f64]],
    controls: &FitControls,
) -> Result<SplitDecision, FitError> {
    if response.len() < 3 {
        return Ok(SplitDecision::Stop);
    }
    let tests = covariates
        .iter()
        .enumerate()
        .map(|(i, x)| {
            test_covariate(response, x).map(|t| TestResult {
                covariate_index: i,
                statistic: t.statistic,
                p_value: t.p_value,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(bonferroni_decision(&tests, controls.alpha()))
}

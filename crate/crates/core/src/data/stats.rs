use std::f64::consts::PI;

use super::DataError;

/// Number of evaluation points in a [`DensityCurve`].
pub const KDE_GRID_POINTS: usize = 512;

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Type-7 (linear interpolation) sample quantile.
pub fn quantile(values: &[f64], p: f64) -> Result<f64, DataError> {
    if values.is_empty() {
        return Err(DataError::Empty);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(DataError::Probability(p));
    }
    Ok(quantile_sorted(&sorted(values), p))
}

pub(crate) fn quantile_sorted(v: &[f64], p: f64) -> f64 {
    let n = v.len();
    // 1-based position h = (n-1)p + 1, here shifted to 0-based.
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    if lo + 1 >= n {
        return v[n - 1];
    }
    v[lo] + (h - lo as f64) * (v[lo + 1] - v[lo])
}

/// Empirical CDF: the fraction of `values` that are `<= x`.
pub fn percentile_of(values: &[f64], x: f64) -> Result<f64, DataError> {
    if values.is_empty() {
        return Err(DataError::Empty);
    }
    let below = values.iter().filter(|&&v| v <= x).count();
    Ok(below as f64 / values.len() as f64)
}

/// Equal-width histogram with per-bin means.
///
/// Bins are left-open and right-closed, except the first which also holds
/// its left edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
    /// `None` for empty bins.
    pub bin_means: Vec<Option<f64>>,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// Bin holding `x`, if it lies within the edges.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        let first = *self.bin_edges.first()?;
        let last = *self.bin_edges.last()?;
        if !(first..=last).contains(&x) {
            return None;
        }
        // Smallest i with x <= edges[i + 1].
        let inner = &self.bin_edges[1..];
        Some(inner.partition_point(|&e| e < x).min(self.bins() - 1))
    }

    pub fn width(&self) -> f64 {
        self.bin_edges[self.bin_edges.len() - 1] - self.bin_edges[0]
    }
}

fn sturges_bins(n: usize) -> usize {
    let ceil_log2 = if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    };
    ceil_log2 + 1
}

/// Sturges histogram of `values` over `[min, max]`.
///
/// `paired_outcomes`, when given, supplies the numbers averaged per bin;
/// otherwise the binned values themselves are averaged. A constant input
/// yields one bin of width 1 centred on the value.
pub fn histogram(values: &[f64], paired_outcomes: Option<&[f64]>) -> Result<Histogram, DataError> {
    if values.is_empty() {
        return Err(DataError::Empty);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(DataError::NonFinite("histogram input".into()));
    }
    let paired = paired_outcomes.unwrap_or(values);
    if paired.len() != values.len() {
        return Err(DataError::PairedLength {
            expected: values.len(),
            found: paired.len(),
        });
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let bin_edges = if min == max {
        vec![min - 0.5, max + 0.5]
    } else {
        let k = sturges_bins(values.len());
        let width = max - min;
        let mut edges: Vec<f64> = (0..=k).map(|i| min + width * i as f64 / k as f64).collect();
        edges[k] = max;
        edges
    };
    let k = bin_edges.len() - 1;
    let mut hist = Histogram {
        bin_edges,
        counts: vec![0; k],
        bin_means: vec![None; k],
    };
    let mut sums = vec![0.0; k];
    for (&v, &y) in values.iter().zip(paired) {
        let b = hist.bin_of(v).expect("value within its own range");
        hist.counts[b] += 1;
        sums[b] += y;
    }
    for ((mean, &count), sum) in hist.bin_means.iter_mut().zip(&hist.counts).zip(sums) {
        if count > 0 {
            *mean = Some(sum / count as f64);
        }
    }
    Ok(hist)
}

/// Gaussian kernel density estimate on an evenly spaced grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurve {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth: f64,
}

impl DensityCurve {
    /// Trapezoidal integral of the density over the grid.
    pub fn integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, f)| 0.5 * (x[1] - x[0]) * (f[0] + f[1]))
            .sum()
    }
}

/// Kernel density estimate with bandwidth `0.9 min(sd, IQR/1.34) n^(-1/5)`.
///
/// When the IQR is zero the standard deviation is used alone. The grid spans
/// three bandwidths beyond the data range.
pub fn kde(values: &[f64]) -> Result<DensityCurve, DataError> {
    let n = values.len();
    if n < 2 {
        return Err(DataError::TooFewValues(n));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(DataError::NonFinite("density input".into()));
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt();
    if sd == 0.0 {
        return Err(DataError::ZeroSpread);
    }
    let s = sorted(values);
    let iqr = quantile_sorted(&s, 0.75) - quantile_sorted(&s, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    let bandwidth = 0.9 * spread * nf.powf(-0.2);

    let lo = s[0] - 3.0 * bandwidth;
    let hi = s[n - 1] + 3.0 * bandwidth;
    let step = (hi - lo) / (KDE_GRID_POINTS - 1) as f64;
    let norm = 1.0 / (nf * bandwidth * (2.0 * PI).sqrt());
    let grid: Vec<f64> = (0..KDE_GRID_POINTS)
        .map(|i| {
            if i == KDE_GRID_POINTS - 1 {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect();
    let density = grid
        .iter()
        .map(|&x| {
            s.iter()
                .map(|&v| {
                    let z = (x - v) / bandwidth;
                    (-0.5 * z * z).exp()
                })
                .sum::<f64>()
                * norm
        })
        .collect();
    Ok(DensityCurve {
        grid,
        density,
        bandwidth,
    })
}

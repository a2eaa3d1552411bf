//! Order-independent reducers for ensemble statistics.

/// Pairwise (cascade) summation. The result depends only on the order of
/// `values`, never on how work was split across threads.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 64;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Arithmetic mean via [`pairwise_sum`]; NaN for an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    pairwise_sum(values) / values.len() as f64
}

/// Median (mean of the two central order statistics for even length); NaN when empty.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Sums of `x, x², x³, x⁴` over a block of samples.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PowerSums {
    pub count: u64,
    pub s: [f64; 4],
}

impl PowerSums {
    pub fn from_samples(samples: &[f64]) -> Self {
        let mut cols: [Vec<f64>; 4] = Default::default();
        for c in cols.iter_mut() {
            c.reserve(samples.len());
        }
        for &x in samples {
            let x2 = x * x;
            cols[0].push(x);
            cols[1].push(x2);
            cols[2].push(x2 * x);
            cols[3].push(x2 * x2);
        }
        PowerSums {
            count: samples.len() as u64,
            s: [
                pairwise_sum(&cols[0]),
                pairwise_sum(&cols[1]),
                pairwise_sum(&cols[2]),
                pairwise_sum(&cols[3]),
            ],
        }
    }

    pub fn merge(&self, other: &PowerSums) -> PowerSums {
        let mut s = self.s;
        for (a, b) in s.iter_mut().zip(other.s) {
            *a += b;
        }
        PowerSums {
            count: self.count + other.count,
            s,
        }
    }

    pub fn minus(&self, other: &PowerSums) -> PowerSums {
        let mut s = self.s;
        for (a, b) in s.iter_mut().zip(other.s) {
            *a -= b;
        }
        PowerSums {
            count: self.count - other.count,
            s,
        }
    }

    /// Raw moments `(E x, E x², E x³, E x⁴)`.
    pub fn raw_moments(&self) -> [f64; 4] {
        let n = self.count as f64;
        self.s.map(|v| v / n)
    }
}

/// Delete-one-block jackknife over `blocks` contiguous blocks of `samples`.
///
/// Returns the full-sample estimate and its standard error for every statistic
/// produced by `estimate`, which receives the power sums of the retained samples.
pub fn jackknife<const K: usize>(
    samples: &[f64],
    blocks: usize,
    estimate: impl Fn(&PowerSums) -> [f64; K],
) -> ([f64; K], [f64; K]) {
    let n = samples.len();
    let b = blocks.clamp(1, n.max(1));
    let block_sums: Vec<PowerSums> = (0..b)
        .map(|i| PowerSums::from_samples(&samples[i * n / b..(i + 1) * n / b]))
        .collect();
    let total = tree_merge(&block_sums);
    let full = estimate(&total);
    if b < 2 {
        return (full, [f64::NAN; K]);
    }
    let leave_out: Vec<[f64; K]> = block_sums.iter().map(|blk| estimate(&total.minus(blk))).collect();
    let mut se = [0.0; K];
    for j in 0..K {
        let col: Vec<f64> = leave_out.iter().map(|v| v[j]).collect();
        let m = mean(&col);
        let dev: Vec<f64> = col.iter().map(|v| (v - m) * (v - m)).collect();
        se[j] = ((b as f64 - 1.0) / b as f64 * pairwise_sum(&dev)).sqrt();
    }
    (full, se)
}

fn tree_merge(parts: &[PowerSums]) -> PowerSums {
    match parts.len() {
        0 => PowerSums::default(),
        1 => parts[0],
        len => tree_merge(&parts[..len / 2]).merge(&tree_merge(&parts[len / 2..])),
    }
}

//! Deterministic cascade summation.

/// Sums a slice by repeatedly adding adjacent pairs.
///
/// Besides the usual accuracy gain over left-to-right accumulation, the
/// pairing pattern makes duplication exact: a sequence in which every element
/// appears twice in adjacent positions sums to exactly twice the sum of the
/// deduplicated sequence, because the first pass turns each pair into an
/// exact doubling and every later addition is then the same computation at an
/// exact power-of-two scale.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut buf = xs.to_vec();
    let mut len = buf.len();
    while len > 1 {
        let half = len / 2;
        for i in 0..half {
            buf[i] = buf[2 * i] + buf[2 * i + 1];
        }
        if len % 2 == 1 {
            buf[half] = buf[len - 1];
            len = half + 1;
        } else {
            len = half;
        }
    }
    buf[0]
}

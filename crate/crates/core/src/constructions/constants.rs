/// The integer thresholds of the explicit constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constants {
    /// `2^{-1/4} ≤ 2^{-1/8} - 2^{-j0}` and `2^{1/8} + 2^{-j0} ≤ 2^{1/4}`.
    pub j0: u32,
    /// `2^{k-1/4} ≤ 2^{k-1/8} - √n/2` and `2^{k+1/8} + √n/2 ≤ 2^{k+1/4}` for all `k ≥ k0`.
    pub k0: u32,
    /// `2^{k-1/4} ≤ 2^k - √n/4` and `2^k + √n/4 ≤ 2^{k+1/4}` for all `k ≥ N0`.
    pub n0: u32,
}

const HORIZON: u32 = 64;

/// Smallest positive `c` such that `holds(k)` for every `k` in `c..HORIZON`.
fn first_from(holds: impl Fn(u32) -> bool) -> u32 {
    (1..HORIZON).find(|&c| (c..HORIZON).all(&holds)).expect("inequality never settles")
}

pub fn smallest_constants(n: usize) -> Constants {
    let p = |e: f64| 2f64.powf(e);
    let s = (n as f64).sqrt();
    let j0 = (1..HORIZON)
        .find(|&j| {
            let d = p(-(j as f64));
            p(-0.25) <= p(-0.125) - d && p(0.125) + d <= p(0.25)
        })
        .expect("j0 exists");
    let k0 = first_from(|k| {
        let k = k as f64;
        p(k - 0.25) <= p(k - 0.125) - s / 2.0 && p(k + 0.125) + s / 2.0 <= p(k + 0.25)
    });
    let n0 = first_from(|k| {
        let k = k as f64;
        p(k - 0.25) <= p(k) - s / 4.0 && p(k) + s / 4.0 <= p(k + 0.25)
    });
    Constants { j0, k0, n0 }
}

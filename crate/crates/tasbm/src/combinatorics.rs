//! Counting helpers shared by the analytics: falling factorials with
//! overflow promotion and linear-extension counts of small partial orders.

/// Falling factorial P(n, k) = n * (n-1) * ... * (n-k+1), the number of
/// ordered selections of k distinct items from n.
///
/// Returns 0 when k > n. Accumulates in u64 and promotes to floating point
/// on overflow, so very large placements degrade gracefully instead of
/// wrapping.
pub fn permutations(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut acc: u64 = 1;
    for i in 0..k {
        match acc.checked_mul(n - i) {
            Some(v) => acc = v,
            None => {
                // promote and finish in f64
                let mut facc = acc as f64;
                for j in i..k {
                    facc *= (n - j) as f64;
                }
                return facc;
            }
        }
    }
    acc as f64
}

/// z! as a float; exact for z <= 170 before overflowing to infinity,
/// which is far beyond any motif size in practice.
pub fn factorial(z: u64) -> f64 {
    let mut acc = 1.0f64;
    for i in 2..=z {
        acc *= i as f64;
    }
    acc
}

/// A partial order on up to 64 elements, stored as direct-predecessor
/// bitmasks. Used to merge the edge chains of two motif instances that
/// share events.
#[derive(Debug, Clone)]
pub struct PartialOrder {
    preds: Vec<u64>,
}

impl PartialOrder {
    pub fn new(len: usize) -> Self {
        assert!(len <= 64, "partial order limited to 64 elements");
        PartialOrder {
            preds: vec![0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    /// Record the constraint `a < b`.
    pub fn add_lt(&mut self, a: usize, b: usize) {
        if a != b {
            self.preds[b] |= 1 << a;
        }
    }

    /// Number of linear extensions, by dynamic programming over order
    /// ideals: an extension is built left to right, and an element may be
    /// placed once all of its predecessors have been placed. A cyclic
    /// relation has no extensions and yields 0.
    pub fn linear_extensions(&self) -> u64 {
        let n = self.preds.len();
        if n == 0 {
            return 1;
        }
        let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
        // memo[placed-mask] = number of ways to order the placed set
        let mut memo = vec![0u64; 1usize << n];
        memo[0] = 1;
        for mask in 0u64..=full {
            let ways = memo[mask as usize];
            if ways == 0 {
                continue;
            }
            for x in 0..n {
                let bit = 1u64 << x;
                if mask & bit == 0 && self.preds[x] & !mask == 0 {
                    memo[(mask | bit) as usize] += ways;
                }
            }
            if mask == full {
                break;
            }
        }
        memo[full as usize]
    }
}

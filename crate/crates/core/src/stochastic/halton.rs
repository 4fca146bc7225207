/// First `count` primes.
pub fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2u64;
    while out.len() < count {
        if out.iter().take_while(|&&p| p * p <= n).all(|&p| !n.is_multiple_of(p)) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut acc = 0.0;
    while index > 0 {
        acc += (index % base) as f64 * f;
        index /= base;
        f *= inv;
    }
    acc
}

/// Unscrambled Halton sequence over the first `dim` prime bases.
#[derive(Debug, Clone)]
pub struct Halton {
    bases: Vec<u64>,
}

impl Halton {
    pub fn new(dim: usize) -> Self {
        Self { bases: primes(dim) }
    }

    pub fn dim(&self) -> usize {
        self.bases.len()
    }

    pub fn point(&self, index: u64) -> Vec<f64> {
        self.bases
            .iter()
            .map(|&b| radical_inverse(index, b))
            .collect()
    }
}

//! Brute-force reference computations.
//!
//! Nothing here touches the recurrences or series machinery of the rest of
//! the crate: set partitions are enumerated one by one, and sums are taken
//! term by term in plain floating point.

use rug::{Float, Integer, Rational};

/// Calls `visit` with the block sizes of every set partition of `{0..n}`.
/// Partitions are generated as restricted growth strings.
pub fn for_each_partition(n: usize, mut visit: impl FnMut(&[usize])) {
    if n == 0 {
        visit(&[]);
        return;
    }
    let mut labels = vec![0usize; n];
    let mut sizes = Vec::with_capacity(n);
    fn recurse(
        pos: usize,
        labels: &mut [usize],
        sizes: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if pos == labels.len() {
            visit(sizes);
            return;
        }
        for b in 0..=sizes.len() {
            labels[pos] = b;
            if b == sizes.len() {
                sizes.push(1);
                recurse(pos + 1, labels, sizes, visit);
                sizes.pop();
            } else {
                sizes[b] += 1;
                recurse(pos + 1, labels, sizes, visit);
                sizes[b] -= 1;
            }
        }
    }
    recurse(0, &mut labels, &mut sizes, &mut visit);
}

pub fn count_partitions(n: usize) -> Integer {
    let mut count = 0u64;
    for_each_partition(n, |_| count += 1);
    Integer::from(count)
}

pub fn count_partitions_with_blocks(n: usize, k: usize) -> Integer {
    let mut count = 0u64;
    for_each_partition(n, |b| {
        if b.len() == k {
            count += 1
        }
    });
    Integer::from(count)
}

pub fn count_singleton_free_partitions(n: usize) -> Integer {
    let mut count = 0u64;
    for_each_partition(n, |b| {
        if b.iter().all(|&s| s >= 2) {
            count += 1
        }
    });
    Integer::from(count)
}

/// `sum_{k < terms} f(k) * e^{-x} x^k / k!`, with Poisson weights generated by
/// the recursion `w_{k+1} = w_k x / (k+1)` in `bits`-bit floats.
pub fn poisson_sum(bits: u32, x: &Rational, terms: usize, f: impl Fn(usize) -> Float) -> Float {
    let x = Float::with_val(bits, x);
    let mut w = Float::with_val(bits, -&x);
    w.exp_mut();
    let mut acc = Float::new(bits);
    for k in 0..terms {
        acc += &w * f(k);
        w *= &x;
        w /= (k + 1) as u32;
    }
    acc
}

//! Stirling numbers of the second kind, Bell numbers and Bell polynomials.

use std::sync::{Arc, OnceLock, RwLock};

use rug::{Complete, Integer, Rational};

use crate::poly::PolynomialQ;

/// Lazily grown table of `S(n, k)` for `0 <= k <= n <= n_max`.
///
/// Rows are appended whole under a write lock and never mutated afterwards,
/// so concurrent readers only ever see complete rows.
#[derive(Debug, Default)]
pub struct StirlingTriangle {
    rows: RwLock<Vec<Arc<[Integer]>>>,
}

impl StirlingTriangle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide shared triangle.
    pub fn global() -> &'static StirlingTriangle {
        static GLOBAL: OnceLock<StirlingTriangle> = OnceLock::new();
        GLOBAL.get_or_init(StirlingTriangle::new)
    }

    /// Number of rows materialized so far.
    pub fn len(&self) -> usize {
        self.rows.read().expect("triangle lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row `n`: `[S(n,0), ..., S(n,n)]`.
    pub fn row(&self, n: usize) -> Arc<[Integer]> {
        if let Some(row) = self.rows.read().expect("triangle lock poisoned").get(n) {
            return Arc::clone(row);
        }
        let mut rows = self.rows.write().expect("triangle lock poisoned");
        if rows.is_empty() {
            rows.push(Arc::from(vec![Integer::from(1)]));
        }
        while rows.len() <= n {
            let prev = Arc::clone(rows.last().expect("nonempty"));
            let m = prev.len();
            // S(m,k) = k S(m-1,k) + S(m-1,k-1)
            let mut next = Vec::with_capacity(m + 1);
            next.push(Integer::new());
            for k in 1..=m {
                let mut v = if k < m {
                    (&prev[k] * k as u32).complete()
                } else {
                    Integer::new()
                };
                v += &prev[k - 1];
                next.push(v);
            }
            rows.push(Arc::from(next));
        }
        Arc::clone(&rows[n])
    }

    pub fn get(&self, n: usize, k: usize) -> Integer {
        if k > n {
            return Integer::new();
        }
        self.row(n)[k].clone()
    }
}

/// `S(n, k)`; zero for `k > n` and for `k = 0 < n`.
pub fn stirling2(n: usize, k: usize) -> Integer {
    StirlingTriangle::global().get(n, k)
}

/// `B(n)`, the number of partitions of an `n`-element set.
pub fn bell_number(n: usize) -> Integer {
    StirlingTriangle::global().row(n).iter().sum()
}

/// `B(n, x) = sum_k S(n,k) x^k`.
pub fn bell_polynomial(n: usize) -> PolynomialQ {
    let row = StirlingTriangle::global().row(n);
    PolynomialQ::new(row.iter().map(|s| Rational::from(s.clone())).collect())
}

/// Number of set partitions of an `n`-set without singleton blocks, via
/// `sum_j (-1)^j C(n, j) B(n - j)`.
pub fn restricted_bell(n: usize) -> Integer {
    let mut acc = Integer::new();
    for j in 0..=n {
        let term = Integer::binomial_u(n as u32, j as u32).complete() * bell_number(n - j);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Singleton-free partition polynomial `sum_pi x^{#blocks(pi)}` over set
/// partitions without singletons, via
/// `sum_j C(n, j) (-x)^j B(n - j, x)`. At `x = 1` it is `restricted_bell(n)`.
pub fn restricted_bell_polynomial(n: usize) -> PolynomialQ {
    let mut acc = PolynomialQ::zero();
    for j in 0..=n {
        let mut c = Rational::from(Integer::binomial_u(n as u32, j as u32).complete());
        if j % 2 == 1 {
            c = -c;
        }
        let shift = PolynomialQ::monomial(j, c);
        acc = &acc + &(&shift * &bell_polynomial(n - j));
    }
    acc
}

/// Coefficients of `m^j` in the falling-factorial basis:
/// `m^j = sum_k S(j,k) m(m-1)...(m-k+1)`.
pub fn monomial_to_falling(j: usize) -> Vec<Integer> {
    StirlingTriangle::global().row(j).to_vec()
}

/// `m (m-1) ... (m-k+1)`, zero once `k > m` for nonnegative `m`.
pub fn falling_factorial(m: i64, k: usize) -> Integer {
    let mut acc = Integer::from(1);
    for i in 0..k as i64 {
        acc *= m - i;
        if acc == 0 {
            break;
        }
    }
    acc
}

//! Exact arithmetic in `Z[2cos(pi/M)]`.
//!
//! Elements are integer polynomials in `c = 2cos(pi/M)` reduced modulo the
//! minimal polynomial of `c`, which is monic with integer coefficients, so the
//! ring is closed under the operations needed to build reflection matrices.

/// Integer polynomial, coefficients from low to high degree.
type Poly = Vec<i64>;

fn trim(p: &mut Poly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Exact division by a monic divisor; panics if the remainder is nonzero.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Poly {
    let mut rem = num.to_vec();
    let dl = den.len();
    assert_eq!(den.last(), Some(&1), "divisor must be monic");
    if rem.len() < dl {
        assert!(rem.iter().all(|&c| c == 0));
        return Vec::new();
    }
    let mut quot = vec![0; rem.len() - dl + 1];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dl - 1];
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact polynomial division");
    trim(&mut quot);
    quot
}

/// The cyclotomic polynomial `Phi_n`.
pub(crate) fn cyclotomic(n: usize) -> Poly {
    let mut num = vec![0; n + 1];
    num[0] = -1;
    num[n] = 1;
    let mut den = vec![1];
    for d in 1..n {
        if n.is_multiple_of(d) {
            den = poly_mul(&den, &cyclotomic(d));
        }
    }
    poly_div_exact(&num, &den)
}

/// `D_j(x)` with `D_j(z + 1/z) = z^j + z^-j`.
fn dickson(j: usize) -> Poly {
    let (mut prev, mut cur): (Poly, Poly) = (vec![2], vec![0, 1]);
    if j == 0 {
        return prev;
    }
    for _ in 1..j {
        let mut next = poly_mul(&cur, &[0, 1]);
        next.resize(next.len().max(prev.len()), 0);
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        trim(&mut next);
        prev = cur;
        cur = next;
    }
    cur
}

/// Minimal polynomial of `2cos(2pi/n)` for `n >= 3`.
pub(crate) fn real_cyclotomic(n: usize) -> Poly {
    assert!(n >= 3);
    let phi = cyclotomic(n);
    let k = (phi.len() - 1) / 2;
    let mut out: Poly = vec![phi[k]];
    for j in 1..=k {
        let a = phi[k + j];
        let d = dickson(j);
        out.resize(out.len().max(d.len()), 0);
        for (i, &c) in d.iter().enumerate() {
            out[i] += a * c;
        }
    }
    trim(&mut out);
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The ring `Z[2cos(pi/M)]` for a fixed `M`.
#[derive(Debug, Clone)]
pub struct CosineRing {
    big_m: usize,
    /// Monic minimal polynomial of the generator.
    modulus: Poly,
}

/// Ring element; a vector of length `degree()` of coefficients in powers of the generator.
pub type RingElem = Vec<i64>;

impl CosineRing {
    /// A ring containing `2cos(pi/m)` for every `m` in `orders`.
    pub fn for_orders<I: IntoIterator<Item = usize>>(orders: I) -> Self {
        let big_m = orders.into_iter().fold(2, |acc, m| acc / gcd(acc, m) * m);
        Self { big_m, modulus: real_cyclotomic(2 * big_m) }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut p: Poly) -> RingElem {
        let d = self.degree();
        for i in (d..p.len()).rev() {
            let c = p[i];
            if c != 0 {
                for (j, &m) in self.modulus.iter().enumerate() {
                    p[i - d + j] -= c * m;
                }
            }
        }
        p.resize(d, 0);
        p
    }

    pub fn zero(&self) -> RingElem {
        vec![0; self.degree()]
    }

    pub fn from_int(&self, n: i64) -> RingElem {
        self.reduce(vec![n])
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> RingElem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn mul(&self, a: &[i64], b: &[i64]) -> RingElem {
        self.reduce(poly_mul(a, b))
    }

    /// `2cos(pi/m)`; requires `m` to divide `M`.
    pub fn two_cos_pi_over(&self, m: usize) -> RingElem {
        assert!(self.big_m.is_multiple_of(m), "order {m} not supported by this ring");
        self.reduce(dickson(self.big_m / m))
    }

    /// Floating-point value, for diagnostics only.
    pub fn approx(&self, a: &[i64]) -> f64 {
        let c = 2.0 * (std::f64::consts::PI / self.big_m as f64).cos();
        a.iter().rev().fold(0.0, |acc, &x| acc * c + x as f64)
    }
}

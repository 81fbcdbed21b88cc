use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// Values above this many bits are kept only as a base-2 logarithm.
pub const MAX_EXACT_BITS: u64 = 1 << 16;

/// A kernel size bound: exact when it fits, otherwise its approximate
/// base-2 logarithm (possibly infinite).
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    Exact(BigUint),
    Huge { log2: f64 },
}

impl Bound {
    pub fn log2(&self) -> f64 {
        match self {
            Bound::Exact(v) if v.bits() <= 1000 => v.to_f64().unwrap_or(f64::INFINITY).log2(),
            Bound::Exact(v) => v.bits() as f64,
            Bound::Huge { log2 } => *log2,
        }
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Bound::Exact(v) => Some(v),
            Bound::Huge { .. } => None,
        }
    }

    fn small(&self) -> Option<u64> {
        self.exact().and_then(|v| v.to_u64())
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(v) => write!(f, "{v}"),
            Bound::Huge { log2 } if log2.is_finite() => write!(f, "~2^{log2:.0}"),
            Bound::Huge { .. } => f.write_str("astronomical"),
        }
    }
}

/// The per-height bounds `c(h)` on children and `n(h)` on subtree sizes
/// that the bottom-up kernel is guaranteed to meet.
#[derive(Clone, Debug)]
pub struct KernelBudget {
    pub d: usize,
    pub k: usize,
    pub q: usize,
    /// Exponent base standing for the number of colors a vertex may carry.
    pub phi_len: usize,
    pub c: Vec<Bound>,
    pub n: Vec<Bound>,
}

impl KernelBudget {
    /// `c(0) = 0`, `n(0) = 1`,
    /// `c(h+1) = (k + 2^{n(h)q}) · 2^{|φ|n(h)} · 2^{(n(h)+d−h)²} + 2k`,
    /// `n(h+1) = n(h)c(h+1) + 1`, for heights up to `d`.
    pub fn new(d: usize, k: usize, q: usize, phi_len: usize) -> Self {
        let mut c = vec![Bound::Exact(BigUint::ZERO)];
        let mut n = vec![Bound::Exact(BigUint::one())];
        for h in 0..d {
            let next_c = match n[h].small() {
                Some(nh) => {
                    let first = nh.checked_mul(q as u64);
                    let second = nh.checked_mul(phi_len as u64);
                    let base = nh.checked_add((d - h) as u64).and_then(|x| x.checked_mul(x));
                    match (first, second, base) {
                        (Some(a), Some(b), Some(s)) if a.saturating_add(b).saturating_add(s) <= MAX_EXACT_BITS => {
                            let head = BigUint::from(k) + (BigUint::one() << a);
                            Bound::Exact((head << (b + s)) + BigUint::from(2 * k))
                        }
                        _ => {
                            let nf = nh as f64;
                            let lead = (nf * q as f64).max((k.max(1) as f64).log2()) + 1.0;
                            Bound::Huge { log2: lead + nf * phi_len as f64 + (nf + (d - h) as f64).powi(2) }
                        }
                    }
                }
                None => {
                    let nf = 2f64.powf(n[h].log2());
                    Bound::Huge { log2: nf * (q + phi_len) as f64 + nf * nf }
                }
            };
            let next_n = match (&n[h], &next_c) {
                (Bound::Exact(a), Bound::Exact(b)) if a.bits() + b.bits() <= MAX_EXACT_BITS => {
                    Bound::Exact(a * b + BigUint::one())
                }
                _ => Bound::Huge { log2: n[h].log2() + next_c.log2() },
            };
            c.push(next_c);
            n.push(next_n);
        }
        KernelBudget { d, k, q, phi_len, c, n }
    }

    /// The a-priori bound `n(d)` on the kernel size.
    pub fn kernel_size(&self) -> &Bound {
        &self.n[self.d]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_height_arithmetic() {
        let b = KernelBudget::new(2, 1, 2, 10);
        assert_eq!(b.c[1], Bound::Exact(BigUint::from(2_621_442u64)));
        assert_eq!(b.n[1], Bound::Exact(BigUint::from(2_621_443u64)));
        assert!(matches!(b.c[2], Bound::Huge { .. }));
        assert!(b.kernel_size().to_string().starts_with("~2^"));
    }

    #[test]
    fn zero_depth() {
        let b = KernelBudget::new(0, 3, 2, 5);
        assert_eq!(b.kernel_size(), &Bound::Exact(BigUint::one()));
    }
}

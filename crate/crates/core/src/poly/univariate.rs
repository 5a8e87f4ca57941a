//! Univariate real root isolation.
//!
//! Two flavours: exact (rational coefficients, Sturm sequences) for places
//! where nearby roots must never be confused, and double-double coefficients
//! with derivative-bracketed bisection for the many per-column solves.
//! Both report only roots where the polynomial changes sign.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Dd;

/// Dense polynomial with rational coefficients, lowest power first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<BigRational>);

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        QPoly::new(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&z) + o.0.get(k).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.0.iter().map(|v| v * c).collect())
    }

    /// Remainder of Euclidean division by `d` (nonzero).
    pub fn rem(&self, d: &QPoly) -> QPoly {
        let mut r = self.0.clone();
        let dl = d.0.last().expect("nonzero divisor").clone();
        let dd = d.0.len() - 1;
        while r.len() > dd && !r.is_empty() {
            let lead = r.last().unwrap().clone();
            if lead.is_zero() {
                r.pop();
                continue;
            }
            let q = &lead / &dl;
            let shift = r.len() - 1 - dd;
            for (k, c) in d.0.iter().enumerate() {
                r[shift + k] -= &q * c;
            }
            r.pop();
        }
        QPoly::new(r)
    }

    /// Monic normalisation keeps Sturm chain coefficients small.
    fn normalized(&self) -> QPoly {
        match self.0.last() {
            Some(l) => self.scale(&(BigRational::one() / l.abs())),
            None => self.clone(),
        }
    }

    fn sturm_chain(&self) -> Vec<QPoly> {
        let mut chain = vec![self.normalized(), self.derivative().normalized()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&-BigRational::one()).normalized());
        }
        chain
    }

    fn cauchy_bound(&self) -> BigRational {
        let lead = self.0.last().expect("nonzero").abs();
        let m = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        m + BigRational::from_integer(BigInt::from(2))
    }

    /// All real roots of odd multiplicity, increasing.
    pub fn sign_change_roots(&self) -> Vec<f64> {
        if self.degree() < 1 {
            return Vec::new();
        }
        let chain = self.sturm_chain();
        let bound = self.cauchy_bound();
        let lo = -bound.clone();
        let mut isolated = Vec::new();
        isolate(&chain, lo, bound, &mut isolated, 0);
        let mut out = Vec::new();
        for (a, b) in isolated {
            let sa = sign(&self.eval(&a));
            let sb = sign(&self.eval(&b));
            if sb == 0 {
                // the root sits exactly on the right end
                let eps = (&b - &a) / BigRational::from_integer(BigInt::from(1024));
                let after = sign(&self.eval(&(&b + eps)));
                if sa * after < 0 {
                    out.push(b.to_f64().unwrap_or(f64::NAN));
                }
                continue;
            }
            if sa * sb < 0 {
                out.push(refine_by_sign(self, a, b, sa));
            }
        }
        out
    }
}

fn sign(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(chain: &[QPoly], t: &BigRational) -> usize {
    let mut last = 0;
    let mut v = 0;
    for p in chain {
        let s = sign(&p.eval(t));
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

/// Splits `(a, b]` until each piece holds exactly one distinct root.
fn isolate(chain: &[QPoly], a: BigRational, b: BigRational, out: &mut Vec<(BigRational, BigRational)>, depth: u32) {
    let va = variations(chain, &a);
    let vb = variations(chain, &b);
    let count = va.saturating_sub(vb);
    if count == 0 {
        return;
    }
    if count == 1 || depth > 200 {
        out.push((a, b));
        return;
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let mut mid = (&a + &b) / &two;
    // a split point that is itself a root would be counted on the left only
    if chain[0].eval(&mid).is_zero() {
        mid = (&a + &mid * BigRational::from_integer(BigInt::from(3))) / BigRational::from_integer(BigInt::from(4));
    }
    isolate(chain, a, mid.clone(), out, depth + 1);
    isolate(chain, mid, b, out, depth + 1);
}

fn refine_by_sign(p: &QPoly, mut a: BigRational, mut b: BigRational, sa: i32) -> f64 {
    let two = BigRational::from_integer(BigInt::from(2));
    for _ in 0..200 {
        let af = a.to_f64().unwrap_or(0.0);
        let bf = b.to_f64().unwrap_or(0.0);
        if (bf - af).abs() <= 1e-17 * af.abs().max(bf.abs()).max(1e-300) {
            break;
        }
        let mid = (&a + &b) / &two;
        let sm = sign(&p.eval(&mid));
        if sm == 0 {
            return mid.to_f64().unwrap_or(f64::NAN);
        }
        if sm == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    ((&a + &b) / &two).to_f64().unwrap_or(f64::NAN)
}

/// Horner evaluation with double-double coefficients.
pub fn eval_dd(coeffs: &[Dd], t: f64) -> Dd {
    let td = Dd::from(t);
    let mut acc = Dd::ZERO;
    for c in coeffs.iter().rev() {
        acc = acc * td + *c;
    }
    acc
}

fn derivative_dd(coeffs: &[Dd]) -> Vec<Dd> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| *c * Dd::from(k as f64))
        .collect()
}

fn trim_dd(coeffs: &[Dd]) -> &[Dd] {
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1].signum() == 0 {
        n -= 1;
    }
    &coeffs[..n]
}

/// Sign-change roots of `sum c_k t^k` inside the open interval `(lo, hi)`,
/// increasing. Monotone pieces are bracketed by the sign-change roots of the
/// derivative, then bisected.
pub fn sign_change_roots_dd(coeffs: &[Dd], lo: f64, hi: f64) -> Vec<f64> {
    let c = trim_dd(coeffs);
    if c.len() < 2 || !(lo < hi) {
        return Vec::new();
    }
    if c.len() == 2 {
        let r = (-c[0].to_f64()) / c[1].to_f64();
        return if r > lo && r < hi { vec![r] } else { Vec::new() };
    }
    let crit = sign_change_roots_dd(&derivative_dd(c), lo, hi);
    let mut pts = Vec::with_capacity(crit.len() + 2);
    pts.push(lo);
    pts.extend(crit);
    pts.push(hi);
    let signs: Vec<i32> = pts.iter().map(|&t| eval_dd(c, t).signum()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i + 1 < pts.len() {
        let (sa, sb) = (signs[i], signs[i + 1]);
        if sa != 0 && sb != 0 && sa != sb {
            out.push(bisect_dd(c, pts[i], pts[i + 1], sa));
        } else if sb == 0 && i + 2 < pts.len() && sa != 0 {
            // root exactly at a critical point: sign change iff neighbours differ
            let mut j = i + 2;
            while j < pts.len() && signs[j] == 0 {
                j += 1;
            }
            if j < pts.len() && signs[j] != sa {
                out.push(pts[i + 1]);
            }
        }
        i += 1;
    }
    out
}

fn bisect_dd(c: &[Dd], mut a: f64, mut b: f64, sa: i32) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let sm = eval_dd(c, m).signum();
        if sm == 0 {
            return m;
        }
        if sm == sa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

//! Exact bivariate polynomials over the rationals.

mod dd;
mod parse;
pub(crate) mod resultant;
pub mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use dd::Dd;
pub use parse::{parse_polynomial, ParseError, MAX_EXPONENT};
pub use resultant::{sylvester_resultant, ResultantError, UniPolyOverPoly};

/// Exponent pair `x^x * y^y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(self) -> u32 {
        self.x + self.y
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    X,
    Y,
}

#[derive(Clone, Copy, Debug)]
struct FloatTerm {
    x: u32,
    y: u32,
    c: f64,
    c_dd: Dd,
}

/// Sparse polynomial in `x` and `y` with exact rational coefficients.
///
/// No zero coefficient is ever stored, so two polynomials are equal exactly
/// when their term maps are equal.
#[derive(Clone)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
    float_terms: Vec<FloatTerm>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

fn rational_to_dd(q: &BigRational) -> Dd {
    let hi = q.to_f64().unwrap_or(f64::NAN);
    if !hi.is_finite() {
        return Dd::from(hi);
    }
    let rest = q - BigRational::from_float(hi).expect("finite");
    Dd::new(hi, rest.to_f64().unwrap_or(0.0))
}

/// Converts a finite double to the exact rational it represents.
pub fn exact(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite coordinate")
}

/// Hessian entries at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix2 {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
    NegativeSemidefinite,
    NegativeDefinite,
}

impl SymMatrix2 {
    pub fn determinant(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    /// Leading principal minors for definiteness, with the semidefinite
    /// cases decided on the diagonal when the determinant vanishes.
    pub fn classify(&self) -> Definiteness {
        classify_entries(self.a11, self.determinant(), self.a22)
    }
}

fn classify_entries<T: PartialOrd + Default>(a11: T, det: T, a22: T) -> Definiteness {
    let zero = T::default();
    if det > zero {
        if a11 > zero {
            Definiteness::PositiveDefinite
        } else {
            Definiteness::NegativeDefinite
        }
    } else if det < zero {
        Definiteness::Indefinite
    } else if a11 >= zero && a22 >= zero {
        if a11 > zero || a22 > zero {
            Definiteness::PositiveSemidefinite
        } else {
            // zero matrix
            Definiteness::PositiveSemidefinite
        }
    } else if a11 <= zero && a22 <= zero {
        Definiteness::NegativeSemidefinite
    } else {
        Definiteness::Indefinite
    }
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::from_map(BTreeMap::new())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(BigRational::one(), 0, 1)
    }

    pub fn monomial(c: BigRational, x: u32, y: u32) -> Self {
        let mut m = BTreeMap::new();
        m.insert(Monomial::new(x, y), c);
        Self::from_map(m)
    }

    /// Builds from `(x exponent, y exponent, coefficient)` triples; repeated
    /// exponents are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, BigRational)>,
    {
        let mut m: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (x, y, c) in terms {
            *m.entry(Monomial::new(x, y)).or_insert_with(BigRational::zero) += c;
        }
        Self::from_map(m)
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|&(x, y, c)| (x, y, BigRational::from_integer(BigInt::from(c)))),
        )
    }

    fn from_map(mut terms: BTreeMap<Monomial, BigRational>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let float_terms = terms
            .iter()
            .map(|(m, c)| FloatTerm {
                x: m.x,
                y: m.y,
                c: c.to_f64().unwrap_or(f64::NAN),
                c_dd: rational_to_dd(c),
            })
            .collect();
        Polynomial { terms, float_terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree() as i64).max().unwrap_or(-1)
    }

    pub fn degree_in(&self, var: Var) -> i64 {
        self.terms
            .keys()
            .map(|m| match var {
                Var::X => m.x as i64,
                Var::Y => m.y as i64,
            })
            .max()
            .unwrap_or(-1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigRational)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, x: u32, y: u32) -> BigRational {
        self.terms
            .get(&Monomial::new(x, y))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_map(self.terms.iter().map(|(m, v)| (*m, v * c)).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Polynomial::from_int(1);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact term-wise partial derivative.
    pub fn partial(&self, var: Var) -> Self {
        Self::from_map(
            self.terms
                .iter()
                .filter_map(|(m, c)| match var {
                    Var::X if m.x > 0 => Some((
                        Monomial::new(m.x - 1, m.y),
                        c * BigRational::from_integer(BigInt::from(m.x)),
                    )),
                    Var::Y if m.y > 0 => Some((
                        Monomial::new(m.x, m.y - 1),
                        c * BigRational::from_integer(BigInt::from(m.y)),
                    )),
                    _ => None,
                })
                .collect(),
        )
    }

    /// `f(x, -y) == f(x, y)`, i.e. no odd power of `y` appears.
    pub fn is_even_in_y(&self) -> bool {
        self.terms.keys().all(|m| m.y % 2 == 0)
    }

    /// Every term carries at least one factor of `x`.
    pub fn is_divisible_by_x(&self) -> bool {
        !self.is_zero() && self.terms.keys().all(|m| m.x >= 1)
    }

    /// Largest monomial `x^a y^b` dividing every term, and the quotient.
    pub fn split_monomial_content(&self) -> (Monomial, Polynomial) {
        if self.is_zero() {
            return (Monomial::ONE, self.clone());
        }
        let a = self.terms.keys().map(|m| m.x).min().unwrap_or(0);
        let b = self.terms.keys().map(|m| m.y).min().unwrap_or(0);
        let q = Self::from_map(
            self.terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.x - a, m.y - b), c.clone()))
                .collect(),
        );
        (Monomial::new(a, b), q)
    }

    /// Compensated (Neumaier) sum of the monomials in double precision.
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        self.evaluate_flagged(x, y).0
    }

    /// As [`Polynomial::evaluate`]; the flag is set when the result overflowed.
    pub fn evaluate_flagged(&self, x: f64, y: f64) -> (f64, bool) {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for t in &self.float_terms {
            let v = t.c * x.powi(t.x as i32) * y.powi(t.y as i32);
            let s = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - s) + v;
            } else {
                comp += (v - s) + sum;
            }
            sum = s;
        }
        if !sum.is_finite() {
            return (sum, true);
        }
        let r = sum + comp;
        (r, !r.is_finite())
    }

    pub fn evaluate_dd(&self, x: Dd, y: Dd) -> Dd {
        let mut acc = Dd::ZERO;
        for t in &self.float_terms {
            acc = acc + t.c_dd * x.powi(t.x) * y.powi(t.y);
        }
        acc
    }

    pub fn evaluate_exact(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            acc += c * num_traits::pow(x.clone(), m.x as usize) * num_traits::pow(y.clone(), m.y as usize);
        }
        acc
    }

    /// Coefficients (lowest power first) of `y -> self(x0, y)`, in
    /// double-double precision.
    pub fn restrict_x(&self, x0: f64) -> Vec<Dd> {
        let deg = self.degree_in(Var::Y);
        if deg < 0 {
            return Vec::new();
        }
        let mut out = vec![Dd::ZERO; deg as usize + 1];
        let xd = Dd::from(x0);
        for t in &self.float_terms {
            out[t.y as usize] = out[t.y as usize] + t.c_dd * xd.powi(t.x);
        }
        out
    }

    /// Coefficients (lowest power first) of `x -> self(x, y0)` in `f64`.
    pub fn restrict_y(&self, y0: f64) -> Vec<f64> {
        let deg = self.degree_in(Var::X);
        if deg < 0 {
            return Vec::new();
        }
        let mut out = vec![Dd::ZERO; deg as usize + 1];
        let yd = Dd::from(y0);
        for t in &self.float_terms {
            out[t.x as usize] = out[t.x as usize] + t.c_dd * yd.powi(t.y);
        }
        out.into_iter().map(Dd::to_f64).collect()
    }

    /// Second partials evaluated at `point`.
    pub fn hessian_at(&self, point: (f64, f64)) -> SymMatrix2 {
        let fx = self.partial(Var::X);
        let fy = self.partial(Var::Y);
        SymMatrix2 {
            a11: fx.partial(Var::X).evaluate(point.0, point.1),
            a12: fx.partial(Var::Y).evaluate(point.0, point.1),
            a22: fy.partial(Var::Y).evaluate(point.0, point.1),
        }
    }

    /// Definiteness of the Hessian at the origin decided in exact arithmetic.
    pub fn hessian_class_at_origin(&self) -> Definiteness {
        let two = BigRational::from_integer(BigInt::from(2));
        let a11 = self.coefficient(2, 0) * &two;
        let a12 = self.coefficient(1, 1);
        let a22 = self.coefficient(0, 2) * &two;
        let det = &a11 * &a22 - &a12 * &a12;
        classify_entries(a11, det, a22)
    }

    /// `f(0,0) = 0` and the gradient vanishes there (exact).
    pub fn is_critical_zero_at_origin(&self) -> bool {
        self.coefficient(0, 0).is_zero()
            && self.coefficient(1, 0).is_zero()
            && self.coefficient(0, 1).is_zero()
    }

    /// Sum of absolute monomial values; the natural scale for rounding
    /// error of [`Polynomial::evaluate`].
    pub fn magnitude_at(&self, x: f64, y: f64) -> f64 {
        self.float_terms
            .iter()
            .map(|t| (t.c * x.powi(t.x as i32) * y.powi(t.y as i32)).abs())
            .sum()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        let mut m = self.terms.clone();
        for (k, v) in &o.terms {
            *m.entry(*k).or_insert_with(BigRational::zero) += v;
        }
        Polynomial::from_map(m)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        let mut m = self.terms.clone();
        for (k, v) in &o.terms {
            *m.entry(*k).or_insert_with(BigRational::zero) -= v;
        }
        Polynomial::from_map(m)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        let mut m: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                *m.entry(Monomial::new(a.x + b.x, a.y + b.y))
                    .or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        Polynomial::from_map(m)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::from_map(self.terms.iter().map(|(m, c)| (*m, -c)).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, o: Polynomial) -> Polynomial {
                (&self).$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Polynomial {
    /// Graded order, highest degree first; output reparses to the same term map.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then(b.x.cmp(&a.x)));
        for (idx, (m, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            match m.x {
                0 => {}
                1 => factors.push("x".into()),
                e => factors.push(format!("x^{e}")),
            }
            match m.y {
                0 => {}
                1 => factors.push("y".into()),
                e => factors.push(format!("y^{e}")),
            }
            if factors.is_empty() {
                write_rational(f, &mag)?;
            } else {
                if !mag.is_one() {
                    write_rational(f, &mag)?;
                    write!(f, "*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `f` together with the partial derivatives used by the geometric code.
#[derive(Clone, Debug)]
pub struct Derivatives {
    pub f: Polynomial,
    pub fx: Polynomial,
    pub fy: Polynomial,
    pub fxx: Polynomial,
    pub fxy: Polynomial,
    pub fyy: Polynomial,
}

impl Derivatives {
    pub fn new(f: &Polynomial) -> Self {
        let fx = f.partial(Var::X);
        let fy = f.partial(Var::Y);
        Derivatives {
            fxx: fx.partial(Var::X),
            fxy: fx.partial(Var::Y),
            fyy: fy.partial(Var::Y),
            f: f.clone(),
            fx,
            fy,
        }
    }

    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        (self.fx.evaluate(x, y), self.fy.evaluate(x, y))
    }

    /// `f(x,y) - level` evaluated in double-double.
    pub fn residual_dd(&self, x: f64, y: f64, level: f64) -> f64 {
        (self.f.evaluate_dd(Dd::from(x), Dd::from(y)) - Dd::from(level)).to_f64()
    }
}

//! Sylvester resultants of polynomials in an auxiliary variable `t` whose
//! coefficients are polynomials in `(x, y)`.

use std::collections::HashMap;

use thiserror::Error;

use super::Polynomial;

/// `sum_k coeffs[k] * t^k` with coefficients in `Q[x, y]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPolyOverPoly {
    coeffs: Vec<Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResultantError {
    #[error("zero polynomial in t")]
    Zero,
    #[error("polynomial has degree {0} in t; need at least 1")]
    Degenerate(usize),
    #[error("Sylvester matrix of size {0} is too large")]
    TooLarge(usize),
}

impl UniPolyOverPoly {
    /// Trailing zero coefficients are dropped so the leading one is nonzero.
    pub fn new(mut coeffs: Vec<Polynomial>) -> Result<Self, ResultantError> {
        while coeffs.last().is_some_and(Polynomial::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(ResultantError::Zero);
        }
        Ok(UniPolyOverPoly { coeffs })
    }

    /// `target - sum_k a_k t^k` for rational `a_k`; the implicitization
    /// input for a parametrisation coordinate.
    pub fn parametrisation(target: Polynomial, t_coeffs: &[Polynomial]) -> Result<Self, ResultantError> {
        let len = t_coeffs.len().max(1);
        let mut coeffs = vec![Polynomial::zero(); len];
        for (k, c) in t_coeffs.iter().enumerate() {
            coeffs[k] = -c;
        }
        coeffs[0] = &coeffs[0] + &target;
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }
}

/// Determinant of the Sylvester matrix of `g` and `h` with respect to `t`.
pub fn sylvester_resultant(g: &UniPolyOverPoly, h: &UniPolyOverPoly) -> Result<Polynomial, ResultantError> {
    let m = g.degree();
    let n = h.degree();
    if m == 0 {
        return Err(ResultantError::Degenerate(m));
    }
    if n == 0 {
        return Err(ResultantError::Degenerate(n));
    }
    let size = m + n;
    if size > 24 {
        return Err(ResultantError::TooLarge(size));
    }
    let mut matrix = vec![vec![Polynomial::zero(); size]; size];
    for row in 0..n {
        for (k, c) in g.coeffs.iter().rev().enumerate() {
            matrix[row][row + k] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in h.coeffs.iter().rev().enumerate() {
            matrix[n + row][row + k] = c.clone();
        }
    }
    Ok(determinant(&matrix))
}

/// Laplace expansion along rows, memoised on the set of used columns.
fn determinant(matrix: &[Vec<Polynomial>]) -> Polynomial {
    fn minor(
        matrix: &[Vec<Polynomial>],
        row: usize,
        used: u32,
        memo: &mut HashMap<u32, Polynomial>,
    ) -> Polynomial {
        let size = matrix.len();
        if row == size {
            return Polynomial::from_int(1);
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut acc = Polynomial::zero();
        // sign of a column = parity of free columns to its left
        let mut free_before = 0usize;
        for col in 0..size {
            if used & (1 << col) != 0 {
                continue;
            }
            let entry = &matrix[row][col];
            if !entry.is_zero() {
                let sub = minor(matrix, row + 1, used | (1 << col), memo);
                if !sub.is_zero() {
                    let term = entry * &sub;
                    acc = if free_before % 2 == 0 { &acc + &term } else { &acc - &term };
                }
            }
            free_before += 1;
        }
        memo.insert(used, acc.clone());
        acc
    }
    let mut memo = HashMap::new();
    minor(matrix, 0, 0, &mut memo)
}

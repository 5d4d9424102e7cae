//! Monomial dictionaries for library-based dynamics.
//!
//! A `DictionaryLibrary` is an ordered list of multivariate monomials
//! evaluated on the state. Ordering is graded lexicographic: terms are
//! grouped by total degree, and within a degree the exponent of `x1` ranks
//! highest. For two states up to cubic order that gives
//! `1, x1, x2, x1^2, x1*x2, x2^2, x1^3, x1^2*x2, x1*x2^2, x2^3`.
//! The order is part of the coefficient-file format, so it must never
//! change silently.

use nalgebra::DVector;

#[derive(Debug, Clone, PartialEq)]
pub struct DictionaryLibrary {
    dim_in: usize,
    max_degree: u32,
    exponents: Vec<Vec<u32>>,
    labels: Vec<String>,
}

impl DictionaryLibrary {
    /// All monomials in `dim_in` variables with total degree `<= max_degree`,
    /// including the constant term, in graded lexicographic order.
    pub fn total_degree(dim_in: usize, max_degree: u32) -> Self {
        assert!(dim_in >= 1, "dictionary needs at least one variable");
        let mut exponents = Vec::new();
        for degree in 0..=max_degree {
            let mut prefix = Vec::with_capacity(dim_in);
            push_degree(dim_in, degree, &mut prefix, &mut exponents);
        }
        let labels = exponents.iter().map(|e| label_of(e)).collect();
        DictionaryLibrary {
            dim_in,
            max_degree,
            exponents,
            labels,
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Evaluate every monomial at `x`, writing into `out` (length `len()`).
    pub fn eval_into(&self, x: &DVector<f64>, out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim_in);
        debug_assert_eq!(out.len(), self.exponents.len());
        for (slot, expo) in out.iter_mut().zip(&self.exponents) {
            let mut v = 1.0;
            for (xi, &e) in x.iter().zip(expo.iter()) {
                if e > 0 {
                    v *= xi.powi(e as i32);
                }
            }
            *slot = v;
        }
    }

    pub fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.len());
        self.eval_into(x, out.as_mut_slice());
        out
    }
}

fn push_degree(dim: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if dim == 1 {
        prefix.push(degree);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for e in (0..=degree).rev() {
        prefix.push(e);
        push_degree(dim - 1, degree - e, prefix, out);
        prefix.pop();
    }
}

fn label_of(exponents: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in exponents.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            _ => parts.push(format!("x{}^{}", i + 1, e)),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_two_state_library_order_and_count() {
        let lib = DictionaryLibrary::total_degree(2, 3);
        assert_eq!(lib.len(), 10);
        let labels: Vec<&str> = lib.labels().iter().map(|s| s.as_str()).collect();
        assert_eq!(
            labels,
            vec![
                "1", "x1", "x2", "x1^2", "x1*x2", "x2^2", "x1^3", "x1^2*x2", "x1*x2^2", "x2^3"
            ]
        );
    }

    #[test]
    fn evaluation_matches_hand_expansion() {
        let lib = DictionaryLibrary::total_degree(2, 3);
        let x = DVector::from_vec(vec![2.0, -3.0]);
        let v = lib.eval(&x);
        let expected = [
            1.0, 2.0, -3.0, 4.0, -6.0, 9.0, 8.0, -12.0, 18.0, -27.0,
        ];
        for (got, want) in v.iter().zip(expected.iter()) {
            assert_eq!(got, want);
        }
    }

    #[test]
    fn library_size_is_binomial() {
        // #monomials of degree <= k in d vars is C(d + k, k).
        let lib = DictionaryLibrary::total_degree(3, 2);
        assert_eq!(lib.len(), 10);
        let lib = DictionaryLibrary::total_degree(1, 5);
        assert_eq!(lib.len(), 6);
    }
}

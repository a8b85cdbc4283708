//! Observable recipes: algebraic functions of descriptor components.
//!
//! A recipe names *which* components it combines — "the z component of
//! qubit 1 times the x component of qubit 2" — without binding them to a
//! time. Evaluating the same recipe against an original and a transformed
//! history is how expectation invariance is probed.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::network::{Axis, Descriptor};
use crate::pauli::OperatorExpr;

/// One factor of a product term: a component of one qubit's descriptor.
pub type Factor = (usize, Axis);

/// A complex-weighted sum of products of descriptor components.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    terms: Vec<(Complex64, Vec<Factor>)>,
}

impl Observable {
    /// The bare component `q_{a,axis}`.
    pub fn component(qubit: usize, axis: Axis) -> Observable {
        Observable {
            terms: vec![(Complex64::new(1.0, 0.0), vec![(qubit, axis)])],
        }
    }

    /// The stored-bit projector `(1/2)(1 - q_{a,z})`, whose expectation is
    /// the probability that the qubit holds the value 1.
    pub fn z_value(qubit: usize) -> Observable {
        Observable {
            terms: vec![
                (Complex64::new(0.5, 0.0), Vec::new()),
                (Complex64::new(-0.5, 0.0), vec![(qubit, Axis::Z)]),
            ],
        }
    }

    /// A product of components, multiplied left to right.
    pub fn product(factors: Vec<Factor>) -> Observable {
        Observable {
            terms: vec![(Complex64::new(1.0, 0.0), factors)],
        }
    }

    /// A constant multiple of the identity.
    pub fn constant(c: Complex64) -> Observable {
        Observable {
            terms: vec![(c, Vec::new())],
        }
    }

    pub fn scaled(&self, c: Complex64) -> Observable {
        Observable {
            terms: self.terms.iter().map(|(w, f)| (c * w, f.clone())).collect(),
        }
    }

    pub fn plus(&self, other: &Observable) -> Observable {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Observable { terms }
    }

    pub fn terms(&self) -> &[(Complex64, Vec<Factor>)] {
        &self.terms
    }

    /// Largest qubit index referenced, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        self.terms
            .iter()
            .flat_map(|(_, fs)| fs.iter().map(|(q, _)| *q))
            .max()
    }

    /// Assembles the operator this recipe denotes at one time slice.
    pub fn evaluate(&self, descriptors: &[Descriptor]) -> Result<OperatorExpr> {
        let n = descriptors.len();
        if n == 0 {
            return Err(Error::NoQubits);
        }
        if let Some(max) = self.max_qubit() {
            if max >= n {
                return Err(Error::QubitOutOfRange { index: max, n });
            }
        }
        let mut out = OperatorExpr::zero(n)?;
        for (coeff, factors) in &self.terms {
            let mut term = OperatorExpr::scalar(n, *coeff)?;
            for &(qubit, axis) in factors {
                term = term.mul(descriptors[qubit].component(axis))?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Vacuum expectation of the assembled operator.
    pub fn expectation(&self, descriptors: &[Descriptor]) -> Result<Complex64> {
        Ok(self.evaluate(descriptors)?.vacuum_expectation())
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (coeff, factors)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let unit_weight = (coeff - Complex64::new(1.0, 0.0)).norm() < 1e-12;
            if !unit_weight || factors.is_empty() {
                if coeff.im.abs() < 1e-12 {
                    write!(f, "{}", coeff.re)?;
                } else {
                    write!(f, "({}{:+}i)", coeff.re, coeff.im)?;
                }
                if !factors.is_empty() {
                    write!(f, "·")?;
                }
            }
            for (j, (qubit, axis)) in factors.iter().enumerate() {
                if j > 0 {
                    write!(f, "·")?;
                }
                write!(f, "q{}{}", qubit + 1, axis)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{initial_descriptors, run, Gate, Network};

    #[test]
    fn component_evaluates_to_the_component() {
        let d = initial_descriptors(2).unwrap();
        let obs = Observable::component(1, Axis::Z);
        let e = obs.evaluate(&d).unwrap();
        assert_eq!(e.to_records(), vec![("IZ".to_string(), 1.0, 0.0)]);
    }

    #[test]
    fn z_value_is_zero_on_fresh_and_one_after_not() {
        let network = Network::new(1, vec![vec![Gate::not(0)]]).unwrap();
        let (history, _) = run(&network).unwrap();
        let obs = Observable::z_value(0);
        let before = obs.expectation(history.at(0).unwrap()).unwrap();
        let after = obs.expectation(history.at(1).unwrap()).unwrap();
        assert!(before.norm() < 1e-15);
        assert!((after.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_multiplies_in_order() {
        let d = initial_descriptors(1).unwrap();
        let xy = Observable::product(vec![(0, Axis::X), (0, Axis::Y)]);
        let e = xy.evaluate(&d).unwrap();
        // X·Y = iZ.
        assert_eq!(e.to_records(), vec![("Z".to_string(), 0.0, 1.0)]);
    }

    #[test]
    fn out_of_range_reference_is_an_error() {
        let d = initial_descriptors(1).unwrap();
        let obs = Observable::component(4, Axis::X);
        assert!(obs.evaluate(&d).is_err());
    }

    #[test]
    fn display_names_are_one_based() {
        let obs = Observable::product(vec![(0, Axis::Z), (1, Axis::X)]);
        assert_eq!(obs.to_string(), "q1z·q2x");
        assert_eq!(Observable::z_value(1).to_string(), "0.5 + -0.5·q2z");
    }
}

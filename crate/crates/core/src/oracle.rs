//! Independent dense-matrix reference simulator.
//!
//! Everything here is plain Schrödinger-picture linear algebra on
//! `2^n`-dimensional vectors and matrices: gate matrices are written out
//! from their textbook definitions and composed by matrix arithmetic, with
//! no reuse of the word-level product in [`crate::pauli`]. Agreement between
//! the two routes is therefore evidence rather than tautology.
//!
//! Basis convention: index bit for qubit `a` is `n - 1 - a`, so qubit 1
//! (index 0) is the most significant bit and the amplitude order for two
//! qubits reads `|00>, |01>, |10>, |11>`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::network::{reduced_density, Axis, DescriptorHistory, Gate, GateKind, Network};
use crate::pauli::{OperatorExpr, PauliLetter};

/// Hard cap for dense states and operators.
pub const MAX_DENSE_QUBITS: usize = 10;
/// Hard cap for full-history cross-checks.
pub const MAX_CROSS_CHECK_QUBITS: usize = 5;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![c(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, c(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim);
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = CMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let a = self.get(i, k);
                if a == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..self.dim {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let dim = self.dim * other.dim;
        let mut out = CMatrix::zeros(dim);
        for i1 in 0..self.dim {
            for j1 in 0..self.dim {
                let a = self.get(i1, j1);
                for i2 in 0..other.dim {
                    for j2 in 0..other.dim {
                        out.set(
                            i1 * other.dim + i2,
                            j1 * other.dim + j2,
                            a * other.get(i2, j2),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn add_scaled(&self, s: Complex64, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += s * b;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CMatrix, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint()
            .mul(self)
            .approx_eq(&CMatrix::identity(self.dim), tol)
    }

    /// Smallest eigenvalue lower bound via Gershgorin-free power check:
    /// returns the minimum of `<e_i|M|e_i>` minus off-diagonal mass. Used
    /// only as a cheap positive-semidefiniteness screen in tests.
    pub fn min_diagonal_real(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.get(i, i).re)
            .fold(f64::INFINITY, f64::min)
    }
}

fn pauli_matrix(letter: PauliLetter) -> CMatrix {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match letter {
        PauliLetter::I => CMatrix::from_rows(&[&[one, z], &[z, one]]),
        PauliLetter::X => CMatrix::from_rows(&[&[z, one], &[one, z]]),
        PauliLetter::Y => CMatrix::from_rows(&[&[z, c(0.0, -1.0)], &[c(0.0, 1.0), z]]),
        PauliLetter::Z => CMatrix::from_rows(&[&[one, z], &[z, c(-1.0, 0.0)]]),
    }
}

/// Dense image of an operator expression: the coefficient-weighted sum of
/// Kronecker products of single-qubit Pauli matrices.
pub fn to_matrix(expr: &OperatorExpr) -> Result<CMatrix> {
    let n = expr.num_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::DenseTooLarge {
            max: MAX_DENSE_QUBITS,
            got: n,
        });
    }
    let dim = 1usize << n;
    let mut out = CMatrix::zeros(dim);
    for (word, coeff) in expr.terms() {
        let mut m = pauli_matrix(word.letter(0));
        for q in 1..n {
            m = m.kron(&pauli_matrix(word.letter(q)));
        }
        out = out.add_scaled(*coeff, &m);
    }
    Ok(out)
}

/// Dense state vector over `2^n` amplitudes.
#[derive(Clone, Debug)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    /// The reference state `|0...0>`.
    pub fn zero_state(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoQubits);
        }
        if n > MAX_DENSE_QUBITS {
            return Err(Error::DenseTooLarge {
                max: MAX_DENSE_QUBITS,
                got: n,
            });
        }
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[0] = c(1.0, 0.0);
        Ok(DenseState { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies a `2^k`-dimensional matrix to the ordered qubit list `qs`.
    pub fn apply_matrix(&mut self, m: &CMatrix, qs: &[usize]) {
        let k = qs.len();
        assert_eq!(m.dim(), 1 << k);
        let dim = self.amps.len();
        let masks: Vec<usize> = qs.iter().map(|&q| 1 << (self.n - 1 - q)).collect();
        let mut scratch = vec![c(0.0, 0.0); 1 << k];
        let mut visited = vec![false; dim];
        for base in 0..dim {
            if visited[base] || masks.iter().any(|&mask| base & mask != 0) {
                continue;
            }
            // Gather the 2^k amplitudes that share the non-gate bits of `base`.
            for (sub, slot) in scratch.iter_mut().enumerate() {
                let mut idx = base;
                for (pos, mask) in masks.iter().enumerate() {
                    if (sub >> (k - 1 - pos)) & 1 == 1 {
                        idx |= mask;
                    }
                }
                *slot = self.amps[idx];
                visited[idx] = true;
            }
            for sub in 0..(1 << k) {
                let mut idx = base;
                for (pos, mask) in masks.iter().enumerate() {
                    if (sub >> (k - 1 - pos)) & 1 == 1 {
                        idx |= mask;
                    }
                }
                let mut v = c(0.0, 0.0);
                for (col, amp) in scratch.iter().enumerate() {
                    v += m.get(sub, col) * amp;
                }
                self.amps[idx] = v;
            }
        }
    }

    /// `<self| M |self>` for a full-dimension matrix.
    pub fn expectation(&self, m: &CMatrix) -> Complex64 {
        assert_eq!(m.dim(), self.amps.len());
        let mut total = c(0.0, 0.0);
        for i in 0..self.amps.len() {
            let mut row = c(0.0, 0.0);
            for j in 0..self.amps.len() {
                row += m.get(i, j) * self.amps[j];
            }
            total += self.amps[i].conj() * row;
        }
        total
    }

    /// Expectation of a single-qubit Pauli on `qubit`.
    pub fn pauli_expectation(&self, qubit: usize, letter: PauliLetter) -> Complex64 {
        let m = pauli_matrix(letter);
        let mut copy = self.clone();
        copy.apply_matrix(&m, &[qubit]);
        self.amps
            .iter()
            .zip(copy.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Textbook matrix of a gate over its own qubit ordering.
pub fn gate_matrix(gate: &Gate) -> Result<CMatrix> {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    Ok(match gate.kind() {
        GateKind::Not => CMatrix::from_rows(&[&[z, one], &[one, z]]),
        GateKind::Hadamard => {
            let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            CMatrix::from_rows(&[&[h, h], &[h, h.scale(-1.0)]])
        }
        GateKind::Phase(theta) => {
            let half = theta / 2.0;
            CMatrix::from_rows(&[
                &[c(half.cos(), -half.sin()), z],
                &[z, c(half.cos(), half.sin())],
            ])
        }
        GateKind::Cnot => CMatrix::from_rows(&[
            &[one, z, z, z],
            &[z, one, z, z],
            &[z, z, z, one],
            &[z, z, one, z],
        ]),
        GateKind::Toffoli => {
            let mut m = CMatrix::identity(8);
            m.set(6, 6, z);
            m.set(7, 7, z);
            m.set(6, 7, one);
            m.set(7, 6, one);
            m
        }
        GateKind::Custom(op) => to_matrix(op)?,
    })
}

/// Runs a network in the Schrödinger picture from `|0...0>`, returning one
/// state per recorded time (length `steps + 1`).
pub fn schrodinger_run(network: &Network) -> Result<Vec<DenseState>> {
    let mut state = DenseState::zero_state(network.num_qubits())?;
    let mut states = vec![state.clone()];
    for step in network.steps() {
        for gate in step {
            let m = gate_matrix(gate)?;
            state.apply_matrix(&m, gate.qubits());
        }
        states.push(state.clone());
    }
    Ok(states)
}

/// Reduced density matrix of the qubits in `keep` (ascending order), with
/// the remaining qubits traced out.
pub fn partial_trace(state: &DenseState, keep: &[usize]) -> Result<CMatrix> {
    let n = state.num_qubits();
    for &q in keep {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
    }
    if keep.is_empty() {
        return Err(Error::EmptySubset);
    }
    let k = keep.len();
    let reduced_dim = 1 << k;
    let mut rho = CMatrix::zeros(reduced_dim);
    let reduced_index = |full: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &q) in keep.iter().enumerate() {
            idx |= ((full >> (n - 1 - q)) & 1) << (k - 1 - pos);
        }
        idx
    };
    let traced_mask: usize = (0..n)
        .filter(|q| !keep.contains(q))
        .map(|q| 1usize << (n - 1 - q))
        .sum();
    let amps = state.amplitudes();
    for (i, ai) in amps.iter().enumerate() {
        if ai.norm_sqr() < 1e-30 {
            continue;
        }
        for (j, aj) in amps.iter().enumerate() {
            if (i & traced_mask) != (j & traced_mask) {
                continue;
            }
            let ri = reduced_index(i);
            let rj = reduced_index(j);
            let v = rho.get(ri, rj) + ai * aj.conj();
            rho.set(ri, rj, v);
        }
    }
    Ok(rho)
}

/// Outcome of a descriptor-vs-dense comparison over a full history.
#[derive(Clone, Debug)]
pub struct CrossCheckReport {
    /// Largest deviation among component expectations.
    pub expectation_deviation: f64,
    /// Largest elementwise deviation between reduced densities and partial
    /// traces over single-qubit subsets.
    pub density_deviation: f64,
}

impl CrossCheckReport {
    pub fn max_deviation(&self) -> f64 {
        self.expectation_deviation.max(self.density_deviation)
    }
}

/// Checks a descriptor history against an independent Schrödinger run of the
/// same network: component expectations computed from the dense image of the
/// time-`t` descriptors must match Heisenberg-free expectations in the
/// evolved state, and reduced densities must match partial traces.
pub fn cross_check(history: &DescriptorHistory, network: &Network) -> Result<CrossCheckReport> {
    let n = network.num_qubits();
    if n > MAX_CROSS_CHECK_QUBITS {
        return Err(Error::DenseTooLarge {
            max: MAX_CROSS_CHECK_QUBITS,
            got: n,
        });
    }
    if history.num_times() != network.num_steps() + 1 {
        return Err(Error::HistoryLength(
            history.num_times(),
            network.num_steps() + 1,
        ));
    }
    let states = schrodinger_run(network)?;
    let mut expectation_dev = 0.0f64;
    let mut density_dev = 0.0f64;
    for (t, state) in states.iter().enumerate() {
        let slice = history.at(t)?;
        for (a, descriptor) in slice.iter().enumerate() {
            for axis in Axis::ALL {
                let m = to_matrix(descriptor.component(axis))?;
                let heisenberg = m.get(0, 0);
                let schrodinger = state.pauli_expectation(a, axis.letter());
                expectation_dev = expectation_dev.max((heisenberg - schrodinger).norm());
            }
            let rho = reduced_density(history, &[a], t)?;
            let dense_rho = to_matrix(rho.op())?;
            let traced = partial_trace(state, &[a])?;
            density_dev = density_dev.max(dense_rho.max_abs_diff(&traced));
        }
    }
    Ok(CrossCheckReport {
        expectation_deviation: expectation_dev,
        density_deviation: density_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::OperatorExpr;

    #[test]
    fn pauli_matrices_follow_the_product_convention() {
        // XY = iZ fixes the right-handed convention.
        let x = pauli_matrix(PauliLetter::X);
        let y = pauli_matrix(PauliLetter::Y);
        let z = pauli_matrix(PauliLetter::Z);
        let xy = x.mul(&y);
        assert!(xy.approx_eq(&z.scale(c(0.0, 1.0)), 1e-15));
        // Z|0> = +|0>.
        assert_eq!(z.get(0, 0), c(1.0, 0.0));
    }

    #[test]
    fn to_matrix_of_identity_and_single_x() {
        let id = to_matrix(&OperatorExpr::identity(1).unwrap()).unwrap();
        assert!(id.approx_eq(&CMatrix::identity(2), 0.0));
        let x = to_matrix(&OperatorExpr::pauli(1, 0, PauliLetter::X).unwrap()).unwrap();
        assert_eq!(x.get(0, 1), c(1.0, 0.0));
        assert_eq!(x.get(1, 0), c(1.0, 0.0));
        assert_eq!(x.get(0, 0), c(0.0, 0.0));
    }

    #[test]
    fn to_matrix_is_multiplicative() {
        let a = OperatorExpr::from_records(&[("XZ".into(), 0.5, 0.5), ("YI".into(), -1.0, 0.0)])
            .unwrap();
        let b = OperatorExpr::from_records(&[("ZY".into(), 0.0, 1.0), ("II".into(), 0.25, 0.0)])
            .unwrap();
        let lhs = to_matrix(&a.mul(&b).unwrap()).unwrap();
        let rhs = to_matrix(&a).unwrap().mul(&to_matrix(&b).unwrap());
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn cnot_expression_matches_standard_matrix() {
        // (1/2)(1 + X_2 + Z_1 - Z_1 X_2) expands to the controlled-not matrix.
        let expr = OperatorExpr::from_records(&[
            ("II".into(), 0.5, 0.0),
            ("IX".into(), 0.5, 0.0),
            ("ZI".into(), 0.5, 0.0),
            ("ZX".into(), -0.5, 0.0),
        ])
        .unwrap();
        let m = to_matrix(&expr).unwrap();
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let cnot = CMatrix::from_rows(&[
            &[one, z, z, z],
            &[z, one, z, z],
            &[z, z, z, one],
            &[z, z, one, z],
        ]);
        assert!(m.approx_eq(&cnot, 1e-15));
        assert!(expr.is_unitary(1e-12));
    }

    #[test]
    fn apply_matrix_handles_reversed_qubit_order() {
        // CNOT with control on qubit 1, target on qubit 0.
        let mut state = DenseState::zero_state(2).unwrap();
        let x = pauli_matrix(PauliLetter::X);
        state.apply_matrix(&x, &[1]); // |01>
        let cnot = gate_matrix(&Gate::cnot(1, 0).unwrap()).unwrap();
        state.apply_matrix(&cnot, &[1, 0]);
        // control (qubit 1) holds 1, so target flips: |11>.
        assert!((state.amplitudes()[3].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_preparation_amplitudes() {
        let network = Network::new(
            2,
            vec![vec![Gate::hadamard(0)], vec![Gate::cnot(0, 1).unwrap()]],
        )
        .unwrap();
        let states = schrodinger_run(&network).unwrap();
        let final_amps = states.last().unwrap().amplitudes();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((final_amps[0].re - r).abs() < 1e-12);
        assert!(final_amps[1].norm() < 1e-12);
        assert!(final_amps[2].norm() < 1e-12);
        assert!((final_amps[3].re - r).abs() < 1e-12);
    }

    #[test]
    fn hadamard_halves_amplitudes() {
        let network = Network::new(1, vec![vec![Gate::hadamard(0)]]).unwrap();
        let states = schrodinger_run(&network).unwrap();
        let amps = states.last().unwrap().amplitudes();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((amps[0].re - r).abs() < 1e-12);
        assert!((amps[1].re - r).abs() < 1e-12);
    }

    #[test]
    fn not_then_cnot_walks_through_the_basis_states() {
        // |00> -> |10> -> |11>
        let network =
            Network::new(2, vec![vec![Gate::not(0)], vec![Gate::cnot(0, 1).unwrap()]]).unwrap();
        let states = schrodinger_run(&network).unwrap();
        let expected_index = [0usize, 2, 3];
        for (t, state) in states.iter().enumerate() {
            for (i, amp) in state.amplitudes().iter().enumerate() {
                let want = if i == expected_index[t] { 1.0 } else { 0.0 };
                assert!((amp.norm() - want).abs() < 1e-15, "t={} index={}", t, i);
            }
        }
    }

    #[test]
    fn fresh_gate_forms_match_textbook_matrices() {
        use crate::network::{gate_unitary, initial_descriptors};
        let gates = [
            Gate::not(0),
            Gate::hadamard(1),
            Gate::phase(2, 0.7),
            Gate::cnot(0, 2).unwrap(),
            Gate::toffoli(0, 1, 2).unwrap(),
        ];
        let fresh = initial_descriptors(3).unwrap();
        for gate in gates {
            let expr = gate_unitary(&gate, &fresh).unwrap();
            let image = to_matrix(&expr).unwrap();
            // embed the textbook matrix on the gate's qubits
            let mut probe = DenseState::zero_state(3).unwrap();
            let dim = probe.amplitudes().len();
            let mut embedded = CMatrix::zeros(dim);
            for col in 0..dim {
                probe.amps.iter_mut().for_each(|a| *a = c(0.0, 0.0));
                probe.amps[col] = c(1.0, 0.0);
                probe.apply_matrix(&gate_matrix(&gate).unwrap(), gate.qubits());
                for row in 0..dim {
                    embedded.set(row, col, probe.amps[row]);
                }
            }
            assert!(
                image.approx_eq(&embedded, 1e-12),
                "gate {:?} deviates",
                gate.kind()
            );
        }
    }

    #[test]
    fn conjugation_commutes_with_the_dense_image() {
        use crate::network::{apply_step, initial_descriptors, Axis};
        let fresh = initial_descriptors(2).unwrap();
        let gate = Gate::cnot(0, 1).unwrap();
        let u = to_matrix(&crate::network::gate_unitary(&gate, &fresh).unwrap()).unwrap();
        let (next, _) = apply_step(&fresh, &[gate]).unwrap();
        for q in 0..2 {
            for axis in Axis::ALL {
                let lhs = to_matrix(next[q].component(axis)).unwrap();
                let base = to_matrix(fresh[q].component(axis)).unwrap();
                let rhs = u.adjoint().mul(&base).mul(&u);
                assert!(lhs.approx_eq(&rhs, 1e-12));
            }
        }
    }

    #[test]
    fn reduced_densities_are_positive_semidefinite() {
        use crate::network::{reduced_density, run};
        let network = Network::new(
            2,
            vec![
                vec![Gate::hadamard(0), Gate::phase(1, 0.9)],
                vec![Gate::cnot(0, 1).unwrap()],
            ],
        )
        .unwrap();
        let (history, _) = run(&network).unwrap();
        for t in 0..history.num_times() {
            for q in 0..2 {
                let rho = reduced_density(&history, &[q], t).unwrap();
                assert!(rho.op().is_hermitian(1e-12));
                assert!((rho.trace() - 1.0).abs() < 1e-12);
                let m = to_matrix(rho.op()).unwrap();
                // 2x2 hermitian is positive semidefinite iff trace and
                // determinant are nonnegative
                let det = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0);
                assert!(det.re >= -1e-12 && m.trace().re >= 0.0);
            }
        }
    }

    #[test]
    fn partial_trace_of_bell_pair_is_maximally_mixed() {
        let network = Network::new(
            2,
            vec![vec![Gate::hadamard(0)], vec![Gate::cnot(0, 1).unwrap()]],
        )
        .unwrap();
        let states = schrodinger_run(&network).unwrap();
        let rho = partial_trace(states.last().unwrap(), &[1]).unwrap();
        let expected = CMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(rho.approx_eq(&expected, 1e-12));
    }
}

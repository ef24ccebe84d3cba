//! Dense unitary oracle used by the equivalence tests.

use num_complex::Complex;

use super::{Circuit, GateKind, Instruction};
use crate::error::UnitaryError;
use crate::scalar::Real;

pub const MAX_ORACLE_QUBITS: usize = 10;

/// Row-major `2^n × 2^n` matrix; qubit 0 is the least significant index bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary<T: Real> {
    num_qubits: usize,
    entries: Vec<Complex<T>>,
}

type Mat2<T> = [[Complex<T>; 2]; 2];

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::from_f64(re), T::from_f64(im))
}

fn single_qubit_matrix<T: Real>(instr: &Instruction) -> Mat2<T> {
    let half = instr.params().first().copied().unwrap_or(0.0) / 2.0;
    let (s, co) = half.sin_cos();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match instr.kind() {
        GateKind::Rx => [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]],
        GateKind::Ry => [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]],
        GateKind::Rz => [[c(co, -s), z], [z, c(co, s)]],
        GateKind::H => [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]],
        GateKind::X => [[z, one], [one, z]],
        GateKind::Y => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        GateKind::Z => [[one, z], [z, c(-1.0, 0.0)]],
        GateKind::S => [[one, z], [z, c(0.0, 1.0)]],
        GateKind::Sdg => [[one, z], [z, c(0.0, -1.0)]],
        GateKind::T => [[one, z], [z, c(r, r)]],
        GateKind::Tdg => [[one, z], [z, c(r, -r)]],
        GateKind::Cx | GateKind::Cz | GateKind::Swap => unreachable!("two-qubit gate"),
    }
}

impl<T: Real> Unitary<T> {
    pub fn identity(num_qubits: usize) -> Result<Self, UnitaryError> {
        if num_qubits > MAX_ORACLE_QUBITS {
            return Err(UnitaryError::TooManyQubits {
                num_qubits,
                max: MAX_ORACLE_QUBITS,
            });
        }
        let dim = 1usize << num_qubits;
        let mut entries = vec![c(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = c(1.0, 0.0);
        }
        Ok(Unitary {
            num_qubits,
            entries,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim() + col]
    }

    /// Left-multiplies by the gate, i.e. applies it after everything so far.
    pub fn apply(&mut self, instr: &Instruction) {
        let dim = self.dim();
        let ops = instr.operands();
        match instr.kind() {
            GateKind::Cx => {
                let (cb, tb) = (1 << ops[0], 1 << ops[1]);
                for row in 0..dim {
                    if row & cb != 0 && row & tb == 0 {
                        self.swap_rows(row, row | tb);
                    }
                }
            }
            GateKind::Swap => {
                let (ab, bb) = (1 << ops[0], 1 << ops[1]);
                for row in 0..dim {
                    if row & ab != 0 && row & bb == 0 {
                        self.swap_rows(row, (row & !ab) | bb);
                    }
                }
            }
            GateKind::Cz => {
                let mask = (1 << ops[0]) | (1 << ops[1]);
                for row in (0..dim).filter(|r| r & mask == mask) {
                    for v in &mut self.entries[row * dim..(row + 1) * dim] {
                        *v = -*v;
                    }
                }
            }
            _ => {
                let m = single_qubit_matrix::<T>(instr);
                let bit = 1 << ops[0];
                for row in (0..dim).filter(|r| r & bit == 0) {
                    let other = row | bit;
                    for col in 0..dim {
                        let a = self.entries[row * dim + col];
                        let b = self.entries[other * dim + col];
                        self.entries[row * dim + col] = m[0][0] * a + m[0][1] * b;
                        self.entries[other * dim + col] = m[1][0] * a + m[1][1] * b;
                    }
                }
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        let dim = self.dim();
        for col in 0..dim {
            self.entries.swap(a * dim + col, b * dim + col);
        }
    }

    /// Max-norm distance after rotating `other` by the global phase that best
    /// aligns it with `self`. Infinite when dimensions differ.
    pub fn phase_aligned_distance(&self, other: &Unitary<T>) -> T {
        if self.num_qubits != other.num_qubits {
            return T::infinity();
        }
        let overlap = self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a * b.conj()
            });
        let norm = overlap.norm();
        let phase = if norm > T::zero() {
            overlap / norm
        } else {
            Complex::new(T::one(), T::zero())
        };
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b * phase).norm())
            .fold(T::zero(), T::max)
    }
}

pub fn circuit_unitary<T: Real>(circuit: &Circuit) -> Result<Unitary<T>, UnitaryError> {
    let mut u = Unitary::identity(circuit.num_qubits())?;
    for instr in circuit.instructions() {
        u.apply(instr);
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Complex<f64>, re: f64, im: f64) -> bool {
        (a - Complex::new(re, im)).norm() < 1e-12
    }

    #[test]
    fn empty_circuit_is_identity() {
        let u = circuit_unitary::<f64>(&Circuit::new(1)).unwrap();
        assert_eq!(u, Unitary::identity(1).unwrap());
    }

    #[test]
    fn rx_pi_is_minus_i_x() {
        let c = Circuit::from_instructions(1, [Instruction::rx(PI, 0)]).unwrap();
        let u = circuit_unitary::<f64>(&c).unwrap();
        assert!(close(u.get(0, 0), 0.0, 0.0));
        assert!(close(u.get(0, 1), 0.0, -1.0));
        assert!(close(u.get(1, 0), 0.0, -1.0));
        assert!(close(u.get(1, 1), 0.0, 0.0));
    }

    #[test]
    fn cx_matches_basis_state_application() {
        let c = Circuit::from_instructions(2, [Instruction::cx(0, 1)]).unwrap();
        let u = circuit_unitary::<f64>(&c).unwrap();
        for input in 0..4usize {
            let expected = if input & 1 == 1 { input ^ 2 } else { input };
            for row in 0..4 {
                let want = if row == expected { 1.0 } else { 0.0 };
                assert!(close(u.get(row, input), want, 0.0), "col {input} row {row}");
            }
        }
    }

    #[test]
    fn rejects_large_circuits() {
        assert!(matches!(
            circuit_unitary::<f64>(&Circuit::new(11)),
            Err(UnitaryError::TooManyQubits { num_qubits: 11, .. })
        ));
    }

    #[test]
    fn phase_alignment_ignores_global_phase() {
        let x = Circuit::from_instructions(1, [Instruction::gate(GateKind::X, &[0])]).unwrap();
        let rx = Circuit::from_instructions(1, [Instruction::rx(PI, 0)]).unwrap();
        let a = circuit_unitary::<f64>(&x).unwrap();
        let b = circuit_unitary::<f64>(&rx).unwrap();
        assert!(a.phase_aligned_distance(&b) < 1e-12);
        let z = Circuit::from_instructions(1, [Instruction::gate(GateKind::Z, &[0])]).unwrap();
        assert!(a.phase_aligned_distance(&circuit_unitary(&z).unwrap()) > 0.5);
    }

    #[test]
    fn single_precision_backend() {
        let c = Circuit::from_instructions(1, [Instruction::gate(GateKind::H, &[0])]).unwrap();
        let u = circuit_unitary::<f32>(&c).unwrap();
        assert!((u.get(1, 1).re + std::f32::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    }
}

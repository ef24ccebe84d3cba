//! Structural benchmark generators (pre-transpile gate sets).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_4;

use crate::circuit::{Circuit, GateKind, Instruction};
use crate::error::BenchError;

pub const BUILTIN_BENCHMARKS: [&str; 7] = [
    "ghz",
    "ising",
    "bv",
    "adder_like",
    "random",
    "qnn_like",
    "graphstate_like",
];

pub const ISING_FIELD_ANGLE: f64 = 0.3;
pub const ISING_COUPLING_ANGLE: f64 = 0.2;

fn h(q: usize) -> Instruction {
    Instruction::gate(GateKind::H, &[q])
}

fn need(min: usize, got: usize) -> Result<(), BenchError> {
    if got < min {
        return Err(BenchError::TooFewQubits { min, got });
    }
    Ok(())
}

pub fn ghz(n: usize) -> Result<Circuit, BenchError> {
    need(2, n)?;
    let gates = std::iter::once(h(0)).chain((0..n - 1).map(|i| Instruction::cx(i, i + 1)));
    Ok(Circuit::from_instructions(n, gates)?)
}

/// Transverse-field layer followed by `steps` rounds of ZZ couplings on even
/// then odd neighbour pairs.
pub fn ising(n: usize, steps: usize) -> Result<Circuit, BenchError> {
    need(2, n)?;
    let mut gates: Vec<Instruction> = (0..n)
        .map(|q| Instruction::rx(ISING_FIELD_ANGLE, q))
        .collect();
    for _ in 0..steps {
        for parity in [0, 1] {
            for a in (parity..n - 1).step_by(2) {
                gates.push(Instruction::cx(a, a + 1));
                gates.push(Instruction::rz(ISING_COUPLING_ANGLE, a + 1));
                gates.push(Instruction::cx(a, a + 1));
            }
        }
    }
    Ok(Circuit::from_instructions(n, gates)?)
}

/// Bernstein-Vazirani with the alternating secret `1010...`; the last qubit is
/// the oracle ancilla.
pub fn bv(n: usize) -> Result<Circuit, BenchError> {
    need(2, n)?;
    let anc = n - 1;
    let mut gates = vec![Instruction::gate(GateKind::X, &[anc])];
    gates.extend((0..n).map(h));
    gates.extend(
        (0..anc)
            .filter(|i| i % 2 == 0)
            .map(|i| Instruction::cx(i, anc)),
    );
    gates.extend((0..anc).map(h));
    Ok(Circuit::from_instructions(n, gates)?)
}

/// Clifford+T Toffoli.
pub fn toffoli(a: usize, b: usize, t: usize, out: &mut Vec<Instruction>) {
    use GateKind::{Tdg, T};
    let g = |k: GateKind, q: usize| Instruction::gate(k, &[q]);
    out.extend([
        h(t),
        Instruction::cx(b, t),
        g(Tdg, t),
        Instruction::cx(a, t),
        g(T, t),
        Instruction::cx(b, t),
        g(Tdg, t),
        Instruction::cx(a, t),
        g(T, b),
        g(T, t),
        h(t),
        Instruction::cx(a, b),
        g(T, a),
        g(Tdg, b),
        Instruction::cx(a, b),
    ]);
}

fn maj(c: usize, b: usize, a: usize, out: &mut Vec<Instruction>) {
    out.push(Instruction::cx(a, b));
    out.push(Instruction::cx(a, c));
    toffoli(c, b, a, out);
}

fn uma(c: usize, b: usize, a: usize, out: &mut Vec<Instruction>) {
    toffoli(c, b, a, out);
    out.push(Instruction::cx(a, c));
    out.push(Instruction::cx(c, b));
}

/// Ripple-carry adder: carry-in on qubit 0, then `(b_i, a_i)` pairs.
pub fn adder_like(n: usize) -> Result<Circuit, BenchError> {
    need(3, n)?;
    let pairs = (n - 1) / 2;
    let b = |i: usize| 1 + 2 * i;
    let a = |i: usize| 2 + 2 * i;
    let carry = |i: usize| if i == 0 { 0 } else { a(i - 1) };
    let mut gates = Vec::new();
    for i in 0..pairs {
        maj(carry(i), b(i), a(i), &mut gates);
    }
    for i in (0..pairs).rev() {
        uma(carry(i), b(i), a(i), &mut gates);
    }
    Ok(Circuit::from_instructions(n, gates)?)
}

/// `10 n` gates drawn uniformly from the basis, angles on a π/4 grid.
pub fn random(n: usize, seed: u64) -> Result<Circuit, BenchError> {
    need(2, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::with_capacity(10 * n);
    for _ in 0..10 * n {
        let angle = f64::from(rng.random_range(1..8u8)) * FRAC_PI_4;
        let q = rng.random_range(0..n);
        gates.push(match rng.random_range(0..4u8) {
            0 => Instruction::rx(angle, q),
            1 => Instruction::ry(angle, q),
            2 => Instruction::rz(angle, q),
            _ => {
                let mut t = rng.random_range(0..n - 1);
                if t >= q {
                    t += 1;
                }
                Instruction::cx(q, t)
            }
        });
    }
    Ok(Circuit::from_instructions(n, gates)?)
}

/// Two variational layers: Ry on every qubit, a CX ladder, Rz on every qubit.
pub fn qnn_like(n: usize) -> Result<Circuit, BenchError> {
    need(2, n)?;
    let mut gates = Vec::new();
    for layer in 1..=2 {
        let angle = 0.1 * layer as f64;
        gates.extend((0..n).map(|q| Instruction::ry(angle, q)));
        gates.extend((0..n - 1).map(|q| Instruction::cx(q, q + 1)));
        gates.extend((0..n).map(|q| Instruction::rz(2.0 * angle, q)));
    }
    Ok(Circuit::from_instructions(n, gates)?)
}

/// Ring graph state: H everywhere, CZ between ring neighbours.
pub fn graphstate_like(n: usize) -> Result<Circuit, BenchError> {
    need(2, n)?;
    let mut gates: Vec<Instruction> = (0..n).map(h).collect();
    let edges = if n == 2 { 1 } else { n };
    gates.extend((0..edges).map(|i| Instruction::gate(GateKind::Cz, &[i, (i + 1) % n])));
    Ok(Circuit::from_instructions(n, gates)?)
}

pub fn builtin_benchmark(name: &str, num_logical: usize, seed: u64) -> Result<Circuit, BenchError> {
    match name {
        "ghz" => ghz(num_logical),
        "ising" => ising(num_logical, 1),
        "bv" => bv(num_logical),
        "adder_like" => adder_like(num_logical),
        "random" => random(num_logical, seed),
        "qnn_like" => qnn_like(num_logical),
        "graphstate_like" => graphstate_like(num_logical),
        other => Err(BenchError::UnknownBenchmark(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_unitary, transpile_to_basis};

    #[test]
    fn ghz_shape() {
        let c = ghz(4).unwrap();
        assert_eq!(
            c.instructions(),
            &[
                h(0),
                Instruction::cx(0, 1),
                Instruction::cx(1, 2),
                Instruction::cx(2, 3)
            ]
        );
    }

    #[test]
    fn ising_shape() {
        let c = ising(4, 1).unwrap();
        let expected: Vec<Instruction> = (0..4)
            .map(|q| Instruction::rx(ISING_FIELD_ANGLE, q))
            .chain([(0, 1), (2, 3), (1, 2)].into_iter().flat_map(|(a, b)| {
                [
                    Instruction::cx(a, b),
                    Instruction::rz(ISING_COUPLING_ANGLE, b),
                    Instruction::cx(a, b),
                ]
            }))
            .collect();
        assert_eq!(c.instructions(), expected.as_slice());
    }

    #[test]
    fn random_is_reproducible() {
        assert_eq!(random(4, 9).unwrap(), random(4, 9).unwrap());
        assert_ne!(random(4, 9).unwrap(), random(4, 10).unwrap());
    }

    #[test]
    fn unknown_and_too_small() {
        assert!(matches!(
            builtin_benchmark("nope", 4, 0),
            Err(BenchError::UnknownBenchmark(_))
        ));
        assert!(matches!(
            builtin_benchmark("adder_like", 2, 0),
            Err(BenchError::TooFewQubits { min: 3, got: 2 })
        ));
    }

    #[test]
    fn toffoli_flips_target_when_both_controls_set() {
        let mut gates = Vec::new();
        toffoli(0, 1, 2, &mut gates);
        let c = transpile_to_basis(&Circuit::from_instructions(3, gates).unwrap());
        let u = circuit_unitary::<f64>(&c).unwrap();
        let phase = u.get(7, 3);
        for col in 0..8usize {
            let row = if col & 3 == 3 { col ^ 4 } else { col };
            assert!((u.get(row, col) - phase).norm() < 1e-9, "column {col}");
        }
    }

    #[test]
    fn every_builtin_builds() {
        for name in BUILTIN_BENCHMARKS {
            let c = builtin_benchmark(name, 8, 1).unwrap();
            assert!(!c.is_empty(), "{name}");
        }
    }
}

use num_rational::Ratio;
use proptest::prelude::*;

use qpar::bench::{emit_csv, run_sweep, BenchmarkSource, SweepConfig};
use qpar::circuit::{circuit_unitary, emit_qasm, params_equal, parse_qasm, transpile_to_basis};
use qpar::decompose::{assign_tags, naive_decompose, optimized_decompose};
use qpar::hardware::{map_logical, overhead_cycles};
use qpar::runtime::{runtime_default, runtime_parallel, runtime_with_overhead};
use qpar::schedule::{has_dependency, schedule, LayeredCircuit};
use qpar::subnet::{mark_groups, validate_groups};
use qpar::{
    AddressingMode, Circuit, CxTemplate, DistributionMode, EncodingScheme, ExactSpeedups, GateKind,
    Instruction, PhysicalInstruction, PhysicalOpcode, PhysicalProgram, SeqTag, Speedups64,
    TimingModel,
};

const TOL: f64 = 1e-9;

const ALL_GATES: [GateKind; 14] = [
    GateKind::Rx,
    GateKind::Ry,
    GateKind::Rz,
    GateKind::Cx,
    GateKind::H,
    GateKind::X,
    GateKind::Y,
    GateKind::Z,
    GateKind::S,
    GateKind::Sdg,
    GateKind::T,
    GateKind::Tdg,
    GateKind::Cz,
    GateKind::Swap,
];

fn build(n: usize, raw: Vec<(usize, usize, usize, f64)>, kinds: &[GateKind]) -> Circuit {
    let gates = raw.into_iter().map(|(k, a, b, angle)| {
        let kind = kinds[k % kinds.len()];
        let a = a % n;
        let kind = if kind.arity() == 2 && n < 2 {
            GateKind::Rz
        } else {
            kind
        };
        if kind.arity() == 2 {
            let b = (a + 1 + b % (n - 1)) % n;
            Instruction::gate(kind, &[a, b])
        } else if kind.param_count() == 1 {
            Instruction::new(kind, vec![angle], vec![a]).expect("valid rotation")
        } else {
            Instruction::gate(kind, &[a])
        }
    });
    Circuit::from_instructions(n, gates).expect("operands in range")
}

fn circuit(
    max_qubits: usize,
    max_len: usize,
    kinds: &'static [GateKind],
) -> impl Strategy<Value = Circuit> {
    (1..=max_qubits).prop_flat_map(move |n| {
        prop::collection::vec(
            (0..kinds.len(), 0..n, 0..n.max(2), -6.3f64..6.3),
            0..=max_len,
        )
        .prop_map(move |raw| build(n, raw, kinds))
    })
}

fn basis_circuit(max_qubits: usize, max_len: usize) -> impl Strategy<Value = Circuit> {
    circuit(max_qubits, max_len, &ALL_GATES[..4])
}

const NODES: usize = 16;

fn physical_program() -> impl Strategy<Value = PhysicalProgram> {
    use PhysicalOpcode::*;
    let ops = [PRx, PRy, PRz, CRx, Entangle, Measure];
    prop::collection::vec((0..ops.len(), 0..NODES, 1..NODES, 0..3u16), 0..40).prop_map(move |raw| {
        let mut instrs: Vec<PhysicalInstruction> = raw
            .into_iter()
            .map(|(o, node, other, p)| {
                let op = ops[o];
                let mut targets = vec![node];
                if op.target_count() == 2 {
                    targets.push((node + other) % NODES);
                }
                PhysicalInstruction::new(op, vec![p; op.param_count()], targets)
            })
            .collect();
        assign_tags(&mut instrs);
        PhysicalProgram {
            instructions: instrs,
            map: map_logical(NODES / 2, DistributionMode::Semi),
        }
    })
}

fn parallel_mode() -> impl Strategy<Value = AddressingMode> {
    (0..4usize, 0..=4u32).prop_map(|(s, log_m)| {
        let scheme = EncodingScheme::ALL[s];
        if scheme == EncodingScheme::Sisd {
            return AddressingMode::sisd(NODES);
        }
        let m = 1usize << log_m.min(3);
        let m = if scheme == EncodingScheme::SubBitNcId {
            m.max(2)
        } else {
            m
        };
        AddressingMode::for_network(scheme, NODES, m, 16).expect("valid mode")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transpile_preserves_unitary(c in circuit(3, 12, &ALL_GATES)) {
        let lowered = transpile_to_basis(&c);
        prop_assert!(lowered.is_basis());
        let a = circuit_unitary::<f64>(&c).unwrap();
        let b = circuit_unitary::<f64>(&lowered).unwrap();
        prop_assert!(a.phase_aligned_distance(&b) < TOL);
    }

    #[test]
    fn schedule_preserves_unitary_and_gates(c in basis_circuit(5, 30)) {
        let lc = schedule(&c);
        let flat = lc.flatten();
        let a = circuit_unitary::<f64>(&c).unwrap();
        let b = circuit_unitary::<f64>(&flat).unwrap();
        prop_assert!(a.phase_aligned_distance(&b) < TOL);
        prop_assert_eq!(flat.len(), c.len());
        for layer in lc.layers() {
            for (i, x) in layer.iter().enumerate() {
                for y in &layer[i + 1..] {
                    prop_assert!(!has_dependency(x, y));
                }
            }
        }
    }

    #[test]
    fn qasm_round_trip(c in circuit(4, 20, &ALL_GATES)) {
        prop_assert_eq!(parse_qasm(&emit_qasm(&c)).unwrap(), c);
    }

    #[test]
    fn params_equal_is_an_equivalence(c in circuit(2, 3, &ALL_GATES)) {
        let g = c.instructions();
        for a in g {
            prop_assert!(params_equal(a, a));
            for b in g {
                prop_assert_eq!(params_equal(a, b), params_equal(b, a));
                for d in g {
                    if params_equal(a, b) && params_equal(b, d) {
                        prop_assert!(params_equal(a, d));
                    }
                }
            }
        }
    }

    #[test]
    fn overhead_matches_ceiling(w in 0u32..100_000, log_l in 0u32..7) {
        let l = 1 << log_l;
        let expected = if w == 0 { 0 } else { w.div_ceil(l) - 1 };
        prop_assert_eq!(overhead_cycles(w, l), expected);
    }

    #[test]
    fn dual_modes_agree(p in physical_program(), log_m in 1u32..4) {
        let m = 1usize << log_m;
        let k = NODES / m;
        let a = AddressingMode::new(EncodingScheme::SubIdNcBit, m, k, 16).unwrap();
        let b = AddressingMode::new(EncodingScheme::SubBitNcId, k, m, 16).unwrap();
        prop_assert_eq!(a.rho(), b.rho());
        prop_assert_eq!(a.delta(), b.delta());
        let tm = TimingModel::default();
        let ga = mark_groups(&p, &a);
        let gb = mark_groups(&p, &b);
        prop_assert_eq!(runtime_parallel(&ga, &tm, &a).unwrap(), runtime_parallel(&gb, &tm, &b).unwrap());
    }

    #[test]
    fn logical_nodes_share_a_subnet(logical in 0usize..64, log_m in 0u32..8, fully in any::<bool>()) {
        let dist = if fully { DistributionMode::Fully } else { DistributionMode::Semi };
        let map = map_logical(64, dist);
        let m = 1usize << log_m;
        let mode = AddressingMode::for_network(EncodingScheme::SubIdNcBit, dist.network_size(), m, 16).unwrap();
        prop_assume!(mode.nodes_per_subnet() >= dist.nodes_per_logical());
        let subnets: Vec<usize> = map
            .nodes_of_logical(logical)
            .map(|n| mode.subnet_of_node(n).unwrap())
            .collect();
        prop_assert!(subnets.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn blocks_never_reuse_a_node(p in physical_program()) {
        let mut used: Vec<usize> = Vec::new();
        for i in &p.instructions {
            if i.tag == SeqTag::Serial {
                used.clear();
            }
            for t in &i.targets {
                prop_assert!(!used.contains(t));
            }
            used.extend(&i.targets);
        }
    }

    #[test]
    fn grouping_keeps_instructions_and_validates(p in physical_program(), mode in parallel_mode()) {
        let g = mark_groups(&p, &mode);
        prop_assert_eq!(g.len(), p.len());
        for (a, b) in g.instructions.iter().zip(&p.instructions) {
            prop_assert_eq!((a.opcode, &a.params, &a.targets), (b.opcode, &b.params, &b.targets));
            prop_assert_eq!(a.tag == SeqTag::Serial, b.tag == SeqTag::Serial);
        }
        prop_assert!(validate_groups(&g, &mode).is_ok());
        let tm = TimingModel::default();
        let delta = u64::from(mode.delta());
        let grouped = runtime_with_overhead(&g, &tm, delta, true).unwrap();
        let ungrouped = runtime_with_overhead(&g, &tm, delta, false).unwrap();
        prop_assert!(grouped <= ungrouped);
    }

    #[test]
    fn sisd_is_degenerate(p in physical_program()) {
        let sisd = AddressingMode::sisd(NODES);
        let tm = TimingModel::default();
        prop_assert_eq!(
            runtime_parallel(&mark_groups(&p, &sisd), &tm, &sisd).unwrap(),
            runtime_default(&p, &tm).unwrap()
        );
    }

    #[test]
    fn decompositions_conserve_operations(c in basis_circuit(4, 20), fully in any::<bool>()) {
        let dist = if fully { DistributionMode::Fully } else { DistributionMode::Semi };
        let map = map_logical(c.num_qubits(), dist);
        let template = CxTemplate::default();
        let naive = naive_decompose(&LayeredCircuit::unscheduled(&c), &map, &template).unwrap();
        let sisd = AddressingMode::sisd(map.node_count());
        let opt = optimized_decompose(&schedule(&c), &map, &sisd, &template).unwrap();
        prop_assert_eq!(naive.operation_multiset(), opt.operation_multiset());
        prop_assert!(naive.validate().is_ok());
        prop_assert!(opt.validate().is_ok());
    }

    #[test]
    fn speedup_law(base in 1u64..1_000_000, compiled in 1u64..1_000_000, combined in 1u64..1_000_000) {
        let exact = ExactSpeedups::from_cycles(base, compiled, combined);
        prop_assert_eq!(exact.compiler * exact.hardware, exact.combined);
        let f = Speedups64::from_cycles(base, compiled, combined);
        prop_assert!((f.compiler * f.hardware - f.combined).abs() <= 1e-12 * f.combined);
        prop_assert_eq!(exact.combined, Ratio::new(u128::from(base), u128::from(combined)));
    }
}

fn small_sweep(seed: u64) -> SweepConfig {
    SweepConfig {
        subnets: Some(vec![2, 8, 64]),
        num_logical: 12,
        benchmarks: ["random", "ising", "adder_like"]
            .iter()
            .map(|b| BenchmarkSource::Builtin((*b).to_string()))
            .collect(),
        seed,
        ..SweepConfig::default()
    }
}

#[test]
fn sweeps_are_byte_identical() {
    let csv = |cfg: &SweepConfig| {
        let mut buf = Vec::new();
        emit_csv(&run_sweep(cfg), &mut buf).unwrap();
        buf
    };
    let cfg = small_sweep(5);
    assert_eq!(csv(&cfg), csv(&cfg));
    assert_ne!(csv(&cfg), csv(&small_sweep(6)));
}

#[test]
fn baseline_ignores_the_mode() {
    let report = run_sweep(&small_sweep(3));
    assert!(report.failures.is_empty(), "{:?}", report.failures);
    for r in &report.rows {
        let first = report
            .rows
            .iter()
            .find(|x| x.benchmark == r.benchmark && x.dist == r.dist)
            .unwrap();
        assert_eq!(r.t_baseline, first.t_baseline);
        let exact = ExactSpeedups::from_cycles(r.t_baseline, r.t_compiler, r.t_combined);
        assert_eq!(exact.compiler * exact.hardware, exact.combined);
    }
}

//! Network topology, address encodings and the logical-to-physical qubit map.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::HardwareError;

pub const DEFAULT_INTERFACE_WIDTH: u32 = 16;

/// How the four data qubits of a logical qubit are spread over nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistributionMode {
    Semi,
    Fully,
}

impl DistributionMode {
    pub const ALL: [DistributionMode; 2] = [DistributionMode::Semi, DistributionMode::Fully];

    pub fn nodes_per_logical(self) -> usize {
        match self {
            DistributionMode::Semi => 2,
            DistributionMode::Fully => 4,
        }
    }

    /// Data qubits hosted by each node (`N_q`).
    pub fn data_per_node(self) -> usize {
        match self {
            DistributionMode::Semi => 2,
            DistributionMode::Fully => 1,
        }
    }

    /// Node-controller count of the evaluated networks.
    pub fn network_size(self) -> usize {
        match self {
            DistributionMode::Semi => 1024,
            DistributionMode::Fully => 2048,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DistributionMode::Semi => "semi",
            DistributionMode::Fully => "fully",
        }
    }
}

impl fmt::Display for DistributionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistributionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "semi" => Ok(DistributionMode::Semi),
            "fully" => Ok(DistributionMode::Fully),
            other => Err(format!(
                "unknown distribution mode `{other}` (expected semi or fully)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EncodingScheme {
    #[serde(rename = "SISD")]
    Sisd,
    #[serde(rename = "subID_ncBIT")]
    SubIdNcBit,
    #[serde(rename = "subBIT_ncID")]
    SubBitNcId,
    #[serde(rename = "subBIT_ncBIT")]
    SubBitNcBit,
}

impl EncodingScheme {
    pub const ALL: [EncodingScheme; 4] = [
        EncodingScheme::Sisd,
        EncodingScheme::SubIdNcBit,
        EncodingScheme::SubBitNcId,
        EncodingScheme::SubBitNcBit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EncodingScheme::Sisd => "SISD",
            EncodingScheme::SubIdNcBit => "subID_ncBIT",
            EncodingScheme::SubBitNcId => "subBIT_ncID",
            EncodingScheme::SubBitNcBit => "subBIT_ncBIT",
        }
    }

    pub fn cli_name(self) -> &'static str {
        match self {
            EncodingScheme::Sisd => "sisd",
            EncodingScheme::SubIdNcBit => "subid-ncbit",
            EncodingScheme::SubBitNcId => "subbit-ncid",
            EncodingScheme::SubBitNcBit => "subbit-ncbit",
        }
    }

    /// Subnet counts swept for this scheme, powers of two inclusive.
    pub fn default_subnet_range(self, dist: DistributionMode) -> Vec<usize> {
        let n = dist.network_size();
        let (lo, hi) = match self {
            EncodingScheme::Sisd => (1, 1),
            EncodingScheme::SubIdNcBit | EncodingScheme::SubBitNcBit => (1, n / 2),
            EncodingScheme::SubBitNcId => (dist.nodes_per_logical(), n),
        };
        powers_of_two(lo, hi)
    }
}

impl fmt::Display for EncodingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EncodingScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EncodingScheme::ALL
            .into_iter()
            .find(|e| e.cli_name().eq_ignore_ascii_case(s) || e.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown scheme `{s}` (expected sisd, subid-ncbit, subbit-ncid or subbit-ncbit)")
            })
    }
}

/// All powers of two in `lo..=hi`.
pub fn powers_of_two(lo: usize, hi: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut v = lo.max(1).next_power_of_two();
    while v <= hi {
        out.push(v);
        v *= 2;
    }
    out
}

fn log2(v: usize) -> u32 {
    v.trailing_zeros()
}

/// Extra issue cycles when a `width`-bit address crosses an `interface_width`-bit
/// interface: one cycle for every word beyond the first.
pub fn overhead_cycles(width: u32, interface_width: u32) -> u32 {
    if width == 0 {
        return 0;
    }
    if width.is_multiple_of(interface_width) {
        width / interface_width - 1
    } else {
        width / interface_width
    }
}

/// A concrete `(scheme, M, K, L)` configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AddressingMode {
    scheme: EncodingScheme,
    subnets: usize,
    nodes_per_subnet: usize,
    interface_width: u32,
}

impl AddressingMode {
    pub fn new(
        scheme: EncodingScheme,
        subnets: usize,
        nodes_per_subnet: usize,
        interface_width: u32,
    ) -> Result<Self, HardwareError> {
        for (what, value) in [
            ("subnet count", subnets),
            ("nodes per subnet", nodes_per_subnet),
        ] {
            if !value.is_power_of_two() {
                return Err(HardwareError::NotPowerOfTwo { what, value });
            }
        }
        if interface_width == 0 {
            return Err(HardwareError::ZeroInterfaceWidth);
        }
        match scheme {
            EncodingScheme::SubBitNcId if subnets < 2 => {
                return Err(HardwareError::RhoTooSmall {
                    scheme,
                    what: "subnet count",
                    value: subnets,
                })
            }
            EncodingScheme::SubIdNcBit | EncodingScheme::SubBitNcBit if nodes_per_subnet < 2 => {
                return Err(HardwareError::RhoTooSmall {
                    scheme,
                    what: "nodes per subnet",
                    value: nodes_per_subnet,
                })
            }
            _ => {}
        }
        Ok(AddressingMode {
            scheme,
            subnets,
            nodes_per_subnet,
            interface_width,
        })
    }

    /// Mode over a network of `node_count` controllers split into `subnets`.
    pub fn for_network(
        scheme: EncodingScheme,
        node_count: usize,
        subnets: usize,
        interface_width: u32,
    ) -> Result<Self, HardwareError> {
        if !subnets.is_power_of_two() {
            return Err(HardwareError::NotPowerOfTwo {
                what: "subnet count",
                value: subnets,
            });
        }
        Self::new(
            scheme,
            subnets,
            (node_count / subnets).max(1),
            interface_width,
        )
    }

    pub fn sisd(node_count: usize) -> Self {
        Self::new(
            EncodingScheme::Sisd,
            1,
            node_count.max(1).next_power_of_two(),
            DEFAULT_INTERFACE_WIDTH,
        )
        .expect("SISD mode is always valid")
    }

    pub fn scheme(&self) -> EncodingScheme {
        self.scheme
    }

    /// `M`.
    pub fn subnets(&self) -> usize {
        self.subnets
    }

    /// `K`.
    pub fn nodes_per_subnet(&self) -> usize {
        self.nodes_per_subnet
    }

    pub fn interface_width(&self) -> u32 {
        self.interface_width
    }

    pub fn node_count(&self) -> usize {
        self.subnets * self.nodes_per_subnet
    }

    /// `(W_S, W_NC)` in bits.
    pub fn address_widths(&self) -> (u32, u32) {
        let (m, k) = (self.subnets, self.nodes_per_subnet);
        match self.scheme {
            EncodingScheme::SubIdNcBit => (log2(m), k as u32),
            EncodingScheme::SubBitNcId => (m as u32, log2(k)),
            EncodingScheme::SubBitNcBit => (m as u32, k as u32),
            EncodingScheme::Sisd => (log2(m), log2(k)),
        }
    }

    /// Maximum number of node controllers one instruction can address.
    pub fn rho(&self) -> usize {
        match self.scheme {
            EncodingScheme::SubIdNcBit => self.nodes_per_subnet,
            EncodingScheme::SubBitNcId => self.subnets,
            EncodingScheme::SubBitNcBit => self.node_count(),
            EncodingScheme::Sisd => 1,
        }
    }

    /// Extra issue cycles per instruction relative to SISD.
    pub fn delta(&self) -> u32 {
        if self.scheme == EncodingScheme::Sisd {
            return 0;
        }
        let (ws, wnc) = self.address_widths();
        overhead_cycles(ws + wnc, self.interface_width)
    }

    /// Axis label `(W_S, W_NC)`.
    pub fn label(&self) -> String {
        let (ws, wnc) = self.address_widths();
        format!("({ws}, {wnc})")
    }

    /// True for zero-width ID fields or single-bit bitmaps.
    pub fn is_degenerate(&self) -> bool {
        match self.scheme {
            EncodingScheme::SubIdNcBit => self.subnets == 1,
            EncodingScheme::SubBitNcId => self.nodes_per_subnet == 1,
            EncodingScheme::SubBitNcBit => self.subnets == 1,
            EncodingScheme::Sisd => false,
        }
    }

    fn check_node(&self, node: usize) -> Result<(), HardwareError> {
        if node >= self.node_count() {
            return Err(HardwareError::NodeOutOfRange {
                node,
                count: self.node_count(),
            });
        }
        Ok(())
    }

    /// Subnet holding `node`. SubBitNcId interleaves nodes across subnets.
    pub fn subnet_of_node(&self, node: usize) -> Result<usize, HardwareError> {
        self.check_node(node)?;
        match self.scheme {
            EncodingScheme::SubIdNcBit | EncodingScheme::SubBitNcBit => {
                Ok(node / self.nodes_per_subnet)
            }
            EncodingScheme::SubBitNcId => Ok(node % self.subnets),
            EncodingScheme::Sisd => Err(HardwareError::NoSubnets(self.scheme)),
        }
    }

    /// Position of `node` inside its subnet.
    pub fn nc_offset_of_node(&self, node: usize) -> Result<usize, HardwareError> {
        self.check_node(node)?;
        match self.scheme {
            EncodingScheme::SubBitNcId => Ok(node / self.subnets),
            _ => Ok(node % self.nodes_per_subnet),
        }
    }

    pub fn check_fits(&self, map: &QubitMap) -> Result<(), HardwareError> {
        if map.node_count() > self.node_count() {
            return Err(HardwareError::NetworkTooSmall {
                dist: map.dist(),
                num_logical: map.num_logical(),
                needed: map.node_count(),
                available: self.node_count(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for AddressingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} M={} K={} {}",
            self.scheme,
            self.subnets,
            self.nodes_per_subnet,
            self.label()
        )
    }
}

/// Placement of logical qubits onto nodes and data qubits.
///
/// Logical qubit `i` owns data qubits `4i..4i+4`; data qubit `q` lives on node
/// `q / N_q`. Each node also carries one ancilla that is addressed implicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QubitMap {
    dist: DistributionMode,
    num_logical: usize,
}

pub const DATA_PER_LOGICAL: usize = 4;

pub fn map_logical(num_logical: usize, dist: DistributionMode) -> QubitMap {
    QubitMap { dist, num_logical }
}

impl QubitMap {
    pub fn dist(&self) -> DistributionMode {
        self.dist
    }

    pub fn num_logical(&self) -> usize {
        self.num_logical
    }

    pub fn node_count(&self) -> usize {
        self.num_logical * self.dist.nodes_per_logical()
    }

    pub fn data_qubit_count(&self) -> usize {
        self.num_logical * DATA_PER_LOGICAL
    }

    pub fn node_of_data(&self, qubit: usize) -> Result<usize, HardwareError> {
        if qubit >= self.data_qubit_count() {
            return Err(HardwareError::QubitOutOfRange {
                qubit,
                count: self.data_qubit_count(),
            });
        }
        Ok(qubit / self.dist.data_per_node())
    }

    /// Index of a data qubit among the data qubits of its node.
    pub fn slot_of_data(&self, qubit: usize) -> usize {
        qubit % self.dist.data_per_node()
    }

    /// The `index`-th data qubit of a logical qubit.
    pub fn data_qubit(&self, logical: usize, index: usize) -> usize {
        logical * DATA_PER_LOGICAL + index
    }

    pub fn nodes_of_logical(&self, logical: usize) -> std::ops::Range<usize> {
        let per = self.dist.nodes_per_logical();
        logical * per..(logical + 1) * per
    }
}

/// Subnet of a data qubit for schemes that have subnets.
pub fn subnet_of_qubit(
    qubit: usize,
    map: &QubitMap,
    mode: &AddressingMode,
) -> Result<usize, HardwareError> {
    if mode.scheme() == EncodingScheme::Sisd {
        return Err(HardwareError::NoSubnets(mode.scheme()));
    }
    mode.subnet_of_node(map.node_of_data(qubit)?)
}

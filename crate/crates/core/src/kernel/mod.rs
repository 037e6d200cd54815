//! Neighborhood subgraph pairwise distance kernels on labeled graphs.
//!
//! For every radius `r <= r*` and distance `d <= d*` the kernel compares
//! pairs of neighborhood subgraphs of radius `r` whose roots are exactly
//! `d` apart. Each `(r, d)` block is normalized on its own and the blocks
//! are summed.

mod encoding;
mod features;
mod hash;
mod neighborhood;
mod pairs;
mod tuple;

use std::fmt;
use std::str::FromStr;

use crate::dataset::PropertyKinds;

pub use encoding::{
    encode, encode_graph, encode_neighborhood, graph_pseudo_id, invariant_encoding, EdgeCode, Encoding, PseudoId,
    VertexCode,
};
pub use features::{features, features_for_case, features_with_roots, SparseFeatureVector};
pub use hash::{hash_str, Fnv};
pub use neighborhood::{bfs, neighborhood, Neighborhood};
pub use pairs::{kappa_rd, kappa_rd_hard, kappa_rd_soft, kernel, kernel_pairs, normalize_rd, RootPair};
pub use tuple::kappa_tuple;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("vertex {0} is not in the graph")]
    VertexNotFound(usize),
    #[error("tuple kernel between different signatures `{0}` and `{1}`")]
    SignatureMismatch(String, String),
    #[error("invalid kernel configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatchKind {
    Hard,
    Soft,
}

/// Which property values take part in tuple kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TupleMode {
    Discrete,
    Real,
    Mixed,
}

impl TupleMode {
    pub fn from_kinds(kinds: &PropertyKinds) -> TupleMode {
        match (kinds.has_categorical(), kinds.has_numeric()) {
            (_, false) => TupleMode::Discrete,
            (false, true) => TupleMode::Real,
            (true, true) => TupleMode::Mixed,
        }
    }

    pub fn uses_discrete(self) -> bool {
        self != TupleMode::Real
    }

    pub fn uses_real(self) -> bool {
        self != TupleMode::Discrete
    }
}

macro_rules! name_enum {
    ($t:ty, $($v:path => $s:literal),+) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($v => $s),+ })
            }
        }
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s { $($s => Ok($v),)+ _ => Err(format!("unknown value `{s}`")) }
            }
        }
    };
}

name_enum!(MatchKind, MatchKind::Hard => "hard", MatchKind::Soft => "soft");
name_enum!(TupleMode, TupleMode::Discrete => "discrete", TupleMode::Real => "real", TupleMode::Mixed => "mixed");

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KernelConfig {
    pub max_radius: usize,
    pub max_distance: usize,
    pub match_kind: MatchKind,
    pub tuple_mode: TupleMode,
    pub use_kernel_points: bool,
    /// Feature indices are folded into `[0, 2^hash_bits)`.
    pub hash_bits: u32,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            max_radius: 1,
            max_distance: 2,
            match_kind: MatchKind::Hard,
            tuple_mode: TupleMode::Discrete,
            use_kernel_points: false,
            hash_bits: 30,
        }
    }
}

impl KernelConfig {
    pub fn new(max_radius: usize, max_distance: usize, match_kind: MatchKind) -> KernelConfig {
        KernelConfig {
            max_radius,
            max_distance,
            match_kind,
            ..KernelConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        if !(16..=64).contains(&self.hash_bits) {
            return Err(KernelError::InvalidConfig(format!(
                "hash_bits must lie in [16, 64], got {}",
                self.hash_bits
            )));
        }
        if self.max_radius > 32 || self.max_distance > 32 {
            return Err(KernelConfig::too_large());
        }
        Ok(())
    }

    fn too_large() -> KernelError {
        KernelError::InvalidConfig("radius and distance bounds above 32 are not supported".into())
    }

    pub(crate) fn fold(&self, index: u64) -> u64 {
        if self.hash_bits >= 64 {
            index
        } else {
            index & ((1u64 << self.hash_bits) - 1)
        }
    }

    /// `key=value` lines, one per field, in a fixed order.
    pub fn to_lines(&self) -> Vec<String> {
        vec![
            format!("max_radius={}", self.max_radius),
            format!("max_distance={}", self.max_distance),
            format!("match={}", self.match_kind),
            format!("tuple_mode={}", self.tuple_mode),
            format!("kernel_points={}", self.use_kernel_points),
            format!("hash_bits={}", self.hash_bits),
        ]
    }

    /// Apply one `key=value` setting written by [`KernelConfig::to_lines`].
    pub fn set(&mut self, key: &str, value: &str) -> Result<bool, String> {
        let bad = |e: &dyn fmt::Display| format!("{key}: {e}");
        match key {
            "max_radius" => self.max_radius = value.parse().map_err(|e| bad(&e))?,
            "max_distance" => self.max_distance = value.parse().map_err(|e| bad(&e))?,
            "match" => self.match_kind = value.parse().map_err(|e| bad(&e))?,
            "tuple_mode" => self.tuple_mode = value.parse().map_err(|e| bad(&e))?,
            "kernel_points" => self.use_kernel_points = value.parse().map_err(|e| bad(&e))?,
            "hash_bits" => self.hash_bits = value.parse().map_err(|e| bad(&e))?,
            _ => return Ok(false),
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_bits_range() {
        let mut c = KernelConfig::default();
        assert!(c.validate().is_ok());
        c.hash_bits = 15;
        assert!(c.validate().is_err());
        c.hash_bits = 64;
        assert!(c.validate().is_ok());
        assert_eq!(c.fold(u64::MAX), u64::MAX);
        c.hash_bits = 16;
        assert_eq!(c.fold(u64::MAX), 0xffff);
    }

    #[test]
    fn config_lines_round_trip() {
        let c = KernelConfig {
            max_radius: 2,
            max_distance: 3,
            match_kind: MatchKind::Soft,
            tuple_mode: TupleMode::Mixed,
            use_kernel_points: true,
            hash_bits: 20,
        };
        let mut d = KernelConfig::default();
        for l in c.to_lines() {
            let (k, v) = l.split_once('=').unwrap();
            assert!(d.set(k, v).unwrap());
        }
        assert_eq!(c, d);
    }
}

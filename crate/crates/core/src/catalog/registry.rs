use crate::error::{Error, Result};

use super::descriptor::MapDescriptor;
use super::maps::{MapKind, NlsSign};

/// Dimension used by the vector maps when no `:N` suffix is given.
pub const DEFAULT_VECTOR_N: usize = 2;

/// Stable registry names, in listing order.
pub const MAP_NAMES: [&str; 10] = [
    "adler",
    "nls6",
    "adler-yamilov",
    "dnls6-orig",
    "dnls6-reparam",
    "dnls4",
    "dihedral6",
    "dihedral-linear",
    "vector-nls",
    "vector-z2",
];

/// Read-only collection of map descriptors, addressed by name.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    maps: Vec<MapDescriptor>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    pub fn standard() -> Self {
        let maps = MAP_NAMES
            .iter()
            .map(|name| resolve(name).expect("standard names resolve"))
            .collect();
        Registry { maps }
    }

    pub fn maps(&self) -> &[MapDescriptor] {
        &self.maps
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Looks up `name`; vector maps also accept `name:N`.
    pub fn get(&self, name: &str) -> Result<MapDescriptor> {
        let (base, _) = split_dim(name)?;
        if !self.maps.iter().any(|m| strip_dim(&m.name) == base) {
            return Err(Error::UnknownMap(name.into()));
        }
        resolve(name)
    }
}

fn strip_dim(name: &str) -> &str {
    name.split(':').next().unwrap_or(name)
}

fn split_dim(name: &str) -> Result<(&str, Option<usize>)> {
    match name.split_once(':') {
        None => Ok((name, None)),
        Some((base, n)) => match n.parse::<usize>() {
            Ok(n) if n >= 1 => Ok((base, Some(n))),
            _ => Err(Error::UnknownMap(name.into())),
        },
    }
}

/// Builds the descriptor for a registry name, independent of any registry.
pub fn resolve(name: &str) -> Result<MapDescriptor> {
    let (base, n) = split_dim(name)?;
    let vector_n = n.unwrap_or(DEFAULT_VECTOR_N);
    let kind = match base {
        "adler" => MapKind::Adler,
        "nls6" => MapKind::Nls6,
        "adler-yamilov" => MapKind::AdlerYamilov,
        "dnls6-orig" => MapKind::Dnls6Orig,
        "dnls6-reparam" => MapKind::Dnls6Reparam,
        "dnls4" => MapKind::Dnls4,
        "dihedral6" => MapKind::Dihedral6,
        "dihedral-linear" => MapKind::DihedralLinear,
        "vector-nls" => MapKind::VectorNls {
            n: vector_n,
            sign: NlsSign::AdlerYamilov,
        },
        "vector-nls-reversed" => MapKind::VectorNls {
            n: vector_n,
            sign: NlsSign::Reversed,
        },
        "vector-z2" => MapKind::VectorZ2 { n: vector_n },
        _ => return Err(Error::UnknownMap(name.into())),
    };
    let vector = matches!(kind, MapKind::VectorNls { .. } | MapKind::VectorZ2 { .. });
    if n.is_some() && !vector {
        return Err(Error::UnknownMap(name.into()));
    }
    Ok(MapDescriptor::from_kind(kind))
}

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{MapError, Result};

/// Vectorization (`hv`, `rv`) and unrolling (`hu`, `ru`) factors on the
/// hidden (`H`) and reduction (`R`) dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MappingParams {
    pub hv: usize,
    pub hu: usize,
    pub rv: usize,
    pub ru: usize,
}

impl Default for MappingParams {
    fn default() -> Self {
        Self {
            hv: 1,
            hu: 1,
            rv: 1,
            ru: 1,
        }
    }
}

impl MappingParams {
    pub fn new(hv: usize, hu: usize, rv: usize, ru: usize) -> Result<Self> {
        let p = Self { hv, hu, rv, ru };
        p.check()?;
        Ok(p)
    }

    /// `hv = 1`, as every loop-based design uses.
    pub fn loop_based(hu: usize, ru: usize, rv: usize) -> Result<Self> {
        Self::new(1, hu, rv, ru)
    }

    pub fn check(&self) -> Result<()> {
        for (name, v) in [
            ("hv", self.hv),
            ("hu", self.hu),
            ("rv", self.rv),
            ("ru", self.ru),
        ] {
            if v == 0 {
                return Err(MapError::Params(format!("{name} must be >= 1")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for MappingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hv={},hu={},ru={},rv={}",
            self.hv, self.hu, self.ru, self.rv
        )
    }
}

/// Parses `hu,ru,rv` (loop-based, `hv = 1`) or `key=value` pairs such as
/// `hv=400,ru=6,rv=40`. Missing keys default to 1.
impl FromStr for MappingParams {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let num = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| MapError::Params(format!("`{v}` is not a count")))
        };
        if parts.iter().all(|p| !p.contains('=')) {
            let [hu, ru, rv] = parts[..] else {
                return Err(MapError::Params(format!("expected `hu,ru,rv`, got `{s}`")));
            };
            return Self::loop_based(num(hu)?, num(ru)?, num(rv)?);
        }
        let mut p = Self::default();
        let mut seen = [false; 4];
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| MapError::Params(format!("`{part}` is not key=value")))?;
            let slot = match key.trim() {
                "hv" => 0,
                "hu" => 1,
                "rv" => 2,
                "ru" => 3,
                other => return Err(MapError::Params(format!("unknown parameter `{other}`"))),
            };
            if std::mem::replace(&mut seen[slot], true) {
                return Err(MapError::Params(format!("`{key}` given twice")));
            }
            let v = num(value.trim())?;
            match slot {
                0 => p.hv = v,
                1 => p.hu = v,
                2 => p.rv = v,
                _ => p.ru = v,
            }
        }
        p.check()?;
        Ok(p)
    }
}

use std::fmt;
use std::str::FromStr;

use crate::identity::Identity;

/// Kind of argument that rules out a degeneration `J ↛ J'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NondegClass {
    AutDim,
    Nilindex,
    /// `dim (J^k)_parity < dim (J'^k)_parity`
    PowerDims { k: usize, parity: usize },
    Annihilator(usize),
    Center(usize),
    Associativity,
    Identity(Identity),
    AFunctor,
    FFunctor,
    EvenPart,
    ClosedSetR,
    External,
    Inconclusive,
}

impl NondegClass {
    /// Classes obtained by applying the battery to a derived pair.
    pub fn is_functor(&self) -> bool {
        matches!(self, NondegClass::AFunctor | NondegClass::FFunctor | NondegClass::EvenPart)
    }

    /// Classes that are checked by evidence or by citation, not by the battery.
    pub fn is_flagged(&self) -> bool {
        matches!(self, NondegClass::ClosedSetR | NondegClass::External)
    }

    /// Same kind, ignoring `k`/parity/identity details.
    pub fn same_kind(&self, other: &NondegClass) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }
}

impl fmt::Display for NondegClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NondegClass::AutDim => f.write_str("aut_dim"),
            NondegClass::Nilindex => f.write_str("nilindex"),
            NondegClass::PowerDims { k, parity } => write!(f, "power_dims({k},{parity})"),
            NondegClass::Annihilator(i) => write!(f, "annihilator({i})"),
            NondegClass::Center(i) => write!(f, "center({i})"),
            NondegClass::Associativity => f.write_str("associativity"),
            NondegClass::Identity(p) => write!(f, "identity({p})"),
            NondegClass::AFunctor => f.write_str("a_functor"),
            NondegClass::FFunctor => f.write_str("f_functor"),
            NondegClass::EvenPart => f.write_str("even_part"),
            NondegClass::ClosedSetR => f.write_str("closed_set_R"),
            NondegClass::External => f.write_str("external"),
            NondegClass::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

fn parity(s: &str) -> Result<usize, String> {
    match s.trim() {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(format!("parity must be 0 or 1, got {other:?}")),
    }
}

impl FromStr for NondegClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let simple = match s {
            "aut_dim" => Some(NondegClass::AutDim),
            "nilindex" => Some(NondegClass::Nilindex),
            "associativity" => Some(NondegClass::Associativity),
            "a_functor" => Some(NondegClass::AFunctor),
            "f_functor" => Some(NondegClass::FFunctor),
            "even_part" => Some(NondegClass::EvenPart),
            "closed_set_R" => Some(NondegClass::ClosedSetR),
            "external" => Some(NondegClass::External),
            "inconclusive" => Some(NondegClass::Inconclusive),
            _ => None,
        };
        if let Some(c) = simple {
            return Ok(c);
        }
        let (head, rest) = s.split_once('(').ok_or_else(|| format!("unknown reason {s:?}"))?;
        let args = rest.strip_suffix(')').ok_or_else(|| format!("unclosed reason {s:?}"))?;
        match head {
            "power_dims" => {
                let (k, p) = args.split_once(',').ok_or("power_dims needs (k,parity)")?;
                let k: usize = k.trim().parse().map_err(|_| format!("bad power {k:?}"))?;
                Ok(NondegClass::PowerDims { k, parity: parity(p)? })
            }
            "annihilator" => Ok(NondegClass::Annihilator(parity(args)?)),
            "center" => Ok(NondegClass::Center(parity(args)?)),
            "identity" => Identity::parse(args).map(NondegClass::Identity).map_err(|e| e.to_string()),
            _ => Err(format!("unknown reason {s:?}")),
        }
    }
}

//! Necessary conditions for `J → J'`, tried in a fixed order. A certificate
//! records the first condition that fails.

use std::fmt;

use crate::algebra::SuperAlgebra;
use crate::identity::{check_associativity, Identity};
use crate::invariants::{annihilator, assoc_center, orbit_dim, power_filtration, GradedDims, InvariantError};

use super::NondegClass;

/// Identities every battery run tries, before any table-specific ones.
pub fn default_identities() -> Vec<Identity> {
    ["(y1*y2)*x1", "(y1*y2)*y3", "(x1*y1)*y2", "ordinary_jordan"]
        .iter()
        .map(|s| Identity::parse(s).expect("built-in identity parses"))
        .collect()
}

/// Everything the battery compares, computed once per algebra.
#[derive(Debug, Clone)]
pub struct Profile {
    pub name: String,
    pub kind: (usize, usize),
    pub orbit_dim: usize,
    pub family: bool,
    pub nilindex: usize,
    /// `powers[k-1]` is `dim J^k`.
    pub powers: Vec<GradedDims>,
    pub ann: GradedDims,
    pub center: GradedDims,
    pub associative: bool,
    pub identities: Vec<(Identity, bool)>,
    /// Profiles of `a(J)`, `F(J)` and `J_0`, present while depth remains.
    pub subs: Option<Box<[Profile; 3]>>,
    constants: SuperAlgebra,
}

impl Profile {
    pub fn new(j: &SuperAlgebra, identities: &[Identity], depth: usize) -> Result<Self, InvariantError> {
        let pf = power_filtration(j)?;
        let subs = if depth == 0 {
            None
        } else {
            let sub = |alg: SuperAlgebra| Profile::new(&alg, identities, depth - 1);
            Some(Box::new([sub(j.a_functor())?, sub(j.f_functor())?, sub(j.even_part())?]))
        };
        Ok(Profile {
            name: j.name().to_string(),
            kind: j.kind(),
            orbit_dim: orbit_dim(j),
            family: j.is_family(),
            nilindex: pf.nilindex,
            powers: pf.dims,
            ann: annihilator(j).dims,
            center: assoc_center(j),
            associative: check_associativity(j),
            identities: identities.iter().map(|p| (p.clone(), p.holds_in(j))).collect(),
            subs,
            constants: j.clone(),
        })
    }

    fn power(&self, k: usize) -> GradedDims {
        self.powers.get(k - 1).copied().unwrap_or_default()
    }
}

/// A failed necessary condition, possibly found inside a functor image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub class: NondegClass,
    pub inner: Option<Box<Certificate>>,
    pub detail: String,
}

impl Certificate {
    fn leaf(class: NondegClass, detail: String) -> Self {
        Certificate { class, inner: None, detail }
    }

    /// The innermost certificate of a functor chain.
    pub fn root(&self) -> &Certificate {
        self.inner.as_deref().map_or(self, Certificate::root)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner {
            Some(inner) => write!(f, "{} [{}]", self.class, inner),
            None => write!(f, "{}: {}", self.class, self.detail),
        }
    }
}

/// Every failed condition for `J → J'`, in battery order. Empty means
/// inconclusive. `strict` is set at the top level, where the two orbits are
/// known to be distinct, so `dim O` must drop.
fn run(j: &Profile, k: &Profile, strict: bool, all: bool) -> Vec<Certificate> {
    let mut out = Vec::new();
    macro_rules! found {
        ($c:expr) => {{
            out.push($c);
            if !all {
                return out;
            }
        }};
    }
    if j.constants.same_constants(&k.constants) {
        return out;
    }
    // a family adds one dimension to the orbit union
    let slack = usize::from(j.family) + usize::from(!strict);
    if k.orbit_dim + 1 > j.orbit_dim + slack {
        found!(Certificate::leaf(
            NondegClass::AutDim,
            format!("dim O(J) = {}{}, dim O(J') = {}", j.orbit_dim, if j.family { " (+1 family)" } else { "" }, k.orbit_dim)
        ));
    }
    // equal orbit dimension forces J' into O(J), so any invariant that differs rules it out
    if !strict && !j.family && j.orbit_dim == k.orbit_dim {
        if let Some(what) = distinguishing_invariant(j, k) {
            found!(Certificate::leaf(
                NondegClass::AutDim,
                format!("dim O(J) = dim O(J') = {} and {what} differs", j.orbit_dim)
            ));
        }
    }
    if j.nilindex < k.nilindex {
        found!(Certificate::leaf(NondegClass::Nilindex, format!("nilindex {} < {}", j.nilindex, k.nilindex)));
    }
    let top = j.powers.len().max(k.powers.len());
    for pk in 2..=top {
        for parity in 0..2 {
            let (a, b) = (j.power(pk).get(parity), k.power(pk).get(parity));
            if a < b {
                found!(Certificate::leaf(
                    NondegClass::PowerDims { k: pk, parity },
                    format!("dim (J^{pk})_{parity} = {a} < {b}")
                ));
            }
        }
    }
    for parity in 0..2 {
        let (a, b) = (j.ann.get(parity), k.ann.get(parity));
        if a > b {
            found!(Certificate::leaf(NondegClass::Annihilator(parity), format!("dim Ann_{parity} {a} > {b}")));
        }
    }
    for parity in 0..2 {
        let (a, b) = (j.center.get(parity), k.center.get(parity));
        if a > b {
            found!(Certificate::leaf(NondegClass::Center(parity), format!("dim Z_{parity} {a} > {b}")));
        }
    }
    if j.associative && !k.associative {
        found!(Certificate::leaf(NondegClass::Associativity, "J associative, J' not".into()));
    }
    for ((p, holds), (_, holds_k)) in j.identities.iter().zip(&k.identities) {
        if *holds && !holds_k {
            found!(Certificate::leaf(NondegClass::Identity(p.clone()), format!("{p} holds in J, fails in J'")));
        }
    }
    if let (Some(js), Some(ks)) = (&j.subs, &k.subs) {
        let classes = [NondegClass::AFunctor, NondegClass::FFunctor, NondegClass::EvenPart];
        for ((a, b), class) in js.iter().zip(ks.iter()).zip(classes) {
            if let Some(inner) = run(a, b, false, false).into_iter().next() {
                found!(Certificate { class, inner: Some(Box::new(inner)), detail: format!("{} vs {}", a.name, b.name) });
            }
        }
    }
    out
}

/// The first isomorphism invariant on which two profiles disagree.
fn distinguishing_invariant(j: &Profile, k: &Profile) -> Option<&'static str> {
    if j.kind != k.kind {
        return Some("type");
    }
    if j.nilindex != k.nilindex {
        return Some("nilindex");
    }
    if j.powers != k.powers {
        return Some("power filtration");
    }
    if j.ann != k.ann {
        return Some("annihilator");
    }
    if j.center != k.center {
        return Some("center");
    }
    if j.associative != k.associative {
        return Some("associativity");
    }
    if j.identities != k.identities {
        return Some("identity");
    }
    match (&j.subs, &k.subs) {
        (Some(js), Some(ks)) => {
            js.iter().zip(ks.iter()).find_map(|(a, b)| (a.orbit_dim != b.orbit_dim).then_some("functor image").or_else(|| distinguishing_invariant(a, b)))
        }
        _ => None,
    }
}

/// All certificates against `J → J'` in battery order; the first is the one
/// the battery reports.
pub fn battery(j: &Profile, k: &Profile) -> Vec<Certificate> {
    run(j, k, true, true)
}

/// A certificate of exactly `class` (functor classes match on the outer kind).
pub fn check_class(j: &Profile, k: &Profile, class: &NondegClass) -> Option<Certificate> {
    battery(j, k).into_iter().find(|c| &c.class == class || (class.is_functor() && c.class.same_kind(class)))
}

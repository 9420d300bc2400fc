//! Constructions addressable by a string id with named numeric parameters.

use std::collections::BTreeMap;

use super::*;

pub type Params = BTreeMap<String, f64>;

#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    /// `None` marks a required parameter.
    pub default: Option<f64>,
    pub help: &'static str,
}

pub trait Construction: Send + Sync {
    fn id(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn params(&self) -> &'static [ParamSpec];
    fn build(&self, params: &Params) -> Result<NamedConstruction>;
}

const P: ParamSpec = ParamSpec { name: "p", default: None, help: "moment exponent" };
const N: ParamSpec = ParamSpec { name: "n", default: None, help: "size parameter" };
const Q: ParamSpec = ParamSpec { name: "q", default: None, help: "Lebesgue exponent (inf allowed where noted)" };
const EPS: ParamSpec = ParamSpec { name: "eps", default: None, help: "small atom mass in (0, 1)" };

/// Fills in defaults and rejects unknown or missing names.
fn resolve(specs: &[ParamSpec], given: &Params) -> Result<Params> {
    for key in given.keys() {
        if !specs.iter().any(|s| s.name == key) {
            return Err(Error::UnknownName {
                kind: "parameter",
                name: key.clone(),
                available: specs.iter().map(|s| s.name).collect::<Vec<_>>().join(", "),
            });
        }
    }
    let mut out = Params::new();
    for s in specs {
        let v = match (given.get(s.name), s.default) {
            (Some(v), _) => *v,
            (None, Some(d)) => d,
            (None, None) => return Err(Error::Parse(format!("missing parameter '{}'", s.name))),
        };
        out.insert(s.name.to_string(), v);
    }
    Ok(out)
}

fn size(params: &Params, name: &'static str) -> Result<usize> {
    let v = params[name];
    if !(v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64) {
        return Err(Error::param(name, v, "must be a non-negative integer"));
    }
    Ok(v as usize)
}

macro_rules! construction {
    ($ty:ident, $id:literal, $desc:literal, [$($spec:expr),*], |$p:ident| $body:expr) => {
        struct $ty;
        impl Construction for $ty {
            fn id(&self) -> &'static str {
                $id
            }
            fn description(&self) -> &'static str {
                $desc
            }
            fn params(&self) -> &'static [ParamSpec] {
                &[$($spec),*]
            }
            fn build(&self, given: &Params) -> Result<NamedConstruction> {
                let $p = resolve(self.params(), given)?;
                $body
            }
        }
    };
}

construction!(FnPair, "fn", "uniform A_n vs B_n in the zero-sum hyperplane of l_q^{2n}; barycenter ratio",
    [N, ParamSpec { name: "q", default: Some(f64::INFINITY), help: "Lebesgue exponent, inf allowed" }, P],
    |p| make_fn(size(&p, "n")?, p["q"], p["p"]));
construction!(Bipartite, "bipartite", "the two sides of K_{n,n}; metric barycenter ratio",
    [N, P], |p| make_bipartite(size(&p, "n")?, p["p"]));
construction!(DisjointBernoulli, "disjoint-bernoulli", "Rademacher systems with disjoint supports in L_q; roundness ratio",
    [N, Q, P], |p| make_disjoint_bernoulli(size(&p, "n")?, p["q"], p["p"]));
construction!(JensenTwoPoint, "jensen-two-point", "uniform on {-1, 1}; Jensen ratio",
    [P], |p| make_jensen(JensenKind::TwoPoint, p["p"]));
construction!(JensenEps, "jensen-eps", "mass eps at 1 and 1 - eps at 0; Jensen ratio",
    [EPS, P], |p| make_jensen(JensenKind::Eps(p["eps"]), p["p"]));
construction!(JensenBasis, "jensen-basis", "uniform on {+-e_i} in l_q^n; Jensen ratio",
    [N, Q, P], |p| make_jensen(JensenKind::Basis { n: size(&p, "n")?, q: p["q"] }, p["p"]));
construction!(JensenRademacher, "jensen-rademacher", "uniform on {+-r_i} in L_q; Jensen ratio",
    [N, Q, P], |p| make_jensen(JensenKind::Rademacher { n: size(&p, "n")?, q: p["q"] }, p["p"]));
construction!(SchattenParallelogram, "schatten-parallelogram", "e_j vs i e_{n+k} in the parallelogram S_1 image; roundness ratio",
    [N, P], |p| make_schatten_parallelogram(size(&p, "n")?, p["p"]));
construction!(TwoPoint, "two-point", "X, Y iid uniform on {0, 1}; barycenter ratio",
    [P], |p| make_two_point(p["p"]));
construction!(EpsAtom, "eps-atom", "X = Y with an eps atom at a unit vector; centered infimum ratio",
    [EPS, P], |p| make_eps_atom(p["eps"], p["p"]));

static REGISTRY: &[&dyn Construction] = &[
    &FnPair,
    &Bipartite,
    &DisjointBernoulli,
    &JensenTwoPoint,
    &JensenEps,
    &JensenBasis,
    &JensenRademacher,
    &SchattenParallelogram,
    &TwoPoint,
    &EpsAtom,
];

pub fn constructions() -> &'static [&'static dyn Construction] {
    REGISTRY
}

/// Looks up a construction by id; `_` and `-` are interchangeable.
pub fn construction(id: &str) -> Result<&'static dyn Construction> {
    let key = id.replace('_', "-");
    REGISTRY.iter().copied().find(|c| c.id() == key).ok_or_else(|| Error::UnknownName {
        kind: "construction",
        name: id.to_string(),
        available: REGISTRY.iter().map(|c| c.id()).collect::<Vec<_>>().join(", "),
    })
}

//! The problem file format.
//!
//! Every integer is a JSON string holding a decimal literal, so values of
//! any size survive a round trip. Field names below are the compatibility
//! contract; [`Problem::to_json`] and [`Problem::from_json`] are inverse.

use serde_json::{json, Map, Value};

use entrolab_core::entropy::{Budget, Endomorphism, FiniteSubgroup};
use entrolab_core::finab::{FinAbGroup, Homomorphism, Subgroup};
use entrolab_core::linalg::Matrix;
use entrolab_core::topology::{Carrier, OpenSubgroup, TopologyBase};
use entrolab_core::window::{BandedEndo, Flavor, IndexSet, LatticeEndo, LatticeGroup, ShiftKind, Sublattice, Window, WindowGroup, WindowSubgroup, FiniteSupport};
use entrolab_core::BigInt;

use crate::CliError;

type Parsed<T> = Result<T, CliError>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Task {
    HStar,
    EntStar,
    Ent,
    HTop,
    Bridge,
    BernoulliCert,
    Residual,
}

impl Task {
    pub const ALL: [Task; 7] = [Task::HStar, Task::EntStar, Task::Ent, Task::HTop, Task::Bridge, Task::BernoulliCert, Task::Residual];

    pub fn name(self) -> &'static str {
        match self {
            Task::HStar => "hstar",
            Task::EntStar => "entstar",
            Task::Ent => "ent",
            Task::HTop => "htop",
            Task::Bridge => "bridge",
            Task::BernoulliCert => "bernoulli-cert",
            Task::Residual => "residual",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroupSpec {
    /// `⊕ Z(m_i)`.
    Finite { moduli: Vec<BigInt> },
    /// `Z^rank`.
    Lattice { rank: usize },
    /// `K^(I)` or `K^I` with `K = ⊕ Z(base_i)`.
    Window { base: Vec<BigInt>, index_set: IndexSet, flavor: Flavor },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EndoSpec {
    /// Rows of the matrix acting on column vectors.
    Matrix { rows: Vec<Vec<BigInt>> },
    Shift { kind: ShiftKind, power: u32 },
    /// `(φx)_j = Σ_d c[j mod P][d + b](x_{j - offset + d})` for `|d| ≤ b`;
    /// each coefficient is given by the rows of a matrix over the base.
    Banded { offset: i64, half_width: usize, coefficients: Vec<Vec<Vec<Vec<BigInt>>>> },
    Identity,
    Zero,
    Scalar { factor: BigInt },
}

/// A subgroup named relative to the carrier it is resolved on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SubgroupSpec {
    /// Generators of a subgroup of a finite group, or columns generating a
    /// finite-index sublattice.
    Generators(Vec<Vec<BigInt>>),
    /// A section of `K^[lo, hi)`: the open subgroup of everything whose
    /// restriction lies in it, or the finite subgroup supported there.
    Section { lo: i64, hi: i64, generators: Vec<Vec<BigInt>> },
    /// `N_m` as an open subgroup, `K^{W_m}` as a finite one.
    Basic(usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TopologySpec {
    Profinite { bound: Option<usize> },
    Natural { prefix: Option<usize> },
    Product { prefix: Option<usize> },
    Explicit { members: Vec<SubgroupSpec>, exhaustive: bool },
    Indiscrete,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CertificateSpec {
    pub p: u64,
    pub m: usize,
    pub n_max: usize,
    pub shift: ShiftKind,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Problem {
    pub task: Task,
    pub group: Option<GroupSpec>,
    pub endomorphism: Option<EndoSpec>,
    pub topology: Option<TopologySpec>,
    pub subgroup: Option<SubgroupSpec>,
    pub certificate: Option<CertificateSpec>,
    /// Members intersected by the residual task on non-exhaustive bases.
    pub prefix_len: Option<usize>,
    pub budget: Budget,
    /// Fields the output must contain with exactly these values.
    pub expect: Option<Map<String, Value>>,
    /// Free text for readers of the file.
    pub note: Option<String>,
}

impl Problem {
    pub fn new(task: Task) -> Self {
        Problem { task, group: None, endomorphism: None, topology: None, subgroup: None, certificate: None, prefix_len: None, budget: Budget::default(), expect: None, note: None }
    }

    pub fn from_json(v: &Value) -> Parsed<Self> {
        let o = object(v, "problem")?;
        let known = ["task", "group", "endomorphism", "topology", "subgroup", "certificate", "prefix_len", "budget", "expect", "note"];
        if let Some(k) = o.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(CliError::Input(format!("unknown key {k:?}")));
        }
        let name = string(field(o, "task")?, "task")?;
        let task = Task::from_name(name).ok_or_else(|| CliError::Input(format!("unknown task {name:?}")))?;
        let expect = match o.get("expect") {
            Some(e) => Some(object(e, "expect")?.clone()),
            None => None,
        };
        Ok(Problem {
            task,
            group: o.get("group").map(GroupSpec::from_json).transpose()?,
            endomorphism: o.get("endomorphism").map(EndoSpec::from_json).transpose()?,
            topology: o.get("topology").map(TopologySpec::from_json).transpose()?,
            subgroup: o.get("subgroup").map(SubgroupSpec::from_json).transpose()?,
            certificate: o.get("certificate").map(CertificateSpec::from_json).transpose()?,
            prefix_len: o.get("prefix_len").map(|v| count(v, "prefix_len")).transpose()?,
            budget: match o.get("budget") {
                Some(b) => budget_from_json(b)?,
                None => Budget::default(),
            },
            expect,
            note: o.get("note").map(|n| string(n, "note").map(str::to_owned)).transpose()?,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut o = Map::new();
        o.insert("task".into(), json!(self.task.name()));
        if let Some(g) = &self.group {
            o.insert("group".into(), g.to_json());
        }
        if let Some(e) = &self.endomorphism {
            o.insert("endomorphism".into(), e.to_json());
        }
        if let Some(t) = &self.topology {
            o.insert("topology".into(), t.to_json());
        }
        if let Some(s) = &self.subgroup {
            o.insert("subgroup".into(), s.to_json());
        }
        if let Some(c) = &self.certificate {
            o.insert("certificate".into(), c.to_json());
        }
        if let Some(p) = self.prefix_len {
            o.insert("prefix_len".into(), dec(p));
        }
        o.insert("budget".into(), budget_to_json(&self.budget));
        if let Some(e) = &self.expect {
            o.insert("expect".into(), Value::Object(e.clone()));
        }
        if let Some(n) = &self.note {
            o.insert("note".into(), json!(n));
        }
        Value::Object(o)
    }

    pub fn carrier(&self) -> Parsed<Carrier> {
        self.group.as_ref().ok_or_else(|| missing("group"))?.build()
    }

    pub fn endomorphism(&self, carrier: &Carrier) -> Parsed<Endomorphism> {
        self.endomorphism.as_ref().ok_or_else(|| missing("endomorphism"))?.build(carrier)
    }

    pub fn topology(&self, carrier: &Carrier) -> Parsed<TopologyBase> {
        self.topology.as_ref().ok_or_else(|| missing("topology"))?.build(carrier, &self.budget)
    }
}

fn missing(key: &str) -> CliError {
    CliError::Input(format!("this task needs a {key:?} entry"))
}

impl GroupSpec {
    pub fn from_json(v: &Value) -> Parsed<Self> {
        let o = object(v, "group")?;
        match kind(o, "group")? {
            "finite" => Ok(GroupSpec::Finite { moduli: ints(field(o, "moduli")?, "moduli")? }),
            "lattice" => Ok(GroupSpec::Lattice { rank: count(field(o, "rank")?, "rank")? }),
            "window" => {
                let index_set = match string(field(o, "index_set")?, "index_set")? {
                    "naturals" => IndexSet::Naturals,
                    "integers" => IndexSet::Integers,
                    s => return Err(CliError::Input(format!("index_set must be \"naturals\" or \"integers\", not {s:?}"))),
                };
                let flavor = match string(field(o, "flavor")?, "flavor")? {
                    "direct_sum" => Flavor::DirectSum,
                    "product" => Flavor::Product,
                    s => return Err(CliError::Input(format!("flavor must be \"direct_sum\" or \"product\", not {s:?}"))),
                };
                Ok(GroupSpec::Window { base: ints(field(o, "base")?, "base")?, index_set, flavor })
            }
            k => Err(CliError::Input(format!("unknown group kind {k:?}"))),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            GroupSpec::Finite { moduli } => json!({"kind": "finite", "moduli": int_list(moduli)}),
            GroupSpec::Lattice { rank } => json!({"kind": "lattice", "rank": dec(rank)}),
            GroupSpec::Window { base, index_set, flavor } => json!({
                "kind": "window",
                "base": int_list(base),
                "index_set": match index_set { IndexSet::Naturals => "naturals", IndexSet::Integers => "integers" },
                "flavor": match flavor { Flavor::DirectSum => "direct_sum", Flavor::Product => "product" },
            }),
        }
    }

    pub fn build(&self) -> Parsed<Carrier> {
        Ok(match self {
            GroupSpec::Finite { moduli } => Carrier::Finite(FinAbGroup::new(moduli.clone())?),
            GroupSpec::Lattice { rank } => Carrier::Lattice(LatticeGroup::new(*rank)?),
            GroupSpec::Window { base, index_set, flavor } => Carrier::Window(WindowGroup::new(FinAbGroup::new(base.clone())?, *index_set, *flavor)?),
        })
    }
}

impl EndoSpec {
    pub fn from_json(v: &Value) -> Parsed<Self> {
        let o = object(v, "endomorphism")?;
        match kind(o, "endomorphism")? {
            "matrix" => Ok(EndoSpec::Matrix { rows: int_rows(field(o, "rows")?, "rows")? }),
            "shift" => {
                let name = string(field(o, "shift")?, "shift")?;
                let kind = ShiftKind::from_name(name).ok_or_else(|| CliError::Input(format!("unknown shift kind {name:?}")))?;
                let power = match o.get("power") {
                    Some(p) => u32::try_from(count(p, "power")?).map_err(|_| CliError::Input("power is too large".into()))?,
                    None => 1,
                };
                Ok(EndoSpec::Shift { kind, power })
            }
            "banded" => {
                let coefficients = array(field(o, "coefficients")?, "coefficients")?
                    .iter()
                    .map(|row| array(row, "coefficients")?.iter().map(|m| int_rows(m, "coefficient")).collect::<Parsed<Vec<_>>>())
                    .collect::<Parsed<Vec<_>>>()?;
                Ok(EndoSpec::Banded {
                    offset: signed(field(o, "offset")?, "offset")?,
                    half_width: count(field(o, "half_width")?, "half_width")?,
                    coefficients,
                })
            }
            "identity" => Ok(EndoSpec::Identity),
            "zero" => Ok(EndoSpec::Zero),
            "scalar" => Ok(EndoSpec::Scalar { factor: int(field(o, "factor")?, "factor")? }),
            k => Err(CliError::Input(format!("unknown endomorphism kind {k:?}"))),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            EndoSpec::Matrix { rows } => json!({"kind": "matrix", "rows": rows.iter().map(|r| int_list(r)).collect::<Vec<_>>()}),
            EndoSpec::Shift { kind, power } => json!({"kind": "shift", "shift": kind.name(), "power": dec(power)}),
            EndoSpec::Banded { offset, half_width, coefficients } => json!({
                "kind": "banded",
                "offset": dec(offset),
                "half_width": dec(half_width),
                "coefficients": coefficients
                    .iter()
                    .map(|row| row.iter().map(|m| m.iter().map(|r| int_list(r)).collect::<Vec<_>>()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            }),
            EndoSpec::Identity => json!({"kind": "identity"}),
            EndoSpec::Zero => json!({"kind": "zero"}),
            EndoSpec::Scalar { factor } => json!({"kind": "scalar", "factor": factor.to_string()}),
        }
    }

    pub fn build(&self, carrier: &Carrier) -> Parsed<Endomorphism> {
        let unsupported = |what: &str| CliError::Input(format!("{what} endomorphisms are not defined on this group"));
        Ok(match (self, carrier) {
            (EndoSpec::Matrix { rows }, Carrier::Finite(g)) => Endomorphism::Finite(Homomorphism::endomorphism(g.clone(), matrix(rows, g.rank())?)?),
            (EndoSpec::Matrix { rows }, Carrier::Lattice(l)) => Endomorphism::Lattice(LatticeEndo::new(*l, matrix(rows, l.rank())?)?),
            (EndoSpec::Identity, Carrier::Finite(g)) => Endomorphism::Finite(Homomorphism::identity(g)),
            (EndoSpec::Zero, Carrier::Finite(g)) => Endomorphism::Finite(Homomorphism::zero(g, g)),
            (EndoSpec::Scalar { factor }, Carrier::Finite(g)) => Endomorphism::Finite(Homomorphism::scalar(g, factor.clone())),
            (EndoSpec::Identity, Carrier::Lattice(l)) => Endomorphism::Lattice(LatticeEndo::identity(*l)),
            (EndoSpec::Zero, Carrier::Lattice(l)) => Endomorphism::Lattice(LatticeEndo::scalar(*l, BigInt::from(0))),
            (EndoSpec::Scalar { factor }, Carrier::Lattice(l)) => Endomorphism::Lattice(LatticeEndo::scalar(*l, factor.clone())),
            (EndoSpec::Shift { kind, power }, Carrier::Window(g)) => Endomorphism::Window(BandedEndo::shift_map(g, *kind, *power)?),
            (EndoSpec::Banded { offset, half_width, coefficients }, Carrier::Window(g)) => {
                let k = g.base();
                let coeffs = coefficients
                    .iter()
                    .map(|row| row.iter().map(|m| Ok(Homomorphism::endomorphism(k.clone(), matrix(m, k.rank())?)?)).collect::<Parsed<Vec<_>>>())
                    .collect::<Parsed<Vec<_>>>()?;
                Endomorphism::Window(BandedEndo::new(g, *offset, *half_width, coeffs)?)
            }
            (EndoSpec::Identity, Carrier::Window(g)) => Endomorphism::Window(BandedEndo::identity(g)),
            (EndoSpec::Zero, Carrier::Window(g)) => Endomorphism::Window(BandedEndo::zero(g)),
            (EndoSpec::Scalar { factor }, Carrier::Window(g)) => Endomorphism::Window(BandedEndo::diagonal(g, Homomorphism::scalar(g.base(), factor.clone()))),
            (EndoSpec::Matrix { .. }, Carrier::Window(_)) => return Err(unsupported("matrix")),
            (EndoSpec::Shift { .. }, _) => return Err(unsupported("shift")),
            (EndoSpec::Banded { .. }, _) => return Err(unsupported("banded")),
        })
    }
}

/// A `rank × rank` matrix; an empty row list is the `0 × 0` matrix.
fn matrix(rows: &[Vec<BigInt>], rank: usize) -> Parsed<Matrix<BigInt>> {
    if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
        return Err(CliError::Input(format!("expected a {rank} x {rank} matrix")));
    }
    Ok(if rank == 0 { Matrix::zeros(0, 0) } else { Matrix::from_rows(rows.to_vec()) })
}

impl SubgroupSpec {
    pub fn from_json(v: &Value) -> Parsed<Self> {
        let o = object(v, "subgroup")?;
        if let Some(m) = o.get("basic") {
            return Ok(SubgroupSpec::Basic(count(m, "basic")?));
        }
        let generators = int_rows(field(o, "generators")?, "generators")?;
        match o.get("window") {
            Some(w) => {
                let w = array(w, "window")?;
                if w.len() != 2 {
                    return Err(CliError::Input("window must be [lo, hi]".into()));
                }
                Ok(SubgroupSpec::Section { lo: signed(&w[0], "window")?, hi: signed(&w[1], "window")?, generators })
            }
            None => Ok(SubgroupSpec::Generators(generators)),
        }
    }

    pub fn to_json(&self) -> Value {
        let rows = |g: &[Vec<BigInt>]| g.iter().map(|r| int_list(r)).collect::<Vec<_>>();
        match self {
            SubgroupSpec::Generators(g) => json!({"generators": rows(g)}),
            SubgroupSpec::Section { lo, hi, generators } => json!({"window": [dec(lo), dec(hi)], "generators": rows(generators)}),
            SubgroupSpec::Basic(m) => json!({"basic": dec(m)}),
        }
    }

    pub fn open(&self, carrier: &Carrier) -> Parsed<OpenSubgroup> {
        Ok(match (self, carrier) {
            (SubgroupSpec::Generators(gens), Carrier::Finite(g)) => OpenSubgroup::Finite(finite_span(g, gens)?),
            (SubgroupSpec::Generators(gens), Carrier::Lattice(l)) => OpenSubgroup::Lattice(Sublattice::from_generators(*l, gens)?),
            (SubgroupSpec::Basic(m), Carrier::Window(g)) => OpenSubgroup::Window(WindowSubgroup::basic(g, *m)),
            (SubgroupSpec::Section { lo, hi, generators }, Carrier::Window(g)) => {
                let w = Window::new(*lo, *hi);
                OpenSubgroup::Window(WindowSubgroup::new(g, w, finite_span(&g.block(&w), generators)?)?)
            }
            _ => return Err(CliError::Input("this subgroup form does not fit the group".into())),
        })
    }

    pub fn finite(&self, carrier: &Carrier) -> Parsed<FiniteSubgroup> {
        Ok(match (self, carrier) {
            (SubgroupSpec::Generators(gens), Carrier::Finite(g)) => FiniteSubgroup::Finite(finite_span(g, gens)?),
            (SubgroupSpec::Basic(m), Carrier::Window(g)) => FiniteSubgroup::Window(FiniteSupport::standard(g, *m)?),
            (SubgroupSpec::Section { lo, hi, generators }, Carrier::Window(g)) => {
                let w = Window::new(*lo, *hi);
                FiniteSubgroup::Window(FiniteSupport::new(g, w, finite_span(&g.block(&w), generators)?)?)
            }
            _ => return Err(CliError::Input("this subgroup form does not give a finite subgroup of the group".into())),
        })
    }
}

fn finite_span(g: &FinAbGroup<BigInt>, gens: &[Vec<BigInt>]) -> Parsed<Subgroup<BigInt>> {
    let elems = gens.iter().map(|v| g.element(v.clone())).collect::<Result<Vec<_>, _>>()?;
    Ok(Subgroup::from_generators(g, &elems)?)
}

impl TopologySpec {
    pub fn from_json(v: &Value) -> Parsed<Self> {
        let o = object(v, "topology")?;
        let opt = |key: &str| o.get(key).map(|v| count(v, key)).transpose();
        match kind(o, "topology")? {
            "profinite" => Ok(TopologySpec::Profinite { bound: opt("bound")? }),
            "natural" => Ok(TopologySpec::Natural { prefix: opt("prefix")? }),
            "product" => Ok(TopologySpec::Product { prefix: opt("prefix")? }),
            "explicit" => Ok(TopologySpec::Explicit {
                members: array(field(o, "members")?, "members")?.iter().map(SubgroupSpec::from_json).collect::<Parsed<_>>()?,
                exhaustive: match o.get("exhaustive") {
                    Some(e) => e.as_bool().ok_or_else(|| CliError::Input("exhaustive must be a boolean".into()))?,
                    None => false,
                },
            }),
            "indiscrete" => Ok(TopologySpec::Indiscrete),
            k => Err(CliError::Input(format!("unknown topology kind {k:?}"))),
        }
    }

    pub fn to_json(&self) -> Value {
        let with = |kind: &str, key: &str, v: &Option<usize>| {
            let mut o = Map::new();
            o.insert("kind".into(), json!(kind));
            if let Some(v) = v {
                o.insert(key.into(), dec(v));
            }
            Value::Object(o)
        };
        match self {
            TopologySpec::Profinite { bound } => with("profinite", "bound", bound),
            TopologySpec::Natural { prefix } => with("natural", "prefix", prefix),
            TopologySpec::Product { prefix } => with("product", "prefix", prefix),
            TopologySpec::Explicit { members, exhaustive } => {
                json!({"kind": "explicit", "members": members.iter().map(SubgroupSpec::to_json).collect::<Vec<_>>(), "exhaustive": exhaustive})
            }
            TopologySpec::Indiscrete => json!({"kind": "indiscrete"}),
        }
    }

    /// Omitted sizes default to the budget: `order_bound` for profinite
    /// enumeration, `base_prefix` for the families.
    pub fn build(&self, carrier: &Carrier, budget: &Budget) -> Parsed<TopologyBase> {
        Ok(match self {
            TopologySpec::Profinite { bound } => TopologyBase::profinite(carrier, bound.unwrap_or(budget.order_bound))?,
            TopologySpec::Natural { prefix } => TopologyBase::natural(carrier, prefix.unwrap_or(budget.base_prefix))?,
            TopologySpec::Product { prefix } => match carrier {
                Carrier::Window(g) => TopologyBase::product(g, prefix.unwrap_or(budget.base_prefix)),
                _ => return Err(CliError::Input("the product topology needs a window group".into())),
            },
            TopologySpec::Explicit { members, exhaustive } => {
                let members = members.iter().map(|m| m.open(carrier)).collect::<Parsed<_>>()?;
                TopologyBase::explicit(carrier, members, *exhaustive)?
            }
            TopologySpec::Indiscrete => TopologyBase::indiscrete(carrier),
        })
    }
}

impl CertificateSpec {
    pub fn from_json(v: &Value) -> Parsed<Self> {
        let o = object(v, "certificate")?;
        let shift = match o.get("shift") {
            Some(s) => {
                let name = string(s, "shift")?;
                ShiftKind::from_name(name).ok_or_else(|| CliError::Input(format!("unknown shift kind {name:?}")))?
            }
            None => ShiftKind::Right,
        };
        Ok(CertificateSpec {
            p: count(field(o, "p")?, "p")? as u64,
            m: count(field(o, "m")?, "m")?,
            n_max: count(field(o, "n_max")?, "n_max")?,
            shift,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({"p": dec(self.p), "m": dec(self.m), "n_max": dec(self.n_max), "shift": self.shift.name()})
    }
}

/// Missing fields keep their defaults; `jobs` is a command-line setting.
pub fn budget_from_json(v: &Value) -> Parsed<Budget> {
    let o = object(v, "budget")?;
    let mut b = Budget::default();
    for (k, v) in o {
        match k.as_str() {
            "max_steps" => b.max_steps = count(v, k)?,
            "confirm_window" => b.confirm_window = count(v, k)?,
            "base_prefix" => b.base_prefix = count(v, k)?,
            "truncation_bound" => b.truncation_bound = count(v, k)? as u64,
            "order_bound" => b.order_bound = count(v, k)?,
            "cert_levels" => b.cert_levels = count(v, k)?,
            _ => return Err(CliError::Input(format!("unknown budget field {k:?}"))),
        }
    }
    if b.max_steps == 0 || b.confirm_window == 0 {
        return Err(CliError::Input("max_steps and confirm_window must be positive".into()));
    }
    Ok(b)
}

pub fn budget_to_json(b: &Budget) -> Value {
    json!({
        "max_steps": dec(b.max_steps),
        "confirm_window": dec(b.confirm_window),
        "base_prefix": dec(b.base_prefix),
        "truncation_bound": dec(b.truncation_bound),
        "order_bound": dec(b.order_bound),
        "cert_levels": dec(b.cert_levels),
    })
}

pub(crate) fn dec(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn int_list(v: &[BigInt]) -> Vec<Value> {
    v.iter().map(dec).collect()
}

pub(crate) fn object<'a>(v: &'a Value, what: &str) -> Parsed<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| CliError::Input(format!("{what} must be an object")))
}

pub(crate) fn array<'a>(v: &'a Value, what: &str) -> Parsed<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| CliError::Input(format!("{what} must be an array")))
}

pub(crate) fn string<'a>(v: &'a Value, what: &str) -> Parsed<&'a str> {
    v.as_str().ok_or_else(|| CliError::Input(format!("{what} must be a string")))
}

pub(crate) fn field<'a>(o: &'a Map<String, Value>, key: &str) -> Parsed<&'a Value> {
    o.get(key).ok_or_else(|| CliError::Input(format!("missing field {key:?}")))
}

fn kind<'a>(o: &'a Map<String, Value>, what: &str) -> Parsed<&'a str> {
    string(field(o, "kind").map_err(|_| CliError::Input(format!("{what} needs a \"kind\"")))?, "kind")
}

/// A decimal string; bare JSON numbers are rejected so that no value ever
/// passes through a float.
pub(crate) fn int(v: &Value, what: &str) -> Parsed<BigInt> {
    let s = v.as_str().ok_or_else(|| CliError::Input(format!("{what}: integers are written as decimal strings")))?;
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(CliError::Input(format!("{what}: {s:?} is not a decimal integer")));
    }
    s.parse().map_err(|_| CliError::Input(format!("{what}: {s:?} is not a decimal integer")))
}

pub(crate) fn count(v: &Value, what: &str) -> Parsed<usize> {
    let n = int(v, what)?;
    usize::try_from(n).map_err(|_| CliError::Input(format!("{what} must be a nonnegative machine-size integer")))
}

fn signed(v: &Value, what: &str) -> Parsed<i64> {
    i64::try_from(int(v, what)?).map_err(|_| CliError::Input(format!("{what} does not fit 64 bits")))
}

fn ints(v: &Value, what: &str) -> Parsed<Vec<BigInt>> {
    array(v, what)?.iter().map(|x| int(x, what)).collect()
}

fn int_rows(v: &Value, what: &str) -> Parsed<Vec<Vec<BigInt>>> {
    array(v, what)?.iter().map(|r| ints(r, what)).collect()
}

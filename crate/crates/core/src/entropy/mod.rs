//! Adjoint algebraic entropy `H*`/`ent*_τ`, algebraic entropy `H`/`ent`, and
//! topological entropy on linear compact groups.
//!
//! Values are symbolic: `log α` for a positive integer `α`, so every
//! comparison is an integer comparison. A value is `Exact` only when a
//! theorem-backed stopping rule fired; `Infinite` only with certificates.

mod certificate;
mod oracle;
mod systems;

pub use certificate::{bernoulli_certificate, truncation_rank_bound, BernoulliCertificate, CertificateLevel, CERTIFICATE_SEARCH_LIMIT};
pub use oracle::{cover_oracle, cover_oracle_window, truncated_product_sizes, DEFAULT_TRUNCATION_BOUND};
pub use systems::{BitsetSystem, CoSystem, Describe, FiniteSystem, LatticeSystem, ProductSystem, TrSystem, WindowKey, WindowSystem};

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::finab::{enumerate_subgroups, Homomorphism, Subgroup};
use crate::scalar::IntScalar;
use crate::topology::{Carrier, OpenSubgroup, TopologyBase, TopologyKind};
use crate::window::{BandedEndo, FiniteSupport, Flavor, LatticeEndo, ShiftKind, WindowSubgroup};

/// Stopping rules and enumeration limits.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Budget {
    /// Steps of a single cotrajectory or trajectory.
    pub max_steps: usize,
    /// Equal consecutive ratios accepted as a heuristic plateau.
    pub confirm_window: usize,
    /// Base members examined by a supremum; also the largest `m` certified.
    pub base_prefix: usize,
    /// Elements a truncated model may have.
    pub truncation_bound: u64,
    /// Largest finite group whose subgroups are enumerated.
    pub order_bound: usize,
    /// Levels `n` checked by each Bernoulli certificate.
    pub cert_levels: usize,
    /// Worker threads for independent base members.
    pub jobs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: 64,
            confirm_window: 8,
            base_prefix: 6,
            truncation_bound: DEFAULT_TRUNCATION_BOUND,
            order_bound: crate::finab::DEFAULT_ORDER_BOUND,
            cert_levels: 4,
            jobs: 1,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Mode {
    /// A recurring state forced the ratio to be constant forever.
    Proven,
    /// `confirm_window` equal ratios, with no proof.
    Heuristic,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Proven => "proven",
            Mode::Heuristic => "heuristic",
        }
    }
}

/// Why a value is only a lower bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BudgetNote {
    pub max_steps: usize,
    pub members: usize,
    /// A known `β` with value `≤ log β`, when one is available.
    pub upper_bound: Option<BigUint>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EntropyValue {
    /// `log alpha`.
    Exact { alpha: BigUint, mode: Mode },
    /// `∞`, witnessed by lower bounds `log(alpha_lower)` growing without bound.
    Infinite { certificates: Vec<BernoulliCertificate> },
    /// At least `log alpha`.
    AtLeast { alpha: BigUint, note: BudgetNote },
}

impl EntropyValue {
    pub fn zero() -> Self {
        EntropyValue::Exact { alpha: BigUint::one(), mode: Mode::Proven }
    }

    pub fn proven(alpha: BigUint) -> Self {
        EntropyValue::Exact { alpha, mode: Mode::Proven }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            EntropyValue::Exact { .. } => "exact",
            EntropyValue::Infinite { .. } => "infinite",
            EntropyValue::AtLeast { .. } => "at_least",
        }
    }

    /// `α` of an exact value.
    pub fn exact_alpha(&self) -> Option<&BigUint> {
        match self {
            EntropyValue::Exact { alpha, .. } => Some(alpha),
            _ => None,
        }
    }

    /// `α` of an exact value in proven mode.
    pub fn proven_alpha(&self) -> Option<&BigUint> {
        match self {
            EntropyValue::Exact { alpha, mode: Mode::Proven } => Some(alpha),
            _ => None,
        }
    }

    pub fn is_proven(&self) -> bool {
        self.proven_alpha().is_some() || matches!(self, EntropyValue::Infinite { .. })
    }

    /// Whether this is exactly `log alpha`, in any mode.
    pub fn is_exactly(&self, alpha: u64) -> bool {
        self.exact_alpha() == Some(&BigUint::from(alpha))
    }

    pub fn is_zero(&self) -> bool {
        self.is_exactly(1)
    }

    /// `k · value`, i.e. `log(α^k)`.
    pub fn scale(&self, k: u32) -> Self {
        match self {
            EntropyValue::Exact { alpha, mode } => EntropyValue::Exact { alpha: alpha.pow(k), mode: *mode },
            EntropyValue::AtLeast { alpha, note } => EntropyValue::AtLeast {
                alpha: alpha.pow(k),
                note: BudgetNote { upper_bound: note.upper_bound.as_ref().map(|u| u.pow(k)), ..note.clone() },
            },
            EntropyValue::Infinite { .. } if k == 0 => Self::zero(),
            inf => inf.clone(),
        }
    }

    /// The sum of two entropies, `log(α_1 α_2)`.
    pub fn add(&self, other: &Self) -> Self {
        use EntropyValue::*;
        match (self, other) {
            (Infinite { certificates }, _) | (_, Infinite { certificates }) => Infinite { certificates: certificates.clone() },
            (Exact { alpha: a, mode: m1 }, Exact { alpha: b, mode: m2 }) => {
                let mode = if *m1 == Mode::Proven && *m2 == Mode::Proven { Mode::Proven } else { Mode::Heuristic };
                Exact { alpha: a * b, mode }
            }
            (a, b) => AtLeast {
                alpha: a.lower_alpha() * b.lower_alpha(),
                note: BudgetNote { max_steps: 0, members: 0, upper_bound: None },
            },
        }
    }

    /// The `α` this value is known to be at least.
    pub fn lower_alpha(&self) -> BigUint {
        match self {
            EntropyValue::Exact { alpha, .. } | EntropyValue::AtLeast { alpha, .. } => alpha.clone(),
            EntropyValue::Infinite { certificates } => certificates.iter().map(|c| c.alpha_lower.clone()).max().unwrap_or_else(BigUint::one),
        }
    }

    /// Equality of known exact values: both exact with the same `α`, or both infinite.
    pub fn same_value(&self, other: &Self) -> bool {
        match (self, other) {
            (EntropyValue::Exact { alpha: a, .. }, EntropyValue::Exact { alpha: b, .. }) => a == b,
            (EntropyValue::Infinite { .. }, EntropyValue::Infinite { .. }) => true,
            _ => false,
        }
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntropyValue::Exact { alpha, mode } => write!(f, "log {alpha} ({})", mode.name()),
            EntropyValue::Infinite { certificates } => write!(f, "infinite ({} certificates)", certificates.len()),
            EntropyValue::AtLeast { alpha, .. } => write!(f, "at least log {alpha}"),
        }
    }
}

/// Step `n` of a cotrajectory (`size = |C_n|`, `ratio = α_n`) or of a
/// trajectory (`size = |T_n|`, `ratio = |T_{n+1}|/|T_n|`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceStep<S> {
    pub n: usize,
    pub subgroup: S,
    pub size: BigUint,
    pub ratio: BigUint,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Trace<S> {
    pub steps: Vec<TraceStep<S>>,
    /// First `n` from which the ratio is known or believed constant.
    pub stable_from: Option<usize>,
    pub mode: Option<Mode>,
}

impl<S> Trace<S> {
    pub fn sizes(&self) -> Vec<BigUint> {
        self.steps.iter().map(|s| s.size.clone()).collect()
    }

    pub fn map<U>(self, f: impl Fn(S) -> U) -> Trace<U> {
        Trace {
            steps: self.steps.into_iter().map(|s| TraceStep { n: s.n, subgroup: f(s.subgroup), size: s.size, ratio: s.ratio }).collect(),
            stable_from: self.stable_from,
            mode: self.mode,
        }
    }

    /// `|C_{n+1}| = |C_n| · α_n` along the trace and, from `stable_from`
    /// on, a constant ratio.
    pub fn is_consistent(&self) -> bool {
        let chained = self.steps.windows(2).all(|w| w[1].size == &w[0].size * &w[0].ratio && w[1].n == w[0].n + 1);
        let constant = match self.stable_from {
            Some(j) => self.steps.iter().skip(j - 1).all(|s| s.ratio == self.steps[j - 1].ratio),
            None => true,
        };
        chained && constant
    }
}

/// `H*(φ, N)` by iterating `B_{n+1} = N ∩ φ^{-1}(B_n)`.
pub fn cotrajectory<S: CoSystem>(sys: &S, n: &S::Sub, budget: &Budget) -> Result<(EntropyValue, Trace<S::Sub>)> {
    let mut steps: Vec<TraceStep<S::Sub>> = Vec::new();
    let mut seen: HashMap<S::Key, usize> = HashMap::new();
    let mut b = n.clone();
    let mut size = sys.index(&b);
    for step in 1..=budget.max_steps.max(1) {
        let next = sys.pull(n, &b)?;
        let next_size = sys.index(&next);
        let ratio = exact_ratio(&next_size, &size)?;
        let key = sys.state(n, &b, step)?;
        steps.push(TraceStep { n: step, subgroup: b, size: size.clone(), ratio });
        if let Some(outcome) = conclude(&mut steps, &mut seen, key, sys.provable(), budget)? {
            return Ok(outcome);
        }
        b = next;
        size = next_size;
    }
    Ok(exhausted(steps, budget))
}

/// `H(φ, F)` by iterating `T_{n+1} = F + φ(T_n)`.
pub fn trajectory<S: TrSystem>(sys: &S, f: &S::Fin, budget: &Budget) -> Result<(EntropyValue, Trace<S::Fin>)> {
    let mut steps: Vec<TraceStep<S::Fin>> = Vec::new();
    let mut seen: HashMap<S::Key, usize> = HashMap::new();
    let mut t = f.clone();
    let mut size = sys.order(&t);
    for step in 1..=budget.max_steps.max(1) {
        let next = sys.push(f, &t)?;
        let next_size = sys.order(&next);
        let ratio = exact_ratio(&next_size, &size)?;
        let key = sys.state(f, &t, step)?;
        steps.push(TraceStep { n: step, subgroup: t, size: size.clone(), ratio });
        if let Some(outcome) = conclude(&mut steps, &mut seen, key, sys.provable(), budget)? {
            return Ok(outcome);
        }
        t = next;
        size = next_size;
    }
    Ok(exhausted(steps, budget))
}

fn exact_ratio(num: &BigUint, den: &BigUint) -> Result<BigUint> {
    let (q, r) = num.div_rem(den);
    if !r.is_zero() || q.is_zero() {
        return Err(Error::VerificationFailed(format!("sizes {den} and {num} do not form a chain")));
    }
    Ok(q)
}

type Outcome<S> = (EntropyValue, Trace<S>);

fn conclude<S, K: Eq + std::hash::Hash>(
    steps: &mut Vec<TraceStep<S>>,
    seen: &mut HashMap<K, usize>,
    key: K,
    provable: bool,
    budget: &Budget,
) -> Result<Option<Outcome<S>>> {
    let n = steps.len();
    if let Some(&j) = seen.get(&key) {
        let alpha = steps[j - 1].ratio.clone();
        if steps[j - 1..].iter().any(|s| s.ratio != alpha) {
            return Err(Error::VerificationFailed("ratios vary after a recurring state".into()));
        }
        let trace = Trace { steps: std::mem::take(steps), stable_from: Some(j), mode: Some(Mode::Proven) };
        return Ok(Some((EntropyValue::Exact { alpha, mode: Mode::Proven }, trace)));
    }
    seen.insert(key, n);
    let w = budget.confirm_window.max(1);
    if !provable && n >= w && steps[n - w..].iter().all(|s| s.ratio == steps[n - 1].ratio) {
        let alpha = steps[n - 1].ratio.clone();
        let trace = Trace { steps: std::mem::take(steps), stable_from: Some(n - w + 1), mode: Some(Mode::Heuristic) };
        return Ok(Some((EntropyValue::Exact { alpha, mode: Mode::Heuristic }, trace)));
    }
    Ok(None)
}

fn exhausted<S>(steps: Vec<TraceStep<S>>, budget: &Budget) -> Outcome<S> {
    // ratios never increase, so the last one bounds the limit from above
    let upper = steps.last().map(|s| s.ratio.clone());
    let value = EntropyValue::AtLeast {
        alpha: BigUint::one(),
        note: BudgetNote { max_steps: budget.max_steps, members: 1, upper_bound: upper },
    };
    (value, Trace { steps, stable_from: None, mode: None })
}

/// An endomorphism of a supported carrier.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Endomorphism<T: IntScalar = BigInt> {
    Finite(Homomorphism<T>),
    Lattice(LatticeEndo<T>),
    Window(BandedEndo<T>),
}

impl<T: IntScalar> Endomorphism<T> {
    pub fn carrier(&self) -> Carrier<T> {
        match self {
            Endomorphism::Finite(h) => Carrier::Finite(h.source().clone()),
            Endomorphism::Lattice(l) => Carrier::Lattice(l.group()),
            Endomorphism::Window(w) => Carrier::Window(w.group().clone()),
        }
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        Ok(match self {
            Endomorphism::Finite(h) => Endomorphism::Finite(h.pow(k)?),
            Endomorphism::Lattice(l) => Endomorphism::Lattice(l.pow(k)),
            Endomorphism::Window(w) => Endomorphism::Window(w.pow(k)?),
        })
    }

    fn check_carrier(&self, carrier: &Carrier<T>) -> Result<()> {
        let ok = match (self, carrier) {
            (Endomorphism::Window(w), Carrier::Window(g)) => w.group().base() == g.base() && w.group().index_set() == g.index_set(),
            _ => self.carrier() == *carrier,
        };
        if !ok {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }
}

/// A finite subgroup, the seed of a trajectory.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FiniteSubgroup<T: IntScalar = BigInt> {
    Finite(Subgroup<T>),
    Window(FiniteSupport<T>),
}

impl<T: IntScalar> FiniteSubgroup<T> {
    pub fn order(&self) -> BigUint {
        match self {
            FiniteSubgroup::Finite(s) => crate::scalar::to_biguint(&s.order()),
            FiniteSubgroup::Window(f) => crate::scalar::to_biguint(&f.order()),
        }
    }
}

impl<T: IntScalar> Describe for OpenSubgroup<T> {
    fn describe(&self) -> String {
        match self {
            OpenSubgroup::Finite(s) => s.describe(),
            OpenSubgroup::Lattice(l) => l.describe(),
            OpenSubgroup::Window(w) => w.describe(),
        }
    }
}

impl<T: IntScalar> Describe for FiniteSubgroup<T> {
    fn describe(&self) -> String {
        match self {
            FiniteSubgroup::Finite(s) => s.describe(),
            FiniteSubgroup::Window(f) => f.describe(),
        }
    }
}

/// `H*(φ, N)` with its cotrajectory.
pub fn h_star<T: IntScalar>(phi: &Endomorphism<T>, n: &OpenSubgroup<T>, budget: &Budget) -> Result<(EntropyValue, Trace<OpenSubgroup<T>>)> {
    match (phi, n) {
        (Endomorphism::Finite(h), OpenSubgroup::Finite(s)) => {
            let (v, t) = cotrajectory(&FiniteSystem::new(h)?, s, budget)?;
            Ok((v, t.map(OpenSubgroup::Finite)))
        }
        (Endomorphism::Lattice(l), OpenSubgroup::Lattice(s)) => {
            let (v, t) = cotrajectory(&LatticeSystem::new(l), s, budget)?;
            Ok((v, t.map(OpenSubgroup::Lattice)))
        }
        (Endomorphism::Window(w), OpenSubgroup::Window(s)) => {
            let (v, t) = cotrajectory(&WindowSystem::new(w), s, budget)?;
            Ok((v, t.map(OpenSubgroup::Window)))
        }
        _ => Err(Error::AmbientMismatch),
    }
}

/// `H(φ, F)` with its trajectory.
pub fn alg_entropy_h<T: IntScalar>(phi: &Endomorphism<T>, f: &FiniteSubgroup<T>, budget: &Budget) -> Result<(EntropyValue, Trace<FiniteSubgroup<T>>)> {
    match (phi, f) {
        (Endomorphism::Finite(h), FiniteSubgroup::Finite(s)) => {
            let (v, t) = trajectory(&FiniteSystem::new(h)?, s, budget)?;
            Ok((v, t.map(FiniteSubgroup::Finite)))
        }
        (Endomorphism::Window(w), FiniteSubgroup::Window(s)) => {
            if s.ambient().flavor() != Flavor::DirectSum || w.group().flavor() != Flavor::DirectSum {
                return Err(Error::InvalidInput("trajectories live in the direct sum".into()));
            }
            let (v, t) = trajectory(&WindowSystem::new(w), s, budget)?;
            Ok((v, t.map(FiniteSubgroup::Window)))
        }
        _ => Err(Error::AmbientMismatch),
    }
}

/// One base member of a supremum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MemberReport<M> {
    pub member: M,
    pub value: EntropyValue,
    pub trace: Trace<M>,
}

/// A supremum over base members, with the per-member evidence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SupReport<M> {
    pub value: EntropyValue,
    pub members: Vec<MemberReport<M>>,
}

/// Runs `f` on every item, on up to `jobs` threads, keeping input order.
pub fn parallel_map<I: Sync, O: Send>(items: &[I], jobs: usize, f: impl Fn(&I) -> O + Sync) -> Vec<O> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| scope.spawn(|| c.iter().map(&f).collect::<Vec<O>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// The supremum of per-member values under the attainment rules:
/// exact when the structural bound `U` is `1` or is attained by a proven
/// value, or when the family is exhaustive and every value is proven.
pub fn supremum(values: &[&EntropyValue], bound: &BigUint, exhaustive: bool, budget: &Budget) -> Result<EntropyValue> {
    let proven: Vec<&BigUint> = values.iter().filter_map(|v| v.proven_alpha()).collect();
    let best = proven.iter().copied().max().cloned().unwrap_or_else(BigUint::one);
    if let Some(bad) = values.iter().map(|v| v.lower_alpha()).find(|a| a > bound) {
        return Err(Error::VerificationFailed(format!("value log {bad} exceeds the structural bound log {bound}")));
    }
    if bound.is_one() || &best == bound || (exhaustive && proven.len() == values.len()) {
        return Ok(EntropyValue::proven(if bound.is_one() { BigUint::one() } else { best }));
    }
    Ok(EntropyValue::AtLeast {
        alpha: best,
        note: BudgetNote { max_steps: budget.max_steps, members: values.len(), upper_bound: Some(bound.clone()) },
    })
}

/// `sup_N H*(φ, N)` over `members` of a system with structural bound.
pub fn sup_cotrajectories<S: CoSystem>(
    sys: &S,
    members: &[S::Sub],
    exhaustive: bool,
    budget: &Budget,
) -> Result<SupReport<S::Sub>> {
    let results = parallel_map(members, budget.jobs, |n| cotrajectory(sys, n, budget));
    collect_sup(members, results, &sys.alpha_bound(), exhaustive, budget)
}

/// `sup_F H(φ, F)` over `members` of a system with structural bound.
pub fn sup_trajectories<S: TrSystem>(sys: &S, members: &[S::Fin], exhaustive: bool, budget: &Budget) -> Result<SupReport<S::Fin>> {
    let results = parallel_map(members, budget.jobs, |f| trajectory(sys, f, budget));
    collect_sup(members, results, &sys.alpha_bound(), exhaustive, budget)
}

fn collect_sup<M: Clone>(
    members: &[M],
    results: Vec<Result<(EntropyValue, Trace<M>)>>,
    bound: &BigUint,
    exhaustive: bool,
    budget: &Budget,
) -> Result<SupReport<M>> {
    let mut reports = Vec::with_capacity(members.len());
    for (m, r) in members.iter().zip(results) {
        let (value, trace) = r?;
        reports.push(MemberReport { member: m.clone(), value, trace });
    }
    let value = supremum(&reports.iter().map(|r| &r.value).collect::<Vec<_>>(), bound, exhaustive, budget)?;
    Ok(SupReport { value, members: reports })
}

/// `ent*_τ(φ)`, the supremum of `H*(φ, N)` over the base.
///
/// On a window direct sum with the profinite topology the value is
/// infinite for Bernoulli shifts over `Z(p)`, certified for
/// `m = 2..=base_prefix`.
pub fn ent_star_tau<T: IntScalar>(phi: &Endomorphism<T>, tau: &TopologyBase<T>, budget: &Budget) -> Result<SupReport<OpenSubgroup<T>>> {
    phi.check_carrier(tau.carrier())?;
    let members: Vec<OpenSubgroup<T>> = tau.members().iter().take(if tau.is_exhaustive() { usize::MAX } else { budget.base_prefix + 1 }).cloned().collect();
    let exhaustive = tau.is_exhaustive() && members.len() == tau.members().len();
    let report = match phi {
        Endomorphism::Finite(h) => {
            let subs = unwrap_members(&members, |m| if let OpenSubgroup::Finite(s) = m { Some(s.clone()) } else { None })?;
            map_report(sup_cotrajectories(&FiniteSystem::new(h)?, &subs, exhaustive, budget)?, OpenSubgroup::Finite)
        }
        Endomorphism::Lattice(l) => {
            let subs = unwrap_members(&members, |m| if let OpenSubgroup::Lattice(s) = m { Some(s.clone()) } else { None })?;
            map_report(sup_cotrajectories(&LatticeSystem::new(l), &subs, exhaustive, budget)?, OpenSubgroup::Lattice)
        }
        Endomorphism::Window(w) => {
            let subs: Vec<WindowSubgroup<T>> = unwrap_members(&members, |m| if let OpenSubgroup::Window(s) = m { Some(s.clone()) } else { None })?;
            map_report(sup_cotrajectories(&WindowSystem::new(w), &subs, exhaustive, budget)?, OpenSubgroup::Window)
        }
    };
    if tau.kind() == TopologyKind::Profinite {
        if let (Endomorphism::Window(w), Carrier::Window(g)) = (phi, tau.carrier()) {
            if let Some(certs) = shift_certificates(w, g, budget)? {
                return Ok(SupReport { value: EntropyValue::Infinite { certificates: certs }, members: report.members });
            }
            // window subgroups are not cofinal here; only maps fixing every
            // cotrajectory at `N` give an exact value
            let trivial = w.is_identity() || w.coefficients().iter().flatten().all(|c| c.is_zero());
            if !trivial {
                let note = BudgetNote { max_steps: budget.max_steps, members: report.members.len(), upper_bound: None };
                return Ok(SupReport { value: EntropyValue::AtLeast { alpha: report.value.lower_alpha(), note }, members: report.members });
            }
        }
    }
    Ok(report)
}

fn shift_certificates<T: IntScalar>(w: &BandedEndo<T>, g: &crate::window::WindowGroup<T>, budget: &Budget) -> Result<Option<Vec<BernoulliCertificate>>> {
    let Some((kind, 1)) = w.shift_kind() else { return Ok(None) };
    let moduli = g.base().moduli();
    if g.flavor() != Flavor::DirectSum || moduli.len() != 1 {
        return Ok(None);
    }
    let Some(p) = moduli[0].to_u64().filter(|&p| is_prime(p)) else { return Ok(None) };
    let certs = (2..=budget.base_prefix.max(2)).map(|m| bernoulli_certificate(p, m, budget.cert_levels, kind)).collect::<Result<_>>()?;
    Ok(Some(certs))
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn unwrap_members<M, S>(members: &[M], f: impl Fn(&M) -> Option<S>) -> Result<Vec<S>> {
    members.iter().map(|m| f(m).ok_or(Error::AmbientMismatch)).collect()
}

fn map_report<S, M>(r: SupReport<S>, f: impl Fn(S) -> M + Copy) -> SupReport<M> {
    SupReport {
        value: r.value,
        members: r.members.into_iter().map(|m| MemberReport { member: f(m.member), value: m.value, trace: m.trace.map(f) }).collect(),
    }
}

/// `ent*_τ(φ_1 × φ_2)` over the product base `{N_1 × N_2}`.
pub fn ent_star_tau_product<T: IntScalar>(
    phi1: &Endomorphism<T>,
    tau1: &TopologyBase<T>,
    phi2: &Endomorphism<T>,
    tau2: &TopologyBase<T>,
    budget: &Budget,
) -> Result<EntropyValue> {
    phi1.check_carrier(tau1.carrier())?;
    phi2.check_carrier(tau2.carrier())?;
    let take = |t: &TopologyBase<T>| -> Vec<OpenSubgroup<T>> {
        t.members().iter().take(if t.is_exhaustive() { usize::MAX } else { budget.base_prefix + 1 }).cloned().collect()
    };
    let (m1, m2) = (take(tau1), take(tau2));
    let exhaustive = tau1.is_exhaustive() && tau2.is_exhaustive() && m1.len() == tau1.members().len() && m2.len() == tau2.members().len();
    match (phi1, phi2) {
        (Endomorphism::Window(a), Endomorphism::Window(b)) => {
            let sys = ProductSystem { first: WindowSystem::new(a), second: WindowSystem::new(b) };
            let w = |m: &OpenSubgroup<T>| if let OpenSubgroup::Window(s) = m { Some(s.clone()) } else { None };
            let pairs = pairs(&unwrap_members(&m1, w)?, &unwrap_members(&m2, w)?);
            Ok(sup_cotrajectories(&sys, &pairs, exhaustive, budget)?.value)
        }
        (Endomorphism::Finite(a), Endomorphism::Finite(b)) => {
            let sys = ProductSystem { first: FiniteSystem::new(a)?, second: FiniteSystem::new(b)? };
            let f = |m: &OpenSubgroup<T>| if let OpenSubgroup::Finite(s) = m { Some(s.clone()) } else { None };
            let pairs = pairs(&unwrap_members(&m1, f)?, &unwrap_members(&m2, f)?);
            Ok(sup_cotrajectories(&sys, &pairs, exhaustive, budget)?.value)
        }
        _ => Err(Error::InvalidInput("products are supported for two window or two finite systems".into())),
    }
}

fn pairs<A: Clone, B: Clone>(a: &[A], b: &[B]) -> Vec<(A, B)> {
    a.iter().flat_map(|x| b.iter().map(move |y| (x.clone(), y.clone()))).collect()
}

/// `ent(φ)`, the supremum of `H(φ, F)` over finite subgroups: all subgroups
/// of a finite group, or `K^W` on the standard windows of a direct sum,
/// which every finite subgroup lies in.
pub fn ent_algebraic<T: IntScalar>(phi: &Endomorphism<T>, budget: &Budget) -> Result<SupReport<FiniteSubgroup<T>>> {
    match phi {
        Endomorphism::Finite(h) => {
            let subs = enumerate_subgroups(h.source(), budget.order_bound)?;
            let r = sup_trajectories(&FiniteSystem::new(h)?, &subs, true, budget)?;
            Ok(map_report(r, FiniteSubgroup::Finite))
        }
        Endomorphism::Window(w) => {
            if w.group().flavor() != Flavor::DirectSum {
                return Err(Error::InvalidInput("algebraic entropy is computed on the direct sum".into()));
            }
            let subs = (0..=budget.base_prefix).map(|m| FiniteSupport::standard(w.group(), m)).collect::<Result<Vec<_>>>()?;
            let r = sup_trajectories(&WindowSystem::new(w), &subs, false, budget)?;
            Ok(map_report(r, FiniteSubgroup::Window))
        }
        Endomorphism::Lattice(_) => Err(Error::InvalidInput("algebraic entropy needs a torsion carrier".into())),
    }
}

/// `h_top(ψ)` for a banded endomorphism of a product `K^I`, equal to
/// `ent*_τ(ψ)` for the product topology because `K^I` is totally
/// disconnected.
pub fn h_top_linear<T: IntScalar>(psi: &BandedEndo<T>, tau: &TopologyBase<T>, budget: &Budget) -> Result<SupReport<OpenSubgroup<T>>> {
    match tau.carrier() {
        Carrier::Window(g) if g.flavor() == Flavor::Product && tau.kind() == TopologyKind::Product => {}
        _ => return Err(Error::InvalidInput("topological entropy needs the product topology on a product K^I".into())),
    }
    ent_star_tau(&Endomorphism::Window(psi.clone()), tau, budget)
}

/// The exact `α` of a Bernoulli shift's adjoint entropy for the product
/// topology, for reference tables: `|K|` except for the right shift.
pub fn shift_alpha(kind: ShiftKind, order: &BigInt) -> BigUint {
    match kind {
        ShiftKind::Right => BigUint::one(),
        _ => order.magnitude().clone(),
    }
}

#[cfg(test)]
mod tests;

//! Duality for finite abelian groups and for the window calculus.
//!
//! The dual of `⊕ Z(m_i)` is the same moduli list, paired by
//! `⟨x, χ⟩ = Σ x_i χ_i / m_i ∈ Q/Z`; values are kept as numerators over the
//! exponent `E`. The direct sum `K^(I)` pairs with the product `K^I`
//! coordinatewise, so a window subgroup `(W, S)` has the dual
//! `(W, S^⊥)` in the direct sum, and everything reduces to finite blocks.

use num_bigint::{BigInt, BigUint};

use crate::entropy::{
    ent_algebraic, ent_star_tau, sup_cotrajectories, sup_trajectories, BitsetSystem, Budget, CoSystem, Describe, Endomorphism, EntropyValue,
    FiniteSystem, TrSystem, WindowSystem,
};
use crate::error::{Error, Result};
use crate::finab::{ElementSet, ElementTable, FinAbGroup, GroupElement, Homomorphism, Subgroup};
use crate::linalg::Matrix;
use crate::scalar::{to_biguint, IntScalar};
use crate::topology::{Carrier, OpenSubgroup, TopologyBase, TopologyKind};
use crate::window::{BandedEndo, FiniteSupport, Flavor, SparseElement, Window, WindowGroup, WindowSubgroup};

/// Steps of the local identity `|C_n(φ,N)| = |T_n(φ̂,N^⊥)|` a bridge check compares.
pub const BRIDGE_LOCAL_STEPS: usize = 6;

/// `⟨x, χ⟩` on `G` and its dual, the same group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharacterPairing<T: IntScalar = BigInt> {
    group: FinAbGroup<T>,
    exponent: T,
}

impl<T: IntScalar> CharacterPairing<T> {
    pub fn new(group: &FinAbGroup<T>) -> Self {
        CharacterPairing { group: group.clone(), exponent: group.exponent() }
    }

    pub fn group(&self) -> &FinAbGroup<T> {
        &self.group
    }

    /// `E`, so that pairing values are numerators in `Z(E)`.
    pub fn exponent(&self) -> &T {
        &self.exponent
    }

    /// `E · ⟨x, χ⟩ mod E`.
    pub fn pair(&self, x: &GroupElement<T>, chi: &GroupElement<T>) -> T {
        let e = &self.exponent;
        let s = self.group.moduli().iter().zip(x.coords().iter().zip(chi.coords())).fold(T::zero(), |acc, (m, (a, b))| {
            acc + a.clone() * b.clone() * (e.clone() / m.clone())
        });
        s.mod_floor(e)
    }

    /// `|G^| = |G|`, since the dual is represented by `G` itself.
    pub fn dual_order(&self) -> T {
        self.group.order()
    }

    /// No nonzero `x` pairs to zero with every `χ`, checked exhaustively.
    pub fn is_nondegenerate(&self, bound: usize) -> Result<bool> {
        if self.group.order_usize().is_none_or(|n| n > bound) {
            return Err(Error::OrderBoundExceeded { order: self.group.order().to_string(), bound: bound.to_string() });
        }
        let elems: Vec<_> = self.group.elements().collect();
        Ok(elems.iter().all(|x| x.is_zero() || elems.iter().any(|c| !self.pair(x, c).is_zero())))
    }
}

/// `φ^ : H^ → G^`, `χ ↦ χ∘φ`, with matrix entry `(i, j) = A_{ji} m_i / k_j`
/// for `φ : ⊕Z(m_i) → ⊕Z(k_j)`.
pub fn dual_hom<T: IntScalar>(phi: &Homomorphism<T>) -> Homomorphism<T> {
    let (m, k) = (phi.source().moduli(), phi.target().moduli());
    let a = phi.matrix();
    let mut b = Matrix::zeros(m.len(), k.len());
    for (i, mi) in m.iter().enumerate() {
        for (j, kj) in k.iter().enumerate() {
            // k_j | A_ji m_i is the validity congruence
            let mut v = (a.get(j, i).clone() * mi.clone() / kj.clone()).mod_floor(mi);
            if cfg!(feature = "mutation-dual-sign") {
                v = (-v).mod_floor(mi);
            }
            b.set(i, j, v);
        }
    }
    Homomorphism::new(phi.target().clone(), phi.source().clone(), b).expect("duals of homomorphisms are homomorphisms")
}

/// `⟨φx, χ⟩ = ⟨x, ψχ⟩` for every `x` and `χ`.
pub fn is_adjoint<T: IntScalar>(phi: &Homomorphism<T>, psi: &Homomorphism<T>) -> bool {
    if psi.source() != phi.target() || psi.target() != phi.source() {
        return false;
    }
    let (pg, ph) = (CharacterPairing::new(phi.source()), CharacterPairing::new(phi.target()));
    let chars: Vec<_> = phi.target().elements().collect();
    let (eg, eh) = (pg.exponent().clone(), ph.exponent().clone());
    // compare over the common denominator lcm(E_G, E_H)
    let l = eg.lcm(&eh);
    phi.source().elements().all(|x| {
        let fx = phi.apply(&x);
        chars.iter().all(|c| {
            let left = ph.pair(&fx, c) * (l.clone() / eh.clone());
            let right = pg.pair(&x, &psi.apply(c)) * (l.clone() / eg.clone());
            left.mod_floor(&l) == right.mod_floor(&l)
        })
    })
}

/// The characters pairing to zero with every element of `gens`, as the
/// kernel of `χ ↦ (E ⟨a, χ⟩)_a`.
fn orthogonal<T: IntScalar>(group: &FinAbGroup<T>, gens: &[GroupElement<T>]) -> Subgroup<T> {
    if gens.is_empty() {
        return Subgroup::whole(group);
    }
    let e = group.exponent();
    let rows: Vec<Vec<T>> = gens
        .iter()
        .map(|a| a.coords().iter().zip(group.moduli()).map(|(ai, m)| (ai.clone() * (e.clone() / m.clone())).mod_floor(&e)).collect())
        .collect();
    let target = FinAbGroup::new(vec![e.clone(); gens.len()]).expect("positive exponent");
    let h = Homomorphism::new(group.clone(), target.clone(), Matrix::from_rows(rows)).expect("E/m_i kills m_i");
    Subgroup::preimage(&h, &Subgroup::trivial(&target)).expect("matching ambients")
}

/// `A^⊥ = {χ : χ(A) = 0}`.
pub fn annihilator<T: IntScalar>(a: &Subgroup<T>) -> Subgroup<T> {
    orthogonal(a.ambient(), &a.generators())
}

/// `B^⊤ = {x : χ(x) = 0 for all χ ∈ B}`; the pairing is symmetric.
pub fn co_annihilator<T: IntScalar>(b: &Subgroup<T>) -> Subgroup<T> {
    orthogonal(b.ambient(), &b.generators())
}

/// The dual of a banded endomorphism under the coordinatewise pairing of
/// `K^(I)` with `K^I`: shift `-s` and `c'_{ρ, d} = ĉ_{(ρ + s + d) mod P, -d}`.
/// The result acts on the direct sum; on a translation it is the
/// translation the other way.
pub fn window_dual<T: IntScalar>(phi: &BandedEndo<T>) -> Result<BandedEndo<T>> {
    let group = phi.group().with_flavor(Flavor::DirectSum);
    let s = phi.shift();
    let b = phi.half_width() as i64;
    let p = phi.period() as i64;
    let coefficients = (0..p)
        .map(|rho| (-b..=b).map(|d| dual_hom(phi.coefficient(rho + s + d, -d))).collect())
        .collect();
    BandedEndo::new(&group, -s, phi.half_width(), coefficients)
}

/// `N^⊥` for `N = (W, S)`: the elements of `K^(I)` supported in `W` with
/// restriction in `S^⊥`.
pub fn window_subgroup_dual<T: IntScalar>(n: &WindowSubgroup<T>) -> Result<FiniteSupport<T>> {
    let group = n.ambient().with_flavor(Flavor::DirectSum);
    if n.is_whole() {
        return Ok(FiniteSupport::trivial(&group));
    }
    FiniteSupport::new(&group, n.window(), annihilator(n.section()))
}

fn sparse_pair<T: IntScalar>(base: &FinAbGroup<T>, x: &SparseElement<T>, chi: &SparseElement<T>) -> T {
    let p = CharacterPairing::new(base);
    let e = p.exponent().clone();
    x.entries().fold(T::zero(), |acc, (i, v)| match chi.get(i) {
        Some(c) => (acc + p.pair(v, c)).mod_floor(&e),
        None => acc,
    })
}

/// `⟨φx, χ⟩ = ⟨x, ψχ⟩` on basis elements supported in `w`, which by
/// bilinearity covers every pair supported there.
pub fn is_window_adjoint<T: IntScalar>(phi: &BandedEndo<T>, psi: &BandedEndo<T>, w: &Window) -> bool {
    let g = psi.group();
    let base = g.base();
    let units: Vec<SparseElement<T>> = g
        .clip(*w)
        .indices()
        .flat_map(|i| (0..base.rank()).map(move |c| (i, c)))
        .map(|(i, c)| g.basis_at(BigInt::from(i), &base.basis(c)).expect("index in range"))
        .collect();
    units.iter().all(|x| units.iter().all(|c| sparse_pair(base, &phi.apply(x), c) == sparse_pair(base, x, &psi.apply(c))))
}

/// One step of the local identity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BridgeRow {
    pub n: usize,
    pub c_n: BigUint,
    pub t_n: BigUint,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BridgeMember {
    pub member: String,
    pub rows: Vec<BridgeRow>,
    /// `B_n^⊥ = T_n` as subgroups at every step, not only in size.
    pub structural: bool,
}

/// Both sides of `ent*_τ(φ) = ent(φ^)` with the per-member evidence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BridgeReport {
    pub left: EntropyValue,
    pub right: EntropyValue,
    pub members: Vec<BridgeMember>,
    /// The dual passed the pairing check.
    pub adjoint: bool,
}

impl BridgeReport {
    /// Both sides known, exact and equal.
    pub fn global_equal(&self) -> bool {
        self.left.same_value(&self.right)
    }

    pub fn local_equal(&self) -> bool {
        self.members.iter().all(|m| m.structural && m.rows.iter().all(|r| r.c_n == r.t_n))
    }

    pub fn passed(&self) -> bool {
        self.adjoint && self.global_equal() && self.local_equal()
    }
}

/// Computes `ent*_τ(φ)` and `ent(φ^)` independently and compares them, with
/// the local identity for every base member the supremum examined.
///
/// Supported: finite groups with any base, and banded maps of `K^(I)` or
/// `K^I` with the product base, whose dual topology is discrete.
pub fn bridge_check<T: IntScalar>(phi: &Endomorphism<T>, tau: &TopologyBase<T>, budget: &Budget) -> Result<BridgeReport> {
    let steps = budget.max_steps.clamp(1, BRIDGE_LOCAL_STEPS);
    match (phi, tau.carrier()) {
        (Endomorphism::Finite(h), Carrier::Finite(_)) => {
            let dual = dual_hom(h);
            let (left, right) = std::thread::scope(|s| {
                let l = s.spawn(|| ent_star_tau(phi, tau, budget));
                let r = ent_algebraic(&Endomorphism::Finite(dual.clone()), budget);
                (l.join().expect("worker panicked"), r)
            });
            let (left, right) = (left?, right?);
            let (co, tr) = (FiniteSystem::new(h)?, FiniteSystem::new(&dual)?);
            let members = left
                .members
                .iter()
                .map(|m| match &m.member {
                    OpenSubgroup::Finite(n) => Ok(local_rows(&co, &tr, n, &annihilator(n), steps, |b, t| &annihilator(b) == t)?),
                    _ => Err(Error::AmbientMismatch),
                })
                .collect::<Result<_>>()?;
            let adjoint = h.source().order_usize().is_some_and(|n| n <= budget.order_bound) && is_adjoint(h, &dual);
            Ok(BridgeReport { left: left.value, right: right.value, members, adjoint })
        }
        (Endomorphism::Window(w), Carrier::Window(_)) => {
            if tau.kind() != TopologyKind::Product {
                return Err(Error::InvalidInput("window bridges need the product base".into()));
            }
            let dual = window_dual(w)?;
            let (left, right) = std::thread::scope(|s| {
                let l = s.spawn(|| ent_star_tau(phi, tau, budget));
                let r = ent_algebraic(&Endomorphism::Window(dual.clone()), budget);
                (l.join().expect("worker panicked"), r)
            });
            let (left, right) = (left?, right?);
            let (co, tr) = (WindowSystem::new(w), WindowSystem::new(&dual));
            let members = left
                .members
                .iter()
                .map(|m| match &m.member {
                    OpenSubgroup::Window(n) => local_rows(&co, &tr, n, &window_subgroup_dual(n)?, steps, |b, t| {
                        window_subgroup_dual(b).is_ok_and(|d| d.is_subgroup_of(t) && t.is_subgroup_of(&d))
                    }),
                    _ => Err(Error::AmbientMismatch),
                })
                .collect::<Result<_>>()?;
            let reach = (budget.base_prefix as i64 + 2) * (w.shift().abs() + w.half_width() as i64 + 1);
            let adjoint = is_window_adjoint(w, &dual, &Window::new(-reach, reach));
            Ok(BridgeReport { left: left.value, right: right.value, members, adjoint })
        }
        _ => Err(Error::InvalidInput("bridge checks support finite groups and window groups".into())),
    }
}

fn local_rows<C: CoSystem, R: TrSystem>(
    co: &C,
    tr: &R,
    n: &C::Sub,
    f: &R::Fin,
    steps: usize,
    matches: impl Fn(&C::Sub, &R::Fin) -> bool,
) -> Result<BridgeMember> {
    let mut rows = Vec::with_capacity(steps);
    let mut structural = true;
    let (mut b, mut t) = (n.clone(), f.clone());
    for step in 1..=steps {
        rows.push(BridgeRow { n: step, c_n: co.index(&b), t_n: tr.order(&t) });
        structural &= matches(&b, &t);
        if step < steps {
            b = co.pull(n, &b)?;
            t = tr.push(f, &t)?;
        }
    }
    Ok(BridgeMember { member: n.describe(), rows, structural })
}

/// The exhaustive bridge over every endomorphism of a small group, on
/// element bitsets: all subgroups as the profinite base, and their
/// annihilators as the seeds of the dual trajectories.
#[derive(Clone, Debug)]
pub struct BitsetBridge {
    table: ElementTable,
    subgroups: Vec<ElementSet>,
    duals: Vec<ElementSet>,
}

/// The outcome of one [`BitsetBridge::check`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitsetVerdict {
    pub left: EntropyValue,
    pub right: EntropyValue,
    pub local_equal: bool,
    pub adjoint: bool,
}

impl BitsetVerdict {
    pub fn passed(&self) -> bool {
        self.adjoint && self.local_equal && self.left.same_value(&self.right)
    }
}

impl BitsetBridge {
    pub fn new<T: IntScalar>(group: &FinAbGroup<T>, order_bound: usize) -> Result<Self> {
        let table = ElementTable::new(group)?;
        let subs = crate::finab::enumerate_subgroups(group, order_bound)?;
        let subgroups = subs.iter().map(|s| table.mask(s)).collect();
        let duals = subs.iter().map(|s| table.mask(&annihilator(s))).collect();
        Ok(BitsetBridge { table, subgroups, duals })
    }

    pub fn subgroup_count(&self) -> usize {
        self.subgroups.len()
    }

    pub fn check<T: IntScalar>(&self, phi: &Homomorphism<T>, budget: &Budget) -> Result<BitsetVerdict> {
        let dual = dual_hom(phi);
        let co = BitsetSystem::new(&self.table, phi);
        let tr = BitsetSystem::new(&self.table, &dual);
        let left = sup_cotrajectories(&co, &self.subgroups, true, budget)?.value;
        let right = sup_trajectories(&tr, &self.subgroups, true, budget)?.value;
        let order = BigUint::from(self.table.order());
        let steps = budget.max_steps.clamp(1, BRIDGE_LOCAL_STEPS);
        let mut local_equal = true;
        let dual_of = |b: ElementSet| self.subgroups.iter().position(|&s| s == b).map(|i| self.duals[i]);
        for (&n, &f) in self.subgroups.iter().zip(&self.duals) {
            let (mut b, mut t) = (n, f);
            for _ in 0..steps {
                let c_n = &order / BigUint::from(ElementTable::size(b));
                local_equal &= c_n == BigUint::from(ElementTable::size(t)) && dual_of(b) == Some(t);
                b = co.pull(&n, &b)?;
                t = tr.push(&f, &t)?;
            }
        }
        Ok(BitsetVerdict { left, right, local_equal, adjoint: is_adjoint(phi, &dual) })
    }
}

/// `|H| · |H^⊥| = |G|`.
pub fn order_duality_holds<T: IntScalar>(h: &Subgroup<T>) -> bool {
    let a = annihilator(h);
    to_biguint(&(h.order() * a.order())) == to_biguint(&h.ambient().order())
}

/// Window groups pair the direct sum with the product of the same index set.
pub fn dual_window_group<T: IntScalar>(g: &WindowGroup<T>) -> WindowGroup<T> {
    match g.flavor() {
        Flavor::DirectSum => g.with_flavor(Flavor::Product),
        Flavor::Product => g.with_flavor(Flavor::DirectSum),
    }
}

//! Finite groups given by permutation generators, stored as full
//! multiplication tables, together with the subgroup families used by the
//! rest of the crate: centers, index-p subgroups, elementary abelian
//! subgroups, Frattini quotients and Sylow subgroups.
//!
//! Element ids are canonical: id 0 is the identity and the remaining ids are
//! assigned in breadth-first order over generator words.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpcore::is_prime;

pub const MAX_GROUP_ORDER: usize = 512;

/// Ingestion form of a group: 1-based permutation image lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    pub p: u32,
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    p: u32,
    order: usize,
    degree: usize,
    // 0-based images for every element
    perms: Vec<Vec<u32>>,
    table: Vec<u32>,
    inverse: Vec<u32>,
    generators: Vec<usize>,
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    // (a*b)(x) = a(b(x))
    b.iter().map(|&x| a[x as usize]).collect()
}

pub fn build_group(spec: &GroupSpec) -> Result<Arc<FiniteGroup>> {
    if !is_prime(spec.p) {
        return Err(Error::input(format!("{} is not prime", spec.p)));
    }
    let degree = spec.degree;
    let mut gens: Vec<Vec<u32>> = Vec::new();
    for (i, g) in spec.generators.iter().enumerate() {
        if g.len() != degree {
            return Err(Error::input(format!(
                "generator {i} has {} images, expected {degree}",
                g.len()
            )));
        }
        let mut seen = vec![false; degree];
        let mut perm = Vec::with_capacity(degree);
        for &x in g {
            if x == 0 || x as usize > degree || seen[x as usize - 1] {
                return Err(Error::input(format!(
                    "generator {i} is not a permutation of 1..{degree}"
                )));
            }
            seen[x as usize - 1] = true;
            perm.push(x - 1);
        }
        gens.push(perm);
    }
    let identity: Vec<u32> = (0..degree as u32).collect();
    let mut perms = vec![identity.clone()];
    let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(identity, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            let next = compose(&perms[e], g);
            if !index.contains_key(&next) {
                if perms.len() == MAX_GROUP_ORDER {
                    return Err(Error::cap(format!(
                        "group {} has more than {MAX_GROUP_ORDER} elements",
                        spec.name
                    )));
                }
                index.insert(next.clone(), perms.len());
                queue.push_back(perms.len());
                perms.push(next);
            }
        }
    }
    let n = perms.len();
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = index[&compose(&perms[a], &perms[b])] as u32;
        }
    }
    let mut generators = Vec::new();
    for g in &gens {
        let id = index[g];
        if id != 0 && !generators.contains(&id) {
            generators.push(id);
        }
    }
    Ok(Arc::new(FiniteGroup::assemble(
        spec.name.clone(),
        spec.p,
        degree,
        perms,
        table,
        generators,
    )))
}

impl FiniteGroup {
    fn assemble(
        name: String,
        p: u32,
        degree: usize,
        perms: Vec<Vec<u32>>,
        table: Vec<u32>,
        generators: Vec<usize>,
    ) -> Self {
        let order = perms.len();
        let mut inverse = vec![0u32; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverse[a] = b as u32;
                    break;
                }
            }
        }
        FiniteGroup {
            name,
            p,
            order,
            degree,
            perms,
            table,
            inverse,
            generators,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// 0-based permutation images of element `g`.
    pub fn perm(&self, g: usize) -> &[u32] {
        &self.perms[g]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// Row `a` of the table: `b -> a*b`.
    #[inline]
    pub fn left_translation(&self, a: usize) -> &[u32] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut acc = 0usize;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ainv_binv = self.mul(self.inv(a), self.inv(b));
        self.mul(ab, ainv_binv)
    }

    pub fn is_p_group(&self) -> bool {
        let mut n = self.order;
        while n % self.p as usize == 0 {
            n /= self.p as usize;
        }
        n == 1
    }

    /// Exponent r with |G| = p^r, if G is a p-group.
    pub fn p_rank_of_order(&self) -> Option<u32> {
        let mut n = self.order;
        let mut r = 0;
        while n % self.p as usize == 0 {
            n /= self.p as usize;
            r += 1;
        }
        (n == 1).then_some(r)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_elementary_abelian(&self) -> bool {
        self.is_abelian()
            && (0..self.order).all(|a| a == 0 || self.element_order(a) == self.p as usize)
    }

    /// Full associativity/identity/inverse check of the table.
    pub fn check_axioms(&self) -> bool {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return false;
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return false;
            }
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Ingestion form reproducing this group's generators.
    pub fn spec(&self) -> GroupSpec {
        GroupSpec {
            name: self.name.clone(),
            p: self.p,
            degree: self.degree,
            generators: self
                .generators
                .iter()
                .map(|&g| self.perms[g].iter().map(|x| x + 1).collect())
                .collect(),
        }
    }

    /// Sorted closure of `gens` under multiplication.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0usize];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Writes each element as a word in the generators: returns, for every
    /// element, its BFS parent and the generator index used to reach it.
    pub fn word_tree(&self) -> Vec<Option<(usize, usize)>> {
        let mut parent = vec![None; self.order];
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (gi, &g) in self.generators.iter().enumerate() {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, gi));
                    queue.push_back(y);
                }
            }
        }
        parent
    }

    pub fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> bool {
        a.order == b.order && a.p == b.p && a.table == b.table && a.generators == b.generators
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        FiniteGroup::same_group(self, other)
    }
}

/// A subgroup of a parent group, with a deterministic left transversal.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    transversal: Vec<usize>,
    // parent element -> index of its coset in `transversal`
    coset_of: Vec<usize>,
}

impl Subgroup {
    /// Checks closure and builds the transversal of least coset
    /// representatives.
    pub fn new(parent: Arc<FiniteGroup>, members: Vec<usize>) -> Result<Self> {
        let mut members = members;
        members.sort_unstable();
        members.dedup();
        let n = parent.order();
        let mut is_member = vec![false; n];
        for &m in &members {
            if m >= n {
                return Err(Error::input(format!("element {m} outside group of order {n}")));
            }
            is_member[m] = true;
        }
        if members.first() != Some(&0) {
            return Err(Error::domain("subgroup must contain the identity"));
        }
        for &a in &members {
            if !is_member[parent.inv(a)] {
                return Err(Error::domain("subset not closed under inverses"));
            }
            for &b in &members {
                if !is_member[parent.mul(a, b)] {
                    return Err(Error::domain("subset not closed under multiplication"));
                }
            }
        }
        let mut coset_of = vec![usize::MAX; n];
        let mut transversal = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let idx = transversal.len();
            transversal.push(g);
            for &h in &members {
                coset_of[parent.mul(g, h)] = idx;
            }
        }
        Ok(Subgroup {
            parent,
            members,
            transversal,
            coset_of,
        })
    }

    pub fn generated_by(parent: Arc<FiniteGroup>, gens: &[usize]) -> Self {
        let members = parent.closure(gens);
        Subgroup::new(parent, members).expect("closures are subgroups")
    }

    pub fn whole(parent: Arc<FiniteGroup>) -> Self {
        let members = (0..parent.order()).collect();
        Subgroup::new(parent, members).expect("whole group")
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        Subgroup::new(parent, vec![0]).expect("trivial group")
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.transversal.len()
    }

    pub fn transversal(&self) -> &[usize] {
        &self.transversal
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// Index in `transversal` of the coset `gH`.
    pub fn coset_index(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// Writes `g = t·h` with `t` the chosen representative; returns
    /// (coset index, h as a parent element id).
    pub fn decompose(&self, g: usize) -> (usize, usize) {
        let c = self.coset_of[g];
        let t = self.transversal[c];
        (c, self.parent.mul(self.parent.inv(t), g))
    }

    /// Position of a member in the re-indexed standalone group.
    pub fn local_id(&self, g: usize) -> Option<usize> {
        self.members.binary_search(&g).ok()
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.parent;
        (0..g.order()).all(|x| {
            let xi = g.inv(x);
            self.members
                .iter()
                .all(|&h| self.contains(g.mul(g.mul(x, h), xi)))
        })
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    /// The subgroup as a standalone group; element `i` corresponds to
    /// `members()[i]`. Generators are chosen greedily in increasing id order.
    pub fn as_group(&self) -> Arc<FiniteGroup> {
        let g = &self.parent;
        let n = self.members.len();
        let mut table = vec![0u32; n * n];
        for (i, &a) in self.members.iter().enumerate() {
            for (j, &b) in self.members.iter().enumerate() {
                table[i * n + j] = self.local_id(g.mul(a, b)).expect("closed") as u32;
            }
        }
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for &m in &self.members {
            if span.binary_search(&m).is_err() {
                gens.push(m);
                span = g.closure(&gens);
            }
        }
        let local_gens = gens.iter().map(|&m| self.local_id(m).unwrap()).collect();
        let perms = self.members.iter().map(|&m| g.perm(m).to_vec()).collect();
        let name = format!(
            "{}{{{}}}",
            g.name(),
            self.members
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        Arc::new(FiniteGroup::assemble(
            name,
            g.p(),
            g.degree(),
            perms,
            table,
            local_gens,
        ))
    }

    /// The generators of `as_group()` as parent element ids.
    pub fn generator_ids(&self) -> Vec<usize> {
        let local = self.as_group();
        local
            .generators()
            .iter()
            .map(|&i| self.members[i])
            .collect()
    }
}

/// A quotient group together with its projection.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub quotient: Arc<FiniteGroup>,
    pub projection: Vec<usize>,
    pub kernel: Subgroup,
}

pub fn quotient(g: &Arc<FiniteGroup>, n: &Subgroup) -> Result<QuotientGroup> {
    if !Arc::ptr_eq(n.parent(), g) && n.parent().as_ref() != g.as_ref() {
        return Err(Error::input("subgroup of a different group"));
    }
    if !n.is_normal() {
        return Err(Error::domain("quotient by a non-normal subgroup"));
    }
    let reps = n.transversal().to_vec();
    let q = reps.len();
    let projection: Vec<usize> = (0..g.order()).map(|x| n.coset_index(x)).collect();
    let mut table = vec![0u32; q * q];
    for i in 0..q {
        for j in 0..q {
            table[i * q + j] = projection[g.mul(reps[i], reps[j])] as u32;
        }
    }
    // regular permutation representation on cosets
    let perms: Vec<Vec<u32>> = (0..q)
        .map(|i| (0..q).map(|j| table[i * q + j]).collect())
        .collect();
    let mut gens = Vec::new();
    for &s in g.generators() {
        let c = projection[s];
        if c != 0 && !gens.contains(&c) {
            gens.push(c);
        }
    }
    let quotient = FiniteGroup::assemble(
        format!("{}/{}", g.name(), n.order()),
        g.p(),
        q,
        perms,
        table,
        gens,
    );
    Ok(QuotientGroup {
        quotient: Arc::new(quotient),
        projection,
        kernel: n.clone(),
    })
}

pub fn center(g: &Arc<FiniteGroup>) -> Subgroup {
    let members = (0..g.order())
        .filter(|&z| (0..g.order()).all(|x| g.mul(z, x) == g.mul(x, z)))
        .collect();
    Subgroup::new(g.clone(), members).expect("center is a subgroup")
}

fn require_p_group(g: &FiniteGroup) -> Result<()> {
    if !g.is_p_group() {
        return Err(Error::domain(format!(
            "{} (order {}) is not a {}-group",
            g.name(),
            g.order(),
            g.p()
        )));
    }
    Ok(())
}

pub fn central_order_p_subgroups(g: &Arc<FiniteGroup>) -> Result<Vec<Subgroup>> {
    require_p_group(g)?;
    if g.order() == 1 {
        return Err(Error::domain("trivial group has no subgroups of order p"));
    }
    let z = center(g);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &x in z.members() {
        if x != 0 && g.element_order(x) == g.p() as usize {
            let members = g.closure(&[x]);
            if seen.insert(members.clone()) {
                out.push(Subgroup::new(g.clone(), members)?);
            }
        }
    }
    Ok(out)
}

/// Homomorphisms G → Z/p, represented by their value on every element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupHom {
    pub values: Vec<u32>,
}

impl GroupHom {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn kernel(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&g| self.values[g] == 0).collect()
    }

    pub fn on_generators(&self, g: &FiniteGroup) -> Vec<u32> {
        g.generators().iter().map(|&s| self.values[s]).collect()
    }

    pub fn is_hom(&self, g: &FiniteGroup) -> bool {
        let p = g.p();
        (0..g.order()).all(|a| {
            (0..g.order()).all(|b| (self.values[a] + self.values[b]) % p == self.values[g.mul(a, b)])
        })
    }
}

/// The Frattini quotient with F_p coordinates on it.
#[derive(Clone, Debug)]
pub struct FrattiniQuotient {
    pub quotient: QuotientGroup,
    pub rank: usize,
    /// Coordinates in F_p^rank of the image of each element of G.
    pub coords: Vec<Vec<u32>>,
}

impl FrattiniQuotient {
    /// The homomorphism `g ↦ ⟨functional, coords(g)⟩`.
    pub fn hom(&self, functional: &[u32], p: u32) -> GroupHom {
        GroupHom {
            values: self
                .coords
                .iter()
                .map(|c| {
                    c.iter()
                        .zip(functional)
                        .fold(0, |acc, (a, b)| (acc + a * b) % p)
                })
                .collect(),
        }
    }
}

pub fn frattini_quotient(g: &Arc<FiniteGroup>) -> Result<FrattiniQuotient> {
    require_p_group(g)?;
    let p = g.p();
    let mut gens = Vec::new();
    for a in 0..g.order() {
        gens.push(g.pow(a, p as u64));
        for b in 0..g.order() {
            gens.push(g.commutator(a, b));
        }
    }
    gens.sort_unstable();
    gens.dedup();
    let phi = Subgroup::generated_by(g.clone(), &gens);
    let quotient = quotient(g, &phi)?;
    let q = &quotient.quotient;
    let mut basis = Vec::new();
    let mut span = vec![0usize];
    for x in 0..q.order() {
        if span.binary_search(&x).is_err() {
            basis.push(x);
            span = q.closure(&basis);
        }
    }
    let rank = basis.len();
    let mut q_coords = vec![Vec::new(); q.order()];
    let total = (p as usize).pow(rank as u32);
    for code in 0..total {
        let mut c = Vec::with_capacity(rank);
        let mut rest = code;
        for _ in 0..rank {
            c.push((rest % p as usize) as u32);
            rest /= p as usize;
        }
        c.reverse();
        let mut x = 0usize;
        for (b, &e) in basis.iter().zip(&c) {
            x = q.mul(x, q.pow(*b, e as u64));
        }
        q_coords[x] = c;
    }
    let coords = quotient
        .projection
        .iter()
        .map(|&x| q_coords[x].clone())
        .collect();
    Ok(FrattiniQuotient {
        quotient,
        rank,
        coords,
    })
}

/// All nonzero vectors of F_p^r whose first nonzero entry is 1, in
/// lexicographic order.
pub fn projective_points(p: u32, r: usize) -> Vec<Vec<u32>> {
    let total = (p as usize).pow(r as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = vec![0u32; r];
        let mut rest = code;
        for i in (0..r).rev() {
            c[i] = (rest % p as usize) as u32;
            rest /= p as usize;
        }
        if c.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(c);
        }
    }
    out
}

/// One entry per index-p subgroup: the kernel and a defining surjection.
pub fn index_p_subgroups(g: &Arc<FiniteGroup>) -> Result<Vec<(Subgroup, GroupHom)>> {
    require_p_group(g)?;
    if g.order() == 1 {
        return Err(Error::domain("trivial group has no index-p subgroups"));
    }
    let fq = frattini_quotient(g)?;
    projective_points(g.p(), fq.rank)
        .into_iter()
        .map(|c| {
            let hom = fq.hom(&c, g.p());
            Ok((Subgroup::new(g.clone(), hom.kernel())?, hom))
        })
        .collect()
}

pub fn elementary_abelian_subgroups(
    g: &Arc<FiniteGroup>,
    maximal_only: bool,
) -> Result<Vec<Subgroup>> {
    require_p_group(g)?;
    let p = g.p() as usize;
    let order_p: Vec<usize> = (1..g.order())
        .filter(|&x| g.element_order(x) == p)
        .collect();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut maximal: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier = vec![vec![0usize]];
    found.insert(vec![0]);
    while let Some(a) = frontier.pop() {
        let mut extended = false;
        for &x in &order_p {
            if a.binary_search(&x).is_ok() {
                continue;
            }
            if a.iter().any(|&y| g.mul(x, y) != g.mul(y, x)) {
                continue;
            }
            extended = true;
            let mut gens = a.clone();
            gens.push(x);
            let b = g.closure(&gens);
            if found.insert(b.clone()) {
                frontier.push(b);
            }
        }
        if !extended {
            maximal.insert(a);
        }
    }
    let chosen = if maximal_only { maximal } else { found };
    let mut subs: Vec<Vec<usize>> = chosen.into_iter().collect();
    subs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    subs.into_iter()
        .map(|m| Subgroup::new(g.clone(), m))
        .collect()
}

pub fn sylow_p(g: &Arc<FiniteGroup>) -> Subgroup {
    let p = g.p() as usize;
    let mut target = 1usize;
    let mut n = g.order();
    while n % p == 0 {
        n /= p;
        target *= p;
    }
    let is_p_power = |mut k: usize| {
        while k % p == 0 {
            k /= p;
        }
        k == 1
    };
    let mut current = vec![0usize];
    let mut gens = Vec::new();
    while current.len() < target {
        let mut grew = false;
        for x in 1..g.order() {
            if current.binary_search(&x).is_ok() || !is_p_power(g.element_order(x)) {
                continue;
            }
            let mut trial = gens.clone();
            trial.push(x);
            let c = g.closure(&trial);
            if is_p_power(c.len()) {
                gens = trial;
                current = c;
                grew = true;
                break;
            }
        }
        if !grew {
            break;
        }
    }
    Subgroup::new(g.clone(), current).expect("closure")
}

// ---------------------------------------------------------------------------
// Catalog

fn cycle(n: usize, shift: usize) -> Vec<u32> {
    (0..n).map(|i| ((i + 1) % n + 1 + shift) as u32).collect()
}

fn direct_product(factors: &[Vec<u32>]) -> (usize, Vec<Vec<u32>>) {
    let degree: usize = factors.iter().map(|f| f.len()).sum();
    let mut gens = Vec::new();
    let mut offset = 0;
    for f in factors {
        let mut g: Vec<u32> = (1..=degree as u32).collect();
        for (i, &x) in f.iter().enumerate() {
            g[offset + i] = x + offset as u32;
        }
        gens.push(g);
        offset += f.len();
    }
    (degree, gens)
}

/// Left-regular permutation representation of a group given by normal
/// forms and a multiplication rule.
fn regular_rep<T: Clone + Eq + std::hash::Hash>(
    name: &str,
    p: u32,
    elements: &[T],
    mul: impl Fn(&T, &T) -> T,
    gens: &[T],
) -> GroupSpec {
    let index: HashMap<T, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let generators = gens
        .iter()
        .map(|g| {
            elements
                .iter()
                .map(|e| index[&mul(g, e)] as u32 + 1)
                .collect()
        })
        .collect();
    GroupSpec {
        name: name.to_string(),
        p,
        degree: elements.len(),
        generators,
    }
}

/// ⟨a, b | a^n, b² = a^s, b a b⁻¹ = a^r⟩ on normal forms a^i b^j.
fn metacyclic(name: &str, n: i64, s: i64, r: i64) -> GroupSpec {
    let elements: Vec<(i64, i64)> = (0..2).flat_map(|j| (0..n).map(move |i| (i, j))).collect();
    let mul = |x: &(i64, i64), y: &(i64, i64)| {
        let (i, j) = *x;
        let (k, l) = *y;
        let twist = if j == 1 { r } else { 1 };
        let mut e = i + k * twist;
        let mut f = j + l;
        if f == 2 {
            e += s;
            f = 0;
        }
        (e.rem_euclid(n), f)
    };
    regular_rep(name, 2, &elements, mul, &[(1, 0), (0, 1)])
}

fn heisenberg(name: &str, p: i64) -> GroupSpec {
    let mut elements = Vec::new();
    for x in 0..p {
        for y in 0..p {
            for z in 0..p {
                elements.push((x, y, z));
            }
        }
    }
    let mul = |a: &(i64, i64, i64), b: &(i64, i64, i64)| {
        (
            (a.0 + b.0) % p,
            (a.1 + b.1) % p,
            (a.2 + b.2 + a.0 * b.1) % p,
        )
    };
    regular_rep(name, p as u32, &elements, mul, &[(1, 0, 0), (0, 1, 0)])
}

pub const CATALOG: &[&str] = &[
    "Z2", "Z3", "Z4", "Z8", "Z9", "V4", "Z2^3", "Z2xZ4", "D8", "Q8", "D16", "Q16", "SD16", "Z3^2",
    "3^1+2", "S3",
];

fn canonical_name(name: &str) -> Option<&'static str> {
    let n = match name {
        "Z2xZ2" | "Z2^2" | "V4" => "V4",
        "E8" | "Z2^3" | "Z2xZ2xZ2" => "Z2^3",
        "Z3xZ3" | "Z3^2" | "E9" => "Z3^2",
        "He3" | "3^1+2" | "3^{1+2}" | "Heis3" => "3^1+2",
        other => return CATALOG.iter().copied().find(|c| *c == other),
    };
    Some(n)
}

/// Catalog entry by name (with a few aliases).
pub fn catalog(name: &str) -> Option<GroupSpec> {
    let name = canonical_name(name)?;
    let cyclic = |n: usize, p: u32| GroupSpec {
        name: name.to_string(),
        p,
        degree: n,
        generators: vec![cycle(n, 0)],
    };
    let product = |factors: &[Vec<u32>], p: u32| {
        let (degree, generators) = direct_product(factors);
        GroupSpec {
            name: name.to_string(),
            p,
            degree,
            generators,
        }
    };
    Some(match name {
        "Z2" => cyclic(2, 2),
        "Z3" => cyclic(3, 3),
        "Z4" => cyclic(4, 2),
        "Z8" => cyclic(8, 2),
        "Z9" => cyclic(9, 3),
        "V4" => product(&[cycle(2, 0), cycle(2, 0)], 2),
        "Z2^3" => product(&[cycle(2, 0), cycle(2, 0), cycle(2, 0)], 2),
        "Z2xZ4" => product(&[cycle(2, 0), cycle(4, 0)], 2),
        "Z3^2" => product(&[cycle(3, 0), cycle(3, 0)], 3),
        "D8" => GroupSpec {
            name: name.to_string(),
            p: 2,
            degree: 4,
            generators: vec![vec![2, 3, 4, 1], vec![2, 1, 4, 3]],
        },
        "Q8" => metacyclic(name, 4, 2, -1),
        "D16" => metacyclic(name, 8, 0, -1),
        "Q16" => metacyclic(name, 8, 4, -1),
        "SD16" => metacyclic(name, 8, 0, 3),
        "3^1+2" => heisenberg(name, 3),
        "S3" => GroupSpec {
            name: name.to_string(),
            p: 3,
            degree: 3,
            generators: vec![vec![2, 3, 1], vec![2, 1, 3]],
        },
        _ => return None,
    })
}

pub fn catalog_group(name: &str) -> Result<Arc<FiniteGroup>> {
    let spec = catalog(name).ok_or_else(|| Error::input(format!("unknown group {name}")))?;
    build_group(&spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(name: &str) -> Arc<FiniteGroup> {
        catalog_group(name).unwrap()
    }

    #[test]
    fn catalog_orders_and_axioms() {
        let expected = [
            ("Z2", 2),
            ("Z3", 3),
            ("Z4", 4),
            ("Z8", 8),
            ("Z9", 9),
            ("V4", 4),
            ("Z2^3", 8),
            ("Z2xZ4", 8),
            ("D8", 8),
            ("Q8", 8),
            ("D16", 16),
            ("Q16", 16),
            ("SD16", 16),
            ("Z3^2", 9),
            ("3^1+2", 27),
            ("S3", 6),
        ];
        for (name, order) in expected {
            let g = grp(name);
            assert_eq!(g.order(), order, "{name}");
            assert!(g.check_axioms(), "{name}");
        }
        assert!(!grp("D8").is_abelian());
        assert!(!grp("Q8").is_abelian());
        assert!(grp("Z2^3").is_elementary_abelian());
        assert!(!grp("S3").is_p_group());
        // Q8 has a single involution, D16 has nine, 3^1+2 has exponent 3
        let involutions = |g: &FiniteGroup| (1..g.order()).filter(|&x| g.element_order(x) == 2).count();
        assert_eq!(involutions(&grp("Q8")), 1);
        assert_eq!(involutions(&grp("Q16")), 1);
        assert_eq!(involutions(&grp("D16")), 9);
        assert_eq!(involutions(&grp("SD16")), 5);
        let h = grp("3^1+2");
        assert!((1..27).all(|x| h.element_order(x) == 3));
    }

    #[test]
    fn build_examples() {
        let z2 = build_group(&GroupSpec {
            name: "t".into(),
            p: 2,
            degree: 2,
            generators: vec![vec![2, 1]],
        })
        .unwrap();
        assert_eq!(z2.order(), 2);
        let trivial = build_group(&GroupSpec {
            name: "1".into(),
            p: 2,
            degree: 3,
            generators: vec![],
        })
        .unwrap();
        assert_eq!(trivial.order(), 1);
        let bad = GroupSpec {
            name: "bad".into(),
            p: 2,
            degree: 3,
            generators: vec![vec![1, 1, 2]],
        };
        assert!(matches!(build_group(&bad), Err(Error::Input(_))));
        let not_prime = GroupSpec {
            name: "bad".into(),
            p: 4,
            degree: 2,
            generators: vec![vec![2, 1]],
        };
        assert!(matches!(build_group(&not_prime), Err(Error::Input(_))));
    }

    #[test]
    fn build_cap() {
        // S6 has 720 elements
        let spec = GroupSpec {
            name: "S6".into(),
            p: 2,
            degree: 6,
            generators: vec![vec![2, 3, 4, 5, 6, 1], vec![2, 1, 3, 4, 5, 6]],
        };
        assert!(matches!(build_group(&spec), Err(Error::Cap(_))));
    }

    #[test]
    fn centers() {
        assert_eq!(center(&grp("Z2xZ4")).order(), 8);
        assert_eq!(center(&grp("D8")).order(), 2);
        assert_eq!(center(&grp("Q8")).order(), 2);
        assert_eq!(center(&grp("3^1+2")).order(), 3);
    }

    #[test]
    fn central_order_p() {
        assert_eq!(central_order_p_subgroups(&grp("Z2")).unwrap().len(), 1);
        assert_eq!(central_order_p_subgroups(&grp("D8")).unwrap().len(), 1);
        assert_eq!(central_order_p_subgroups(&grp("V4")).unwrap().len(), 3);
        assert!(central_order_p_subgroups(&grp("S3")).is_err());
    }

    #[test]
    fn frattini_ranks() {
        assert_eq!(frattini_quotient(&grp("Z2^3")).unwrap().rank, 3);
        assert_eq!(frattini_quotient(&grp("Z4")).unwrap().rank, 1);
        let d8 = frattini_quotient(&grp("D8")).unwrap();
        assert_eq!(d8.rank, 2);
        assert_eq!(d8.quotient.kernel.order(), 2);
        assert!(d8.quotient.quotient.is_elementary_abelian());
        assert_eq!(frattini_quotient(&grp("3^1+2")).unwrap().rank, 2);
    }

    #[test]
    fn index_p_counts() {
        for name in ["Z2", "Z4", "V4", "D8", "Q8", "Z2^3", "Z2xZ4", "Z3^2", "Z9", "3^1+2", "SD16"] {
            let g = grp(name);
            let rank = frattini_quotient(&g).unwrap().rank as u32;
            let p = g.p() as usize;
            let subs = index_p_subgroups(&g).unwrap();
            assert_eq!(subs.len(), (p.pow(rank) - 1) / (p - 1), "{name}");
            for (h, hom) in &subs {
                assert_eq!(h.index(), p, "{name}");
                assert!(hom.is_hom(&g));
                assert!(!hom.is_zero());
            }
        }
        assert_eq!(index_p_subgroups(&grp("Z2")).unwrap()[0].0.order(), 1);
        assert!(index_p_subgroups(&build_group(&GroupSpec {
            name: "1".into(),
            p: 2,
            degree: 1,
            generators: vec![]
        }).unwrap())
        .is_err());
    }

    #[test]
    fn elementary_abelian_lists() {
        let v4 = elementary_abelian_subgroups(&grp("V4"), true).unwrap();
        assert_eq!(v4.len(), 1);
        assert_eq!(v4[0].order(), 4);
        let d8 = elementary_abelian_subgroups(&grp("D8"), true).unwrap();
        assert_eq!(d8.len(), 2);
        assert!(d8.iter().all(|e| e.order() == 4));
        let q8 = elementary_abelian_subgroups(&grp("Q8"), true).unwrap();
        assert_eq!(q8.len(), 1);
        assert_eq!(q8[0].members(), center(&grp("Q8")).members());
        assert_eq!(elementary_abelian_subgroups(&grp("Z2^3"), false).unwrap().len(), 16);
    }

    #[test]
    fn maximal_elementary_abelian_cannot_grow() {
        for name in ["D8", "Q8", "D16", "Q16", "SD16", "Z2xZ4", "3^1+2"] {
            let g = grp(name);
            for e in elementary_abelian_subgroups(&g, true).unwrap() {
                for x in 1..g.order() {
                    if e.contains(x) {
                        continue;
                    }
                    let mut gens = e.members().to_vec();
                    gens.push(x);
                    let bigger = Subgroup::generated_by(g.clone(), &gens);
                    assert!(!bigger.as_group().is_elementary_abelian(), "{name}");
                }
            }
        }
    }

    #[test]
    fn quotients() {
        let d8 = grp("D8");
        let triv = quotient(&d8, &Subgroup::trivial(d8.clone())).unwrap();
        assert_eq!(triv.quotient.order(), 8);
        let by_center = quotient(&d8, &center(&d8)).unwrap();
        assert_eq!(by_center.quotient.order(), 4);
        assert!(by_center.quotient.is_elementary_abelian());
        assert!(by_center.quotient.check_axioms());
        let whole = quotient(&d8, &Subgroup::whole(d8.clone())).unwrap();
        assert_eq!(whole.quotient.order(), 1);
        // a reflection subgroup is not normal
        let refl = (1..8).find(|&x| d8.element_order(x) == 2 && !center(&d8).contains(x)).unwrap();
        let h = Subgroup::generated_by(d8.clone(), &[refl]);
        assert!(matches!(quotient(&d8, &h), Err(Error::Domain(_))));
    }

    #[test]
    fn sylow() {
        let d8 = grp("D8");
        assert_eq!(sylow_p(&d8).order(), 8);
        let s3 = grp("S3");
        let p3 = sylow_p(&s3);
        assert_eq!(p3.order(), 3);
        let s3_2 = build_group(&GroupSpec {
            p: 2,
            ..catalog("S3").unwrap()
        })
        .unwrap();
        let p2 = sylow_p(&s3_2);
        assert_eq!(p2.order(), 2);
        assert_eq!(sylow_p(&s3_2).members(), p2.members());
        let z3 = grp("Z3");
        let not_dividing = build_group(&GroupSpec { p: 2, ..z3.spec() }).unwrap();
        assert_eq!(sylow_p(&not_dividing).order(), 1);
    }

    #[test]
    fn subgroup_as_group_roundtrip() {
        let q8 = grp("Q8");
        for (h, _) in index_p_subgroups(&q8).unwrap() {
            let hg = h.as_group();
            assert_eq!(hg.order(), 4);
            assert!(hg.check_axioms());
            let rebuilt = build_group(&hg.spec()).unwrap();
            assert_eq!(rebuilt.order(), 4);
            assert_eq!(h.transversal()[0], 0);
            assert_eq!(h.index(), 2);
        }
    }
}

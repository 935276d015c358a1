//! Finite-dimensional F_pG-modules and equivariant maps between them.
//!
//! A module stores the action matrix of every group element; the cache is
//! filled once at construction from the generator matrices, and the
//! construction itself checks the homomorphism property against the full
//! multiplication table.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fpcore::{is_zero, Echelon, FpMatrix};
use crate::groups::{FiniteGroup, QuotientGroup, Subgroup};

#[derive(Clone)]
pub struct KGModule {
    group: Arc<FiniteGroup>,
    dim: usize,
    actions: Arc<Vec<FpMatrix>>,
}

impl std::fmt::Debug for KGModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "KGModule({}, dim {})", self.group.name(), self.dim)
    }
}

/// JSON form: one matrix (list of rows) per group generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub group: String,
    pub dim: usize,
    pub generators: Vec<Vec<Vec<u32>>>,
}

fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a.as_ref() == b.as_ref()
}

impl KGModule {
    /// Builds a module from one matrix per group generator, checking that the
    /// assignment extends to a homomorphism G → GL(dim, p).
    pub fn from_generators(group: Arc<FiniteGroup>, mats: &[FpMatrix]) -> Result<Self> {
        let p = group.p();
        if mats.len() != group.generators().len() {
            return Err(Error::input(format!(
                "{} generator matrices for a group with {} generators",
                mats.len(),
                group.generators().len()
            )));
        }
        let dim = mats.first().map_or(0, |m| m.rows());
        if group.generators().is_empty() && mats.is_empty() {
            // trivial group: dimension must come from elsewhere
            return Err(Error::input(
                "cannot infer dimension for the trivial group; use KGModule::trivial_of_dim",
            ));
        }
        for m in mats {
            if m.p() != p || m.rows() != dim || m.cols() != dim {
                return Err(Error::input("generator matrices must be square of equal size over F_p"));
            }
        }
        let tree = group.word_tree();
        let mut actions = vec![FpMatrix::identity(p, dim); group.order()];
        // BFS order guarantees parents are filled first
        let mut order: Vec<usize> = (1..group.order()).collect();
        let mut depth = vec![0usize; group.order()];
        for x in 1..group.order() {
            let mut d = 0;
            let mut y = x;
            while let Some((par, _)) = tree[y] {
                d += 1;
                y = par;
            }
            depth[x] = d;
        }
        order.sort_by_key(|&x| (depth[x], x));
        for x in order {
            let (par, gi) = tree[x].ok_or_else(|| Error::internal("element unreachable"))?;
            actions[x] = actions[par].mul(&mats[gi])?;
        }
        for x in 0..group.order() {
            for (gi, &s) in group.generators().iter().enumerate() {
                if actions[x].mul(&mats[gi])? != actions[group.mul(x, s)] {
                    return Err(Error::input(
                        "generator matrices do not satisfy the group relations",
                    ));
                }
            }
        }
        Ok(KGModule {
            group,
            dim,
            actions: Arc::new(actions),
        })
    }

    fn from_actions(group: Arc<FiniteGroup>, dim: usize, actions: Vec<FpMatrix>) -> Self {
        debug_assert_eq!(actions.len(), group.order());
        KGModule {
            group,
            dim,
            actions: Arc::new(actions),
        }
    }

    pub fn trivial(group: &Arc<FiniteGroup>) -> Self {
        Self::trivial_of_dim(group, 1)
    }

    /// Direct sum of `dim` copies of the trivial module.
    pub fn trivial_of_dim(group: &Arc<FiniteGroup>, dim: usize) -> Self {
        let id = FpMatrix::identity(group.p(), dim);
        Self::from_actions(group.clone(), dim, vec![id; group.order()])
    }

    /// kG with basis the group elements, acting by left translation.
    pub fn regular(group: &Arc<FiniteGroup>) -> Self {
        Self::free(group, 1)
    }

    /// kG^rank; basis index `j * |G| + h` stands for `h·e_j`.
    pub fn free(group: &Arc<FiniteGroup>, rank: usize) -> Self {
        let n = group.order();
        let p = group.p();
        let actions = (0..n)
            .map(|g| {
                let mut m = FpMatrix::zeros(p, rank * n, rank * n);
                for j in 0..rank {
                    for h in 0..n {
                        m.set(j * n + group.mul(g, h), j * n + h, 1);
                    }
                }
                m
            })
            .collect();
        Self::from_actions(group.clone(), rank * n, actions)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn p(&self) -> u32 {
        self.group.p()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, g: usize) -> &FpMatrix {
        &self.actions[g]
    }

    pub fn generator_matrices(&self) -> Vec<FpMatrix> {
        self.group
            .generators()
            .iter()
            .map(|&s| self.actions[s].clone())
            .collect()
    }

    /// Checks `action(g)·action(h) = action(gh)` for every pair.
    pub fn check_homomorphism(&self) -> bool {
        let n = self.group.order();
        if !self.actions[0].is_identity() {
            return false;
        }
        (0..n).all(|g| {
            (0..n).all(|h| {
                self.actions[g].mul(&self.actions[h]).ok().as_ref()
                    == Some(&self.actions[self.group.mul(g, h)])
            })
        })
    }

    pub fn is_trivial_action(&self) -> bool {
        self.actions.iter().all(|a| a.is_identity())
    }

    pub fn same_action(&self, other: &KGModule) -> bool {
        same_group(&self.group, &other.group)
            && self.dim == other.dim
            && self.actions == other.actions
    }

    /// Fixed points as rows of a basis matrix.
    pub fn fixed_subspace(&self) -> FpMatrix {
        let p = self.p();
        let mut stacked = FpMatrix::zeros(p, 0, self.dim);
        for &s in self.group.generators() {
            let d = self.actions[s]
                .sub(&FpMatrix::identity(p, self.dim))
                .expect("square");
            stacked = stacked.vstack(&d).expect("same width");
        }
        stacked.kernel_basis()
    }

    /// Stable content hash of the group and action.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        let spec = self.group.spec();
        h.update(spec.p.to_le_bytes());
        h.update((self.group.order() as u64).to_le_bytes());
        for g in &spec.generators {
            for x in g {
                h.update(x.to_le_bytes());
            }
            h.update(b";");
        }
        h.update((self.dim as u64).to_le_bytes());
        for m in self.generator_matrices() {
            for x in m.entries() {
                h.update(x.to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }

    pub fn to_json(&self) -> ModuleJson {
        ModuleJson {
            group: self.group.name().to_string(),
            dim: self.dim,
            generators: self
                .generator_matrices()
                .iter()
                .map(|m| m.to_rows())
                .collect(),
        }
    }

    pub fn from_json(group: &Arc<FiniteGroup>, json: &ModuleJson) -> Result<Self> {
        if group.generators().is_empty() {
            if !json.generators.is_empty() {
                return Err(Error::input("trivial group takes no generator matrices"));
            }
            return Ok(Self::trivial_of_dim(group, json.dim));
        }
        let mats = json
            .generators
            .iter()
            .map(|rows| FpMatrix::from_rows(group.p(), json.dim, rows))
            .collect::<Result<Vec<_>>>()?;
        if mats.iter().any(|m| m.rows() != json.dim) {
            return Err(Error::input("matrix size does not match dim"));
        }
        Self::from_generators(group.clone(), &mats)
    }

    pub fn restrict(&self, h: &Subgroup) -> Result<KGModule> {
        if !same_group(&self.group, h.parent()) {
            return Err(Error::input("restriction to a subgroup of a different group"));
        }
        let hg = h.as_group();
        let actions = h
            .members()
            .iter()
            .map(|&m| self.actions[m].clone())
            .collect();
        Ok(Self::from_actions(hg, self.dim, actions))
    }

    /// Induction from `h` to its parent. Basis: outer loop over the
    /// transversal, inner loop over the basis of `self`.
    pub fn induce(&self, h: &Subgroup) -> Result<KGModule> {
        let hg = h.as_group();
        if !same_group(&self.group, &hg) {
            return Err(Error::input("module is not over the given subgroup"));
        }
        let g = h.parent();
        let p = g.p();
        let d = self.dim;
        let idx = h.index();
        let actions = (0..g.order())
            .map(|x| {
                let mut m = FpMatrix::zeros(p, idx * d, idx * d);
                for (c, &t) in h.transversal().iter().enumerate() {
                    let (c2, hh) = h.decompose(g.mul(x, t));
                    let a = &self.actions[h.local_id(hh).expect("member")];
                    for r in 0..d {
                        for s in 0..d {
                            let v = a.get(r, s);
                            if v != 0 {
                                m.set(c2 * d + r, c * d + s, v);
                            }
                        }
                    }
                }
                m
            })
            .collect();
        Ok(Self::from_actions(g.clone(), idx * d, actions))
    }

    pub fn inflate(&self, q: &QuotientGroup) -> Result<KGModule> {
        if !same_group(&self.group, &q.quotient) {
            return Err(Error::input("module is not over the quotient"));
        }
        let g = q.kernel.parent();
        let actions = q
            .projection
            .iter()
            .map(|&x| self.actions[x].clone())
            .collect();
        Ok(Self::from_actions(g.clone(), self.dim, actions))
    }

    /// Diagonal action on the tensor product over F_p.
    pub fn tensor(&self, other: &KGModule) -> Result<KGModule> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::input("tensor of modules over different groups"));
        }
        let actions = self
            .actions
            .iter()
            .zip(other.actions.iter())
            .map(|(a, b)| a.kronecker(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_actions(
            self.group.clone(),
            self.dim * other.dim,
            actions,
        ))
    }

    pub fn direct_sum(parts: &[KGModule]) -> Result<KGModule> {
        let first = parts
            .first()
            .ok_or_else(|| Error::input("empty direct sum"))?;
        let group = first.group.clone();
        if parts.iter().any(|m| !same_group(&m.group, &group)) {
            return Err(Error::input("direct sum over different groups"));
        }
        let dim: usize = parts.iter().map(|m| m.dim).sum();
        let p = group.p();
        let actions = (0..group.order())
            .map(|g| {
                let mut out = FpMatrix::zeros(p, dim, dim);
                let mut off = 0;
                for m in parts {
                    let a = &m.actions[g];
                    for r in 0..m.dim {
                        for c in 0..m.dim {
                            let v = a.get(r, c);
                            if v != 0 {
                                out.set(off + r, off + c, v);
                            }
                        }
                    }
                    off += m.dim;
                }
                out
            })
            .collect();
        Ok(Self::from_actions(group, dim, actions))
    }

    /// The submodule spanned by `rows`, in the echelon basis of that span.
    pub fn submodule(&self, rows: &FpMatrix) -> Result<KGModule> {
        let p = self.p();
        let basis = Echelon::from_rows(p, self.dim, (0..rows.rows()).map(|r| rows.row(r)));
        let k = basis.rank();
        let mut actions = Vec::with_capacity(self.group.order());
        for a in self.actions.iter() {
            let mut m = FpMatrix::zeros(p, k, k);
            for (c, b) in basis.rows().iter().enumerate() {
                let img = a.apply(b);
                let coords = basis
                    .coordinates(&img)
                    .ok_or_else(|| Error::domain("span is not a submodule"))?;
                for (r, v) in coords.into_iter().enumerate() {
                    m.set(r, c, v);
                }
            }
            actions.push(m);
        }
        Ok(Self::from_actions(self.group.clone(), k, actions))
    }

    /// The quotient by the submodule spanned by `rows`; quotient coordinates
    /// are the non-pivot coordinates of the reduced vector.
    pub fn quotient_module(&self, rows: &FpMatrix) -> Result<KGModule> {
        let p = self.p();
        let basis = Echelon::from_rows(p, self.dim, (0..rows.rows()).map(|r| rows.row(r)));
        let map = QuotientMap::new(basis);
        let q = map.quotient_dim();
        let mut actions = Vec::with_capacity(self.group.order());
        for a in self.actions.iter() {
            let mut m = FpMatrix::zeros(p, q, q);
            for (c, &k) in map.free_columns.iter().enumerate() {
                let col = a.column(k);
                let img = map.project(&col);
                for (r, v) in img.into_iter().enumerate() {
                    m.set(r, c, v);
                }
            }
            actions.push(m);
        }
        // well-defined only if the span is invariant
        for &s in self.group.generators() {
            for b in map.basis.rows() {
                if !map.basis.contains(&self.actions[s].apply(b)) {
                    return Err(Error::domain("span is not a submodule"));
                }
            }
        }
        Ok(Self::from_actions(self.group.clone(), q, actions))
    }
}

/// Projection F_p^n → F_p^n / W with coordinates on the non-pivot columns.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    basis: Echelon,
    free_columns: Vec<usize>,
}

impl QuotientMap {
    pub fn new(basis: Echelon) -> Self {
        let mut is_pivot = vec![false; basis.ambient_dim()];
        for &c in basis.pivots() {
            is_pivot[c] = true;
        }
        let free_columns = (0..basis.ambient_dim()).filter(|&c| !is_pivot[c]).collect();
        QuotientMap {
            basis,
            free_columns,
        }
    }

    pub fn quotient_dim(&self) -> usize {
        self.free_columns.len()
    }

    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        self.basis.reduce(&mut w);
        self.free_columns.iter().map(|&c| w[c]).collect()
    }
}

/// An equivariant linear map; `matrix` is `dim(target) × dim(source)`.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: KGModule,
    pub target: KGModule,
    pub matrix: FpMatrix,
}

impl ModuleMap {
    /// Checks shapes and equivariance on every group element.
    pub fn new(source: KGModule, target: KGModule, matrix: FpMatrix) -> Result<Self> {
        let map = Self::new_unchecked(source, target, matrix)?;
        if !map.is_equivariant() {
            return Err(Error::domain("map is not G-equivariant"));
        }
        Ok(map)
    }

    /// Checks shapes only.
    pub fn new_unchecked(source: KGModule, target: KGModule, matrix: FpMatrix) -> Result<Self> {
        if !same_group(&source.group, &target.group) {
            return Err(Error::input("map between modules over different groups"));
        }
        if matrix.rows() != target.dim || matrix.cols() != source.dim {
            return Err(Error::input(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim,
                source.dim
            )));
        }
        Ok(ModuleMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(m: &KGModule) -> Self {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: FpMatrix::identity(m.p(), m.dim),
        }
    }

    pub fn zero(source: &KGModule, target: &KGModule) -> Self {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix: FpMatrix::zeros(source.p(), target.dim, source.dim),
        }
    }

    pub fn is_equivariant(&self) -> bool {
        (0..self.source.group.order()).all(|g| {
            self.matrix.mul(self.source.action(g)).ok()
                == self.target.action(g).mul(&self.matrix).ok()
        })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if other.source.dim != self.target.dim {
            return Err(Error::input("maps are not composable"));
        }
        Ok(ModuleMap {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul(&self.matrix)?,
        })
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim
    }
}

/// The isomorphism `Ind_H^G(k) ⊗ L → Ind_H^G(Res_H L)` sending
/// `t ⊗ v ↦ t ⊗ t⁻¹v`; verified equivariant on every element.
pub fn frobenius_iso(h: &Subgroup, l: &KGModule) -> Result<ModuleMap> {
    if !same_group(h.parent(), &l.group) {
        return Err(Error::input("subgroup of a different group"));
    }
    let g = h.parent();
    let k_h = KGModule::trivial(&h.as_group());
    let source = k_h.induce(h)?.tensor(l)?;
    let target = l.restrict(h)?.induce(h)?;
    let d = l.dim;
    let mut m = FpMatrix::zeros(g.p(), source.dim, source.dim);
    for (c, &t) in h.transversal().iter().enumerate() {
        let a = l.action(g.inv(t));
        for r in 0..d {
            for s in 0..d {
                m.set(c * d + r, c * d + s, a.get(r, s));
            }
        }
    }
    let map = ModuleMap::new(source, target, m)?;
    if !map.is_injective() {
        return Err(Error::internal("Frobenius map is not invertible"));
    }
    Ok(map)
}

fn require_p_group(m: &KGModule) -> Result<()> {
    if !m.group.is_p_group() {
        return Err(Error::domain(format!(
            "{} is not a p-group",
            m.group.name()
        )));
    }
    Ok(())
}

/// Spanning rows (in echelon form) of the radical `I·M`, with `I` the
/// augmentation ideal. For p-groups this is the Jacobson radical.
pub fn radical(m: &KGModule) -> Result<FpMatrix> {
    require_p_group(m)?;
    Ok(radical_echelon(m).to_matrix())
}

pub(crate) fn radical_echelon(m: &KGModule) -> Echelon {
    let p = m.p();
    let mut e = Echelon::new(p, m.dim);
    for &s in m.group.generators() {
        let a = m.action(s);
        for c in 0..m.dim {
            let mut col = a.column(c);
            col[c] = crate::fpcore::sub_mod(col[c], 1, p);
            e.insert(col);
        }
    }
    e
}

/// Minimal generators of a module: standard basis vectors completing the
/// radical, in increasing coordinate order.
pub(crate) fn head_generators(m: &KGModule) -> Vec<Vec<u32>> {
    let mut e = radical_echelon(m);
    let mut out = Vec::new();
    for c in 0..m.dim {
        let mut v = vec![0; m.dim];
        v[c] = 1;
        if e.insert(v.clone()) {
            out.push(v);
        }
    }
    out
}

/// The map `kG^r → M` sending `h·e_j ↦ h·v_j`.
pub fn free_cover_matrix(m: &KGModule, gens: &[Vec<u32>]) -> FpMatrix {
    let n = m.group.order();
    let mut mat = FpMatrix::zeros(m.p(), m.dim, gens.len() * n);
    for (j, v) in gens.iter().enumerate() {
        for h in 0..n {
            let img = m.action(h).apply(v);
            for (r, x) in img.into_iter().enumerate() {
                if x != 0 {
                    mat.set(r, j * n + h, x);
                }
            }
        }
    }
    mat
}

#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    pub free: KGModule,
    pub cover: ModuleMap,
    pub rank: usize,
}

pub fn projective_cover(m: &KGModule) -> Result<ProjectiveCover> {
    require_p_group(m)?;
    if m.dim == 0 {
        return Err(Error::domain("zero module has no projective cover"));
    }
    let gens = head_generators(m);
    let rank = gens.len();
    let free = KGModule::free(&m.group, rank);
    let matrix = free_cover_matrix(m, &gens);
    let cover = ModuleMap::new_unchecked(free.clone(), m.clone(), matrix)?;
    Ok(ProjectiveCover { free, cover, rank })
}

/// A full flag `0 = M_0 ⊂ M_1 ⊂ … ⊂ M_d = M` with trivial one-dimensional
/// quotients; `M_i` is spanned by the first `i` rows of `flag`.
#[derive(Clone, Debug)]
pub struct CompositionSeries {
    pub flag: FpMatrix,
}

impl CompositionSeries {
    pub fn len(&self) -> usize {
        self.flag.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.flag.rows() == 0
    }

    pub fn step(&self, i: usize) -> FpMatrix {
        FpMatrix::from_rows(
            self.flag.p(),
            self.flag.cols(),
            &self.flag.to_rows()[..i],
        )
        .expect("prefix of flag")
    }

    /// Every step adds one dimension and every quotient is trivial.
    pub fn verify(&self, m: &KGModule) -> bool {
        let p = m.p();
        let mut e = Echelon::new(p, m.dim);
        for r in 0..self.flag.rows() {
            let v = self.flag.row(r).to_vec();
            for &s in m.group.generators() {
                let mut w = m.action(s).apply(&v);
                crate::fpcore::axpy(&mut w, &v, p - 1, p);
                if !e.contains(&w) {
                    return false;
                }
            }
            if !e.insert(v) {
                return false;
            }
        }
        e.rank() == m.dim
    }
}

pub fn composition_series(m: &KGModule) -> Result<CompositionSeries> {
    require_p_group(m)?;
    let p = m.p();
    let d = m.dim;
    let mut current = Echelon::new(p, d);
    let mut flag = Vec::with_capacity(d);
    let gen_minus_one: Vec<FpMatrix> = m
        .group
        .generators()
        .iter()
        .map(|&s| m.action(s).sub(&FpMatrix::identity(p, d)).expect("square"))
        .collect();
    while current.rank() < d {
        let qm = QuotientMap::new(current.clone());
        let q = qm.quotient_dim();
        let mut stacked = FpMatrix::zeros(p, gen_minus_one.len() * q, d);
        for (i, a) in gen_minus_one.iter().enumerate() {
            for c in 0..d {
                let img = qm.project(&a.column(c));
                for (r, v) in img.into_iter().enumerate() {
                    stacked.set(i * q + r, c, v);
                }
            }
        }
        let ker = stacked.kernel_basis();
        let next = (0..ker.rows())
            .map(|r| ker.row(r).to_vec())
            .find(|v| !current.contains(v))
            .ok_or_else(|| Error::internal("no fixed vector in a quotient of a p-group module"))?;
        debug_assert!(!is_zero(&next));
        flag.push(next.clone());
        current.insert(next);
    }
    Ok(CompositionSeries {
        flag: FpMatrix::from_rows(p, d, &flag)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog_group, center, index_p_subgroups, quotient};

    fn grp(name: &str) -> Arc<FiniteGroup> {
        catalog_group(name).unwrap()
    }

    #[test]
    fn trivial_and_regular() {
        let g = grp("D8");
        let k = KGModule::trivial(&g);
        assert_eq!(k.dim(), 1);
        assert!(k.is_trivial_action());
        assert!(k.tensor(&k).unwrap().same_action(&k));
        let r = KGModule::regular(&g);
        assert_eq!(r.dim(), 8);
        assert!(r.check_homomorphism());
        assert_eq!(r.fixed_subspace().rows(), 1);
        let z2 = grp("Z2");
        let r2 = KGModule::regular(&z2);
        assert_eq!(r2.action(1).to_rows(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn from_generators_rejects_bad_relations() {
        let g = grp("Z2");
        // [[1,1],[0,1]] has order 3 over F_3 but we are over F_2: order 2, fine
        let ok = FpMatrix::from_rows(2, 2, &[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(KGModule::from_generators(g.clone(), &[ok]).is_ok());
        let z3 = grp("Z3");
        let bad = FpMatrix::from_rows(3, 2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(KGModule::from_generators(z3, &[bad]).is_err());
    }

    #[test]
    fn restrict_examples() {
        let g = grp("D8");
        let r = KGModule::regular(&g);
        let triv = Subgroup::trivial(g.clone());
        let rr = r.restrict(&triv).unwrap();
        assert_eq!(rr.dim(), 8);
        assert!(rr.is_trivial_action());
        for (h, _) in index_p_subgroups(&g).unwrap() {
            let res = r.restrict(&h).unwrap();
            assert!(res.check_homomorphism());
            assert_eq!(res.fixed_subspace().rows(), h.index());
            assert!(KGModule::trivial(&g).restrict(&h).unwrap().is_trivial_action());
        }
    }

    #[test]
    fn induce_examples() {
        let g = grp("D8");
        for (h, _) in index_p_subgroups(&g).unwrap() {
            let k_h = KGModule::trivial(&h.as_group());
            let ind = k_h.induce(&h).unwrap();
            assert_eq!(ind.dim(), 2);
            assert!(ind.check_homomorphism());
        }
        let whole = Subgroup::whole(g.clone());
        let l = KGModule::regular(&g).restrict(&whole).unwrap();
        assert_eq!(l.induce(&whole).unwrap().dim(), 8);
        let triv = Subgroup::trivial(g.clone());
        let reg = KGModule::trivial(&triv.as_group()).induce(&triv).unwrap();
        assert!(reg.same_action(&KGModule::regular(&g)));
    }

    #[test]
    fn inflate_examples() {
        let g = grp("D8");
        let z = center(&g);
        let q = quotient(&g, &z).unwrap();
        let k = KGModule::trivial(&q.quotient).inflate(&q).unwrap();
        assert!(k.is_trivial_action());
        let reg = KGModule::regular(&q.quotient).inflate(&q).unwrap();
        assert_eq!(reg.dim(), 4);
        assert!(reg.check_homomorphism());
        for &n in z.members() {
            assert!(reg.action(n).is_identity());
        }
    }

    #[test]
    fn tensor_dims() {
        let g = grp("Z2xZ4");
        let a = KGModule::trivial_of_dim(&g, 2);
        let b = KGModule::trivial_of_dim(&g, 3);
        assert_eq!(a.tensor(&b).unwrap().dim(), 6);
        let r = KGModule::regular(&g);
        assert!(KGModule::trivial(&g).tensor(&r).unwrap().same_action(&r));
    }

    #[test]
    fn frobenius_examples() {
        let g = grp("Z4");
        let h = Subgroup::generated_by(g.clone(), &[g.pow(g.generators()[0], 2)]);
        assert_eq!(h.order(), 2);
        let l = KGModule::regular(&g);
        let iso = frobenius_iso(&h, &l).unwrap();
        assert_eq!(iso.source.dim(), 8);
        assert_eq!(iso.target.dim(), 8);
        assert!(iso.is_equivariant());
        assert!(iso.is_injective());
        let whole = Subgroup::whole(g.clone());
        let id = frobenius_iso(&whole, &l).unwrap();
        assert!(id.matrix.is_identity());
        let d8 = grp("D8");
        let rad = KGModule::regular(&d8).submodule(&radical(&KGModule::regular(&d8)).unwrap()).unwrap();
        for (h, _) in index_p_subgroups(&d8).unwrap() {
            let f = frobenius_iso(&h, &rad).unwrap();
            assert_eq!(f.source.dim(), 2 * 7);
        }
    }

    #[test]
    fn radical_examples() {
        let z2 = grp("Z2");
        assert_eq!(radical(&KGModule::trivial(&z2)).unwrap().rows(), 0);
        let r2 = radical(&KGModule::regular(&z2)).unwrap();
        assert_eq!(r2.to_rows(), vec![vec![1, 1]]);
        for name in ["D8", "Q8", "Z3^2"] {
            let g = grp(name);
            assert_eq!(radical(&KGModule::regular(&g)).unwrap().rows(), g.order() - 1);
        }
        assert!(radical(&KGModule::trivial(&grp("S3"))).is_err());
    }

    #[test]
    fn projective_cover_examples() {
        let g = grp("Z4");
        let k = KGModule::trivial(&g);
        let pc = projective_cover(&k).unwrap();
        assert_eq!(pc.rank, 1);
        assert!(pc.cover.is_surjective());
        assert!(pc.cover.is_equivariant());
        let reg = KGModule::regular(&g);
        let pr = projective_cover(&reg).unwrap();
        assert_eq!(pr.rank, 1);
        assert!(pr.cover.is_injective() && pr.cover.is_surjective());
        let rad = reg.submodule(&radical(&reg).unwrap()).unwrap();
        assert_eq!(rad.dim(), 3);
        let prad = projective_cover(&rad).unwrap();
        assert_eq!(prad.rank, 1);
        assert_eq!(prad.free.dim(), 4);
        assert!(prad.cover.is_surjective());
        let ker = prad.cover.matrix.kernel_basis();
        assert_eq!(ker.rows(), 1);
        // kernel inside radical of the free module
        let radf = radical_echelon(&prad.free);
        for r in 0..ker.rows() {
            assert!(radf.contains(ker.row(r)));
        }
        assert!(projective_cover(&KGModule::trivial_of_dim(&g, 0)).is_err());
    }

    #[test]
    fn composition_series_examples() {
        let z2 = grp("Z2");
        let k = KGModule::trivial(&z2);
        assert_eq!(composition_series(&k).unwrap().len(), 1);
        let r = KGModule::regular(&z2);
        let cs = composition_series(&r).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs.flag.row(0), &[1, 1]);
        assert!(cs.verify(&r));
        for name in ["D8", "Q8", "Z3^2", "3^1+2"] {
            let g = grp(name);
            let reg = KGModule::regular(&g);
            let cs = composition_series(&reg).unwrap();
            assert_eq!(cs.len(), g.order());
            assert!(cs.verify(&reg));
        }
    }

    #[test]
    fn quotient_and_submodule() {
        let g = grp("Z4");
        let reg = KGModule::regular(&g);
        let rad = radical(&reg).unwrap();
        let radm = reg.submodule(&rad).unwrap();
        let rad2 = radical(&radm).unwrap();
        assert_eq!(rad2.rows(), 2);
        // the 2-dimensional uniserial quotient kG / rad²(kG)
        let rad2_in_reg = {
            let sub = reg.submodule(&rad).unwrap();
            let _ = sub;
            let mut e = Echelon::new(2, 4);
            for &s in g.generators() {
                for r in 0..rad.rows() {
                    let mut w = reg.action(s).apply(rad.row(r));
                    crate::fpcore::axpy(&mut w, rad.row(r), 1, 2);
                    e.insert(w);
                }
            }
            e.to_matrix()
        };
        let q = reg.quotient_module(&rad2_in_reg).unwrap();
        assert_eq!(q.dim(), 2);
        assert!(q.check_homomorphism());
        assert!(!q.is_trivial_action());
    }

    #[test]
    fn json_roundtrip() {
        let g = grp("Q8");
        let r = KGModule::regular(&g);
        let back = KGModule::from_json(&g, &r.to_json()).unwrap();
        assert!(back.same_action(&r));
        assert_eq!(back.fingerprint(), r.fingerprint());
        assert_ne!(KGModule::trivial(&g).fingerprint(), r.fingerprint());
    }
}

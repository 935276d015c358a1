//! Certificates that a module lies in the thick subcategory of `D^b(kG)`
//! generated by the modules `Ind_E^G k`, E elementary abelian.
//!
//! Every node carries its group (as element ids of the root group) and the
//! generator matrices of its module, so a certificate can be re-checked
//! without any search.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohom::{CohomologyClass, GroupCohomology};
use crate::error::{Error, Result};
use crate::fpcore::FpMatrix;
use crate::groups::{build_group, sylow_p, FiniteGroup, GroupHom, GroupSpec, Subgroup};
use crate::kgmod::{composition_series, frobenius_iso, CompositionSeries, KGModule, ModuleMap};
use crate::resolve::{
    extension_class, verify_exact, ExactSequence, ExactnessReport, ResolutionCache,
    DEFAULT_RANK_CEILING,
};
use crate::serre::{bockstein_product, find_witness_in, splice, SerreWitness, SplicedSequence, DEFAULT_MAX_M};

pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;

/// `L ⊗ (sequence)`, with each middle term rewritten as `Ind_H^G Res_H L`
/// through the Frobenius isomorphism. The ends are `k ⊗ L = L`.
pub fn tensor_sequence(s: &SplicedSequence, l: &KGModule) -> Result<ExactSequence> {
    if l.group().as_ref() != s.group.as_ref() {
        return Err(Error::input("module over a different group"));
    }
    let d = l.dim();
    let p = l.p();
    let n = s.n();
    let mut objects = vec![l.clone()];
    let mut forward = vec![FpMatrix::identity(p, d)];
    let mut backward = vec![FpMatrix::identity(p, d)];
    for h in &s.subgroups {
        let iso = frobenius_iso(h, l)?;
        backward.push(
            iso.matrix
                .inverse()
                .ok_or_else(|| Error::internal("Frobenius map is singular"))?,
        );
        forward.push(iso.matrix.clone());
        objects.push(iso.target.clone());
    }
    objects.push(l.clone());
    forward.push(FpMatrix::identity(p, d));
    backward.push(FpMatrix::identity(p, d));
    let id = FpMatrix::identity(p, d);
    let mut maps = Vec::with_capacity(n + 1);
    for (i, f) in s.sequence.maps.iter().enumerate() {
        let tensored = f.matrix.kronecker(&id)?;
        let m = forward[i + 1].mul(&tensored)?.mul(&backward[i])?;
        maps.push(ModuleMap::new(objects[i].clone(), objects[i + 1].clone(), m)?);
    }
    ExactSequence::new(objects, maps)
}

/// The class of `seq` in `Ext^n(L, L)` against a minimal resolution of L.
pub fn ext_class_vanishes(
    seq: &ExactSequence,
    l: &KGModule,
    cache: &ResolutionCache,
) -> Result<(CohomologyClass, bool)> {
    if !seq.left_end().same_action(l) || !seq.right_end().same_action(l) {
        return Err(Error::input("sequence does not start and end at the module"));
    }
    let res = cache.get(l, seq.degree())?;
    let class = extension_class(seq, &res)?;
    let zero = class.is_zero();
    Ok((class, zero))
}

/// Unit `L → Ind_P^G Res_P L` and averaging retraction for a Sylow
/// subgroup; their composite is `[G:P]·id`.
pub struct SylowDescent {
    pub sylow: Subgroup,
    pub unit: ModuleMap,
    pub retraction: ModuleMap,
    pub index: usize,
    pub composite_is_scalar: bool,
}

pub fn sylow_descent(l: &KGModule) -> Result<SylowDescent> {
    let g = l.group();
    let p = g.p();
    if g.is_p_group() {
        return Err(Error::domain("Sylow descent applies to groups that are not p-groups"));
    }
    if g.order() % p as usize != 0 {
        return Err(Error::domain(format!("p = {p} does not divide |G| = {}", g.order())));
    }
    let sylow = sylow_p(g);
    let induced = l.restrict(&sylow)?.induce(&sylow)?;
    let d = l.dim();
    let idx = sylow.index();
    let mut unit = FpMatrix::zeros(p, idx * d, d);
    let mut retraction = FpMatrix::zeros(p, d, idx * d);
    for (c, &t) in sylow.transversal().iter().enumerate() {
        let inv = l.action(g.inv(t));
        let fwd = l.action(t);
        for r in 0..d {
            for s in 0..d {
                unit.set(c * d + r, s, inv.get(r, s));
                retraction.set(r, c * d + s, fwd.get(r, s));
            }
        }
    }
    let unit = ModuleMap::new(l.clone(), induced.clone(), unit)?;
    let retraction = ModuleMap::new(induced, l.clone(), retraction)?;
    let composite = retraction.matrix.clone();
    let composite = composite.mul(&unit.matrix)?;
    let scalar = FpMatrix::identity(p, d).scaled((idx % p as usize) as u32);
    Ok(SylowDescent {
        sylow,
        unit,
        retraction,
        index: idx,
        composite_is_scalar: composite == scalar,
    })
}

// ---------------------------------------------------------------------------
// Certificate data

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    LeafInducedTrivial,
    CompositionStep,
    SerreSpliceStep,
    SylowDescentStep,
    Unproven,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationLimits {
    pub max_m: usize,
    pub max_depth: usize,
    pub rank_ceiling: usize,
}

impl Default for GenerationLimits {
    fn default() -> Self {
        GenerationLimits {
            max_m: DEFAULT_MAX_M,
            max_depth: 16,
            rank_ceiling: DEFAULT_RANK_CEILING,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub m: usize,
    /// Values of each homomorphism on every element of the node group.
    pub homs: Vec<Vec<u32>>,
    /// Kernels, as root element ids.
    pub kernels: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtRecord {
    pub degree: usize,
    pub vector: Vec<u32>,
    pub is_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SylowRecord {
    pub index: usize,
    pub composite_is_scalar: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertNode {
    pub kind: NodeKind,
    /// The node's group as sorted element ids of the root group.
    pub group: Vec<usize>,
    pub dim: usize,
    pub fingerprint: String,
    /// Action matrices of the node group's generators.
    pub module: Vec<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    /// Maps of the tensored sequence, left to right.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Vec<Vec<Vec<u32>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exactness: Option<ExactnessReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext_class: Option<ExtRecord>,
    /// Flag rows of a composition series with trivial quotients.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<Vec<u32>>>,
    /// Rank of the projective cover, recorded on composition nodes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sylow: Option<SylowRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub children: Vec<CertNode>,
}

impl CertNode {
    pub fn walk<'a>(&'a self, out: &mut Vec<&'a CertNode>) {
        out.push(self);
        for c in &self.children {
            c.walk(out);
        }
    }

    pub fn leaves(&self) -> Vec<&CertNode> {
        let mut all = Vec::new();
        self.walk(&mut all);
        all.into_iter().filter(|n| n.children.is_empty()).collect()
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateHeader {
    pub coefficients: String,
    pub leaf_form: String,
    pub note: String,
}

impl Default for CertificateHeader {
    fn default() -> Self {
        CertificateHeader {
            coefficients: "F_p".into(),
            leaf_form: "Ind_E^G k, E elementary abelian".into(),
            note: "a p-group has no nontrivial one-dimensional representation over F_p, \
                   so the one-dimensional modules M in Ind_E^G M are all trivial"
                .into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationCertificate {
    pub schema_version: u32,
    pub header: CertificateHeader,
    pub limits: GenerationLimits,
    pub group: GroupSpec,
    pub root: CertNode,
}

impl GenerationCertificate {
    pub fn is_complete(&self) -> bool {
        let mut all = Vec::new();
        self.root.walk(&mut all);
        all.iter().all(|n| n.kind != NodeKind::Unproven)
    }

    /// Every leaf is the trivial module over an elementary abelian group.
    pub fn leaves_are_induced_trivial(&self) -> Result<bool> {
        let root = build_group(&self.group)?;
        for leaf in self.root.leaves() {
            if leaf.kind != NodeKind::LeafInducedTrivial || leaf.dim != 1 {
                return Ok(false);
            }
            let g = Subgroup::new(root.clone(), leaf.group.clone())?.as_group();
            if !g.is_elementary_abelian() && g.order() > 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn module_matrices(l: &KGModule) -> Vec<Vec<Vec<u32>>> {
    l.generator_matrices().iter().map(|m| m.to_rows()).collect()
}

fn rebuild_module(group: &Arc<FiniteGroup>, mats: &[Vec<Vec<u32>>], dim: usize) -> Result<KGModule> {
    let p = group.p();
    let mats: Vec<FpMatrix> = mats
        .iter()
        .map(|rows| {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim || r.iter().any(|&x| x >= p)) {
                return Err(Error::input("module matrix has the wrong shape or entries"));
            }
            FpMatrix::from_rows(p, dim, rows)
        })
        .collect::<Result<_>>()?;
    if mats.len() != group.generators().len() {
        return Err(Error::input("module lists the wrong number of generator matrices"));
    }
    KGModule::from_generators(group.clone(), &mats)
}

// ---------------------------------------------------------------------------
// Construction

struct Builder {
    root: Arc<FiniteGroup>,
    limits: GenerationLimits,
    cache: ResolutionCache,
    memo: Mutex<HashMap<(Vec<usize>, String), CertNode>>,
}

fn base_node(kind: NodeKind, members: &[usize], l: &KGModule) -> CertNode {
    CertNode {
        kind,
        group: members.to_vec(),
        dim: l.dim(),
        fingerprint: l.fingerprint(),
        module: module_matrices(l),
        witness: None,
        sequence: None,
        exactness: None,
        ext_class: None,
        series: None,
        cover_rank: None,
        sylow: None,
        reason: None,
        children: Vec::new(),
    }
}

fn unproven(members: &[usize], l: &KGModule, reason: String) -> CertNode {
    let mut n = base_node(NodeKind::Unproven, members, l);
    n.reason = Some(reason);
    n
}

/// The composition-series certificate over an elementary abelian group:
/// L is an iterated extension of trivial modules, each a leaf `Ind_E^E k`.
pub fn elementary_abelian_certificate(members: &[usize], l: &KGModule) -> Result<CertNode> {
    let g = l.group();
    if !g.is_elementary_abelian() && g.order() > 1 {
        return Err(Error::domain(format!("{} is not elementary abelian", g.name())));
    }
    let k = KGModule::trivial(g);
    if l.dim() == 1 {
        return Ok(base_node(NodeKind::LeafInducedTrivial, members, &k));
    }
    let series = composition_series(l)?;
    let mut node = base_node(NodeKind::CompositionStep, members, l);
    node.series = Some(series.flag.to_rows());
    node.cover_rank = Some(crate::kgmod::projective_cover(l)?.rank);
    node.children = (0..l.dim())
        .map(|_| base_node(NodeKind::LeafInducedTrivial, members, &k))
        .collect();
    Ok(node)
}

impl Builder {
    fn node(&self, members: Vec<usize>, l: KGModule, depth: usize) -> CertNode {
        let key = (members.clone(), l.fingerprint());
        if let Some(n) = self.memo.lock().expect("memo").get(&key) {
            return n.clone();
        }
        let node = match self.build(&members, &l, depth) {
            Ok(n) => n,
            Err(e) => unproven(&members, &l, e.to_string()),
        };
        self.memo.lock().expect("memo").insert(key, node.clone());
        node
    }

    fn to_root(&self, members: &[usize], local: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = local.iter().map(|&x| members[x]).collect();
        out.sort_unstable();
        out
    }

    fn child_module(&self, child_members: &[usize], l: &KGModule, h: &Subgroup) -> Result<KGModule> {
        let res = l.restrict(h)?;
        let g = Subgroup::new(self.root.clone(), child_members.to_vec())?.as_group();
        KGModule::from_generators(g, &res.generator_matrices())
    }

    fn build(&self, members: &[usize], l: &KGModule, depth: usize) -> Result<CertNode> {
        let g = l.group().clone();
        if depth > self.limits.max_depth {
            return Ok(unproven(members, l, "depth limit reached".into()));
        }
        if !g.is_p_group() {
            let sd = sylow_descent(l)?;
            let mut node = base_node(NodeKind::SylowDescentStep, members, l);
            node.sylow = Some(SylowRecord {
                index: sd.index,
                composite_is_scalar: sd.composite_is_scalar,
            });
            if !sd.composite_is_scalar || sd.index % g.p() as usize == 0 {
                return Ok(unproven(members, l, "Sylow retraction failed".into()));
            }
            let child_members = self.to_root(members, sd.sylow.members());
            let child_l = self.child_module(&child_members, l, &sd.sylow)?;
            node.children = vec![self.node(child_members, child_l, depth + 1)];
            return Ok(node);
        }
        if g.order() == 1 || g.is_elementary_abelian() {
            return elementary_abelian_certificate(members, l);
        }
        let ctx = GroupCohomology::with_cache(&self.cache, &g, 2 * self.limits.max_m)?;
        let search = find_witness_in(&ctx, self.limits.max_m)?;
        let Some(w) = search.witness else {
            return Ok(unproven(
                members,
                l,
                format!("no witness with m ≤ {}", self.limits.max_m),
            ));
        };
        let s = splice(&w)?;
        let seq = tensor_sequence(&s, l)?;
        let report = verify_exact(&seq)?;
        let (class, zero) = ext_class_vanishes(&seq, l, &self.cache)?;
        let mut node = base_node(NodeKind::SerreSpliceStep, members, l);
        node.witness = Some(WitnessRecord {
            m: w.m(),
            homs: w.homs.iter().map(|h| h.values.clone()).collect(),
            kernels: w.kernels.iter().map(|k| self.to_root(members, k.members())).collect(),
        });
        node.sequence = Some(seq.maps.iter().map(|m| m.matrix.to_rows()).collect());
        node.ext_class = Some(ExtRecord {
            degree: class.degree,
            vector: class.vector.clone(),
            is_zero: zero,
        });
        let pass = report.pass;
        node.exactness = Some(report);
        if !pass || !zero {
            return Ok(unproven(members, l, "tensored sequence failed its checks".into()));
        }
        // one child per distinct kernel, in first-appearance order
        let mut kernels: Vec<&Subgroup> = Vec::new();
        for k in &w.kernels {
            if !kernels.iter().any(|x| x.members() == k.members()) {
                kernels.push(k);
            }
        }
        let jobs: Vec<(Vec<usize>, KGModule)> = kernels
            .iter()
            .map(|h| {
                let cm = self.to_root(members, h.members());
                let cl = self.child_module(&cm, l, h)?;
                Ok((cm, cl))
            })
            .collect::<Result<_>>()?;
        node.children = jobs
            .into_par_iter()
            .map(|(cm, cl)| self.node(cm, cl, depth + 1))
            .collect();
        Ok(node)
    }
}

/// Builds the certificate for `l` over its group. Resource failures inside
/// the recursion become `unproven` nodes rather than errors.
pub fn generation_certificate(l: &KGModule, limits: &GenerationLimits) -> Result<GenerationCertificate> {
    let root = l.group().clone();
    let whole = Subgroup::whole(root.clone());
    let members = whole.members().to_vec();
    let builder = Builder {
        root: root.clone(),
        limits: limits.clone(),
        cache: ResolutionCache::new(limits.rank_ceiling),
        memo: Mutex::new(HashMap::new()),
    };
    let l0 = KGModule::from_generators(whole.as_group(), &l.restrict(&whole)?.generator_matrices())?;
    let node = builder.node(members, l0, 0);
    Ok(GenerationCertificate {
        schema_version: CERTIFICATE_SCHEMA_VERSION,
        header: CertificateHeader::default(),
        limits: limits.clone(),
        group: root.spec(),
        root: node,
    })
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub nodes_checked: usize,
    pub failures: Vec<String>,
}

struct Verifier {
    root: Arc<FiniteGroup>,
    cache: ResolutionCache,
    failures: Vec<String>,
    nodes: usize,
}

fn first_difference(a: &[Vec<Vec<u32>>], b: &[Vec<Vec<u32>>]) -> Option<String> {
    if a.len() != b.len() {
        return Some(format!("map count {} vs {}", a.len(), b.len()));
    }
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        if x.len() != y.len() {
            return Some(format!("maps[{i}] row count"));
        }
        for (r, (xr, yr)) in x.iter().zip(y).enumerate() {
            if xr.len() != yr.len() {
                return Some(format!("maps[{i}][{r}] length"));
            }
            if let Some(c) = xr.iter().zip(yr).position(|(u, v)| u != v) {
                return Some(format!("maps[{i}][{r}][{c}]"));
            }
        }
    }
    None
}

impl Verifier {
    fn fail(&mut self, path: &str, msg: impl std::fmt::Display) {
        self.failures.push(format!("{path}: {msg}"));
    }

    fn node(&mut self, n: &CertNode, path: &str, parent: Option<&[usize]>) {
        self.nodes += 1;
        let sub = match Subgroup::new(self.root.clone(), n.group.clone()) {
            Ok(s) => s,
            Err(e) => return self.fail(path, format!("group: {e}")),
        };
        if let Some(pm) = parent {
            if n.group.len() > pm.len() || n.group.iter().any(|x| pm.binary_search(x).is_err()) {
                self.fail(path, "group is not a subgroup of the parent group");
            }
        }
        let g = sub.as_group();
        let l = match rebuild_module(&g, &n.module, n.dim) {
            Ok(l) => l,
            Err(e) => return self.fail(&format!("{path}.module"), e),
        };
        if l.fingerprint() != n.fingerprint {
            self.fail(&format!("{path}.fingerprint"), "does not match the module");
        }
        match n.kind {
            NodeKind::Unproven => self.fail(path, format!(
                "unproven: {}",
                n.reason.as_deref().unwrap_or("no reason recorded")
            )),
            NodeKind::LeafInducedTrivial => {
                if !(g.is_elementary_abelian() || g.order() == 1) {
                    self.fail(path, "leaf group is not elementary abelian");
                }
                if n.dim != 1 || !l.is_trivial_action() {
                    self.fail(path, "leaf module is not trivial");
                }
            }
            NodeKind::CompositionStep => self.composition(n, path, &g, &l),
            NodeKind::SerreSpliceStep => self.splice_step(n, path, &g, &l),
            NodeKind::SylowDescentStep => self.sylow_step(n, path, &g, &l),
        }
        for (i, c) in n.children.iter().enumerate() {
            self.node(c, &format!("{path}.children[{i}]"), Some(&n.group));
        }
    }

    fn composition(&mut self, n: &CertNode, path: &str, g: &Arc<FiniteGroup>, l: &KGModule) {
        if !g.is_elementary_abelian() {
            self.fail(path, "composition node over a group that is not elementary abelian");
        }
        let Some(rows) = &n.series else {
            return self.fail(path, "missing composition series");
        };
        let flag = match FpMatrix::from_rows(g.p(), n.dim, rows) {
            Ok(f) if f.rows() == n.dim => f,
            _ => return self.fail(&format!("{path}.series"), "wrong shape"),
        };
        if !(CompositionSeries { flag }).verify(l) {
            self.fail(&format!("{path}.series"), "not a series with trivial quotients");
        }
        if n.children.len() != n.dim
            || n.children.iter().any(|c| c.kind != NodeKind::LeafInducedTrivial || c.group != n.group)
        {
            self.fail(path, "children must be one trivial leaf per composition factor");
        }
    }

    fn splice_step(&mut self, n: &CertNode, path: &str, g: &Arc<FiniteGroup>, l: &KGModule) {
        let (Some(w), Some(stored), Some(ext)) = (&n.witness, &n.sequence, &n.ext_class) else {
            return self.fail(path, "splice node is missing its witness, sequence or class");
        };
        let homs: Vec<GroupHom> = w.homs.iter().map(|v| GroupHom { values: v.clone() }).collect();
        let witness = match SerreWitness::from_homs(g, homs) {
            Ok(x) => x,
            Err(e) => return self.fail(&format!("{path}.witness"), e),
        };
        if witness.m() != w.m {
            self.fail(&format!("{path}.witness.m"), "does not match the hom count");
        }
        match GroupCohomology::with_cache(&self.cache, g, 2 * witness.m())
            .and_then(|ctx| bockstein_product(&ctx, &witness.homs))
        {
            Ok(prod) if prod.is_zero() => {}
            Ok(_) => self.fail(&format!("{path}.witness"), "Bockstein product is not zero"),
            Err(e) => self.fail(&format!("{path}.witness"), e),
        }
        let recomputed = match splice(&witness).and_then(|s| tensor_sequence(&s, l)) {
            Ok(s) => s,
            Err(e) => return self.fail(&format!("{path}.sequence"), e),
        };
        let fresh: Vec<Vec<Vec<u32>>> = recomputed.maps.iter().map(|m| m.matrix.to_rows()).collect();
        if let Some(pos) = first_difference(stored, &fresh) {
            self.fail(&format!("{path}.sequence"), format!("differs from recomputation at {pos}"));
        }
        // re-check the stored data itself
        let mut maps = Vec::new();
        for (i, rows) in stored.iter().enumerate() {
            let (src, tgt) = match (recomputed.objects.get(i), recomputed.objects.get(i + 1)) {
                (Some(a), Some(b)) => (a, b),
                _ => return self.fail(&format!("{path}.sequence"), "too many maps"),
            };
            let m = FpMatrix::from_rows(g.p(), src.dim(), rows)
                .and_then(|m| ModuleMap::new(src.clone(), tgt.clone(), m));
            match m {
                Ok(m) => maps.push(m),
                Err(e) => return self.fail(&format!("{path}.sequence.maps[{i}]"), e),
            }
        }
        let seq = match ExactSequence::new(recomputed.objects.clone(), maps) {
            Ok(s) => s,
            Err(e) => return self.fail(&format!("{path}.sequence"), e),
        };
        match verify_exact(&seq) {
            Ok(r) if r.pass => {}
            Ok(r) => self.fail(
                &format!("{path}.sequence"),
                format!("not exact at position {}", r.first_failure().unwrap_or(0)),
            ),
            Err(e) => self.fail(&format!("{path}.sequence"), e),
        }
        match ext_class_vanishes(&seq, l, &self.cache) {
            Ok((class, true)) if ext.is_zero && class.vector == ext.vector && class.degree == ext.degree => {}
            Ok((_, true)) => self.fail(&format!("{path}.ext_class"), "stored class differs"),
            Ok(_) => self.fail(&format!("{path}.ext_class"), "extension class is not zero"),
            Err(e) => self.fail(&format!("{path}.ext_class"), e),
        }
        // children: one per distinct kernel, carrying the restricted module
        let mut expected: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
        for k in &witness.kernels {
            let mut m: Vec<usize> = k.members().iter().map(|&x| n.group[x]).collect();
            m.sort_unstable();
            expected.insert(m, ());
        }
        let stored_kernels: BTreeMap<Vec<usize>, ()> = w.kernels.iter().map(|k| (k.clone(), ())).collect();
        if stored_kernels != expected {
            self.fail(&format!("{path}.witness.kernels"), "do not match the homomorphisms");
        }
        let have: BTreeMap<Vec<usize>, ()> = n.children.iter().map(|c| (c.group.clone(), ())).collect();
        if have != expected || n.children.len() != expected.len() {
            self.fail(path, "children do not match the witness kernels");
        }
        for (i, c) in n.children.iter().enumerate() {
            self.check_restriction(c, path, i, g, &n.group, l);
        }
    }

    fn check_restriction(
        &mut self,
        child: &CertNode,
        path: &str,
        i: usize,
        g: &Arc<FiniteGroup>,
        members: &[usize],
        l: &KGModule,
    ) {
        let local: Vec<usize> = child
            .group
            .iter()
            .filter_map(|x| members.binary_search(x).ok())
            .collect();
        if local.len() != child.group.len() {
            return;
        }
        let Ok(h) = Subgroup::new(g.clone(), local) else {
            return;
        };
        match l.restrict(&h) {
            Ok(r) if module_matrices(&r) == child.module => {}
            _ => self.fail(
                &format!("{path}.children[{i}].module"),
                "is not the restriction of the parent module",
            ),
        }
    }

    fn sylow_step(&mut self, n: &CertNode, path: &str, g: &Arc<FiniteGroup>, l: &KGModule) {
        let Some(rec) = &n.sylow else {
            return self.fail(path, "missing Sylow record");
        };
        match sylow_descent(l) {
            Ok(sd) => {
                if !sd.composite_is_scalar || sd.index % g.p() as usize == 0 {
                    self.fail(path, "retraction composite is not an invertible scalar");
                }
                if sd.index != rec.index || !rec.composite_is_scalar {
                    self.fail(path, "stored Sylow record differs");
                }
                let mut expected: Vec<usize> = sd.sylow.members().iter().map(|&x| n.group[x]).collect();
                expected.sort_unstable();
                if n.children.len() != 1 || n.children[0].group != expected {
                    self.fail(path, "child must be the Sylow subgroup");
                } else {
                    self.check_restriction(&n.children[0], path, 0, g, &n.group, l);
                }
            }
            Err(e) => self.fail(path, e),
        }
    }
}

/// Re-checks every stored claim of a certificate from its raw data.
pub fn verify_certificate(cert: &GenerationCertificate) -> VerifyReport {
    let mut report = VerifyReport::default();
    if cert.schema_version != CERTIFICATE_SCHEMA_VERSION {
        report.failures.push(format!("unsupported schema version {}", cert.schema_version));
        return report;
    }
    let root = match build_group(&cert.group) {
        Ok(g) => g,
        Err(e) => {
            report.failures.push(format!("group: {e}"));
            return report;
        }
    };
    if cert.root.group != (0..root.order()).collect::<Vec<_>>() {
        report.failures.push("root: node group is not the whole group".into());
    }
    let mut v = Verifier {
        root,
        cache: ResolutionCache::new(cert.limits.rank_ceiling),
        failures: Vec::new(),
        nodes: 0,
    };
    v.node(&cert.root, "root", None);
    report.failures.extend(v.failures);
    report.nodes_checked = v.nodes;
    report.pass = report.failures.is_empty();
    report
}

//! Free resolutions over F_pG, comparison maps between them, and the
//! extension class of an exact sequence.
//!
//! A free module `kG^b` is stored as vectors of length `b·|G|` where index
//! `j·|G| + h` is the basis element `h·e_j`; the group acts by permuting the
//! `h` coordinate. A kG-linear map out of a free module is determined by the
//! images of the `e_j`, which is all a resolution stores.
//!
//! For p-groups the resolution is minimal: each syzygy is covered by a
//! complement of its radical, so every boundary lands in the radical and the
//! ranks are the cohomology dimensions of the resolved module.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::cohom::CohomologyClass;
use crate::error::{Error, Result};
use crate::fpcore::{axpy, is_zero, mul_mod, Echelon, FpMatrix, Solver};
use crate::groups::FiniteGroup;
use crate::kgmod::{free_cover_matrix, head_generators, KGModule, ModuleMap};

pub const DEFAULT_RANK_CEILING: usize = 4096;

/// `g·x` for `x` in a free module of the given rank.
pub fn act_free(group: &FiniteGroup, g: usize, x: &[u32]) -> Vec<u32> {
    let n = group.order();
    let mut out = vec![0u32; x.len()];
    let row = group.left_translation(g);
    for (j, chunk) in x.chunks(n).enumerate() {
        let base = j * n;
        for (h, &v) in chunk.iter().enumerate() {
            if v != 0 {
                out[base + row[h] as usize] = v;
            }
        }
    }
    out
}

/// `dst += c · g·x` without allocating.
fn add_translate(group: &FiniteGroup, dst: &mut [u32], g: usize, x: &[u32], c: u32) {
    let n = group.order();
    let p = group.p();
    let row = group.left_translation(g);
    for (j, chunk) in x.chunks(n).enumerate() {
        let base = j * n;
        for (h, &v) in chunk.iter().enumerate() {
            if v != 0 {
                let t = base + row[h] as usize;
                dst[t] = (dst[t] + mul_mod(c, v, p)) % p;
            }
        }
    }
}

/// Sum of the coefficients in each free summand.
pub fn augment_components(x: &[u32], n: usize, p: u32) -> Vec<u32> {
    x.chunks(n)
        .map(|c| (c.iter().map(|&v| v as u64).sum::<u64>() % p as u64) as u32)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Strategy {
    /// Cover each syzygy by a complement of its radical (p-groups only).
    Minimal,
    /// Cover each syzygy greedily by submodule closure; valid for any group.
    Greedy,
}

pub struct FreeResolution {
    group: Arc<FiniteGroup>,
    module: KGModule,
    strategy: Strategy,
    ceiling: usize,
    betti: Vec<usize>,
    augmentation: Vec<Vec<u32>>,
    // boundaries[i] = images of the generators of P_i in P_{i-1}; index 0 unused
    boundaries: Vec<Vec<Vec<u32>>>,
    last_kernel: FpMatrix,
    solvers: Vec<OnceLock<Arc<Solver>>>,
}

impl std::fmt::Debug for FreeResolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FreeResolution({}, dim {}, betti {:?})",
            self.group.name(),
            self.module.dim(),
            self.betti
        )
    }
}

pub fn minimal_resolution(m: &KGModule, maxdeg: usize) -> Result<FreeResolution> {
    minimal_resolution_with_ceiling(m, maxdeg, DEFAULT_RANK_CEILING)
}

pub fn minimal_resolution_with_ceiling(
    m: &KGModule,
    maxdeg: usize,
    ceiling: usize,
) -> Result<FreeResolution> {
    if !m.group().is_p_group() {
        return Err(Error::domain(format!(
            "minimal resolutions need a p-group; {} is not",
            m.group().name()
        )));
    }
    FreeResolution::build(m, maxdeg, Strategy::Minimal, ceiling)
}

/// A free resolution of any module: minimal for p-groups, greedy otherwise.
pub fn free_resolution(m: &KGModule, maxdeg: usize, ceiling: usize) -> Result<FreeResolution> {
    let strategy = if m.group().is_p_group() {
        Strategy::Minimal
    } else {
        Strategy::Greedy
    };
    FreeResolution::build(m, maxdeg, strategy, ceiling)
}

impl FreeResolution {
    pub fn build(m: &KGModule, maxdeg: usize, strategy: Strategy, ceiling: usize) -> Result<Self> {
        if m.dim() == 0 {
            return Err(Error::domain("cannot resolve the zero module"));
        }
        if strategy == Strategy::Minimal && !m.group().is_p_group() {
            return Err(Error::domain("minimal strategy needs a p-group"));
        }
        let group = m.group().clone();
        let gens = match strategy {
            Strategy::Minimal => head_generators(m),
            Strategy::Greedy => greedy_module_generators(m),
        };
        let n = group.order();
        if gens.len() * n > ceiling {
            return Err(Error::cap(format!(
                "degree 0 needs rank {} (dimension {}), ceiling {ceiling}",
                gens.len(),
                gens.len() * n
            )));
        }
        let eps = free_cover_matrix(m, &gens);
        let last_kernel = eps.kernel_basis();
        let mut res = FreeResolution {
            group,
            module: m.clone(),
            strategy,
            ceiling,
            betti: vec![gens.len()],
            augmentation: gens,
            boundaries: vec![Vec::new()],
            last_kernel,
            solvers: vec![OnceLock::new()],
        };
        res.extend_to(maxdeg)?;
        Ok(res)
    }

    /// Computes further degrees in place.
    pub fn extend_to(&mut self, maxdeg: usize) -> Result<()> {
        let n = self.group.order();
        let p = self.group.p();
        while self.len() < maxdeg {
            let deg = self.len() + 1;
            let prev_rank = self.betti[deg - 1];
            let width = prev_rank * n;
            let kernel: Vec<Vec<u32>> = self.last_kernel.to_rows();
            let gens = match self.strategy {
                Strategy::Minimal => {
                    let mut rad = Echelon::new(p, width);
                    for k in &kernel {
                        for &s in self.group.generators() {
                            let mut w = act_free(&self.group, s, k);
                            axpy(&mut w, k, p - 1, p);
                            rad.insert(w);
                        }
                    }
                    let mut out = Vec::new();
                    for k in &kernel {
                        if rad.insert(k.clone()) {
                            out.push(k.clone());
                        }
                    }
                    out
                }
                Strategy::Greedy => {
                    let mut span = Echelon::new(p, width);
                    let mut out = Vec::new();
                    for k in &kernel {
                        if span.contains(k) {
                            continue;
                        }
                        for g in 0..n {
                            span.insert(act_free(&self.group, g, k));
                        }
                        out.push(k.clone());
                    }
                    out
                }
            };
            if gens.len() * n > self.ceiling {
                return Err(Error::cap(format!(
                    "degree {deg} needs rank {} (dimension {}), ceiling {}",
                    gens.len(),
                    gens.len() * n,
                    self.ceiling
                )));
            }
            self.betti.push(gens.len());
            self.boundaries.push(gens);
            self.solvers.push(OnceLock::new());
            let full = self.boundary_matrix(deg);
            if full.rank() != kernel.len() {
                return Err(Error::internal(format!(
                    "resolution not exact at degree {}",
                    deg - 1
                )));
            }
            self.last_kernel = full.kernel_basis();
        }
        Ok(())
    }

    pub fn extended(&self, maxdeg: usize) -> Result<FreeResolution> {
        let mut copy = FreeResolution {
            group: self.group.clone(),
            module: self.module.clone(),
            strategy: self.strategy,
            ceiling: self.ceiling,
            betti: self.betti.clone(),
            augmentation: self.augmentation.clone(),
            boundaries: self.boundaries.clone(),
            last_kernel: self.last_kernel.clone(),
            solvers: self
                .solvers
                .iter()
                .map(|s| {
                    let c = OnceLock::new();
                    if let Some(v) = s.get() {
                        let _ = c.set(v.clone());
                    }
                    c
                })
                .collect(),
        };
        copy.extend_to(maxdeg)?;
        Ok(copy)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn module(&self) -> &KGModule {
        &self.module
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Largest computed homological degree.
    pub fn len(&self) -> usize {
        self.betti.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn betti(&self) -> &[usize] {
        &self.betti
    }

    pub fn rank(&self, deg: usize) -> usize {
        self.betti[deg]
    }

    /// Images of the degree-0 generators in the resolved module.
    pub fn augmentation(&self) -> &[Vec<u32>] {
        &self.augmentation
    }

    /// Images of the generators of `P_deg` in `P_{deg-1}` (`deg ≥ 1`).
    pub fn boundary(&self, deg: usize) -> &[Vec<u32>] {
        &self.boundaries[deg]
    }

    /// The full F_p matrix of `∂_deg` (`∂_0` is the augmentation).
    pub fn boundary_matrix(&self, deg: usize) -> FpMatrix {
        let n = self.group.order();
        let p = self.group.p();
        if deg == 0 {
            return free_cover_matrix(&self.module, &self.augmentation);
        }
        let rows = self.betti[deg - 1] * n;
        let cols = self.betti[deg] * n;
        let mut m = FpMatrix::zeros(p, rows, cols);
        for (j, img) in self.boundaries[deg].iter().enumerate() {
            for h in 0..n {
                let col = act_free(&self.group, h, img);
                for (r, v) in col.into_iter().enumerate() {
                    if v != 0 {
                        m.set(r, j * n + h, v);
                    }
                }
            }
        }
        m
    }

    pub(crate) fn solver(&self, deg: usize) -> Arc<Solver> {
        self.solvers[deg]
            .get_or_init(|| Arc::new(Solver::new(&self.boundary_matrix(deg))))
            .clone()
    }

    /// `∂_deg(x)` for `x` in `P_deg`.
    pub fn apply_boundary(&self, deg: usize, x: &[u32]) -> Vec<u32> {
        let n = self.group.order();
        let p = self.group.p();
        if deg == 0 {
            let mut out = vec![0u32; self.module.dim()];
            for (j, v) in self.augmentation.iter().enumerate() {
                for h in 0..n {
                    let c = x[j * n + h];
                    if c != 0 {
                        axpy(&mut out, &self.module.action(h).apply(v), c, p);
                    }
                }
            }
            return out;
        }
        let mut out = vec![0u32; self.betti[deg - 1] * n];
        for (j, img) in self.boundaries[deg].iter().enumerate() {
            for h in 0..n {
                let c = x[j * n + h];
                if c != 0 {
                    add_translate(&self.group, &mut out, h, img, c);
                }
            }
        }
        out
    }

    /// Checks `∂∂ = 0`, exactness by rank counts, and (for minimal
    /// resolutions) that every boundary lands in the radical.
    pub fn verify(&self) -> bool {
        let n = self.group.order();
        let p = self.group.p();
        let mats: Vec<FpMatrix> = (0..=self.len()).map(|d| self.boundary_matrix(d)).collect();
        if mats[0].rank() != self.module.dim() {
            return false;
        }
        for d in 1..=self.len() {
            if !mats[d - 1].mul(&mats[d]).map(|m| m.is_zero()).unwrap_or(false) {
                return false;
            }
            if mats[d].rank() + mats[d - 1].rank() != self.betti[d - 1] * n {
                return false;
            }
            if self.strategy == Strategy::Minimal
                && self.boundaries[d]
                    .iter()
                    .any(|img| !is_zero(&augment_components(img, n, p)))
            {
                return false;
            }
        }
        true
    }
}

fn greedy_module_generators(m: &KGModule) -> Vec<Vec<u32>> {
    let p = m.p();
    let d = m.dim();
    let mut span = Echelon::new(p, d);
    let mut out = Vec::new();
    for c in 0..d {
        let mut v = vec![0u32; d];
        v[c] = 1;
        if span.contains(&v) {
            continue;
        }
        for g in 0..m.group().order() {
            span.insert(m.action(g).apply(&v));
        }
        out.push(v);
    }
    out
}

/// Degreewise maps `P_{shift+s} → Q_s` given on generators.
///
/// The source group acts on the target through `hom`, which is the identity,
/// a subgroup inclusion, or a quotient projection.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub shift: usize,
    /// `components[s][j]`: image in `Q_s` of generator `j` of `P_{shift+s}`.
    pub components: Vec<Vec<Vec<u32>>>,
}

impl ChainMap {
    pub fn depth(&self) -> usize {
        self.components.len().saturating_sub(1)
    }

    /// Per-summand augmentation of component `s`: a `b^P_{shift+s} × b^Q_s`
    /// matrix. Composing a trivial-coefficient cocycle on `Q_s` with the
    /// chain map is multiplication by this matrix.
    pub fn augmented(&self, s: usize, target: &FreeResolution) -> FpMatrix {
        let comp = &self.components[s];
        let target_order = target.group().order();
        let p = target.group().p();
        let cols = target.rank(s);
        let rows: Vec<Vec<u32>> = comp
            .iter()
            .map(|v| augment_components(v, target_order, p))
            .collect();
        if rows.is_empty() {
            return FpMatrix::zeros(p, 0, cols);
        }
        FpMatrix::from_rows(p, cols, &rows).expect("uniform widths")
    }
}

/// Where a chain-map lift starts: the values of `P_shift`'s generators in
/// the module resolved by the target.
pub struct LiftSpec<'a> {
    pub source: &'a FreeResolution,
    pub target: &'a FreeResolution,
    /// source element id → target element id
    pub hom: &'a [usize],
    pub shift: usize,
    pub start: Vec<Vec<u32>>,
}

/// Lifts a map `P_shift → N` (or `M → N` when `shift = 0`) to a chain map
/// through degree `depth` of the target, solving the commuting squares with
/// free variables pinned to zero.
pub fn lift(spec: LiftSpec<'_>, depth: usize) -> Result<ChainMap> {
    let LiftSpec {
        source,
        target,
        hom,
        shift,
        start,
    } = spec;
    if shift + depth > source.len() {
        return Err(Error::internal(format!(
            "source resolution has length {}, need {}",
            source.len(),
            shift + depth
        )));
    }
    if depth > target.len() {
        return Err(Error::internal(format!(
            "target resolution has length {}, need {depth}",
            target.len()
        )));
    }
    if start.len() != source.rank(shift) {
        return Err(Error::input("start values do not match the source rank"));
    }
    let tg = &target.group;
    let n_src = source.group.order();
    let solver0 = target.solver(0);
    let mut first = Vec::with_capacity(start.len());
    for v in &start {
        first.push(
            solver0
                .solve(v)
                .ok_or_else(|| Error::internal("start values not in the image of the augmentation"))?,
        );
    }
    let mut components = vec![first];
    for s in 1..=depth {
        let prev = &components[s - 1];
        let width = target.rank(s - 1) * tg.order();
        let solver = target.solver(s);
        let mut level = Vec::with_capacity(source.rank(shift + s));
        for img in source.boundary(shift + s) {
            let mut y = vec![0u32; width];
            for (i, chunk) in img.chunks(n_src).enumerate() {
                for (a, &c) in chunk.iter().enumerate() {
                    if c != 0 {
                        add_translate(tg, &mut y, hom[a], &prev[i], c);
                    }
                }
            }
            let x = solver
                .solve(&y)
                .ok_or_else(|| Error::internal(format!("lift obstructed at degree {s}")))?;
            level.push(x);
        }
        components.push(level);
    }
    Ok(ChainMap { shift, components })
}

fn identity_hom(g: &FiniteGroup) -> Vec<usize> {
    (0..g.order()).collect()
}

/// Lifts an equivariant map `f: M → N` to `P(M) → P(N)` through `depth`.
pub fn lift_module_map(
    f: &ModuleMap,
    pm: &FreeResolution,
    pn: &FreeResolution,
    depth: usize,
) -> Result<ChainMap> {
    if !f.source.same_action(&pm.module) || !f.target.same_action(&pn.module) {
        return Err(Error::input("map does not match the resolved modules"));
    }
    let start = pm
        .augmentation
        .iter()
        .map(|v| f.matrix.apply(v))
        .collect();
    lift(
        LiftSpec {
            source: pm,
            target: pn,
            hom: &identity_hom(&pm.group),
            shift: 0,
            start,
        },
        depth,
    )
}

/// Lifts a cocycle `P_shift → N` (values on generators) to a chain map of
/// degree `shift`.
pub fn lift_cocycle(
    values: Vec<Vec<u32>>,
    pm: &FreeResolution,
    pn: &FreeResolution,
    shift: usize,
    depth: usize,
) -> Result<ChainMap> {
    lift(
        LiftSpec {
            source: pm,
            target: pn,
            hom: &identity_hom(&pm.group),
            shift,
            start: values,
        },
        depth,
    )
}

/// Composite `second ∘ first` of two degree-0 chain maps between
/// resolutions over the same group.
pub fn compose_chain_maps(
    first: &ChainMap,
    second: &ChainMap,
    middle: &FreeResolution,
) -> Result<ChainMap> {
    if first.shift != 0 || second.shift != 0 {
        return Err(Error::input("composition implemented for degree-0 maps"));
    }
    let depth = first.depth().min(second.depth());
    let g = &middle.group;
    let n = g.order();
    let mut components = Vec::new();
    for s in 0..=depth {
        let width = second.components[s].first().map_or(0, |v| v.len());
        let level = first.components[s]
            .iter()
            .map(|x| {
                let mut out = vec![0u32; width];
                for (i, chunk) in x.chunks(n).enumerate() {
                    for (h, &c) in chunk.iter().enumerate() {
                        if c != 0 {
                            add_translate(g, &mut out, h, &second.components[s][i], c);
                        }
                    }
                }
                out
            })
            .collect();
        components.push(level);
    }
    Ok(ChainMap {
        shift: 0,
        components,
    })
}

/// Checks the commuting squares of a chain map between resolutions over
/// the same group.
pub fn chain_map_commutes(
    f: &ChainMap,
    source: &FreeResolution,
    target: &FreeResolution,
    hom: &[usize],
) -> bool {
    let tg = &target.group;
    let n_src = source.group.order();
    for s in 1..=f.depth() {
        for (j, img) in source.boundary(f.shift + s).iter().enumerate() {
            let lhs = target.apply_boundary(s, &f.components[s][j]);
            let mut rhs = vec![0u32; lhs.len()];
            for (i, chunk) in img.chunks(n_src).enumerate() {
                for (a, &c) in chunk.iter().enumerate() {
                    if c != 0 {
                        add_translate(tg, &mut rhs, hom[a], &f.components[s - 1][i], c);
                    }
                }
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Hom complexes

/// `Hom_kG(P_•, M)` for a resolution `P` and coefficients `M`. A cochain in
/// degree n is the list of images of the generators of `P_n`, flattened as
/// `j·dim M + r`.
pub struct HomComplex<'a> {
    pub res: &'a FreeResolution,
    pub coeff: KGModule,
}

impl<'a> HomComplex<'a> {
    pub fn new(res: &'a FreeResolution, coeff: &KGModule) -> Result<Self> {
        if res.group.as_ref() != coeff.group().as_ref() {
            return Err(Error::input("coefficients over a different group"));
        }
        Ok(HomComplex {
            res,
            coeff: coeff.clone(),
        })
    }

    pub fn cochain_dim(&self, n: usize) -> usize {
        self.res.rank(n) * self.coeff.dim()
    }

    /// Matrix of `δ: C^n → C^{n+1}`, `(δf)(e_j) = f(∂e_j)`.
    pub fn coboundary(&self, n: usize) -> FpMatrix {
        let g = &self.res.group;
        let p = g.p();
        let d = self.coeff.dim();
        let nn = g.order();
        let rows = self.res.rank(n + 1) * d;
        let cols = self.res.rank(n) * d;
        let mut m = FpMatrix::zeros(p, rows, cols);
        for (j, img) in self.res.boundary(n + 1).iter().enumerate() {
            for (i, chunk) in img.chunks(nn).enumerate() {
                for (h, &c) in chunk.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let a = self.coeff.action(h);
                    for r in 0..d {
                        for s in 0..d {
                            let v = a.get(r, s);
                            if v != 0 {
                                let idx = (j * d + r) * cols + i * d + s;
                                let cur = m.entries()[idx];
                                m.set(j * d + r, i * d + s, cur + mul_mod(c, v, p));
                            }
                        }
                    }
                }
            }
        }
        m
    }

    /// Evaluates a cochain `f ∈ C^n` on an element of `P_n`.
    pub fn evaluate(&self, f: &[u32], x: &[u32]) -> Vec<u32> {
        let g = &self.res.group;
        let p = g.p();
        let d = self.coeff.dim();
        let nn = g.order();
        let mut out = vec![0u32; d];
        for (i, chunk) in x.chunks(nn).enumerate() {
            let fi = &f[i * d..(i + 1) * d];
            if is_zero(fi) {
                continue;
            }
            for (h, &c) in chunk.iter().enumerate() {
                if c != 0 {
                    axpy(&mut out, &self.coeff.action(h).apply(fi), c, p);
                }
            }
        }
        out
    }

    pub fn coboundaries(&self, n: usize) -> Echelon {
        let p = self.res.group.p();
        if n == 0 {
            return Echelon::new(p, self.cochain_dim(0));
        }
        let t = self.coboundary(n - 1).transpose();
        Echelon::from_rows(p, self.cochain_dim(n), (0..t.rows()).map(|r| t.row(r)))
    }

    /// Cocycle basis in degree n (needs `n + 1 ≤ len`).
    pub fn cocycles(&self, n: usize) -> FpMatrix {
        self.coboundary(n).kernel_basis()
    }

    pub fn cohomology_dim(&self, n: usize) -> usize {
        let z = self.cochain_dim(n) - self.coboundary(n).rank();
        let b = if n == 0 {
            0
        } else {
            self.coboundary(n - 1).rank()
        };
        z - b
    }

    /// A basis of `H^n` as cocycle representatives: cocycles completing the
    /// coboundary space, in kernel-basis order.
    pub fn cohomology_basis(&self, n: usize) -> Vec<Vec<u32>> {
        let mut span = self.coboundaries(n);
        let z = self.cocycles(n);
        let mut out = Vec::new();
        for r in 0..z.rows() {
            let v = z.row(r).to_vec();
            if span.insert(v.clone()) {
                out.push(v);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Exact sequences

/// `0 → objects[0] → objects[1] → … → objects[last] → 0`, with
/// `maps[i]: objects[i] → objects[i+1]`.
#[derive(Clone, Debug)]
pub struct ExactSequence {
    pub objects: Vec<KGModule>,
    pub maps: Vec<ModuleMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct PositionReport {
    pub position: usize,
    pub dim: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
    pub composite_zero: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ExactnessReport {
    pub positions: Vec<PositionReport>,
    pub pass: bool,
}

impl ExactnessReport {
    pub fn first_failure(&self) -> Option<usize> {
        self.positions.iter().find(|r| !r.exact).map(|r| r.position)
    }
}

impl ExactSequence {
    pub fn new(objects: Vec<KGModule>, maps: Vec<ModuleMap>) -> Result<Self> {
        if objects.len() < 2 || maps.len() + 1 != objects.len() {
            return Err(Error::input("a sequence needs k objects and k-1 maps, k ≥ 2"));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.source.dim() != objects[i].dim() || m.target.dim() != objects[i + 1].dim() {
                return Err(Error::input(format!("map {i} does not fit between its objects")));
            }
        }
        Ok(ExactSequence { objects, maps })
    }

    /// Homological length n of the extension `0 → B → X_{n−1} → … → X_0 → A → 0`.
    pub fn degree(&self) -> usize {
        self.objects.len() - 2
    }

    pub fn left_end(&self) -> &KGModule {
        &self.objects[0]
    }

    pub fn right_end(&self) -> &KGModule {
        self.objects.last().expect("nonempty")
    }

    /// Middle term `X_i`.
    pub fn middle(&self, i: usize) -> &KGModule {
        &self.objects[self.degree() - i]
    }
}

pub fn verify_exact(seq: &ExactSequence) -> Result<ExactnessReport> {
    for (i, m) in seq.maps.iter().enumerate() {
        if m.matrix.rows() != seq.objects[i + 1].dim() || m.matrix.cols() != seq.objects[i].dim() {
            return Err(Error::input(format!("map {i} has mismatched dimensions")));
        }
    }
    let ranks: Vec<usize> = seq.maps.iter().map(|m| m.rank()).collect();
    let last = seq.objects.len() - 1;
    let mut positions = Vec::new();
    for i in 0..=last {
        let dim = seq.objects[i].dim();
        let image_dim = if i == 0 { 0 } else { ranks[i - 1] };
        let kernel_dim = if i == last { dim } else { dim - ranks[i] };
        let composite_zero = if i == 0 || i == last {
            true
        } else {
            seq.maps[i - 1]
                .then(&seq.maps[i])
                .map(|c| c.matrix.is_zero())
                .unwrap_or(false)
        };
        positions.push(PositionReport {
            position: i,
            dim,
            kernel_dim,
            image_dim,
            composite_zero,
            exact: composite_zero && kernel_dim == image_dim,
        });
    }
    let pass = positions.iter().all(|r| r.exact);
    Ok(ExactnessReport { positions, pass })
}

/// The Yoneda class in `Ext^n(A, B)` of an exact sequence
/// `0 → B → X_{n−1} → … → X_0 → A → 0`, computed against a resolution of A
/// by lifting the identity of A through the sequence. The lifted cocycle is
/// multiplied by `(−1)^{n(n−1)/2}`.
pub fn extension_class(seq: &ExactSequence, pa: &FreeResolution) -> Result<CohomologyClass> {
    let report = verify_exact(seq)?;
    if !report.pass {
        return Err(Error::domain(format!(
            "sequence is not exact at position {}",
            report.first_failure().unwrap_or(0)
        )));
    }
    let n = seq.degree();
    if !pa.module.same_action(seq.right_end()) {
        return Err(Error::input("resolution does not resolve the right end"));
    }
    if pa.len() < n {
        return Err(Error::input(format!(
            "resolution of length {} for an extension of degree {n}",
            pa.len()
        )));
    }
    let g = pa.group.clone();
    let nn = g.order();
    let p = g.p();
    // Phi_i : P_i -> objects[n - i]; the map into the next object is maps[n - i]
    let mut phi: Vec<Vec<u32>> = Vec::new();
    for i in 0..=n {
        let map = &seq.maps[n - i];
        let solver = Solver::new(&map.matrix);
        let targets: Vec<Vec<u32>> = if i == 0 {
            pa.augmentation.clone()
        } else {
            pa.boundary(i)
                .iter()
                .map(|img| {
                    let prev_obj = &seq.objects[n - i + 1];
                    let mut y = vec![0u32; prev_obj.dim()];
                    for (k, chunk) in img.chunks(nn).enumerate() {
                        for (h, &c) in chunk.iter().enumerate() {
                            if c != 0 {
                                axpy(&mut y, &prev_obj.action(h).apply(&phi[k]), c, p);
                            }
                        }
                    }
                    y
                })
                .collect()
        };
        let mut next = Vec::with_capacity(targets.len());
        for y in targets {
            next.push(
                solver
                    .solve(&y)
                    .ok_or_else(|| Error::internal(format!("lift through sequence failed at {i}")))?,
            );
        }
        phi = next;
    }
    let b = seq.left_end();
    let mut vector: Vec<u32> = phi.into_iter().flatten().collect();
    // sign (−1)^{n(n−1)/2} makes the class of 0→k→kC_p→kC_p→k→0 the Bockstein
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        vector.iter_mut().for_each(|x| *x = (p - *x) % p);
    }
    let hc = HomComplex::new(pa, b)?;
    Ok(CohomologyClass::canonical(n, b.clone(), vector, &hc))
}

// ---------------------------------------------------------------------------
// Cache

/// Resolutions keyed by module fingerprint, extended on demand.
pub struct ResolutionCache {
    ceiling: usize,
    entries: Mutex<HashMap<String, Arc<FreeResolution>>>,
}

impl Default for ResolutionCache {
    fn default() -> Self {
        Self::new(DEFAULT_RANK_CEILING)
    }
}

impl ResolutionCache {
    pub fn new(ceiling: usize) -> Self {
        ResolutionCache {
            ceiling,
            entries: Mutex::new(HashMap::new()),
        }
    }

    pub fn ceiling(&self) -> usize {
        self.ceiling
    }

    pub fn get(&self, m: &KGModule, maxdeg: usize) -> Result<Arc<FreeResolution>> {
        let key = m.fingerprint();
        let mut map = self.entries.lock().expect("cache lock");
        if let Some(r) = map.get(&key) {
            if r.len() >= maxdeg {
                return Ok(r.clone());
            }
            let extended = Arc::new(r.extended(maxdeg)?);
            map.insert(key, extended.clone());
            return Ok(extended);
        }
        let r = Arc::new(free_resolution(m, maxdeg, self.ceiling)?);
        map.insert(key, r.clone());
        Ok(r)
    }
}

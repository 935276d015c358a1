//! Cohomology of p-groups with F_p coefficients on minimal resolutions.
//!
//! Classes are stored as cochains on the generators of the minimal
//! resolution of k. For trivial coefficients every such cochain is a cocycle
//! and no coboundaries exist, so a class in degree n is just a vector of
//! length `b_n`. Products are Yoneda compositions: a class `u` of degree a is
//! lifted to a chain map `P_{a+•} → P_•` and `v` is composed with it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fpcore::{axpy, is_zero, neg_mod, Echelon, FpMatrix, Solver, Zp2Scalar};
use crate::groups::{frattini_quotient, FiniteGroup, FrattiniQuotient, GroupHom, QuotientGroup, Subgroup};
use crate::kgmod::KGModule;
use crate::resolve::{
    free_resolution, lift, ChainMap, FreeResolution, HomComplex, LiftSpec, ResolutionCache,
    DEFAULT_RANK_CEILING,
};

/// A cohomology class `[f] ∈ H^n(G, M)`, with `f` the images of the
/// generators of `P_n`, reduced modulo coboundaries.
#[derive(Clone, Debug)]
pub struct CohomologyClass {
    pub degree: usize,
    pub coefficients: KGModule,
    pub vector: Vec<u32>,
}

impl PartialEq for CohomologyClass {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.vector == other.vector
            && self.coefficients.same_action(&other.coefficients)
    }
}

impl CohomologyClass {
    pub fn canonical(degree: usize, coefficients: KGModule, mut vector: Vec<u32>, hc: &HomComplex<'_>) -> Self {
        hc.coboundaries(degree).reduce(&mut vector);
        CohomologyClass {
            degree,
            coefficients,
            vector,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.coefficients.group()
    }

    pub fn p(&self) -> u32 {
        self.coefficients.p()
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.vector)
    }

    pub fn add(&self, other: &CohomologyClass) -> Result<CohomologyClass> {
        if self.degree != other.degree || self.vector.len() != other.vector.len() {
            return Err(Error::input("adding classes of different degrees"));
        }
        let mut v = self.vector.clone();
        axpy(&mut v, &other.vector, 1, self.p());
        Ok(CohomologyClass {
            vector: v,
            ..self.clone()
        })
    }

    pub fn scaled(&self, c: u32) -> CohomologyClass {
        let p = self.p();
        CohomologyClass {
            vector: self.vector.iter().map(|&x| (x as u64 * c as u64 % p as u64) as u32).collect(),
            ..self.clone()
        }
    }
}

/// `dim H^n(G, M)` on a resolution of k (minimal for p-groups).
pub fn cohomology_dim(g: &Arc<FiniteGroup>, m: &KGModule, n: usize) -> Result<usize> {
    let res = free_resolution(&KGModule::trivial(g), n + 1, DEFAULT_RANK_CEILING)?;
    Ok(HomComplex::new(&res, m)?.cohomology_dim(n))
}

/// Same as [`cohomology_dim`] but sharing resolutions through a cache.
pub fn cohomology_dim_cached(
    cache: &ResolutionCache,
    g: &Arc<FiniteGroup>,
    m: &KGModule,
    n: usize,
) -> Result<usize> {
    let res = cache.get(&KGModule::trivial(g), n + 1)?;
    Ok(HomComplex::new(&res, m)?.cohomology_dim(n))
}

/// A canonical basis of `H^n(G, M)`.
pub fn cocycle_basis(g: &Arc<FiniteGroup>, m: &KGModule, n: usize) -> Result<Vec<CohomologyClass>> {
    let res = free_resolution(&KGModule::trivial(g), n + 1, DEFAULT_RANK_CEILING)?;
    let hc = HomComplex::new(&res, m)?;
    Ok(hc
        .cohomology_basis(n)
        .into_iter()
        .map(|v| CohomologyClass::canonical(n, m.clone(), v, &hc))
        .collect())
}

/// A bar cochain `G^n → k`, values at `g_1·|G|^{n-1} + … + g_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarCochain {
    pub degree: usize,
    pub values: Vec<u32>,
}

struct H1Data {
    frattini: FrattiniQuotient,
    from_class: Solver,
}

/// `H^*(G, k)` for a p-group through a fixed degree, with lift caches.
pub struct GroupCohomology {
    group: Arc<FiniteGroup>,
    k: KGModule,
    maxdeg: usize,
    res: Arc<FreeResolution>,
    lifts: Mutex<HashMap<(usize, Vec<u32>), Arc<ChainMap>>>,
    h1: OnceLock<Result<H1Data>>,
}

impl std::fmt::Debug for GroupCohomology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupCohomology({}, ≤{})", self.group.name(), self.maxdeg)
    }
}

impl GroupCohomology {
    pub fn new(group: &Arc<FiniteGroup>, maxdeg: usize) -> Result<Self> {
        Self::with_cache(&ResolutionCache::default(), group, maxdeg)
    }

    pub fn with_cache(cache: &ResolutionCache, group: &Arc<FiniteGroup>, maxdeg: usize) -> Result<Self> {
        if !group.is_p_group() {
            return Err(Error::domain(format!(
                "cohomology rings are computed for p-groups; {} is not",
                group.name()
            )));
        }
        let k = KGModule::trivial(group);
        let res = cache.get(&k, maxdeg + 1)?;
        Ok(GroupCohomology {
            group: group.clone(),
            k,
            maxdeg,
            res,
            lifts: Mutex::new(HashMap::new()),
            h1: OnceLock::new(),
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn p(&self) -> u32 {
        self.group.p()
    }

    pub fn maxdeg(&self) -> usize {
        self.maxdeg
    }

    pub fn resolution(&self) -> &Arc<FreeResolution> {
        &self.res
    }

    pub fn trivial_module(&self) -> &KGModule {
        &self.k
    }

    pub fn dim(&self, n: usize) -> usize {
        self.res.rank(n)
    }

    pub fn hilbert(&self) -> Vec<usize> {
        (0..=self.maxdeg).map(|n| self.dim(n)).collect()
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.maxdeg {
            return Err(Error::input(format!(
                "degree {n} beyond the computed range {}",
                self.maxdeg
            )));
        }
        Ok(())
    }

    pub fn class(&self, degree: usize, vector: Vec<u32>) -> Result<CohomologyClass> {
        self.check_degree(degree)?;
        if vector.len() != self.dim(degree) {
            return Err(Error::input("class vector has the wrong length"));
        }
        let p = self.p();
        Ok(CohomologyClass {
            degree,
            coefficients: self.k.clone(),
            vector: vector.into_iter().map(|x| x % p).collect(),
        })
    }

    pub fn zero(&self, degree: usize) -> Result<CohomologyClass> {
        self.class(degree, vec![0; self.dim(degree)])
    }

    pub fn unit(&self) -> CohomologyClass {
        self.class(0, vec![1]).expect("degree 0")
    }

    pub fn basis(&self, n: usize) -> Result<Vec<CohomologyClass>> {
        self.check_degree(n)?;
        Ok((0..self.dim(n))
            .map(|i| {
                let mut v = vec![0; self.dim(n)];
                v[i] = 1;
                self.class(n, v).expect("in range")
            })
            .collect())
    }

    fn own(&self, u: &CohomologyClass) -> Result<()> {
        if u.group().as_ref() != self.group.as_ref() || !u.coefficients.is_trivial_action() || u.coefficients.dim() != 1 {
            return Err(Error::input("class is not in H^*(G, k) of this group"));
        }
        self.check_degree(u.degree)?;
        if u.vector.len() != self.dim(u.degree) {
            return Err(Error::input("class vector has the wrong length"));
        }
        Ok(())
    }

    /// A chain map `P_{|u|+•} → P_•` lifting the cocycle `u`, through `depth`.
    pub fn lift_class(&self, u: &CohomologyClass, depth: usize) -> Result<Arc<ChainMap>> {
        self.own(u)?;
        if u.degree + depth > self.maxdeg + 1 {
            return Err(Error::input("lift deeper than the resolution"));
        }
        let key = (u.degree, u.vector.clone());
        if let Some(f) = self.lifts.lock().expect("lift cache").get(&key) {
            if f.depth() >= depth {
                return Ok(f.clone());
            }
        }
        // lift as deep as the resolution allows so later requests hit the cache
        let full = self.maxdeg - u.degree;
        let depth_used = full.max(depth);
        let start = u.vector.iter().map(|&x| vec![x]).collect();
        let hom: Vec<usize> = (0..self.group.order()).collect();
        let f = Arc::new(lift(
            LiftSpec {
                source: &self.res,
                target: &self.res,
                hom: &hom,
                shift: u.degree,
                start,
            },
            depth_used,
        )?);
        self.lifts.lock().expect("lift cache").insert(key, f.clone());
        Ok(f)
    }

    /// Matrix of `v ↦ u·v` from `H^b` to `H^{|u|+b}`.
    pub fn left_multiplication(&self, u: &CohomologyClass, b: usize) -> Result<FpMatrix> {
        self.check_degree(u.degree + b)?;
        let f = self.lift_class(u, b)?;
        let m = f.augmented(b, &self.res);
        if (u.degree * b) % 2 == 1 {
            Ok(m.scaled(self.p() - 1))
        } else {
            Ok(m)
        }
    }

    /// The product `u·v`, Yoneda composition with the Koszul sign
    /// `(−1)^{|u||v|}`.
    pub fn cup(&self, u: &CohomologyClass, v: &CohomologyClass) -> Result<CohomologyClass> {
        self.own(u)?;
        self.own(v)?;
        let n = u.degree + v.degree;
        self.check_degree(n)?;
        let m = self.left_multiplication(u, v.degree)?;
        self.class(n, m.apply(&v.vector))
    }

    pub fn product(&self, factors: &[CohomologyClass]) -> Result<CohomologyClass> {
        let mut acc = self.unit();
        for f in factors {
            acc = self.cup(&acc, f)?;
        }
        Ok(acc)
    }

    /// Cup with coefficients: `u ∈ H^a(G,k)` acting on `f ∈ H^b(G,M)`.
    pub fn act_on(&self, u: &CohomologyClass, f: &CohomologyClass) -> Result<CohomologyClass> {
        self.own(u)?;
        let m = &f.coefficients;
        let n = u.degree + f.degree;
        if n + 1 > self.res.len() {
            return Err(Error::input("product beyond the computed range"));
        }
        let lift = self.lift_class(u, f.degree)?;
        let hc = HomComplex::new(&self.res, m)?;
        let mut out = Vec::with_capacity(self.dim(n) * m.dim());
        for x in &lift.components[f.degree] {
            out.extend(hc.evaluate(&f.vector, x));
        }
        if (u.degree * f.degree) % 2 == 1 {
            let p = self.p();
            out.iter_mut().for_each(|x| *x = neg_mod(*x, p));
        }
        Ok(CohomologyClass::canonical(n, m.clone(), out, &hc))
    }

    fn h1(&self) -> Result<&H1Data> {
        self.h1
            .get_or_init(|| {
                let frattini = frattini_quotient(&self.group)?;
                let r = frattini.rank;
                let p = self.p();
                let mut cols = Vec::with_capacity(r);
                for i in 0..r {
                    let mut c = vec![0u32; r];
                    c[i] = 1;
                    let hom = frattini.hom(&c, p);
                    cols.push(self.transport_degree1(&hom.values));
                }
                let rows = self.dim(1);
                let mut to_class = FpMatrix::zeros(p, rows, r);
                for (j, col) in cols.iter().enumerate() {
                    for (i, &v) in col.iter().enumerate() {
                        to_class.set(i, j, v);
                    }
                }
                if to_class.rank() != r || rows != r {
                    return Err(Error::internal("H^1 does not match the Frattini quotient"));
                }
                let from_class = Solver::new(&to_class);
                Ok(H1Data {
                    frattini,
                    from_class,
                })
            })
            .as_ref()
            .map_err(|e| e.clone())
    }

    pub fn frattini(&self) -> Result<&FrattiniQuotient> {
        Ok(&self.h1()?.frattini)
    }

    /// The degree-1 class of a homomorphism `G → Z/p`.
    pub fn class_of_hom(&self, hom: &GroupHom) -> Result<CohomologyClass> {
        if hom.values.len() != self.group.order() || !hom.is_hom(&self.group) {
            return Err(Error::input("not a homomorphism to Z/p"));
        }
        self.class(1, self.transport_degree1(&hom.values))
    }

    /// The homomorphism `G → Z/p` represented by a degree-1 class.
    pub fn hom_of_class(&self, u: &CohomologyClass) -> Result<GroupHom> {
        self.own(u)?;
        if u.degree != 1 {
            return Err(Error::input("only degree-1 classes are homomorphisms"));
        }
        let h1 = self.h1()?;
        let c = h1
            .from_class
            .solve(&u.vector)
            .ok_or_else(|| Error::internal("degree-1 class outside the hom image"))?;
        Ok(h1.frattini.hom(&c, self.p()))
    }

    fn transport_degree1(&self, f: &[u32]) -> Vec<u32> {
        self.bar_transport(&BarCochain {
            degree: 1,
            values: f.to_vec(),
        })
    }

    /// Evaluates a bar cochain on the comparison map from the minimal
    /// resolution into the bar resolution. The comparison map is built from
    /// the contracting homotopy `s(g_0[g_1|…|g_n]) = [g_0|g_1|…|g_n]`.
    fn bar_transport(&self, c: &BarCochain) -> Vec<u32> {
        let n = c.degree;
        let g = &self.group;
        let order = g.order();
        let p = self.p();
        // Phi_0(e_0) = [], stored as (g0, tuple) -> coefficient
        type Chain = HashMap<Vec<usize>, u32>;
        let mut phi: Vec<Chain> = vec![HashMap::from([(vec![0usize], 1u32)])];
        for deg in 1..=n {
            let mut next = Vec::with_capacity(self.res.rank(deg));
            for img in self.res.boundary(deg) {
                let mut acc: Chain = HashMap::new();
                for (i, chunk) in img.chunks(order).enumerate() {
                    for (h, &coef) in chunk.iter().enumerate() {
                        if coef == 0 {
                            continue;
                        }
                        for (key, &v) in &phi[i] {
                            // h · g0[...] = (h g0)[...], then s prepends g0
                            let mut k2 = Vec::with_capacity(key.len() + 1);
                            k2.push(0);
                            k2.push(g.mul(h, key[0]));
                            k2.extend_from_slice(&key[1..]);
                            let e = acc.entry(k2).or_insert(0);
                            *e = (*e + (coef as u64 * v as u64 % p as u64) as u32) % p;
                        }
                    }
                }
                acc.retain(|_, v| *v != 0);
                next.push(acc);
            }
            phi = next;
        }
        phi.iter()
            .map(|chain| {
                let mut total = 0u64;
                for (key, &v) in chain {
                    let mut idx = 0usize;
                    for &x in &key[1..] {
                        idx = idx * order + x;
                    }
                    total += v as u64 * c.values[idx] as u64;
                }
                (total % p as u64) as u32
            })
            .collect()
    }

    /// Transports a bar cocycle of degree ≤ 2 to the minimal resolution.
    pub fn bar_to_minimal(&self, c: &BarCochain) -> Result<CohomologyClass> {
        if c.degree > 2 {
            return Err(Error::cap("bar transport is implemented through degree 2"));
        }
        self.check_degree(c.degree)?;
        if c.values.len() != self.group.order().pow(c.degree as u32) {
            return Err(Error::input("bar cochain has the wrong size"));
        }
        self.class(c.degree, self.bar_transport(c))
    }

    /// The Bockstein of a degree-1 class: the defect cocycle
    /// `(z̃(g) + z̃(h) − z̃(gh))/p` of a lift of `z` to Z/p².
    pub fn bockstein_h1(&self, z: &CohomologyClass) -> Result<CohomologyClass> {
        self.own(z)?;
        if z.degree != 1 {
            return Err(Error::input("the Bockstein is implemented on degree 1"));
        }
        self.check_degree(2)?;
        let hom = self.hom_of_class(z)?;
        self.bar_to_minimal(&bockstein_cocycle(&self.group, &hom))
    }

    /// Restriction to a subgroup, as matrices `H^n(G) → H^n(H)`.
    pub fn restriction(&self, h: &Subgroup) -> Result<ClassMap> {
        if h.parent().as_ref() != self.group.as_ref() {
            return Err(Error::input("subgroup of a different group"));
        }
        let target = Arc::new(GroupCohomology::new(&h.as_group(), self.maxdeg)?);
        let hom = h.members().to_vec();
        let f = lift(
            LiftSpec {
                source: &target.res,
                target: &self.res,
                hom: &hom,
                shift: 0,
                start: target.res.augmentation().to_vec(),
            },
            self.maxdeg,
        )?;
        let matrices = (0..=self.maxdeg)
            .map(|n| f.augmented(n, &self.res))
            .collect();
        Ok(ClassMap {
            source_order: self.group.order(),
            target,
            matrices,
        })
    }

    /// Inflation from a quotient, as matrices `H^n(G/N) → H^n(G)`.
    pub fn inflation(&self, q: &QuotientGroup) -> Result<(Arc<GroupCohomology>, ClassMap)> {
        if q.projection.len() != self.group.order() {
            return Err(Error::input("quotient of a different group"));
        }
        let src = Arc::new(GroupCohomology::new(&q.quotient, self.maxdeg)?);
        let f = lift(
            LiftSpec {
                source: &self.res,
                target: &src.res,
                hom: &q.projection,
                shift: 0,
                start: self.res.augmentation().to_vec(),
            },
            self.maxdeg,
        )?;
        let matrices = (0..=self.maxdeg)
            .map(|n| f.augmented(n, &src.res))
            .collect();
        Ok((
            src.clone(),
            ClassMap {
                source_order: q.quotient.order(),
                target: Arc::new(self.shallow_clone()),
                matrices,
            },
        ))
    }

    fn shallow_clone(&self) -> GroupCohomology {
        GroupCohomology {
            group: self.group.clone(),
            k: self.k.clone(),
            maxdeg: self.maxdeg,
            res: self.res.clone(),
            lifts: Mutex::new(HashMap::new()),
            h1: OnceLock::new(),
        }
    }
}

/// The defect 2-cocycle of a homomorphism to Z/p.
pub fn bockstein_cocycle(g: &FiniteGroup, hom: &GroupHom) -> BarCochain {
    let n = g.order();
    let p = g.p();
    let mut values = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            let s = Zp2Scalar::lift(hom.values[a], p) + Zp2Scalar::lift(hom.values[b], p)
                - Zp2Scalar::lift(hom.values[g.mul(a, b)], p);
            values[a * n + b] = s.div_p().expect("hom values are additive mod p");
        }
    }
    BarCochain { degree: 2, values }
}

/// A degreewise linear map of cohomology groups (restriction or inflation).
/// `matrices[n]` maps degree-n vectors of the source to the target.
pub struct ClassMap {
    source_order: usize,
    pub target: Arc<GroupCohomology>,
    pub matrices: Vec<FpMatrix>,
}

impl ClassMap {
    pub fn apply(&self, u: &CohomologyClass) -> Result<CohomologyClass> {
        if u.group().order() != self.source_order {
            return Err(Error::input("class over the wrong group"));
        }
        let m = self
            .matrices
            .get(u.degree)
            .ok_or_else(|| Error::input("degree beyond the computed range"))?;
        if m.cols() != u.vector.len() {
            return Err(Error::input("class vector has the wrong length"));
        }
        self.target.class(u.degree, m.apply(&u.vector))
    }
}

/// `res^G_H(u)`.
pub fn restrict_class(ctx: &GroupCohomology, u: &CohomologyClass, h: &Subgroup) -> Result<CohomologyClass> {
    ctx.restriction(h)?.apply(u)
}

/// `inf^G_{G/N}(u)`.
pub fn inflate_class(ctx: &GroupCohomology, u: &CohomologyClass, q: &QuotientGroup) -> Result<CohomologyClass> {
    ctx.inflation(q)?.1.apply(u)
}

// ---------------------------------------------------------------------------
// Ring presentations

#[derive(Clone, Debug, Serialize)]
pub struct RingGenerator {
    pub degree: usize,
    /// Position of the generator in the standard basis of its degree.
    pub index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductTable {
    /// Index into `generators`.
    pub generator: usize,
    /// Degree of the right factor.
    pub degree: usize,
    /// Left multiplication `H^degree → H^{degree + deg(generator)}`.
    pub matrix: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RingPresentation {
    pub group: String,
    pub p: u32,
    pub maxdeg: usize,
    pub hilbert: Vec<usize>,
    pub generators: Vec<RingGenerator>,
    pub products: Vec<ProductTable>,
}

impl RingPresentation {
    pub fn generator_degrees(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn generator_class(&self, ctx: &GroupCohomology, i: usize) -> Result<CohomologyClass> {
        let g = &self.generators[i];
        let mut v = vec![0; ctx.dim(g.degree)];
        v[g.index] = 1;
        ctx.class(g.degree, v)
    }
}

/// Span of products `g·H^{n−deg g}` over the given classes.
pub fn decomposable_span(
    ctx: &GroupCohomology,
    gens: &[CohomologyClass],
    n: usize,
) -> Result<Echelon> {
    let mut span = Echelon::new(ctx.p(), ctx.dim(n));
    for g in gens {
        if g.degree == 0 || g.degree > n {
            continue;
        }
        let m = ctx.left_multiplication(g, n - g.degree)?;
        let t = m.transpose();
        for r in 0..t.rows() {
            span.insert(t.row(r).to_vec());
        }
    }
    Ok(span)
}

pub fn ring_presentation(ctx: &GroupCohomology) -> Result<RingPresentation> {
    let mut gens: Vec<CohomologyClass> = Vec::new();
    let mut records = Vec::new();
    for n in 1..=ctx.maxdeg() {
        let mut span = decomposable_span(ctx, &gens, n)?;
        for (i, e) in ctx.basis(n)?.into_iter().enumerate() {
            if span.insert(e.vector.clone()) {
                records.push(RingGenerator { degree: n, index: i });
                gens.push(e);
            }
        }
    }
    let mut products = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        for b in 0..=ctx.maxdeg() - g.degree {
            let m = ctx.left_multiplication(g, b)?;
            products.push(ProductTable {
                generator: gi,
                degree: b,
                matrix: m.to_rows(),
            });
        }
    }
    Ok(RingPresentation {
        group: ctx.group().name().to_string(),
        p: ctx.p(),
        maxdeg: ctx.maxdeg(),
        hilbert: ctx.hilbert(),
        generators: records,
        products,
    })
}

// ---------------------------------------------------------------------------
// Polynomial part of an elementary abelian group

pub struct PolSubalgebra {
    pub generators: Vec<CohomologyClass>,
    /// Degreewise span of the subalgebra inside `H^n(E)`.
    pub spans: Vec<Echelon>,
}

impl PolSubalgebra {
    pub fn hilbert(&self) -> Vec<usize> {
        self.spans.iter().map(|s| s.rank()).collect()
    }

    pub fn contains(&self, u: &CohomologyClass) -> bool {
        self.spans
            .get(u.degree)
            .map(|s| s.contains(&u.vector))
            .unwrap_or(false)
    }

    /// Hilbert function of a polynomial ring on `r` degree-2 generators.
    pub fn expected_hilbert(r: usize, maxdeg: usize) -> Vec<usize> {
        (0..=maxdeg)
            .map(|n| {
                if n % 2 == 1 {
                    0
                } else {
                    binomial(r + n / 2 - 1, n / 2).max(if r == 0 && n == 0 { 1 } else { 0 })
                }
            })
            .collect()
    }

    pub fn is_polynomial(&self) -> bool {
        self.hilbert() == Self::expected_hilbert(self.generators.len(), self.spans.len() - 1)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Bocksteins of the degree-1 basis and the degreewise span they generate.
pub fn pol_subalgebra(ctx: &GroupCohomology) -> Result<PolSubalgebra> {
    if !ctx.group().is_elementary_abelian() {
        return Err(Error::domain(format!(
            "{} is not elementary abelian",
            ctx.group().name()
        )));
    }
    let generators: Vec<CohomologyClass> = ctx
        .basis(1)?
        .iter()
        .map(|z| ctx.bockstein_h1(z))
        .collect::<Result<_>>()?;
    let p = ctx.p();
    let mut spans: Vec<Echelon> = Vec::new();
    for n in 0..=ctx.maxdeg() {
        let mut span = Echelon::new(p, ctx.dim(n));
        if n == 0 {
            span.insert(vec![1]);
        } else if n >= 2 {
            let prev: Vec<Vec<u32>> = spans[n - 2].rows().to_vec();
            for g in &generators {
                let m = ctx.left_multiplication(g, n - 2)?;
                for v in &prev {
                    span.insert(m.apply(v));
                }
            }
        }
        spans.push(span);
    }
    Ok(PolSubalgebra { generators, spans })
}

/// Degrees of new module generators of `H^*(G)` over the subalgebra
/// generated by `s`, degree by degree through `ctx.maxdeg()`.
pub fn module_generator_degrees(ctx: &GroupCohomology, s: &[CohomologyClass]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for n in 0..=ctx.maxdeg() {
        let span = decomposable_span(ctx, s, n)?;
        for _ in span.rank()..ctx.dim(n) {
            out.push(n);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Bar complex oracle

/// Cap on the dimension of the normalized bar cochains in the degree asked.
pub const BAR_COCHAIN_CAP: usize = 20_000;

/// `dim H^n(G, F_p)` from the normalized bar complex.
pub fn bar_cohomology_dim(g: &FiniteGroup, n: usize) -> Result<usize> {
    let m = g.order() - 1;
    let dim_n = m.pow(n as u32);
    if dim_n > BAR_COCHAIN_CAP || m.saturating_pow(n as u32 + 1) > 10 * BAR_COCHAIN_CAP {
        return Err(Error::cap(format!(
            "bar complex of {} in degree {n} exceeds the oracle cap",
            g.name()
        )));
    }
    if n == 0 {
        return Ok(1);
    }
    let r_n = bar_coboundary_rank(g, n);
    let r_prev = bar_coboundary_rank(g, n - 1);
    Ok(dim_n - r_n - r_prev)
}

/// Rank of `δ: C^n → C^{n+1}` on normalized cochains.
fn bar_coboundary_rank(g: &FiniteGroup, n: usize) -> usize {
    let m = g.order() - 1;
    if n == 0 {
        // trivial coefficients: δ on constants vanishes
        return 0;
    }
    let cols = m.pow(n as u32);
    let p = g.p();
    let index = |t: &[usize]| t.iter().fold(0usize, |acc, &x| acc * m + (x - 1));
    let mut acc = RankAccumulator::new(p, cols);
    let rows = m.pow(n as u32 + 1);
    let mut t = vec![1usize; n + 1];
    let mut sparse: Vec<(usize, u32)> = Vec::with_capacity(n + 2);
    for r in 0..rows {
        let mut rest = r;
        for i in (0..=n).rev() {
            t[i] = rest % m + 1;
            rest /= m;
        }
        sparse.clear();
        sparse.push((index(&t[1..]), 1));
        for i in 0..n {
            let prod = g.mul(t[i], t[i + 1]);
            if prod == 0 {
                continue;
            }
            let mut face = Vec::with_capacity(n);
            face.extend_from_slice(&t[..i]);
            face.push(prod);
            face.extend_from_slice(&t[i + 2..]);
            let sign = if (i + 1) % 2 == 1 { p - 1 } else { 1 };
            sparse.push((index(&face), sign));
        }
        let sign = if (n + 1) % 2 == 1 { p - 1 } else { 1 };
        sparse.push((index(&t[..n]), sign));
        acc.insert_sparse(&sparse);
        if acc.rank() == cols {
            break;
        }
    }
    acc.rank()
}

/// Incremental rank over F_p, bit-packed when p = 2.
enum RankAccumulator {
    Bits {
        words: usize,
        pivots: Vec<Option<Vec<u64>>>,
        rank: usize,
    },
    Dense {
        p: u32,
        pivots: Vec<Option<Vec<u32>>>,
        rank: usize,
    },
}

impl RankAccumulator {
    fn new(p: u32, len: usize) -> Self {
        if p == 2 {
            RankAccumulator::Bits {
                words: len.div_ceil(64),
                pivots: vec![None; len],
                rank: 0,
            }
        } else {
            RankAccumulator::Dense {
                p,
                pivots: vec![None; len],
                rank: 0,
            }
        }
    }

    fn rank(&self) -> usize {
        match self {
            RankAccumulator::Bits { rank, .. } | RankAccumulator::Dense { rank, .. } => *rank,
        }
    }

    fn insert_sparse(&mut self, entries: &[(usize, u32)]) {
        match self {
            RankAccumulator::Bits { words, pivots, rank } => {
                let mut v = vec![0u64; *words];
                for &(i, c) in entries {
                    if c % 2 == 1 {
                        v[i / 64] ^= 1 << (i % 64);
                    }
                }
                let mut w = 0;
                while w < v.len() {
                    if v[w] == 0 {
                        w += 1;
                        continue;
                    }
                    let lead = w * 64 + v[w].trailing_zeros() as usize;
                    match &pivots[lead] {
                        Some(row) => {
                            for (a, b) in v[w..].iter_mut().zip(&row[w..]) {
                                *a ^= b;
                            }
                        }
                        None => {
                            pivots[lead] = Some(v);
                            *rank += 1;
                            return;
                        }
                    }
                }
            }
            RankAccumulator::Dense { p, pivots, rank } => {
                let p = *p;
                let mut v = vec![0u32; pivots.len()];
                for &(i, c) in entries {
                    v[i] = (v[i] + c) % p;
                }
                let mut start = 0;
                while let Some(off) = v[start..].iter().position(|&x| x != 0) {
                    let lead = start + off;
                    match &pivots[lead] {
                        Some(row) => {
                            let f = neg_mod(v[lead], p);
                            axpy(&mut v[lead..], &row[lead..], f, p);
                            start = lead + 1;
                        }
                        None => {
                            let inv = crate::fpcore::inv_mod(v[lead], p);
                            crate::fpcore::scale(&mut v, inv, p);
                            pivots[lead] = Some(v);
                            *rank += 1;
                            return;
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog_group, center, elementary_abelian_subgroups, index_p_subgroups, quotient};

    fn ctx(name: &str, d: usize) -> GroupCohomology {
        GroupCohomology::new(&catalog_group(name).unwrap(), d).unwrap()
    }

    #[test]
    fn bar_oracle_small_values() {
        let z2 = catalog_group("Z2").unwrap();
        let dims: Vec<usize> = (0..5).map(|n| bar_cohomology_dim(&z2, n).unwrap()).collect();
        assert_eq!(dims, vec![1, 1, 1, 1, 1]);
        let v4 = catalog_group("V4").unwrap();
        assert_eq!(bar_cohomology_dim(&v4, 1).unwrap(), 2);
        assert_eq!(bar_cohomology_dim(&v4, 2).unwrap(), 3);
        let z3 = catalog_group("Z3").unwrap();
        let dims: Vec<usize> = (0..5).map(|n| bar_cohomology_dim(&z3, n).unwrap()).collect();
        assert_eq!(dims, vec![1, 1, 1, 1, 1]);
        let d16 = catalog_group("D16").unwrap();
        assert!(matches!(bar_cohomology_dim(&d16, 4), Err(Error::Cap(_))));
    }

    #[test]
    fn q8_dimensions() {
        let q8 = catalog_group("Q8").unwrap();
        let k = KGModule::trivial(&q8);
        let dims: Vec<usize> = (0..8).map(|n| cohomology_dim(&q8, &k, n).unwrap()).collect();
        assert_eq!(dims, vec![1, 2, 2, 1, 1, 2, 2, 1]);
        let reg = KGModule::regular(&q8);
        assert_eq!(cohomology_dim(&q8, &reg, 0).unwrap(), 1);
        for n in 1..4 {
            assert_eq!(cohomology_dim(&q8, &reg, n).unwrap(), 0);
        }
    }

    #[test]
    fn cocycle_basis_is_deterministic() {
        let d8 = catalog_group("D8").unwrap();
        let k = KGModule::trivial(&d8);
        let a = cocycle_basis(&d8, &k, 1).unwrap();
        let b = cocycle_basis(&d8, &k, 1).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a, b);
        let z2 = catalog_group("Z2").unwrap();
        assert_eq!(cocycle_basis(&z2, &KGModule::trivial(&z2), 5).unwrap().len(), 1);
    }

    #[test]
    fn unit_and_squares() {
        let c = ctx("Z2", 6);
        let z = c.basis(1).unwrap().remove(0);
        assert_eq!(c.cup(&c.unit(), &z).unwrap(), z);
        let z2 = c.cup(&z, &z).unwrap();
        assert!(!z2.is_zero());
        assert_eq!(c.bockstein_h1(&z).unwrap(), z2);
    }

    #[test]
    fn d8_has_xy_zero() {
        let c = ctx("D8", 4);
        let subs = index_p_subgroups(c.group()).unwrap();
        let classes: Vec<CohomologyClass> = subs
            .iter()
            .map(|(_, h)| c.class_of_hom(h).unwrap())
            .collect();
        // exactly one pair of distinct nonzero classes multiplies to zero
        let mut zero_pairs = Vec::new();
        for i in 0..3 {
            for j in i + 1..3 {
                if c.cup(&classes[i], &classes[j]).unwrap().is_zero() {
                    zero_pairs.push((i, j));
                }
            }
        }
        assert_eq!(zero_pairs.len(), 1);
        let (i, j) = zero_pairs[0];
        // both kernels are Klein fours
        for k in [i, j] {
            assert!(subs[k].0.as_group().is_elementary_abelian());
        }
        for z in &classes {
            assert!(!c.cup(z, z).unwrap().is_zero());
        }
    }

    #[test]
    fn bockstein_on_z4_and_z3() {
        let c = ctx("Z4", 3);
        let z = c.basis(1).unwrap().remove(0);
        assert!(c.bockstein_h1(&z).unwrap().is_zero());
        assert!(c.bockstein_h1(&c.zero(1).unwrap()).unwrap().is_zero());
        let c3 = ctx("Z3", 3);
        let z = c3.basis(1).unwrap().remove(0);
        assert!(!c3.bockstein_h1(&z).unwrap().is_zero());
        assert!(c3.cup(&z, &z).unwrap().is_zero());
    }

    #[test]
    fn hom_class_round_trip() {
        let c = ctx("Z2xZ4", 2);
        for z in c.basis(1).unwrap() {
            let h = c.hom_of_class(&z).unwrap();
            assert!(h.is_hom(c.group()));
            assert_eq!(c.class_of_hom(&h).unwrap(), z);
        }
    }

    #[test]
    fn bar_transport_of_coboundary_vanishes() {
        let c = ctx("D8", 2);
        let g = c.group().clone();
        let n = g.order();
        // δf for f(g) = [g is the first generator]
        let s = g.generators()[0];
        let f = |x: usize| u32::from(x == s);
        let values = (0..n * n)
            .map(|i| {
                let (a, b) = (i / n, i % n);
                (f(a) + f(b) + 2 - f(g.mul(a, b))) % 2
            })
            .collect();
        let cls = c.bar_to_minimal(&BarCochain { degree: 2, values }).unwrap();
        assert!(cls.is_zero());
        let zero = c.bar_to_minimal(&BarCochain { degree: 2, values: vec![0; n * n] }).unwrap();
        assert!(zero.is_zero());
        assert!(c.bar_to_minimal(&BarCochain { degree: 3, values: vec![] }).is_err());
    }

    #[test]
    fn restriction_examples() {
        let c = ctx("D8", 4);
        let g = c.group().clone();
        let whole = Subgroup::whole(g.clone());
        let r = c.restriction(&whole).unwrap();
        for n in 0..=4 {
            for u in c.basis(n).unwrap() {
                assert_eq!(r.apply(&u).unwrap().vector, u.vector);
            }
        }
        for e in elementary_abelian_subgroups(&g, true).unwrap() {
            let r = c.restriction(&e).unwrap();
            for (sub, hom) in index_p_subgroups(&g).unwrap() {
                let x = c.class_of_hom(&hom).unwrap();
                let rx = r.apply(&x).unwrap();
                let contained = e.members().iter().all(|&m| sub.contains(m));
                assert_eq!(rx.is_zero(), contained);
                if !contained {
                    let composite = GroupHom {
                        values: e.members().iter().map(|&m| hom.values[m]).collect(),
                    };
                    assert_eq!(r.target.class_of_hom(&composite).unwrap(), rx);
                }
            }
        }
    }

    #[test]
    fn inflation_from_central_quotient() {
        let c = ctx("D8", 3);
        let g = c.group().clone();
        let q = quotient(&g, &center(&g)).unwrap();
        let (qc, inf) = c.inflation(&q).unwrap();
        assert_eq!(inf.apply(&qc.unit()).unwrap(), c.unit());
        assert_eq!(inf.matrices[1].rank(), 2);
        for z in qc.basis(1).unwrap() {
            let h = qc.hom_of_class(&z).unwrap();
            let pulled = GroupHom {
                values: q.projection.iter().map(|&x| h.values[x]).collect(),
            };
            assert_eq!(inf.apply(&z).unwrap(), c.class_of_hom(&pulled).unwrap());
        }
    }

    #[test]
    fn presentations() {
        let p = ring_presentation(&ctx("Z2", 6)).unwrap();
        assert_eq!(p.generator_degrees(), vec![1]);
        let p = ring_presentation(&ctx("D8", 10)).unwrap();
        assert_eq!(p.generator_degrees(), vec![1, 1, 2]);
        assert_eq!(p.hilbert, (1..=11).collect::<Vec<_>>());
        let p = ring_presentation(&ctx("Q8", 10)).unwrap();
        assert_eq!(p.generator_degrees(), vec![1, 1, 4]);
        assert_eq!(p.hilbert, vec![1, 2, 2, 1, 1, 2, 2, 1, 1, 2, 2]);
    }

    #[test]
    fn polynomial_part() {
        let c = ctx("V4", 8);
        let pol = pol_subalgebra(&c).unwrap();
        assert!(pol.is_polynomial());
        for (z, b) in c.basis(1).unwrap().iter().zip(&pol.generators) {
            assert_eq!(&c.cup(z, z).unwrap(), b);
        }
        let c = ctx("Z3", 8);
        let pol = pol_subalgebra(&c).unwrap();
        assert_eq!(pol.hilbert(), vec![1, 0, 1, 0, 1, 0, 1, 0, 1]);
        assert!(pol_subalgebra(&ctx("Z4", 4)).is_err());
    }

    #[test]
    fn eckmann_shapiro_small() {
        let g = catalog_group("D8").unwrap();
        for e in elementary_abelian_subgroups(&g, true).unwrap() {
            let ind = KGModule::trivial(&e.as_group()).induce(&e).unwrap();
            for n in 0..5 {
                assert_eq!(
                    cohomology_dim(&g, &ind, n).unwrap(),
                    cohomology_dim(&e.as_group(), &KGModule::trivial(&e.as_group()), n).unwrap()
                );
            }
        }
    }

    #[test]
    fn restriction_to_trivial_subgroup() {
        let g = catalog_group("Z2").unwrap();
        let ctx = GroupCohomology::new(&g, 4).unwrap();
        let res = ctx.restriction(&Subgroup::trivial(g.clone())).unwrap();
        for n in 1..=4 {
            let u = ctx.class(n, vec![1]).unwrap();
            assert!(res.apply(&u).unwrap().is_zero());
        }
        assert_eq!(res.apply(&ctx.unit()).unwrap().vector, vec![1]);
    }
}

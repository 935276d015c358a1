//! Truncated finite-generation reports: the even subalgebra S, module
//! generators of `H^*(E)` over `res(S)` for maximal elementary abelian E,
//! and module generators of `H^*(G, M)` over S.
//!
//! Every verdict is a certificate through degree D only.

use rayon::prelude::*;
use serde::Serialize;

use crate::cohom::{decomposable_span, CohomologyClass, GroupCohomology};
use crate::error::{Error, Result};
use crate::fpcore::Echelon;
use crate::groups::{elementary_abelian_subgroups, FiniteGroup, Subgroup};
use crate::kgmod::KGModule;
use crate::resolve::HomComplex;

/// Smallest truncation degree at which a verdict is attempted.
pub const MIN_MAXDEG: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassRecord {
    pub degree: usize,
    pub vector: Vec<u32>,
}

impl From<&CohomologyClass> for ClassRecord {
    fn from(c: &CohomologyClass) -> Self {
        ClassRecord {
            degree: c.degree,
            vector: c.vector.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementaryReport {
    /// Members of E as element ids of G.
    pub subgroup: Vec<usize>,
    pub rank: usize,
    pub restricted_generators: Vec<ClassRecord>,
    /// One entry per module generator of `H^*(E)_{≤D}` over `res(S)`.
    pub generator_degrees: Vec<usize>,
    pub max_generator_degree: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteGenerationReport {
    pub group: String,
    pub maxdeg: usize,
    pub certified_through: usize,
    pub s_generators: Vec<ClassRecord>,
    pub d_stab: usize,
    pub per_e: Vec<ElementaryReport>,
    pub inconclusive: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleFGReport {
    pub group: String,
    pub module_dim: usize,
    pub module_fingerprint: String,
    pub maxdeg: usize,
    pub hilbert: Vec<usize>,
    pub generator_degrees: Vec<usize>,
    pub stabilization_degree: usize,
    pub inconclusive: bool,
}

/// Generators of the even-degree subalgebra `H^even(G)_{≤D}`, chosen degree
/// by degree from the standard bases.
pub fn choose_s(ctx: &GroupCohomology) -> Result<Vec<CohomologyClass>> {
    if ctx.maxdeg() < MIN_MAXDEG {
        return Err(Error::domain(format!("maxdeg must be at least {MIN_MAXDEG}")));
    }
    let mut gens: Vec<CohomologyClass> = Vec::new();
    for n in (2..=ctx.maxdeg()).step_by(2) {
        let mut span = decomposable_span(ctx, &gens, n)?;
        for e in ctx.basis(n)? {
            if span.insert(e.vector.clone()) {
                gens.push(e);
            }
        }
    }
    Ok(gens)
}

fn max_degree(s: &[CohomologyClass]) -> usize {
    s.iter().map(|c| c.degree).max().unwrap_or(0)
}

fn new_generators(dims: &[usize], spans: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for (n, (&d, &r)) in dims.iter().zip(spans).enumerate() {
        out.extend(std::iter::repeat_n(n, d - r));
    }
    out
}

/// Through degree D, `H^*(E)` is generated over `res(S)` in
/// degrees at most `d_stab = D − max deg S`, for every maximal E.
pub fn lemma1_check(ctx: &GroupCohomology) -> Result<FiniteGenerationReport> {
    let g = ctx.group();
    let d = ctx.maxdeg();
    if d < MIN_MAXDEG {
        return Ok(FiniteGenerationReport {
            group: g.name().to_string(),
            maxdeg: d,
            certified_through: d,
            s_generators: Vec::new(),
            d_stab: 0,
            per_e: Vec::new(),
            inconclusive: true,
            pass: false,
        });
    }
    let s = choose_s(ctx)?;
    let d_stab = d.saturating_sub(max_degree(&s));
    let maximal = elementary_abelian_subgroups(g, true)?;
    let per_e: Vec<ElementaryReport> = maximal
        .par_iter()
        .map(|e| {
            let res = ctx.restriction(e)?;
            let images: Vec<CohomologyClass> = s.iter().map(|u| res.apply(u)).collect::<Result<_>>()?;
            let target = &res.target;
            let mut dims = Vec::with_capacity(d + 1);
            let mut spans = Vec::with_capacity(d + 1);
            for n in 0..=d {
                dims.push(target.dim(n));
                spans.push(decomposable_span(target, &images, n)?.rank());
            }
            let degrees = new_generators(&dims, &spans);
            let top = degrees.iter().copied().max().unwrap_or(0);
            Ok(ElementaryReport {
                subgroup: e.members().to_vec(),
                rank: elementary_rank(e.order(), g),
                restricted_generators: images.iter().map(ClassRecord::from).collect(),
                generator_degrees: degrees,
                max_generator_degree: top,
                pass: top <= d_stab,
            })
        })
        .collect::<Result<_>>()?;
    let pass = per_e.iter().all(|r| r.pass);
    Ok(FiniteGenerationReport {
        group: g.name().to_string(),
        maxdeg: d,
        certified_through: d,
        s_generators: s.iter().map(ClassRecord::from).collect(),
        d_stab,
        per_e,
        inconclusive: false,
        pass,
    })
}

fn elementary_rank(order: usize, g: &FiniteGroup) -> usize {
    let p = g.p() as usize;
    let mut r = 0;
    let mut n = order;
    while n > 1 {
        n /= p;
        r += 1;
    }
    r
}

/// Module generators of `H^*(G, M)_{≤D}` over S, with S acting by
/// Yoneda composition.
pub fn module_generators(ctx: &GroupCohomology, m: &KGModule) -> Result<ModuleFGReport> {
    let g = ctx.group();
    if m.group().as_ref() != g.as_ref() {
        return Err(Error::input("module over a different group"));
    }
    let d = ctx.maxdeg();
    let s = if d >= MIN_MAXDEG { choose_s(ctx)? } else { Vec::new() };
    let hc = HomComplex::new(ctx.resolution(), m)?;
    let basis: Vec<Vec<CohomologyClass>> = (0..=d)
        .map(|n| {
            hc.cohomology_basis(n)
                .into_iter()
                .map(|v| CohomologyClass::canonical(n, m.clone(), v, &hc))
                .collect()
        })
        .collect();
    let mut dims = Vec::with_capacity(d + 1);
    let mut spans = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let mut span = Echelon::new(ctx.p(), hc.cochain_dim(n));
        for u in s.iter().filter(|u| u.degree <= n) {
            for f in &basis[n - u.degree] {
                span.insert(ctx.act_on(u, f)?.vector);
            }
        }
        dims.push(basis[n].len());
        spans.push(span.rank());
    }
    let degrees = new_generators(&dims, &spans);
    let stab = degrees.iter().copied().max().unwrap_or(0);
    let window = d.saturating_sub(max_degree(&s));
    Ok(ModuleFGReport {
        group: g.name().to_string(),
        module_dim: m.dim(),
        module_fingerprint: m.fingerprint(),
        maxdeg: d,
        hilbert: dims,
        generator_degrees: degrees,
        stabilization_degree: stab,
        inconclusive: d < MIN_MAXDEG || stab > window,
    })
}

/// `module_generators` for `Ind_E^G k` next to the count over `res(S)` for E;
/// equal lists by Eckmann–Shapiro.
pub fn shapiro_generator_counts(
    ctx: &GroupCohomology,
    e: &Subgroup,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let ind = KGModule::trivial(&e.as_group()).induce(e)?;
    let via_module = module_generators(ctx, &ind)?.generator_degrees;
    let s = choose_s(ctx)?;
    let res = ctx.restriction(e)?;
    let images: Vec<CohomologyClass> = s.iter().map(|u| res.apply(u)).collect::<Result<_>>()?;
    let mut dims = Vec::new();
    let mut spans = Vec::new();
    for n in 0..=ctx.maxdeg() {
        dims.push(res.target.dim(n));
        spans.push(decomposable_span(&res.target, &images, n)?.rank());
    }
    Ok((via_module, new_generators(&dims, &spans)))
}

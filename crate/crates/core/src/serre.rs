//! Serre witnesses: tuples of degree-1 classes whose Bockstein product
//! vanishes, and the exact sequences of permutation modules they define.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohom::{CohomologyClass, GroupCohomology};
use crate::error::{Error, Result};
use crate::fpcore::FpMatrix;
use crate::groups::{projective_points, FiniteGroup, GroupHom, Subgroup};
use crate::kgmod::{KGModule, ModuleMap};
use crate::resolve::{extension_class, verify_exact, ExactSequence, ExactnessReport};

pub const DEFAULT_MAX_M: usize = 4;

#[derive(Clone, Debug)]
pub struct SerreWitness {
    pub group: Arc<FiniteGroup>,
    pub homs: Vec<GroupHom>,
    pub kernels: Vec<Subgroup>,
    pub product_checked: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub group: String,
    pub m: usize,
    /// Values on the group's generators.
    pub homs: Vec<Vec<u32>>,
    pub kernels: Vec<Vec<usize>>,
    pub verified: bool,
}

impl SerreWitness {
    pub fn m(&self) -> usize {
        self.homs.len()
    }

    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            group: self.group.name().to_string(),
            m: self.m(),
            homs: self.homs.iter().map(|h| h.on_generators(&self.group)).collect(),
            kernels: self.kernels.iter().map(|k| k.members().to_vec()).collect(),
            verified: self.product_checked,
        }
    }

    /// Rebuilds a witness from its homomorphisms, checking each one.
    pub fn from_homs(group: &Arc<FiniteGroup>, homs: Vec<GroupHom>) -> Result<Self> {
        let mut kernels = Vec::with_capacity(homs.len());
        for h in &homs {
            if h.values.len() != group.order() || !h.is_hom(group) || h.is_zero() {
                return Err(Error::input("witness entries must be nonzero homomorphisms to Z/p"));
            }
            kernels.push(Subgroup::new(group.clone(), h.kernel())?);
        }
        Ok(SerreWitness {
            group: group.clone(),
            homs,
            kernels,
            product_checked: false,
        })
    }
}

/// The Bockstein product `β(z_1)⋯β(z_m)`.
pub fn bockstein_product(ctx: &GroupCohomology, homs: &[GroupHom]) -> Result<CohomologyClass> {
    let mut acc = ctx.unit();
    for h in homs {
        let b = ctx.bockstein_h1(&ctx.class_of_hom(h)?)?;
        acc = ctx.cup(&b, &acc)?;
    }
    Ok(acc)
}

/// Outcome of a bounded search.
#[derive(Clone, Debug)]
pub struct WitnessSearch {
    pub witness: Option<SerreWitness>,
    pub max_m: usize,
    /// Set when the search stopped early on a resource cap; an absent
    /// witness then says nothing about larger m.
    pub capped: bool,
}

/// Searches m = 1, 2, … ≤ `max_m` over multisets of points of the
/// projectivized `H^1`, in lexicographic order. Returns the first tuple
/// whose Bockstein product vanishes.
pub fn find_witness(group: &Arc<FiniteGroup>, max_m: usize) -> Result<WitnessSearch> {
    if !group.is_p_group() || group.order() == 1 {
        return Err(Error::domain("witness search needs a nontrivial p-group"));
    }
    let ctx = match GroupCohomology::new(group, 2 * max_m.max(1)) {
        Ok(c) => c,
        Err(Error::Cap(_)) => {
            return Ok(WitnessSearch {
                witness: None,
                max_m,
                capped: true,
            })
        }
        Err(e) => return Err(e),
    };
    find_witness_in(&ctx, max_m)
}

pub fn find_witness_in(ctx: &GroupCohomology, max_m: usize) -> Result<WitnessSearch> {
    let p = ctx.p();
    let fq = ctx.frattini()?;
    let homs: Vec<GroupHom> = projective_points(p, fq.rank)
        .iter()
        .map(|c| fq.hom(c, p))
        .collect();
    let betas: Vec<CohomologyClass> = homs
        .iter()
        .map(|h| ctx.bockstein_h1(&ctx.class_of_hom(h)?))
        .collect::<Result<_>>()?;
    if 2 * max_m > ctx.maxdeg() {
        return Err(Error::input("cohomology context too shallow for the bound"));
    }
    // products of all multisets of size m, grown from size m - 1
    let mut level: Vec<(Vec<usize>, CohomologyClass)> = vec![(Vec::new(), ctx.unit())];
    for _ in 0..max_m {
        let candidates: Vec<(Vec<usize>, usize)> = level
            .iter()
            .enumerate()
            .flat_map(|(li, (t, _))| {
                let start = t.last().copied().unwrap_or(0);
                (start..homs.len()).map(move |i| (li, i))
            })
            .map(|(li, i)| {
                let mut t = level[li].0.clone();
                t.push(i);
                (t, li)
            })
            .collect();
        let products: Vec<Result<CohomologyClass>> = candidates
            .par_iter()
            .map(|(t, li)| ctx.cup(&betas[*t.last().expect("nonempty")], &level[*li].1))
            .collect();
        let mut next = Vec::with_capacity(candidates.len());
        for ((t, _), prod) in candidates.into_iter().zip(products) {
            let prod = prod?;
            if prod.is_zero() {
                let chosen: Vec<GroupHom> = t.iter().map(|&i| homs[i].clone()).collect();
                let mut w = SerreWitness::from_homs(ctx.group(), chosen)?;
                w.product_checked = true;
                return Ok(WitnessSearch {
                    witness: Some(w),
                    max_m,
                    capped: false,
                });
            }
            next.push((t, prod));
        }
        level = next;
    }
    Ok(WitnessSearch {
        witness: None,
        max_m,
        capped: false,
    })
}

/// An exact sequence `0 → k → X_{n−1} → … → X_0 → k → 0` of permutation
/// modules `k[G/H]`.
#[derive(Clone, Debug)]
pub struct SplicedSequence {
    pub group: Arc<FiniteGroup>,
    pub homs: Vec<GroupHom>,
    pub sequence: ExactSequence,
    /// The subgroup of each middle object, left to right (`X_{n−1}` first).
    pub subgroups: Vec<Subgroup>,
    pub exact_report: ExactnessReport,
}

impl SplicedSequence {
    pub fn n(&self) -> usize {
        self.sequence.degree()
    }

    /// `X_0, …, X_{n−1}`.
    pub fn terms(&self) -> Vec<&KGModule> {
        (0..self.n()).map(|i| self.sequence.middle(i)).collect()
    }
}

/// `0 → k –N→ k[G/H] –(1−σ)→ k[G/H] –ε→ k → 0` for `H = ker z`.
pub fn two_extension(group: &Arc<FiniteGroup>, z: &GroupHom) -> Result<SplicedSequence> {
    let w = SerreWitness::from_homs(group, vec![z.clone()])?;
    splice(&w)
}

struct Piece {
    sub: Subgroup,
    module: KGModule,
    norm: FpMatrix,
    one_minus_sigma: FpMatrix,
    aug: FpMatrix,
}

fn piece(group: &Arc<FiniteGroup>, z: &GroupHom, sub: &Subgroup) -> Result<Piece> {
    let p = group.p();
    let k_h = KGModule::trivial(&sub.as_group());
    let module = k_h.induce(sub)?;
    let idx = sub.index();
    let sigma = (0..group.order())
        .find(|&g| z.values[g] == 1)
        .ok_or_else(|| Error::input("homomorphism is not surjective"))?;
    // right multiplication by sigma on cosets tH
    let mut one_minus_sigma = FpMatrix::identity(p, idx);
    for (c, &t) in sub.transversal().iter().enumerate() {
        let c2 = sub.coset_index(group.mul(t, sigma));
        let cur = one_minus_sigma.get(c2, c);
        one_minus_sigma.set(c2, c, (cur + p - 1) % p);
    }
    let norm = FpMatrix::from_rows(p, 1, &vec![vec![1]; idx])?;
    let aug = FpMatrix::from_rows(p, idx, &[vec![1; idx]])?;
    Ok(Piece {
        sub: sub.clone(),
        module,
        norm,
        one_minus_sigma,
        aug,
    })
}

/// Yoneda splice of the two-extensions of the witness entries, left to
/// right, joined through augmentation followed by the norm.
pub fn splice(w: &SerreWitness) -> Result<SplicedSequence> {
    let group = &w.group;
    let k = KGModule::trivial(group);
    let pieces: Vec<Piece> = w
        .homs
        .iter()
        .zip(&w.kernels)
        .map(|(z, h)| piece(group, z, h))
        .collect::<Result<_>>()?;
    let mut objects = vec![k.clone()];
    let mut maps = Vec::new();
    let mut subgroups = Vec::new();
    for (i, pc) in pieces.iter().enumerate() {
        let left = objects.last().expect("nonempty").clone();
        let entry = if i == 0 {
            pc.norm.clone()
        } else {
            pc.norm.mul(&pieces[i - 1].aug)?
        };
        maps.push(ModuleMap::new(left, pc.module.clone(), entry)?);
        maps.push(ModuleMap::new(
            pc.module.clone(),
            pc.module.clone(),
            pc.one_minus_sigma.clone(),
        )?);
        objects.push(pc.module.clone());
        objects.push(pc.module.clone());
        subgroups.push(pc.sub.clone());
        subgroups.push(pc.sub.clone());
    }
    let last = pieces.last().ok_or_else(|| Error::input("empty witness"))?;
    maps.push(ModuleMap::new(last.module.clone(), k.clone(), last.aug.clone())?);
    objects.push(k);
    let sequence = ExactSequence::new(objects, maps)?;
    let exact_report = verify_exact(&sequence)?;
    if !exact_report.pass {
        return Err(Error::internal("spliced sequence is not exact"));
    }
    Ok(SplicedSequence {
        group: group.clone(),
        homs: w.homs.clone(),
        sequence,
        subgroups,
        exact_report,
    })
}

#[derive(Clone, Debug)]
pub struct ZeroClassReport {
    pub class: CohomologyClass,
    pub product: CohomologyClass,
    /// The extension class equals the Bockstein product.
    pub matches: bool,
    pub is_zero: bool,
}

/// The Yoneda class of the spliced sequence against the minimal resolution
/// of k, compared with the Bockstein product computed in the ring.
pub fn verify_zero_class(s: &SplicedSequence, ctx: &GroupCohomology) -> Result<ZeroClassReport> {
    if ctx.group().as_ref() != s.group.as_ref() {
        return Err(Error::input("cohomology of a different group"));
    }
    let class = extension_class(&s.sequence, ctx.resolution())?;
    let product = bockstein_product(ctx, &s.homs)?;
    Ok(ZeroClassReport {
        matches: class == product,
        is_zero: class.is_zero(),
        class,
        product,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog_group, index_p_subgroups};

    fn nonzero_hom(g: &Arc<FiniteGroup>) -> GroupHom {
        index_p_subgroups(g).unwrap().remove(0).1
    }

    #[test]
    fn two_extension_over_z2_and_z3() {
        let z2 = catalog_group("Z2").unwrap();
        let s = two_extension(&z2, &nonzero_hom(&z2)).unwrap();
        assert_eq!(s.n(), 2);
        let m = &s.sequence.maps;
        assert_eq!(m[1].matrix, FpMatrix::from_rows(2, 2, &[vec![1, 1], vec![1, 1]]).unwrap());
        assert_eq!(m[1].rank(), 1);
        let z3 = catalog_group("Z3").unwrap();
        let s = two_extension(&z3, &nonzero_hom(&z3)).unwrap();
        assert_eq!(s.sequence.maps[0].rank(), 1);
        assert_eq!(s.sequence.maps[1].rank(), 2);
        assert!(s.exact_report.pass);
        assert!(two_extension(&z3, &GroupHom { values: vec![0; 3] }).is_err());
    }

    #[test]
    fn extension_class_matches_bockstein() {
        for name in ["Z2", "Z3", "Z4", "Z9", "V4", "Z3^2"] {
            let g = catalog_group(name).unwrap();
            let ctx = GroupCohomology::new(&g, 4).unwrap();
            for (_, h) in index_p_subgroups(&g).unwrap() {
                let s = two_extension(&g, &h).unwrap();
                let r = verify_zero_class(&s, &ctx).unwrap();
                assert!(r.matches, "{name}: {:?} vs {:?}", r.class.vector, r.product.vector);
            }
        }
    }

    #[test]
    fn z2_control_is_nonzero_and_z4_vanishes() {
        let z2 = catalog_group("Z2").unwrap();
        let ctx = GroupCohomology::new(&z2, 4).unwrap();
        let s = two_extension(&z2, &nonzero_hom(&z2)).unwrap();
        let r = verify_zero_class(&s, &ctx).unwrap();
        assert!(!r.is_zero);
        let z = ctx.basis(1).unwrap().remove(0);
        assert_eq!(r.class, ctx.cup(&z, &z).unwrap());
        let z4 = catalog_group("Z4").unwrap();
        let ctx = GroupCohomology::new(&z4, 4).unwrap();
        let s = two_extension(&z4, &nonzero_hom(&z4)).unwrap();
        assert!(verify_zero_class(&s, &ctx).unwrap().is_zero);
    }

    #[test]
    fn minimal_witnesses() {
        let expect = [("Z4", Some(1)), ("Z2xZ4", Some(1)), ("D8", Some(2)), ("Q8", Some(2)), ("V4", None)];
        for (name, m) in expect {
            let g = catalog_group(name).unwrap();
            let s = find_witness(&g, 4).unwrap();
            assert!(!s.capped);
            assert_eq!(s.witness.as_ref().map(|w| w.m()), m, "{name}");
        }
    }

    #[test]
    fn d8_witness_splices() {
        let g = catalog_group("D8").unwrap();
        let w = find_witness(&g, 2).unwrap().witness.unwrap();
        let s = splice(&w).unwrap();
        assert_eq!(s.n(), 4);
        assert!(s.terms().iter().all(|t| t.dim() == 2));
        assert_eq!(s.sequence.objects.len(), 6);
        let ctx = GroupCohomology::new(&g, 4).unwrap();
        let r = verify_zero_class(&s, &ctx).unwrap();
        assert!(r.is_zero && r.matches);
        assert_eq!(w.to_json().m, 2);
    }

    #[test]
    fn splice_of_nonvanishing_pair_is_the_product() {
        let g = catalog_group("Z2").unwrap();
        let h = nonzero_hom(&g);
        let w = SerreWitness::from_homs(&g, vec![h.clone(), h]).unwrap();
        let s = splice(&w).unwrap();
        let ctx = GroupCohomology::new(&g, 4).unwrap();
        let r = verify_zero_class(&s, &ctx).unwrap();
        assert!(r.matches && !r.is_zero);
    }
}

//! Desk model of rational bordism of `Bπ` for `π = Z^{2g}`.
//!
//! `Ω^U_{2k} ⊗ Q` has the basis of products of projective spaces indexed by
//! partitions of `k`. Over `Bπ` a generator pairs a homology class of the
//! torus (a coordinate subtorus `T_S`, `|S|` even) with a fiber partition;
//! its representative is `T_S × P^{λ₁} × ... × P^{λ_r}` mapped to `Bπ` by
//! the coordinate inclusion of `T_S`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num::{BigInt, One, Zero};

use crate::algebra::{AlgebraElement, GradedAlgebra, DEFAULT_BASIS_LIMIT};
use crate::error::{Error, Result};
use crate::genera::{genus_class, genus_number, GenusSpec};
use crate::linalg;
use crate::rational::Rational;
use crate::varieties::{
    abelian_variety, abelian_variety_named, product, projective_space, VarietyModel,
};

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidBordism(
                "partition parts must be positive".into(),
            ));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Product of bordism classes: concatenation of parts.
    pub fn times(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// `P^{λ₁} × ... × P^{λ_r}`, the point for the empty partition.
    pub fn variety(&self) -> Result<VarietyModel> {
        self.variety_scaled(1)
    }

    /// `P^{sλ₁} × ... × P^{sλ_r}`.
    fn variety_scaled(&self, scale: u32) -> Result<VarietyModel> {
        let mut parts = self.0.iter();
        let Some(first) = parts.next() else {
            return Ok(projective_space(0));
        };
        parts.try_fold(projective_space(scale * first), |acc, &p| {
            product(&acc, &projective_space(scale * p))
        })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `k`, reverse-lexicographic: `(k)` first, `(1,...,1)` last.
pub fn partitions(k: u32) -> Vec<Partition> {
    fn fill(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            fill(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(k, k, &mut Vec::new(), &mut out);
    out
}

/// The partition basis of `Ω^U_{2k} ⊗ Q`.
pub fn unitary_basis(k: u32) -> Vec<Partition> {
    partitions(k)
}

/// Todd genus of the product of projective spaces, computed on the
/// product model. Results are cached per partition.
pub fn todd_of_partition(p: &Partition) -> Result<Rational> {
    static CACHE: OnceLock<Mutex<HashMap<Partition, Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(p) {
        return Ok(v.clone());
    }
    let v = genus_number(&p.variety()?, &GenusSpec::todd())?;
    cache.lock().unwrap().insert(p.clone(), v.clone());
    Ok(v)
}

/// A homology class of the torus paired with a fiber partition. The label
/// is the exterior monomial dual to the subtorus, `1` for a point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BordismGenerator {
    pub label: String,
    pub fiber: Partition,
}

impl BordismGenerator {
    pub fn trivial(fiber: Partition) -> Self {
        BordismGenerator {
            label: "1".into(),
            fiber,
        }
    }

    fn label_degree(&self) -> u32 {
        if self.label == "1" {
            0
        } else {
            self.label.split('*').count() as u32
        }
    }
}

impl fmt::Display for BordismGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]{}", self.label, self.fiber)
    }
}

/// A finite rational combination of generators of one complex dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BordismElement {
    terms: BTreeMap<BordismGenerator, Rational>,
}

impl BordismElement {
    pub fn new<I: IntoIterator<Item = (BordismGenerator, Rational)>>(terms: I) -> Result<Self> {
        let mut map: BTreeMap<BordismGenerator, Rational> = BTreeMap::new();
        for (g, c) in terms {
            *map.entry(g).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        let mut dims = map.keys().map(|g| g.label_degree() / 2 + g.fiber.weight());
        if let Some(d) = dims.next() {
            if dims.any(|e| e != d) {
                return Err(Error::InvalidBordism(
                    "terms of different dimensions".into(),
                ));
            }
        }
        Ok(BordismElement { terms: map })
    }

    /// A combination of products of projective spaces mapped to a point.
    pub fn from_partitions<I: IntoIterator<Item = (Partition, Rational)>>(
        terms: I,
    ) -> Result<Self> {
        Self::new(
            terms
                .into_iter()
                .map(|(p, c)| (BordismGenerator::trivial(p), c)),
        )
    }

    pub fn terms(&self) -> &BTreeMap<BordismGenerator, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coordinates against a list of partitions; terms with nontrivial
    /// labels or outside the list are an error.
    pub fn coordinates(&self, basis: &[Partition]) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); basis.len()];
        for (g, c) in &self.terms {
            let i = basis
                .iter()
                .position(|p| *p == g.fiber)
                .filter(|_| g.label == "1")
                .ok_or_else(|| Error::InvalidBordism(format!("{g} is not in the basis")))?;
            v[i] = c.clone();
        }
        Ok(v)
    }
}

/// The Todd functional on fiber partitions, extended linearly. Labels are
/// ignored.
pub fn todd_functional(e: &BordismElement) -> Result<Rational> {
    e.terms.iter().try_fold(Rational::zero(), |acc, (g, c)| {
        Ok(acc + c * todd_of_partition(&g.fiber)?)
    })
}

/// Span of the birational ideal in degree `k`, as a reduced echelon basis in
/// partition coordinates.
#[derive(Clone, Debug)]
pub struct IdealSpan {
    pub k: u32,
    pub partitions: Vec<Partition>,
    pub basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl IdealSpan {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn codimension(&self) -> usize {
        self.partitions.len() - self.basis.len()
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        linalg::in_row_space(&self.basis, &self.pivots, v)
    }

    pub fn contains(&self, e: &BordismElement) -> Result<bool> {
        Ok(self.contains_vector(&e.coordinates(&self.partitions)?))
    }

    /// Basis vectors rendered as combinations of partitions.
    pub fn basis_elements(&self) -> Vec<BordismElement> {
        self.basis
            .iter()
            .map(|row| {
                BordismElement::from_partitions(
                    self.partitions.iter().cloned().zip(row.iter().cloned()),
                )
                .expect("one degree")
            })
            .collect()
    }
}

/// Differences of partitions of one weight, all of which are birational.
fn differences(k: u32) -> Vec<(Partition, Partition)> {
    let ps = partitions(k);
    ps.iter()
        .skip(1)
        .map(|p| (ps[0].clone(), p.clone()))
        .collect()
}

/// Spanning set: `P - P'` in degree `k`, and `(P - P')·Q` for differences in
/// every lower degree times every partition `Q` of the remaining weight.
pub fn birational_ideal_span(k: u32) -> Result<IdealSpan> {
    if k == 0 {
        return Err(Error::InvalidBordism(
            "the birational ideal lives in positive degree".into(),
        ));
    }
    let ps = partitions(k);
    let index: BTreeMap<&Partition, usize> = ps.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let vector = |a: &Partition, b: &Partition| {
        let mut v = vec![Rational::zero(); ps.len()];
        v[index[a]] += Rational::one();
        v[index[b]] -= Rational::one();
        v
    };
    let mut rows: Vec<Vec<Rational>> = differences(k).iter().map(|(a, b)| vector(a, b)).collect();
    for m in 1..k {
        for (a, b) in differences(m) {
            for q in partitions(k - m) {
                rows.push(vector(&a.times(&q), &b.times(&q)));
            }
        }
    }
    if rows.is_empty() {
        rows.push(vec![Rational::zero(); ps.len()]);
    }
    let pivots = linalg::row_reduce(&mut rows);
    Ok(IdealSpan {
        k,
        partitions: ps,
        basis: rows,
        pivots,
    })
}

/// `π = Z^{rank}`, with the torus as its classifying space.
#[derive(Clone, Debug)]
pub struct PiModel {
    rank: u32,
    torus: VarietyModel,
}

impl PiModel {
    pub fn free_abelian(rank: u32) -> Result<Self> {
        if rank % 2 == 1 {
            return Err(Error::InvalidBordism("only Z^{2g} is modelled".into()));
        }
        let names: Vec<String> = (1..=rank).map(|i| format!("x{i}")).collect();
        let torus = if rank == 0 {
            abelian_variety(0)
        } else {
            abelian_variety_named(&names, DEFAULT_BASIS_LIMIT)?
        };
        Ok(PiModel { rank, torus })
    }

    /// Parses `Z^n`, `Z^0` and `1` being the trivial group.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "1" {
            return Self::free_abelian(0);
        }
        let rank = t
            .strip_prefix("Z^")
            .and_then(|r| r.trim().parse::<u32>().ok())
            .ok_or_else(|| Error::InvalidBordism(format!("expected Z^<2g>, found `{t}`")))?;
        Self::free_abelian(rank)
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// `H*(Bπ; Q)`, the exterior algebra on `x1..x{rank}`.
    pub fn cohomology(&self) -> &GradedAlgebra {
        self.torus.algebra()
    }

    /// Basis indices of even-degree torus classes up to `degree`.
    fn even_classes(&self, degree: u32) -> Vec<usize> {
        let alg = self.cohomology();
        (0..alg.dim())
            .filter(|&i| alg.degree_of(i) % 2 == 0 && alg.degree_of(i) <= degree)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theory {
    Unitary,
    Oriented,
}

impl Theory {
    pub fn genus(self) -> GenusSpec {
        match self {
            Theory::Unitary => GenusSpec::todd(),
            Theory::Oriented => GenusSpec::l_genus(),
        }
    }
}

/// Generators of `Ω_{2k}(Bπ) ⊗ Q` in complex dimension `k`.
///
/// Unitary: `|S|/2 + |λ| = k`, fiber `∏ P^{λ_i}`. Oriented: `|S|/2 + 2|λ| = k`,
/// fiber `∏ P^{2λ_i}`, detected by the L-genus.
#[derive(Clone, Debug)]
pub struct GeneratorBasis {
    pub theory: Theory,
    pub pi: PiModel,
    pub k: u32,
    pub generators: Vec<BordismGenerator>,
}

impl GeneratorBasis {
    pub fn unitary(pi: PiModel, k: u32) -> Self {
        Self::build(Theory::Unitary, pi, k)
    }

    pub fn oriented(pi: PiModel, k: u32) -> Self {
        Self::build(Theory::Oriented, pi, k)
    }

    fn fiber_weight(theory: Theory) -> u32 {
        match theory {
            Theory::Unitary => 1,
            Theory::Oriented => 2,
        }
    }

    fn build(theory: Theory, pi: PiModel, k: u32) -> Self {
        let w = Self::fiber_weight(theory);
        let alg = pi.cohomology().clone();
        let mut generators = Vec::new();
        for i in pi.even_classes(2 * k) {
            let half = alg.degree_of(i) / 2;
            if (k - half) % w != 0 {
                continue;
            }
            for fiber in partitions((k - half) / w) {
                generators.push(BordismGenerator {
                    label: alg.render_basis(i),
                    fiber,
                });
            }
        }
        GeneratorBasis {
            theory,
            pi,
            k,
            generators,
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn position(&self, g: &BordismGenerator) -> Option<usize> {
        self.generators.iter().position(|h| h == g)
    }

    /// `T_S × fiber`, with the designated classes of `T_S` carrying the torus
    /// labels.
    pub fn representative(&self, i: usize) -> Result<VarietyModel> {
        let g = &self.generators[i];
        let fiber = g.fiber.variety_scaled(Self::fiber_weight(self.theory))?;
        if g.label == "1" {
            return Ok(fiber);
        }
        let names: Vec<String> = g.label.split('*').map(str::to_string).collect();
        product(&abelian_variety_named(&names, DEFAULT_BASIS_LIMIT)?, &fiber)
    }

    /// `u*(x)` on the representative: torus monomials inside the subtorus
    /// restrict to themselves, the others to zero.
    fn pullback(&self, rep: &VarietyModel, x: &AlgebraElement) -> Result<AlgebraElement> {
        let alg = self.pi.cohomology();
        if !x.algebra().same(alg) {
            return Err(Error::AlgebraMismatch);
        }
        x.coefficients()
            .iter()
            .try_fold(rep.algebra().zero(), |acc, (i, c)| {
                match rep.pi_class(&alg.render_basis(*i)) {
                    Ok(e) => acc.add(&e.scale(c)),
                    Err(_) => Ok(acc),
                }
            })
    }
}

/// Values of a linear functional on a generator basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusFunctional {
    pub values: Vec<Rational>,
}

impl GenusFunctional {
    pub fn new(values: Vec<Rational>) -> Self {
        GenusFunctional { values }
    }

    /// `ξ([M → Bπ]) = ⟨G(M) ∪ u*(x), [M]⟩` on each representative, with the
    /// genus of the basis' theory.
    pub fn from_class(basis: &GeneratorBasis, x: &AlgebraElement) -> Result<Self> {
        let genus = basis.theory.genus();
        let values = (0..basis.len())
            .map(|i| {
                let rep = basis.representative(i)?;
                genus_class(&rep, &genus)?
                    .mul(&basis.pullback(&rep, x)?)?
                    .pair_top()
            })
            .collect::<Result<_>>()?;
        Ok(GenusFunctional { values })
    }

    /// The Todd genus of the fiber, whatever the label.
    pub fn todd(basis: &GeneratorBasis) -> Result<Self> {
        let values = basis
            .generators
            .iter()
            .map(|g| todd_of_partition(&g.fiber))
            .collect::<Result<_>>()?;
        Ok(GenusFunctional { values })
    }

    pub fn evaluate(&self, basis: &GeneratorBasis, e: &BordismElement) -> Result<Rational> {
        e.terms().iter().try_fold(Rational::zero(), |acc, (g, c)| {
            let i = basis
                .position(g)
                .ok_or_else(|| Error::InvalidBordism(format!("{g} is not a basis generator")))?;
            Ok(acc + c * &self.values[i])
        })
    }
}

/// A fiber difference on which a functional does not vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub left: BordismGenerator,
    pub right: BordismGenerator,
    pub difference: Rational,
}

impl Witness {
    pub fn element(&self) -> BordismElement {
        BordismElement::new([
            (self.left.clone(), Rational::one()),
            (self.right.clone(), -Rational::one()),
        ])
        .expect("one degree")
    }
}

/// Whether `ξ` vanishes on every difference of fibers over a fixed label.
pub fn is_invariant(basis: &GeneratorBasis, xi: &GenusFunctional) -> Result<Option<Witness>> {
    if xi.values.len() != basis.len() {
        return Err(Error::InvalidBordism(format!(
            "{} values for {} generators",
            xi.values.len(),
            basis.len()
        )));
    }
    let mut first: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, g) in basis.generators.iter().enumerate() {
        let j = *first.entry(g.label.as_str()).or_insert(i);
        if xi.values[i] != xi.values[j] {
            return Ok(Some(Witness {
                left: basis.generators[j].clone(),
                right: g.clone(),
                difference: &xi.values[j] - &xi.values[i],
            }));
        }
    }
    Ok(None)
}

/// A class `x` of `H*(Bπ; Q)` with `ξ` equal to the higher genus of `x` on
/// every generator. Free coordinates of the linear system are set to zero.
pub fn decompose_functional(
    basis: &GeneratorBasis,
    xi: &GenusFunctional,
) -> Result<AlgebraElement> {
    if let Some(w) = is_invariant(basis, xi)? {
        return Err(Error::NotInvariant(format!(
            "value on {} - {} is {}",
            w.left,
            w.right,
            crate::rational::fmt_rational(&w.difference)
        )));
    }
    let alg = basis.pi.cohomology().clone();
    let columns = basis.pi.even_classes(2 * basis.k);
    let genus = basis.theory.genus();
    let matrix = (0..basis.len())
        .map(|i| {
            let rep = basis.representative(i)?;
            let class = genus_class(&rep, &genus)?;
            columns
                .iter()
                .map(|&c| {
                    class
                        .mul(&basis.pullback(&rep, &alg.basis_element(c))?)?
                        .pair_top()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let solution = linalg::solve(&matrix, &xi.values)
        .expect("an invariant functional is a higher genus on a torus");
    let x = alg.element(columns.into_iter().zip(solution));
    debug_assert_eq!(GenusFunctional::from_class(basis, &x)?, *xi);
    Ok(x)
}

/// Number of partitions of `k`, by the pentagonal recurrence.
pub fn partition_count(k: u32) -> BigInt {
    let mut p = vec![BigInt::one()];
    for n in 1..=k as i64 {
        let mut acc = BigInt::zero();
        for j in 1.. {
            let a = n - j * (3 * j - 1) / 2;
            if a < 0 {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc += &p[a as usize] * sign;
            let b = n - j * (3 * j + 1) / 2;
            if b >= 0 {
                acc += &p[b as usize] * sign;
            }
        }
        p.push(acc);
    }
    p[k as usize].clone()
}

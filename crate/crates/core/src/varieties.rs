//! Model varieties: cohomology algebra, total Chern class, fundamental class
//! and the designated classes pulled back from `Bπ`, plus the point blow-up
//! of a surface and the comparison reports built on top of them.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num::{BigInt, One};

use crate::algebra::{
    point_blowup, tensor_with_limit, AlgebraBuilder, AlgebraElement, GradedAlgebra,
    DEFAULT_BASIS_LIMIT,
};
use crate::error::{Error, Result};
use crate::genera::{chern_to_pontrjagin, genus_class, GenusSpec};
use crate::rational::Rational;

/// A class `u*(x)` designated by its label, e.g. `x1*x2`. `1` is the unit.
#[derive(Clone, Debug, PartialEq)]
pub struct PiClass {
    pub label: String,
    pub element: AlgebraElement,
}

/// How a model was built. Displays as the variety expression language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    ProjectiveSpace(u32),
    Abelian(u32),
    Product(Box<Provenance>, Box<Provenance>),
    Blowup(Box<Provenance>),
    Custom(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::ProjectiveSpace(n) => write!(f, "P({n})"),
            Provenance::Abelian(g) => write!(f, "A({g})"),
            Provenance::Product(a, b) => {
                if matches!(**b, Provenance::Product(..)) {
                    write!(f, "{a} x ({b})")
                } else {
                    write!(f, "{a} x {b}")
                }
            }
            Provenance::Blowup(a) => write!(f, "blowup({a})"),
            Provenance::Custom(name) => write!(f, "{name}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VarietyModel {
    name: String,
    dim_c: u32,
    algebra: GradedAlgebra,
    total_chern: AlgebraElement,
    pi_classes: Vec<PiClass>,
    provenance: Provenance,
}

fn label_factors(label: &str) -> Vec<&str> {
    if label == "1" {
        Vec::new()
    } else {
        label.split('*').map(str::trim).collect()
    }
}

fn join_labels(a: &str, b: &str) -> String {
    match (a, b) {
        ("1", b) => b.to_string(),
        (a, "1") => a.to_string(),
        (a, b) => format!("{a}*{b}"),
    }
}

impl VarietyModel {
    /// Validates and assembles a model. The unit class is added to the
    /// designated classes under the label `1` if missing.
    pub fn new(
        name: &str,
        dim_c: u32,
        total_chern: AlgebraElement,
        pi_classes: Vec<PiClass>,
        provenance: Provenance,
    ) -> Result<Self> {
        let algebra = total_chern.algebra().clone();
        if algebra.top_degree() != 2 * dim_c {
            return Err(Error::InvalidVariety(format!(
                "top degree {} does not match complex dimension {dim_c}",
                algebra.top_degree()
            )));
        }
        if algebra.fundamental_index().is_none() {
            return Err(Error::NoFundamentalClass);
        }
        if total_chern.component(0)? != algebra.unit() {
            return Err(Error::NotATotalClass("constant term is not 1".into()));
        }
        if total_chern.components().iter().any(|(d, _)| d % 2 == 1) {
            return Err(Error::NotATotalClass("odd-degree Chern component".into()));
        }
        let mut seen = HashSet::new();
        for p in &pi_classes {
            if !p.element.algebra().same(&algebra) {
                return Err(Error::AlgebraMismatch);
            }
            if !seen.insert(p.label.clone()) {
                return Err(Error::InvalidVariety(format!(
                    "duplicate pi-class label `{}`",
                    p.label
                )));
            }
            if !p.element.is_zero() && p.element.homogeneous_degree().is_none() {
                return Err(Error::InvalidVariety(format!(
                    "pi-class `{}` is not homogeneous",
                    p.label
                )));
            }
        }
        let mut pi_classes = pi_classes;
        if !seen.contains("1") {
            pi_classes.insert(
                0,
                PiClass {
                    label: "1".into(),
                    element: algebra.unit(),
                },
            );
        }
        let model = VarietyModel {
            name: name.to_string(),
            dim_c,
            algebra,
            total_chern,
            pi_classes,
            provenance,
        };
        model.check_label_products()?;
        Ok(model)
    }

    /// A label that is a product of other labels must carry their product.
    fn check_label_products(&self) -> Result<()> {
        for p in &self.pi_classes {
            let factors = label_factors(&p.label);
            if factors.len() < 2 {
                continue;
            }
            let Some(elements) = factors
                .iter()
                .map(|f| {
                    self.pi_classes
                        .iter()
                        .find(|q| q.label == *f)
                        .map(|q| &q.element)
                })
                .collect::<Option<Vec<_>>>()
            else {
                continue;
            };
            let product = elements
                .iter()
                .try_fold(self.algebra.unit(), |acc, e| acc.mul(e))?;
            if product != p.element {
                return Err(Error::InvalidVariety(format!(
                    "pi-class `{}` is not the product of its factors",
                    p.label
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim_c(&self) -> u32 {
        self.dim_c
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn total_chern(&self) -> &AlgebraElement {
        &self.total_chern
    }

    pub fn pi_classes(&self) -> &[PiClass] {
        &self.pi_classes
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `c_i`, zero above the dimension.
    pub fn chern_class(&self, i: u32) -> AlgebraElement {
        if i > self.dim_c {
            return self.algebra.zero();
        }
        self.total_chern
            .component(2 * i as i64)
            .expect("degree in range")
    }

    /// `p_i` of the underlying real manifold.
    pub fn pontrjagin_class(&self, i: u32) -> Result<AlgebraElement> {
        if 4 * i > self.algebra.top_degree() {
            return Ok(self.algebra.zero());
        }
        chern_to_pontrjagin(&self.total_chern, self.dim_c)?.component(4 * i as i64)
    }

    pub fn pi_class(&self, label: &str) -> Result<&AlgebraElement> {
        let wanted: String = label.chars().filter(|c| !c.is_whitespace()).collect();
        self.pi_classes
            .iter()
            .find(|p| p.label == wanted)
            .map(|p| &p.element)
            .ok_or_else(|| Error::UnknownPiClass(label.to_string()))
    }

    pub fn pi_labels(&self) -> Vec<&str> {
        self.pi_classes.iter().map(|p| p.label.as_str()).collect()
    }

    /// Alternating count of basis classes.
    pub fn euler_characteristic(&self) -> i64 {
        self.algebra.euler_characteristic()
    }

    /// `⟨c_n, [V]⟩`.
    pub fn euler_number(&self) -> Rational {
        self.chern_class(self.dim_c)
            .pair_top()
            .expect("models carry a fundamental class")
    }

    /// Whether the top Chern number equals the Euler characteristic.
    pub fn satisfies_euler_identity(&self) -> bool {
        self.euler_number() == Rational::from_integer(BigInt::from(self.euler_characteristic()))
    }

    /// Same model with a replaced total Chern class.
    pub fn with_total_chern(&self, total_chern: AlgebraElement) -> Result<Self> {
        if !total_chern.algebra().same(&self.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        VarietyModel::new(
            &self.name,
            self.dim_c,
            total_chern,
            self.pi_classes.clone(),
            self.provenance.clone(),
        )
    }

    /// Renames every factor of every pi-class label.
    pub fn relabel_pi(&self, rename: impl Fn(&str) -> String) -> Result<Self> {
        let pi = self
            .pi_classes
            .iter()
            .map(|p| PiClass {
                label: if p.label == "1" {
                    "1".into()
                } else {
                    label_factors(&p.label)
                        .into_iter()
                        .map(&rename)
                        .collect::<Vec<_>>()
                        .join("*")
                },
                element: p.element.clone(),
            })
            .collect();
        VarietyModel::new(
            &self.name,
            self.dim_c,
            self.total_chern.clone(),
            pi,
            self.provenance.clone(),
        )
    }

    /// Same model under another name.
    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// `P^n` with hyperplane class `h`.
pub fn projective_space(n: u32) -> VarietyModel {
    projective_space_named(n, "h")
}

/// `P^n` with the hyperplane class named `generator`.
/// The algebra is `Q[h]/h^{n+1}` and `c = (1+h)^{n+1}`.
pub fn projective_space_named(n: u32, generator: &str) -> VarietyModel {
    let algebra = if n == 0 {
        GradedAlgebra::point()
    } else {
        AlgebraBuilder::new(2 * n)
            .truncated(generator, 2, n + 1)
            .fundamental(&format!("{generator}^{n}"))
            .build()
            .expect("projective space presentation is valid")
    };
    let mut total = algebra.unit();
    if n > 0 {
        let h = algebra.generator(generator).unwrap();
        for i in 1..=n {
            total = total.add(&h.pow(i).scale(&binomial(n + 1, i))).unwrap();
        }
    }
    VarietyModel::new(
        &format!("P({n})"),
        n,
        total,
        Vec::new(),
        Provenance::ProjectiveSpace(n),
    )
    .expect("projective space is a valid model")
}

/// Abelian variety of dimension `g` with generators `x1..x{2g}`.
///
/// Panics if the exterior algebra exceeds the default basis limit; use
/// [`abelian_variety_named`] to handle that as an error.
pub fn abelian_variety(g: u32) -> VarietyModel {
    let names: Vec<String> = (1..=2 * g).map(|i| format!("x{i}")).collect();
    abelian_variety_named(&names, DEFAULT_BASIS_LIMIT).expect("abelian variety within basis limit")
}

/// Abelian variety with the given degree-1 generator names (an even number
/// of them). Its cohomology is the exterior algebra, `c = 1`, and every
/// exterior monomial is designated, modelling `u` as the identity onto
/// `B(Z^{2g})`.
pub fn abelian_variety_named(names: &[String], limit: usize) -> Result<VarietyModel> {
    if names.len() % 2 == 1 {
        return Err(Error::InvalidVariety(
            "an abelian variety needs an even number of generators".into(),
        ));
    }
    let g = (names.len() / 2) as u32;
    if names.is_empty() {
        let point = GradedAlgebra::point();
        return VarietyModel::new("A(0)", 0, point.unit(), Vec::new(), Provenance::Abelian(0));
    }
    if names.len() >= usize::BITS as usize - 1 || (1usize << names.len()) > limit {
        return Err(Error::TooLarge {
            size: 1usize.checked_shl(names.len() as u32).unwrap_or(usize::MAX),
            limit,
        });
    }
    let mut b = AlgebraBuilder::new(2 * g).basis_limit(limit);
    for n in names {
        b = b.generator(n, 1);
    }
    let algebra = b.fundamental(&names.join("*")).build()?;
    let pi = (0..algebra.dim())
        .map(|i| PiClass {
            label: algebra.render_basis(i),
            element: algebra.basis_element(i),
        })
        .collect();
    VarietyModel::new(
        &format!("A({g})"),
        g,
        algebra.unit(),
        pi,
        Provenance::Abelian(g),
    )
}

pub fn product(v: &VarietyModel, w: &VarietyModel) -> Result<VarietyModel> {
    product_with_limit(v, w, DEFAULT_BASIS_LIMIT)
}

/// `V × W`: tensor algebra, Whitney product of total Chern classes, and all
/// products of designated classes. Clashing names on `W` are primed.
pub fn product_with_limit(
    v: &VarietyModel,
    w: &VarietyModel,
    limit: usize,
) -> Result<VarietyModel> {
    let algebra = tensor_with_limit(&v.algebra, &w.algebra, limit)?;
    let dw = w.algebra.dim();
    let nv = v.algebra.generators().len();
    let renamed: Vec<(String, String)> = w
        .algebra
        .generators()
        .iter()
        .zip(&algebra.generators()[nv..])
        .map(|(old, new)| (old.name.clone(), new.name.clone()))
        .collect();
    let left = |a: &AlgebraElement| a.reindex(&algebra, |i| i * dw);
    let right = |b: &AlgebraElement| b.reindex(&algebra, |j| j);
    let total = left(&v.total_chern).mul(&right(&w.total_chern))?;

    let v_atoms: BTreeSet<&str> = v
        .pi_classes
        .iter()
        .flat_map(|p| label_factors(&p.label))
        .collect();
    let rename_atom = |atom: &str| -> String {
        let mut name = renamed
            .iter()
            .find(|(old, _)| old == atom)
            .map(|(_, new)| new.clone())
            .unwrap_or_else(|| atom.to_string());
        while v_atoms.contains(name.as_str()) {
            name.push('\'');
        }
        name
    };
    let mut pi = Vec::with_capacity(v.pi_classes.len() * w.pi_classes.len());
    for pv in &v.pi_classes {
        for pw in &w.pi_classes {
            let wl = if pw.label == "1" {
                "1".to_string()
            } else {
                label_factors(&pw.label)
                    .into_iter()
                    .map(rename_atom)
                    .collect::<Vec<_>>()
                    .join("*")
            };
            pi.push(PiClass {
                label: join_labels(&pv.label, &wl),
                element: left(&pv.element).mul(&right(&pw.element))?,
            });
        }
    }
    VarietyModel::new(
        &format!("{} x {}", v.name, w.name),
        v.dim_c + w.dim_c,
        total,
        pi,
        Provenance::Product(
            Box::new(v.provenance.clone()),
            Box::new(w.provenance.clone()),
        ),
    )
}

/// A variety, its point blow-up, and the label correspondence between
/// their designated classes.
#[derive(Clone, Debug)]
pub struct BlowupPair {
    pub base: VarietyModel,
    pub blown: VarietyModel,
    pub pi_transport: Vec<(String, String)>,
}

impl BlowupPair {
    pub fn new(
        base: VarietyModel,
        blown: VarietyModel,
        pi_transport: Vec<(String, String)>,
    ) -> Result<Self> {
        if base.dim_c != blown.dim_c {
            return Err(Error::TransportError("dimensions differ".into()));
        }
        let mut from = HashSet::new();
        let mut to = HashSet::new();
        for (a, b) in &pi_transport {
            if base.pi_class(a).is_err() {
                return Err(Error::TransportError(format!("`{a}` is not a base label")));
            }
            if blown.pi_class(b).is_err() {
                return Err(Error::TransportError(format!(
                    "`{b}` is not a blown-up label"
                )));
            }
            if !from.insert(a.as_str()) || !to.insert(b.as_str()) {
                return Err(Error::TransportError(format!(
                    "`{a}` -> `{b}` repeats a label"
                )));
            }
        }
        if from.len() != base.pi_classes.len() || to.len() != blown.pi_classes.len() {
            return Err(Error::TransportError(
                "not every label is transported".into(),
            ));
        }
        Ok(BlowupPair {
            base,
            blown,
            pi_transport,
        })
    }
}

/// Blow-up of a surface at a point.
///
/// Adjoins `z` in degree 2 with `z² = -[pt]` and `z·a = 0` in positive
/// degrees; `c₁ ↦ c₁ + z`, `c₂ ↦ c₂ - z²`. Designated classes are carried
/// over under the same labels. Repeated blow-ups name the new classes
/// `z`, `z2`, `z3`, ...
pub fn blow_up_point(v: &VarietyModel) -> Result<BlowupPair> {
    if v.dim_c != 2 {
        return Err(Error::UnsupportedDimension {
            found: v.dim_c,
            reason: "point blow-ups are supported on surfaces only".into(),
        });
    }
    let z_name = std::iter::once("z".to_string())
        .chain((2..).map(|k| format!("z{k}")))
        .find(|n| v.algebra.generator_index(n).is_none())
        .unwrap();
    let algebra = point_blowup(&v.algebra, &z_name)?;
    let carry = |a: &AlgebraElement| a.reindex(&algebra, |i| i);
    let z = algebra.generator(&z_name)?;
    let total = carry(&v.total_chern).add(&z)?.sub(&z.mul(&z)?)?;
    let pi: Vec<PiClass> = v
        .pi_classes
        .iter()
        .map(|p| PiClass {
            label: p.label.clone(),
            element: carry(&p.element),
        })
        .collect();
    let transport = pi
        .iter()
        .map(|p| (p.label.clone(), p.label.clone()))
        .collect();
    let blown = VarietyModel::new(
        &format!("blowup({})", v.name),
        2,
        total,
        pi,
        Provenance::Blowup(Box::new(v.provenance.clone())),
    )?;
    BlowupPair::new(v.clone(), blown, transport)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceRow {
    pub base_label: String,
    pub blown_label: String,
    pub base_value: Rational,
    pub blown_value: Rational,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub genus: String,
    pub rows: Vec<InvarianceRow>,
    pub verdict: Verdict,
}

impl InvarianceReport {
    pub fn failing_labels(&self) -> Vec<&str> {
        self.rows
            .iter()
            .filter(|r| !r.equal)
            .map(|r| r.base_label.as_str())
            .collect()
    }
}

/// Compares every higher genus across a blow-up pair, exactly.
pub fn verify_blowup_invariance(pair: &BlowupPair, genus: &GenusSpec) -> Result<InvarianceReport> {
    let base_class = genus_class(&pair.base, genus)?;
    let blown_class = genus_class(&pair.blown, genus)?;
    let mut rows = Vec::with_capacity(pair.pi_transport.len());
    for (a, b) in &pair.pi_transport {
        let xa = pair
            .base
            .pi_class(a)
            .map_err(|_| Error::TransportError(format!("missing `{a}`")))?;
        let xb = pair
            .blown
            .pi_class(b)
            .map_err(|_| Error::TransportError(format!("missing `{b}`")))?;
        let base_value = base_class.mul(xa)?.pair_top()?;
        let blown_value = blown_class.mul(xb)?.pair_top()?;
        rows.push(InvarianceRow {
            base_label: a.clone(),
            blown_label: b.clone(),
            equal: base_value == blown_value,
            base_value,
            blown_value,
        });
    }
    let verdict = if rows.iter().all(|r| r.equal) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(InvarianceReport {
        genus: genus.name().to_string(),
        rows,
        verdict,
    })
}

/// A linear identification of the cohomology of one model with another,
/// given by the image of every basis class.
#[derive(Clone, Debug)]
pub struct Correspondence {
    images: Vec<AlgebraElement>,
}

impl Correspondence {
    /// The identity, for models sharing an algebra or an identical basis.
    pub fn identity(v: &VarietyModel, w: &VarietyModel) -> Result<Self> {
        let (a, b) = (&v.algebra, &w.algebra);
        if !a.same(b) && (a.basis() != b.basis() || a.generators() != b.generators()) {
            return Err(Error::CorrespondenceError(
                "algebras have different bases".into(),
            ));
        }
        Ok(Correspondence {
            images: (0..a.dim()).map(|i| b.basis_element(i)).collect(),
        })
    }

    pub fn from_images(images: Vec<AlgebraElement>) -> Self {
        Correspondence { images }
    }

    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let target = self
            .images
            .first()
            .map(|e| e.algebra().clone())
            .ok_or_else(|| Error::CorrespondenceError("empty correspondence".into()))?;
        x.coefficients()
            .iter()
            .try_fold(target.zero(), |acc, (i, q)| {
                let image = self.images.get(*i).ok_or_else(|| {
                    Error::CorrespondenceError("basis index without image".into())
                })?;
                acc.add(&image.scale(q))
            })
    }

    fn validate(&self, v: &VarietyModel, w: &VarietyModel) -> Result<()> {
        let src = &v.algebra;
        if self.images.len() != src.dim() {
            return Err(Error::CorrespondenceError(format!(
                "{} images for {} basis classes",
                self.images.len(),
                src.dim()
            )));
        }
        for (i, image) in self.images.iter().enumerate() {
            if !image.algebra().same(&w.algebra) {
                return Err(Error::CorrespondenceError(
                    "image outside the target algebra".into(),
                ));
            }
            match image.homogeneous_degree() {
                Some(d) if d == src.degree_of(i) => {}
                _ => {
                    return Err(Error::CorrespondenceError(format!(
                        "image of {} is not a nonzero class of the same degree",
                        src.render_basis(i)
                    )))
                }
            }
        }
        if self.images[0] != w.algebra.unit() {
            return Err(Error::CorrespondenceError("unit is not preserved".into()));
        }
        for i in 0..src.dim() {
            for j in i..src.dim() {
                let lhs = self.apply(&src.basis_element(i).mul(&src.basis_element(j))?)?;
                let rhs = self.images[i].mul(&self.images[j])?;
                if lhs != rhs {
                    return Err(Error::CorrespondenceError(format!(
                        "products of {} and {} are not preserved",
                        src.render_basis(i),
                        src.render_basis(j)
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentAgreement {
    pub index: u32,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HigherGenusAgreement {
    pub label: String,
    pub left: Rational,
    pub right: Rational,
    pub agree: bool,
}

/// Equalities the dimension-≤3 argument draws from computed ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedEqualities {
    /// Degree-2 Todd components agree, and `T₁ = c₁/2`.
    pub c1_from_todd: bool,
    /// `c₁` and `p₁` agree, and `2c₂ = c₁² - p₁`.
    pub c2_from_pontrjagin: bool,
    /// Dimension 3, equal Euler characteristics, and `c₃` is the Euler class
    /// on both sides.
    pub c3_from_euler: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChernComparison {
    pub dim_c: u32,
    pub chern: Vec<ComponentAgreement>,
    pub pontrjagin: Vec<ComponentAgreement>,
    pub todd: Vec<ComponentAgreement>,
    pub higher_todd: Vec<HigherGenusAgreement>,
    pub euler: (i64, i64),
    pub derived: DerivedEqualities,
}

impl ChernComparison {
    pub fn chern_agrees(&self, i: u32) -> bool {
        self.chern.iter().any(|c| c.index == i && c.agree)
    }
}

/// Compares Chern, Pontrjagin and Todd components and higher Todd genera of
/// two models under a correspondence. Reports computed equalities only.
pub fn compare_chern_reports(
    v: &VarietyModel,
    w: &VarietyModel,
    correspondence: &Correspondence,
) -> Result<ChernComparison> {
    if v.dim_c != w.dim_c {
        return Err(Error::CorrespondenceError("dimensions differ".into()));
    }
    correspondence.validate(v, w)?;
    let n = v.dim_c;
    let map = |x: &AlgebraElement| correspondence.apply(x);
    let chern = (1..=n)
        .map(|i| {
            Ok(ComponentAgreement {
                index: i,
                agree: map(&v.chern_class(i))? == w.chern_class(i),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pontrjagin = (1..=n / 2)
        .map(|i| {
            Ok(ComponentAgreement {
                index: i,
                agree: map(&v.pontrjagin_class(i)?)? == w.pontrjagin_class(i)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let todd_v = genus_class(v, &GenusSpec::todd())?;
    let todd_w = genus_class(w, &GenusSpec::todd())?;
    let todd = (1..=n)
        .map(|i| {
            Ok(ComponentAgreement {
                index: i,
                agree: map(&todd_v.component(2 * i as i64)?)? == todd_w.component(2 * i as i64)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let higher_todd = v
        .pi_classes
        .iter()
        .map(|p| {
            let left = todd_v.mul(&p.element)?.pair_top()?;
            let right = todd_w.mul(&map(&p.element)?)?.pair_top()?;
            Ok(HigherGenusAgreement {
                label: p.label.clone(),
                agree: left == right,
                left,
                right,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let euler = (v.euler_characteristic(), w.euler_characteristic());
    let agrees = |list: &[ComponentAgreement], i: u32| list.iter().any(|c| c.index == i && c.agree);
    let derived = DerivedEqualities {
        c1_from_todd: n >= 1 && agrees(&todd, 1),
        c2_from_pontrjagin: n >= 2 && agrees(&chern, 1) && agrees(&pontrjagin, 1),
        c3_from_euler: n == 3
            && euler.0 == euler.1
            && v.satisfies_euler_identity()
            && w.satisfies_euler_identity(),
    };
    Ok(ChernComparison {
        dim_c: n,
        chern,
        pontrjagin,
        todd,
        higher_todd,
        euler,
        derived,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genera::{char_number, genus_number, higher_genus};
    use crate::rational::int;

    fn e_times_p1() -> VarietyModel {
        product(&abelian_variety(1), &projective_space_named(1, "y")).unwrap()
    }

    #[test]
    fn projective_spaces() {
        let p1 = projective_space(1);
        assert_eq!(
            p1.chern_class(1),
            p1.algebra().generator("h").unwrap().scale(&int(2))
        );
        assert_eq!(genus_number(&p1, &GenusSpec::todd()).unwrap(), int(1));
        let p2 = projective_space(2);
        assert_eq!(p2.euler_characteristic(), 3);
        assert_eq!(
            p2.pontrjagin_class(1).unwrap(),
            p2.algebra().monomial_element("h^2").unwrap().scale(&int(3))
        );
        assert_eq!(genus_number(&p2, &GenusSpec::l_genus()).unwrap(), int(1));
        let pt = projective_space(0);
        assert_eq!(pt.algebra().dim(), 1);
        assert_eq!(genus_number(&pt, &GenusSpec::todd()).unwrap(), int(1));
        for n in 0..5 {
            assert!(projective_space(n).satisfies_euler_identity());
        }
    }

    #[test]
    fn abelian_varieties() {
        let e = abelian_variety(1);
        assert!(e.chern_class(1).is_zero());
        assert_eq!(genus_number(&e, &GenusSpec::todd()).unwrap(), int(0));
        assert_eq!(
            higher_genus(&e, &GenusSpec::todd(), "x1*x2").unwrap(),
            int(1)
        );
        assert_eq!(e.pi_labels(), vec!["1", "x1", "x2", "x1*x2"]);
        let a2 = abelian_variety(2);
        assert_eq!(a2.algebra().dim(), 16);
        assert_eq!(a2.euler_characteristic(), 0);
        assert!(a2.satisfies_euler_identity());
        let err = abelian_variety_named(&(1..=8).map(|i| format!("x{i}")).collect::<Vec<_>>(), 100)
            .unwrap_err();
        assert_eq!(err.kind(), "TooLarge");
    }

    #[test]
    fn product_of_elliptic_curve_and_line() {
        let v = e_times_p1();
        let y = v.algebra().generator("y").unwrap();
        assert_eq!(v.chern_class(1), y.scale(&int(2)));
        assert!(v.chern_class(2).is_zero());
        assert_eq!(v.algebra().dim(), 8);
        assert_eq!(v.pi_labels(), vec!["1", "x1", "x2", "x1*x2"]);
        assert_eq!(v.provenance().to_string(), "A(1) x P(1)");
    }

    #[test]
    fn product_with_point_is_neutral() {
        let p2 = projective_space(2);
        let v = product(&p2, &projective_space(0)).unwrap();
        assert_eq!(v.algebra().dim(), 3);
        assert_eq!(char_number(&v, "c1^2").unwrap(), int(9));
        assert_eq!(char_number(&v, "c2").unwrap(), int(3));
    }

    #[test]
    fn products_rename_clashing_generators() {
        let ee = product(&abelian_variety(1), &abelian_variety(1)).unwrap();
        let names: Vec<&str> = ee
            .algebra()
            .generators()
            .iter()
            .map(|g| g.name.as_str())
            .collect();
        assert_eq!(names, vec!["x1", "x2", "x1'", "x2'"]);
        assert_eq!(ee.pi_classes().len(), 16);
        assert_eq!(
            higher_genus(&ee, &GenusSpec::todd(), "x1*x2*x1'*x2'").unwrap(),
            int(1)
        );
    }

    #[test]
    fn blowup_of_elliptic_surface() {
        let pair = blow_up_point(&e_times_p1()).unwrap();
        let b = &pair.blown;
        let alg = b.algebra();
        let y = alg.generator("y").unwrap();
        let z = alg.generator("z").unwrap();
        assert_eq!(b.chern_class(1), y.scale(&int(2)).add(&z).unwrap());
        assert_eq!(b.chern_class(2), z.mul(&z).unwrap().neg());
        assert_eq!(b.euler_characteristic(), 1);
        assert_eq!(genus_number(b, &GenusSpec::l_genus()).unwrap(), int(-1));
        assert!(b.satisfies_euler_identity());
        assert_eq!(b.provenance().to_string(), "blowup(A(1) x P(1))");
    }

    #[test]
    fn blowup_of_projective_plane() {
        let b = blow_up_point(&projective_space(2)).unwrap().blown;
        assert_eq!(b.euler_characteristic(), 4);
        assert_eq!(char_number(&b, "c1^2").unwrap(), int(8));
        assert_eq!(genus_number(&b, &GenusSpec::todd()).unwrap(), int(1));
    }

    #[test]
    fn blowup_requires_a_surface() {
        let err = blow_up_point(&projective_space(3)).unwrap_err();
        assert_eq!(err.kind(), "UnsupportedDimension");
        let err = blow_up_point(&projective_space(1)).unwrap_err();
        assert_eq!(err.kind(), "UnsupportedDimension");
    }

    #[test]
    fn iterated_blowups_add_independent_classes() {
        let once = blow_up_point(&e_times_p1()).unwrap().blown;
        let twice = blow_up_point(&once).unwrap();
        let alg = twice.blown.algebra();
        assert!(alg.generator_index("z2").is_some());
        assert_eq!(twice.blown.euler_characteristic(), 2);
        let z = alg.generator("z").unwrap();
        let z2 = alg.generator("z2").unwrap();
        assert!(z.mul(&z2).unwrap().is_zero());
        let report = verify_blowup_invariance(&twice, &GenusSpec::todd()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
    }

    #[test]
    fn invariance_report_and_adversarial_pairs() {
        let pair = blow_up_point(&e_times_p1()).unwrap();
        let report = verify_blowup_invariance(&pair, &GenusSpec::todd()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        let unit_row = report.rows.iter().find(|r| r.base_label == "1").unwrap();
        assert_eq!(unit_row.base_value, int(0));
        assert_eq!(unit_row.blown_value, int(0));

        let alg = pair.blown.algebra().clone();
        let y = alg.generator("y").unwrap();
        let z = alg.generator("z").unwrap();
        let c2 = z.mul(&z).unwrap().neg();
        // c1 = 2y: the Todd genus moves to 1/12.
        let wrong = alg.unit().add(&y.scale(&int(2))).unwrap().add(&c2).unwrap();
        let bad = BlowupPair::new(
            pair.base.clone(),
            pair.blown.with_total_chern(wrong).unwrap(),
            pair.pi_transport.clone(),
        )
        .unwrap();
        let report = verify_blowup_invariance(&bad, &GenusSpec::todd()).unwrap();
        assert_eq!(report.verdict, Verdict::Fail);
        assert_eq!(report.failing_labels(), vec!["1"]);
        // c1 = z: the degree-2 higher Todd genus is lost.
        let wrong = alg.unit().add(&z).unwrap().add(&c2).unwrap();
        let bad = BlowupPair::new(
            pair.base.clone(),
            pair.blown.with_total_chern(wrong).unwrap(),
            pair.pi_transport.clone(),
        )
        .unwrap();
        let report = verify_blowup_invariance(&bad, &GenusSpec::todd()).unwrap();
        assert_eq!(report.verdict, Verdict::Fail);
        assert!(report.failing_labels().contains(&"x1*x2"));
    }

    #[test]
    fn transport_must_be_a_bijection() {
        let pair = blow_up_point(&e_times_p1()).unwrap();
        let mut t = pair.pi_transport.clone();
        t.pop();
        assert_eq!(
            BlowupPair::new(pair.base.clone(), pair.blown.clone(), t)
                .unwrap_err()
                .kind(),
            "TransportError"
        );
        let mut t = pair.pi_transport.clone();
        t[1].1 = t[2].1.clone();
        assert_eq!(
            BlowupPair::new(pair.base.clone(), pair.blown.clone(), t)
                .unwrap_err()
                .kind(),
            "TransportError"
        );
    }

    #[test]
    fn relabelled_pi_classes() {
        let v = e_times_p1().relabel_pi(|a| a.replace('x', "u")).unwrap();
        assert_eq!(v.pi_labels(), vec!["1", "u1", "u2", "u1*u2"]);
        assert_eq!(
            higher_genus(&v, &GenusSpec::todd(), "u1*u2").unwrap(),
            int(1)
        );
    }

    #[test]
    fn chern_comparison_identity() {
        let v = product(&projective_space(1), &projective_space(2)).unwrap();
        let report =
            compare_chern_reports(&v, &v, &Correspondence::identity(&v, &v).unwrap()).unwrap();
        assert!(report.chern.iter().all(|c| c.agree));
        assert!(report.todd.iter().all(|c| c.agree));
        assert!(
            report.derived.c1_from_todd
                && report.derived.c2_from_pontrjagin
                && report.derived.c3_from_euler
        );
    }

    #[test]
    fn chern_comparison_flags_c3() {
        let p3 = projective_space(3);
        let alg = p3.algebra().clone();
        let h3 = alg.monomial_element("h^3").unwrap();
        let fake = p3
            .with_total_chern(p3.total_chern().add(&h3).unwrap())
            .unwrap();
        assert!(!fake.satisfies_euler_identity());
        let report =
            compare_chern_reports(&p3, &fake, &Correspondence::identity(&p3, &fake).unwrap())
                .unwrap();
        assert!(report.todd.iter().all(|c| c.agree));
        assert!(report.chern_agrees(1) && report.chern_agrees(2));
        assert!(!report.chern_agrees(3));
        assert!(report.derived.c2_from_pontrjagin);
    }

    #[test]
    fn correspondence_must_be_a_ring_map() {
        let v = product(&projective_space(1), &projective_space_named(1, "k")).unwrap();
        let alg = v.algebra().clone();
        // Send h to 2h, keep k: h*k = top is not mapped to 2 top.
        let images: Vec<AlgebraElement> = (0..alg.dim())
            .map(|i| {
                if alg.render_basis(i) == "h" {
                    alg.basis_element(i).scale(&int(2))
                } else {
                    alg.basis_element(i)
                }
            })
            .collect();
        let err = compare_chern_reports(&v, &v, &Correspondence::from_images(images)).unwrap_err();
        assert_eq!(err.kind(), "CorrespondenceError");
    }
}

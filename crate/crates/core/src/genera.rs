//! Multiplicative sequences: Todd, L and Â classes, Chern to Pontrjagin
//! conversion, and genus / characteristic-number evaluation.
//!
//! A genus is given by a characteristic series `Q(x)` with `Q(0) = 1`. The
//! class `∏ Q(x_i)` over formal roots is computed without splitting: write
//! `log Q = Σ a_m x^m`, express the power sums `s_m = Σ x_i^m` through the
//! total class with Newton's identities, and exponentiate `Σ a_m s_m` inside
//! the cohomology algebra.

use num::{BigInt, One, Zero};

use crate::algebra::{AlgebraBuilder, AlgebraElement, GradedAlgebra};
use crate::error::{Error, Result};
use crate::expr::{self, PolyExpr};
use crate::rational::Rational;
use crate::series::{ahat_series, l_series, series_log, todd_series, PowerSeries};
use crate::varieties::VarietyModel;

/// Which total class a genus is evaluated on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariableKind {
    /// Roots `x_i` of the total Chern class; `c_i` has degree `2i`.
    Chern,
    /// Roots `x_i^2` of the total Pontrjagin class; `p_i` has degree `4i`.
    Pontrjagin,
}

#[derive(Clone, Debug, PartialEq)]
enum SeriesSource {
    Todd,
    L,
    AHat,
    Fixed(PowerSeries),
}

/// A characteristic power series in the root variable `x`, plus the total
/// class it is evaluated on. Pontrjagin-type series must be even.
#[derive(Clone, Debug, PartialEq)]
pub struct GenusSpec {
    name: String,
    kind: VariableKind,
    source: SeriesSource,
    order_override: Option<usize>,
}

impl GenusSpec {
    pub fn todd() -> Self {
        GenusSpec {
            name: "todd".into(),
            kind: VariableKind::Chern,
            source: SeriesSource::Todd,
            order_override: None,
        }
    }

    pub fn l_genus() -> Self {
        GenusSpec {
            name: "l".into(),
            kind: VariableKind::Pontrjagin,
            source: SeriesSource::L,
            order_override: None,
        }
    }

    pub fn ahat() -> Self {
        GenusSpec {
            name: "ahat".into(),
            kind: VariableKind::Pontrjagin,
            source: SeriesSource::AHat,
            order_override: None,
        }
    }

    /// A fixed series. Requests beyond its order see zero coefficients.
    pub fn custom(name: &str, series: PowerSeries, kind: VariableKind) -> Self {
        GenusSpec {
            name: name.into(),
            kind,
            source: SeriesSource::Fixed(series),
            order_override: None,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "todd" => Some(Self::todd()),
            "l" | "L" => Some(Self::l_genus()),
            "ahat" | "Ahat" => Some(Self::ahat()),
            _ => None,
        }
    }

    /// Truncates the series at `order` (in the evaluation variable) instead
    /// of the weight being computed.
    pub fn with_truncation(mut self, order: usize) -> Self {
        self.order_override = Some(order);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VariableKind {
        self.kind
    }

    /// The series in the root variable `x`, to order `order`.
    pub fn series(&self, order: usize) -> PowerSeries {
        match &self.source {
            SeriesSource::Todd => todd_series(order),
            SeriesSource::L => l_series(order),
            SeriesSource::AHat => ahat_series(order),
            SeriesSource::Fixed(s) => s.with_order(order),
        }
    }

    /// The series in the evaluation variable (`x` or `x^2`), truncated at
    /// `weight` unless an override is set.
    fn evaluation_series(&self, weight: usize) -> Result<PowerSeries> {
        let order = self.order_override.unwrap_or(weight);
        match self.kind {
            VariableKind::Chern => Ok(self.series(order)),
            VariableKind::Pontrjagin => self.series(2 * order).even_part_in_square(),
        }
    }
}

fn step(kind: VariableKind) -> u32 {
    match kind {
        VariableKind::Chern => 2,
        VariableKind::Pontrjagin => 4,
    }
}

/// Checks `total = 1 + k_1 + k_2 + ...` with `k_i` in degree `step·i`.
fn check_total(total: &AlgebraElement, step: u32) -> Result<()> {
    let alg = total.algebra();
    if total.component(0)? != alg.unit() {
        return Err(Error::NotATotalClass("constant term is not 1".into()));
    }
    if let Some((d, _)) = total.components().into_iter().find(|(d, _)| d % step != 0) {
        return Err(Error::NotATotalClass(format!(
            "unexpected component in degree {d}"
        )));
    }
    Ok(())
}

/// Power sums `s_1..s_count` of the formal roots of `1 + k_1 + k_2 + ...`,
/// via Newton's identities `s_m = Σ_{i<m} (-1)^{i-1} k_i s_{m-i} + (-1)^{m-1} m k_m`.
pub fn power_sums(
    classes: &[AlgebraElement],
    algebra: &GradedAlgebra,
    count: usize,
) -> Result<Vec<AlgebraElement>> {
    let k = |i: usize| {
        classes
            .get(i - 1)
            .cloned()
            .unwrap_or_else(|| algebra.zero())
    };
    let mut sums: Vec<AlgebraElement> = Vec::with_capacity(count);
    for m in 1..=count {
        let mut s = k(m).scale(&Rational::from_integer(BigInt::from(m)));
        if m % 2 == 0 {
            s = s.neg();
        }
        for i in 1..m {
            let term = k(i).mul(&sums[m - i - 1])?;
            s = if i % 2 == 1 {
                s.add(&term)?
            } else {
                s.sub(&term)?
            };
        }
        sums.push(s);
    }
    Ok(sums)
}

/// `Q[c_1, ..., c_n]` truncated above degree `2n`.
pub fn universal_chern_ring(n: u32) -> GradedAlgebra {
    let mut b = AlgebraBuilder::new(2 * n);
    for i in 1..=n {
        b = b.generator(&format!("c{i}"), 2 * i);
    }
    b.build().expect("polynomial presentation is valid")
}

/// `Q[p_1, ..., p_m]` truncated above degree `4m`.
pub fn universal_pontrjagin_ring(m: u32) -> GradedAlgebra {
    let mut b = AlgebraBuilder::new(4 * m);
    for i in 1..=m {
        b = b.generator(&format!("p{i}"), 4 * i);
    }
    b.build().expect("polynomial presentation is valid")
}

/// `1 + g_1 + g_2 + ...` for the generators of a universal ring.
pub fn universal_total(ring: &GradedAlgebra) -> AlgebraElement {
    ring.generators().iter().fold(ring.unit(), |acc, g| {
        acc.add(&ring.generator(&g.name).unwrap()).unwrap()
    })
}

/// Power sums `s_1..s_n` in `c_1..c_n` inside the universal Chern ring.
pub fn newton_power_sums(n: u32) -> Vec<AlgebraElement> {
    let ring = universal_chern_ring(n);
    let classes: Vec<AlgebraElement> = (1..=n)
        .map(|i| ring.generator(&format!("c{i}")).unwrap())
        .collect();
    power_sums(&classes, &ring, n as usize).expect("single algebra")
}

/// `∏ Q(x_i)` rewritten in the components of `total`, up to weight `weight`.
pub fn multiplicative_class(
    genus: &GenusSpec,
    total: &AlgebraElement,
    weight: u32,
) -> Result<AlgebraElement> {
    let alg = total.algebra();
    let step = step(genus.kind);
    check_total(total, step)?;
    let q = genus.evaluation_series(weight as usize)?;
    let log = series_log(&q)?;
    let top = alg.top_degree();
    let classes: Vec<AlgebraElement> = (1..=weight)
        .map(|i| {
            if step * i <= top {
                total.component((step * i) as i64)
            } else {
                Ok(alg.zero())
            }
        })
        .collect::<Result<_>>()?;
    let sums = power_sums(&classes, alg, weight as usize)?;
    let mut exponent = alg.zero();
    for (m, s) in sums.iter().enumerate() {
        let a = log.coeff(m + 1);
        if !a.is_zero() {
            exponent = exponent.add(&s.scale(&a))?;
        }
    }
    // exp of a class of positive weight: terms past `weight` vanish by degree.
    let mut result = alg.unit();
    let mut power = alg.unit();
    let mut factorial = Rational::one();
    for j in 1..=weight {
        power = power.mul(&exponent)?;
        if power.is_zero() {
            break;
        }
        factorial *= Rational::from_integer(BigInt::from(j));
        result = result.add(&power.scale(&factorial.recip()))?;
    }
    Ok(result)
}

/// Total Pontrjagin class from a total Chern class, using
/// `(Σ (-1)^i c_i)(Σ c_i) = Σ (-1)^k p_k`.
pub fn chern_to_pontrjagin(total_chern: &AlgebraElement, n: u32) -> Result<AlgebraElement> {
    check_total(total_chern, 2)?;
    let alg = total_chern.algebra();
    let top = alg.top_degree();
    let mut conjugate = alg.zero();
    for (d, comp) in total_chern.components() {
        if d / 2 > n {
            continue;
        }
        conjugate = conjugate.add(&if (d / 2) % 2 == 1 { comp.neg() } else { comp })?;
    }
    let truncated = total_chern
        .components()
        .into_iter()
        .filter(|(d, _)| d / 2 <= n)
        .try_fold(alg.zero(), |acc, (_, c)| acc.add(&c))?;
    let product = conjugate.mul(&truncated)?;
    let mut total = alg.unit();
    let mut k = 1;
    while 4 * k <= top {
        let comp = product.component((4 * k) as i64)?;
        total = total.add(&if k % 2 == 1 { comp.neg() } else { comp })?;
        k += 1;
    }
    Ok(total)
}

/// The characteristic class of `genus` for `variety`: the Todd class for
/// Chern-type genera, the L or Â class of the derived Pontrjagin class
/// otherwise.
pub fn genus_class(variety: &VarietyModel, genus: &GenusSpec) -> Result<AlgebraElement> {
    let n = variety.dim_c();
    match genus.kind {
        VariableKind::Chern => multiplicative_class(genus, variety.total_chern(), n),
        VariableKind::Pontrjagin => {
            let p = chern_to_pontrjagin(variety.total_chern(), n)?;
            multiplicative_class(genus, &p, n / 2)
        }
    }
}

pub fn genus_number(variety: &VarietyModel, genus: &GenusSpec) -> Result<Rational> {
    genus_class(variety, genus)?.pair_top()
}

/// `⟨G(V) ∪ x, [V]⟩` for the designated pi-class labelled `label`.
pub fn higher_genus(variety: &VarietyModel, genus: &GenusSpec, label: &str) -> Result<Rational> {
    let x = variety.pi_class(label)?;
    higher_genus_of(variety, genus, x)
}

/// `⟨G(V) ∪ x, [V]⟩` for an arbitrary class `x` of the variety.
pub fn higher_genus_of(
    variety: &VarietyModel,
    genus: &GenusSpec,
    x: &AlgebraElement,
) -> Result<Rational> {
    genus_class(variety, genus)?.mul(x)?.pair_top()
}

/// Evaluates a polynomial in `c_i`, `p_i` and pi-class labels on the variety
/// and pairs it with the fundamental class.
pub fn char_number(variety: &VarietyModel, expression: &str) -> Result<Rational> {
    let parsed = expr::parse(expression)?;
    char_number_of(variety, &parsed)
}

pub fn char_number_of(variety: &VarietyModel, expression: &PolyExpr) -> Result<Rational> {
    let value = evaluate_on(variety, expression)?;
    value.pair_top()
}

/// Evaluates a characteristic-class polynomial as a class of the variety.
pub fn evaluate_on(variety: &VarietyModel, expression: &PolyExpr) -> Result<AlgebraElement> {
    let alg = variety.algebra().clone();
    let n = variety.dim_c();
    let mut pontrjagin: Option<AlgebraElement> = None;
    expr::evaluate(expression, &alg, &mut |name: &str| {
        if let Some(i) = indexed(name, 'c') {
            if i > n {
                return Ok(alg.zero());
            }
            return variety.total_chern().component(2 * i as i64);
        }
        if let Some(i) = indexed(name, 'p') {
            if 4 * i > alg.top_degree() {
                return Ok(alg.zero());
            }
            if pontrjagin.is_none() {
                pontrjagin = Some(chern_to_pontrjagin(variety.total_chern(), n)?);
            }
            return pontrjagin.as_ref().unwrap().component(4 * i as i64);
        }
        variety.pi_class(name).cloned()
    })
}

fn indexed(name: &str, prefix: char) -> Option<u32> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};
    use crate::varieties::{
        abelian_variety, blow_up_point, product, projective_space, projective_space_named,
    };

    fn c(ring: &GradedAlgebra, text: &str) -> AlgebraElement {
        ring.monomial_element(text).unwrap()
    }

    #[test]
    fn newton_identities_low_degree() {
        let sums = newton_power_sums(3);
        let ring = sums[0].algebra().clone();
        assert_eq!(sums[0], c(&ring, "c1"));
        let s2 = c(&ring, "c1^2")
            .sub(&c(&ring, "c2").scale(&int(2)))
            .unwrap();
        assert_eq!(sums[1], s2);
        let s3 = c(&ring, "c1^3")
            .sub(&c(&ring, "c1*c2").scale(&int(3)))
            .unwrap()
            .add(&c(&ring, "c3").scale(&int(3)))
            .unwrap();
        assert_eq!(sums[2], s3);
    }

    #[test]
    fn todd_class_in_weight_two() {
        let ring = universal_chern_ring(2);
        let total = universal_total(&ring);
        let todd = multiplicative_class(&GenusSpec::todd(), &total, 2).unwrap();
        let expected = ring
            .unit()
            .add(&c(&ring, "c1").scale(&q(1, 2)))
            .unwrap()
            .add(
                &c(&ring, "c1^2")
                    .add(&c(&ring, "c2"))
                    .unwrap()
                    .scale(&q(1, 12)),
            )
            .unwrap();
        assert_eq!(todd, expected);
        assert_eq!(todd.component(2).unwrap(), c(&ring, "c1").scale(&q(1, 2)));
    }

    #[test]
    fn l_class_in_weight_one() {
        let ring = universal_pontrjagin_ring(1);
        let total = universal_total(&ring);
        let l = multiplicative_class(&GenusSpec::l_genus(), &total, 1).unwrap();
        assert_eq!(l, ring.unit().add(&c(&ring, "p1").scale(&q(1, 3))).unwrap());
    }

    #[test]
    fn constant_series_gives_unit() {
        let ring = universal_chern_ring(3);
        let total = universal_total(&ring);
        let one = GenusSpec::custom("one", PowerSeries::one(0), VariableKind::Chern);
        assert_eq!(multiplicative_class(&one, &total, 3).unwrap(), ring.unit());
    }

    #[test]
    fn rejects_non_total_classes() {
        let ring = universal_chern_ring(2);
        let bad = c(&ring, "c1");
        let err = multiplicative_class(&GenusSpec::todd(), &bad, 2).unwrap_err();
        assert_eq!(err.kind(), "NotATotalClass");
        assert_eq!(
            chern_to_pontrjagin(&bad, 2).unwrap_err().kind(),
            "NotATotalClass"
        );
    }

    #[test]
    fn pontrjagin_from_chern() {
        let ring = universal_chern_ring(2);
        let p = chern_to_pontrjagin(&universal_total(&ring), 2).unwrap();
        let p1 = c(&ring, "c1^2")
            .sub(&c(&ring, "c2").scale(&int(2)))
            .unwrap();
        assert_eq!(p, ring.unit().add(&p1).unwrap());
        assert_eq!(chern_to_pontrjagin(&ring.unit(), 2).unwrap(), ring.unit());

        let p2 = projective_space(2);
        let pp = chern_to_pontrjagin(p2.total_chern(), 2).unwrap();
        assert_eq!(
            pp.component(4).unwrap(),
            p2.algebra().monomial_element("h^2").unwrap().scale(&int(3))
        );
    }

    #[test]
    fn genera_of_model_varieties() {
        let e = abelian_variety(1);
        let ep1 = product(&e, &projective_space_named(1, "y")).unwrap();
        assert_eq!(genus_number(&ep1, &GenusSpec::todd()).unwrap(), int(0));
        let p1p1 = product(&projective_space(1), &projective_space(1)).unwrap();
        assert_eq!(genus_number(&p1p1, &GenusSpec::todd()).unwrap(), int(1));
        let blown = blow_up_point(&ep1).unwrap().blown;
        assert_eq!(
            genus_number(&blown, &GenusSpec::l_genus()).unwrap(),
            int(-1)
        );
        assert_eq!(
            genus_number(&projective_space(2), &GenusSpec::l_genus()).unwrap(),
            int(1)
        );
        assert_eq!(
            genus_number(&projective_space(2), &GenusSpec::ahat()).unwrap(),
            q(-1, 8)
        );
        assert_eq!(
            genus_number(&projective_space(0), &GenusSpec::todd()).unwrap(),
            int(1)
        );
    }

    #[test]
    fn higher_todd_genera() {
        let e = abelian_variety(1);
        let ep1 = product(&e, &projective_space_named(1, "y")).unwrap();
        assert_eq!(
            higher_genus(&ep1, &GenusSpec::todd(), "x1*x2").unwrap(),
            int(1)
        );
        assert_eq!(
            higher_genus(&ep1, &GenusSpec::todd(), "1").unwrap(),
            genus_number(&ep1, &GenusSpec::todd()).unwrap()
        );
        assert_eq!(
            higher_genus(&e, &GenusSpec::todd(), "x1*x2").unwrap(),
            int(1)
        );
        assert_eq!(
            higher_genus(&ep1, &GenusSpec::todd(), "x9")
                .unwrap_err()
                .kind(),
            "UnknownPiClass"
        );
    }

    #[test]
    fn characteristic_numbers() {
        let ep1 = product(&abelian_variety(1), &projective_space_named(1, "y")).unwrap();
        let blown = blow_up_point(&ep1).unwrap().blown;
        assert_eq!(char_number(&blown, "c1*x1*x2").unwrap(), int(2));
        assert_eq!(char_number(&blown, "c1^2").unwrap(), int(-1));
        assert_eq!(char_number(&blown, "c2").unwrap(), int(1));
        assert_eq!(char_number(&ep1, "c2").unwrap(), int(0));
        assert_eq!(char_number(&blown, "(c1^2 + c2)/12").unwrap(), int(0));
        assert_eq!(char_number(&blown, "p1").unwrap(), int(-3));
        // Wrong weight pairs to zero rather than failing.
        assert_eq!(char_number(&blown, "c1").unwrap(), int(0));
        assert_eq!(
            char_number(&blown, "c1*w").unwrap_err().kind(),
            "UnknownPiClass"
        );
        assert_eq!(char_number(&blown, "c1*").unwrap_err().kind(), "ExprError");
    }

    #[test]
    fn truncation_override_drops_high_weights() {
        let p2 = projective_space(2);
        let full = genus_number(&p2, &GenusSpec::todd()).unwrap();
        assert_eq!(full, int(1));
        // With the series cut at x^1 only c1/2 survives in log Q, so the
        // class is exp(c1/2) = 1 + c1/2 + c1^2/8 and the genus is 9/8.
        let cut = genus_number(&p2, &GenusSpec::todd().with_truncation(1)).unwrap();
        assert_eq!(cut, q(9, 8));
    }
}

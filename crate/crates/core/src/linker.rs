//! Solutions of the link equation `L R = S` for isometries generated by a
//! simple bivector.
//!
//! For `R² = S²` with `(R - S)² ≠ 0` every link is selected by a preferred
//! ray `P` and is generated by `(μP) ∧ (R - S)`. Different rays give
//! different links unless `P` lies in the plane of `R` and `S`, where all
//! of them collapse to the single planar link generated by `S ∧ R / S²`.

use crate::error::{Error, Result};
use crate::isometry::{binomial, Isometry};
use crate::metric::{Endomorphism, MetricSpace, SimpleBivector, Vector};

/// Initial vector `R`, final vector `S` and an optional preferred vector `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkProblem {
    initial: Vector,
    target: Vector,
    preferred: Option<Vector>,
}

impl LinkProblem {
    /// Fails with [`Error::NotIsomagnitude`] unless `R² = S²` within
    /// `tol.rel`.
    pub fn new(
        space: &MetricSpace,
        initial: Vector,
        target: Vector,
        preferred: Option<Vector>,
    ) -> Result<Self> {
        space.check(&initial)?;
        space.check(&target)?;
        if let Some(p) = &preferred {
            space.check(p)?;
        }
        check_isomagnitude(space, &initial, &target)?;
        Ok(Self {
            initial,
            target,
            preferred,
        })
    }

    pub fn initial(&self) -> &Vector {
        &self.initial
    }

    pub fn target(&self) -> &Vector {
        &self.target
    }

    pub fn preferred(&self) -> Option<&Vector> {
        self.preferred.as_ref()
    }

    pub fn with_preferred(&self, p: Vector) -> Self {
        Self {
            preferred: Some(p),
            ..self.clone()
        }
    }

    fn require_preferred(&self) -> Result<&Vector> {
        self.preferred.as_ref().ok_or(Error::MissingPreferred)
    }

    /// `max(‖P‖, ‖R‖, ‖S‖)` in the max-component norm.
    fn scale(&self) -> f64 {
        let mut s = self.initial.max_abs().max(self.target.max_abs());
        if let Some(p) = &self.preferred {
            s = s.max(p.max_abs());
        }
        s
    }

    fn coincident(&self, space: &MetricSpace) -> bool {
        self.initial.distance(&self.target) <= space.tolerance().abs * self.scale().max(1.0)
    }
}

fn check_isomagnitude(space: &MetricSpace, r: &Vector, s: &Vector) -> Result<()> {
    let (r2, s2) = (space.square(r), space.square(s));
    if (r2 - s2).abs() > space.tolerance().rel * 1.0_f64.max(r2.abs()).max(s2.abs()) {
        return Err(Error::NotIsomagnitude {
            initial: r2,
            final_: s2,
        });
    }
    Ok(())
}

/// Which assumptions of the general link theorem a problem satisfies.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LinkAdmissibility {
    /// `(R - S)² ≠ 0`.
    pub generic: bool,
    /// `P·(R + S) ≠ 0` and `P ∧ (R - S) ≠ 0`.
    pub p_transversal: bool,
    /// `P²(R - S)² + 4(P·R)(P·S)`, reported even when it vanishes.
    pub denominator: f64,
    /// `P ∧ R ∧ S = 0`.
    pub planar: bool,
}

pub fn admissibility(space: &MetricSpace, problem: &LinkProblem) -> Result<LinkAdmissibility> {
    let p = problem.require_preferred()?;
    let (r, s) = (problem.initial(), problem.target());
    let tol = space.tolerance();
    let scale = problem.scale();
    let d = r - s;
    let sum = r + s;

    let generic = space.square(&d).abs() > tol.abs * scale * scale;
    let wedge = SimpleBivector::new(p.clone(), d.clone())?.components().max_abs();
    let p_transversal =
        space.dot(p, &sum).abs() > tol.abs * scale * scale && wedge > tol.abs * scale * scale;
    let denominator = link_denominator(space, p, r, s);
    let planar = space.trivector_max(p, r, s) <= tol.abs * scale.powi(3);
    Ok(LinkAdmissibility {
        generic,
        p_transversal,
        denominator,
        planar,
    })
}

/// `P²(R - S)² + 4(P·R)(P·S)`.
fn link_denominator(space: &MetricSpace, p: &Vector, r: &Vector, s: &Vector) -> f64 {
    let d = r - s;
    space.square(p) * space.square(&d) + 4.0 * space.dot(p, r) * space.dot(p, s)
}

/// `μ = 2 P·(R+S) / ({P∧(R-S)}² + {P·(R+S)}²)`.
///
/// The denominator is also evaluated as `P²(R-S)² + 4(P·R)(P·S)` and the two
/// forms must agree.
pub fn mu_scalar(space: &MetricSpace, problem: &LinkProblem) -> Result<f64> {
    let p = problem.require_preferred()?;
    let (r, s) = (problem.initial(), problem.target());
    let tol = space.tolerance();
    let scale = problem.scale();
    let d = r - s;
    let along = space.dot(p, &(r + s));
    if along.abs() <= tol.abs * scale * scale {
        return Err(Error::ZeroMu);
    }
    let pd = space.dot(p, &d);
    let wedge_sq = space.square(p) * space.square(&d) - pd * pd;
    let den = wedge_sq + along * along;
    let den_alt = link_denominator(space, p, r, s);
    let den_scale = den.abs().max(den_alt.abs()).max(scale.powi(4));
    if (den - den_alt).abs() > tol.rel * den_scale {
        return Err(Error::InternalConsistency(format!(
            "link denominators disagree: {den} vs {den_alt}"
        )));
    }
    if den.abs() <= tol.abs * scale.powi(4) {
        return Err(Error::DegenerateLink(den));
    }
    Ok(2.0 * along / den)
}

/// The generating bivector `(μP) ∧ (R - S)`.
pub fn link_generator(space: &MetricSpace, problem: &LinkProblem) -> Result<SimpleBivector> {
    let mu = mu_scalar(space, problem)?;
    let p = problem.require_preferred()?;
    SimpleBivector::new(p * mu, problem.initial() - problem.target())
}

/// The same generator written as `P ∧ W` with `W = μ(id - p)(R - S)`
/// orthogonal to `P`.
pub fn orthogonal_link_generator(space: &MetricSpace, problem: &LinkProblem) -> Result<SimpleBivector> {
    let mu = mu_scalar(space, problem)?;
    let p = problem.require_preferred()?;
    let w = space.idempotent_of(p).map(|proj| {
        let d = problem.initial() - problem.target();
        (&d - &proj.apply(&d)) * mu
    })?;
    SimpleBivector::new(p.clone(), w)
}

/// The generator in the form `μ {(id - (R-S)⊗g(R-S)/(R-S)²) P} ∧ (R - S)`,
/// which is skew under `R ↔ S`.
pub fn reciprocal_link_generator(space: &MetricSpace, problem: &LinkProblem) -> Result<SimpleBivector> {
    let mu = mu_scalar(space, problem)?;
    let p = problem.require_preferred()?;
    let d = problem.initial() - problem.target();
    let proj = space.idempotent_of(&d)?;
    let transverse = p - &proj.apply(p);
    SimpleBivector::new(transverse * mu, d)
}

/// The link operator written out in closed form. `coefficient_scale`
/// multiplies the first correction term and exists for mutation testing;
/// it is 1 everywhere else.
pub(crate) fn link_operator(
    space: &MetricSpace,
    p: &Vector,
    r: &Vector,
    s: &Vector,
    coefficient_scale: f64,
) -> Endomorphism {
    let d = r - s;
    let den = link_denominator(space, p, r, s);
    let (gp, gd) = (space.lower(p), space.lower(&d));
    let (pr, ps) = (space.dot(p, r), space.dot(p, s));
    let first = &gp * space.square(&d) - &gd * (2.0 * pr);
    let second = &gd * (2.0 * space.square(p)) + &gp * (4.0 * ps);
    Endomorphism::identity(space.dim())
        - Endomorphism::outer(p, &first) * (2.0 * coefficient_scale / den)
        - Endomorphism::outer(&d, &second) * (1.0 / den)
}

/// The link from `R` to `S` seen by the preferred ray of `P`.
///
/// Returns the identity when `R = S`. The recorded γ is `μP·(R+S) - 1`,
/// which is the negative root of `γ² = 1 - b²` when
/// `{P∧(R-S)}² > {P·(R+S)}²`; [`gamma_of_link`] returns its absolute value.
pub fn p_link(space: &MetricSpace, problem: &LinkProblem) -> Result<Isometry> {
    p_link_scaled(space, problem, 1.0)
}

pub(crate) fn p_link_scaled(
    space: &MetricSpace,
    problem: &LinkProblem,
    coefficient_scale: f64,
) -> Result<Isometry> {
    let p = problem.require_preferred()?;
    if problem.coincident(space) {
        return Ok(Isometry::identity(space.dim()));
    }
    let adm = admissibility(space, problem)?;
    if !adm.generic {
        return Err(Error::NullSeparation);
    }
    let mu = mu_scalar(space, problem)?;
    if !adm.p_transversal {
        return Err(Error::PreferredParallel);
    }
    let (r, s) = (problem.initial(), problem.target());
    let gamma = mu * space.dot(p, &(r + s)) - 1.0;
    let generator = SimpleBivector::new(p * mu, r - s)?;
    let map = link_operator(space, p, r, s, coefficient_scale);
    let link = Isometry::verified(space, map, Some(generator), Some(gamma)).map_err(|e| match e {
        Error::NotIsometry(defect) => {
            Error::InternalConsistency(format!("link is not an isometry (defect {defect:e})"))
        }
        other => other,
    })?;
    let miss = link.apply(r).distance(s);
    if miss > space.tolerance().rel * s.max_abs().max(1.0) {
        return Err(Error::InternalConsistency(format!("link misses S by {miss:e}")));
    }
    Ok(link)
}

/// Right-hand side of the closed form for `L S`:
/// `2(μP·S) S + (1 - 2μP·S) R - (R-S)² μP`.
pub fn predicted_final_action(space: &MetricSpace, problem: &LinkProblem) -> Result<Vector> {
    let mu = mu_scalar(space, problem)?;
    let p = problem.require_preferred()?;
    let (r, s) = (problem.initial(), problem.target());
    let mps = mu * space.dot(p, s);
    let d2 = space.square(&(r - s));
    Ok(s * (2.0 * mps) + r * (1.0 - 2.0 * mps) - p * (d2 * mu))
}

/// The unique link with a planar preferred ray:
/// `id - 2(R+S)⊗g(R+S)/(R+S)² + 2 S⊗gR/S²`, generated by `S ∧ R / S²`.
pub fn planar_link(space: &MetricSpace, r: &Vector, s: &Vector) -> Result<Isometry> {
    space.check(r)?;
    space.check(s)?;
    check_isomagnitude(space, r, s)?;
    let s2 = space.require_non_null(s)?;
    let sum = r + s;
    let sum2 = space.square(&sum);
    let scale = r.max_abs().max(s.max_abs());
    if sum2.abs() <= space.tolerance().abs * scale * scale {
        return Err(Error::DegenerateSum);
    }
    let map = Endomorphism::identity(space.dim())
        - Endomorphism::outer(&sum, &space.lower(&sum)) * (2.0 / sum2)
        + Endomorphism::outer(s, &space.lower(r)) * (2.0 / s2);
    let generator = SimpleBivector::new(s * (1.0 / s2), r.clone())?;
    let gamma = space.dot(r, s) / s2;
    Isometry::verified(space, map, Some(generator), Some(gamma))
}

/// `(2s - id) R`, the image of `S` under the planar link.
pub fn planar_final_action(space: &MetricSpace, r: &Vector, s: &Vector) -> Result<Vector> {
    let s2 = space.require_non_null(s)?;
    Ok(s * (2.0 * space.dot(s, r) / s2) - r.clone())
}

/// Boost between unit time-like future vectors:
/// `id - 2 S⊗gR + (R+S)⊗g(R+S)/(1 - R·S)`.
pub fn fahnline_boost(space: &MetricSpace, r: &Vector, s: &Vector) -> Result<Isometry> {
    space.check(r)?;
    space.check(s)?;
    require_lorentzian(space)?;
    let tol = space.tolerance();
    for v in [r, s] {
        let v2 = space.square(v);
        if (v2 + 1.0).abs() > tol.rel {
            return Err(Error::NotUnitTimelike(v2));
        }
    }
    let rs = space.dot(r, s);
    if rs > -1.0 + tol.rel {
        // equal unit vectors sit exactly at R·S = -1
        if r.distance(s) > tol.rel {
            return Err(Error::NotFutureDirected);
        }
    }
    let sum = r + s;
    let map = Endomorphism::identity(space.dim()) - Endomorphism::outer(s, &space.lower(r)) * 2.0
        + Endomorphism::outer(&sum, &space.lower(&sum)) * (1.0 / (1.0 - rs));
    let generator = SimpleBivector::new(r.clone(), s.clone())?;
    Isometry::verified(space, map, Some(generator), Some(-rs))
}

pub(crate) fn require_lorentzian(space: &MetricSpace) -> Result<()> {
    if space.is_lorentzian() {
        Ok(())
    } else {
        let sig = space.signature();
        Err(Error::NotLorentzian {
            positive: sig.positive,
            negative: sig.negative,
        })
    }
}

/// Residuals of the two scalar conditions that replace μ when
/// `(R - S)² = 0`:
///
/// ```text
/// (γ+1)(P·R - 1) - (P·R)(P·R - P·S)
/// γ² - 1 - (P·R - P·S)²
/// ```
pub fn null_link_conditions(space: &MetricSpace, problem: &LinkProblem, gamma: f64) -> Result<(f64, f64)> {
    let p = problem.require_preferred()?;
    let (r, s) = (problem.initial(), problem.target());
    let scale = problem.scale();
    if space.square(&(r - s)).abs() > space.tolerance().abs * scale * scale {
        return Err(Error::NotNullCase);
    }
    let (pr, ps) = (space.dot(p, r), space.dot(p, s));
    let first = (gamma + 1.0) * (pr - 1.0) - pr * (pr - ps);
    let second = gamma * gamma - 1.0 - (pr - ps) * (pr - ps);
    Ok((first, second))
}

/// The observer-free relative vector `ϖ(R,S) = (R²/(R·S)) (id - r)(S - R)`.
pub fn binary_velocity(space: &MetricSpace, r: &Vector, s: &Vector) -> Result<Vector> {
    space.check(r)?;
    space.check(s)?;
    let r2 = space.require_non_null(r)?;
    let rs = space.dot(r, s);
    let scale = r.max_abs().max(s.max_abs());
    if rs.abs() <= space.tolerance().abs * scale * scale {
        return Err(Error::OrthogonalPair);
    }
    let d = s - r;
    let transverse = &d - &(r * (space.dot(r, &d) / r2));
    Ok(transverse * (r2 / rs))
}

fn require_unit_timelike(space: &MetricSpace, v: &Vector) -> Result<()> {
    let v2 = space.square(v);
    if (v2 + 1.0).abs() > space.tolerance().rel {
        return Err(Error::NotUnitTimelike(v2));
    }
    Ok(())
}

/// `v̄ = γ_v v / c = μ (id - p)(R - S)` for unit time-like `P`, `R`, `S`.
pub fn ternary_scaled_velocity(space: &MetricSpace, problem: &LinkProblem) -> Result<Vector> {
    require_lorentzian(space)?;
    let p = problem.require_preferred()?;
    for v in [p, problem.initial(), problem.target()] {
        require_unit_timelike(space, v)?;
    }
    if problem.coincident(space) {
        return Ok(Vector::zeros(space.dim()));
    }
    let mu = mu_scalar(space, problem)?;
    let d = problem.initial() - problem.target();
    // P² = -1
    let transverse = &d + &(p * space.dot(p, &d));
    Ok(transverse * mu)
}

/// Velocity of `S` relative to `R` as seen by the preferred observer `P`.
pub fn ternary_velocity(space: &MetricSpace, problem: &LinkProblem, c: f64) -> Result<Vector> {
    if !(c > 0.0) {
        return Err(Error::InvalidLightSpeed(c));
    }
    let vbar = ternary_scaled_velocity(space, problem)?;
    let gamma = (1.0 + space.square(&vbar)).sqrt();
    Ok(vbar * (c / gamma))
}

/// `|({P·(R+S)}² - {P∧(R-S)}²) / ({P·(R+S)}² + {P∧(R-S)}²)|`.
pub fn gamma_of_link(space: &MetricSpace, problem: &LinkProblem) -> Result<f64> {
    let p = problem.require_preferred()?;
    if problem.coincident(space) {
        return Ok(1.0);
    }
    let (r, s) = (problem.initial(), problem.target());
    let d = r - s;
    let along = space.dot(p, &(r + s));
    let pd = space.dot(p, &d);
    let wedge_sq = space.square(p) * space.square(&d) - pd * pd;
    let den = along * along + wedge_sq;
    if den.abs() <= space.tolerance().abs * problem.scale().powi(4) {
        return Err(Error::DegenerateLink(den));
    }
    Ok(((along * along - wedge_sq) / den).abs())
}

/// Closed form of the `W` vector for a planar preferred ray:
/// `4(R+S)² / ((R+S)⁴ + 4(S∧R)²) · (P/P²)·(S∧R)`.
pub fn planar_w_vector(space: &MetricSpace, problem: &LinkProblem) -> Result<Vector> {
    let p = problem.require_preferred()?;
    let (r, s) = (problem.initial(), problem.target());
    let p2 = space.require_non_null(p)?;
    let sum2 = space.square(&(r + s));
    let sr = SimpleBivector::new(s.clone(), r.clone())?;
    let den = sum2 * sum2 + 4.0 * space.biv_square(&sr);
    if den.abs() <= space.tolerance().abs {
        return Err(Error::DegenerateLink(den));
    }
    let k = 4.0 * sum2 / den;
    Ok(space.contract_unchecked(&(p * (1.0 / p2)), &sr) * k)
}

/// How a [`solve_link`] result was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkKind {
    Identity,
    Preferred,
    PlanarDefault,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkSolution {
    pub isometry: Isometry,
    pub mu: Option<f64>,
    pub kind: LinkKind,
}

/// Dispatches a problem: the planar link when no preferred vector is given,
/// the `P`-link otherwise.
pub fn solve_link(space: &MetricSpace, problem: &LinkProblem) -> Result<LinkSolution> {
    if problem.coincident(space) {
        return Ok(LinkSolution {
            isometry: Isometry::identity(space.dim()),
            mu: None,
            kind: LinkKind::Identity,
        });
    }
    match problem.preferred() {
        None => Ok(LinkSolution {
            isometry: planar_link(space, problem.initial(), problem.target())?,
            mu: None,
            kind: LinkKind::PlanarDefault,
        }),
        Some(_) => Ok(LinkSolution {
            isometry: p_link(space, problem)?,
            mu: Some(mu_scalar(space, problem)?),
            kind: LinkKind::Preferred,
        }),
    }
}

/// Reproduces a link from its recorded generator and (possibly negative) γ.
pub fn link_from_generator(space: &MetricSpace, generator: &SimpleBivector, gamma: f64) -> Result<Isometry> {
    space.check_bivector(generator)?;
    let map = binomial(space, generator, gamma)?;
    Isometry::verified(space, map, Some(generator.clone()), Some(gamma))
}

//! g-isometries: reflections and the simple-bivector parametrization
//! `L = id + M + M²/(γ+1)` with `γ² = 1 - (P∧Q)²`.

use crate::error::{Error, Result};
use crate::metric::{Covector, Endomorphism, MetricSpace, SimpleBivector, Vector};

/// An endomorphism verified to preserve the metric, optionally with the
/// bivector that generates it and the γ of that generator.
///
/// `gamma` is the principal root for isometries built from a bivector. Links
/// may record the negative root branch; see [`crate::linker::p_link`].
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    map: Endomorphism,
    generator: Option<SimpleBivector>,
    gamma: Option<f64>,
}

impl Isometry {
    /// Checks `L*∘g∘L = g` (scale-normalized, within `tol.rel`) before
    /// wrapping the map.
    pub fn verified(
        space: &MetricSpace,
        map: Endomorphism,
        generator: Option<SimpleBivector>,
        gamma: Option<f64>,
    ) -> Result<Self> {
        space.check_map(&map)?;
        let defect = space.isometry_defect(&map);
        if !(defect <= space.tolerance().rel) {
            return Err(Error::NotIsometry(defect));
        }
        Ok(Self {
            map,
            generator,
            gamma,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            map: Endomorphism::identity(dim),
            generator: Some(SimpleBivector::zero(dim)),
            gamma: Some(1.0),
        }
    }

    pub fn map(&self) -> &Endomorphism {
        &self.map
    }

    pub fn into_map(self) -> Endomorphism {
        self.map
    }

    pub fn generator(&self) -> Option<&SimpleBivector> {
        self.generator.as_ref()
    }

    pub fn gamma(&self) -> Option<f64> {
        self.gamma
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        self.map.apply(v)
    }

    pub fn compose(&self, other: &Isometry) -> Endomorphism {
        self.map.compose(&other.map)
    }

    pub fn distance(&self, other: &Isometry) -> f64 {
        self.map.distance(&other.map)
    }
}

/// `γ = √(1 - (P∧Q)²)`, principal root.
pub fn gamma_of_bivector(space: &MetricSpace, b: &SimpleBivector) -> Result<f64> {
    space.check_bivector(b)?;
    let b2 = space.biv_square(b);
    if b2 > 1.0 + space.tolerance().abs {
        return Err(Error::OutOfDomain(b2));
    }
    Ok((1.0 - b2).max(0.0).sqrt())
}

/// `id + M + M²/(γ+1)` for an explicitly chosen root `gamma`.
pub(crate) fn binomial(space: &MetricSpace, b: &SimpleBivector, gamma: f64) -> Result<Endomorphism> {
    if !(gamma + 1.0 > space.tolerance().abs) {
        return Err(Error::DegenerateGamma);
    }
    let m = space.lie_map_unchecked(b);
    let m2 = m.compose(&m);
    Ok(Endomorphism::identity(space.dim()) + m + m2 * (1.0 / (gamma + 1.0)))
}

/// The reflection `id - 2 P ⊗ gP / P²`.
pub fn reflection(space: &MetricSpace, p: &Vector) -> Result<Isometry> {
    space.check(p)?;
    let p2 = space.require_non_null(p)?;
    let map = Endomorphism::identity(space.dim()) - Endomorphism::outer(p, &space.lower(p)) * (2.0 / p2);
    Isometry::verified(space, map, None, None)
}

/// The isometry generated by the simple bivector `b`.
pub fn isometry_from_bivector(space: &MetricSpace, b: &SimpleBivector) -> Result<Isometry> {
    let gamma = gamma_of_bivector(space, b)?;
    let map = binomial(space, b, gamma)?;
    Isometry::verified(space, map, Some(b.clone()), Some(gamma))
}

/// The covectors `(α, β)` with `L = id - P⊗α - Q⊗β`:
///
/// ```text
/// (γ+1) α = Q² gP - (P·Q + γ + 1) gQ
/// (γ+1) β = P² gQ - (P·Q - γ - 1) gP
/// ```
///
/// which expands to the same map as the binomial form.
pub fn covector_pair(space: &MetricSpace, b: &SimpleBivector) -> Result<(Covector, Covector)> {
    let gamma = gamma_of_bivector(space, b)?;
    if !(gamma + 1.0 > space.tolerance().abs) {
        return Err(Error::DegenerateGamma);
    }
    Ok(covector_pair_with_gamma(space, b, gamma))
}

pub(crate) fn covector_pair_with_gamma(
    space: &MetricSpace,
    b: &SimpleBivector,
    gamma: f64,
) -> (Covector, Covector) {
    let (p, q) = (b.first(), b.second());
    let (gp, gq) = (space.lower(p), space.lower(q));
    let pq = space.dot(p, q);
    let k = 1.0 / (gamma + 1.0);
    let alpha = (&gp * space.square(q) - &gq * (pq + gamma + 1.0)) * k;
    let beta = (&gq * space.square(p) - &gp * (pq - gamma - 1.0)) * k;
    (alpha, beta)
}

/// `L P` and `L Q` from the closed-form action of `L_{P∧Q}` on its own
/// presentation pair.
pub fn presentation_action(space: &MetricSpace, b: &SimpleBivector) -> Result<(Vector, Vector)> {
    let gamma = gamma_of_bivector(space, b)?;
    let (p, q) = (b.first(), b.second());
    let pq = space.dot(p, q);
    let shrink = space.biv_square(b) / (gamma + 1.0);
    let lp = p * (1.0 + pq - shrink) - q * space.square(p);
    let lq = q * (1.0 - pq - shrink) + p * space.square(q);
    Ok((lp, lq))
}

/// `max |(L - id)(L² - 2γL + id)|`.
///
/// The quadratic factor is the characteristic polynomial of `L` restricted
/// to the generator plane (trace `2γ`, determinant 1).
pub fn minimal_poly_residual(l: &Isometry) -> Result<f64> {
    let gamma = l.gamma.ok_or(Error::MissingGenerator)?;
    l.generator.as_ref().ok_or(Error::MissingGenerator)?;
    let id = Endomorphism::identity(l.map.dim());
    let quad = l.map.compose(&l.map) - &l.map * (2.0 * gamma) + id.clone();
    Ok((&l.map - &id).compose(&quad).max_abs())
}

/// Residual of the cubic as it is usually printed,
/// `(L - id)(L² + 2(γ-2)(L + id))`. It does not vanish in general and is
/// kept for comparison against [`minimal_poly_residual`].
pub fn printed_minimal_poly_residual(l: &Isometry) -> Result<f64> {
    let gamma = l.gamma.ok_or(Error::MissingGenerator)?;
    l.generator.as_ref().ok_or(Error::MissingGenerator)?;
    let id = Endomorphism::identity(l.map.dim());
    let quad = l.map.compose(&l.map) + (&l.map + &id) * (2.0 * (gamma - 2.0));
    Ok((&l.map - &id).compose(&quad).max_abs())
}

/// An element of the little group of `r`, generated by a bivector whose
/// presentation vectors are both orthogonal to `r`.
pub fn stabilizer_element(space: &MetricSpace, r: &Vector, b: &SimpleBivector) -> Result<Isometry> {
    space.check(r)?;
    space.check_bivector(b)?;
    let tol = space.tolerance();
    for v in [b.first(), b.second()] {
        let scale = 1.0_f64.max(r.max_abs() * v.max_abs());
        if space.dot(r, v).abs() > tol.abs * scale {
            return Err(Error::NotInStabilizer);
        }
    }
    let k = isometry_from_bivector(space, b)?;
    let drift = k.apply(r).distance(r);
    if drift > tol.rel * 1.0_f64.max(r.max_abs()) {
        return Err(Error::InternalConsistency(format!(
            "stabilizer moved its fixed vector by {drift:e}"
        )));
    }
    Ok(k)
}

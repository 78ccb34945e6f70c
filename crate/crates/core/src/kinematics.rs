//! Minkowski-signature kinematics: observers, boosts parametrized by a
//! velocity seen by a preferred observer, coordinate transformations and the
//! Einstein–Fock composition of velocities.
//!
//! Velocities are ambient vectors orthogonal to the observer that sees them,
//! measured in length per time; `c` is always explicit.

use crate::error::{Error, Result};
use crate::isometry::Isometry;
use crate::linker::require_lorentzian;
use crate::metric::{Endomorphism, MetricSpace, SimpleBivector, Vector};

/// A unit time-like future-directed vector and its idempotent
/// `r = R ⊗ (-gR)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observer {
    vector: Vector,
    idempotent: Endomorphism,
}

impl Observer {
    pub fn new(space: &MetricSpace, vector: Vector) -> Result<Self> {
        require_lorentzian(space)?;
        space.check(&vector)?;
        let v2 = space.square(&vector);
        if (v2 + 1.0).abs() > space.tolerance().rel {
            return Err(Error::NotUnitTimelike(v2));
        }
        if !(vector[space.time_index()] > 0.0) {
            return Err(Error::NotFutureDirected);
        }
        let idempotent = Endomorphism::outer(&vector, &-space.lower(&vector));
        Ok(Self { vector, idempotent })
    }

    /// The observer along the ambient time axis.
    pub fn at_rest(space: &MetricSpace) -> Result<Self> {
        Self::new(space, Vector::basis(space.dim(), space.time_index()))
    }

    pub fn vector(&self) -> &Vector {
        &self.vector
    }

    pub fn idempotent(&self) -> &Endomorphism {
        &self.idempotent
    }

    /// `(id - r) e`, the part of `e` this observer calls space.
    pub fn spatial(&self, space: &MetricSpace, e: &Vector) -> Vector {
        e + &(&self.vector * space.dot(&self.vector, e))
    }

    /// Observers in relative rigid rest coincide within `tol.rel`.
    pub fn same_as(&self, space: &MetricSpace, other: &Observer) -> bool {
        let scale = self.vector.max_abs().max(other.vector.max_abs()).max(1.0);
        self.vector.distance(&other.vector) <= space.tolerance().rel * scale
    }
}

/// A velocity seen by `observer`: `observer · vector = 0` and, unless
/// flagged luminal, `vector² < c²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Velocity3 {
    vector: Vector,
    observer: Observer,
    c: f64,
    luminal: bool,
    beta2: f64,
}

impl Velocity3 {
    pub fn new(space: &MetricSpace, observer: &Observer, vector: Vector, c: f64) -> Result<Self> {
        let v = Self::observed(space, observer, vector, c, false)?;
        if !(v.beta2 < 1.0) {
            return Err(Error::Superluminal(v.beta2));
        }
        Ok(v)
    }

    /// A velocity with `vector² = c²` within `tol.rel`.
    pub fn luminal(space: &MetricSpace, observer: &Observer, vector: Vector, c: f64) -> Result<Self> {
        let v = Self::observed(space, observer, vector, c, true)?;
        if (v.beta2 - 1.0).abs() > space.tolerance().rel {
            return Err(Error::Superluminal(v.beta2));
        }
        Ok(v)
    }

    pub fn zero(space: &MetricSpace, observer: &Observer, c: f64) -> Result<Self> {
        Self::new(space, observer, Vector::zeros(space.dim()), c)
    }

    fn observed(space: &MetricSpace, observer: &Observer, vector: Vector, c: f64, luminal: bool) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidLightSpeed(c));
        }
        space.check(&vector)?;
        let pv = space.dot(observer.vector(), &vector);
        let scale = 1.0_f64.max(observer.vector().max_abs() * vector.max_abs());
        if pv.abs() > space.tolerance().abs * scale {
            return Err(Error::NotObserved(pv));
        }
        let beta2 = space.square(&vector) / (c * c);
        Ok(Self {
            vector,
            observer: observer.clone(),
            c,
            luminal,
            beta2,
        })
    }

    pub fn vector(&self) -> &Vector {
        &self.vector
    }

    pub fn observer(&self) -> &Observer {
        &self.observer
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn is_luminal(&self) -> bool {
        self.luminal
    }

    /// `v² / c²`.
    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    pub fn negated(&self) -> Self {
        Self {
            vector: -&self.vector,
            ..self.clone()
        }
    }
}

/// `γ_v = (1 - v²/c²)^(-1/2)`.
pub fn gamma(v: &Velocity3) -> Result<f64> {
    if v.luminal || !(v.beta2 < 1.0) {
        return Err(Error::Superluminal(v.beta2));
    }
    Ok(1.0 / (1.0 - v.beta2).sqrt())
}

/// `v̄ = γ_v v / c`.
pub fn scaled_velocity(v: &Velocity3) -> Result<Vector> {
    Ok(&v.vector * (gamma(v)? / v.c))
}

/// `L = id - P⊗ν - v̄⊗ξ` with `ν = (γ-1)gP - gv̄`, `ξ = gP - gv̄/(γ+1)`,
/// where `P` is the observer seeing `v`. Generated by `P ∧ v̄`.
pub fn boost(space: &MetricSpace, v: &Velocity3) -> Result<Isometry> {
    let g = gamma(v)?;
    let vbar = scaled_velocity(v)?;
    let p = v.observer.vector();
    let (gp, gv) = (space.lower(p), space.lower(&vbar));
    let nu = &gp * (g - 1.0) - gv.clone();
    let xi = &gp - &(&gv * (1.0 / (g + 1.0)));
    let map = Endomorphism::identity(space.dim()) - Endomorphism::outer(p, &nu) - Endomorphism::outer(&vbar, &xi);
    Isometry::verified(space, map, Some(SimpleBivector::new(p.clone(), vbar)?), Some(g))
}

/// Time and position of an event relative to an observer: `e = ctR + x`.
#[derive(Debug, Clone, PartialEq)]
pub struct EventCoordinates {
    pub t: f64,
    pub x: Vector,
}

impl EventCoordinates {
    pub fn split(space: &MetricSpace, observer: &Observer, e: &Vector, c: f64) -> Result<Self> {
        space.check(e)?;
        if !(c > 0.0) {
            return Err(Error::InvalidLightSpeed(c));
        }
        let ct = -space.dot(observer.vector(), e);
        Ok(Self {
            t: ct / c,
            x: observer.spatial(space, e),
        })
    }

    pub fn event(&self, observer: &Observer, c: f64) -> Vector {
        &(observer.vector() * (c * self.t)) + &self.x
    }
}

/// Output of [`coordinate_transform`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateTransform {
    pub t_prime: f64,
    pub x_prime: Vector,
    /// `R·P`.
    pub rp: f64,
    /// `R·v`.
    pub rv: f64,
    /// `P·x`.
    pub px: f64,
}

/// Coordinates of `e` after the boost by `v`, whose observer `P` need not be
/// the reference observer `R`:
///
/// ```text
/// νe = ct{(γ-1)P·R + v̄·R} + v̄·x + (γ-1)P·x
/// ξe = ct{P·R + v̄·R/(γ+1)} + v̄·x/(γ+1) + P·x
/// ct' = ct + R·D,  x' = x - (id - r)D,  D = (νe)P - (ξe)v̄
/// ```
///
/// so that `ct'R + x' = L⁻¹e`.
pub fn coordinate_transform(space: &MetricSpace, r: &Observer, v: &Velocity3, e: &Vector) -> Result<CoordinateTransform> {
    let c = v.c;
    let coords = EventCoordinates::split(space, r, e, c)?;
    let ct = c * coords.t;
    let x = &coords.x;
    let g = gamma(v)?;
    let vbar = scaled_velocity(v)?;
    let (rv, p) = (r.vector(), v.observer.vector());
    let pr = space.dot(p, rv);
    let vr = space.dot(&vbar, rv);
    let vx = space.dot(&vbar, x);
    let px = space.dot(p, x);
    let nu_e = ct * ((g - 1.0) * pr + vr) + vx + (g - 1.0) * px;
    let xi_e = ct * (pr + vr / (g + 1.0)) + vx / (g + 1.0) + px;
    let d = &(p * nu_e) - &(&vbar * xi_e);
    let ct_prime = ct + space.dot(rv, &d);
    let x_prime = x - &r.spatial(space, &d);
    Ok(CoordinateTransform {
        t_prime: ct_prime / c,
        x_prime,
        rp: pr,
        rv: space.dot(rv, v.vector()),
        px,
    })
}

/// `x' = x + γ²/(γ+1)(v·x/c²)v - γvt`, `t' = γ(t - v·x/c²)`.
pub fn einstein_transform(space: &MetricSpace, v: &Velocity3, coords: &EventCoordinates) -> Result<EventCoordinates> {
    space.check(&coords.x)?;
    let g = gamma(v)?;
    let c2 = v.c * v.c;
    let vx = space.dot(v.vector(), &coords.x);
    let x = &coords.x + &(v.vector() * (g * g / (g + 1.0) * vx / c2 - g * coords.t));
    Ok(EventCoordinates {
        t: g * (coords.t - vx / c2),
        x,
    })
}

/// Recovers `v` and `γ_v` from a pair of coordinate systems:
/// `v = 2K/(1 + K²/c²)`, `γ = (1 + K²/c²)/(1 - K²/c²)`, `K = (x - x')/(t + t')`.
pub fn urbantke_velocity(
    space: &MetricSpace,
    before: &EventCoordinates,
    after: &EventCoordinates,
    c: f64,
) -> Result<(Vector, f64)> {
    if !(c > 0.0) {
        return Err(Error::InvalidLightSpeed(c));
    }
    space.check(&before.x)?;
    space.check(&after.x)?;
    let epoch = before.t + after.t;
    let scale = 1.0_f64.max(before.t.abs()).max(after.t.abs());
    if epoch.abs() <= space.tolerance().abs * scale {
        return Err(Error::DegenerateEpoch);
    }
    let k = (&before.x - &after.x) * (1.0 / epoch);
    let k2 = space.square(&k) / (c * c);
    Ok((k * (2.0 / (1.0 + k2)), (1.0 + k2) / (1.0 - k2)))
}

fn same_observer(space: &MetricSpace, u: &Velocity3, v: &Velocity3) -> Result<()> {
    if !u.observer.same_as(space, &v.observer) || u.c != v.c {
        return Err(Error::PreferredObserverMismatch);
    }
    Ok(())
}

fn composite(space: &MetricSpace, like: &Velocity3, vector: Vector) -> Result<Velocity3> {
    if like.luminal {
        Velocity3::observed(space, &like.observer, vector, like.c, true)
    } else {
        Velocity3::new(space, &like.observer, vector, like.c)
    }
}

fn shared_denominator(space: &MetricSpace, u: &Velocity3, v: &Velocity3) -> Result<f64> {
    let c2 = u.c * u.c;
    let den = c2 - space.dot(v.vector(), u.vector());
    if den.abs() <= space.tolerance().abs * c2 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(den)
}

/// `u ⊕ (-v) = (u - γv)/(γ(1 - v·u/c²)) + γ/(γ+1) (v·u) v/(c² - v·u)`,
/// with `γ = γ_v`.
pub fn velocity_difference(space: &MetricSpace, u: &Velocity3, v: &Velocity3) -> Result<Velocity3> {
    same_observer(space, u, v)?;
    let g = gamma(v)?;
    let c2 = u.c * u.c;
    let den = shared_denominator(space, u, v)?;
    let vu = space.dot(v.vector(), u.vector());
    let head = (u.vector() - &(v.vector() * g)) * (c2 / (g * den));
    let tail = v.vector() * (g / (g + 1.0) * vu / den);
    composite(space, u, head + tail)
}

/// The same difference written as
/// `(u - v)/(1 - v·u/c²) + γ/(γ+1) v·(u∧v)/(c² - v·u)`.
pub fn velocity_difference_wedge(space: &MetricSpace, u: &Velocity3, v: &Velocity3) -> Result<Velocity3> {
    same_observer(space, u, v)?;
    let g = gamma(v)?;
    let c2 = u.c * u.c;
    let den = shared_denominator(space, u, v)?;
    let uv = SimpleBivector::new(u.vector().clone(), v.vector().clone())?;
    let head = (u.vector() - v.vector()) * (c2 / den);
    let tail = space.contract_unchecked(v.vector(), &uv) * (g / (g + 1.0) / den);
    composite(space, u, head + tail)
}

/// `u ⊕ v`, the difference with `v` negated.
pub fn velocity_add(space: &MetricSpace, u: &Velocity3, v: &Velocity3) -> Result<Velocity3> {
    velocity_difference(space, u, &v.negated())
}

/// The `v` with `w = u ⊕ (-v)`, together with `γ_v` from
///
/// ```text
/// γ_v = {(γ_u+γ_w)² + (γ_u u - γ_w w)²/c²} / {(γ_u+γ_w)² - (γ_u u - γ_w w)²/c²}
/// γ_v v/(γ_v+1) = (γ_u u - γ_w w)/(γ_u + γ_w)
/// ```
pub fn velocity_subtract(space: &MetricSpace, u: &Velocity3, w: &Velocity3) -> Result<(Velocity3, f64)> {
    same_observer(space, u, w)?;
    let (gu, gw) = (gamma(u)?, gamma(w)?);
    let a = &(u.vector() * gu) - &(w.vector() * gw);
    let s = gu + gw;
    let a2 = space.square(&a) / (u.c * u.c);
    let den = s * s - a2;
    if den.abs() <= space.tolerance().abs * s * s {
        return Err(Error::DegenerateDenominator);
    }
    let gv = (s * s + a2) / den;
    let v = a * ((gv + 1.0) / (gv * s));
    Ok((Velocity3::new(space, &u.observer, v, u.c)?, gv))
}

/// Solves `γ_v²(1 - v·u/c²)² a' = a + (v·a)/(c² - v·u) (u - γ_v v/(γ_v+1))`
/// for `a'`.
pub fn acceleration_transform(space: &MetricSpace, v: &Velocity3, u: &Velocity3, a: &Vector) -> Result<Vector> {
    same_observer(space, u, v)?;
    space.check(a)?;
    let g = gamma(v)?;
    let c2 = v.c * v.c;
    let den = shared_denominator(space, u, v)?;
    let va = space.dot(v.vector(), a);
    let shift = u.vector() - &(v.vector() * (g / (g + 1.0)));
    let rhs = a + &(shift * (va / den));
    let k = g * (den / c2);
    Ok(rhs * (1.0 / (k * k)))
}

/// Residuals of the two identities used to derive the acceleration law,
/// written for `c = 1`:
///
/// ```text
/// γ/(γ+1) {(v·a)v - v·(a∧v)} = (1 - 1/γ) a
/// (γ²-1)/γ² {(v·a)u - (v·u)a} = (v·u){v·(a∧v)} - (v·a){v·(u∧v)}
/// ```
pub fn prolongation_identity_residuals(space: &MetricSpace, v: &Velocity3, u: &Velocity3, a: &Vector) -> Result<(f64, f64)> {
    same_observer(space, u, v)?;
    space.check(a)?;
    let g = gamma(v)?;
    let (vv, uv) = (v.vector(), u.vector());
    let va = space.dot(vv, a);
    let vu = space.dot(vv, uv);
    let v_av = space.contract_unchecked(vv, &SimpleBivector::new(a.clone(), vv.clone())?);
    let v_uv = space.contract_unchecked(vv, &SimpleBivector::new(uv.clone(), vv.clone())?);
    let first = (&(vv * va) - &v_av) * (g / (g + 1.0)) - a * (1.0 - 1.0 / g);
    let lhs = (&(uv * va) - &(a * vu)) * ((g * g - 1.0) / (g * g));
    let second = lhs - (&v_av * vu - &v_uv * va);
    Ok((first.max_abs(), second.max_abs()))
}

/// `{(R·v̄)² + γ² - 1} P·x - (P·R)(R·v̄)(x·v̄)`, which vanishes when `P`
/// lies in the plane of `R` and `v̄`.
pub fn planar_identity_residual(space: &MetricSpace, r: &Observer, v: &Velocity3, x: &Vector) -> Result<f64> {
    space.check(x)?;
    let g = gamma(v)?;
    let vbar = scaled_velocity(v)?;
    let (rv, p) = (r.vector(), v.observer.vector());
    let rvb = space.dot(rv, &vbar);
    let lhs = (rvb * rvb + g * g - 1.0) * space.dot(p, x);
    let rhs = space.dot(p, rv) * rvb * space.dot(x, &vbar);
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn mink() -> MetricSpace {
        MetricSpace::minkowski(4).unwrap()
    }

    fn vel(s: &MetricSpace, o: &Observer, c: &[f64], light: f64) -> Velocity3 {
        Velocity3::new(s, o, Vector::from_slice(c), light).unwrap()
    }

    #[test]
    fn observer_validation() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        assert_eq!(r.idempotent().apply(r.vector()), *r.vector());
        assert_abs_diff_eq!(r.idempotent().trace(), 1.0);
        assert!(matches!(
            Observer::new(&s, Vector::from_slice(&[-1.0, 0.0, 0.0, 0.0])),
            Err(Error::NotFutureDirected)
        ));
        assert!(matches!(
            Observer::new(&s, Vector::from_slice(&[2.0, 0.0, 0.0, 0.0])),
            Err(Error::NotUnitTimelike(_))
        ));
        let e = MetricSpace::euclidean(4).unwrap();
        assert!(matches!(Observer::at_rest(&e), Err(Error::NotLorentzian { .. })));
    }

    #[test]
    fn velocity_validation() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        assert!(matches!(
            Velocity3::new(&s, &r, Vector::from_slice(&[0.1, 0.5, 0.0, 0.0]), 1.0),
            Err(Error::NotObserved(_))
        ));
        assert!(matches!(
            Velocity3::new(&s, &r, Vector::from_slice(&[0.0, 1.0, 0.0, 0.0]), 1.0),
            Err(Error::Superluminal(_))
        ));
        assert!(matches!(
            Velocity3::new(&s, &r, Vector::zeros(4), 0.0),
            Err(Error::InvalidLightSpeed(_))
        ));
    }

    #[test]
    fn gamma_fixture() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        assert_eq!(gamma(&Velocity3::zero(&s, &r, 1.0).unwrap()).unwrap(), 1.0);
        let v = vel(&s, &r, &[0.0, 0.6, 0.0, 0.0], 1.0);
        assert_abs_diff_eq!(gamma(&v).unwrap(), 1.25, epsilon = 1e-15);
        assert_abs_diff_eq!(s.square(&scaled_velocity(&v).unwrap()), 0.5625, epsilon = 1e-15);
    }

    #[test]
    fn boost_fixture() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let v = vel(&s, &r, &[0.0, 0.6, 0.0, 0.0], 1.0);
        let l = boost(&s, &v).unwrap();
        let lp = l.apply(r.vector());
        assert!(lp.distance(&Vector::from_slice(&[1.25, 0.75, 0.0, 0.0])) < 1e-14);
        let back = boost(&s, &v.negated()).unwrap();
        assert!(l.compose(&back).distance(&Endomorphism::identity(4)) < 1e-14);
        let zero = boost(&s, &Velocity3::zero(&s, &r, 1.0).unwrap()).unwrap();
        assert_eq!(zero.map(), &Endomorphism::identity(4));
    }

    #[test]
    fn boost_matches_bivector_isometry() {
        let s = mink();
        let p = Observer::new(&s, Vector::from_slice(&[1.25, 0.0, 0.75, 0.0])).unwrap();
        let v = Velocity3::new(&s, &p, Vector::from_slice(&[0.0, 0.3, 0.0, 0.4]), 1.0).unwrap();
        let l = boost(&s, &v).unwrap();
        let b = crate::isometry::isometry_from_bivector(&s, l.generator().unwrap()).unwrap();
        assert!(l.distance(&b) < 1e-12);
    }

    #[test]
    fn coordinate_transform_fixture() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let v = vel(&s, &r, &[0.0, 0.6, 0.0, 0.0], 1.0);
        let e = Vector::from_slice(&[1.0, 1.0, 0.0, 0.0]);
        let out = coordinate_transform(&s, &r, &v, &e).unwrap();
        assert_abs_diff_eq!(out.t_prime, 0.5, epsilon = 1e-14);
        assert!(out.x_prime.distance(&Vector::from_slice(&[0.0, 0.5, 0.0, 0.0])) < 1e-14);
        assert_eq!((out.rp, out.rv, out.px), (-1.0, 0.0, 0.0));

        let ein = einstein_transform(&s, &v, &EventCoordinates::split(&s, &r, &e, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(ein.t, 0.5, epsilon = 1e-14);
        assert!(ein.x.distance(&out.x_prime) < 1e-14);
    }

    #[test]
    fn coordinate_transform_with_zero_velocity_is_trivial() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let p = Observer::new(&s, Vector::from_slice(&[1.25, 0.0, 0.75, 0.0])).unwrap();
        let e = Vector::from_slice(&[0.7, -0.2, 1.1, 0.4]);
        let out = coordinate_transform(&s, &r, &Velocity3::zero(&s, &p, 1.0).unwrap(), &e).unwrap();
        assert_abs_diff_eq!(out.t_prime, 0.7, epsilon = 1e-15);
        assert!(out.x_prime.distance(&Vector::from_slice(&[0.0, -0.2, 1.1, 0.4])) < 1e-15);
    }

    #[test]
    fn moving_preferred_observer_preserves_interval() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let p = Observer::new(&s, Vector::from_slice(&[1.25, 0.0, 0.75, 0.0])).unwrap();
        let v = Velocity3::new(&s, &p, Vector::from_slice(&[0.3, 0.2, 0.5, -0.1]), 2.0).unwrap();
        let e = Vector::from_slice(&[0.7, -0.2, 1.1, 0.4]);
        let out = coordinate_transform(&s, &r, &v, &e).unwrap();
        let ct = 2.0 * out.t_prime;
        assert_abs_diff_eq!(-ct * ct + s.square(&out.x_prime), s.square(&e), epsilon = 1e-12);
        assert!(s.dot(r.vector(), &out.x_prime).abs() < 1e-12);
        let inv = boost(&s, &v.negated()).unwrap();
        let expect = inv.apply(&e);
        assert!((&(r.vector() * ct) + &out.x_prime).distance(&expect) < 1e-12);
    }

    #[test]
    fn einstein_transform_inverse_and_transverse() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let v = vel(&s, &r, &[0.0, 0.3, -0.4, 0.2], 1.0);
        let ev = EventCoordinates {
            t: 0.8,
            x: Vector::from_slice(&[0.0, 1.0, 2.0, -0.5]),
        };
        let there = einstein_transform(&s, &v, &ev).unwrap();
        let back = einstein_transform(&s, &v.negated(), &there).unwrap();
        assert_abs_diff_eq!(back.t, ev.t, epsilon = 1e-12);
        assert!(back.x.distance(&ev.x) < 1e-12);

        let u = vel(&s, &r, &[0.0, 0.6, 0.0, 0.0], 1.0);
        let transverse = EventCoordinates {
            t: 0.0,
            x: Vector::from_slice(&[0.0, 0.0, 3.0, 0.0]),
        };
        assert_eq!(einstein_transform(&s, &u, &transverse).unwrap().x, transverse.x);
    }

    #[test]
    fn urbantke_fixture() {
        let s = mink();
        let before = EventCoordinates {
            t: 1.0,
            x: Vector::from_slice(&[0.0, 1.0, 0.0, 0.0]),
        };
        let after = EventCoordinates {
            t: 0.5,
            x: Vector::from_slice(&[0.0, 0.5, 0.0, 0.0]),
        };
        let (v, g) = urbantke_velocity(&s, &before, &after, 1.0).unwrap();
        assert!(v.distance(&Vector::from_slice(&[0.0, 0.6, 0.0, 0.0])) < 1e-14);
        assert_abs_diff_eq!(g, 1.25, epsilon = 1e-14);
        let (zero, g0) = urbantke_velocity(&s, &before, &before, 1.0).unwrap();
        assert!(zero.is_zero());
        assert_eq!(g0, 1.0);
        let flipped = EventCoordinates {
            t: -1.0,
            x: before.x.clone(),
        };
        assert!(matches!(
            urbantke_velocity(&s, &before, &flipped, 1.0),
            Err(Error::DegenerateEpoch)
        ));
    }

    #[test]
    fn collinear_addition_fixture() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let u = vel(&s, &r, &[0.0, 0.5, 0.0, 0.0], 1.0);
        let v = vel(&s, &r, &[0.0, 0.3, 0.0, 0.0], 1.0);
        let w = velocity_add(&s, &u, &v).unwrap();
        assert_abs_diff_eq!(w.vector()[1], 0.8 / 1.15, epsilon = 1e-15);
        assert!(velocity_add(&s, &u, &u.negated()).unwrap().vector().max_abs() < 1e-15);
        assert_eq!(velocity_add(&s, &u, &Velocity3::zero(&s, &r, 1.0).unwrap()).unwrap(), u);
    }

    #[test]
    fn difference_forms_agree() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let u = vel(&s, &r, &[0.0, 0.5, 0.2, -0.1], 1.0);
        let v = vel(&s, &r, &[0.0, -0.1, 0.6, 0.3], 1.0);
        let a = velocity_difference(&s, &u, &v).unwrap();
        let b = velocity_difference_wedge(&s, &u, &v).unwrap();
        assert!(a.vector().distance(b.vector()) < 1e-14);
        assert!(s.trivector_max(a.vector(), u.vector(), v.vector()) < 1e-14);
    }

    #[test]
    fn addition_requires_shared_observer() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let p = Observer::new(&s, Vector::from_slice(&[1.25, 0.0, 0.75, 0.0])).unwrap();
        let u = vel(&s, &r, &[0.0, 0.5, 0.0, 0.0], 1.0);
        let v = vel(&s, &p, &[0.0, 0.3, 0.0, 0.0], 1.0);
        assert!(matches!(velocity_add(&s, &u, &v), Err(Error::PreferredObserverMismatch)));
    }

    #[test]
    fn orthogonal_triple_is_associative() {
        // the rotation relating the two groupings acts in the plane of the
        // first two velocities and fixes the third
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let u = vel(&s, &r, &[0.0, 0.5, 0.0, 0.0], 1.0);
        let v = vel(&s, &r, &[0.0, 0.0, 0.5, 0.0], 1.0);
        let w = vel(&s, &r, &[0.0, 0.0, 0.0, 0.5], 1.0);
        let left = velocity_add(&s, &velocity_add(&s, &u, &v).unwrap(), &w).unwrap();
        let right = velocity_add(&s, &u, &velocity_add(&s, &v, &w).unwrap()).unwrap();
        assert!(left.vector().distance(right.vector()) < 1e-12);
    }

    #[test]
    fn coplanar_triple_is_not_associative() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let u = vel(&s, &r, &[0.0, 0.5, 0.0, 0.0], 1.0);
        let v = vel(&s, &r, &[0.0, 0.0, 0.5, 0.0], 1.0);
        let left = velocity_add(&s, &velocity_add(&s, &u, &v).unwrap(), &u).unwrap();
        let right = velocity_add(&s, &u, &velocity_add(&s, &v, &u).unwrap()).unwrap();
        assert!(left.vector().distance(right.vector()) > 0.01);
    }

    #[test]
    fn subtraction_fixture_and_round_trip() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let u = vel(&s, &r, &[0.0, 0.5, 0.0, 0.0], 1.0);
        let w = vel(&s, &r, &[0.0, 0.8 / 1.15, 0.0, 0.0], 1.0);
        let (v, gv) = velocity_subtract(&s, &u, &w).unwrap();
        assert_abs_diff_eq!(v.vector()[1], -0.3, epsilon = 1e-14);
        assert_abs_diff_eq!(gv, gamma(&v).unwrap(), epsilon = 1e-14);
        let (zero, _) = velocity_subtract(&s, &u, &u).unwrap();
        assert!(zero.vector().is_zero());

        let v = vel(&s, &r, &[0.0, 0.1, -0.4, 0.3], 1.0);
        let w = velocity_add(&s, &u, &v.negated()).unwrap();
        let (back, _) = velocity_subtract(&s, &u, &w).unwrap();
        assert!(back.vector().distance(v.vector()) < 1e-13);
    }

    #[test]
    fn light_speed_is_closed() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let n = Velocity3::luminal(&s, &r, Vector::from_slice(&[0.0, 0.0, 2.0, 0.0]), 2.0).unwrap();
        let v = vel(&s, &r, &[0.0, 1.2, 0.4, -0.3], 2.0);
        let w = velocity_add(&s, &n, &v).unwrap();
        assert!(w.is_luminal());
        assert_abs_diff_eq!(s.square(w.vector()).sqrt(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn acceleration_fixture() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let v = vel(&s, &r, &[0.0, 0.6, 0.0, 0.0], 1.0);
        let rest = Velocity3::zero(&s, &r, 1.0).unwrap();
        let a = Vector::from_slice(&[0.0, 1.0, 0.0, 0.0]);
        let a1 = acceleration_transform(&s, &v, &rest, &a).unwrap();
        assert_abs_diff_eq!(a1[1], 0.512, epsilon = 1e-14);
        assert_eq!(acceleration_transform(&s, &rest, &v, &a).unwrap(), a);
    }

    #[test]
    fn collinear_acceleration_reduces() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let v = vel(&s, &r, &[0.0, 0.6, 0.0, 0.0], 1.0);
        let u = vel(&s, &r, &[0.0, -0.3, 0.0, 0.0], 1.0);
        let a = Vector::from_slice(&[0.0, 2.0, 0.0, 0.0]);
        let a1 = acceleration_transform(&s, &v, &u, &a).unwrap();
        let k: f64 = 1.25 * (1.0 + 0.18);
        assert!((a1 * k.powi(3)).distance(&a) < 1e-13);
    }

    #[test]
    fn prolongation_identities_at_unit_c() {
        let s = mink();
        let r = Observer::at_rest(&s).unwrap();
        let v = vel(&s, &r, &[0.0, 0.3, 0.5, -0.2], 1.0);
        let u = vel(&s, &r, &[0.0, -0.1, 0.2, 0.6], 1.0);
        let a = Vector::from_slice(&[0.0, 1.5, -0.7, 0.4]);
        let (first, second) = prolongation_identity_residuals(&s, &v, &u, &a).unwrap();
        assert!(first < 1e-14 && second < 1e-14);

        let v = vel(&s, &r, &[0.0, 3.0, 5.0, -2.0], 10.0);
        let u = vel(&s, &r, &[0.0, -1.0, 2.0, 6.0], 10.0);
        let (first, _) = prolongation_identity_residuals(&s, &v, &u, &a).unwrap();
        assert!(first > 1e-3);
    }

    #[test]
    fn planar_identity_holds_for_planar_preferred_observer() {
        let s = mink();
        let p = Observer::at_rest(&s).unwrap();
        let v = vel(&s, &p, &[0.0, 0.6, 0.0, 0.0], 1.0);
        // R in the span of P and v̄
        let r = Observer::new(&s, Vector::from_slice(&[1.25, 0.75, 0.0, 0.0])).unwrap();
        let x = r.spatial(&s, &Vector::from_slice(&[0.3, 0.9, -0.4, 1.2]));
        assert!(planar_identity_residual(&s, &r, &v, &x).unwrap().abs() < 1e-14);
        let off = Observer::new(&s, Vector::from_slice(&[1.25, 0.0, 0.75, 0.0])).unwrap();
        let x = off.spatial(&s, &Vector::from_slice(&[0.3, 0.9, -0.4, 1.2]));
        assert!(planar_identity_residual(&s, &off, &v, &x).unwrap().abs() > 1e-3);
    }
}

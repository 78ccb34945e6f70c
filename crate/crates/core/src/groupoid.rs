//! The groupoid of observers: one velocity-morphism between any two
//! observers, composition through the endpoints.

use crate::error::{Error, Result};
use crate::kinematics::{velocity_add, Observer, Velocity3};
use crate::linker::{binary_velocity, require_lorentzian, ternary_velocity, LinkProblem};
use crate::metric::{MetricSpace, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct ObserverObject {
    observer: Observer,
    label: String,
}

impl ObserverObject {
    pub fn new(observer: Observer, label: impl Into<String>) -> Self {
        Self {
            observer,
            label: label.into(),
        }
    }

    pub fn observer(&self) -> &Observer {
        &self.observer
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// The unique arrow `source → target`, carrying `c·ϖ(source, target)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityMorphism {
    source: ObserverObject,
    target: ObserverObject,
    velocity: Vector,
}

impl VelocityMorphism {
    pub fn source(&self) -> &ObserverObject {
        &self.source
    }

    pub fn target(&self) -> &ObserverObject {
        &self.target
    }

    pub fn velocity(&self) -> &Vector {
        &self.velocity
    }
}

#[derive(Debug, Clone)]
pub struct Groupoid {
    space: MetricSpace,
    c: f64,
}

impl Groupoid {
    pub fn new(space: MetricSpace, c: f64) -> Result<Self> {
        require_lorentzian(&space)?;
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidLightSpeed(c));
        }
        Ok(Self { space, c })
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Objects are equal when their observers are in relative rigid rest;
    /// labels are ignored.
    pub fn same_object(&self, a: &ObserverObject, b: &ObserverObject) -> bool {
        a.observer.same_as(&self.space, &b.observer)
    }

    pub fn hom(&self, p: &ObserverObject, q: &ObserverObject) -> Result<VelocityMorphism> {
        let velocity = if self.same_object(p, q) {
            Vector::zeros(self.space.dim())
        } else {
            binary_velocity(&self.space, p.observer.vector(), q.observer.vector())? * self.c
        };
        Ok(VelocityMorphism {
            source: p.clone(),
            target: q.clone(),
            velocity,
        })
    }

    pub fn identity(&self, p: &ObserverObject) -> VelocityMorphism {
        VelocityMorphism {
            source: p.clone(),
            target: p.clone(),
            velocity: Vector::zeros(self.space.dim()),
        }
    }

    /// `g2 ∘ g1`, defined as `hom(g1.source, g2.target)`.
    pub fn compose(&self, g2: &VelocityMorphism, g1: &VelocityMorphism) -> Result<VelocityMorphism> {
        if !self.same_object(&g1.target, &g2.source) {
            return Err(Error::NotComposable);
        }
        self.hom(&g1.source, &g2.target)
    }

    /// Runs the loop `p → q → r → p` both through the groupoid and through
    /// the isometric velocities seen by `p`, in both association orders.
    pub fn compare_with_isometric(
        &self,
        p: &ObserverObject,
        q: &ObserverObject,
        r: &ObserverObject,
    ) -> Result<IsometricComparison> {
        let h1 = self.hom(p, q)?;
        let h2 = self.hom(q, r)?;
        let h3 = self.hom(r, p)?;
        let chain = self.compose(&h2, &h1)?;
        let direct = self.hom(p, r)?;
        let left_loop = self.compose(&self.compose(&h3, &h2)?, &h1)?;
        let right_loop = self.compose(&h3, &self.compose(&h2, &h1)?)?;

        let seen = p.observer();
        let leg = |from: &ObserverObject, to: &ObserverObject| -> Result<Velocity3> {
            let problem = LinkProblem::new(
                &self.space,
                from.observer.vector().clone(),
                to.observer.vector().clone(),
                Some(seen.vector().clone()),
            )?;
            let v = ternary_velocity(&self.space, &problem, self.c)?;
            Velocity3::new(&self.space, seen, v, self.c)
        };
        let (a, b, c) = (leg(p, q)?, leg(q, r)?, leg(r, p)?);
        let left = velocity_add(&self.space, &velocity_add(&self.space, &a, &b)?, &c)?;
        let right = velocity_add(&self.space, &a, &velocity_add(&self.space, &b, &c)?)?;
        let isometric_discrepancy = self.spatial_norm(&(left.vector() - right.vector()));

        Ok(IsometricComparison {
            chain_discrepancy: chain.velocity.distance(&direct.velocity),
            loop_discrepancy: left_loop.velocity.distance(&right_loop.velocity),
            chain,
            direct,
            legs: [a.vector().clone(), b.vector().clone(), c.vector().clone()],
            left: left.vector().clone(),
            right: right.vector().clone(),
            isometric_discrepancy,
        })
    }

    /// `√(v²)` for a vector orthogonal to some observer.
    pub fn spatial_norm(&self, v: &Vector) -> f64 {
        self.space.square(v).max(0.0).sqrt()
    }
}

/// Output of [`Groupoid::compare_with_isometric`].
#[derive(Debug, Clone, PartialEq)]
pub struct IsometricComparison {
    /// `hom(q,r) ∘ hom(p,q)`.
    pub chain: VelocityMorphism,
    /// `hom(p,r)`.
    pub direct: VelocityMorphism,
    /// Max-component distance between `chain` and `direct`.
    pub chain_discrepancy: f64,
    /// Distance between the two groupings of the loop `p → q → r → p`.
    pub loop_discrepancy: f64,
    /// Velocities of the three legs seen by `p`.
    pub legs: [Vector; 3],
    /// `(a ⊕ b) ⊕ c` over the legs.
    pub left: Vector,
    /// `a ⊕ (b ⊕ c)` over the legs.
    pub right: Vector,
    /// `|left - right|` in the metric.
    pub isometric_discrepancy: f64,
}

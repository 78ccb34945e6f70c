use isolink::check::{link_scan, run_all, CheckConfig};
use isolink::groupoid::{Groupoid, ObserverObject};
use isolink::isometry::Isometry;
use isolink::kinematics::{
    acceleration_transform, boost, coordinate_transform, einstein_transform, gamma, prolongation_identity_residuals,
    urbantke_velocity, velocity_add, velocity_difference, velocity_difference_wedge, velocity_subtract,
    EventCoordinates, Velocity3,
};
use isolink::linker::{admissibility, solve_link, LinkProblem};
use isolink::{MetricSpace, Observer, SimpleBivector, Vector};
use serde_json::{json, Value};

use crate::{CliError, Command, RunReport, Scenario, Settings};

pub fn run(command: Command, settings: &Settings, scenario: &Scenario) -> Result<RunReport, CliError> {
    let mut report = RunReport::new(command, settings);
    match command {
        Command::Check => check(&mut report, settings)?,
        _ => {
            let space = scenario.space(settings.tol)?;
            let ctx = Ctx {
                space: &space,
                settings,
                scenario,
            };
            match command {
                Command::Link => ctx.link(&mut report)?,
                Command::LinkScan => ctx.link_scan(&mut report)?,
                Command::Boost => ctx.boost(&mut report)?,
                Command::Transform => ctx.transform(&mut report)?,
                Command::Add => ctx.add(&mut report)?,
                Command::Accel => ctx.accel(&mut report)?,
                Command::Groupoid => ctx.groupoid(&mut report)?,
                Command::Check => unreachable!("handled above"),
            }
        }
    }
    Ok(report)
}

fn vec_json(v: &Vector) -> Value {
    json!(v.components())
}

fn bivector_json(b: &SimpleBivector) -> Value {
    json!([b.first().components(), b.second().components()])
}

fn isometry_json(l: &Isometry) -> Value {
    json!({
        "gamma": l.gamma(),
        "generator": l.generator().map(bivector_json),
        "operator": l.map().to_rows(),
    })
}

fn check(report: &mut RunReport, settings: &Settings) -> Result<(), CliError> {
    let cfg = CheckConfig {
        seed: settings.seed,
        samples: settings.samples,
        tol: settings.tol,
        c: settings.c,
        inject_fault: settings.inject_fault,
    };
    let result = run_all(&cfg);
    for r in &result.records {
        report.push(serde_json::to_value(r).expect("records serialize"));
    }
    report.set("properties", json!(result.records.len()));
    report.set("failures", json!(result.failures));
    report.set("tolerance_induced", json!(result.tolerance_induced));
    report.set("inject_fault", json!(settings.inject_fault));
    if !result.passed() {
        report.fail_property();
    }
    Ok(())
}

struct Ctx<'a> {
    space: &'a MetricSpace,
    settings: &'a Settings,
    scenario: &'a Scenario,
}

impl Ctx<'_> {
    fn name<'n>(&'n self, given: &'n Option<String>, default: &'n str) -> &'n str {
        given.as_deref().unwrap_or(default)
    }

    fn vector(&self, given: &Option<String>, default: &str) -> Result<Vector, CliError> {
        self.scenario.vector(self.space, self.name(given, default))
    }

    fn observer(&self, given: &Option<String>) -> Result<Observer, CliError> {
        self.scenario.observer(self.space, given.as_deref())
    }

    fn velocity(&self, observer: &Observer, given: &Option<String>, default: &str) -> Result<Velocity3, CliError> {
        let v = self.vector(given, default)?;
        Ok(Velocity3::new(self.space, observer, v, self.settings.c)?)
    }

    fn link(&self, report: &mut RunReport) -> Result<(), CliError> {
        let p = &self.scenario.params;
        let r = self.vector(&p.initial, "R")?;
        let s = self.vector(&p.target, "S")?;
        let preferred = match &p.preferred {
            Some(name) => Some(self.scenario.vector(self.space, name)?),
            None if self.scenario.has("P") => Some(self.scenario.vector(self.space, "P")?),
            None => None,
        };
        let problem = LinkProblem::new(self.space, r.clone(), s.clone(), preferred)?;
        let adm = match problem.preferred() {
            Some(_) => Some(admissibility(self.space, &problem)?),
            None => None,
        };
        let solution = solve_link(self.space, &problem)?;
        let residual = solution.isometry.apply(&r).distance(&s);
        let mut record = isometry_json(&solution.isometry);
        let obj = record.as_object_mut().expect("object");
        obj.insert("kind".into(), json!(solution.kind));
        obj.insert("mu".into(), json!(solution.mu));
        obj.insert("admissibility".into(), json!(adm));
        obj.insert("residual".into(), json!(residual));
        report.push(record);
        report.set("residual", json!(residual));
        if residual > self.settings.tol.rel * s.max_abs().max(1.0) {
            report.fail_property();
        }
        Ok(())
    }

    fn link_scan(&self, report: &mut RunReport) -> Result<(), CliError> {
        let p = &self.scenario.params;
        let r = self.vector(&p.initial, "R")?;
        let s = self.vector(&p.target, "S")?;
        let scan = link_scan(self.space, &r, &s, self.settings.seed, self.settings.samples)?;
        for rec in &scan.records {
            report.push(serde_json::to_value(rec).expect("records serialize"));
        }
        report.set("distinct_links", json!(scan.distinct_links));
        report.set("pairwise_distinct_fraction", json!(scan.pairwise_distinct_fraction));
        report.set("planar_rays", json!(scan.planar_rays));
        report.set("planar_clusters", json!(scan.planar_clusters));
        report.set("planar_spread", json!(scan.planar_spread));
        report.set("gamma_min", json!(scan.gamma_min));
        report.set("gamma_max", json!(scan.gamma_max));
        report.set("max_residual", json!(scan.max_residual));
        report.set("identity_at_coincidence", json!(scan.identity_at_coincidence));
        if !scan.identity_at_coincidence || scan.max_residual > self.settings.tol.rel {
            report.fail_property();
        }
        Ok(())
    }

    fn boost(&self, report: &mut RunReport) -> Result<(), CliError> {
        let p = &self.scenario.params;
        let obs = self.observer(&p.observer)?;
        let v = self.velocity(&obs, &p.velocity, "v")?;
        let l = boost(self.space, &v)?;
        let mut record = isometry_json(&l);
        let obj = record.as_object_mut().expect("object");
        obj.insert("observer".into(), vec_json(obs.vector()));
        obj.insert("velocity".into(), vec_json(v.vector()));
        obj.insert("boosted_observer".into(), vec_json(&l.apply(obs.vector())));
        report.push(record);
        Ok(())
    }

    fn transform(&self, report: &mut RunReport) -> Result<(), CliError> {
        let p = &self.scenario.params;
        let c = self.settings.c;
        let reference = self.observer(&p.reference)?;
        let preferred = match &p.observer {
            Some(_) => self.observer(&p.observer)?,
            None => reference.clone(),
        };
        let v = self.velocity(&preferred, &p.velocity, "v")?;
        let e = self.vector(&p.event, "e")?;
        let out = coordinate_transform(self.space, &reference, &v, &e)?;
        let before = EventCoordinates::split(self.space, &reference, &e, c)?;
        let ct = c * out.t_prime;
        let mut record = json!({
            "t": before.t,
            "x": vec_json(&before.x),
            "t_prime": out.t_prime,
            "x_prime": vec_json(&out.x_prime),
            "r_dot_p": out.rp,
            "r_dot_v": out.rv,
            "p_dot_x": out.px,
            "interval": self.space.scalar_product(&e, &e)?,
            "interval_prime": -ct * ct + self.space.scalar_product(&out.x_prime, &out.x_prime)?,
        });
        if preferred.same_as(self.space, &reference) {
            let ein = einstein_transform(self.space, &v, &before)?;
            let obj = record.as_object_mut().expect("object");
            obj.insert("einstein_t_prime".into(), json!(ein.t));
            obj.insert("einstein_x_prime".into(), vec_json(&ein.x));
            if let Ok((u, g)) = urbantke_velocity(self.space, &before, &ein, c) {
                obj.insert("urbantke_velocity".into(), vec_json(&u));
                obj.insert("urbantke_gamma".into(), json!(g));
            }
        }
        report.push(record);
        Ok(())
    }

    fn add(&self, report: &mut RunReport) -> Result<(), CliError> {
        let p = &self.scenario.params;
        let obs = self.observer(&p.observer)?;
        let u = self.velocity(&obs, &p.velocity, "u")?;
        let v = self.velocity(&obs, &p.second, "v")?;
        let sum = velocity_add(self.space, &u, &v)?;
        let diff = velocity_difference(self.space, &u, &v)?;
        let diff_wedge = velocity_difference_wedge(self.space, &u, &v)?;
        let (recovered, gamma_v) = velocity_subtract(self.space, &u, &diff)?;
        report.push(json!({
            "u": vec_json(u.vector()),
            "v": vec_json(v.vector()),
            "sum": vec_json(sum.vector()),
            "difference": vec_json(diff.vector()),
            "difference_wedge_form": vec_json(diff_wedge.vector()),
            "forms_discrepancy": diff.vector().distance(diff_wedge.vector()),
            "subtracted": vec_json(recovered.vector()),
            "subtracted_gamma": gamma_v,
            "gamma_v": gamma(&v)?,
        }));
        Ok(())
    }

    fn accel(&self, report: &mut RunReport) -> Result<(), CliError> {
        let p = &self.scenario.params;
        let obs = self.observer(&p.observer)?;
        let v = self.velocity(&obs, &p.velocity, "v")?;
        let u = self.velocity(&obs, &p.second, "u")?;
        let a = self.vector(&p.acceleration, "a")?;
        let a_prime = acceleration_transform(self.space, &v, &u, &a)?;
        let (first, second) = prolongation_identity_residuals(self.space, &v, &u, &a)?;
        report.push(json!({
            "v": vec_json(v.vector()),
            "u": vec_json(u.vector()),
            "a": vec_json(&a),
            "a_prime": vec_json(&a_prime),
            "identity_residuals": [first, second],
        }));
        Ok(())
    }

    fn groupoid(&self, report: &mut RunReport) -> Result<(), CliError> {
        let g = Groupoid::new(self.space.clone(), self.settings.c)?;
        let names: Vec<String> = match &self.scenario.params.objects {
            Some(list) => list.clone(),
            None => self.scenario.observers.keys().cloned().collect(),
        };
        let objects: Vec<ObserverObject> = names
            .iter()
            .map(|n| Ok(ObserverObject::new(self.scenario.observer(self.space, Some(n))?, n.clone())))
            .collect::<Result<_, CliError>>()?;
        for a in &objects {
            for b in &objects {
                let h = g.hom(a, b)?;
                report.push(json!({
                    "source": a.label(),
                    "target": b.label(),
                    "velocity": vec_json(h.velocity()),
                }));
            }
        }
        if let [p, q, r, ..] = objects.as_slice() {
            let rep = g.compare_with_isometric(p, q, r)?;
            report.push(json!({
                "comparison": [p.label(), q.label(), r.label()],
                "chain_velocity": vec_json(rep.chain.velocity()),
                "direct_velocity": vec_json(rep.direct.velocity()),
                "chain_discrepancy": rep.chain_discrepancy,
                "groupoid_loop_discrepancy": rep.loop_discrepancy,
                "legs": rep.legs.iter().map(vec_json).collect::<Vec<_>>(),
                "isometric_left": vec_json(&rep.left),
                "isometric_right": vec_json(&rep.right),
                "isometric_discrepancy": rep.isometric_discrepancy,
            }));
            report.set("isometric_discrepancy", json!(rep.isometric_discrepancy));
            report.set("groupoid_loop_discrepancy", json!(rep.loop_discrepancy));
            if rep.loop_discrepancy != 0.0 || rep.chain_discrepancy != 0.0 {
                report.fail_property();
            }
        }
        report.set("objects", json!(names));
        Ok(())
    }
}

//! Dispatch from parsed commands to the numerical core.

use nonlocal_core::balls::{s_mean, solve_dirichlet, solve_poisson, BallGeometry};
use nonlocal_core::dynamics::{
    integrate, pair_collision_bound, pair_collision_time, DislocationState, StepControl, Stress,
    Termination, COLLISION_BRACKET,
};
use nonlocal_core::fraccalc::{
    caputo_derivative, caputo_extend, caputo_sequence, marchaud_derivative_sided, marchaud_extend,
    marchaud_trace, CaputoSequenceParams, MarchaudExtension, Side, TRACE_GRID,
};
use nonlocal_core::fraclap::{frac_laplacian_semigroup, frac_laplacian_si};
use nonlocal_core::geometry::{
    alpha_estimate_with, boundary_chart, coarea_check, frac_mean_curvature_graph,
    frac_mean_curvature_pv, frac_perimeter_with, parse_set, stickiness_threshold,
    CurvatureQuery, PerimeterMethod, TangentBall, PV_GRID,
};
use nonlocal_core::specfun::constants;
use nonlocal_core::walk::{check_start, finish_payoff, WalkConfig};
use nonlocal_core::{Error, FracParams, QuadSpec, RngStream, ScalarField};

use crate::cli::*;
use crate::output::Outcome;
use crate::par::{parallel, walk_total};
use crate::presets::{extension_history, field, history};

/// Failures are either bad input (exit 2) or numerical (exit 3).
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

pub struct Ctx {
    pub seed: u64,
    /// Stream id; the grid index in scans.
    pub stream_id: u64,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
}

impl Ctx {
    fn spec(&self, default: QuadSpec) -> QuadSpec {
        QuadSpec {
            rel_tol: self.rel_tol.unwrap_or(default.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(default.abs_tol),
            ..default
        }
    }

    fn stream(&self) -> RngStream {
        RngStream::new(self.seed, self.stream_id)
    }
}

type Out = Result<Outcome, Failure>;

pub fn run(cmd: &Command, s: f64, ctx: &Ctx) -> Out {
    match cmd {
        Command::Constants(a) => constants_cmd(a, s),
        Command::Fraclap(f) => fraclap(f, s, ctx),
        Command::Ball(b) => ball(b, s, ctx),
        Command::Caputo(c) => caputo(c, s, ctx),
        Command::Marchaud(m) => marchaud(m, s, ctx),
        Command::Geom(g) => geom(g, s, ctx),
        Command::Walk(Walk::Payoff(w)) => walk(w, s, ctx),
        Command::Dislocation(Dislocation::Run(r)) => dislocation(r, s),
    }
}

/// Dotted name of the subcommand, e.g. `geom.alpha`.
pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Constants(_) => "constants",
        Command::Fraclap(Fraclap::Si(_)) => "fraclap.si",
        Command::Fraclap(Fraclap::Semigroup(_)) => "fraclap.semigroup",
        Command::Ball(Ball::Dirichlet(_)) => "ball.dirichlet",
        Command::Ball(Ball::Poisson(_)) => "ball.poisson",
        Command::Ball(Ball::Mean(_)) => "ball.mean",
        Command::Caputo(Caputo::Deriv(_)) => "caputo.deriv",
        Command::Caputo(Caputo::Extend(_)) => "caputo.extend",
        Command::Caputo(Caputo::Sequence(_)) => "caputo.sequence",
        Command::Marchaud(Marchaud::Deriv(_)) => "marchaud.deriv",
        Command::Marchaud(Marchaud::Extend(_)) => "marchaud.extend",
        Command::Marchaud(Marchaud::Trace(_)) => "marchaud.trace",
        Command::Geom(Geom::Perimeter(_)) => "geom.perimeter",
        Command::Geom(Geom::Curvature(_)) => "geom.curvature",
        Command::Geom(Geom::CurvaturePv(_)) => "geom.curvature-pv",
        Command::Geom(Geom::Alpha(_)) => "geom.alpha",
        Command::Geom(Geom::Delta(_)) => "geom.delta",
        Command::Geom(Geom::Coarea(_)) => "geom.coarea",
        Command::Walk(Walk::Payoff(_)) => "walk.payoff",
        Command::Dislocation(Dislocation::Run(_)) => "dislocation.run",
    }
}

fn constants_cmd(a: &Constants, s: f64) -> Out {
    let t = constants(FracParams::new(a.n, s)?);
    Ok(Outcome::exact(t.c_frac)
        .detail("c_frac", t.c_frac)
        .detail("c_kernel", t.c_kernel)
        .detail("a_fund", t.a_fund)
        .detail("kappa", t.kappa)
        .detail("omega_n", t.omega_n)
        .detail("k_ratio", t.k_ratio))
}

fn fraclap(f: &Fraclap, s: f64, ctx: &Ctx) -> Out {
    let (a, si) = match f {
        Fraclap::Si(a) => (a, true),
        Fraclap::Semigroup(a) => (a, false),
    };
    let p = FracParams::new(a.n, s)?;
    let u = field(&a.field, a.n, s)?;
    let spec = ctx.spec(QuadSpec::default());
    let e = if si {
        frac_laplacian_si(&u, &a.x, p, &spec)?
    } else {
        frac_laplacian_semigroup(&u, &a.x, p, &spec)?
    };
    Ok(e.into())
}

/// Field, ball geometry and ball-relative point for the ball and walk commands.
fn ball_setup(b: &BallData, s: f64) -> Result<(ScalarField, BallGeometry, Vec<f64>), Failure> {
    let p = FracParams::new(b.n, s)?;
    let mut g = field(&b.data, b.n, s)?;
    if let Some(r) = b.truncate {
        g = g.truncate(&vec![0.0; b.n], r);
    }
    let center = b.center.clone().unwrap_or_else(|| vec![0.0; b.n]);
    if center.len() != b.n || b.x.len() != b.n {
        return Err(Failure::Usage(format!("center and x need {} coordinates", b.n)));
    }
    let neg: Vec<f64> = center.iter().map(|c| -c).collect();
    let x: Vec<f64> = b.x.iter().zip(&center).map(|(x, c)| x - c).collect();
    Ok((g.translate(&neg), BallGeometry::new(b.r, p)?, x))
}

fn ball(b: &Ball, s: f64, ctx: &Ctx) -> Out {
    let spec = ctx.spec(QuadSpec::default());
    let e = match b {
        Ball::Dirichlet(a) => {
            let (g, geom, x) = ball_setup(a, s)?;
            solve_dirichlet(&g, &geom, &x, &spec)?
        }
        Ball::Poisson(a) => {
            let (h, geom, x) = ball_setup(a, s)?;
            solve_poisson(&h, &geom, &x, &spec)?
        }
        Ball::Mean(a) => {
            let p = FracParams::new(a.n, s)?;
            s_mean(&field(&a.field, a.n, s)?, &a.x, a.rho, p, &spec)?
        }
    };
    Ok(e.into())
}

fn caputo(c: &Caputo, s: f64, ctx: &Ctx) -> Out {
    let spec = ctx.spec(QuadSpec::default());
    match c {
        Caputo::Deriv(a) => {
            let u = history(&a.preset, a.a, a.lambda)?;
            Ok(caputo_derivative(&u, s, a.x, &spec)?.into())
        }
        Caputo::Extend(a) => {
            let (phi, lo, hi) = extension_history(&a.preset)?;
            Ok(caputo_extend(&phi, lo, hi, s, a.x, &spec)?.into())
        }
        Caputo::Sequence(a) => {
            let (psi0, _, _) = extension_history(&a.preset)?;
            let params = CaputoSequenceParams::new(psi0, s, a.j, &spec)?;
            let v = caputo_sequence(&params, a.x, &spec)?;
            Ok(Outcome::exact(v)
                .detail("kappa", params.kappa)
                .detail("limit", params.kappa * a.x.powf(s)))
        }
    }
}

fn marchaud(m: &Marchaud, s: f64, ctx: &Ctx) -> Out {
    let spec = ctx.spec(QuadSpec::default());
    let f = match m {
        Marchaud::Deriv(f) | Marchaud::Trace(f) => f,
        Marchaud::Extend(e) => &e.func,
    };
    let phi = history(&f.preset, f64::NEG_INFINITY, f.lambda)?;
    let side = match f.side {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    };
    let ext = |phi| match side {
        Side::Left => MarchaudExtension::new(phi, s),
        Side::Right => MarchaudExtension::backward(phi, s),
    };
    let norm = if f.normalized {
        s / nonlocal_core::specfun::gamma(1.0 - s)?
    } else {
        1.0
    };
    match m {
        Marchaud::Deriv(_) => Ok(marchaud_derivative_sided(&phi, s, f.t, side, f.normalized, &spec)?.into()),
        Marchaud::Extend(e) => Ok(marchaud_extend(&ext(phi)?, e.x, f.t, &spec)?.into()),
        Marchaud::Trace(_) => {
            let mut e = marchaud_trace(&ext(phi)?, f.t, &TRACE_GRID, &spec)?;
            e.value *= norm;
            e.stderr *= norm;
            Ok(e.into())
        }
    }
}

fn set(desc: &str) -> Result<nonlocal_core::geometry::GeomSet, Failure> {
    Ok(parse_set(desc)?)
}

fn point2(q: &[f64]) -> Result<(), Failure> {
    if q.len() != 2 {
        return Err(Failure::Usage("boundary point needs two coordinates".into()));
    }
    Ok(())
}

fn geom(g: &Geom, s: f64, ctx: &Ctx) -> Out {
    match g {
        Geom::Perimeter(a) => {
            let (e, om) = (set(&a.set)?, set(&a.domain)?);
            let method = match a.method {
                PerimeterMethodArg::Closed => PerimeterMethod::ClosedForm1d,
                PerimeterMethodArg::Mc => PerimeterMethod::MonteCarlo {
                    samples: a.samples,
                    stream: ctx.stream(),
                },
            };
            let spec = ctx.spec(QuadSpec::default());
            Ok(frac_perimeter_with(&e, &om, s, &method, &spec, &parallel)?.into())
        }
        Geom::Curvature(a) => {
            point2(&a.q)?;
            let e = set(&a.set)?;
            let (graph, _, radius) = boundary_chart(&e, &a.q)?;
            let mut query = CurvatureQuery::for_radius(radius);
            query.r = a.r.unwrap_or(query.r);
            query.h = a.h.unwrap_or(query.h);
            query.spec = ctx.spec(query.spec);
            Ok(Outcome::from(frac_mean_curvature_graph(&e, &graph, s, &query)?)
                .detail("r", query.r)
                .detail("h", query.h))
        }
        Geom::CurvaturePv(a) => {
            point2(&a.q)?;
            let e = set(&a.set)?;
            let tangent = match &a.tangent {
                Some(t) if t.len() == 3 => TangentBall {
                    center: t[..2].to_vec(),
                    radius: t[2],
                },
                Some(_) => return Err(Failure::Usage("tangent ball is cx,cy,radius".into())),
                None => boundary_chart(&e, &a.q)?.1,
            };
            let spec = ctx.spec(QuadSpec::new(1e-10, 1e-12));
            Ok(frac_mean_curvature_pv(&e, &a.q, s, &tangent, &PV_GRID, &spec)?.into())
        }
        Geom::Alpha(a) => {
            let e = set(&a.set)?;
            let r = alpha_estimate_with(&e, s, a.samples, &ctx.stream(), &parallel)?;
            let mut o = Outcome {
                value: r.s_alpha,
                stderr: r.stderr,
                converged: r.s_alpha.is_finite(),
                details: Default::default(),
            }
            .detail("samples", a.samples);
            if let Some(x) = r.extrapolated {
                o = o
                    .detail("extrapolated", x.value)
                    .detail("extrapolated_stderr", x.stderr);
            }
            if let (Some(hi), Some(lo)) = (r.alpha_bar, r.alpha_underbar) {
                o = o.detail("alpha_bar", hi).detail("alpha_underbar", lo);
            }
            Ok(o)
        }
        Geom::Delta(a) => Ok(Outcome::exact(stickiness_threshold(a.alpha_bar, a.n, s)?)),
        Geom::Coarea(a) => {
            let u = field(&a.field, 1, s)?;
            let om = set(&a.domain)?;
            let spec = ctx.spec(QuadSpec::new(1e-9, 1e-11));
            let (lhs, rhs) = coarea_check(&u, &om, s, &spec)?;
            Ok(Outcome {
                value: lhs.value,
                stderr: lhs.stderr,
                converged: lhs.converged && rhs.converged,
                details: Default::default(),
            }
            .detail("level_sets", rhs.value)
            .detail("level_sets_stderr", rhs.stderr)
            .detail("difference", lhs.value - rhs.value))
        }
    }
}

fn walk(w: &Payoff, s: f64, ctx: &Ctx) -> Out {
    let (g, geom, x) = ball_setup(&w.ball, s)?;
    let cfg = WalkConfig::new(geom.p, w.h, geom, g)?.with_max_steps(w.max_steps);
    check_start(&x, &cfg)?;
    if w.trials == 0 {
        return Err(Failure::Usage("need at least one trial".into()));
    }
    let total = walk_total(&x, &cfg, w.trials, &ctx.stream());
    let e = finish_payoff(&total, w.trials)?;
    Ok(Outcome::from(e.estimate())
        .detail("tau", cfg.tau)
        .detail("truncated_paths", e.truncated_paths))
}

fn dislocation(r: &Run, s: f64) -> Out {
    let orient = r.orientations.clone().unwrap_or_else(|| vec![1; r.positions.len()]);
    let sigma = if r.sigma == 0.0 {
        Stress::Zero
    } else {
        Stress::Constant(r.sigma)
    };
    let st = DislocationState::new(r.positions.clone(), orient.clone(), s, r.gamma, sigma)?;
    let traj = integrate(&st, r.t_end, &StepControl::default(), r.epsilon)?;
    let collided = traj.terminated == Termination::Collision;
    let t_stop = *traj.times.last().unwrap_or(&st.t);
    let events: Vec<serde_json::Value> = traj
        .collision_events
        .iter()
        .map(|c| serde_json::json!({"time": c.time, "pair": [c.indices.0, c.indices.1], "gap": c.gap}))
        .collect();
    let mut o = Outcome {
        value: t_stop,
        stderr: if collided { COLLISION_BRACKET } else { 0.0 },
        converged: true,
        details: Default::default(),
    }
    .detail("terminated", if collided { "collision" } else { "t_end" })
    .detail("final_positions", traj.final_positions())
    .detail("collision_events", events)
    .detail("steps", traj.times.len() - 1);
    if r.positions.len() == 2 && orient[0] != orient[1] {
        let theta = r.positions[1] - r.positions[0];
        if r.sigma == 0.0 {
            o = o.detail("pair_collision_time", pair_collision_time(theta, s, r.gamma));
        } else {
            o = o.detail("pair_collision_bound", pair_collision_bound(theta, s, r.gamma, r.sigma.abs()));
        }
    }
    Ok(o)
}

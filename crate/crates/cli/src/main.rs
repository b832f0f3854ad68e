//! Command-line front end. Every command prints one JSON document.
//!
//! Exit status: 0 on success, 1 for a module error or a failed
//! verification, 2 for malformed input.

mod input;

use std::fs;
use std::process::ExitCode;

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use g2theta::characteristics::enumerate;
use g2theta::json::{matrix_to_rows, pair, vector_to_pairs};
use g2theta::locus::{classify_point, slice_family, trace_zero_curve_along, verify_reducible_structure, ClassifyTolerances, DEFAULT_LOCUS_TARGET_ERR};
use g2theta::strata_nerve::{build_nerve, compute_hc, gysin_vanishing, kernel_report, GradedRanks};
use g2theta::surface_group::{dehn_is_trivial, dehn_reduce, figure2_verify, splitting_from_scc, SurfaceWord};
use g2theta::theta::{
    check_parity, check_product, check_shift_reference, heat_residual, theta, theta_jet, thetanull, transformation_table,
    DEFAULT_TARGET_ERR,
};
use g2theta::{verification, SymplecticIntMatrix};

use input::Inputs;

#[derive(Debug)]
pub enum CliError {
    Malformed(String),
    Module(g2theta::Error),
}

impl From<g2theta::Error> for CliError {
    fn from(e: g2theta::Error) -> Self {
        CliError::Module(e)
    }
}

#[derive(Parser)]
#[command(name = "g2theta", version, about = "Genus-2 theta functions, theta divisors and surface-group splittings")]
struct Cli {
    /// Absolute truncation error requested from theta evaluations.
    #[arg(long, global = true, default_value_t = DEFAULT_TARGET_ERR)]
    target_err: f64,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// JSON object supplying inputs by key (`-` reads standard input).
    #[arg(long = "json", global = true, value_name = "FILE|-")]
    json_input: Option<String>,
    /// Destination of the report (`-` is standard output).
    #[arg(long, global = true, value_name = "FILE|-")]
    out: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Theta characteristics.
    #[command(subcommand)]
    Char(CharCmd),
    /// Siegel space and the symplectic group.
    #[command(subcommand)]
    Siegel(SiegelCmd),
    /// Theta series evaluation and identity checks.
    #[command(subcommand)]
    Theta(ThetaCmd),
    /// Zero locus of theta on the abelian surface.
    #[command(subcommand)]
    Locus(LocusCmd),
    /// Words in the genus-2 surface group.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Nerve model of the reducible locus.
    #[command(subcommand)]
    Strata(StrataCmd),
    /// Runs the library acceptance criteria.
    VerifyAll,
}

#[derive(Subcommand)]
enum CharCmd {
    Enumerate {
        #[arg(long)]
        g: Option<usize>,
    },
    Parity {
        #[arg(long)]
        delta: Option<String>,
    },
    DirectSum {
        #[arg(long)]
        delta1: Option<String>,
        #[arg(long)]
        delta2: Option<String>,
    },
    Split {
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        g1: Option<usize>,
    },
    HalfPeriod {
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        omega: Option<String>,
    },
}

#[derive(Subcommand)]
enum SiegelCmd {
    /// `M·Ω`, and `z(CΩ+D)⁻¹` when `--z` is given.
    Act {
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        omega: Option<String>,
        #[arg(long)]
        z: Option<String>,
    },
    DirectSum {
        #[arg(long)]
        omega1: Option<String>,
        #[arg(long)]
        omega2: Option<String>,
    },
    Reducible {
        #[arg(long)]
        omega: Option<String>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    Reduce {
        #[arg(long)]
        omega: Option<String>,
        #[arg(long)]
        z: Option<String>,
    },
    Generators,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    z: Option<String>,
}

#[derive(Subcommand)]
enum ThetaCmd {
    Eval {
        #[command(flatten)]
        p: PointArgs,
        /// Also report the z-gradient, z-Hessian and the gradient in Ω.
        #[arg(long)]
        jet: bool,
    },
    NullTable {
        #[arg(long)]
        g: Option<usize>,
        #[arg(long)]
        omega: Option<String>,
    },
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Subcommand)]
enum CheckCmd {
    Heat {
        #[command(flatten)]
        p: PointArgs,
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },
    Parity {
        #[command(flatten)]
        p: PointArgs,
    },
    Product {
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        omega1: Option<String>,
        #[arg(long)]
        omega2: Option<String>,
        #[arg(long)]
        z: Option<String>,
    },
    Shift {
        #[command(flatten)]
        p: PointArgs,
    },
    Transform {
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        omega: Option<String>,
        /// Restrict the report to one characteristic.
        #[arg(long)]
        delta: Option<String>,
    },
}

#[derive(Subcommand)]
enum LocusCmd {
    Trace {
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        omega: Option<String>,
        #[arg(long, conflicts_with = "cell_grid")]
        slices: Option<usize>,
        /// Slices on a `k × k` grid of the cell.
        #[arg(long)]
        cell_grid: Option<usize>,
        #[arg(long, default_value_t = 0)]
        axis: usize,
    },
    Classify {
        #[command(flatten)]
        p: PointArgs,
    },
    VerifyReducible {
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        omega1: Option<String>,
        #[arg(long)]
        omega2: Option<String>,
        #[arg(long)]
        slices: Option<usize>,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Free reduction.
    Reduce {
        #[arg(long)]
        word: Option<String>,
    },
    /// Word problem by Dehn's algorithm.
    Trivial {
        #[arg(long)]
        word: Option<String>,
    },
    Abelianize {
        #[arg(long)]
        word: Option<String>,
    },
    /// Splitting induced by `c[u,v]c⁻¹`.
    Splitting {
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
    },
    VerifyFigure2,
}

#[derive(Args)]
struct NerveArgs {
    #[arg(long)]
    nbeta: Option<usize>,
    #[arg(long)]
    radius: Option<usize>,
}

#[derive(Subcommand)]
enum StrataCmd {
    Nerve {
        #[command(flatten)]
        n: NerveArgs,
        /// Include the component and pair lists.
        #[arg(long)]
        list: bool,
    },
    Hc {
        #[command(flatten)]
        n: NerveArgs,
    },
    /// Degrees forced to vanish; ranks come from `--hc` or from a nerve.
    Gysin {
        #[arg(long)]
        hc: Option<String>,
        #[command(flatten)]
        n: NerveArgs,
        #[arg(long, default_value_t = 3)]
        open_from: i64,
        #[arg(long, default_value_t = 8)]
        dim: i64,
    },
    KernelRank {
        #[arg(long)]
        nbeta: Option<usize>,
    },
}

struct Ctx {
    inputs: Inputs,
    target_err: f64,
    seed: u64,
}

type Outcome = Result<(Value, bool), CliError>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn ok(v: Value) -> Outcome {
    Ok((v, true))
}

fn word(ctx: &Ctx, flag: Option<&str>, key: &str, default_empty: bool) -> Result<SurfaceWord, CliError> {
    match ctx.inputs.text(flag, key)? {
        Some(s) => s.parse().map_err(|e: g2theta::Error| CliError::Malformed(format!("{key}: {e}"))),
        None if default_empty => Ok(SurfaceWord::identity()),
        None => Err(CliError::Malformed(format!("missing required input `{key}`"))),
    }
}

fn nerve_params(ctx: &Ctx, n: &NerveArgs) -> Result<(usize, usize), CliError> {
    let nbeta = ctx.inputs.number(n.nbeta, "nbeta")?.ok_or_else(|| CliError::Malformed("missing required input `nbeta`".into()))?;
    let radius = ctx.inputs.number(n.radius, "radius")?.unwrap_or(0);
    Ok((nbeta, radius))
}

fn run_char(ctx: &Ctx, cmd: &CharCmd) -> Outcome {
    let inp = &ctx.inputs;
    match cmd {
        CharCmd::Enumerate { g } => {
            let g = inp.number(*g, "g")?.unwrap_or(2);
            let rows: Vec<Value> =
                enumerate(g)?.iter().map(|d| json!({ "delta": d, "label": d.to_string(), "parity": d.parity() })).collect();
            ok(json!({ "g": g, "characteristics": rows }))
        }
        CharCmd::Parity { delta } => {
            let d = inp.characteristic(delta.as_deref(), "delta")?;
            ok(json!({ "delta": d, "parity": d.parity() }))
        }
        CharCmd::DirectSum { delta1, delta2 } => {
            let d1 = inp.characteristic(delta1.as_deref(), "delta1")?;
            let d2 = inp.characteristic(delta2.as_deref(), "delta2")?;
            ok(json!({ "delta": d1.direct_sum(&d2) }))
        }
        CharCmd::Split { delta, g1 } => {
            let d = inp.characteristic(delta.as_deref(), "delta")?;
            let g1 = inp.number(*g1, "g1")?.ok_or_else(|| CliError::Malformed("missing required input `g1`".into()))?;
            let (a, b) = d.split(g1)?;
            ok(json!({ "delta1": a, "delta2": b }))
        }
        CharCmd::HalfPeriod { delta, omega } => {
            let d = inp.characteristic(delta.as_deref(), "delta")?;
            let om = inp.period_matrix(omega.as_deref(), "omega")?;
            ok(json!({ "half_period": vector_to_pairs(&d.half_period(om.matrix())?) }))
        }
    }
}

fn run_siegel(ctx: &Ctx, cmd: &SiegelCmd) -> Outcome {
    let inp = &ctx.inputs;
    match cmd {
        SiegelCmd::Act { m, omega, z } => {
            let m = inp.symplectic(m.as_deref(), "m")?;
            let om = inp.period_matrix(omega.as_deref(), "omega")?;
            let has_z = z.is_some() || inp.optional::<Value>(None, "z")?.is_some();
            if has_z {
                let zv = inp.vector(z.as_deref(), "z")?;
                let (image, w) = m.act_on_pair(&om, &zv)?;
                ok(json!({ "omega": image, "z": vector_to_pairs(&w) }))
            } else {
                ok(json!({ "omega": m.act_on_siegel(&om)? }))
            }
        }
        SiegelCmd::DirectSum { omega1, omega2 } => {
            let a = inp.period_matrix(omega1.as_deref(), "omega1")?;
            let b = inp.period_matrix(omega2.as_deref(), "omega2")?;
            ok(json!({ "omega": a.direct_sum(&b) }))
        }
        SiegelCmd::Reducible { omega, tol } => {
            let om = inp.period_matrix(omega.as_deref(), "omega")?;
            ok(json!({ "block_reducible": om.is_block_reducible(*tol)?, "tol": tol }))
        }
        SiegelCmd::Reduce { omega, z } => {
            let om = inp.period_matrix(omega.as_deref(), "omega")?;
            let zv = inp.vector(z.as_deref(), "z")?;
            let p = om.reduce_mod_lattice(&zv)?;
            let coords = p.lattice_coords.map(|(m1, m2)| json!({ "m1": m1, "m2": m2 }));
            ok(json!({ "z": vector_to_pairs(&p.z), "lattice_coords": coords }))
        }
        SiegelCmd::Generators => {
            let gens: Vec<Value> =
                SymplecticIntMatrix::genus2_generators().into_iter().map(|(name, m)| json!({ "name": name, "m": m })).collect();
            ok(json!({ "generators": gens }))
        }
    }
}

fn run_theta(ctx: &Ctx, cmd: &ThetaCmd) -> Outcome {
    let inp = &ctx.inputs;
    let point = |p: &PointArgs| -> Result<_, CliError> {
        Ok((
            inp.characteristic(p.delta.as_deref(), "delta")?,
            inp.period_matrix(p.omega.as_deref(), "omega")?,
            inp.vector(p.z.as_deref(), "z")?,
        ))
    };
    match cmd {
        ThetaCmd::Eval { p, jet } => {
            let (d, om, z) = point(p)?;
            if *jet {
                let j = theta_jet(&d, &om, &z, ctx.target_err)?;
                let full: Vec<_> = j.full_gradient().into_iter().map(pair).collect();
                ok(json!({
                    "value": pair(j.value),
                    "grad_z": vector_to_pairs(&j.grad_z),
                    "hess_z": matrix_to_rows(&j.hess_z),
                    "grad_omega": matrix_to_rows(&j.omega_gradient()),
                    "full_gradient": full,
                    "truncation_bound": j.truncation_bound,
                    "radius_used": j.radius_used,
                }))
            } else {
                ok(to_value(&theta(&d, &om, &z, ctx.target_err)?))
            }
        }
        ThetaCmd::NullTable { g, omega } => {
            let om = inp.period_matrix(omega.as_deref(), "omega")?;
            let g = inp.number(*g, "g")?.unwrap_or(om.genus());
            if g != om.genus() {
                return Err(CliError::Malformed(format!("--g {g} does not match the genus {} of omega", om.genus())));
            }
            let mut rows = Vec::new();
            for d in enumerate(g)? {
                let r = thetanull(&d, &om, ctx.target_err)?;
                rows.push(json!({
                    "delta": d,
                    "label": d.to_string(),
                    "parity": d.parity(),
                    "value": pair(r.value),
                    "abs": r.value.norm(),
                    "truncation_bound": r.truncation_bound,
                }));
            }
            ok(json!({ "g": g, "rows": rows }))
        }
        ThetaCmd::Check(check) => run_check(ctx, check, &point),
    }
}

fn run_check<F>(ctx: &Ctx, cmd: &CheckCmd, point: &F) -> Outcome
where
    F: Fn(&PointArgs) -> Result<(g2theta::Characteristic, g2theta::PeriodMatrix, g2theta::CVector), CliError>,
{
    let inp = &ctx.inputs;
    match cmd {
        CheckCmd::Heat { p, step } => {
            let (d, om, z) = point(p)?;
            let r = heat_residual(&d, &om, &z, *step, ctx.target_err)?;
            Ok((to_value(&r), true))
        }
        CheckCmd::Parity { p } => {
            let (d, om, z) = point(p)?;
            let r = check_parity(&d, &om, &z, ctx.target_err)?;
            let mut v = to_value(&r);
            v["passed"] = json!(r.passed());
            Ok((v, r.passed()))
        }
        CheckCmd::Product { delta, omega1, omega2, z } => {
            let d = inp.characteristic(delta.as_deref(), "delta")?;
            let a = inp.period_matrix(omega1.as_deref(), "omega1")?;
            let b = inp.period_matrix(omega2.as_deref(), "omega2")?;
            let zv = inp.vector(z.as_deref(), "z")?;
            ok(json!({ "relative_residual": check_product(&d, &a, &b, &zv, ctx.target_err)? }))
        }
        CheckCmd::Shift { p } => {
            let (d, om, z) = point(p)?;
            ok(to_value(&check_shift_reference(&d, &om, &z, ctx.target_err)?))
        }
        CheckCmd::Transform { m, omega, delta } => {
            let m = inp.symplectic(m.as_deref(), "m")?;
            let om = inp.period_matrix(omega.as_deref(), "omega")?;
            let only = inp.optional::<g2theta::Characteristic>(delta.as_deref(), "delta")?;
            let table = transformation_table(&m, &om, ctx.target_err)?;
            let rows: Vec<_> = table.iter().filter(|t| only.as_ref().is_none_or(|d| &t.delta == d)).collect();
            ok(json!({ "table": rows }))
        }
    }
}

fn run_locus(ctx: &Ctx, cmd: &LocusCmd) -> Outcome {
    let inp = &ctx.inputs;
    match cmd {
        LocusCmd::Trace { delta, omega, slices, cell_grid, axis } => {
            let d = inp.characteristic(delta.as_deref(), "delta")?;
            let om = inp.period_matrix(omega.as_deref(), "omega")?;
            let n = match (inp.number(*slices, "slices")?, inp.number(*cell_grid, "cell_grid")?) {
                (Some(n), _) => n,
                (None, Some(k)) => k * k,
                (None, None) => 100,
            };
            let cloud = trace_zero_curve_along(&d, &om, n, *axis, ctx.target_err.min(DEFAULT_LOCUS_TARGET_ERR))?;
            let family = slice_family(&om, *axis, n)?;
            let bases: Vec<_> = family.iter().map(|s| vector_to_pairs(&s.base)).collect();
            ok(json!({ "slices": n, "axis": axis, "slice_bases": bases, "points": cloud }))
        }
        LocusCmd::Classify { p } => {
            let d = inp.characteristic(p.delta.as_deref(), "delta")?;
            let om = inp.period_matrix(p.omega.as_deref(), "omega")?;
            let z = inp.vector(p.z.as_deref(), "z")?;
            ok(to_value(&classify_point(&d, &om, &z, &ClassifyTolerances::default())?))
        }
        LocusCmd::VerifyReducible { delta, omega1, omega2, slices } => {
            let d = match inp.optional(delta.as_deref(), "delta")? {
                Some(d) => d,
                None => g2theta::Characteristic::all_halves(2),
            };
            let a = inp.period_matrix(omega1.as_deref(), "omega1")?;
            let b = inp.period_matrix(omega2.as_deref(), "omega2")?;
            let n = inp.number(*slices, "slices")?.unwrap_or(verification::REDUCIBLE_SLICES);
            let r = verify_reducible_structure(&d, &a, &b, n)?;
            let passed = r.node_count == 1 && r.node_order == 2 && r.branch_residual <= verification::BRANCH_TOL;
            let mut v = to_value(&r);
            v["passed"] = json!(passed);
            Ok((v, passed))
        }
    }
}

fn run_group(ctx: &Ctx, cmd: &GroupCmd) -> Outcome {
    match cmd {
        GroupCmd::Reduce { word: w } => {
            let w = word(ctx, w.as_deref(), "word", false)?;
            ok(json!({ "word": w, "length": w.len() }))
        }
        GroupCmd::Trivial { word: w } => {
            let w = word(ctx, w.as_deref(), "word", false)?;
            ok(json!({ "word": w, "trivial": dehn_is_trivial(&w), "dehn_normal_form": dehn_reduce(&w) }))
        }
        GroupCmd::Abelianize { word: w } => {
            let w = word(ctx, w.as_deref(), "word", false)?;
            ok(json!({ "word": w, "class": w.abelianize() }))
        }
        GroupCmd::Splitting { c, u, v } => {
            let c = word(ctx, c.as_deref(), "c", true)?;
            let u = word(ctx, u.as_deref(), "u", false)?;
            let v = word(ctx, v.as_deref(), "v", false)?;
            let s = splitting_from_scc(&c, &u, &v)?;
            let curve = g2theta::surface_group::commutator(&u, &v).conjugate(&c.inverse());
            ok(json!({ "curve": curve, "splitting": s, "canonical": s.canonical() }))
        }
        GroupCmd::VerifyFigure2 => {
            let r = figure2_verify()?;
            let mut v = to_value(&r);
            v["passed"] = json!(true);
            ok(v)
        }
    }
}

fn run_strata(ctx: &Ctx, cmd: &StrataCmd) -> Outcome {
    let inp = &ctx.inputs;
    match cmd {
        StrataCmd::Nerve { n, list } => {
            let (nb, r) = nerve_params(ctx, n)?;
            let nerve = build_nerve(nb, r)?;
            let mut v = json!({
                "n_beta": nb,
                "radius": r,
                "components": nerve.components.len(),
                "pairs": nerve.pairs.len(),
            });
            if *list {
                v["component_list"] = to_value(&nerve.components);
                v["pair_list"] = to_value(&nerve.pairs);
            }
            ok(v)
        }
        StrataCmd::Hc { n } => {
            let (nb, r) = nerve_params(ctx, n)?;
            ok(json!({ "n_beta": nb, "radius": r, "hc": compute_hc(&build_nerve(nb, r)?) }))
        }
        StrataCmd::Gysin { hc, n, open_from, dim } => {
            let ranks: GradedRanks = match inp.optional::<GradedRanks>(hc.as_deref(), "hc")? {
                Some(h) => h,
                None => {
                    let (nb, r) = nerve_params(ctx, n)?;
                    compute_hc(&build_nerve(nb, r)?)
                }
            };
            let forced = gysin_vanishing(&ranks, *open_from, *dim);
            ok(json!({ "hc": ranks, "open_from": open_from, "ambient_dim": dim, "forced_zero_degrees": forced }))
        }
        StrataCmd::KernelRank { nbeta } => {
            let nb = inp.number(*nbeta, "nbeta")?.ok_or_else(|| CliError::Malformed("missing required input `nbeta`".into()))?;
            ok(to_value(&kernel_report(nb)))
        }
    }
}

/// Space-separated subcommand chain, e.g. `theta check heat`.
fn command_path(matches: &ArgMatches) -> String {
    let mut parts = Vec::new();
    let mut cur = matches;
    while let Some((name, sub)) = cur.subcommand() {
        parts.push(name.to_string());
        cur = sub;
    }
    parts.join(" ")
}

fn dispatch(cli: &Cli) -> Outcome {
    if !(cli.target_err > 0.0 && cli.target_err.is_finite()) {
        return Err(CliError::Malformed(format!("--target-err must be positive, got {}", cli.target_err)));
    }
    let ctx = Ctx { inputs: Inputs::load(cli.json_input.as_deref())?, target_err: cli.target_err, seed: cli.seed };
    match &cli.command {
        Command::Char(c) => run_char(&ctx, c),
        Command::Siegel(c) => run_siegel(&ctx, c),
        Command::Theta(c) => run_theta(&ctx, c),
        Command::Locus(c) => run_locus(&ctx, c),
        Command::Group(c) => run_group(&ctx, c),
        Command::Strata(c) => run_strata(&ctx, c),
        Command::VerifyAll => {
            let report = verification::run_all(ctx.seed);
            Ok((to_value(&report), report.passed))
        }
    }
}

fn emit(out: Option<&str>, v: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(v).expect("json values serialize") + "\n";
    match out {
        None | Some("-") => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text),
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let context = command_path(&matches);
    let (report, code) = match dispatch(&cli) {
        Ok((v, true)) => (v, 0),
        Ok((v, false)) => (v, 1),
        Err(CliError::Module(e)) => {
            (json!({ "error": { "code": e.code(), "message": e.to_string(), "context": context } }), 1)
        }
        Err(CliError::Malformed(msg)) => (json!({ "error": { "code": "malformed_input", "message": msg, "context": context } }), 2),
    };
    if let Err(e) = emit(cli.out.as_deref(), &report) {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}

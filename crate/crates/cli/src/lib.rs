//! `rootfan` command line: one verb per library operation, JSON on stdout.
//!
//! Exit codes: 0 on success, 1 on domain errors (with
//! `{"error": code, "detail": text}` on stdout), 2 on usage errors.

pub mod json;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rootfan::fan::{
    opposite_sections, orbit_closure, projection_embedding_equations, subsystem_morphism, weyl_chamber_fan, Cone,
};
use rootfan::lattice::{dual_basis, hermite_normal_form, kernel_basis, lattices_equal, IntMatrix};
use rootfan::losev_manin as lm;
use rootfan::rdata::{self, ChartAtlas};
use rootfan::root_system::{Family, RootSystem, RootSystemSpec};
use rootfan::type_a::{self, RewriteStrategy, TorusDivisor};
use rootfan::{Error, Result, Strategy};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "rootfan", version, about = "Toric varieties of root systems in exact arithmetic")]
pub struct Cli {
    /// Seed for every randomized computation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    /// Run batch computations on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Selects a root system by `--factors A2xB3` or by `--type` and `--rank`.
#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    #[arg(long = "type")]
    pub family: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub factors: Option<String>,
}

impl SystemArgs {
    fn build(&self) -> Result<RootSystem> {
        let spec = match (&self.factors, &self.family, self.rank) {
            (Some(f), _, _) => RootSystemSpec::parse(f)?,
            (None, Some(t), Some(n)) => RootSystemSpec::single(t.parse::<Family>()?, n),
            _ => return Err(Error::InvalidSpec("give --factors, or --type and --rank".into())),
        };
        RootSystem::build(&spec)
    }
}

#[derive(Args, Debug, Clone)]
pub struct NArg {
    #[arg(long)]
    pub n: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Roots, base and Cartan matrix.
    Roots(SystemArgs),
    /// All sets of simple roots, one per Weyl chamber.
    Chambers(SystemArgs),
    /// The Weyl chamber fan.
    Fan(SystemArgs),
    /// Integer lattice utilities.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// The morphism induced by the root subsystem in the span of `--sub-roots`.
    Morphism {
        #[command(flatten)]
        system: SystemArgs,
        /// JSON array of roots (ambient coordinates) spanning the subspace.
        #[arg(long)]
        sub_roots: String,
    },
    /// Equations of the embedding `X(R) → X(R')` for a lattice map `μ`.
    Embed {
        #[command(flatten)]
        system: SystemArgs,
        /// The target system `R'`, e.g. `A1xA1xA1`.
        #[arg(long)]
        target: String,
        /// JSON matrix: images of the base of `R'` in root coordinates of `R`.
        #[arg(long)]
        mu: String,
    },
    /// Orbit closure and opposite sections of a cone of the fan.
    Orbit {
        #[command(flatten)]
        system: SystemArgs,
        /// JSON array of ray indices.
        #[arg(long)]
        cone: String,
    },
    /// R-data operations.
    #[command(subcommand)]
    Rdata(RdataCmd),
    /// Even Betti numbers of `X(A_n)`.
    Betti(NArg),
    /// The descent monomial basis of the homology of `X(A_n)`.
    Basis(NArg),
    /// Reduces a class onto the descent basis.
    Reduce {
        /// CohomClass JSON.
        #[arg(long)]
        class_json: String,
        /// Pick rewrites at random (seeded) instead of canonically.
        #[arg(long)]
        random: bool,
    },
    /// Product of two good monomials, reduced.
    Multiply {
        #[arg(long)]
        n: usize,
        /// JSON chain of subsets, e.g. `[[1],[1,2]]`.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Primitive collections of `Σ(A_n)`.
    Primcol(NArg),
    /// Nefness of a torus invariant divisor.
    Nef(DivisorArgs),
    /// Ampleness of a torus invariant divisor.
    Ample(DivisorArgs),
    /// The polytope `Δ(A_n)`.
    Polytope(NArg),
    /// The normal fan of `Δ(A_n)`.
    SigmaDelta(NArg),
    /// The crepant subdivision of `Σ_Δ`.
    Crepant(NArg),
    /// Chains of projective lines.
    #[command(subcommand)]
    Lm(LmCmd),
}

#[derive(Args, Debug, Clone)]
pub struct DivisorArgs {
    #[arg(long)]
    pub n: usize,
    /// Divisor JSON; omitted means `−K`.
    #[arg(long)]
    pub divisor_json: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    Hnf {
        #[arg(long)]
        matrix: String,
    },
    Kernel {
        #[arg(long)]
        matrix: String,
    },
    Dual {
        #[arg(long)]
        matrix: String,
    },
    Equal {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        other: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum RdataCmd {
    Validate {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        data_json: String,
    },
    ToPoint {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        data_json: String,
    },
    UniversalAt {
        #[command(flatten)]
        system: SystemArgs,
        /// `{"chart": [roots], "coords": ["p/q", ...]}`
        #[arg(long)]
        point_json: String,
    },
    VerifyGen(SystemArgs),
    /// Forced ratios over the orbit through a vector of `N(R)`.
    Pattern {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        vector: String,
    },
    /// Seeded chart point → data → chart point round trips.
    Roundtrip {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum LmCmd {
    /// Combinatorial type of `A_n`-data.
    Type {
        #[arg(long)]
        data_json: String,
    },
    FromData {
        #[arg(long)]
        data_json: String,
    },
    Extract {
        #[arg(long)]
        chain_json: String,
    },
    Contract {
        #[arg(long)]
        chain_json: String,
        /// JSON array of marked points to keep.
        #[arg(long)]
        keep: String,
    },
    Membership {
        #[arg(long)]
        data_json: String,
        /// JSON array of `n+1` pairs `(z_{−α_i} : z_{α_i})`.
        #[arg(long)]
        z: String,
    },
    Universal(NArg),
    /// Combinatorial type over the orbit of the cone of a subset chain.
    OrbitType {
        #[arg(long)]
        n: usize,
        /// JSON chain of subsets, e.g. `[[1],[1,2]]`.
        #[arg(long)]
        chain: String,
    },
    Roundtrip {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

/// Parses `argv` (program name first) and runs it. Returns the exit code
/// and the text for standard output (usage text for exit code 2).
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let (code, value) = match execute(&cli) {
        Ok(v) => (0, v),
        Err(e) => (1, json!({"error": e.code(), "detail": e.to_string()})),
    };
    let text = serde_json::to_string_pretty(&value).expect("serializable") + "\n";
    match &cli.output {
        Some(path) if code == 0 => match std::fs::write(path, &text) {
            Ok(()) => (0, String::new()),
            Err(e) => {
                let err = json!({"error": "Io", "detail": format!("{}: {e}", path.display())});
                (1, serde_json::to_string_pretty(&err).expect("serializable") + "\n")
            }
        },
        _ => (code, text),
    }
}

fn roots_json(r: &RootSystem, idx: &[usize]) -> Value {
    Value::Array(idx.iter().map(|&i| json::vector(r.root(i))).collect())
}

pub fn execute(cli: &Cli) -> Result<Value> {
    let strategy = if cli.sequential {
        Strategy::Sequential
    } else {
        Strategy::default()
    };
    match &cli.command {
        Command::Roots(s) => {
            let r = s.build()?;
            let base = r.base();
            let cartan: Vec<Vec<Value>> = base
                .iter()
                .map(|&i| base.iter().map(|&j| json::int(&r.cartan(i, j))).collect())
                .collect();
            Ok(json!({
                "label": r.label(),
                "rank": r.rank(),
                "ambient_dim": r.ambient_dim(),
                "roots": r.roots().iter().map(json::vector).collect::<Vec<_>>(),
                "base": roots_json(&r, base),
                "cartan": cartan,
            }))
        }
        Command::Chambers(s) => {
            let r = s.build()?;
            let sets = r.enumerate_simple_root_sets();
            Ok(json!({
                "count": sets.len(),
                "chambers": sets.iter().map(|c| roots_json(&r, &c.root_indices)).collect::<Vec<_>>(),
            }))
        }
        Command::Fan(s) => {
            let r = s.build()?;
            let wf = weyl_chamber_fan(&r, strategy);
            let mut v = json::fan(&wf.fan);
            v["complete"] = json!(wf.fan.check_complete());
            v["smooth"] = json!(wf.fan.check_smooth());
            Ok(v)
        }
        Command::Lattice(cmd) => lattice(cmd),
        Command::Morphism { system, sub_roots } => {
            let r = system.build()?;
            let idx = json::parse_roots(&r, &json::load(sub_roots)?)?;
            let basis = IntMatrix::new(idx.iter().map(|&i| r.root(i).clone()).collect(), r.ambient_dim())?;
            let m = subsystem_morphism(&r, &basis, strategy)?;
            Ok(json!({
                "subsystem": m.subsystem.system.label(),
                "lattice_map": json::matrix(&m.morphism.lattice_map),
                "source": json::fan(&m.source.fan),
                "target": json::fan(&m.target.fan),
                "cone_image": m.morphism.cone_image.iter().map(|c| c.ray_indices.clone()).collect::<Vec<_>>(),
                "fiber_counts": m.morphism.fiber_counts(&m.target.fan),
                "compatible": m.morphism.is_compatible(&m.source.fan, &m.target.fan),
            }))
        }
        Command::Embed { system, target, mu } => {
            let r = system.build()?;
            let rp = RootSystem::build(&RootSystemSpec::parse(target)?)?;
            let mu = json::parse_matrix(&json::load(mu)?)?;
            let eq = projection_embedding_equations(&r, &rp, &mu)?;
            let binomial = |b: &rootfan::fan::Binomial| {
                let side = |s: &[(usize, num_bigint::BigInt)]| {
                    s.iter()
                        .map(|(i, e)| json!({"root": json::vector(rp.root(*i)), "exp": json::int(e)}))
                        .collect::<Vec<_>>()
                };
                json!({"lhs": side(&b.lhs), "rhs": side(&b.rhs)})
            };
            let charts: Vec<Value> = eq
                .charts
                .iter()
                .map(|c| {
                    json!({
                        "chart": roots_json(&rp, &c.chart),
                        "equations": c.equations.iter().map(binomial).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(json!({
                "kernel": json::matrix(&eq.kernel),
                "charts": charts,
                "homogeneous": eq.homogeneous(&rp).map(|h| h.iter().map(binomial).collect::<Vec<_>>()),
            }))
        }
        Command::Orbit { system, cone } => {
            let r = system.build()?;
            let wf = weyl_chamber_fan(&r, strategy);
            let tau = Cone::new(json::parse_indices(&json::load(cone)?)?);
            let oc = orbit_closure(&r, &wf, &tau)?;
            let op = opposite_sections(&r, &wf, &tau)?;
            let charts: Vec<Value> = oc
                .charts
                .iter()
                .map(|c| {
                    json!({
                        "chamber": c.chamber,
                        "coordinates": roots_json(&r, &c.s_prime),
                        "vanishing": roots_json(&r, &c.vanishing),
                    })
                })
                .collect();
            Ok(json!({
                "cone": tau.ray_indices,
                "factors": oc.factors.iter().map(|f| format!("{}{}", f.family, f.rank)).collect::<Vec<_>>(),
                "charts": charts,
                "opposite_cone": op.minus.ray_indices,
                "plus_vanishing": roots_json(&r, &op.plus_vanishing),
                "minus_vanishing": roots_json(&r, &op.minus_vanishing),
            }))
        }
        Command::Rdata(cmd) => rdata_cmd(cmd, cli.seed, strategy),
        Command::Betti(a) => Ok(json!({"n": a.n, "betti": type_a::betti_numbers(a.n)?})),
        Command::Basis(a) => {
            let b = type_a::descent_basis(a.n)?;
            Ok(json!({"n": a.n, "count": b.len(), "basis": b.iter().map(json::monomial).collect::<Vec<_>>()}))
        }
        Command::Reduce { class_json, random } => {
            let c = json::parse_cohom(&json::load(class_json)?)?;
            let (reduced, cert) = if *random {
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                type_a::reduce_with(&c, RewriteStrategy::Random(&mut rng))?
            } else {
                type_a::reduce_with::<ChaCha8Rng>(&c, RewriteStrategy::Canonical)?
            };
            let mut v = json::cohom(&reduced);
            v["rewrites"] = json!(cert.steps.len());
            v["certificate_ok"] = json!(cert.verify(&c, &reduced));
            Ok(v)
        }
        Command::Multiply { n, a, b } => {
            let a = json::parse_monomial(*n, &json::load(a)?)?;
            let b = json::parse_monomial(*n, &json::load(b)?)?;
            Ok(json::cohom(&type_a::multiply(*n, &a, &b)?))
        }
        Command::Primcol(a) => {
            let rels: Vec<Value> = type_a::primitive_collections(a.n)?
                .iter()
                .map(|p| {
                    json!({
                        "pair": [json::subset(p.pair.0), json::subset(p.pair.1)],
                        "kind": p.kind.name(),
                        "rhs": p.rhs.iter().map(|&s| json::subset(s)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(json!({"n": a.n, "relations": rels}))
        }
        Command::Nef(d) => {
            let d = divisor(d)?;
            Ok(json!({"nef": type_a::is_nef(&d)?, "oracle": type_a::nef_oracle(&d)?}))
        }
        Command::Ample(d) => {
            let d = divisor(d)?;
            Ok(json!({"ample": type_a::is_ample(&d)?, "oracle": type_a::ample_oracle(&d)?}))
        }
        Command::Polytope(a) => {
            let p = type_a::delta_polytope(a.n)?;
            Ok(json!({
                "n": p.n,
                "vertices": p.vertices.iter().map(json::vector).collect::<Vec<_>>(),
                "lattice_points": p.lattice_points.iter().map(json::vector).collect::<Vec<_>>(),
                "interior_points": p.interior_points.iter().map(json::vector).collect::<Vec<_>>(),
                "is_reflexive": p.is_reflexive,
            }))
        }
        Command::SigmaDelta(a) => {
            let f = type_a::sigma_delta_fan(a.n)?;
            let mut v = json::fan(&f);
            v["complete"] = json!(f.check_complete());
            v["smooth"] = json!(f.check_smooth());
            Ok(v)
        }
        Command::Crepant(a) => {
            let f = type_a::crepant_subdivision(a.n)?;
            let mut v = json::fan(&f);
            v["equals_chain_fan"] = json!(f == type_a::chain_fan(a.n)?);
            Ok(v)
        }
        Command::Lm(cmd) => lm_cmd(cmd, cli.seed, strategy),
    }
}

fn divisor(a: &DivisorArgs) -> Result<TorusDivisor> {
    match &a.divisor_json {
        Some(s) => json::parse_divisor(a.n, &json::load(s)?),
        None => {
            type_a::check_n(a.n)?;
            Ok(TorusDivisor::anticanonical(a.n))
        }
    }
}

fn lattice(cmd: &LatticeCmd) -> Result<Value> {
    match cmd {
        LatticeCmd::Hnf { matrix } => {
            let m = json::parse_matrix(&json::load(matrix)?)?;
            let (h, u) = hermite_normal_form(&m);
            Ok(json!({"hnf": json::matrix(&h), "transform": json::matrix(&u)}))
        }
        LatticeCmd::Kernel { matrix } => {
            let m = json::parse_matrix(&json::load(matrix)?)?;
            Ok(json!({"kernel": json::matrix(&kernel_basis(&m))}))
        }
        LatticeCmd::Dual { matrix } => {
            let m = json::parse_matrix(&json::load(matrix)?)?;
            Ok(json!({"dual": json::matrix(&dual_basis(&m)?)}))
        }
        LatticeCmd::Equal { matrix, other } => {
            let a = json::parse_matrix(&json::load(matrix)?)?;
            let b = json::parse_matrix(&json::load(other)?)?;
            Ok(json!({"equal": lattices_equal(&a, &b)?}))
        }
    }
}

fn rdata_cmd(cmd: &RdataCmd, seed: u64, strategy: Strategy) -> Result<Value> {
    match cmd {
        RdataCmd::Validate { system, data_json } => {
            let r = system.build()?;
            let d = json::parse_rdata(&r, &json::load(data_json)?)?;
            let bad = rdata::validate_rdata(&r, &d)?;
            let violations: Vec<Value> = bad
                .iter()
                .map(|t| {
                    json!({
                        "alpha": json::vector(r.root(t.alpha)),
                        "beta": json::vector(r.root(t.beta)),
                        "gamma": json::vector(r.root(t.gamma)),
                    })
                })
                .collect();
            Ok(json!({"valid": violations.is_empty(), "violations": violations}))
        }
        RdataCmd::ToPoint { system, data_json } => {
            let r = system.build()?;
            let d = json::parse_rdata(&r, &json::load(data_json)?)?;
            Ok(json::chart_point(&r, &rdata::rdata_to_point(&r, &d, strategy)?))
        }
        RdataCmd::UniversalAt { system, point_json } => {
            let r = system.build()?;
            let p = json::parse_chart_point(&r, &json::load(point_json)?)?;
            Ok(json::rdata(&r, &rdata::universal_rdata_at(&r, &p)?))
        }
        RdataCmd::VerifyGen(system) => {
            let r = system.build()?;
            Ok(json!({"system": r.label(), "generated": rdata::verify_relation_generation(&r)}))
        }
        RdataCmd::Pattern { system, vector } => {
            let r = system.build()?;
            let v = json::parse_vector(&json::load(vector)?)?;
            if v.len() != r.rank() {
                return Err(Error::DimensionMismatch {
                    expected: r.rank(),
                    got: v.len(),
                });
            }
            let pairs: Vec<Value> = rdata::orbit_rdata_pattern(&r, &v)
                .iter()
                .map(|(a, p)| json!({"positive_root": json::vector(r.root(*a)), "pattern": p.name()}))
                .collect();
            Ok(json!({ "pairs": pairs }))
        }
        RdataCmd::Roundtrip { system, samples } => {
            let r = system.build()?;
            let atlas = ChartAtlas::new(&r, strategy);
            let passed = rdata::roundtrip_batch(&r, &atlas, *samples, seed, strategy);
            Ok(json!({"ok": passed == *samples, "samples": samples, "passed": passed}))
        }
    }
}

fn an_data(v: &Value) -> Result<(RootSystem, rootfan::rdata::RData)> {
    let n = json::rdata_type_a_rank(v)?;
    let r = RootSystem::type_a(n);
    let d = json::parse_rdata(&r, v)?;
    Ok((r, d))
}

fn lm_cmd(cmd: &LmCmd, seed: u64, strategy: Strategy) -> Result<Value> {
    match cmd {
        LmCmd::Type { data_json } => {
            let (r, d) = an_data(&json::load(data_json)?)?;
            if !rdata::validate_rdata(&r, &d)?.is_empty() {
                return Err(Error::InvalidInput("data violate the A₂ conditions".into()));
            }
            let t = lm::comb_type_from_data(&r, &d)?;
            Ok(json!({"blocks": t.blocks, "label": t.to_string()}))
        }
        LmCmd::FromData { data_json } => {
            let (r, d) = an_data(&json::load(data_json)?)?;
            Ok(json::chain(&lm::chain_from_data(&r, &d)?))
        }
        LmCmd::Extract { chain_json } => {
            let c = json::parse_chain(&json::load(chain_json)?)?;
            let (r, d) = lm::data_from_chain(&c)?;
            Ok(json::rdata(&r, &d))
        }
        LmCmd::Contract { chain_json, keep } => {
            let c = json::parse_chain(&json::load(chain_json)?)?;
            let keep = json::parse_indices(&json::load(keep)?)?;
            Ok(json::chain(&lm::contract(&c, &keep)?))
        }
        LmCmd::Membership { data_json, z } => {
            let (r, d) = an_data(&json::load(data_json)?)?;
            let z = json::parse_ratios(&json::load(z)?)?;
            let m = lm::curve_membership(&r, &d, &z)?;
            Ok(json!({"on_curve": m.on_curve, "components": m.components}))
        }
        LmCmd::Universal(a) => {
            let u = lm::universal_curve_structure(a.n, strategy)?;
            let sections: Vec<Value> = u
                .sections
                .iter()
                .map(|s| {
                    json!({
                        "i": s.i,
                        "lattice_map": json::matrix(&s.lattice_map),
                        "kernel": json::matrix(&s.kernel),
                        "retracts_projection": u.inclusion.mul(&s.lattice_map).map(|m| m.is_identity()).unwrap_or(false),
                        "compatible": s.morphism.is_compatible(&u.projection.target.fan, &u.projection.source.fan),
                    })
                })
                .collect();
            let p = &u.projection;
            Ok(json!({
                "n": u.n,
                "source_max_cones": p.source.fan.max_cones().len(),
                "target_max_cones": p.target.fan.max_cones().len(),
                "lattice_map": json::matrix(&p.morphism.lattice_map),
                "compatible": p.morphism.is_compatible(&p.source.fan, &p.target.fan),
                "fiber_counts": u.fiber_counts,
                "sections": sections,
                "pole_rays": {"minus": json::vector(&u.pole_rays.0), "plus": json::vector(&u.pole_rays.1)},
            }))
        }
        LmCmd::OrbitType { n, chain } => {
            let y = json::parse_monomial(*n, &json::load(chain)?)?;
            let t = lm::comb_type_over_cone(*n, &y)?;
            let r = RootSystem::type_a(*n);
            let v = y
                .chain
                .iter()
                .fold(rootfan::lattice::IntVector::zeros(*n), |acc, &a| &acc + &type_a::ray(*n, a));
            let d = lm::generic_orbit_data(&r, &v)?;
            let generic = lm::comb_type_from_data(&r, &d)?;
            Ok(json!({
                "blocks": t.blocks,
                "label": t.to_string(),
                "generic_sample_agrees": generic == t,
            }))
        }
        LmCmd::Roundtrip { n, samples } => {
            type_a::check_n(*n)?;
            let passed = lm::roundtrip_batch(*n, *samples, seed, strategy);
            Ok(json!({"ok": passed == *samples, "samples": samples}))
        }
    }
}

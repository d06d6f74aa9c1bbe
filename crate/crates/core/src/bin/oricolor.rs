use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use oricolor::colorer::color;
use oricolor::digraph::{verify_homomorphism, HomCheck, OrientedGraph};
use oricolor::generators::{generate, GenSpec, Model};
use oricolor::homsolver::{solve, Outcome, SolverConfig, VarOrder};
use oricolor::manifest::RunManifest;
use oricolor::paley::build_paley;
use oricolor::properties::{
    certified_properties, check_cnk_budget, check_pnk_with, search_minimal_paley, PMode, PnkOptions, PropertyReport,
    SearchOptions, Verdict,
};
use oricolor::repro::{end_to_end, prop4_line, reproduce_prop4};
use oricolor::textio::{parse_colormap, parse_digraph, parse_target, write_colormap, write_digraph, write_target};
use oricolor::tromp::{t9_target, tromp_star_target, tromp_target};
use oricolor::{ColorMap, Error, Result, TargetGraph};

#[derive(Parser)]
#[command(name = "oricolor", version, about = "Oriented colorings via Paley and Tromp targets")]
struct Cli {
    /// Worker threads for searches and batch jobs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Tab-separated output for scripts.
    #[arg(long, global = true)]
    porcelain: bool,
    /// Write a run manifest (inputs, seeds, verdicts) to this file.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a target digraph.
    #[command(subcommand)]
    Build(BuildCmd),
    /// Generate a seeded random oriented graph.
    Gen(GenArgs),
    /// Check a property of a target.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Scan Paley orders for the first one with a property
    #[command(subcommand)]
    Search(SearchCmd),
    /// Homomorphism search into an arbitrary target
    #[command(subcommand)]
    Hom(HomCmd),
    /// Color a graph with a certified target and verify the result.
    Color(ColorArgs),
    /// Check that a map is a homomorphism.
    Verify(VerifyArgs),
    /// Reproduce the minimal-Paley table or run a coloring corpus.
    #[command(subcommand)]
    Repro(ReproCmd),
}

#[derive(Subcommand)]
enum BuildCmd {
    /// Paley tournament QR_q.
    Qr {
        #[arg(long)]
        q: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tromp graph Tr(QR_p), or Tr*(QR_p) with --star.
    Tromp {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        star: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The 9-vertex target for maximum degree 3
    T9 {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenArgs {
    /// bounded-degree, d-regular, k-degenerate, planted-3-sources or
    /// disjoint-regular-components.
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    param: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    components: usize,
    /// Forbid sources of full degree (regular models) or sources next to
    /// sinks (degenerate model).
    #[arg(long)]
    no_sources: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Pruned,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Property P(n,k): every compatible n-sequence has k α-successors.
    Pnk {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: ModeArg,
        /// Stop at the first failing sequence.
        #[arg(long)]
        early_exit: bool,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        checkpoint_every: usize,
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Property C(n,k): every n-clique has both neighbourhood unions of size k.
    Cnk {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Maximum number of cliques to enumerate.
        #[arg(long, default_value_t = 20_000_000)]
        budget: u64,
    },
    /// The property chain making Tr(QR_p) a target for maximum degree Δ.
    Certified {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        delta: usize,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Smallest Paley tournament with P(n,k).
    MinimalPaley {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_q: u64,
        /// Include prime powers q = p^e, e > 1.
        #[arg(long)]
        prime_powers: bool,
        /// Exact minima for failing q instead of the first witness.
        #[arg(long)]
        exact_minima: bool,
        /// Per-q checkpoint directory; existing checkpoints are resumed.
        #[arg(long, alias = "resume")]
        checkpoint_dir: Option<PathBuf>,
        #[arg(long)]
        leaf_budget: Option<u128>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Mrv,
    Degeneracy,
}

#[derive(Subcommand)]
enum HomCmd {
    /// Search for a homomorphism from a graph to a target.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Fix vertex v to color c, written `v=c`. Repeatable.
        #[arg(long = "pin", value_parser = parse_pin)]
        pins: Vec<(usize, usize)>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value = "mrv")]
        order: OrderArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ColorArgs {
    #[arg(long)]
    input: PathBuf,
    /// `auto` or a maximum degree from 0 to 7.
    #[arg(long, default_value = "auto")]
    delta: String,
    /// Use the target for Δ on every component.
    #[arg(long)]
    uniform_target: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    target: PathBuf,
    #[arg(long)]
    map: PathBuf,
}

#[derive(Subcommand)]
enum ReproCmd {
    /// First q with P(n,n) for each level.
    Prop4 {
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
        levels: Vec<usize>,
        /// Allow level 5 (scans up to QR_659).
        #[arg(long)]
        long_running: bool,
        #[arg(long)]
        checkpoint_dir: Option<PathBuf>,
    },
    /// Color and verify a seeded corpus for one maximum degree.
    E2e {
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        n: usize,
        /// Where to write failing instances.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
}

fn parse_pin(s: &str) -> std::result::Result<(usize, usize), String> {
    let (v, c) = s.split_once('=').ok_or("expected v=c")?;
    Ok((
        v.trim().parse().map_err(|_| format!("bad vertex {v:?}"))?,
        c.trim().parse().map_err(|_| format!("bad color {c:?}"))?,
    ))
}

struct Ctx {
    jobs: usize,
    porcelain: bool,
    manifest: RunManifest,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path)?;
        self.manifest.record_input(&path.display().to_string(), &bytes);
        String::from_utf8(bytes).map_err(|_| Error::Parse {
            line: 0,
            msg: format!("{} is not UTF-8", path.display()),
        })
    }

    fn graph(&mut self, path: &Path) -> Result<OrientedGraph> {
        parse_digraph(&self.read(path)?)
    }

    fn target(&mut self, path: &Path) -> Result<TargetGraph> {
        parse_target(&self.read(path)?)
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(ctx: &mut Ctx, r: &PropertyReport) -> u8 {
    if ctx.porcelain {
        println!("{}", r.porcelain());
    } else {
        println!("{r}");
    }
    ctx.manifest.verdict(r.to_string());
    u8::from(!r.holds)
}

fn run(cli: Cli, ctx: &mut Ctx) -> Result<u8> {
    match cli.cmd {
        Cmd::Build(b) => {
            let (t, output) = match b {
                BuildCmd::Qr { q, output } => (TargetGraph::from_paley(build_paley(q)?), output),
                BuildCmd::Tromp { q, star, output } => {
                    (if star { tromp_star_target(q)? } else { tromp_target(q)? }, output)
                }
                BuildCmd::T9 { output } => (t9_target(), output),
            };
            emit(&output, &write_target(&t))?;
            ctx.manifest.verdict(format!("built {}", t.name()));
            Ok(0)
        }
        Cmd::Gen(a) => {
            let model: Model = a.model.parse()?;
            let spec = GenSpec::new(model, a.n, a.param, a.seed)
                .components(a.components)
                .no_sources(a.no_sources);
            let g = generate(&spec)?;
            let note = format!("model {model} n {} param {} seed {}", a.n, a.param, a.seed);
            emit(&a.output, &write_digraph(&g, &[note]))?;
            ctx.manifest.seeds.push(a.seed);
            ctx.manifest.verdict(format!("generated {} vertices {} arcs", g.order(), g.arc_count()));
            Ok(0)
        }
        Cmd::Check(CheckCmd::Pnk {
            graph,
            n,
            k,
            mode,
            early_exit,
            checkpoint,
            checkpoint_every,
            resume,
        }) => {
            let t = ctx.target(&graph)?;
            let opts = PnkOptions {
                jobs: ctx.jobs,
                stop_at_failure: early_exit,
                checkpoint,
                checkpoint_every,
                resume,
            };
            let mode = match mode {
                ModeArg::Exhaustive => PMode::Exhaustive,
                ModeArg::Pruned => PMode::Pruned,
            };
            let r = check_pnk_with(&t, n, k, mode, &opts)?;
            Ok(report(ctx, &r))
        }
        Cmd::Check(CheckCmd::Cnk { graph, n, k, budget }) => {
            let t = ctx.target(&graph)?;
            let r = check_cnk_budget(&t, n, k, budget)?;
            Ok(report(ctx, &r))
        }
        Cmd::Check(CheckCmd::Certified { p, delta }) => {
            let v = certified_properties(p, delta)?;
            let d = v.derivation();
            let status = match &v {
                Verdict::Certified(_) => "CERTIFIED".to_string(),
                Verdict::Uncertified { reason, .. } => format!("UNCERTIFIED ({reason})"),
            };
            if ctx.porcelain {
                println!("{}\t{p}\t{delta}", if v.is_certified() { "CERTIFIED" } else { "UNCERTIFIED" });
                for s in &d.steps {
                    println!("{}\t{}\t{:?}", s.graph, s.property, s.source);
                }
            } else {
                println!(
                    "Tr(QR_{p}) for delta={delta}: needs P({},{}) and C({},{}): {status}",
                    d.p_need.0, d.p_need.1, d.c_need.0, d.c_need.1
                );
                for s in &d.steps {
                    println!("  {s}");
                }
            }
            ctx.manifest.verdict(status);
            Ok(u8::from(!v.is_certified()))
        }
        Cmd::Search(SearchCmd::MinimalPaley {
            n,
            k,
            max_q,
            prime_powers,
            exact_minima,
            checkpoint_dir,
            leaf_budget,
        }) => {
            let mut opts = SearchOptions {
                jobs: ctx.jobs,
                exact_minima,
                checkpoint_dir,
                ..SearchOptions::default()
            };
            if let Some(b) = leaf_budget {
                opts.leaf_budget = b;
            }
            let s = search_minimal_paley(n, k, max_q, prime_powers, &opts)?;
            if ctx.porcelain {
                for (q, r) in &s.rows {
                    println!("{q}\t{}", r.porcelain());
                }
            } else {
                println!("{s}");
            }
            ctx.manifest.verdict(prop4_line(&s));
            Ok(u8::from(s.first.is_none()))
        }
        Cmd::Hom(HomCmd::Solve {
            graph,
            target,
            pins,
            budget,
            order,
            output,
        }) => {
            let g = ctx.graph(&graph)?;
            let t = ctx.target(&target)?;
            let cfg = SolverConfig {
                order: match order {
                    OrderArg::Mrv => VarOrder::MinRemaining,
                    OrderArg::Degeneracy => VarOrder::Degeneracy,
                },
                node_budget: budget,
                pins,
            };
            match solve(&g, &t.graph, &cfg)? {
                Outcome::Found(mut m) => {
                    m.target_id = t.name();
                    emit(&output, &write_colormap(&m, &[]))?;
                    ctx.manifest.verdict(format!("found, verified into {}", t.name()));
                    Ok(0)
                }
                Outcome::Unsat => {
                    println!("{}", if ctx.porcelain { "UNSAT" } else { "no homomorphism exists" });
                    ctx.manifest.verdict("unsat");
                    Ok(1)
                }
                Outcome::BudgetExhausted { nodes } => Err(Error::BudgetExhausted { nodes }),
            }
        }
        Cmd::Color(a) => color_cmd(ctx, a),
        Cmd::Verify(a) => {
            let g = ctx.graph(&a.graph)?;
            let t = ctx.target(&a.target)?;
            let m = parse_colormap(&ctx.read(&a.map)?)?;
            if m.assignment.iter().any(|&c| c >= t.order()) {
                return Err(Error::MalformedMap(format!("a color is outside 0..{}", t.order())));
            }
            match verify_homomorphism(&g, &t.graph, &m)? {
                HomCheck::Ok => {
                    println!("{}", if ctx.porcelain { "OK".to_string() } else { format!("OK homomorphism into {}", t.name()) });
                    ctx.manifest.verdict("ok");
                    Ok(0)
                }
                HomCheck::Violation(arc) => {
                    if ctx.porcelain {
                        println!("VIOLATION\t{}\t{}", arc.src, arc.dst);
                    } else {
                        println!(
                            "VIOLATION arc {arc} maps to {} -> {}, not an arc of {}",
                            m.color(arc.src),
                            m.color(arc.dst),
                            t.name()
                        );
                    }
                    ctx.manifest.verdict(format!("violation {arc}"));
                    Ok(1)
                }
            }
        }
        Cmd::Repro(ReproCmd::Prop4 {
            levels,
            long_running,
            checkpoint_dir,
        }) => {
            let opts = SearchOptions {
                jobs: ctx.jobs,
                checkpoint_dir,
                ..SearchOptions::default()
            };
            let table = reproduce_prop4(&levels, long_running, &opts)?;
            let mut code = 0;
            for s in &table {
                let line = prop4_line(s);
                if ctx.porcelain {
                    let q = s.first.map_or("-".into(), |q| q.to_string());
                    println!("{}\t{}\t{q}", s.n, s.k);
                } else {
                    println!("{line}");
                }
                if s.first.is_none() {
                    code = 1;
                }
                ctx.manifest.verdict(line);
            }
            Ok(code)
        }
        Cmd::Repro(ReproCmd::E2e {
            delta,
            count,
            seed,
            n,
            dump_dir,
        }) => {
            let s = end_to_end(delta, count, seed, n, ctx.jobs)?;
            ctx.manifest.seeds.push(seed);
            if ctx.porcelain {
                println!(
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    s.delta, s.target, s.bound, s.verified, s.instances, s.max_colors_used
                );
            } else {
                println!("{s}");
            }
            for (i, f) in s.failures.iter().enumerate() {
                eprintln!("FAILED {:?}: {}", f.spec, f.error);
                if let (Some(dir), Some(g)) = (&dump_dir, &f.graph) {
                    fs::create_dir_all(dir)?;
                    let note = vec![format!("{:?}", f.spec), f.error.clone()];
                    fs::write(dir.join(format!("failure{i}.txt")), write_digraph(g, &note))?;
                }
            }
            ctx.manifest.verdict(s.to_string());
            Ok(u8::from(!s.all_passed()))
        }
    }
}

fn color_cmd(ctx: &mut Ctx, a: ColorArgs) -> Result<u8> {
    let g = ctx.graph(&a.input)?;
    let delta = match a.delta.as_str() {
        "auto" => None,
        d => Some(
            d.parse::<usize>()
                .map_err(|_| Error::Precondition(format!("--delta expects auto or an integer, got {d:?}")))?,
        ),
    };
    let r = color(&g, delta, a.uniform_target)?;
    for tr in r.trace() {
        eprintln!("{tr}");
    }
    // every part was verified inside `color`; check the merged map again
    for (i, part) in r.parts.iter().enumerate() {
        let vs: Vec<usize> = (0..g.order()).filter(|&v| r.part_of[v] == i).collect();
        let h = g.induced(&vs);
        let local = ColorMap::new(vs.iter().map(|&v| r.assignment[v]).collect(), part.target.name());
        if !verify_homomorphism(&h, &part.target.graph, &local)?.is_ok() {
            return Err(Error::TheoremContradiction(format!(
                "merged map fails on the {} part",
                part.target.name()
            )));
        }
    }
    let text = match r.uniform() {
        Some(res) => write_colormap(&res.map, &[]),
        None => {
            let comments: Vec<String> = r
                .trace()
                .map(|tr| format!("component {} size {} target {}", tr.vertices[0], tr.vertices.len(), tr.target))
                .collect();
            write_colormap(&ColorMap::new(r.assignment.clone(), ""), &comments)
        }
    };
    emit(&a.output, &text)?;
    for (i, part) in r.parts.iter().enumerate() {
        let used = (0..g.order())
            .filter(|&v| r.part_of[v] == i)
            .map(|v| r.assignment[v])
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        let line = format!("verified {} bound {} colors_used {used}", part.target.name(), part.bound_claimed);
        if ctx.porcelain {
            eprintln!("VERIFIED\t{}\t{}\t{used}", part.target.name(), part.bound_claimed);
        } else {
            eprintln!("{line}");
        }
        ctx.manifest.verdict(line);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = Cli::parse();
    let mut ctx = Ctx {
        jobs: cli.jobs.max(1),
        porcelain: cli.porcelain,
        manifest: RunManifest::new(std::env::args()),
    };
    let manifest_path = cli.manifest.clone();
    let code = match run(cli, &mut ctx) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ctx.manifest.verdict(format!("error {e}"));
            2
        }
    };
    if let Some(p) = manifest_path {
        ctx.manifest.wall_time = start.elapsed();
        if let Err(e) = fs::write(&p, ctx.manifest.to_text()) {
            eprintln!("error: writing manifest {}: {e}", p.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}

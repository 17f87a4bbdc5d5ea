use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use nwd_core::augment::{aug, find_witness, verify_aug};
use nwd_core::cover::{build_cover, build_cover_default, verify_cover};
use nwd_core::fo::{ef_plus_equivalent, eval, hintikka, parse_formula, Assignment, Structure};
use nwd_core::graph::generate::{grid, Family};
use nwd_core::graph::io::{parse_colors, parse_edge_list, parse_vertex_list};
use nwd_core::graph::Bfs;
use nwd_core::indepset::{brute_dis, dis, verify_independent, DisConfig};
use nwd_core::order::{all_wreach, brute_wcol, order_from_aug, wcol_of_order, VertexOrder};
use nwd_core::splitter::{
    play_game, replay, AdversarialConnector, CenterConnector, Connector, GameParams, RandomConnector,
};
use nwd_core::{Graph, GraphError};

#[derive(Parser)]
#[command(name = "nwd", version, about = "Sparse-graph toolkit: augmentations, covers, splitter game, distance-independent sets, FO with distance atoms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphSource {
    /// Edge list or DIMACS file.
    #[arg(long, conflicts_with = "generate", required_unless_present = "generate")]
    input: Option<PathBuf>,
    /// Built-in family, e.g. `grid:20x20`, `random:200:400`, `cubic:50`.
    #[arg(long)]
    generate: Option<Family>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GraphSource {
    fn load(&self) -> anyhow::Result<Graph> {
        match (&self.input, &self.generate) {
            (Some(path), _) => read_graph(path),
            (None, Some(family)) => Ok(family.build(self.seed)?),
            (None, None) => bail!("no input graph"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConnectorKind {
    Random,
    Center,
    Adversarial,
}

#[derive(Subcommand)]
enum Command {
    /// Sparse neighbourhood cover as JSON.
    Cover {
        #[arg(long)]
        radius: usize,
        #[command(flatten)]
        graph: GraphSource,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Sweep vertices by id instead of the augmentation order.
        #[arg(long)]
        natural_order: bool,
    },
    /// Vertex order from the augmentation and its weak colouring number.
    Wcol {
        #[arg(long)]
        radius: usize,
        #[command(flatten)]
        graph: GraphSource,
        /// Also compute the exact value by brute force (small graphs only).
        #[arg(long)]
        exact: bool,
    },
    /// Tight fraternal augmentation.
    Aug {
        #[arg(long)]
        rounds: usize,
        #[command(flatten)]
        graph: GraphSource,
        /// Print key=value statistics instead of the arcs.
        #[arg(long)]
        stats: bool,
    },
    /// Distance-independent set among candidates.
    Dis {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        radius: usize,
        #[command(flatten)]
        graph: GraphSource,
        /// Candidate vertices; all vertices by default.
        #[arg(long)]
        candidates: Option<PathBuf>,
        #[arg(long = "l")]
        rounds: Option<usize>,
        #[arg(long = "m")]
        budget: Option<usize>,
        /// Exhaustive search instead of the recursive solver.
        #[arg(long)]
        oracle: bool,
    },
    /// Play the splitter game against a connector strategy.
    Splitter {
        #[arg(long = "l")]
        rounds: usize,
        #[arg(long = "m")]
        budget: usize,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_enum, default_value = "center")]
        connector: ConnectorKind,
        #[command(flatten)]
        graph: GraphSource,
    },
    /// First-order logic with distance atoms.
    Fo {
        #[command(subcommand)]
        command: FoCommand,
    },
    /// Run the invariant checks on one graph; exit 1 on any violation.
    Verify {
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[command(flatten)]
        graph: GraphSource,
    },
    /// Cover construction time on square grids.
    Bench {
        /// Grid side lengths.
        #[arg(long, value_delimiter = ',', default_values_t = [100, 200, 400])]
        sides: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        /// Best of this many runs per size.
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        /// Fail when a successive time ratio exceeds this.
        #[arg(long, default_value_t = 5.0)]
        max_ratio: f64,
    },
}

#[derive(Subcommand)]
enum FoCommand {
    /// Evaluate a formula; prints `true` or `false`.
    Eval {
        #[arg(long)]
        formula: PathBuf,
        #[command(flatten)]
        graph: GraphSource,
        /// Colour file; class i becomes predicate P<i>.
        #[arg(long)]
        colors: Option<PathBuf>,
        /// `x=3`, comma separated or repeated.
        #[arg(long, value_delimiter = ',')]
        assign: Vec<String>,
    },
    /// Decide the EF game with distance atoms between two pointed graphs.
    Ef {
        #[arg(long = "inputA")]
        input_a: PathBuf,
        #[arg(long = "a", value_delimiter = ',')]
        a: Vec<usize>,
        #[arg(long = "inputB")]
        input_b: PathBuf,
        #[arg(long = "b", value_delimiter = ',')]
        b: Vec<usize>,
        #[arg(long = "colorsA")]
        colors_a: Option<PathBuf>,
        #[arg(long = "colorsB")]
        colors_b: Option<PathBuf>,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        l: usize,
        /// Also print the Hintikka formula of the first structure.
        #[arg(long)]
        hintikka: bool,
    },
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    parse_edge_list(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn structure(graph: Graph, colors: Option<&Path>) -> anyhow::Result<Structure> {
    Ok(match colors {
        Some(path) => Structure::from_colored(&parse_colors(graph, &read(path)?)?),
        None => Structure::new(graph),
    })
}

fn parse_assignment(items: &[String], n: usize) -> anyhow::Result<Assignment> {
    let mut out = Assignment::new();
    for item in items {
        let Some((var, value)) = item.split_once('=') else {
            bail!("assignment `{item}` is not of the form x=3");
        };
        let v: usize = value.trim().parse().with_context(|| format!("bad vertex in `{item}`"))?;
        if v >= n {
            bail!("vertex {v} out of range");
        }
        out.insert(var.trim().to_string(), v);
    }
    Ok(out)
}

fn cmd_cover(g: &Graph, radius: usize, out: Option<&Path>, natural: bool) -> anyhow::Result<()> {
    let cover = if natural {
        build_cover(g, radius, &VertexOrder::identity(g.vertex_count()))
    } else {
        build_cover_default(g, radius)?
    };
    let report = verify_cover(g, radius, &cover);
    if !report.is_ok() {
        return Err(GraphError::PropertyViolation(format!("{:?}", report.violations[0])).into());
    }
    let text = serde_json::to_string_pretty(&cover.to_json(&report.stats))? + "\n";
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_wcol(g: &Graph, radius: usize, exact: bool) -> anyhow::Result<()> {
    let (ord, _) = order_from_aug(g, radius)?;
    for v in ord.sequence() {
        println!("{v}");
    }
    println!("wcol={}", wcol_of_order(g, &ord, radius));
    if exact {
        let (best, _) = brute_wcol(g, radius)?;
        println!("exact={best}");
    }
    Ok(())
}

fn cmd_aug(g: &Graph, rounds: usize, stats: bool) -> anyhow::Result<()> {
    let h = aug(g, rounds)?;
    if stats {
        let [original, transitive, fraternal] = h.counts();
        println!("rounds={}", h.rounds);
        println!("arcs.original={original}");
        println!("arcs.transitive={transitive}");
        println!("arcs.fraternal={fraternal}");
        println!("max_indegree={}", h.max_indegree);
    } else {
        for (u, v) in h.digraph.arcs() {
            println!("{u} {v}");
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_dis(
    g: &Graph,
    k: usize,
    radius: usize,
    candidates: Option<&Path>,
    rounds: Option<usize>,
    budget: Option<usize>,
    oracle: bool,
) -> anyhow::Result<()> {
    let w = match candidates {
        Some(path) => parse_vertex_list(&read(path)?, g.vertex_count())?,
        None => g.vertices().collect(),
    };
    let found = if oracle {
        brute_dis(g, &w, k, radius)?
    } else {
        let cfg = DisConfig {
            rounds,
            budget,
            ..DisConfig::default()
        };
        dis(g, &w, k, radius, &cfg)?
    };
    match found {
        Some(set) => {
            verify_independent(g, &set, k, radius)?;
            let words: Vec<String> = set.iter().map(ToString::to_string).collect();
            println!("yes {}", words.join(" "));
        }
        None => println!("no"),
    }
    Ok(())
}

fn cmd_splitter(g: &Graph, params: GameParams, kind: ConnectorKind, seed: u64) -> anyhow::Result<()> {
    let mut connector: Box<dyn Connector> = match kind {
        ConnectorKind::Random => Box::new(RandomConnector::new(seed)),
        ConnectorKind::Center => Box::new(CenterConnector),
        ConnectorKind::Adversarial => Box::new(AdversarialConnector),
    };
    let transcript = play_game(g, params, connector.as_mut())?;
    replay(g, &transcript)?;
    print!("{}", transcript.render());
    Ok(())
}

fn cmd_fo(command: &FoCommand) -> anyhow::Result<()> {
    match command {
        FoCommand::Eval {
            formula,
            graph,
            colors,
            assign,
        } => {
            let phi = parse_formula(&read(formula)?).with_context(|| format!("in {}", formula.display()))?;
            let s = structure(graph.load()?, colors.as_deref())?;
            let assignment = parse_assignment(assign, s.vertex_count())?;
            println!("{}", eval(&phi, &s, &assignment)?);
        }
        FoCommand::Ef {
            input_a,
            a,
            input_b,
            b,
            colors_a,
            colors_b,
            q,
            l,
            hintikka: show,
        } => {
            let sa = structure(read_graph(input_a)?, colors_a.as_deref())?;
            let sb = structure(read_graph(input_b)?, colors_b.as_deref())?;
            let same = ef_plus_equivalent(&sa, a, &sb, b, *q, *l)?;
            println!("{}", if same { "equivalent" } else { "distinguishable" });
            if *show {
                println!("{}", hintikka(&sa, a, *q, *l)?);
            }
        }
    }
    Ok(())
}

/// Returns the number of failed checks.
fn cmd_verify(g: &Graph, r: usize) -> anyhow::Result<usize> {
    let mut failures = 0;
    let mut report = |name: &str, ok: bool, detail: String| {
        println!("{} {name}: {detail}", if ok { "ok  " } else { "FAIL" });
        failures += usize::from(!ok);
    };

    let mut prev = aug(g, 0)?;
    let mut aug_violations = 0;
    for round in 1..=r {
        let next = aug(g, round)?;
        aug_violations += verify_aug(&prev.digraph, &next.digraph).violations.len();
        prev = next;
    }
    report("augmentation", aug_violations == 0, format!("{aug_violations} violations over {r} rounds"));

    let mut bfs = Bfs::new(g.vertex_count());
    let mut missing = 0;
    for v in g.vertices() {
        for &w in bfs.run(g, &[v], r, |_| true) {
            missing += usize::from(find_witness(&prev.digraph, v, w).is_none());
        }
    }
    report("neighbourhood witness", missing == 0, format!("{missing} close pairs without a witness"));

    let (ord, d) = order_from_aug(g, r)?;
    let wcol = wcol_of_order(g, &ord, r);
    let bound = 2 * (d + 1) * (d + 1);
    report("wcol bound", wcol <= bound, format!("wcol={wcol} bound={bound} d={d}"));

    let (cord, _) = order_from_aug(g, 2 * r)?;
    let cover = build_cover(g, r, &cord);
    let cr = verify_cover(g, r, &cover);
    report("cover", cr.is_ok(), format!("{} violations", cr.violations.len()));
    let wreach = all_wreach(g, &cord, 2 * r).iter().map(Vec::len).max().unwrap_or(0);
    report(
        "cover degree",
        cr.stats.max_degree == wreach,
        format!("max_degree={} max_wreach={wreach}", cr.stats.max_degree),
    );
    Ok(failures)
}

fn cmd_bench(sides: &[usize], radius: usize, repeat: usize, max_ratio: f64) -> anyhow::Result<bool> {
    let mut times = Vec::new();
    for &side in sides {
        let g = grid(side, side);
        let mut best = f64::INFINITY;
        let mut stats = None;
        for _ in 0..repeat.max(1) {
            let start = Instant::now();
            let cover = build_cover_default(&g, radius)?;
            best = best.min(start.elapsed().as_secs_f64());
            stats.get_or_insert_with(|| verify_cover(&g, radius, &cover).stats);
        }
        let stats = stats.expect("at least one run");
        println!(
            "{}",
            json!({
                "side": side,
                "n": g.vertex_count(),
                "seconds": best,
                "max_degree": stats.max_degree,
                "total_size": stats.total_size,
            })
        );
        times.push(best);
    }
    let mut ok = true;
    for (pair, window) in sides.windows(2).zip(times.windows(2)) {
        let ratio = window[1] / window[0];
        ok &= ratio <= max_ratio;
        println!("ratio {}->{}: {ratio:.2}", pair[0], pair[1]);
    }
    Ok(ok)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Cover {
            radius,
            graph,
            out,
            natural_order,
        } => cmd_cover(&graph.load()?, radius, out.as_deref(), natural_order)?,
        Command::Wcol { radius, graph, exact } => cmd_wcol(&graph.load()?, radius, exact)?,
        Command::Aug { rounds, graph, stats } => cmd_aug(&graph.load()?, rounds, stats)?,
        Command::Dis {
            k,
            radius,
            graph,
            candidates,
            rounds,
            budget,
            oracle,
        } => cmd_dis(&graph.load()?, k, radius, candidates.as_deref(), rounds, budget, oracle)?,
        Command::Splitter {
            rounds,
            budget,
            radius,
            connector,
            graph,
        } => cmd_splitter(&graph.load()?, GameParams::new(rounds, budget, radius)?, connector, graph.seed)?,
        Command::Fo { command } => cmd_fo(&command)?,
        Command::Verify { radius, graph } => return Ok(cmd_verify(&graph.load()?, radius)? == 0),
        Command::Bench {
            sides,
            radius,
            repeat,
            max_ratio,
        } => return cmd_bench(&sides, radius, repeat, max_ratio),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let violation = matches!(e.downcast_ref::<GraphError>(), Some(GraphError::PropertyViolation(_)));
            ExitCode::from(if violation { 1 } else { 2 })
        }
    }
}

mod input;
mod manifest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use divpoly_core::allocation::{self, Allocator};
use divpoly_core::polytope::{self, PolytopeDescription};
use divpoly_core::rational::{self, Rational};
use divpoly_core::symmetry::SymmetryAnalysis;
use divpoly_core::{corpus, index, oracle, EdgeRef, NodeId, PhyloTree, SplitAssignment};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "divpoly", version, about = "Exact diversity index polytopes of rooted binary trees")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Symmetry classes, degrees of freedom and per-taxon bounds.
    Analyze { input: String },
    /// Minimal H-description: affine hull, lower bounds, allocation facets.
    Facets {
        input: String,
        /// Also list rejected candidates.
        #[arg(long)]
        rejected: bool,
    },
    /// Extreme points with a generating split corner each.
    Vertices { input: String },
    /// Projection of the polytope onto d taxa.
    Project {
        input: String,
        /// Comma-separated taxa, exactly d of them.
        #[arg(long)]
        taxa: String,
    },
    /// Compare generated descriptions with the brute-force oracle.
    Verify {
        /// A single tree; without it, a sweep over generated trees runs.
        input: Option<String>,
        #[arg(long, default_value_t = 7)]
        max_leaves: usize,
        #[arg(long, default_value_t = 200)]
        random: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Maximize a linear objective over the polytope.
    Optimize {
        input: String,
        /// File with one coefficient per taxon.
        #[arg(long)]
        objective: String,
    },
    /// Diversity index scores.
    Index {
        #[command(subcommand)]
        which: IndexCommand,
    },
    /// Maximum allocation r(T(Z)) with its witness.
    Alloc {
        input: String,
        /// Comma-separated taxa of Z.
        #[arg(long)]
        set: String,
        /// Restrict to r_i for this anchor.
        #[arg(long)]
        anchor: Option<String>,
    },
    /// Bundled reference corpus.
    Corpus {
        #[command(subcommand)]
        which: CorpusCommand,
    },
}

#[derive(Subcommand)]
enum IndexCommand {
    /// Fair Proportion scores.
    Fp { input: String },
    /// Scores of the consistent index with the given split fractions.
    Eval {
        input: String,
        /// File with one β per free class, in parameter order.
        #[arg(long)]
        beta: String,
    },
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// List bundled trees.
    List,
    /// Check every manifest assertion; exits 1 if any fails.
    Check {
        /// Corpus directory with a manifest.json; defaults to the bundled copy.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Print generated trees, one Newick string per line.
    Generate {
        #[arg(long, default_value_t = 6)]
        max_leaves: usize,
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

enum Outcome {
    Ok,
    Discrepancy,
}

struct Ctx {
    format: Format,
}

impl Ctx {
    fn emit(&self, json: Value, text: impl FnOnce() -> String) {
        let body = match self.format {
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&json).expect("serializable")),
            Format::Text => text(),
        };
        // A closed pipe (e.g. `| head`) is not an error worth reporting.
        let _ = std::io::stdout().lock().write_all(body.as_bytes());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx { format: cli.format };
    match run(&ctx, cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Discrepancy) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(ctx: &Ctx, command: Command) -> Result<Outcome> {
    match command {
        Command::Analyze { input } => analyze(ctx, &input::load_tree(&input)?),
        Command::Facets { input, rejected } => facets(ctx, &input::load_tree(&input)?, rejected),
        Command::Vertices { input } => vertices(ctx, &input::load_tree(&input)?),
        Command::Project { input, taxa } => project(ctx, &input::load_tree(&input)?, &taxa),
        Command::Verify { input, max_leaves, random, seed } => verify(ctx, input.as_deref(), max_leaves, random, seed),
        Command::Optimize { input, objective } => optimize(ctx, &input::load_tree(&input)?, &objective),
        Command::Index { which: IndexCommand::Fp { input } } => index_fp(ctx, &input::load_tree(&input)?),
        Command::Index { which: IndexCommand::Eval { input, beta } } => index_eval(ctx, &input::load_tree(&input)?, &beta),
        Command::Alloc { input, set, anchor } => alloc(ctx, &input::load_tree(&input)?, &set, anchor.as_deref()),
        Command::Corpus { which } => corpus_cmd(ctx, which),
    }
}

fn pq(r: &Rational) -> String {
    rational::fmt_pq(r)
}

fn plain(r: &Rational) -> String {
    rational::fmt_plain(r)
}

fn names(tree: &PhyloTree, ids: &[NodeId]) -> Vec<String> {
    ids.iter().map(|&v| tree.name(v)).collect()
}

fn edge_names(tree: &PhyloTree, edges: &[EdgeRef]) -> Vec<String> {
    edges.iter().map(|&e| tree.edge_name(e)).collect()
}

fn scores_json(tree: &PhyloTree, s: &[Rational]) -> Value {
    let map: serde_json::Map<String, Value> =
        tree.taxa().iter().zip(s).map(|(&x, v)| (tree.name(x), Value::String(pq(v)))).collect();
    Value::Object(map)
}

fn scores_text(tree: &PhyloTree, s: &[Rational]) -> String {
    tree.taxa().iter().zip(s).map(|(&x, v)| format!("  {:<8} {}\n", tree.name(x), plain(v))).collect()
}

fn analyze(ctx: &Ctx, tree: &PhyloTree) -> Result<Outcome> {
    let a = SymmetryAnalysis::new(tree)?;
    let report = allocation::report(tree, &a);
    let classes: Vec<Value> = a
        .classes()
        .iter()
        .map(|c| {
            json!({
                "id": c.id.0,
                "shape": c.code.0,
                "free": c.free,
                "members": edge_names(tree, &c.members),
            })
        })
        .collect();
    let groups: Vec<Value> = report
        .taxa
        .iter()
        .zip(tree.taxa())
        .map(|(b, &x)| {
            json!({
                "taxon": b.taxon,
                "lb": pq(&b.lb),
                "ub": pq(&b.ub),
                "n": b.n,
                "group": names(tree, &a.max_group(tree, x)),
            })
        })
        .collect();
    let doc = json!({
        "taxa": tree.taxon_count(),
        "total_length": pq(&tree.total_length()),
        "dimension": a.degrees_of_freedom(),
        "classes": classes,
        "independent_edges": edge_names(tree, a.independent_edges()),
        "dependent_edges": edge_names(tree, a.dependent_edges()),
        "bounds": groups,
    });
    ctx.emit(doc, || {
        let mut out = format!(
            "taxa {}\ntotal length {}\nd = {}\nclasses {}\n",
            tree.taxon_count(),
            plain(&tree.total_length()),
            a.degrees_of_freedom(),
            a.classes().len()
        );
        for c in a.classes() {
            let tag = if c.free { "free" } else { "fixed" };
            out.push_str(&format!("  [{}] {tag} {}\n", c.id.0, edge_names(tree, &c.members).join(" ")));
        }
        out.push_str(&format!("E_f {}\n", edge_names(tree, a.independent_edges()).join(" ")));
        out.push_str(&format!("E_c {}\n", edge_names(tree, a.dependent_edges()).join(" ")));
        out.push_str("taxon     LB       UB       N  group\n");
        for (b, &x) in report.taxa.iter().zip(tree.taxa()) {
            out.push_str(&format!(
                "  {:<8} {:<8} {:<8} {:<2} {}\n",
                b.taxon,
                plain(&b.lb),
                plain(&b.ub),
                b.n,
                names(tree, &a.max_group(tree, x)).join(",")
            ));
        }
        out
    });
    Ok(Outcome::Ok)
}

fn description(tree: &PhyloTree) -> Result<(SymmetryAnalysis, PolytopeDescription)> {
    let a = SymmetryAnalysis::new(tree)?;
    let d = polytope::facets(tree, &a);
    Ok((a, d))
}

fn facets(ctx: &Ctx, tree: &PhyloTree, show_rejected: bool) -> Result<Outcome> {
    let (_, desc) = description(tree)?;
    let mut doc = serde_json::to_value(&desc)?;
    if !show_rejected {
        doc.as_object_mut().expect("object").remove("rejected");
    }
    ctx.emit(doc, || {
        let mut out = format!("dimension {}\n", desc.dimension);
        out.push_str(&format!("equalities {}\n", desc.affine_equalities.len()));
        for e in &desc.affine_equalities {
            out.push_str(&format!("  {}\n", e.render(tree)));
        }
        out.push_str(&format!(
            "facets {} ({} lower bound, {} allocation)\n",
            desc.facets.len(),
            desc.lb_facets().count(),
            desc.allocation_facets().count()
        ));
        for f in &desc.facets {
            out.push_str(&format!("  {}", f.render(tree)));
            if let Some(g) = &f.generator {
                out.push_str(&format!(
                    "    [x_i={} Y={{{}}} x_k={} Z={{{}}}]",
                    g.anchor,
                    g.y.join(","),
                    g.x_k,
                    g.z.join(",")
                ));
            }
            out.push('\n');
        }
        if show_rejected {
            out.push_str(&format!("rejected {}\n", desc.rejected.len()));
            for r in &desc.rejected {
                let fam = if r.in_family { " in family" } else { "" };
                out.push_str(&format!(
                    "  {}    support dimension {}{fam}\n",
                    r.inequality.render(tree),
                    r.inequality.support_dimension
                ));
            }
        }
        for d in &desc.discrepancies {
            out.push_str(&format!("note: {d}\n"));
        }
        out
    });
    Ok(Outcome::Ok)
}

fn vertices(ctx: &Ctx, tree: &PhyloTree) -> Result<Outcome> {
    let (_, desc) = description(tree)?;
    let doc = json!({
        "dimension": desc.dimension,
        "taxa": desc.taxa,
        "vertices": desc.vertices,
    });
    ctx.emit(doc, || {
        let mut out = format!("dimension {}\nvertices {}\n", desc.dimension, desc.vertices.len());
        out.push_str(&format!("  ({})\n", desc.taxa.join(", ")));
        for v in &desc.vertices {
            let s: Vec<String> = v.scores.0.iter().map(plain).collect();
            let b: Vec<String> = v.beta.betas().iter().map(plain).collect();
            out.push_str(&format!("  ({})  beta ({})\n", s.join(", "), b.join(", ")));
        }
        out
    });
    Ok(Outcome::Ok)
}

fn project(ctx: &Ctx, tree: &PhyloTree, taxa: &str) -> Result<Outcome> {
    let (a, desc) = description(tree)?;
    let y = input::taxa_list(tree, taxa)?;
    let p = polytope::project(&desc, tree, &a, &y)?;
    ctx.emit(serde_json::to_value(&p)?, || {
        let mut out = format!("projection onto ({})\npoints {}\n", p.taxa.join(", "), p.points.len());
        for pt in &p.points {
            out.push_str(&format!("  ({})\n", pt.join(", ")));
        }
        out.push_str(&format!("facets {}\n", p.facet_count));
        let sub = PhyloTree::parse_newick(&projection_stub(&p.taxa)).expect("stub parses");
        for f in &p.facets {
            out.push_str(&format!("  {}\n", f.render(&sub)));
        }
        out.push_str(&format!("allocation bounds hold: {}\n", p.allocation_bounds_hold));
        out
    });
    Ok(Outcome::Ok)
}

/// A caterpillar on the projected labels, used only to render coefficients by name.
fn projection_stub(labels: &[String]) -> String {
    let mut nwk = labels[0].clone();
    for l in &labels[1..] {
        nwk = format!("({nwk},{l})");
    }
    if labels.len() == 1 {
        nwk = format!("({nwk},_)");
    }
    format!("{nwk};")
}

fn verify(ctx: &Ctx, input: Option<&str>, max_leaves: usize, random: usize, seed: u64) -> Result<Outcome> {
    let bound = oracle::leaf_bound();
    let trees = match input {
        Some(spec) => vec![input::load_tree(spec)?],
        None => {
            if max_leaves + 1 > bound {
                bail!("sweep reaches {} leaves, above the oracle bound of {bound} (set DIVPOLY_MAX_LEAVES)", max_leaves + 1);
            }
            oracle::sweep_trees(max_leaves, random, seed)
        }
    };
    let report = oracle::sweep(&trees, bound)?;
    ctx.emit(serde_json::to_value(&report)?, || {
        let mut out = format!(
            "trees {}\nmismatches {}\nnoted {}\n",
            report.trees,
            report.mismatches.len(),
            report.noted.len()
        );
        for v in &report.mismatches {
            out.push_str(&format!("MISMATCH {}\n", v.newick));
            for m in &v.report.missing_facets {
                out.push_str(&format!("  missing facet {m}\n"));
            }
            for m in &v.report.extra_facets {
                out.push_str(&format!("  extra facet on {m}\n"));
            }
            for m in &v.report.missing_vertices {
                out.push_str(&format!("  missing vertex ({})\n", m.join(",")));
            }
            for m in &v.report.extra_vertices {
                out.push_str(&format!("  extra vertex ({})\n", m.join(",")));
            }
            for m in &v.report.violated {
                out.push_str(&format!("  violated {m}\n"));
            }
        }
        for v in &report.noted {
            out.push_str(&format!("note {}\n", v.newick));
            for n in &v.notes {
                out.push_str(&format!("  {n}\n"));
            }
        }
        out.push_str(if report.passed() { "ok\n" } else { "FAILED\n" });
        out
    });
    Ok(if report.passed() { Outcome::Ok } else { Outcome::Discrepancy })
}

fn optimize(ctx: &Ctx, tree: &PhyloTree, objective: &str) -> Result<Outcome> {
    let (_, desc) = description(tree)?;
    let text = input::read_text(objective)?;
    let c = input::parse_vector(&text, tree, tree.taxon_count()).context("malformed objective")?;
    let opt = polytope::optimize(&desc, &c)?;
    let optimizers: Vec<Value> = opt.optimizers.iter().map(|&i| scores_json(tree, &desc.vertices[i].scores.0)).collect();
    let doc = json!({
        "value": pq(&opt.value),
        "certified": opt.certified,
        "optimizers": optimizers,
    });
    ctx.emit(doc, || {
        let mut out = format!("maximum {}\noptimal vertices {}\n", plain(&opt.value), opt.optimizers.len());
        for &i in &opt.optimizers {
            let s: Vec<String> = desc.vertices[i].scores.0.iter().map(plain).collect();
            out.push_str(&format!("  ({})\n", s.join(", ")));
        }
        out.push_str(&format!("certified {}\n", opt.certified));
        out
    });
    Ok(Outcome::Ok)
}

fn emit_scores(ctx: &Ctx, tree: &PhyloTree, title: &str, s: &[Rational], inside: bool) {
    let total: Rational = s.iter().sum();
    let doc = json!({
        "scores": scores_json(tree, s),
        "total": pq(&total),
        "inside": inside,
    });
    ctx.emit(doc, || {
        format!("{title}\n{}total {}\ninside polytope {inside}\n", scores_text(tree, s), plain(&total))
    });
}

fn index_fp(ctx: &Ctx, tree: &PhyloTree) -> Result<Outcome> {
    let (_, desc) = description(tree)?;
    let fp = index::fair_proportion(tree);
    let inside = polytope::membership(&desc, &fp.0)?.inside;
    emit_scores(ctx, tree, "Fair Proportion", &fp.0, inside);
    Ok(Outcome::Ok)
}

fn index_eval(ctx: &Ctx, tree: &PhyloTree, beta: &str) -> Result<Outcome> {
    let (a, desc) = description(tree)?;
    let text = input::read_text(beta)?;
    let betas = input::parse_vector(&text, tree, a.degrees_of_freedom()).context("malformed beta file")?;
    let assignment = SplitAssignment::new(&a, betas)?;
    let s = index::score_for(tree, &a, &assignment);
    let inside = polytope::membership(&desc, &s.0)?.inside;
    emit_scores(ctx, tree, "scores", &s.0, inside);
    Ok(Outcome::Ok)
}

fn alloc(ctx: &Ctx, tree: &PhyloTree, set: &str, anchor: Option<&str>) -> Result<Outcome> {
    let a = SymmetryAnalysis::new(tree)?;
    let z = input::taxa_list(tree, set)?;
    let anchor = anchor.map(|x| tree.taxon(x)).transpose()?;
    let al = Allocator::new(tree, &a);
    let best = al.max_allocation(&z, anchor)?;
    let per_anchor: Vec<(String, Rational)> = match anchor {
        Some(_) => Vec::new(),
        None => z
            .iter()
            .map(|&x| Ok((tree.name(x), al.max_allocation(&z, Some(x))?.value)))
            .collect::<Result<_>>()?,
    };
    let trace: Vec<Value> = best
        .trace
        .iter()
        .map(|t| json!({ "edge": tree.edge_name(t.edge), "share": pq(&t.share), "contribution": pq(&t.contribution) }))
        .collect();
    let doc = json!({
        "z": names(tree, &z),
        "anchor": anchor.map(|x| tree.name(x)),
        "value": pq(&best.value),
        "anchored": per_anchor.iter().map(|(n, v)| json!({ "anchor": n, "value": pq(v) })).collect::<Vec<_>>(),
        "witness": best.witness,
        "trace": trace,
    });
    ctx.emit(doc, || {
        let label = match anchor {
            Some(x) => format!("r_{}", tree.name(x)),
            None => "r".to_string(),
        };
        let mut out = format!("Z = {{{}}}\n{label} = {}\n", names(tree, &z).join(","), plain(&best.value));
        for (n, v) in &per_anchor {
            out.push_str(&format!("  r_{n} = {}\n", plain(v)));
        }
        let b: Vec<String> = best.witness.betas().iter().map(plain).collect();
        out.push_str(&format!("witness beta ({})\n", b.join(", ")));
        for t in &best.trace {
            out.push_str(&format!(
                "  {}  share {}  contribution {}\n",
                tree.edge_name(t.edge),
                plain(&t.share),
                plain(&t.contribution)
            ));
        }
        out
    });
    Ok(Outcome::Ok)
}

fn corpus_cmd(ctx: &Ctx, which: CorpusCommand) -> Result<Outcome> {
    match which {
        CorpusCommand::List => {
            let m = manifest::bundled()?;
            let rows: Vec<(String, String)> = m
                .trees
                .iter()
                .map(|e| (e.name.clone(), manifest::bundled_newick(&e.name).unwrap_or_default().trim().to_string()))
                .collect();
            let doc = json!(rows.iter().map(|(n, t)| json!({ "name": n, "newick": t })).collect::<Vec<_>>());
            ctx.emit(doc, || rows.iter().map(|(n, t)| format!("{n:<10} {t}\n")).collect());
            Ok(Outcome::Ok)
        }
        CorpusCommand::Check { dir } => {
            let results = manifest::check(dir.as_deref())?;
            let ok = results.iter().all(|r| r.failures.is_empty());
            ctx.emit(serde_json::to_value(&results)?, || {
                let mut out = String::new();
                for r in &results {
                    let status = if r.failures.is_empty() { "ok" } else { "FAILED" };
                    out.push_str(&format!("{:<10} {} checks {status}\n", r.name, r.checks));
                    for f in &r.failures {
                        out.push_str(&format!("  {f}\n"));
                    }
                }
                out
            });
            Ok(if ok { Outcome::Ok } else { Outcome::Discrepancy })
        }
        CorpusCommand::Generate { max_leaves, random, seed } => {
            let mut trees: Vec<String> =
                corpus::all_shapes_up_to(max_leaves).iter().map(|s| s.to_tree(rational::one).to_newick()).collect();
            trees.extend(corpus::random_trees(random, max_leaves, seed).iter().map(PhyloTree::to_newick));
            ctx.emit(json!(trees), || trees.iter().map(|t| format!("{t}\n")).collect());
            Ok(Outcome::Ok)
        }
    }
}

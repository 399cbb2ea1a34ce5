//! The `genring` command-line workbench: every analysis as a deterministic
//! text or JSON command.
//!
//! Exit codes: 0 on success, 1 on domain errors, 2 on usage errors. JSON
//! output is schema-stable and byte-deterministic for fixed inputs and
//! seeds. The environment variable `GENRING_BUDGET` caps enumeration sizes
//! (free-term pools, model-search nodes, section scans).

use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::classify;
use crate::error::{Error, Result};
use crate::exactnum::{product_formula_check, Rat};
use crate::monad::{parse_val, Handle};
use crate::picard_arakelov as pic;
use crate::presentations as pres;
use crate::projgraded as proj;
use crate::spectra;

#[derive(Parser)]
#[command(
    name = "genring",
    about = "Computational workbench for generalized rings",
    version,
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Common {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Additivity classification of a monad (Table-1-shaped row).
    Classify {
        /// Monad id: Z, N, BN:k, AN:k, Zinf, F1, F12, F1n:k, Finf, Fempty.
        monad: String,
        #[arg(long, default_value_t = 3)]
        arity: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Interchange-law check of a pair of operations.
    Commute {
        monad: String,
        /// Left operation (coefficient vectors as `1/2,-1/2`; signs as
        /// `+,-,0`; cyclotomic as `arity@slot:exp`).
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
        #[command(flatten)]
        common: Common,
    },
    /// Points of a spectrum (Z, BN:k, AN:k, hat:k, hat), or the ideals of a
    /// finite monad (F1, F12, F1n:k, Finf).
    Spec {
        space: String,
        #[arg(long, default_value_t = 50)]
        bound: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Closure of a point and openness of a cofinite subset.
    Topology {
        space: String,
        /// Point whose closure to print (xi, a prime, or inf).
        #[arg(long)]
        closure: Option<String>,
        /// Comma-separated complement of the subset to test for openness.
        #[arg(long)]
        complement: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// The ring of germs at a point, with an optional membership probe.
    Stalk {
        space: String,
        point: String,
        /// Rational to test for membership in the stalk.
        #[arg(long, allow_hyphen_values = true)]
        probe: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Tensor product of two presentation files over a common base.
    Tensor {
        file1: std::path::PathBuf,
        file2: std::path::PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Bounded equational proof with optional finite-model cross-check.
    Prove {
        /// Presentation file.
        file: std::path::PathBuf,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        /// Instantiation depth bound.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Also search for countermodels up to this carrier size.
        #[arg(long)]
        countermodel: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Number of points of ℙⁿ over 𝔽_1.
    ProjCount {
        n: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Verify that Proj R matches the level-N compactification.
    ProjVerify {
        n: u64,
        #[arg(long, default_value_t = 50)]
        bound: u64,
        #[command(flatten)]
        common: Common,
    },
    /// The Picard group of the level-N space; with --element, the class of
    /// a positive rational in the limit.
    Pic {
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        element: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Lattice points of a convex body (`oct:r`, `box:a,b`, `ell:entries`).
    Sections {
        #[arg(long)]
        body: String,
        /// Dimension (required for octahedra).
        #[arg(long)]
        dim: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact volume-vs-2^d verdict with an exhibited lattice point.
    Minkowski {
        #[arg(long)]
        body: String,
        #[arg(long)]
        dim: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Per-place absolute values and the product formula for one rational.
    ProductFormula {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[command(flatten)]
        common: Common,
    },
    /// Build a model over the archimedean valuation ring from a .poly file.
    Model {
        file: std::path::PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Parse a presentation file and print it back (or as JSON).
    Parse {
        file: std::path::PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

/// Enumeration caps, configurable through GENRING_BUDGET.
#[derive(Clone, Copy)]
pub struct Budget {
    pub term_cap: usize,
    pub model_nodes: u64,
}

impl Budget {
    fn from_env() -> Budget {
        let base: u64 = std::env::var("GENRING_BUDGET")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(1_000_000);
        Budget {
            term_cap: (base as usize).clamp(1_000, 50_000_000),
            model_nodes: (base * 50).clamp(50_000, 5_000_000_000),
        }
    }
}

/// Runs the CLI on explicit arguments, writing to the given stream.
/// Returns the process exit code.
pub fn run(args: &[String], out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage text.
            let _ = write!(out, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(Error::Input(msg)) => {
            let _ = writeln!(out, "usage error: {msg}");
            2
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            1
        }
    }
}

fn emit(
    out: &mut dyn Write,
    common: &Common,
    value: serde_json::Value,
    table: String,
) -> Result<()> {
    if common.json {
        let rendered =
            serde_json::to_string_pretty(&value).map_err(|e| Error::internal(e.to_string()))?;
        writeln!(out, "{rendered}").map_err(|e| Error::internal(e.to_string()))?;
    } else {
        write!(out, "{table}").map_err(|e| Error::internal(e.to_string()))?;
    }
    Ok(())
}

/// Parses a body spec string (`oct:r`, `box:a,b`, `ell:entries`).
pub fn parse_body(spec: &str, dim: Option<usize>) -> Result<pic::ConvexBody> {
    let (kind, params) = spec
        .split_once(':')
        .ok_or_else(|| Error::input("body syntax: oct:r | box:a,b | ell:q11,q12,..."))?;
    match kind {
        "oct" => {
            let r: Rat = params.parse()?;
            let d = dim.ok_or_else(|| Error::input("octahedra need --dim"))?;
            pic::ConvexBody::octahedron(d, r)
        }
        "box" => {
            let hw: Vec<Rat> = params
                .split(',')
                .map(|p| p.parse())
                .collect::<Result<_>>()?;
            pic::ConvexBody::cuboid(hw)
        }
        "ell" => {
            let entries: Vec<Rat> = params
                .split(',')
                .map(|p| p.parse())
                .collect::<Result<_>>()?;
            let d = match entries.len() {
                1 => 1,
                4 => 2,
                9 => 3,
                _ => return Err(Error::input("ellipsoids take d² row-major entries")),
            };
            let q: Vec<Vec<Rat>> = entries.chunks(d).map(|c| c.to_vec()).collect();
            pic::ConvexBody::ellipsoid(q)
        }
        _ => Err(Error::input("body kinds: oct, box, ell")),
    }
}

fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn parse_term_arg(p: &pres::Presentation, s: &str) -> Result<pres::Term> {
    // Reuse the grammar through a throwaway relation against itself.
    let text = format!("{}rel {s} = {s};", p.to_text());
    let parsed = pres::parse_presentation(&text)?;
    Ok(parsed
        .relations
        .last()
        .expect("relation was just added")
        .lhs
        .clone())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let budget = Budget::from_env();
    match cli.command {
        Command::Classify {
            monad,
            arity,
            common,
        } => {
            let h: Handle = monad.parse()?;
            let rep = classify::classify_additivity(&h, arity, common.seed)?;
            let pseudo = if h.has_constant() {
                Some(classify::find_pseudoaddition(&h)?)
            } else {
                None
            };
            let value = json!({
                "monad": rep.monad,
                "arity_bound": rep.n_max,
                "hypoadditive": rep.hypoadditive.oui_non(),
                "hyperadditive": rep.hyperadditive.oui_non(),
                "additive": rep.additive,
                "witnesses": rep.witnesses,
                "pseudoaddition": pseudo.as_ref().map(|p| &p.found),
            });
            let mut table = format!(
                "monad          {}\nhypoadditive   {}\nhyperadditive  {}\nadditive       {}\n",
                rep.monad,
                rep.hypoadditive.oui_non(),
                rep.hyperadditive.oui_non(),
                if rep.additive { "oui" } else { "non" },
            );
            if let Some(p) = &pseudo {
                table.push_str(&format!(
                    "pseudoaddition {}\n",
                    p.found.as_deref().unwrap_or("none")
                ));
            }
            for w in &rep.witnesses {
                table.push_str(&format!("witness        {w}\n"));
            }
            emit(out, &common, value, table)
        }
        Command::Commute {
            monad,
            left,
            right,
            common,
        } => {
            let h: Handle = monad.parse()?;
            let t = parse_val(&h, &left)?;
            let s = parse_val(&h, &right)?;
            let rep = classify::commute(&h, &t, &s)?;
            let value = json!({
                "monad": h.name(),
                "commute": rep.commute,
                "witness": rep.witness,
            });
            let table = match &rep.witness {
                None => format!("commute: yes ({left} vs {right})\n"),
                Some((pos, l, r)) => format!(
                    "commute: no\nfirst difference at grid position {pos}\nrow-composite    {l}\ncolumn-composite {r}\n"
                ),
            };
            emit(out, &common, value, table)
        }
        Command::Spec {
            space,
            bound,
            common,
        } => {
            // Finite monads get their ideal-theoretic spectra.
            if let Ok(h) = Handle::from_str(&space) {
                if h.enumerate(1).is_some() {
                    let ideals = spectra::ideals_finite(&h, 2)?;
                    let primes: Vec<&spectra::FiniteIdeal> =
                        ideals.iter().filter(|i| i.prime).collect();
                    let value = json!({
                        "monad": h.name(),
                        "ideals": ideals,
                        "spec_size": primes.len(),
                    });
                    let mut table = format!("ideals of {}:\n", h.name());
                    for i in &ideals {
                        table.push_str(&format!(
                            "  {{{}}}{}\n",
                            i.elements.join(", "),
                            if i.prime { "  (prime)" } else { "" }
                        ));
                    }
                    table.push_str(&format!("Spec has {} point(s)\n", primes.len()));
                    return emit(out, &common, value, table);
                }
            }
            let s: spectra::SpecSpace = space.parse()?;
            let pts = spectra::points(s, bound)?;
            let value = json!({
                "space": s.name(),
                "bound": bound,
                "points": pts.iter().map(|p| point_json(*p)).collect::<Vec<_>>(),
            });
            let rendered: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
            let table = format!("{} (primes ≤ {bound}): {}\n", s.name(), rendered.join(" "));
            emit(out, &common, value, table)
        }
        Command::Topology {
            space,
            closure,
            complement,
            common,
        } => {
            let s: spectra::SpecSpace = space.parse()?;
            let mut value = serde_json::Map::new();
            value.insert("space".into(), json!(s.name()));
            let mut table = String::new();
            if let Some(ptstr) = &closure {
                let pt: spectra::SpecPoint = ptstr.parse()?;
                let c = spectra::closure(s, pt)?;
                match &c {
                    spectra::ClosureSet::Whole => {
                        value.insert("closure".into(), json!("whole"));
                        table.push_str(&format!("closure({pt}) = the whole space\n"));
                    }
                    spectra::ClosureSet::Points(set) => {
                        let rendered: Vec<String> = set.iter().map(|p| p.to_string()).collect();
                        value.insert("closure".into(), json!(rendered));
                        table.push_str(&format!("closure({pt}) = {{{}}}\n", rendered.join(", ")));
                    }
                }
            }
            if let Some(cstr) = &complement {
                let pts: Vec<spectra::SpecPoint> = cstr
                    .split(',')
                    .map(|p| p.trim().parse())
                    .collect::<Result<_>>()?;
                let u = spectra::OpenSubset::avoiding(pts.iter().copied());
                let open = spectra::is_open(s, &u);
                let rendered: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
                value.insert("complement".into(), json!(rendered));
                value.insert("open".into(), json!(open));
                table.push_str(&format!(
                    "complement {{{cstr}}}: {}\n",
                    if open { "open" } else { "not open" }
                ));
            }
            if closure.is_none() && complement.is_none() {
                return Err(Error::input("give --closure and/or --complement"));
            }
            emit(out, &common, serde_json::Value::Object(value), table)
        }
        Command::Stalk {
            space,
            point,
            probe,
            common,
        } => {
            let s: spectra::SpecSpace = space.parse()?;
            let pt: spectra::SpecPoint = point.parse()?;
            let st = spectra::stalk(s, pt)?;
            let probe_result = probe
                .as_deref()
                .map(|p| p.parse::<Rat>().map(|x| (x.clone(), st.contains(&x))))
                .transpose()?;
            let value = json!({
                "space": s.name(),
                "point": pt.to_string(),
                "stalk": st.describe(),
                "probe": probe_result.as_ref().map(|(x, inside)| json!({
                    "x": x.to_string(),
                    "member": inside,
                })),
            });
            let mut table = format!("O_{pt} = {}\n", st.describe());
            if let Some((x, inside)) = &probe_result {
                table.push_str(&format!("{x} {} O_{pt}\n", if *inside { "∈" } else { "∉" }));
            }
            emit(out, &common, value, table)
        }
        Command::Tensor {
            file1,
            file2,
            common,
        } => {
            let p1 = pres::parse_presentation(&read_file(&file1)?)?;
            let p2 = pres::parse_presentation(&read_file(&file2)?)?;
            let t = pres::tensor_presentation(&p1, &p2)?;
            let value = json!({
                "generators": t.generators,
                "relations": t.relations.iter().map(|r| format!("{} = {}", r.lhs, r.rhs)).collect::<Vec<_>>(),
                "text": t.to_text(),
            });
            let table = t.to_text();
            emit(out, &common, value, table)
        }
        Command::Prove {
            file,
            lhs,
            rhs,
            depth,
            countermodel,
            common,
        } => {
            let p = pres::parse_presentation(&read_file(&file)?)?;
            let lhs_t = parse_term_arg(&p, &lhs)?;
            let rhs_t = parse_term_arg(&p, &rhs)?;
            let outcome = pres::derive_equal_with(
                &p,
                &lhs_t,
                &rhs_t,
                depth,
                pres::ProverLimits {
                    pool: 64,
                    instances: budget.term_cap,
                },
            )?;
            let refutation = countermodel
                .map(|size| pres::find_countermodel(&p, &lhs_t, &rhs_t, size, budget.model_nodes))
                .transpose()?;
            let value = json!({
                "lhs": lhs_t.to_string(),
                "rhs": rhs_t.to_string(),
                "outcome": outcome,
                "countermodel": refutation,
            });
            let mut table = match &outcome {
                pres::ProofOutcome::Proven { depth, instances } => {
                    format!("proven at instantiation depth {depth} ({instances} instances)\n")
                }
                pres::ProofOutcome::Unknown { depth, .. } => {
                    format!("unknown at instantiation depth {depth}\n")
                }
            };
            match &refutation {
                Some(pres::CountermodelOutcome::Found { model, assignment }) => {
                    table.push_str(&format!(
                        "countermodel on {} elements at assignment {assignment:?}\n",
                        model.size
                    ));
                }
                Some(pres::CountermodelOutcome::None) => {
                    table.push_str("no countermodel at the searched sizes\n");
                }
                Some(pres::CountermodelOutcome::Undecided) => {
                    table.push_str("countermodel search exhausted its budget\n");
                }
                None => {}
            }
            emit(out, &common, value, table)
        }
        Command::ProjCount { n, common } => {
            let proj = proj::proj_points_f1(n)?;
            let value = json!({
                "n": n,
                "count": proj.count,
                "charts": (0..=n).map(|i| proj.chart(i).len()).collect::<Vec<_>>(),
            });
            let table = format!("{}\n", proj.count);
            emit(out, &common, value, table)
        }
        Command::ProjVerify { n, bound, common } => {
            let rep = proj::proj_is_compactification(n, bound, common.seed)?;
            let value = serde_json::to_value(&rep).map_err(|e| Error::internal(e.to_string()))?;
            let line = |label: &str, ok: bool| {
                format!("{label:<26} {}\n", if ok { "pass" } else { "FAIL" })
            };
            let mut table = String::new();
            table.push_str(&line("sections R_(f1) = Z", rep.sections_f1_match_z));
            table.push_str(&line("sections R_(f2) = A_N", rep.sections_f2_match_an));
            table.push_str(&line("sections R_(f1f2) = B_N", rep.sections_f1f2_match_bn));
            table.push_str(&line("point sets agree", rep.points_match));
            table.push_str(&line(
                &format!("open sets agree ({})", rep.opens_checked),
                rep.opens_match,
            ));
            table.push_str(&line("overall", rep.ok));
            emit(out, &common, value, table)
        }
        Command::Pic { n, element, common } => {
            let g = pic::pic_group(n)?;
            let elem = element
                .as_deref()
                .map(|s| -> Result<pic::FactorVec> {
                    let x: Rat = s.parse()?;
                    pic::pic_limit_element(&x)
                })
                .transpose()?;
            let value = json!({
                "n": n,
                "rank": g.rank(),
                "basis": g.basis(),
                "element": elem.as_ref().map(|v| {
                    v.0.iter().map(|(p, e)| json!({"p": p, "e": e})).collect::<Vec<_>>()
                }),
            });
            let mut table = format!("Pic rank {}\nbasis: {}\n", g.rank(), g.basis().join(", "));
            if let Some(v) = &elem {
                table.push_str(&format!("class: {v}\n"));
            }
            emit(out, &common, value, table)
        }
        Command::Sections { body, dim, common } => {
            let b = parse_body(&body, dim)?;
            let s = pic::global_sections_count(&pic::ArakelovBundle::new(b.dim(), b.clone())?)?;
            let value = json!({
                "body": body,
                "dim": b.dim(),
                "count": s.count,
                "points": s.points,
            });
            let mut table = format!("{} lattice point(s)\n", s.count);
            for p in &s.points {
                let rendered: Vec<String> = p.iter().map(|c| c.to_string()).collect();
                table.push_str(&format!("  ({})\n", rendered.join(", ")));
            }
            emit(out, &common, value, table)
        }
        Command::Minkowski { body, dim, common } => {
            let b = parse_body(&body, dim)?;
            let v = pic::minkowski_check(&b)?;
            let value = json!({
                "body": body,
                "dim": v.dim,
                "volume": v.volume.display(),
                "exceeds_2^d": v.exceeds,
                "point": v.point,
            });
            let mut table = format!(
                "volume {} {} 2^{}\n",
                v.volume.display(),
                if v.exceeds { ">" } else { "≤" },
                v.dim
            );
            if let Some(p) = &v.point {
                let rendered: Vec<String> = p.iter().map(|c| c.to_string()).collect();
                table.push_str(&format!(
                    "nonzero lattice point ({})\n",
                    rendered.join(", ")
                ));
            }
            emit(out, &common, value, table)
        }
        Command::ProductFormula { x, common } => {
            let x: Rat = x.parse()?;
            let rep = product_formula_check(&x)?;
            let value = json!({
                "x": rep.value.to_string(),
                "factors": rep.factors.iter().map(|(p, f)| json!({
                    "p": p, "abs": f.to_string(),
                })).collect::<Vec<_>>(),
                "finite_product": rep.finite_product.to_string(),
                "archimedean": rep.archimedean.to_string(),
                "holds": rep.holds,
            });
            let mut table = String::new();
            for (p, f) in &rep.factors {
                table.push_str(&format!("|x|_{p} = {f}\n"));
            }
            table.push_str(&format!(
                "finite product {} = 1/|x|_inf = 1/({}): {}\n",
                rep.finite_product,
                rep.archimedean,
                if rep.holds { "holds" } else { "FAILS" }
            ));
            emit(out, &common, value, table)
        }
        Command::Model { file, common } => {
            let text = read_file(&file)?;
            let polys: Vec<pic::PolyQ> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(pic::PolyQ::parse)
                .collect::<Result<_>>()?;
            let m = pic::build_model(&polys)?;
            let value = json!({
                "generators": m.generators,
                "relations": m.relations.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "rescaled": m.rescaled,
                "homogeneous": m.homogeneous,
            });
            let mut table = format!("generators: {}\n", m.generators.join(", "));
            for (r, scaled) in m.relations.iter().zip(&m.rescaled) {
                table.push_str(&format!(
                    "relation: {r} = 0{}\n",
                    if *scaled { "  (rescaled)" } else { "" }
                ));
            }
            table.push_str(&format!(
                "homogeneous: {}\n",
                if m.homogeneous {
                    "yes (Proj variant applies)"
                } else {
                    "no"
                }
            ));
            emit(out, &common, value, table)
        }
        Command::Parse { file, common } => {
            let p = pres::parse_presentation(&read_file(&file)?)?;
            let value = json!({
                "base": p.base,
                "generators": p.generators,
                "relations": p.relations.iter().map(|r| format!("{} = {}", r.lhs, r.rhs)).collect::<Vec<_>>(),
                "text": p.to_text(),
            });
            let table = p.to_text();
            emit(out, &common, value, table)
        }
    }
}

fn point_json(p: spectra::SpecPoint) -> serde_json::Value {
    match p {
        spectra::SpecPoint::Generic => json!({"kind": "generic"}),
        spectra::SpecPoint::Prime(q) => json!({"kind": "prime", "p": q}),
        spectra::SpecPoint::Infinity => json!({"kind": "infinity"}),
    }
}

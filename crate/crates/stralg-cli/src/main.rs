//! `stralg`: command-line front end. Results go to stdout, diagnostics to
//! stderr. Exit codes: 0 ok, 1 input error, 2 search cap exceeded,
//! 3 internal invariant failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use stralg::bands::BandRep;
use stralg::completion::{classify_limit_location, gap_census, AlmostPeriodic};
use stralg::condensation::Exit;
use stralg::error::DEFAULT_CAP;
use stralg::ordertype::OrderTyper;
use stralg::par::Exec;
use stralg::presentation::{parse_algebra, sign_table, solve_signs, validate_algebra};
use stralg::{Algebra, BContext, Error, HammockKey, Side, Str, Workspace};

#[derive(Parser)]
#[command(name = "stralg", version, about = "Order types of one-sided hammocks over string algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra file and report the sign maps.
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Prime bands and the poset of band classes.
    Bands {
        #[command(flatten)]
        common: Common,
        /// Restrict to the classes reachable from this hammock.
        #[arg(long, requires = "side")]
        string: Option<String>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_side)]
        side: Option<Side>,
    },
    /// Ordered enumeration of a hammock, with successor/predecessor queries.
    Hammock {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        key: KeyArgs,
        /// Letters above the base to enumerate.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Print the successor of this element instead of enumerating.
        #[arg(long, conflicts_with = "pred")]
        succ: Option<String>,
        /// Print the predecessor of this element instead of enumerating.
        #[arg(long)]
        pred: Option<String>,
    },
    /// Condensation map of one element, or the beam report of the class.
    Condense {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        key: KeyArgs,
        #[command(flatten)]
        class: ClassArg,
        /// Element to condense; without it the beam report is printed.
        #[arg(long)]
        at: Option<String>,
    },
    /// Normalized order type of a hammock.
    Ordertype {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        key: KeyArgs,
    },
    /// Limits of the neighbour rays from an element and their gap locations.
    Limits {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        key: KeyArgs,
        #[command(flatten)]
        class: ClassArg,
        /// Starting element; defaults to the base.
        #[arg(long)]
        at: Option<String>,
    },
    /// Gap census of a class for a hammock.
    Completion {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        key: KeyArgs,
        #[command(flatten)]
        class: ClassArg,
    },
}

#[derive(Args)]
struct Common {
    /// Algebra file.
    algebra: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Bound on explicit state searches.
    #[arg(long, default_value_t = DEFAULT_CAP, value_parser = positive)]
    cap: usize,
    /// Run every sweep on the calling thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct KeyArgs {
    /// Hammock base, as `A1a0`, `a1'.a0` or `1(v,+)`.
    #[arg(long)]
    string: String,
    /// Side of the hammock: `+1` or `-1`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_side)]
    side: Side,
}

#[derive(Args)]
struct ClassArg {
    /// Class id as printed by `bands` (`3` or `B3`), or any band of the class.
    #[arg(long)]
    class: String,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("expected a positive integer, got {s}")),
    }
}

fn parse_side(s: &str) -> Result<Side, String> {
    match s {
        "+1" | "1" | "+" => Ok(Side::Plus),
        "-1" | "-" => Ok(Side::Minus),
        _ => Err(format!("expected +1 or -1, got {s}")),
    }
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

type Out = Result<String, Failure>;

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Input(_) => 1,
        Failure::Lib(Error::Indeterminate { .. }) => 2,
        Failure::Lib(Error::Invariant(_)) => 3,
        Failure::Lib(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Lib(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(exit_code(&f))
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn workspace(c: &Common) -> Result<Workspace, Failure> {
    let alg = Algebra::parse(&read(&c.algebra)?)?;
    let exec = if c.sequential { Exec::Sequential } else { Exec::default() };
    Ok(Workspace::with_exec(alg, exec, c.cap)?)
}

fn string(alg: &Algebra, s: &str) -> Result<Str, Failure> {
    let s = s.trim();
    let literal = s.starts_with("1(") || s.contains('.') || s.contains('\'');
    Ok(if literal { alg.parse_str(s)? } else { alg.parse_compact(s)? })
}

fn hammock_key(alg: &Algebra, k: &KeyArgs) -> Result<HammockKey, Failure> {
    let key = HammockKey::new(string(alg, &k.string)?, k.side);
    if alg.step_sign(alg.state_of(&key.base), k.side).is_none() {
        return Err(Failure::Input(format!("the hammock of {} on side {} is trivial", k.string, side_str(k.side))));
    }
    Ok(key)
}

fn class_id(ws: &Workspace, arg: &ClassArg) -> Result<usize, Failure> {
    let digits = arg.class.strip_prefix('B').unwrap_or(&arg.class);
    if let Ok(id) = digits.parse::<usize>() {
        return if id < ws.qba.classes.len() {
            Ok(id)
        } else {
            Err(Failure::Input(format!("no class {id}; there are {}", ws.qba.classes.len())))
        };
    }
    let w = string(&ws.alg, &arg.class)?;
    ws.qba.class_of_band(&ws.alg, &w.syl).ok_or_else(|| Failure::Input(format!("{} is not a band", arg.class)))
}

fn context<'w>(ws: &'w Workspace, key: &KeyArgs, class: &ClassArg) -> Result<BContext<'w>, Failure> {
    let k = hammock_key(&ws.alg, key)?;
    Ok(ws.context(k, class_id(ws, class)?)?)
}

fn side_str(j: Side) -> &'static str {
    match j {
        Side::Plus => "+1",
        Side::Minus => "-1",
    }
}

fn reject(format: Format, allowed: &[Format]) -> Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Failure::Input("this command has no DOT output".into()))
    }
}

fn emit_json(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn run(cmd: Command) -> Out {
    match cmd {
        Command::Check { common } => check(&common),
        Command::Bands { common, string, side } => bands(&common, string.as_deref(), side),
        Command::Hammock { common, key, depth, succ, pred } => hammock(&common, &key, depth, succ, pred),
        Command::Condense { common, key, class, at } => condense(&common, &key, &class, at),
        Command::Ordertype { common, key } => ordertype(&common, &key),
        Command::Limits { common, key, class, at } => limits(&common, &key, &class, at),
        Command::Completion { common, key, class } => completion(&common, &key, &class),
    }
}

fn check(c: &Common) -> Out {
    reject(c.format, &[Format::Text, Format::Json])?;
    let spec = parse_algebra(&read(&c.algebra)?)?;
    validate_algebra(&spec)?;
    solve_signs(&spec)?;
    let signs = sign_table(&spec);
    if c.format == Format::Json {
        let table: serde_json::Map<String, Value> =
            signs.iter().map(|(a, (s, e))| (a.clone(), json!({"sigma": s, "epsilon": e}))).collect();
        return Ok(emit_json(json!({
            "vertices": spec.vertices.len(),
            "arrows": spec.arrows.len(),
            "relations": spec.relations.len(),
            "signs": table,
        })));
    }
    let mut out = format!(
        "ok: {} vertices, {} arrows, {} relations\n",
        spec.vertices.len(),
        spec.arrows.len(),
        spec.relations.len()
    );
    for (a, (s, e)) in &signs {
        let _ = writeln!(out, "  {a}: sigma={s:+} epsilon={e:+}");
    }
    Ok(out)
}

fn band_names(alg: &Algebra, bands: &[BandRep]) -> Vec<String> {
    bands.iter().map(|b| alg.render_word(&b.word)).collect()
}

fn bands(c: &Common, base: Option<&str>, side: Option<Side>) -> Out {
    let ws = workspace(c)?;
    let alg = &ws.alg;
    let (shown, minimal): (Vec<usize>, Vec<usize>) = match (base, side) {
        (Some(s), Some(j)) => {
            let key = hammock_key(alg, &KeyArgs { string: s.into(), side: j })?;
            let r = ws.qba.reachable_classes(alg, &key);
            (r.classes, r.minimal)
        }
        _ => ((0..ws.qba.classes.len()).collect(), Vec::new()),
    };
    let edges: Vec<(usize, usize)> =
        ws.qba.hasse().into_iter().filter(|(a, b)| shown.contains(a) && shown.contains(b)).collect();
    match c.format {
        Format::Dot => {
            let mut out = String::from("digraph bands {\n  rankdir=BT;\n");
            for &i in &shown {
                let cl = &ws.qba.classes[i];
                let shape = if cl.domestic { "box" } else { "ellipse" };
                let label = band_names(alg, &cl.primes).join("\\n");
                let _ = writeln!(out, "  c{i} [shape={shape}, label=\"B{i}\\n{label}\"];");
            }
            for (a, b) in &edges {
                let _ = writeln!(out, "  c{a} -> c{b};");
            }
            out.push_str("}\n");
            Ok(out)
        }
        Format::Json => {
            let classes: Vec<Value> = shown
                .iter()
                .map(|&i| {
                    let cl = &ws.qba.classes[i];
                    json!({
                        "id": i,
                        "domestic": cl.domestic,
                        "minimal": minimal.contains(&i),
                        "primes": band_names(alg, &cl.primes),
                    })
                })
                .collect();
            Ok(emit_json(json!({"classes": classes, "order": edges})))
        }
        Format::Text => {
            let mut out = String::new();
            for &i in &shown {
                let cl = &ws.qba.classes[i];
                let kind = if cl.domestic { "domestic" } else { "non-domestic" };
                let min = if minimal.contains(&i) { ", minimal" } else { "" };
                let _ = writeln!(out, "B{i} ({kind}{min}): {}", band_names(alg, &cl.primes).join(" "));
            }
            for (a, b) in &edges {
                let _ = writeln!(out, "B{a} < B{b}");
            }
            Ok(out)
        }
    }
}

fn hammock(c: &Common, k: &KeyArgs, depth: usize, succ: Option<String>, pred: Option<String>) -> Out {
    reject(c.format, &[Format::Text, Format::Json])?;
    let ws = workspace(c)?;
    let alg = &ws.alg;
    let key = hammock_key(alg, k)?;
    let query = match (&succ, &pred) {
        (Some(x), _) => Some((x, "succ", Side::Plus)),
        (_, Some(x)) => Some((x, "pred", Side::Minus)),
        _ => None,
    };
    if let Some((x, name, dir)) = query {
        let x = string(alg, x)?;
        let y = if dir == Side::Plus { alg.succ_l(&key, &x)? } else { alg.pred_l(&key, &x)? };
        let y = y.map(|y| alg.compact(&y));
        return Ok(match c.format {
            Format::Json => emit_json(json!({ "op": name, "of": alg.compact(&x), "result": y })),
            _ => format!("{}\n", y.unwrap_or_else(|| "none".into())),
        });
    }
    let xs: Vec<String> = alg.enumerate_hammock(&key, depth).iter().map(|x| alg.compact(x)).collect();
    Ok(match c.format {
        Format::Json => emit_json(json!({ "depth": depth, "elements": xs })),
        _ => xs.iter().map(|x| format!("{x}\n")).collect(),
    })
}

fn names(alg: &Algebra, xs: &[Str]) -> Vec<String> {
    xs.iter().map(|x| alg.compact(x)).collect()
}

fn condense(c: &Common, k: &KeyArgs, class: &ClassArg, at: Option<String>) -> Out {
    reject(c.format, &[Format::Text, Format::Json])?;
    let ws = workspace(c)?;
    let ctx = context(&ws, k, class)?;
    let alg = &ws.alg;
    if let Some(x) = at {
        let x = string(alg, &x)?;
        let r = ctx.condense(&x)?;
        let m = ctx.st_ost_membership(&x);
        let sides = |v: &[Side]| v.iter().map(|&j| side_str(j)).collect::<Vec<_>>();
        let big = r.big_cb.as_ref().map(|y| alg.compact(y));
        return Ok(match c.format {
            Format::Json => emit_json(json!({
                "string": alg.compact(&x),
                "c_b": alg.compact(&r.cb),
                "phi": r.phi,
                "big_c_b": big,
                "st": sides(&m.st),
                "ost": sides(&m.ost),
            })),
            _ => {
                let mut out = format!("c_B = {}\nphi_B = {}\n", alg.compact(&r.cb), r.phi);
                if let Some(b) = big {
                    let _ = writeln!(out, "C_B = {b}");
                }
                let _ = writeln!(out, "St: {:?}\nOST: {:?}", sides(&m.st), sides(&m.ost));
                out
            }
        });
    }
    let r = ctx.beam_structure()?;
    let beams: Vec<(String, String)> = r.beams.iter().map(|(a, b)| (alg.compact(a), alg.compact(b))).collect();
    let centers: Vec<String> = r.center_classes.iter().map(|cc| alg.compact(&cc.representative)).collect();
    Ok(match c.format {
        Format::Json => emit_json(json!({
            "boundaries": names(alg, &r.boundaries),
            "n_b": r.n_b,
            "beams": beams,
            "k_b": r.k_b,
            "centers": centers,
            "lower_end": names(alg, &r.lower_end),
            "upper_end": names(alg, &r.upper_end),
        })),
        _ => {
            let mut out = format!("boundaries: {}\nn_B = {}\n", names(alg, &r.boundaries).join(" "), r.n_b);
            for (a, b) in &beams {
                let _ = writeln!(out, "beam [{a}, {b}]");
            }
            let _ = writeln!(out, "k_B = {}", r.k_b);
            for cc in &centers {
                let _ = writeln!(out, "center {cc}");
            }
            out
        }
    })
}

fn ordertype(c: &Common, k: &KeyArgs) -> Out {
    reject(c.format, &[Format::Text, Format::Json])?;
    let ws = workspace(c)?;
    let key = hammock_key(&ws.alg, k)?;
    let r = OrderTyper::new(&ws).run(&key)?;
    Ok(match c.format {
        Format::Json => emit_json(json!({
            "expr": r.expr.render(),
            "max_depth": r.max_depth,
            "reachable_classes": r.reachable,
        })),
        _ => format!("{}\n", r.expr.render()),
    })
}

fn limits(c: &Common, k: &KeyArgs, class: &ClassArg, at: Option<String>) -> Out {
    reject(c.format, &[Format::Text, Format::Json])?;
    let ws = workspace(c)?;
    let ctx = context(&ws, k, class)?;
    let alg = &ws.alg;
    let x = match at {
        Some(x) => string(alg, &x)?,
        None => ctx.key.base.clone(),
    };
    let mut rows: Vec<(Side, AlmostPeriodic, String)> = Vec::new();
    for dir in [Side::Plus, Side::Minus] {
        if !ctx.in_ost(&x, dir) || !ctx.tables().ost(alg.state_of(&x), dir) {
            continue;
        }
        let lim = ctx.ost_limit(&x, dir)?;
        let loc = classify_limit_location(&ctx, &lim)?;
        rows.push((dir, lim, format!("{loc:?}").to_uppercase()));
    }
    if rows.is_empty() {
        return Err(Failure::Lib(Error::Precondition(format!(
            "{} has no neighbour ray converging inside the class",
            alg.compact(&x)
        ))));
    }
    Ok(match c.format {
        Format::Json => emit_json(Value::Array(
            rows.iter()
                .map(|(d, l, loc)| json!({"dir": side_str(*d), "limit": l.render(alg), "location": loc}))
                .collect(),
        )),
        _ => rows.iter().map(|(d, l, loc)| format!("{} {} {loc}\n", side_str(*d), l.render(alg))).collect(),
    })
}

fn exits_json(alg: &Algebra, exits: &[Exit]) -> Vec<Value> {
    exits
        .iter()
        .map(|e| {
            json!({
                "letter": alg.render_word(&[e.letter]),
                "rotation": alg.render_word(&e.rotation),
                "non_domestic": e.non_domestic,
            })
        })
        .collect()
}

fn completion(c: &Common, k: &KeyArgs, class: &ClassArg) -> Out {
    reject(c.format, &[Format::Text, Format::Json])?;
    let ws = workspace(c)?;
    let ctx = context(&ws, k, class)?;
    let alg = &ws.alg;
    let census = gap_census(&ctx)?;
    let gaps: Vec<(String, String)> =
        census.gaps.iter().map(|g| (g.limit.render(alg), format!("{:?}", g.location).to_uppercase())).collect();
    Ok(match c.format {
        Format::Json => {
            let ends = ws.band_ends(ctx.class);
            let exits: Vec<Value> = ends
                .exits
                .iter()
                .map(|(b, es)| json!({"band": alg.render_word(&b.word), "exits": exits_json(alg, es)}))
                .collect();
            emit_json(json!({
                "domestic": census.domestic,
                "gaps": gaps.iter().map(|(l, loc)| json!({"limit": l, "location": loc})).collect::<Vec<_>>(),
                "plus_bands": band_names(alg, &census.plus_bands),
                "minus_bands": band_names(alg, &census.minus_bands),
                "zero": census.zero,
                "exits": exits,
            }))
        }
        _ => {
            let kind = if census.domestic { "domestic" } else { "non-domestic" };
            let mut out = format!("class B{} ({kind})\n", ctx.class);
            for (l, loc) in &gaps {
                let _ = writeln!(out, "gap {l} {loc}");
            }
            let _ = writeln!(out, "PLUS bands: {}", band_names(alg, &census.plus_bands).join(" "));
            let _ = writeln!(out, "MINUS bands: {}", band_names(alg, &census.minus_bands).join(" "));
            let zero = if census.zero { "irrational-position gaps present" } else { "no irrational-position gaps" };
            let _ = writeln!(out, "{zero}");
            out
        }
    })
}

//! `ordramsey`: batch driver for the on-line ordered Ramsey games.

mod table;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ordered_ramsey::bounds::{loose_value, online_bounds, BoundReport};
use ordered_ramsey::digraph::{label_and_paint, sdir_sandwich, Digraph};
use ordered_ramsey::game::{BuilderMode, GameParams, GameState, Transcript};
use ordered_ramsey::oracle::{
    exact_online_value, offline_force_check, stabilization_point, ForceOutcome, OnlineValue,
    SolverOptions,
};
use ordered_ramsey::painters::middle_level;
use ordered_ramsey::play::{play_named, GameReport, PlayOptions, StopReason};
use ordered_ramsey::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use table::Table;

#[derive(Parser)]
#[command(name = "ordramsey", version, about = "On-line Ramsey games on ordered hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one builder against one painter.
    Play(PlayArgs),
    /// Check a transcript and print the final state.
    Replay {
        file: PathBuf,
    },
    /// Paper bounds for one parameter tuple.
    Bounds {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
    /// Exact on-line values by game-tree search.
    Oracle(OracleArgs),
    /// Decide whether every coloring of `n` vertices has a monochromatic path.
    OfflineCheck {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1 << 32)]
        node_budget: u64,
        /// Print the avoiding coloring, one `v1 .. vk color` line per edge.
        #[arg(long)]
        show_witness: bool,
    },
    /// Paint random digraph hosts with the middle-level labeling.
    DigraphLb(DigraphArgs),
    /// Bounds, game rounds and oracle values over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct GameArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Shift between consecutive edges; 1 is the tight path.
    #[arg(long, default_value_t = 1)]
    l: usize,
    /// Edges per color; one value repeats `t` times.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    m: Vec<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, default_value = "free-insertion")]
    mode: String,
    #[arg(long)]
    vertex_budget: Option<usize>,
}

impl GameArgs {
    fn params(&self) -> Result<GameParams, Error> {
        let targets = match (self.m.as_slice(), self.t) {
            ([m], t) => vec![*m; t.unwrap_or(2)],
            (ms, Some(t)) if t != ms.len() => {
                return Err(Error::InvalidParams(format!(
                    "--t {t} but {} targets in --m",
                    ms.len()
                )))
            }
            (ms, _) => ms.to_vec(),
        };
        let p = GameParams::new(self.k, self.l, targets, self.mode.parse()?)?;
        Ok(match self.vertex_budget {
            Some(b) => p.with_vertex_budget(b),
            None => p,
        })
    }
}

#[derive(Args)]
struct PlayArgs {
    #[command(flatten)]
    game: GameArgs,
    /// paper-k2, paper-general, paper-loose, random:<seed>, script:<file>.
    #[arg(long)]
    builder: Option<String>,
    /// paper-k2, paper-general, offline-witness, greedy, spite, random:<seed>.
    #[arg(long, default_value = "greedy")]
    painter: String,
    #[arg(long, default_value_t = 100_000)]
    max_rounds: usize,
    /// Skip the painter's invariant check after each edge.
    #[arg(long)]
    no_check: bool,
    /// Write the game as JSON Lines.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Smallest vertex budget to solve.
    #[arg(long, default_value_t = 3)]
    min_n: usize,
    /// Largest vertex budget to solve.
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    #[arg(long, default_value_t = 16)]
    moves: usize,
    #[arg(long)]
    no_memo: bool,
    /// JSON map of solved values, read and extended.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct DigraphArgs {
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, default_value_t = 100)]
    hosts: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vertices per random host; defaults to `|B| + 1`.
    #[arg(long)]
    vertices: Option<usize>,
    /// Paint this host file instead of random hosts.
    #[arg(long)]
    host: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "2")]
    k: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    l: Vec<usize>,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    m: Vec<usize>,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    t: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "greedy,spite,random:0")]
    painters: Vec<String>,
    /// Also solve the on-line value exactly with this vertex budget.
    #[arg(long)]
    oracle_n: Option<usize>,
    #[arg(long, default_value_t = 16)]
    oracle_moves: usize,
    #[arg(long, default_value_t = 100_000)]
    max_rounds: usize,
    /// Write the table as CSV here; the aligned table goes to stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Pretty,
}

/// Exit status 1 for bad input, 2 for a broken invariant.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_invariant_violation() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    usage(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Play(a) => cmd_play(a),
        Command::Replay { file } => cmd_replay(&file),
        Command::Bounds { game, format } => cmd_bounds(&game, format),
        Command::Oracle(a) => cmd_oracle(a),
        Command::OfflineCheck {
            game,
            n,
            node_budget,
            show_witness,
        } => cmd_offline(&game, n, node_budget, show_witness),
        Command::DigraphLb(a) => cmd_digraph(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn default_builder(p: &GameParams) -> &'static str {
    if p.k() == 2 && p.l() == 1 {
        "paper-k2"
    } else {
        "paper-general"
    }
}

/// The move-count bound the paper builder is held to, if any.
fn move_bound(report: &BoundReport) -> Option<(&'static str, f64)> {
    ["k2-moves", "general-moves", "matching-upper"]
        .into_iter()
        .find_map(|id| report.get(id).map(|v| (id, v)))
}

fn cmd_play(a: PlayArgs) -> Result<(), Failure> {
    let params = a.game.params()?;
    let builder = a.builder.as_deref().unwrap_or(default_builder(&params));
    let opts = PlayOptions {
        max_rounds: a.max_rounds,
        check_invariants: !a.no_check,
    };
    let report = play_named(&params, builder, &a.painter, opts)?;
    let mut line = report.summary();
    if builder.starts_with("paper") {
        if let Some((id, bound)) = online_bounds(params.k(), params.l(), params.targets())
            .ok()
            .as_ref()
            .and_then(move_bound)
        {
            let within = report.stop == StopReason::Won && report.rounds as f64 <= bound;
            line.push_str(&format!(" bound={id}:{bound} within={}", yes_no(within)));
        }
    }
    println!("{line}");
    if let Some(path) = &a.transcript {
        fs::write(path, report.state.transcript().to_jsonl()).map_err(|e| io_error(path, e))?;
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Result line shared by `play` transcripts and `replay`.
fn state_line(state: &GameState) -> String {
    let mut line = format!("rounds={} edges={}", state.round(), state.num_edges());
    match state.check_win() {
        Some(w) => line.push_str(&format!(" result=builder-wins color={}", w.color)),
        None => line.push_str(" result=unfinished"),
    }
    line
}

fn cmd_replay(file: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(file).map_err(|e| io_error(file, e))?;
    let transcript = Transcript::from_jsonl(&text)?;
    let state = transcript.replay()?;
    println!("{}", state_line(&state));
    Ok(())
}

fn bounds_table(report: &BoundReport) -> Table {
    let tuple = format!(
        "k={} l={} m={}",
        report.k,
        report.l,
        join(&report.targets, "-")
    );
    let mut t = Table::new(&["tuple", "quantity", "side", "value"]);
    for (i, q) in report.q.iter().enumerate() {
        t.row(vec![tuple.clone(), format!("q_{}", i + 1), "exact".into(), q.to_string()]);
    }
    for (i, a) in report.a.iter().enumerate() {
        t.row(vec![tuple.clone(), format!("a_{}", i + 1), "exact".into(), a.to_string()]);
    }
    if let Some(b) = report.midlevel {
        t.row(vec![tuple.clone(), "midlevel".into(), "exact".into(), b.to_string()]);
    }
    for b in &report.bounds {
        let side = serde_json::to_value(b.side).expect("side serializes");
        t.row(vec![
            tuple.clone(),
            b.id.into(),
            side.as_str().unwrap_or_default().into(),
            fmt_num(b.value),
        ]);
    }
    t
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn fmt_num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{x:.0}")
    } else if x.abs() < 1e6 {
        format!("{x:.4}")
    } else {
        format!("{x:.4e}")
    }
}

fn cmd_bounds(game: &GameArgs, format: Format) -> Result<(), Failure> {
    let p = game.params()?;
    let mut table = bounds_table(&online_bounds(p.k(), p.l(), p.targets())?);
    let lv = loose_value(p.k(), p.l(), p.targets())?;
    table.row(vec![
        table.cell(0, 0).to_string(),
        "offline-value".into(),
        "exact".into(),
        lv.value.to_string(),
    ]);
    print!(
        "{}",
        match format {
            Format::Csv => table.csv(),
            Format::Pretty => table.pretty(),
        }
    );
    Ok(())
}

fn cache_key(p: &GameParams, n: usize, moves: usize) -> String {
    format!(
        "k={} l={} m={} n={n} moves={moves}",
        p.k(),
        p.l(),
        join(p.targets(), "-")
    )
}

fn cmd_oracle(a: OracleArgs) -> Result<(), Failure> {
    let p = a.game.params()?;
    if a.min_n > a.max_n {
        return Err(usage("--min-n exceeds --max-n"));
    }
    let mut cache: BTreeMap<String, OnlineValue> = match &a.cache {
        Some(path) if path.exists() => {
            let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            serde_json::from_str(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        _ => BTreeMap::new(),
    };
    let opts = SolverOptions {
        memo: !a.no_memo,
        ..SolverOptions::default()
    };
    let mut series = Vec::new();
    for n in a.min_n..=a.max_n {
        let key = cache_key(&p, n, a.moves);
        let (v, cached) = match cache.get(&key) {
            Some(v) => (v.clone(), true),
            None => (exact_online_value(&p, n, a.moves, opts)?, false),
        };
        println!(
            "n={n} value={} nodes={}{}",
            v.value.map_or("?".into(), |x| x.to_string()),
            v.nodes,
            if cached { " cached" } else { "" }
        );
        cache.insert(key, v.clone());
        series.push(v);
    }
    match stabilization_point(&series) {
        Some(n) => println!("stable from n={n}"),
        None => println!("not stable"),
    }
    if let Some(path) = &a.cache {
        let text = serde_json::to_string_pretty(&cache).expect("cache serializes");
        fs::write(path, text).map_err(|e| io_error(path, e))?;
    }
    Ok(())
}

fn cmd_offline(game: &GameArgs, n: usize, budget: u64, show: bool) -> Result<(), Failure> {
    let p = game.params()?;
    match offline_force_check(&p, n, budget)? {
        ForceOutcome::Forced => println!("n={n} forced"),
        ForceOutcome::Avoidable(c) => {
            println!("n={n} avoidable edges={}", c.edges().len());
            if show {
                for (e, color) in c.edges() {
                    println!("{} {color}", join(e, " "));
                }
            }
        }
        ForceOutcome::Indeterminate { nodes } => println!("n={n} indeterminate nodes={nodes}"),
    }
    Ok(())
}

fn cmd_digraph(a: DigraphArgs) -> Result<(), Failure> {
    let targets = vec![a.m; a.t];
    let s = sdir_sandwich(a.m, a.t)?;
    println!(
        "m={} t={} bks-lower={} bks-upper={} ours={} ours>=bks-lower={}",
        a.m,
        a.t,
        fmt_num(s.bks_lower),
        fmt_num(s.bks_upper),
        s.ours,
        yes_no(s.ours as f64 >= s.bks_lower)
    );
    let hosts: Vec<(String, Digraph)> = match &a.host {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            vec![(path.display().to_string(), Digraph::parse(&text)?)]
        }
        None => {
            let b = middle_level(&targets).len();
            let n = a.vertices.unwrap_or(b + 1);
            let edges = (b * (b + 1) / 2 - 1).min(n * n.saturating_sub(1) / 2);
            (0..a.hosts)
                .map(|i| {
                    let seed = a.seed.wrapping_add(i);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    Digraph::random(n, edges, &mut rng).map(|g| (format!("seed={seed}"), g))
                })
                .collect::<Result<_, _>>()?
        }
    };
    let mut good = 0;
    for (name, g) in &hosts {
        let (_, ok) = label_and_paint(g, &targets)?;
        if ok {
            good += 1;
        } else {
            println!("{name}: monochromatic path");
        }
    }
    println!("hosts={} painted={good}", hosts.len());
    if good == hosts.len() {
        Ok(())
    } else {
        Err(Failure {
            code: 2,
            message: "a host kept a monochromatic path".into(),
        })
    }
}

struct Cell(Option<String>);

impl Cell {
    fn show(&self) -> String {
        self.0.clone().unwrap_or_else(|| "?".into())
    }
}

fn sweep_row(a: &SweepArgs, k: usize, l: usize, m: usize, t: usize) -> Result<Vec<String>, Failure> {
    let p = GameParams::diagonal(k, l, m, t, BuilderMode::FreeInsertion)?;
    let report = online_bounds(k, l, p.targets())?;
    let bound = move_bound(&report);
    let builder = default_builder(&p);
    let mut ok = true;
    let mut cells = Vec::new();
    for painter in &a.painters {
        let opts = PlayOptions {
            max_rounds: a.max_rounds,
            check_invariants: true,
        };
        let r: GameReport = play_named(&p, builder, painter, opts)?;
        let won = r.stop == StopReason::Won;
        if let Some((_, b)) = bound {
            ok &= won && r.rounds as f64 <= b;
        }
        cells.push(Cell(won.then(|| r.rounds.to_string())));
    }
    let exact = match a.oracle_n {
        Some(n) => exact_online_value(&p, n, a.oracle_moves, SolverOptions::default())?.value,
        None => None,
    };
    if let Some(v) = exact {
        ok &= report.brackets(v as u64);
    }
    let mut row = vec![
        k.to_string(),
        l.to_string(),
        m.to_string(),
        t.to_string(),
        report.q.last().expect("at least one level").to_string(),
        fmt_num(report.lower()),
        fmt_num(report.upper()),
        bound.map_or("-".into(), |(_, b)| fmt_num(b)),
    ];
    row.extend(cells.iter().map(Cell::show));
    row.push(match a.oracle_n {
        Some(_) => Cell(exact.map(|v| v.to_string())).show(),
        None => "-".into(),
    });
    row.push(if ok { "pass" } else { "FAIL" }.into());
    Ok(row)
}

fn cmd_sweep(a: SweepArgs) -> Result<(), Failure> {
    let mut header: Vec<String> = ["k", "l", "m", "t", "q_h", "lower", "upper", "move_bound"]
        .map(String::from)
        .to_vec();
    header.extend(a.painters.iter().map(|p| format!("rounds[{p}]")));
    header.push("exact".into());
    header.push("checks".into());
    let mut grid = Vec::new();
    for &k in &a.k {
        for &l in &a.l {
            for &m in &a.m {
                for &t in &a.t {
                    grid.push((k, l, m, t));
                }
            }
        }
    }
    let rows: Vec<Result<Vec<String>, Failure>> = grid
        .par_iter()
        .map(|&(k, l, m, t)| sweep_row(&a, k, l, m, t))
        .collect();
    let mut table = Table::from_header(header);
    let mut failed = false;
    for row in rows {
        match row {
            Ok(r) => {
                failed |= r.last().is_some_and(|c| c == "FAIL");
                table.row(r);
            }
            Err(f) => return Err(f),
        }
    }
    print!("{}", table.pretty());
    if let Some(path) = &a.csv {
        fs::write(path, table.csv()).map_err(|e| io_error(path, e))?;
    }
    if failed {
        eprintln!("some rows failed their checks");
    }
    Ok(())
}

//! Subcommands. Each returns a [`Report`]: text for humans, JSON for
//! `--json`, and a verdict that becomes the exit code.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use posfo::games::{distinguishing_formula, duplicator_wins_capped, Solver, WordArena, DEFAULT_ROUND_CAP};
use posfo::graphs::directed::{check_digraph, decode_digraph, encode_digraph};
use posfo::graphs::undirected::{check_ugraph, decode_ugraph, encode_ugraph};
use posfo::graphs::{ef_game_graph, Graph};
use posfo::intgame::{solve_int_game, sweep, IntArena, Orientation};
use posfo::klang::{self, closest_token_strategy, long_pair, phi_k};
use posfo::logic::{eval_word, Compiled, Valuation, WordModel};
use posfo::mortality::{local_factor_scan, segment_analysis, witness_words, Reduction, WitnessOutcome};
use posfo::{alphabet::words_up_to, Mode, Monoid, Nfa, OrderedAlphabet, Word};
use serde_json::{json, Value};

use crate::format::{self, AlphabetSpec, GraphSpec, MachineSpec, NfaSpec, WordSpec, SCHEMA_VERSION};
use crate::serve::{self, ServerConfig};

#[derive(Parser, Debug)]
#[command(name = "posfo", version, about = "Positive first-order logic on ordered alphabets")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether a regular language is monotone.
    CheckMonotone(AutomatonArgs),
    /// Build the monotone closure of a language.
    Closure(Transform),
    /// Build the minimal DFA of a language.
    Canonical(Transform),
    /// Decide whether the syntactic monoid is aperiodic.
    Aperiodic(AutomatonArgs),
    /// Print the eggbox diagram of the syntactic monoid.
    Eggbox(AutomatonArgs),
    /// Evaluate a sentence on a word.
    Eval {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        alphabet: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "fo+")]
        mode: ModeArg,
    },
    /// Word games.
    #[command(subcommand)]
    Game(GameCommand),
    /// Checks on the language K and its defining formula.
    KSuite {
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        #[arg(long, default_value_t = 6)]
        phi_check_len: usize,
        /// Write the minimal DFA of K here.
        #[arg(long)]
        emit_dfa: Option<PathBuf>,
    },
    /// Graph encodings of words.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// The reduction from Turing machine mortality.
    #[command(subcommand)]
    Mortality(MortalityCommand),
    /// The abstract integer game.
    #[command(subcommand)]
    IntGame(IntCommand),
    /// Run the HTTP JSON game service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Directory of extra preset arenas, one JSON file each.
        #[arg(long)]
        preset_dir: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ROUND_CAP)]
        solver_cap: usize,
    },
}

#[derive(Args, Debug)]
pub struct AutomatonArgs {
    /// Automaton file.
    #[arg(long, required_unless_present = "regex", conflicts_with = "regex")]
    pub nfa: Option<PathBuf>,
    /// Regular expression file, read over `--alphabet`.
    #[arg(long, requires = "alphabet")]
    pub regex: Option<PathBuf>,
    #[arg(long)]
    pub alphabet: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Transform {
    #[command(flatten)]
    pub input: AutomatonArgs,
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Fo,
    #[value(name = "fo+")]
    FoPlus,
}

#[derive(Subcommand, Debug)]
pub enum GameCommand {
    /// Decide whether Duplicator survives `rounds` rounds on (u, v).
    Solve {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        v: PathBuf,
        #[arg(long)]
        rounds: usize,
        #[arg(long)]
        alphabet: Option<PathBuf>,
        /// When Spoiler wins, write a separating positive formula here.
        #[arg(long)]
        formula_out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ROUND_CAP)]
        solver_cap: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum GraphCommand {
    /// Encode a word over P({a,b,c}) as a graph.
    Encode {
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        undirected: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the word a graph encodes.
    Decode {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Check membership in the class of encodings.
    Check {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Decide the positive game on two graphs.
    Game {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        rounds: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum MortalityCommand {
    /// Write the automaton of L_M.
    Build {
        #[arg(long)]
        tm: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for the words u ∈ L_M, v ∉ L_M of a long run.
    Witness {
        #[arg(long)]
        tm: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Longest tape searched; defaults to the width that makes the
        /// search conclusive.
        #[arg(long)]
        max_tape: Option<usize>,
    },
    /// Membership, forbidden factors and segment structure of a word.
    Analyze {
        #[arg(long)]
        tm: PathBuf,
        #[arg(long)]
        word: PathBuf,
        /// Do not treat the first and last segments as anchored.
        #[arg(long)]
        unanchored: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum IntCommand {
    /// Solve one arena.
    Solve {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        rounds: usize,
        #[arg(long)]
        mirrored: bool,
    },
    /// Check every arena up to a length, by exact solve and by the
    /// inductive strategy.
    Sweep {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        max_len: usize,
    },
}

/// The outcome of a command.
#[derive(Debug)]
pub struct Report {
    pub verdict: bool,
    pub text: String,
    pub json: Value,
}

impl Report {
    fn new(verdict: bool, text: impl Into<String>, mut json: Value) -> Report {
        if let Value::Object(map) = &mut json {
            let previous = map.insert("v".into(), SCHEMA_VERSION.into());
            debug_assert!(
                previous.is_none_or(|p| p == SCHEMA_VERSION),
                "`v` is reserved for the schema version"
            );
        }
        Report { verdict, text: text.into(), json }
    }
}

fn load_alphabet(path: Option<&Path>) -> Result<Option<Arc<OrderedAlphabet>>> {
    path.map(|p| format::load(p, |a: AlphabetSpec| a.build())).transpose()
}

fn load_word(path: &Path, alphabet: Option<&Arc<OrderedAlphabet>>) -> Result<Word> {
    format::load(path, |w: WordSpec| w.build(alphabet))
}

fn load_automaton(args: &AutomatonArgs) -> Result<Nfa> {
    match (&args.nfa, &args.regex) {
        (Some(path), _) => format::load(path, |s: NfaSpec| s.build()),
        (None, Some(path)) => {
            let alphabet = load_alphabet(args.alphabet.as_deref())?.expect("clap requires --alphabet");
            format::read_regex(path, &alphabet)
        }
        (None, None) => bail!("give --nfa or --regex"),
    }
}

fn load_machine(path: &Path) -> Result<Reduction> {
    Ok(Reduction::new(format::load(path, |m: MachineSpec| m.build())?))
}

fn load_graph(path: &Path) -> Result<Graph> {
    format::load(path, |g: GraphSpec| g.build())
}

fn names(alphabet: &OrderedAlphabet, w: &[posfo::Letter]) -> Vec<String> {
    w.iter().map(|&a| alphabet.name(a).to_string()).collect()
}

/// Writes `value` to `out`, or returns it for printing.
fn emit(out: Option<&Path>, value: &impl serde::Serialize) -> Result<Option<String>> {
    match out {
        Some(path) => {
            format::write_json(path, value)?;
            Ok(None)
        }
        None => Ok(Some(serde_json::to_string_pretty(value)?)),
    }
}

pub fn run(cli: Cli) -> Result<Report> {
    match cli.command {
        Command::CheckMonotone(args) => check_monotone(&args),
        Command::Closure(t) => transform(&t, |n| n.monotone_closure(), "closure"),
        Command::Canonical(t) => transform(&t, |n| n.canonical_dfa().to_nfa(), "canonical DFA"),
        Command::Aperiodic(args) => aperiodic(&args),
        Command::Eggbox(args) => {
            let m = Monoid::syntactic(&load_automaton(&args)?);
            let diagram = m.eggbox();
            Ok(Report::new(true, diagram.clone(), json!({ "size": m.len(), "eggbox": diagram })))
        }
        Command::Eval { formula, word, alphabet, mode } => {
            let mode = match mode {
                ModeArg::Fo => Mode::Fo,
                ModeArg::FoPlus => Mode::FoPlus,
            };
            let f = format::read_formula(&formula, mode)?;
            let alphabet = load_alphabet(alphabet.as_deref())?;
            let w = load_word(&word, alphabet.as_ref())?;
            let holds = eval_word(&f, &w, &Valuation::new())?;
            Ok(Report::new(holds, holds.to_string(), json!({ "holds": holds, "formula": f.to_string(), "word": w.names() })))
        }
        Command::Game(GameCommand::Solve { u, v, rounds, alphabet, formula_out, solver_cap }) => {
            let alphabet = load_alphabet(alphabet.as_deref())?;
            let (u, v) = (load_word(&u, alphabet.as_ref())?, load_word(&v, alphabet.as_ref())?);
            game_solve(&u, &v, rounds, solver_cap, formula_out.as_deref())
        }
        Command::KSuite { max_n, phi_check_len, emit_dfa } => k_suite(max_n, phi_check_len, emit_dfa.as_deref()),
        Command::Graph(cmd) => graph(cmd),
        Command::Mortality(cmd) => mortality(cmd),
        Command::IntGame(cmd) => int_game(cmd),
        Command::Serve { port, preset_dir, solver_cap } => {
            let mut config = ServerConfig { solver_cap, ..ServerConfig::default() };
            if let Some(dir) = preset_dir {
                config.presets.extend(serve::load_presets(&dir)?);
            }
            serve::serve(port, config)?;
            Ok(Report::new(true, "", json!({})))
        }
    }
}

fn check_monotone(args: &AutomatonArgs) -> Result<Report> {
    let nfa = load_automaton(args)?;
    let alph = nfa.alphabet().clone();
    Ok(match nfa.monotonicity_counterexample() {
        None => Report::new(true, "monotone", json!({ "monotone": true })),
        Some((u, v)) => {
            let (u, v) = (names(&alph, &u), names(&alph, &v));
            let text = format!("not monotone: {} is accepted, {} above it is not", u.join(" "), v.join(" "));
            Report::new(false, text, json!({ "monotone": false, "accepted": u, "rejected": v }))
        }
    })
}

fn transform(t: &Transform, f: impl FnOnce(&Nfa) -> Nfa, what: &str) -> Result<Report> {
    let result = f(&load_automaton(&t.input)?);
    let spec = NfaSpec::of(&result);
    let printed = emit(t.out.as_deref(), &spec)?;
    let text = printed.unwrap_or_else(|| format!("{what}: {} states written", result.state_count()));
    Ok(Report::new(true, text, serde_json::to_value(&spec)?))
}

fn aperiodic(args: &AutomatonArgs) -> Result<Report> {
    let m = Monoid::syntactic(&load_automaton(args)?);
    let aperiodic = m.is_aperiodic();
    let h_trivial = m.green().h_classes_trivial();
    let text = format!(
        "{} (syntactic monoid of size {}, H-classes {})",
        if aperiodic { "aperiodic" } else { "not aperiodic" },
        m.len(),
        if h_trivial { "trivial" } else { "not trivial" }
    );
    Ok(Report::new(aperiodic, text, json!({ "aperiodic": aperiodic, "h_trivial": h_trivial, "size": m.len() })))
}

fn game_solve(u: &Word, v: &Word, rounds: usize, cap: usize, formula_out: Option<&Path>) -> Result<Report> {
    let duplicator = duplicator_wins_capped(u, v, rounds, cap)?;
    if duplicator {
        let text = format!("Duplicator wins the {rounds}-round game");
        return Ok(Report::new(true, text, json!({ "winner": "duplicator", "rounds": rounds })));
    }
    let arena = WordArena::new(u, v)?;
    let needed = Solver::new(&arena).spoiler_rounds(&[], rounds).expect("Spoiler wins");
    let formula = distinguishing_formula(u, v, rounds)?.expect("Spoiler wins");
    if let Some(path) = formula_out {
        std::fs::write(path, format!("{formula}\n"))?;
    }
    let text = format!("Spoiler wins in {needed} round(s); separating formula: {formula}");
    Ok(Report::new(
        false,
        text,
        json!({ "winner": "spoiler", "rounds": rounds, "spoiler_rounds": needed, "formula": formula.to_string() }),
    ))
}

fn k_suite(max_n: u32, phi_len: usize, emit_dfa: Option<&Path>) -> Result<Report> {
    if max_n > 4 {
        bail!("--max-n is at most 4");
    }
    let k = klang::build_k();
    let dfa = k.canonical_dfa();
    if let Some(path) = emit_dfa {
        format::write_json(path, &NfaSpec::of(&dfa.to_nfa()))?;
    }
    let monoid = Monoid::syntactic(&k);
    let monotone = k.is_monotone();
    let aperiodic = monoid.is_aperiodic();
    let h_trivial = monoid.green().h_classes_trivial();
    let mut lines = vec![
        format!("monotone: {monotone}"),
        format!("aperiodic: {aperiodic} (monoid of size {})", monoid.len()),
        format!("H-trivial: {h_trivial}"),
    ];
    let mut pairs = Vec::new();
    let mut ok = monotone && aperiodic && h_trivial;
    for n in 1..=max_n {
        let (u, v) = long_pair(n);
        let u_in = dfa.accepts(&u);
        let v_in = dfa.accepts(&v);
        let wins = duplicator_wins_capped(&u, &v, n as usize, DEFAULT_ROUND_CAP)?;
        let strategy = posfo::games::verify_duplicator_strategy(&u, &v, n as usize, closest_token_strategy)?.is_ok();
        ok &= u_in && !v_in && wins && strategy;
        lines.push(format!(
            "lemma44 n={n}: |u|={} |v|={} u∈K={u_in} v∈K={v_in} winner={} strategy={}",
            u.len(),
            v.len(),
            if wins { "Duplicator" } else { "Spoiler" },
            if strategy { "verified" } else { "fails" }
        ));
        pairs.push(json!({
            "n": n, "u_len": u.len(), "v_len": v.len(), "u_in_k": u_in, "v_in_k": v_in,
            "duplicator_wins": wins, "strategy_verified": strategy,
        }));
    }
    let alphabet = klang::alphabet();
    let phi = Compiled::for_words(&phi_k(), &alphabet)?;
    let (mut words, mut mismatches) = (0usize, 0usize);
    for w in words_up_to(alphabet.len(), phi_len) {
        words += 1;
        if phi.holds(&WordModel { alphabet: &alphabet, letters: &w }) != dfa.accepts_letters(&w) {
            mismatches += 1;
        }
    }
    ok &= mismatches == 0;
    lines.push(format!("phi_K: {words} words up to length {phi_len}, {mismatches} mismatches"));
    let json = json!({
        "monotone": monotone, "aperiodic": aperiodic, "h_trivial": h_trivial, "lemma44": pairs,
        "phi_check": { "max_len": phi_len, "words": words, "mismatches": mismatches },
    });
    Ok(Report::new(ok, lines.join("\n"), json))
}

fn graph(cmd: GraphCommand) -> Result<Report> {
    match cmd {
        GraphCommand::Encode { word, undirected, out } => {
            let w = load_word(&word, Some(&klang::alphabet()))?;
            let g = if undirected { encode_ugraph(&w)? } else { encode_digraph(&w)? };
            let spec = GraphSpec::of(&g);
            let printed = emit(out.as_deref(), &spec)?;
            let text = printed.unwrap_or_else(|| format!("{} vertices, {} edges", g.vertex_count(), g.edges().len()));
            Ok(Report::new(true, text, serde_json::to_value(&spec)?))
        }
        GraphCommand::Decode { graph } => {
            let g = load_graph(&graph)?;
            let decoded = if g.is_directed() { decode_digraph(&g) } else { decode_ugraph(&g) };
            Ok(match decoded {
                Ok(w) => Report::new(true, serde_json::to_string(&w.names())?, json!({ "valid": true, "word": w.names() })),
                Err(e) => Report::new(false, e.to_string(), json!({ "valid": false, "error": e.to_string() })),
            })
        }
        GraphCommand::Check { graph } => {
            let g = load_graph(&graph)?;
            let broken = if g.is_directed() { check_digraph(&g).map(|r| r.name()) } else { check_ugraph(&g).map(|r| r.name()) };
            Ok(match broken {
                None => Report::new(true, "valid encoding", json!({ "valid": true })),
                Some(rule) => Report::new(false, format!("breaks rule ({rule})"), json!({ "valid": false, "rule": rule })),
            })
        }
        GraphCommand::Game { left, right, rounds } => {
            let wins = ef_game_graph(&load_graph(&left)?, &load_graph(&right)?, rounds)?;
            let winner = if wins { "duplicator" } else { "spoiler" };
            Ok(Report::new(wins, format!("{winner} wins the {rounds}-round game"), json!({ "winner": winner, "rounds": rounds })))
        }
    }
}

fn mortality(cmd: MortalityCommand) -> Result<Report> {
    match cmd {
        MortalityCommand::Build { tm, out } => {
            let r = load_machine(&tm)?;
            let spec = NfaSpec::of(r.l_m());
            let printed = emit(out.as_deref(), &spec)?;
            let text = printed.unwrap_or_else(|| {
                format!("L_M: {} states over {} letters", r.l_m().state_count(), r.alphabet().len())
            });
            Ok(Report::new(true, text, serde_json::to_value(&spec)?))
        }
        MortalityCommand::Witness { tm, n, max_tape } => {
            let r = load_machine(&tm)?;
            let max_tape = max_tape.unwrap_or(2 * posfo::mortality::run_target(n) + 3);
            Ok(match witness_words(&r, n, max_tape)? {
                WitnessOutcome::Found { u, v, start } => {
                    let text = format!("u = {u}\nv = {v}\nstart tape length {}", start.tape.len());
                    Report::new(true, text, json!({ "found": true, "words": { "u": u.names(), "v": v.names() }, "tape": start.tape.len() }))
                }
                WitnessOutcome::NoLongRun { required, longest } => Report::new(
                    false,
                    format!("no run of {required} steps exists (longest {longest}); the machine is mortal at this scale"),
                    json!({ "found": false, "conclusive": true, "required": required, "longest": longest }),
                ),
                WitnessOutcome::BudgetExhausted { required, longest, max_tape } => Report::new(
                    false,
                    format!("no run of {required} steps on tapes up to {max_tape} (longest {longest})"),
                    json!({ "found": false, "conclusive": false, "required": required, "longest": longest }),
                ),
            })
        }
        MortalityCommand::Analyze { tm, word, unanchored } => {
            let r = load_machine(&tm)?;
            let w = load_word(&word, Some(r.alphabet()))?;
            let in_lm = r.l_m().accepts(&w);
            let in_base = r.l_base().accepts(&w);
            let forbidden = local_factor_scan(&r, w.letters());
            let seg = segment_analysis(&r, w.letters(), !unanchored)?;
            let mut lines = vec![format!("in L_M: {in_lm}"), format!("in L_base: {in_base}")];
            for f in &forbidden {
                lines.push(format!("forbidden factor [{}, {}): {}", f.start, f.end, names(r.alphabet(), &w.letters()[f.start..f.end]).join(" ")));
            }
            for (i, types) in seg.set_types.iter().enumerate() {
                lines.push(format!("segment {i}: types {types:?}"));
            }
            for a in &seg.ambiguous {
                lines.push(format!("ambiguous segments {}..={}: {}", a.first, a.last, if a.coherent { "coherent" } else { "incoherent" }));
            }
            let json = json!({
                "in_l_m": in_lm,
                "in_l_base": in_base,
                "forbidden": forbidden.iter().map(|f| [f.start, f.end]).collect::<Vec<_>>(),
                "segments": seg.segments,
                "types": seg.set_types,
                "anchors": seg.anchors,
                "ambiguous": seg.ambiguous.iter().map(|a| json!({ "first": a.first, "last": a.last, "coherent": a.coherent })).collect::<Vec<_>>(),
            });
            Ok(Report::new(in_lm, lines.join("\n"), json))
        }
    }
}

fn int_game(cmd: IntCommand) -> Result<Report> {
    match cmd {
        IntCommand::Solve { n, u, v, rounds, mirrored } => {
            let orientation = if mirrored { Orientation::Mirrored } else { Orientation::Standard };
            let arena = IntArena::parse(n, &u, &v, orientation)?;
            let outcome = solve_int_game(&arena, rounds)?;
            let side = |s: posfo::Side| if s == posfo::Side::Left { "U" } else { "V" };
            let line: Vec<Value> = outcome
                .line
                .iter()
                .map(|(mv, reply)| json!({ "spoiler": { "word": side(mv.side), "position": mv.pos }, "reply": reply }))
                .collect();
            let mut text = vec![format!("{arena}")];
            if outcome.duplicator_wins {
                text.push(format!("Duplicator survives {rounds} rounds"));
            } else {
                text.push(format!("Spoiler wins in {} round(s):", outcome.line.len()));
                for (mv, reply) in &outcome.line {
                    let reply = reply.map_or("no legal reply".to_string(), |q| format!("reply {q}"));
                    text.push(format!("  {} {} -> {reply}", side(mv.side), mv.pos));
                }
            }
            let winner = if outcome.duplicator_wins { "duplicator" } else { "spoiler" };
            Ok(Report::new(outcome.duplicator_wins, text.join("\n"), json!({ "winner": winner, "line": line })))
        }
        IntCommand::Sweep { n, max_len } => {
            if !(1..=4).contains(&n) {
                bail!("--n must be between 1 and 4");
            }
            let rep = sweep(n, max_len);
            let mut text = vec![format!("n = {n}, max length {max_len}: {} arenas", rep.arenas), "rounds  exact  strategy".into()];
            for k in 0..rep.lemma_rounds.len() {
                let exact = rep.exact_rounds.get(k).copied().unwrap_or(0);
                text.push(format!("{k:>6}  {exact:>5}  {:>8}", rep.lemma_rounds[k]));
            }
            text.push(format!("failures: {}", rep.failures.len()));
            text.extend(rep.failures.iter().take(10).cloned());
            let json = json!({
                "n": n, "max_len": max_len, "arenas": rep.arenas, "exact_rounds": rep.exact_rounds,
                "strategy_rounds": rep.lemma_rounds, "failures": rep.failures,
            });
            Ok(Report::new(rep.failures.is_empty(), text.join("\n"), json))
        }
    }
}

//! Command-line front end: box verification, Bell game values, function
//! boxes, PR-box protocol compilation and execution, noisy-box
//! amplification, and the bounded-halting table.
//!
//! Exit codes: 0 on success, 1 when a checked property fails to hold,
//! 2 on usage or parse errors. Every command is deterministic given its
//! arguments and seed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;

use nsbox::format::{
    box_from_json, box_to_json, game_from_json, protocol_from_json, protocol_to_json,
    truth_table_from_text,
};
use nsbox::ratio::{decimal_string, format_ratio, parse_ratio};
use nsbox::{
    amplify, chsh_game, classical_value, compile, game_value, make_fbox, make_noisy_fbox,
    reconcile, run_compiled, AmplificationPlan, BellGame, BigRational, BitString,
    BooleanFunction, BoundedHaltingSpec, Error, NoisyBoxSpec, Party, QuantumStrategy, Side,
    TinyProgram,
};

#[derive(Parser)]
#[command(
    name = "nsbox",
    version,
    about = "Exact no-signalling boxes, Bell games, PR-box protocols, and noisy-box amplification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Alice,
    Bob,
    Min,
}

impl From<SideArg> for Side {
    fn from(side: SideArg) -> Self {
        match side {
            SideArg::Alice => Side::Alice,
            SideArg::Bob => Side::Bob,
            SideArg::Min => Side::Min,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check normalization and no-signalling of a box file
    Verify {
        /// JSON box file
        box_file: PathBuf,
    },
    /// Evaluate a Bell game under a strategy
    Game {
        /// Path to a game file, or the builtin name `chsh`
        game: String,
        /// One of: classical, quantum-builtin, pr, box:<file>
        strategy: String,
    },
    /// Build the (optionally noisy) function box of a truth table
    Fbox {
        /// Truth-table file (`l m` header, then 2^(l+m) bits)
        function_file: PathBuf,
        /// Correctness probability `num/den` for a noisy box
        #[arg(long)]
        p: Option<String>,
        /// Write the box as JSON to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a truth table into a PR-box protocol
    Compile {
        function_file: PathBuf,
        /// Which party's variables to decompose over
        #[arg(long, value_enum, default_value_t = SideArg::Bob)]
        side: SideArg,
        /// Write the compiled protocol as JSON to this path
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exhaustively check a xor b = f(x, y) over all inputs
        #[arg(long)]
        check: bool,
    },
    /// Execute a compiled protocol at one input pair and print the transcript
    Run {
        protocol_file: PathBuf,
        /// Alice's input bits
        #[arg(long)]
        x: String,
        /// Bob's input bits
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Majority-amplify a noisy function box
    Amplify {
        function_file: PathBuf,
        /// Per-input-pair correctness, strictly between 1/2 and 1
        #[arg(long)]
        p: String,
        /// Target failure probability, strictly inside (0, 1/2)
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write per-input-pair results as CSV to this path
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Bounded halting: interpret a program, or build the predicate table
    Halting {
        /// Program text file; runs a single program instead of a table
        #[arg(long)]
        program: Option<PathBuf>,
        /// Input bits for --program mode
        #[arg(long)]
        input: Option<String>,
        /// Step bound T
        #[arg(long, default_value_t = 100)]
        t: u64,
        /// Program encoding width for table mode
        #[arg(long)]
        program_bits: Option<usize>,
        /// Input width for table mode
        #[arg(long)]
        input_bits: Option<usize>,
        /// Reconcile the box against the interpreter on every pair
        #[arg(long)]
        check: bool,
        /// Write the halting box as JSON to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    // Die quietly when the consumer of a pipe goes away (e.g. `| head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> nsbox::Result<ExitCode> {
    match command {
        Command::Verify { box_file } => cmd_verify(&box_file),
        Command::Game { game, strategy } => cmd_game(&game, &strategy),
        Command::Fbox {
            function_file,
            p,
            out,
        } => cmd_fbox(&function_file, p.as_deref(), out.as_deref()),
        Command::Compile {
            function_file,
            side,
            out,
            check,
        } => cmd_compile(&function_file, side.into(), out.as_deref(), check),
        Command::Run {
            protocol_file,
            x,
            y,
            seed,
        } => cmd_run(&protocol_file, &x, &y, seed),
        Command::Amplify {
            function_file,
            p,
            epsilon,
            trials,
            seed,
            csv,
        } => cmd_amplify(&function_file, &p, &epsilon, trials, seed, csv.as_deref()),
        Command::Halting {
            program,
            input,
            t,
            program_bits,
            input_bits,
            check,
            out,
        } => cmd_halting(
            program.as_deref(),
            input.as_deref(),
            t,
            program_bits,
            input_bits,
            check,
            out.as_deref(),
        ),
    }
}

fn read(path: &Path) -> nsbox::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> nsbox::Result<()> {
    fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn show(value: &BigRational) -> String {
    format!("{} ({})", format_ratio(value), decimal_string(value, 10))
}

fn cmd_verify(box_file: &Path) -> nsbox::Result<ExitCode> {
    let bx = box_from_json(&read(box_file)?)?;
    println!(
        "box: {} x {} inputs, {} x {} outputs",
        bx.inputs_a().len(),
        bx.inputs_b().len(),
        bx.outputs_a().len(),
        bx.outputs_b().len()
    );
    if !bx.check_normalized() {
        println!("normalization: FAILED");
        println!("no-signalling: SKIPPED (box not normalized)");
        return Ok(ExitCode::from(1));
    }
    println!("normalization: OK");
    let report = bx.check_no_signalling()?;
    if report.holds {
        println!("no-signalling: OK");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("no-signalling: FAILED ({} violations)", report.violations.len());
        for v in &report.violations {
            println!("  {v}");
        }
        Ok(ExitCode::from(1))
    }
}

fn load_game(name: &str) -> nsbox::Result<BellGame> {
    if name == "chsh" {
        Ok(chsh_game())
    } else {
        game_from_json(&read(Path::new(name))?)
    }
}

fn cmd_game(game_name: &str, strategy: &str) -> nsbox::Result<ExitCode> {
    let game = load_game(game_name)?;
    println!("game: {game_name}");
    println!("strategy: {strategy}");
    match strategy {
        "classical" => {
            let (value, maximizer) = classical_value(&game)?;
            println!("value: {}", show(&value));
            println!("maximizing strategy:");
            println!("{}", maximizer.describe(&game));
        }
        "quantum-builtin" => {
            let strategy = QuantumStrategy::optimal_chsh();
            let float = strategy.float_game_value(&game);
            println!("float value: {float:.10}");
            let (bx, report) = nsbox::box_from_quantum(&strategy, 1e-9)?;
            let value = game_value(&game, &bx)?;
            println!("value: {}", show(&value));
            println!("max rationalization error: {:.3e}", report.max_error);
        }
        "pr" => {
            let pr = make_fbox(&BooleanFunction::and());
            let value = game_value(&game, &pr)?;
            println!("value: {}", show(&value));
        }
        other => {
            let Some(path) = other.strip_prefix("box:") else {
                return Err(Error::Parse(format!(
                    "unknown strategy `{other}` (expected classical, quantum-builtin, pr, or box:<file>)"
                )));
            };
            let bx = box_from_json(&read(Path::new(path))?)?;
            let value = game_value(&game, &bx)?;
            println!("value: {}", show(&value));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fbox(
    function_file: &Path,
    p: Option<&str>,
    out: Option<&Path>,
) -> nsbox::Result<ExitCode> {
    let f = truth_table_from_text(&read(function_file)?)?;
    println!(
        "function: l={} m={}, truth table {}",
        f.alice_bits(),
        f.bob_bits(),
        f.truth_table()
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect::<String>()
    );
    let bx = match p {
        None => {
            println!("box: exact function box");
            make_fbox(&f)
        }
        Some(p_text) => {
            let p = parse_ratio(p_text)?;
            let spec = NoisyBoxSpec::new(f.clone(), p.clone())?;
            println!("box: noisy function box, correctness {}", show(&p));
            make_noisy_fbox(&spec)
        }
    };
    println!(
        "normalization: {}",
        if bx.check_normalized() { "OK" } else { "FAILED" }
    );
    let report = bx.check_no_signalling()?;
    println!(
        "no-signalling: {}",
        if report.holds { "OK" } else { "FAILED" }
    );
    let half = BigRational::new(1.into(), 2.into());
    let mut uniform = true;
    for x in bx.inputs_a().labels() {
        for y in bx.inputs_b().labels() {
            for o in ["0", "1"] {
                uniform &= bx.marginal(Party::Alice, o, x, y)? == half;
                uniform &= bx.marginal(Party::Bob, o, x, y)? == half;
            }
        }
    }
    println!("uniform marginals: {}", if uniform { "OK" } else { "FAILED" });
    if let Some(path) = out {
        write(path, &box_to_json(&bx))?;
        println!("wrote box to {}", path.display());
    }
    Ok(if report.holds && uniform {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_compile(
    function_file: &Path,
    side: Side,
    out: Option<&Path>,
    check: bool,
) -> nsbox::Result<ExitCode> {
    let f = truth_table_from_text(&read(function_file)?)?;
    let protocol = compile(&f, side);
    println!("function: l={} m={}", f.alice_bits(), f.bob_bits());
    println!("decomposed over: {}", protocol.decomposed_over());
    println!("box count: {}", protocol.box_count());
    if let Some(path) = out {
        write(path, &protocol_to_json(&protocol))?;
        println!("wrote protocol to {}", path.display());
    }
    if check {
        let total = f.x_count() * f.y_count();
        let mut good = 0usize;
        let mut rng = StdRng::seed_from_u64(0);
        for xi in 0..f.x_count() {
            for yi in 0..f.y_count() {
                let x = BitString::from_index(xi, f.alice_bits());
                let y = BitString::from_index(yi, f.bob_bits());
                let ok = (0..3).all(|_| {
                    let (a, b, _) = run_compiled(&protocol, &x, &y, &mut rng)
                        .expect("compiled protocol runs on its own function");
                    (a ^ b) == f.eval_index(xi, yi)
                });
                if ok {
                    good += 1;
                }
            }
        }
        if good == total {
            println!("check: OK ({good}/{total} inputs)");
        } else {
            println!("check: FAILED ({good}/{total} inputs)");
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_run(protocol_file: &Path, x: &str, y: &str, seed: u64) -> nsbox::Result<ExitCode> {
    let protocol = protocol_from_json(&read(protocol_file)?)?;
    let x: BitString = x.parse()?;
    let y: BitString = y.parse()?;
    let mut rng = StdRng::seed_from_u64(seed);
    let (_, _, mut transcript) = run_compiled(&protocol, &x, &y, &mut rng)?;
    let reconciled = reconcile(&mut transcript)?;
    print!("{}", transcript.export());
    let expected = protocol.function().eval(&x, &y)?;
    if reconciled == expected {
        println!(
            "f({x}, {y}) = {}: reconciliation matches",
            u8::from(expected)
        );
        Ok(ExitCode::SUCCESS)
    } else {
        println!(
            "f({x}, {y}) = {} but reconciliation gave {}",
            u8::from(expected),
            u8::from(reconciled)
        );
        Ok(ExitCode::from(1))
    }
}

fn cmd_amplify(
    function_file: &Path,
    p: &str,
    epsilon: &str,
    trials: u64,
    seed: u64,
    csv: Option<&Path>,
) -> nsbox::Result<ExitCode> {
    let f = truth_table_from_text(&read(function_file)?)?;
    let p = parse_ratio(p)?;
    let epsilon = parse_ratio(epsilon)?;
    let spec = NoisyBoxSpec::new(f.clone(), p.clone())?;
    let plan = AmplificationPlan::for_target(spec, epsilon.clone())?;
    println!("p = {}", show(&p));
    println!("epsilon = {}", format_ratio(&epsilon));
    println!("chosen k = {}", plan.repetitions());
    let exact = plan.achieved_correctness();
    println!("achieved correctness: {}", show(&exact));

    // Trials cycle deterministically through the input pairs.
    let pairs: Vec<(usize, usize)> = (0..f.x_count())
        .flat_map(|xi| (0..f.y_count()).map(move |yi| (xi, yi)))
        .collect();
    let mut per_pair = vec![(0u64, 0u64); pairs.len()]; // (trials, correct)
    let mut rng = StdRng::seed_from_u64(seed);
    for trial in 0..trials {
        let (xi, yi) = pairs[(trial as usize) % pairs.len()];
        let x = BitString::from_index(xi, f.alice_bits());
        let y = BitString::from_index(yi, f.bob_bits());
        let (bit, _) = amplify(&plan, &x, &y, &mut rng)?;
        per_pair[(trial as usize) % pairs.len()].0 += 1;
        if bit == f.eval_index(xi, yi) {
            per_pair[(trial as usize) % pairs.len()].1 += 1;
        }
    }
    let correct: u64 = per_pair.iter().map(|&(_, c)| c).sum();
    let empirical = correct as f64 / trials.max(1) as f64;
    println!("empirical correctness: {empirical:.10} ({trials} trials, seed {seed})");

    if let Some(path) = csv {
        let mut text = String::from("x,y,trials,correct,empirical,exact\n");
        let exact_s = decimal_string(&exact, 10);
        for ((xi, yi), &(n, c)) in pairs.iter().zip(&per_pair) {
            let x = BitString::from_index(*xi, f.alice_bits());
            let y = BitString::from_index(*yi, f.bob_bits());
            let emp = if n == 0 { 0.0 } else { c as f64 / n as f64 };
            text.push_str(&format!("{x},{y},{n},{c},{emp:.10},{exact_s}\n"));
        }
        write(path, &text)?;
        println!("wrote csv to {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_halting(
    program: Option<&Path>,
    input: Option<&str>,
    t: u64,
    program_bits: Option<usize>,
    input_bits: Option<usize>,
    check: bool,
    out: Option<&Path>,
) -> nsbox::Result<ExitCode> {
    match (program, program_bits, input_bits) {
        (Some(path), None, None) => {
            let input = input.ok_or_else(|| {
                Error::Parse("--program mode requires --input <bits>".into())
            })?;
            let program: TinyProgram = read(path)?.parse()?;
            let input: BitString = input.parse()?;
            println!("program ({}):", path.display());
            print!("{program}");
            println!("input: {input} (r0 = {})", input.index());
            match nsbox::interpret(&program, &input, t) {
                nsbox::Verdict::Halted { steps } => {
                    println!("verdict: halted after {steps} steps (bound {t})")
                }
                nsbox::Verdict::Running => {
                    println!("verdict: still running after {t} steps (bound {t})")
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        (None, Some(pb), Some(ib)) => {
            let spec = BoundedHaltingSpec::new(pb, ib, t)?;
            let f = nsbox::bounded_halting_function(&spec);
            let halting = f.truth_table().iter().filter(|&&b| b).count();
            println!("bounded halting table: program_bits={pb}, input_bits={ib}, T={t}");
            println!("halting pairs: {halting}/{}", f.truth_table().len());
            let bx = nsbox::bounded_halting_fbox(&spec);
            let report = bx.check_no_signalling()?;
            println!(
                "no-signalling: {}",
                if report.holds { "OK" } else { "FAILED" }
            );
            if let Some(path) = out {
                write(path, &box_to_json(&bx))?;
                println!("wrote box to {}", path.display());
            }
            if check {
                let protocol = compile(&f, Side::Bob);
                let mut rng = StdRng::seed_from_u64(0);
                let total = f.x_count() * f.y_count();
                let mut good = 0usize;
                for xi in 0..f.x_count() {
                    for yi in 0..f.y_count() {
                        let x = BitString::from_index(xi, pb);
                        let y = BitString::from_index(yi, ib);
                        let (_, _, mut transcript) = run_compiled(&protocol, &x, &y, &mut rng)?;
                        let reconciled = reconcile(&mut transcript)?;
                        let verdict =
                            nsbox::interpret(&TinyProgram::decode(&x), &y, t).halted();
                        if reconciled == verdict {
                            good += 1;
                        }
                    }
                }
                if good == total {
                    println!("check: OK ({good}/{total} pairs reconcile to the interpreter verdict)");
                } else {
                    println!("check: FAILED ({good}/{total} pairs)");
                    return Ok(ExitCode::from(1));
                }
            }
            if report.holds {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        _ => Err(Error::Parse(
            "use either --program <file> --input <bits>, or --program-bits <n> --input-bits <m>"
                .into(),
        )),
    }
}

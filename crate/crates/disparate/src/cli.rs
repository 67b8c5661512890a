//! Command-line surface.
//!
//! One verb per capability: `solve`, `kernel`, `critical`, `check-hall`,
//! `ryser`, `sdr`, `sudoku`, `verify`. Outputs are deterministic and
//! machine-readable; exit code 0 means the underlying predicate or solver
//! succeeded, 1 that it failed, 2 that the input was unusable. Passing `-`
//! as a file reads standard input.

use std::fmt::Write as _;

use crate::apps::{
    hall_sdr_solve, parse_rectangle, parse_sudoku, ryser_condition, ryser_extend, sudoku_solve,
};
use crate::cascades::check_generalized_hall_tiny;
use crate::collections::{nonempty_subsets, EnumerationCaps};
use crate::error::Error;
use crate::instance::{parse_instance, ColorId, ColorSet, Instance, Selection};
use crate::kernel::{calc_method_1, calc_method_2, KernelOutcome, SolveOutcome};
use crate::oracle::{enumerate_selections, is_generalized_critical};
use crate::suites::run_suite;
use crate::transitive::{hall_check_transitive, is_transitive};

/// Captured result of one command invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

const USAGE: &str = "usage: disparate <command> [options] FILE
commands:
  solve FILE [--enumerate N] [--wcap K]   find a disparate selection
  kernel FILE [--trace] [--wcap K]        compute the disparate kernel
  critical FILE [--minimal]               list generalized critical sets
  check-hall FILE                         decide the Hall-style criterion
  ryser (--check|--extend) FILE           prepopulated Latin rectangle
  sdr FILE                                system of distinct representatives
  sudoku FILE [--unique] [--wcap K]       solve a Sudoku grid
  verify FILE --suite NAME [--seed S] [--cases N]
                                          run a property suite
FILE may be `-` for standard input.
";

fn usage_error(msg: &str) -> CommandOutput {
    CommandOutput { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n{USAGE}") }
}

fn input_error(err: &Error) -> CommandOutput {
    CommandOutput { code: 2, stdout: String::new(), stderr: format!("error: {err}\n") }
}

struct Args {
    file: Option<String>,
    flags: Vec<(String, Option<String>)>,
}

/// Flags taking a value.
const VALUED: &[&str] = &["--enumerate", "--wcap", "--suite", "--seed", "--cases"];

fn parse_args(rest: &[String]) -> Result<Args, String> {
    let mut file = None;
    let mut flags = Vec::new();
    let mut it = rest.iter().peekable();
    while let Some(arg) = it.next() {
        if let Some(name) = arg.strip_prefix("--").map(|_| arg.clone()) {
            if VALUED.contains(&name.as_str()) {
                let value = it.next().ok_or_else(|| format!("{name} needs a value"))?;
                flags.push((name, Some(value.clone())));
            } else {
                flags.push((name, None));
            }
        } else if file.is_none() {
            file = Some(arg.clone());
        } else {
            return Err(format!("unexpected argument {arg:?}"));
        }
    }
    Ok(Args { file, flags })
}

impl Args {
    fn has(&self, name: &str) -> bool {
        self.flags.iter().any(|(n, _)| n == name)
    }

    fn value(&self, name: &str) -> Option<&str> {
        self.flags.iter().find(|(n, _)| n == name).and_then(|(_, v)| v.as_deref())
    }

    fn usize_value(&self, name: &str) -> Result<Option<usize>, String> {
        match self.value(name) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| format!("{name} needs a number")),
        }
    }

    fn known(&self, allowed: &[&str]) -> Result<(), String> {
        for (name, _) in &self.flags {
            if !allowed.contains(&name.as_str()) {
                return Err(format!("unknown flag {name}"));
            }
        }
        Ok(())
    }
}

fn read_file(path: &str, stdin: &str) -> Result<String, String> {
    if path == "-" {
        return Ok(stdin.to_owned());
    }
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {path:?}: {e}"))
}

fn selection_lines(s: &Selection) -> String {
    let mut out = String::new();
    for (x, y) in s {
        let _ = writeln!(out, "{x} {y}");
    }
    out
}

fn default_wcap(inst: &Instance) -> usize {
    inst.vertices().len().saturating_sub(1).max(1)
}

/// Executes one command line; never panics on user input.
pub fn run_command(argv: &[String], stdin: &str) -> CommandOutput {
    let Some(command) = argv.first() else {
        return usage_error("missing command");
    };
    let rest = &argv[1..];
    let args = match parse_args(rest) {
        Ok(a) => a,
        Err(msg) => return usage_error(&msg),
    };
    match command.as_str() {
        "solve" => cmd_solve(&args, stdin),
        "kernel" => cmd_kernel(&args, stdin),
        "critical" => cmd_critical(&args, stdin),
        "check-hall" => cmd_check_hall(&args, stdin),
        "ryser" => cmd_ryser(&args, stdin),
        "sdr" => cmd_sdr(&args, stdin),
        "sudoku" => cmd_sudoku(&args, stdin),
        "verify" => cmd_verify(&args, stdin),
        other => usage_error(&format!("unknown command {other:?}")),
    }
}

fn load_instance(args: &Args, stdin: &str) -> Result<Instance, CommandOutput> {
    let Some(file) = &args.file else {
        return Err(usage_error("missing input file"));
    };
    let text = read_file(file, stdin).map_err(|msg| usage_error(&msg))?;
    parse_instance(&text).map_err(|e| input_error(&e))
}

fn cmd_solve(args: &Args, stdin: &str) -> CommandOutput {
    if let Err(msg) = args.known(&["--enumerate", "--wcap"]) {
        return usage_error(&msg);
    }
    let inst = match load_instance(args, stdin) {
        Ok(i) => i,
        Err(out) => return out,
    };
    let mut stderr = String::new();
    if let Some(limit) = match args.usize_value("--enumerate") {
        Ok(v) => v,
        Err(msg) => return usage_error(&msg),
    } {
        let selections = enumerate_selections(&inst, limit);
        if selections.is_empty() {
            return CommandOutput { code: 1, stdout: "INFEASIBLE\n".into(), stderr };
        }
        let blocks: Vec<String> = selections.iter().map(selection_lines).collect();
        return CommandOutput { code: 0, stdout: blocks.join("\n"), stderr };
    }
    let wcap = match args.usize_value("--wcap") {
        Ok(v) => v.unwrap_or_else(|| default_wcap(&inst)),
        Err(msg) => return usage_error(&msg),
    };
    if wcap < default_wcap(&inst) {
        let _ = writeln!(stderr, "note: partial search (wcap={wcap}); INFEASIBLE is not a proof");
    }
    match calc_method_2(&inst, wcap).outcome {
        SolveOutcome::Selection(s) => {
            CommandOutput { code: 0, stdout: selection_lines(&s), stderr }
        }
        SolveOutcome::Infeasible => {
            CommandOutput { code: 1, stdout: "INFEASIBLE\n".into(), stderr }
        }
    }
}

fn cmd_kernel(args: &Args, stdin: &str) -> CommandOutput {
    if let Err(msg) = args.known(&["--trace", "--wcap"]) {
        return usage_error(&msg);
    }
    let inst = match load_instance(args, stdin) {
        Ok(i) => i,
        Err(out) => return out,
    };
    let mut stderr = String::new();
    let wcap = match args.usize_value("--wcap") {
        Ok(v) => v.unwrap_or_else(|| default_wcap(&inst)),
        Err(msg) => return usage_error(&msg),
    };
    if wcap < default_wcap(&inst) {
        let _ = writeln!(stderr, "note: partial reduction (wcap={wcap}); result over-approximates the kernel");
    }
    let trace = calc_method_1(&inst, wcap);
    let mut stdout = String::new();
    if args.has("--trace") {
        stdout.push_str(&trace.serialize_steps());
    }
    match trace.outcome {
        KernelOutcome::Kernel(points) => {
            for x in inst.vertices() {
                let fiber: Vec<&ColorId> =
                    points.iter().filter(|p| &p.x == x).map(|p| &p.y).collect();
                let _ = writeln!(
                    stdout,
                    "{x}: {}",
                    fiber.iter().map(|c| c.token()).collect::<Vec<_>>().join(" ")
                );
            }
            CommandOutput { code: 0, stdout, stderr }
        }
        KernelOutcome::Infeasible(_) => {
            stdout.push_str("INFEASIBLE\n");
            CommandOutput { code: 1, stdout, stderr }
        }
    }
}

fn cmd_critical(args: &Args, stdin: &str) -> CommandOutput {
    if let Err(msg) = args.known(&["--minimal"]) {
        return usage_error(&msg);
    }
    let inst = match load_instance(args, stdin) {
        Ok(i) => i,
        Err(out) => return out,
    };
    let sets = if args.has("--minimal") {
        crate::oracle::minimal_critical_sets(&inst)
    } else {
        let domain = inst.vertex_set();
        let mut all = Vec::new();
        for w in nonempty_subsets(&domain) {
            if w == domain {
                continue;
            }
            if is_generalized_critical(&inst, &w).expect("valid subset").is_some() {
                all.push(w);
            }
        }
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    };
    let mut stdout = String::new();
    for w in &sets {
        let _ = writeln!(stdout, "{}", w.iter().map(|v| v.token()).collect::<Vec<_>>().join(" "));
    }
    let code = if sets.is_empty() { 0 } else { 1 };
    CommandOutput { code, stdout, stderr: String::new() }
}

fn cmd_check_hall(args: &Args, stdin: &str) -> CommandOutput {
    if let Err(msg) = args.known(&[]) {
        return usage_error(&msg);
    }
    let inst = match load_instance(args, stdin) {
        Ok(i) => i,
        Err(out) => return out,
    };
    if is_transitive(&inst) {
        return match hall_check_transitive(&inst) {
            Ok(None) => CommandOutput {
                code: 0,
                stdout: "method=transitive\nHOLDS\n".into(),
                stderr: String::new(),
            },
            Ok(Some(w)) => CommandOutput {
                code: 1,
                stdout: format!(
                    "method=transitive\nFAILS W: {}\n",
                    w.iter().map(|v| v.token()).collect::<Vec<_>>().join(" ")
                ),
                stderr: String::new(),
            },
            Err(e) => input_error(&e),
        };
    }
    let caps = EnumerationCaps::default();
    match check_generalized_hall_tiny(&inst, &caps) {
        Ok(true) => CommandOutput {
            code: 0,
            stdout: "method=tiny\nHOLDS\n".into(),
            stderr: String::new(),
        },
        Ok(false) => CommandOutput {
            code: 1,
            stdout: "method=tiny\nFAILS\n".into(),
            stderr: String::new(),
        },
        Err(e) => input_error(&e),
    }
}

fn cmd_ryser(args: &Args, stdin: &str) -> CommandOutput {
    if let Err(msg) = args.known(&["--check", "--extend"]) {
        return usage_error(&msg);
    }
    let check = args.has("--check");
    let extend = args.has("--extend");
    if check == extend {
        return usage_error("ryser needs exactly one of --check or --extend");
    }
    let Some(file) = &args.file else {
        return usage_error("missing input file");
    };
    let text = match read_file(file, stdin) {
        Ok(t) => t,
        Err(msg) => return usage_error(&msg),
    };
    let rect = match parse_rectangle(&text) {
        Ok(r) => r,
        Err(e) => return input_error(&e),
    };
    let bound = (rect.rows() + rect.cols()) as isize - rect.n() as isize;
    match ryser_condition(&rect) {
        Some(v) => {
            let line = format!("FAIL v={} N={} bound={}\n", v, rect.occurrences(v), bound);
            CommandOutput { code: 1, stdout: line, stderr: String::new() }
        }
        None => {
            if check {
                CommandOutput { code: 0, stdout: "OK\n".into(), stderr: String::new() }
            } else {
                let extended = ryser_extend(&rect).expect("condition holds");
                CommandOutput { code: 0, stdout: extended.serialize(), stderr: String::new() }
            }
        }
    }
}

fn cmd_sdr(args: &Args, stdin: &str) -> CommandOutput {
    if let Err(msg) = args.known(&[]) {
        return usage_error(&msg);
    }
    let Some(file) = &args.file else {
        return usage_error("missing input file");
    };
    let text = match read_file(file, stdin) {
        Ok(t) => t,
        Err(msg) => return usage_error(&msg),
    };
    let family: Vec<Vec<String>> = match serde_json::from_str(&text) {
        Ok(f) => f,
        Err(e) => return input_error(&Error::Malformed(e.to_string())),
    };
    let sets: Vec<ColorSet> = family
        .iter()
        .map(|set| set.iter().map(|c| ColorId::new(c.clone())).collect())
        .collect();
    match hall_sdr_solve(&sets) {
        Some(reps) => {
            let mut stdout = String::new();
            for rep in reps {
                let _ = writeln!(stdout, "{rep}");
            }
            CommandOutput { code: 0, stdout, stderr: String::new() }
        }
        None => CommandOutput { code: 1, stdout: "INFEASIBLE\n".into(), stderr: String::new() },
    }
}

fn cmd_sudoku(args: &Args, stdin: &str) -> CommandOutput {
    if let Err(msg) = args.known(&["--unique", "--wcap"]) {
        return usage_error(&msg);
    }
    let Some(file) = &args.file else {
        return usage_error("missing input file");
    };
    let text = match read_file(file, stdin) {
        Ok(t) => t,
        Err(msg) => return usage_error(&msg),
    };
    let grid = match parse_sudoku(&text) {
        Ok(g) => g,
        Err(e) => return input_error(&e),
    };
    let blanks = grid.cells().iter().filter(|c| c.is_none()).count();
    let wcap = match args.usize_value("--wcap") {
        Ok(v) => v.unwrap_or_else(|| blanks.saturating_sub(1).max(1)),
        Err(msg) => return usage_error(&msg),
    };
    let report = match sudoku_solve(&grid, wcap, args.has("--unique")) {
        Ok(r) => r,
        Err(e) => return input_error(&e),
    };
    let mut stderr = String::new();
    if report.partial {
        let _ = writeln!(stderr, "note: partial reduction (wcap={wcap}); results are not exhaustive");
    }
    match report.solution {
        Some(solved) => {
            let mut stdout = solved.serialize();
            if let Some(unique) = report.unique {
                let _ = writeln!(stdout, "unique={unique}");
            }
            CommandOutput { code: 0, stdout, stderr }
        }
        None => CommandOutput { code: 1, stdout: "INFEASIBLE\n".into(), stderr },
    }
}

fn cmd_verify(args: &Args, stdin: &str) -> CommandOutput {
    if let Err(msg) = args.known(&["--suite", "--seed", "--cases"]) {
        return usage_error(&msg);
    }
    let Some(suite) = args.value("--suite") else {
        return usage_error("verify needs --suite NAME");
    };
    let suite = suite.to_owned();
    let seed = match args.value("--seed") {
        None => 42,
        Some(v) => match v.parse() {
            Ok(s) => s,
            Err(_) => return usage_error("--seed needs a number"),
        },
    };
    let cases = match args.usize_value("--cases") {
        Ok(v) => v.unwrap_or(200),
        Err(msg) => return usage_error(&msg),
    };
    let inst = match load_instance(args, stdin) {
        Ok(i) => i,
        Err(out) => return out,
    };
    match run_suite(&suite, &inst, seed, cases) {
        Ok(report) if report.passed() => CommandOutput {
            code: 0,
            stdout: format!("PASS suite={} cases={}\n", report.name, report.cases),
            stderr: String::new(),
        },
        Ok(report) => CommandOutput {
            code: 1,
            stdout: format!(
                "FAIL suite={}: {}\n{}\n",
                report.name,
                report.failure.unwrap_or_default(),
                inst.serialize()
            ),
            stderr: String::new(),
        },
        Err(e) => input_error(&e),
    }
}

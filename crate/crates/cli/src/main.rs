use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sesqui::tricocycloid::dh::Instance;
use sesqui_cli::{
    laws_text, run_text, term_eval, term_normal_form, term_normalize, Assoc, CliError, Format,
    RunOptions, Semantics,
};

#[derive(Parser)]
#[command(name = "sesqui", version, about = "Exact kernel pipelines, law checks and guarded-choice terms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AssocArg {
    Left,
    Right,
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum InstanceArg {
    Interval,
    Terminal,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run {
        file: PathBuf,
        /// stoch, sub, par, norm, ne, mm, dk or rel; overrides the file.
        #[arg(long)]
        semantics: Option<String>,
        /// Bracketing of the pipeline; overrides the file.
        #[arg(long, value_enum)]
        assoc: Option<AssocArg>,
        /// Print every intermediate composite.
        #[arg(long)]
        trace: bool,
        /// Normalize the final kernel rowwise (sub semantics only).
        #[arg(long)]
        normalize: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Guarded-choice terms such as "((x <1/3> y) <1/2> _|_)".
    Term {
        #[command(subcommand)]
        action: TermAction,
    },
    /// Check distributive-law axioms and sesquilaw consequences, or the
    /// tricocycloid axioms for "interval" and "terminal".
    Laws {
        instance: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
}

#[derive(Subcommand)]
enum TermAction {
    /// Split a term into its failure-free part and its validity.
    Normalize {
        term: String,
        #[arg(long, value_enum, default_value = "interval")]
        instance: InstanceArg,
    },
    /// Print the meaning of a term.
    Eval {
        term: String,
        #[arg(long, value_enum, default_value = "interval")]
        instance: InstanceArg,
    },
    /// Rewrite into a sorted right comb.
    NormalForm {
        term: String,
        /// Comma-separated variable order; alphabetical when omitted.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<String>>,
        /// Merge repeated variables (interval only).
        #[arg(long)]
        merged: bool,
        #[arg(long, value_enum, default_value = "interval")]
        instance: InstanceArg,
    },
}

fn format(f: FormatArg) -> Format {
    match f {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    }
}

fn instance(i: InstanceArg) -> Instance {
    match i {
        InstanceArg::Interval => Instance::Interval,
        InstanceArg::Terminal => Instance::Terminal,
    }
}

fn execute(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Run {
            file,
            semantics,
            assoc,
            trace,
            normalize,
            format: f,
        } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", file.display())))?;
            let opts = RunOptions {
                semantics: semantics.map(|s| s.parse::<Semantics>()).transpose()?,
                assoc: assoc.map(|a| match a {
                    AssocArg::Left => Assoc::Left,
                    AssocArg::Right => Assoc::Right,
                    AssocArg::Tree => Assoc::Tree,
                }),
                trace,
                normalize,
            };
            run_text(&text, &opts, format(f))
        }
        Command::Term { action } => match action {
            TermAction::Normalize { term, instance: i } => term_normalize(&term, instance(i)),
            TermAction::Eval { term, instance: i } => term_eval(&term, instance(i)),
            TermAction::NormalForm {
                term,
                order,
                merged,
                instance: i,
            } => term_normal_form(&term, instance(i), order, merged),
        },
        Command::Laws {
            instance,
            samples,
            seed,
            format: f,
        } => laws_text(&instance, samples, seed, format(f)),
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("sesqui: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use botgraph::dataset::{
    attach_labels, build_dataset, export_json, export_tu, load_saturator, parse_examples, parse_labels, propositionalise_bcp,
    propositionalise_drm, to_document, DatasetError, DrmFeatures, LabelledExample, LabelledGraphDataset, PropExample,
    Provenance,
};
use botgraph::graph::{bot_graph, cg_leq, clause_to_graph, explanation_subgraph, graph_to_clause};
use botgraph::logic::{clause_equal, parse_program, subsumes};
use botgraph::modes::{in_mode_language, Recall, DEFAULT_CAP};
use botgraph::saturation::{SaturationConfig, Saturator, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(name = "botgraph", version, about = "Bottom-clause saturation, clause graphs and graph dataset export")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Inputs {
    /// Background knowledge file.
    #[arg(long)]
    bk: PathBuf,
    /// Mode declaration file.
    #[arg(long)]
    modes: PathBuf,
    /// Depth limit d.
    #[arg(long, default_value_t = 2)]
    depth: u32,
    /// Bound on λμ-sequences (mode assignments) explored per clause.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Deduction steps per query.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Recall for modes declared without one; unbounded if absent.
    #[arg(long)]
    recall: Option<u32>,
    /// Reserved; has no effect on results.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for saturation.
    #[arg(long)]
    jobs: Option<usize>,
    /// Exit with status 3 when a budget or cap left a result incomplete.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct ExampleFiles {
    /// Examples file, one ground clause per example.
    #[arg(long)]
    examples: PathBuf,
    /// `id,label` file; overrides labels taken from class/2 heads.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tu,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Bcp,
    Drm,
}

#[derive(Subcommand)]
enum Command {
    /// Print the bottom clause and a witnessing λμ-sequence per example.
    Saturate {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        files: ExampleFiles,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the bottom-graph of each example.
    Graph {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        files: ExampleFiles,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the vectorised dataset and export it.
    Dataset {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        files: ExampleFiles,
        #[arg(long, value_enum, default_value = "tu")]
        format: Format,
        /// Output directory for `tu`, output file for `json`.
        #[arg(long)]
        out: PathBuf,
        /// File name prefix for `tu`.
        #[arg(long, default_value = "botgraph")]
        name: String,
        /// Also write label map, vocabulary and provenance as JSON here.
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// Boolean feature matrix from the bottom clauses, as CSV.
    Prop {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        files: ExampleFiles,
        #[arg(long, value_enum)]
        method: Method,
        /// Split `drm` relations by their `#` constants.
        #[arg(long)]
        refine: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report mode-language membership for each clause of a file.
    Check {
        #[command(flatten)]
        inputs: Inputs,
        /// Clauses to check.
        #[arg(long)]
        clauses: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Explanation subgraph of each hypothesis clause within each bottom-graph.
    Explain {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        files: ExampleFiles,
        /// Hypothesis clauses; variables are matched against the bottom clause.
        #[arg(long)]
        hypothesis: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Incomplete(String),
}

impl From<DatasetError> for Failure {
    fn from(e: DatasetError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

impl Inputs {
    fn config(&self) -> SaturationConfig {
        SaturationConfig {
            depth: self.depth,
            default_recall: self.recall.map_or(Recall::Unbounded, Recall::Bounded),
            budget: self.budget,
            literal_cap: None,
            cap: self.cap,
        }
    }

    fn saturator(&self) -> Result<Saturator, Failure> {
        Ok(load_saturator(&read(&self.bk)?, &read(&self.modes)?, self.config())?)
    }

    fn provenance(&self) -> Result<Provenance, Failure> {
        Ok(Provenance::new(&self.config()).with_sources(read(&self.modes)?.as_bytes(), read(&self.bk)?.as_bytes()))
    }

    fn finish(&self, incomplete: usize) -> Result<(), Failure> {
        if incomplete == 0 {
            return Ok(());
        }
        let msg = format!("{incomplete} result(s) incomplete: budget or cap reached");
        if self.strict {
            Err(Failure::Incomplete(msg))
        } else {
            eprintln!("warning: {msg}");
            Ok(())
        }
    }
}

impl ExampleFiles {
    fn load(&self) -> Result<Vec<LabelledExample>, Failure> {
        let examples = parse_examples(&read(&self.examples)?)?;
        let labels = match &self.labels {
            Some(p) => Some(parse_labels(&read(p)?)?),
            None => None,
        };
        match attach_labels(examples.clone(), labels.as_deref()) {
            Ok(l) => Ok(l),
            // Commands other than dataset and prop work without labels.
            Err(DatasetError::MissingLabel(_)) => Ok(examples
                .into_iter()
                .map(|e| LabelledExample {
                    id: e.id,
                    clause: e.clause,
                    label: String::new(),
                })
                .collect()),
            Err(e) => Err(e.into()),
        }
    }

    fn load_labelled(&self) -> Result<Vec<LabelledExample>, Failure> {
        let examples = parse_examples(&read(&self.examples)?)?;
        let labels = match &self.labels {
            Some(p) => Some(parse_labels(&read(p)?)?),
            None => None,
        };
        Ok(attach_labels(examples, labels.as_deref())?)
    }
}

fn dataset(inputs: &Inputs, files: &ExampleFiles) -> Result<LabelledGraphDataset, Failure> {
    let sat = inputs.saturator()?;
    let examples = files.load_labelled()?;
    Ok(build_dataset(&sat, &examples, inputs.provenance()?, inputs.jobs)?)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Saturate { inputs, files, out } => {
            let sat = inputs.saturator()?;
            let mut text = String::new();
            let mut incomplete = 0;
            for e in files.load()? {
                let b = sat.saturate(&e.clause).map_err(|err| Failure::Input(format!("example {}: {err}", e.id)))?;
                match b {
                    None => writeln!(text, "% {}: empty\n", e.id).unwrap(),
                    Some(b) => {
                        incomplete += !b.complete as usize;
                        let status = if b.complete { "complete" } else { "incomplete" };
                        writeln!(text, "% {}: {status}\n{}\n% witness: {}\n", e.id, b.clause, b.witness).unwrap();
                    }
                }
            }
            emit(out.as_deref(), &text)?;
            inputs.finish(incomplete)
        }
        Command::Graph { inputs, files, out } => {
            let sat = inputs.saturator()?;
            let mut text = String::new();
            let mut incomplete = 0;
            for e in files.load()? {
                let bg = bot_graph(&sat, &e.clause).map_err(|err| Failure::Input(format!("example {}: {err}", e.id)))?;
                incomplete += (!bg.graph.exhaustive || bg.bottom.as_ref().is_some_and(|b| !b.complete)) as usize;
                writeln!(text, "% {}\n{}", e.id, bg.graph.dump()).unwrap();
            }
            emit(out.as_deref(), &text)?;
            inputs.finish(incomplete)
        }
        Command::Dataset {
            inputs,
            files,
            format,
            out,
            name,
            meta,
        } => {
            let ds = dataset(&inputs, &files)?;
            match format {
                Format::Tu => {
                    export_tu(&ds, &out, &name)?;
                }
                Format::Json => export_json(&ds, &out)?,
            }
            if let Some(meta) = meta {
                let mut doc = to_document(&ds);
                doc.graphs.clear();
                let text = serde_json::to_string_pretty(&doc).expect("document serialises") + "\n";
                emit(Some(&meta), &text)?;
            }
            let s = &ds.stats;
            eprintln!(
                "{} graphs ({} empty, {} incomplete); mean |X| {:.2}, |Y| {:.2}, |E| {:.2}",
                s.graphs, s.empty, s.incomplete, s.avg_x, s.avg_y, s.avg_e
            );
            inputs.finish(s.incomplete)
        }
        Command::Prop {
            inputs,
            files,
            method,
            refine,
            out,
        } => {
            let ds = dataset(&inputs, &files)?;
            let rows: Vec<PropExample> = ds
                .entries
                .iter()
                .map(|e| PropExample {
                    id: &e.id,
                    label: &e.label,
                    bottom: e.bottom.as_ref(),
                })
                .collect();
            let m = match method {
                Method::Bcp => propositionalise_bcp(&rows),
                Method::Drm if refine => propositionalise_drm(&rows, DrmFeatures::Constants),
                Method::Drm => propositionalise_drm(&rows, DrmFeatures::Relations),
            };
            let mut csv = Vec::new();
            m.write_csv(&mut csv)?;
            emit(out.as_deref(), &String::from_utf8(csv).expect("csv is utf-8"))?;
            inputs.finish(ds.stats.incomplete)
        }
        Command::Check { inputs, clauses, out } => {
            let sat = inputs.saturator()?;
            let program = parse_program(&read(&clauses)?).map_err(|e| Failure::Input(format!("{}: {e}", clauses.display())))?;
            let mut text = String::new();
            for (i, c) in program.clauses.iter().enumerate() {
                let types = sat.types_for(c);
                let verdict = if in_mode_language(Some(c), &sat.language(&types)) {
                    "in language"
                } else {
                    "not in language"
                };
                writeln!(text, "{}\t{verdict}\t{}", i + 1, c.to_string().replace("\n    ", " ")).unwrap();
            }
            emit(out.as_deref(), &text)
        }
        Command::Explain {
            inputs,
            files,
            hypothesis,
            out,
        } => {
            let sat = inputs.saturator()?;
            let hyps = parse_program(&read(&hypothesis)?).map_err(|e| Failure::Input(format!("{}: {e}", hypothesis.display())))?;
            let mut text = String::new();
            for e in files.load()? {
                let bg = bot_graph(&sat, &e.clause).map_err(|err| Failure::Input(format!("example {}: {err}", e.id)))?;
                let Some(bottom) = &bg.bottom else {
                    writeln!(text, "% {}: empty bottom clause\n", e.id).unwrap();
                    continue;
                };
                for (k, h) in hyps.clauses.iter().enumerate() {
                    let Some(ct) = subsumes(h, &bottom.clause) else {
                        writeln!(text, "% {} / hypothesis {}: does not subsume the bottom clause\n", e.id, k + 1).unwrap();
                        continue;
                    };
                    let types = sat.types_for(&e.clause);
                    let lang = sat.language(&types).with_policy(bottom.policy());
                    let in_lang = clause_to_graph(Some(&ct), &lang, inputs.cap, None).is_ok();
                    let sub = explanation_subgraph(&bg.graph, &ct).map_err(|err| Failure::Input(err.to_string()))?;
                    let below = cg_leq(&sub, &bg.graph);
                    let back = graph_to_clause(&sub).ok().flatten().is_some_and(|c| clause_equal(&c, &ct));
                    writeln!(
                        text,
                        "% {} / hypothesis {}\n{}\n{}% in language: {in_lang}\n% below bottom-graph: {below}\n% recovers clause: {back}\n",
                        e.id,
                        k + 1,
                        ct,
                        sub.dump()
                    )
                    .unwrap();
                }
            }
            emit(out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Incomplete(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

use serde::Serialize;
use serde_json::Value;

use rqc_core::design::{evaluate_design, DesignEvaluation, EvaluateOptions};
use rqc_core::document::{CircuitDocument, LatticeDocument, LatticeSummary};
use rqc_core::dual::{bipartition_from_path, build_dual, Bipartition, CutPath};
use rqc_core::pattern::{assemble_circuit, sequences_for_depth, CircuitLayout, CycleSequence, PatternCode};
use rqc_core::search::{search, SearchReport};
use rqc_core::sfa::{sfa_cost, CutCatalog, PathSearchConfig};
use rqc_core::verify::{entropy_profile, EntropyProfile, GateModel};
use rqc_core::{build_lattice, parse_coords, Coord, Error, Lattice};
use rqc_service::{AppState, EvaluateRequest, SearchRequest};

use crate::args::{CircuitArgs, EntropyArgs, EvaluateArgs, LatticeArgs, SearchArgs, ServeArgs};
use crate::error::{CliError, CliResult};
use crate::manifest::{read_input, InputDigest};
use crate::table;

/// What a command produced, before the manifest is attached.
pub struct Outcome {
    pub config: Value,
    pub result: Value,
    pub table: String,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub inputs: Vec<InputDigest>,
}

impl Outcome {
    fn new(config: Value, result: &impl Serialize, table: String) -> CliResult<Outcome> {
        Ok(Outcome {
            config,
            result: to_value(result)?,
            table,
            seed: None,
            threads: None,
            inputs: Vec::new(),
        })
    }
}

fn to_value(v: &impl Serialize) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| CliError::Internal(format!("encoding the document: {e}")))
}

/// Cut catalog built on first use.
struct LazyCatalog<'a> {
    lattice: &'a Lattice,
    config: PathSearchConfig,
    built: Option<CutCatalog>,
}

impl<'a> LazyCatalog<'a> {
    fn new(lattice: &'a Lattice, config: PathSearchConfig) -> Self {
        LazyCatalog {
            lattice,
            config,
            built: None,
        }
    }

    fn get(&mut self) -> CliResult<&CutCatalog> {
        if self.built.is_none() {
            self.built = Some(CutCatalog::build(self.lattice, &self.config)?);
        }
        Ok(self.built.as_ref().expect("just built"))
    }
}

/// An explicit sequence, the standard one, or for depths not divisible by 4
/// the costliest tail (first on ties).
fn choose_sequence(
    lattice: &Lattice,
    code: &PatternCode,
    depth: usize,
    explicit: Option<&str>,
    allow_junction_repeat: bool,
    catalog: &mut LazyCatalog,
) -> CliResult<CycleSequence> {
    if let Some(text) = explicit {
        return Ok(text.parse()?);
    }
    let mut sequences = sequences_for_depth(depth, allow_junction_repeat)?;
    if sequences.len() == 1 {
        return Ok(sequences.remove(0));
    }
    let catalog = catalog.get()?;
    let mut best: Option<(usize, f64)> = None;
    for (i, seq) in sequences.iter().enumerate() {
        let cost = sfa_cost(&assemble_circuit(lattice, code, seq)?, catalog)?.breakdown.log2_cost;
        if best.is_none_or(|(_, c)| cost > c) {
            best = Some((i, cost));
        }
    }
    let (i, _) = best.expect("at least one sequence");
    Ok(sequences.swap_remove(i))
}

pub fn lattice(args: &LatticeArgs) -> CliResult<Outcome> {
    let lattice = build_lattice(&args.spec()?)?;
    let doc = LatticeDocument::of(&lattice, &build_dual(&lattice));
    let table = table::lattice(&doc);
    Outcome::new(to_value(args)?, &doc, table)
}

pub fn circuit(args: &CircuitArgs) -> CliResult<Outcome> {
    let lattice = build_lattice(&args.lattice.spec()?)?;
    let code = args.pattern.code(|| PatternCode::baseline(&lattice))?;
    code.check(&lattice)?;
    let mut catalog = LazyCatalog::new(&lattice, args.paths.config());
    let seq = choose_sequence(
        &lattice,
        &code,
        args.depth,
        args.sequence.as_deref(),
        args.allow_junction_repeat,
        &mut catalog,
    )?;
    let doc = CircuitDocument::of(&assemble_circuit(&lattice, &code, &seq)?);
    let table = table::circuit(&doc);
    Outcome::new(to_value(args)?, &doc, table)
}

pub fn evaluate(args: &EvaluateArgs) -> CliResult<Outcome> {
    let mut config = to_value(args)?;
    let mut inputs = Vec::new();
    let request = match &args.request {
        Some(path) => {
            let bytes = read_input(path, &mut inputs)?;
            config["request"] = serde_json::from_slice(&bytes).map_err(|source| CliError::Request {
                path: path.clone(),
                source,
            })?;
            serde_json::from_slice::<EvaluateRequest>(&bytes).map_err(|source| CliError::Request {
                path: path.clone(),
                source,
            })?
        }
        None => {
            let spec = args.lattice.spec()?;
            let lattice = build_lattice(&spec)?;
            EvaluateRequest {
                lattice: spec,
                pattern: args.pattern.code(|| PatternCode::baseline(&lattice))?,
                options: EvaluateOptions {
                    depth: args.depth,
                    paths: args.paths.config(),
                    allow_junction_repeat: args.allow_junction_repeat,
                    noise: args.noise(),
                },
            }
        }
    };
    let lattice = build_lattice(&request.lattice)?;
    let evaluation: DesignEvaluation = evaluate_design(&lattice, &request.pattern, &request.options)?;
    let table = table::evaluation(&evaluation);
    let mut out = Outcome::new(config, &evaluation, table)?;
    out.inputs = inputs;
    Ok(out)
}

pub fn search_codes(args: &SearchArgs) -> CliResult<Outcome> {
    let mut config = to_value(args)?;
    let mut inputs = Vec::new();
    let mut request = match &args.request {
        Some(path) => {
            let bytes = read_input(path, &mut inputs)?;
            config["request"] = serde_json::from_slice(&bytes).map_err(|source| CliError::Request {
                path: path.clone(),
                source,
            })?;
            serde_json::from_slice::<SearchRequest>(&bytes).map_err(|source| CliError::Request {
                path: path.clone(),
                source,
            })?
        }
        None => {
            let mut request = SearchRequest {
                lattice: args.lattice.spec()?,
                config: Default::default(),
            };
            let c = &mut request.config;
            c.depth = args.depth;
            c.paths = args.paths.config();
            c.top_k = args.top_k;
            c.include_baseline = args.baseline;
            c.enumeration_cap = args.enumeration_cap;
            c.allow_junction_repeat = args.allow_junction_repeat;
            request
        }
    };
    if args.threads != 0 || args.request.is_none() {
        request.config.threads = args.threads;
    }
    let lattice = build_lattice(&request.lattice)?;
    let report: SearchReport = search(&lattice, &request.config)?;
    let table = table::search(&report);
    // run details vary between runs and thread counts; they live in the manifest
    let mut result = to_value(&report)?;
    if let Value::Object(map) = &mut result {
        map.remove("run");
    }
    Ok(Outcome {
        config,
        result,
        table,
        seed: None,
        threads: Some(report.run.threads),
        inputs,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyRun {
    pub pattern: PatternCode,
    pub sequence: String,
    pub cut: Vec<Coord>,
    pub n1: usize,
    pub n2: usize,
    /// `min(n1, n2)`, the largest entropy any state can reach.
    pub bound: usize,
    /// Per-cycle entropy averaged over the seeds.
    pub mean: Vec<f64>,
    pub profiles: Vec<EntropyProfile>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyDocument {
    pub lattice: LatticeSummary,
    pub runs: Vec<EntropyRun>,
}

fn explicit_cut(lattice: &Lattice, text: &str) -> CliResult<(CutPath, Bipartition)> {
    let sites = parse_coords(text)?.into_iter().map(|(u, v)| Coord::new(u, v)).collect();
    let path = CutPath::new(&build_dual(lattice), sites)?;
    let bip = bipartition_from_path(lattice, &path)?;
    Ok((path, bip))
}

fn entropy_run(
    circuit: &CircuitLayout,
    args: &EntropyArgs,
    catalog: &mut LazyCatalog,
    model: &GateModel,
) -> CliResult<EntropyRun> {
    let lattice = circuit.lattice();
    let (path, bip) = if args.cut.trim() == "auto" {
        let path = sfa_cost(circuit, catalog.get()?)?.path;
        let bip = bipartition_from_path(lattice, &path)?;
        (path, bip)
    } else {
        explicit_cut(lattice, &args.cut)?
    };
    let profiles = (args.seed..args.seed + args.seeds)
        .map(|seed| entropy_profile(circuit, &bip, seed, model, args.cap))
        .collect::<Result<Vec<_>, _>>()?;
    let mean = (0..=circuit.depth())
        .map(|t| profiles.iter().map(|p| p.entropy[t]).sum::<f64>() / profiles.len() as f64)
        .collect();
    Ok(EntropyRun {
        pattern: circuit.code().clone(),
        sequence: circuit.sequence().to_string(),
        cut: path.sites().to_vec(),
        n1: bip.n1(),
        n2: bip.n2(),
        bound: bip.n1().min(bip.n2()),
        mean,
        profiles,
    })
}

pub fn entropy(args: &EntropyArgs) -> CliResult<Outcome> {
    if args.seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    let lattice = build_lattice(&args.lattice.spec()?)?;
    if lattice.num_qubits() > args.cap {
        return Err(Error::ScaleCap {
            what: "statevector",
            size: lattice.num_qubits(),
            cap: args.cap,
        }
        .into());
    }
    let model = GateModel {
        single: args.single.into(),
        ..GateModel::default()
    };
    let mut catalog = LazyCatalog::new(&lattice, args.paths.config());
    let first = args.pattern.code(|| PatternCode::baseline(&lattice))?;
    let mut designs = vec![(first, args.sequence.clone())];
    if let Some(text) = &args.versus {
        let sequence = args.versus_sequence.clone().or_else(|| args.sequence.clone());
        designs.push((text.parse()?, sequence));
    }
    let mut runs = Vec::with_capacity(designs.len());
    for (code, sequence) in &designs {
        code.check(&lattice)?;
        let seq = choose_sequence(
            &lattice,
            code,
            args.depth,
            sequence.as_deref(),
            args.allow_junction_repeat,
            &mut catalog,
        )?;
        let circuit = assemble_circuit(&lattice, code, &seq)?;
        runs.push(entropy_run(&circuit, args, &mut catalog, &model)?);
    }
    let doc = EntropyDocument {
        lattice: LatticeSummary::of(&lattice),
        runs,
    };
    let table = table::entropy(&doc);
    let mut out = Outcome::new(to_value(args)?, &doc, table)?;
    out.seed = Some(args.seed);
    Ok(out)
}

pub fn serve(args: &ServeArgs) -> CliResult<()> {
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(CliError::Serve)?;
    eprintln!("listening on http://{}", args.addr);
    runtime
        .block_on(rqc_service::serve(args.addr, AppState::default()))
        .map_err(CliError::Serve)
}

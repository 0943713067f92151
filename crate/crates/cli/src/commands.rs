use std::io::{Read, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tievote::format::{
    control_av_to_string, manipulation_to_string, parse_bribery, parse_control_av, parse_manipulation, witness_lines,
    RuleName,
};
use tievote::parse::{order_to_string, parse_axis, parse_profile};
use tievote::prefs::{Candidates, Order};
use tievote::reductions::{
    gen_borda_avg_cwcm, gen_borda_cwcm, gen_copeland_cwcm, gen_x3c_plurality_ccav, partition_prime_sweep,
    partition_sweep, partition_to_partition_prime, verify_reduction, Mode, Part, PartitionInstance,
    PartitionPrimeInstance, ReductionKind, ReductionReport, SourceInstance, SourceWitness, TargetInstance,
    TargetWitness, X3CInstance,
};
use tievote::rules::{rule_scores, select_winners, RuleKind, RuleSpec, ScoringExtension, WinnerModel};
use tievote::solvers::{
    bribery_exact, ccav_exact, copeland_3cand_regime, cwcm_3cand_dp, cwcm_copeland_3cand_p, cwcm_exact,
    cwcm_min_extension, llull_irrational_cwcm_flow, weighted_bribery_t_approval, Decision, SolverConfig, VoteDomain,
    Witness,
};
use tievote::tournament::{pair_majority_graph, realize_two_total_orders};

use crate::{
    BriberyAlgo, Cli, Command, DomainArgs, Format, KindArg, ManipulationAlgo, RuleArgs, SourceArgs, SweepArgs,
};

/// Sweep reports are computed in batches of this size and printed in order.
const SWEEP_BATCH: usize = 256;

pub fn run(cli: &Cli, out: &mut impl Write) -> Result<bool> {
    let format = cli.global.format;
    let config = cli.global.config();
    match &cli.command {
        Command::Winners { input, rule } => winners(&read(input)?, rule, format, out),
        Command::Manipulate {
            input,
            algo,
            rule,
            domain,
        } => manipulate(&read(input)?, *algo, rule, domain, &config, format, out),
        Command::ControlAv { input, limit, rule } => control_av(&read(input)?, *limit, rule, &config, format, out),
        Command::Bribe {
            input,
            algo,
            limit,
            rule,
            domain,
        } => bribe(&read(input)?, *algo, *limit, rule, domain, &config, format, out),
        Command::Reduce { kind, source } => reduce(*kind, source, format, out),
        Command::Verify { kind, source, sweep } if sweep.sweep => {
            verify_sweep(*kind, source, sweep, cli.global.seed, &config, format, out)
        }
        Command::Verify { kind, source, .. } => verify_one(*kind, source, &config, format, out),
        Command::Realize { input } => realize(&read(input)?, format, out),
    }
}

fn read(path: &Path) -> Result<String> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .context("reading standard input")?;
    } else {
        text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    Ok(text)
}

fn emit(out: &mut impl Write, format: Format, text: &str, record: Value) -> Result<()> {
    match format {
        Format::Text => write!(out, "{text}")?,
        Format::Structured => writeln!(out, "{record}")?,
    }
    Ok(())
}

fn yes_no(answer: bool) -> &'static str {
    if answer {
        "YES"
    } else {
        "NO"
    }
}

/// The rule from the flags, falling back to `current` field by field.
fn resolve_rule(args: &RuleArgs, current: Option<&RuleSpec>, m: usize) -> Result<RuleSpec> {
    let (mut name, mut ext, mut model) = match current {
        Some(r) => {
            let ext = match &r.kind {
                RuleKind::Scoring { extension, .. } => Some(*extension),
                RuleKind::Copeland { .. } => None,
            };
            (Some(RuleName::of(r, m)), ext, r.winner_model)
        }
        None => (None, None, WinnerModel::default()),
    };
    if let Some(rule) = &args.rule {
        name = Some(if rule.trim() == "copeland" {
            RuleName::Copeland(args.alpha.ok_or_else(|| anyhow!("--rule copeland needs --alpha"))?)
        } else {
            rule.parse().map_err(|e: String| anyhow!(e))?
        });
        if !name.as_ref().is_some_and(RuleName::is_scoring) {
            ext = None;
        }
    }
    if let Some(alpha) = args.alpha {
        name = match name {
            None | Some(RuleName::Copeland(_)) => Some(RuleName::Copeland(alpha)),
            Some(_) => bail!("--alpha applies to Copeland rules only"),
        };
    }
    let name = name.ok_or_else(|| anyhow!("no rule given; pass --rule"))?;
    if let Some(e) = args.ext {
        if !name.is_scoring() {
            bail!("--ext applies to scoring rules only");
        }
        ext = Some(e);
    }
    if let Some(w) = args.winner_model {
        model = w;
    }
    name.build(m, ext, model).map_err(|e| anyhow!(e))
}

fn resolve_domain(args: &DomainArgs, current: &VoteDomain, candidates: &Candidates) -> Result<VoteDomain> {
    let axis = match &args.axis {
        Some(text) => Some(parse_axis(text, candidates).context("--axis")?),
        None => current.axis.clone(),
    };
    Ok(VoteDomain {
        kind: args.domain.unwrap_or(current.kind),
        axis,
    })
}

fn winners(text: &str, args: &RuleArgs, format: Format, out: &mut impl Write) -> Result<bool> {
    let profile = parse_profile(text).context("profile")?;
    let c = profile.candidates();
    let rule = resolve_rule(args, None, c.len())?;
    let table = rule_scores(&profile, &rule)?;
    let winners: Vec<&str> = select_winners(&table, rule.winner_model)
        .into_iter()
        .map(|w| c.name(w))
        .collect();
    let scores: serde_json::Map<String, Value> = (0..c.len())
        .map(|i| (c.name(i).to_string(), json!(table.get(i).to_string())))
        .collect();
    let text = format!("scores: {}\nwinners: {}\n", table.render(c), winners.join(" "));
    emit(
        out,
        format,
        &text,
        json!({ "command": "winners", "scores": scores, "winners": winners }),
    )?;
    Ok(true)
}

/// Prints a decision whose witness has already been replayed.
fn report_decision(
    out: &mut impl Write,
    format: Format,
    command: &str,
    decision: &Decision,
    candidates: &Candidates,
    extra: &[(&str, String)],
) -> Result<bool> {
    let lines = decision
        .witness
        .as_ref()
        .map(|w| witness_lines(w, candidates))
        .unwrap_or_default();
    let mut text = format!("{} ({})\n", yes_no(decision.answer), decision.algorithm);
    for l in &lines {
        text.push_str(&format!("  {l}\n"));
    }
    if decision.witness.is_some() {
        text.push_str("replay: ok\n");
    }
    let mut record = json!({
        "command": command,
        "answer": decision.answer,
        "algorithm": decision.algorithm.name(),
        "witness": lines,
        "replayed": decision.witness.is_some(),
    });
    for (key, value) in extra {
        text.push_str(&format!("{key}: {value}\n"));
        record[*key] = json!(value);
    }
    emit(out, format, &text, record)?;
    Ok(decision.answer)
}

fn replay_failed() -> anyhow::Error {
    anyhow!("internal error: the witness does not replay")
}

fn manipulate(
    text: &str,
    algo: ManipulationAlgo,
    rule: &RuleArgs,
    domain: &DomainArgs,
    config: &SolverConfig,
    format: Format,
    out: &mut impl Write,
) -> Result<bool> {
    let mut inst = parse_manipulation(text).context("manipulation instance")?;
    let c = inst.nonmanipulators.candidates().clone();
    inst.rule = resolve_rule(rule, Some(&inst.rule), c.len())?;
    inst.domain = resolve_domain(domain, &inst.domain, &c)?;
    let decision = match algo {
        ManipulationAlgo::Exact => cwcm_exact(&inst, config),
        ManipulationAlgo::Dp => cwcm_3cand_dp(&inst, config),
        ManipulationAlgo::MinFast => cwcm_min_extension(&inst, config),
        ManipulationAlgo::CopelandP => cwcm_copeland_3cand_p(&inst, config),
        ManipulationAlgo::LlullFlow => llull_irrational_cwcm_flow(&inst, config),
    }?;
    if let Some(votes) = decision.manipulation_votes() {
        if !inst.replay(votes)? {
            return Err(replay_failed());
        }
    }
    let mut extra = Vec::new();
    if matches!(inst.rule.kind, RuleKind::Copeland { .. }) {
        extra.push(("regime", copeland_3cand_regime(&inst).to_string()));
    }
    report_decision(out, format, "manipulate", &decision, &c, &extra)
}

fn control_av(
    text: &str,
    limit: Option<usize>,
    rule: &RuleArgs,
    config: &SolverConfig,
    format: Format,
    out: &mut impl Write,
) -> Result<bool> {
    let mut inst = parse_control_av(text).context("control instance")?;
    let c = inst.registered.candidates().clone();
    inst.rule = resolve_rule(rule, Some(&inst.rule), c.len())?;
    if let Some(k) = limit {
        inst.add_limit = k;
    }
    let decision = ccav_exact(&inst, config)?;
    if let Some(Witness::AddedVoters(added)) = &decision.witness {
        if !inst.replay(added)? {
            return Err(replay_failed());
        }
    }
    report_decision(out, format, "control-av", &decision, &c, &[])
}

#[allow(clippy::too_many_arguments)]
fn bribe(
    text: &str,
    algo: BriberyAlgo,
    limit: Option<usize>,
    rule: &RuleArgs,
    domain: &DomainArgs,
    config: &SolverConfig,
    format: Format,
    out: &mut impl Write,
) -> Result<bool> {
    let mut inst = parse_bribery(text).context("bribery instance")?;
    let c = inst.voters.candidates().clone();
    inst.rule = resolve_rule(rule, Some(&inst.rule), c.len())?;
    inst.domain = resolve_domain(domain, &inst.domain, &c)?;
    if let Some(k) = limit {
        inst.bribe_limit = k;
    }
    let decision = match algo {
        BriberyAlgo::Exact => bribery_exact(&inst, config),
        BriberyAlgo::TApprovalBribery => weighted_bribery_t_approval(&inst, config),
    }?;
    if let Some(Witness::Bribery { voters, votes }) = &decision.witness {
        if !inst.replay(voters, votes)? {
            return Err(replay_failed());
        }
    }
    report_decision(out, format, "bribe", &decision, &c, &[])
}

fn reduction_kind(kind: KindArg, source: &SourceArgs) -> Result<ReductionKind> {
    Ok(match kind {
        KindArg::PartitionPrime => ReductionKind::PartitionPrime,
        KindArg::BordaMax => ReductionKind::BordaMax,
        KindArg::BordaRoundDown => ReductionKind::BordaRoundDown,
        KindArg::BordaAvg => ReductionKind::BordaAverage,
        KindArg::Copeland => ReductionKind::Copeland {
            alpha: source
                .alpha
                .ok_or_else(|| anyhow!("the Copeland construction needs --alpha"))?,
            winner_model: source.winner_model.unwrap_or_default(),
        },
        KindArg::X3cCcav => ReductionKind::X3cCcav,
    })
}

fn mode(source: &SourceArgs) -> Mode {
    if source.permissive {
        Mode::Permissive
    } else {
        Mode::Strict
    }
}

/// `1,2,3;4,5,6` with 1-based elements.
fn parse_sets(text: &str) -> Result<Vec<[usize; 3]>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let elems: Vec<usize> = s
                .split(',')
                .map(|e| {
                    e.trim()
                        .parse::<usize>()
                        .with_context(|| format!("bad set element `{e}`"))
                })
                .collect::<Result<_>>()?;
            match elems[..] {
                [a, b, c] if a > 0 && b > 0 && c > 0 => Ok([a - 1, b - 1, c - 1]),
                _ => bail!("`{s}` is not a set of three positive elements"),
            }
        })
        .collect()
}

fn source_instance(kind: KindArg, source: &SourceArgs) -> Result<SourceInstance> {
    let values = || -> Result<Vec<u64>> {
        if source.values.is_empty() {
            bail!("--values is required for this construction");
        }
        Ok(source.values.clone())
    };
    Ok(match kind {
        KindArg::PartitionPrime | KindArg::BordaMax | KindArg::BordaRoundDown => {
            SourceInstance::Partition(PartitionInstance::new(values()?)?)
        }
        KindArg::BordaAvg | KindArg::Copeland => {
            if source.from_partition {
                SourceInstance::PartitionPrime(partition_to_partition_prime(&PartitionInstance::new(values()?)?)?)
            } else {
                let target = source
                    .target
                    .ok_or_else(|| anyhow!("--target is required for Partition′ sources"))?;
                SourceInstance::PartitionPrime(PartitionPrimeInstance::new(values()?, target)?)
            }
        }
        KindArg::X3cCcav => {
            let k = source.k.ok_or_else(|| anyhow!("--k is required for X3C sources"))?;
            let sets = parse_sets(source.sets.as_deref().unwrap_or(""))?;
            SourceInstance::X3c(X3CInstance::new(k, sets)?)
        }
    })
}

fn reduce(kind: KindArg, source: &SourceArgs, format: Format, out: &mut impl Write) -> Result<bool> {
    let rk = reduction_kind(kind, source)?;
    let mode = mode(source);
    let text = match (&rk, source_instance(kind, source)?) {
        (ReductionKind::PartitionPrime, SourceInstance::Partition(s)) => {
            let t = partition_to_partition_prime(&s)?;
            let v: Vec<String> = t.values().iter().map(u64::to_string).collect();
            format!("values: {}\ntarget: {}\n", v.join(","), t.target())
        }
        (ReductionKind::BordaMax, SourceInstance::Partition(s)) => {
            manipulation_to_string(&gen_borda_cwcm(&s, ScoringExtension::Max)?)
        }
        (ReductionKind::BordaRoundDown, SourceInstance::Partition(s)) => {
            manipulation_to_string(&gen_borda_cwcm(&s, ScoringExtension::RoundDown)?)
        }
        (ReductionKind::BordaAverage, SourceInstance::PartitionPrime(s)) => {
            manipulation_to_string(&gen_borda_avg_cwcm(&s, mode)?)
        }
        (ReductionKind::Copeland { alpha, winner_model }, SourceInstance::PartitionPrime(s)) => {
            manipulation_to_string(&gen_copeland_cwcm(&s, *alpha, *winner_model, mode)?)
        }
        (ReductionKind::X3cCcav, SourceInstance::X3c(s)) => control_av_to_string(&gen_x3c_plurality_ccav(&s, mode)?),
        _ => unreachable!("source_instance matches the kind"),
    };
    emit(
        out,
        format,
        &text,
        json!({ "command": "reduce", "kind": rk.to_string(), "target": text }),
    )?;
    Ok(true)
}

fn target_candidates(target: &TargetInstance) -> Option<&Candidates> {
    match target {
        TargetInstance::PartitionPrime(_) => None,
        TargetInstance::Manipulation(m) => Some(m.nonmanipulators.candidates()),
        TargetInstance::ControlAv(c) => Some(c.registered.candidates()),
    }
}

/// Replays the target witness of a report; a failure is a bug.
fn replay_target(report: &ReductionReport) -> Result<()> {
    let ok = match (&report.target, &report.target_witness) {
        (_, None) => true,
        (TargetInstance::PartitionPrime(t), Some(TargetWitness::Parts(parts))) => {
            let sum = |p: Part| -> u64 {
                t.values()
                    .iter()
                    .zip(parts)
                    .filter(|(_, &q)| q == p)
                    .map(|(v, _)| v)
                    .sum()
            };
            sum(Part::A) == sum(Part::B) + t.target()
        }
        (TargetInstance::Manipulation(m), Some(TargetWitness::Decision(d))) => d
            .manipulation_votes()
            .map(|v| m.replay(v))
            .transpose()?
            .unwrap_or(false),
        (TargetInstance::ControlAv(c), Some(TargetWitness::Decision(d))) => match &d.witness {
            Some(Witness::AddedVoters(a)) => c.replay(a)?,
            _ => false,
        },
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(replay_failed())
    }
}

fn source_witness_text(w: &SourceWitness) -> String {
    let one_based = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
    match w {
        SourceWitness::Subset(s) => format!("subset {}", one_based(s)),
        SourceWitness::Parts(p) => format!("parts {}", p.iter().map(|x| format!("{x:?}")).collect::<String>()),
        SourceWitness::Cover(s) => format!("cover {}", one_based(s)),
    }
}

fn target_witness_lines(report: &ReductionReport) -> Vec<String> {
    match &report.target_witness {
        None => Vec::new(),
        Some(TargetWitness::Parts(p)) => vec![format!(
            "parts {}",
            p.iter().map(|x| format!("{x:?}")).collect::<String>()
        )],
        Some(TargetWitness::Decision(d)) => match (&d.witness, target_candidates(&report.target)) {
            (Some(w), Some(c)) => witness_lines(w, c),
            _ => Vec::new(),
        },
    }
}

fn summary_record(report: &ReductionReport) -> Value {
    json!({
        "kind": report.kind.to_string(),
        "source": report.source.to_string(),
        "source_answer": report.source_answer,
        "target_answer": report.target_answer,
        "agree": report.agree,
    })
}

fn verify_one(
    kind: KindArg,
    source: &SourceArgs,
    config: &SolverConfig,
    format: Format,
    out: &mut impl Write,
) -> Result<bool> {
    let rk = reduction_kind(kind, source)?;
    let src = source_instance(kind, source)?;
    let report = verify_reduction(&rk, &src, mode(source), config)?;
    replay_target(&report)?;
    let target_lines = target_witness_lines(&report);
    let mut text = format!(
        "kind: {}\nsource: {}\nsource answer: {}\n",
        report.kind,
        report.source,
        yes_no(report.source_answer)
    );
    if let Some(w) = &report.source_witness {
        text.push_str(&format!("source witness: {}\n", source_witness_text(w)));
    }
    text.push_str(&format!("target answer: {}\n", yes_no(report.target_answer)));
    for l in &target_lines {
        text.push_str(&format!("  {l}\n"));
    }
    text.push_str(&format!("agree: {}\n", if report.agree { "yes" } else { "no" }));
    let mut record = summary_record(&report);
    record["command"] = json!("verify");
    record["source_witness"] = json!(report.source_witness.as_ref().map(source_witness_text));
    record["target_witness"] = json!(target_lines);
    emit(out, format, &text, record)?;
    Ok(report.agree)
}

/// Random X3C families over a `3k` base, half of them with a planted cover.
fn sample_x3c(k: usize, families: usize, seed: u64) -> Result<Vec<SourceInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = 3 * k;
    (0..families)
        .map(|_| {
            let mut sets: Vec<[usize; 3]> = Vec::new();
            let mut perm: Vec<usize> = (0..base).collect();
            if rng.random_bool(0.5) {
                perm.shuffle(&mut rng);
                sets.extend(perm.chunks(3).map(|c| [c[0], c[1], c[2]]));
            }
            for _ in 0..rng.random_range(1..=k + 2) {
                perm.shuffle(&mut rng);
                sets.push([perm[0], perm[1], perm[2]]);
            }
            for s in &mut sets {
                s.sort_unstable();
            }
            sets.sort_unstable();
            sets.dedup();
            Ok(SourceInstance::X3c(X3CInstance::new(k, sets)?))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn verify_sweep(
    kind: KindArg,
    source: &SourceArgs,
    sweep: &SweepArgs,
    seed: u64,
    config: &SolverConfig,
    format: Format,
    out: &mut impl Write,
) -> Result<bool> {
    let rk = reduction_kind(kind, source)?;
    let mode = mode(source);
    let sources: Vec<SourceInstance> = match kind {
        KindArg::PartitionPrime | KindArg::BordaMax | KindArg::BordaRoundDown => {
            partition_sweep(sweep.t_max, sweep.val_max)
                .into_iter()
                .map(SourceInstance::Partition)
                .collect()
        }
        KindArg::BordaAvg | KindArg::Copeland if source.from_partition => partition_sweep(sweep.t_max, sweep.val_max)
            .iter()
            .map(|s| partition_to_partition_prime(s).map(SourceInstance::PartitionPrime))
            .collect::<Result<_, _>>()?,
        KindArg::BordaAvg | KindArg::Copeland => partition_prime_sweep(sweep.t_max, sweep.val_max, sweep.extra)
            .into_iter()
            .map(SourceInstance::PartitionPrime)
            .collect(),
        KindArg::X3cCcav => sample_x3c(source.k.unwrap_or(4), sweep.families, seed)?,
    };
    let (mut agree, mut errors) = (0usize, 0usize);
    for batch in sources.chunks(SWEEP_BATCH) {
        let reports = tievote::par::map(batch, config.parallel, |s| {
            let report = verify_reduction(&rk, s, mode, config)?;
            replay_target(&report)?;
            Ok::<_, anyhow::Error>(report)
        });
        for (src, report) in batch.iter().zip(reports) {
            match report {
                Ok(r) => {
                    agree += usize::from(r.agree);
                    let text = format!(
                        "{} | source {} | target {} | {}\n",
                        r.source,
                        yes_no(r.source_answer),
                        yes_no(r.target_answer),
                        if r.agree { "agree" } else { "DISAGREE" }
                    );
                    emit(out, format, &text, summary_record(&r))?;
                }
                Err(e) => {
                    errors += 1;
                    let text = format!("{src} | error: {e:#}\n");
                    emit(
                        out,
                        format,
                        &text,
                        json!({ "kind": rk.to_string(), "source": src.to_string(), "error": format!("{e:#}") }),
                    )?;
                }
            }
        }
    }
    let total = sources.len();
    let text = format!("{rk}: {agree}/{total} agree, {errors} errors\n");
    emit(
        out,
        format,
        &text,
        json!({ "summary": { "kind": rk.to_string(), "instances": total, "agree": agree, "errors": errors } }),
    )?;
    Ok(agree == total)
}

fn realize(text: &str, format: Format, out: &mut impl Write) -> Result<bool> {
    let profile = parse_profile(text).context("profile")?;
    let c = profile.candidates();
    let [v1, v2] = profile.voters() else {
        bail!("realize takes exactly two voters, found {}", profile.len());
    };
    if v1.weight != 1 || v2.weight != 1 {
        bail!("realize takes two unit-weight voters");
    }
    let (t1, t2) = realize_two_total_orders(&v1.order, &v2.order)?;
    let (t1, t2) = (Order::Ranked(t1), Order::Ranked(t2));
    let before = pair_majority_graph(c, &v1.order, &v2.order)?.edge_set();
    let after = pair_majority_graph(c, &t1, &t2)?.edge_set();
    if before != after {
        bail!("internal error: the realized orders change the majority graph");
    }
    let edges = |e: &[(usize, usize)]| {
        e.iter()
            .map(|&(a, b)| format!("{}->{}", c.name(a), c.name(b)))
            .collect::<Vec<_>>()
    };
    let (s1, s2) = (order_to_string(&t1, c), order_to_string(&t2, c));
    let text = format!(
        "v1: {s1}\nv2: {s2}\ninput edges: {}\noutput edges: {}\n",
        edges(&before).join(" "),
        edges(&after).join(" ")
    );
    emit(
        out,
        format,
        &text,
        json!({ "command": "realize", "v1": s1, "v2": s2, "input_edges": edges(&before), "output_edges": edges(&after) }),
    )?;
    Ok(true)
}

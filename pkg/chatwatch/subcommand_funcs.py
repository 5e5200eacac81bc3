import json
import math
import sys
from dataclasses import asdict, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from chatwatch.cwlogger import logger
from chatwatch.modules.adapters import (
    SyntheticConfig,
    SyntheticConfigError,
    adapt_cc_threads,
    adapt_dota_file,
    apply_annotations,
    build_agreement_table,
    build_annotation_sets,
    fleiss_kappa,
    generate_synthetic,
    read_annotation_records,
    read_comments,
    split_corpus,
)
from chatwatch.modules.chat import (
    MatchSession,
    get_label_space,
    read_chat_lines,
    read_predictions,
    read_sessions,
    write_chat_lines,
    write_sessions,
)
from chatwatch.modules.context import Scope
from chatwatch.modules.evaluation import (
    DEFAULT_PRECISIONS,
    OperatingPoint,
    ScoredLine,
    bins_table,
    class_recall_at_threshold,
    evaluate_scored,
    history_length_report,
    intercept_rate,
    metrics_table,
    operating_points,
    per_class_curves,
    pr_curve,
    records_table,
    score_sessions,
    summarize_reports,
    to_json,
    transfer_matrix,
    write_curve_csv,
    write_json,
)
from chatwatch.modules.model import SPECIAL_TOKENS, Checkpoint, Predictor, Tokenizer, train
from chatwatch.modules.moderation import load_report_file, moderate, render_summary, send_report
from chatwatch.modules.services import (
    ConfigError,
    RunConfig,
    StreamPredictor,
    load_mapping,
    load_run_config,
    predict_stream,
)

REPORT_TITLE = "ChatWatch moderation report"
TRAIN_TITLE = "ChatWatch training finished"


def _tokenizer(vocab: Optional[Path]) -> Tokenizer:
    # Adapters only count tokens; a bare special-token vocabulary is enough.
    if vocab is not None:
        return Tokenizer.load(vocab)
    return Tokenizer(list(SPECIAL_TOKENS))


def _corpus(config: RunConfig) -> List[MatchSession]:
    corpus = Path(config.paths.corpus)
    if not corpus.is_file():
        raise ConfigError(
            f"paths.corpus: no such file {corpus}",
            source=str(config.source) if config.source else None,
        )
    return read_sessions(corpus, config.context.team_size, config.context.num_teams)


def _train_seed(
    config: RunConfig,
    sessions: Sequence[MatchSession],
    seed: int,
    init: Optional[Checkpoint],
    tokenizer: Optional[Tokenizer],
) -> Dict[str, Any]:
    label_space = get_label_space(config.train.label_space)
    split = split_corpus(sessions, config.train.split, seed)
    logger.info(
        f"Seed {seed}: {len(split.train)}/{len(split.validation)}/{len(split.test)} "
        "train/validation/test matches"
    )
    result = train(
        split,
        config.model,
        config.train,
        config.context,
        seed=seed,
        label_space=label_space,
        init_checkpoint=init,
        tokenizer=tokenizer,
    )
    scored = score_sessions(Predictor(result.checkpoint), split.test, config.train.batch_size)
    reports = evaluate_scored(scored)
    logger.info(f"Seed {seed} test metrics:\n{metrics_table(reports)}")
    return {
        "seed": seed,
        "result": result,
        "reports": reports,
    }


def train_cmd(args: Dict[str, Any]) -> int:
    """
    Train one model per seed on a fresh 60/20/20 match split and write:

        <output_dir>/seed-<n>.pt   every seed's best checkpoint
        <output_dir>/model.pt      the seed with the best validation F1
        <output_dir>/metrics.json  per-seed test metrics plus mean ± std

    Ex:
        train configs/synthetic.yaml
        train configs/synthetic.yaml --seeds 1,2 --output-dir runs/ablation
    """
    config = load_run_config(args["config"])
    if args.get("seeds"):
        config = config.with_seeds(args["seeds"])
    if args.get("output_dir"):
        config = replace(config, paths=replace(config.paths, output_dir=args["output_dir"]))

    sessions = _corpus(config)
    init = (
        Checkpoint.load(config.train.init_checkpoint) if config.train.init_checkpoint else None
    )
    tokenizer = Tokenizer.load(config.paths.vocab) if config.paths.vocab else None
    out_dir = Path(config.paths.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    runs = [_train_seed(config, sessions, seed, init, tokenizer) for seed in config.train.seeds]
    for run in runs:
        run["result"].checkpoint.save(out_dir / f"seed-{run['seed']}.pt")
    best = max(runs, key=lambda r: r["result"].best_val_f1)
    best["result"].checkpoint.save(out_dir / "model.pt")

    aggregate = {
        level: summarize_reports([r["reports"][level] for r in runs]) for level in ("token", "line")
    }
    payload = {
        "config": {
            "model": config.model.to_dict(),
            "train": asdict(config.train),
            "context": config.context.to_dict(),
        },
        "seeds": [
            {
                "seed": r["seed"],
                "best_epoch": r["result"].best_epoch,
                "best_val_f1": r["result"].best_val_f1,
                "epochs": [asdict(h) for h in r["result"].history],
                "test": {level: rep.to_dict() for level, rep in r["reports"].items()},
            }
            for r in runs
        ],
        "aggregate": {level: s.to_dict() for level, s in aggregate.items()},
        "best_seed": best["seed"],
    }
    metrics_path = write_json(payload, out_dir / "metrics.json")
    lines = [
        f"{level} F1 over {summary.n_runs} seed(s): {summary.formatted('f1')}"
        for level, summary in aggregate.items()
    ]
    for line in lines:
        logger.info(line)
    logger.info(f"Wrote {metrics_path} and {len(runs) + 1} checkpoint(s) to {out_dir}")
    if config.notify.urls:
        send_report(config.notify.urls, TRAIN_TITLE, "\n".join([str(out_dir), *lines]))
    return 0


def predict_cmd(args: Dict[str, Any]) -> int:
    """
    Score a chat JSONL stream line by line; one prediction record is written
    per input line as soon as it is read. A record ``{"match_id": ...,
    "end_of_match": true}`` drops that match's history.

    Ex:
        predict runs/model.pt < chat.jsonl > predictions.jsonl
        predict runs/model.pt --input chat.jsonl --scope team --idle-budget 5000
    """
    checkpoint = Checkpoint.load(args["checkpoint"])
    predictor = StreamPredictor(checkpoint, args.get("scope"), args.get("idle_budget"))

    source = args.get("input") or "-"
    output = args.get("output") or "-"
    stream = sys.stdin if source == "-" else open(source, encoding="utf-8")
    out = sys.stdout if output == "-" else open(output, "w", encoding="utf-8")
    try:
        n = predict_stream(predictor, stream, out, "<stdin>" if source == "-" else source)
    finally:
        if stream is not sys.stdin:
            stream.close()
        if out is not sys.stdout:
            out.close()
    logger.info(f"Scored {n} lines; {predictor.active_matches} matches still open")
    return 0


def _curve_sections(
    scored: Sequence[ScoredLine],
    calibration: Optional[Sequence[ScoredLine]],
    precisions: Sequence[float],
    curves_dir: Optional[Path],
) -> Dict[str, Any]:
    scores = [s.prediction.score for s in scored]
    gold_classes = [s.gold_class for s in scored]
    if not any(c.is_toxic for c in gold_classes):
        logger.warning("No toxic lines in the evaluated corpus; every recall is 0")

    curve = pr_curve(scores, [c.is_toxic for c in gold_classes])
    if calibration is not None:
        cal_curve = pr_curve(
            [s.prediction.score for s in calibration],
            [s.gold_class.is_toxic for s in calibration],
        )
    else:
        logger.warning("No calibration corpus; thresholds are chosen on the evaluated corpus")
        cal_curve = curve
    points = operating_points(cal_curve, precisions)

    at_points = []
    for pt in points:
        recall = class_recall_at_threshold(scores, gold_classes, pt.threshold)
        at_points.append(
            {
                "target_precision": pt.target_precision,
                "threshold": pt.threshold if pt.reachable else None,
                "intercept_rate": intercept_rate(scores, pt.threshold),
                "class_recall": {
                    c.value: {"recall": r, "support": n} for c, (r, n) in recall.items()
                },
            }
        )

    class_curves = per_class_curves([s.class_scores for s in scored], gold_classes)
    if curves_dir is not None:
        write_curve_csv(curve, curves_dir / "pr_binary.csv")
        for c, class_curve in class_curves.items():
            write_curve_csv(class_curve, curves_dir / f"pr_{c.value}.csv")

    return {
        "binary_curve": {
            "average_precision": curve.average_precision,
            "n_positive": curve.n_positive,
            "n_total": curve.n_total,
        },
        "operating_points": [pt.to_dict() for pt in points],
        "at_operating_points": at_points,
        "class_average_precision": {c.value: cc.average_precision for c, cc in class_curves.items()},
    }


def eval_cmd(args: Dict[str, Any]) -> int:
    """
    Evaluate a checkpoint on a labeled corpus: weighted and binary metrics
    at token and line level, operating points for the requested precisions
    (chosen on ``--calibration`` when given), per-class curves and
    history-length bins.

    Ex:
        eval runs/model.pt test.jsonl --calibration validation.jsonl --out runs/eval.json
    """
    checkpoint = Checkpoint.load(args["checkpoint"])
    ctx = checkpoint.context
    predictor = Predictor(checkpoint, args.get("scope"))
    batch_size = args.get("batch_size") or 32

    sessions = read_sessions(args["corpus"], ctx.team_size, ctx.num_teams)
    scored = score_sessions(predictor, sessions, batch_size)
    calibration = None
    if args.get("calibration"):
        cal_sessions = read_sessions(args["calibration"], ctx.team_size, ctx.num_teams)
        calibration = score_sessions(predictor, cal_sessions, batch_size)

    reports = evaluate_scored(scored)
    binary = evaluate_scored(scored, binary=True)
    bins = history_length_report(
        [s.prediction for s in scored],
        [s.gold_class for s in scored],
        sessions,
        args.get("history_scope") or Scope.MODERATOR,
    )

    out_path = Path(args.get("out") or "eval.json")
    curves_dir = out_path.parent / "curves" if args.get("write_curves") else None
    payload: Dict[str, Any] = {
        "checkpoint": str(args["checkpoint"]),
        "corpus": str(args["corpus"]),
        "scope": predictor.scope.value,
        "label_space": predictor.label_space.name,
        "lines": len(scored),
        "metrics": {level: r.to_dict() for level, r in reports.items()},
        "binary_metrics": {level: r.to_dict() for level, r in binary.items()},
        "history_bins": [b.to_dict() for b in bins],
    }
    payload.update(
        _curve_sections(scored, calibration, args.get("precision") or DEFAULT_PRECISIONS, curves_dir)
    )
    write_json(payload, out_path)

    tables = {f"{level}": r for level, r in reports.items()}
    tables.update({f"{level} (binary)": r for level, r in binary.items()})
    logger.info(f"Evaluated {len(scored)} labeled lines:\n{metrics_table(tables)}")
    logger.info(f"History-length bins:\n{bins_table(bins)}")
    if payload.get("operating_points"):
        logger.info(f"Operating points:\n{records_table(payload['operating_points'])}")
    logger.info(f"Wrote {out_path}")
    return 0


def adapt_cmd(args: Dict[str, Any]) -> int:
    """
    Convert an external corpus to chat JSONL.

    Ex:
        adapt dota sentences.jsonl dota_chat.jsonl
        adapt cc comments.csv cc_chat.jsonl
        adapt annotations annotations.jsonl labeled.jsonl --chat raw_chat.jsonl
    """
    tokenizer = _tokenizer(args.get("vocab"))
    source, output = args["source"], args["output"]

    if source == "dota":
        sessions = adapt_dota_file(args["input"], tokenizer, args.get("team_size") or 5)
        n = write_sessions(sessions, output)
    elif source == "cc":
        sessions = adapt_cc_threads(read_comments(args["input"]), tokenizer)
        n = write_sessions(sessions, output)
    else:
        if not args.get("chat"):
            raise ConfigError("adapt annotations requires --chat")
        lines = read_chat_lines(args["chat"])
        sets = build_annotation_sets(
            lines, read_annotation_records(args["input"]), tokenizer, args.get("annotators") or 3
        )
        n = write_chat_lines(apply_annotations(lines, sets), output)
        kappa = fleiss_kappa(build_agreement_table(sets))
        logger.info(f"Fleiss kappa over {len(sets)} annotated lines: {kappa:.4f}")

    logger.info(f"Wrote {n} chat lines to {output}")
    return 0


def synth_cmd(args: Dict[str, Any]) -> int:
    """
    Generate a synthetic labeled corpus.

    Ex:
        synth synthetic.jsonl --config configs/synth_context.yaml --seed 3
        synth synthetic.jsonl --rules keyword,context --matches 200
    """
    values = load_mapping(args["config"]) if args.get("config") else {}
    if args.get("matches"):
        values["n_matches"] = args["matches"]
    if args.get("rules"):
        values["rules"] = list(args["rules"])
    try:
        config = SyntheticConfig.from_dict(values)
    except SyntheticConfigError as e:
        raise ConfigError(str(e), source=str(args["config"]) if args.get("config") else None)

    sessions = generate_synthetic(config, args.get("seed") or 0)
    n = write_sessions(sessions, args["output"])
    logger.info(f"Wrote {len(sessions)} matches ({n} lines) to {args['output']}")
    return 0


def _calibrated_thresholds(path: Path, precisions: Sequence[float]) -> List[OperatingPoint]:
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)
    available = [OperatingPoint.from_dict(p) for p in payload.get("operating_points") or []]
    chosen = []
    for p in precisions:
        match = [pt for pt in available if math.isclose(pt.target_precision, p)]
        if not match:
            raise ConfigError(f"no operating point for precision {p:g}", source=str(path))
        chosen.append(match[0])
    return chosen


def moderate_cmd(args: Dict[str, Any]) -> int:
    """
    Cross-reference flagged players with player reports at each threshold.

    Ex:
        moderate predictions.jsonl reports.json --calibration runs/eval.json
        moderate predictions.jsonl reports.json --threshold 0.8 --notify mailto://...
    """
    predictions = read_predictions(args["predictions"])
    report = load_report_file(args["reports"])
    min_avg = args.get("min_avg_flagged")
    min_avg = 5.0 if min_avg is None else min_avg

    if args.get("threshold"):
        settings = [(t, None) for t in args["threshold"]]
    else:
        points = _calibrated_thresholds(
            Path(args["calibration"]), args.get("precision") or DEFAULT_PRECISIONS
        )
        settings = [(pt.threshold, pt.target_precision) for pt in points]

    blocks = [moderate(predictions, report, t, p, min_avg) for t, p in settings]
    payload = {"blocks": [b.to_dict() for b in blocks]}
    if args.get("out"):
        write_json(payload, args["out"])
        logger.info(f"Wrote {args['out']}")
    else:
        sys.stdout.write(to_json(payload) + "\n")

    summary = render_summary(blocks)
    logger.info(f"Moderation summary:\n{summary}")
    if args.get("notify"):
        send_report(args["notify"], REPORT_TITLE, summary)
    return 0


def transfer_cmd(args: Dict[str, Any]) -> int:
    """
    Binary F1 of every checkpoint on every corpus.

    Ex:
        transfer --checkpoint shooter=runs/shooter/model.pt arena=runs/arena/model.pt \\
                 --corpus shooter=shooter_test.jsonl arena=arena_test.jsonl
    """
    checkpoints = {name: Checkpoint.load(path) for name, path in args["checkpoint"]}
    team_size = args.get("team_size") or 5
    num_teams = args.get("num_teams") or 2
    corpora = {name: read_sessions(path, team_size, num_teams) for name, path in args["corpus"]}

    matrix = transfer_matrix(checkpoints, corpora, args.get("level") or "token")
    logger.info(f"Transfer F1 ({matrix.level}):\n{matrix.to_frame().to_string()}")
    if args.get("out"):
        write_json(matrix.to_dict(), args["out"])
    else:
        sys.stdout.write(to_json(matrix.to_dict()) + "\n")
    return 0

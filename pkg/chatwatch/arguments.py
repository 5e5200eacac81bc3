from pathlib import Path

from chatwatch.modules.evaluation import DEFAULT_PRECISIONS
from chatwatch.modules.moderation import DEFAULT_MIN_AVG_FLAGGED

from .arg_funcs import (
    name_list,
    named_path,
    positive_int,
    precision_list,
    scope,
    seed_list,
    threshold_list,
)
from .convenience_classes import Argument, ExclusiveArgGroup, Subcommand
from .subcommand_funcs import (
    adapt_cmd,
    eval_cmd,
    moderate_cmd,
    predict_cmd,
    synth_cmd,
    train_cmd,
    transfer_cmd,
)

# Shared arguments
checkpoint_arg = Argument(
    flags=["checkpoint"],
    kwargs={"type": Path, "help": "Checkpoint file written by train"},
)
scope_arg = Argument(
    flags=["--scope"],
    kwargs={
        "type": scope,
        "default": None,
        "help": "History scope (no-history, personal, team, global, moderator); "
        "defaults to the checkpoint's",
    },
)
precision_arg = Argument(
    flags=["-p", "--precision"],
    kwargs={
        "type": precision_list,
        "default": DEFAULT_PRECISIONS,
        "help": "Comma-separated target precisions, e.g. 0.90,0.99,0.999",
    },
)
out_arg = Argument(
    flags=["-o", "--out"],
    kwargs={"type": Path, "default": None, "help": "Output JSON file"},
)
team_size_arg = Argument(
    flags=["--team-size"],
    kwargs={"type": positive_int, "default": 5, "help": "Players per team (default 5)"},
)

# train [config] --seeds 1,2 --output-dir DIR
TRAIN = Subcommand(
    func=train_cmd,
    name="train",
    argsets=[
        Argument(flags=["config"], kwargs={"type": Path, "help": "YAML run configuration"}),
        Argument(
            flags=["-s", "--seeds"],
            kwargs={
                "type": seed_list,
                "default": None,
                "help": "Comma-separated seeds; overrides the config and TOXBUSTER_SEED",
            },
        ),
        Argument(
            flags=["--output-dir"],
            kwargs={"type": Path, "default": None, "help": "Overrides paths.output_dir"},
        ),
    ],
    kwargs={"help": "Train one model per seed and write checkpoints plus metrics"},
)

# predict [checkpoint] --input FILE --output FILE --scope SCOPE --idle-budget N
PREDICT = Subcommand(
    func=predict_cmd,
    name="predict",
    argsets=[
        checkpoint_arg,
        Argument(
            flags=["-i", "--input"],
            kwargs={"default": "-", "help": "Chat JSONL stream (default stdin)"},
        ),
        Argument(
            flags=["--output"],
            kwargs={"default": "-", "help": "Prediction JSONL (default stdout)"},
        ),
        scope_arg,
        Argument(
            flags=["--idle-budget"],
            kwargs={
                "type": positive_int,
                "default": None,
                "help": "Forget a match after this many stream lines without one of its own",
            },
        ),
    ],
    kwargs={"help": "Score a chat stream line by line"},
)

# eval [checkpoint] [corpus] --calibration FILE --precision ... --out FILE
EVAL = Subcommand(
    func=eval_cmd,
    name="eval",
    argsets=[
        checkpoint_arg,
        Argument(flags=["corpus"], kwargs={"type": Path, "help": "Labeled chat JSONL"}),
        Argument(
            flags=["-c", "--calibration"],
            kwargs={
                "type": Path,
                "default": None,
                "help": "Labeled chat JSONL used to choose the operating thresholds",
            },
        ),
        precision_arg,
        scope_arg,
        Argument(
            flags=["--history-scope"],
            kwargs={
                "type": scope,
                "default": None,
                "help": "Scope used to count history lines for the cold-start bins "
                "(default moderator)",
            },
        ),
        Argument(
            flags=["--batch-size"],
            kwargs={"type": positive_int, "default": 32, "help": "Lines per forward pass"},
        ),
        Argument(
            flags=["--write-curves"],
            kwargs={
                "action": "store_true",
                "help": "Write PR curve CSVs to a curves/ directory next to --out",
            },
        ),
        out_arg,
    ],
    kwargs={"help": "Evaluate a checkpoint on a labeled corpus"},
)

# adapt {dota,cc,annotations} [input] [output]
ADAPT = Subcommand(
    func=adapt_cmd,
    name="adapt",
    argsets=[
        Argument(
            flags=["source"],
            kwargs={
                "choices": ["dota", "cc", "annotations"],
                "help": "Input format",
            },
        ),
        Argument(flags=["input"], kwargs={"type": Path, "help": "Source file"}),
        Argument(flags=["output"], kwargs={"type": Path, "help": "Chat JSONL to write"}),
        Argument(
            flags=["--chat"],
            kwargs={
                "type": Path,
                "default": None,
                "help": "Unlabeled chat JSONL the annotations refer to (annotations only)",
            },
        ),
        Argument(
            flags=["-k", "--annotators"],
            kwargs={"type": positive_int, "default": 3, "help": "Annotators per line"},
        ),
        Argument(
            flags=["--vocab"],
            kwargs={
                "type": Path,
                "default": None,
                "help": "Vocabulary file; only its tokenization rules matter here",
            },
        ),
        team_size_arg,
    ],
    kwargs={"help": "Convert an external corpus to chat JSONL"},
)

# synth [output] --config FILE --seed N --matches N --rules keyword,context
SYNTH = Subcommand(
    func=synth_cmd,
    name="synth",
    argsets=[
        Argument(flags=["output"], kwargs={"type": Path, "help": "Chat JSONL to write"}),
        Argument(
            flags=["--config"],
            kwargs={"type": Path, "default": None, "help": "YAML generator settings"},
        ),
        Argument(flags=["--seed"], kwargs={"type": int, "default": 0, "help": "Generator seed"}),
        Argument(
            flags=["--matches"],
            kwargs={"type": positive_int, "default": None, "help": "Number of matches"},
        ),
        Argument(
            flags=["--rules"],
            kwargs={
                "type": name_list,
                "default": None,
                "help": "Comma-separated labeling rules: keyword, context, speaker",
            },
        ),
    ],
    kwargs={"help": "Generate a synthetic labeled corpus"},
)

# moderate [predictions] [reports] (--calibration FILE | --threshold T) ...
MODERATE = Subcommand(
    func=moderate_cmd,
    name="moderate",
    argsets=[
        Argument(
            flags=["predictions"], kwargs={"type": Path, "help": "Prediction JSONL from predict"}
        ),
        Argument(flags=["reports"], kwargs={"type": Path, "help": "Report-sets JSON"}),
        ExclusiveArgGroup(
            args=[
                Argument(
                    flags=["-c", "--calibration"],
                    kwargs={"type": Path, "help": "eval JSON holding operating points"},
                ),
                Argument(
                    flags=["-t", "--threshold"],
                    kwargs={"type": threshold_list, "help": "Comma-separated score thresholds"},
                ),
            ],
            required=True,
        ),
        precision_arg,
        Argument(
            flags=["--min-avg-flagged"],
            kwargs={
                "type": float,
                "default": DEFAULT_MIN_AVG_FLAGGED,
                "help": "Proactive bound on flagged lines per match (inclusive)",
            },
        ),
        Argument(
            flags=["--notify"],
            kwargs={
                "nargs": "+",
                "default": None,
                "help": "Apprise URLs that receive the summary",
            },
        ),
        out_arg,
    ],
    kwargs={"help": "Cross-reference flagged players with player reports"},
)

# transfer --checkpoint NAME=PATH ... --corpus NAME=PATH ...
TRANSFER = Subcommand(
    func=transfer_cmd,
    name="transfer",
    argsets=[
        Argument(
            flags=["--checkpoint"],
            kwargs={
                "type": named_path,
                "nargs": "+",
                "required": True,
                "help": "NAME=PATH checkpoints (rows)",
            },
        ),
        Argument(
            flags=["--corpus"],
            kwargs={
                "type": named_path,
                "nargs": "+",
                "required": True,
                "help": "NAME=PATH labeled corpora (columns)",
            },
        ),
        Argument(
            flags=["--level"],
            kwargs={"choices": ["token", "line"], "default": "token", "help": "Metric level"},
        ),
        team_size_arg,
        Argument(
            flags=["--num-teams"],
            kwargs={"type": positive_int, "default": 2, "help": "Teams per match (default 2)"},
        ),
        out_arg,
    ],
    kwargs={"help": "Cross-corpus binary F1 matrix"},
)

CLI = [TRAIN, PREDICT, EVAL, ADAPT, SYNTH, MODERATE, TRANSFER]

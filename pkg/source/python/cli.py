"""Command-line entry point.

Exit codes: 0 success, 1 input or usage error, 2 internal error.
"""
import argparse
import logging
import os
import sys

from .base import registry
from .base_info import CORPUS_ROOT_ENV, load_settings, version
from .classifier import TrainConfig, save_model
from .errors import CorpusError, DataError, DivisionByZero, EmptyData, MalformedModel, UsageError
from .experiment import (BoundInputs, SplitSpec, feature_set_table, fit_fold, replication_table,
                         run_experiment, run_subset_experiment, signalled_accuracy_bound, signalled_proportion,
                         split_dataset, subset_table)
from .features import build_instances
from .file_io import File
from .report import (FORMATS, render_bound, render_link_counts, render_phrase_stats, render_report,
                     render_table, to_json)
from .stats import group_corpus, signal_phrase_stats, tlink_counts
from .synth import SynthSpec, write_corpus
from .timeml import DIALECTS, load_corpus

logger = logging.getLogger(__name__)

INPUT_ERRORS = (CorpusError, DataError, UsageError, DivisionByZero, MalformedModel)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _output_options(default_format):
    parent = _Parser(add_help=False)
    parent.add_argument("--format", choices=FORMATS, default=default_format,
                        help=f"report format (default: {default_format})")
    parent.add_argument("--output", help="write the report to this file instead of stdout")
    parent.add_argument("-v", "--verbose", action="count", default=0, help="more logging (-v info, -vv debug)")
    parent.add_argument("--config", help="settings file (default: conf/settings.json)")
    return parent


def _corpus_options():
    parent = _Parser(add_help=False)
    parent.add_argument("paths", nargs="*",
                        help=f"TimeML files or directories (default: ${CORPUS_ROOT_ENV})")
    parent.add_argument("--dialect", choices=DIALECTS, default="auto", help="TLINK attribute dialect (default: auto)")
    return parent


def _experiment_options():
    parent = _Parser(add_help=False)
    parent.add_argument("--features", choices=registry.names(), default="base",
                        help="feature set (default: base)")
    parent.add_argument("--seed", type=int, help="split seed (default from settings: 0)")
    parent.add_argument("--folds", type=int, help="cross-validation folds (default from settings: 10)")
    parent.add_argument("--eval-fraction", type=float, help="holdout evaluation share (default from settings: 1/3)")
    parent.add_argument("--l2", type=float, help="L2 penalty lambda (default from settings: 0.1)")
    parent.add_argument("--max-iters", type=int, help="training iteration cap (default from settings: 500)")
    parent.add_argument("--tol", type=float, help="relative objective change to stop at (default from settings: 1e-7)")
    parent.add_argument("--breakdown", action="store_true",
                        help="add signalled/unsignalled accuracy of the same predictions")
    return parent


def build_parser():
    parser = _Parser(prog="app.py", description="Temporal link classification with signal features.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {version}")
    commands = parser.add_subparsers(dest="command", required=True)

    text_out, tsv_out, json_out = _output_options("text"), _output_options("tsv"), _output_options("json")
    corpus, experiment = _corpus_options(), _experiment_options()

    p = commands.add_parser("validate", parents=[text_out, corpus], help="parse a corpus and list problem files")
    p.set_defaults(handler=cmd_validate)

    stats = commands.add_parser("stats", help="corpus statistics").add_subparsers(dest="stats_command", required=True)
    p = stats.add_parser("signals", parents=[tsv_out, corpus], help="signal phrase likelihood table")
    p.add_argument("--min-freq", type=int, help="minimum corpus frequency (default from settings: 2)")
    p.set_defaults(handler=cmd_stats_signals)
    p = stats.add_parser("links", parents=[tsv_out, corpus], help="TLINK and SIGNAL counts per input path")
    p.set_defaults(handler=cmd_stats_links)

    run = commands.add_parser("run", help="train and evaluate").add_subparsers(dest="run_command", required=True)
    p = run.add_parser("xv", parents=[json_out, corpus, experiment], help="k-fold cross-validation")
    p.set_defaults(handler=cmd_run, split_mode="xv")
    p = run.add_parser("split", parents=[json_out, corpus, experiment], help="single train/evaluation split")
    p.add_argument("--save-model", help="also store the model trained on the training side")
    p.set_defaults(handler=cmd_run, split_mode="holdout")
    p = run.add_parser("subset", parents=[json_out, corpus, experiment],
                       help="train and evaluate inside the signalled or unsignalled links only")
    p.add_argument("--which", choices=("signalled", "unsignalled"), required=True)
    p.add_argument("--split", choices=("xv", "split"), default="xv", help="evaluation protocol (default: xv)")
    p.set_defaults(handler=cmd_run_subset)
    p = run.add_parser("table", parents=[text_out, corpus, experiment], help="reproduce a results table layout")
    p.add_argument("table", type=int, choices=(3, 4, 5, 6),
                   help="3: replication, 4: feature sets, 5: subsets (split), 6: subsets (xv)")
    p.add_argument("--train-on-all", action="store_true",
                   help="tables 5/6: train on all links and break predictions down by subset")
    p.set_defaults(handler=cmd_run_table)

    p = commands.add_parser("bound", parents=[text_out, corpus],
                            help="signalled-link accuracy implied by overall accuracy")
    p.add_argument("--p", type=float, required=True, help="overall accuracy with signal features")
    p.add_argument("--pn", type=float, required=True, help="accuracy without signal features")
    p.add_argument("--s", type=float, help="proportion of signalled links (default: measured on the corpus)")
    p.set_defaults(handler=cmd_bound)

    p = commands.add_parser("synth", parents=[text_out], help="write a synthetic TimeML corpus")
    p.add_argument("--docs", type=int, help="number of documents (default from settings: 300)")
    p.add_argument("--seed", type=int, help="generator seed (default from settings: 1)")
    p.add_argument("--signal-fraction", type=float, help="share of signalled links (default from settings: 0.5)")
    p.add_argument("--noise", type=float, help="lexicon noise rate (default from settings: 0.1)")
    p.add_argument("--links-per-doc", type=int, help="event-event links per document (default from settings: 10)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(handler=cmd_synth)
    return parser


def configure_logging(verbosity):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _pick(value, settings, section, key):
    return settings[section][key] if value is None else value


def corpus_paths(args):
    paths = list(args.paths)
    if not paths and os.environ.get(CORPUS_ROOT_ENV):
        paths = [p for p in os.environ[CORPUS_ROOT_ENV].split(os.pathsep) if p]
    if not paths:
        raise UsageError(f"no corpus paths given and ${CORPUS_ROOT_ENV} is not set")
    return paths


def load_instances(args):
    documents, issues = load_corpus(corpus_paths(args), args.dialect)
    for issue in issues:
        logger.warning("%s: %s", issue.path, issue.message)
    instances = build_instances(documents)
    if not instances:
        raise EmptyData("the corpus holds no event-event TLINKs")
    return instances


def train_config(args, settings):
    return TrainConfig(
        l2_lambda=float(_pick(args.l2, settings, "train", "l2_lambda")),
        max_iters=int(_pick(args.max_iters, settings, "train", "max_iters")),
        tol=float(_pick(args.tol, settings, "train", "tol")),
        seed=int(_pick(args.seed, settings, "train", "seed")),
    )


def split_spec(args, settings, mode):
    return SplitSpec(
        mode=mode,
        folds=int(_pick(args.folds, settings, "split", "folds")),
        eval_fraction=float(_pick(args.eval_fraction, settings, "split", "eval_fraction")),
        seed=int(_pick(args.seed, settings, "split", "seed")),
    )


def cmd_validate(args, settings):
    documents, issues = load_corpus(corpus_paths(args), args.dialect)
    if args.format == "json":
        text = to_json({"documents": len(documents), "issues": [vars(i) for i in issues]})
    else:
        sep = "\t" if args.format == "tsv" else ": "
        lines = [f"{issue.path}{sep}{issue.message}" for issue in issues]
        lines.append(f"{len(documents)} documents parsed, {len(issues)} issues")
        text = "\n".join(lines) + "\n"
    return text, 1 if issues else 0


def cmd_stats_signals(args, settings):
    documents, _ = load_corpus(corpus_paths(args), args.dialect)
    min_freq = int(_pick(args.min_freq, settings, "stats", "min_freq"))
    return render_phrase_stats(signal_phrase_stats(documents, min_freq), args.format), 0


def cmd_stats_links(args, settings):
    groups, _ = group_corpus(corpus_paths(args), args.dialect)
    return render_link_counts(tlink_counts(groups), args.format), 0


def cmd_run(args, settings):
    data = load_instances(args)
    spec = split_spec(args, settings, args.split_mode)
    cfg = train_config(args, settings)
    report = run_experiment(data, spec, args.features, cfg, breakdown=args.breakdown)
    if getattr(args, "save_model", None):
        model, _ = fit_fold(split_dataset(data, spec)[0].train, args.features, cfg)
        save_model(model, args.save_model)
        logger.info("saved model to %s", args.save_model)
    return render_report(report, args.format), 0


def cmd_run_subset(args, settings):
    data = load_instances(args)
    spec = split_spec(args, settings, "xv" if args.split == "xv" else "holdout")
    report = run_subset_experiment(data, spec, args.features, train_config(args, settings), args.which)
    return render_report(report, args.format), 0


def cmd_run_table(args, settings):
    data = load_instances(args)
    cfg = train_config(args, settings)
    folds = int(_pick(args.folds, settings, "split", "folds"))
    fraction = float(_pick(args.eval_fraction, settings, "split", "eval_fraction"))
    seed = int(_pick(args.seed, settings, "split", "seed"))
    if args.table == 3:
        table = replication_table(data, folds, fraction, seed, cfg)
    elif args.table == 4:
        table = feature_set_table(data, folds, fraction, seed, cfg)
    else:
        mode = "holdout" if args.table == 5 else "xv"
        table = subset_table(data, SplitSpec(mode, folds, fraction, seed), cfg, args.train_on_all)
    return render_table(table, args.format), 0


def cmd_bound(args, settings):
    s = args.s
    if s is None:
        s = signalled_proportion(load_instances(args))
        logger.info("measured signalled proportion s = %.4f", s)
    inputs = BoundInputs(args.p, args.pn, s)
    return render_bound(inputs, signalled_accuracy_bound(inputs), args.format), 0


def cmd_synth(args, settings):
    spec = SynthSpec.from_settings(settings, n_docs=args.docs, seed=args.seed, signal_fraction=args.signal_fraction,
                                   noise=args.noise, links_per_doc=args.links_per_doc)
    paths = write_corpus(spec, args.out)
    return f"wrote {len(paths)} documents to {args.out}\n", 0


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:
        # --help / --version
        return e.code if isinstance(e.code, int) else 0
    configure_logging(args.verbose)
    try:
        settings = load_settings(args.config)
        text, code = args.handler(args, settings)
        if args.output:
            File().save_file(args.output, text)
        else:
            sys.stdout.write(text)
    except INPUT_ERRORS as e:
        logger.debug("input error", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:
        logger.debug("internal error", exc_info=True)
        print(f"internal error: {e}", file=sys.stderr)
        return 2
    return code

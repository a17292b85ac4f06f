import json
import logging
import os
from copy import deepcopy

from .errors import UsageError

version = "1.0.0"

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "..", "conf", "settings.json")

CORPUS_ROOT_ENV = "TIMELINK_CORPUS_ROOT"

DEFAULTS = {
    "train": {"l2_lambda": 0.1, "max_iters": 500, "tol": 1e-7, "seed": 0},
    "split": {"folds": 10, "eval_fraction": 1 / 3, "seed": 0},
    "stats": {"min_freq": 2},
    "synth": {
        "docs": 300,
        "links_per_doc": 10,
        "seed": 1,
        "signal_fraction": 0.5,
        "noise": 0.1,
        "class_distribution": {
            "BEFORE": 0.6, "INCLUDES": 0.12, "SIMULTANEOUS": 0.12,
            "IBEFORE": 0.06, "BEGINS": 0.05, "ENDS": 0.05,
        },
        "signal_lexicon": {
            "before": "BEFORE", "after": "BEFORE", "until": "ENDS", "during": "INCLUDES",
            "while": "SIMULTANEOUS", "since": "BEGINS", "as soon as": "IBEFORE",
            "when": "SIMULTANEOUS",
        },
    },
}


def load_settings(path=None):
    """Read conf/settings.json and overlay it on DEFAULTS, one section at a time."""
    settings = deepcopy(DEFAULTS)
    path = path or DEFAULT_SETTINGS_PATH
    if not os.path.exists(path):
        logger.debug("no settings file at %s, using defaults", path)
        return settings
    with open(path, "r", encoding="utf-8") as f:
        try:
            loaded = json.load(f)
        except json.JSONDecodeError as e:
            raise UsageError(f"settings file {path} is not valid JSON: {e}") from e
    for section, values in loaded.items():
        if section not in settings or not isinstance(values, dict):
            logger.warning("ignoring unknown settings section %r in %s", section, path)
            continue
        settings[section].update(values)
    return settings

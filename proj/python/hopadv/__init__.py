"""Reasoning-chain adversarial attack toolkit for multi-hop QA datasets."""

import os

from ._core import (
    ConfigError,
    DataError,
    Example,
    Paragraph,
    annotate_text,
    answer_metrics,
    evaluate_files,
    load_dataset,
    mix_datasets,
    normalize_answer,
    run_cli,
    supporting_metrics,
    validate_example,
    write_dataset,
)

__all__ = [
    "ConfigError",
    "DataError",
    "Example",
    "Paragraph",
    "annotate_text",
    "answer_metrics",
    "attack_file",
    "default_resource_dir",
    "evaluate_files",
    "load_dataset",
    "mix_datasets",
    "normalize_answer",
    "run_cli",
    "supporting_metrics",
    "validate_example",
    "write_dataset",
]


def default_resource_dir():
    """Resource directory bundled with the package, or HOPADV_RESOURCES."""
    env = os.environ.get("HOPADV_RESOURCES")
    if env:
        return env
    return os.path.join(os.path.dirname(__file__), "resources")


def attack_file(in_path, out_path, seed, train=None, resources=None, **options):
    """Run the attack pipeline on a dataset file. Returns the exit code."""
    args = [
        "attack",
        "--in", str(in_path),
        "--out", str(out_path),
        "--seed", str(seed),
        "--resources", str(resources or default_resource_dir()),
    ]
    if train:
        args += ["--train", str(train)]
    for key, value in options.items():
        args += ["--" + key.replace("_", "-"), str(value)]
    return run_cli(args)

"""Access to the bundled character-table corpus."""

from __future__ import annotations

import os
from pathlib import Path

from .chartab import CharacterTable, load_table

ENV_VAR = "SCHARACTERS_CORPUS"

_HERE = Path(__file__).resolve().parent / "corpus"

SOLVABLE = ("C2", "C3", "S3", "D8", "Q8", "SL(2,3)", "S4")
SMALL = SOLVABLE + ("A5", "L2(7)")


def corpus_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else _HERE


def bundled_names() -> list[str]:
    return sorted(p.stem for p in corpus_dir().glob("*.json") if ".fusion" not in p.name)


def resolve(name_or_path) -> Path:
    """A file path as given, or the corpus file for a bare group name."""
    p = Path(name_or_path)
    if p.exists():
        return p
    for cand in (corpus_dir() / f"{name_or_path}.json", corpus_dir() / p.name):
        if cand.exists():
            return cand
    raise FileNotFoundError(f"no table file or bundled table named {name_or_path!r}")


def load(name_or_path) -> CharacterTable:
    return load_table(resolve(name_or_path))


def fusion_path(source: str, target: str) -> Path:
    return resolve(f"{source}--{target}.fusion")

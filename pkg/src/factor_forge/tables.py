"""Recorded exception lists, loaded from ``data/exceptions.json``.

The lists are data, not proofs: a hit in the multiplicity-one tables means
the instance is known to have no solution, while a hit in the open table
only means no construction is claimed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .calculus import ctype
from .model import GraphSpec


@lru_cache(maxsize=1)
def load_tables() -> dict:
    text = resources.files("factor_forge").joinpath("data/exceptions.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class TableHit:
    name: str
    table: str


def _types_match(entry: dict, t1, t2) -> bool:
    if ctype(entry["t1"]) != ctype(t1):
        return False
    return entry["t2"] is None or ctype(t2) in {ctype(t) for t in entry["t2"]}


def _orientations(t1, t2, alpha, gamma):
    yield t1, t2, alpha
    yield t2, t1, gamma


def hwp_known_unsolvable(n: int, t1, t2, alpha: int, gamma: int) -> TableHit | None:
    """Multiplicity-one HWP instance listed as having no solution."""
    for entry in load_tables()["hwp_known_unsolvable"]:
        if entry["n"] != n:
            continue
        for a, b, x in _orientations(t1, t2, alpha, gamma):
            if _types_match(entry, a, b) and x in entry["alpha"]:
                return TableHit(entry["name"], "hwp_known_unsolvable")
    return None


def _open_rule(entry: dict, lam: int, x: int) -> bool:
    thr = entry["a"] * lam + entry["b"] + entry.get("half", 0) * (lam // 2)
    rule = entry["rule"]
    if rule == "eq":
        return x == thr
    if rule == "gt":
        return x > thr
    if rule == "lt":
        return x < thr
    if rule == "not_mod":
        return (x - thr) % entry["mod"] != 0
    raise ValueError(f"unknown rule {rule!r}")


def hwp_open(lam: int, n: int, t1, t2, alpha: int, gamma: int) -> TableHit | None:
    """HWP instance of ``lam K_n`` (``lam >= 2``) for which no construction is claimed."""
    if lam < 2:
        return None
    for entry in load_tables()["hwp_open"]:
        if entry["n"] != n:
            continue
        for a, b, x in _orientations(t1, t2, alpha, gamma):
            if _types_match(entry, a, b) and _open_rule(entry, lam, x):
                return TableHit(entry["name"], "hwp_open")
    return None


def op_known_unsolvable(spec: GraphSpec, T) -> TableHit | None:
    for entry in load_tables()["op_known_unsolvable"]:
        if (entry["kind"], entry["n"], entry["m"]) != (spec.kind, spec.n, spec.m):
            continue
        if ctype(entry["type"]) != ctype(T):
            continue
        if "lambda" in entry and spec.lam not in entry["lambda"]:
            continue
        if "lambda_not_mod" in entry and spec.lam % entry["lambda_not_mod"] == 0:
            continue
        return TableHit(entry["name"], "op_known_unsolvable")
    return None

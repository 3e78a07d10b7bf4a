#!/usr/bin/env python3
"""Feasibility checker for models written by `pcglab export-ilp`.

Reads the LP-format subset that pcglab emits (an objective, `Subject To`
rows with integer coefficients, `Bounds`, `General`, `Binary`, `End`),
hands the model to scipy's MILP solver, and prints one JSON object:

    {"schema": 1, "status": "feasible", "objective": 3, "solution": {...}}

Exit codes follow the pcglab convention: 0 when the model is feasible,
1 when it is proved infeasible, 2 on a parse or solver problem.
"""

import argparse
import json
import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class ParseError(Exception):
    pass


def parse_terms(tokens):
    """Signed linear terms from tokens like `d_0_1 - 16 z_0_1 + w_2`."""
    terms = {}
    sign = 1
    coef = None
    for tok in tokens:
        if tok == "+":
            sign, coef = 1, None
        elif tok == "-":
            sign, coef = -1, None
        elif re.fullmatch(r"-?\d+", tok):
            if coef is not None:
                raise ParseError(f"two coefficients in a row near {tok!r}")
            coef = int(tok)
        elif NAME.fullmatch(tok):
            magnitude = 1 if coef is None else coef
            terms[tok] = terms.get(tok, 0) + sign * magnitude
            sign, coef = 1, None
        else:
            raise ParseError(f"unexpected token {tok!r}")
    if coef is not None:
        raise ParseError("dangling coefficient without a variable")
    return terms


def parse_model(text):
    objective = {}
    rows = []  # (name, {var: coef}, op, rhs)
    bounds = {}  # var -> (lo, hi)
    integers = set()
    binaries = set()

    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        keyword = line.lower()
        if keyword in ("minimize", "maximize"):
            section = "objective"
            continue
        if keyword == "subject to":
            section = "rows"
            continue
        if keyword == "bounds":
            section = "bounds"
            continue
        if keyword in ("general", "generals", "integer"):
            section = "general"
            continue
        if keyword in ("binary", "binaries"):
            section = "binary"
            continue
        if keyword == "end":
            section = None
            continue

        if section == "objective":
            body = line.split(":", 1)[1] if ":" in line else line
            objective.update(parse_terms(body.split()))
        elif section == "rows":
            if ":" not in line:
                raise ParseError(f"constraint without a name: {line!r}")
            name, body = line.split(":", 1)
            tokens = body.split()
            op_at = next(
                (i for i, t in enumerate(tokens) if t in ("<=", ">=", "=")), None
            )
            if op_at is None or op_at != len(tokens) - 2:
                raise ParseError(f"malformed constraint: {line!r}")
            terms = parse_terms(tokens[:op_at])
            rhs = int(tokens[-1])
            rows.append((name.strip(), terms, tokens[op_at], rhs))
        elif section == "bounds":
            m = re.fullmatch(r"(-?\d+)\s*<=\s*(\S+)\s*<=\s*(-?\d+)", line)
            if not m:
                raise ParseError(f"malformed bound: {line!r}")
            bounds[m.group(2)] = (int(m.group(1)), int(m.group(3)))
        elif section == "general":
            integers.update(line.split())
        elif section == "binary":
            binaries.update(line.split())
        else:
            raise ParseError(f"line outside any section: {line!r}")

    variables = []
    seen = set()
    for source in (
        objective,
        *[terms for _, terms, _, _ in rows],
        bounds,
        integers,
        binaries,
    ):
        for var in source:
            if var not in seen:
                seen.add(var)
                variables.append(var)
    if not variables:
        raise ParseError("model declares no variables")
    return objective, rows, bounds, integers, binaries, variables


def solve(objective, rows, bounds, integers, binaries, variables):
    index = {v: i for i, v in enumerate(variables)}
    n = len(variables)

    c = np.zeros(n)
    for var, coef in objective.items():
        c[index[var]] = coef

    a = np.zeros((len(rows), n))
    lo = np.full(len(rows), -np.inf)
    hi = np.full(len(rows), np.inf)
    for r, (_, terms, op, rhs) in enumerate(rows):
        for var, coef in terms.items():
            a[r, index[var]] = coef
        if op in (">=", "="):
            lo[r] = rhs
        if op in ("<=", "="):
            hi[r] = rhs

    var_lo = np.zeros(n)
    var_hi = np.full(n, np.inf)
    integrality = np.zeros(n)
    for var, i in index.items():
        if var in bounds:
            var_lo[i], var_hi[i] = bounds[var]
        elif var in binaries:
            var_lo[i], var_hi[i] = 0, 1
        if var in integers or var in binaries:
            integrality[i] = 1

    return milp(
        c,
        constraints=LinearConstraint(a, lo, hi),
        bounds=Bounds(var_lo, var_hi),
        integrality=integrality,
    )


def main():
    ap = argparse.ArgumentParser(
        description="Decide feasibility of a pcglab LP model with scipy."
    )
    ap.add_argument("model", help="LP file written by pcglab export-ilp")
    args = ap.parse_args()

    try:
        with open(args.model, encoding="utf-8") as fh:
            text = fh.read()
        objective, rows, bounds, integers, binaries, variables = parse_model(text)
        result = solve(objective, rows, bounds, integers, binaries, variables)
    except (OSError, ParseError, ValueError) as e:
        print(f"check_lp: error: {e}", file=sys.stderr)
        return 2

    report = {
        "schema": 1,
        "file": args.model,
        "variables": len(variables),
        "constraints": len(rows),
    }
    if result.status == 0:
        solution = {var: int(round(result.x[i])) for i, var in enumerate(variables)}
        report.update(
            status="feasible",
            objective=int(round(result.fun)),
            solution=solution,
        )
        print(json.dumps(report))
        return 0
    if result.status == 2:
        report.update(status="infeasible")
        print(json.dumps(report))
        return 1
    print(
        f"check_lp: solver stopped without a verdict: {result.message}",
        file=sys.stderr,
    )
    return 2


if __name__ == "__main__":
    sys.exit(main())

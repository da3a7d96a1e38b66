"""CPLEX LP text export, readable by glpk, CBC, HiGHS and friends."""

from __future__ import annotations

import re

from cdo.solver.model import IlpModel

_BAD = re.compile(r"[^A-Za-z0-9_]")
_TERMS_PER_LINE = 8


def sanitize_names(names) -> dict[str, str]:
    """Map identifiers to unique LP-safe names, preserving order."""
    out: dict[str, str] = {}
    used: set[str] = set()
    for name in names:
        base = _BAD.sub("_", name)
        # LP names may not start with a digit or period, nor look like an exponent
        if not base or not base[0].isalpha() or base[0] in "eE":
            base = "v_" + base
        base = base[:240]
        cand, k = base, 1
        while cand in used:
            cand = f"{base}_{k}"
            k += 1
        used.add(cand)
        out[name] = cand
    return out


def _expr(terms, names) -> list[str]:
    chunks = [f"{'-' if c < 0 else '+'} {abs(c)} {names[v]}" for v, c in terms]
    return [" ".join(chunks[k:k + _TERMS_PER_LINE]) for k in range(0, len(chunks), _TERMS_PER_LINE)]


def export_lp(model: IlpModel) -> str:
    names = sanitize_names(model.variables)
    lines = [f"\\ model: {model.name}"]
    if model.offset:
        lines.append(f"\\ objective offset: {model.offset}")
    lines.append("Maximize")
    obj = _expr(list(model.objective.items()), names)
    lines.append(" obj: " + (obj[0] if obj else "0"))
    lines.extend("   " + part for part in obj[1:])
    lines.append("Subject To")
    for k, con in enumerate(model.constraints, 1):
        parts = _expr(con.terms, names) or ["0 " + next(iter(names.values()), "x")]
        sense = "=" if con.sense == "=" else con.sense
        if len(parts) == 1:
            lines.append(f" c{k}: {parts[0]} {sense} {con.rhs}")
        else:
            lines.append(f" c{k}: {parts[0]}")
            lines.extend("   " + p for p in parts[1:-1])
            lines.append(f"   {parts[-1]} {sense} {con.rhs}")
    general = [v for v, var in model.variables.items() if not var.binary]
    binary = [v for v, var in model.variables.items() if var.binary]
    if general:
        lines.append("Bounds")
        for v in general:
            var = model.variables[v]
            lines.append(f" {var.lo} <= {names[v]} <= {var.hi}")
    if binary:
        lines.append("Binary")
        lines.extend(f" {names[v]}" for v in binary)
    if general:
        lines.append("General")
        lines.extend(f" {names[v]}" for v in general)
    lines.append("End")
    return "\n".join(lines) + "\n"

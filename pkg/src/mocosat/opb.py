"""Multi-objective OPB reading and writing.

One ``min:`` line per objective, in order; constraint lines end with a
relation (``>=``, ``<=`` or ``=``), an integer and ``;``. Literals are
``x<k>`` or ``~x<k>``. Lines starting with ``*`` are comments, except that
an ``#variable=`` field in a comment declares the variable count.
"""

from __future__ import annotations

import re
from pathlib import Path

from .model import ContractError, MocoInstance, Objective, PbConstraint, Relation

_LIT = re.compile(r"^(~?)x([1-9][0-9]*)$")
_INT = re.compile(r"^[+-]?[0-9]+$")
_NVARS = re.compile(r"#variable=\s*([0-9]+)")


class OpbParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _terms(tokens: list[str], lineno: int) -> list[tuple[int, int]]:
    if len(tokens) % 2:
        raise OpbParseError(lineno, "terms must be <coefficient> <literal> pairs")
    terms = []
    for w, lit in zip(tokens[::2], tokens[1::2]):
        if not _INT.match(w):
            raise OpbParseError(lineno, f"bad coefficient {w!r}")
        m = _LIT.match(lit)
        if not m:
            raise OpbParseError(lineno, f"bad literal {lit!r}")
        v = int(m.group(2))
        terms.append((int(w), -v if m.group(1) else v))
    return terms


def parse_mo_opb(text: str) -> MocoInstance:
    """Parse MO-OPB text.

    Raises:
        OpbParseError: on a malformed line or when no objective is given.
    """
    n_vars = 0
    objectives: list[Objective] = []
    constraints: list[PbConstraint] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("*"):
            m = _NVARS.search(line)
            if m:
                n_vars = max(n_vars, int(m.group(1)))
            continue
        if not line.endswith(";"):
            raise OpbParseError(lineno, "missing ';' terminator")
        body = line[:-1].strip()
        if body.startswith("min:"):
            objectives.append(Objective(_terms(body[4:].split(), lineno)))
            continue
        if body.startswith("max:"):
            objectives.append(Objective(_terms(body[4:].split(), lineno)).negated())
            continue
        tokens = body.split()
        if len(tokens) < 2:
            raise OpbParseError(lineno, "constraint needs a relation and a bound")
        rel, bound = tokens[-2], tokens[-1]
        if rel not in (">=", "<=", "="):
            raise OpbParseError(lineno, f"bad relation {rel!r}")
        if not _INT.match(bound):
            raise OpbParseError(lineno, f"bad bound {bound!r}")
        constraints.append(PbConstraint(_terms(tokens[:-2], lineno), rel, int(bound)))
    if not objectives:
        raise OpbParseError(0, "no objective ('min:' line) found")
    return MocoInstance(n_vars, constraints, objectives)


def _render_terms(terms) -> str:
    return "".join(f"{w:+d} {'~' if l < 0 else ''}x{abs(l)} " for w, l in terms)


def render_mo_opb(instance: MocoInstance) -> str:
    """Canonical text: single spaces, ``;`` terminators, LF line endings."""
    lines = [f"* #variable= {instance.n_vars} #constraint= {len(instance.constraints)}"]
    for o in instance.objectives:
        if o.offset:
            raise ContractError("objective offsets cannot be written in OPB")
        lines.append(f"min: {_render_terms(o.terms)};")
    for c in instance.constraints:
        rel = Relation(c.relation).value
        lines.append(f"{_render_terms(c.terms)}{rel} {c.bound} ;")
    return "\n".join(lines) + "\n"


def read_instance(path: str | Path) -> MocoInstance:
    return parse_mo_opb(Path(path).read_text())


def write_instance(instance: MocoInstance, path: str | Path) -> None:
    Path(path).write_text(render_mo_opb(instance), newline="\n")

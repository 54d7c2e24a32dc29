"""JSON interchange format for structure constants.

Fields: name, dim, cyclotomic_order, unit, counit, mult, comult and an
optional antipode.  Tensor entries are [i, j, k, "scalar"], scalars use the
textual grammar of :mod:`fdhopf.cyclotomic`, the antipode is a dense
row-major array.  Output is deterministic: fixed key order, sorted
entries, one entry per line.
"""

from __future__ import annotations

import json

from .cyclotomic import ScalarParseError, field, parse_scalar
from .hopf import FinHopfAlgebra
from .linalg import FieldMatrix, SparseTensor3

__all__ = ["InterchangeError", "dumps", "loads", "read", "write"]

_REQUIRED = ("name", "dim", "cyclotomic_order", "unit", "counit", "mult", "comult")
_OPTIONAL = ("antipode",)


class InterchangeError(ValueError):
    pass


def _q(v) -> str:
    return json.dumps(str(v))


def dumps(H: FinHopfAlgebra) -> str:
    lines = ["{"]
    lines.append(f'  "name": {json.dumps(H.name)},')
    lines.append(f'  "dim": {H.dim},')
    lines.append(f'  "cyclotomic_order": {H.cyc_order},')
    lines.append('  "unit": [' + ", ".join(_q(v) for v in H.unit) + "],")
    lines.append('  "counit": [' + ", ".join(_q(v) for v in H.counit) + "],")
    for key, tensor in (("mult", H.mult), ("comult", H.comult)):
        items = sorted(tensor.entries.items())
        lines.append(f'  "{key}": [')
        for t, ((i, j, k), v) in enumerate(items):
            sep = "," if t + 1 < len(items) else ""
            lines.append(f"    [{i}, {j}, {k}, {_q(v)}]{sep}")
        lines.append("  ]" + ("," if key == "mult" or H.antipode is not None else ""))
    if H.antipode is not None:
        d = H.dim
        flat = H.antipode.entries
        lines.append('  "antipode": [')
        for r in range(d):
            sep = "," if r + 1 < d else ""
            lines.append("    " + ", ".join(_q(v) for v in flat[r * d:(r + 1) * d]) + sep)
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _scalar(text, order, where):
    if not isinstance(text, str):
        raise InterchangeError(f"{where}: scalar must be a string, got {type(text).__name__}")
    try:
        return parse_scalar(text, order)
    except ScalarParseError as exc:
        raise InterchangeError(f"{where}: {exc}") from None


def _int(v, where, lo=None):
    if not isinstance(v, int) or isinstance(v, bool):
        raise InterchangeError(f"{where} must be an integer")
    if lo is not None and v < lo:
        raise InterchangeError(f"{where} must be >= {lo}")
    return v


def _tensor(raw, d, order, key):
    if not isinstance(raw, list):
        raise InterchangeError(f"{key} must be an array")
    ents = {}
    for t, e in enumerate(raw):
        if not isinstance(e, list) or len(e) != 4:
            raise InterchangeError(f"{key}[{t}] must be [i, j, k, scalar]")
        idx = tuple(_int(x, f"{key}[{t}] index", 0) for x in e[:3])
        if any(x >= d for x in idx):
            raise InterchangeError(f"{key}[{t}] index out of range for dim {d}")
        if idx in ents:
            raise InterchangeError(f"{key}: duplicate entry {list(idx)}")
        ents[idx] = _scalar(e[3], order, f"{key}[{t}]")
    return SparseTensor3(field(order), (d, d, d), ents)


def loads(text: str) -> FinHopfAlgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InterchangeError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InterchangeError("document must be a JSON object")
    unknown = sorted(set(doc) - set(_REQUIRED) - set(_OPTIONAL))
    if unknown:
        raise InterchangeError(f"unknown fields: {', '.join(unknown)}")
    missing = [k for k in _REQUIRED if k not in doc]
    if missing:
        raise InterchangeError(f"missing fields: {', '.join(missing)}")
    if not isinstance(doc["name"], str):
        raise InterchangeError("name must be a string")
    d = _int(doc["dim"], "dim", 1)
    order = _int(doc["cyclotomic_order"], "cyclotomic_order", 1)
    vecs = {}
    for key in ("unit", "counit"):
        raw = doc[key]
        if not isinstance(raw, list) or len(raw) != d:
            raise InterchangeError(f"{key} must be an array of {d} scalars")
        vecs[key] = [_scalar(v, order, f"{key}[{t}]") for t, v in enumerate(raw)]
    mult = _tensor(doc["mult"], d, order, "mult")
    comult = _tensor(doc["comult"], d, order, "comult")
    S = None
    if doc.get("antipode") is not None:
        raw = doc["antipode"]
        if not isinstance(raw, list) or len(raw) != d * d:
            raise InterchangeError(f"antipode must be a dense array of {d * d} scalars")
        S = FieldMatrix.from_entries(field(order), d, d,
                                     [_scalar(v, order, f"antipode[{t}]") for t, v in enumerate(raw)])
    return FinHopfAlgebra(doc["name"], mult, vecs["unit"], comult, vecs["counit"], S)


def read(path) -> FinHopfAlgebra:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write(H: FinHopfAlgebra, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(H))

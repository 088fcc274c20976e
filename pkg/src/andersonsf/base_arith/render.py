"""Canonical text/JSON rendering of CinfNum values.

A number renders as its list of ``(k, coefficient)`` pairs in increasing
``k`` (meaning ``pi^k``), each coefficient written as a polynomial over F_p
in the generator ``z`` of F_{q^m}, plus the precision (``null`` if exact).
"""

from __future__ import annotations

from .cinf import INF, CinfNum


def cinf_to_json(x):
    fld = x.params.fld
    digits = [[x.lo + j, fld.format(row)] for j, row in enumerate(x.digits) if row.any()]
    return {"digits": digits, "prec": None if x.prec == INF else int(x.prec)}


def cinf_from_json(params, obj):
    fld = params.fld
    terms = {int(k): fld.parse(c) for k, c in obj["digits"]}
    prec = INF if obj.get("prec") is None else int(obj["prec"])
    return CinfNum.from_terms(params, terms, prec)


def cinf_to_text(x):
    obj = cinf_to_json(x)
    body = ", ".join(f"({k}, {c})" for k, c in obj["digits"]) or "0"
    if obj["prec"] is None:
        return f"[{body}]"
    return f"[{body}] + O(pi^{obj['prec']})"

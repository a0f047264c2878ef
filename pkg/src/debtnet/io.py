"""JSON network documents and report rendering.

A network document looks like::

    {
      "banks": [{"id": "v1", "external": "0"}, {"id": "v2", "external": "6/5"}],
      "liabilities": [{"from": "v2", "to": "v1", "amount": "6"}],
      "default_costs": {"alpha": "1", "beta": "1"}
    }

Amounts may be JSON numbers or strings holding integers, decimals or
fractions; they are read without precision loss. Serialised documents always
use fraction strings.
"""

from __future__ import annotations

import json
import math
from decimal import Decimal
from typing import Any, Mapping

from .clearing import ClearingResult
from .errors import ParseError
from .network import FinancialNetwork, StrategyProfile
from .numeric import convert, format_scalar

INFINITY = "infinity"
UNDEFINED = "undefined"


def _amount(value, where: str, exact: bool):
    if isinstance(value, bool) or not isinstance(value, (str, int, Decimal, float)):
        raise ParseError(f"{where}: expected a number or numeric string, got {value!r}")
    try:
        out = convert(value if not isinstance(value, Decimal) else str(value), exact)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: {exc}") from None
    if isinstance(out, float) and not math.isfinite(out):
        raise ParseError(f"{where}: non-finite amount")
    if out < 0:
        raise ParseError(f"{where}: negative amount {value!r}")
    return out


def loads(text: str) -> Any:
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def parse_network(document: str | Mapping, exact: bool = True) -> FinancialNetwork:
    """Build a network from a document (JSON text or already-decoded mapping).

    Bank order follows declaration order; repeated (from, to) pairs are summed;
    missing default costs mean alpha = beta = 1.
    """
    doc = loads(document) if isinstance(document, str) else document
    if not isinstance(doc, Mapping):
        raise ParseError("document must be a JSON object")
    unknown = set(doc) - {"banks", "liabilities", "default_costs"}
    if unknown:
        raise ParseError(f"unknown field(s): {', '.join(sorted(unknown))}")
    banks = doc.get("banks")
    if not isinstance(banks, list):
        raise ParseError("banks: expected a list")
    ids: list[str] = []
    externals = []
    for k, bank in enumerate(banks):
        where = f"banks[{k}]"
        if not isinstance(bank, Mapping) or "id" not in bank:
            raise ParseError(f"{where}: expected an object with an id")
        bid = bank["id"]
        if not isinstance(bid, str) or not bid:
            raise ParseError(f"{where}.id: expected a non-empty string")
        if bid in ids:
            raise ParseError(f"{where}.id: duplicate id {bid!r}")
        ids.append(bid)
        externals.append(_amount(bank.get("external", "0"), f"{where}.external", exact))
    index = {b: i for i, b in enumerate(ids)}
    edges: dict[tuple[int, int], Any] = {}
    liabilities = doc.get("liabilities", [])
    if not isinstance(liabilities, list):
        raise ParseError("liabilities: expected a list")
    for k, item in enumerate(liabilities):
        where = f"liabilities[{k}]"
        if not isinstance(item, Mapping):
            raise ParseError(f"{where}: expected an object")
        ends = []
        for key in ("from", "to"):
            if key not in item:
                raise ParseError(f"{where}: missing {key!r}")
            if item[key] not in index:
                raise ParseError(f"{where}.{key}: unknown bank id {item[key]!r}")
            ends.append(index[item[key]])
        if ends[0] == ends[1]:
            raise ParseError(f"{where}: bank {item['from']!r} cannot owe itself")
        amount = _amount(item.get("amount"), f"{where}.amount", exact)
        edges[tuple(ends)] = edges.get(tuple(ends), 0) + amount
    costs = doc.get("default_costs", {})
    if not isinstance(costs, Mapping):
        raise ParseError("default_costs: expected an object")
    alpha = _amount(costs.get("alpha", "1"), "default_costs.alpha", exact)
    beta = _amount(costs.get("beta", "1"), "default_costs.beta", exact)
    for name, v in (("alpha", alpha), ("beta", beta)):
        if v > 1:
            raise ParseError(f"default_costs.{name}: must lie in [0, 1], got {format_scalar(v)}")
    return FinancialNetwork.from_edges(externals, edges, alpha, beta, exact, ids)


def network_document(net: FinancialNetwork) -> dict:
    labels = net.bank_labels()
    return {
        "banks": [{"id": labels[i], "external": format_scalar(e)} for i, e in enumerate(net.externals)],
        "liabilities": [
            {"from": labels[i], "to": labels[j], "amount": format_scalar(net.liabilities[i][j])} for i, j in net.edges()
        ],
        "default_costs": {"alpha": format_scalar(net.alpha), "beta": format_scalar(net.beta)},
    }


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def serialize_network(net: FinancialNetwork) -> str:
    return dumps(network_document(net))


# -- reports ------------------------------------------------------------------

def scalar(value) -> str:
    if value is None:
        return UNDEFINED
    if isinstance(value, float) and math.isinf(value):
        return INFINITY
    return format_scalar(value)


def clearing_report(net: FinancialNetwork, res: ClearingResult) -> dict:
    labels = net.bank_labels()
    return {
        "payments": [
            {"from": labels[i], "to": labels[j], "amount": scalar(v)}
            for i, row in enumerate(res.payments)
            for j, v in enumerate(row)
            if v != 0
        ],
        "assets": {labels[i]: scalar(a) for i, a in enumerate(res.assets)},
        "defaults": [labels[i] for i in sorted(res.defaults)],
        "liquidity": scalar(res.liquidity),
    }


def transfers_report(net: FinancialNetwork, transfers) -> list[dict]:
    return [{"bank": net.label(b), "amount": scalar(a)} for b, a in transfers]


def format_profile(net: FinancialNetwork, profile: StrategyProfile) -> str:
    """``"v1<-v4;v2<-v3,v4"``: each lender followed by the borrowers it forgives."""
    parts = []
    for j, removed in enumerate(profile.removed):
        if removed:
            parts.append(f"{net.label(j)}<-" + ",".join(net.label(i) for i in sorted(removed)))
    return ";".join(parts)


def parse_profile(net: FinancialNetwork, text: str) -> StrategyProfile:
    index = {label: i for i, label in enumerate(net.bank_labels())}
    edges = []
    for part in filter(None, (p.strip() for p in text.split(";"))):
        lender, sep, borrowers = part.partition("<-")
        if not sep:
            raise ParseError(f"profile part {part!r} must look like 'lender<-borrower,...'")
        lender = lender.strip()
        if lender not in index:
            raise ParseError(f"profile: unknown bank id {lender!r}")
        for b in filter(None, (s.strip() for s in borrowers.split(","))):
            if b not in index:
                raise ParseError(f"profile: unknown bank id {b!r}")
            edges.append((index[b], index[lender]))
    profile = StrategyProfile.from_edges(net.n, edges)
    profile.validate_for(net)
    return profile

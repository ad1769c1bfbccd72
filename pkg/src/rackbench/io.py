"""File ingestion, JSON reports, DOT export and cached suite runs."""

import datetime
import hashlib
import json
import os
from fractions import Fraction
from pathlib import Path

from . import __version__
from .catalog import BaseGraph, CoveringDesc, base_graph, build_covering
from .hurwitz import B3Space, ModSpace
from .racks import RackError, from_table, validate

SUITES = ("acceptance", "imm-verify", "pipeline")


class IngestError(ValueError):
    pass


# -- JSON ---------------------------------------------------------------------------

def to_jsonable(obj):
    """Fractions become "p/q" strings; tuples, sets and dataclass-like values are unpacked."""
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else str(obj.numerator)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [to_jsonable(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, CoveringDesc):
        return str(obj)
    if hasattr(obj, "as_dict"):
        return to_jsonable(obj.as_dict())
    return str(obj)


def canonical_json(obj):
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def content_hash(obj):
    # BLAKE2b over the canonical serialization
    return hashlib.blake2b(canonical_json(obj).encode(), digest_size=16).hexdigest()


def make_report(command, inputs, results, ok=True):
    body = {"command": command, "input_hash": content_hash(inputs),
            "version": __version__, "results": to_jsonable(results), "ok": bool(ok)}
    body["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    return body


def dump_report(report, path):
    with open(path, "w") as f:
        json.dump(report, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")


# -- racks ---------------------------------------------------------------------------

def _line_of(text, needle_index):
    # line of the n-th rack object, for diagnostics; handles both accepted layouts
    stack = []
    count = -1
    line = 1
    in_str = esc = False
    for ch in text:
        if ch == "\n":
            line += 1
        if in_str:
            if esc:
                esc = False
            elif ch == "\\":
                esc = True
            elif ch == '"':
                in_str = False
            continue
        if ch == '"':
            in_str = True
        elif ch in "[{":
            if ch == "{" and stack in (["["], ["{", "["]):
                count += 1
                if count == needle_index:
                    return line
            stack.append(ch)
        elif ch in "]}" and stack:
            stack.pop()
    return None


def rack_from_json(entry):
    if not isinstance(entry, dict) or "table" not in entry:
        raise IngestError("entry has no 'table'")
    table = entry["table"]
    base = entry.get("base", 0)
    if base not in (0, 1):
        raise IngestError("base must be 0 or 1")
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise IngestError("table must be a list of rows")
    if "size" in entry and entry["size"] != len(table):
        raise IngestError("size %s does not match %d rows" % (entry["size"], len(table)))
    d = len(table)
    for r in table:
        if len(r) != d or any(not isinstance(v, int) or not base <= v < d + base for v in r):
            raise IngestError("rows must hold %d indices in [%d, %d]" % (d, base, d - 1 + base))
    t = from_table(table, entry.get("name", ""), base)
    flags = validate(t)
    if not flags["is_rack"]:
        raise IngestError("not a rack (non-bijective row or self-distributivity fails)")
    return t


def ingest_racks(path, diagnostics=None):
    """Racks from a JSON array (or {"racks": [...]}) of rack objects.

    Invalid entries are skipped; one message per skipped entry is appended to
    ``diagnostics`` when a list is given.
    """
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IngestError("%s: %s" % (path, exc)) from None
    if isinstance(data, dict):
        data = data.get("racks", [])
    if not isinstance(data, list):
        raise IngestError("%s: expected a JSON array of racks" % path)
    out = []
    for i, entry in enumerate(data):
        try:
            out.append(rack_from_json(entry))
        except (IngestError, RackError) as exc:
            if diagnostics is not None:
                name = entry.get("name", "") if isinstance(entry, dict) else ""
                diagnostics.append("%s:%s entry %d %s: %s" % (
                    path, _line_of(text, i) or "?", i, name, exc))
    return out


def rack_to_json(t, base=0):
    return {"name": t.name, "size": t.size, "base": base,
            "table": [[v + base for v in row] for row in t.op]}


# -- DOT -----------------------------------------------------------------------------

def _dot_base(g):
    lines = ["digraph \"%s\" {" % g.id, "\tnode [shape=circle];"]
    for v in range(g.n):
        lines.append("\t%d [label=\"%d\"];" % (v, v + 1))
    for a in g.arrows:
        if a.kind == "x":
            lines.append("\t%d -> %d [style=solid, headlabel=\"%s\"];" % (a.src, a.dst, a.text))
    for v in g.y_loops:
        lines.append("\t%d -> %d [style=dashed, dir=none, headlabel=\"%s\"];"
                     % (v, v, g.arrow("y", v).text))
    for u, v in g.y_edges:
        # the label at each end belongs to the y-arrow arriving there
        lines.append("\t%d -> %d [style=dashed, dir=none, taillabel=\"%s\", headlabel=\"%s\"];"
                     % (u, v, g.arrow("y", v).text, g.arrow("y", u).text))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_perm_pair(px, py, name, labels=None):
    n = len(px)
    lines = ["digraph \"%s\" {" % name, "\tnode [shape=circle];"]
    for p in range(n):
        lines.append("\t%d [label=\"%s\"];" % (p, labels[p] if labels else p))
    for p in range(n):
        lines.append("\t%d -> %d [style=solid];" % (p, px[p]))
    for p in range(n):
        q = py[p]
        if q >= p:
            lines.append("\t%d -> %d [style=dashed, dir=none];" % (p, q))
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_text(obj):
    if isinstance(obj, BaseGraph):
        return _dot_base(obj)
    if isinstance(obj, str):
        return _dot_base(base_graph(obj))
    if isinstance(obj, ModSpace):
        return _dot_perm_pair(obj.px, obj.py, obj.name or "space")
    if isinstance(obj, CoveringDesc):
        sp = build_covering(obj)
        labels = ["v%d[%d]" % (p // obj.N + 1, p % obj.N) for p in range(sp.n)]
        return _dot_perm_pair(sp.x, sp.y, str(obj), labels)
    if isinstance(obj, B3Space):
        return _dot_perm_pair(obj.x, obj.y, obj.name or "orbit")
    raise TypeError("cannot draw %r" % type(obj).__name__)


def export_dot(obj, path):
    text = dot_text(obj)
    with open(path, "w") as f:
        f.write(text)
    return text


# -- suites ----------------------------------------------------------------------------

def _suite_items(config):
    from . import acceptance

    name = config["suite"]
    if name == "acceptance":
        which = config.get("criteria") or sorted(acceptance.CRITERIA)
        for k in which:
            ok, detail = acceptance.CRITERIA[int(k)]()
            yield {"criterion": int(k), "passed": ok, "detail": detail}
    elif name == "imm-verify":
        for item in acceptance.imm_verify_sweep(config.get("max_n", 8), config.get("exact_limit", 30),
                                                config.get("families")):
            yield item
    elif name == "pipeline":
        from .nichols import classification_pipeline

        diags = []
        racks = ingest_racks(config["db"], diags) if config.get("db") else \
            list(acceptance.default_database())
        for d in diags:
            yield {"skipped": d, "passed": True}
        for e in classification_pipeline(racks, config.get("exact_limit", 30)):
            e["passed"] = True
            yield e


def run_suite(config, cache_dir=None):
    """Run a named suite and persist its report under ``cache_dir/<hash>.json``.

    A cached report for identical input is returned without recomputation.
    """
    name = config.get("suite")
    if name not in SUITES:
        raise ValueError("unknown suite %r (known: %s)" % (name, ", ".join(SUITES)))
    key_input = dict(config)
    if config.get("db"):
        key_input["db_content"] = Path(config["db"]).read_text()
    key = content_hash({"config": key_input, "version": __version__})
    path = None
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        path = os.path.join(cache_dir, key + ".json")
        if os.path.exists(path):
            with open(path) as f:
                return json.load(f)
    items = list(_suite_items(config))
    ok = all(i.get("passed", False) for i in items)
    report = make_report("suite " + name, key_input, items, ok)
    report["input_hash"] = key
    if path:
        dump_report(report, path)
    return report

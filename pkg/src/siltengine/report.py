"""Deterministic report assembly and emission (text table / JSON)."""

import json

import numpy as np

STATUSES = ("pass", "fail", "skipped", "evidence", "certified")


def _plain(value):
    """Coerce numpy scalars/arrays and containers to JSON-safe values."""
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, bool):
        return int(value)
    return value


def make_report(fixture, field, checks):
    out = {"fixture": fixture, "field": field, "checks": []}
    for c in checks:
        if c["status"] not in STATUSES:
            raise ValueError("unknown status %r" % (c["status"],))
        entry = {
            "name": c["name"],
            "status": c["status"],
            "dims": _plain(c.get("dims", {})),
        }
        if "witness" in c:
            entry["witness"] = str(c["witness"])
        out["checks"].append(entry)
    return out


def emit_json(report):
    return json.dumps(report, sort_keys=True, separators=(",", ": "),
                      indent=2) + "\n"


def _dims_str(dims):
    return " ".join("%s=%s" % (k, dims[k]) for k in sorted(dims))


def emit_text(report):
    lines = [
        "fixture: %s" % report["fixture"],
        "field:   %s" % report["field"],
    ]
    checks = report["checks"]
    if checks:
        wname = max(len(c["name"]) for c in checks)
        wstat = max(len(c["status"]) for c in checks)
        for c in checks:
            line = "%-*s  %-*s  %s" % (
                wname, c["name"], wstat, c["status"], _dims_str(c["dims"])
            )
            if "witness" in c:
                line += "  [%s]" % c["witness"]
            lines.append(line.rstrip())
    ok = all(c["status"] != "fail" for c in checks)
    lines.append("result: %s" % ("ok" if ok else "FAIL"))
    return "\n".join(lines) + "\n"


def has_failure(report):
    return any(c["status"] == "fail" for c in report["checks"])

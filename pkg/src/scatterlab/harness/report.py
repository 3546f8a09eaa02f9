"""Verdict rows and byte-stable CSV / JSON emission."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

COLUMNS = [
    "experiment", "d", "h_inv", "upsilon", "sigma", "rho", "param_json", "measured",
    "reference", "ref_provenance", "abs_err", "rel_err", "slope", "pass",
]
FLOAT_COLUMNS = {"h_inv", "sigma", "measured", "reference", "abs_err", "rel_err", "slope"}


@dataclass
class VerdictRow:
    experiment: str
    d: int
    measured: float
    reference: float
    ref_provenance: str
    passed: bool
    h_inv: float | None = None
    upsilon: int | None = None
    sigma: float | None = None
    rho: int | None = None
    params: dict = field(default_factory=dict)
    slope: float | None = None
    abs_err: float | None = None
    rel_err: float | None = None

    def __post_init__(self):
        if self.abs_err is None:
            self.abs_err = abs(self.measured - self.reference) if _finite(self.reference) else math.nan
        if self.rel_err is None:
            ref = abs(self.reference) if _finite(self.reference) else 0.0
            self.rel_err = self.abs_err / ref if ref > 0 else math.nan
        self.passed = bool(self.passed)

    def as_record(self) -> dict:
        return {
            "experiment": self.experiment,
            "d": int(self.d),
            "h_inv": self.h_inv,
            "upsilon": self.upsilon,
            "sigma": self.sigma,
            "rho": self.rho,
            "param_json": json.dumps(self.params, sort_keys=True, separators=(",", ":")),
            "measured": self.measured,
            "reference": self.reference,
            "ref_provenance": self.ref_provenance,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "slope": self.slope,
            "pass": self.passed,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "VerdictRow":
        def num(key):
            v = rec.get(key)
            return math.nan if v is None and key in ("measured", "reference", "abs_err", "rel_err") else v

        return cls(
            experiment=rec["experiment"], d=int(rec["d"]), measured=num("measured"),
            reference=num("reference"), ref_provenance=rec["ref_provenance"], passed=bool(rec["pass"]),
            h_inv=rec.get("h_inv"), upsilon=rec.get("upsilon"), sigma=rec.get("sigma"), rho=rec.get("rho"),
            params=json.loads(rec["param_json"]), slope=rec.get("slope"),
            abs_err=num("abs_err"), rel_err=num("rel_err"),
        )


@dataclass
class Report:
    experiment: str
    kind: str
    anchor: str
    seed: int
    rows: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


def _finite(x) -> bool:
    return x is not None and math.isfinite(x)


def _fmt(x) -> str:
    """17 significant digits; integers stay integral, missing values are empty."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in report.rows:
        rec = row.as_record()
        w.writerow([_fmt(rec[c]) if not isinstance(rec[c], str) else rec[c] for c in COLUMNS])
    return buf.getvalue()


def _json_value(x) -> str:
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return "null"
    if isinstance(x, (bool, int, float)):
        return _fmt(x)
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    raise TypeError(f"unsupported JSON value {x!r}")


def to_json(report: Report) -> str:
    meta = {"experiment": report.experiment, "kind": report.kind, "anchor": report.anchor, "seed": report.seed}
    lines = ["{", '  "meta": {']
    lines.append(",\n".join(f"    {json.dumps(k)}: {_json_value(v)}" for k, v in meta.items()))
    lines.append("  },")
    lines.append('  "rows": [')
    recs = []
    for row in report.rows:
        rec = row.as_record()
        body = ", ".join(f"{json.dumps(c)}: {_json_value(rec[c])}" for c in COLUMNS)
        recs.append("    {" + body + "}")
    lines.append(",\n".join(recs))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def from_json(text: str) -> Report:
    data = json.loads(text)
    meta = data["meta"]
    rows = [VerdictRow.from_record(r) for r in data["rows"]]
    return Report(meta["experiment"], meta["kind"], meta["anchor"], int(meta["seed"]), rows)


def emit(report: Report, fmt: str, path) -> Path:
    """Write ``report`` as csv or json to ``path`` (UTF-8, LF line endings)."""
    if not report.rows:
        raise ValueError("refusing to emit an empty report")
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    text = to_csv(report) if fmt == "csv" else to_json(report)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"could not write report to {path}: {exc}") from exc
    return path

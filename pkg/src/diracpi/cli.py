"""Command-line front end.

Every command writes one JSON document (or a CSV table for the
convergence studies) to ``--out`` or standard output.  Complex numbers are
written as ``[re, im]`` pairs.  Exit codes: 0 success, 2 invalid
configuration, 3 numerical failure; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass
from typing import Optional, Sequence, Tuple

import jsonschema
import numpy as np

from .errors import NumericalError

COMMANDS = ("classify", "spectrum", "resolvent", "approx-spectrum",
            "approx-converge", "nonrel-converge", "oracle-verify")
TABLE_COMMANDS = ("approx-converge", "nonrel-converge", "oracle-verify")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


class ConfigError(ValueError):
    """Invalid job configuration."""


# ---------------------------------------------------------------- config


def _floats(text, n=None, what="value"):
    try:
        vals = [float(t) for t in str(text).split(",") if t.strip() != ""]
    except ValueError:
        raise ConfigError(f"{what}: cannot parse {text!r} as numbers") from None
    if n is not None and len(vals) != n:
        raise ConfigError(f"{what}: expected {n} numbers, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise ConfigError(f"{what}: values must be finite")
    return vals


@dataclass
class JobConfig:
    """Validated parameters of one CLI job."""

    command: str
    A: Tuple[complex, complex, complex, complex] = (0j, 0j, 0j, 0j)
    m: float = 1.0
    c: Tuple[float, ...] = (10.0, 20.0, 40.0)
    z: Optional[complex] = None
    eps: Tuple[float, ...] = (0.2, 0.1, 0.05)
    profile: str = "box"
    region: Optional[Tuple[float, float, float, float]] = None
    L: Optional[float] = None
    N: Optional[int] = None
    tol: float = 1e-12
    out: Optional[str] = None
    format: str = "json"

    @classmethod
    def from_args(cls, ns) -> "JobConfig":
        A = _floats(ns.A, 8, "--A") if ns.A is not None else [0.0] * 8
        z = _floats(ns.z, 2, "--z") if ns.z is not None else None
        cfg = cls(
            command=ns.command,
            A=tuple(complex(A[2 * i], A[2 * i + 1]) for i in range(4)),
            m=float(ns.m),
            c=tuple(_floats(ns.c, None, "--c")),
            z=complex(z[0], z[1]) if z is not None else None,
            eps=tuple(_floats(ns.eps, None, "--eps")),
            profile=ns.profile,
            region=tuple(_floats(ns.region, 4, "--region")) if ns.region is not None else None,
            L=ns.L,
            N=ns.N,
            tol=float(ns.tol),
            out=ns.out,
            format=ns.format,
        )
        cfg.validate()
        return cfg

    @property
    def matrix(self):
        return np.array(self.A, dtype=complex).reshape(2, 2)

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not math.isfinite(self.m):
            raise ConfigError("--m must be finite")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise ConfigError("--tol must be positive")
        if self.format not in ("json", "csv"):
            raise ConfigError("--format must be json or csv")
        if self.format == "csv" and self.command not in TABLE_COMMANDS:
            raise ConfigError(f"csv output is only available for {', '.join(TABLE_COMMANDS)}")
        if any(not (e > 0) for e in self.eps) or not self.eps:
            raise ConfigError("--eps values must be positive")
        if any(not (c > 0) for c in self.c) or not self.c:
            raise ConfigError("--c values must be positive")
        if self.L is not None and not (self.L > 0 and math.isfinite(self.L)):
            raise ConfigError("--L must be positive")
        if self.N is not None and self.N < 2:
            raise ConfigError("--N must be at least 2")
        if self.region is not None:
            x0, x1, y0, y1 = self.region
            if not (x0 < x1 and y0 < y1):
                raise ConfigError("--region must satisfy x0 < x1 and y0 < y1")
        if self.command in ("spectrum", "resolvent", "approx-spectrum", "approx-converge",
                            "nonrel-converge", "oracle-verify") and self.m == 0:
            raise ConfigError(f"{self.command} requires m != 0")
        if self.command in ("resolvent", "approx-converge") and self.z is None:
            raise ConfigError(f"{self.command} requires --z")
        try:
            from .profiles import profile_from_spec

            profile_from_spec(self.profile)
        except (ValueError, OSError) as exc:
            raise ConfigError(f"--profile: {exc}") from None

    def echo(self):
        d = asdict(self)
        d["A"] = [[_cx(a) for a in row] for row in np.array(self.A).reshape(2, 2)]
        d["z"] = _cx(self.z) if self.z is not None else None
        d["c"] = list(self.c)
        d["eps"] = list(self.eps)
        d["region"] = list(self.region) if self.region is not None else None
        del d["out"], d["format"]
        return d


def _cx(v):
    v = complex(v)
    return [float(v.real), float(v.imag)]


def _uncx(p):
    return complex(p[0], p[1])


# ---------------------------------------------------------------- commands


def _default_region(m):
    am = abs(m)
    return (-0.9 * am, 0.9 * am, -1.0, 1.0)


def _records(records):
    return [{"z": _cx(r.z), "multiplicity": int(r.geometric_multiplicity),
             "residual": float(r.residual)} for r in records]


def _classify(cfg):
    from .point_interaction import classify_spectrum

    cl = classify_spectrum(cfg.matrix, cfg.m, tol=cfg.tol)
    return {"case": cl.case_label.value, "point_spectrum": cl.point_spectrum_kind.value,
            "eigenvalues": _records(cl.eigenvalues)}


def _spectrum(cfg):
    from .point_interaction import classify_spectrum, point_spectrum

    cl = classify_spectrum(cfg.matrix, cfg.m, tol=cfg.tol)
    return {"case": cl.case_label.value, "point_spectrum": cl.point_spectrum_kind.value,
            "eigenvalues": _records(point_spectrum(cfg.matrix, cfg.m))}


def _resolvent(cfg):
    from .point_interaction import resolvent_kernel

    K = resolvent_kernel(cfg.matrix, cfg.m, cfg.z, tol=cfg.tol)
    L = 2.0 if cfg.L is None else cfg.L
    N = 5 if cfg.N is None else cfg.N
    grid = np.linspace(-L, L, N)
    samples = []
    for x in grid:
        for y in grid:
            k = np.asarray(K(x, y))
            samples.append({"x": float(x), "y": float(y),
                            "kernel": [[_cx(v) for v in row] for row in k]})
    return {"grid": [float(g) for g in grid], "samples": samples}


def _approx_spectrum(cfg):
    from .approximation import approx_eigenvalues, spectral_enclosure

    region = cfg.region or _default_region(cfg.m)
    rows = []
    for eps in cfg.eps:
        roots = approx_eigenvalues(cfg.matrix, cfg.m, eps, cfg.profile, region, tol=cfg.tol)
        rows.append({"eps": eps, "enclosure": float(spectral_enclosure(cfg.matrix, eps, cfg.profile)),
                     "eigenvalues": [{"z": _cx(r.z), "multiplicity": int(r.multiplicity),
                                      "residual": float(r.residual)} for r in roots]})
    return {"region": list(region), "results": rows}


def _approx_converge(cfg):
    from .approximation import hs_distance

    N = 400 if cfg.N is None else cfg.N
    table = []
    for eps in cfg.eps:
        d = hs_distance(cfg.matrix, cfg.m, cfg.z, eps, cfg.profile, truncation_L=cfg.L, grid_N=N)
        table.append({"eps": eps, "hs_distance": d.value, "tail_bound": d.tail_bound,
                      "L": float(d.L), "nodes": int(d.nodes)})
    return {"columns": ["eps", "hs_distance", "tail_bound", "L", "nodes"], "table": table}


def _nonrel_converge(cfg):
    from .nonrelativistic import nonrel_limit_distance

    z = -1.0 + 0j if cfg.z is None else cfg.z
    N = 1601 if cfg.N is None else cfg.N
    table = []
    for c in cfg.c:
        d = nonrel_limit_distance(cfg.matrix, cfg.m, c, z, truncation_L=cfg.L, grid_N=N)
        table.append({"c": c, "distance": d.value, "tail_bound": d.tail_bound,
                      "L": float(d.L), "nodes": int(d.nodes)})
    return {"z": _cx(z), "columns": ["c", "distance", "tail_bound", "L", "nodes"], "table": table}


def _oracle_verify(cfg):
    from .approximation import approx_eigenvalues
    from .oracle import fourier_dirac_matrix

    region = cfg.region or _default_region(cfg.m)
    L = 8.0 if cfg.L is None else cfg.L
    if cfg.N is None:
        # smallest power of two that resolves every epsilon (eps >= 4h)
        N = int(2 ** math.ceil(math.log2(8.0 * L / min(cfg.eps))))
    else:
        N = cfg.N
    table = []
    for eps in cfg.eps:
        roots = approx_eigenvalues(cfg.matrix, cfg.m, eps, cfg.profile, region, tol=cfg.tol)
        if not roots:
            continue
        op = fourier_dirac_matrix(cfg.matrix, cfg.m, eps, cfg.profile, L, N)
        for r in roots:
            ev = op.eigenvalues_near(r.z, 1)[0]
            table.append({"eps": eps, "analytic_re": r.z.real, "analytic_im": r.z.imag,
                          "discrete_re": float(ev.real), "discrete_im": float(ev.imag),
                          "difference": float(abs(ev - r.z))})
    return {"L": L, "N": N,
            "columns": ["eps", "analytic_re", "analytic_im", "discrete_re", "discrete_im",
                        "difference"],
            "table": table}


_DISPATCH = {
    "classify": _classify,
    "spectrum": _spectrum,
    "resolvent": _resolvent,
    "approx-spectrum": _approx_spectrum,
    "approx-converge": _approx_converge,
    "nonrel-converge": _nonrel_converge,
    "oracle-verify": _oracle_verify,
}


# ---------------------------------------------------------------- documents

_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_RECORD = {"type": "object", "required": ["z", "multiplicity", "residual"],
           "properties": {"z": _PAIR, "multiplicity": {"type": "integer", "minimum": 1},
                          "residual": {"type": "number", "minimum": 0}}}
_TABLE = {"type": "array", "items": {"type": "object",
                                     "additionalProperties": {"type": "number"}}}
_RESULT_SCHEMAS = {
    "classify": {"required": ["case", "point_spectrum", "eigenvalues"],
                 "properties": {"case": {"type": "string"}, "point_spectrum": {"type": "string"},
                                "eigenvalues": {"type": "array", "items": _RECORD}}},
    "resolvent": {"required": ["grid", "samples"],
                  "properties": {"grid": {"type": "array", "items": {"type": "number"}},
                                 "samples": {"type": "array", "items": {
                                     "type": "object", "required": ["x", "y", "kernel"],
                                     "properties": {"kernel": {
                                         "type": "array", "minItems": 2, "maxItems": 2,
                                         "items": {"type": "array", "items": _PAIR,
                                                   "minItems": 2, "maxItems": 2}}}}}}},
    "approx-spectrum": {"required": ["region", "results"],
                        "properties": {"results": {"type": "array", "items": {
                            "type": "object", "required": ["eps", "enclosure", "eigenvalues"],
                            "properties": {"eigenvalues": {"type": "array", "items": _RECORD}}}}}},
    "table": {"required": ["columns", "table"],
              "properties": {"columns": {"type": "array", "items": {"type": "string"}},
                             "table": _TABLE}},
}
_RESULT_SCHEMAS["spectrum"] = _RESULT_SCHEMAS["classify"]
for _cmd in TABLE_COMMANDS:
    _RESULT_SCHEMAS[_cmd] = _RESULT_SCHEMAS["table"]


def document_schema(command):
    result = dict(_RESULT_SCHEMAS[command], type="object")
    return {"type": "object", "required": ["command", "inputs", "result"],
            "properties": {"command": {"const": command},
                           "inputs": {"type": "object", "required": ["A", "m"],
                                      "properties": {"A": {"type": "array"},
                                                     "m": {"type": "number"}}},
                           "result": result}}


def validate_document(doc):
    """Check a parsed output document; re-validates the echoed inputs too."""
    cmd = doc.get("command")
    if cmd not in COMMANDS:
        raise ConfigError(f"document has unknown command {cmd!r}")
    jsonschema.validate(doc, document_schema(cmd))
    inp = doc["inputs"]
    cfg = JobConfig(
        command=cmd,
        A=tuple(_uncx(p) for row in inp["A"] for p in row),
        m=inp["m"], c=tuple(inp["c"]),
        z=_uncx(inp["z"]) if inp.get("z") is not None else None,
        eps=tuple(inp["eps"]), profile=inp["profile"],
        region=tuple(inp["region"]) if inp.get("region") is not None else None,
        L=inp.get("L"), N=inp.get("N"), tol=inp["tol"],
    )
    cfg.validate()
    return cfg


def run(cfg: JobConfig):
    """Execute a validated job; returns ``(exit_code, document or None)``."""
    try:
        result = _DISPATCH[cfg.command](cfg)
    except NumericalError as exc:
        print(f"diracpi: numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL, None
    except ValueError as exc:
        print(f"diracpi: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG, None
    doc = {"command": cfg.command, "inputs": cfg.echo(), "result": result}
    return EXIT_OK, doc


def render(doc, fmt="json"):
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"
    result = doc["result"]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=result["columns"], lineterminator="\n")
    writer.writeheader()
    for row in result["table"]:
        writer.writerow({k: repr(int(row[k]) if isinstance(row[k], int) else float(row[k]))
                         for k in result["columns"]})
    return buf.getvalue()


def build_parser():
    p = argparse.ArgumentParser(prog="diracpi", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--A", help="a_re,a_im,b_re,b_im,g_re,g_im,d_re,d_im (row-major)")
    p.add_argument("--m", type=float, default=1.0, help="mass (default 1)")
    p.add_argument("--c", default="10,20,40", help="speeds of light for nonrel-converge")
    p.add_argument("--z", help="spectral parameter re,im")
    p.add_argument("--eps", default="0.2,0.1,0.05", help="comma-separated epsilons")
    p.add_argument("--profile", default="box", help="box|triangle|gauss[:sigma]|file:<path>")
    p.add_argument("--region", help="x0,x1,y0,y1 search rectangle")
    p.add_argument("--L", type=float, help="truncation or box half-length")
    p.add_argument("--N", type=int, help="grid size")
    p.add_argument("--tol", type=float, default=1e-12, help="classification/root tolerance")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", default="json", choices=("json", "csv"))
    return p


_VALUE_FLAGS = ("--A", "--z", "--c", "--eps", "--region", "--m", "--L")


def _attach_negative_values(argv):
    """Rewrite ``--z -1,1`` as ``--z=-1,1`` so argparse does not take it for a flag."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and argv[i + 1][1:2] in "0123456789.":
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        cfg = JobConfig.from_args(ns)
    except ConfigError as exc:
        print(f"diracpi: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    code, doc = run(cfg)
    if doc is None:
        return code
    text = render(doc, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

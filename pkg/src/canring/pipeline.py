"""Run configuration, per-check records, and the end-to-end verification run."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable

from . import families as fam
from ._qq import BACKEND, format_q, qq
from .groebner import groebner, ideal_equal
from .linalg import cokernel_dims, hilbert_match, plurigenus, quotient_dims, minimal_generator_degrees
from .matrix import determinant, is_extrasymmetric
from .order import grevlex
from .poly import Poly, weighted_degree

SCHEMA = "canring-report/1"

CHECKS = (
    "formats",
    "hilbert",
    "rtilde",
    "tacnode",
    "pfaffians",
    "deformation",
    "bpf",
    "degeneration",
)
OPAQUE_CHECKS = ("pfaffians", "deformation")


class ConfigError(ValueError):
    pass


def expected_dims(max_degree: int) -> list:
    """p_g = 4 in degree 1, the plurigenus 5 + 7m(m-1)/2 from degree 2 on."""
    return [4] + [plurigenus(m) for m in range(2, max_degree + 1)]


@dataclass
class RunConfig:
    seeds: list = field(default_factory=lambda: [1, 2, 3])
    mode: str = "expanded"
    t_values: list = field(default_factory=lambda: ["1", "1/2", "-1", "3"])
    max_degree: int = 6
    checks: list = field(default_factory=lambda: list(CHECKS))
    slow: bool = False
    family: dict = field(default_factory=dict)
    bpf_quadrics: list | None = None

    def __post_init__(self):
        if not self.seeds or not all(isinstance(s, int) and not isinstance(s, bool) for s in self.seeds):
            raise ConfigError("seeds must be a nonempty list of integers")
        if self.mode not in ("expanded", "opaque"):
            raise ConfigError(f"mode must be expanded or opaque, got {self.mode!r}")
        if not isinstance(self.max_degree, int) or self.max_degree < 3:
            raise ConfigError("max_degree must be an integer >= 3")
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}; known: {list(CHECKS)}")
        try:
            self.t_values = [format_q(qq(str(t))) for t in self.t_values]
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise ConfigError(f"bad t value: {exc}") from None
        if "deformation" in self.checks and not self.t_values:
            raise ConfigError("t_values must be nonempty when the deformation check is enabled")
        if self.bpf_quadrics is not None and len(self.bpf_quadrics) != 4:
            raise ConfigError("bpf_quadrics needs exactly four quadrics")
        # keep the requested checks in canonical order
        self.checks = [c for c in CHECKS if c in self.checks]

    @classmethod
    def from_mapping(cls, d: dict) -> "RunConfig":
        known = {"seeds", "seed", "mode", "t_values", "max_degree", "checks", "slow", "family", "bpf_quadrics"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        d = dict(d)
        if "seed" in d:
            d["seeds"] = [d.pop("seed")]
        return cls(**d)

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        try:
            with open(path) as fh:
                d = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_mapping(d)

    def to_json(self) -> dict:
        return {
            "seeds": list(self.seeds),
            "mode": self.mode,
            "t_values": list(self.t_values),
            "max_degree": self.max_degree,
            "checks": list(self.checks),
            "slow": self.slow,
            "family": dict(self.family),
            "bpf_quadrics": self.bpf_quadrics,
        }


@dataclass
class CheckRecord:
    name: str
    status: str  # pass | fail | skipped
    inputs: dict
    data: dict
    wall_time: float

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "inputs": self.inputs,
            "data": self.data,
            "wall_time": round(self.wall_time, 4),
        }


@dataclass
class Report:
    config: RunConfig
    checks: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return "fail" if any(c.status == "fail" for c in self.checks) else "pass"

    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "backend": BACKEND,
            "status": self.status,
            "summary": self.counts(),
            "config": self.config.to_json(),
            "checks": [c.to_json() for c in self.checks],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def summary_lines(self) -> list:
        lines = []
        for c in self.checks:
            where = ", ".join(f"{k}={v}" for k, v in c.inputs.items() if k in ("seed", "t"))
            lines.append(f"{c.status.upper():7s} {c.name}" + (f" [{where}]" if where else ""))
        cnt = self.counts()
        lines.append(f"{self.status.upper()}: {cnt['pass']} passed, {cnt['fail']} failed, {cnt['skipped']} skipped")
        return lines


def _status(ok) -> str:
    if ok is None:
        return "skipped"
    return "pass" if ok else "fail"


class _Runner:
    def __init__(self, config: RunConfig):
        self.config = config
        self.report = Report(config)

    def record(self, name: str, inputs: dict, fn: Callable[[], tuple]):
        t0 = time.perf_counter()
        try:
            ok, data = fn()
        except Exception as exc:  # per-check failures are recorded, not raised
            ok, data = False, {"error": f"{type(exc).__name__}: {exc}"}
        self.report.checks.append(CheckRecord(name, _status(ok), inputs, data, time.perf_counter() - t0))
        return ok, data


# -- individual checks ------------------------------------------------------
def check_formats(data: fam.FamilyData) -> tuple:
    rf = fam.build_rolling(data)
    _, f8_disp, f9_disp = fam.displayed_relations(data)
    minors_gb = groebner(rf.minors, grevlex(fam.R))
    f9_roll = fam.rolled_f9(rf)
    A, M = fam.build_amta(data)
    amta = fam.amta_ideal(A, M)
    x = fam.derive_extrasym(data)
    P = fam.build_extrasym(x)
    sel = fam.select_generating_pfaffians(P)
    dec = is_extrasymmetric(P)
    res = {
        "f8_is_exact_roll_of_f7": rf.f8 == f8_disp,
        "rolled_f9_minus_displayed_in_minor_ideal": not minors_gb.reduce(f9_roll - f9_disp).terms,
        "degrees": sorted(weighted_degree(p) for p in rf.ideal),
        "M_bottom_right": str(M[3, 3]),
        "P_is_extrasymmetric": dec.a == fam.R.zero and dec.p == x.Qbar3 and dec.q == x.Qbar1,
        "rolling_eq_amta": ideal_equal(rf.ideal, amta),
        "rolling_eq_extrasym": sel.ok and ideal_equal(rf.ideal, sel.chosen),
        "amta_eq_extrasym": sel.ok and ideal_equal(amta, sel.chosen),
    }
    ok = all(v for k, v in res.items() if isinstance(v, bool)) and res["degrees"] == fam.ROLLING_DEGREES
    return ok, res


def check_hilbert(data: fam.FamilyData, max_degree: int) -> tuple:
    rf = fam.build_rolling(data)
    dims = quotient_dims(rf.ideal, fam.R, max_degree)
    want = expected_dims(max_degree)
    degs = list(range(2, max_degree + 1))
    ok = dims.as_list() == want and hilbert_match(dims, plurigenus, degs)
    return ok, {"dims": dims.as_list(), "degrees": sorted(dims.dims), "engines": dims.to_json()["engines"], "expected": want}


def check_rtilde(data: fam.FamilyData) -> tuple:
    pres = fam.rtilde_presentation(data)
    cok = cokernel_dims(pres, 6, 1)
    quad = [3 * m * m - 4 * m + 6 for m in range(2, 7)]
    got = [cok[m] for m in range(2, 7)]
    dual = pres.transpose(shift=4)
    m1 = cokernel_dims(dual, 1, 1)[1]
    qd = quotient_dims(fam.build_rolling(data).ideal, fam.R, 6)
    diff = [qd[m] - cok[m] for m in range(2, 7)]
    want_diff = [m * (m + 1) // 2 - 1 for m in range(2, 7)]
    det_ok = determinant(pres.matrix) == fam.sextic_equation(data)
    ok = got == quad and m1 == 13 and diff == want_diff and det_ok
    return ok, {
        "cokernel_dims": got,
        "expected": quad,
        "dual_degrees": {"source": dual.source_degrees, "target": dual.target_degrees},
        "dim_M1": m1,
        "quotient_minus_cokernel": diff,
        "expected_difference": want_diff,
        "det_alpha_equals_F6": det_ok,
    }


def check_tacnode(data: fam.FamilyData) -> tuple:
    F = fam.sextic_equation(data)
    rep = fam.tacnode_check(F)
    forb = fam.forbidden_monomials(data)
    offending = [f"{k}:{m}" for k, ms in forb.items() for m in ms]
    ok = rep["ok"] and not offending
    return ok, {**rep, "offending_monomials": offending}


def check_pfaffians(x: fam.ExtrasymData) -> tuple:
    P = fam.build_extrasym(x)
    sel = fam.select_generating_pfaffians(P)
    return sel.ok, sel.to_json()


def check_bpf(quadrics) -> tuple:
    alpha = fam.bpf_alpha(quadrics)
    rc = fam.rank_condition_holds(alpha)
    lin, quad, _ = fam.bpf_ideal(alpha)
    I = lin + quad
    degs = [weighted_degree(p) for p in I]
    mind = minimal_generator_degrees(I)
    dims = quotient_dims(I, fam.B, 6)
    corner = determinant(alpha.submatrix([1, 2], [1, 2]))
    corner_ok = corner == fam.Y.parse("y0*y1 - y2^2")
    ok = rc and mind == fam.BPF_MIN_DEGREES and dims.as_list() == expected_dims(6) and corner_ok
    return ok, {
        "rank_condition": rc,
        "relation_degrees": degs,
        "minimal_generator_degrees": mind,
        "dims": dims.as_list(),
        "corner_minor": str(corner),
        "quadratic_relations": [str(p) for p in quad],
    }


def check_degeneration(x: fam.ExtrasymData, data: fam.FamilyData, slow: bool) -> tuple:
    rep = fam.degeneration_report(x)
    ok = rep["limit_multiple_of_y2y3"] and rep["independent_of_y0"]
    if slow:
        sep = fam.septic_limit(x, data)
        rep["septic"] = sep
        ok = ok and sep["matches_x2_F6"]
    return ok, rep


def run_pipeline(config: RunConfig) -> Report:
    run = _Runner(config)
    checks = set(config.checks)
    opaque = config.mode == "opaque"
    for seed in config.seeds:
        base = {"seed": seed}
        if opaque:
            x = fam.opaque_extrasym()
            family_json = {"mode": "opaque"}
        else:
            try:
                data = fam.sample_family_data(seed, config.family)
            except Exception as exc:
                run.record("family", base, lambda exc=exc: (False, {"error": str(exc)}))
                continue
            family_json = data.to_json()
            x = fam.derive_extrasym(data)
        inputs = {**base, "family": family_json}
        for name in ("formats", "hilbert", "rtilde", "tacnode"):
            if name not in checks:
                continue
            if opaque:
                run.record(name, inputs, lambda: (None, {"reason": "expanded mode only"}))
                continue
            fn = {
                "formats": lambda: check_formats(data),
                "hilbert": lambda: check_hilbert(data, config.max_degree),
                "rtilde": lambda: check_rtilde(data),
                "tacnode": lambda: check_tacnode(data),
            }[name]
            run.record(name, inputs, fn)
        subsets = None
        if "pfaffians" in checks or "deformation" in checks:
            ok, sel = run.record("pfaffians", inputs, lambda: check_pfaffians(x))
            if ok:
                subsets = [tuple(i - 1 for i in s) for s in sel["subsets"]]
        if "deformation" in checks:
            baseline = None
            if not opaque:
                P = fam.build_extrasym(x)
                allpf = [p for _, p in fam.sub_pfaffians(P, 4) if p.terms]
                baseline = quotient_dims(allpf, fam.R, config.max_degree).as_list()
            for tv in config.t_values:
                t_inputs = {**base, "t": tv, "family": family_json}
                t0 = time.perf_counter()
                try:
                    res = fam.verify_deformation(x, tv, subsets=subsets, baseline=baseline, max_degree=config.max_degree)
                except Exception as exc:
                    res = {"elimination": (False, {"error": f"{type(exc).__name__}: {exc}"})}
                elapsed = time.perf_counter() - t0
                for sub in ("hilbert", "elimination", "shortcut"):
                    if sub not in res:
                        continue
                    ok, payload = res[sub]
                    if sub == "hilbert" and baseline is not None:
                        payload = {**payload, "plurigenus_match": hilbert_match(
                            dict(zip(range(1, config.max_degree + 1), payload["dims"])),
                            plurigenus, list(range(2, config.max_degree + 1)))}
                        ok = ok and payload["plurigenus_match"]
                    run.report.checks.append(
                        CheckRecord(f"deformation.{sub}", _status(ok), t_inputs, payload, elapsed)
                    )
        if "bpf" in checks:
            if config.bpf_quadrics is not None:
                quads = [fam.Y.parse(q) for q in config.bpf_quadrics]
            else:
                quads = fam.random_quadrics(seed)
            b_inputs = {**base, "bpf_quadrics": [str(q) for q in quads]}
            run.record("bpf", b_inputs, lambda: check_bpf(quads))
        if "degeneration" in checks:
            if opaque:
                run.record("degeneration", inputs, lambda: (None, {"reason": "expanded mode only"}))
            else:
                run.record("degeneration", inputs, lambda: check_degeneration(x, data, config.slow))
    return run.report

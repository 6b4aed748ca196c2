"""Command-line front end.

    bergman-rigidity classify --spec disk.txt --out rows.tsv

A spec file is line oriented ``key = value`` with ``#`` comments.  Complex
numbers are written ``re+imi``; lists (``punctures``, ``points``,
``profile``) are ``;``-separated.  Smooth domains give ``outer = <family>
k=v ...`` and any number of ``hole = <family> k=v ...`` lines.

Every check becomes one tab-separated row ``check, inputs, value,
reference, provenance, tol, status``; the text summary is built from the
same rows.  Exit status is 0 when every row passes, 1 when any fails and 2
for unusable input.
"""
from __future__ import annotations

import argparse
import logging
import sys
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from . import bergman, oracles, potential, reinhardt2, rigidity, szego
from .errors import DomainError, NumericalFailure, NumericalFailureWarning
from .geometry import (
    CURVE_FAMILIES,
    Annulus,
    Disk,
    PuncturedDisk,
    ReinhardtProfile2,
    UnboundedDomain,
    build_smooth,
    interior_samples,
)

log = logging.getLogger(__name__)

COMMANDS = ("area", "bergman", "suita", "szego", "classify", "sublevel", "reinhardt", "all")
PROVENANCE = ("paper", "closed-form oracle", "self-consistency")

#: Default tolerances; a spec file overrides them with ``tol_<name> = value``.
TOLERANCES = {
    "area": 1e-10,
    "orthonormality": 1e-10,
    "kernel": 1e-6,
    "volume_ineq": 1e-8,
    "reproduce": 1e-10,
    "mean_one": 1e-10,
    "transform": 1e-10,
    "minimal": 1e-4,
    "constancy": 1e-4,
    "radius": 1e-3,
    "szego": 1e-6,
    "szego_fit": 1e-5,
    "flux": 1e-8,
    "refinement": 1e-13,
    "robin": 1e-6,
    "suita": 1e-6,
    "sublevel_step": 1e-9,
    "sublevel_const": 1e-6,
    "sublevel_limit": 0.02,
    "reinhardt_volume": 1e-6,
    "identity": 1e-12,
    "hessian": 1e-9,
    "roots": 1e-9,
    "oscillation": 1e-12,
}

SUBLEVEL_TAUS = tuple(-0.5 * k for k in range(1, 9))
FIT_DEGREE = 60


class SpecError(ValueError):
    """Malformed or invalid spec; carries the line number and field."""

    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"field '{key}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


# -- spec parsing ---------------------------------------------------------------


def parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "")
    if not s or "j" in s or "J" in s:
        raise ValueError(f"not a complex number: {text!r}")
    return complex(s.replace("i", "j"))


def _positive(x: float) -> float:
    if not x > 0:
        raise ValueError("must be positive")
    return x


def _float(text: str) -> float:
    x = float(text)
    if not np.isfinite(x):
        raise ValueError("must be finite")
    return x


def _int(text: str) -> int:
    return int(text)


def _complex_list(text: str) -> tuple:
    return tuple(parse_complex(p) for p in text.split(";") if p.strip())


def _float_list(text: str) -> tuple:
    return tuple(_float(p) for p in text.split(";") if p.strip())


_CURVE_ARGS = {
    "circle": {"center": parse_complex, "radius": lambda s: _positive(_float(s))},
    "rose": {
        "center": parse_complex,
        "radius": lambda s: _positive(_float(s)),
        "amplitude": _float,
        "lobes": _int,
    },
    "ellipse": {
        "center": parse_complex,
        "a": lambda s: _positive(_float(s)),
        "b": lambda s: _positive(_float(s)),
        "angle": _float,
    },
}


_CURVE_DEFAULTS = {"center": 0j, "angle": 0.0}


def _curve(text: str):
    parts = text.split()
    if not parts or parts[0] not in CURVE_FAMILIES:
        raise ValueError(f"curve family must be one of {sorted(CURVE_FAMILIES)}")
    family, schema = parts[0], _CURVE_ARGS[parts[0]]
    kwargs = {}
    for item in parts[1:]:
        key, sep, val = item.partition("=")
        if not sep or key not in schema:
            raise ValueError(f"unknown {family} argument {item!r}; expected {sorted(schema)}")
        kwargs[key] = schema[key](val)
    kwargs = {**{k: v for k, v in _CURVE_DEFAULTS.items() if k in schema}, **kwargs}
    missing = sorted(set(schema) - set(kwargs))
    if missing:
        raise ValueError(f"{family} needs {', '.join(missing)}")
    return CURVE_FAMILIES[family](**kwargs)


_COMMON = {
    "kind": str,
    "name": str,
    "degree": lambda s: int(_positive(_int(s))),
    "nodes": lambda s: int(_positive(_int(s))),
    "grid": lambda s: int(_positive(_int(s))),
    "guard": lambda s: _positive(_float(s)),
    "seed": _int,
    "points": _complex_list,
}

_KINDS = {
    "disk": {"center": parse_complex, "radius": lambda s: _positive(_float(s))},
    "punctured_disk": {"center": parse_complex, "radius": lambda s: _positive(_float(s)), "punctures": _complex_list},
    "annulus": {"center": parse_complex, "inner": lambda s: _positive(_float(s)), "outer": lambda s: _positive(_float(s))},
    "smooth": {"outer": _curve, "hole": _curve},
    "reinhardt2": {"profile": _float_list},
    "unbounded": {"label": str},
}
_REQUIRED = {"punctured_disk": ("punctures",), "smooth": ("outer",)}
_REPEATABLE = {"hole"}


@dataclass
class DomainSpec:
    kind: str
    params: dict = field(default_factory=dict)
    settings: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=lambda: dict(TOLERANCES))
    source: str = "<spec>"

    def build(self):
        p = self.params
        if self.kind == "disk":
            return Disk(p.get("center", 0j), p.get("radius", 1.0))
        if self.kind == "punctured_disk":
            return PuncturedDisk(p.get("center", 0j), p.get("radius", 1.0), p["punctures"])
        if self.kind == "annulus":
            return Annulus(p.get("center", 0j), p.get("inner", 0.5), p.get("outer", 1.0))
        if self.kind == "smooth":
            return build_smooth(p["outer"], p.get("hole", []))
        if self.kind == "reinhardt2":
            return ReinhardtProfile2(p.get("profile", (1.0, 1.0)))
        return UnboundedDomain(p.get("label", UnboundedDomain.label))


def parse_spec(text: str, source: str = "<spec>") -> DomainSpec:
    """Parse and validate a spec; raises :class:`SpecError` with a line and field."""
    entries: list[tuple[int, str, str]] = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise SpecError("expected 'key = value'", n)
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise SpecError("empty key or value", n, key or None)
        entries.append((n, key, value))
    kinds = [(n, v) for n, k, v in entries if k == "kind"]
    if not kinds:
        raise SpecError("missing 'kind'")
    if len(kinds) > 1:
        raise SpecError("'kind' given more than once", kinds[1][0], "kind")
    kline, kind = kinds[0]
    if kind not in _KINDS:
        raise SpecError(f"unknown kind {kind!r}; expected one of {sorted(_KINDS)}", kline, "kind")
    spec = DomainSpec(kind, source=source)
    schema = _KINDS[kind]
    seen: set[str] = set()
    for n, key, value in entries:
        if key == "kind":
            continue
        if key in seen and key not in _REPEATABLE:
            raise SpecError("given more than once", n, key)
        seen.add(key)
        try:
            if key.startswith("tol_"):
                name = key[4:]
                if name not in TOLERANCES:
                    raise SpecError(f"unknown tolerance; expected one of {sorted(TOLERANCES)}", n, key)
                tol = _float(value)
                if tol < 0:
                    raise ValueError("must be nonnegative")
                spec.tolerances[name] = tol
            elif key in _COMMON:
                spec.settings[key] = _COMMON[key](value)
            elif key in schema:
                parsed = schema[key](value)
                if key in _REPEATABLE:
                    spec.params.setdefault(key, []).append(parsed)
                else:
                    spec.params[key] = parsed
            else:
                raise SpecError(f"unknown key for kind {kind!r}", n, key)
        except SpecError:
            raise
        except (ValueError, TypeError) as exc:
            raise SpecError(str(exc), n, key) from None
    for key in _REQUIRED.get(kind, ()):
        if key not in spec.params:
            raise SpecError(f"required for kind {kind!r}", kline, key)
    try:
        spec.build()
    except DomainError as exc:
        raise SpecError(f"invalid domain: {exc}", kline, "kind") from None
    return spec


# -- report rows ----------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, complex) or np.iscomplexobj(x):
        z = complex(x)
        return f"{z.real:.10g}{z.imag:+.10g}i"
    return f"{float(x):.10g}"


@dataclass(frozen=True)
class ReportRow:
    check: str
    inputs: str
    value: str
    reference: str
    provenance: str
    tol: str
    status: str

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def tsv(self) -> str:
        return "\t".join((self.check, self.inputs, self.value, self.reference, self.provenance, self.tol, self.status))


HEADER = "check\tinputs\tvalue\treference\tprovenance\ttol\tstatus"


def row(check: str, inputs, value, reference, provenance: str, tol, ok: bool) -> ReportRow:
    if provenance not in PROVENANCE:
        raise ValueError(f"unknown provenance {provenance!r}")
    return ReportRow(check, _fmt(inputs), _fmt(value), _fmt(reference), provenance, _fmt(tol), "pass" if ok else "fail")


def close_row(check, inputs, value, reference, provenance, tol) -> ReportRow:
    ok = bool(np.isfinite(abs(value)) and abs(value - reference) <= tol)
    return row(check, inputs, value, reference, provenance, tol, ok)


def at_most_row(check, inputs, value, provenance, tol) -> ReportRow:
    ok = bool(np.isfinite(value) and value <= tol)
    return row(check, inputs, value, "0", provenance, tol, ok)


def at_least_row(check, inputs, value, bound, provenance, tol) -> ReportRow:
    ok = bool(np.isfinite(value) and value >= bound - tol)
    return row(check, inputs, value, f">= {_fmt(bound)}", provenance, tol, ok)


# -- runner -------------------------------------------------------------------


class Runner:
    """Runs the check suites for one spec; caches shared objects between commands."""

    def __init__(self, spec: DomainSpec, degree: int | None = None, nodes: int | None = None,
                 grid: int | None = None, tol_scale: float = 1.0):
        self.spec = spec
        s = spec.settings
        self.degree = degree or s.get("degree", bergman.DEFAULT_DEGREE)
        self.nodes = nodes or s.get("nodes", szego.DEFAULT_NODES)
        self.grid = grid or s.get("grid", rigidity.DEFAULT_GRID)
        self.guard = s.get("guard", bergman.DEFAULT_GUARD)
        self.seed = s.get("seed", 0)
        self.tol = {k: v * tol_scale for k, v in spec.tolerances.items()}

    @cached_property
    def domain(self):
        return self.spec.build()

    @property
    def planar(self) -> bool:
        return self.spec.kind in ("disk", "punctured_disk", "annulus", "smooth")

    @property
    def disk_like(self) -> bool:
        return isinstance(self.domain, Disk)

    @cached_property
    def basis(self):
        return bergman.orthonormalize(self.domain, degree=self.degree, guard=self.guard)

    def converged(self, points, tol: float):
        """Basis whose kernel diagonal is stable to ``tol`` at ``points`` (degree doubled from the setting)."""
        return bergman.converged_basis(self.domain, points, tol, degree=self.degree,
                                       max_degree=max(8 * bergman.DEFAULT_DEGREE, self.degree), guard=self.guard)

    @cached_property
    def points(self) -> np.ndarray:
        d = self.domain
        if "points" in self.spec.settings:
            pts = np.array(self.spec.settings["points"], dtype=complex)
            bad = pts[~d.inside_mask(pts)]
            if bad.size:
                raise SpecError(f"{_fmt(complex(bad[0]))} is not an interior point", key="points")
            return pts
        if isinstance(d, Disk):
            pts = d.center + d.radius * np.array([0, 0.5, -0.3 + 0.4j, 0.6j, -0.45 - 0.45j])
        elif isinstance(d, Annulus):
            rm, w = np.sqrt(d.inner * d.outer), d.outer - d.inner
            pts = d.center + np.array([rm, (d.inner + 0.4 * w) * np.exp(2.1j), (d.inner + 0.6 * w) * np.exp(4.0j)])
        else:
            pts = interior_samples(d, 3, np.random.default_rng(self.seed), 0.3 * d.inradius)
        return pts[d.inside_mask(pts, 1e-6)]

    @cached_property
    def green(self):
        return potential.green_function(self.domain, self.nodes)

    def _require(self, command: str):
        if not self.planar:
            raise SpecError(f"command {command!r} does not apply to kind {self.spec.kind!r}", key="kind")

    # -- commands --------------------------------------------------------------

    def area(self) -> list[ReportRow]:
        if self.spec.kind == "unbounded":
            return [row("area", self.domain.label, "inf", "inf", "paper", 0, True)]
        if self.spec.kind == "reinhardt2":
            return self._reinhardt_volume_rows()
        d, t = self.domain, self.tol["area"]
        computed = d.stokes_area(self.nodes)
        exact = d.exact_area()
        if exact is not None:
            return [close_row("area", f"nodes={self.nodes}", computed, exact, "closed-form oracle", t * max(1, exact))]
        finer = d.stokes_area(2 * self.nodes)
        return [close_row("area", f"nodes={self.nodes} vs {2 * self.nodes}", computed, finer, "self-consistency", t * max(1, finer))]

    def bergman(self) -> list[ReportRow]:
        self._require("bergman")
        d, b, t = self.domain, self.basis, self.tol
        inp = f"degree={self.degree} size={b.size}"
        rows = [at_most_row("orthonormality_defect", inp, b.orthonormality_defect(), "self-consistency", t["orthonormality"])]
        rows += self._kernel_oracle_rows()
        grid = rigidity._scan_points(d, b, self.grid)
        margins = b.diag(grid) * d.area - 1.0
        rows.append(at_least_row("volume_inequality_min", f"grid={self.grid} points={grid.size}", float(margins.min()), 0.0, "paper", t["volume_ineq"]))
        rows.append(at_most_row("reproduce_1+2z+z^2", _fmt(complex(self.points[0])),
                                bergman.reproduce_residual(b, [1, 2, 1], self.points[0]), "paper", t["reproduce"]))
        for z in self.points:
            rows.append(at_most_row("mean_one", _fmt(complex(z)), rigidity.mean_one_check(b, z), "paper", t["mean_one"]))
        if self.disk_like:
            c = d.radius * np.exp(0.3j)
            rows.append(at_most_row("transformation_law", f"f(z)={_fmt(c)}z", bergman.transformation_residual(c, self.degree), "paper", t["transform"]))
        return rows

    def _kernel_oracle_rows(self) -> list[ReportRow]:
        d, tol = self.domain, self.tol["kernel"]
        b = self.basis
        g = np.exp(2j * np.pi * np.arange(5) / 5)
        if isinstance(d, Disk):
            z = d.center + 0.7 * d.radius * np.array([0, 0.5, 1.0, 0.8, 0.3]) * g
            w = d.center + 0.7 * d.radius * np.array([1.0, 0.2, 0.6, 0.0, 0.9]) * np.conj(g)
            zz, ww = np.meshgrid(z, w, indexing="ij")
            ref = oracles.disk_bergman(zz.ravel(), ww.ravel(), d.center, d.radius)
            label = "25 pairs |z|,|w| <= 0.7r"
        elif isinstance(d, Annulus):
            span = d.outer - d.inner
            z = d.center + (d.inner + span * np.array([0.3, 0.4, 0.5, 0.6, 0.7])) * g
            zz, ww = np.meshgrid(z, z[::-1] * np.exp(0.4j), indexing="ij")
            ref = oracles.annulus_bergman(zz.ravel() - d.center, ww.ravel() - d.center, d.inner, d.outer)
            b = self.converged(np.concatenate([z, ww[0]]), 0.1 * tol)
            label = f"25 pairs in the middle band, converged degree {b.dictionary.degree}"
        else:
            pts = np.concatenate([self.points, interior_samples(d, 5, np.random.default_rng(self.seed), 0.3 * d.inradius)])
            k = b.kernel_matrix(pts, pts)
            err = float(np.max(np.abs(k - k.conj().T)) / np.max(np.abs(k)))
            return [at_most_row("kernel_hermitian", f"{pts.size} points", err, "self-consistency", tol)]
        k = np.array([b.kernel_matrix([a], [c])[0, 0] for a, c in zip(zz.ravel(), ww.ravel())])
        err = float(np.max(np.abs(k - ref)))
        return [at_most_row("kernel_oracle", label, err, "closed-form oracle", tol)]

    def szego(self) -> list[ReportRow]:
        self._require("szego")
        d, t = self.domain, self.tol
        nh = d.connectivity - 1
        rows: list[ReportRow] = []
        solver = szego.SzegoSolver(d, self.nodes)
        if isinstance(d, (Disk, Annulus)):
            a = self.points[0] if not isinstance(d, Disk) else d.center + 0.5 * d.radius
            sol = solver.solve(a)
            zs = self.points
            if isinstance(d, Disk):
                ref = oracles.disk_szego(zs, a, d.center, d.radius)
            else:
                ref = oracles.annulus_szego(zs - d.center, a - d.center, d.inner, d.outer)
            rows.append(at_most_row("szego_oracle", f"a={_fmt(complex(a))}", float(np.max(np.abs(sol(zs) - ref))), "closed-form oracle", t["szego"]))
        fields = [szego.harmonic_measure(d, j, self.nodes) for j in range(nh)]
        basis = self.basis if nh == 0 else bergman.orthonormalize(d, degree=max(FIT_DEGREE, self.degree), guard=self.guard)
        for a in self.points:
            fit = szego.bergman_szego_fit(d, a, basis, self.nodes, self.seed, solver=solver, fields=fields)
            name = "bergman_szego_residual" if nh == 0 else "bergman_szego_fit_residual"
            tol = t["szego"] if nh == 0 else t["szego_fit"]
            rows.append(at_most_row(name, f"a={_fmt(complex(a))} basis={basis.size}", fit.residual, "paper", tol))
        a = self.points[0]
        coarse = szego.bergman_szego_fit(d, a, basis, self.nodes // 2, self.seed, fields=fields).residual
        fine = szego.bergman_szego_fit(d, a, basis, self.nodes, self.seed, solver=solver, fields=fields).residual
        rows.append(row("node_doubling", f"nodes {self.nodes // 2}->{self.nodes}", fine, f"<= {_fmt(coarse)}",
                        "self-consistency", t["refinement"], fine <= coarse + t["refinement"]))
        for a in self.points:
            count = szego.szego_zero_count(d, a, self.nodes, solver.solve(a))
            rows.append(row("szego_zero_count", f"a={_fmt(complex(a))}", count, nh, "paper", 0, count == nh))
        for j in range(nh):
            mean = szego.f_field_mean(d, j, self.nodes)
            rows.append(at_most_row("f_field_mean", f"j={j}", abs(mean), "paper", t["flux"]))
        return rows

    def suita(self) -> list[ReportRow]:
        self._require("suita")
        d, t, gf = self.domain, self.tol, self.green
        basis = self.converged(self.points, 0.1 * t["suita"] / np.pi)
        rows = []
        for z in self.points:
            inp = _fmt(complex(z))
            ext = potential.robin(d, z, method="extrapolate", gf=gf)
            ref = gf.robin_closed_form(z)
            prov = "self-consistency" if isinstance(gf, potential.LayerGreen) else "closed-form oracle"
            rows.append(close_row("robin", inp, ext.value, ref, prov, t["robin"]))
            margin = potential.suita_margin(d, basis, z, gf=gf)
            if self.disk_like:
                rows.append(close_row("suita_equality", inp, margin, 0.0, "paper", t["suita"]))
            else:
                rows.append(at_least_row("suita_margin", f"{inp} degree={basis.dictionary.degree}", margin, 0.0, "paper", t["suita"]))
        return rows

    def classify(self) -> list[ReportRow]:
        if self.spec.kind == "unbounded":
            v = rigidity.classify(self.domain)
            return [row("verdict", self.domain.label, v.verdict.describe(), "InfiniteVolumeCase", "paper", 0, True)]
        self._require("classify")
        d, t = self.domain, self.tol
        v = rigidity.classify(d, self.basis, grid=self.grid, threshold=t["minimal"], constancy_tol=t["constancy"], seed=self.seed)
        ev = v.evidence
        inp = f"grid={self.grid} degree={self.degree}"
        if self.disk_like:
            expected = "DiskMinusPolar"
            prov = "paper"
        elif d.connectivity > 1:
            expected = "NotMinimal"  # a hole of positive area is not polar
            prov = "paper"
        else:
            expected = "DiskMinusPolar or NotMinimal"
            prov = "self-consistency"
        ok = v.consistent and v.name in expected.split(" or ")
        rows = [row("verdict", inp, v.verdict.describe(), expected, prov, 0, ok)]
        rows.append(row("scan_margin", inp, ev["scan_margin"], f"threshold {_fmt(t['minimal'])}", "self-consistency", t["minimal"], True))
        minimal = ev["scan_margin"] <= t["minimal"]
        constant = ev["constancy"] < t["constancy"]
        rows.append(row("minimal_iff_constant_row", f"margin={_fmt(ev['scan_margin'])}", ev["constancy"],
                        "constant" if minimal else "not constant", "paper", t["constancy"], minimal == constant))
        if isinstance(v.verdict, rigidity.DiskMinusPolar) and self.disk_like:
            rows.append(close_row("center", inp, v.verdict.center, d.center, "closed-form oracle", t["radius"] * d.radius))
            rows.append(close_row("radius", inp, v.verdict.radius, d.radius, "closed-form oracle", t["radius"] * d.radius))
        for z in self.points:
            rows.append(at_most_row("mean_one", _fmt(complex(z)), rigidity.mean_one_check(self.basis, z), "paper", t["mean_one"]))
        return rows

    def sublevel(self) -> list[ReportRow]:
        self._require("sublevel")
        d, t = self.domain, self.tol
        z0 = d.center if self.disk_like else complex(self.points[0])
        prof = potential.sublevel_profile(d, z0, SUBLEVEL_TAUS, gf=self.green)
        inp = f"z0={_fmt(z0)}"
        rows = [row("sublevel_dropped", inp, len(prof.dropped), 0, "self-consistency", 0, not prof.dropped)]
        ratios = prof.ratios[np.argsort(-prof.taus)]  # tau from -0.5 down to -4
        steps = np.diff(ratios[::-1])  # increasing tau: must not increase
        worst = float(steps.max()) if steps.size else 0.0
        rows.append(at_most_row("ratio_nonincreasing", inp + " max step", worst, "paper", t["sublevel_step"]))
        if self.disk_like:
            dev = float(np.max(np.abs(prof.ratios - 1.0 / (np.pi * d.radius**2))))
            rows.append(at_most_row("ratio_constant", inp, dev, "closed-form oracle", t["sublevel_const"]))
        lam = potential.robin(d, z0, gf=self.green).value
        if prof.rows:
            tau, vol, _ = min(prof.rows)
            limit = vol * np.exp(-2 * (tau - lam)) / np.pi
            rows.append(close_row("sublevel_limit", f"tau={_fmt(tau)}", limit, 1.0, "paper", t["sublevel_limit"]))
        return rows

    def reinhardt(self) -> list[ReportRow]:
        profile = self.domain
        default = profile == ReinhardtProfile2()
        t = self.tol
        rows = self._reinhardt_volume_rows(profile)
        table = reinhardt2.norm_table(profile=profile)
        rows.append(row("norm_table_invariants", f"N={table.N}", ";".join(table.violations()) or "ok", "ok", "paper", 0, not table.violations()))
        ko = reinhardt2.kernel_origin(table)
        vq = reinhardt2.volume(profile, "quadrature")
        rows.append(close_row("K00_times_volume", "series x quadrature", ko.value * vq, 1.0, "paper", t["identity"]))
        rows.append(row("K00_terms", "", ";".join(f"{p},{q}" for p, q in ko.contributing), "0,0", "paper", 0, ko.contributing == ((0, 0),)))
        eig, resid = reinhardt2.min_hessian_eig_sampled(10_000, self.seed, profile)
        rows.append(close_row("min_hessian_eig", f"10000 boundary samples max|rho|={resid:.2g}", eig, 2.0, "closed-form oracle", t["hessian"]))
        if default:
            roots = reinhardt2.obstruction_roots()
            rows.append(close_row("root_circle", "x^2+2x-2", roots.circle_root, np.sqrt(3) - 1, "closed-form oracle", t["roots"]))
            rows.append(close_row("root_axis", "x^2+x-1", roots.axis_root, (np.sqrt(5) - 1) / 2, "closed-form oracle", t["roots"]))
            rows.append(row("roots_incompatible", "difference", roots.difference, "> 0.1", "paper", 0.1, roots.incompatible))
            a1 = np.sqrt(roots.circle_root)
            for a3 in (0.0, 0.1, 0.3j):
                cc = reinhardt2.circle_constraint_residual(a1, a3)
                zero = a3 == 0
                ok = (cc.oscillation <= t["oscillation"]) == zero
                rows.append(row("theta_oscillation", f"a3={_fmt(complex(a3))}", cc.oscillation,
                                "0" if zero else "> 0", "paper", t["oscillation"], ok))
            mc = reinhardt2.monte_carlo_inner(lambda z1, z2: z1, lambda z1, z2: z2, seed=self.seed)
            rows.append(row("mc_orthogonality_z1_z2", f"{mc.samples} samples (statistical)", mc.value,
                            f"< 3 sigma = {_fmt(3 * mc.sigma)}", "self-consistency", 3 * mc.sigma, mc.consistent_with_zero))
            verdict = reinhardt2.summary(seed=self.seed).verdict
            rows.append(row("verdict", "", verdict, "not biholomorphic to the ball", "paper", 0,
                            verdict == "not biholomorphic to the ball"))
        return rows

    def _reinhardt_volume_rows(self, profile=None) -> list[ReportRow]:
        profile = profile or self.domain
        vq = reinhardt2.volume(profile, "quadrature")
        va = reinhardt2.volume(profile, "antiderivative")
        tol = self.tol["reinhardt_volume"]
        rows = [close_row("volume_two_paths", "quadrature vs antiderivative", vq, va, "self-consistency", tol)]
        if profile == ReinhardtProfile2():
            rows.append(close_row("volume", "pi^2 I(0,0)", vq, reinhardt2.volume_closed_form(), "closed-form oracle", tol))
        return rows

    def run(self, command: str) -> list[ReportRow]:
        if command == "all":
            if self.spec.kind == "reinhardt2":
                names = ["area", "reinhardt"]
            elif self.spec.kind == "unbounded":
                names = ["area", "classify"]
            else:
                names = ["area", "bergman", "szego", "suita", "classify", "sublevel"]
                if self.spec.kind == "punctured_disk":
                    names.remove("szego")  # Hardy spaces need smooth boundary curves
            return [r for name in names for r in self.run(name)]
        if command == "reinhardt":
            if self.spec.kind != "reinhardt2":
                raise SpecError(f"command 'reinhardt' does not apply to kind {self.spec.kind!r}", key="kind")
            return self.reinhardt()
        if command == "classify" and self.spec.kind == "reinhardt2":
            raise SpecError("command 'classify' does not apply to kind 'reinhardt2'", key="kind")
        return getattr(self, command)()


def run_checks(runner: Runner, command: str) -> list[ReportRow]:
    """Run one command, turning numerical-failure flags into failing rows."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            rows = runner.run(command)
        except NumericalFailure as exc:
            rows = [row("numerical_failure", command, str(exc), "none", "self-consistency", 0, False)]
    for w in caught:
        if issubclass(w.category, NumericalFailureWarning):
            rows.append(row("numerical_warning", command, str(w.message), "none", "self-consistency", 0, False))
        else:
            log.info("%s: %s", w.category.__name__, w.message)
    return rows


def summary_text(rows: list[ReportRow], command: str, source: str) -> str:
    lines = [f"{command} on {source}"]
    for r in rows:
        inputs = f" [{r.inputs}]" if r.inputs else ""
        lines.append(f"  {r.status.upper():4s} {r.check}{inputs}: {r.value} (ref {r.reference}, tol {r.tol}, {r.provenance})")
    failed = sum(not r.passed for r in rows)
    lines.append(f"{len(rows) - failed}/{len(rows)} checks passed")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bergman-rigidity", description="Kernel, potential and rigidity checks on planar domains.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--spec", type=Path, help="domain spec file (optional for 'reinhardt')")
    p.add_argument("--out", type=Path, help="write the tab-separated rows here")
    p.add_argument("--degree", type=int, help="basis degree N")
    p.add_argument("--nodes", type=int, help="boundary nodes M")
    p.add_argument("--grid", type=int, help="scan grid resolution R")
    p.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance by this factor")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        for name in ("degree", "nodes", "grid"):
            val = getattr(args, name)
            if val is not None and val <= 0:
                raise SpecError("must be positive", key=f"--{name}")
        if not args.tol_scale > 0:
            raise SpecError("must be positive", key="--tol-scale")
        if args.spec is None:
            if args.command != "reinhardt":
                raise SpecError(f"--spec is required for {args.command!r}")
            spec = DomainSpec("reinhardt2", source="<default>")
        else:
            try:
                text = args.spec.read_text()
            except OSError as exc:
                raise SpecError(f"cannot read {args.spec}: {exc.strerror}") from None
            spec = parse_spec(text, str(args.spec))
        runner = Runner(spec, args.degree, args.nodes, args.grid, args.tol_scale)
        rows = run_checks(runner, args.command)
    except (SpecError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(summary_text(rows, args.command, spec.source))
    machine = "\n".join([HEADER] + [r.tsv() for r in rows]) + "\n"
    if args.out:
        args.out.write_text(machine)
    else:
        print()
        print(machine, end="")
    return 0 if all(r.passed for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())

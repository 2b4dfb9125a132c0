"""The verification suite behind ``steklov verify``.

Each check yields :class:`Assertion` records.  ``slack`` is signed: for an
inequality ``lhs <= rhs`` it is ``rhs - lhs``; for an identity it is
``tol - |gap|``.  Negative slack means failure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cheeger import (
    cheeger_enumerate,
    cheeger_parametric_cut,
    coarea_check,
    evaluate_ratio,
    first_dirichlet_table,
    higher_order_constants,
    level_set_integrals,
    minmax_tuples,
)
from .dtn import (
    assemble_dtn,
    assemble_dtn_by_extension,
    blowup_convergence,
    dirichlet_laplacian_spectrum,
    dtn_eigenpairs,
    dtn_spectrum,
)
from .fixtures import Instance, fixture_instances, random_instances
from .harmonic import (
    capacity,
    capacity_by_flux,
    dirichlet_energy,
    green_residual,
    harmonic_extension,
    normal_derivatives,
)
from .io import dump_graph

TOL = 1e-10
BLOWUP_SCHEDULE = [2.0**e for e in range(21)]


@dataclass
class Assertion:
    name: str
    instance: str
    passed: bool
    slack: float | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "instance": self.instance, "passed": self.passed,
                "slack": self.slack, "detail": self.detail}


@dataclass
class SuiteResult:
    assertions: list[Assertion] = field(default_factory=list)
    c_hat: dict[int, float] = field(default_factory=dict)
    c_hat_dirichlet: dict[int, float] = field(default_factory=dict)
    dumped: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def failures(self) -> list[Assertion]:
        return [a for a in self.assertions if not a.passed]

    def by_group(self) -> dict[str, tuple[int, int]]:
        out: dict[str, list[int]] = {}
        for a in self.assertions:
            tot = out.setdefault(a.name, [0, 0])
            tot[0] += a.passed
            tot[1] += 1
        return {k: (v[0], v[1]) for k, v in out.items()}


def _le(name, inst, lhs, rhs, tol=TOL, detail=""):
    """Assertion for ``lhs <= rhs + tol``."""
    if math.isinf(rhs) and rhs > 0:
        return Assertion(name, inst, True, math.inf, detail)
    slack = float(rhs - lhs)
    return Assertion(name, inst, bool(slack >= -tol), slack, detail)


def _eq(name, inst, gap, tol, detail=""):
    gap = float(gap)
    return Assertion(name, inst, bool(gap <= tol), tol - gap, detail)


def _scale(window) -> float:
    return max(1.0, float(window.ew.sum()))


def _random_total(window, rng):
    u = rng.standard_normal(window.n + window.n_collar)
    return u


# --------------------------------------------------------------------------
# per-instance checks


def check_structural(inst: Instance, rng: np.random.Generator) -> list[Assertion]:
    """Identities that hold exactly in exact arithmetic."""
    w, name = inst.window, inst.name
    out = []
    scale = _scale(w)
    if w.n_boundary:
        b = assemble_dtn(w).matrix
        b2 = assemble_dtn_by_extension(w)
        out.append(_eq("schur=extension", name, np.max(np.abs(b - b2)), TOL * scale))
        f = rng.standard_normal(w.n_boundary)
        ext = harmonic_extension(w, f)
        pair = float(np.sum(w.measure[w.bidx] * normal_derivatives(w, ext) * f))
        cap = capacity(w, f)
        energy = dirichlet_energy(w, ext)
        fscale = TOL * scale * max(1.0, float(np.max(np.abs(f)))) ** 2
        out.append(_eq("<Lf,f>=Cap", name, abs(pair - cap), fscale))
        out.append(_eq("Cap=D(u_f)", name, abs(cap - energy), fscale))
        out.append(_eq("Cap=flux", name, abs(capacity_by_flux(w, f) - cap), fscale))
    u, g = _random_total(w, rng), _random_total(w, rng)
    gscale = TOL * scale * max(1.0, float(np.max(np.abs(u)) * np.max(np.abs(g))))
    out.append(_eq("green", name, green_residual(w, u, g), gscale))
    f = np.abs(rng.standard_normal(w.n + w.n_collar))
    f[w.n:] = 0.0
    lhs, rhs, gap = coarea_check(w, f)
    fs = TOL * scale * max(1.0, float(np.max(f)) ** 2)
    out.append(_eq("coarea", name, gap, fs))
    for key, (a, bb) in level_set_integrals(w, f).items():
        out.append(_eq(f"level-set-{key}", name, abs(a - bb), fs))
    h, hj = cheeger_enumerate(w)
    out.append(_le("h<=h_J", name, h.value, hj.value))
    ch = cheeger_parametric_cut(w, "h")
    out.append(_eq("enum=cut(h)", name, abs(h.value - ch.value), 1e-12))
    if w.n_boundary:
        cj = cheeger_parametric_cut(w, "h_J")
        out.append(_eq("enum=cut(h_J)", name, abs(hj.value - cj.value), 1e-12))
        gap = max(abs(evaluate_ratio(w, r.witness, which) - r.value)
                  for r, which in ((h, "h"), (hj, "h_J"), (ch, "h"), (cj, "h_J")))
        out.append(_eq("witness-reevaluation", name, gap, 1e-12))
        sig = dtn_spectrum(w)
        lam = dirichlet_laplacian_spectrum(w)
        for k in range(1, len(sig) + 1):
            out.append(_le(f"sigma_k>=lambda_k,D", name, lam[k - 1], sig[k - 1], detail=f"k={k}"))
        out.append(_le("sigma<=1", name, sig[-1], 1.0))
        out.append(_le("sigma>=0", name, 0.0, sig[0]))
    return out


def check_sandwich(inst: Instance) -> list[Assertion]:
    """``h h_J / 2 <= sigma_1 <= h_J`` with exact constants."""
    w, name = inst.window, inst.name
    s1 = float(dtn_spectrum(w)[0])
    h, hj = cheeger_enumerate(w)
    return [
        _le("sandwich-lower", name, h.value * hj.value / 2, s1),
        _le("sandwich-upper", name, s1, hj.value),
    ]


def check_blowup(inst: Instance) -> list[Assertion]:
    w, name = inst.window, inst.name
    rows = blowup_convergence(w, BLOWUP_SCHEDULE)
    p = w.n_boundary
    at = {(r.r, r.k): r for r in rows}
    out = []
    hi, mid = 2.0**20, 2.0**10
    for k in range(1, p + 1):
        g_hi, g_mid = at[(hi, k)].gap, at[(mid, k)].gap
        out.append(_le("blowup-gap<=1e-3", name, g_hi, 1e-3, tol=0.0, detail=f"k={k}"))
        out.append(_le("blowup-gap-shrinks", name, g_hi, g_mid, detail=f"k={k}"))
    if p < w.n:
        val = at[(hi, p + 1)].value
        out.append(_le("blowup-diverges", name, hi * 1e-3, val, tol=0.0, detail=f"k={p + 1}"))
    return out


def check_higher(inst: Instance, ks=(2, 3)) -> tuple[list[Assertion], dict, dict]:
    """``sigma_k <= h_J^k`` exactly; empirical constants for the lower bounds."""
    w, name = inst.window, inst.name
    out, chat, chat_d = [], {}, {}
    sig = dtn_spectrum(w)
    lam = dirichlet_laplacian_spectrum(w)
    table = first_dirichlet_table(w)
    for k in ks:
        if k > w.n_boundary:
            continue
        hk, hjk = higher_order_constants(w, k, mode="exact")
        sk = float(sig[k - 1])
        out.append(_le("sigma_k<=h_J^k", name, sk, hjk.value, detail=f"k={k}"))
        # non-adjacent tuples: the indicator test functions carry no cross energy
        _, sep = higher_order_constants(w, k, mode="exact", separated=True)
        out.append(_le("sigma_k<=h_J^k(separated)", name, sk, sep.value, detail=f"k={k}"))
        if math.isfinite(hk.value) and hk.value > 0:
            chat[k] = sk * k**6 / hk.value
        # Gamma_k only feeds an empirical constant; lambda_k <= Gamma_k is not a theorem
        g, _ = minmax_tuples(table, w.n, k)
        if math.isfinite(g) and g > 0:
            chat_d[k] = float(lam[k - 1]) * k**6 / g
    return out, chat, chat_d


def check_harmonic(inst: Instance, rng: np.random.Generator, trials: int = 200) -> list[Assertion]:
    """Maximum principle, energy minimality, uniqueness and the capacity bound."""
    w, name = inst.window, inst.name
    if not w.n_boundary:
        return []
    f = rng.standard_normal(w.n_boundary)
    ext = harmonic_extension(w, f)
    u = ext.values
    lo, hi = min(f.min(), 0.0), max(f.max(), 0.0)
    out = [
        _le("max-principle", name, float(u.max()), hi, tol=1e-12),
        _le("min-principle", name, lo, float(u.min()), tol=1e-12),
    ]
    again = harmonic_extension(w, f).values
    out.append(_eq("uniqueness", name, float(np.max(np.abs(u - again))), 1e-12))
    e0 = dirichlet_energy(w, ext)
    worst = math.inf
    for _ in range(trials):
        phi = u.copy()
        phi[w.iidx] += rng.standard_normal(len(w.iidx))
        worst = min(worst, dirichlet_energy(w, phi) - e0)
    if len(w.iidx):
        out.append(Assertion("energy-minimality", name, bool(worst >= -TOL), float(worst)))
    norm2 = float(np.sum(w.measure[w.bidx] * f * f))
    out.append(_le("Cap<=|f|^2", name, capacity(w, f), norm2))
    # eigen-residual of the DtN pencil
    pairs = dtn_eigenpairs(w)
    lam_vec = []
    for j in range(len(pairs.values)):
        v = pairs.vectors[:, j]
        dn = normal_derivatives(w, harmonic_extension(w, v))
        lam_vec.append(float(np.max(np.abs(dn - pairs.values[j] * v))))
    out.append(_eq("dtn-eigen-residual", name, max(lam_vec), TOL * _scale(w)))
    return out


# --------------------------------------------------------------------------
# fixture table


FIXTURE_VALUES = {
    "half-line": {"sigma": [1 / 2], "h": 1 / 3, "h_J": 1.0},
    "star": {"sigma": [1 / 3, 1.0], "h": 1 / 5, "h_J": 1 / 2, "h_J^2": 1.0},
    "tree": {"sigma": [8 / 15], "h_J": 1.0},
}


def check_fixture_values(inst: Instance) -> list[Assertion]:
    want = FIXTURE_VALUES.get(inst.name)
    if not want:
        return []
    w = inst.window
    out = []
    sig = dtn_spectrum(w)
    out.append(_eq("fixture-sigma", inst.name, float(np.max(np.abs(sig - want["sigma"]))), 1e-12))
    h, hj = cheeger_enumerate(w)
    if "h" in want:
        out.append(_eq("fixture-h", inst.name, abs(h.value - want["h"]), 1e-12))
    out.append(_eq("fixture-h_J", inst.name, abs(hj.value - want["h_J"]), 1e-12))
    if "h_J^2" in want:
        _, hj2 = higher_order_constants(w, 2, mode="exact")
        out.append(_eq("fixture-h_J^2", inst.name, abs(hj2.value - want["h_J^2"]), 1e-12))
    return out


# --------------------------------------------------------------------------
# driver


def _min_update(acc: dict, new: dict) -> None:
    for k, v in new.items():
        acc[k] = min(acc.get(k, math.inf), v)


def run_instance(inst: Instance, rng: np.random.Generator, higher: bool = True) -> SuiteResult:
    res = SuiteResult()
    res.assertions += check_fixture_values(inst)
    res.assertions += check_structural(inst, rng)
    if inst.window.n_boundary:
        res.assertions += check_sandwich(inst)
        res.assertions += check_blowup(inst)
        res.assertions += check_harmonic(inst, rng)
    if higher and inst.window.n <= 10:
        a, chat, chat_d = check_higher(inst)
        res.assertions += a
        _min_update(res.c_hat, chat)
        _min_update(res.c_hat_dirichlet, chat_d)
    return res


def run_suite(seed: int = 0, count: int = 0, fixtures: bool = True, dump_dir: str | Path | None = None,
              **gen) -> SuiteResult:
    """Fixtures plus ``count`` seeded random windows; failing randoms are dumped."""
    total = SuiteResult()
    rng = np.random.default_rng([seed, 1])
    pool = fixture_instances() if fixtures else []
    pool += random_instances(seed, count, **gen)
    for inst in pool:
        res = run_instance(inst, rng)
        total.assertions += res.assertions
        _min_update(total.c_hat, res.c_hat)
        _min_update(total.c_hat_dirichlet, res.c_hat_dirichlet)
        if not res.passed and inst.graph is not None and dump_dir is not None:
            d = Path(dump_dir)
            d.mkdir(parents=True, exist_ok=True)
            path = d / f"{inst.name}.json"
            dump_graph(inst.graph, inst.interior, path, {"window": [str(v) for v in inst.window_names]})
            total.dumped.append(str(path))
    return total

"""Dirichlet-to-Neumann forms, Steklov spectra and their blow-up approximation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .graph import Window
from .harmonic import boundary_data, harmonic_extension, interior_solve, normal_derivatives
from .numerics import eigh_generalized, symmetrize


@dataclass(frozen=True)
class DtnForm:
    """Quadratic form ``f.B g = D_W(u_f, u_g)`` and boundary masses ``d``."""

    boundary: tuple
    matrix: np.ndarray
    mass: np.ndarray

    @property
    def size(self) -> int:
        return len(self.boundary)


def _require_boundary(window: Window) -> None:
    if window.n_boundary == 0:
        raise DomainError("window has no domain-boundary vertex; the DtN operator is undefined")


def assemble_dtn(window: Window) -> DtnForm:
    """Schur complement ``L_bb - L_bi L_ii^-1 L_ib`` of the window Laplacian."""
    _require_boundary(window)
    lap = window.laplacian()
    b, i = window.bidx, window.iidx
    lbb = lap[b][:, b].toarray()
    if len(i):
        lib = lap[i][:, b]
        x = interior_solve(window, lib.toarray())
        x = x.reshape(len(i), len(b))
        lbb = lbb - lib.T @ x
    return DtnForm(window.boundary_names(), symmetrize(lbb), window.measure[b].copy())


def assemble_dtn_by_extension(window: Window) -> np.ndarray:
    """Column-by-column form matrix from harmonic extensions (test oracle)."""
    _require_boundary(window)
    p = window.n_boundary
    out = np.empty((p, p))
    mass = window.measure[window.bidx]
    for j in range(p):
        e = np.zeros(p)
        e[j] = 1.0
        out[:, j] = mass * normal_derivatives(window, harmonic_extension(window, e))
    return out


def dtn_spectrum(window: Window, form: DtnForm | None = None) -> np.ndarray:
    """Ascending ``sigma_1 .. sigma_P`` of the pencil ``(B, diag d)``."""
    form = form or assemble_dtn(window)
    return eigh_generalized(form.matrix, form.mass).values


def dtn_eigenpairs(window: Window, form: DtnForm | None = None):
    form = form or assemble_dtn(window)
    return eigh_generalized(form.matrix, form.mass)


def apply_dtn(window: Window, f) -> np.ndarray:
    """``Lambda_W f``: normal derivative of the harmonic extension of ``f``."""
    _require_boundary(window)
    return normal_derivatives(window, harmonic_extension(window, boundary_data(window, f)))


def _dense_dirichlet(window: Window) -> np.ndarray:
    return window.dirichlet_laplacian().toarray()


def dirichlet_laplacian_spectrum(window: Window) -> np.ndarray:
    """Eigenvalues of the Dirichlet problem on ``W`` with measure ``d``."""
    return eigh_generalized(_dense_dirichlet(window), window.measure).values


def blowup_mass(window: Window, r: float) -> np.ndarray:
    """``d`` on boundary vertices, ``d / r`` on interior vertices."""
    if not r > 0:
        raise DomainError(f"blow-up parameter must be positive, got {r}")
    m = window.measure.copy()
    m[window.iidx] /= r
    return m


def blowup_spectrum(window: Window, r: float) -> np.ndarray:
    return eigh_generalized(_dense_dirichlet(window), blowup_mass(window, r)).values


@dataclass(frozen=True)
class BlowupRow:
    r: float
    k: int
    value: float
    gap: float | None = None
    ratio: float | None = None


def blowup_convergence(window: Window, r_schedule) -> list[BlowupRow]:
    """Per ``r`` and ``k``: gap to ``sigma_k`` for ``k <= P``, ``lam/r`` beyond."""
    rs = [float(r) for r in r_schedule]
    if not rs or any(b <= a for a, b in zip(rs, rs[1:])):
        raise DomainError("r schedule must be nonempty and strictly increasing")
    sigma = dtn_spectrum(window)
    p = len(sigma)
    lap = _dense_dirichlet(window)
    rows = []
    for r in rs:
        lam = eigh_generalized(lap, blowup_mass(window, r)).values
        for k, val in enumerate(lam, start=1):
            if k <= p:
                rows.append(BlowupRow(r, k, float(val), gap=float(abs(val - sigma[k - 1]))))
            else:
                rows.append(BlowupRow(r, k, float(val), ratio=float(val / r)))
    return rows


def parse_schedule(text: str) -> list[float]:
    """``"r0:r1:factor"`` to the geometric schedule ``r0, r0*factor, ... <= r1``."""
    try:
        r0, r1, factor = (float(x) for x in text.split(":"))
    except ValueError:
        raise DomainError(f"schedule must look like r0:r1:factor, got {text!r}") from None
    if r0 <= 0 or factor <= 1 or r1 < r0:
        raise DomainError("schedule needs 0 < r0 <= r1 and factor > 1")
    out = [r0]
    while out[-1] * factor <= r1 * (1 + 1e-12):
        out.append(out[-1] * factor)
    return out

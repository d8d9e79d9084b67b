"""JSON form of fitted approximations. Complex numbers are stored as ``[re, im]``."""

from __future__ import annotations

import json
import math

import numpy as np

from .bary import Barycentric
from .engine import Approximation, ConvergenceHistory, IterationRecord
from .parfrac import ArnoldiBasis, ArnoldiPolynomial, PartialFractions
from .rational import ResidueConvergenceError
from .thiele import Thiele

__all__ = ["pairs", "unpairs", "fit_to_dict", "fit_from_dict", "approximation_to_dict", "history_from_dict", "dump", "load"]


def _num(x):
    x = float(x)
    return x if math.isfinite(x) else None


def pairs(a) -> list:
    """``[[re, im], ...]``; non-finite parts become ``null``."""
    a = np.atleast_1d(np.asarray(a, dtype=complex)).ravel()
    return [[_num(v.real), _num(v.imag)] for v in a]


def unpairs(p) -> np.ndarray:
    out = np.array([complex(np.nan if re is None else re, np.nan if im is None else im) for re, im in p], dtype=complex)
    return out.reshape(len(p))


def _method_of(fit) -> str:
    if isinstance(fit, Thiele):
        return "thiele"
    if isinstance(fit, PartialFractions):
        return "parfrac"
    return "aaa"


def _poles_residues(fit):
    if isinstance(fit, Thiele):
        s = fit.poles()
        res = []
        for p in s:
            try:
                res.append(fit.res(p, fit.default_radius(p, s)))
            except ResidueConvergenceError as exc:
                res.append(exc.estimate)
        return s, np.asarray(res, dtype=complex)
    return fit.residues()


def fit_to_dict(fit) -> dict:
    method = _method_of(fit)
    num, den = fit.degrees()
    poles, res = _poles_residues(fit)
    d = {"method": method, "degrees": [int(num), int(den)]}
    if method == "parfrac":
        basis = fit.poly.basis
        d.update(
            nodes=[],
            values=[],
            weights=[],
            H=[pairs(row) for row in basis.H],
            coefficients=pairs(fit.poly.coeffs),
            basis_points=pairs(basis.points),
        )
    else:
        d.update(nodes=pairs(fit.nodes), values=pairs(fit.values), weights=pairs(fit.weights))
    d.update(poles=pairs(poles), residues=pairs(res))
    return d


def fit_from_dict(d: dict):
    method = d["method"]
    if method == "parfrac":
        N = d["degrees"][0] - len(d["poles"])
        H = np.array([unpairs(row) for row in d["H"]], dtype=complex).reshape(N + 1, N)
        basis = ArnoldiBasis(unpairs(d.get("basis_points", [])), H)
        poly = ArnoldiPolynomial(basis, unpairs(d["coefficients"]))
        return PartialFractions(poly, unpairs(d["poles"]), unpairs(d["residues"]))
    nodes, values, weights = unpairs(d["nodes"]), unpairs(d["values"]), unpairs(d["weights"])
    if method == "thiele":
        return Thiele(nodes, values, weights)
    if method in ("aaa", "barycentric"):
        return Barycentric(nodes, values, weights)
    raise ValueError(f"unknown method {method!r}")


def approximation_to_dict(a: Approximation, max_check_err: float | None = None, **extra) -> dict:
    """The full result record; ``extra`` keys (expression text, domain spec)
    are stored alongside so a saved fit can be re-checked or refined."""
    d = fit_to_dict(a.fit)
    d["history"] = [{"n": int(r.n), "max_err": _num(r.max_err), "allowed": None if r.allowed is None else bool(r.allowed)} for r in a.history.records]
    d["max_check_err"] = None if max_check_err is None else _num(max_check_err)
    d["chosen"] = a.history.chosen
    d["converged"] = bool(a.history.converged)
    t, _ = a.test_points()
    d["test_points"] = pairs(t)
    d["params"] = None if a.params is None else [float(p) for p in a.params]
    d.update(extra)
    return d


def history_from_dict(d: dict) -> ConvergenceHistory:
    recs = [IterationRecord(r["n"], np.inf if r["max_err"] is None else r["max_err"], r["allowed"]) for r in d.get("history", [])]
    return ConvergenceHistory(recs, chosen=d.get("chosen"), converged=bool(d.get("converged", False)))


def dump(obj: dict, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, allow_nan=False)


def load(path) -> dict:
    with open(path) as fh:
        return json.load(fh)

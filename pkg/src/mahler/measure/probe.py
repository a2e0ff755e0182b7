"""Lattice search for integer polynomials taking small values at a point.

Rows of the lattice are [e_j | round(S Re m_j(x)), round(S Im m_j(x))] over the
monomials m_j of total degree <= deg. Short reduced vectors give candidates Q;
each |Q(x)| is then evaluated as a ball, and the certified lower bound is what
gets compared with the rendered measure.
"""

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import flint
import gmpy2
from flint import acb, arb
from gmpy2 import mpq

from ..algebra.scalars import Q, qstr
from ..dynamics.balls import acb_q, arb_json, arb_q, ball_from_json, ball_json
from ..errors import PrecisionExhausted, PreconditionError
from ..linalg.lll import lll
from .exponents import MeasureExponents, exponent_ia1


def m_at(y, precision):
    """M(y) = sum_k y^(2^k) for a rational |y| < 1, with the tail |y|^(2^K) / (1 - |y|) added as radius."""
    y = Q(y)
    if not abs(y) < 1:
        raise PreconditionError("M(y) needs |y| < 1")
    with flint.ctx.workprec(precision + 32):
        x = arb_q(y)
        r = arb_q(abs(y))
        acc, pw = arb(0), x
        k = 0
        while True:
            acc += pw
            pw = pw * pw
            k += 1
            tail = pw.abs_upper() / (1 - r)
            if tail < arb(2) ** (-precision - 16):
                break
        return acb(acc + arb(0, tail.mid() + tail.rad()))


def resolve_point(spec, precision):
    """'m-half' -> M(1/2); 'm:<q>' -> M(q); otherwise comma-separated exact rationals."""
    out = []
    for part in str(spec).split(","):
        part = part.strip()
        if part == "m-half":
            out.append(m_at(mpq(1, 2), precision))
        elif part.startswith("m:"):
            out.append(m_at(part[2:], precision))
        elif part == "half":
            out.append(mpq(1, 2))
        else:
            out.append(Q(part))
    return out


def _exponents(m, deg):
    return [e for t in range(deg + 1) for e in itertools.product(range(t + 1), repeat=m) if sum(e) == t]


def _height_cells(height_bound):
    H = int(height_bound)
    cells = [h for h in (16, 256, 1 << 16, 1 << 32, 1 << 64) if h < H]
    return cells + [H]


def _mono_values(values, exps, prec):
    out = []
    exact = all(not isinstance(v, acb) for v in values)
    for e in exps:
        if exact:
            v = mpq(1)
            for x, a in zip(values, e):
                v *= x**a
        else:
            with flint.ctx.workprec(prec):
                v = acb(1)
                for x, a in zip(values, e):
                    v *= (x if isinstance(x, acb) else acb_q(x)) ** a
        out.append(v)
    return out, exact


def _round_scaled(v, S, exact):
    if exact:
        return [int(gmpy2.floor(v * S + mpq(1, 2)))], [0]
    re = v.real * S
    im = v.imag * S
    return [int(re.mid().floor().unique_fmpz())], [int(im.mid().floor().unique_fmpz())]


@dataclass
class Candidate:
    coeffs: dict
    degree: int
    height: int
    value: object
    exact_zero: bool

    def poly_str(self):
        parts = []
        for e, c in sorted(self.coeffs.items(), reverse=True):
            mono = "*".join(f"X{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts).replace("+ -", "- ")


@dataclass
class CellResult:
    deg: int
    height: int
    scale_bits: int
    capped: bool
    candidate: Candidate = None
    log_abs: object = None
    log_lower: object = None
    sound: bool = True
    predicted_log_lower: object = None
    consistent: object = None
    n_candidates: int = 0

    def to_json(self):
        c = self.candidate
        return {
            "deg": self.deg,
            "height": str(self.height),
            "scale_bits": self.scale_bits,
            "scale_capped": self.capped,
            "n_candidates": self.n_candidates,
            "Q": None if c is None else c.poly_str(),
            "Q_degree": None if c is None else c.degree,
            "Q_height": None if c is None else str(c.height),
            "exact_zero": None if c is None else c.exact_zero,
            "log_abs_Q": None if self.log_abs is None else arb_json(self.log_abs),
            "log_abs_Q_certified_lower": None if self.log_lower is None else arb_json(self.log_lower),
            "sound": self.sound,
            "predicted_log_lower": None if self.predicted_log_lower is None else arb_json(self.predicted_log_lower),
            "consistent_with_measure": self.consistent,
        }


@dataclass
class ProbeReport:
    values: list
    precision: int
    exponents: MeasureExponents
    C_ref: object
    cells: list
    exact_vanishing: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def sound(self):
        return all(c.sound for c in self.cells)

    @property
    def consistent(self):
        return all(c.consistent is not False for c in self.cells)

    def to_json(self):
        return {
            "values": [qstr(v) if not isinstance(v, acb) else ball_json(v) for v in self.values],
            "precision": self.precision,
            "measure": self.exponents.to_json(),
            "C_ref": qstr(self.C_ref),
            "h_convention": "h(Q) = log L(Q) + deg Q",
            "cells": [c.to_json() for c in self.cells],
            "exact_vanishing": self.exact_vanishing,
            "sound": self.sound,
            "consistent": self.consistent,
            "notes": self.notes,
        }


def _evaluate(coeffs, monos, exact, prec):
    if exact:
        return sum((c * v for c, v in zip(coeffs, monos) if c), mpq(0))
    with flint.ctx.workprec(prec):
        acc = acb(0)
        for c, v in zip(coeffs, monos):
            if c:
                acc += c * v
        return acc


def _search(monos, exact, nm, sbits, H, use_im, wp, deg, cell):
    S = 1 << sbits
    rows = []
    for j, v in enumerate(monos):
        e = [0] * nm
        e[j] = 1
        re, im = _round_scaled(v, S, exact)
        rows.append(e + re + (im if use_im else []))
    best = None
    cell.n_candidates = 0
    for row in lll(rows):
        c = [int(x) for x in row[:nm]]
        if not any(c):
            continue
        h = max(abs(x) for x in c)
        if h > H:
            continue
        cell.n_candidates += 1
        val = _evaluate(c, monos, exact, wp)
        if exact:
            if val == 0:
                key = (-1, 0)
            else:
                with flint.ctx.workprec(wp):
                    key = (0, arb_q(abs(val)).log())
        else:
            if val.real.contains(0) and val.imag.contains(0):
                with flint.ctx.workprec(wp):
                    if val.rad() > 0:
                        raise PrecisionExhausted(
                            f"ball radius dominates |Q(x)| for a degree-{deg} candidate at height <= {H}; raise the precision"
                        )
                key = (-1, 0)
            else:
                with flint.ctx.workprec(wp):
                    key = (0, val.abs_lower().log())
        if best is None or key[0] < best[0][0] or (key[0] == best[0][0] == 0 and key[1].mid() < best[0][1].mid()):
            best = (key, c, val)
    return best


def _probe_cell(values, deg, H, precision, exps_obj, C_ref):
    m = len(values)
    exps = _exponents(m, deg)
    nm = len(exps)
    wp = precision + 64
    monos, exact = _mono_values(values, exps, wp)
    use_im = not exact and any(not v.imag.is_zero() for v in monos)
    ncols = 2 if use_im else 1
    cap = max(precision - 16, 8)
    # lattice minimum is about S^(1/nm) per real column; aim below H with room for the LLL factor
    hb = int(H).bit_length() - 1 - (nm + 1) // 4
    sbits = max(4, hb * nm // ncols)
    capped = False
    if not exact and sbits > cap:
        sbits, capped = cap, True
    cell = CellResult(deg, H, sbits, capped)
    best = None
    for _attempt in range(8):
        best = _search(monos, exact, nm, sbits, H, use_im, wp, deg, cell)
        if best is not None or sbits <= 4:
            break
        sbits = max(4, sbits - nm)
        cell.scale_bits = sbits
    if best is None:
        return cell
    key, c, val = best
    if c[max(i for i, x in enumerate(c) if x)] < 0:
        c = [-x for x in c]
    coeffs = {exps[i]: x for i, x in enumerate(c) if x}
    qdeg = max(sum(e) for e in coeffs)
    qh = max(abs(x) for x in c)
    zero = key[0] < 0
    cell.candidate = Candidate(coeffs, qdeg, qh, val, zero)
    if zero:
        return cell
    with flint.ctx.workprec(wp):
        if exact:
            cell.log_abs = arb_q(abs(val)).log()
            cell.log_lower = cell.log_abs
        else:
            a = val.abs_lower()
            cell.log_abs = abs(val).log()
            cell.log_lower = a.log()
        cell.sound = bool(cell.log_abs.mid() >= cell.log_lower.mid() - cell.log_lower.rad())
        h = arb(sum(abs(x) for x in c)).log() + qdeg
        U = exps_obj.U(h, qdeg, C_ref) if exps_obj is not None and exps_obj.admissible else None
        if U is not None:
            cell.predicted_log_lower = -U
            if cell.log_lower >= -U:
                cell.consistent = True
            elif cell.log_lower < -U:
                cell.consistent = False
    return cell


def _worker(payload):
    values_json, deg, H, precision, measure_args, C_ref = payload
    e = exponent_ia1(*measure_args) if measure_args else None
    with flint.ctx.workprec(precision + 64):
        values = [ball_from_json(v) if isinstance(v, dict) else Q(v) for v in values_json]
        values = [acb(v) if isinstance(v, arb) else v for v in values]
        cell = _probe_cell(values, deg, H, precision, e, C_ref)
        return _pack(cell, precision + 64)


_BALL_FIELDS = ("log_abs", "log_lower", "predicted_log_lower")


def _pack(cell, prec):
    """Balls do not pickle; ship them as enclosing decimal strings."""
    for f in _BALL_FIELDS:
        v = getattr(cell, f)
        if v is not None:
            setattr(cell, f, ball_json(v, prec))
    if cell.candidate is not None and isinstance(cell.candidate.value, acb):
        cell.candidate.value = ball_json(cell.candidate.value, prec)
    return cell


def _unpack(cell, prec):
    with flint.ctx.workprec(prec):
        return _unpack_at(cell)


def _unpack_at(cell):
    for f in _BALL_FIELDS:
        v = getattr(cell, f)
        if v is not None:
            setattr(cell, f, ball_from_json(v))
    if cell.candidate is not None and isinstance(cell.candidate.value, dict):
        cell.candidate.value = ball_from_json(cell.candidate.value)
    return cell


def lll_small_value_probe(values, deg_bound, height_bound, precision=256, exponents=None, C_ref=1, workers=None, d=2, delta=2):
    """Minimal found log|Q(values)| per (deg, height) cell, with the hypersurface measure shape beside it.

    ``exponents`` defaults to the algebraic-point polynomial-p statement at k = n - 1.
    """
    if deg_bound < 1 or int(height_bound) < 1:
        raise PreconditionError("need deg_bound >= 1 and height_bound >= 1")
    values = [v if isinstance(v, acb) else (acb(v) if isinstance(v, arb) else Q(v)) for v in values]
    n = len(values)
    if exponents is None:
        exponents = exponent_ia1(n, n - 1, d, delta)
        measure_args = (n, n - 1, d, delta)
    else:
        measure_args = (exponents.n, exponents.k, exponents.d, exponents.delta) if exponents.theorem == "ia1" else None
    C_ref = Q(C_ref)
    cells = [(deg, H) for deg in range(1, deg_bound + 1) for H in _height_cells(height_bound)]
    workers = workers or int(os.environ.get("MAHLER_WORKERS", "1"))
    notes = ["predicted bound rendered with C = C_ref; the statement's constant is not effective"]
    if workers > 1 and measure_args is not None:
        payload_vals = [ball_json(v, precision + 64) if isinstance(v, acb) else qstr(v) for v in values]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = [_unpack(c, precision + 64) for c in ex.map(_worker, [(payload_vals, dg, H, precision, measure_args, C_ref) for dg, H in cells])]
    else:
        with flint.ctx.workprec(precision + 64):
            results = [_probe_cell(values, dg, H, precision, exponents, C_ref) for dg, H in cells]
    vanish = []
    for c in results:
        if c.candidate is not None and c.candidate.exact_zero:
            s = c.candidate.poly_str()
            if s not in vanish:
                vanish.append(s)
        if c.capped:
            notes.append(f"scale capped at 2^{c.scale_bits} for deg {c.deg}, height {c.height}")
    return ProbeReport(values, precision, exponents, C_ref, results, vanish, notes)

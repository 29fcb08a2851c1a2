"""Time-dependent coefficient schedules and Hamiltonian assembly.

A schedule fixes the three polar coefficients of the Hamiltonian

    H(t) = w(t) * (sin(theta)/2 * e^{-i phi} * raising
                   + sin(theta)/2 * e^{+i phi} * lowering
                   + cos(theta) * weight)
           + offset(t) * identity

Identity-proportional terms never enter the invariant machinery; they
accumulate separately as a global phase, so the offset travels on its own
channel next to the polar triple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from trigen.algebra import AlgebraRealization, schwinger_su2, spin_j, su11_discrete
from trigen.algebra import boson_ladder, gho_realization, two_level_realization

Array = np.ndarray

_KINDS = ("constant", "linear", "sinusoid", "table")


@dataclass(frozen=True)
class TimeFunction:
    """Closed-form scalar function of time.

    Kinds and parameters:
      constant  c
      linear    c0 + c1*t
      sinusoid  c0 + c1*sin(c2*t + c3)
      table     sorted knots with linear interpolation, evaluable only
                inside the knot span
    """

    kind: str
    coefficients: tuple[float, ...] = ()
    knots: Array | None = field(default=None, repr=False)
    values: Array | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown time-function kind {self.kind!r}")
        expected = {"constant": 1, "linear": 2, "sinusoid": 4, "table": 0}[self.kind]
        if len(self.coefficients) != expected:
            raise ValueError(f"{self.kind} needs {expected} coefficients")
        if self.kind == "table":
            if self.knots is None or self.values is None:
                raise ValueError("table needs knots and values")
            if self.knots.ndim != 1 or self.knots.shape != self.values.shape:
                raise ValueError("table knots and values must be 1-d and equal length")
            if len(self.knots) < 2:
                raise ValueError("table needs at least two knots")
            if not np.all(np.diff(self.knots) > 0):
                raise ValueError("table knots must be strictly increasing")

    @classmethod
    def constant(cls, c: float) -> TimeFunction:
        return cls("constant", (float(c),))

    @classmethod
    def linear(cls, c0: float, c1: float) -> TimeFunction:
        return cls("linear", (float(c0), float(c1)))

    @classmethod
    def sinusoid(cls, c0: float, c1: float, c2: float, c3: float) -> TimeFunction:
        return cls("sinusoid", (float(c0), float(c1), float(c2), float(c3)))

    @classmethod
    def table(cls, knots, values) -> TimeFunction:
        return cls("table", (), np.asarray(knots, dtype=float),
                   np.asarray(values, dtype=float))

    @property
    def domain(self) -> tuple[float, float]:
        if self.kind == "table":
            return float(self.knots[0]), float(self.knots[-1])
        return (-math.inf, math.inf)

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        lo, hi = self.domain
        if np.any(t_arr < lo - 1e-12) or np.any(t_arr > hi + 1e-12):
            raise ValueError(f"time {t} outside schedule domain [{lo}, {hi}]")
        if self.kind == "constant":
            out = np.full_like(t_arr, self.coefficients[0])
        elif self.kind == "linear":
            c0, c1 = self.coefficients
            out = c0 + c1 * t_arr
        elif self.kind == "sinusoid":
            c0, c1, c2, c3 = self.coefficients
            out = c0 + c1 * np.sin(c2 * t_arr + c3)
        else:
            out = np.interp(np.clip(t_arr, lo, hi), self.knots, self.values)
        return out if out.ndim else float(out)


ZERO_OFFSET = TimeFunction.constant(0.0)


@dataclass(frozen=True)
class CoefficientSchedule:
    """Polar coefficient triple: overall frequency and the two angles."""

    frequency: TimeFunction
    polar: TimeFunction
    azimuth: TimeFunction

    @property
    def domain(self) -> tuple[float, float]:
        los, his = zip(*(f.domain for f in (self.frequency, self.polar, self.azimuth)))
        return max(los), min(his)

    def values(self, t):
        return self.frequency(t), self.polar(t), self.azimuth(t)


@dataclass(frozen=True)
class HamiltonianModel:
    """Realization plus schedule plus identity-channel offset."""

    realization: AlgebraRealization
    schedule: CoefficientSchedule
    scalar_offset: TimeFunction = ZERO_OFFSET

    @property
    def domain(self) -> tuple[float, float]:
        lo, hi = self.schedule.domain
        olo, ohi = self.scalar_offset.domain
        return max(lo, olo), min(hi, ohi)


def hamiltonian_at(model: HamiltonianModel, t: float) -> Array:
    """Assemble the Hamiltonian matrix at time ``t``."""
    w, theta, phi = model.schedule.values(t)
    r = model.realization
    half = 0.5 * w * np.sin(theta)
    h = (half * np.exp(-1j * phi) * r.raising
         + half * np.exp(1j * phi) * r.lowering
         + w * np.cos(theta) * r.weight)
    offset = model.scalar_offset(t)
    if offset != 0.0:
        h = h + offset * np.eye(r.dim)
    return h


def _wrap_angle(phi: float) -> float:
    """Map an angle into (-pi, pi]."""
    out = math.fmod(phi, 2 * math.pi)
    if out <= -math.pi:
        out += 2 * math.pi
    elif out > math.pi:
        out -= 2 * math.pi
    return out


def _sample_domain(params: dict, key: str = "sample_domain") -> tuple[float, float]:
    dom = params.get(key)
    if dom is None:
        raise ValueError(
            "time-dependent coefficients outside the closed-form family need "
            "an explicit sample_domain=(t0, t1) to tabulate the polar form")
    return float(dom[0]), float(dom[1])


def polar_form(weight_coeff: TimeFunction,
               coupling_modulus: TimeFunction,
               coupling_phase: TimeFunction,
               sample_domain: tuple[float, float] | None = None,
               sample_nodes: int = 4097) -> CoefficientSchedule:
    """Invert (weight coefficient, coupling) into the polar triple.

    The Hamiltonian piece  c_w * weight + g * raising + conj(g) * lowering
    with g = modulus * e^{i arg} maps onto frequency/polar/azimuth via

        frequency = hypot(c_w, 2|g|),  polar = atan2(2|g|, c_w),
        azimuth   = -arg(g), wrapped into (-pi, pi].

    Constant inputs invert in closed form; a constant modulus and weight
    coefficient with a linear phase keep frequency and polar constant and
    negate the linear azimuth.  Anything else is sampled onto a dense
    table over ``sample_domain``.
    """
    consts = [f.is_constant for f in (weight_coeff, coupling_modulus, coupling_phase)]
    if consts[0] and consts[1]:
        cw = weight_coeff.coefficients[0]
        cm = abs(coupling_modulus.coefficients[0])
        freq = TimeFunction.constant(math.hypot(cw, 2 * cm))
        polar = TimeFunction.constant(math.atan2(2 * cm, cw))
        if cm == 0.0:
            azimuth = TimeFunction.constant(0.0)
        elif coupling_phase.is_constant:
            azimuth = TimeFunction.constant(_wrap_angle(-coupling_phase.coefficients[0]))
        elif coupling_phase.kind == "linear":
            c0, c1 = coupling_phase.coefficients
            azimuth = TimeFunction.linear(-c0, -c1)
        else:
            azimuth = None
        if azimuth is not None:
            return CoefficientSchedule(freq, polar, azimuth)
    if sample_domain is None:
        raise ValueError(
            "polar inversion has no closed form for these inputs; "
            "pass sample_domain to tabulate")
    ts = np.linspace(sample_domain[0], sample_domain[1], sample_nodes)
    cw = np.asarray(weight_coeff(ts), dtype=float)
    cm = np.abs(np.asarray(coupling_modulus(ts), dtype=float))
    ph = np.asarray(coupling_phase(ts), dtype=float)
    freq = np.hypot(cw, 2 * cm)
    polar = np.arctan2(2 * cm, cw)
    azimuth = np.where(cm == 0.0, 0.0, -ph)
    return CoefficientSchedule(
        TimeFunction.table(ts, freq),
        TimeFunction.table(ts, polar),
        TimeFunction.table(ts, azimuth),
    )


def add_functions(f: TimeFunction, g: TimeFunction, scale_g: float = 1.0,
                   sample_domain: tuple[float, float] | None = None) -> TimeFunction:
    """Exact sum f + scale_g * g when both sides stay in the family."""
    if f.is_constant and g.is_constant:
        return TimeFunction.constant(f.coefficients[0] + scale_g * g.coefficients[0])
    if {f.kind, g.kind} <= {"constant", "linear"}:
        def lin(h):
            return h.coefficients if h.kind == "linear" else (h.coefficients[0], 0.0)
        (a0, a1), (b0, b1) = lin(f), lin(g)
        return TimeFunction.linear(a0 + scale_g * b0, a1 + scale_g * b1)
    if sample_domain is None:
        raise ValueError("no closed-form sum for these kinds; pass sample_domain")
    ts = np.linspace(sample_domain[0], sample_domain[1], 4097)
    return TimeFunction.table(ts, np.asarray(f(ts)) + scale_g * np.asarray(g(ts)))


def model_catalog(name: str, params: dict) -> HamiltonianModel:
    """Build one of the preset models, fully wired.

    Names and parameters:
      spin            j, schedule, [offset]
      two-level       schedule, [offset]
      gho             dim, schedule | (coeff_q2, coeff_qp, coeff_p2)
      coupled-osc     n_total, omega1, omega2, g_modulus, g_argument
      two-photon-su11 imbalance, dim, omega1, omega2, g_modulus, g_argument

    The oscillator presets invert their physical coefficients into polar
    form; identity-proportional pieces (the conserved-number terms) are
    routed to the scalar offset channel.
    """
    params = dict(params)

    def take(key, default=None, required=False):
        if required and key not in params:
            raise ValueError(f"preset {name!r} needs parameter {key!r}")
        return params.pop(key, default)

    if name == "spin":
        j = take("j", required=True)
        schedule = take("schedule", required=True)
        offset = take("offset", ZERO_OFFSET)
        model = HamiltonianModel(spin_j(j), schedule, offset)
    elif name == "two-level":
        schedule = take("schedule", required=True)
        offset = take("offset", ZERO_OFFSET)
        model = HamiltonianModel(two_level_realization(), schedule, offset)
    elif name == "gho":
        dim = take("dim", required=True)
        schedule = take("schedule", None)
        if schedule is None:
            cq2 = take("coeff_q2", required=True)
            cqp = take("coeff_qp", required=True)
            cp2 = take("coeff_p2", required=True)
            schedule = _gho_polar(cq2, cqp, cp2)
        model = HamiltonianModel(gho_realization(dim), schedule,
                                 take("offset", ZERO_OFFSET))
    elif name == "coupled-osc":
        n_total = take("n_total", required=True)
        w1 = take("omega1", required=True)
        w2 = take("omega2", required=True)
        gm = take("g_modulus", required=True)
        ga = take("g_argument", required=True)
        dom = params.pop("sample_domain", None)
        # Weight coefficient w1 - w2; ladder coupling multiplies raising
        # directly, so the azimuth is minus the coupling argument.
        weight_coeff = add_functions(w1, w2, scale_g=-1.0, sample_domain=dom)
        schedule = polar_form(weight_coeff, gm, ga, sample_domain=dom)
        offset = scale_function(add_functions(w1, w2, sample_domain=dom),
                                 n_total / 2.0)
        model = HamiltonianModel(schwinger_su2(n_total), schedule, offset)
    elif name == "two-photon-su11":
        imbalance = take("imbalance", required=True)
        dim = take("dim", required=True)
        w1 = take("omega1", required=True)
        w2 = take("omega2", required=True)
        gm = take("g_modulus", required=True)
        ga = take("g_argument", required=True)
        dom = params.pop("sample_domain", None)
        if imbalance < 0:
            raise ValueError("mode imbalance must be nonnegative")
        # Raising generator is the pair-creation operator, whose coupling
        # is conj(g); the azimuth is therefore +arg(g).
        total = add_functions(w1, w2, sample_domain=dom)
        neg_arg = scale_function(ga, -1.0)
        schedule = polar_form(total, gm, neg_arg, sample_domain=dom)
        diff = add_functions(w1, w2, scale_g=-1.0, sample_domain=dom)
        offset = add_functions(scale_function(total, -0.5),
                                scale_function(diff, imbalance / 2.0),
                                sample_domain=dom)
        bargmann = (imbalance + 1) / 2.0
        model = HamiltonianModel(su11_discrete(bargmann, dim), schedule, offset)
    else:
        raise ValueError(f"unknown preset model {name!r}")
    if params:
        raise ValueError(f"unused parameters for preset {name!r}: {sorted(params)}")
    return model


def scale_function(f: TimeFunction, scale: float) -> TimeFunction:
    if f.kind == "constant":
        return TimeFunction.constant(scale * f.coefficients[0])
    if f.kind == "linear":
        return TimeFunction.linear(scale * f.coefficients[0], scale * f.coefficients[1])
    if f.kind == "sinusoid":
        c0, c1, c2, c3 = f.coefficients
        return TimeFunction.sinusoid(scale * c0, scale * c1, c2, c3)
    return TimeFunction.table(f.knots, scale * f.values)


def _gho_polar(coeff_q2: TimeFunction, coeff_qp: TimeFunction,
               coeff_p2: TimeFunction) -> CoefficientSchedule:
    """Map quadratic-form coefficients H = (X q^2 + Y(qp+pq) + Z p^2)/2
    onto the polar triple.

    Real polar angles can only represent the symmetric, cross-free slice
    X = Z, Y = 0 (the polar form ties the two ladder moduli together);
    anything else needs complex angles and is rejected.
    """
    if not (coeff_qp.is_constant and coeff_qp.coefficients[0] == 0.0):
        raise ValueError("cross term qp+pq is not representable with real angles")
    if coeff_q2.kind != coeff_p2.kind or (
            coeff_q2.coefficients != coeff_p2.coefficients):
        raise ValueError("real polar angles require equal q^2 and p^2 coefficients")
    if coeff_q2.kind == "table" and not (
            np.array_equal(coeff_q2.knots, coeff_p2.knots)
            and np.array_equal(coeff_q2.values, coeff_p2.values)):
        raise ValueError("real polar angles require equal q^2 and p^2 coefficients")
    # H = X/2 (q^2 + p^2) = X (raising + lowering)/2: equatorial polar form
    # with frequency X itself.
    return CoefficientSchedule(
        coeff_q2,
        TimeFunction.constant(math.pi / 2),
        TimeFunction.constant(0.0),
    )

"""Hybrid inertial self-adaptive projection iteration for split feasibility
problems coupled with a fixed-point constraint.

One general stepper covers the classic fixed-step CQ update, its self-adaptive
variant, the viscosity blend with a contraction, and the full hybrid scheme
with inertia and an averaged fixed-point map.  The per-step quantities proved
to be monotone in the convergence analysis are recorded as runtime monitors,
never enforced.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .linalg import DimensionMismatch, LinearMap, as_vector, norm
from .mappings import Mapping, fixed_point_residual, identity_map, zero_map
from .sets import ConvexSet, membership_residual

__all__ = [
    "ScheduleViolation",
    "DivergenceError",
    "SfpProblem",
    "Seq",
    "ParameterSchedule",
    "StepParams",
    "StoppingRule",
    "StepperConfig",
    "StepRecord",
    "RunHistory",
    "inertial_theta",
    "adaptive_tau",
    "step",
    "run",
    "psi_diagnostic",
    "validate_schedule",
    "ScheduleReport",
]

GRAD_GUARD_DEFAULT = 1e-24
DIVERGENCE_LIMIT = 1e12

MODES = ("proof", "statement", "explore")


class ScheduleViolation(ValueError):
    """A parameter sequence breaks a hard constraint at some index."""


class DivergenceError(RuntimeError):
    """Iterates blew up; the partial history is kept on ``history``."""

    def __init__(self, message: str, history: "RunHistory"):
        super().__init__(message)
        self.history = history


# --- problem --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SfpProblem:
    """Find x in C with A x in Q, optionally constrained to Fix(S).

    ``g`` is the contraction used by the viscosity blend (defaults to the
    null map).  ``known_solution``, when given, must satisfy the constraints
    to 1e-8 and enables the per-step distance monitors.
    """

    A: LinearMap
    C: ConvexSet
    Q: ConvexSet
    S: Mapping | None = None
    g: Mapping | None = None
    known_solution: np.ndarray | None = None

    def __post_init__(self):
        if self.C.dim != self.A.cols:
            raise DimensionMismatch(f"C has dimension {self.C.dim}, operator expects {self.A.cols}")
        if self.Q.dim != self.A.rows:
            raise DimensionMismatch(f"Q has dimension {self.Q.dim}, operator maps into {self.A.rows}")
        if self.S is not None and self.S.dim != self.A.cols:
            raise DimensionMismatch("fixed-point map S must act on the domain space")
        g = self.g if self.g is not None else zero_map(self.A.cols)
        if g.dim != self.A.cols:
            raise DimensionMismatch("contraction g must act on the domain space")
        if g.class_tag != "contraction":
            raise ValueError("g must be tagged as a contraction")
        object.__setattr__(self, "g", g)
        if self.known_solution is not None:
            xs = as_vector(self.known_solution, self.A.cols)
            if membership_residual(self.C, xs) > 1e-8:
                raise ValueError("known_solution is not in C (residual > 1e-8)")
            if membership_residual(self.Q, self.A.apply(xs)) > 1e-8:
                raise ValueError("A(known_solution) is not in Q (residual > 1e-8)")
            if self.S is not None and fixed_point_residual(self.S, xs) > 1e-8:
                raise ValueError("known_solution is not a fixed point of S (residual > 1e-8)")
            object.__setattr__(self, "known_solution", xs)

    @property
    def dim(self) -> int:
        return self.A.cols

    def f_value(self, x: np.ndarray) -> float:
        """Half the squared distance of A x from Q: 0.5 ||Ax - P_Q(Ax)||^2."""
        ax = self.A.apply(np.asarray(x, dtype=float))
        d = ax - self.Q.project(ax)
        return 0.5 * float(np.dot(d, d))

    def grad_f(self, x: np.ndarray) -> np.ndarray:
        """Gradient A^T (Ax - P_Q(Ax)) of :meth:`f_value`."""
        ax = self.A.apply(np.asarray(x, dtype=float))
        return self.A.apply_adjoint(ax - self.Q.project(ax))

    def averaged_map(self, lam: float) -> Callable[[np.ndarray], np.ndarray]:
        """The relaxation (1 - lam) I + lam S (identity when S is absent)."""
        s = self.S if self.S is not None else identity_map(self.dim)

        def t_lam(u: np.ndarray) -> np.ndarray:
            return (1.0 - lam) * u + lam * s(u)

        return t_lam

    def combined_residual(self, x: np.ndarray, lam: float) -> float:
        """max of the C-, Q- and fixed-point residuals at x."""
        x = np.asarray(x, dtype=float)
        res_c = membership_residual(self.C, x)
        ax = self.A.apply(x)
        res_q = norm(ax - self.Q.project(ax))
        res_fix = 0.0
        if self.S is not None:
            t = self.averaged_map(lam)
            res_fix = norm(t(x) - x)
        return max(res_c, res_q, res_fix)


# --- schedules ------------------------------------------------------------


@dataclass(frozen=True)
class Seq:
    """A scalar sequence indexed from n = 1: a named closed-form rule or a list.

    Rules: ``constant`` (value), ``power-law`` (const + coeff / n**power) and
    ``explicit`` (finite list of values).
    """

    rule: str
    value: float = 0.0
    const: float = 0.0
    coeff: float = 0.0
    power: float = 1.0
    values: tuple = ()

    def __post_init__(self):
        if self.rule not in ("constant", "power-law", "explicit"):
            raise ValueError(f"unknown sequence rule {self.rule!r}")
        if self.rule == "explicit" and len(self.values) == 0:
            raise ValueError("explicit sequence needs at least one value")

    @classmethod
    def constant(cls, value: float) -> "Seq":
        return cls(rule="constant", value=float(value))

    @classmethod
    def power_law(cls, const: float, coeff: float, power: float = 1.0) -> "Seq":
        return cls(rule="power-law", const=float(const), coeff=float(coeff), power=float(power))

    @classmethod
    def explicit(cls, values) -> "Seq":
        return cls(rule="explicit", values=tuple(float(v) for v in values))

    def at(self, n: int) -> float:
        if n < 1:
            raise ValueError("sequences are indexed from n = 1")
        if self.rule == "constant":
            return self.value
        if self.rule == "power-law":
            return self.const + self.coeff / float(n) ** self.power
        if n > len(self.values):
            raise ScheduleViolation(f"explicit sequence exhausted at n = {n} (length {len(self.values)})")
        return self.values[n - 1]

    def to_config(self):
        if self.rule == "constant":
            return self.value
        if self.rule == "explicit":
            return list(self.values)
        return {"rule": "power-law", "const": self.const, "coeff": self.coeff, "power": self.power}

    @classmethod
    def from_config(cls, obj) -> "Seq":
        if isinstance(obj, (int, float)):
            return cls.constant(float(obj))
        if isinstance(obj, (list, tuple)):
            return cls.explicit(obj)
        if isinstance(obj, dict):
            rule = obj.get("rule")
            if rule == "constant":
                return cls.constant(obj["value"])
            if rule == "power-law":
                return cls.power_law(obj.get("const", 0.0), obj.get("coeff", 0.0), obj.get("power", 1.0))
            if rule == "explicit":
                return cls.explicit(obj["values"])
            raise ValueError(f"unknown sequence rule {rule!r}")
        raise ValueError(f"cannot build a sequence from {obj!r}")


class StepParams(NamedTuple):
    alpha: float
    beta: float
    gamma: float
    delta: float
    rho: float
    epsilon: float


@dataclass(frozen=True)
class ParameterSchedule:
    """The per-iteration weights of the hybrid scheme.

    ``gamma=None`` means the complement 1 - alpha - beta, which satisfies the
    sum-to-one coupling by construction.  ``theta`` is the inertial cap and
    ``lam`` the averaging weight of the fixed-point map.
    """

    alpha: Seq
    beta: Seq
    gamma: Seq | None
    delta: Seq
    rho: Seq
    epsilon: Seq
    theta: float = 0.0
    lam: float = 0.5

    def __post_init__(self):
        if self.theta < 0:
            raise ValueError("theta must be >= 0")
        if not (0.0 < self.lam <= 1.0):
            raise ValueError("lam must lie in (0, 1]")

    def at(self, n: int) -> StepParams:
        a = self.alpha.at(n)
        b = self.beta.at(n)
        g = 1.0 - a - b if self.gamma is None else self.gamma.at(n)
        return StepParams(
            alpha=a, beta=b, gamma=g, delta=self.delta.at(n),
            rho=self.rho.at(n), epsilon=self.epsilon.at(n),
        )


def _check_step_params(p: StepParams, n: int, need_rho: bool) -> None:
    for name, val in (("alpha", p.alpha), ("beta", p.beta), ("gamma", p.gamma), ("delta", p.delta)):
        if not np.isfinite(val) or val < 0.0 or val > 1.0:
            raise ScheduleViolation(f"(range) {name}({n}) = {val} outside [0, 1]")
    if abs(p.alpha + p.beta + p.gamma - 1.0) > 1e-12:
        raise ScheduleViolation(
            f"(c5) alpha({n}) + beta({n}) + gamma({n}) = {p.alpha + p.beta + p.gamma!r} != 1"
        )
    if p.epsilon < 0.0 or not np.isfinite(p.epsilon):
        raise ScheduleViolation(f"(range) epsilon({n}) = {p.epsilon} must be >= 0")
    if need_rho and not (0.0 < p.rho < 4.0):
        raise ScheduleViolation(f"(range) rho({n}) = {p.rho} outside (0, 4)")


# --- stepper configuration -------------------------------------------------


@dataclass(frozen=True)
class StoppingRule:
    grad_tol: float = 1e-12
    residual_tol: float = 1e-9
    max_iter: int = 100_000

    def __post_init__(self):
        if self.grad_tol <= 0 or self.residual_tol <= 0:
            raise ValueError("stopping tolerances must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class StepperConfig:
    """How a step is composed and when the loop stops.

    ``mode`` selects where the projection and the (1 - delta) factor sit in
    the y-update:

    * ``proof``:     y = P_C((1-d)(u - tau grad) + d T u)
    * ``statement``: y = P_C((1-d) u - tau grad) + d T u
    * ``explore``:   y = P_C((1-d) u + d T u - tau grad)

    ``step_rule`` is ``adaptive`` (tau = rho f / ||grad f||^2) or ``fixed``
    (tau = fixed_step, which must lie in (0, 2/||A||^2)).  ``tau_numerator``
    evaluates the adaptive numerator at the extrapolated point (``u``, the
    default) or at the current iterate (``x``).
    """

    mode: str = "proof"
    step_rule: str = "adaptive"
    fixed_step: float | None = None
    tau_numerator: str = "u"
    grad_guard: float = GRAD_GUARD_DEFAULT
    stopping: StoppingRule = StoppingRule()

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.step_rule not in ("adaptive", "fixed"):
            raise ValueError("step_rule must be 'adaptive' or 'fixed'")
        if self.step_rule == "fixed" and (self.fixed_step is None or self.fixed_step <= 0):
            raise ValueError("fixed step rule needs fixed_step > 0")
        if self.tau_numerator not in ("u", "x"):
            raise ValueError("tau_numerator must be 'u' or 'x'")
        if self.grad_guard <= 0:
            raise ValueError("grad_guard must be > 0")


# --- elementary ops ---------------------------------------------------------


def inertial_theta(theta: float, epsilon_n: float, x_n: np.ndarray, x_prev: np.ndarray) -> float:
    """Per-step inertial weight min(theta, epsilon_n / ||x_n - x_prev||).

    Returns theta itself when the two iterates coincide; either way the
    product theta_n * ||x_n - x_prev|| never exceeds epsilon_n.
    """
    if theta < 0:
        raise ValueError("theta must be >= 0")
    if epsilon_n < 0:
        raise ValueError("epsilon_n must be >= 0")
    dx = norm(np.asarray(x_n, float) - np.asarray(x_prev, float))
    if dx == 0.0:
        return theta
    return min(theta, epsilon_n / dx)


def adaptive_tau(problem: SfpProblem, u: np.ndarray, rho: float, guard: float = GRAD_GUARD_DEFAULT) -> float:
    """Self-adaptive step size rho f(u) / ||grad f(u)||^2, 0 on a vanishing gradient."""
    if not (0.0 < rho < 4.0):
        raise ValueError("rho must lie in (0, 4)")
    if guard <= 0:
        raise ValueError("guard must be > 0")
    g = problem.grad_f(u)
    gg = float(np.dot(g, g))
    if gg <= guard:
        return 0.0
    return rho * problem.f_value(u) / gg


# --- stepping ---------------------------------------------------------------


@dataclass(frozen=True)
class StepRecord:
    """Scalar diagnostics of one step (NaN where a quantity is undefined)."""

    n: int
    theta: float
    tau: float
    f_u: float
    grad_norm_u: float
    res_c_x: float
    res_q_u: float
    fejer_gap_y: float
    fejer_gap_v: float
    quasi_ne_slack: float
    psi: float


@dataclass
class RunHistory:
    """Iterate trajectory plus per-step records; row 0 is the start point."""

    iterates: list
    records: list
    termination_reason: str

    @property
    def steps(self) -> int:
        return len(self.records)

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]


class _Advance(NamedTuple):
    x_next: np.ndarray
    record: StepRecord
    u: np.ndarray
    y: np.ndarray
    v: np.ndarray | None
    grad_norm_u: float


def _compose_y(mode: str, project, u, tau, gvec, delta, t_u):
    if mode == "proof":
        return project((1.0 - delta) * (u - tau * gvec) + delta * t_u)
    if mode == "statement":
        return project((1.0 - delta) * u - tau * gvec) + delta * t_u
    return project((1.0 - delta) * u + delta * t_u - tau * gvec)


def _advance(problem: SfpProblem, schedule: ParameterSchedule, config: StepperConfig,
             n: int, x_n: np.ndarray, x_prev: np.ndarray,
             t_lam=None) -> _Advance:
    p = schedule.at(n)
    _check_step_params(p, n, need_rho=config.step_rule == "adaptive")

    theta_n = inertial_theta(schedule.theta, p.epsilon, x_n, x_prev)
    u = x_n + theta_n * (x_n - x_prev)

    au = problem.A.apply(u)
    r_u = au - problem.Q.project(au)
    f_u = 0.5 * float(np.dot(r_u, r_u))
    gvec = problem.A.apply_adjoint(r_u)
    gg = float(np.dot(gvec, gvec))
    grad_norm_u = math.sqrt(gg)

    if config.step_rule == "fixed":
        tau = config.fixed_step
    elif gg <= config.grad_guard:
        tau = 0.0
    else:
        f_num = f_u if config.tau_numerator == "u" else problem.f_value(x_n)
        tau = p.rho * f_num / gg

    if t_lam is None:
        t_lam = problem.averaged_map(schedule.lam)
    t_u = t_lam(u)
    w_blend = (1.0 - p.delta) * (u - tau * gvec) + p.delta * t_u
    if config.mode == "proof":
        y = problem.C.project(w_blend)
        blend_residual = w_blend - y
    else:
        y = _compose_y(config.mode, problem.C.project, u, tau, gvec, p.delta, t_u)
        blend_residual = w_blend - problem.C.project(w_blend)
    x_next = p.alpha * problem.g(x_n) + p.beta * u + p.gamma * y

    v = None
    if 1.0 - p.alpha > 1e-300:
        v = (p.beta * u + p.gamma * y) / (1.0 - p.alpha)

    # distance monitors against the declared solution
    gap_y = gap_v = qne_slack = float("nan")
    xs = problem.known_solution
    if xs is not None:
        du = norm(u - xs)
        gap_y = norm(y - xs) - du
        gap_v = (norm(v - xs) - du) if v is not None else float("nan")
        qne_slack = norm(t_u - xs) - du

    psi = _psi_scalar(p, f_u, gg, config.grad_guard, t_u, u, tau, gvec, blend_residual)

    record = StepRecord(
        n=n,
        theta=theta_n,
        tau=tau,
        f_u=f_u,
        grad_norm_u=grad_norm_u,
        res_c_x=membership_residual(problem.C, x_n),
        res_q_u=math.sqrt(2.0 * f_u),
        fejer_gap_y=gap_y,
        fejer_gap_v=gap_v,
        quasi_ne_slack=qne_slack,
        psi=psi,
    )
    return _Advance(x_next=x_next, record=record, u=u, y=y, v=v, grad_norm_u=grad_norm_u)


def _psi_scalar(p: StepParams, f_u: float, gg: float, guard: float,
                t_u: np.ndarray, u: np.ndarray, tau: float, gvec: np.ndarray,
                blend_residual: np.ndarray) -> float:
    coef = p.gamma / (1.0 - p.alpha) if 1.0 - p.alpha > 1e-300 else 0.0
    term1 = 0.0
    if gg > guard:
        term1 = (1.0 - p.delta) * coef * p.rho * (4.0 - p.rho) * f_u * f_u / gg
    drift = t_u - u + tau * gvec
    term2 = p.delta * (1.0 - p.delta) * coef * float(np.dot(drift, drift))
    term3 = coef * float(np.dot(blend_residual, blend_residual))
    return term1 + term2 + term3


def psi_diagnostic(problem: SfpProblem, schedule: ParameterSchedule, n: int,
                   u: np.ndarray, tau: float, guard: float = GRAD_GUARD_DEFAULT) -> float:
    """The nonnegative per-step decrease certificate of the analysis.

    Three terms: the adaptive-gradient gain, the averaged-map drift and the
    projection residual of the blended point, each weighted by the current
    schedule values.  All divisions are guarded like the step itself.
    """
    p = schedule.at(n)
    u = as_vector(u, problem.dim)
    au = problem.A.apply(u)
    r_u = au - problem.Q.project(au)
    f_u = 0.5 * float(np.dot(r_u, r_u))
    gvec = problem.A.apply_adjoint(r_u)
    gg = float(np.dot(gvec, gvec))
    t_u = problem.averaged_map(schedule.lam)(u)
    w_blend = (1.0 - p.delta) * (u - tau * gvec) + p.delta * t_u
    blend_residual = w_blend - problem.C.project(w_blend)
    return _psi_scalar(p, f_u, gg, guard, t_u, u, tau, gvec, blend_residual)


def step(problem: SfpProblem, schedule: ParameterSchedule, config: StepperConfig,
         n: int, x_n: np.ndarray, x_prev: np.ndarray):
    """One update x_n -> x_{n+1}; returns (x_next, record).

    Raises :class:`ScheduleViolation` when the schedule breaks a hard
    constraint at index n.
    """
    x_n = as_vector(x_n, problem.dim)
    x_prev = as_vector(x_prev, problem.dim)
    adv = _advance(problem, schedule, config, n, x_n, x_prev)
    return adv.x_next, adv.record


def _warn_lambda_vs_modulus(problem: SfpProblem, schedule: ParameterSchedule) -> None:
    s = problem.S
    if s is not None and s.class_tag == "demicontractive" and s.modulus is not None:
        bound = 1.0 - s.modulus
        if not (0.0 < schedule.lam < bound):
            warnings.warn(
                f"averaging weight {schedule.lam} is outside (0, {bound:.6g}) for the declared "
                f"demicontractive modulus {s.modulus}; quasi-nonexpansiveness of the averaged "
                "map is not guaranteed",
                UserWarning,
                stacklevel=3,
            )


def run(problem: SfpProblem, schedule: ParameterSchedule, config: StepperConfig,
        x0, x1=None) -> RunHistory:
    """Iterate until the gradient and feasibility tolerances are met.

    The loop stops with reason ``residual_met`` when ||grad f(u_n)|| <=
    grad_tol and the combined residual at x_n is <= residual_tol, with
    ``grad_zero`` when only the gradient test fires (the scheme's own stop
    rule), or with ``max_iter``.  The stop test runs before the step, so a
    start at the solution performs zero steps.  Iterates above 1e12 in norm
    raise :class:`DivergenceError` carrying the partial history.

    ``x1`` defaults to ``x0`` (two seeds are needed by the inertial term).
    """
    x_prev = as_vector(x0, problem.dim)
    x_cur = as_vector(x1, problem.dim) if x1 is not None else x_prev

    if config.step_rule == "fixed":
        op_norm = problem.A.operator_norm()
        limit = 2.0 / op_norm**2 if op_norm > 0 else math.inf
        if not (0.0 < config.fixed_step < limit):
            raise ValueError(
                f"fixed step {config.fixed_step} outside (0, 2/||A||^2) = (0, {limit:.6g})"
            )
    _warn_lambda_vs_modulus(problem, schedule)

    stopping = config.stopping
    t_lam = problem.averaged_map(schedule.lam)
    iterates = [np.array(x_cur)]
    records: list[StepRecord] = []
    reason = "max_iter"
    for n in range(1, stopping.max_iter + 1):
        adv = _advance(problem, schedule, config, n, x_cur, x_prev, t_lam=t_lam)
        if adv.grad_norm_u <= stopping.grad_tol:
            res = problem.combined_residual(x_cur, schedule.lam)
            reason = "residual_met" if res <= stopping.residual_tol else "grad_zero"
            break
        x_next = adv.x_next
        if not np.isfinite(x_next).all() or norm(x_next) > DIVERGENCE_LIMIT:
            history = RunHistory(iterates=iterates, records=records, termination_reason="divergence")
            raise DivergenceError(f"iterates diverged at step {n}", history)
        records.append(adv.record)
        iterates.append(x_next)
        x_prev, x_cur = x_cur, x_next
    return RunHistory(iterates=iterates, records=records, termination_reason=reason)


# --- schedule validation -----------------------------------------------------


@dataclass(frozen=True)
class CheckEntry:
    condition: str
    level: str  # "pass" | "warn" | "fail"
    message: str


@dataclass
class ScheduleReport:
    horizon: int
    entries: list

    @property
    def ok(self) -> bool:
        return all(e.level != "fail" for e in self.entries)

    @property
    def warnings(self) -> list:
        return [e for e in self.entries if e.level == "warn"]

    def text(self) -> str:
        lines = [f"schedule check over n = 1..{self.horizon}"]
        for e in self.entries:
            lines.append(f"  [{e.level:4s}] {e.condition}: {e.message}")
        return "\n".join(lines)


def validate_schedule(schedule: ParameterSchedule, horizon: int) -> ScheduleReport:
    """Finite-horizon check of the admissibility conditions.

    The sum coupling (c5) and closed-range violations are hard failures; the
    asymptotic conditions (c1)-(c4) and the open-interval ranges are checked
    by finite proxies that can only warn, never prove.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    entries: list[CheckEntry] = []
    ns = range(1, horizon + 1)
    params = [schedule.at(n) for n in ns]
    alpha = np.array([p.alpha for p in params])
    beta = np.array([p.beta for p in params])
    gamma = np.array([p.gamma for p in params])
    delta = np.array([p.delta for p in params])
    rho = np.array([p.rho for p in params])
    eps = np.array([p.epsilon for p in params])

    def first_bad(mask) -> int:
        return int(np.argmax(mask)) + 1

    # hard range + (c5)
    for name, arr in (("alpha", alpha), ("beta", beta), ("gamma", gamma), ("delta", delta)):
        bad = ~np.isfinite(arr) | (arr < 0.0) | (arr > 1.0)
        if bad.any():
            entries.append(CheckEntry("range", "fail",
                                      f"{name}({first_bad(bad)}) = {arr[first_bad(bad) - 1]} outside [0, 1]"))
        else:
            at_boundary = (arr == 0.0) | (arr == 1.0)
            if at_boundary.any():
                entries.append(CheckEntry("range", "warn",
                                          f"{name} touches the boundary of (0, 1) (first at n = {first_bad(at_boundary)})"))
    if (eps < 0.0).any():
        entries.append(CheckEntry("range", "fail", f"epsilon({first_bad(eps < 0)}) < 0"))
    rho_bad = (rho <= 0.0) | (rho >= 4.0)
    if rho_bad.any():
        entries.append(CheckEntry("range", "warn",
                                  f"rho({first_bad(rho_bad)}) = {rho[first_bad(rho_bad) - 1]} outside (0, 4)"))
    csum = alpha + beta + gamma
    c5_bad = np.abs(csum - 1.0) > 1e-12
    if c5_bad.any():
        n_bad = first_bad(c5_bad)
        entries.append(CheckEntry("(c5)", "fail",
                                  f"alpha + beta + gamma = {csum[n_bad - 1]!r} != 1 at n = {n_bad}"))
    else:
        entries.append(CheckEntry("(c5)", "pass", "alpha + beta + gamma = 1 at every evaluated n"))

    tail = slice(max(0, horizon // 2 - 1), horizon)

    # (c1) limsup beta < 1
    beta_tail_max = float(beta[tail].max())
    if beta_tail_max < 1.0 - 1e-6:
        entries.append(CheckEntry("(c1)", "pass", f"tail max of beta = {beta_tail_max:.6g} < 1"))
    else:
        entries.append(CheckEntry("(c1)", "warn", f"tail max of beta = {beta_tail_max:.6g} is not bounded away from 1"))

    # (c2) epsilon/alpha -> 0
    if (alpha[tail] <= 0.0).any():
        entries.append(CheckEntry("(c2)", "warn", "alpha vanishes on the tail; epsilon/alpha is undefined"))
    else:
        ratio = eps[tail] / alpha[tail]
        if ratio[-1] <= ratio[0] + 1e-15 and ratio[-1] < 1e-2:
            entries.append(CheckEntry("(c2)", "pass", f"epsilon/alpha falls to {ratio[-1]:.3g} over the tail"))
        else:
            entries.append(CheckEntry("(c2)", "warn",
                                      f"epsilon/alpha = {ratio[-1]:.3g} at the horizon (started the tail at {ratio[0]:.3g})"))

    # (c3) alpha -> 0 with divergent sum
    a_end = float(alpha[-1])
    a_mid = float(alpha[max(0, horizon // 10 - 1)])
    decays = a_end < 1e-12 or a_end <= 0.9 * a_mid
    diverges = horizon * a_end >= 1e-2
    if decays and diverges:
        entries.append(CheckEntry("(c3)", "pass",
                                  f"alpha({horizon}) = {a_end:.3g} decays while n * alpha(n) = {horizon * a_end:.3g} stays away from 0"))
    else:
        entries.append(CheckEntry("(c3)", "warn",
                                  f"alpha({horizon}) = {a_end:.3g}, n * alpha(n) = {horizon * a_end:.3g}: "
                                  "decay toward 0 with a divergent sum is not evident"))

    # (c4) 0 < liminf delta <= limsup delta < 1
    d_lo, d_hi = float(delta[tail].min()), float(delta[tail].max())
    if d_lo > 1e-6 and d_hi < 1.0 - 1e-6:
        entries.append(CheckEntry("(c4)", "pass", f"tail of delta stays within [{d_lo:.6g}, {d_hi:.6g}]"))
    else:
        entries.append(CheckEntry("(c4)", "warn", f"tail of delta [{d_lo:.6g}, {d_hi:.6g}] is not interior to (0, 1)"))

    return ScheduleReport(horizon=horizon, entries=entries)

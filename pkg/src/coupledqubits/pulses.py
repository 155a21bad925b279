"""Pulse envelopes, detuning profiles and pulse sequences.

Gaussians follow ``A * exp(-(t - tau)**2 / T**2)`` (no factor of two in the
denominator). A flat-top pulse rises as a Gaussian centred at ``rise_center``,
holds the peak value until ``fall_center`` and then falls as a Gaussian
centred there, so it is continuous by construction.

Areas are quoted in the convention of the effective Hamiltonians (off-diagonal
``-Omega``): a resonant two-level transfer is complete at ``int Omega dt = pi/2``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate

from .errors import BothZero

#: Number of widths kept on each side of the outermost pulse centres.
WINDOW_WIDTHS = 8.0


class PulseKind(enum.Enum):
    CONSTANT = "constant"
    GAUSSIAN = "gaussian"
    FLAT_TOP_GAUSSIAN = "flat_top_gaussian"


class DetuningKind(enum.Enum):
    CONSTANT = "constant"
    LINEAR_CHIRP = "linear_chirp"


def _scalar_or_array(t, value):
    if np.ndim(t) == 0:
        return float(value)
    return value


@dataclass(frozen=True)
class PulseShape:
    """Real, non-negative envelope Omega(t)."""

    kind: PulseKind
    amplitude: float
    center: float = 0.0
    width: float = 1.0
    rise_center: float | None = None
    fall_center: float | None = None
    edge_width: float | None = None

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be non-negative, got {self.amplitude}")
        if self.kind is PulseKind.GAUSSIAN and self.width <= 0:
            raise ValueError(f"width must be positive, got {self.width}")
        if self.kind is PulseKind.FLAT_TOP_GAUSSIAN:
            if None in (self.rise_center, self.fall_center, self.edge_width):
                raise ValueError("flat-top pulse needs rise_center, fall_center and edge_width")
            if self.rise_center > self.fall_center:
                raise ValueError("rise_center must not exceed fall_center")
            if self.edge_width <= 0:
                raise ValueError(f"edge_width must be positive, got {self.edge_width}")

    @classmethod
    def constant(cls, amplitude: float) -> "PulseShape":
        return cls(PulseKind.CONSTANT, amplitude)

    @classmethod
    def gaussian(cls, amplitude: float, center: float, width: float) -> "PulseShape":
        return cls(PulseKind.GAUSSIAN, amplitude, center=center, width=width)

    @classmethod
    def flat_top(cls, amplitude: float, rise_center: float, fall_center: float,
                 edge_width: float) -> "PulseShape":
        return cls(PulseKind.FLAT_TOP_GAUSSIAN, amplitude,
                   center=0.5 * (rise_center + fall_center), width=edge_width,
                   rise_center=rise_center, fall_center=fall_center,
                   edge_width=edge_width)

    def __call__(self, t):
        return evaluate(self, t)

    def scaled(self, factor: float) -> "PulseShape":
        return replace(self, amplitude=self.amplitude * factor)

    def rescaled(self, s: float) -> "PulseShape":
        """Pulse ``s * Omega(s * t)``: same area, time axis compressed by ``s``."""
        opt = lambda x: None if x is None else x / s
        return replace(self, amplitude=self.amplitude * s, center=self.center / s,
                       width=self.width / s, rise_center=opt(self.rise_center),
                       fall_center=opt(self.fall_center), edge_width=opt(self.edge_width))

    def support(self) -> tuple[float, float] | None:
        """Interval outside which the pulse is negligible, or None if unbounded."""
        if self.kind is PulseKind.CONSTANT:
            return None
        if self.kind is PulseKind.GAUSSIAN:
            return (self.center - WINDOW_WIDTHS * self.width,
                    self.center + WINDOW_WIDTHS * self.width)
        return (self.rise_center - WINDOW_WIDTHS * self.edge_width,
                self.fall_center + WINDOW_WIDTHS * self.edge_width)

    def shortest_scale(self) -> float:
        if self.kind is PulseKind.CONSTANT:
            return math.inf
        return self.edge_width if self.kind is PulseKind.FLAT_TOP_GAUSSIAN else self.width


def evaluate(p: PulseShape, t):
    """Value of the envelope at time ``t`` (scalar or array)."""
    t = np.asarray(t, dtype=float)
    if p.kind is PulseKind.CONSTANT:
        return _scalar_or_array(t, np.full_like(t, p.amplitude))
    if p.kind is PulseKind.GAUSSIAN:
        return _scalar_or_array(t, p.amplitude * np.exp(-((t - p.center) / p.width) ** 2))
    rise = np.exp(-((np.minimum(t, p.rise_center) - p.rise_center) / p.edge_width) ** 2)
    fall = np.exp(-((np.maximum(t, p.fall_center) - p.fall_center) / p.edge_width) ** 2)
    return _scalar_or_array(t, p.amplitude * rise * fall)


def pulse_area(p: PulseShape, t0: float, t1: float) -> float:
    """Integral of the envelope over ``[t0, t1]``."""
    if not t0 < t1:
        raise ValueError(f"need t0 < t1, got {t0}, {t1}")
    if p.kind is PulseKind.CONSTANT:
        return p.amplitude * (t1 - t0)
    points = [c for c in (p.center, p.rise_center, p.fall_center)
              if c is not None and t0 < c < t1]
    value, _ = integrate.quad(lambda s: evaluate(p, s), t0, t1, points=points or None,
                              epsabs=1e-10, epsrel=1e-12, limit=200)
    return value


def gaussian_for_area(area: float, center: float = 0.0, width: float = 1.0) -> PulseShape:
    """Gaussian whose full integral equals ``area``."""
    return PulseShape.gaussian(area / (width * math.sqrt(math.pi)), center, width)


def mixing_angle(omega1: float, omega3: float) -> float:
    """Dark-state mixing angle with ``tan(theta) = omega3 / omega1``."""
    if omega1 == 0 and omega3 == 0:
        raise BothZero("mixing angle undefined when both Rabi frequencies vanish")
    return math.atan2(omega3, omega1)


@dataclass(frozen=True)
class DetuningProfile:
    kind: DetuningKind
    value: float = 0.0
    slope: float = 0.0
    center: float = 0.0

    def __post_init__(self):
        if self.kind is DetuningKind.LINEAR_CHIRP and self.slope == 0:
            raise ValueError("linear chirp needs a non-zero slope")

    @classmethod
    def constant(cls, value: float) -> "DetuningProfile":
        return cls(DetuningKind.CONSTANT, value=value)

    @classmethod
    def linear_chirp(cls, slope: float, center: float = 0.0) -> "DetuningProfile":
        return cls(DetuningKind.LINEAR_CHIRP, slope=slope, center=center)

    @property
    def is_constant(self) -> bool:
        return self.kind is DetuningKind.CONSTANT

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind is DetuningKind.CONSTANT:
            return _scalar_or_array(t, np.full_like(t, self.value))
        return _scalar_or_array(t, self.slope * (t - self.center))

    def negated(self) -> "DetuningProfile":
        return replace(self, value=-self.value, slope=-self.slope)

    def scaled(self, factor: float) -> "DetuningProfile":
        return replace(self, value=self.value * factor, slope=self.slope * factor)

    def rescaled(self, s: float) -> "DetuningProfile":
        """Profile ``s * Delta(s * t)``."""
        return replace(self, value=self.value * s, slope=self.slope * s * s, center=self.center / s)


def default_chirp(peak: float, center: float, t_edge: float,
                  ratio: float = 5.0) -> DetuningProfile:
    """Linear chirp reaching ``ratio * peak`` at ``t_edge``."""
    return DetuningProfile.linear_chirp(ratio * peak / abs(t_edge - center), center)


@dataclass(frozen=True)
class Drive:
    """A pulse bound to one channel of an effective scheme, with a carrier phase."""

    channel: int
    shape: PulseShape
    phase: float = 0.0

    def __call__(self, t):
        value = self.shape(t)
        if self.phase == 0.0:
            return value
        return value * np.exp(1j * self.phase)


@dataclass(frozen=True)
class PulseSequence:
    """Channel-indexed pulses and detunings on a fixed time window."""

    pulses: tuple[Drive, ...]
    detunings: tuple[tuple[int, DetuningProfile], ...] = ()
    t_start: float | None = None
    t_end: float | None = None
    _bounds: tuple[float, float] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        channels = [d.channel for d in self.pulses]
        if len(set(channels)) != len(channels):
            raise ValueError(f"channel bound more than once: {channels}")
        det_channels = [c for c, _ in self.detunings]
        if len(set(det_channels)) != len(det_channels):
            raise ValueError(f"detuning channel bound more than once: {det_channels}")
        t0, t1 = self.t_start, self.t_end
        if t0 is None or t1 is None:
            spans = [s for s in (d.shape.support() for d in self.pulses) if s is not None]
            if not spans:
                raise ValueError("constant-only sequences need explicit t_start and t_end")
            t0 = min(s[0] for s in spans) if t0 is None else t0
            t1 = max(s[1] for s in spans) if t1 is None else t1
        if not t0 < t1:
            raise ValueError(f"need t_start < t_end, got {t0}, {t1}")
        object.__setattr__(self, "_bounds", (float(t0), float(t1)))

    @property
    def window(self) -> tuple[float, float]:
        return self._bounds

    def rabi(self, n_channels: int) -> list:
        """Per-channel Rabi functions; unbound channels are identically zero."""
        out = [0.0] * n_channels
        for d in self.pulses:
            if not 0 <= d.channel < n_channels:
                raise ValueError(f"channel {d.channel} out of range for {n_channels} channels")
            out[d.channel] = d
        return out

    def detuning(self, n_channels: int) -> list:
        out = [0.0] * n_channels
        for c, prof in self.detunings:
            if not 0 <= c < n_channels:
                raise ValueError(f"channel {c} out of range for {n_channels} channels")
            out[c] = prof.value if prof.is_constant else prof
        return out

    def rescaled(self, s: float) -> "PulseSequence":
        t0, t1 = self.window
        return PulseSequence(
            tuple(replace(d, shape=d.shape.rescaled(s)) for d in self.pulses),
            tuple((c, prof.rescaled(s)) for c, prof in self.detunings),
            t0 / s, t1 / s)

    def jittered(self, amplitude_factor: float, slope_factor: float = 1.0) -> "PulseSequence":
        """Scale every pulse amplitude and every chirp slope by common factors."""
        return PulseSequence(
            tuple(replace(d, shape=d.shape.scaled(amplitude_factor)) for d in self.pulses),
            tuple((c, replace(prof, slope=prof.slope * slope_factor))
                  for c, prof in self.detunings),
            *self.window)

    def peak_rabi(self) -> float:
        return max((d.shape.amplitude for d in self.pulses), default=0.0)

    def shortest_scale(self) -> float:
        return min((d.shape.shortest_scale() for d in self.pulses), default=math.inf)

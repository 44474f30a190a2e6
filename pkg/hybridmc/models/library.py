"""
Built-in models: the thermostatically controlled load (TCL) case study and
analytic oracles.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from hybridmc.errors import ModelError
from hybridmc.models.invariants import BoxInvariant
from hybridmc.models.shs import HybridState, ModeSemantics, ShsModel

OFF, ON = 0, 1


@dataclass(frozen=True)
class TclParams:
    """
    Residential air conditioner parameters. Time unit is hours.

    Attributes:
        setpoint: Temperature set-point theta_s [C]
        deadband: Dead-band width delta_d [C]
        ambient: Ambient temperature theta_a [C]
        power: Energy transfer rate P_rate [kW]
        resistance: Thermal resistance R [C/kW]
        capacitance: Thermal capacitance C [kWh/C]
        sigma_off: Noise intensity in the OFF mode [C/sqrt(hour)]
        sigma_on: Noise intensity in the ON mode [C/sqrt(hour)]
        initial_mode: Mode at time 0
        initial_temperature: Temperature at time 0 (defaults to the set-point)
    """

    setpoint: float = 20.0
    deadband: float = 0.5
    ambient: float = 32.0
    power: float = 14.0
    resistance: float = 1.5
    capacitance: float = 10.0
    sigma_off: float = 0.2
    sigma_on: float = 0.22
    initial_mode: int = OFF
    initial_temperature: float | None = None

    def __post_init__(self):
        for name in ("setpoint", "deadband", "ambient", "power", "resistance", "capacitance"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ModelError(f"TCL parameter {name} must be positive, got {value}")
        # zero noise gives the deterministic variant
        for name in ("sigma_off", "sigma_on"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ModelError(f"TCL parameter {name} must be non-negative, got {value}")
        if self.initial_mode not in (OFF, ON):
            raise ModelError(f"TCL initial mode must be 0 or 1, got {self.initial_mode}")

    @property
    def theta_minus(self) -> float:
        return self.setpoint - self.deadband / 2

    @property
    def theta_plus(self) -> float:
        return self.setpoint + self.deadband / 2

    @property
    def max_threshold(self) -> float:
        """Default threshold of the running-maximum probability."""
        return self.theta_plus + 0.1 * self.deadband


def tcl_switch(params: TclParams, q: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Thermostat law f(q, theta): ON above theta_+, OFF below theta_-, else hold."""
    q = np.asarray(q)
    theta = np.asarray(theta, dtype=float)
    return np.where(theta >= params.theta_plus, ON, np.where(theta <= params.theta_minus, OFF, q)).astype(int)


def tcl_model(params: TclParams | None = None, semantics: ModeSemantics = ModeSemantics.DIGITAL) -> ShsModel:
    """
    Two-mode cooling TCL.

    OFF has invariant (-inf, theta_+), ON has (theta_-, +inf). The drift is
    (theta_a - q R P_rate - theta) / (C R) and the noise intensity depends
    on the mode only. The boundary kernel is the Kronecker delta at f(q, theta).
    """
    p = params or TclParams()
    rp = p.resistance * p.power
    cr = p.capacitance * p.resistance
    sigmas = np.array([p.sigma_off, p.sigma_on], dtype=float)

    def drift(q: np.ndarray, z: np.ndarray) -> np.ndarray:
        return (p.ambient - q[:, np.newaxis] * rp - z) / cr

    def diffusion(q: np.ndarray, z: np.ndarray) -> np.ndarray:
        return sigmas[q][:, np.newaxis, np.newaxis]

    def kernel(q: int, z: np.ndarray) -> np.ndarray:
        row = np.zeros(2)
        row[int(tcl_switch(p, q, z[0]))] = 1.0
        return row

    def mode_law(q: np.ndarray, z: np.ndarray) -> np.ndarray:
        return tcl_switch(p, q, z[:, 0])

    theta0 = p.setpoint if p.initial_temperature is None else p.initial_temperature
    return ShsModel(
        name="tcl",
        invariants=(BoxInvariant.interval(upper=p.theta_plus), BoxInvariant.interval(lower=p.theta_minus)),
        drift=drift,
        diffusion=diffusion,
        noise_dim=1,
        x0=HybridState(p.initial_mode, (theta0,)),
        kernel=kernel,
        semantics=semantics,
        mode_law=mode_law,
    )


def _stay_kernel(q: int, z: np.ndarray) -> np.ndarray:
    return np.array([1.0])


def brownian_barrier_model(mu: float, sigma: float, barrier: float = math.inf, z0: float = 0.0) -> ShsModel:
    """
    One-mode Brownian motion with drift, dz = mu dt + sigma dW, on (-inf, barrier).

    With the default barrier the process is free and its running maximum
    follows `reflection_cdf`. A finite barrier clamps the path at the
    boundary, so the first exit time from (-inf, barrier) satisfies
    P(Y <= s) = 1 - reflection_cdf(mu, sigma, s, barrier - z0). The clamped
    running maximum never exceeds the barrier, so P(RunningMax <= s) = 1 for
    any s >= barrier.
    """
    if not sigma > 0:
        raise ModelError(f"volatility must be positive, got {sigma}")

    def drift(q: np.ndarray, z: np.ndarray) -> np.ndarray:
        return np.full(z.shape, float(mu))

    def diffusion(q: np.ndarray, z: np.ndarray) -> np.ndarray:
        return np.full((z.shape[0], 1, 1), float(sigma))

    return ShsModel(
        name="brownian",
        invariants=(BoxInvariant.interval(upper=barrier),),
        drift=drift,
        diffusion=diffusion,
        noise_dim=1,
        x0=HybridState(0, (z0,)),
        kernel=_stay_kernel,
        semantics=ModeSemantics.PROJECTION,
    )


def reflection_cdf(mu: float, sigma: float, horizon: float, level: float) -> float:
    """
    P(max_{t<=s} (mu t + sigma W_t) <= a) by the reflection principle.

    Equals Phi((a - mu s)/(sigma sqrt s)) - exp(2 mu a / sigma^2) Phi((-a - mu s)/(sigma sqrt s))
    for a >= 0, and 0 for a < 0.
    """
    if level < 0:
        return 0.0
    if math.isinf(level):
        return 1.0
    scale = sigma * math.sqrt(horizon)
    first = norm.cdf((level - mu * horizon) / scale)
    # log-space keeps exp(2 mu a / sigma^2) from overflowing
    second = math.exp(2 * mu * level / sigma**2 + norm.logcdf((-level - mu * horizon) / scale))
    return float(min(1.0, max(0.0, first - second)))


def linear_model(rate: float, sigma: float = 0.0, z0: float = 1.0) -> ShsModel:
    """One-mode linear SDE dz = rate * z dt + sigma dW on the whole line."""
    if not sigma >= 0:
        raise ModelError(f"noise intensity must be non-negative, got {sigma}")

    def drift(q: np.ndarray, z: np.ndarray) -> np.ndarray:
        return rate * z

    def diffusion(q: np.ndarray, z: np.ndarray) -> np.ndarray:
        return np.full((z.shape[0], 1, 1), float(sigma))

    return ShsModel(
        name="linear",
        invariants=(BoxInvariant.whole_space(1),),
        drift=drift,
        diffusion=diffusion,
        noise_dim=1,
        x0=HybridState(0, (z0,)),
        kernel=_stay_kernel,
        semantics=ModeSemantics.PROJECTION,
    )

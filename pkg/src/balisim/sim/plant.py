"""Brake actuation plant: first-order lag with dead time.

The commanded acceleration passes through a FIFO delay line of
round(Td/dt) entries and a first-order lag with constant Tp.  The
realized acceleration is clamped to the physical range [alpha_max, 0]
after the lag: the controller may command any value (it does during an
early-stop attack), but the train can neither brake harder than
alpha_max nor propel itself during the approach.  Velocity clamps at
zero; a stopped train stays stopped.
"""

from __future__ import annotations

from collections import deque

from .params import TrainParams


class BrakePlant:
    def __init__(self, params: TrainParams):
        self.params = params
        self.p = params.p0
        self.v = params.v0
        self.alpha = 0.0
        self._delay: deque[float] = deque([0.0] * round(params.Td / params.dt))

    def step(self, alpha_cmd: float) -> None:
        """Advance one dt with the given commanded acceleration."""
        par = self.params
        if self._delay:
            self._delay.append(alpha_cmd)
            delayed = self._delay.popleft()
        else:
            delayed = alpha_cmd
        if par.Tp > 0:
            self.alpha += par.dt * (delayed - self.alpha) / par.Tp
        else:
            self.alpha = delayed
        self.alpha = min(0.0, max(par.alpha_max, self.alpha))
        self.v = max(0.0, self.v + self.alpha * par.dt)
        self.p += self.v * par.dt

    @property
    def stopped(self) -> bool:
        return self.v == 0.0

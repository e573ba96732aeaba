"""Scenario configuration, the stop-control run loop, and result output.

A scenario deploys telegrams on a balise sequence, optionally attacks
them, and integrates the train from p0 until standstill.  Balise
crossings are processed at the step in which the train position passes
the balise; the onboard reader decodes the transmitted stream through
the real codec (and, in authenticated deployments, verifies the tag by
trying the keys of every balise id in the track map, which is what lets
a cloned telegram verify under its source identity).  The controller is
either the plain online braking controller, which consumes reports
as-is, or the resilient hybrid, which filters every encounter through
derive_trustworthy_info and falls back to the conservative controller
when balise_missing fires.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field

from .. import auth, codec
from .anomaly import AnomalyState, PositionEstimate, balise_missing, \
    derive_trustworthy_info
from .conservative import ConservativeController
from .deployment import AUTH_AUTHENTICATED, AUTH_LEGACY, AttackSpec, \
    BaliseSpec, Clone, DeployedBalise, KIND_CONTROLLED, KIND_FIXED, Tamper, \
    Unavailable, apply_attacks, build_deployment, load_telegram, parse_payload
from .hoa import FULL_BRAKE, HoaController, IGNORE
from . import params
from .params import TrainParams
from .plant import BrakePlant

CONTROLLER_HOA = "hoa"
CONTROLLER_RESILIENT = "resilient"

MODE_HOA = "hoa"
MODE_MAX_BRAKE = "max_brake"


class ConfigError(ValueError):
    """Scenario configuration is malformed."""


class SimTimeout(Exception):
    """The train did not stop within max_time_s."""


DEFAULT_BALISES = [
    BaliseSpec(id=1, loc=-100.0, kind=KIND_FIXED),
    BaliseSpec(id=2, loc=-64.0, kind=KIND_FIXED),
    BaliseSpec(id=3, loc=-36.0, kind=KIND_FIXED),
    BaliseSpec(id=4, loc=-16.0, kind=KIND_FIXED),
    BaliseSpec(id=5, loc=-4.0, kind=KIND_FIXED),
    BaliseSpec(id=6, loc=0.0, kind=KIND_CONTROLLED),
]


@dataclass
class ScenarioConfig:
    train: TrainParams = field(default_factory=TrainParams)
    balises: list[BaliseSpec] = field(default_factory=lambda: list(DEFAULT_BALISES))
    attacks: list[AttackSpec] = field(default_factory=list)
    controller: str = CONTROLLER_HOA
    dbz_strategy: str = FULL_BRAKE
    auth_mode: str = AUTH_LEGACY
    p_est0: float | None = None   # None: start from the true position
    delta0: float = 15.0
    growth_k: float = 0.02
    eta0: float = params.ETA0
    v_con: float = params.V_CREEP
    seed: int = 1
    max_time_s: float = 600.0
    telegram_format: str = "long"
    keystore_path: str | None = None
    telegram_files: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.controller not in (CONTROLLER_HOA, CONTROLLER_RESILIENT):
            raise ConfigError(f"unknown controller {self.controller!r}")
        if self.dbz_strategy not in (FULL_BRAKE, IGNORE):
            raise ConfigError(f"unknown dbz_strategy {self.dbz_strategy!r}")
        if self.auth_mode not in (AUTH_LEGACY, AUTH_AUTHENTICATED):
            raise ConfigError(f"unknown auth_mode {self.auth_mode!r}")
        if self.telegram_format not in codec.FORMATS:
            raise ConfigError(f"unknown telegram_format {self.telegram_format!r}")
        locs = [b.loc for b in self.balises]
        if sorted(locs) != locs or len(set(locs)) != len(locs):
            raise ConfigError("balise locations must be strictly increasing")
        controlled = [b for b in self.balises if b.kind == KIND_CONTROLLED]
        if len(controlled) != 1 or controlled[0].loc != 0.0:
            raise ConfigError("exactly one controlled balise at location 0 required")
        if len({b.id for b in self.balises}) != len(self.balises):
            raise ConfigError("balise ids must be unique")
        if self.max_time_s <= 0:
            raise ConfigError("max_time_s must be positive")


def _parse_attack(raw: dict) -> AttackSpec:
    kind = raw.get("type")
    try:
        if kind == "tamper":
            return Tamper(balise=int(raw["balise"]), new_loc=float(raw["new_loc"]))
        if kind == "clone":
            return Clone(src=int(raw["src"]), dst=int(raw["dst"]))
        if kind == "unavailable":
            return Unavailable(balise=int(raw["balise"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad attack spec {raw!r}") from exc
    raise ConfigError(f"unknown attack type {kind!r}")


def config_from_dict(raw: dict, base_dir: str | None = None) -> ScenarioConfig:
    def resolve(path: str) -> str:
        if base_dir is not None and not os.path.isabs(path):
            return os.path.join(base_dir, path)
        return path

    try:
        kwargs: dict = {}
        if "train" in raw:
            kwargs["train"] = TrainParams(**raw["train"])
        if "balises" in raw:
            specs, files = [], {}
            for entry in raw["balises"]:
                entry = dict(entry)
                telegram = entry.pop("telegram", None)
                spec = BaliseSpec(**entry)
                specs.append(spec)
                if telegram is not None:
                    files[spec.id] = resolve(telegram)
            kwargs["balises"] = specs
            kwargs["telegram_files"] = files
        if "attacks" in raw:
            kwargs["attacks"] = [_parse_attack(a) for a in raw["attacks"]]
        if "keystore" in raw:
            kwargs["keystore_path"] = resolve(raw["keystore"])
        for key in ("controller", "dbz_strategy", "auth_mode", "p_est0",
                    "delta0", "growth_k", "eta0", "v_con", "seed",
                    "max_time_s", "telegram_format"):
            if key in raw:
                kwargs[key] = raw[key]
        return ScenarioConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str) -> ScenarioConfig:
    with open(path, encoding="utf-8") as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("scenario config must be a JSON object")
    return config_from_dict(raw, base_dir=os.path.dirname(os.path.abspath(path)))


# ---------------------------------------------------------------------------
# Run loop
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrajectoryRow:
    t: float
    p: float
    v: float
    alpha_cmd: float
    alpha_actual: float
    mode: str
    event: str


@dataclass
class SimResult:
    stop_error: float
    stop_time: float
    trajectory: list[TrajectoryRow]
    mode_switches: int
    auth_failures: int
    balise_missing_events: int


def _read_balise(
    deployed: DeployedBalise,
    auth_mode: str,
    keystore: auth.Keystore,
    track_ids: list[int],
    fmt: codec.TelegramFormat,
) -> tuple[int, str, float] | None:
    """Decode (and verify) one transmission; None when unusable."""
    stream = deployed.telegram * 3
    if auth_mode == AUTH_LEGACY:
        try:
            result = codec.decode_stream(stream, fmt)
            return parse_payload(result.user_bits)
        except (codec.CodecError, ValueError):
            return None
    for balise_id in track_ids:
        try:
            user = auth.verify_and_decode(stream, keystore.keys_for(balise_id), fmt)
            return parse_payload(user)
        except (auth.AuthFailure, codec.CodecError, ValueError):
            continue
    return None


def run_scenario(cfg: ScenarioConfig) -> SimResult:
    fmt = codec.FORMATS[cfg.telegram_format]
    if cfg.keystore_path is not None:
        keystore = auth.load_keystore(cfg.keystore_path)
    else:
        keystore = auth.new_keystore(seed=cfg.seed)
    deployment = build_deployment(cfg.balises, cfg.auth_mode, keystore, fmt)
    for deployed in deployment:
        path = cfg.telegram_files.get(deployed.spec.id)
        if path is not None:
            file_fmt, bits = load_telegram(path)
            if file_fmt.name != fmt.name:
                raise ConfigError(
                    f"telegram file {path} is {file_fmt.name}, "
                    f"scenario uses {fmt.name}")
            deployed.telegram = bits
    apply_attacks(deployment, cfg.attacks, fmt)

    train = cfg.train
    plant = BrakePlant(train)
    hoa = HoaController(eta0=cfg.eta0, alpha_max=train.alpha_max,
                        dbz_strategy=cfg.dbz_strategy)
    resilient = cfg.controller == CONTROLLER_RESILIENT
    conservative = ConservativeController(v_con=cfg.v_con,
                                          alpha_max=train.alpha_max)
    p_est0 = train.p0 if cfg.p_est0 is None else cfg.p_est0
    est = PositionEstimate(p_est0, cfg.delta0, cfg.growth_k)
    state = AnomalyState(
        known_locs=[b.loc for b in cfg.balises if b.kind == KIND_FIXED])
    track_ids = [b.id for b in cfg.balises]

    cmd = 0.0
    marker_seen = False
    conservative_active = False
    auth_failures = 0
    missing_events = 0
    next_idx = 0
    mode = MODE_HOA
    rows = [TrajectoryRow(0.0, plant.p, plant.v, cmd, plant.alpha, mode, "")]
    max_steps = int(round(cfg.max_time_s / train.dt))

    for step in range(max_steps):
        events: list[str] = []

        # Balise crossings at the current position, in track order.
        while next_idx < len(deployment) \
                and plant.p >= deployment[next_idx].spec.loc:
            deployed = deployment[next_idx]
            next_idx += 1
            label = f"B{next_idx}"
            if deployed.telegram is None:
                events.append(f"{label}:no_telegram")
                continue
            fields = _read_balise(deployed, cfg.auth_mode, keystore,
                                  track_ids, fmt)
            if fields is None:
                auth_failures += 1
                events.append(f"{label}:auth_fail")
                if resilient:
                    res = derive_trustworthy_info(
                        False, None, est, state,
                        allow_ordering=not conservative_active)
                    events.append(f"{label}:{res.event}")
                    if res.loc is not None and not conservative_active \
                            and not marker_seen:
                        cmd = hoa.on_balise(plant.v, res.loc)
                continue
            _, kind, loc_reported = fields
            if resilient:
                res = derive_trustworthy_info(
                    True, loc_reported, est, state,
                    allow_ordering=not conservative_active)
                events.append(f"{label}:{res.event}")
                if kind == KIND_CONTROLLED:
                    marker_seen = True
                    events.append(f"{label}:marker")
                elif res.loc is not None and not conservative_active \
                        and not marker_seen:
                    cmd = hoa.on_balise(plant.v, res.loc)
            else:
                if kind == KIND_CONTROLLED:
                    marker_seen = True
                    events.append(f"{label}:marker")
                elif not marker_seen:
                    cmd = hoa.on_balise(plant.v, loc_reported)
                    events.append(f"{label}:hoa_update")

        # Missing-balise detection, active while the default controller runs.
        if resilient and not conservative_active:
            trigger = balise_missing(est, state)
            if trigger is not None:
                conservative_active = True
                missing_events += 1
                events.append(f"balise_missing({trigger})")

        # Command selection.
        if resilient and conservative_active:
            cmd = conservative.step(plant.v, marker_seen, train.dt)
            mode = conservative.mode
        elif marker_seen:
            cmd = train.alpha_max
            mode = MODE_MAX_BRAKE
        else:
            mode = MODE_HOA

        plant.step(cmd)
        est.advance(plant.v * train.dt)
        rows.append(TrajectoryRow((step + 1) * train.dt, plant.p, plant.v,
                                  cmd, plant.alpha, mode, ";".join(events)))
        if plant.stopped:
            return SimResult(
                stop_error=plant.p,
                stop_time=(step + 1) * train.dt,
                trajectory=rows,
                mode_switches=sum(
                    1 for a, b in zip(rows, rows[1:]) if a.mode != b.mode),
                auth_failures=auth_failures,
                balise_missing_events=missing_events,
            )
    raise SimTimeout(f"train still moving after {cfg.max_time_s} s")


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

CSV_HEADER = ["t", "p", "v", "alpha_cmd", "alpha_actual", "mode", "event"]


def write_trajectory_csv(result: SimResult, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_HEADER)
        for row in result.trajectory:
            writer.writerow([
                f"{row.t:.2f}", f"{row.p:.6f}", f"{row.v:.6f}",
                f"{row.alpha_cmd:.6f}", f"{row.alpha_actual:.6f}",
                row.mode, row.event,
            ])


def summary_dict(result: SimResult) -> dict:
    return {
        "stop_error_m": result.stop_error,
        "stop_time_s": result.stop_time,
        "mode_switches": result.mode_switches,
        "auth_failures": result.auth_failures,
    }


def write_summary(result: SimResult, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(summary_dict(result), f, indent=2)
        f.write("\n")

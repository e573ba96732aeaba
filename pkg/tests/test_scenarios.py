"""Tests for scenario configuration, the run loop, and result output."""

import csv
import json
import os

import pytest

import balisim
from balisim.codec import LONG, SHORT
from balisim.sim import (
    BaliseSpec,
    ConfigError,
    ScenarioConfig,
    SimTimeout,
    Tamper,
    config_from_dict,
    load_config,
    run_scenario,
    save_telegram,
    summary_dict,
    write_trajectory_csv,
)
from balisim.sim.deployment import LEGACY_SB, pack_payload
from balisim.sim.scenario import CSV_HEADER
from balisim import codec

SCENARIO_DIR = os.path.join(os.path.dirname(balisim.__file__), "scenarios")


def bundled(name):
    return load_config(os.path.join(SCENARIO_DIR, name + ".json"))


# ---------------------------------------------------------------------------
# Run loop invariants
# ---------------------------------------------------------------------------

def test_no_attack_stops_near_marker():
    result = run_scenario(bundled("no_attack"))
    assert abs(result.stop_error) <= 0.3


def test_runs_are_deterministic():
    cfg_a = bundled("tamper_b1_resilient_pest120")
    cfg_b = bundled("tamper_b1_resilient_pest120")
    res_a = run_scenario(cfg_a)
    res_b = run_scenario(cfg_b)
    assert res_a.stop_error == res_b.stop_error
    assert res_a.trajectory == res_b.trajectory


@pytest.mark.parametrize("name", ["no_attack", "tamper_b1_legacy",
                                  "availability_b1_resilient"])
def test_trajectory_kinematics(name):
    cfg = bundled(name)
    result = run_scenario(cfg)
    dt = cfg.train.dt
    for prev, cur in zip(result.trajectory, result.trajectory[1:]):
        assert cur.v == pytest.approx(
            max(0.0, prev.v + cur.alpha_actual * dt), abs=1e-12)
        assert cur.p == pytest.approx(prev.p + cur.v * dt, abs=1e-12)


def test_alpha_actual_saturated_and_speed_monotone():
    cfg = bundled("tamper_b1_legacy")  # commands far exceed the brake limit
    result = run_scenario(cfg)
    alpha_max = cfg.train.alpha_max
    for prev, cur in zip(result.trajectory, result.trajectory[1:]):
        assert alpha_max <= cur.alpha_actual <= 0.0
        assert cur.v <= prev.v + 1e-12


def test_trajectory_row_count_matches_stop_time():
    cfg = bundled("no_attack")
    result = run_scenario(cfg)
    assert len(result.trajectory) == round(result.stop_time / cfg.train.dt) + 1
    assert result.trajectory[0].t == 0.0
    assert result.trajectory[-1].v == 0.0


def test_mode_switch_counting():
    plain = run_scenario(bundled("no_attack"))
    assert plain.mode_switches == 1  # hoa -> max_brake at the stop marker
    resilient = run_scenario(bundled("availability_b1_resilient"))
    assert resilient.mode_switches >= 2  # hoa -> pid1 -> pid2 -> max_brake


def test_event_counters():
    missing = run_scenario(bundled("availability_b1_resilient"))
    assert missing.balise_missing_events == 1
    assert missing.auth_failures == 0  # suppression never reaches the decoder

    tampered = run_scenario(bundled("tamper_b1_resilient_pest120"))
    assert tampered.auth_failures == 1
    assert tampered.balise_missing_events == 0


def test_conservative_overshoot_within_worst_case_bound():
    cfg = bundled("availability_b1_resilient")
    result = run_scenario(cfg)
    marker_rows = [r for r in result.trajectory if ":marker" in r.event]
    assert len(marker_rows) == 1
    travel = result.stop_error - marker_rows[0].p
    # dead time at v_con, braking distance from v_con, two steps of slack
    bound = (cfg.v_con * cfg.train.Td
             + cfg.v_con ** 2 / (2.0 * abs(cfg.train.alpha_max))
             + 2.0 * cfg.v_con * cfg.train.dt)
    assert 0.0 <= travel <= bound


def test_timeout_raises():
    cfg = bundled("no_attack")
    cfg.max_time_s = 0.05
    with pytest.raises(SimTimeout):
        run_scenario(cfg)


# ---------------------------------------------------------------------------
# Config validation
# ---------------------------------------------------------------------------

def _balises(**overrides):
    specs = [
        {"id": 1, "loc": -100.0, "kind": "fixed"},
        {"id": 2, "loc": -64.0, "kind": "fixed"},
        {"id": 3, "loc": 0.0, "kind": "controlled"},
    ]
    return [dict(s, **overrides.get(s["id"], {})) for s in specs]


def test_config_defaults_are_valid():
    cfg = ScenarioConfig()
    assert cfg.controller == "hoa"
    assert len(cfg.balises) == 6


@pytest.mark.parametrize("field,value", [
    ("controller", "mpc"),
    ("dbz_strategy", "panic"),
    ("auth_mode", "signed"),
    ("telegram_format", "medium"),
    ("max_time_s", 0.0),
    ("max_time_s", -1.0),
])
def test_config_rejects_bad_scalar_fields(field, value):
    with pytest.raises(ConfigError):
        ScenarioConfig(**{field: value})


def test_config_rejects_bad_balise_layouts():
    base = [BaliseSpec(id=1, loc=-100.0, kind="fixed"),
            BaliseSpec(id=2, loc=-64.0, kind="fixed"),
            BaliseSpec(id=3, loc=0.0, kind="controlled")]
    with pytest.raises(ConfigError):  # out of order
        ScenarioConfig(balises=[base[1], base[0], base[2]])
    with pytest.raises(ConfigError):  # duplicate location
        ScenarioConfig(balises=[base[0],
                                BaliseSpec(id=2, loc=-100.0, kind="fixed"),
                                base[2]])
    with pytest.raises(ConfigError):  # no stop marker
        ScenarioConfig(balises=base[:2])
    with pytest.raises(ConfigError):  # marker away from the origin
        ScenarioConfig(balises=base[:2] + [
            BaliseSpec(id=3, loc=-1.0, kind="controlled")])
    with pytest.raises(ConfigError):  # duplicate id
        ScenarioConfig(balises=[base[0],
                                BaliseSpec(id=1, loc=-64.0, kind="fixed"),
                                base[2]])


def test_config_from_dict_round_trip():
    raw = {
        "balises": _balises(),
        "attacks": [{"type": "tamper", "balise": 1, "new_loc": -1.0}],
        "controller": "resilient",
        "auth_mode": "authenticated",
        "p_est0": -120.0,
        "delta0": 25.0,
        "seed": 3,
    }
    cfg = config_from_dict(raw)
    assert cfg.attacks == [Tamper(balise=1, new_loc=-1.0)]
    assert cfg.p_est0 == -120.0
    assert cfg.balises[2].kind == "controlled"


@pytest.mark.parametrize("attack", [
    {"type": "derail"},
    {"type": "tamper", "balise": 1},          # missing new_loc
    {"type": "clone", "src": 1},              # missing dst
    {"type": "tamper", "balise": "one", "new_loc": -1.0},
    {},
])
def test_config_from_dict_rejects_bad_attacks(attack):
    with pytest.raises(ConfigError):
        config_from_dict({"balises": _balises(), "attacks": [attack]})


def test_config_from_dict_rejects_bad_train_and_balise_keys():
    with pytest.raises(ConfigError):
        config_from_dict({"train": {"mass": 1.0}})
    with pytest.raises(ConfigError):
        config_from_dict({"balises": [{"id": 1, "loc": 0.0, "kind": "beacon"}]})


def test_load_config_rejects_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(str(path))
    path.write_text("[1, 2, 3]")
    with pytest.raises(ConfigError):
        load_config(str(path))


# ---------------------------------------------------------------------------
# Telegram files referenced from a config
# ---------------------------------------------------------------------------

def test_telegram_file_injection_matches_tamper_attack(tmp_path):
    # A pre-tampered telegram supplied as a file must reproduce the
    # equivalent in-config tamper attack bit for bit.
    user = pack_payload(1, "fixed", -1.0, LONG)
    forged = codec.encode_legacy(user, LEGACY_SB, LONG)
    tel_path = tmp_path / "b1_forged.json"
    save_telegram(str(tel_path), forged, LONG)

    balises = bundled("no_attack").balises
    raw = {
        "balises": [
            {"id": b.id, "loc": b.loc, "kind": b.kind,
             **({"telegram": "b1_forged.json"} if b.id == 1 else {})}
            for b in balises
        ],
        "controller": "hoa",
        "auth_mode": "legacy",
    }
    cfg_path = tmp_path / "scenario.json"
    cfg_path.write_text(json.dumps(raw))

    via_file = run_scenario(load_config(str(cfg_path)))
    via_attack = run_scenario(bundled("tamper_b1_legacy"))
    assert via_file.stop_error == via_attack.stop_error


def test_telegram_file_format_mismatch_rejected(tmp_path):
    user = pack_payload(1, "fixed", -100.0, SHORT)
    tel_path = tmp_path / "b1_short.json"
    save_telegram(str(tel_path), codec.encode_legacy(user, LEGACY_SB, SHORT),
                  SHORT)
    cfg = bundled("no_attack")
    cfg.telegram_files = {1: str(tel_path)}
    with pytest.raises(ConfigError):
        run_scenario(cfg)


# ---------------------------------------------------------------------------
# Output files
# ---------------------------------------------------------------------------

def test_trajectory_csv_layout(tmp_path):
    result = run_scenario(bundled("no_attack"))
    path = tmp_path / "traj.csv"
    write_trajectory_csv(result, str(path))
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == CSV_HEADER
    assert len(rows) == len(result.trajectory) + 1
    assert float(rows[1][0]) == 0.0
    assert float(rows[-1][2]) == 0.0  # final speed
    assert rows[-1][5] == "max_brake"


def test_summary_dict_contents():
    result = run_scenario(bundled("no_attack"))
    summary = summary_dict(result)
    assert set(summary) == {"stop_error_m", "stop_time_s", "mode_switches",
                            "auth_failures"}
    assert summary["stop_error_m"] == result.stop_error
    assert summary["auth_failures"] == 0

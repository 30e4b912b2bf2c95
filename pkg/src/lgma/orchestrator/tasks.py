"""Task specs: seeded scenario samplers plus success predicates over event logs."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from lgma import config
from lgma.config import named_rng
from lgma.orchestrator.resources import Resources
from lgma.orchestrator.session import Session
from lgma.world import inverse_kinematics
from lgma.world.scenario import parse_scenario

TASK_NAMES = ["fetch_big", "pain_reflex", "urgent_stop", "imagery_reach",
              "describe_action", "lesion_broca"]


@dataclass
class TaskSpec:
    name: str
    scenario_text: str
    seed: int
    max_ticks: int
    imagery: bool = False
    inject: dict[int, str] = field(default_factory=dict)
    success: Callable[[list[str]], tuple[bool, dict]] | None = None


# ---------------------------------------------------------------------------
# event-log parsing helpers
# ---------------------------------------------------------------------------

def parse_log(lines: list[str]):
    out = []
    for line in lines:
        tick, module, event, payload = line.split("|", 3)
        out.append((int(tick), module, event, payload))
    return out


def state_series(events) -> dict[int, dict[str, float]]:
    series = {}
    for tick, module, event, payload in events:
        if module == "world" and event == "state":
            fields = dict(kv.split("=") for kv in payload.split())
            series[tick] = {k: float(v) for k, v in fields.items()}
    return series


def object_series(events) -> dict[int, list[dict]]:
    series: dict[int, list[dict]] = {}
    for tick, module, event, payload in events:
        if module == "world" and event == "objects":
            objs = []
            if payload:
                for chunk in payload.split(";"):
                    oid, color, size, x, y, held = chunk.split(",")
                    objs.append({"id": oid, "color": color, "size": size,
                                 "x": float(x), "y": float(y), "held": int(held)})
            series[tick] = objs
    return series


def command_events(events):
    return [(tick, payload.split()[0]) for tick, module, event, payload in events
            if module == "sma" and event == "command"]


# ---------------------------------------------------------------------------
# scenario samplers
# ---------------------------------------------------------------------------

def _random_arm_line(rng: np.random.Generator, radius=(0.7, 1.6)) -> str:
    r = rng.uniform(*radius)
    a = rng.uniform(-np.pi, np.pi)
    t0, t1 = inverse_kinematics((r * np.cos(a), r * np.sin(a)),
                                1 if rng.random() < 0.5 else -1)
    return f"arm {t0:.6f} {t1:.6f}"


def _square_line(rng: np.random.Generator, color: str, size: str,
                 radius=(0.7, 1.55), avoid=None, min_sep: float = 0.6) -> tuple[str, np.ndarray]:
    for _ in range(100):
        r = rng.uniform(*radius)
        a = rng.uniform(-np.pi, np.pi)
        c = np.array([r * np.cos(a), r * np.sin(a)])
        if avoid is None or all(np.linalg.norm(c - p) >= min_sep for p in avoid):
            return f"object {color} {size} {c[0]:.6f} {c[1]:.6f}", c
    raise RuntimeError("could not place object")


def make_fetch_big(seed: int) -> TaskSpec:
    rng = named_rng("task/fetch_big", seed)
    color = str(rng.choice([c for c in config.COLORS if c != "red"]))
    line1, c1 = _square_line(rng, color, "big")
    dcolor = str(rng.choice([c for c in config.COLORS if c != "red"]))
    line2, _ = _square_line(rng, dcolor, "small", avoid=[c1])
    text = "\n".join([_random_arm_line(rng), line1, line2, "say fetch big"])

    def success(lines):
        events = parse_log(lines)
        objs = object_series(events)
        if not objs:
            return False, {}
        final = objs[max(objs)]
        big = next((o for o in final if o["size"] == "big"), None)
        if big is None:
            return False, {}
        dist = float(np.hypot(big["x"], big["y"]))
        released = big["held"] == 0
        cmds = [c for _, c in command_events(events)]
        order_ok = cmds == ["reach", "hold", "pull", "release"]
        attend = any(m == "mt" and e == "attend" and p == "big"
                     for _, m, e, p in events)
        intend = any(m == "dlpfc" and e == "intend" and p == "fetch"
                     for _, m, e, p in events)
        ok = dist <= 0.3 and released and order_ok and attend and intend
        return ok, {"dist": dist, "order_ok": float(order_ok)}

    return TaskSpec("fetch_big", text, seed, max_ticks=26, success=success)


PAIN_RULE = "say if pain , then release pull"


def make_pain_reflex(seed: int) -> TaskSpec:
    rng = named_rng("task/pain_reflex", seed)
    line1, c1 = _square_line(rng, "red", "big", radius=(0.8, 1.4))
    # arm starts well away from the hot square
    for _ in range(100):
        arm_line = _random_arm_line(rng)
        t0, t1 = float(arm_line.split()[1]), float(arm_line.split()[2])
        from lgma.world import forward_kinematics
        if np.linalg.norm(forward_kinematics(t0, t1) - c1) > 0.6:
            break
    text = "\n".join([arm_line, line1, PAIN_RULE, "say reach red"])

    def success(lines):
        events = parse_log(lines)
        states = state_series(events)
        pain_ticks = [t for t, s in states.items() if s["pain"] > 0]
        if not pain_ticks:
            return False, {"contact": 0.0}
        t_p = min(pain_ticks)
        intents = [(t, p) for t, m, e, p in events
                   if m == "dlpfc" and e == "intend" and "release" in p]
        reacted = any(t_p <= t <= t_p + 2 for t, _ in intents)
        later = [t for t in states if t >= t_p + 8]
        broken = bool(later) and all(states[t]["pain"] == 0 for t in later)
        return reacted and broken, {"t_pain": float(t_p),
                                    "reacted": float(reacted),
                                    "broken": float(broken)}

    return TaskSpec("pain_reflex", text, seed, max_ticks=40, success=success)


def make_urgent_stop(seed: int) -> TaskSpec:
    base = make_fetch_big(seed)
    rng = named_rng("task/urgent_stop", seed)
    t_stop = int(rng.integers(5, 13))
    inject = {t_stop: "stop"}

    def success(lines):
        events = parse_log(lines)
        states = state_series(events)
        cmds = command_events(events)
        stop_cmds = [t for t, c in cmds if c == "stop"]
        if not stop_cmds:
            return False, {}
        t_cmd = stop_cmds[0]
        post = [c for t, c in cmds if t > t_cmd]
        speeds = {t: max(abs(s["w0"]), abs(s["w1"])) for t, s in states.items()}
        settle = [t for t in sorted(speeds) if t >= t_stop
                  and all(speeds[u] <= 0.01 for u in speeds if u >= t)]
        settled = bool(settle) and settle[0] <= t_stop + 8
        return settled and not post, {"t_stop": float(t_stop),
                                      "settled": float(settled),
                                      "post_cmds": float(len(post))}

    return TaskSpec("urgent_stop", base.scenario_text, seed, max_ticks=26,
                    inject=inject, success=success)


def make_imagery_reach(seed: int) -> TaskSpec:
    rng = named_rng("task/imagery_reach", seed)
    color = "red" if seed % 2 == 0 else "green"
    line1, c1 = _square_line(rng, color, "big", radius=(0.8, 1.4))
    arm_line = _random_arm_line(rng)
    text = "\n".join([arm_line, line1, f"say reach {color}"])

    def success(lines):
        events = parse_log(lines)
        states = state_series(events)
        pain_free = all(s["pain"] == 0 for s in states.values())
        retract = any(c == "retract" for _, c in command_events(events))
        hashes = [p for _, m, e, p in events if m == "imagery" and e == "world_hash"]
        isolated = bool(hashes) and all(
            h.split()[0].split("=")[1] == h.split()[1].split("=")[1] for h in hashes)
        flagged = any(m == "imagery" and e == "percepts" and
                      ("pain=1" in p or "disgust=1" in p)
                      for _, m, e, p in events)
        ok = pain_free and retract and isolated and flagged
        return ok, {"pain_free": float(pain_free), "retract": float(retract),
                    "isolated": float(isolated)}

    return TaskSpec("imagery_reach", text, seed, max_ticks=20, imagery=True,
                    success=success)


def make_describe_action(seed: int) -> TaskSpec:
    rng = named_rng("task/describe_action", seed)
    line1, _ = _square_line(rng, "yellow", "big", radius=(0.8, 1.3))
    arm_line = _random_arm_line(rng)
    text = "\n".join([arm_line, line1, "say reach yellow", "say hold", "say pull"])
    inject = {16: "you did?"}

    def success(lines):
        events = parse_log(lines)
        speeches = [p for _, m, e, p in events if m == "speech" and e == "say"]
        return bool(speeches) and speeches[-1] == "pull", {
            "answer": float(bool(speeches))}

    return TaskSpec("describe_action", text, seed, max_ticks=20, inject=inject,
                    success=success)


MAKERS = {
    "fetch_big": make_fetch_big,
    "pain_reflex": make_pain_reflex,
    "urgent_stop": make_urgent_stop,
    "imagery_reach": make_imagery_reach,
    "describe_action": make_describe_action,
}


def make_task(name: str, seed: int) -> TaskSpec:
    if name not in MAKERS:
        raise KeyError(f"unknown task {name!r} (choose from {sorted(MAKERS)})")
    return MAKERS[name](seed)


def run_task(spec: TaskSpec, res: Resources, save_log: bool = True) -> dict:
    """Run to max_ticks, then judge success from the event log alone."""
    scenario = parse_scenario(spec.scenario_text)
    session = Session(res, scenario, spec.seed, imagery=spec.imagery)
    for tick, utt in spec.inject.items():
        session.inject(tick, utt)
    for _ in range(spec.max_ticks):
        session.tick()
    ok, metrics = spec.success(session.log.lines) if spec.success else (True, {})
    report = {
        "task": spec.name,
        "seed": spec.seed,
        "success": bool(ok),
        "ticks": session.tick_count,
        "metrics": metrics,
    }
    if save_log:
        run_dir = res.cfg.path("run_dir")
        run_dir.mkdir(parents=True, exist_ok=True)
        log_path = run_dir / f"{spec.name}-{spec.seed}.log"
        log_path.write_text(session.log.text())
        report["log_path"] = str(log_path)
    return report

"""The per-tick streaming pipeline and its append-only event log.

Tick order: render/encode, hear one word, attention, soma window, MT, SPL,
BA14/40 answers, dlPFC, imagery/BG, preSMA plan maintenance, SMA actuation,
world step, log. Same scenario + seed + checkpoints => identical logs.
"""
from __future__ import annotations

import hashlib
import time
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from lgma import config
from lgma.codecs.lexicon import ACTION_WORDS, Utterance
from lgma.cortex.ba1440 import QUERY_TOKENS
from lgma.cortex.presma import AtomicCommand
from lgma.cortex.sma import NoAttendedObject
from lgma.executive.bg import RoutineTable, default_routine_table
from lgma.executive.dlpfc import Dlpfc
from lgma.executive.imagery import imagery_rollout
from lgma.executive.rules import UnparsableStatement
from lgma.orchestrator.datasets import stationary_window
from lgma.orchestrator.resources import Resources
from lgma.world import forward_kinematics, render_scene, step_world, world_hash
from lgma.world.scenario import Scenario, build_world
from lgma.world.state import ArmState, Trajectory


class NonFiniteState(RuntimeError):
    """World state went non-finite; diagnostic dump attached."""


class NoActivePlan(ValueError):
    """Stop interrupt requested with nothing executing."""


OBJECT_RELATIVE = {"reach", "hold", "pull"}
STOP_OMEGA_TOL = 0.01


def fmt(x: float) -> str:
    return f"{float(x):.6f}"


class EventLog:
    def __init__(self):
        self.lines: list[str] = []

    def log(self, tick: int, module: str, event: str, payload: str = "") -> None:
        self.lines.append(f"{tick}|{module}|{event}|{payload}")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.text().encode()).hexdigest()


@dataclass
class FrameData:
    """Everything the bridge service puts on the wire for one tick."""
    tick: int
    theta0: float
    theta1: float
    hand: tuple[float, float]
    hold: int
    pain: float
    omega: tuple[float, float]
    objects: list[dict]
    command: str | None
    intention: str | None
    plan: list[str]
    attention: str | None
    reports: list[str]
    imagined: np.ndarray | None = None
    broca_text: str | None = None


class Session:
    """Single-writer world + module states + plan + event log."""

    def __init__(self, res: Resources, scenario: Scenario, seed: int,
                 imagery: bool = False,
                 routine_table: RoutineTable | None = None,
                 tick_budget_ms: float | None = None):
        self.res = res
        self.seed = seed
        self.world = build_world(scenario)
        self.imagery_armed = imagery
        self.bg = routine_table or default_routine_table()
        self.log = EventLog()
        self.tick_count = 0
        self.tick_budget_ms = tick_budget_ms or float(res.cfg["tick_budget_ms"])

        # language input stream: one word per tick
        self.say_queue: deque[list[str]] = deque(
            [utt.split() for utt in scenario.says])
        self.current_words: list[str] = []
        self.heard: list[str] = []
        self.injections: dict[int, list[str]] = {}

        # module session state
        self.mt_session = res.mt.session()
        self.dlpfc = Dlpfc(res.broca, res.codebook)
        self.attention_word: str | None = None
        self.attention_lv = res.language.encode_word("none")
        self.attended_id: str | None = None

        # motor state
        self.window: deque[ArmState] = deque(
            [self.world.arm] * config.BLOCK_T, maxlen=config.BLOCK_T)
        self.start_arm = self.world.arm
        self.start_sv = res.soma.encode(stationary_window(self.world.arm))
        self.dlpfc.memory.put("episode_start_sv", self.start_sv)
        self.plan: list[AtomicCommand] = []
        self.plan_index = 0
        self.pending_triples: deque[tuple[float, float, int]] = deque()
        self.current_command: AtomicCommand | None = None
        self.current_block_rows: list[ArmState] = []
        self.stop_blocks_used = 0
        self.block_svs: list[np.ndarray] = []
        self.pending_intents: deque[tuple[tuple[str, ...], np.ndarray]] = deque()
        self.pending_answer: tuple[str, ...] | None = None
        self.operator_query: tuple[str, ...] | None = None
        self.external_answers: deque[str] = deque()
        self.lesion_mask = None
        self.last_frame: FrameData | None = None
        self.last_imagined: np.ndarray | None = None
        self.last_intention: str | None = None
        self._last_map: np.ndarray | None = None
        self.log.log(0, "session", "start", f"seed={seed} imagery={int(imagery)}")

    # ------------------------------------------------------------------
    def inject(self, tick: int, utterance: str) -> None:
        self.injections.setdefault(tick, []).append(utterance)

    def enqueue_utterance(self, utterance: str) -> None:
        words = utterance.split()
        if not all(w in self.res.lexicon for w in words):
            raise KeyError(f"utterance contains non-lexicon words: {utterance!r}")
        if words == ["stop"]:
            self.say_queue.appendleft(words)
        else:
            self.say_queue.append(words)

    # ------------------------------------------------------------------
    def _hand(self) -> np.ndarray:
        return forward_kinematics(self.world.arm.theta0, self.world.arm.theta1)

    def _window_matrix(self) -> np.ndarray:
        return Trajectory(tuple(self.window)).matrix()

    def _attended_object(self):
        if self.attended_id is None:
            return None
        return self.world.object_by_id(self.attended_id)

    def _resolve_attention(self) -> None:
        """Map the attention word onto a live object id (unique match wins)."""
        word = self.attention_word
        self.attended_id = None
        if word is None:
            return
        matches = [o for o in self.world.objects
                   if o.color == word or o.size == word]
        if word == "square":
            matches = list(self.world.objects)
        if word == "arm":
            matches = []
        if len(matches) == 1:
            self.attended_id = matches[0].id

    # ------------------------------------------------------------------
    def _hear(self, t: int) -> tuple[tuple[str, ...], list[np.ndarray]] | None:
        """Stream one word; returns (tokens, word lvs) when a sentence completes."""
        for utt in self.injections.pop(t, []):
            self.enqueue_utterance(utt)
        if not self.current_words and self.say_queue:
            self.current_words = list(self.say_queue.popleft())
            self.heard = []
        if not self.current_words:
            return None
        word = self.current_words.pop(0)
        self.heard.append(word)
        self.log.log(t, "ear", "word", word)
        if self.current_words:
            return None
        tokens = tuple(self.heard)
        self.heard = []
        self.log.log(t, "ear", "sentence", " ".join(tokens))
        sentence_lv = self.res.language.encode(Utterance(tokens))
        word_lvs, decoded = self.res.wernicke.decompose(sentence_lv)
        self.log.log(t, "wernicke", "decompose", " ".join(decoded))
        return tuple(decoded), word_lvs

    def _route_sentence(self, t: int, tokens: tuple[str, ...],
                        word_lvs: list[np.ndarray]) -> None:
        if tokens and tokens[0] == "if":
            try:
                rule = self.dlpfc.ingest(tokens, word_lvs)
                self.log.log(t, "dlpfc", "ingest",
                             f"cond={' '.join(rule.condition_tokens)}"
                             f" then={' '.join(rule.then_tokens)}"
                             f" else={' '.join(rule.else_tokens)}")
            except UnparsableStatement as exc:
                self.log.log(t, "dlpfc", "error", f"UnparsableStatement {exc}")
            return
        if tokens in (("T",), ("F",)):
            self.external_answers.append(tokens[0])
            return
        for canonical, qtoks in QUERY_TOKENS.items():
            if tokens == qtoks:
                self.operator_query = tokens
                return
        if tokens == ("stop",):
            self._interrupt(t)
            return
        result = self.dlpfc.intend(tokens, word_lvs, self.imagery_armed)
        if result is None:
            self.log.log(t, "dlpfc", "error", f"unroutable {' '.join(tokens)}")
            return
        intent_tokens, intention_lv, attention = result
        if attention is not None:
            self._set_attention(t, attention)
        self.log.log(t, "dlpfc", "intend", " ".join(intent_tokens))
        self._dispatch_intention(t, intent_tokens, intention_lv, reflex=False)

    def _set_attention(self, t: int, word: str) -> None:
        self.attention_word = word
        self.attention_lv = self.res.language.encode_word(word)
        self._resolve_attention()
        self.log.log(t, "mt", "attend", word)

    # ------------------------------------------------------------------
    def _interrupt(self, t: int) -> None:
        if self.current_command is None and not self.plan_remaining():
            self.log.log(t, "presma", "error", "NoActivePlan")
            return
        dropped = [c.token for c in self.plan[self.plan_index:]]
        self.plan = []
        self.plan_index = 0
        self.pending_triples.clear()
        self.current_command = None
        stop_lv = self.res.codebook.lv("stop").astype(np.float32)
        self.plan = [AtomicCommand(lv=stop_lv, token="stop", slot=0)]
        self.log.log(t, "presma", "interrupt", f"dropped={' '.join(dropped)}")

    def plan_remaining(self) -> bool:
        return self.plan_index < len(self.plan)

    def _dispatch_intention(self, t: int, tokens: tuple[str, ...],
                            intention_lv: np.ndarray, reflex: bool) -> None:
        self.last_intention = " ".join(tokens)
        if tokens and tokens[0] == "IMAGINE":
            self._imagine(t, tokens[1:], intention_lv)
            return
        if tokens == ("stop",):
            self._interrupt(t)
            return
        if reflex or (not self.plan_remaining() and self.current_command is None
                      and not self.pending_triples):
            if reflex:
                self.pending_triples.clear()
                self.current_command = None
            commands = self.res.presma.decompose(intention_lv)
            if not commands:
                self.log.log(t, "presma", "error",
                             f"UnknownIntention {' '.join(tokens)}")
                return
            self.plan = commands
            self.plan_index = 0
            self.log.log(t, "presma", "plan",
                         " ".join(c.token for c in commands))
        else:
            self.pending_intents.append((tokens, intention_lv))

    def _imagine(self, t: int, stripped: tuple[str, ...], _lv: np.ndarray) -> None:
        pre = world_hash(self.world)
        result = imagery_rollout(self.res, self.world, stripped,
                                 self.attention_word, self.attended_id,
                                 self.start_sv, pre)
        self.log.log(t, "imagery", "percepts",
                     f"pain={int(result.percepts['imagined_pain'])}"
                     f" disgust={int(result.percepts['imagined_disgust'])}")
        self.log.log(t, "imagery", "world_hash",
                     f"pre={result.pre_hash[:16]} post={result.post_hash[:16]}")
        self.last_imagined = result.images[-1] if result.images else None
        routine = self.bg.lookup(result.percepts)
        if routine is not None:
            self.log.log(t, "bg", "intend", " ".join(routine))
            lv = self.res.broca.compose_tokens(list(routine))
            self._dispatch_intention(t, routine, lv, reflex=True)
        else:
            # benign imagination: the real intention proceeds
            lv = self.res.broca.compose_tokens(list(stripped))
            self.log.log(t, "dlpfc", "proceed", " ".join(stripped))
            self._dispatch_intention(t, stripped, lv, reflex=False)

    # ------------------------------------------------------------------
    def _start_command(self, t: int, command: AtomicCommand,
                       map_vv: np.ndarray, cur_sv: np.ndarray) -> None:
        if command.token in OBJECT_RELATIVE and self.attended_id is None \
                and self.world.held is None:
            raise NoAttendedObject(command.token)
        action_sv = self.res.sma.act(command.lv, map_vv, cur_sv, self.start_sv)
        triples = self.res.soma.decode(action_sv)
        self.pending_triples = deque(triples[1:])
        self.current_command = command
        self.current_block_rows = [self.world.arm]
        self.stop_blocks_used = 1 if command.token == "stop" else 0
        self.log.log(t, "sma", "command", f"{command.token} slot={command.slot}")

    def _finish_block(self, t: int) -> None:
        if self.current_command is None:
            return
        rows = self.current_block_rows[-config.BLOCK_T:]
        while len(rows) < config.BLOCK_T:
            rows = [rows[0]] + rows
        block_sv = self.res.soma.encode(Trajectory(tuple(rows)))
        self.block_svs.append(block_sv)
        self.log.log(t, "sma", "block_done", self.current_command.token)
        command = self.current_command
        self.current_command = None
        self.current_block_rows = []
        if command.token == "stop":
            speed = max(abs(self.world.arm.omega0), abs(self.world.arm.omega1))
            if speed > STOP_OMEGA_TOL and self.stop_blocks_used < 2:
                # same command, second deceleration block
                cur_sv = self.res.soma.encode(self._window_matrix_traj())
                map_vv = self._last_map if self._last_map is not None else \
                    np.zeros(config.MODAL_DIM, dtype=np.float32)
                action_sv = self.res.sma.act(command.lv, map_vv, cur_sv, self.start_sv)
                self.pending_triples = deque(self.res.soma.decode(action_sv)[1:])
                self.current_command = command
                self.current_block_rows = [self.world.arm]
                self.stop_blocks_used += 1
                self.log.log(t, "sma", "stop_continue", "")
            else:
                self.plan = []
                self.plan_index = 0

    def _window_matrix_traj(self) -> Trajectory:
        return Trajectory(tuple(self.window))

    # ------------------------------------------------------------------
    def tick(self) -> FrameData:
        t = self.tick_count + 1
        started = time.monotonic()
        res = self.res
        reports: list[str] = []

        # 1. vision
        scene_vv = res.vision.encode(render_scene(self.world, "all"))

        # 2. hear one word / comprehend completed sentence
        sentence = self._hear(t)
        if sentence is not None:
            self._route_sentence(t, *sentence)

        # 3-4. soma window + MT + SPL
        cur_sv = res.soma.encode_matrix(self._window_matrix())
        ovv, olv = self.mt_session.step(scene_vv, self.attention_lv)
        map_vv = res.spl.fuse(ovv, cur_sv)
        self._last_map = map_vv

        # 5. BA14/40 answers the outstanding dlPFC query
        answer_tokens: tuple[str, ...] | None = None
        if self.dlpfc.pending_query is not None:
            if self.external_answers:
                answer_tokens = (self.external_answers.popleft(),)
                self.log.log(t, "env", "answer", " ".join(answer_tokens))
            elif self.dlpfc.pending_query == ("pain?",):
                q_lv = res.language.encode(Utterance(self.dlpfc.pending_query))
                a_lv = res.ba1440.report([cur_sv], q_lv)
                answer_tokens = res.language.decode(a_lv).tokens
                self.log.log(t, "ba1440", "answer", " ".join(answer_tokens))

        # operator queries are answered and articulated
        if self.operator_query is not None:
            qtokens = self.operator_query
            self.operator_query = None
            q_lv = res.language.encode(Utterance(qtokens))
            if qtokens == ("sequence?",):
                svs = self.block_svs[-4:] or [cur_sv]
            elif qtokens in (("you", "did?"), ("what", "you", "did?")):
                svs = [self.block_svs[-1]] if self.block_svs else [cur_sv]
            else:
                svs = [cur_sv]
            a_lv = res.ba1440.report(svs, q_lv)
            spoken = res.language.decode(a_lv).tokens
            reports.append(" ".join(spoken))
            self.log.log(t, "speech", "say", " ".join(spoken))

        # 6. dlPFC reasoning step
        out = self.dlpfc.step(answer_tokens)
        if out is not None:
            if out[0] == "query":
                self.log.log(t, "dlpfc", "query", " ".join(out[1]))
            else:
                _, tokens, lv = out
                self.log.log(t, "dlpfc", "intend", " ".join(tokens))
                self._dispatch_intention(t, tokens, lv, reflex=True)

        # 7. plan maintenance: start next command when idle
        if not self.pending_triples and self.current_command is not None:
            self._finish_block(t)
        if not self.pending_triples and self.current_command is None:
            if not self.plan_remaining() and self.pending_intents:
                tokens, lv = self.pending_intents.popleft()
                self._dispatch_intention(t, tokens, lv, reflex=False)
            if self.plan_remaining():
                command = self.plan[self.plan_index]
                self.plan_index += 1
                try:
                    self._start_command(t, command, map_vv, cur_sv)
                except NoAttendedObject as exc:
                    self.log.log(t, "sma", "error", f"NoAttendedObject {exc}")
                    self.plan = []
                    self.plan_index = 0

        # 8. actuate one step
        if self.pending_triples:
            a0, a1, hold = self.pending_triples.popleft()
            if self.current_command is not None and self.current_command.token == "stop":
                # proportional deceleration: exact, self-correcting braking
                a0 = float(np.clip(-0.75 * self.world.arm.omega0,
                                   -config.ALPHA_MAX, config.ALPHA_MAX))
                a1 = float(np.clip(-0.75 * self.world.arm.omega1,
                                   -config.ALPHA_MAX, config.ALPHA_MAX))
        else:
            a0, a1, hold = 0.0, 0.0, self.world.arm.hold
        prev_pain = self.world.arm.pain
        self.world = step_world(self.world, a0, a1, hold)
        if self.current_command is not None:
            self.current_block_rows.append(self.world.arm)
        arm = self.world.arm
        if not all(np.isfinite(v) for v in
                   (arm.theta0, arm.theta1, arm.omega0, arm.omega1)):
            dump = self.log.text()[-2000:]
            raise NonFiniteState(f"non-finite arm state at tick {t}\n{dump}")
        self.window.append(arm)
        if arm.pain > 0 and prev_pain == 0:
            self.log.log(t, "world", "pain", "1")
        hand = self._hand()
        self.log.log(
            t, "world", "state",
            f"t0={fmt(arm.theta0)} t1={fmt(arm.theta1)} w0={fmt(arm.omega0)}"
            f" w1={fmt(arm.omega1)} hold={arm.hold} pain={fmt(arm.pain)}"
            f" x={fmt(hand[0])} y={fmt(hand[1])}")
        objs = ";".join(
            f"{o.id},{o.color},{o.size},{fmt(o.center[0])},{fmt(o.center[1])},"
            f"{int(self.world.held == o.id)}"
            for o in self.world.objects)
        self.log.log(t, "world", "objects", objs)

        elapsed_ms = (time.monotonic() - started) * 1000.0
        if elapsed_ms > self.tick_budget_ms:
            raise RuntimeError(
                f"tick {t} exceeded budget: {elapsed_ms:.0f}ms > {self.tick_budget_ms}ms")

        self.tick_count = t
        frame = FrameData(
            tick=t,
            theta0=arm.theta0, theta1=arm.theta1,
            hand=(float(hand[0]), float(hand[1])),
            hold=arm.hold, pain=arm.pain,
            omega=(arm.omega0, arm.omega1),
            objects=[{
                "id": o.id, "color": o.color, "size": o.size,
                "x": float(o.center[0]), "y": float(o.center[1]),
                "held": self.world.held == o.id,
            } for o in self.world.objects],
            command=self.current_command.token if self.current_command else None,
            intention=self.last_intention,
            plan=[c.token for c in self.plan[self.plan_index:]],
            attention=self.attention_word,
            reports=reports,
            imagined=self.last_imagined,
        )
        self.last_imagined = None
        self.last_frame = frame
        return frame

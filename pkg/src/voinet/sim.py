"""Deterministic slotted dissemination simulator.

Periodic generators emit messages whose base value is the assessed score
of their source kind; each slot the queue is re-scored with time/space/
quality decay, sorted, and transmitted greedily into a per-slot bit
budget (a message either fits entirely in the remaining budget or stays
queued; no fragmentation).  Messages whose effective value has decayed
to zero are dropped.  Two orderings are available: value-descending
("voi", the scheduler under study) and generation-order ("fifo", the
comparison baseline).

Runs are single-threaded and fully deterministic: identical configs
produce bit-identical metrics and transmission logs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

from .errors import ConfigError, DomainError
from .model import (
    Metadata,
    SourceKind,
    VoiConfig,
    effective_voi,
    source_scores,
    validate_config,
)

POLICIES = ("voi", "fifo")


@dataclass(frozen=True)
class GeneratorSpec:
    """Periodic message source: one message every ``period_slots`` slots."""

    source: SourceKind
    period_slots: int
    size_bits: int
    quality: float
    position: tuple[float, float]


@dataclass
class ScenarioConfig:
    duration_slots: int
    slot_ms: float
    channel_bits_per_slot: int
    generators: list[GeneratorSpec]
    receiver_position: tuple[float, float]
    voi_config: VoiConfig
    gamma: float
    rng_seed: int = 0  # reserved for stochastic generator extensions


@dataclass(frozen=True)
class Message:
    id: int
    meta: Metadata
    base_voi: float


@dataclass(frozen=True)
class TransmissionRecord:
    """One transmitted message: the per-slot log row."""

    slot: int
    message_id: int
    source: SourceKind
    effective_voi: float
    size_bits: int


@dataclass
class SimMetrics:
    generated_count: int
    delivered_count: dict[SourceKind, int]
    dropped_count: int
    residual_count: int
    delivered_value: float
    mean_age_at_delivery_ms: float
    max_age_at_delivery_ms: float
    channel_utilization: float

    @property
    def delivered_total(self) -> int:
        return sum(self.delivered_count.values())


@dataclass
class SimState:
    """Mutable per-run state; advance it with ``step``."""

    config: ScenarioConfig
    base_scores: dict[SourceKind, float]
    slot: int = 0
    queue: list[Message] = field(default_factory=list)
    generated: int = 0
    dropped: int = 0
    delivered: dict[SourceKind, int] = field(default_factory=dict)
    delivered_value: float = 0.0
    ages_sum_ms: float = 0.0
    age_max_ms: float = 0.0
    delivered_n: int = 0
    transmitted_bits: int = 0
    log: list[TransmissionRecord] = field(default_factory=list)


def validate_scenario(config: ScenarioConfig) -> None:
    """Raise ``ConfigError`` naming the offending field for invalid scenarios."""
    validate_config(config.voi_config)
    if config.duration_slots < 0:
        raise ConfigError("duration_slots", f"must be >= 0, got {config.duration_slots}")
    if config.slot_ms <= 0:
        raise ConfigError("slot_ms", f"must be positive, got {config.slot_ms}")
    if config.channel_bits_per_slot <= 0:
        raise ConfigError(
            "channel_bits_per_slot", f"must be positive, got {config.channel_bits_per_slot}"
        )
    for k, gen in enumerate(config.generators):
        where = f"generators[{k}]"
        if gen.period_slots < 1:
            raise ConfigError(f"{where}.period_slots", f"must be >= 1, got {gen.period_slots}")
        if gen.size_bits <= 0:
            raise ConfigError(f"{where}.size_bits", f"must be positive, got {gen.size_bits}")
        if not (0.0 <= gen.quality <= 1.0):
            raise ConfigError(f"{where}.quality", f"must be in [0, 1], got {gen.quality}")
        if gen.source not in config.voi_config.sources:
            raise ConfigError(
                f"{where}.source",
                f"{gen.source.value!r} is not among the assessed sources",
            )


def generate(
    config: ScenarioConfig, slot: int, base_scores: dict[SourceKind, float] | None = None
) -> list[Message]:
    """Messages emitted at ``slot``: every generator whose period divides it.

    Ids are derived from (slot, generator index), so generation is a pure
    function of the config.  ``base_scores`` may carry precomputed per-source
    scores; otherwise they are assessed on the fly.
    """
    if slot >= config.duration_slots:
        raise DomainError(f"slot {slot} >= duration {config.duration_slots}")
    if base_scores is None:
        base_scores = source_scores(config.voi_config, config.gamma)
    now_ms = slot * config.slot_ms
    messages = []
    for index, gen in enumerate(config.generators):
        if slot % gen.period_slots != 0:
            continue
        meta = Metadata(
            source=gen.source,
            generated_at_ms=now_ms,
            origin_position=gen.position,
            size_bits=gen.size_bits,
            quality=gen.quality,
        )
        messages.append(
            Message(
                id=slot * len(config.generators) + index,
                meta=meta,
                base_voi=base_scores[gen.source],
            )
        )
    return messages


def _score(message: Message, now_ms: float, config: ScenarioConfig) -> float:
    return effective_voi(
        message.base_voi,
        message.meta,
        now_ms,
        config.receiver_position,
        config.voi_config.decay,
    )


def _ordering_key(policy: str):
    if policy == "voi":
        return lambda pair: (-pair[0], pair[1].meta.generated_at_ms, pair[1].id)
    if policy == "fifo":
        return lambda pair: (pair[1].meta.generated_at_ms, pair[1].id)
    raise DomainError(f"unknown policy {policy!r}; expected one of {POLICIES}")


def schedule(queue: list[Message], now_ms: float, config: ScenarioConfig) -> list[Message]:
    """Queue ordered by effective value, descending.

    Ties break on earlier generation time, then smaller id, giving a total
    deterministic order.
    """
    scored = [(_score(m, now_ms, config), m) for m in queue]
    scored.sort(key=_ordering_key("voi"))
    return [m for _, m in scored]


def step(state: SimState, policy: str = "voi") -> SimState:
    """Advance one slot: generate, re-score, drop dead, transmit, account.

    Transmission walks the ordered queue and sends every message that fits
    in the remaining bit budget (prefix with skip, so one oversized message
    cannot block smaller ones behind it).  Mutates and returns ``state``.
    """
    config = state.config
    key = _ordering_key(policy)
    now_ms = state.slot * config.slot_ms
    fresh = generate(config, state.slot, state.base_scores)
    state.generated += len(fresh)
    state.queue.extend(fresh)

    scored = [(_score(m, now_ms, config), m) for m in state.queue]
    alive = [pair for pair in scored if pair[0] > 0.0]
    state.dropped += len(scored) - len(alive)
    alive.sort(key=key)

    remaining = config.channel_bits_per_slot
    kept = []
    for value, message in alive:
        if message.meta.size_bits <= remaining:
            remaining -= message.meta.size_bits
            age_ms = now_ms - message.meta.generated_at_ms
            source = message.meta.source
            state.delivered[source] = state.delivered.get(source, 0) + 1
            state.delivered_n += 1
            state.delivered_value += value
            state.ages_sum_ms += age_ms
            state.age_max_ms = max(state.age_max_ms, age_ms)
            state.log.append(
                TransmissionRecord(
                    slot=state.slot,
                    message_id=message.id,
                    source=source,
                    effective_voi=value,
                    size_bits=message.meta.size_bits,
                )
            )
        else:
            kept.append(message)
    state.transmitted_bits += config.channel_bits_per_slot - remaining
    state.queue = kept
    state.slot += 1
    return state


def initial_state(config: ScenarioConfig) -> SimState:
    validate_scenario(config)
    if not (0 <= config.rng_seed):
        raise ConfigError("rng_seed", f"must be >= 0, got {config.rng_seed}")
    return SimState(
        config=config,
        base_scores=source_scores(config.voi_config, config.gamma),
        delivered={source: 0 for source in config.voi_config.sources},
    )


def _finalize(state: SimState) -> SimMetrics:
    config = state.config
    capacity = config.duration_slots * config.channel_bits_per_slot
    return SimMetrics(
        generated_count=state.generated,
        delivered_count=dict(state.delivered),
        dropped_count=state.dropped,
        residual_count=len(state.queue),
        delivered_value=state.delivered_value,
        mean_age_at_delivery_ms=state.ages_sum_ms / state.delivered_n if state.delivered_n else 0.0,
        max_age_at_delivery_ms=state.age_max_ms,
        channel_utilization=state.transmitted_bits / capacity if capacity else 0.0,
    )


def run_logged(
    config: ScenarioConfig, policy: str = "voi"
) -> tuple[SimMetrics, list[TransmissionRecord]]:
    """Run the scenario end to end, returning metrics and the transmission log."""
    _ordering_key(policy)  # reject unknown policies before running
    state = initial_state(config)
    for _ in range(config.duration_slots):
        step(state, policy)
    return _finalize(state), state.log


def run(config: ScenarioConfig, policy: str = "voi") -> SimMetrics:
    """Run the scenario end to end; deterministic given the config."""
    metrics, _ = run_logged(config, policy)
    return metrics


def write_transmission_log(records: list[TransmissionRecord], fh) -> None:
    """CSV log: slot, message id, source kind, effective value, size."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["slot", "message_id", "source", "effective_voi", "size_bits"])
    for r in records:
        writer.writerow([r.slot, r.message_id, r.source.value, f"{r.effective_voi:.6f}", r.size_bits])


# --- scenario files ------------------------------------------------------


def scenario_from_dict(doc: dict) -> ScenarioConfig:
    """Build a ``ScenarioConfig`` from a parsed JSON document."""
    from .model import _parse_enum, _parse_position, _require, voi_config_from_dict

    if not isinstance(doc, dict):
        raise ConfigError("document", f"expected an object, got {type(doc).__name__}")
    generators = []
    raw_generators = _require(doc, "generators")
    if not isinstance(raw_generators, list):
        raise ConfigError("generators", "expected a list")
    for k, raw in enumerate(raw_generators):
        where = f"generators[{k}]"
        if not isinstance(raw, dict):
            raise ConfigError(where, f"expected an object, got {raw!r}")
        generators.append(
            GeneratorSpec(
                source=_parse_enum(SourceKind, _require(raw, "source", where + "."), where + ".source"),
                period_slots=int(_require(raw, "period_slots", where + ".")),
                size_bits=int(_require(raw, "size_bits", where + ".")),
                quality=float(_require(raw, "quality", where + ".")),
                position=_parse_position(_require(raw, "position", where + "."), where + ".position"),
            )
        )
    try:
        config = ScenarioConfig(
            duration_slots=int(_require(doc, "duration_slots")),
            slot_ms=float(_require(doc, "slot_ms")),
            channel_bits_per_slot=int(_require(doc, "channel_bits_per_slot")),
            generators=generators,
            receiver_position=_parse_position(
                _require(doc, "receiver_position"), "receiver_position"
            ),
            voi_config=voi_config_from_dict(_require(doc, "voi_config"), "voi_config."),
            gamma=float(_require(doc, "gamma")),
            rng_seed=int(doc.get("rng_seed", 0)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError("scenario", f"ill-typed field: {exc}")
    validate_scenario(config)
    return config


def scenario_to_dict(config: ScenarioConfig) -> dict:
    from .model import voi_config_to_dict

    return {
        "duration_slots": config.duration_slots,
        "slot_ms": config.slot_ms,
        "channel_bits_per_slot": config.channel_bits_per_slot,
        "generators": [
            {
                "source": g.source.value,
                "period_slots": g.period_slots,
                "size_bits": g.size_bits,
                "quality": g.quality,
                "position": list(g.position),
            }
            for g in config.generators
        ],
        "receiver_position": list(config.receiver_position),
        "voi_config": voi_config_to_dict(config.voi_config),
        "gamma": config.gamma,
        "rng_seed": config.rng_seed,
    }


def load_scenario(path) -> ScenarioConfig:
    """Load a simulation scenario from a JSON file."""
    import json

    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(str(path), "scenario file not found")
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON: {exc}")
    return scenario_from_dict(doc)

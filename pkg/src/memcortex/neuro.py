"""Four-channel neuromodulator engine: DA, NE, 5HT, ACh.

Every channel sits on a tonic baseline b = 0.5. Events fire phasic bursts
that halve every 300 s; a slow tonic deviation (if one is ever set) relaxes
toward baseline by a factor of 0.95 per 60 s. Dopamine and serotonin oppose
each other: a burst on one applies -0.3x its magnitude to the other.

Readouts are the clamped channel levels, mapped one-to-one onto the four
modulation outputs consumed downstream: NE -> learning rate, DA ->
exploration bias, 5HT -> consolidation patience, ACh -> attention ratio.
"""

from __future__ import annotations

from dataclasses import dataclass, field

BASELINE = 0.5
TONIC_DECAY = 0.95          # per 60 s
TONIC_STEP_SECONDS = 60.0
PHASIC_HALF_LIFE_SECONDS = 300.0
OPPOSITION_COEFF = -0.3
_BURST_FLOOR = 1e-6

CHANNELS = ("da", "ne", "serotonin", "ach")

# Eight event kinds and the bursts they fire. Magnitudes are balanced so a
# uniform event mix keeps long-run channel means within a few percent of
# baseline (homeostasis), while the DA/5HT opposition keeps those two
# channels negatively correlated.
EVENT_TABLE: dict[str, dict[str, float]] = {
    "reward": {"da": 0.30, "ne": -0.25, "ach": -0.10},
    "punishment": {"da": -0.28, "ne": 0.15, "ach": -0.10},
    "novelty": {"ach": 0.25, "ne": 0.12},
    "threat": {"ne": 0.35, "serotonin": -0.15},
    "goal_progress": {"da": 0.15, "serotonin": 0.10, "ne": -0.32, "ach": -0.10},
    "contradiction": {"ne": 0.20, "ach": 0.15, "da": -0.12},
    "user_urgency": {"ne": 0.25, "ach": 0.20},
    "idle": {"serotonin": 0.10, "ne": -0.50, "ach": -0.30, "da": -0.05},
}


@dataclass
class Burst:
    channel: str
    magnitude: float


@dataclass
class ModulationOutputs:
    learning_rate: float
    exploration_bias: float
    consolidation_patience: float
    attention_ratio: float


@dataclass
class NeuroState:
    baseline: float = BASELINE
    tonic_dev: dict[str, float] = field(default_factory=lambda: {c: 0.0 for c in CHANNELS})
    bursts: list[Burst] = field(default_factory=list)

    def level(self, channel: str) -> float:
        raw = self.baseline + self.tonic_dev[channel]
        for burst in self.bursts:
            if burst.channel == channel:
                raw += burst.magnitude
        return min(1.0, max(0.0, raw))

    def levels(self) -> dict[str, float]:
        return {c: self.level(c) for c in CHANNELS}

    def snapshot(self) -> "NeuroState":
        return NeuroState(
            baseline=self.baseline,
            tonic_dev=dict(self.tonic_dev),
            bursts=[Burst(b.channel, b.magnitude) for b in self.bursts],
        )


def tick(state: NeuroState, dt_seconds: float) -> NeuroState:
    """Advance the dynamics: tonic relaxation plus phasic half-life decay."""
    if dt_seconds <= 0:
        raise ValueError("dt must be positive")
    tonic_factor = TONIC_DECAY ** (dt_seconds / TONIC_STEP_SECONDS)
    for channel in CHANNELS:
        state.tonic_dev[channel] *= tonic_factor
    phasic_factor = 0.5 ** (dt_seconds / PHASIC_HALF_LIFE_SECONDS)
    survivors = []
    for burst in state.bursts:
        burst.magnitude *= phasic_factor
        if abs(burst.magnitude) >= _BURST_FLOOR:
            survivors.append(burst)
    state.bursts = survivors
    return state


def fire_event(state: NeuroState, event_kind: str) -> NeuroState:
    """Apply one registered event's bursts, with DA/5HT opposition coupling."""
    table = EVENT_TABLE.get(event_kind)
    if table is None:
        raise KeyError(f"unknown event kind {event_kind!r}")
    for channel in CHANNELS:
        magnitude = table.get(channel, 0.0)
        if magnitude == 0.0:
            continue
        state.bursts.append(Burst(channel, magnitude))
        if channel == "da":
            state.bursts.append(Burst("serotonin", OPPOSITION_COEFF * magnitude))
        elif channel == "serotonin":
            state.bursts.append(Burst("da", OPPOSITION_COEFF * magnitude))
    return state


def outputs(state: NeuroState) -> ModulationOutputs:
    """Identity mapping from channel levels to modulation parameters."""
    levels = state.levels()
    return ModulationOutputs(
        learning_rate=levels["ne"],
        exploration_bias=levels["da"],
        consolidation_patience=levels["serotonin"],
        attention_ratio=levels["ach"],
    )


NEUTRAL_OUTPUTS = ModulationOutputs(
    learning_rate=BASELINE,
    exploration_bias=BASELINE,
    consolidation_patience=BASELINE,
    attention_ratio=BASELINE,
)

# A disabled engine contributes no modulation at all: downstream couplings
# that multiply by 2*output collapse to zero gain.
SILENT_OUTPUTS = ModulationOutputs(
    learning_rate=0.0,
    exploration_bias=0.0,
    consolidation_patience=0.0,
    attention_ratio=0.0,
)

#!/usr/bin/env python3
"""
Random Model Generator for the properization toolkit
Generates reproducible relational structures for corpora and acceptance suites
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from errors import ModelInputError
from frame_properties import FrameProperty, close_under
from kripke_model import RelationalStructure
from logging_config import get_logger

logger = get_logger(__name__)

PROPOSITION_NAMES = ["p", "q", "r", "s", "t", "u"]

DEFAULT_SIZES = tuple(range(1, 9))
DEFAULT_AGENT_COUNTS = (2, 3, 4)
DEFAULT_DENSITIES = (0.0, 0.3, 0.7, 1.0)
DEFAULT_CLOSURES: Tuple[Tuple[FrameProperty, ...], ...] = (
    (),
    (FrameProperty.REFLEXIVE,),
    (FrameProperty.SYMMETRIC,),
    (FrameProperty.TRANSITIVE,),
    (FrameProperty.SERIAL,),
    (FrameProperty.EUCLIDEAN,),
    (FrameProperty.REFLEXIVE, FrameProperty.SYMMETRIC, FrameProperty.TRANSITIVE),
)


def proposition_names(count: int) -> List[str]:
    if count <= len(PROPOSITION_NAMES):
        return PROPOSITION_NAMES[:count]
    return PROPOSITION_NAMES + [f"p{k}" for k in range(len(PROPOSITION_NAMES), count)]


@dataclass(frozen=True)
class CorpusEntry:
    model: RelationalStructure
    density: float
    closure: Tuple[FrameProperty, ...]

    __hash__ = None


class RandomModelGenerator:
    """Generate seeded random relational structures"""

    def __init__(self, seed: int):
        self.seed = seed
        self.rng = np.random.default_rng(seed)

    def model(
        self,
        n_states: int,
        n_agents: int,
        density: float,
        prop_count: int,
        close: Iterable[FrameProperty] = (),
    ) -> RelationalStructure:
        """One model: each directed edge with probability ``density``, each atom with probability 1/2"""
        if n_states < 1:
            raise ModelInputError(f"need at least one state, got {n_states}")
        if n_agents < 1:
            raise ModelInputError(f"need at least one agent, got {n_agents}")
        if not 0.0 <= density <= 1.0:
            raise ModelInputError(f"density must lie in [0, 1], got {density}")
        if prop_count < 0:
            raise ModelInputError(f"proposition count must be >= 0, got {prop_count}")

        states = [f"x{j}" for j in range(1, n_states + 1)]
        relations = {}
        for agent in range(1, n_agents + 1):
            mask = self.rng.random((n_states, n_states)) < density
            relations[agent] = [(states[a], states[b]) for a, b in np.argwhere(mask)]

        valuation = {}
        for name in proposition_names(prop_count):
            truth = self.rng.random(n_states) < 0.5
            valuation[name] = [states[j] for j in np.flatnonzero(truth)]

        model = RelationalStructure.build(states, n_agents, relations, valuation)
        close = tuple(close)
        if close:
            for agent in model.agents:
                model = close_under(model, agent, close)
        return model

    def corpus(
        self,
        count: int,
        sizes: Sequence[int] = DEFAULT_SIZES,
        agent_counts: Sequence[int] = DEFAULT_AGENT_COUNTS,
        densities: Sequence[float] = DEFAULT_DENSITIES,
        closures: Sequence[Tuple[FrameProperty, ...]] = DEFAULT_CLOSURES,
        prop_count: int = 2,
    ) -> List[CorpusEntry]:
        """``count`` models with parameters drawn uniformly from the given grids"""
        logger.info("generating_corpus", count=count, seed=self.seed)
        entries = []
        for _ in range(count):
            n_states = int(self.rng.choice(sizes))
            n_agents = int(self.rng.choice(agent_counts))
            density = float(densities[int(self.rng.integers(len(densities)))])
            closure = tuple(closures[int(self.rng.integers(len(closures)))])
            model = self.model(n_states, n_agents, density, prop_count, closure)
            entries.append(CorpusEntry(model, density, closure))
        return entries


def gen_random(
    n_states: int,
    n_agents: int,
    density: float,
    prop_count: int,
    close: Iterable[FrameProperty] = (),
    seed: int = 0,
) -> RelationalStructure:
    """One-shot form of ``RandomModelGenerator(seed).model(...)``"""
    return RandomModelGenerator(seed).model(n_states, n_agents, density, prop_count, close)

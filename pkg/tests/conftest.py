"""
Shared fixtures for the properization toolkit tests
"""

import os
import sys

import pytest
from hypothesis import HealthCheck, settings

# Add code directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "../code"))
sys.path.insert(0, os.path.dirname(__file__))

from kripke_model import RelationalStructure

settings.register_profile(
    "toolkit",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "toolkit"))


UNIVERSAL_2 = [("x1", "x1"), ("x1", "x2"), ("x2", "x1"), ("x2", "x2")]


@pytest.fixture
def universal_model():
    """M_u: two states, both relations universal, p true at x1"""
    return RelationalStructure.build(
        ["x1", "x2"], 2, {1: UNIVERSAL_2, 2: UNIVERSAL_2}, {"p": ["x1"]}
    )


@pytest.fixture
def chain_model():
    """x1 R1 x2, p at x2, agent 2 reflexive"""
    return RelationalStructure.build(
        ["x1", "x2"], 2, {1: [("x1", "x2")], 2: [("x1", "x1"), ("x2", "x2")]}, {"p": ["x2"]}
    )


@pytest.fixture
def loop_model():
    """One state with a loop for every agent"""
    return RelationalStructure.build(["x1"], 2, {1: [("x1", "x1")], 2: [("x1", "x1")]}, {"p": ["x1"]})


@pytest.fixture
def single_agent_model():
    return RelationalStructure.build(["x1", "x2"], 1, {1: [("x1", "x2")]}, {"p": ["x1"]})


@pytest.fixture
def three_state_model():
    return RelationalStructure.build(
        ["a", "b", "c"],
        3,
        {
            1: [("a", "b"), ("b", "c"), ("c", "c")],
            2: [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b"), ("c", "c")],
            3: [("a", "c"), ("c", "a")],
        },
        {"p": ["a", "c"], "q": ["b"]},
    )

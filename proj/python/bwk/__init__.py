"""Simulation lab for bandits with knapsacks: planning oracles, emulated
mean-estimation backends, and the bandit algorithms built on them."""

try:
    from ._bwk import *  # noqa: F401,F403  (wheel layout: extension inside the package)
except ImportError:
    from _bwk import *  # noqa: F401,F403  (build-tree layout: extension on sys.path)

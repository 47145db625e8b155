"""Router modules dispatching kernel pairs and experiment names.

The experiment router lives in ``routers.experiment_router``; it depends on
the experiment services, which in turn compose kernels through this package.
"""

from .composition_router import CompositionRouter, CompositionResult, PairKey

__all__ = ["CompositionRouter", "CompositionResult", "PairKey"]

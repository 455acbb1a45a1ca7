"""Search and rent-or-buy algorithms guided by an untrusted forecast.

Three classic online problems, each solved by a policy that takes a
forecast it cannot verify: walking a line toward an unknown target,
selling at the best price in a stream, and deciding when to stop renting
skis.  Alongside the policies live their closed-form guarantees, exact
expectation evaluators, and the Monte-Carlo sweeps behind the figure
CSV files emitted by the command-line harness.
"""

from . import line_search, one_max, sampling, ski_rental

__version__ = "0.1.0"

__all__ = ["line_search", "one_max", "sampling", "ski_rental", "__version__"]

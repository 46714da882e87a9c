"""Exception types shared across the package."""


class NetProbeError(Exception):
    """Base class for all netprobe errors."""


class ParseError(NetProbeError):
    """A graph or observed-graph file is malformed."""


class EmptyGraphError(NetProbeError):
    """No usable edges remain after filtering."""


class UnknownNodeError(NetProbeError):
    """A node label is not present in the graph being queried."""


class NotCandidateError(NetProbeError):
    """The operation requires an unexplored (candidate) node."""


class SamplingError(NetProbeError):
    """A sampler received bad parameters or could not reach its target."""


class BudgetError(NetProbeError):
    """The probe budget is exhausted or an operation would exceed it."""


class EstimationError(NetProbeError):
    """Statistic estimation could not be carried out."""


class ConfigError(NetProbeError):
    """A trial or sweep configuration is invalid."""

"""Offline solvers behind one contract (see :class:`base.Oracle`)."""
from .base import AuditedOracle, CostOverride, EMPTY, OfflineSolution, Oracle, itemize, nd_of
from .exact import ExactOracle
from .gw import GWOracle, PCGWOracle
from .jv import JVOracle

ORACLES = {
    "exact": ExactOracle,
    "gw": GWOracle,
    "pcgw": PCGWOracle,
    "jv": JVOracle,
}


def make_oracle(name: str, audit: bool = False, **kwargs) -> Oracle:
    try:
        oracle = ORACLES[name](**kwargs)
    except KeyError:
        raise ValueError(f"unknown oracle {name!r}; choose from {sorted(ORACLES)}") from None
    return AuditedOracle(oracle) if audit else oracle


def exact_nd(instance, requests, zeroed=frozenset(), cap=20):
    return ExactOracle(cap).nd(instance, requests, zeroed)


def exact_pcnd(instance, requests, penalties, zeroed=frozenset(), cap=20):
    return ExactOracle(cap).pcnd(instance, requests, penalties, zeroed)


def gw_steiner_forest(instance, requests, zeroed=frozenset()):
    return GWOracle().nd(instance, requests, zeroed)


def pc_gw_steiner_forest(instance, requests, penalties, zeroed=frozenset()):
    return PCGWOracle().pcnd(instance, requests, penalties, zeroed)


def jv_facility_location(instance, requests, penalties=None, zeroed=frozenset()):
    if penalties is None:
        return nd_of(JVOracle(), instance, requests, zeroed)
    return JVOracle().pcnd(instance, requests, penalties, zeroed)

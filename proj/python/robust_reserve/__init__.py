"""Maxmin reserve prices for second-price auctions under moment constraints."""

import json

from . import _core
from ._core import DomainError, QuadratureError, alpha_n, correlated_gap, gamma_n

__all__ = [
    "DomainError",
    "QuadratureError",
    "Setting",
    "alpha_n",
    "correlated_gap",
    "expected_revenue",
    "expected_revenue_quadrature",
    "gamma_n",
    "maxmin",
    "minimize_revenue",
    "moments",
    "monte_carlo_revenue",
    "rate_table",
    "run_cli",
    "threat",
    "verify_maxmin",
    "worst_case",
]


class Setting:
    """An auction setting. Exactly one of vmax (bounded support) or sigma
    (variance bound) must be given."""

    def __init__(self, bidders, mean, cost=0.0, vmax=None, sigma=None):
        if (vmax is None) == (sigma is None):
            raise ValueError("give exactly one of vmax or sigma")
        self.bidders = int(bidders)
        self.mean = float(mean)
        self.cost = float(cost)
        self.kind = "bounded" if vmax is not None else "variance"
        self.bound = float(vmax if vmax is not None else sigma)

    def _args(self):
        return (self.kind, self.bidders, self.cost, self.mean, self.bound)

    def __repr__(self):
        key = "vmax" if self.kind == "bounded" else "sigma"
        return f"Setting(bidders={self.bidders}, mean={self.mean}, cost={self.cost}, {key}={self.bound})"


def _dist(d):
    return d if isinstance(d, str) else json.dumps(d)


def _config(config):
    return "" if config is None else json.dumps(config)


def maxmin(setting):
    return json.loads(_core.maxmin(*setting._args()))


def worst_case(setting):
    return json.loads(_core.worst_case(*setting._args()))


def threat(setting, r):
    """Returns (distribution, tie rule, revenue) of the threat at reserve r."""
    dist, tie, revenue = _core.threat(*setting._args(), float(r))
    return json.loads(dist), tie, revenue


def expected_revenue(dist, r, bidders, cost=0.0, tie="no_sale_at_reserve"):
    return _core.expected_revenue(_dist(dist), float(r), int(bidders), float(cost), tie)


def expected_revenue_quadrature(dist, r, bidders, cost=0.0, tie="no_sale_at_reserve"):
    return _core.expected_revenue_quadrature(_dist(dist), float(r), int(bidders), float(cost), tie)


def moments(dist):
    """Returns (mean, variance)."""
    return _core.moments(_dist(dist))


def monte_carlo_revenue(dist, r, bidders, cost=0.0, tie="no_sale_at_reserve", samples=100000, seed=0):
    """Returns (estimate, standard error)."""
    return _core.monte_carlo_revenue(_dist(dist), float(r), int(bidders), float(cost), tie, int(samples), int(seed))


def minimize_revenue(setting, r, tie="no_sale_at_reserve", config=None):
    return json.loads(_core.minimize_revenue(*setting._args(), float(r), tie, _config(config)))


def verify_maxmin(setting, r_grid=41, config=None):
    return json.loads(_core.verify_maxmin(*setting._args(), int(r_grid), _config(config)))


def rate_table(mean, vmax, sigma, n_max):
    return json.loads(_core.rate_table(float(mean), float(vmax), float(sigma), int(n_max)))


def run_cli(args):
    """Runs the command-line interface in process. Returns (exit code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])

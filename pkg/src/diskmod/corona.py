"""Certified lower bounds for |theta1|^2 + |theta2|^2 on the closed disk.

Adaptive subdivision of [-1,1]^2: a box passes once the value at its (clipped)
center minus a certified Lipschitz allowance over its diameter clears the
target, so the returned epsilon is a sound global lower bound.  Certification
runs over the closed disk; for this function class the infimum over the open
disk equals the minimum there.
"""

from __future__ import annotations

import dataclasses
import heapq
import math
from dataclasses import dataclass

import numpy as np

from .curvature import QuotientSpec
from .errors import CoronaFailure, DepthExceeded
from .holofun import common_zeros_in_disk, derivative, max_modulus_bound

MAX_DEPTH = 24
# hard cap on processed boxes; certification that needs more is hopeless anyway
BOX_BUDGET = 2_000_000
DEFAULT_TARGET_GAP = 1e-6


@dataclass(frozen=True)
class CoronaCertificate:
    """A certified bound inf |theta1|^2 + |theta2|^2 >= epsilon > 0."""

    epsilon: float
    depth: int
    boxes_checked: int


def lipschitz_bound(theta):
    """Certified Lipschitz constant of u = |theta1|^2 + |theta2|^2 on the closed disk.

    |grad u| = 2 |theta1' conj(theta1) + theta2' conj(theta2)|, bounded by
    coefficient-sum sup norms of the components and their derivatives.
    """
    t1, t2 = theta
    return 2.0 * (
        max_modulus_bound(t1) * max_modulus_bound(derivative(t1))
        + max_modulus_bound(t2) * max_modulus_bound(derivative(t2))
    )


def _clip_to_disk(x, y):
    r = math.hypot(x, y)
    if r <= 1.0:
        return complex(x, y)
    return complex(x / r, y / r)


def certify(theta, target_gap=DEFAULT_TARGET_GAP):
    """Certify the corona condition for a multiplier pair.

    Returns a CoronaCertificate whose epsilon is a sound lower bound for
    u = |theta1|^2 + |theta2|^2 over the closed disk (and at least
    ``target_gap``).  Raises CoronaFailure with a witness point when a box at
    maximal depth still has u below 10 * target_gap, and DepthExceeded (with
    the best bound found so far) when subdivision runs out of depth or budget
    without either outcome.
    """
    if target_gap <= 0:
        raise ValueError("target_gap must be positive")
    t1, t2 = theta
    L = lipschitz_bound(theta)

    def u(z):
        return abs(t1(z)) ** 2 + abs(t2(z)) ** 2

    # heap entries: (u at clipped center, -depth, tiebreak, cx, cy, half-side).
    # smallest u first digs toward any failure; on ties the deepest box wins,
    # so a flat near-failing region is drilled instead of flooded.
    counter = 0
    root = (u(_clip_to_disk(0.0, 0.0)), 0, counter, 0.0, 0.0, 1.0)
    heap = [root]
    accepted_min = np.inf
    max_depth_seen = 0
    boxes = 0

    def best_bound(extra):
        # sound global bound: accepted boxes plus everything still queued
        out = min(accepted_min, extra)
        for val, _, _, _, _, half in heap:
            out = min(out, val - L * 2.0 * half * math.sqrt(2.0))
        return out

    while heap:
        val, neg_depth, _, cx, cy, half = heapq.heappop(heap)
        depth = -neg_depth
        boxes += 1
        diam = 2.0 * half * math.sqrt(2.0)
        lower = val - L * diam
        if lower >= target_gap:
            accepted_min = min(accepted_min, lower)
            max_depth_seen = max(max_depth_seen, depth)
            continue
        center = _clip_to_disk(cx, cy)
        if depth >= MAX_DEPTH:
            if val < 10.0 * target_gap:
                raise CoronaFailure(witness=center, value=val)
            raise DepthExceeded(best_bound(lower), witness=center, value=val)
        if boxes > BOX_BUDGET:
            raise DepthExceeded(best_bound(lower), witness=center, value=val)
        q = half / 2.0
        for dx in (-q, q):
            for dy in (-q, q):
                nx, ny = cx + dx, cy + dy
                # discard boxes fully outside the closed disk
                ox = max(abs(nx) - q, 0.0)
                oy = max(abs(ny) - q, 0.0)
                if ox * ox + oy * oy > 1.0:
                    continue
                counter += 1
                heapq.heappush(
                    heap,
                    (u(_clip_to_disk(nx, ny)), -(depth + 1), counter, nx, ny, q),
                )

    return CoronaCertificate(
        epsilon=float(accepted_min),
        depth=max_depth_seen,
        boxes_checked=boxes,
    )


def check_corona(theta):
    """Fast boolean corona check: common-zero rejection, then certification."""
    if common_zeros_in_disk(theta):
        return False
    try:
        certify(theta, DEFAULT_TARGET_GAP)
    except CoronaFailure:
        return False
    return True


def certify_spec(spec, target_gap=DEFAULT_TARGET_GAP):
    """Certify a quotient spec's multiplier pair and attach the certificate.

    This is the only sanctioned way to obtain a certified QuotientSpec; the
    input is returned unchanged in every other field.
    """
    cert = certify(spec.theta, target_gap)
    return dataclasses.replace(spec, certificate=cert)


def make_spec(base, theta, target_gap=DEFAULT_TARGET_GAP):
    """Build and certify a QuotientSpec in one step."""
    return certify_spec(QuotientSpec(base=base, theta=theta), target_gap)

"""
Constants and parameter choices of the chromatic lower bound for the graphs
``Γ^n_ε(μ)``, checked in exact arithmetic on finite instances.

Asymptotic statements are read along a :class:`SubmeasureFamily` at a fixed working
resolution; every comparison involving ``C·∛n`` is decided by cubing.
"""

from __future__ import annotations

from fractions import Fraction
import functools
import logging
from typing import (
    Any,
    Dict,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Tuple,
)

import attr

from . import config
from .coloring import chromatic_number
from .exception import Degenerate, Infeasible, InvalidInput, Uncolorable
from .gamma import GammaParams, box_subgraph, quotient_graph
from .logging import BraceStyleAdapter, pretty
from .submeasure import (
    FiniteSubmeasure,
    Partition,
    SubmeasureFamily,
    common_refinement,
    covering_number,
    disjointify,
    refine_below,
)
from .types import AnchorReport, Rational, TheoremReport, check_typed_dict
from .utils import exact_cbrt, floor_cbrt, format_rational, is_prime, primes_between

__all__ = (
    'CubeRoot',
    'TheoremInstance',
    'ChainReport',
    'PnResult',
    'constant_C',
    'k_eps',
    'F_eps',
    'choose_prime',
    'build_P_n',
    'derive_instance',
    'verify_inequality_chain',
    'sandwich',
    'theorem_check',
)

log = BraceStyleAdapter(logging.getLogger(__name__))


def _caps(caps: Optional[Mapping[str, Any]]) -> Dict[str, Any]:
    return config.check(dict(caps or {}), config.caps_config_iv)


@functools.total_ordering
@attr.s(slots=True, frozen=True, eq=False)
class CubeRoot:
    """The nonnegative real ``∛cube``, compared with rationals by cubing."""

    cube: Fraction = attr.ib(converter=Fraction)

    def __attrs_post_init__(self) -> None:
        if self.cube < 0:
            raise InvalidInput('only cube roots of nonnegative numbers are represented')

    def exact(self) -> Optional[Fraction]:
        return exact_cbrt(self.cube)

    def floor(self) -> int:
        return floor_cbrt(self.cube)

    def times_cbrt(self, n: Rational) -> CubeRoot:
        """``C · ∛n``."""
        return CubeRoot(self.cube * n)

    def _other_cube(self, other: Any) -> Optional[Fraction]:
        if isinstance(other, CubeRoot):
            return other.cube
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return other ** 3 if other >= 0 else Fraction(-1)
        return None

    def __eq__(self, other: Any) -> bool:
        cube = self._other_cube(other)
        if cube is None:
            return NotImplemented
        return self.cube == cube

    def __lt__(self, other: Any) -> bool:
        cube = self._other_cube(other)
        if cube is None:
            return NotImplemented
        return self.cube < cube

    def __hash__(self) -> int:
        return hash(('cbrt', self.cube))

    def __float__(self) -> float:
        return float(self.cube) ** (1 / 3)

    def __str__(self) -> str:
        root = self.exact()
        if root is not None:
            return format_rational(root)
        return f'cbrt({format_rational(self.cube)})'


def constant_C(mu_X: Rational, epsilon: Rational) -> CubeRoot:
    """``C = ∛(μ(X)^2 / 16ε)``."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise InvalidInput('epsilon must be positive')
    return CubeRoot(Fraction(mu_X) ** 2 / (16 * epsilon))


@functools.lru_cache(maxsize=4096)
def _cover_size(mu: FiniteSubmeasure, threshold: Fraction, max_candidates: int, max_nodes: int) -> int:
    return covering_number(mu, threshold, max_candidates=max_candidates, max_nodes=max_nodes).k


def k_eps(
    family: SubmeasureFamily,
    epsilon: Rational,
    d: int,
    resolution: int,
    *,
    caps: Mapping[str, Any] = None,
) -> int:
    """``k_μ(ε/4d)`` on the family member at ``resolution``."""
    if d < 1:
        raise InvalidInput(f'd must be at least 1, got {d}')
    epsilon = Fraction(epsilon)
    limits = _caps(caps)
    mu = family.member(resolution)
    k = _cover_size(mu, epsilon / (4 * d), limits['max-cover-candidates'], limits['max-search-nodes'])
    log.debug('k_eps({}) = {} at resolution {} (4dμ(X)/ε = {})', d, k, resolution, 4 * d * mu.total() / epsilon)
    return k


def _k_or_none(family, epsilon, d, resolution, caps) -> Optional[int]:
    try:
        return k_eps(family, epsilon, d, resolution, caps=caps)
    except Infeasible:
        return None


def F_eps(
    family: SubmeasureFamily,
    epsilon: Rational,
    m: int,
    resolution: int,
    *,
    caps: Mapping[str, Any] = None,
    max_d: int = 10000,
) -> int:
    """
    ``max{d >= 1 : k_eps(d) <= m}`` or 0.  A threshold with no cover at the working
    resolution counts as ``k = ∞``, and the scan stops once ``4dμ(X)/ε > m``.
    """
    if m < 0:
        raise InvalidInput('m must be nonnegative')
    epsilon = Fraction(epsilon)
    mu_X = family.member(resolution).total()
    best = 0
    for d in range(1, max_d + 1):
        if 4 * d * mu_X / epsilon > m:
            break
        k = _k_or_none(family, epsilon, d, resolution, caps)
        if k is None or k > m:
            break
        best = d
    else:
        raise InvalidInput(f'F_eps did not settle below d = {max_d}')
    return best


def choose_prime(k: int, d: int) -> int:
    """The least prime ``p`` with ``k(d+1) < p < 2k(d+1)``."""
    if k < 1 or d < 1:
        raise InvalidInput(f'need k >= 1 and d >= 1, got k={k}, d={d}')
    lo = k * (d + 1)
    for p in primes_between(lo, 2 * lo):
        assert is_prime(p)
        return p
    raise Degenerate(f'no prime strictly between {lo} and {2 * lo}')


class PnResult(NamedTuple):
    partition: Partition
    k_n: int
    F_bound: int
    refined: Tuple[Partition, ...]


def build_P_n(
    family: SubmeasureFamily,
    epsilon: Rational,
    n: int,
    resolution: int,
    *,
    caps: Mapping[str, Any] = None,
) -> PnResult:
    """
    The common refinement of the partitions ``Q_d`` (disjointified minimal covers
    below ``ε/4d``) for ``d <= F(⌊C∛n⌋)``, split further into blocks below ``1/n``.
    """
    if n < 1:
        raise InvalidInput(f'n must be positive, got {n}')
    epsilon = Fraction(epsilon)
    limits = _caps(caps)
    mu = family.member(resolution)
    C = constant_C(mu.total(), epsilon)
    F_bound = F_eps(family, epsilon, C.times_cbrt(n).floor(), resolution, caps=caps)
    qs = []
    for d in range(1, F_bound + 1):
        cover = covering_number(mu, epsilon / (4 * d),
                                max_candidates=limits['max-cover-candidates'],
                                max_nodes=limits['max-search-nodes'])
        qs.append(disjointify(cover.masks, mu.atom_count))
    base = common_refinement(qs) if qs else Partition(mu.atom_count, [mu.ground])
    partition = refine_below(mu, base, Fraction(1, n))
    log.debug('P_n: n={} F_bound={} k_n={}', n, F_bound, len(partition))
    return PnResult(partition, len(partition), F_bound, tuple(qs))


@attr.s(slots=True, frozen=True)
class TheoremInstance:
    family: SubmeasureFamily = attr.ib()
    epsilon: Fraction = attr.ib(converter=Fraction)
    n: int = attr.ib()
    resolution: int = attr.ib()
    d: int = attr.ib()
    k: int = attr.ib()
    p: int = attr.ib()
    mu_X: Fraction = attr.ib()
    C: CubeRoot = attr.ib()
    F_bound: int = attr.ib()
    partition: Partition = attr.ib()
    max_block: Fraction = attr.ib()
    k_inverse: Tuple[Optional[int], Optional[int]] = attr.ib()

    def __attrs_post_init__(self) -> None:
        if self.d < 1:
            raise InvalidInput(f'd must be at least 1, got {self.d}')

    @property
    def l(self) -> int:
        return self.d * self.p

    @property
    def k_n(self) -> int:
        return len(self.partition)

    @property
    def l_n(self) -> int:
        return self.k_n - self.l - 1

    @property
    def in_regime(self) -> bool:
        return self.d < self.F_bound

    @property
    def k_bound(self) -> Fraction:
        """``4dμ(X)/ε``; a subadditive ``μ`` never lets ``k`` drop below it."""
        return 4 * self.d * self.mu_X / self.epsilon

    @property
    def k_meets_bound(self) -> bool:
        return self.k >= self.k_bound

    @property
    def m(self) -> int:
        """``⌊C·∛n⌋``, where ``F`` is evaluated."""
        return self.C.times_cbrt(self.n).floor()

    def constants(self) -> Dict[str, Any]:
        return {
            'mu_X': format_rational(self.mu_X),
            'epsilon': format_rational(self.epsilon),
            'n': self.n,
            'resolution': self.resolution,
            'family': self.family.describe(),
            'C': str(self.C),
            'C_cubed': format_rational(self.C.cube),
            'floor_C_cbrt_n': self.m,
            'F_bound': self.F_bound,
            'd': self.d,
            'k': self.k,
            'k_bound': format_rational(self.k_bound),
            'k_meets_bound': self.k_meets_bound,
            'p': self.p,
            'l': self.l,
            'k_n': self.k_n,
            'l_n': self.l_n,
            'max_block': format_rational(self.max_block),
            'in_regime': self.in_regime,
        }


def derive_instance(
    family: SubmeasureFamily,
    epsilon: Rational,
    n: int,
    resolution: int,
    *,
    d: int = None,
    caps: Mapping[str, Any] = None,
) -> TheoremInstance:
    """
    Derives every constant for a colour budget ``d``; by default the largest ``d``
    with ``d < F_bound``, or 1 (outside the regime) when there is none.
    """
    epsilon = Fraction(epsilon)
    mu = family.member(resolution)
    pn = build_P_n(family, epsilon, n, resolution, caps=caps)
    if d is None:
        d = pn.F_bound - 1 if pn.F_bound >= 2 else 1
    if d < 1:
        raise InvalidInput(f'd must be at least 1, got {d}')
    k = k_eps(family, epsilon, d, resolution, caps=caps)
    p = choose_prime(k, d)
    F_m = pn.F_bound
    k_at = _k_or_none(family, epsilon, F_m, resolution, caps) if F_m >= 1 else None
    k_next = _k_or_none(family, epsilon, F_m + 1, resolution, caps)
    inst = TheoremInstance(
        family=family,
        epsilon=epsilon,
        n=n,
        resolution=resolution,
        d=d,
        k=k,
        p=p,
        mu_X=mu.total(),
        C=constant_C(mu.total(), epsilon),
        F_bound=pn.F_bound,
        partition=pn.partition,
        max_block=max(mu.eval_mask(b) for b in pn.partition.blocks),
        k_inverse=(k_at, k_next),
    )
    log.debug('derived constants: {}', pretty(inst.constants()))
    return inst


class ChainReport(NamedTuple):
    ok: bool
    anchors: List[AnchorReport]


def _anchor(name: str, lhs: Any, relation: str, rhs: Any, required: bool) -> AnchorReport:
    if rhs is None:
        passed = lhs is not None and relation != '='
    elif lhs is None:
        passed = False
    else:
        passed = {
            '<': lambda a, b: a < b,
            '<=': lambda a, b: a <= b,
            '=': lambda a, b: a == b,
        }[relation](lhs, rhs)
    report = {
        'name': name,
        'lhs': None if lhs is None else format_rational(lhs),
        'relation': relation,
        'rhs': None if rhs is None else format_rational(rhs),
        'required': required,
        'passed': bool(passed),
    }
    return check_typed_dict(report, AnchorReport)


def verify_inequality_chain(inst: TheoremInstance) -> ChainReport:
    """
    Evaluates every inequality of the lower-bound argument.  Anchors relying on
    ``d < F_bound`` are required only inside that regime; the rest always are.
    ``None`` stands for ``∞`` (no cover at the working resolution).
    """
    eps, d, k, p, l, n = inst.epsilon, inst.d, inst.k, inst.p, inst.l, inst.n
    mu_X = inst.mu_X
    regime = inst.in_regime
    x = Fraction(l + 1, n)
    k_at, k_next = inst.k_inverse
    anchors = [
        # k is nondecreasing, so k(F(m)) <= k(F(m) + 1)
        _anchor('increasing', k_at if k_at is not None else 0, '<=', k_next, True),
        # k(F(m)) <= m < k(F(m) + 1)
        _anchor('inverse', k_at if k_at is not None else 0, '<=', inst.m, True),
        _anchor('inverse', inst.m, '<', k_next, True),
        _anchor('eqq0', k * (d + 1), '<', p, True),
        _anchor('eqq0', p, '<', 2 * k * (d + 1), True),
        _anchor('eqq1', d * p, '<', (p - k) * (d + 1), True),
        _anchor('claim', x, '<', eps / 8, regime),
        _anchor('eq:k', inst.k_bound, '<=', k, True),
        _anchor('eq:epsilon', d + 1, '<=', eps * k / mu_X if mu_X else None, True),
        _anchor('borsuk_ulam', d * (p - 1), '<', l + 1, True),
        _anchor('pigeonhole', l + 1, '<', (p - k + 1) * (d + 1), True),
        _anchor('preimage', d * (eps / (4 * d)), '=', eps / 4, True),
        _anchor('one', x, '<=', eps / 8, regime),
        _anchor('two', (l + 1) * inst.max_block, '<=', eps / 8, regime),
        _anchor('arithmetic', eps / 4 + 2 * x, '<=', eps / 2, regime),
        _anchor('contradiction', eps / 4 + 6 * x, '<', eps, regime),
    ]
    ok = all(a['passed'] for a in anchors if a['required'])
    return ChainReport(ok, anchors)


def sandwich(params: GammaParams, B: int, m: int, *, caps: Mapping[str, Any] = None) -> Tuple[Optional[int], Optional[int]]:
    """Exact χ of the box (lower bound) and of the quotient (upper bound); ``None`` if looped."""
    limits = _caps(caps)
    bounds: List[Optional[int]] = []
    for graph in (box_subgraph(params, B, max_vertices=limits['max-vertices']),
                  quotient_graph(params, m, max_vertices=limits['max-vertices'])):
        try:
            bounds.append(chromatic_number(graph, max_nodes=limits['max-search-nodes']).upper)
        except Uncolorable:
            bounds.append(None)
    return bounds[0], bounds[1]


def theorem_check(
    family: SubmeasureFamily,
    epsilon: Rational,
    n: int,
    m_quotient: int,
    B_box: int,
    resolution: int,
    *,
    d: int = None,
    caps: Mapping[str, Any] = None,
) -> TheoremReport:
    """
    Builds ``Γ^n_ε(μ)`` over ``P_n``, sandwiches its chromatic number and checks
    ``F_bound <= χ(quotient)`` together with the inequality chain.
    """
    inst = derive_instance(family, epsilon, n, resolution, d=d, caps=caps)
    params = GammaParams(family.member(resolution), inst.partition, inst.epsilon)
    lower, upper = sandwich(params, B_box, m_quotient, caps=caps)
    chain = verify_inequality_chain(inst)
    if upper is None:
        verdict = 'vacuous'
    elif inst.F_bound <= upper and chain.ok:
        verdict = 'pass'
    else:
        verdict = 'fail'
    constants = inst.constants()
    constants['F_bound_le_lower'] = lower is not None and inst.F_bound <= lower
    report = {
        'constants': constants,
        'anchors': chain.anchors,
        'chi_lower': lower,
        'chi_upper': upper,
        'F_bound': inst.F_bound,
        'verdict': verdict,
    }
    log.info('theorem check: F_bound={} chi in [{}, {}] -> {}', inst.F_bound, lower, upper, verdict)
    return check_typed_dict(report, TheoremReport)

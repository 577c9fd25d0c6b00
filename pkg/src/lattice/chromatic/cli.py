"""
The ``lattice-chromatic`` command line.

Exit codes: 0 on success, 1 when a verification fails (or the input admits no
answer), 2 on usage errors, 3 when a resource cap is hit.  Errors are reported on
stderr as ``error: <Name>: <message>``.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
import json as stdjson
from pathlib import Path
import sys
from typing import (
    Any,
    Dict,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Type,
)

import attr
import click

from . import __version__
from . import complexes as cx
from . import config as cfgmod
from . import export
from . import gamma
from . import harness
from . import homology
from .coloring import FiniteGraph
from .exception import (
    ChromaticError,
    ConfigurationError,
    InvalidInput,
    ResourceLimitExceeded,
)
from .json import dumps
from .logging import Logger
from .submeasure import (
    FiniteSubmeasure,
    Partition,
    SubmeasureFamily,
    covering_number,
    from_document,
    verify_axioms,
)
from .types import CoefficientField, ColoringMode, OutputFormat
from .utils import atoms_of, env_info, format_rational
from .validators import parse_rational

__all__ = (
    'main',
    'run',
    'EnumChoice',
    'RationalParamType',
    'FamilyParamType',
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class EnumChoice(click.Choice):
    """A choice over the values of a ``str``-valued enum, converted back to the member."""

    enum: Type[Enum]

    def __init__(self, enum: Type[Enum]):
        super().__init__([e.value for e in enum])
        self.enum = enum

    def convert(self, value: Any, param, ctx):
        if isinstance(value, self.enum):
            return value
        value = super().convert(value, param, ctx)
        return self.enum(value)


class RationalParamType(click.ParamType):
    name = "exact rational"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return parse_rational(value)
        except ValueError as e:
            self.fail(str(e), param, ctx)

    def get_metavar(self, param):
        return 'A/B'


class FamilyParamType(click.ParamType):
    """``uniform``, ``capped:<cap>`` or ``weighted:<a1>,<a2>,...``."""

    name = "submeasure family"

    def convert(self, value, param, ctx):
        if isinstance(value, SubmeasureFamily):
            return value
        kind, _, arg = value.partition(':')
        try:
            if kind == 'uniform' and not arg:
                return SubmeasureFamily.uniform()
            if kind == 'capped':
                return SubmeasureFamily.capped(parse_rational(arg))
            if kind == 'weighted':
                return SubmeasureFamily.weighted([parse_rational(a) for a in arg.split(',')])
        except ValueError as e:
            self.fail(f'{value!r}: {e}', param, ctx)
        self.fail(f'{value!r} is not one of uniform, capped:<cap>, weighted:<a,b,...>', param, ctx)

    def get_metavar(self, param):
        return 'FAMILY'


Rational = RationalParamType()
Family = FamilyParamType()


@attr.s(slots=True, frozen=True)
class CommandConfig:
    config: Mapping[str, Any] = attr.ib()
    seed: int = attr.ib()
    format: OutputFormat = attr.ib()

    @property
    def caps(self) -> Mapping[str, Any]:
        return self.config['caps']


def _error(name: str, message: str) -> None:
    click.echo(f'error: {name}: {message}', err=True)


def _exit_code_for(e: Exception) -> int:
    if isinstance(e, ResourceLimitExceeded):
        return EXIT_RESOURCE
    if isinstance(e, (InvalidInput, ConfigurationError)):
        return EXIT_USAGE
    return EXIT_FAILED


class ChromaticGroup(click.Group):
    """Maps domain errors and click errors onto the exit-code contract."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
            code = rv if isinstance(rv, int) else EXIT_OK
        except click.ClickException as e:
            _error(type(e).__name__, e.format_message())
            code = e.exit_code
        except click.Abort:
            _error('Abort', 'aborted')
            code = EXIT_FAILED
        except (ChromaticError, ConfigurationError) as e:
            _error(type(e).__name__, str(e))
            code = _exit_code_for(e)
        if standalone_mode:
            sys.exit(code)
        return code


def _cmd(ctx: click.Context) -> CommandConfig:
    return ctx.find_object(CommandConfig)


def _require_format(cc: CommandConfig, *allowed: OutputFormat) -> None:
    if cc.format not in allowed:
        raise click.UsageError(
            f"format '{cc.format.value}' is not supported here "
            f"(use one of {', '.join(f.value for f in allowed)})")


def _emit(text: str) -> None:
    click.echo(text, nl=not text.endswith('\n'))


def _load_json(path: str) -> Dict[str, Any]:
    try:
        return stdjson.loads(Path(path).read_text())
    except OSError as e:
        raise InvalidInput(f'cannot read {path}: {e.strerror}')
    except ValueError as e:
        raise InvalidInput(f'{path} is not valid JSON: {e}')


def _fmt_set(atoms) -> str:
    return '{' + ','.join(str(a) for a in sorted(atoms)) + '}'


@click.group(cls=ChromaticGroup, context_settings={'help_option_names': ['-h', '--help']})
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
              help='The TOML configuration file (default: discovered).')
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']),
              default=None, help='Overrides logging.level from the configuration.')
@click.option('--seed', type=int, default=0, show_default=True,
              help='Seed for the randomized checks.')
@click.option('--format', 'fmt', type=EnumChoice(OutputFormat), default=OutputFormat.TEXT.value,
              show_default=True, help='Output format of the report.')
@click.version_option(__version__, message=f'%(prog)s %(version)s ({env_info()})')
@click.pass_context
def main(ctx: click.Context, config_path: Optional[str], log_level: Optional[str], seed: int, fmt: OutputFormat):
    """Submeasure lattice graphs, Z/p complexes and the chromatic lower bound."""
    overrides = {'logging': {'level': log_level}} if log_level else None
    config = cfgmod.load(config_path, overrides)
    ctx.obj = CommandConfig(config, seed, fmt)
    ctx.with_resource(Logger(config['logging']))


# -- submeasure --

@main.group()
def submeasure():
    """Submeasure axioms and covering numbers."""


@submeasure.command('verify')
@click.option('--file', 'path', required=True, type=click.Path(dir_okay=False))
@click.pass_context
def submeasure_verify(ctx: click.Context, path: str) -> int:
    cc = _cmd(ctx)
    _require_format(cc, OutputFormat.TEXT, OutputFormat.JSON)
    mu, _ = from_document(_load_json(path))
    report = verify_axioms(mu, exhaustive_limit=cc.caps['max-atoms-exhaustive'], seed=cc.seed)
    if cc.format == OutputFormat.JSON:
        _emit(dumps({
            'ok': report.ok,
            'reason': report.reason,
            'counterexample': None if report.counterexample is None else [sorted(s) for s in report.counterexample],
            'checked_pairs': report.checked_pairs,
        }))
    elif report.ok:
        _emit('ok')
    else:
        assert report.counterexample is not None
        a, b = report.counterexample
        _emit(f'counterexample ({report.reason}): A={_fmt_set(a)} B={_fmt_set(b)}')
    return EXIT_OK if report.ok else EXIT_FAILED


@submeasure.command('cover')
@click.option('--file', 'path', required=True, type=click.Path(dir_okay=False))
@click.option('--delta', required=True, type=Rational)
@click.pass_context
def submeasure_cover(ctx: click.Context, path: str, delta: Fraction) -> int:
    cc = _cmd(ctx)
    _require_format(cc, OutputFormat.TEXT, OutputFormat.JSON)
    mu, _ = from_document(_load_json(path))
    result = covering_number(mu, delta, max_candidates=cc.caps['max-cover-candidates'],
                             max_nodes=cc.caps['max-search-nodes'])
    if cc.format == OutputFormat.JSON:
        _emit(dumps({'k': result.k, 'cover': [sorted(s) for s in result.cover]}))
    else:
        _emit('\n'.join([f'k={result.k}'] + [_fmt_set(s) for s in result.cover]))
    return EXIT_OK


# -- gamma --

def _partition_option(value: Optional[str], atom_count: int) -> Optional[Partition]:
    if value is None:
        return None
    try:
        blocks = stdjson.loads(value)
    except ValueError:
        raise InvalidInput(f'{value!r} is not a JSON list of blocks')
    return Partition.from_lists(blocks, atom_count)


def _gamma_params(path: Optional[str], blocks: Optional[int], atoms: Optional[int], eps: Fraction) -> gamma.GammaParams:
    if path is not None:
        mu, partition = from_document(_load_json(path))
        if partition is None:
            partition = (Partition.consecutive(mu.atom_count, blocks) if blocks
                         else Partition.singletons(mu.atom_count))
        return gamma.GammaParams(mu, partition, eps)
    return gamma.uniform_params(blocks or 1, eps, atoms)


def _graph_options(fn):
    fn = click.option('--file', 'path', type=click.Path(dir_okay=False), default=None,
                      help='Submeasure params file (optionally carrying a partition).')(fn)
    fn = click.option('--blocks', type=click.IntRange(1), default=None,
                      help='Number of consecutive blocks.')(fn)
    fn = click.option('--atoms', type=click.IntRange(1), default=None,
                      help='Atoms of the default uniform submeasure (default: --blocks).')(fn)
    fn = click.option('--eps', required=True, type=Rational)(fn)
    fn = click.option('--box', type=click.IntRange(2), default=None, help='Box side B.')(fn)
    fn = click.option('--quotient', type=click.IntRange(2), default=None, help='Modulus m.')(fn)
    return fn


def _graph(cc: CommandConfig, params: gamma.GammaParams, box: Optional[int], quotient: Optional[int]) -> FiniteGraph:
    if (box is None) == (quotient is None):
        raise click.UsageError('give exactly one of --box and --quotient')
    if box is not None:
        return gamma.box_subgraph(params, box, max_vertices=cc.caps['max-vertices'])
    assert quotient is not None
    return gamma.quotient_graph(params, quotient, max_vertices=cc.caps['max-vertices'])


@main.group('gamma')
def gamma_group():
    """Finite boxes and quotients of the lattice graph."""


@gamma_group.command('build')
@_graph_options
@click.pass_context
def gamma_build(ctx: click.Context, path, blocks, atoms, eps, box, quotient) -> int:
    cc = _cmd(ctx)
    g = _graph(cc, _gamma_params(path, blocks, atoms, eps), box, quotient)
    if cc.format == OutputFormat.DOT:
        _emit(export.graph_to_dot(g))
    elif cc.format == OutputFormat.JSON:
        _emit(dumps({
            'provenance': g.provenance.value,
            'size': g.size_parameter,
            'vertices': [list(v) for v in g.vertices],
            'edges': g.sorted_edges(),
            'loops': sorted(g.loops),
        }))
    else:
        header = f'# {g.describe()}\n' if cc.format == OutputFormat.TEXT else ''
        _emit(header + export.graph_to_edge_list(g))
    return EXIT_OK


@gamma_group.command('chi')
@_graph_options
@click.option('--mode', type=EnumChoice(ColoringMode), default=ColoringMode.EXACT.value, show_default=True)
@click.pass_context
def gamma_chi(ctx: click.Context, path, blocks, atoms, eps, box, quotient, mode: ColoringMode) -> int:
    cc = _cmd(ctx)
    _require_format(cc, OutputFormat.TEXT, OutputFormat.JSON, OutputFormat.CSV)
    g = _graph(cc, _gamma_params(path, blocks, atoms, eps), box, quotient)
    result = gamma.chromatic_number(g, mode, max_nodes=cc.caps['max-search-nodes'])
    if cc.format == OutputFormat.JSON:
        _emit(dumps({
            'chi': result.value,
            'lower': result.lower,
            'upper': result.upper,
            'exact': result.exact,
            'coloring': list(result.coloring),
        }))
    elif cc.format == OutputFormat.CSV:
        _emit(export.coloring_to_csv(g, result.coloring))
    elif result.exact:
        _emit(str(result.upper))
    else:
        _emit(f'{result.lower} <= chi <= {result.upper}')
    return EXIT_OK


@gamma_group.command('refine-check')
@click.option('--file', 'path', type=click.Path(dir_okay=False), default=None)
@click.option('--atoms', type=click.IntRange(1), default=None)
@click.option('--eps', required=True, type=Rational)
@click.option('--coarse', required=True, help='JSON list of blocks, e.g. [[1,2,3,4]].')
@click.option('--fine', required=True, help='JSON list of blocks refining --coarse.')
@click.option('--box', type=click.IntRange(2), default=3, show_default=True)
@click.pass_context
def gamma_refine_check(ctx: click.Context, path, atoms, eps, coarse, fine, box) -> int:
    cc = _cmd(ctx)
    _require_format(cc, OutputFormat.TEXT, OutputFormat.JSON)
    if path is not None:
        mu, _ = from_document(_load_json(path))
    else:
        if atoms is None:
            raise click.UsageError('give --file or --atoms')
        mu = FiniteSubmeasure.uniform(atoms, Fraction(1, atoms))
    coarse_p = _partition_option(coarse, mu.atom_count)
    fine_p = _partition_option(fine, mu.atom_count)
    assert coarse_p is not None and fine_p is not None
    report = gamma.diagonal_refinement_hom(
        gamma.GammaParams(mu, coarse_p, eps), gamma.GammaParams(mu, fine_p, eps),
        B=box, max_vertices=cc.caps['max-vertices'])
    if cc.format == OutputFormat.JSON:
        _emit(dumps(report._asdict()))
    elif report.ok:
        _emit('ok')
    else:
        assert report.counterexample is not None
        k, l = report.counterexample
        _emit(f'counterexample edge: {k} -- {l}')
    return EXIT_OK if report.ok else EXIT_FAILED


# -- complex --

def _complex_summary(K: cx.Complex) -> Dict[str, Any]:
    return {
        'name': K.name,
        'vertices': [cx.format_vertex(v) for v in K.vertices],
        'facets': [[cx.format_vertex(v) for v in row] for row in K.sorted_facets()],
        'p': K.p,
        'dimension': K.dimension,
    }


def _emit_complex(cc: CommandConfig, K: cx.Complex) -> int:
    _require_format(cc, OutputFormat.TEXT, OutputFormat.JSON)
    if cc.format == OutputFormat.JSON:
        _emit(dumps(_complex_summary(K)))
    else:
        _emit(cx.dump_facets(K))
    return EXIT_OK


def _load_complex(path: str) -> cx.Complex:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InvalidInput(f'cannot read {path}: {e.strerror}')
    return cx.load_facets(text, name=Path(path).stem)


def _parse_triple(value: Optional[str], arity: int, option: str) -> Optional[Tuple[int, ...]]:
    if value is None:
        return None
    try:
        parts = tuple(int(x) for x in value.split(','))
    except ValueError:
        parts = ()
    if len(parts) != arity:
        raise click.BadParameter(f'expected {arity} comma-separated integers', param_hint=option)
    return parts


def _complex_from_options(cc: CommandConfig, path: Optional[str], k: Optional[str], s: Optional[str],
                          sd: int) -> cx.Complex:
    given = [x for x in (path, k, s) if x is not None]
    if len(given) != 1:
        raise click.UsageError('give exactly one of --file, --k and --s')
    K: cx.Complex
    if path is not None:
        K = _load_complex(path)
    elif k is not None:
        n, l, p = _parse_triple(k, 3, '--k') or ()
        K = cx.build_K(n, l, p)
    else:
        width, p = _parse_triple(s, 2, '--s') or ()
        K = cx.build_S(width, p)
    for _ in range(sd):
        K = cx.barycentric(K, max_vertices=cc.caps['max-sd-vertices'])
    return K


def _complex_source_options(fn):
    fn = click.option('--file', 'path', type=click.Path(dir_okay=False), default=None,
                      help='A facet-list file.')(fn)
    fn = click.option('--k', default=None, help='Build K^{n,l}_p from "n,l,p".')(fn)
    fn = click.option('--s', default=None, help='Build S^{l+1}_p from "l+1,p".')(fn)
    fn = click.option('--sd', type=click.IntRange(0), default=0, help='Subdivide this many times.')(fn)
    return fn


@main.group('complex')
def complex_group():
    """Z/p complexes, joins, subdivisions and the map s."""


@complex_group.command('build-k')
@click.option('--n', 'n', required=True, type=click.IntRange(1))
@click.option('--l', 'l', required=True, type=click.IntRange(0))
@click.option('--p', 'p', required=True, type=click.IntRange(2))
@click.pass_context
def complex_build_k(ctx: click.Context, n: int, l: int, p: int) -> int:
    return _emit_complex(_cmd(ctx), cx.build_K(n, l, p))


@complex_group.command('build-s')
@click.option('--l-plus-1', 'width', required=True, type=click.IntRange(1))
@click.option('--p', 'p', required=True, type=click.IntRange(2))
@click.pass_context
def complex_build_s(ctx: click.Context, width: int, p: int) -> int:
    return _emit_complex(_cmd(ctx), cx.build_S(width, p))


@complex_group.command('join')
@click.option('--left', required=True, type=click.Path(dir_okay=False))
@click.option('--right', required=True, type=click.Path(dir_okay=False))
@click.pass_context
def complex_join(ctx: click.Context, left: str, right: str) -> int:
    return _emit_complex(_cmd(ctx), cx.join(_load_complex(left), _load_complex(right)))


@complex_group.command('sd')
@_complex_source_options
@click.option('--times', type=click.IntRange(1), default=1, show_default=True)
@click.pass_context
def complex_sd(ctx: click.Context, path, k, s, sd, times) -> int:
    cc = _cmd(ctx)
    return _emit_complex(cc, _complex_from_options(cc, path, k, s, sd + times))


@complex_group.command('map-s')
@click.option('--chain', required=True, help='A vertex of sd(K), e.g. "[1,2:1,0]" or "[1:1|1,2:1,1]".')
@click.option('--n', 'n', required=True, type=click.IntRange(1))
@click.option('--l', 'l', required=True, type=click.IntRange(0))
@click.option('--p', 'p', required=True, type=click.IntRange(2))
@click.pass_context
def complex_map_s(ctx: click.Context, chain: str, n: int, l: int, p: int) -> int:
    cc = _cmd(ctx)
    _require_format(cc, OutputFormat.TEXT, OutputFormat.JSON)
    parsed = cx.parse_vertex(chain, n)
    members = parsed if isinstance(parsed, frozenset) else frozenset([parsed])
    image = cx.map_s(members, n, l, p)
    if cc.format == OutputFormat.JSON:
        _emit(dumps({'n': image.n, 'entries': [list(e) for e in image.entries],
                     'payload': cx.format_vertex(image)}))
    else:
        _emit(cx.format_vertex(image))
    return EXIT_OK


@complex_group.command('verify')
@click.option('--map', 'which', type=click.Choice(['s', 'tower', 'inclusion']), required=True)
@click.option('--n', 'n', type=click.IntRange(1), default=None, help='Ambient size (map s).')
@click.option('--l', 'l', required=True, type=click.IntRange(0))
@click.option('--p', 'p', required=True, type=click.IntRange(2))
@click.option('--l-n', 'l_n', type=click.IntRange(0), default=1, show_default=True,
              help='Tower height (map tower).')
@click.pass_context
def complex_verify(ctx: click.Context, which: str, n: Optional[int], l: int, p: int, l_n: int) -> int:
    cc = _cmd(ctx)
    _require_format(cc, OutputFormat.TEXT, OutputFormat.JSON)
    limit = cc.caps['max-sd-vertices']
    if which == 's':
        if n is None:
            raise click.UsageError('--map s needs --n')
        f = cx.s_map(n, l, p, max_sd_vertices=limit)
    elif which == 'tower':
        f = cx.compose_tower(l, p, l_n, max_sd_vertices=limit)
    else:
        f = cx.inclusion_S_into_K(l + 1, p)
    simplicial = cx.verify_simplicial(f)
    equivariant = cx.verify_equivariant(f, p)
    ok = simplicial.ok and equivariant.ok
    if cc.format == OutputFormat.JSON:
        _emit(dumps({
            'map': f.name,
            'simplicial': {
                'ok': simplicial.ok, 'checked': simplicial.checked,
                'counterexample': (None if simplicial.counterexample is None
                                   else [cx.format_vertex(v) for v in simplicial.counterexample]),
            },
            'equivariant': {
                'ok': equivariant.ok, 'checked': equivariant.checked,
                'counterexample': (None if equivariant.counterexample is None
                                   else [cx.format_vertex(equivariant.counterexample[0]),
                                         equivariant.counterexample[1]]),
            },
        }))
    elif ok:
        _emit('ok')
    else:
        lines = []
        if simplicial.counterexample is not None:
            lines.append('not simplicial on ' + ' '.join(cx.format_vertex(v) for v in simplicial.counterexample))
        if equivariant.counterexample is not None:
            v, q = equivariant.counterexample
            lines.append(f'not equivariant at {cx.format_vertex(v)} for q={q}')
        _emit('\n'.join(lines))
    return EXIT_OK if ok else EXIT_FAILED


# -- homology --

@main.group('homology')
def homology_group():
    """Reduced Betti numbers (rational or mod-q ranks)."""


def _field_options(fn):
    fn = click.option('--field', type=EnumChoice(CoefficientField), default=CoefficientField.RATIONAL.value,
                      show_default=True)(fn)
    fn = click.option('--modulus', type=click.IntRange(2), default=homology.DEFAULT_PRIME,
                      help='The prime q for --field prime.')(fn)
    return fn


@homology_group.command('betti')
@_complex_source_options
@_field_options
@click.option('--up-to', type=click.IntRange(0), default=None)
@click.pass_context
def homology_betti(ctx: click.Context, path, k, s, sd, field, modulus, up_to) -> int:
    cc = _cmd(ctx)
    _require_format(cc, OutputFormat.TEXT, OutputFormat.JSON, OutputFormat.CSV)
    K = _complex_from_options(cc, path, k, s, sd)
    numbers = homology.betti(K, up_to, field=field, modulus=modulus, max_simplices=cc.caps['max-simplices'])
    if cc.format == OutputFormat.JSON:
        _emit(dumps({'complex': K.name, 'reduced_betti': numbers}))
    elif cc.format == OutputFormat.CSV:
        _emit(export.betti_to_csv(numbers))
    else:
        _emit('\n'.join(f'b~{d} = {b}' for d, b in enumerate(numbers)))
    return EXIT_OK


@homology_group.command('connectivity')
@_complex_source_options
@_field_options
@click.option('--l', 'l', required=True, type=int)
@click.pass_context
def homology_connectivity(ctx: click.Context, path, k, s, sd, field, modulus, l) -> int:
    cc = _cmd(ctx)
    _require_format(cc, OutputFormat.TEXT, OutputFormat.JSON)
    K = _complex_from_options(cc, path, k, s, sd)
    report = homology.check_connectivity_necessary(
        K, l, field=field, modulus=modulus, max_simplices=cc.caps['max-simplices'])
    if cc.format == OutputFormat.JSON:
        _emit(dumps(report._asdict()))
    elif report.ok:
        _emit(f'ok ({report.label})')
    else:
        _emit(f'failing dimension {report.failing_dimension} ({report.label})')
    return EXIT_OK if report.ok else EXIT_FAILED


@homology_group.command('boundary')
@_complex_source_options
@click.option('--d', 'd', required=True, type=click.IntRange(0))
@click.pass_context
def homology_boundary(ctx: click.Context, path, k, s, sd, d) -> int:
    """Print the boundary matrix ∂_d as (row, col, value) coordinates."""
    cc = _cmd(ctx)
    _require_format(cc, OutputFormat.TEXT)
    K = _complex_from_options(cc, path, k, s, sd)
    data = homology.boundary_matrices(K, max_simplices=cc.caps['max-simplices'])
    _emit(export.matrix_coordinates(data, d))
    return EXIT_OK


# -- harness --

@main.group('harness')
def harness_group():
    """Constants, the inequality chain and the chromatic sandwich."""


def _instance_options(fn):
    fn = click.option('--family', type=Family, default='uniform', show_default=True)(fn)
    fn = click.option('--eps', required=True, type=Rational)(fn)
    fn = click.option('--n', 'n', required=True, type=click.IntRange(1))(fn)
    fn = click.option('--resolution', type=click.IntRange(1), default=16, show_default=True,
                      help='Resolution r of the family member μ_r.')(fn)
    fn = click.option('--d', 'd', type=click.IntRange(0), default=None,
                      help='Colour budget (default: largest d below F_bound).')(fn)
    return fn


def _render_value(value: Any) -> str:
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


def _render_constants(constants: Mapping[str, Any]) -> List[str]:
    return [f'{key} = {_render_value(value)}' for key, value in constants.items()]


def _render_anchors(anchors: Sequence[Mapping[str, Any]]) -> List[str]:
    lines = []
    for a in anchors:
        lhs = a['lhs'] if a['lhs'] is not None else 'inf'
        rhs = a['rhs'] if a['rhs'] is not None else 'inf'
        status = 'pass' if a['passed'] else 'FAIL'
        note = '' if a['required'] else ' (informational)'
        lines.append(f"{a['name']}: {lhs} {a['relation']} {rhs} ... {status}{note}")
    return lines


@harness_group.command('constants')
@_instance_options
@click.pass_context
def harness_constants(ctx: click.Context, family, eps, n, resolution, d) -> int:
    cc = _cmd(ctx)
    _require_format(cc, OutputFormat.TEXT, OutputFormat.JSON)
    inst = harness.derive_instance(family, eps, n, resolution, d=d, caps=cc.caps)
    constants = inst.constants()
    if cc.format == OutputFormat.JSON:
        _emit(dumps(constants))
    else:
        _emit('\n'.join(_render_constants(constants)))
    return EXIT_OK


@harness_group.command('inequalities')
@_instance_options
@click.pass_context
def harness_inequalities(ctx: click.Context, family, eps, n, resolution, d) -> int:
    cc = _cmd(ctx)
    _require_format(cc, OutputFormat.TEXT, OutputFormat.JSON)
    inst = harness.derive_instance(family, eps, n, resolution, d=d, caps=cc.caps)
    chain = harness.verify_inequality_chain(inst)
    if cc.format == OutputFormat.JSON:
        _emit(dumps({'ok': chain.ok, 'in_regime': inst.in_regime, 'anchors': chain.anchors}))
    else:
        _emit('\n'.join(_render_anchors(chain.anchors) + ['ok' if chain.ok else 'FAILED']))
    return EXIT_OK if chain.ok else EXIT_FAILED


@harness_group.command('theorem-check')
@_instance_options
@click.option('--quotient', 'm', type=click.IntRange(2), required=True)
@click.option('--box', 'B', type=click.IntRange(2), required=True)
@click.pass_context
def harness_theorem_check(ctx: click.Context, family, eps, n, resolution, d, m, B) -> int:
    cc = _cmd(ctx)
    _require_format(cc, OutputFormat.TEXT, OutputFormat.JSON)
    report = harness.theorem_check(family, eps, n, m, B, resolution, d=d, caps=cc.caps)
    if cc.format == OutputFormat.JSON:
        _emit(dumps(report))
    else:
        lines = _render_constants(report['constants'])
        lines += _render_anchors(report['anchors'])
        lines.append(f"chi_lower = {report['chi_lower']}")
        lines.append(f"chi_upper = {report['chi_upper']}")
        lines.append(f"verdict = {report['verdict']}")
        _emit('\n'.join(lines))
    return EXIT_FAILED if report['verdict'] == 'fail' else EXIT_OK


def run(argv: Sequence[str] = None) -> int:
    """Runs the command line and returns the exit code instead of exiting."""
    return main.main(args=list(argv) if argv is not None else None,
                     prog_name='lattice-chromatic', standalone_mode=False)

"""Batch front end: build balls and run verification suites.

Examples::

    mcgraphs build --surface 1,1 --spec L_X --radius 2 --out runs/a
    mcgraphs verify --surface 1,2 --spec L_X --radius 3 --suite lipschitz --out runs/b

``--surface`` takes a surface JSON file or ``genus,boundary``. ``--spec``
takes a graph kind, an inline JSON object, or a JSON file. ``MCG_THREADS``
sets the worker count (0 means sequential).
"""

import argparse
from dataclasses import asdict, dataclass
import json
import os
import sys

from . import analysis
from .graphs import (
    BasepointError, GraphSpec, WitnessSet, build_ball, close_witness_set, is_vertex,
    mu_alpha, system_universe, worker_count,
)
from .markings import (
    Marking, complete_marking, enumerate_clean_markings, enumerate_locally_complete,
)
from .projection import Subsurface, enumerate_subsurfaces, whole_surface
from .surface import CurveSystem, SurfaceError, enumerate_systems, load_surface, standard_surface

SUITES = ('lipschitz', 'bounds', 'witness', 'mualpha', 'fit', 'rebalance')
KINDS = ('L_X', 'K_X', 'M_A', 'multiarc_curve', 'prescribed_arc', 'partial_marking')


class ConfigError(ValueError):
    """Invalid run configuration or input file."""


@dataclass
class RunConfig:
    surface: str
    spec: str
    basepoint: str = None
    radius: int = 2
    witness_bound: int = 4
    cap_bfs: int = 8
    cap_moves: int = 2
    cap_orderings: int = 24
    seed: int = 0
    out: str = 'out'

    def validate(self):
        for name in ('cap_bfs', 'cap_moves', 'cap_orderings', 'witness_bound'):
            if getattr(self, name) <= 0:
                raise ConfigError(f'{name.replace("_", "-")} must be positive')
        if self.radius < 0:
            raise ConfigError('radius must be non-negative')

    def record(self):
        """Configuration as written into every output (the output directory excluded)."""
        out = asdict(self)
        out.pop('out')
        return out


# --------------------------------------------------------------------------
# Loading


def load_surface_arg(text):
    if os.path.exists(text):
        try:
            return load_surface(text)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f'cannot read surface file {text}: {exc}') from exc
    try:
        genus, boundary = (int(x) for x in text.split(','))
    except ValueError as exc:
        raise ConfigError(f'surface must be a JSON file or "genus,boundary": {text!r}') from exc
    return standard_surface(genus, boundary)


def _load_json_arg(text):
    if os.path.exists(text):
        with open(text, encoding='utf-8') as handle:
            return json.load(handle)
    if text.lstrip().startswith('{'):
        return json.loads(text)
    return {'kind': text}


def _witnesses(surface, entry, bound):
    if entry in (None, 'all'):
        return WitnessSet.all_subsurfaces(surface, bound)
    if entry == 'whole':
        return close_witness_set([whole_surface(surface)], surface, bound)
    gens = [Subsurface.from_json(surface, g) for g in entry]
    return close_witness_set(gens, surface, bound)


def build_spec(surface, descriptor, config):
    """A GraphSpec from a descriptor dict."""
    kind = descriptor.get('kind')
    if kind not in KINDS:
        raise ConfigError(f'unknown graph kind {kind!r}; expected one of {", ".join(KINDS)}')
    weight = descriptor.get('universe_weight', 4)
    bound = descriptor.get('bound', 1)
    if kind in ('multiarc_curve', 'prescribed_arc'):
        gamma = tuple(sorted(tuple(sorted(p)) for p in descriptor.get('gamma', ())))
        if kind == 'prescribed_arc' and not gamma:
            raise ConfigError('prescribed_arc needs a non-empty gamma')
        return GraphSpec(kind, surface, bound=bound, gamma=gamma, universe_weight=weight)
    if kind == 'M_A':
        inner = descriptor.get('inner', {'kind': 'multiarc_curve', 'bound': 1, 'universe_weight': 3})
        inner_spec = build_spec(surface, inner, config)
        if inner_spec.kind not in ('multiarc_curve', 'prescribed_arc'):
            raise ConfigError('M_A needs an arc-and-curve inner graph')
        return GraphSpec('M_A', surface, inner=inner_spec, ordering_cap=config.cap_orderings,
                         universe_weight=inner_spec.universe_weight)
    X = _witnesses(surface, descriptor.get('witnesses'), config.witness_bound)
    return GraphSpec(kind, surface, bound=bound if kind == 'partial_marking' else 0,
                     witnesses=X, universe_weight=weight, move_cap=config.cap_moves)


def default_basepoint(spec):
    surface = spec.surface
    if spec.kind in ('multiarc_curve', 'prescribed_arc'):
        universe = system_universe(spec)
        if not universe:
            raise BasepointError('the enumerated universe has no vertex')
        return universe[0]
    if spec.kind == 'M_A':
        for alpha in system_universe(spec.inner):
            found = mu_alpha(alpha, spec.ordering_cap)
            if found:
                return found[0]
        raise BasepointError('no μ_α is non-empty in the inner universe')
    mu, _ = complete_marking(Marking(surface, ()))
    if spec.kind == 'K_X':
        mu = Marking.from_base(mu.base)
    return mu


def load_basepoint(spec, path):
    if path is None:
        return default_basepoint(spec)
    try:
        with open(path, encoding='utf-8') as handle:
            data = json.load(handle)
    except (OSError, ValueError) as exc:
        raise ConfigError(f'cannot read basepoint file {path}: {exc}') from exc
    if spec.uses_markings:
        return Marking.from_json(spec.surface, data)
    return CurveSystem.from_weights(spec.surface, data)


# --------------------------------------------------------------------------
# Commands


def _dump(path, data):
    os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
    with open(path, 'w', encoding='utf-8') as handle:
        json.dump(data, handle, sort_keys=True, separators=(',', ':'))
        handle.write('\n')


def _prepare(config):
    config.validate()
    surface = load_surface_arg(config.surface)
    try:
        descriptor = _load_json_arg(config.spec)
    except (OSError, ValueError) as exc:
        raise ConfigError(f'cannot read spec {config.spec!r}: {exc}') from exc
    spec = build_spec(surface, descriptor, config)
    base = load_basepoint(spec, config.basepoint)
    if not is_vertex(spec, base):
        raise BasepointError('basepoint does not satisfy the vertex predicate')
    return surface, spec, base


def _ball(config, spec, base, close=False):
    radius = min(config.radius, config.cap_bfs)
    ball = build_ball(spec, base, radius, workers=worker_count(), close_last_layer=close)
    return ball, radius < config.radius


def cmd_build(config):
    """Build the ball and write ``graph.json``."""
    surface, spec, base = _prepare(config)
    ball, capped = _ball(config, spec, base)
    data = {
        'schema_version': analysis.SCHEMA_VERSION,
        'seed': config.seed,
        'config': config.record(),
        'radius_capped': capped,
        'graph': ball.to_json(),
    }
    path = os.path.join(config.out, 'graph.json')
    _dump(path, data)
    return 0


def _stamp(summary, config):
    summary['config'] = config.record()
    summary['seed'] = config.seed
    return summary


def _write(config, report, stem):
    summary = _stamp(report.summary(), config)
    os.makedirs(config.out, exist_ok=True)
    with open(os.path.join(config.out, stem + '.csv'), 'w', encoding='utf-8') as handle:
        handle.write(analysis.rows_to_csv(getattr(report, 'rows', [])))
    _dump(os.path.join(config.out, stem + '.json'), summary)


def _suite_reports(config, suite, surface, spec, base):
    """(stem, report, counts toward exit code) for one suite."""
    seed = config.seed
    if suite == 'lipschitz':
        if spec.kind not in ('L_X', 'K_X', 'partial_marking'):
            raise ConfigError('the lipschitz suite needs a marking graph spec')
        ball, _ = _ball(config, spec, base)
        X = WitnessSet.all_subsurfaces(surface, config.witness_bound)
        return [('lipschitz', analysis.check_projection_lipschitz(ball, X, seed), True)]
    if suite == 'bounds':
        w = config.witness_bound
        out = [
            ('bounds_compat', analysis.check_compatible_bounds(
                enumerate_locally_complete(surface, w, w + 2), seed), True),
            ('bounds_completion', analysis.check_completion_budget(
                enumerate_clean_markings(surface, w, (0, 1)), seed), True),
        ]
        if spec.kind == 'M_A':
            ball, _ = _ball(config, spec, base)
            out.append(('bounds_ma_adjacency', analysis.check_ma_adjacency(ball, seed), True))
        return out
    if suite == 'witness':
        subs = enumerate_subsurfaces(surface, config.witness_bound)
        return [('witness', analysis.check_witness_classification(spec, subs, seed), True)]
    if suite == 'mualpha':
        systems = enumerate_systems(surface, spec.universe_weight, kind='mixed')
        subs = enumerate_subsurfaces(surface, config.witness_bound)
        return [('mualpha', analysis.check_witness_preservation(
            systems, subs, config.cap_orderings, seed), True)]
    if suite == 'fit':
        ball, _ = _ball(config, spec, base, close=True)
        X = spec.witnesses if spec.witnesses is not None else \
            WitnessSet.all_subsurfaces(surface, config.witness_bound)
        out = []
        for fit in analysis.fit_distance_formula(ball, X, list(range(1, 11)), seed=seed):
            out.append((f'fit_C{fit.threshold}', fit, False))
        out.append(('fit_envelope', analysis.estimate_f_M(ball, seed=seed), False))
        if ball.size >= 4:
            out.append(('fit_delta', analysis.sample_hyperbolicity(ball, 1000, seed, X), False))
        return out
    if suite == 'rebalance':
        n = max(config.radius, 2)
        path, a = analysis.twist_excursion_path(surface, [0, 3 * n, -2 * n, n, 0])
        return [('rebalance', _RebalanceReport(analysis.rebalance_report(path, a, 0)), True)]
    raise ConfigError(f'unknown suite {suite!r}')


class _RebalanceReport:
    def __init__(self, result):
        self.result = result
        self.passed = result.passed
        self.rows = [{'step': j, 'sigma': s, 'before': b, 'after': f, 'residual': r}
                     for j, (s, b, f, r) in enumerate(zip(result.sigmas, result.before,
                                                          result.after, result.residuals))]

    def summary(self):
        return self.result.summary()


def cmd_verify(config, suite):
    """Run one suite and write CSV and JSON reports; 1 when a paper-cited bound fails."""
    surface, spec, base = _prepare(config)
    failed = False
    for stem, report, binding in _suite_reports(config, suite, surface, spec, base):
        _write(config, report, stem)
        if binding and not report.passed:
            failed = True
    return 1 if failed else 0


# --------------------------------------------------------------------------
# Entry point


def _parser():
    parser = argparse.ArgumentParser(prog='mcgraphs', description=__doc__.split('\n')[0])
    sub = parser.add_subparsers(dest='command', required=True)
    for name in ('build', 'verify'):
        p = sub.add_parser(name)
        p.add_argument('--surface', required=True)
        p.add_argument('--spec', required=True)
        p.add_argument('--basepoint')
        p.add_argument('--radius', type=int, default=2)
        p.add_argument('--witness-bound', type=int, default=4)
        p.add_argument('--cap-bfs', type=int, default=8)
        p.add_argument('--cap-moves', type=int, default=2)
        p.add_argument('--cap-orderings', type=int, default=24)
        p.add_argument('--seed', type=int, default=0)
        p.add_argument('--out', default='out')
        if name == 'verify':
            p.add_argument('--suite', required=True, choices=SUITES)
    return parser


def main(argv=None):
    args = _parser().parse_args(argv)
    config = RunConfig(args.surface, args.spec, args.basepoint, args.radius, args.witness_bound,
                       args.cap_bfs, args.cap_moves, args.cap_orderings, args.seed, args.out)
    try:
        if args.command == 'build':
            return cmd_build(config)
        return cmd_verify(config, args.suite)
    except (ConfigError, BasepointError, SurfaceError, analysis.PathError) as exc:
        print(json.dumps({'error': type(exc).__name__, 'message': str(exc)}), file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
